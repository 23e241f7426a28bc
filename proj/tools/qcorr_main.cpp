// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: compute, bell, chain, verify, sweep,
// superdiscord. Payload goes to stdout (or --out); errors go to stderr as
// single-line JSON objects. Exit codes: 0 success, 1 verification failed,
// 2 parse error, 3 state/argument validation error, 4 convergence
// failure, 64 usage error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcorr/qcorr.hpp"

namespace {

using qcorr::Json;

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  double tolerance = 1e-6;
  qcorr::OptimizerOptions optimizer;
  std::string grid_spec;
  std::string format = "json";
  std::string out_path;
  bool quiet = false;
};

int exit_code_for(const qcorr::Error& e) {
  switch (e.code()) {
    case qcorr::ErrorCode::ParseError:
      return 2;
    case qcorr::ErrorCode::ConvergenceFailure:
      return 4;
    default:
      return 3;
  }
}

void emit_error(int code, const std::string& message,
                const std::string& kind) {
  Json j;
  j["code"] = code;
  j["message"] = message;
  j["context"] = {{"error", kind}};
  std::cerr << j.dump() << "\n";
}

void note(const GlobalOptions& g, const std::string& line) {
  if (!g.quiet) std::cerr << line << "\n";
}

void write_payload(const GlobalOptions& g, const std::string& payload) {
  if (!g.out_path.empty()) {
    std::ofstream out(g.out_path);
    if (!out) {
      throw qcorr::Error(qcorr::ErrorCode::ParseError,
                         "cannot open for writing: " + g.out_path);
    }
    out << payload;
  } else {
    std::cout << payload;
  }
}

double parse_strength(const std::string& text) {
  std::string lower = text;
  std::transform(lower.begin(), lower.end(), lower.begin(), ::tolower);
  if (lower == "inf" || lower == "infinity") {
    return std::numeric_limits<double>::infinity();
  }
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw CLI::ValidationError("strength",
                               "expected a real number or \"inf\": " + text);
  }
}

void apply_grid_spec(GlobalOptions& g) {
  if (g.grid_spec.empty()) return;
  std::size_t n_theta = 0, n_phi = 0;
  char sep = 0;
  std::istringstream in(g.grid_spec);
  if (!(in >> n_theta >> sep >> n_phi) || (sep != 'x' && sep != 'X') ||
      !in.eof() || n_theta < 2 || n_phi < 1) {
    throw CLI::ValidationError("--grid",
                               "expected <n_theta>x<n_phi>, e.g. 64x128");
  }
  g.optimizer.theta_points = n_theta;
  g.optimizer.phi_points = n_phi;
}

Json metadata_json(const GlobalOptions& g) {
  return qcorr::to_json(qcorr::make_metadata(g.optimizer, g.seed));
}

std::string metadata_csv_comments(const GlobalOptions& g) {
  const qcorr::RunMetadata meta = qcorr::make_metadata(g.optimizer, g.seed);
  std::ostringstream out;
  out << "# tool_version: " << meta.tool_version << "\n";
  if (meta.seed) out << "# seed: " << *meta.seed << "\n";
  out << "# prng_algorithm: " << meta.prng_algorithm << "\n";
  out << "# grid: " << meta.grid_theta << "x" << meta.grid_phi << "\n";
  out << "# optimizer_step_tolerance: "
      << qcorr::format_double(meta.tolerances.at("optimizer_step")) << "\n";
  out << "# timestamp: " << meta.timestamp << "\n";
  return out.str();
}

// ---------------------------------------------------------------- compute
int run_compute(const GlobalOptions& g, const std::string& state_file,
                const std::string& strength_text) {
  const double x = parse_strength(strength_text);
  const qcorr::DensityMatrix rho = qcorr::read_state_file(state_file);
  const qcorr::CorrelationReport report =
      qcorr::correlation_report(rho, x, g.optimizer);

  if (g.format == "csv") {
    std::ostringstream out;
    out << metadata_csv_comments(g);
    out << "tqd,qcc,overlap_factor,residual,theta_tqd,phi_tqd,theta_qcc,"
           "phi_qcc\n";
    out << qcorr::format_double(report.tqd) << ","
        << qcorr::format_double(report.qcc) << ","
        << qcorr::format_double(report.overlap_factor) << ","
        << qcorr::format_double(report.residual) << ","
        << qcorr::format_double(report.basis_tqd.theta()) << ","
        << qcorr::format_double(report.basis_tqd.phi()) << ","
        << qcorr::format_double(report.basis_qcc.theta()) << ","
        << qcorr::format_double(report.basis_qcc.phi()) << "\n";
    write_payload(g, out.str());
  } else {
    Json j = qcorr::to_json(report);
    j["strength"] = strength_text;
    j["metadata"] = metadata_json(g);
    write_payload(g, j.dump(2) + "\n");
  }
  std::ostringstream summary;
  summary << "tqd=" << report.tqd << " qcc=" << report.qcc
          << " residual=" << report.residual;
  note(g, summary.str());
  return 0;
}

// ------------------------------------------------------------------- bell
int run_bell(const GlobalOptions& g, double c1, double c2, double c3,
             const std::string& strength_text) {
  const double x = parse_strength(strength_text);
  const qcorr::BellDiagonalParams params{c1, c2, c3};
  const double cf_tqd = qcorr::bell_tqd(params);
  const double cf_qcc = qcorr::bell_qcc(params, x);

  const qcorr::DensityMatrix rho = qcorr::bell_diagonal(params);
  const qcorr::OptimizationResult num_tqd = qcorr::tqd(rho, g.optimizer);
  const qcorr::OptimizationResult num_qcc = qcorr::qcc(rho, x, g.optimizer);

  Json j;
  j["params"] = {{"c1", c1}, {"c2", c2}, {"c3", c3}};
  j["strength"] = strength_text;
  j["closed_form"] = {{"tqd", cf_tqd}, {"qcc", cf_qcc}};
  j["numeric"] = {{"tqd", num_tqd.value},
                  {"qcc", num_qcc.value},
                  {"basis_tqd", qcorr::to_json(num_tqd.basis)},
                  {"basis_qcc", qcorr::to_json(num_qcc.basis)}};
  j["abs_difference"] = {{"tqd", std::abs(cf_tqd - num_tqd.value)},
                         {"qcc", std::abs(cf_qcc - num_qcc.value)}};
  j["metadata"] = metadata_json(g);
  write_payload(g, j.dump(2) + "\n");

  std::ostringstream summary;
  summary << "closed-form tqd=" << cf_tqd << " numeric tqd=" << num_tqd.value
          << " |diff|=" << std::abs(cf_tqd - num_tqd.value);
  note(g, summary.str());
  return 0;
}

// ------------------------------------------------------------------ chain
int run_chain_cmd(const GlobalOptions& g, const std::string& state_file,
                  const std::string& strength_text, std::size_t steps) {
  const double x = parse_strength(strength_text);
  const qcorr::DensityMatrix rho = qcorr::read_state_file(state_file);
  const qcorr::ChainReport report =
      qcorr::run_chain(rho, x, steps, g.optimizer);

  std::ostringstream out;
  out << metadata_csv_comments(g);
  out << "# strength: " << qcorr::format_double(report.strength) << "\n";
  out << "# predicted_decay: " << qcorr::format_double(report.predicted_decay)
      << "\n";
  out << "n,tqd_n,qcc_n,partial_sum,predicted_tqd_n,predicted_qcc_n\n";
  const double q = report.predicted_decay;
  for (const qcorr::ChainStep& s : report.steps) {
    const double qn = std::pow(q, static_cast<double>(s.n));
    out << s.n << "," << qcorr::format_double(s.tqd_n) << ","
        << qcorr::format_double(s.qcc_n) << ","
        << qcorr::format_double(s.partial_sum) << ","
        << qcorr::format_double(qn * report.initial_tqd) << ","
        << qcorr::format_double((1.0 - q) * qn * report.initial_tqd) << "\n";
  }
  write_payload(g, out.str());
  note(g, "chain of " + std::to_string(report.steps.size()) +
              " steps, initial tqd " + std::to_string(report.initial_tqd));
  return 0;
}

// ----------------------------------------------------------------- verify
int run_verify(const GlobalOptions& g, const std::string& theorem,
               std::size_t trials, bool trials_given, std::size_t dim_b,
               const std::vector<double>& strengths) {
  const std::uint64_t seed = g.seed.value_or(1);
  qcorr::VerificationReport report;
  if (theorem == "1") {
    report = qcorr::verify_theorem1(trials, seed, strengths, g.tolerance,
                                    dim_b, g.optimizer);
  } else if (theorem == "2") {
    report = qcorr::verify_theorem2(trials, seed, strengths, g.tolerance,
                                    dim_b, g.optimizer);
  } else if (theorem == "3") {
    report = qcorr::verify_theorem3(trials, seed, strengths, g.tolerance,
                                    dim_b, g.optimizer);
  } else if (theorem == "4") {
    report = qcorr::verify_theorem4(trials, seed,
                                    qcorr::default_coefficient_sets(),
                                    g.tolerance, dim_b, g.optimizer);
  } else if (theorem == "corollary") {
    // Chains are expensive; default to a small corpus unless asked.
    const std::size_t states = trials_given ? trials : 3;
    const std::vector<double> xs = {0.5, 0.2, 0.1, 0.05};
    report.theorem = "corollary";
    report.trials = states;
    report.tolerance = g.tolerance;
    report.passed = true;
    for (std::size_t t = 0; t < states; ++t) {
      const qcorr::DensityMatrix rho =
          qcorr::random_state(dim_b, 2 * dim_b, seed + t);
      const qcorr::VerificationReport one =
          qcorr::verify_corollary_sum(rho, xs, g.tolerance, 25, g.optimizer);
      if (one.max_abs_error > report.max_abs_error) {
        report.max_abs_error = one.max_abs_error;
        report.worst_case = one.worst_case;
        report.worst_case.seed = seed + t;
        report.deviation_trend = one.deviation_trend;
      }
      report.passed = report.passed && one.passed;
    }
  } else {
    throw CLI::ValidationError("--theorem",
                               "expected 1, 2, 3, 4 or corollary");
  }

  Json j = qcorr::to_json(report);
  j["metadata"] = metadata_json(g);
  write_payload(g, j.dump(2) + "\n");
  std::ostringstream summary;
  summary << "theorem " << report.theorem << ": "
          << (report.passed ? "PASS" : "FAIL")
          << " (max |err| = " << report.max_abs_error << ", tol "
          << report.tolerance << ")";
  note(g, summary.str());
  return report.passed ? 0 : 1;
}

// ------------------------------------------------------------------ sweep
int run_sweep(const GlobalOptions& g, const std::string& state_file,
              double x_min, double x_max, std::size_t points,
              bool log_spacing) {
  if (!(x_min >= 0.0) || !(x_min < x_max) || points < 2) {
    throw CLI::ValidationError(
        "sweep", "need 0 <= x_min < x_max and at least 2 points");
  }
  if (log_spacing && x_min <= 0.0) {
    throw CLI::ValidationError("--log", "log spacing needs x_min > 0");
  }
  const qcorr::DensityMatrix rho = qcorr::read_state_file(state_file);
  const qcorr::OptimizationResult t = qcorr::tqd(rho, g.optimizer);

  std::ostringstream out;
  out << metadata_csv_comments(g);
  out << "# spacing: " << (log_spacing ? "log" : "linear") << "\n";
  out << "x,overlap_factor,tqd,qcc,residual\n";
  for (std::size_t i = 0; i < points; ++i) {
    const double frac =
        static_cast<double>(i) / static_cast<double>(points - 1);
    const double x = log_spacing
                         ? x_min * std::pow(x_max / x_min, frac)
                         : x_min + (x_max - x_min) * frac;
    const double w = qcorr::qcc(rho, x, g.optimizer).value;
    out << qcorr::format_double(x) << ","
        << qcorr::format_double(qcorr::overlap_factor(x)) << ","
        << qcorr::format_double(t.value) << "," << qcorr::format_double(w)
        << "," << qcorr::format_double(t.value - w) << "\n";
  }
  write_payload(g, out.str());
  note(g, "swept " + std::to_string(points) + " strengths");
  return 0;
}

// ----------------------------------------------------------- superdiscord
int run_superdiscord(const GlobalOptions& g, const std::string& state_file,
                     const std::string& strength_text) {
  const double x = parse_strength(strength_text);
  const qcorr::DensityMatrix rho = qcorr::read_state_file(state_file);
  const qcorr::OptimizationResult sd =
      qcorr::super_quantum_discord(rho, x, g.optimizer);
  const qcorr::CorrelationReport context =
      qcorr::correlation_report(rho, x, g.optimizer);

  Json j;
  j["super_quantum_discord"] = sd.value;
  j["basis"] = qcorr::to_json(sd.basis);
  j["strength"] = strength_text;
  j["context"] = qcorr::to_json(context);
  j["metadata"] = metadata_json(g);
  write_payload(g, j.dump(2) + "\n");
  note(g, "sd=" + std::to_string(sd.value));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Trace-norm quantum correlation toolkit: correlation cost of weak "
      "measurements, trace-norm discord and super quantum discord of "
      "2 x d bipartite states"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", qcorr::kVersion);

  GlobalOptions g;
  app.add_option("--seed", g.seed, "PRNG seed for sampled states");
  app.add_option("--tolerance", g.tolerance,
                 "verification tolerance (default 1e-6)");
  app.add_option("--grid", g.grid_spec,
                 "optimizer grid as <n_theta>x<n_phi> (default 64x128)");
  app.add_option("--format", g.format, "output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", g.out_path, "write payload to this file");
  app.add_flag("--quiet", g.quiet, "suppress the stderr summary line");

  // compute
  std::string state_file, strength = "1";
  CLI::App* compute =
      app.add_subcommand("compute", "tqd, qcc and residual of a state");
  compute->add_option("state_file", state_file, "JSON state file")
      ->required();
  compute->add_option("--strength", strength,
                      "measurement strength x (real or \"inf\")");

  // bell
  double c1 = 0, c2 = 0, c3 = 0;
  std::string bell_strength = "1";
  CLI::App* bell = app.add_subcommand(
      "bell", "closed forms vs numeric optimizer for Bell-diagonal states");
  bell->add_option("c1", c1, "coefficient c1")->required();
  bell->add_option("c2", c2, "coefficient c2")->required();
  bell->add_option("c3", c3, "coefficient c3")->required();
  bell->add_option("--strength", bell_strength, "measurement strength");

  // chain
  std::string chain_file, chain_strength = "1";
  std::size_t chain_steps = 10;
  CLI::App* chain = app.add_subcommand(
      "chain", "repeated weak measurements at the per-step optimal basis");
  chain->add_option("state_file", chain_file, "JSON state file")->required();
  chain->add_option("--strength", chain_strength, "measurement strength");
  chain->add_option("--steps", chain_steps, "number of chain steps")
      ->check(CLI::PositiveNumber);

  // verify
  std::string theorem;
  std::size_t trials = 50, dim_b = 2;
  std::vector<double> strengths = {0.1, 0.5, 1.0, 2.0, 5.0};
  CLI::App* verify = app.add_subcommand(
      "verify", "randomized verification of the correlation identities");
  verify->add_option("--theorem", theorem, "1, 2, 3, 4 or corollary")
      ->required();
  CLI::Option* trials_opt =
      verify->add_option("--trials", trials, "number of random states");
  verify->add_option("--dim-b", dim_b, "dimension of subsystem B")
      ->check(CLI::Range(std::size_t{2}, std::size_t{32}));
  verify->add_option("--strengths", strengths,
                     "strength grid for theorems 1-3")
      ->delimiter(',');

  // sweep
  std::string sweep_file;
  double x_min = 0.0, x_max = 5.0;
  std::size_t sweep_points = 11;
  bool log_spacing = false;
  CLI::App* sweep =
      app.add_subcommand("sweep", "qcc as a function of strength, CSV");
  sweep->add_option("state_file", sweep_file, "JSON state file")->required();
  sweep->add_option("--x-min", x_min, "smallest strength");
  sweep->add_option("--x-max", x_max, "largest strength");
  sweep->add_option("--points", sweep_points, "number of samples");
  sweep->add_flag("--log", log_spacing, "log-spaced strengths");

  // superdiscord
  std::string sd_file, sd_strength = "1";
  CLI::App* superdiscord = app.add_subcommand(
      "superdiscord", "entropic super quantum discord of a state");
  superdiscord->add_option("state_file", sd_file, "JSON state file")
      ->required();
  superdiscord->add_option("--strength", sd_strength, "measurement strength");

  try {
    app.parse(argc, argv);
    apply_grid_spec(g);

    if (compute->parsed()) return run_compute(g, state_file, strength);
    if (bell->parsed()) return run_bell(g, c1, c2, c3, bell_strength);
    if (chain->parsed())
      return run_chain_cmd(g, chain_file, chain_strength, chain_steps);
    if (verify->parsed())
      return run_verify(g, theorem, trials, trials_opt->count() > 0, dim_b,
                        strengths);
    if (sweep->parsed())
      return run_sweep(g, sweep_file, x_min, x_max, sweep_points,
                       log_spacing);
    if (superdiscord->parsed())
      return run_superdiscord(g, sd_file, sd_strength);
    return 64;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error(64, e.what(), "UsageError");
    return 64;
  } catch (const qcorr::Error& e) {
    const int code = exit_code_for(e);
    emit_error(code, e.what(), e.code_name());
    return code;
  } catch (const std::exception& e) {
    emit_error(70, e.what(), "InternalError");
    return 70;
  }
}
