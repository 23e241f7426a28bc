// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "qcorr/config.hpp"
#include "qcorr/discord.hpp"
#include "qcorr/error.hpp"
#include "qcorr/states.hpp"
#include "qcorr/theorems.hpp"

namespace qcorr {

using Json = nlohmann::ordered_json;

// %.17g: enough digits to reproduce any double exactly, locale-free.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Reproducibility header attached to every serialized result.
struct RunMetadata {
  std::string tool_version = kVersion;
  std::optional<std::uint64_t> seed;
  std::string prng_algorithm = kPrngAlgorithm;
  std::size_t grid_theta = 0;
  std::size_t grid_phi = 0;
  std::map<std::string, double> tolerances;
  std::string timestamp;  // ISO-8601 UTC
};

inline std::string utc_timestamp_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

inline RunMetadata make_metadata(const OptimizerOptions& opt,
                                 std::optional<std::uint64_t> seed) {
  RunMetadata meta;
  meta.seed = seed;
  meta.grid_theta = opt.theta_points;
  meta.grid_phi = opt.phi_points;
  meta.tolerances = {{"hermitian", kHermitianTol},
                     {"trace", kTraceTol},
                     {"psd", kPsdTol},
                     {"optimizer_step", opt.step_tolerance}};
  meta.timestamp = utc_timestamp_now();
  return meta;
}

inline Json to_json(const RunMetadata& meta) {
  Json j;
  j["tool_version"] = meta.tool_version;
  if (meta.seed) j["seed"] = *meta.seed;
  j["prng_algorithm"] = meta.prng_algorithm;
  j["grid_spec"] = {{"theta_points", meta.grid_theta},
                    {"phi_points", meta.grid_phi}};
  j["tolerances"] = meta.tolerances;
  j["timestamp"] = meta.timestamp;
  return j;
}

inline Json to_json(const BlochProjectorPair& basis) {
  return Json{{"theta", basis.theta()}, {"phi", basis.phi()}};
}

inline Json to_json(const CorrelationReport& report) {
  Json j;
  j["tqd"] = report.tqd;
  j["qcc"] = report.qcc;
  j["overlap_factor"] = report.overlap_factor;
  j["residual"] = report.residual;
  j["basis_tqd"] = to_json(report.basis_tqd);
  j["basis_qcc"] = to_json(report.basis_qcc);
  return j;
}

inline Json to_json(const VerificationReport& report) {
  Json j;
  j["theorem"] = report.theorem;
  j["trials"] = report.trials;
  j["max_abs_error"] = report.max_abs_error;
  j["tolerance"] = report.tolerance;
  j["passed"] = report.passed;
  j["worst_case"] = {{"seed", report.worst_case.seed},
                     {"x", report.worst_case.x},
                     {"basis", to_json(report.worst_case.basis)}};
  if (!report.deviation_trend.empty()) {
    Json trend = Json::array();
    for (const auto& [x, dev] : report.deviation_trend) {
      trend.push_back({{"x", x}, {"deviation", dev}});
    }
    j["deviation_trend"] = trend;
  }
  return j;
}

inline Json to_json(const ChainReport& report) {
  Json j;
  j["strength"] = report.strength;
  j["predicted_decay"] = report.predicted_decay;
  j["initial_tqd"] = report.initial_tqd;
  Json steps = Json::array();
  for (const ChainStep& s : report.steps) {
    steps.push_back({{"n", s.n},
                     {"tqd_n", s.tqd_n},
                     {"qcc_n", s.qcc_n},
                     {"partial_sum", s.partial_sum}});
  }
  j["steps"] = steps;
  return j;
}

// State file schema: {"dimB": d, "matrix": [[[re, im], ...], ...]},
// row-major, one [re, im] pair per entry.
inline DensityMatrix state_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dimB") || !j.contains("matrix")) {
    throw Error(ErrorCode::ParseError,
                "state object needs \"dimB\" and \"matrix\" fields");
  }
  if (!j["dimB"].is_number_integer()) {
    throw Error(ErrorCode::ParseError, "\"dimB\" must be an integer");
  }
  const std::size_t dim_b = j["dimB"].get<std::size_t>();
  const Json& rows = j["matrix"];
  if (!rows.is_array()) {
    throw Error(ErrorCode::ParseError, "\"matrix\" must be an array of rows");
  }
  const std::size_t dim = rows.size();
  ComplexMatrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const Json& row = rows[i];
    if (!row.is_array() || row.size() != dim) {
      throw Error(ErrorCode::ParseError,
                  "matrix row " + std::to_string(i) + " is not an array of " +
                      std::to_string(dim) + " entries");
    }
    for (std::size_t k = 0; k < dim; ++k) {
      const Json& entry = row[k];
      if (!entry.is_array() || entry.size() != 2 ||
          !entry[0].is_number() || !entry[1].is_number()) {
        throw Error(ErrorCode::ParseError,
                    "matrix entry (" + std::to_string(i) + ", " +
                        std::to_string(k) + ") is not an [re, im] pair");
      }
      m(i, k) = Complex(entry[0].get<double>(), entry[1].get<double>());
    }
  }
  return DensityMatrix::from_matrix(m, dim_b);
}

inline DensityMatrix read_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::ParseError, "cannot open state file: " + path);
  }
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError,
                "malformed JSON in " + path + ": " + e.what());
  }
  return state_from_json(j);
}

// Writes the state schema with full double precision (17 significant
// digits), independent of the JSON library's number formatting.
inline void write_state_json(std::ostream& out, const DensityMatrix& rho) {
  const ComplexMatrix& m = rho.matrix();
  out << "{\"dimB\": " << rho.dim_b() << ", \"matrix\": [";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out << (i == 0 ? "\n  [" : "  [");
    for (std::size_t k = 0; k < m.cols(); ++k) {
      const Complex z = m(i, k);
      out << "[" << format_double(z.real()) << ", "
          << format_double(z.imag()) << "]";
      if (k + 1 < m.cols()) out << ", ";
    }
    out << "]" << (i + 1 < m.rows() ? ",\n" : "\n");
  }
  out << "]}\n";
}

inline void write_state_file(const std::string& path,
                             const DensityMatrix& rho) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::ParseError, "cannot open for writing: " + path);
  }
  write_state_json(out, rho);
}

}  // namespace qcorr
