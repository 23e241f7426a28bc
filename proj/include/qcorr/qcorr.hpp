// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "qcorr/bell.hpp"
#include "qcorr/complex_matrix.hpp"
#include "qcorr/config.hpp"
#include "qcorr/discord.hpp"
#include "qcorr/error.hpp"
#include "qcorr/io.hpp"
#include "qcorr/linalg.hpp"
#include "qcorr/measurement.hpp"
#include "qcorr/states.hpp"
#include "qcorr/theorems.hpp"
