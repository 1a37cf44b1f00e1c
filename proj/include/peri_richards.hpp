#pragma once

// Umbrella header for the peri_richards library.

#include "peri_richards/analysis.hpp"
#include "peri_richards/chebyshev.hpp"
#include "peri_richards/cli.hpp"
#include "peri_richards/config.hpp"
#include "peri_richards/errors.hpp"
#include "peri_richards/output.hpp"
#include "peri_richards/peridynamic_operator.hpp"
#include "peri_richards/quadrature.hpp"
#include "peri_richards/scenario.hpp"
#include "peri_richards/soil.hpp"
#include "peri_richards/time_stepper.hpp"
