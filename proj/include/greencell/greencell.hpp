#pragma once

// Umbrella header: analytical coverage, area power and energy-efficiency
// models for cache-enabled cellular deployments, plus their Monte Carlo
// cross-validation and experiment drivers.

#include "greencell/cache.hpp"
#include "greencell/config.hpp"
#include "greencell/coverage.hpp"
#include "greencell/experiments.hpp"
#include "greencell/metrics.hpp"
#include "greencell/montecarlo.hpp"
#include "greencell/network.hpp"
#include "greencell/optimize.hpp"
#include "greencell/quadrature.hpp"
#include "greencell/rng.hpp"
#include "greencell/sweep.hpp"
#include "greencell/validation.hpp"
