#pragma once

// Latent class regression: one-step maximum-likelihood estimators built on
// Polya-gamma nested expectation-maximization, the Newton/MM competitors, the
// classical three-step routine, and a multi-start benchmark harness.

#include "lcr/benchmark.hpp"
#include "lcr/errors.hpp"
#include "lcr/estimators.hpp"
#include "lcr/io.hpp"
#include "lcr/loglik.hpp"
#include "lcr/polya_gamma.hpp"
#include "lcr/rng.hpp"
#include "lcr/simulate.hpp"
#include "lcr/types.hpp"
