#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sharpsens/model.hpp"

namespace sharpsens {

/// Exponent e in Gamma_{lambda,i} = Gamma^e, always in [0, 1].
///
/// Written as |(1 - x) a + x b| with (a, b) = (1, lambda) when |lambda| <= 1
/// and (1/lambda, 1) otherwise, so the endpoints x = 0 and x = 1 are exact.
double bound_exponent(double lambda, double x_norm);

/// True when the per-set bound equals Gamma: lambda == 1, or |lambda| <= 1 at
/// x == 0, or |lambda| >= 1 at x == 1. Decided on the exponent, not on the
/// powered value.
bool attains_gamma(double lambda, double x_norm);

/// Sharper per-set odds-ratio bound for a set whose interaction covariate
/// normalizes to x_norm. Requires gamma > 1, finite lambda, x_norm in [0, 1].
double gamma_lambda(double gamma, double lambda, double x_norm);

/// Closed form of gamma_lambda() for a binary interaction covariate.
double gamma_lambda_binary(double gamma, double lambda, int x);

/// Coefficients of the interaction logit model: beta multiplies x * u and
/// gamma_coef multiplies u. The nuisance g(x) is never represented.
struct ModelParams {
  std::vector<double> beta;
  double gamma_coef = 0.0;
};

/// Single-interaction coefficients (beta on the normalized covariate).
struct SingleInteraction {
  double beta_tilde = 0.0;
  double gamma_coef = 0.0;
};

/// Canonical model coefficients reproducing the per-set bounds of
/// (gamma, lambda): gamma_coef = ln Gamma, beta = (lambda - 1) ln Gamma for
/// |lambda| <= 1; gamma_coef = ln Gamma / lambda, beta = (1 - 1/lambda) ln Gamma
/// otherwise.
SingleInteraction single_interaction_from(double gamma, double lambda);

/// lambda = (beta + gamma) / gamma. Throws NonFiniteLambda when gamma == 0.
double lambda_of(const SingleInteraction& m);

struct ImpliedGamma {
  double gamma = 1.0;
  std::vector<std::size_t> attaining;  // set indices, ordered by set id
};

/// Gamma = max_i exp(|beta' x_i + gamma|) together with every maximizing set.
ImpliedGamma implied_gamma(const ModelParams& params, const MatchedSample& sample);

struct LoosenessEntry {
  std::string set_id;
  double upsilon = 1.0;
  bool is_loose = false;
};

struct LoosenessReport {
  std::vector<LoosenessEntry> sets;
  std::vector<std::size_t> attaining;
  std::vector<std::vector<double>> attaining_covariates;
  double implied_gamma = 1.0;

  bool any_loose() const noexcept;
};

/// Per-set true odds-ratio bound Upsilon_i = exp(|beta' x_i + gamma|) and
/// whether it falls strictly below the implied Gamma.
LoosenessReport diagnose_looseness(const ModelParams& params, const MatchedSample& sample);

/// Orders set ids numerically when both parse as integers, lexicographically
/// otherwise.
bool set_id_less(const std::string& a, const std::string& b);

}  // namespace sharpsens
