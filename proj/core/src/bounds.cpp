#include "sharpsens/bounds.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "sharpsens/error.hpp"

namespace sharpsens {
namespace {

void check_lambda_x(double lambda, double x_norm) {
  if (!std::isfinite(lambda)) {
    throw Error(ErrorCode::NonFiniteLambda, "lambda must be finite");
  }
  if (!(x_norm >= 0.0 && x_norm <= 1.0)) {
    throw Error(ErrorCode::InvalidXNorm,
                "normalized covariate must lie in [0, 1], got " + std::to_string(x_norm));
  }
}

void check_gamma(double gamma) {
  if (!(gamma > 1.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::InvalidGamma,
                "gamma must be finite and > 1, got " + std::to_string(gamma));
  }
}

// |beta' x_i + gamma| for every set.
std::vector<double> set_exponents(const ModelParams& params, const MatchedSample& sample) {
  if (params.beta.size() != sample.covariate_count()) {
    throw Error(ErrorCode::DimensionMismatch,
                "beta has " + std::to_string(params.beta.size()) + " entries, sample has " +
                    std::to_string(sample.covariate_count()) + " covariates");
  }
  std::vector<double> out;
  out.reserve(sample.size());
  for (const auto& set : sample.sets()) {
    if (set.common_covariates.size() != params.beta.size()) {
      throw Error(ErrorCode::DimensionMismatch, "set " + set.id + " has malformed covariates");
    }
    double lin = params.gamma_coef;
    for (std::size_t k = 0; k < params.beta.size(); ++k) {
      lin += params.beta[k] * set.common_covariates[k];
    }
    out.push_back(std::abs(lin));
  }
  return out;
}

std::vector<std::size_t> argmax_sorted(const std::vector<double>& e, const MatchedSample& sample) {
  std::vector<std::size_t> idx;
  if (e.empty()) return idx;
  const double top = *std::max_element(e.begin(), e.end());
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == top) idx.push_back(i);
  }
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return set_id_less(sample.set(a).id, sample.set(b).id);
  });
  return idx;
}

}  // namespace

double bound_exponent(double lambda, double x_norm) {
  check_lambda_x(lambda, x_norm);
  if (std::abs(lambda) <= 1.0) {
    return std::abs((1.0 - x_norm) + x_norm * lambda);
  }
  return std::abs((1.0 - x_norm) / lambda + x_norm);
}

bool attains_gamma(double lambda, double x_norm) {
  return bound_exponent(lambda, x_norm) == 1.0;
}

double gamma_lambda(double gamma, double lambda, double x_norm) {
  check_gamma(gamma);
  const double e = bound_exponent(lambda, x_norm);
  if (e == 1.0) return gamma;
  return std::pow(gamma, e);
}

double gamma_lambda_binary(double gamma, double lambda, int x) {
  check_gamma(gamma);
  if (!std::isfinite(lambda)) {
    throw Error(ErrorCode::NonFiniteLambda, "lambda must be finite");
  }
  if (x != 0 && x != 1) {
    throw Error(ErrorCode::InvalidXNorm, "binary covariate must be 0 or 1");
  }
  const double a = std::abs(lambda);
  if (a == 1.0) return gamma;
  if (a < 1.0) return x == 0 ? gamma : std::pow(gamma, a);
  return x == 1 ? gamma : std::pow(gamma, 1.0 / a);
}

SingleInteraction single_interaction_from(double gamma, double lambda) {
  if (!(gamma >= 1.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::InvalidGamma, "gamma must be finite and >= 1");
  }
  if (!std::isfinite(lambda)) {
    throw Error(ErrorCode::NonFiniteLambda, "lambda must be finite");
  }
  const double log_gamma = std::log(gamma);
  if (std::abs(lambda) <= 1.0) {
    return {(lambda - 1.0) * log_gamma, log_gamma};
  }
  return {(1.0 - 1.0 / lambda) * log_gamma, log_gamma / lambda};
}

double lambda_of(const SingleInteraction& m) {
  if (m.gamma_coef == 0.0) {
    throw Error(ErrorCode::NonFiniteLambda, "lambda is undefined when gamma_coef == 0");
  }
  return (m.beta_tilde + m.gamma_coef) / m.gamma_coef;
}

ImpliedGamma implied_gamma(const ModelParams& params, const MatchedSample& sample) {
  const auto e = set_exponents(params, sample);
  ImpliedGamma out;
  out.attaining = argmax_sorted(e, sample);
  if (!out.attaining.empty()) out.gamma = std::exp(e[out.attaining.front()]);
  return out;
}

bool LoosenessReport::any_loose() const noexcept {
  return std::any_of(sets.begin(), sets.end(), [](const LoosenessEntry& e) { return e.is_loose; });
}

LoosenessReport diagnose_looseness(const ModelParams& params, const MatchedSample& sample) {
  const auto e = set_exponents(params, sample);
  LoosenessReport report;
  report.attaining = argmax_sorted(e, sample);
  if (report.attaining.empty()) return report;
  const double top = e[report.attaining.front()];
  report.implied_gamma = std::exp(top);
  report.sets.reserve(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    report.sets.push_back({sample.set(i).id, std::exp(e[i]), e[i] < top});
  }
  for (auto i : report.attaining) {
    report.attaining_covariates.push_back(sample.set(i).common_covariates);
  }
  return report;
}

bool set_id_less(const std::string& a, const std::string& b) {
  long long ia = 0;
  long long ib = 0;
  const auto ra = std::from_chars(a.data(), a.data() + a.size(), ia);
  const auto rb = std::from_chars(b.data(), b.data() + b.size(), ib);
  const bool na = ra.ec == std::errc{} && ra.ptr == a.data() + a.size();
  const bool nb = rb.ec == std::errc{} && rb.ptr == b.data() + b.size();
  if (na && nb && ia != ib) return ia < ib;
  if (na != nb) return na;  // numeric ids first
  return a < b;
}

}  // namespace sharpsens
