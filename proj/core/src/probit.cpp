#include "hmpsbm/probit.hpp"

#include <cmath>
#include <numbers>

namespace hmpsbm {
namespace {

constexpr double kTailCutoff = -8.0;
constexpr int kContinuedFractionTerms = 80;
const double kLogSqrt2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

// Mills ratio R(t) = (1 - Phi(t)) / pdf(t) for t >= 8, backward-evaluated
// continued fraction t + 1/(t + 2/(t + 3/(t + ...))).
double mills_ratio(double t) {
  double f = t;
  for (int k = kContinuedFractionTerms; k >= 1; --k) f = t + k / f;
  return 1.0 / f;
}

}  // namespace

double normal_pdf(double s) { return std::exp(-0.5 * s * s - kLogSqrt2Pi); }

double normal_cdf(double s) { return 0.5 * std::erfc(-s * std::numbers::sqrt2 / 2.0); }

double log_normal_cdf(double s) {
  if (s < kTailCutoff) {
    return -0.5 * s * s - kLogSqrt2Pi + std::log(mills_ratio(-s));
  }
  if (s > 0.0) return std::log1p(-0.5 * std::erfc(s * std::numbers::sqrt2 / 2.0));
  return std::log(normal_cdf(s));
}

LogCdfDerivs log_cdf_derivs(double s) {
  LogCdfDerivs out{};
  if (s < kTailCutoff) {
    const double r = mills_ratio(-s);
    out.value = -0.5 * s * s - kLogSqrt2Pi + std::log(r);
    out.d1 = 1.0 / r;
  } else {
    const double cdf = normal_cdf(s);
    out.value = s > 0.0 ? std::log1p(-0.5 * std::erfc(s * std::numbers::sqrt2 / 2.0)) : std::log(cdf);
    out.d1 = normal_pdf(s) / cdf;
  }
  out.d2 = -out.d1 * (s + out.d1);
  return out;
}

LogCdfDerivs log_ccdf_derivs(double s) {
  const LogCdfDerivs h = log_cdf_derivs(-s);
  return {h.value, -h.d1, h.d2};
}

ProbitPair log_cdf_pair(double s) {
  if (s < 0.0) {
    const ProbitPair q = log_cdf_pair(-s);
    return {{q.g.value, -q.g.d1, q.g.d2}, {q.h.value, -q.h.d1, q.h.d2}};
  }
  // s >= 0: the small tail is 1 - Phi(s) = Phi(-s).
  const double pdf = normal_pdf(s);
  double small;
  double log_small;
  double ratio;  // pdf / small
  if (-s < kTailCutoff) {
    const double r = mills_ratio(s);
    small = pdf * r;
    log_small = -0.5 * s * s - kLogSqrt2Pi + std::log(r);
    ratio = 1.0 / r;
  } else {
    small = 0.5 * std::erfc(s * std::numbers::sqrt2 / 2.0);
    log_small = std::log(small);
    ratio = pdf / small;
  }
  ProbitPair out{};
  out.h.value = std::log1p(-small);
  out.h.d1 = pdf / (1.0 - small);
  out.h.d2 = -out.h.d1 * (s + out.h.d1);
  out.g.value = log_small;
  out.g.d1 = -ratio;
  out.g.d2 = -ratio * (-s + ratio);
  return out;
}

}  // namespace hmpsbm
