#pragma once

namespace hmpsbm {

/// Value and first two derivatives of a scalar function at one point.
struct LogCdfDerivs {
  double value;
  double d1;
  double d2;
};

double normal_pdf(double s);
/// Standard normal CDF via erfc.
double normal_cdf(double s);

/// log Phi(s). Uses erfc for s >= -8 and the Mills-ratio continued fraction
/// below that, so it stays finite for arbitrarily negative s.
double log_normal_cdf(double s);

/// h(s) = log Phi(s) with h'(s) = pdf/cdf and h''(s) = -h'(s) (s + h'(s)).
LogCdfDerivs log_cdf_derivs(double s);

/// g(s) = log(1 - Phi(s)) = h(-s), with derivatives.
LogCdfDerivs log_ccdf_derivs(double s);

struct ProbitPair {
  LogCdfDerivs h;  // log Phi(s)
  LogCdfDerivs g;  // log(1 - Phi(s))
};

/// Both of the above from a single tail-probability evaluation.
ProbitPair log_cdf_pair(double s);

}  // namespace hmpsbm
