#include "hometunnel/statkit/student_t.hpp"

#include <cmath>

#include <boost/math/special_functions/beta.hpp>

#include "hometunnel/statkit/descriptive.hpp"

namespace hometunnel::statkit {

double t_cdf(double t, double df) {
  if (!(df > 0)) {
    throw StatsError(StatsError::Kind::invalid_argument, "t_cdf: df must be positive");
  }
  if (t == 0) return 0.5;
  // P(|T| > |t|) = I_{df/(df+t^2)}(df/2, 1/2)
  const double x = df / (df + t * t);
  const double tail = 0.5 * boost::math::ibeta(df / 2.0, 0.5, x);
  return t > 0 ? 1.0 - tail : tail;
}

double t_quantile(double p, long df) {
  if (!(p > 0.0 && p < 1.0)) {
    throw StatsError(StatsError::Kind::invalid_argument, "t_quantile: p must lie in (0, 1)");
  }
  if (df < 1) {
    throw StatsError(StatsError::Kind::invalid_argument, "t_quantile: df must be >= 1");
  }
  if (p == 0.5) return 0.0;
  if (p < 0.5) return -t_quantile(1.0 - p, df);

  const auto nu = static_cast<double>(df);
  double lo = 0.0;
  double hi = 1.0;
  while (t_cdf(hi, nu) < p) {
    lo = hi;
    hi *= 2.0;
  }
  // Bisection down to 1e-10 in t (relative for large quantiles).
  while (hi - lo > 1e-10 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (t_cdf(mid, nu) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace hometunnel::statkit
