#pragma once

namespace hometunnel::statkit {

/// CDF of Student's t with `df` degrees of freedom.
[[nodiscard]] double t_cdf(double t, double df);

/// Inverse CDF of Student's t. Throws StatsError for p outside (0, 1) or df < 1.
[[nodiscard]] double t_quantile(double p, long df);

}  // namespace hometunnel::statkit
