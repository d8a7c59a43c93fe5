#pragma once

#include <vector>

#include "exocause/dataset.hpp"

namespace exocause {

/// Log-density floor: log(1e-300). Keeps grid points far outside a bootstrap
/// replicate's support from producing -inf entries.
inline constexpr double kLogDensityFloor = -690.77552789821368;

struct Bandwidth {
    double h = 0.0;
};

enum class BandwidthRule {
    RuleOfThumb,  // 1.06 * sd * n^(-1/5)
    Robust,       // 0.9 * min(sd, IQR/1.34) * n^(-1/5)
};

Bandwidth silverman_bandwidth(const std::vector<double>& data,
                              BandwidthRule rule = BandwidthRule::RuleOfThumb);

/// Gaussian KDE evaluated in log space on the grid, floored at kLogDensityFloor.
std::vector<double> kde_log_density(const std::vector<double>& train, Bandwidth bw,
                                    const EvalGrid& grid);

}  // namespace exocause
