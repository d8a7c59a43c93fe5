#include "exocause/kde.hpp"

#include <algorithm>
#include <cmath>

#include "exocause/errors.hpp"

namespace exocause {

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;

double interquartile_range(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto quantile = [&](double p) {
        const double pos = p * static_cast<double>(v.size() - 1);
        const auto lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, v.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        return v[lo] * (1.0 - frac) + v[hi] * frac;
    };
    return quantile(0.75) - quantile(0.25);
}

}  // namespace

Bandwidth silverman_bandwidth(const std::vector<double>& data, BandwidthRule rule) {
    if (data.size() < 2) throw ConfigError("bandwidth needs at least 2 points");
    const double sd = sample_std(data);
    if (!(sd > 0.0)) throw DegenerateVariable("bandwidth on constant data");

    const double n_factor = std::pow(static_cast<double>(data.size()), -0.2);
    double h;
    if (rule == BandwidthRule::RuleOfThumb) {
        h = 1.06 * sd * n_factor;
    } else {
        const double iqr = interquartile_range(data);
        double spread = sd;
        if (iqr > 0.0) spread = std::min(sd, iqr / 1.34);
        h = 0.9 * spread * n_factor;
    }
    return Bandwidth{h};
}

std::vector<double> kde_log_density(const std::vector<double>& train, Bandwidth bw,
                                    const EvalGrid& grid) {
    if (train.empty()) throw ConfigError("kde with empty training data");
    if (!(bw.h > 0.0) || !std::isfinite(bw.h)) throw ConfigError("kde bandwidth must be positive");

    const double inv_h = 1.0 / bw.h;
    const double log_norm = -std::log(static_cast<double>(train.size())) - std::log(bw.h) -
                            kLogSqrt2Pi;

    std::vector<double> out(grid.size());
    std::vector<double> expo(train.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double g = grid.points[i];
        double max_e = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < train.size(); ++j) {
            const double z = (g - train[j]) * inv_h;
            expo[j] = -0.5 * z * z;
            max_e = std::max(max_e, expo[j]);
        }
        // log-sum-exp over the kernel contributions
        double acc = 0.0;
        for (double e : expo) acc += std::exp(e - max_e);
        const double v = log_norm + max_e + std::log(acc);
        out[i] = std::max(v, kLogDensityFloor);
    }
    return out;
}

}  // namespace exocause
