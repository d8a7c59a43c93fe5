#include "exocause/mixture.hpp"

#include <cmath>
#include <numeric>

#include "exocause/errors.hpp"
#include "exocause/rng.hpp"

namespace exocause {

namespace {

double normal_pdf(double v, double mean, double var) {
    const double d = v - mean;
    return std::exp(-0.5 * d * d / var) / std::sqrt(6.283185307179586476925286766559 * var);
}

}  // namespace

void MixtureParams::validate() const {
    const auto k = components();
    if (k == 0 || means.size() != k || variances.size() != k) {
        throw ConfigError("mixture parameter vectors must have matching nonzero length");
    }
    double total = 0.0;
    for (double w : weights) {
        if (!(w > 0.0 && w < 1.0) && !(k == 1 && w == 1.0)) {
            throw ConfigError("mixture weights must lie in (0, 1)");
        }
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) throw ConfigError("mixture weights must sum to 1");
    for (double v : variances) {
        if (!(v > 0.0)) throw ConfigError("mixture variances must be positive");
    }
    if (!(noise_var > 0.0)) throw ConfigError("noise variance must be positive");
}

BackwardParams reparam(const MixtureParams& p, ReparamVariant variant) {
    p.validate();
    const double b = p.slope;
    const double c = p.intercept;
    const double s2 = p.noise_var;

    BackwardParams out;
    const auto k = p.components();
    out.mu_b.resize(k);
    out.var_b.resize(k);
    out.intercept_b.resize(k);
    out.slope_b.resize(k);
    out.noise_var_b.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        const double vi = p.variances[i];
        const double mi = p.means[i];
        out.mu_b[i] = c + b * mi;
        out.var_b[i] = b * b * vi + s2;
        const double denom =
            variant == ReparamVariant::LinearDenominator ? b * vi + s2 : b * b * vi + s2;
        out.intercept_b[i] = (mi * s2 - c * b * vi) / denom;
        out.slope_b[i] = b * vi / denom;
        out.noise_var_b[i] = s2 * vi / denom;
        if (!(out.noise_var_b[i] > 0.0) || !std::isfinite(out.noise_var_b[i])) {
            throw NonPositiveVariance("backward conditional variance is not positive for component " +
                                      std::to_string(i));
        }
    }
    return out;
}

double joint_forward(const MixtureParams& p, double x, double y) {
    p.validate();
    double acc = 0.0;
    for (std::size_t i = 0; i < p.components(); ++i) {
        acc += p.weights[i] * normal_pdf(x, p.means[i], p.variances[i]) *
               normal_pdf(y, p.intercept + p.slope * x, p.noise_var);
    }
    return acc;
}

double joint_backward(const MixtureParams& p, ReparamVariant variant, double x, double y) {
    const BackwardParams bp = reparam(p, variant);
    double acc = 0.0;
    for (std::size_t i = 0; i < p.components(); ++i) {
        acc += p.weights[i] * normal_pdf(y, bp.mu_b[i], bp.var_b[i]) *
               normal_pdf(x, bp.intercept_b[i] + bp.slope_b[i] * y, bp.noise_var_b[i]);
    }
    return acc;
}

double max_joint_discrepancy(const MixtureParams& p, ReparamVariant variant, int grid_size) {
    p.validate();
    double mean_x = 0.0, ex2 = 0.0;
    for (std::size_t i = 0; i < p.components(); ++i) {
        mean_x += p.weights[i] * p.means[i];
        ex2 += p.weights[i] * (p.variances[i] + p.means[i] * p.means[i]);
    }
    const double var_x = ex2 - mean_x * mean_x;
    const double mean_y = p.intercept + p.slope * mean_x;
    const double var_y = p.slope * p.slope * var_x + p.noise_var;
    const double sx = 4.0 * std::sqrt(var_x);
    const double sy = 4.0 * std::sqrt(var_y);

    double worst = 0.0;
    for (int ix = 0; ix < grid_size; ++ix) {
        const double x = mean_x - sx + 2.0 * sx * ix / (grid_size - 1);
        for (int iy = 0; iy < grid_size; ++iy) {
            const double y = mean_y - sy + 2.0 * sy * iy / (grid_size - 1);
            worst = std::max(worst,
                             std::abs(joint_forward(p, x, y) - joint_backward(p, variant, x, y)));
        }
    }
    return worst;
}

ReparamVariant select_reparam_variant(int n_draws, std::uint64_t seed) {
    Rng rng(seed);
    bool linear_ok = true;
    bool quadratic_ok = true;
    for (int d = 0; d < n_draws; ++d) {
        MixtureParams p;
        const double w = 0.2 + 0.6 * rng.uniform();
        p.weights = {w, 1.0 - w};
        p.means = {-3.0 + 6.0 * rng.uniform(), -3.0 + 6.0 * rng.uniform()};
        p.variances = {0.25 + 3.75 * rng.uniform(), 0.25 + 3.75 * rng.uniform()};
        p.intercept = -2.0 + 4.0 * rng.uniform();
        double slope = 0.0;
        while (std::abs(slope) < 0.1) slope = -2.0 + 4.0 * rng.uniform();
        p.slope = slope;
        p.noise_var = 0.25 + 3.75 * rng.uniform();

        for (auto variant : {ReparamVariant::LinearDenominator,
                             ReparamVariant::QuadraticDenominator}) {
            bool pass;
            try {
                pass = max_joint_discrepancy(p, variant) < 1e-8;
            } catch (const NonPositiveVariance&) {
                pass = false;
            }
            if (variant == ReparamVariant::LinearDenominator) {
                linear_ok = linear_ok && pass;
            } else {
                quadratic_ok = quadratic_ok && pass;
            }
        }
    }
    if (quadratic_ok == linear_ok) {
        throw Error("joint-density equality check did not single out one variant");
    }
    return quadratic_ok ? ReparamVariant::QuadraticDenominator
                        : ReparamVariant::LinearDenominator;
}

PairedSample sample_mixture_pair(const MixtureParams& p, std::size_t n, std::uint64_t seed) {
    p.validate();
    if (n < kMinSamples) {
        throw ConfigError("mixture sample needs at least " + std::to_string(kMinSamples) +
                          " rows");
    }
    std::vector<double> cum(p.components());
    std::partial_sum(p.weights.begin(), p.weights.end(), cum.begin());

    Rng rng(seed);
    PairedSample s;
    s.x.resize(n);
    s.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform();
        std::size_t comp = 0;
        while (comp + 1 < cum.size() && u >= cum[comp]) ++comp;
        const double x = p.means[comp] + std::sqrt(p.variances[comp]) * rng.normal();
        const double y = p.intercept + p.slope * x + std::sqrt(p.noise_var) * rng.normal();
        s.x[i] = x;
        s.y[i] = y;
    }
    return s;
}

}  // namespace exocause
