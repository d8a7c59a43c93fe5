#pragma once

#include <cstdint>
#include <vector>

#include "exocause/dataset.hpp"

namespace exocause {

/// Gaussian-mixture cause with a linear-Gaussian mechanism:
/// x ~ sum_i pi_i N(mu_i, var_i), y = intercept + slope * x + N(0, noise_var).
struct MixtureParams {
    std::vector<double> weights{0.5, 0.5};
    std::vector<double> means{-2.0, 2.0};
    std::vector<double> variances{1.0, 1.0};
    double intercept = 0.0;
    double slope = 1.0;
    double noise_var = 1.0;

    std::size_t components() const { return weights.size(); }
    void validate() const;
};

/// The backward factorization's per-component denominator. The two forms
/// coincide at slope 1; the joint-density equality check below selects
/// Quadratic, which is what standard Gaussian conditioning yields, and that is
/// the library default.
enum class ReparamVariant {
    LinearDenominator,     // slope * var_i + noise_var
    QuadraticDenominator,  // slope^2 * var_i + noise_var
};

inline constexpr ReparamVariant kDefaultReparamVariant = ReparamVariant::QuadraticDenominator;

/// Per-component parameters of the backward factorization
/// p(x, y) = sum_i pi_i N(y; mu_b_i, var_b_i) N(x; intercept_b_i + slope_b_i * y, noise_var_b_i).
struct BackwardParams {
    std::vector<double> mu_b;
    std::vector<double> var_b;
    std::vector<double> intercept_b;
    std::vector<double> slope_b;
    std::vector<double> noise_var_b;
};

/// Throws NonPositiveVariance when the chosen denominator makes a backward
/// variance non-positive (possible under LinearDenominator with negative slope).
BackwardParams reparam(const MixtureParams& p, ReparamVariant variant = kDefaultReparamVariant);

/// Forward-factorized joint density sum_i pi_i N(x; mu_i, var_i) N(y; c + b x, noise_var).
double joint_forward(const MixtureParams& p, double x, double y);

double joint_backward(const MixtureParams& p, ReparamVariant variant, double x, double y);

/// Runs the joint-density equality check over random parameter draws and
/// returns the variant for which backward == forward everywhere.
ReparamVariant select_reparam_variant(int n_draws, std::uint64_t seed);

/// Maximum of |joint_backward - joint_forward| over a grid covering
/// +-4 marginal standard deviations (grid_size points per axis).
double max_joint_discrepancy(const MixtureParams& p, ReparamVariant variant, int grid_size = 50);

PairedSample sample_mixture_pair(const MixtureParams& p, std::size_t n, std::uint64_t seed);

}  // namespace exocause
