#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "exocause/bootstrap.hpp"

namespace exocause {

/// Linear-kernel HSIC statistic between the rows of R and S:
/// C = Tr(R'R S'S) = ||R S'||_F^2. Dispatches to whichever algebraic route is
/// cheaper for the shape; the two routes agree to rounding.
double hsic_linear_stat(const Eigen::MatrixXd& r, const Eigen::MatrixXd& s);

/// Gram route: sum over (b,b') of (R'R)_{bb'} (S'S)_{bb'}.
double hsic_linear_stat_gram(const Eigen::MatrixXd& r, const Eigen::MatrixXd& s);

/// Cross-product route: squared Frobenius norm of R S'.
double hsic_linear_stat_cross(const Eigen::MatrixXd& r, const Eigen::MatrixXd& s);

struct ExogeneityTestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    int permutations = 0;
    int b_effective = 0;
};

/// Permutation test: the null is generated by permuting the columns of S
/// (breaking the replicate pairing) and recomputing C. The p-value uses +1
/// smoothing: (1 + #{C_perm >= C_obs}) / (permutations + 1).
ExogeneityTestResult permutation_pvalue(const StatMatrices& m, int permutations,
                                        std::uint64_t seed);

}  // namespace exocause
