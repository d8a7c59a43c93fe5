#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "exocause/dataset.hpp"
#include "exocause/gp_cond.hpp"

namespace exocause {

enum class BaselineOutcome { XcausesY, YcausesX, Undecided };

const char* to_string(BaselineOutcome o);

struct BaselineDecision {
    std::string method;
    BaselineOutcome outcome = BaselineOutcome::Undecided;
    double score_xy = 0.0;
    double score_yx = 0.0;
};

/// Slope-based IGCI with uniform reference measure: rescale both variables to
/// [0,1], score each direction by the mean of log |dy/dx| over consecutive
/// sorted pairs (zero differences skipped), decide toward the smaller score.
BaselineDecision igci_decide(const PairedSample& s);

/// Additive-noise baseline: GP-regress each variable on the other, test
/// residual-input independence with a Gaussian-kernel HSIC permutation test
/// (median-heuristic widths), apply the one-passes/one-fails rule.
BaselineDecision anm_decide(const PairedSample& s, const GpConfig& cfg, int permutations,
                            double alpha, std::uint64_t seed);

/// Biased (V-statistic) Gaussian-kernel HSIC, widths by the median heuristic.
double hsic_gaussian_stat(const std::vector<double>& a, const std::vector<double>& b);

/// Permutation p-value for the statistic above (+1 smoothing).
double hsic_gaussian_pvalue(const std::vector<double>& a, const std::vector<double>& b,
                            int permutations, std::uint64_t seed);

}  // namespace exocause
