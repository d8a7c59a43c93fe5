#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <Eigen/Dense>

#include "exocause/dataset.hpp"
#include "exocause/gp_cond.hpp"

namespace exocause {

/// Paired-bootstrap index sets: B draws of n row indices with replacement.
struct ReplicatePlan {
    std::size_t n = 0;
    std::vector<std::vector<std::uint32_t>> index_sets;
    std::uint64_t seed = 0;

    std::size_t b_count() const { return index_sets.size(); }
};

ReplicatePlan plan_replicates(std::size_t n, std::size_t b_count, std::uint64_t seed);

/// Row-centered statistic matrices (grid points x replicates) plus the raw
/// uncentered versions for debugging dumps.
struct StatMatrices {
    Eigen::MatrixXd r;  // centered log marginal densities
    Eigen::MatrixXd s;  // centered conditional negative entropies
    Eigen::MatrixXd r_raw;
    Eigen::MatrixXd s_raw;
    std::size_t b_effective = 0;
    std::vector<std::size_t> dropped_replicates;
};

/// One replicate's raw columns; exposed so a single replicate can be
/// recomputed in isolation.
struct ReplicateColumns {
    std::vector<double> r_col;
    std::vector<double> s_col;
};

ReplicateColumns compute_replicate(const PairedSample& s, const EvalGrid& grid,
                                   const std::vector<std::uint32_t>& indices, const GpConfig& cfg,
                                   std::uint64_t fit_seed, const std::vector<double>& mc_draws,
                                   const GpWarmStart* warm);

/// Runs every replicate (KDE column + GP conditional fit + grid entropies),
/// then centers each row across replicates. Replicates run concurrently on up
/// to `workers` threads (0 = hardware concurrency); results are bitwise
/// independent of the worker count. Replicates whose GP fit fails are retried
/// once with a different child seed, then dropped; more than 5% dropped
/// raises TooManyFailures.
StatMatrices build_stat_matrices(const PairedSample& s, const EvalGrid& grid,
                                 const ReplicatePlan& plan, const GpConfig& gp_cfg,
                                 std::uint64_t seed, int workers = 0);

/// Debug dump of the raw matrices:
/// {n_grid, B, R_raw: row-major floats, S_raw: row-major floats}.
void dump_raw_matrices(const std::filesystem::path& path, const StatMatrices& m);

}  // namespace exocause
