#include "exocause/bootstrap.hpp"

#include <fstream>
#include <mutex>

#include "exocause/errors.hpp"
#include "exocause/kde.hpp"
#include "exocause/parallel.hpp"
#include "exocause/rng.hpp"

#include <nlohmann/json.hpp>

namespace exocause {

namespace {

// seed streams inside build_stat_matrices
constexpr std::uint64_t kMcStream = 0;
constexpr std::uint64_t kReferenceStream = 1;
constexpr std::uint64_t kReplicateStreamBase = 2;

PairedSample gather(const PairedSample& s, const std::vector<std::uint32_t>& indices) {
    PairedSample out;
    out.x.reserve(indices.size());
    out.y.reserve(indices.size());
    for (auto i : indices) {
        out.x.push_back(s.x[i]);
        out.y.push_back(s.y[i]);
    }
    return out;
}

}  // namespace

ReplicatePlan plan_replicates(std::size_t n, std::size_t b_count, std::uint64_t seed) {
    if (n < kMinSamples) {
        throw ConfigError("bootstrap needs at least " + std::to_string(kMinSamples) + " rows");
    }
    if (b_count < 2) throw ConfigError("need at least 2 bootstrap replicates");

    ReplicatePlan plan;
    plan.n = n;
    plan.seed = seed;
    plan.index_sets.resize(b_count);
    for (std::size_t b = 0; b < b_count; ++b) {
        Rng rng(child_seed(seed, b));
        auto& set = plan.index_sets[b];
        set.resize(n);
        for (auto& idx : set) idx = static_cast<std::uint32_t>(rng.below(n));
    }
    return plan;
}

ReplicateColumns compute_replicate(const PairedSample& s, const EvalGrid& grid,
                                   const std::vector<std::uint32_t>& indices, const GpConfig& cfg,
                                   std::uint64_t fit_seed, const std::vector<double>& mc_draws,
                                   const GpWarmStart* warm) {
    const PairedSample resample = gather(s, indices);

    ReplicateColumns cols;
    cols.r_col = kde_log_density(resample.x, silverman_bandwidth(resample.x), grid);

    GpCondModel model;
    try {
        // warm-started refits only need to adapt the reference model to the
        // resample, so they run under the tighter refit_iters budget
        GpConfig refit_cfg = cfg;
        if (warm) refit_cfg.max_iters = std::min(cfg.max_iters, cfg.refit_iters);
        model = fit_gpcm(resample, refit_cfg, fit_seed, warm);
    } catch (const Error&) {
        // one retry from the cold initialization with a different seed
        GpConfig retry_cfg = cfg;
        retry_cfg.restarts = std::max(2, cfg.restarts);
        model = fit_gpcm(resample, retry_cfg, child_seed(fit_seed, 1), nullptr);
    }
    cols.s_col = neg_entropy_grid_draws(model, grid, mc_draws, cfg.deriv_floor);
    return cols;
}

StatMatrices build_stat_matrices(const PairedSample& s, const EvalGrid& grid,
                                 const ReplicatePlan& plan, const GpConfig& gp_cfg,
                                 std::uint64_t seed, int workers) {
    s.validate();
    gp_cfg.validate();
    if (plan.n != s.size()) throw ShapeMismatch("replicate plan built for a different sample size");
    const auto b_total = plan.b_count();
    const auto n_grid = grid.size();

    Rng mc_rng(child_seed(seed, kMcStream));
    const auto mc_draws = mc_rng.normals(static_cast<std::size_t>(gp_cfg.mc_samples));

    // one model on the full sample warm-starts every replicate fit
    const GpCondModel reference = fit_gpcm(s, gp_cfg, child_seed(seed, kReferenceStream));

    std::vector<ReplicateColumns> columns(b_total);
    std::vector<char> ok(b_total, 0);
    parallel_for(b_total, workers, [&](std::size_t b) {
        const auto& indices = plan.index_sets[b];
        // hyperparameters come from the reference model; latents are left for
        // the resample's own residual initialization so the refit can track
        // the resample's shape
        GpWarmStart warm;
        warm.log_lengthscale_x = reference.log_lengthscale_x;
        warm.log_lengthscale_e = reference.log_lengthscale_e;
        warm.log_signal_var = reference.log_signal_var;
        try {
            columns[b] = compute_replicate(s, grid, indices, gp_cfg,
                                           child_seed(seed, kReplicateStreamBase + b), mc_draws,
                                           &warm);
            ok[b] = 1;
        } catch (const Error&) {
            ok[b] = 0;
        }
    });

    StatMatrices out;
    for (std::size_t b = 0; b < b_total; ++b) {
        if (!ok[b]) out.dropped_replicates.push_back(b);
    }
    const std::size_t b_eff = b_total - out.dropped_replicates.size();
    if (static_cast<double>(out.dropped_replicates.size()) > 0.05 * static_cast<double>(b_total)) {
        throw TooManyFailures(std::to_string(out.dropped_replicates.size()) + " of " +
                              std::to_string(b_total) + " replicates failed");
    }

    out.b_effective = b_eff;
    out.r_raw.resize(static_cast<Eigen::Index>(n_grid), static_cast<Eigen::Index>(b_eff));
    out.s_raw.resize(static_cast<Eigen::Index>(n_grid), static_cast<Eigen::Index>(b_eff));
    Eigen::Index col = 0;
    for (std::size_t b = 0; b < b_total; ++b) {
        if (!ok[b]) continue;
        for (std::size_t i = 0; i < n_grid; ++i) {
            out.r_raw(static_cast<Eigen::Index>(i), col) = columns[b].r_col[i];
            out.s_raw(static_cast<Eigen::Index>(i), col) = columns[b].s_col[i];
        }
        ++col;
    }

    out.r = out.r_raw.colwise() - out.r_raw.rowwise().mean();
    out.s = out.s_raw.colwise() - out.s_raw.rowwise().mean();
    return out;
}

void dump_raw_matrices(const std::filesystem::path& path, const StatMatrices& m) {
    nlohmann::ordered_json j;
    j["n_grid"] = m.r_raw.rows();
    j["B"] = m.r_raw.cols();
    std::vector<double> r_flat, s_flat;
    r_flat.reserve(static_cast<std::size_t>(m.r_raw.size()));
    s_flat.reserve(static_cast<std::size_t>(m.s_raw.size()));
    for (Eigen::Index i = 0; i < m.r_raw.rows(); ++i) {
        for (Eigen::Index b = 0; b < m.r_raw.cols(); ++b) {
            r_flat.push_back(m.r_raw(i, b));
            s_flat.push_back(m.s_raw(i, b));
        }
    }
    j["R_raw"] = r_flat;
    j["S_raw"] = s_flat;

    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << j.dump() << "\n";
}

}  // namespace exocause
