#include "exocause/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "exocause/errors.hpp"
#include "exocause/gp_regression.hpp"
#include "exocause/rng.hpp"

namespace exocause {

namespace {

std::vector<double> rescale_unit(const std::vector<double>& v) {
    const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
    if (!(*lo_it < *hi_it)) throw DegenerateVariable("variable has min == max");
    const double lo = *lo_it;
    const double span = *hi_it - lo;
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - lo) / span;
    return out;
}

/// mean of log |dv/du| over consecutive pairs sorted by u, zero differences skipped
double igci_slope_score(const std::vector<double>& u, const std::vector<double>& v) {
    std::vector<std::size_t> order(u.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (u[a] != u[b]) return u[a] < u[b];
        return v[a] < v[b];
    });

    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        const double du = u[order[k + 1]] - u[order[k]];
        const double dv = v[order[k + 1]] - v[order[k]];
        if (du == 0.0 || dv == 0.0) continue;
        acc += std::log(std::abs(dv / du));
        ++count;
    }
    return count > 0 ? acc / static_cast<double>(count) : 0.0;
}

Eigen::MatrixXd centered_gaussian_gram(const std::vector<double>& v) {
    const auto n = static_cast<Eigen::Index>(v.size());
    std::vector<double> dist;
    dist.reserve(v.size() * (v.size() - 1) / 2);
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = i + 1; j < v.size(); ++j) {
            const double d = std::abs(v[i] - v[j]);
            if (d > 0.0) dist.push_back(d);
        }
    }
    double width = 1.0;
    if (!dist.empty()) {
        const auto mid = dist.begin() + static_cast<std::ptrdiff_t>(dist.size() / 2);
        std::nth_element(dist.begin(), mid, dist.end());
        width = *mid;
    }
    const double inv_2w2 = 0.5 / (width * width);

    Eigen::MatrixXd k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double d = v[static_cast<std::size_t>(i)] - v[static_cast<std::size_t>(j)];
            k(i, j) = std::exp(-d * d * inv_2w2);
            k(j, i) = k(i, j);
        }
    }
    const Eigen::VectorXd row_mean = k.rowwise().mean();
    const double total_mean = row_mean.mean();
    k.colwise() -= row_mean;
    k.rowwise() -= row_mean.transpose();
    k.array() += total_mean;
    return k;
}

}  // namespace

const char* to_string(BaselineOutcome o) {
    switch (o) {
        case BaselineOutcome::XcausesY: return "XcausesY";
        case BaselineOutcome::YcausesX: return "YcausesX";
        case BaselineOutcome::Undecided: return "Undecided";
    }
    return "?";
}

BaselineDecision igci_decide(const PairedSample& s) {
    s.validate();
    const auto u = rescale_unit(s.x);
    const auto v = rescale_unit(s.y);

    BaselineDecision d;
    d.method = "igci";
    d.score_xy = igci_slope_score(u, v);
    d.score_yx = igci_slope_score(v, u);
    const double diff = d.score_xy - d.score_yx;
    if (std::abs(diff) < 1e-9) {
        d.outcome = BaselineOutcome::Undecided;
    } else {
        d.outcome = diff < 0.0 ? BaselineOutcome::XcausesY : BaselineOutcome::YcausesX;
    }
    return d;
}

double hsic_gaussian_stat(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2) throw ShapeMismatch("hsic input shapes");
    const Eigen::MatrixXd ka = centered_gaussian_gram(a);
    const Eigen::MatrixXd kb = centered_gaussian_gram(b);
    const auto n = static_cast<double>(a.size());
    return (ka.array() * kb.array()).sum() / (n * n);
}

double hsic_gaussian_pvalue(const std::vector<double>& a, const std::vector<double>& b,
                            int permutations, std::uint64_t seed) {
    if (a.size() != b.size() || a.size() < 2) throw ShapeMismatch("hsic input shapes");
    if (permutations < 1) throw ConfigError("need at least 1 permutation");
    const Eigen::MatrixXd ka = centered_gaussian_gram(a);
    const Eigen::MatrixXd kb = centered_gaussian_gram(b);
    const auto n = static_cast<Eigen::Index>(a.size());
    const double scale = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
    const double observed = (ka.array() * kb.array()).sum() * scale;

    std::vector<std::uint32_t> perm(a.size());
    std::iota(perm.begin(), perm.end(), 0u);
    Rng rng(seed);
    int count_ge = 0;
    for (int p = 0; p < permutations; ++p) {
        rng.shuffle(perm);
        double acc = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto pi = static_cast<Eigen::Index>(perm[static_cast<std::size_t>(i)]);
            for (Eigen::Index j = 0; j < n; ++j) {
                const auto pj = static_cast<Eigen::Index>(perm[static_cast<std::size_t>(j)]);
                acc += ka(i, j) * kb(pi, pj);
            }
        }
        if (acc * scale >= observed) ++count_ge;
    }
    return (1.0 + count_ge) / (permutations + 1.0);
}

BaselineDecision anm_decide(const PairedSample& s, const GpConfig& cfg, int permutations,
                            double alpha, std::uint64_t seed) {
    s.validate();
    cfg.validate();
    auto [std_s, transform] = standardize(s);

    const auto residual_pvalue = [&](const std::vector<double>& input,
                                     const std::vector<double>& output) {
        const auto model = fit_gp_regression(input, output, cfg.max_iters, cfg.tol);
        const auto res = gp_residuals(model, output);
        // the same permutation seed in both directions keeps column-swap symmetry exact
        return hsic_gaussian_pvalue(input, res, permutations, child_seed(seed, 0));
    };

    BaselineDecision d;
    d.method = "anm";
    d.score_xy = residual_pvalue(std_s.x, std_s.y);
    d.score_yx = residual_pvalue(std_s.y, std_s.x);
    const bool pass_xy = d.score_xy > alpha;
    const bool pass_yx = d.score_yx > alpha;
    if (pass_xy && !pass_yx) {
        d.outcome = BaselineOutcome::XcausesY;
    } else if (pass_yx && !pass_xy) {
        d.outcome = BaselineOutcome::YcausesX;
    } else {
        d.outcome = BaselineOutcome::Undecided;
    }
    return d;
}

}  // namespace exocause
