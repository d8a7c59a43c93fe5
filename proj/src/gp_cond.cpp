#include "exocause/gp_cond.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "exocause/errors.hpp"
#include "exocause/gp_regression.hpp"
#include "exocause/optim.hpp"
#include "exocause/rng.hpp"

#include "chol.hpp"

namespace exocause {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;
constexpr double kHyperPriorSd = 1.5;
constexpr double kHyperBound = 10.0;

double log_std_normal(double e) { return -0.5 * e * e - kLogSqrt2Pi; }

/// Standardizes raw latent coordinates to mean 0, sample std 1. The latents
/// enter the kernel only through this map: the raw coordinates are free, the
/// effective latents always sit on the N(0,1)-prior scale. Without the
/// constraint the objective has an exact runaway direction (shrink the
/// latents, inflate the signal variance) along which the likelihood keeps
/// growing while the implied conditional density degrades.
struct LatentMap {
    double mean = 0.0;
    double std = 1.0;

    static LatentMap from(const Eigen::VectorXd& u) {
        LatentMap m;
        const auto n = static_cast<double>(u.size());
        m.mean = u.mean();
        m.std = std::sqrt((u.array() - m.mean).square().sum() / (n - 1.0));
        return m;
    }

    Eigen::VectorXd apply(const Eigen::VectorXd& u) const {
        return (u.array() - mean) / std;
    }

    /// Pulls a gradient in the standardized latents back to the raw ones.
    Eigen::VectorXd pullback(const Eigen::VectorXd& u, const Eigen::VectorXd& e,
                             const Eigen::VectorXd& grad_e) const {
        const auto n = static_cast<double>(u.size());
        const double g_mean = grad_e.mean();
        const double ge = grad_e.dot(e);
        return (grad_e.array() - g_mean - e.array() * (ge / (n - 1.0))) / std;
    }
};

/// Penalized log-likelihood at v = (u_1..u_n, log ls_x, log ls_e, log sf2):
///   GP log marginal likelihood of y at inputs (x, e(u)) with jitter noise
///   + standard-normal prior on the latents (constant on the constraint set)
///   + weak Gaussian priors on the log-hyperparameters.
struct CondObjective {
    const Eigen::MatrixXd& dx2;  // squared x distances
    const Eigen::VectorXd& y;
    double jitter;

    double operator()(const Eigen::VectorXd& v, Eigen::VectorXd* grad) const {
        const auto n = y.size();
        const double theta_x = v(n);
        const double theta_e = v(n + 1);
        const double theta_s = v(n + 2);
        if (!v.allFinite() || std::abs(theta_x) > kHyperBound ||
            std::abs(theta_e) > kHyperBound || std::abs(theta_s) > kHyperBound) {
            return -std::numeric_limits<double>::infinity();
        }
        const Eigen::VectorXd u = v.head(n);
        const LatentMap map = LatentMap::from(u);
        if (!(map.std > 1e-12)) return -std::numeric_limits<double>::infinity();
        const Eigen::VectorXd e = map.apply(u);

        const double inv_lx2 = std::exp(-2.0 * theta_x);
        const double inv_le2 = std::exp(-2.0 * theta_e);
        const double sf2 = std::exp(theta_s);

        Eigen::MatrixXd expo = dx2 * (-0.5 * inv_lx2);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < i; ++j) {
                const double de = e(i) - e(j);
                const double t = expo(i, j) - 0.5 * de * de * inv_le2;
                expo(i, j) = t;
                expo(j, i) = t;
            }
            expo(i, i) = 0.0;
        }
        Eigen::MatrixXd kf = expo.array().exp().matrix() * sf2;
        Eigen::MatrixXd k = kf;
        k.diagonal().array() += jitter;

        const linalg::Cholesky chol(std::move(k));
        if (!chol.ok()) {
            return -std::numeric_limits<double>::infinity();
        }
        const Eigen::VectorXd alpha = chol.solve(y);
        const double lml = -0.5 * y.dot(alpha) - 0.5 * chol.log_det() -
                           0.5 * static_cast<double>(n) * kLog2Pi;
        const double latent_prior = -0.5 * e.squaredNorm() -
                                    static_cast<double>(n) * kLogSqrt2Pi;
        const double hyper_prior =
            -0.5 * (theta_x * theta_x + theta_e * theta_e + theta_s * theta_s) /
            (kHyperPriorSd * kHyperPriorSd);
        const double value = lml + latent_prior + hyper_prior;
        if (!std::isfinite(value)) return -std::numeric_limits<double>::infinity();

        if (grad) {
            grad->resize(n + 3);
            Eigen::MatrixXd kinv = chol.inverse();
            // a = (alpha alpha' - K^{-1}) .* K_f, shared by all parameter blocks
            Eigen::MatrixXd a =
                ((alpha * alpha.transpose() - kinv).array() * kf.array()).matrix();
            const Eigen::VectorXd row_sums = a.rowwise().sum();
            const Eigen::VectorXd ae = a * e;
            // d k_f(i,j)/d e_i = -k_f(i,j) (e_i - e_j) / ls_e^2
            Eigen::VectorXd grad_e =
                (-(row_sums.array() * e.array() - ae.array()) * inv_le2 - e.array()).matrix();
            grad->head(n) = map.pullback(u, e, grad_e);

            const double sum_a_dx2 = (a.array() * dx2.array()).sum();
            const double sum_a = a.sum();
            const Eigen::VectorXd e2 = e.array().square().matrix();
            // sum_ij a_ij (e_i - e_j)^2 via the expansion e_i^2 + e_j^2 - 2 e_i e_j
            const double sum_a_de2 =
                row_sums.dot(e2) + a.colwise().sum().dot(e2) - 2.0 * e.dot(ae);
            (*grad)(n) = 0.5 * sum_a_dx2 * inv_lx2 - theta_x / (kHyperPriorSd * kHyperPriorSd);
            (*grad)(n + 1) = 0.5 * sum_a_de2 * inv_le2 - theta_e / (kHyperPriorSd * kHyperPriorSd);
            (*grad)(n + 2) = 0.5 * sum_a - theta_s / (kHyperPriorSd * kHyperPriorSd);
        }
        return value;
    }
};

Eigen::VectorXd initial_point(const PairedSample& s, const GpWarmStart* warm) {
    const auto n = static_cast<Eigen::Index>(s.size());
    Eigen::VectorXd v(n + 3);
    if (warm && !warm->latent_e.empty() && warm->latent_e.size() != s.size()) {
        throw ShapeMismatch("warm-start latents do not match sample size");
    }

    if (warm && !warm->latent_e.empty()) {
        for (Eigen::Index i = 0; i < n; ++i) v(i) = warm->latent_e[i];
    } else {
        // latents start at the residuals of a preliminary GP regression of y
        // on x with fixed, data-scaled hyperparameters (standardized by the
        // latent map inside the objective)
        const double var_y = std::max(sample_std(s.y) * sample_std(s.y), 1e-12);
        const double ls = median_heuristic_lengthscale(s.x);
        const auto pre = gp_regression_fixed(s.x, s.y, ls, var_y, 0.1 * var_y);
        auto res = gp_residuals(pre, s.y);
        if (sample_std(res) > 1e-12) {
            for (Eigen::Index i = 0; i < n; ++i) v(i) = res[i];
        } else {
            // deterministic residuals: fall back to an index ramp so the
            // latent standardization stays well defined
            for (Eigen::Index i = 0; i < n; ++i) v(i) = static_cast<double>(i);
        }
        if (!warm) {
            v(n) = std::log(ls);
            v(n + 1) = 0.0;
            v(n + 2) = 0.0;
            return v;
        }
    }
    v(n) = warm->log_lengthscale_x;
    v(n + 1) = warm->log_lengthscale_e;
    v(n + 2) = warm->log_signal_var;
    return v;
}

GpCondModel model_from_point(const PairedSample& s, const GpConfig& cfg,
                             const Eigen::VectorXd& v, double objective) {
    const auto n = static_cast<Eigen::Index>(s.size());
    const Eigen::VectorXd u = v.head(n);
    const Eigen::VectorXd e = LatentMap::from(u).apply(u);

    GpCondModel m;
    m.train_x = s.x;
    m.latent_e.assign(e.data(), e.data() + n);
    m.log_lengthscale_x = v(n);
    m.log_lengthscale_e = v(n + 1);
    m.log_signal_var = v(n + 2);
    m.objective = objective;

    const double inv_lx2 = std::exp(-2.0 * m.log_lengthscale_x);
    const double inv_le2 = std::exp(-2.0 * m.log_lengthscale_e);
    const double sf2 = std::exp(m.log_signal_var);
    Eigen::MatrixXd k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double dx = s.x[i] - s.x[j];
            const double de = e(i) - e(j);
            k(i, j) = sf2 * std::exp(-0.5 * dx * dx * inv_lx2 - 0.5 * de * de * inv_le2);
            k(j, i) = k(i, j);
        }
    }
    k.diagonal().array() += cfg.jitter;
    const linalg::Cholesky chol(std::move(k));
    if (!chol.ok()) {
        throw OptimizationFailure("final kernel matrix not positive definite");
    }
    const Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(s.y.data(), n);
    const Eigen::VectorXd w = chol.solve(yv);
    m.weights.assign(w.data(), w.data() + n);
    return m;
}

}  // namespace

void GpConfig::validate() const {
    if (max_iters <= 0) throw ConfigError("gp max_iters must be positive");
    if (!(tol > 0.0)) throw ConfigError("gp tol must be positive");
    if (restarts < 0) throw ConfigError("gp restarts must be non-negative");
    if (!(jitter > 0.0)) throw ConfigError("gp jitter must be positive");
    if (mc_samples <= 0) throw ConfigError("gp mc_samples must be positive");
    if (!(deriv_floor > 0.0)) throw ConfigError("gp deriv_floor must be positive");
    if (refit_iters <= 0) throw ConfigError("gp refit_iters must be positive");
}

GpCondModel fit_gpcm(const PairedSample& s, const GpConfig& cfg, std::uint64_t seed,
                     const GpWarmStart* warm) {
    cfg.validate();
    s.validate();
    const auto n = static_cast<Eigen::Index>(s.size());

    Eigen::MatrixXd dx2(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double d = s.x[i] - s.x[j];
            dx2(i, j) = d * d;
            dx2(j, i) = dx2(i, j);
        }
    }
    const Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(s.y.data(), n);
    const CondObjective obj{dx2, yv, cfg.jitter};

    const Eigen::VectorXd base = initial_point(s, warm);
    const int runs = std::max(1, cfg.restarts);

    bool have_best = false;
    Eigen::VectorXd best_x;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int r = 0; r < runs; ++r) {
        Eigen::VectorXd x0 = base;
        if (r > 0) {
            Rng rng(child_seed(seed, static_cast<std::uint64_t>(r)));
            for (Eigen::Index i = 0; i < x0.size(); ++i) x0(i) += 0.3 * rng.normal();
        }
        const auto res = maximize_lbfgs(obj, x0, cfg.max_iters, cfg.tol);
        if (std::isfinite(res.value) && (!have_best || res.value > best_value)) {
            have_best = true;
            best_value = res.value;
            best_x = res.x;
        }
    }
    if (!have_best) {
        throw OptimizationFailure("latent GP fit found no finite objective value");
    }
    return model_from_point(s, cfg, best_x, best_value);
}

std::pair<double, double> predict_f(const GpCondModel& m, double x, double e) {
    const double inv_lx2 = std::exp(-2.0 * m.log_lengthscale_x);
    const double inv_le2 = std::exp(-2.0 * m.log_lengthscale_e);
    const double sf2 = std::exp(m.log_signal_var);
    double f = 0.0;
    double df = 0.0;
    for (std::size_t j = 0; j < m.train_x.size(); ++j) {
        const double dx = x - m.train_x[j];
        const double de = e - m.latent_e[j];
        const double kj = sf2 * std::exp(-0.5 * dx * dx * inv_lx2 - 0.5 * de * de * inv_le2);
        f += m.weights[j] * kj;
        df += m.weights[j] * kj * (-de * inv_le2);
    }
    return {f, df};
}

double cond_log_density_fn(const CondFn& f, double x, double y, double deriv_floor) {
    constexpr int kScanIntervals = 200;

    const auto scan = [&](double lo, double hi, std::vector<double>& roots) {
        double prev_e = lo;
        double prev_g = f(x, prev_e).first - y;
        for (int i = 1; i <= kScanIntervals; ++i) {
            const double cur_e =
                lo + (hi - lo) * static_cast<double>(i) / kScanIntervals;
            const double cur_g = f(x, cur_e).first - y;
            if (prev_g == 0.0) {
                roots.push_back(prev_e);
            } else if ((prev_g < 0.0) != (cur_g < 0.0)) {
                // bisection on the bracket
                double a = prev_e, b = cur_e, ga = prev_g;
                for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
                    const double mid = 0.5 * (a + b);
                    const double gm = f(x, mid).first - y;
                    if (gm == 0.0) {
                        a = b = mid;
                        break;
                    }
                    if ((ga < 0.0) != (gm < 0.0)) {
                        b = mid;
                    } else {
                        a = mid;
                        ga = gm;
                    }
                }
                roots.push_back(0.5 * (a + b));
            }
            prev_e = cur_e;
            prev_g = cur_g;
        }
        if (prev_g == 0.0) roots.push_back(prev_e);
    };

    std::vector<double> roots;
    scan(-6.0, 6.0, roots);
    if (roots.empty()) scan(-10.0, 10.0, roots);
    if (roots.empty()) {
        throw RootNotFound("no latent value maps to the requested output");
    }

    // change of variables summed over all preimages, in log space
    double max_term = -std::numeric_limits<double>::infinity();
    std::vector<double> terms;
    terms.reserve(roots.size());
    for (double e : roots) {
        const double deriv = std::abs(f(x, e).second);
        const double term = log_std_normal(e) - std::log(std::max(deriv, deriv_floor));
        terms.push_back(term);
        max_term = std::max(max_term, term);
    }
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - max_term);
    return max_term + std::log(acc);
}

double cond_log_density(const GpCondModel& m, double x, double y, double deriv_floor) {
    return cond_log_density_fn(
        [&m](double xv, double ev) { return predict_f(m, xv, ev); }, x, y, deriv_floor);
}

std::vector<double> neg_entropy_grid_fn(const CondFn& f, const std::vector<double>& grid_points,
                                        const std::vector<double>& draws, double deriv_floor) {
    std::vector<double> out(grid_points.size(), 0.0);
    const double inv_m = 1.0 / static_cast<double>(draws.size());
    for (std::size_t i = 0; i < grid_points.size(); ++i) {
        double acc = 0.0;
        for (double e : draws) {
            const double deriv = std::abs(f(grid_points[i], e).second);
            acc += log_std_normal(e) - std::log(std::max(deriv, deriv_floor));
        }
        out[i] = acc * inv_m;
    }
    return out;
}

namespace detail {

/// Fast path for fitted models: df/de factorizes into per-grid and per-draw
/// kernel pieces, so all grid x draw derivatives come from one matrix product.
std::vector<double> neg_entropy_grid_model(const GpCondModel& m,
                                           const std::vector<double>& grid_points,
                                           const std::vector<double>& draws,
                                           double deriv_floor) {
    const auto n = static_cast<Eigen::Index>(m.train_x.size());
    const auto g = static_cast<Eigen::Index>(grid_points.size());
    const auto mc = static_cast<Eigen::Index>(draws.size());
    const double inv_lx2 = std::exp(-2.0 * m.log_lengthscale_x);
    const double inv_le2 = std::exp(-2.0 * m.log_lengthscale_e);
    const double sf2 = std::exp(m.log_signal_var);

    Eigen::MatrixXd u(g, n);  // weights .* x-kernel at grid points
    for (Eigen::Index i = 0; i < g; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double dx = grid_points[i] - m.train_x[j];
            u(i, j) = m.weights[j] * std::exp(-0.5 * dx * dx * inv_lx2);
        }
    }
    Eigen::MatrixXd v(n, mc);  // e-kernel derivative factor at the draws
    for (Eigen::Index mI = 0; mI < mc; ++mI) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double de = draws[mI] - m.latent_e[j];
            v(j, mI) = sf2 * std::exp(-0.5 * de * de * inv_le2) * (-de * inv_le2);
        }
    }
    const Eigen::MatrixXd df = u * v;  // g x mc partial derivatives

    double draw_term = 0.0;
    for (double e : draws) draw_term += log_std_normal(e);

    std::vector<double> out(grid_points.size());
    for (Eigen::Index i = 0; i < g; ++i) {
        double acc = draw_term;
        for (Eigen::Index mI = 0; mI < mc; ++mI) {
            acc -= std::log(std::max(std::abs(df(i, mI)), deriv_floor));
        }
        out[i] = acc / static_cast<double>(mc);
    }
    return out;
}

}  // namespace detail

std::vector<double> neg_entropy_grid(const GpCondModel& m, const EvalGrid& grid,
                                     const GpConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    Rng rng(seed);
    const auto draws = rng.normals(static_cast<std::size_t>(cfg.mc_samples));
    return detail::neg_entropy_grid_model(m, grid.points, draws, cfg.deriv_floor);
}

std::vector<double> neg_entropy_grid_draws(const GpCondModel& m, const EvalGrid& grid,
                                           const std::vector<double>& draws, double deriv_floor) {
    return detail::neg_entropy_grid_model(m, grid.points, draws, deriv_floor);
}

}  // namespace exocause
