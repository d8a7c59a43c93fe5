#include "exocause/gp_regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "exocause/dataset.hpp"
#include "exocause/errors.hpp"
#include "exocause/optim.hpp"

#include "chol.hpp"

namespace exocause {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

Eigen::MatrixXd sq_dist_matrix(const std::vector<double>& x) {
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd d(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double diff = x[i] - x[j];
            d(i, j) = diff * diff;
            d(j, i) = d(i, j);
        }
    }
    return d;
}

struct LmlEval {
    double value = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd alpha;
    bool ok = false;
};

LmlEval eval_lml(const Eigen::MatrixXd& d2, const Eigen::VectorXd& y, double log_ls,
                 double log_sf2, double log_sn2, Eigen::VectorXd* grad) {
    LmlEval out;
    const auto n = y.size();
    const double inv_ls2 = std::exp(-2.0 * log_ls);
    const double sf2 = std::exp(log_sf2);
    const double sn2 = std::exp(log_sn2);

    Eigen::MatrixXd kf = (d2 * (-0.5 * inv_ls2)).array().exp().matrix() * sf2;
    Eigen::MatrixXd k = kf;
    k.diagonal().array() += sn2;

    const linalg::Cholesky chol(std::move(k));
    if (!chol.ok()) return out;

    out.alpha = chol.solve(y);
    out.value = -0.5 * y.dot(out.alpha) - 0.5 * chol.log_det() -
                0.5 * static_cast<double>(n) * kLog2Pi;
    out.ok = std::isfinite(out.value);
    if (!out.ok) return out;

    if (grad) {
        Eigen::MatrixXd kinv = chol.inverse();
        Eigen::MatrixXd m = out.alpha * out.alpha.transpose() - kinv;
        // dK/dlog_ls = kf .* d2 / ls^2 ; dK/dlog_sf2 = kf ; dK/dlog_sn2 = sn2 I
        (*grad)(0) = 0.5 * (m.array() * kf.array() * d2.array()).sum() * inv_ls2;
        (*grad)(1) = 0.5 * (m.array() * kf.array()).sum();
        (*grad)(2) = 0.5 * sn2 * m.trace();
    }
    return out;
}

}  // namespace

double median_heuristic_lengthscale(const std::vector<double>& x) {
    std::vector<double> dist;
    dist.reserve(x.size() * (x.size() - 1) / 2);
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            const double d = std::abs(x[i] - x[j]);
            if (d > 0.0) dist.push_back(d);
        }
    }
    if (dist.empty()) return 1.0;
    const auto mid = dist.begin() + static_cast<std::ptrdiff_t>(dist.size() / 2);
    std::nth_element(dist.begin(), mid, dist.end());
    return *mid > 0.0 ? *mid : 1.0;
}

GpRegressionModel gp_regression_fixed(const std::vector<double>& x, const std::vector<double>& y,
                                      double lengthscale, double signal_var, double noise_var) {
    if (x.size() != y.size() || x.empty()) throw ShapeMismatch("gp regression input shapes");
    const Eigen::MatrixXd d2 = sq_dist_matrix(x);
    const Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(y.data(), y.size());

    GpRegressionModel m;
    m.train_x = x;
    m.log_lengthscale = std::log(lengthscale);
    m.log_signal_var = std::log(signal_var);
    m.log_noise_var = std::log(noise_var);
    const auto eval = eval_lml(d2, yv, m.log_lengthscale, m.log_signal_var, m.log_noise_var,
                               nullptr);
    if (!eval.ok) throw OptimizationFailure("gp regression kernel not positive definite");
    m.alpha = eval.alpha;
    m.log_marginal = eval.value;
    return m;
}

GpRegressionModel fit_gp_regression(const std::vector<double>& x, const std::vector<double>& y,
                                    int max_iters, double tol) {
    if (x.size() != y.size() || x.size() < 3) throw ShapeMismatch("gp regression input shapes");
    const Eigen::MatrixXd d2 = sq_dist_matrix(x);
    const Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(y.data(), y.size());
    const double var_y = std::max(sample_std(y) * sample_std(y), 1e-12);

    const Objective obj = [&](const Eigen::VectorXd& p, Eigen::VectorXd* grad) -> double {
        for (Eigen::Index i = 0; i < p.size(); ++i) {
            if (!std::isfinite(p(i)) || std::abs(p(i)) > 12.0) {
                return -std::numeric_limits<double>::infinity();
            }
        }
        const auto eval = eval_lml(d2, yv, p(0), p(1), p(2), grad);
        return eval.ok ? eval.value : -std::numeric_limits<double>::infinity();
    };

    Eigen::VectorXd p0(3);
    p0 << std::log(median_heuristic_lengthscale(x)), std::log(var_y), std::log(0.1 * var_y);
    const auto res = maximize_lbfgs(obj, p0, max_iters, tol);
    if (!std::isfinite(res.value)) throw OptimizationFailure("gp regression optimization failed");

    GpRegressionModel m;
    m.train_x = x;
    m.log_lengthscale = res.x(0);
    m.log_signal_var = res.x(1);
    m.log_noise_var = res.x(2);
    const auto eval = eval_lml(d2, yv, res.x(0), res.x(1), res.x(2), nullptr);
    if (!eval.ok) throw OptimizationFailure("gp regression final state not positive definite");
    m.alpha = eval.alpha;
    m.log_marginal = eval.value;
    return m;
}

double gp_predict_mean(const GpRegressionModel& m, double x) {
    const double inv_ls2 = std::exp(-2.0 * m.log_lengthscale);
    const double sf2 = std::exp(m.log_signal_var);
    double acc = 0.0;
    for (std::size_t j = 0; j < m.train_x.size(); ++j) {
        const double diff = x - m.train_x[j];
        acc += m.alpha(static_cast<Eigen::Index>(j)) *
               std::exp(-0.5 * diff * diff * inv_ls2);
    }
    return sf2 * acc;
}

std::vector<double> gp_residuals(const GpRegressionModel& m, const std::vector<double>& y) {
    // at the training points the posterior mean is y - sn2 * alpha
    const double sn2 = std::exp(m.log_noise_var);
    std::vector<double> r(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        r[i] = sn2 * m.alpha(static_cast<Eigen::Index>(i));
    }
    return r;
}

}  // namespace exocause
