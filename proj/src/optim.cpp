#include "exocause/optim.hpp"

#include <cmath>
#include <deque>
#include <limits>

namespace exocause {

namespace {

bool finite(double v) { return std::isfinite(v); }

}  // namespace

OptimResult maximize_lbfgs(const Objective& f, const Eigen::VectorXd& x0, int max_iters,
                           double tol, int memory) {
    const auto n = x0.size();
    Eigen::VectorXd x = x0;
    Eigen::VectorXd grad(n);
    double fx = f(x, &grad);

    OptimResult best;
    best.x = x;
    best.value = fx;
    if (!finite(fx)) return best;

    std::deque<Eigen::VectorXd> s_hist, y_hist;
    std::deque<double> rho_hist;

    Eigen::VectorXd direction(n), x_new(n), grad_new(n);
    double step_init = 1.0;

    for (int iter = 0; iter < max_iters; ++iter) {
        // two-loop recursion for the inverse-Hessian action on the gradient
        direction = grad;
        std::vector<double> alpha_coef(s_hist.size());
        for (std::size_t i = s_hist.size(); i-- > 0;) {
            alpha_coef[i] = rho_hist[i] * s_hist[i].dot(direction);
            direction -= alpha_coef[i] * y_hist[i];
        }
        if (!s_hist.empty()) {
            const double ys = y_hist.back().dot(s_hist.back());
            const double yy = y_hist.back().squaredNorm();
            if (ys > 0.0 && yy > 0.0) direction *= ys / yy;
        }
        for (std::size_t i = 0; i < s_hist.size(); ++i) {
            const double beta = rho_hist[i] * y_hist[i].dot(direction);
            direction += (alpha_coef[i] - beta) * s_hist[i];
        }

        double dir_deriv = grad.dot(direction);
        if (!finite(dir_deriv) || dir_deriv <= 0.0) {
            // not an ascent direction; fall back to steepest ascent
            direction = grad;
            dir_deriv = grad.squaredNorm();
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            if (dir_deriv <= 0.0) break;
        }

        // Armijo backtracking; the first trial evaluates with the gradient so
        // an immediately accepted step (the common case) costs one factorization
        double step = step_init;
        const double grad_norm = std::sqrt(grad.squaredNorm());
        if (s_hist.empty() && grad_norm > 1.0) step = std::min(step, 1.0 / grad_norm);
        constexpr double c1 = 1e-4;
        double fx_new = -std::numeric_limits<double>::infinity();
        bool accepted = false;
        bool have_grad_new = false;
        for (int ls = 0; ls < 50; ++ls) {
            x_new = x + step * direction;
            const bool with_grad = ls == 0;
            fx_new = f(x_new, with_grad ? &grad_new : nullptr);
            if (finite(fx_new) && fx_new >= fx + c1 * step * dir_deriv) {
                accepted = true;
                have_grad_new = with_grad && grad_new.size() == x.size();
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;

        if (!have_grad_new) f(x_new, &grad_new);
        const Eigen::VectorXd s_vec = x_new - x;
        const Eigen::VectorXd y_vec = grad_new - grad;
        const double sy = s_vec.dot(y_vec);
        // curvature condition for the minimization of -f: s.(-y) > 0
        if (finite(sy) && -sy > 1e-12 * s_vec.norm() * y_vec.norm()) {
            s_hist.push_back(s_vec);
            y_hist.push_back(-y_vec);
            rho_hist.push_back(1.0 / (-sy));
            if (static_cast<int>(s_hist.size()) > memory) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }

        const double change = fx_new - fx;
        x.swap(x_new);
        grad.swap(grad_new);
        fx = fx_new;
        best.iterations = iter + 1;
        if (fx > best.value) {
            best.value = fx;
            best.x = x;
        }
        if (change <= tol * (std::abs(fx) + 1e-12)) {
            best.converged = true;
            break;
        }
        step_init = 1.0;
    }
    return best;
}

}  // namespace exocause
