#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace exocause {

/// Plain GP regression of y on x with a squared-exponential kernel plus
/// observation noise. Used for latent initialization and the additive-noise
/// baseline.
struct GpRegressionModel {
    std::vector<double> train_x;
    Eigen::VectorXd alpha;  // K^{-1} y
    double log_lengthscale = 0.0;
    double log_signal_var = 0.0;
    double log_noise_var = 0.0;
    double log_marginal = 0.0;
};

/// Median of pairwise absolute differences; falls back to the data std when
/// all points coincide.
double median_heuristic_lengthscale(const std::vector<double>& x);

/// Fits with fixed hyperparameters (single Cholesky).
GpRegressionModel gp_regression_fixed(const std::vector<double>& x, const std::vector<double>& y,
                                      double lengthscale, double signal_var, double noise_var);

/// Fits hyperparameters by maximizing the log marginal likelihood.
GpRegressionModel fit_gp_regression(const std::vector<double>& x, const std::vector<double>& y,
                                    int max_iters = 200, double tol = 1e-7);

double gp_predict_mean(const GpRegressionModel& m, double x);

/// y_i minus the posterior mean at the training points.
std::vector<double> gp_residuals(const GpRegressionModel& m, const std::vector<double>& y);

}  // namespace exocause
