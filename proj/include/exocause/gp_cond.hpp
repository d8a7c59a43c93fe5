#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "exocause/dataset.hpp"

namespace exocause {

struct GpConfig {
    int max_iters = 500;        // optimizer iteration cap
    double tol = 1e-6;          // relative objective-change stop rule
    int restarts = 1;           // optimizer runs; first is deterministic, extras seeded
    double jitter = 1e-6;       // diagonal noise added to the kernel matrix
    int mc_samples = 100;       // Monte-Carlo draws for the grid negative entropy
    double deriv_floor = 1e-8;  // |df/de| floor before taking logs
    int refit_iters = 40;       // iteration cap for warm-started replicate refits

    void validate() const;
};

/// Latent-noise GP conditional model: y = f(x, e) with e ~ N(0,1) and f given
/// a zero-mean GP prior with squared-exponential kernel over (x, e). Fitted by
/// MAP over the latent values and kernel hyperparameters, with the latents
/// constrained to zero mean and unit sample std so they stay on the scale of
/// their own prior (the unconstrained objective can trade latent shrinkage
/// against signal-variance growth without bound).
struct GpCondModel {
    std::vector<double> train_x;
    std::vector<double> latent_e;
    std::vector<double> weights;  // dual coefficients K^{-1} y
    double log_lengthscale_x = 0.0;
    double log_lengthscale_e = 0.0;
    double log_signal_var = 0.0;
    double objective = 0.0;  // final penalized log-likelihood
};

/// Optional warm start: hyperparameters carried over from a model fitted on
/// the full sample when refitting on a resample. When latent_e is empty the
/// latents are initialized from the resample's own preliminary-regression
/// residuals, which keeps the refit responsive to the resample's shape.
struct GpWarmStart {
    std::vector<double> latent_e;
    double log_lengthscale_x = 0.0;
    double log_lengthscale_e = 0.0;
    double log_signal_var = 0.0;
};

/// MAP fit. Deterministic given the seed; the seed only enters through the
/// perturbed initializations of restarts beyond the first.
GpCondModel fit_gpcm(const PairedSample& s, const GpConfig& cfg, std::uint64_t seed,
                     const GpWarmStart* warm = nullptr);

/// Posterior-mean value and its analytic partial derivative in e.
std::pair<double, double> predict_f(const GpCondModel& m, double x, double e);

/// Generic (f, df/de) callable; lets the density and entropy routines run
/// against closed-form surrogates as well as fitted models.
using CondFn = std::function<std::pair<double, double>(double, double)>;

/// log p(y|x) by change of variables: solves f(x, e) = y for e over a
/// bracketed scan and sums density contributions over all roots found.
double cond_log_density_fn(const CondFn& f, double x, double y, double deriv_floor);
double cond_log_density(const GpCondModel& m, double x, double y, double deriv_floor = 1e-8);

/// Grid negative entropies H(x_i) = mean_m [log phi(e_m) - log max(|df/de|, floor)]
/// using the supplied standard-normal draws (common random numbers).
std::vector<double> neg_entropy_grid_fn(const CondFn& f, const std::vector<double>& grid_points,
                                        const std::vector<double>& draws, double deriv_floor);
std::vector<double> neg_entropy_grid(const GpCondModel& m, const EvalGrid& grid,
                                     const GpConfig& cfg, std::uint64_t seed);

/// Same quantity with caller-supplied draws, used when the draws are shared
/// across bootstrap replicates.
std::vector<double> neg_entropy_grid_draws(const GpCondModel& m, const EvalGrid& grid,
                                           const std::vector<double>& draws, double deriv_floor);

}  // namespace exocause
