#include "exocause/synth.hpp"

#include <cmath>

#include "exocause/errors.hpp"
#include "exocause/rng.hpp"

namespace exocause {

namespace {

// base-draw streams; gen_pair and gen_confounded share the assignments so
// matched seeds produce matched draws
constexpr std::uint64_t kCauseStream = 0;  // X, or E_X in the confounded model
constexpr std::uint64_t kNoiseStream = 1;  // E
constexpr std::uint64_t kConfounderStream = 2;  // Z

}  // namespace

void SynthConfig::validate() const {
    if (n == 0) throw ConfigError("n must be positive");
    if (!(q > 0.0)) throw ConfigError("q must be positive");
    if (!(alpha_mix >= 0.0 && alpha_mix <= 1.0)) throw ConfigError("alpha_mix must lie in [0, 1]");
    if (!(beta_conf >= 0.0 && beta_conf <= 1.0)) throw ConfigError("beta_conf must lie in [0, 1]");
}

std::vector<double> power_nongaussian(std::size_t n, double q, std::uint64_t seed) {
    if (n == 0) throw ConfigError("n must be positive");
    Rng rng(seed);
    std::vector<double> out(n);
    for (auto& v : out) {
        const double z = rng.normal();
        v = std::copysign(std::pow(std::abs(z), q), z);
    }
    return out;
}

PairedSample gen_pair(const SynthConfig& cfg) {
    cfg.validate();
    if (cfg.beta_conf != 0.0) throw ConfigError("gen_pair requires beta_conf == 0");

    const auto x = power_nongaussian(cfg.n, cfg.q, child_seed(cfg.seed, kCauseStream));
    const auto e = power_nongaussian(cfg.n, cfg.q, child_seed(cfg.seed, kNoiseStream));

    PairedSample s;
    s.x = x;
    s.y.resize(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        const double mech = x[i] + cfg.b * x[i] * x[i] * x[i];
        s.y[i] = mech * std::exp(cfg.alpha_mix * e[i]) + (1.0 - cfg.alpha_mix) * e[i];
    }
    return s;
}

PairedSample gen_confounded(const SynthConfig& cfg) {
    cfg.validate();
    const double beta = cfg.beta_conf;

    const auto ex = power_nongaussian(cfg.n, cfg.q, child_seed(cfg.seed, kCauseStream));
    const auto e = power_nongaussian(cfg.n, cfg.q, child_seed(cfg.seed, kNoiseStream));
    const auto z = power_nongaussian(cfg.n, cfg.q, child_seed(cfg.seed, kConfounderStream));

    PairedSample s;
    s.x.resize(cfg.n);
    s.y.resize(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        const double x = (2.0 - beta) * ex[i] + beta * z[i];
        const double mech = x + cfg.b * x * x * x;
        const double noisy = mech * std::exp(cfg.alpha_mix * e[i]) + (1.0 - cfg.alpha_mix) * e[i];
        s.x[i] = x;
        s.y[i] = 0.3 * (2.0 - beta) * noisy + beta * z[i];
    }
    return s;
}

}  // namespace exocause
