#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "exocause/baselines.hpp"
#include "exocause/rng.hpp"
#include "exocause/synth.hpp"

using namespace exocause;

namespace {

double mean(const std::vector<double>& v) {
    double acc = 0;
    for (double x : v) acc += x;
    return acc / static_cast<double>(v.size());
}

double central_moment(const std::vector<double>& v, int k) {
    const double m = mean(v);
    double acc = 0;
    for (double x : v) acc += std::pow(x - m, k);
    return acc / static_cast<double>(v.size());
}

double excess_kurtosis(const std::vector<double>& v) {
    const double m2 = central_moment(v, 2);
    return central_moment(v, 4) / (m2 * m2) - 3.0;
}

double skewness(const std::vector<double>& v) {
    const double m2 = central_moment(v, 2);
    return central_moment(v, 3) / std::pow(m2, 1.5);
}

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
    const double ma = mean(a), mb = mean(b);
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

}  // namespace

TEST_CASE("power transform at q=1 is the identity on the normal draws") {
    const auto out = power_nongaussian(1000, 1.0, 3);
    Rng rng(3);
    for (double v : out) CHECK(v == rng.normal());
}

TEST_CASE("power transform keeps signs") {
    for (double q : {0.5, 1.0, 1.7, 3.0}) {
        const auto out = power_nongaussian(500, q, 11);
        Rng rng(11);
        for (double v : out) {
            const double z = rng.normal();
            CHECK(std::signbit(v) == std::signbit(z));
        }
    }
}

TEST_CASE("kurtosis moves with q") {
    // oracle: moment Monte Carlo; q>1 super-Gaussian, q<1 sub-Gaussian
    const auto super = power_nongaussian(50000, 2.0, 5);
    const auto sub = power_nongaussian(50000, 0.5, 5);
    CHECK(excess_kurtosis(super) > 0.5);
    CHECK(excess_kurtosis(sub) < -0.2);
}

TEST_CASE("q=1 passes a normality sanity check") {
    const auto z = power_nongaussian(50000, 1.0, 21);
    CHECK(std::abs(skewness(z)) < 0.1);
    CHECK(std::abs(excess_kurtosis(z)) < 0.2);
}

TEST_CASE("linear gaussian pair has correlation 1/sqrt(2)") {
    SynthConfig cfg;
    cfg.n = 5000;
    cfg.q = 1.0;
    cfg.b = 0.0;
    cfg.alpha_mix = 0.0;
    cfg.seed = 17;
    const auto s = gen_pair(cfg);
    CHECK(correlation(s.x, s.y) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.05 * std::sqrt(2.0)));
}

TEST_CASE("pure multiplicative noise keeps the sign of x") {
    SynthConfig cfg;
    cfg.n = 2000;
    cfg.alpha_mix = 1.0;
    cfg.b = 0.0;
    cfg.seed = 23;
    const auto s = gen_pair(cfg);
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.x[i] != 0.0) CHECK(s.y[i] / s.x[i] > 0.0);
    }
}

TEST_CASE("cubic mechanism: binned conditional means track x + x^3") {
    // oracle: binned regression against the known curve
    SynthConfig cfg;
    cfg.n = 20000;
    cfg.b = 1.0;
    cfg.alpha_mix = 0.0;
    cfg.seed = 31;
    const auto s = gen_pair(cfg);

    const int bins = 20;
    const double lo = -1.5, hi = 1.5;
    std::vector<double> sum(bins, 0), sum2(bins, 0);
    std::vector<int> count(bins, 0);
    std::vector<double> center(bins, 0);
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.x[i] < lo || s.x[i] >= hi) continue;
        const int bin = static_cast<int>((s.x[i] - lo) / (hi - lo) * bins);
        sum[bin] += s.y[i];
        sum2[bin] += s.y[i] * s.y[i];
        center[bin] += s.x[i];
        ++count[bin];
    }
    for (int b = 0; b < bins; ++b) {
        if (count[b] < 30) continue;
        const double m = sum[b] / count[b];
        const double xc = center[b] / count[b];
        const double var = sum2[b] / count[b] - m * m;
        const double se = std::sqrt(var / count[b]);
        const double curve = xc + xc * xc * xc;
        CHECK(std::abs(m - curve) < 3.0 * se + 0.05);
    }
}

TEST_CASE("confounded model at beta=0 matches the scaled pair mechanism exactly") {
    SynthConfig cfg;
    cfg.n = 300;
    cfg.q = 1.5;
    cfg.b = 0.0;
    cfg.alpha_mix = 0.0;
    cfg.seed = 7;
    const auto pair = gen_pair(cfg);
    auto conf_cfg = cfg;
    conf_cfg.beta_conf = 0.0;
    const auto conf = gen_confounded(conf_cfg);
    // same seed, same base draws: x_conf = 2 x_pair and, with b=0 and additive
    // noise, y_pair = x_pair + e so y_conf = 0.6 (2 x_pair + e) = 0.6 (x_pair + y_pair)
    for (std::size_t i = 0; i < cfg.n; ++i) {
        CHECK(conf.x[i] == doctest::Approx(2.0 * pair.x[i]).epsilon(1e-15));
        CHECK(conf.y[i] ==
              doctest::Approx(0.6 * (pair.x[i] + pair.y[i])).epsilon(1e-12));
    }
}

TEST_CASE("strong confounder couples x and z") {
    // oracle: variance decomposition; at beta=1, x = e_x + z so corr(x, z) is
    // far above 0.5
    SynthConfig cfg;
    cfg.n = 5000;
    cfg.q = 1.0;
    cfg.b = 0.0;
    cfg.alpha_mix = 0.0;
    cfg.beta_conf = 1.0;
    cfg.seed = 13;
    const auto s = gen_confounded(cfg);
    const auto z = power_nongaussian(cfg.n, cfg.q, child_seed(cfg.seed, 2));
    CHECK(correlation(s.x, z) > 0.5);
}

TEST_CASE("generators are deterministic") {
    SynthConfig cfg;
    cfg.n = 100;
    cfg.q = 1.5;
    cfg.b = 0.3;
    cfg.alpha_mix = 0.2;
    cfg.seed = 77;
    const auto a = gen_pair(cfg);
    const auto b = gen_pair(cfg);
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
    cfg.beta_conf = 0.6;
    const auto c = gen_confounded(cfg);
    const auto d = gen_confounded(cfg);
    CHECK(c.x == d.x);
    CHECK(c.y == d.y);
}

TEST_CASE("additive-noise pairs pass a residual independence check") {
    // residual y - (x + b x^3) should be independent of x
    int pass = 0;
    for (int seed = 0; seed < 10; ++seed) {
        SynthConfig cfg;
        cfg.n = 2000;
        cfg.b = 1.0;
        cfg.alpha_mix = 0.0;
        cfg.seed = static_cast<std::uint64_t>(seed);
        const auto s = gen_pair(cfg);
        std::vector<double> res(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            res[i] = s.y[i] - (s.x[i] + s.x[i] * s.x[i] * s.x[i]);
        }
        if (hsic_gaussian_pvalue(s.x, res, 199, 1000 + seed) > 0.01) ++pass;
    }
    CHECK(pass >= 8);
}
