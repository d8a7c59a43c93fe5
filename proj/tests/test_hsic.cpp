#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "exocause/errors.hpp"
#include "exocause/hsic_test.hpp"
#include "exocause/rng.hpp"

using namespace exocause;

namespace {

Eigen::MatrixXd centered_random(Eigen::Index n, Eigen::Index b, Rng& rng) {
    Eigen::MatrixXd m(n, b);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < b; ++j) m(i, j) = rng.normal();
    }
    return m.colwise() - m.rowwise().mean();
}

StatMatrices wrap(Eigen::MatrixXd r, Eigen::MatrixXd s) {
    StatMatrices m;
    m.r_raw = r;
    m.s_raw = s;
    m.r = r.colwise() - r.rowwise().mean();
    m.s = s.colwise() - s.rowwise().mean();
    m.b_effective = static_cast<std::size_t>(r.cols());
    return m;
}

double naive_four_index(const Eigen::MatrixXd& r, const Eigen::MatrixXd& s) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < r.rows(); ++i) {
        for (Eigen::Index j = 0; j < s.rows(); ++j) {
            for (Eigen::Index b = 0; b < r.cols(); ++b) {
                for (Eigen::Index d = 0; d < r.cols(); ++d) {
                    acc += r(i, b) * s(j, b) * r(i, d) * s(j, d);
                }
            }
        }
    }
    return acc;
}

}  // namespace

TEST_CASE("hand-computed 1x2 statistic") {
    Eigen::MatrixXd r(1, 2), s(1, 2);
    r << 1.0, -1.0;
    s << 1.0, -1.0;
    CHECK(hsic_linear_stat(r, s) == doctest::Approx(4.0));

    Eigen::MatrixXd z = Eigen::MatrixXd::Zero(1, 2);
    CHECK(hsic_linear_stat(r, z) == doctest::Approx(0.0));
}

TEST_CASE("statistic is non-negative and zero iff RS' is zero") {
    Rng rng(2);
    const auto r = centered_random(6, 12, rng);
    const auto s = centered_random(6, 12, rng);
    CHECK(hsic_linear_stat(r, s) >= 0.0);
    // orthogonal construction: s2 has column pattern orthogonal to every r row
    Eigen::MatrixXd s2 = Eigen::MatrixXd::Zero(6, 12);
    CHECK(hsic_linear_stat(r, s2) == doctest::Approx(0.0));
}

TEST_CASE("gram and cross routes agree with the brute-force loop") {
    Rng rng(3);
    const auto r = centered_random(5, 8, rng);
    const auto s = centered_random(5, 8, rng);
    const double naive = naive_four_index(r, s);
    CHECK(hsic_linear_stat_gram(r, s) == doctest::Approx(naive).epsilon(1e-10));
    CHECK(hsic_linear_stat_cross(r, s) == doctest::Approx(naive).epsilon(1e-10));
    CHECK(hsic_linear_stat(r, s) == doctest::Approx(naive).epsilon(1e-10));
}

TEST_CASE("route agreement on random shapes") {
    Rng rng(5);
    for (int t = 0; t < 20; ++t) {
        const auto n = static_cast<Eigen::Index>(2 + rng.below(40));
        const auto b = static_cast<Eigen::Index>(2 + rng.below(60));
        const auto r = centered_random(n, b, rng);
        const auto s = centered_random(n, b, rng);
        const double g = hsic_linear_stat_gram(r, s);
        const double c = hsic_linear_stat_cross(r, s);
        CHECK(std::abs(g - c) <= 1e-10 * std::max(1.0, std::abs(g)));
    }
}

TEST_CASE("shape mismatch raises") {
    Rng rng(7);
    const auto r = centered_random(4, 6, rng);
    const auto s = centered_random(4, 7, rng);
    CHECK_THROWS_AS(hsic_linear_stat(r, s), ShapeMismatch);
}

TEST_CASE("joint column permutation leaves the statistic unchanged") {
    Rng rng(11);
    const auto r = centered_random(7, 15, rng);
    const auto s = centered_random(7, 15, rng);
    const double before = hsic_linear_stat(r, s);

    std::vector<int> perm(15);
    for (int i = 0; i < 15; ++i) perm[i] = i;
    rng.shuffle(perm);
    Eigen::MatrixXd rp(7, 15), sp(7, 15);
    for (int j = 0; j < 15; ++j) {
        rp.col(j) = r.col(perm[static_cast<std::size_t>(j)]);
        sp.col(j) = s.col(perm[static_cast<std::size_t>(j)]);
    }
    const double after = hsic_linear_stat(rp, sp);
    CHECK(std::abs(after - before) <= 1e-10 * std::abs(before));
}

TEST_CASE("row scaling is quadratic for one-row matrices") {
    Eigen::MatrixXd r(1, 6), s(1, 6);
    Rng rng(13);
    for (int j = 0; j < 6; ++j) {
        r(0, j) = rng.normal();
        s(0, j) = rng.normal();
    }
    r = r.colwise() - r.rowwise().mean().eval();
    s = s.colwise() - s.rowwise().mean().eval();
    const double base = hsic_linear_stat(r, s);
    const double scaled = hsic_linear_stat((3.0 * r).eval(), s);
    CHECK(scaled == doctest::Approx(9.0 * base).epsilon(1e-12));
}

TEST_CASE("self-dependence is detected") {
    Rng rng(17);
    const auto r = centered_random(10, 50, rng);
    const auto m = wrap(r, r);
    const auto res = permutation_pvalue(m, 500, 99);
    CHECK(res.p_value <= 0.01);
    CHECK(res.statistic > 0.0);
    CHECK(res.permutations == 500);
    CHECK(res.b_effective == 50);
}

TEST_CASE("p-value respects the +1 smoothing floor") {
    Rng rng(19);
    const auto r = centered_random(10, 40, rng);
    const auto m = wrap(r, r);
    const auto res = permutation_pvalue(m, 200, 1);
    CHECK(res.p_value >= 1.0 / 201.0);
    CHECK(res.p_value <= 1.0);
}

TEST_CASE("permutation test is deterministic given the seed") {
    Rng rng(23);
    const auto r = centered_random(8, 30, rng);
    const auto s = centered_random(8, 30, rng);
    const auto m = wrap(r, s);
    const auto a = permutation_pvalue(m, 300, 5);
    const auto b = permutation_pvalue(m, 300, 5);
    CHECK(a.p_value == b.p_value);
    CHECK(a.statistic == b.statistic);
}

TEST_CASE("preconditions") {
    Rng rng(29);
    const auto r = centered_random(5, 8, rng);
    const auto m = wrap(r, r);
    CHECK_THROWS_AS(permutation_pvalue(m, 0, 1), ConfigError);
    CHECK_THROWS_AS(permutation_pvalue(m, 99, 1), ConfigError);
    const auto tiny = wrap(centered_random(5, 4, rng), centered_random(5, 4, rng));
    CHECK_THROWS_AS(permutation_pvalue(tiny, 500, 1), ConfigError);
}
