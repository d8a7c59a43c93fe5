#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "exocause/dataset.hpp"
#include "exocause/errors.hpp"

using namespace exocause;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& content) {
    const fs::path p = fs::temp_directory_path() / name;
    std::ofstream out(p);
    out << content;
    return p;
}

PairedSample ramp_sample(std::size_t n) {
    PairedSample s;
    for (std::size_t i = 0; i < n; ++i) {
        s.x.push_back(static_cast<double>(i));
        s.y.push_back(static_cast<double>(2 * i + 1));
    }
    return s;
}

}  // namespace

TEST_CASE("load_pair parses whitespace rows in order") {
    std::string content;
    for (int i = 0; i < 25; ++i) {
        content += std::to_string(2 * i + 1) + ".0 " + std::to_string(2 * i + 2) + ".0\n";
    }
    const auto p = write_temp("pairs_ws.txt", content);
    const auto s = load_pair(p);
    CHECK(s.size() == 25);
    CHECK(s.x[0] == 1.0);
    CHECK(s.y[1] == 4.0);
}

TEST_CASE("load_pair reports the malformed line") {
    std::string content = "1.0 2.0\n";
    for (int i = 0; i < 20; ++i) content += "3.0 4.0\n";
    content += "abc 2.0\n";
    const auto p = write_temp("pairs_bad.txt", content);
    CHECK_THROWS_AS(load_pair(p), ParseError);
    try {
        load_pair(p);
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find(":22") != std::string::npos);
    }
}

TEST_CASE("load_pair accepts csv with header and comments") {
    std::string content = "# comment\nxcol, ycol\n";
    for (int i = 0; i < 30; ++i) content += std::to_string(i) + ", " + std::to_string(-i) + "\n";
    const auto p = write_temp("pairs_hdr.csv", content);
    const auto s = load_pair(p);
    CHECK(s.size() == 30);
    CHECK(s.y[3] == -3.0);
}

TEST_CASE("load_pair row count matches a line-count oracle on a big file") {
    std::string content;
    int expected = 0;
    for (int i = 0; i < 1200; ++i) {
        content += std::to_string(0.5 * i) + " " + std::to_string(1.5 * i) + "\n";
        ++expected;
    }
    const auto p = write_temp("pairs_big.txt", content);
    CHECK(load_pair(p).size() == static_cast<std::size_t>(expected));
}

TEST_CASE("load_pair rejects short files") {
    const auto p = write_temp("pairs_short.txt", "1 2\n3 4\n");
    CHECK_THROWS_AS(load_pair(p), TooFewRows);
}

TEST_CASE("subsample is identity under the cap") {
    const auto s = ramp_sample(300);
    const auto out = subsample(s, 500, 7);
    CHECK(out.size() == 300);
    CHECK(out.x == s.x);
}

TEST_CASE("subsample draws without replacement, deterministically") {
    const auto s = ramp_sample(1000);
    const auto out = subsample(s, 500, 7);
    REQUIRE(out.size() == 500);
    std::set<double> seen;
    for (std::size_t i = 0; i < out.size(); ++i) {
        // membership: every row came from the original, pairing intact
        CHECK(out.y[i] == 2 * out.x[i] + 1);
        CHECK(out.x[i] >= 0.0);
        CHECK(out.x[i] < 1000.0);
        seen.insert(out.x[i]);
    }
    CHECK(seen.size() == 500);  // no duplicates

    const auto again = subsample(s, 500, 7);
    CHECK(again.x == out.x);
    CHECK(again.y == out.y);
    const auto other = subsample(s, 500, 8);
    CHECK(other.x != out.x);
}

TEST_CASE("standardize gives zero mean unit std") {
    PairedSample s;
    for (int i = 0; i < 50; ++i) {
        s.x.push_back(3.0 + 2.0 * i);
        s.y.push_back(-1.0 + 0.1 * i * i);
    }
    const auto [out, t] = standardize(s);
    CHECK(std::abs(sample_mean(out.x)) < 1e-10);
    CHECK(std::abs(sample_std(out.x) - 1.0) < 1e-10);
    CHECK(std::abs(sample_mean(out.y)) < 1e-10);
    CHECK(std::abs(sample_std(out.y) - 1.0) < 1e-10);

    // second transform is the identity
    const auto [out2, t2] = standardize(out);
    CHECK(std::abs(t2.mean_x) < 1e-10);
    CHECK(std::abs(t2.std_x - 1.0) < 1e-10);
    CHECK(std::abs(t2.mean_y) < 1e-10);
    CHECK(std::abs(t2.std_y - 1.0) < 1e-10);
}

TEST_CASE("standardize two-point symmetry") {
    PairedSample s{{0.0, 2.0}, {-1.0, 1.0}};
    const auto [out, t] = standardize(s);
    CHECK(out.x[0] == doctest::Approx(-out.x[1]));
    CHECK(std::abs(sample_mean(out.x)) < 1e-12);
    CHECK(sample_std(out.x) == doctest::Approx(1.0));
}

TEST_CASE("standardize rejects constant columns") {
    PairedSample s = ramp_sample(30);
    for (auto& v : s.y) v = 5.0;
    CHECK_THROWS_AS(standardize(s), DegenerateVariable);
}

TEST_CASE("make_grid spans min..max evenly") {
    PairedSample s;
    for (int i = 0; i < 21; ++i) {
        s.x.push_back(i / 20.0);
        s.y.push_back(0.0);
    }
    const auto g = make_grid(s, Axis::X, 5);
    REQUIRE(g.size() == 5);
    CHECK(g.points[0] == 0.0);
    CHECK(g.points[1] == doctest::Approx(0.25));
    CHECK(g.points[2] == doctest::Approx(0.5));
    CHECK(g.points[4] == 1.0);
}

TEST_CASE("make_grid default 80 points hits the extremes with constant spacing") {
    auto s = ramp_sample(100);
    for (auto& v : s.x) v = v * 0.37 - 11.0;
    const auto g = make_grid(s, Axis::X);
    REQUIRE(g.size() == 80);
    CHECK(g.points.front() == -11.0);
    CHECK(g.points.back() == doctest::Approx(99 * 0.37 - 11.0));
    const double step = g.points[1] - g.points[0];
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        CHECK(std::abs((g.points[i + 1] - g.points[i]) - step) <= 1e-12 * std::abs(step));
    }
}

TEST_CASE("make_grid rejects degenerate axis") {
    PairedSample s = ramp_sample(30);
    for (auto& v : s.x) v = 1.0;
    CHECK_THROWS_AS(make_grid(s, Axis::X, 80), DegenerateVariable);
}

TEST_CASE("write_pair round-trips through load_pair") {
    PairedSample s;
    for (int i = 0; i < 40; ++i) {
        s.x.push_back(i * 0.123456789 - 2.0);
        s.y.push_back(i * -0.987654321 + 1.0);
    }
    const fs::path p = fs::temp_directory_path() / "pairs_rt.txt";
    write_pair(p, s);
    const auto back = load_pair(p);
    REQUIRE(back.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(back.x[i] == s.x[i]);
        CHECK(back.y[i] == s.y[i]);
    }
}
