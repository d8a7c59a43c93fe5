#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace exocause {

inline constexpr std::size_t kMinSamples = 20;

/// Paired observations of the two variables, row order preserved.
struct PairedSample {
    std::vector<double> x;
    std::vector<double> y;

    std::size_t size() const { return x.size(); }

    /// Throws if lengths differ, n < kMinSamples, or any entry is non-finite.
    void validate() const;

    /// Same rows with the variable roles exchanged.
    PairedSample swapped() const { return PairedSample{y, x}; }
};

enum class PairFormat { Auto, Whitespace, Csv };

/// Reads a two-column pair file. Lines starting with '#' and blank lines are
/// skipped; a non-numeric first row is treated as a CSV header. Extra columns
/// beyond the first two are ignored (a warning is emitted once on stderr).
PairedSample load_pair(const std::filesystem::path& path, PairFormat format = PairFormat::Auto);

/// Writes rows as "x y" lines, round-trip precision.
void write_pair(const std::filesystem::path& path, const PairedSample& s);

/// Uniform subsample without replacement when n exceeds cap; identity otherwise.
/// Kept rows appear in their original order.
PairedSample subsample(const PairedSample& s, std::size_t cap, std::uint64_t seed);

struct StandardizeTransform {
    double mean_x = 0.0;
    double std_x = 1.0;
    double mean_y = 0.0;
    double std_y = 1.0;
};

/// Rescales both variables to zero mean and unit sample standard deviation
/// (n-1 denominator). Throws DegenerateVariable on a constant column.
std::pair<PairedSample, StandardizeTransform> standardize(const PairedSample& s);

enum class Axis { X, Y };

/// Fixed evaluation grid: evenly spaced points spanning the chosen variable.
struct EvalGrid {
    std::vector<double> points;

    std::size_t size() const { return points.size(); }
};

EvalGrid make_grid(const PairedSample& s, Axis axis, std::size_t count = 80);

double sample_mean(const std::vector<double>& v);
double sample_std(const std::vector<double>& v);

}  // namespace exocause
