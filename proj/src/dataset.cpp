#include "exocause/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "exocause/errors.hpp"
#include "exocause/rng.hpp"

namespace exocause {

double sample_mean(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
    const double m = sample_mean(v);
    double ss = 0.0;
    for (double val : v) ss += (val - m) * (val - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

void PairedSample::validate() const {
    if (x.size() != y.size()) {
        throw ShapeMismatch("paired sample columns differ in length: " +
                            std::to_string(x.size()) + " vs " + std::to_string(y.size()));
    }
    if (x.size() < kMinSamples) {
        throw TooFewRows("need at least " + std::to_string(kMinSamples) + " rows, got " +
                         std::to_string(x.size()));
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
            throw ParseError("non-finite value at row " + std::to_string(i + 1));
        }
    }
}

namespace {

bool parse_field(const std::string& field, double& out) {
    const char* begin = field.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end != begin && *end == '\0' && std::isfinite(out);
}

std::vector<std::string> split_row(const std::string& line, bool csv) {
    std::vector<std::string> fields;
    if (csv) {
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            // trim surrounding whitespace
            const auto first = field.find_first_not_of(" \t\r");
            if (first == std::string::npos) {
                fields.emplace_back();
            } else {
                const auto last = field.find_last_not_of(" \t\r");
                fields.push_back(field.substr(first, last - first + 1));
            }
        }
    } else {
        std::stringstream ss(line);
        std::string field;
        while (ss >> field) fields.push_back(field);
    }
    return fields;
}

}  // namespace

PairedSample load_pair(const std::filesystem::path& path, PairFormat format) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open " + path.string());
    }

    PairedSample s;
    std::string line;
    std::size_t line_no = 0;
    bool warned_extra = false;
    bool first_data_row = true;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        if (line[start] == '#') continue;

        const bool csv = format == PairFormat::Csv ||
                         (format == PairFormat::Auto && line.find(',') != std::string::npos);
        const auto fields = split_row(line, csv);
        if (fields.size() < 2) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) +
                             ": expected two numeric fields");
        }
        if (fields.size() > 2 && !warned_extra) {
            std::cerr << "warning: " << path.string() << " has more than two columns; extras ignored\n";
            warned_extra = true;
        }

        double vx = 0.0, vy = 0.0;
        const bool ok = parse_field(fields[0], vx) && parse_field(fields[1], vy);
        if (!ok) {
            // a non-numeric first row is a header
            if (first_data_row) {
                first_data_row = false;
                continue;
            }
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": malformed row '" +
                             line + "'");
        }
        first_data_row = false;
        s.x.push_back(vx);
        s.y.push_back(vy);
    }

    if (s.size() < kMinSamples) {
        throw TooFewRows(path.string() + ": " + std::to_string(s.size()) +
                         " rows parsed, need at least " + std::to_string(kMinSamples));
    }
    s.validate();
    return s;
}

void write_pair(const std::filesystem::path& path, const PairedSample& s) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    char buf[80];
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", s.x[i], s.y[i]);
        out << buf;
    }
}

PairedSample subsample(const PairedSample& s, std::size_t cap, std::uint64_t seed) {
    if (cap < kMinSamples) {
        throw ConfigError("subsample cap must be at least " + std::to_string(kMinSamples));
    }
    if (s.size() <= cap) return s;

    // Partial Fisher-Yates over the index range, then restore original order.
    std::vector<std::uint32_t> idx(s.size());
    std::iota(idx.begin(), idx.end(), 0u);
    Rng rng(seed);
    for (std::size_t i = 0; i < cap; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(idx.size() - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(cap);
    std::sort(idx.begin(), idx.end());

    PairedSample out;
    out.x.reserve(cap);
    out.y.reserve(cap);
    for (auto i : idx) {
        out.x.push_back(s.x[i]);
        out.y.push_back(s.y[i]);
    }
    return out;
}

std::pair<PairedSample, StandardizeTransform> standardize(const PairedSample& s) {
    StandardizeTransform t;
    t.mean_x = sample_mean(s.x);
    t.std_x = sample_std(s.x);
    t.mean_y = sample_mean(s.y);
    t.std_y = sample_std(s.y);
    if (!(t.std_x > 0.0)) throw DegenerateVariable("x is constant");
    if (!(t.std_y > 0.0)) throw DegenerateVariable("y is constant");

    PairedSample out;
    out.x.resize(s.size());
    out.y.resize(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        out.x[i] = (s.x[i] - t.mean_x) / t.std_x;
        out.y[i] = (s.y[i] - t.mean_y) / t.std_y;
    }
    return {std::move(out), t};
}

EvalGrid make_grid(const PairedSample& s, Axis axis, std::size_t count) {
    if (count < 2) throw ConfigError("grid needs at least 2 points");
    const auto& v = axis == Axis::X ? s.x : s.y;
    const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
    const double lo = *lo_it, hi = *hi_it;
    if (!(lo < hi)) throw DegenerateVariable("grid variable has min == max");

    EvalGrid g;
    g.points.resize(count);
    const double span = hi - lo;
    for (std::size_t i = 0; i < count; ++i) {
        g.points[i] = lo + span * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    g.points.front() = lo;
    g.points.back() = hi;
    return g;
}

}  // namespace exocause
