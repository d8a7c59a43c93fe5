#include "exocause/direction.hpp"

#include "exocause/bootstrap.hpp"
#include "exocause/errors.hpp"
#include "exocause/rng.hpp"

namespace exocause {

namespace {

// seed streams inside the per-direction pipeline; shared by both directions
// so that testing YtoX on (x, y) equals testing XtoY on the swapped sample
constexpr std::uint64_t kSubsampleStream = 10;
constexpr std::uint64_t kPlanStream = 11;
constexpr std::uint64_t kBuildStream = 12;
constexpr std::uint64_t kPermStream = 13;

}  // namespace

void InferenceConfig::validate() const {
    if (b < 2) throw ConfigError("b must be at least 2");
    if (grid_count < 2) throw ConfigError("grid_count must be at least 2");
    if (permutations < 100) throw ConfigError("permutations must be at least 100");
    if (!(alpha > 0.0 && alpha < 0.5)) throw ConfigError("alpha must lie in (0, 0.5)");
    if (subsample_cap < static_cast<int>(kMinSamples)) {
        throw ConfigError("subsample_cap must be at least " + std::to_string(kMinSamples));
    }
    gp.validate();
}

const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::XcausesY: return "XcausesY";
        case Outcome::YcausesX: return "YcausesX";
        case Outcome::NonIdentifiable: return "NonIdentifiable";
        case Outcome::ConfounderSuspected: return "ConfounderSuspected";
    }
    return "?";
}

const char* to_string(Direction d) {
    return d == Direction::XtoY ? "x-to-y" : "y-to-x";
}

ExogeneityTestResult if_exogeneity(const PairedSample& s, Direction direction,
                                   const InferenceConfig& cfg) {
    cfg.validate();
    s.validate();

    const PairedSample oriented = direction == Direction::YtoX ? s.swapped() : s;
    auto [std_sample, transform] = standardize(oriented);

    const EvalGrid grid = make_grid(std_sample, Axis::X,
                                    static_cast<std::size_t>(cfg.grid_count));
    const ReplicatePlan plan = plan_replicates(std_sample.size(),
                                               static_cast<std::size_t>(cfg.b),
                                               child_seed(cfg.seed, kPlanStream));
    const StatMatrices matrices = build_stat_matrices(std_sample, grid, plan, cfg.gp,
                                                      child_seed(cfg.seed, kBuildStream),
                                                      cfg.workers);
    return permutation_pvalue(matrices, cfg.permutations, child_seed(cfg.seed, kPermStream));
}

DirectionDecision decide(const ExogeneityTestResult& xy, const ExogeneityTestResult& yx,
                         double alpha) {
    const bool holds_xy = xy.p_value > alpha;
    const bool holds_yx = yx.p_value > alpha;

    DirectionDecision d;
    d.test_xy = xy;
    d.test_yx = yx;
    if (holds_xy && holds_yx) {
        d.outcome = Outcome::NonIdentifiable;
    } else if (holds_xy) {
        d.outcome = Outcome::XcausesY;
    } else if (holds_yx) {
        d.outcome = Outcome::YcausesX;
    } else {
        d.outcome = Outcome::ConfounderSuspected;
    }
    return d;
}

DirectionDecision infer_direction(const PairedSample& s, const InferenceConfig& cfg) {
    cfg.validate();
    s.validate();
    const PairedSample capped = subsample(s, static_cast<std::size_t>(cfg.subsample_cap),
                                          child_seed(cfg.seed, kSubsampleStream));
    const ExogeneityTestResult xy = if_exogeneity(capped, Direction::XtoY, cfg);
    const ExogeneityTestResult yx = if_exogeneity(capped, Direction::YtoX, cfg);
    DirectionDecision d = decide(xy, yx, cfg.alpha);
    d.config = cfg;
    return d;
}

}  // namespace exocause
