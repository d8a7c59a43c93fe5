#pragma once

#include <cstdint>
#include <string>

#include "exocause/dataset.hpp"
#include "exocause/gp_cond.hpp"
#include "exocause/hsic_test.hpp"

namespace exocause {

struct InferenceConfig {
    int b = 1000;             // bootstrap replications
    int grid_count = 80;      // evaluation grid size
    int permutations = 1000;  // permutation-test draws
    double alpha = 0.01;      // decision threshold on the p-values
    int subsample_cap = 500;  // rows kept before the pipeline runs
    GpConfig gp;
    std::uint64_t seed = 0;
    int workers = 0;  // 0 = hardware concurrency

    void validate() const;
};

enum class Direction { XtoY, YtoX };

enum class Outcome { XcausesY, YcausesX, NonIdentifiable, ConfounderSuspected };

const char* to_string(Outcome o);
const char* to_string(Direction d);

struct DirectionDecision {
    Outcome outcome = Outcome::NonIdentifiable;
    ExogeneityTestResult test_xy;
    ExogeneityTestResult test_yx;
    InferenceConfig config;
};

/// One directional exogeneity test: standardize, build the grid on the
/// conditioning variable, bootstrap the R/S matrices, permutation p-value.
/// For YtoX the variable roles are swapped before the pipeline runs; seeds do
/// not depend on the direction flag, so testing YtoX on (x, y) equals testing
/// XtoY on the column-swapped sample.
ExogeneityTestResult if_exogeneity(const PairedSample& s, Direction direction,
                                   const InferenceConfig& cfg);

/// Maps the two p-values to the four-way outcome. "Holds" means p > alpha
/// strictly; a p-value equal to alpha counts as rejection.
DirectionDecision decide(const ExogeneityTestResult& xy, const ExogeneityTestResult& yx,
                         double alpha);

/// Both directional tests plus the decision.
DirectionDecision infer_direction(const PairedSample& s, const InferenceConfig& cfg);

}  // namespace exocause
