#include "exocause/report.hpp"

#include <nlohmann/json.hpp>

namespace exocause {

namespace {

nlohmann::ordered_json test_to_json(const ExogeneityTestResult& t) {
    nlohmann::ordered_json j;
    j["statistic"] = t.statistic;
    j["p_value"] = t.p_value;
    j["permutations"] = t.permutations;
    j["b_effective"] = t.b_effective;
    return j;
}

nlohmann::ordered_json build(const RunReport& r, bool with_wall) {
    const auto& cfg = r.decision.config;
    nlohmann::ordered_json j;
    j["version"] = kVersion;
    j["input"] = r.input;
    j["config"] = {
        {"b", cfg.b},
        {"grid_count", cfg.grid_count},
        {"permutations", cfg.permutations},
        {"alpha", cfg.alpha},
        {"subsample_cap", cfg.subsample_cap},
        {"seed", cfg.seed},
        {"workers", cfg.workers},
        {"standardize", true},
        {"gp",
         {{"max_iters", cfg.gp.max_iters},
          {"tol", cfg.gp.tol},
          {"restarts", cfg.gp.restarts},
          {"jitter", cfg.gp.jitter},
          {"mc_samples", cfg.gp.mc_samples},
          {"deriv_floor", cfg.gp.deriv_floor}}},
    };
    j["tests"] = {{"xy", test_to_json(r.decision.test_xy)},
                  {"yx", test_to_json(r.decision.test_yx)}};
    j["outcome"] = to_string(r.decision.outcome);
    if (with_wall) j["wall_seconds"] = r.wall_seconds;
    return j;
}

}  // namespace

std::string report_to_json(const RunReport& r, int indent) {
    return build(r, true).dump(indent);
}

std::string report_to_json_stable(const RunReport& r, int indent) {
    return build(r, false).dump(indent);
}

}  // namespace exocause
