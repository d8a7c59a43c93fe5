#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "exocause/baselines.hpp"
#include "exocause/bootstrap.hpp"
#include "exocause/dataset.hpp"
#include "exocause/direction.hpp"
#include "exocause/errors.hpp"
#include "exocause/mixture.hpp"
#include "exocause/report.hpp"
#include "exocause/rng.hpp"
#include "exocause/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitPipeline = 3;

struct InferFlags {
    exocause::InferenceConfig cfg;
    bool fast = false;
    std::string output;
    std::string dump_prefix;

    /// boot_name differs under `simulate`, where --b is the cubic coefficient;
    /// with_seed is off there too (the generator seed drives the whole run).
    void attach(CLI::App* app, const std::string& boot_name = "--b", bool with_seed = true) {
        app->add_option(boot_name, cfg.b, "Bootstrap replications")->capture_default_str();
        app->add_option("--grid", cfg.grid_count, "Evaluation grid size")->capture_default_str();
        app->add_option("--permutations", cfg.permutations, "Permutation-test draws")
            ->capture_default_str();
        app->add_option("--alpha", cfg.alpha, "Decision threshold")->capture_default_str();
        app->add_option("--cap", cfg.subsample_cap, "Subsample cap")->capture_default_str();
        if (with_seed) {
            app->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
        }
        app->add_option("--workers", cfg.workers, "Concurrent replicate workers (0 = all cores)")
            ->capture_default_str();
        app->add_option("--gp-max-iters", cfg.gp.max_iters, "GP optimizer iteration cap")
            ->capture_default_str();
        app->add_option("--gp-tol", cfg.gp.tol, "GP optimizer relative tolerance")
            ->capture_default_str();
        app->add_option("--gp-restarts", cfg.gp.restarts, "GP optimizer restarts")
            ->capture_default_str();
        app->add_option("--gp-jitter", cfg.gp.jitter, "GP kernel jitter")->capture_default_str();
        app->add_option("--gp-mc-samples", cfg.gp.mc_samples, "Monte-Carlo draws for H")
            ->capture_default_str();
        app->add_option("--gp-deriv-floor", cfg.gp.deriv_floor, "Derivative floor before logs")
            ->capture_default_str();
        app->add_option("--gp-refit-iters", cfg.gp.refit_iters,
                        "Iteration cap for warm-started replicate refits")
            ->capture_default_str();
        app->add_flag("--fast", fast, "Desk-scale preset: B=200, permutations=500");
        app->add_option("--output", output, "Write the JSON report here instead of stdout");
    }

    exocause::InferenceConfig resolved() const {
        exocause::InferenceConfig c = cfg;
        if (fast) {
            c.b = 200;
            c.permutations = 500;
        }
        return c;
    }
};

void emit(const std::string& text, const std::string& output) {
    if (output.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream out(output);
        if (!out) throw exocause::Error("cannot write " + output);
        out << text << "\n";
    }
}

exocause::RunReport run_inference(const exocause::PairedSample& sample, const std::string& input,
                                  const exocause::InferenceConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    std::cerr << "running exogeneity tests: B=" << cfg.b << " x 2 directions, n="
              << std::min<std::size_t>(sample.size(), cfg.subsample_cap) << "\n";
    exocause::RunReport report;
    report.input = input;
    report.decision = exocause::infer_direction(sample, cfg);
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

int cmd_infer(const std::string& input, const InferFlags& flags) {
    exocause::PairedSample sample;
    try {
        sample = exocause::load_pair(input);
    } catch (const exocause::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        const auto cfg = flags.resolved();
        if (!flags.dump_prefix.empty()) {
            // recompute the per-direction matrices for the debug dump
            const auto capped = exocause::subsample(
                sample, cfg.subsample_cap, exocause::child_seed(cfg.seed, 10));
            for (auto dir : {exocause::Direction::XtoY, exocause::Direction::YtoX}) {
                const auto oriented =
                    dir == exocause::Direction::YtoX ? capped.swapped() : capped;
                auto [std_s, t] = exocause::standardize(oriented);
                const auto grid = exocause::make_grid(std_s, exocause::Axis::X,
                                                      static_cast<std::size_t>(cfg.grid_count));
                const auto plan = exocause::plan_replicates(
                    std_s.size(), static_cast<std::size_t>(cfg.b),
                    exocause::child_seed(cfg.seed, 11));
                const auto m = exocause::build_stat_matrices(
                    std_s, grid, plan, cfg.gp, exocause::child_seed(cfg.seed, 12), cfg.workers);
                exocause::dump_raw_matrices(
                    flags.dump_prefix + (dir == exocause::Direction::XtoY ? "_xy.json" : "_yx.json"),
                    m);
            }
        }
        const auto report = run_inference(sample, input, cfg);
        emit(exocause::report_to_json(report), flags.output);
        return 0;
    } catch (const exocause::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const exocause::Error& e) {
        std::cerr << "pipeline error: " << e.what() << "\n";
        return kExitPipeline;
    }
}

struct SimulateFlags {
    std::string gen = "pair";
    std::size_t n = 500;
    double q = 1.0;
    double b = 0.0;
    double alpha_mix = 0.0;
    double beta = 0.0;
    std::uint64_t seed = 0;
    std::string out;
    bool chain_infer = false;
    // mixture generator parameters
    std::vector<double> mix_pi{0.5, 0.5};
    std::vector<double> mix_mu{-2.0, 2.0};
    std::vector<double> mix_var{1.0, 1.0};
    double intercept = 0.0;
    double slope = 1.0;
    double noise_var = 1.0;
};

int cmd_simulate(const SimulateFlags& flags, const InferFlags& infer_flags) {
    exocause::PairedSample sample;
    try {
        if (flags.gen == "pair" || flags.gen == "confounded") {
            exocause::SynthConfig cfg;
            cfg.n = flags.n;
            cfg.q = flags.q;
            cfg.b = flags.b;
            cfg.alpha_mix = flags.alpha_mix;
            cfg.beta_conf = flags.gen == "pair" ? 0.0 : flags.beta;
            cfg.seed = flags.seed;
            sample = flags.gen == "pair" ? exocause::gen_pair(cfg) : exocause::gen_confounded(cfg);
        } else if (flags.gen == "mixture") {
            exocause::MixtureParams p;
            p.weights = flags.mix_pi;
            p.means = flags.mix_mu;
            p.variances = flags.mix_var;
            p.intercept = flags.intercept;
            p.slope = flags.slope;
            p.noise_var = flags.noise_var;
            sample = exocause::sample_mixture_pair(p, flags.n, flags.seed);
        } else {
            std::cerr << "error: unknown generator '" << flags.gen << "'\n";
            return kExitUsage;
        }
    } catch (const exocause::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (flags.chain_infer) {
            auto cfg = infer_flags.resolved();
            cfg.seed = flags.seed;
            const auto report =
                run_inference(sample, "generator:" + flags.gen + " seed:" +
                                          std::to_string(flags.seed), cfg);
            emit(exocause::report_to_json(report), infer_flags.output);
        } else {
            const std::string path = flags.out.empty() ? flags.gen + ".txt" : flags.out;
            exocause::write_pair(path, sample);
            std::cerr << "wrote " << sample.size() << " rows to " << path << "\n";
        }
        return 0;
    } catch (const exocause::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const exocause::Error& e) {
        std::cerr << "pipeline error: " << e.what() << "\n";
        return kExitPipeline;
    }
}

struct BenchmarkFlags {
    std::string dir;
    std::string manifest;
    std::vector<std::string> methods;
};

std::map<std::string, std::string> load_manifest(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw exocause::Error("cannot open manifest " + path.string());
    std::map<std::string, std::string> truth;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string file, dir;
        if (!(ss >> file >> dir) || (dir != "x->y" && dir != "y->x")) {
            throw exocause::Error("manifest line not 'filename x->y|y->x': " + line);
        }
        truth[file] = dir;
    }
    return truth;
}

int cmd_benchmark(const BenchmarkFlags& flags, const InferFlags& infer_flags) {
    std::map<std::string, std::string> truth;
    std::vector<fs::path> files;
    try {
        truth = load_manifest(flags.manifest);
        const fs::path manifest_abs = fs::absolute(flags.manifest);
        for (const auto& entry : fs::directory_iterator(flags.dir)) {
            if (!entry.is_regular_file()) continue;
            if (fs::absolute(entry.path()) == manifest_abs) continue;
            files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        if (files.empty()) throw exocause::Error("no pair files in " + flags.dir);
        for (const auto& f : files) {
            if (!truth.count(f.filename().string())) {
                std::cerr << "error: manifest has no entry for " << f.filename().string() << "\n";
                return kExitUsage;
            }
        }
    } catch (const exocause::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    const std::set<std::string> methods(flags.methods.begin(), flags.methods.end());
    for (const auto& m : methods) {
        if (m != "igci" && m != "anm") {
            std::cerr << "error: unknown method '" << m << "'\n";
            return kExitUsage;
        }
    }

    try {
        const auto cfg = infer_flags.resolved();
        ordered_json pairs = ordered_json::array();
        std::map<std::string, std::map<std::string, int>> tallies;  // method -> bucket -> count

        const auto tally = [&](const std::string& method, const std::string& outcome,
                               const std::string& want) {
            auto& t = tallies[method];
            if (outcome == "NonIdentifiable" || outcome == "Undecided") {
                ++t["non_identifiable"];
            } else if (outcome == "ConfounderSuspected") {
                ++t["confounder_suspected"];
            } else if ((outcome == "XcausesY" && want == "x->y") ||
                       (outcome == "YcausesX" && want == "y->x")) {
                ++t["correct"];
            } else {
                ++t["wrong"];
            }
        };

        for (const auto& f : files) {
            const std::string name = f.filename().string();
            std::cerr << "pair " << name << "\n";
            const auto sample = exocause::load_pair(f);
            const auto report = run_inference(sample, name, cfg);
            const std::string want = truth.at(name);

            ordered_json entry = ordered_json::parse(exocause::report_to_json(report));
            entry["truth"] = want;
            tally("exogeneity", to_string(report.decision.outcome), want);

            if (!methods.empty()) {
                const auto capped = exocause::subsample(sample, cfg.subsample_cap,
                                                        exocause::child_seed(cfg.seed, 10));
                ordered_json b;
                if (methods.count("igci")) {
                    const auto d = exocause::igci_decide(capped);
                    b["igci"] = {{"outcome", to_string(d.outcome)},
                                 {"score_xy", d.score_xy},
                                 {"score_yx", d.score_yx}};
                    tally("igci", to_string(d.outcome), want);
                }
                if (methods.count("anm")) {
                    const auto d = exocause::anm_decide(capped, cfg.gp, cfg.permutations,
                                                        cfg.alpha, cfg.seed);
                    b["anm"] = {{"outcome", to_string(d.outcome)},
                                {"score_xy", d.score_xy},
                                {"score_yx", d.score_yx}};
                    tally("anm", to_string(d.outcome), want);
                }
                entry["baselines"] = b;
            }
            pairs.push_back(entry);
        }

        ordered_json summary;
        summary["version"] = exocause::kVersion;
        summary["n_pairs"] = files.size();
        summary["pairs"] = pairs;
        ordered_json agg;
        for (const auto& [method, t] : tallies) {
            const int correct = t.count("correct") ? t.at("correct") : 0;
            const int wrong = t.count("wrong") ? t.at("wrong") : 0;
            ordered_json a;
            a["correct"] = correct;
            a["wrong"] = wrong;
            a["non_identifiable"] = t.count("non_identifiable") ? t.at("non_identifiable") : 0;
            a["confounder_suspected"] =
                t.count("confounder_suspected") ? t.at("confounder_suspected") : 0;
            a["accuracy"] = correct + wrong > 0
                                ? static_cast<double>(correct) / (correct + wrong)
                                : 0.0;
            agg[method] = a;
        }
        summary["aggregate"] = agg;
        emit(summary.dump(2), infer_flags.output);
        return 0;
    } catch (const exocause::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const exocause::Error& e) {
        std::cerr << "pipeline error: " << e.what() << "\n";
        return kExitPipeline;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Causal direction between two variables via bootstrapped exogeneity testing"};
    app.require_subcommand(1);
    app.set_version_flag("--version", exocause::kVersion);

    auto* infer = app.add_subcommand("infer", "Infer the causal direction for a pair file");
    std::string input;
    infer->add_option("--input", input, "Pair file (two numeric columns)")->required();
    InferFlags infer_flags;
    infer_flags.attach(infer);
    infer->add_option("--dump-matrices", infer_flags.dump_prefix,
                      "Write raw R/S matrices to <prefix>_xy.json and <prefix>_yx.json");

    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic pair file");
    SimulateFlags sim_flags;
    simulate->add_option("--gen", sim_flags.gen, "Generator: pair | confounded | mixture")
        ->capture_default_str();
    simulate->add_option("--n", sim_flags.n, "Rows to generate")->capture_default_str();
    simulate->add_option("--q", sim_flags.q, "Power-nonlinearity exponent")->capture_default_str();
    simulate->add_option("--b", sim_flags.b, "Cubic coefficient")->capture_default_str();
    simulate->add_option("--alpha-mix", sim_flags.alpha_mix,
                         "Additive (0) to multiplicative (1) noise mix")
        ->capture_default_str();
    simulate->add_option("--beta", sim_flags.beta, "Confounder strength")->capture_default_str();
    simulate->add_option("--seed", sim_flags.seed, "Random seed")->capture_default_str();
    simulate->add_option("--out", sim_flags.out, "Output pair file (default <gen>.txt)");
    simulate->add_flag("--infer", sim_flags.chain_infer, "Run inference instead of writing a file");
    simulate->add_option("--pi", sim_flags.mix_pi, "Mixture weights")->expected(2);
    simulate->add_option("--mu", sim_flags.mix_mu, "Mixture means")->expected(2);
    simulate->add_option("--var", sim_flags.mix_var, "Mixture variances")->expected(2);
    simulate->add_option("--intercept", sim_flags.intercept, "Mechanism intercept")
        ->capture_default_str();
    simulate->add_option("--slope", sim_flags.slope, "Mechanism slope")->capture_default_str();
    simulate->add_option("--noise-var", sim_flags.noise_var, "Mechanism noise variance")
        ->capture_default_str();
    InferFlags sim_infer_flags;
    sim_infer_flags.attach(simulate, "--boot", /*with_seed=*/false);

    auto* benchmark = app.add_subcommand("benchmark", "Run a pair-file corpus against ground truth");
    BenchmarkFlags bench_flags;
    benchmark->add_option("--dir", bench_flags.dir, "Directory of pair files")->required();
    benchmark->add_option("--manifest", bench_flags.manifest,
                          "Ground-truth manifest: lines 'filename x->y|y->x'")
        ->required();
    benchmark->add_option("--methods", bench_flags.methods, "Extra methods: igci, anm")
        ->delimiter(',');
    InferFlags bench_infer_flags;
    bench_infer_flags.attach(benchmark);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    if (infer->parsed()) return cmd_infer(input, infer_flags);
    if (simulate->parsed()) return cmd_simulate(sim_flags, sim_infer_flags);
    if (benchmark->parsed()) return cmd_benchmark(bench_flags, bench_infer_flags);
    return kExitUsage;
}
