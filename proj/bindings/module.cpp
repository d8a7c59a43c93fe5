#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstdint>
#include <vector>

#include "exocause/baselines.hpp"
#include "exocause/bootstrap.hpp"
#include "exocause/dataset.hpp"
#include "exocause/direction.hpp"
#include "exocause/errors.hpp"
#include "exocause/gp_cond.hpp"
#include "exocause/hsic_test.hpp"
#include "exocause/kde.hpp"
#include "exocause/mixture.hpp"
#include "exocause/report.hpp"
#include "exocause/synth.hpp"

namespace py = pybind11;
using namespace exocause;

namespace {

Eigen::MatrixXd to_matrix(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw ShapeMismatch("matrix must have at least one row");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size()) throw ShapeMismatch("ragged matrix rows");
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return m;
}

std::vector<std::vector<double>> from_matrix(const Eigen::MatrixXd& m) {
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        rows[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(m.cols()));
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
        }
    }
    return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Causal direction between two variables via bootstrapped exogeneity testing";
    m.attr("__version__") = kVersion;

    py::register_exception<Error>(m, "ExocauseError");

    py::class_<PairedSample>(m, "PairedSample")
        .def(py::init<>())
        .def(py::init([](std::vector<double> x, std::vector<double> y) {
                 PairedSample s{std::move(x), std::move(y)};
                 s.validate();
                 return s;
             }),
             py::arg("x"), py::arg("y"))
        .def_readwrite("x", &PairedSample::x)
        .def_readwrite("y", &PairedSample::y)
        .def("__len__", &PairedSample::size)
        .def("swapped", &PairedSample::swapped);

    py::enum_<PairFormat>(m, "PairFormat")
        .value("Auto", PairFormat::Auto)
        .value("Whitespace", PairFormat::Whitespace)
        .value("Csv", PairFormat::Csv);

    py::enum_<Axis>(m, "Axis").value("X", Axis::X).value("Y", Axis::Y);

    py::class_<EvalGrid>(m, "EvalGrid")
        .def_readonly("points", &EvalGrid::points)
        .def("__len__", &EvalGrid::size);

    py::class_<StandardizeTransform>(m, "StandardizeTransform")
        .def_readonly("mean_x", &StandardizeTransform::mean_x)
        .def_readonly("std_x", &StandardizeTransform::std_x)
        .def_readonly("mean_y", &StandardizeTransform::mean_y)
        .def_readonly("std_y", &StandardizeTransform::std_y);

    m.def("load_pair", &load_pair, py::arg("path"), py::arg("format") = PairFormat::Auto);
    m.def("write_pair", &write_pair, py::arg("path"), py::arg("sample"));
    m.def("subsample", &subsample, py::arg("sample"), py::arg("cap"), py::arg("seed"));
    m.def("standardize", &standardize, py::arg("sample"));
    m.def("make_grid", &make_grid, py::arg("sample"), py::arg("axis"), py::arg("count") = 80);

    py::enum_<BandwidthRule>(m, "BandwidthRule")
        .value("RuleOfThumb", BandwidthRule::RuleOfThumb)
        .value("Robust", BandwidthRule::Robust);
    m.def(
        "silverman_bandwidth",
        [](const std::vector<double>& data, BandwidthRule rule) {
            return silverman_bandwidth(data, rule).h;
        },
        py::arg("data"), py::arg("rule") = BandwidthRule::RuleOfThumb);
    m.def(
        "kde_log_density",
        [](const std::vector<double>& train, double h, const EvalGrid& grid) {
            return kde_log_density(train, Bandwidth{h}, grid);
        },
        py::arg("train"), py::arg("bandwidth"), py::arg("grid"));

    py::class_<GpConfig>(m, "GpConfig")
        .def(py::init<>())
        .def_readwrite("max_iters", &GpConfig::max_iters)
        .def_readwrite("tol", &GpConfig::tol)
        .def_readwrite("restarts", &GpConfig::restarts)
        .def_readwrite("jitter", &GpConfig::jitter)
        .def_readwrite("mc_samples", &GpConfig::mc_samples)
        .def_readwrite("deriv_floor", &GpConfig::deriv_floor);

    py::class_<GpCondModel>(m, "GpCondModel")
        .def_readonly("train_x", &GpCondModel::train_x)
        .def_readonly("latent_e", &GpCondModel::latent_e)
        .def_readonly("weights", &GpCondModel::weights)
        .def_readonly("log_lengthscale_x", &GpCondModel::log_lengthscale_x)
        .def_readonly("log_lengthscale_e", &GpCondModel::log_lengthscale_e)
        .def_readonly("log_signal_var", &GpCondModel::log_signal_var)
        .def_readonly("objective", &GpCondModel::objective);

    m.def(
        "fit_gpcm",
        [](const PairedSample& s, const GpConfig& cfg, std::uint64_t seed) {
            return fit_gpcm(s, cfg, seed);
        },
        py::arg("sample"), py::arg("config") = GpConfig{}, py::arg("seed") = 0);
    m.def("predict_f", &predict_f, py::arg("model"), py::arg("x"), py::arg("e"));
    m.def("cond_log_density", &cond_log_density, py::arg("model"), py::arg("x"), py::arg("y"),
          py::arg("deriv_floor") = 1e-8);
    m.def("neg_entropy_grid", &neg_entropy_grid, py::arg("model"), py::arg("grid"),
          py::arg("config"), py::arg("seed"));

    py::class_<ReplicatePlan>(m, "ReplicatePlan")
        .def_readonly("n", &ReplicatePlan::n)
        .def_readonly("index_sets", &ReplicatePlan::index_sets)
        .def_readonly("seed", &ReplicatePlan::seed)
        .def("__len__", &ReplicatePlan::b_count);
    m.def("plan_replicates", &plan_replicates, py::arg("n"), py::arg("b_count"), py::arg("seed"));

    py::class_<StatMatrices>(m, "StatMatrices")
        .def_property_readonly("r", [](const StatMatrices& s) { return from_matrix(s.r); })
        .def_property_readonly("s", [](const StatMatrices& s) { return from_matrix(s.s); })
        .def_property_readonly("r_raw",
                               [](const StatMatrices& s) { return from_matrix(s.r_raw); })
        .def_property_readonly("s_raw",
                               [](const StatMatrices& s) { return from_matrix(s.s_raw); })
        .def_readonly("b_effective", &StatMatrices::b_effective)
        .def_readonly("dropped_replicates", &StatMatrices::dropped_replicates);
    m.def("build_stat_matrices", &build_stat_matrices, py::arg("sample"), py::arg("grid"),
          py::arg("plan"), py::arg("gp_config"), py::arg("seed"), py::arg("workers") = 0);

    m.def(
        "hsic_linear_stat",
        [](const std::vector<std::vector<double>>& r, const std::vector<std::vector<double>>& s) {
            return hsic_linear_stat(to_matrix(r), to_matrix(s));
        },
        py::arg("r"), py::arg("s"));

    py::class_<ExogeneityTestResult>(m, "ExogeneityTestResult")
        .def_readonly("statistic", &ExogeneityTestResult::statistic)
        .def_readonly("p_value", &ExogeneityTestResult::p_value)
        .def_readonly("permutations", &ExogeneityTestResult::permutations)
        .def_readonly("b_effective", &ExogeneityTestResult::b_effective);
    m.def("permutation_pvalue", &permutation_pvalue, py::arg("matrices"), py::arg("permutations"),
          py::arg("seed"));

    py::enum_<Direction>(m, "Direction")
        .value("XtoY", Direction::XtoY)
        .value("YtoX", Direction::YtoX);
    py::enum_<Outcome>(m, "Outcome")
        .value("XcausesY", Outcome::XcausesY)
        .value("YcausesX", Outcome::YcausesX)
        .value("NonIdentifiable", Outcome::NonIdentifiable)
        .value("ConfounderSuspected", Outcome::ConfounderSuspected);

    py::class_<InferenceConfig>(m, "InferenceConfig")
        .def(py::init<>())
        .def_readwrite("b", &InferenceConfig::b)
        .def_readwrite("grid_count", &InferenceConfig::grid_count)
        .def_readwrite("permutations", &InferenceConfig::permutations)
        .def_readwrite("alpha", &InferenceConfig::alpha)
        .def_readwrite("subsample_cap", &InferenceConfig::subsample_cap)
        .def_readwrite("gp", &InferenceConfig::gp)
        .def_readwrite("seed", &InferenceConfig::seed)
        .def_readwrite("workers", &InferenceConfig::workers);

    py::class_<DirectionDecision>(m, "DirectionDecision")
        .def_readonly("outcome", &DirectionDecision::outcome)
        .def_readonly("test_xy", &DirectionDecision::test_xy)
        .def_readonly("test_yx", &DirectionDecision::test_yx)
        .def_readonly("config", &DirectionDecision::config);

    m.def("if_exogeneity", &if_exogeneity, py::arg("sample"), py::arg("direction"),
          py::arg("config"));
    m.def("decide", &decide, py::arg("xy"), py::arg("yx"), py::arg("alpha"));
    m.def("infer_direction", &infer_direction, py::arg("sample"), py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def(
        "report_json",
        [](const DirectionDecision& d, const std::string& input, double wall_seconds) {
            RunReport r;
            r.input = input;
            r.decision = d;
            r.wall_seconds = wall_seconds;
            return report_to_json(r);
        },
        py::arg("decision"), py::arg("input") = "", py::arg("wall_seconds") = 0.0);

    py::class_<MixtureParams>(m, "MixtureParams")
        .def(py::init<>())
        .def_readwrite("weights", &MixtureParams::weights)
        .def_readwrite("means", &MixtureParams::means)
        .def_readwrite("variances", &MixtureParams::variances)
        .def_readwrite("intercept", &MixtureParams::intercept)
        .def_readwrite("slope", &MixtureParams::slope)
        .def_readwrite("noise_var", &MixtureParams::noise_var);
    py::enum_<ReparamVariant>(m, "ReparamVariant")
        .value("LinearDenominator", ReparamVariant::LinearDenominator)
        .value("QuadraticDenominator", ReparamVariant::QuadraticDenominator);
    py::class_<BackwardParams>(m, "BackwardParams")
        .def_readonly("mu_b", &BackwardParams::mu_b)
        .def_readonly("var_b", &BackwardParams::var_b)
        .def_readonly("intercept_b", &BackwardParams::intercept_b)
        .def_readonly("slope_b", &BackwardParams::slope_b)
        .def_readonly("noise_var_b", &BackwardParams::noise_var_b);
    m.def("reparam", &reparam, py::arg("params"),
          py::arg("variant") = kDefaultReparamVariant);
    m.def("joint_forward", &joint_forward, py::arg("params"), py::arg("x"), py::arg("y"));
    m.def("joint_backward", &joint_backward, py::arg("params"), py::arg("variant"), py::arg("x"),
          py::arg("y"));
    m.def("select_reparam_variant", &select_reparam_variant, py::arg("n_draws") = 20,
          py::arg("seed") = 0);
    m.def("sample_mixture_pair", &sample_mixture_pair, py::arg("params"), py::arg("n"),
          py::arg("seed"));

    py::class_<SynthConfig>(m, "SynthConfig")
        .def(py::init<>())
        .def_readwrite("n", &SynthConfig::n)
        .def_readwrite("q", &SynthConfig::q)
        .def_readwrite("b", &SynthConfig::b)
        .def_readwrite("alpha_mix", &SynthConfig::alpha_mix)
        .def_readwrite("beta_conf", &SynthConfig::beta_conf)
        .def_readwrite("seed", &SynthConfig::seed);
    m.def("power_nongaussian", &power_nongaussian, py::arg("n"), py::arg("q"), py::arg("seed"));
    m.def("gen_pair", &gen_pair, py::arg("config"));
    m.def("gen_confounded", &gen_confounded, py::arg("config"));

    py::enum_<BaselineOutcome>(m, "BaselineOutcome")
        .value("XcausesY", BaselineOutcome::XcausesY)
        .value("YcausesX", BaselineOutcome::YcausesX)
        .value("Undecided", BaselineOutcome::Undecided);
    py::class_<BaselineDecision>(m, "BaselineDecision")
        .def_readonly("method", &BaselineDecision::method)
        .def_readonly("outcome", &BaselineDecision::outcome)
        .def_readonly("score_xy", &BaselineDecision::score_xy)
        .def_readonly("score_yx", &BaselineDecision::score_yx);
    m.def("igci_decide", &igci_decide, py::arg("sample"));
    m.def("anm_decide", &anm_decide, py::arg("sample"), py::arg("gp_config") = GpConfig{},
          py::arg("permutations") = 500, py::arg("alpha") = 0.01, py::arg("seed") = 0);
}
