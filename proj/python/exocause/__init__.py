"""Causal direction between two variables via bootstrapped exogeneity testing."""

from exocause._core import (  # noqa: F401
    Axis,
    BackwardParams,
    BandwidthRule,
    BaselineDecision,
    BaselineOutcome,
    Direction,
    DirectionDecision,
    EvalGrid,
    ExocauseError,
    ExogeneityTestResult,
    GpConfig,
    GpCondModel,
    InferenceConfig,
    MixtureParams,
    Outcome,
    PairedSample,
    PairFormat,
    ReparamVariant,
    ReplicatePlan,
    StandardizeTransform,
    StatMatrices,
    SynthConfig,
    __version__,
    anm_decide,
    build_stat_matrices,
    cond_log_density,
    decide,
    fit_gpcm,
    gen_confounded,
    gen_pair,
    hsic_linear_stat,
    if_exogeneity,
    igci_decide,
    infer_direction,
    joint_backward,
    joint_forward,
    kde_log_density,
    load_pair,
    make_grid,
    neg_entropy_grid,
    permutation_pvalue,
    plan_replicates,
    power_nongaussian,
    predict_f,
    reparam,
    report_json,
    sample_mixture_pair,
    select_reparam_variant,
    silverman_bandwidth,
    standardize,
    subsample,
    write_pair,
)
