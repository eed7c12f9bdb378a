//! Exact simulation of sequences of monomial local quadratic transforms.

pub mod forms;
pub mod gallery;
pub mod monomial;
pub mod rational;
pub mod sequence;
pub mod values;
pub mod videals;

pub use forms::{
    check_theorem_33a, comparability_index, monomial_value, nonunit_monomials, ratio_limit_report,
    trace_from_profile, weight_profile, Comparability, FormError, MonomialForm, RatioReport,
    RatioRow, Side, Theorem33aOptions, Theorem33aReport, TraceWitness,
};
pub use gallery::{
    gen_713, gen_714, gen_dvr, gen_notunion_rr1, gen_random_independent, gen_random_switching,
    gen_shannon_418, m_values_nonincreasing, preset, replay, replay_with, Checkpoint, GalleryError,
    Plan, PresetOptions, Scenario, ScriptedStep, SeriesLaw, TermRun, PRESETS,
};
pub use monomial::{variable_names, Monomial, MonomialError, MonomialIdeal, RewriteMatrix};
pub use rational::{ParseRationalError, Rational};
pub use sequence::{
    ParameterFrame, Prop344Report, SequenceError, SequenceState, StepKind, StepRecord,
};
pub use values::{
    rational_rank, Generator, GeneratorSpec, IntervalOracle, RationalInterval, RealBasis,
    ValueError, ValueVector,
};
pub use videals::{
    check_remark_4175, colength_step, enumerate_values, tau_bound, videal_at, videal_chain,
    ChainRow, Remark4175Report, TauBound, VIdealChain, VIdealError, ValueLadder,
};
