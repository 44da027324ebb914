//! Exact reference solvers and the timed divide-and-conquer pipeline.

mod exhaustive;
mod pipeline;

pub use exhaustive::{
    brute_force_min, minimize_masks, CoreSolver, ExhaustiveSolver, MAX_EXHAUSTIVE_VARS,
};
pub use pipeline::{
    classical_pipeline, pubo_pipeline, Backend, PipelineConfig, PipelineReport, StepTimings,
    CSV_HEADER,
};
