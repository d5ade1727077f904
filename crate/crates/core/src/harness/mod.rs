//! Configuration, persistence and run orchestration.

mod check;
mod config;
mod embedding;
pub mod io;
mod report;
mod run;

pub use check::{check_suite, CheckRow, CheckTable, Verdict};
pub use config::{
    parse_seed_range, DiagnosticsSection, EvolutionSection, FaultSection, GridSection, IOperatorSection,
    OutputSection, ProfileSection, RandomizationSection, RunConfig,
};
pub use embedding::{embedding_experiment, EmbeddingReport, EmbeddingRow, DEFAULT_DELTAS};
pub use report::{diagnose, CheckpointRow, DiagnosticsReport, PerN, RunStatus};
pub use run::{
    exit_code, initial_data, rayleigh_samples, rediagnose, run_ensemble, run_single, EnsembleReport, RunOutcome,
    ScalingFit, SeedStatus, Summary, TailOutcome, EXIT_BLOWUP, EXIT_CONFIG, EXIT_OK, EXIT_PARTIAL,
};
