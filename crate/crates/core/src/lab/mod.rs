//! Experiment harness: body families, `(ε, δ)` sweeps, exponent fits, the
//! stability-chain verifier, the flat-file outputs and the command line.

mod chain;
pub mod cli;
mod family;
mod files;
mod sweep;

pub use chain::{verify_proof_chain, verify_proof_chain_with, ChainCheck, ChainConstants, ChainReport, CHAIN_TOL};
pub use family::{corpus, random_polygon, FamilySpec, Member, GENERAL_CORPUS, SYMMETRIC_CORPUS};
pub use files::{manifest_path, plot_svg, read_csv, write_csv, CsvRow, Manifest};
pub use sweep::{
    exponent_fit, measure, measure_all, stability_exponent, stability_sweep, ExponentFit, SweepResult, FIT_EPS_MAX,
    FIT_EPS_MIN, GAMMA_BUDGET, SLOPE_FLOOR,
};
