//! John ellipse, John position and Banach-Mazur distance estimates.

mod bm;
mod john;
mod outline;

pub use bm::{
    bm_distance_disk, bm_distance_disk_with, bm_distance_pair, bm_distance_pair_with, certify_disk, certify_pair,
    sym_exp, sym_log, BmEstimate, BmOptions, DEFAULT_SEED, DEFAULT_STARTS, WITNESS_SLACK,
};
pub use john::{john_ellipse, john_position, EllipseParams, BARRIER_GAP};
pub use outline::{Outline, OVERSAMPLE};
