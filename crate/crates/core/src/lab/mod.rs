//! Exhaustive oracles and seeded experiments on small cubes.

mod affine;
mod diophantine;
mod experiment;
mod generate;
mod rounding;
mod small_p;
pub mod suites;
mod tails;
mod uniqueness;

pub use affine::{affine_zero_mass, span_dimension, AffineMass, MAX_AFFINE_VARS};
pub use diophantine::{
    diophantine_bound, diophantine_t, near_integer_multiple, MAX_DIOPHANTINE_DIM, MAX_DIOPHANTINE_SEARCH,
};
pub use experiment::{
    draw_regular_poly, margin_flip, mollify, random_flip, robustness_experiment, rounding_experiment, summarize,
    tails_experiment, write_records_csv, write_rounding_csv, write_tails_csv, ExperimentRecord, FlipStrategy,
    RobustnessConfig, RobustnessSummary, RoundingConfig, RoundingRecord, TailRecord, TailsConfig, MAX_REGULAR_ATTEMPTS,
    RANDOM_PTF_MODEL,
};
pub use generate::{gaussian_homogeneous_poly, gaussian_poly, ptf_corpus};
pub use rounding::random_round;
pub use small_p::{small_p_mass, SmallPDiagnostic};
pub use tails::{tail_scan, AntiTailRow, TailRow, TailScan, MAX_SCAN_VARS};
pub use uniqueness::{
    chow_uniqueness_bruteforce, degree1_key, ltf_bitmap, small_fn_hex, Collision, SmallFn, UniquenessReport,
    LTF_WEIGHT_BOUND, MAX_UNIQUENESS_VARS,
};
