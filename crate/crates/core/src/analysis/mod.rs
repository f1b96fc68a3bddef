//! Post-hoc analysis of a filtered subset: constitution shifts, edit
//! distance to paraphrased references, and score histograms.

pub mod constitution;
pub mod edit_distance;
pub mod histogram;

pub use constitution::{
    frequency_constitution, length_constitution, length_tertiles, pos_constitution, CategoryShare, ConstitutionReport,
    FrequencyBands, FrequencyTable, Scheme, FREQUENCY_LABELS, LENGTH_LABELS,
};
pub use edit_distance::{edit_distance_report, levenshtein, EditDistanceReport, EditUnit};
pub use histogram::{score_histogram, ScoreHistogram};
