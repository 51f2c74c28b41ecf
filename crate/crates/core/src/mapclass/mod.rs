//! Mapping class of `f²` on the ten-punctured sphere as a word in half-twists.
//!
//! The periodic orbit is projected to a marked disk, the straight arcs
//! `p_i` between consecutive punctures are pushed forward by `f`, and their
//! images are recorded as [`ArcData`]. [`compute_g`] then finds a word `g`
//! with `g ∘ f′(p_i) ≅ p_i` for all `i`, from which [`f_squared_word`]
//! produces the word handed to the external dilatation computation.

mod algorithm;
mod arcdata;
mod disk;
mod tracking;
mod word;

use thiserror::Error;

pub use algorithm::{compute_g, lift_word, word_from_arcdata, GComputation, Stage, StageToken};
pub use arcdata::{ArcData, Event, Side};
pub use disk::{extract_arc_data, plot_csv, segment_distance, Arc, MarkedDisk, MIN_GAP};
pub use tracking::{
    radial_project, stereo_lift, stereo_project, surface_point, ArcTracker, TrackConfig, POLE_TOL,
};
pub use word::{f_squared_word, palindrome, twist_correction, Convention, Twist, TwistWord};

#[derive(Debug, Error)]
pub enum MapClassError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid arc: {0}")]
    InvalidArc(String),
    #[error("generator s{index} out of range for {punctures} punctures")]
    Range { index: usize, punctures: usize },
    #[error("extraction failed: {0}")]
    Extraction(String),
    #[error("stage {stage} failed: {detail}")]
    Stage { stage: usize, detail: String },
    #[error("point within {distance:e} of the projection pole")]
    Pole { distance: f64 },
    #[error("degenerate configuration: {0}")]
    Degeneracy(String),
    #[error("subdivision budget of {points} points exhausted on segment {segment}")]
    SubdivisionBudget { points: usize, segment: usize },
    #[error("surface evaluation: {0}")]
    Surface(String),
}
