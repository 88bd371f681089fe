//! Segment refinement: reclassifying, connecting, fitting and voting.

mod connect;
mod fit;
mod reclassify;
mod vote;

use serde::{Deserialize, Serialize};

use crate::error::RefineError;

pub use connect::{collinearity_error, connect_collinear, connect_toward, CollinearityReport};
pub use fit::fit_missing;
pub use reclassify::reclassify;
pub use vote::{
    initial_weights, raw_vote, select_top, vote_increments, vote_select, Origin, RawVote, VoteResult, WeightedCandidate,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RefineConfig {
    /// Reclassification gate on the angle to `l_xz` / `l_yz`, degrees.
    pub tau_theta: f64,
    /// Minimum number of intersecting neighbors that triggers reclassification.
    pub n_min: usize,
    /// Collinearity threshold for connecting, pixels.
    pub tau_e: f64,
    /// Largest endpoint distance from a merged segment's line, pixels.
    pub connect_offset_px: f64,
    pub xi_len: f64,
    pub xi_ang: f64,
    pub top_n: usize,
    pub max_iter: usize,
    /// Classification gate on the angle to the nearest vanishing point, degrees.
    pub tau_class: f64,
    /// Fitted segments closer than this to an earlier one in the same group are dropped, pixels.
    pub fit_dedup_px: f64,
    /// Slack for a supporter line meeting a candidate segment, pixels.
    pub vote_slack_px: f64,
    /// A supporter whose line meets the candidate this close to its supporting endpoint
    /// touches the candidate rather than penetrating it, pixels.
    pub touch_px: f64,
}

impl Default for RefineConfig {
    fn default() -> Self {
        Self {
            tau_theta: 20.0,
            n_min: 3,
            tau_e: 0.3,
            connect_offset_px: 2.0,
            xi_len: 0.5,
            xi_ang: 0.5,
            top_n: 5,
            max_iter: 50,
            tau_class: 8.0,
            fit_dedup_px: 1.0,
            vote_slack_px: 0.5,
            touch_px: 1.5,
        }
    }
}

impl RefineConfig {
    pub fn validate(&self) -> Result<(), RefineError> {
        let bad = |msg: &str| Err(RefineError::InvalidConfig(msg.to_string()));
        let positive = [
            ("tau_theta", self.tau_theta),
            ("tau_e", self.tau_e),
            ("connect_offset_px", self.connect_offset_px),
            ("tau_class", self.tau_class),
            ("fit_dedup_px", self.fit_dedup_px),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return bad(&format!("{name} must be positive"));
            }
        }
        for (name, v) in [("vote_slack_px", self.vote_slack_px), ("touch_px", self.touch_px)] {
            if !(v >= 0.0 && v.is_finite()) {
                return bad(&format!("{name} must be nonnegative"));
            }
        }
        if !(self.xi_len >= 0.0 && self.xi_ang >= 0.0 && (self.xi_len + self.xi_ang - 1.0).abs() < 1e-9) {
            return bad("xi_len and xi_ang must be nonnegative and sum to 1");
        }
        if !(5..=10).contains(&self.top_n) {
            return bad("top_n must lie in 5..=10");
        }
        if self.n_min == 0 || self.max_iter == 0 {
            return bad("n_min and max_iter must be positive");
        }
        Ok(())
    }
}
