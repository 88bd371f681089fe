use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::classify::{Correspondence, GroupId, Side};
use crate::error::RefineError;
use crate::geometry::{angle_to_vp, eta_normalize, intersect, psi_normalize, HPoint, Segment, SegmentId};

use super::RefineConfig;

/// Angles to the vanishing point below this many degrees count as zero.
pub const ANGLE_FLOOR_DEG: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Detected,
    Fitted,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedCandidate {
    pub segment: Segment,
    pub origin: Origin,
    /// Current weight.
    pub w: f64,
    /// Last voting increment.
    pub v: f64,
}

impl WeightedCandidate {
    pub fn new(segment: Segment, origin: Origin) -> Self {
        Self { segment, origin, w: 0.0, v: 0.0 }
    }
}

/// Set `w` to the initial weight: a length term over detected candidates plus an angle term
/// over all candidates. Fitted candidates take the angle term alone.
pub fn initial_weights(
    group: GroupId,
    candidates: &mut [WeightedCandidate],
    vp: HPoint,
    cfg: &RefineConfig,
) -> Result<(), RefineError> {
    if candidates.is_empty() {
        return Err(RefineError::EmptyGroup(group));
    }
    let angles: Vec<f64> = candidates
        .iter()
        .map(|c| angle_to_vp(&c.segment, vp).map_or(90.0, |a| if a < ANGLE_FLOOR_DEG { 0.0 } else { a }))
        .collect();
    let w_ang = eta_normalize(&angles)?;
    let detected: Vec<f64> =
        candidates.iter().filter(|c| c.origin == Origin::Detected).map(|c| c.segment.length()).collect();
    let w_len = if detected.is_empty() { Vec::new() } else { psi_normalize(&detected)? };
    let mut k = 0;
    for (c, wa) in candidates.iter_mut().zip(w_ang) {
        c.v = 0.0;
        c.w = match c.origin {
            Origin::Detected => {
                let wl = w_len[k];
                k += 1;
                cfg.xi_len * wl + cfg.xi_ang * wa
            }
            Origin::Fitted => wa,
        };
    }
    Ok(())
}

/// How a supporter segment `CD` (with `C` its supporting endpoint) meets a candidate segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawVote {
    /// The supporter crosses the candidate.
    pub penetrates: bool,
    /// Unnormalized vote strength.
    pub lambda: f64,
}

/// The unnormalized vote of `supporter` for `candidate`, or `None` when the supporter's line
/// misses the candidate or meets it beyond the far endpoint `D`.
pub fn raw_vote(candidate: &Segment, supporter: &Segment, side: Side, cfg: &RefineConfig) -> Option<RawVote> {
    let (c, d) = side.split(supporter);
    let e = intersect(&supporter.line(), &candidate.line()).ok()?.to_point()?;
    if candidate.distance_to_point(e) > cfg.vote_slack_px {
        return None;
    }
    let cd = c.dist(d);
    // Signed position of E along C→D.
    let s = (e - c).dot(d - c) / cd;
    if s <= cfg.touch_px {
        let ed = e.dist(d);
        return Some(RawVote { penetrates: false, lambda: cd / ed });
    }
    if s > cd + cfg.vote_slack_px {
        return None;
    }
    Some(RawVote { penetrates: true, lambda: e.dist(c).min(e.dist(d)) / cd })
}

/// Result of iterative voting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VoteResult {
    /// Top candidates per group, best first.
    pub selected: BTreeMap<GroupId, Vec<WeightedCandidate>>,
    /// Every candidate with its final weight, in input order.
    pub all: BTreeMap<GroupId, Vec<WeightedCandidate>>,
    pub iterations: usize,
    pub converged: bool,
}

impl VoteResult {
    /// Selected segments per group.
    pub fn selected_segments(&self) -> BTreeMap<GroupId, Vec<Segment>> {
        self.selected.iter().map(|(g, list)| (*g, list.iter().map(|c| c.segment).collect())).collect()
    }
}

/// One term of a candidate's vote: supporter `supporter` of group `group` with sign and
/// normalized strength.
#[derive(Debug, Clone, Copy)]
struct Term {
    candidate: usize,
    group: GroupId,
    supporter: usize,
    coeff: f64,
}

/// Precompute the normalized vote terms. Supporters are the detected candidates of the
/// supporter groups; strengths are normalized over all voting pairs of one supporter subset.
fn vote_terms(
    groups: &BTreeMap<GroupId, Vec<WeightedCandidate>>,
    corr: &Correspondence,
    cfg: &RefineConfig,
) -> Result<BTreeMap<GroupId, Vec<Term>>, RefineError> {
    let mut terms = BTreeMap::new();
    for (g, candidates) in groups {
        let mut list = Vec::new();
        for sup in corr.supporters(*g) {
            let Some(supporters) = groups.get(&sup.group) else { continue };
            let mut pairs: Vec<(usize, usize, RawVote)> = Vec::new();
            for (i, cand) in candidates.iter().enumerate() {
                for (j, s) in supporters.iter().enumerate() {
                    if s.origin != Origin::Detected {
                        continue;
                    }
                    if let Some(rv) = raw_vote(&cand.segment, &s.segment, sup.side, cfg) {
                        pairs.push((i, j, rv));
                    }
                }
            }
            if pairs.is_empty() {
                continue;
            }
            let raw: Vec<f64> = pairs.iter().map(|p| p.2.lambda).collect();
            let lambda = psi_normalize(&raw)?;
            for ((i, j, rv), l) in pairs.into_iter().zip(lambda) {
                let sign = if rv.penetrates { -1.0 } else { 1.0 };
                list.push(Term { candidate: i, group: sup.group, supporter: j, coeff: sign * l });
            }
        }
        terms.insert(*g, list);
    }
    Ok(terms)
}

/// Voting increments for every candidate given the current weights.
pub fn vote_increments(
    groups: &BTreeMap<GroupId, Vec<WeightedCandidate>>,
    corr: &Correspondence,
    cfg: &RefineConfig,
) -> Result<BTreeMap<GroupId, Vec<f64>>, RefineError> {
    let terms = vote_terms(groups, corr, cfg)?;
    Ok(apply_terms(groups, &terms))
}

fn apply_terms(
    groups: &BTreeMap<GroupId, Vec<WeightedCandidate>>,
    terms: &BTreeMap<GroupId, Vec<Term>>,
) -> BTreeMap<GroupId, Vec<f64>> {
    groups
        .iter()
        .map(|(g, candidates)| {
            let mut v = vec![0.0; candidates.len()];
            for t in &terms[g] {
                v[t.candidate] += t.coeff * groups[&t.group][t.supporter].w;
            }
            (*g, v)
        })
        .collect()
}

/// Ranking order: higher weight, then longer, then lexicographic endpoints.
fn rank(a: &WeightedCandidate, b: &WeightedCandidate) -> Ordering {
    b.w.total_cmp(&a.w)
        .then(b.segment.length().total_cmp(&a.segment.length()))
        .then(a.segment.p.x.total_cmp(&b.segment.p.x))
        .then(a.segment.p.y.total_cmp(&b.segment.p.y))
        .then(a.segment.q.x.total_cmp(&b.segment.q.x))
        .then(a.segment.q.y.total_cmp(&b.segment.q.y))
        .then(a.segment.id.cmp(&b.segment.id))
}

/// Indices of the `n` best-ranked candidates, best first.
pub fn select_top(candidates: &[WeightedCandidate], n: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..candidates.len()).collect();
    idx.sort_by(|&i, &j| rank(&candidates[i], &candidates[j]));
    idx.truncate(n);
    idx
}

fn selection_ids(groups: &BTreeMap<GroupId, Vec<WeightedCandidate>>, n: usize) -> BTreeMap<GroupId, Vec<SegmentId>> {
    groups
        .iter()
        .map(|(g, c)| {
            let mut ids: Vec<SegmentId> = select_top(c, n).into_iter().map(|i| c[i].segment.id).collect();
            ids.sort();
            (*g, ids)
        })
        .collect()
}

/// Iterate `w ← w + v(w)` and keep the top `top_n` per group until the selection repeats.
///
/// Candidates must already carry their initial weights.
pub fn vote_select(
    mut groups: BTreeMap<GroupId, Vec<WeightedCandidate>>,
    corr: &Correspondence,
    cfg: &RefineConfig,
) -> Result<VoteResult, RefineError> {
    for (g, c) in &groups {
        if c.is_empty() {
            return Err(RefineError::EmptyGroup(*g));
        }
    }
    let terms = vote_terms(&groups, corr, cfg)?;
    let mut prev = selection_ids(&groups, cfg.top_n);
    let mut iterations = 0;
    let mut converged = false;
    for k in 1..=cfg.max_iter {
        iterations = k;
        let v = apply_terms(&groups, &terms);
        for (g, list) in groups.iter_mut() {
            for (c, dv) in list.iter_mut().zip(&v[g]) {
                c.v = *dv;
                c.w += *dv;
            }
        }
        let sel = selection_ids(&groups, cfg.top_n);
        if sel == prev {
            converged = true;
            break;
        }
        prev = sel;
    }
    let selected =
        groups.iter().map(|(g, c)| (*g, select_top(c, cfg.top_n).into_iter().map(|i| c[i]).collect())).collect();
    Ok(VoteResult { selected, all: groups, iterations, converged })
}
