use std::fmt;

use thiserror::Error;

use crate::classify::{FrameCategory, GroupId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("lines coincide")]
    CoincidentLines,
    #[error("points coincide; no unique line through them")]
    CoincidentPoints,
    #[error("line coefficients (a, b) must not both be zero")]
    InvalidLine,
    #[error("segment endpoints must be finite and distinct")]
    DegenerateSegment,
    #[error("degenerate cross ratio (zero denominator)")]
    DegeneratePencil,
    #[error("points are not collinear")]
    NonCollinear,
    #[error("lines of the pencil are not concurrent")]
    NonConcurrentPencil,
    #[error("transversal passes through the pencil apex")]
    TransversalThroughApex,
    #[error("empty input")]
    EmptyInput,
    #[error("weights must be finite and nonnegative")]
    InvalidWeights,
    #[error("vanishing point coincides with the segment midpoint")]
    VpAtMidpoint,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CameraError {
    #[error("vanishing points are inconsistent (negative focal square)")]
    NegativeFocalSquare,
    #[error("at least two finite vanishing points are required")]
    TooFewFiniteVps,
    #[error("vanishing points must be pairwise distinct")]
    CoincidentVps,
    #[error("corner ray is parallel to its reconstruction plane")]
    RayParallelToPlane,
    #[error("corner reconstructs behind the camera")]
    CornerBehindCamera,
    #[error("image size must be positive")]
    EmptyImage,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RefineError {
    #[error("image bounds are empty")]
    EmptyImageBounds,
    #[error("group {0} has no candidates")]
    EmptyGroup(GroupId),
    #[error("invalid refine configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrameError {
    #[error("cross ratio residuals do not apply to category {0}")]
    NotApplicable(FrameCategory),
    #[error("selection is missing group {0}")]
    MissingGroup(GroupId),
    #[error("corner-defining lines are parallel")]
    ParallelDefiningLines,
    #[error("line {group} misses its corner by {distance:.3} px")]
    CornerInconsistent { group: GroupId, distance: f64 },
    #[error("more than {0} candidate frames survive the constraints")]
    CandidateExplosion(usize),
    #[error("no candidate frame satisfies the constraints")]
    EmptyCandidateSet,
    #[error("every candidate failed depth reconstruction")]
    AllCandidatesFailedDepth,
    #[error("invalid constraint configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Camera(#[from] CameraError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("category {0} not reached after {1} attempts")]
    CategoryUnreachable(FrameCategory, usize),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("frame categories differ at index {0}")]
    CategoryMismatch(usize),
    #[error("input lists have different lengths")]
    LengthMismatch,
}

/// Pipeline stage names used to label [`RecoverError`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stage {
    Input,
    Classify,
    Reclassify,
    Connect,
    Partition,
    Fit,
    Vote,
    Enumerate,
    Calibrate,
    Select,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Input => "input",
            Stage::Classify => "classify",
            Stage::Reclassify => "reclassify",
            Stage::Connect => "connect",
            Stage::Partition => "partition",
            Stage::Fit => "fit",
            Stage::Vote => "vote",
            Stage::Enumerate => "enumerate",
            Stage::Calibrate => "calibrate",
            Stage::Select => "select",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StageError {
    #[error(transparent)]
    Refine(#[from] RefineError),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Camera(#[from] CameraError),
    #[error("{0}")]
    Input(String),
}

/// An error from [`crate::frames::recover`], labeled with the failing stage.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{stage} stage failed: {source}")]
pub struct RecoverError {
    pub stage: Stage,
    pub source: StageError,
}

impl RecoverError {
    pub fn new(stage: Stage, source: impl Into<StageError>) -> Self {
        Self { stage, source: source.into() }
    }
}
