//! Indoor frame recovery from line segments and three Manhattan vanishing points.
//!
//! The pipeline classifies segments by vanishing direction, refines them (reclassify,
//! connect, fit, vote), enumerates candidate frames that satisfy the cross-ratio constraint
//! and picks the one whose corners lie deepest. A seeded simulator provides ground truth.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod camera;
pub mod classify;
pub mod error;
pub mod eval;
pub mod frames;
pub mod geometry;
pub mod refine;
pub mod sim;

pub use camera::{
    backproject, depth_score, intrinsics_from_vps, reconstruct_corners, Camera, Corner3, CornerLabel, VanishingTriplet,
};
pub use classify::{
    classify_segments, correspondence_table, oriented_correspondence, partition_subsets, Axis, ClassifiedSets,
    Correspondence, FrameCategory, GroupId, PartitionedSegments, Side, Supporter, Tag,
};
pub use error::{
    CameraError, EvalError, FrameError, GeometryError, RecoverError, RefineError, SimError, Stage, StageError,
};
pub use eval::{
    corner_error, image_error, rms_percent, run_benchmark, BenchmarkConfig, BenchmarkOutcome, BenchmarkReport,
    EvalRecord, LevelReport, Timing,
};
pub use frames::{
    assemble_frame, cross_ratio_residuals, enumerate_candidates, recover, select_final, CandidateFrame,
    ConstraintConfig, Diagnostics, Frame, Recovery, Selection,
};
pub use geometry::{HPoint, ImageBounds, Line2, Point2, Segment, SegmentId};
pub use refine::RefineConfig;
pub use sim::{degrade, generate_scene, mix_seed, DegradeParams, RoomBox, SceneTruth, SplitMix64, TruthSegment};
