//! Fixtures shared by the benchmarks in `benches/`.

use roomframe::{degrade, generate_scene, mix_seed, DegradeParams, FrameCategory, ImageBounds, SceneTruth, Segment};

/// A simulated scene and its degraded segments.
pub struct Fixture {
    pub scene: SceneTruth,
    pub segments: Vec<Segment>,
}

/// Scene `seed` of `category` at 640×480, degraded with `params` (its seed is derived).
pub fn fixture(seed: u64, category: FrameCategory, params: &DegradeParams) -> Fixture {
    let scene = generate_scene(seed, category, ImageBounds::new(640.0, 480.0)).expect("category reachable");
    let p = DegradeParams { seed: mix_seed(&[seed, 1]), ..params.clone() };
    let segments = degrade(&scene, &p).expect("valid degradation");
    Fixture { scene, segments }
}

/// A degraded scene padded with clutter to exactly `n` segments.
pub fn cluttered(seed: u64, category: FrameCategory, n: usize) -> Fixture {
    let probe = fixture(seed, category, &DegradeParams::identity());
    let ratio = n as f64 / probe.scene.truth_segments.len() as f64;
    let mut f = fixture(seed, category, &DegradeParams { clutter_ratio: ratio, ..DegradeParams::default() });
    f.segments.truncate(n);
    f
}
