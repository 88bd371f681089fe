use proptest::prelude::*;
use roomframe::geometry::{eta_normalize, pencil_cross_ratio, psi_normalize};
use roomframe::refine::{collinearity_error, connect_collinear};
use roomframe::*;

proptest! {
    #[test]
    fn normalizations_sum_to_one(v in prop::collection::vec(0.01f64..100.0, 1..20)) {
        let p = psi_normalize(&v).unwrap();
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let e = eta_normalize(&v).unwrap();
        prop_assert!((e.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(e.iter().all(|w| *w >= 0.0));
    }

    #[test]
    fn collinear_disjoint_pairs_have_zero_error(
        x0 in -100i32..100, y0 in -100i32..100, dx in 1i32..20, dy in -20i32..20,
        a in 0i32..5, b in 1i32..5, gap in 0i32..5, c in 1i32..5,
    ) {
        let p = |k: i32| Point2::new((x0 + k * dx) as f64, (y0 + k * dy) as f64);
        let s1 = Segment::new(p(a), p(a + b), SegmentId(0)).unwrap();
        let s2 = Segment::new(p(a + b + gap), p(a + b + gap + c), SegmentId(1)).unwrap();
        prop_assert!(collinearity_error(&s1, &s2).e < 1e-9);
    }

    #[test]
    fn connect_is_idempotent(raw in prop::collection::vec((0.0f64..640.0, 0.0f64..480.0, 0.0f64..640.0, 0.0f64..480.0), 1..15)) {
        let segs: Vec<Segment> = raw.iter().enumerate()
            .filter_map(|(i, (a, b, c, d))| Segment::new(Point2::new(*a, *b), Point2::new(*c, *d), SegmentId(i as u32)).ok())
            .collect();
        let cfg = RefineConfig::default();
        let once = connect_collinear(&segs, &cfg);
        prop_assert_eq!(connect_collinear(&once, &cfg), once);
    }

    #[test]
    fn cross_ratio_is_transversal_invariant(
        ax in -50.0f64..50.0, ay in -50.0f64..50.0,
        angles in prop::collection::btree_set(0u32..170, 4),
        t1 in 0.1f64..1.4, t2 in 1.6f64..3.0, off1 in 200.0f64..400.0, off2 in 200.0f64..400.0,
    ) {
        let apex = Point2::new(ax, ay);
        let lines: Vec<Line2> = angles.iter()
            .map(|d| Line2::from_point_dir(apex, Point2::new((*d as f64).to_radians().cos(), (*d as f64).to_radians().sin())).unwrap())
            .collect();
        let tr = |t: f64, off: f64| {
            let n = Point2::new(t.cos(), t.sin());
            Line2::new(n.x, n.y, -(n.dot(apex) + off)).unwrap()
        };
        let refs = [&lines[0], &lines[1], &lines[2], &lines[3]];
        if let (Ok(a), Ok(b)) = (pencil_cross_ratio(refs, &tr(t1, off1)), pencil_cross_ratio(refs, &tr(t2, off2))) {
            prop_assert!((a - b).abs() < 1e-9 * a.abs().max(1.0));
        }
    }

    #[test]
    fn corner_error_is_scale_invariant(x in 0.0f64..640.0, y in 0.0f64..480.0, dx in -30.0f64..30.0, s in 0.1f64..10.0) {
        let f = |p: Point2| Frame { category: FrameCategory::OneC, box_lines: Default::default(), corners: vec![p] };
        let a = corner_error(&[f(Point2::new(x + dx, y))], &[f(Point2::new(x, y))], &[800.0]).unwrap();
        let b = corner_error(&[f(Point2::new(s * (x + dx), s * y))], &[f(Point2::new(s * x, s * y))], &[800.0 * s]).unwrap();
        prop_assert!((a - b).abs() < 1e-9);
    }
}
