use proptest::prelude::*;

use polyvem_core::geometry::{self, Point};
use polyvem_core::metrics::{kernel, kernel_area, min_enclosing_circle, polygon_metrics, MetricId};
use polyvem_core::stats::spearman;

/// Simple polygons star-shaped about the origin: sorted angles, radii in
/// `[0.2, 1]`, with a minimum angular gap so vertices stay distinct.
fn star_polygon() -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec((0.05f64..1.0, 0.2f64..1.0), 3..=10).prop_map(|steps| {
        let total: f64 = steps.iter().map(|s| s.0).sum();
        let mut angle = 0.0;
        steps
            .into_iter()
            .map(|(gap, r)| {
                angle += gap / total * std::f64::consts::TAU;
                Point::new(r * angle.cos(), r * angle.sin())
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scale_invariant_metrics(poly in star_polygon(), s in 0.01f64..100.0) {
        let scaled: Vec<Point> = poly.iter().map(|&p| p * s).collect();
        let (a, b) = (polygon_metrics(&poly).unwrap(), polygon_metrics(&scaled).unwrap());
        for id in MetricId::ALL.into_iter().filter(|m| m.is_scale_invariant()) {
            let (x, y) = (a.get(id), b.get(id));
            prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(y.abs()).max(1e-12), "{id:?}: {x} vs {y}");
        }
    }

    #[test]
    fn kernel_lies_inside_polygon(poly in star_polygon()) {
        let k = kernel(&poly);
        let area = geometry::area(&poly).unwrap();
        prop_assert!(kernel_area(&poly) <= area * (1.0 + 1e-12));
        let n = poly.len();
        for p in k {
            for e in 0..n {
                let (a, b) = (poly[e], poly[(e + 1) % n]);
                prop_assert!(geometry::orient(a, b, p) >= -1e-9 * a.dist(b));
            }
        }
    }

    #[test]
    fn kernel_area_matches_sampling(poly in star_polygon()) {
        let (lo, hi) = geometry::bounding_box(&poly);
        let cells = 300;
        let (dx, dy) = ((hi.x - lo.x) / cells as f64, (hi.y - lo.y) / cells as f64);
        let n = poly.len();
        let mut hits = 0;
        for i in 0..cells {
            for j in 0..cells {
                let p = Point::new(lo.x + (i as f64 + 0.5) * dx, lo.y + (j as f64 + 0.5) * dy);
                if (0..n).all(|e| geometry::orient(poly[e], poly[(e + 1) % n], p) >= 0.0) {
                    hits += 1;
                }
            }
        }
        let sampled = hits as f64 * dx * dy;
        // Midpoint-rule error is bounded by the boundary cells.
        let slack = 4.0 * (dx + dy) * geometry::perimeter(&poly);
        prop_assert!((kernel_area(&poly) - sampled).abs() <= slack);
    }

    #[test]
    fn enclosing_circle_is_minimal(poly in star_polygon()) {
        let c = min_enclosing_circle(&poly);
        prop_assert!(poly.iter().all(|p| p.dist(c.center) <= c.radius * (1.0 + 1e-12)));
        // At least two points on the circle (otherwise it could shrink).
        let on = poly.iter().filter(|p| (p.dist(c.center) - c.radius).abs() <= 1e-9 * c.radius).count();
        prop_assert!(on >= 2);
    }

    #[test]
    fn spearman_ignores_monotone_transforms(
        pairs in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 3..40)
    ) {
        let x: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let y: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        if let Ok(base) = spearman(&x, &y) {
            let ex: Vec<f64> = x.iter().map(|v| v.exp()).collect();
            let cy: Vec<f64> = y.iter().map(|v| v * v * v).collect();
            prop_assert!((spearman(&ex, &y).unwrap() - base).abs() < 1e-12);
            prop_assert!((spearman(&x, &cy).unwrap() - base).abs() < 1e-12);
        }
    }

    #[test]
    fn spearman_self_and_reversed(x in prop::collection::hash_set(-1000i32..1000, 3..30)) {
        let x: Vec<f64> = x.into_iter().map(f64::from).collect();
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        prop_assert_eq!(spearman(&x, &x).unwrap(), 1.0);
        prop_assert_eq!(spearman(&x, &neg).unwrap(), -1.0);
    }
}
