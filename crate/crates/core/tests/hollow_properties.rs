use num_rational::Ratio;
use proptest::prelude::*;
use surfflow::hollow2d::{
    contains_integer_point, directions, min_width, narrow_direction, unimodular_image, width_along,
    Point, ThirdIntegralPolygon,
};

fn cross(o: Point, a: Point, b: Point) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    cross(a, b, p) == 0
        && p.0 >= a.0.min(b.0)
        && p.0 <= a.0.max(b.0)
        && p.1 >= a.1.min(b.1)
        && p.1 <= a.1.max(b.1)
}

fn in_triangle(a: Point, b: Point, c: Point, p: Point) -> bool {
    let (d1, d2, d3) = (cross(a, b, p), cross(b, c, p), cross(c, a, p));
    let neg = d1 < 0 || d2 < 0 || d3 < 0;
    let pos = d1 > 0 || d2 > 0 || d3 > 0;
    !(neg && pos)
}

/// Closed hull membership by Carathéodory over the raw points.
fn in_hull(pts: &[Point], p: Point) -> bool {
    let n = pts.len();
    (0..n).any(|i| {
        pts[i] == p
            || (i + 1..n).any(|j| {
                on_segment(pts[i], pts[j], p)
                    || (j + 1..n).any(|k| {
                        cross(pts[i], pts[j], pts[k]) != 0 && in_triangle(pts[i], pts[j], pts[k], p)
                    })
            })
    })
}

fn hollow_naive(pts: &[Point]) -> bool {
    let (lo, hi) = (-30i64, 30i64);
    !(lo..=hi).any(|i| (lo..=hi).any(|j| in_hull(pts, (3 * i, 3 * j))))
}

fn arb_points() -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec((0i64..=8, 0i64..=13), 1..6)
}

fn arb_unimodular() -> impl Strategy<Value = [[i64; 2]; 2]> {
    prop::collection::vec((0usize..4, -2i64..=2), 0..5).prop_map(|ops| {
        let mut a = [[1i64, 0], [0, 1]];
        for (kind, k) in ops {
            let e = match kind {
                0 => [[1, k], [0, 1]],
                1 => [[1, 0], [k, 1]],
                2 => [[0, 1], [1, 0]],
                _ => [[-1, 0], [0, 1]],
            };
            a = [
                [
                    a[0][0] * e[0][0] + a[0][1] * e[1][0],
                    a[0][0] * e[0][1] + a[0][1] * e[1][1],
                ],
                [
                    a[1][0] * e[0][0] + a[1][1] * e[1][0],
                    a[1][0] * e[0][1] + a[1][1] * e[1][1],
                ],
            ];
        }
        a
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn hollowness_matches_carath(pts in arb_points()) {
        let p = ThirdIntegralPolygon::hull_of(&pts).unwrap();
        prop_assert_eq!(contains_integer_point(&p), !hollow_naive(&pts));
        for &q in &pts {
            prop_assert!(p.contains(q));
        }
    }

    #[test]
    fn adding_points_keeps_integer_points(pts in arb_points(), extra in (0i64..=8, 0i64..=13)) {
        let p = ThirdIntegralPolygon::hull_of(&pts).unwrap();
        let mut more = pts.clone();
        more.push(extra);
        let q = ThirdIntegralPolygon::hull_of(&more).unwrap();
        if contains_integer_point(&p) {
            prop_assert!(contains_integer_point(&q));
        }
    }

    #[test]
    fn widths_are_support_spreads(pts in arb_points(), z in (-5i64..=5, -5i64..=5)) {
        prop_assume!(z != (0, 0));
        let p = ThirdIntegralPolygon::hull_of(&pts).unwrap();
        let vals: Vec<i64> = pts.iter().map(|&(x, y)| z.0 * x + z.1 * y).collect();
        let naive = Ratio::new(vals.iter().max().unwrap() - vals.iter().min().unwrap(), 3);
        prop_assert_eq!(width_along(&p, z).unwrap(), naive);
    }

    #[test]
    fn unimodular_maps_preserve_hollowness_and_width(pts in arb_points(), a in arb_unimodular()) {
        let p = ThirdIntegralPolygon::hull_of(&pts).unwrap();
        let img = unimodular_image(&p, a).unwrap();
        prop_assert_eq!(contains_integer_point(&img), contains_integer_point(&p));
        // A⁻¹ for a unimodular A
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        let inv = [[det * a[1][1], -det * a[0][1]], [-det * a[1][0], det * a[0][0]]];
        let dirs = directions(6);
        let mapped: Vec<Point> = dirs
            .iter()
            .map(|&(c1, c2)| (inv[0][0] * c1 + inv[0][1] * c2, inv[1][0] * c1 + inv[1][1] * c2))
            .collect();
        for (&c, &ac) in dirs.iter().zip(&mapped) {
            prop_assert_eq!(width_along(&img, ac).unwrap(), width_along(&p, c).unwrap());
        }
        prop_assert_eq!(min_width(&img, &mapped).0, min_width(&p, &dirs).0);
    }

    #[test]
    fn narrow_direction_is_the_first_narrow_one(pts in arb_points(), t in 1i64..7) {
        let p = ThirdIntegralPolygon::hull_of(&pts).unwrap();
        let threshold = Ratio::new(t, 3);
        let first = directions(8).into_iter().find(|&z| width_along(&p, z).unwrap() < threshold);
        prop_assert_eq!(narrow_direction(&p, threshold, 8), first);
    }
}
