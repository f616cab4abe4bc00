use proptest::prelude::*;

use depthruns::competitors::{cassart_statistic, marden_statistic, baringhaus_statistic, midrange_spread};
use depthruns::depth::{depth, oja_depth, EmpiricalSet};
use depthruns::estimators::{inv_sqrt, tyler_shape, TylerOptions};
use depthruns::geom::{covering_sign_vectors, simplex_contains_origin, simplex_contains_origin_k, PointK};
use depthruns::ordering::{anti_ranks, observation_depths, Reference};
use depthruns::runs::runs_statistic;
use depthruns::{DepthKind, Point2};

fn pt() -> impl Strategy<Value = Point2> {
    (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(x, y)| Point2::new(x, y))
}

fn grid_pt(w: i32) -> impl Strategy<Value = Point2> {
    (-w..=w, -w..=w).prop_map(|(x, y)| Point2::new(x as f64, y as f64))
}

fn points(lo: usize, hi: usize) -> impl Strategy<Value = Vec<Point2>> {
    prop::collection::vec(pt(), lo..=hi)
}

fn cond(a: [[f64; 2]; 2]) -> f64 {
    // singular values of a 2x2 matrix from its Frobenius norm and determinant
    let f = a.iter().flatten().map(|v| v * v).sum::<f64>();
    let d = (a[0][0] * a[1][1] - a[0][1] * a[1][0]).abs();
    let disc = (f * f - 4.0 * d * d).max(0.0).sqrt();
    ((f + disc) / (f - disc)).sqrt()
}

fn map() -> impl Strategy<Value = [[f64; 2]; 2]> {
    prop::array::uniform4(-3.0..3.0f64)
        .prop_map(|v| [[v[0], v[1]], [v[2], v[3]]])
        .prop_filter("condition number <= 100", |a| cond(*a) <= 100.0)
}

fn int_map() -> impl Strategy<Value = [[f64; 2]; 2]> {
    prop::array::uniform4(-3i32..=3)
        .prop_map(|v| [[v[0] as f64, v[1] as f64], [v[2] as f64, v[3] as f64]])
        .prop_filter("invertible, condition number <= 100", |a| {
            a[0][0] * a[1][1] != a[0][1] * a[1][0] && cond(*a) <= 100.0
        })
}

fn apply(a: &[[f64; 2]; 2], p: Point2) -> Point2 {
    Point2::new(a[0][0] * p.x + a[0][1] * p.y, a[1][0] * p.x + a[1][1] * p.y)
}

fn sign_pattern(v: &[f64]) -> Vec<std::cmp::Ordering> {
    let mut out = Vec::new();
    for i in 0..v.len() {
        for j in 0..i {
            out.push(v[i].partial_cmp(&v[j]).unwrap());
        }
    }
    out
}

fn has_ties(depths: &[f64]) -> bool {
    let mut d = depths.to_vec();
    d.sort_by(f64::total_cmp);
    d.windows(2).any(|w| w[0] == w[1])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn containment_ignores_vertex_order_and_reflection(a in pt(), b in pt(), c in pt()) {
        let r = simplex_contains_origin(a, b, c);
        for (x, y, z) in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
            prop_assert_eq!(simplex_contains_origin(x, y, z), r);
        }
        prop_assert_eq!(simplex_contains_origin(-a, -b, -c), r);
        let k: Vec<PointK> = [a, b, c].iter().map(|p| PointK::new(vec![p.x, p.y]).unwrap()).collect();
        prop_assert_eq!(simplex_contains_origin_k(&k).unwrap(), r);
    }

    #[test]
    fn containment_on_grids(a in grid_pt(2), b in grid_pt(2), c in grid_pt(2)) {
        let r = simplex_contains_origin(a, b, c);
        prop_assert_eq!(simplex_contains_origin(c, a, b), r);
        prop_assert_eq!(simplex_contains_origin(b, a, c), r);
        prop_assert_eq!(simplex_contains_origin(-a, -b, -c), r);
    }

    #[test]
    fn covering_vectors_come_in_opposite_pairs(a in pt(), b in pt(), c in pt()) {
        let sep = |p: Point2, q: Point2| (p.cross(q) / (p.norm() * q.norm())).abs() > 1e-6f64.sin();
        prop_assume!(sep(a, b) && sep(a, c) && sep(b, c));
        let v = covering_sign_vectors(a, b, c);
        prop_assert_eq!(v.len(), 2);
        for k in 0..3 {
            prop_assert_eq!(v[0].0[k] + v[1].0[k], 0);
        }
    }

    #[test]
    fn depth_range_and_sample_points(s in points(1, 25)) {
        let set = EmpiricalSet::new(s.clone()).unwrap();
        let m = s.len() as f64;
        for &x in &s {
            let h = depth(x, &set, DepthKind::Halfspace, None).unwrap();
            prop_assert!(h >= 1.0 / m && h <= 1.0);
            // volume depth needs a pair, simplicial depth a triple
            for (kind, min) in [(DepthKind::SimplicialVolume, 2), (DepthKind::Simplicial, 3)] {
                if s.len() >= min {
                    let d = depth(x, &set, kind, None).unwrap();
                    prop_assert!((0.0..=1.0).contains(&d));
                }
            }
        }
    }

    #[test]
    fn depth_of_reflected_query_in_symmetric_set(s in points(2, 15), x in pt()) {
        let mut all = s.clone();
        all.extend(s.iter().map(|&p| -p));
        let set = EmpiricalSet::new(all).unwrap();
        for kind in [DepthKind::Halfspace, DepthKind::Simplicial] {
            prop_assert_eq!(depth(x, &set, kind, None).unwrap(), depth(-x, &set, kind, None).unwrap());
        }
        let a = depth(x, &set, DepthKind::SimplicialVolume, None).unwrap();
        let b = depth(-x, &set, DepthKind::SimplicialVolume, None).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(b.abs()));
    }

    #[test]
    fn depth_ordering_survives_integer_maps(
        s in prop::collection::vec(grid_pt(20), 3..20),
        q in prop::collection::vec(grid_pt(25), 1..10),
        a in int_map(),
    ) {
        let set = EmpiricalSet::new(s.clone()).unwrap();
        let mapped = EmpiricalSet::new(s.iter().map(|&p| apply(&a, p)).collect()).unwrap();
        for kind in [DepthKind::Halfspace, DepthKind::Simplicial] {
            let before: Vec<f64> = q.iter().map(|&x| depth(x, &set, kind, None).unwrap()).collect();
            let after: Vec<f64> = q.iter().map(|&x| depth(apply(&a, x), &mapped, kind, None).unwrap()).collect();
            // counts are integers, so the values themselves must agree
            prop_assert_eq!(&before, &after);
            prop_assert_eq!(sign_pattern(&before), sign_pattern(&after));
        }
    }

    #[test]
    fn volume_depth_ordering_survives_maps(s in points(2, 20), q in points(1, 10), a in map()) {
        let set = EmpiricalSet::new(s.clone()).unwrap();
        let mapped = EmpiricalSet::new(s.iter().map(|&p| apply(&a, p)).collect()).unwrap();
        let kind = DepthKind::SimplicialVolume;
        let before: Vec<f64> = q.iter().map(|&x| depth(x, &set, kind, None).unwrap()).collect();
        let after: Vec<f64> = q.iter().map(|&x| depth(apply(&a, x), &mapped, kind, None).unwrap()).collect();
        for i in 0..q.len() {
            for j in 0..i {
                if (before[i] - before[j]).abs() > 1e-9 * before[i].max(before[j]) {
                    prop_assert_eq!(before[i] < before[j], after[i] < after[j]);
                }
            }
        }
    }

    #[test]
    fn pushing_a_point_out_lowers_volume_depth(s in points(2, 12), x in pt(), k in any::<prop::sample::Index>(), f in 1.1..5.0f64) {
        let k = k.index(s.len());
        let d = s[k] - x;
        prop_assume!(s.iter().enumerate().any(|(i, &p)| i != k && d.cross(p - x).abs() > 1e-6));
        let mut moved = s.clone();
        moved[k] = x + d * f;
        let before = oja_depth(x, &EmpiricalSet::new(s).unwrap(), None).unwrap();
        let after = oja_depth(x, &EmpiricalSet::new(moved).unwrap(), None).unwrap();
        prop_assert!(after < before);
    }

    #[test]
    fn anti_ranks_pair_reflections_in_index_order(s in points(1, 10)) {
        let mut all = s.clone();
        all.extend(s.iter().map(|&p| -p));
        let n = s.len();
        for kind in [DepthKind::Halfspace, DepthKind::Simplicial, DepthKind::SimplicialVolume] {
            let d = observation_depths(&all, kind, Reference::Symmetrized).unwrap();
            let order = anti_ranks(&all, kind).unwrap().order;
            let pos = |i: usize| order.iter().position(|&o| o == i).unwrap();
            for i in 0..n {
                prop_assert_eq!(d[i], d[i + n]);
                prop_assert!(pos(i) < pos(i + n));
            }
        }
    }

    #[test]
    fn reflecting_observations_keeps_the_ordering(s in points(3, 25), flips in prop::collection::vec(any::<bool>(), 25)) {
        let flipped: Vec<Point2> = s.iter().zip(&flips).map(|(&p, &f)| if f { -p } else { p }).collect();
        for kind in [DepthKind::Halfspace, DepthKind::Simplicial, DepthKind::SimplicialVolume] {
            prop_assert_eq!(anti_ranks(&s, kind).unwrap(), anti_ranks(&flipped, kind).unwrap());
        }
    }

    #[test]
    fn runs_count_range(s in points(1, 30)) {
        for kind in [DepthKind::Halfspace, DepthKind::SimplicialVolume] {
            let r = runs_statistic(&s, kind).unwrap().count;
            if s.len() < 3 {
                prop_assert_eq!(r, 1);
            } else {
                prop_assert!((1..=s.len() as u64 - 1).contains(&r));
            }
        }
    }

    #[test]
    fn runs_statistic_ignores_order_of_four(s in points(4, 4)) {
        let perms = permutations(4);
        for kind in [DepthKind::Halfspace, DepthKind::Simplicial, DepthKind::SimplicialVolume] {
            let d = observation_depths(&s, kind, Reference::Symmetrized).unwrap();
            // with tied depths the index rule decides, so only tie-free
            // samples are invariant under every permutation
            if has_ties(&d) {
                continue;
            }
            let base = runs_statistic(&s, kind).unwrap().count;
            for p in &perms {
                let t: Vec<Point2> = p.iter().map(|&i| s[i]).collect();
                prop_assert_eq!(runs_statistic(&t, kind).unwrap().count, base);
            }
        }
    }

    #[test]
    fn runs_statistic_ignores_order_of_fifty(s in points(50, 50), seeds in prop::collection::vec(any::<u64>(), 10)) {
        let kind = DepthKind::SimplicialVolume;
        let d = observation_depths(&s, kind, Reference::Symmetrized).unwrap();
        prop_assume!(!has_ties(&d));
        let base = runs_statistic(&s, kind).unwrap().count;
        for seed in seeds {
            let mut idx: Vec<usize> = (0..50).collect();
            shuffle(&mut idx, seed);
            let t: Vec<Point2> = idx.iter().map(|&i| s[i]).collect();
            prop_assert_eq!(runs_statistic(&t, kind).unwrap().count, base);
        }
    }

    #[test]
    fn tyler_ignores_scale_and_keeps_trace(s in points(6, 40), c in 0.01..100.0f64) {
        let opts = TylerOptions::default();
        let Ok(a) = tyler_shape(&s, opts) else { return Ok(()) };
        let scaled: Vec<Point2> = s.iter().map(|&p| p * c).collect();
        let b = tyler_shape(&scaled, opts).unwrap();
        prop_assert!((a.matrix().trace() - 2.0).abs() <= 1e-10);
        prop_assert!(a.matrix().max_abs_diff(&b.matrix()) <= 1e-6);
        let m = inv_sqrt(&a).unwrap();
        let prod = m.matmul(&a.matrix());
        let msm = [
            [prod[0][0] * m.xx + prod[0][1] * m.xy, prod[0][0] * m.xy + prod[0][1] * m.yy],
            [prod[1][0] * m.xx + prod[1][1] * m.xy, prod[1][0] * m.xy + prod[1][1] * m.yy],
        ];
        prop_assert!((msm[0][0] - 1.0).abs() <= 1e-10 && msm[0][1].abs() <= 1e-10);
        prop_assert!(msm[1][0].abs() <= 1e-10 && (msm[1][1] - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn elliptical_statistics_are_affine_invariant(s in points(10, 40), a in map(), c in 0.1..10.0f64) {
        let mapped: Vec<Point2> = s.iter().map(|&p| apply(&a, p) * c).collect();
        prop_assume!(tyler_shape(&s, TylerOptions::default()).is_ok());
        let m0 = marden_statistic(&s, true).unwrap();
        let m1 = marden_statistic(&mapped, true).unwrap();
        prop_assert!((m0 - m1).abs() <= 1e-9 * m0.abs().max(1.0), "{} vs {}", m0, m1);
        let b0 = baringhaus_statistic(&s, true).unwrap();
        let b1 = baringhaus_statistic(&mapped, true).unwrap();
        prop_assert!((b0 - b1).abs() <= 1e-9 * b0.abs().max(1.0), "{} vs {}", b0, b1);
    }

    #[test]
    fn cassart_is_nonnegative_and_order_free(s in points(3, 40), seed in any::<u64>()) {
        let Ok(c) = cassart_statistic(&s) else { return Ok(()) };
        prop_assert!(c >= 0.0);
        let mut idx: Vec<usize> = (0..s.len()).collect();
        shuffle(&mut idx, seed);
        let t: Vec<Point2> = idx.iter().map(|&i| s[i]).collect();
        let c2 = cassart_statistic(&t).unwrap();
        prop_assert!((c - c2).abs() <= 1e-12 * c.max(1.0));
    }

    #[test]
    fn pursuit_objective_is_even(s in points(2, 30), t in 0.0..std::f64::consts::PI) {
        let u = Point2::new(t.cos(), t.sin());
        let mut buf = Vec::new();
        let g = midrange_spread(&s, u, &mut buf);
        let h = midrange_spread(&s, -u, &mut buf);
        prop_assert!((g - h).abs() <= 1e-12 * g.abs().max(1.0));
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

fn shuffle(v: &mut [usize], seed: u64) {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    v.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
}
