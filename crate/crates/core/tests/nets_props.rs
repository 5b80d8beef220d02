use mz_core::nets::*;
use proptest::prelude::*;

fn point_set(m: usize, max_len: usize, spread: f64) -> impl Strategy<Value = PointSet> {
    prop::collection::vec(prop::collection::vec(-spread..spread, m), 1..max_len)
        .prop_map(move |pts| PointSet::new(m, pts).unwrap())
}

fn any_point_set() -> impl Strategy<Value = PointSet> {
    (1usize..=3).prop_flat_map(|m| point_set(m, 120, 4.0))
}

/// Brute-force check that every point of a dense grid of the window lies in
/// some open cube `Q̊_δ(X_ν)`.
fn dense_grid_covered(ps: &PointSet, delta: f64, w: &Window, step: f64) -> bool {
    let n = (2.0 * w.half_side / step).round() as usize + 1;
    let axes: Vec<Vec<f64>> = w
        .center
        .iter()
        .map(|&c| mz_core::grid::linspace(c - w.half_side, c + w.half_side, n))
        .collect();
    let mut all = true;
    mz_core::grid::for_each_tensor_point(&axes, |x| {
        if all && !ps.iter().any(|p| sup_dist(p, x) < delta) {
            all = false;
        }
    });
    all
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn thinning_is_separated_and_covers_input(ps in any_point_set(), delta in 0.05f64..2.0) {
        let thin = greedy_thin(&ps, delta).unwrap();
        if thin.len() > 1 {
            prop_assert!(min_pairwise_separation(&thin).unwrap() >= delta);
        }
        for x in ps.iter() {
            prop_assert!(thin.iter().any(|z| sup_dist(x, z) < delta));
        }
    }

    #[test]
    fn thinning_keeps_input_order(ps in any_point_set(), delta in 0.05f64..2.0) {
        let thin = greedy_thin(&ps, delta).unwrap();
        let mut pos = 0;
        for z in thin.iter() {
            while ps.point(pos) != z {
                pos += 1;
            }
            pos += 1;
        }
        prop_assert_eq!(thin.point(0), ps.point(0));
    }

    #[test]
    fn thinning_is_idempotent(ps in any_point_set(), delta in 0.05f64..2.0) {
        let once = greedy_thin(&ps, delta).unwrap();
        let twice = greedy_thin(&once, delta).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn multiplicity_zero_iff_half_separated(ps in any_point_set(), delta1 in 0.05f64..2.0) {
        prop_assume!(ps.len() > 1);
        let sep = min_pairwise_separation(&ps).unwrap();
        let n = packing_multiplicity(&ps, delta1).unwrap();
        // Stay clear of the strict-inequality margin.
        prop_assume!((sep - 0.5 * delta1).abs() > 1e-9);
        prop_assert_eq!(n == 0, sep >= 0.5 * delta1);
    }

    #[test]
    fn packing_intersections_within_counting_bound(
        m in 1usize..=3,
        raw in prop::collection::vec(prop::collection::vec(-3.0f64..3.0, 3), 2..150),
        delta1 in 0.2f64..1.0,
        ratio in 0.51f64..2.0,
    ) {
        let pts: Vec<Vec<f64>> = raw.into_iter().map(|p| p[..m].to_vec()).collect();
        let packing = greedy_thin(&PointSet::new(m, pts).unwrap(), delta1).unwrap();
        let delta = ratio * delta1;
        let count = max_cube_intersections(&packing, delta) as u64;
        prop_assert!(count <= intersection_bound_counting(m as u32, delta, delta1).unwrap());
        if m >= 2 {
            prop_assert!(count <= intersection_bound(m as u32, delta, delta1).unwrap());
        }
    }

    #[test]
    fn partition_bins_are_disjoint(ps in any_point_set(), h in 0.05f64..1.0) {
        let n = max_cube_intersections(&ps, h);
        let bins = disjoint_partition(&ps, h, n).unwrap();
        prop_assert!(bins.len() <= n + 1);
        let mut seen = vec![false; ps.len()];
        for bin in &bins {
            for (a, &i) in bin.iter().enumerate() {
                prop_assert!(!seen[i]);
                seen[i] = true;
                for &j in &bin[a + 1..] {
                    prop_assert!(sup_dist(ps.point(i), ps.point(j)) > 2.0 * h);
                }
            }
        }
        prop_assert!(seen.into_iter().all(|s| s));
    }

    #[test]
    fn covering_check_agrees_with_dense_grid(
        raw in prop::collection::vec(prop::collection::vec(-1.2f64..1.2, 2), 1..40),
        delta in 0.2f64..0.8,
    ) {
        let ps = PointSet::new(2, raw).unwrap();
        let w = Window::centered(2, 1.0).unwrap();
        let report = covering_check(&ps, delta, &w, DEFAULT_MAX_DEPTH).unwrap();
        let grid = dense_grid_covered(&ps, delta, &w, delta / 100.0);
        match report.state {
            CoverageState::Covered => prop_assert!(grid),
            CoverageState::Uncovered => {
                let y = report.witness.clone().unwrap();
                prop_assert!(w.contains(&y));
                prop_assert!(ps.iter().all(|p| sup_dist(p, &y) >= delta * (1.0 - 1e-9)));
            }
            CoverageState::Undecided => prop_assert!(false, "undecided"),
        }
    }

    #[test]
    fn thinned_covering_doubles_radius(
        raw in prop::collection::vec(prop::collection::vec(-1.5f64..1.5, 2), 30..200),
        delta in 0.3f64..0.8,
    ) {
        let ps = PointSet::new(2, raw).unwrap();
        let w = Window::centered(2, 1.0).unwrap();
        prop_assume!(covering_check(&ps, delta, &w, DEFAULT_MAX_DEPTH).unwrap().is_covered());
        let thin = greedy_thin(&ps, delta).unwrap();
        let r = covering_check(&thin, 2.0 * delta * (1.0 + STRICT_REL), &w, DEFAULT_MAX_DEPTH).unwrap();
        prop_assert!(r.is_covered());
    }

    #[test]
    fn lattice_count_matches_enumeration(spacing in 0.1f64..1.0, half in 0.5f64..3.0, off in 0.0f64..1.0) {
        let w = Window::centered(2, half).unwrap();
        let net = lattice_net(2, spacing, &w, &[off * spacing, 0.0]).unwrap();
        let per_axis = |o: f64| {
            let lo = ((-half - o) / spacing).ceil() as i64;
            let hi = ((half - o) / spacing).floor() as i64;
            (hi - lo + 1).max(0) as usize
        };
        prop_assert_eq!(net.len(), per_axis(off * spacing) * per_axis(0.0));
        prop_assert!(net.iter().all(|p| w.contains(p)));
    }
}

#[test]
fn lattice_spacing_below_two_delta_covers() {
    let delta = 0.3;
    let w = Window::centered(2, 2.0).unwrap();
    let big = Window::centered(2, 2.5).unwrap();
    let net = lattice_net(2, 2.0 * delta * (1.0 - 1e-6), &big, &[0.0, 0.0]).unwrap();
    assert!(covering_check(&net, delta, &w, DEFAULT_MAX_DEPTH).unwrap().is_covered());
    let coarse = lattice_net(2, 2.0 * delta, &big, &[0.0, 0.0]).unwrap();
    let r = covering_check(&coarse, delta / 2.0, &w, DEFAULT_MAX_DEPTH).unwrap();
    assert_eq!(r.state, CoverageState::Uncovered);
}

#[test]
fn one_dimensional_eq_bound_counterexample() {
    // Three points at spacing δ₁ = 1 and δ = 0.51: the middle cube meets both
    // neighbours, while the bound with the trailing −1 allows only one.
    let ps = PointSet::new(1, vec![vec![-1.0], vec![0.0], vec![1.0]]).unwrap();
    assert_eq!(max_cube_intersections(&ps, 0.51), 2);
    assert_eq!(intersection_bound(1, 0.51, 1.0).unwrap(), 1);
    assert_eq!(intersection_bound_counting(1, 0.51, 1.0).unwrap(), 2);
}

#[test]
fn partition_of_unit_chain() {
    let ps = PointSet::new(1, (0..20).map(|i| vec![i as f64]).collect()).unwrap();
    let bins = disjoint_partition(&ps, 0.75, 2).unwrap();
    assert!(bins.len() <= 3 && bins.len() >= 2);
    assert!(matches!(
        disjoint_partition(&ps, 1.2, 1),
        Err(mz_core::Error::MultiplicityExceeded { .. })
    ));
}
