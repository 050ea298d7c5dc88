//! End-to-end flows across modules through the public API.

use torus_spectra::correlations::{n_correlation_oracle, pair_correlation, triple_correlation, Interval};
use torus_spectra::diophantine::{canonical_representative, orbit, LatticeTuple};
use torus_spectra::gaps::{gap_profile, lower_bound_witness, partial_summation_identity};
use torus_spectra::poisson_seq::{first_n, generate, pair_corr_decomposition};
use torus_spectra::solver::{endgame_integrals, solve_g};
use torus_spectra::spectrum::enumerate_spectrum;
use torus_spectra::TorusShape;

#[test]
fn spectrum_correlations_match_oracle() {
    let shape = TorusShape::new(1.1, 0.4, 1.4).unwrap();
    let spec = enumerate_spectrum(&shape, 1500);
    let iv = [Interval::new(0.0, 0.5), Interval::new(-1.0, 0.7), Interval::new(0.2, 1.3)];
    for a in iv {
        let fast = pair_correlation(&spec, a, 1500).unwrap();
        let slow = n_correlation_oracle(&spec, &[a], 1500).unwrap();
        assert_eq!(fast.count, slow.count, "{a:?}");
        for b in iv {
            let fast = triple_correlation(&spec, a, b, 800).unwrap();
            let slow = n_correlation_oracle(&spec, &[a, b], 800).unwrap();
            assert_eq!(fast.count, slow.count, "{a:?} {b:?}");
        }
    }
}

#[test]
fn gap_statistics_on_a_torus_spectrum() {
    let shape = TorusShape::new(1.0, 0.3, 1.7).unwrap();
    let spec = enumerate_spectrum(&shape, 20_001);
    let p = gap_profile(&spec, 20_000).unwrap();
    assert!((p.mean_gap() - 1.0).abs() < 0.05, "{}", p.mean_gap());
    let w = lower_bound_witness(&spec, 20_000).unwrap();
    assert!(w.slack >= -1e-9, "{w:?}");
    let bound = p.max_gap() + 1.0;
    let ps = partial_summation_identity(&spec, 20_000, bound).unwrap();
    assert!((ps.lhs - ps.rhs).abs() <= 1e-6 * ps.lhs.abs().max(1.0), "{ps:?}");
}

#[test]
fn construction_prefixes_agree() {
    let full = generate(20_000, 7);
    let head = first_n(5_000, 7, true);
    assert_eq!(&full.values()[..5_000], head.values());
    assert_eq!(&full.tags()[..5_000], head.tags());
    let d = pair_corr_decomposition(&full, 1.0, 5_000).unwrap();
    assert_eq!(d.s1 + d.s2 + d.s3 + d.s4, d.total);
    assert!(full.max_gap() <= 2.0);
}

#[test]
fn construction_csv_round_trip() {
    let s = first_n(200, 3, true);
    let mut buf = Vec::new();
    s.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("value,tag_kind,tag_index_1,tag_index_2"));
    let parsed: Vec<f64> = lines.map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(parsed, s.values());
    assert!(!text.contains('\r'));
}

#[test]
fn solver_and_endgame_are_consistent() {
    let g = solve_g(1e-12).unwrap();
    assert!((g.g - 2.006361938925098).abs() < 1e-9);
    for eps in [1e-3, 0.01, 0.05] {
        let e = endgame_integrals(g.g, eps).unwrap();
        assert!(e.rhs > g.g, "{e:?}");
        assert!(e.discrepancy.abs() < 1e-9);
    }
}

#[test]
fn canonical_representatives_collapse_orbits() {
    let t = LatticeTuple::new([1, 3, 2, 4], [5, 1, 0, 4]);
    assert!(t.is_valid());
    let rep = canonical_representative(&t);
    for s in orbit(&t) {
        assert_eq!(canonical_representative(&s), rep);
    }
}

#[test]
fn sqrt2_torus_pair_correlation_example() {
    let shape = TorusShape::new(1.0, 0.0, std::f64::consts::SQRT_2).unwrap();
    let n = 100_000;
    let quadrant = torus_spectra::spectrum::enumerate_quadrant_spectrum(&shape, n).unwrap();
    let t2 = pair_correlation(&quadrant, Interval::new(0.0, 1.0), n).unwrap().value;
    assert!((0.9..=1.1).contains(&t2), "{t2}");
    // The half-plane index set doubles eigenvalues with mn != 0 on rectangular
    // forms, and the exact ties roughly double T2.
    let half = enumerate_spectrum(&shape, n);
    let tied = pair_correlation(&half, Interval::new(0.0, 1.0), n).unwrap().value;
    assert!(tied > 1.8, "{tied}");
}
