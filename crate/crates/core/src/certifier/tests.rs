use super::*;
use crate::families::{deterministic_family, strip_pair};
use crate::probvec::{secret_bit, tensor};
use crate::rational::{frac, half, int};

fn trivial_g() -> JointDist {
    JointDist::new(
        vec![Axis::new("A", 1), Axis::new("B", 1), Axis::new("E", 1)],
        [(vec![0, 0, 0], int(1))],
    )
    .unwrap()
}

fn secret_bit_g() -> JointDist {
    let e = JointDist::new(vec![Axis::new("E", 1)], [(vec![0], int(1))]).unwrap();
    tensor(&secret_bit(), &e).unwrap()
}

fn eve_knows_all() -> JointDist {
    JointDist::new(
        vec![Axis::new("A", 2), Axis::new("B", 2), Axis::new("E", 2)],
        [(vec![0, 0, 0], frac(1, 2)), (vec![1, 1, 1], frac(1, 2))],
    )
    .unwrap()
}

fn independent_bits() -> JointDist {
    JointDist::from_dense(
        vec![Axis::new("A", 2), Axis::new("B", 2), Axis::new("E", 1)],
        vec![frac(1, 4); 4],
    )
    .unwrap()
}

fn strip_family(ca: usize, cb: usize) -> MapFamily {
    MapFamily::new(vec![strip_pair(ca, cb)], "explicit")
}

fn monolithic() -> CertifyOptions {
    CertifyOptions {
        route: SolverRoute::Monolithic,
        ..CertifyOptions::default()
    }
}

#[test]
fn selector_bits_are_msb_first() {
    let k = SelectorVector::from_bits(&[1, 0, 1, 1]);
    assert_eq!(k.index(), 11);
    assert_eq!(k.bit(0), 1);
    assert_eq!(k.bit(1), 0);
    assert_eq!(SelectorVector::new(11, 4).bits(), vec![1, 0, 1, 1]);
}

#[test]
fn dimensions_for_binary_g_without_family() {
    let p = CertificationProblem::new(&eve_knows_all(), &MapFamily::empty(), &half()).unwrap();
    assert_eq!(p.num_vars(), 64);
    let clp = build_lp(&p, &CertifyOptions::default()).unwrap();
    assert_eq!(clp.lp.num_vars, 64);
    let selectors = clp
        .kinds
        .iter()
        .filter(|k| matches!(k, RowKind::EveSelector { .. }))
        .count();
    assert_eq!(selectors, 8);
    assert_eq!(clp.kinds.last(), Some(&RowKind::Normalization));
    assert_eq!(clp.lp.rows.len(), 9);
}

#[test]
fn size_guard_refuses() {
    let fam = deterministic_family(2, 2, 20);
    let p = CertificationProblem::new(&eve_knows_all(), &fam, &half()).unwrap();
    let err = build_lp(&p, &CertifyOptions::default()).unwrap_err();
    assert!(matches!(err, CertifyError::SizeGuard { d: 2, m: 20, limit: 16, .. }));
    assert!(err.to_string().contains("variables"));
}

#[test]
fn trivial_g_with_strip_is_undistillable() {
    let (g, fam) = (trivial_g(), strip_family(1, 1));
    for opts in [CertifyOptions::default(), monolithic()] {
        let cert = certify(&g, &fam, &half(), &opts).unwrap();
        assert_eq!(cert.verdict, Verdict::Undistillable);
        assert_eq!(cert.optimum, int(0));
        assert!(verify_certificate(&g, &fam, &half(), &cert));
    }
}

#[test]
fn secret_bit_reaches_a_quarter_on_both_routes() {
    let g = secret_bit_g();
    for m in 0..=2 {
        let fam = deterministic_family(2, 2, m);
        let a = certify(&g, &fam, &half(), &CertifyOptions::default()).unwrap();
        let b = certify(&g, &fam, &half(), &monolithic()).unwrap();
        assert_eq!(a.optimum, b.optimum);
        assert!(a.optimum >= frac(1, 4));
        assert_eq!(a.verdict, Verdict::Inconclusive);
        assert!(verify_certificate(&g, &fam, &half(), &a));
        assert!(verify_certificate(&g, &fam, &half(), &b));
    }
}

#[test]
fn canonical_witness_values() {
    for (g, expected) in [
        (secret_bit_g(), frac(1, 4)),
        (eve_knows_all(), frac(-1, 4)),
        (independent_bits(), int(0)),
    ] {
        let fam = strip_family(2, 2).prefix(0);
        let q = canonical_witness_q(&g).unwrap();
        let grouped = group_by_selector(&q, &g, &fam).unwrap();
        let p = CertificationProblem::new(&g, &fam, &half()).unwrap();
        let v = selector_values(&p, &grouped).unwrap();
        assert_eq!(v.objective, expected);
        assert_eq!(min_values(&p, &q).unwrap(), v);
    }
    assert!(canonical_witness_q(&trivial_g()).is_err());
}

#[test]
fn trivial_eve_groups_onto_one_selector() {
    let g = eve_knows_all();
    let fam = deterministic_family(2, 2, 2);
    let q = uniform_q(&g).unwrap();
    let grouped = group_by_selector(&q, &g, &fam).unwrap();
    let ks: HashSet<usize> = grouped.entries().map(|(i, _)| i[2]).collect();
    assert_eq!(ks.len(), 1);
    assert_eq!(grouped.total_mass(), int(1));
}

#[test]
fn tampering_and_replay_fail() {
    let (g, fam) = (trivial_g(), strip_family(1, 1));
    let cert = certify(&g, &fam, &half(), &CertifyOptions::default()).unwrap();
    let mut bumped = cert.clone();
    bumped.dual.as_mut().unwrap()[0] += frac(1, 1000);
    assert!(!verify_certificate(&g, &fam, &half(), &bumped));
    let other = JointDist::new(
        vec![Axis::new("A", 1), Axis::new("B", 1), Axis::new("E", 2)],
        [(vec![0, 0, 0], frac(1, 2)), (vec![0, 0, 1], frac(1, 2))],
    )
    .unwrap();
    assert!(!verify_certificate(&other, &fam, &half(), &cert));
    assert!(!verify_certificate(&g, &fam, &frac(2, 3), &cert));
}

#[test]
fn json_round_trip() {
    let g = secret_bit_g();
    let fam = deterministic_family(2, 2, 1);
    let cert = certify(&g, &fam, &half(), &CertifyOptions::default()).unwrap();
    let text = cert.to_json();
    assert!(text.starts_with(r#"{"verdict":"inconclusive","optimum":"#));
    let back = Certificate::from_json(&text).unwrap();
    assert_eq!(back, cert);
    assert!(verify_certificate(&g, &fam, &half(), &back));
}

#[test]
fn spotcheck_on_trivial_g() {
    let (g, fam) = (trivial_g(), strip_family(1, 1));
    let report = feasible_set_spotcheck(&g, &fam, &half(), &SpotcheckOptions::default()).unwrap();
    assert!(report.samples > 0);
    assert!(report.violations.is_empty());
    assert!(!report.max_advantage.is_positive());
}
