use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;

use super::*;
use crate::number::{rat, ratio};
use crate::ratmap::DEFAULT_DEGREE_BUDGET;
use crate::spectral::default_tolerance;

fn p2(f: [&str; 3]) -> RationalSelfMap {
    RationalSelfMap::from_expressions(Surface::P2, &[&f], &BTreeMap::new()).unwrap()
}

fn pp(a: [&str; 2], b: [&str; 2]) -> RationalSelfMap {
    RationalSelfMap::from_expressions(Surface::P1xP1, &[&a, &b], &BTreeMap::new()).unwrap()
}

fn ex41() -> RationalSelfMap {
    p2(["x*z + y^2", "y*z + x^2", "x^2 + y^2"])
}

fn power(d: u32) -> RationalSelfMap {
    pp([&format!("t0^{d}"), &format!("t1^{d}")], ["w0", "w1"])
}

fn feps(eps: &Rational) -> Result<RationalSelfMap> {
    let mut params = BTreeMap::new();
    params.insert("eps".into(), eps.clone());
    RationalSelfMap::from_expressions(
        Surface::P1xP1,
        &[
            &["t0*t1*w0*w1", "t0^2*w1^2 - eps*t1^2*w0^2"],
            &["t0*w1*(t0*w0 - eps*t1*w1)", "t0^2*w1^2 - (t0*w0 - t1*w1)^2"],
        ],
        &params,
    )
}

#[test]
fn sequence_of_ex41() {
    let seq = degree_sequence(&ex41(), 5, DEFAULT_DEGREE_BUDGET).unwrap();
    assert_eq!(seq.degrees().unwrap(), vec![2, 4, 8, 16, 32]);
    assert_eq!(seq.stable_up_to, 5);
    assert!(seq.is_complete());
    let dd = dynamical_degree(&seq, &default_tolerance()).unwrap();
    assert_eq!(dd.lambda_exact, Some(rat(2)));
    assert_eq!(dd.method, DegreeMethod::SpectralStable);
    assert_eq!(dd.empirical_c, Some(rat(1)));
}

#[test]
fn identity_sequence_is_flat() {
    let seq = degree_sequence(&RationalSelfMap::identity(Surface::P2), 4, DEFAULT_DEGREE_BUDGET).unwrap();
    assert_eq!(seq.degrees().unwrap(), vec![1, 1, 1, 1]);
    assert!(degree_sequence(&ex41(), 0, DEFAULT_DEGREE_BUDGET).is_err());
}

#[test]
fn power_sequence_matrices() {
    let seq = degree_sequence(&power(2), 4, DEFAULT_DEGREE_BUDGET).unwrap();
    for (i, m) in seq.matrices.iter().enumerate() {
        assert_eq!(m, &vec![vec![1 << (i + 1), 0], vec![0, 1]]);
    }
    // s_n = H . M^n H with H = (1, 1) and form [[0,1],[1,0]]: 2^n + 1
    let s = seq.intersection_numbers();
    assert_eq!(s, vec![rat(3), rat(5), rat(9), rat(17)]);
}

#[test]
fn truncated_sequence_is_sequence_only() {
    let seq = degree_sequence(&ex41(), 10, 20).unwrap();
    assert_eq!(seq.len(), 4);
    assert!(matches!(seq.truncated, Some(Error::BudgetExceeded { completed: 4, .. })));
    let dd = dynamical_degree(&seq, &default_tolerance()).unwrap();
    assert_eq!(dd.method, DegreeMethod::SequenceOnly);
    assert_eq!(dd.lambda_exact, None);
    // every s_n = 2^n is a perfect power
    assert_eq!(dd.hi, rat(2));
}

#[test]
fn topological_degree_of_ex41() {
    assert_eq!(topological_degree(&ex41(), &FiberCountConfig::default()).unwrap(), 3);
}

#[test]
fn power_map_anomaly() {
    let cfg = AnalysisConfig { iterations: 3, ..AnalysisConfig::default() };
    for d in [2u64, 3] {
        let r = analyze(&power(d as u32), &cfg).unwrap();
        assert_eq!(r.deg_top, d);
        assert_eq!(r.dynamical.lambda_exact, Some(rat(d as i64)));
        assert_eq!(r.lambda_sq.comparison, Comparison::Greater);
        assert!(r.regularity.is_regular_geometric);
        assert_eq!(r.regularity.criterion_consistent, Some(false));
        assert!(r.projection.as_ref().unwrap().holds);
        assert_eq!(r.rank_one, RankOneReport { is_rank_one: false, trace_identity_holds: None });
    }
}

#[test]
fn ex41_report() {
    let r = analyze(&ex41(), &AnalysisConfig::default()).unwrap();
    assert_eq!(r.deg_top, 3);
    assert_eq!(r.lambda_sq.comparison, Comparison::Greater);
    assert_eq!(
        r.regularity,
        RegularityReport {
            is_regular_geometric: false,
            lambda_sq_equals_deg: Some(false),
            criterion_consistent: Some(true)
        }
    );
    assert_eq!(r.entropy_bound, "1.09861228866811");
    assert_eq!(r.rank_one, RankOneReport { is_rank_one: true, trace_identity_holds: Some(true) });
    assert!(r.projection.is_none());
}

#[test]
fn entropy_of_interval_lambda_rounds_up() {
    let seq = degree_sequence(&pp(["t0^2*w0", "t1^2*w1"], ["t0*w0", "t1*w1"]), 2, DEFAULT_DEGREE_BUDGET).unwrap();
    let dd = dynamical_degree(&seq, &default_tolerance()).unwrap();
    assert!(dd.lambda_exact.is_none());
    // matrix [[2,1],[1,1]], radius (3 + sqrt 5)/2 = 2.6180339887498948...
    assert_eq!(entropy_bound(&dd, 1), "0.962423650119207");
}

#[test]
fn log_concavity_comparisons() {
    let seq = degree_sequence(&ex41(), 2, DEFAULT_DEGREE_BUDGET).unwrap();
    let dd = dynamical_degree(&seq, &default_tolerance()).unwrap();
    assert_eq!(log_concavity_check(&dd, 3).comparison, Comparison::Greater);
    assert_eq!(log_concavity_check(&dd, 4).comparison, Comparison::Equal);
    let odd = log_concavity_check(&dd, 5);
    assert!(odd.is_anomalous());
}

#[test]
fn family_scan_of_feps() {
    let values = [rat(1), rat(2), rat(3), ratio(1, 2), rat(0)];
    let scan = family_scan(feps, &values, None).unwrap();
    for row in &scan.rows[..4] {
        assert_eq!(row.base_scheme_length, Some(16));
        assert_eq!(row.pullback_matrix, Some(vec![vec![2, 2], vec![2, 2]]));
        assert!(!row.degenerate);
    }
    assert!(scan.rows[4].degenerate);
    assert!(scan.length_constant && scan.matrix_constant);
    assert!(family_scan(feps, &[], None).is_err());
}

#[test]
fn involution_scan_rows() {
    let f = feps(&rat(2)).unwrap();
    let cands = [
        InvolutionCandidate::Reciprocal(rat(1)),
        InvolutionCandidate::Reciprocal(rat(0)),
        InvolutionCandidate::IdentitySwap,
    ];
    let rows = involution_invariance_scan(&f, &cands).unwrap();
    assert_eq!(rows[0].invariant, Some(false));
    assert_eq!(rows[1].invariant, None);
    assert_eq!(rows[2].invariant, Some(false));
    assert_eq!(
        involution_invariance_scan(&power(2), &[InvolutionCandidate::IdentitySwap]).unwrap()[0].invariant,
        Some(false)
    );
    // a map that only sees t/w is invariant under (t, w) -> (1/w, 1/t)
    let g = pp(["t0*w1", "t1*w0"], ["t0*w1", "t1*w0"]);
    let rows = involution_invariance_scan(&g, &[InvolutionCandidate::Reciprocal(rat(1))]).unwrap();
    assert_eq!(rows[0].invariant, Some(true));
}

#[test]
fn scaling_rows_report_obstruction() {
    let rows = scaling_family_scan(feps, &rat(2), &[rat(1)]).unwrap();
    assert_eq!(rows[0].obstruction, rat(3));
    assert_eq!(rows[0].invariant_at_eps, Some(false));
    assert!(rows[0].invariant_at_minus_l_sq.is_some());
}
