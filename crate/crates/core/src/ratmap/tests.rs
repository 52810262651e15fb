use alloc::collections::BTreeMap;
use alloc::vec;

use super::*;
use crate::number::{rat, ratio};
use crate::poly::parse_expression;

fn p2(f: [&str; 3]) -> RationalSelfMap {
    RationalSelfMap::from_expressions(Surface::P2, &[&f], &BTreeMap::new()).unwrap()
}

fn pp(a: [&str; 2], b: [&str; 2]) -> RationalSelfMap {
    RationalSelfMap::from_expressions(Surface::P1xP1, &[&a, &b], &BTreeMap::new()).unwrap()
}

fn ex41() -> RationalSelfMap {
    p2(["x*z + y^2", "y*z + x^2", "x^2 + y^2"])
}

fn ex44() -> RationalSelfMap {
    pp(["t0*t1*w0*w1", "t0^2*w1^2 - t1^2*w0^2"], ["t0*w1*(t0*w0 - t1*w1)", "t0^2*w1^2 - (t0*w0 - t1*w1)^2"])
}

fn feps(eps: Rational) -> RationalSelfMap {
    let mut params = BTreeMap::new();
    params.insert("eps".into(), eps);
    RationalSelfMap::from_expressions(
        Surface::P1xP1,
        &[
            &["t0*t1*w0*w1", "t0^2*w1^2 - eps*t1^2*w0^2"],
            &["t0*w1*(t0*w0 - eps*t1*w1)", "t0^2*w1^2 - (t0*w0 - t1*w1)^2"],
        ],
        &params,
    )
    .unwrap()
}

fn power(d: u32) -> RationalSelfMap {
    let a = alloc::format!("t0^{}", d);
    let b = alloc::format!("t1^{}", d);
    pp([&a, &b], ["w0", "w1"])
}

#[test]
fn normalize_is_idempotent_on_normalized_input() {
    let f = ex41();
    let again = RationalSelfMap::normalize(Surface::P2, f.factors().to_vec()).unwrap();
    assert_eq!(again, f);
    assert_eq!(f.degree(), Some(2));
    assert_eq!(f.cancelled_degrees(), &[0]);
}

#[test]
fn normalize_cancels_common_factor() {
    let f = p2(["x*(x + y)", "y*(x + y)", "z*(x + y)"]);
    assert_eq!(f, RationalSelfMap::identity(Surface::P2));
    assert_eq!(f.cancelled_degrees(), &[1]);
    let g = p2(["-2*x^2", "-2*x*y", "-2*x*z"]);
    assert_eq!(g, RationalSelfMap::identity(Surface::P2));
}

#[test]
fn normalize_scaling_and_sign() {
    let f = p2(["-1/2*x^2", "3/4*y^2", "z^2"]);
    assert_eq!(f.factors()[0][0].to_string(), "2*x^2");
    assert_eq!(f.factors()[0][2].to_string(), "-4*z^2");
    let g = p2(["1/2*x^2", "-3/4*y^2", "-z^2"]);
    assert_eq!(g, f);
}

#[test]
fn normalize_rejects_bad_input() {
    let none = BTreeMap::new();
    let r = RationalSelfMap::from_expressions(Surface::P2, &[&["x^2 + y", "y^2", "z^2"]], &none);
    assert!(matches!(r, Err(Error::Grading { index: 0, .. })));
    let r = RationalSelfMap::from_expressions(Surface::P2, &[&["x^2", "y^3", "z^2"]], &none);
    assert!(matches!(r, Err(Error::Grading { index: 1, .. })));
    let r = RationalSelfMap::from_expressions(Surface::P2, &[&["0", "0", "0"]], &none);
    assert_eq!(r, Err(Error::ZeroFactor(0)));
    let r = RationalSelfMap::from_expressions(Surface::P1xP1, &[&["t0", "t1"], &["w0*t0", "w1^2"]], &none);
    assert!(matches!(r, Err(Error::Grading { index: 3, .. })));
    let r = RationalSelfMap::from_expressions(Surface::P1xP1, &[&["t0", "t1"]], &none);
    assert!(r.is_err());
}

#[test]
fn compose_with_identity() {
    let f = ex41();
    let id = RationalSelfMap::identity(Surface::P2);
    assert_eq!(f.compose(&id).unwrap(), f);
    assert_eq!(id.compose(&f).unwrap(), f);
    assert_eq!(f.compose(&RationalSelfMap::identity(Surface::P1xP1)), Err(Error::SurfaceMismatch));
}

#[test]
fn ex41_square_matches_symbolic_oracle() {
    // expanded independently with a computer algebra system; gcd is 1
    let expected = p2([
        "x^4 + x^3*z + x^2*y^2 + 2*x^2*y*z + x*y^2*z + y^4 + y^2*z^2",
        "x^4 + x^2*y^2 + x^2*y*z + x^2*z^2 + 2*x*y^2*z + y^4 + y^3*z",
        "x^4 + 2*x^2*y*z + x^2*z^2 + 2*x*y^2*z + y^4 + y^2*z^2",
    ]);
    let f = ex41();
    assert_eq!(f.compose(&f).unwrap(), expected);
}

#[test]
fn ex41_iterates_double() {
    let it = ex41().iterate(5, DEFAULT_DEGREE_BUDGET).unwrap();
    let d: Vec<u32> = it.iter().map(|g| g.degree().unwrap()).collect();
    assert_eq!(d, vec![2, 4, 8, 16, 32]);
}

#[test]
fn power_map_iterates() {
    let it = power(2).iterate(3, DEFAULT_DEGREE_BUDGET).unwrap();
    let exps: Vec<u32> = it.iter().map(|g| g.factors()[0][0].total_degree().unwrap()).collect();
    assert_eq!(exps, vec![2, 4, 8]);
    assert_eq!(it[2].pullback_matrix(), vec![vec![8, 0], vec![0, 1]]);
}

#[test]
fn budget_stops_iteration() {
    let (done, err) = ex41().iterate_partial(10, 20);
    assert_eq!(done.len(), 4);
    assert_eq!(err, Some(Error::BudgetExceeded { completed: 4, budget: 20 }));
    assert!(ex41().iterate(0, 100).is_err());
}

#[test]
fn pullback_matrices() {
    assert_eq!(power(3).pullback_matrix(), vec![vec![3, 0], vec![0, 1]]);
    assert_eq!(ex44().pullback_matrix(), vec![vec![2, 2], vec![2, 2]]);
    let ex42 = p2(["x^2*y + y^2*z", "x*y*z", "x^2*y + x*y^2 + 2*y^2*z + z^2*(x + y)"]);
    assert_eq!(ex42.pullback_matrix(), vec![vec![3]]);
}

#[test]
fn pullback_of_composite_is_product() {
    let f = ex44();
    let g = power(2);
    let fg = f.compose(&g).unwrap();
    // M(f∘g) = M(g) M(f) when nothing cancels
    assert_eq!(fg.pullback_matrix(), vec![vec![4, 4], vec![2, 2]]);
}

#[test]
fn eps_one_is_ex44() {
    assert_eq!(feps(rat(1)), ex44());
}

#[test]
fn base_scheme_lengths() {
    for e in [rat(1), rat(2), rat(3), ratio(1, 2)] {
        assert_eq!(feps(e).base_scheme_length_p1xp1().unwrap(), 16);
    }
    assert_eq!(power(4).base_scheme_length_p1xp1().unwrap(), 0);
    let bilinear = pp(["t0*w0 + 2*t1*w1", "t0*w1 - t1*w0 + 3*t1*w1"], ["t0", "t1"]);
    assert_eq!(bilinear.base_scheme_length_p1xp1().unwrap(), 2);
    assert!(ex41().base_scheme_length_p1xp1().is_err());
}

#[test]
fn feps_zero_degenerates() {
    let f = feps(rat(0));
    assert!(f.cancelled_degrees().iter().any(|&c| c > 0));
}

#[test]
fn base_points_finite_examples() {
    assert!(ex41().base_points_finite().unwrap());
    let g = p2(["x^2", "x*y", "x*z"]);
    assert_eq!(g, RationalSelfMap::identity(Surface::P2));
    assert!(g.base_points_finite().unwrap());
    assert!(feps(rat(2)).base_points_finite().unwrap());
}

#[test]
fn regularity() {
    assert!(power(2).is_regular().unwrap());
    assert!(!ex41().is_regular().unwrap());
    assert!(!ex44().is_regular().unwrap());
    assert!(p2(["x^2", "y^2", "z^2"]).is_regular().unwrap());
    assert!(p2(["x^2 + y*z", "y^2", "z^2"]).is_regular().unwrap());
    // common zero (1:0:0) on the line at infinity only
    assert!(!p2(["y*z", "y^2", "z^2"]).is_regular().unwrap());
    assert!(!p2(["x*y", "y^2 + x*z", "z^2"]).is_regular().unwrap());
    // common zero (0:0:1) in the affine chart
    assert!(!p2(["x^2", "y^2", "x*z + y*z"]).is_regular().unwrap());
    assert!(RationalSelfMap::identity(Surface::P1xP1).is_regular().unwrap());
    // base point at t = (1:0), w = (1:0)
    assert!(!pp(["t0*w1", "t1*w0"], ["t0", "t1"]).is_regular().unwrap());
}

#[test]
fn equality_is_projective() {
    let f = feps(rat(2));
    let scaled: Vec<Vec<SparsePoly>> = f
        .factors()
        .iter()
        .enumerate()
        .map(|(i, c)| c.iter().map(|p| p.scale(&rat(if i == 0 { 3 } else { 1 }))).collect())
        .collect();
    let raw =
        RationalSelfMap { surface: Surface::P1xP1, factors: scaled, degrees: f.degrees.clone(), cancelled: vec![0, 0] };
    assert!(f.maps_equal(&raw).unwrap());
    assert!(f.maps_equal(&f).unwrap());
    let other = feps(rat(3));
    assert!(!f.maps_equal(&other).unwrap());
}

#[test]
fn involution_squares_to_identity() {
    let f = feps(rat(2));
    for iota in [
        MoebiusInvolution::swap(),
        MoebiusInvolution::reciprocal(rat(2)).unwrap(),
        MoebiusInvolution::scaling(ratio(-1, 3)).unwrap(),
    ] {
        let twice = f.twist_by_involution(&iota).unwrap().twist_by_involution(&iota).unwrap();
        assert!(twice.maps_equal(&f).unwrap());
    }
    assert_eq!(MoebiusInvolution::reciprocal(rat(0)), Err(Error::SingularMatrix));
}

#[test]
fn swap_exchanges_blocks() {
    let g = power(3).twist_by_involution(&MoebiusInvolution::swap()).unwrap();
    let expected = pp(["w0^3", "w1^3"], ["t0", "t1"]);
    assert_eq!(g, expected);
    assert!(!power(3).maps_equal(&g).unwrap());
}

#[test]
fn twist_agrees_with_pointwise_evaluation() {
    let f = feps(rat(2));
    let iota = MoebiusInvolution::reciprocal(rat(1)).unwrap();
    let twisted = f.twist_by_involution(&iota).unwrap();
    let point = [rat(2), rat(3), rat(5), rat(7)];
    // ι(t, w) = (A w, A^-1 t) with A = [[0,1],[1,0]]
    let moved = [rat(7), rat(5), rat(3), rat(2)];
    let a = twisted.apply(&point).unwrap().unwrap();
    let b = f.apply(&moved).unwrap().unwrap();
    assert!(same_point(Surface::P1xP1, &a, &b));
    assert!(!twisted.maps_equal(&f).unwrap());
}

#[test]
fn parse_example_component() {
    let vars = Surface::P2.variables();
    let f0 = parse_expression("x*z + y^2", &vars, &BTreeMap::new()).unwrap();
    assert_eq!(ex41().factors()[0][0], f0);
}
