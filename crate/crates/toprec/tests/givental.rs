use std::collections::BTreeMap;

use toprec::airy::direct_sum;
use toprec::coeff::{int, rat};
use toprec::frobenius::FrobeniusAlgebra;
use toprec::givental::{oracle_amplitudes, required_order, scale_wk, semisimple_airy, CohftSpec, RSeries};
use toprec::linalg::Matrix;
use toprec::{tr, Error, Rational};

fn scalar(x: Rational) -> Matrix<Rational> {
    Matrix::from_rows(vec![vec![x]]).unwrap()
}

#[test]
fn identity_gives_direct_sum() {
    let deltas = vec![int(1), rat(3, 2), int(-2)];
    let alg = FrobeniusAlgebra::diagonal(deltas.clone()).unwrap();
    let s = semisimple_airy(&deltas, &RSeries::identity(alg), 3).unwrap();
    let parts: Vec<_> = deltas.iter().map(|d| scale_wk(d, 3).unwrap()).collect();
    let direct = direct_sum(&parts).unwrap();
    assert_eq!(tr::compute(&s, 3).unwrap().entries(), tr::compute(&direct, 3).unwrap().entries());
}

#[test]
fn rank_one_rotation_matches_operator_oracle() {
    let alg = FrobeniusAlgebra::a_delta(int(1)).unwrap();
    let gens = vec![scalar(rat(-1, 2)), scalar(int(0)), scalar(rat(2, 7))];
    let r = RSeries::exp_of(alg, &gens, required_order(3)).unwrap();
    let s = semisimple_airy(&[int(1)], &r, 3).unwrap();
    assert!(s.check_relations().unwrap().passed());
    let table = tr::compute(&s, 3).unwrap();
    let mine: BTreeMap<_, _> = table.entries().iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    assert_eq!(mine, oracle_amplitudes(&[int(1)], &r, 3, 3).unwrap());
}

#[test]
fn scaled_rank_one_matches_oracle() {
    let delta = rat(2, 3);
    let alg = FrobeniusAlgebra::a_delta(delta.clone()).unwrap();
    let r = RSeries::exp_of(alg, &[scalar(rat(1, 4))], required_order(2)).unwrap();
    let s = semisimple_airy(std::slice::from_ref(&delta), &r, 2).unwrap();
    let table = tr::compute(&s, 2).unwrap();
    let mine: BTreeMap<_, _> = table.entries().iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    assert_eq!(mine, oracle_amplitudes(&[delta], &r, 2, 2).unwrap());
}

#[test]
fn non_symplectic_input_is_rejected() {
    let alg = FrobeniusAlgebra::a_delta(int(1)).unwrap();
    let err = RSeries::polynomial(alg, vec![scalar(int(1)), scalar(int(1))]).unwrap_err();
    assert!(matches!(err, Error::Symplectic { order: 2, .. }), "{err}");
}

#[test]
fn spec_file() {
    let v = serde_json::json!({"deltas": [1], "log_r": [["1/3"], [0], ["-1/2"]]});
    assert!(CohftSpec::from_json(&v).is_err());
    let v = serde_json::json!({"deltas": [1], "log_r": [[["1/3"]], [[0]], [["-1/2"]]]});
    let spec = CohftSpec::from_json(&v).unwrap();
    let s = spec.airy(2).unwrap();
    assert!(s.check_relations().unwrap().passed());
    assert!(CohftSpec::from_json(&serde_json::json!({"r": []})).is_err());
}
