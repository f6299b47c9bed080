use toprec::coeff::{int, rat};
use toprec::frobenius::{airy_from_frobenius, decomposition_catalog, tqft_amplitude, verify_cc, FrobeniusAlgebra};
use toprec::linalg::Matrix;
use toprec::tr::{self, cells_at};
use toprec::Rational;

fn algebras() -> Vec<FrobeniusAlgebra> {
    let p = Matrix::from_rows(vec![vec![int(2), int(1)], vec![int(1), int(1)]]).unwrap();
    vec![
        FrobeniusAlgebra::a_delta(rat(-2, 5)).unwrap(),
        FrobeniusAlgebra::diagonal(vec![int(3), rat(1, 2)]).unwrap().change_basis(&p).unwrap(),
        FrobeniusAlgebra::truncated_polynomial(vec![int(1), int(-1)]).unwrap(),
    ]
}

#[test]
fn a_delta_amplitudes() {
    for delta in [int(2), rat(1, 3), int(-1)] {
        let f = FrobeniusAlgebra::a_delta(delta.clone()).unwrap();
        let table = tr::compute(&airy_from_frobenius(&f), 4).unwrap();
        for chi in 1..=4 {
            for (g, n) in cells_at(chi) {
                let weight: Rational = (0..chi).map(|_| delta.clone()).product();
                assert_eq!(tqft_amplitude(&f, g, n).unwrap().get(&vec![0; n]), &weight);
                let expected = weight * toprec::graphs::count(g, n);
                assert_eq!(table.value(g, &vec![0; n]), expected, "({g},{n})");
            }
        }
    }
}

#[test]
fn pants_decompositions_agree() {
    for f in algebras() {
        for chi in 1..=3 {
            for (g, n) in cells_at(chi) {
                let reference = tqft_amplitude(&f, g, n).unwrap();
                for d in decomposition_catalog(g, n) {
                    assert_eq!(d.contract(&f), reference, "({g},{n})");
                }
            }
        }
    }
}

#[test]
fn recursion_counts_graphs() {
    for f in algebras() {
        for chi in 1..=4 {
            for (g, n) in cells_at(chi) {
                let report = verify_cc(&f, g, n).unwrap();
                assert!(report.passed(), "({g},{n}): {:?}", report.failures);
            }
        }
    }
}

#[test]
fn json_round_trip() {
    for f in algebras() {
        assert_eq!(FrobeniusAlgebra::from_json(&f.to_json()).unwrap(), f);
    }
    let bad = serde_json::json!({"dim": 1, "mu": [[0, 0, 0, 1]], "b": [[0, 0, 0]], "unit": [1]});
    assert!(FrobeniusAlgebra::from_json(&bad).is_err());
}
