use toprec::coeff::{int, rat, PiPoly};
use toprec::mirzakhani::{quadrature_check, volume, volumes_via_airy, VolumePolynomial};
use toprec::tr::cells_at;
use toprec::Error;

fn pi(d: u32, r: toprec::Rational) -> PiPoly {
    PiPoly::monomial(d, r)
}

#[test]
fn known_volumes() {
    assert_eq!(volume(0, 3).coeff(&[0, 0, 0]), PiPoly::constant(int(1)));
    let v11 = volume(1, 1);
    assert_eq!(v11.coeff(&[0]), pi(1, rat(1, 12)));
    assert_eq!(v11.coeff(&[1]), PiPoly::constant(rat(1, 48)));
    let v04 = volume(0, 4);
    assert_eq!(v04.coeff(&[0, 0, 0, 0]), pi(1, int(2)));
    assert_eq!(v04.coeff(&[0, 1, 0, 0]), PiPoly::constant(rat(1, 2)));
    assert_eq!(volume(2, 1).coeff(&[0]), pi(4, rat(29, 192)));
    assert_eq!(volume(1, 2).coeff(&[0, 0]), pi(2, rat(1, 4)));
}

#[test]
fn pipelines_agree_coefficientwise() {
    let via_airy = volumes_via_airy(4).unwrap();
    let direct: Vec<VolumePolynomial> = (1..=4).flat_map(cells_at).map(|(g, n)| volume(g, n)).collect();
    assert_eq!(via_airy.len(), direct.len());
    for v in &direct {
        let w = via_airy.iter().find(|w| (w.g, w.n) == (v.g, v.n)).unwrap();
        assert_eq!(v, w, "V_({},{})", v.g, v.n);
        assert!(v.is_symmetric() && v.has_expected_grading());
    }
}

#[test]
fn kernel_quadrature() {
    for k in 0..=4 {
        for x in [0.5, 1.0, 2.0] {
            let q = quadrature_check(k, x).unwrap();
            assert!(q.relative_error < 1e-8, "k = {k}, x = {x}: {q:?}");
        }
    }
    assert!(matches!(quadrature_check(7, 1.0), Err(Error::InvalidArgument(_))));
    assert!(matches!(quadrature_check(1, -1.0), Err(Error::InvalidArgument(_))));
}

#[test]
fn exports() {
    let v = volume(1, 1);
    assert_eq!(v.to_latex(), "\\frac{1}{48} L_{1}^{2} + \\frac{1}{12}\\pi^{2}");
    let json = v.to_json();
    assert_eq!(json["g"], 1);
    assert_eq!(json["terms"].as_array().unwrap().len(), 2);
    assert!(v.to_csv().starts_with("exponents,value_rational,value_pi2_degree_1\n"));
    let l = 1.5_f64;
    let expected = std::f64::consts::PI.powi(2) / 12.0 + l * l / 48.0;
    assert!((v.eval_f64(&[l]) - expected).abs() < 1e-12);
}
