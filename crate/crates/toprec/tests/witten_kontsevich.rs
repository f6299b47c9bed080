use toprec::coeff::{int, rat};
use toprec::loopspace::{
    build_theta_airy, check_witt_algebra, genus0_closed, psi_intersection, psi_table, verify_string_dilaton,
    witt_structure_constant, witten_kontsevich, ThetaSeries,
};
use toprec::tr::{self, is_stable};
use toprec::Rational;

fn multi_indices(n: usize, total: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    (0..=total)
        .flat_map(|k| {
            multi_indices(n - 1, total - k).into_iter().map(move |mut rest| {
                rest.insert(0, k);
                rest
            })
        })
        .collect()
}

#[test]
fn low_intersection_numbers() {
    assert_eq!(psi_intersection(0, &[0, 0, 0]).unwrap(), int(1));
    assert_eq!(psi_intersection(1, &[1]).unwrap(), rat(1, 24));
    assert_eq!(psi_intersection(2, &[4]).unwrap(), rat(1, 1152));
    assert_eq!(psi_intersection(1, &[1, 1]).unwrap(), rat(1, 24));
    assert_eq!(psi_intersection(2, &[2, 3]).unwrap(), rat(29, 5760));
    assert_eq!(psi_intersection(3, &[7]).unwrap(), rat(1, 82944));
    assert_eq!(psi_intersection(1, &[0]).unwrap(), int(0));
    assert!(psi_intersection(0, &[0, 0]).is_err());
}

#[test]
fn genus_zero_closed_form() {
    for n in 3..=6 {
        for ks in multi_indices(n, n - 3) {
            assert_eq!(psi_intersection(0, &ks).unwrap(), genus0_closed(&ks), "{ks:?}");
        }
    }
}

#[test]
fn selection_rule_and_equations() {
    let table = psi_table(5).unwrap();
    for ((g, idx), v) in table.entries() {
        let n = idx.len();
        assert!(is_stable(*g, n));
        assert_eq!(idx.iter().sum::<usize>(), 3 * g + n - 3, "F_({g},{n}){idx:?} = {v}");
    }
    assert!(verify_string_dilaton(&table).is_empty());
    assert!(table.verify_symmetry().passed());
    let residual = tr::verify_annihilation(table.structure(), &table);
    assert!(residual.passed());
}

#[test]
fn witt_commutation() {
    for n in [3, 8] {
        assert!(check_witt_algebra(&witten_kontsevich::<Rational>(n)));
    }
    let theta = ThetaSeries::from_coefficients(vec![int(1), rat(2, 3), int(-1), rat(1, 5)]);
    let s = build_theta_airy(&theta, 8).unwrap();
    for i in 0..=8 {
        for j in 0..=8 {
            for k in 0..=8 {
                assert_eq!(s.structure_constant(i, j, k), witt_structure_constant(&theta, i, j, k));
            }
        }
    }
}
