mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toprec::coeff::{int, rat};
use toprec::graphs::{count, counts_up_to, enumerate, weighted_sum};
use toprec::tr::{self, cells_at};
use toprec::AiryStructure;

#[test]
fn counts_in_low_degree() {
    let expected = [((0, 3), int(1)), ((0, 4), int(3)), ((1, 1), int(1)), ((1, 2), rat(3, 2)), ((2, 1), rat(5, 4))];
    for ((g, n), c) in expected {
        assert_eq!(count(g, n), c, "({g},{n})");
    }
    assert_eq!(count(0, 2), int(0));
    assert!(enumerate(0, 1).is_empty());
}

#[test]
fn counts_match_unit_recursion() {
    let table = tr::compute(&AiryStructure::<toprec::Rational>::unit(), 5).unwrap();
    for ((g, n), c) in counts_up_to(5) {
        assert_eq!(table.value(g, &vec![0; n]), c, "({g},{n})");
    }
}

#[test]
fn graph_invariants() {
    for chi in 1..=4 {
        for (g, n) in cells_at(chi) {
            for graph in enumerate(g, n) {
                graph.check_invariants().unwrap();
                assert_eq!(graph.betti(), g);
            }
        }
    }
}

#[test]
fn weighted_sums_match_recursion() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for round in 0..6 {
        let dim = rng.gen_range(1..=3);
        let s = common::random_valid(&mut rng, dim);
        let table = tr::compute(&s, 3).unwrap();
        for chi in 1..=3 {
            for (g, n) in cells_at(chi) {
                for idx in table.domain(g, n) {
                    assert_eq!(weighted_sum(&s, g, n, &idx).unwrap(), table.value(g, &idx), "round {round}: F_({g},{n}){idx:?}");
                }
            }
        }
    }
}

#[test]
fn weighted_sum_rejects_bad_colors() {
    let s = AiryStructure::<toprec::Rational>::unit();
    assert!(weighted_sum(&s, 0, 3, &[0, 0]).is_err());
    assert!(weighted_sum(&s, 0, 3, &[0, 0, 1]).is_err());
}
