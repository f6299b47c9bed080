#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use toprec::airy::{change_basis, direct_sum, quadratic_shift, structure_from_json, structure_to_json};
use toprec::coeff::int;
use toprec::linalg::Matrix;
use toprec::loopspace::witten_kontsevich;
use toprec::{AiryStructure, IndexSet, Rational};

/// The grade ≤ 1 corner of Witten–Kontsevich read as a finite structure:
/// `[L₀, L₁]` is a non-zero multiple of `L₀`.
pub fn borel() -> AiryStructure<Rational> {
    let wk = witten_kontsevich::<Rational>(1);
    let mut v = structure_to_json(&wk);
    v["index_set"] = serde_json::json!({ "finite": 2 });
    v.as_object_mut().unwrap().remove("sparsity");
    let s: AiryStructure<Rational> = structure_from_json(&v).unwrap();
    assert_eq!(s.index_set(), IndexSet::Finite { dim: 2 });
    s
}

/// Dim-2 structure whose structure constants have no zero column, so that a
/// change of any single entry of `D` shows up in the relations.
pub fn generic_borel() -> AiryStructure<Rational> {
    let phi = Matrix::from_rows(vec![vec![int(1), int(1)], vec![int(-1), int(2)]]).unwrap();
    let u = Matrix::from_rows(vec![vec![Rational::new(1.into(), 2.into()), int(1)], vec![int(1), int(-1)]]).unwrap();
    quadratic_shift(&change_basis(&borel(), &phi).unwrap(), &u).unwrap()
}

fn random_symmetric(rng: &mut ChaCha8Rng, dim: usize) -> Matrix<Rational> {
    let mut u = Matrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let v = Rational::new(rng.gen_range(-3..=3).into(), rng.gen_range(1..4).into());
            u[(i, j)] = v.clone();
            u[(j, i)] = v;
        }
    }
    u
}

/// Random valid finite structure of the given dimension (1 to 3): unit and
/// Borel blocks, rescaled, in a random basis, then quadratically shifted.
pub fn random_valid(rng: &mut ChaCha8Rng, dim: usize) -> AiryStructure<Rational> {
    loop {
        let mut blocks = Vec::new();
        let mut left = dim;
        while left > 0 {
            if left >= 2 && rng.gen_bool(0.5) {
                blocks.push(borel());
                left -= 2;
            } else {
                blocks.push(AiryStructure::unit().scaled(&int(rng.gen_range(1..4))));
                left -= 1;
            }
        }
        let base = direct_sum(&blocks).unwrap();
        let phi = Matrix::from_fn(dim, dim, |_, _| int(rng.gen_range(-2..=2)));
        let Ok(s) = change_basis(&base, &phi) else { continue };
        return quadratic_shift(&s, &random_symmetric(rng, dim)).unwrap();
    }
}
