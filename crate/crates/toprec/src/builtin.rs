//! Named structures shipped with the crate.

use crate::airy::AiryStructure;
use crate::coeff::{int, rat, PiPoly, Rational};
use crate::frobenius::{airy_from_frobenius, FrobeniusAlgebra};
use crate::givental::{required_order, semisimple_airy, RSeries};
use crate::linalg::Matrix;
use crate::loopspace::{witten_kontsevich, witten_kontsevich_misindexed_d, wk_truncation};
use crate::mirzakhani::{airy_truncation, mirzakhani_airy};
use crate::Error;

/// Valid built-in structures, in the order they are listed by the CLI.
pub const BUILTIN_IDS: &[&str] = &["unit", "tqft-a2", "tqft-diag", "tqft-poly", "wk", "mirzakhani", "hodge", "flat2"];

/// A structure over whichever ring it needs.
#[derive(Clone, Debug, PartialEq)]
pub enum Builtin {
    Rational(AiryStructure<Rational>),
    Pi2(AiryStructure<PiPoly>),
}

impl Builtin {
    pub fn dim(&self) -> usize {
        match self {
            Builtin::Rational(s) => s.dim(),
            Builtin::Pi2(s) => s.dim(),
        }
    }
}

/// The Frobenius algebra behind a `tqft-*` id.
pub fn builtin_algebra(id: &str) -> Option<FrobeniusAlgebra> {
    let alg = match id {
        "tqft-a2" => FrobeniusAlgebra::a_delta(int(2)),
        "tqft-diag" => FrobeniusAlgebra::diagonal(vec![int(1), rat(-1, 3)]),
        "tqft-poly" => FrobeniusAlgebra::truncated_polynomial(vec![int(1), int(2)]),
        _ => return None,
    };
    Some(alg.expect("built-in algebras are valid"))
}

/// Rotation generators of the `flat2` CohFT on `diagonal(1, 2)`.
fn flat2_generators() -> Vec<Matrix<Rational>> {
    vec![
        Matrix::from_rows(vec![vec![rat(1, 2), rat(1, 3)], vec![rat(1, 3), int(-1)]]).unwrap(),
        Matrix::from_rows(vec![vec![int(0), rat(1, 5)], vec![rat(-1, 5), int(0)]]).unwrap(),
    ]
}

/// Maximal grade needed to run the recursion up to `chi_max` on a graded built-in.
pub fn default_truncation(id: &str, chi_max: usize) -> usize {
    match id {
        "mirzakhani" => airy_truncation(chi_max),
        _ => wk_truncation(chi_max),
    }
}

/// Builds the structure named `id`; `max_grade` is ignored by finite ones.
/// `wk-misindexed` is accepted as well: it is the Witten–Kontsevich structure
/// with `D` placed on the wrong index, kept as a regression case.
pub fn builtin(id: &str, max_grade: usize) -> Result<Builtin, Error> {
    if let Some(alg) = builtin_algebra(id) {
        return Ok(Builtin::Rational(airy_from_frobenius(&alg)));
    }
    let s = match id {
        "unit" => Builtin::Rational(AiryStructure::unit()),
        "wk" => Builtin::Rational(witten_kontsevich(max_grade)),
        "wk-misindexed" => Builtin::Rational(witten_kontsevich_misindexed_d(max_grade)),
        "mirzakhani" => Builtin::Pi2(mirzakhani_airy(max_grade)),
        "hodge" => {
            let r = RSeries::hodge(required_order(max_grade));
            Builtin::Rational(semisimple_airy(&[int(1)], &r, max_grade)?)
        }
        "flat2" => {
            let deltas = vec![int(1), int(2)];
            let alg = FrobeniusAlgebra::diagonal(deltas.clone())?;
            let r = RSeries::exp_of(alg, &flat2_generators(), required_order(max_grade))?;
            Builtin::Rational(semisimple_airy(&deltas, &r, max_grade)?)
        }
        other => {
            return Err(Error::invalid(format!(
                "unknown structure {other:?}; expected one of {}",
                BUILTIN_IDS.join(", ")
            )))
        }
    };
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_id_builds() {
        for id in BUILTIN_IDS {
            let s = builtin(id, 2).unwrap();
            assert!(s.dim() > 0, "{id}");
        }
        assert!(builtin("wk-misindexed", 2).is_ok());
        assert!(builtin("nope", 2).is_err());
    }

    #[test]
    fn truncations() {
        assert_eq!(default_truncation("wk", 1), 1);
        assert!(default_truncation("mirzakhani", 1) >= 1);
    }
}
