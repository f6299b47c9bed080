use serde_json::{json, Map, Value};

use super::{AiryStructure, IndexSet, Sparsity, Tensor3, Window};
use crate::coeff::{Ring, Scalar};
use crate::Error;

fn index_set_to_json(set: IndexSet) -> Value {
    match set {
        IndexSet::Finite { dim } => json!({ "finite": dim }),
        IndexSet::Graded { max_grade, block } => json!({ "graded": { "max_grade": max_grade, "block": block } }),
    }
}

fn index_set_from_json(v: &Value) -> Result<IndexSet, Error> {
    if let Some(d) = v.as_u64() {
        return Ok(IndexSet::Finite { dim: d as usize });
    }
    if let Some(d) = v.get("finite").and_then(Value::as_u64) {
        return Ok(IndexSet::Finite { dim: d as usize });
    }
    if let Some(g) = v.get("graded") {
        let max_grade = g.get("max_grade").and_then(Value::as_u64);
        let block = g.get("block").and_then(Value::as_u64).unwrap_or(1);
        if let Some(max_grade) = max_grade {
            return Ok(IndexSet::Graded { max_grade: max_grade as usize, block: block as usize });
        }
    }
    Err(Error::parse("index_set must be {\"finite\": d} or {\"graded\": {\"max_grade\": N, \"block\": b}}"))
}

fn window_to_json(w: &Window) -> Value {
    json!([w.lo, w.hi])
}

fn window_from_json(v: &Value) -> Result<Window, Error> {
    let arr = v.as_array().filter(|a| a.len() == 2).ok_or_else(|| Error::parse("window must be [lo, hi]"))?;
    let end = |x: &Value| -> Result<Option<i64>, Error> {
        if x.is_null() {
            Ok(None)
        } else {
            x.as_i64().map(Some).ok_or_else(|| Error::parse("window ends must be integers or null"))
        }
    };
    Ok(Window { lo: end(&arr[0])?, hi: end(&arr[1])? })
}

fn tensor_to_json<S: Scalar>(t: &Tensor3<S>, symmetric_tail: bool) -> Value {
    // Symmetric tensors are written once per unordered (j, k) pair when possible.
    let write_half = symmetric_tail && t.iter().all(|((i, j, k), v)| t.get(&(*i, *k, *j)) == Some(v));
    Value::Array(
        t.iter()
            .filter(|((_, j, k), _)| !write_half || j <= k)
            .map(|((i, j, k), v)| json!([i, j, k, v.to_json()]))
            .collect(),
    )
}

fn entry_indices(item: &Value, arity: usize, n: usize) -> Result<(Vec<usize>, Value), Error> {
    let arr = item
        .as_array()
        .filter(|a| a.len() == arity + 1)
        .ok_or_else(|| Error::parse(format!("tensor entry must have {arity} indices and a value")))?;
    let mut idx = Vec::with_capacity(arity);
    for x in &arr[..arity] {
        let i = x.as_u64().ok_or_else(|| Error::parse("indices must be non-negative integers"))? as usize;
        if i >= n {
            return Err(Error::parse(format!("index {i} outside an index set of size {n}")));
        }
        idx.push(i);
    }
    Ok((idx, arr[arity].clone()))
}

pub fn structure_to_json<S: Scalar>(s: &AiryStructure<S>) -> Value {
    let mut m = Map::new();
    m.insert("index_set".into(), index_set_to_json(s.index_set()));
    m.insert("ring".into(), json!(S::RING.name()));
    m.insert("A".into(), tensor_to_json(s.a_entries(), true));
    m.insert("B".into(), tensor_to_json(s.b_entries(), false));
    m.insert("C".into(), tensor_to_json(s.c_entries(), true));
    m.insert("D".into(), Value::Array(s.d_entries().iter().map(|(i, v)| json!([i, v.to_json()])).collect()));
    if let Some(sp) = s.sparsity() {
        m.insert(
            "sparsity".into(),
            json!({
                "A": window_to_json(&sp.a),
                "B": window_to_json(&sp.b),
                "C": window_to_json(&sp.c),
                "D": window_to_json(&sp.d),
            }),
        );
    }
    Value::Object(m)
}

/// Reads a structure. Entries of `A` and `C` given for one ordering of the two
/// lower slots are mirrored unless the file lists the other ordering too.
pub fn structure_from_json<S: Scalar>(v: &Value) -> Result<AiryStructure<S>, Error> {
    let obj = v.as_object().ok_or_else(|| Error::parse("structure must be a JSON object"))?;
    if let Some(ring) = obj.get("ring") {
        let ring = Ring::parse(ring.as_str().ok_or_else(|| Error::parse("ring must be a string"))?)?;
        if ring != S::RING && !(ring == Ring::Rational && S::RING == Ring::Pi2) {
            return Err(Error::invalid(format!("structure over {} cannot be read as {}", ring.name(), S::RING.name())));
        }
    }
    let set = index_set_from_json(obj.get("index_set").ok_or_else(|| Error::parse("missing index_set"))?)?;
    let n = set.len();
    let mut s = AiryStructure::zero(set);
    let list = |key: &str| -> Result<Vec<Value>, Error> {
        match obj.get(key) {
            None => Ok(Vec::new()),
            Some(Value::Array(a)) => Ok(a.clone()),
            Some(_) => Err(Error::parse(format!("{key} must be an array"))),
        }
    };
    for (key, is_a) in [("A", true), ("C", false)] {
        let items = list(key)?;
        let mut parsed = Vec::new();
        for item in &items {
            let (idx, raw) = entry_indices(item, 3, n)?;
            parsed.push(((idx[0], idx[1], idx[2]), S::from_json(&raw)?));
        }
        let present: std::collections::BTreeSet<_> = parsed.iter().map(|(k, _)| *k).collect();
        for ((i, j, k), value) in parsed {
            let mirrored = present.contains(&(i, k, j));
            match (is_a, mirrored) {
                (true, true) => s.set_a_raw(i, j, k, value),
                (true, false) => s.set_a(i, j, k, value),
                (false, true) => s.set_c_raw(i, j, k, value),
                (false, false) => s.set_c(i, j, k, value),
            }
        }
    }
    for item in list("B")? {
        let (idx, raw) = entry_indices(&item, 3, n)?;
        s.set_b(idx[0], idx[1], idx[2], S::from_json(&raw)?);
    }
    for item in list("D")? {
        let (idx, raw) = entry_indices(&item, 1, n)?;
        s.set_d(idx[0], S::from_json(&raw)?);
    }
    if let Some(sp) = obj.get("sparsity") {
        let w = |k: &str| -> Result<Window, Error> {
            sp.get(k).map_or(Ok(Window::UNBOUNDED), window_from_json)
        };
        s.set_sparsity(Some(Sparsity { a: w("A")?, b: w("B")?, c: w("C")?, d: w("D")? }));
    }
    s.check_sparsity()?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{int, PiPoly, Rational};
    use crate::loopspace::witten_kontsevich;

    #[test]
    fn round_trip_unit() {
        let s = AiryStructure::<Rational>::unit();
        let v = structure_to_json(&s);
        assert_eq!(
            v.to_string(),
            r#"{"A":[[0,0,0,"1"]],"B":[[0,0,0,"1"]],"C":[[0,0,0,"1"]],"D":[[0,"1"]],"index_set":{"finite":1},"ring":"rational"}"#
        );
        assert_eq!(structure_from_json::<Rational>(&v).unwrap(), s);
    }

    #[test]
    fn round_trip_graded() {
        let s = witten_kontsevich::<Rational>(4);
        let back = structure_from_json::<Rational>(&structure_to_json(&s)).unwrap();
        assert_eq!(back, s);
        let lifted = structure_from_json::<PiPoly>(&structure_to_json(&s)).unwrap();
        assert_eq!(lifted.convert::<Rational>().unwrap(), s);
    }

    #[test]
    fn mirrors_half_given_symmetric_tensors() {
        let v: Value = serde_json::from_str(
            r#"{"index_set":{"finite":2},"A":[[0,0,1,"2"]],"C":[[1,0,1,"1/3"],[1,1,0,"1/2"]]}"#,
        )
        .unwrap();
        let s = structure_from_json::<Rational>(&v).unwrap();
        assert_eq!(s.a(0, 1, 0), Some(&int(2)));
        assert_ne!(s.c(1, 0, 1), s.c(1, 1, 0));
    }

    #[test]
    fn malformed_input() {
        for text in [
            r#"[1,2]"#,
            r#"{"index_set":{"finite":1},"A":[[0,0,"1"]]}"#,
            r#"{"index_set":{"finite":1},"A":[[0,0,3,"1"]]}"#,
            r#"{"index_set":{"finite":1},"D":[[0,"1/0"]]}"#,
            r#"{"index_set":{"finite":1},"ring":"pi2"}"#,
            r#"{"A":[]}"#,
        ] {
            let v: Value = serde_json::from_str(text).unwrap();
            assert!(structure_from_json::<Rational>(&v).is_err(), "{text}");
        }
    }
}
