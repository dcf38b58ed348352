//! JSON encodings for forms and parameter matrices. Output is key-sorted and canonical.

use serde_json::{json, Value};

use super::form::{check_dim, Multivector};
use super::index::MultiIndex;
use crate::error::{AlgebraError, Result};
use crate::expr::{Coeff, ParamExpr};

pub fn form_to_json<C: Coeff>(f: &Multivector<C>) -> Value {
    let terms: Vec<Value> = f
        .terms()
        .iter()
        .map(|(m, c)| json!({"idx": m.indices(), "coef": c.to_json()}))
        .collect();
    json!({"dim": f.dim(), "grade": f.grade(), "terms": terms})
}

fn field<'a>(v: &'a Value, k: &str) -> Result<&'a Value> {
    v.get(k).ok_or_else(|| AlgebraError::Parse(format!("missing field {k:?}")))
}

pub fn form_from_json<C: Coeff>(v: &Value) -> Result<Multivector<C>> {
    let dim = field(v, "dim")?.as_u64().ok_or_else(|| AlgebraError::Parse("\"dim\" must be an integer".into()))?
        as usize;
    check_dim(dim)?;
    let grade = field(v, "grade")?
        .as_u64()
        .ok_or_else(|| AlgebraError::Parse("\"grade\" must be an integer".into()))? as usize;
    if grade > dim {
        return Err(AlgebraError::GradeOverflow(grade, 0, dim));
    }
    let terms = field(v, "terms")?.as_array().ok_or_else(|| AlgebraError::Parse("\"terms\" must be a list".into()))?;
    let mut out = Multivector::<C>::zero(dim, grade);
    for t in terms {
        let idx: Vec<usize> = field(t, "idx")?
            .as_array()
            .ok_or_else(|| AlgebraError::Parse("\"idx\" must be a list".into()))?
            .iter()
            .map(|x| x.as_u64().map(|u| u as usize).ok_or_else(|| AlgebraError::Parse("index must be an integer".into())))
            .collect::<Result<_>>()?;
        if idx.len() != grade {
            return Err(AlgebraError::GradeMismatch(idx.len(), grade));
        }
        let m = MultiIndex::new(&idx, dim)?;
        out.add_term(m, &C::from_json(field(t, "coef")?)?);
    }
    Ok(out)
}

/// `{"rows":r,"cols":c,"entries":[[expr,…],…]}`.
pub fn param_matrix_to_json(entries: &[Vec<ParamExpr>]) -> Value {
    let rows = entries.len();
    let cols = entries.first().map_or(0, |r| r.len());
    let e: Vec<Value> = entries.iter().map(|r| Value::Array(r.iter().map(|x| x.to_json()).collect())).collect();
    json!({"rows": rows, "cols": cols, "entries": e})
}

pub fn param_matrix_from_json(v: &Value) -> Result<Vec<Vec<ParamExpr>>> {
    let rows = field(v, "rows")?.as_u64().ok_or_else(|| AlgebraError::Parse("\"rows\" must be an integer".into()))?
        as usize;
    let cols = field(v, "cols")?.as_u64().ok_or_else(|| AlgebraError::Parse("\"cols\" must be an integer".into()))?
        as usize;
    let e = field(v, "entries")?.as_array().ok_or_else(|| AlgebraError::Parse("\"entries\" must be a list".into()))?;
    if e.len() != rows {
        return Err(AlgebraError::Shape(format!("expected {rows} rows, found {}", e.len())));
    }
    e.iter()
        .map(|r| {
            let r = r.as_array().ok_or_else(|| AlgebraError::Parse("row must be a list".into()))?;
            if r.len() != cols {
                return Err(AlgebraError::Shape(format!("expected {cols} columns, found {}", r.len())));
            }
            r.iter().map(ParamExpr::from_json).collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multilinear::form::Form;
    use crate::rational::{rat, Rational};

    #[test]
    fn roundtrip_and_schema() {
        let f = Form::e(7, &[1, 2, 3]).add(&Form::e(7, &[1, 4, 5]).scale(&rat(-2, 3)));
        let v = form_to_json(&f);
        assert_eq!(
            v.to_string(),
            r#"{"dim":7,"grade":3,"terms":[{"coef":"1","idx":[1,2,3]},{"coef":"-2/3","idx":[1,4,5]}]}"#
        );
        assert_eq!(form_from_json::<Rational>(&v).unwrap(), f);
        let bad = serde_json::json!({"dim": 6, "grade": 1, "terms": []});
        assert!(form_from_json::<Rational>(&bad).is_err());
        let bad = serde_json::json!({"dim": 7, "grade": 2, "terms": [{"idx": [2, 1], "coef": "1"}]});
        assert!(form_from_json::<Rational>(&bad).is_err());
    }
}
