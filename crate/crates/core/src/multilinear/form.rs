//! Homogeneous alternating forms with coefficients in a [`Coeff`] ring.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::index::{perm_sign, MultiIndex};
use crate::error::{AlgebraError, Result};
use crate::expr::{Coeff, ParamExpr};
use crate::rational::{format_rational, int, to_f64, Rational};

/// A `grade`-form on ℝ^`dim` (dim 7 or 8), basis `e^I` for increasing `I`.
#[derive(Clone, PartialEq)]
pub struct Multivector<C: Coeff = Rational> {
    dim: usize,
    grade: usize,
    terms: BTreeMap<MultiIndex, C>,
}

pub type Form = Multivector<Rational>;
pub type ParamForm = Multivector<ParamExpr>;

pub fn check_dim(dim: usize) -> Result<()> {
    if dim == 7 || dim == 8 {
        Ok(())
    } else {
        Err(AlgebraError::UnsupportedDim(dim))
    }
}

impl<C: Coeff> Multivector<C> {
    pub fn zero(dim: usize, grade: usize) -> Self {
        assert!(grade <= dim, "grade {grade} exceeds dimension {dim}");
        Multivector { dim, grade, terms: BTreeMap::new() }
    }

    /// `c·e^{i1…ik}` for distinct (not necessarily sorted) 1-based indices.
    pub fn monomial(dim: usize, indices: &[usize], c: C) -> Self {
        let mut out = Self::zero(dim, indices.len());
        let s = perm_sign(indices);
        assert!(s != 0, "repeated index in {indices:?}");
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        let mi = MultiIndex::new(&sorted, dim).expect("index in range");
        out.add_term(mi, &c.scale(&int(s as i64)));
        out
    }

    pub fn from_terms(dim: usize, grade: usize, terms: impl IntoIterator<Item = (MultiIndex, C)>) -> Self {
        let mut out = Self::zero(dim, grade);
        for (m, c) in terms {
            assert_eq!(m.len(), grade, "multi-index length must equal grade");
            assert!(m.max() <= dim, "index out of range");
            out.add_term(m, &c);
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, C> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: MultiIndex) -> C {
        self.terms.get(&m).cloned().unwrap_or_else(C::zero_coeff)
    }

    /// Coefficient of `e^{indices}` with the sign of the sorting permutation.
    pub fn get(&self, indices: &[usize]) -> C {
        let s = perm_sign(indices);
        if s == 0 || indices.len() != self.grade {
            return C::zero_coeff();
        }
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        match MultiIndex::new(&sorted, self.dim) {
            Ok(m) => self.coeff(m).scale(&int(s as i64)),
            Err(_) => C::zero_coeff(),
        }
    }

    pub fn add_term(&mut self, m: MultiIndex, c: &C) {
        if c.is_zero_coeff() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                slot.add_assign(c);
                if slot.is_zero_coeff() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(AlgebraError::DimMismatch(self.dim, other.dim));
        }
        if self.grade != other.grade {
            return Err(AlgebraError::GradeMismatch(self.grade, other.grade));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c);
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("shape mismatch in add")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero(self.dim, self.grade);
        }
        Multivector {
            dim: self.dim,
            grade: self.grade,
            terms: self.terms.iter().map(|(m, c)| (*m, c.scale(q))).collect(),
        }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&int(n))
    }

    /// `self += q·other`.
    pub fn axpy(&mut self, q: &Rational, other: &Self) {
        assert_eq!((self.dim, self.grade), (other.dim, other.grade), "shape mismatch in axpy");
        if q.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(*m, &c.scale(q));
        }
    }

    /// Maps every coefficient through a linear map `C → D`.
    pub fn map_coeffs<D: Coeff, F: Fn(&C) -> D>(&self, f: F) -> Multivector<D> {
        Multivector::from_terms(self.dim, self.grade, self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    /// `self ∧ b` where `b` has rational coefficients.
    pub fn wedge_form(&self, b: &Form) -> Result<Self> {
        if self.dim != b.dim {
            return Err(AlgebraError::DimMismatch(self.dim, b.dim));
        }
        if self.grade + b.grade > self.dim {
            return Err(AlgebraError::GradeOverflow(self.grade, b.grade, self.dim));
        }
        let mut out = Self::zero(self.dim, self.grade + b.grade);
        for (i, c) in &self.terms {
            for (j, q) in &b.terms {
                let s = i.merge_sign(*j);
                if s == 0 {
                    continue;
                }
                let q = if s < 0 { -q.clone() } else { q.clone() };
                out.add_term(i.union(*j), &c.scale(&q));
            }
        }
        Ok(out)
    }

    /// Hodge star with `vol = e^{1…n}`: `e^I ∧ ∗e^I = vol`.
    pub fn hodge(&self) -> Self {
        let mut out = Self::zero(self.dim, self.dim - self.grade);
        for (i, c) in &self.terms {
            let ic = i.complement(self.dim);
            let s = i.merge_sign(ic);
            out.add_term(ic, &c.scale(&int(s as i64)));
        }
        out
    }

    /// Hodge star inside the coordinate subspace spanned by `subset` (1-based, oriented increasingly).
    pub fn hodge_within(&self, subset: &[usize]) -> Result<Self> {
        let sub = MultiIndex::new(subset, self.dim)?;
        if self.grade > sub.len() {
            return Err(AlgebraError::GradeOverflow(self.grade, 0, sub.len()));
        }
        let mut out = Self::zero(self.dim, sub.len() - self.grade);
        for (i, c) in &self.terms {
            if !i.is_subset(sub) {
                return Err(AlgebraError::OutsideSubspace(subset.to_vec()));
            }
            let ic = MultiIndex::from_bits(sub.bits() & !i.bits());
            let s = i.merge_sign(ic);
            out.add_term(ic, &c.scale(&int(s as i64)));
        }
        Ok(out)
    }

    /// Contraction with `X = Σ x_i e_i` in the first slot.
    pub fn interior(&self, x: &[Rational]) -> Result<Self> {
        if x.len() != self.dim {
            return Err(AlgebraError::DimMismatch(x.len(), self.dim));
        }
        if self.grade == 0 {
            return Err(AlgebraError::GradeZero);
        }
        let mut out = Self::zero(self.dim, self.grade - 1);
        for (i, c) in &self.terms {
            for k in i.indices() {
                let xk = &x[k - 1];
                if xk.is_zero() {
                    continue;
                }
                let pos = i.count_below(k);
                let q = if pos % 2 == 0 { xk.clone() } else { -xk.clone() };
                out.add_term(i.remove(k), &c.scale(&q));
            }
        }
        Ok(out)
    }

    /// `ι_{e_k}` for a coordinate vector.
    pub fn interior_basis(&self, k: usize) -> Self {
        let mut x = vec![Rational::zero(); self.dim];
        x[k - 1] = Rational::one();
        self.interior(&x).expect("valid coordinate contraction")
    }

    /// `⟨self, b⟩` with `b` rational and `{e^I}` orthonormal.
    pub fn inner_form(&self, b: &Form) -> Result<C> {
        if self.dim != b.dim {
            return Err(AlgebraError::DimMismatch(self.dim, b.dim));
        }
        if self.grade != b.grade {
            return Err(AlgebraError::GradeMismatch(self.grade, b.grade));
        }
        let mut acc = C::zero_coeff();
        for (m, c) in &self.terms {
            if let Some(q) = b.terms.get(m) {
                acc.add_assign(&c.scale(q));
            }
        }
        Ok(acc)
    }

    /// Coordinates in the lexicographic basis of Λ^grade.
    pub fn to_coords(&self) -> Vec<C> {
        let mut v = vec![C::zero_coeff(); super::index::binom(self.dim, self.grade)];
        for (m, c) in &self.terms {
            v[m.position(self.dim)] = c.clone();
        }
        v
    }

    pub fn from_coords(dim: usize, grade: usize, v: &[C]) -> Self {
        let basis = MultiIndex::all(dim, grade);
        assert_eq!(basis.len(), v.len(), "coordinate vector has the wrong length");
        Self::from_terms(dim, grade, basis.into_iter().zip(v.iter().cloned()))
    }

    /// True when every term lies in `Λ(span{e_i : i ∈ subset})`.
    pub fn supported_in(&self, subset: &[usize]) -> bool {
        let sub = subset.iter().fold(0u16, |b, &i| b | (1 << (i - 1)));
        self.terms.keys().all(|m| m.bits() & !sub == 0)
    }

    /// Terms whose index has exactly `a` entries in `subset` (bidegree filter).
    pub fn bidegree_part(&self, subset: &[usize], a: usize) -> Self {
        let sub = subset.iter().fold(0u16, |b, &i| b | (1 << (i - 1)));
        Self::from_terms(
            self.dim,
            self.grade,
            self.terms
                .iter()
                .filter(|(m, _)| (m.bits() & sub).count_ones() as usize == a)
                .map(|(m, c)| (*m, c.clone())),
        )
    }

    /// The set of parameter atoms (or nothing for rational forms) is left to the coefficient type.
    pub fn coeffs(&self) -> impl Iterator<Item = &C> {
        self.terms.values()
    }
}

impl Form {
    /// `e^{i1…ik}` with sorting sign.
    pub fn e(dim: usize, indices: &[usize]) -> Form {
        Form::monomial(dim, indices, Rational::one())
    }

    pub fn scalar(dim: usize, q: Rational) -> Form {
        Form::from_terms(dim, 0, [(MultiIndex::EMPTY, q)])
    }

    /// The volume form `e^{1…n}`.
    pub fn vol(dim: usize) -> Form {
        let idx: Vec<usize> = (1..=dim).collect();
        Form::e(dim, &idx)
    }

    /// Rational coordinate basis of Λ^k in lex order.
    pub fn basis(dim: usize, k: usize) -> Vec<Form> {
        MultiIndex::all(dim, k).into_iter().map(|m| Form::from_terms(dim, k, [(m, Rational::one())])).collect()
    }

    pub fn one_form(v: &[Rational]) -> Form {
        Form::from_coords(v.len(), 1, v)
    }

    pub fn wedge(&self, b: &Form) -> Form {
        self.try_wedge(b).expect("wedge shape")
    }

    pub fn try_wedge(&self, b: &Form) -> Result<Form> {
        self.wedge_form(b)
    }

    /// `a ∧ self` for a form `a` with any coefficient type.
    pub fn wedge_left<C: Coeff>(&self, a: &Multivector<C>) -> Result<Multivector<C>> {
        a.wedge_form(self)
    }

    pub fn inner(&self, b: &Form) -> Result<Rational> {
        self.inner_form(b)
    }

    pub fn norm_sq(&self) -> Rational {
        self.inner_form(self).expect("same shape")
    }

    /// `self(v_1, …, v_k)` with rational vectors.
    pub fn evaluate(&self, vs: &[Vec<Rational>]) -> Result<Rational> {
        if vs.len() != self.grade {
            return Err(AlgebraError::GradeMismatch(vs.len(), self.grade));
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let idx = m.indices();
            let mat: Vec<Vec<Rational>> =
                vs.iter().map(|v| idx.iter().map(|&i| v[i - 1].clone()).collect()).collect();
            acc += c * super::linalg::det(&mat);
        }
        Ok(acc)
    }

    /// Floating-point evaluation, used only for comass sampling.
    pub fn evaluate_f64(&self, vs: &[Vec<f64>]) -> f64 {
        assert_eq!(vs.len(), self.grade, "one vector per slot");
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let idx = m.indices();
            let mut mat: Vec<Vec<f64>> = vs.iter().map(|v| idx.iter().map(|&i| v[i - 1]).collect()).collect();
            acc += to_f64(c) * det_f64(&mut mat);
        }
        acc
    }

    /// Pullback along the linear map with matrix `a` (new `e^i` ↦ Σ_j a[i][j] e^j).
    pub fn substitute(&self, a: &[Vec<Rational>]) -> Form {
        let mut out = Form::zero(self.dim, self.grade);
        let images: Vec<Form> = (0..self.dim).map(|i| Form::one_form(&a[i])).collect();
        for (m, c) in &self.terms {
            let mut acc = Form::scalar(self.dim, c.clone());
            for i in m.indices() {
                acc = acc.wedge(&images[i - 1]);
            }
            out = out.add(&acc);
        }
        out
    }
}

impl ParamForm {
    /// `Σ c_k·f_k` for parameter coefficients and rational forms.
    pub fn combination(dim: usize, grade: usize, parts: &[(ParamExpr, &Form)]) -> ParamForm {
        let mut out = ParamForm::zero(dim, grade);
        for (c, f) in parts {
            assert_eq!((f.dim, f.grade), (dim, grade), "shape mismatch in combination");
            for (m, q) in &f.terms {
                out.add_term(*m, &c.scale(q));
            }
        }
        out
    }

    pub fn from_form(f: &Form) -> ParamForm {
        f.map_coeffs(|q| ParamExpr::constant(q.clone()))
    }

    /// Evaluates every coefficient.
    pub fn eval(&self, values: &BTreeMap<String, Rational>) -> Form {
        self.map_coeffs(|c| c.eval(values))
    }

    /// The rational form multiplying `name`.
    pub fn coefficient_form(&self, name: &str) -> Form {
        self.map_coeffs(|c| c.coeff_of(name))
    }
}

fn det_f64(m: &mut [Vec<f64>]) -> f64 {
    let n = m.len();
    let mut d = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&a, &b| m[a][c].abs().partial_cmp(&m[b][c].abs()).unwrap()).unwrap();
        if m[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= m[c][c];
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            for k in c..n {
                m[r][k] -= f * m[c][k];
            }
        }
    }
    d
}

impl<C: Coeff + fmt::Display> fmt::Display for Multivector<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c}){m:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<C: Coeff> fmt::Debug for Multivector<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector(dim={}, grade={}, {:?})", self.dim, self.grade, self.terms)
    }
}

/// Compact text such as `e23 - e45 + 1/2 e67`.
pub fn pretty(f: &Form) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, (m, c)) in f.terms().iter().enumerate() {
        let neg = c < &Rational::zero();
        let mag = if neg { -c.clone() } else { c.clone() };
        if k == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if !mag.is_one() {
            s.push_str(&format_rational(&mag));
            s.push(' ');
        }
        s.push_str(&format!("{m:?}"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn e(i: &[usize]) -> Form {
        Form::e(7, i)
    }

    #[test]
    fn basic_products() {
        assert_eq!(e(&[1]).wedge(&e(&[2])), e(&[1, 2]));
        assert!(e(&[1]).wedge(&e(&[1])).is_zero());
        assert_eq!(e(&[2]).wedge(&e(&[1])), e(&[1, 2]).neg());
        assert!(Form::e(7, &[1, 2, 3, 4]).try_wedge(&Form::e(7, &[4, 5, 6, 7])).is_err());
        assert!(matches!(
            Form::e(7, &[1, 2, 3, 4]).try_wedge(&Form::e(7, &[1, 5, 6])),
            Ok(ref z) if z.is_zero()
        ));
        assert!(Form::e(7, &[1, 2, 3, 4]).try_wedge(&Form::e(8, &[5])).is_err());
    }

    #[test]
    fn hodge_examples() {
        assert_eq!(e(&[1, 2, 3]).hodge(), e(&[4, 5, 6, 7]));
        assert_eq!(e(&[1, 2]).hodge().hodge(), e(&[1, 2]));
        let k = Form::e(8, &[1]).hodge_within(&[1, 2, 3, 4]).unwrap();
        assert_eq!(k, Form::e(8, &[2, 3, 4]));
        assert_eq!(Form::e(8, &[2]).hodge_within(&[1, 2, 3, 4]).unwrap(), Form::e(8, &[3, 1, 4]));
    }

    #[test]
    fn interior_and_evaluate() {
        assert_eq!(e(&[1, 2]).interior_basis(1), e(&[2]));
        assert_eq!(e(&[1, 2]).interior_basis(2), e(&[1]).neg());
        let v1 = vec![int(1), int(2), int(0), int(0), int(0), int(0), int(0)];
        let v2 = vec![int(0), int(1), int(0), int(0), int(0), int(0), int(3)];
        assert_eq!(e(&[1, 2]).evaluate(&[v1.clone(), v2.clone()]).unwrap(), int(1));
        assert_eq!(e(&[1, 2]).interior(&v1).unwrap().evaluate(&[v2]).unwrap(), int(1));
        assert!(Form::scalar(7, rat(1, 2)).interior(&v1).is_err());
    }

    #[test]
    fn coords_roundtrip() {
        let f = e(&[1, 4, 5]).scale(&rat(-2, 3)).add(&e(&[1, 2, 3]));
        let c = f.to_coords();
        assert_eq!(c.len(), 35);
        assert_eq!(Form::from_coords(7, 3, &c), f);
        assert_eq!(pretty(&f), "e123 - 2/3 e145");
    }
}
