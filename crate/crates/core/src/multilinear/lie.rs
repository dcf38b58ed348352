//! Matrix Lie algebras acting on forms by derivations, stabilizers, and Casimir operators.

use num_traits::{One, Zero};

use super::form::{Form, Multivector};
use super::index::{binom, MultiIndex};
use super::linalg::Matrix;
use crate::expr::Coeff;
use crate::rational::{int, Rational};

/// `E_ij − E_ji` for `i < j`, in lex order of pairs.
pub fn so_basis(n: usize) -> Vec<Matrix> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut m = Matrix::zeros(n, n);
            m.set(i, j, Rational::one());
            m.set(j, i, -Rational::one());
            out.push(m);
        }
    }
    out
}

/// Extends `e^i ↦ images[i-1]` to forms, as an odd (`d`-like) or even derivation.
pub fn apply_derivation<C: Coeff>(form: &Form, images: &[Multivector<C>], odd: bool) -> Multivector<C> {
    let dim = form.dim();
    let g = images[0].grade();
    let shift = g - 1;
    let mut out = Multivector::<C>::zero(dim, form.grade() + shift);
    for (m, c) in form.terms() {
        let idx = m.indices();
        for s in 0..idx.len() {
            let pre = Form::e(dim, &idx[..s]);
            let post = Form::e(dim, &idx[s + 1..]);
            // pre ∧ img ∧ post = (−1)^{|pre|·g} img ∧ pre ∧ post
            let body = images[idx[s] - 1].wedge_form(&pre.wedge(&post)).expect("degree fits");
            let mut sign = if (s * g).is_multiple_of(2) { 1 } else { -1 };
            if odd && s % 2 == 1 {
                sign = -sign;
            }
            out.axpy(&(c * int(sign)), &body);
        }
    }
    out
}

/// `X·e^i = −Σ_j X_ji e^j`, extended as an even derivation.
pub fn act<C: Coeff>(x: &Matrix, f: &Multivector<C>) -> Multivector<C> {
    let n = f.dim();
    let mut out = Multivector::<C>::zero(n, f.grade());
    if f.grade() == 0 {
        return out;
    }
    for (m, c) in f.terms() {
        let idx = m.indices();
        for s in 0..idx.len() {
            let i = idx[s];
            for j in 1..=n {
                let xji = x.get(j - 1, i - 1);
                if xji.is_zero() {
                    continue;
                }
                let mut new = idx.clone();
                new[s] = j;
                let sign = super::index::perm_sign(&new);
                if sign == 0 {
                    continue;
                }
                new.sort_unstable();
                let mi = MultiIndex::new(&new, n).expect("valid index");
                out.add_term(mi, &c.scale(&(-xji.clone() * int(sign as i64))));
            }
        }
    }
    out
}

/// Matrix of `β ↦ X·β` on Λ^k in lex coordinates.
pub fn action_matrix(x: &Matrix, n: usize, k: usize) -> Matrix {
    let basis = Form::basis(n, k);
    let cols: Vec<Vec<Rational>> = basis.iter().map(|b| act(x, b).to_coords()).collect();
    Matrix::from_cols(&cols, binom(n, k))
}

/// Matrix of a linear map on Λ^k given by its action on basis forms.
pub fn operator_matrix<F: Fn(&Form) -> Form>(n: usize, k: usize, out_k: usize, f: F) -> Matrix {
    let cols: Vec<Vec<Rational>> = Form::basis(n, k).iter().map(|b| f(b).to_coords()).collect();
    Matrix::from_cols(&cols, binom(n, out_k))
}

/// Combinations `Σ c_a X_a` of `basis` satisfying the linear constraints `constraint(X) = 0`.
pub fn sub_algebra<F: Fn(&Matrix) -> Vec<Rational>>(basis: &[Matrix], constraint: F) -> Vec<Matrix> {
    if basis.is_empty() {
        return Vec::new();
    }
    let cols: Vec<Vec<Rational>> = basis.iter().map(&constraint).collect();
    let rows = cols[0].len();
    if rows == 0 {
        return basis.to_vec();
    }
    let m = Matrix::from_cols(&cols, rows);
    m.nullspace().iter().map(|c| combine(basis, c)).collect()
}

pub fn combine(basis: &[Matrix], c: &[Rational]) -> Matrix {
    let n = basis[0].rows();
    let mut acc = Matrix::zeros(n, basis[0].cols());
    for (x, q) in basis.iter().zip(c) {
        if !q.is_zero() {
            acc = acc.add(&x.scale(q));
        }
    }
    acc
}

/// Flattened matrix entries, for use as linear constraints.
pub fn flatten(m: &Matrix) -> Vec<Rational> {
    m.to_rows().into_iter().flatten().collect()
}

/// The Lie algebra of `so(n)` annihilating `form`.
pub fn annihilator(form: &Form) -> Vec<Matrix> {
    sub_algebra(&so_basis(form.dim()), |x| act(x, form).to_coords())
}

/// Elements preserving `span{e_i : i ∈ subset}` (vectors transform as `X e_i = Σ_j X_ji e_j`).
pub fn preserving(basis: &[Matrix], subset: &[usize]) -> Vec<Matrix> {
    let n = basis[0].rows();
    sub_algebra(basis, |x| {
        let mut v = Vec::new();
        for &i in subset {
            for j in 1..=n {
                if !subset.contains(&j) {
                    v.push(x.get(j - 1, i - 1).clone());
                }
            }
        }
        v
    })
}

/// `tr(XY)`.
pub fn trace_pairing(x: &Matrix, y: &Matrix) -> Rational {
    x.mul(y).trace()
}

/// `Σ g^{ab} ρ(X_a)ρ(X_b)` with `g_ab = tr(X_a X_b)` computed in the defining representation.
pub fn casimir(generators: &[Matrix], rep: &[Matrix]) -> Matrix {
    let k = generators.len();
    let mut g = Matrix::zeros(k, k);
    for a in 0..k {
        for b in 0..k {
            g.set(a, b, trace_pairing(&generators[a], &generators[b]));
        }
    }
    let gi = g.inverse().expect("trace form is nondegenerate on a semisimple factor");
    let n = rep[0].rows();
    let mut out = Matrix::zeros(n, n);
    for a in 0..k {
        for b in 0..k {
            let q = gi.get(a, b);
            if !q.is_zero() {
                out = out.add(&rep[a].mul(&rep[b]).scale(q));
            }
        }
    }
    out
}

/// Dimension of the span of a set of matrices.
pub fn span_dim(ms: &[Matrix]) -> usize {
    if ms.is_empty() {
        return 0;
    }
    let cols: Vec<Vec<Rational>> = ms.iter().map(flatten).collect();
    Matrix::from_cols(&cols, cols[0].len()).rank()
}

/// True when `[X_a, X_b]` lies in the span for all pairs.
pub fn is_closed_under_bracket(ms: &[Matrix]) -> bool {
    let d = span_dim(ms);
    for a in ms {
        for b in ms {
            let mut ext = ms.to_vec();
            ext.push(a.commutator(b));
            if span_dim(&ext) != d {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn so_dimension_and_action() {
        assert_eq!(so_basis(7).len(), 21);
        let x = &so_basis(7)[0]; // E12 − E21
        // X·e^1 = −X_21 e^2 = e^2
        assert_eq!(act(x, &Form::e(7, &[1])), Form::e(7, &[2]));
        assert_eq!(act(x, &Form::e(7, &[1, 2])), Form::zero(7, 2));
        let a = action_matrix(x, 7, 2);
        assert_eq!(a.rows(), 21);
    }

    #[test]
    fn derivation_recovers_action() {
        let x = &so_basis(7)[3];
        let imgs: Vec<Form> = (1..=7).map(|i| act(x, &Form::e(7, &[i]))).collect();
        let f = Form::e(7, &[1, 2, 5]).add(&Form::e(7, &[3, 4, 7]));
        assert_eq!(apply_derivation(&f, &imgs, false), act(x, &f));
    }
}
