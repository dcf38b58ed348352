//! Exact rational scalars and radical-carrying values `q·√r`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{AlgebraError, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Accepts `p`, `p/q`, optional sign, and the unicode minus sign.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim().replace('\u{2212}', "-");
    let bad = || AlgebraError::Parse(format!("not a rational: {s:?}"));
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t.as_str(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

pub fn to_f64(q: &Rational) -> f64 {
    q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
}

/// Splits `n` into `(s, f)` with `n = s²·f` and `f` squarefree.
pub fn squarefree_split(n: u64) -> (u64, u64) {
    let mut s = 1u64;
    let mut f = 1u64;
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        let mut e = 0;
        while m.is_multiple_of(p) {
            m /= p;
            e += 1;
        }
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            f *= p;
        }
        p += 1;
    }
    (s, f * m)
}

/// A scalar `rat·√root` with `root` squarefree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Surd {
    pub rat: Rational,
    pub root: u64,
}

impl Surd {
    pub fn new(rat: Rational, root: u64) -> Self {
        assert!(root > 0, "radicand must be positive");
        let (s, f) = squarefree_split(root);
        let rat = rat * int(s as i64);
        if rat.is_zero() {
            Surd { rat, root: 1 }
        } else {
            Surd { rat, root: f }
        }
    }

    pub fn rational(q: Rational) -> Self {
        Surd::new(q, 1)
    }

    /// `√n`.
    pub fn sqrt(n: u64) -> Self {
        Surd::new(Rational::one(), n)
    }

    /// Product, returned as a new surd together with nothing lost: `(a√r)(b√s) = ab·k√f`.
    pub fn mul(&self, other: &Surd) -> Surd {
        Surd::new(&self.rat * &other.rat, self.root * other.root)
    }

    pub fn square(&self) -> Rational {
        &self.rat * &self.rat * int(self.root as i64)
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({"rat": format_rational(&self.rat), "root": self.root})
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let rat = v
            .get("rat")
            .and_then(|x| x.as_str())
            .ok_or_else(|| AlgebraError::Parse("surd needs a \"rat\" string".into()))?;
        let root = v
            .get("root")
            .and_then(|x| x.as_u64())
            .filter(|r| *r > 0)
            .ok_or_else(|| AlgebraError::Parse("surd needs a positive \"root\"".into()))?;
        Ok(Surd::new(parse_rational(rat)?, root))
    }
}

impl std::fmt::Display for Surd {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.root == 1 {
            write!(f, "{}", format_rational(&self.rat))
        } else if self.rat.is_one() {
            write!(f, "√{}", self.root)
        } else if (-self.rat.clone()).is_one() {
            write!(f, "-√{}", self.root)
        } else {
            write!(f, "{}·√{}", format_rational(&self.rat), self.root)
        }
    }
}

pub fn abs(q: &Rational) -> Rational {
    q.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_canonically() {
        assert_eq!(format_rational(&rat(-4, 6)), "-2/3");
        assert_eq!(format_rational(&int(5)), "5");
        assert_eq!(parse_rational("\u{2212}3/9").unwrap(), rat(-1, 3));
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn surds_reduce() {
        let s = Surd::sqrt(6).mul(&Surd::sqrt(6));
        assert_eq!(s, Surd::rational(int(6)));
        let t = Surd::sqrt(42).mul(&Surd::new(rat(1, 7), 42));
        assert_eq!(t, Surd::rational(int(6)));
        assert_eq!(Surd::sqrt(12), Surd::new(int(2), 3));
        assert_eq!(squarefree_split(72), (6, 2));
    }
}
