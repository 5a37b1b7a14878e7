//! Laurent polynomials in `u_1, ..., u_n` with half-integer exponents,
//! stored doubled.

use std::collections::hash_map::Entry;

use num_traits::Zero;
use rustc_hash::FxHashMap;

use crate::arith::{frac, int, Rat};
use crate::error::{consistency, domain, Result};
use crate::symfunc::ExponentPoly;

/// `Σ c_e Π u_i^{e_i / 2}` with integer `e`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPoly {
    n: usize,
    terms: FxHashMap<Vec<i64>, Rat>,
}

impl LaurentPoly {
    pub fn zero(n: usize) -> Self {
        LaurentPoly { n, terms: FxHashMap::default() }
    }

    pub fn one(n: usize) -> Self {
        Self::monomial(n, vec![0; n], int(1))
    }

    /// `c Π u_i^{doubled_i / 2}`.
    pub fn monomial(n: usize, doubled: Vec<i64>, c: Rat) -> Self {
        assert_eq!(doubled.len(), n, "exponent vector length");
        let mut p = Self::zero(n);
        p.add_term(doubled, c);
        p
    }

    /// `c u_i^{doubled / 2}`.
    pub fn power(n: usize, i: usize, doubled: i64, c: Rat) -> Self {
        let mut e = vec![0; n];
        e[i] = doubled;
        Self::monomial(n, e, c)
    }

    pub fn n_vars(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, doubled: &[i64]) -> Rat {
        self.terms.get(doubled).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, doubled: Vec<i64>, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(doubled) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn add_assign_scaled(&mut self, other: &LaurentPoly, c: &Rat) {
        for (e, v) in &other.terms {
            let slot = self.terms.entry(e.clone()).or_insert_with(Rat::zero);
            *slot += v * c;
        }
        self.terms.retain(|_, v| !v.is_zero());
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out.add_assign_scaled(other, &int(1));
        out
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out.add_assign_scaled(other, &int(-1));
        out
    }

    pub fn scale(&self, c: &Rat) -> LaurentPoly {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        LaurentPoly { n: self.n, terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        self.mul_truncated(other, i64::MAX)
    }

    /// Product keeping only terms of doubled total degree at most `max_doubled`.
    pub fn mul_truncated(&self, other: &LaurentPoly, max_doubled: i64) -> LaurentPoly {
        assert_eq!(self.n, other.n, "variable counts");
        let mut out: FxHashMap<Vec<i64>, Rat> = FxHashMap::default();
        for (a, x) in &self.terms {
            let da: i64 = a.iter().sum();
            for (b, y) in &other.terms {
                let db: i64 = b.iter().sum();
                if da.saturating_add(db) > max_doubled {
                    continue;
                }
                let e: Vec<i64> = a.iter().zip(b).map(|(p, q)| p + q).collect();
                *out.entry(e).or_insert_with(Rat::zero) += x * y;
            }
        }
        out.retain(|_, v| !v.is_zero());
        LaurentPoly { n: self.n, terms: out }
    }

    /// Multiplies by `Π u_i^{doubled_i / 2}`.
    pub fn shift(&self, doubled: &[i64]) -> LaurentPoly {
        assert_eq!(doubled.len(), self.n, "exponent vector length");
        LaurentPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (e.iter().zip(doubled).map(|(p, q)| p + q).collect(), v.clone()))
                .collect(),
        }
    }

    /// `∂/∂u_i`.
    pub fn derivative(&self, i: usize) -> LaurentPoly {
        let mut out = Self::zero(self.n);
        for (e, v) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut f = e.clone();
            f[i] -= 2;
            out.terms.insert(f, v * frac(e[i], 2));
        }
        out
    }

    /// `(∂/∂u_i - ∂/∂u_j)`.
    pub fn diff_pair(&self, i: usize, j: usize) -> LaurentPoly {
        self.derivative(i).sub(&self.derivative(j))
    }

    /// Drops terms of doubled total degree above `max_doubled`.
    pub fn truncate(&self, max_doubled: i64) -> LaurentPoly {
        LaurentPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<i64>() <= max_doubled)
                .map(|(e, v)| (e.clone(), v.clone()))
                .collect(),
        }
    }

    /// Doubled total degrees present, ascending.
    pub fn doubled_degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.terms.keys().map(|e| e.iter().sum()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn from_exponent_poly(p: &ExponentPoly) -> LaurentPoly {
        LaurentPoly {
            n: p.n,
            terms: p
                .terms
                .iter()
                .map(|(e, v)| (e.iter().map(|&x| 2 * x as i64).collect(), v.clone()))
                .collect(),
        }
    }

    /// The same polynomial with ordinary exponents; fails on half-integer or
    /// negative exponents.
    pub fn to_exponent_poly(&self) -> Result<ExponentPoly> {
        let mut out = ExponentPoly::zero(self.n);
        for (e, v) in &self.terms {
            if e.iter().any(|&x| x < 0 || x % 2 != 0) {
                return Err(consistency!("exponent {e:?}/2 is not a non-negative integer"));
            }
            out.add_term(e.iter().map(|&x| (x / 2) as u32).collect(), v.clone());
        }
        Ok(out)
    }

    /// Value at a point with rational coordinates; fails on half-integer
    /// exponents.
    pub fn evaluate(&self, point: &[Rat]) -> Result<Rat> {
        if point.len() != self.n {
            return Err(domain!("point has {} coordinates, expected {}", point.len(), self.n));
        }
        let mut acc = Rat::zero();
        for (e, v) in &self.terms {
            let mut t = v.clone();
            for (x, &k) in point.iter().zip(e) {
                if k % 2 != 0 {
                    return Err(domain!("half-integer exponent cannot be evaluated"));
                }
                t *= crate::arith::pow(x, k / 2)?;
            }
            acc += t;
        }
        Ok(acc)
    }
}

/// A 2×2 matrix of Laurent polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix2(pub [[LaurentPoly; 2]; 2]);

impl Matrix2 {
    pub fn identity(n: usize) -> Self {
        Matrix2([[LaurentPoly::one(n), LaurentPoly::zero(n)], [LaurentPoly::zero(n), LaurentPoly::one(n)]])
    }

    pub fn mul(&self, other: &Matrix2) -> Matrix2 {
        let a = &self.0;
        let b = &other.0;
        let entry = |i: usize, j: usize| a[i][0].mul(&b[0][j]).add(&a[i][1].mul(&b[1][j]));
        Matrix2([[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]])
    }

    pub fn trace(&self) -> LaurentPoly {
        self.0[0][0].add(&self.0[1][1])
    }

    pub fn det(&self) -> LaurentPoly {
        self.0[0][0].mul(&self.0[1][1]).sub(&self.0[0][1].mul(&self.0[1][0]))
    }
}

/// `M̃(u_i) = [[-u/2, -1], [u²/4 + 1/(2u), u/2]]` in the variable `u_i` of `n`.
pub fn m_tilde(n: usize, i: usize) -> Matrix2 {
    let p = |d: i64, c: Rat| LaurentPoly::power(n, i, d, c);
    Matrix2([
        [p(2, frac(-1, 2)), p(0, int(-1))],
        [p(4, frac(1, 4)).add(&p(-2, frac(1, 2))), p(2, frac(1, 2))],
    ])
}
