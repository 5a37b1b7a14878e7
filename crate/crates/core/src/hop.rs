//! The operator `H` and its inverse, realized through normalized Kostka
//! matrices.

use std::sync::{Arc, LazyLock};

use num_bigint::BigInt;
use num_traits::Zero;
use rustc_hash::FxHashMap;

use crate::arith::{double_factorial_odd, int, pow, Rat};
use crate::error::{domain, Result};
use crate::memo::Memo;
use crate::partition::Partition;
use crate::symfunc::{e_product_schur, inverse_kostka_row, kostka_table, Basis, SymPoly};

/// `Π_i Π_{j=1}^{μ_i} (2j - 2i + 3)`, the numerator of `N_{μ,λ}` with the
/// powers of two absorbed.
fn shape_factor(mu: &Partition, n: usize) -> Result<Rat> {
    let rows = mu.padded(n)?;
    let mut f = BigInt::from(1);
    for (i, &m) in rows.iter().enumerate() {
        for j in 1..=m as i64 {
            f *= 2 * j - 2 * (i as i64 + 1) + 3;
        }
    }
    Ok(Rat::from_integer(f))
}

/// `Π_i (2λ_i + 1)!!`.
fn content_factor(lambda: &Partition, n: usize) -> Result<Rat> {
    let rows = lambda.padded(n)?;
    let mut g = int(1);
    for &l in &rows {
        g *= double_factorial_odd(2 * l as i64 + 1)?;
    }
    Ok(g)
}

/// `N_{μ,λ} = 2^{|λ|} Π_i [Π_{j=1}^{μ_i}(j - i + 3/2)] / (2λ_i + 1)!!`.
pub fn n_factor(mu: &Partition, lambda: &Partition, n: usize) -> Result<Rat> {
    if mu.weight() != lambda.weight() {
        return Err(domain!("partitions {mu} and {lambda} have different weights"));
    }
    Ok(shape_factor(mu, n)? / content_factor(lambda, n)?)
}

/// `D_n = (-1)^{n-1} 2^{-n(n-1)/2} Π_{k=1}^{n-2} (2k-1)!!`.
pub fn d_n(n: usize) -> Result<Rat> {
    if n == 0 {
        return Err(domain!("D_n needs n >= 1"));
    }
    let n = n as i64;
    let mut d = pow(&int(2), -(n * (n - 1) / 2))?;
    for k in 1..=n - 2 {
        d *= double_factorial_odd(2 * k - 1)?;
    }
    if n % 2 == 0 {
        d = -d;
    }
    Ok(d)
}

type Row = Arc<Vec<(Partition, Rat)>>;

/// `H` on symmetric polynomials in `n` variables, with memoized rows of the
/// normalized matrices.
pub struct HContext {
    n: usize,
    s_rows: Memo<Partition, Row>,
    k_rows: Memo<Partition, Row>,
}

impl HContext {
    pub fn new(n: usize) -> Self {
        HContext { n, s_rows: Memo::new(), k_rows: Memo::new() }
    }

    pub fn n_vars(&self) -> usize {
        self.n
    }

    /// `H(m_λ) = Σ_μ S̃_{λ,μ} s_μ` with `S̃_{λ,μ} = S_{λ,μ} / N_{μ,λ}`.
    pub fn h_monomial(&self, lambda: &Partition) -> Result<Row> {
        self.s_rows.get_or_try_init(lambda, || {
            let n = self.n;
            let g = content_factor(lambda, n)?;
            let mut row = Vec::new();
            for (mu, s) in inverse_kostka_row(lambda, n)? {
                let v = s * &g / shape_factor(&mu, n)?;
                row.push((mu, v));
            }
            Ok(Arc::new(row))
        })
    }

    /// `H^{-1}(s_μ) = Σ_λ K̃_{μ,λ} m_λ` with `K̃_{μ,λ} = N_{μ,λ} K_{μ,λ}`.
    pub fn h_inverse_schur(&self, mu: &Partition) -> Result<Row> {
        self.k_rows.get_or_try_init(mu, || {
            let n = self.n;
            let f = shape_factor(mu, n)?;
            let t = kostka_table(mu.weight(), n)?;
            let m = t.index_of(mu).ok_or_else(|| domain!("s[{mu}] needs more than {n} rows"))?;
            let mut row = Vec::new();
            for &(l, k) in t.row(m) {
                let lam = &t.parts[l];
                let v = Rat::from_integer(BigInt::from(k)) * &f / content_factor(lam, n)?;
                row.push((lam.clone(), v));
            }
            Ok(Arc::new(row))
        })
    }

    fn check(&self, p: &SymPoly) -> Result<()> {
        if p.n_vars() != self.n {
            return Err(domain!("polynomial in {} variables, operator in {}", p.n_vars(), self.n));
        }
        Ok(())
    }

    /// `H(p)`, in the Schur basis.
    pub fn h_apply(&self, p: &SymPoly) -> Result<SymPoly> {
        self.check(p)?;
        let m = p.to_basis(Basis::Monomial)?;
        let mut out: FxHashMap<Partition, Rat> = FxHashMap::default();
        for (lam, c) in m.terms() {
            for (mu, v) in self.h_monomial(lam)?.iter() {
                *out.entry(mu.clone()).or_insert_with(Rat::zero) += c * v;
            }
        }
        Ok(SymPoly::from_map(self.n, Basis::Schur, out))
    }

    /// `H^{-1}(p)`, in the monomial basis.
    pub fn h_inverse_apply(&self, p: &SymPoly) -> Result<SymPoly> {
        self.check(p)?;
        let s = p.to_basis(Basis::Schur)?;
        let mut out: FxHashMap<Partition, Rat> = FxHashMap::default();
        for (mu, c) in s.terms() {
            for (lam, v) in self.h_inverse_schur(mu)?.iter() {
                *out.entry(lam.clone()).or_insert_with(Rat::zero) += c * v;
            }
        }
        Ok(SymPoly::from_map(self.n, Basis::Monomial, out))
    }

    /// `H^{-1}(e_λ) = Σ_μ K_{μ^T,λ} Σ_ν K̃_{μ,ν} m_ν`.
    pub fn h_inverse_elementary(&self, lambda: &Partition) -> Result<SymPoly> {
        let n = self.n;
        let mut out: FxHashMap<Partition, Rat> = FxHashMap::default();
        for (mu, k) in e_product_schur(lambda, n)?.iter() {
            let k = Rat::from_integer(BigInt::from(*k));
            for (nu, v) in self.h_inverse_schur(mu)?.iter() {
                *out.entry(nu.clone()).or_insert_with(Rat::zero) += &k * v;
            }
        }
        Ok(SymPoly::from_map(n, Basis::Monomial, out))
    }
}

static CONTEXTS: LazyLock<Memo<usize, Arc<HContext>>> = LazyLock::new(Memo::new);

/// The shared context for `n` variables.
pub fn context(n: usize) -> Arc<HContext> {
    CONTEXTS
        .get_or_try_init(&n, || Ok(Arc::new(HContext::new(n))))
        .expect("context construction is infallible")
}

/// The eigenvalue in `H(e_k e_1^l) = (-1)^k 3^{k-1} / (2k-5)!! · e_k e_1^l`.
pub fn hook_eigenvalue(k: u32) -> Result<Rat> {
    if k == 0 {
        return Ok(int(1));
    }
    let k = k as i64;
    let v = pow(&int(3), k - 1)? / double_factorial_odd(2 * k - 5)?;
    Ok(if k % 2 == 0 { v } else { -v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::frac;
    use crate::partition::enumerate;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn n_factor_examples() {
        assert_eq!(n_factor(&p("-"), &p("-"), 4).unwrap(), int(1));
        assert_eq!(n_factor(&p("1,1,1"), &p("1,1,1"), 3).unwrap(), frac(-1, 9));
        assert_eq!(n_factor(&p("1"), &p("1"), 1).unwrap(), int(1));
        assert!(n_factor(&p("2"), &p("1"), 2).is_err());
    }

    #[test]
    fn n_factor_matches_gamma_form() {
        use crate::arith::gamma_half_ratio;
        // Π_i Γ(μ_i - i + 5/2) Γ(3/2) / (Γ(-i + 5/2) Γ(λ_i + 3/2))
        for n in 1..=5usize {
            for d in 0..=6u32 {
                for mu in enumerate(d, n) {
                    for lam in enumerate(d, n) {
                        let mut v = int(1);
                        for i in 1..=n {
                            let a = 5 - 2 * i as i64;
                            v *= gamma_half_ratio(a, mu.part(i - 1) as i64).unwrap();
                            v /= gamma_half_ratio(3, lam.part(i - 1) as i64).unwrap();
                        }
                        assert_eq!(n_factor(&mu, &lam, n).unwrap(), v);
                    }
                }
            }
        }
    }

    #[test]
    fn d_n_values() {
        assert_eq!(d_n(1).unwrap(), int(1));
        assert_eq!(d_n(2).unwrap(), frac(-1, 2));
        assert_eq!(d_n(3).unwrap(), frac(1, 8));
        assert_eq!(d_n(4).unwrap(), frac(-3, 64));
    }

    #[test]
    fn h_examples() {
        let ctx = HContext::new(3);
        let one = SymPoly::one(3, Basis::Monomial);
        assert_eq!(ctx.h_apply(&one).unwrap(), SymPoly::one(3, Basis::Schur));
        let e3 = SymPoly::term(3, Basis::Elementary, p("3"), int(1)).unwrap();
        let h = ctx.h_apply(&e3).unwrap().to_basis(Basis::Elementary).unwrap();
        assert_eq!(h, e3.scale(&int(-9)));
        for n in 1..=4usize {
            let c = HContext::new(n);
            let s1 = SymPoly::term(n, Basis::Schur, p("1"), int(1)).unwrap();
            assert_eq!(c.h_inverse_apply(&s1).unwrap(), SymPoly::term(n, Basis::Monomial, p("1"), int(1)).unwrap());
            assert_eq!(c.h_inverse_elementary(&p("1")).unwrap().to_string(), "m[1] 1\n");
            assert_eq!(c.h_inverse_elementary(&p("-")).unwrap().to_string(), "m[-] 1\n");
        }
        let inv = ctx.h_inverse_elementary(&p("3")).unwrap();
        assert_eq!(inv, e3.scale(&frac(-1, 9)).to_basis(Basis::Monomial).unwrap());
        assert!(ctx.h_inverse_elementary(&p("4")).is_err());
    }

    #[test]
    fn hook_formula() {
        for n in 1..=6usize {
            let ctx = HContext::new(n);
            for k in 1..=n.min(6) as u32 {
                for l in 0..=3u32 {
                    let mut parts = vec![k];
                    parts.extend(std::iter::repeat_n(1, l as usize));
                    let lam = Partition::from_unsorted(parts);
                    let e = SymPoly::term(n, Basis::Elementary, lam, int(1)).unwrap();
                    let h = ctx.h_apply(&e).unwrap().to_basis(Basis::Elementary).unwrap();
                    assert_eq!(h, e.scale(&hook_eigenvalue(k).unwrap()), "n={n} k={k} l={l}");
                    // the eigenvalue is 1/N_{(1^k),(1^k)}
                    let col = Partition::rectangle(1, k as usize);
                    assert_eq!(hook_eigenvalue(k).unwrap(), int(1) / n_factor(&col, &col, n).unwrap());
                }
            }
        }
    }

    #[test]
    fn h_inverse_elementary_matches_composition() {
        for n in 1..=5usize {
            let ctx = HContext::new(n);
            for d in 0..=7u32 {
                for lam in enumerate(d, d as usize).into_iter().filter(|l| l.largest() as usize <= n) {
                    let e = SymPoly::term(n, Basis::Elementary, lam.clone(), int(1)).unwrap();
                    assert_eq!(
                        ctx.h_inverse_elementary(&lam).unwrap(),
                        ctx.h_inverse_apply(&e).unwrap(),
                        "n={n} λ={lam}"
                    );
                }
            }
        }
    }
}
