//! Intersection numbers, generating polynomials and correlators from the
//! coefficient tables.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;

use crate::arith::{double_factorial_odd, factorial, format_rat, gamma_half_ratio, int, parse_rat, pow, Rat};
use crate::dtable::{DTable, Route};
use crate::error::{domain, Error, Result};
use crate::hop;
use crate::linalg::det_bareiss;
use crate::oracle::{a_gn_oracle, check_admissible, virasoro_tau};
use crate::partition::{enumerate, Partition};
use crate::pengine::{d_rn, r_max};
use crate::symfunc::{kostka_table, next_permutation, perm_sign, Basis, SymPoly};

/// `Q_{ν,μ} = det(𝔡_{L_j(μ) - L_i(ν)} / ((L_j(μ) - L_i(ν))/3)!)`, where
/// `𝔡_k = 1` for `k >= 0` divisible by 3 and `0` otherwise.
pub fn q_coeff(nu: &Partition, mu: &Partition, n: usize) -> Result<Rat> {
    let lnu = nu.l_vector(n)?;
    let lmu = mu.l_vector(n)?;
    if mu.weight() < nu.weight() || !(mu.weight() - nu.weight()).is_multiple_of(3) {
        return Ok(Rat::zero());
    }
    let mut m = Vec::with_capacity(n);
    for &a in &lnu {
        let mut row = Vec::with_capacity(n);
        for &b in &lmu {
            let k = b - a;
            row.push(if k >= 0 && k % 3 == 0 { int(1) / factorial(k / 3)? } else { Rat::zero() });
        }
        m.push(row);
    }
    Ok(det_bareiss(&m))
}

fn ensure_table(g: u32, n: usize, table: &mut DTable) -> Result<()> {
    table.ensure(n, g.min(r_max(n)), Route::Auto)?;
    Ok(())
}

/// `Σ_{r <= min(g, r_max)} 12^r Σ_ν D_{r,n}(ν) Q_{ν,μ}` for every `μ` of
/// weight `d_{g,n}` accepted by `keep`.
fn schur_weights(
    g: u32,
    n: usize,
    table: &DTable,
    keep: impl Fn(&Partition) -> bool + Sync,
) -> Result<Vec<(Partition, Rat)>> {
    let mut blocks = Vec::new();
    for r in 0..=g.min(r_max(n)) {
        let block = table.get(r, n).ok_or_else(|| domain!("the table lacks the block n={n} r={r}"))?;
        blocks.push((pow(&int(12), r as i64)?, block));
    }
    let d = d_rn(g, n);
    let mus: Vec<Partition> = enumerate(d, n).into_iter().filter(|m| keep(m)).collect();
    mus.into_par_iter()
        .map(|mu| {
            let mut acc = Rat::zero();
            for (w, block) in &blocks {
                let mut s = Rat::zero();
                for (nu, c) in block.iter() {
                    s += c * q_coeff(nu, &mu, n)?;
                }
                acc += w * s;
            }
            Ok((mu, acc))
        })
        .filter(|r: &Result<(Partition, Rat)>| r.as_ref().map_or(true, |(_, c)| !c.is_zero()))
        .collect()
}

/// `⟨τ_{d_1} ⋯ τ_{d_n}⟩_g`, filling missing table blocks on demand. For
/// `n < 3` the recursion is used directly.
pub fn tau(g: u32, d: &[u32], table: &mut DTable) -> Result<Rat> {
    let n = d.len();
    check_admissible(g, n)?;
    if n < 3 {
        return virasoro_tau(g, d);
    }
    ensure_table(g, n, table)?;
    tau_from_table(g, d, table)
}

/// `⟨τ_λ⟩_g = 24^{-g} Σ_{μ >= λ} [Σ_r 12^r Σ_ν D_{r,n}(ν) Q_{ν,μ}] K̃_{μ,λ}`.
pub fn tau_from_table(g: u32, d: &[u32], table: &DTable) -> Result<Rat> {
    let n = d.len();
    check_admissible(g, n)?;
    if n < 3 {
        return Err(domain!("the table formula needs n >= 3"));
    }
    if d.iter().sum::<u32>() != d_rn(g, n) {
        return Ok(Rat::zero());
    }
    let lambda = Partition::from_unsorted(d.to_vec());
    let ctx = hop::context(n);
    let mut acc = Rat::zero();
    for (mu, c) in schur_weights(g, n, table, |mu| mu.dominates(&lambda))? {
        if let Some((_, k)) = ctx.h_inverse_schur(&mu)?.iter().find(|(l, _)| *l == lambda) {
            acc += c * k;
        }
    }
    Ok(acc / pow(&int(24), g as i64)?)
}

/// `A_{g,n}` in the requested basis, filling missing table blocks on demand.
/// For `n < 3` the recursion is used directly.
pub fn a_gn(g: u32, n: usize, basis: Basis, table: &mut DTable) -> Result<SymPoly> {
    check_admissible(g, n)?;
    if n < 3 {
        return a_gn_oracle(g, n)?.to_basis(basis);
    }
    ensure_table(g, n, table)?;
    a_gn_from_table(g, n, table)?.to_basis(basis)
}

/// `A_{g,n} = 24^{-g} Σ_μ [Σ_r 12^r Σ_ν D_{r,n}(ν) Q_{ν,μ}] H^{-1}(s_μ)`, in
/// the monomial basis.
pub fn a_gn_from_table(g: u32, n: usize, table: &DTable) -> Result<SymPoly> {
    check_admissible(g, n)?;
    if n < 3 {
        return Err(domain!("the table formula needs n >= 3"));
    }
    let ctx = hop::context(n);
    let mut out = SymPoly::zero(n, Basis::Monomial);
    let scale = int(1) / pow(&int(24), g as i64)?;
    for (mu, c) in schur_weights(g, n, table, |_| true)? {
        let c = c * &scale;
        for (lam, k) in ctx.h_inverse_schur(&mu)?.iter() {
            out.add_term(lam.clone(), &c * k)?;
        }
    }
    Ok(out)
}

/// `Π_i Γ(μ_i - i + 5/2) / Γ(-i + 5/2)`.
fn gamma_weight(mu: &Partition, n: usize) -> Result<Rat> {
    let mut v = int(1);
    for (i, &m) in mu.padded(n)?.iter().enumerate() {
        v *= gamma_half_ratio(3 - 2 * i as i64, m as i64)?;
    }
    Ok(v)
}

/// `W_{g,n} = (-1)^n dx / (2^{n+1} x^{3/2}) Σ_μ c_μ s_μ(x^{-1})`, stored as
/// the coefficients `c_μ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Correlator {
    pub g: u32,
    pub n: usize,
    pub coefficients: BTreeMap<Partition, Rat>,
}

impl Correlator {
    /// Coefficients `w_λ` of `Σ_{d ~ λ} w_λ Π_i dx_i / x_i^{d_i + 3/2}`, one
    /// per sorted exponent pattern.
    pub fn form_coefficients(&self) -> Result<BTreeMap<Partition, Rat>> {
        let n = self.n;
        let d = d_rn(self.g, n);
        let t = kostka_table(d, n)?;
        let pre = prefactor(n)?;
        let mut out: BTreeMap<Partition, Rat> = BTreeMap::new();
        for (mu, c) in &self.coefficients {
            let m = t.index_of(mu).ok_or_else(|| domain!("s[{mu}] is not of degree {d} in {n} variables"))?;
            for &(l, k) in t.row(m) {
                *out.entry(t.parts[l].clone()).or_insert_with(Rat::zero) += c * int(k as i64) * &pre;
            }
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    /// Inverse of `form_coefficients`.
    pub fn from_form_coefficients(g: u32, n: usize, w: &BTreeMap<Partition, Rat>) -> Result<Correlator> {
        let pre = prefactor(n)?;
        let m = SymPoly::from_terms(n, Basis::Monomial, w.iter().map(|(l, c)| (l.clone(), c / &pre)))?;
        let s = m.to_basis(Basis::Schur)?;
        Ok(Correlator { g, n, coefficients: s.terms().map(|(p, c)| (p.clone(), c.clone())).collect() })
    }

    /// `w_λ = (-2)^{-(2g-2+n)} ⟨τ_λ⟩_g Π_i (2λ_i + 1)!! / 2` from a
    /// monomial-basis `A_{g,n}`.
    pub fn form_from_taus(g: u32, n: usize, a: &SymPoly) -> Result<BTreeMap<Partition, Rat>> {
        let a = a.to_basis(Basis::Monomial)?;
        let chi = 2 * g as i64 - 2 + n as i64;
        let base = pow(&int(-2), -chi)? / pow(&int(2), n as i64)?;
        let mut out = BTreeMap::new();
        for (lam, c) in a.terms() {
            let mut v = c * &base;
            for &l in &lam.padded(n)? {
                v *= double_factorial_odd(2 * l as i64 + 1)?;
            }
            out.insert(lam.clone(), v);
        }
        Ok(out)
    }

    pub fn parse(text: &str) -> Result<Correlator> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let head = lines.next().ok_or_else(|| Error::Parse("empty correlator".into()))?;
        let bad = || Error::Parse(format!("bad correlator header {head:?}"));
        let rest = head.strip_prefix("W g=").ok_or_else(bad)?;
        let (g, n) = rest.split_once(" n=").ok_or_else(bad)?;
        let g: u32 = g.parse().map_err(|_| bad())?;
        let n: usize = n.parse().map_err(|_| bad())?;
        let mut coefficients = BTreeMap::new();
        for line in lines {
            let (mu, c) = line
                .trim()
                .split_once(' ')
                .ok_or_else(|| Error::Parse(format!("bad coefficient line {line:?}")))?;
            let c = parse_rat(c)?;
            if !c.is_zero() {
                coefficients.insert(mu.parse()?, c);
            }
        }
        Ok(Correlator { g, n, coefficients })
    }
}

/// `(-1)^n / 2^{n+1}`.
fn prefactor(n: usize) -> Result<Rat> {
    let v = int(1) / pow(&int(2), n as i64 + 1)?;
    Ok(if n.is_multiple_of(2) { v } else { -v })
}

impl fmt::Display for Correlator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "W g={} n={}", self.g, self.n)?;
        for (mu, c) in &self.coefficients {
            writeln!(f, "{mu} {}", format_rat(c))?;
        }
        Ok(())
    }
}

/// `W_{g,n}`, filling missing table blocks on demand.
pub fn w_gn(g: u32, n: usize, table: &mut DTable) -> Result<Correlator> {
    check_admissible(g, n)?;
    if n < 3 {
        return Err(domain!("correlators are computed for n >= 3"));
    }
    ensure_table(g, n, table)?;
    w_gn_from_table(g, n, table)
}

/// `c_μ = 12^{-g} Π_i Γ(μ_i - i + 5/2)/Γ(-i + 5/2) Σ_r 12^r Σ_ν D_{r,n}(ν) Q_{ν,μ}`.
pub fn w_gn_from_table(g: u32, n: usize, table: &DTable) -> Result<Correlator> {
    check_admissible(g, n)?;
    if n < 3 {
        return Err(domain!("correlators are computed for n >= 3"));
    }
    let scale = int(1) / pow(&int(12), g as i64)?;
    let mut coefficients = BTreeMap::new();
    for (mu, c) in schur_weights(g, n, table, |_| true)? {
        let v = c * &scale * gamma_weight(&mu, n)?;
        if !v.is_zero() {
            coefficients.insert(mu, v);
        }
    }
    Ok(Correlator { g, n, coefficients })
}

/// Compositions of `total` into `parts` non-negative entries.
fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// The genus pieces `g <= g_max` of `W_n`, read off the expansion of
/// `Σ_{r,ν} D_{r,n}(ν) / Π_i Γ(-i + 5/2) · det F(ν, x^{-1})` with
/// `F_{ij} = Σ_k Γ(L_i(ν) - n + 3k + 5/2) / (k! 12^k) · h_{L_i(ν) - (n-j) + 3k}`.
/// Each determinant is expanded term by term, and products of `h` are
/// converted to Schur polynomials through Kostka numbers.
pub fn wn_det_truncated(n: usize, g_max: u32, table: &mut DTable) -> Result<BTreeMap<u32, Correlator>> {
    if n < 3 {
        return Err(domain!("the determinantal form needs n >= 3"));
    }
    ensure_table(g_max, n, table)?;
    let mut out = BTreeMap::new();
    for g in 0..=g_max {
        let d = d_rn(g, n);
        let kt = kostka_table(d, n)?;
        let mut acc: BTreeMap<Partition, Rat> = BTreeMap::new();
        for r in 0..=g.min(r_max(n)) {
            let block = table.get(r, n).ok_or_else(|| domain!("the table lacks the block n={n} r={r}"))?;
            for (nu, dval) in block {
                let l = nu.l_vector(n)?;
                let parts = nu.padded(n)?;
                for ks in compositions(g - r, n) {
                    // row factors Γ(ν_i - i + 3k_i + 5/2) / (Γ(-i + 5/2) k_i! 12^{k_i})
                    let mut row_factor = dval.clone();
                    for i in 0..n {
                        let k = ks[i] as i64;
                        row_factor *= gamma_half_ratio(3 - 2 * i as i64, parts[i] as i64 + 3 * k)?;
                        row_factor /= factorial(k)? * pow(&int(12), k)?;
                    }
                    let mut sigma: Vec<usize> = (0..n).collect();
                    loop {
                        let a: Vec<i64> =
                            (0..n).map(|i| l[i] - n as i64 + (sigma[i] as i64 + 1) + 3 * ks[i] as i64).collect();
                        if a.iter().all(|&x| x >= 0) {
                            let rho = Partition::from_unsorted(a.iter().map(|&x| x as u32).collect());
                            let col = kt.index_of(&rho).ok_or_else(|| domain!("h-product {rho} out of range"))?;
                            let sgn = perm_sign(&sigma);
                            for &(m, k) in kt.col(col) {
                                let v = &row_factor * int(sgn as i64 * k as i64);
                                *acc.entry(kt.parts[m].clone()).or_insert_with(Rat::zero) += v;
                            }
                        }
                        if !next_permutation(&mut sigma) {
                            break;
                        }
                    }
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        out.insert(g, Correlator { g, n, coefficients: acc });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::frac;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn q_examples() {
        assert_eq!(q_coeff(&p("2,1"), &p("2,1"), 3).unwrap(), int(1));
        assert_eq!(q_coeff(&p("-"), &p("1,1,1"), 3).unwrap(), int(1));
        assert_eq!(q_coeff(&p("-"), &p("2,1"), 3).unwrap(), int(-1));
        assert_eq!(q_coeff(&p("-"), &p("3"), 3).unwrap(), int(1));
        assert_eq!(q_coeff(&p("1"), &p("2,1"), 3).unwrap(), int(0));
        assert!(q_coeff(&p("1,1,1,1"), &p("2,2"), 3).is_err());
    }

    #[test]
    fn tau_examples() {
        let mut t = DTable::new();
        assert_eq!(tau(0, &[0, 0, 0], &mut t).unwrap(), int(1));
        assert_eq!(tau(1, &[1], &mut t).unwrap(), frac(1, 24));
        assert_eq!(tau(0, &[1, 0, 0, 0], &mut t).unwrap(), int(1));
        assert_eq!(tau(2, &[4], &mut t).unwrap(), frac(1, 1152));
        assert_eq!(tau(1, &[1, 1, 1], &mut t).unwrap(), frac(1, 12));
        assert_eq!(tau(1, &[3, 0, 0], &mut t).unwrap(), frac(1, 24));
        assert_eq!(tau(1, &[2, 1, 0], &mut t).unwrap(), frac(1, 12));
        assert!(tau(0, &[0, 0], &mut t).is_err());
    }

    #[test]
    fn a_gn_examples() {
        let mut t = DTable::new();
        assert_eq!(a_gn(0, 5, Basis::Elementary, &mut t).unwrap().to_string(), "e[1,1] 1\n");
        let a14 = a_gn(1, 4, Basis::Elementary, &mut t).unwrap();
        let expect = SymPoly::parse("e[1,1,1,1] 1/24\ne[2,1,1] -1/24\ne[3,1] -1/24\ne[4] -1/12", 4).unwrap();
        assert_eq!(a14, expect);
        let a13 = a_gn(1, 3, Basis::Monomial, &mut t).unwrap();
        assert_eq!(a13.coeff(&p("1,1,1")), frac(1, 12));
    }

    #[test]
    fn w03() {
        let mut t = DTable::new();
        let w = w_gn(0, 3, &mut t).unwrap();
        assert_eq!(w.to_string(), "W g=0 n=3\n- 1\n");
        let form = w.form_coefficients().unwrap();
        assert_eq!(form[&p("-")], frac(-1, 16));
        assert_eq!(Correlator::parse(&w.to_string()).unwrap(), w);
    }

    #[test]
    fn w_gn_round_trips() {
        let mut t = DTable::new();
        for (g, n) in [(1, 3), (2, 3), (1, 4), (0, 5)] {
            let w = w_gn(g, n, &mut t).unwrap();
            assert!(w.coefficients.keys().all(|mu| mu.weight() == d_rn(g, n)));
            let form = w.form_coefficients().unwrap();
            let a = a_gn_oracle(g, n).unwrap();
            assert_eq!(form, Correlator::form_from_taus(g, n, &a).unwrap(), "g={g} n={n}");
            assert_eq!(Correlator::from_form_coefficients(g, n, &form).unwrap(), w);
        }
    }

    #[test]
    fn determinant_route_small() {
        let mut t = DTable::new();
        let pieces = wn_det_truncated(3, 2, &mut t).unwrap();
        for g in 0..=2 {
            assert_eq!(pieces[&g], w_gn(g, 3, &mut t).unwrap(), "g={g}");
        }
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(2, 3).len(), 6);
        assert_eq!(compositions(0, 4), vec![vec![0; 4]]);
    }
}
