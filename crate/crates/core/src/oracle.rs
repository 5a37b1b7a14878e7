//! Independent ground truth: the Virasoro (DVV) recursion, the closed forms
//! in genus 0 and 1, and truncations of the known `n = 1, 2, 3` series.

use std::collections::BTreeMap;
use std::sync::{LazyLock, PoisonError, RwLock};

use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use crate::arith::{double_factorial_odd, factorial, frac, int, pow, Rat};
use crate::error::{consistency, domain, Result};
use crate::partition::{enumerate, Partition};
use crate::symfunc::{Basis, ExponentPoly, SymPoly};

type Key = (u32, Vec<u32>);

static MEMO: LazyLock<RwLock<FxHashMap<Key, Rat>>> = LazyLock::new(|| RwLock::new(FxHashMap::default()));

/// `d_{g,n} = 3g - 3 + n`.
pub fn dim(g: u32, n: usize) -> i64 {
    3 * g as i64 - 3 + n as i64
}

pub fn check_admissible(g: u32, n: usize) -> Result<()> {
    if n == 0 || 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(domain!("(g, n) = ({g}, {n}) is not stable"));
    }
    Ok(())
}

/// Empties the recursion memo, so the next call starts cold.
pub fn clear_memo() {
    MEMO.write().unwrap_or_else(PoisonError::into_inner).clear();
}

/// `⟨τ_{d_1} ⋯ τ_{d_n}⟩_g` by the Virasoro recursion.
pub fn virasoro_tau(g: u32, d: &[u32]) -> Result<Rat> {
    check_admissible(g, d.len())?;
    let mut key = d.to_vec();
    key.sort_unstable_by(|a, b| b.cmp(a));
    Ok(tau_sorted(g, key))
}

static DFO: LazyLock<Vec<Rat>> =
    LazyLock::new(|| (0..400).map(|i| double_factorial_odd(2 * i - 1).unwrap()).collect());

/// `k!!` for odd `k >= -1`, tabulated.
fn dfo(k: i64) -> Rat {
    let i = ((k + 1) / 2) as usize;
    match DFO.get(i) {
        Some(v) => v.clone(),
        None => double_factorial_odd(k).expect("odd argument >= -1"),
    }
}

/// Zero outside the stable range or off the degree lattice.
fn tau_sorted(g: u32, d: Vec<u32>) -> Rat {
    let n = d.len();
    if n == 0 || 2 * g as i64 - 2 + n as i64 <= 0 {
        return Rat::zero();
    }
    if d.iter().map(|&x| x as i64).sum::<i64>() != dim(g, n) {
        return Rat::zero();
    }
    if g == 0 && n == 3 {
        return int(1);
    }
    if g == 1 && n == 1 {
        return frac(1, 24);
    }
    let key = (g, d);
    if let Some(v) = MEMO.read().unwrap_or_else(PoisonError::into_inner).get(&key) {
        return v.clone();
    }
    let v = recurse(g, &key.1);
    MEMO.write().unwrap_or_else(PoisonError::into_inner).insert(key, v.clone());
    v
}

/// Sorted (descending) multiset with one extra element inserted.
fn with(mut rest: Vec<u32>, x: u32) -> Vec<u32> {
    let pos = rest.iter().position(|&y| y < x).unwrap_or(rest.len());
    rest.insert(pos, x);
    rest
}

fn recurse(g: u32, d: &[u32]) -> Rat {
    // pivot on the largest entry, which is d[0]
    let d1 = d[0] as i64;
    let rest = &d[1..];
    let den = dfo(2 * d1 + 1);
    let mut total = Rat::zero();

    // first term: merge the pivot with each other point
    for i in 0..rest.len() {
        if i > 0 && rest[i] == rest[i - 1] {
            continue;
        }
        let mult = rest.iter().filter(|&&x| x == rest[i]).count() as i64;
        let di = rest[i] as i64;
        if d1 + di - 1 < 0 {
            continue;
        }
        let mut others = rest.to_vec();
        others.remove(i);
        let c = dfo(2 * di + 2 * d1 - 1) / (&den * dfo(2 * di - 1));
        total += c * int(mult) * tau_sorted(g, with(others, (d1 + di - 1) as u32));
    }

    if d1 < 2 {
        return total;
    }
    let half = frac(1, 2);
    for a in 0..=d1 - 2 {
        let b = d1 - 2 - a;
        let c = &half * dfo(2 * a + 1) * dfo(2 * b + 1) / &den;
        // genus-lowering term
        if g >= 1 {
            let inner = with(with(rest.to_vec(), a as u32), b as u32);
            total += &c * tau_sorted(g - 1, inner);
        }
        // separating term over sub-multisets I_1 of the remaining points
        let groups = group(rest);
        let mut choice = vec![0usize; groups.len()];
        loop {
            let mut i1 = Vec::new();
            let mut i2 = Vec::new();
            let mut weight: i64 = 1;
            for (k, &(v, m)) in groups.iter().enumerate() {
                i1.extend(std::iter::repeat_n(v, choice[k]));
                i2.extend(std::iter::repeat_n(v, m - choice[k]));
                weight *= binom(m, choice[k]);
            }
            let s1: i64 = i1.iter().map(|&x| x as i64).sum();
            let num = a + s1 + 2 - i1.len() as i64;
            if num >= 0 && num % 3 == 0 && num / 3 <= g as i64 {
                let g1 = (num / 3) as u32;
                let left = tau_sorted(g1, with(i1, a as u32));
                if !left.is_zero() {
                    let right = tau_sorted(g - g1, with(i2, b as u32));
                    total += &c * int(weight) * left * right;
                }
            }
            if !advance(&mut choice, &groups) {
                break;
            }
        }
    }
    total
}

fn group(sorted: &[u32]) -> Vec<(u32, usize)> {
    let mut out: Vec<(u32, usize)> = Vec::new();
    for &x in sorted {
        match out.last_mut() {
            Some((v, m)) if *v == x => *m += 1,
            _ => out.push((x, 1)),
        }
    }
    out
}

fn advance(choice: &mut [usize], groups: &[(u32, usize)]) -> bool {
    for k in 0..choice.len() {
        if choice[k] < groups[k].1 {
            choice[k] += 1;
            return true;
        }
        choice[k] = 0;
    }
    false
}

fn binom(m: usize, k: usize) -> i64 {
    let mut b: i64 = 1;
    for i in 0..k {
        b = b * (m - i) as i64 / (i + 1) as i64;
    }
    b
}

/// `A_{g,n} = Σ_{|λ| = d_{g,n}} ⟨τ_λ⟩_g m_λ`, from the recursion.
pub fn a_gn_oracle(g: u32, n: usize) -> Result<SymPoly> {
    check_admissible(g, n)?;
    let d = dim(g, n) as u32;
    let mut out = SymPoly::zero(n, Basis::Monomial);
    for lam in enumerate(d, n) {
        let v = virasoro_tau(g, &lam.padded(n)?)?;
        out.add_term(lam, v)?;
    }
    Ok(out)
}

/// `A_{0,n} = e_1^{n-3}`, `n >= 3`.
pub fn closed_a0n(n: usize) -> Result<SymPoly> {
    if n < 3 {
        return Err(domain!("genus-zero closed form needs n >= 3"));
    }
    SymPoly::term(n, Basis::Elementary, Partition::rectangle(1, n - 3), int(1))
}

/// `A_{1,n} = (1/24)(e_1^n - Σ_{k=2}^n (k-2)! e_k e_1^{n-k})`.
pub fn closed_a1n(n: usize) -> Result<SymPoly> {
    if n == 0 {
        return Err(domain!("genus-one closed form needs n >= 1"));
    }
    let c = frac(1, 24);
    let mut out = SymPoly::term(n, Basis::Elementary, Partition::rectangle(1, n), c.clone())?;
    for k in 2..=n {
        let mut parts = vec![k as u32];
        parts.extend(std::iter::repeat_n(1, n - k));
        out.add_term(Partition::from_sorted(parts), -&c * factorial(k as i64 - 2)?)?;
    }
    Ok(out)
}

/// Which closed-form series to expand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Series {
    /// `n = 1`: `e^{p_3/12} / (2 e_1^2)`.
    A1,
    /// `n = 2`: `e^{p_3/12}/2 · Σ_k e_2^k e_1^{k-1} / (2^k (2k+1)!!)`.
    A2,
    /// `n = 3`: the `S_r`, `Δ` double series.
    A3,
}

fn elementary_exp(n: usize, parts: &[u32]) -> ExponentPoly {
    let p = SymPoly::term(n, Basis::Elementary, Partition::from_unsorted(parts.to_vec()), int(1)).unwrap();
    ExponentPoly::from_sympoly(&p).unwrap()
}

fn p3_exp(n: usize) -> ExponentPoly {
    let mut p = ExponentPoly::zero(n);
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 3;
        p.add_term(e, int(1));
    }
    p
}

fn pow_exp(base: &ExponentPoly, k: u32) -> ExponentPoly {
    let mut acc = ExponentPoly::one(base.n);
    for _ in 0..k {
        acc = acc.mul(base);
    }
    acc
}

fn degree_of(e: &[u32]) -> u32 {
    e.iter().sum()
}

/// Keeps monomials of total degree at most `cap`.
fn truncate(p: &ExponentPoly, cap: u32) -> ExponentPoly {
    let mut out = p.clone();
    out.terms.retain(|e, _| degree_of(e) <= cap);
    out
}

fn mul_trunc(a: &ExponentPoly, b: &ExponentPoly, cap: u32) -> ExponentPoly {
    truncate(&truncate(a, cap).mul(&truncate(b, cap)), cap)
}

/// Exact division by a polynomial whose lexicographically leading monomial
/// has coefficient one.
pub(crate) fn div_exact(p: &ExponentPoly, divisor: &ExponentPoly) -> Result<ExponentPoly> {
    let (lead, lc) = divisor
        .terms
        .iter()
        .max_by(|a, b| a.0.cmp(b.0))
        .ok_or_else(|| domain!("division by zero polynomial"))?;
    let lc = lc.clone();
    let lead = lead.clone();
    let mut rest = p.clone();
    let mut q = ExponentPoly::zero(p.n);
    while let Some((top, c)) = rest.terms.iter().max_by(|a, b| a.0.cmp(b.0)).map(|(e, c)| (e.clone(), c.clone())) {
        if top.iter().zip(&lead).any(|(a, b)| a < b) {
            return Err(consistency!("polynomial is not divisible"));
        }
        let shift: Vec<u32> = top.iter().zip(&lead).map(|(a, b)| a - b).collect();
        let coef = c / &lc;
        let mut mono = ExponentPoly::zero(p.n);
        mono.add_term(shift, coef);
        rest = rest.add(&mono.mul(divisor).scale(&int(-1)));
        q = q.add(&mono);
    }
    Ok(q)
}

/// `S_r` from its defining quotient.
pub fn s_r(r: u32) -> Result<ExponentPoly> {
    let n = 3;
    let mut num = ExponentPoly::zero(n);
    for (i, j) in [(0, 1), (1, 2), (0, 2)] {
        let mut x = ExponentPoly::zero(n);
        let mut e = vec![0; n];
        e[i] = r;
        e[j] = r;
        x.add_term(e, int(1));
        let mut s = ExponentPoly::zero(n);
        for k in [i, j] {
            let mut e = vec![0; n];
            e[k] = 1;
            s.add_term(e, int(1));
        }
        num = num.add(&x.mul(&pow_exp(&s, r + 1)));
    }
    div_exact(&num, &elementary_exp(n, &[1]))
}

/// The degree-`d_{g,n}` pieces of the series, rescaled by `2^{1-g}`, for every
/// `g` whose piece has degree at most `degree_cap`. Each piece is `A_{g,n}` in
/// the monomial basis. The unstable genus-zero pieces of `n = 1, 2` are skipped.
pub fn series_reference(which: Series, degree_cap: u32) -> Result<BTreeMap<u32, SymPoly>> {
    let n = match which {
        Series::A1 => 1,
        Series::A2 => 2,
        Series::A3 => 3,
    };
    // e_1^{3-n} A_n is a power series; multiply through and divide at the end
    let shift = 3 - n as u32;
    let cap = degree_cap + shift;
    let p3 = p3_exp(n);
    let mut expo = ExponentPoly::zero(n);
    let mut term = ExponentPoly::one(n);
    for k in 0..=cap / 3 {
        expo = expo.add(&term.scale(&(int(1) / (pow(&int(12), k as i64)? * factorial(k as i64)?))));
        term = mul_trunc(&term, &p3, cap);
    }
    let body = match which {
        Series::A1 => ExponentPoly::one(n),
        Series::A2 => {
            let mut acc = ExponentPoly::zero(n);
            let e21 = elementary_exp(n, &[2, 1]);
            let mut t = ExponentPoly::one(n);
            for k in 0..=cap / 3 {
                let c = pow(&int(2), k as i64)? * double_factorial_odd(2 * k as i64 + 1)?;
                acc = acc.add(&t.scale(&(int(1) / c)));
                t = mul_trunc(&t, &e21, cap);
            }
            acc
        }
        Series::A3 => {
            let delta = elementary_exp(n, &[2, 1]).add(&elementary_exp(n, &[3]).scale(&int(-1)));
            let mut acc = ExponentPoly::zero(n);
            for r in 0..=cap / 3 {
                let sr = s_r(r)?;
                let cr = factorial(r as i64)? / (pow(&int(2), r as i64 + 1)? * double_factorial_odd(2 * r as i64 + 1)?);
                let mut dpow = ExponentPoly::one(n);
                for s in 0..=(cap / 3 - r) {
                    let c = &cr / (pow(&int(4), s as i64)? * factorial((r + s) as i64 + 1)?);
                    acc = acc.add(&mul_trunc(&sr, &dpow, cap).scale(&c));
                    dpow = mul_trunc(&dpow, &delta, cap);
                }
            }
            acc
        }
    };
    let full = mul_trunc(&expo, &body, cap).scale(&frac(1, 2));
    let mut out = BTreeMap::new();
    let mut g = 0u32;
    loop {
        let d = dim(g, n);
        if d > degree_cap as i64 {
            break;
        }
        if d >= 0 && check_admissible(g, n).is_ok() {
            let mut piece = ExponentPoly::zero(n);
            for (e, c) in &full.terms {
                if degree_of(e) as i64 == d + shift as i64 {
                    piece.add_term(e.clone(), c.clone());
                }
            }
            let piece = div_exact(&piece, &pow_exp(&elementary_exp(n, &[1]), shift))?;
            let scale = pow(&int(2), 1 - g as i64)?;
            out.insert(g, piece.scale(&scale).to_monomial()?);
        }
        g += 1;
    }
    Ok(out)
}

/// `⟨τ_{3g-2}⟩_g = 1 / (24^g g!)`.
pub fn one_point(g: u32) -> Result<Rat> {
    if g == 0 {
        return Err(domain!("(0, 1) is not stable"));
    }
    Ok(Rat::one() / (pow(&int(24), g as i64)? * factorial(g as i64)?))
}
