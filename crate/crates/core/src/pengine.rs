//! The genus-independent polynomials `P_{r,n}`: the bootstrap from known
//! generating polynomials, the direct determinantal route, and related checks.

use std::collections::BTreeMap;
use std::sync::{Arc, LazyLock};

use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use crate::arith::{factorial, frac, int, pow, Rat};
use crate::error::{consistency, domain, Result};
use crate::hop::{self, d_n, HContext};
use crate::laurent::{m_tilde, LaurentPoly, Matrix2};
use crate::memo::Memo;
use crate::oracle::a_gn_oracle;
use crate::partition::{enumerate_bounded, Partition};
use crate::symfunc::{Basis, ExponentPoly, SymPoly};

/// Largest `n` accepted by the direct route.
pub const DIRECT_N_MAX: usize = 5;

/// `(n-1)(n-2)/2`, the index of the top component of `P_n`.
pub fn r_max(n: usize) -> u32 {
    ((n.max(2) - 1) * (n.max(2) - 2) / 2) as u32
}

/// `d_{r,n} = 3r - 3 + n`.
pub fn d_rn(r: u32, n: usize) -> u32 {
    3 * r + n as u32 - 3
}

/// The degree of `P_n`.
pub fn max_degree(n: usize) -> u32 {
    d_rn(r_max(n), n)
}

fn check_n(n: usize) -> Result<()> {
    if n < 3 {
        return Err(domain!("P_n needs n >= 3, got {n}"));
    }
    Ok(())
}

fn check_r(r: u32, n: usize) -> Result<()> {
    check_n(n)?;
    if r > r_max(n) {
        return Err(domain!("r = {r} exceeds the top component {} for n = {n}", r_max(n)));
    }
    Ok(())
}

/// `(-1)^k / (12^k k!)`.
fn exp_p3_coeff(k: u32, sign: i64) -> Result<Rat> {
    let c = pow(&frac(sign, 12), k as i64)? / factorial(k as i64)?;
    Ok(c)
}

struct Bootstrap {
    n: usize,
    ctx: Arc<HContext>,
    h_a: Memo<u32, Arc<SymPoly>>,
}

impl Bootstrap {
    fn h_of_a(&self, g: u32) -> Result<Arc<SymPoly>> {
        self.h_a.get_or_try_init(&g, || Ok(Arc::new(self.ctx.h_apply(&a_gn_oracle(g, self.n)?)?)))
    }

    fn component(&self, r: u32) -> Result<SymPoly> {
        let mut acc = SymPoly::zero(self.n, Basis::Schur);
        for g in 0..=r {
            let k = r - g;
            let c = pow(&int(2), g as i64)? * exp_p3_coeff(k, -1)?;
            let mut t = self.h_of_a(g)?.scale(&c);
            for _ in 0..k {
                t = t.mul_power_sum(3)?;
            }
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }
}

static BOOTSTRAPS: LazyLock<Memo<usize, Arc<Bootstrap>>> = LazyLock::new(Memo::new);

fn bootstrap(n: usize) -> Arc<Bootstrap> {
    BOOTSTRAPS
        .get_or_try_init(&n, || Ok(Arc::new(Bootstrap { n, ctx: hop::context(n), h_a: Memo::new() })))
        .expect("bootstrap construction is infallible")
}

/// `P_{r,n} = Σ_{g ≤ r} 2^g (-p_3/12)^{r-g} / (r-g)! · H(A_{g,n})`, in the
/// Schur basis.
pub fn bootstrap_p(r: u32, n: usize) -> Result<SymPoly> {
    check_r(r, n)?;
    bootstrap(n).component(r)
}

/// The same sum without the range check. Beyond the top component it must
/// vanish, which makes it a consistency probe.
pub fn bootstrap_component(r: u32, n: usize) -> Result<SymPoly> {
    check_n(n)?;
    bootstrap(n).component(r)
}

/// Sorts an exponent vector into strictly decreasing order, returning the
/// permutation sign, or `None` when two entries coincide.
fn sort_strict(e: &[i64]) -> Option<(i32, Vec<i64>)> {
    let mut v = e.to_vec();
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] < v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && v[j - 1] == v[j] {
            return None;
        }
    }
    Some((sign, v))
}

/// `Asym[f] / Δ(u)` in the Schur basis, through `a_{λ+δ} / a_δ = s_λ`.
/// Fails unless the quotient is a polynomial.
fn asym_over_vandermonde(f: &LaurentPoly) -> Result<SymPoly> {
    let n = f.n_vars();
    let mut acc: FxHashMap<Vec<i64>, Rat> = FxHashMap::default();
    for (e, c) in f.terms() {
        if let Some((sign, v)) = sort_strict(e) {
            let slot = acc.entry(v).or_insert_with(Rat::zero);
            if sign > 0 {
                *slot += c;
            } else {
                *slot -= c;
            }
        }
    }
    let mut out = SymPoly::zero(n, Basis::Schur);
    for (v, c) in acc {
        if c.is_zero() {
            continue;
        }
        if v.iter().any(|&x| x < 0 || x % 2 != 0) {
            return Err(consistency!("antisymmetrization leaves the non-polynomial exponent {v:?}/2"));
        }
        let l: Vec<i64> = v.iter().map(|x| x / 2).collect();
        let (_, lambda) = Partition::from_l_vector(&l)
            .ok_or_else(|| consistency!("exponent {l:?} is not a shifted partition"))?;
        out.add_term(lambda, c)?;
    }
    Ok(out)
}

/// `H(f) = e_n^{n-3/2} / (Δ(u) D_n) · Δ(d/du)(√e_n f)`, evaluated literally.
pub fn h_raw(f: &SymPoly) -> Result<SymPoly> {
    let n = f.n_vars();
    if n == 0 {
        return Err(domain!("H needs at least one variable"));
    }
    let mut g = LaurentPoly::from_exponent_poly(&ExponentPoly::from_sympoly(f)?).shift(&vec![1; n]);
    for i in 0..n {
        for j in i + 1..n {
            g = g.diff_pair(i, j);
        }
    }
    // g is already antisymmetric, so the antisymmetrizer only adds a factor n!.
    let g = g.shift(&vec![2 * n as i64 - 3; n]);
    Ok(asym_over_vandermonde(&g)?.scale(&(int(1) / (d_n(n)? * factorial(n as i64)?))))
}

/// `Tr Π_i M̃(u_i)`.
pub fn trace_m_tilde(n: usize) -> LaurentPoly {
    let mut m = Matrix2::identity(n);
    for i in 0..n {
        m = m.mul(&m_tilde(n, i));
    }
    m.trace()
}

/// `Π_i Σ_k (u_i^3/12)^k / k!` up to total degree `cap`.
fn exp_p3_over_12(n: usize, cap: u32) -> Result<LaurentPoly> {
    let mut acc = LaurentPoly::one(n);
    for i in 0..n {
        let mut series = LaurentPoly::zero(n);
        for k in 0..=cap / 3 {
            series = series.add(&LaurentPoly::power(n, i, 6 * k as i64, exp_p3_coeff(k, 1)?));
        }
        acc = acc.mul_truncated(&series, 2 * cap as i64);
    }
    Ok(acc)
}

/// Pairs `i < j` that are not neighbours on the cycle `0, 1, ..., n-1, 0`:
/// the factors left in `Δ(x) / Π_i (x_i - x_{i+1})`.
pub fn non_adjacent_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 2..n {
            if !(i == 0 && j == n - 1) {
                out.push((i, j));
            }
        }
    }
    out
}

/// `P_n` from the determinantal formula.
pub fn direct_p(n: usize) -> Result<SymPoly> {
    direct_p_with_margin(n, 0)
}

/// `direct_p` with every truncation raised by `margin` degrees. Components
/// between the top degree and the raised cap must vanish.
pub fn direct_p_with_margin(n: usize, margin: u32) -> Result<SymPoly> {
    check_n(n)?;
    if n > DIRECT_N_MAX {
        return Err(domain!("the direct route is limited to n <= {DIRECT_N_MAX}"));
    }
    let p = direct_expansion(n, max_degree(n), margin)?;
    if let Some(d) = p.degrees().into_iter().find(|&d| d > max_degree(n)) {
        return Err(consistency!("P_{n} has a component in degree {d}"));
    }
    Ok(p)
}

/// `Σ_{r <= r_upto} P_{r,n}` from the determinantal formula, expanding only
/// up to degree `d_{r_upto,n}`. Any `n >= 3` is accepted.
pub fn direct_p_upto(n: usize, r_upto: u32) -> Result<SymPoly> {
    check_n(n)?;
    let top = d_rn(r_upto.min(r_max(n)), n);
    Ok(direct_expansion(n, top, 0)?.truncate_degree(top))
}

fn direct_expansion(n: usize, dmax: u32, margin: u32) -> Result<SymPoly> {
    let out_cap = dmax + margin;
    // Output degree is the inner degree shifted by n/2.
    let inner_cap = 2 * out_cap as i64 - n as i64;
    let exp_cap = dmax + (n * (n - 1) / 2) as u32 + margin;

    let t = trace_m_tilde(n).shift(&vec![-1; n]);
    let mut f = t.mul_truncated(&exp_p3_over_12(n, exp_cap)?, inner_cap);
    for (i, j) in non_adjacent_pairs(n) {
        f = f.diff_pair(i, j);
    }
    let f = f.shift(&vec![2 * n as i64 - 3; n]);
    let s = asym_over_vandermonde(&f)?.truncate_degree(out_cap);

    let mut acc = SymPoly::zero(n, Basis::Schur);
    let mut term = s;
    let mut k = 0;
    while !term.is_zero() && 3 * k <= exp_cap {
        acc = acc.add(&term.scale(&exp_p3_coeff(k, -1)?))?;
        term = term.mul_power_sum(3)?.truncate_degree(out_cap);
        k += 1;
    }
    let norm = d_n(n)? * int(n as i64) * pow(&int(2), n as i64 - 1)?;
    let p = acc.scale(&(int(1) / norm));

    for d in p.degrees() {
        if !(d + 3 - n as u32).is_multiple_of(3) {
            return Err(consistency!("P_{n} has a component in degree {d}"));
        }
    }
    Ok(p)
}

/// The component of degree `d_{r,n}` of a full `P_n`.
pub fn component(p: &SymPoly, r: u32) -> SymPoly {
    p.component(d_rn(r, p.n_vars()))
}

/// `Σ_{σ cyclic} Tr(Π_i M_{σ^i(1)}) / Π_i (x_i - x_{σ(i)})`.
pub fn cyclic_trace_sum(matrices: &[[[Rat; 2]; 2]], xs: &[Rat]) -> Result<Rat> {
    let n = matrices.len();
    if xs.len() != n || n == 0 {
        return Err(domain!("need one point per matrix"));
    }
    for i in 0..n {
        for j in i + 1..n {
            if xs[i] == xs[j] {
                return Err(domain!("points {i} and {j} coincide"));
            }
        }
    }
    let mul = |a: &[[Rat; 2]; 2], b: &[[Rat; 2]; 2]| -> [[Rat; 2]; 2] {
        let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
        [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
    };
    let mut rest: Vec<usize> = (1..n).collect();
    let mut total = Rat::zero();
    loop {
        // cycle 0 -> rest[0] -> rest[1] -> ... -> 0
        let mut order = rest.clone();
        order.push(0);
        let mut sigma = vec![0; n];
        sigma[0] = order[0];
        for w in order.windows(2) {
            sigma[w[0]] = w[1];
        }
        let mut prod = [[int(1), int(0)], [int(0), int(1)]];
        for &k in &order {
            prod = mul(&prod, &matrices[k]);
        }
        let mut den = Rat::one();
        for i in 0..n {
            den *= &xs[i] - &xs[sigma[i]];
        }
        total += (&prod[0][0] + &prod[1][1]) / den;
        if !crate::symfunc::next_permutation(&mut rest) {
            break;
        }
    }
    Ok(total)
}

/// Whether `cyclic_trace_sum` is unchanged by `M_i → M_i + α_i Id`.
pub fn trace_shift_invariance(matrices: &[[[Rat; 2]; 2]], xs: &[Rat], shifts: &[Rat]) -> Result<bool> {
    if shifts.len() != matrices.len() {
        return Err(domain!("need one shift per matrix"));
    }
    if matrices.len() < 3 {
        return Err(domain!("the invariance is stated for at least three matrices"));
    }
    let shifted: Vec<[[Rat; 2]; 2]> = matrices
        .iter()
        .zip(shifts)
        .map(|(m, a)| [[&m[0][0] + a, m[0][1].clone()], [m[1][0].clone(), &m[1][1] + a]])
        .collect();
    Ok(cyclic_trace_sum(matrices, xs)? == cyclic_trace_sum(&shifted, xs)?)
}

/// `Q_{r,n}` in `P_{r,n} = e_1 P_{r,n-1} + e_n Q_{r,n}`; fails when the
/// difference is not divisible by `e_n`.
pub fn recursion_remainder(p_n: &SymPoly, p_prev: &SymPoly) -> Result<SymPoly> {
    let n = p_n.n_vars();
    if p_prev.n_vars() + 1 != n {
        return Err(domain!("expected polynomials in {} and {} variables", n, n - 1));
    }
    let prev = p_prev.promote(n)?;
    let mut shifted = SymPoly::zero(n, Basis::Elementary);
    for (nu, c) in prev.terms() {
        let mut parts = nu.parts().to_vec();
        parts.push(1);
        shifted.add_term(Partition::from_unsorted(parts), c.clone())?;
    }
    let diff = p_n.to_basis(Basis::Schur)?.sub(&shifted)?;
    diff.div_en_power(1)?.ok_or_else(|| consistency!("P_{{r,{n}}} - e_1 P_{{r,{}}} is not divisible by e_{n}", n - 1))
}

/// Coefficients `C(ν)` of `Σ C(ν) e_ν e_1^{d - |ν|}` with all `ν_i >= 2`.
pub fn elementary_coefficients(p: &SymPoly) -> Result<BTreeMap<Partition, Rat>> {
    let e = p.to_basis(Basis::Elementary)?;
    let mut out = BTreeMap::new();
    for (lam, c) in e.terms() {
        out.insert(lam.without_parts(1), c.clone());
    }
    Ok(out)
}

/// Partitions `ν` of length exactly `r` with parts in `[2, n]` and
/// `|ν| <= d_{r,n}`: the slots that the length bound leaves open in `P_{r,n}`.
pub fn allowed_partitions(r: u32, n: usize) -> Vec<Partition> {
    let d = d_rn(r, n);
    let mut out = Vec::new();
    for w in 0..=d {
        out.extend(enumerate_bounded(w, r as usize, 2, n as u32).into_iter().filter(|p| p.len() == r as usize));
    }
    out
}
