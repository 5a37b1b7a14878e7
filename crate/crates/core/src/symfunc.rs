//! Symmetric polynomials in a fixed number of variables, in the monomial,
//! elementary and Schur bases, with exact base change.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, LazyLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use crate::arith::{format_rat, int, parse_rat, Rat};
use crate::error::{consistency, domain, Error, Result};
use crate::memo::Memo;
use crate::partition::{enumerate, Partition};

/// Basis tag of a [`SymPoly`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    Monomial,
    Elementary,
    Schur,
}

impl Basis {
    pub fn letter(self) -> char {
        match self {
            Basis::Monomial => 'm',
            Basis::Elementary => 'e',
            Basis::Schur => 's',
        }
    }

    pub fn from_letter(c: char) -> Option<Basis> {
        match c {
            'm' => Some(Basis::Monomial),
            'e' => Some(Basis::Elementary),
            's' => Some(Basis::Schur),
            _ => None,
        }
    }
}

impl std::str::FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "monomial" | "m" => Ok(Basis::Monomial),
            "elementary" | "e" => Ok(Basis::Elementary),
            "schur" | "s" => Ok(Basis::Schur),
            _ => Err(Error::Parse(format!("unknown basis {s:?}"))),
        }
    }
}

/// A sparse linear combination of basis elements indexed by partitions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymPoly {
    n: usize,
    basis: Basis,
    terms: BTreeMap<Partition, Rat>,
}

fn valid_index(n: usize, basis: Basis, lambda: &Partition) -> bool {
    match basis {
        Basis::Elementary => lambda.largest() as usize <= n,
        _ => lambda.fits(n),
    }
}

impl SymPoly {
    pub fn zero(n: usize, basis: Basis) -> Self {
        SymPoly { n, basis, terms: BTreeMap::new() }
    }

    /// The constant `1`; in every basis it is the element indexed by `∅`.
    pub fn one(n: usize, basis: Basis) -> Self {
        let mut p = Self::zero(n, basis);
        p.terms.insert(Partition::empty(), int(1));
        p
    }

    pub fn term(n: usize, basis: Basis, lambda: Partition, c: Rat) -> Result<Self> {
        let mut p = Self::zero(n, basis);
        p.add_term(lambda, c)?;
        Ok(p)
    }

    pub fn from_terms(
        n: usize,
        basis: Basis,
        terms: impl IntoIterator<Item = (Partition, Rat)>,
    ) -> Result<Self> {
        let mut p = Self::zero(n, basis);
        for (lambda, c) in terms {
            p.add_term(lambda, c)?;
        }
        Ok(p)
    }

    /// Adds `c` times the basis element `lambda`.
    pub fn add_term(&mut self, lambda: Partition, c: Rat) -> Result<()> {
        if !valid_index(self.n, self.basis, &lambda) {
            return Err(domain!(
                "{}[{lambda}] is not a basis element in {} variables",
                self.basis.letter(),
                self.n
            ));
        }
        self.add_unchecked(lambda, c);
        Ok(())
    }

    pub(crate) fn add_unchecked(&mut self, lambda: Partition, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(lambda) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub(crate) fn from_map(n: usize, basis: Basis, map: FxHashMap<Partition, Rat>) -> Self {
        let terms = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        SymPoly { n, basis, terms }
    }

    pub fn n_vars(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    /// Terms in canonical (reverse-lexicographic) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, lambda: &Partition) -> Rat {
        self.terms.get(lambda).cloned().unwrap_or_else(Rat::zero)
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

    /// Total degrees present, ascending.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(Partition::weight).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// The homogeneous component of degree `d`.
    pub fn component(&self, d: u32) -> SymPoly {
        SymPoly {
            n: self.n,
            basis: self.basis,
            terms: self
                .terms
                .iter()
                .filter(|(l, _)| l.weight() == d)
                .map(|(l, c)| (l.clone(), c.clone()))
                .collect(),
        }
    }

    /// Keeps only the components of degree at most `d`.
    pub fn truncate_degree(&self, d: u32) -> SymPoly {
        SymPoly {
            n: self.n,
            basis: self.basis,
            terms: self
                .terms
                .iter()
                .filter(|(l, _)| l.weight() <= d)
                .map(|(l, c)| (l.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> SymPoly {
        if c.is_zero() {
            return Self::zero(self.n, self.basis);
        }
        SymPoly {
            n: self.n,
            basis: self.basis,
            terms: self.terms.iter().map(|(l, v)| (l.clone(), v * c)).collect(),
        }
    }

    fn check_compatible(&self, other: &SymPoly) -> Result<()> {
        if self.n != other.n {
            return Err(domain!("mixed variable counts {} and {}", self.n, other.n));
        }
        Ok(())
    }

    /// Sum, expressed in the basis of `self`.
    pub fn add(&self, other: &SymPoly) -> Result<SymPoly> {
        self.check_compatible(other)?;
        let other = other.to_basis(self.basis)?;
        let mut out = self.clone();
        for (l, c) in other.terms {
            out.add_unchecked(l, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SymPoly) -> Result<SymPoly> {
        self.add(&other.scale(&int(-1)))
    }

    /// The same polynomial expressed in `target`.
    pub fn to_basis(&self, target: Basis) -> Result<SymPoly> {
        use Basis::*;
        match (self.basis, target) {
            (a, b) if a == b => Ok(self.clone()),
            (Schur, Monomial) => schur_to_monomial(self),
            (Monomial, Schur) => monomial_to_schur(self),
            (Elementary, Schur) => elementary_to_schur(self),
            (Schur, Elementary) => schur_to_elementary(self),
            (Monomial, Elementary) => schur_to_elementary(&monomial_to_schur(self)?),
            (Elementary, Monomial) => schur_to_monomial(&elementary_to_schur(self)?),
            _ => unreachable!(),
        }
    }

    /// Product, expressed in the monomial basis, via explicit expansion.
    pub fn multiply(&self, other: &SymPoly) -> Result<SymPoly> {
        self.check_compatible(other)?;
        ExponentPoly::from_sympoly(self)?
            .mul(&ExponentPoly::from_sympoly(other)?)
            .to_monomial()
    }

    /// Value at a point, via monomial expansion.
    pub fn evaluate(&self, point: &[Rat]) -> Result<Rat> {
        if point.len() != self.n {
            return Err(domain!("point has {} coordinates, expected {}", point.len(), self.n));
        }
        ExponentPoly::from_sympoly(self)?.evaluate(point)
    }

    /// Sets the last variable to zero, giving a polynomial in `n - 1` variables.
    pub fn specialize_last_to_zero(&self) -> Result<SymPoly> {
        if self.n == 0 {
            return Err(domain!("no variable to specialize"));
        }
        let n = self.n;
        let keep = |l: &Partition| match self.basis {
            Basis::Elementary => l.multiplicity(n as u32) == 0,
            _ => l.fits(n - 1),
        };
        Ok(SymPoly {
            n: n - 1,
            basis: self.basis,
            terms: self
                .terms
                .iter()
                .filter(|(l, _)| keep(l))
                .map(|(l, c)| (l.clone(), c.clone()))
                .collect(),
        })
    }

    /// The same polynomial viewed in `m >= n` variables. Only the elementary
    /// basis is stable under this embedding, so the result is elementary.
    pub fn promote(&self, m: usize) -> Result<SymPoly> {
        if m < self.n {
            return Err(domain!("cannot promote from {} to {m} variables", self.n));
        }
        let e = self.to_basis(Basis::Elementary)?;
        Ok(SymPoly { n: m, basis: Basis::Elementary, terms: e.terms })
    }

    /// Multiplies by `p_k = Σ u_i^k` in the Schur basis.
    pub fn mul_power_sum(&self, k: u32) -> Result<SymPoly> {
        let s = self.to_basis(Basis::Schur)?;
        let n = self.n;
        let mut out: FxHashMap<Partition, Rat> = FxHashMap::default();
        for (mu, c) in &s.terms {
            let l = mu.l_vector(n)?;
            for i in 0..n {
                let mut shifted = l.clone();
                shifted[i] += k as i64;
                if let Some((sign, nu)) = Partition::from_l_vector(&shifted) {
                    let e = out.entry(nu).or_insert_with(Rat::zero);
                    if sign > 0 {
                        *e += c;
                    } else {
                        *e -= c;
                    }
                }
            }
        }
        Ok(SymPoly::from_map(n, Basis::Schur, out))
    }

    /// Multiplies by `e_n^k` in the Schur basis.
    pub fn mul_en_power(&self, k: u32) -> Result<SymPoly> {
        let s = self.to_basis(Basis::Schur)?;
        let mut out = SymPoly::zero(self.n, Basis::Schur);
        for (mu, c) in s.terms {
            out.terms.insert(mu.add_columns(k, self.n)?, c);
        }
        Ok(out)
    }

    /// Exact division by `e_n^k`; `None` when not divisible.
    pub fn div_en_power(&self, k: u32) -> Result<Option<SymPoly>> {
        let s = self.to_basis(Basis::Schur)?;
        let mut out = SymPoly::zero(self.n, Basis::Schur);
        for (mu, c) in s.terms {
            match mu.remove_columns(k, self.n) {
                Some(nu) => {
                    out.terms.insert(nu, c);
                }
                None => return Ok(None),
            }
        }
        Ok(Some(out))
    }

    /// Parses the line-oriented textual form. The empty text and `0` give zero
    /// in the Schur basis.
    pub fn parse(text: &str, n: usize) -> Result<SymPoly> {
        let mut basis = None;
        let mut terms = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if line == "0" {
                continue;
            }
            let bad = || Error::Parse(format!("bad term line {line:?}"));
            let (head, coeff) = line.split_once(' ').ok_or_else(bad)?;
            let mut chars = head.chars();
            let b = chars.next().and_then(Basis::from_letter).ok_or_else(bad)?;
            let inner = chars.as_str().strip_prefix('[').and_then(|s| s.strip_suffix(']')).ok_or_else(bad)?;
            if basis.is_some_and(|x| x != b) {
                return Err(Error::Parse("mixed bases".into()));
            }
            basis = Some(b);
            terms.push((inner.parse::<Partition>()?, parse_rat(coeff.trim())?));
        }
        SymPoly::from_terms(n, basis.unwrap_or(Basis::Schur), terms)
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return writeln!(f, "0");
        }
        for (l, c) in &self.terms {
            writeln!(f, "{}[{l}] {}", self.basis.letter(), format_rat(c))?;
        }
        Ok(())
    }
}

/// `⟨p, q⟩` with the Schur polynomials orthonormal.
pub fn schur_inner(p: &SymPoly, q: &SymPoly) -> Result<Rat> {
    p.check_compatible(q)?;
    let p = p.to_basis(Basis::Schur)?;
    let q = q.to_basis(Basis::Schur)?;
    let mut acc = Rat::zero();
    for (l, c) in &p.terms {
        if let Some(d) = q.terms.get(l) {
            acc += c * d;
        }
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Pieri rules on zero-padded shapes

type Shapes = FxHashMap<Vec<u32>, u128>;

fn overflow() -> Error {
    consistency!("tableau count overflowed 128 bits")
}

fn add_count(map: &mut Shapes, key: Vec<u32>, c: u128) -> Result<()> {
    let e = map.entry(key).or_insert(0);
    *e = e.checked_add(c).ok_or_else(overflow)?;
    Ok(())
}

/// Calls `f` on every shape obtained by adding a horizontal strip of size `k`.
fn horizontal_strips(shape: &[u32], k: u32, f: &mut impl FnMut(&[u32]) -> Result<()>) -> Result<()> {
    fn go(
        shape: &[u32],
        cur: &mut Vec<u32>,
        i: usize,
        rest: u32,
        f: &mut impl FnMut(&[u32]) -> Result<()>,
    ) -> Result<()> {
        if i == shape.len() {
            return if rest == 0 { f(cur) } else { Ok(()) };
        }
        let room = if i == 0 { rest } else { (shape[i - 1] - shape[i]).min(rest) };
        for a in (0..=room).rev() {
            cur[i] = shape[i] + a;
            go(shape, cur, i + 1, rest - a, f)?;
        }
        cur[i] = shape[i];
        Ok(())
    }
    let mut cur = shape.to_vec();
    go(shape, &mut cur, 0, k, f)
}

/// Calls `f` on every shape obtained by adding a vertical strip of size `k`.
fn vertical_strips(shape: &[u32], k: u32, f: &mut impl FnMut(&[u32]) -> Result<()>) -> Result<()> {
    fn go(
        shape: &[u32],
        cur: &mut Vec<u32>,
        i: usize,
        rest: u32,
        prev_added: bool,
        f: &mut impl FnMut(&[u32]) -> Result<()>,
    ) -> Result<()> {
        if rest == 0 {
            return f(cur);
        }
        if shape.len() - i < rest as usize {
            return Ok(());
        }
        let can_add = i == 0 || prev_added || shape[i - 1] > shape[i];
        if can_add {
            cur[i] += 1;
            go(shape, cur, i + 1, rest - 1, true, f)?;
            cur[i] -= 1;
        }
        go(shape, cur, i + 1, rest, false, f)
    }
    let mut cur = shape.to_vec();
    go(shape, &mut cur, 0, k, false, f)
}

fn pieri(state: &Shapes, k: u32, vertical: bool) -> Result<Shapes> {
    let mut out = Shapes::default();
    for (shape, &c) in state {
        let mut push = |s: &[u32]| add_count(&mut out, s.to_vec(), c);
        if vertical {
            vertical_strips(shape, k, &mut push)?;
        } else {
            horizontal_strips(shape, k, &mut push)?;
        }
    }
    Ok(out)
}

/// Sparse vector of (partition, nonnegative count).
pub type CountVec = Arc<Vec<(Partition, u128)>>;

static E_PRODUCTS: LazyLock<Memo<(Partition, usize), CountVec>> = LazyLock::new(Memo::new);

/// Schur expansion of `e_ν` in `n` variables: `Σ_μ K_{μ^T,ν} s_μ`.
pub fn e_product_schur(nu: &Partition, n: usize) -> Result<CountVec> {
    if nu.largest() as usize > n {
        return Err(domain!("e[{nu}] vanishes identically in {n} variables"));
    }
    E_PRODUCTS.get_or_try_init(&(nu.clone(), n), || {
        let state: Shapes = match nu.parts().split_last() {
            None => [(vec![0; n], 1u128)].into_iter().collect(),
            Some((&last, head)) => {
                let prefix = e_product_schur(&Partition::from_sorted(head.to_vec()), n)?;
                let start: Shapes = prefix.iter().map(|(p, c)| (p.padded(n).unwrap(), *c)).collect();
                pieri(&start, last, true)?
            }
        };
        Ok(Arc::new(sorted_counts(state)))
    })
}

fn sorted_counts(state: Shapes) -> Vec<(Partition, u128)> {
    let mut v: Vec<(Partition, u128)> = state
        .into_iter()
        .filter(|(_, c)| *c != 0)
        .map(|(s, c)| (Partition::from_sorted(s), c))
        .collect();
    v.sort_by(|a, b| a.0.cmp(&b.0));
    v
}

// ---------------------------------------------------------------------------
// Kostka matrices

/// The Kostka matrix on the partitions of `d` with at most `n` rows.
pub struct KostkaTable {
    pub weight: u32,
    pub n: usize,
    /// Partitions in reverse-lexicographic order.
    pub parts: Vec<Partition>,
    index: FxHashMap<Partition, usize>,
    /// `cols[λ]` lists `(μ, K_{μ,λ})`.
    cols: Vec<Vec<(usize, u128)>>,
    /// `rows[μ]` lists `(λ, K_{μ,λ})`.
    rows: Vec<Vec<(usize, u128)>>,
}

impl KostkaTable {
    fn build(d: u32, n: usize) -> Result<KostkaTable> {
        let parts = enumerate(d, n);
        let index: FxHashMap<Partition, usize> =
            parts.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let mut cols = vec![Vec::new(); parts.len()];
        let start: Shapes = [(vec![0u32; n], 1u128)].into_iter().collect();
        let mut prefix = Vec::new();
        // depth-first over content sequences, sharing Pieri products on common prefixes
        fn dfs(
            rest: u32,
            maxp: u32,
            rows_left: usize,
            state: &Shapes,
            prefix: &mut Vec<u32>,
            index: &FxHashMap<Partition, usize>,
            cols: &mut [Vec<(usize, u128)>],
        ) -> Result<()> {
            if rest == 0 {
                let lam = Partition::from_sorted(prefix.clone());
                let mut col: Vec<(usize, u128)> = state
                    .iter()
                    .map(|(s, &c)| (index[&Partition::from_sorted(s.clone())], c))
                    .collect();
                col.sort_unstable();
                cols[index[&lam]] = col;
                return Ok(());
            }
            if rows_left == 0 {
                return Ok(());
            }
            for p in (1..=maxp.min(rest)).rev() {
                if (p as u64) * (rows_left as u64) < rest as u64 {
                    break;
                }
                let next = pieri(state, p, false)?;
                prefix.push(p);
                dfs(rest - p, p, rows_left - 1, &next, prefix, index, cols)?;
                prefix.pop();
            }
            Ok(())
        }
        dfs(d, d, n, &start, &mut prefix, &index, &mut cols)?;
        let mut rows = vec![Vec::new(); parts.len()];
        for (l, col) in cols.iter().enumerate() {
            for &(m, c) in col {
                rows[m].push((l, c));
            }
        }
        Ok(KostkaTable { weight: d, n, parts, index, cols, rows })
    }

    pub fn index_of(&self, lambda: &Partition) -> Option<usize> {
        self.index.get(lambda).copied()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `K_{μ,λ}` by position.
    pub fn entry(&self, mu: usize, lambda: usize) -> u128 {
        let col = &self.cols[lambda];
        col.binary_search_by_key(&mu, |e| e.0).map(|i| col[i].1).unwrap_or(0)
    }

    /// Nonzero `(λ, K_{μ,λ})` for fixed shape `μ`.
    pub fn row(&self, mu: usize) -> &[(usize, u128)] {
        &self.rows[mu]
    }

    /// Nonzero `(μ, K_{μ,λ})` for fixed content `λ`.
    pub fn col(&self, lambda: usize) -> &[(usize, u128)] {
        &self.cols[lambda]
    }
}

static KOSTKA: LazyLock<Memo<(u32, usize), Arc<KostkaTable>>> = LazyLock::new(Memo::new);

/// The memoized Kostka table for weight `d` and at most `n` rows.
pub fn kostka_table(d: u32, n: usize) -> Result<Arc<KostkaTable>> {
    KOSTKA.get_or_try_init(&(d, n), || KostkaTable::build(d, n).map(Arc::new))
}

fn same_weight(a: &Partition, b: &Partition) -> Result<u32> {
    if a.weight() != b.weight() {
        return Err(domain!("partitions {a} and {b} have different weights"));
    }
    Ok(a.weight())
}

/// `K_{μ,λ}`, the number of semistandard tableaux of shape `μ` and content `λ`.
pub fn kostka(mu: &Partition, lambda: &Partition) -> Result<Rat> {
    let d = same_weight(mu, lambda)?;
    let n = mu.len().max(lambda.len());
    let t = kostka_table(d, n)?;
    let (m, l) = (t.index_of(mu).unwrap(), t.index_of(lambda).unwrap());
    Ok(Rat::from_integer(BigInt::from(t.entry(m, l))))
}

/// `S_{λ,μ}`, the entry of the inverse Kostka matrix, defined by
/// `m_λ = Σ_μ S_{λ,μ} s_μ`. Computed by triangular inversion.
pub fn inverse_kostka(lambda: &Partition, mu: &Partition) -> Result<Rat> {
    let d = same_weight(lambda, mu)?;
    let n = mu.len().max(lambda.len());
    let t = kostka_table(d, n)?;
    let row = inverse_kostka_row_triangular(&t, t.index_of(lambda).unwrap());
    Ok(row.get(&t.index_of(mu).unwrap()).cloned().unwrap_or_else(Rat::zero))
}

/// Row `λ` of `K^{-1}` by back substitution: `S_{λ,μ} = -Σ_{μ<κ≤λ} S_{λ,κ} K_{κ,μ}`.
fn inverse_kostka_row_triangular(t: &KostkaTable, lambda: usize) -> BTreeMap<usize, Rat> {
    let mut s: BTreeMap<usize, Rat> = BTreeMap::new();
    s.insert(lambda, int(1));
    for mu in lambda + 1..t.len() {
        let mut acc = Rat::zero();
        for &(kappa, k) in t.col(mu) {
            if kappa != mu {
                if let Some(v) = s.get(&kappa) {
                    acc -= v * Rat::from_integer(BigInt::from(k));
                }
            }
        }
        if !acc.is_zero() {
            s.insert(mu, acc);
        }
    }
    s
}

/// Lexicographic successor of a permutation in place; `false` after the last.
pub(crate) fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Row `λ` of `K^{-1}` in `n` variables by antisymmetrization:
/// `m_λ a_δ = Σ_β a_{β+δ}` over the distinct rearrangements `β` of `λ`.
pub fn monomial_to_schur_row(lambda: &Partition, n: usize) -> Result<Vec<(Partition, i64)>> {
    let mut beta = lambda.padded(n)?;
    beta.sort_unstable();
    let mut acc: FxHashMap<Partition, i64> = FxHashMap::default();
    let mut alpha = vec![0i64; n];
    loop {
        for i in 0..n {
            alpha[i] = beta[i] as i64 + (n - 1 - i) as i64;
        }
        if let Some((sign, mu)) = Partition::from_l_vector(&alpha) {
            *acc.entry(mu).or_insert(0) += sign as i64;
        }
        if !next_permutation(&mut beta) {
            break;
        }
    }
    let mut out: Vec<(Partition, i64)> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// `S_{λ,μ}` from the signed sum over `S_n`:
/// `S_{λ,μ} = (1/z_λ) Σ_σ sgn(σ) ε(λ + σ(δ), μ)`, where `ε` is the sign of the
/// sort taking `λ_i + n - σ(i)` onto `L(μ)` and zero if it does not.
pub fn inverse_kostka_signed(lambda: &Partition, mu: &Partition, n: usize) -> Result<Rat> {
    same_weight(lambda, mu)?;
    let lam = lambda.padded(n)?;
    let target = mu.l_vector(n)?;
    let mut sigma: Vec<usize> = (1..=n).collect();
    let mut total: i64 = 0;
    loop {
        let alpha: Vec<i64> = (0..n).map(|i| lam[i] as i64 + n as i64 - sigma[i] as i64).collect();
        if let Some((s, nu)) = Partition::from_l_vector(&alpha) {
            if nu.l_vector(n)? == target {
                total += (perm_sign(&sigma) * s) as i64;
            }
        }
        if !next_permutation(&mut sigma) {
            break;
        }
    }
    Ok(int(total) / lambda.z_factor(n)?)
}

/// Row `λ` of `K^{-1}` restricted to partitions with at most `n` rows.
pub fn inverse_kostka_row(lambda: &Partition, n: usize) -> Result<Vec<(Partition, Rat)>> {
    if n <= ANTISYM_MAX_N {
        return Ok(monomial_to_schur_row(lambda, n)?.into_iter().map(|(m, s)| (m, int(s))).collect());
    }
    lambda.padded(n)?;
    let t = kostka_table(lambda.weight(), n)?;
    Ok(inverse_kostka_row_triangular(&t, t.index_of(lambda).unwrap())
        .into_iter()
        .map(|(m, s)| (t.parts[m].clone(), s))
        .collect())
}

pub(crate) fn perm_sign(p: &[usize]) -> i32 {
    let mut sign = 1;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                sign = -sign;
            }
        }
    }
    sign
}

// ---------------------------------------------------------------------------
// Base changes

fn schur_to_monomial(p: &SymPoly) -> Result<SymPoly> {
    let n = p.n;
    let mut out: FxHashMap<Partition, Rat> = FxHashMap::default();
    for (mu, c) in &p.terms {
        let t = kostka_table(mu.weight(), n)?;
        let m = t.index_of(mu).unwrap();
        for &(l, k) in t.row(m) {
            *out.entry(t.parts[l].clone()).or_insert_with(Rat::zero) += c * Rat::from_integer(BigInt::from(k));
        }
    }
    Ok(SymPoly::from_map(n, Basis::Monomial, out))
}

/// Largest `n` for which rows of `K^{-1}` come from antisymmetrization rather
/// than back substitution.
const ANTISYM_MAX_N: usize = 8;

fn monomial_to_schur(p: &SymPoly) -> Result<SymPoly> {
    let mut out: FxHashMap<Partition, Rat> = FxHashMap::default();
    for (lam, c) in &p.terms {
        for (mu, s) in inverse_kostka_row(lam, p.n)? {
            *out.entry(mu).or_insert_with(Rat::zero) += c * s;
        }
    }
    Ok(SymPoly::from_map(p.n, Basis::Schur, out))
}

fn elementary_to_schur(p: &SymPoly) -> Result<SymPoly> {
    let n = p.n;
    let mut out: FxHashMap<Partition, Rat> = FxHashMap::default();
    for (nu, c) in &p.terms {
        for (mu, k) in e_product_schur(nu, n)?.iter() {
            *out.entry(mu.clone()).or_insert_with(Rat::zero) += c * Rat::from_integer(BigInt::from(*k));
        }
    }
    Ok(SymPoly::from_map(n, Basis::Schur, out))
}

/// Peels off the leading Schur term `s_μ` against `e_{μ^T} = s_μ + lower`.
fn schur_to_elementary(p: &SymPoly) -> Result<SymPoly> {
    let n = p.n;
    let mut rest = p.terms.clone();
    let mut out = SymPoly::zero(n, Basis::Elementary);
    while let Some((mu, c)) = rest.pop_first() {
        let nu = mu.transpose();
        for (kappa, k) in e_product_schur(&nu, n)?.iter() {
            if *kappa == mu {
                if *k != 1 {
                    return Err(consistency!("leading coefficient of e[{nu}] is {k}"));
                }
                continue;
            }
            let delta = &c * Rat::from_integer(BigInt::from(*k));
            match rest.entry(kappa.clone()) {
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(-delta);
                }
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    *o.get_mut() -= delta;
                    if o.get().is_zero() {
                        o.remove();
                    }
                }
            }
        }
        out.terms.insert(nu, c);
    }
    Ok(out)
}

/// Elementary to monomial by multiplying out the products `e_ν`.
pub fn elementary_to_monomial_direct(p: &SymPoly) -> Result<SymPoly> {
    if p.basis != Basis::Elementary {
        return Err(domain!("expected an elementary-basis polynomial"));
    }
    ExponentPoly::from_elementary(p).to_monomial()
}

/// Monomial to elementary by peeling leading monomials against `e_{λ^T}`.
pub fn monomial_to_elementary_direct(p: &SymPoly) -> Result<SymPoly> {
    if p.basis != Basis::Monomial {
        return Err(domain!("expected a monomial-basis polynomial"));
    }
    let n = p.n;
    let mut rest = p.terms.clone();
    let mut out = SymPoly::zero(n, Basis::Elementary);
    while let Some((lam, c)) = rest.pop_first() {
        let nu = lam.transpose();
        let e = ExponentPoly::from_elementary(&SymPoly::term(n, Basis::Elementary, nu.clone(), int(1))?)
            .to_monomial()?;
        for (kappa, k) in e.terms {
            if kappa == lam {
                continue;
            }
            let v = rest.entry(kappa.clone()).or_insert_with(Rat::zero);
            *v -= &c * k;
            if v.is_zero() {
                rest.remove(&kappa);
            }
        }
        out.terms.insert(nu, c);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Explicit monomial expansions

/// A polynomial as a sparse map from exponent vectors to coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentPoly {
    pub n: usize,
    pub terms: FxHashMap<Vec<u32>, Rat>,
}

impl ExponentPoly {
    pub fn zero(n: usize) -> Self {
        ExponentPoly { n, terms: FxHashMap::default() }
    }

    pub fn one(n: usize) -> Self {
        let mut p = Self::zero(n);
        p.terms.insert(vec![0; n], int(1));
        p
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Rat) {
        let e = self.terms.entry(exps).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &ExponentPoly) -> ExponentPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            *out.terms.entry(e.clone()).or_insert_with(Rat::zero) += c;
        }
        out.terms.retain(|_, v| !v.is_zero());
        out
    }

    pub fn scale(&self, c: &Rat) -> ExponentPoly {
        let mut out = Self::zero(self.n);
        if !c.is_zero() {
            out.terms = self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect();
        }
        out
    }

    pub fn mul(&self, other: &ExponentPoly) -> ExponentPoly {
        let mut out: FxHashMap<Vec<u32>, Rat> = FxHashMap::default();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let e: Vec<u32> = a.iter().zip(b).map(|(i, j)| i + j).collect();
                *out.entry(e).or_insert_with(Rat::zero) += x * y;
            }
        }
        out.retain(|_, v| !v.is_zero());
        ExponentPoly { n: self.n, terms: out }
    }

    /// `m_λ` expanded over the distinct rearrangements of `λ`.
    pub fn monomial(lambda: &Partition, n: usize) -> Result<ExponentPoly> {
        let mut beta = lambda.padded(n)?;
        beta.sort_unstable();
        let mut p = Self::zero(n);
        loop {
            p.terms.insert(beta.clone(), int(1));
            if !next_permutation(&mut beta) {
                break;
            }
        }
        Ok(p)
    }

    pub fn from_sympoly(p: &SymPoly) -> Result<ExponentPoly> {
        if p.basis == Basis::Elementary {
            return Ok(Self::from_elementary(p));
        }
        let m = p.to_basis(Basis::Monomial)?;
        let mut out = Self::zero(p.n);
        for (lam, c) in &m.terms {
            for (e, _) in Self::monomial(lam, p.n)?.terms {
                out.terms.insert(e, c.clone());
            }
        }
        Ok(out)
    }

    fn from_elementary(p: &SymPoly) -> ExponentPoly {
        let n = p.n;
        let mut out = Self::zero(n);
        let mut cache: FxHashMap<u32, ExponentPoly> = FxHashMap::default();
        for (nu, c) in &p.terms {
            let mut acc = Self::one(n);
            for &k in nu.parts() {
                let ek = cache.entry(k).or_insert_with(|| {
                    let mut v = vec![1u32; k as usize];
                    v.resize(n, 0);
                    v.sort_unstable();
                    let mut e = Self::zero(n);
                    loop {
                        e.terms.insert(v.clone(), int(1));
                        if !next_permutation(&mut v) {
                            break;
                        }
                    }
                    e
                });
                acc = acc.mul(ek);
            }
            out = out.add(&acc.scale(c));
        }
        out
    }

    /// Reads off monomial coefficients, checking symmetry.
    pub fn to_monomial(&self) -> Result<SymPoly> {
        let mut out = SymPoly::zero(self.n, Basis::Monomial);
        for (e, c) in &self.terms {
            let mut sorted = e.clone();
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            match self.terms.get(&sorted) {
                Some(d) if d == c => {}
                _ => return Err(consistency!("polynomial is not symmetric at exponent {e:?}")),
            }
            if *e == sorted {
                out.terms.insert(Partition::from_sorted(sorted), c.clone());
            }
        }
        Ok(out)
    }

    pub fn evaluate(&self, point: &[Rat]) -> Result<Rat> {
        if point.len() != self.n {
            return Err(domain!("point has {} coordinates, expected {}", point.len(), self.n));
        }
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for (x, &k) in point.iter().zip(e) {
                v *= num_traits::pow(x.clone(), k as usize);
            }
            acc += v;
        }
        Ok(acc)
    }
}

/// `p_k = m_{(k)}` in `n` variables, in the monomial basis.
pub fn power_sum(k: u32, n: usize) -> SymPoly {
    if k == 0 {
        return SymPoly::one(n, Basis::Monomial).scale(&int(n as i64));
    }
    SymPoly::term(n, Basis::Monomial, Partition::row(k), Rat::one()).unwrap()
}
