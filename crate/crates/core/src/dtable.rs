//! The persistent table of Schur coefficients `D_{r,n}(ν)` of `P_{r,n}`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use num_traits::Zero;

use crate::arith::{format_rat, parse_rat_canonical, Rat};
use crate::error::{domain, Error, Result};
use crate::partition::Partition;
use crate::pengine::{bootstrap_p, component, d_rn, direct_p, direct_p_upto, r_max, DIRECT_N_MAX};

/// Largest `r` that `Route::Auto` fills by the truncated direct route when
/// `n > DIRECT_N_MAX`.
pub const DIRECT_PARTIAL_R_MAX: u32 = 3;
use crate::symfunc::{Basis, SymPoly};

/// First line of every table file.
pub const HEADER: &str = "# dtable v1";

/// How missing blocks are filled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Direct for `n <= DIRECT_N_MAX` or `r <= DIRECT_PARTIAL_R_MAX`,
    /// bootstrap otherwise.
    Auto,
    Bootstrap,
    Direct,
}

/// Blocks `(n, r) → {ν → D_{r,n}(ν)}` with no zero entries.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DTable {
    blocks: BTreeMap<(usize, u32), BTreeMap<Partition, Rat>>,
}

impl DTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, r: u32, n: usize) -> bool {
        self.blocks.contains_key(&(n, r))
    }

    pub fn get(&self, r: u32, n: usize) -> Option<&BTreeMap<Partition, Rat>> {
        self.blocks.get(&(n, r))
    }

    /// `P_{r,n}` in the Schur basis, if stored.
    pub fn p_rn(&self, r: u32, n: usize) -> Option<SymPoly> {
        let block = self.get(r, n)?;
        SymPoly::from_terms(n, Basis::Schur, block.iter().map(|(p, c)| (p.clone(), c.clone()))).ok()
    }

    /// Stored blocks as `((n, r), coefficients)`, in file order.
    pub fn blocks(&self) -> impl Iterator<Item = (&(usize, u32), &BTreeMap<Partition, Rat>)> {
        self.blocks.iter()
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Stores `P_{r,n}`, checking its range and degree.
    pub fn insert(&mut self, r: u32, n: usize, p: &SymPoly) -> Result<()> {
        if n < 3 || r > r_max(n) {
            return Err(domain!("no component r = {r} for n = {n}"));
        }
        if p.n_vars() != n {
            return Err(domain!("polynomial in {} variables for n = {n}", p.n_vars()));
        }
        let s = p.to_basis(Basis::Schur)?;
        let d = d_rn(r, n);
        let mut block = BTreeMap::new();
        for (nu, c) in s.terms() {
            if nu.weight() != d {
                return Err(domain!("s[{nu}] has degree {}, expected {d}", nu.weight()));
            }
            block.insert(nu.clone(), c.clone());
        }
        self.blocks.insert((n, r), block);
        Ok(())
    }

    /// Overwrites one coefficient; zero removes it.
    pub fn set_coefficient(&mut self, r: u32, n: usize, nu: Partition, c: Rat) -> Result<()> {
        let block = self.blocks.get_mut(&(n, r)).ok_or_else(|| domain!("no block n={n} r={r}"))?;
        if nu.weight() != d_rn(r, n) || !nu.fits(n) {
            return Err(domain!("s[{nu}] does not belong to the block n={n} r={r}"));
        }
        if c.is_zero() {
            block.remove(&nu);
        } else {
            block.insert(nu, c);
        }
        Ok(())
    }

    /// Fills every missing block `(n, r)` with `r <= min(r_upto, r_max(n))`.
    /// Returns whether anything was added.
    pub fn ensure(&mut self, n: usize, r_upto: u32, route: Route) -> Result<bool> {
        if n < 3 {
            return Err(domain!("tables exist only for n >= 3"));
        }
        let top = r_upto.min(r_max(n));
        let missing: Vec<u32> = (0..=top).filter(|&r| !self.contains(r, n)).collect();
        if missing.is_empty() {
            return Ok(false);
        }
        let (direct, bootstrap): (Vec<u32>, Vec<u32>) = match route {
            Route::Auto if n <= DIRECT_N_MAX => (missing, vec![]),
            Route::Auto => missing.into_iter().partition(|&r| r <= DIRECT_PARTIAL_R_MAX),
            Route::Bootstrap => (vec![], missing),
            Route::Direct => (missing, vec![]),
        };
        if let Some(&top) = direct.iter().max() {
            let p = if n <= DIRECT_N_MAX { direct_p(n)? } else { direct_p_upto(n, top)? };
            for r in direct {
                self.insert(r, n, &component(&p, r))?;
            }
        }
        for r in bootstrap {
            self.insert(r, n, &bootstrap_p(r, n)?)?;
        }
        Ok(true)
    }

    /// The canonical text form.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(HEADER);
        s.push('\n');
        for (i, ((n, r), block)) in self.blocks.iter().enumerate() {
            if i > 0 {
                s.push('\n');
            }
            let _ = writeln!(s, "n={n} r={r}");
            for (nu, c) in block {
                let _ = writeln!(s, "{nu} {}", format_rat(c));
            }
        }
        s
    }

    pub fn parse(text: &str) -> Result<DTable> {
        let mut lines = text.lines();
        if lines.next() != Some(HEADER) {
            return Err(Error::Parse(format!("missing or unsupported header, expected {HEADER:?}")));
        }
        let mut table = DTable::new();
        let mut current: Option<(usize, u32)> = None;
        for (no, line) in lines.enumerate() {
            let bad = |what: &str| Error::Parse(format!("line {}: {what}: {line:?}", no + 2));
            if line.is_empty() {
                current = None;
                continue;
            }
            if let Some(rest) = line.strip_prefix("n=") {
                let (n, r) = rest.split_once(" r=").ok_or_else(|| bad("bad block header"))?;
                let n: usize = n.parse().map_err(|_| bad("bad n"))?;
                let r: u32 = r.parse().map_err(|_| bad("bad r"))?;
                if n < 3 || r > r_max(n) {
                    return Err(bad("block out of range"));
                }
                if table.blocks.insert((n, r), BTreeMap::new()).is_some() {
                    return Err(bad("duplicate block"));
                }
                current = Some((n, r));
                continue;
            }
            let (n, r) = current.ok_or_else(|| bad("coefficient outside a block"))?;
            let (nu, c) = line.split_once(' ').ok_or_else(|| bad("expected `<partition> <rational>`"))?;
            let nu: Partition = nu.parse()?;
            let c = parse_rat_canonical(c)?;
            if nu.weight() != d_rn(r, n) || !nu.fits(n) || c.is_zero() {
                return Err(bad("coefficient does not belong to its block"));
            }
            let block = table.blocks.get_mut(&(n, r)).expect("block just opened");
            if block.insert(nu, c).is_some() {
                return Err(bad("duplicate partition"));
            }
        }
        Ok(table)
    }

    pub fn load(path: &Path) -> Result<DTable> {
        DTable::parse(&std::fs::read_to_string(path)?)
    }

    /// Writes the canonical text through a temporary file and a rename.
    pub fn save(&self, path: &Path) -> Result<()> {
        let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
        let name = path.file_name().ok_or_else(|| domain!("{} is not a file path", path.display()))?;
        let tmp = dir.join(format!(".{}.tmp", name.to_string_lossy()));
        {
            let mut f = std::fs::File::create(&tmp)?;
            f.write_all(self.to_text().as_bytes())?;
            f.sync_all()?;
        }
        std::fs::rename(&tmp, path)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::frac;

    #[test]
    fn small_table_text() {
        let mut t = DTable::new();
        t.ensure(3, 1, Route::Auto).unwrap();
        assert_eq!(t.to_text(), "# dtable v1\nn=3 r=0\n- 1\n\nn=3 r=1\n1,1,1 1/2\n");
        assert!(!t.ensure(3, 5, Route::Bootstrap).unwrap());
        let back = DTable::parse(&t.to_text()).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_text(), t.to_text());
    }

    #[test]
    fn routes_fill_identically() {
        let mut a = DTable::new();
        let mut b = DTable::new();
        a.ensure(4, 3, Route::Direct).unwrap();
        b.ensure(4, 3, Route::Bootstrap).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 4);
        assert_eq!(a.p_rn(3, 4).unwrap().to_string(), "s[3,3,2,2] 1/24\n");
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(DTable::parse("").is_err());
        assert!(DTable::parse("# dtable v2\n").is_err());
        assert!(DTable::parse("# dtable v1\n- 1\n").is_err());
        assert!(DTable::parse("# dtable v1\nn=3 r=2\n").is_err());
        assert!(DTable::parse("# dtable v1\nn=3 r=1\n1,1 1\n").is_err());
        assert!(DTable::parse("# dtable v1\nn=3 r=1\n1,1,1 2/4\n").is_err());
        assert!(DTable::parse("# dtable v1\nn=3 r=1\n1,1,1 0\n").is_err());
        assert!(DTable::parse("# dtable v1\nn=3 r=0\n- 1\n- 1\n").is_err());
        assert_eq!(DTable::parse("# dtable v1\n").unwrap(), DTable::new());
    }

    #[test]
    fn set_coefficient_edits() {
        let mut t = DTable::new();
        t.ensure(3, 1, Route::Auto).unwrap();
        let nu: Partition = "1,1,1".parse().unwrap();
        t.set_coefficient(1, 3, nu.clone(), frac(1, 3)).unwrap();
        assert_eq!(t.get(1, 3).unwrap()[&nu], frac(1, 3));
        t.set_coefficient(1, 3, nu.clone(), Rat::zero()).unwrap();
        assert!(t.get(1, 3).unwrap().is_empty());
        assert!(t.set_coefficient(1, 3, "2".parse().unwrap(), frac(1, 2)).is_err());
    }

    #[test]
    fn save_and_load() {
        let dir = std::env::temp_dir().join(format!("wk-dtable-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("d.txt");
        let mut t = DTable::new();
        t.ensure(4, 2, Route::Auto).unwrap();
        t.save(&path).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        let back = DTable::load(&path).unwrap();
        back.save(&path).unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), bytes);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
