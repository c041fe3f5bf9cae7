//! Attainable-value tables for prime powers.
//!
//! For an odd prime power `q` and `j = (k-1) mod λ(q)`, row `j` records which
//! residues `a` are of the form `x^j (x-1) mod q` with `x` a unit. Rows are
//! built lazily (building all `λ(q)` rows of a large `q` up front would cost
//! `O(q λ(q))`) and are immutable once built, so tables can be shared across
//! threads; the observable behavior equals eager construction.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use crate::modmath::{self, carmichael_lambda, is_prime, mod_mul, mod_pow};
use crate::{Error, Result};

/// Default cap on directly enumerated prime powers.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

// Hard ceiling applied when decoding untrusted cache bytes: the row-shell
// allocation is O(lambda) <= O(q), so q must be bounded before allocating.
const DECODE_Q_LIMIT: u64 = DEFAULT_ENUMERATION_CAP;

/// Fixed-size bitset over `[0, len)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitRow {
    len: u64,
    words: Box<[u64]>,
}

impl BitRow {
    fn zeroed(len: u64) -> Self {
        BitRow {
            len,
            words: vec![0u64; len.div_ceil(64) as usize].into_boxed_slice(),
        }
    }

    fn set(&mut self, i: u64) {
        self.words[(i / 64) as usize] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: u64) -> bool {
        i < self.len && self.words[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn iter_set(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.len).filter(move |&i| self.contains(i))
    }
}

/// Lazily materialized value-set table for one odd prime power.
#[derive(Debug)]
pub struct ValueSetTable {
    q: u64,
    p: u64,
    e: u32,
    lambda: u64,
    rows: Vec<OnceLock<BitRow>>,
}

impl ValueSetTable {
    /// Build the table shell for `q = p^e`, `p` odd, `q <= cap`.
    pub fn build(q: u64, cap: u64) -> Result<Self> {
        if q > cap {
            return Err(Error::EnumerationCap { q, cap });
        }
        let f = modmath::factorize(q);
        let &[(p, e)] = f.factors() else {
            return Err(Error::invalid(format!("{q} is not a prime power")));
        };
        if p == 2 {
            return Err(Error::invalid(format!("{q} is even; tables cover odd prime powers")));
        }
        let lambda = carmichael_lambda(p, e);
        let mut rows = Vec::with_capacity(lambda as usize);
        rows.resize_with(lambda as usize, OnceLock::new);
        Ok(ValueSetTable { q, p, e, lambda, rows })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.e
    }

    pub fn lambda(&self) -> u64 {
        self.lambda
    }

    /// Row for exponent class `j`, built on first use.
    pub fn row(&self, j: u64) -> &BitRow {
        let j = j % self.lambda;
        self.rows[j as usize].get_or_init(|| {
            let mut row = BitRow::zeroed(self.q);
            for x in (1..self.q).filter(|x| x % self.p != 0) {
                row.set(mod_mul(mod_pow(x, j, self.q), x - 1, self.q));
            }
            row
        })
    }

    /// Is `a` of the form `x^(k-1) (x-1) mod q` for some unit `x`?
    pub fn contains(&self, k: u64, a: u64) -> bool {
        debug_assert!(k >= 1);
        self.row((k - 1) % self.lambda).contains(a % self.q)
    }

    /// Least unit witness `x` with `x^(k-1) (x-1) ≡ a (mod q)`, if any.
    pub fn least_witness(&self, k: u64, a: u64) -> Option<u64> {
        let a = a % self.q;
        let j = (k - 1) % self.lambda;
        (1..self.q)
            .filter(|x| x % self.p != 0)
            .find(|&x| mod_mul(mod_pow(x, j, self.q), x - 1, self.q) == a)
    }

    /// Number of distinct attainable values in exponent class `j`.
    pub fn distinct_count(&self, j: u64) -> u64 {
        self.row(j).count()
    }

    /// Indices of the rows materialized so far, ascending.
    pub fn materialized_rows(&self) -> Vec<u64> {
        (0..self.lambda)
            .filter(|&j| self.rows[j as usize].get().is_some())
            .collect()
    }

    /// Serialize the materialized rows; deterministic for a given row set.
    pub fn encode(&self) -> Vec<u8> {
        let built = self.materialized_rows();
        let wpr = self.q.div_ceil(64) as usize;
        let mut out = Vec::with_capacity(44 + built.len() * (8 + wpr * 8));
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        out.extend_from_slice(&self.q.to_le_bytes());
        out.extend_from_slice(&self.p.to_le_bytes());
        out.extend_from_slice(&self.e.to_le_bytes());
        out.extend_from_slice(&self.lambda.to_le_bytes());
        out.extend_from_slice(&(built.len() as u64).to_le_bytes());
        for j in built {
            out.extend_from_slice(&j.to_le_bytes());
            for w in self.rows[j as usize].get().unwrap().words.iter() {
                out.extend_from_slice(&w.to_le_bytes());
            }
        }
        out
    }

    /// Decode a cached table. Input is untrusted: every structural invariant
    /// is checked before any allocation proportional to the declared sizes.
    pub fn decode(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes, pos: 0 };
        let magic = r.take(8)?;
        if magic != MAGIC {
            return Err(Error::CacheFormat("bad magic".into()));
        }
        let version = r.u32()?;
        if version != FORMAT_VERSION {
            return Err(Error::CacheFormat(format!("unsupported version {version}")));
        }
        let q = r.u64()?;
        let p = r.u64()?;
        let e = r.u32()?;
        let lambda = r.u64()?;
        let row_count = r.u64()?;
        if q < 3 || q > DECODE_Q_LIMIT {
            return Err(Error::CacheFormat(format!("q = {q} out of range")));
        }
        if p < 3 || p % 2 == 0 || e == 0 || !is_prime(p) {
            return Err(Error::CacheFormat(format!("bad prime power base {p}^{e}")));
        }
        if p.checked_pow(e) != Some(q) {
            return Err(Error::CacheFormat(format!("{p}^{e} != {q}")));
        }
        if lambda != carmichael_lambda(p, e) {
            return Err(Error::CacheFormat("lambda mismatch".into()));
        }
        if row_count > lambda {
            return Err(Error::CacheFormat("more rows than exponent classes".into()));
        }
        let wpr = q.div_ceil(64);
        let need = row_count
            .checked_mul(8 + wpr * 8)
            .ok_or_else(|| Error::CacheFormat("size overflow".into()))?;
        if r.remaining() as u64 != need {
            return Err(Error::CacheFormat(format!(
                "payload length {} != expected {need}",
                r.remaining()
            )));
        }
        let mut rows = Vec::with_capacity(lambda as usize);
        rows.resize_with(lambda as usize, OnceLock::new);
        let mut prev: Option<u64> = None;
        for _ in 0..row_count {
            let j = r.u64()?;
            if j >= lambda || prev.is_some_and(|pj| pj >= j) {
                return Err(Error::CacheFormat("row indices not strictly increasing".into()));
            }
            prev = Some(j);
            let mut words = vec![0u64; wpr as usize];
            for w in words.iter_mut() {
                *w = r.u64()?;
            }
            if q % 64 != 0 && words[wpr as usize - 1] >> (q % 64) != 0 {
                return Err(Error::CacheFormat("set bits beyond q".into()));
            }
            let row = BitRow { len: q, words: words.into_boxed_slice() };
            if row.count() == 0 {
                return Err(Error::CacheFormat(format!("row {j} is empty")));
            }
            if j == 0 && !row.contains(0) {
                return Err(Error::CacheFormat("row 0 must contain 0 (x = 1)".into()));
            }
            rows[j as usize].set(row).expect("indices are distinct");
        }
        Ok(ValueSetTable { q, p, e, lambda, rows })
    }
}

const MAGIC: &[u8; 8] = b"VSETTBL\0";
const FORMAT_VERSION: u32 = 1;

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.bytes.len() - self.pos < n {
            return Err(Error::CacheFormat("truncated input".into()));
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn remaining(&self) -> usize {
        self.bytes.len() - self.pos
    }
}

/// Shared table store with an optional on-disk cache.
///
/// Tables come out behind `Arc` and are safe for concurrent readers.
#[derive(Debug)]
pub struct TableStore {
    cap: u64,
    cache_dir: Option<PathBuf>,
    tables: Mutex<HashMap<u64, Arc<ValueSetTable>>>,
}

impl TableStore {
    pub fn new(cap: u64) -> Self {
        TableStore { cap, cache_dir: None, tables: Mutex::new(HashMap::new()) }
    }

    pub fn with_cache_dir(cap: u64, dir: impl AsRef<Path>) -> Self {
        TableStore {
            cap,
            cache_dir: Some(dir.as_ref().to_path_buf()),
            tables: Mutex::new(HashMap::new()),
        }
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    fn cache_path(&self, q: u64) -> Option<PathBuf> {
        self.cache_dir.as_ref().map(|d| d.join(format!("q{q}.vstbl")))
    }

    /// Fetch (or build) the table for prime power `q`.
    pub fn get(&self, q: u64) -> Result<Arc<ValueSetTable>> {
        let mut tables = self.tables.lock().unwrap();
        if let Some(t) = tables.get(&q) {
            return Ok(Arc::clone(t));
        }
        let table = match self.cache_path(q) {
            Some(path) if path.is_file() => {
                let t = ValueSetTable::decode(&std::fs::read(&path)?)?;
                if t.q() != q {
                    return Err(Error::CacheFormat(format!(
                        "cache file {} holds q = {}",
                        path.display(),
                        t.q()
                    )));
                }
                t
            }
            _ => ValueSetTable::build(q, self.cap)?,
        };
        let table = Arc::new(table);
        tables.insert(q, Arc::clone(&table));
        Ok(table)
    }

    /// Write every in-memory table back to the cache directory.
    pub fn flush(&self) -> Result<()> {
        let Some(dir) = &self.cache_dir else {
            return Ok(());
        };
        std::fs::create_dir_all(dir)?;
        let tables = self.tables.lock().unwrap();
        for (q, table) in tables.iter() {
            std::fs::write(self.cache_path(*q).unwrap(), table.encode())?;
        }
        Ok(())
    }
}

/// Collision statistics for `x^k - x^(k-1) mod r` over units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CollisionCount {
    /// Ordered pairs `x != y` in `[1, r)` with equal values, by brute force.
    pub ordered_pairs: u64,
    /// Distinct values attained.
    pub distinct: u64,
}

/// Count solutions of `x^k - x^(k-1) ≡ y^k - y^(k-1) (mod r)` by brute force.
///
/// Requires `r` prime `>= 5` and `2 <= k <= r-2`, the range where the closed
/// form `r - gcd(r-1, k) - gcd(r-1, k-1)` applies.
pub fn collision_count(r: u64, k: u64) -> Result<CollisionCount> {
    if r < 5 || !is_prime(r) {
        return Err(Error::invalid(format!("{r} is not a prime >= 5")));
    }
    if !(2..=r - 2).contains(&k) {
        return Err(Error::invalid(format!("k = {k} outside 2..={}", r - 2)));
    }
    let mut per_value = vec![0u64; r as usize];
    for x in 1..r {
        let v = mod_mul(mod_pow(x, k - 1, r), x - 1, r);
        per_value[v as usize] += 1;
    }
    let ordered_pairs = per_value.iter().map(|&c| c * c.saturating_sub(1)).sum();
    let distinct = per_value.iter().filter(|&&c| c > 0).count() as u64;
    Ok(CollisionCount { ordered_pairs, distinct })
}
