//! The three-way decision procedure for residue classes.
//!
//! A class `a (mod M)` with `M = 2^s m`, `m` odd, is classified as:
//! - containing infinitely many totients, when it contains a multiple of 4,
//!   or when `x^k - x^(k-1) ≡ a (mod m)` is solvable with a unit `x`;
//! - containing exactly one, when it is the all-odd class of 1, or when it is
//!   otherwise totient-free except for `p - 1` with `p` a prime factor of `m`;
//! - totient-free otherwise.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::modmath::{
    self, crt_combine, is_probable_prime_big, mod_pow, period_cap, Factorization,
};
use crate::valueset::{TableStore, ValueSetTable};
use crate::{Error, Result};

/// Largest power-of-two exponent for which the Lemma-1 witness scan over
/// `y ≡ 3 (mod 4)` is still tractable (the scan is exhaustive over
/// `2^(s-2)` candidates).
pub const LIFT_EXP_CAP: u32 = 30;

/// A modulus held as `2^s` times a factored odd part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredModulus {
    two_exp: u32,
    odd: Factorization,
    value: BigUint,
}

impl FactoredModulus {
    pub fn new(two_exp: u32, odd: Factorization) -> Result<Self> {
        if odd.is_even() {
            return Err(Error::invalid("odd part contains the prime 2"));
        }
        let value = odd.value() << two_exp;
        Ok(FactoredModulus { two_exp, odd, value })
    }

    /// Factor a machine-size modulus `M >= 1`.
    pub fn from_u64(m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("modulus must be positive"));
        }
        let s = m.trailing_zeros();
        Ok(FactoredModulus {
            two_exp: s,
            odd: modmath::factorize(m >> s),
            value: BigUint::from(m),
        })
    }

    pub fn two_exp(&self) -> u32 {
        self.two_exp
    }

    pub fn odd_part(&self) -> &Factorization {
        &self.odd
    }

    pub fn odd_value(&self) -> BigUint {
        self.odd.value()
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }
}

impl fmt::Display for FactoredModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.two_exp > 0 {
            parts.push(if self.two_exp == 1 {
                "2".to_string()
            } else {
                format!("2^{}", self.two_exp)
            });
        }
        for &(p, e) in self.odd.factors() {
            parts.push(if e == 1 { p.to_string() } else { format!("{p}^{e}") });
        }
        if parts.is_empty() {
            return write!(f, "1");
        }
        write!(f, "{}", parts.join("*"))
    }
}

/// Hard ceiling on the bit length of a parsed modulus; untrusted input must
/// not be able to force an arbitrarily large allocation.
pub const MAX_PARSED_MODULUS_BITS: f64 = 100_000.0;

/// Grammar: `2^s * p1^e1 * p2 * ...`, `^` optional, whitespace ignored.
impl FromStr for FactoredModulus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::ModulusParse("empty input".into()));
        }
        let mut bits = 0.0f64;
        let mut two_exp: u32 = 0;
        let mut odd_pairs: Vec<(u64, u32)> = Vec::new();
        for token in compact.split('*') {
            if token.is_empty() {
                return Err(Error::ModulusParse(format!("empty factor in {s:?}")));
            }
            let (base_str, exp_str) = match token.split_once('^') {
                Some((b, e)) => (b, Some(e)),
                None => (token, None),
            };
            let base: u64 = base_str
                .parse()
                .map_err(|_| Error::ModulusParse(format!("bad factor {token:?}")))?;
            let exp: u32 = match exp_str {
                Some(e) => e
                    .parse()
                    .map_err(|_| Error::ModulusParse(format!("bad exponent in {token:?}")))?,
                None => 1,
            };
            if exp == 0 {
                return Err(Error::ModulusParse(format!("zero exponent in {token:?}")));
            }
            bits += exp as f64 * (base.max(2) as f64).log2();
            if bits > MAX_PARSED_MODULUS_BITS {
                return Err(Error::ModulusParse(format!(
                    "modulus exceeds {MAX_PARSED_MODULUS_BITS} bits"
                )));
            }
            if base == 2 {
                two_exp = two_exp
                    .checked_add(exp)
                    .ok_or_else(|| Error::ModulusParse("power of two overflows".into()))?;
            } else if base == 1 && exp_str.is_none() {
                // allow a bare 1 so the trivial modulus is expressible
                continue;
            } else if !modmath::is_prime(base) {
                return Err(Error::ModulusParse(format!("{base} is not prime")));
            } else if base % 2 == 0 {
                unreachable!("even primes other than 2 do not exist");
            } else {
                odd_pairs.push((base, exp));
            }
        }
        let odd = Factorization::from_pairs(&odd_pairs)?;
        FactoredModulus::new(two_exp, odd)
    }
}

/// The object being classified: a residue paired with a factored modulus.
#[derive(Debug, Clone)]
pub struct ResidueClass {
    a: BigUint,
    modulus: FactoredModulus,
}

impl ResidueClass {
    pub fn new(a: BigUint, modulus: FactoredModulus) -> Self {
        let a = a % modulus.value();
        ResidueClass { a, modulus }
    }

    pub fn residue(&self) -> &BigUint {
        &self.a
    }

    pub fn modulus(&self) -> &FactoredModulus {
        &self.modulus
    }
}

/// Which rule produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rationale {
    TheoremA,
    Lemma3Solvable,
    Lemma3PrimeMinusOne,
    OddOnlyContainsOne,
    OddNoTotient,
    Lemma3Unsolvable,
}

impl Rationale {
    pub fn as_str(self) -> &'static str {
        match self {
            Rationale::TheoremA => "TheoremA",
            Rationale::Lemma3Solvable => "Lemma3Solvable",
            Rationale::Lemma3PrimeMinusOne => "Lemma3PrimeMinusOne",
            Rationale::OddOnlyContainsOne => "OddOnlyContainsOne",
            Rationale::OddNoTotient => "OddNoTotient",
            Rationale::Lemma3Unsolvable => "Lemma3Unsolvable",
        }
    }
}

/// Constructive data behind an `InfinitelyMany` verdict: a unit `x mod m`
/// and exponent `k` solving the congruence, plus `y ≡ 3 (mod 4)` matching
/// the class modulo `2^s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub x: BigUint,
    pub k: u64,
    pub y: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    InfinitelyMany(Option<Witness>),
    ExactlyOne(BigUint),
    TotientFree,
}

impl Verdict {
    pub fn kind(&self) -> &'static str {
        match self {
            Verdict::InfinitelyMany(_) => "InfinitelyMany",
            Verdict::ExactlyOne(_) => "ExactlyOne",
            Verdict::TotientFree => "TotientFree",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub verdict: Verdict,
    pub rationale: Rationale,
}

/// Witness `y ≡ 3 (mod 4)` with `y^k - y^(k-1) ≡ a (mod 2^s)`.
///
/// Found by scanning `y ∈ {3, 7, ..., 2^s - 1}`; the map is injective on that
/// set, so the scan is exhaustive and must succeed for `a ≡ 2 (mod 4)`.
pub fn lemma1_lift(a: u64, k: u64, s: u32) -> Result<u64> {
    if s == 0 || k == 0 {
        return Err(Error::invalid("lemma1_lift requires s >= 1 and k >= 1"));
    }
    if s > LIFT_EXP_CAP {
        return Err(Error::invalid(format!(
            "power-of-two exponent {s} exceeds the witness scan cap {LIFT_EXP_CAP}"
        )));
    }
    let q = 1u64 << s;
    let a = a % q;
    // the class must consist of numbers ≡ 2 (mod 4); for s = 1 only the
    // parity of that condition is visible
    if (s >= 2 && a % 4 != 2) || (s == 1 && a % 2 != 0) {
        return Err(Error::invalid(format!("a = {a} is not ≡ 2 (mod 4)")));
    }
    let mut y = 3u64;
    loop {
        let v = (mod_pow(y, k, q) + q - mod_pow(y, k - 1, q)) % q;
        if v == a {
            return Ok(y);
        }
        y += 4;
        assert!(y < q.max(4), "Lemma 1 guarantees a witness below 2^s");
    }
}

/// Outcome record of a witness-prime search.
#[derive(Debug, Clone)]
pub struct WitnessPrime {
    pub p: BigUint,
    pub k: u64,
    /// `φ(p^k) mod 2^s m`, re-evaluated exactly; equals the class residue.
    pub totient_residue: BigUint,
    pub candidates_tried: u64,
}

/// Classifier with a shared value-set table store.
#[derive(Debug)]
pub struct Classifier {
    store: Arc<TableStore>,
}

impl Classifier {
    pub fn new(store: Arc<TableStore>) -> Self {
        Classifier { store }
    }

    pub fn store(&self) -> &Arc<TableStore> {
        &self.store
    }

    /// Least `k` (then least CRT-combined unit `x`) solving
    /// `x^(k-1) (x-1) ≡ a (mod m)`, or `None` when no `k >= 1` works.
    ///
    /// The search over `k ∈ [1, n(m)]` is complete by the period contract of
    /// [`period_cap`]. Moduli with a prime power above the enumeration cap
    /// support only the universal routes `k = 1` (when `gcd(a+1, m) = 1`) and
    /// `k = 2, x = 2` (when `a ≡ 2 (mod m)`).
    pub fn solvable_mod_m(&self, a: &BigUint, m: &Factorization) -> Result<Option<(u64, BigUint)>> {
        if m.is_one() {
            return Ok(Some((1, BigUint::zero())));
        }
        if m.is_even() {
            return Err(Error::EvenModulus(m.value_u64().unwrap_or(0)));
        }
        let m_value = m.value();
        let a = a % &m_value;
        if m.prime_powers().any(|q| q > self.store.cap()) {
            // universal routes only
            let a_plus_1 = &a + 1u32;
            if a_plus_1.gcd(&m_value).is_one() {
                return Ok(Some((1, a_plus_1 % &m_value)));
            }
            if a == BigUint::from(2u32) {
                return Ok(Some((2, BigUint::from(2u32))));
            }
            let q = m.prime_powers().find(|&q| q > self.store.cap()).unwrap();
            return Err(Error::EnumerationCap { q, cap: self.store.cap() });
        }
        let qs: Vec<u64> = m.prime_powers().collect();
        let tables: Vec<Arc<ValueSetTable>> =
            qs.iter().map(|&q| self.store.get(q)).collect::<Result<_>>()?;
        let residues: Vec<u64> = qs
            .iter()
            .map(|&q| (&a % q).to_u64().expect("residue below a u64 modulus"))
            .collect();
        let n = period_cap(m)?;
        for k in 1..=n {
            if tables
                .iter()
                .zip(&residues)
                .all(|(t, &aq)| t.contains(k, aq))
            {
                let pairs: Vec<(BigUint, BigUint)> = tables
                    .iter()
                    .zip(&residues)
                    .map(|(t, &aq)| {
                        let x = t
                            .least_witness(k, aq)
                            .expect("row membership guarantees a witness");
                        (BigUint::from(x), BigUint::from(t.q()))
                    })
                    .collect();
                let (x, _) = crt_combine(&pairs)?;
                return Ok(Some((k, x)));
            }
        }
        Ok(None)
    }

    /// Classify a residue class.
    pub fn classify(&self, rc: &ResidueClass) -> Result<Classification> {
        let a = rc.residue();
        let modulus = rc.modulus();
        let s = modulus.two_exp();

        // Theorem A: does the class contain a multiple of 4? The values
        // a + tM cover a modulo gcd(M, 4), so the test is a ≡ 0 (mod 2^min(s,2)).
        let four_part = 1u64 << s.min(2);
        let a_mod_4 = (a % BigUint::from(four_part)).to_u64().unwrap();
        if a_mod_4 == 0 {
            return Ok(Classification {
                verdict: Verdict::InfinitelyMany(None),
                rationale: Rationale::TheoremA,
            });
        }

        if a.is_odd() {
            // M is even here (odd M always hits a multiple of 4 above)
            return Ok(if a.is_one() {
                Classification {
                    verdict: Verdict::ExactlyOne(BigUint::one()),
                    rationale: Rationale::OddOnlyContainsOne,
                }
            } else {
                Classification {
                    verdict: Verdict::TotientFree,
                    rationale: Rationale::OddNoTotient,
                }
            });
        }

        // a ≡ 2 (mod 4) and s >= 2
        debug_assert!(s >= 2 && a_mod_4 == 2);
        match self.solvable_mod_m(a, modulus.odd_part())? {
            Some((k, x)) => {
                let a_pow2 = (a % (BigUint::one() << s)).to_u64().ok_or(Error::invalid(
                    format!("2^{s} exceeds the witness scan range"),
                ))?;
                let y = lemma1_lift(a_pow2, k, s)?;
                Ok(Classification {
                    verdict: Verdict::InfinitelyMany(Some(Witness { x, k, y })),
                    rationale: Rationale::Lemma3Solvable,
                })
            }
            None => {
                // the class contains the totient p - 1 iff p - 1 ≡ a (mod 2^s m),
                // and both sides are reduced, so integer equality decides
                for p in modulus.odd_part().primes() {
                    if BigUint::from(p - 1) == *a {
                        return Ok(Classification {
                            verdict: Verdict::ExactlyOne(BigUint::from(p - 1)),
                            rationale: Rationale::Lemma3PrimeMinusOne,
                        });
                    }
                }
                Ok(Classification {
                    verdict: Verdict::TotientFree,
                    rationale: Rationale::Lemma3Unsolvable,
                })
            }
        }
    }

    /// Scan residue classes of `M` in ascending order of `a`.
    pub fn scan_classes(
        &self,
        modulus: &FactoredModulus,
        filter: ScanFilter,
        class_cap: u64,
    ) -> Result<ScanOutcome> {
        let m_value = modulus.value();
        let (start, step) = match filter {
            ScanFilter::All => (0u64, 1u64),
            ScanFilter::TwoModFour => {
                if modulus.two_exp() < 2 {
                    return Err(Error::invalid(
                        "two-mod-four scan requires 4 to divide the modulus",
                    ));
                }
                (2u64, 4u64)
            }
        };
        let count = (m_value - start) .div_ceil(&BigUint::from(step));
        let count = count
            .to_u64()
            .filter(|&c| c <= class_cap)
            .ok_or_else(|| Error::ScanCap { classes: count.to_string(), cap: class_cap })?;
        let m_u64 = m_value.to_u64().ok_or_else(|| Error::ScanCap {
            classes: m_value.to_string(),
            cap: class_cap,
        })?;

        let verdicts: Vec<ClassVerdict> = (0..count)
            .into_par_iter()
            .map(|i| {
                let a = start + i * step;
                debug_assert!(a < m_u64);
                let rc = ResidueClass::new(BigUint::from(a), modulus.clone());
                let classification = self.classify(&rc)?;
                Ok(ClassVerdict { a, classification })
            })
            .collect::<Result<_>>()?;

        let mut summary = ScanSummary {
            classes: verdicts.len() as u64,
            ..ScanSummary::default()
        };
        for v in &verdicts {
            match v.classification.verdict {
                Verdict::InfinitelyMany(_) => summary.infinitely_many += 1,
                Verdict::ExactlyOne(_) => summary.exactly_one += 1,
                Verdict::TotientFree => summary.totient_free += 1,
            }
        }
        Ok(ScanOutcome { verdicts, summary })
    }
}

/// Which classes of the modulus to scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanFilter {
    All,
    TwoModFour,
}

#[derive(Debug, Clone)]
pub struct ClassVerdict {
    pub a: u64,
    pub classification: Classification,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ScanSummary {
    pub classes: u64,
    pub infinitely_many: u64,
    pub exactly_one: u64,
    pub totient_free: u64,
}

impl ScanSummary {
    pub fn totient_free_fraction(&self) -> f64 {
        if self.classes == 0 {
            0.0
        } else {
            self.totient_free as f64 / self.classes as f64
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScanOutcome {
    pub verdicts: Vec<ClassVerdict>,
    pub summary: ScanSummary,
}

/// Search the progression `p ≡ x (mod m), p ≡ y (mod 2^s)` for its least
/// prime, and re-verify `φ(p^k) ≡ a (mod 2^s m)` exactly.
///
/// Dirichlet guarantees infinitely many such primes but not effectively;
/// `search_bound` caps the number of candidates examined so the operation
/// is total, returning `None` when exhausted.
pub fn witness_prime(
    rc: &ResidueClass,
    witness: &Witness,
    search_bound: u64,
) -> Result<Option<WitnessPrime>> {
    let modulus = rc.modulus();
    let a = rc.residue();
    let s = modulus.two_exp();
    let m = modulus.odd_value();
    let two_s = BigUint::one() << s;

    // consistency of the witness with the class
    if s >= 2 {
        if witness.y % 4 != 3 {
            return Err(Error::invalid("witness y is not ≡ 3 (mod 4)"));
        }
        let q = 1u64 << s;
        let lhs = (mod_pow(witness.y, witness.k, q) + q - mod_pow(witness.y, witness.k - 1, q)) % q;
        if BigUint::from(lhs) != a % &two_s {
            return Err(Error::invalid("witness y does not match the class mod 2^s"));
        }
    }
    if !m.is_one() {
        let xk = witness.x.modpow(&BigUint::from(witness.k), &m);
        let xk1 = witness.x.modpow(&BigUint::from(witness.k - 1), &m);
        if (xk + &m - xk1) % &m != a % &m {
            return Err(Error::invalid("witness x does not match the class mod m"));
        }
        if !witness.x.gcd(&m).is_one() {
            return Err(Error::invalid("witness x is not a unit mod m"));
        }
    }

    let pairs = [
        (witness.x.clone() % &m, m.clone()),
        (BigUint::from(witness.y) % &two_s, two_s),
    ];
    let (c, step) = crt_combine(&pairs)?;

    let mut candidate = if c.is_zero() { step.clone() } else { c };
    let mut tried = 0u64;
    while tried < search_bound {
        tried += 1;
        if candidate > BigUint::one() && is_probable_prime_big(&candidate) {
            let m_full = modulus.value();
            let pk1 = candidate.modpow(&BigUint::from(witness.k - 1), m_full);
            let pk = candidate.modpow(&BigUint::from(witness.k), m_full);
            let totient_residue = (pk + m_full - pk1) % m_full;
            debug_assert_eq!(&totient_residue, rc.residue());
            return Ok(Some(WitnessPrime {
                p: candidate,
                k: witness.k,
                totient_residue,
                candidates_tried: tried,
            }));
        }
        candidate += &step;
    }
    Ok(None)
}
