//! Brute-force ground truth: a totient sieve, class-membership counting,
//! inverse-phi preimages, and cross-validation against the classifier.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::classifier::{Classifier, FactoredModulus, ScanFilter, Rationale, Verdict, Witness};
use crate::modmath::{self, divisors, is_prime, mod_pow};
use crate::{Error, Result};

/// Default sieve limit.
pub const DEFAULT_SIEVE_LIMIT: u64 = 10_000_000;
/// Memory cap on sieve entries (u32 each, so 8e8 entries is ~3.2 GB).
pub const SIEVE_MEMORY_CAP: u64 = 800_000_000;
/// Default cap on inverse-phi arguments.
pub const DEFAULT_INVERSE_PHI_CAP: u64 = 1_000_000;

/// Exact values of Euler's function for `1 <= n <= limit`.
pub struct TotientSieve {
    limit: u64,
    phi: Vec<u32>,
    attained: OnceLock<Vec<u64>>,
}

impl TotientSieve {
    /// Linear sieve of φ up to `limit`.
    pub fn build(limit: u64) -> Result<Self> {
        Self::build_with_cap(limit, SIEVE_MEMORY_CAP)
    }

    pub fn build_with_cap(limit: u64, cap: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::invalid("sieve limit must be at least 2"));
        }
        if limit > cap {
            return Err(Error::SieveCap { limit, cap });
        }
        let n = limit as usize;
        let mut phi = vec![0u32; n + 1];
        phi[1] = 1;
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..=n {
            if phi[i] == 0 {
                phi[i] = i as u32 - 1;
                primes.push(i as u32);
            }
            for &p in &primes {
                let ip = i * p as usize;
                if ip > n {
                    break;
                }
                if i % p as usize == 0 {
                    phi[ip] = phi[i] * p;
                    break;
                }
                phi[ip] = phi[i] * (p - 1);
            }
        }
        Ok(TotientSieve { limit, phi, attained: OnceLock::new() })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// φ(n) for 1 <= n <= limit.
    pub fn phi(&self, n: u64) -> u32 {
        self.phi[n as usize]
    }

    fn attained_bits(&self) -> &Vec<u64> {
        self.attained.get_or_init(|| {
            let mut bits = vec![0u64; (self.limit as usize + 64) / 64];
            for &v in &self.phi[1..] {
                bits[v as usize / 64] |= 1 << (v % 64);
            }
            bits
        })
    }

    /// Is `v` attained as φ(n) for some n <= limit?
    pub fn is_attained(&self, v: u64) -> bool {
        v <= self.limit && self.attained_bits()[v as usize / 64] >> (v % 64) & 1 == 1
    }

    /// Totient values `≡ a (mod M)` seen in the sieve, ascending.
    pub fn totients_in_class(&self, a: &BigUint, modulus: &BigUint, distinct: bool) -> Vec<u64> {
        let a = a % modulus;
        match modulus.to_u64() {
            Some(m) if m <= self.limit => {
                let a = a.to_u64().unwrap();
                let mut out: Vec<u64> = self.phi[1..]
                    .iter()
                    .map(|&v| v as u64)
                    .filter(|&v| v % m == a)
                    .collect();
                out.sort_unstable();
                if distinct {
                    out.dedup();
                }
                out
            }
            _ => {
                // modulus exceeds every sieve value: membership means v == a
                match a.to_u64() {
                    Some(a64) if self.is_attained(a64) => {
                        let copies = if distinct {
                            1
                        } else {
                            self.phi[1..].iter().filter(|&&v| v as u64 == a64).count()
                        };
                        vec![a64; copies]
                    }
                    _ => Vec::new(),
                }
            }
        }
    }
}

/// Complete preimage set `{ z : φ(z) = v }`, ascending.
///
/// Assembled from prime powers `p^e` with `φ(p^e) | v` and `p - 1 | v`,
/// recursing over strictly increasing primes; complete because φ is
/// multiplicative. Every preimage satisfies `z <= 2 v^2` (from
/// `φ(z) >= sqrt(z/2)`), which the tests re-check.
pub fn inverse_phi(v: u64, cap: u64) -> Result<Vec<u64>> {
    if v == 0 {
        return Err(Error::invalid("phi never takes the value 0"));
    }
    if v > cap {
        return Err(Error::ValueCap { value: v, cap });
    }
    fn rec(v: u64, min_p: u64, out_scale: u64, out: &mut Vec<u64>) {
        if v == 1 {
            out.push(out_scale);
        }
        for d in divisors(v) {
            let p = d + 1;
            if p < min_p || !is_prime(p) {
                continue;
            }
            // prime power p^e contributes φ(p^e) = p^(e-1) (p - 1)
            let mut pe = p;
            let mut contrib = d;
            while v % contrib == 0 {
                rec(v / contrib, p + 1, out_scale * pe, out);
                let Some(next_contrib) = contrib.checked_mul(p) else {
                    break;
                };
                let Some(next_pe) = pe.checked_mul(p) else {
                    break;
                };
                contrib = next_contrib;
                pe = next_pe;
            }
        }
    }
    let mut out = Vec::new();
    rec(v, 2, 1, &mut out);
    out.sort_unstable();
    Ok(out)
}

/// One entry of the candidate scan for the paper's open question.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuestionEntry {
    pub a: u64,
    /// Complete preimage set of `a`; empty means `a` is a nontotient.
    pub preimages: Vec<u64>,
}

/// Values `a ≡ 2 (mod 4)`, `a <= limit`, that are nontotients or totients
/// whose full preimage set is `{p, 2p}` for a prime `p`.
pub fn question_scan(limit: u64, cap: u64) -> Result<Vec<QuestionEntry>> {
    if limit > cap {
        return Err(Error::ValueCap { value: limit, cap });
    }
    let mut out = Vec::new();
    let mut a = 2u64;
    while a <= limit {
        let pre = inverse_phi(a, cap)?;
        let qualifies = match pre.as_slice() {
            [] => true,
            &[p, q] => q == 2 * p && is_prime(p),
            _ => false,
        };
        if qualifies {
            out.push(QuestionEntry { a, preimages: pre });
        }
        a += 4;
    }
    Ok(out)
}

/// How a single class fared against the sieve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassEvidence {
    /// Verdict and sieve agree outright.
    Confirmed,
    /// `InfinitelyMany` class with no sieve hit below the limit; the witness
    /// re-verified algebraically instead.
    UnconfirmedBelowLimit,
    /// Hard failure: the sieve contradicts the verdict.
    Contradiction(String),
}

#[derive(Debug, Clone)]
pub struct ClassReport {
    pub a: u64,
    pub verdict_kind: &'static str,
    pub rationale: Rationale,
    pub sieve_hits: u64,
    pub evidence: ClassEvidence,
}

#[derive(Debug, Clone)]
pub struct CrossValidationReport {
    pub modulus: String,
    pub sieve_limit: u64,
    pub classes: u64,
    pub confirmed: u64,
    pub unconfirmed: u64,
    pub contradictions: Vec<ClassReport>,
    pub per_class: Vec<ClassReport>,
}

impl CrossValidationReport {
    pub fn is_clean(&self) -> bool {
        self.contradictions.is_empty()
    }
}

/// Compare every classifier verdict modulo `M` against sieve evidence.
///
/// Totient-free classes with any sieve hit and `ExactlyOne` classes whose
/// distinct sieve values differ from the claimed value are contradictions.
/// `InfinitelyMany` classes with no hit below the limit are reported as
/// unconfirmed and their witnesses re-verified algebraically.
pub fn cross_validate(
    classifier: &Classifier,
    modulus: &FactoredModulus,
    sieve: &TotientSieve,
    class_cap: u64,
) -> Result<CrossValidationReport> {
    let m = modulus
        .value()
        .to_u64()
        .ok_or_else(|| Error::ScanCap { classes: modulus.value().to_string(), cap: class_cap })?;
    let scan = classifier.scan_classes(modulus, ScanFilter::All, class_cap)?;

    // single pass over the sieve: hit counts plus a capped distinct-value
    // sample per class (3 values suffice to refute any ExactlyOne claim)
    let mut hit_count = vec![0u64; m as usize];
    let mut distinct: Vec<BTreeSet<u64>> = vec![BTreeSet::new(); m as usize];
    for &v in &sieve.phi[1..] {
        let v = v as u64;
        let cls = (v % m) as usize;
        hit_count[cls] += 1;
        if distinct[cls].len() < 3 {
            distinct[cls].insert(v);
        }
    }

    let mut per_class = Vec::with_capacity(scan.verdicts.len());
    let mut confirmed = 0u64;
    let mut unconfirmed = 0u64;
    let mut contradictions = Vec::new();
    for cv in &scan.verdicts {
        let a = cv.a;
        let hits = hit_count[a as usize];
        let evidence = match &cv.classification.verdict {
            Verdict::TotientFree => {
                if hits == 0 {
                    ClassEvidence::Confirmed
                } else {
                    ClassEvidence::Contradiction(format!(
                        "totient-free class has {hits} sieve hits, e.g. {:?}",
                        distinct[a as usize].iter().next()
                    ))
                }
            }
            Verdict::ExactlyOne(v) => match v.to_u64() {
                Some(v64) if v64 <= sieve.limit() => {
                    let seen = &distinct[a as usize];
                    if seen.len() == 1 && seen.contains(&v64) {
                        ClassEvidence::Confirmed
                    } else {
                        ClassEvidence::Contradiction(format!(
                            "exactly-one class claims {{{v64}}} but sieve sees {seen:?}"
                        ))
                    }
                }
                _ => ClassEvidence::UnconfirmedBelowLimit,
            },
            Verdict::InfinitelyMany(witness) => {
                if hits > 0 {
                    ClassEvidence::Confirmed
                } else {
                    match reverify_witness(a, modulus, witness) {
                        Ok(()) => ClassEvidence::UnconfirmedBelowLimit,
                        Err(e) => ClassEvidence::Contradiction(format!(
                            "no sieve hit and witness re-verification failed: {e}"
                        )),
                    }
                }
            }
        };
        let report = ClassReport {
            a,
            verdict_kind: cv.classification.verdict.kind(),
            rationale: cv.classification.rationale,
            sieve_hits: hits,
            evidence: evidence.clone(),
        };
        match evidence {
            ClassEvidence::Confirmed => confirmed += 1,
            ClassEvidence::UnconfirmedBelowLimit => unconfirmed += 1,
            ClassEvidence::Contradiction(_) => contradictions.push(report.clone()),
        }
        per_class.push(report);
    }
    Ok(CrossValidationReport {
        modulus: modulus.to_string(),
        sieve_limit: sieve.limit(),
        classes: scan.summary.classes,
        confirmed,
        unconfirmed,
        contradictions,
        per_class,
    })
}

// Direct modular re-evaluation of an InfinitelyMany claim.
fn reverify_witness(a: u64, modulus: &FactoredModulus, witness: &Option<Witness>) -> Result<()> {
    match witness {
        None => {
            // Theorem A route: the class must contain a multiple of 4
            let four_part = 1u64 << modulus.two_exp().min(2);
            if a % four_part == 0 {
                Ok(())
            } else {
                Err(Error::invalid("class contains no multiple of 4"))
            }
        }
        Some(w) => {
            let m = modulus.odd_value().to_u64().expect("scannable modulus");
            let s = modulus.two_exp();
            let x = (w.x.clone() % m).to_u64().unwrap();
            if m > 1 {
                if modmath::gcd(x, m) != 1 {
                    return Err(Error::invalid("witness x is not a unit"));
                }
                let val = (mod_pow(x, w.k, m) + m - mod_pow(x, w.k - 1, m)) % m;
                if val != a % m {
                    return Err(Error::invalid("witness x fails the congruence mod m"));
                }
            }
            if s >= 1 {
                let q = 1u64 << s;
                if w.y % 4 != 3 {
                    return Err(Error::invalid("witness y is not 3 mod 4"));
                }
                let val = (mod_pow(w.y, w.k, q) + q - mod_pow(w.y, w.k - 1, q)) % q;
                if val != a % q {
                    return Err(Error::invalid("witness y fails the congruence mod 2^s"));
                }
            }
            Ok(())
        }
    }
}
