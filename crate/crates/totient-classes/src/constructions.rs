//! Machinery for moduli whose classes are mostly totient-free.
//!
//! An instance bundles disjoint odd prime lists `p_i`, `q_j`, `r_l` where the
//! `p`/`q` products `Π (1 - 1/p)` sit below `ε/4`, every `r - 1` is divisible
//! by `D = lcm(p_i - 1, q_j - 1)` and is smooth, and `m` is the product of
//! all three lists. For a class with `a ≡ 1 (mod p_i)` and `a ≡ -1 (mod q_j)`,
//! any solution `(k, x)` of the congruence forces `k ≢ 0 (mod p_i - 1)` and
//! `k ≢ 1 (mod q_j - 1)`, hence the same exclusions modulo every `r_l - 1`;
//! the exclusion check verifies this exhaustively at desk scale.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::classifier::{Classifier, FactoredModulus, ScanFilter};
use crate::modmath::{self, gcd, is_smooth, lcm_checked, mod_mul, primes_up_to, Factorization};
use crate::{Error, Result};

/// Default smoothness exponent for shifted primes.
pub const DEFAULT_THETA: f64 = 0.45;
/// Default cap on the length of each greedy prime list.
pub const DEFAULT_LIST_CAP: usize = 64;

/// Prime families satisfying the product and smoothness conditions.
#[derive(Debug, Clone)]
pub struct Theorem2Instance {
    pub p_list: Vec<u64>,
    pub q_list: Vec<u64>,
    pub r_list: Vec<u64>,
    /// `lcm(p - 1, q - 1)` over both leading lists.
    pub d: u64,
    /// Search bound for the `r` primes.
    pub y: u64,
    pub theta: f64,
    /// Product of all primes in the instance.
    pub m: BigUint,
    /// `lcm(r - 1)` over the `r` list (equals `d` when the list is empty).
    pub n: BigUint,
}

#[derive(Debug, Clone)]
pub struct InstanceDiagnostics {
    pub r_count: usize,
    /// `y^θ log y`, the log of the bound on `n`.
    pub n_bound_log: f64,
    /// `exp(y^θ log y)`; may be infinite in floating point.
    pub n_bound: f64,
    /// Heuristic expectation `y / log y` for the count of `r` primes.
    pub lemma5_expectation: f64,
    pub eq4_product_p: f64,
    pub eq4_product_q: f64,
}

impl Theorem2Instance {
    /// Assemble an instance from explicit prime lists, validating the
    /// structural invariants. Smoothness of `r - 1` is required only when the
    /// instance came from a search bound; explicit lists must still satisfy
    /// `D | r - 1`, which the exclusion mechanism depends on.
    pub fn from_parts(
        p_list: Vec<u64>,
        q_list: Vec<u64>,
        r_list: Vec<u64>,
        y: u64,
        theta: f64,
    ) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for &p in p_list.iter().chain(&q_list).chain(&r_list) {
            if p < 3 || p % 2 == 0 || !modmath::is_prime(p) {
                return Err(Error::invalid(format!("{p} is not an odd prime")));
            }
            if !seen.insert(p) {
                return Err(Error::invalid(format!("prime {p} appears twice")));
            }
        }
        let mut d: u64 = 1;
        for &p in p_list.iter().chain(&q_list) {
            d = lcm_checked(d, p - 1).ok_or(Error::Overflow("lcm of shifted primes"))?;
        }
        for &r in &r_list {
            if (r - 1) % d != 0 {
                return Err(Error::invalid(format!(
                    "r = {r} violates D | r - 1 (D = {d})"
                )));
            }
        }
        let mut n = BigUint::from(d.max(1));
        for &r in &r_list {
            n = n.lcm(&BigUint::from(r - 1));
        }
        let mut m = BigUint::one();
        for &p in p_list.iter().chain(&q_list).chain(&r_list) {
            m *= BigUint::from(p);
        }
        Ok(Theorem2Instance { p_list, q_list, r_list, d, y, theta, m, n })
    }

    pub fn diagnostics(&self) -> InstanceDiagnostics {
        let y = self.y as f64;
        let n_bound_log = if self.y >= 2 { y.powf(self.theta) * y.ln() } else { 0.0 };
        InstanceDiagnostics {
            r_count: self.r_list.len(),
            n_bound_log,
            n_bound: n_bound_log.exp(),
            lemma5_expectation: if self.y >= 2 { y / y.ln() } else { 0.0 },
            eq4_product_p: unit_product(&self.p_list),
            eq4_product_q: unit_product(&self.q_list),
        }
    }

    /// The modulus `4m` as a factored object.
    pub fn modulus_4m(&self) -> Result<FactoredModulus> {
        let pairs: Vec<(u64, u32)> = self
            .p_list
            .iter()
            .chain(&self.q_list)
            .chain(&self.r_list)
            .map(|&p| (p, 1))
            .collect();
        FactoredModulus::new(2, Factorization::from_pairs(&pairs)?)
    }
}

fn unit_product(primes: &[u64]) -> f64 {
    primes.iter().map(|&p| 1.0 - 1.0 / p as f64).product()
}

// Smallest odd primes from `first` on with Π (1 - 1/p) < threshold; returns
// the list and the next unused candidate.
fn greedy_unit_product_list(
    first: u64,
    threshold: f64,
    list_cap: usize,
) -> Result<(Vec<u64>, u64)> {
    let mut list = Vec::new();
    let mut product = 1.0;
    let mut next = first;
    while product >= threshold {
        while !modmath::is_prime(next) {
            next += 2;
        }
        list.push(next);
        product *= 1.0 - 1.0 / next as f64;
        next += 2;
        if list.len() > list_cap {
            return Err(Error::invalid(format!(
                "product threshold {threshold} needs more than {list_cap} primes; raise the list cap or epsilon"
            )));
        }
    }
    Ok((list, next))
}

/// Greedy smallest-prime selection for the two `Π (1 - 1/p) < ε/4` lists.
pub fn choose_pq_primes(epsilon: f64, list_cap: usize) -> Result<(Vec<u64>, Vec<u64>)> {
    if !(epsilon > 0.0 && epsilon < 4.0) {
        return Err(Error::invalid("epsilon must lie in (0, 4)"));
    }
    let threshold = epsilon / 4.0;
    let (p_list, next) = greedy_unit_product_list(3, threshold, list_cap)?;
    let (q_list, _) = greedy_unit_product_list(next, threshold, list_cap)?;
    Ok((p_list, q_list))
}

/// Primes `r <= y` with `D | r - 1` and `r - 1` smooth to `⌊y^θ⌋`, excluding
/// the listed primes. The empty list is valid output: the underlying prime
/// count guarantee is only asymptotic.
pub fn find_r_primes(d: u64, y: u64, theta: f64, exclude: &[u64]) -> Result<Vec<u64>> {
    if d < 1 || y < 3 {
        return Err(Error::invalid("find_r_primes requires D >= 1 and y >= 3"));
    }
    if !(theta > 0.0 && theta < 0.5) {
        return Err(Error::invalid("theta must lie in (0, 1/2)"));
    }
    let bound = smooth_bound(y, theta);
    let out = primes_up_to(y)
        .into_iter()
        .filter(|&r| r >= 3)
        .filter(|r| !exclude.contains(r))
        .filter(|&r| (r - 1) % d == 0)
        .filter(|&r| is_smooth(r - 1, bound))
        .collect();
    Ok(out)
}

// ⌊y^θ⌋ with a nudge against floating-point spoilage of exact powers,
// clamped to 2: every r - 1 is even, so a smaller bound rejects everything
// and the trivial instances degenerate.
fn smooth_bound(y: u64, theta: f64) -> u64 {
    let raw = (y as f64).powf(theta);
    let floored = if (raw - raw.round()).abs() < 1e-9 {
        raw.round() as u64
    } else {
        raw.floor() as u64
    };
    floored.max(2)
}

/// Run the full pipeline: greedy `p`/`q` lists, then the `r` search.
pub fn assemble(
    epsilon: f64,
    y: u64,
    theta: f64,
    list_cap: usize,
) -> Result<(Theorem2Instance, InstanceDiagnostics)> {
    let (p_list, q_list) = choose_pq_primes(epsilon, list_cap)?;
    let mut d: u64 = 1;
    for &p in p_list.iter().chain(&q_list) {
        d = lcm_checked(d, p - 1).ok_or(Error::Overflow("lcm of shifted primes"))?;
    }
    let exclude: Vec<u64> = p_list.iter().chain(&q_list).copied().collect();
    let r_list = find_r_primes(d, y, theta, &exclude)?;
    let instance = Theorem2Instance::from_parts(p_list, q_list, r_list, y, theta)?;
    let diagnostics = instance.diagnostics();
    Ok((instance, diagnostics))
}

/// One violated exclusion, if any ever appears.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExclusionViolation {
    pub a: u64,
    pub k: u64,
    pub x: u64,
    pub broken: String,
}

#[derive(Debug, Clone)]
pub struct ExclusionReport {
    pub m: u64,
    /// Classes satisfying the `a ≡ 1 (mod p_i)`, `a ≡ -1 (mod q_j)` condition.
    pub condition5_classes: u64,
    /// Of those, how many admit any solution of the congruence.
    pub solvable_condition5: u64,
    pub solvable_fraction: f64,
    /// Solution triples `(k, x, a)` inspected.
    pub checked_solutions: u64,
    pub violations: Vec<ExclusionViolation>,
}

/// Exhaustively verify the exclusion mechanism on a scannable instance.
///
/// Enumerates every `(k, x)` with `x` a unit mod `m` and `k` up to the
/// exponent period; for each attained value `a` in a condition-(5) class the
/// four exclusions are checked directly.
pub fn exclusion_check(instance: &Theorem2Instance, scan_cap: u64) -> Result<ExclusionReport> {
    let m = instance
        .m
        .to_u64()
        .filter(|&m| m <= scan_cap)
        .ok_or_else(|| Error::ScanCap { classes: instance.m.to_string(), cap: scan_cap })?;
    let m_f = modmath::factorize(m);
    let period = modmath::period_cap(&m_f)?;

    let in_condition5 = |a: u64| -> bool {
        instance.p_list.iter().any(|&p| a % p == 1)
            && instance.q_list.iter().any(|&q| a % q == q - 1)
    };
    let condition5_classes = (0..m).filter(|&a| in_condition5(a)).count() as u64;

    let mut attained = vec![false; m as usize];
    let mut checked_solutions = 0u64;
    let mut violations = Vec::new();
    for x in (1..m).filter(|&x| gcd(x, m) == 1) {
        let mut x_pow = 1u64; // x^(k-1)
        for k in 1..=period {
            let a = mod_mul(x_pow, x - 1, m);
            x_pow = mod_mul(x_pow, x, m);
            if !in_condition5(a) {
                continue;
            }
            attained[a as usize] = true;
            checked_solutions += 1;
            for &p in &instance.p_list {
                if a % p == 1 && k % (p - 1) == 0 {
                    violations.push(ExclusionViolation {
                        a,
                        k,
                        x,
                        broken: format!("k ≡ 0 (mod {} - 1)", p),
                    });
                }
            }
            for &q in &instance.q_list {
                if a % q == q - 1 && k % (q - 1) == 1 {
                    violations.push(ExclusionViolation {
                        a,
                        k,
                        x,
                        broken: format!("k ≡ 1 (mod {} - 1)", q),
                    });
                }
            }
            for &r in &instance.r_list {
                if k % (r - 1) == 0 || k % (r - 1) == 1 {
                    violations.push(ExclusionViolation {
                        a,
                        k,
                        x,
                        broken: format!("k ≡ 0 or 1 (mod {} - 1)", r),
                    });
                }
            }
        }
    }
    let solvable_condition5 = (0..m).filter(|&a| attained[a as usize]).count() as u64;
    Ok(ExclusionReport {
        m,
        condition5_classes,
        solvable_condition5,
        solvable_fraction: if condition5_classes == 0 {
            0.0
        } else {
            solvable_condition5 as f64 / condition5_classes as f64
        },
        checked_solutions,
        violations,
    })
}

#[derive(Debug, Clone)]
pub struct FreeFractionReport {
    pub modulus: String,
    pub classes: u64,
    pub totient_free: u64,
    pub fraction: f64,
}

/// Fraction of classes `a ≡ 2 (mod 4)` modulo `4m` that classify totient-free.
pub fn measured_free_fraction(
    classifier: &Classifier,
    instance: &Theorem2Instance,
    class_cap: u64,
) -> Result<FreeFractionReport> {
    let modulus = instance.modulus_4m()?;
    let scan = classifier.scan_classes(&modulus, ScanFilter::TwoModFour, class_cap)?;
    Ok(FreeFractionReport {
        modulus: modulus.to_string(),
        classes: scan.summary.classes,
        totient_free: scan.summary.totient_free,
        fraction: scan.summary.totient_free_fraction(),
    })
}
