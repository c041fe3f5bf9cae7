//! Exact integer and modular arithmetic kernel.
//!
//! Everything here is a pure function of its inputs. Per-prime-power
//! arithmetic stays in 64 bits (with 128-bit intermediates); only
//! whole-modulus values go through arbitrary precision.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Greatest common divisor.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Least common multiple, `None` on u64 overflow.
pub fn lcm_checked(a: u64, b: u64) -> Option<u64> {
    if a == 0 || b == 0 {
        return Some(0);
    }
    (a / gcd(a, b)).checked_mul(b)
}

/// `a * b mod m` via 128-bit intermediate.
pub fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^exp mod m` by binary exponentiation.
pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, m);
        }
        base = mod_mul(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Modular inverse of `a` mod `m`, `None` when `gcd(a, m) != 1`.
pub fn mod_inv(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Deterministic Miller-Rabin, valid for all `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'base: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mod_mul(x, x, n);
            if x == n - 1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

/// Strong probable-prime test on a big integer with the first twelve prime
/// bases; deterministic for inputs below 3.3e24, a probable-prime test beyond.
pub fn is_probable_prime_big(n: &BigUint) -> bool {
    if let Some(n64) = n.to_u64() {
        return is_prime(n64);
    }
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    let n_minus_1 = n - &one;
    let mut d = n_minus_1.clone();
    let mut s = 0u32;
    while d.is_even() {
        d /= &two;
        s += 1;
    }
    'base: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let a = BigUint::from(a);
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

// Brent's variant of Pollard rho with a deterministic parameter schedule.
fn pollard_rho(n: u64) -> u64 {
    debug_assert!(n % 2 == 1 && n > 3 && !is_prime(n));
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mod_mul(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        let mut saved = 2u64;
        let mut count = 0u32;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            let diff = x.abs_diff(y);
            if diff == 0 {
                d = n; // cycle without factor, retry with next c
                break;
            }
            // batch gcds in groups of 64
            saved = mod_mul(saved, diff, n);
            count += 1;
            if count == 64 {
                d = gcd(saved, n);
                saved = 1;
                count = 0;
            }
        }
        if d == 1 || count > 0 {
            let g = gcd(saved, n);
            if g > 1 && g < n {
                return g;
            }
        }
        if d > 1 && d < n {
            return d;
        }
        c += 1;
    }
}

/// A positive integer held as its sorted prime factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Factor `n >= 1`; `n = 1` yields the empty list.
    pub fn of(n: u64) -> Self {
        assert!(n >= 1, "factorize requires n >= 1");
        let mut factors = Vec::new();
        let mut rest = n;
        for d in TrialDivisors::new() {
            if d > TRIAL_BOUND || d.saturating_mul(d) > rest {
                break;
            }
            if rest % d == 0 {
                let mut e = 0u32;
                while rest % d == 0 {
                    rest /= d;
                    e += 1;
                }
                factors.push((d, e));
            }
        }
        if rest > 1 {
            split_rest(rest, &mut factors);
            factors.sort_unstable();
            // merge any duplicate prime picked up by both phases
            factors.dedup_by(|b, a| {
                if a.0 == b.0 {
                    a.1 += b.1;
                    true
                } else {
                    false
                }
            });
        }
        Factorization { factors }
    }

    /// Build from explicit `(prime, exponent)` pairs; duplicates are merged.
    pub fn from_pairs(pairs: &[(u64, u32)]) -> Result<Self> {
        let mut factors: Vec<(u64, u32)> = Vec::new();
        for &(p, e) in pairs {
            if e == 0 {
                return Err(Error::invalid(format!("exponent 0 for prime {p}")));
            }
            if !is_prime(p) {
                return Err(Error::invalid(format!("{p} is not prime")));
            }
            factors.push((p, e));
        }
        factors.sort_unstable();
        factors.dedup_by(|b, a| {
            if a.0 == b.0 {
                a.1 += b.1;
                true
            } else {
                false
            }
        });
        Ok(Factorization { factors })
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// The prime powers `p^e` dividing the number exactly.
    pub fn prime_powers(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, e)| p.pow(e))
    }

    /// Primes listed with multiplicity, ascending: `m = p_1 ... p_j`.
    pub fn primes_with_multiplicity(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for &(p, e) in &self.factors {
            out.extend(std::iter::repeat(p).take(e as usize));
        }
        out
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_even(&self) -> bool {
        self.factors.first().is_some_and(|&(p, _)| p == 2)
    }

    /// Recompose the factored number.
    pub fn value(&self) -> BigUint {
        let mut v = BigUint::one();
        for &(p, e) in &self.factors {
            v *= BigUint::from(p).pow(e);
        }
        v
    }

    /// Recompose when the result fits in 64 bits.
    pub fn value_u64(&self) -> Option<u64> {
        let mut v: u64 = 1;
        for &(p, e) in &self.factors {
            for _ in 0..e {
                v = v.checked_mul(p)?;
            }
        }
        Some(v)
    }
}

const TRIAL_BOUND: u64 = 1_000_000;

// 2, 3, 5, then a 2-4 wheel.
struct TrialDivisors {
    d: u64,
    step: u64,
}

impl TrialDivisors {
    fn new() -> Self {
        TrialDivisors { d: 0, step: 0 }
    }
}

impl Iterator for TrialDivisors {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        let next = match self.d {
            0 => 2,
            2 => 3,
            3 => {
                self.step = 2;
                5
            }
            _ => {
                let n = self.d + self.step;
                self.step = 6 - self.step;
                n
            }
        };
        self.d = next;
        Some(next)
    }
}

// Factor a cofactor with no prime divisor <= TRIAL_BOUND.
fn split_rest(n: u64, out: &mut Vec<(u64, u32)>) {
    if is_prime(n) {
        out.push((n, 1));
        return;
    }
    let d = pollard_rho(n);
    for part in [d, n / d] {
        if is_prime(part) {
            match out.iter_mut().find(|(p, _)| *p == part) {
                Some(entry) => entry.1 += 1,
                None => out.push((part, 1)),
            }
        } else {
            split_rest(part, out);
        }
    }
}

/// Factor `n >= 1` into sorted `(prime, exponent)` pairs.
pub fn factorize(n: u64) -> Factorization {
    Factorization::of(n)
}

/// Combine congruences `x ≡ r_i (mod m_i)` with pairwise coprime moduli.
///
/// Returns `(x, product)` with `x` reduced; the empty list yields `(0, 1)`.
pub fn crt_combine(pairs: &[(BigUint, BigUint)]) -> Result<(BigUint, BigUint)> {
    let mut x = BigUint::zero();
    let mut m = BigUint::one();
    for (ri, mi) in pairs {
        if mi.is_zero() {
            return Err(Error::invalid("zero modulus in CRT input"));
        }
        let g = m.gcd(mi);
        if !g.is_one() {
            return Err(Error::NonCoprimeModuli(m.to_string(), mi.to_string()));
        }
        // x' = x + m * t with t ≡ (ri - x) / m (mod mi)
        let m_inv = big_mod_inv(&m, mi).expect("coprime by the gcd check");
        let ri = ri % mi;
        let diff = (&ri + mi - (&x % mi)) % mi;
        let t = (diff * m_inv) % mi;
        x += &m * t;
        m *= mi;
    }
    Ok((x, m))
}

/// CRT over machine-size pairs; errors if the combined modulus overflows u64.
pub fn crt_combine_u64(pairs: &[(u64, u64)]) -> Result<(u64, u64)> {
    let big: Vec<(BigUint, BigUint)> = pairs
        .iter()
        .map(|&(r, m)| (BigUint::from(r), BigUint::from(m)))
        .collect();
    let (x, m) = crt_combine(&big)?;
    match (x.to_u64(), m.to_u64()) {
        (Some(x), Some(m)) => Ok((x, m)),
        _ => Err(Error::Overflow("CRT product")),
    }
}

fn big_mod_inv(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    let a = BigInt::from(a % m);
    let m = BigInt::from(m.clone());
    let ext = a.extended_gcd(&m);
    if !ext.gcd.is_one() {
        return None;
    }
    let mut x = ext.x % &m;
    if x.is_negative() {
        x += &m;
    }
    x.to_biguint()
}

/// Carmichael lambda of an odd prime power: `λ(p^e) = p^(e-1) (p-1)`.
pub fn carmichael_lambda(p: u64, e: u32) -> u64 {
    debug_assert!(p % 2 == 1 && is_prime(p));
    p.pow(e - 1) * (p - 1)
}

/// The exponent period `n(m) = lcm of λ(p^e) over the prime powers of odd m`.
///
/// Solvability of `x^k - x^(k-1) ≡ a (mod m)` depends on `k` only through
/// `(k-1) mod n(m)`, so a search over `k ∈ [1, n(m)]` is complete.
pub fn period_cap(m: &Factorization) -> Result<u64> {
    if m.is_even() {
        return Err(Error::EvenModulus(m.value_u64().unwrap_or(0)));
    }
    let mut n: u64 = 1;
    for &(p, e) in m.factors() {
        n = lcm_checked(n, carmichael_lambda(p, e)).ok_or(Error::Overflow("period cap"))?;
    }
    Ok(n)
}

/// Unit `x mod p^l` with `x^k - x^(k-1) ≡ p^k - p^(k-1) (mod p^l)`, `k >= 2`.
///
/// For `l <= k-1` both sides vanish mod `p^l` and `x = 1` works. Otherwise
/// `x = p^(k-1) u + 1` where `u` is the Hensel lift of the simple root
/// `u ≡ -1 (mod p)` of `f(U) = U (p^(k-1) U + 1)^(k-1) - p + 1`.
pub fn hensel_lemma2(p: u64, k: u32, l: u32) -> Result<u64> {
    if p < 3 || p % 2 == 0 || !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not an odd prime")));
    }
    if k < 2 {
        return Err(Error::invalid("hensel_lemma2 requires k >= 2; k = 1 is trivial"));
    }
    let q = p
        .checked_pow(l)
        .ok_or(Error::Overflow("prime power p^l"))?;
    let w = l.saturating_sub(k - 1);
    let x = if w == 0 {
        1
    } else {
        let pw = p.pow(w);
        let pk1 = mod_pow(p, (k - 1) as u64, pw);
        let f = |u: u64, m: u64| -> u64 {
            let base = (mod_mul(pk1 % m, u, m) + 1) % m;
            let t = mod_mul(u, mod_pow(base, (k - 1) as u64, m), m);
            (t + m - (p - 1) % m) % m
        };
        let fprime = |u: u64, m: u64| -> u64 {
            let base = (mod_mul(pk1 % m, u, m) + 1) % m;
            let main = mod_pow(base, (k - 1) as u64, m);
            let side = mod_mul(
                mod_mul(u % m, ((k - 1) as u64) % m, m),
                mod_mul(pk1 % m, mod_pow(base, (k - 2) as u64, m), m),
                m,
            );
            (main + side) % m
        };
        // lift the root u ≡ -1 one power of p at a time
        let mut u = p - 1;
        let mut modulus = p;
        while modulus < pw {
            modulus *= p;
            let fu = f(u, modulus);
            let inv = mod_inv(fprime(u, modulus), modulus)
                .expect("f'(-1) ≡ 1 (mod p), so f'(u) is a unit");
            u = (u + modulus - mod_mul(fu, inv, modulus)) % modulus;
        }
        (mod_mul(mod_pow(p, (k - 1) as u64, q), u, q) + 1) % q
    };
    debug_assert_eq!(
        (mod_pow(x, k as u64, q) + q - mod_pow(x, (k - 1) as u64, q)) % q,
        (mod_pow(p, k as u64, q) + q - mod_pow(p, (k - 1) as u64, q)) % q,
    );
    Ok(x)
}

/// True iff every prime factor of `n` is at most `bound`.
///
/// Trial division only: deliberately independent of [`factorize`] so the two
/// can cross-check each other.
pub fn is_smooth(n: u64, bound: u64) -> bool {
    let mut rest = n;
    for d in TrialDivisors::new() {
        if d > bound || rest == 1 {
            break;
        }
        if d.saturating_mul(d) > rest {
            // remaining cofactor is prime
            return rest <= bound;
        }
        while rest % d == 0 {
            rest /= d;
        }
    }
    rest == 1
}

/// All primes up to `n` inclusive, by a plain sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// All divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let f = factorize(n);
    let mut out = vec![1u64];
    for &(p, e) in f.factors() {
        let prev = out.clone();
        let mut pe = 1u64;
        for _ in 0..e {
            pe *= p;
            out.extend(prev.iter().map(|d| d * pe));
        }
    }
    out.sort_unstable();
    out
}

/// Squarefree divisors of `n` with their Möbius value.
pub fn squarefree_divisors(n: u64) -> Vec<(u64, i8)> {
    let f = factorize(n);
    let mut out = vec![(1u64, 1i8)];
    for &(p, _) in f.factors() {
        let prev = out.clone();
        out.extend(prev.iter().map(|&(d, mu)| (d * p, -mu)));
    }
    out.sort_unstable();
    out
}
