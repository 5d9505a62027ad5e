//! Exact numeric foundations.
//!
//! * [`Rational`] — arbitrary-precision reduced fractions.
//! * [`Residue`] / [`reduce_mod_prime_power`] — images of odd- (resp.
//!   3-coprime-) denominator rationals in Z/2^n and Z/3^n.
//! * [`compare_pow`] — exact three-way comparison of 2^l against 3^h.
//! * [`AlphaOracle`] — slope constants (ln2/ln3, ln2, quadratic surds,
//!   rationals) served as rational enclosures of any requested width, with
//!   memoized monotone refinement and a precision-escalation cap.
//! * [`alpha_floor`] / [`alpha_ceil`] — exact ⌊l·α⌋ and ⌈l·α⌉.

use std::cmp::Ordering;
use std::str::FromStr;
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Reduced fraction with arbitrary-precision numerator and denominator.
/// Canonical form: gcd(num, den) = 1, den > 0, zero is 0/1.
pub type Rational = num_rational::BigRational;

/// Environment variable overriding the default enclosure precision cap.
pub const PRECISION_CAP_ENV: &str = "CONJLAB_PRECISION_CAP";

/// Default cap, in bits, on enclosure width 2^-bits during escalation.
pub const DEFAULT_PRECISION_CAP_BITS: u32 = 1 << 16;

/// Rational from machine integers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from a machine integer.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// 2^e as an unsigned big integer.
pub fn pow2(e: u64) -> BigUint {
    BigUint::one() << usize::try_from(e).expect("exponent fits in usize")
}

/// 3^e as an unsigned big integer.
pub fn pow3(e: u64) -> BigUint {
    // Binary exponentiation; num-bigint's inherent pow takes u32 only.
    let mut result = BigUint::one();
    let mut base = BigUint::from(3u8);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = &result * &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    result
}

/// p^e for the two primes handled by this crate.
pub fn prime_power(prime: u8, e: u64) -> BigUint {
    match prime {
        2 => pow2(e),
        3 => pow3(e),
        _ => panic!("prime must be 2 or 3, got {prime}"),
    }
}

/// Exact comparison of 2^l with 3^h.
///
/// Uses the bit length of 3^h: 2^l > 3^h iff l >= bits(3^h), since
/// bits(x) - 1 = ⌊log2 x⌋ and 2^l = 3^h is impossible unless l = h = 0.
pub fn compare_pow(l: u64, h: u64) -> Ordering {
    if l == 0 && h == 0 {
        return Ordering::Equal;
    }
    let bits = pow3(h).bits();
    if l >= bits {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// An element of Z/p^n for p in {2, 3}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Residue {
    /// Canonical representative, 0 <= value < p^exponent.
    pub value: BigUint,
    /// 2 or 3.
    pub prime: u8,
    /// n >= 1.
    pub exponent: u32,
}

impl Residue {
    /// Builds a residue, normalizing the representative into range.
    pub fn new(value: BigUint, prime: u8, exponent: u32) -> Self {
        assert!(prime == 2 || prime == 3, "prime must be 2 or 3");
        assert!(exponent >= 1, "exponent must be at least 1");
        let modulus = prime_power(prime, exponent as u64);
        Residue {
            value: value % &modulus,
            prime,
            exponent,
        }
    }

    /// p^exponent.
    pub fn modulus(&self) -> BigUint {
        prime_power(self.prime, self.exponent as u64)
    }
}

impl std::fmt::Display for Residue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (mod {}^{})", self.value, self.prime, self.exponent)
    }
}

/// Multiplicative inverse of `a` modulo `m` via extended Euclid.
/// Returns None when gcd(a, m) != 1.
pub fn mod_inverse(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    let a = BigInt::from(a.clone());
    let m_int = BigInt::from(m.clone());
    let ext = a.extended_gcd(&m_int);
    if !ext.gcd.is_one() {
        return None;
    }
    let inv = ext.x.mod_floor(&m_int);
    Some(inv.to_biguint().expect("mod_floor of positive modulus"))
}

/// Image of `q` in Z/p^n. Errors when the denominator is divisible by p.
///
/// ```
/// use conjlab_core::exactnum::{rat, reduce_mod_prime_power};
/// use num_bigint::BigUint;
/// let r = reduce_mod_prime_power(&rat(-65, 27), 2, 6).unwrap();
/// assert_eq!(r.value, BigUint::from(45u32));
/// ```
pub fn reduce_mod_prime_power(q: &Rational, prime: u8, n: u32) -> Result<Residue> {
    assert!(prime == 2 || prime == 3, "prime must be 2 or 3");
    assert!(n >= 1, "exponent must be at least 1");
    let modulus = BigInt::from(prime_power(prime, n as u64));
    let den = q.denom();
    if den.mod_floor(&BigInt::from(prime)).is_zero() {
        return Err(Error::DenominatorNotInvertible { prime });
    }
    let den_mod = den
        .mod_floor(&modulus)
        .to_biguint()
        .expect("non-negative after mod_floor");
    let inv = mod_inverse(&den_mod, &modulus.to_biguint().unwrap())
        .expect("denominator coprime to modulus");
    let num_mod = q
        .numer()
        .mod_floor(&modulus)
        .to_biguint()
        .expect("non-negative after mod_floor");
    let value = (num_mod * inv) % modulus.to_biguint().unwrap();
    Ok(Residue {
        value,
        prime,
        exponent: n,
    })
}

/// The slope constant a given oracle stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlphaKind {
    /// ln2 / ln3 (equivalently log base 3 of 2).
    LogRatio23,
    /// ln 2.
    NatLog,
    /// (a + b*sqrt(d)) / c with d > 1 not a perfect square, c > 0.
    QuadraticSurd { a: i64, b: i64, c: i64, d: u64 },
    /// An exact rational slope.
    ExactRational(Rational),
}

/// A slope constant served as rational enclosures of requested width.
///
/// Enclosures only ever tighten: concurrent readers observe monotonically
/// non-worsening precision because every computed interval is intersected
/// with the memoized best before being stored or returned.
#[derive(Debug)]
pub struct AlphaOracle {
    kind: AlphaKind,
    cap_bits: u32,
    memo: Mutex<Option<(Rational, Rational)>>,
}

impl Clone for AlphaOracle {
    fn clone(&self) -> Self {
        let memo = self.memo.lock().unwrap().clone();
        AlphaOracle {
            kind: self.kind.clone(),
            cap_bits: self.cap_bits,
            memo: Mutex::new(memo),
        }
    }
}

impl PartialEq for AlphaOracle {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.cap_bits == other.cap_bits
    }
}

fn env_cap_bits() -> u32 {
    std::env::var(PRECISION_CAP_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<u32>().ok())
        .filter(|&b| b >= 64)
        .unwrap_or(DEFAULT_PRECISION_CAP_BITS)
}

impl AlphaOracle {
    fn new(kind: AlphaKind) -> Self {
        AlphaOracle {
            kind,
            cap_bits: env_cap_bits(),
            memo: Mutex::new(None),
        }
    }

    /// ln2/ln3, the critical slope.
    pub fn log2_over_log3() -> Self {
        Self::new(AlphaKind::LogRatio23)
    }

    /// ln 2.
    pub fn ln2() -> Self {
        Self::new(AlphaKind::NatLog)
    }

    /// (a + b*sqrt(d))/c. Panics when c = 0 or d is 0, 1 or a perfect
    /// square (those values are rational; use [`AlphaOracle::exact`]).
    pub fn quadratic_surd(a: i64, b: i64, c: i64, d: u64) -> Self {
        assert!(c != 0, "denominator c must be nonzero");
        assert!(b != 0, "b = 0 is rational, use an exact oracle");
        let root = num_integer::Roots::sqrt(&BigUint::from(d));
        assert!(
            d > 1 && &root * &root != BigUint::from(d),
            "d must not be a perfect square"
        );
        // Normalize the sign so c > 0.
        let (a, b, c) = if c < 0 { (-a, -b, -c) } else { (a, b, c) };
        Self::new(AlphaKind::QuadraticSurd { a, b, c, d })
    }

    /// The golden-ratio slope (sqrt(5) - 1)/2 = 2/(1 + sqrt(5)).
    pub fn golden() -> Self {
        Self::quadratic_surd(-1, 1, 2, 5)
    }

    /// An exact rational slope.
    pub fn exact(r: Rational) -> Self {
        Self::new(AlphaKind::ExactRational(r))
    }

    /// Replaces the precision cap (bits of enclosure width).
    pub fn with_cap(mut self, cap_bits: u32) -> Self {
        self.cap_bits = cap_bits;
        self
    }

    pub fn kind(&self) -> &AlphaKind {
        &self.kind
    }

    pub fn cap_bits(&self) -> u32 {
        self.cap_bits
    }

    /// A rational enclosure [lo, hi] containing the constant with
    /// hi - lo <= eps. Never errs: width is driven by the request, the cap
    /// applies only to implicit escalation in [`alpha_floor`]-style loops.
    pub fn enclosure(&self, eps: &Rational) -> (Rational, Rational) {
        assert!(eps.is_positive(), "eps must be positive");
        if let Some((lo, hi)) = self.memo_get() {
            if &hi - &lo <= *eps {
                return (lo, hi);
            }
        }
        // Width 2^-k <= eps = a/b holds once k >= bits(b) - bits(a) + 1.
        let bits_needed = (eps.denom().bits() as i64 - eps.numer().bits() as i64 + 1).max(1) as u32;
        let mut bits = bits_needed.max(16);
        loop {
            let interval = self.compute_enclosure(bits);
            let interval = self.memo_intersect(interval);
            if &interval.1 - &interval.0 <= *eps {
                return interval;
            }
            // The computed width missed the target (interval arithmetic
            // slack); escalate.
            bits = bits.saturating_mul(2);
        }
    }

    /// Enclosure of width at most 2^-bits.
    pub fn enclosure_bits(&self, bits: u32) -> (Rational, Rational) {
        let eps = Rational::new(BigInt::one(), BigInt::from(pow2(bits as u64)));
        self.enclosure(&eps)
    }

    fn memo_get(&self) -> Option<(Rational, Rational)> {
        self.memo.lock().unwrap().clone()
    }

    /// Intersects a fresh interval with the memoized one; both contain the
    /// constant, so the intersection does too and is at least as tight.
    fn memo_intersect(&self, fresh: (Rational, Rational)) -> (Rational, Rational) {
        let mut guard = self.memo.lock().unwrap();
        let merged = match guard.take() {
            None => fresh,
            Some((lo, hi)) => (lo.max(fresh.0), hi.min(fresh.1)),
        };
        debug_assert!(merged.0 <= merged.1, "enclosures must intersect");
        *guard = Some(merged.clone());
        merged
    }

    fn compute_enclosure(&self, bits: u32) -> (Rational, Rational) {
        match &self.kind {
            AlphaKind::ExactRational(r) => (r.clone(), r.clone()),
            AlphaKind::NatLog => ln2_enclosure(bits),
            AlphaKind::QuadraticSurd { a, b, c, d } => surd_enclosure(*a, *b, *c, *d, bits),
            AlphaKind::LogRatio23 => {
                if bits <= 28 {
                    log23_power_walk(bits)
                } else {
                    log23_series(bits)
                }
            }
        }
    }
}

/// Enclosure of ln 2 from the alternating-free series
/// ln 2 = sum_{k>=1} 1/(k 2^k), whose tail after n terms is below
/// 2/((n+1) 2^n).
pub fn ln2_enclosure(bits: u32) -> (Rational, Rational) {
    let n = (bits + 2) as u64;
    let mut sum = Rational::zero();
    let mut power = BigInt::from(2); // 2^k
    for k in 1..=n {
        sum += Rational::new(BigInt::one(), BigInt::from(k) * &power);
        power *= 2;
    }
    let tail = Rational::new(BigInt::from(2), BigInt::from(n + 1) * BigInt::from(pow2(n)));
    let hi = &sum + &tail;
    (sum, hi)
}

/// Enclosure of ln(p/q) for integers p > q >= 1 via
/// ln(p/q) = 2 atanh(z), z = (p-q)/(p+q); the series
/// 2 sum z^{2j+1}/(2j+1) has positive terms and tail bounded by
/// 2 z^{2m+3} / ((2m+3)(1 - z^2)).
pub fn ln_ratio_enclosure(p: u64, q: u64, bits: u32) -> (Rational, Rational) {
    assert!(p > q && q >= 1, "need p > q >= 1");
    let z = rat(p as i64 - q as i64, p as i64 + q as i64);
    let z2 = &z * &z;
    let target = Rational::new(BigInt::one(), BigInt::from(pow2(bits as u64 + 1)));
    let mut sum = Rational::zero();
    let mut zpow = z.clone(); // z^{2j+1}
    let mut j = 0u64;
    loop {
        sum += &zpow / rat_int(2 * j as i64 + 1);
        let next = &zpow * &z2;
        let tail = rat_int(2) * &next / (rat_int(2 * j as i64 + 3) * (rat_int(1) - &z2));
        if tail <= target {
            let lo = rat_int(2) * sum;
            let hi = &lo + &tail;
            return (lo, hi);
        }
        zpow = next;
        j += 1;
    }
}

/// Enclosure of ln 3 = ln 2 + ln(3/2).
pub fn ln3_enclosure(bits: u32) -> (Rational, Rational) {
    let (a_lo, a_hi) = ln2_enclosure(bits + 2);
    let (b_lo, b_hi) = ln_ratio_enclosure(3, 2, bits + 2);
    (a_lo + b_lo, a_hi + b_hi)
}

/// Enclosure of ln2/ln3 as a quotient of series enclosures.
fn log23_series(bits: u32) -> (Rational, Rational) {
    let (n_lo, n_hi) = ln2_enclosure(bits + 4);
    let (d_lo, d_hi) = ln3_enclosure(bits + 4);
    (n_lo / d_hi, n_hi / d_lo)
}

/// Enclosure of ln2/ln3 by a Stern-Brocot mediant walk where every
/// comparison "alpha < p/q", i.e. "2^q < 3^p", is decided exactly on big
/// integers. Endpoint powers are cached so each step costs one
/// multiplication. Only used for modest widths; the series route takes
/// over where mediant denominators would make 2^q astronomical.
fn log23_power_walk(bits: u32) -> (Rational, Rational) {
    let target = Rational::new(BigInt::one(), BigInt::from(pow2(bits as u64)));
    // lo = 0/1, hi = 1/1 with cached (2^q, 3^p) for each endpoint.
    let (mut p_lo, mut q_lo, mut p_hi, mut q_hi) = (0u64, 1u64, 1u64, 1u64);
    let mut pow_lo = (pow2(q_lo), pow3(p_lo));
    let mut pow_hi = (pow2(q_hi), pow3(p_hi));
    loop {
        let width = rat(p_hi as i64, q_hi as i64) - rat(p_lo as i64, q_lo as i64);
        if width <= target {
            return (rat(p_lo as i64, q_lo as i64), rat(p_hi as i64, q_hi as i64));
        }
        let (p_m, q_m) = (p_lo + p_hi, q_lo + q_hi);
        let two_qm = &pow_lo.0 * &pow_hi.0;
        let three_pm = &pow_lo.1 * &pow_hi.1;
        if two_qm < three_pm {
            // alpha < mediant: tighten the upper endpoint.
            p_hi = p_m;
            q_hi = q_m;
            pow_hi = (two_qm, three_pm);
        } else {
            p_lo = p_m;
            q_lo = q_m;
            pow_lo = (two_qm, three_pm);
        }
    }
}

/// Enclosure of (a + b*sqrt(d))/c by integer-sqrt bracketing:
/// with s = isqrt(d * 4^k), s/2^k <= sqrt(d) < (s+1)/2^k.
fn surd_enclosure(a: i64, b: i64, c: i64, d: u64, bits: u32) -> (Rational, Rational) {
    let k = bits as u64 + 2;
    let shifted = BigUint::from(d) << usize::try_from(2 * k).unwrap();
    let s = num_integer::Roots::sqrt(&shifted);
    let scale = BigInt::from(pow2(k));
    let root_lo = Rational::new(BigInt::from(s.clone()), scale.clone());
    let root_hi = Rational::new(BigInt::from(s) + BigInt::one(), scale);
    let f = |r: Rational| (rat_int(a) + rat_int(b) * r) / rat_int(c);
    let (x, y) = (f(root_lo), f(root_hi));
    if x <= y {
        (x, y)
    } else {
        (y, x)
    }
}

/// Exact ⌊l * alpha⌋.
///
/// For the critical slope at word scale (l <= 4096) this is the normative
/// power-comparison search: the least h with 3^h > 2^l, minus one. All other
/// cases refine enclosures until the floor is pinned, doubling precision up
/// to the oracle's cap.
pub fn alpha_floor(oracle: &AlphaOracle, l: u64) -> Result<u64> {
    if l == 0 {
        return Ok(0);
    }
    match oracle.kind() {
        AlphaKind::ExactRational(r) => {
            let prod = BigInt::from(l) * r.numer();
            let fl = prod.div_floor(r.denom());
            fl.to_u64()
                .ok_or_else(|| Error::InvalidSlope("floor out of range".into()))
        }
        AlphaKind::LogRatio23 if l <= 4096 => Ok(log23_floor_by_powers(l)),
        _ => alpha_floor_by_enclosure(oracle, l),
    }
}

/// ⌊l * ln2/ln3⌋ as (least h with 3^h > 2^l) - 1, decided by compare_pow.
fn log23_floor_by_powers(l: u64) -> u64 {
    // 3^h > 2^l  iff  compare_pow(l, h) == Less.
    // Start from a conservative lower guess and walk up; the guess
    // 0.63 * l is below the true value, the walk is O(1) steps.
    let mut h = (l as f64 * 0.63) as u64;
    while compare_pow(l, h) == Ordering::Less {
        // Guess overshot (rare for tiny l); walk down first.
        h -= 1;
    }
    while compare_pow(l, h + 1) != Ordering::Less {
        h += 1;
    }
    // Now 3^{h+1} > 2^l >= 3^h (strict above since equality is impossible
    // for l >= 1), so ⌊l alpha⌋ = h.
    h
}

fn alpha_floor_by_enclosure(oracle: &AlphaOracle, l: u64) -> Result<u64> {
    let mut bits = 64u32;
    loop {
        let (lo, hi) = oracle.enclosure_bits(bits);
        let fl = (BigInt::from(l) * lo.numer()).div_floor(lo.denom());
        let fh = (BigInt::from(l) * hi.numer()).div_floor(hi.denom());
        if fl == fh {
            return fl
                .to_u64()
                .ok_or_else(|| Error::InvalidSlope("floor out of range".into()));
        }
        if bits >= oracle.cap_bits() {
            return Err(Error::PrecisionExhausted {
                cap_bits: oracle.cap_bits(),
            });
        }
        bits = bits.saturating_mul(2).min(oracle.cap_bits());
    }
}

/// Exact ⌈l * alpha⌉. For the irrational kinds l*alpha is never an integer
/// (l >= 1), so this is alpha_floor + 1; rational slopes use exact ceiling.
pub fn alpha_ceil(oracle: &AlphaOracle, l: u64) -> Result<u64> {
    if l == 0 {
        return Ok(0);
    }
    match oracle.kind() {
        AlphaKind::ExactRational(r) => {
            let prod = BigInt::from(l) * r.numer();
            let c = prod.div_ceil(r.denom());
            c.to_u64()
                .ok_or_else(|| Error::InvalidSlope("ceil out of range".into()))
        }
        _ => Ok(alpha_floor(oracle, l)? + 1),
    }
}

/// Exact ⌊(mul * alpha - sub) / (1 - alpha)⌋, the quantity the engineered
/// word constructors need. Refines enclosures until the floor is pinned.
pub fn alpha_affine_floor(oracle: &AlphaOracle, mul: u64, sub: u64) -> Result<BigInt> {
    if let AlphaKind::ExactRational(r) = oracle.kind() {
        let num = rat_int(mul as i64) * r - rat_int(sub as i64);
        let den = rat_int(1) - r;
        if den.is_zero() || den.is_negative() {
            return Err(Error::InvalidSlope("slope must be below 1".into()));
        }
        let q = num / den;
        return Ok(q.numer().div_floor(q.denom()));
    }
    let mut bits = 64u32;
    loop {
        let (lo, hi) = oracle.enclosure_bits(bits);
        if hi >= rat_int(1) {
            return Err(Error::InvalidSlope("slope must be below 1".into()));
        }
        // f(x) = (mul*x - sub)/(1-x) is increasing in x for mul > sub*1;
        // evaluate at both ends and take floors, no monotonicity assumed.
        let f = |x: &Rational| -> Rational {
            (rat_int(mul as i64) * x - rat_int(sub as i64)) / (rat_int(1) - x)
        };
        let (a, b) = (f(&lo), f(&hi));
        let fa = a.numer().div_floor(a.denom());
        let fb = b.numer().div_floor(b.denom());
        if fa == fb {
            return Ok(fa);
        }
        if bits >= oracle.cap_bits() {
            return Err(Error::PrecisionExhausted {
                cap_bits: oracle.cap_bits(),
            });
        }
        bits = bits.saturating_mul(2).min(oracle.cap_bits());
    }
}

/// Best-effort f64 for a rational of any size: scales by powers of two so
/// the division is done at 80-bit precision, then applies the exponent.
/// Intended for display and report fields, not for decisions.
pub fn rational_to_f64(q: &Rational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let negative = q.is_negative();
    let num = q.numer().magnitude().clone();
    let den = q.denom().magnitude().clone();
    let e = num.bits() as i64 - den.bits() as i64;
    // Compute (num / den) * 2^{80 - e} as an integer quotient of ~80 bits.
    let shift = 80i64 - e;
    let quotient = if shift >= 0 {
        (num << usize::try_from(shift).unwrap()) / den
    } else {
        num / (den << usize::try_from(-shift).unwrap())
    };
    let q_f = quotient.to_f64().unwrap_or(f64::INFINITY);
    let mag = q_f * 2f64.powi((e - 80) as i32);
    if negative {
        -mag
    } else {
        mag
    }
}

/// Parses "num/den", plain integers, and decimal/scientific literals
/// ("-2.5", "1e-12") into exact rationals.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let err = || Error::ParseRational(s.to_string());
    if s.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = s.split_once('/') {
        let num = BigInt::from_str(n.trim()).map_err(|_| err())?;
        let den = BigInt::from_str(d.trim()).map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(num, den));
    }
    // Decimal / scientific form: [sign] digits [. digits] [e exp]
    let (mantissa, exp10) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().map_err(|_| err())?),
        None => (s, 0i64),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if frac_part.contains(['+', '-']) {
        return Err(err());
    }
    let digits = format!("{}{}", int_part, frac_part);
    if digits.is_empty() || digits == "-" || digits == "+" {
        return Err(err());
    }
    let num = BigInt::from_str(&digits).map_err(|_| err())?;
    let scale = exp10 - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let pow = |e: u64| -> BigInt {
        let mut r = BigInt::one();
        for _ in 0..e {
            r *= &ten;
        }
        r
    };
    Ok(if scale >= 0 {
        Rational::from_integer(num * pow(scale as u64))
    } else {
        Rational::new(num, pow((-scale) as u64))
    })
}
