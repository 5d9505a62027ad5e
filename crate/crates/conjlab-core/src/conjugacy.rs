//! The halve-or-triple step on rationals with odd denominator, the affine
//! maps finite digit words induce, exact word values and cycle values, and
//! partial-sum limit estimation along infinite digit streams.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{compare_pow, pow2, pow3, rat_int, AlphaKind, AlphaOracle, Rational};
use crate::sturmian::{convergents, sturmian_stream, SturmianVariant};
use crate::words::{FiniteWord, PhiAccumulator, WordStream};

/// One step: x/2 when the numerator is even, (3x+1)/2 when odd. The
/// denominator must be odd for the parity of x to be defined.
pub fn t_step(x: &Rational) -> Result<Rational> {
    if x.denom().is_even() {
        return Err(Error::EvenDenominator);
    }
    // Odd denominator: x mod 2 is the numerator's parity.
    if x.numer().is_even() {
        Ok(x / rat_int(2))
    } else {
        Ok((x * rat_int(3) + rat_int(1)) / rat_int(2))
    }
}

/// The iterates x, T(x), ..., T^steps(x), exactly. The step map preserves
/// odd denominators, so only the start value can be rejected.
pub fn trajectory(zeta: &Rational, steps: u64) -> Result<Vec<Rational>> {
    if zeta.denom().is_even() {
        return Err(Error::EvenDenominator);
    }
    let mut out = Vec::with_capacity(steps as usize + 1);
    out.push(zeta.clone());
    for _ in 0..steps {
        let next = t_step(out.last().expect("nonempty"))?;
        out.push(next);
    }
    Ok(out)
}

/// The first `l` parities of the trajectory of `zeta`, as a word.
pub fn parity_vector(zeta: &Rational, l: u64) -> Result<FiniteWord> {
    if zeta.denom().is_even() {
        return Err(Error::EvenDenominator);
    }
    let mut cur = zeta.clone();
    let mut digits = Vec::with_capacity(l as usize);
    for _ in 0..l {
        digits.push(cur.numer().is_odd());
        cur = t_step(&cur)?;
    }
    Ok(FiniteWord::from_bools(&digits))
}

/// The affine map x -> offset + slope*x obtained by composing one step per
/// digit of a word, parity ignored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMap {
    /// Image of 0: phi(u)/2^l.
    pub offset: Rational,
    /// 3^h/2^l.
    pub slope: Rational,
}

impl AffineMap {
    pub fn apply(&self, x: &Rational) -> Rational {
        &self.offset + &self.slope * x
    }
}

/// The affine map of a word: offset phi(u)/2^l, slope 3^h/2^l.
pub fn affine_of(u: &FiniteWord) -> AffineMap {
    let two_l = BigInt::from(pow2(u.len()));
    AffineMap {
        offset: Rational::new(BigInt::from(u.phi().clone()), two_l.clone()),
        slope: Rational::new(BigInt::from(pow3(u.height())), two_l),
    }
}

/// offset + slope*x for the word's map; identical to composing the
/// per-digit maps x/2 and (3x+1)/2 in word order.
pub fn apply_word(u: &FiniteWord, x: &Rational) -> Rational {
    affine_of(u).apply(x)
}

/// -phi(u)/3^h(u): the unique value the word's map sends to 0.
pub fn phi_finite(u: &FiniteWord) -> Rational {
    Rational::new(
        -BigInt::from(u.phi().clone()),
        BigInt::from(pow3(u.height())),
    )
}

/// phi(u)/(2^l - 3^h): the unique fixed point of the word's map, so its
/// trajectory is periodic with parity word u repeated.
pub fn cycle_value(u: &FiniteWord) -> Rational {
    assert!(!u.is_empty(), "cycle value needs a non-empty word");
    // 2^l = 3^h only at l = h = 0, so the denominator never vanishes.
    let den = BigInt::from(pow2(u.len())) - BigInt::from(pow3(u.height()));
    Rational::new(BigInt::from(u.phi().clone()), den)
}

/// The word values of every prefix, lengths 1..=depth. Non-increasing: a
/// zero digit keeps the value, a one digit lowers it.
pub fn phi_partials(v: &WordStream, depth: u64) -> Result<Vec<Rational>> {
    let mut acc = PhiAccumulator::new();
    let mut den3 = BigUint::one();
    let mut out = Vec::with_capacity(depth as usize);
    for i in 0..depth {
        let one = v.digit(i)?;
        acc.push(one);
        if one {
            den3 *= 3u8;
        }
        out.push(Rational::new(
            -BigInt::from(acc.phi().clone()),
            BigInt::from(den3.clone()),
        ));
    }
    Ok(out)
}

/// The cycle values of every prefix, lengths 1..=depth.
pub fn cycle_partials(v: &WordStream, depth: u64) -> Result<Vec<Rational>> {
    let mut acc = PhiAccumulator::new();
    let mut pow2_l = BigInt::one();
    let mut pow3_h = BigInt::one();
    let mut out = Vec::with_capacity(depth as usize);
    for i in 0..depth {
        let one = v.digit(i)?;
        acc.push(one);
        pow2_l *= 2u8;
        if one {
            pow3_h *= 3u8;
        }
        out.push(Rational::new(
            BigInt::from(acc.phi().clone()),
            &pow2_l - &pow3_h,
        ));
    }
    Ok(out)
}

/// x, then the image of x under the growing prefix maps of v, one entry per
/// digit. Parity is ignored: digit 0 halves, digit 1 applies (3x+1)/2.
pub fn pseudo_trajectory(x: &Rational, v: &WordStream, steps: u64) -> Result<Vec<Rational>> {
    let mut out = Vec::with_capacity(steps as usize + 1);
    out.push(x.clone());
    for i in 0..steps {
        let prev = out.last().expect("nonempty");
        let next = if v.digit(i)? {
            (prev * rat_int(3) + rat_int(1)) / rat_int(2)
        } else {
            prev / rat_int(2)
        };
        out.push(next);
    }
    Ok(out)
}

/// Partial-sum estimate of the series limit of a digit stream.
#[derive(Debug, Clone)]
pub struct LimitEstimate {
    /// Partial sum over the scanned prefix (the exact limit when `exact`).
    pub value: Rational,
    /// Bound on |limit - value| under the verified slope floor, if any.
    pub tail_bound: Option<Rational>,
    /// True exactly when `tail_bound` is present.
    pub certified: bool,
    /// Prefix length the value accounts for.
    pub depth: u64,
    /// Number of series terms (one digits) included.
    pub terms: u64,
    /// The partial sums crossed the divergence threshold. Heuristic only:
    /// never a proof, and never set on a certified or exact result.
    pub divergence_suspected: bool,
    /// The value is the exact limit (finite stream, or periodic closed form).
    pub exact: bool,
}

/// Stopping and certification parameters for `phi_limit_estimate`.
#[derive(Debug, Clone)]
pub struct EstimateParams {
    /// The scan stops at the first upcoming term smaller than this.
    pub eps: Rational,
    /// Height floor r: prefixes must satisfy h(l) >= ceil(l*r). Checked on
    /// the scanned prefix; when it holds continuously over at least the
    /// second half, the geometric tail bound under the floor is attached.
    pub slope_floor: Option<Rational>,
    /// Hard cap on scanned digits.
    pub max_depth: u64,
    /// Partial sums below this set `divergence_suspected` and end the scan.
    pub divergence_threshold: Rational,
}

impl EstimateParams {
    pub fn new(eps: Rational, max_depth: u64) -> Self {
        EstimateParams {
            eps,
            slope_floor: None,
            max_depth,
            divergence_threshold: rat_int(-1_000_000_000),
        }
    }

    pub fn with_slope_floor(mut self, floor: Rational) -> Self {
        self.slope_floor = Some(floor);
        self
    }
}

/// Numerator and denominator caps for slope floors; keeps the tail-bound
/// block sum and the power comparisons at desk scale.
const MAX_FLOOR_PART: u64 = 10_000;

fn validated_floor(r: &Rational) -> Result<(u64, u64)> {
    let bad = |msg: &str| Error::InvalidSlope(format!("slope floor {}: {}", r, msg));
    if !r.is_positive() {
        return Err(bad("must be positive"));
    }
    let a = r.numer().to_u64();
    let b = r.denom().to_u64();
    let (a, b) = match (a, b) {
        (Some(a), Some(b)) if a <= MAX_FLOOR_PART && b <= MAX_FLOOR_PART => (a, b),
        _ => return Err(bad("numerator and denominator must be at most 10000")),
    };
    if a >= b {
        return Err(bad("must be less than 1"));
    }
    // The tail under the floor is geometric only when 2^b < 3^a.
    if compare_pow(b, a) != Ordering::Less {
        return Err(bad("must be greater than the base-3 logarithm of 2"));
    }
    Ok((a, b))
}

/// h >= ceil(l*a/b), i.e. l*a <= h*b.
fn height_meets_floor(h: u64, l: u64, a: u64, b: u64) -> bool {
    (l as u128) * (a as u128) <= (h as u128) * (b as u128)
}

/// 2^d/3^k < eps, with 3^k passed in as a ready power.
fn term_below(d: u64, pow3_k: &BigUint, eps: &Rational) -> bool {
    pow2(d) * eps.denom().magnitude() < eps.numer().magnitude() * pow3_k
}

/// -phi/3^h < threshold.
fn partial_below(phi: &BigUint, den3: &BigUint, threshold: &Rational) -> bool {
    let lhs = -BigInt::from(phi * threshold.denom().magnitude());
    let rhs = threshold.numer() * BigInt::from(den3.clone());
    lhs < rhs
}

/// Exact value of sum over d >= depth of 2^d/3^ceil((d+1)a/b): bounds the
/// unscanned series terms when every later prefix keeps height at least
/// ceil(l*a/b). Finite because 2^b < 3^a.
fn geometric_tail(depth: u64, a: u64, b: u64) -> Rational {
    let e = |l: u64| ((l as u128 * a as u128).div_ceil(b as u128)) as u64;
    // Block of b consecutive positions, then a geometric factor 2^b/3^a.
    let e_top = e(depth + b);
    let mut sum = BigUint::zero();
    let mut p2 = pow2(depth + b - 1);
    let mut p3 = BigUint::one();
    let mut cur = e_top;
    for s in (0..b).rev() {
        let es = e(depth + 1 + s);
        for _ in es..cur {
            p3 *= 3u8;
        }
        cur = es;
        sum += &p2 * &p3;
        p2 >>= 1usize;
    }
    let num = sum * pow3(a);
    let den = pow3(e_top) * (pow3(a) - pow2(b));
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn exact_estimate(value: Rational, depth: u64, terms: u64) -> LimitEstimate {
    LimitEstimate {
        value,
        tail_bound: Some(Rational::zero()),
        certified: true,
        depth,
        terms,
        divergence_suspected: false,
        exact: true,
    }
}

/// Estimate the limit of the series of v: scan digits, stop at the first
/// upcoming term below eps (or at max_depth, or when the divergence
/// threshold is crossed), and report the partial sum. Periodic streams whose
/// period has 2^l < 3^h short-circuit to the exact cycle value; finite
/// streams scanned to the end are exact. A slope floor, when verified on the
/// scanned prefix, attaches a geometric tail bound extrapolating the floor
/// to the unscanned digits.
pub fn phi_limit_estimate(v: &WordStream, params: &EstimateParams) -> Result<LimitEstimate> {
    assert!(params.eps.is_positive(), "eps must be positive");
    let floor_ab = match &params.slope_floor {
        Some(r) => Some(validated_floor(r)?),
        None => None,
    };

    if let Some(u) = v.period() {
        let l = u.len();
        let h = u.height();
        if h == 0 {
            return Ok(exact_estimate(Rational::zero(), l, 0));
        }
        if compare_pow(l, h) == Ordering::Less {
            // 2^l < 3^h: the repeated terms decay geometrically and the
            // limit collapses to the period's cycle value.
            return Ok(exact_estimate(cycle_value(u), l, h));
        }
        // 2^l > 3^h: the terms grow along the period; the scan below runs
        // until the divergence threshold trips.
    }

    let scan_cap = match v.finite_len() {
        Some(n) => n.min(params.max_depth),
        None => params.max_depth,
    };

    let mut acc = PhiAccumulator::new();
    let mut den3 = BigUint::one();
    // Floor holds for every prefix length in [ok_from, scanned so far].
    let mut ok_from = 1u64;
    let mut diverged = false;
    let mut stopped = false;
    let mut depth = 0u64;

    let mut i = 0u64;
    while i < scan_cap {
        let one = v.digit(i)?;
        if one {
            let next_den3 = &den3 * 3u8;
            if term_below(i, &next_den3, &params.eps) {
                // The value excludes this term; the prefix in force ends
                // here, and the digit just seen is tail evidence for the
                // floor check.
                if let Some((a, b)) = floor_ab {
                    if !height_meets_floor(acc.ones() + 1, i + 1, a, b) {
                        ok_from = i + 2;
                    }
                }
                stopped = true;
                depth = i;
                break;
            }
            acc.push(true);
            den3 = next_den3;
            if partial_below(acc.phi(), &den3, &params.divergence_threshold) {
                diverged = true;
                depth = i + 1;
                break;
            }
        } else {
            acc.push(false);
        }
        if let Some((a, b)) = floor_ab {
            if !height_meets_floor(acc.ones(), i + 1, a, b) {
                ok_from = i + 2;
            }
        }
        i += 1;
        depth = i;
    }

    let value = Rational::new(
        -BigInt::from(acc.phi().clone()),
        BigInt::from(den3.clone()),
    );
    let exhausted = !stopped && !diverged && v.finite_len() == Some(depth);
    if exhausted {
        return Ok(exact_estimate(value, depth, acc.ones()));
    }
    let tail_bound = match floor_ab {
        Some((a, b)) if !diverged && depth >= 1 && ok_from <= depth / 2 + 1 => {
            Some(geometric_tail(depth, a, b))
        }
        _ => None,
    };
    Ok(LimitEstimate {
        certified: tail_bound.is_some(),
        value,
        tail_bound,
        depth,
        terms: acc.ones(),
        divergence_suspected: diverged,
        exact: false,
    })
}

/// Partial sum made of exactly `terms` series terms, plus the deepest prefix
/// length carrying it: the scan runs through trailing zeros until the next
/// one digit or max_depth. A finite stream may end with fewer terms.
pub fn phi_partial_terms(v: &WordStream, terms: u64, max_depth: u64) -> Result<(Rational, u64)> {
    let scan_cap = match v.finite_len() {
        Some(n) => n.min(max_depth),
        None => max_depth,
    };
    let mut acc = PhiAccumulator::new();
    let mut den3 = BigUint::one();
    let mut depth = 0u64;
    while depth < scan_cap {
        let one = v.digit(depth)?;
        if one {
            if acc.ones() == terms {
                break;
            }
            acc.push(true);
            den3 *= 3u8;
        } else {
            acc.push(false);
        }
        depth += 1;
    }
    let value = Rational::new(-BigInt::from(acc.phi().clone()), BigInt::from(den3));
    Ok((value, depth))
}

/// Geometric tail bound for the series of v past `depth` under a slope
/// floor, or None when the scanned prefix refutes the floor (it must hold
/// continuously over at least the second half of the prefix).
pub fn phi_tail_bound(v: &WordStream, depth: u64, slope_floor: &Rational) -> Result<Option<Rational>> {
    let (a, b) = validated_floor(slope_floor)?;
    let mut ones = 0u64;
    let mut ok_from = 1u64;
    for i in 0..depth {
        if v.digit(i)? {
            ones += 1;
        }
        if !height_meets_floor(ones, i + 1, a, b) {
            ok_from = i + 2;
        }
    }
    if depth >= 1 && ok_from <= depth / 2 + 1 {
        Ok(Some(geometric_tail(depth, a, b)))
    } else {
        Ok(None)
    }
}

/// A cycle value cut from an infinite stream at a convergent denominator.
#[derive(Debug, Clone)]
pub struct CycleMember {
    /// Convergent index.
    pub k: usize,
    /// Prefix length q_k.
    pub length: u64,
    /// Cycle value of the prefix.
    pub value: Rational,
}

/// Cycle values along convergent-denominator prefixes of the upper
/// mechanical stream, split by convergent index parity.
#[derive(Debug, Clone)]
pub struct ChristoffelCycles {
    pub odd: Vec<CycleMember>,
    pub even: Vec<CycleMember>,
}

/// The slope must sit strictly below the base-3 logarithm of 2 for the
/// convergent-cut cycle values to settle; at or above it they do not.
fn ensure_below_critical(oracle: &AlphaOracle) -> Result<()> {
    let too_large = || {
        Error::SlopeTooLarge(
            "convergent-cut cycle values need a slope below the base-3 logarithm of 2".into(),
        )
    };
    match oracle.kind() {
        AlphaKind::LogRatio23 => Err(too_large()),
        AlphaKind::ExactRational(r) => {
            match (r.numer().to_u64(), r.denom().to_u64()) {
                // a/b < log_3(2) exactly when 2^b > 3^a.
                (Some(a), Some(b)) if compare_pow(b, a) == Ordering::Greater => Ok(()),
                (Some(_), Some(_)) => Err(too_large()),
                _ => Err(Error::InvalidSlope(format!(
                    "slope {} too large to compare against the critical ratio",
                    r
                ))),
            }
        }
        _ => {
            let critical = AlphaOracle::log2_over_log3();
            let mut bits = 32u32;
            loop {
                let (alo, ahi) = oracle.enclosure_bits(bits);
                let (clo, chi) = critical.enclosure_bits(bits);
                if ahi < clo {
                    return Ok(());
                }
                if alo > chi {
                    return Err(too_large());
                }
                if bits >= oracle.cap_bits() {
                    return Err(Error::PrecisionExhausted {
                        cap_bits: oracle.cap_bits(),
                    });
                }
                bits = bits.saturating_mul(2).min(oracle.cap_bits());
            }
        }
    }
}

/// Cycle values of upper-stream prefixes cut at the slope's convergent
/// denominators q_k for 1 <= k <= k_max, split by parity of k. Both halves
/// settle fast for slopes below the base-3 logarithm of 2; rational slopes
/// stop at their last convergent.
pub fn phi_star_estimate(oracle: &AlphaOracle, k_max: usize) -> Result<ChristoffelCycles> {
    ensure_below_critical(oracle)?;
    let convs = convergents(oracle, k_max)?;
    let v = sturmian_stream(oracle, SturmianVariant::UpperC);
    let mut acc = PhiAccumulator::new();
    let mut pos = 0u64;
    let mut odd = Vec::new();
    let mut even = Vec::new();
    for (k, c) in convs.entries.iter().enumerate() {
        if k == 0 {
            // The index-0 convergent denominator names the empty cut.
            continue;
        }
        let q = c.q.to_u64().ok_or_else(|| {
            Error::Unresolved("convergent denominator exceeds u64".into())
        })?;
        while pos < q {
            acc.push(v.digit(pos)?);
            pos += 1;
        }
        let den = BigInt::from(pow2(q)) - BigInt::from(pow3(acc.ones()));
        let member = CycleMember {
            k,
            length: q,
            value: Rational::new(BigInt::from(acc.phi().clone()), den),
        };
        if k % 2 == 1 {
            odd.push(member);
        } else {
            even.push(member);
        }
    }
    Ok(ChristoffelCycles { odd, even })
}
