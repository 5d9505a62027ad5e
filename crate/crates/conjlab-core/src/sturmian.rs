//! Sturmian words, continued fractions, Christoffel words, and the
//! constructor for words built from factors of ones runs and zeros runs
//! whose slope tracks a target.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{
    alpha_affine_floor, alpha_ceil, AlphaKind, AlphaOracle, Rational,
};
use crate::words::{Bits, FiniteWord, WordStream};

/// One convergent p/q of a continued fraction, with its partial quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub index: usize,
    pub partial_quotient: u64,
    pub p: BigUint,
    pub q: BigUint,
}

/// The convergents of a slope, lowest index first.
#[derive(Debug, Clone)]
pub struct Convergents {
    pub entries: Vec<Convergent>,
    /// True when the expansion terminated (rational slope fully expanded).
    pub complete: bool,
}

impl Convergents {
    /// (p_k, q_k) as u64 for moderate depths.
    pub fn pq_u64(&self, k: usize) -> (u64, u64) {
        let e = &self.entries[k];
        (
            e.p.to_u64().expect("p fits u64"),
            e.q.to_u64().expect("q fits u64"),
        )
    }
}

/// Partial quotients a_1..a_count of the oracle's value in (0,1).
/// Second component is true when the expansion terminated early.
fn cf_digits(oracle: &AlphaOracle, count: usize) -> Result<(Vec<u64>, bool)> {
    if let AlphaKind::ExactRational(r) = oracle.kind() {
        let mut num = r.numer().to_biguint().expect("slope in (0,1)");
        let mut den = r.denom().to_biguint().expect("positive denominator");
        let mut digits = Vec::new();
        while digits.len() < count {
            if num.is_zero() {
                return Ok((digits, true));
            }
            let (a, rem) = den.div_rem(&num);
            digits.push(a.to_u64().ok_or_else(|| {
                Error::Unresolved("partial quotient exceeds u64".into())
            })?);
            den = num;
            num = rem;
        }
        return Ok((digits, num.is_zero()));
    }
    let cap = oracle.cap_bits();
    let mut bits = 128u32;
    loop {
        if let Some(digits) = cf_digits_at(oracle, count, bits)? {
            return Ok((digits, false));
        }
        if bits >= cap {
            return Err(Error::PrecisionExhausted { cap_bits: cap });
        }
        bits = (bits * 2).min(cap);
    }
}

/// One attempt at the Gauss map over a rational interval; None means the
/// interval was too wide to decide every digit.
fn cf_digits_at(oracle: &AlphaOracle, count: usize, bits: u32) -> Result<Option<Vec<u64>>> {
    let (mut lo, mut hi) = oracle.enclosure_bits(bits);
    let mut digits = Vec::with_capacity(count);
    for _ in 0..count {
        if !lo.is_positive() {
            return Ok(None);
        }
        let rlo = hi.recip();
        let rhi = lo.recip();
        let alo = rlo.floor().to_integer();
        let ahi = rhi.floor().to_integer();
        if alo != ahi {
            return Ok(None);
        }
        let a = alo
            .to_u64()
            .ok_or_else(|| Error::Unresolved("partial quotient exceeds u64".into()))?;
        digits.push(a);
        let shift = Rational::from_integer(alo);
        lo = rlo - &shift;
        hi = rhi - shift;
    }
    Ok(Some(digits))
}

/// First k_max + 1 convergents of the oracle's slope (fewer if the
/// expansion terminates). Index 0 is 0/1.
pub fn convergents(oracle: &AlphaOracle, k_max: usize) -> Result<Convergents> {
    let (digits, complete) = cf_digits(oracle, k_max)?;
    let mut entries = Vec::with_capacity(digits.len() + 1);
    entries.push(Convergent {
        index: 0,
        partial_quotient: 0,
        p: BigUint::zero(),
        q: BigUint::one(),
    });
    // (p_{-1}, q_{-1}) = (1, 0).
    let mut p_prev = BigUint::one();
    let mut q_prev = BigUint::zero();
    let mut p_cur = BigUint::zero();
    let mut q_cur = BigUint::one();
    for (i, &a) in digits.iter().enumerate() {
        let p_next = a * &p_cur + &p_prev;
        let q_next = a * &q_cur + &q_prev;
        p_prev = std::mem::replace(&mut p_cur, p_next);
        q_prev = std::mem::replace(&mut q_cur, q_next);
        entries.push(Convergent {
            index: i + 1,
            partial_quotient: a,
            p: p_cur.clone(),
            q: q_cur.clone(),
        });
    }
    Ok(Convergents { entries, complete })
}

/// Which mechanical word a slope generates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SturmianVariant {
    /// Digit j = ceil((j+1)a) - ceil(ja); starts with 1.
    UpperC,
    /// Digit j = floor((j+1)a) - floor(ja); starts with 0.
    LowerC,
}

/// The Sturmian word of the oracle's slope as a lazy stream.
pub fn sturmian_stream(oracle: &AlphaOracle, variant: SturmianVariant) -> WordStream {
    WordStream::sturmian(oracle.clone(), variant == SturmianVariant::UpperC)
}

/// The n'th standard sequence word s_n: s_{-1} = 1, s_0 = 0,
/// s_n = s_{n-1}^{d_n} s_{n-2} with d_1 = a_1 - 1 and d_k = a_k after.
pub fn standard_sequence(oracle: &AlphaOracle, n: i64) -> Result<FiniteWord> {
    if n == -1 {
        return "1".parse();
    }
    if n == 0 {
        return "0".parse();
    }
    let conv = convergents(oracle, n as usize)?;
    if conv.entries.len() <= n as usize {
        return Err(Error::Unresolved(format!(
            "continued fraction terminates before index {n}"
        )));
    }
    let mut prev: FiniteWord = "1".parse().unwrap();
    let mut cur: FiniteWord = "0".parse().unwrap();
    for k in 1..=n as usize {
        let a = conv.entries[k].partial_quotient;
        let d = if k == 1 { a - 1 } else { a };
        let next = cur.repeat(d).concat(&prev);
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

/// The Christoffel word of slope p/q in the form 1 z 0 with z a palindrome:
/// digit j = ceil((j+1)p/q) - ceil(jp/q) for j = 0..q-1.
pub fn christoffel(p: u64, q: u64) -> Result<FiniteWord> {
    if p == 0 || q == 0 || p >= q {
        return Err(Error::InvalidSlope(format!(
            "christoffel slope must satisfy 0 < p < q, got {p}/{q}"
        )));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::InvalidSlope(format!(
            "christoffel slope {p}/{q} is not in lowest terms"
        )));
    }
    let ceil = |j: u64| -> u64 { (j * p).div_ceil(q) };
    let mut bits = Bits::with_capacity(q as usize);
    for j in 0..q {
        bits.push(ceil(j + 1) - ceil(j) == 1);
    }
    Ok(FiniteWord::new(bits))
}

/// The k'th standard word w_k of the oracle's slope: w_0 = 0, w_1 = 1, and
/// for k >= 2 the Christoffel word of the k'th convergent.
pub fn standard_word(oracle: &AlphaOracle, k: usize) -> Result<FiniteWord> {
    match k {
        0 => "0".parse(),
        1 => "1".parse(),
        _ => {
            let conv = convergents(oracle, k)?;
            if conv.entries.len() <= k {
                return Err(Error::Unresolved(format!(
                    "continued fraction terminates before index {k}"
                )));
            }
            let (p, q) = conv.pq_u64(k);
            christoffel(p, q)
        }
    }
}

/// Zero-run length family f(n) for the word constructor.
#[derive(Debug, Clone, PartialEq)]
pub enum RunFamily {
    /// f(n) = n.
    Identity,
    /// f(n) = n - floor(c*n/d) with c < d.
    Deficit { c: u64, d: u64 },
    /// f(n) = floor(beta^n) for rational beta > 1.
    PowerFloor { beta: Rational },
    /// f(n) = sum coeffs[i] * n^i, not all coefficients zero.
    Polynomial { coeffs: Vec<u64> },
}

impl RunFamily {
    /// The zero-run length for factor n (n >= 1).
    pub fn zero_run(&self, n: u64) -> Result<u64> {
        match self {
            RunFamily::Identity => Ok(n),
            RunFamily::Deficit { c, d } => {
                assert!(c < d && *d > 0, "deficit family requires c < d");
                let taken = (*c as u128 * n as u128 / *d as u128) as u64;
                Ok(n - taken)
            }
            RunFamily::PowerFloor { beta } => {
                assert!(
                    *beta > Rational::one(),
                    "power family requires beta > 1"
                );
                let num = beta.numer().to_biguint().expect("beta > 1");
                let den = beta.denom().to_biguint().expect("beta > 1");
                let n32 = u32::try_from(n).map_err(|_| {
                    Error::Unresolved(format!("power family exponent {n} too large"))
                })?;
                let value = num.pow(n32) / den.pow(n32);
                value.to_u64().ok_or_else(|| {
                    Error::Unresolved(format!("zero run floor(beta^{n}) exceeds u64"))
                })
            }
            RunFamily::Polynomial { coeffs } => {
                assert!(
                    coeffs.iter().any(|&c| c > 0),
                    "polynomial family requires a positive coefficient"
                );
                let mut acc: u128 = 0;
                let mut pow: u128 = 1;
                for &c in coeffs {
                    acc += c as u128 * pow;
                    pow = pow.saturating_mul(n as u128);
                }
                u64::try_from(acc)
                    .map_err(|_| Error::Unresolved("polynomial zero run exceeds u64".into()))
            }
        }
    }
}

/// Whether a factor writes its zeros before or after its ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunShape {
    /// Factor n is 0^{f(n)} 1^{m_n}; m balances the slope using the
    /// zero-run length: m = floor(((len + f(n)) a - h) / (1 - a)).
    ZerosFirst,
    /// Factor n is 1^{m_n} 0^{f(n)}; m balances the slope using the factor
    /// index: m = floor(((len + n) a - h) / (1 - a)).
    OnesFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorRecord {
    pub n: u64,
    /// Zero-run length f(n).
    pub f: u64,
    /// Ones-run length m_n.
    pub m: u64,
    /// Word length after this factor.
    pub len: u64,
    /// Word height after this factor.
    pub height: u64,
    /// Zeros written so far.
    pub zeros: u64,
    /// Staircase distance at the end of this factor.
    pub distance: i64,
}

/// Per-factor audit trail of a construction.
#[derive(Debug, Clone, Default)]
pub struct FactorLog {
    pub records: Vec<FactorRecord>,
}

impl FactorLog {
    /// CSV rows with header line "n,f,m,L,H,Z,D".
    pub fn csv_rows(&self) -> String {
        let mut out = String::from("n,f,m,L,H,Z,D\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.n, r.f, r.m, r.len, r.height, r.zeros, r.distance
            ));
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct ConstructorConfig {
    pub oracle: AlphaOracle,
    pub family: RunFamily,
    pub shape: RunShape,
    /// Number of factors to emit.
    pub factors: u64,
}

fn push_run(bits: &mut Bits, digit: bool, count: u64) {
    for _ in 0..count {
        bits.push(digit);
    }
}

/// Builds the word of `factors` factors together with its audit log.
pub fn construct_word(config: &ConstructorConfig) -> Result<(WordStream, FactorLog)> {
    let mut bits = Bits::new();
    let mut len = 0u64;
    let mut height = 0u64;
    let mut zeros = 0u64;
    let mut log = FactorLog::default();
    for n in 1..=config.factors {
        let f = config.family.zero_run(n)?;
        let mul = match config.shape {
            RunShape::ZerosFirst => len + f,
            RunShape::OnesFirst => len + n,
        };
        let m_big: BigInt = alpha_affine_floor(&config.oracle, mul, height)?;
        let m = m_big.to_i64().unwrap_or(i64::MIN);
        if m <= 0 {
            return Err(Error::ZeroRunTooLarge { factor: n, m });
        }
        let m = m as u64;
        match config.shape {
            RunShape::ZerosFirst => {
                push_run(&mut bits, false, f);
                push_run(&mut bits, true, m);
            }
            RunShape::OnesFirst => {
                push_run(&mut bits, true, m);
                push_run(&mut bits, false, f);
            }
        }
        len += f + m;
        height += m;
        zeros += f;
        let distance = staircase_distance(&config.oracle, len, n, f)?;
        log.records.push(FactorRecord {
            n,
            f,
            m,
            len,
            height,
            zeros,
            distance,
        });
    }
    Ok((WordStream::from_word(FiniteWord::new(bits)), log))
}

/// Distance between the constructed word and the Sturmian staircase at the
/// end of factor n: ceil((L + (n - f(n)) - 1) a) - ceil(L a).
fn staircase_distance(oracle: &AlphaOracle, l_n: u64, n: u64, f_n: u64) -> Result<i64> {
    let offset = n as i64 - f_n as i64 - 1;
    let shifted = l_n as i64 + offset;
    assert!(shifted >= 0, "distance offset before word start");
    let a = alpha_ceil(oracle, shifted as u64)? as i64;
    let b = alpha_ceil(oracle, l_n)? as i64;
    Ok(a - b)
}

/// Families with closed-form zero counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedFormFamily {
    /// f(n) = n - floor(5n/6).
    Sixths,
    /// f(n) = n - floor(n/q), q >= 2.
    General { q: u64 },
}

impl ClosedFormFamily {
    pub fn run_family(&self) -> RunFamily {
        match self {
            ClosedFormFamily::Sixths => RunFamily::Deficit { c: 5, d: 6 },
            ClosedFormFamily::General { q } => RunFamily::Deficit { c: 1, d: *q },
        }
    }

    fn zero_run(&self, n: u64) -> u64 {
        self.run_family().zero_run(n).expect("deficit family is total")
    }
}

/// Zeros among the first n factors, in closed form.
pub fn zero_count(n: u64, family: ClosedFormFamily) -> u64 {
    match family {
        ClosedFormFamily::Sixths => {
            let j = n / 6;
            let r = n % 6;
            6 * (j * (j + 1) / 2) + (j + 1) * r
        }
        ClosedFormFamily::General { q } => {
            assert!(q >= 2, "general family requires q >= 2");
            let j = n / q;
            let r = n % q;
            let triangle = if j == 0 { 0 } else { q * ((j - 1) * j / 2) };
            n * (n + 1) / 2 - triangle - j * (r + 1)
        }
    }
}

/// Height after n factors of the critical-slope construction, in closed
/// form: H_n = floor((Z_{n-1} + n) a / (1 - a)).
pub fn height_closed_form(
    oracle: &AlphaOracle,
    n: u64,
    family: ClosedFormFamily,
) -> Result<u64> {
    if n == 0 {
        return Ok(0);
    }
    let z_prev = zero_count(n - 1, family);
    let h = alpha_affine_floor(oracle, z_prev + n, 0)?;
    Ok(h.to_u64().expect("height fits u64"))
}

/// Staircase distance after n factors, from the closed forms alone.
pub fn distance_closed_form(
    oracle: &AlphaOracle,
    n: u64,
    family: ClosedFormFamily,
) -> Result<i64> {
    let l_n = zero_count(n, family) + height_closed_form(oracle, n, family)?;
    staircase_distance(oracle, l_n, n, family.zero_run(n))
}

/// Rigorous enclosure of the admissible exponential growth base
/// a (ln3/ln2 - 1) / (1 - a) for slopes above the critical one; exactly 1
/// at the critical slope itself.
pub fn growth_bound(oracle: &AlphaOracle, eps: &Rational) -> Result<(Rational, Rational)> {
    if *oracle.kind() == AlphaKind::LogRatio23 {
        return Ok((Rational::one(), Rational::one()));
    }
    let crit = AlphaOracle::log2_over_log3();
    let mut bits = 64u32;
    let cap = oracle.cap_bits();
    loop {
        let (alo, ahi) = oracle.enclosure_bits(bits);
        let (clo, chi) = crit.enclosure_bits(bits);
        if ahi < chi {
            // Slope not above the critical one (or not yet separated).
            if ahi < clo {
                return Err(Error::InvalidSlope(
                    "growth bound needs a slope above ln2/ln3".into(),
                ));
            }
        } else if alo > chi && ahi < Rational::one() {
            // K = (1 - c)/c, increasing as c shrinks.
            let k_lo = (Rational::one() - &chi) / &chi;
            let k_hi = (Rational::one() - &clo) / &clo;
            let lo = &k_lo * &alo / (Rational::one() - &alo);
            let hi = &k_hi * &ahi / (Rational::one() - &ahi);
            if &hi - &lo <= *eps {
                return Ok((lo, hi));
            }
        }
        if bits >= cap {
            return Err(Error::PrecisionExhausted { cap_bits: cap });
        }
        bits = (bits * 2).min(cap);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn crit() -> AlphaOracle {
        AlphaOracle::log2_over_log3()
    }

    const SIXTHS_PREFIX: &str = "1 0 1^4 0 1^3 0 1^3 0 1^4 0 1^3 0 1^4 0^2 \
        1^5 0^2 1^5 0^2 1^5 0^2 1^5 0^2 1^5 0^2 1^5 0^3 \
        1^7 0^3 1^7 0^3 1^7 0^3 1^7 0^3 1^7 0^3 1^7 0^4 \
        1^8 0^4 1^9 0^4 1^8 0^4 1^9 0^4 1^8 0^4 1^9 0^5";

    // Formula-derived; every factor is pinned independently by the
    // closed-form height and distance checks below.
    const QUARTERS_PREFIX: &str = "1 0 1^4 0^2 1^5 0^3 1^7 0^3 1^6 0^4 1^9 0^5 \
        1^10 0^6 1^12 0^6 1^12 0^7 1^14 0^8 1^15 0^9 1^17 0^9 1^17 0^10 1^19 0^11 1^21 0^12";

    #[test]
    fn convergents_of_critical_slope() {
        let conv = convergents(&crit(), 11).unwrap();
        assert!(!conv.complete);
        let expect: [(u64, u64); 12] = [
            (0, 1),
            (1, 1),
            (1, 2),
            (2, 3),
            (5, 8),
            (12, 19),
            (41, 65),
            (53, 84),
            (306, 485),
            (665, 1054),
            (15601, 24727),
            (31867, 50508),
        ];
        for (k, &(p, q)) in expect.iter().enumerate() {
            assert_eq!(conv.pq_u64(k), (p, q), "k={k}");
        }
        let quotients: Vec<u64> = conv.entries.iter().map(|e| e.partial_quotient).collect();
        assert_eq!(quotients, vec![0, 1, 1, 1, 2, 2, 3, 1, 5, 2, 23, 2]);
    }

    #[test]
    fn convergents_of_golden_slope() {
        let conv = convergents(&AlphaOracle::golden(), 10).unwrap();
        let expect: [(u64, u64); 11] = [
            (0, 1),
            (1, 1),
            (1, 2),
            (2, 3),
            (3, 5),
            (5, 8),
            (8, 13),
            (13, 21),
            (21, 34),
            (34, 55),
            (55, 89),
        ];
        for (k, &(p, q)) in expect.iter().enumerate() {
            assert_eq!(conv.pq_u64(k), (p, q), "k={k}");
        }
        assert!(conv
            .entries
            .iter()
            .skip(1)
            .all(|e| e.partial_quotient == 1));
    }

    #[test]
    fn convergents_of_rational_terminate() {
        let conv = convergents(&AlphaOracle::exact(rat(5, 8)), 20).unwrap();
        assert!(conv.complete);
        let got: Vec<(u64, u64)> = (0..conv.entries.len()).map(|k| conv.pq_u64(k)).collect();
        assert_eq!(got, vec![(0, 1), (1, 1), (1, 2), (2, 3), (5, 8)]);
    }

    #[test]
    fn convergent_determinants_alternate() {
        for oracle in [crit(), AlphaOracle::golden(), AlphaOracle::ln2()] {
            let conv = convergents(&oracle, 25).unwrap();
            for k in 1..conv.entries.len() {
                let a = BigInt::from(conv.entries[k].p.clone())
                    * BigInt::from(conv.entries[k - 1].q.clone());
                let b = BigInt::from(conv.entries[k - 1].p.clone())
                    * BigInt::from(conv.entries[k].q.clone());
                let det = a - b;
                let expect = if k % 2 == 1 { 1 } else { -1 };
                assert_eq!(det, BigInt::from(expect), "k={k}");
            }
        }
    }

    #[test]
    fn sturmian_stream_examples() {
        let s = sturmian_stream(&AlphaOracle::ln2(), SturmianVariant::UpperC);
        assert_eq!(s.prefix(10).unwrap().to_string(), "1110110110");
        let s = sturmian_stream(&crit(), SturmianVariant::UpperC);
        assert_eq!(s.prefix(19).unwrap().to_string(), "1101101101011011010");
        for oracle in [crit(), AlphaOracle::golden(), AlphaOracle::ln2()] {
            let upper = sturmian_stream(&oracle, SturmianVariant::UpperC);
            let lower = sturmian_stream(&oracle, SturmianVariant::LowerC);
            assert_eq!(upper.digit(0).unwrap(), true);
            assert_eq!(lower.digit(0).unwrap(), false);
        }
    }

    #[test]
    fn sturmian_heights_are_staircase() {
        for oracle in [crit(), AlphaOracle::golden(), AlphaOracle::ln2()] {
            let upper = sturmian_stream(&oracle, SturmianVariant::UpperC);
            let lower = sturmian_stream(&oracle, SturmianVariant::LowerC);
            for l in 1..=300u64 {
                let ceil = alpha_ceil(&oracle, l).unwrap();
                let floor = crate::exactnum::alpha_floor(&oracle, l).unwrap();
                assert_eq!(upper.height(l).unwrap(), ceil);
                assert_eq!(lower.height(l).unwrap(), floor);
            }
        }
    }

    #[test]
    fn standard_sequence_words() {
        assert_eq!(standard_sequence(&crit(), -1).unwrap().to_string(), "1");
        assert_eq!(standard_sequence(&crit(), 0).unwrap().to_string(), "0");
        assert_eq!(standard_sequence(&crit(), 1).unwrap().to_string(), "1");
        assert_eq!(standard_sequence(&crit(), 2).unwrap().to_string(), "10");
        // Suffix parity: s_n ends 10 for even n > 0, 01 for odd n > 1.
        let conv = convergents(&crit(), 12).unwrap();
        for n in 2..=12i64 {
            let s = standard_sequence(&crit(), n).unwrap();
            let len = s.len();
            let (p, q) = conv.pq_u64(n as usize);
            assert_eq!(len, q, "length is q_{n}");
            assert_eq!(s.height(), p, "height is p_{n}");
            let tail = (s.bit(len - 2), s.bit(len - 1));
            if n % 2 == 0 {
                assert_eq!(tail, (true, false), "s_{n} ends 10");
            } else {
                assert_eq!(tail, (false, true), "s_{n} ends 01");
            }
        }
    }

    #[test]
    fn christoffel_examples() {
        assert_eq!(christoffel(5, 8).unwrap().to_string(), "11011010");
        assert_eq!(christoffel(1, 2).unwrap().to_string(), "10");
        let w5 = christoffel(12, 19).unwrap();
        assert_eq!(w5.to_string(), format!("110{}{}", "11011010", "11011010"));
        assert!(matches!(christoffel(2, 4), Err(Error::InvalidSlope(_))));
        assert!(matches!(christoffel(3, 2), Err(Error::InvalidSlope(_))));
        assert!(matches!(christoffel(0, 5), Err(Error::InvalidSlope(_))));
    }

    #[test]
    fn christoffel_central_palindrome() {
        for q in 2..=60u64 {
            for p in 1..q {
                if p.gcd(&q) != 1 {
                    continue;
                }
                let w = christoffel(p, q).unwrap();
                assert_eq!(w.len(), q);
                assert_eq!(w.height(), p);
                assert!(w.bit(0));
                assert!(!w.bit(q - 1));
                let z: Vec<bool> = (1..q - 1).map(|i| w.bit(i)).collect();
                let mut rev = z.clone();
                rev.reverse();
                assert_eq!(z, rev, "central word of {p}/{q} not a palindrome");
            }
        }
    }

    #[test]
    fn standard_words_match_christoffel_and_prefixes() {
        assert_eq!(standard_word(&crit(), 0).unwrap().to_string(), "0");
        assert_eq!(standard_word(&crit(), 1).unwrap().to_string(), "1");
        assert_eq!(standard_word(&crit(), 3).unwrap().to_string(), "110");
        assert_eq!(standard_word(&crit(), 4).unwrap().to_string(), "11011010");
        let conv = convergents(&crit(), 11).unwrap();
        let stream = sturmian_stream(&crit(), SturmianVariant::UpperC);
        for k in 2..=11usize {
            let w = standard_word(&crit(), k).unwrap();
            // Route two: 1 + (s_k minus last two digits) + 0.
            let s = standard_sequence(&crit(), k as i64).unwrap();
            let mut rebuilt = "1".parse::<FiniteWord>().unwrap();
            rebuilt = rebuilt.concat(&s.prefix(s.len() - 2));
            rebuilt = rebuilt.concat(&"0".parse().unwrap());
            assert_eq!(w, rebuilt, "k={k}");
            let (_, q) = conv.pq_u64(k);
            let prefix = stream.prefix(q).unwrap();
            if k % 2 == 1 {
                assert_eq!(prefix, w, "odd k={k}: w_k is a prefix of 1c");
            } else {
                // Even k: prefix is w_k with the final 0 flipped to 1.
                assert_eq!(prefix.prefix(q - 1), w.prefix(q - 1), "k={k}");
                assert!(prefix.bit(q - 1));
                assert!(!w.bit(q - 1));
            }
        }
    }

    #[test]
    fn constructed_zeros_first_identity() {
        let (stream, log) = construct_word(&ConstructorConfig {
            oracle: AlphaOracle::ln2(),
            family: RunFamily::Identity,
            shape: RunShape::ZerosFirst,
            factors: 10,
        })
        .unwrap();
        let expect: FiniteWord =
            "0 1^2 0^2 1^4 0^3 1^7 0^4 1^9 0^5 1^11 0^6 1^14 0^7 1^16 0^8 1^18 0^9 1^20 0^10 1^23"
                .parse()
                .unwrap();
        let got = stream.prefix(stream.finite_len().unwrap()).unwrap();
        assert_eq!(got, expect);
        let ms: Vec<u64> = log.records.iter().map(|r| r.m).collect();
        assert_eq!(ms, vec![2, 4, 7, 9, 11, 14, 16, 18, 20, 23]);
    }

    #[test]
    fn constructed_zeros_first_power() {
        let (stream, log) = construct_word(&ConstructorConfig {
            oracle: AlphaOracle::ln2(),
            family: RunFamily::PowerFloor { beta: rat(13, 10) },
            shape: RunShape::ZerosFirst,
            factors: 11,
        })
        .unwrap();
        let expect: FiniteWord =
            "0 1^2 0 1^2 0^2 1^5 0^2 1^4 0^3 1^7 0^4 1^9 0^6 1^13 0^8 1^18 0^10 1^23 0^13 1^29 0^17 1^39"
                .parse()
                .unwrap();
        let got = stream.prefix(stream.finite_len().unwrap()).unwrap();
        assert_eq!(got, expect);
        let fs: Vec<u64> = log.records.iter().map(|r| r.f).collect();
        assert_eq!(fs, vec![1, 1, 2, 2, 3, 4, 6, 8, 10, 13, 17]);
    }

    #[test]
    fn constructed_ones_first_sixths() {
        let (stream, log) = construct_word(&ConstructorConfig {
            oracle: crit(),
            family: RunFamily::Deficit { c: 5, d: 6 },
            shape: RunShape::OnesFirst,
            factors: 25,
        })
        .unwrap();
        let expect: FiniteWord = SIXTHS_PREFIX.parse().unwrap();
        let got = stream.prefix(stream.finite_len().unwrap()).unwrap();
        assert_eq!(
            got,
            expect,
            "\ngot      {}\nexpected {}",
            got.runlength_string(),
            expect.runlength_string()
        );
        assert_eq!(log.records[4].m, 4, "m_5 = 4");
        assert_eq!(log.records[3].height, 11, "H_4 = 11");
        assert_eq!(log.records[3].len, 15, "L_4 = 15");
    }

    #[test]
    fn constructed_ones_first_quarters() {
        let (stream, _) = construct_word(&ConstructorConfig {
            oracle: crit(),
            family: RunFamily::Deficit { c: 1, d: 4 },
            shape: RunShape::OnesFirst,
            factors: 15,
        })
        .unwrap();
        let expect: FiniteWord = QUARTERS_PREFIX.parse().unwrap();
        let got = stream.prefix(stream.finite_len().unwrap()).unwrap();
        assert_eq!(
            got,
            expect,
            "\ngot      {}\nexpected {}",
            got.runlength_string(),
            expect.runlength_string()
        );
    }

    #[test]
    fn factor_log_consistency() {
        let (_, log) = construct_word(&ConstructorConfig {
            oracle: crit(),
            family: RunFamily::Deficit { c: 5, d: 6 },
            shape: RunShape::OnesFirst,
            factors: 200,
        })
        .unwrap();
        for (i, r) in log.records.iter().enumerate() {
            let n = i as u64 + 1;
            assert_eq!(r.n, n);
            assert_eq!(r.len, r.zeros + r.height, "L = Z + H at n={n}");
            assert_eq!(
                r.zeros,
                zero_count(n, ClosedFormFamily::Sixths),
                "zero count closed form at n={n}"
            );
            assert_eq!(
                r.height,
                height_closed_form(&crit(), n, ClosedFormFamily::Sixths).unwrap(),
                "height closed form at n={n}"
            );
            assert_eq!(
                r.distance,
                distance_closed_form(&crit(), n, ClosedFormFamily::Sixths).unwrap(),
                "distance closed form at n={n}"
            );
        }
    }

    #[test]
    fn quarters_zero_count_matches_log() {
        let (_, log) = construct_word(&ConstructorConfig {
            oracle: crit(),
            family: RunFamily::Deficit { c: 1, d: 4 },
            shape: RunShape::OnesFirst,
            factors: 200,
        })
        .unwrap();
        for (i, r) in log.records.iter().enumerate() {
            let n = i as u64 + 1;
            assert_eq!(r.zeros, zero_count(n, ClosedFormFamily::General { q: 4 }));
        }
    }

    #[test]
    fn zero_count_examples() {
        assert_eq!(zero_count(7, ClosedFormFamily::Sixths), 8);
        assert_eq!(zero_count(6, ClosedFormFamily::Sixths), 6);
        assert_eq!(zero_count(4, ClosedFormFamily::General { q: 4 }), 9);
        assert_eq!(zero_count(8, ClosedFormFamily::General { q: 4 }), 30);
        assert_eq!(zero_count(3, ClosedFormFamily::General { q: 4 }), 6);
    }

    #[test]
    fn distance_sequences_match_reference() {
        let sixths: Vec<i64> = (1..=31)
            .map(|n| distance_closed_form(&crit(), n, ClosedFormFamily::Sixths).unwrap())
            .collect();
        assert_eq!(
            sixths,
            vec![
                -1, 0, 1, 1, 2, 2, 3, 3, 4, 4, 5, 5, 5, 6, 7, 8, 8, 9, 9, 9, 10, 11, 11, 12,
                12, 13, 13, 14, 15, 15, 15
            ]
        );
        let quarters: Vec<i64> = (1..=59)
            .map(|n| {
                distance_closed_form(&crit(), n, ClosedFormFamily::General { q: 4 }).unwrap()
            })
            .collect();
        assert_eq!(
            quarters,
            vec![
                -1, -1, -1, 0, 0, 0, 0, 1, 1, 1, 0, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 3, 2, 3, 3,
                3, 3, 4, 4, 4, 4, 4, 4, 4, 4, 5, 5, 5, 5, 6, 6, 6, 6, 6, 6, 6, 6, 7, 7, 7, 7,
                8, 7, 7, 7, 8, 8, 8, 8
            ]
        );
    }

    #[test]
    fn distance_repetition_caps() {
        let mut counts = std::collections::HashMap::new();
        for n in 1..=500u64 {
            let d = distance_closed_form(&crit(), n, ClosedFormFamily::Sixths).unwrap();
            *counts.entry(d).or_insert(0u32) += 1;
        }
        // Drop the last value: its run may continue past the window.
        let dmax = *counts.keys().max().unwrap();
        counts.remove(&dmax);
        assert!(counts.values().all(|&c| c <= 3), "sixths cap exceeded");
        let mut counts = std::collections::HashMap::new();
        for n in 1..=500u64 {
            let d = distance_closed_form(&crit(), n, ClosedFormFamily::General { q: 4 }).unwrap();
            *counts.entry(d).or_insert(0u32) += 1;
        }
        let dmax = *counts.keys().max().unwrap();
        counts.remove(&dmax);
        assert!(counts.values().all(|&c| c <= 8), "quarters cap exceeded");
    }

    #[test]
    fn growth_bound_values() {
        let eps = rat(1, 1_000_000_000);
        let (lo, hi) = growth_bound(&crit(), &eps).unwrap();
        assert_eq!(lo, Rational::one());
        assert_eq!(hi, Rational::one());
        // True value 1.3213667...; printed truncations show 1.321366.
        let (lo, hi) = growth_bound(&AlphaOracle::ln2(), &eps).unwrap();
        assert!(lo >= rat(1_321_366, 1_000_000), "enclosure too low");
        assert!(hi < rat(1_321_367, 1_000_000), "enclosure too high");
        assert!(&hi - &lo <= eps);
        assert!(matches!(
            growth_bound(&AlphaOracle::golden(), &eps),
            Err(Error::InvalidSlope(_))
        ));
        let (lo, _) = growth_bound(&AlphaOracle::exact(rat(99, 100)), &eps).unwrap();
        assert!(lo > rat(50, 1));
    }
}
