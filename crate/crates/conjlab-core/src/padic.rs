//! Base-2 and base-3 expansions of rationals with invertible denominator,
//! residue chains read off cycle-value sequences, and the digit streams a
//! family of prefix lengths produces in the 3-adic integers.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::conjugacy::{affine_of, cycle_value, phi_finite};
use crate::error::{Error, Result};
use crate::exactnum::{prime_power, reduce_mod_prime_power, AlphaOracle, Rational, Residue};
use crate::sturmian::convergents;
use crate::words::{FiniteWord, PhiAccumulator, WordStream};

/// A truncated p-adic integer for p in {2, 3}: digits plus the residue
/// chain they encode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicExpansion {
    /// 2 or 3.
    pub prime: u8,
    /// Digits least-significant first, each below `prime`.
    pub digits: Vec<u8>,
    /// r_n = value mod prime^n for n = 1..=digits.len().
    pub residues: Vec<Residue>,
    /// (preperiod, period) when the digit recurrence revisited a state
    /// within the computed window. Always eventually present for rationals.
    pub period: Option<(u64, u64)>,
}

impl PadicExpansion {
    /// Number of digits held.
    pub fn precision(&self) -> u64 {
        self.digits.len() as u64
    }

    /// Digits as ASCII, least-significant first: "1101" means
    /// d0=1, d1=1, d2=0, d3=1.
    pub fn digit_string(&self) -> String {
        ascii_digits(&self.digits)
    }
}

fn ascii_digits(digits: &[u8]) -> String {
    digits.iter().map(|d| char::from(b'0' + d)).collect()
}

/// First `n` digits of the p-adic expansion of `x`, for p in {2, 3}.
///
/// The expansion of a rational is eventually periodic; when the digit
/// recurrence revisits a state inside the window the (preperiod, period)
/// pair is recorded, and the digits, head plus repeating block, determine
/// `x` again via [`periodic_padic_value`].
pub fn rational_to_padic(x: &Rational, prime: u8, n: u32) -> Result<PadicExpansion> {
    assert!(prime == 2 || prime == 3, "prime must be 2 or 3");
    let p_int = BigInt::from(prime);
    let den = x.denom().clone();
    if den.mod_floor(&p_int).is_zero() {
        return Err(Error::DenominatorNotInvertible { prime });
    }
    // 1 mod 2, and 1 or 2 mod 3: the denominator class is its own inverse.
    let inv_den = den.mod_floor(&p_int).to_u8().expect("below prime");

    let mut num = x.numer().clone();
    let mut digits = Vec::with_capacity(n as usize);
    let mut residues = Vec::with_capacity(n as usize);
    let mut racc = BigUint::zero();
    let mut ppow = BigUint::one();
    let mut seen: HashMap<BigInt, u64> = HashMap::new();
    let mut period = None;
    for i in 0..n as u64 {
        if period.is_none() {
            if let Some(&first) = seen.get(&num) {
                period = Some((first, i - first));
            } else {
                seen.insert(num.clone(), i);
            }
        }
        let num_mod = num.mod_floor(&p_int).to_u8().expect("below prime");
        let d = (num_mod * inv_den) % prime;
        digits.push(d);
        num = (num - BigInt::from(d) * &den) / &p_int;
        racc += d * &ppow;
        ppow *= prime;
        residues.push(Residue::new(racc.clone(), prime, (i + 1) as u32));
    }
    // The state after the last digit is already known; a repeat there still
    // closes the period without computing further digits.
    if period.is_none() {
        if let Some(&first) = seen.get(&num) {
            period = Some((first, n as u64 - first));
        }
    }
    Ok(PadicExpansion {
        prime,
        digits,
        residues,
        period,
    })
}

/// The rational a periodic digit pattern stands for: digits 0..preperiod
/// once, then the next `period` digits repeated forever.
pub fn periodic_padic_value(prime: u8, digits: &[u8], preperiod: u64, period: u64) -> Rational {
    assert!(prime == 2 || prime == 3, "prime must be 2 or 3");
    assert!(period >= 1, "period must be at least 1");
    assert!(
        preperiod + period <= digits.len() as u64,
        "digits must cover one full repeating block"
    );
    let p = BigInt::from(prime);
    let mut head = BigInt::zero();
    let mut ppow = BigInt::one();
    for i in 0..preperiod as usize {
        head += BigInt::from(digits[i]) * &ppow;
        ppow *= &p;
    }
    let mut block = BigInt::zero();
    let mut qpow = BigInt::one();
    for j in 0..period as usize {
        block += BigInt::from(digits[preperiod as usize + j]) * &qpow;
        qpow *= &p;
    }
    // head + p^preperiod * block / (1 - p^period), exactly.
    Rational::from(head) + Rational::new(ppow * block, BigInt::one() - qpow)
}

/// Digits of the p-adic integer a compatible residue chain determines:
/// digit_n = (r_{n+1} - r_n) / p^n with r_0 = 0.
///
/// The chain must carry exponents 1, 2, ... in order, all for `prime`, and
/// consecutive members must agree modulo the smaller modulus; any breach
/// reports the index of the offending element.
pub fn digits_from_residues(chain: &[Residue], prime: u8) -> Result<Vec<u8>> {
    assert!(prime == 2 || prime == 3, "prime must be 2 or 3");
    for (i, r) in chain.iter().enumerate() {
        if r.prime != prime || r.exponent as usize != i + 1 {
            return Err(Error::IncompatibleChain { index: i });
        }
    }
    let values: Vec<BigUint> = chain.iter().map(|r| r.value.clone()).collect();
    extract_digits(&values, prime)
}

/// Digit extraction on raw residue values, exponents implied 1..=len.
fn extract_digits(values: &[BigUint], prime: u8) -> Result<Vec<u8>> {
    let p = BigUint::from(prime);
    let mut digits = Vec::with_capacity(values.len());
    let mut prev = BigUint::zero();
    let mut pn = BigUint::one();
    for (i, r) in values.iter().enumerate() {
        if r % &pn != prev {
            return Err(Error::IncompatibleChain { index: i });
        }
        let d = (r - &prev) / &pn;
        if d >= p {
            return Err(Error::IncompatibleChain { index: i });
        }
        digits.push(d.to_u8().expect("digit below prime"));
        prev = r.clone();
        pn *= &p;
    }
    Ok(digits)
}

/// 2-adic digits of the series value along `v`, read at precision `l`.
///
/// The residue chain is r_n = cycle_value(prefix n) mod 2^n. Each residue
/// is recomputed through the series route, -phi / 3^h mod 2^n, and the two
/// must match digit for digit; the chain then yields the first `l` digits
/// of the 2-adic limit, which exist even when the real-valued series
/// diverges.
pub fn phi_2adic(v: &WordStream, l: u32) -> Result<PadicExpansion> {
    let mut residues = Vec::with_capacity(l as usize);
    for n in 1..=l {
        let u = v.prefix(n as u64)?;
        let via_cycle = reduce_mod_prime_power(&cycle_value(&u), 2, n)?;
        let via_series = reduce_mod_prime_power(&phi_finite(&u), 2, n)?;
        assert_eq!(
            via_cycle.value, via_series.value,
            "cycle and series routes disagree mod 2^{}",
            n
        );
        residues.push(via_cycle);
    }
    let digits = digits_from_residues(&residues, 2)?;
    Ok(PadicExpansion {
        prime: 2,
        digits,
        residues,
        period: None,
    })
}

/// 3-adic digits read off the cycle values of `v`-prefixes cut at the
/// lengths in `cuts`, up to `depth` digits.
///
/// A residue mod 3^n counts as stabilized once two consecutive cuts yield
/// it identically with n at most the height of the smaller cut; stabilized
/// residues are frozen, and a later cut contradicting one, or the family
/// running out before `depth` digits stabilize, reports NotStabilizing.
pub fn output_3adic(v: &WordStream, cuts: &[u64], depth: u32) -> Result<PadicExpansion> {
    assert!(
        cuts.windows(2).all(|w| w[0] < w[1]),
        "cuts must be strictly increasing"
    );
    assert!(cuts.first().is_none_or(|&l| l >= 1), "cuts start at 1");
    if depth == 0 {
        return Ok(PadicExpansion {
            prime: 3,
            digits: Vec::new(),
            residues: Vec::new(),
            period: None,
        });
    }
    if cuts.len() < 2 {
        return Err(Error::NotStabilizing {
            digit: 0,
            prefix_len: cuts.last().copied().unwrap_or(0),
        });
    }

    struct Member {
        length: u64,
        cap: u32,
        residue: BigUint,
    }
    let mut acc = PhiAccumulator::new();
    let mut pos = 0u64;
    let mut members = Vec::with_capacity(cuts.len());
    for &l in cuts {
        while pos < l {
            acc.push(v.digit(pos)?);
            pos += 1;
        }
        let h = acc.ones();
        let cap = h.min(depth as u64) as u32;
        let residue = if cap == 0 {
            BigUint::zero()
        } else {
            let den = BigInt::from(prime_power(2, l)) - BigInt::from(prime_power(3, h));
            let value = Rational::new(BigInt::from(acc.phi().clone()), den);
            reduce_mod_prime_power(&value, 3, cap)?.value
        };
        members.push(Member {
            length: l,
            cap,
            residue,
        });
    }

    // Heights never decrease along cuts, so caps never decrease and the
    // emitted chain never outruns the pair under inspection.
    let mut emitted: Vec<Residue> = Vec::new();
    for pair in members.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let cap = a.cap;
        if cap == 0 {
            continue;
        }
        let rb = &b.residue % prime_power(3, cap as u64);
        let m = emitted.len() as u32;
        if m > 0 {
            let ra_m = &a.residue % prime_power(3, m as u64);
            if ra_m != emitted[m as usize - 1].value {
                let gap = abs_diff(&ra_m, &emitted[m as usize - 1].value);
                return Err(Error::NotStabilizing {
                    digit: valuation3(gap, m),
                    prefix_len: a.length,
                });
            }
        }
        let agreement = valuation3(abs_diff(&a.residue, &rb), cap);
        for n in (m + 1)..=agreement.min(depth) {
            emitted.push(Residue::new(a.residue.clone(), 3, n));
        }
        if emitted.len() as u32 >= depth {
            break;
        }
    }
    if (emitted.len() as u32) < depth {
        return Err(Error::NotStabilizing {
            digit: emitted.len() as u32,
            prefix_len: *cuts.last().expect("at least two cuts"),
        });
    }
    emitted.truncate(depth as usize);
    let digits = digits_from_residues(&emitted, 3)?;
    Ok(PadicExpansion {
        prime: 3,
        digits,
        residues: emitted,
        period: None,
    })
}

fn abs_diff(a: &BigUint, b: &BigUint) -> BigUint {
    if a >= b {
        a - b
    } else {
        b - a
    }
}

/// Largest n <= cap with 3^n dividing d, and cap itself for d = 0.
fn valuation3(mut d: BigUint, cap: u32) -> u32 {
    if d.is_zero() {
        return cap;
    }
    let three = BigUint::from(3u8);
    let mut v = 0;
    while (&d % &three).is_zero() {
        d /= &three;
        v += 1;
        if v == cap {
            break;
        }
    }
    v
}

/// Convergent denominators q_k of the slope for k >= 1 of one parity
/// class, in increasing order. Rational slopes contribute the convergents
/// they have; k_max caps the index either way.
pub fn convergent_cuts(oracle: &AlphaOracle, odd_k: bool, k_max: usize) -> Result<Vec<u64>> {
    let conv = convergents(oracle, k_max)?;
    let mut cuts = Vec::new();
    for (k, c) in conv.entries.iter().enumerate() {
        if k == 0 || (k % 2 == 1) != odd_k {
            continue;
        }
        let q = c
            .q
            .to_u64()
            .ok_or_else(|| Error::Unresolved("convergent denominator exceeds u64".into()))?;
        cuts.push(q);
    }
    Ok(cuts)
}

/// One line of the length-by-length 3-adic summary of a stream: the prefix
/// word, the value its affine map takes at 0, the cycle value, the cycle
/// value's residues mod 3^n for n up to the prefix height, and the digits
/// those residues spell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeAdicRow {
    pub length: u64,
    pub word: FiniteWord,
    pub map_at_zero: Rational,
    pub cycle: Rational,
    pub residues: Vec<BigUint>,
    pub digits: Vec<u8>,
}

impl ThreeAdicRow {
    /// Digits as ASCII, least-significant first.
    pub fn digit_string(&self) -> String {
        ascii_digits(&self.digits)
    }
}

/// The summary row for the length-`l` prefix of `v`.
pub fn three_adic_row(v: &WordStream, l: u64) -> Result<ThreeAdicRow> {
    assert!(l >= 1, "rows need a nonempty prefix");
    let word = v.prefix(l)?;
    let h = word.height();
    let map_at_zero = affine_of(&word).offset;
    let cycle = cycle_value(&word);
    let mut residues = Vec::with_capacity(h as usize);
    if h > 0 {
        let top = reduce_mod_prime_power(&cycle, 3, h as u32)?.value;
        for n in 1..=h {
            residues.push(&top % prime_power(3, n));
        }
    }
    let digits = extract_digits(&residues, 3)?;
    Ok(ThreeAdicRow {
        length: l,
        word,
        map_at_zero,
        cycle,
        residues,
        digits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{parse_rational, rat, rat_int};
    use crate::sturmian::{sturmian_stream, SturmianVariant};

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn golden() -> WordStream {
        sturmian_stream(&AlphaOracle::golden(), SturmianVariant::UpperC)
    }

    fn critical() -> WordStream {
        sturmian_stream(&AlphaOracle::log2_over_log3(), SturmianVariant::UpperC)
    }

    fn residue_u64s(chain: &[Residue]) -> Vec<u64> {
        chain.iter().map(|r| r.value.to_u64().unwrap()).collect()
    }

    #[test]
    fn rational_to_padic_examples() {
        let e = rational_to_padic(&rat_int(-1), 2, 6).unwrap();
        assert_eq!(e.digit_string(), "111111");
        assert_eq!(residue_u64s(&e.residues), vec![1, 3, 7, 15, 31, 63]);
        assert_eq!(e.period, Some((0, 1)));

        let e = rational_to_padic(&rat(1, 3), 2, 7).unwrap();
        assert_eq!(e.digit_string(), "1101010");
        assert_eq!(residue_u64s(&e.residues), vec![1, 3, 3, 11, 11, 43, 43]);
        assert_eq!(e.period, Some((1, 2)));

        let e = rational_to_padic(&rat_int(5), 3, 3).unwrap();
        assert_eq!(e.digit_string(), "210");
        assert_eq!(residue_u64s(&e.residues), vec![2, 5, 5]);
        assert_eq!(e.period, Some((2, 1)));

        let e = rational_to_padic(&rat_int(-1), 3, 4).unwrap();
        assert_eq!(e.digit_string(), "2222");
        assert_eq!(residue_u64s(&e.residues), vec![2, 8, 26, 80]);

        assert!(matches!(
            rational_to_padic(&rat(1, 2), 2, 4),
            Err(Error::DenominatorNotInvertible { prime: 2 })
        ));
        assert!(matches!(
            rational_to_padic(&rat(1, 3), 3, 4),
            Err(Error::DenominatorNotInvertible { prime: 3 })
        ));
    }

    #[test]
    fn digits_reconstruct_residues() {
        for x in [rat(1, 5), rat(-65, 7), rat(45, 1), rat(-7, 55)] {
            for prime in [2u8, 3u8] {
                let e = rational_to_padic(&x, prime, 24).unwrap();
                let mut acc = BigUint::zero();
                let mut ppow = BigUint::one();
                for (i, d) in e.digits.iter().enumerate() {
                    acc += d * &ppow;
                    ppow *= prime;
                    assert_eq!(acc, e.residues[i].value);
                }
            }
        }
    }

    #[test]
    fn round_trip_through_the_periodic_pattern() {
        for prime in [2u8, 3u8] {
            for num in -12i64..=12 {
                for den in [1i64, 5, 7, 11, 13, 25, 49] {
                    let x = rat(num, den);
                    let e = rational_to_padic(&x, prime, 60).unwrap();
                    let (pre, per) = e.period.expect("state must repeat inside 60 digits");
                    assert_eq!(periodic_padic_value(prime, &e.digits, pre, per), x);
                }
            }
        }
    }

    #[test]
    fn digits_from_residues_examples() {
        let chain = [
            Residue::new(BigUint::from(1u8), 2, 1),
            Residue::new(BigUint::from(3u8), 2, 2),
            Residue::new(BigUint::from(7u8), 2, 3),
        ];
        assert_eq!(digits_from_residues(&chain, 2).unwrap(), vec![1, 1, 1]);

        let chain = [
            Residue::new(BigUint::from(2u8), 3, 1),
            Residue::new(BigUint::from(8u8), 3, 2),
            Residue::new(BigUint::from(26u8), 3, 3),
        ];
        assert_eq!(digits_from_residues(&chain, 3).unwrap(), vec![2, 2, 2]);

        let chain = [
            Residue::new(BigUint::from(1u8), 2, 1),
            Residue::new(BigUint::from(2u8), 2, 2),
        ];
        assert!(matches!(
            digits_from_residues(&chain, 2),
            Err(Error::IncompatibleChain { index: 1 })
        ));

        // Metadata out of order counts as incompatible too.
        let chain = [Residue::new(BigUint::from(1u8), 2, 2)];
        assert!(matches!(
            digits_from_residues(&chain, 2),
            Err(Error::IncompatibleChain { index: 0 })
        ));
    }

    #[test]
    fn phi_2adic_on_the_ln2_stream() {
        let v = sturmian_stream(&AlphaOracle::ln2(), SturmianVariant::UpperC);
        let e = phi_2adic(&v, 12).unwrap();
        assert_eq!(
            residue_u64s(&e.residues),
            vec![1, 3, 7, 7, 7, 39, 39, 167, 167, 679, 679, 2727]
        );
        assert_eq!(e.digit_string(), "111001010101");
    }

    #[test]
    fn phi_2adic_on_the_golden_stream() {
        let e = phi_2adic(&golden(), 31).unwrap();
        assert_eq!(e.digit_string(), "1101111011100100011001111010001");
    }

    #[test]
    fn phi_2adic_on_the_critical_stream() {
        let e = phi_2adic(&critical(), 57).unwrap();
        assert_eq!(
            e.digit_string(),
            "110111111101101001111101100100111101010100000010100000001"
        );
    }

    #[test]
    fn phi_2adic_starts_with_the_first_parity_digit() {
        let streams = [
            WordStream::from_word("10010100".parse().unwrap()),
            WordStream::from_word("011".parse().unwrap()),
            sturmian_stream(&AlphaOracle::ln2(), SturmianVariant::LowerC),
            golden(),
        ];
        for v in streams {
            let e = phi_2adic(&v, 3).unwrap();
            assert_eq!(e.digits[0] == 1, v.digit(0).unwrap());
        }
    }

    #[test]
    fn convergent_cuts_examples() {
        let g = AlphaOracle::golden();
        assert_eq!(
            convergent_cuts(&g, true, 11).unwrap(),
            vec![1, 3, 8, 21, 55, 144]
        );
        assert_eq!(convergent_cuts(&g, false, 8).unwrap(), vec![2, 5, 13, 34]);

        let c = AlphaOracle::log2_over_log3();
        assert_eq!(
            convergent_cuts(&c, true, 9).unwrap(),
            vec![1, 3, 19, 84, 1054]
        );
        assert_eq!(
            convergent_cuts(&c, false, 10).unwrap(),
            vec![2, 8, 65, 485, 24727]
        );

        let r = AlphaOracle::exact(rat(5, 8));
        assert_eq!(convergent_cuts(&r, true, 20).unwrap(), vec![1, 3]);
        assert_eq!(convergent_cuts(&r, false, 20).unwrap(), vec![2, 8]);
    }

    #[test]
    fn output_3adic_on_the_golden_stream() {
        let cuts = convergent_cuts(&AlphaOracle::golden(), true, 11).unwrap();
        let e = output_3adic(&golden(), &cuts, 30).unwrap();
        assert_eq!(e.digit_string(), "101121021021202112100201211012");
        assert_eq!(
            residue_u64s(&e.residues[..14]),
            vec![
                1, 1, 10, 37, 199, 442, 442, 4816, 11377, 11377, 129475, 306622, 1369504,
                1369504
            ]
        );
    }

    #[test]
    fn output_3adic_on_the_critical_stream_odd_cuts() {
        let full = "101111011011011022120100121111011121211122021111122112";
        let cuts = convergent_cuts(&AlphaOracle::log2_over_log3(), true, 9).unwrap();
        let e = output_3adic(&critical(), &cuts, 52).unwrap();
        assert_eq!(e.digit_string(), full[..52]);
    }

    #[test]
    fn output_3adic_on_the_critical_stream_even_cuts() {
        let full = "221222212212212210101221120000022220010001120000001100";
        let cuts = convergent_cuts(&AlphaOracle::log2_over_log3(), false, 10).unwrap();
        let e = output_3adic(&critical(), &cuts, 54).unwrap();
        assert_eq!(e.digit_string(), full);
    }

    #[test]
    fn output_3adic_reports_when_digits_do_not_stabilize() {
        // Consecutive lengths have clashing first residues here.
        let err = output_3adic(&critical(), &[5, 6, 7], 5).unwrap_err();
        assert_eq!(
            err,
            Error::NotStabilizing {
                digit: 0,
                prefix_len: 7
            }
        );

        let err = output_3adic(&critical(), &[10], 5).unwrap_err();
        assert_eq!(
            err,
            Error::NotStabilizing {
                digit: 0,
                prefix_len: 10
            }
        );
    }

    #[test]
    fn three_adic_row_table() {
        let rows: [(u64, &str, &str, &str, &[u64], &str); 11] = [
            (1, "1", "1/2", "-1", &[2], "2"),
            (2, "11", "5/4", "-1", &[2, 8], "22"),
            (3, "110", "5/8", "-5", &[1, 4], "11"),
            (4, "1101", "23/16", "-23/11", &[2, 2, 20], "202"),
            (5, "11011", "85/32", "-85/49", &[2, 8, 17, 71], "2212"),
            (6, "110110", "85/64", "-5", &[1, 4, 22, 76], "1122"),
            (7, "1101101", "319/128", "-319/115", &[2, 2, 20, 74, 236], "20222"),
            (
                8,
                "11011011",
                "1085/256",
                "-1085/473",
                &[2, 8, 17, 71, 233, 719],
                "221222",
            ),
            (
                9,
                "110110110",
                "1085/512",
                "-5",
                &[1, 4, 22, 76, 238, 724],
                "112222",
            ),
            (
                10,
                "1101101101",
                "3767/1024",
                "-3767/1163",
                &[2, 2, 20, 74, 236, 722, 2180],
                "2022222",
            ),
            (
                11,
                "11011011010",
                "3767/2048",
                "-3767/139",
                &[1, 1, 10, 37, 118, 361, 1090],
                "1011111",
            ),
        ];
        let v = critical();
        for (l, word, t0, cycle, residues, digits) in rows {
            let row = three_adic_row(&v, l).unwrap();
            assert_eq!(row.word.to_string(), word, "word at length {}", l);
            assert_eq!(row.map_at_zero, q(t0), "map value at length {}", l);
            assert_eq!(row.cycle, q(cycle), "cycle value at length {}", l);
            let got: Vec<u64> = row.residues.iter().map(|r| r.to_u64().unwrap()).collect();
            assert_eq!(got, residues, "residues at length {}", l);
            assert_eq!(row.digit_string(), digits, "digits at length {}", l);
        }
    }

    #[test]
    fn first_row_digit_less_one_gives_the_parity_digit() {
        // Holds whenever the stream has no 00 factor, as here.
        let v = critical();
        for l in 1..=40 {
            let row = three_adic_row(&v, l).unwrap();
            assert_eq!(row.digits[0] >= 1, true);
            assert_eq!(row.digits[0] - 1 == 1, v.digit(l - 1).unwrap());
        }
    }

    #[test]
    fn map_value_matches_cycle_value_mod_3h() {
        for v in [critical(), golden()] {
            for l in 1..=30 {
                let row = three_adic_row(&v, l).unwrap();
                let h = row.word.height();
                let lhs = reduce_mod_prime_power(&row.map_at_zero, 3, h as u32).unwrap();
                assert_eq!(lhs.value, row.residues[h as usize - 1]);
            }
        }
    }
}
