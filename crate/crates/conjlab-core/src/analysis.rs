//! Convergence classification for digit streams and the fine structure of
//! the critical series: slope windows against the critical staircase,
//! last-visit gap-ratio tests, block-height tests for words that lift the
//! critical word, term statistics with distribution checks, rank
//! permutations and size partitions of Christoffel prefixes, mean-deviation
//! bands, and scaled outputs along convergent prefixes.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::conjugacy::{affine_of, phi_finite};
use crate::error::{Error, Result};
use crate::exactnum::{
    alpha_ceil, compare_pow, ln2_enclosure, ln3_enclosure, mod_inverse, pow2, pow3, rat, rat_int,
    rational_to_f64, AlphaOracle, Rational,
};
use crate::sturmian::{convergents, standard_word, sturmian_stream, SturmianVariant};
use crate::words::{ell_j, ElljResult, WordStream};

/// The slope all classifications in this module compare against.
fn critical() -> AlphaOracle {
    AlphaOracle::log2_over_log3()
}

/// Which side of the critical staircase the prefix heights settle on.
#[derive(Debug, Clone, PartialEq)]
pub enum SlopeVerdict {
    /// h(l) > ceil(l*alpha) strictly for every l in tail_from..=window,
    /// with tail_from at most half the window. delta is a certified
    /// positive lower bound on (min of h(l)/l over the tail) - alpha.
    Above { tail_from: u64, delta: Rational },
    /// h(l) < ceil(l*alpha) strictly for every l in the tail.
    Below { tail_from: u64 },
    /// Neither strict side holds over any tail covering half the window;
    /// words tracking the staircase exactly land here.
    Straddles,
}

/// Height statistics of a stream prefix against the critical staircase.
#[derive(Debug, Clone)]
pub struct SlopeReport {
    pub window: u64,
    /// (l, h(l)) for every prefix length in the window.
    pub series: Vec<(u64, u64)>,
    /// Suffix minima of the exact ratios h(l)/l: entry i is the minimum
    /// over all l >= i + 1.
    pub tail_min: Vec<Rational>,
    /// h(window)/window.
    pub final_ratio: f64,
    /// Minimum of h(l)/l over the second half of the window, the window's
    /// proxy for the lower limit of the height ratio.
    pub liminf_proxy: f64,
    /// 2^l/3^h(l) decreased from the half window to the full window and
    /// ends below one: evidence that the affine remainders contract.
    pub pow_ratio_shrinks: bool,
    pub verdict: SlopeVerdict,
}

impl SlopeReport {
    /// CSV rows with header line "l,h".
    pub fn csv_rows(&self) -> String {
        let mut out = String::from("l,h\n");
        for &(l, h) in &self.series {
            out.push_str(&format!("{},{}\n", l, h));
        }
        out
    }
}

/// Classifies the prefix heights of v over 1..=window against the exact
/// critical staircase ceil(l*alpha). The verdict takes a side only when the
/// strict inequality holds on an unbroken tail covering at least half the
/// window; the Above bound comes with a certified positive margin.
pub fn slope_stats(v: &WordStream, window: u64) -> Result<SlopeReport> {
    assert!(window >= 2, "window must cover at least two prefixes");
    let oracle = critical();
    let prefix = v.prefix(window)?;
    let count = window as usize;
    let mut series = Vec::with_capacity(count);
    let mut side = Vec::with_capacity(count);
    let mut h = 0u64;
    for l in 1..=window {
        if prefix.bit(l - 1) {
            h += 1;
        }
        let c = alpha_ceil(&oracle, l)?;
        series.push((l, h));
        side.push(h.cmp(&c));
    }
    let mut tail_min = vec![Rational::zero(); count];
    let mut running = rat(series[count - 1].1 as i64, window as i64);
    for l in (1..=window).rev() {
        let ratio = rat(series[l as usize - 1].1 as i64, l as i64);
        if ratio < running {
            running = ratio;
        }
        tail_min[l as usize - 1] = running.clone();
    }
    let half = window / 2;
    let tail_start = |want: Ordering| -> u64 {
        let mut from = window + 1;
        for l in (1..=window).rev() {
            if side[l as usize - 1] == want {
                from = l;
            } else {
                break;
            }
        }
        from
    };
    let above_from = tail_start(Ordering::Greater);
    let below_from = tail_start(Ordering::Less);
    let verdict = if above_from <= half {
        // Strictly above means h >= ceil(l*alpha) + 1 > l*alpha + 1, so
        // h/l exceeds alpha by at least 1/window; an enclosure of width
        // 1/(4*window) keeps the certified margin positive.
        let eps = rat(1, 4 * window as i64);
        let (_, alpha_hi) = oracle.enclosure(&eps);
        let delta = tail_min[above_from as usize - 1].clone() - alpha_hi;
        SlopeVerdict::Above {
            tail_from: above_from,
            delta,
        }
    } else if below_from <= half {
        SlopeVerdict::Below {
            tail_from: below_from,
        }
    } else {
        SlopeVerdict::Straddles
    };
    let (l_half, h_half) = series[half.max(1) as usize - 1];
    let (l_end, h_end) = series[count - 1];
    let pow_ratio_shrinks = compare_pow(l_end - l_half, h_end - h_half) == Ordering::Less
        && compare_pow(l_end, h_end) == Ordering::Less;
    let final_ratio = h_end as f64 / window as f64;
    let liminf_proxy = rational_to_f64(&tail_min[half.max(1) as usize - 1]);
    Ok(SlopeReport {
        window,
        series,
        tail_min,
        final_ratio,
        liminf_proxy,
        pow_ratio_shrinks,
        verdict,
    })
}

/// Outcome of a windowed convergence criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriterionVerdict {
    /// The tail ratios stay below the convergence threshold by the margin.
    ConvergentByCriterion,
    /// The tail ratios stay above the divergence threshold by the margin.
    DivergentByCriterion,
    /// The window is too small or the ratios land between the thresholds.
    Inconclusive,
}

/// A window-certified last visit of one relative height value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedEll {
    pub j: i64,
    /// Last prefix length where the relative height equals j.
    pub ell: u64,
    /// No later dip to j or below was seen up to this scan depth.
    pub certified_up_to: u64,
}

/// Last-visit gap ratios of a stream at the critical slope.
#[derive(Debug, Clone)]
pub struct RatioReport {
    pub scan_limit: u64,
    /// Resolved last visits for j = 0, 1, 2, ... until the window gives out.
    pub ells: Vec<ResolvedEll>,
    /// Differences of consecutive last visits.
    pub gaps: Vec<u64>,
    /// Exact gap ratios gaps[i + 1]/gaps[i].
    pub ratios: Vec<Rational>,
    /// Distinct values over the tail half of the ratios with multiplicity,
    /// ascending. A value is snapped to the closest caller candidate within
    /// 1/10 when one is given, and binned to the nearest 1/100 otherwise.
    pub limit_points: Vec<(Rational, usize)>,
    pub max_tail_ratio: Option<Rational>,
    pub min_tail_ratio: Option<Rational>,
    pub margin: Rational,
    pub verdict: CriterionVerdict,
}

impl RatioReport {
    /// CSV rows with header line "j,l".
    pub fn csv_rows(&self) -> String {
        let mut out = String::from("j,l\n");
        for e in &self.ells {
            out.push_str(&format!("{},{}\n", e.j, e.ell));
        }
        out
    }
}

/// Gap-ratio criterion with the default margin 1/20 and plain 1/100 bins
/// for the observed limit points.
pub fn ratio_criterion(v: &WordStream, scan_limit: u64) -> Result<RatioReport> {
    ratio_criterion_with(v, scan_limit, rat(1, 20), &[])
}

/// Gap-ratio criterion over the last visits of the relative height: resolves
/// l_j for j = 0, 1, 2, ... within the scan window, forms the exact ratios
/// of consecutive gaps, and compares their tail against the threshold 3.
/// Convergent only when the maximal tail ratio stays below 3 - margin,
/// divergent only when the whole tail stays above 3 + margin.
pub fn ratio_criterion_with(
    v: &WordStream,
    scan_limit: u64,
    margin: Rational,
    candidates: &[Rational],
) -> Result<RatioReport> {
    assert!(margin.is_positive(), "margin must be positive");
    let oracle = critical();
    let mut ells = Vec::new();
    for j in 0i64.. {
        match ell_j(v, &oracle, j, scan_limit)? {
            ElljResult::Found {
                ell,
                certified_up_to,
            } => ells.push(ResolvedEll {
                j,
                ell,
                certified_up_to,
            }),
            ElljResult::Unresolved => break,
        }
    }
    let gaps: Vec<u64> = ells.windows(2).map(|w| w[1].ell - w[0].ell).collect();
    let ratios: Vec<Rational> = gaps
        .windows(2)
        .map(|w| rat(w[1] as i64, w[0] as i64))
        .collect();
    let tail = &ratios[ratios.len() / 2..];
    let limit_points = cluster_tail(tail, candidates);
    let max_tail_ratio = tail.iter().max().cloned();
    let min_tail_ratio = tail.iter().min().cloned();
    let three = rat_int(3);
    let verdict = if ratios.len() < 3 {
        CriterionVerdict::Inconclusive
    } else if *max_tail_ratio.as_ref().unwrap() < &three - &margin {
        CriterionVerdict::ConvergentByCriterion
    } else if *min_tail_ratio.as_ref().unwrap() > &three + &margin {
        CriterionVerdict::DivergentByCriterion
    } else {
        CriterionVerdict::Inconclusive
    };
    Ok(RatioReport {
        scan_limit,
        ells,
        gaps,
        ratios,
        limit_points,
        max_tail_ratio,
        min_tail_ratio,
        margin,
        verdict,
    })
}

/// Groups tail ratios into observed limit points: snap to the closest
/// candidate within 1/10 when candidates are given, else bin to the nearest
/// multiple of 1/100.
fn cluster_tail(tail: &[Rational], candidates: &[Rational]) -> Vec<(Rational, usize)> {
    let snap_tol = rat(1, 10);
    let mut buckets: BTreeMap<Rational, usize> = BTreeMap::new();
    for r in tail {
        let snapped = candidates
            .iter()
            .map(|c| (c, (c - r).abs()))
            .filter(|(_, d)| *d <= snap_tol)
            .min_by(|a, b| a.1.cmp(&b.1))
            .map(|(c, _)| c.clone());
        let key = snapped.unwrap_or_else(|| {
            let scaled = r * rat_int(100) + rat(1, 2);
            Rational::new(scaled.floor().to_integer(), BigInt::from(100))
        });
        *buckets.entry(key).or_insert(0) += 1;
    }
    buckets.into_iter().collect()
}

/// Block-height ratios of a word that lifts the critical word.
#[derive(Debug, Clone)]
pub struct HeightsReport {
    pub window: u64,
    /// One-based positions whose zero was replaced by a one.
    pub replaced: Vec<u64>,
    /// Ones of the unmodified critical word inside each factor; factor j
    /// ends at replaced[j].
    pub block_heights: Vec<u64>,
    /// Exact ratios block_heights[j + 1]/block_heights[j]; pairs whose
    /// first block has no ones are skipped.
    pub ratios: Vec<Rational>,
    pub max_tail_ratio: Option<Rational>,
    pub min_tail_ratio: Option<Rational>,
    /// Differences of consecutive replacement positions.
    pub gaps: Vec<u64>,
    /// Both the minimum and the mean gap grew from the first half of the
    /// gap list to the second: evidence of escape when the ratio test is
    /// silent. Heuristic, never a proof.
    pub gaps_growing: bool,
    pub margin: Rational,
    pub verdict: CriterionVerdict,
}

/// Block-height criterion for a word obtained from the critical word by
/// flipping zeros to ones: cut at every flipped position so each factor
/// ends with one replacement, count the critical word's ones per factor,
/// and compare the tail of the consecutive height ratios against the
/// thresholds 3/2 (convergence) and 6 (divergence) with margin 1/20.
pub fn heights_ratio_criterion(vprime: &WordStream, window: u64) -> Result<HeightsReport> {
    assert!(window >= 2, "window must cover at least two digits");
    let margin = rat(1, 20);
    let oracle = critical();
    let base = sturmian_stream(&oracle, SturmianVariant::UpperC);
    let w = vprime.prefix(window)?;
    let s = base.prefix(window)?;
    let mut replaced = Vec::new();
    let mut block_heights = Vec::new();
    let mut block_ones = 0u64;
    for i in 0..window {
        match (w.bit(i), s.bit(i)) {
            (true, true) => block_ones += 1,
            (false, false) => {}
            (true, false) => {
                replaced.push(i + 1);
                block_heights.push(block_ones);
                block_ones = 0;
            }
            (false, true) => {
                return Err(Error::InvalidSlope(format!(
                    "digit {} is 0 where the critical word has 1; \
                     the input does not lift the critical word",
                    i
                )));
            }
        }
    }
    let mut ratios = Vec::new();
    for pair in block_heights.windows(2) {
        if pair[0] > 0 {
            ratios.push(rat(pair[1] as i64, pair[0] as i64));
        }
    }
    let tail = &ratios[ratios.len() / 2..];
    let max_tail_ratio = tail.iter().max().cloned();
    let min_tail_ratio = tail.iter().min().cloned();
    let gaps: Vec<u64> = replaced.windows(2).map(|w| w[1] - w[0]).collect();
    let gaps_growing = if gaps.len() >= 4 {
        let (a, b) = gaps.split_at(gaps.len() / 2);
        let mean_grew = b.iter().sum::<u64>() as u128 * a.len() as u128
            > a.iter().sum::<u64>() as u128 * b.len() as u128;
        b.iter().min() > a.iter().min() && mean_grew
    } else {
        false
    };
    let low = rat(3, 2);
    let high = rat_int(6);
    let verdict = if ratios.len() < 3 {
        CriterionVerdict::Inconclusive
    } else if *max_tail_ratio.as_ref().unwrap() < &low - &margin {
        CriterionVerdict::ConvergentByCriterion
    } else if *min_tail_ratio.as_ref().unwrap() > &high + &margin {
        CriterionVerdict::DivergentByCriterion
    } else {
        CriterionVerdict::Inconclusive
    };
    Ok(HeightsReport {
        window,
        replaced,
        block_heights,
        ratios,
        max_tail_ratio,
        min_tail_ratio,
        gaps,
        gaps_growing,
        margin,
        verdict,
    })
}

/// One term of the critical series: 2^exp2/3^index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    /// One-based term index; doubles as the power of three.
    pub index: u64,
    /// Position of the index'th one in the critical word (zero-based).
    pub exp2: u64,
    /// 2^exp2/3^index as a float; refreshed from the exact value every
    /// 1024 terms, so the drift stays below 1e-12.
    pub value: f64,
    /// The term lies in (1/6, 1/3]. Certified exactly whenever the float
    /// sits within 1e-9 of a boundary.
    pub in_range: bool,
}

/// The first m terms of the critical series, with exact exponent pairs.
/// The first term is exactly 1/3 and every term lies in (1/6, 1/3].
pub fn term_sequence(m: u64) -> Result<Vec<Term>> {
    assert!(m >= 1, "at least one term");
    let stream = sturmian_stream(&critical(), SturmianVariant::UpperC);
    let mut terms = Vec::with_capacity(m as usize);
    let mut p2 = BigUint::one();
    let mut p3 = BigUint::one();
    let mut value = 0.0f64;
    let mut index = 0u64;
    let mut d = 0u64;
    let mut last_d = 0u64;
    while index < m {
        if stream.digit(d)? {
            index += 1;
            let gap = d - last_d;
            last_d = d;
            p3 *= 3u8;
            p2 <<= gap as usize;
            value = if index == 1 {
                1.0 / 3.0
            } else if index % 1024 == 0 {
                rational_to_f64(&Rational::new(
                    BigInt::from(p2.clone()),
                    BigInt::from(p3.clone()),
                ))
            } else {
                // Ones of the critical word are one or two apart.
                let doubling = if gap == 1 { 2.0 } else { 4.0 };
                value * doubling / 3.0
            };
            let in_range = if value > 1.0 / 6.0 + 1e-9 && value < 1.0 / 3.0 - 1e-9 {
                true
            } else {
                // Exact boundary decision: t > 1/6 iff 6*2^d > 3^i, and
                // t <= 1/3 iff 3*2^d <= 3^i.
                &p2 * 6u8 > p3 && &p2 * 3u8 <= p3
            };
            terms.push(Term {
                index,
                exp2: d,
                value,
                in_range,
            });
        }
        d += 1;
    }
    Ok(terms)
}

/// Arithmetic and geometric mean of the first m critical series terms.
/// The arithmetic mean folds the term floats; the geometric mean goes
/// through the exact exponents, so no product underflows.
pub fn means(m: u64) -> Result<(f64, f64)> {
    let terms = term_sequence(m)?;
    let arithmetic = terms.iter().map(|t| t.value).sum::<f64>() / m as f64;
    // log2 of term i is exp2 - i*lambda with lambda = log2(3); the mean of
    // the logs needs lambda once, to high precision.
    let (l2lo, l2hi) = ln2_enclosure(192);
    let (l3lo, l3hi) = ln3_enclosure(192);
    let lambda = (l3lo / &l2hi + l3hi / &l2lo) / rat_int(2);
    let sum_d: BigInt = terms.iter().map(|t| BigInt::from(t.exp2)).sum();
    let mean_log = lambda * Rational::new(BigInt::from(m) + 1, BigInt::from(2))
        - Rational::new(sum_d, BigInt::from(m));
    let geometric = 2.0f64.powf(-rational_to_f64(&mean_log));
    Ok((arithmetic, geometric))
}

/// Empirical measure of one value interval of the critical series terms.
#[derive(Debug, Clone)]
pub struct DistributionReport {
    pub m: u64,
    pub a: Rational,
    pub b: Rational,
    /// Terms among the first m that lie in [a, b].
    pub count: u64,
    pub observed: f64,
    /// (ln b - ln a)/ln 2, the limit frequency for the interval.
    pub expected: f64,
}

/// Counts the first m critical series terms falling in [a, b], which must
/// satisfy 1/6 <= a < b <= 1/3, and compares against the limit frequency
/// (ln b - ln a)/ln 2. Terms near an endpoint are decided exactly.
pub fn distribution_check(m: u64, a: &Rational, b: &Rational) -> Result<DistributionReport> {
    let sixth = rat(1, 6);
    let third = rat(1, 3);
    if !(&sixth <= a && a < b && b <= &third) {
        return Err(Error::InvalidInterval(format!(
            "interval [{}, {}] must sit inside [1/6, 1/3]",
            a, b
        )));
    }
    let terms = term_sequence(m)?;
    let af = rational_to_f64(a);
    let bf = rational_to_f64(b);
    let mut count = 0u64;
    for t in &terms {
        let inside = if t.value > af + 1e-9 && t.value < bf - 1e-9 {
            true
        } else if t.value < af - 1e-9 || t.value > bf + 1e-9 {
            false
        } else {
            term_cmp_bound(t.exp2, t.index, a) != Ordering::Less
                && term_cmp_bound(t.exp2, t.index, b) != Ordering::Greater
        };
        if inside {
            count += 1;
        }
    }
    let observed = count as f64 / m as f64;
    let expected = (bf.ln() - af.ln()) / 2.0f64.ln();
    Ok(DistributionReport {
        m,
        a: a.clone(),
        b: b.clone(),
        count,
        observed,
        expected,
    })
}

/// Exact comparison of 2^d/3^i against a positive rational bound.
fn term_cmp_bound(d: u64, i: u64, bound: &Rational) -> Ordering {
    let lhs = BigInt::from(pow2(d)) * bound.denom();
    let rhs = BigInt::from(pow3(i)) * bound.numer();
    lhs.cmp(&rhs)
}

/// Size ranks of the series terms over one Christoffel prefix.
#[derive(Debug, Clone)]
pub struct SigmaPerm {
    pub k: usize,
    pub p_k: u64,
    /// sigma[i - 1] is the ascending size rank of the i'th term.
    pub sigma: Vec<u64>,
    /// reading_order[r - 1] is the term index holding rank r; the inverse
    /// of sigma.
    pub reading_order: Vec<u64>,
}

/// The closed-form rank permutation of the p_k series terms over the k'th
/// Christoffel prefix of the critical slope, k >= 2: the rank of term i is
/// p_k minus the residue of (-1)^k * inv(p_{k-1}) * (i - 1) modulo p_k.
pub fn sigma_perm(k: usize) -> Result<SigmaPerm> {
    assert!(k >= 2, "rank permutations start at k = 2");
    let conv = convergents(&critical(), k)?;
    let (p_k, _) = conv.pq_u64(k);
    let (p_km1, _) = conv.pq_u64(k - 1);
    let sigma: Vec<u64> = if p_k == 1 {
        vec![1]
    } else {
        let inv = mod_inverse(&BigUint::from(p_km1 % p_k), &BigUint::from(p_k))
            .expect("consecutive convergent numerators are coprime")
            .to_u64()
            .expect("inverse below p_k");
        let mult = if k % 2 == 0 { inv } else { (p_k - inv) % p_k };
        (1..=p_k)
            .map(|i| p_k - ((i - 1) as u128 * mult as u128 % p_k as u128) as u64)
            .collect()
    };
    let mut reading_order = vec![0u64; sigma.len()];
    for (i, &rank) in sigma.iter().enumerate() {
        reading_order[rank as usize - 1] = i as u64 + 1;
    }
    Ok(SigmaPerm {
        k,
        p_k,
        sigma,
        reading_order,
    })
}

/// One part of the ascending partition: y = 2^exp2/3^exp3.
#[derive(Debug, Clone, PartialEq)]
pub struct YTerm {
    pub j: u64,
    pub exp2: u64,
    pub exp3: u64,
    pub value: Rational,
}

/// The series terms of one Christoffel prefix sorted ascending, in closed
/// form.
#[derive(Debug, Clone)]
pub struct YPartition {
    pub k: usize,
    pub p_k: u64,
    pub q_k: u64,
    /// y_1 < y_2 < ... < y_{p_k}, with y_{p_k} = 1/3 always.
    pub terms: Vec<YTerm>,
}

/// Closed form of the ascending rearrangement of the p_k series terms over
/// the k'th Christoffel prefix, k >= 2: the j'th smallest is 2^e2/3^e3 with
/// e2 = (-1 + (-1)^(k-1) * j * q_{k-1}) mod q_k and
/// e3 = (1 + (-1)^(k-1) * j * p_{k-1}) mod p_k mapped into 1..=p_k.
pub fn y_partition(k: usize) -> Result<YPartition> {
    assert!(k >= 2, "partitions start at k = 2");
    let conv = convergents(&critical(), k)?;
    let (p_k, q_k) = conv.pq_u64(k);
    let (p_km1, q_km1) = conv.pq_u64(k - 1);
    let sign: i128 = if k % 2 == 1 { 1 } else { -1 };
    let mut terms = Vec::with_capacity(p_k as usize);
    for j in 1..=p_k {
        let e2 = (-1 + sign * j as i128 * q_km1 as i128).rem_euclid(q_k as i128) as u64;
        let e3_raw = (1 + sign * j as i128 * p_km1 as i128).rem_euclid(p_k as i128) as u64;
        let e3 = if e3_raw == 0 { p_k } else { e3_raw };
        let value = Rational::new(BigInt::from(pow2(e2)), BigInt::from(pow3(e3)));
        terms.push(YTerm {
            j,
            exp2: e2,
            exp3: e3,
            value,
        });
    }
    Ok(YPartition {
        k,
        p_k,
        q_k,
        terms,
    })
}

/// Deviation of one Christoffel word's series value from its mean model.
#[derive(Debug, Clone)]
pub struct MuBoundReport {
    pub k: usize,
    pub p_k: u64,
    pub q_k: u64,
    /// Exact negated series value of the k'th Christoffel word.
    pub series_value: Rational,
    /// Certified enclosure of series_value - p_k/(6 ln 2).
    pub deviation: (Rational, Rational),
    /// Open band the deviation is expected to land in: (0, 1/6) for odd k,
    /// (1/12, 1/4) for even k.
    pub band: (Rational, Rational),
    pub within_band: bool,
}

/// Locates the deviation of the k'th Christoffel word's series value from
/// p_k times the term mean 1/(6 ln 2) relative to the parity band, k >= 2.
/// The enclosure is refined until membership is decided either way.
pub fn christoffel_mu_bound(k: usize) -> Result<MuBoundReport> {
    assert!(k >= 2, "bands start at k = 2");
    let oracle = critical();
    let w = standard_word(&oracle, k)?;
    let conv = convergents(&oracle, k)?;
    let (p_k, q_k) = conv.pq_u64(k);
    let series_value = -phi_finite(&w);
    let band = if k % 2 == 1 {
        (Rational::zero(), rat(1, 6))
    } else {
        (rat(1, 12), rat(1, 4))
    };
    let p_rat = rat_int(p_k as i64);
    let mut bits = 96u32;
    loop {
        let (l2lo, l2hi) = ln2_enclosure(bits);
        let mu_lo = rat(1, 6) / l2hi;
        let mu_hi = rat(1, 6) / l2lo;
        let dev_lo = &series_value - &p_rat * mu_hi;
        let dev_hi = &series_value - &p_rat * mu_lo;
        if dev_lo > band.0 && dev_hi < band.1 {
            return Ok(MuBoundReport {
                k,
                p_k,
                q_k,
                series_value,
                deviation: (dev_lo, dev_hi),
                band,
                within_band: true,
            });
        }
        if dev_hi <= band.0 || dev_lo >= band.1 {
            return Ok(MuBoundReport {
                k,
                p_k,
                q_k,
                series_value,
                deviation: (dev_lo, dev_hi),
                band,
                within_band: false,
            });
        }
        if bits >= 4096 {
            return Err(Error::PrecisionExhausted { cap_bits: bits });
        }
        bits *= 2;
    }
}

/// One scaled output along a convergent prefix.
#[derive(Debug, Clone)]
pub struct ConeEntry {
    pub k: usize,
    pub q: u64,
    pub height: u64,
    /// Exact output of the prefix map at x, divided by q.
    pub ratio: Rational,
    pub approx: f64,
}

/// Scaled outputs of the critical word's convergent prefixes, split by
/// parity.
#[derive(Debug, Clone)]
pub struct ConeReport {
    pub x: Rational,
    pub odd: Vec<ConeEntry>,
    pub even: Vec<ConeEntry>,
}

impl ConeReport {
    /// CSV rows with header line "k,q,parity,ratio".
    pub fn csv_rows(&self) -> String {
        let mut rows: Vec<(usize, String)> = Vec::new();
        for e in &self.odd {
            rows.push((e.k, format!("{},{},odd,{:.16e}\n", e.k, e.q, e.approx)));
        }
        for e in &self.even {
            rows.push((e.k, format!("{},{},even,{:.16e}\n", e.k, e.q, e.approx)));
        }
        rows.sort_by_key(|r| r.0);
        let mut out = String::from("k,q,parity,ratio\n");
        for (_, row) in rows {
            out.push_str(&row);
        }
        out
    }
}

/// Applies each convergent-length prefix map of the critical word to x and
/// divides by the prefix length. Along odd k the values approach
/// 1/(6 ln 3), along even k they approach 1/(2 ln 3), independently of x.
pub fn cone_limits(x: &Rational, k_max: usize) -> Result<ConeReport> {
    assert!(k_max >= 1, "need at least one convergent");
    let oracle = critical();
    let stream = sturmian_stream(&oracle, SturmianVariant::UpperC);
    let conv = convergents(&oracle, k_max)?;
    let mut odd = Vec::new();
    let mut even = Vec::new();
    for k in 1..=k_max.min(conv.entries.len() - 1) {
        let (_, q) = conv.pq_u64(k);
        let u = stream.prefix(q)?;
        let height = u.height();
        let ratio = affine_of(&u).apply(x) / rat_int(q as i64);
        let approx = rational_to_f64(&ratio);
        let entry = ConeEntry {
            k,
            q,
            height,
            ratio,
            approx,
        };
        if k % 2 == 1 {
            odd.push(entry);
        } else {
            even.push(entry);
        }
    }
    Ok(ConeReport {
        x: x.clone(),
        odd,
        even,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugacy::{phi_limit_estimate, EstimateParams};
    use crate::sturmian::{construct_word, ConstructorConfig, FactorLog, RunFamily, RunShape};
    use crate::words::{associated_word, FiniteWord};

    fn critical_stream() -> WordStream {
        sturmian_stream(&critical(), SturmianVariant::UpperC)
    }

    /// Critical word prefix with the listed zeros (counted from one)
    /// flipped to ones.
    fn flipped_critical(window: u64, zero_numbers: &[u64]) -> WordStream {
        let base = critical_stream().prefix(window).unwrap();
        let mut bools: Vec<bool> = (0..window).map(|i| base.bit(i)).collect();
        let mut zero_count = 0u64;
        for b in bools.iter_mut() {
            if !*b {
                zero_count += 1;
                if zero_numbers.contains(&zero_count) {
                    *b = true;
                }
            }
        }
        WordStream::from_word(FiniteWord::from_bools(&bools))
    }

    fn deficit_word(c: u64, d: u64, factors: u64) -> (WordStream, FactorLog) {
        let config = ConstructorConfig {
            oracle: critical(),
            family: RunFamily::Deficit { c, d },
            shape: RunShape::OnesFirst,
            factors,
        };
        construct_word(&config).unwrap()
    }

    fn rpow(b: &Rational, e: u64) -> Rational {
        Rational::new(b.numer().pow(e as u32), b.denom().pow(e as u32))
    }

    #[test]
    fn slope_detects_steep_word() {
        let w = WordStream::sturmian(AlphaOracle::ln2(), true);
        let rep = slope_stats(&w, 600).unwrap();
        match &rep.verdict {
            SlopeVerdict::Above { tail_from, delta } => {
                assert!(*tail_from <= 300);
                assert!(delta.is_positive());
            }
            other => panic!("expected Above, got {:?}", other),
        }
        assert!((rep.final_ratio - 0.6931).abs() < 0.005);
        assert!(rep.pow_ratio_shrinks);
    }

    #[test]
    fn slope_detects_shallow_word() {
        let w = WordStream::sturmian(AlphaOracle::golden(), true);
        let rep = slope_stats(&w, 800).unwrap();
        match rep.verdict {
            SlopeVerdict::Below { tail_from } => assert!(tail_from <= 400),
            ref other => panic!("expected Below, got {:?}", other),
        }
        assert_eq!(rep.series.last().unwrap().1, 495);
        assert!(!rep.pow_ratio_shrinks);
        // 3^h(800) * x stays under 2^800 for every x up to 20000: the
        // prefix maps still contract a whole desk-scale interval
        assert!(pow3(495) * BigUint::from(20000u32) < pow2(800));
    }

    #[test]
    fn slope_straddles_on_critical_word() {
        let rep = slope_stats(&critical_stream(), 500).unwrap();
        assert_eq!(rep.verdict, SlopeVerdict::Straddles);
    }

    #[test]
    fn slope_reports_exact_prefix_series() {
        let w = WordStream::from_word(FiniteWord::from_bools(&[true, true, false, true]));
        let rep = slope_stats(&w, 4).unwrap();
        assert_eq!(rep.series, vec![(1, 1), (2, 2), (3, 2), (4, 3)]);
        assert_eq!(
            rep.tail_min,
            vec![rat(2, 3), rat(2, 3), rat(2, 3), rat(3, 4)]
        );
        assert_eq!(rep.csv_rows(), "l,h\n1,1\n2,2\n3,2\n4,3\n");
        assert_eq!(rep.verdict, SlopeVerdict::Straddles);
    }

    #[test]
    fn slope_tracks_power_floor_construction() {
        let config = ConstructorConfig {
            oracle: AlphaOracle::ln2(),
            family: RunFamily::PowerFloor { beta: rat(13, 10) },
            shape: RunShape::ZerosFirst,
            factors: 25,
        };
        let (w, log) = construct_word(&config).unwrap();
        let len = log.records.last().unwrap().len;
        assert_eq!(len, 9913);
        let rep = slope_stats(&w, len).unwrap();
        match &rep.verdict {
            SlopeVerdict::Above { delta, .. } => assert!(delta.is_positive()),
            other => panic!("expected Above, got {:?}", other),
        }
        assert!((rep.final_ratio - 0.6931).abs() < 0.005);
        assert!((rep.liminf_proxy - 0.6343).abs() < 0.005);
        assert!(rep.pow_ratio_shrinks);
    }

    #[test]
    fn ratio_resolves_last_visits_of_slow_staircase() {
        let (v, log) = deficit_word(5, 6, 100);
        let len = log.records.last().unwrap().len;
        let rep = ratio_criterion(&v, len).unwrap();
        let ells: Vec<u64> = rep.ells.iter().map(|e| e.ell).collect();
        assert_eq!(&ells[..11], &[8, 16, 24, 37, 51, 73, 83, 94, 113, 146, 159]);
        for (j, e) in rep.ells.iter().enumerate() {
            assert_eq!(e.j, j as i64);
        }
        assert_eq!(rep.verdict, CriterionVerdict::Inconclusive);
        assert!(rep.csv_rows().starts_with("j,l\n0,8\n1,16\n2,24\n"));
        let max = rational_to_f64(rep.max_tail_ratio.as_ref().unwrap());
        let min = rational_to_f64(rep.min_tail_ratio.as_ref().unwrap());
        assert!(min > 0.3 && max < 3.1);
        // tail ratios cluster on a bounded rational set reaching 3
        let cands = [
            rat(1, 3),
            rat(1, 2),
            rat(2, 3),
            rat_int(1),
            rat(3, 2),
            rat_int(2),
            rat_int(3),
        ];
        let snapped = ratio_criterion_with(&v, len, rat(1, 20), &cands).unwrap();
        for (point, _) in &snapped.limit_points {
            assert!(cands.contains(point), "unexpected limit point {}", point);
        }
    }

    #[test]
    fn ratio_certifies_bounded_gap_growth() {
        let (v, log) = deficit_word(1, 4, 170);
        let len = log.records.last().unwrap().len;
        let rep = ratio_criterion(&v, len).unwrap();
        assert_eq!(rep.verdict, CriterionVerdict::ConvergentByCriterion);
        assert!(rep.ells.len() >= 20);
        assert!(rational_to_f64(rep.max_tail_ratio.as_ref().unwrap()) < 2.2);
    }

    #[test]
    fn factor_distances_walk_known_staircase() {
        let (_, log) = deficit_word(1, 4, 170);
        let d: Vec<i64> = log.records.iter().take(28).map(|r| r.distance).collect();
        assert_eq!(
            d,
            vec![
                -1, -1, -1, 0, 0, 0, 0, 1, 1, 1, 0, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 3, 2, 3, 3, 3,
                3, 4
            ]
        );
        let mut nmax = Vec::new();
        for j in 0..=20i64 {
            let last = log
                .records
                .iter()
                .filter(|r| r.distance == j)
                .map(|r| r.n)
                .last()
                .unwrap();
            nmax.push(last);
        }
        assert_eq!(
            nmax,
            vec![11, 15, 23, 27, 35, 39, 47, 55, 59, 67, 71, 79, 84, 91, 99, 103, 111, 119, 123, 131, 135]
        );
        // the window certifies the last visits up to distance 14
        assert!(log.records.iter().filter(|r| r.n > 99).all(|r| r.distance > 14));
        // consecutive last-visit gaps land on a small rational set
        let gaps: Vec<i64> = nmax.windows(2).map(|w| (w[1] - w[0]) as i64).collect();
        assert_eq!(&gaps[..14], &[4, 8, 4, 8, 4, 8, 8, 4, 8, 4, 8, 5, 7, 8]);
        let cands = [
            rat(1, 2),
            rat(5, 8),
            rat(5, 7),
            rat(3, 4),
            rat(6, 7),
            rat(7, 8),
            rat_int(1),
            rat(8, 7),
            rat(7, 6),
            rat(4, 3),
            rat(7, 5),
            rat(8, 5),
            rat_int(2),
        ];
        for pair in gaps.windows(2) {
            let r = rat(pair[1], pair[0]);
            assert!(cands.contains(&r), "gap ratio {} off the expected set", r);
        }
    }

    #[test]
    fn ratio_flags_fourfold_gap_growth() {
        let w = flipped_critical(9000, &[4, 16, 64, 256, 1024]);
        let rep = ratio_criterion(&w, 9000).unwrap();
        let ells: Vec<u64> = rep.ells.iter().map(|e| e.ell).collect();
        assert_eq!(ells, vec![10, 43, 173, 693, 2774]);
        assert_eq!(rep.verdict, CriterionVerdict::DivergentByCriterion);
        // a window ending inside the first long plateau resolves nothing
        let small = ratio_criterion(&w, 40).unwrap();
        assert_eq!(small.verdict, CriterionVerdict::Inconclusive);
        assert!(small.ells.len() <= 1);
    }

    #[test]
    fn heights_constant_blocks_converge() {
        let marks: Vec<u64> = (1..=36).map(|k| 40 * k).collect();
        let w = flipped_critical(4000, &marks);
        let rep = heights_ratio_criterion(&w, 4000).unwrap();
        assert_eq!(rep.replaced.len(), 36);
        assert_eq!(rep.verdict, CriterionVerdict::ConvergentByCriterion);
    }

    #[test]
    fn heights_doubling_blocks_inconclusive() {
        let marks: Vec<u64> = (1..=11).map(|k| 1u64 << k).collect();
        let w = flipped_critical(6000, &marks);
        let rep = heights_ratio_criterion(&w, 6000).unwrap();
        assert_eq!(
            rep.block_heights,
            vec![4, 3, 7, 14, 27, 55, 109, 219, 438, 875, 1751]
        );
        // doubling blocks sit between the two thresholds
        assert_eq!(rep.verdict, CriterionVerdict::Inconclusive);
    }

    #[test]
    fn heights_sevenfold_blocks_diverge() {
        let w = flipped_critical(7000, &[7, 49, 343, 2401]);
        let rep = heights_ratio_criterion(&w, 7000).unwrap();
        assert_eq!(rep.block_heights, vec![12, 72, 503, 3518]);
        assert_eq!(rep.verdict, CriterionVerdict::DivergentByCriterion);
    }

    #[test]
    fn heights_of_lifted_word_match_flip_positions() {
        let (v, log) = deficit_word(5, 6, 100);
        let len = log.records.last().unwrap().len;
        let assoc = associated_word(&v, &critical(), len).unwrap();
        // run-length prefix of the lifted word: a ones then one zero per
        // entry
        let runs = [
            2, 2, 4, 2, 4, 2, 5, 1, 2, 2, 4, 2, 2, 1, 5, 1, 2, 2, 2, 1, 2, 4,
        ];
        let mut expected = Vec::new();
        for &a in &runs {
            for _ in 0..a {
                expected.push(true);
            }
            expected.push(false);
        }
        assert_eq!(expected.len(), 76);
        let prefix = assoc.prefix(76).unwrap();
        let got: Vec<bool> = (0..76).map(|i| prefix.bit(i)).collect();
        assert_eq!(got, expected);

        let rep = heights_ratio_criterion(&assoc, 2000).unwrap();
        assert_eq!(&rep.replaced[..6], &[9, 17, 25, 38, 52, 74]);
        assert_eq!(&rep.block_heights[..6], &[6, 5, 5, 8, 9, 14]);
        assert_eq!(rep.verdict, CriterionVerdict::Inconclusive);
        assert!(rep.gaps_growing);
        // each flip sits one past the matching last visit of the source
        // word
        let ratios = ratio_criterion(&v, len).unwrap();
        for (r, e) in rep.replaced.iter().zip(ratios.ells.iter()) {
            assert_eq!(*r, e.ell + 1);
        }
    }

    #[test]
    fn heights_reject_words_below_critical() {
        let w = WordStream::from_word(FiniteWord::from_bools(&[false, false, false, false]));
        let err = heights_ratio_criterion(&w, 4).unwrap_err();
        assert_eq!(err.kind(), "invalid-slope");
    }

    #[test]
    fn term_values_start_exact() {
        let terms = term_sequence(6).unwrap();
        let exp2: Vec<u64> = terms.iter().map(|t| t.exp2).collect();
        assert_eq!(exp2, vec![0, 1, 3, 4, 6, 7]);
        assert_eq!(terms[0].value, 1.0 / 3.0);
        let exact = [
            rat(1, 3),
            rat(2, 9),
            rat(8, 27),
            rat(16, 81),
            rat(64, 243),
            rat(128, 729),
        ];
        for (t, e) in terms.iter().zip(exact.iter()) {
            assert!((t.value - rational_to_f64(e)).abs() < 1e-14);
            assert!(t.in_range);
        }
    }

    #[test]
    fn term_range_certified_in_bulk() {
        let terms = term_sequence(5000).unwrap();
        assert!(terms.iter().all(|t| t.in_range));
        // only the opening term sits on the right endpoint 1/3
        let at_top = terms.iter().filter(|t| t.value >= 1.0 / 3.0 - 1e-12).count();
        assert_eq!(at_top, 1);
    }

    #[test]
    fn means_of_first_terms_are_exact() {
        let (a1, g1) = means(1).unwrap();
        assert_eq!(a1, 1.0 / 3.0);
        assert!((g1 - 1.0 / 3.0).abs() < 1e-9);
        let (a2, g2) = means(2).unwrap();
        assert!((a2 - 5.0 / 18.0).abs() < 1e-15);
        assert!((g2 - (2.0f64 / 27.0).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn means_approach_their_limits() {
        let (arith, geo) = means(20000).unwrap();
        assert!((arith - 0.2404491).abs() < 1e-4);
        assert!((geo - 0.2357023).abs() < 1e-4);
    }

    #[test]
    fn distribution_covers_whole_range() {
        let rep = distribution_check(1000, &rat(1, 6), &rat(1, 3)).unwrap();
        assert_eq!(rep.count, 1000);
        assert_eq!(rep.observed, 1.0);
        assert!((rep.expected - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distribution_matches_log_frequency() {
        let rep = distribution_check(4000, &rat(1, 6), &rat(1, 4)).unwrap();
        assert!((rep.expected - 0.5849625).abs() < 1e-6);
        assert!((rep.observed - rep.expected).abs() < 5e-3);
        // the geometric midpoint splits the terms in half
        let median = rat(2357022604, 10_000_000_000);
        let rep2 = distribution_check(4000, &rat(1, 6), &median).unwrap();
        assert!((rep2.observed - 0.5).abs() < 5e-3);
    }

    #[test]
    fn distribution_rejects_outside_intervals() {
        let err = distribution_check(10, &rat(1, 7), &rat(1, 4)).unwrap_err();
        assert_eq!(err.kind(), "invalid-interval");
        let err = distribution_check(10, &rat(1, 5), &rat(1, 5)).unwrap_err();
        assert_eq!(err.kind(), "invalid-interval");
    }

    #[test]
    fn rank_permutation_small_cases() {
        assert_eq!(sigma_perm(2).unwrap().sigma, vec![1]);
        assert_eq!(sigma_perm(3).unwrap().sigma, vec![2, 1]);
        let s4 = sigma_perm(4).unwrap();
        assert_eq!(s4.sigma, vec![5, 2, 4, 1, 3]);
        assert_eq!(s4.reading_order, vec![4, 2, 5, 3, 1]);
        let s5 = sigma_perm(5).unwrap();
        assert_eq!(
            s5.reading_order,
            vec![6, 11, 4, 9, 2, 7, 12, 5, 10, 3, 8, 1]
        );
    }

    #[test]
    fn rank_permutation_is_bijective_with_step_law() {
        let oracle = critical();
        for k in 2..=9usize {
            let s = sigma_perm(k).unwrap();
            let mut sorted = s.sigma.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, (1..=s.p_k).collect::<Vec<_>>());
            // neighbors in reading order differ by the previous numerator
            let conv = convergents(&oracle, k).unwrap();
            let (p_km1, _) = conv.pq_u64(k - 1);
            let sign: i128 = if k % 2 == 0 { 1 } else { -1 };
            for pair in s.reading_order.windows(2) {
                let expected =
                    ((pair[1] as i128 - 1 + sign * p_km1 as i128).rem_euclid(s.p_k as i128)) as u64
                        + 1;
                assert_eq!(pair[0], expected);
            }
        }
    }

    #[test]
    fn rank_permutation_sorts_prefix_terms() {
        for k in 2..=8usize {
            let w = standard_word(&critical(), k).unwrap();
            let mut terms: Vec<(u64, Rational)> = Vec::new();
            let mut i = 0u64;
            for d in 0..w.len() {
                if w.bit(d) {
                    i += 1;
                    terms.push((
                        i,
                        Rational::new(BigInt::from(pow2(d)), BigInt::from(pow3(i))),
                    ));
                }
            }
            let s = sigma_perm(k).unwrap();
            assert_eq!(terms.len() as u64, s.p_k);
            let mut by_size = terms.clone();
            by_size.sort_by(|a, b| a.1.cmp(&b.1));
            for (rank0, (idx, _)) in by_size.iter().enumerate() {
                assert_eq!(s.sigma[*idx as usize - 1], rank0 as u64 + 1);
                assert_eq!(s.reading_order[rank0], *idx);
            }
            let y = y_partition(k).unwrap();
            for (rank0, (_, val)) in by_size.iter().enumerate() {
                assert_eq!(&y.terms[rank0].value, val);
            }
        }
    }

    #[test]
    fn partition_closed_form_pins() {
        let y4 = y_partition(4).unwrap();
        let pairs: Vec<(u64, u64)> = y4.terms.iter().map(|t| (t.exp2, t.exp3)).collect();
        assert_eq!(pairs, vec![(4, 4), (1, 2), (6, 5), (3, 3), (0, 1)]);
        for k in 2..=9usize {
            let y = y_partition(k).unwrap();
            assert_eq!(y.terms.len() as u64, y.p_k);
            for pair in y.terms.windows(2) {
                assert!(pair[0].value < pair[1].value);
            }
            assert_eq!(y.terms.last().unwrap().value, rat(1, 3));
        }
    }

    #[test]
    fn partition_interleaves_dyadic_grid() {
        // for odd k the j'th smallest term straddles 2^(j/p)/6, decided
        // exactly on integer exponents
        for k in [3usize, 5, 7] {
            let y = y_partition(k).unwrap();
            let p = y.p_k;
            for j in 1..p {
                let a = &y.terms[j as usize - 1];
                let b = &y.terms[j as usize];
                assert_eq!(
                    compare_pow(p * (a.exp2 + 1) - j, p * (a.exp3 - 1)),
                    Ordering::Less
                );
                assert_eq!(
                    compare_pow(p * (b.exp2 + 1) - j, p * (b.exp3 - 1)),
                    Ordering::Greater
                );
            }
        }
    }

    #[test]
    fn mean_band_contains_christoffel_values() {
        for k in 2..=9usize {
            let rep = christoffel_mu_bound(k).unwrap();
            assert!(rep.within_band, "k = {} left the band", k);
        }
        assert_eq!(christoffel_mu_bound(4).unwrap().series_value, rat(319, 243));
    }

    #[test]
    fn scaling_factor_identities() {
        let oracle = critical();
        let conv = convergents(&oracle, 11).unwrap();
        let b = |k: usize| -> Rational {
            let (p, q) = conv.pq_u64(k - 2);
            if k % 2 == 1 {
                Rational::new(BigInt::from(pow3(p)), BigInt::from(pow2(q)))
            } else {
                Rational::new(BigInt::from(pow2(q)), BigInt::from(pow3(p)))
            }
        };
        assert_eq!(b(2), rat_int(2));
        assert_eq!(b(3), rat(3, 2));
        assert_eq!(b(4), rat(4, 3));
        assert_eq!(b(5), rat(9, 8));
        assert_eq!(b(6), rat(256, 243));
        for k in 2..=9usize {
            // one step of the continued fraction splits each factor
            let a_k = conv.entries[k].partial_quotient;
            assert_eq!(b(k), rpow(&b(k + 1), a_k) * b(k + 2));
            // the two-factor product telescopes to 2 exactly
            let (p_k, _) = conv.pq_u64(k);
            let (p_km1, _) = conv.pq_u64(k - 1);
            assert_eq!(rpow(&b(k + 1), p_k) * rpow(&b(k + 2), p_km1), rat_int(2));
        }
    }

    #[test]
    fn root_bracket_certifies_log_bounds() {
        // the root b of b^p = 2 satisfies p(b - 1)/b < ln 2 < p(b - 1)
        let oracle = critical();
        let conv = convergents(&oracle, 9).unwrap();
        let (l2lo, l2hi) = ln2_enclosure(200);
        let two = rat_int(2);
        for k in 2..=9usize {
            let (p, _) = conv.pq_u64(k);
            let mut lo = rat_int(1);
            let mut hi = rat_int(2);
            for _ in 0..60 {
                let mid = (&lo + &hi) / rat_int(2);
                if rpow(&mid, p) < two {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let p_rat = rat_int(p as i64);
            assert!(&p_rat * (&hi - rat_int(1)) / &hi < l2lo);
            assert!(l2hi < &p_rat * (&lo - rat_int(1)));
        }
    }

    #[test]
    fn cone_ratios_split_by_parity() {
        let rep = cone_limits(&rat(0, 1), 10).unwrap();
        assert_eq!(rep.odd[0].ratio, rat(1, 2));
        assert_eq!(rep.even[0].ratio, rat(5, 8));
        let odd_target = 1.0 / (6.0 * 3.0f64.ln());
        let even_target = 1.0 / (2.0 * 3.0f64.ln());
        let last_odd = rep.odd.last().unwrap();
        assert_eq!(last_odd.k, 9);
        assert!((last_odd.approx - odd_target).abs() < 1e-3);
        let last_even = rep.even.last().unwrap();
        assert_eq!(last_even.k, 10);
        assert!((last_even.approx - even_target).abs() < 1e-3);
        assert!(
            (rep.odd[2].approx - odd_target).abs() > (last_odd.approx - odd_target).abs()
        );
        assert!(rep.csv_rows().starts_with("k,q,parity,ratio\n1,1,odd,"));

        // the scaled output forgets the start: the gap to the x = 0
        // column shrinks as the prefixes grow
        let shifted = cone_limits(&rat_int(20), 10).unwrap();
        let mut last_gap = f64::INFINITY;
        for (a, b) in rep.odd.iter().zip(shifted.odd.iter()) {
            let gap = (b.approx - a.approx).abs();
            assert!(gap < last_gap);
            last_gap = gap;
        }
        assert!(last_gap < 0.025);
    }

    #[test]
    fn shift_values_stay_in_band() {
        let params = EstimateParams::new(rat(1, 1_000_000_000), 4000);
        let upper = WordStream::sturmian(AlphaOracle::ln2(), true);
        let v1 = rational_to_f64(&phi_limit_estimate(&upper, &params).unwrap().value);
        assert!((v1 - (-2.5970181822928929618)).abs() < 1e-6);
        // the lower word's value is the affine image of the upper word's
        let lower = WordStream::sturmian(AlphaOracle::ln2(), false);
        let v0 = rational_to_f64(&phi_limit_estimate(&lower, &params).unwrap().value);
        assert!((v0 - (3.0 * v1 + 1.0)).abs() < 1e-6);
        let base = upper.prefix(560).unwrap();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for n in 0..=60u64 {
            let bools: Vec<bool> = (n..n + 500).map(|i| base.bit(i)).collect();
            let sw = WordStream::from_word(FiniteWord::from_bools(&bools));
            let f = rational_to_f64(&phi_limit_estimate(&sw, &params).unwrap().value);
            assert!(f >= v0 - 1e-3 && f <= v1 + 1e-3);
            lo = lo.min(f);
            hi = hi.max(f);
        }
        // both band endpoints are approached along the shift orbit
        assert!(hi > v1 - 1e-6);
        assert!(lo < v0 + 2e-3);
    }
}
