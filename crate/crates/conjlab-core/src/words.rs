//! Finite binary words and lazy digit streams.
//!
//! The central quantity is the integer weight `phi`, defined by
//! phi(empty) = 0, phi(u0) = phi(u), phi(u1) = 3 phi(u) + 2^len(u),
//! equal in closed form to sum_i 2^{d_i} 3^{h-1-i} over the positions
//! d_0 < d_1 < ... of the ones. Everything downstream (offsets, cycle
//! values, series partial sums, residue chains) is built from phi together
//! with the word's length and height (number of ones).

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use bitvec::prelude::*;
use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{alpha_ceil, alpha_floor, AlphaKind, AlphaOracle};

/// Bit-packed digit storage, least significant index first.
pub type Bits = BitVec<u64, Lsb0>;

/// A finite binary word with cached height and lazily cached weight.
#[derive(Debug)]
pub struct FiniteWord {
    bits: Bits,
    ones: u64,
    phi_cache: OnceLock<BigUint>,
}

impl Clone for FiniteWord {
    fn clone(&self) -> Self {
        FiniteWord {
            bits: self.bits.clone(),
            ones: self.ones,
            phi_cache: self.phi_cache.clone(),
        }
    }
}

impl PartialEq for FiniteWord {
    fn eq(&self, other: &Self) -> bool {
        self.bits == other.bits
    }
}
impl Eq for FiniteWord {}

impl FiniteWord {
    pub fn new(bits: Bits) -> Self {
        let ones = bits.count_ones() as u64;
        FiniteWord {
            bits,
            ones,
            phi_cache: OnceLock::new(),
        }
    }

    pub fn empty() -> Self {
        Self::new(Bits::new())
    }

    pub fn from_bools(digits: &[bool]) -> Self {
        let mut bits = Bits::with_capacity(digits.len());
        for &d in digits {
            bits.push(d);
        }
        Self::new(bits)
    }

    /// Length of the word.
    pub fn len(&self) -> u64 {
        self.bits.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Height: the number of ones.
    pub fn height(&self) -> u64 {
        self.ones
    }

    pub fn bit(&self, i: u64) -> bool {
        self.bits[i as usize]
    }

    pub fn bits(&self) -> &BitSlice<u64, Lsb0> {
        &self.bits
    }

    /// Number of leading zero digits.
    pub fn leading_zeros(&self) -> u64 {
        self.bits.leading_zeros() as u64
    }

    /// The weight phi(u), cached after the first computation.
    pub fn phi(&self) -> &BigUint {
        self.phi_cache.get_or_init(|| phi_of_bits(&self.bits))
    }

    /// First `l` digits as a new word.
    pub fn prefix(&self, l: u64) -> FiniteWord {
        assert!(l <= self.len(), "prefix length out of range");
        Self::new(self.bits[..l as usize].to_bitvec())
    }

    /// Concatenation self followed by other.
    pub fn concat(&self, other: &FiniteWord) -> FiniteWord {
        let mut bits = self.bits.clone();
        bits.extend_from_bitslice(&other.bits);
        Self::new(bits)
    }

    /// self repeated k times.
    pub fn repeat(&self, k: u64) -> FiniteWord {
        let mut bits = Bits::with_capacity(self.bits.len() * k as usize);
        for _ in 0..k {
            bits.extend_from_bitslice(&self.bits);
        }
        Self::new(bits)
    }

    /// Run-length form, e.g. "1^2 0^3 1".
    pub fn runlength_string(&self) -> String {
        if self.is_empty() {
            return String::new();
        }
        let mut out = String::new();
        let mut i = 0usize;
        let n = self.bits.len();
        while i < n {
            let d = self.bits[i];
            let mut j = i + 1;
            while j < n && self.bits[j] == d {
                j += 1;
            }
            if !out.is_empty() {
                out.push(' ');
            }
            let digit = if d { '1' } else { '0' };
            if j - i == 1 {
                out.push(digit);
            } else {
                out.push_str(&format!("{}^{}", digit, j - i));
            }
            i = j;
        }
        out
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits.iter() {
            f.write_str(if *b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for FiniteWord {
    type Err = Error;

    /// Accepts plain digit strings ("100101") and run-length tokens
    /// separated by whitespace ("1^4 0^2 1").
    fn from_str(s: &str) -> Result<Self> {
        let mut bits = Bits::new();
        for token in s.split_whitespace() {
            let (digits, count) = match token.split_once('^') {
                Some((d, c)) => {
                    let count: usize = c
                        .parse()
                        .map_err(|_| Error::ParseWord(format!("bad run count in {token:?}")))?;
                    (d, count)
                }
                None => (token, 1),
            };
            if digits.is_empty() {
                return Err(Error::ParseWord(format!("empty digits in {token:?}")));
            }
            if digits.len() > 1 && count != 1 {
                return Err(Error::ParseWord(format!(
                    "run-length applies to a single digit, got {token:?}"
                )));
            }
            for _ in 0..count {
                for ch in digits.chars() {
                    match ch {
                        '0' => bits.push(false),
                        '1' => bits.push(true),
                        _ => return Err(Error::ParseWord(format!("bad digit {ch:?}"))),
                    }
                }
            }
        }
        Ok(FiniteWord::new(bits))
    }
}

fn phi_of_bits(bits: &BitSlice<u64, Lsb0>) -> BigUint {
    let mut acc = BigUint::zero();
    let mut pow = BigUint::one(); // 2^i
    for i in 0..bits.len() {
        if bits[i] {
            acc *= 3u8;
            acc += &pow;
        }
        pow <<= 1usize;
        let _ = i;
    }
    acc
}

/// phi via the closed form sum_i 2^{d_i} 3^{h-1-i}. Used to cross-check the
/// recursion; both must agree everywhere.
pub fn phi_closed_form(w: &FiniteWord) -> BigUint {
    let h = w.height();
    let mut acc = BigUint::zero();
    let mut rank = 0u64;
    for i in 0..w.len() {
        if w.bit(i) {
            let term = crate::exactnum::pow2(i) * crate::exactnum::pow3(h - 1 - rank);
            acc += term;
            rank += 1;
        }
    }
    acc
}

/// phi of a word given left to right, one digit at a time. Lets callers
/// take phi snapshots along every prefix in a single pass.
#[derive(Debug, Clone)]
pub struct PhiAccumulator {
    acc: BigUint,
    pow: BigUint,
    len: u64,
    ones: u64,
}

impl PhiAccumulator {
    pub fn new() -> Self {
        PhiAccumulator {
            acc: BigUint::zero(),
            pow: BigUint::one(),
            len: 0,
            ones: 0,
        }
    }

    pub fn push(&mut self, digit: bool) {
        if digit {
            self.acc *= 3u8;
            self.acc += &self.pow;
            self.ones += 1;
        }
        self.pow <<= 1usize;
        self.len += 1;
    }

    pub fn phi(&self) -> &BigUint {
        &self.acc
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn ones(&self) -> u64 {
        self.ones
    }
}

impl Default for PhiAccumulator {
    fn default() -> Self {
        Self::new()
    }
}

/// phi of the concatenation u then w from the parts:
/// phi(uw) = 3^{h(w)} phi(u) + 2^{len(u)} phi(w).
pub fn phi_concat(u: &FiniteWord, w: &FiniteWord) -> BigUint {
    crate::exactnum::pow3(w.height()) * u.phi() + crate::exactnum::pow2(u.len()) * w.phi()
}

/// Digit generator behind a [`WordStream`].
pub(crate) trait DigitSource: Send {
    /// Appends digits to `memo` until its length reaches `target` or an
    /// error explains why it cannot.
    fn extend_to(&mut self, memo: &mut Bits, target: usize) -> Result<()>;
}

#[derive(Clone)]
struct StreamMeta {
    /// Total length for finite streams.
    finite_len: Option<u64>,
    /// Repeating block for periodic streams.
    period: Option<Arc<FiniteWord>>,
}

struct StreamState {
    memo: Bits,
    source: Box<dyn DigitSource>,
}

/// A lazily generated, memoized, shareable digit stream.
///
/// The memoized prefix only grows; all reads go through one lock, so
/// concurrent readers always see a consistent prefix.
#[derive(Clone)]
pub struct WordStream {
    state: Arc<Mutex<StreamState>>,
    meta: StreamMeta,
}

impl fmt::Debug for WordStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WordStream")
            .field("finite_len", &self.meta.finite_len)
            .field("periodic", &self.meta.period.is_some())
            .finish()
    }
}

struct ExhaustedSource {
    total: u64,
}

impl DigitSource for ExhaustedSource {
    fn extend_to(&mut self, memo: &mut Bits, target: usize) -> Result<()> {
        if target > memo.len() {
            Err(Error::Unresolved(format!(
                "stream ends at length {}, digit {} requested",
                self.total,
                target - 1
            )))
        } else {
            Ok(())
        }
    }
}

struct PeriodicSource {
    word: Arc<FiniteWord>,
}

impl DigitSource for PeriodicSource {
    fn extend_to(&mut self, memo: &mut Bits, target: usize) -> Result<()> {
        let p = self.word.len() as usize;
        while memo.len() < target {
            let i = memo.len() % p;
            memo.push(self.word.bit(i as u64));
        }
        Ok(())
    }
}

struct SturmianSource {
    oracle: Arc<AlphaOracle>,
    upper: bool,
    prev: u64,
}

impl DigitSource for SturmianSource {
    fn extend_to(&mut self, memo: &mut Bits, target: usize) -> Result<()> {
        while memo.len() < target {
            let j = memo.len() as u64 + 1;
            let c = if self.upper {
                alpha_ceil(&self.oracle, j)?
            } else {
                alpha_floor(&self.oracle, j)?
            };
            debug_assert!(c == self.prev || c == self.prev + 1);
            memo.push(c == self.prev + 1);
            self.prev = c;
        }
        Ok(())
    }
}

impl WordStream {
    /// A finite stream over exactly the given word; digits past the end are
    /// an Unresolved error, never an implicit padding.
    pub fn from_word(word: FiniteWord) -> Self {
        let total = word.len();
        let memo: Bits = word.bits().to_bitvec();
        WordStream {
            state: Arc::new(Mutex::new(StreamState {
                memo,
                source: Box::new(ExhaustedSource { total }),
            })),
            meta: StreamMeta {
                finite_len: Some(total),
                period: None,
            },
        }
    }

    /// The infinite repetition word^infinity.
    pub fn periodic(word: FiniteWord) -> Self {
        assert!(!word.is_empty(), "period must be nonempty");
        let word = Arc::new(word);
        WordStream {
            state: Arc::new(Mutex::new(StreamState {
                memo: Bits::new(),
                source: Box::new(PeriodicSource { word: word.clone() }),
            })),
            meta: StreamMeta {
                finite_len: None,
                period: Some(word),
            },
        }
    }

    /// The Sturmian word of the oracle's slope: digit j is
    /// ceil((j+1)a) - ceil(ja) for the upper variant, floors for the lower.
    pub fn sturmian(oracle: AlphaOracle, upper: bool) -> Self {
        WordStream {
            state: Arc::new(Mutex::new(StreamState {
                memo: Bits::new(),
                source: Box::new(SturmianSource {
                    oracle: Arc::new(oracle),
                    upper,
                    prev: 0,
                }),
            })),
            meta: StreamMeta {
                finite_len: None,
                period: None,
            },
        }
    }

    pub(crate) fn from_source(source: Box<dyn DigitSource>, finite_len: Option<u64>) -> Self {
        WordStream {
            state: Arc::new(Mutex::new(StreamState {
                memo: Bits::new(),
                source,
            })),
            meta: StreamMeta {
                finite_len,
                period: None,
            },
        }
    }

    /// Total length when the stream is finite.
    pub fn finite_len(&self) -> Option<u64> {
        self.meta.finite_len
    }

    /// The repeating block when the stream is periodic.
    pub fn period(&self) -> Option<&FiniteWord> {
        self.meta.period.as_deref()
    }

    /// Digit at 0-based index i.
    pub fn digit(&self, i: u64) -> Result<bool> {
        let mut state = self.state.lock().unwrap();
        let target = i as usize + 1;
        ensure_len(&mut state, target)?;
        Ok(state.memo[i as usize])
    }

    /// Materializes the first l digits.
    pub fn prefix(&self, l: u64) -> Result<FiniteWord> {
        let mut state = self.state.lock().unwrap();
        ensure_len(&mut state, l as usize)?;
        Ok(FiniteWord::new(state.memo[..l as usize].to_bitvec()))
    }

    /// Height of the length-l prefix.
    pub fn height(&self, l: u64) -> Result<u64> {
        let mut state = self.state.lock().unwrap();
        ensure_len(&mut state, l as usize)?;
        Ok(state.memo[..l as usize].count_ones() as u64)
    }
}

fn ensure_len(state: &mut StreamState, target: usize) -> Result<()> {
    while state.memo.len() < target {
        let before = state.memo.len();
        let StreamState { memo, source } = state;
        source.extend_to(memo, target)?;
        assert!(state.memo.len() > before, "digit source made no progress");
    }
    Ok(())
}

/// The (length, height) pairs of every prefix of the first `l` digits.
/// Heights step by 0 or 1 per digit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightProfile {
    pairs: Vec<(u64, u64)>,
}

impl HeightProfile {
    pub fn pairs(&self) -> &[(u64, u64)] {
        &self.pairs
    }

    /// Height at prefix length l (l in 1..=len).
    pub fn height(&self, l: u64) -> u64 {
        self.pairs[l as usize - 1].1
    }

    pub fn len(&self) -> u64 {
        self.pairs.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Profile of the first l prefix heights of v.
pub fn height_profile(v: &WordStream, l: u64) -> Result<HeightProfile> {
    let prefix = v.prefix(l)?;
    let mut pairs = Vec::with_capacity(l as usize);
    let mut h = 0u64;
    for i in 0..l {
        if prefix.bit(i) {
            h += 1;
        }
        pairs.push((i + 1, h));
    }
    Ok(HeightProfile { pairs })
}

/// Relative height n_l = h(l) - ceil(l*alpha): how far the prefix height
/// sits above the Sturmian staircase of the oracle's slope.
pub fn relative_height(v: &WordStream, l: u64, oracle: &AlphaOracle) -> Result<i64> {
    let h = v.height(l)? as i64;
    let c = alpha_ceil(oracle, l)? as i64;
    Ok(h - c)
}

/// Relative heights for every prefix length 1..=scan, one pass.
pub fn relative_heights(v: &WordStream, oracle: &AlphaOracle, scan: u64) -> Result<Vec<i64>> {
    let prefix = v.prefix(scan)?;
    let mut out = Vec::with_capacity(scan as usize);
    let mut h = 0i64;
    for l in 1..=scan {
        if prefix.bit(l - 1) {
            h += 1;
        }
        let c = alpha_ceil(oracle, l)? as i64;
        out.push(h - c);
    }
    Ok(out)
}

/// How [`dominates`] compares two words.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DominanceMode {
    /// Prefix heights of `upper` are >= those of `lower` everywhere in the
    /// window.
    HeightsOnly,
    /// HeightsOnly plus equal heights at the right endpoint: the certificate
    /// that `upper` rewrites to `lower` by moving ones leftward one swap at
    /// a time, which pins the order of the two series values.
    LiftCertificate,
}

/// Outcome of a dominance check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominance {
    Holds,
    FailsAt(u64),
}

/// Checks h_upper(l) >= h_lower(l) for all l in 1..=window; in
/// LiftCertificate mode additionally requires equality at l = window.
pub fn dominates(
    upper: &WordStream,
    lower: &WordStream,
    window: u64,
    mode: DominanceMode,
) -> Result<Dominance> {
    let up = upper.prefix(window)?;
    let low = lower.prefix(window)?;
    let mut hu = 0u64;
    let mut hl = 0u64;
    for l in 1..=window {
        if up.bit(l - 1) {
            hu += 1;
        }
        if low.bit(l - 1) {
            hl += 1;
        }
        if hu < hl {
            return Ok(Dominance::FailsAt(l));
        }
    }
    if mode == DominanceMode::LiftCertificate && hu != hl {
        return Ok(Dominance::FailsAt(window));
    }
    Ok(Dominance::Holds)
}

/// Result of a last-visit search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ElljResult {
    /// l_j, window-certified: no later prefix length in (l_j, scan_limit]
    /// has relative height <= j.
    Found { ell: u64, certified_up_to: u64 },
    /// The window does not pin l_j.
    Unresolved,
}

/// The last prefix length l <= scan_limit where the relative height of v
/// equals j, certified within the window: every later l' in the window has
/// relative height strictly above j. Relative heights step by at most one,
/// so for words whose relative height tends to infinity a later dip to j or
/// below would move the true last visit past the window; the certificate is
/// exactly "no such dip seen".
pub fn ell_j(v: &WordStream, oracle: &AlphaOracle, j: i64, scan_limit: u64) -> Result<ElljResult> {
    let n = relative_heights(v, oracle, scan_limit)?;
    // Scan from the window's end: the first value equal to j is the last
    // visit, certified because everything after it was strictly above j.
    for l in (1..=scan_limit).rev() {
        let nl = n[l as usize - 1];
        if nl == j {
            if l == scan_limit {
                // Empty certification tail.
                return Ok(ElljResult::Unresolved);
            }
            return Ok(ElljResult::Found {
                ell: l,
                certified_up_to: scan_limit,
            });
        }
        if nl < j {
            // Relative heights step by at most one, so the value j would
            // have to reappear past scan_limit before growing away; the
            // window cannot pin the last visit.
            return Ok(ElljResult::Unresolved);
        }
    }
    Ok(ElljResult::Unresolved)
}

struct PrecomputedSource {
    bits: Bits,
    cursor: usize,
    why_end: String,
}

impl DigitSource for PrecomputedSource {
    fn extend_to(&mut self, memo: &mut Bits, target: usize) -> Result<()> {
        while memo.len() < target {
            if self.cursor >= self.bits.len() {
                return Err(Error::Unresolved(self.why_end.clone()));
            }
            memo.push(self.bits[self.cursor]);
            self.cursor += 1;
        }
        Ok(())
    }
}

/// The word associated with v for the critical slope: the Sturmian word
/// with the zero at each window-certified last-visit position l_j replaced
/// by a one. Digits at or beyond scan_limit are Unresolved, never guessed.
pub fn associated_word(
    v: &WordStream,
    oracle: &AlphaOracle,
    scan_limit: u64,
) -> Result<WordStream> {
    if *oracle.kind() != AlphaKind::LogRatio23 {
        return Err(Error::InvalidSlope(
            "associated words are defined for the critical slope ln2/ln3".into(),
        ));
    }
    let n = relative_heights(v, oracle, scan_limit)?;
    // suffix_min[i] = min of n over prefix lengths > l=i+1, within window.
    let count = scan_limit as usize;
    let mut suffix_min = vec![i64::MAX; count];
    let mut running = i64::MAX;
    for l in (1..=scan_limit).rev() {
        suffix_min[l as usize - 1] = running;
        running = running.min(n[l as usize - 1]);
    }
    let base = WordStream::sturmian(oracle.clone(), true);
    let sturmian_prefix = base.prefix(scan_limit)?;
    let mut bits = Bits::with_capacity(count);
    bits.push(sturmian_prefix.bit(0));
    for l in 1..scan_limit {
        let nl = n[l as usize - 1];
        let is_last_visit = nl >= 0 && suffix_min[l as usize - 1] > nl;
        if is_last_visit {
            bits.push(true);
        } else {
            bits.push(sturmian_prefix.bit(l));
        }
    }
    let source = PrecomputedSource {
        bits,
        cursor: 0,
        why_end: format!(
            "associated word is only certified below scan_limit {scan_limit}"
        ),
    };
    Ok(WordStream::from_source(Box::new(source), None))
}
