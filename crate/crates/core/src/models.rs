//! The five weight models behind one adaptive-model interface.
//!
//! Every model maps the next symbol to an exact integer interval
//! `[low, high)` out of `total`; the ratio `(high - low) / total` is the
//! probability handed to the range coder. Updates are method-specific:
//!
//! - `static`   — exact global counts, never updated.
//! - `b-adp`    — classic adaptive coding: start at 1, increment after coding.
//! - `f-adp`    — forward-looking: start at the exact remaining counts,
//!               decrement after coding.
//! - `b-2`      — position weights double every `k` symbols; implemented by
//!               halving all accumulated weights at each block boundary while
//!               the per-position increment stays fixed.
//! - `b-weight` — smooth geometric position weights `2^((i-1)/k)`, tracked
//!               incrementally in fixed point.
//!
//! `static`, `b-adp` and `f-adp` keep weights as raw counts; the weighted
//! methods use Q16 fixed point ([`WEIGHT_ONE`]). All state is integer-only so
//! that encoder and decoder evolve bit-identically on any platform.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Fixed-point scale: 1.0 in weight units.
pub const WEIGHT_ONE: u64 = 1 << 16;

/// Largest model total accepted by the range coder.
pub const MAX_CODING_TOTAL: u64 = 1 << 24;

/// Headroom bound for the analysis path, where no coder is attached and
/// rescaling should essentially never distort the ideal statistics.
pub const MAX_ANALYSIS_TOTAL: u64 = 1 << 62;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Static,
    BAdp,
    FAdp,
    B2,
    BWeight,
}

impl Method {
    /// Wire identifier used by the container format.
    pub fn id(self) -> u8 {
        match self {
            Method::Static => 0,
            Method::BAdp => 1,
            Method::FAdp => 2,
            Method::B2 => 3,
            Method::BWeight => 4,
        }
    }

    pub fn from_id(id: u8) -> Option<Method> {
        Some(match id {
            0 => Method::Static,
            1 => Method::BAdp,
            2 => Method::FAdp,
            3 => Method::B2,
            4 => Method::BWeight,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Static => "static",
            Method::BAdp => "b-adp",
            Method::FAdp => "f-adp",
            Method::B2 => "b-2",
            Method::BWeight => "b-weight",
        }
    }

    pub fn from_name(name: &str) -> Option<Method> {
        Some(match name {
            "static" => Method::Static,
            "b-adp" | "badp" => Method::BAdp,
            "f-adp" | "fadp" => Method::FAdp,
            "b-2" | "b2" => Method::B2,
            "b-weight" | "bweight" => Method::BWeight,
            _ => return None,
        })
    }

    /// Whether the method takes the block parameter `k`.
    pub fn uses_k(self) -> bool {
        matches!(self, Method::B2 | Method::BWeight)
    }

    /// Whether the method needs the exact symbol frequencies up front.
    pub fn needs_freqs(self) -> bool {
        matches!(self, Method::Static | Method::FAdp)
    }
}

/// A method together with its `k` parameter (present iff the method uses it).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MethodParams {
    method: Method,
    k: u32,
}

impl MethodParams {
    pub fn new(method: Method, k: Option<u32>) -> Result<Self> {
        match (method.uses_k(), k) {
            (true, Some(k)) if k >= 1 => Ok(Self { method, k }),
            (true, Some(_)) => Err(Error::InvalidParameter("k must be at least 1")),
            (true, None) => Err(Error::InvalidParameter("method requires k")),
            (false, None) => Ok(Self { method, k: 0 }),
            (false, Some(_)) => Err(Error::InvalidParameter("method does not take k")),
        }
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn k(&self) -> Option<u32> {
        self.method.uses_k().then_some(self.k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphabetMode {
    /// All 256 byte values, no descriptor transmitted.
    Fixed256,
    /// Only the distinct bytes of the file, transmitted in the header.
    FileAlphabet,
}

/// Ordered symbol set the model ranges over. Symbols are kept in ascending
/// byte order; interval layout follows this order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    mode: AlphabetMode,
    symbols: Vec<u8>,
    index: [i16; 256],
}

impl Alphabet {
    pub fn fixed256() -> Self {
        let symbols: Vec<u8> = (0..=255).collect();
        let mut index = [0i16; 256];
        for (i, slot) in index.iter_mut().enumerate() {
            *slot = i as i16;
        }
        Self { mode: AlphabetMode::Fixed256, symbols, index }
    }

    /// File alphabet: the distinct bytes of `text`, ascending.
    pub fn from_text(text: &[u8]) -> Result<Self> {
        if text.is_empty() {
            return Err(Error::EmptyText);
        }
        let mut present = [false; 256];
        for &b in text {
            present[b as usize] = true;
        }
        let symbols: Vec<u8> = (0..=255u8).filter(|&b| present[b as usize]).collect();
        Self::from_symbols(symbols)
    }

    /// Rebuilds a file alphabet from its transmitted symbol list.
    pub fn from_symbols(symbols: Vec<u8>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::InvalidParameter("alphabet must contain at least one symbol"));
        }
        if !symbols.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::CorruptHeader("alphabet symbols not strictly ascending"));
        }
        let mut index = [-1i16; 256];
        for (i, &b) in symbols.iter().enumerate() {
            index[b as usize] = i as i16;
        }
        Ok(Self { mode: AlphabetMode::FileAlphabet, symbols, index })
    }

    pub fn mode(&self) -> AlphabetMode {
        self.mode
    }

    /// Alphabet size `m`.
    pub fn size(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn index_of(&self, symbol: u8) -> Option<usize> {
        let i = self.index[symbol as usize];
        (i >= 0).then_some(i as usize)
    }

    pub fn symbol_at(&self, index: usize) -> u8 {
        self.symbols[index]
    }
}

/// Exact per-symbol occurrence counts, indexed in alphabet order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyTable {
    occ: Vec<u64>,
    n: u64,
}

impl FrequencyTable {
    pub fn count(text: &[u8], alphabet: &Alphabet) -> Result<Self> {
        let mut occ = vec![0u64; alphabet.size()];
        for &b in text {
            let i = alphabet
                .index_of(b)
                .ok_or(Error::InvalidParameter("text contains symbol outside alphabet"))?;
            occ[i] += 1;
        }
        Ok(Self { n: occ.iter().sum(), occ })
    }

    pub fn from_counts(occ: Vec<u64>) -> Self {
        Self { n: occ.iter().sum(), occ }
    }

    pub fn occ(&self) -> &[u64] {
        &self.occ
    }

    pub fn n(&self) -> u64 {
        self.n
    }
}

/// Cumulative interval of one symbol: probability is `(high - low) / total`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymbolInterval {
    pub low: u64,
    pub high: u64,
    pub total: u64,
}

impl SymbolInterval {
    pub fn width(&self) -> u64 {
        self.high - self.low
    }
}

/// Mutable model state: per-symbol weights, their sum, and the current
/// position weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    params: MethodParams,
    alphabet: Alphabet,
    w: Vec<u64>,
    total: u64,
    cur_g: u64,
    pos: u64,
    updates_in_block: u32,
    root: u64,
    max_total: u64,
}

impl Model {
    /// Model for feeding the range coder: totals capped at
    /// [`MAX_CODING_TOTAL`].
    pub fn for_coding(
        params: MethodParams,
        alphabet: &Alphabet,
        freqs: Option<&FrequencyTable>,
    ) -> Result<Self> {
        Self::with_max_total(params, alphabet, freqs, MAX_CODING_TOTAL)
    }

    /// Model for ideal information-content analysis: totals capped only by
    /// integer headroom, so rescaling noise is negligible.
    pub fn for_analysis(
        params: MethodParams,
        alphabet: &Alphabet,
        freqs: Option<&FrequencyTable>,
    ) -> Result<Self> {
        Self::with_max_total(params, alphabet, freqs, MAX_ANALYSIS_TOTAL)
    }

    fn with_max_total(
        params: MethodParams,
        alphabet: &Alphabet,
        freqs: Option<&FrequencyTable>,
        max_total: u64,
    ) -> Result<Self> {
        let m = alphabet.size();
        let mut model = Self {
            params,
            alphabet: alphabet.clone(),
            w: Vec::new(),
            total: 0,
            cur_g: 1,
            pos: 1,
            updates_in_block: 0,
            root: 0,
            max_total,
        };
        match params.method() {
            Method::Static | Method::FAdp => {
                let freqs = freqs.ok_or(Error::MissingHeader)?;
                if freqs.occ().len() != m {
                    return Err(Error::InvalidParameter("frequency table does not match alphabet"));
                }
                model.w = freqs.occ().to_vec();
                model.total = freqs.n();
                if params.method() == Method::FAdp && model.total > max_total {
                    // Exact remaining counts cannot be rescaled without
                    // desynchronizing the decrement bookkeeping.
                    return Err(Error::InvalidParameter(
                        "text too long for forward-adaptive coding precision",
                    ));
                }
                while model.total > max_total {
                    model.rescale();
                }
            }
            Method::BAdp => {
                model.w = vec![1; m];
                model.total = m as u64;
            }
            Method::B2 | Method::BWeight => {
                model.w = vec![WEIGHT_ONE; m];
                model.total = m as u64 * WEIGHT_ONE;
                model.cur_g = WEIGHT_ONE;
                if params.method() == Method::BWeight {
                    model.root = root_of_two_q16(params.k().unwrap());
                }
                while model.total > max_total {
                    model.rescale();
                    model.cur_g = ((model.cur_g + 1) >> 1).max(1);
                }
            }
        }
        Ok(model)
    }

    pub fn params(&self) -> MethodParams {
        self.params
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Next position to be coded, 1-based.
    pub fn position(&self) -> u64 {
        self.pos
    }

    /// Current position weight `g(i)` in the model's internal scale.
    pub fn current_g(&self) -> u64 {
        self.cur_g
    }

    /// Weight of one symbol in the model's internal scale.
    pub fn weight(&self, symbol: u8) -> Option<u64> {
        self.alphabet.index_of(symbol).map(|i| self.w[i])
    }

    /// Cumulative interval of `symbol` under the current weights. Pure.
    pub fn interval(&self, symbol: u8) -> Result<SymbolInterval> {
        let idx = self.alphabet.index_of(symbol).ok_or(Error::ZeroProbabilitySymbol)?;
        if self.w[idx] == 0 {
            return Err(Error::ZeroProbabilitySymbol);
        }
        let low: u64 = self.w[..idx].iter().sum();
        Ok(SymbolInterval { low, high: low + self.w[idx], total: self.total })
    }

    /// Finds the symbol whose interval contains the cumulative `target`.
    pub fn find(&self, target: u64) -> Result<(u8, SymbolInterval)> {
        let mut low = 0u64;
        for (idx, &wi) in self.w.iter().enumerate() {
            if wi == 0 {
                continue;
            }
            if target < low + wi {
                let iv = SymbolInterval { low, high: low + wi, total: self.total };
                return Ok((self.alphabet.symbol_at(idx), iv));
            }
            low += wi;
        }
        Err(Error::InternalInvariantViolation("cumulative target beyond total"))
    }

    /// Advances the model past `symbol` (which must be the symbol just coded).
    pub fn update(&mut self, symbol: u8) -> Result<()> {
        let idx = self.alphabet.index_of(symbol).ok_or(Error::ZeroProbabilitySymbol)?;
        match self.params.method() {
            Method::Static => {}
            Method::BAdp => {
                self.w[idx] += 1;
                self.total += 1;
            }
            Method::FAdp => {
                if self.w[idx] == 0 {
                    return Err(Error::HeaderMismatch);
                }
                self.w[idx] -= 1;
                self.total -= 1;
            }
            Method::B2 => {
                self.w[idx] += self.cur_g;
                self.total += self.cur_g;
                self.updates_in_block += 1;
                if self.updates_in_block == self.params.k().unwrap() {
                    self.updates_in_block = 0;
                    self.rescale();
                }
            }
            Method::BWeight => {
                self.w[idx] += self.cur_g;
                self.total += self.cur_g;
                self.cur_g = mul_q16(self.cur_g, self.root);
            }
        }
        self.pos += 1;
        while self.total > self.max_total {
            self.rescale();
            self.cur_g = ((self.cur_g + 1) >> 1).max(1);
        }
        Ok(())
    }

    /// Halves every non-zero weight, rounding up with a floor of one unit, and
    /// recomputes the total. Zero weights (symbols that never occur under the
    /// static model) stay zero.
    pub fn rescale(&mut self) {
        let mut total = 0u64;
        for w in self.w.iter_mut() {
            if *w > 0 {
                *w = ((*w + 1) >> 1).max(1);
            }
            total += *w;
        }
        self.total = total;
    }
}

/// `a * b` in Q16 fixed point, rounding to nearest.
fn mul_q16(a: u64, b: u64) -> u64 {
    (((a as u128) * (b as u128) + (1 << 15)) >> 16) as u64
}

/// `2^(num/den)` for `0 <= num <= den` in Q32 fixed point, via the integer
/// exponential series. Deterministic on every platform.
fn exp2_frac_q32(num: u64, den: u64) -> u64 {
    // round(ln2 * 2^32)
    const LN2_Q32: u128 = 2_977_044_472;
    let t = (LN2_Q32 * num as u128 + den as u128 / 2) / den as u128;
    let mut term: u128 = 1 << 32;
    let mut acc = term;
    let mut j = 1u128;
    while term > 0 {
        term = (term * t) >> 32;
        term = (term + j / 2) / j;
        acc += term;
        j += 1;
    }
    acc as u64
}

/// `2^(1/k)` in Q16, the per-position multiplier of the smooth geometric
/// model.
fn root_of_two_q16(k: u32) -> u64 {
    (exp2_frac_q32(1, k as u64) + (1 << 15)) >> 16
}

/// Position weight `g(i)` in Q16 for 1-based position `i`.
///
/// Analysis helper: closed-form evaluation that overflows for large `i`
/// instead of rescaling. The incremental path inside [`Model::update`] is the
/// production route.
pub fn g_value(params: &MethodParams, i: u64) -> Result<u64> {
    if i < 1 {
        return Err(Error::InvalidParameter("positions are 1-based"));
    }
    match params.method() {
        Method::Static | Method::BAdp | Method::FAdp => Ok(WEIGHT_ONE),
        Method::B2 => {
            let q = (i - 1) / params.k().unwrap() as u64;
            if q >= 47 {
                return Err(Error::FixedPointOverflow);
            }
            Ok(WEIGHT_ONE << q)
        }
        Method::BWeight => {
            let k = params.k().unwrap() as u64;
            let q = (i - 1) / k;
            let rem = (i - 1) % k;
            let frac = exp2_frac_q32(rem, k) as u128;
            let val = ((frac << q) + (1 << 15)) >> 16;
            u64::try_from(val).map_err(|_| Error::FixedPointOverflow)
        }
    }
}
