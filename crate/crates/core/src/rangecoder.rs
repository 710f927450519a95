//! Carry-propagating byte-oriented range coder.
//!
//! The encoder keeps a 64-bit `low`/`range` pair and emits the top byte of
//! `low` whenever `range` drops below 2^40, so the active range never gets
//! smaller than 2^16 times the largest model total (2^24). The per-symbol
//! truncation loss is therefore below `-log2(1 - 2^-16)` ≈ 2.2e-5 bits, and
//! the only visible overhead is the 3-byte tail written by [`Encoder::finish`]
//! plus up to 24 bits of unflushed state — at most 64 bits in total over the
//! ideal information content of the coded intervals.
//!
//! Carries are resolved by incrementing already-emitted bytes in the output
//! buffer. The decoder mirrors the arithmetic exactly and reads the stream
//! with an implicit zero padding of up to [`FLUSH_PADDING`] bytes, which is
//! precisely the tail the encoder did not need to write.

use alloc::vec::Vec;

use crate::fmath::{log2, CompensatedSum};
use crate::models::{SymbolInterval, MAX_CODING_TOTAL};
use crate::{Error, Result};

/// Renormalization bound: `range` is kept at or above this between symbols.
const RENORM_BOUND: u64 = 1 << 40;

/// Zero bytes the decoder may assume past the end of the payload.
const FLUSH_PADDING: usize = 5;

fn check_interval(iv: &SymbolInterval) -> Result<()> {
    if iv.low < iv.high && iv.high <= iv.total && iv.total <= MAX_CODING_TOTAL {
        Ok(())
    } else {
        Err(Error::InternalInvariantViolation("malformed symbol interval"))
    }
}

#[derive(Debug, Clone)]
pub struct Encoder {
    low: u64,
    range: u64,
    out: Vec<u8>,
}

impl Default for Encoder {
    fn default() -> Self {
        Self::new()
    }
}

impl Encoder {
    pub fn new() -> Self {
        Self { low: 0, range: u64::MAX, out: Vec::new() }
    }

    fn propagate_carry(&mut self) -> Result<()> {
        for byte in self.out.iter_mut().rev() {
            if *byte == 0xFF {
                *byte = 0;
            } else {
                *byte += 1;
                return Ok(());
            }
        }
        // The coded value is a fraction below 1.0; a carry out of the first
        // byte cannot occur for intervals produced by a valid model.
        Err(Error::InternalInvariantViolation("carry out of stream"))
    }

    /// Narrows the range by the probability `iv` describes, emitting settled
    /// bytes.
    pub fn encode(&mut self, iv: &SymbolInterval) -> Result<()> {
        check_interval(iv)?;
        let r = self.range / iv.total;
        let (low, carry) = self.low.overflowing_add(r * iv.low);
        self.low = low;
        if carry {
            self.propagate_carry()?;
        }
        self.range = r * iv.width();
        while self.range < RENORM_BOUND {
            self.out.push((self.low >> 56) as u8);
            self.low <<= 8;
            self.range <<= 8;
        }
        Ok(())
    }

    /// Bytes emitted so far (excluding the tail written by `finish`).
    pub fn bytes_written(&self) -> usize {
        self.out.len()
    }

    /// Current range; exposed so tests can check the decoder mirrors it.
    pub fn range(&self) -> u64 {
        self.range
    }

    /// Seals the stream: picks the multiple of 2^40 inside the final interval
    /// and writes its top three bytes. The remaining 40 bits are zero and are
    /// reconstructed by decoder-side padding.
    pub fn finish(mut self) -> Result<Vec<u8>> {
        let (v, carry) = self.low.overflowing_add(RENORM_BOUND - 1);
        if carry {
            self.propagate_carry()?;
        }
        let v = v & !(RENORM_BOUND - 1);
        self.out.push((v >> 56) as u8);
        self.out.push((v >> 48) as u8);
        self.out.push((v >> 40) as u8);
        Ok(self.out)
    }
}

#[derive(Debug, Clone)]
pub struct Decoder<'a> {
    code: u64,
    range: u64,
    input: &'a [u8],
    pos: usize,
    padding: usize,
}

impl<'a> Decoder<'a> {
    pub fn new(payload: &'a [u8]) -> Result<Self> {
        let mut d = Self { code: 0, range: u64::MAX, input: payload, pos: 0, padding: 0 };
        for _ in 0..8 {
            let b = d.pull()?;
            d.code = (d.code << 8) | b as u64;
        }
        Ok(d)
    }

    fn pull(&mut self) -> Result<u8> {
        if self.pos < self.input.len() {
            let b = self.input[self.pos];
            self.pos += 1;
            Ok(b)
        } else {
            self.padding += 1;
            if self.padding > FLUSH_PADDING {
                Err(Error::TruncatedStream)
            } else {
                Ok(0)
            }
        }
    }

    /// Cumulative value of the next symbol under a model with sum `total`.
    /// Does not advance the stream; pass the found interval to [`consume`].
    ///
    /// [`consume`]: Decoder::consume
    pub fn decode_target(&self, total: u64) -> Result<u64> {
        if total == 0 || total > MAX_CODING_TOTAL {
            return Err(Error::InternalInvariantViolation("bad model total"));
        }
        let r = self.range / total;
        Ok((self.code / r).min(total - 1))
    }

    /// Mirrors [`Encoder::encode`] for the interval selected from the target.
    pub fn consume(&mut self, iv: &SymbolInterval) -> Result<()> {
        check_interval(iv)?;
        let r = self.range / iv.total;
        self.code = self
            .code
            .checked_sub(r * iv.low)
            .ok_or(Error::InternalInvariantViolation("interval does not contain code"))?;
        self.range = r * iv.width();
        while self.range < RENORM_BOUND {
            let b = self.pull()?;
            self.code = (self.code << 8) | b as u64;
            self.range <<= 8;
        }
        Ok(())
    }

    /// Decodes one symbol: finds the interval containing the current target
    /// via `lookup` and advances past it.
    pub fn decode_symbol<F>(&mut self, total: u64, lookup: F) -> Result<u8>
    where
        F: FnOnce(u64) -> Result<(u8, SymbolInterval)>,
    {
        let target = self.decode_target(total)?;
        let (symbol, iv) = lookup(target)?;
        self.consume(&iv)?;
        Ok(symbol)
    }

    pub fn range(&self) -> u64 {
        self.range
    }

    /// True when the decoder consumed the payload exactly: every real byte
    /// read and only the encoder's unwritten tail assumed as padding.
    pub fn consumed_exactly(&self) -> bool {
        self.pos == self.input.len() && self.padding == FLUSH_PADDING
    }
}

/// Accumulates the ideal information content `-log2(p)` of coded intervals,
/// with compensated summation and an optional per-position trace.
#[derive(Debug, Clone)]
pub struct IcAccumulator {
    sum: CompensatedSum,
    trace: Option<Vec<f64>>,
}

impl IcAccumulator {
    pub fn new(with_trace: bool) -> Self {
        Self { sum: CompensatedSum::new(), trace: with_trace.then(Vec::new) }
    }

    pub fn add(&mut self, iv: &SymbolInterval) {
        let bits = log2(iv.total as f64) - log2(iv.width() as f64);
        self.sum.add(bits);
        if let Some(trace) = self.trace.as_mut() {
            trace.push(bits);
        }
    }

    /// Total ideal bits accumulated so far.
    pub fn total_bits(&self) -> f64 {
        self.sum.value()
    }

    /// Per-position information content, if tracing was requested.
    pub fn into_trace(self) -> Option<Vec<f64>> {
        self.trace
    }
}
