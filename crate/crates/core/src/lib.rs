//! Core primitives for weighted Burrows-Wheeler compression.
//!
//! The crate combines three layers that together form a complete lossless
//! compressor:
//!
//! - [`bwt`] — forward, inverse, iterated and block-wise Burrows-Wheeler
//!   transform over cyclic rotations, built on an `O(n log n)` prefix-doubling
//!   rotation sort.
//! - [`models`] — the five weight models (`static`, `b-adp`, `f-adp`, `b-2`,
//!   `b-weight`) behind one adaptive-model interface that yields exact symbol
//!   intervals in integer fixed-point arithmetic.
//! - [`rangecoder`] — a carry-propagating byte-oriented range coder consuming
//!   those intervals, plus an information-content accumulator for analysis.
//!
//! [`codec`] wires the layers into `compress`/`decompress`/`analyze` pipelines
//! with a self-describing container format, and [`metrics`] provides run
//! statistics (NNR) and order-0 entropy used by the benchmark harness.
//!
//! The crate is `no_std` (with `alloc`); all arithmetic that influences coded
//! output is integer-only, so encoder and decoder stay bit-identical across
//! platforms.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bits;
pub mod bwt;
pub mod codec;
pub mod metrics;
pub mod models;
pub mod rangecoder;

pub(crate) mod fmath;

use alloc::boxed::Box;
use core::fmt;

/// Errors shared by all modules.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Transform and metric operations require at least one symbol.
    EmptyText,
    /// A primary index or block structure is inconsistent with the data.
    CorruptBlock,
    /// An argument violates a documented precondition.
    InvalidParameter(&'static str),
    /// The model requires a frequency table that was not supplied.
    MissingHeader,
    /// A zero-weight symbol was requested; the stream or header is wrong.
    ZeroProbabilitySymbol,
    /// The frequency header does not match the coded stream.
    HeaderMismatch,
    /// An internal contract was broken; indicates a bug, not bad input.
    InternalInvariantViolation(&'static str),
    /// The coded payload ended before decoding finished.
    TruncatedStream,
    /// The container header is malformed.
    CorruptHeader(&'static str),
    /// A weight or position value exceeds the fixed-point range.
    FixedPointOverflow,
    /// Writing to the output sink failed.
    WriteFailed,
    /// A permutation produced a different ideal size (see payload).
    InvarianceViolation(Box<codec::InvarianceFailure>),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyText => write!(f, "input text is empty"),
            Error::CorruptBlock => write!(f, "corrupt block: bad primary index or block layout"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::MissingHeader => write!(f, "method requires a frequency table"),
            Error::ZeroProbabilitySymbol => write!(f, "symbol has zero probability"),
            Error::HeaderMismatch => write!(f, "frequency header does not match stream"),
            Error::InternalInvariantViolation(msg) => write!(f, "internal invariant violated: {msg}"),
            Error::TruncatedStream => write!(f, "coded stream is truncated"),
            Error::CorruptHeader(msg) => write!(f, "corrupt header: {msg}"),
            Error::FixedPointOverflow => write!(f, "fixed-point overflow"),
            Error::WriteFailed => write!(f, "writing to sink failed"),
            Error::InvarianceViolation(v) => {
                write!(f, "permutation changed ideal size ({} vs {} bits)", v.expected_bits, v.actual_bits)
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
