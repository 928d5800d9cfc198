//! One-pass randomized fingerprints of bit streams.
//!
//! The input `x` of declared length `n` is cut into `r = ceil(n/k)` segments
//! `x = s_{r-1} ... s_1 s_0`; every segment except the last-read one, `s_0`,
//! has exactly `k` bits. Each segment becomes a field element `w(s_i)` and the
//! stream is summarised by the monic polynomial
//!
//! ```text
//! d_x(z) = z^r + w(s_{r-1}) z^{r-1} + ... + w(s_0)
//! ```
//!
//! evaluated at a random point `a` by Horner's rule, one multiply and one add
//! per segment. The output is the triple `<n, a, d_x(a)>`.
//!
//! Field sizing: [`fingerprint`] sizes the field from `n` and the density
//! bound `f(n)` through [`select_field_size`]; this is the configuration the
//! false-positive guarantees in [`crate::sketch`] rely on. [`begin`] and
//! [`fingerprint_with_ctx`] accept any context, which is what brute-force
//! tests over tiny fields use.

pub mod coding;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

use crate::field::{make_field, select_field_size, FieldCtx, FieldElem, FieldError};
use crate::gf2poly::Gf2Poly;
use crate::rng::SeededRng;

pub use coding::{
    decode_fingerprint, decode_tuple, encode_fingerprint, encode_tuple, encoded_len, CodingError,
};

/// Constant `C` in the state bound `peak_state_bits <= C·(k + log2 n)`.
pub const STATE_BITS_CONSTANT: u64 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StreamError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("declared stream length must be at least 1")]
    ZeroLength,
    #[error("stream declared {n} bits but {attempted} were fed")]
    Overfeed { n: u64, attempted: u64 },
    #[error("stream declared {n} bits but ended after {seen}")]
    Premature { n: u64, seen: u64 },
    #[error("input has {got} bits, expected {expected}")]
    LengthMismatch { expected: u64, got: u64 },
    #[error("input must contain at least one bit")]
    EmptyInput,
    #[error("fingerprint record: {0}")]
    InvalidRecord(String),
}

/// Work and space counters for one streaming run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceProfile {
    /// Segment-to-element conversions.
    pub conversions: u64,
    /// Field additions and multiplications.
    pub field_ops: u64,
    /// Random bits drawn before the first input bit.
    pub random_bits: u64,
    /// Input bits consumed.
    pub bit_reads: u64,
    /// Largest live state observed, in bits.
    pub peak_state_bits: u64,
}

impl ResourceProfile {
    /// `C·(k + log2 n)`.
    pub fn state_bound(k: usize, n: u64) -> f64 {
        STATE_BITS_CONSTANT as f64 * (k as f64 + (n as f64).log2())
    }
}

/// Output triple `<n, a, v>` with `v = d_x(a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fingerprint {
    pub n: u64,
    pub k: usize,
    pub modulus: Gf2Poly,
    pub a: FieldElem,
    pub v: FieldElem,
    pub seed: Option<u64>,
}

/// JSON form of a [`Fingerprint`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FingerprintRecord {
    pub n: u64,
    pub k: usize,
    pub t_hex: String,
    pub a_hex: String,
    pub v_hex: String,
    pub seed: Option<u64>,
}

impl Fingerprint {
    pub fn to_record(&self) -> FingerprintRecord {
        FingerprintRecord {
            n: self.n,
            k: self.k,
            t_hex: self.modulus.to_hex(),
            a_hex: self.a.to_hex(),
            v_hex: self.v.to_hex(),
            seed: self.seed,
        }
    }

    /// Rebuilds a fingerprint, checking the modulus against the deterministic field for `k`.
    pub fn from_record(rec: &FingerprintRecord) -> Result<(Fingerprint, FieldCtx), StreamError> {
        if rec.n == 0 {
            return Err(StreamError::ZeroLength);
        }
        let ctx = make_field(rec.k)?;
        let t = Gf2Poly::from_hex(&rec.t_hex).map_err(FieldError::from)?;
        if &t != ctx.modulus() {
            return Err(StreamError::InvalidRecord(format!(
                "modulus 0x{} is not the field modulus 0x{} for k={}",
                rec.t_hex,
                ctx.modulus().to_hex(),
                rec.k
            )));
        }
        let fp = Fingerprint {
            n: rec.n,
            k: rec.k,
            modulus: t,
            a: ctx.elem_from_hex(&rec.a_hex)?,
            v: ctx.elem_from_hex(&rec.v_hex)?,
            seed: rec.seed,
        };
        Ok((fp, ctx))
    }
}

/// In-progress streaming evaluation.
#[derive(Debug, Clone)]
pub struct StreamState {
    ctx: FieldCtx,
    a: FieldElem,
    v: FieldElem,
    n: u64,
    bits_seen: u64,
    segments: u64,
    folded: u64,
    buffer: SmallVec<[u64; 2]>,
    buffered: usize,
    seed: Option<u64>,
    profile: ResourceProfile,
}

/// Starts a stream of `n` bits over `ctx` with a random evaluation point drawn from `rng`.
pub fn begin(n: u64, ctx: &FieldCtx, rng: &mut SeededRng) -> Result<StreamState, StreamError> {
    let a = ctx.random_elem(rng);
    let mut state = StreamState::with_point(n, ctx, a)?;
    state.seed = Some(rng.seed());
    state.profile.random_bits = ctx.k() as u64;
    Ok(state)
}

impl StreamState {
    /// Starts a stream with a caller-chosen evaluation point (no randomness drawn).
    pub fn with_point(n: u64, ctx: &FieldCtx, a: FieldElem) -> Result<StreamState, StreamError> {
        if n == 0 {
            return Err(StreamError::ZeroLength);
        }
        let k = ctx.k();
        let mut state = StreamState {
            ctx: ctx.clone(),
            a,
            v: ctx.one(),
            n,
            bits_seen: 0,
            segments: n.div_ceil(k as u64),
            folded: 0,
            buffer: smallvec::smallvec![0; k.div_ceil(64)],
            buffered: 0,
            seed: None,
            profile: ResourceProfile::default(),
        };
        state.note_state();
        Ok(state)
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn point(&self) -> &FieldElem {
        &self.a
    }

    /// Current accumulator.
    pub fn value(&self) -> &FieldElem {
        &self.v
    }

    /// `r = ceil(n/k)`.
    pub fn segment_count(&self) -> u64 {
        self.segments
    }

    pub fn bits_seen(&self) -> u64 {
        self.bits_seen
    }

    pub fn profile(&self) -> &ResourceProfile {
        &self.profile
    }

    fn current_segment_len(&self) -> usize {
        let k = self.ctx.k() as u64;
        if self.folded + 1 < self.segments {
            k as usize
        } else {
            (self.n - (self.segments - 1) * k) as usize
        }
    }

    fn state_bits(&self) -> u64 {
        let k = self.ctx.k() as u64;
        let counter = (64 - self.n.leading_zeros()) as u64;
        // a, v, modulus, partial segment, and the n / bits_seen / r counters
        3 * k + 1 + self.buffered as u64 + 3 * counter
    }

    fn note_state(&mut self) {
        let bits = self.state_bits();
        if bits > self.profile.peak_state_bits {
            self.profile.peak_state_bits = bits;
        }
    }

    #[inline]
    fn push_bit(&mut self, bit: bool) {
        if bit {
            self.buffer[self.buffered / 64] |= 1 << (self.buffered % 64);
        }
        self.buffered += 1;
        self.bits_seen += 1;
        self.profile.bit_reads += 1;
        if self.buffered == self.current_segment_len() {
            self.fold();
        }
    }

    fn fold(&mut self) {
        self.note_state();
        let b = self.ctx.elem_from_packed(&self.buffer);
        self.profile.conversions += 1;
        let va = self.ctx.mul(&self.v, &self.a);
        self.v = self.ctx.add(&va, &b);
        self.profile.field_ops += 2;
        self.folded += 1;
        self.buffer.iter_mut().for_each(|w| *w = 0);
        self.buffered = 0;
    }

    fn reserve(&self, extra: u64) -> Result<(), StreamError> {
        let attempted = self.bits_seen.saturating_add(extra);
        if attempted > self.n {
            return Err(StreamError::Overfeed {
                n: self.n,
                attempted,
            });
        }
        Ok(())
    }

    /// Consumes more input; segments are folded as soon as they complete.
    /// Nothing is consumed if the bits would overrun the declared length.
    pub fn feed_bits(&mut self, bits: &[bool]) -> Result<(), StreamError> {
        self.reserve(bits.len() as u64)?;
        for &b in bits {
            self.push_bit(b);
        }
        Ok(())
    }

    /// Consumes whole bytes, most significant bit first.
    pub fn feed_bytes(&mut self, bytes: &[u8]) -> Result<(), StreamError> {
        self.reserve(8 * bytes.len() as u64)?;
        for &byte in bytes {
            let seg_len = self.current_segment_len();
            if self.buffered + 8 > seg_len {
                for i in (0..8).rev() {
                    self.push_bit((byte >> i) & 1 == 1);
                }
                continue;
            }
            // the first bit read lands on the lowest coefficient
            let rev = byte.reverse_bits() as u64;
            let (limb, off) = (self.buffered / 64, self.buffered % 64);
            self.buffer[limb] |= rev << off;
            if off > 56 {
                self.buffer[limb + 1] |= rev >> (64 - off);
            }
            self.buffered += 8;
            self.bits_seen += 8;
            self.profile.bit_reads += 8;
            if self.buffered == seg_len {
                self.fold();
            }
        }
        Ok(())
    }

    pub fn finish(self) -> Result<Fingerprint, StreamError> {
        self.finish_with_profile().map(|(fp, _)| fp)
    }

    pub fn finish_with_profile(self) -> Result<(Fingerprint, ResourceProfile), StreamError> {
        if self.bits_seen < self.n {
            return Err(StreamError::Premature {
                n: self.n,
                seen: self.bits_seen,
            });
        }
        debug_assert_eq!(self.folded, self.segments);
        let fp = Fingerprint {
            n: self.n,
            k: self.ctx.k(),
            modulus: self.ctx.modulus().clone(),
            a: self.a,
            v: self.v,
            seed: self.seed,
        };
        Ok((fp, self.profile))
    }
}

/// Bit source wrapper that counts how many bits were pulled.
#[derive(Debug)]
pub struct CountingSource<I> {
    inner: I,
    reads: u64,
}

impl<I: Iterator<Item = bool>> CountingSource<I> {
    pub fn new(inner: I) -> Self {
        Self { inner, reads: 0 }
    }

    pub fn reads(&self) -> u64 {
        self.reads
    }
}

impl<I: Iterator<Item = bool>> Iterator for CountingSource<I> {
    type Item = bool;
    fn next(&mut self) -> Option<bool> {
        let b = self.inner.next();
        if b.is_some() {
            self.reads += 1;
        }
        b
    }
}

/// Streams exactly `n` bits from `source`, never reading past the declared length.
pub fn fingerprint_source<I: Iterator<Item = bool>>(
    n: u64,
    source: &mut I,
    ctx: &FieldCtx,
    rng: &mut SeededRng,
) -> Result<(Fingerprint, ResourceProfile), StreamError> {
    let mut state = begin(n, ctx, rng)?;
    for _ in 0..n {
        match source.next() {
            Some(bit) => state.push_bit(bit),
            None => break,
        }
    }
    state.finish_with_profile()
}

/// Fingerprint of `x` over an explicit context.
pub fn fingerprint_with_ctx(
    ctx: &FieldCtx,
    x: &[bool],
    rng: &mut SeededRng,
) -> Result<Fingerprint, StreamError> {
    let mut state = begin(x.len() as u64, ctx, rng)?;
    state.feed_bits(x)?;
    state.finish()
}

/// The full procedure: size the field from `n` and `f(n)`, build it, and
/// stream `x` once with a point drawn from `seed`.
pub fn fingerprint(n: u64, x: &[bool], f_of_n: u64, seed: u64) -> Result<Fingerprint, StreamError> {
    if x.len() as u64 != n {
        return Err(StreamError::LengthMismatch {
            expected: n,
            got: x.len() as u64,
        });
    }
    let k = select_field_size(n, f_of_n)?;
    let ctx = make_field(k)?;
    fingerprint_with_ctx(&ctx, x, &mut SeededRng::new(seed))
}

/// Field coefficients `w(s_{r-1}), ..., w(s_0)` of `d_x`, in reading order.
pub fn segment_coefficients(ctx: &FieldCtx, x: &[bool]) -> Result<Vec<FieldElem>, StreamError> {
    if x.is_empty() {
        return Err(StreamError::EmptyInput);
    }
    let k = ctx.k();
    let r = x.len().div_ceil(k);
    (0..r)
        .map(|j| {
            let end = ((j + 1) * k).min(x.len());
            Ok(ctx.elem_from_segment(&x[j * k..end])?)
        })
        .collect()
}

/// Horner evaluation of the monic polynomial with the given coefficients
/// (highest degree first) at `a`.
pub fn eval_monic(ctx: &FieldCtx, coeffs: &[FieldElem], a: &FieldElem) -> FieldElem {
    coeffs
        .iter()
        .fold(ctx.one(), |v, b| ctx.add(&ctx.mul(&v, a), b))
}

/// `d_x(a)` computed term by term from the materialized coefficients,
/// independent of the streaming path.
pub fn direct_eval(ctx: &FieldCtx, x: &[bool], a: &FieldElem) -> Result<FieldElem, StreamError> {
    let coeffs = segment_coefficients(ctx, x)?;
    let r = coeffs.len();
    let mut total = ctx.pow(a, &BigUint::from(r));
    for (j, c) in coeffs.iter().enumerate() {
        let i = r - 1 - j;
        let term = ctx.mul(c, &ctx.pow(a, &BigUint::from(i)));
        total = ctx.add(&total, &term);
    }
    Ok(total)
}

/// `|{a in F : d_x(a) = d_y(a)}|`, by exhausting the field.
pub fn count_agreements(ctx: &FieldCtx, x: &[bool], y: &[bool]) -> Result<u64, StreamError> {
    if x.len() != y.len() {
        return Err(StreamError::LengthMismatch {
            expected: x.len() as u64,
            got: y.len() as u64,
        });
    }
    let cx = segment_coefficients(ctx, x)?;
    let cy = segment_coefficients(ctx, y)?;
    Ok(ctx
        .enumerate()?
        .filter(|a| eval_monic(ctx, &cx, a) == eval_monic(ctx, &cy, a))
        .count() as u64)
}
