//! GF(2^k) contexts and element arithmetic.
//!
//! A [`FieldCtx`] pairs an extension degree `k` with the modulus chosen by
//! [`find_irreducible`]. Elements are polynomials of degree below `k`.
//! Fields with `k <= 64` multiply through the single-word tier
//! ([`WordModulus`]); wider fields reduce limb-wise. [`FieldCtx::mul_wide`]
//! always takes the limb route so the two can be compared.

use std::fmt;

use num_bigint::BigUint;
use rand::RngCore;
use thiserror::Error;

use crate::gf2poly::{find_irreducible, Gf2Poly, PolyError, WordModulus};

/// Largest `k` for which [`FieldCtx::enumerate`] will list the field.
pub const MAX_ENUMERABLE_DEGREE: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("stream length and density bound must both be at least 1 (got n={n}, f(n)={f})")]
    InvalidSizingInput { n: u64, f: u64 },
    #[error("16·f(n)·n overflows for n={n}, f(n)={f}")]
    SizingOverflow { n: u64, f: u64 },
    #[error("segment of {len} bits does not fit a GF(2^{k}) element (need 1..={k})")]
    SegmentLength { len: usize, k: usize },
    #[error("value {value} is not an element of GF(2^{k})")]
    NotAnElement { value: String, k: usize },
    #[error("GF(2^{k}) is too large to enumerate (limit k <= {max})")]
    NotEnumerable { k: usize, max: usize },
}

/// The unique `k` with `8·f·n < 2^k <= 16·f·n`.
pub fn select_field_size(n: u64, f_of_n: u64) -> Result<usize, FieldError> {
    if n == 0 || f_of_n == 0 {
        return Err(FieldError::InvalidSizingInput { n, f: f_of_n });
    }
    let overflow = FieldError::SizingOverflow { n, f: f_of_n };
    let lower = (n as u128)
        .checked_mul(f_of_n as u128)
        .and_then(|x| x.checked_mul(8))
        .ok_or(overflow.clone())?;
    lower.checked_mul(2).ok_or(overflow)?;
    // bit length of the lower end is floor(log2) + 1
    Ok((128 - lower.leading_zeros()) as usize)
}

/// `make_field(k)`: the context for GF(2^k) with modulus [`find_irreducible`]`(k)`.
pub fn make_field(k: usize) -> Result<FieldCtx, FieldError> {
    FieldCtx::new(k)
}

/// GF(2^k) represented as GF(2)[u] / (modulus).
#[derive(Clone, PartialEq, Eq)]
pub struct FieldCtx {
    k: usize,
    modulus: Gf2Poly,
    word: Option<WordModulus>,
}

/// An element of some GF(2^k); only meaningful together with its context.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem {
    k: usize,
    value: Gf2Poly,
}

impl FieldElem {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Coefficient polynomial, degree below `k`.
    pub fn value(&self) -> &Gf2Poly {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.value.to_u64()
    }

    /// Hex of the `k`-bit pattern, zero-padded to `ceil(k/4)` digits.
    pub fn to_hex(&self) -> String {
        let raw = self.value.to_hex();
        let width = self.k.div_ceil(4);
        format!("{raw:0>width$}")
    }

    /// The pattern `b_{k-1} ... b_0`, highest coefficient first.
    pub fn display_bits(&self) -> crate::BitString {
        (0..self.k).rev().map(|i| self.value.coeff(i)).collect::<Vec<_>>().into()
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElem(0x{} in GF(2^{}))", self.to_hex(), self.k)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{}", self.to_hex())
    }
}

impl FieldCtx {
    pub fn new(k: usize) -> Result<Self, FieldError> {
        let modulus = find_irreducible(k)?;
        let word = WordModulus::new(&modulus);
        Ok(Self { k, modulus, word })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn modulus(&self) -> &Gf2Poly {
        &self.modulus
    }

    /// `q = 2^k`.
    pub fn order(&self) -> BigUint {
        BigUint::from(1u32) << self.k
    }

    /// `q` as a machine integer when `k < 64`.
    pub fn order_u64(&self) -> Option<u64> {
        (self.k < 64).then(|| 1u64 << self.k)
    }

    #[inline]
    fn check(&self, a: &FieldElem) {
        debug_assert_eq!(a.k, self.k, "field element from a different context");
    }

    fn wrap(&self, value: Gf2Poly) -> FieldElem {
        FieldElem { k: self.k, value }
    }

    pub fn zero(&self) -> FieldElem {
        self.wrap(Gf2Poly::zero())
    }

    pub fn one(&self) -> FieldElem {
        self.wrap(Gf2Poly::one())
    }

    /// Element with the given coefficient polynomial; it must have degree below `k`.
    pub fn elem(&self, value: Gf2Poly) -> Result<FieldElem, FieldError> {
        match value.degree() {
            Some(d) if d >= self.k => Err(FieldError::NotAnElement {
                value: value.to_hex(),
                k: self.k,
            }),
            _ => Ok(self.wrap(value)),
        }
    }

    pub fn elem_from_u64(&self, bits: u64) -> Result<FieldElem, FieldError> {
        self.elem(Gf2Poly::from_u64(bits))
    }

    /// Parses the fixed-width hex form written by [`FieldElem::to_hex`].
    pub fn elem_from_hex(&self, text: &str) -> Result<FieldElem, FieldError> {
        self.elem(Gf2Poly::from_hex(text)?)
    }

    /// `w(s, u)`: the first-read bit of `s` becomes the coefficient of `u^0`.
    /// Segments shorter than `k` are zero-extended at the high end.
    pub fn elem_from_segment(&self, s: &[bool]) -> Result<FieldElem, FieldError> {
        if s.is_empty() || s.len() > self.k {
            return Err(FieldError::SegmentLength {
                len: s.len(),
                k: self.k,
            });
        }
        Ok(self.wrap(Gf2Poly::from_coeff_bits(s)))
    }

    /// Inverse of [`FieldCtx::elem_from_segment`] for full-length segments.
    pub fn segment_of(&self, a: &FieldElem) -> Vec<bool> {
        self.check(a);
        (0..self.k).map(|i| a.value.coeff(i)).collect()
    }

    /// Packed segment already laid out as coefficients; caller guarantees `< k` bits set.
    pub(crate) fn elem_from_packed(&self, limbs: &[u64]) -> FieldElem {
        self.wrap(Gf2Poly::from_limbs(limbs.iter().copied()))
    }

    #[inline]
    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.check(a);
        self.check(b);
        self.wrap(a.value.add(&b.value))
    }

    #[inline]
    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.check(a);
        self.check(b);
        match &self.word {
            Some(w) => self.wrap(Gf2Poly::from_u64(w.mul(a.value.low_u64(), b.value.low_u64()))),
            None => self.mul_wide(a, b),
        }
    }

    /// Product through the limb tier regardless of `k`.
    pub fn mul_wide(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.check(a);
        self.check(b);
        let prod = a.value.mul(&b.value);
        self.wrap(prod.rem(&self.modulus).expect("modulus is nonzero"))
    }

    pub fn square(&self, a: &FieldElem) -> FieldElem {
        self.mul(a, a)
    }

    /// `a^e` by square-and-multiply; `0^0 = 1`.
    pub fn pow(&self, a: &FieldElem, e: &BigUint) -> FieldElem {
        self.check(a);
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.square(&acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// Multiplicative inverse `a^(q-2)`, `None` for zero.
    pub fn inv(&self, a: &FieldElem) -> Option<FieldElem> {
        if a.is_zero() {
            return None;
        }
        Some(self.pow(a, &(self.order() - 2u32)))
    }

    /// `k` fresh bits from `rng`, uniform over all `q` elements including zero.
    pub fn random_elem<R: RngCore + ?Sized>(&self, rng: &mut R) -> FieldElem {
        let words = self.k.div_ceil(64);
        let mut limbs: Vec<u64> = (0..words).map(|_| rng.next_u64()).collect();
        let rem = self.k % 64;
        if rem != 0 {
            if let Some(top) = limbs.last_mut() {
                *top &= (1u64 << rem) - 1;
            }
        }
        self.wrap(Gf2Poly::from_limbs(limbs))
    }

    /// Every element once, in increasing bit-pattern order.
    pub fn enumerate(&self) -> Result<impl Iterator<Item = FieldElem> + '_, FieldError> {
        if self.k > MAX_ENUMERABLE_DEGREE {
            return Err(FieldError::NotEnumerable {
                k: self.k,
                max: MAX_ENUMERABLE_DEGREE,
            });
        }
        Ok((0..1u64 << self.k).map(move |v| self.wrap(Gf2Poly::from_u64(v))))
    }
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldCtx(k={}, t=0x{})", self.k, self.modulus.to_hex())
    }
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, 0x{})", self.k, self.modulus.to_hex())
    }
}
