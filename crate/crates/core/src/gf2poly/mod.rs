//! Polynomials over GF(2).
//!
//! A [`Gf2Poly`] stores its coefficients packed into 64-bit limbs, bit `i`
//! of the packed value being the coefficient of `u^i`. The representation is
//! kept normalized (no zero high limbs), so equality and degree are cheap.
//!
//! Arithmetic comes in two tiers. Polynomials and moduli that fit a machine
//! word go through [`WordModulus`] and the carry-less word product in
//! [`clmul`]; everything else uses limb-wise long arithmetic. The tiers are
//! interchangeable and are cross-checked in tests.

pub mod clmul;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul};

use num_bigint::BigUint;
use smallvec::SmallVec;
use thiserror::Error;

pub use clmul::{clmul64, clmul64_portable, hardware_clmul_available};

/// Largest degree accepted by [`find_irreducible`].
pub const MAX_IRREDUCIBLE_DEGREE: usize = 1024;

/// Largest degree accepted by the trial-division oracle [`factor_smallest`].
pub const MAX_TRIAL_DIVISION_DEGREE: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("gcd(0, 0) is undefined")]
    GcdOfZeros,
    #[error("modulus must have degree at least 1")]
    ConstantModulus,
    #[error("polynomial must have degree at least 1")]
    ConstantPolynomial,
    #[error("degree {degree} is outside the supported range 1..={max}")]
    DegreeOutOfRange { degree: usize, max: usize },
    #[error("invalid hexadecimal polynomial {0:?}")]
    InvalidHex(String),
}

type Limbs = SmallVec<[u64; 2]>;

/// A polynomial over GF(2).
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Gf2Poly {
    limbs: Limbs,
}

/// Result of [`factor_smallest`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SmallestFactor {
    Factor(Gf2Poly),
    Irreducible,
}

impl Gf2Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_u64(1)
    }

    /// `u^i`.
    pub fn monomial(i: usize) -> Self {
        let mut p = Self::zero();
        p.set_coeff(i, true);
        p
    }

    pub fn from_u64(bits: u64) -> Self {
        let mut limbs = Limbs::new();
        if bits != 0 {
            limbs.push(bits);
        }
        Self { limbs }
    }

    pub fn from_u128(bits: u128) -> Self {
        Self::from_limbs([bits as u64, (bits >> 64) as u64])
    }

    /// Builds a polynomial from little-endian limbs (limb 0 holds `u^0..u^63`).
    pub fn from_limbs<I: IntoIterator<Item = u64>>(limbs: I) -> Self {
        let mut p = Self {
            limbs: limbs.into_iter().collect(),
        };
        p.normalize();
        p
    }

    /// Coefficient `i` is `bits[i]`.
    pub fn from_coeff_bits(bits: &[bool]) -> Self {
        let mut limbs: Limbs = smallvec::smallvec![0; bits.len().div_ceil(64)];
        for (i, &b) in bits.iter().enumerate() {
            if b {
                limbs[i / 64] |= 1 << (i % 64);
            }
        }
        Self::from_limbs(limbs)
    }

    pub fn limbs(&self) -> &[u64] {
        &self.limbs
    }

    /// The low 64 coefficients.
    pub fn low_u64(&self) -> u64 {
        self.limbs.first().copied().unwrap_or(0)
    }

    /// The packed value, if it fits in a word.
    pub fn to_u64(&self) -> Option<u64> {
        match self.limbs.len() {
            0 => Some(0),
            1 => Some(self.limbs[0]),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.limbs.len() == 1 && self.limbs[0] == 1
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let top = *self.limbs.last()?;
        Some((self.limbs.len() - 1) * 64 + 63 - top.leading_zeros() as usize)
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.limbs
            .get(i / 64)
            .is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    pub fn set_coeff(&mut self, i: usize, value: bool) {
        let w = i / 64;
        if value {
            if self.limbs.len() <= w {
                self.limbs.resize(w + 1, 0);
            }
            self.limbs[w] |= 1 << (i % 64);
        } else if w < self.limbs.len() {
            self.limbs[w] &= !(1 << (i % 64));
            self.normalize();
        }
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> u32 {
        self.limbs.iter().map(|w| w.count_ones()).sum()
    }

    fn normalize(&mut self) {
        while self.limbs.last() == Some(&0) {
            self.limbs.pop();
        }
    }

    /// `self ^= other · u^shift`.
    fn xor_shifted(&mut self, other: &Gf2Poly, shift: usize) {
        if other.is_zero() {
            return;
        }
        let ws = shift / 64;
        let bs = shift % 64;
        let need = other.limbs.len() + ws + 1;
        if self.limbs.len() < need {
            self.limbs.resize(need, 0);
        }
        for (i, &w) in other.limbs.iter().enumerate() {
            self.limbs[i + ws] ^= w << bs;
            if bs != 0 {
                self.limbs[i + ws + 1] ^= w >> (64 - bs);
            }
        }
        self.normalize();
    }

    /// Multiplication by `u^shift`.
    pub fn shifted(&self, shift: usize) -> Gf2Poly {
        let mut out = Gf2Poly::zero();
        out.xor_shifted(self, shift);
        out
    }

    pub fn add(&self, other: &Gf2Poly) -> Gf2Poly {
        let (long, short) = if self.limbs.len() >= other.limbs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = long.clone();
        for (o, s) in out.limbs.iter_mut().zip(short.limbs.iter()) {
            *o ^= s;
        }
        out.normalize();
        out
    }

    /// Exact product in GF(2)[u].
    pub fn mul(&self, other: &Gf2Poly) -> Gf2Poly {
        if self.is_zero() || other.is_zero() {
            return Gf2Poly::zero();
        }
        if self.limbs.len() == 1 && other.limbs.len() == 1 {
            return Gf2Poly::from_u128(clmul64(self.limbs[0], other.limbs[0]));
        }
        let mut out: Limbs = smallvec::smallvec![0; self.limbs.len() + other.limbs.len()];
        for (i, &a) in self.limbs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.limbs.iter().enumerate() {
                let prod = clmul64(a, b);
                out[i + j] ^= prod as u64;
                out[i + j + 1] ^= (prod >> 64) as u64;
            }
        }
        Gf2Poly::from_limbs(out)
    }

    /// Reference product: one shifted XOR per set bit. Slow; kept as the
    /// independent route for differential testing of [`Gf2Poly::mul`].
    pub fn mul_schoolbook(&self, other: &Gf2Poly) -> Gf2Poly {
        let mut out = Gf2Poly::zero();
        if let Some(d) = other.degree() {
            for i in 0..=d {
                if other.coeff(i) {
                    out.xor_shifted(self, i);
                }
            }
        }
        out
    }

    pub fn square(&self) -> Gf2Poly {
        let mut out: Limbs = smallvec::smallvec![0; 2 * self.limbs.len()];
        for (i, &w) in self.limbs.iter().enumerate() {
            let sq = clmul64(w, w);
            out[2 * i] = sq as u64;
            out[2 * i + 1] = (sq >> 64) as u64;
        }
        Gf2Poly::from_limbs(out)
    }

    /// Long division: `self = quotient·m + remainder`, `deg(remainder) < deg(m)`.
    pub fn divmod(&self, m: &Gf2Poly) -> Result<(Gf2Poly, Gf2Poly), PolyError> {
        let dm = m.degree().ok_or(PolyError::DivisionByZero)?;
        let mut rem = self.clone();
        let mut quot = Gf2Poly::zero();
        while let Some(dr) = rem.degree() {
            if dr < dm {
                break;
            }
            let shift = dr - dm;
            quot.set_coeff(shift, true);
            rem.xor_shifted(m, shift);
        }
        Ok((quot, rem))
    }

    pub fn rem(&self, m: &Gf2Poly) -> Result<Gf2Poly, PolyError> {
        let dm = m.degree().ok_or(PolyError::DivisionByZero)?;
        let mut rem = self.clone();
        while let Some(dr) = rem.degree() {
            if dr < dm {
                break;
            }
            rem.xor_shifted(m, dr - dm);
        }
        Ok(rem)
    }

    /// Greatest common divisor; `gcd(p, 0) = p`.
    pub fn gcd(&self, other: &Gf2Poly) -> Result<Gf2Poly, PolyError> {
        if self.is_zero() && other.is_zero() {
            return Err(PolyError::GcdOfZeros);
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a)
    }

    /// `self^e mod m` by left-to-right square-and-multiply over the bits of `e`.
    pub fn powmod(&self, e: &BigUint, m: &Gf2Poly) -> Result<Gf2Poly, PolyError> {
        let red = Reducer::new(m)?;
        let base = red.reduce(self);
        let mut acc = red.reduce(&Gf2Poly::one());
        for i in (0..e.bits()).rev() {
            acc = red.sqrmod(&acc);
            if e.bit(i) {
                acc = red.mulmod(&acc, &base);
            }
        }
        Ok(acc)
    }

    /// `self^(2^j) mod m` by `j` squarings; the exponent is never materialized.
    pub fn pow_2exp_mod(&self, j: u64, m: &Gf2Poly) -> Result<Gf2Poly, PolyError> {
        let red = Reducer::new(m)?;
        let mut acc = red.reduce(self);
        for _ in 0..j {
            acc = red.sqrmod(&acc);
        }
        Ok(acc)
    }

    /// Lowercase hex of the packed coefficients, most significant digit first.
    pub fn to_hex(&self) -> String {
        let mut s = String::new();
        let mut iter = self.limbs.iter().rev();
        match iter.next() {
            None => return "0".to_owned(),
            Some(top) => s.push_str(&format!("{top:x}")),
        }
        for w in iter {
            s.push_str(&format!("{w:016x}"));
        }
        s
    }

    /// Parses the form written by [`Gf2Poly::to_hex`]; an optional `0x` prefix is accepted.
    pub fn from_hex(text: &str) -> Result<Gf2Poly, PolyError> {
        let bad = || PolyError::InvalidHex(text.to_owned());
        let digits = text
            .strip_prefix("0x")
            .or_else(|| text.strip_prefix("0X"))
            .unwrap_or(text);
        if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_hexdigit()) {
            return Err(bad());
        }
        let bytes = digits.as_bytes();
        let mut limbs = Vec::with_capacity(bytes.len().div_ceil(16));
        let mut end = bytes.len();
        while end > 0 {
            let start = end.saturating_sub(16);
            let chunk = std::str::from_utf8(&bytes[start..end]).map_err(|_| bad())?;
            limbs.push(u64::from_str_radix(chunk, 16).map_err(|_| bad())?);
            end = start;
        }
        Ok(Gf2Poly::from_limbs(limbs))
    }
}

impl Ord for Gf2Poly {
    /// Orders by the integer value of the coefficient bit string.
    fn cmp(&self, other: &Self) -> Ordering {
        self.limbs
            .len()
            .cmp(&other.limbs.len())
            .then_with(|| self.limbs.iter().rev().cmp(other.limbs.iter().rev()))
    }
}

impl PartialOrd for Gf2Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Gf2Poly {
    type Output = Gf2Poly;
    fn add(self, rhs: &Gf2Poly) -> Gf2Poly {
        Gf2Poly::add(self, rhs)
    }
}

impl AddAssign<&Gf2Poly> for Gf2Poly {
    fn add_assign(&mut self, rhs: &Gf2Poly) {
        if self.limbs.len() < rhs.limbs.len() {
            self.limbs.resize(rhs.limbs.len(), 0);
        }
        for (o, r) in self.limbs.iter_mut().zip(rhs.limbs.iter()) {
            *o ^= r;
        }
        self.normalize();
    }
}

impl Mul for &Gf2Poly {
    type Output = Gf2Poly;
    fn mul(self, rhs: &Gf2Poly) -> Gf2Poly {
        Gf2Poly::mul(self, rhs)
    }
}

impl fmt::Display for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(d) = self.degree() else {
            return f.write_str("0");
        };
        let mut first = true;
        for i in (0..=d).rev().filter(|&i| self.coeff(i)) {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => f.write_str("1")?,
                1 => f.write_str("u")?,
                _ => write!(f, "u^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Poly(0x{} = {})", self.to_hex(), self)
    }
}

impl fmt::LowerHex for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if f.alternate() {
            f.write_str("0x")?;
        }
        f.write_str(&self.to_hex())
    }
}

/// A modulus `u^degree + tail` with `1 <= degree <= 64`, reduced entirely in
/// machine words.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WordModulus {
    degree: u32,
    tail: u64,
}

impl WordModulus {
    /// `None` when `m` is constant or has degree above 64.
    pub fn new(m: &Gf2Poly) -> Option<Self> {
        let degree = m.degree()?;
        if degree == 0 || degree > 64 {
            return None;
        }
        let mut tail = m.clone();
        tail.set_coeff(degree, false);
        Some(Self {
            degree: degree as u32,
            tail: tail.low_u64(),
        })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Reduces an arbitrary 128-bit packed polynomial.
    #[inline]
    pub fn reduce(&self, mut x: u128) -> u64 {
        let k = self.degree;
        let mask = (1u128 << k) - 1;
        let full = (1u128 << k) | self.tail as u128;
        loop {
            let hi = x >> k;
            if hi == 0 {
                return x as u64;
            }
            if hi >> 64 != 0 {
                // only reachable for inputs of degree >= k + 64
                let top = 127 - x.leading_zeros();
                x ^= full << (top - k);
                continue;
            }
            x = (x & mask) ^ clmul64(hi as u64, self.tail);
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(clmul64(a, b))
    }

    #[inline]
    pub fn square(&self, a: u64) -> u64 {
        self.reduce(clmul64(a, a))
    }
}

/// Modular arithmetic helper picking the word or the limb tier.
enum Reducer<'a> {
    Word(WordModulus),
    Wide(&'a Gf2Poly),
}

impl<'a> Reducer<'a> {
    fn new(m: &'a Gf2Poly) -> Result<Self, PolyError> {
        match m.degree() {
            None => Err(PolyError::DivisionByZero),
            Some(0) => Err(PolyError::ConstantModulus),
            Some(_) => Ok(WordModulus::new(m).map_or(Reducer::Wide(m), Reducer::Word)),
        }
    }

    fn reduce(&self, p: &Gf2Poly) -> Gf2Poly {
        match self {
            Reducer::Word(w) if p.limbs.len() <= 2 => {
                let x = p.low_u64() as u128 | (p.limbs.get(1).copied().unwrap_or(0) as u128) << 64;
                Gf2Poly::from_u64(w.reduce(x))
            }
            Reducer::Word(w) => {
                let full = Gf2Poly::monomial(w.degree as usize).add(&Gf2Poly::from_u64(w.tail));
                p.rem(&full).expect("nonzero modulus")
            }
            Reducer::Wide(m) => p.rem(m).expect("nonzero modulus"),
        }
    }

    fn mulmod(&self, a: &Gf2Poly, b: &Gf2Poly) -> Gf2Poly {
        match self {
            Reducer::Word(w) => Gf2Poly::from_u64(w.mul(a.low_u64(), b.low_u64())),
            Reducer::Wide(m) => a.mul(b).rem(m).expect("nonzero modulus"),
        }
    }

    fn sqrmod(&self, a: &Gf2Poly) -> Gf2Poly {
        match self {
            Reducer::Word(w) => Gf2Poly::from_u64(w.square(a.low_u64())),
            Reducer::Wide(m) => a.square().rem(m).expect("nonzero modulus"),
        }
    }
}

fn prime_divisors(mut k: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= k {
        if k % d == 0 {
            out.push(d);
            while k % d == 0 {
                k /= d;
            }
        }
        d += 1;
    }
    if k > 1 {
        out.push(k);
    }
    out
}

/// Rabin's irreducibility test.
///
/// `p` of degree `k` is irreducible iff `u^(2^k) = u (mod p)` and
/// `gcd(u^(2^(k/d)) - u, p) = 1` for every prime `d | k`.
pub fn is_irreducible(p: &Gf2Poly) -> Result<bool, PolyError> {
    let k = match p.degree() {
        None | Some(0) => return Err(PolyError::ConstantPolynomial),
        Some(k) => k,
    };
    if k == 1 {
        return Ok(true);
    }
    let red = Reducer::new(p)?;
    let x = red.reduce(&Gf2Poly::monomial(1));
    let mut checkpoints: Vec<usize> = prime_divisors(k).into_iter().map(|d| k / d).collect();
    checkpoints.sort_unstable();

    let mut s = x.clone();
    let mut next = checkpoints.iter().peekable();
    for i in 1..=k {
        s = red.sqrmod(&s);
        while next.peek() == Some(&&i) {
            next.next();
            if !s.add(&x).gcd(p)?.is_one() {
                return Ok(false);
            }
        }
    }
    Ok(s == x)
}

/// The first irreducible polynomial of degree `k`, candidates taken in
/// increasing order of their coefficient bit string read as an integer.
///
/// Degree 1 yields `u`. For `k >= 2` candidates with a zero constant term
/// (divisible by `u`) or an even number of terms (divisible by `u + 1`) are
/// skipped before running [`is_irreducible`].
pub fn find_irreducible(k: usize) -> Result<Gf2Poly, PolyError> {
    if k == 0 || k > MAX_IRREDUCIBLE_DEGREE {
        return Err(PolyError::DegreeOutOfRange {
            degree: k,
            max: MAX_IRREDUCIBLE_DEGREE,
        });
    }
    if k == 1 {
        return Ok(Gf2Poly::monomial(1));
    }
    let lead = Gf2Poly::monomial(k);
    let tail_limit = if k < 64 { 1u64 << k } else { u64::MAX };
    let mut tail = 1u64;
    while tail < tail_limit {
        // lead has weight 1, so total weight is odd iff the tail's is even
        if tail.count_ones() % 2 == 0 {
            let candidate = lead.add(&Gf2Poly::from_u64(tail));
            if is_irreducible(&candidate)? {
                return Ok(candidate);
            }
        }
        tail += 2;
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

/// Lowest-degree nontrivial divisor by trial division over all polynomials of
/// degree `1..=deg(p)/2`, in increasing integer order.
pub fn factor_smallest(p: &Gf2Poly) -> Result<SmallestFactor, PolyError> {
    let d = match p.degree() {
        None | Some(0) => return Err(PolyError::ConstantPolynomial),
        Some(d) if d > MAX_TRIAL_DIVISION_DEGREE => {
            return Err(PolyError::DegreeOutOfRange {
                degree: d,
                max: MAX_TRIAL_DIVISION_DEGREE,
            })
        }
        Some(d) => d,
    };
    let limit = 1u64 << (d / 2 + 1);
    for c in 2..limit {
        let divisor = Gf2Poly::from_u64(c);
        if p.rem(&divisor)?.is_zero() {
            return Ok(SmallestFactor::Factor(divisor));
        }
    }
    Ok(SmallestFactor::Irreducible)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(bits: u64) -> Gf2Poly {
        Gf2Poly::from_u64(bits)
    }

    #[test]
    fn add_examples() {
        assert!(p(0b11).add(&p(0b11)).is_zero());
        assert_eq!(p(0b101).add(&p(0b10)), p(0b111));
        assert_eq!(p(0b1101).add(&Gf2Poly::zero()), p(0b1101));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(p(0b11).mul(&p(0b11)), p(0b101));
        assert_eq!(p(0b11).mul(&p(0b111)), p(0b1001));
        assert!(p(0b1011).mul(&Gf2Poly::zero()).is_zero());
    }

    #[test]
    fn divmod_examples() {
        let (q, r) = p(0b1011).divmod(&p(0b111)).unwrap();
        assert_eq!((q, r), (p(0b11), p(0b10)));
        let (q, r) = p(0b100).divmod(&p(0b111)).unwrap();
        assert_eq!((q, r), (p(1), p(0b11)));
        let (q, r) = p(0b110101).divmod(&p(0b110101)).unwrap();
        assert_eq!((q, r), (p(1), Gf2Poly::zero()));
        assert_eq!(p(5).divmod(&Gf2Poly::zero()), Err(PolyError::DivisionByZero));
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(p(0b101).gcd(&p(0b11)).unwrap(), p(0b11));
        assert_eq!(p(0b111).gcd(&p(0b10)).unwrap(), p(1));
        assert_eq!(p(0b1101).gcd(&p(0b1101)).unwrap(), p(0b1101));
        assert_eq!(p(0b1101).gcd(&Gf2Poly::zero()).unwrap(), p(0b1101));
        assert_eq!(Gf2Poly::zero().gcd(&Gf2Poly::zero()), Err(PolyError::GcdOfZeros));
    }

    #[test]
    fn powmod_examples() {
        let t = p(0b111);
        let u = p(0b10);
        assert_eq!(u.powmod(&BigUint::from(2u32), &t).unwrap(), p(0b11));
        assert_eq!(u.powmod(&BigUint::from(4u32), &t).unwrap(), p(0b10));
        assert_eq!(p(0b1011).powmod(&BigUint::from(0u32), &t).unwrap(), p(1));
        assert_eq!(u.powmod(&BigUint::from(3u32), &Gf2Poly::zero()), Err(PolyError::DivisionByZero));
        assert_eq!(u.powmod(&BigUint::from(3u32), &p(1)), Err(PolyError::ConstantModulus));
    }

    #[test]
    fn powmod_matches_repeated_squaring() {
        let m = find_irreducible(100).unwrap();
        let base = Gf2Poly::from_limbs([0x1234_5678_9abc_def0, 0x42]);
        let by_pow = base.powmod(&(BigUint::from(1u32) << 37u32), &m).unwrap();
        assert_eq!(by_pow, base.pow_2exp_mod(37, &m).unwrap());
    }

    #[test]
    fn irreducibility_examples() {
        assert!(is_irreducible(&p(0b111)).unwrap());
        assert!(!is_irreducible(&p(0b101)).unwrap());
        assert!(is_irreducible(&p(0b10)).unwrap());
        assert!(is_irreducible(&p(0b11)).unwrap());
        assert_eq!(is_irreducible(&p(1)), Err(PolyError::ConstantPolynomial));
        assert_eq!(is_irreducible(&Gf2Poly::zero()), Err(PolyError::ConstantPolynomial));
    }

    #[test]
    fn find_irreducible_examples() {
        assert_eq!(find_irreducible(1).unwrap(), p(0b10));
        assert_eq!(find_irreducible(2).unwrap(), p(0b111));
        assert_eq!(find_irreducible(3).unwrap(), p(0b1011));
        assert_eq!(find_irreducible(4).unwrap(), p(0b10011));
        assert_eq!(find_irreducible(5).unwrap(), p(0b100101));
        assert!(find_irreducible(0).is_err());
        assert!(find_irreducible(MAX_IRREDUCIBLE_DEGREE + 1).is_err());
    }

    #[test]
    fn find_irreducible_wide_degrees() {
        for k in [63, 64, 65, 127, 128, 200] {
            let t = find_irreducible(k).unwrap();
            assert_eq!(t.degree(), Some(k));
            assert!(is_irreducible(&t).unwrap());
        }
    }

    #[test]
    fn factor_smallest_examples() {
        assert_eq!(factor_smallest(&p(0b101)).unwrap(), SmallestFactor::Factor(p(0b11)));
        assert_eq!(factor_smallest(&p(0b10011)).unwrap(), SmallestFactor::Irreducible);
        assert_eq!(factor_smallest(&p(0b100)).unwrap(), SmallestFactor::Factor(p(0b10)));
        assert_eq!(factor_smallest(&p(1)), Err(PolyError::ConstantPolynomial));
    }

    #[test]
    fn degree_and_zero() {
        assert_eq!(Gf2Poly::zero().degree(), None);
        assert_eq!(Gf2Poly::one().degree(), Some(0));
        assert_ne!(Gf2Poly::zero(), Gf2Poly::one());
        let mut q = Gf2Poly::monomial(130);
        assert_eq!(q.degree(), Some(130));
        q.set_coeff(130, false);
        assert!(q.is_zero());
        assert!(q.limbs().is_empty());
    }

    #[test]
    fn hex_form() {
        assert_eq!(p(0b10011).to_hex(), "13");
        assert_eq!(format!("{:#x}", p(0b10011)), "0x13");
        assert_eq!(Gf2Poly::zero().to_hex(), "0");
        assert_eq!(Gf2Poly::from_hex("0x13").unwrap(), p(0x13));
        let wide = Gf2Poly::monomial(64).add(&p(0x1b));
        assert_eq!(wide.to_hex(), "1000000000000001b");
        assert_eq!(Gf2Poly::from_hex(&wide.to_hex()).unwrap(), wide);
        assert!(Gf2Poly::from_hex("").is_err());
        assert!(Gf2Poly::from_hex("0xzz").is_err());
    }

    #[test]
    fn display_form() {
        assert_eq!(p(0b10011).to_string(), "u^4 + u + 1");
        assert_eq!(Gf2Poly::zero().to_string(), "0");
    }

    #[test]
    fn word_modulus_reduces_high_inputs() {
        let m = p(0b10011);
        let w = WordModulus::new(&m).unwrap();
        let x = (1u128 << 127) | 0xdead;
        let want = Gf2Poly::from_u128(x).rem(&m).unwrap();
        assert_eq!(Gf2Poly::from_u64(w.reduce(x)), want);
    }
}
