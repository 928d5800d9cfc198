//! Tally sets over big-integer lengths.
//!
//! A tally set is a set of strings over a one-letter alphabet, kept here as
//! the sorted set of their lengths. Density and gap functions are described
//! by [`FnDesc`] and evaluated exactly with [`BigUint`]; every evaluation is
//! bounded by a bit-size cap, and exceeding it is an error rather than an
//! approximation.
//!
//! [`construct_f`] implements the step-free variant of the spacing function:
//! `f(1) = n_1` and `f(j) = max(n_j, g(f(j - 1)) + 1)`, where `n_1 < n_2 < ...`
//! are the least lengths at which `d` takes strictly increasing positive
//! values. It is not claimed to be time constructible.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Default cap on the bit size of any intermediate value.
pub const DEFAULT_CAP_BITS: u64 = 10_000_000;

/// Lengths beyond this are not probed when searching for density steps.
pub const DEFAULT_PROBE_LIMIT: u64 = 1 << 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TallyError {
    #[error("out of evaluable range: needs {needed_bits} bits, cap is {cap} bits")]
    OutOfRange { needed_bits: String, cap: u64 },
    #[error("iterated log of {value} underflows below 2 at depth {depth}")]
    Domain { value: BigUint, depth: u32 },
    #[error("argument {n} is outside the table of {len} values")]
    OutsideTable { n: BigUint, len: usize },
    #[error("invalid function descriptor: {0}")]
    InvalidDesc(String),
    #[error("invalid tally set: {0}")]
    InvalidSet(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("density function does not exceed {target} below length {limit}")]
    DensityBounded { target: BigUint, limit: u64 },
}

fn out_of_range(needed_bits: impl fmt::Display, cap: u64) -> TallyError {
    TallyError::OutOfRange {
        needed_bits: needed_bits.to_string(),
        cap,
    }
}

/// Finite set of positive lengths, ascending and duplicate-free.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct TallySet {
    lengths: Vec<BigUint>,
}

impl TallySet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Sorts and deduplicates; zero is rejected.
    pub fn new(mut lengths: Vec<BigUint>) -> Result<Self, TallyError> {
        if lengths.iter().any(Zero::is_zero) {
            return Err(TallyError::InvalidSet("lengths must be positive".into()));
        }
        lengths.sort();
        lengths.dedup();
        Ok(Self { lengths })
    }

    pub fn from_u64s(lengths: &[u64]) -> Result<Self, TallyError> {
        Self::new(lengths.iter().map(|&m| BigUint::from(m)).collect())
    }

    pub fn lengths(&self) -> &[BigUint] {
        &self.lengths
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    /// `|T^{<=n}|`.
    pub fn count_up_to(&self, n: &BigUint) -> usize {
        self.lengths.partition_point(|m| m <= n)
    }
}

impl Serialize for TallySet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.lengths.iter().map(|m| m.to_str_radix(10)))
    }
}

impl<'de> Deserialize<'de> for TallySet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        let lengths = raw
            .iter()
            .map(|s| parse_decimal(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        TallySet::new(lengths).map_err(serde::de::Error::custom)
    }
}

fn parse_decimal(s: &str) -> Result<BigUint, TallyError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(TallyError::InvalidDesc(format!("{s:?} is not a decimal integer")));
    }
    BigUint::from_str(s).map_err(|e| TallyError::InvalidDesc(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `exp^(k)(scale·n)`; params `[scale]`, default 1.
    IterExp,
    /// `log^(k)(n)`; below the domain it evaluates to 0.
    IterLog,
    /// `sum params[i]·n^i`.
    Polynomial,
    Identity,
    /// `params[n - 1]` for `n` in `1..=params.len()`.
    CustomTable,
}

impl FromStr for Family {
    type Err = TallyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "iter-exp" => Family::IterExp,
            "iter-log" => Family::IterLog,
            "polynomial" => Family::Polynomial,
            "identity" => Family::Identity,
            "custom-table" => Family::CustomTable,
            _ => return Err(TallyError::InvalidDesc(format!("unknown family {s:?}"))),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::IterExp => "iter-exp",
            Family::IterLog => "iter-log",
            Family::Polynomial => "polynomial",
            Family::Identity => "identity",
            Family::CustomTable => "custom-table",
        })
    }
}

/// A density or gap function `N -> N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FnDesc {
    pub family: Family,
    #[serde(default)]
    pub k: u32,
    #[serde(default)]
    pub params: Vec<String>,
}

impl FnDesc {
    pub fn new(family: Family, k: u32, params: &[u64]) -> Self {
        Self {
            family,
            k,
            params: params.iter().map(u64::to_string).collect(),
        }
    }

    pub fn identity() -> Self {
        Self::new(Family::Identity, 0, &[])
    }

    /// `n -> c·n`.
    pub fn linear(c: u64) -> Self {
        Self::new(Family::Polynomial, 0, &[0, c])
    }

    /// `n -> exp^(k)(scale·n)`.
    pub fn iter_exp(k: u32, scale: u64) -> Self {
        Self::new(Family::IterExp, k, &[scale])
    }

    fn parsed_params(&self) -> Result<Vec<BigUint>, TallyError> {
        self.params.iter().map(|p| parse_decimal(p)).collect()
    }

    /// Structural checks; custom tables must be nondecreasing.
    pub fn validate(&self) -> Result<(), TallyError> {
        let params = self.parsed_params()?;
        match self.family {
            Family::IterExp | Family::IterLog if self.k == 0 => {
                return Err(TallyError::InvalidDesc(format!("{} needs k >= 1", self.family)))
            }
            Family::IterExp if params.len() > 1 => {
                return Err(TallyError::InvalidDesc("iter-exp takes at most one param (scale)".into()))
            }
            Family::IterLog | Family::Identity if !params.is_empty() => {
                return Err(TallyError::InvalidDesc(format!("{} takes no params", self.family)))
            }
            Family::Polynomial | Family::CustomTable if params.is_empty() => {
                return Err(TallyError::InvalidDesc(format!("{} needs params", self.family)))
            }
            Family::CustomTable if params.windows(2).any(|w| w[0] > w[1]) => {
                return Err(TallyError::InvalidDesc("custom table must be nondecreasing".into()))
            }
            _ => {}
        }
        Ok(())
    }
}

impl fmt::Display for FnDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::IterExp => {
                let scale = self.params.first().map_or("1", String::as_str);
                write!(f, "exp^({})({}n)", self.k, scale)
            }
            Family::IterLog => write!(f, "log^({})(n)", self.k),
            Family::Identity => f.write_str("n"),
            Family::Polynomial => write!(f, "poly[{}]", self.params.join(",")),
            Family::CustomTable => write!(f, "table[{}]", self.params.join(",")),
        }
    }
}

/// Which condition a tally set broke first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    /// `|T^{<=length}| = count > d(length) = bound`.
    Density {
        length: String,
        count: usize,
        bound: String,
    },
    /// Consecutive members with `g(lower) = gap >= upper`.
    Gap {
        lower: String,
        upper: String,
        gap: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TallyVerdict {
    pub valid: bool,
    pub violation: Option<Violation>,
}

impl TallyVerdict {
    fn ok() -> Self {
        Self {
            valid: true,
            violation: None,
        }
    }

    fn fail(v: Violation) -> Self {
        Self {
            valid: false,
            violation: Some(v),
        }
    }
}

/// Exact evaluator with a bit-size cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Evaluator {
    pub cap_bits: u64,
    pub probe_limit: u64,
}

impl Default for Evaluator {
    fn default() -> Self {
        Self {
            cap_bits: DEFAULT_CAP_BITS,
            probe_limit: DEFAULT_PROBE_LIMIT,
        }
    }
}

impl Evaluator {
    pub fn with_cap(cap_bits: u64) -> Self {
        Self {
            cap_bits,
            ..Self::default()
        }
    }

    /// `2^e`, refused if it would exceed the cap.
    fn pow2(&self, e: &BigUint) -> Result<BigUint, TallyError> {
        match e.to_u64() {
            Some(e) if e < self.cap_bits => Ok(BigUint::one() << e),
            _ => Err(out_of_range(e + 1u32, self.cap_bits)),
        }
    }

    fn check(&self, v: BigUint) -> Result<BigUint, TallyError> {
        if v.bits() > self.cap_bits {
            return Err(out_of_range(v.bits(), self.cap_bits));
        }
        Ok(v)
    }

    pub fn iter_exp(&self, k: u32, n: &BigUint) -> Result<BigUint, TallyError> {
        if k == 0 {
            return Err(TallyError::InvalidDesc("iter_exp needs k >= 1".into()));
        }
        let mut x = n.clone();
        for _ in 0..k {
            x = self.pow2(&x)?;
        }
        Ok(x)
    }

    /// `floor(log2)` applied `k` times; each argument must be at least 2.
    pub fn iter_log(&self, k: u32, n: &BigUint) -> Result<BigUint, TallyError> {
        if k == 0 {
            return Err(TallyError::InvalidDesc("iter_log needs k >= 1".into()));
        }
        let mut x = n.clone();
        for depth in 0..k {
            if x < BigUint::from(2u32) {
                return Err(TallyError::Domain { value: n.clone(), depth });
            }
            x = BigUint::from(x.bits() - 1);
        }
        Ok(x)
    }

    pub fn eval(&self, desc: &FnDesc, n: &BigUint) -> Result<BigUint, TallyError> {
        desc.validate()?;
        let params = desc.parsed_params()?;
        match desc.family {
            Family::Identity => Ok(n.clone()),
            Family::IterExp => {
                let scale = params.first().cloned().unwrap_or_else(BigUint::one);
                let arg = self.check(scale * n)?;
                self.iter_exp(desc.k, &arg)
            }
            Family::IterLog => match self.iter_log(desc.k, n) {
                Err(TallyError::Domain { .. }) => Ok(BigUint::zero()),
                r => r,
            },
            Family::Polynomial => {
                let mut acc = BigUint::zero();
                for c in params.iter().rev() {
                    // Horner; every partial value is below the final one
                    acc = self.check(acc * n + c)?;
                }
                Ok(acc)
            }
            Family::CustomTable => n
                .to_usize()
                .filter(|&i| (1..=params.len()).contains(&i))
                .map(|i| params[i - 1].clone())
                .ok_or_else(|| TallyError::OutsideTable {
                    n: n.clone(),
                    len: params.len(),
                }),
        }
    }

    /// `n -> 2^n + n` on every member.
    pub fn pad(&self, t: &TallySet) -> Result<TallySet, TallyError> {
        let lengths = t
            .lengths
            .iter()
            .map(|m| Ok(self.pow2(m)? + m))
            .collect::<Result<Vec<_>, TallyError>>()?;
        Ok(TallySet { lengths })
    }

    /// Exact test of `g(2^n + n) < 2^g(n) + g(n)`.
    ///
    /// When `2^g(n)` is too large to materialize, the left side is still
    /// evaluated exactly; if it has at most `g(n)` bits it is below `2^g(n)`
    /// and the inequality holds.
    pub fn is_padding_stable_at(&self, g: &FnDesc, n: &BigUint) -> Result<bool, TallyError> {
        if n.is_zero() {
            return Err(TallyError::Precondition("padding stability is checked at n >= 1".into()));
        }
        let padded = self.pow2(n)? + n;
        let lhs = self.eval(g, &padded)?;
        let gn = self.eval(g, n)?;
        if let Ok(p) = self.pow2(&gn) {
            return Ok(lhs < p + &gn);
        }
        if BigUint::from(lhs.bits()) <= gn {
            return Ok(true);
        }
        Err(out_of_range(&gn + 1u32, self.cap_bits))
    }

    /// Density at every member and the gap between consecutive members.
    pub fn validate_tally(&self, t: &TallySet, d: &FnDesc, g: &FnDesc) -> Result<TallyVerdict, TallyError> {
        for (i, m) in t.lengths.iter().enumerate() {
            let bound = self.eval(d, m)?;
            if BigUint::from(i + 1) > bound {
                return Ok(TallyVerdict::fail(Violation::Density {
                    length: m.to_string(),
                    count: i + 1,
                    bound: bound.to_string(),
                }));
            }
        }
        for w in t.lengths.windows(2) {
            let gap = self.eval(g, &w[0])?;
            if gap >= w[1] {
                return Ok(TallyVerdict::fail(Violation::Gap {
                    lower: w[0].to_string(),
                    upper: w[1].to_string(),
                    gap: gap.to_string(),
                }));
            }
        }
        Ok(TallyVerdict::ok())
    }

    /// Validates `pad(T)` after checking that `T` itself validates and that
    /// `g` is padding stable at each member above 1.
    pub fn lemma1_check(&self, t: &TallySet, d: &FnDesc, g: &FnDesc) -> Result<TallyVerdict, TallyError> {
        let base = self.validate_tally(t, d, g)?;
        if let Some(v) = base.violation {
            return Err(TallyError::Precondition(format!("input set does not validate: {v:?}")));
        }
        for m in t.lengths.iter().filter(|m| !m.is_one()) {
            if !self.is_padding_stable_at(g, m)? {
                return Err(TallyError::Precondition(format!("{g} is not padding stable at {m}")));
            }
        }
        self.validate_tally(&self.pad(t)?, d, g)
    }

    /// Least `n > after` with `d(n) > target`, by galloping then bisection.
    fn next_step(&self, d: &FnDesc, after: &BigUint, target: &BigUint) -> Result<BigUint, TallyError> {
        let limit = BigUint::from(self.probe_limit);
        let exceeds = |n: &BigUint| -> Result<bool, TallyError> { Ok(&self.eval(d, n)? > target) };
        let mut lo = after.clone();
        let mut step = BigUint::one();
        let mut hi = after + 1u32;
        while !exceeds(&hi)? {
            if hi >= limit {
                return Err(TallyError::DensityBounded {
                    target: target.clone(),
                    limit: self.probe_limit,
                });
            }
            lo = hi.clone();
            step <<= 1;
            hi = (&hi + &step).min(limit.clone());
        }
        // d(lo) <= target < d(hi)
        while &hi - &lo > BigUint::one() {
            let mid = (&lo + &hi) >> 1;
            if exceeds(&mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }

    /// The first `count` values of the step-free spacing function.
    pub fn construct_f(&self, d: &FnDesc, g: &FnDesc, count: usize) -> Result<Vec<BigUint>, TallyError> {
        if count == 0 {
            return Err(TallyError::Precondition("count must be positive".into()));
        }
        let mut out: Vec<BigUint> = Vec::with_capacity(count);
        let mut n_prev = BigUint::zero();
        let mut level = BigUint::zero();
        for _ in 0..count {
            let n_j = self.next_step(d, &n_prev, &level)?;
            level = self.eval(d, &n_j)?;
            let f_j = match out.last() {
                None => n_j.clone(),
                Some(prev) => n_j.clone().max(self.eval(g, prev)? + 1u32),
            };
            n_prev = n_j;
            out.push(f_j);
        }
        Ok(out)
    }
}

pub fn iter_exp(k: u32, n: &BigUint) -> Result<BigUint, TallyError> {
    Evaluator::default().iter_exp(k, n)
}

pub fn iter_log(k: u32, n: &BigUint) -> Result<BigUint, TallyError> {
    Evaluator::default().iter_log(k, n)
}

pub fn pad(t: &TallySet) -> Result<TallySet, TallyError> {
    Evaluator::default().pad(t)
}

pub fn is_padding_stable_at(g: &FnDesc, n: &BigUint) -> Result<bool, TallyError> {
    Evaluator::default().is_padding_stable_at(g, n)
}

pub fn validate_tally(t: &TallySet, d: &FnDesc, g: &FnDesc) -> Result<TallyVerdict, TallyError> {
    Evaluator::default().validate_tally(t, d, g)
}

pub fn lemma1_check(t: &TallySet, d: &FnDesc, g: &FnDesc) -> Result<TallyVerdict, TallyError> {
    Evaluator::default().lemma1_check(t, d, g)
}

pub fn construct_f(d: &FnDesc, g: &FnDesc, count: usize) -> Result<Vec<BigUint>, TallyError> {
    Evaluator::default().construct_f(d, g, count)
}
