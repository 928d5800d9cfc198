//! Membership sketches for sparse languages.
//!
//! For a language `L` and length `n`, the sketch stores every pair
//! `(a, d_y(a))` with `y in L^n` and `a` ranging over the whole field; this is
//! the union of the orbits `H(y) = {<n, a, d_y(a)>}`. A fingerprint of a
//! member always lands in the table. For a nonmember `x`, `d_x - d_y` is a
//! nonzero polynomial of degree below `r`, so each member contributes at most
//! `r - 1` colliding points and the false-positive fraction is at most
//! `(r - 1)·|L^n| / q`. With the field sized by [`select_field_size`]
//! (`q > 8·f(n)·n`) this stays below 1/4.
//!
//! Entries are grouped by evaluation point: `a -> sorted v values`.

pub mod experiment;
pub mod file;
pub mod language;

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::field::{make_field, select_field_size, FieldCtx, FieldElem, FieldError};
use crate::gf2poly::PolyError;
use crate::rng::SeededRng;
use crate::stream::{eval_monic, fingerprint_with_ctx, segment_coefficients, Fingerprint, StreamError};

pub use experiment::{fp_rate_experiment, AMode, ExperimentConfig, FpRateReport, NonmemberResult};
pub use file::{read_sketch, write_sketch};
pub use language::{make_language, DensityBound, LanguageKind, LanguageParams, SparseLanguageSpec};

/// Default cap on `q·|L^n|` for a single build.
pub const DEFAULT_ENTRY_BUDGET: u64 = 100_000_000;

#[derive(Debug, Error)]
pub enum SketchError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Stream(#[from] StreamError),
    #[error("language has {count} strings of length {n}, above its density bound {bound}")]
    DensityViolation { n: u64, count: u64, bound: u64 },
    #[error("density bound overflows at n={n}")]
    DensityOverflow { n: u64 },
    #[error("refusing to enumerate {count} strings of length {n}")]
    EnumerationTooLarge { n: u64, count: u64 },
    #[error("invalid language: {0}")]
    InvalidLanguage(String),
    #[error("unknown language kind {0:?} (expected seeded-random, low-weight, singleton or empty)")]
    UnknownLanguage(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("sketch would hold up to {needed} entries, above the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("fingerprint does not match the sketch: {0}")]
    Mismatch(String),
    #[error("exhaustive evaluation over GF(2^{k}) is too large (limit k <= {max}); use sampled mode")]
    ExhaustiveTooLarge { k: usize, max: usize },
    #[error("could not draw a nonmember of length {n}: the language is too dense")]
    TooDense { n: u64 },
    #[error("sketch file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<PolyError> for SketchError {
    fn from(e: PolyError) -> Self {
        SketchError::Field(e.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Accept => "accept",
            Verdict::Reject => "reject",
        })
    }
}

/// The table `A(n)`; immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SketchSet {
    n: u64,
    ctx: FieldCtx,
    entries: BTreeMap<FieldElem, Vec<FieldElem>>,
    source_seed: Option<u64>,
    paper_sized: bool,
}

#[derive(Debug, Clone)]
pub struct BuildOptions {
    /// Use this field instead of the one sized from `n` and `f(n)`.
    pub ctx_override: Option<FieldCtx>,
    pub entry_budget: u64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            ctx_override: None,
            entry_budget: DEFAULT_ENTRY_BUDGET,
        }
    }
}

/// Field sized for `spec` at length `n`.
pub fn paper_sized_field(spec: &SparseLanguageSpec, n: u64) -> Result<FieldCtx, SketchError> {
    let k = select_field_size(n, spec.sizing_density(n)?)?;
    Ok(make_field(k)?)
}

pub fn build_sketch(
    spec: &SparseLanguageSpec,
    n: u64,
    ctx_override: Option<&FieldCtx>,
) -> Result<SketchSet, SketchError> {
    build_sketch_with(
        spec,
        n,
        &BuildOptions {
            ctx_override: ctx_override.cloned(),
            ..Default::default()
        },
    )
}

pub fn build_sketch_with(
    spec: &SparseLanguageSpec,
    n: u64,
    opts: &BuildOptions,
) -> Result<SketchSet, SketchError> {
    if n == 0 {
        return Err(StreamError::ZeroLength.into());
    }
    let members = spec.members(n)?;
    let (ctx, paper_sized) = match &opts.ctx_override {
        Some(c) => (c.clone(), false),
        None => (paper_sized_field(spec, n)?, true),
    };
    let q = 1u128 << ctx.k().min(127);
    let needed = q * members.len() as u128;
    if needed > opts.entry_budget as u128 {
        return Err(SketchError::BudgetExceeded {
            needed,
            budget: opts.entry_budget,
        });
    }
    let coeffs = members
        .iter()
        .map(|y| segment_coefficients(&ctx, y))
        .collect::<Result<Vec<_>, _>>()?;
    let points: Vec<FieldElem> = ctx.enumerate()?.collect();
    let entries = if members.is_empty() {
        BTreeMap::new()
    } else {
        points
            .into_par_iter()
            .map(|a| {
                let mut vs: Vec<FieldElem> = coeffs.iter().map(|c| eval_monic(&ctx, c, &a)).collect();
                vs.sort();
                vs.dedup();
                (a, vs)
            })
            .collect::<Vec<_>>()
            .into_iter()
            .collect()
    };
    Ok(SketchSet {
        n,
        ctx,
        entries,
        source_seed: spec.source_seed(),
        paper_sized,
    })
}

impl SketchSet {
    pub(crate) fn from_parts(
        n: u64,
        ctx: FieldCtx,
        entries: BTreeMap<FieldElem, Vec<FieldElem>>,
        source_seed: Option<u64>,
        paper_sized: bool,
    ) -> Self {
        Self {
            n,
            ctx,
            entries,
            source_seed,
            paper_sized,
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn source_seed(&self) -> Option<u64> {
        self.source_seed
    }

    /// Whether the field came from the sizing rule rather than an override.
    pub fn paper_sized(&self) -> bool {
        self.paper_sized
    }

    pub fn entries(&self) -> &BTreeMap<FieldElem, Vec<FieldElem>> {
        &self.entries
    }

    /// `|A(n)|`, the number of distinct `(a, v)` pairs.
    pub fn len(&self) -> usize {
        self.entries.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn lookup(&self, a: &FieldElem, v: &FieldElem) -> bool {
        self.entries
            .get(a)
            .is_some_and(|vs| vs.binary_search(v).is_ok())
    }

    fn check_len(&self, len: u64) -> Result<(), SketchError> {
        if len != self.n {
            return Err(SketchError::Mismatch(format!(
                "input length {len}, sketch built for n={}",
                self.n
            )));
        }
        Ok(())
    }
}

/// True iff `(fp.a, fp.v)` is in the table.
pub fn contains(sketch: &SketchSet, fp: &Fingerprint) -> Result<bool, SketchError> {
    sketch.check_len(fp.n)?;
    if fp.k != sketch.ctx.k() || &fp.modulus != sketch.ctx.modulus() {
        return Err(SketchError::Mismatch(format!(
            "fingerprint field ({}, 0x{}) differs from sketch field {}",
            fp.k,
            fp.modulus.to_hex(),
            sketch.ctx
        )));
    }
    Ok(sketch.lookup(&fp.a, &fp.v))
}

/// Fingerprints `x` with a point drawn from `seed` and looks it up.
pub fn magnify_query(sketch: &SketchSet, n: u64, x: &[bool], seed: u64) -> Result<Verdict, SketchError> {
    sketch.check_len(n)?;
    if x.len() as u64 != n {
        return Err(StreamError::LengthMismatch {
            expected: n,
            got: x.len() as u64,
        }
        .into());
    }
    let fp = fingerprint_with_ctx(&sketch.ctx, x, &mut SeededRng::new(seed))?;
    Ok(if contains(sketch, &fp)? {
        Verdict::Accept
    } else {
        Verdict::Reject
    })
}

/// `|{a in F : (a, d_x(a)) in A(n)}|`.
pub fn exact_fp_count(sketch: &SketchSet, x: &[bool]) -> Result<u64, SketchError> {
    sketch.check_len(x.len() as u64)?;
    if sketch.entries.is_empty() {
        return Ok(0);
    }
    let ctx = &sketch.ctx;
    let coeffs = segment_coefficients(ctx, x)?;
    Ok(ctx
        .enumerate()?
        .filter(|a| sketch.lookup(a, &eval_monic(ctx, &coeffs, a)))
        .count() as u64)
}
