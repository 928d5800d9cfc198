//! False-positive-rate experiments.
//!
//! Nonmembers are drawn uniformly from `{0,1}^n \ L^n` by rejection, each on
//! its own rng stream (`seed`, stream `i + 1`), so the run is parallel and
//! still fully determined by the seed. The report lists results in nonmember
//! index order and carries everything needed to replay it.

use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::language::random_string;
use super::{
    build_sketch_with, exact_fp_count, magnify_query, paper_sized_field, BuildOptions, SketchError, SketchSet,
    SparseLanguageSpec, Verdict, DEFAULT_ENTRY_BUDGET,
};
use crate::bits::BitString;
use crate::field::FieldCtx;
use crate::rng::SeededRng;
use crate::TOOL_VERSION;

/// Largest `k` for which exhaustive evaluation over all points is allowed.
pub const MAX_EXHAUSTIVE_DEGREE: usize = 20;

/// Acceptance fraction a nonmember may reach under the sizing rule.
pub const FP_BOUND: f64 = 0.25;

const MAX_REJECTION_ATTEMPTS: u32 = 10_000;
const MEMBER_STREAM_BASE: u64 = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum AMode {
    /// Every field element as evaluation point; fractions are exact.
    Exhaustive,
    /// `draws` independent queries per string, each with a fresh seed.
    Sampled { draws: u32 },
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub nonmembers: usize,
    pub seed: u64,
    pub mode: AMode,
    pub ctx_override: Option<FieldCtx>,
    pub entry_budget: u64,
}

impl ExperimentConfig {
    pub fn new(nonmembers: usize, seed: u64, mode: AMode) -> Self {
        Self {
            nonmembers,
            seed,
            mode,
            ctx_override: None,
            entry_budget: DEFAULT_ENTRY_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonmemberResult {
    pub index: usize,
    pub x: BitString,
    pub accepted: u64,
    pub evaluated: u64,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FpRateReport {
    pub tool_version: String,
    pub seed: u64,
    pub n: u64,
    pub k: usize,
    pub q: u64,
    pub t_hex: String,
    pub paper_sized: bool,
    pub language: SparseLanguageSpec,
    pub members: usize,
    pub segments: u64,
    pub mode: AMode,
    pub nonmember_count: usize,
    pub max_fraction: f64,
    pub mean_fraction: f64,
    pub bound: f64,
    /// False when a field override was used; the bound is then not asserted.
    pub bound_checked: bool,
    pub violations: usize,
    pub bound_held: Option<bool>,
    /// `(r - 1)·|L^n| / q`.
    pub expected_magnitude: f64,
    /// `(r - 1)·|L^n|`, the exact per-nonmember collision ceiling.
    pub collision_ceiling: u64,
    /// Exhaustive mode only: every nonmember stayed under `collision_ceiling`.
    pub collision_ceiling_held: Option<bool>,
    pub member_fractions: Vec<f64>,
    pub nonmembers: Vec<NonmemberResult>,
}

impl FpRateReport {
    /// Pretty JSON with a trailing newline; identical inputs give identical bytes.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Per-nonmember rows after one `#` line of run metadata.
    pub fn to_csv(&self) -> String {
        let mut s = format!(
            "# tool_version={} seed={} n={} k={} t_hex={} paper_sized={} language={}\n",
            self.tool_version, self.seed, self.n, self.k, self.t_hex, self.paper_sized, self.language.name
        );
        s.push_str("index,x,accepted,evaluated,fraction\n");
        for r in &self.nonmembers {
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                r.index, r.x, r.accepted, r.evaluated, r.fraction
            ));
        }
        s
    }
}

fn draw_nonmember(
    spec: &SparseLanguageSpec,
    n: u64,
    rng: &mut SeededRng,
) -> Result<BitString, SketchError> {
    for _ in 0..MAX_REJECTION_ATTEMPTS {
        let x = random_string(rng, n);
        if !spec.contains(&x)? {
            return Ok(x);
        }
    }
    Err(SketchError::TooDense { n })
}

fn acceptance(
    sketch: &SketchSet,
    x: &[bool],
    mode: AMode,
    rng: &mut SeededRng,
) -> Result<(u64, u64), SketchError> {
    match mode {
        AMode::Exhaustive => Ok((exact_fp_count(sketch, x)?, 1u64 << sketch.ctx().k())),
        AMode::Sampled { draws } => {
            let mut hits = 0;
            for _ in 0..draws {
                if magnify_query(sketch, sketch.n(), x, rng.next_u64())? == Verdict::Accept {
                    hits += 1;
                }
            }
            Ok((hits, draws as u64))
        }
    }
}

/// Builds the sketch for `spec` at length `n` and measures how often
/// nonmembers (and, as a control, members) are accepted.
pub fn fp_rate_experiment(
    spec: &SparseLanguageSpec,
    n: u64,
    config: &ExperimentConfig,
) -> Result<FpRateReport, SketchError> {
    let k = match &config.ctx_override {
        Some(c) => c.k(),
        None => paper_sized_field(spec, n)?.k(),
    };
    if config.mode == AMode::Exhaustive && k > MAX_EXHAUSTIVE_DEGREE {
        return Err(SketchError::ExhaustiveTooLarge {
            k,
            max: MAX_EXHAUSTIVE_DEGREE,
        });
    }
    if let AMode::Sampled { draws: 0 } = config.mode {
        return Err(SketchError::InvalidParam("sampled mode needs at least one draw".into()));
    }
    let members = spec.members(n)?;
    if n < 64 && (members.len() as u64) > (1u64 << n) / 2 {
        return Err(SketchError::TooDense { n });
    }
    let sketch = build_sketch_with(
        spec,
        n,
        &BuildOptions {
            ctx_override: config.ctx_override.clone(),
            entry_budget: config.entry_budget,
        },
    )?;
    let ctx = sketch.ctx();
    let root = SeededRng::new(config.seed);

    let nonmembers = (0..config.nonmembers)
        .into_par_iter()
        .map(|i| {
            let mut rng = root.split(i as u64 + 1);
            let x = draw_nonmember(spec, n, &mut rng)?;
            let (accepted, evaluated) = acceptance(&sketch, &x, config.mode, &mut rng)?;
            Ok(NonmemberResult {
                index: i,
                x,
                accepted,
                evaluated,
                fraction: accepted as f64 / evaluated as f64,
            })
        })
        .collect::<Result<Vec<_>, SketchError>>()?;

    let member_fractions = members
        .par_iter()
        .enumerate()
        .map(|(j, y)| {
            let mut rng = root.split(MEMBER_STREAM_BASE + j as u64);
            let (accepted, evaluated) = acceptance(&sketch, y, config.mode, &mut rng)?;
            Ok(accepted as f64 / evaluated as f64)
        })
        .collect::<Result<Vec<_>, SketchError>>()?;

    let q = 1u64 << k;
    let segments = n.div_ceil(k as u64);
    let collision_ceiling = (segments - 1) * members.len() as u64;
    let max_fraction = nonmembers.iter().map(|r| r.fraction).fold(0.0, f64::max);
    let mean_fraction = if nonmembers.is_empty() {
        0.0
    } else {
        nonmembers.iter().map(|r| r.fraction).sum::<f64>() / nonmembers.len() as f64
    };
    let violations = nonmembers.iter().filter(|r| r.fraction > FP_BOUND).count();
    let bound_checked = sketch.paper_sized();
    Ok(FpRateReport {
        tool_version: TOOL_VERSION.to_owned(),
        seed: config.seed,
        n,
        k,
        q,
        t_hex: ctx.modulus().to_hex(),
        paper_sized: sketch.paper_sized(),
        language: spec.clone(),
        members: members.len(),
        segments,
        mode: config.mode,
        nonmember_count: nonmembers.len(),
        max_fraction,
        mean_fraction,
        bound: FP_BOUND,
        bound_checked,
        violations,
        bound_held: bound_checked.then_some(violations == 0),
        expected_magnitude: collision_ceiling as f64 / q as f64,
        collision_ceiling,
        collision_ceiling_held: (config.mode == AMode::Exhaustive)
            .then(|| nonmembers.iter().all(|r| r.accepted <= collision_ceiling)),
        member_fractions,
        nonmembers,
    })
}
