use std::process::ExitCode;
use std::time::Instant;

use rand::RngCore;
use serde::Serialize;

use gfstream::stream::begin;
use gfstream::{make_field, SeededRng, TOOL_VERSION};

use crate::output::{emit, resolve_seed, to_json, Failure};
use crate::BenchArgs;

#[derive(Serialize)]
struct BenchRow {
    k: usize,
    t_hex: String,
    bits: u64,
    segments: u64,
    field_ops: u64,
    seconds: f64,
    segments_per_sec: f64,
    field_ops_per_sec: f64,
    mib_per_sec: f64,
}

#[derive(Serialize)]
struct BenchReport {
    tool_version: &'static str,
    seed: u64,
    mib: f64,
    /// Fields are fixed by --k, not sized from the input.
    paper_sized: bool,
    hardware_clmul: bool,
    results: Vec<BenchRow>,
}

pub fn run(args: BenchArgs) -> Result<ExitCode, Failure> {
    if !(args.mib > 0.0) {
        return Err(Failure::precondition("--mib must be positive"));
    }
    let len = ((args.mib * (1 << 20) as f64) as usize).max(1);
    let seed = resolve_seed(args.seed, "bench");
    let mut data = vec![0u8; len];
    SeededRng::new(seed).fill_bytes(&mut data);
    let n = 8 * len as u64;

    let mut results = Vec::with_capacity(args.k.len());
    for &k in &args.k {
        let ctx = make_field(k)?;
        let start = Instant::now();
        let mut state = begin(n, &ctx, &mut SeededRng::new(seed).split(k as u64))?;
        state.feed_bytes(&data)?;
        let (_, profile) = state.finish_with_profile()?;
        let seconds = start.elapsed().as_secs_f64().max(1e-9);
        results.push(BenchRow {
            k,
            t_hex: ctx.modulus().to_hex(),
            bits: n,
            segments: profile.conversions,
            field_ops: profile.field_ops,
            seconds,
            segments_per_sec: profile.conversions as f64 / seconds,
            field_ops_per_sec: profile.field_ops as f64 / seconds,
            mib_per_sec: len as f64 / (1 << 20) as f64 / seconds,
        });
    }
    let report = BenchReport {
        tool_version: TOOL_VERSION,
        seed,
        mib: args.mib,
        paper_sized: false,
        hardware_clmul: gfstream::gf2poly::hardware_clmul_available(),
        results,
    };
    emit(args.out.as_deref(), &to_json(&report))?;
    Ok(ExitCode::SUCCESS)
}
