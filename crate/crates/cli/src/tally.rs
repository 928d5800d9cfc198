use std::process::ExitCode;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::Serialize;

use gfstream::tally::{Evaluator, Family, FnDesc, TallySet};
use gfstream::TOOL_VERSION;

use crate::output::{emit, to_json, Failure};
use crate::TallyArgs;

/// JSON descriptor, or the shorthand `family[:k[:p1,p2,...]]`.
fn parse_desc(text: &str) -> Result<FnDesc, Failure> {
    let text = text.trim();
    if text.starts_with('{') {
        let desc: FnDesc = serde_json::from_str(text)?;
        desc.validate()?;
        return Ok(desc);
    }
    let mut parts = text.splitn(3, ':');
    let family = Family::from_str(parts.next().unwrap_or_default())?;
    let k = match parts.next() {
        Some(k) => k
            .parse()
            .map_err(|_| Failure::precondition(format!("bad iteration depth in {text:?}")))?,
        None => u32::from(matches!(family, Family::IterExp | Family::IterLog)),
    };
    let params = parts
        .next()
        .map(|p| p.split(',').map(|s| s.trim().to_owned()).collect())
        .unwrap_or_default();
    let desc = FnDesc { family, k, params };
    desc.validate()?;
    Ok(desc)
}

fn parse_set(text: &str) -> Result<TallySet, Failure> {
    let json = if text.trim_start().starts_with('[') {
        text.to_owned()
    } else {
        std::fs::read_to_string(text).map_err(|e| Failure::io(text, e))?
    };
    Ok(serde_json::from_str(&json)?)
}

fn parse_n(text: Option<&str>) -> Result<BigUint, Failure> {
    let text = text.ok_or_else(|| Failure::precondition("--n is required"))?;
    BigUint::from_str(text.trim()).map_err(|_| Failure::precondition(format!("--n {text:?} is not a decimal integer")))
}

fn required<'a>(value: &'a Option<String>, flag: &str) -> Result<&'a str, Failure> {
    value
        .as_deref()
        .ok_or_else(|| Failure::precondition(format!("{flag} is required for this check")))
}

#[derive(Serialize)]
struct ConstructReport {
    tool_version: &'static str,
    density: String,
    gap: String,
    /// The spacing recurrence without machine-step terms.
    modified: bool,
    values: TallySet,
}

pub fn run(args: TallyArgs) -> Result<ExitCode, Failure> {
    let eval = Evaluator::with_cap(args.cap_bits);
    if args.padding_stable {
        let g = match &args.gap {
            Some(text) => parse_desc(text)?,
            None => {
                let family = Family::from_str(&args.family)?;
                let params = match (family, &args.params) {
                    (_, Some(p)) => p.split(',').map(|s| s.trim().to_owned()).collect(),
                    (Family::IterExp, None) => vec![args.scale.to_string()],
                    _ => Vec::new(),
                };
                let desc = FnDesc { family, k: args.k, params };
                desc.validate()?;
                desc
            }
        };
        let n = parse_n(args.n.as_deref())?;
        println!("{}", eval.is_padding_stable_at(&g, &n)?);
        return Ok(ExitCode::SUCCESS);
    }
    if args.pad {
        let t = parse_set(required(&args.set, "--set")?)?;
        emit(None, &to_json(&eval.pad(&t)?))?;
        return Ok(ExitCode::SUCCESS);
    }
    let d = parse_desc(required(&args.density, "--density")?)?;
    let g = parse_desc(required(&args.gap, "--gap")?)?;
    if args.construct_f {
        let count = args.count.ok_or_else(|| Failure::precondition("--count is required"))?;
        let values = TallySet::new(eval.construct_f(&d, &g, count)?)?;
        let report = ConstructReport {
            tool_version: TOOL_VERSION,
            density: d.to_string(),
            gap: g.to_string(),
            modified: true,
            values,
        };
        emit(None, &to_json(&report))?;
        return Ok(ExitCode::SUCCESS);
    }
    let t = parse_set(required(&args.set, "--set")?)?;
    let verdict = if args.lemma1 {
        eval.lemma1_check(&t, &d, &g)?
    } else {
        eval.validate_tally(&t, &d, &g)?
    };
    emit(None, &to_json(&verdict))?;
    Ok(ExitCode::SUCCESS)
}
