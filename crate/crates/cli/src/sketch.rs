use std::fs::File;
use std::io::BufReader;
use std::process::ExitCode;

use serde::Serialize;

use gfstream::sketch::file::{read_sketch, sketch_bytes};
use gfstream::sketch::{
    build_sketch_with, contains, fp_rate_experiment, magnify_query, make_language, AMode, BuildOptions,
    ExperimentConfig, LanguageParams, SparseLanguageSpec, Verdict,
};
use gfstream::stream::{Fingerprint, FingerprintRecord};
use gfstream::{make_field, BitString, TOOL_VERSION};

use crate::fingerprint::read_all;
use crate::output::{emit, resolve_seed, to_json, Failure, EXIT_BOUND, EXIT_REJECT};
use crate::{BuildArgs, LangArgs, Mode, ReportFormat, SketchCommand};

fn resolve_language(args: &LangArgs) -> Result<SparseLanguageSpec, Failure> {
    let density = args.density.as_deref().map(str::parse).transpose()?;
    if let Some(path) = &args.lang_file {
        let name = path.display().to_string();
        let file = File::open(path).map_err(|e| Failure::io(&name, e))?;
        let mut spec: SparseLanguageSpec = serde_json::from_reader(BufReader::new(file))
            .map_err(|e| Failure::precondition(format!("{name}: {e}")))?;
        if let Some(d) = density {
            spec.density = d;
        }
        return Ok(spec);
    }
    let Some(kind) = args.lang.as_deref() else {
        return Err(Failure::precondition("give a language with --lang or --lang-file"));
    };
    let member = args
        .member
        .as_deref()
        .map(|m| m.parse::<BitString>())
        .transpose()
        .map_err(|e| Failure::precondition(format!("--member: {e}")))?;
    let seed = match kind {
        "seeded-random" => Some(resolve_seed(args.lang_seed, "language")),
        _ => args.lang_seed,
    };
    let params = LanguageParams {
        seed,
        c: args.c,
        member,
        density,
    };
    Ok(make_language(kind, &params)?)
}

fn build_options(args: &BuildArgs) -> Result<BuildOptions, Failure> {
    Ok(BuildOptions {
        ctx_override: args.k.map(make_field).transpose()?,
        entry_budget: args.budget,
    })
}

#[derive(Serialize)]
struct BuildSummary<'a> {
    tool_version: &'static str,
    seed: Option<u64>,
    n: u64,
    k: usize,
    t_hex: String,
    paper_sized: bool,
    language: &'a SparseLanguageSpec,
    members: usize,
    entries: usize,
    out: String,
}

pub fn run(cmd: SketchCommand) -> Result<ExitCode, Failure> {
    match cmd {
        SketchCommand::Build { build, out } => {
            let spec = resolve_language(&build.lang)?;
            let sketch = build_sketch_with(&spec, build.n, &build_options(&build)?)?;
            emit(Some(&out), &sketch_bytes(&sketch))?;
            let summary = BuildSummary {
                tool_version: TOOL_VERSION,
                seed: sketch.source_seed(),
                n: sketch.n(),
                k: sketch.ctx().k(),
                t_hex: sketch.ctx().modulus().to_hex(),
                paper_sized: sketch.paper_sized(),
                language: &spec,
                members: spec.members(build.n)?.len(),
                entries: sketch.len(),
                out: out.display().to_string(),
            };
            emit(None, &to_json(&summary))?;
            Ok(ExitCode::SUCCESS)
        }
        SketchCommand::Query {
            sketch,
            mut input,
            fingerprint,
            seed,
        } => {
            let name = sketch.display().to_string();
            let file = File::open(&sketch).map_err(|e| Failure::io(&name, e))?;
            let sketch = read_sketch(BufReader::new(file))?;
            let verdict = match fingerprint {
                Some(path) => {
                    let name = path.display().to_string();
                    let file = File::open(&path).map_err(|e| Failure::io(&name, e))?;
                    let record: FingerprintRecord = serde_json::from_reader(BufReader::new(file))?;
                    let (fp, _) = Fingerprint::from_record(&record)?;
                    if contains(&sketch, &fp)? {
                        Verdict::Accept
                    } else {
                        Verdict::Reject
                    }
                }
                None => {
                    input.n.get_or_insert(sketch.n());
                    let x = read_all(&input)?;
                    let seed = resolve_seed(seed, "evaluation point");
                    magnify_query(&sketch, sketch.n(), &x, seed)?
                }
            };
            println!("{verdict}");
            Ok(match verdict {
                Verdict::Accept => ExitCode::SUCCESS,
                Verdict::Reject => ExitCode::from(EXIT_REJECT),
            })
        }
        SketchCommand::FpRate {
            build,
            seed,
            nonmembers,
            mode,
            draws,
            report,
            out,
        } => {
            let spec = resolve_language(&build.lang)?;
            let opts = build_options(&build)?;
            let config = ExperimentConfig {
                nonmembers,
                seed: resolve_seed(seed, "experiment"),
                mode: match mode {
                    Mode::Exhaustive => AMode::Exhaustive,
                    Mode::Sampled => AMode::Sampled { draws },
                },
                ctx_override: opts.ctx_override,
                entry_budget: opts.entry_budget,
            };
            let result = fp_rate_experiment(&spec, build.n, &config)?;
            let bytes = match report {
                ReportFormat::Json => result.to_json().into_bytes(),
                ReportFormat::Csv => result.to_csv().into_bytes(),
            };
            emit(out.as_deref(), &bytes)?;
            if result.bound_held == Some(false) {
                eprintln!(
                    "gfstream: {} of {} nonmembers exceeded the {} acceptance bound",
                    result.violations, result.nonmember_count, result.bound
                );
                return Ok(ExitCode::from(EXIT_BOUND));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
