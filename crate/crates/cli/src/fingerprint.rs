use std::fs::File;
use std::io::{self, BufReader, Read};
use std::process::ExitCode;

use serde::Serialize;

use gfstream::sketch::DensityBound;
use gfstream::stream::coding::encode_fingerprint;
use gfstream::stream::{begin, FingerprintRecord, StreamState};
use gfstream::{make_field, select_field_size, BitString, ResourceProfile, SeededRng, TOOL_VERSION};

use crate::output::{emit, resolve_seed, to_json, Failure};
use crate::{FingerprintArgs, InputArgs, InputFormat};

/// Where the input bits come from, with `n` already fixed.
pub enum Source {
    Bits(BitString),
    Raw(Box<dyn Read>),
}

fn parse_bits_text(text: &str) -> Result<BitString, Failure> {
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    cleaned
        .parse()
        .map_err(|e| Failure::precondition(format!("bits input: {e}")))
}

fn check_len(x: BitString, n: Option<u64>) -> Result<(u64, Source), Failure> {
    let len = x.len() as u64;
    match n {
        Some(n) if n != len => Err(Failure::precondition(format!(
            "input has {len} bits but --n is {n}"
        ))),
        _ => Ok((len, Source::Bits(x))),
    }
}

/// Resolves `--bits` / `--input` into a length and a bit source.
pub fn open(args: &InputArgs) -> Result<(u64, Source), Failure> {
    if let Some(bits) = &args.bits {
        return check_len(parse_bits_text(bits)?, args.n);
    }
    let Some(path) = &args.input else {
        return Err(Failure::precondition("give the input with --bits or --input"));
    };
    let stdin = path.as_os_str() == "-";
    let name = path.display().to_string();
    let reader: Box<dyn Read> = if stdin {
        if args.n.is_none() {
            return Err(Failure::precondition("reading standard input requires --n"));
        }
        Box::new(io::stdin().lock())
    } else {
        Box::new(BufReader::new(File::open(path).map_err(|e| Failure::io(&name, e))?))
    };
    match args.format {
        InputFormat::Bits => {
            let mut text = String::new();
            let mut reader = reader;
            reader.read_to_string(&mut text).map_err(|e| Failure::io(&name, e))?;
            check_len(parse_bits_text(&text)?, args.n)
        }
        InputFormat::Raw => {
            let n = match args.n {
                Some(n) => n,
                None => std::fs::metadata(path).map_err(|e| Failure::io(&name, e))?.len() * 8,
            };
            Ok((n, Source::Raw(reader)))
        }
    }
}

fn read_full(reader: &mut dyn Read, buf: &mut [u8]) -> io::Result<usize> {
    let mut got = 0;
    while got < buf.len() {
        match reader.read(&mut buf[got..]) {
            Ok(0) => break,
            Ok(m) => got += m,
            Err(e) if e.kind() == io::ErrorKind::Interrupted => {}
            Err(e) => return Err(e),
        }
    }
    Ok(got)
}

/// Feeds exactly `n` bits; a short input surfaces when the state is finished.
pub fn feed(state: &mut StreamState, source: Source, n: u64) -> Result<(), Failure> {
    match source {
        Source::Bits(x) => state.feed_bits(&x)?,
        Source::Raw(mut reader) => {
            let needed = n.div_ceil(8);
            let tail_bits = (n % 8) as usize;
            let mut buf = vec![0u8; 1 << 16];
            let mut consumed = 0u64;
            while consumed < needed {
                let want = (needed - consumed).min(buf.len() as u64) as usize;
                let got = read_full(&mut reader, &mut buf[..want])?;
                if got == 0 {
                    return Ok(());
                }
                consumed += got as u64;
                let chunk = &buf[..got];
                if consumed == needed && tail_bits != 0 {
                    let (whole, last) = chunk.split_at(got - 1);
                    state.feed_bytes(whole)?;
                    let bits: Vec<bool> = (0..tail_bits).map(|i| (last[0] >> (7 - i)) & 1 == 1).collect();
                    state.feed_bits(&bits)?;
                } else {
                    state.feed_bytes(chunk)?;
                }
            }
            if read_full(&mut reader, &mut [0u8; 1])? != 0 {
                return Err(Failure::precondition(format!("input continues past n={n} bits")));
            }
        }
    }
    Ok(())
}

/// Collects the whole input; used where the string is needed in memory.
pub fn read_all(args: &InputArgs) -> Result<BitString, Failure> {
    let (n, source) = open(args)?;
    match source {
        Source::Bits(x) => Ok(x),
        Source::Raw(mut reader) => {
            let mut bytes = Vec::new();
            reader.read_to_end(&mut bytes)?;
            let mut bits = BitString::from_bytes_msb(&bytes).into_inner();
            if (bits.len() as u64) < n || bytes.len() as u64 > n.div_ceil(8) {
                return Err(Failure::precondition(format!(
                    "input has {} bytes, --n {n} needs {}",
                    bytes.len(),
                    n.div_ceil(8)
                )));
            }
            bits.truncate(n as usize);
            Ok(bits.into())
        }
    }
}

#[derive(Serialize)]
struct FingerprintReport {
    tool_version: &'static str,
    #[serde(flatten)]
    record: FingerprintRecord,
    paper_sized: bool,
    density: String,
    f_of_n: Option<u64>,
    profile: ResourceProfile,
    #[serde(skip_serializing_if = "Option::is_none")]
    paper_encoding: Option<String>,
}

pub fn run(args: FingerprintArgs) -> Result<ExitCode, Failure> {
    let density: DensityBound = args.f.parse()?;
    let (n, source) = open(&args.input)?;
    if n == 0 {
        return Err(Failure::precondition("the stream must contain at least one bit"));
    }
    let (ctx, f_of_n) = match args.k {
        Some(k) => (make_field(k)?, None),
        None => {
            let f = density.eval(n)?.max(1);
            (make_field(select_field_size(n, f)?)?, Some(f))
        }
    };
    let seed = resolve_seed(args.seed, "evaluation point");
    let mut state = begin(n, &ctx, &mut SeededRng::new(seed))?;
    feed(&mut state, source, n)?;
    let (fp, profile) = state.finish_with_profile()?;
    let report = FingerprintReport {
        tool_version: TOOL_VERSION,
        record: fp.to_record(),
        paper_sized: args.k.is_none(),
        density: density.to_string(),
        f_of_n,
        profile,
        paper_encoding: args.paper_encoding.then(|| encode_fingerprint(&fp).to_string()),
    };
    emit(args.out.as_deref(), &to_json(&report))?;
    Ok(ExitCode::SUCCESS)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(bytes: &[u8], n: u64) -> Result<Vec<bool>, Failure> {
        let ctx = make_field(3).unwrap();
        let a = ctx.elem_from_u64(5).unwrap();
        let mut st = StreamState::with_point(n, &ctx, a.clone())?;
        feed(&mut st, Source::Raw(Box::new(io::Cursor::new(bytes.to_vec()))), n)?;
        let got = st.finish()?;
        let mut bits = BitString::from_bytes_msb(bytes).into_inner();
        bits.truncate(n as usize);
        let mut want = StreamState::with_point(n, &ctx, a)?;
        want.feed_bits(&bits)?;
        assert_eq!(got, want.finish()?);
        Ok(bits)
    }

    #[test]
    fn raw_feeding_stops_at_n() {
        assert_eq!(raw(&[0b1011_0000], 4).unwrap(), vec![true, false, true, true]);
        assert!(raw(&[0xff; 3], 17).is_ok());
        assert_eq!(raw(&[0xff; 3], 8).unwrap_err().code, 3);
        assert_eq!(raw(&[0xff], 9).unwrap_err().code, 3);
    }

    #[test]
    fn bits_text_ignores_whitespace() {
        assert_eq!(parse_bits_text(" 10\n1 1\t").unwrap().to_string(), "1011");
        assert!(parse_bits_text("10a1").is_err());
    }
}
