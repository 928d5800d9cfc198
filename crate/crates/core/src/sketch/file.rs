//! The `SPSK` sketch file.
//!
//! All integers are little-endian; strings are ASCII, prefixed by a `u16`
//! byte length. Element hex is fixed width (`ceil(k/4)` lowercase digits).
//!
//! ```text
//! header:  "SPSK" | version u16 = 1 | n u64 | k u32 | t_hex str
//!          | paper_sized u8 | has_seed u8 | seed u64 | record_count u64
//! record:  body_len u32 | a_hex str | count u32 | count x v_hex str
//! ```
//!
//! Records are sorted by `a`, and the `v` values within a record ascend, so
//! the encoding of a given sketch is unique.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use super::{SketchError, SketchSet};
use crate::field::{make_field, FieldCtx, FieldElem};
use crate::gf2poly::Gf2Poly;

pub const MAGIC: &[u8; 4] = b"SPSK";
pub const VERSION: u16 = 1;

fn put_str(out: &mut Vec<u8>, s: &str) {
    out.extend_from_slice(&(s.len() as u16).to_le_bytes());
    out.extend_from_slice(s.as_bytes());
}

/// Serializes `sketch` into its exact byte form.
pub fn sketch_bytes(sketch: &SketchSet) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&sketch.n().to_le_bytes());
    out.extend_from_slice(&(sketch.ctx().k() as u32).to_le_bytes());
    put_str(&mut out, &sketch.ctx().modulus().to_hex());
    out.push(sketch.paper_sized() as u8);
    out.push(sketch.source_seed().is_some() as u8);
    out.extend_from_slice(&sketch.source_seed().unwrap_or(0).to_le_bytes());
    out.extend_from_slice(&(sketch.entries().len() as u64).to_le_bytes());
    for (a, vs) in sketch.entries() {
        let mut body = Vec::new();
        put_str(&mut body, &a.to_hex());
        body.extend_from_slice(&(vs.len() as u32).to_le_bytes());
        for v in vs {
            put_str(&mut body, &v.to_hex());
        }
        out.extend_from_slice(&(body.len() as u32).to_le_bytes());
        out.extend_from_slice(&body);
    }
    out
}

pub fn write_sketch<W: Write>(sketch: &SketchSet, mut w: W) -> Result<(), SketchError> {
    w.write_all(&sketch_bytes(sketch))?;
    Ok(())
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8], SketchError> {
        let end = self
            .pos
            .checked_add(len)
            .filter(|&e| e <= self.data.len())
            .ok_or_else(|| SketchError::Format(format!("truncated at byte {}", self.pos)))?;
        let s = &self.data[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8, SketchError> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<u16, SketchError> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().expect("2 bytes")))
    }

    fn u32(&mut self) -> Result<u32, SketchError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn u64(&mut self) -> Result<u64, SketchError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn str(&mut self) -> Result<&'a str, SketchError> {
        let len = self.u16()? as usize;
        std::str::from_utf8(self.take(len)?).map_err(|_| SketchError::Format("non-ASCII string".into()))
    }

    fn flag(&mut self) -> Result<bool, SketchError> {
        match self.u8()? {
            0 => Ok(false),
            1 => Ok(true),
            b => Err(SketchError::Format(format!("bad flag byte {b}"))),
        }
    }
}

fn parse_elem(ctx: &FieldCtx, text: &str) -> Result<FieldElem, SketchError> {
    let e = ctx.elem_from_hex(text)?;
    if e.to_hex() != text {
        return Err(SketchError::Format(format!("non-canonical element hex {text:?}")));
    }
    Ok(e)
}

/// Parses bytes written by [`sketch_bytes`], rejecting anything non-canonical.
pub fn parse_sketch(data: &[u8]) -> Result<SketchSet, SketchError> {
    let mut c = Cursor { data, pos: 0 };
    if c.take(4)? != MAGIC {
        return Err(SketchError::Format("missing SPSK magic".into()));
    }
    let version = c.u16()?;
    if version != VERSION {
        return Err(SketchError::Format(format!("unsupported version {version}")));
    }
    let n = c.u64()?;
    let k = c.u32()? as usize;
    let ctx = make_field(k)?;
    let t = Gf2Poly::from_hex(c.str()?)?;
    if &t != ctx.modulus() {
        return Err(SketchError::Format(format!(
            "modulus 0x{} is not the field modulus 0x{} for k={k}",
            t.to_hex(),
            ctx.modulus().to_hex()
        )));
    }
    let paper_sized = c.flag()?;
    let has_seed = c.flag()?;
    let seed = c.u64()?;
    let records = c.u64()?;
    let mut entries = BTreeMap::new();
    let mut prev_a: Option<FieldElem> = None;
    for _ in 0..records {
        let body_len = c.u32()? as usize;
        let start = c.pos;
        let a = parse_elem(&ctx, c.str()?)?;
        if prev_a.as_ref().is_some_and(|p| p >= &a) {
            return Err(SketchError::Format("records not strictly sorted by a".into()));
        }
        let count = c.u32()? as usize;
        let mut vs: Vec<FieldElem> = Vec::with_capacity(count.min(1 << 16));
        for _ in 0..count {
            let v = parse_elem(&ctx, c.str()?)?;
            if vs.last().is_some_and(|p| p >= &v) {
                return Err(SketchError::Format("v values not strictly sorted".into()));
            }
            vs.push(v);
        }
        if c.pos - start != body_len {
            return Err(SketchError::Format("record length prefix disagrees with body".into()));
        }
        prev_a = Some(a.clone());
        entries.insert(a, vs);
    }
    if c.pos != data.len() {
        return Err(SketchError::Format("trailing bytes after last record".into()));
    }
    Ok(SketchSet::from_parts(
        n,
        ctx,
        entries,
        has_seed.then_some(seed),
        paper_sized,
    ))
}

pub fn read_sketch<R: Read>(mut r: R) -> Result<SketchSet, SketchError> {
    let mut data = Vec::new();
    r.read_to_end(&mut data)?;
    parse_sketch(&data)
}
