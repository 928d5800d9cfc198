//! Self-delimiting tuple coding.
//!
//! Every data bit `b` is written as the pair `1b` and parts are separated by
//! `00`, so `<x, y, z> = 1x_1 ... 1x_n 00 1y_1 ... 00 1z_1 ... 1z_m`. The
//! encoded length is `2·(|x| + |y| + |z|) + 2·(parts - 1)`.

use thiserror::Error;

use crate::bits::BitString;
use crate::field::{FieldCtx, FieldError};
use crate::gf2poly::Gf2Poly;
use crate::stream::Fingerprint;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodingError {
    #[error("tuples have 2 or 3 parts, got {0}")]
    Arity(usize),
    #[error("tuple part {0} is empty")]
    EmptyPart(usize),
    #[error("dangling bit at the end of the encoding")]
    Dangling,
    #[error("invalid pair \"01\" at bit offset {0}")]
    BadPair(usize),
    #[error("field {name} has {got} bits, expected {expected}")]
    FieldWidth {
        name: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("length field {0} is not a minimal positive binary number")]
    BadLength(BitString),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Length of the encoding of parts with the given sizes.
pub fn encoded_len(part_lens: &[usize]) -> usize {
    2 * part_lens.iter().sum::<usize>() + 2 * part_lens.len().saturating_sub(1)
}

pub fn encode_tuple(parts: &[&[bool]]) -> Result<BitString, CodingError> {
    if !(2..=3).contains(&parts.len()) {
        return Err(CodingError::Arity(parts.len()));
    }
    if let Some(i) = parts.iter().position(|p| p.is_empty()) {
        return Err(CodingError::EmptyPart(i));
    }
    let lens: Vec<usize> = parts.iter().map(|p| p.len()).collect();
    let mut out = Vec::with_capacity(encoded_len(&lens));
    for (i, part) in parts.iter().enumerate() {
        if i > 0 {
            out.extend([false, false]);
        }
        for &b in part.iter() {
            out.extend([true, b]);
        }
    }
    Ok(out.into())
}

pub fn decode_tuple(bits: &[bool]) -> Result<Vec<BitString>, CodingError> {
    let mut parts: Vec<Vec<bool>> = vec![Vec::new()];
    let mut i = 0;
    while i < bits.len() {
        if i + 1 >= bits.len() {
            return Err(CodingError::Dangling);
        }
        match (bits[i], bits[i + 1]) {
            (true, b) => parts.last_mut().expect("nonempty").push(b),
            (false, false) => {
                if parts.last().is_some_and(|p| p.is_empty()) {
                    return Err(CodingError::EmptyPart(parts.len() - 1));
                }
                parts.push(Vec::new());
            }
            (false, true) => return Err(CodingError::BadPair(i)),
        }
        i += 2;
    }
    if let Some(i) = parts.iter().position(|p| p.is_empty()) {
        return Err(CodingError::EmptyPart(i));
    }
    if !(2..=3).contains(&parts.len()) {
        return Err(CodingError::Arity(parts.len()));
    }
    Ok(parts.into_iter().map(BitString::from).collect())
}

/// `<binary(n), bits(a), bits(v)>` with `n` minimal big-endian and the field
/// elements written `b_{k-1} ... b_0`.
pub fn encode_fingerprint(fp: &Fingerprint) -> BitString {
    let n = BitString::binary_of(fp.n);
    let a = fp.a.display_bits();
    let v = fp.v.display_bits();
    encode_tuple(&[&n, &a, &v]).expect("fingerprint parts are nonempty")
}

/// Inverse of [`encode_fingerprint`]; the context supplies `k` and the modulus.
pub fn decode_fingerprint(bits: &[bool], ctx: &FieldCtx) -> Result<Fingerprint, CodingError> {
    let parts = decode_tuple(bits)?;
    if parts.len() != 3 {
        return Err(CodingError::Arity(parts.len()));
    }
    let n_bits = &parts[0];
    let n = match n_bits.first() {
        Some(true) => n_bits.to_u64_be(),
        _ => None,
    }
    .ok_or_else(|| CodingError::BadLength(n_bits.clone()))?;
    let elem = |name: &'static str, display: &BitString| {
        if display.len() != ctx.k() {
            return Err(CodingError::FieldWidth {
                name,
                got: display.len(),
                expected: ctx.k(),
            });
        }
        let coeffs: Vec<bool> = display.iter().rev().copied().collect();
        Ok(ctx.elem(Gf2Poly::from_coeff_bits(&coeffs))?)
    };
    Ok(Fingerprint {
        n,
        k: ctx.k(),
        modulus: ctx.modulus().clone(),
        a: elem("a", &parts[1])?,
        v: elem("v", &parts[2])?,
        seed: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits;
    use crate::field::make_field;

    #[test]
    fn encode_examples() {
        let t = encode_tuple(&[&bits("1"), &bits("0"), &bits("1")]).unwrap();
        assert_eq!(t.to_string(), "1100100011");
        let t = encode_tuple(&[&bits("10"), &bits("11")]).unwrap();
        assert_eq!(t.to_string(), "1110001111");
        assert_eq!(encoded_len(&[1, 1, 1]), 10);
        assert_eq!(encoded_len(&[2, 2]), 10);
    }

    #[test]
    fn encode_rejects_bad_arity_and_empty_parts() {
        assert_eq!(encode_tuple(&[&bits("1")]), Err(CodingError::Arity(1)));
        assert_eq!(
            encode_tuple(&[&bits("1"), &bits("1"), &bits("1"), &bits("1")]),
            Err(CodingError::Arity(4))
        );
        assert_eq!(encode_tuple(&[&bits("1"), &[]]), Err(CodingError::EmptyPart(1)));
    }

    #[test]
    fn decode_examples_and_errors() {
        let parts = decode_tuple(&bits("1100100011")).unwrap();
        assert_eq!(parts, vec![bits("1"), bits("0"), bits("1")]);
        assert_eq!(decode_tuple(&bits("11001")), Err(CodingError::Dangling));
        assert_eq!(decode_tuple(&bits("110111")), Err(CodingError::BadPair(2)));
        assert_eq!(decode_tuple(&bits("11000011")), Err(CodingError::EmptyPart(1)));
        assert_eq!(decode_tuple(&bits("110011")).unwrap().len(), 2);
        assert_eq!(decode_tuple(&bits("1100")), Err(CodingError::EmptyPart(1)));
        assert_eq!(decode_tuple(&bits("1111")), Err(CodingError::Arity(1)));
        assert_eq!(decode_tuple(&[]), Err(CodingError::EmptyPart(0)));
    }

    #[test]
    fn fingerprint_encoding() {
        let f = make_field(2).unwrap();
        let u = f.elem_from_u64(0b10).unwrap();
        let fp = Fingerprint {
            n: 4,
            k: 2,
            modulus: f.modulus().clone(),
            a: u.clone(),
            v: u,
            seed: None,
        };
        let enc = encode_fingerprint(&fp);
        let want = encode_tuple(&[&bits("100"), &bits("10"), &bits("10")]).unwrap();
        assert_eq!(enc, want);
        assert_eq!(enc.len(), 2 * (3 + 2 * 2) + 4);
        assert_eq!(decode_fingerprint(&enc, &f).unwrap(), fp);

        let f3 = make_field(3).unwrap();
        assert!(matches!(
            decode_fingerprint(&enc, &f3),
            Err(CodingError::FieldWidth { .. })
        ));
    }
}
