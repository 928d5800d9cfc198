//! Sparse languages used to populate sketches.
//!
//! A [`SparseLanguageSpec`] pairs an enumerator for `L^n` with a declared
//! density bound `f(n)`; [`SparseLanguageSpec::members`] checks the
//! enumerator against the bound and against the membership predicate.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::SketchError;
use crate::bits::BitString;
use crate::rng::SeededRng;

/// Refuse to materialize more than this many strings of one length.
pub const MAX_ENUMERATED_MEMBERS: u64 = 1 << 20;

/// Density bound `f(n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum DensityBound {
    Constant { c: u64 },
    Linear,
    /// `floor(n^(num/den))`.
    Power { num: u32, den: u32 },
    /// `sum_{i <= c} C(n, i)`, the number of strings with at most `c` ones.
    LowWeight { c: u32 },
}

impl DensityBound {
    pub fn eval(&self, n: u64) -> Result<u64, SketchError> {
        let overflow = || SketchError::DensityOverflow { n };
        match *self {
            DensityBound::Constant { c } => Ok(c),
            DensityBound::Linear => Ok(n),
            DensityBound::Power { num, den } => {
                if den == 0 {
                    return Err(SketchError::InvalidParam("power exponent denominator is 0".into()));
                }
                let root = BigUint::from(n).pow(num).nth_root(den);
                u64::try_from(root).map_err(|_| overflow())
            }
            DensityBound::LowWeight { c } => {
                low_weight_count(n, c).and_then(|v| u64::try_from(v).ok()).ok_or_else(overflow)
            }
        }
    }
}

/// `sum_{i <= c} C(n, i)`, `None` on overflow.
fn low_weight_count(n: u64, c: u32) -> Option<u128> {
    let mut term: u128 = 1;
    let mut total: u128 = 1;
    for i in 0..(c as u64).min(n) {
        term = term.checked_mul((n - i) as u128)? / (i as u128 + 1);
        total = total.checked_add(term)?;
    }
    Some(total)
}

impl fmt::Display for DensityBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DensityBound::Constant { c } => write!(f, "constant:{c}"),
            DensityBound::Linear => f.write_str("linear"),
            DensityBound::Power { num, den: 1 } => write!(f, "power:{num}"),
            DensityBound::Power { num, den } => write!(f, "power:{num}/{den}"),
            DensityBound::LowWeight { c } => write!(f, "low-weight:{c}"),
        }
    }
}

impl FromStr for DensityBound {
    type Err = SketchError;

    /// `linear`, `constant:C`, `power:P` or `power:P/Q`, `low-weight:C`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SketchError::InvalidParam(format!("unrecognized density bound {s:?}"));
        let (family, arg) = s.split_once(':').map_or((s, None), |(a, b)| (a, Some(b)));
        let int = |x: Option<&str>| x.and_then(|v| v.trim().parse::<u64>().ok()).ok_or_else(bad);
        match family {
            "linear" if arg.is_none() => Ok(DensityBound::Linear),
            "constant" => Ok(DensityBound::Constant { c: int(arg)? }),
            "low-weight" => Ok(DensityBound::LowWeight {
                c: u32::try_from(int(arg)?).map_err(|_| bad())?,
            }),
            "power" => {
                let arg = arg.ok_or_else(bad)?;
                let (num, den) = arg.split_once('/').unwrap_or((arg, "1"));
                let num: u32 = num.trim().parse().map_err(|_| bad())?;
                let den: u32 = den.trim().parse().map_err(|_| bad())?;
                if den == 0 {
                    return Err(bad());
                }
                Ok(DensityBound::Power { num, den })
            }
            _ => Err(bad()),
        }
    }
}

/// How `L^n` is produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LanguageKind {
    /// `min(f(n), 2^n)` distinct uniformly random strings per length, drawn from `seed`.
    SeededRandom { seed: u64 },
    /// All strings with at most `c` ones.
    LowWeight { c: u32 },
    /// Exactly one string; lengths other than its own are empty.
    Singleton { member: BitString },
    Empty,
    /// A fixed list, typically loaded from a spec file.
    Explicit { members: Vec<BitString> },
}

/// A sparse language together with its declared density bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseLanguageSpec {
    pub name: String,
    pub density: DensityBound,
    pub language: LanguageKind,
}

/// Parameters for [`make_language`]; unused fields are ignored.
#[derive(Debug, Clone, Default)]
pub struct LanguageParams {
    pub seed: Option<u64>,
    pub c: Option<u32>,
    pub member: Option<BitString>,
    /// Overrides the kind's natural bound.
    pub density: Option<DensityBound>,
}

/// Builds one of the named corpora: `seeded-random`, `low-weight`, `singleton`, `empty`.
pub fn make_language(kind: &str, params: &LanguageParams) -> Result<SparseLanguageSpec, SketchError> {
    let missing = |p: &str| SketchError::InvalidParam(format!("language {kind:?} needs parameter {p}"));
    let (language, natural, name) = match kind {
        "seeded-random" => {
            let seed = params.seed.ok_or_else(|| missing("seed"))?;
            (
                LanguageKind::SeededRandom { seed },
                DensityBound::Linear,
                format!("seeded-random(seed={seed})"),
            )
        }
        "low-weight" => {
            let c = params.c.ok_or_else(|| missing("c"))?;
            (
                LanguageKind::LowWeight { c },
                DensityBound::LowWeight { c },
                format!("low-weight(c={c})"),
            )
        }
        "singleton" => {
            let member = params.member.clone().ok_or_else(|| missing("member"))?;
            if member.is_empty() {
                return Err(SketchError::InvalidParam("singleton member must be nonempty".into()));
            }
            let name = format!("singleton({member})");
            (LanguageKind::Singleton { member }, DensityBound::Constant { c: 1 }, name)
        }
        "empty" => (LanguageKind::Empty, DensityBound::Constant { c: 1 }, "empty".to_owned()),
        other => return Err(SketchError::UnknownLanguage(other.to_owned())),
    };
    let spec = SparseLanguageSpec {
        name,
        density: params.density.clone().unwrap_or(natural),
        language,
    };
    spec.check_declared_bound()?;
    Ok(spec)
}

impl SparseLanguageSpec {
    /// For kinds with a closed-form size, the declared bound must cover it at
    /// every length up to 64.
    fn check_declared_bound(&self) -> Result<(), SketchError> {
        for n in 1..=64u64 {
            let natural: u128 = match &self.language {
                LanguageKind::LowWeight { c } => low_weight_count(n, *c).unwrap_or(u128::MAX),
                LanguageKind::Singleton { member } => (member.len() as u64 == n) as u128,
                LanguageKind::Explicit { members } => {
                    members.iter().filter(|m| m.len() as u64 == n).count() as u128
                }
                LanguageKind::SeededRandom { .. } | LanguageKind::Empty => 0,
            };
            let declared = self.density.eval(n).map(u128::from).unwrap_or(u128::MAX);
            if natural > declared {
                return Err(SketchError::DensityViolation {
                    n,
                    count: natural.min(u64::MAX as u128) as u64,
                    bound: declared as u64,
                });
            }
        }
        Ok(())
    }

    /// `f(n)` floored at 1, the value fed to field sizing.
    pub fn sizing_density(&self, n: u64) -> Result<u64, SketchError> {
        Ok(self.density.eval(n)?.max(1))
    }

    /// Seed the language was generated from, if any.
    pub fn source_seed(&self) -> Option<u64> {
        match self.language {
            LanguageKind::SeededRandom { seed } => Some(seed),
            _ => None,
        }
    }

    /// Raw enumerator output for length `n` (unchecked).
    pub fn enumerate(&self, n: u64) -> Result<Vec<BitString>, SketchError> {
        match &self.language {
            LanguageKind::SeededRandom { seed } => {
                let want = self.density.eval(n)?;
                let count = if n < 64 { want.min(1 << n) } else { want };
                if count > MAX_ENUMERATED_MEMBERS {
                    return Err(SketchError::EnumerationTooLarge { n, count });
                }
                let mut rng = SeededRng::new(*seed).split(n);
                let mut set = BTreeSet::new();
                while (set.len() as u64) < count {
                    set.insert(random_string(&mut rng, n));
                }
                Ok(set.into_iter().collect())
            }
            LanguageKind::LowWeight { c } => {
                let count = low_weight_count(n, *c).unwrap_or(u128::MAX);
                if count > MAX_ENUMERATED_MEMBERS as u128 {
                    return Err(SketchError::EnumerationTooLarge {
                        n,
                        count: count.min(u64::MAX as u128) as u64,
                    });
                }
                let mut out = Vec::with_capacity(count as usize);
                for w in 0..=(*c as u64).min(n) {
                    push_combinations(n as usize, w as usize, &mut out);
                }
                Ok(out)
            }
            LanguageKind::Singleton { member } => Ok(if member.len() as u64 == n {
                vec![member.clone()]
            } else {
                Vec::new()
            }),
            LanguageKind::Empty => Ok(Vec::new()),
            LanguageKind::Explicit { members } => Ok(members
                .iter()
                .filter(|m| m.len() as u64 == n)
                .cloned()
                .collect()),
        }
    }

    /// Membership predicate; agrees with [`SparseLanguageSpec::enumerate`].
    pub fn contains(&self, x: &[bool]) -> Result<bool, SketchError> {
        Ok(match &self.language {
            LanguageKind::SeededRandom { .. } => self
                .enumerate(x.len() as u64)?
                .iter()
                .any(|m| &m[..] == x),
            LanguageKind::LowWeight { c } => x.iter().filter(|&&b| b).count() <= *c as usize,
            LanguageKind::Singleton { member } => &member[..] == x,
            LanguageKind::Empty => false,
            LanguageKind::Explicit { members } => members.iter().any(|m| &m[..] == x),
        })
    }

    /// `L^n`, validated: every string has length `n`, no duplicates,
    /// `|L^n| <= f(n)`, and the membership predicate accepts each one.
    pub fn members(&self, n: u64) -> Result<Vec<BitString>, SketchError> {
        let list = self.enumerate(n)?;
        let bound = self.density.eval(n)?;
        if list.len() as u64 > bound {
            return Err(SketchError::DensityViolation {
                n,
                count: list.len() as u64,
                bound,
            });
        }
        let mut seen = BTreeSet::new();
        for m in &list {
            if m.len() as u64 != n {
                return Err(SketchError::InvalidLanguage(format!(
                    "enumerator produced {m} (length {}) for n={n}",
                    m.len()
                )));
            }
            if !seen.insert(m) {
                return Err(SketchError::InvalidLanguage(format!("duplicate member {m} at n={n}")));
            }
            if !self.contains(m)? {
                return Err(SketchError::InvalidLanguage(format!(
                    "membership predicate rejects enumerated {m}"
                )));
            }
        }
        Ok(list)
    }
}

/// A uniformly random string of length `n`.
pub fn random_string<R: RngCore + ?Sized>(rng: &mut R, n: u64) -> BitString {
    let mut out = Vec::with_capacity(n as usize);
    while (out.len() as u64) < n {
        let w = rng.next_u64();
        let take = (n - out.len() as u64).min(64);
        out.extend((0..take).map(|i| (w >> i) & 1 == 1));
    }
    out.into()
}

/// Strings of length `n` with exactly `w` ones, ones-positions in lexicographic order.
fn push_combinations(n: usize, w: usize, out: &mut Vec<BitString>) {
    let mut pos: Vec<usize> = (0..w).collect();
    loop {
        let mut s = vec![false; n];
        for &p in &pos {
            s[p] = true;
        }
        out.push(s.into());
        // advance to the next combination
        let mut i = w;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if pos[i] < n - w + i {
                pos[i] += 1;
                for j in i + 1..w {
                    pos[j] = pos[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits;

    #[test]
    fn seeded_random_has_n_distinct_members() {
        let spec = make_language(
            "seeded-random",
            &LanguageParams {
                seed: Some(1),
                ..Default::default()
            },
        )
        .unwrap();
        let m = spec.members(8).unwrap();
        assert_eq!(m.len(), 8);
        assert!(m.iter().all(|s| s.len() == 8));
        assert_eq!(m, spec.members(8).unwrap());
        for s in &m {
            assert!(spec.contains(s).unwrap());
        }
        // every string of length 1 or 2 is a candidate; f(1)=1, f(2)=2
        assert_eq!(spec.members(1).unwrap().len(), 1);
        assert_eq!(spec.members(2).unwrap().len(), 2);
    }

    #[test]
    fn low_weight_enumeration_order() {
        let spec = make_language(
            "low-weight",
            &LanguageParams {
                c: Some(1),
                ..Default::default()
            },
        )
        .unwrap();
        let m: Vec<String> = spec.members(4).unwrap().iter().map(|s| s.to_string()).collect();
        assert_eq!(m, ["0000", "1000", "0100", "0010", "0001"]);
        assert_eq!(spec.density.eval(4).unwrap(), 5);
        assert!(spec.contains(&bits("0010")).unwrap());
        assert!(!spec.contains(&bits("0110")).unwrap());

        let two = make_language("low-weight", &LanguageParams { c: Some(2), ..Default::default() }).unwrap();
        assert_eq!(two.members(6).unwrap().len(), 1 + 6 + 15);
    }

    #[test]
    fn singleton_and_empty() {
        let spec = make_language(
            "singleton",
            &LanguageParams {
                member: Some(bits("1011")),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(spec.members(4).unwrap(), vec![bits("1011")]);
        assert!(spec.members(5).unwrap().is_empty());
        let empty = make_language("empty", &LanguageParams::default()).unwrap();
        assert!(empty.members(4).unwrap().is_empty());
        assert!(!empty.contains(&bits("0000")).unwrap());
    }

    #[test]
    fn make_language_errors() {
        assert!(matches!(
            make_language("fractal", &LanguageParams::default()),
            Err(SketchError::UnknownLanguage(_))
        ));
        assert!(make_language("seeded-random", &LanguageParams::default()).is_err());
        // C(4, <=1) = 5 strings cannot fit under a constant bound of 3
        let tight = LanguageParams {
            c: Some(1),
            density: Some(DensityBound::Constant { c: 3 }),
            ..Default::default()
        };
        assert!(matches!(
            make_language("low-weight", &tight),
            Err(SketchError::DensityViolation { n: 3, .. })
        ));
    }

    #[test]
    fn explicit_density_violation_names_the_length() {
        let spec = SparseLanguageSpec {
            name: "explicit".into(),
            density: DensityBound::Constant { c: 1 },
            language: LanguageKind::Explicit {
                members: vec![bits("00"), bits("11")],
            },
        };
        assert!(matches!(
            spec.members(2),
            Err(SketchError::DensityViolation { n: 2, count: 2, bound: 1 })
        ));
    }

    #[test]
    fn density_bounds() {
        assert_eq!(DensityBound::Power { num: 1, den: 2 }.eval(17).unwrap(), 4);
        assert_eq!(DensityBound::Power { num: 3, den: 2 }.eval(16).unwrap(), 64);
        assert_eq!(DensityBound::Linear.eval(9).unwrap(), 9);
        assert_eq!(DensityBound::Constant { c: 3 }.eval(100).unwrap(), 3);
        for s in ["linear", "constant:4", "power:3/2", "power:2", "low-weight:2"] {
            let d: DensityBound = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
        assert!("power:1/0".parse::<DensityBound>().is_err());
        assert!("cubic".parse::<DensityBound>().is_err());
    }

    #[test]
    fn spec_json_shape() {
        let spec = make_language("seeded-random", &LanguageParams { seed: Some(5), ..Default::default() }).unwrap();
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(
            json,
            r#"{"name":"seeded-random(seed=5)","density":{"family":"linear"},"language":{"kind":"seeded-random","seed":5}}"#
        );
        let back: SparseLanguageSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
    }
}
