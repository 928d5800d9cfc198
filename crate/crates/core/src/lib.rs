//! Streaming polynomial fingerprints over GF(2^k).
//!
//! * [`gf2poly`]: GF(2)[u] arithmetic, Rabin's irreducibility test and a
//!   deterministic irreducible-polynomial generator.
//! * [`field`]: GF(2^k) contexts sized from a stream length and density bound.
//! * [`stream`]: the one-pass fingerprint `<n, a, d_x(a)>` with resource
//!   accounting, a direct-evaluation oracle and the tuple coding.
//! * [`sketch`]: membership tables for sparse languages, their file format
//!   and false-positive-rate experiments.
//! * [`tally`]: tally sets, padding and gap-function checks over big integers.

pub mod bits;
pub mod field;
pub mod gf2poly;
pub mod rng;
pub mod sketch;
pub mod stream;
pub mod tally;

pub use bits::{bits, BitString};
pub use field::{make_field, select_field_size, FieldCtx, FieldElem, FieldError};
pub use gf2poly::{factor_smallest, find_irreducible, is_irreducible, Gf2Poly, PolyError, SmallestFactor};
pub use rng::SeededRng;
pub use sketch::{
    build_sketch, contains, exact_fp_count, fp_rate_experiment, magnify_query, SketchError, SketchSet,
    SparseLanguageSpec, Verdict,
};
pub use stream::{Fingerprint, ResourceProfile, StreamError, StreamState};
pub use tally::{FnDesc, TallyError, TallySet};

/// Version string embedded in every report.
pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));
