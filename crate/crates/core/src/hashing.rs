//! Stable content hashes.

use sha2::{Digest, Sha256};

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// 64-bit FNV-1a over the UTF-8 bytes.
pub fn fnv1a64(s: &str) -> u64 {
    s.bytes()
        .fold(FNV_OFFSET, |h, b| (h ^ u64::from(b)).wrapping_mul(FNV_PRIME))
}

/// First 16 hex characters of the SHA-256 of `s`.
pub fn digest(s: &str) -> String {
    let out = Sha256::digest(s.as_bytes());
    out.iter().take(8).map(|b| format!("{b:02x}")).collect()
}
