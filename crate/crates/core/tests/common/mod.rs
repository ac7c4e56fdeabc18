#![allow(dead_code)]

use coset_ricci::{zoo, LinearCode};

/// Generator columns packed as `u64`, bit `r` = row `r`.
pub fn packed_columns(code: &LinearCode) -> Vec<u64> {
    code.columns()
        .iter()
        .map(|c| c.to_u64().expect("at most 64 rows"))
        .collect()
}

/// `count` seeded random codes with `m` in `1..=max_m` rows and `n` in
/// `2..=max_n` columns.
pub fn random_codes(count: u64, max_m: usize, max_n: usize, salt: u64) -> Vec<LinearCode> {
    (0..count)
        .map(|s| {
            let seed = salt.wrapping_mul(1_000_003).wrapping_add(s);
            let m = 1 + (seed as usize * 7 + 3) % max_m;
            let n = 2 + (seed as usize * 13 + 5) % (max_n - 1);
            zoo::random_code(m, n, seed).unwrap()
        })
        .collect()
}
