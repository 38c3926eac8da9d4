//! The block sequence `a_n`: value `j` repeated `j^j` times, `j = 1, 2, 3, ...`.

use std::sync::OnceLock;

/// Number of blocks tabulated. Block 16 already extends past `u64::MAX`.
const TABLE_BLOCKS: usize = 20;

/// `CUMULATIVE[j - 1] = sum_{i <= j} i^i`.
fn cumulative() -> &'static [u128; TABLE_BLOCKS] {
    static TABLE: OnceLock<[u128; TABLE_BLOCKS]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [0u128; TABLE_BLOCKS];
        let mut acc = 0u128;
        for (slot, j) in table.iter_mut().zip(1u128..) {
            acc += j.pow(j as u32);
            *slot = acc;
        }
        table
    })
}

/// `a_n = min { k : n <= sum_{j <= k} j^j }` for `n >= 1`.
pub fn block_of(n: u64) -> u64 {
    debug_assert!(n >= 1);
    let n = n as u128;
    cumulative().partition_point(|&c| c < n) as u64 + 1
}

/// Last index of block `j`, i.e. `sum_{i <= j} i^i`, if it fits in `u64`.
pub fn block_end(j: u64) -> Option<u64> {
    if j == 0 {
        return Some(0);
    }
    cumulative()
        .get(j as usize - 1)
        .and_then(|&c| u64::try_from(c).ok())
}

/// First index of block `j`.
pub fn block_start(j: u64) -> Option<u64> {
    debug_assert!(j >= 1);
    block_end(j - 1).map(|e| e + 1)
}

/// Natural log of the first index of block `j`, valid for every `j >= 1`.
/// Beyond the table a lower bound `(j - 1) ln(j - 1)` is returned.
pub fn ln_block_start_lower(j: u64) -> f64 {
    match cumulative().get(j as usize - 1) {
        Some(_) if j == 1 => 0.0,
        Some(_) => ((cumulative()[j as usize - 2] + 1) as f64).ln(),
        None => (j - 1) as f64 * ((j - 1) as f64).ln(),
    }
}

/// Number of indices `n` in block `j`, i.e. `j^j`, saturating.
pub fn block_len(j: u64) -> u128 {
    (j as u128).checked_pow(j as u32).unwrap_or(u128::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leading_terms() {
        let head: Vec<u64> = (1..=16).map(block_of).collect();
        assert_eq!(head, [1, 2, 2, 2, 2, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3]);
        // 3^3 = 27 threes occupy 6..=32.
        assert_eq!(block_of(32), 3);
        assert_eq!(block_of(33), 4);
    }

    #[test]
    fn cumulative_sums() {
        let ends: Vec<u64> = (1..=5).map(|j| block_end(j).unwrap()).collect();
        assert_eq!(ends, [1, 5, 32, 288, 3413]);
        let starts: Vec<u64> = (1..=5).map(|j| block_start(j).unwrap()).collect();
        assert_eq!(starts, [1, 2, 6, 33, 289]);
    }

    #[test]
    fn covers_u64_range() {
        assert_eq!(block_of(1_000_000_000_000_000_000), 16);
        assert_eq!(block_of(u64::MAX), 16);
        assert!(block_end(15).is_some());
        assert!(block_end(16).is_none());
    }

    #[test]
    fn counts_per_block_match_powers() {
        for k in 1..=6u64 {
            let start = block_start(k).unwrap();
            let end = block_end(k).unwrap();
            let count = (start..=end).filter(|&n| block_of(n) == k).count() as u128;
            assert_eq!(count, block_len(k));
            if k > 1 {
                assert_eq!(block_of(start - 1), k - 1);
            }
        }
    }
}
