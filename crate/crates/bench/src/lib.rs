//! Shared inputs for the benchmarks.

use bracketwords::words::{Word, WordCatalog};

/// A word from the default catalog.
pub fn catalog_word(name: &str) -> Word {
    WordCatalog::with_defaults().resolve(name).expect("catalog word")
}

/// The points of `[−r, r]²`.
pub fn square_grid(r: i64) -> Vec<Vec<i64>> {
    (-r..=r).flat_map(|x| (-r..=r).map(move |y| vec![x, y])).collect()
}
