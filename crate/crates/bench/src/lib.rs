//! Inputs shared by the kernel benchmarks.

use tandem_core::{DupParams, Word};

/// A binary word of the given length with a fixed, irregular pattern.
pub fn sample_word(params: DupParams, len: usize) -> Word {
    let q = params.q();
    Word::new(params, (0..len).map(|i| ((i * 7 + i / 3) as u32) % q)).expect("symbols reduced mod q")
}
