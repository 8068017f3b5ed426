//! Seeded RNG streams.
//!
//! Every random decision in the pipeline draws from a ChaCha stream derived
//! from `(global_seed, tag, a, b)`. Streams are independent by construction,
//! so the consumption order inside one stage cannot disturb another stage,
//! and resuming a run only needs the seed plus the loop counters.
//!
//! Stream tags in use:
//!
//! | tag        | a            | b     | purpose                            |
//! |------------|--------------|-------|------------------------------------|
//! | `init`     | branch index | 0     | parameter initialization           |
//! | `dropout`  | branch index | step  | dropout masks for one train step   |
//! | `shuffle`  | epoch        | 0     | per-epoch batch order              |
//! | `embed`    | 0            | 0     | scoring embedding factorization    |
//! | `synth`    | 0            | 0     | synthetic corpus generation        |

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Derive an independent ChaCha stream from the global seed and a context key.
pub fn derive_rng(seed: u64, tag: &str, a: u64, b: u64) -> ChaCha8Rng {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update([0x1f]);
    hasher.update(tag.as_bytes());
    hasher.update([0x1f]);
    hasher.update(a.to_le_bytes());
    hasher.update(b.to_le_bytes());
    let digest = hasher.finalize();
    let mut key = [0u8; 32];
    key.copy_from_slice(&digest);
    ChaCha8Rng::from_seed(key)
}
