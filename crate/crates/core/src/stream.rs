//! Counter-based random streams: every (seed, purpose, index) triple maps to
//! its own ChaCha stream, so trials and restarts can run in any order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Separates the streams used by different consumers of the same seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    Trial = 0x7472_6961_6c73,
    Restart = 0x7265_7374_6172,
}

pub type Stream = ChaCha8Rng;

/// The stream for item `index` of `purpose` under `seed`.
pub fn substream(seed: u64, purpose: Purpose, index: u64) -> Stream {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(purpose as u64).to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}
