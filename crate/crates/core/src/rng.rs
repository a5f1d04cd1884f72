//! Seeded random streams.
//!
//! Every randomized step draws from a ChaCha8 generator keyed by the run seed
//! and a fixed stream id, so stages can be replayed independently of each other.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StageRng = ChaCha8Rng;

/// Named sub-streams of a run seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Construction = 1,
    CoverSets = 2,
    Padding = 3,
    MonteCarlo = 4,
}

pub fn stream(seed: u64, stream: Stream) -> StageRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

/// Generator for one block of Monte-Carlo trials, on a stream of its own
/// under the Monte-Carlo id. Blocks do not depend on thread scheduling.
pub(crate) fn block_stream(seed: u64, block: u64) -> StageRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(Stream::MonteCarlo as u64 | (block + 1) << 8);
    rng
}
