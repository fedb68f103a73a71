use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent variate streams inside one sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lane {
    Points,
    LatticeWeights,
    CornerWeight,
    Exclusion,
}

impl Lane {
    fn tag(self) -> u64 {
        match self {
            Lane::Points => 1,
            Lane::LatticeWeights => 2,
            Lane::CornerWeight => 3,
            Lane::Exclusion => 4,
        }
    }
}

/// The generator for sample `index` of run `seed` on the given lane.
///
/// The ChaCha key holds `(seed, lane)` and the 64-bit stream id holds the
/// sample index, so each triple addresses its own keystream and nothing is
/// shared between samples.
pub fn sample_stream(seed: u64, index: u64, lane: Lane) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&lane.tag().to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}
