use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded, splittable random source.
///
/// Backed by ChaCha8 with the stream id mapped to the cipher's stream
/// counter, so `(seed, stream_id, draw count)` fixes the output on every
/// platform.
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RandomStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        RandomStream {
            seed,
            stream_id,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Child stream `index`. Depends only on `(seed, stream_id, index)`, not
    /// on how many draws the parent has made.
    pub fn split(&self, index: u64) -> RandomStream {
        let child_seed =
            splitmix64(self.seed ^ splitmix64(self.stream_id.wrapping_add(0x5851_F42D_4C95_7F2D)));
        RandomStream::new(child_seed, index)
    }

    /// Uniform draw on the open interval `(0, 1)`.
    pub fn uniform_open(&mut self) -> f64 {
        self.rng.sample(Open01)
    }
}
