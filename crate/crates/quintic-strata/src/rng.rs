//! Deterministic seeded generator (splitmix64).
//!
//! Samplers take an explicit seed so that reports are byte-identical across
//! runs and platforms.  No external randomness source is used anywhere.

#[derive(Debug, Clone)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in `0..bound` (bound > 0).
    pub fn below(&mut self, bound: u64) -> u64 {
        // Rejection-free modulo is fine here: bounds are tiny versus 2^64.
        self.next_u64() % bound
    }

    /// Uniform signed integer in `[-bound, bound]`.
    pub fn int(&mut self, bound: u64) -> i64 {
        let span = 2 * bound + 1;
        self.below(span) as i64 - bound as i64
    }

    /// Uniform signed integer in `[-bound, bound] \ {0}`.
    pub fn nonzero_int(&mut self, bound: u64) -> i64 {
        loop {
            let v = self.int(bound);
            if v != 0 {
                return v;
            }
        }
    }

    /// Derive an independent stream for a subtask.
    pub fn fork(&mut self) -> Rng {
        Rng::new(self.next_u64() ^ 0xd1b5_4a32_d192_ed03)
    }
}
