//! Shared fixtures for the benchmarks under `benches/`.

use quadseq::{gen_random_independent, gen_random_switching, Scenario};

/// A switching argmin scenario of `steps` steps in dimension `d`.
pub fn switching(d: usize, steps: usize) -> Scenario {
    gen_random_switching(d, 7, steps).expect("dimension in range")
}

/// A diagonal frame of rationally independent values.
pub fn independent(d: usize) -> Scenario {
    gen_random_independent(d, 7, 0).expect("dimension in range")
}
