//! Deterministic random streams and stochastic backward orbits.
//!
//! Every sampling routine splits its work into numbered tasks. Task `t` of a
//! run seeded with `s` draws from ChaCha8 stream `t` under key `s`, so the
//! output for a fixed `(seed, task count)` is independent of how the tasks
//! are scheduled.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::poly::{Complex, Polynomial};
use crate::roots::{preimages, RootSet};

pub type TaskRng = ChaCha8Rng;

/// Independent stream for one task.
pub fn task_rng(seed: u64, task: u64) -> TaskRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(task);
    rng
}

/// Number of samples handled by `task` when `total` samples are split over `tasks`.
pub fn task_share(total: usize, tasks: usize, task: usize) -> usize {
    let tasks = tasks.max(1);
    total / tasks + usize::from(task < total % tasks)
}

/// Picks one preimage; each cluster is chosen with probability `mult / d`.
pub fn choose_weighted<R: Rng + ?Sized>(set: &RootSet, rng: &mut R) -> Complex {
    let total = set.total_multiplicity();
    let mut ticket = rng.gen_range(0..total);
    for (z, m) in set.iter() {
        if ticket < m {
            return z;
        }
        ticket -= m;
    }
    set.roots[set.len() - 1]
}

/// One step of a random backward orbit.
pub fn backward_step<R: Rng + ?Sized>(p: &Polynomial, z: Complex, rng: &mut R) -> Result<Complex> {
    let set = preimages(p, z)?;
    Ok(choose_weighted(&set, rng))
}

/// Endpoint of an `n`-step random backward orbit.
pub fn backward_orbit_endpoint<R: Rng + ?Sized>(
    p: &Polynomial,
    start: Complex,
    n: usize,
    rng: &mut R,
) -> Result<Complex> {
    let mut z = start;
    for _ in 0..n {
        z = backward_step(p, z, rng)?;
    }
    Ok(z)
}
