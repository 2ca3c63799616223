//! Intervention scheduling and dataset generation.

use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::estimator::InterventionalDataset;
use crate::scm::{sample_episode, CascadeModel, Intervention};
use crate::seed::mix_seed;

/// Round-robin schedule: within each round every node is blocked exactly
/// once, in a fresh uniformly random order. Deterministic per seed.
pub fn round_robin_schedule(n: usize, rounds: usize, rng_seed: u64) -> Result<Vec<Intervention>> {
    if rounds < 1 {
        return Err(Error::InvalidArgument("rounds must be >= 1".into()));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("node count must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut schedule = Vec::with_capacity(n * rounds);
    let mut order: Vec<usize> = (0..n).collect();
    for _ in 0..rounds {
        order.shuffle(&mut rng);
        schedule.extend(order.iter().map(|&i| Intervention::Block(i)));
    }
    Ok(schedule)
}

/// Generate a dataset: `rounds` round-robin interventions followed by
/// `obs_episodes` observational runs. The schedule order is drawn from
/// `run_seed`; episode `e` uses the mixed seed `mix_seed(run_seed, e)`, so
/// episodes may be sampled in any order (or in parallel) without changing
/// the result.
pub fn generate_dataset(
    model: &CascadeModel,
    rounds: usize,
    obs_episodes: usize,
    run_seed: u64,
) -> Result<InterventionalDataset> {
    let n = model.node_count();
    let mut schedule = round_robin_schedule(n, rounds, run_seed)?;
    schedule.extend(std::iter::repeat_n(
        Intervention::Observational,
        obs_episodes,
    ));
    let mut data = InterventionalDataset::new(n)?;
    for (e, &iv) in schedule.iter().enumerate() {
        data.push(sample_episode(model, iv, mix_seed(run_seed, e as u64))?)?;
    }
    Ok(data)
}
