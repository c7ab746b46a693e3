use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{MembershipOracle, SetEnclosure, SetError};
use crate::interval::IntervalVector;

const CHUNK: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub hits: usize,
    pub samples: usize,
    pub box_volume: f64,
}

fn uniform_in_box(rng: &mut ChaCha8Rng, b: &IntervalVector) -> DVector<f64> {
    DVector::from_iterator(
        b.len(),
        b.iter().map(|i| {
            if i.diam() > 0.0 {
                rng.random_range(i.lo()..=i.hi())
            } else {
                i.lo()
            }
        }),
    )
}

/// Hit-or-miss volume over the interval hull. Samples are drawn in chunks,
/// each with its own ChaCha stream derived from `(seed, chunk index)`, so
/// the result does not depend on the number of threads.
pub fn mc_volume(
    set: &SetEnclosure,
    samples: usize,
    seed: u64,
) -> Result<VolumeEstimate, SetError> {
    if samples == 0 {
        return Err(SetError::InvalidSpec(
            "volume estimation needs at least one sample".into(),
        ));
    }
    let oracle = MembershipOracle::new(set)?;
    let hull = set.interval_hull()?;
    let box_volume = hull.volume();
    if box_volume == 0.0 {
        return Ok(VolumeEstimate {
            estimate: 0.0,
            stderr: 0.0,
            hits: 0,
            samples,
            box_volume,
        });
    }
    let chunks = samples.div_ceil(CHUNK);
    let hits: usize = (0..chunks)
        .into_par_iter()
        .map(|k| -> Result<usize, SetError> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let n = CHUNK.min(samples - k * CHUNK);
            let mut hits = 0;
            for _ in 0..n {
                if oracle.contains(&uniform_in_box(&mut rng, &hull))? {
                    hits += 1;
                }
            }
            Ok(hits)
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .sum();
    let p = hits as f64 / samples as f64;
    Ok(VolumeEstimate {
        estimate: p * box_volume,
        stderr: box_volume * (p * (1.0 - p) / samples as f64).sqrt(),
        hits,
        samples,
        box_volume,
    })
}

/// Rejection sampler over a fixed enclosure's interval hull.
pub struct UniformSampler<'a> {
    oracle: MembershipOracle<'a>,
    hull: IntervalVector,
}

impl<'a> UniformSampler<'a> {
    pub fn new(set: &'a SetEnclosure) -> Result<Self, SetError> {
        Ok(Self {
            oracle: MembershipOracle::new(set)?,
            hull: set.interval_hull()?,
        })
    }

    pub fn oracle(&self) -> &MembershipOracle<'a> {
        &self.oracle
    }

    /// One uniform point, giving up after `max_attempts` proposals.
    pub fn sample(
        &self,
        rng: &mut ChaCha8Rng,
        max_attempts: usize,
    ) -> Result<DVector<f64>, SetError> {
        for _ in 0..max_attempts {
            let z = uniform_in_box(rng, &self.hull);
            if self.oracle.contains(&z)? {
                return Ok(z);
            }
        }
        Err(SetError::RejectionBudgetExceeded {
            attempts: max_attempts,
        })
    }
}

/// `n` points drawn uniformly from the set by rejection over its interval
/// hull, giving up after `max_attempts` proposals in total.
pub fn sample_uniform(
    set: &SetEnclosure,
    n: usize,
    rng: &mut ChaCha8Rng,
    max_attempts: usize,
) -> Result<Vec<DVector<f64>>, SetError> {
    let sampler = UniformSampler::new(set)?;
    let mut out = Vec::with_capacity(n);
    let mut attempts = 0;
    while out.len() < n {
        if attempts >= max_attempts {
            return Err(SetError::RejectionBudgetExceeded { attempts });
        }
        attempts += 1;
        let z = uniform_in_box(rng, &sampler.hull);
        if sampler.oracle.contains(&z)? {
            out.push(z);
        }
    }
    Ok(out)
}
