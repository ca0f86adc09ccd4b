use pdfa_core::{Corpus, Demonstration, WorldState};
use rand::distributions::WeightedIndex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use super::script::{Motion, Noise, ScriptError, TargetSpec, TaskScript};
use super::world::Position;

/// Demonstration `index` draws from its own stream, so results do not
/// depend on scheduling.
fn demo_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// `count` demonstrations, each following an ordering drawn with the
/// script's preference weights.
pub fn generate_demos(script: &TaskScript, count: usize, seed: u64) -> Result<Corpus, ScriptError> {
    if count == 0 {
        return Err(ScriptError::Invalid("at least one demonstration is required".into()));
    }
    script.validate()?;
    let weighted = script.weighted_extensions()?;
    let dist = WeightedIndex::new(weighted.iter().map(|(_, w)| *w)).expect("positive weights");
    let demos = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = demo_rng(seed, i);
            let order = &weighted[dist.sample(&mut rng)].0;
            demonstrate(script, order, &mut rng)
        })
        .collect();
    Ok(Corpus::new(script.num_features(), demos).expect("consistent dimension"))
}

/// Each admissible ordering exactly `weight` times, in lexicographic order.
/// Weights must be integers.
pub fn enumerate_demos(script: &TaskScript, seed: u64) -> Result<Corpus, ScriptError> {
    script.validate()?;
    let mut orders = Vec::new();
    for (order, w) in script.weighted_extensions()? {
        if w.fract() != 0.0 {
            return Err(ScriptError::FractionalWeight { order, weight: w });
        }
        orders.extend(std::iter::repeat_n(order, w as usize));
    }
    Ok(demos_for_orders(script, &orders, seed))
}

/// One demonstration per given ordering. Orderings are not checked
/// against the constraints.
pub fn demos_for_orders(script: &TaskScript, orders: &[Vec<usize>], seed: u64) -> Corpus {
    let demos =
        orders.par_iter().enumerate().map(|(i, order)| demonstrate(script, order, &mut demo_rng(seed, i))).collect();
    Corpus::new(script.num_features(), demos).expect("consistent dimension")
}

/// Rests, then moves one object at a time into its target ball in `order`,
/// dwelling there before the next move. Every step reports all objects
/// with jitter, each possibly undetected.
pub fn demonstrate<R: Rng>(script: &TaskScript, order: &[usize], rng: &mut R) -> Demonstration {
    let motion = &script.motion;
    let mut pos: Vec<Position> = script.objects.iter().map(|o| o.start).collect();
    let mut done = vec![false; script.targets.len()];
    let mut states = Vec::new();

    for _ in 0..motion.settle.max(1) {
        states.push(observe(&pos, &script.noise, rng));
    }
    for &t in order {
        let target = &script.targets[t];
        let object = target.object;
        let avoid: Vec<&TargetSpec> = script
            .targets
            .iter()
            .enumerate()
            .filter(|&(j, other)| other.object == object && j != t && !done[j])
            .map(|(_, other)| other)
            .collect();
        for p in route(motion, pos[object], target.position, &avoid, rng) {
            pos[object] = p;
            states.push(observe(&pos, &script.noise, rng));
        }
        done[t] = true;
        for _ in 1..motion.dwell {
            states.push(observe(&pos, &script.noise, rng));
        }
    }
    Demonstration::new(states).expect("at least one state")
}

/// Straight legs through a random via point, sampled every `step` from a
/// random phase and ending exactly on `to`. Via points are redrawn while
/// the path passes too close to a target the object still has to reach.
fn route<R: Rng>(motion: &Motion, from: Position, to: Position, avoid: &[&TargetSpec], rng: &mut R) -> Vec<Position> {
    const ATTEMPTS: usize = 64;
    let mut path = Vec::new();
    for _ in 0..ATTEMPTS {
        let via: Position = std::array::from_fn(|k| {
            let (lo, hi) = (motion.via_low[k], motion.via_high[k]);
            lo + (hi - lo) * rng.gen::<f64>()
        });
        let phase: f64 = rng.gen();
        path = sample_polyline(&[from, via, to], motion.step, phase);
        let clear = path[..path.len() - 1]
            .iter()
            .all(|p| avoid.iter().all(|t| distance(p, &t.position) > motion.clearance * t.radius));
        if clear {
            break;
        }
    }
    path
}

fn distance(a: &Position, b: &Position) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn sample_polyline(corners: &[Position], step: f64, phase: f64) -> Vec<Position> {
    let lengths: Vec<f64> = corners.windows(2).map(|w| distance(&w[0], &w[1])).collect();
    let total: f64 = lengths.iter().sum();
    let mut out = Vec::new();
    let mut s = (1.0 - phase) * step;
    let (mut seg, mut seg_start) = (0, 0.0);
    while s < total {
        while s > seg_start + lengths[seg] {
            seg_start += lengths[seg];
            seg += 1;
        }
        let f = if lengths[seg] > 0.0 { (s - seg_start) / lengths[seg] } else { 0.0 };
        let (a, b) = (corners[seg], corners[seg + 1]);
        out.push(std::array::from_fn(|k| a[k] + f * (b[k] - a[k])));
        s += step;
    }
    out.push(*corners.last().expect("non-empty"));
    out
}

fn observe<R: Rng>(pos: &[Position], noise: &Noise, rng: &mut R) -> WorldState {
    let jitter = (noise.sigma > 0.0).then(|| Normal::new(0.0, noise.sigma).expect("finite sigma"));
    let mut values = Vec::with_capacity(pos.len() * 3);
    for p in pos {
        let dropped = noise.dropout > 0.0 && rng.gen_bool(noise.dropout);
        for &v in p {
            let v = v + jitter.as_ref().map_or(0.0, |n| n.sample(rng));
            values.push((!dropped).then_some(v));
        }
    }
    WorldState::new(values).expect("finite")
}
