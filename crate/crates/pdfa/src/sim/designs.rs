//! Ready-made task scripts.

use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::script::{ObjectSpec, TargetSpec, TaskScript, WeightSpec};
use super::world::{Position, Window};

const TABLE: f64 = 0.025;
const BLOCK: f64 = 0.05;

fn object(name: &str, start: Position) -> ObjectSpec {
    ObjectSpec { name: name.to_string(), start }
}

fn target(object: usize, position: Position) -> TargetSpec {
    TargetSpec { object, position, radius: pdfa_core::RadiusPolicy::DEFAULT_RADIUS }
}

fn script(objects: Vec<ObjectSpec>, targets: Vec<TargetSpec>, constraints: Vec<[usize; 2]>) -> TaskScript {
    TaskScript {
        objects,
        targets,
        constraints,
        default_weight: 1.0,
        weights: Vec::new(),
        noise: Default::default(),
        motion: Default::default(),
        candidates: None,
        min_pts_per_demo: None,
        schedule: Vec::new(),
    }
}

/// Blocks lined up along the near edge of the table.
fn blocks(n: usize) -> Vec<ObjectSpec> {
    const NAMES: [&str; 5] = ["red", "green", "blue", "yellow", "white"];
    (0..n).map(|i| object(NAMES[i], [-0.4 + 0.2 * i as f64, -0.35, TABLE])).collect()
}

/// Four blocks, each placed at its own spot on the far side, in any order.
pub fn four_blocks() -> TaskScript {
    let targets = (0..4).map(|i| target(i, [-0.375 + 0.25 * i as f64, 0.25, TABLE])).collect();
    script(blocks(4), targets, Vec::new())
}

/// The four-block task constrained down to `orderings` admissible
/// orderings: 1, 2, 6 or 24.
pub fn language_design(orderings: usize) -> Option<TaskScript> {
    let constraints = match orderings {
        1 => vec![[0, 1], [1, 2], [2, 3]],
        2 => vec![[0, 1], [1, 2], [1, 3]],
        6 => vec![[0, 1], [2, 3]],
        24 => vec![],
        _ => return None,
    };
    Some(TaskScript { constraints, ..four_blocks() })
}

/// Two stacks of two blocks. Blocks 0 and 2 go on the table, blocks 1 and
/// 3 on top of them; demonstrators mostly build the right stack first.
pub fn two_stacks() -> TaskScript {
    let (left, right) = (-0.2, 0.2);
    let targets = vec![
        target(0, [left, 0.25, TABLE]),
        target(1, [left, 0.25, TABLE + BLOCK]),
        target(2, [right, 0.25, TABLE]),
        target(3, [right, 0.25, TABLE + BLOCK]),
    ];
    let weights = [
        ([2, 3, 0, 1], 8.0),
        ([2, 0, 3, 1], 4.0),
        ([0, 2, 3, 1], 2.0),
        ([2, 0, 1, 3], 1.0),
        ([0, 2, 1, 3], 1.0),
        ([0, 1, 2, 3], 1.0),
    ]
    .into_iter()
    .map(|(order, weight)| WeightSpec { order: order.to_vec(), weight })
    .collect();
    TaskScript {
        default_weight: 0.0,
        weights,
        // the second block of the preferred order is out of sight for two commands
        schedule: vec![Window { from: 1, to: 3, absent: vec![3] }],
        ..script(blocks(4), targets, vec![[0, 1], [2, 3]])
    }
}

/// Three blocks stacked, restacked elsewhere with top and bottom swapped,
/// and so on: `subgoals / 3` stacks, one fixed order. `subgoals` must be 3,
/// 6, 9 or 12.
pub fn stack_unstack(subgoals: usize) -> Option<TaskScript> {
    if subgoals == 0 || !subgoals.is_multiple_of(3) || subgoals > 12 {
        return None;
    }
    let mut targets = Vec::new();
    for round in 0..subgoals / 3 {
        let x = -0.375 + 0.25 * round as f64;
        let order = if round % 2 == 0 { [0, 1, 2] } else { [2, 1, 0] };
        for (level, &obj) in order.iter().enumerate() {
            targets.push(target(obj, [x, 0.25, TABLE + BLOCK * level as f64]));
        }
    }
    let constraints = (1..targets.len()).map(|i| [i - 1, i]).collect();
    Some(script(blocks(3), targets, constraints))
}

/// Five placements in a fixed order spread over `objects` blocks (1 to 5);
/// with fewer blocks, some are placed several times.
pub fn objects_design(objects: usize) -> Option<TaskScript> {
    if !(1..=5).contains(&objects) {
        return None;
    }
    let targets: Vec<TargetSpec> = (0..5).map(|k| target(k % objects, [-0.4 + 0.2 * k as f64, 0.25, TABLE])).collect();
    let constraints = (1..5).map(|i| [i - 1, i]).collect();
    Some(script(blocks(objects), targets, constraints))
}

/// A point robot visiting four waypoints, either clockwise or
/// counter-clockwise; the whole state is the single candidate subset.
pub fn drone() -> TaskScript {
    let targets = vec![
        target(0, [0.3, 0.0, 0.4]),
        target(0, [0.0, 0.3, 0.4]),
        target(0, [-0.3, 0.0, 0.4]),
        target(0, [0.0, -0.3, 0.4]),
    ];
    let mut s = circuit(object("drone", [0.0, 0.0, 0.05]), targets, Some(vec![vec![0, 1, 2]]));
    // transit above the waypoint altitude
    s.motion.via_low[2] = 0.6;
    s.motion.via_high[2] = 0.8;
    s
}

/// An arm tip touching four points on the axes in the plane, alternating
/// direction between demonstrations; clustered on x and y only.
pub fn reacher() -> TaskScript {
    let targets = vec![
        target(0, [0.4, 0.0, 0.0]),
        target(0, [0.0, 0.4, 0.0]),
        target(0, [-0.4, 0.0, 0.0]),
        target(0, [0.0, -0.4, 0.0]),
    ];
    let mut s = circuit(object("tip", [0.0, 0.0, 0.0]), targets, Some(vec![vec![0, 1]]));
    s.motion.via_low = [-0.6, -0.6, 0.0];
    s.motion.via_high = [0.6, 0.6, 0.0];
    // a plane fills up with transit points quickly: move in long strides
    // and ask for one point per demonstration before calling a region dense
    s.motion.step = 0.35;
    s.min_pts_per_demo = Some(1.0);
    s
}

fn circuit(obj: ObjectSpec, targets: Vec<TargetSpec>, candidates: Option<Vec<Vec<usize>>>) -> TaskScript {
    let weights = [[0, 1, 2, 3], [0, 3, 2, 1]]
        .into_iter()
        .map(|order| WeightSpec { order: order.to_vec(), weight: 1.0 })
        .collect();
    TaskScript { default_weight: 0.0, weights, candidates, ..script(vec![obj], targets, vec![[0, 1], [0, 2], [0, 3]]) }
}

/// Two to four blocks with one target each on a coarse grid, so targets
/// are at least 0.25 apart, and random precedence constraints.
pub fn random_script(seed: u64) -> TaskScript {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=4);
    let mut spots: Vec<Position> =
        (0..8).map(|k| [-0.375 + 0.25 * (k % 4) as f64, 0.1 + 0.25 * (k / 4) as f64, TABLE]).collect();
    spots.shuffle(&mut rng);
    let targets = (0..n).map(|i| target(i, spots[i])).collect();
    let mut rank: Vec<usize> = (0..n).collect();
    rank.shuffle(&mut rng);
    let mut constraints = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.3) {
                constraints.push([rank[i], rank[j]]);
            }
        }
    }
    script(blocks(n), targets, constraints)
}

/// Named scripts for the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    FourBlocks,
    TwoStacks,
    Language(usize),
    StackUnstack(usize),
    Objects(usize),
    Drone,
    Reacher,
}

impl Preset {
    pub fn script(self) -> TaskScript {
        match self {
            Preset::FourBlocks => four_blocks(),
            Preset::TwoStacks => two_stacks(),
            Preset::Language(n) => language_design(n).expect("checked when parsed"),
            Preset::StackUnstack(n) => stack_unstack(n).expect("checked when parsed"),
            Preset::Objects(n) => objects_design(n).expect("checked when parsed"),
            Preset::Drone => drone(),
            Preset::Reacher => reacher(),
        }
    }
}

impl FromStr for Preset {
    type Err = String;

    /// `four-blocks`, `two-stacks`, `language-N`, `stack-unstack-N`,
    /// `objects-N`, `drone`, `reacher`.
    fn from_str(s: &str) -> Result<Self, String> {
        let numbered = |prefix: &str| s.strip_prefix(prefix).and_then(|n| n.parse::<usize>().ok());
        let preset = match s {
            "four-blocks" => Some(Preset::FourBlocks),
            "two-stacks" => Some(Preset::TwoStacks),
            "drone" => Some(Preset::Drone),
            "reacher" => Some(Preset::Reacher),
            _ => {
                if let Some(n) = numbered("language-").filter(|&n| language_design(n).is_some()) {
                    Some(Preset::Language(n))
                } else if let Some(n) = numbered("stack-unstack-").filter(|&n| stack_unstack(n).is_some()) {
                    Some(Preset::StackUnstack(n))
                } else {
                    numbered("objects-").filter(|&n| objects_design(n).is_some()).map(Preset::Objects)
                }
            }
        };
        preset.ok_or_else(|| {
            format!(
                "unknown preset {s:?}; expected four-blocks, two-stacks, language-{{1,2,6,24}}, \
                 stack-unstack-{{3,6,9,12}}, objects-{{1..5}}, drone or reacher"
            )
        })
    }
}
