//! Synthetic block world: scripted tasks, noisy demonstrations, and an
//! environment the planner can execute against.

mod designs;
mod generate;
mod script;
mod world;

pub use designs::{
    drone, four_blocks, language_design, objects_design, random_script, reacher, stack_unstack, two_stacks, Preset,
};
pub use generate::{demonstrate, demos_for_orders, enumerate_demos, generate_demos};
pub use script::{
    match_targets, Motion, Noise, ObjectSpec, ScriptError, TargetSpec, TaskScript, WeightSpec, EXTENSION_CAP,
};
pub use world::{availability_oracle, BlockWorld, Position, Schedule, SimEnvironment, Window, FEATURES_PER_OBJECT};
