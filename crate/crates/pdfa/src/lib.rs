//! File formats, a block-world simulator, scaling benchmarks and the
//! command-line front end around [`pdfa_core`].

pub mod bench;
pub mod io;
pub mod pipeline;
pub mod sim;

pub use pdfa_core as core;
