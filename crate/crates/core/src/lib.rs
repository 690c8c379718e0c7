//! Entanglement-structure witnesses for graph states.
//!
//! The crate covers the whole pipeline from a graph to a verdict:
//!
//! * [`graph`]: graphs, standard families, colorings, local complementation;
//! * [`gf2`]: bit matrices and GF(2) rank;
//! * [`partition`]: qubit partitions and their block bipartitions;
//! * [`entropy`]: cut entropies and the `C_min`, `C_max`, `C_m` constants;
//! * [`witness`]: witness construction, evaluation and noise thresholds;
//! * [`oracle`]: exact dense state-vector and density-matrix checks;
//! * [`sim`]: shot-based sampling of the local measurement settings.

pub mod entropy;
pub mod error;
pub mod gf2;
pub mod graph;
pub mod oracle;
pub mod partition;
pub mod rational;
pub mod sim;
pub mod witness;

pub use entropy::{BoundReport, CmBound, CutEntropy};
pub use error::{Error, Result};
pub use gf2::BitMatrix;
pub use graph::{Coloring, Family, Graph};
pub use partition::Partition;
pub use rational::Rational;
pub use sim::{ExperimentRecord, MeasurementSetting, SimOptions};
pub use witness::{Context, Estimate, Verdict, Witness, WitnessKind};

use std::sync::OnceLock;

/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "ENTWIT_THREADS";

/// Shared worker pool, sized by `ENTWIT_THREADS` when set to a positive
/// integer.
pub(crate) fn pool() -> &'static rayon::ThreadPool {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let threads = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()).unwrap_or(0);
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool")
    })
}
