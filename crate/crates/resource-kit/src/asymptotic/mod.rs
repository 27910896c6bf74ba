//! Finite-n machinery behind the asymptotic claims: typicality, CQ
//! channel coding, decoder dilations, and desk-scale protocol runs.

pub mod cq;
pub mod coding;
pub mod dilation;
pub mod protocols;
pub mod types;

pub use coding::{build_code, covering_partition, Code, CoveringPartition, Povm};
pub use cq::{cq_from_state, mutual_info, CQChannel};
pub use dilation::{decoder_dilation, gentle_check, GentleReport};
pub use protocols::{simulate_distillation, simulate_formation, SimulationReport};
pub use types::{typical_set, SequenceSet};
