//! Limiting moments as sums over colored cycles on trees, plus the partition
//! oracle used to cross-check them.

pub mod cycles;
pub mod defect;
pub mod phi;
pub mod unfold;
pub mod weights;
pub mod ymodel;

pub use cycles::{enumerate_cycles, enumerate_cycles_with, ColoredCycleOnTree, EnumOptions};
pub use defect::{freeness_defect, freeness_defect_by, FreenessDefect};
pub use phi::{phi, phi_bruteforce, phi_bruteforce_with, phi_k, phi_k_bruteforce_with, phi_k_with, phi_with, DEFAULT_PARTITION_CAP};
pub use unfold::{unfold, unfold_fibers};
pub use weights::{hw_weight, traffic_weight, vertex_box};
pub use ymodel::{DiagonalMoments, DiagonalTraffic, HeavyWignerTraffic, TrafficOracle, YGraph, YModel};
