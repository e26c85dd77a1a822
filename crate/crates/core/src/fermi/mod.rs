//! Normal graphs over minimal surfaces: metric expansions, area estimates,
//! logarithmic cutoffs and the lowest Jacobi eigenpair.

mod cutoff;
mod graph;
mod jacobi;
mod jet;
mod tube_family;

pub use cutoff::{
    build_cutoff, build_cutoff_from_sources, cutoff_energy, eta, perimeter, perimeter_constant, CutoffField, Source,
};
pub use graph::{graph_area_estimate, graph_area_exact, EstimateConfig, GraphEstimate, NormalGraphField};
pub use jacobi::{jacobi_lowest, jacobi_lowest_with, JacobiConfig, JacobiData};
pub use jet::{
    det_and_inverse_expansion, expand, metric_jet, Expansion, JetExpansion, MetricJet, MinimalIdentities, TriangleJet,
};
pub use tube_family::{punctured_clifford, two_sided_area, two_sided_tube_family, PuncturedTorus, TubeFamilyConfig};
