//! Static 1+1 lattice spacetimes, causal relations and the two Lorentzian distance solvers.

mod eikonal;
mod lattice;
mod metric;
mod paths;
mod variational;
mod witness;

pub use eikonal::{eikonal_report, eikonal_residual, is_causal_function, metric_norm_central, EikonalReport};
pub use lattice::{Edge, LatticeSpacetime, Node, Topology};
pub use metric::{wrongway_cs_check, Metric, WrongWayReport};
pub use paths::{
    causal_order_matrix, causal_relation, lorentz_distance_paths, CausalKind, CausalRelationResult, FutureSweep,
    PastSweep, Reach,
};
pub use variational::{lorentz_distance_variational, lorentz_distance_variational_with, GridFunction, VariationalResult};
pub use witness::{equality_witness, EqualityWitness, WitnessCase, EIKONAL_THRESHOLD};
