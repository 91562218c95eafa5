//! Graph convexity and metric-dimension toolkit: geodetic sets, strong
//! metric dimension via the strong resolving graph, exact small-instance
//! solvers, and a polynomial reduction from three-dimensional matching
//! to geodetic set, together with a mixed-search certification layer.

pub mod convexity;
pub mod enumerate;
pub mod graph;
pub mod instances;
pub mod io;
pub mod reductions;
pub mod smd;
pub mod solver;
