//! Quantitative description of the intervillous (value 0) phase of a mask:
//! exact distance map, watershed chambers, chamber adjacency network and
//! scalar morphometrics.
//!
//! Chambers and the phase boundary use 4-connectivity; chamber adjacency
//! uses 8-connectivity. The raster border always counts as villous wall.

mod distance;
mod metrics;
mod network;
mod watershed;

pub use distance::{distance_map, DistanceMap};
pub use metrics::{boundary_edge_count, interface_length, morphometrics, MorphometricsReport, RadiusHistogram};
pub use network::{extract_network, ChamberNetwork};
pub use watershed::{watershed_chambers, ChamberLabeling, DEFAULT_H_MIN};
