//! Floating-point machinery: regularised volumes, flows, Moser and the
//! homotopy operator.

pub mod dense;
pub mod fastpoly;
pub mod flow;
pub mod homotopy;
pub mod liouville;
pub mod moser;
pub mod quadrature;

pub use fastpoly::{FastPoly, FastSing};
pub use flow::{integrate_flow, AmbientField, FlowOptions, FlowResult, TimeDependentField};
pub use homotopy::{homotopy_q, numeric_d, AmbientForm, NumForm};
pub use liouville::{defining_function_independence, liouville_volume, taylor_split_volume, IndependenceReport, LiouvilleOptions, QuadratureReport};
pub use moser::{default_check_points, is_primitive, moser_convergence, moser_vector_field, verify_moser, ConvergenceReport, MoserField, MoserReport};
