//! Local non-Sidorenko certificates: exact gradients, a heuristic witness
//! search whose output is always re-verified exactly, the perturbation
//! comparison over the edge-subset expansion, and two end-to-end demos.

mod certificate;
mod demo;
mod gradient;
mod optimizer;

pub use certificate::{nonsidorenko_certificate, NonSidorenkoCertificate};
pub use demo::{
    centered_tournament_density, cycle_demo, grid_demo, CycleReport, DecayRow, GridReport,
    ParityRow, VanishingSummary,
};
pub use gradient::{finite_difference, gradient, with_class_value, Gradient};
pub use optimizer::{minimize_density, MinimizeOptions, MinimizeResult};

#[cfg(test)]
mod tests;
