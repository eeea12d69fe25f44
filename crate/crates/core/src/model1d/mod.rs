//! One-dimensional model operators: the interval with a point δ-interaction,
//! the half-line inverse-square operator, and their tensor-product lower bound
//! for the cone.

pub mod delta;
pub mod inverse_square;
pub mod ode;
pub mod tensor;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use delta::{
    delta_interval_ground, delta_interval_spectrum, delta_interval_spectrum_extrapolated, dirichlet_ground_energy,
    threshold_decay, IntervalDeltaProblem, IntervalSpectrum, SecularSolution, ThresholdDecay,
};
pub use inverse_square::{inverse_square_count, inverse_square_counts, InverseSquareProblem};
pub use tensor::{tensor_lower_bound_count, TensorBound};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryCondition::Dirichlet => "dirichlet",
            BoundaryCondition::Neumann => "neumann",
        })
    }
}

impl FromStr for BoundaryCondition {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "dirichlet" | "d" => Ok(BoundaryCondition::Dirichlet),
            "neumann" | "n" => Ok(BoundaryCondition::Neumann),
            other => Err(format!("unknown boundary condition `{other}`")),
        }
    }
}
