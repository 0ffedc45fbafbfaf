//! Interpolation, quadrature and rotation estimation on the sphere from samples
//! at the self-intersection nodes of spherical Lissajous curves.

pub mod analysis;
pub mod curve;
pub mod error;
pub mod io;
pub mod nodes;
pub mod quadrature;
pub mod rotation;
pub mod spectral;
pub mod transform;
pub mod trig;

pub use curve::{CurveParams, FrequencyPair};
pub use error::{Error, Result};
pub use analysis::{ConvergenceRow, GridSpec};
pub use nodes::{IndexSet, NodeIndex, SphericalPoint};
pub use quadrature::QuadratureRule;
pub use rotation::{EulerAngles, EulerConvention, RotationProblem, SolverOptions, SolverReport};
pub use spectral::{SpectralClass, SpectralIndex, SpectralSet, Variant};
pub use transform::{Flavor, Interpolant, NodeData, Scheme};
