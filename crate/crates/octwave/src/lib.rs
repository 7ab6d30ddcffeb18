//! Numerical and semi-symbolic tools for massive wave propagation on the
//! octagonal compactification of Minkowski spacetime.
//!
//! The crate is organized around the geometry of the compactified spacetime
//! and its double-edge/scattering phase space:
//!
//! * [`compactify`] — interior-to-chart coordinate maps, boundary-defining
//!   functions and their derivatives, and the chart forms of the flat
//!   d'Alembertian;
//! * [`phase`] — fiber coordinate systems on the compactified cotangent
//!   bundle, the Klein–Gordon symbol in every chart, characteristic-set
//!   queries, and transitions between fiber charts;
//! * [`dynamics`] — the rescaled Hamiltonian vector field in its four chart
//!   forms, the radial-set catalogue, bicharacteristic flow with chart
//!   switching, fixed-point linearization, and order-of-vanishing checks;
//! * [`propagator`] — the exact d=3 advanced/retarded Klein–Gordon
//!   propagators, Bessel J₁, and the null-infinity tail asymptotics;
//! * [`hyperbolic`] — the hyperbolic-coordinate (Poincaré cylinder) side:
//!   the diffeomorphism into the cylinder, the e,sc-d'Alembertian, the
//!   oscillatory conjugation, and the term-by-term expansion recursion;
//! * [`solver1d`] — spectral and finite-difference solvers for the 1+1d
//!   Klein–Gordon IVP with decay-rate and profile measurements;
//! * [`thresholds`] — pure arithmetic evaluation of the propagation and
//!   radial-point order-threshold inequalities.
//!
//! Core geometry and symbol algebra are generic over the scalar type (any
//! `num_traits::Float`); the Hamiltonian displays and their Jacobians are
//! additionally generic over an exact ring so fixed-point data can be
//! evaluated in rational arithmetic. Concrete `f64` aliases live at the
//! crate root.

pub mod compactify;
pub mod dynamics;
pub mod error;
pub mod hyperbolic;
pub mod phase;
pub mod propagator;
pub mod scalar;
pub mod solver1d;
pub mod thresholds;

pub use error::OctError;

/// Concrete scalar used by the numerical front ends.
pub type Real = f64;

/// Chart identifier over `f64`.
pub type ChartId = compactify::ChartId<Real>;
/// Base-space point over `f64`.
pub type BasePoint = compactify::BasePoint<Real>;
/// Phase-space point over `f64`.
pub type PhasePoint = phase::PhasePoint<Real>;
/// Fiber chart identifier over `f64`.
pub type FiberChartId = phase::FiberChartId<Real>;
/// Symbol value over `f64`.
pub type SymbolValue = phase::SymbolValue<Real>;
