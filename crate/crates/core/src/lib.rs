//! Geometry of the Bianchi-Cartan-Vranceanu spaces `N_{κ,τ}` and numerical
//! diagnostics for biconservative surfaces immersed in them.
//!
//! The crate is organised bottom-up:
//!
//! - [`ambient`]: metric, frame, connection, Ricci tensor and the Hopf
//!   fibration of `N_{κ,τ}`;
//! - [`immersion`]: jets, shape operators and structure-equation residuals of
//!   parametric surfaces;
//! - [`biconservative`]: tangential and normal bitension components and the
//!   constant-angle specializations;
//! - [`rotation`]: the rotationally equivariant reduction, profile ODEs and
//!   surface constructors;
//! - [`verify`]: the fixed registry of verification suites.

pub mod ambient;
pub mod biconservative;
pub mod error;
pub mod immersion;
pub mod rotation;
pub mod verify;

pub use ambient::{AmbientPoint, BcvParams, ConnectionMode, GeometryClass, TangentVector};
pub use biconservative::{BitensionResiduals, QuarticReport};
pub use error::{Error, Result};
pub use immersion::{ParamDomain, ParametricSurface, ScalarField, ShapeData, SurfaceJet};
pub use rotation::{IntegrationConfig, ProfileState, ReducedCoefficients};
