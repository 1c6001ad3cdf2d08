//! Boundary-slope bounds for Montesinos knots.
//!
//! Bounds come from two sources: twists of edgepath systems in the
//! Hatcher–Oertel diagram, and signed crossing counts of the standard diagram.

pub mod diagram;
pub mod edgepath;
pub mod enumerate;
pub mod montesinos;
pub mod rational;

pub use edgepath::{slope_bounds, DVertex, Edgepath, EdgepathSystem, SlopeBoundsReport};
pub use diagram::{Corner, OrientedTangleType, PlanarDiagram, Sign, TangleTypes};
pub use montesinos::{parse_expression, MontesinosExpression};
pub use rational::{farey_parents, ContinuedFraction, ExtendedFraction, Fraction};
