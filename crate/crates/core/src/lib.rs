//! Optimal dimensional synthesis of spherical four-bar linkages for path
//! generation, with prescribed or free input timing, driven by
//! Differential Evolution.

pub mod de;
pub mod error;
pub mod fixtures;
pub mod mechanism;
pub mod objective;
pub mod so3;

pub use error::{Error, Result};
pub use mechanism::{grashof_check, joint_point, Branch, JointCoords, Pose, SphericalFourBar};
pub use so3::{GeodesicArc, Rotation, UnitVector3};
