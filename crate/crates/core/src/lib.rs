//! Lie group thermodynamics on SO(2) and SO(3).
//!
//! Koszul potentials on the rotation cone, the cocycles and Cartan splits of
//! so(2) ⊂ sl(2,ℝ) and so(3), the Souriau–Fisher metric with an explicit
//! convention sweep, the gradient and Hamiltonian flows on the cone, a Lax
//! pair verifier, and coadjoint orbit / Poisson structure checks.

pub mod dynamics;
pub mod error;
pub mod exact;
pub mod fisher;
pub mod lie;
pub mod linalg;
pub mod orbits;
pub mod quadrature;
pub mod thermo;

pub use error::{Error, Result};
pub use lie::{AlgebraName, GroupElement, GroupKind, GroupSweep, LieAlgebraSpec};
pub use linalg::{PairingConvention, SquareMatrix};
pub use thermo::{AlgebraCocycle, ConeElement, DualElement, EtaConvention, TwoCocycle};
