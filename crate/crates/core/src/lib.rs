//! Abelian lattice conformal field theory at desk scale.
//!
//! Everything here is a pure computation on immutable values:
//!
//! - [`lattice`]: even positive-definite lattices, Smith normal form, the
//!   discriminant group with its bilinear and quadratic forms, Gauss sums.
//! - [`surface`]: combinatorial oriented surfaces, homology with coefficients
//!   in the discriminant group, intersection pairing, gluing.
//! - [`heisenberg`]: finite Heisenberg groups with exact phases, induced and
//!   Schrödinger representations, commutants, intertwiners.
//! - [`modular`]: conformal-block dimensions, factorization, S/T data, fusion,
//!   Verlinde sums, genus-one mapping class group relations.
//! - [`theta`]: theta functions with characteristics, the line-bundle action
//!   of the Heisenberg group, heat-equation residuals.
//! - [`fock`]: truncated Fock spaces, sector characters, annulus sewing,
//!   Bogoliubov vacuum overlaps.
//!
//! The crate is `no_std` with `alloc`; the `std` feature only adds
//! `std::error::Error` plumbing through `thiserror`.

#![no_std]

extern crate alloc;

#[cfg(feature = "std")]
extern crate std;

pub mod cyclotomic;
pub mod fock;
pub mod heisenberg;
pub mod intmat;
pub mod lattice;
pub mod linalg;
pub(crate) mod math;
pub mod modular;
pub mod phase;
pub mod surface;
pub mod theta;

pub use num_complex::Complex64;
pub use num_rational::Ratio;

/// Exact rational number used for phases, energies and forms.
pub type Rational = Ratio<i64>;

#[doc(inline)]
pub use self::{
    intmat::{smith_normal_form, BigMatrix, IntMatrix, SmithNormalForm},
    lattice::{DiscriminantGroup, EvenLattice, GroupElement, LatticeError},
    phase::Phase,
    surface::{BlockLabel, Orientation, Surface, SurfaceError},
};
