//! Exact lattice arithmetic over integral group rings.
//!
//! Everything here works over the rational integers with arbitrary precision
//! and no floating point: generalized module indices, minimal over- and maximal
//! sublattices for an over-order, maximal orders of group algebras and their
//! conductors, closed-form index formulas, and a certified search for free
//! sublattices of bounded index.
//!
//! Lattice basis vectors are matrix rows throughout; an element `g` of an
//! algebra acts on a row vector `v` as `v * R_g`, where row `i` of `R_g` is the
//! image of the `i`-th standard basis vector.
#![no_std]

extern crate alloc;

pub mod bounds;
pub mod error;
pub mod exactlin;
pub mod freesub;
pub mod grouprings;
pub mod groups;
pub mod lattices;
pub mod numtheory;
pub mod orders;

pub use error::{Error, Result};
pub use exactlin::RatMatrix;
pub use groups::FinGroup;
pub use grouprings::{GroupRingElement, WedderburnData};
pub use lattices::{ModuleAction, ModuleIndex, ZLattice};
pub use orders::OrderDesc;

pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;
