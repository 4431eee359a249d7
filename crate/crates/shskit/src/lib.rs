//! Computable torus-invariant stable Hamiltonian structures (SHS) on
//! planar profile curves.
//!
//! A torus-invariant SHS on `[a,b] x T^2` is encoded by a pair of plane
//! curves `(h, g)`: the 2-form is `d(h_1 dtheta + h_2 dphi)` and the
//! stabilizing 1-form is `g_1 dtheta + g_2 dphi`, subject to
//! `<g', i h'> = 0` and `<g, i h'> > 0`. This crate makes the resulting
//! theory computable:
//!
//! * [`curve`] — profile curves, slopes, angle lifts, winding numbers;
//! * [`shs`] — verification, proportionality, deformation bounds,
//!   helicity data, Reeb dynamics on invariant tori;
//! * [`stabilize`] — constructive synthesis of stabilizers `g`;
//! * [`homotopy`] — stable homotopies, the length functional, and
//!   symplectic cobordisms from short homotopies;
//! * [`monotone`] — monotone homotopies of curves and the
//!   symplectization embedding;
//! * [`catalog`] — named example pairs and the sign/winding
//!   classification.
//!
//! # Example
//!
//! ```
//! use shskit::curve::ProfileCurve;
//! use shskit::shs::{verify, ShsPair};
//!
//! // The standard contact sphere: h = g = (r^2, 1 - r^2).
//! let h = ProfileCurve::standard(1.0, (0.0, 1.0));
//! let pair = ShsPair::new(h.clone(), h).unwrap();
//! let report = verify(&pair).unwrap();
//! assert!(report.ok);
//! ```

pub mod catalog;
pub mod curve;
pub mod error;
mod exotic_data;
pub mod geom;
pub mod homotopy;
pub mod monotone;
pub mod num;
pub mod shs;
pub mod stabilize;

pub use error::{Error, Result};
