//! Topological representations of matroids.
//!
//! Given a matroid `M` (as its geometric lattice of flats), a rank- and
//! order-reversing map `ℓ` and a finite simplicial complex `X`, the
//! [`arrangement`] module builds the diagram `D_p = ∗_{i∈ℓ(p)} X` over `M`,
//! realizes its homotopy colimit as a prism cell complex `Y`, and checks
//! that `Y` together with the sub-colimits over `M_{≥a}` for atoms `a` is
//! an arrangement of copies of joins of `X` whose intersection lattice is
//! `M`. Homotopy types are certified through exact reduced Betti numbers,
//! dimensions and discrete Morse matchings.

pub mod arrangement;
pub mod cell;
pub mod error;
pub mod hocolim;
pub mod homology;
pub mod linalg;
pub mod matroid;
pub mod morse;
pub mod poset;
pub mod simplicial;

pub use cell::{Cell, CellComplex};
pub use error::{Error, Result};
pub use homology::{betti, join_betti, wedge_betti, BettiVector, Field};
pub use matroid::{ell_default, ell_flag, EllMap, GeometricLattice};
pub use poset::FinitePoset;
pub use simplicial::{Simplex, SimplicialComplex, StandardSpace};
