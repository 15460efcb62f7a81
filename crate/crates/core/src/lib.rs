// Copyright 2026 The oplattice Authors
// SPDX-License-Identifier: Apache-2.0

//! Matrix-scale quantum foundations.
//!
//! Observables are Hermitian matrices, states are density operators, and the
//! structures built on them (spectral measures, the projector lattice,
//! commutants, symmetry groups, GNS representations) are computed explicitly
//! with dense linear algebra. Every construction comes with an independent
//! check path so that theorems that are decidable at matrix scale can be
//! verified numerically.

pub mod algebras;
pub mod ccr;
pub mod dynamics;
pub mod error;
pub mod gns;
pub mod json;
pub mod lattice;
pub mod linalg;
pub mod random;
pub mod spectral;
pub mod states;

pub use algebras::MatrixStarAlgebra;
pub use dynamics::SymmetryOperator;
pub use error::{Error, ErrorClass, Result};
pub use gns::{AbstractStarAlgebra, AlgebraicState, GNSTriple};
pub use lattice::Projector;
pub use linalg::{CMatrix, CVector, EigenSystem, HermitianOperator, UnitaryOperator, C64};
pub use spectral::ProjectorValuedMeasure;
pub use states::{DensityState, PureStateVector};
