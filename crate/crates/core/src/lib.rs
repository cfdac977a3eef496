//! Finite frames generated by simple graphs.
//!
//! A graph's Laplacian factors as the Gramian of a frame: the Laplacian
//! frame, built from the nonzero Laplacian eigenpairs. This crate builds that
//! frame and analyzes how well it survives erasures of frame coefficients:
//!
//! - [`graph`]: edge-list ingestion, degree, adjacency and Laplacian matrices.
//! - [`linalg`]: Jacobi eigensolver, Moore-Penrose inverse, singular values,
//!   spectral norm, numerical rank, exact walk counts.
//! - [`walk`]: walk-regularity certification.
//! - [`frame`] and [`spark`]: frame construction, canonical and shifted
//!   duals, unitary-equivalence witnesses, spark.
//! - [`erasure`] and [`search`]: worst-case erasure errors, the optimal-dual
//!   verdict, and a seeded search over the dual family.
//! - [`cli`]: the `graphframe` command-line surface and its JSON/CSV/text
//!   reports.
//!
//! All arithmetic is real. Every matrix involved is real symmetric, so real
//! orthogonal eigenbases exist and nothing is lost relative to complex
//! scalars.

pub mod cli;
pub mod combin;
pub mod erasure;
pub mod error;
pub mod fixtures;
pub mod frame;
pub mod graph;
pub mod linalg;
pub mod matrix;
pub mod search;
pub mod spark;
pub mod walk;

pub use error::{Error, Result};
pub use frame::{build_lg_frame, DualCandidate, Frame, GraphFrameBundle};
pub use graph::Graph;
pub use linalg::SymmetricSpectrum;
pub use matrix::DenseMatrix;
