//! Computations for basic connected algebras given by an acyclic bound quiver:
//! fundamental groups of presentations, the Lie algebra HH¹ presented as
//! unitary derivations modulo inner ones, the embeddings θ_ν of additive
//! characters of π₁ into HH¹, the quiver Γ of homotopy relations, and a
//! harness relating maximal diagonalizable subalgebras to θ-images.

pub mod exactla;
pub mod quiver;
pub mod palg;
pub mod pi1;
pub mod hh1;
pub mod theta;
pub mod gamma;
pub mod dsl;
