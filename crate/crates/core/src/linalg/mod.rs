//! Self-contained linear algebra and quadrature used by the oracles.

mod jacobi;
mod legendre;
mod quadrature;
mod tridiag;

pub use jacobi::{dense_sym_eigen, dense_sym_eigenvalues, DenseEigen, SymDenseMatrix};
pub use legendre::{legendre_eval, legendre_values};
pub use quadrature::{gauss_legendre_rule, gl32, integrate_graded, QuadratureRule};
pub use tridiag::{tridiag_eigen, SymTridiagonal, TridiagEigen};
