//! Small self-contained numerical kernels.

mod diff;
mod eigen;
mod linalg;
mod quadrature;
mod roots;
pub mod series;

pub use diff::{fd_derivative, fd_gradient, fd_hessian, FdOrder, FdResult};
pub use eigen::{is_positive_definite, sym_eigenvalues, SmallSymMatrix};
pub use linalg::{cholesky, complex_det, inverse, least_squares, solve, SmallMatrix};
pub use quadrature::{integrate, integrate_detailed, QuadratureResult, QuadratureSpec};
pub use roots::{find_root, find_root_detailed, RootResult};
pub use series::{Scalar, Series};

pub use num_complex::Complex64;
