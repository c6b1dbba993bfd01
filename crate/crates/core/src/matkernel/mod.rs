//! Dense complex matrices and the Hermitian eigensolver the rest of the crate is built on.

mod eigen;
mod io;
mod matrix;

pub use eigen::{herm_eig, spectrum_of_product_pos, sqrt_psd, top_eigenpair, HermEigResult};
pub use io::{format_complex, format_real, parse_complex, parse_matrix, write_matrix};
pub use matrix::ComplexMatrix;
