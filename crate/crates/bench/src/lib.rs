//! Benchmark fixtures shared by the criterion benches.

use mcdef::artin::ArtinAlgebra;
use mcdef::samples::{rng, Cdga, LieAlgebra, tensor_dgla};
use mcdef::{Dgla, Field, SparseMatrix};

pub fn square_matrix(n: usize, seed: u64) -> SparseMatrix {
    mcdef::samples::random_matrix(&mut rng(seed), n, n, Field::Rationals)
}

pub fn obstructed_dgla() -> Dgla {
    tensor_dgla(&LieAlgebra::heis3(), &Cdga::exterior2(Field::Rationals))
}

pub fn truncated(order: usize) -> ArtinAlgebra {
    ArtinAlgebra::univariate(order + 1, Field::Rationals).expect("valid order")
}
