//! Extending edge colorings of complete 3-uniform multi-hypergraphs.
//!
//! `λ·C(X,3)` denotes every 3-subset of `X` repeated `λ` times. Given a
//! coloring of `λ·C(X,3)` with `k = λ·C(|Y|-1, 2)` colors, this crate decides
//! and constructs extensions to a one-factorization of `λ·C(Y,3)` through the
//! amalgamate / list-color / detach pipeline:
//!
//! 1. collapse `Y \ X` to a single amalgamated vertex `α`;
//! 2. color the pairs `λ(|Y|-|X|)·C(X,2)` (one per `αuv` edge) from lists,
//!    meeting per-color lower bounds ([`list_color`]);
//! 3. fill in the `α²u` and `α³` edges so every class has the right shape;
//! 4. split `α` back into `|Y|-|X|` vertices ([`detach`]).
//!
//! The crate also carries chromatic-index formulas and minimum colorings
//! ([`factorize`]), the Evans-type embedding ([`evans`]), symmetric
//! layer-rainbow latin cubes ([`cube`]) and brute-force oracles ([`oracle`]).
//!
//! Vertices are 1-based; ground sets are always `1..=n`, with `X = 1..=|X|`
//! embedded in `Y = 1..=|Y|`. Colors are 1-based as well.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cube;
pub mod detach;
pub mod error;
pub mod evans;
pub mod extension;
pub mod factorize;
mod flow;
pub mod hypergraph;
pub mod list_color;
pub mod oracle;
pub mod report;

pub use error::{Error, Infeasibility, Result};
pub use hypergraph::{complete_triples, Coloring, Edge, Hypergraph, VertexId};
pub use report::{Violation, ViolationReport};

/// `C(n, k)` for the small arguments used throughout. Returns 0 when `k > n`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}
