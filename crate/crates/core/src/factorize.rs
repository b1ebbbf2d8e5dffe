//! Chromatic index and minimum colorings of `λ·C(Y,3)`.
//!
//! A class holds at most `⌊|Y|/3⌋` disjoint triples, so at least
//! `⌈λ·C(|Y|,3) / ⌊|Y|/3⌋⌉` colors are needed. [`min_coloring`] meets that
//! bound: pile all triples onto one vertex `α` as copies of `α³`, spread them
//! over the colors as evenly as possible, and detach `α` into `|Y|` vertices.

use alloc::format;

use crate::binomial;
use crate::detach::{detach, DetachmentTask};
use crate::error::{Error, Result};
use crate::hypergraph::{Coloring, Edge};

/// Residues that select the branch of the chromatic-index formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChromaticCase {
    pub ny_mod3: u32,
    pub ny_mod6: u32,
    pub lambda_mod2: u32,
    pub value: u64,
}

/// `⌈λ·C(n,3) / ⌊n/3⌋⌉`.
pub fn counting_bound(ny: u32, lambda: u32) -> u64 {
    (lambda as u64 * binomial(ny as u64, 3)).div_ceil(ny as u64 / 3)
}

pub fn chromatic_case(ny: u32, lambda: u32) -> ChromaticCase {
    let (n, l) = (ny as u64, lambda as u64);
    let value = match ny % 3 {
        0 => l * binomial(n - 1, 2),
        2 => l * binomial(n, 2),
        _ if ny % 6 == 4 || lambda.is_multiple_of(2) => l * n * (n - 2) / 2,
        _ => (l * n * n - 2 * l * n).div_ceil(2),
    };
    debug_assert_eq!(value, counting_bound(ny, lambda));
    ChromaticCase {
        ny_mod3: ny % 3,
        ny_mod6: ny % 6,
        lambda_mod2: lambda % 2,
        value,
    }
}

/// Minimum number of colors in a proper coloring of `λ·C(Y,3)`; `ny ≥ 3`.
pub fn chromatic_index(ny: u32, lambda: u32) -> u64 {
    chromatic_case(ny, lambda).value
}

/// Whether some minimum coloring has pairwise isomorphic classes; fails only
/// for `|Y| ≡ 1 (mod 6)` with `λ` odd.
pub fn isomorphic_classes_possible(ny: u32, lambda: u32) -> bool {
    !(ny % 6 == 1 && lambda % 2 == 1)
}

#[derive(Clone, Debug)]
pub struct MinColoringTrace {
    pub task: DetachmentTask,
    pub coloring: Coloring,
}

/// A proper `chromatic_index(ny, λ)`-coloring of `λ·C({1..ny},3)` whose class
/// sizes differ by at most one.
pub fn min_coloring(ny: u32, lambda: u32) -> Result<Coloring> {
    min_coloring_traced(ny, lambda).map(|t| t.coloring)
}

pub fn min_coloring_traced(ny: u32, lambda: u32) -> Result<MinColoringTrace> {
    if ny < 3 {
        return Err(Error::InvalidSize(format!(
            "need at least 3 vertices, got {ny}"
        )));
    }
    if lambda == 0 {
        return Err(Error::InvalidSize("multiplicity must be positive".into()));
    }
    let k = chromatic_index(ny, lambda);
    let total = lambda as u64 * binomial(ny as u64, 3);
    let cap = ny as u64 / 3;
    let mut amalgamated = Coloring::empty(1, k as u32);
    for j in 0..k {
        let copies = total / k + u64::from(j < total % k);
        if copies > cap {
            return Err(Error::Internal(format!(
                "class {} would need {copies} > {cap} triples",
                j + 1
            )));
        }
        amalgamated.add_edge(j as u32 + 1, Edge::triple(1, 1, 1), copies as u32)?;
    }
    let task = DetachmentTask::even(amalgamated, 1, ny)?;
    let coloring = detach(&task)?;
    Ok(MinColoringTrace { task, coloring })
}

/// A one-factorization of `λ·C({1..ny},3)`; exists iff `3 | ny`.
pub fn baranyai_factorization(ny: u32, lambda: u32) -> Result<Coloring> {
    if !ny.is_multiple_of(3) {
        return Err(Error::NotDivisible { n: ny });
    }
    min_coloring(ny, lambda)
}
