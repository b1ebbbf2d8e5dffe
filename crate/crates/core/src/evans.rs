//! Embedding a partial `q`-coloring of a sub-multiset of `λ·C(X,3)` into a
//! one-factorization of `λ·C(Y,3)` when `|Y| ≥ 3|X|`.
//!
//! The missing triples of `X` are colored with the spare colors
//! `q+1..k` by detaching `λ·C(|X|,3)` copies of `α³` (at most `⌊|X|/3⌋` per
//! color) into `X`, dropping the copies already present in `F`. The resulting
//! full coloring of `λ·C(X,3)` then satisfies the class-size bound, so
//! [`extend`](crate::extension::extend) finishes the job.

use alloc::format;
use alloc::vec::Vec;

use crate::binomial;
use crate::detach::{detach, DetachmentTask};
use crate::error::{Error, Result};
use crate::extension::{extend_traced, factor_count, ExtensionInstance, ExtensionTrace};
use crate::hypergraph::{complete_triples, verify_proper, Coloring, Edge};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialInstance {
    pub nx: u32,
    pub ny: u32,
    pub lambda: u32,
    pub q: u32,
    /// Proper coloring with `q` classes of a sub-multiset of `λ·C(X,3)`.
    pub f: Coloring,
}

impl PartialInstance {
    pub fn new(nx: u32, ny: u32, lambda: u32, q: u32, f: Coloring) -> Result<Self> {
        if nx < 3 || lambda == 0 {
            return Err(Error::InvalidInstance(format!("|X| = {nx}, λ = {lambda}")));
        }
        if f.ground() > nx {
            return Err(Error::InvalidInstance(format!(
                "coloring lives on {} vertices, |X| = {nx}",
                f.ground()
            )));
        }
        let f = f.with_ground(nx)?.padded(q)?;
        if !complete_triples(nx, lambda)?.contains(f.host()) {
            return Err(Error::InvalidInstance(format!(
                "F is not contained in {lambda}·C({nx},3)"
            )));
        }
        if f.host().iter().any(|(e, _)| e.len() != 3) {
            return Err(Error::InvalidInstance("F may only contain triples".into()));
        }
        verify_proper(&f)?;
        Ok(PartialInstance {
            nx,
            ny,
            lambda,
            q,
            f,
        })
    }
}

/// Largest `q` with `q ≤ λ·C(|Y|−1,2) − λ·C(|X|,3)/⌊|X|/3⌋`.
pub fn evans_bound(nx: u32, ny: u32, lambda: u32) -> i64 {
    let k = lambda as i64 * binomial(ny as u64 - 1, 2) as i64;
    let triples = lambda as u64 * binomial(nx as u64, 3);
    k - triples.div_ceil(nx as u64 / 3) as i64
}

#[derive(Clone, Debug)]
pub struct EvansTrace {
    pub task: DetachmentTask,
    /// `F` together with the spare-colored remainder: a proper
    /// `k`-coloring of `λ·C(X,3)`.
    pub full: Coloring,
    pub extension: ExtensionTrace,
}

pub fn evans_embed(inst: &PartialInstance) -> Result<Coloring> {
    evans_embed_traced(inst).map(|t| t.extension.factorization)
}

pub fn evans_embed_traced(inst: &PartialInstance) -> Result<EvansTrace> {
    let PartialInstance {
        nx, ny, lambda, q, ..
    } = *inst;
    if ny < 3 * nx {
        return Err(Error::PreconditionViolated(format!(
            "|Y| = {ny} < 3|X| = {}",
            3 * nx
        )));
    }
    if ny % 3 != 0 {
        return Err(Error::PreconditionViolated(format!(
            "|Y| = {ny} is not divisible by 3"
        )));
    }
    let bound = evans_bound(nx, ny, lambda);
    if q as i64 > bound {
        return Err(Error::PreconditionViolated(format!(
            "q = {q} exceeds {bound}"
        )));
    }

    let k = factor_count(ny, lambda);
    let spare = (k - q) as u64;
    let total = lambda as u64 * binomial(nx as u64, 3);
    let mut amalgamated = Coloring::empty(1, k);
    for s in 0..spare {
        let copies = total / spare + u64::from(s < total % spare);
        amalgamated.add_edge(q + 1 + s as u32, Edge::triple(1, 1, 1), copies as u32)?;
    }
    let task = DetachmentTask::even(amalgamated, 1, nx)?;
    let detached = detach(&task)?;

    // Overlay: every triple keeps λ − mult_F copies from the detached
    // coloring, dropping from the lowest colors first.
    let mut full = inst.f.clone().padded(k)?;
    for (t, _) in complete_triples(nx, lambda)?.iter() {
        let mut skip = inst.f.host().mult(t);
        for (color, class) in detached.iter() {
            let mut copies = class.mult(t);
            let dropped = skip.min(copies);
            skip -= dropped;
            copies -= dropped;
            if copies > 0 {
                full.add_edge(color, *t, copies)?;
            }
        }
    }
    verify_proper(&full)
        .map_err(|e| Error::Internal(format!("overlaid coloring is not proper: {e}")))?;
    let cap = (nx / 3) as u64;
    if let Some(i) = (q + 1..=k).find(|&i| full.class(i).size() > cap) {
        return Err(Error::Internal(format!(
            "spare class {i} exceeds ⌊|X|/3⌋ triples"
        )));
    }

    let ext = ExtensionInstance::new(nx, ny, lambda, full.clone())?;
    let extension = extend_traced(&ext).map_err(|e| match e {
        Error::Infeasible(why) => {
            Error::Internal(format!("extension failed under the embedding bound: {why}"))
        }
        other => other,
    })?;
    Ok(EvansTrace {
        task,
        full,
        extension,
    })
}

/// Classes of `inst.f` contained in the matching classes of `out`.
pub fn preserves_colors(inst: &PartialInstance, out: &Coloring) -> bool {
    out.contains_classwise(&inst.f)
}

/// All `q`-colorings to try in exhaustive checks: every proper placement of
/// the given triples into colors `1..=q` (copies of one triple in distinct,
/// increasing colors).
pub fn all_placements(triples: &[Edge], nx: u32, q: u32) -> Vec<Coloring> {
    let mut out = Vec::new();
    let mut current = Coloring::empty(nx, q);
    place(triples, 0, 1, q, &mut current, &mut out);
    out
}

fn place(
    triples: &[Edge],
    at: usize,
    floor: u32,
    q: u32,
    cur: &mut Coloring,
    out: &mut Vec<Coloring>,
) {
    if at == triples.len() {
        out.push(cur.clone());
        return;
    }
    let t = triples[at];
    let start = if at > 0 && triples[at - 1] == t {
        floor
    } else {
        1
    };
    for color in start..=q {
        if cur.class(color).iter().any(|(e, _)| !e.is_disjoint(&t)) {
            continue;
        }
        let mut next = cur.clone();
        next.add_edge(color, t, 1).expect("color in range");
        place(triples, at + 1, color + 1, q, &mut next, out);
    }
}
