//! Exhaustive ground truth for tiny instances.
//!
//! Both searches fill color classes in order. Each step covers the lowest
//! uncovered vertex of the current class with a remaining triple, so every
//! class is generated once per edge set. There is no other pruning.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::binomial;
use crate::error::{Error, Result};
use crate::extension::ExtensionInstance;
use crate::hypergraph::{Coloring, Edge};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest host, counted with multiplicity.
    pub max_edges: u64,
    pub max_nodes: u64,
    /// Only read by [`enumerate_factorizations`].
    pub max_results: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_edges: 60,
            max_nodes: 50_000_000,
            max_results: 100_000,
        }
    }
}

struct Filler {
    n: u32,
    triples: Vec<(Edge, u64)>,
    through: Vec<Vec<usize>>,
    remaining: Vec<u32>,
    classes: Vec<Vec<usize>>,
    masks: Vec<u64>,
    nodes: u64,
    limits: Limits,
    canonical: bool,
    found: Vec<Vec<Vec<usize>>>,
    stop_at_first: bool,
}

impl Filler {
    fn new(n: u32, lambda: u32, k: u32, limits: Limits) -> Self {
        let mut triples = Vec::new();
        for a in 1..=n {
            for b in a + 1..=n {
                for c in b + 1..=n {
                    triples.push((Edge::triple(a, b, c), 1u64 << a | 1 << b | 1 << c));
                }
            }
        }
        let mut through = vec![Vec::new(); n as usize + 1];
        for (i, (e, _)) in triples.iter().enumerate() {
            for &v in e.vertices() {
                through[v as usize].push(i);
            }
        }
        Filler {
            n,
            remaining: vec![lambda; triples.len()],
            triples,
            through,
            classes: vec![Vec::new(); k as usize],
            masks: vec![0; k as usize],
            nodes: 0,
            limits,
            canonical: false,
            found: Vec::new(),
            stop_at_first: true,
        }
    }

    fn full(&self) -> u64 {
        ((1u64 << self.n) - 1) << 1
    }

    fn index_of(&self, e: &Edge) -> Option<usize> {
        self.triples.iter().position(|(t, _)| t == e)
    }

    /// Returns `true` to stop the search.
    fn fill(&mut self, class: usize) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.limits.max_nodes {
            return Err(Error::CapExceeded(format!(
                "search passed {} nodes",
                self.limits.max_nodes
            )));
        }
        if class == self.classes.len() {
            if self.remaining.iter().any(|&r| r > 0) {
                return Ok(false);
            }
            self.found.push(self.classes.clone());
            if self.found.len() > self.limits.max_results {
                return Err(Error::CapExceeded(format!(
                    "more than {} factorizations",
                    self.limits.max_results
                )));
            }
            return Ok(self.stop_at_first);
        }
        let mask = self.masks[class];
        if mask == self.full() {
            if self.canonical && class > 0 && self.sorted(class) < self.sorted(class - 1) {
                return Ok(false);
            }
            return self.fill(class + 1);
        }
        let v = (!mask & self.full()).trailing_zeros() as usize;
        for at in 0..self.through[v].len() {
            let t = self.through[v][at];
            let tm = self.triples[t].1;
            if self.remaining[t] == 0 || tm & mask != 0 {
                continue;
            }
            self.remaining[t] -= 1;
            self.masks[class] |= tm;
            self.classes[class].push(t);
            let stop = self.fill(class)?;
            self.classes[class].pop();
            self.masks[class] = mask;
            self.remaining[t] += 1;
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn sorted(&self, class: usize) -> Vec<usize> {
        let mut c = self.classes[class].clone();
        c.sort_unstable();
        c
    }

    fn coloring(&self, classes: &[Vec<usize>]) -> Result<Coloring> {
        let mut c = Coloring::empty(self.n, classes.len() as u32);
        for (i, class) in classes.iter().enumerate() {
            for &t in class {
                c.add_edge(i as u32 + 1, self.triples[t].0, 1)?;
            }
        }
        Ok(c)
    }
}

/// Searches every way to complete the classes of `inst` into perfect
/// matchings of `{1..ny}` using the triples of `λ·C(Y,3)` outside `F`.
///
/// `Ok(None)` only after the search space is exhausted.
pub fn brute_extend(inst: &ExtensionInstance, limits: Limits) -> Result<Option<Coloring>> {
    let (ny, lambda) = (inst.ny(), inst.lambda());
    let size = lambda as u64 * binomial(ny as u64, 3);
    if size > limits.max_edges {
        return Err(Error::CapExceeded(format!(
            "{size} edge instances exceed {}",
            limits.max_edges
        )));
    }
    if ny > 62 {
        return Err(Error::CapExceeded(format!("{ny} vertices")));
    }
    let mut filler = Filler::new(ny, lambda, inst.k(), limits);
    for (color, class) in inst.coloring().iter() {
        let i = color as usize - 1;
        for e in class.instances() {
            let t = filler
                .index_of(&e)
                .ok_or_else(|| Error::InvalidInstance(format!("{e} is not a triple of Y")))?;
            if filler.remaining[t] == 0 {
                return Err(Error::InvalidInstance(format!(
                    "{e} occurs more than λ times"
                )));
            }
            filler.remaining[t] -= 1;
            filler.masks[i] |= filler.triples[t].1;
        }
    }
    let base = inst.coloring().clone().with_ground(ny)?;
    if !filler.fill(0)? {
        return Ok(None);
    }
    let added = filler.coloring(&filler.found[0])?;
    let mut witness = base;
    for (color, class) in added.iter() {
        for (e, m) in class.iter() {
            witness.add_edge(color, *e, m)?;
        }
    }
    Ok(Some(witness))
}

/// All one-factorizations of `λ·C({1..ny},3)` in search order.
///
/// With `canonical`, classes are listed in nondecreasing order, giving one
/// representative per color permutation.
pub fn enumerate_factorizations(
    ny: u32,
    lambda: u32,
    limits: Limits,
    canonical: bool,
) -> Result<Vec<Coloring>> {
    if ny < 3 || lambda == 0 {
        return Err(Error::InvalidSize(format!("|Y| = {ny}, λ = {lambda}")));
    }
    if !ny.is_multiple_of(3) {
        return Ok(Vec::new());
    }
    let size = lambda as u64 * binomial(ny as u64, 3);
    if size > limits.max_edges {
        return Err(Error::CapExceeded(format!(
            "{size} edge instances exceed {}",
            limits.max_edges
        )));
    }
    let k = lambda * binomial(ny as u64 - 1, 2) as u32;
    let mut filler = Filler::new(ny, lambda, k, limits);
    filler.canonical = canonical;
    filler.stop_at_first = false;
    filler.fill(0)?;
    filler.found.iter().map(|f| filler.coloring(f)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::extend;
    use crate::hypergraph::verify_one_factorization;

    fn f_single(colors: &[u32], k: u32) -> Coloring {
        let mut c = Coloring::empty(3, k);
        for &i in colors {
            c.add_edge(i, Edge::triple(1, 2, 3), 1).unwrap();
        }
        c
    }

    #[test]
    fn finds_witness_for_single_triple() {
        let inst = ExtensionInstance::new(3, 6, 1, f_single(&[1], 10)).unwrap();
        let w = brute_extend(&inst, Limits::default()).unwrap().unwrap();
        assert!(verify_one_factorization(&w).is_ok());
        assert_eq!(w.class(1).mult(&Edge::triple(4, 5, 6)), 1);
    }

    #[test]
    fn agrees_with_pipeline_on_doubled_host() {
        for (a, b) in [(1, 2), (3, 17), (19, 20)] {
            let inst = ExtensionInstance::new(3, 6, 2, f_single(&[a, b], 20)).unwrap();
            let w = brute_extend(&inst, Limits::default()).unwrap().unwrap();
            assert!(verify_one_factorization(&w).is_ok());
            assert!(w.contains_classwise(inst.coloring()));
            assert!(extend(&inst).is_ok());
        }
    }

    #[test]
    fn enumeration_counts() {
        let all = enumerate_factorizations(6, 1, Limits::default(), true).unwrap();
        assert_eq!(all.len(), 1);
        assert!(verify_one_factorization(&all[0]).is_ok());
        assert_eq!(
            enumerate_factorizations(3, 1, Limits::default(), true)
                .unwrap()
                .len(),
            1
        );
        assert_eq!(
            enumerate_factorizations(3, 2, Limits::default(), false)
                .unwrap()
                .len(),
            1
        );
        assert!(enumerate_factorizations(5, 1, Limits::default(), true)
            .unwrap()
            .is_empty());
        let few = Limits {
            max_results: 100,
            ..Limits::default()
        };
        assert!(matches!(
            enumerate_factorizations(6, 1, few, false),
            Err(Error::CapExceeded(_))
        ));
    }

    #[test]
    fn size_cap() {
        let inst = ExtensionInstance::new(3, 9, 1, f_single(&[1], 28)).unwrap();
        assert!(matches!(
            brute_extend(&inst, Limits::default()),
            Err(Error::CapExceeded(_))
        ));
    }

    #[test]
    fn six_into_nine_has_no_witness() {
        let inst = ExtensionInstance::new(6, 9, 1, crate::extension::tests::complementary_pairs())
            .unwrap();
        let limits = Limits {
            max_edges: 84,
            max_nodes: u64::MAX,
            ..Limits::default()
        };
        assert_eq!(brute_extend(&inst, limits).unwrap(), None);
    }
}
