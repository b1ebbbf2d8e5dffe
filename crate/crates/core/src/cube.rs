//! Symmetric layer-rainbow latin cubes and mixed one-factorizations.
//!
//! A cube of order `n` has `n²` symbols, and every layer (fix one of the three
//! coordinates) contains each symbol once. It is symmetric when
//! `L[i][j][l] = L[j][l][i]` for distinct `i, j, l` and
//! `L[i][i][j] = L[j][j][i]`, `L[i][j][i] = L[j][i][j]`, `L[i][j][j] = L[j][i][i]`.
//! Symmetric cubes correspond to one-factorizations of
//! `C(X,1) ∪ 3·C(X,2) ∪ 2·C(X,3)` with `n²` classes.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hypergraph::{verify_one_factorization, Coloring, Edge, Hypergraph};
use crate::report::{Violation, ViolationReport};

/// Largest order accepted by [`find_mixed_factorization`] by default.
pub const DEFAULT_CAP: u32 = 7;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatinCube {
    n: u32,
    entries: Vec<u32>,
}

impl LatinCube {
    /// A cube with every cell set to 0 (no symbol).
    pub fn blank(n: u32) -> Self {
        LatinCube {
            n,
            entries: vec![0; (n * n * n) as usize],
        }
    }

    /// `entries[i][j][l]` holds `L_{i+1, j+1, l+1}`.
    pub fn from_layers(entries: &[Vec<Vec<u32>>]) -> Result<Self> {
        let n = entries.len() as u32;
        let mut cube = LatinCube::blank(n);
        for (i, layer) in entries.iter().enumerate() {
            if layer.len() != n as usize || layer.iter().any(|row| row.len() != n as usize) {
                return Err(Error::InvalidInstance(format!(
                    "layer {} is not {n}×{n}",
                    i + 1
                )));
            }
            for (j, row) in layer.iter().enumerate() {
                for (l, &s) in row.iter().enumerate() {
                    cube.set(i as u32 + 1, j as u32 + 1, l as u32 + 1, s);
                }
            }
        }
        Ok(cube)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    fn index(&self, i: u32, j: u32, l: u32) -> usize {
        let n = self.n as usize;
        ((i - 1) as usize * n + (j - 1) as usize) * n + (l - 1) as usize
    }

    /// `L_{ijl}`, 1-based.
    pub fn get(&self, i: u32, j: u32, l: u32) -> u32 {
        self.entries[self.index(i, j, l)]
    }

    pub fn set(&mut self, i: u32, j: u32, l: u32, symbol: u32) {
        let at = self.index(i, j, l);
        self.entries[at] = symbol;
    }

    pub fn layers(&self) -> Vec<Vec<Vec<u32>>> {
        let n = self.n;
        (1..=n)
            .map(|i| {
                (1..=n)
                    .map(|j| (1..=n).map(|l| self.get(i, j, l)).collect())
                    .collect()
            })
            .collect()
    }
}

/// A one-factorization of `C(X,1) ∪ 3·C(X,2) ∪ 2·C(X,3)`, `X = {1..n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedFactorization {
    n: u32,
    coloring: Coloring,
}

impl MixedFactorization {
    /// Wraps classes without checking them; see [`verify_mixed`].
    pub fn new(n: u32, classes: Vec<Hypergraph>) -> Result<Self> {
        Ok(MixedFactorization {
            n,
            coloring: Coloring::from_classes(n, classes)?,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn coloring(&self) -> &Coloring {
        &self.coloring
    }

    pub fn classes(&self) -> &[Hypergraph] {
        self.coloring.classes()
    }
}

/// `C(X,1) ∪ 3·C(X,2) ∪ 2·C(X,3)`.
pub fn mixed_host(n: u32) -> Hypergraph {
    let mut h = Hypergraph::new(n);
    for e in support_edges(n) {
        h.add(e, demand(&e)).expect("vertices in range");
    }
    h
}

fn demand(e: &Edge) -> u32 {
    match e.len() {
        1 => 1,
        2 => 3,
        _ => 2,
    }
}

/// Singletons, then pairs, then triples of `1..=n`, each in lexicographic order.
fn support_edges(n: u32) -> Vec<Edge> {
    let mut out: Vec<Edge> = (1..=n).map(Edge::single).collect();
    for i in 1..=n {
        for j in i + 1..=n {
            out.push(Edge::pair(i, j));
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            for l in j + 1..=n {
                out.push(Edge::triple(i, j, l));
            }
        }
    }
    out
}

pub fn verify_mixed(mf: &MixedFactorization) -> Result<(), ViolationReport> {
    let mut report = ViolationReport::new();
    let n = mf.n;
    let expected = mixed_host(n);
    let found = mf.coloring.host();
    for (e, m) in found.iter() {
        if expected.mult(e) == 0 {
            report.push(Violation::HostMismatch {
                edge: *e,
                expected: 0,
                found: m,
            });
        }
    }
    for (e, m) in expected.iter() {
        if found.mult(e) != m {
            report.push(Violation::HostMismatch {
                edge: *e,
                expected: m,
                found: found.mult(e),
            });
        }
    }
    if mf.coloring.k() != n * n {
        report.push(Violation::Other("a mixed factorization needs n² classes"));
    }
    if let Err(r) = verify_one_factorization(&mf.coloring) {
        report.violations.extend(r.violations);
    }
    report.into_result()
}

/// Fills the cube from the classes, with copy colors in ascending order.
pub fn build_cube(mf: &MixedFactorization) -> Result<LatinCube> {
    verify_mixed(mf).map_err(Error::InvalidFactorization)?;
    let n = mf.n;
    let mut colors: BTreeMap<Edge, Vec<u32>> = BTreeMap::new();
    for (color, class) in mf.coloring.iter() {
        for e in class.instances() {
            colors.entry(e).or_default().push(color);
        }
    }
    let mut cube = LatinCube::blank(n);
    for (e, cs) in &colors {
        match *e.vertices() {
            [i] => cube.set(i, i, i, cs[0]),
            [i, j] => {
                let (c, c1, c2) = (cs[0], cs[1], cs[2]);
                cube.set(i, i, j, c);
                cube.set(j, j, i, c);
                cube.set(i, j, i, c1);
                cube.set(j, i, j, c1);
                cube.set(j, i, i, c2);
                cube.set(i, j, j, c2);
            }
            [i, j, l] => {
                for (a, b, d) in [(i, j, l), (j, l, i), (l, i, j)] {
                    cube.set(a, b, d, cs[0]);
                }
                for (a, b, d) in [(i, l, j), (l, j, i), (j, i, l)] {
                    cube.set(a, b, d, cs[1]);
                }
            }
            _ => unreachable!("edges have one to three vertices"),
        }
    }
    Ok(cube)
}

/// Checks every layer along each axis and both symmetry conditions.
pub fn verify(cube: &LatinCube) -> Result<(), ViolationReport> {
    let mut report = ViolationReport::new();
    let n = cube.n;
    let symbols = n * n;
    for i in 1..=n {
        for j in 1..=n {
            for l in 1..=n {
                let s = cube.get(i, j, l);
                if s == 0 || s > symbols {
                    report.push(Violation::Entry {
                        cell: [i, j, l],
                        symbol: s,
                    });
                }
            }
        }
    }
    for axis in 0..3u8 {
        for index in 1..=n {
            let mut count = vec![0u32; symbols as usize + 1];
            for a in 1..=n {
                for b in 1..=n {
                    let cell = match axis {
                        0 => [index, a, b],
                        1 => [a, index, b],
                        _ => [a, b, index],
                    };
                    let s = cube.get(cell[0], cell[1], cell[2]);
                    if s >= 1 && s <= symbols {
                        count[s as usize] += 1;
                    }
                }
            }
            for symbol in 1..=symbols {
                if count[symbol as usize] != 1 {
                    report.push(Violation::Layer {
                        axis,
                        index,
                        symbol,
                        count: count[symbol as usize],
                    });
                }
            }
        }
    }
    let mut same = |a: [u32; 3], b: [u32; 3]| {
        if cube.get(a[0], a[1], a[2]) != cube.get(b[0], b[1], b[2]) {
            report.push(Violation::Symmetry { cell: a, other: b });
        }
    };
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            if i < j {
                same([i, i, j], [j, j, i]);
                same([i, j, i], [j, i, j]);
                same([i, j, j], [j, i, i]);
            }
            for l in 1..=n {
                if l != i && l != j {
                    same([i, j, l], [j, l, i]);
                }
            }
        }
    }
    report.into_result()
}

/// The cells `L_{ijl}` whose index set is `{i, j, l} = support`.
fn orbit_cells(e: &Edge) -> Vec<[u32; 3]> {
    match *e.vertices() {
        [i] => vec![[i, i, i]],
        [i, j] => vec![
            [i, i, j],
            [j, j, i],
            [i, j, i],
            [j, i, j],
            [j, i, i],
            [i, j, j],
        ],
        [i, j, l] => vec![
            [i, j, l],
            [j, l, i],
            [l, i, j],
            [i, l, j],
            [l, j, i],
            [j, i, l],
        ],
        _ => Vec::new(),
    }
}

/// Sorted symbols of the cells over each support: one cell for `{i}`, six
/// for a pair or triple.
pub fn support_profile(cube: &LatinCube) -> BTreeMap<Edge, Vec<u32>> {
    support_edges(cube.n)
        .into_iter()
        .map(|e| {
            let mut s: Vec<u32> = orbit_cells(&e)
                .iter()
                .map(|c| cube.get(c[0], c[1], c[2]))
                .collect();
            s.sort_unstable();
            (e, s)
        })
        .collect()
}

/// Groups cells by symbol: each orbit of symmetric cells contributes its
/// support as one edge of that symbol's class.
pub fn collapse(cube: &LatinCube) -> Result<MixedFactorization> {
    verify(cube).map_err(Error::InvalidColoring)?;
    let n = cube.n;
    let mut classes = vec![Hypergraph::new(n); (n * n) as usize];
    for e in support_edges(n) {
        let cells = orbit_cells(&e);
        // Orbits are runs of one, two or three cells with equal symbols.
        let run = match e.len() {
            1 => 1,
            2 => 2,
            _ => 3,
        };
        for orbit in cells.chunks(run) {
            let s = cube.get(orbit[0][0], orbit[0][1], orbit[0][2]);
            classes[s as usize - 1].add(e, 1)?;
        }
    }
    MixedFactorization::new(n, classes)
}

/// Whether `n²` partitions of `{1..n}` can hold the `2·C(n,3)` triple copies,
/// given that at most `n` of them contain a singleton.
///
/// Fails for `n = 4` and every `n ≡ 1 (mod 3)` from 7 on, where no mixed
/// one-factorization exists.
pub fn triple_count_admits(n: u32) -> bool {
    let n = n as u64;
    let needed = 2 * crate::binomial(n, 3);
    let with_singleton = n.saturating_sub(1) / 3;
    // Most triples in a partition into blocks of sizes 2 and 3.
    let without = (0..=n / 3).rev().find(|a| (n - 3 * a).is_multiple_of(2));
    let capacity = match without {
        Some(a) => (n * n - n) * a + n * with_singleton.max(a),
        None => n * with_singleton,
    };
    needed <= capacity
}

/// Exact-cover search for a mixed one-factorization of order `n ≤ cap`.
///
/// Options are the set partitions of `{1..n}` into blocks of size at most 3.
/// Each branch picks the uncovered edge with the fewest usable options and
/// chooses, as a nondecreasing multiset, the options that cover its
/// remaining copies.
pub fn find_mixed_factorization(n: u32, cap: u32, max_nodes: u64) -> Result<MixedFactorization> {
    if n > cap {
        return Err(Error::CapExceeded(format!("order {n} exceeds cap {cap}")));
    }
    if n == 0 {
        return Err(Error::InvalidSize("order must be positive".into()));
    }
    if !triple_count_admits(n) {
        return Err(Error::NotFound);
    }
    let edges = support_edges(n);
    let index: BTreeMap<Edge, usize> = edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let mut all: Vec<Vec<Edge>> = Vec::new();
    partitions(n, 0, &mut Vec::new(), &mut |parts: &[Edge]| {
        all.push(parts.to_vec())
    });
    let options = all
        .iter()
        .map(|p| p.iter().map(|e| (index[e], 1)).collect())
        .collect();
    let mut search = CoverSearch::new(options, edges.iter().map(demand).collect(), max_nodes);
    if !search.run()? {
        return Err(Error::NotFound);
    }
    let classes = search
        .chosen
        .iter()
        .map(|&o| class_of(n, &all[o]))
        .collect::<Result<_>>()?;
    MixedFactorization::new(n, classes)
}

fn class_of(n: u32, blocks: &[Edge]) -> Result<Hypergraph> {
    let mut class = Hypergraph::new(n);
    for e in blocks {
        class.add(*e, 1)?;
    }
    Ok(class)
}

/// Calls `emit` with every partition of `{1..n}` into blocks of size ≤ 3.
fn partitions(n: u32, used: u64, blocks: &mut Vec<Edge>, emit: &mut impl FnMut(&[Edge])) {
    let Some(first) = (1..=n).find(|v| used >> v & 1 == 0) else {
        emit(blocks);
        return;
    };
    let free: Vec<u32> = (first + 1..=n).filter(|v| used >> v & 1 == 0).collect();
    let used = used | 1 << first;
    blocks.push(Edge::single(first));
    partitions(n, used, blocks, emit);
    blocks.pop();
    for (a, &x) in free.iter().enumerate() {
        blocks.push(Edge::pair(first, x));
        partitions(n, used | 1 << x, blocks, emit);
        blocks.pop();
        for &y in &free[a + 1..] {
            blocks.push(Edge::triple(first, x, y));
            partitions(n, used | 1 << x | 1 << y, blocks, emit);
            blocks.pop();
        }
    }
}

/// Multiset exact cover: each option adds fixed amounts to some items, and
/// every item must reach its demand exactly.
struct CoverSearch {
    options: Vec<Vec<(usize, u32)>>,
    demand: Vec<u32>,
    chosen: Vec<usize>,
    nodes: u64,
    max_nodes: u64,
}

impl CoverSearch {
    fn new(options: Vec<Vec<(usize, u32)>>, demand: Vec<u32>, max_nodes: u64) -> Self {
        CoverSearch {
            options,
            demand,
            chosen: Vec::new(),
            nodes: 0,
            max_nodes,
        }
    }

    fn usable(&self, o: usize) -> bool {
        self.options[o].iter().all(|&(i, c)| self.demand[i] >= c)
    }

    fn take(&mut self, o: usize) {
        for &(i, c) in &self.options[o] {
            self.demand[i] -= c;
        }
        self.chosen.push(o);
    }

    fn undo(&mut self) {
        let o = self.chosen.pop().expect("an option to undo");
        for &(i, c) in &self.options[o] {
            self.demand[i] += c;
        }
    }

    fn covers(&self, o: usize, item: usize) -> bool {
        self.options[o].iter().any(|&(i, _)| i == item)
    }

    fn run(&mut self) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Error::CapExceeded(format!(
                "exact cover passed {} nodes",
                self.max_nodes
            )));
        }
        let usable: Vec<usize> = (0..self.options.len())
            .filter(|&o| self.usable(o))
            .collect();
        let mut best: Option<(usize, usize)> = None;
        for (item, &d) in self.demand.iter().enumerate() {
            if d == 0 {
                continue;
            }
            let count = usable.iter().filter(|&&o| self.covers(o, item)).count();
            if count == 0 {
                return Ok(false);
            }
            if best.is_none_or(|(_, c)| count < c) {
                best = Some((item, count));
            }
        }
        let Some((item, _)) = best else {
            return Ok(true);
        };
        let candidates: Vec<usize> = usable
            .into_iter()
            .filter(|&o| self.covers(o, item))
            .collect();
        self.cover_item(item, &candidates, 0)
    }

    /// Chooses options for the remaining copies of `item`, in nondecreasing
    /// order starting at `candidates[from]`.
    fn cover_item(&mut self, item: usize, candidates: &[usize], from: usize) -> Result<bool> {
        if self.demand[item] == 0 {
            return self.run();
        }
        for at in from..candidates.len() {
            let o = candidates[at];
            if !self.usable(o) {
                continue;
            }
            self.take(o);
            if self.cover_item(item, candidates, at)? {
                return Ok(true);
            }
            self.undo();
        }
        Ok(false)
    }
}
