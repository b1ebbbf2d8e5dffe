//! Exact list edge coloring of multigraphs with per-color lower bounds on the
//! class sizes.
//!
//! Copies of one pair share a single list and are interchangeable, so the
//! search branches on *(pair, color)* decisions: either one more copy of the
//! pair takes the color, or the color is struck from the pair's list. Every
//! multiset of colorings is visited at most once.
//!
//! Pruning uses, for each color with unmet quota, the size of a maximum
//! matching among the uncolored pairs that may still take it.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Infeasibility, Result};
use crate::hypergraph::{Coloring, Edge, Hypergraph};
use crate::report::{Violation, ViolationReport};

/// Admissible colors per pair type; all copies of a pair share one list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ListAssignment {
    k: u32,
    lists: BTreeMap<Edge, BTreeSet<u32>>,
}

impl ListAssignment {
    pub fn new(k: u32) -> Self {
        ListAssignment {
            k,
            lists: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, edge: Edge, colors: impl IntoIterator<Item = u32>) -> Result<()> {
        if edge.len() != 2 || !edge.is_loopless() {
            return Err(Error::InvalidEdge(format!("{edge} is not a pair")));
        }
        let colors: BTreeSet<u32> = colors.into_iter().collect();
        if let Some(&c) = colors.iter().find(|&&c| c == 0 || c > self.k) {
            return Err(Error::InvalidInstance(format!(
                "color {c} outside 1..={}",
                self.k
            )));
        }
        self.lists.insert(edge, colors);
        Ok(())
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn get(&self, edge: &Edge) -> Option<&BTreeSet<u32>> {
        self.lists.get(edge)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Edge, &BTreeSet<u32>)> + '_ {
        self.lists.iter()
    }

    pub fn min_len(&self) -> usize {
        self.lists.values().map(BTreeSet::len).min().unwrap_or(0)
    }
}

/// Lower bounds on class sizes, one per color.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotaVector(Vec<u32>);

impl QuotaVector {
    pub fn new(q: Vec<u32>) -> Self {
        QuotaVector(q)
    }

    pub fn zeros(k: u32) -> Self {
        QuotaVector(vec![0; k as usize])
    }

    pub fn k(&self) -> u32 {
        self.0.len() as u32
    }

    /// Quota of a 1-based color.
    pub fn get(&self, color: u32) -> u32 {
        self.0[color as usize - 1]
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&x| x as u64).sum()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }
}

/// Proof that no admissible coloring meets the quotas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InfeasibilityCertificate {
    /// The quotas ask for more edges than exist.
    QuotaSum { sum: u64, edges: u64 },
    /// Every class of `color` is a matching inside the pairs listing it, so
    /// its size is at most `capacity < quota`.
    ColorCapacity {
        color: u32,
        quota: u32,
        capacity: u32,
    },
    /// A pair has copies but an empty list.
    EmptyList { edge: Edge },
    /// The complete search visited `nodes` nodes without a solution.
    SearchExhausted { nodes: u64 },
}

impl fmt::Display for InfeasibilityCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::QuotaSum { sum, edges } => write!(f, "quotas sum to {sum} > {edges} edges"),
            Self::ColorCapacity {
                color,
                quota,
                capacity,
            } => {
                write!(f, "color {color} has quota {quota} but capacity {capacity}")
            }
            Self::EmptyList { edge } => write!(f, "pair {edge} has an empty list"),
            Self::SearchExhausted { nodes } => write!(f, "search exhausted after {nodes} nodes"),
        }
    }
}

fn infeasible(cert: InfeasibilityCertificate) -> Error {
    Error::Infeasible(Infeasibility::ListColoring(cert))
}

/// `μ·n`: lists of this size always admit a coloring of `μ·C(n,2)`.
pub fn hj_threshold(mu: u64, n: u64) -> u64 {
    mu * n
}

/// Size of a maximum matching; `adj[x]` is a neighbor bitmask.
fn max_matching(adj: &[u64], avail: u64) -> u32 {
    // Drop isolated vertices first.
    let mut live = 0u64;
    let mut bits = avail;
    while bits != 0 {
        let x = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        if adj[x] & avail != 0 {
            live |= 1 << x;
        }
    }
    if live == 0 {
        return 0;
    }
    let x = live.trailing_zeros() as usize;
    let rest = live & !(1 << x);
    let mut best = max_matching(adj, rest);
    let ceiling = live.count_ones() / 2;
    let mut nbrs = adj[x] & rest;
    while nbrs != 0 && best < ceiling {
        let y = nbrs.trailing_zeros() as usize;
        nbrs &= nbrs - 1;
        best = best.max(1 + max_matching(adj, rest & !(1 << y)));
    }
    best
}

const EXACT_MATCHING_LIMIT: usize = 24;

struct PairType {
    edge: Edge,
    u: usize,
    v: usize,
    remaining: u32,
    allowed: Vec<bool>,
}

struct Search<'a> {
    k: usize,
    nv: usize,
    types: Vec<PairType>,
    used: Vec<Vec<bool>>,
    size: Vec<u32>,
    quota: &'a [u32],
    chosen: Vec<(usize, usize)>,
    nodes: u64,
}

impl Search<'_> {
    fn admissible(&self, t: usize, c: usize) -> bool {
        let ty = &self.types[t];
        ty.allowed[c] && !self.used[ty.u][c] && !self.used[ty.v][c]
    }

    fn admissible_count(&self, t: usize) -> u32 {
        (1..=self.k).filter(|&c| self.admissible(t, c)).count() as u32
    }

    fn deficit(&self, c: usize) -> u32 {
        self.quota[c - 1].saturating_sub(self.size[c])
    }

    /// Upper bound on how many more edges color `c` can take.
    fn capacity(&self, c: usize) -> u32 {
        let live: Vec<usize> = (0..self.types.len())
            .filter(|&t| self.types[t].remaining > 0 && self.admissible(t, c))
            .collect();
        if self.nv <= EXACT_MATCHING_LIMIT {
            let mut adj = vec![0u64; self.nv];
            for &t in &live {
                let ty = &self.types[t];
                adj[ty.u] |= 1 << ty.v;
                adj[ty.v] |= 1 << ty.u;
            }
            max_matching(&adj, (1u64 << self.nv) - 1)
        } else {
            let mut touched = BTreeSet::new();
            for &t in &live {
                touched.insert(self.types[t].u);
                touched.insert(self.types[t].v);
            }
            (live.len() as u32).min(touched.len() as u32 / 2)
        }
    }

    fn promising(&self) -> bool {
        let remaining: u64 = self.types.iter().map(|t| t.remaining as u64).sum();
        let deficit: u64 = (1..=self.k).map(|c| self.deficit(c) as u64).sum();
        if deficit > remaining {
            return false;
        }
        for t in 0..self.types.len() {
            if self.types[t].remaining > self.admissible_count(t) {
                return false;
            }
        }
        // Edges still to color at a vertex need distinct free colors there.
        for x in 0..self.nv {
            let load: u32 = self
                .types
                .iter()
                .filter(|t| t.u == x || t.v == x)
                .map(|t| t.remaining)
                .sum();
            if load == 0 {
                continue;
            }
            let free = (1..=self.k)
                .filter(|&c| {
                    (0..self.types.len()).any(|t| {
                        let ty = &self.types[t];
                        (ty.u == x || ty.v == x) && ty.remaining > 0 && self.admissible(t, c)
                    })
                })
                .count() as u32;
            if free < load {
                return false;
            }
        }
        (1..=self.k).all(|c| {
            let d = self.deficit(c);
            d == 0 || self.capacity(c) >= d
        })
    }

    fn run(&mut self) -> bool {
        self.nodes += 1;
        if !self.promising() {
            return false;
        }
        // Most constrained pair first.
        let Some(t) = (0..self.types.len())
            .filter(|&t| self.types[t].remaining > 0)
            .min_by_key(|&t| (self.admissible_count(t), t))
        else {
            return (1..=self.k).all(|c| self.deficit(c) == 0);
        };
        // Largest unmet quota first, then smallest color.
        let c = (1..=self.k)
            .filter(|&c| self.admissible(t, c))
            .min_by_key(|&c| (core::cmp::Reverse(self.deficit(c)), c))
            .expect("promising() guarantees an admissible color");

        let (u, v) = (self.types[t].u, self.types[t].v);
        self.types[t].remaining -= 1;
        self.used[u][c] = true;
        self.used[v][c] = true;
        self.size[c] += 1;
        self.chosen.push((t, c));
        if self.run() {
            return true;
        }
        self.chosen.pop();
        self.size[c] -= 1;
        self.used[u][c] = false;
        self.used[v][c] = false;
        self.types[t].remaining += 1;

        self.types[t].allowed[c] = false;
        let found = self.run();
        self.types[t].allowed[c] = true;
        found
    }
}

/// A proper coloring of the pair multigraph `h` drawing every color from the
/// edge's list and giving color `i` at least `q[i]` edges.
///
/// Infeasibility is reported as [`Error::Infeasible`] carrying an
/// [`InfeasibilityCertificate`]; the search is exhaustive, so a
/// `SearchExhausted` certificate proves that no coloring exists.
pub fn solve(h: &Hypergraph, gamma: &ListAssignment, q: &QuotaVector) -> Result<Coloring> {
    let k = gamma.k();
    if q.k() != k {
        return Err(Error::InvalidInstance(format!(
            "{} quotas for {k} colors",
            q.k()
        )));
    }
    let mut vertex_index = BTreeMap::new();
    let mut types = Vec::new();
    for (e, m) in h.iter() {
        if e.len() != 2 || !e.is_loopless() {
            return Err(Error::InvalidEdge(format!("{e} is not a pair")));
        }
        let list = gamma
            .get(e)
            .ok_or_else(|| Error::InvalidInstance(format!("pair {e} has no list")))?;
        let mut idx = |x: u32| {
            let next = vertex_index.len();
            *vertex_index.entry(x).or_insert(next)
        };
        let (u, v) = (idx(e.vertices()[0]), idx(e.vertices()[1]));
        let mut allowed = vec![false; k as usize + 1];
        for &c in list {
            allowed[c as usize] = true;
        }
        types.push(PairType {
            edge: *e,
            u,
            v,
            remaining: m,
            allowed,
        });
    }

    let edges = h.size();
    if q.total() > edges {
        return Err(infeasible(InfeasibilityCertificate::QuotaSum {
            sum: q.total(),
            edges,
        }));
    }
    if let Some(t) = types.iter().find(|t| !t.allowed.contains(&true)) {
        return Err(infeasible(InfeasibilityCertificate::EmptyList {
            edge: t.edge,
        }));
    }

    let nv = vertex_index.len();
    let mut search = Search {
        k: k as usize,
        nv,
        types,
        used: vec![vec![false; k as usize + 1]; nv],
        size: vec![0; k as usize + 1],
        quota: q.as_slice(),
        chosen: Vec::new(),
        nodes: 0,
    };
    for c in 1..=k {
        let quota = q.get(c);
        if quota > 0 {
            let capacity = search.capacity(c as usize);
            if capacity < quota {
                return Err(infeasible(InfeasibilityCertificate::ColorCapacity {
                    color: c,
                    quota,
                    capacity,
                }));
            }
        }
    }
    if !search.run() {
        return Err(infeasible(InfeasibilityCertificate::SearchExhausted {
            nodes: search.nodes,
        }));
    }
    let mut out = Coloring::empty(h.ground(), k);
    for &(t, c) in &search.chosen {
        out.add_edge(c as u32, search.types[t].edge, 1)?;
    }
    Ok(out)
}

/// Checks that `c` colors exactly `h`, properly, from the lists, meeting the
/// quotas.
pub fn verify(
    h: &Hypergraph,
    gamma: &ListAssignment,
    q: &QuotaVector,
    c: &Coloring,
) -> Result<(), ViolationReport> {
    let mut report = ViolationReport::new();
    let keys: BTreeSet<Edge> = h.iter().chain(c.host().iter()).map(|(e, _)| *e).collect();
    for e in keys {
        let (expected, found) = (h.mult(&e), c.host().mult(&e));
        if expected != found {
            report.push(Violation::HostMismatch {
                edge: e,
                expected,
                found,
            });
        }
    }
    for (color, class) in c.iter() {
        let inst: Vec<Edge> = class.instances().collect();
        for (a, ea) in inst.iter().enumerate() {
            for eb in &inst[a + 1..] {
                if !ea.is_disjoint(eb) {
                    report.push(Violation::Conflict {
                        color,
                        first: *ea,
                        second: *eb,
                    });
                }
            }
        }
        for (e, _) in class.iter() {
            if !gamma.get(e).is_some_and(|l| l.contains(&color)) {
                report.push(Violation::NotInList { color, edge: *e });
            }
        }
        if color <= q.k() {
            let (size, quota) = (class.size() as u32, q.get(color));
            if size < quota {
                report.push(Violation::Quota { color, size, quota });
            }
        }
    }
    report.into_result()
}
