//! Multiset hypergraphs with edges of size at most three, and their colorings.
//!
//! Edges may repeat a vertex (`α³`, `α²u`) so that amalgamated hypergraphs fit
//! the same types as ordinary ones.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::{Error, Result};
use crate::report::{Violation, ViolationReport};

pub type VertexId = u32;

/// A sorted multiset of one to three vertices.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    verts: [VertexId; 3],
    len: u8,
}

impl Edge {
    pub fn new(verts: &[VertexId]) -> Result<Self> {
        if verts.is_empty() || verts.len() > 3 {
            return Err(Error::InvalidEdge(format!("{} vertices", verts.len())));
        }
        if verts.contains(&0) {
            return Err(Error::InvalidEdge("vertex ids are 1-based".into()));
        }
        let mut buf = [0; 3];
        buf[..verts.len()].copy_from_slice(verts);
        buf[..verts.len()].sort_unstable();
        Ok(Edge {
            verts: buf,
            len: verts.len() as u8,
        })
    }

    pub fn single(a: VertexId) -> Self {
        Self::new(&[a]).expect("vertex ids are 1-based")
    }

    pub fn pair(a: VertexId, b: VertexId) -> Self {
        Self::new(&[a, b]).expect("vertex ids are 1-based")
    }

    pub fn triple(a: VertexId, b: VertexId, c: VertexId) -> Self {
        Self::new(&[a, b, c]).expect("vertex ids are 1-based")
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.verts[..self.len as usize]
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn occurrences(&self, v: VertexId) -> u32 {
        self.vertices().iter().filter(|&&x| x == v).count() as u32
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices().contains(&v)
    }

    /// No vertex is repeated.
    pub fn is_loopless(&self) -> bool {
        self.vertices().windows(2).all(|w| w[0] != w[1])
    }

    pub fn is_disjoint(&self, other: &Edge) -> bool {
        self.vertices().iter().all(|v| !other.contains(*v))
    }

    pub fn max_vertex(&self) -> VertexId {
        self.verts[self.len as usize - 1]
    }

    /// Relabels every vertex and re-sorts.
    pub fn map(&self, f: impl Fn(VertexId) -> VertexId) -> Edge {
        let mapped: Vec<VertexId> = self.vertices().iter().map(|&v| f(v)).collect();
        Edge::new(&mapped).expect("relabeling keeps ids positive")
    }
}

impl Ord for Edge {
    fn cmp(&self, other: &Self) -> Ordering {
        self.vertices().cmp(other.vertices())
    }
}

impl PartialOrd for Edge {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.vertices().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A multiset of edges on the ground set `1..=ground`.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct Hypergraph {
    ground: u32,
    edges: BTreeMap<Edge, u32>,
}

impl Hypergraph {
    pub fn new(ground: u32) -> Self {
        Hypergraph {
            ground,
            edges: BTreeMap::new(),
        }
    }

    pub fn ground(&self) -> u32 {
        self.ground
    }

    /// Adds `mult` copies of `edge`.
    pub fn add(&mut self, edge: Edge, mult: u32) -> Result<()> {
        if edge.max_vertex() > self.ground {
            return Err(Error::UnknownVertex(edge.max_vertex()));
        }
        if mult > 0 {
            *self.edges.entry(edge).or_insert(0) += mult;
        }
        Ok(())
    }

    /// Removes up to `mult` copies; returns how many were removed.
    pub fn remove(&mut self, edge: &Edge, mult: u32) -> u32 {
        let Some(m) = self.edges.get_mut(edge) else {
            return 0;
        };
        let taken = mult.min(*m);
        *m -= taken;
        if *m == 0 {
            self.edges.remove(edge);
        }
        taken
    }

    pub fn mult(&self, edge: &Edge) -> u32 {
        self.edges.get(edge).copied().unwrap_or(0)
    }

    /// Number of edge instances.
    pub fn size(&self) -> u64 {
        self.edges.values().map(|&m| m as u64).sum()
    }

    pub fn distinct(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Edge, u32)> + '_ {
        self.edges.iter().map(|(e, &m)| (e, m))
    }

    /// Every edge instance, repeated by multiplicity, in canonical order.
    pub fn instances(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges
            .iter()
            .flat_map(|(e, &m)| core::iter::repeat_n(*e, m as usize))
    }

    pub fn degree(&self, v: VertexId) -> Result<u32> {
        if v == 0 || v > self.ground {
            return Err(Error::UnknownVertex(v));
        }
        Ok(self.degree_of(v))
    }

    pub(crate) fn degree_of(&self, v: VertexId) -> u32 {
        self.edges.iter().map(|(e, &m)| m * e.occurrences(v)).sum()
    }

    /// Degree of every vertex, indexed by vertex id (slot 0 unused).
    pub fn degrees(&self) -> Vec<u32> {
        let mut out = vec![0; self.ground as usize + 1];
        for (e, &m) in &self.edges {
            for &v in e.vertices() {
                out[v as usize] += m;
            }
        }
        out
    }

    pub fn first_loop(&self) -> Option<Edge> {
        self.edges.keys().find(|e| !e.is_loopless()).copied()
    }

    pub fn is_loopless(&self) -> bool {
        self.first_loop().is_none()
    }

    /// Multiset containment.
    pub fn contains(&self, other: &Hypergraph) -> bool {
        other.iter().all(|(e, m)| self.mult(e) >= m)
    }

    pub fn absorb(&mut self, other: &Hypergraph) {
        self.ground = self.ground.max(other.ground);
        for (e, m) in other.iter() {
            *self.edges.entry(*e).or_insert(0) += m;
        }
    }

    /// `self − other` as multisets, or `None` if `other` is not contained.
    pub fn difference(&self, other: &Hypergraph) -> Option<Hypergraph> {
        let mut out = self.clone();
        for (e, m) in other.iter() {
            if out.remove(e, m) != m {
                return None;
            }
        }
        Some(out)
    }

    /// Same edges, viewed on a larger ground set.
    pub fn with_ground(mut self, ground: u32) -> Result<Self> {
        if let Some(e) = self.edges.keys().find(|e| e.max_vertex() > ground) {
            return Err(Error::UnknownVertex(e.max_vertex()));
        }
        self.ground = ground;
        Ok(self)
    }

    /// Edges lying entirely inside `1..=n`.
    pub fn restrict(&self, n: u32) -> Hypergraph {
        Hypergraph {
            ground: n.min(self.ground),
            edges: self
                .edges
                .iter()
                .filter(|(e, _)| e.max_vertex() <= n)
                .map(|(e, &m)| (*e, m))
                .collect(),
        }
    }

    /// Same edge multiset; ground sets are ignored.
    pub fn same_edges(&self, other: &Hypergraph) -> bool {
        self.edges == other.edges
    }
}

/// `λ` copies of every 3-subset of `1..=n`.
pub fn complete_triples(n: u32, lambda: u32) -> Result<Hypergraph> {
    if n < 3 {
        return Err(Error::InvalidSize(format!(
            "need at least 3 vertices, got {n}"
        )));
    }
    if lambda == 0 {
        return Err(Error::InvalidSize("multiplicity must be positive".into()));
    }
    let mut g = Hypergraph::new(n);
    for a in 1..=n {
        for b in a + 1..=n {
            for c in b + 1..=n {
                g.edges.insert(Edge::triple(a, b, c), lambda);
            }
        }
    }
    Ok(g)
}

/// Number of occurrences of `v` in `g`.
pub fn degree(g: &Hypergraph, v: VertexId) -> Result<u32> {
    g.degree(v)
}

/// A partition of a host hypergraph into color classes `1..=k`.
///
/// Empty classes are allowed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Coloring {
    host: Hypergraph,
    classes: Vec<Hypergraph>,
}

impl Coloring {
    /// `k` empty classes on the ground set `1..=ground`.
    pub fn empty(ground: u32, k: u32) -> Self {
        Coloring {
            host: Hypergraph::new(ground),
            classes: vec![Hypergraph::new(ground); k as usize],
        }
    }

    /// Host is the multiset sum of the classes.
    pub fn from_classes(ground: u32, classes: Vec<Hypergraph>) -> Result<Self> {
        let mut c = Coloring::empty(ground, classes.len() as u32);
        for (i, class) in classes.into_iter().enumerate() {
            for (e, m) in class.iter() {
                c.add_edge(i as u32 + 1, *e, m)?;
            }
        }
        Ok(c)
    }

    /// Checks that the classes re-sum to `host`.
    pub fn new(host: Hypergraph, classes: Vec<Hypergraph>) -> Result<Self> {
        let c = Coloring::from_classes(host.ground(), classes)?;
        let mut report = ViolationReport::new();
        let keys: alloc::collections::BTreeSet<Edge> = host
            .edges
            .keys()
            .chain(c.host.edges.keys())
            .copied()
            .collect();
        for e in keys {
            let (expected, found) = (host.mult(&e), c.host.mult(&e));
            if expected != found {
                report.push(Violation::HostMismatch {
                    edge: e,
                    expected,
                    found,
                });
            }
        }
        if report.is_empty() {
            Ok(Coloring {
                host,
                classes: c.classes,
            })
        } else {
            Err(Error::InvalidColoring(report))
        }
    }

    pub fn add_edge(&mut self, color: u32, edge: Edge, mult: u32) -> Result<()> {
        if color == 0 || color as usize > self.classes.len() {
            return Err(Error::InvalidInstance(format!(
                "color {color} outside 1..={}",
                self.classes.len()
            )));
        }
        self.classes[color as usize - 1].add(edge, mult)?;
        self.host.add(edge, mult)
    }

    pub fn k(&self) -> u32 {
        self.classes.len() as u32
    }

    pub fn ground(&self) -> u32 {
        self.host.ground()
    }

    pub fn host(&self) -> &Hypergraph {
        &self.host
    }

    /// Class of a 1-based color.
    pub fn class(&self, color: u32) -> &Hypergraph {
        &self.classes[color as usize - 1]
    }

    pub fn classes(&self) -> &[Hypergraph] {
        &self.classes
    }

    /// `(color, class)` pairs with 1-based colors.
    pub fn iter(&self) -> impl Iterator<Item = (u32, &Hypergraph)> + '_ {
        self.classes
            .iter()
            .enumerate()
            .map(|(i, c)| (i as u32 + 1, c))
    }

    /// Appends empty classes up to `k`.
    pub fn padded(mut self, k: u32) -> Result<Self> {
        if self.k() > k {
            return Err(Error::InvalidInstance(format!(
                "{} classes exceed k = {k}",
                self.k()
            )));
        }
        let g = self.ground();
        self.classes.resize(k as usize, Hypergraph::new(g));
        Ok(self)
    }

    pub fn with_ground(self, ground: u32) -> Result<Self> {
        Ok(Coloring {
            host: self.host.with_ground(ground)?,
            classes: self
                .classes
                .into_iter()
                .map(|c| c.with_ground(ground))
                .collect::<Result<_>>()?,
        })
    }

    /// Every class restricted to edges inside `1..=n`.
    pub fn restrict(&self, n: u32) -> Coloring {
        Coloring {
            host: self.host.restrict(n),
            classes: self.classes.iter().map(|c| c.restrict(n)).collect(),
        }
    }

    /// `self(i) ⊇ other(i)` for every color of `other`.
    pub fn contains_classwise(&self, other: &Coloring) -> bool {
        other.k() <= self.k() && other.iter().all(|(i, c)| self.class(i).contains(c))
    }
}

/// Every class is a partial matching.
///
/// Fails with [`Error::NotApplicable`] when the host repeats a vertex inside
/// an edge, and with [`Error::InvalidColoring`] listing every conflicting pair.
pub fn verify_proper(c: &Coloring) -> Result<()> {
    if let Some(e) = c.host().first_loop() {
        return Err(Error::NotApplicable(e));
    }
    let mut report = ViolationReport::new();
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
    }
    report.into_result().map_err(Error::InvalidColoring)
}

/// Every class covers every ground vertex exactly once.
pub fn verify_one_factorization(c: &Coloring) -> Result<(), ViolationReport> {
    let mut report = ViolationReport::new();
    for (color, class) in c.iter() {
        let deg = class.degrees();
        for v in 1..=c.ground() {
            let d = deg.get(v as usize).copied().unwrap_or(0);
            if d != 1 {
                report.push(Violation::Cover {
                    color,
                    vertex: v,
                    count: d,
                });
            }
        }
    }
    report.into_result()
}
