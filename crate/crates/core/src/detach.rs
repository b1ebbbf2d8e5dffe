//! Detachment: splitting an amalgamated vertex `α` of a colored hypergraph
//! into `m` new vertices `α_1..α_m`.
//!
//! Each occurrence of `α` in each edge instance is relabeled to some `α_i`
//! so that the degree of `α_i` in every color class lies in a prescribed
//! interval, and every detached edge type reaches an exact multiplicity.
//!
//! Vertex ids stay contiguous: `α` must be the largest vertex of the input
//! and `α_i = α + i − 1`, so the output lives on `1..=α + m − 1`.
//!
//! Two engines sit behind [`detach`]:
//!
//! * an even splitter that peels off `α_1, α_2, …` one at a time; each step
//!   is an integral flow rounding in which every color, every edge family,
//!   and every (color, family) cell receives the floor or ceiling of its
//!   proportional share;
//! * a complete backtracking search over the `α`-slots, used when the
//!   splitter does not apply or fails. Its exhaustion certifies that no
//!   detachment meets the bounds.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::binomial;
use crate::error::{Error, Result};
use crate::flow::BoundedNetwork;
use crate::hypergraph::{Coloring, Edge, Hypergraph, VertexId};
use crate::report::{Violation, ViolationReport};

/// Closed integer interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: u32,
    pub hi: u32,
}

impl Interval {
    pub fn new(lo: u32, hi: u32) -> Self {
        Interval { lo, hi }
    }

    pub fn exact(x: u32) -> Self {
        Interval { lo: x, hi: x }
    }

    /// `{⌊num/den⌋, ⌈num/den⌉}` as an interval.
    pub fn around(num: u64, den: u64) -> Self {
        Interval {
            lo: (num / den) as u32,
            hi: num.div_ceil(den) as u32,
        }
    }

    pub fn contains(&self, x: u32) -> bool {
        self.lo <= x && x <= self.hi
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetachmentTask {
    /// Colored amalgamated hypergraph; `alpha` is its largest vertex.
    pub graph: Coloring,
    pub alpha: VertexId,
    pub m: u32,
    /// `degree_bounds[i][j]`: bounds for `α_{i+1}` in color `j+1`.
    pub degree_bounds: Vec<Vec<Interval>>,
    /// Exact multiplicity of every detached edge type; types not listed
    /// must not occur.
    pub mult_targets: BTreeMap<Edge, u32>,
}

impl DetachmentTask {
    /// The detachment that shares everything as evenly as possible: every
    /// `α_i` gets `⌊d_j/m⌋` or `⌈d_j/m⌉` of the `d_j` occurrences of `α` in
    /// color `j`, and an edge with `a` copies of `α` and multiplicity `M` is
    /// spread uniformly over the `C(m,a)` choices of distinct new vertices.
    pub fn even(graph: Coloring, alpha: VertexId, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidTargets("m must be positive".into()));
        }
        let bounds_row: Vec<Interval> = graph
            .iter()
            .map(|(_, class)| Interval::around(class.degree_of(alpha) as u64, m as u64))
            .collect();
        let mut targets = BTreeMap::new();
        let new: Vec<VertexId> = (0..m).map(|i| alpha + i).collect();
        for (e, mult) in graph.host().iter() {
            let a = e.occurrences(alpha);
            if a == 0 {
                continue;
            }
            let ways = binomial(m as u64, a as u64);
            if ways == 0 || !(mult as u64).is_multiple_of(ways) {
                return Err(Error::InvalidTargets(format!(
                    "{mult} copies of {e} cannot be spread over {ways} detached types"
                )));
            }
            let share = (mult as u64 / ways) as u32;
            let fixed: Vec<VertexId> = e
                .vertices()
                .iter()
                .copied()
                .filter(|&v| v != alpha)
                .collect();
            for subset in subsets(&new, a as usize) {
                let mut verts = fixed.clone();
                verts.extend(subset);
                targets.insert(Edge::new(&verts)?, share);
            }
        }
        Ok(DetachmentTask {
            graph,
            alpha,
            m,
            degree_bounds: vec![bounds_row; m as usize],
            mult_targets: targets,
        })
    }

    /// Id of `α_i` (1-based).
    pub fn new_vertex(&self, i: u32) -> VertexId {
        self.alpha + i - 1
    }

    pub fn output_ground(&self) -> u32 {
        self.alpha + self.m - 1
    }

    pub fn k(&self) -> u32 {
        self.graph.k()
    }

    /// Maps every new vertex back onto `α`.
    pub fn collapse(&self, e: &Edge) -> Edge {
        let alpha = self.alpha;
        e.map(|v| if v >= alpha { alpha } else { v })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: alloc::string::String| Err(Error::InvalidTargets(msg));
        if self.m == 0 {
            return bad("m must be positive".into());
        }
        if self.alpha != self.graph.ground() {
            return bad(format!(
                "α = {} must be the largest vertex (ground is {})",
                self.alpha,
                self.graph.ground()
            ));
        }
        let k = self.k() as usize;
        if self.degree_bounds.len() != self.m as usize
            || self.degree_bounds.iter().any(|row| row.len() != k)
        {
            return bad(format!("degree bounds must be {} × {k}", self.m));
        }
        if self.degree_bounds.iter().flatten().any(|b| b.lo > b.hi) {
            return bad("empty degree interval".into());
        }
        for (j, class) in self.graph.iter() {
            let d = class.degree_of(self.alpha);
            let col = self.degree_bounds.iter().map(|row| row[j as usize - 1]);
            let (lo, hi) = col.fold((0u64, 0u64), |(l, h), b| (l + b.lo as u64, h + b.hi as u64));
            if (d as u64) < lo || (d as u64) > hi {
                return bad(format!("color {j}: α-degree {d} outside [{lo},{hi}]"));
            }
        }
        let mut per_family: BTreeMap<Edge, u64> = BTreeMap::new();
        for (t, &mult) in &self.mult_targets {
            if t.max_vertex() > self.output_ground() {
                return bad(format!("target {t} uses a vertex beyond α_m"));
            }
            if t.max_vertex() < self.alpha {
                return bad(format!("target {t} contains no detached vertex"));
            }
            *per_family.entry(self.collapse(t)).or_insert(0) += mult as u64;
        }
        for (e, mult) in self.graph.host().iter() {
            if e.contains(self.alpha) {
                let sum = per_family.remove(e).unwrap_or(0);
                if sum != mult as u64 {
                    return bad(format!("targets for {e} sum to {sum}, expected {mult}"));
                }
            }
        }
        if let Some((e, &sum)) = per_family.iter().find(|(_, &s)| s > 0) {
            return bad(format!(
                "targets ({sum} copies) collapse to {e}, absent from the graph"
            ));
        }
        Ok(())
    }

    fn is_symmetric(&self) -> bool {
        if self.degree_bounds.windows(2).any(|w| w[0] != w[1]) {
            return false;
        }
        let first = self.alpha;
        (1..self.m).all(|i| {
            let other = self.alpha + i;
            let swap = |v: VertexId| {
                if v == first {
                    other
                } else if v == other {
                    first
                } else {
                    v
                }
            };
            self.mult_targets
                .iter()
                .all(|(t, &mult)| self.mult_targets.get(&t.map(swap)).copied().unwrap_or(0) == mult)
        })
    }
}

fn subsets(items: &[VertexId], size: usize) -> Vec<Vec<VertexId>> {
    if size == 0 {
        return vec![Vec::new()];
    }
    if items.len() < size {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in subsets(&items[i + 1..], size - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct DetachOptions {
    /// Shuffles ties in the search's value order.
    pub seed: Option<u64>,
    /// Node budget for the backtracking search.
    pub max_nodes: u64,
    /// Skip the even splitter and go straight to the search.
    pub search_only: bool,
}

impl Default for DetachOptions {
    fn default() -> Self {
        DetachOptions {
            seed: None,
            max_nodes: 20_000_000,
            search_only: false,
        }
    }
}

/// Detaches `α` according to `task`; see the module docs.
pub fn detach(task: &DetachmentTask) -> Result<Coloring> {
    detach_with(task, &DetachOptions::default())
}

pub fn detach_with(task: &DetachmentTask, opts: &DetachOptions) -> Result<Coloring> {
    task.validate()?;
    if !opts.search_only {
        if let Some(out) = split_evenly(task) {
            if verify_detachment(task, &out).is_ok() {
                return Ok(out);
            }
        }
    }
    let out = SlotSearch::new(task, opts).run()?;
    verify_detachment(task, &out)
        .map_err(|r| Error::Internal(format!("search produced an invalid detachment: {r}")))?;
    Ok(out)
}

/// Partially detached edge: vertices already fixed, plus `a` slots of `α`.
type Partial = (Vec<VertexId>, u32);

fn split_evenly(task: &DetachmentTask) -> Option<Coloring> {
    let alpha = task.alpha;
    let m = task.m;
    if task.mult_targets.iter().any(|(t, &mult)| {
        mult > 0
            && !t
                .vertices()
                .iter()
                .filter(|&&v| v >= alpha)
                .is_sorted_by(|a, b| a < b)
    }) {
        // A new vertex repeated inside one edge: not reachable by peeling.
        return None;
    }
    let mut state: Vec<BTreeMap<Partial, u32>> = task
        .graph
        .classes()
        .iter()
        .map(|class| {
            let mut map = BTreeMap::new();
            for (e, mult) in class.iter() {
                let fixed: Vec<VertexId> = e
                    .vertices()
                    .iter()
                    .copied()
                    .filter(|&v| v != alpha)
                    .collect();
                *map.entry((fixed, e.occurrences(alpha))).or_insert(0) += mult;
            }
            map
        })
        .collect();

    for s in 1..=m {
        let v = alpha + s - 1;
        let r = m - s + 1;
        if r == 1 {
            for class in state.iter_mut() {
                let old = core::mem::take(class);
                for ((mut fixed, a), n) in old {
                    if a > 1 {
                        return None;
                    }
                    if a == 1 {
                        fixed.push(v);
                        fixed.sort_unstable();
                    }
                    *class.entry((fixed, 0)).or_insert(0) += n;
                }
            }
            break;
        }
        let choice = peel(task, &state, s).or_else(|| peel_relaxed(task, &state, s))?;
        for (j, moves) in choice.into_iter().enumerate() {
            for ((fixed, a), x) in moves {
                if x == 0 {
                    continue;
                }
                let class = &mut state[j];
                let left = class.get_mut(&(fixed.clone(), a)).expect("cell exists");
                *left -= x;
                if *left == 0 {
                    class.remove(&(fixed.clone(), a));
                }
                let mut grown = fixed;
                grown.push(v);
                grown.sort_unstable();
                *class.entry((grown, a - 1)).or_insert(0) += x;
            }
        }
    }

    let ground = task.output_ground();
    let mut out = Coloring::empty(ground, task.k());
    for (j, class) in state.iter().enumerate() {
        for ((fixed, a), n) in class {
            if *a != 0 {
                return None;
            }
            out.add_edge(j as u32 + 1, Edge::new(fixed).ok()?, *n)
                .ok()?;
        }
    }
    Some(out)
}

type Moves = Vec<Vec<(Partial, u32)>>;

fn peel(task: &DetachmentTask, state: &[BTreeMap<Partial, u32>], s: u32) -> Option<Moves> {
    peel_with(task, state, s, true)
}

fn peel_relaxed(task: &DetachmentTask, state: &[BTreeMap<Partial, u32>], s: u32) -> Option<Moves> {
    peel_with(task, state, s, false)
}

/// One splitting step: decide, for every (color, partial edge) cell, how many
/// of its instances hand one `α`-slot to `α_s`.
fn peel_with(
    task: &DetachmentTask,
    state: &[BTreeMap<Partial, u32>],
    s: u32,
    even: bool,
) -> Option<Moves> {
    let v = task.alpha + s - 1;
    let r = (task.m - s + 1) as u64;
    let mut net = BoundedNetwork::new();

    // Columns: each family must send exactly its target share to α_s.
    let mut columns: BTreeMap<Partial, usize> = BTreeMap::new();
    for class in state {
        for key in class.keys().filter(|(_, a)| *a > 0) {
            if !columns.contains_key(key) {
                let node = net.node();
                columns.insert(key.clone(), node);
            }
        }
    }
    for ((fixed, a), &node) in &columns {
        let mut need = 0i64;
        for (t, &mult) in &task.mult_targets {
            let (low, high): (Vec<VertexId>, Vec<VertexId>) =
                t.vertices().iter().partition(|&&x| x < v);
            if &low == fixed && high.len() as u32 == *a && high.contains(&v) {
                need += mult as i64;
            }
        }
        net.arc(node, BoundedNetwork::SINK, need, need);
    }

    let mut cells = Vec::new();
    for (j, class) in state.iter().enumerate() {
        let d: u64 = class.iter().map(|((_, a), &n)| *a as u64 * n as u64).sum();
        let slots: u64 = class
            .iter()
            .filter(|((_, a), _)| *a > 0)
            .map(|(_, &n)| n as u64)
            .sum();
        let own = task.degree_bounds[s as usize - 1][j];
        let (rest_lo, rest_hi) = task.degree_bounds[s as usize..]
            .iter()
            .fold((0u64, 0u64), |(l, h), row| {
                (l + row[j].lo as u64, h + row[j].hi as u64)
            });
        let mut lo = (own.lo as u64).max(d.saturating_sub(rest_hi));
        let mut hi = (own.hi as u64).min(d.saturating_sub(rest_lo)).min(slots);
        if d < rest_lo {
            return None;
        }
        if even {
            let share = Interval::around(d, r);
            let (elo, ehi) = (lo.max(share.lo as u64), hi.min(share.hi as u64));
            if elo <= ehi {
                lo = elo;
                hi = ehi;
            }
        }
        let row = net.node();
        net.arc(BoundedNetwork::SOURCE, row, lo as i64, hi as i64);
        for ((fixed, a), &n) in class.iter().filter(|((_, a), _)| *a > 0) {
            let (clo, chi) = if even {
                let share = Interval::around(n as u64 * *a as u64, r);
                (share.lo.min(n), share.hi.min(n))
            } else {
                (0, n)
            };
            let key = (fixed.clone(), *a);
            let arc = net.arc(row, columns[&key], clo as i64, chi as i64);
            cells.push((j, key, arc));
        }
    }

    let flow = net.feasible()?;
    let mut moves: Moves = vec![Vec::new(); state.len()];
    for (j, key, arc) in cells {
        moves[j].push((key, flow[arc] as u32));
    }
    Some(moves)
}

struct Family {
    types: Vec<(Edge, u32)>,
}

struct Group {
    color: usize,
    family: usize,
    size: u32,
}

struct SlotSearch<'a> {
    task: &'a DetachmentTask,
    families: Vec<Family>,
    groups: Vec<Group>,
    /// Per group: chosen type indices (nondecreasing).
    assigned: Vec<Vec<usize>>,
    counts: Vec<Vec<u32>>,
    /// `deg[i][j]` for `α_{i+1}` in color `j+1`.
    deg: Vec<Vec<u32>>,
    /// Unassigned α-slots per color.
    open_slots: Vec<u32>,
    symmetric: bool,
    rng: Option<ChaCha8Rng>,
    nodes: u64,
    max_nodes: u64,
}

impl<'a> SlotSearch<'a> {
    fn new(task: &'a DetachmentTask, opts: &DetachOptions) -> Self {
        let alpha = task.alpha;
        let mut family_index: BTreeMap<Edge, usize> = BTreeMap::new();
        let mut families = Vec::new();
        for (e, _) in task.graph.host().iter().filter(|(e, _)| e.contains(alpha)) {
            family_index.insert(*e, families.len());
            families.push(Family { types: Vec::new() });
        }
        for (t, &mult) in &task.mult_targets {
            if mult > 0 {
                if let Some(&f) = family_index.get(&task.collapse(t)) {
                    families[f].types.push((*t, mult));
                }
            }
        }
        let k = task.k() as usize;
        let mut groups = Vec::new();
        let mut open_slots = vec![0; k];
        for (j, class) in task.graph.iter() {
            for (e, mult) in class.iter().filter(|(e, _)| e.contains(alpha)) {
                groups.push(Group {
                    color: j as usize - 1,
                    family: family_index[e],
                    size: mult,
                });
                open_slots[j as usize - 1] += mult * e.occurrences(alpha);
            }
        }
        SlotSearch {
            task,
            counts: families.iter().map(|f| vec![0; f.types.len()]).collect(),
            assigned: groups.iter().map(|_| Vec::new()).collect(),
            families,
            groups,
            deg: vec![vec![0; k]; task.m as usize],
            open_slots,
            symmetric: task.is_symmetric(),
            rng: opts.seed.map(ChaCha8Rng::seed_from_u64),
            nodes: 0,
            max_nodes: opts.max_nodes,
        }
    }

    fn new_index(&self, v: VertexId) -> Option<usize> {
        (v >= self.task.alpha).then(|| (v - self.task.alpha) as usize)
    }

    fn fits(&self, g: usize, t: usize) -> bool {
        let group = &self.groups[g];
        let (edge, target) = self.families[group.family].types[t];
        if self.counts[group.family][t] >= target {
            return false;
        }
        if self.assigned[g].last().is_some_and(|&last| t < last) {
            return false;
        }
        let mut extra = [0u32; 3];
        let news: Vec<usize> = edge
            .vertices()
            .iter()
            .filter_map(|&v| self.new_index(v))
            .collect();
        for (p, &i) in news.iter().enumerate() {
            extra[p] = news.iter().filter(|&&x| x == i).count() as u32;
            if self.deg[i][group.color] + extra[p] > self.task.degree_bounds[i][group.color].hi {
                return false;
            }
        }
        true
    }

    fn lower_bounds_reachable(&self) -> bool {
        let k = self.task.k() as usize;
        (0..k).all(|j| {
            let missing: u32 = (0..self.task.m as usize)
                .map(|i| {
                    self.task.degree_bounds[i][j]
                        .lo
                        .saturating_sub(self.deg[i][j])
                })
                .sum();
            missing <= self.open_slots[j]
        })
    }

    fn apply(&mut self, g: usize, t: usize, sign: i32) {
        let group = &self.groups[g];
        let (color, family) = (group.color, group.family);
        let edge = self.families[family].types[t].0;
        let alpha = self.task.alpha;
        for &v in edge.vertices() {
            if v >= alpha {
                let i = (v - alpha) as usize;
                if sign > 0 {
                    self.deg[i][color] += 1;
                    self.open_slots[color] -= 1;
                } else {
                    self.deg[i][color] -= 1;
                    self.open_slots[color] += 1;
                }
            }
        }
        if sign > 0 {
            self.counts[family][t] += 1;
            self.assigned[g].push(t);
        } else {
            self.counts[family][t] -= 1;
            self.assigned[g].pop();
        }
    }

    fn score(&self, g: usize, t: usize) -> u32 {
        let color = self.groups[g].color;
        let edge = self.families[self.groups[g].family].types[t].0;
        edge.vertices()
            .iter()
            .filter_map(|&v| self.new_index(v))
            .map(|i| self.task.degree_bounds[i][color].hi - self.deg[i][color])
            .sum()
    }

    fn values(&mut self, g: usize, first: bool) -> Vec<usize> {
        let ntypes = self.families[self.groups[g].family].types.len();
        let alpha = self.task.alpha;
        let mut vals: Vec<usize> = (0..ntypes)
            .filter(|&t| self.fits(g, t))
            .filter(|&t| {
                !(first && self.symmetric)
                    || self.families[self.groups[g].family].types[t]
                        .0
                        .contains(alpha)
            })
            .collect();
        if let Some(rng) = self.rng.as_mut() {
            vals.shuffle(rng);
        }
        let scores: BTreeMap<usize, u32> = vals.iter().map(|&t| (t, self.score(g, t))).collect();
        vals.sort_by_key(|t| Reverse(scores[t]));
        vals
    }

    fn step(&mut self, first: bool) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Error::CapExceeded(format!(
                "{} detachment search nodes",
                self.max_nodes
            )));
        }
        if !self.lower_bounds_reachable() {
            return Ok(false);
        }
        let open: Vec<usize> = (0..self.groups.len())
            .filter(|&g| (self.assigned[g].len() as u32) < self.groups[g].size)
            .collect();
        if open.is_empty() {
            return Ok(true);
        }
        let mut best: Option<(usize, usize)> = None;
        for &g in &open {
            let n = (0..self.families[self.groups[g].family].types.len())
                .filter(|&t| self.fits(g, t))
                .count();
            if n == 0 {
                return Ok(false);
            }
            if best.is_none_or(|(_, bn)| n < bn) {
                best = Some((g, n));
            }
        }
        let (g, _) = best.expect("open groups exist");
        for t in self.values(g, first) {
            self.apply(g, t, 1);
            if self.step(false)? {
                return Ok(true);
            }
            self.apply(g, t, -1);
        }
        Ok(false)
    }

    fn run(mut self) -> Result<Coloring> {
        if !self.step(true)? {
            return Err(Error::NoDetachmentFound);
        }
        let task = self.task;
        let mut out = Coloring::empty(task.output_ground(), task.k());
        for (j, class) in task.graph.iter() {
            for (e, mult) in class.iter().filter(|(e, _)| !e.contains(task.alpha)) {
                out.add_edge(j, *e, mult)?;
            }
        }
        for (g, group) in self.groups.iter().enumerate() {
            for &t in &self.assigned[g] {
                let edge = self.families[group.family].types[t].0;
                out.add_edge(group.color as u32 + 1, edge, 1)?;
            }
        }
        Ok(out)
    }
}

/// Checks the degree bounds, the exact multiplicities, and that collapsing
/// `α_1..α_m` back onto `α` reproduces the task's colored hypergraph.
pub fn verify_detachment(task: &DetachmentTask, out: &Coloring) -> Result<(), ViolationReport> {
    let mut report = ViolationReport::new();
    if out.k() != task.k() {
        report.push(Violation::Other("number of colors changed"));
        return Err(report);
    }
    for (j, class) in out.iter() {
        let mut collapsed = Hypergraph::new(task.alpha);
        for (e, mult) in class.iter() {
            if e.max_vertex() > task.output_ground() {
                report.push(Violation::Other("edge uses a vertex beyond α_m"));
                continue;
            }
            let _ = collapsed.add(task.collapse(e), mult);
        }
        let want = task.graph.class(j);
        let keys: BTreeSet<Edge> = collapsed
            .iter()
            .chain(want.iter())
            .map(|(e, _)| *e)
            .collect();
        for e in keys {
            let (expected, found) = (want.mult(&e), collapsed.mult(&e));
            if expected != found {
                report.push(Violation::HostMismatch {
                    edge: e,
                    expected,
                    found,
                });
            }
        }
        let degrees = class.degrees();
        for i in 1..=task.m {
            let v = task.new_vertex(i);
            let d = degrees.get(v as usize).copied().unwrap_or(0);
            let b = task.degree_bounds[i as usize - 1][j as usize - 1];
            if !b.contains(d) {
                report.push(Violation::Degree {
                    vertex: v,
                    color: j,
                    degree: d,
                    lo: b.lo,
                    hi: b.hi,
                });
            }
        }
    }
    for (t, &expected) in &task.mult_targets {
        let found = out.host().mult(t);
        if found != expected {
            report.push(Violation::Multiplicity {
                edge: *t,
                expected,
                found,
            });
        }
    }
    for (e, found) in out.host().iter() {
        if e.max_vertex() >= task.alpha && !task.mult_targets.contains_key(e) {
            report.push(Violation::Multiplicity {
                edge: *e,
                expected: 0,
                found,
            });
        }
    }
    report.into_result()
}
