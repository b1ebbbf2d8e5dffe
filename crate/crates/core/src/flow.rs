//! Feasible flows with lower and upper arc bounds (Dinic on the standard
//! excess reduction).

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

struct Arc {
    to: usize,
    cap: i64,
}

struct Dinic {
    arcs: Vec<Arc>,
    adj: Vec<Vec<usize>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    fn new(n: usize) -> Self {
        Dinic {
            arcs: Vec::new(),
            adj: vec![Vec::new(); n],
            level: vec![0; n],
            iter: vec![0; n],
        }
    }

    fn add(&mut self, from: usize, to: usize, cap: i64) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc { to, cap });
        self.adj[from].push(id);
        self.arcs.push(Arc { to: from, cap: 0 });
        self.adj[to].push(id + 1);
        id
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &id in &self.adj[u] {
                let a = &self.arcs[id];
                if a.cap > 0 && self.level[a.to] < 0 {
                    self.level[a.to] = self.level[u] + 1;
                    queue.push_back(a.to);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, pushed: i64) -> i64 {
        if u == t {
            return pushed;
        }
        while self.iter[u] < self.adj[u].len() {
            let id = self.adj[u][self.iter[u]];
            let (to, cap) = (self.arcs[id].to, self.arcs[id].cap);
            if cap > 0 && self.level[to] == self.level[u] + 1 {
                let got = self.dfs(to, t, pushed.min(cap));
                if got > 0 {
                    self.arcs[id].cap -= got;
                    self.arcs[id ^ 1].cap += got;
                    return got;
                }
            }
            self.iter[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        while self.bfs(s, t) {
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, i64::MAX);
                if f == 0 {
                    break;
                }
                total += f;
            }
        }
        total
    }
}

/// A network whose arcs carry `[lo, hi]` bounds. Node 0 is the source and
/// node 1 the sink; the flow value itself is unconstrained.
pub(crate) struct BoundedNetwork {
    nodes: usize,
    arcs: Vec<(usize, usize, i64, i64)>,
}

impl BoundedNetwork {
    pub const SOURCE: usize = 0;
    pub const SINK: usize = 1;

    pub fn new() -> Self {
        BoundedNetwork {
            nodes: 2,
            arcs: Vec::new(),
        }
    }

    pub fn node(&mut self) -> usize {
        self.nodes += 1;
        self.nodes - 1
    }

    /// Returns the arc index used to read its flow back.
    pub fn arc(&mut self, from: usize, to: usize, lo: i64, hi: i64) -> usize {
        self.arcs.push((from, to, lo, hi));
        self.arcs.len() - 1
    }

    /// A flow respecting every bound, indexed by arc, if one exists.
    pub fn feasible(&self) -> Option<Vec<i64>> {
        if self.arcs.iter().any(|&(_, _, lo, hi)| lo > hi || lo < 0) {
            return None;
        }
        let n = self.nodes;
        let (ss, tt) = (n, n + 1);
        let mut net = Dinic::new(n + 2);
        let mut excess = vec![0i64; n];
        let ids: Vec<usize> = self
            .arcs
            .iter()
            .map(|&(u, v, lo, hi)| {
                excess[v] += lo;
                excess[u] -= lo;
                net.add(u, v, hi - lo)
            })
            .collect();
        net.add(Self::SINK, Self::SOURCE, i64::MAX / 4);
        let mut need = 0;
        for (v, &ex) in excess.iter().enumerate() {
            if ex > 0 {
                net.add(ss, v, ex);
                need += ex;
            } else if ex < 0 {
                net.add(v, tt, -ex);
            }
        }
        if net.max_flow(ss, tt) != need {
            return None;
        }
        Some(
            self.arcs
                .iter()
                .zip(ids)
                .map(|(&(_, _, lo, hi), id)| lo + (hi - lo - net.arcs[id].cap))
                .collect(),
        )
    }
}
