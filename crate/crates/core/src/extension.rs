//! Extending a `k`-coloring of `λ·C(X,3)` to a one-factorization of
//! `λ·C(Y,3)`, with `k = λ·C(|Y|−1, 2)`.
//!
//! An extension exists iff `|Y| ≡ 0 (mod 3)` and the pair multigraph
//! `H = λ(|Y|−|X|)·C(X,2)` has a list coloring where `uv` may only take
//! colors missing both `u` and `v` in `F`, and color `i` gets at least
//! `|X| − |Y|/3 − 2|F(i)|` pairs. [`extend`] decides this with the exact
//! list-coloring solver and, on success, builds the factorization by
//! amalgamating `Y \ X` into one vertex and detaching it again.

use alloc::format;
use alloc::vec::Vec;

use num_rational::Ratio;

use crate::binomial;
use crate::detach::{detach, DetachmentTask};
use crate::error::{Error, Infeasibility, Result};
use crate::hypergraph::{
    complete_triples, verify_one_factorization, verify_proper, Coloring, Edge, Hypergraph,
};
use crate::list_color::{self, ListAssignment, QuotaVector};

/// A coloring `F` of `λ·C({1..nx},3)` with `k = λ·C(ny−1,2)` classes, to be
/// extended to `λ·C({1..ny},3)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionInstance {
    nx: u32,
    ny: u32,
    lambda: u32,
    f: Coloring,
}

/// `λ·C(ny−1, 2)`, the number of classes of a one-factorization of
/// `λ·C(Y,3)`.
pub fn factor_count(ny: u32, lambda: u32) -> u32 {
    (lambda as u64 * binomial(ny as u64 - 1, 2)) as u32
}

impl ExtensionInstance {
    /// Validates `f` and pads it with empty classes up to `k`.
    pub fn new(nx: u32, ny: u32, lambda: u32, f: Coloring) -> Result<Self> {
        if nx < 3 {
            return Err(Error::InvalidInstance(format!("|X| = {nx} < 3")));
        }
        if ny <= nx {
            return Err(Error::InvalidInstance(format!(
                "|Y| = {ny} must exceed |X| = {nx}"
            )));
        }
        if lambda == 0 {
            return Err(Error::InvalidInstance("λ must be positive".into()));
        }
        if f.ground() > nx {
            return Err(Error::InvalidInstance(format!(
                "coloring lives on {} vertices, |X| = {nx}",
                f.ground()
            )));
        }
        let f = f.with_ground(nx)?.padded(factor_count(ny, lambda))?;
        if !f.host().same_edges(&complete_triples(nx, lambda)?) {
            return Err(Error::InvalidInstance(format!(
                "coloring does not cover {lambda}·C({nx},3) exactly"
            )));
        }
        verify_proper(&f)?;
        Ok(ExtensionInstance { nx, ny, lambda, f })
    }

    pub fn nx(&self) -> u32 {
        self.nx
    }

    pub fn ny(&self) -> u32 {
        self.ny
    }

    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    pub fn k(&self) -> u32 {
        self.f.k()
    }

    pub fn coloring(&self) -> &Coloring {
        &self.f
    }

    /// `|F(i)|` for 1-based `i`.
    pub fn class_size(&self, color: u32) -> u32 {
        self.f.class(color).size() as u32
    }

    fn m(&self) -> u32 {
        self.ny - self.nx
    }
}

/// Per-color slack in `|F(i)| ≥ |X| − 2|Y|/3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NecessityReport {
    pub ryser_ok: bool,
    pub margins: Vec<Ratio<i64>>,
}

/// Evaluates the necessary per-color lower bound `|F(i)| ≥ |X| − 2|Y|/3`.
pub fn check_ryser(inst: &ExtensionInstance) -> NecessityReport {
    let margins: Vec<Ratio<i64>> = (1..=inst.k())
        .map(|i| {
            let f = inst.class_size(i) as i64;
            Ratio::new(3 * f - 3 * inst.nx as i64 + 2 * inst.ny as i64, 3)
        })
        .collect();
    let ryser_ok = margins.iter().all(|m| *m >= Ratio::from_integer(0));
    NecessityReport { ryser_ok, margins }
}

/// `γ(uv)`: colors whose class in `F` touches neither `u` nor `v`.
pub fn gamma_lists(inst: &ExtensionInstance) -> ListAssignment {
    let degrees: Vec<Vec<u32>> = inst.f.classes().iter().map(Hypergraph::degrees).collect();
    let mut gamma = ListAssignment::new(inst.k());
    for u in 1..=inst.nx {
        for v in u + 1..=inst.nx {
            let colors = (1..=inst.k()).filter(|&i| {
                let d = &degrees[i as usize - 1];
                d[u as usize] == 0 && d[v as usize] == 0
            });
            gamma
                .set(Edge::pair(u, v), colors)
                .expect("pairs of X and colors in 1..=k");
        }
    }
    gamma
}

/// `q[i] = max(0, |X| − |Y|/3 − 2|F(i)|)`.
pub fn quotas(inst: &ExtensionInstance) -> Result<QuotaVector> {
    if !inst.ny.is_multiple_of(3) {
        return Err(Error::NotDivisible { n: inst.ny });
    }
    let base = inst.nx as i64 - inst.ny as i64 / 3;
    Ok(QuotaVector::new(
        (1..=inst.k())
            .map(|i| (base - 2 * inst.class_size(i) as i64).max(0) as u32)
            .collect(),
    ))
}

/// `H = λ(|Y|−|X|)·C(X,2)`: one pair per future `αuv` edge.
pub fn pair_multigraph(inst: &ExtensionInstance) -> Hypergraph {
    let mut h = Hypergraph::new(inst.nx);
    for u in 1..=inst.nx {
        for v in u + 1..=inst.nx {
            h.add(Edge::pair(u, v), inst.lambda * inst.m())
                .expect("pair inside X");
        }
    }
    h
}

/// Which closed-form sufficient condition, if any, guarantees an extension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sufficiency {
    /// Every class has `|F(i)| ≥ |X|/2 − |Y|/6`.
    ClassSizeBound,
    /// All quotas vanish and every list has at least `λ|X|(|Y|−|X|)` colors.
    ListSizeBound,
    /// Neither certificate applies; [`extend`] still decides the instance.
    Unknown,
}

pub fn sufficiency_certificate(inst: &ExtensionInstance) -> Result<Sufficiency> {
    let q = quotas(inst)?;
    let (nx, ny) = (inst.nx as i64, inst.ny as i64);
    if (1..=inst.k()).all(|i| 6 * inst.class_size(i) as i64 >= 3 * nx - ny) {
        return Ok(Sufficiency::ClassSizeBound);
    }
    let threshold = list_color::hj_threshold((inst.lambda * inst.m()) as u64, inst.nx as u64);
    if q.total() == 0 && gamma_lists(inst).min_len() as u64 >= threshold {
        return Ok(Sufficiency::ListSizeBound);
    }
    Ok(Sufficiency::Unknown)
}

/// `(|F(i)|, |H(i)|, c_i, d_i)` where `c_i` and `d_i` count the edges of
/// class `i` meeting `X` in one and in no vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CensusRow {
    pub f: u32,
    pub h: u32,
    pub c: i64,
    pub d: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassCensus {
    pub rows: Vec<CensusRow>,
}

impl ClassCensus {
    /// Colors with `d_i < 0`, i.e. where the quota inequality fails.
    pub fn negative_colors(&self) -> Vec<u32> {
        (1..=self.rows.len() as u32)
            .filter(|&i| self.rows[i as usize - 1].d < 0)
            .collect()
    }

    /// `3F + 2H + c = |X|` and `F + H + c + d = |Y|/3` for every row.
    pub fn identities_hold(&self, nx: u32, ny: u32) -> bool {
        self.rows.iter().all(|r| {
            3 * r.f as i64 + 2 * r.h as i64 + r.c == nx as i64
                && 3 * (r.f as i64 + r.h as i64 + r.c + r.d) == ny as i64
        })
    }
}

/// Solves the two class-counting equations for `c_i` and `d_i` given the
/// sizes of `F(i)` and `H(i)`. Assumes `|Y| ≡ 0 (mod 3)`.
pub fn class_census(inst: &ExtensionInstance, h_coloring: &Coloring) -> ClassCensus {
    let third = inst.ny as i64 / 3;
    ClassCensus {
        rows: (1..=inst.k())
            .map(|i| {
                let f = inst.class_size(i);
                let h = if i <= h_coloring.k() {
                    h_coloring.class(i).size() as u32
                } else {
                    0
                };
                let c = inst.nx as i64 - 3 * f as i64 - 2 * h as i64;
                let d = third - f as i64 - h as i64 - c;
                CensusRow { f, h, c, d }
            })
            .collect(),
    }
}

/// Counts, in each class of a factorization of `λ·C(Y,3)`, the edges meeting
/// `X = 1..=nx` in 3, 2, 1 and 0 vertices.
pub fn census_of_factorization(nx: u32, factorization: &Coloring) -> ClassCensus {
    ClassCensus {
        rows: factorization
            .classes()
            .iter()
            .map(|class| {
                let mut row = CensusRow {
                    f: 0,
                    h: 0,
                    c: 0,
                    d: 0,
                };
                for (e, mult) in class.iter() {
                    match e.vertices().iter().filter(|&&v| v <= nx).count() {
                        3 => row.f += mult,
                        2 => row.h += mult,
                        1 => row.c += mult as i64,
                        _ => row.d += mult as i64,
                    }
                }
                row
            })
            .collect(),
    }
}

/// Everything the pipeline built on the way to a factorization.
#[derive(Clone, Debug)]
pub struct ExtensionTrace {
    /// The list coloring of `H`.
    pub h_coloring: Coloring,
    /// `F` plus the colored `αuv`, `α²u` and `α³` edges; `α = |X| + 1`.
    pub amalgamated: Coloring,
    pub task: DetachmentTask,
    pub factorization: Coloring,
}

/// Adds `α = nx + 1` with its `αuv`, `α²u` and `α³` edges, colored so that
/// `α` has degree `|Y| − |X|` and every `u ∈ X` degree 1 in every class.
pub fn amalgamate(inst: &ExtensionInstance, h_coloring: &Coloring) -> Result<Coloring> {
    let nx = inst.nx;
    let alpha = nx + 1;
    let third = inst.ny as i64 / 3;
    let mut g = inst.f.clone().with_ground(alpha)?;
    for (i, class) in h_coloring.iter() {
        for (e, mult) in class.iter() {
            let [u, v] = [e.vertices()[0], e.vertices()[1]];
            g.add_edge(i, Edge::triple(u, v, alpha), mult)?;
        }
    }
    for i in 1..=inst.k() {
        let degrees = g.class(i).degrees();
        for u in 1..=nx {
            match degrees[u as usize] {
                0 => g.add_edge(i, Edge::triple(u, alpha, alpha), 1)?,
                1 => {}
                d => {
                    return Err(Error::Internal(format!(
                        "vertex {u} has degree {d} in class {i} before adding α²u edges"
                    )))
                }
            }
        }
        let f = inst.class_size(i) as i64;
        let h = h_coloring.class(i).size() as i64;
        let cubes = 2 * f + h - nx as i64 + third;
        if cubes < 0 {
            return Err(Infeasibility::NegativeQuota {
                color: i,
                value: cubes,
            }
            .into());
        }
        g.add_edge(i, Edge::triple(alpha, alpha, alpha), cubes as u32)?;
    }

    let m = inst.m() as u64;
    let lambda = inst.lambda as u64;
    for u in 1..=nx {
        let total = g.host().mult(&Edge::triple(u, alpha, alpha)) as u64;
        if total != lambda * binomial(m, 2) {
            return Err(Error::Internal(format!(
                "α²{u} budget {total} ≠ λ·C({m},2)"
            )));
        }
    }
    let total = g.host().mult(&Edge::triple(alpha, alpha, alpha)) as u64;
    if total != lambda * binomial(m, 3) {
        return Err(Error::Internal(format!("α³ budget {total} ≠ λ·C({m},3)")));
    }
    for (i, class) in g.iter() {
        if class.degree_of(alpha) as u64 != m {
            return Err(Error::Internal(format!("α has degree ≠ {m} in class {i}")));
        }
    }
    Ok(g)
}

/// Extends `F` to a one-factorization of `λ·C({1..ny},3)` whose restriction
/// to `C(X,3)` is `F`, class by class.
pub fn extend(inst: &ExtensionInstance) -> Result<Coloring> {
    extend_traced(inst).map(|t| t.factorization)
}

pub fn extend_traced(inst: &ExtensionInstance) -> Result<ExtensionTrace> {
    if !inst.ny.is_multiple_of(3) {
        return Err(Infeasibility::NotDivisible { ny: inst.ny }.into());
    }
    let h = pair_multigraph(inst);
    let gamma = gamma_lists(inst);
    let q = quotas(inst)?;
    let h_coloring = list_color::solve(&h, &gamma, &q)?;

    let amalgamated = amalgamate(inst, &h_coloring)?;
    let task = DetachmentTask::even(amalgamated.clone(), inst.nx + 1, inst.m())?;
    let factorization = detach(&task)?;

    if let Err(r) = verify_one_factorization(&factorization) {
        return Err(Error::Internal(format!(
            "detached coloring is not a factorization: {r}"
        )));
    }
    if !factorization
        .host()
        .same_edges(&complete_triples(inst.ny, inst.lambda)?)
    {
        return Err(Error::Internal("detached host is not λ·C(Y,3)".into()));
    }
    let restricted = factorization.restrict(inst.nx);
    if restricted
        .classes()
        .iter()
        .zip(inst.f.classes())
        .any(|(a, b)| !a.same_edges(b))
    {
        return Err(Error::Internal("restriction to X differs from F".into()));
    }
    Ok(ExtensionTrace {
        h_coloring,
        amalgamated,
        task,
        factorization,
    })
}
