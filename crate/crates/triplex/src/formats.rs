//! JSON file formats.
//!
//! Edges are vertex arrays; inside a color class a repeated edge is listed
//! once per copy. Colors and vertices are 1-based, as in the core crate.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, ensure, Context, Result};
use serde::{Deserialize, Serialize};
use triplex_core::cube::{LatinCube, MixedFactorization};
use triplex_core::detach::{DetachmentTask, Interval};
use triplex_core::evans::PartialInstance;
use triplex_core::extension::ExtensionInstance;
use triplex_core::list_color::{InfeasibilityCertificate, ListAssignment, QuotaVector};
use triplex_core::{Coloring, Edge, Hypergraph, Infeasibility, ViolationReport};

pub fn edge(verts: &[u32]) -> Result<Edge> {
    Edge::new(verts).map_err(|e| anyhow!("{e}"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeMult {
    pub verts: Vec<u32>,
    #[serde(default = "one")]
    pub mult: u32,
}

fn one() -> u32 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypergraphJson {
    pub ground: u32,
    pub edges: Vec<EdgeMult>,
}

impl From<&Hypergraph> for HypergraphJson {
    fn from(h: &Hypergraph) -> Self {
        HypergraphJson {
            ground: h.ground(),
            edges: h
                .iter()
                .map(|(e, m)| EdgeMult {
                    verts: e.vertices().to_vec(),
                    mult: m,
                })
                .collect(),
        }
    }
}

impl HypergraphJson {
    pub fn to_core(&self) -> Result<Hypergraph> {
        let mut h = Hypergraph::new(self.ground);
        for e in &self.edges {
            h.add(edge(&e.verts)?, e.mult).map_err(|e| anyhow!("{e}"))?;
        }
        Ok(h)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassJson {
    pub color: u32,
    pub edges: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringJson {
    pub k: u32,
    /// Defaults to the largest vertex mentioned.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ground: Option<u32>,
    pub classes: Vec<ClassJson>,
}

impl From<&Coloring> for ColoringJson {
    fn from(c: &Coloring) -> Self {
        ColoringJson {
            k: c.k(),
            ground: Some(c.ground()),
            classes: c
                .iter()
                .map(|(color, class)| ClassJson {
                    color,
                    edges: class.instances().map(|e| e.vertices().to_vec()).collect(),
                })
                .collect(),
        }
    }
}

impl ColoringJson {
    pub fn to_core(&self) -> Result<Coloring> {
        let max = self
            .classes
            .iter()
            .flat_map(|c| c.edges.iter().flatten())
            .copied()
            .max()
            .unwrap_or(0);
        let ground = self.ground.unwrap_or(max);
        ensure!(
            max <= ground,
            "vertex {max} outside ground set 1..={ground}"
        );
        let mut out = Coloring::empty(ground, self.k);
        for class in &self.classes {
            ensure!(
                (1..=self.k).contains(&class.color),
                "color {} outside 1..={}",
                class.color,
                self.k
            );
            for verts in &class.edges {
                out.add_edge(class.color, edge(verts)?, 1)
                    .map_err(|e| anyhow!("{e}"))?;
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListEntry {
    pub edge: Vec<u32>,
    pub colors: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListAssignmentJson {
    pub k: u32,
    pub lists: Vec<ListEntry>,
}

impl From<&ListAssignment> for ListAssignmentJson {
    fn from(l: &ListAssignment) -> Self {
        ListAssignmentJson {
            k: l.k(),
            lists: l
                .iter()
                .map(|(e, cs)| ListEntry {
                    edge: e.vertices().to_vec(),
                    colors: cs.iter().copied().collect(),
                })
                .collect(),
        }
    }
}

impl ListAssignmentJson {
    pub fn to_core(&self) -> Result<ListAssignment> {
        let mut l = ListAssignment::new(self.k);
        for entry in &self.lists {
            l.set(edge(&entry.edge)?, entry.colors.iter().copied())
                .map_err(|e| anyhow!("{e}"))?;
        }
        Ok(l)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotaJson {
    pub quotas: Vec<u32>,
}

impl From<&QuotaVector> for QuotaJson {
    fn from(q: &QuotaVector) -> Self {
        QuotaJson {
            quotas: q.as_slice().to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceJson {
    pub nx: u32,
    pub ny: u32,
    pub lambda: u32,
    pub coloring: ColoringJson,
}

impl InstanceJson {
    pub fn to_core(&self) -> Result<ExtensionInstance> {
        ExtensionInstance::new(self.nx, self.ny, self.lambda, self.coloring.to_core()?)
            .map_err(|e| anyhow!("{e}"))
    }
}

impl From<&ExtensionInstance> for InstanceJson {
    fn from(inst: &ExtensionInstance) -> Self {
        InstanceJson {
            nx: inst.nx(),
            ny: inst.ny(),
            lambda: inst.lambda(),
            coloring: inst.coloring().into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialInstanceJson {
    pub nx: u32,
    pub ny: u32,
    pub lambda: u32,
    pub q: u32,
    pub coloring: ColoringJson,
}

impl PartialInstanceJson {
    pub fn to_core(&self) -> Result<PartialInstance> {
        let f = self.coloring.to_core()?;
        ensure!(
            f.k() <= self.q,
            "coloring has {} colors but q = {}",
            f.k(),
            self.q
        );
        PartialInstance::new(self.nx, self.ny, self.lambda, self.q, f).map_err(|e| anyhow!("{e}"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetachTaskJson {
    pub graph: ColoringJson,
    pub alpha: u32,
    pub m: u32,
    /// `degree_bounds[i][j] = [lo, hi]` for detached vertex `i+1` in color `j+1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_bounds: Option<Vec<Vec<[u32; 2]>>>,
    /// Omit both bounds and targets to share everything evenly.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mult_targets: Option<Vec<EdgeMult>>,
}

impl DetachTaskJson {
    pub fn to_core(&self) -> Result<DetachmentTask> {
        let graph = self.graph.to_core()?;
        match (&self.degree_bounds, &self.mult_targets) {
            (None, None) => {
                DetachmentTask::even(graph, self.alpha, self.m).map_err(|e| anyhow!("{e}"))
            }
            (Some(bounds), Some(targets)) => {
                let degree_bounds = bounds
                    .iter()
                    .map(|row| row.iter().map(|&[lo, hi]| Interval::new(lo, hi)).collect())
                    .collect();
                let mut mult_targets = BTreeMap::new();
                for t in targets {
                    mult_targets.insert(edge(&t.verts)?, t.mult);
                }
                let task = DetachmentTask {
                    graph,
                    alpha: self.alpha,
                    m: self.m,
                    degree_bounds,
                    mult_targets,
                };
                task.validate().map_err(|e| anyhow!("{e}"))?;
                Ok(task)
            }
            _ => bail!("give both degree_bounds and mult_targets, or neither"),
        }
    }
}

impl From<&DetachmentTask> for DetachTaskJson {
    fn from(t: &DetachmentTask) -> Self {
        DetachTaskJson {
            graph: (&t.graph).into(),
            alpha: t.alpha,
            m: t.m,
            degree_bounds: Some(
                t.degree_bounds
                    .iter()
                    .map(|row| row.iter().map(|b| [b.lo, b.hi]).collect())
                    .collect(),
            ),
            mult_targets: Some(
                t.mult_targets
                    .iter()
                    .map(|(e, &m)| EdgeMult {
                        verts: e.vertices().to_vec(),
                        mult: m,
                    })
                    .collect(),
            ),
        }
    }
}

/// Symbol names: `A`..`Z` up to 26 symbols, otherwise `s1`, `s2`, ...
pub fn symbol_names(count: u32) -> Vec<String> {
    if count <= 26 {
        (0..count)
            .map(|i| char::from(b'A' + i as u8).to_string())
            .collect()
    } else {
        (1..=count).map(|i| format!("s{i}")).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubeJson {
    pub n: u32,
    pub symbols: Vec<String>,
    /// `entries[i][j][l]` is the symbol in cell `(i+1, j+1, l+1)`.
    pub entries: Vec<Vec<Vec<String>>>,
}

impl From<&LatinCube> for CubeJson {
    fn from(c: &LatinCube) -> Self {
        let symbols = symbol_names(c.n() * c.n());
        let name = |s: u32| {
            symbols
                .get(s as usize - 1)
                .cloned()
                .unwrap_or_else(|| "?".into())
        };
        CubeJson {
            n: c.n(),
            entries: c
                .layers()
                .iter()
                .map(|layer| {
                    layer
                        .iter()
                        .map(|row| row.iter().map(|&s| name(s)).collect())
                        .collect()
                })
                .collect(),
            symbols,
        }
    }
}

impl CubeJson {
    pub fn to_core(&self) -> Result<LatinCube> {
        ensure!(
            self.entries.len() == self.n as usize,
            "expected {} layers",
            self.n
        );
        let index: BTreeMap<&str, u32> = self
            .symbols
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i as u32 + 1))
            .collect();
        ensure!(index.len() == self.symbols.len(), "duplicate symbol names");
        let layers = self
            .entries
            .iter()
            .map(|layer| {
                layer
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|s| {
                                index
                                    .get(s.as_str())
                                    .copied()
                                    .ok_or_else(|| anyhow!("unknown symbol {s:?}"))
                            })
                            .collect::<Result<Vec<u32>>>()
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        LatinCube::from_layers(&layers).map_err(|e| anyhow!("{e}"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedJson {
    pub n: u32,
    /// Each class is a list of blocks.
    pub classes: Vec<Vec<Vec<u32>>>,
}

impl From<&MixedFactorization> for MixedJson {
    fn from(mf: &MixedFactorization) -> Self {
        MixedJson {
            n: mf.n(),
            classes: mf
                .classes()
                .iter()
                .map(|c| c.instances().map(|e| e.vertices().to_vec()).collect())
                .collect(),
        }
    }
}

impl MixedJson {
    pub fn to_core(&self) -> Result<MixedFactorization> {
        let classes = self
            .classes
            .iter()
            .map(|blocks| {
                let mut h = Hypergraph::new(self.n);
                for b in blocks {
                    h.add(edge(b)?, 1).map_err(|e| anyhow!("{e}"))?;
                }
                Ok(h)
            })
            .collect::<Result<Vec<_>>>()?;
        MixedFactorization::new(self.n, classes).map_err(|e| anyhow!("{e}"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum CertificateJson {
    QuotaSum {
        sum: u64,
        edges: u64,
    },
    ColorCapacity {
        color: u32,
        quota: u32,
        capacity: u32,
    },
    EmptyList {
        edge: Vec<u32>,
    },
    SearchExhausted {
        nodes: u64,
    },
    NotDivisible {
        ny: u32,
    },
    NegativeQuota {
        color: u32,
        value: i64,
    },
    NotFound,
    NoWitness,
}

impl From<&Infeasibility> for CertificateJson {
    fn from(i: &Infeasibility) -> Self {
        match i {
            Infeasibility::NotDivisible { ny } => CertificateJson::NotDivisible { ny: *ny },
            Infeasibility::NegativeQuota { color, value } => CertificateJson::NegativeQuota {
                color: *color,
                value: *value,
            },
            Infeasibility::ListColoring(c) => match c {
                InfeasibilityCertificate::QuotaSum { sum, edges } => CertificateJson::QuotaSum {
                    sum: *sum,
                    edges: *edges,
                },
                InfeasibilityCertificate::ColorCapacity {
                    color,
                    quota,
                    capacity,
                } => CertificateJson::ColorCapacity {
                    color: *color,
                    quota: *quota,
                    capacity: *capacity,
                },
                InfeasibilityCertificate::EmptyList { edge } => CertificateJson::EmptyList {
                    edge: edge.vertices().to_vec(),
                },
                InfeasibilityCertificate::SearchExhausted { nodes } => {
                    CertificateJson::SearchExhausted { nodes: *nodes }
                }
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub ok: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<String>,
}

impl VerdictJson {
    pub fn from_result(r: &std::result::Result<(), ViolationReport>) -> Self {
        match r {
            Ok(()) => VerdictJson {
                ok: true,
                violations: Vec::new(),
            },
            Err(report) => VerdictJson {
                ok: false,
                violations: report.violations.iter().map(|v| v.to_string()).collect(),
            },
        }
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &std::path::Path) -> Result<T> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).context("reading stdin")?
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use triplex_core::complete_triples;

    #[test]
    fn coloring_round_trip() {
        let mut c = Coloring::empty(6, 3);
        c.add_edge(1, Edge::triple(1, 2, 3), 2).unwrap();
        c.add_edge(3, Edge::triple(4, 5, 6), 1).unwrap();
        let json = ColoringJson::from(&c);
        assert_eq!(json.classes[0].edges.len(), 2);
        let text = serde_json::to_string(&json).unwrap();
        let back: ColoringJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_core().unwrap(), c);
    }

    #[test]
    fn ground_defaults_to_largest_vertex() {
        let json: ColoringJson =
            serde_json::from_str(r#"{"k":2,"classes":[{"color":2,"edges":[[1,2,5]]}]}"#).unwrap();
        let c = json.to_core().unwrap();
        assert_eq!(c.ground(), 5);
        assert_eq!(c.class(2).size(), 1);
        let bad: ColoringJson =
            serde_json::from_str(r#"{"k":2,"classes":[{"color":3,"edges":[]}]}"#).unwrap();
        assert!(bad.to_core().is_err());
    }

    #[test]
    fn hypergraph_round_trip() {
        let h = complete_triples(4, 2).unwrap();
        let json = HypergraphJson::from(&h);
        assert_eq!(
            json.edges[0],
            EdgeMult {
                verts: vec![1, 2, 3],
                mult: 2
            }
        );
        assert_eq!(json.to_core().unwrap(), h);
    }

    #[test]
    fn certificate_shape() {
        let cert = CertificateJson::from(&Infeasibility::ListColoring(
            InfeasibilityCertificate::QuotaSum { sum: 54, edges: 45 },
        ));
        assert_eq!(
            serde_json::to_value(&cert).unwrap(),
            serde_json::json!({"kind": "QuotaSum", "sum": 54, "edges": 45})
        );
    }

    #[test]
    fn symbols() {
        assert_eq!(symbol_names(4), ["A", "B", "C", "D"]);
        assert_eq!(symbol_names(36)[35], "s36");
    }
}
