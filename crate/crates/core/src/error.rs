use alloc::string::String;
use core::fmt;

use crate::hypergraph::{Edge, VertexId};
use crate::list_color::InfeasibilityCertificate;
use crate::report::ViolationReport;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Why an extension or embedding does not exist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Infeasibility {
    /// `|Y|` is not a multiple of 3, so `λ·C(Y,3)` has no perfect matching.
    NotDivisible { ny: u32 },
    /// The pair multigraph has no admissible list coloring meeting the quotas.
    ListColoring(InfeasibilityCertificate),
    /// The number of `α³` edges required in some class came out negative.
    NegativeQuota { color: u32, value: i64 },
}

impl fmt::Display for Infeasibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Infeasibility::NotDivisible { ny } => write!(f, "{ny} is not divisible by 3"),
            Infeasibility::ListColoring(cert) => write!(f, "no list coloring: {cert}"),
            Infeasibility::NegativeQuota { color, value } => {
                write!(f, "color {color} would need {value} copies of the α³ edge")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    InvalidSize(String),
    InvalidEdge(String),
    UnknownVertex(VertexId),
    /// The operation needs a loopless host but the edge repeats a vertex.
    NotApplicable(Edge),
    InvalidColoring(ViolationReport),
    InvalidInstance(String),
    NotDivisible {
        n: u32,
    },
    InvalidTargets(String),
    NoDetachmentFound,
    PreconditionViolated(String),
    InvalidFactorization(ViolationReport),
    CapExceeded(String),
    NotFound,
    Infeasible(Infeasibility),
    /// A proved identity failed to hold; always a bug.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidSize(msg) => write!(f, "invalid size: {msg}"),
            Error::InvalidEdge(msg) => write!(f, "invalid edge: {msg}"),
            Error::UnknownVertex(v) => write!(f, "vertex {v} is not in the ground set"),
            Error::NotApplicable(e) => write!(f, "host is not loopless (edge {e})"),
            Error::InvalidColoring(r) => write!(f, "invalid coloring: {r}"),
            Error::InvalidInstance(msg) => write!(f, "invalid instance: {msg}"),
            Error::NotDivisible { n } => write!(f, "{n} is not divisible by 3"),
            Error::InvalidTargets(msg) => write!(f, "invalid detachment targets: {msg}"),
            Error::NoDetachmentFound => f.write_str("no detachment satisfies the bounds"),
            Error::PreconditionViolated(msg) => write!(f, "precondition violated: {msg}"),
            Error::InvalidFactorization(r) => write!(f, "invalid factorization: {r}"),
            Error::CapExceeded(msg) => write!(f, "search cap exceeded: {msg}"),
            Error::NotFound => f.write_str("search exhausted without a solution"),
            Error::Infeasible(why) => write!(f, "infeasible: {why}"),
            Error::Internal(msg) => write!(f, "internal invariant failed: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

impl From<Infeasibility> for Error {
    fn from(value: Infeasibility) -> Self {
        Error::Infeasible(value)
    }
}
