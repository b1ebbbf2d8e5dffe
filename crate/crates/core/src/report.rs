//! Violation reports shared by the verifiers.

use alloc::vec::Vec;
use core::fmt;

use crate::hypergraph::{Edge, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Two edge instances of one class share a vertex.
    Conflict {
        color: u32,
        first: Edge,
        second: Edge,
    },
    /// A vertex is missing from, or covered more than once by, a class that
    /// should partition the ground set.
    Cover {
        color: u32,
        vertex: VertexId,
        count: u32,
    },
    /// The classes do not add up to the expected host.
    HostMismatch {
        edge: Edge,
        expected: u32,
        found: u32,
    },
    /// An edge received a color outside its list.
    NotInList { color: u32, edge: Edge },
    /// A class is smaller than its quota.
    Quota { color: u32, size: u32, quota: u32 },
    /// Degree of a detached vertex in a class lies outside its bounds.
    Degree {
        vertex: VertexId,
        color: u32,
        degree: u32,
        lo: u32,
        hi: u32,
    },
    /// A detached edge type has the wrong multiplicity.
    Multiplicity {
        edge: Edge,
        expected: u32,
        found: u32,
    },
    /// A layer of a cube is not rainbow.
    Layer {
        axis: u8,
        index: u32,
        symbol: u32,
        count: u32,
    },
    /// A symmetry condition of a cube fails at the given cell.
    Symmetry { cell: [u32; 3], other: [u32; 3] },
    /// An entry is out of range.
    Entry { cell: [u32; 3], symbol: u32 },
    /// Anything that does not fit the shapes above.
    Other(&'static str),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Conflict {
                color,
                first,
                second,
            } => {
                write!(f, "class {color}: {first} and {second} intersect")
            }
            Violation::Cover {
                color,
                vertex,
                count,
            } => {
                write!(f, "class {color}: vertex {vertex} covered {count} times")
            }
            Violation::HostMismatch {
                edge,
                expected,
                found,
            } => {
                write!(
                    f,
                    "edge {edge}: expected multiplicity {expected}, found {found}"
                )
            }
            Violation::NotInList { color, edge } => {
                write!(f, "edge {edge} colored {color} outside its list")
            }
            Violation::Quota { color, size, quota } => {
                write!(f, "class {color} has {size} edges, quota {quota}")
            }
            Violation::Degree {
                vertex,
                color,
                degree,
                lo,
                hi,
            } => write!(
                f,
                "vertex {vertex} has degree {degree} in class {color}, bounds [{lo},{hi}]"
            ),
            Violation::Multiplicity {
                edge,
                expected,
                found,
            } => {
                write!(
                    f,
                    "edge {edge}: target multiplicity {expected}, found {found}"
                )
            }
            Violation::Layer {
                axis,
                index,
                symbol,
                count,
            } => write!(
                f,
                "layer {index} along axis {axis} holds symbol {symbol} {count} times"
            ),
            Violation::Symmetry { cell, other } => {
                write!(f, "cells {cell:?} and {other:?} differ")
            }
            Violation::Entry { cell, symbol } => write!(f, "cell {cell:?} holds symbol {symbol}"),
            Violation::Other(msg) => f.write_str(msg),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ViolationReport {
    pub violations: Vec<Violation>,
}

impl ViolationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn into_result(self) -> Result<(), ViolationReport> {
        if self.is_empty() {
            Ok(())
        } else {
            Err(self)
        }
    }
}

impl fmt::Display for ViolationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}
