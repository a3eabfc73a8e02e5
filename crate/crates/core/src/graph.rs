//! Problem instances: complete bipartite graphs and paths.
//!
//! Edge indexing is fixed:
//!
//! * complete bipartite `K(L, R)` with `R <= L`: left vertices `l_i` have id `i`,
//!   right vertices `r_j` have id `L + j`, and edge `i * R + j` joins `l_i` and `r_j`;
//! * path with `m` edges: vertices `0..=m`, edge `k` joins vertices `k` and `k + 1`.

use serde::{Deserialize, Serialize};

use crate::error::{EdoError, Result};

/// Vertex identifier under the module's numbering.
pub type VertexId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GraphKind {
    CompleteBipartite { left: usize, right: usize },
    Path { edges: usize },
}

/// An immutable instance. Construct through [`Graph::complete_bipartite`] or [`Graph::path`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphKind", into = "GraphKind")]
pub struct Graph {
    kind: GraphKind,
}

impl Graph {
    /// `K(left, right)`; requires `1 <= right <= left`.
    pub fn complete_bipartite(left: usize, right: usize) -> Result<Self> {
        if right == 0 || left == 0 {
            return Err(EdoError::InvalidGraph(
                "bipartite sides must be non-empty".into(),
            ));
        }
        if right > left {
            return Err(EdoError::InvalidGraph(format!(
                "right side ({right}) larger than left side ({left})"
            )));
        }
        Ok(Self {
            kind: GraphKind::CompleteBipartite { left, right },
        })
    }

    /// A path with `edges >= 1` edges.
    pub fn path(edges: usize) -> Result<Self> {
        if edges == 0 {
            return Err(EdoError::InvalidGraph(
                "path needs at least one edge".into(),
            ));
        }
        Ok(Self {
            kind: GraphKind::Path { edges },
        })
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn is_path(&self) -> bool {
        matches!(self.kind, GraphKind::Path { .. })
    }

    pub fn is_bipartite(&self) -> bool {
        matches!(self.kind, GraphKind::CompleteBipartite { .. })
    }

    /// `(|L|, |R|)` for bipartite graphs.
    pub fn sides(&self) -> Option<(usize, usize)> {
        match self.kind {
            GraphKind::CompleteBipartite { left, right } => Some((left, right)),
            GraphKind::Path { .. } => None,
        }
    }

    /// Edge count.
    pub fn m(&self) -> usize {
        match self.kind {
            GraphKind::CompleteBipartite { left, right } => left * right,
            GraphKind::Path { edges } => edges,
        }
    }

    /// Vertex count.
    pub fn n(&self) -> usize {
        match self.kind {
            GraphKind::CompleteBipartite { left, right } => left + right,
            GraphKind::Path { edges } => edges + 1,
        }
    }

    pub fn max_matching_size(&self) -> usize {
        match self.kind {
            GraphKind::CompleteBipartite { right, .. } => right,
            GraphKind::Path { edges } => edges.div_ceil(2),
        }
    }

    /// Id of `l_i`.
    pub fn left_vertex(&self, i: usize) -> Result<VertexId> {
        match self.kind {
            GraphKind::CompleteBipartite { left, .. } if i < left => Ok(i),
            GraphKind::CompleteBipartite { left, .. } => Err(EdoError::VertexOutOfRange {
                vertex: i,
                vertices: left,
            }),
            GraphKind::Path { .. } => Err(EdoError::WrongFamily {
                expected: "complete bipartite",
            }),
        }
    }

    /// Id of `r_j`.
    pub fn right_vertex(&self, j: usize) -> Result<VertexId> {
        match self.kind {
            GraphKind::CompleteBipartite { left, right } if j < right => Ok(left + j),
            GraphKind::CompleteBipartite { right, .. } => Err(EdoError::VertexOutOfRange {
                vertex: j,
                vertices: right,
            }),
            GraphKind::Path { .. } => Err(EdoError::WrongFamily {
                expected: "complete bipartite",
            }),
        }
    }

    /// Edge index of `(l_i, r_j)`.
    pub fn bipartite_edge(&self, i: usize, j: usize) -> Result<usize> {
        let (left, right) = self.sides().ok_or(EdoError::WrongFamily {
            expected: "complete bipartite",
        })?;
        if i >= left {
            return Err(EdoError::VertexOutOfRange {
                vertex: i,
                vertices: left,
            });
        }
        if j >= right {
            return Err(EdoError::VertexOutOfRange {
                vertex: left + j,
                vertices: left + right,
            });
        }
        Ok(i * right + j)
    }

    pub fn edge_endpoints(&self, e: usize) -> Result<(VertexId, VertexId)> {
        self.check_edge(e)?;
        Ok(self.endpoints_unchecked(e))
    }

    /// All edges incident to `v`, ascending.
    pub fn incident_edges(&self, v: VertexId) -> Result<Vec<usize>> {
        self.check_vertex(v)?;
        let mut edges = Vec::new();
        self.for_each_incident(v, |e| edges.push(e));
        Ok(edges)
    }

    /// Neighbours of `v`, ascending.
    pub fn neighbors(&self, v: VertexId) -> Result<Vec<VertexId>> {
        self.check_vertex(v)?;
        let mut out = Vec::new();
        self.for_each_incident(v, |e| {
            let (a, b) = self.endpoints_unchecked(e);
            out.push(if a == v { b } else { a });
        });
        out.sort_unstable();
        Ok(out)
    }

    pub(crate) fn check_edge(&self, e: usize) -> Result<()> {
        if e < self.m() {
            Ok(())
        } else {
            Err(EdoError::EdgeOutOfRange {
                edge: e,
                edges: self.m(),
            })
        }
    }

    pub(crate) fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(EdoError::VertexOutOfRange {
                vertex: v,
                vertices: self.n(),
            })
        }
    }

    #[inline]
    pub(crate) fn endpoints_unchecked(&self, e: usize) -> (VertexId, VertexId) {
        match self.kind {
            GraphKind::CompleteBipartite { left, right } => (e / right, left + e % right),
            GraphKind::Path { .. } => (e, e + 1),
        }
    }

    /// Calls `f` for each incident edge of `v` in ascending order.
    #[inline]
    pub(crate) fn for_each_incident(&self, v: VertexId, mut f: impl FnMut(usize)) {
        match self.kind {
            GraphKind::CompleteBipartite { left, right } => {
                if v < left {
                    (v * right..(v + 1) * right).for_each(f);
                } else {
                    let j = v - left;
                    (0..left).for_each(|i| f(i * right + j));
                }
            }
            GraphKind::Path { edges } => {
                if v > 0 {
                    f(v - 1);
                }
                if v < edges {
                    f(v);
                }
            }
        }
    }
}

impl TryFrom<GraphKind> for Graph {
    type Error = EdoError;

    fn try_from(kind: GraphKind) -> Result<Self> {
        match kind {
            GraphKind::CompleteBipartite { left, right } => Graph::complete_bipartite(left, right),
            GraphKind::Path { edges } => Graph::path(edges),
        }
    }
}

impl From<Graph> for GraphKind {
    fn from(g: Graph) -> Self {
        g.kind
    }
}

impl std::fmt::Display for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.kind {
            GraphKind::CompleteBipartite { left, right } => write!(f, "K({left},{right})"),
            GraphKind::Path { edges } => write!(f, "P({edges})"),
        }
    }
}
