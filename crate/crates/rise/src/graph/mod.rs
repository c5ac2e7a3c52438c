//! Inductive similarity-graph sequences G_1 ⊂ G_2 ⊂ … ⊂ G_k.
//!
//! Each builder produces nested layers over the pooled observations: layer l
//! adds an edge-disjoint increment (the l-th nearest-neighbor relation, the
//! l-th residual minimum spanning tree, or the l-th residual minimum-weight
//! pairing). Builders are interchangeable strategies behind [`GraphBuilder`]
//! and are selected by name at runtime.

mod blossom;
mod knn;
mod mdp;
mod mst;

pub use blossom::max_weight_matching;
pub use knn::KnnBuilder;
pub use mdp::MdpBuilder;
pub use mst::MstBuilder;

use crate::error::{Result, RiseError};
use crate::geometry::DistanceMatrix;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Knn,
    Mst,
    Mdp,
}

impl GraphKind {
    pub fn name(self) -> &'static str {
        match self {
            GraphKind::Knn => "knn",
            GraphKind::Mst => "mst",
            GraphKind::Mdp => "mdp",
        }
    }
}

impl std::str::FromStr for GraphKind {
    type Err = RiseError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "knn" => Ok(GraphKind::Knn),
            "mst" => Ok(GraphKind::Mst),
            "mdp" => Ok(GraphKind::Mdp),
            other => Err(RiseError::Parse(format!("unknown graph kind `{other}`"))),
        }
    }
}

/// Undirected edge of the sequence, tagged with the first layer containing
/// it. Stored with i < j.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphEdge {
    pub i: u32,
    pub j: u32,
    pub layer: u32,
    pub dist: f64,
}

/// The nested layer sequence. `edges` holds each undirected edge once with
/// the index of the first layer containing it; the edge set of G_l is all
/// edges with layer <= l. For knn, `directed_rank` additionally records the
/// position (1..=k) of j in i's nearest-neighbor list.
#[derive(Debug, Clone)]
pub struct GraphSequence {
    n: usize,
    k: usize,
    kind: GraphKind,
    edges: Vec<GraphEdge>,
    directed_rank: Option<Vec<u32>>,
}

impl GraphSequence {
    pub(crate) fn new(
        n: usize,
        k: usize,
        kind: GraphKind,
        mut edges: Vec<GraphEdge>,
        directed_rank: Option<Vec<u32>>,
    ) -> Self {
        edges.sort_unstable_by_key(|e| (e.layer, e.i, e.j));
        debug_assert!(edges.iter().all(|e| e.i < e.j));
        GraphSequence {
            n,
            k,
            kind,
            edges,
            directed_rank,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    /// All edges of G_k, each once, sorted by (layer, i, j).
    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    /// Number of edges of G_k.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges first appearing in `layer` (1-based).
    pub fn layer_increment(&self, layer: usize) -> impl Iterator<Item = &GraphEdge> {
        self.edges.iter().filter(move |e| e.layer as usize == layer)
    }

    /// Directed nearest-neighbor position of j in i's list (knn only).
    pub fn directed_rank(&self, i: usize, j: usize) -> Option<u32> {
        self.directed_rank.as_ref().and_then(|m| {
            let v = m[i * self.n + j];
            (v > 0).then_some(v)
        })
    }

    /// Vertex degrees in G_k.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n];
        for e in &self.edges {
            deg[e.i as usize] += 1;
            deg[e.j as usize] += 1;
        }
        deg
    }
}

/// A similarity-graph construction strategy.
pub trait GraphBuilder: Send + Sync {
    fn kind(&self) -> GraphKind;

    /// Largest admissible layer count for n vertices.
    fn max_k(&self, n: usize) -> usize;

    /// Build the nested k-layer sequence from a distance matrix.
    fn build(&self, d: &DistanceMatrix, k: usize) -> Result<GraphSequence>;
}

static KNN: KnnBuilder = KnnBuilder;
static MST: MstBuilder = MstBuilder;
static MDP: MdpBuilder = MdpBuilder::exact();

static BUILDERS: [&dyn GraphBuilder; 3] = [&KNN, &MST, &MDP];

/// All registered builders (exact variants).
pub fn builders() -> &'static [&'static dyn GraphBuilder] {
    &BUILDERS
}

/// Look up the default builder for a kind.
pub fn builder(kind: GraphKind) -> &'static dyn GraphBuilder {
    match kind {
        GraphKind::Knn => &KNN,
        GraphKind::Mst => &MST,
        GraphKind::Mdp => &MDP,
    }
}

/// Look up a builder by its registry name.
pub fn builder_by_name(name: &str) -> Option<&'static dyn GraphBuilder> {
    BUILDERS.iter().copied().find(|b| b.kind().name() == name)
}

pub(crate) fn check_layer_range(k: usize, max: usize, graph: &'static str, n: usize) -> Result<()> {
    if k < 1 || k > max {
        Err(RiseError::LayerCountOutOfRange { k, max, graph, n })
    } else {
        Ok(())
    }
}
