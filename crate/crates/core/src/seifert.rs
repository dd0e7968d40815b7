//! Signed Seifert graphs: block decomposition, homogeneity, rank, and the
//! block-sign sums that drive the degree bounds.

use serde::Serialize;
use thiserror::Error;

use crate::diagram::{LinkDiagram, Sign};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeifertError {
    #[error("Seifert graph has a block with edges of both signs")]
    NotHomogeneous,
    #[error("diagram has {0} connected components, expected 1")]
    DisconnectedDiagram(usize),
    #[error("diagram is not alternating")]
    NotAlternating,
    #[error("diagram has nugatory crossings {0:?}")]
    NotReduced(Vec<usize>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SignedEdge {
    pub ends: (usize, usize),
    pub sign: Sign,
    /// Index of the crossing this edge comes from.
    pub crossing: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignedGraph {
    pub vertex_count: usize,
    pub edges: Vec<SignedEdge>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockSign {
    Positive,
    Negative,
    Mixed,
}

impl BlockSign {
    pub fn value(self) -> Option<i64> {
        match self {
            BlockSign::Positive => Some(1),
            BlockSign::Negative => Some(-1),
            BlockSign::Mixed => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    pub vertices: Vec<usize>,
    /// Indices into `SignedGraph::edges`.
    pub edges: Vec<usize>,
    pub sign: BlockSign,
    pub rank: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphAnalysis {
    pub blocks: Vec<Block>,
    pub is_homogeneous: bool,
    pub is_positive: bool,
    pub is_negative: bool,
    pub rank: i64,
    /// Sum of sign times rank over blocks; absent when some block is mixed.
    pub eps_rank_sum: Option<i64>,
    pub component_count: usize,
    pub positive_blocks: usize,
    pub negative_blocks: usize,
}

impl GraphAnalysis {
    pub fn eps_rank_sum(&self) -> Result<i64, SeifertError> {
        self.eps_rank_sum.ok_or(SeifertError::NotHomogeneous)
    }
}

impl SignedGraph {
    pub fn new(vertex_count: usize, edges: impl IntoIterator<Item = ((usize, usize), Sign)>) -> Self {
        let edges = edges
            .into_iter()
            .enumerate()
            .map(|(i, (ends, sign))| {
                assert!(ends.0 != ends.1, "self-loop at vertex {}", ends.0);
                assert!(ends.0 < vertex_count && ends.1 < vertex_count);
                SignedEdge { ends, sign, crossing: i }
            })
            .collect();
        SignedGraph { vertex_count, edges }
    }

    pub fn rank(&self) -> i64 {
        -(self.vertex_count as i64) + self.edges.len() as i64 + self.component_count() as i64
    }

    pub fn component_count(&self) -> usize {
        self.components_where(|_| true)
    }

    /// Connected components using only edges accepted by `keep`.
    pub fn components_where(&self, keep: impl Fn(&SignedEdge) -> bool) -> usize {
        let mut parent: Vec<usize> = (0..self.vertex_count).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut count = self.vertex_count;
        for e in self.edges.iter().filter(|e| keep(e)) {
            let (a, b) = (find(&mut parent, e.ends.0), find(&mut parent, e.ends.1));
            if a != b {
                parent[a.max(b)] = a.min(b);
                count -= 1;
            }
        }
        count
    }

    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.ends.0].push((e.ends.1, i));
            adj[e.ends.1].push((e.ends.0, i));
        }
        adj
    }

    /// Edge indices of a breadth-first spanning forest.
    pub fn spanning_forest(&self) -> Vec<usize> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertex_count];
        let mut tree = Vec::new();
        for root in 0..self.vertex_count {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for &(w, e) in &adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        tree.push(e);
                        queue.push_back(w);
                    }
                }
            }
        }
        tree
    }
}

/// One vertex per Seifert circle, one signed edge per crossing.
pub fn build_seifert_graph(d: &LinkDiagram) -> SignedGraph {
    let circles = d.seifert_circles();
    let max_arc = circles.circles.iter().flatten().copied().max().map_or(0, |m| m as usize + 1);
    let mut circle_of = vec![usize::MAX; max_arc];
    for (i, c) in circles.circles.iter().enumerate() {
        for &a in c {
            circle_of[a as usize] = i;
        }
    }
    let edges = d
        .crossings()
        .iter()
        .map(|x| {
            let arcs = x.arcs();
            ((circle_of[arcs[0] as usize], circle_of[arcs[2] as usize]), x.sign())
        });
    SignedGraph::new(circles.count(), edges)
}

/// Biconnected components by depth-first low-point computation. Bridges
/// come out as single-edge blocks and isolated vertices as vertex-only
/// blocks.
pub fn block_decomposition(g: &SignedGraph) -> Vec<Block> {
    let adj = g.adjacency();
    let n = g.vertex_count;
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut time = 0;
    let mut edge_stack: Vec<usize> = Vec::new();
    let mut blocks = Vec::new();

    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        if adj[root].is_empty() {
            disc[root] = time;
            time += 1;
            blocks.push(make_block(g, vec![root], Vec::new()));
            continue;
        }
        // (vertex, edge used to reach it, next adjacency index)
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        disc[root] = time;
        low[root] = time;
        time += 1;
        while let Some(&mut (u, via, ref mut next)) = stack.last_mut() {
            if let Some(&(w, e)) = adj[u].get(*next) {
                *next += 1;
                if e == via {
                    continue;
                }
                if disc[w] == usize::MAX {
                    edge_stack.push(e);
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, e, 0));
                } else if disc[w] < disc[u] {
                    edge_stack.push(e);
                    low[u] = low[u].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(parent, _, _)) = stack.last() {
                    low[parent] = low[parent].min(low[u]);
                    if low[u] >= disc[parent] {
                        let mut edges = Vec::new();
                        while let Some(e) = edge_stack.pop() {
                            edges.push(e);
                            if e == via {
                                break;
                            }
                        }
                        let mut vertices: Vec<usize> =
                            edges.iter().flat_map(|&e| [g.edges[e].ends.0, g.edges[e].ends.1]).collect();
                        vertices.sort_unstable();
                        vertices.dedup();
                        edges.sort_unstable();
                        blocks.push(make_block(g, vertices, edges));
                    }
                }
            }
        }
    }
    blocks
}

fn make_block(g: &SignedGraph, vertices: Vec<usize>, edges: Vec<usize>) -> Block {
    let pos = edges.iter().filter(|&&e| g.edges[e].sign == Sign::Positive).count();
    let sign = if pos == edges.len() {
        // vertex-only blocks count as positive
        BlockSign::Positive
    } else if pos == 0 {
        BlockSign::Negative
    } else {
        BlockSign::Mixed
    };
    let rank = -(vertices.len() as i64) + edges.len() as i64 + 1;
    Block { vertices, edges, sign, rank }
}

pub fn analyze(g: &SignedGraph) -> GraphAnalysis {
    let blocks = block_decomposition(g);
    let is_homogeneous = blocks.iter().all(|b| b.sign != BlockSign::Mixed);
    let eps_rank_sum = blocks.iter().map(|b| b.sign.value().map(|s| s * b.rank)).sum::<Option<i64>>();
    GraphAnalysis {
        is_homogeneous,
        is_positive: g.edges.iter().all(|e| e.sign == Sign::Positive),
        is_negative: g.edges.iter().all(|e| e.sign == Sign::Negative),
        rank: g.rank(),
        eps_rank_sum,
        component_count: g.component_count(),
        positive_blocks: blocks.iter().filter(|b| b.sign == BlockSign::Positive).count(),
        negative_blocks: blocks.iter().filter(|b| b.sign == BlockSign::Negative).count(),
        blocks,
    }
}

pub fn analyze_diagram(d: &LinkDiagram) -> GraphAnalysis {
    analyze(&build_seifert_graph(d))
}

/// `-s + w + 2 s_+ - 1` for a connected diagram.
pub fn prop_key_rhs(d: &LinkDiagram) -> Result<i64, SeifertError> {
    let st = d.stats();
    if st.diagram_components != 1 {
        return Err(SeifertError::DisconnectedDiagram(st.diagram_components));
    }
    Ok(-(st.s as i64) + st.w + 2 * st.s_plus as i64 - 1)
}

/// `w - (d_+ - d_-)` where `d_±` count the signed edges of a spanning tree
/// of the Seifert graph. Defined for connected, reduced, alternating
/// diagrams, where it is the signature with `σ(positive trefoil) = 2`.
pub fn traczyk_signature(d: &LinkDiagram) -> Result<i64, SeifertError> {
    let components = d.connected_count();
    if components != 1 {
        return Err(SeifertError::DisconnectedDiagram(components));
    }
    if !d.is_alternating() {
        return Err(SeifertError::NotAlternating);
    }
    let nugatory = d.nugatory_crossings();
    if !nugatory.is_empty() {
        return Err(SeifertError::NotReduced(nugatory));
    }
    let g = build_seifert_graph(d);
    Ok(signature_from_tree(d, &g, &g.spanning_forest()))
}

/// The signature formula evaluated on a given spanning tree.
pub fn signature_from_tree(d: &LinkDiagram, g: &SignedGraph, tree: &[usize]) -> i64 {
    let signed: i64 = tree.iter().map(|&e| g.edges[e].sign.value()).sum();
    d.writhe() - signed
}

/// Signature of a split diagram as the sum over its connected pieces.
pub fn split_traczyk_signature(d: &LinkDiagram) -> Result<i64, SeifertError> {
    d.split_components()
        .iter()
        .map(|part| if part.crossing_count() == 0 { Ok(0) } else { traczyk_signature(part) })
        .sum()
}
