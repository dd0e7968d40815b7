//! Explicit skein resolution trees: every non-leaf node resolves its first
//! non-ascending crossing into a switched child and a smoothed child.

use std::fmt::Write as _;

use serde::Serialize;

use crate::diagram::{LinkDiagram, ResolveMode};
use crate::homfly::{skein_labels, HomflyError, DEFAULT_CAP};
use crate::poly::{LaurentPoly2, Monomial};
use crate::seifert;

#[derive(Clone, Debug, Serialize)]
pub struct SkeinNode {
    pub diagram: LinkDiagram,
    /// Label on the edge from the parent; `None` at the root.
    pub edge_label: Option<Monomial>,
    /// Product of edge labels from the root down to this node.
    pub pi: Monomial,
    /// Crossing resolved at this node.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolved: Option<usize>,
    pub is_leaf: bool,
    /// Number of unlink components at a leaf.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub leaf_component_count: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<SkeinNode>,
}

pub fn skein_tree(d: &LinkDiagram) -> Result<SkeinNode, HomflyError> {
    skein_tree_with_cap(d, DEFAULT_CAP)
}

pub fn skein_tree_with_cap(d: &LinkDiagram, cap: usize) -> Result<SkeinNode, HomflyError> {
    if d.crossing_count() > cap {
        return Err(HomflyError::CrossingCapExceeded { crossings: d.crossing_count(), cap });
    }
    Ok(build(d.clone(), None, Monomial::ONE))
}

fn build(diagram: LinkDiagram, edge_label: Option<Monomial>, pi: Monomial) -> SkeinNode {
    let offending = diagram.non_ascending_crossings(&diagram.ascending_basepoints()).first().copied();
    let Some(i) = offending else {
        let k = diagram.component_count();
        return SkeinNode {
            diagram,
            edge_label,
            pi,
            resolved: None,
            is_leaf: true,
            leaf_component_count: Some(k),
            children: Vec::new(),
        };
    };
    let (switch, smooth) = skein_labels(diagram.crossings()[i].sign());
    let switched = diagram.resolve(i, ResolveMode::Switch).expect("index from the diagram");
    let smoothed = diagram.resolve(i, ResolveMode::Smooth).expect("index from the diagram");
    let children = vec![build(switched, Some(switch), pi * switch), build(smoothed, Some(smooth), pi * smooth)];
    SkeinNode {
        diagram,
        edge_label,
        pi,
        resolved: Some(i),
        is_leaf: false,
        leaf_component_count: None,
        children,
    }
}

impl SkeinNode {
    pub fn leaves(&self) -> Vec<&SkeinNode> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(n) = stack.pop() {
            if n.is_leaf {
                out.push(n);
            }
            stack.extend(n.children.iter().rev());
        }
        out
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(SkeinNode::node_count).sum::<usize>()
    }

    /// `pi * delta^(#n - 1)` for a leaf.
    pub fn leaf_contribution(&self) -> Option<LaurentPoly2> {
        let k = self.leaf_component_count?;
        Some(LaurentPoly2::delta_power(k as u32 - 1).mul_monomial(self.pi))
    }

    /// Sum of leaf contributions; equals the HOMFLY polynomial of the root.
    pub fn leaf_sum(&self) -> LaurentPoly2 {
        self.leaves().iter().filter_map(|n| n.leaf_contribution()).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tree serializes")
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph skein {\n  node [shape=box, fontname=\"monospace\"];\n");
        let mut next = 0usize;
        self.write_dot(&mut out, &mut next);
        out.push_str("}\n");
        out
    }

    fn write_dot(&self, out: &mut String, next: &mut usize) -> usize {
        let id = *next;
        *next += 1;
        let name = self.diagram.name().map(|n| format!("{n}\\n")).unwrap_or_default();
        let leaf = match self.leaf_component_count {
            Some(k) => format!("\\nunlink({k})"),
            None => String::new(),
        };
        let shape = if self.is_leaf { ", style=rounded" } else { "" };
        let _ = writeln!(
            out,
            "  n{id} [label=\"{name}c={}\\npi={}{leaf}\"{shape}];",
            self.diagram.crossing_count(),
            self.pi
        );
        for child in &self.children {
            let cid = child.write_dot(out, next);
            let label = child.edge_label.map(dot_label).unwrap_or_default();
            let _ = writeln!(out, "  n{id} -> n{cid} [label=\"{label}\"];");
        }
        id
    }
}

fn dot_label(m: Monomial) -> String {
    match m {
        Monomial::V2 => "v^2".into(),
        Monomial::VZ => "vz".into(),
        Monomial::V_INV2 => "v^-2".into(),
        Monomial::NEG_V_INV_Z => "-v^-1 z".into(),
        other => other.to_string(),
    }
}

/// How the leaves reaching the top `z`-degree behave.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TopLeafObservation {
    pub top_z_degree: i32,
    pub top_leaves: usize,
    /// Every top leaf is a one-component diagram whose Seifert graph is a tree.
    pub all_seifert_trees: bool,
    /// Every top leaf contribution has the same sign.
    pub signs_uniform: bool,
    /// That common sign, when uniform.
    pub sign: Option<i8>,
}

pub fn observe_top_leaves(tree: &SkeinNode) -> TopLeafObservation {
    let leaves: Vec<(&SkeinNode, LaurentPoly2)> =
        tree.leaves().into_iter().filter_map(|n| n.leaf_contribution().map(|p| (n, p))).collect();
    let top = leaves.iter().filter_map(|(_, p)| p.max_deg_z().ok()).max().unwrap_or(0);
    let at_top: Vec<&(&SkeinNode, LaurentPoly2)> =
        leaves.iter().filter(|(_, p)| p.max_deg_z().ok() == Some(top)).collect();
    let all_seifert_trees = at_top.iter().all(|(n, _)| {
        n.leaf_component_count == Some(1) && seifert::build_seifert_graph(&n.diagram).rank() == 0
    });
    let signs: Vec<i8> = at_top
        .iter()
        .flat_map(|(_, p)| p.terms().filter(|t| t.1 == top).map(|t| if t.2.sign() == num_bigint::Sign::Minus { -1 } else { 1 }).collect::<Vec<_>>())
        .collect();
    let signs_uniform = signs.windows(2).all(|w| w[0] == w[1]);
    TopLeafObservation {
        top_z_degree: top,
        top_leaves: at_top.len(),
        all_seifert_trees,
        signs_uniform,
        sign: if signs_uniform { signs.first().copied() } else { None },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homfly::homfly;

    fn tree(pd: &str) -> SkeinNode {
        skein_tree(&pd.parse().unwrap()).unwrap()
    }

    #[test]
    fn unknot_is_a_single_leaf() {
        let t = tree("U(1)");
        assert!(t.is_leaf && t.children.is_empty());
        assert_eq!((t.pi, t.leaf_component_count, t.edge_label), (Monomial::ONE, Some(1), None));
    }

    #[test]
    fn hopf_tree() {
        let t = tree("X(4,2,3,1),X(2,4,1,3)");
        let leaves: Vec<_> = t.leaves().iter().map(|n| (n.pi, n.leaf_component_count.unwrap())).collect();
        assert_eq!(leaves, vec![(Monomial::V2, 2), (Monomial::VZ, 1)]);
        assert_eq!(t.leaf_sum().to_string(), "-v^3*z^-1 + v*z^-1 + v*z");
    }

    #[test]
    fn trefoil_tree() {
        let t = tree("X(1,5,2,4),X(3,1,4,6),X(5,3,6,2)");
        assert_eq!(t.leaves().len(), 3);
        assert_eq!(t.leaf_sum().to_string(), "-v^4 + 2*v^2 + v^2*z^2");
        let obs = observe_top_leaves(&t);
        assert_eq!((obs.top_z_degree, obs.top_leaves, obs.all_seifert_trees, obs.sign), (2, 1, true, Some(1)));
    }

    #[test]
    fn pi_is_the_path_product() {
        fn walk(n: &SkeinNode, acc: Monomial) {
            assert_eq!(n.pi, acc);
            for c in &n.children {
                walk(c, acc * c.edge_label.unwrap());
            }
        }
        let t = tree("X(4,2,5,1),X(8,6,1,5),X(6,3,7,4),X(2,7,3,8)");
        walk(&t, Monomial::ONE);
        assert_eq!(t.leaf_sum(), homfly(&t.diagram).unwrap());
    }

    #[test]
    fn exports() {
        let t = tree("X(4,2,3,1),X(2,4,1,3)");
        let dot = t.to_dot();
        assert!(dot.starts_with("digraph skein {"));
        assert_eq!(dot.matches(" -> ").count(), 2);
        assert!(dot.contains("label=\"v^2\"") && dot.contains("label=\"vz\""));
        let json: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(json["children"].as_array().unwrap().len(), 2);
        assert_eq!(json["children"][1]["leaf_component_count"], 1);
    }

    #[test]
    fn cap() {
        let d: LinkDiagram = "X(1,5,2,4),X(3,1,4,6),X(5,3,6,2)".parse().unwrap();
        assert!(matches!(skein_tree_with_cap(&d, 2), Err(HomflyError::CrossingCapExceeded { .. })));
    }
}
