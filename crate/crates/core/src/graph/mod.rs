//! Instances of the single binary relation `R`, viewed as directed graphs.
//!
//! The first attribute is the key, so an instance is consistent exactly when
//! every node has out-degree at most one.

mod cycles;
mod edgelist;
mod scc;

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

pub(crate) use cycles::long_simple_cycle;
pub use cycles::{
    has_long_simple_cycle, simple_cycles_up_to, simple_cycles_with_bound, visit_simple_cycles,
    DEFAULT_CYCLE_BOUND,
};
pub use edgelist::{load_instance, to_edge_list};
pub use scc::{condensation, sink_components, Condensation};

/// Dense node identifier, assigned in first-appearance order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn from_index(i: usize) -> Self {
        NodeId(i as u32)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Read-only adjacency access shared by full instances and repair views.
pub trait Digraph {
    fn node_count(&self) -> usize;
    fn successors(&self, u: NodeId) -> &[NodeId];

    fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.successors(u).contains(&v)
    }
}

/// A finite set of facts `R(u,v)` over interned node labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    labels: Vec<String>,
    edges: Vec<(NodeId, NodeId)>,
    out: Vec<Vec<NodeId>>,
}

impl Instance {
    pub fn empty() -> Self {
        Instance {
            labels: Vec::new(),
            edges: Vec::new(),
            out: Vec::new(),
        }
    }

    /// Builds an instance over the given labels; duplicate edges collapse.
    ///
    /// Panics if an edge endpoint is out of range.
    pub fn from_edges(
        labels: Vec<String>,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Self {
        let n = labels.len();
        let mut edges: Vec<(NodeId, NodeId)> = edges.into_iter().collect();
        edges.sort_unstable();
        edges.dedup();
        let mut out = vec![Vec::new(); n];
        for &(u, v) in &edges {
            assert!(u.index() < n && v.index() < n, "edge endpoint out of range");
            out[u.index()].push(v);
        }
        Instance { labels, edges, out }
    }

    /// Nodes labelled `n0`, `n1`, ... in index order.
    pub fn with_numbered_nodes(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let labels = (0..n).map(|i| format!("n{i}")).collect();
        Self::from_edges(
            labels,
            edges
                .into_iter()
                .map(|(u, v)| (NodeId::from_index(u), NodeId::from_index(v))),
        )
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// True when the instance has no facts (isolated nodes are ignored).
    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = NodeId> + '_ {
        (0..self.labels.len()).map(NodeId::from_index)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, u: NodeId) -> &str {
        &self.labels[u.index()]
    }

    pub fn node_by_label(&self, label: &str) -> Option<NodeId> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(NodeId::from_index)
    }

    pub fn out_degree(&self, u: NodeId) -> usize {
        self.out[u.index()].len()
    }

    /// Edge subset over the same node set; edges not in `self` are rejected.
    pub fn sub_instance(
        &self,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Result<Self, NodeId> {
        let edges: Vec<_> = edges.into_iter().collect();
        if let Some(&(u, _)) = edges.iter().find(|&&(u, v)| !self.has_edge(u, v)) {
            return Err(u);
        }
        Ok(Self::from_edges(self.labels.clone(), edges))
    }

    /// Subgraph induced by `nodes`, relabelled densely in the given order.
    pub fn induced(&self, nodes: &[NodeId]) -> Self {
        let mut pos = vec![None; self.labels.len()];
        for (i, &u) in nodes.iter().enumerate() {
            pos[u.index()] = Some(NodeId::from_index(i));
        }
        let labels = nodes
            .iter()
            .map(|&u| self.labels[u.index()].clone())
            .collect();
        let edges = self
            .edges
            .iter()
            .filter_map(|&(u, v)| Some((pos[u.index()]?, pos[v.index()]?)));
        Self::from_edges(labels, edges)
    }

    /// Labels of `nodes`, in order.
    pub fn labels_of(&self, nodes: &[NodeId]) -> Vec<String> {
        nodes.iter().map(|&u| self.label(u).to_string()).collect()
    }
}

impl Digraph for Instance {
    fn node_count(&self) -> usize {
        Instance::node_count(self)
    }

    #[inline]
    fn successors(&self, u: NodeId) -> &[NodeId] {
        &self.out[u.index()]
    }

    #[inline]
    fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.out[u.index()].binary_search(&v).is_ok()
    }
}

/// Interns labels in first-appearance order while collecting edges.
#[derive(Debug, Default)]
pub struct InstanceBuilder {
    ids: HashMap<String, NodeId>,
    labels: Vec<String>,
    edges: Vec<(NodeId, NodeId)>,
}

impl InstanceBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(&mut self, label: &str) -> NodeId {
        if let Some(&id) = self.ids.get(label) {
            return id;
        }
        let id = NodeId::from_index(self.labels.len());
        self.labels.push(label.to_string());
        self.ids.insert(label.to_string(), id);
        id
    }

    pub fn edge(&mut self, from: &str, to: &str) -> &mut Self {
        let u = self.node(from);
        let v = self.node(to);
        self.edges.push((u, v));
        self
    }

    pub fn build(self) -> Instance {
        Instance::from_edges(self.labels, self.edges)
    }
}

/// Convenience for tests and fixtures: `instance_of(&[("a","b"), ("b","a")])`.
pub fn instance_of(edges: &[(&str, &str)]) -> Instance {
    let mut b = InstanceBuilder::new();
    for (u, v) in edges {
        b.edge(u, v);
    }
    b.build()
}

pub fn is_consistent<G: Digraph + ?Sized>(g: &G) -> bool {
    (0..g.node_count()).all(|u| g.successors(NodeId::from_index(u)).len() <= 1)
}

/// Number of repairs: the product of all positive out-degrees.
pub fn repair_count(i: &Instance) -> BigUint {
    i.out
        .iter()
        .filter(|succ| !succ.is_empty())
        .fold(BigUint::one(), |acc, succ| acc * BigUint::from(succ.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn consistency() {
        assert!(is_consistent(&instance_of(&[("a", "b"), ("b", "a")])));
        assert!(!is_consistent(&instance_of(&[("a", "b"), ("a", "c")])));
        assert!(is_consistent(&Instance::empty()));
    }

    #[test]
    fn repair_counts() {
        let c = |e: &[(&str, &str)]| repair_count(&instance_of(e));
        assert_eq!(
            c(&[("a", "b"), ("a", "c"), ("b", "d")]),
            BigUint::from(2u32)
        );
        assert_eq!(
            c(&[("a", "b"), ("a", "c"), ("d", "b"), ("d", "c")]),
            BigUint::from(4u32)
        );
        assert_eq!(c(&[("a", "b"), ("b", "c"), ("c", "a")]), BigUint::one());
        assert_eq!(repair_count(&Instance::empty()), BigUint::one());
    }

    #[test]
    fn duplicate_edges_collapse() {
        let i = instance_of(&[("a", "b"), ("a", "b")]);
        assert_eq!(i.edge_count(), 1);
        assert_eq!(i.node_count(), 2);
    }

    #[test]
    fn induced_keeps_labels() {
        let i = instance_of(&[("a", "b"), ("b", "c"), ("c", "a")]);
        let sub = i.induced(&[NodeId(2), NodeId(0)]);
        assert_eq!(sub.labels(), &["c".to_string(), "a".to_string()]);
        assert_eq!(sub.edges(), &[(NodeId(0), NodeId(1))]);
    }

    #[test]
    fn sub_instance_rejects_foreign_edges() {
        let i = instance_of(&[("a", "b")]);
        assert!(i.sub_instance([(NodeId(1), NodeId(0))]).is_err());
        assert_eq!(i.sub_instance([]).unwrap().node_count(), 2);
    }
}
