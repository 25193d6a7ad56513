use std::collections::BTreeSet;

use super::{Digraph, Instance, NodeId};

/// Strongly connected components contracted into a DAG.
///
/// Components are ordered by their least node id and each component's node
/// list is sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condensation {
    pub components: Vec<Vec<NodeId>>,
    pub dag_edges: BTreeSet<(usize, usize)>,
    pub sink: Vec<bool>,
    pub nontrivial: Vec<bool>,
    component_of: Vec<usize>,
}

impl Condensation {
    pub fn component_of(&self, u: NodeId) -> usize {
        self.component_of[u.index()]
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Indices of sink components, optionally only those containing an edge.
    pub fn sink_indices(&self, nontrivial_only: bool) -> impl Iterator<Item = usize> + '_ {
        (0..self.components.len())
            .filter(move |&c| self.sink[c] && (!nontrivial_only || self.nontrivial[c]))
    }
}

pub fn condensation(i: &Instance) -> Condensation {
    let raw = tarjan(i);
    let mut components: Vec<Vec<NodeId>> = raw
        .into_iter()
        .map(|mut c| {
            c.sort_unstable();
            c
        })
        .collect();
    components.sort_unstable_by_key(|c| c[0]);

    let mut component_of = vec![0; i.node_count()];
    for (idx, comp) in components.iter().enumerate() {
        for &u in comp {
            component_of[u.index()] = idx;
        }
    }

    let mut dag_edges = BTreeSet::new();
    let mut nontrivial = vec![false; components.len()];
    for &(u, v) in i.edges() {
        let (cu, cv) = (component_of[u.index()], component_of[v.index()]);
        if cu == cv {
            nontrivial[cu] = true;
        } else {
            dag_edges.insert((cu, cv));
        }
    }
    let mut sink = vec![true; components.len()];
    for &(cu, _) in &dag_edges {
        sink[cu] = false;
    }

    Condensation {
        components,
        dag_edges,
        sink,
        nontrivial,
        component_of,
    }
}

/// Node sets of the sink components.
pub fn sink_components(i: &Instance, nontrivial_only: bool) -> Vec<Vec<NodeId>> {
    let c = condensation(i);
    c.sink_indices(nontrivial_only)
        .map(|idx| c.components[idx].clone())
        .collect()
}

// Iterative Tarjan; recursion depth would otherwise follow path length.
fn tarjan(g: &Instance) -> Vec<Vec<NodeId>> {
    const UNVISITED: usize = usize::MAX;
    let n = g.node_count();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next_index = 0;
    // (node, position in its successor list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            let succ = g.successors(NodeId::from_index(v));
            if *pos < succ.len() {
                let w = succ[*pos].index();
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.push(NodeId::from_index(w));
                    if w == v {
                        break;
                    }
                }
                comps.push(comp);
            }
        }
    }
    comps
}
