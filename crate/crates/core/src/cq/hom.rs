use crate::graph::{Digraph, Instance, NodeId};
use crate::{Error, Result};

/// Size guards for the exponential searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest source graph accepted by homomorphism search.
    pub max_hom_source_nodes: usize,
    /// Largest graph accepted by [`core_of`](super::core_of).
    pub max_core_nodes: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_hom_source_nodes: 64,
            max_core_nodes: 16,
        }
    }
}

/// Image of each source node, indexed by source node id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mapping {
    assignment: Vec<NodeId>,
}

impl Mapping {
    pub fn get(&self, u: NodeId) -> NodeId {
        self.assignment[u.index()]
    }

    pub fn as_slice(&self) -> &[NodeId] {
        &self.assignment
    }

    /// Whether every source edge lands on a target edge.
    pub fn is_homomorphism<T: Digraph + ?Sized>(&self, source: &Instance, target: &T) -> bool {
        self.assignment.len() == source.node_count()
            && source
                .edges()
                .iter()
                .all(|&(u, v)| target.has_edge(self.get(u), self.get(v)))
    }
}

#[derive(Clone, Copy, Debug)]
enum Check {
    /// edge earlier -> current
    From(usize),
    /// edge current -> earlier
    To(usize),
    Loop,
}

#[derive(Clone, Debug)]
struct Step {
    var: usize,
    /// An earlier in-neighbor whose image's successors seed the candidates.
    anchor: Option<usize>,
    checks: Vec<Check>,
}

/// A compiled backtracking search for homomorphisms out of a fixed source.
///
/// Source nodes are placed by descending degree (ties by id); candidate
/// images are tried in ascending id order, so results are deterministic.
#[derive(Clone, Debug)]
pub struct HomPlan {
    source_nodes: usize,
    steps: Vec<Step>,
}

impl HomPlan {
    pub fn new(source: &Instance, limits: Limits) -> Result<Self> {
        let n = source.node_count();
        if n > limits.max_hom_source_nodes {
            return Err(Error::ResourceGuard {
                what: "homomorphism source",
                limit: limits.max_hom_source_nodes,
                actual: n,
            });
        }
        let mut degree = vec![0usize; n];
        for &(u, v) in source.edges() {
            degree[u.index()] += 1;
            degree[v.index()] += 1;
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&u| (std::cmp::Reverse(degree[u]), u));

        let mut placed = vec![false; n];
        let mut steps = Vec::with_capacity(n);
        for &var in &order {
            let mut anchor = None;
            let mut checks = Vec::new();
            for &(u, v) in source.edges() {
                let (u, v) = (u.index(), v.index());
                if u == var && v == var {
                    checks.push(Check::Loop);
                } else if v == var && placed[u] {
                    if anchor.is_none() {
                        anchor = Some(u);
                    } else {
                        checks.push(Check::From(u));
                    }
                } else if u == var && placed[v] {
                    checks.push(Check::To(v));
                }
            }
            placed[var] = true;
            steps.push(Step {
                var,
                anchor,
                checks,
            });
        }
        Ok(HomPlan {
            source_nodes: n,
            steps,
        })
    }

    pub fn find<T: Digraph + ?Sized>(&self, target: &T) -> Option<Mapping> {
        let mut assign = vec![NodeId(u32::MAX); self.source_nodes];
        self.search(0, target, &mut assign)
            .then_some(Mapping { assignment: assign })
    }

    pub fn exists<T: Digraph + ?Sized>(&self, target: &T) -> bool {
        let mut assign = vec![NodeId(u32::MAX); self.source_nodes];
        self.search(0, target, &mut assign)
    }

    fn search<T: Digraph + ?Sized>(&self, k: usize, target: &T, assign: &mut [NodeId]) -> bool {
        let Some(step) = self.steps.get(k) else {
            return true;
        };
        let fits = |c: NodeId, assign: &[NodeId]| {
            step.checks.iter().all(|&check| match check {
                Check::From(w) => target.has_edge(assign[w], c),
                Check::To(w) => target.has_edge(c, assign[w]),
                Check::Loop => target.has_edge(c, c),
            })
        };
        match step.anchor {
            Some(w) => {
                for &c in target.successors(assign[w]) {
                    if fits(c, assign) {
                        assign[step.var] = c;
                        if self.search(k + 1, target, assign) {
                            return true;
                        }
                    }
                }
            }
            None => {
                for c in (0..target.node_count()).map(NodeId::from_index) {
                    if fits(c, assign) {
                        assign[step.var] = c;
                        if self.search(k + 1, target, assign) {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }
}

/// Exhaustive backtracking; `Ok(None)` means no homomorphism exists.
pub fn find_homomorphism<T: Digraph + ?Sized>(
    source: &Instance,
    target: &T,
    limits: Limits,
) -> Result<Option<Mapping>> {
    Ok(HomPlan::new(source, limits)?.find(target))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Instance {
        Instance::with_numbered_nodes(n, (0..n).map(|k| (k, (k + 1) % n)))
    }

    fn path(edges: usize) -> Instance {
        Instance::with_numbered_nodes(edges + 1, (0..edges).map(|k| (k, k + 1)))
    }

    #[test]
    fn four_cycle_onto_two_cycle() {
        let m = find_homomorphism(&cycle(4), &cycle(2), Limits::default())
            .unwrap()
            .unwrap();
        assert!(m.is_homomorphism(&cycle(4), &cycle(2)));
        assert_eq!(m.as_slice(), &[NodeId(0), NodeId(1), NodeId(0), NodeId(1)]);
    }

    #[test]
    fn triangle_not_into_two_cycle() {
        assert!(find_homomorphism(&cycle(3), &cycle(2), Limits::default())
            .unwrap()
            .is_none());
    }

    #[test]
    fn path_into_two_cycle() {
        let m = find_homomorphism(&path(3), &cycle(2), Limits::default())
            .unwrap()
            .unwrap();
        assert!(m.is_homomorphism(&path(3), &cycle(2)));
    }

    #[test]
    fn empty_target() {
        assert!(
            find_homomorphism(&path(1), &Instance::empty(), Limits::default())
                .unwrap()
                .is_none()
        );
        assert!(
            find_homomorphism(&Instance::empty(), &Instance::empty(), Limits::default())
                .unwrap()
                .is_some()
        );
    }

    #[test]
    fn guard_trips() {
        let limits = Limits {
            max_hom_source_nodes: 3,
            ..Limits::default()
        };
        assert!(matches!(
            find_homomorphism(&cycle(4), &cycle(2), limits),
            Err(Error::ResourceGuard {
                actual: 4,
                limit: 3,
                ..
            })
        ));
    }

    #[test]
    fn self_loop_absorbs_everything() {
        let sink = Instance::with_numbered_nodes(1, [(0, 0)]);
        for g in [cycle(5), path(4), cycle(1)] {
            assert!(find_homomorphism(&g, &sink, Limits::default())
                .unwrap()
                .is_some());
        }
        assert!(find_homomorphism(&sink, &cycle(3), Limits::default())
            .unwrap()
            .is_none());
    }
}
