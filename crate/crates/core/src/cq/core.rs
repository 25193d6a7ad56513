use itertools::Itertools;

use super::hom::{HomPlan, Limits};
use crate::graph::{Instance, NodeId};
use crate::{Error, Result};

/// The core of `g`: the smallest induced subgraph receiving a homomorphism
/// from `g`. Among minimum-size candidates the lexicographically least node
/// set wins.
///
/// A minimum-size hom image is always induced, so scanning induced
/// subgraphs by size finds it.
pub fn core_of(g: &Instance, limits: Limits) -> Result<Instance> {
    let n = g.node_count();
    if n > limits.max_core_nodes {
        return Err(Error::ResourceGuard {
            what: "core computation",
            limit: limits.max_core_nodes,
            actual: n,
        });
    }
    let plan = HomPlan::new(g, limits)?;
    for size in 0..n {
        for subset in (0..n).map(NodeId::from_index).combinations(size) {
            let candidate = g.induced(&subset);
            if plan.exists(&candidate) {
                return Ok(candidate);
            }
        }
    }
    Ok(g.clone())
}
