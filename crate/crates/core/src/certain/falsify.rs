use std::collections::VecDeque;

use super::{blocking_cycle, cycle_witness, evaluate_normal_form, path_levels};
use crate::graph::{condensation, Condensation, Digraph, Instance, NodeId};
use crate::normalizer::NormalForm;
use crate::{Error, Result};

/// Whether `d` (over the same node ids as `i`) keeps exactly one outgoing
/// edge of every node that has one in `i`, and nothing else.
pub fn is_repair_of<G: Digraph + ?Sized>(d: &G, i: &Instance) -> bool {
    d.node_count() == i.node_count()
        && i.nodes().all(|u| {
            let kept = d.successors(u);
            if i.out_degree(u) == 0 {
                kept.is_empty()
            } else {
                kept.len() == 1 && i.has_edge(u, kept[0])
            }
        })
}

/// A repair of `i` on which `nf` is false, or `None` when `nf` is certain.
///
/// Ties are always broken towards the least node id. The result is checked
/// before it is returned; a failed check is an [`Error::Invariant`].
pub fn build_falsifying_repair(nf: &NormalForm, i: &Instance) -> Result<Option<Instance>> {
    let choice = match nf {
        NormalForm::Path(n) => path_choices(*n, i),
        NormalForm::Cycles(_) if nf.is_self_loop() => Some(loop_free_choices(i)),
        NormalForm::Cycles(lengths) => {
            let cond = condensation(i);
            match lengths
                .iter()
                .find(|&&len| cycle_witness(len, i, &cond).is_none())
            {
                Some(&len) => Some(cycle_choices(len, i, &cond)?),
                None => None,
            }
        }
    };
    let Some(choice) = choice else {
        return Ok(None);
    };

    let edges = choice
        .iter()
        .enumerate()
        .filter_map(|(u, v)| v.map(|v| (NodeId::from_index(u), v)));
    let repair = i
        .sub_instance(edges)
        .map_err(|u| Error::Invariant(format!("chose a non-edge out of node {u}")))?;
    if !is_repair_of(&repair, i) {
        return Err(Error::Invariant(
            "constructed sub-instance is not a repair".into(),
        ));
    }
    if evaluate_normal_form(nf, &repair) {
        return Err(Error::Invariant(format!(
            "query {nf} still holds on the constructed repair"
        )));
    }
    Ok(Some(repair))
}

// Every node steps to a successor whose guaranteed walk length is smaller,
// so no walk in the repair reaches n edges.
fn path_choices(n: usize, i: &Instance) -> Option<Vec<Option<NodeId>>> {
    let level = path_levels(n, i);
    if level.iter().any(|&l| l >= n) {
        return None;
    }
    Some(
        i.nodes()
            .map(|u| {
                let succ = i.successors(u);
                succ.iter()
                    .copied()
                    .find(|v| level[v.index()] < level[u.index()])
                    .or_else(|| succ.first().copied())
            })
            .collect(),
    )
}

fn loop_free_choices(i: &Instance) -> Vec<Option<NodeId>> {
    i.nodes()
        .map(|u| {
            let succ = i.successors(u);
            succ.iter()
                .copied()
                .find(|&v| v != u)
                .or_else(|| succ.first().copied())
        })
        .collect()
}

// Keeps one blocking cycle per nontrivial sink component and routes every
// other node along shortest paths, either to that cycle (sink components) or
// out of its component (all others). The repair's only cycles are then the
// kept ones, none of which is the image of a `len`-cycle.
fn cycle_choices(len: usize, i: &Instance, cond: &Condensation) -> Result<Vec<Option<NodeId>>> {
    let n = i.node_count();
    let mut preds: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    for &(u, v) in i.edges() {
        preds[v.index()].push(u);
    }
    let mut choice: Vec<Option<NodeId>> = vec![None; n];

    for (c, comp) in cond.components.iter().enumerate() {
        if !cond.nontrivial[c] {
            let u = comp[0];
            choice[u.index()] = i.successors(u).first().copied();
            continue;
        }
        let mut seeds = Vec::new();
        if cond.sink[c] {
            let cycle = blocking_cycle(len, i, comp).ok_or_else(|| {
                Error::Invariant(format!(
                    "sink component {c} has no cycle blocking length {len}"
                ))
            })?;
            for (k, &u) in cycle.iter().enumerate() {
                choice[u.index()] = Some(cycle[(k + 1) % cycle.len()]);
                seeds.push(u);
            }
        } else {
            for &u in comp {
                let exit = i
                    .successors(u)
                    .iter()
                    .copied()
                    .find(|&v| cond.component_of(v) != c);
                if let Some(v) = exit {
                    choice[u.index()] = Some(v);
                    seeds.push(u);
                }
            }
        }
        route_towards(i, &preds, cond, c, &seeds, &mut choice);
    }
    Ok(choice)
}

fn route_towards(
    i: &Instance,
    preds: &[Vec<NodeId>],
    cond: &Condensation,
    comp: usize,
    seeds: &[NodeId],
    choice: &mut [Option<NodeId>],
) {
    let mut dist: Vec<Option<usize>> = vec![None; i.node_count()];
    let mut queue = VecDeque::new();
    for &s in seeds {
        dist[s.index()] = Some(0);
        queue.push_back(s);
    }
    while let Some(v) = queue.pop_front() {
        let d = dist[v.index()].expect("queued nodes have a distance");
        for &u in &preds[v.index()] {
            if cond.component_of(u) == comp && dist[u.index()].is_none() {
                dist[u.index()] = Some(d + 1);
                queue.push_back(u);
            }
        }
    }
    for &u in &cond.components[comp] {
        let Some(d) = dist[u.index()] else { continue };
        if d == 0 {
            continue;
        }
        choice[u.index()] = i
            .successors(u)
            .iter()
            .copied()
            .find(|v| cond.component_of(*v) == comp && dist[v.index()] == Some(d - 1));
    }
}
