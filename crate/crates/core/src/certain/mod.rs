//! Polynomial-time certain answers for normalized queries.
//!
//! Every query normalizes to a path or to a collection of cycles, and each
//! shape has its own decision procedure:
//!
//! * `Path(n)`: some node starts an `n`-edge walk in every repair. This is
//!   the least fixpoint behind the first-order rewriting `psi_n`.
//! * `Cycles({1})`: some node's only outgoing edge is a self-loop.
//! * `Cycles(L)`: for every length `l` in `L` there is a nontrivial sink
//!   component whose simple cycles all have lengths dividing `l`. Every
//!   repair keeps a cycle inside each nontrivial sink component, and a
//!   repair can avoid every other cycle.

mod falsify;
mod fo;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::ControlFlow;

use crate::graph::{
    condensation, long_simple_cycle, visit_simple_cycles, Condensation, Digraph, Instance, NodeId,
};
use crate::normalizer::NormalForm;
use crate::Result;

pub use falsify::{build_falsifying_repair, is_repair_of};
pub use fo::{
    emit_fo_rewriting, parse_sentence, psi_path, self_loop_sentence, FoSentence, Formula,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    PathPsi,
    SelfLoop,
    CycleSinkScc,
    CycleCollection,
    EmptyInstance,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::PathPsi => "PATH_PSI",
            Rule::SelfLoop => "SELF_LOOP",
            Rule::CycleSinkScc => "CYCLE_SINK_SCC",
            Rule::CycleCollection => "CYCLE_COLLECTION",
            Rule::EmptyInstance => "EMPTY_INSTANCE",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertVerdict {
    pub certain: bool,
    pub rule: Rule,
    /// Sink component certifying a single-cycle query.
    pub witness_component: Option<Vec<NodeId>>,
    /// Certifying sink component per cycle length (cycle rules only).
    pub cycle_witnesses: BTreeMap<usize, Vec<NodeId>>,
    /// A repair on which the query fails; only when asked for and `!certain`.
    pub falsifying_repair: Option<Instance>,
}

/// Decides whether `nf` holds in every repair of `i`.
pub fn certain_answer(
    nf: &NormalForm,
    i: &Instance,
    want_counterexample: bool,
) -> Result<CertVerdict> {
    let mut verdict = CertVerdict {
        certain: false,
        rule: Rule::EmptyInstance,
        witness_component: None,
        cycle_witnesses: BTreeMap::new(),
        falsifying_repair: None,
    };
    if i.is_empty() {
        if want_counterexample {
            verdict.falsifying_repair = Some(i.clone());
        }
        return Ok(verdict);
    }

    match nf {
        NormalForm::Path(n) => {
            verdict.rule = Rule::PathPsi;
            verdict.certain = cert_path(*n, i);
        }
        NormalForm::Cycles(_) if nf.is_self_loop() => {
            verdict.rule = Rule::SelfLoop;
            verdict.certain = cert_self_loop(i);
        }
        NormalForm::Cycles(lengths) => {
            let cond = condensation(i);
            verdict.rule = if lengths.len() == 1 {
                Rule::CycleSinkScc
            } else {
                Rule::CycleCollection
            };
            let (certain, witnesses) = collection_with(lengths.iter().copied(), i, &cond);
            verdict.certain = certain;
            if lengths.len() == 1 {
                verdict.witness_component = witnesses.values().next().cloned();
            }
            verdict.cycle_witnesses = witnesses;
        }
    }

    if want_counterexample && !verdict.certain {
        verdict.falsifying_repair = build_falsifying_repair(nf, i)?;
    }
    Ok(verdict)
}

/// Whether every repair of `i` contains a walk with `n` edges.
///
/// `alive[u]` after round `k` says that every repair has a `k`-edge walk
/// from `u`: `u` has an outgoing edge and all its successors were alive
/// after round `k - 1`.
pub fn cert_path(n: usize, i: &Instance) -> bool {
    path_levels(n, i).iter().any(|&level| level >= n)
}

/// For each node, the largest `k <= n` such that every repair has a `k`-edge
/// walk from it.
pub(crate) fn path_levels(n: usize, i: &Instance) -> Vec<usize> {
    let nodes = i.node_count();
    let mut level = vec![0usize; nodes];
    let mut alive = vec![true; nodes];
    for round in 1..=n {
        let next: Vec<bool> = (0..nodes)
            .map(|u| {
                let succ = i.successors(NodeId::from_index(u));
                !succ.is_empty() && succ.iter().all(|v| alive[v.index()])
            })
            .collect();
        let mut any = false;
        for (u, &ok) in next.iter().enumerate() {
            if ok {
                level[u] = round;
                any = true;
            }
        }
        alive = next;
        if !any {
            break;
        }
    }
    level
}

/// Evaluates a normal form directly: `Path(n)` asks for an `n`-edge walk,
/// each cycle length `l` for a closed walk of length `l`. Agrees with
/// homomorphism-based evaluation of [`NormalForm::to_query`] but runs in
/// polynomial time on any graph.
pub fn evaluate_normal_form<G: Digraph + ?Sized>(nf: &NormalForm, g: &G) -> bool {
    let n = g.node_count();
    match nf {
        NormalForm::Path(len) => {
            // has_walk[u]: a walk of the current length starts at u
            let mut has_walk = vec![true; n];
            for _ in 0..*len {
                has_walk = (0..n)
                    .map(|u| {
                        g.successors(NodeId::from_index(u))
                            .iter()
                            .any(|v| has_walk[v.index()])
                    })
                    .collect();
            }
            has_walk.iter().any(|&b| b)
        }
        NormalForm::Cycles(lengths) => lengths.iter().all(|&len| {
            (0..n).any(|start| {
                let mut frontier = vec![false; n];
                frontier[start] = true;
                for _ in 0..len {
                    let mut next = vec![false; n];
                    for u in (0..n).filter(|&u| frontier[u]) {
                        for v in g.successors(NodeId::from_index(u)) {
                            next[v.index()] = true;
                        }
                    }
                    frontier = next;
                }
                frontier[start]
            })
        }),
    }
}

/// Whether some node's only outgoing edge is a self-loop.
pub fn cert_self_loop(i: &Instance) -> bool {
    i.nodes().any(|u| i.successors(u) == [u])
}

/// Whether every repair contains a closed walk of length `n`, with the first
/// certifying nontrivial sink component.
pub fn cert_cycle(n: usize, i: &Instance) -> (bool, Option<Vec<NodeId>>) {
    let cond = condensation(i);
    let witness = cycle_witness(n, i, &cond).map(|c| cond.components[c].clone());
    (witness.is_some(), witness)
}

/// Whether every repair satisfies each cycle in `lengths`, with a witness
/// component per length.
pub fn cert_cycle_collection(
    lengths: impl IntoIterator<Item = usize>,
    i: &Instance,
) -> (bool, BTreeMap<usize, Vec<NodeId>>) {
    collection_with(lengths, i, &condensation(i))
}

fn collection_with(
    lengths: impl IntoIterator<Item = usize>,
    i: &Instance,
    cond: &Condensation,
) -> (bool, BTreeMap<usize, Vec<NodeId>>) {
    let mut witnesses = BTreeMap::new();
    let mut all = true;
    for len in lengths {
        match cycle_witness(len, i, cond) {
            Some(c) => {
                witnesses.insert(len, cond.components[c].clone());
            }
            None => all = false,
        }
    }
    (all, witnesses)
}

/// First nontrivial sink component all of whose simple cycles have length
/// dividing `n`.
pub(crate) fn cycle_witness(n: usize, i: &Instance, cond: &Condensation) -> Option<usize> {
    cond.sink_indices(true)
        .find(|&c| blocking_cycle(n, i, &cond.components[c]).is_none())
}

/// A simple cycle in `scope` whose length does not divide `n`, if any.
pub(crate) fn blocking_cycle(n: usize, i: &Instance, scope: &[NodeId]) -> Option<Vec<NodeId>> {
    let mut found = None;
    let _ = visit_simple_cycles(i, scope, n, |c| {
        if !n.is_multiple_of(c.len()) {
            found = Some(c.to_vec());
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    found.or_else(|| long_simple_cycle(i, scope, n))
}
