#![allow(dead_code)]

use graphcqa::certain::Formula;
use graphcqa::fixtures::gen_random;
use graphcqa::graph::{repair_count, Digraph, Instance, NodeId};
use graphcqa::normalizer::NormalForm;
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const RANDOM_INSTANCES: usize = 10_000;
pub const RANDOM_MAX_NODES: usize = 8;
pub const RANDOM_MAX_REPAIRS: u32 = 4096;

/// The queries every corpus instance is checked against.
pub fn standard_queries() -> Vec<NormalForm> {
    vec![
        NormalForm::Path(1),
        NormalForm::Path(2),
        NormalForm::Path(3),
        NormalForm::cycles([1]),
        NormalForm::cycles([2]),
        NormalForm::cycles([3]),
        NormalForm::cycles([2, 3]),
    ]
}

/// Every digraph on `n` labelled nodes, indexed by its edge bitmask over
/// the `n * n` pairs in row-major order.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Instance> {
    let pairs = n * n;
    (0u64..1 << pairs).map(move |mask| {
        let edges = (0..pairs)
            .filter(|bit| mask >> bit & 1 == 1)
            .map(|bit| (bit / n, bit % n));
        Instance::with_numbered_nodes(n, edges)
    })
}

/// Seeded random instances with at most 8 nodes and at most 4096 repairs.
/// Candidates over the repair budget are skipped, so the sequence is fixed.
pub fn random_corpus() -> Vec<Instance> {
    let mut params = ChaCha8Rng::seed_from_u64(0x5eed_c0de);
    let budget = BigUint::from(RANDOM_MAX_REPAIRS);
    let mut out = Vec::with_capacity(RANDOM_INSTANCES);
    let mut seed = 0u64;
    while out.len() < RANDOM_INSTANCES {
        let nodes = params.gen_range(1..=RANDOM_MAX_NODES);
        let edges = params.gen_range(0..=(3 * nodes).min(nodes * nodes));
        let i = gen_random(nodes, edges, seed);
        seed += 1;
        if repair_count(&i) <= budget {
            out.push(i);
        }
    }
    out
}

/// Every consistent instance on `n` labelled nodes: each node has no
/// outgoing edge or exactly one.
pub fn functional_graphs(n: usize) -> impl Iterator<Item = Instance> {
    let total = (n as u64 + 1).pow(n as u32);
    (0..total).map(move |mut code| {
        let mut edges = Vec::new();
        for u in 0..n {
            let digit = (code % (n as u64 + 1)) as usize;
            code /= n as u64 + 1;
            if digit > 0 {
                edges.push((u, digit - 1));
            }
        }
        Instance::with_numbered_nodes(n, edges)
    })
}

pub fn cycle_graph(n: usize) -> Instance {
    Instance::with_numbered_nodes(n, (0..n).map(|k| (k, (k + 1) % n)))
}

/// Direct Tarskian evaluation of a sentence over the nodes of `g`, with
/// `R` read as the edge relation.
pub fn model_check<G: Digraph>(formula: &Formula, g: &G) -> bool {
    let mut env = Vec::new();
    eval(formula, g, &mut env)
}

fn lookup(env: &[(String, NodeId)], var: &str) -> NodeId {
    env.iter()
        .rev()
        .find(|(name, _)| name == var)
        .map(|&(_, u)| u)
        .unwrap_or_else(|| panic!("free variable {var}"))
}

fn eval<G: Digraph>(f: &Formula, g: &G, env: &mut Vec<(String, NodeId)>) -> bool {
    match f {
        Formula::Rel(a, b) => g.has_edge(lookup(env, a), lookup(env, b)),
        Formula::Eq(a, b) => lookup(env, a) == lookup(env, b),
        Formula::Neq(a, b) => lookup(env, a) != lookup(env, b),
        Formula::Not(inner) => !eval(inner, g, env),
        Formula::And(parts) => parts.iter().all(|p| eval(p, g, env)),
        Formula::Or(parts) => parts.iter().any(|p| eval(p, g, env)),
        Formula::Implies(a, b) => !eval(a, g, env) || eval(b, g, env),
        Formula::Exists(v, body) | Formula::Forall(v, body) => {
            let universal = matches!(f, Formula::Forall(..));
            for k in 0..g.node_count() {
                env.push((v.clone(), NodeId::from_index(k)));
                let holds = eval(body, g, env);
                env.pop();
                if holds != universal {
                    return !universal;
                }
            }
            universal
        }
    }
}
