//! Deterministic instance generators: chains of cycles, the spurred pairs
//! that separate certain from non-certain cycle queries, and seeded random
//! graphs and queries.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cq::ConjunctiveQuery;
use crate::graph::{Instance, InstanceBuilder};

/// Two instances of the same shape: every repair of `d1` contains a
/// `cycle_len`-cycle, some repair of `d2` does not.
#[derive(Clone, Debug)]
pub struct EfPair {
    pub d1: Instance,
    pub d2: Instance,
    pub cycle_len: usize,
    pub distance: usize,
}

/// Where spurs attach to a chain of `links` cycles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spur {
    /// A fresh node with an edge into `c_i`.
    Into(usize),
    /// An edge from `c_i` to a fresh node.
    OutOf(usize),
}

struct Chain<'a> {
    builder: &'a mut InstanceBuilder,
    joints: &'a str,
    inner: &'a str,
}

impl Chain<'_> {
    fn joint(&self, i: usize) -> String {
        format!("{}{i}", self.joints)
    }

    // c_(i-1) -> b_i_1 -> ... -> b_i_(n-2) -> c_i -> c_(i-1)
    fn build(&mut self, n: usize, links: usize) {
        for i in 1..=links {
            let mut ring = vec![self.joint(i - 1)];
            ring.extend((1..n - 1).map(|t| format!("{}b{i}_{t}", self.inner)));
            ring.push(self.joint(i));
            for k in 0..ring.len() {
                self.builder.edge(&ring[k], &ring[(k + 1) % ring.len()]);
            }
        }
    }
}

fn add_spurs(
    builder: &mut InstanceBuilder,
    prefix: &str,
    spurs: &[Spur],
    counters: &mut (usize, usize),
) {
    for &spur in spurs {
        match spur {
            Spur::Into(i) => {
                builder.edge(&format!("in_{}", counters.0), &format!("{prefix}{i}"));
                counters.0 += 1;
            }
            Spur::OutOf(i) => {
                builder.edge(&format!("{prefix}{i}"), &format!("out_{}", counters.1));
                counters.1 += 1;
            }
        }
    }
}

/// `links` consecutive `n`-cycles where cycle `i` shares its joint `c_(i-1)`
/// with the previous cycle and `c_i` with the next. Joints are labelled
/// `c0 ..= c<links>`, inner nodes `b<i>_<t>`. For `n = 2` this is a path of
/// double edges.
pub fn gen_cycle_chain(n: usize, links: usize) -> Instance {
    gen_spurred_chain(n, links, &[])
}

/// [`gen_cycle_chain`] plus spurs at the given joints; spur nodes are
/// labelled `in_<k>` and `out_<k>`.
pub fn gen_spurred_chain(n: usize, links: usize, spurs: &[Spur]) -> Instance {
    assert!(n >= 2, "cycle length must be at least 2");
    let mut builder = InstanceBuilder::new();
    Chain {
        builder: &mut builder,
        joints: "c",
        inner: "",
    }
    .build(n, links);
    add_spurs(&mut builder, "c", spurs, &mut (0, 0));
    builder.build()
}

/// Each component is a chain of `3 * distance` cycles of length
/// `cycle_len`, with spurs at joints `c_distance` and `c_(2 * distance)`.
///
/// * `d1`: chain `p1_` has two outgoing spurs, chain `p2_` two incoming.
/// * `d2`: both chains have an incoming spur at the first joint and an
///   outgoing one at the second.
pub fn gen_ef_pair(cycle_len: usize, distance: usize) -> EfPair {
    assert!(cycle_len >= 2, "cycle length must be at least 2");
    assert!(distance >= 1, "distance must be positive");
    let links = 3 * distance;
    let (lo, hi) = (distance, 2 * distance);

    let build = |spurs: [[Spur; 2]; 2]| {
        let mut builder = InstanceBuilder::new();
        let mut counters = (0, 0);
        for (k, chain_spurs) in spurs.iter().enumerate() {
            let prefix = format!("p{}_", k + 1);
            Chain {
                builder: &mut builder,
                joints: &prefix,
                inner: &prefix,
            }
            .build(cycle_len, links);
            add_spurs(&mut builder, &prefix, chain_spurs, &mut counters);
        }
        builder.build()
    };

    EfPair {
        d1: build([
            [Spur::OutOf(lo), Spur::OutOf(hi)],
            [Spur::Into(lo), Spur::Into(hi)],
        ]),
        d2: build([
            [Spur::Into(lo), Spur::OutOf(hi)],
            [Spur::Into(lo), Spur::OutOf(hi)],
        ]),
        cycle_len,
        distance,
    }
}

/// Seeded random simple digraph with `nodes` nodes (`n0`, `n1`, ...) and
/// exactly `edges` distinct edges, self-loops allowed.
///
/// Candidate edges `(u, v)` are listed row-major (`u * nodes + v`); a
/// partial Fisher-Yates shuffle driven by `ChaCha8Rng::seed_from_u64(seed)`
/// swaps position `k` with `gen_range(k..len)` for `k < edges`, and the
/// first `edges` candidates are kept.
pub fn gen_random(nodes: usize, edges: usize, seed: u64) -> Instance {
    assert!(edges <= nodes * nodes, "more edges than node pairs");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates: Vec<(usize, usize)> = (0..nodes)
        .flat_map(|u| (0..nodes).map(move |v| (u, v)))
        .collect();
    for k in 0..edges {
        let j = rng.gen_range(k..candidates.len());
        candidates.swap(k, j);
    }
    candidates.truncate(edges);
    Instance::with_numbered_nodes(nodes, candidates)
}

/// Seeded random query with `1..=max_atoms` atoms over at most `max_vars`
/// variables, each argument drawn uniformly.
pub fn gen_random_query(max_atoms: usize, max_vars: usize, seed: u64) -> ConjunctiveQuery {
    assert!(max_atoms >= 1 && max_vars >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let atoms = rng.gen_range(1..=max_atoms);
    let vars = rng.gen_range(1..=max_vars);
    let atoms: Vec<(usize, usize)> = (0..atoms)
        .map(|_| (rng.gen_range(0..vars), rng.gen_range(0..vars)))
        .collect();
    ConjunctiveQuery::from_index_atoms(&atoms).expect("at least one atom")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{repair_count, to_edge_list, Digraph, NodeId};
    use num_bigint::BigUint;

    #[test]
    fn single_triangle() {
        let t = gen_cycle_chain(3, 1);
        assert_eq!(to_edge_list(&t), "b1_1 c1\nc0 b1_1\nc1 c0\n");
    }

    #[test]
    fn double_edge_chain() {
        let c = gen_cycle_chain(2, 3);
        assert_eq!(c.node_count(), 4);
        assert_eq!(c.edge_count(), 6);
        assert_eq!(repair_count(&c), BigUint::from(4u32));
    }

    #[test]
    fn triangle_chain_layout() {
        let c = gen_cycle_chain(3, 3);
        // c0 and c3 have a single out-edge, c1 and c2 two, b's one
        let deg = |l: &str| c.out_degree(c.node_by_label(l).unwrap());
        assert_eq!((deg("c0"), deg("c1"), deg("c2"), deg("c3")), (1, 2, 2, 1));
        assert_eq!(deg("b2_1"), 1);
        assert_eq!(c.edge_count(), 9);
    }

    #[test]
    fn ef_pair_shape() {
        let p = gen_ef_pair(2, 2);
        assert_eq!(p.d1.node_count(), 2 * 7 + 4);
        assert_eq!(p.d2.node_count(), 2 * 7 + 4);
        let d1 = &p.d1;
        let id = |l: &str| d1.node_by_label(l).unwrap();
        assert!(d1.has_edge(id("p1_2"), id("out_0")));
        assert!(d1.has_edge(id("p1_4"), id("out_1")));
        assert!(d1.has_edge(id("in_0"), id("p2_2")));
        let d2 = &p.d2;
        let id = |l: &str| d2.node_by_label(l).unwrap();
        assert!(d2.has_edge(id("in_1"), id("p2_2")));
        assert!(d2.has_edge(id("p2_4"), id("out_1")));
    }

    #[test]
    fn random_is_deterministic() {
        assert_eq!(gen_random(5, 8, 42), gen_random(5, 8, 42));
        assert_eq!(gen_random(5, 8, 42).edge_count(), 8);
        assert_ne!(gen_random(5, 8, 42), gen_random(5, 8, 43));
        let one = gen_random(1, 1, 7);
        assert_eq!(one.edges(), &[(NodeId(0), NodeId(0))]);
        assert_eq!(gen_random(3, 9, 0).edge_count(), 9);
    }

    #[test]
    fn random_repair_count_is_degree_product() {
        let g = gen_random(6, 10, 1);
        let product: usize = g.nodes().map(|u| g.out_degree(u).max(1)).product();
        assert_eq!(repair_count(&g), BigUint::from(product));
    }

    #[test]
    fn random_queries_are_small() {
        for seed in 0..200 {
            let q = gen_random_query(5, 5, seed);
            assert!((1..=5).contains(&q.atoms().len()));
            assert!(q.variable_count() <= 5);
            assert_eq!(gen_random_query(5, 5, seed), q);
        }
    }
}
