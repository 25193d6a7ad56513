use std::collections::VecDeque;
use std::ops::ControlFlow;

use super::{Digraph, NodeId};
use crate::{Error, Result};

/// Largest `max_len` accepted by [`simple_cycles_up_to`].
pub const DEFAULT_CYCLE_BOUND: usize = 8;

// Path enumerations beyond this many candidate tuples get a warning.
const LONG_CYCLE_WARN_TUPLES: f64 = 1e8;

fn scope_mask(n: usize, scope: &[NodeId]) -> Vec<bool> {
    let mut mask = vec![false; n];
    for &u in scope {
        mask[u.index()] = true;
    }
    mask
}

/// Calls `f` once per simple cycle inside `scope` with at most `max_len`
/// edges. Each cycle is reported rotated to start at its least node; starts
/// are visited in ascending order.
pub fn visit_simple_cycles<G, F>(
    g: &G,
    scope: &[NodeId],
    max_len: usize,
    mut f: F,
) -> ControlFlow<()>
where
    G: Digraph + ?Sized,
    F: FnMut(&[NodeId]) -> ControlFlow<()>,
{
    let in_scope = scope_mask(g.node_count(), scope);
    let mut starts = scope.to_vec();
    starts.sort_unstable();
    starts.dedup();

    let mut on_path = vec![false; g.node_count()];
    let mut path = Vec::with_capacity(max_len);
    for &start in &starts {
        path.clear();
        path.push(start);
        on_path[start.index()] = true;
        let flow = extend(
            g,
            start,
            &in_scope,
            &mut on_path,
            &mut path,
            max_len,
            &mut f,
        );
        on_path[start.index()] = false;
        flow?;
    }
    ControlFlow::Continue(())
}

fn extend<G, F>(
    g: &G,
    start: NodeId,
    in_scope: &[bool],
    on_path: &mut [bool],
    path: &mut Vec<NodeId>,
    max_len: usize,
    f: &mut F,
) -> ControlFlow<()>
where
    G: Digraph + ?Sized,
    F: FnMut(&[NodeId]) -> ControlFlow<()>,
{
    let last = *path.last().expect("path is never empty");
    for &v in g.successors(last) {
        if v == start {
            f(path)?;
        } else if v > start && in_scope[v.index()] && !on_path[v.index()] && path.len() < max_len {
            on_path[v.index()] = true;
            path.push(v);
            let flow = extend(g, start, in_scope, on_path, path, max_len, f);
            path.pop();
            on_path[v.index()] = false;
            flow?;
        }
    }
    ControlFlow::Continue(())
}

/// All simple cycles in `scope` of length at most `max_len`, sorted.
pub fn simple_cycles_up_to<G: Digraph + ?Sized>(
    g: &G,
    scope: &[NodeId],
    max_len: usize,
) -> Result<Vec<Vec<NodeId>>> {
    simple_cycles_with_bound(g, scope, max_len, DEFAULT_CYCLE_BOUND)
}

pub fn simple_cycles_with_bound<G: Digraph + ?Sized>(
    g: &G,
    scope: &[NodeId],
    max_len: usize,
    bound: usize,
) -> Result<Vec<Vec<NodeId>>> {
    if max_len > bound {
        return Err(Error::BoundExceeded {
            requested: max_len,
            bound,
        });
    }
    let mut cycles = Vec::new();
    let _ = visit_simple_cycles(g, scope, max_len, |c| {
        cycles.push(c.to_vec());
        ControlFlow::Continue(())
    });
    cycles.sort();
    Ok(cycles)
}

/// Whether `scope` contains a simple cycle with more than `n` edges.
///
/// Enumerates simple paths `a0 -> ... -> an` of `n + 1` distinct nodes and
/// asks whether `an` reaches `a0` without touching `a1 .. a(n-1)`. Every
/// such configuration closes a simple cycle of length at least `n + 1`, and
/// every longer cycle contains one, anchored at its least node.
pub fn has_long_simple_cycle<G: Digraph + ?Sized>(g: &G, scope: &[NodeId], n: usize) -> bool {
    long_simple_cycle(g, scope, n).is_some()
}

/// Like [`has_long_simple_cycle`] but returns a witnessing cycle.
pub(crate) fn long_simple_cycle<G: Digraph + ?Sized>(
    g: &G,
    scope: &[NodeId],
    n: usize,
) -> Option<Vec<NodeId>> {
    let in_scope = scope_mask(g.node_count(), scope);
    let size = in_scope.iter().filter(|&&b| b).count();
    if size < n + 1 {
        return None;
    }
    if (size as f64).powi(n as i32 + 1) > LONG_CYCLE_WARN_TUPLES {
        log::warn!("long-cycle check over {size} nodes with n = {n} may be slow");
    }

    let mut starts = scope.to_vec();
    starts.sort_unstable();
    starts.dedup();
    let mut on_path = vec![false; g.node_count()];
    let mut path = Vec::with_capacity(n + 1);
    for &start in &starts {
        path.clear();
        path.push(start);
        on_path[start.index()] = true;
        let found = long_paths(g, start, &in_scope, &mut on_path, &mut path, n);
        on_path[start.index()] = false;
        if found.is_some() {
            return found;
        }
    }
    None
}

fn long_paths<G: Digraph + ?Sized>(
    g: &G,
    start: NodeId,
    in_scope: &[bool],
    on_path: &mut [bool],
    path: &mut Vec<NodeId>,
    n: usize,
) -> Option<Vec<NodeId>> {
    if path.len() == n + 1 {
        let tail = path[n];
        let back = path_avoiding(g, tail, start, in_scope, on_path)?;
        let mut cycle = path.clone();
        cycle.extend_from_slice(&back[1..back.len() - 1]);
        return Some(cycle);
    }
    let last = *path.last().expect("path is never empty");
    for &v in g.successors(last) {
        if v > start && in_scope[v.index()] && !on_path[v.index()] {
            on_path[v.index()] = true;
            path.push(v);
            let found = long_paths(g, start, in_scope, on_path, path, n);
            path.pop();
            on_path[v.index()] = false;
            if found.is_some() {
                return found;
            }
        }
    }
    None
}

// Shortest path `from -> to` through in-scope nodes greater than `to` that
// are not on the current path (apart from the two endpoints).
fn path_avoiding<G: Digraph + ?Sized>(
    g: &G,
    from: NodeId,
    to: NodeId,
    in_scope: &[bool],
    on_path: &[bool],
) -> Option<Vec<NodeId>> {
    let mut parent: Vec<Option<NodeId>> = vec![None; g.node_count()];
    let mut seen = vec![false; g.node_count()];
    seen[from.index()] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        for &v in g.successors(u) {
            if v == to {
                let mut back = vec![to, u];
                let mut cur = u;
                while let Some(p) = parent[cur.index()] {
                    back.push(p);
                    cur = p;
                }
                back.reverse();
                return Some(back);
            }
            if seen[v.index()] || !in_scope[v.index()] || on_path[v.index()] || v < to {
                continue;
            }
            seen[v.index()] = true;
            parent[v.index()] = Some(u);
            queue.push_back(v);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{instance_of, Instance};

    fn all(i: &Instance) -> Vec<NodeId> {
        i.nodes().collect()
    }

    fn cycle(n: usize) -> Instance {
        Instance::with_numbered_nodes(n, (0..n).map(|k| (k, (k + 1) % n)))
    }

    #[test]
    fn two_cycle_enumerated_once() {
        let i = instance_of(&[("a", "b"), ("b", "a")]);
        assert_eq!(
            simple_cycles_up_to(&i, &all(&i), 2).unwrap(),
            vec![vec![NodeId(0), NodeId(1)]]
        );
    }

    #[test]
    fn triangle_too_long_for_two() {
        let i = cycle(3);
        assert!(simple_cycles_up_to(&i, &all(&i), 2).unwrap().is_empty());
    }

    #[test]
    fn triangle_with_loop() {
        let i = instance_of(&[("a", "a"), ("a", "b"), ("b", "c"), ("c", "a")]);
        assert_eq!(
            simple_cycles_up_to(&i, &all(&i), 3).unwrap(),
            vec![vec![NodeId(0)], vec![NodeId(0), NodeId(1), NodeId(2)]]
        );
    }

    #[test]
    fn bound_is_enforced() {
        let i = cycle(3);
        assert!(matches!(
            simple_cycles_up_to(&i, &all(&i), 9),
            Err(Error::BoundExceeded {
                requested: 9,
                bound: 8
            })
        ));
    }

    #[test]
    fn scope_restricts_cycles() {
        let i = instance_of(&[("a", "b"), ("b", "a"), ("c", "d"), ("d", "c")]);
        let cycles = simple_cycles_up_to(&i, &[NodeId(2), NodeId(3)], 4).unwrap();
        assert_eq!(cycles, vec![vec![NodeId(2), NodeId(3)]]);
    }

    #[test]
    fn long_cycles_in_four_cycle() {
        let i = cycle(4);
        assert!(has_long_simple_cycle(&i, &all(&i), 2));
        assert!(has_long_simple_cycle(&i, &all(&i), 3));
        assert!(!has_long_simple_cycle(&i, &all(&i), 4));
    }

    #[test]
    fn bowtie_of_triangles() {
        // two triangles sharing node a: every simple cycle has length 3
        let i = instance_of(&[
            ("a", "b"),
            ("b", "c"),
            ("c", "a"),
            ("a", "d"),
            ("d", "e"),
            ("e", "a"),
        ]);
        assert!(!has_long_simple_cycle(&i, &all(&i), 3));
        assert!(has_long_simple_cycle(&i, &all(&i), 2));
        let witness = long_simple_cycle(&i, &all(&i), 2).unwrap();
        assert_eq!(witness.len(), 3);
    }

    #[test]
    fn long_witness_is_a_simple_cycle() {
        let i = cycle(6);
        let c = long_simple_cycle(&i, &all(&i), 1).unwrap();
        assert_eq!(c.len(), 6);
        for k in 0..c.len() {
            assert!(i.has_edge(c[k], c[(k + 1) % c.len()]));
        }
    }
}
