//! Brute-force ground truth: enumerate every repair and evaluate the query
//! on each one by homomorphism search.
//!
//! Repairs are edge selections over the base instance. The choice space is
//! cut into fixed blocks that may be evaluated in parallel; results never
//! depend on scheduling.

use std::slice;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::cq::{canonical_database, ConjunctiveQuery, HomPlan, Limits};
use crate::graph::{repair_count, Digraph, Instance, NodeId};
use crate::{Error, Result};

/// Default enumeration cap, 2^20 repairs.
pub const DEFAULT_CAP: u64 = 1 << 20;

const BLOCK: u64 = 1 << 12;

/// One repair, represented by the chosen successor index of every node.
#[derive(Clone, Debug)]
pub struct Repair<'a> {
    base: &'a Instance,
    choice: Vec<u32>,
}

impl<'a> Repair<'a> {
    pub fn base(&self) -> &'a Instance {
        self.base
    }

    /// Chosen successor of `u`, if it has any outgoing edge.
    pub fn chosen(&self, u: NodeId) -> Option<NodeId> {
        self.successors(u).first().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.base
            .nodes()
            .filter_map(|u| self.chosen(u).map(|v| (u, v)))
    }

    pub fn to_instance(&self) -> Instance {
        self.base
            .sub_instance(self.edges())
            .expect("repair edges come from the base instance")
    }
}

impl Digraph for Repair<'_> {
    fn node_count(&self) -> usize {
        self.base.node_count()
    }

    #[inline]
    fn successors(&self, u: NodeId) -> &[NodeId] {
        let succ = self.base.successors(u);
        if succ.is_empty() {
            succ
        } else {
            slice::from_ref(&succ[self.choice[u.index()] as usize])
        }
    }

    #[inline]
    fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.successors(u).first() == Some(&v)
    }
}

/// Mixed-radix view of the choice space: one digit per node with out-edges,
/// the least node being the most significant digit.
#[derive(Clone, Debug)]
struct ChoiceSpace<'a> {
    base: &'a Instance,
    /// (node index, out-degree) for nodes with at least one out-edge
    digits: Vec<(usize, u32)>,
    total: u64,
}

impl<'a> ChoiceSpace<'a> {
    fn new(base: &'a Instance, cap: u64) -> Result<Self> {
        let count = repair_count(base);
        let total = match count.to_u64() {
            Some(t) if t <= cap => t,
            _ => return Err(Error::CapExceeded { count, cap }),
        };
        let digits = base
            .nodes()
            .filter(|&u| base.out_degree(u) > 0)
            .map(|u| (u.index(), base.out_degree(u) as u32))
            .collect();
        Ok(ChoiceSpace {
            base,
            digits,
            total,
        })
    }

    fn repair_at(&self, mut rank: u64) -> Repair<'a> {
        let mut choice = vec![0u32; self.base.node_count()];
        for &(u, radix) in self.digits.iter().rev() {
            choice[u] = (rank % radix as u64) as u32;
            rank /= radix as u64;
        }
        Repair {
            base: self.base,
            choice,
        }
    }

    // Advances to the next choice vector; false after the last one.
    fn advance(&self, repair: &mut Repair<'_>) -> bool {
        for &(u, radix) in self.digits.iter().rev() {
            repair.choice[u] += 1;
            if repair.choice[u] < radix {
                return true;
            }
            repair.choice[u] = 0;
        }
        false
    }

    fn blocks(&self) -> impl IndexedParallelIterator<Item = (u64, u64)> + '_ {
        let n_blocks = self.total.div_ceil(BLOCK) as usize;
        (0..n_blocks).into_par_iter().map(move |b| {
            let b = b as u64;
            (b * BLOCK, ((b + 1) * BLOCK).min(self.total))
        })
    }

    fn for_each_in<F: FnMut(&Repair<'_>) -> bool>(
        &self,
        (start, end): (u64, u64),
        mut f: F,
    ) -> bool {
        let mut repair = self.repair_at(start);
        for _ in start..end {
            if !f(&repair) {
                return false;
            }
            self.advance(&mut repair);
        }
        true
    }
}

/// Iterates every repair once, in lexicographic choice-vector order.
#[derive(Debug)]
pub struct RepairIterator<'a> {
    space: ChoiceSpace<'a>,
    next: Option<Repair<'a>>,
    remaining: u64,
}

impl<'a> Iterator for RepairIterator<'a> {
    type Item = Repair<'a>;

    fn next(&mut self) -> Option<Repair<'a>> {
        let current = self.next.take()?;
        self.remaining -= 1;
        if self.remaining > 0 {
            let mut following = current.clone();
            self.space.advance(&mut following);
            self.next = Some(following);
        }
        Some(current)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.remaining as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for RepairIterator<'_> {}

/// All repairs of `i`; fails when there are more than `cap`.
pub fn enumerate_repairs(i: &Instance, cap: u64) -> Result<RepairIterator<'_>> {
    let space = ChoiceSpace::new(i, cap)?;
    let remaining = space.total;
    Ok(RepairIterator {
        next: Some(space.repair_at(0)),
        space,
        remaining,
    })
}

fn plan_for(q: &ConjunctiveQuery) -> Result<HomPlan> {
    HomPlan::new(&canonical_database(q), Limits::default())
}

/// Whether `q` holds on every repair of `i`.
pub fn oracle_certain(q: &ConjunctiveQuery, i: &Instance, cap: u64) -> Result<bool> {
    let space = ChoiceSpace::new(i, cap)?;
    let plan = plan_for(q)?;
    Ok(space
        .blocks()
        .all(|block| space.for_each_in(block, |r| plan.exists(r))))
}

/// The first repair (in enumeration order) on which `q` fails.
pub fn oracle_counterexample(
    q: &ConjunctiveQuery,
    i: &Instance,
    cap: u64,
) -> Result<Option<Instance>> {
    let space = ChoiceSpace::new(i, cap)?;
    let plan = plan_for(q)?;
    let found = space.blocks().find_map_first(|block| {
        let mut hit = None;
        space.for_each_in(block, |r| {
            if plan.exists(r) {
                true
            } else {
                hit = Some(r.to_instance());
                false
            }
        });
        hit
    });
    Ok(found)
}

/// Number of repairs of `i` on which `q` holds.
pub fn count_satisfying_repairs(q: &ConjunctiveQuery, i: &Instance, cap: u64) -> Result<BigUint> {
    let space = ChoiceSpace::new(i, cap)?;
    let plan = plan_for(q)?;
    let count: u64 = space
        .blocks()
        .map(|block| {
            let mut n = 0u64;
            space.for_each_in(block, |r| {
                n += plan.exists(r) as u64;
                true
            });
            n
        })
        .sum();
    Ok(BigUint::from(count))
}
