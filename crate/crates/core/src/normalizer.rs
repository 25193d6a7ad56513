//! Key-equivalent normal forms of conjunctive queries.
//!
//! Chasing the key constraint makes the canonical database functional (every
//! node has at most one successor). Its core is then either a directed path
//! or a set of disjoint cycles in which no length divides another.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::cq::{ConjunctiveQuery, VarId};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NormalForm {
    /// A directed walk with this many edges (at least one).
    Path(usize),
    /// Disjoint cycles; lengths form an antichain under divisibility.
    Cycles(BTreeSet<usize>),
}

impl NormalForm {
    /// Cycle collection pruned by [`minimal_divisor_set`].
    pub fn cycles(lengths: impl IntoIterator<Item = usize>) -> Self {
        let lengths: Vec<usize> = lengths.into_iter().collect();
        NormalForm::Cycles(minimal_divisor_set(&lengths))
    }

    pub fn is_self_loop(&self) -> bool {
        matches!(self, NormalForm::Cycles(l) if l.len() == 1 && l.contains(&1))
    }

    pub fn is_fo_rewritable(&self) -> bool {
        matches!(self, NormalForm::Path(_)) || self.is_self_loop()
    }

    /// The normal form written back as a query over `x1`, `x2`, ...
    pub fn to_query(&self) -> ConjunctiveQuery {
        let atoms: Vec<(usize, usize)> = match self {
            NormalForm::Path(n) => (0..*n).map(|k| (k, k + 1)).collect(),
            NormalForm::Cycles(lengths) => {
                let mut atoms = Vec::new();
                let mut base = 0;
                for &len in lengths {
                    atoms.extend((0..len).map(|k| (base + k, base + (k + 1) % len)));
                    base += len;
                }
                atoms
            }
        };
        ConjunctiveQuery::from_index_atoms(&atoms).expect("normal forms have at least one atom")
    }
}

/// `path:<n>` or `cycles:<l1>,<l2>,...` in ascending order.
impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormalForm::Path(n) => write!(f, "path:{n}"),
            NormalForm::Cycles(lengths) => {
                f.write_str("cycles:")?;
                for (k, len) in lengths.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{len}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for NormalForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |message: &str| Error::Syntax {
            offset: 0,
            message: format!("{message} in normal form `{s}`"),
        };
        let number = |t: &str| -> Result<usize> {
            match t.trim().parse::<usize>() {
                Ok(n) if n >= 1 => Ok(n),
                _ => Err(bad("expected a positive integer")),
            }
        };
        if let Some(rest) = s.strip_prefix("path:") {
            Ok(NormalForm::Path(number(rest)?))
        } else if let Some(rest) = s.strip_prefix("cycles:") {
            let lengths = rest.split(',').map(number).collect::<Result<Vec<_>>>()?;
            let pruned = minimal_divisor_set(&lengths);
            if pruned.len() != lengths.len() {
                return Err(bad("cycle lengths must not divide one another"));
            }
            Ok(NormalForm::Cycles(pruned))
        } else {
            Err(bad("expected `path:` or `cycles:`"))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Complexity {
    Fo,
    PtimeNotFo,
}

impl Complexity {
    pub fn as_str(self) -> &'static str {
        match self {
            Complexity::Fo => "FO",
            Complexity::PtimeNotFo => "PTIME_NOT_FO",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub normal_form: NormalForm,
    pub fo_rewritable: bool,
    pub complexity: Complexity,
}

/// Deduplicates and drops every length divisible by a shorter retained one.
pub fn minimal_divisor_set(lengths: &[usize]) -> BTreeSet<usize> {
    let sorted: BTreeSet<usize> = lengths.iter().copied().filter(|&l| l > 0).collect();
    let mut kept = BTreeSet::new();
    for len in sorted {
        if !kept.iter().any(|&d| len % d == 0) {
            kept.insert(len);
        }
    }
    kept
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    // Smaller id becomes the representative.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi] = lo;
        true
    }
}

/// Merges second-position variables that share a first-position variable,
/// to a fixpoint. Each class keeps its least variable (and its name);
/// duplicate atoms are dropped and the rest keep source order.
pub fn key_chase(q: &ConjunctiveQuery) -> ConjunctiveQuery {
    let n = q.variable_count();
    let mut uf = UnionFind::new(n);
    loop {
        let mut changed = false;
        let mut target: Vec<Option<usize>> = vec![None; n];
        for &(a, b) in q.atoms() {
            let ra = uf.find(a.index());
            let rb = uf.find(b.index());
            match target[ra] {
                None => target[ra] = Some(rb),
                Some(t) => changed |= uf.union(t, rb),
            }
        }
        if !changed {
            break;
        }
    }

    let mut new_id: Vec<Option<u32>> = vec![None; n];
    let mut names = Vec::new();
    for (v, id) in new_id.iter_mut().enumerate() {
        if uf.find(v) == v {
            *id = Some(names.len() as u32);
            names.push(q.name(VarId(v as u32)).to_string());
        }
    }
    let mut atoms: Vec<(VarId, VarId)> = Vec::new();
    for &(a, b) in q.atoms() {
        let a = VarId(new_id[uf.find(a.index())].expect("root has an id"));
        let b = VarId(new_id[uf.find(b.index())].expect("root has an id"));
        if !atoms.contains(&(a, b)) {
            atoms.push((a, b));
        }
    }
    ConjunctiveQuery::new(names, atoms).expect("chase preserves a non-empty atom list")
}

/// Cycle lengths and longest-path length of a functional graph given by
/// successor pointers.
fn functional_shape(succ: &[Option<usize>]) -> (Vec<usize>, usize) {
    const NEW: u8 = 0;
    const ACTIVE: u8 = 1;
    const DONE: u8 = 2;
    let n = succ.len();
    let mut state = vec![NEW; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        let mut walk = Vec::new();
        let mut cur = Some(start);
        while let Some(u) = cur {
            if state[u] == DONE {
                break;
            }
            if state[u] == ACTIVE {
                let pos = walk
                    .iter()
                    .position(|&w| w == u)
                    .expect("active node is on the walk");
                cycles.push(walk.len() - pos);
                break;
            }
            state[u] = ACTIVE;
            walk.push(u);
            cur = succ[u];
        }
        for w in walk {
            state[w] = DONE;
        }
    }

    // Only meaningful when acyclic: edges on the longest walk.
    let mut longest = 0;
    if cycles.is_empty() {
        let mut depth: Vec<Option<usize>> = vec![None; n];
        for start in 0..n {
            let mut stack = vec![start];
            while let Some(&u) = stack.last() {
                if depth[u].is_some() {
                    stack.pop();
                    continue;
                }
                match succ[u] {
                    None => {
                        depth[u] = Some(0);
                        stack.pop();
                    }
                    Some(v) => match depth[v] {
                        Some(d) => {
                            depth[u] = Some(d + 1);
                            stack.pop();
                        }
                        None => stack.push(v),
                    },
                }
            }
            longest = longest.max(depth[start].unwrap_or(0));
        }
    }
    (cycles, longest)
}

/// Normal form of `q` together with its rewritability class.
pub fn classify(q: &ConjunctiveQuery) -> Classification {
    let chased = key_chase(q);
    let mut succ = vec![None; chased.variable_count()];
    for &(a, b) in chased.atoms() {
        debug_assert!(succ[a.index()].is_none(), "chased query is functional");
        succ[a.index()] = Some(b.index());
    }
    let (cycles, longest) = functional_shape(&succ);
    let normal_form = if cycles.is_empty() {
        NormalForm::Path(longest)
    } else {
        NormalForm::Cycles(minimal_divisor_set(&cycles))
    };
    let fo_rewritable = normal_form.is_fo_rewritable();
    Classification {
        normal_form,
        fo_rewritable,
        complexity: if fo_rewritable {
            Complexity::Fo
        } else {
            Complexity::PtimeNotFo
        },
    }
}
