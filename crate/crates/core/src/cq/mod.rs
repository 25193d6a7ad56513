//! Boolean conjunctive queries over the binary relation `R`.

mod core;
mod hom;
mod parse;

use std::fmt;

use crate::graph::{Instance, NodeId};
use crate::{Error, Result};

pub use self::core::core_of;
pub use hom::{find_homomorphism, HomPlan, Limits, Mapping};
pub use parse::parse_query;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub u32);

impl VarId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// An existentially closed conjunction of atoms `R(first, second)`.
///
/// Atoms keep their source order and duplicates; the canonical database
/// collapses them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjunctiveQuery {
    names: Vec<String>,
    atoms: Vec<(VarId, VarId)>,
}

impl ConjunctiveQuery {
    /// Every variable must occur in some atom and `atoms` must be non-empty.
    pub fn new(names: Vec<String>, atoms: Vec<(VarId, VarId)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidQuery(
                "a query needs at least one atom".into(),
            ));
        }
        let mut used = vec![false; names.len()];
        for &(a, b) in &atoms {
            for v in [a, b] {
                let slot = used
                    .get_mut(v.index())
                    .ok_or_else(|| Error::InvalidQuery(format!("variable {} out of range", v.0)))?;
                *slot = true;
            }
        }
        if let Some(idx) = used.iter().position(|&u| !u) {
            return Err(Error::InvalidQuery(format!(
                "variable `{}` occurs in no atom",
                names[idx]
            )));
        }
        Ok(ConjunctiveQuery { names, atoms })
    }

    /// Builds a query from atoms over variable indices, naming them `x1`, `x2`, ...
    pub fn from_index_atoms(atoms: &[(usize, usize)]) -> Result<Self> {
        let mut remap: Vec<Option<u32>> = Vec::new();
        let mut next = 0u32;
        let mut intern = |v: usize| {
            if remap.len() <= v {
                remap.resize(v + 1, None);
            }
            *remap[v].get_or_insert_with(|| {
                next += 1;
                next - 1
            })
        };
        let atoms: Vec<(VarId, VarId)> = atoms
            .iter()
            .map(|&(a, b)| {
                let a = intern(a);
                (VarId(a), VarId(intern(b)))
            })
            .collect();
        let names = (1..=next).map(|k| format!("x{k}")).collect();
        Self::new(names, atoms)
    }

    pub fn atoms(&self) -> &[(VarId, VarId)] {
        &self.atoms
    }

    pub fn variable_count(&self) -> usize {
        self.names.len()
    }

    pub fn variables(&self) -> impl Iterator<Item = VarId> {
        (0..self.names.len() as u32).map(VarId)
    }

    pub fn name(&self, v: VarId) -> &str {
        &self.names[v.index()]
    }
}

/// One node per variable (labelled by its name), one edge per distinct atom.
pub fn canonical_database(q: &ConjunctiveQuery) -> Instance {
    Instance::from_edges(
        q.names.clone(),
        q.atoms.iter().map(|&(a, b)| (NodeId(a.0), NodeId(b.0))),
    )
}

/// Whether `q` holds on `i`, i.e. its canonical database maps into `i`.
pub fn evaluate(q: &ConjunctiveQuery, i: &Instance) -> Result<bool> {
    let plan = HomPlan::new(&canonical_database(q), Limits::default())?;
    Ok(plan.exists(i))
}

/// Prints `R(x1,x2), R(x2,x3)` with variables renamed in first-occurrence order.
impl fmt::Display for ConjunctiveQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut rename: Vec<Option<usize>> = vec![None; self.names.len()];
        let mut next = 0;
        let mut name = |v: VarId| {
            *rename[v.index()].get_or_insert_with(|| {
                next += 1;
                next
            })
        };
        for (k, &(a, b)) in self.atoms.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            let a = name(a);
            let b = name(b);
            write!(f, "R(x{a},x{b})")?;
        }
        Ok(())
    }
}
