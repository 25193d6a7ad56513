//! Consistent query answering for Boolean conjunctive queries over a single
//! binary relation `R` whose first attribute is a key.
//!
//! Instances are directed graphs; a repair keeps exactly one outgoing edge
//! per node that has any. The crate normalizes queries into a path or a
//! divisibility-free collection of cycles, decides certain answers in
//! polynomial time, emits first-order rewritings where they exist, and ships
//! a brute-force repair oracle to check all of it against.
//!
//! ```
//! use graphcqa::{certain, cq, graph, normalizer};
//!
//! let q = cq::parse_query("R(x,y), R(y,x)").unwrap();
//! let class = normalizer::classify(&q);
//! let inst = graph::load_instance("a b\nb a\nb c\n".as_bytes()).unwrap();
//! let verdict = certain::certain_answer(&class.normal_form, &inst, false).unwrap();
//! assert!(!verdict.certain);
//! ```

pub mod certain;
pub mod cq;
mod error;
pub mod fixtures;
pub mod graph;
pub mod normalizer;
pub mod oracle;

pub use error::{Error, Result};
