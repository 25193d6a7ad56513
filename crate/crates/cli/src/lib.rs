//! Command-line front end. [`run`] takes explicit streams so the whole
//! binary can be driven from tests.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use graphcqa::certain::{certain_answer, emit_fo_rewriting};
use graphcqa::cq::{parse_query, ConjunctiveQuery};
use graphcqa::fixtures::{gen_ef_pair, gen_random, gen_spurred_chain, Spur};
use graphcqa::graph::{load_instance, repair_count, to_edge_list, Instance};
use graphcqa::normalizer::classify;
use graphcqa::oracle::{count_satisfying_repairs, oracle_certain};
use graphcqa::Error;
use num_bigint::BigUint;
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_CERTAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

/// Printed by `rewrite` for queries without a first-order rewriting.
pub const NOT_FO_REWRITABLE: &str = "NOT_FO_REWRITABLE";

#[derive(Debug, Parser)]
#[command(
    name = "graphcqa",
    version,
    about = "Certain answers for conjunctive queries over one keyed binary relation R"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Normal form and complexity of a query
    Classify {
        query: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Decide whether the query holds in every repair of the instance
    Certain {
        query: String,
        /// Edge-list file, or `-` for standard input
        instance: PathBuf,
        /// Include a repair on which the query fails
        #[arg(long)]
        counterexample: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Print a first-order rewriting of the certain answers
    Rewrite {
        query: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Brute-force verdict by enumerating all repairs
    Oracle {
        query: String,
        instance: PathBuf,
        #[command(flatten)]
        cap: Cap,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Count the repairs on which the query holds
    Count {
        query: String,
        instance: PathBuf,
        #[command(flatten)]
        cap: Cap,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Generate an instance as an edge list
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        /// Write to this file instead of standard output
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct Cap {
    /// Maximum number of repairs to enumerate
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    cap: u64,
}

#[derive(Debug, Subcommand)]
enum GenKind {
    /// One half of a pair of chains that no short first-order sentence separates
    Ef {
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(2..))]
        len: u64,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        distance: u64,
        #[arg(long, value_enum, default_value_t = Part::D1)]
        part: Part,
    },
    /// A chain of cycles sharing joint nodes
    Chain {
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(2..))]
        len: u64,
        #[arg(long, default_value_t = 1)]
        links: u64,
        /// Add an outgoing spur at joint `c<I>` (repeatable)
        #[arg(long = "spur-out", value_name = "I")]
        spur_out: Vec<u64>,
        /// Add an incoming spur at joint `c<I>` (repeatable)
        #[arg(long = "spur-in", value_name = "I")]
        spur_in: Vec<u64>,
    },
    /// A seeded random digraph
    Random {
        #[arg(long)]
        nodes: u64,
        #[arg(long)]
        edges: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Part {
    D1,
    D2,
}

#[derive(Serialize)]
struct ClassifyOut {
    query: String,
    normal_form: String,
    fo_rewritable: bool,
    complexity: &'static str,
}

#[derive(Serialize)]
struct CertainOut {
    certain: bool,
    rule: &'static str,
    normal_form: String,
    witness_component: Option<Vec<String>>,
    cycle_witnesses: BTreeMap<String, Vec<String>>,
    falsifying_repair: Option<String>,
}

#[derive(Serialize)]
struct RewriteOut {
    fo_rewritable: bool,
    sentence: Option<String>,
    quantifier_depth: Option<usize>,
}

#[derive(Serialize)]
struct OracleOut {
    certain: bool,
    repairs: u64,
}

#[derive(Serialize)]
struct CountOut {
    repairs: u64,
    satisfying: u64,
}

enum Failure {
    Usage(String),
    Cap(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. }
            | Error::ResourceGuard { .. }
            | Error::BoundExceeded { .. } => Failure::Cap(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = std::result::Result<i32, Failure>;

/// Runs one command and returns the process exit code.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(stdout, "{}", e.render());
            return EXIT_OK;
        }
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return EXIT_USAGE;
        }
    };
    match dispatch(cli.command, stdin, stdout) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Cap(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_CAP
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(command: Command, stdin: &mut dyn Read, stdout: &mut dyn Write) -> Outcome {
    match command {
        Command::Classify { query, format } => {
            let q = parse_query(&query)?;
            let c = classify(&q);
            let out = ClassifyOut {
                query: q.to_string(),
                normal_form: c.normal_form.to_string(),
                fo_rewritable: c.fo_rewritable,
                complexity: c.complexity.as_str(),
            };
            match format {
                Format::Json => emit_json(stdout, &out)?,
                Format::Text => writeln!(stdout, "{} {}", out.normal_form, out.complexity)?,
            }
            Ok(EXIT_OK)
        }
        Command::Certain {
            query,
            instance,
            counterexample,
            format,
        } => {
            let q = parse_query(&query)?;
            let i = read_instance(&instance, stdin)?;
            let nf = classify(&q).normal_form;
            let v = certain_answer(&nf, &i, counterexample)?;
            let out = CertainOut {
                certain: v.certain,
                rule: v.rule.as_str(),
                normal_form: nf.to_string(),
                witness_component: v.witness_component.as_deref().map(|c| i.labels_of(c)),
                cycle_witnesses: v
                    .cycle_witnesses
                    .iter()
                    .map(|(len, c)| (len.to_string(), i.labels_of(c)))
                    .collect(),
                falsifying_repair: v.falsifying_repair.as_ref().map(to_edge_list),
            };
            match format {
                Format::Json => emit_json(stdout, &out)?,
                Format::Text => {
                    writeln!(stdout, "{} {} {}", out.certain, out.rule, out.normal_form)?;
                    if let Some(repair) = &out.falsifying_repair {
                        write!(stdout, "{repair}")?;
                    }
                }
            }
            Ok(verdict_code(v.certain))
        }
        Command::Rewrite { query, format } => {
            let q = parse_query(&query)?;
            let sentence = emit_fo_rewriting(&classify(&q).normal_form);
            match format {
                Format::Json => emit_json(
                    stdout,
                    &RewriteOut {
                        fo_rewritable: sentence.is_some(),
                        sentence: sentence.as_ref().map(|s| s.text.clone()),
                        quantifier_depth: sentence.as_ref().map(|s| s.quantifier_depth),
                    },
                )?,
                Format::Text => match &sentence {
                    Some(s) => writeln!(stdout, "{}", s.text)?,
                    None => writeln!(stdout, "{NOT_FO_REWRITABLE}")?,
                },
            }
            Ok(EXIT_OK)
        }
        Command::Oracle {
            query,
            instance,
            cap,
            format,
        } => {
            let (q, i) = query_and_instance(&query, &instance, stdin)?;
            let certain = oracle_certain(&q, &i, cap.cap)?;
            let out = OracleOut {
                certain,
                repairs: under_cap(&repair_count(&i))?,
            };
            match format {
                Format::Json => emit_json(stdout, &out)?,
                Format::Text => writeln!(stdout, "{} {}", out.certain, out.repairs)?,
            }
            Ok(verdict_code(certain))
        }
        Command::Count {
            query,
            instance,
            cap,
            format,
        } => {
            let (q, i) = query_and_instance(&query, &instance, stdin)?;
            let satisfying = count_satisfying_repairs(&q, &i, cap.cap)?;
            let out = CountOut {
                repairs: under_cap(&repair_count(&i))?,
                satisfying: under_cap(&satisfying)?,
            };
            match format {
                Format::Json => emit_json(stdout, &out)?,
                Format::Text => writeln!(stdout, "{} {}", out.satisfying, out.repairs)?,
            }
            Ok(EXIT_OK)
        }
        Command::Gen { kind, out } => {
            let instance = generate(kind)?;
            let text = to_edge_list(&instance);
            match out {
                Some(path) => File::create(path)?.write_all(text.as_bytes())?,
                None => stdout.write_all(text.as_bytes())?,
            }
            Ok(EXIT_OK)
        }
    }
}

fn generate(kind: GenKind) -> std::result::Result<Instance, Failure> {
    let size = |v: u64| usize::try_from(v).map_err(|_| Failure::Usage(format!("{v} is too large")));
    Ok(match kind {
        GenKind::Ef {
            len,
            distance,
            part,
        } => {
            let pair = gen_ef_pair(size(len)?, size(distance)?);
            match part {
                Part::D1 => pair.d1,
                Part::D2 => pair.d2,
            }
        }
        GenKind::Chain {
            len,
            links,
            spur_out,
            spur_in,
        } => {
            let links = size(links)?;
            let mut spurs = Vec::new();
            for (joints, make) in [
                (spur_in, Spur::Into as fn(usize) -> Spur),
                (spur_out, Spur::OutOf),
            ] {
                for j in joints {
                    let j = size(j)?;
                    if j > links {
                        return Err(Failure::Usage(format!(
                            "joint c{j} does not exist; the chain ends at c{links}"
                        )));
                    }
                    spurs.push(make(j));
                }
            }
            gen_spurred_chain(size(len)?, links, &spurs)
        }
        GenKind::Random { nodes, edges, seed } => {
            let (nodes, edges) = (size(nodes)?, size(edges)?);
            if nodes.checked_mul(nodes).is_none_or(|pairs| edges > pairs) {
                return Err(Failure::Usage(format!(
                    "{edges} edges do not fit on {nodes} nodes"
                )));
            }
            gen_random(nodes, edges, seed)
        }
    })
}

fn query_and_instance(
    query: &str,
    path: &PathBuf,
    stdin: &mut dyn Read,
) -> std::result::Result<(ConjunctiveQuery, Instance), Failure> {
    Ok((parse_query(query)?, read_instance(path, stdin)?))
}

fn read_instance(path: &PathBuf, stdin: &mut dyn Read) -> std::result::Result<Instance, Failure> {
    let instance = if path.as_os_str() == "-" {
        load_instance(stdin)
    } else {
        let file = File::open(path)
            .map_err(|e| Failure::Usage(format!("cannot open {}: {e}", path.display())))?;
        load_instance(file)
    };
    Ok(instance?)
}

// Counts are bounded by the cap once enumeration has succeeded.
fn under_cap(n: &BigUint) -> std::result::Result<u64, Failure> {
    u64::try_from(n).map_err(|_| Failure::Cap(format!("count {n} exceeds 64 bits")))
}

fn verdict_code(certain: bool) -> i32 {
    if certain {
        EXIT_OK
    } else {
        EXIT_NOT_CERTAIN
    }
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> io::Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)
}
