use std::io::Read;

use super::{Instance, InstanceBuilder};
use crate::{Error, Result};

/// Reads the edge-list format: one `<from> <to>` pair per line, `#` starts a
/// comment, blank lines are skipped and duplicate edges collapse.
pub fn load_instance<R: Read>(mut source: R) -> Result<Instance> {
    let mut bytes = Vec::new();
    source.read_to_end(&mut bytes)?;
    let text = String::from_utf8(bytes)?;

    let mut builder = InstanceBuilder::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let mut tokens = line.split_whitespace();
        let Some(from) = tokens.next() else {
            continue;
        };
        let malformed = |message: &str| Error::MalformedLine {
            line: idx + 1,
            message: message.to_string(),
        };
        let to = tokens
            .next()
            .ok_or_else(|| malformed("missing target label"))?;
        if tokens.next().is_some() {
            return Err(malformed("expected exactly two labels"));
        }
        builder.edge(from, to);
    }
    Ok(builder.build())
}

/// Writes edges sorted by source label, then target label.
pub fn to_edge_list(i: &Instance) -> String {
    let mut rows: Vec<(&str, &str)> = i
        .edges()
        .iter()
        .map(|&(u, v)| (i.label(u), i.label(v)))
        .collect();
    rows.sort_unstable();
    let mut out = String::new();
    for (u, v) in rows {
        out.push_str(u);
        out.push(' ');
        out.push_str(v);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_cycle() {
        let i = load_instance("a b\nb a\n".as_bytes()).unwrap();
        assert_eq!(i.node_count(), 2);
        assert_eq!(i.edge_count(), 2);
    }

    #[test]
    fn duplicates_collapse() {
        let i = load_instance("a b\na b\n".as_bytes()).unwrap();
        assert_eq!(i.edge_count(), 1);
    }

    #[test]
    fn missing_target() {
        match load_instance("a\n".as_bytes()) {
            Err(Error::MalformedLine { line, .. }) => assert_eq!(line, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn extra_token_reports_line() {
        match load_instance("a b\n\n# c\na b c\n".as_bytes()) {
            Err(Error::MalformedLine { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn comments_blanks_and_empty_input() {
        let i = load_instance("# header\n\n  x   y  # trailing\n".as_bytes()).unwrap();
        assert_eq!(i.edge_count(), 1);
        assert_eq!(i.label(crate::graph::NodeId(0)), "x");
        assert_eq!(load_instance("".as_bytes()).unwrap(), Instance::empty());
    }

    #[test]
    fn invalid_utf8() {
        assert!(matches!(
            load_instance(&[0x61, 0x20, 0xff, 0x0a][..]),
            Err(Error::Utf8(_))
        ));
    }

    #[test]
    fn emit_sorted_by_label() {
        let i = load_instance("z a\nb c\nb a\n".as_bytes()).unwrap();
        assert_eq!(to_edge_list(&i), "b a\nb c\nz a\n");
        let again = load_instance(to_edge_list(&i).as_bytes()).unwrap();
        assert_eq!(to_edge_list(&again), to_edge_list(&i));
    }
}
