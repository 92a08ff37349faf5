//! Plain-text graph and partition files.
//!
//! Graph: `n m` then `m` lines `u v`. Partition: `n k` then `C(n,2)` lines
//! `u v party`. Vertices are 1-indexed; duplicates and out-of-range values
//! are rejected.

use std::fmt::Write as _;

use super::{all_pairs, pair_count, pair_index, Edge, Graph, PartitionFunction};
use crate::error::{Error, Result};

fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, f)| !f.is_empty())
}

fn numbers<const N: usize>(line: usize, fields: &[&str]) -> Result<[usize; N]> {
    if fields.len() != N {
        return Err(Error::Parse {
            line,
            message: format!("expected {N} fields, found {}", fields.len()),
        });
    }
    let mut out = [0; N];
    for (slot, f) in out.iter_mut().zip(fields) {
        *slot = f.parse().map_err(|_| Error::Parse {
            line,
            message: format!("'{f}' is not a non-negative integer"),
        })?;
    }
    Ok(out)
}

fn at_line(line: usize) -> impl FnOnce(Error) -> Error {
    move |e| Error::Parse {
        line,
        message: e.to_string(),
    }
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut it = lines(text);
    let (line, header) = it.next().ok_or(Error::Parse {
        line: 1,
        message: "missing header".into(),
    })?;
    let [n, m] = numbers(line, &header)?;
    let mut edges = Vec::with_capacity(m);
    for (line, fields) in it.by_ref().take(m) {
        let [u, v] = numbers(line, &fields)?;
        edges.push((line, u, v));
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: text.lines().count(),
            message: format!("expected {m} edges, found {}", edges.len()),
        });
    }
    if let Some((line, _)) = it.next() {
        return Err(Error::Parse {
            line,
            message: "trailing data".into(),
        });
    }
    let mut g = Graph::empty(n);
    for (line, u, v) in edges {
        let single = Graph::new(n, [(u, v)]).map_err(at_line(line))?;
        let e = single.edges().next().expect("one edge");
        if !g.insert(e) {
            return Err(at_line(line)(Error::DuplicatePair(e.u(), e.v())));
        }
    }
    Ok(g)
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for e in g.edges() {
        let _ = writeln!(out, "{} {}", e.u(), e.v());
    }
    out
}

pub fn parse_partition(text: &str) -> Result<PartitionFunction> {
    let mut it = lines(text);
    let (line, header) = it.next().ok_or(Error::Parse {
        line: 1,
        message: "missing header".into(),
    })?;
    let [n, k] = numbers(line, &header)?;
    if k == 0 {
        return Err(at_line(line)(Error::InvalidParameter("k must be at least 1".into())));
    }
    let mut parties = vec![0usize; pair_count(n)];
    for (line, fields) in it {
        let [u, v, party] = numbers(line, &fields)?;
        Graph::new(n, [(u, v)]).map_err(at_line(line))?;
        if party == 0 || party > k {
            return Err(at_line(line)(Error::PartyOutOfRange { party, k }));
        }
        let e = Edge::new(u, v);
        let slot = &mut parties[pair_index(n, e)];
        if *slot != 0 {
            return Err(at_line(line)(Error::DuplicatePair(e.u(), e.v())));
        }
        *slot = party;
    }
    if let Some(e) = all_pairs(n).find(|&e| parties[pair_index(n, e)] == 0) {
        return Err(Error::MissingPair(e.u(), e.v()));
    }
    PartitionFunction::new(n, k, parties)
}

pub fn write_partition(z: &PartitionFunction) -> String {
    let mut out = format!("{} {}\n", z.n(), z.k());
    for (e, p) in all_pairs(z.n()).zip(z.parties()) {
        let _ = writeln!(out, "{} {} {}", e.u(), e.v(), p);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coins::Seed;
    use crate::graph::{sample_gnp, sample_partition};
    use proptest::prelude::*;

    #[test]
    fn parses_graph() {
        let g = parse_graph("3 2\n1 2\n3 2\n").unwrap();
        assert_eq!(g, Graph::path(3));
    }

    #[test]
    fn rejects_bad_graph_files() {
        assert!(matches!(parse_graph("3 2\n1 2\n2 1\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_graph("3 1\n1 4\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("3 2\n1 2\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_graph("3 1\n1 2\n2 3\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_graph("3 x\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn rejects_bad_partition_files() {
        assert!(matches!(parse_partition("2 2\n1 2 3\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_partition("2 2\n1 2 1\n2 1 2\n"), Err(Error::Parse { line: 3, .. })));
        assert_eq!(parse_partition("3 2\n1 2 1\n1 3 1\n"), Err(Error::MissingPair(2, 3)));
    }

    proptest! {
        #[test]
        fn files_round_trip(seed in any::<u64>(), n in 1usize..12, k in 1usize..6) {
            let g = sample_gnp(n, 0.5, &Seed::new(seed, "io"));
            prop_assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
            let z = sample_partition(n, k, &Seed::new(seed, "io")).unwrap();
            prop_assert_eq!(parse_partition(&write_partition(&z)).unwrap(), z);
        }
    }
}
