//! Text formats for hypernetworks.
//!
//! * hyperedge list: one hyperedge per line as whitespace-separated
//!   non-negative integer node ids; `#` starts a comment.
//! * contact timestamps: `timestamp node node …` per line, one contact group
//!   per line. Groups are ordered by timestamp (stable), so hyperedge 0 is the
//!   earliest contact.
//!
//! Original ids are densified in ascending order; the returned map sends a
//! dense id back to its original.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, NodeId};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    HyperedgeList,
    ContactTimestamps,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hyperedge-list" => Ok(Format::HyperedgeList),
            "contact-timestamps" => Ok(Format::ContactTimestamps),
            other => Err(Error::InvalidConfig(format!("unknown format {other:?}"))),
        }
    }
}

/// A parsed dataset: the hypernetwork and `id_map[dense] = original`.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub graph: Hypergraph,
    pub id_map: Vec<u64>,
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn parse_ids<'a>(tokens: impl Iterator<Item = &'a str>, line: usize) -> Result<Vec<u64>> {
    tokens
        .map(|t| {
            t.parse::<u64>().map_err(|_| Error::Parse {
                line,
                msg: format!("invalid node id {t:?}"),
            })
        })
        .collect()
}

fn densify(groups: Vec<Vec<u64>>) -> Result<Loaded> {
    if groups.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let ids: BTreeSet<u64> = groups.iter().flatten().copied().collect();
    let id_map: Vec<u64> = ids.into_iter().collect();
    let edges = groups
        .into_iter()
        .map(|g| {
            g.into_iter()
                .map(|v| id_map.binary_search(&v).expect("collected"))
                .collect()
        })
        .collect();
    Ok(Loaded {
        graph: Hypergraph::new(id_map.len(), edges)?,
        id_map,
    })
}

pub fn parse_hyperedge_list(text: &str) -> Result<Loaded> {
    let mut groups = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        groups.push(parse_ids(line.split_whitespace(), i + 1)?);
    }
    densify(groups)
}

pub fn parse_contacts(text: &str) -> Result<Loaded> {
    let mut stamped = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let ts = tokens.next().expect("non-empty line");
        let ts: f64 = ts
            .parse()
            .ok()
            .filter(|t: &f64| t.is_finite())
            .ok_or_else(|| Error::Parse {
                line: i + 1,
                msg: format!("invalid timestamp {ts:?}"),
            })?;
        let members = parse_ids(tokens, i + 1)?;
        if members.is_empty() {
            return Err(Error::Parse {
                line: i + 1,
                msg: "contact group has no members".into(),
            });
        }
        stamped.push((ts, members));
    }
    stamped.sort_by(|a, b| a.0.total_cmp(&b.0));
    densify(stamped.into_iter().map(|(_, m)| m).collect())
}

pub fn parse(text: &str, format: Format) -> Result<Loaded> {
    match format {
        Format::HyperedgeList => parse_hyperedge_list(text),
        Format::ContactTimestamps => parse_contacts(text),
    }
}

/// Restricts to the giant component, re-densifying ids. The map is composed
/// with the existing one.
pub fn restrict_to_gcc(loaded: &Loaded) -> Result<Loaded> {
    let g = &loaded.graph;
    let labels = g.components();
    let root = labels.gcc().ok_or(Error::EmptyHypernetwork)?;
    let keep: Vec<NodeId> = g.nodes().filter(|&v| labels.label(v) == Some(root)).collect();
    let (graph, map) = g.induced(&keep)?;
    Ok(Loaded {
        graph,
        id_map: map.into_iter().map(|v| loaded.id_map[v]).collect(),
    })
}

pub fn load(path: &Path, format: Format, gcc: bool) -> Result<Loaded> {
    let loaded = parse(&std::fs::read_to_string(path)?, format)?;
    if gcc {
        restrict_to_gcc(&loaded)
    } else {
        Ok(loaded)
    }
}

/// Hyperedge-list text of the live hyperedges, in id order.
pub fn to_hyperedge_list(g: &Hypergraph) -> String {
    let mut out = String::new();
    for (_, members) in g.edges() {
        let line: Vec<String> = members.iter().map(|v| v.to_string()).collect();
        writeln!(out, "{}", line.join(" ")).expect("string write");
    }
    out
}

pub fn save(g: &Hypergraph, path: &Path) -> Result<()> {
    std::fs::write(path, to_hyperedge_list(g))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_list() {
        let l = parse_hyperedge_list("0 1 2\n2 3\n").unwrap();
        assert_eq!(l.graph.node_count(), 4);
        assert_eq!(l.graph.edge_count(), 2);
        assert_eq!(l.id_map, vec![0, 1, 2, 3]);
    }

    #[test]
    fn sparse_ids_and_comments() {
        let l = parse_hyperedge_list("# header\n10 30\n\n30 20 # trailing\n").unwrap();
        assert_eq!(l.id_map, vec![10, 20, 30]);
        assert_eq!(l.graph.edge_lists(), vec![vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        match parse_hyperedge_list("0 1\n1 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_hyperedge_list(""), Err(Error::EmptyDataset)));
        assert!(matches!(
            parse_hyperedge_list("# nothing\n\n"),
            Err(Error::EmptyDataset)
        ));
        assert!(matches!(parse_contacts("5\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_contacts("nan 1 2\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn contacts_sort_by_time() {
        let l = parse_contacts("20 3 4\n10 1 2\n10 2 3\n").unwrap();
        assert_eq!(l.graph.edge_lists(), vec![vec![0, 1], vec![1, 2], vec![2, 3]]);
        assert_eq!(l.id_map, vec![1, 2, 3, 4]);
    }

    #[test]
    fn gcc_keeps_the_component_with_more_hyperedges() {
        let l = parse_hyperedge_list("0 1 2 3 4\n5 6\n6 7\n").unwrap();
        let g = restrict_to_gcc(&l).unwrap();
        assert_eq!(g.id_map, vec![5, 6, 7]);
        assert_eq!(g.graph.edge_lists(), vec![vec![0, 1], vec![1, 2]]);
    }

    #[test]
    fn round_trip() {
        let l = parse_hyperedge_list("0 1 2\n2 3\n1 3\n").unwrap();
        let again = parse_hyperedge_list(&to_hyperedge_list(&l.graph)).unwrap();
        assert_eq!(again.graph.edge_lists(), l.graph.edge_lists());
    }
}
