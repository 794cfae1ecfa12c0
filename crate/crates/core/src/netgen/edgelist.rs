//! Plain-text edge lists: one `i j` pair per line (zero-based, `i < j` when
//! written), `#` comments, and an optional `# nodes N` header that fixes the
//! node count (otherwise it is `max index + 1`).

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

use super::Network;

pub fn save_edgelist<W: Write>(net: &Network, mut sink: W) -> Result<()> {
    writeln!(sink, "# nodes {}", net.node_count())?;
    for (i, j) in net.edges() {
        writeln!(sink, "{i} {j}")?;
    }
    sink.flush()?;
    Ok(())
}

pub fn write_edgelist_file(net: &Network, path: impl AsRef<Path>) -> Result<()> {
    save_edgelist(net, BufWriter::new(File::create(path)?))
}

pub fn read_edgelist_file(path: impl AsRef<Path>) -> Result<Network> {
    load_edgelist(BufReader::new(File::open(path)?))
}

/// Parses an edge list. Edges may be listed once (either orientation) or in
/// both orientations throughout; a mix of the two is rejected as asymmetric.
pub fn load_edgelist<R: BufRead>(source: R) -> Result<Network> {
    let mut declared_nodes: Option<usize> = None;
    // directed pair -> line it first appeared on
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    let mut pairs: Vec<(usize, usize, usize)> = Vec::new();

    for (idx, line) in source.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        if let Some(comment) = text.strip_prefix('#') {
            let mut words = comment.split_whitespace();
            if words.next() == Some("nodes") {
                let n = words
                    .next()
                    .and_then(|w| w.parse::<usize>().ok())
                    .ok_or_else(|| Error::format(lineno, "malformed `# nodes` header"))?;
                declared_nodes = Some(n);
            }
            continue;
        }
        let mut fields = text.split_whitespace();
        let parse = |tok: Option<&str>| -> Result<usize> {
            tok.ok_or_else(|| Error::format(lineno, "expected two node indices"))?
                .parse::<usize>()
                .map_err(|_| Error::format(lineno, format!("malformed line `{text}`")))
        };
        let a = parse(fields.next())?;
        let b = parse(fields.next())?;
        if fields.next().is_some() {
            return Err(Error::format(
                lineno,
                format!("trailing fields in `{text}`"),
            ));
        }
        if a == b {
            return Err(Error::format(lineno, format!("self-loop at node {a}")));
        }
        if let Some(n) = declared_nodes {
            if a >= n || b >= n {
                return Err(Error::format(
                    lineno,
                    format!("index out of range for {n} nodes"),
                ));
            }
        }
        if let Some(first) = seen.insert((a, b), lineno) {
            return Err(Error::format(
                lineno,
                format!("duplicate edge ({a}, {b}), first on line {first}"),
            ));
        }
        pairs.push((a, b, lineno));
    }

    let mirrored = pairs
        .iter()
        .filter(|&&(a, b, _)| seen.contains_key(&(b, a)))
        .count();
    let symmetric_listing = mirrored == pairs.len() && !pairs.is_empty();
    if mirrored > 0 && !symmetric_listing {
        let &(a, b, lineno) = pairs
            .iter()
            .find(|&&(a, b, _)| !seen.contains_key(&(b, a)))
            .expect("some pair lacks a mirror");
        return Err(Error::format(
            lineno,
            format!("asymmetric input: ({a}, {b}) has no reverse entry"),
        ));
    }

    let max_index = pairs.iter().map(|&(a, b, _)| a.max(b)).max();
    let node_count = match (declared_nodes, max_index) {
        (Some(n), _) => n,
        (None, Some(m)) => m + 1,
        (None, None) => return Err(Error::format(0, "empty edge list")),
    };

    let mut unique = HashSet::new();
    let edges: Vec<(usize, usize)> = pairs
        .iter()
        .map(|&(a, b, _)| (a.min(b), a.max(b)))
        .filter(|e| unique.insert(*e))
        .collect();
    Network::from_edges(node_count, &edges).map_err(|e| Error::format(0, e.to_string()))
}
