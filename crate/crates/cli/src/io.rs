//! Edge-list graph files and value-model specifications.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use csg::{EdgeSum, ExplicitTable, SynergyGraph, ValueModel};

/// `<n>` on the first line, then one `<u> <v>` line per edge with `u < v`,
/// ascending.
pub fn write_graph(g: &SynergyGraph) -> String {
    let mut out = format!("{}\n", g.n());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Inverse of [`write_graph`]. Blank lines and `#` comments are ignored;
/// edge order and orientation are normalized.
pub fn parse_graph(text: &str) -> Result<SynergyGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (_, header) = lines.next().context("graph file is empty")?;
    let n: usize = header.parse().with_context(|| format!("bad agent count {header:?}"))?;
    let mut edges = Vec::new();
    for (lineno, line) in lines {
        let mut it = line.split_whitespace();
        let (Some(u), Some(v), None) = (it.next(), it.next(), it.next()) else {
            bail!("line {lineno}: expected \"<u> <v>\", got {line:?}");
        };
        let parse = |s: &str| {
            s.parse::<usize>()
                .with_context(|| format!("line {lineno}: bad agent {s:?}"))
        };
        edges.push((parse(u)?, parse(v)?));
    }
    Ok(SynergyGraph::new(n, edges)?)
}

pub fn read_graph(path: &Path) -> Result<SynergyGraph> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read graph file {}", path.display()))?;
    parse_graph(&text).with_context(|| format!("in graph file {}", path.display()))
}

/// `seed:<s>` | `edgesum:<path>` | `table:<path>`
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValuesSpec {
    Seed(u64),
    EdgeSum(PathBuf),
    Table(PathBuf),
}

impl FromStr for ValuesSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            Some(("seed", x)) => Ok(ValuesSpec::Seed(x.parse().with_context(|| format!("bad seed {x:?}"))?)),
            Some(("edgesum", p)) if !p.is_empty() => Ok(ValuesSpec::EdgeSum(p.into())),
            Some(("table", p)) if !p.is_empty() => Ok(ValuesSpec::Table(p.into())),
            _ => bail!("values must be seed:<s>, edgesum:<path> or table:<path>, got {s:?}"),
        }
    }
}

impl fmt::Display for ValuesSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValuesSpec::Seed(s) => write!(f, "seed:{s}"),
            ValuesSpec::EdgeSum(p) => write!(f, "edgesum:{}", p.display()),
            ValuesSpec::Table(p) => write!(f, "table:{}", p.display()),
        }
    }
}

impl ValuesSpec {
    pub fn load(&self) -> Result<ValueModel> {
        let read =
            |p: &PathBuf| fs::read_to_string(p).with_context(|| format!("cannot read value file {}", p.display()));
        Ok(match self {
            ValuesSpec::Seed(s) => ValueModel::seeded(*s),
            ValuesSpec::EdgeSum(p) => ValueModel::EdgeSum(EdgeSum::parse(&read(p)?)?),
            ValuesSpec::Table(p) => ValueModel::Table(ExplicitTable::parse(&read(p)?)?),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_file_format() {
        assert_eq!(write_graph(&SynergyGraph::path(3)), "3\n0 1\n1 2\n");
        assert_eq!(write_graph(&SynergyGraph::complete(3)).lines().count(), 4);
    }

    #[test]
    fn parse_normalizes() {
        let g = parse_graph("# triangle\n3\n2 1\n\n0 1\n0 2\n").unwrap();
        assert_eq!(g, SynergyGraph::complete(3));
        assert!(parse_graph("").is_err());
        assert!(parse_graph("3\n0 1 2\n").is_err());
        assert!(parse_graph("3\n0 3\n").is_err());
        assert!(parse_graph("x\n").is_err());
    }

    #[test]
    fn values_spec() {
        assert_eq!("seed:42".parse::<ValuesSpec>().unwrap(), ValuesSpec::Seed(42));
        assert_eq!(
            "table:a.txt".parse::<ValuesSpec>().unwrap(),
            ValuesSpec::Table("a.txt".into())
        );
        for bad in ["seed:x", "table:", "foo:1", "42"] {
            assert!(bad.parse::<ValuesSpec>().is_err(), "{bad}");
        }
        for s in ["seed:7", "edgesum:w.txt", "table:t.txt"] {
            assert_eq!(s.parse::<ValuesSpec>().unwrap().to_string(), s);
        }
    }
}
