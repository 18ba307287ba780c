//! Library side of the `csg` command: file formats, the result document,
//! the benchmark grid and the verification suite.

pub mod bench;
pub mod io;
pub mod report;
pub mod verify;

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use csg::{build_hcs, default_root, generate, solve, Algorithm, GraphSpec, Pseudotree, SolveOptions};

use crate::io::ValuesSpec;
use crate::report::ResultDocument;

fn write_out(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

/// Generates a graph and returns its edge-list text, writing it to `out`
/// when given.
pub fn cmd_gen(spec: &GraphSpec, out: Option<&Path>) -> Result<String> {
    let text = io::write_graph(&generate(spec)?);
    if let Some(p) = out {
        write_out(p, &text)?;
    }
    Ok(text)
}

pub fn cmd_solve(
    graph: &Path,
    values: &ValuesSpec,
    alg: Algorithm,
    root: Option<usize>,
    timeout: Option<std::time::Duration>,
    out: Option<&Path>,
) -> Result<ResultDocument> {
    let g = io::read_graph(graph)?;
    let model = values.load()?;
    if let Some(r) = root {
        if alg != Algorithm::Dype {
            bail!("--root only applies to dype");
        }
        if r >= g.n() {
            bail!("root {r} is not an agent of this {}-agent graph", g.n());
        }
    }
    let opts = timeout.map_or_else(SolveOptions::default, SolveOptions::with_timeout);
    let result = solve(alg, &g, &model, root, &opts).with_context(|| format!("{alg} failed on {}", graph.display()))?;
    let doc = ResultDocument::new(
        graph.display().to_string(),
        g.edge_count(),
        values.to_string(),
        model.to_string(),
        &result,
    );
    if let Some(p) = out {
        write_out(p, &doc.to_json())?;
    }
    Ok(doc)
}

/// DOT text of the coalition-structure graph; the pseudotree is rooted at
/// `root` or at the default root.
pub fn cmd_hcs(graph: &Path, root: Option<usize>, out: Option<&Path>) -> Result<String> {
    let g = io::read_graph(graph)?;
    if !g.is_connected() {
        bail!("the HCS graph export needs a connected synergy graph");
    }
    let pt = Pseudotree::build(&g, root.unwrap_or_else(|| default_root(&g)))?;
    let dot = build_hcs(&g, &pt)?.to_dot();
    if let Some(p) = out {
        write_out(p, &dot)?;
    }
    Ok(dot)
}

/// Runs the grid and writes the raw CSV to `out` and the medians beside it.
pub fn cmd_bench(cfg: &bench::BenchConfig, out: &Path) -> Result<Vec<bench::BenchRow>> {
    let rows = bench::run(cfg)?;
    let file = fs::File::create(out).with_context(|| format!("cannot create {}", out.display()))?;
    bench::write_csv(file, &rows)?;
    let mpath = bench::medians_path(out);
    let file = fs::File::create(&mpath).with_context(|| format!("cannot create {}", mpath.display()))?;
    bench::write_medians_csv(file, &bench::medians(&rows))?;
    Ok(rows)
}

pub fn cmd_verify(cfg: &verify::VerifyConfig) -> Result<verify::VerifyReport> {
    if cfg.n_max > verify::MAX_VERIFY_AGENTS || cfg.n_max < 3 {
        bail!("verify needs 3 <= n_max <= {}", verify::MAX_VERIFY_AGENTS);
    }
    Ok(verify::run(cfg))
}
