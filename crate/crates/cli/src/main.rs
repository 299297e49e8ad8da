use std::collections::BTreeMap;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use racg::embed::{phi_c, psi, FinLabel};
use racg::geometry::{ball, crossing_walls, geodesic, median};
use racg::harness::{run_suite, Suite, TestGroup};
use racg::params::DEFAULT_LOCAL_RADIUS;
use racg::{CommutationGraph, GroupElement, Reflection, SeparationParams};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Parser)]
#[command(name = "racg", version, about = "Right-angled Coxeter groups and their tree embeddings")]
struct Cli {
    /// Group definition file, `builtin:<name>`, or a bare builtin name.
    #[arg(long, global = true, default_value = "builtin:hexagon")]
    group: String,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normal form of a word.
    Reduce { word: Vec<String> },
    /// Elements of a ball around the identity, by length then normal form.
    Ball {
        #[arg(long)]
        radius: usize,
    },
    /// A geodesic between two elements.
    Geodesic { from: String, to: String },
    /// Median of three elements.
    Median { a: String, b: String, c: String },
    /// Walls crossed by a geodesic between two elements.
    Walls { from: String, to: String },
    /// The colouring used for the embeddings.
    Color,
    /// μ on every element of a ball.
    EmbedMu {
        #[arg(long)]
        radius: usize,
    },
    /// ψ on every element of a ball.
    EmbedPsi {
        #[arg(long)]
        radius: usize,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// The sub-tree of the colour tree reached by `φ_c` on a ball, as DOT.
    ExportTree {
        #[arg(long)]
        colour: usize,
        #[arg(long)]
        radius: usize,
    },
    /// Runs a verification suite; exits with status 1 on any failure.
    Verify {
        suite: String,
        /// Defaults to the suite's own radius.
        #[arg(long)]
        radius: Option<usize>,
        #[command(flatten)]
        params: ParamArgs,
        /// Reports a wall clock of zero so that reports are byte-identical across runs.
        #[arg(long)]
        no_timing: bool,
    },
}

#[derive(Args)]
struct ParamArgs {
    /// Local-isometry radius.
    #[arg(long, default_value_t = DEFAULT_LOCAL_RADIUS)]
    r_local: u32,
    /// Factor `a` in `ν(i) = max(a·i, b)`; defaults to `4n`.
    #[arg(long)]
    per_level: Option<u64>,
    /// Floor `b` in `ν(i) = max(a·i, b)`; defaults to `2·r_local + 2`.
    #[arg(long)]
    floor: Option<u64>,
}

impl ParamArgs {
    fn resolve(&self, n: usize) -> Result<SeparationParams> {
        let default = SeparationParams::new(n, self.r_local);
        let params = SeparationParams::with_constants(
            n,
            self.r_local,
            self.per_level.unwrap_or(default.per_level),
            self.floor.unwrap_or(default.floor),
        )?;
        Ok(params)
    }
}

fn load_group(source: &str) -> Result<TestGroup> {
    let source = if source.starts_with("builtin:") || Path::new(source).exists() {
        source.to_string()
    } else {
        format!("builtin:{source}")
    };
    let mut group = TestGroup::load(&source)?;
    if let Some(name) = source.strip_prefix("builtin:") {
        group.name = name.to_string();
    }
    Ok(group)
}

/// Parses a word; `1` denotes the identity unless it names a generator.
fn parse(g: &CommutationGraph, text: &str) -> Result<GroupElement> {
    if text.trim() == "1" && g.generator("1").is_err() {
        return Ok(g.identity());
    }
    g.parse_element(text).with_context(|| format!("cannot parse `{text}`"))
}

fn show(g: &CommutationGraph, a: &GroupElement) -> String {
    g.display(a).to_string()
}

fn reflection_record(g: &CommutationGraph, r: &Reflection) -> Value {
    json!({
        "reflection": g.format(r.element()),
        "generator": g.name(r.generator()),
        "colour": r.colour(),
        "level": r.level(),
    })
}

/// First 16 hex digits of the SHA-256 of the residue's canonical text.
fn residue_digest(label: &FinLabel) -> String {
    let hash = Sha256::digest(label.residue().canonical_string().as_bytes());
    hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

fn render_sequence(labels: &[String]) -> String {
    if labels.is_empty() {
        "∅".to_string()
    } else {
        format!("({})", labels.join(", "))
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let group = load_group(&cli.group)?;
    let g = &group.graph;
    let col = &group.coloring;
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());

    match cli.command {
        Command::Reduce { word } => {
            let text = word.join(" ");
            let a = parse(g, &text)?;
            if cli.json {
                writeln!(out, "{}", json!({ "input": text, "normal_form": g.format(&a), "length": a.len() }))?;
            } else {
                writeln!(out, "{}", show(g, &a))?;
            }
        }
        Command::Ball { radius } => {
            let b = ball(g, radius)?;
            for a in b.elements() {
                if cli.json {
                    writeln!(out, "{}", json!({ "element": g.format(a), "length": a.len() }))?;
                } else {
                    writeln!(out, "{}", show(g, a))?;
                }
            }
        }
        Command::Geodesic { from, to } => {
            let (a, b) = (parse(g, &from)?, parse(g, &to)?);
            let path = geodesic(g, &a, &b);
            if cli.json {
                let words: Vec<String> = path.iter().map(|x| g.format(x)).collect();
                writeln!(out, "{}", json!({ "from": g.format(&a), "to": g.format(&b), "path": words }))?;
            } else {
                for x in &path {
                    writeln!(out, "{}", show(g, x))?;
                }
            }
        }
        Command::Median { a, b, c } => {
            let (x, y, z) = (parse(g, &a)?, parse(g, &b)?, parse(g, &c)?);
            let m = median(g, &x, &y, &z);
            if cli.json {
                let inputs = [g.format(&x), g.format(&y), g.format(&z)];
                writeln!(out, "{}", json!({ "inputs": inputs, "median": g.format(&m) }))?;
            } else {
                writeln!(out, "{}", show(g, &m))?;
            }
        }
        Command::Walls { from, to } => {
            let (a, b) = (parse(g, &from)?, parse(g, &to)?);
            for r in crossing_walls(g, &a, &b, col) {
                if cli.json {
                    writeln!(out, "{}", reflection_record(g, &r))?;
                } else {
                    writeln!(
                        out,
                        "{}\tgenerator {}\tcolour {}\tlevel {}",
                        show(g, r.element()),
                        g.name(r.generator()),
                        r.colour(),
                        r.level()
                    )?;
                }
            }
        }
        Command::Color => {
            if cli.json {
                let ordered: Vec<Value> = g.generators().map(|s| json!([g.name(s), col.colour(s)])).collect();
                writeln!(out, "{}", json!({ "colours": col.n(), "assignment": ordered }))?;
            } else {
                writeln!(out, "colours: {}", col.n())?;
                for s in g.generators() {
                    writeln!(out, "{} {}", g.name(s), col.colour(s))?;
                }
            }
        }
        Command::EmbedMu { radius } => {
            let b = ball(g, radius)?;
            for a in b.elements() {
                let coords: Vec<Vec<String>> = col
                    .colours()
                    .map(|c| Ok(phi_c(g, a, col, c)?.labels().iter().map(|r| g.format(r.element())).collect()))
                    .collect::<Result<_>>()?;
                if cli.json {
                    writeln!(out, "{}", json!({ "element": g.format(a), "mu": coords }))?;
                } else {
                    let parts: Vec<String> = coords.iter().map(|c| render_sequence(c)).collect();
                    writeln!(out, "{}\t{}", show(g, a), parts.join("\t"))?;
                }
            }
        }
        Command::EmbedPsi { radius, params } => {
            let params = params.resolve(col.n())?;
            let b = ball(g, radius)?;
            for a in b.elements() {
                let p = psi(g, a, col, &params);
                if cli.json {
                    let coords: Vec<Vec<Value>> = p
                        .coordinates()
                        .iter()
                        .map(|v| {
                            v.labels()
                                .iter()
                                .map(|l| json!({ "generator": g.name(l.generator()), "residue": residue_digest(l) }))
                                .collect()
                        })
                        .collect();
                    writeln!(out, "{}", json!({ "element": g.format(a), "psi": coords }))?;
                } else {
                    let parts: Vec<String> = p
                        .coordinates()
                        .iter()
                        .map(|v| {
                            let labels: Vec<String> = v
                                .labels()
                                .iter()
                                .map(|l| format!("{}:{}", g.name(l.generator()), residue_digest(l)))
                                .collect();
                            render_sequence(&labels)
                        })
                        .collect();
                    writeln!(out, "{}\t{}", show(g, a), parts.join("\t"))?;
                }
            }
        }
        Command::ExportTree { colour, radius } => {
            let b = ball(g, radius)?;
            // Every prefix of a visited vertex is visited.
            let mut vertices: BTreeMap<Vec<String>, usize> = BTreeMap::new();
            let mut edges = Vec::new();
            vertices.insert(Vec::new(), 0);
            for a in b.elements() {
                let phi = phi_c(g, a, col, colour)?;
                let labels: Vec<String> = phi.labels().iter().map(|r| g.format(r.element())).collect();
                for depth in 1..=labels.len() {
                    let key = labels[..depth].to_vec();
                    if !vertices.contains_key(&key) {
                        let id = vertices.len();
                        vertices.insert(key, id);
                        edges.push((vertices[&labels[..depth - 1]], id));
                    }
                }
            }
            writeln!(out, "digraph T{colour} {{")?;
            let mut nodes: Vec<(&usize, &Vec<String>)> = vertices.iter().map(|(k, v)| (v, k)).collect();
            nodes.sort();
            for (id, labels) in nodes {
                writeln!(out, "  n{id} [label=\"{}\"];", dot_escape(&render_sequence(labels)))?;
            }
            for (from, to) in edges {
                writeln!(out, "  n{from} -> n{to};")?;
            }
            writeln!(out, "}}")?;
        }
        Command::Verify { suite, radius, params, no_timing } => {
            let suite: Suite = suite.parse()?;
            let params = params.resolve(col.n())?;
            let radius = radius.unwrap_or_else(|| suite.default_radius(&group.name));
            let mut report = run_suite(suite, &group, radius, &params, cli.seed)?;
            if no_timing {
                report.wall_clock = Duration::ZERO;
            }
            if cli.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            } else {
                writeln!(
                    out,
                    "{} on {} (radius {}, seed {}): {} checks, {} failures, {:.3}s",
                    report.suite,
                    report.group,
                    report.radius,
                    report.seed,
                    report.checks_run,
                    report.total_failures(),
                    report.wall_clock.as_secs_f64()
                )?;
                for (k, v) in &report.stats {
                    writeln!(out, "  {k}: {v}")?;
                }
                for f in &report.failures {
                    writeln!(out, "  FAIL {}", serde_json::to_string(f)?)?;
                }
            }
            out.flush()?;
            if !report.passed() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}
