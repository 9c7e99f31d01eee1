//! Command-line front end.
//!
//! Every command prints one envelope `{command, config, result, paper_refs}`.
//! Output contains no timestamps, so identical arguments give identical bytes.
//! Exit codes: 0 claims hold, 1 claims violated, 2 invalid input, 3 search
//! budget exceeded.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exactalg::MERSENNE_61;
use crate::genericity::{
    generic_length_experiment, is_locally_linearly_independent, random_distinct_words,
    rosenthal_check, Verdict,
};
use crate::graphs::{
    build_graph, derive_walks_from_certificate, enumerate_partitions, verify_partition,
};
use crate::witness::{certify_witness, printed_constants};
use crate::words::{build_word_grid, ceil_log};

pub const DEFAULT_BUDGET: u64 = 10_000_000;
const ENUMERATION_CAP: u64 = 1_000_000;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug, Clone)]
#[command(
    name = "sweepwords",
    version,
    about = "Sweeping words in matrix algebras"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Dump the n x n word grid.
    Words(Common),
    /// Certify local linear independence of the grid words over F_p.
    Certify {
        #[command(flatten)]
        common: Common,
        /// Replace the last word by a copy of the first.
        #[arg(long)]
        duplicate_word: bool,
        /// Use n² distinct random words of this degree instead of the grid.
        #[arg(long)]
        sample_degree: Option<usize>,
    },
    /// Build the multigraph G_d and optionally count its walk partitions.
    Graph {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        enumerate: bool,
        #[arg(long, default_value_t = 1)]
        m_scale: u64,
    },
    /// Generating-length experiment on random tuples.
    Length {
        #[command(flatten)]
        common: Common,
        /// Sweep n from --n up to this value.
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        symmetric: bool,
        #[arg(long)]
        include_identity: bool,
    },
    /// Build and verify the deterministic integer witness.
    Witness {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        base: u64,
        /// Use --base even below the default minimum.
        #[arg(long)]
        force_base: bool,
        #[arg(long, default_value_t = 3)]
        max_escalations: usize,
        /// Also report the printed exponent constants.
        #[arg(long)]
        paper_constants: bool,
    },
    /// Check that all degree-2d words span M_n with only g_bar nonzero matrices.
    Rosenthal(Common),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub g: usize,
    /// Override the derived d = ceil(log_g n).
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, default_value_t = MERSENNE_61)]
    pub prime: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 3)]
    pub trials: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Node budget for partition search.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
    /// Graphviz, graph command only.
    Dot,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub n: Option<usize>,
    pub g: usize,
    pub d: Option<usize>,
    pub d_overridden: bool,
    pub prime: u64,
    pub seed: u64,
    pub trials: usize,
    pub format: Format,
    pub budget: u64,
    pub out: Option<String>,
    #[serde(skip_serializing_if = "serde_json::Map::is_empty")]
    pub options: serde_json::Map<String, Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Envelope {
    pub command: &'static str,
    pub config: RunConfig,
    pub result: Value,
    pub paper_refs: Vec<&'static str>,
}

/// What a command produced: the rendered output and its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    envelope: Envelope,
    csv: String,
    text: String,
    dot: Option<String>,
    code: i32,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        _ => EXIT_INVALID,
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => Outcome {
            code: if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            },
            stdout: if e.use_stderr() {
                String::new()
            } else {
                e.to_string()
            },
            stderr: if e.use_stderr() {
                e.to_string()
            } else {
                String::new()
            },
        },
    }
}

/// Runs a parsed command. With `--out` the output goes to that file and
/// stdout stays empty.
pub fn run(cli: &Cli) -> Outcome {
    let common = common_of(&cli.command);
    let report = match dispatch(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            return Outcome {
                code: exit_code(&e),
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
            }
        }
    };
    let body = match common.format {
        Format::Json => {
            let mut s =
                serde_json::to_string_pretty(&report.envelope).expect("envelope serializes");
            s.push('\n');
            s
        }
        Format::Csv => report.csv,
        Format::Text => report.text,
        Format::Dot => match report.dot {
            Some(d) => d,
            None => {
                return Outcome {
                    code: EXIT_INVALID,
                    stdout: String::new(),
                    stderr: "error: --format dot is only available for the graph command\n".into(),
                }
            }
        },
    };
    match &common.out {
        Some(path) => match std::fs::write(path, body.as_bytes()) {
            Ok(()) => Outcome {
                code: report.code,
                stdout: String::new(),
                stderr: String::new(),
            },
            Err(e) => Outcome {
                code: EXIT_INVALID,
                stdout: String::new(),
                stderr: format!("error: cannot write {}: {e}\n", path.display()),
            },
        },
        None => Outcome {
            code: report.code,
            stdout: body,
            stderr: String::new(),
        },
    }
}

fn common_of(c: &Command) -> &Common {
    match c {
        Command::Words(common) | Command::Rosenthal(common) => common,
        Command::Certify { common, .. }
        | Command::Graph { common, .. }
        | Command::Length { common, .. }
        | Command::Witness { common, .. } => common,
    }
}

fn dispatch(c: &Command) -> Result<Report> {
    match c {
        Command::Words(common) => cmd_words(common),
        Command::Certify {
            common,
            duplicate_word,
            sample_degree,
        } => cmd_certify(common, *duplicate_word, *sample_degree),
        Command::Graph {
            common,
            enumerate,
            m_scale,
        } => cmd_graph(common, *enumerate, *m_scale),
        Command::Length {
            common,
            n_max,
            symmetric,
            include_identity,
        } => cmd_length(common, *n_max, *symmetric, *include_identity),
        Command::Witness {
            common,
            base,
            force_base,
            max_escalations,
            paper_constants,
        } => cmd_witness(
            common,
            *base,
            *force_base,
            *max_escalations,
            *paper_constants,
        ),
        Command::Rosenthal(common) => cmd_rosenthal(common),
    }
}

fn config(command: &'static str, c: &Common, d: Option<usize>, options: Value) -> RunConfig {
    let options = match options {
        Value::Object(m) => m,
        _ => serde_json::Map::new(),
    };
    RunConfig {
        command,
        n: c.n,
        g: c.g,
        d,
        d_overridden: c.d.is_some(),
        prime: c.prime,
        seed: c.seed,
        trials: c.trials,
        format: c.format,
        budget: c.budget,
        out: c.out.as_ref().map(|p| p.display().to_string()),
        options,
    }
}

fn require_n(c: &Common) -> Result<usize> {
    c.n.ok_or_else(|| Error::InvalidInput("--n is required".into()))
}

/// d for commands where it is fixed by n and g; an override must agree.
fn fixed_d(c: &Common, n: usize) -> Result<usize> {
    if c.g < 2 {
        return Err(Error::InvalidInput(format!(
            "g must be at least 2, got {}",
            c.g
        )));
    }
    let derived = ceil_log(c.g, n);
    match c.d {
        Some(d) if d != derived => Err(Error::InvalidInput(format!(
            "this command uses d = ceil(log_g n) = {derived}; --d {d} is not supported here"
        ))),
        _ => Ok(derived),
    }
}

fn sha256_hex(s: &str) -> String {
    hex::encode(Sha256::digest(s.as_bytes()))
}

fn cmd_words(c: &Common) -> Result<Report> {
    let n = require_n(c)?;
    let d = fixed_d(c, n)?;
    let grid = build_word_grid(n, c.g)?;
    let record = grid.to_record();
    let mut csv = String::from("row,col,word\n");
    let mut text = format!("word grid n={n} g={} d={d}\n", c.g);
    for (i, row) in grid.rows().iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|w| w.to_string()).collect();
        for (j, w) in cells.iter().enumerate() {
            let _ = writeln!(csv, "{},{},{w}", i + 1, j + 1);
        }
        let _ = writeln!(text, "{}", cells.join(" "));
    }
    Ok(Report {
        envelope: Envelope {
            command: "words",
            config: config("words", c, Some(d), json!({})),
            result: to_json(record),
            paper_refs: vec!["locally linearly independent words of degree 2d"],
        },
        csv,
        text,
        dot: None,
        code: EXIT_OK,
    })
}

fn cmd_certify(c: &Common, duplicate_word: bool, sample_degree: Option<usize>) -> Result<Report> {
    let n = require_n(c)?;
    let d = fixed_d(c, n)?;
    let mut words = match sample_degree {
        Some(deg) => random_distinct_words(c.g, deg, n * n, c.seed)?,
        None => build_word_grid(n, c.g)?.flatten(),
    };
    if duplicate_word && words.len() > 1 {
        let last = words.len() - 1;
        words[last] = words[0].clone();
    }
    let report = is_locally_linearly_independent(&words, n, c.g, c.prime, c.trials, c.seed)?;
    let code = match report.verdict {
        Verdict::Certified => EXIT_OK,
        Verdict::Inconclusive => EXIT_VIOLATED,
    };
    let mut csv = String::from("trial,nonzero\n");
    for (t, nz) in report.trial_nonzero.iter().enumerate() {
        let _ = writeln!(csv, "{t},{nz}");
    }
    let text = format!(
        "n={n} g={} d={d}: {}/{} nonzero trials over F_{}, {}\n",
        c.g,
        report.successes,
        report.trials,
        report.prime,
        match report.verdict {
            Verdict::Certified => "certified",
            Verdict::Inconclusive => "inconclusive",
        }
    );
    let mut refs = vec!["discriminant criterion for local linear independence"];
    if sample_degree.is_none() {
        refs.push("existence of n² locally linearly independent words of degree 2d");
    } else {
        refs.push("open question on arbitrary words of degree 2 log_2 n (sampling only)");
    }
    Ok(Report {
        envelope: Envelope {
            command: "certify",
            config: config(
                "certify",
                c,
                Some(d),
                json!({ "duplicate_word": duplicate_word, "sample_degree": sample_degree }),
            ),
            result: to_json(&report),
            paper_refs: refs,
        },
        csv,
        text,
        dot: None,
        code,
    })
}

fn cmd_graph(c: &Common, enumerate: bool, m_scale: u64) -> Result<Report> {
    if c.g < 2 {
        return Err(Error::InvalidInput(format!(
            "g must be at least 2, got {}",
            c.g
        )));
    }
    let d = match (c.d, c.n) {
        (Some(d), _) => d,
        (None, Some(n)) => ceil_log(c.g, n),
        (None, None) => return Err(Error::InvalidInput("graph needs --d or --n".into())),
    };
    if d == 0 {
        return Err(Error::InvalidInput("d must be at least 1".into()));
    }
    let graph = build_graph(c.g, d, m_scale)?;
    let certificate_partition_valid = if m_scale == 1 {
        let side = c.g.pow(d as u32);
        Some(verify_partition(
            &graph,
            &derive_walks_from_certificate(side, c.g)?,
        ))
    } else {
        None
    };
    let enumeration = if enumerate {
        Some(enumerate_partitions(&graph, ENUMERATION_CAP, c.budget)?)
    } else {
        None
    };
    let violated = certificate_partition_valid == Some(false)
        || enumeration.as_ref().is_some_and(|e| e.count != 1);
    let loops: Vec<u64> = (1..=graph.vertex_count())
        .map(|v| graph.loops_on(v))
        .collect();
    let record = graph.to_record();
    let result = json!({
        "g": c.g,
        "d": d,
        "m": m_scale,
        "vertex_count": graph.vertex_count(),
        "edge_count": graph.edge_count(),
        "expected_edge_count": m_scale * 2 * d as u64 * (c.g as u64).pow(2 * d as u32),
        "label_counts": graph.label_counts(),
        "loops": loops,
        "certificate_partition_valid": certificate_partition_valid,
        "enumeration": enumeration,
        "edges": record.edges,
    });
    let mut csv = String::from("from,to,label,mult\n");
    for e in &record.edges {
        let _ = writeln!(csv, "{},{},{},{}", e.from, e.to, e.label, e.mult);
    }
    let mut text = format!(
        "G_{d} for g={} scaled by {m_scale}: {} vertices, {} edges\n",
        c.g,
        graph.vertex_count(),
        graph.edge_count()
    );
    if let Some(v) = certificate_partition_valid {
        let _ = writeln!(text, "certificate partition valid: {v}");
    }
    if let Some(e) = &enumeration {
        let _ = writeln!(
            text,
            "partitions: {}{} ({} nodes)",
            e.count,
            if e.saturated { "+" } else { "" },
            e.expanded
        );
    }
    Ok(Report {
        envelope: Envelope {
            command: "graph",
            config: config(
                "graph",
                c,
                Some(d),
                json!({ "enumerate": enumerate, "m_scale": m_scale }),
            ),
            result,
            paper_refs: vec![
                "unique walk partition of the base multigraph",
                "unique walk partition of the recursive multigraph",
            ],
        },
        csv,
        text,
        dot: Some(graph.to_dot()),
        code: if violated { EXIT_VIOLATED } else { EXIT_OK },
    })
}

fn cmd_length(
    c: &Common,
    n_max: Option<usize>,
    symmetric: bool,
    include_identity: bool,
) -> Result<Report> {
    let n_lo = require_n(c)?;
    let n_hi = n_max.unwrap_or(n_lo);
    if n_lo == 0 || n_hi < n_lo {
        return Err(Error::InvalidInput(format!(
            "need 1 <= n <= n_max, got {n_lo}..{n_hi}"
        )));
    }
    let d = if n_hi == n_lo {
        Some(fixed_d(c, n_lo)?)
    } else {
        if c.d.is_some() {
            return Err(Error::InvalidInput(
                "--d cannot be combined with an n sweep".into(),
            ));
        }
        if c.g < 2 {
            return Err(Error::InvalidInput(format!(
                "g must be at least 2, got {}",
                c.g
            )));
        }
        None
    };
    let experiments = (n_lo..=n_hi)
        .map(|n| {
            generic_length_experiment(
                n,
                c.g,
                c.prime,
                c.trials,
                c.seed,
                symmetric,
                include_identity,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let ok = experiments
        .iter()
        .all(|e| e.all_within_bounds && e.all_chains_stationary);
    let mut csv = String::from("n,trial,length,chain,log_bound,paz_bound,within_bounds\n");
    let mut text = String::new();
    for e in &experiments {
        for t in &e.trials {
            let chain: Vec<String> = t.chain.iter().map(|x| x.to_string()).collect();
            let len = t.length.map_or_else(|| "none".into(), |l| l.to_string());
            let _ = writeln!(
                csv,
                "{},{},{len},{},{},{},{}",
                e.n,
                t.trial,
                chain.join(";"),
                e.log_bound,
                e.paz_bound,
                t.within_bounds
            );
        }
        let _ = writeln!(
            text,
            "n={} g={}: max length {} (bounds {} and {}), {}",
            e.n,
            e.g,
            e.max_length
                .map_or_else(|| "none".into(), |l| l.to_string()),
            e.log_bound,
            e.paz_bound,
            if e.all_within_bounds && e.all_chains_stationary {
                "ok"
            } else {
                "VIOLATED"
            }
        );
    }
    Ok(Report {
        envelope: Envelope {
            command: "length",
            config: config(
                "length",
                c,
                d,
                json!({ "n_max": n_max, "symmetric": symmetric, "include_identity": include_identity }),
            ),
            result: json!({ "experiments": experiments, "all_within_bounds": ok }),
            paper_refs: vec![
                "generating length of a generic tuple is at most 2 log_g n",
                "stationary chain of word spans",
            ],
        },
        csv,
        text,
        dot: None,
        code: if ok { EXIT_OK } else { EXIT_VIOLATED },
    })
}

fn cmd_witness(
    c: &Common,
    base: u64,
    force_base: bool,
    max_escalations: usize,
    paper_constants: bool,
) -> Result<Report> {
    let n = require_n(c)?;
    let d = fixed_d(c, n)?;
    let run = certify_witness(n, c.g, base, force_base, max_escalations)?;
    let constants = if paper_constants {
        Some(printed_constants(n, c.g)?)
    } else {
        None
    };
    let disc = run.discriminant.to_string();
    let digest = sha256_hex(&disc);
    let mut csv = String::from("letter,row,col,level,exponent\n");
    for e in &run.spec.support {
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            e.letter, e.row, e.col, e.level, e.exponent
        );
    }
    let mut text = format!(
        "witness n={n} g={} d={d}: base {}, {} escalations, discriminant {} ({} digits, sha256 {digest})\n",
        c.g,
        run.spec.base,
        run.escalations,
        if run.certified { "nonzero" } else { "zero" },
        disc.trim_start_matches('-').len(),
    );
    if let Some(k) = &constants {
        let cs: Vec<String> = k.c.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(
            text,
            "{}: M = {}, g_bar = {}, c = [{}]",
            k.label,
            k.m_constant,
            k.g_bar,
            cs.join(", ")
        );
    }
    let code = if run.certified {
        EXIT_OK
    } else {
        EXIT_VIOLATED
    };
    let result = json!({
        "n": n,
        "g": c.g,
        "d": d,
        "base": run.spec.base.to_string(),
        "entries": run.matrices,
        "support": run.spec.support,
        "m_constant": run.spec.m_constant.to_string(),
        "escalations": run.escalations,
        "certified": run.certified,
        "discriminant": disc,
        "discriminant_sha256": digest,
        "paper_constants": constants,
    });
    Ok(Report {
        envelope: Envelope {
            command: "witness",
            config: config(
                "witness",
                c,
                Some(d),
                json!({
                    "base": base,
                    "force_base": force_base,
                    "max_escalations": max_escalations,
                    "paper_constants": paper_constants,
                }),
            ),
            result,
            paper_refs: vec![
                "explicit integer matrices whose degree-2d words span",
                "discriminant criterion for local linear independence",
            ],
        },
        csv,
        text,
        dot: None,
        code,
    })
}

fn cmd_rosenthal(c: &Common) -> Result<Report> {
    let n = require_n(c)?;
    if c.g < 2 {
        return Err(Error::InvalidInput(format!(
            "g must be at least 2, got {}",
            c.g
        )));
    }
    let d = c.d.unwrap_or_else(|| ceil_log(c.g, n));
    let outcomes = (0..c.trials as u64)
        .map(|t| rosenthal_check(n, c.g, d, c.prime, c.seed.wrapping_add(t)))
        .collect::<Result<Vec<_>>>()?;
    let ok = outcomes.iter().all(|o| o.spans);
    let mut csv = String::from("seed,g_bar,rank,spans\n");
    for (t, o) in outcomes.iter().enumerate() {
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            c.seed.wrapping_add(t as u64),
            o.g_bar,
            o.rank,
            o.spans
        );
    }
    let text = format!(
        "n={n} g={} d={d}: degree-{} words span in {}/{} seeds\n",
        c.g,
        2 * d,
        outcomes.iter().filter(|o| o.spans).count(),
        outcomes.len()
    );
    Ok(Report {
        envelope: Envelope {
            command: "rosenthal",
            config: config("rosenthal", c, Some(d), json!({})),
            result: json!({ "outcomes": outcomes, "all_span": ok }),
            paper_refs: vec!["all words of degree 2d span M_n for a generic tuple"],
        },
        csv,
        text,
        dot: None,
        code: if ok { EXIT_OK } else { EXIT_VIOLATED },
    })
}

fn to_json<T: Serialize>(v: T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}
