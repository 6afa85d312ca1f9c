use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use jacklab_core::characters::{a_top_ch, ch, structure_constants};
use jacklab_core::coeffs::{connection_c, connection_h};
use jacklab_core::embeddings::{count_embeddings, graph_of_partition, hat_p};
use jacklab_core::handshake::{count_p, decomposition};
use jacklab_core::jack::jack;
use jacklab_core::maps::{face_rooted_list, glue};
use jacklab_core::matchings::Matching;
use jacklab_core::nonorientability::{eta_traced, EtaPolicy};
use jacklab_core::partitions::all_partitions;
use jacklab_core::scalars::{alpha_to_beta, Poly};
use jacklab_core::verify::{any_failed, run_suite, Status, Suite};
use jacklab_core::Partition;

/// Exhaustive enumeration beyond this size is not desk-scale.
const MAX_N: usize = 7;

#[derive(Parser)]
#[command(name = "jack-lab", version, about = "Exact Jack characters, connection coefficients and map statistics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Json,
    Csv,
    Pretty,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Policy {
    #[default]
    Smaller,
    Larger,
}

impl From<Policy> for EtaPolicy {
    fn from(p: Policy) -> Self {
        match p {
            Policy::Smaller => EtaPolicy::SmallerCanonicalKeeps,
            Policy::Larger => EtaPolicy::LargerCanonicalKeeps,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Power-sum expansions of every J_λ with λ ⊢ n.
    Jack {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Structure constants g^μ_{π,σ} as δ-coefficient arrays.
    G {
        #[arg(long)]
        pi: Partition,
        #[arg(long)]
        sigma: Partition,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// The character value Ch_π(λ) as a Laurent polynomial in A.
    Ch {
        #[arg(long)]
        pi: Partition,
        #[arg(long)]
        lambda: Partition,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Top A-coefficient of Ch_π(λ) against the embedding counts.
    Embed {
        #[arg(long)]
        pi: Partition,
        #[arg(long)]
        lambda: Partition,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Root-edge class trace and η of each component of the glued map.
    Eta {
        #[arg(long)]
        lambda: Partition,
        /// Matching such as "[[1,2],[1^,2^]]".
        #[arg(long)]
        delta: String,
        #[arg(long, value_enum, default_value_t)]
        policy: Policy,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Hands-shaking outcome count and its decomposition.
    Handshake {
        #[arg(long)]
        pi: Partition,
        #[arg(long)]
        sigma: Partition,
        #[arg(long)]
        mu: Partition,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Connection coefficients c^λ_{π,σ} for π, σ, λ ⊢ n, in β.
    C {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Logarithmic connection coefficients h^λ_{π,σ} for π, σ, λ ⊢ n, in β.
    H {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Runs a verification suite and writes JSON lines, one per statement.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<String>,
        /// Adds wall-time to each report (output is then not reproducible).
        #[arg(long)]
        timings: bool,
    },
}

/// A result that renders either as JSON or as a table.
struct Table {
    json: Value,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn write(&self, format: Format, out: &mut dyn Write) -> Result<()> {
        match format {
            Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&self.json)?)?,
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.header)?;
                for r in &self.rows {
                    w.write_record(r)?;
                }
                w.flush()?;
            }
            Format::Pretty => {
                let mut width: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
                for r in &self.rows {
                    for (w, c) in width.iter_mut().zip(r) {
                        *w = (*w).max(c.chars().count());
                    }
                }
                let line = |cells: Vec<&str>, out: &mut dyn Write| -> io::Result<()> {
                    let padded: Vec<String> = cells.iter().zip(&width).map(|(c, &w)| format!("{c:<w$}")).collect();
                    writeln!(out, "{}", padded.join("  ").trim_end())
                };
                line(self.header.clone(), out)?;
                for r in &self.rows {
                    line(r.iter().map(String::as_str).collect(), out)?;
                }
            }
        }
        Ok(())
    }
}

fn desk_n(n: usize) -> Result<usize> {
    if n == 0 || n > MAX_N {
        bail!("n must lie in 1..={MAX_N}, got {n}");
    }
    Ok(n)
}

fn coeff_strings(p: &Poly) -> Vec<String> {
    p.coeffs().iter().map(|c| c.to_string()).collect()
}

fn jack_table(n: usize) -> Table {
    let mut obj = Map::new();
    let mut rows = Vec::new();
    for lam in all_partitions(n) {
        let j = jack(&lam);
        let mut inner = Map::new();
        for (mu, c) in &j.terms {
            inner.insert(mu.to_string(), json!(c));
            rows.push(vec![lam.to_string(), mu.to_string(), c.to_string_var("a")]);
        }
        obj.insert(lam.to_string(), Value::Object(inner));
    }
    Table { json: Value::Object(obj), header: vec!["lambda", "mu", "coefficient"], rows }
}

fn g_table(pi: &Partition, sigma: &Partition) -> Result<Table> {
    let g = structure_constants(pi, sigma)?;
    let mut obj = Map::new();
    let mut rows = Vec::new();
    for (mu, p) in g.iter() {
        obj.insert(mu.to_string(), json!(p));
        rows.push(vec![mu.to_string(), coeff_strings(&p.0).join(" ")]);
    }
    Ok(Table { json: Value::Object(obj), header: vec!["mu", "delta_coefficients"], rows })
}

fn triple_table(n: usize, log: bool) -> Result<Table> {
    let mut list = Vec::new();
    let mut rows = Vec::new();
    let mut push = |pi: &Partition, sigma: &Partition, lam: &Partition, p: &Poly| {
        let cs = coeff_strings(p);
        rows.push(vec![pi.to_string(), sigma.to_string(), lam.to_string(), cs.join(" ")]);
        list.push(json!({ "pi": pi, "sigma": sigma, "lambda": lam, "beta": cs }));
    };
    if log {
        let h = connection_h(n)?;
        for ((pi, sigma, lam), v) in &h[n].entries {
            push(pi, sigma, lam, &alpha_to_beta(v)?.0);
        }
    } else {
        for ((pi, sigma, lam), v) in &connection_c(n)?.entries {
            push(pi, sigma, lam, &v.0);
        }
    }
    Ok(Table { json: Value::Array(list), header: vec!["pi", "sigma", "lambda", "beta_coefficients"], rows })
}

fn eta_table(lam: &Partition, delta: &str, policy: EtaPolicy) -> Result<Table> {
    let d = Matching::parse(delta)?;
    let list = face_rooted_list(&glue(lam, &d)?);
    let mut comps = Vec::new();
    let mut rows = Vec::new();
    let mut total = 0;
    for (k, m) in list.0.iter().enumerate() {
        let mut trace = Vec::new();
        let e = eta_traced(m, policy, &mut trace)?;
        total += e;
        let names: Vec<String> = trace.iter().map(|c| serde_json::to_value(c).map(|v| v.as_str().unwrap_or_default().to_string())).collect::<std::result::Result<_, _>>()?;
        rows.push(vec![(k + 1).to_string(), m.map.n_edges().to_string(), names.join(" "), e.to_string()]);
        comps.push(json!({ "edges": m.map.n_edges(), "orientable": m.map.is_orientable(), "trace": trace, "eta": e }));
    }
    rows.push(vec!["total".into(), d.n().to_string(), String::new(), total.to_string()]);
    Ok(Table { json: json!({ "components": comps, "eta": total }), header: vec!["component", "edges", "trace", "eta"], rows })
}

fn run(cli: Cli) -> Result<ExitCode> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let (table, format) = match cli.command {
        Command::Jack { n, format } => (jack_table(desk_n(n)?), format),
        Command::G { pi, sigma, format } => (g_table(&pi, &sigma)?, format),
        Command::Ch { pi, lambda, format } => {
            let v = ch(&pi, &lambda)?;
            let t = Table { json: json!(v), header: vec!["pi", "lambda", "value"], rows: vec![vec![pi.to_string(), lambda.to_string(), v.to_string()]] };
            (t, format)
        }
        Command::Embed { pi, lambda, format } => {
            let a = a_top_ch(&pi, &lambda)?;
            let e = count_embeddings(&graph_of_partition(&pi, false), &lambda, false);
            let h = hat_p(&pi, &lambda);
            let cells = vec![a.to_string(), e.to_string(), h.to_string()];
            let t = Table {
                json: json!({ "a_top_ch": cells[0], "embeddings": cells[1], "hat_p": cells[2] }),
                header: vec!["a_top_ch", "embeddings", "hat_p"],
                rows: vec![cells],
            };
            (t, format)
        }
        Command::Eta { lambda, delta, policy, format } => (eta_table(&lambda, &delta, policy.into())?, format),
        Command::Handshake { pi, sigma, mu, format } => {
            let d = decomposition(&pi, &sigma, &mu).map(Some).or_else(|_| Ok::<_, anyhow::Error>(None))?;
            let count = count_p(&pi, &sigma, &mu).to_string();
            let (json, row) = match d {
                Some(d) => (json!(d), vec![d.count, d.constant, d.z_ratio, d.oriented_lists, d.product]),
                None => (json!({ "count": count }), vec![count, String::new(), String::new(), String::new(), String::new()]),
            };
            (Table { json, header: vec!["count", "constant", "z_ratio", "oriented_lists", "product"], rows: vec![row] }, format)
        }
        Command::C { n, format } => (triple_table(desk_n(n)?, false)?, format),
        Command::H { n, format } => (triple_table(desk_n(n)?, true)?, format),
        Command::Verify { suite, n, seed, out: path, timings } => {
            let suite: Suite = suite.parse()?;
            if let Some(n) = n {
                desk_n(n)?;
            }
            let reports = run_suite(suite, n, seed, timings)?;
            let mut sink: Box<dyn Write> = match &path {
                Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("cannot create {p}"))?)),
                None => Box::new(out),
            };
            for r in &reports {
                writeln!(sink, "{}", serde_json::to_string(r)?)?;
            }
            sink.flush()?;
            let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
            eprintln!(
                "{} verified, {} failed, {} reported-only",
                count(Status::Verified),
                count(Status::Failed),
                count(Status::ReportedOnly)
            );
            return Ok(if any_failed(&reports) { ExitCode::FAILURE } else { ExitCode::SUCCESS });
        }
    };
    table.write(format, &mut out)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
