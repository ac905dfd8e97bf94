//! Command-line front end: `ssloci <subcommand> [flags]`.
//!
//! [`run`] never prints or exits; it returns the rendered output and the exit
//! code (0 success, 2 usage error, 1 failed identity or oracle mismatch) so the
//! binary stays a thin wrapper and tests can drive it in-process.

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::closed_forms::{CountQuery, Family};
use crate::error::{Error, Result};
use crate::exact_arith::is_prime;
use crate::invariants::{
    class_number_view, components_report, identity_ledger, mass_report, siegel3_report, sweep,
    ModuliParams,
};
use crate::limits::Limits;
use crate::oracles::Oracles;
use crate::verify::{run_verify, VerifyConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "ssloci", version, about = "Exact invariants of supersingular loci of Siegel modular varieties")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "table", global = true)]
    format: Format,
    /// Worker threads for brute-force searches (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GenusArgs {
    /// Genus g >= 1.
    #[arg(long)]
    g: u32,
    /// Prime p.
    #[arg(long)]
    p: u64,
    /// Level N >= 3, prime to p.
    #[arg(long = "N")]
    level: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Mass M_g of principally polarized superspecial abelian varieties.
    Mass {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        p: u64,
    },
    /// Superspecial counts, L_p and the number of irreducible components.
    Components {
        #[command(flatten)]
        params: GenusArgs,
        /// Also print the class-number reading of the counts.
        #[arg(long)]
        class_numbers: bool,
    },
    /// The Siegel 3-fold counts (g = 2).
    Siegel3 {
        #[arg(long)]
        p: u64,
        #[arg(long = "N")]
        level: u64,
    },
    /// Check the exact identities between the counts.
    Identities {
        #[command(flatten)]
        params: GenusArgs,
    },
    /// Evaluate one closed-form count, optionally against brute force.
    Count {
        /// gl, sp, u, lagrangian, lu, im, grassmannian, spmodn or projline.
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        r: Option<u32>,
        #[arg(long)]
        g: Option<u32>,
        #[arg(long = "N")]
        level: Option<u64>,
        /// Also count by exhaustive search.
        #[arg(long)]
        oracle: bool,
    },
    /// Run the oracle-vs-formula grid.
    Verify {
        #[arg(long, default_value_t = 2)]
        max_n: u32,
        #[arg(long, default_value_t = 5)]
        max_q: u64,
        /// Larger grid (q up to 9, Sp_4(F_3)) with a time estimate.
        #[arg(long)]
        extended: bool,
    },
    /// Tabulate component counts over ranges such as `1..6` or `2,3,5`.
    Sweep {
        #[arg(long, default_value = "1..4")]
        g: String,
        #[arg(long, default_value = "2,3,5,7")]
        p: String,
        #[arg(long = "N", default_value = "3,4,5,7")]
        level: String,
    },
}

/// Rendered result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: 0, stdout, stderr: String::new() }
    }

    fn failed(stdout: String) -> Self {
        Outcome { code: 1, stdout, stderr: String::new() }
    }
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: rendered }
            } else {
                Outcome::ok(rendered)
            };
        }
    };
    let result = match cli.threads {
        Some(0) => Err(Error::bad("--threads must be >= 1")),
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(Error::bad(format!("--threads {t}: {e}"))),
        },
        None => execute(&cli),
    };
    match result {
        Ok(out) => out,
        Err(e) => Outcome {
            code: if e.is_usage() { 2 } else { 1 },
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn require_prime(flag: &str, p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::bad(format!("{flag} {p}: p must be prime")))
    }
}

fn moduli(a: &GenusArgs) -> Result<ModuliParams> {
    if a.g == 0 {
        return Err(Error::bad("--g 0: g must be >= 1"));
    }
    require_prime("--p", a.p)?;
    ModuliParams::new(a.g, a.p, a.level)
        .map_err(|_| Error::bad(format!("--N {}: N must be >= 3 and prime to p = {}", a.level, a.p)))
}

fn need<T>(v: Option<T>, family: Family, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::bad(format!("count --family {family} requires {flag}")))
}

/// `a..b` and `a..=b` (both inclusive) or a comma list.
pub fn parse_range(flag: &str, s: &str) -> Result<Vec<u64>> {
    let bad = || Error::bad(format!("{flag} {s:?}: expected a range like 1..6 or a list like 2,3,5"));
    let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
    let mut out = Vec::new();
    for part in s.split(',').filter(|t| !t.trim().is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
            if a > b {
                return Err(bad());
            }
            out.extend(a..=b);
        } else {
            out.push(num(part)?);
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let json = cli.format == Format::Json;
    let render = |r: &crate::invariants::InvariantReport| if json { r.to_json() + "\n" } else { r.to_table() };
    match &cli.command {
        Command::Mass { g, p } => {
            if *g == 0 {
                return Err(Error::bad("--g 0: g must be >= 1"));
            }
            require_prime("--p", *p)?;
            Ok(Outcome::ok(render(&mass_report(*g, *p)?)))
        }
        Command::Components { params, class_numbers } => {
            let mp = moduli(params)?;
            let mut report = components_report(&mp)?;
            if *class_numbers {
                report.values.extend(class_number_view(&mp)?.values);
            }
            Ok(Outcome::ok(render(&report)))
        }
        Command::Siegel3 { p, level } => {
            require_prime("--p", *p)?;
            moduli(&GenusArgs { g: 2, p: *p, level: *level })?;
            Ok(Outcome::ok(render(&siegel3_report(*p, *level)?)))
        }
        Command::Identities { params } => {
            let mp = moduli(params)?;
            let ledger = identity_ledger(&mp)?;
            let holds = ledger.iter().all(|c| c.holds);
            let text = if json {
                serde_json::to_string_pretty(&json!({ "params": mp, "identities": ledger, "all_hold": holds }))
                    .expect("serializes")
                    + "\n"
            } else {
                let mut s = String::new();
                for c in &ledger {
                    let (tag, rel) = if c.holds { ("ok", "=") } else { ("VIOLATED", "!=") };
                    s.push_str(&format!("[{tag}] {}: {} {rel} {}\n", c.name, c.lhs, c.rhs));
                }
                s
            };
            Ok(if holds { Outcome::ok(text) } else { Outcome::failed(text) })
        }
        Command::Count { family, n, m, q, r, g, level, oracle } => {
            let fam: Family = family.parse()?;
            let query = match fam {
                Family::Gl | Family::Sp | Family::U | Family::Lagrangian | Family::Lu => {
                    let (n, q) = (need(*n, fam, "--n")?, need(*q, fam, "--q")?);
                    match fam {
                        Family::Gl => CountQuery::Gl { n, q },
                        Family::Sp => CountQuery::Sp { n, q },
                        Family::U => CountQuery::U { n, q },
                        Family::Lagrangian => CountQuery::Lagrangian { n, q },
                        _ => CountQuery::Lu { n, q },
                    }
                }
                Family::Im => CountQuery::Im { m: need(*m, fam, "--m")?, q: need(*q, fam, "--q")? },
                Family::Grassmannian => CountQuery::Grassmannian {
                    n: need(*n, fam, "--n")?,
                    r: need(*r, fam, "--r")?,
                    q: need(*q, fam, "--q")?,
                },
                Family::SpModN => CountQuery::SpModN { g: need(*g, fam, "--g")?, modulus: need(*level, fam, "--N")? },
                Family::ProjLine => CountQuery::ProjLine { q: need(*q, fam, "--q")? },
            };
            count(&query, *oracle, json)
        }
        Command::Verify { max_n, max_q, extended } => {
            let config = VerifyConfig { max_n: *max_n, max_q: *max_q, extended: *extended };
            let report = run_verify(&config, &Limits::from_env());
            let text = if json { report.to_json() + "\n" } else { report.to_table() };
            Ok(if report.all_pass() { Outcome::ok(text) } else { Outcome::failed(text) })
        }
        Command::Sweep { g, p, level } => {
            let gs: Vec<u32> = parse_range("--g", g)?.into_iter().map(|x| x as u32).collect();
            let ps = parse_range("--p", p)?;
            let ns = parse_range("--N", level)?;
            if let Some(&bad) = ps.iter().find(|&&x| !is_prime(x)) {
                return Err(Error::bad(format!("--p {bad}: p must be prime")));
            }
            if let Some(&bad) = ns.iter().find(|&&x| x < 3) {
                return Err(Error::bad(format!("--N {bad}: N must be >= 3")));
            }
            if gs.contains(&0) {
                return Err(Error::bad("--g 0: g must be >= 1"));
            }
            let rows = sweep(&gs, &ps, &ns)?;
            if json {
                return Ok(Outcome::ok(serde_json::to_string_pretty(&rows).expect("serializes") + "\n"));
            }
            let mut table: Vec<[String; 7]> =
                vec![["g", "p", "N", "superspecial", "lambda_star", "L_p", "C"].map(String::from)];
            for r in &rows {
                table.push([
                    r.params.g.to_string(),
                    r.params.p.to_string(),
                    r.params.level.to_string(),
                    r.superspecial_count.clone(),
                    r.lambda_star_count.clone().unwrap_or_else(|| "-".into()),
                    r.l_p.clone(),
                    r.component_count.clone(),
                ]);
            }
            let mut widths = [0usize; 7];
            for row in &table {
                for (w, s) in widths.iter_mut().zip(row) {
                    *w = (*w).max(s.len());
                }
            }
            let mut out = String::new();
            for row in &table {
                let cells: Vec<String> = row.iter().zip(widths).map(|(s, w)| format!("{s:>w$}")).collect();
                out.push_str(&cells.join("  "));
                out.push('\n');
            }
            Ok(Outcome::ok(out))
        }
    }
}

fn count(query: &CountQuery, with_oracle: bool, json: bool) -> Result<Outcome> {
    let formula = query.evaluate()?;
    let oracle = if with_oracle {
        Some(Oracles::new(Limits::from_env()).run(query)?)
    } else {
        None
    };
    let agree = oracle.as_ref().map(|o| o.count == formula);
    let text = if json {
        let o = oracle.as_ref().map(|o| {
            json!({ "count": o.count.to_string(), "search_space": o.search_space.to_string() })
        });
        serde_json::to_string_pretty(&json!({
            "family": query.family().name(),
            "query": query.describe(),
            "formula": formula.to_string(),
            "oracle": o,
            "agree": agree,
        }))
        .expect("serializes")
            + "\n"
    } else {
        let mut s = format!("{} = {}\n", query.describe(), formula);
        if let Some(o) = &oracle {
            let verdict = if agree == Some(true) { "agrees" } else { "MISMATCH" };
            s.push_str(&format!("brute force: {} over {} candidates ({verdict})\n", o.count, o.search_space));
        }
        s
    };
    Ok(if agree == Some(false) { Outcome::failed(text) } else { Outcome::ok(text) })
}
