use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use starjoin::certificate::{Certificate, Verdict};
use starjoin::coloring::{
    chromatic_number, is_k_colorable, kst_check, local_chromatic, ChiStatus, Colorability,
    KstVerdict, SearchBudget,
};
use starjoin::complex::{join_complex, neighborhood_complex, SimplicialComplex, DEFAULT_FACE_CAP};
use starjoin::construct::{star_join_quotient, tower, TowerParams};
use starjoin::dimacs::{to_dimacs, write_graph};
use starjoin::homology::{ChainComplex, FieldSpec};
use starjoin::suite::{resolve_graph, run_suite, summary_table, SuiteConfig};
use starjoin::verify::{
    verify_lemma_join_homology, verify_lemma_locjoin, verify_remark_r0, verify_theorem2,
    REMARK_PAIRS,
};
use starjoin::Graph;

const EXIT_FAIL: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;

/// Star-join graphs, exact coloring and neighborhood-complex homology.
///
/// Graph arguments are DIMACS files (with an optional `<file>.labels`
/// sidecar) or the names K<n>, C<n>, P<n>, tower:n,c,r.
/// Exit status: 0 exact/pass, 1 error, 2 fail or violation, 3 unknown.
#[derive(Parser)]
#[command(name = "starjoin", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct BudgetArgs {
    /// Search-node limit; 0 disables it.
    #[arg(long, env = "STARJOIN_MAX_NODES", default_value_t = 20_000_000)]
    max_nodes: u64,
    /// Wall-clock limit in seconds; 0 disables it.
    #[arg(long, env = "STARJOIN_MAX_SECONDS", default_value_t = 60)]
    max_seconds: u64,
}

impl BudgetArgs {
    fn budget(self) -> anyhow::Result<SearchBudget> {
        if self.max_nodes == 0 && self.max_seconds == 0 {
            bail!("at least one of --max-nodes and --max-seconds must be finite");
        }
        let some = |v: u64| (v > 0).then_some(v);
        Ok(SearchBudget { max_nodes: some(self.max_nodes), max_seconds: some(self.max_seconds) })
    }
}

#[derive(Args, Clone, Copy)]
struct CapArgs {
    /// Maximum number of faces enumerated per dimension.
    #[arg(long, env = "STARJOIN_FACE_CAP", default_value_t = DEFAULT_FACE_CAP)]
    face_cap: usize,
}

#[derive(Args)]
struct Output {
    /// Output file (stdout if omitted).
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Build the tower G_n and write it as DIMACS.
    Construct {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        c: u32,
        #[arg(long)]
        r: u32,
        #[command(flatten)]
        out: Output,
    },
    /// Build G1 *_s G2 and write it as DIMACS.
    StarJoin {
        #[arg(long)]
        g1: String,
        #[arg(long)]
        g2: String,
        #[arg(long)]
        s: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Chromatic number.
    Chi {
        graph: String,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// r-local chromatic number.
    Lchi {
        graph: String,
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Decide k-colorability.
    Kcolor {
        graph: String,
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Check a graph against the small-odd-cycle-free size bound.
    Kst {
        graph: String,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        c: u32,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Neighborhood complex of a graph.
    Ncomplex {
        graph: String,
        #[command(flatten)]
        out: Output,
    },
    /// Join of two complexes.
    JoinComplex {
        k: PathBuf,
        l: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Face counts per dimension.
    Fvector {
        k: PathBuf,
        #[command(flatten)]
        cap: CapArgs,
    },
    /// Reduced Betti numbers.
    Homology {
        k: PathBuf,
        /// gf2, gfp:<p> or rat.
        #[arg(long, default_value = "gf2")]
        field: FieldSpec,
        #[command(flatten)]
        cap: CapArgs,
    },
    /// Compare reduced homology with that of a sphere.
    SphereCheck {
        k: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        dim: i32,
        /// Fields to check (repeatable).
        #[arg(long = "field", default_values = ["gf2", "rat"])]
        fields: Vec<FieldSpec>,
        #[command(flatten)]
        cap: CapArgs,
    },
    /// Run a verification pipeline and emit a certificate.
    Verify {
        #[command(subcommand)]
        what: VerifyCommand,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    Theorem2 {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        c: u32,
        #[arg(long)]
        r: u32,
        /// Also check the homology of the neighborhood complex.
        #[arg(long)]
        deep: bool,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        cap: CapArgs,
        #[command(flatten)]
        out: Output,
    },
    Locjoin {
        #[arg(long)]
        g1: String,
        #[arg(long)]
        g2: String,
        #[arg(long)]
        r: u32,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        out: Output,
    },
    Joinhom {
        #[arg(long)]
        g1: String,
        #[arg(long)]
        g2: String,
        #[arg(long)]
        s: usize,
        #[command(flatten)]
        cap: CapArgs,
        #[command(flatten)]
        out: Output,
    },
    Remark {
        #[command(flatten)]
        cap: CapArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Run a TOML suite config, or the default grid if none is given.
    Suite {
        config: Option<PathBuf>,
        /// Directory for certificates and summary.txt.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

fn graph(reference: &str) -> anyhow::Result<Graph> {
    resolve_graph(reference, Path::new("")).with_context(|| format!("loading graph {reference}"))
}

fn complex(path: &Path) -> anyhow::Result<SimplicialComplex> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    SimplicialComplex::from_text(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(out: &Output, text: &str) -> anyhow::Result<()> {
    match &out.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_graph(out: &Output, g: &Graph) -> anyhow::Result<()> {
    match &out.out {
        Some(path) => Ok(write_graph(path, g)?),
        None => emit(out, &to_dimacs(g)),
    }
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Pass => 0,
        Verdict::Fail => EXIT_FAIL,
        Verdict::Unknown => EXIT_UNKNOWN,
    }
}

fn emit_certificate(out: &Output, cert: &Certificate) -> anyhow::Result<u8> {
    match &out.out {
        Some(path) => {
            cert.write_atomic(path)?;
            for c in &cert.checks {
                println!("{:<8} {}: {}", c.verdict.as_str(), c.name, c.detail);
            }
            println!("verdict: {}", cert.verdict.as_str());
        }
        None => print!("{}", cert.to_json()),
    }
    Ok(verdict_code(cert.verdict))
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Construct { n, c, r, out } => {
            emit_graph(&out, &tower(TowerParams::new(n, c, r)?)?)?;
        }
        Command::StarJoin { g1, g2, s, out } => {
            emit_graph(&out, &star_join_quotient(&graph(&g1)?, &graph(&g2)?, s)?)?;
        }
        Command::Chi { graph: reference, budget } => {
            let res = chromatic_number(&graph(&reference)?, budget.budget()?);
            println!("nodes explored: {}", res.nodes_explored);
            return Ok(match res.status {
                ChiStatus::Exact(chi) => {
                    println!("chi = {chi}");
                    0
                }
                ChiStatus::LowerOnly(_) | ChiStatus::Exhausted => {
                    println!("unknown: {} <= chi <= {}", res.lower, res.upper);
                    EXIT_UNKNOWN
                }
            });
        }
        Command::Lchi { graph: reference, r, budget } => {
            let g = graph(&reference)?;
            let res = local_chromatic(&g, r, budget.budget()?);
            println!("distinct balls: {}, nodes explored: {}", res.distinct_balls, res.nodes_explored);
            if let Some(v) = res.exact() {
                match res.center {
                    Some(c) => println!("lchi_{r} = {v} (attained at vertex {})", g.label(c)),
                    None => println!("lchi_{r} = {v}"),
                }
                return Ok(0);
            }
            println!(
                "unknown: {} <= lchi_{r} <= {} ({} balls unresolved)",
                res.lower, res.upper, res.unresolved_balls
            );
            return Ok(EXIT_UNKNOWN);
        }
        Command::Kcolor { graph: reference, k, budget } => {
            let res = is_k_colorable(&graph(&reference)?, k, budget.budget()?);
            println!("nodes explored: {}", res.nodes_explored);
            return Ok(match res.answer {
                Colorability::Yes(colors) => {
                    println!("yes");
                    let line: Vec<String> = colors.iter().map(u32::to_string).collect();
                    println!("{}", line.join(" "));
                    0
                }
                Colorability::No => {
                    println!("no");
                    0
                }
                Colorability::Unknown => {
                    println!("unknown");
                    EXIT_UNKNOWN
                }
            });
        }
        Command::Kst { graph: reference, r, n, c, budget } => {
            let res = kst_check(&graph(&reference)?, r, n, c, budget.budget()?);
            let tag = match res.verdict {
                KstVerdict::Consistent => "consistent",
                KstVerdict::PremiseFails => "premise_fails",
                KstVerdict::Violation => "violation",
                KstVerdict::Unknown => "unknown",
            };
            println!("{tag}: {}", res.detail);
            return Ok(match res.verdict {
                KstVerdict::Consistent | KstVerdict::PremiseFails => 0,
                KstVerdict::Violation => EXIT_FAIL,
                KstVerdict::Unknown => EXIT_UNKNOWN,
            });
        }
        Command::Ncomplex { graph: reference, out } => {
            emit(&out, &neighborhood_complex(&graph(&reference)?)?.to_text())?;
        }
        Command::JoinComplex { k, l, out } => {
            emit(&out, &join_complex(&complex(&k)?, &complex(&l)?).to_text())?;
        }
        Command::Fvector { k, cap } => {
            let f = complex(&k)?.f_vector(cap.face_cap)?;
            let cells: Vec<String> = f.iter().enumerate().map(|(d, n)| format!("{d}:{n}")).collect();
            println!("f-vector [{}]", cells.join(" "));
        }
        Command::Homology { k, field, cap } => {
            let betti = ChainComplex::new(&complex(&k)?, cap.face_cap)?.reduced_betti(field);
            print_betti(&betti);
        }
        Command::SphereCheck { k, dim, fields, cap } => {
            if fields.is_empty() {
                bail!("no field given");
            }
            if dim < -1 {
                bail!("sphere dimension {dim} < -1");
            }
            let chain = ChainComplex::new(&complex(&k)?, cap.face_cap)?;
            let mut all = true;
            for field in fields {
                let betti = chain.reduced_betti(field);
                print_betti(&betti);
                all &= betti.is_sphere(dim);
            }
            let verdict = if all { Verdict::Pass } else { Verdict::Fail };
            println!("verdict: {} (homology evidence for S^{dim})", verdict.as_str());
            return Ok(verdict_code(verdict));
        }
        Command::Verify { what } => return verify(what),
    }
    Ok(0)
}

fn print_betti(b: &starjoin::homology::BettiVector) {
    println!("field {}", b.field);
    println!("dim  reduced betti");
    for (i, v) in b.reduced.iter().enumerate() {
        println!("{:>3}  {v}", i as i32 - 1);
    }
}

fn verify(what: VerifyCommand) -> anyhow::Result<u8> {
    match what {
        VerifyCommand::Theorem2 { n, c, r, deep, budget, cap, out } => {
            let cert = verify_theorem2(TowerParams::new(n, c, r)?, budget.budget()?, deep, cap.face_cap)?;
            emit_certificate(&out, &cert)
        }
        VerifyCommand::Locjoin { g1, g2, r, budget, out } => {
            let cert = verify_lemma_locjoin(&graph(&g1)?, &graph(&g2)?, r, budget.budget()?)?;
            emit_certificate(&out, &cert)
        }
        VerifyCommand::Joinhom { g1, g2, s, cap, out } => {
            let cert = verify_lemma_join_homology(&graph(&g1)?, &graph(&g2)?, s, cap.face_cap)?;
            emit_certificate(&out, &cert)
        }
        VerifyCommand::Remark { cap, out } => {
            emit_certificate(&out, &verify_remark_r0(&REMARK_PAIRS, cap.face_cap)?)
        }
        VerifyCommand::Suite { config, out_dir } => {
            let cfg = match &config {
                Some(path) => SuiteConfig::load(path)?,
                None => SuiteConfig::default_grid(),
            };
            let entries = run_suite(&cfg, out_dir.as_deref())?;
            print!("{}", summary_table(&entries));
            let any = |v: Option<Verdict>| entries.iter().any(|e| e.verdict() == v);
            Ok(if any(Some(Verdict::Fail)) {
                EXIT_FAIL
            } else if any(None) {
                1
            } else if any(Some(Verdict::Unknown)) {
                EXIT_UNKNOWN
            } else {
                0
            })
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
