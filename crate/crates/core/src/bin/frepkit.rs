use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use frepkit::analyze::{capacity_profile, cross_checks, file_size_with, Budget, Report};
use frepkit::batch::{batch_t, certify_all_subsets, frb_certify, one_based_text};
use frepkit::construct::{cage, complete, complete_bipartite, cycle, projective_plane, transversal_design, turan, CageId};
use frepkit::dress::{execute_repair, plan_repair, random_file, store, StoreOptions, StoredSystem};
use frepkit::galois::{Elem, FieldSpec};
use frepkit::incidence::{from_design, from_graph};
use frepkit::{Error, FrCode, Graph};

// A closed stdout (e.g. piped into `head`) ends the process quietly instead of panicking.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        if let Err(e) = write!(std::io::stdout().lock(), $($t)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
        }
    }};
}

macro_rules! outln {
    ($($t:tt)*) => {{
        out!($($t)*);
        out!("\n");
    }};
}

#[derive(Parser)]
#[command(name = "frepkit", version, about = "Fractional repetition codes: construct, analyze, store, repair, batch")]
struct Cli {
    /// Maximum subsets any exhaustive search may visit (default: $FREPKIT_BUDGET or 1e8).
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Worker threads for enumeration (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a code and write it as a .frc file.
    Construct {
        #[command(subcommand)]
        family: Family,
    },
    /// Exact file sizes, bounds and verdicts for a code.
    Analyze {
        code: PathBuf,
        #[arg(long)]
        k_max: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Attach an FRB certificate for this reconstruction degree.
        #[arg(long)]
        frb: Option<usize>,
    },
    /// Encode a file and place it on nodes under a storage directory.
    Store {
        code: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        dir: PathBuf,
        /// Whitespace-separated decimal symbols; a seeded random file is used when absent.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Field order q (default: smallest power of two >= theta).
        #[arg(long)]
        field_order: Option<u64>,
    },
    /// Recover the file from exactly k nodes.
    Reconstruct {
        #[arg(long)]
        dir: PathBuf,
        /// Comma-separated node ids (1-based).
        #[arg(long, value_delimiter = ',', required = true)]
        nodes: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rebuild a lost node by copying one symbol from each donor.
    Repair {
        #[arg(long)]
        dir: PathBuf,
        /// Failed node id (1-based).
        #[arg(long)]
        node: usize,
        #[arg(long, value_enum, default_value_t = Policy::LowestId)]
        policy: Policy,
        /// Print the plan without writing anything.
        #[arg(long)]
        dry_run: bool,
    },
    /// Batch retrieval: certify a batch size or find the exact one.
    Batch {
        code: PathBuf,
        #[arg(long, conflicts_with = "max_t", required_unless_present = "max_t")]
        t: Option<usize>,
        #[arg(long)]
        max_t: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Certify a code as an FRB code for reconstruction degree k.
    CertifyFrb {
        code: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Subcommand)]
enum Family {
    /// Turan graph T(n, r).
    Turan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Complete graph K_n.
    Complete {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Complete bipartite graph K_{alpha,alpha}.
    Bipartite {
        #[arg(long)]
        alpha: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Cycle C_n.
    Cycle {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Cage from the catalog: petersen, heawood, mcgee, tutte-coxeter.
    Cage {
        #[arg(long)]
        name: CageId,
        #[command(flatten)]
        out: Out,
    },
    /// Transversal design with rho groups of alpha points.
    Td {
        #[arg(long)]
        rho: usize,
        #[arg(long)]
        alpha: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Projective plane PG(2, q).
    Plane {
        #[arg(long)]
        q: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Regular graph read from a GRAPH file.
    Graph {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Args)]
struct Out {
    /// Output .frc path (default: print the code to stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    LowestId,
    Spread,
}

impl From<Policy> for frepkit::dress::RepairPolicy {
    fn from(p: Policy) -> Self {
        match p {
            Policy::LowestId => Self::LowestId,
            Policy::Spread => Self::Spread,
        }
    }
}

/// Outcome of a command that ran to completion.
enum Status {
    Ok,
    /// Results disagree with a closed form or with each other.
    Mismatch,
    /// The answer is a well-formed "no" (e.g. a batch size that fails).
    Refused,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let budget = cli.budget.map(Budget).unwrap_or_else(Budget::from_env);
    match run(cli.cmd, budget) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Refused) => ExitCode::from(1),
        Ok(Status::Mismatch) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn node_ids(ids: &[usize], n: usize) -> frepkit::Result<Vec<usize>> {
    ids.iter()
        .map(|&i| {
            if i == 0 || i > n {
                Err(Error::Params(format!("node {i} outside 1..={n}")))
            } else {
                Ok(i - 1)
            }
        })
        .collect()
}

fn read_symbols(path: &Path) -> frepkit::Result<Vec<Elem>> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    text.split_ascii_whitespace()
        .enumerate()
        .map(|(i, w)| {
            w.parse()
                .map_err(|_| Error::Params(format!("{}: symbol {} ({w:?}) is not a number", path.display(), i + 1)))
        })
        .collect()
}

fn symbols_text(file: &[Elem]) -> String {
    let mut s = String::new();
    for v in file {
        let _ = writeln!(s, "{v}");
    }
    s
}

fn run(cmd: Cmd, budget: Budget) -> frepkit::Result<Status> {
    match cmd {
        Cmd::Construct { family } => {
            let (code, out) = build(family)?;
            let p = format!("({},{},{},{})", code.n(), code.theta(), code.alpha(), code.rho());
            match out.out {
                Some(path) => {
                    code.save(&path)?;
                    outln!("n={} theta={} alpha={} rho={} {p}", code.n(), code.theta(), code.alpha(), code.rho());
                }
                None => out!("{}", code.to_text()),
            }
            Ok(Status::Ok)
        }
        Cmd::Analyze {
            code,
            k_max,
            format,
            frb,
        } => {
            let code = FrCode::load(&code)?;
            let profile = capacity_profile(&code, k_max, budget)?;
            let checks = cross_checks(&code, &profile, budget)?;
            let mut report = Report::new(&code, profile, checks);
            if let Some(k) = frb {
                report.frb = Some(frb_certify(&code, k, budget)?);
            }
            match format {
                Format::Text => out!("{}", report.to_text()),
                Format::Json => out!("{}", report.to_json()),
            }
            Ok(if report.checks_pass() { Status::Ok } else { Status::Mismatch })
        }
        Cmd::Store {
            code,
            k,
            dir,
            input,
            seed,
            field_order,
        } => {
            let code = FrCode::load(&code)?;
            let field = match field_order {
                Some(q) => FieldSpec::for_order(q)?,
                None => FieldSpec::smallest_binary(code.theta())?,
            };
            let (file, seed) = match &input {
                Some(path) => (read_symbols(path)?, None),
                None => {
                    let m = file_size_with(&code, k, budget, 0)?;
                    (random_file(m, field.q as u32, seed), Some(seed))
                }
            };
            let opts = StoreOptions {
                field: Some(field),
                seed,
                budget: Some(budget),
            };
            let sys = store(&code, k, &file, &dir, &opts)?;
            let m = sys.manifest();
            outln!(
                "stored M={} symbols over GF({}) on {} nodes (k={}) in {}",
                m.m,
                m.field.q,
                m.n,
                m.k,
                dir.display()
            );
            Ok(Status::Ok)
        }
        Cmd::Reconstruct { dir, nodes, out } => {
            let sys = StoredSystem::open(&dir)?;
            let ids = node_ids(&nodes, sys.code().n())?;
            let file = sys.reconstruct(&ids)?;
            let text = symbols_text(&file);
            match out {
                Some(path) => {
                    fs::write(&path, text).map_err(|e| Error::Io { path: path.clone(), source: e })?;
                    outln!("recovered {} symbols to {}", file.len(), path.display());
                }
                None => out!("{text}"),
            }
            Ok(Status::Ok)
        }
        Cmd::Repair {
            dir,
            node,
            policy,
            dry_run,
        } => {
            let sys = StoredSystem::open(&dir)?;
            let failed = node_ids(&[node], sys.code().n())?[0];
            let plan = plan_repair(&sys, failed, policy.into())?;
            out!("{}", plan.to_text());
            if !dry_run {
                let path = execute_repair(&sys, &plan)?;
                outln!("restored {} (checksum ok)", path.display());
            }
            Ok(Status::Ok)
        }
        Cmd::Batch { code, t, max_t, format } => {
            let code = FrCode::load(&code)?;
            if max_t {
                let exact = batch_t(&code, budget)?;
                let direct = certify_all_subsets(&code, exact.t, budget)?;
                let agree = direct.certified();
                match format {
                    Format::Json => {
                        let v = serde_json::json!({ "batch": exact, "subsets": direct });
                        outln!("{}", serde_json::to_string_pretty(&v)?);
                    }
                    Format::Text => {
                        outln!("t = {}", exact.t);
                        outln!(
                            "node-set search: {} sets checked, none encloses more symbols than nodes below size {}",
                            exact.node_sets_checked,
                            exact.t + 1
                        );
                        match &exact.violation {
                            Some(w) => outln!(
                                "maximality witness: symbols {} are held by only {} nodes {}",
                                one_based_text(&w.symbols),
                                w.nodes.len(),
                                one_based_text(&w.nodes)
                            ),
                            None => outln!("every symbol set is retrievable (t = theta)"),
                        }
                        outln!(
                            "direct check: {} of {} {}-subsets retrievable",
                            if agree { "all" } else { "NOT all" },
                            direct.checked,
                            exact.t
                        );
                    }
                }
                Ok(if agree { Status::Ok } else { Status::Mismatch })
            } else {
                let t = t.expect("clap requires --t or --max-t");
                let cert = certify_all_subsets(&code, t, budget)?;
                match format {
                    Format::Json => outln!("{}", serde_json::to_string_pretty(&cert)?),
                    Format::Text => match &cert.counterexample {
                        None => outln!("t = {t}: certified ({} subsets retrievable)", cert.checked),
                        Some((set, w)) => {
                            outln!("t = {t}: not retrievable: {}", one_based_text(set));
                            outln!(
                                "witness: symbols {} are held by only {} nodes {}",
                                one_based_text(&w.symbols),
                                w.nodes.len(),
                                one_based_text(&w.nodes)
                            );
                        }
                    },
                }
                Ok(if cert.certified() { Status::Ok } else { Status::Refused })
            }
        }
        Cmd::CertifyFrb { code, k, format } => {
            let code = FrCode::load(&code)?;
            let cert = frb_certify(&code, k, budget)?;
            match format {
                Format::Text => out!("{}", cert.to_text()),
                Format::Json => outln!("{}", serde_json::to_string_pretty(&cert)?),
            }
            Ok(Status::Ok)
        }
    }
}

fn build(family: Family) -> frepkit::Result<(FrCode, Out)> {
    let graph = |g: Graph, out| Ok((from_graph(&g)?, out));
    match family {
        Family::Turan { n, r, out } => graph(turan(n, r)?, out),
        Family::Complete { n, out } => graph(complete(n)?, out),
        Family::Bipartite { alpha, out } => graph(complete_bipartite(alpha)?, out),
        Family::Cycle { n, out } => graph(cycle(n)?, out),
        Family::Cage { name, out } => graph(cage(name), out),
        Family::Graph { input, out } => graph(Graph::load(&input)?, out),
        Family::Td { rho, alpha, out } => Ok((from_design(&transversal_design(rho, alpha)?)?, out)),
        Family::Plane { q, out } => Ok((projective_plane(q)?.to_code()?, out)),
    }
}
