//! `pathlink`: construct, verify and down-link path-designs and cycle systems.
//!
//! Exit codes: 0 success or valid, 1 invalid or infeasible, 2 unknown
//! (budget exhausted, nothing cataloged), 3 usage or parse error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use pathlink::apex::{p4_decompose_two_apex, ApexInput};
use pathlink::catalog::base_design;
use pathlink::cyclic::{c4_difference_family, develop};
use pathlink::io::{
    is_witness_bundle, parse_design, parse_host_arg, parse_link_file, read_design, read_downlink,
    read_witness_bundle, serialize_design, write_design, write_witness_bundle,
};
use pathlink::linker::{
    downlink_c4, downlink_cycle_system, downlink_generic, downlink_p5, downlink_pk_design, embed_pk,
    verify_spectrum_membership, SpectrumWitness,
};
use pathlink::oracle::{find_decomposition, OracleStatus, SearchBudget};
use pathlink::spectrum::{cmd_spectrum, Membership};
use pathlink::{verify_design, verify_downlink, BlockShape, Design, Error, Host, ShapeKind, VerificationReport};

#[derive(Parser)]
#[command(name = "pathlink", version, about = "Path-designs, cycle systems and down-links to P4-designs")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for searches.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Print provenance lines prefixed with `#`.
    #[arg(long, global = true)]
    trace: bool,
    /// Output file (designs) or directory (witnesses).
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Auto,
    DifferenceFamily,
    Oracle,
}

#[derive(Subcommand)]
enum Command {
    /// Build a design on a host graph.
    Construct {
        #[arg(long)]
        shape: String,
        /// Kn, Km,n or edges:<file>.
        #[arg(long)]
        host: String,
        /// Two universal vertices `a,b`: decompose into P4s by the apex method.
        #[arg(long)]
        apex: Option<String>,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// Check a design file, a down-link file or a witness directory.
    Verify { path: PathBuf },
    /// Build a down-link from a (K_v, gamma)-design to a (K_target, P4)-design.
    Downlink {
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        v: usize,
        #[arg(long)]
        target: usize,
        /// Domain design to use instead of the built-in one.
        #[arg(long)]
        design: Option<PathBuf>,
    },
    /// Embed a (K_n, P_k)-design, k even, into K_m.
    Embed {
        #[arg(long)]
        shape: String,
        #[arg(long)]
        design: PathBuf,
        #[arg(long)]
        m: usize,
    },
    /// Exhaustive search for a decomposition.
    Oracle {
        #[arg(long)]
        shape: String,
        /// Kn, Km,n, edges:<file> or a path to an edge-list file.
        #[arg(long)]
        graph: String,
        #[arg(long)]
        max_nodes: Option<u64>,
        /// Seconds.
        #[arg(long)]
        timeout: Option<u64>,
    },
    /// Probe which orders n a (K_v, gamma)-design down-links to.
    Spectrum {
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        v: usize,
        #[arg(long)]
        n_max: usize,
    },
}

type Outcome = Result<u8, Error>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Construct { shape, host, apex, method } => construct(cli, shape, host, apex.as_deref(), *method),
        Command::Verify { path } => verify(path),
        Command::Downlink { gamma, v, target, design } => downlink(cli, gamma, *v, *target, design.as_deref()),
        Command::Embed { shape, design, m } => embed(cli, shape, design, *m),
        Command::Oracle { shape, graph, max_nodes, timeout } => oracle(cli, shape, graph, *max_nodes, *timeout),
        Command::Spectrum { gamma, v, n_max } => spectrum(cli, gamma, *v, *n_max),
    }
}

fn emit_design(cli: &Cli, d: &Design, trace: &[String]) -> Result<(), Error> {
    match &cli.output {
        Some(path) => {
            write_design(path, d)?;
            if cli.trace {
                for t in trace {
                    println!("# {t}");
                }
            }
            println!("wrote {} blocks to {}", d.blocks.len(), path.display());
        }
        None => {
            if cli.trace {
                for t in trace {
                    println!("# {t}");
                }
            }
            print!("{}", serialize_design(d));
        }
    }
    Ok(())
}

fn construct(cli: &Cli, shape: &str, host: &str, apex: Option<&str>, method: Method) -> Outcome {
    let shape = BlockShape::parse(shape)?;
    let host = parse_host_arg(host)?;
    if let Some(apex) = apex {
        if shape != BlockShape::path(4) {
            return Err(Error::Usage("--apex decomposes into P4s only".into()));
        }
        let ids: Vec<usize> = apex
            .split(',')
            .map(|t| t.trim().parse().map_err(|_| Error::Usage(format!("bad --apex {apex:?}"))))
            .collect::<Result<_, _>>()?;
        let [a, b] = ids[..] else {
            return Err(Error::Usage("--apex takes two vertices `a,b`".into()));
        };
        let r = p4_decompose_two_apex(&ApexInput::new(host.graph()?, a, b)?)?;
        let mut d = Design::new(host, shape, r.design.blocks);
        let trace: Vec<String> = r.case_trace.iter().map(|c| format!("case {c}")).collect();
        for e in &r.leftover {
            d.comments.push(format!("leftover edge {e}"));
        }
        emit_design(cli, &d, &trace)?;
        return Ok(if r.leftover.is_empty() { 0 } else { 1 });
    }
    let d = match method {
        Method::Auto => base_design(shape, &host)?,
        Method::DifferenceFamily => {
            let n = match (shape.kind, shape.k, &host) {
                (ShapeKind::Cycle, 4, Host::Complete(n)) => *n,
                _ => return Err(Error::Usage("difference families are shipped for C4 on Kv".into())),
            };
            develop(&c4_difference_family(n)?)?
        }
        Method::Oracle => {
            let budget = SearchBudget::default().with_seed(cli.seed).with_jobs(cli.jobs);
            let out = find_decomposition(&host.graph()?, shape, budget);
            match out.status {
                OracleStatus::Found => Design::new(host, shape, out.witness.unwrap().blocks),
                OracleStatus::Infeasible => {
                    println!("infeasible");
                    return Ok(1);
                }
                OracleStatus::Exhausted => {
                    println!("exhausted after {} nodes", out.nodes_explored);
                    return Ok(2);
                }
            }
        }
    };
    let trace = d.comments.clone();
    emit_design(cli, &d, &trace)?;
    Ok(0)
}

fn report(r: &VerificationReport) -> u8 {
    if r.valid() {
        println!("valid");
        0
    } else {
        for v in &r.violations {
            println!("{v}");
        }
        1
    }
}

fn verify(path: &Path) -> Outcome {
    if is_witness_bundle(path) {
        let w = read_witness_bundle(path)?;
        return Ok(report(&verify_spectrum_membership(&w)));
    }
    let text = std::fs::read_to_string(path)?;
    let first = text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#'));
    if first.is_some_and(|l| l.starts_with("downlink")) {
        parse_link_file(&text)?;
        return Ok(report(&verify_downlink(&read_downlink(path)?)));
    }
    Ok(report(&verify_design(&parse_design(&text)?)))
}

fn domain_for(gamma: BlockShape, v: usize, design: Option<&Path>) -> Result<Design, Error> {
    match design {
        Some(p) => {
            let d = read_design(p)?;
            if d.shape != gamma || d.host != Host::Complete(v) {
                return Err(Error::Usage(format!(
                    "{} holds a {} design on {}, expected {gamma} on K_{v}",
                    p.display(),
                    d.shape,
                    d.host
                )));
            }
            Ok(d)
        }
        None => base_design(gamma, &Host::Complete(v)),
    }
}

fn build_downlink(gamma: BlockShape, v: usize, target: usize, design: Option<&Path>) -> Result<SpectrumWitness, Error> {
    let direct = match (gamma.kind, gamma.k) {
        (ShapeKind::Cycle, 4) if design.is_none() => Some(downlink_c4(v, target)),
        (ShapeKind::Path, 5) if design.is_none() => Some(downlink_p5(v, target)),
        (ShapeKind::Cycle, k) if k >= 9 => Some(downlink_cycle_system(&domain_for(gamma, v, design)?, Some(target))),
        (ShapeKind::Path, k) if k >= 12 => Some(downlink_pk_design(&domain_for(gamma, v, design)?, Some(target))),
        _ => None,
    };
    match direct {
        Some(Ok(w)) => Ok(w),
        Some(Err(e)) if target < v + 2 => Err(e),
        _ => downlink_generic(&domain_for(gamma, v, design)?, target),
    }
}

fn downlink(cli: &Cli, gamma: &str, v: usize, target: usize, design: Option<&Path>) -> Outcome {
    let gamma = BlockShape::parse(gamma)?;
    let w = build_downlink(gamma, v, target, design)?;
    if cli.trace {
        for t in &w.trace {
            println!("# {t}");
        }
    }
    println!(
        "({}, K_{}) → (P4, K_{}) via {}: {} domain blocks, {} codomain blocks",
        w.gamma,
        w.v,
        w.n,
        w.theorem,
        w.downlink.domain.blocks.len(),
        w.downlink.codomain.blocks.len()
    );
    if let Some(dir) = &cli.output {
        write_witness_bundle(dir, &w)?;
        println!("wrote witness to {}", dir.display());
    }
    Ok(0)
}

fn embed(cli: &Cli, shape: &str, design: &Path, m: usize) -> Outcome {
    let shape = BlockShape::parse(shape)?;
    let d = read_design(design)?;
    if d.shape != shape {
        return Err(Error::Usage(format!("{} holds {} blocks, not {shape}", design.display(), d.shape)));
    }
    let e = embed_pk(&d, m)?;
    let mut trace = vec![format!("{}{}", e.bullet, if e.degenerate { ", degenerate" } else { "" })];
    trace.extend(e.trace.iter().cloned());
    emit_design(cli, &e.design, &trace)?;
    Ok(0)
}

fn oracle(cli: &Cli, shape: &str, graph: &str, max_nodes: Option<u64>, timeout: Option<u64>) -> Outcome {
    let shape = BlockShape::parse(shape)?;
    let host = if !graph.starts_with('K') && !graph.starts_with("edges:") {
        parse_host_arg(&format!("edges:{graph}"))?
    } else {
        parse_host_arg(graph)?
    };
    let mut budget = SearchBudget::default().with_seed(cli.seed).with_jobs(cli.jobs);
    if let Some(n) = max_nodes {
        budget = budget.with_max_nodes(n);
    }
    if let Some(s) = timeout {
        budget.max_time = Duration::from_secs(s);
    }
    let out = find_decomposition(&host.graph()?, shape, budget);
    match out.status {
        OracleStatus::Found => {
            let d = Design::new(host, shape, out.witness.unwrap().blocks);
            println!("found after {} nodes", out.nodes_explored);
            if let Some(p) = &cli.output {
                write_design(p, &d)?;
            } else {
                print!("{}", serialize_design(&d));
            }
            Ok(0)
        }
        OracleStatus::Infeasible => {
            println!("infeasible after {} nodes", out.nodes_explored);
            Ok(1)
        }
        OracleStatus::Exhausted => {
            println!("exhausted after {} nodes", out.nodes_explored);
            Ok(2)
        }
    }
}

fn spectrum(cli: &Cli, gamma: &str, v: usize, n_max: usize) -> Outcome {
    let gamma = BlockShape::parse(gamma)?;
    let r = cmd_spectrum(gamma, v, n_max)?;
    if let Some(dir) = &cli.output {
        for e in &r.entries {
            if let Membership::Witnessed(w) = &e.membership {
                write_witness_bundle(&dir.join(format!("n{}", e.n)), w)?;
            }
        }
    }
    if cli.trace {
        for e in &r.entries {
            if let Membership::Witnessed(w) = &e.membership {
                for t in &w.trace {
                    println!("# n={}: {t}", e.n);
                }
            }
        }
    }
    print!("{r}");
    if let Some(t) = r.theoretical() {
        let fmt = |xs: &[usize]| xs.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",");
        println!("witnessed   {{{}}}", fmt(&r.members()));
        println!("closed form {{{}}}", fmt(&t));
    }
    Ok(if r.consistent() { 0 } else { 1 })
}
