use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use ornlat::count::{count_popk_images, gf_coefficients};
use ornlat::image::{
    find_hugs, in_popk_image_chain, pop_preimage, popk_necessary, popk_preimage_chain, tamari_popk_report,
};
use ornlat::io::{from_json, to_json};
use ornlat::lattice::{enumerate_lattice, LatticeGraph};
use ornlat::rank::{build_delta_dagger, forward_orbit, max_orbit_size};
use ornlat::verify::{run_all, run_suite, VerifyOptions};
use ornlat::{Error, Execution, GSequence, Ornamentation, RootedPlaneTree};

/// Ornamentation lattices of rooted plane trees and the pop-stack operator.
#[derive(Parser)]
#[command(name = "ornlat", version)]
struct Cli {
    /// Worker threads for parallel work (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tree utilities.
    Tree {
        #[command(subcommand)]
        action: TreeAction,
    },
    /// Enumerate the ornamentation lattice of a tree.
    Enumerate {
        #[arg(long)]
        tree: String,
        /// Write the Hasse diagram in DOT format to this path (`-` for stdout).
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        count_only: bool,
    },
    /// Apply Pop a number of times.
    Pop {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        times: usize,
    },
    /// Print the forward Pop orbit and its size.
    Orbit {
        #[arg(long)]
        input: PathBuf,
    },
    /// Maximum forward orbit size of Pop on a tree's lattice.
    MaxOrbit {
        #[arg(long)]
        tree: String,
        /// Also compute the value by brute force and compare.
        #[arg(long)]
        oracle: bool,
    },
    /// Emit the extremal ornamentation with the longest orbit.
    Dagger {
        #[arg(long)]
        tree: String,
    },
    /// Decide membership in the image of Pop^k.
    Image {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Emit an ornamentation mapping onto the input.
        #[arg(long)]
        preimage: bool,
    },
    /// Size of the Pop^k image on the chain with N nodes.
    Count {
        #[arg(long)]
        chain: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Method::Recurrence)]
        method: Method,
        /// Print every value from 0 to N, one per line.
        #[arg(long)]
        series: bool,
    },
    /// Run the self-verification suites.
    Verify {
        #[arg(long)]
        max_nodes: Option<usize>,
        #[arg(long)]
        suite: Option<String>,
    },
}

#[derive(Subcommand)]
enum TreeAction {
    /// Check a parenthesis string and print it back in canonical form.
    Validate { tree: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Recurrence,
    Gf,
    Brute,
}

/// How a command failed, mapped to the process exit code.
enum Failure {
    Input(String),
    Negative(String),
    Integrity(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Integrity(m) => Failure::Integrity(m),
            other => Failure::Input(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let mut out = io::stdout().lock();
    let result = run(cli.command, &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Negative(m)) => {
            eprintln!("{m}");
            ExitCode::from(3)
        }
        Err(Failure::Integrity(m)) => {
            eprintln!("integrity failure: {m}");
            ExitCode::from(1)
        }
    }
}

/// Accepts a parenthesis string or `C_n` for the chain with `n` nodes.
fn parse_tree(text: &str) -> Result<Arc<RootedPlaneTree>, Failure> {
    let tree = match text.strip_prefix("C_") {
        Some(n) => {
            let n: usize = n.parse().map_err(|_| Failure::Input(format!("bad chain size in `{text}`")))?;
            RootedPlaneTree::chain(n)?
        }
        None => RootedPlaneTree::parse(text)?,
    };
    Ok(Arc::new(tree))
}

fn read_ornamentation(path: &Path) -> Result<Ornamentation, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(from_json(&text)?)
}

fn io_err(e: io::Error) -> Failure {
    Failure::Input(e.to_string())
}

fn run(command: Command, out: &mut impl Write) -> Outcome {
    match command {
        Command::Tree { action: TreeAction::Validate { tree } } => {
            let t = parse_tree(&tree)?;
            writeln!(out, "{}", t.render()).map_err(io_err)?;
        }
        Command::Enumerate { tree, dot, count_only } => {
            let lattice = enumerate_lattice(&parse_tree(&tree)?)?;
            if count_only {
                writeln!(out, "{}", lattice.len()).map_err(io_err)?;
            } else if dot.is_none() {
                for e in lattice.elements() {
                    writeln!(out, "{}", to_json(e)).map_err(io_err)?;
                }
            }
            match dot {
                Some(p) if p.as_os_str() == "-" => out.write_all(lattice.to_dot().as_bytes()).map_err(io_err)?,
                Some(p) => fs::write(&p, lattice.to_dot()).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?,
                None => {}
            }
        }
        Command::Pop { input, times } => {
            let d = read_ornamentation(&input)?;
            writeln!(out, "{}", to_json(&d.pop_times(times))).map_err(io_err)?;
        }
        Command::Orbit { input } => {
            let orbit = forward_orbit(&read_ornamentation(&input)?)?;
            for d in &orbit {
                writeln!(out, "{}", to_json(d)).map_err(io_err)?;
            }
            writeln!(out, "{}", orbit.len()).map_err(io_err)?;
        }
        Command::MaxOrbit { tree, oracle } => {
            let t = parse_tree(&tree)?;
            let value = max_orbit_size(&t)?;
            writeln!(out, "{value}").map_err(io_err)?;
            if oracle {
                let brute = enumerate_lattice(&t)?.brute_max_orbit();
                writeln!(out, "{brute}").map_err(io_err)?;
                if brute != value {
                    return Err(Failure::Integrity(format!("formula gives {value}, brute force gives {brute} on {t}")));
                }
            }
        }
        Command::Dagger { tree } => {
            let t = parse_tree(&tree)?;
            let d = build_delta_dagger(&t)?;
            let size = forward_orbit(&d.delta)?.len();
            if size != d.orbit_size() {
                return Err(Failure::Integrity(format!(
                    "δ† on {t} has orbit size {size}, predicted {}",
                    d.orbit_size()
                )));
            }
            writeln!(out, "{}", to_json(&d.delta)).map_err(io_err)?;
            writeln!(out, "{size}").map_err(io_err)?;
        }
        Command::Image { input, k, preimage } => image(&read_ornamentation(&input)?, k, preimage, out)?,
        Command::Count { chain, k, method, series } => {
            let first = if series { 0 } else { chain };
            let values: Vec<BigUint> = match method {
                Method::Recurrence => (first..=chain).map(|n| count_popk_images(n, k)).collect(),
                Method::Gf => gf_coefficients(k, chain)?.split_off(first),
                Method::Brute => (first..=chain).map(|n| brute_count(n, k)).collect::<Result<_, _>>()?,
            };
            for v in values {
                writeln!(out, "{v}").map_err(io_err)?;
            }
        }
        Command::Verify { max_nodes, suite } => {
            let opts = VerifyOptions { max_nodes, exec: Execution::default() };
            let reports = match suite {
                Some(name) => vec![run_suite(&name, opts)?],
                None => run_all(opts)?,
            };
            for r in &reports {
                writeln!(out, "{r}").map_err(io_err)?;
            }
            let failed: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.name).collect();
            if !failed.is_empty() {
                return Err(Failure::Negative(format!("failed suites: {}", failed.join(", "))));
            }
        }
    }
    Ok(())
}

fn brute_count(n: usize, k: usize) -> Result<BigUint, Failure> {
    if n == 0 {
        return Ok(BigUint::from(1u32));
    }
    let lattice = enumerate_lattice(&Arc::new(RootedPlaneTree::chain(n)?))?;
    Ok(BigUint::from(lattice.brute_popk_image(k).len()))
}

fn image(d: &Ornamentation, k: usize, want_preimage: bool, out: &mut impl Write) -> Outcome {
    let tree = d.tree();
    let pre: Option<Ornamentation> = if k == 0 {
        Some(d.clone())
    } else if k == 1 {
        if let Some(h) = find_hugs(d).first() {
            return Err(Failure::Negative(format!("not in the image of Pop: {}", h.describe(d))));
        }
        want_preimage.then(|| pop_preimage(d)).transpose()?
    } else if tree.is_chain() {
        if !in_popk_image_chain(d, k)? {
            let g = GSequence::from_ornamentation(d)?;
            let report = tamari_popk_report(&g, k);
            let reasons: Vec<String> =
                report.failures.iter().map(|f| format!("{}: {}", f.condition, f.detail)).collect();
            return Err(Failure::Negative(format!("not in the image of Pop^{k}: {}", reasons.join("; "))));
        }
        want_preimage.then(|| popk_preimage_chain(&GSequence::from_ornamentation(d)?, k)).transpose()?
    } else {
        let report = popk_necessary(d, k)?;
        if !report.passed() {
            let reasons: Vec<String> =
                report.failures.iter().map(|f| format!("{}: {}", f.condition, f.detail)).collect();
            return Err(Failure::Negative(format!("not in the image of Pop^{k}: {}", reasons.join("; "))));
        }
        if !want_preimage {
            writeln!(out, "inconclusive").map_err(io_err)?;
            return Ok(());
        }
        // The necessary conditions hold; settle membership by search.
        let lattice: LatticeGraph = enumerate_lattice(d.tree_arc())?;
        match lattice.elements().iter().find(|x| x.pop_times(k) == *d) {
            Some(x) => Some(x.clone()),
            None => {
                return Err(Failure::Negative(format!(
                    "not in the image of Pop^{k}: passes rank, hug and bead conditions but has no preimage"
                )))
            }
        }
    };
    writeln!(out, "member").map_err(io_err)?;
    if let Some(p) = pre.filter(|_| want_preimage) {
        if p.pop_times(k) != *d {
            return Err(Failure::Integrity(format!("preimage {} does not map onto {}", p.label(), d.label())));
        }
        writeln!(out, "{}", to_json(&p)).map_err(io_err)?;
    }
    Ok(())
}
