//! Command-line front end for the dbp-hilbert toolkit: dimension tables,
//! block decompositions, Hamiltonian and operator exports, spectra, and
//! memory-scaling reports.
//!
//! Data artifacts are deterministic: identical invocations produce
//! byte-identical files (run metadata goes to a `.meta.json` sidecar, never
//! into the data). Exit codes: 0 success, 2 domain error (bad input),
//! 3 integrity error (a verification step failed).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use dbp_hilbert::blocks::{
    annihilation_image, count_dimensions, decompose_desired, support_counts_capped,
    DEFAULT_VERIFY_CAP,
};
use dbp_hilbert::fermiops::{build_operator_matrix, OperatorKind};
use dbp_hilbert::fockspace::{Basis, HoleSpinPattern, Spin, SpinOrbital};
use dbp_hilbert::hubbard::{build_hamiltonian, HubbardParams, ParamsDocument};
use dbp_hilbert::memmodel::{
    hamiltonian_basis_report, number_operator_report, state_storage_report, MatrixMode,
    MemoryModel, MemoryReport,
};
use dbp_hilbert::spectra::{eigen_spectrum, EIGEN_RESIDUAL_TOL};
use dbp_hilbert::ErrorKind;

#[derive(Debug, Parser)]
#[command(name = "dbp-hilbert")]
#[command(about = "Fock-space analysis of dangling-bond-pair charge-qubit arrays")]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print total, desired, and undesired dimensions of the 3N-electron sector
    Dims {
        #[arg(long)]
        qubits: usize,
    },

    /// Emit the dimension and support tables for 1..=N as CSV
    Blocks {
        #[arg(long)]
        qubits: usize,

        /// Re-derive every count by brute-force reachability
        #[arg(long)]
        verify: bool,

        /// Largest N the brute-force pass will accept
        #[arg(long, default_value_t = DEFAULT_VERIFY_CAP)]
        verify_cap: usize,

        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Emit the support counts of the (3N-1)-electron sector for one N
    Support {
        #[arg(long)]
        qubits: usize,

        #[arg(long)]
        verify: bool,

        #[arg(long, default_value_t = DEFAULT_VERIFY_CAP)]
        verify_cap: usize,

        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Build the Hamiltonian and write it in Matrix Market format
    Hamiltonian {
        #[arg(long)]
        qubits: usize,

        /// JSON parameter document; defaults to the decoupled-pair preset
        #[arg(long)]
        params: Option<PathBuf>,

        /// Basis to build on
        #[arg(long, value_enum, default_value_t = SectorChoice::Desired)]
        sector: SectorChoice,

        /// Count each inter-site Coulomb pair in both orders
        #[arg(long)]
        w_double_count: bool,

        #[arg(long)]
        out: PathBuf,
    },

    /// Diagonalize the desired-sector Hamiltonian and print the spectrum
    Spectrum {
        #[arg(long)]
        qubits: usize,

        #[arg(long)]
        params: Option<PathBuf>,

        /// Diagonalize each hole-spin block separately
        #[arg(long)]
        per_block: bool,

        #[arg(long)]
        w_double_count: bool,

        /// Eigenpair residual tolerance (eV)
        #[arg(long, default_value_t = EIGEN_RESIDUAL_TOL)]
        tol: f64,

        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Emit the memory-scaling reports for 1..=N as CSV
    Memory {
        #[arg(long)]
        qubits: usize,

        #[arg(long, default_value_t = 16)]
        bytes_per_amplitude: u64,

        #[arg(long, default_value_t = 20)]
        bytes_per_triplet: u64,

        #[arg(long, value_enum, default_value_t = MatrixModeChoice::Dense)]
        matrix_mode: MatrixModeChoice,

        /// Price states as packed bitstrings instead of amplitudes
        #[arg(long)]
        bitstring_storage: bool,

        #[arg(long)]
        out: Option<PathBuf>,

        /// Also write one two-column file per series into this directory
        #[arg(long)]
        gnuplot_dir: Option<PathBuf>,
    },

    /// Write one ladder or number operator in Matrix Market format
    Export(ExportArgs),
}

#[derive(Debug, Args)]
struct ExportArgs {
    #[arg(long)]
    qubits: usize,

    #[arg(long, value_enum)]
    kind: KindChoice,

    /// Linear spin-orbital index in [0, 4N)
    #[arg(long)]
    orbital: usize,

    /// Domain basis (creation runs from the sector below it)
    #[arg(long, value_enum, default_value_t = DomainChoice::Desired)]
    domain: DomainChoice,

    /// Hole-spin pattern such as `ud` restricting the domain to one block
    #[arg(long)]
    block: Option<String>,

    /// Codomain for ladder operators
    #[arg(long, value_enum, default_value_t = CodomainChoice::Full)]
    codomain: CodomainChoice,

    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SectorChoice {
    /// The 4^N desired states
    Desired,
    /// The whole 3N-electron sector
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MatrixModeChoice {
    Dense,
    Triplet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum KindChoice {
    Annihilation,
    Creation,
    Number,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DomainChoice {
    Desired,
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CodomainChoice {
    /// The whole adjacent sector
    Full,
    /// Only the states actually reachable from the domain
    Reachable,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = match err.downcast_ref::<dbp_hilbert::Error>() {
                Some(e) if e.kind() == ErrorKind::Integrity => 3,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Dims { qubits } => {
            let table = count_dimensions(qubits)?;
            println!("{},{},{}", table.total, table.desired, table.undesired);
            Ok(())
        }
        Command::Blocks {
            qubits,
            verify,
            verify_cap,
            out,
        } => {
            ensure_pairs(qubits)?;
            let mut body = String::new();
            for n in 1..=qubits {
                let dims = count_dimensions(n)?;
                let support = support_counts_capped(n, verify, verify_cap)?;
                let _ = writeln!(
                    body,
                    "{},{},{},{},{},{},{},{},{},{}",
                    n,
                    dims.total,
                    dims.desired,
                    dims.undesired,
                    support.total_lower,
                    support.desired_reachable,
                    support.per_block,
                    support.shared,
                    support.unshared,
                    support.verified
                );
            }
            let header = "n,total,desired,undesired,total_lower,desired_reachable,per_block,shared,unshared,verified\n";
            emit_csv(header, &body, out.as_deref(), "block tables")
        }
        Command::Support {
            qubits,
            verify,
            verify_cap,
            out,
        } => {
            let c = support_counts_capped(qubits, verify, verify_cap)?;
            let body = format!(
                "{},{},{},{},{},{},{},{}\n",
                c.n_pairs,
                c.total_lower,
                c.desired_reachable,
                c.undesired_lower,
                c.per_block,
                c.shared,
                c.unshared,
                c.verified
            );
            let header = "n,total_lower,desired_reachable,undesired_lower,per_block,shared,unshared,verified\n";
            emit_csv(header, &body, out.as_deref(), "support counts")
        }
        Command::Hamiltonian {
            qubits,
            params,
            sector,
            w_double_count,
            out,
        } => {
            let params = load_params(qubits, params.as_deref(), w_double_count)?;
            let basis = match sector {
                SectorChoice::Desired => Basis::desired(qubits)?,
                SectorChoice::Full => Basis::sector(qubits, 3 * qubits, None)?,
            };
            let h = build_hamiltonian(&params, &basis)?;
            write_artifact(&out, &h.to_matrix_market())?;
            println!(
                "hamiltonian {}x{} nnz={} -> {}",
                h.n_rows(),
                h.n_cols(),
                h.nnz(),
                out.display()
            );
            Ok(())
        }
        Command::Spectrum {
            qubits,
            params,
            per_block,
            w_double_count,
            tol,
            out,
        } => {
            let params = load_params(qubits, params.as_deref(), w_double_count)?;
            let mut body = String::new();
            let mut index = 0usize;
            if per_block {
                let decomposition = decompose_desired(qubits)?;
                for b in 0..decomposition.n_blocks() {
                    let pattern = decomposition.pattern(b).to_string();
                    let block_basis = decomposition.block_basis(b);
                    let h = build_hamiltonian(&params, &block_basis)?;
                    let spectrum = eigen_spectrum(&h, tol)?;
                    for value in spectrum.eigenvalues {
                        let _ = writeln!(body, "{index},{value},{pattern}");
                        index += 1;
                    }
                }
            } else {
                let basis = Basis::desired(qubits)?;
                let h = build_hamiltonian(&params, &basis)?;
                let spectrum = eigen_spectrum(&h, tol)?;
                for value in spectrum.eigenvalues {
                    let _ = writeln!(body, "{index},{value},all");
                    index += 1;
                }
            }
            emit_csv("index,value_eV,block_label\n", &body, out.as_deref(), "spectrum")
        }
        Command::Memory {
            qubits,
            bytes_per_amplitude,
            bytes_per_triplet,
            matrix_mode,
            bitstring_storage,
            out,
            gnuplot_dir,
        } => {
            ensure_pairs(qubits)?;
            let model = MemoryModel {
                bytes_per_amplitude,
                bytes_per_triplet,
                matrix_mode: match matrix_mode {
                    MatrixModeChoice::Dense => MatrixMode::Dense,
                    MatrixModeChoice::Triplet => MatrixMode::Triplet,
                },
                bitstring_storage,
            };
            let reports = [
                state_storage_report(1..=qubits, &model)?,
                hamiltonian_basis_report(1..=qubits, &model)?,
                number_operator_report(1..=qubits, &model)?,
            ];
            let mut body = String::new();
            for report in &reports {
                for row in report.rows() {
                    let _ = writeln!(
                        body,
                        "{},{},{},{}",
                        row.n_pairs, row.quantity, row.count, row.bytes
                    );
                }
            }
            if let Some(dir) = &gnuplot_dir {
                fs::create_dir_all(dir)
                    .with_context(|| format!("creating {}", dir.display()))?;
                write_gnuplot_series(dir, &reports)?;
            }
            emit_csv("n,quantity,count,bytes\n", &body, out.as_deref(), "memory report")
        }
        Command::Export(args) => run_export(args),
    }
}

fn run_export(args: ExportArgs) -> Result<()> {
    let n = args.qubits;
    if args.orbital >= 4 * n {
        anyhow::bail!("orbital {} out of range for {} spin-orbitals", args.orbital, 4 * n);
    }
    let orbital = SpinOrbital::from_linear_index(args.orbital);

    let upper = match (&args.block, args.domain) {
        (Some(pattern), _) => Basis::hole_spin_block(&parse_pattern(pattern, n)?)?,
        (None, DomainChoice::Desired) => Basis::desired(n)?,
        (None, DomainChoice::Full) => Basis::sector(n, 3 * n, None)?,
    };

    let op = match args.kind {
        KindChoice::Number => {
            build_operator_matrix(OperatorKind::Number, &orbital, &upper, &upper)?
        }
        KindChoice::Annihilation | KindChoice::Creation => {
            let codomain = match args.codomain {
                CodomainChoice::Full => Basis::sector(n, 3 * n - 1, None)?,
                CodomainChoice::Reachable => annihilation_image(&upper)?,
            };
            let annihilation =
                build_operator_matrix(OperatorKind::Annihilation, &orbital, &upper, &codomain)?;
            match args.kind {
                KindChoice::Annihilation => annihilation,
                // the projected adjoint: transpose of the restricted matrix
                KindChoice::Creation => annihilation.transpose(),
                KindChoice::Number => unreachable!(),
            }
        }
    };

    write_artifact(&args.out, &op.to_matrix_market())?;
    println!(
        "{} {}x{} nnz={} -> {}",
        op.name(),
        op.n_rows(),
        op.n_cols(),
        op.nnz(),
        args.out.display()
    );
    Ok(())
}

fn ensure_pairs(qubits: usize) -> Result<()> {
    if qubits == 0 {
        return Err(dbp_hilbert::Error::ZeroPairs.into());
    }
    Ok(())
}

fn parse_pattern(text: &str, n_pairs: usize) -> Result<HoleSpinPattern> {
    if text.len() != n_pairs {
        anyhow::bail!("pattern '{text}' must have one entry per pair ({n_pairs})");
    }
    let spins = text
        .chars()
        .map(|c| match c {
            'u' => Ok(Spin::Up),
            'd' => Ok(Spin::Down),
            other => anyhow::bail!("pattern character '{other}' must be 'u' or 'd'"),
        })
        .collect::<Result<Vec<Spin>>>()?;
    Ok(HoleSpinPattern::new(spins))
}

fn load_params(
    qubits: usize,
    path: Option<&Path>,
    w_double_count: bool,
) -> Result<HubbardParams> {
    let mut params = match path {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let doc = ParamsDocument::parse(&text)?;
            if doc.n_pairs != qubits {
                anyhow::bail!(
                    "parameter document is for {} pairs, --qubits says {}",
                    doc.n_pairs,
                    qubits
                );
            }
            doc.resolve()?
        }
        None => HubbardParams::ideal_array(qubits)?,
    };
    if w_double_count {
        params.set_w_double_count(true);
    }
    Ok(params)
}

/// Print rows to stdout, or write header + rows to a file and print a
/// one-line summary.
fn emit_csv(header: &str, body: &str, out: Option<&Path>, what: &str) -> Result<()> {
    match out {
        None => {
            print!("{body}");
            Ok(())
        }
        Some(path) => {
            write_artifact(path, &format!("{header}{body}"))?;
            println!("{what} -> {}", path.display());
            Ok(())
        }
    }
}

fn write_gnuplot_series(dir: &Path, reports: &[MemoryReport; 3]) -> Result<()> {
    for report in reports {
        let mut quantities: Vec<&str> = report.rows().iter().map(|r| r.quantity).collect();
        quantities.dedup();
        for quantity in quantities {
            let path = dir.join(format!("{quantity}.dat"));
            write_artifact(&path, &report.to_gnuplot_series(quantity))?;
        }
    }
    Ok(())
}

/// Write a data artifact plus its metadata sidecar. The artifact itself
/// carries no run metadata, so identical configurations are byte-identical.
fn write_artifact(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))?;
    let args: Vec<String> = std::env::args().collect();
    let sidecar = serde_json::json!({
        "tool": "dbp-hilbert",
        "version": env!("CARGO_PKG_VERSION"),
        "argv": args,
    });
    let meta_path = sidecar_path(path);
    fs::write(&meta_path, format!("{sidecar:#}\n"))
        .with_context(|| format!("writing {}", meta_path.display()))?;
    Ok(())
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".meta.json");
    path.with_file_name(name)
}
