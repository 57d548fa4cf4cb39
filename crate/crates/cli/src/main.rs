//! `quatspec`: spectral decomposition of skew-selfadjoint quaternion
//! matrices from the command line.
//!
//! Commands: `gen`, `check`, `decompose`, `model`, `verify`. Matrices and
//! reports are JSON with 17-significant-digit doubles; identical inputs and
//! flags produce byte-identical output. Exit codes: 0 success, 1 failed
//! invariant (`verify`), 2 input not skew-selfadjoint, 3 parse error,
//! 4 no simple spectrum (`model`).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use quatspec_core::error::Error;
use quatspec_core::genvec::{has_simple_spectrum, special_generating_vector};
use quatspec_core::io::{qmatrix_to_arrays, sha256_hex, FrameJson, MatrixFile, ModelFile, Report};
use quatspec_core::model::{build_model, verify_equivalence};
use quatspec_core::quat::{Frame, Quaternion, DEFAULT_TOL};
use quatspec_core::spectral::{spectral_data, QMatrix, SpectralData};
use quatspec_core::synth::generate;
use quatspec_core::verify::{
    decomposition_residuals, full_verification, generating_residuals,
    h_plus_decomposition_residuals,
};

const EXIT_INVARIANT: u8 = 1;
const EXIT_NOT_SKEW: u8 = 2;
const EXIT_PARSE: u8 = 3;
const EXIT_NOT_SIMPLE: u8 = 4;

#[derive(Parser)]
#[command(name = "quatspec", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct IoArgs {
    /// Matrix file to read.
    #[arg(long)]
    input: PathBuf,
    /// Report destination (stdout if omitted).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Tolerance; QUATSPEC_TOL overrides the built-in default 1e-9.
    #[arg(long)]
    tol: Option<f64>,
    /// Subfield generator as `q0,q1,q2,q3` (default: the imaginary unit i).
    #[arg(long)]
    field: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded skew-selfadjoint matrix file.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Synthesize a simple-spectrum instance with distinct atoms.
        #[arg(long)]
        simple: bool,
        /// Force an atom at zero (with --simple).
        #[arg(long)]
        zero_atom: bool,
        /// Matrix destination (stdout if omitted).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Summarize a matrix: atoms, multiplicities, simple-spectrum verdict.
    Check {
        #[command(flatten)]
        io: IoArgs,
    },
    /// Decompose into the spectral pair and report the invariant residuals.
    Decompose {
        #[command(flatten)]
        io: IoArgs,
    },
    /// Build the multiplication-operator model of a simple-spectrum matrix.
    Model {
        #[command(flatten)]
        io: IoArgs,
        /// Model destination (defaults to `<input>.model.json`).
        #[arg(long)]
        model_output: Option<PathBuf>,
    },
    /// Run the full invariant suite; exit 1 if any residual exceeds tol.
    Verify {
        #[command(flatten)]
        io: IoArgs,
        /// Seed for the randomized span probes.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn fail(code: u8, message: &str) -> ExitCode {
    eprintln!("quatspec: {message}");
    ExitCode::from(code)
}

fn resolve_tol(flag: Option<f64>) -> f64 {
    flag.or_else(|| {
        std::env::var("QUATSPEC_TOL")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(DEFAULT_TOL)
}

fn parse_field(spec: &str) -> Result<Frame, String> {
    let parts: Vec<f64> = spec
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| format!("invalid --field value: {e}"))?;
    if parts.len() != 4 {
        return Err("--field expects four comma-separated numbers".into());
    }
    Frame::from_generator(Quaternion::new(parts[0], parts[1], parts[2], parts[3]))
        .map_err(|e| format!("invalid --field value: {e}"))
}

fn resolve_frame(field: &Option<String>) -> Result<Frame, String> {
    match field {
        Some(spec) => parse_field(spec),
        None => Ok(Frame::complex()),
    }
}

fn write_out(path: &Option<PathBuf>, contents: &str) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, contents).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            println!("{contents}");
            Ok(())
        }
    }
}

struct LoadedMatrix {
    matrix: QMatrix,
    input_sha256: String,
}

fn load_matrix(path: &Path) -> Result<LoadedMatrix, String> {
    let bytes = std::fs::read(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| format!("{e}"))?;
    let file = MatrixFile::parse(&text).map_err(|e| format!("{e}"))?;
    let matrix = file.to_matrix().map_err(|e| format!("{e}"))?;
    Ok(LoadedMatrix {
        matrix,
        input_sha256: sha256_hex(&bytes),
    })
}

fn report_skeleton(input_sha256: String, frame: &Frame, sd: &SpectralData, tol: f64) -> Report {
    Report {
        input_sha256,
        frame: FrameJson::from_frame(frame),
        atoms: sd.atom_values(),
        h_ranks: sd.h_ranks(),
        simple: false,
        weights: None,
        j_action: None,
        residuals: BTreeMap::new(),
        pass: false,
        tolerance: tol,
    }
}

fn finish_report(mut report: Report, residuals: Vec<(String, f64)>, tol: f64) -> Report {
    report.residuals = residuals.into_iter().collect();
    report.pass = report.residuals.values().all(|&v| v <= tol);
    report
}

fn cmd_gen(
    n: usize,
    seed: u64,
    simple: bool,
    zero_atom: bool,
    output: Option<PathBuf>,
) -> ExitCode {
    if n == 0 {
        return fail(EXIT_PARSE, "--n must be at least 1");
    }
    let matrix = generate(n, seed, simple, zero_atom);
    let json = MatrixFile::from_matrix(&matrix).to_json();
    match write_out(&output, &json) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(EXIT_PARSE, &e),
    }
}

fn cmd_check(io: IoArgs) -> ExitCode {
    let tol = resolve_tol(io.tol);
    let frame = match resolve_frame(&io.field) {
        Ok(f) => f,
        Err(e) => return fail(EXIT_PARSE, &e),
    };
    let loaded = match load_matrix(&io.input) {
        Ok(l) => l,
        Err(e) => return fail(EXIT_PARSE, &e),
    };
    let sd = match spectral_data(&loaded.matrix, &frame, tol) {
        Ok(sd) => sd,
        Err(Error::NotSkewSelfadjoint { defect }) => {
            return fail(
                EXIT_NOT_SKEW,
                &format!("input is not skew-selfadjoint (defect {defect:.3e})"),
            );
        }
        Err(e) => return fail(EXIT_PARSE, &format!("{e}")),
    };
    let a = &loaded.matrix;
    let skew = a.add(&a.adjoint()).frob_norm() / 1.0_f64.max(a.frob_norm());
    let mut report = report_skeleton(loaded.input_sha256, &frame, &sd, tol);
    report.simple = has_simple_spectrum(&sd, tol);
    let report = finish_report(report, vec![("skew_selfadjoint".into(), skew)], tol);
    match write_out(&io.output, &report.to_json()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(EXIT_PARSE, &e),
    }
}

fn cmd_decompose(io: IoArgs) -> ExitCode {
    let tol = resolve_tol(io.tol);
    let frame = match resolve_frame(&io.field) {
        Ok(f) => f,
        Err(e) => return fail(EXIT_PARSE, &e),
    };
    let loaded = match load_matrix(&io.input) {
        Ok(l) => l,
        Err(e) => return fail(EXIT_PARSE, &e),
    };
    let sd = match spectral_data(&loaded.matrix, &frame, tol) {
        Ok(sd) => sd,
        Err(Error::NotSkewSelfadjoint { defect }) => {
            return fail(
                EXIT_NOT_SKEW,
                &format!("input is not skew-selfadjoint (defect {defect:.3e})"),
            );
        }
        Err(e) => return fail(EXIT_PARSE, &format!("{e}")),
    };
    let mut residuals = decomposition_residuals(&loaded.matrix, &sd);
    residuals.extend(h_plus_decomposition_residuals(&sd, tol));
    let mut report = report_skeleton(loaded.input_sha256, &frame, &sd, tol);
    report.simple = has_simple_spectrum(&sd, tol);
    report.j_action = Some(qmatrix_to_arrays(&sd.j().to_qmatrix()));
    let report = finish_report(report, residuals, tol);
    match write_out(&io.output, &report.to_json()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(EXIT_PARSE, &e),
    }
}

fn cmd_model(io: IoArgs, model_output: Option<PathBuf>) -> ExitCode {
    let tol = resolve_tol(io.tol);
    let frame = match resolve_frame(&io.field) {
        Ok(f) => f,
        Err(e) => return fail(EXIT_PARSE, &e),
    };
    let loaded = match load_matrix(&io.input) {
        Ok(l) => l,
        Err(e) => return fail(EXIT_PARSE, &e),
    };
    let sd = match spectral_data(&loaded.matrix, &frame, tol) {
        Ok(sd) => sd,
        Err(Error::NotSkewSelfadjoint { defect }) => {
            return fail(
                EXIT_NOT_SKEW,
                &format!("input is not skew-selfadjoint (defect {defect:.3e})"),
            );
        }
        Err(e) => return fail(EXIT_PARSE, &format!("{e}")),
    };
    if !has_simple_spectrum(&sd, tol) {
        return fail(EXIT_NOT_SIMPLE, "input does not have a simple spectrum");
    }
    let gv = match special_generating_vector(&sd, tol) {
        Ok(gv) => gv,
        Err(e) => return fail(EXIT_NOT_SIMPLE, &format!("{e}")),
    };
    let model = match build_model(&sd, &gv, tol) {
        Ok(m) => m,
        Err(e) => return fail(EXIT_NOT_SIMPLE, &format!("{e}")),
    };
    let equivalence = match verify_equivalence(&loaded.matrix, &sd, &model, tol) {
        Ok(r) => r,
        Err(e) => return fail(EXIT_PARSE, &format!("{e}")),
    };

    let model_path = model_output.unwrap_or_else(|| {
        let mut os = io.input.clone().into_os_string();
        os.push(".model.json");
        PathBuf::from(os)
    });
    if let Err(e) = std::fs::write(&model_path, ModelFile::from_model(&model).to_json()) {
        return fail(EXIT_PARSE, &format!("{}: {e}", model_path.display()));
    }

    let mut residuals = generating_residuals(&sd, &gv, tol);
    for (name, value) in equivalence.residuals() {
        residuals.push((name.into(), value));
    }
    let mut report = report_skeleton(loaded.input_sha256, &frame, &sd, tol);
    report.simple = true;
    report.weights = Some(model.measure().weights().to_vec());
    report.j_action = Some(qmatrix_to_arrays(&sd.j().to_qmatrix()));
    let report = finish_report(report, residuals, tol);
    match write_out(&io.output, &report.to_json()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(EXIT_PARSE, &e),
    }
}

fn cmd_verify(io: IoArgs, seed: u64) -> ExitCode {
    let tol = resolve_tol(io.tol);
    let frame = match resolve_frame(&io.field) {
        Ok(f) => f,
        Err(e) => return fail(EXIT_PARSE, &e),
    };
    let loaded = match load_matrix(&io.input) {
        Ok(l) => l,
        Err(e) => return fail(EXIT_PARSE, &e),
    };
    let outcome = match full_verification(&loaded.matrix, &frame, tol, seed) {
        Ok(o) => o,
        Err(e) => return fail(EXIT_PARSE, &format!("{e}")),
    };
    let report = Report {
        input_sha256: loaded.input_sha256,
        frame: FrameJson::from_frame(&frame),
        atoms: outcome.atoms,
        h_ranks: outcome.h_ranks,
        simple: outcome.simple,
        weights: outcome.weights,
        j_action: outcome.j_action.as_ref().map(qmatrix_to_arrays),
        residuals: outcome.residuals.into_iter().collect(),
        pass: outcome.pass,
        tolerance: tol,
    };
    if let Err(e) = write_out(&io.output, &report.to_json()) {
        return fail(EXIT_PARSE, &e);
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_INVARIANT)
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Gen {
            n,
            seed,
            simple,
            zero_atom,
            output,
        } => cmd_gen(n, seed, simple, zero_atom, output),
        Command::Check { io } => cmd_check(io),
        Command::Decompose { io } => cmd_decompose(io),
        Command::Model { io, model_output } => cmd_model(io, model_output),
        Command::Verify { io, seed } => cmd_verify(io, seed),
    }
}
