use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use grasslines::algebra::{format_rational, parse_rational, Rational};
use grasslines::lines::decompose;
use grasslines::pencil::{AntisymPencil, GeneralityCertificate, Parity};
use grasslines::projective::ProjLine;
use grasslines::section::{OrbitLabel, SectionSpace};
use grasslines::verify::{run_suite, Suite, VerifyOptions};
use grasslines::{seeded_rng, Error};

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_NOT_GENERAL: u8 = 2;
const EXIT_NOT_MEMBER: u8 = 3;
const EXIT_USAGE: u8 = 4;

#[derive(Parser)]
#[command(name = "grasslines", version, about = "Lines on codimension-2 linear sections of G(1,4) and G(1,5)")]
struct Cli {
    /// Output format
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,

    /// Include wall-clock timings (makes output non-deterministic)
    #[arg(long, global = true)]
    timings: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Markdown,
}

#[derive(Clone, Copy, ValueEnum)]
enum Space {
    G14,
    G15,
}

impl Space {
    fn section(self) -> SectionSpace {
        match self {
            Space::G14 => SectionSpace::g14(),
            Space::G15 => SectionSpace::g15(),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generality certificate, degenerate members and derived geometry of a pencil
    AnalyzePencil {
        /// Pencil JSON file
        #[arg(long, conflicts_with = "space", required_unless_present = "space")]
        pencil: Option<PathBuf>,
        /// Built-in normal form
        #[arg(long, value_enum)]
        space: Option<Space>,
    },
    /// Decompose the variety of lines through a point of the section
    Zx {
        #[arg(long, value_enum)]
        space: Space,
        /// Two semicolon-separated coordinate lists, e.g. "0,0,1,0,0;0,0,0,1,0"
        #[arg(long, conflicts_with = "orbit", required_unless_present = "orbit")]
        point: Option<String>,
        /// Sample a point of this orbit (o1..o4)
        #[arg(long)]
        orbit: Option<OrbitLabel>,
        #[arg(long, env = "GRASS_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Run verification suites
    Verify {
        #[arg(long, default_value = "all", value_parser = Suite::NAMES)]
        suite: String,
        /// Trial count for every sampling check
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, env = "GRASS_SEED", default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Dimension(_) | Error::InvalidInput(_) => EXIT_USAGE,
        Error::NotGeneral(_) => EXIT_NOT_GENERAL,
        Error::NotMember(_) => EXIT_NOT_MEMBER,
        _ => EXIT_VERIFY_FAILED,
    }
}

fn emit(format: Format, value: &Value, markdown: impl FnOnce() -> String) {
    let mut out = std::io::stdout().lock();
    // a closed pipe downstream is not an error worth reporting
    let _ = match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(value).expect("serializable")),
        Format::Markdown => write!(out, "{}", markdown()),
    };
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    match &cli.command {
        Command::AnalyzePencil { pencil, space } => {
            let pencil = match (pencil, space) {
                (Some(path), _) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                    AntisymPencil::from_json(&text)?
                }
                (None, Some(s)) => s.section().pencil().clone(),
                (None, None) => unreachable!("clap requires one of --pencil, --space"),
            };
            analyze_pencil(cli.format, &pencil)
        }
        Command::Zx { space, point, orbit, seed } => {
            let s = space.section();
            let x = match (point, orbit) {
                (Some(text), _) => {
                    let (p, q) = parse_point(text, s.ambient() + 1)?;
                    s.point(ProjLine::from_vectors(&p, &q)?)?
                }
                (None, Some(label)) => s.sample_orbit(*label, &mut seeded_rng(*seed))?,
                (None, None) => unreachable!("clap requires one of --point, --orbit"),
            };
            let report = decompose(&s, &x)?;
            let mut value = report.to_json_value();
            value["point"] = json!(x.to_string());
            emit(cli.format, &value, || format!("point {x}\n\n{}", report.to_markdown()));
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite, trials, seed } => {
            let suite: Suite = suite.parse()?;
            let report = run_suite(suite, VerifyOptions { seed: *seed, trials: *trials });
            emit(cli.format, &report.to_json_value(cli.timings), || report.to_markdown(cli.timings));
            if report.passed() {
                Ok(ExitCode::SUCCESS)
            } else {
                for f in report.failures() {
                    eprintln!("FAIL {}: {}\n  witness: {}", f.id, f.detail, f.witness);
                }
                Ok(ExitCode::from(EXIT_VERIFY_FAILED))
            }
        }
    }
}

/// `"a,b,…;c,d,…"` with rational entries.
fn parse_point(text: &str, len: usize) -> Result<(Vec<Rational>, Vec<Rational>), Error> {
    let parts: Vec<&str> = text.split(';').collect();
    let [p, q] = parts.as_slice() else {
        return Err(Error::Parse(format!("expected two coordinate lists separated by ';', got {text:?}")));
    };
    let parse = |s: &str| -> Result<Vec<Rational>, Error> {
        let v: Vec<Rational> = s.split(',').map(|c| parse_rational(c.trim())).collect::<Result<_, _>>()?;
        if v.len() != len {
            return Err(Error::Parse(format!("expected {len} coordinates, got {}", v.len())));
        }
        Ok(v)
    };
    Ok((parse(p)?, parse(q)?))
}

fn with_greek(s: String) -> String {
    s.replace('r', "λ").replace('s', "μ")
}

fn analyze_pencil(format: Format, pencil: &AntisymPencil) -> Result<ExitCode, Error> {
    let mut value = json!({
        "n": pencil.half(),
        "parity": pencil.parity(),
        "size": pencil.size(),
    });
    let cert = match pencil.generality_check() {
        Ok(c) => c,
        Err(v) => {
            value["general"] = json!(false);
            value["violation"] = json!({
                "reason": v.reason,
                "witness": v.witness.as_ref().map(|w| with_greek(w.to_string())),
            });
            emit(format, &value, || {
                format!("## Pencil analysis\n\nnot general: {v}\n")
            });
            return Ok(ExitCode::from(EXIT_NOT_GENERAL));
        }
    };
    value["general"] = json!(true);
    let mut md = format!(
        "## Pencil analysis\n\nsize {}, parity {}, general\n\n",
        pencil.size(),
        pencil.parity()
    );
    match &cert {
        GeneralityCertificate::Even { pfaffian, roots, residual } => {
            value["pfaffian"] = json!(with_greek(pfaffian.to_string()));
            value["roots"] = json!(roots.iter().map(|r| r.to_string()).collect::<Vec<_>>());
            value["irrational_factor"] = json!(with_greek(residual.to_string()));
            md.push_str(&format!("Pf(λA − μB) = {}\n\n", with_greek(pfaffian.to_string())));
        }
        GeneralityCertificate::Odd { subpfaffian_gcd } => {
            value["subpfaffian_gcd"] = json!(with_greek(subpfaffian_gcd.to_string()));
        }
    }
    match pencil.parity() {
        Parity::Even => match pencil.exceptional_lines() {
            Ok(members) => {
                md.push_str("| parameter | kernel |\n|---|---|\n");
                let list: Vec<Value> = members
                    .iter()
                    .map(|m| {
                        md.push_str(&format!("| {} | {} |\n", m.parameter, m.kernel));
                        json!({ "parameter": m.parameter.to_string(), "kernel": m.kernel.to_string() })
                    })
                    .collect();
                value["degenerate_members"] = json!(list);
                if let Ok(s) = SectionSpace::new(pencil.clone()) {
                    let spans: Vec<String> = s.v_spans()?.iter().map(|v| v.to_string()).collect();
                    md.push_str(&format!("\nV spans: {}\n", spans.join(", ")));
                    value["v_spans"] = json!(spans);
                }
            }
            Err(Error::IrrationalRoots { residual }) => {
                value["degenerate_members"] = Value::Null;
                md.push_str(&format!("degenerate members over an irrational factor {residual}\n"));
            }
            Err(e) => return Err(e),
        },
        Parity::Odd => {
            let forms: Vec<String> = pencil
                .center_curve_forms()?
                .iter()
                .map(|f| with_greek(f.to_string()))
                .collect();
            md.push_str(&format!("center curve c(λ:μ) = ({})\n", forms.join(" : ")));
            value["center_curve"] = json!(forms);
            let plane = pencil.center_plane()?;
            md.push_str(&format!("center plane P = {plane}\n"));
            value["center_plane"] = json!(plane.to_string());
            if let Ok(s) = SectionSpace::new(pencil.clone()) {
                let conic = s.center_conic()?;
                value["center_conic"] = json!(conic
                    .matrix()
                    .row_vecs()
                    .iter()
                    .map(|r| r.iter().map(format_rational).collect::<Vec<_>>())
                    .collect::<Vec<_>>());
            }
        }
    }
    emit(format, &value, || md);
    Ok(ExitCode::SUCCESS)
}
