//! Command-line front end: curve/pair/homotopy I/O, every library
//! operation as a subcommand, an example-suite runner, and SVG rendering
//! of profile curves.
//!
//! Exit codes: 0 success, 2 domain/obstruction errors, 3 numerical
//! failure, 4 malformed JSON input (with position info on stderr).
//! Reports go to stdout as JSON with all floats printed to 17
//! significant digits; diagnostics go to stderr.

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use shskit::catalog::{self, HomotopyVerdict, Manifold, NamedPair};
use shskit::curve::ProfileCurve;
use shskit::error::Error;
use shskit::homotopy::{self, CobordismForm, StableHomotopy};
use shskit::monotone::{self, MonotonePath};
use shskit::shs::{self, ShsPair};
use shskit::stabilize::{self, BoundaryData};
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "shskit", version, about = "Stable Hamiltonian structures on profile curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ManifoldArg {
    S3,
    T3,
}

#[derive(Subcommand)]
enum Command {
    /// Check the stabilization conditions of a pair.
    Verify {
        #[arg(long)]
        pair: PathBuf,
    },
    /// Proportionality, deformation bounds, helicity, and rational census.
    Invariants {
        #[arg(long)]
        pair: PathBuf,
        #[arg(long, default_value_t = 8)]
        q_max: u32,
    },
    /// Synthesize a stabilizer for a curve; prints the resulting pair.
    Stabilize {
        #[arg(long)]
        curve: PathBuf,
        /// Scale of the special boundary germs.
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        /// Germ width; with it, boundary-value synthesis instead of the
        /// global special solution.
        #[arg(long)]
        eps: Option<f64>,
        /// Use the constant-slope construction with this matching width.
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Connect two curves of equal winding by a stable homotopy.
    Connect {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
    },
    /// Constants (A, B, delta, L) of a stable homotopy.
    Length {
        #[arg(long)]
        homotopy: PathBuf,
    },
    /// Build the cobordism of a short homotopy.
    Cobordism {
        #[arg(long)]
        homotopy: PathBuf,
        /// Fold into the back-and-forth construction (needs L < 1/3).
        #[arg(long)]
        triple: bool,
        /// Write the density grid as CSV to this path.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Print the full form (homotopy, profile, grid) instead of the
        /// summary.
        #[arg(long)]
        full: bool,
    },
    /// Monotone-path checks, the winding obstruction, and the
    /// symplectization embedding.
    Monotone {
        /// Path JSON; mutually exclusive with --exotic.
        #[arg(long, conflicts_with = "exotic")]
        path: Option<PathBuf>,
        /// Use the built-in exotic ball path.
        #[arg(long)]
        exotic: bool,
        /// Print the path itself instead of its check report.
        #[arg(long)]
        emit_path: bool,
        /// Check the winding obstruction from the path's first curve (or
        /// this file's curve with --winding-from) to this curve.
        #[arg(long)]
        winding_to: Option<PathBuf>,
        #[arg(long, requires = "winding_to")]
        winding_from: Option<PathBuf>,
        /// Check the symplectization embedding of a single curve.
        #[arg(long)]
        embed: Option<PathBuf>,
    },
    /// Classify a pair by binding signs and winding number.
    Classify {
        #[arg(long)]
        pair: PathBuf,
        #[arg(long, value_enum)]
        manifold: ManifoldArg,
        /// Relative end-germ width used by the standardization.
        #[arg(long)]
        eps: Option<f64>,
        /// Decide homotopy to a second pair and print the verdict.
        #[arg(long)]
        against: Option<PathBuf>,
    },
    /// Emit a named example pair as JSON.
    Catalog {
        /// A name like `standard_contact`, or full JSON such as
        /// `{"name":"s3_canonical","s0":"+","s1":"-","w":1}`.
        #[arg(long, required_unless_present = "list")]
        name: Option<String>,
        #[arg(long)]
        list: bool,
    },
    /// Render profile curves as SVG (dashed/bold alternating styles).
    Render {
        #[arg(long = "curve")]
        curves: Vec<PathBuf>,
        #[arg(long, default_value_t = 640)]
        width: u32,
        #[arg(long, default_value_t = 480)]
        height: u32,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a fixed deterministic tour of the library; one JSON line per
    /// step.
    Suite,
}

fn main() -> ExitCode {
    // Cap for internally parallel sweeps; all current sweeps are
    // single-threaded and deterministic, so the value is validated and
    // otherwise inert.
    if let Ok(raw) = std::env::var("SHSKIT_THREADS") {
        match raw.parse::<u32>() {
            Ok(n) if n >= 1 => {}
            _ => {
                eprintln!("invalid SHSKIT_THREADS value {raw:?} (want a positive integer)");
                return ExitCode::from(2);
            }
        }
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(match e {
                Error::Domain(_) | Error::Obstruction(_) => 2,
                Error::Numerical(_) => 3,
            })
        }
    }
}

/// JSON serializer printing every finite float with 17 significant
/// digits, so outputs are byte-stable and round-trip exactly.
struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFormatter);
    value
        .serialize(&mut ser)
        .expect("report serialization cannot fail");
    String::from_utf8(out).expect("serializer emits UTF-8")
}

fn emit<T: Serialize>(value: &T) {
    println!("{}", to_json(value));
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::domain(format!("cannot read {}: {e}", path.display())))?;
    match serde_json::from_str(&text) {
        Ok(v) => Ok(v),
        Err(e) => {
            eprintln!(
                "malformed JSON in {} at line {}, column {}: {e}",
                path.display(),
                e.line(),
                e.column()
            );
            std::process::exit(4);
        }
    }
}

/// Finite floats stay numbers; infinities become null.
fn finite_or_null(x: f64) -> serde_json::Value {
    if x.is_finite() {
        json!(x)
    } else {
        serde_json::Value::Null
    }
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Verify { pair } => {
            let pair: ShsPair = read_json(&pair)?;
            emit(&shs::verify(&pair)?);
        }
        Command::Invariants { pair, q_max } => {
            let pair: ShsPair = read_json(&pair)?;
            let prop = shs::proportionality(&pair)?;
            let delta = shs::delta_bounds(&pair)?;
            let helicity = shs::helicity_data(&pair)?;
            let census = shs::rational_census(&pair.h, q_max)?;
            let tame = shs::tameness_scan(&pair, q_max)?;
            emit(&json!({
                "proportionality": serde_json::to_value(&prop).unwrap(),
                "delta": {
                    "minus": finite_or_null(delta.minus),
                    "plus": finite_or_null(delta.plus),
                    "symmetric": finite_or_null(delta.symmetric()),
                },
                "helicity": serde_json::to_value(&helicity).unwrap(),
                "census": serde_json::to_value(&census).unwrap(),
                "tameness": serde_json::to_value(&tame).unwrap(),
            }));
        }
        Command::Stabilize {
            curve,
            c,
            eps,
            delta,
        } => {
            let h: ProfileCurve = read_json(&curve)?;
            let g = match (eps, delta) {
                (None, None) => stabilize::special_stabilizer(&h, c)?,
                (Some(eps), None) => {
                    stabilize::boundary_value_stabilizer(&h, &BoundaryData::special(&h, c, eps)?)?
                }
                (Some(eps), Some(delta)) => stabilize::constant_slope_stabilizer(
                    &h,
                    &BoundaryData::special(&h, c, eps)?,
                    delta,
                )?,
                (None, Some(_)) => {
                    return Err(Error::domain("--delta requires --eps"));
                }
            };
            emit(&ShsPair::new(h, g)?);
        }
        Command::Connect { from, to, c, eps } => {
            let h0: ProfileCurve = read_json(&from)?;
            let h1: ProfileCurve = read_json(&to)?;
            let bd = BoundaryData::special(&h0, c, eps)?;
            emit(&stabilize::connect_same_winding(&h0, &h1, &bd)?);
        }
        Command::Length { homotopy } => {
            let gamma: StableHomotopy = read_json(&homotopy)?;
            gamma.validate()?;
            emit(&homotopy::homotopy_constants(&gamma)?);
        }
        Command::Cobordism {
            homotopy,
            triple,
            csv,
            full,
        } => {
            let gamma: StableHomotopy = read_json(&homotopy)?;
            gamma.validate()?;
            let form = if triple {
                homotopy::triple_cobordism(&gamma)?
            } else {
                homotopy::cobordism_from_short(&gamma)?
            };
            if let Some(path) = csv {
                std::fs::write(&path, density_csv(&form))
                    .map_err(|e| Error::domain(format!("cannot write {}: {e}", path.display())))?;
            }
            if full {
                emit(&form);
            } else {
                emit(&json!({
                    "f_slope": form.f_slope,
                    "min_density": form.min_density,
                    "t_points": form.t_grid.len(),
                    "r_points": form.r_grid.len(),
                    "interval": [form.homotopy.interval.0, form.homotopy.interval.1],
                }));
            }
        }
        Command::Monotone {
            path,
            exotic,
            emit_path,
            winding_to,
            winding_from,
            embed,
        } => {
            if let Some(curve) = embed {
                let h: ProfileCurve = read_json(&curve)?;
                emit(&monotone::embed_symplectization(&h)?);
                return Ok(());
            }
            if let Some(to) = winding_to {
                let h1: ProfileCurve = read_json(&to)?;
                let h0: ProfileCurve = match winding_from {
                    Some(p) => read_json(&p)?,
                    None => {
                        let path = load_path(path, exotic)?;
                        path.samples[0].curve.clone()
                    }
                };
                emit(&json!({
                    "verdict": serde_json::to_value(monotone::winding_obstruction(&h0, &h1)?)
                        .unwrap(),
                }));
                return Ok(());
            }
            let mpath = load_path(path, exotic)?;
            if emit_path {
                emit(&mpath);
            } else {
                emit(&monotone::monotone_check(&mpath)?);
            }
        }
        Command::Classify {
            pair,
            manifold,
            eps,
            against,
        } => {
            let pair: ShsPair = read_json(&pair)?;
            let manifold = match manifold {
                ManifoldArg::S3 => Manifold::S3,
                ManifoldArg::T3 => Manifold::T3,
            };
            if let Some(other) = against {
                let other: ShsPair = read_json(&other)?;
                match catalog::is_homotopic(&pair, &other, manifold)? {
                    HomotopyVerdict::Yes(witness) => emit(&json!({
                        "homotopic": true,
                        "witness": serde_json::to_value(&*witness).unwrap(),
                    })),
                    HomotopyVerdict::No(reason) => emit(&json!({
                        "homotopic": false,
                        "reason": reason,
                    })),
                }
                return Ok(());
            }
            let inv = match eps {
                Some(eps) => catalog::classify_with_eps(&pair, manifold, eps)?,
                None => catalog::classify(&pair, manifold)?,
            };
            emit(&inv);
        }
        Command::Catalog { name, list } => {
            if list {
                emit(&json!([
                    "standard_contact",
                    "twist",
                    "overtwisted",
                    "nontame",
                    "s3_canonical",
                    "t3_canonical",
                ]));
                return Ok(());
            }
            let name = name.expect("clap enforces --name without --list");
            let text = if name.trim_start().starts_with('{') {
                name
            } else {
                format!("{{\"name\":\"{name}\"}}")
            };
            let named: NamedPair = serde_json::from_str(&text).map_err(|e| {
                Error::domain(format!("unknown catalog name {text:?}: {e}"))
            })?;
            emit(&catalog::make_named(named)?);
        }
        Command::Render {
            curves,
            width,
            height,
            out,
        } => {
            let loaded: Vec<ProfileCurve> = curves
                .iter()
                .map(|p| read_json(p))
                .collect::<Result<_, _>>()?;
            let svg = render_svg(&loaded, width, height)?;
            match out {
                Some(path) => std::fs::write(&path, svg)
                    .map_err(|e| Error::domain(format!("cannot write {}: {e}", path.display())))?,
                None => {
                    std::io::stdout()
                        .write_all(svg.as_bytes())
                        .map_err(|e| Error::numerical(format!("stdout: {e}")))?;
                }
            }
        }
        Command::Suite => run_suite()?,
    }
    Ok(())
}

fn load_path(path: Option<PathBuf>, exotic: bool) -> Result<MonotonePath, Error> {
    match (path, exotic) {
        (Some(p), false) => {
            let mp: MonotonePath = read_json(&p)?;
            mp.validate()?;
            Ok(mp)
        }
        (None, true) => monotone::exotic_ball_path(),
        _ => Err(Error::domain("pass exactly one of --path or --exotic")),
    }
}

/// CSV density export: commented header with the profile slope, then one
/// `t,r,density` row per grid point.
fn density_csv(form: &CobordismForm) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "# f_slope={:.16e} min_density={:.16e}\n",
        form.f_slope, form.min_density
    ));
    out.push_str("t,r,density\n");
    for (i, &t) in form.t_grid.iter().enumerate() {
        for (j, &r) in form.r_grid.iter().enumerate() {
            out.push_str(&format!("{t:.16e},{r:.16e},{:.16e}\n", form.density[i][j]));
        }
    }
    out
}

fn render_svg(curves: &[ProfileCurve], width: u32, height: u32) -> Result<String, Error> {
    let mut pts: Vec<Vec<(f64, f64)>> = Vec::with_capacity(curves.len());
    for c in curves {
        let (a, b) = c.interval();
        let mut p = Vec::with_capacity(257);
        for j in 0..=256 {
            let r = a + (b - a) * j as f64 / 256.0;
            let v = c.eval(r, 0)?;
            p.push((v.x, v.y));
        }
        pts.push(p);
    }
    // Viewport: bounding box of all samples, padded; unit square when
    // there is nothing to draw.
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in pts.iter().flatten() {
        x0 = x0.min(p.0);
        x1 = x1.max(p.0);
        y0 = y0.min(p.1);
        y1 = y1.max(p.1);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    let pad = |lo: &mut f64, hi: &mut f64| {
        let w = (*hi - *lo).max(1e-9);
        *lo -= 0.05 * w;
        *hi += 0.05 * w;
    };
    pad(&mut x0, &mut x1);
    pad(&mut y0, &mut y1);
    let (w, h) = (width as f64, height as f64);
    let sx = move |x: f64| (x - x0) / (x1 - x0) * w;
    let sy = move |y: f64| h - (y - y0) / (y1 - y0) * h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">\n"
    ));
    svg.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{width}\" height=\"{height}\" fill=\"white\" \
         stroke=\"none\"/>\n"
    ));
    // Axes through the origin, clamped into the viewport.
    let ax = sx(0.0f64.clamp(x0, x1));
    let ay = sy(0.0f64.clamp(y0, y1));
    svg.push_str(&format!(
        "  <line x1=\"0\" y1=\"{ay:.6}\" x2=\"{w:.6}\" y2=\"{ay:.6}\" stroke=\"#888888\" \
         stroke-width=\"1\"/>\n"
    ));
    svg.push_str(&format!(
        "  <line x1=\"{ax:.6}\" y1=\"0\" x2=\"{ax:.6}\" y2=\"{h:.6}\" stroke=\"#888888\" \
         stroke-width=\"1\"/>\n"
    ));
    for (i, p) in pts.iter().enumerate() {
        let mut d = String::new();
        for (k, &(x, y)) in p.iter().enumerate() {
            let cmd = if k == 0 { 'M' } else { 'L' };
            d.push_str(&format!("{cmd}{:.6} {:.6} ", sx(x), sy(y)));
        }
        let style = if i % 2 == 0 {
            "stroke=\"black\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\""
        } else {
            "stroke=\"black\" stroke-width=\"3\""
        };
        svg.push_str(&format!(
            "  <path d=\"{}\" fill=\"none\" {style}/>\n",
            d.trim_end()
        ));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// A fixed tour through the main operations; one JSON line per step.
fn run_suite() -> Result<(), Error> {
    let standard = catalog::make_named(NamedPair::StandardContact)?;
    emit(&json!({
        "step": "verify_standard",
        "report": serde_json::to_value(shs::verify(&standard)?).unwrap(),
    }));
    emit(&json!({
        "step": "classify_standard",
        "invariant": serde_json::to_value(catalog::classify(&standard, Manifold::S3)?).unwrap(),
    }));
    let delta = shs::delta_bounds(&ShsPair::new(
        ProfileCurve::standard(1.0, (0.0, 1.0)),
        ProfileCurve::standard(2.0, (0.0, 1.0)),
    )?)?;
    emit(&json!({
        "step": "delta_scaled_standard",
        "minus": finite_or_null(delta.minus),
        "plus": finite_or_null(delta.plus),
    }));
    let gamma = reference_homotopy((0.1, 0.9))?;
    emit(&json!({
        "step": "length_reference",
        "constants": serde_json::to_value(homotopy::homotopy_constants(&gamma)?).unwrap(),
    }));
    let short = homotopy::transform(
        &gamma,
        &homotopy::TransformOp::Restrict { a2: 0.0, b2: 0.5 },
    )?;
    let form = homotopy::cobordism_from_short(&short)?;
    emit(&json!({
        "step": "cobordism_short",
        "f_slope": form.f_slope,
        "min_density": form.min_density,
    }));
    let path = monotone::exotic_ball_path()?;
    let rep = monotone::monotone_check(&path)?;
    emit(&json!({
        "step": "monotone_exotic",
        "ok": rep.ok,
        "crossings": rep.crossings.len(),
        "min_density": rep.min_density,
    }));
    let torus = catalog::make_named(NamedPair::T3Canonical { w: 1 })?;
    emit(&json!({
        "step": "classify_torus",
        "invariant": serde_json::to_value(catalog::classify(&torus, Manifold::T3)?).unwrap(),
    }));
    Ok(())
}

/// The reference homotopy `(h_st, (1 + t) h_st)` on `t` in `[0, 1]`.
fn reference_homotopy(r_interval: (f64, f64)) -> Result<StableHomotopy, Error> {
    let samples = (0..9)
        .map(|j| {
            let t = j as f64 / 8.0;
            Ok((
                t,
                ShsPair::new(
                    ProfileCurve::standard(1.0, r_interval),
                    ProfileCurve::standard(1.0 + t, r_interval),
                )?,
            ))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    StableHomotopy::from_samples(samples)
}
