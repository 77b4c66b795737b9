use clap::{Parser, Subcommand};
use num_traits::Signed;
use orthoweave::diagram;
use orthoweave::inversive::MobiusMap;
use orthoweave::json as oj;
use orthoweave::numth;
use orthoweave::orthocubic::{self, Built};
use orthoweave::packing;
use orthoweave::tangle::{self, Slope};
use std::path::PathBuf;
use std::process::ExitCode;

/// Exact-arithmetic necklace representations of algebraic links in the
/// cubic section of the orthoplicial Apollonian sphere packing.
#[derive(Parser)]
#[command(name = "orthoweave", version, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a tangle expression, build it geometrically, verify the
    /// packing conditions and report sphere/crossing counts.
    Tangle {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// force the full twist-and-flip pipeline for rational subtrees
        #[arg(long)]
        full: bool,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        obj: Option<PathBuf>,
    },
    /// Necklace of a two-strand braid word on the edge-section grid.
    Braid {
        word: String,
        /// close through the two half-space walls (crossing at infinity)
        #[arg(long = "halfspace-closure")]
        halfspace_closure: bool,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        obj: Option<PathBuf>,
    },
    /// Orthocubic point of a slope p/q and its quartic solution tuple.
    Point {
        #[arg(allow_hyphen_values = true)]
        slope: String,
    },
    /// Sweep the parametrized solutions of x⁴+y⁴+z⁴ = 2t².
    Solve {
        #[arg(long)]
        max: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Enumerate a packing orbit under the dual-sphere inversions.
    Orbit {
        #[arg(long, value_parser = ["cubic", "ortho"])]
        packing: String,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Re-check every exact invariant of a stored necklace file.
    Verify { file: PathBuf },
}

struct CliError {
    code: u8,
    kind: &'static str,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            kind: "usage",
            message: message.into(),
        }
    }
    fn parse(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            kind: "parse",
            message: message.into(),
        }
    }
    fn geometry(message: impl Into<String>) -> Self {
        CliError {
            code: 3,
            kind: "geometry",
            message: message.into(),
        }
    }
    fn io(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            kind: "io",
            message: message.into(),
        }
    }
}

impl From<tangle::TangleError> for CliError {
    fn from(e: tangle::TangleError) -> Self {
        CliError::parse(e.to_string())
    }
}

impl From<orthocubic::BuildError> for CliError {
    fn from(e: orthocubic::BuildError) -> Self {
        match e {
            orthocubic::BuildError::Tangle(t) => t.into(),
            other => CliError::geometry(other.to_string()),
        }
    }
}

impl From<diagram::DiagramError> for CliError {
    fn from(e: diagram::DiagramError) -> Self {
        CliError::geometry(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind::*;
            if matches!(e.kind(), DisplayHelp | DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!(
                "{}",
                serde_json::json!({"error": {"kind": e.kind, "message": e.message}})
            );
            ExitCode::from(e.code)
        }
    }
}

fn write_file(path: &PathBuf, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), CliError> {
    let digits = oj::precision();
    match cli.cmd {
        Cmd::Tangle {
            expr,
            full,
            json,
            svg,
            obj,
        } => {
            let ast = tangle::parse(&expr)?;
            let built = orthocubic::build_opts(&ast, full)?;
            match built {
                Built::Necklace(n) => {
                    orthocubic::validate_packing(&n)?;
                    let (spheres, crossings) = orthocubic::counts_necklace(&n)?;
                    println!("spheres: {spheres}, crossings: {crossings}");
                    println!("components: {}", n.cycles.len());
                    if let Some(path) = json {
                        let doc = oj::necklace_to_json(&n, crossings, digits);
                        write_file(&path, &serde_json::to_string_pretty(&doc).unwrap())?;
                    }
                    if let Some(path) = svg {
                        let text = match diagram::project_necklace(&n) {
                            Ok(d) => diagram::render_svg(&d),
                            Err(_) => diagram::render_circles_svg(&n.spheres),
                        };
                        write_file(&path, &text)?;
                    }
                    if let Some(path) = obj {
                        write_file(&path, &oj::necklace_to_obj(&n))?;
                    }
                }
                Built::Tangle(t) => {
                    let (spheres, crossings) = orthocubic::counts_tangle(&t)?;
                    println!("spheres: {spheres}, crossings: {crossings}");
                    if let Ok(s) = ast.slope() {
                        println!("slope: {s}");
                    }
                    if let Some(path) = json {
                        let doc = serde_json::json!({
                            "spheres": t.spheres.iter().enumerate().map(|(id, e)| {
                                let mut o = oj::invvec_to_json(&e.vec, digits);
                                let obj = o.as_object_mut().unwrap();
                                obj.insert("id".into(), serde_json::json!(id));
                                obj.insert("color".into(), serde_json::json!(e.color));
                                o
                            }).collect::<Vec<_>>(),
                            "strands": t.strands.iter().map(|s| serde_json::json!({
                                "from": format!("{:?}", s.from),
                                "to": format!("{:?}", s.to),
                                "ids": s.ids,
                            })).collect::<Vec<_>>(),
                            "closed": t.closed,
                        });
                        write_file(&path, &serde_json::to_string_pretty(&doc).unwrap())?;
                    }
                    if let Some(path) = svg {
                        let d = diagram::project_tangle(&t)?;
                        write_file(&path, &diagram::render_svg(&d))?;
                    }
                    if let Some(path) = obj {
                        let as_neck = orthocubic::Necklace {
                            spheres: t.spheres.iter().map(|e| e.vec.clone()).collect(),
                            cycles: Vec::new(),
                            edge_section: false,
                            built_crossings: None,
                            built_pd: None,
                        };
                        write_file(&path, &oj::necklace_to_obj(&as_neck))?;
                    }
                }
            }
            Ok(())
        }
        Cmd::Braid {
            word,
            halfspace_closure,
            json,
            svg,
            obj,
        } => {
            let n = orthocubic::braid_grid(&word, halfspace_closure)?;
            orthocubic::validate_packing(&n)?;
            let (spheres, crossings) = orthocubic::counts_necklace(&n)?;
            println!("spheres: {spheres}, crossings: {crossings}");
            println!("components: {}", n.cycles.len());
            if let Some(path) = json {
                let doc = oj::necklace_to_json(&n, crossings, digits);
                write_file(&path, &serde_json::to_string_pretty(&doc).unwrap())?;
            }
            if let Some(path) = svg {
                write_file(&path, &diagram::render_circles_svg(&n.spheres))?;
            }
            if let Some(path) = obj {
                write_file(&path, &oj::necklace_to_obj(&n))?;
            }
            Ok(())
        }
        Cmd::Point { slope } => {
            let s = parse_slope(&slope)?;
            let pt = numth::orthocubic_point(&s).map_err(|e| CliError::parse(e.to_string()))?;
            let x = s.p.abs();
            let y = s.q.clone();
            let z = &x - &y;
            let t = &x * &x - &x * &y + &y * &y;
            println!("x⁴+y⁴+z⁴=2t²: {x},{y},{z},{t}");
            println!(
                "point: ({}, {})",
                pt.cartesian[0].approx(digits),
                pt.cartesian[1].approx(digits)
            );
            let coords: Vec<String> = pt.invvec.coords().iter().map(|c| c.to_string()).collect();
            println!("coordinates: ({})", coords.join(", "));
            Ok(())
        }
        Cmd::Solve { max, csv, json } => {
            if max == 0 {
                return Err(CliError::usage("--max must be at least 1"));
            }
            let sols = numth::diophantine(max);
            println!(
                "primitive solutions of x⁴+y⁴+z⁴=2t² (parametrized family, p ≤ {max}): {}",
                sols.len()
            );
            if let Some(path) = csv {
                let mut out = String::from("x,y,z,t,degenerate\n");
                for s in &sols {
                    out.push_str(&format!(
                        "{},{},{},{},{}\n",
                        s.x, s.y, s.z, s.t, s.degenerate
                    ));
                }
                write_file(&path, &out)?;
            }
            if let Some(path) = json {
                let doc: Vec<_> = sols
                    .iter()
                    .map(|s| {
                        serde_json::json!({
                            "x": s.x.to_string(),
                            "y": s.y.to_string(),
                            "z": s.z.to_string(),
                            "t": s.t.to_string(),
                            "degenerate": s.degenerate,
                        })
                    })
                    .collect();
                write_file(&path, &serde_json::to_string_pretty(&doc).unwrap())?;
            }
            Ok(())
        }
        Cmd::Orbit {
            packing: which,
            depth,
            svg,
            json,
        } => {
            let c = packing::ctx();
            let p = if which == "cubic" { &c.cubic } else { &c.ortho };
            let seeds: Vec<_> = p.spheres.values().cloned().collect();
            let gens: Vec<MobiusMap> = p
                .duals
                .values()
                .map(|d| MobiusMap::inversion(d).unwrap())
                .collect();
            let gen_refs: Vec<&MobiusMap> = gens.iter().collect();
            let orbit = packing::orbit(&seeds, &gen_refs, depth);
            println!("spheres: {}", orbit.len());
            if let Some(path) = json {
                let doc = oj::orbit_to_json(&orbit, digits);
                write_file(&path, &serde_json::to_string_pretty(&doc).unwrap())?;
            }
            if let Some(path) = svg {
                write_file(&path, &diagram::render_circles_svg(&orbit))?;
            }
            Ok(())
        }
        Cmd::Verify { file } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| CliError::io(format!("{}: {e}", file.display())))?;
            let doc: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| CliError::parse(e.to_string()))?;
            let n = oj::necklace_from_json(&doc).map_err(|e| CliError::parse(e.to_string()))?;
            orthocubic::validate_packing(&n)
                .map_err(|e| CliError::geometry(format!("invariant violated: {e}")))?;
            println!(
                "packing: ok ({} spheres, {} cycles)",
                n.spheres.len(),
                n.cycles.len()
            );
            if n.edge_section {
                println!("diagram: skipped (edge-section necklace has no planar projection)");
            } else {
                let d = diagram::project_necklace(&n)
                    .map_err(|e| CliError::geometry(format!("diagram invariant violated: {e}")))?;
                println!("diagram: ok ({} crossings)", d.crossings.len());
            }
            println!("verified");
            Ok(())
        }
    }
}

fn parse_slope(text: &str) -> Result<Slope, CliError> {
    let t = text.trim();
    if t == "inf" {
        return Ok(Slope::infinity());
    }
    let (p, q) = match t.split_once('/') {
        Some((p, q)) => (
            p.trim()
                .parse::<i64>()
                .map_err(|_| CliError::parse(format!("bad slope `{t}`")))?,
            q.trim()
                .parse::<i64>()
                .map_err(|_| CliError::parse(format!("bad slope `{t}`")))?,
        ),
        None => (
            t.parse::<i64>()
                .map_err(|_| CliError::parse(format!("bad slope `{t}`")))?,
            1,
        ),
    };
    if q <= 0 {
        return Err(CliError::parse("slope denominator must be positive"));
    }
    Ok(Slope::from_ints(p, q))
}
