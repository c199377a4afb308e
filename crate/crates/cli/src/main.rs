use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use toric_deform::certificate;
use toric_deform::cup::{self, CupSelection};
use toric_deform::degree_scan;
use toric_deform::graded::{self, DegreeSource, FirstOrderClass, GradedTable};
use toric_deform::support::SupportComplex;
use toric_deform::{agreement, fuzz, DegreeVector, Error, Fan};

/// Deformations and obstructions of complete simplicial toric varieties.
#[derive(Parser)]
#[command(name = "toric-deform", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(clap::Args)]
struct TableArgs {
    fan: PathBuf,
    #[arg(long, value_enum, default_value = "tsv")]
    format: Format,
    /// Scan every slice degree with coordinates in [-N, N] instead of the
    /// bounded faces. Results are marked as not certified exhaustive.
    #[arg(long, value_name = "N")]
    degree_box: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Check a fan file and print its structural flags.
    Validate { fan: PathBuf },
    /// Candidate degrees for every ray (or one ray).
    Degrees {
        #[command(flatten)]
        table: TableArgs,
        #[arg(long)]
        ray: Option<usize>,
    },
    /// Graded first-order deformations H^1(X, T_X).
    T1(TableArgs),
    /// Graded obstruction space H^2(X, T_X).
    T2(TableArgs),
    /// Cup product of two first-order classes.
    Cup {
        fan: PathBuf,
        #[arg(long)]
        ray: usize,
        #[arg(long, allow_hyphen_values = true)]
        deg: String,
        #[arg(long)]
        ray2: usize,
        #[arg(long, allow_hyphen_values = true)]
        deg2: String,
        /// Use the class of this component instead of the first basis class.
        #[arg(long)]
        comp: Option<usize>,
        #[arg(long)]
        comp2: Option<usize>,
    },
    /// Scan all products of basis classes. Exit 0: none obstructed,
    /// 1: obstruction found, 2: error.
    Obstructed { fan: PathBuf },
    /// Cycle certificates for every nonvanishing product of component classes.
    Certificate { fan: PathBuf },
    /// Dump the support complex of a ray and degree.
    Complex {
        fan: PathBuf,
        #[arg(long)]
        ray: usize,
        #[arg(long, allow_hyphen_values = true)]
        deg: String,
    },
    /// Compare the combinatorial route against the Čech oracle.
    OracleCheck {
        fans: Vec<PathBuf>,
        /// Number of random smooth fans to add.
        #[arg(long, default_value_t = 0)]
        random: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

struct Loaded {
    fan: Fan,
    hash: String,
}

#[derive(Debug)]
struct CliError(String);

impl CliError {
    fn at(path: &Path, e: Error) -> Self {
        match e {
            Error::Parse { line, column, message } => {
                Self(format!("{}:{line}:{column}: {message}", path.display()))
            }
            other => Self(format!("{}: {other}", path.display())),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self(e.to_string())
    }
}

type Outcome = std::result::Result<(String, u8), CliError>;

fn load(path: &Path) -> std::result::Result<Loaded, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError(format!("{}: {e}", path.display())))?;
    let hash = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
    let text = String::from_utf8(bytes).map_err(|e| CliError(format!("{}: {e}", path.display())))?;
    let fan = Fan::from_json(&text).map_err(|e| CliError::at(path, e))?;
    Ok(Loaded { fan, hash })
}

fn degree(fan: &Fan, s: &str) -> std::result::Result<DegreeVector, CliError> {
    let u = DegreeVector::parse(s).map_err(|e| CliError(format!("degree {s:?}: {e}")))?;
    if u.rank() != fan.rank() {
        return Err(CliError(format!("degree {s:?} has {} entries, the fan has rank {}", u.rank(), fan.rank())));
    }
    Ok(u)
}

fn check_ray(fan: &Fan, ray: usize) -> std::result::Result<(), CliError> {
    if ray >= fan.num_rays() {
        return Err(CliError(format!("ray {ray} out of range (fan has {} rays)", fan.num_rays())));
    }
    Ok(())
}

fn label(ray: usize) -> String {
    format!("rho{}", ray + 1)
}

fn labels(rays: &[usize]) -> Vec<String> {
    rays.iter().map(|&r| label(r)).collect()
}

fn document(hash: &str, body: impl Serialize) -> String {
    let mut v = serde_json::to_value(body).expect("serializable report");
    if let Value::Object(m) = &mut v {
        m.insert("fan_sha256".into(), Value::String(hash.into()));
    }
    let mut s = serde_json::to_string_pretty(&v).expect("serializable report");
    s.push('\n');
    s
}

fn source(box_radius: Option<u32>) -> DegreeSource {
    box_radius.map_or(DegreeSource::Faces, DegreeSource::Box)
}

fn validate(path: &Path) -> Outcome {
    let l = load(path)?;
    let flags = l.fan.flags();
    let body = json!({
        "rank": l.fan.rank(),
        "rays": l.fan.num_rays(),
        "max_cones": l.fan.num_cones(),
        "is_simplicial": flags.is_simplicial,
        "is_smooth": flags.is_smooth,
        "is_complete": flags.is_complete,
    });
    Ok((document(&l.hash, body), 0))
}

fn degrees(t: &TableArgs, ray: Option<usize>) -> Outcome {
    let l = load(&t.fan)?;
    l.fan.ensure_complete()?;
    let rays: Vec<usize> = match ray {
        Some(r) => {
            check_ray(&l.fan, r)?;
            vec![r]
        }
        None => (0..l.fan.num_rays()).collect(),
    };
    let mut rows = Vec::new();
    for r in rays {
        let cands = match source(t.degree_box) {
            DegreeSource::Faces => degree_scan::candidate_degrees(&l.fan, r)?,
            DegreeSource::Box(n) => degree_scan::box_degrees(&l.fan, r, n),
        };
        rows.extend(cands);
    }
    Ok(match t.format {
        Format::Tsv => {
            let mut s = String::from("ray\tu\tface\n");
            for c in &rows {
                let face = c.face.map_or("-".to_string(), |f| f.to_string());
                s.push_str(&format!("{}\t{}\t{face}\n", c.ray, c.u));
            }
            (s, 0)
        }
        Format::Json => {
            let body = json!({
                "certified": t.degree_box.is_none(),
                "degrees": rows.iter().map(|c| json!({"ray": c.ray, "u": c.u, "face": c.face})).collect::<Vec<_>>(),
            });
            (document(&l.hash, body), 0)
        }
    })
}

#[derive(Clone, Copy)]
enum Which {
    H1,
    H2,
}

fn table(t: &TableArgs, which: Which) -> Outcome {
    let l = load(&t.fan)?;
    let tab: GradedTable = graded::compute_table_with(&l.fan, source(t.degree_box))?;
    let dim = |e: &graded::GradedEntry| match which {
        Which::H1 => e.h1,
        Which::H2 => e.h2,
    };
    let entries: Vec<_> = tab.entries.iter().filter(|e| dim(e) > 0).collect();
    let total = match which {
        Which::H1 => tab.h1_total,
        Which::H2 => tab.h2_total,
    };
    Ok(match t.format {
        Format::Tsv => {
            let mut s = String::new();
            if !tab.certified {
                s.push_str("# not certified exhaustive\n");
            }
            s.push_str("ray\tu\tdim\n");
            for e in &entries {
                s.push_str(&format!("{}\t{}\t{}\n", e.ray, e.u, dim(e)));
            }
            s.push_str(&format!("# total {total}\n"));
            (s, 0)
        }
        Format::Json => {
            let rows: Vec<Value> = entries
                .iter()
                .map(|e| {
                    json!({
                        "ray": e.ray,
                        "label": label(e.ray),
                        "u": e.u,
                        "dim": dim(e),
                        "components": e.components,
                    })
                })
                .collect();
            let body = json!({
                "total": total,
                "certified": tab.certified,
                "entries": rows,
            });
            (document(&l.hash, body), 0)
        }
    })
}

fn pick_class(fan: &Fan, ray: usize, u: &DegreeVector, comp: Option<usize>) -> std::result::Result<FirstOrderClass, CliError> {
    check_ray(fan, ray)?;
    match comp {
        Some(i) => Ok(FirstOrderClass::component(fan, ray, u, i)?),
        None => graded::first_order_basis(fan, ray, u)?
            .into_iter()
            .next()
            .ok_or_else(|| CliError(format!("no first-order class for ray {ray} in degree {u}"))),
    }
}

fn cup_report_value(r: &cup::CupClassReport) -> Value {
    let mut v = serde_json::to_value(r).expect("serializable report");
    if let (Value::Object(m), Some(t)) = (&mut v, &r.target) {
        m.insert("target_label".into(), Value::String(label(t.ray)));
    }
    v
}

fn cup_command(path: &Path, ray: usize, deg: &str, ray2: usize, deg2: &str, comp: Option<usize>, comp2: Option<usize>) -> Outcome {
    let l = load(path)?;
    let (u, u2) = (degree(&l.fan, deg)?, degree(&l.fan, deg2)?);
    let a = pick_class(&l.fan, ray, &u, comp)?;
    let b = pick_class(&l.fan, ray2, &u2, comp2)?;
    let r = cup::cup_cocycle(&l.fan, &a, &b)?;
    Ok((document(&l.hash, cup_report_value(&r)), 0))
}

fn obstructed(path: &Path) -> Outcome {
    let l = load(path)?;
    let scan = cup::obstruction_scan(&l.fan)?;
    let body = json!({
        "obstructed": scan.obstructed(),
        "pairs_checked": scan.pairs_checked,
        "obstructions": scan.obstructions.iter().map(cup_report_value).collect::<Vec<_>>(),
    });
    Ok((document(&l.hash, body), u8::from(scan.obstructed())))
}

fn certificates(path: &Path) -> Outcome {
    let l = load(path)?;
    let fan = &l.fan;
    let tab = graded::compute_table(fan)?;
    let classes: Vec<Vec<FirstOrderClass>> = tab
        .h1_entries()
        .map(|e| graded::component_classes(fan, e.ray, &e.u))
        .collect::<toric_deform::Result<_>>()?;
    let mut out = Vec::new();
    for i in 0..classes.len() {
        for j in i..classes.len() {
            for a in &classes[i] {
                for b in &classes[j] {
                    if !matches!(cup::cup_degree_rule(fan, a.ray, &a.u, b.ray, &b.u)?, CupSelection::Target { .. }) {
                        continue;
                    }
                    for c in certificate::nonzero_certificates(fan, a, b)? {
                        for term in &c.terms {
                            out.push(json!({
                                "target": {"ray": c.target_ray, "label": label(c.target_ray), "u": c.target_u},
                                "alpha": c.alpha.vertices,
                                "alpha_labels": labels(&c.alpha.vertices),
                                "sigma_choice": c.alpha.sigma_choice,
                                "Z": term.z,
                                "Z_labels": labels(&term.z),
                                "Z'": term.z2,
                                "Z'_labels": labels(&term.z2),
                                "relevant": term.result.relevant.iter().map(|r| (r.i, r.b)).collect::<Vec<_>>(),
                                "value": term.result.value.to_string(),
                            }));
                        }
                    }
                }
            }
        }
    }
    Ok((document(&l.hash, json!({ "certificates": out })), 0))
}

fn complex(path: &Path, ray: usize, deg: &str) -> Outcome {
    let l = load(path)?;
    check_ray(&l.fan, ray)?;
    let u = degree(&l.fan, deg)?;
    let k = SupportComplex::build(&l.fan, ray, &u)?;
    Ok((document(&l.hash, k.debug_json(&l.fan)), 0))
}

fn oracle_check(paths: &[PathBuf], random: usize, seed: u64) -> Outcome {
    let mut fans: Vec<(String, Fan)> = Vec::new();
    for p in paths {
        fans.push((p.display().to_string(), load(p)?.fan));
    }
    for (i, f) in fuzz::random_fans(seed, random).into_iter().enumerate() {
        fans.push((format!("random:{seed}:{i}"), f));
    }
    let mut s = String::from("fan\trays\tcones\tdimensions\tproducts\tkappa\tzero_rule\tstatus\n");
    let mut all = true;
    for (name, fan) in &fans {
        let a = agreement::check_fan(fan)?;
        let mark = |ok: bool| if ok { "pass" } else { "FAIL" };
        s.push_str(&format!(
            "{name}\t{}\t{}\t{}/{}\t{}/{}\t{}\t{}/{}\t{}\n",
            a.rays,
            a.cones,
            a.dimension_probes - a.dimension_mismatches.len(),
            a.dimension_probes,
            a.product_probes - a.product_mismatches.len(),
            a.product_probes,
            a.kappa_probes,
            a.zero_rule_probes - a.zero_rule_failures,
            a.zero_rule_probes,
            mark(a.passed()),
        ));
        all &= a.passed();
    }
    Ok((s, u8::from(!all)))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Validate { fan } => validate(&fan),
        Command::Degrees { table, ray } => degrees(&table, ray),
        Command::T1(t) => table(&t, Which::H1),
        Command::T2(t) => table(&t, Which::H2),
        Command::Cup {
            fan,
            ray,
            deg,
            ray2,
            deg2,
            comp,
            comp2,
        } => cup_command(&fan, ray, &deg, ray2, &deg2, comp, comp2),
        Command::Obstructed { fan } => obstructed(&fan),
        Command::Certificate { fan } => certificates(&fan),
        Command::Complex { fan, ray, deg } => complex(&fan, ray, &deg),
        Command::OracleCheck { fans, random, seed } => oracle_check(&fans, random, seed),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok((text, code)) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(text.as_bytes());
            ExitCode::from(code)
        }
        Err(CliError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
