//! `hermitia`: JSON command-line front end for the bounded symmetric domain
//! library.
//!
//! Every subcommand prints one JSON value on standard output. Exit codes:
//! 0 on success, 2 on input validation failure (including unknown flags),
//! 3 on mathematical precondition failure, 1 when `selftest` finds a failing
//! criterion. Failures print `{"error": code, "detail": text}`. Output is
//! byte-identical for identical argument and seed pairs; floats carry 12
//! significant digits and angles are in radians.

use std::f64::consts::PI;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use hermitia_core::bergmann::beta;
use hermitia_core::domains::{self, Family, Location};
use hermitia_core::io::{self, round_sig12};
use hermitia_core::jordan::{cayley, jordan_kind};
use hermitia_core::lie::{is_h2, is_tight, root_data, shilov_dim, sl2_irrep};
use hermitia_core::maslov::{maslov_jordan, maslov_transverse, subspace_of_shilov};
use hermitia_core::numeric::herm_eigen;
use hermitia_core::toledo::{diagonal_double, fuchsian_genus2, toledo, toledo_winding};
use hermitia_core::{acceptance, tol, Error, Result};

#[derive(Parser)]
#[command(
    name = "hermitia",
    version,
    about = "Bounded symmetric domain computations with JSON output",
    after_help = "Environment: HERMITIA_TOL overrides the structural tolerance (default 1e-9)."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Rank, tube type and Shilov dimension of a family
    Classify(FamilyArgs),
    /// Locate a point: interior, boundary stratum, or outside the closure
    PointTest {
        /// Point JSON file: {"family", "params", "Z"}
        #[arg(long)]
        point: PathBuf,
    },
    /// Bergmann cocycle of a point triple
    Beta {
        #[command(flatten)]
        family: FamilyCheckArgs,
        /// Triple JSON file: {"family", "params", "x", "y", "z"}
        #[arg(long)]
        triple: PathBuf,
    },
    /// Sample the Bergmann cocycle on random transverse Shilov triples
    BetaProbe {
        #[command(flatten)]
        family: FamilyArgs,
        /// Number of triples to draw
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Seed for the sample stream (echoed in the output)
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Maslov index of a transverse Shilov triple
    Maslov {
        #[command(flatten)]
        family: FamilyCheckArgs,
        /// Triple JSON file: {"family", "params", "x", "y", "z"}
        #[arg(long)]
        triple: PathBuf,
        /// Model: isotropic subspaces or the Jordan matrix model
        #[arg(long, value_enum, default_value_t = MaslovModel::Subspace)]
        model: MaslovModel,
    },
    /// Cayley transform into the tube model, with Im-part spectrum
    Cayley {
        #[command(flatten)]
        family: FamilyCheckArgs,
        /// Point JSON file: {"family", "params", "Z"}
        #[arg(long)]
        point: PathBuf,
    },
    /// Tightness and holomorphy of a Lie algebra homomorphism
    TightCheck {
        /// Homomorphism JSON file: {"source", "target", "images"}
        #[arg(long)]
        hom: PathBuf,
    },
    /// Emit the n-th irreducible representation of the rank-one algebra
    Irrep {
        /// Highest weight: the representation has dimension n + 1
        #[arg(long)]
        n: usize,
    },
    /// Restricted root data (r, a, b) of a family
    Rootdata(FamilyArgs),
    /// Toledo invariant of a surface group representation
    Toledo {
        /// Representation JSON file: {"genus", "family", "params", "A", "B"}
        #[arg(long)]
        rep: PathBuf,
        /// Also compute the winding number of the relator path
        #[arg(long)]
        winding: bool,
    },
    /// Emit a built-in surface group representation
    Fixture {
        /// Fixture name; available: fuchsian-g2
        #[arg(long)]
        name: String,
        /// Optional embedding; available: sp4-diagonal
        #[arg(long)]
        target: Option<String>,
    },
    /// Run the acceptance suite; exits nonzero on any failure
    Selftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum MaslovModel {
    /// Signature of the graph form on a triple of isotropic subspaces
    Subspace,
    /// Jordan model: Cayley transform based at the third point
    Matrix,
}

impl MaslovModel {
    fn as_str(self) -> &'static str {
        match self {
            MaslovModel::Subspace => "subspace",
            MaslovModel::Matrix => "matrix",
        }
    }
}

/// Family selected entirely by flags: `--family su --p 2 --q 3` or
/// `--family sp --n 2`.
#[derive(Args)]
struct FamilyArgs {
    /// Family tag: su, sp, sostar or so2
    #[arg(long)]
    family: String,
    /// First parameter of su(p,q)
    #[arg(long)]
    p: Option<usize>,
    /// Second parameter of su(p,q)
    #[arg(long)]
    q: Option<usize>,
    /// Parameter of sp(2n), so*(2n) or so(2,n)
    #[arg(long)]
    n: Option<usize>,
}

impl FamilyArgs {
    fn to_family(&self) -> Result<Family> {
        let tag = self.family.as_str();
        let params = match tag {
            "su" => match (self.p, self.q, self.n) {
                (Some(p), Some(q), None) => json!({ "p": p, "q": q }),
                _ => {
                    return Err(Error::Validation(
                        "family su takes --p and --q (and no --n)".into(),
                    ))
                }
            },
            "sp" | "sostar" | "so2" => match (self.p, self.q, self.n) {
                (None, None, Some(n)) => json!({ "n": n }),
                _ => {
                    return Err(Error::Validation(format!(
                        "family {tag} takes --n (and no --p/--q)"
                    )))
                }
            },
            other => {
                return Err(Error::Validation(format!(
                    "unknown family {other:?}, expected su, sp, sostar or so2"
                )))
            }
        };
        io::family_from_parts(tag, &params)
    }
}

/// Optional family flags accompanying a self-describing JSON file; when
/// given they must agree with the family named in the file.
#[derive(Args)]
struct FamilyCheckArgs {
    /// Family tag: su, sp, sostar or so2
    #[arg(long)]
    family: Option<String>,
    /// First parameter of su(p,q)
    #[arg(long)]
    p: Option<usize>,
    /// Second parameter of su(p,q)
    #[arg(long)]
    q: Option<usize>,
    /// Parameter of sp(2n), so*(2n) or so(2,n)
    #[arg(long)]
    n: Option<usize>,
}

impl FamilyCheckArgs {
    fn check(&self, file_family: Family) -> Result<()> {
        let Some(tag) = &self.family else {
            if self.p.is_some() || self.q.is_some() || self.n.is_some() {
                return Err(Error::Validation("--p/--q/--n require --family".into()));
            }
            return Ok(());
        };
        let flagged = FamilyArgs {
            family: tag.clone(),
            p: self.p,
            q: self.q,
            n: self.n,
        }
        .to_family()?;
        if flagged != file_family {
            return Err(Error::Validation(format!(
                "flag family {} does not match file family {}",
                flagged.name(),
                file_family.name()
            )));
        }
        Ok(())
    }
}

fn read_file(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Validation(format!("cannot read {}: {e}", path.display())))
}

fn dispatch(cmd: Cmd) -> Result<Value> {
    match cmd {
        Cmd::Classify(fa) => {
            let family = fa.to_family()?;
            let rd = root_data(family)?;
            Ok(json!({
                "rank": family.rank(),
                "tube": rd.tube(),
                "shilov_dim": shilov_dim(&rd),
            }))
        }
        Cmd::PointTest { point } => {
            let (family, z) = io::parse_point(&read_file(&point)?)?;
            let rank = family.rank();
            let (location, shilov) = match domains::locate(family, &z, tol::BOUNDARY)? {
                Location::Interior => ("Interior".to_string(), false),
                Location::Boundary(k) => (format!("Boundary({k})"), false),
                Location::Shilov => (format!("Boundary({rank})"), true),
                Location::Outside => ("Outside".to_string(), false),
            };
            Ok(json!({ "location": location, "shilov": shilov }))
        }
        Cmd::Beta { family, triple } => {
            let (fam, x, y, z) = io::parse_triple(&read_file(&triple)?)?;
            family.check(fam)?;
            let v = beta(fam, &x, &y, &z)?;
            Ok(json!({
                "value": round_sig12(v),
                "abs_over_pi": round_sig12(v.abs() / PI),
            }))
        }
        Cmd::BetaProbe {
            family,
            samples,
            seed,
        } => {
            let fam = family.to_family()?;
            if !(1..=100_000).contains(&samples) {
                return Err(Error::Validation(format!(
                    "--samples {samples} outside 1..=100000"
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut values = Vec::with_capacity(samples);
            for _ in 0..samples {
                let (x, y, z) = domains::random_transverse_shilov_triple(fam, &mut rng, 1e-3)?;
                values.push(round_sig12(beta(fam, &x, &y, &z)?));
            }
            let (tag, params) = io::family_to_parts(fam);
            Ok(json!({
                "family": tag,
                "params": params,
                "samples": samples,
                "seed": seed,
                "values": values,
            }))
        }
        Cmd::Maslov {
            family,
            triple,
            model,
        } => {
            let (fam, x, y, z) = io::parse_triple(&read_file(&triple)?)?;
            family.check(fam)?;
            let mut margins = Vec::with_capacity(3);
            for (a, b) in [(&x, &y), (&x, &z), (&y, &z)] {
                margins.push(domains::transversality(fam, a, b)?.norm());
            }
            let value = match model {
                MaslovModel::Subspace => {
                    let l1 = subspace_of_shilov(fam, &x)?;
                    let l2 = subspace_of_shilov(fam, &y)?;
                    let l3 = subspace_of_shilov(fam, &z)?;
                    maslov_transverse(fam, &l1, &l2, &l3)
                }
                MaslovModel::Matrix => maslov_jordan(fam, &x, &y, &z),
            };
            // degeneracy report: on a non-transverse rejection, say how
            // close each pair is to failing
            let value = value.map_err(|e| match e {
                Error::NonTransverse(d) => Error::NonTransverse(format!(
                    "{d}; pair margins (xy, xz, yz) = ({:.3e}, {:.3e}, {:.3e})",
                    margins[0], margins[1], margins[2]
                )),
                other => other,
            })?;
            Ok(json!({
                "model": model.as_str(),
                "value": value,
                "pair_margins": margins.iter().map(|m| round_sig12(*m)).collect::<Vec<_>>(),
            }))
        }
        Cmd::Cayley { family, point } => {
            let (fam, z) = io::parse_point(&read_file(&point)?)?;
            family.check(fam)?;
            // tube model families only
            jordan_kind(fam)?;
            let y = cayley(&z)?;
            let im = y.sub(&y.adjoint()).scale(C64::new(0.0, -0.5));
            let (eigs, _) = herm_eigen(&im)?;
            Ok(json!({
                "image": io::matrix_to_json(&y),
                "im_spectrum": eigs.iter().map(|e| round_sig12(*e)).collect::<Vec<_>>(),
            }))
        }
        Cmd::TightCheck { hom } => {
            let h = io::parse_hom(&read_file(&hom)?)?;
            let report = is_tight(&h)?;
            let h2 = is_h2(&h)?;
            Ok(json!({
                "verdict": report.verdict.as_str(),
                "lambda": round_sig12(report.lambda),
                "h2": h2,
            }))
        }
        Cmd::Irrep { n } => {
            // matches the homomorphism parameter cap, so emitted files can
            // be read back by tight-check
            if !(1..=io::MAX_HOM_PARAM).contains(&n) {
                return Err(Error::Validation(format!(
                    "--n {n} outside 1..={}",
                    io::MAX_HOM_PARAM
                )));
            }
            Ok(io::hom_to_json(&sl2_irrep(n)?))
        }
        Cmd::Rootdata(fa) => {
            let family = fa.to_family()?;
            let rd = root_data(family)?;
            Ok(json!({ "r": rd.r, "a": rd.a, "b": rd.b, "tube": rd.tube() }))
        }
        Cmd::Toledo { rep, winding } => {
            let r = io::parse_rep(&read_file(&rep)?)?;
            let mut result = toledo(&r, None)?;
            if winding {
                result.winding = Some(toledo_winding(&r)?);
            }
            Ok(json!({
                "value": round_sig12(result.value),
                "bound": round_sig12(result.bound),
                "maximal": result.maximal,
                "winding": result.winding,
            }))
        }
        Cmd::Fixture { name, target } => {
            let rep = match name.as_str() {
                "fuchsian-g2" => fuchsian_genus2(),
                other => {
                    return Err(Error::Validation(format!(
                        "unknown fixture {other:?}, available: fuchsian-g2"
                    )))
                }
            };
            let rep = match target.as_deref() {
                None => rep,
                Some("sp4-diagonal") => diagonal_double(&rep)?,
                Some(other) => {
                    return Err(Error::Validation(format!(
                        "unknown target {other:?}, available: sp4-diagonal"
                    )))
                }
            };
            Ok(io::rep_to_json(&rep))
        }
        Cmd::Selftest => unreachable!("selftest is handled before dispatch"),
    }
}

fn selftest() -> i32 {
    let outcomes = acceptance::run_all();
    let all = outcomes.iter().all(|o| o.passed);
    let criteria: Vec<Value> = outcomes
        .iter()
        .map(|o| {
            json!({
                "criterion": o.index,
                "name": o.name,
                "passed": o.passed,
                "detail": o.detail,
            })
        })
        .collect();
    println!("{}", json!({ "passed": all, "criteria": criteria }));
    if all {
        0
    } else {
        1
    }
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                let _ = e.print();
                return 0;
            }
            _ => {
                let rendered = e.render().to_string();
                let detail = rendered
                    .lines()
                    .find(|l| !l.trim().is_empty())
                    .unwrap_or("invalid arguments")
                    .trim_start_matches("error: ")
                    .to_string();
                println!("{}", json!({ "error": "validation", "detail": detail }));
                return 2;
            }
        },
    };
    if matches!(cli.cmd, Cmd::Selftest) {
        return selftest();
    }
    match dispatch(cli.cmd) {
        Ok(v) => {
            println!("{v}");
            0
        }
        Err(e) => {
            println!("{}", json!({ "error": e.code(), "detail": e.detail() }));
            if e.is_validation() {
                2
            } else {
                3
            }
        }
    }
}

fn main() {
    std::process::exit(run());
}
