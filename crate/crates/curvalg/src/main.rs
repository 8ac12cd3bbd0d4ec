//! Command-line front end: batch computation of dimensions, normal forms,
//! products, kinematic tensors, globalization, curved-space images and
//! angularity checks. Output is deterministic: identical invocations emit
//! identical bytes. Exit status is 0 on success and 1 on any parse or
//! domain error, with a diagnostic on stderr.

use clap::{Parser, Subcommand, ValueEnum};

use curvalg::angular::is_angular_valuation;
use curvalg::dual::{global_kinematic, local_kinematic};
use curvalg::poly::Poly;
use curvalg::ring::Algebra;
use curvalg::serialize::{
    ImageJson, angular_to_json, curv_from_json, curv_to_json, dims_json, dual_to_json,
    global_to_csv, global_to_json, global_to_latex, local_to_csv, local_to_json, local_to_latex,
};
use curvalg::spaceform::LambdaContext;
use curvalg::text::{parse_poly, parse_rational, poly_to_text};
use curvalg::{Error, Scalar};

#[derive(Parser)]
#[command(
    name = "curvalg",
    about = "Exact algebra of unitarily invariant curvature measures",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Latex,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Ring {
    Val,
    Tilde,
}

#[derive(Subcommand)]
enum Cmd {
    /// Quotient dimensions per degree and the total basis size
    Dims {
        #[arg(long)]
        n: u32,
    },
    /// The ordered Delta/N basis labels
    Basis {
        #[arg(long)]
        n: u32,
    },
    /// Normal form of an expression in one of the two quotient rings
    Reduce {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = Ring::Val)]
        ring: Ring,
        expr: String,
    },
    /// Product of two expressions, reduced in the valuation ring
    Mul {
        #[arg(long)]
        n: u32,
        left: String,
        right: String,
    },
    /// Product of two dual elements given as polynomials in t, s, v
    DualMul {
        #[arg(long)]
        n: u32,
        left: String,
        right: String,
    },
    /// The full local kinematic coefficient tensor
    KinematicLocal {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// The global kinematic tensor over the valuation monomial basis
    KinematicGlobal {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Globalize a curvature measure (element JSON on stdin)
    Globalize {
        #[arg(long)]
        n: u32,
    },
    /// Module-multiply a valuation expression against a measure (JSON on stdin)
    ModuleMul {
        #[arg(long)]
        n: u32,
        valuation: String,
    },
    /// The image of the curved generator t_lambda in the dual algebra
    Tlambda {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        lambda: String,
    },
    /// Membership of p1 + p2*w in the curved valuation image, with preimage
    ImageCheck {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        lambda: String,
        p1: String,
        p2: String,
    },
    /// Angularity of a valuation polynomial on the space form
    AngularCheck {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        lambda: String,
        expr: String,
    },
}

fn check_n(n: u32) -> Result<(), Error> {
    if n < 1 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    Ok(())
}

fn parse_flat(src: &str) -> Result<Poly, Error> {
    let p = parse_poly(src)?;
    if p.has_v() {
        return Err(Error::Parse("expression must not involve v".into()));
    }
    Ok(p)
}

/// Rewrites `v`-powers through `v^2 = -2tuv - (tu)^2` down to a linear
/// presentation and evaluates it in the dual algebra.
fn poly_to_dual(alg: &Algebra, p: &Poly) -> curvalg::DualElement {
    let tu = Poly::t() * Poly::u();
    let tu2 = &tu * &tu;
    let max_v = p.terms().map(|((_, _, c), _)| c).max().unwrap_or(0);
    let mut parts: Vec<Poly> = vec![Poly::zero(); (max_v as usize) + 1];
    for ((a, b, c), coeff) in p.terms() {
        parts[c as usize].insert_term((a, b, 0), coeff.clone());
    }
    for c in (2..parts.len()).rev() {
        let top = std::mem::replace(&mut parts[c], Poly::zero());
        if top.is_zero() {
            continue;
        }
        let down1 = (&top * &tu).scale(&Scalar::from_int(-2));
        let down2 = -(&top * &tu2);
        parts[c - 1] += down1;
        parts[c - 2] += down2;
    }
    let p2 = parts.get(1).cloned().unwrap_or_default();
    let pres = curvalg::Presentation {
        p1: alg.reduce_val(&parts[0]),
        p2: alg.reduce_tilde(&p2),
    };
    alg.from_presentation(&pres)
}

fn read_stdin() -> Result<String, Error> {
    std::io::read_to_string(std::io::stdin())
        .map_err(|e| Error::Parse(format!("cannot read stdin: {e}")))
}

fn run(cmd: Cmd) -> Result<String, Error> {
    match cmd {
        Cmd::Dims { n } => {
            check_n(n)?;
            let alg = Algebra::try_new(n)?;
            Ok(serde_json::to_string(&dims_json(&alg)).expect("serialize"))
        }
        Cmd::Basis { n } => {
            check_n(n)?;
            let alg = Algebra::try_new(n)?;
            let labels: Vec<_> = alg
                .curv_basis_labels()
                .iter()
                .map(|l| {
                    serde_json::json!({
                        "basis": if l.is_delta() { "Delta" } else { "N" },
                        "k": l.k(),
                        "q": l.q(),
                    })
                })
                .collect();
            Ok(
                serde_json::to_string(&serde_json::json!({"n": n, "labels": labels}))
                    .expect("serialize"),
            )
        }
        Cmd::Reduce { n, ring, expr } => {
            check_n(n)?;
            let alg = Algebra::try_new(n)?;
            let p = parse_flat(&expr)?;
            let normal = match ring {
                Ring::Val => poly_to_text(alg.reduce_val(&p).poly()),
                Ring::Tilde => poly_to_text(alg.reduce_tilde(&p).poly()),
            };
            let name = match ring {
                Ring::Val => "val",
                Ring::Tilde => "tilde",
            };
            Ok(serde_json::to_string(
                &serde_json::json!({"n": n, "ring": name, "normal_form": normal}),
            )
            .expect("serialize"))
        }
        Cmd::Mul { n, left, right } => {
            check_n(n)?;
            let alg = Algebra::try_new(n)?;
            let product = alg.val_mul(
                &alg.reduce_val(&parse_flat(&left)?),
                &alg.reduce_val(&parse_flat(&right)?),
            );
            Ok(serde_json::to_string(
                &serde_json::json!({"n": n, "product": poly_to_text(product.poly())}),
            )
            .expect("serialize"))
        }
        Cmd::DualMul { n, left, right } => {
            check_n(n)?;
            let alg = Algebra::try_new(n)?;
            let x = poly_to_dual(&alg, &parse_poly(&left)?);
            let y = poly_to_dual(&alg, &parse_poly(&right)?);
            let prod = alg.dual_mul(&x, &y);
            Ok(serde_json::to_string(&dual_to_json(&prod)).expect("serialize"))
        }
        Cmd::KinematicLocal { n, format } => {
            check_n(n)?;
            let alg = Algebra::try_new(n)?;
            let kin = local_kinematic(&alg);
            Ok(match format {
                Format::Json => {
                    serde_json::to_string(&local_to_json(&alg, &kin)).expect("serialize")
                }
                Format::Csv => local_to_csv(&alg, &kin),
                Format::Latex => local_to_latex(&alg, &kin),
            })
        }
        Cmd::KinematicGlobal { n, format } => {
            check_n(n)?;
            let alg = Algebra::try_new(n)?;
            let kin = global_kinematic(&alg);
            Ok(match format {
                Format::Json => serde_json::to_string(&global_to_json(&kin)).expect("serialize"),
                Format::Csv => global_to_csv(&kin),
                Format::Latex => global_to_latex(&kin),
            })
        }
        Cmd::Globalize { n } => {
            check_n(n)?;
            let alg = Algebra::try_new(n)?;
            let json: curvalg::serialize::ElementJson = serde_json::from_str(&read_stdin()?)
                .map_err(|e| Error::Parse(format!("bad element JSON: {e}")))?;
            if json.n != n {
                return Err(Error::Domain(format!(
                    "element has n = {}, expected {n}",
                    json.n
                )));
            }
            let phi = curv_from_json(&json)?;
            let val = alg.globalize(&phi);
            Ok(serde_json::to_string(
                &serde_json::json!({"n": n, "valuation": poly_to_text(val.poly())}),
            )
            .expect("serialize"))
        }
        Cmd::ModuleMul { n, valuation } => {
            check_n(n)?;
            let alg = Algebra::try_new(n)?;
            let p = alg.reduce_val(&parse_flat(&valuation)?);
            let json: curvalg::serialize::ElementJson = serde_json::from_str(&read_stdin()?)
                .map_err(|e| Error::Parse(format!("bad element JSON: {e}")))?;
            if json.n != n {
                return Err(Error::Domain(format!(
                    "element has n = {}, expected {n}",
                    json.n
                )));
            }
            let phi = curv_from_json(&json)?;
            let out = alg.module_mul_flat(&p, &phi);
            Ok(serde_json::to_string(&curv_to_json(&out)).expect("serialize"))
        }
        Cmd::Tlambda { n, lambda } => {
            check_n(n)?;
            let alg = Algebra::try_new(n)?;
            let ctx = LambdaContext::new(&alg, parse_rational(&lambda)?);
            Ok(serde_json::to_string(&dual_to_json(&ctx.t_lambda_bar())).expect("serialize"))
        }
        Cmd::ImageCheck { n, lambda, p1, p2 } => {
            check_n(n)?;
            let alg = Algebra::try_new(n)?;
            let ctx = LambdaContext::new(&alg, parse_rational(&lambda)?);
            let preimage = ctx.image_membership(&parse_flat(&p1)?, &parse_flat(&p2)?);
            let json = ImageJson {
                member: preimage.is_some(),
                preimage: preimage.map(|q| poly_to_text(&q)),
            };
            Ok(serde_json::to_string(&json).expect("serialize"))
        }
        Cmd::AngularCheck { n, lambda, expr } => {
            check_n(n)?;
            let alg = Algebra::try_new(n)?;
            let ctx = LambdaContext::new(&alg, parse_rational(&lambda)?);
            let report = is_angular_valuation(&ctx, &parse_flat(&expr)?)?;
            Ok(serde_json::to_string(&angular_to_json(&report)).expect("serialize"))
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                eprint!("{e}");
                std::process::exit(1);
            }
            // help and version go to stdout with status 0
            print!("{e}");
            std::process::exit(0);
        }
    };
    match run(cli.cmd) {
        Ok(out) => println!("{out}"),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    }
}
