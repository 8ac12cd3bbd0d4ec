//! JSON, CSV and LaTeX emitters for elements, reports and kinematic
//! tensors, plus the inverse JSON readers used by the CLI.
//!
//! All emitters iterate ordered maps, so output bytes are deterministic for
//! identical inputs.

use serde::{Deserialize, Serialize};

use crate::Error;
use crate::angular::AngularityReport;
use crate::curv::{CurvElement, CurvLabel, label_valid};
use crate::dual::{DualElement, GlobalKinematic, LocalKinematic};
use crate::ring::Algebra;
use crate::scalar::Scalar;
use crate::text::poly_to_text;

#[derive(Serialize, Deserialize, Clone, PartialEq, Eq, Debug)]
pub struct LabelJson {
    pub basis: String,
    pub k: u32,
    pub q: u32,
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Eq, Debug)]
pub struct TermJson {
    pub basis: String,
    pub k: u32,
    pub q: u32,
    pub coeff: String,
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Eq, Debug)]
pub struct ElementJson {
    pub n: u32,
    pub terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Eq, Debug)]
pub struct DimsJson {
    pub val: Vec<usize>,
    pub tilde: Vec<usize>,
    pub curv: usize,
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Eq, Debug)]
pub struct LocalTermJson {
    pub left: LabelJson,
    pub right: LabelJson,
    pub coeff: String,
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Eq, Debug)]
pub struct LocalTargetJson {
    pub n: u32,
    pub target: LabelJson,
    pub terms: Vec<LocalTermJson>,
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Eq, Debug)]
pub struct GlobalTermJson {
    pub left: String,
    pub right: String,
    pub coeff: String,
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Eq, Debug)]
pub struct GlobalTargetJson {
    pub n: u32,
    pub target: String,
    pub terms: Vec<GlobalTermJson>,
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Eq, Debug)]
pub struct WitnessJson {
    pub multiplier: LabelJson,
    pub component: LabelJson,
    pub coefficient: String,
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Eq, Debug)]
pub struct AngularJson {
    pub angular: bool,
    pub residue: String,
    pub witness: Option<WitnessJson>,
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Eq, Debug)]
pub struct ImageJson {
    pub member: bool,
    pub preimage: Option<String>,
}

fn label_json(label: &CurvLabel, starred: bool) -> LabelJson {
    let basis = match (label.is_delta(), starred) {
        (true, false) => "Delta",
        (false, false) => "N",
        (true, true) => "DeltaStar",
        (false, true) => "NStar",
    };
    LabelJson {
        basis: basis.to_string(),
        k: label.k(),
        q: label.q(),
    }
}

fn label_from_json(n: u32, j: &LabelJson, starred: bool) -> Result<CurvLabel, Error> {
    let expect = if starred {
        ["DeltaStar", "NStar"]
    } else {
        ["Delta", "N"]
    };
    let label = if j.basis == expect[0] {
        CurvLabel::Delta { k: j.k, q: j.q }
    } else if j.basis == expect[1] {
        CurvLabel::N { k: j.k, q: j.q }
    } else {
        return Err(Error::Parse(format!("unknown basis name '{}'", j.basis)));
    };
    if !label_valid(n, &label) {
        return Err(Error::Domain(format!(
            "label {}_{{{},{}}} is out of range for n = {n}",
            j.basis, j.k, j.q
        )));
    }
    Ok(label)
}

pub fn curv_to_json(e: &CurvElement) -> ElementJson {
    ElementJson {
        n: e.n(),
        terms: e
            .terms()
            .map(|(l, c)| {
                let lj = label_json(l, false);
                TermJson {
                    basis: lj.basis,
                    k: lj.k,
                    q: lj.q,
                    coeff: c.to_string(),
                }
            })
            .collect(),
    }
}

pub fn curv_from_json(j: &ElementJson) -> Result<CurvElement, Error> {
    let mut e = CurvElement::zero(j.n);
    for t in &j.terms {
        let label = label_from_json(
            j.n,
            &LabelJson {
                basis: t.basis.clone(),
                k: t.k,
                q: t.q,
            },
            false,
        )?;
        e.insert(label, crate::text::parse_scalar(&t.coeff)?);
    }
    Ok(e)
}

pub fn dual_to_json(e: &DualElement) -> ElementJson {
    ElementJson {
        n: e.n(),
        terms: e
            .terms()
            .map(|(l, c)| {
                let lj = label_json(l, true);
                TermJson {
                    basis: lj.basis,
                    k: lj.k,
                    q: lj.q,
                    coeff: c.to_string(),
                }
            })
            .collect(),
    }
}

pub fn dual_from_json(j: &ElementJson) -> Result<DualElement, Error> {
    let mut e = DualElement::zero(j.n);
    for t in &j.terms {
        let label = label_from_json(
            j.n,
            &LabelJson {
                basis: t.basis.clone(),
                k: t.k,
                q: t.q,
            },
            true,
        )?;
        e.insert(label, crate::text::parse_scalar(&t.coeff)?);
    }
    Ok(e)
}

pub fn dims_json(alg: &Algebra) -> DimsJson {
    DimsJson {
        val: alg.val_dims(),
        tilde: alg.tilde_dims(),
        curv: alg.curv_dim(),
    }
}

pub fn angular_to_json(r: &AngularityReport) -> AngularJson {
    AngularJson {
        angular: r.angular,
        residue: poly_to_text(r.residue.poly()),
        witness: r.witness.as_ref().map(|w| WitnessJson {
            multiplier: label_json(&w.multiplier, true),
            component: label_json(&w.component, true),
            coefficient: w.coefficient.to_string(),
        }),
    }
}

pub fn local_to_json(alg: &Algebra, kin: &LocalKinematic) -> Vec<LocalTargetJson> {
    let labels = alg.curv_basis_labels();
    let mut out = Vec::new();
    for j in kin.targets() {
        let row = kin.row(j).expect("listed target");
        out.push(LocalTargetJson {
            n: kin.n(),
            target: label_json(&labels[j], false),
            terms: row
                .iter()
                .map(|((k, l), c)| LocalTermJson {
                    left: label_json(&labels[*k], false),
                    right: label_json(&labels[*l], false),
                    coeff: c.to_string(),
                })
                .collect(),
        });
    }
    out
}

pub fn local_to_csv(alg: &Algebra, kin: &LocalKinematic) -> String {
    let labels = alg.curv_basis_labels();
    let mut out = String::from(
        "target_basis,target_k,target_q,left_basis,left_k,left_q,right_basis,right_k,right_q,coeff_text\n",
    );
    for j in kin.targets() {
        let t = label_json(&labels[j], false);
        for ((k, l), c) in kin.row(j).expect("listed target") {
            let lj = label_json(&labels[*k], false);
            let rj = label_json(&labels[*l], false);
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                t.basis, t.k, t.q, lj.basis, lj.k, lj.q, rj.basis, rj.k, rj.q, c
            ));
        }
    }
    out
}

fn label_latex(label: &CurvLabel, starred: bool) -> String {
    let head = if label.is_delta() { "\\Delta" } else { "N" };
    let star = if starred { "^*" } else { "" };
    format!("{head}{star}_{{{},{}}}", label.k(), label.q())
}

/// LaTeX for a scalar: single terms become `\frac{..}{..}` with the pi
/// power placed on the correct side, sums are joined with signs.
pub fn scalar_latex(s: &Scalar) -> String {
    if s.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    let terms: Vec<(i32, num_rational::BigRational)> =
        s.terms().map(|(e, c)| (e, c.clone())).collect();
    for (i, (e, c)) in terms.iter().rev().enumerate() {
        let neg = c < &num_rational::BigRational::from_integer(0.into());
        let abs = if neg { -c.clone() } else { c.clone() };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut num = abs.numer().to_string();
        let mut den = abs.denom().to_string();
        match e.cmp(&0) {
            std::cmp::Ordering::Greater => {
                let pi = if *e == 1 {
                    "\\pi".to_string()
                } else {
                    format!("\\pi^{{{e}}}")
                };
                num = if num == "1" {
                    pi
                } else {
                    format!("{num} {pi}")
                };
            }
            std::cmp::Ordering::Less => {
                let pi = if *e == -1 {
                    "\\pi".to_string()
                } else {
                    format!("\\pi^{{{}}}", -e)
                };
                den = if den == "1" {
                    pi
                } else {
                    format!("{den} {pi}")
                };
            }
            std::cmp::Ordering::Equal => {}
        }
        if den == "1" {
            out.push_str(&num);
        } else {
            out.push_str(&format!("\\frac{{{num}}}{{{den}}}"));
        }
    }
    out
}

pub fn local_to_latex(alg: &Algebra, kin: &LocalKinematic) -> String {
    let labels = alg.curv_basis_labels();
    let mut out = String::from("\\begin{align*}\n");
    for j in kin.targets() {
        let mut line = format!("K({}) &= ", label_latex(&labels[j], false));
        let mut first = true;
        for ((k, l), c) in kin.row(j).expect("listed target") {
            if !first {
                line.push_str(" + ");
            }
            line.push_str(&format!(
                "{} \\, {} \\otimes {}",
                scalar_latex(c),
                label_latex(&labels[*k], false),
                label_latex(&labels[*l], false)
            ));
            first = false;
        }
        line.push_str(" \\\\\n");
        out.push_str(&line);
    }
    out.push_str("\\end{align*}\n");
    out
}

pub fn mono_text(m: (u32, u32)) -> String {
    match (m.0, m.1) {
        (0, 0) => "1".to_string(),
        (a, 0) => format!("t^{a}"),
        (0, b) => format!("s^{b}"),
        (a, b) => format!("t^{a} s^{b}"),
    }
}

fn mono_latex(m: (u32, u32)) -> String {
    match (m.0, m.1) {
        (0, 0) => "1".to_string(),
        (a, 0) => format!("t^{{{a}}}"),
        (0, b) => format!("s^{{{b}}}"),
        (a, b) => format!("t^{{{a}}} s^{{{b}}}"),
    }
}

pub fn global_to_json(kin: &GlobalKinematic) -> Vec<GlobalTargetJson> {
    let basis = kin.basis();
    let mut out = Vec::new();
    for j in 0..basis.len() {
        let Some(row) = kin.row(j) else { continue };
        out.push(GlobalTargetJson {
            n: kin.n(),
            target: mono_text(basis[j]),
            terms: row
                .iter()
                .map(|((a, b), c)| GlobalTermJson {
                    left: mono_text(basis[*a]),
                    right: mono_text(basis[*b]),
                    coeff: c.to_string(),
                })
                .collect(),
        });
    }
    out
}

pub fn global_to_csv(kin: &GlobalKinematic) -> String {
    let basis = kin.basis();
    let mut out = String::from("target,left,right,coeff_text\n");
    for j in 0..basis.len() {
        let Some(row) = kin.row(j) else { continue };
        for ((a, b), c) in row {
            out.push_str(&format!(
                "{},{},{},{}\n",
                mono_text(basis[j]),
                mono_text(basis[*a]),
                mono_text(basis[*b]),
                c
            ));
        }
    }
    out
}

pub fn global_to_latex(kin: &GlobalKinematic) -> String {
    let basis = kin.basis();
    let mut out = String::from("\\begin{align*}\n");
    for j in 0..basis.len() {
        let Some(row) = kin.row(j) else { continue };
        let mut line = format!("k({}) &= ", mono_latex(basis[j]));
        let mut first = true;
        for ((a, b), c) in row {
            if !first {
                line.push_str(" + ");
            }
            line.push_str(&format!(
                "{} \\, {} \\otimes {}",
                scalar_latex(c),
                mono_latex(basis[*a]),
                mono_latex(basis[*b])
            ));
            first = false;
        }
        line.push_str(" \\\\\n");
        out.push_str(&line);
    }
    out.push_str("\\end{align*}\n");
    out
}
