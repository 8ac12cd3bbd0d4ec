//! Angularity of dual curvature measures and of invariant valuations on
//! complex space forms.
//!
//! The angular span is the space of `Delta` measures; its annihilator is
//! spanned by the `N*` duals. A dual measure is angular when multiplication
//! by it preserves that annihilator. Three equivalent checks exist: the
//! definitional scan over all `N*` labels, the fast scan against the single
//! top label `N*_{2n-3,n-2}`, and a closed polynomial criterion on the
//! presentation; reports carry both a witness (which product breaks out of
//! the annihilator) and the reduced criterion residue.

use crate::Error;
use crate::curv::{CurvElement, CurvLabel};
use crate::dual::{DualElement, Presentation};
use crate::linalg::Matrix;
use crate::poly::{Poly, Var};
use crate::ring::{Algebra, ValElement};
use crate::scalar::{Scalar, rat};
use crate::spaceform::LambdaContext;

/// Scan breadth for the definitional check.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CheckMode {
    /// Every `N*` label.
    Full,
    /// Only `N*_{2n-3,n-2}`, which generates the annihilator as a module.
    Fast,
}

/// Which presentation shape a `(p1, p2)` pair denotes.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PresentationForm {
    /// `p1 + p2 vbar`.
    V,
    /// `p1 + p2 wbar` with `wbar = vbar + tbar ubar`.
    W,
}

/// A concrete failure of angularity: multiplying by `multiplier` produced a
/// `Delta*` component.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Witness {
    pub multiplier: CurvLabel,
    pub component: CurvLabel,
    pub coefficient: Scalar,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AngularityReport {
    pub angular: bool,
    pub witness: Option<Witness>,
    /// The reduced polynomial from the applicable criterion; zero exactly
    /// when the verdict is positive.
    pub residue: ValElement,
}

/// `tsu (-6 t p2 + dp1/ds - (dp2/ds) tu)` reduced in the valuation ring.
pub fn criterion_residue_v(alg: &Algebra, p1: &Poly, p2: &Poly) -> ValElement {
    let tu = Poly::t() * Poly::u();
    let tsu = &(&Poly::t() * &Poly::s()) * &Poly::u();
    let inner =
        p2.scale(&Scalar::from_int(-6)) * Poly::t() + p1.diff(Var::S) - p2.diff(Var::S) * tu;
    alg.reduce_val(&(&tsu * &inner))
}

/// `tsu (dp1/ds - 2 t p2)` reduced in the valuation ring.
pub fn criterion_residue_w(alg: &Algebra, p1: &Poly, p2: &Poly) -> ValElement {
    let tsu = &(&Poly::t() * &Poly::s()) * &Poly::u();
    let inner = p1.diff(Var::S) - p2.scale(&Scalar::from_int(2)) * Poly::t();
    alg.reduce_val(&(&tsu * &inner))
}

fn n_star_labels(alg: &Algebra, mode: CheckMode) -> Vec<CurvLabel> {
    let n = alg.n();
    match mode {
        CheckMode::Fast => vec![CurvLabel::N {
            k: 2 * n - 3,
            q: n - 2,
        }],
        CheckMode::Full => alg
            .curv_basis_labels()
            .iter()
            .copied()
            .filter(|l| !l.is_delta())
            .collect(),
    }
}

fn scan_for_witness(alg: &Algebra, l: &DualElement, mode: CheckMode) -> Option<Witness> {
    for label in n_star_labels(alg, mode) {
        let prod = alg.dual_mul(l, &DualElement::basis(alg.n(), label));
        if prod.in_angular_annihilator() {
            continue;
        }
        for (comp, c) in prod.terms() {
            if comp.is_delta() {
                return Some(Witness {
                    multiplier: label,
                    component: *comp,
                    coefficient: c.clone(),
                });
            }
        }
    }
    None
}

fn report(
    alg: &Algebra,
    residue: ValElement,
    element: &DualElement,
    mode: CheckMode,
) -> Result<AngularityReport, Error> {
    let witness = scan_for_witness(alg, element, mode);
    if witness.is_none() != residue.is_zero() {
        return Err(Error::Domain(
            "angularity criterion disagrees with the definitional scan".into(),
        ));
    }
    Ok(AngularityReport {
        angular: witness.is_none(),
        witness,
        residue,
    })
}

/// Is the dual measure angular? For `n = 1` the annihilator is trivial and
/// the question degenerates.
pub fn is_angular_dual(
    alg: &Algebra,
    l: &DualElement,
    mode: CheckMode,
) -> Result<AngularityReport, Error> {
    if alg.n() == 1 {
        return Err(Error::AngularTrivial);
    }
    let pres = alg.to_presentation(l);
    let residue = criterion_residue_v(alg, pres.p1.poly(), pres.p2.poly());
    report(alg, residue, l, mode)
}

/// Angularity of `p1 + p2 vbar` (or the `wbar` form), checked through the
/// closed polynomial criterion and cross-validated by the fast scan.
pub fn is_angular_presentation(
    alg: &Algebra,
    p1: &Poly,
    p2: &Poly,
    form: PresentationForm,
) -> Result<AngularityReport, Error> {
    if alg.n() == 1 {
        return Err(Error::AngularTrivial);
    }
    let (residue, element) = match form {
        PresentationForm::V => {
            let pres = Presentation {
                p1: alg.reduce_val(p1),
                p2: alg.reduce_tilde(p2),
            };
            (
                criterion_residue_v(alg, p1, p2),
                alg.from_presentation(&pres),
            )
        }
        PresentationForm::W => (criterion_residue_w(alg, p1, p2), alg.from_w_parts(p1, p2)),
    };
    report(alg, residue, &element, CheckMode::Fast)
}

/// Angularity of the valuation `p(t_lambda, s)`:
/// `tsu (dp/ds)(t (1-lambda s)^{-1/2}, s) = 0` in the valuation ring,
/// cross-checked against the fast scan of the evaluated dual element.
pub fn is_angular_valuation(ctx: &LambdaContext<'_>, p: &Poly) -> Result<AngularityReport, Error> {
    let alg = ctx.algebra();
    if alg.n() == 1 {
        return Err(Error::AngularTrivial);
    }
    let tsu = &(&Poly::t() * &Poly::s()) * &Poly::u();
    let substituted = p
        .diff(Var::S)
        .substitute_rescaled(ctx.lambda(), -1, alg.top_degree());
    let residue = alg.reduce_val(&(&tsu * &substituted));
    let element = ctx.evaluate_valuation(p);
    report(alg, residue, &element, CheckMode::Fast)
}

/// The angular measure generated by a potential `g` in `t, u`
/// (the `s`-slot of the polynomial is read as powers of `u`):
/// `l(g + 2u dg/du) + n((4t/pi) dg/du)`; the result lies in the Delta span.
pub fn angular_measure_from_potential(alg: &Algebra, g_tu: &Poly) -> Result<CurvElement, Error> {
    if alg.n() == 1 {
        return Err(Error::NoNGenerators);
    }
    let dg_du = g_tu.diff(Var::S);
    let mut q1_tu = g_tu.clone();
    q1_tu += Poly::monomial((0, 1, 0), Scalar::from_int(2)) * dg_du.clone();
    let q2_tu = Poly::monomial((1, 0, 0), Scalar::rational_times_pi(rat(4, 1), -1)) * dg_du;
    let q1 = alg.reduce_val(&Poly::from_tu(&q1_tu));
    let q2 = alg.reduce_tilde(&Poly::from_tu(&q2_tu));
    Ok(&alg.ell_map(&q1) + &alg.en_map(&q2)?)
}

/// A basis of the degree-`k` slice of the angular subalgebra: the nullspace
/// of the criterion on degree-`k` polynomials, pruned so that the returned
/// valuations are linearly independent as dual elements.
pub fn angular_valuation_basis(ctx: &LambdaContext<'_>, k: u32) -> Result<Vec<Poly>, Error> {
    let alg = ctx.algebra();
    if alg.n() == 1 {
        return Err(Error::AngularTrivial);
    }
    let monos: Vec<(u32, u32)> = (0..=(k / 2)).map(|b| (k - 2 * b, b)).collect();
    let val_basis = alg.val_monomial_basis();
    // residue coordinates, one column per candidate monomial
    let cols: Vec<Vec<Scalar>> = monos
        .iter()
        .map(|m| {
            let p = Poly::monomial((m.0, m.1, 0), Scalar::one());
            let r = is_residue_only(ctx, &p);
            val_basis
                .iter()
                .map(|vm| r.poly().coeff((vm.0, vm.1, 0)))
                .collect()
        })
        .collect();
    let mat = Matrix::from_fn(val_basis.len(), monos.len(), |r, c| cols[c][r].clone());
    let null = mat.nullspace()?;
    // prune candidates whose evaluation is dependent on the ones kept
    let labels = alg.curv_basis_labels();
    let mut kept: Vec<Poly> = Vec::new();
    let mut image_rows: Vec<Vec<Scalar>> = Vec::new();
    for vec in null {
        let mut p = Poly::zero();
        for (i, m) in monos.iter().enumerate() {
            p.insert_term((m.0, m.1, 0), vec[i].clone());
        }
        if p.is_zero() {
            continue;
        }
        let image = ctx.evaluate_valuation(&p);
        let row: Vec<Scalar> = labels.iter().map(|l| image.coeff(l)).collect();
        let mut probe = image_rows.clone();
        probe.push(row.clone());
        let m = Matrix::from_fn(probe.len(), row.len(), |r, c| probe[r][c].clone());
        if m.rank()? == probe.len() {
            image_rows.push(row);
            kept.push(p);
        }
    }
    Ok(kept)
}

fn is_residue_only(ctx: &LambdaContext<'_>, p: &Poly) -> ValElement {
    let alg = ctx.algebra();
    let tsu = &(&Poly::t() * &Poly::s()) * &Poly::u();
    let substituted = p
        .diff(Var::S)
        .substitute_rescaled(ctx.lambda(), -1, alg.top_degree());
    alg.reduce_val(&(&tsu * &substituted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_poly;

    fn p(src: &str) -> Poly {
        parse_poly(src).unwrap()
    }

    fn delta(k: u32, q: u32) -> CurvLabel {
        CurvLabel::Delta { k, q }
    }

    #[test]
    fn unit_and_tbar_are_angular() {
        for n in 2..=4u32 {
            let alg = Algebra::new(n);
            for mode in [CheckMode::Full, CheckMode::Fast] {
                let r = is_angular_dual(&alg, &alg.dual_unit(), mode).unwrap();
                assert!(r.angular, "unit n={n}");
                assert!(r.residue.is_zero());
                let r = is_angular_dual(&alg, &alg.tbar(), mode).unwrap();
                assert!(r.angular, "tbar n={n}");
            }
        }
    }

    #[test]
    fn vbar_angularity_depends_on_n() {
        // angular at n=2 (the residue has degree 6 > 4), not at n=3
        let a2 = Algebra::new(2);
        let r = is_angular_dual(&a2, &a2.vbar(), CheckMode::Full).unwrap();
        assert!(r.angular);
        let a3 = Algebra::new(3);
        let r = is_angular_dual(&a3, &a3.vbar(), CheckMode::Full).unwrap();
        assert!(!r.angular);
        assert!(r.witness.is_some());
        // residue -6 t^2 s u reduces to -(3/5) t^6 at n=3
        assert_eq!(r.residue, a3.reduce_val(&p("-3/5 * t^6")));
    }

    #[test]
    fn n1_is_degenerate() {
        let a1 = Algebra::new(1);
        assert!(matches!(
            is_angular_dual(&a1, &a1.dual_unit(), CheckMode::Full),
            Err(Error::AngularTrivial)
        ));
    }

    #[test]
    fn presentation_forms_agree() {
        // shared p2, p1 shifted by tu p2
        let alg = Algebra::new(3);
        let tu = Poly::t() * Poly::u();
        let cases = [
            (p("t^2"), p("1")),
            (p("s"), p("t")),
            (p("t^3 - s * t"), p("2 + t")),
        ];
        for (p1, p2) in cases {
            let rv = is_angular_presentation(&alg, &p1, &p2, PresentationForm::V).unwrap();
            let w1 = &p1 - &(&tu * &p2);
            let rw = is_angular_presentation(&alg, &w1, &p2, PresentationForm::W).unwrap();
            assert_eq!(rv.angular, rw.angular);
            assert_eq!(rv.residue, rw.residue);
        }
    }

    #[test]
    fn presentation_examples() {
        // (t^k, 0) is angular: no s-dependence
        let alg = Algebra::new(3);
        for k in 0..=6u32 {
            let r = is_angular_presentation(
                &alg,
                &Poly::monomial((k, 0, 0), Scalar::one()),
                &Poly::zero(),
                PresentationForm::V,
            )
            .unwrap();
            assert!(r.angular, "t^{k}");
            assert!(r.residue.is_zero());
        }
        // (0, 1) in v-form: angular at n=2, not at n=3
        let a2 = Algebra::new(2);
        let r =
            is_angular_presentation(&a2, &Poly::zero(), &Poly::one(), PresentationForm::V).unwrap();
        assert!(r.angular);
        let r = is_angular_presentation(&alg, &Poly::zero(), &Poly::one(), PresentationForm::V)
            .unwrap();
        assert!(!r.angular);
    }

    #[test]
    fn valuation_examples() {
        // polynomials in t alone are angular
        let alg = Algebra::new(3);
        let ctx = LambdaContext::new(&alg, rat(1, 2));
        let r = is_angular_valuation(&ctx, &p("t^3 + 2 * t")).unwrap();
        assert!(r.angular);
        // the quartic with vanishing criterion at n=4, lambda=0
        let a4 = Algebra::new(4);
        let ctx0 = LambdaContext::new(&a4, rat(0, 1));
        let quartic = p("t^4 - 6 * s * t^2 + 6 * s^2");
        let r = is_angular_valuation(&ctx0, &quartic).unwrap();
        assert!(r.angular);
        assert!(r.residue.is_zero());
        // it is not a polynomial in t alone: no degree-4 relations bind t and s
        let nf = a4.reduce_val(&quartic);
        let t4 = a4.reduce_val(&p("t^4"));
        assert_eq!(nf.poly(), &quartic);
        assert_ne!(nf.poly(), t4.poly());
        // p = s at n=3, lambda=0: not angular, residue (1/10) t^5
        let a3ctx = LambdaContext::new(&alg, rat(0, 1));
        let r = is_angular_valuation(&a3ctx, &Poly::s()).unwrap();
        assert!(!r.angular);
        assert_eq!(r.residue, alg.reduce_val(&p("1/10 * t^5")));
    }

    #[test]
    fn potential_examples() {
        let alg = Algebra::new(3);
        // g = 1 gives Delta_00
        assert_eq!(
            angular_measure_from_potential(&alg, &Poly::one()).unwrap(),
            CurvElement::basis(3, delta(0, 0))
        );
        // g = t^k gives l(t^k)
        for k in 0..=3u32 {
            let g = Poly::monomial((k, 0, 0), Scalar::one());
            assert_eq!(
                angular_measure_from_potential(&alg, &g).unwrap(),
                alg.ell_map(&alg.reduce_val(&g)),
                "g = t^{k}"
            );
        }
        // g = u gives (6/pi) Delta_21
        let got = angular_measure_from_potential(&alg, &Poly::monomial((0, 1, 0), Scalar::one()))
            .unwrap();
        assert_eq!(
            got,
            CurvElement::basis(3, delta(2, 1)).scale(&Scalar::rational_times_pi(rat(6, 1), -1))
        );
        // every potential image lies in the Delta span
        for g_src in ["t^2 s^1", "s^2", "t^1 s^1 + 3 * t^3"] {
            let got = angular_measure_from_potential(&alg, &p(g_src)).unwrap();
            assert!(got.is_angular_span(), "g = {g_src}");
        }
    }

    #[test]
    fn basis_examples() {
        let alg = Algebra::new(4);
        let ctx = LambdaContext::new(&alg, rat(0, 1));
        let b0 = angular_valuation_basis(&ctx, 0).unwrap();
        assert_eq!(b0, vec![Poly::one()]);
        let b1 = angular_valuation_basis(&ctx, 1).unwrap();
        assert_eq!(b1, vec![Poly::t()]);
        // degree 4 at n=4 contains the quartic up to span
        let b4 = angular_valuation_basis(&ctx, 4).unwrap();
        for q in &b4 {
            assert!(is_angular_valuation(&ctx, q).unwrap().angular);
        }
        let quartic = p("t^4 - 6 * s * t^2 + 6 * s^2");
        let target = ctx.evaluate_valuation(&quartic);
        let labels = alg.curv_basis_labels();
        let rows: Vec<Vec<Scalar>> = b4
            .iter()
            .map(|q| {
                let e = ctx.evaluate_valuation(q);
                labels.iter().map(|l| e.coeff(l)).collect()
            })
            .collect();
        let mat = Matrix::from_fn(labels.len(), rows.len(), |r, c| rows[c][r].clone());
        let rhs: Vec<Scalar> = labels.iter().map(|l| target.coeff(l)).collect();
        assert!(
            mat.solve_unique(&rhs, "span membership").is_ok(),
            "quartic must lie in the span of the degree-4 basis"
        );
    }
}
