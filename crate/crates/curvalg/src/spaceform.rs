//! Curvature-dependent structures: the image of the curved-space valuation
//! algebra inside the dual algebra, membership tests with preimages, the
//! Q-operator on the tilde ring, and the first-order globalization
//! derivative H0'.
//!
//! Every `(1 - lambda s)^{m/2}` factor is expanded as a truncated binomial
//! series; truncation beyond weighted degree `2n` is exact inside the
//! quotients because `s` is nilpotent there. Equalities in a quotient with
//! denominators are decided after multiplying through by the unit
//! `1 - lambda s`, never by series division.

use crate::Error;
use crate::curv::CurvElement;
use crate::dual::{DualElement, Presentation};
use crate::linalg::Matrix;
use crate::poly::{Poly, Var, lambda_s_series};
use crate::ring::{Algebra, TildeValElement, ValElement};
use crate::scalar::{Rational, Scalar, rat};

/// A quotient context together with an exact rational curvature parameter.
pub struct LambdaContext<'a> {
    alg: &'a Algebra,
    lambda: Rational,
}

impl<'a> LambdaContext<'a> {
    pub fn new(alg: &'a Algebra, lambda: Rational) -> Self {
        LambdaContext { alg, lambda }
    }

    pub fn algebra(&self) -> &Algebra {
        self.alg
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    fn trunc(&self) -> u32 {
        self.alg.top_degree()
    }

    /// `(lambda/4) (1 - lambda s)^{-3/2}` truncated.
    fn p2_series(&self) -> Poly {
        let quarter = &self.lambda * &rat(1, 4);
        lambda_s_series(&rat(-3, 2), &self.lambda, self.trunc()).scale_rat(&quarter)
    }

    /// The image of the curved first generator:
    /// `(tbar - lambda tbar^3/4)(1 - lambda sbar)^{-3/2}
    ///  + (lambda/4)(1 - lambda sbar)^{-3/2} vbar`.
    pub fn t_lambda_bar(&self) -> DualElement {
        let numerator = Poly::t()
            - Poly::monomial((3, 0, 0), Scalar::one()).scale_rat(&(&self.lambda * &rat(1, 4)));
        let p1 = (&numerator * &lambda_s_series(&rat(-3, 2), &self.lambda, self.trunc()))
            .truncate_above(self.trunc());
        let pres = Presentation {
            p1: self.alg.reduce_val(&p1),
            p2: self.alg.reduce_tilde(&self.p2_series()),
        };
        self.alg.from_presentation(&pres)
    }

    /// The same element through the `wbar`-form
    /// `tbar (1 - lambda sbar)^{-1/2} + (lambda/4)(1 - lambda sbar)^{-3/2} wbar`.
    pub fn t_lambda_bar_w_form(&self) -> DualElement {
        let w1 = (&Poly::t() * &lambda_s_series(&rat(-1, 2), &self.lambda, self.trunc()))
            .truncate_above(self.trunc());
        self.from_w_parts(&w1, &self.p2_series())
    }

    /// Truncated `wbar`-presentation of `tbar_lambda`, the input shape taken
    /// by the membership test.
    pub fn t_lambda_w_parts(&self) -> (Poly, Poly) {
        let w1 = (&Poly::t() * &lambda_s_series(&rat(-1, 2), &self.lambda, self.trunc()))
            .truncate_above(self.trunc());
        (w1, self.p2_series())
    }

    /// Assembles `p1 + p2 wbar` with `wbar = vbar + tbar ubar`.
    pub fn from_w_parts(&self, p1: &Poly, p2: &Poly) -> DualElement {
        self.alg.from_w_parts(p1, p2)
    }

    /// `p(tbar_lambda, sbar)`: the Taylor expansion in `wbar` stops at the
    /// linear term since `wbar^2 = 0`.
    pub fn evaluate_valuation(&self, p: &Poly) -> DualElement {
        assert!(!p.has_v(), "valuations are polynomials in t, s");
        let trunc = self.trunc();
        let w1 = p.substitute_rescaled(&self.lambda, -1, trunc);
        let w2 = (&p.diff(Var::T).substitute_rescaled(&self.lambda, -1, trunc) * &self.p2_series())
            .truncate_above(trunc);
        self.from_w_parts(&w1, &w2)
    }

    /// Decides whether `p1 + p2 wbar` lies in the image of the curved
    /// valuation algebra: the condition is
    /// `(dp1/dt) lambda / (4 (1 - lambda s)) = p2` in the tilde ring,
    /// cleared to `lambda dp1/dt = 4 (1 - lambda s) p2`. The parts are raw
    /// polynomials: the pair of residues would not determine the element,
    /// since `tu` times the tilde ideal does not land in the valuation
    /// ideal. On success returns a preimage `q` with
    /// `q(tbar_lambda, sbar) = p1 + p2 wbar`.
    pub fn image_membership(&self, p1: &Poly, p2: &Poly) -> Option<Poly> {
        let one_minus = Poly::one() - Poly::s().scale_rat(&self.lambda);
        let lhs = p1.diff(Var::T).scale_rat(&self.lambda);
        let rhs = (&one_minus * p2).scale(&Scalar::from_int(4));
        if !self.alg.reduce_tilde(&(lhs - rhs)).is_zero() {
            return None;
        }
        // The solution space of the condition projects bijectively onto the
        // flat part of the v-presentation, so eliminating the lowest
        // surviving degree of that part converges to the preimage.
        let mut preimage = Poly::zero();
        let mut rem = self.from_w_parts(p1, p2);
        loop {
            let pres = self.alg.to_presentation(&rem);
            let Some(d) = lowest_degree(pres.p1.poly()) else {
                break;
            };
            let head = pres.p1.poly().homogeneous_part(d);
            preimage += head.clone();
            rem = &rem - &self.evaluate_valuation(&head);
        }
        debug_assert!(rem.is_zero(), "member with a flat-free remainder");
        Some(preimage)
    }

    /// `Q p = p + lambda/(4(1 - lambda s)) d(tup)/dt` on the tilde ring.
    pub fn q_apply(&self, p: &TildeValElement) -> TildeValElement {
        let trunc = self.trunc();
        let tup = &(&Poly::t() * &Poly::u()) * p.poly();
        let series = lambda_s_series(&rat(-1, 1), &self.lambda, trunc)
            .scale_rat(&(&self.lambda * &rat(1, 4)));
        let correction = (&tup.diff(Var::T) * &series).truncate_above(trunc);
        self.alg.reduce_tilde(&(p.poly() + &correction))
    }

    /// Matrix of the Q-operator over the tilde monomial basis.
    pub fn q_matrix(&self) -> Matrix {
        let monos = self.alg.tilde_monomial_basis();
        let cols: Vec<Vec<Scalar>> = monos
            .iter()
            .map(|m| {
                let img = self.q_apply(
                    &self
                        .alg
                        .reduce_tilde(&Poly::monomial((m.0, m.1, 0), Scalar::one())),
                );
                monos
                    .iter()
                    .map(|m2| img.poly().coeff((m2.0, m2.1, 0)))
                    .collect()
            })
            .collect();
        Matrix::from_fn(monos.len(), monos.len(), |r, c| cols[c][r].clone())
    }

    /// Inverse of the Q-operator; the matrix is invertible for every
    /// rational lambda.
    pub fn q_apply_inverse(&self, p: &TildeValElement) -> Result<TildeValElement, Error> {
        let monos = self.alg.tilde_monomial_basis();
        let rhs: Vec<Scalar> = monos
            .iter()
            .map(|m| p.poly().coeff((m.0, m.1, 0)))
            .collect();
        let x = self.q_matrix().solve_unique(&rhs, "Q operator")?;
        let mut out = Poly::zero();
        for (i, m) in monos.iter().enumerate() {
            out.insert_term((m.0, m.1, 0), x[i].clone());
        }
        Ok(self.alg.reduce_tilde(&out))
    }
}

fn lowest_degree(p: &Poly) -> Option<u32> {
    p.terms().map(|((a, b, _), _)| a + 2 * b).min()
}

/// `D1 p = ((t^2 - 2s)/2) p - (tu/4) dp/dt`.
pub fn d1_operator(p: &Poly) -> Poly {
    let head = (Poly::t().pow(2) - Poly::s().scale(&Scalar::from_int(2))).scale_rat(&rat(1, 2));
    let tail = (Poly::t() * Poly::u()).scale_rat(&rat(1, 4));
    &head * p - &tail * &p.diff(Var::T)
}

/// `D2 p = -(3 pi u t / 8) p + (pi u^2 / 8) dp/dt`.
pub fn d2_operator(p: &Poly) -> Poly {
    let head = (Poly::u() * Poly::t()).scale(&Scalar::rational_times_pi(rat(-3, 8), 1));
    let tail = Poly::u()
        .pow(2)
        .scale(&Scalar::rational_times_pi(rat(1, 8), 1));
    &head * p + &tail * &p.diff(Var::T)
}

/// The derivative at zero curvature of the globalization family:
/// decompose `phi = l(p) + n(q)` and return `D1 p + D2 q` in the valuation
/// ring.
pub fn h0_prime(alg: &Algebra, phi: &CurvElement) -> ValElement {
    let (p, q) = alg.decompose(phi);
    let image = d1_operator(p.poly()) + d2_operator(q.poly());
    alg.reduce_val(&image)
}
