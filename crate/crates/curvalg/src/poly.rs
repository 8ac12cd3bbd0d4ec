//! Weighted-graded polynomials in `t`, `s`, `v` (degrees 1, 2, 3) over exact
//! scalars, together with the generating series cutting out the quotient
//! rings and the truncated binomial substitutions used on space forms.

use num_bigint::BigInt;
use num_traits::One;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::scalar::{Rational, Scalar, factorial, rat};

/// Exponent triple `(a, b, c)` for the monomial `t^a s^b v^c`.
pub type Mono = (u32, u32, u32);

/// Weighted degree of a monomial: `a + 2b + 3c`.
pub fn mono_degree(m: Mono) -> u32 {
    m.0 + 2 * m.1 + 3 * m.2
}

/// Differentiation variable.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Var {
    T,
    S,
}

/// A polynomial in `t`, `s`, `v` with [`Scalar`] coefficients.
/// No zero coefficients are stored; equality is canonical.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Mono, Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::monomial((0, 0, 0), c)
    }

    pub fn t() -> Self {
        Poly::monomial((1, 0, 0), Scalar::one())
    }

    pub fn s() -> Self {
        Poly::monomial((0, 1, 0), Scalar::one())
    }

    pub fn v() -> Self {
        Poly::monomial((0, 0, 1), Scalar::one())
    }

    /// `u = 4s - t^2`.
    pub fn u() -> Self {
        let mut p = Poly::monomial((0, 1, 0), Scalar::from_int(4));
        p += Poly::monomial((2, 0, 0), Scalar::from_int(-1));
        p
    }

    /// `e = -(pi/2) u^2`.
    pub fn e() -> Self {
        let mut p = Poly::u().pow(2);
        p.scale_assign(&Scalar::rational_times_pi(rat(-1, 2), 1));
        p
    }

    pub fn monomial(m: Mono, c: Scalar) -> Self {
        let mut p = Poly::zero();
        p.insert_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Mono, &Scalar)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn coeff(&self, m: Mono) -> Scalar {
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    pub fn has_v(&self) -> bool {
        self.terms.keys().any(|m| m.2 > 0)
    }

    pub fn insert_term(&mut self, m: Mono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Largest weighted degree of a stored monomial.
    pub fn weighted_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| mono_degree(*m)).max()
    }

    /// The weighted-homogeneous component of degree `k`.
    pub fn homogeneous_part(&self, k: u32) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in self.terms() {
            if mono_degree(m) == k {
                out.insert_term(m, c.clone());
            }
        }
        out
    }

    /// Drops every term of weighted degree above `k`.
    pub fn truncate_above(&self, k: u32) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in self.terms() {
            if mono_degree(m) <= k {
                out.insert_term(m, c.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        let mut out = self.clone();
        out.scale_assign(c);
        out
    }

    pub fn scale_assign(&mut self, c: &Scalar) {
        if c.is_zero() {
            *self = Poly::zero();
            return;
        }
        let old = std::mem::take(&mut self.terms);
        for (m, old_c) in old {
            self.insert_term(m, &old_c * c);
        }
    }

    pub fn scale_rat(&self, r: &Rational) -> Poly {
        self.scale(&Scalar::from_rational(r.clone()))
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative in `t` or `s`. Panics on `v`-carrying input.
    pub fn diff(&self, var: Var) -> Poly {
        let mut out = Poly::zero();
        for ((a, b, c), coeff) in self.terms() {
            assert_eq!(c, 0, "derivative of a v-carrying polynomial");
            match var {
                Var::T if a > 0 => {
                    out.insert_term((a - 1, b, 0), &Scalar::from_int(a as i64) * coeff);
                }
                Var::S if b > 0 => {
                    out.insert_term((a, b - 1, 0), &Scalar::from_int(b as i64) * coeff);
                }
                _ => {}
            }
        }
        out
    }

    /// Reads a polynomial whose `s`-slot holds powers of `u` and expands
    /// `u = 4s - t^2`.
    pub fn from_tu(p_tu: &Poly) -> Poly {
        let u = Poly::u();
        let mut out = Poly::zero();
        for ((a, b, c), coeff) in p_tu.terms() {
            assert_eq!(c, 0, "t,u polynomial with a v factor");
            let term = Poly::monomial((a, 0, 0), coeff.clone()) * u.pow(b);
            out += term;
        }
        out
    }

    /// Substitutes `t -> t (1 - lambda s)^{half_power/2}` with the binomial
    /// series truncated beyond weighted degree `trunc`.
    pub fn substitute_rescaled(&self, lambda: &Rational, half_power: i32, trunc: u32) -> Poly {
        assert!(
            !self.has_v(),
            "rescaling substitution on a v-carrying polynomial"
        );
        debug_assert!(self.weighted_degree().unwrap_or(0) <= trunc);
        let mut out = Poly::zero();
        for ((a, b, _), coeff) in self.terms() {
            let alpha = Rational::new(BigInt::from(a as i64 * half_power as i64), BigInt::from(2));
            let deg = a + 2 * b;
            if deg > trunc {
                continue;
            }
            let series = lambda_s_series(&alpha, lambda, trunc - deg);
            out += (Poly::monomial((a, b, 0), coeff.clone()) * series).truncate_above(trunc);
        }
        out
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        self += rhs;
        self
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.clone() + rhs.clone()
    }
}

impl AddAssign for Poly {
    fn add_assign(&mut self, rhs: Poly) {
        for (m, c) in rhs.terms {
            self.insert_term(m, c);
        }
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(mut self, rhs: Poly) -> Poly {
        self -= rhs;
        self
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.clone() - rhs.clone()
    }
}

impl SubAssign for Poly {
    fn sub_assign(&mut self, rhs: Poly) {
        for (m, c) in rhs.terms {
            self.insert_term(m, -c);
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for ((a1, b1, c1), x) in self.terms() {
            for ((a2, b2, c2), y) in rhs.terms() {
                out.insert_term((a1 + a2, b1 + b2, c1 + c2), x * y);
            }
        }
        out
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl MulAssign<&Poly> for Poly {
    fn mul_assign(&mut self, rhs: &Poly) {
        *self = &*self * rhs;
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in self.terms() {
            out.insert_term(m, -c);
        }
        out
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// Generalized binomial coefficient `alpha (alpha-1) ... (alpha-j+1) / j!`.
pub fn binom_rational(alpha: &Rational, j: u32) -> Rational {
    let mut acc = Rational::one();
    for i in 0..j {
        acc *= alpha - Rational::from(BigInt::from(i));
    }
    acc / Rational::from(factorial(j))
}

/// `(1 - lambda s)^alpha` expanded as a series in `s`, truncated beyond
/// weighted degree `max_deg`.
pub fn lambda_s_series(alpha: &Rational, lambda: &Rational, max_deg: u32) -> Poly {
    let mut out = Poly::zero();
    let mut lam_pow = Rational::one();
    for j in 0..=(max_deg / 2) {
        let c = binom_rational(alpha, j) * &lam_pow;
        out.insert_term(
            (0, j, 0),
            Scalar::from_rational(if j.is_multiple_of(2) { c } else { -c }),
        );
        lam_pow *= lambda;
    }
    out
}

/// Degree-`k` part of `log(1 + t + s)`:
/// the coefficient of `t^a s^b` with `a + 2b = k` is `(-1)^{a+b+1} C(a+b, b) / (a+b)`.
pub fn f_poly(k: u32) -> Poly {
    let mut out = Poly::zero();
    for b in 0..=(k / 2) {
        let a = k - 2 * b;
        let j = a + b;
        if j == 0 {
            continue;
        }
        let sign = if (j + 1).is_multiple_of(2) { 1 } else { -1 };
        let c = Rational::new(
            BigInt::from(sign) * crate::scalar::binomial(j as i64, b as i64),
            BigInt::from(j),
        );
        out.insert_term((a, b, 0), Scalar::from_rational(c));
    }
    out
}

/// Degree-`k` part of `-1/(1 + t + s)^2`:
/// the coefficient of `t^a s^b` with `a + 2b = k` is `(-1)^{a+b+1} (a+b+1) C(a+b, b)`.
pub fn q_poly(k: u32) -> Poly {
    let mut out = Poly::zero();
    for b in 0..=(k / 2) {
        let a = k - 2 * b;
        let j = a + b;
        let sign = if (j + 1).is_multiple_of(2) { 1 } else { -1 };
        let c = Rational::from(
            BigInt::from(sign)
                * BigInt::from(j as i64 + 1)
                * crate::scalar::binomial(j as i64, b as i64),
        );
        out.insert_term((a, b, 0), Scalar::from_rational(c));
    }
    out
}

/// Degree-`k` part of `e^t (sin sqrt(u) - sqrt(u) cos sqrt(u)) / (2 sqrt(u)^3)`
/// expressed in `t, s` via `u = 4s - t^2`. The `u`-series coefficient of
/// `u^m` is `(-1)^m (m+1) / (2m+3)!`.
pub fn g_poly(k: u32) -> Poly {
    let u = Poly::u();
    let mut out = Poly::zero();
    for m in 0..=(k / 2) {
        let a = k - 2 * m;
        let sign = if m.is_multiple_of(2) { 1 } else { -1 };
        let c = Rational::new(BigInt::from(sign * (m as i64 + 1)), factorial(2 * m + 3))
            / Rational::from(factorial(a));
        out += u.pow(m).scale_rat(&c) * Poly::monomial((a, 0, 0), Scalar::one());
    }
    out.homogeneous_part(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mono(a: u32, b: u32, n: i64, d: i64) -> Poly {
        Poly::monomial((a, b, 0), Scalar::from_rational(rat(n, d)))
    }

    /// Naive series oracle: the degree-k part of `sum_j coeffs[j] (t+s)^j`.
    fn series_part(coeffs: &[Rational], k: u32) -> Poly {
        let x = Poly::t() + Poly::s();
        let mut acc = Poly::zero();
        let mut x_pow = Poly::one();
        for c in coeffs {
            acc += x_pow.scale_rat(c);
            x_pow = &x_pow * &x;
        }
        acc.homogeneous_part(k)
    }

    #[test]
    fn f_matches_log_series_oracle() {
        // log(1+x) = sum (-1)^{j+1} x^j / j
        let coeffs: Vec<Rational> = (0..=10)
            .map(|j| {
                if j == 0 {
                    rat(0, 1)
                } else {
                    rat(if j % 2 == 1 { 1 } else { -1 }, j)
                }
            })
            .collect();
        for k in 1..=9 {
            assert_eq!(f_poly(k), series_part(&coeffs, k), "f_{k}");
        }
        assert_eq!(f_poly(1), Poly::t());
        assert_eq!(f_poly(2), mono(0, 1, 1, 1) + mono(2, 0, -1, 2));
        assert_eq!(f_poly(3), mono(3, 0, 1, 3) + mono(1, 1, -1, 1));
        assert_eq!(
            f_poly(4),
            mono(4, 0, -1, 4) + mono(2, 1, 1, 1) + mono(0, 2, -1, 2)
        );
    }

    #[test]
    fn q_matches_geometric_square_oracle() {
        // -(sum (-1)^j x^j)^2 truncated
        let geom: Vec<Rational> = (0..=10)
            .map(|j| rat(if j % 2 == 0 { 1 } else { -1 }, 1))
            .collect();
        let x = Poly::t() + Poly::s();
        let mut inv = Poly::zero();
        let mut x_pow = Poly::one();
        for c in &geom {
            inv += x_pow.scale_rat(c);
            x_pow = &x_pow * &x;
        }
        let oracle = -(&inv * &inv);
        for k in 0..=9 {
            assert_eq!(q_poly(k), oracle.homogeneous_part(k), "q_{k}");
        }
        assert_eq!(q_poly(0), mono(0, 0, -1, 1));
        assert_eq!(q_poly(1), mono(1, 0, 2, 1));
        assert_eq!(q_poly(2), mono(0, 1, 2, 1) + mono(2, 0, -3, 1));
        assert_eq!(q_poly(3), mono(3, 0, 4, 1) + mono(1, 1, -6, 1));
    }

    #[test]
    fn g_matches_trig_series_oracle() {
        // sin x - x cos x = sum_{i>=1} (-1)^{i+1} (2i) x^{2i+1} / (2i+1)!;
        // dividing by 2 x^3 (x = sqrt u) gives the u-series directly from
        // the sine/cosine factorials.
        let u = Poly::u();
        let mut series = Poly::zero();
        for i in 1..=6u32 {
            let sign = if (i + 1) % 2 == 0 { 1 } else { -1 };
            let c =
                Rational::new(BigInt::from(sign * 2 * i as i64), factorial(2 * i + 1)) / rat(2, 1);
            series += u.pow(i - 1).scale_rat(&c);
        }
        // multiply by e^t
        let mut expt = Poly::zero();
        for a in 0..=12u32 {
            expt += Poly::monomial(
                (a, 0, 0),
                Scalar::from_rational(Rational::new(BigInt::one(), factorial(a))),
            );
        }
        let oracle = &expt * &series;
        for k in 0..=9 {
            assert_eq!(g_poly(k), oracle.homogeneous_part(k), "g_{k}");
        }
        assert_eq!(g_poly(0), mono(0, 0, 1, 6));
        assert_eq!(g_poly(1), mono(1, 0, 1, 6));
        // t^2/12 - u/60 in t,s coordinates
        assert_eq!(g_poly(2), mono(2, 0, 1, 10) + mono(0, 1, -1, 15));
    }

    #[test]
    fn q_equals_scaled_g() {
        // q_n = (-1)^{n+1} (n+3)!/2^n g_n
        for n in 0..=9u32 {
            let sign = if (n + 1) % 2 == 0 { 1 } else { -1 };
            let c = Rational::new(
                BigInt::from(sign) * factorial(n + 3),
                BigInt::from(2).pow(n),
            );
            assert_eq!(q_poly(n), g_poly(n).scale_rat(&c), "n = {n}");
        }
    }

    #[test]
    fn derivative_identities() {
        for n in 1..=8u32 {
            // d f_{n+1} / dt = -(1/(n+2)) (2 q_n + t q_{n-1})
            let lhs = f_poly(n + 1).diff(Var::T);
            let rhs = (q_poly(n).scale_rat(&rat(2, 1)) + Poly::t() * q_poly(n - 1))
                .scale_rat(&rat(-1, n as i64 + 2));
            assert_eq!(lhs, rhs, "df/dt identity at n = {n}");
            // (d q_{n-1} / dt) t u = (n+3) t^2 q_{n-1} + 2n t q_n.
            // Exact by the generating function: with F = -(1+t+s)^{-2} and
            // E the weighted Euler operator, 2tu phi^{-3} = t^2 (E+4) F + 2t E F.
            let lhs = q_poly(n - 1).diff(Var::T) * Poly::t() * Poly::u();
            let rhs = Poly::monomial((2, 0, 0), Scalar::from_int(n as i64 + 3)) * q_poly(n - 1)
                + Poly::monomial((1, 0, 0), Scalar::from_int(2 * n as i64)) * q_poly(n);
            assert_eq!(lhs, rhs, "dq/dt identity at n = {n}");
        }
    }

    #[test]
    fn diff_examples() {
        assert_eq!((Poly::t() * Poly::s()).diff(Var::T), Poly::s());
        assert_eq!(Poly::u().diff(Var::S), Poly::constant(Scalar::from_int(4)));
        let t2u = Poly::monomial((2, 0, 0), Scalar::one()) * Poly::u();
        assert_eq!(t2u.diff(Var::T), mono(1, 1, 8, 1) + mono(3, 0, -4, 1));
    }

    #[test]
    fn substitution_examples() {
        let lam = rat(5, 7);
        assert_eq!(Poly::t().substitute_rescaled(&lam, 0, 8), Poly::t());
        assert_eq!(Poly::s().substitute_rescaled(&lam, 3, 8), Poly::s());
        // t^2 (1 - lambda s)^{-1} truncated at degree 6
        let t2 = Poly::monomial((2, 0, 0), Scalar::one());
        let got = t2.substitute_rescaled(&lam, -1, 6);
        let want = mono(2, 0, 1, 1)
            + mono(2, 1, 1, 1).scale_rat(&lam)
            + mono(2, 2, 1, 1).scale_rat(&(&lam * &lam));
        assert_eq!(got, want);
    }

    #[test]
    fn half_integer_binomials_are_rational() {
        let alpha = rat(-3, 2);
        assert_eq!(binom_rational(&alpha, 0), rat(1, 1));
        assert_eq!(binom_rational(&alpha, 1), rat(-3, 2));
        assert_eq!(binom_rational(&alpha, 2), rat(15, 8));
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        proptest::collection::vec(((0u32..4, 0u32..3), -5i64..=5, 1i64..=3), 0..5).prop_map(|v| {
            let mut p = Poly::zero();
            for ((a, b), n, d) in v {
                p.insert_term((a, b, 0), Scalar::from_rational(rat(n, d)));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn product_rule(p in arb_poly(), q in arb_poly()) {
            for var in [Var::T, Var::S] {
                let lhs = (&p * &q).diff(var);
                let rhs = p.diff(var) * q.clone() + p.clone() * q.diff(var);
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn diff_is_linear(p in arb_poly(), q in arb_poly()) {
            for var in [Var::T, Var::S] {
                prop_assert_eq!((&p + &q).diff(var), p.diff(var) + q.diff(var));
            }
        }

        #[test]
        fn homogeneous_parts_recombine(p in arb_poly()) {
            let mut sum = Poly::zero();
            for k in 0..=p.weighted_degree().unwrap_or(0) {
                sum += p.homogeneous_part(k);
            }
            prop_assert_eq!(sum, p);
        }
    }
}
