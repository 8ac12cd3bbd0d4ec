//! Exact scalar arithmetic: rational-coefficient Laurent polynomials in pi.
//!
//! Every constant appearing in the multiplication tables is a rational
//! multiple of an integer power of pi, but sums of mixed powers (such as
//! `1 + pi`) occur transiently under addition, so the scalar type stores a
//! finite map from pi-exponent to a nonzero rational. The zero scalar is
//! the empty map; equality is canonical.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::Error;

/// Arbitrary-precision rational, the coefficient field underneath [`Scalar`].
pub type Rational = BigRational;

/// Rational from an integer pair. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// A finite sum of terms `c * pi^e` with nonzero rational `c` and integer `e`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Scalar {
    terms: BTreeMap<i32, Rational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn from_rational(r: Rational) -> Self {
        let mut s = Scalar::zero();
        s.insert_term(0, r);
        s
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(rat(n, 1))
    }

    /// The monomial `pi^e`.
    pub fn pi_pow(e: i32) -> Self {
        Scalar::rational_times_pi(rat(1, 1), e)
    }

    /// The monomial `r * pi^e`.
    pub fn rational_times_pi(r: Rational, e: i32) -> Self {
        let mut s = Scalar::zero();
        s.insert_term(e, r);
        s
    }

    /// Terms as `(pi-exponent, coefficient)` pairs, exponent ascending.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &Rational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    /// `Some((e, c))` when the scalar is the single monomial `c * pi^e`.
    pub fn single_term(&self) -> Option<(i32, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (*e, c))
        } else {
            None
        }
    }

    /// The rational value when no pi is involved (zero included).
    pub fn as_rational(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        match self.single_term() {
            Some((0, c)) => Some(c.clone()),
            _ => None,
        }
    }

    fn insert_term(&mut self, e: i32, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
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

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Scalar::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    /// Exact division. Fails on a zero divisor and on quotients that leave
    /// the Laurent ring (e.g. `1 / (1 + pi)`).
    pub fn try_div(&self, rhs: &Scalar) -> Result<Scalar, Error> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Scalar::zero());
        }
        if let Some((e, c)) = rhs.single_term() {
            let mut out = Scalar::zero();
            for (e2, c2) in self.terms() {
                out.insert_term(e2 - e, c2 / c);
            }
            return Ok(out);
        }
        // Long division by the leading term; a Laurent quotient, when it
        // exists, has min exponent bounded below by the difference of the
        // operands' min exponents.
        let bound = self.min_exp().unwrap() - rhs.min_exp().unwrap();
        let de = rhs.max_exp().unwrap();
        let dc = rhs.terms[&de].clone();
        let mut rem = self.clone();
        let mut quot = Scalar::zero();
        while !rem.is_zero() {
            let re = rem.max_exp().unwrap();
            let qe = re - de;
            if qe < bound {
                return Err(Error::InexactDivision);
            }
            let qc = &rem.terms[&re] / &dc;
            let q_term = Scalar::rational_times_pi(qc, qe);
            rem -= &q_term * rhs;
            quot += q_term;
        }
        Ok(quot)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

/// Canonical text form: terms `num/den * pi^e` (the pi factor omitted for
/// `e = 0`), highest exponent first, joined with `+`/`-`.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let (lead, c_abs) = if c.is_negative() {
                (if first { "-" } else { " - " }, -c.clone())
            } else {
                (if first { "" } else { " + " }, c.clone())
            };
            write!(f, "{lead}{}/{}", c_abs.numer(), c_abs.denom())?;
            if *e != 0 {
                write!(f, " * pi^{e}")?;
            }
            first = false;
        }
        Ok(())
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out += rhs.clone();
        out
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        for (e, c) in rhs.terms {
            self.insert_term(e, c);
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out -= rhs.clone();
        out
    }
}

impl SubAssign for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        for (e, c) in rhs.terms {
            self.insert_term(e, -c);
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.insert_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        let mut out = Scalar::zero();
        for (e, c) in self.terms() {
            out.insert_term(e, -c.clone());
        }
        out
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

pub(crate) fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n as u64 {
        acc *= i;
    }
    acc
}

/// Binomial coefficient with the usual out-of-range convention `C(m, j) = 0`
/// for `j < 0`, `j > m` or `m < 0`.
pub fn binomial(m: i64, j: i64) -> BigInt {
    if j < 0 || m < 0 || j > m {
        return BigInt::zero();
    }
    let j = j.min(m - j);
    let mut acc = BigInt::one();
    for i in 0..j {
        acc = acc * BigInt::from(m - i) / BigInt::from(i + 1);
    }
    acc
}

/// Volume of the `i`-dimensional unit ball:
/// `pi^m / m!` for `i = 2m` and `pi^m 2^{2m+1} m! / (2m+1)!` for `i = 2m+1`.
pub fn ball_volume(i: u32) -> Scalar {
    let m = i / 2;
    if i.is_multiple_of(2) {
        Scalar::rational_times_pi(Rational::new(BigInt::one(), factorial(m)), m as i32)
    } else {
        let num = BigInt::from(2).pow(2 * m + 1) * factorial(m);
        Scalar::rational_times_pi(Rational::new(num, factorial(2 * m + 1)), m as i32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ball_volumes() {
        assert_eq!(ball_volume(0), Scalar::one());
        assert_eq!(ball_volume(1), Scalar::from_int(2));
        assert_eq!(ball_volume(2), Scalar::pi_pow(1));
        // Gamma-function oracle values: omega_3 = 4/3 pi, omega_4 = pi^2/2.
        assert_eq!(ball_volume(3), Scalar::rational_times_pi(rat(4, 3), 1));
        assert_eq!(ball_volume(4), Scalar::rational_times_pi(rat(1, 2), 2));
        assert_eq!(ball_volume(5), Scalar::rational_times_pi(rat(8, 15), 2));
    }

    #[test]
    fn ball_volume_ratio_is_monomial() {
        for i in 0..14 {
            let r = ball_volume(i + 1).try_div(&ball_volume(i)).unwrap();
            assert!(r.single_term().is_some(), "omega ratio not a monomial");
        }
    }

    #[test]
    fn arithmetic_examples() {
        // (3/2) pi^-1 * 2 pi = 3
        let a = Scalar::rational_times_pi(rat(3, 2), -1);
        let b = Scalar::rational_times_pi(rat(2, 1), 1);
        assert_eq!(&a * &b, Scalar::from_int(3));
        // 1 + pi has two terms
        let c = &Scalar::one() + &Scalar::pi_pow(1);
        assert_eq!(c.terms().count(), 2);
        // division by zero
        assert!(matches!(
            Scalar::one().try_div(&Scalar::zero()),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn exact_multiterm_division() {
        let a = &Scalar::one() + &Scalar::pi_pow(1); // 1 + pi
        let b = &a * &a;
        assert_eq!(b.try_div(&a).unwrap(), a);
        assert!(matches!(
            Scalar::one().try_div(&a),
            Err(Error::InexactDivision)
        ));
    }

    #[test]
    fn binomial_conventions() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(2, 1), BigInt::from(2));
        assert_eq!(binomial(-2, 0), BigInt::zero());
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(3, -1), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        proptest::collection::vec((-2i32..=2, -6i64..=6, 1i64..=4), 0..4).prop_map(|v| {
            let mut s = Scalar::zero();
            for (e, n, d) in v {
                s += Scalar::rational_times_pi(rat(n, d), e);
            }
            s
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &Scalar::one(), a.clone());
            prop_assert_eq!(&a + &(-&a), Scalar::zero());
        }

        #[test]
        fn division_inverts_multiplication(a in arb_scalar(), b in arb_scalar()) {
            prop_assume!(!b.is_zero());
            let p = &a * &b;
            prop_assert_eq!(p.try_div(&b).unwrap(), a);
        }
    }
}
