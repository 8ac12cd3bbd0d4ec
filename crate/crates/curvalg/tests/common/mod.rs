//! Shared helpers for the integration suites: a deterministic generator
//! for random-but-reproducible elements. The seed is fixed here; every
//! sampled element is a pure function of it.

use curvalg::dual::DualElement;
use curvalg::poly::Poly;
use curvalg::ring::Algebra;
use curvalg::scalar::{Rational, Scalar, rat};

pub const SEED: u64 = 0x00C0_FFEE_5EED_0001;

/// splitmix64; tiny and reproducible everywhere.
pub struct Rng(pub u64);

impl Rng {
    pub fn new() -> Self {
        Rng(SEED)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }

    pub fn rational(&mut self) -> Rational {
        let num = self.below(19) as i64 - 9;
        let den = self.below(4) as i64 + 1;
        rat(num, den)
    }

    pub fn scalar(&mut self) -> Scalar {
        let e = self.below(3) as i32 - 1;
        Scalar::rational_times_pi(self.rational(), e)
    }

    /// A sparse random dual element over the basis of `alg`.
    pub fn dual_element(&mut self, alg: &Algebra) -> DualElement {
        let mut e = DualElement::zero(alg.n());
        for label in alg.curv_basis_labels() {
            if self.below(2) == 0 {
                e.insert(*label, self.scalar());
            }
        }
        e
    }

    /// A sparse random polynomial in `t, s` of weighted degree at most
    /// `max_deg`, with rational coefficients.
    pub fn poly(&mut self, max_deg: u32) -> Poly {
        let mut p = Poly::zero();
        for _ in 0..4 {
            let b = self.below((max_deg / 2 + 1) as u64) as u32;
            let a = self.below((max_deg - 2 * b + 1) as u64) as u32;
            p.insert_term((a, b, 0), Scalar::from_rational(self.rational()));
        }
        p
    }
}
