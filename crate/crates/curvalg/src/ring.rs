//! The two graded quotient rings attached to each `n` and the Poincare
//! pairing between complementary degrees.
//!
//! The valuation ring is `C[t,s]/(f_{n+1}, f_{n+2})`, the tilde ring is
//! `C[t,s]/(q_{n-1}, q_n)`. Normal forms are computed degree by degree:
//! the ideal's slice in weighted degree `k` is spanned by the monomial
//! multiples of the two generators, row-reduced once per context with the
//! monomial order preferring to eliminate high `s`-powers. Elements are
//! stored as their canonical normal-form representatives.

use num_traits::Zero;
use std::collections::BTreeMap;

use crate::Error;
use crate::curv::CurvLabel;
use crate::dual::DualElement;
use crate::linalg::Matrix;
use crate::poly::{Poly, f_poly, q_poly};
use crate::scalar::{Rational, Scalar, ball_volume, binomial};

/// One weighted-degree slice of a quotient ring.
#[derive(Clone, Debug)]
pub(crate) struct DegreeSlice {
    /// Monomials `(t-exp, s-exp)` of this degree, s-exponent descending, so
    /// that elimination keeps pure `t`-powers as normal-form monomials.
    monomials: Vec<(u32, u32)>,
    /// Reduced echelon rows of the ideal slice, leading coefficient 1.
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
    /// Non-pivot monomials: the normal-form basis of the quotient slice,
    /// s-exponent ascending.
    pub(crate) normal: Vec<(u32, u32)>,
}

impl DegreeSlice {
    fn build(k: u32, gens: &[Poly]) -> Self {
        let monomials: Vec<(u32, u32)> = (0..=(k / 2)).rev().map(|b| (k - 2 * b, b)).collect();
        let col_of: BTreeMap<(u32, u32), usize> =
            monomials.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for g in gens {
            let d = g.weighted_degree().expect("nonzero generator");
            if d > k {
                continue;
            }
            let rem = k - d;
            for b in 0..=(rem / 2) {
                let a = rem - 2 * b;
                let mut row = vec![Rational::zero(); monomials.len()];
                for ((ga, gb, _), c) in g.terms() {
                    let col = col_of[&(ga + a, gb + b)];
                    row[col] += c.as_rational().expect("rational generator coefficients");
                }
                rows.push(row);
            }
        }
        let (rows, pivots) = rref_rational(rows);
        let normal: Vec<(u32, u32)> = monomials
            .iter()
            .enumerate()
            .filter(|(i, _)| !pivots.contains(i))
            .map(|(_, m)| *m)
            .rev()
            .collect();
        DegreeSlice {
            monomials,
            rows,
            pivots,
            normal,
        }
    }

    /// Reduces a coefficient vector over `monomials` modulo the ideal slice.
    fn reduce(&self, coeffs: &mut [Scalar]) {
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            if coeffs[pc].is_zero() {
                continue;
            }
            let f = coeffs[pc].clone();
            for (j, rv) in row.iter().enumerate() {
                if !rv.is_zero() {
                    coeffs[j] -= &f * &Scalar::from_rational(rv.clone());
                }
            }
        }
    }

    fn dim(&self) -> usize {
        self.normal.len()
    }
}

/// Plain Gauss-Jordan over rationals; returns reduced rows and pivot columns.
#[allow(clippy::needless_range_loop)]
fn rref_rational(mut rows: Vec<Vec<Rational>>) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let piv = rows[r][c].clone();
        for x in &mut rows[r] {
            *x /= &piv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..cols {
                    let d = &f * &rows[r][j];
                    rows[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// A residue in the valuation ring, held as its normal-form representative.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ValElement {
    n: u32,
    nf: Poly,
}

/// A residue in the tilde ring, held as its normal-form representative.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TildeValElement {
    n: u32,
    nf: Poly,
}

macro_rules! residue_impl {
    ($ty:ident) => {
        impl $ty {
            pub fn n(&self) -> u32 {
                self.n
            }

            /// The canonical normal-form representative.
            pub fn poly(&self) -> &Poly {
                &self.nf
            }

            pub fn is_zero(&self) -> bool {
                self.nf.is_zero()
            }

            pub fn zero(n: u32) -> Self {
                $ty {
                    n,
                    nf: Poly::zero(),
                }
            }

            pub fn scale(&self, c: &Scalar) -> Self {
                $ty {
                    n: self.n,
                    nf: self.nf.scale(c),
                }
            }
        }

        impl std::ops::Add for &$ty {
            type Output = $ty;
            fn add(self, rhs: &$ty) -> $ty {
                assert_eq!(self.n, rhs.n);
                $ty {
                    n: self.n,
                    nf: &self.nf + &rhs.nf,
                }
            }
        }

        impl std::ops::Sub for &$ty {
            type Output = $ty;
            fn sub(self, rhs: &$ty) -> $ty {
                assert_eq!(self.n, rhs.n);
                $ty {
                    n: self.n,
                    nf: &self.nf - &rhs.nf,
                }
            }
        }
    };
}

residue_impl!(ValElement);
residue_impl!(TildeValElement);

/// Per-degree decomposition data: curvature-measure coordinates of the
/// l/n-images of the normal-form monomials, inverted once.
#[derive(Clone, Debug)]
pub(crate) struct DecBlock {
    /// Basis indices of the curvature labels in this degree.
    pub(crate) labels: Vec<usize>,
    pub(crate) val_monos: Vec<(u32, u32)>,
    pub(crate) tilde_monos: Vec<(u32, u32)>,
    pub(crate) inv: Matrix,
}

/// Per-codegree presentation data: dual coordinates of the table evaluation
/// of normal-form monomials (and their `vbar` multiples).
#[derive(Clone, Debug)]
pub(crate) struct PresBlock {
    pub(crate) labels: Vec<usize>,
    pub(crate) val_monos: Vec<(u32, u32)>,
    pub(crate) tilde_monos: Vec<(u32, u32)>,
    pub(crate) fwd: Matrix,
    pub(crate) inv: Matrix,
}

/// All precomputed structure for one `n`: quotient slices, the curvature
/// basis, decomposition and presentation blocks, Gram inverses. Immutable
/// after construction; everything downstream is a pure function of it.
pub struct Algebra {
    n: u32,
    val: Vec<DegreeSlice>,
    tilde: Vec<DegreeSlice>,
    pub(crate) basis: Vec<CurvLabel>,
    pub(crate) basis_pos: BTreeMap<CurvLabel, usize>,
    /// Inverse of the pairing block (degree d) x (degree 2n-d), per d.
    gram_inv: Vec<Matrix>,
    pub(crate) dec: Vec<DecBlock>,
    pub(crate) pres: Vec<PresBlock>,
    pub(crate) vbar_coords: DualElement,
}

impl Algebra {
    /// Builds the full context for one `n`. A singular system here means the
    /// multiplication tables are inconsistent and must not occur.
    pub fn try_new(n: u32) -> Result<Algebra, Error> {
        assert!(n >= 1, "n must be positive");
        let top = 2 * n;
        let val_gens = [f_poly(n + 1), f_poly(n + 2)];
        let tilde_gens = [q_poly(n - 1), q_poly(n)];
        let val: Vec<DegreeSlice> = (0..=top)
            .map(|k| DegreeSlice::build(k, &val_gens))
            .collect();
        let tilde: Vec<DegreeSlice> = (0..=top)
            .map(|k| DegreeSlice::build(k, &tilde_gens))
            .collect();

        let basis = crate::curv::curv_basis(n);
        let basis_pos: BTreeMap<CurvLabel, usize> =
            basis.iter().enumerate().map(|(i, l)| (*l, i)).collect();

        let mut alg = Algebra {
            n,
            val,
            tilde,
            basis,
            basis_pos,
            gram_inv: Vec::new(),
            dec: Vec::new(),
            pres: Vec::new(),
            vbar_coords: crate::dual::vbar(n),
        };

        for d in 0..=top {
            let rows = alg.val[d as usize].normal.clone();
            let cols = alg.val[(top - d) as usize].normal.clone();
            let g = Matrix::from_fn(rows.len(), cols.len(), |r, c| {
                alg.pd_rule(rows[r].1 + cols[c].1)
            });
            alg.gram_inv.push(g.inverse("Poincare pairing Gram block")?);
        }

        alg.dec = crate::curv::build_decompose_blocks(&alg)?;
        alg.pres = crate::dual::build_presentation_blocks(&alg)?;
        Ok(alg)
    }

    /// Panicking variant of [`Algebra::try_new`].
    pub fn new(n: u32) -> Algebra {
        Algebra::try_new(n).expect("algebra construction")
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn top_degree(&self) -> u32 {
        2 * self.n
    }

    /// Quotient dimensions of the valuation ring, degrees `0..=2n`.
    pub fn val_dims(&self) -> Vec<usize> {
        self.val.iter().map(DegreeSlice::dim).collect()
    }

    /// Quotient dimensions of the tilde ring, degrees `0..=2n-4`
    /// (empty for `n = 1`; the ring vanishes above `2n-4`).
    pub fn tilde_dims(&self) -> Vec<usize> {
        if self.n == 1 {
            return Vec::new();
        }
        self.tilde
            .iter()
            .take((2 * self.n - 4 + 1) as usize)
            .map(DegreeSlice::dim)
            .collect()
    }

    /// Normal-form monomials of the valuation ring in one degree.
    pub fn val_normal_monomials(&self, k: u32) -> &[(u32, u32)] {
        &self.val[k as usize].normal
    }

    /// Normal-form monomials of the tilde ring in one degree.
    pub fn tilde_normal_monomials(&self, k: u32) -> &[(u32, u32)] {
        &self.tilde[k as usize].normal
    }

    /// All valuation normal-form monomials, degree-major order.
    pub fn val_monomial_basis(&self) -> Vec<(u32, u32)> {
        (0..=self.top_degree())
            .flat_map(|k| self.val[k as usize].normal.iter().copied())
            .collect()
    }

    /// All tilde normal-form monomials, degree-major order.
    pub fn tilde_monomial_basis(&self) -> Vec<(u32, u32)> {
        (0..=self.top_degree())
            .flat_map(|k| self.tilde[k as usize].normal.iter().copied())
            .collect()
    }

    fn reduce_in(&self, slices: &[DegreeSlice], p: &Poly) -> Poly {
        type DegreeTerms = Vec<((u32, u32), Scalar)>;
        assert!(!p.has_v(), "quotient reduction of a v-carrying polynomial");
        let top = self.top_degree();
        let mut out = Poly::zero();
        let mut by_degree: BTreeMap<u32, DegreeTerms> = BTreeMap::new();
        for ((a, b, _), c) in p.terms() {
            let k = a + 2 * b;
            if k > top {
                continue;
            }
            by_degree.entry(k).or_default().push(((a, b), c.clone()));
        }
        for (k, terms) in by_degree {
            let slice = &slices[k as usize];
            let col_of: BTreeMap<(u32, u32), usize> = slice
                .monomials
                .iter()
                .enumerate()
                .map(|(i, m)| (*m, i))
                .collect();
            let mut coeffs = vec![Scalar::zero(); slice.monomials.len()];
            for (m, c) in terms {
                coeffs[col_of[&m]] += c;
            }
            slice.reduce(&mut coeffs);
            for (i, m) in slice.monomials.iter().enumerate() {
                if !coeffs[i].is_zero() {
                    out.insert_term((m.0, m.1, 0), coeffs[i].clone());
                }
            }
        }
        out
    }

    /// Canonical normal form in the valuation ring; a ring homomorphism,
    /// zero above degree `2n`.
    pub fn reduce_val(&self, p: &Poly) -> ValElement {
        ValElement {
            n: self.n,
            nf: self.reduce_in(&self.val, p),
        }
    }

    /// Canonical normal form in the tilde ring.
    pub fn reduce_tilde(&self, p: &Poly) -> TildeValElement {
        TildeValElement {
            n: self.n,
            nf: self.reduce_in(&self.tilde, p),
        }
    }

    pub fn val_one(&self) -> ValElement {
        self.reduce_val(&Poly::one())
    }

    pub fn tilde_one(&self) -> TildeValElement {
        self.reduce_tilde(&Poly::one())
    }

    pub fn val_mul(&self, a: &ValElement, b: &ValElement) -> ValElement {
        assert_eq!(a.n, self.n);
        assert_eq!(b.n, self.n);
        self.reduce_val(&(&a.nf * &b.nf))
    }

    pub fn tilde_mul(&self, a: &TildeValElement, b: &TildeValElement) -> TildeValElement {
        assert_eq!(a.n, self.n);
        assert_eq!(b.n, self.n);
        self.reduce_tilde(&(&a.nf * &b.nf))
    }

    /// Coordinates of a normal-form polynomial over one degree's monomials.
    pub(crate) fn val_coords(&self, e: &Poly, k: u32) -> Vec<Scalar> {
        self.val[k as usize]
            .normal
            .iter()
            .map(|m| e.coeff((m.0, m.1, 0)))
            .collect()
    }

    pub(crate) fn tilde_coords(&self, e: &Poly, k: u32) -> Vec<Scalar> {
        self.tilde[k as usize]
            .normal
            .iter()
            .map(|m| e.coeff((m.0, m.1, 0)))
            .collect()
    }

    /// The monomial pairing rule: for total `s`-exponent `b` in complementary
    /// degrees, the value is `C(2n-2b, n-b) / omega_{2n}`.
    fn pd_rule(&self, b_total: u32) -> Scalar {
        let n = self.n as i64;
        let c = binomial(2 * n - 2 * b_total as i64, n - b_total as i64);
        let omega_inv = Scalar::one()
            .try_div(&ball_volume(2 * self.n))
            .expect("omega is nonzero");
        &Scalar::from_rational(Rational::from(c)) * &omega_inv
    }

    /// The pairing rule extended bilinearly over raw polynomial monomials:
    /// pairs of total weighted degree `2n` contribute, all others vanish.
    pub fn pd_pair_poly(&self, p: &Poly, q: &Poly) -> Scalar {
        let top = self.top_degree();
        let mut acc = Scalar::zero();
        for ((a1, b1, c1), x) in p.terms() {
            assert_eq!(c1, 0);
            for ((a2, b2, c2), y) in q.terms() {
                assert_eq!(c2, 0);
                if a1 + 2 * b1 + a2 + 2 * b2 == top {
                    acc += &(x * y) * &self.pd_rule(b1 + b2);
                }
            }
        }
        acc
    }

    /// Alesker-Poincare pairing of two residues: bilinear, symmetric, zero
    /// unless the degrees sum to `2n`.
    pub fn pd_pair(&self, p: &ValElement, q: &ValElement) -> Scalar {
        assert_eq!(p.n, self.n);
        assert_eq!(q.n, self.n);
        self.pd_pair_poly(&p.nf, &q.nf)
    }

    pub(crate) fn gram_inverse(&self, d: u32) -> &Matrix {
        &self.gram_inv[d as usize]
    }
}
