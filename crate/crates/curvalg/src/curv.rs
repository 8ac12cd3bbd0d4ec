//! The space of invariant curvature measures: Delta/N basis labels, the
//! module action of the valuation ring, the l- and n-maps, the direct-sum
//! decomposition and globalization.
//!
//! The action tables generate labels outside the legal index ranges; those
//! terms are dropped. The dual-side tables are boundary-safe, and the
//! transpose consistency between the two conventions is checked by the
//! acceptance suite on every legal index pair.

use std::collections::BTreeMap;

use crate::Error;
use crate::linalg::Matrix;
use crate::poly::Poly;
use crate::ring::{Algebra, DecBlock, TildeValElement, ValElement};
use crate::scalar::{Scalar, ball_volume, rat};

/// A basis label of the curvature-measure space: `Delta_{k,q}` or `N_{k,q}`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CurvLabel {
    Delta { k: u32, q: u32 },
    N { k: u32, q: u32 },
}

impl CurvLabel {
    pub fn k(&self) -> u32 {
        match self {
            CurvLabel::Delta { k, .. } | CurvLabel::N { k, .. } => *k,
        }
    }

    pub fn q(&self) -> u32 {
        match self {
            CurvLabel::Delta { q, .. } | CurvLabel::N { q, .. } => *q,
        }
    }

    /// Weighted degree of the underlying measure.
    pub fn degree(&self) -> u32 {
        self.k()
    }

    pub fn is_delta(&self) -> bool {
        matches!(self, CurvLabel::Delta { .. })
    }

    fn sort_key(&self) -> (u32, u32, u8) {
        match self {
            CurvLabel::Delta { k, q } => (*k, *q, 0),
            CurvLabel::N { k, q } => (*k, *q, 1),
        }
    }
}

// Basis order: by k, then q, Delta before N.
impl Ord for CurvLabel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for CurvLabel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// `Delta_{k,q}` requires `0 <= k <= 2n` and `max(0, k-n) <= q <= k/2`.
pub fn delta_valid(n: u32, k: i64, q: i64) -> bool {
    let n = n as i64;
    (0..=2 * n).contains(&k) && q >= 0.max(k - n) && 2 * q <= k
}

/// `N_{k,q}` requires `1 <= k <= 2n-3` and `max(0, k-n+1) <= q < k/2`.
pub fn n_valid(n: u32, k: i64, q: i64) -> bool {
    let n = n as i64;
    k >= 1 && k <= 2 * n - 3 && q >= 0.max(k - n + 1) && 2 * q < k
}

pub(crate) fn label_valid(n: u32, label: &CurvLabel) -> bool {
    match label {
        CurvLabel::Delta { k, q } => delta_valid(n, *k as i64, *q as i64),
        CurvLabel::N { k, q } => n_valid(n, *k as i64, *q as i64),
    }
}

/// The ordered basis of the curvature-measure space for one `n`.
pub fn curv_basis(n: u32) -> Vec<CurvLabel> {
    let mut out = Vec::new();
    for k in 0..=2 * n as i64 {
        for q in 0..=k / 2 {
            if delta_valid(n, k, q) {
                out.push(CurvLabel::Delta {
                    k: k as u32,
                    q: q as u32,
                });
            }
            if n_valid(n, k, q) {
                out.push(CurvLabel::N {
                    k: k as u32,
                    q: q as u32,
                });
            }
        }
    }
    out.sort();
    out
}

/// An invariant curvature measure in Delta/N coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CurvElement {
    n: u32,
    coords: BTreeMap<CurvLabel, Scalar>,
}

impl CurvElement {
    pub fn zero(n: u32) -> Self {
        CurvElement {
            n,
            coords: BTreeMap::new(),
        }
    }

    /// A single basis measure. Panics on an out-of-range label.
    pub fn basis(n: u32, label: CurvLabel) -> Self {
        assert!(label_valid(n, &label), "invalid label {label:?} for n={n}");
        let mut e = CurvElement::zero(n);
        e.insert(label, Scalar::one());
        e
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coeff(&self, label: &CurvLabel) -> Scalar {
        self.coords.get(label).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CurvLabel, &Scalar)> {
        self.coords.iter()
    }

    pub fn insert(&mut self, label: CurvLabel, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.coords.entry(label) {
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

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = CurvElement::zero(self.n);
        for (l, x) in self.terms() {
            out.insert(*l, x * c);
        }
        out
    }

    /// Restriction to the labels of one weighted degree.
    pub fn degree_part(&self, k: u32) -> Self {
        let mut out = CurvElement::zero(self.n);
        for (l, x) in self.terms() {
            if l.degree() == k {
                out.insert(*l, x.clone());
            }
        }
        out
    }

    /// True when no `N` label carries a nonzero coefficient.
    pub fn is_angular_span(&self) -> bool {
        self.coords.keys().all(CurvLabel::is_delta)
    }
}

impl std::ops::Add for &CurvElement {
    type Output = CurvElement;
    fn add(self, rhs: &CurvElement) -> CurvElement {
        assert_eq!(self.n, rhs.n);
        let mut out = self.clone();
        for (l, c) in rhs.terms() {
            out.insert(*l, c.clone());
        }
        out
    }
}

impl std::ops::Sub for &CurvElement {
    type Output = CurvElement;
    fn sub(self, rhs: &CurvElement) -> CurvElement {
        assert_eq!(self.n, rhs.n);
        let mut out = self.clone();
        for (l, c) in rhs.terms() {
            out.insert(*l, -c);
        }
        out
    }
}

/// `omega_k / (pi omega_{k-1})`, the recurring ratio in the `t`-tables.
pub(crate) fn w_ratio(k: u32) -> Scalar {
    assert!(k >= 1);
    let r = ball_volume(k)
        .try_div(&ball_volume(k - 1))
        .expect("omega is nonzero");
    &r * &Scalar::pi_pow(-1)
}

/// Module action of `t` on a curvature measure, out-of-range labels dropped.
pub fn apply_t_flat(n: u32, phi: &CurvElement) -> CurvElement {
    assert_eq!(phi.n(), n);
    let mut out = CurvElement::zero(n);
    for (label, c) in phi.terms() {
        let k = label.k() as i64;
        let q = label.q() as i64;
        let f = w_ratio(label.k() + 1);
        match label {
            CurvLabel::Delta { .. } => {
                for (q2, num) in [(q, k - 2 * q + 1), (q + 1, 2 * (q + 1))] {
                    if delta_valid(n, k + 1, q2) && num != 0 {
                        let coeff = &f * &Scalar::from_int(num);
                        out.insert(
                            CurvLabel::Delta {
                                k: (k + 1) as u32,
                                q: q2 as u32,
                            },
                            &coeff * c,
                        );
                    }
                }
            }
            CurvLabel::N { .. } => {
                // factor (k+2)/(k+3); the second term carries 2(q+1)(k-2q-1)/(k-2q)
                let base = &f * &Scalar::from_rational(rat(k + 2, k + 3));
                let terms = [
                    (q, rat(k - 2 * q + 1, 1)),
                    (q + 1, rat(2 * (q + 1) * (k - 2 * q - 1), k - 2 * q)),
                ];
                for (q2, num) in terms {
                    if n_valid(n, k + 1, q2) {
                        let coeff = &base * &Scalar::from_rational(num);
                        out.insert(
                            CurvLabel::N {
                                k: (k + 1) as u32,
                                q: q2 as u32,
                            },
                            &coeff * c,
                        );
                    }
                }
            }
        }
    }
    out
}

/// Module action of `s` on a curvature measure, out-of-range labels dropped.
pub fn apply_s_flat(n: u32, phi: &CurvElement) -> CurvElement {
    assert_eq!(phi.n(), n);
    let mut out = CurvElement::zero(n);
    for (label, c) in phi.terms() {
        let k = label.k() as i64;
        let q = label.q() as i64;
        match label {
            CurvLabel::Delta { .. } => {
                let m = k - 2 * q;
                let delta_terms = [
                    (q, rat((m + 2) * (m + 1), 2 * (k + 2))),
                    (q + 1, rat(2 * (q + 1) * (k - q + 1), k + 2)),
                ];
                for (q2, r) in delta_terms {
                    if delta_valid(n, k + 2, q2) {
                        out.insert(
                            CurvLabel::Delta {
                                k: (k + 2) as u32,
                                q: q2 as u32,
                            },
                            &Scalar::rational_times_pi(r, -1) * c,
                        );
                    }
                }
                let n_terms = [
                    (q, rat(-(m + 2) * (m + 1), (k + 2) * (k + 4))),
                    (q + 1, rat(-2 * (q + 1) * m, (k + 2) * (k + 4))),
                ];
                for (q2, r) in n_terms {
                    if n_valid(n, k + 2, q2) {
                        out.insert(
                            CurvLabel::N {
                                k: (k + 2) as u32,
                                q: q2 as u32,
                            },
                            &Scalar::rational_times_pi(r, -1) * c,
                        );
                    }
                }
            }
            CurvLabel::N { .. } => {
                let m = k - 2 * q;
                let terms = [
                    (q, rat((m + 2) * (m + 1), 2 * (k + 4))),
                    (q + 1, rat(2 * (q + 1) * (k - q + 2), k + 4)),
                ];
                for (q2, r) in terms {
                    if n_valid(n, k + 2, q2) {
                        out.insert(
                            CurvLabel::N {
                                k: (k + 2) as u32,
                                q: q2 as u32,
                            },
                            &Scalar::rational_times_pi(r, -1) * c,
                        );
                    }
                }
            }
        }
    }
    out
}

/// Action of a polynomial in `t, s` through the flat tables, term by term.
pub fn apply_poly_flat(n: u32, p: &Poly, phi: &CurvElement) -> CurvElement {
    assert!(!p.has_v(), "module action of a v-carrying polynomial");
    let mut out = CurvElement::zero(n);
    for ((a, b, _), c) in p.terms() {
        let mut x = phi.clone();
        for _ in 0..b {
            x = apply_s_flat(n, &x);
        }
        for _ in 0..a {
            x = apply_t_flat(n, &x);
        }
        out = &out + &x.scale(c);
    }
    out
}

pub(crate) fn build_decompose_blocks(alg: &Algebra) -> Result<Vec<DecBlock>, Error> {
    let n = alg.n();
    let mut blocks = Vec::new();
    for k in 0..=alg.top_degree() {
        let labels: Vec<usize> = alg
            .basis
            .iter()
            .enumerate()
            .filter(|(_, l)| l.degree() == k)
            .map(|(i, _)| i)
            .collect();
        let val_monos: Vec<(u32, u32)> = alg.val_normal_monomials(k).to_vec();
        let tilde_monos: Vec<(u32, u32)> = if n >= 2 && k >= 1 {
            alg.tilde_normal_monomials(k - 1).to_vec()
        } else {
            Vec::new()
        };
        if labels.len() != val_monos.len() + tilde_monos.len() {
            return Err(Error::Singular("decomposition block dimensions"));
        }
        let delta00 = CurvElement::basis(n, CurvLabel::Delta { k: 0, q: 0 });
        let n10 = if n >= 2 {
            Some(CurvElement::basis(n, CurvLabel::N { k: 1, q: 0 }))
        } else {
            None
        };
        let mut cols: Vec<Vec<Scalar>> = Vec::new();
        for m in &val_monos {
            let img = apply_poly_flat(n, &Poly::monomial((m.0, m.1, 0), Scalar::one()), &delta00);
            cols.push(labels.iter().map(|i| img.coeff(&alg.basis[*i])).collect());
        }
        for m in &tilde_monos {
            let img = apply_poly_flat(
                n,
                &Poly::monomial((m.0, m.1, 0), Scalar::one()),
                n10.as_ref().expect("tilde monomials imply n >= 2"),
            );
            cols.push(labels.iter().map(|i| img.coeff(&alg.basis[*i])).collect());
        }
        let mat = Matrix::from_fn(labels.len(), cols.len(), |r, c| cols[c][r].clone());
        let inv = mat.inverse("decomposition block")?;
        blocks.push(DecBlock {
            labels,
            val_monos,
            tilde_monos,
            inv,
        });
    }
    Ok(blocks)
}

impl Algebra {
    /// The ordered Delta/N basis.
    pub fn curv_basis_labels(&self) -> &[CurvLabel] {
        &self.basis
    }

    pub fn basis_index(&self, label: &CurvLabel) -> Option<usize> {
        self.basis_pos.get(label).copied()
    }

    pub fn curv_dim(&self) -> usize {
        self.basis.len()
    }

    /// Module multiplication of a valuation residue against a measure via
    /// the flat tables.
    pub fn module_mul_flat(&self, p: &ValElement, phi: &CurvElement) -> CurvElement {
        assert_eq!(p.n(), self.n());
        apply_poly_flat(self.n(), p.poly(), phi)
    }

    /// The l-map `p -> p . Delta_{0,0}`.
    pub fn ell_map(&self, p: &ValElement) -> CurvElement {
        assert_eq!(p.n(), self.n());
        let delta00 = CurvElement::basis(self.n(), CurvLabel::Delta { k: 0, q: 0 });
        apply_poly_flat(self.n(), p.poly(), &delta00)
    }

    /// The n-map `q -> q . N_{1,0}`; fails for `n = 1` where no `N`
    /// generators exist.
    pub fn en_map(&self, q: &TildeValElement) -> Result<CurvElement, Error> {
        assert_eq!(q.n(), self.n());
        if self.n() == 1 {
            return Err(Error::NoNGenerators);
        }
        let n10 = CurvElement::basis(self.n(), CurvLabel::N { k: 1, q: 0 });
        Ok(apply_poly_flat(self.n(), q.poly(), &n10))
    }

    /// The unique pair with `phi = l(p) + n(q)`, solved per degree against
    /// the precomputed images of the normal-form monomials.
    pub fn decompose(&self, phi: &CurvElement) -> (ValElement, TildeValElement) {
        assert_eq!(phi.n(), self.n());
        let mut p = Poly::zero();
        let mut q = Poly::zero();
        for block in &self.dec {
            if block.labels.is_empty() {
                continue;
            }
            let rhs: Vec<Scalar> = block
                .labels
                .iter()
                .map(|i| phi.coeff(&self.basis[*i]))
                .collect();
            if rhs.iter().all(Scalar::is_zero) {
                continue;
            }
            let x = block.inv.mul_vec(&rhs);
            for (i, m) in block.val_monos.iter().enumerate() {
                p.insert_term((m.0, m.1, 0), x[i].clone());
            }
            for (i, m) in block.tilde_monos.iter().enumerate() {
                q.insert_term((m.0, m.1, 0), x[block.val_monos.len() + i].clone());
            }
        }
        (self.reduce_val(&p), self.reduce_tilde(&q))
    }

    /// Evaluation on the full space: the valuation component of
    /// [`Algebra::decompose`]; kills every `N` label.
    pub fn globalize(&self, phi: &CurvElement) -> ValElement {
        self.decompose(phi).0
    }
}
