//! Parabolic group cohomology of the punctured-sphere group and the
//! symplectic pairing it carries.
//!
//! A tangent vector to the relative character variety at an anchor
//! tuple (g_1, ..., g_n) is a parabolic 1-cocycle: per-generator
//! potentials x_i with values c(gamma_i) = x_i - Ad_{g_i} x_i, extended
//! to words by c(gamma delta) = c(gamma) + Ad_{rho(gamma)} c(delta).
//! On a closed anchor, closedness of the cocycle (the word value of the
//! full relator vanishes) is exactly tangency to the closure fiber.
//!
//! Two pairings of closed cocycles are implemented independently:
//!
//! - [`goldman_form`]: the cup-product pairing against the relative
//!   fundamental class sum_{i=2}^n (gamma_1...gamma_{i-1} | gamma_i),
//! - [`pullback_form`]: the reduction 2-form written directly in the
//!   holonomy picture, one conjugacy-class term per entry plus the
//!   fusion wedge terms.
//!
//! Their equality on all closed cocycle pairs is a theorem; the
//! verification suite checks it numerically across dimensions. Both
//! routes are kept separate in the code so that neither can silently
//! borrow the other's result.

use crate::moduli::{closure_constraint_blocks, closure_residual, side_length, HolonomyTuple};
use crate::smallmat::Mat3;
use crate::su2::{adjoint, killing, AlgebraElement, GroupElement};
use crate::TangentVector;
use crate::{Error, Result};

/// Anchors must agree entrywise within this distance.
const ANCHOR_TOL: f64 = 1e-12;

/// Cocycle-closure residual accepted as closed.
const COCYCLE_CLOSED_TOL: f64 = 1e-9;

/// Anchor-closure residual accepted as closed.
const ANCHOR_CLOSED_TOL: f64 = 1e-9;

/// A parabolic 1-cocycle anchored at a holonomy tuple: potentials x_i
/// and cached generator values c_i = x_i - Ad_{g_i} x_i.
#[derive(Debug, Clone)]
pub struct ParabolicCocycle {
    x: Vec<AlgebraElement>,
    c: Vec<AlgebraElement>,
    anchor: HolonomyTuple,
}

/// The 2-chain sum_{i=2}^n (gamma_1...gamma_{i-1} | gamma_i); its
/// boundary is the sum of the generator 1-chains, which is what makes
/// it a relative fundamental class. The boundary property is checked
/// symbolically on construction.
#[derive(Debug, Clone)]
pub struct RelativeFundamentalClass {
    /// Pairs (prefix word length, 1-based generator index).
    terms: Vec<(usize, usize)>,
    n: usize,
}

impl RelativeFundamentalClass {
    pub fn new(n: usize) -> RelativeFundamentalClass {
        assert!(n >= 2);
        let class = RelativeFundamentalClass {
            terms: (2..=n).map(|i| (i - 1, i)).collect(),
            n,
        };
        class.check_boundary();
        class
    }

    pub fn terms(&self) -> &[(usize, usize)] {
        &self.terms
    }

    /// Formal boundary in reduced bar chains:
    /// d(w | g) = (g) - (wg) + (w), with the full relator word
    /// identified with the identity (dropped). The result must be
    /// exactly the sum of the generator symbols.
    fn check_boundary(&self) {
        use std::collections::BTreeMap;
        let full: Vec<usize> = (1..=self.n).collect();
        let reduce = |w: Vec<usize>| -> Vec<usize> {
            if w == full {
                Vec::new()
            } else {
                w
            }
        };
        let mut chain: BTreeMap<Vec<usize>, i64> = BTreeMap::new();
        let mut add = |w: Vec<usize>, coeff: i64| {
            let w = reduce(w);
            if w.is_empty() {
                return; // degenerate symbol
            }
            let e = chain.entry(w).or_insert(0);
            *e += coeff;
            if *e == 0 {
                chain.remove(&reduce(Vec::new()));
            }
        };
        for &(prefix_len, gen) in &self.terms {
            let prefix: Vec<usize> = (1..=prefix_len).collect();
            let mut joined = prefix.clone();
            joined.push(gen);
            add(vec![gen], 1);
            add(joined, -1);
            add(prefix, 1);
        }
        let expected: BTreeMap<Vec<usize>, i64> = (1..=self.n).map(|i| (vec![i], 1)).collect();
        let cleaned: BTreeMap<Vec<usize>, i64> =
            chain.into_iter().filter(|&(_, c)| c != 0).collect();
        assert_eq!(
            cleaned, expected,
            "boundary of the relative fundamental class must be the generator sum"
        );
    }
}

/// Build a cocycle from per-generator potentials. With `project`, the
/// potentials receive the least-norm correction (in the Killing metric)
/// that makes the cocycle closed; fails with `ProjectionSingular` at
/// degenerate anchors where the closure constraint drops rank.
pub fn make_cocycle(
    t: &HolonomyTuple,
    x: Vec<AlgebraElement>,
    project: bool,
) -> Result<ParabolicCocycle> {
    if x.len() != t.len() {
        return Err(Error::Config(format!(
            "{} potentials for {} entries",
            x.len(),
            t.len()
        )));
    }
    let mut x = x;
    if project {
        let blocks = closure_constraint_blocks(t);
        // Residual S = sum_i M_i x_i and normal matrix sum_i M_i M_i^T.
        let mut s = AlgebraElement::ZERO;
        let mut normal = Mat3::ZERO;
        for (xi, m) in x.iter().zip(&blocks) {
            s = s.add(&m.mul_vec(xi));
            normal = normal.add(&m.mul(&m.transpose()));
        }
        let lambda = normal.solve(&s, 1e-10).ok_or(Error::ProjectionSingular)?;
        for (xi, m) in x.iter_mut().zip(&blocks) {
            *xi = xi.sub(&m.transpose().mul_vec(&lambda));
        }
    }
    let c = x
        .iter()
        .zip(t.entries())
        .map(|(xi, gi)| xi.sub(&adjoint(gi, xi)))
        .collect();
    Ok(ParabolicCocycle {
        x,
        c,
        anchor: t.clone(),
    })
}

/// Cocycle with constant potential: the coboundary of x0. Closed
/// automatically on closed anchors by telescoping.
pub fn coboundary(t: &HolonomyTuple, x0: &AlgebraElement) -> Result<ParabolicCocycle> {
    make_cocycle(t, vec![*x0; t.len()], false)
}

impl ParabolicCocycle {
    pub fn potentials(&self) -> &[AlgebraElement] {
        &self.x
    }

    pub fn values(&self) -> &[AlgebraElement] {
        &self.c
    }

    pub fn anchor(&self) -> &HolonomyTuple {
        &self.anchor
    }

    /// Cocycle value on the prefix word gamma_1 ... gamma_m:
    /// sum_{i<=m} Ad_{g_1...g_{i-1}} c_i.
    pub fn word_value(&self, m: usize) -> AlgebraElement {
        let mut acc = AlgebraElement::ZERO;
        let mut prefix = GroupElement::IDENTITY;
        for i in 0..m.min(self.c.len()) {
            acc = acc.add(&adjoint(&prefix, &self.c[i]));
            prefix = prefix.mul(self.anchor.entry(i));
        }
        acc
    }

    /// Norm of the full-relator value; zero for closed cocycles on
    /// closed anchors.
    pub fn closure_defect(&self) -> f64 {
        self.word_value(self.c.len()).norm()
    }

    pub fn is_closed(&self) -> bool {
        self.closure_defect() < COCYCLE_CLOSED_TOL
    }
}

fn check_anchors(a: &ParabolicCocycle, b: &ParabolicCocycle) -> Result<()> {
    if a.anchor.len() != b.anchor.len() || a.anchor.distance(&b.anchor) > ANCHOR_TOL {
        return Err(Error::AnchorMismatch);
    }
    Ok(())
}

fn check_closed_inputs(a: &ParabolicCocycle, b: &ParabolicCocycle) -> Result<()> {
    check_anchors(a, b)?;
    let res = closure_residual(&a.anchor);
    if res >= ANCHOR_CLOSED_TOL {
        return Err(Error::NotClosed { residual: res });
    }
    let defect = a.closure_defect().max(b.closure_defect());
    if defect >= COCYCLE_CLOSED_TOL {
        return Err(Error::NotClosed { residual: defect });
    }
    Ok(())
}

/// Cup product of two 1-cocycles evaluated on the relative fundamental
/// class: sum_{j=2}^n ( c(gamma_1...gamma_{j-1}), Ad_{g_1...g_{j-1}}
/// c'(gamma_j) ).
pub fn cup11(c: &ParabolicCocycle, c2: &ParabolicCocycle) -> Result<f64> {
    check_anchors(c, c2)?;
    let n = c.anchor.len();
    let class = RelativeFundamentalClass::new(n);
    let mut total = 0.0;
    for &(prefix_len, gen) in class.terms() {
        let transport = c.anchor.partial_product(0, prefix_len);
        total += killing(
            &c.word_value(prefix_len),
            &adjoint(&transport, &c2.values()[gen - 1]),
        );
    }
    Ok(total)
}

/// The cup-product symplectic pairing of two closed cocycles:
///
/// ```text
/// A(c, c') = sum_i ( c_i, Ad_{g_i} x'_i ) - < c u c', [fund class] >
/// ```
///
/// The orientation of the 0-1 cup pairing is the unique reading that
/// makes A equal to [`pullback_form`] with the sign fixed by the
/// Hamiltonian-compatibility oracle (the pairing of a Hamiltonian
/// field's cocycle against a tangent cocycle is the directional
/// derivative of the Hamiltonian).
pub fn goldman_form(c: &ParabolicCocycle, c2: &ParabolicCocycle) -> Result<f64> {
    check_closed_inputs(c, c2)?;
    let mut total = 0.0;
    for ((ci, x2i), gi) in c
        .values()
        .iter()
        .zip(c2.potentials())
        .zip(c.anchor.entries())
    {
        total += killing(ci, &adjoint(gi, x2i));
    }
    Ok(total - cup11(c, c2)?)
}

/// The reduction 2-form evaluated on cocycle data: per-entry class
/// terms 1/2 ( Ad_{g_i^{-1}} c_i + c_i, x'_i ) plus the fusion wedge
/// -1/2 sum_{i<j} [ (Ad_{L_i} c_i, Ad_{L_j} c'_j)
///               - (Ad_{L_i} c'_i, Ad_{L_j} c_j) ],
/// with L_i the prefix product before entry i. The overall orientation
/// is pinned by the Hamiltonian-compatibility oracle: pairing the
/// cocycle of a Hamiltonian vector field against a tangent cocycle
/// returns the directional derivative of the Hamiltonian.
pub fn pullback_form(c: &ParabolicCocycle, c2: &ParabolicCocycle) -> Result<f64> {
    check_closed_inputs(c, c2)?;
    let n = c.anchor.len();
    let mut total = 0.0;
    for i in 0..n {
        let gi = c.anchor.entry(i);
        let ci = &c.values()[i];
        let bent = adjoint(&gi.inverse(), ci).add(ci);
        total += 0.5 * killing(&bent, &c2.potentials()[i]);
    }
    // Transport every generator value to the basepoint.
    let mut transported_c = Vec::with_capacity(n);
    let mut transported_c2 = Vec::with_capacity(n);
    let mut prefix = GroupElement::IDENTITY;
    for i in 0..n {
        transported_c.push(adjoint(&prefix, &c.values()[i]));
        transported_c2.push(adjoint(&prefix, &c2.values()[i]));
        prefix = prefix.mul(c.anchor.entry(i));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            total -= 0.5
                * (killing(&transported_c[i], &transported_c2[j])
                    - killing(&transported_c2[i], &transported_c[j]));
        }
    }
    Ok(total)
}

/// Differential of the holonomy correspondence: the cocycle's
/// potentials are exactly the exponential coordinates of the tangent
/// vector, v_i = x_i g_i - g_i x_i.
pub fn upsilon_diff(c: &ParabolicCocycle) -> TangentVector {
    TangentVector {
        xi: c.x.clone(),
        anchor: c.anchor.clone(),
    }
}

/// Tangent vector reinterpreted as a cocycle at its anchor.
pub fn cocycle_from_tangent(v: &TangentVector) -> Result<ParabolicCocycle> {
    make_cocycle(&v.anchor, v.xi.clone(), false)
}

/// Invariant length function of a holonomy word: the side length of
/// the product of the named entries (1-based indices). For the prefix
/// word 1..=i this equals the fan diagonal length to vertex i+1.
pub fn goldman_length(t: &HolonomyTuple, word: &[usize]) -> Result<f64> {
    if word.is_empty() {
        return Err(Error::Config("empty holonomy word".into()));
    }
    let mut prod = GroupElement::IDENTITY;
    for &i in word {
        if i < 1 || i > t.len() {
            return Err(Error::BadIndex {
                index: i,
                min: 1,
                max: t.len(),
            });
        }
        prod = prod.mul(t.entry(i - 1));
    }
    Ok(side_length(&prod))
}
