//! Bracket calculus on conjugation-invariant functions of holonomy
//! tuples.
//!
//! For a smooth function psi of the tuple, D_i psi and D'_i psi are the
//! algebra-valued derivatives along right- and left-translated
//! directions at entry i:
//!
//!   (D_i psi, x)  = d/dt psi(..., e^{tx} g_i, ...) |_{t=0}
//!   (D'_i psi, x) = d/dt psi(..., g_i e^{tx}, ...) |_{t=0}
//!
//! with Ad_{g_i} D'_i psi = D_i psi. The accumulants
//!
//!   Psi_j = sum_{i<j} [D_i psi - D'_i psi] + D_j psi
//!
//! give the Poisson bracket of two invariant functions,
//!
//!   {phi, psi} = sum_j (D'_j phi - D_j phi, Psi_j(psi)),
//!
//! and the Hamiltonian field of psi, whose velocity at entry j is
//! g_j Psi_j - Psi_j g_j. The bracket convention is
//! {phi, psi} = d phi(X_psi); signs are pinned by requiring the
//! closed-form bending flows to integrate these fields exactly (checked
//! in the `bending` module).
//!
//! Trace words (traces of products of entries and inverses) carry exact
//! analytic derivatives; any other function falls back to central
//! differences with step 1e-5.

use crate::moduli::HolonomyTuple;
use crate::su2::{adjoint, class_tangent, exp_alg, killing, AlgebraElement, GroupElement};
use crate::TangentVector;
use crate::{Error, Result};

/// Central-difference step for numerical derivatives.
const FD_STEP: f64 = 1e-5;

/// One letter of a trace word: a 0-based entry index and an exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WordLetter {
    pub index: usize,
    pub inverse: bool,
}

impl WordLetter {
    pub fn plain(index: usize) -> WordLetter {
        WordLetter {
            index,
            inverse: false,
        }
    }
}

type Evaluator = Box<dyn Fn(&HolonomyTuple) -> f64 + Sync + Send>;

/// A smooth function of holonomy tuples, expected to be invariant under
/// diagonal conjugation. Invariance is not enforced by construction;
/// [`invariance_defect`] serves as the validator.
pub struct InvariantFunction {
    name: String,
    evaluator: Evaluator,
    word: Option<Vec<WordLetter>>,
}

impl InvariantFunction {
    /// Trace of a product of entries and inverses, with exact
    /// derivatives. Indices are 0-based entry positions.
    pub fn trace_word(name: impl Into<String>, word: Vec<WordLetter>) -> InvariantFunction {
        let w = word.clone();
        InvariantFunction {
            name: name.into(),
            evaluator: Box::new(move |t| eval_word(&w, t).trace()),
            word: Some(word),
        }
    }

    /// Trace of the prefix product g_1 ... g_j (j is 1-based).
    pub fn prefix_trace(j: usize) -> InvariantFunction {
        let word = (0..j).map(WordLetter::plain).collect();
        InvariantFunction::trace_word(format!("f_{j}"), word)
    }

    /// Trace of g_i g_j for 1-based i < j.
    pub fn pair_trace(i: usize, j: usize) -> InvariantFunction {
        let word = vec![WordLetter::plain(i - 1), WordLetter::plain(j - 1)];
        InvariantFunction::trace_word(format!("f_{i},{j}"), word)
    }

    /// Arbitrary evaluator; derivatives fall back to central
    /// differences.
    pub fn from_fn(
        name: impl Into<String>,
        f: impl Fn(&HolonomyTuple) -> f64 + Sync + Send + 'static,
    ) -> InvariantFunction {
        InvariantFunction {
            name: name.into(),
            evaluator: Box::new(f),
            word: None,
        }
    }

    /// Pointwise product f * h.
    pub fn product(f: InvariantFunction, h: InvariantFunction) -> InvariantFunction {
        let name = format!("{}*{}", f.name, h.name);
        InvariantFunction::from_fn(name, move |t| f.eval(t) * h.eval(t))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, t: &HolonomyTuple) -> f64 {
        (self.evaluator)(t)
    }
}

fn eval_word(word: &[WordLetter], t: &HolonomyTuple) -> GroupElement {
    word.iter().fold(GroupElement::IDENTITY, |acc, l| {
        let g = t.entry(l.index);
        acc.mul(&if l.inverse { g.inverse() } else { *g })
    })
}

/// -2 Im(q): the algebra element pairing to Tr(x q) for all pure x.
fn trace_gradient(q: &GroupElement) -> AlgebraElement {
    q.imag().scale(-2.0)
}

fn analytic_d(word: &[WordLetter], t: &HolonomyTuple, slot: usize, left: bool) -> AlgebraElement {
    let mut total = AlgebraElement::ZERO;
    for (l, letter) in word.iter().enumerate() {
        if letter.index != slot {
            continue;
        }
        let g = t.entry(slot);
        // A = product before the letter, B = product after it; the
        // cyclic rearrangement below pairs each occurrence with x.
        let a = eval_word(&word[..l], t);
        let b = eval_word(&word[(l + 1)..], t);
        let ba = b.mul(&a);
        let contribution = match (letter.inverse, left) {
            // d/dt tr(A e^{tx} g B) = tr(x g B A)
            (false, false) => trace_gradient(&g.mul(&ba)),
            // d/dt tr(A g e^{tx} B) = tr(x B A g)
            (false, true) => trace_gradient(&ba.mul(g)),
            // d/dt tr(A g^{-1} e^{-tx} B) = -tr(x B A g^{-1})
            (true, false) => trace_gradient(&ba.mul(&g.inverse())).scale(-1.0),
            // d/dt tr(A e^{-tx} g^{-1} B) = -tr(x g^{-1} B A)
            (true, true) => trace_gradient(&g.inverse().mul(&ba)).scale(-1.0),
        };
        total = total.add(&contribution);
    }
    total
}

fn numeric_d(f: &InvariantFunction, t: &HolonomyTuple, slot: usize, left: bool) -> AlgebraElement {
    let mut out = [0.0; 3];
    for (a, e) in AlgebraElement::basis().iter().enumerate() {
        let step = exp_alg(&e.scale(FD_STEP));
        let step_inv = exp_alg(&e.scale(-FD_STEP));
        let mut plus = t.entries().to_vec();
        let mut minus = t.entries().to_vec();
        if left {
            plus[slot] = plus[slot].mul(&step);
            minus[slot] = minus[slot].mul(&step_inv);
        } else {
            plus[slot] = step.mul(&plus[slot]);
            minus[slot] = step_inv.mul(&minus[slot]);
        }
        let fp = f.eval(&HolonomyTuple::unchecked(plus));
        let fm = f.eval(&HolonomyTuple::unchecked(minus));
        out[a] = (fp - fm) / (2.0 * FD_STEP);
    }
    AlgebraElement::new(out[0], out[1], out[2])
}

fn bad_index(i: usize, n: usize) -> Error {
    Error::BadIndex {
        index: i,
        min: 1,
        max: n,
    }
}

/// D_i f: derivative along e^{tx} g_i (i is 1-based).
pub fn d_right(f: &InvariantFunction, t: &HolonomyTuple, i: usize) -> Result<AlgebraElement> {
    let n = t.len();
    if i < 1 || i > n {
        return Err(bad_index(i, n));
    }
    Ok(match &f.word {
        Some(w) => analytic_d(w, t, i - 1, false),
        None => numeric_d(f, t, i - 1, false),
    })
}

/// D'_i f: derivative along g_i e^{tx} (i is 1-based).
pub fn d_left(f: &InvariantFunction, t: &HolonomyTuple, i: usize) -> Result<AlgebraElement> {
    let n = t.len();
    if i < 1 || i > n {
        return Err(bad_index(i, n));
    }
    Ok(match &f.word {
        Some(w) => analytic_d(w, t, i - 1, true),
        None => numeric_d(f, t, i - 1, true),
    })
}

/// The accumulant Psi_j f = sum_{i<j} [D_i f - D'_i f] + D_j f
/// (j is 1-based).
pub fn psi_accum(f: &InvariantFunction, t: &HolonomyTuple, j: usize) -> Result<AlgebraElement> {
    let n = t.len();
    if j < 1 || j > n {
        return Err(bad_index(j, n));
    }
    let mut acc = AlgebraElement::ZERO;
    for i in 1..j {
        acc = acc.add(&d_right(f, t, i)?).sub(&d_left(f, t, i)?);
    }
    Ok(acc.add(&d_right(f, t, j)?))
}

/// Poisson bracket of two invariant functions at `t`:
/// sum_j (D'_j f - D_j f, Psi_j(h)).
pub fn bracket(f: &InvariantFunction, h: &InvariantFunction, t: &HolonomyTuple) -> Result<f64> {
    let mut total = 0.0;
    for j in 1..=t.len() {
        let df = d_left(f, t, j)?.sub(&d_right(f, t, j)?);
        total += killing(&df, &psi_accum(h, t, j)?);
    }
    Ok(total)
}

/// Hamiltonian vector field of an invariant function, in exponential
/// coordinates: xi_j = -Psi_j, so the velocity at entry j is
/// g_j Psi_j - Psi_j g_j.
pub fn ham_field(f: &InvariantFunction, t: &HolonomyTuple) -> Result<TangentVector> {
    let xi = (1..=t.len())
        .map(|j| psi_accum(f, t, j).map(|p| p.scale(-1.0)))
        .collect::<Result<Vec<_>>>()?;
    Ok(TangentVector {
        xi,
        anchor: t.clone(),
    })
}

/// Killing norm of sum_i (D_i f - D'_i f); near zero certifies
/// invariance under diagonal conjugation.
pub fn invariance_defect(f: &InvariantFunction, t: &HolonomyTuple) -> Result<f64> {
    let mut acc = AlgebraElement::ZERO;
    for i in 1..=t.len() {
        acc = acc.add(&d_right(f, t, i)?).sub(&d_left(f, t, i)?);
    }
    Ok(acc.norm())
}

/// Residual of the group-valued moment-map condition at `t` for the
/// algebra element `x`: the bivector contraction of the pulled-back
/// 1-form (x, theta) against the fused bivector must equal the vector
/// field generated by y = 1/2 (1 + Ad_mu) x acting diagonally, where mu
/// is the full product. Both sides are assembled in closed form; the
/// returned root-sum-square of the per-entry differences vanishes (to
/// rounding) on every tuple.
pub fn moment_compatibility(t: &HolonomyTuple, x: &AlgebraElement) -> f64 {
    let n = t.len();
    let g = t.entries();
    // Suffix products R_i = g_{i+1} ... g_n (0-based slot i).
    let mut suffix = vec![GroupElement::IDENTITY; n + 1];
    for i in (0..n).rev() {
        suffix[i] = g[i].mul(&suffix[i + 1]);
    }
    let mu = suffix[0];
    let y = x.add(&adjoint(&mu, x)).scale(0.5);

    // Transported coefficients a_i = Ad_{R_i} x, b_i = Ad_{g_i} a_i.
    let a: Vec<AlgebraElement> = (0..n).map(|i| adjoint(&suffix[i + 1], x)).collect();
    let b: Vec<AlgebraElement> = (0..n).map(|i| adjoint(&g[i], &a[i])).collect();
    let z: Vec<AlgebraElement> = (0..n).map(|i| a[i].sub(&b[i])).collect();

    let mut residual_sq = 0.0;
    for i in 0..n {
        // Contraction of the per-class bivector: 1/2 (a_i g_i - g_i b_i).
        let (_, vg) = crate::su2::quat_mul_vg(&a[i], &g[i]);
        let (_, gv) = crate::su2::quat_mul_gv(&g[i], &b[i]);
        let self_term = vg.sub(&gv).scale(0.5);
        // Contraction of the fusion terms: 1/2 [xi, g_i] with
        // xi = sum_{m>i} z_m - sum_{l<i} z_l.
        let mut s = AlgebraElement::ZERO;
        for (m, zm) in z.iter().enumerate() {
            if m > i {
                s = s.add(zm);
            } else if m < i {
                s = s.sub(zm);
            }
        }
        let fusion = class_tangent(&s.scale(0.5), &g[i]);
        let lhs = self_term.add(&fusion);
        let rhs = class_tangent(&y, &g[i]);
        residual_sq += lhs.sub(&rhs).norm().powi(2);
    }
    residual_sq.sqrt()
}
