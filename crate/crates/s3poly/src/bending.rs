//! Bending flows: the integrable system of prefix-trace Hamiltonians.
//!
//! For a holonomy tuple, f_j = tr(g_1 ... g_j) is the trace of the
//! prefix product, and F_j = (g_1...g_j) - (g_1...g_j)^{-1} is twice its
//! imaginary part. The Hamiltonian flow of f_j conjugates the first j
//! entries by exp(t F_j) and fixes the rest: the polygon bends rigidly
//! about the diagonal from vertex 1 to vertex j+1. Every f_k is
//! conserved by every flow, the flows commute, and each is periodic
//! with period 2 pi / sqrt(4 - f_j^2).
//!
//! The diagonal length ell_j = arccos(f_j / 2) generates the same
//! motion at unit angular speed; those normalized flows all have period
//! 2 pi and assemble into an (n-3)-torus action over the diagonals
//! j = 2 .. n-2, defined wherever no diagonal length hits 0 or pi.

use crate::moduli::{closure_residual, HolonomyTuple};
use crate::quasipoisson::{ham_field, InvariantFunction};
use crate::su2::{conjugate, exp_alg, AlgebraElement, GroupElement};
use crate::{Error, Result};

/// Prefix diagonals count as degenerate when |f_j| reaches this bound.
const DEGENERATE_F: f64 = 2.0 - 1e-9;

/// A single bending-flow request: prefix index, flow parameter, and
/// whether the parameter is a raw time (f-flow) or an angle (length
/// flow at unit angular speed).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowSpec {
    pub j: usize,
    pub t: f64,
    pub normalized: bool,
}

impl FlowSpec {
    /// Run the requested flow: the raw f_j flow for `t` seconds, or
    /// the unit-angular-speed bending through angle `t`.
    pub fn apply(&self, tuple: &HolonomyTuple) -> Result<HolonomyTuple> {
        if self.normalized {
            flow_ell(tuple, self.j, self.t)
        } else {
            flow_f(tuple, self.j, self.t)
        }
    }
}

fn check_prefix(t: &HolonomyTuple, j: usize) -> Result<()> {
    if j < 1 || j > t.len() {
        return Err(Error::BadIndex {
            index: j,
            min: 1,
            max: t.len(),
        });
    }
    Ok(())
}

/// f_j = tr(g_1 ... g_j), in [-2, 2]. `j` is 1-based.
pub fn f_val(t: &HolonomyTuple, j: usize) -> Result<f64> {
    check_prefix(t, j)?;
    Ok(t.partial_product(0, j).trace())
}

/// F_j = (g_1...g_j) - (g_1...g_j)^{-1} = 2 Im(g_1...g_j), the
/// bending axis scaled by sqrt(4 - f_j^2).
pub fn f_cap(t: &HolonomyTuple, j: usize) -> Result<AlgebraElement> {
    check_prefix(t, j)?;
    Ok(t.partial_product(0, j).imag().scale(2.0))
}

/// Closed-form flow of f_j for the given time: entries 1..=j are
/// conjugated by exp(time F_j), the rest are untouched. Side lengths,
/// closure, and every prefix trace f_k are preserved.
pub fn flow_f(t: &HolonomyTuple, j: usize, time: f64) -> Result<HolonomyTuple> {
    check_prefix(t, j)?;
    let conjugator = exp_alg(&f_cap(t, j)?.scale(time));
    let g = t
        .entries()
        .iter()
        .enumerate()
        .map(|(k, gk)| {
            if k < j {
                conjugate(&conjugator, gk)
            } else {
                *gk
            }
        })
        .collect();
    t.with_entries(g)
}

/// Period of the f_j flow, 2 pi / sqrt(4 - f_j^2). Fails when the
/// prefix product is within 1e-9 of a central element (the bending
/// axis vanishes and the flow freezes).
pub fn period_f(t: &HolonomyTuple, j: usize) -> Result<f64> {
    let f = f_val(t, j)?;
    if f.abs() >= DEGENERATE_F {
        return Err(Error::DegenerateDiagonal { j, f_abs: f.abs() });
    }
    Ok(2.0 * std::f64::consts::PI / (4.0 - f * f).sqrt())
}

/// Bending through a fixed angle: the f_j flow reparameterized to unit
/// angular speed, i.e. flow_f at time angle / sqrt(4 - f_j^2). Periodic
/// in the angle with period 2 pi. Undefined at degenerate diagonals.
pub fn flow_ell(t: &HolonomyTuple, j: usize, angle: f64) -> Result<HolonomyTuple> {
    let f = f_val(t, j)?;
    if f.abs() >= DEGENERATE_F {
        return Err(Error::DegenerateDiagonal { j, f_abs: f.abs() });
    }
    flow_f(t, j, angle / (4.0 - f * f).sqrt())
}

/// Torus action over the fan diagonals: apply the unit-speed bending
/// flow for each j = 2..=n-2 with the corresponding angle. The flows
/// commute, so the composition order is immaterial (checked in tests).
/// Requires a closed, non-degenerate tuple and n-3 angles.
pub fn torus_action(t: &HolonomyTuple, angles: &[f64]) -> Result<HolonomyTuple> {
    let n = t.len();
    if n < 4 {
        return Err(Error::Config(format!(
            "torus action needs n >= 4 sides, got {n}"
        )));
    }
    if angles.len() != n - 3 {
        return Err(Error::Config(format!(
            "expected {} angles for n = {n}, got {}",
            n - 3,
            angles.len()
        )));
    }
    let res = closure_residual(t);
    if res >= 1e-9 {
        return Err(Error::NotClosed { residual: res });
    }
    if crate::moduli::is_degenerate(t, crate::moduli::DEGENERACY_TOL) {
        return Err(Error::DegeneratePoint);
    }
    let mut out = t.clone();
    for (idx, &angle) in angles.iter().enumerate() {
        out = flow_ell(&out, idx + 2, angle)?;
    }
    Ok(out)
}

/// Fourth-order Runge-Kutta integration of the Hamiltonian field of an
/// arbitrary invariant function, with entries re-projected to unit norm
/// each step. Serves as the independent oracle for the closed-form
/// flows; global error is O((time/steps)^4).
pub fn integrate_field(
    f: &InvariantFunction,
    t: &HolonomyTuple,
    time: f64,
    steps: usize,
) -> Result<HolonomyTuple> {
    assert!(steps >= 1, "integrator needs at least one step");
    let n = t.len();
    let h = time / steps as f64;

    // Velocities of the Hamiltonian field at an arbitrary entry state,
    // as ambient R^4 vectors per entry.
    let velocity = |g: &[GroupElement]| -> Result<Vec<[f64; 4]>> {
        let state = HolonomyTuple::unchecked(g.to_vec());
        let field = ham_field(f, &state)?;
        Ok(field
            .velocities()
            .iter()
            .map(|v| [0.0, v.x, v.y, v.z])
            .collect())
    };
    let advance = |g: &[GroupElement], k: &[[f64; 4]], s: f64| -> Vec<GroupElement> {
        g.iter()
            .zip(k)
            .map(|(gi, ki)| {
                GroupElement::new(
                    gi.w + s * ki[0],
                    gi.x + s * ki[1],
                    gi.y + s * ki[2],
                    gi.z + s * ki[3],
                )
            })
            .collect()
    };

    let mut g: Vec<GroupElement> = t.entries().to_vec();
    for _ in 0..steps {
        let k1 = velocity(&g)?;
        let k2 = velocity(&advance(&g, &k1, h / 2.0))?;
        let k3 = velocity(&advance(&g, &k2, h / 2.0))?;
        let k4 = velocity(&advance(&g, &k3, h))?;
        let mut combined = vec![[0.0f64; 4]; n];
        for i in 0..n {
            for c in 0..4 {
                combined[i][c] = (k1[i][c] + 2.0 * k2[i][c] + 2.0 * k3[i][c] + k4[i][c]) / 6.0;
            }
        }
        g = advance(&g, &combined, h);
    }
    // Entries have drifted off their classes by the integrator error;
    // report them as they are.
    Ok(HolonomyTuple::unchecked(g))
}
