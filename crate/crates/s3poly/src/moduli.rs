//! The polygon model: conjugacy classes, holonomy tuples, vertex
//! reconstruction, closure solving, degeneracy and regularity tests.
//!
//! An edge holonomy g translates the base vertex by the geodesic
//! distance d(1, g) = arccos(trace(g)/2), so the conjugacy class C_r of
//! elements with side length r in (0, pi) is the 2-sphere
//! { g : Re g = cos r }. A tuple (g_1, ..., g_n) with g_i in C_{r_i}
//! describes an open polygon through the vertices 1, g_1, g_1 g_2, ...;
//! it closes exactly when the product of all entries is the identity.
//!
//! Vertex indices are 1-based throughout, matching the usual labelling
//! of an (n+1)-vertex polygon.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use crate::error::Error;
use crate::smallmat::{null_space, Mat3};
use crate::su2::{
    adjoint, class_tangent, conjugate, exp_alg, geodesic_distance, killing, log_group,
    AlgebraElement, GroupElement,
};
use crate::Result;

/// Tolerance for the side-length invariant of a holonomy tuple.
const SIDE_TOL: f64 = 1e-9;

/// Closure residual below which a polygon counts as closed.
const CLOSED_TOL: f64 = 1e-9;

/// Default tolerance for pairwise-axis degeneracy tests.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Default closure-solver tolerance.
pub const SOLVE_TOL: f64 = 1e-10;

/// Restart budget of the closure solver.
const MAX_RESTARTS: usize = 64;

/// Newton iteration budget per restart.
const MAX_ITERS: usize = 500;

/// A vector of side lengths, each in the open interval (0, pi).
#[derive(Debug, Clone, PartialEq)]
pub struct SideLengths {
    r: Vec<f64>,
}

impl SideLengths {
    /// Validates n >= 3 and 0 < r_i < pi.
    pub fn new(r: Vec<f64>) -> Result<SideLengths> {
        if r.len() < 3 {
            return Err(Error::BadSideCount { n: r.len() });
        }
        for &ri in &r {
            if !(ri > 0.0 && ri < PI) || !ri.is_finite() {
                return Err(Error::BadRadius { radius: ri });
            }
        }
        Ok(SideLengths { r })
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.r
    }

    pub fn get(&self, i: usize) -> f64 {
        self.r[i]
    }
}

/// An ordered tuple of edge holonomies, each pinned to its conjugacy
/// class; the cached side lengths are the class labels.
#[derive(Debug, Clone)]
pub struct HolonomyTuple {
    g: Vec<GroupElement>,
    r: SideLengths,
}

/// An ordered vertex list on the unit 3-sphere.
#[derive(Debug, Clone)]
pub struct PolygonS3 {
    pub vertices: Vec<GroupElement>,
    pub closed: bool,
}

/// A tangent vector to the product of conjugacy classes at `anchor`,
/// in exponential coordinates: component i generates the class-tangent
/// direction v_i = xi_i g_i - g_i xi_i.
#[derive(Debug, Clone)]
pub struct TangentVector {
    pub xi: Vec<AlgebraElement>,
    pub anchor: HolonomyTuple,
}

/// Side length of a single edge holonomy: the geodesic distance by
/// which it translates the base point, arccos(trace/2) in [0, pi].
pub fn side_length(g: &GroupElement) -> f64 {
    (g.trace() / 2.0).clamp(-1.0, 1.0).acos()
}

/// Deterministic generator for the given seed.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_unit_axis<R: Rng>(rng: &mut R) -> AlgebraElement {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let phi: f64 = rng.gen_range(0.0..2.0 * PI);
    let s = (1.0 - z * z).max(0.0).sqrt();
    AlgebraElement::new(s * phi.cos(), s * phi.sin(), z)
}

/// Uniform sample from the conjugacy class of side length `r`: real
/// part cos r, imaginary part sin r times a uniform axis on S^2.
pub fn sample_conjugacy<R: Rng>(r: f64, rng: &mut R) -> Result<GroupElement> {
    if !(r > 0.0 && r < PI) || !r.is_finite() {
        return Err(Error::BadRadius { radius: r });
    }
    let axis = random_unit_axis(rng);
    let (s, c) = r.sin_cos();
    Ok(GroupElement::new(c, s * axis.x, s * axis.y, s * axis.z))
}

impl HolonomyTuple {
    /// Build from entries and class labels, checking each entry sits in
    /// its class within 1e-9.
    pub fn new(g: Vec<GroupElement>, r: SideLengths) -> Result<HolonomyTuple> {
        if g.len() != r.len() {
            return Err(Error::Config(format!(
                "{} entries vs {} side lengths",
                g.len(),
                r.len()
            )));
        }
        for (gi, &ri) in g.iter().zip(r.values()) {
            if (side_length(gi) - ri).abs() > SIDE_TOL {
                return Err(Error::BadRadius {
                    radius: side_length(gi),
                });
            }
        }
        Ok(HolonomyTuple { g, r })
    }

    /// Build from entries alone, reading class labels off the entries.
    pub fn from_elements(g: Vec<GroupElement>) -> Result<HolonomyTuple> {
        let r = SideLengths::new(g.iter().map(side_length).collect())?;
        Ok(HolonomyTuple { g, r })
    }

    /// Internal constructor that skips the class-range validation.
    /// Finite-difference probes and integrator substeps sit slightly
    /// off the classes; labels are still read off the entries.
    pub(crate) fn unchecked(g: Vec<GroupElement>) -> HolonomyTuple {
        let r = SideLengths {
            r: g.iter().map(side_length).collect(),
        };
        HolonomyTuple { g, r }
    }

    pub fn len(&self) -> usize {
        self.g.len()
    }

    pub fn is_empty(&self) -> bool {
        self.g.is_empty()
    }

    pub fn entries(&self) -> &[GroupElement] {
        &self.g
    }

    pub fn entry(&self, i: usize) -> &GroupElement {
        &self.g[i]
    }

    pub fn side_lengths(&self) -> &SideLengths {
        &self.r
    }

    /// Product of entries `lo..hi` (0-based, half-open), identity when
    /// empty.
    pub fn partial_product(&self, lo: usize, hi: usize) -> GroupElement {
        GroupElement::product(&self.g[lo..hi])
    }

    /// Replace the entries, keeping class labels, re-checking the class
    /// invariant.
    pub(crate) fn with_entries(&self, g: Vec<GroupElement>) -> Result<HolonomyTuple> {
        HolonomyTuple::new(g, self.r.clone())
    }

    /// Replace the entries and permute the class labels accordingly
    /// (for moves that swap neighbouring classes).
    pub(crate) fn with_entries_relabelled(&self, g: Vec<GroupElement>) -> Result<HolonomyTuple> {
        HolonomyTuple::from_elements(g)
    }

    /// Largest entrywise quaternion distance to another tuple.
    pub fn distance(&self, other: &HolonomyTuple) -> f64 {
        self.g
            .iter()
            .zip(other.entries())
            .map(|(a, b)| a.dist(b))
            .fold(0.0, f64::max)
    }
}

/// Quaternion distance of the full product from the identity.
pub fn closure_residual(t: &HolonomyTuple) -> f64 {
    t.partial_product(0, t.len()).dist(&GroupElement::IDENTITY)
}

/// True when all edge axes are pairwise parallel within `tol`, i.e. the
/// polygon lies on a single geodesic. Near-zero axes (entries close to
/// a central element) count as parallel to everything.
pub fn is_degenerate(t: &HolonomyTuple, tol: f64) -> bool {
    let axes: Vec<Option<AlgebraElement>> = t
        .entries()
        .iter()
        .map(|g| g.imag().normalized(tol))
        .collect();
    for (i, a) in axes.iter().enumerate() {
        for b in axes.iter().skip(i + 1) {
            if let (Some(a), Some(b)) = (a, b) {
                if a.cross(b).norm() > tol {
                    return false;
                }
            }
        }
    }
    true
}

/// Entry-wise conjugation by `k` (the diagonal group action). Preserves
/// side lengths and closure residual.
pub fn diagonal_conjugate(k: &GroupElement, t: &HolonomyTuple) -> HolonomyTuple {
    let g = t.entries().iter().map(|gi| conjugate(k, gi)).collect();
    HolonomyTuple {
        g,
        r: t.side_lengths().clone(),
    }
}

/// Vertex list of the polygon traced by the tuple from `base`:
/// vertex_k = g_1 ... g_{k-1} * base, for k = 1..n+1.
pub fn to_polygon(t: &HolonomyTuple, base: &GroupElement) -> PolygonS3 {
    let mut vertices = Vec::with_capacity(t.len() + 1);
    let mut prefix = GroupElement::IDENTITY;
    vertices.push(prefix.mul(base));
    for g in t.entries() {
        prefix = prefix.mul(g);
        vertices.push(prefix.mul(base));
    }
    PolygonS3 {
        vertices,
        closed: closure_residual(t) < CLOSED_TOL,
    }
}

/// Length of the diagonal between vertices `i` and `j` (1-based,
/// i < j <= n+1): the side length of the partial product
/// g_i g_{i+1} ... g_{j-1}.
pub fn diagonal_length(t: &HolonomyTuple, i: usize, j: usize) -> Result<f64> {
    let n = t.len();
    if i < 1 || j <= i || j > n + 1 {
        return Err(Error::BadIndices { i, j, n });
    }
    Ok(side_length(&t.partial_product(i - 1, j - 1)))
}

struct NewtonState {
    g: Vec<GroupElement>,
}

impl NewtonState {
    fn residual_vec(&self) -> Option<AlgebraElement> {
        let p = GroupElement::product(&self.g);
        log_group(&p).ok()
    }

    fn residual_norm(&self) -> f64 {
        GroupElement::product(&self.g).dist(&GroupElement::IDENTITY)
    }

    /// Conjugate entry i by exp(step) (a class-preserving move).
    fn conjugated(&self, moves: &[AlgebraElement]) -> Vec<GroupElement> {
        self.g
            .iter()
            .zip(moves)
            .map(|(g, m)| conjugate(&exp_alg(m), g))
            .collect()
    }
}

/// Solve for a closed, non-degenerate tuple with the given side
/// lengths: random class samples refined by damped Newton steps along
/// class-tangent directions, restarting on stagnation. Class membership
/// is preserved exactly because every move is a conjugation.
pub fn solve_closure(r: &SideLengths, seed: u64, tol: f64) -> Result<HolonomyTuple> {
    let n = r.len();
    let mut rng = seeded_rng(seed);
    let fd_step = 1e-7;

    for _restart in 0..MAX_RESTARTS {
        let g: Vec<GroupElement> = r
            .values()
            .iter()
            .map(|&ri| sample_conjugacy(ri, &mut rng))
            .collect::<Result<_>>()?;
        let mut state = NewtonState { g };
        let mut best = state.residual_norm();
        let mut since_improvement = 0usize;

        for _iter in 0..MAX_ITERS {
            if state.residual_norm() < tol {
                break;
            }
            let Some(rho) = state.residual_vec() else {
                // Product at the antipode: the log-residual chart is
                // blind here; nudge with a small random conjugation.
                let kick: Vec<AlgebraElement> = (0..n)
                    .map(|_| random_unit_axis(&mut rng).scale(0.3))
                    .collect();
                state.g = state.conjugated(&kick);
                continue;
            };

            // Central-difference Jacobian of log(g_1...g_n) in the 3n
            // conjugation directions.
            let mut jac = [[0.0f64; 3]; 3]; // rows of J J^T accumulate below
            let mut jt_rows: Vec<[f64; 3]> = Vec::with_capacity(3 * n);
            for slot in 0..n {
                for e in AlgebraElement::basis() {
                    let mut moves = vec![AlgebraElement::ZERO; n];
                    moves[slot] = e.scale(fd_step);
                    let plus = NewtonState {
                        g: state.conjugated(&moves),
                    };
                    moves[slot] = e.scale(-fd_step);
                    let minus = NewtonState {
                        g: state.conjugated(&moves),
                    };
                    let (rp, rm) = match (plus.residual_vec(), minus.residual_vec()) {
                        (Some(a), Some(b)) => (a, b),
                        _ => (rho, rho),
                    };
                    let col = rp.sub(&rm).scale(1.0 / (2.0 * fd_step));
                    jt_rows.push([col.x, col.y, col.z]);
                }
            }
            for row in &jt_rows {
                for a in 0..3 {
                    for b in 0..3 {
                        jac[a][b] += row[a] * row[b];
                    }
                }
            }
            // Minimum-norm Newton step: delta = -J^T (J J^T)^{-1} rho.
            let jjt = Mat3([jac[0], jac[1], jac[2]]);
            let Some(lambda) = jjt.solve(&rho.scale(-1.0), 1e-14) else {
                break; // rank-deficient: restart with fresh samples
            };
            let step: Vec<AlgebraElement> = jt_rows
                .chunks(3)
                .map(|rows| {
                    AlgebraElement::new(
                        rows[0][0] * lambda.x + rows[0][1] * lambda.y + rows[0][2] * lambda.z,
                        rows[1][0] * lambda.x + rows[1][1] * lambda.y + rows[1][2] * lambda.z,
                        rows[2][0] * lambda.x + rows[2][1] * lambda.y + rows[2][2] * lambda.z,
                    )
                })
                .collect();

            // Backtracking line search on the residual norm.
            let mut scale = 1.0;
            let mut accepted = false;
            for _ in 0..25 {
                let scaled: Vec<AlgebraElement> = step.iter().map(|s| s.scale(scale)).collect();
                let candidate = NewtonState {
                    g: state.conjugated(&scaled),
                };
                if candidate.residual_norm() < state.residual_norm() {
                    state = candidate;
                    accepted = true;
                    break;
                }
                scale *= 0.5;
            }
            if !accepted {
                break; // stuck: restart
            }
            let now = state.residual_norm();
            if now < 0.9 * best {
                best = now;
                since_improvement = 0;
            } else {
                since_improvement += 1;
                if since_improvement > 15 {
                    break; // stagnating: restart
                }
            }
        }

        if state.residual_norm() < tol && !is_degenerate_entries(&state.g, DEGENERACY_TOL) {
            return HolonomyTuple::new(state.g, r.clone());
        }
    }
    Err(Error::NoSolution {
        restarts: MAX_RESTARTS,
    })
}

fn is_degenerate_entries(g: &[GroupElement], tol: f64) -> bool {
    let t = HolonomyTuple {
        g: g.to_vec(),
        r: SideLengths {
            r: g.iter().map(side_length).collect(),
        },
    };
    is_degenerate(&t, tol)
}

/// Matrix of `Ad_{L_i} - Ad_{L_{i+1}}` for each slot, where
/// L_i = g_1 ... g_{i-1}: the derivative of the left-trivialized
/// product along the conjugation moves, also the cocycle-closure map.
pub(crate) fn closure_constraint_blocks(t: &HolonomyTuple) -> Vec<Mat3> {
    let n = t.len();
    let mut blocks = Vec::with_capacity(n);
    let mut prefix = GroupElement::IDENTITY;
    for i in 0..n {
        let left = Mat3::from_adjoint(&prefix);
        prefix = prefix.mul(t.entry(i));
        let right = Mat3::from_adjoint(&prefix);
        blocks.push(left.sub(&right));
    }
    blocks
}

/// Orthonormal basis of the reduced tangent space at a closed,
/// non-degenerate tuple: directions tangent to every conjugacy class,
/// annihilated by the closure constraint, and orthogonal to the
/// diagonal-conjugation orbit. Exactly 2n-6 vectors at a regular point.
pub fn reduced_tangent_basis(t: &HolonomyTuple) -> Result<Vec<TangentVector>> {
    let res = closure_residual(t);
    if res >= CLOSED_TOL {
        return Err(Error::NotClosed { residual: res });
    }
    if is_degenerate(t, DEGENERACY_TOL) {
        return Err(Error::DegeneratePoint);
    }
    let n = t.len();

    // Per-slot orthonormal frame {a_i, b_i} of the plane orthogonal to
    // the edge axis u_i; the class tangent at slot i is parameterized
    // by xi_i in that plane (components along u_i act trivially).
    let mut frames = Vec::with_capacity(n);
    for g in t.entries() {
        let u = g.imag().normalized(1e-12).ok_or(Error::DegeneratePoint)?;
        let seed = if u.x.abs() < 0.9 {
            AlgebraElement::new(1.0, 0.0, 0.0)
        } else {
            AlgebraElement::new(0.0, 1.0, 0.0)
        };
        let a = u
            .cross(&seed)
            .normalized(1e-12)
            .ok_or(Error::DegeneratePoint)?;
        let b = u.cross(&a);
        frames.push((a, b));
    }

    let to_xi = |z: &[f64]| -> Vec<AlgebraElement> {
        (0..n)
            .map(|i| {
                let (a, b) = frames[i];
                a.scale(z[2 * i]).add(&b.scale(z[2 * i + 1]))
            })
            .collect()
    };

    // Closure constraint rows: three components of sum_i M_i xi_i.
    let blocks = closure_constraint_blocks(t);
    let mut constraints: Vec<Vec<f64>> = Vec::with_capacity(6);
    for row in 0..3 {
        let mut c = vec![0.0; 2 * n];
        for i in 0..n {
            let (a, b) = frames[i];
            let ma = blocks[i].mul_vec(&a);
            let mb = blocks[i].mul_vec(&b);
            let pick = |v: &AlgebraElement| match row {
                0 => v.x,
                1 => v.y,
                _ => v.z,
            };
            c[2 * i] = pick(&ma);
            c[2 * i + 1] = pick(&mb);
        }
        constraints.push(c);
    }

    // Diagonal-orbit generators, projected into the per-slot frames.
    for e in AlgebraElement::basis() {
        let mut c = vec![0.0; 2 * n];
        for i in 0..n {
            let (a, b) = frames[i];
            c[2 * i] = killing(&e, &a);
            c[2 * i + 1] = killing(&e, &b);
        }
        constraints.push(c);
    }

    let rank = crate::smallmat::orthonormal_rows(&constraints, 1e-8).len();
    if rank < 6 {
        return Err(Error::DegeneratePoint);
    }
    let basis = null_space(&constraints, 2 * n, 1e-8);
    if basis.len() != 2 * n - 6 {
        return Err(Error::DegeneratePoint);
    }
    Ok(basis
        .into_iter()
        .map(|z| TangentVector {
            xi: to_xi(&z),
            anchor: t.clone(),
        })
        .collect())
}

impl TangentVector {
    /// The generated tangent directions v_i = xi_i g_i - g_i xi_i.
    pub fn velocities(&self) -> Vec<AlgebraElement> {
        self.xi
            .iter()
            .zip(self.anchor.entries())
            .map(|(xi, g)| class_tangent(xi, g))
            .collect()
    }

    /// Move the anchor a first-order step `eps` along the tangent,
    /// staying exactly on each conjugacy class: entry i is conjugated
    /// by exp(eps xi_i).
    pub fn flow_step(&self, eps: f64) -> Result<HolonomyTuple> {
        let g = self
            .xi
            .iter()
            .zip(self.anchor.entries())
            .map(|(xi, g)| conjugate(&exp_alg(&xi.scale(eps)), g))
            .collect();
        self.anchor.with_entries(g)
    }
}

/// Re-export of the adjoint for callers that work at tuple level.
pub fn adjoint_action(g: &GroupElement, v: &AlgebraElement) -> AlgebraElement {
    adjoint(g, v)
}

/// Geodesic distance helper re-exported at module level for vertex
/// geometry checks.
pub fn vertex_distance(p: &GroupElement, q: &GroupElement) -> f64 {
    geodesic_distance(p, q)
}

/// Sample a random closed, non-degenerate tuple by drawing n-1 entries
/// at random classes and closing with the inverse of their product;
/// retries until the closing entry has an admissible class and the
/// tuple is non-degenerate. Used by the verification harness.
pub fn random_closed_tuple<R: Rng>(n: usize, rng: &mut R) -> HolonomyTuple {
    assert!(n >= 3);
    loop {
        let mut g: Vec<GroupElement> = Vec::with_capacity(n);
        for _ in 0..n - 1 {
            let r = rng.gen_range(0.4..PI - 0.4);
            g.push(sample_conjugacy(r, rng).expect("radius in range"));
        }
        let last = GroupElement::product(&g).inverse();
        let r_last = side_length(&last);
        if !(0.2..=PI - 0.2).contains(&r_last) {
            continue;
        }
        g.push(last);
        if is_degenerate_entries(&g, 1e-3) {
            continue;
        }
        let t = HolonomyTuple::from_elements(g).expect("classes in range");
        debug_assert!(closure_residual(&t) < 1e-12);
        return t;
    }
}

/// Random tuple with independently sampled entries (generally open).
pub fn random_open_tuple<R: Rng>(n: usize, rng: &mut R) -> HolonomyTuple {
    let g: Vec<GroupElement> = (0..n)
        .map(|_| {
            let r = rng.gen_range(0.3..PI - 0.3);
            sample_conjugacy(r, rng).expect("radius in range")
        })
        .collect();
    HolonomyTuple::from_elements(g).expect("classes in range")
}
