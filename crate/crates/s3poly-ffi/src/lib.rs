//! C ABI for the polygon moduli library.
//!
//! Holonomy tuples are exposed as opaque handles created by
//! [`s3poly_solve`] or [`s3poly_tuple_from_quaternions`] and released
//! with [`s3poly_tuple_free`]. Every fallible call returns an
//! [`S3PolyStatus`]; results are written through out-pointers.
//! Quaternions cross the boundary as flat `[w, x, y, z]` doubles.
//!
//! The header `include/s3poly.h` is generated by cbindgen at build
//! time.

use std::ffi::{c_char, CStr};

use s3poly::bending::flow_ell;
use s3poly::braid::{apply_word, parse_word};
use s3poly::moduli::{
    closure_residual, diagonal_length, side_length, solve_closure, to_polygon, HolonomyTuple,
    SideLengths,
};
use s3poly::su2::GroupElement;
use s3poly::verify::{run_suite, Suite};
use s3poly::Error;

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum S3PolyStatus {
    /// Success.
    Ok = 0,
    /// Invalid configuration: side count, radius range, or argument.
    Config = 1,
    /// The closure solver exhausted its restarts.
    NoSolution = 2,
    /// Degenerate input: diagonal at 0 or pi, central element, or a
    /// tuple on a geodesic.
    Degenerate = 3,
    /// A verification suite reported failures.
    VerifyFailed = 4,
    /// Index out of range.
    BadIndex = 5,
    /// A required pointer was null.
    NullPointer = 6,
    /// Text input failed to parse (braid word, suite name, UTF-8).
    Parse = 7,
}

/// Opaque holonomy tuple handle.
pub struct S3PolyTuple {
    inner: HolonomyTuple,
}

fn status_of(err: &Error) -> S3PolyStatus {
    match err {
        Error::NoSolution { .. } => S3PolyStatus::NoSolution,
        Error::DegenerateDiagonal { .. }
        | Error::DegeneratePoint
        | Error::DegenerateElement { .. }
        | Error::AntipodalLog { .. } => S3PolyStatus::Degenerate,
        Error::BadIndex { .. } | Error::BadIndices { .. } => S3PolyStatus::BadIndex,
        Error::ParseWord { .. } => S3PolyStatus::Parse,
        _ => S3PolyStatus::Config,
    }
}

fn emit(out: *mut *mut S3PolyTuple, tuple: HolonomyTuple) -> S3PolyStatus {
    unsafe {
        *out = Box::into_raw(Box::new(S3PolyTuple { inner: tuple }));
    }
    S3PolyStatus::Ok
}

/// Solve for a closed tuple with the given side lengths (radians,
/// each in (0, pi), n >= 3). On success writes a new handle to `out`.
///
/// # Safety
/// `sides` must point to `n` doubles; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn s3poly_solve(
    sides: *const f64,
    n: usize,
    seed: u64,
    tolerance: f64,
    out: *mut *mut S3PolyTuple,
) -> S3PolyStatus {
    if sides.is_null() || out.is_null() {
        return S3PolyStatus::NullPointer;
    }
    let radii = unsafe { std::slice::from_raw_parts(sides, n) }.to_vec();
    let lengths = match SideLengths::new(radii) {
        Ok(l) => l,
        Err(e) => return status_of(&e),
    };
    let tol = if tolerance > 0.0 { tolerance } else { 1e-10 };
    match solve_closure(&lengths, seed, tol) {
        Ok(t) => emit(out, t),
        Err(e) => status_of(&e),
    }
}

/// Build a tuple from `n` quaternions laid out as `[w x y z] * n`.
/// Entries are renormalized; classes are read off the entries.
///
/// # Safety
/// `wxyz` must point to `4 n` doubles; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn s3poly_tuple_from_quaternions(
    wxyz: *const f64,
    n: usize,
    out: *mut *mut S3PolyTuple,
) -> S3PolyStatus {
    if wxyz.is_null() || out.is_null() {
        return S3PolyStatus::NullPointer;
    }
    let raw = unsafe { std::slice::from_raw_parts(wxyz, 4 * n) };
    let entries: Vec<GroupElement> = raw
        .chunks_exact(4)
        .map(|q| GroupElement::new(q[0], q[1], q[2], q[3]))
        .collect();
    match HolonomyTuple::from_elements(entries) {
        Ok(t) => emit(out, t),
        Err(e) => status_of(&e),
    }
}

/// Release a handle. Null is ignored.
///
/// # Safety
/// `tuple` must be a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn s3poly_tuple_free(tuple: *mut S3PolyTuple) {
    if !tuple.is_null() {
        drop(unsafe { Box::from_raw(tuple) });
    }
}

/// Number of edges.
///
/// # Safety
/// `tuple` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn s3poly_tuple_len(tuple: *const S3PolyTuple) -> usize {
    if tuple.is_null() {
        return 0;
    }
    unsafe { &*tuple }.inner.len()
}

/// Copy the entries out as `[w x y z] * n`.
///
/// # Safety
/// `out` must have room for `4 n` doubles.
#[no_mangle]
pub unsafe extern "C" fn s3poly_tuple_quaternions(
    tuple: *const S3PolyTuple,
    out: *mut f64,
) -> S3PolyStatus {
    if tuple.is_null() || out.is_null() {
        return S3PolyStatus::NullPointer;
    }
    let t = &unsafe { &*tuple }.inner;
    let dst = unsafe { std::slice::from_raw_parts_mut(out, 4 * t.len()) };
    for (i, g) in t.entries().iter().enumerate() {
        dst[4 * i] = g.w;
        dst[4 * i + 1] = g.x;
        dst[4 * i + 2] = g.y;
        dst[4 * i + 3] = g.z;
    }
    S3PolyStatus::Ok
}

/// Copy the side lengths out (n doubles).
///
/// # Safety
/// `out` must have room for `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn s3poly_tuple_side_lengths(
    tuple: *const S3PolyTuple,
    out: *mut f64,
) -> S3PolyStatus {
    if tuple.is_null() || out.is_null() {
        return S3PolyStatus::NullPointer;
    }
    let t = &unsafe { &*tuple }.inner;
    let dst = unsafe { std::slice::from_raw_parts_mut(out, t.len()) };
    for (d, g) in dst.iter_mut().zip(t.entries()) {
        *d = side_length(g);
    }
    S3PolyStatus::Ok
}

/// Distance of the full holonomy product from the identity.
///
/// # Safety
/// `tuple` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn s3poly_tuple_closure_residual(tuple: *const S3PolyTuple) -> f64 {
    if tuple.is_null() {
        return f64::NAN;
    }
    closure_residual(&unsafe { &*tuple }.inner)
}

/// Copy the polygon vertices (based at the identity) out as
/// `[w x y z] * (n + 1)`.
///
/// # Safety
/// `out` must have room for `4 (n + 1)` doubles.
#[no_mangle]
pub unsafe extern "C" fn s3poly_tuple_vertices(
    tuple: *const S3PolyTuple,
    out: *mut f64,
) -> S3PolyStatus {
    if tuple.is_null() || out.is_null() {
        return S3PolyStatus::NullPointer;
    }
    let t = &unsafe { &*tuple }.inner;
    let polygon = to_polygon(t, &GroupElement::IDENTITY);
    let dst = unsafe { std::slice::from_raw_parts_mut(out, 4 * (t.len() + 1)) };
    for (i, v) in polygon.vertices.iter().enumerate() {
        dst[4 * i] = v.w;
        dst[4 * i + 1] = v.x;
        dst[4 * i + 2] = v.y;
        dst[4 * i + 3] = v.z;
    }
    S3PolyStatus::Ok
}

/// Geodesic length of the diagonal between 1-based vertices i < j.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn s3poly_diagonal_length(
    tuple: *const S3PolyTuple,
    i: usize,
    j: usize,
    out: *mut f64,
) -> S3PolyStatus {
    if tuple.is_null() || out.is_null() {
        return S3PolyStatus::NullPointer;
    }
    match diagonal_length(&unsafe { &*tuple }.inner, i, j) {
        Ok(len) => {
            unsafe { *out = len };
            S3PolyStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Bend through `angle` radians about the fan diagonal with prefix
/// index `j` (unit angular speed). Writes a new handle.
///
/// # Safety
/// `out` must be a valid pointer; `tuple` a live handle.
#[no_mangle]
pub unsafe extern "C" fn s3poly_bend(
    tuple: *const S3PolyTuple,
    j: usize,
    angle: f64,
    out: *mut *mut S3PolyTuple,
) -> S3PolyStatus {
    if tuple.is_null() || out.is_null() {
        return S3PolyStatus::NullPointer;
    }
    match flow_ell(&unsafe { &*tuple }.inner, j, angle) {
        Ok(t) => emit(out, t),
        Err(e) => status_of(&e),
    }
}

/// Apply a braid word such as `"R1 R'2 A13"`. Writes a new handle.
///
/// # Safety
/// `word` must be a NUL-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn s3poly_braid(
    tuple: *const S3PolyTuple,
    word: *const c_char,
    out: *mut *mut S3PolyTuple,
) -> S3PolyStatus {
    if tuple.is_null() || word.is_null() || out.is_null() {
        return S3PolyStatus::NullPointer;
    }
    let text = match unsafe { CStr::from_ptr(word) }.to_str() {
        Ok(s) => s,
        Err(_) => return S3PolyStatus::Parse,
    };
    let parsed = match parse_word(text) {
        Ok(w) => w,
        Err(e) => return status_of(&e),
    };
    match apply_word(&unsafe { &*tuple }.inner, &parsed) {
        Ok(t) => emit(out, t),
        Err(e) => status_of(&e),
    }
}

/// Run a verification suite ("algebra", "bracket", "flows", "braid",
/// "forms", or "all") with the given seed. Writes the number of
/// executed checks and failures through the out-pointers when they are
/// non-null. Returns `VerifyFailed` when any check fails.
///
/// # Safety
/// `suite` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn s3poly_verify(
    suite: *const c_char,
    seed: u64,
    checks_out: *mut usize,
    failures_out: *mut usize,
) -> S3PolyStatus {
    if suite.is_null() {
        return S3PolyStatus::NullPointer;
    }
    let text = match unsafe { CStr::from_ptr(suite) }.to_str() {
        Ok(s) => s,
        Err(_) => return S3PolyStatus::Parse,
    };
    let parsed: Suite = match text.parse() {
        Ok(s) => s,
        Err(_) => return S3PolyStatus::Parse,
    };
    let report = run_suite(parsed, seed, None);
    let failures = report.checks.iter().filter(|c| !c.passed).count();
    if !checks_out.is_null() {
        unsafe { *checks_out = report.checks.len() };
    }
    if !failures_out.is_null() {
        unsafe { *failures_out = failures };
    }
    if failures == 0 {
        S3PolyStatus::Ok
    } else {
        S3PolyStatus::VerifyFailed
    }
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn s3poly_status_message(status: S3PolyStatus) -> *const c_char {
    let text: &'static [u8] = match status {
        S3PolyStatus::Ok => b"ok\0",
        S3PolyStatus::Config => b"invalid configuration\0",
        S3PolyStatus::NoSolution => b"no closed tuple found\0",
        S3PolyStatus::Degenerate => b"degenerate input\0",
        S3PolyStatus::VerifyFailed => b"verification checks failed\0",
        S3PolyStatus::BadIndex => b"index out of range\0",
        S3PolyStatus::NullPointer => b"null pointer\0",
        S3PolyStatus::Parse => b"parse error\0",
    };
    text.as_ptr() as *const c_char
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};
    use std::ffi::CString;
    use std::ptr;

    fn solve_square() -> *mut S3PolyTuple {
        let sides = [PI / 2.0; 4];
        let mut handle: *mut S3PolyTuple = ptr::null_mut();
        let status = unsafe { s3poly_solve(sides.as_ptr(), 4, 7, 1e-10, &mut handle) };
        assert_eq!(status, S3PolyStatus::Ok);
        assert!(!handle.is_null());
        handle
    }

    #[test]
    fn solve_query_free_lifecycle() {
        let handle = solve_square();
        unsafe {
            assert_eq!(s3poly_tuple_len(handle), 4);
            assert!(s3poly_tuple_closure_residual(handle) < 1e-10);

            let mut quats = [0.0f64; 16];
            assert_eq!(
                s3poly_tuple_quaternions(handle, quats.as_mut_ptr()),
                S3PolyStatus::Ok
            );
            let mut sides = [0.0f64; 4];
            assert_eq!(
                s3poly_tuple_side_lengths(handle, sides.as_mut_ptr()),
                S3PolyStatus::Ok
            );
            for s in sides {
                assert!((s - PI / 2.0).abs() < 1e-9);
            }

            let mut vertices = [0.0f64; 20];
            assert_eq!(
                s3poly_tuple_vertices(handle, vertices.as_mut_ptr()),
                S3PolyStatus::Ok
            );
            // Closed polygon: first and last vertices coincide.
            for c in 0..4 {
                assert!((vertices[c] - vertices[16 + c]).abs() < 1e-9);
            }

            // Round-trip through the raw-quaternion constructor.
            let mut copy: *mut S3PolyTuple = ptr::null_mut();
            assert_eq!(
                s3poly_tuple_from_quaternions(quats.as_ptr(), 4, &mut copy),
                S3PolyStatus::Ok
            );
            assert!(s3poly_tuple_closure_residual(copy) < 1e-9);
            s3poly_tuple_free(copy);
            s3poly_tuple_free(handle);
        }
    }

    #[test]
    fn error_statuses() {
        unsafe {
            let mut handle: *mut S3PolyTuple = ptr::null_mut();
            // Null pointers.
            assert_eq!(
                s3poly_solve(ptr::null(), 3, 0, 1e-10, &mut handle),
                S3PolyStatus::NullPointer
            );
            // Radius out of range.
            let bad = [0.5, 0.5, 4.0];
            assert_eq!(
                s3poly_solve(bad.as_ptr(), 3, 0, 1e-10, &mut handle),
                S3PolyStatus::Config
            );
            // Infeasible triple.
            let infeasible = [0.1, 0.1, 3.0];
            assert_eq!(
                s3poly_solve(infeasible.as_ptr(), 3, 0, 1e-10, &mut handle),
                S3PolyStatus::NoSolution
            );
            // Too few sides.
            let two = [1.0, 1.0];
            assert_eq!(
                s3poly_solve(two.as_ptr(), 2, 0, 1e-10, &mut handle),
                S3PolyStatus::Config
            );
        }
    }

    #[test]
    fn bend_full_turn_returns() {
        let handle = solve_square();
        unsafe {
            let mut bent: *mut S3PolyTuple = ptr::null_mut();
            assert_eq!(s3poly_bend(handle, 2, TAU, &mut bent), S3PolyStatus::Ok);
            let mut a = [0.0f64; 16];
            let mut b = [0.0f64; 16];
            s3poly_tuple_quaternions(handle, a.as_mut_ptr());
            s3poly_tuple_quaternions(bent, b.as_mut_ptr());
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-7);
            }
            // Degenerate diagonal: j = n on a closed tuple.
            let mut bad: *mut S3PolyTuple = ptr::null_mut();
            assert_eq!(
                s3poly_bend(handle, 4, 1.0, &mut bad),
                S3PolyStatus::Degenerate
            );
            // Out-of-range prefix.
            assert_eq!(
                s3poly_bend(handle, 9, 1.0, &mut bad),
                S3PolyStatus::BadIndex
            );
            s3poly_tuple_free(bent);
            s3poly_tuple_free(handle);
        }
    }

    #[test]
    fn braid_identity_word() {
        let handle = solve_square();
        unsafe {
            let word = CString::new("R1 R'1").unwrap();
            let mut moved: *mut S3PolyTuple = ptr::null_mut();
            assert_eq!(
                s3poly_braid(handle, word.as_ptr(), &mut moved),
                S3PolyStatus::Ok
            );
            let mut a = [0.0f64; 16];
            let mut b = [0.0f64; 16];
            s3poly_tuple_quaternions(handle, a.as_mut_ptr());
            s3poly_tuple_quaternions(moved, b.as_mut_ptr());
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-12);
            }
            s3poly_tuple_free(moved);

            let bad = CString::new("Q9").unwrap();
            let mut out: *mut S3PolyTuple = ptr::null_mut();
            assert_eq!(
                s3poly_braid(handle, bad.as_ptr(), &mut out),
                S3PolyStatus::Parse
            );
            s3poly_tuple_free(handle);
        }
    }

    #[test]
    fn verify_through_the_abi() {
        unsafe {
            let suite = CString::new("algebra").unwrap();
            let mut checks = 0usize;
            let mut failures = 0usize;
            assert_eq!(
                s3poly_verify(suite.as_ptr(), 1, &mut checks, &mut failures),
                S3PolyStatus::Ok
            );
            assert!(checks > 0);
            assert_eq!(failures, 0);

            let bad = CString::new("bogus").unwrap();
            assert_eq!(
                s3poly_verify(bad.as_ptr(), 1, ptr::null_mut(), ptr::null_mut()),
                S3PolyStatus::Parse
            );
        }
    }

    #[test]
    fn status_messages_are_static() {
        for status in [
            S3PolyStatus::Ok,
            S3PolyStatus::NoSolution,
            S3PolyStatus::VerifyFailed,
        ] {
            let msg = s3poly_status_message(status);
            assert!(!msg.is_null());
            let text = unsafe { CStr::from_ptr(msg) }.to_str().unwrap();
            assert!(!text.is_empty());
        }
    }
}
