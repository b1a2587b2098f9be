//! The pure braid group acting on holonomy tuples.
//!
//! The elementary move R swaps neighbouring entries while conjugating,
//! R(g_1, g_2) = (Ad_{g_1} g_2, g_1); its inverse R' is
//! R'(g_1, g_2) = (g_2, Ad_{g_2^{-1}} g_1). Both preserve the pairwise
//! product, so closure is untouched while the class labels transpose.
//! The pure braid generators
//!
//!   A_ij = R_{j-1} o ... o R_{i+1} o R_i^2 o R'_{i+1} o ... o R'_{j-1}
//!
//! return every class to its slot and act as symplectomorphisms of the
//! moduli space.
//!
//! A_ij is also the time-t* flow of the pair Hamiltonian
//! f_ij = tr(g_i g_j): with F_ij = (g_i g_j) - (g_i g_j)^{-1} and
//! theta = arccos(f_ij / 2), the reconstruction identity
//! exp(theta / sqrt(4 - f_ij^2) * F_ij) = g_i g_j holds exactly, and the
//! piecewise flow below lands on A_ij at t* = theta / sqrt(4 - f_ij^2),
//! pointwise on the tuple space (not merely modulo conjugation).

use crate::moduli::{side_length, HolonomyTuple};
use crate::su2::{conjugate, exp_alg, GroupElement};
use crate::{Error, Result};

/// Pair traces count as degenerate when |tr(g_i g_j)| reaches this.
const DEGENERATE_TRACE: f64 = 2.0 - 1e-9;

/// One letter of a braid word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BraidLetter {
    /// Elementary move at position i (1-based, 1..=n-1).
    R(usize),
    /// Inverse elementary move at position i.
    RPrime(usize),
    /// Pure braid generator A_ij (1-based, i < j <= n).
    A(usize, usize),
}

/// A braid word, applied left to right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidWord {
    pub letters: Vec<BraidLetter>,
}

fn check_position(t: &HolonomyTuple, i: usize) -> Result<()> {
    if i < 1 || i >= t.len() {
        return Err(Error::BadIndex {
            index: i,
            min: 1,
            max: t.len() - 1,
        });
    }
    Ok(())
}

fn check_pair(t: &HolonomyTuple, i: usize, j: usize) -> Result<()> {
    if i < 1 || j <= i || j > t.len() {
        return Err(Error::BadIndices { i, j, n: t.len() });
    }
    Ok(())
}

/// The move R at position i: entries (i, i+1) become
/// (Ad_{g_i} g_{i+1}, g_i). Pairwise product and closure are exact
/// invariants; the class labels transpose.
pub fn r_move(t: &HolonomyTuple, i: usize) -> Result<HolonomyTuple> {
    check_position(t, i)?;
    let mut g = t.entries().to_vec();
    let (a, b) = (g[i - 1], g[i]);
    g[i - 1] = conjugate(&a, &b);
    g[i] = a;
    t.with_entries_relabelled(g)
}

/// The inverse move R' at position i: entries (i, i+1) become
/// (g_{i+1}, Ad_{g_{i+1}^{-1}} g_i). R' o R and R o R' are the
/// identity exactly.
pub fn r_prime_move(t: &HolonomyTuple, i: usize) -> Result<HolonomyTuple> {
    check_position(t, i)?;
    let mut g = t.entries().to_vec();
    let (a, b) = (g[i - 1], g[i]);
    g[i - 1] = b;
    g[i] = conjugate(&b.inverse(), &a);
    t.with_entries_relabelled(g)
}

/// The pure braid generator A_ij, as the move composition
/// R_{j-1} o ... o R_{i+1} o R_i^2 o R'_{i+1} o ... o R'_{j-1}
/// (rightmost applied first). Side lengths return to their slots.
pub fn a_generator(t: &HolonomyTuple, i: usize, j: usize) -> Result<HolonomyTuple> {
    check_pair(t, i, j)?;
    let mut out = t.clone();
    for pos in ((i + 1)..j).rev() {
        out = r_prime_move(&out, pos)?;
    }
    out = r_move(&out, i)?;
    out = r_move(&out, i)?;
    for pos in (i + 1)..j {
        out = r_move(&out, pos)?;
    }
    Ok(out)
}

/// The braid Hamiltonian value h_ij = 1/2 arccos(tr(g_i g_j)/2)^2,
/// in [0, pi^2/2].
pub fn h_val(t: &HolonomyTuple, i: usize, j: usize) -> Result<f64> {
    check_pair(t, i, j)?;
    let theta = side_length(&t.entry(i - 1).mul(t.entry(j - 1)));
    Ok(0.5 * theta * theta)
}

/// Piecewise flow of the pair Hamiltonian f_ij = tr(g_i g_j): with
/// E = exp(time F_ij), entries i and j are conjugated by E, entries
/// strictly between them by E g_j E^{-1} g_j^{-1}, and all others are
/// fixed. The full product and f_ij itself are exact invariants.
pub fn braid_flow(t: &HolonomyTuple, i: usize, j: usize, time: f64) -> Result<HolonomyTuple> {
    check_pair(t, i, j)?;
    let gi = *t.entry(i - 1);
    let gj = *t.entry(j - 1);
    let pair = gi.mul(&gj);
    let axis = pair.imag().scale(2.0);
    let outer = exp_alg(&axis.scale(time));
    let middle = outer.mul(&gj).mul(&outer.inverse()).mul(&gj.inverse());
    let g = t
        .entries()
        .iter()
        .enumerate()
        .map(|(k0, gk)| {
            let k = k0 + 1;
            if k == i || k == j {
                conjugate(&outer, gk)
            } else if k > i && k < j {
                conjugate(&middle, gk)
            } else {
                *gk
            }
        })
        .collect();
    t.with_entries(g)
}

/// Left side of the reconstruction identity
/// exp(arccos(tr(g)/2) / sqrt(4 - tr(g)^2) * (g - g^{-1})) = g,
/// evaluated for the caller to compare. Fails at central elements
/// where the axis degenerates.
pub fn exp_reconstruct(g: &GroupElement) -> Result<GroupElement> {
    let tr = g.trace();
    if tr.abs() >= DEGENERATE_TRACE {
        return Err(Error::DegenerateElement {
            trace_abs: tr.abs(),
        });
    }
    let theta = side_length(g);
    let coeff = theta / (4.0 - tr * tr).sqrt();
    Ok(exp_alg(&g.imag().scale(2.0 * coeff)))
}

/// Flow time at which the f_ij flow realizes A_ij:
/// t* = arccos(tr(g_i g_j)/2) / sqrt(4 - tr(g_i g_j)^2).
pub fn braid_time(t: &HolonomyTuple, i: usize, j: usize) -> Result<f64> {
    check_pair(t, i, j)?;
    let pair = t.entry(i - 1).mul(t.entry(j - 1));
    let tr = pair.trace();
    if tr.abs() >= DEGENERATE_TRACE {
        return Err(Error::DegenerateElement {
            trace_abs: tr.abs(),
        });
    }
    Ok(side_length(&pair) / (4.0 - tr * tr).sqrt())
}

/// The braid flow reparameterized so that unit time lands on A_ij:
/// flow at time s * t*. Integer s gives powers of the generator.
pub fn normalized_braid_flow(
    t: &HolonomyTuple,
    i: usize,
    j: usize,
    s: f64,
) -> Result<HolonomyTuple> {
    let tstar = braid_time(t, i, j)?;
    braid_flow(t, i, j, s * tstar)
}

/// Parse a braid word like `"R1 R'2 A13"`. Tokens are separated by
/// whitespace; `R<i>` and `R'<i>` take a 1-based position, `A<i><j>`
/// takes two single-digit indices (or `A<i>,<j>` for larger ones).
pub fn parse_word(text: &str) -> Result<BraidWord> {
    let mut letters = Vec::new();
    let mut offset = 0usize;
    for token in text.split_whitespace() {
        let tok_offset = offset + text[offset..].find(token).unwrap_or(0);
        offset = tok_offset + token.len();
        let err = || Error::ParseWord {
            token: token.to_string(),
            offset: tok_offset,
        };
        let letter = if let Some(rest) = token.strip_prefix("R'") {
            BraidLetter::RPrime(rest.parse().map_err(|_| err())?)
        } else if let Some(rest) = token.strip_prefix('R') {
            BraidLetter::R(rest.parse().map_err(|_| err())?)
        } else if let Some(rest) = token.strip_prefix('A') {
            if let Some((a, b)) = rest.split_once(',') {
                BraidLetter::A(a.parse().map_err(|_| err())?, b.parse().map_err(|_| err())?)
            } else if rest.len() == 2 && rest.chars().all(|c| c.is_ascii_digit()) {
                let digits: Vec<usize> = rest
                    .chars()
                    .map(|c| c.to_digit(10).unwrap() as usize)
                    .collect();
                BraidLetter::A(digits[0], digits[1])
            } else {
                return Err(err());
            }
        } else {
            return Err(err());
        };
        letters.push(letter);
    }
    Ok(BraidWord { letters })
}

/// Apply a braid word left to right.
pub fn apply_word(t: &HolonomyTuple, word: &BraidWord) -> Result<HolonomyTuple> {
    let mut out = t.clone();
    for letter in &word.letters {
        out = match *letter {
            BraidLetter::R(i) => r_move(&out, i)?,
            BraidLetter::RPrime(i) => r_prime_move(&out, i)?,
            BraidLetter::A(i, j) => a_generator(&out, i, j)?,
        };
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moduli::{closure_residual, random_closed_tuple, seeded_rng};
    use crate::quasipoisson::{bracket, InvariantFunction};
    use crate::su2::AlgebraElement;
    use rand::Rng;
    use std::f64::consts::PI;

    #[test]
    fn r_move_examples() {
        // (i, j) -> (i j i^{-1}, i) = (-j, i)
        let t = HolonomyTuple::from_elements(vec![
            GroupElement::i(),
            GroupElement::j(),
            GroupElement::k(),
        ])
        .unwrap();
        let moved = r_move(&t, 1).unwrap();
        assert!(moved.entry(0).dist(&GroupElement::j().neg()) < 1e-15);
        assert!(moved.entry(1).dist(&GroupElement::i()) < 1e-15);
        // Pairwise product unchanged.
        let before = t.partial_product(0, 2);
        let after = moved.partial_product(0, 2);
        assert!(before.dist(&after) < 1e-14);
        // A commuting pair is fixed.
        let t = HolonomyTuple::from_elements(vec![
            GroupElement::i(),
            GroupElement::i(),
            GroupElement::k(),
        ])
        .unwrap();
        assert!(r_move(&t, 1).unwrap().distance(&t) < 1e-15);
    }

    #[test]
    fn r_prime_examples() {
        // (i, j) -> (j, j^{-1} i j) = (j, -i)
        let t = HolonomyTuple::from_elements(vec![
            GroupElement::i(),
            GroupElement::j(),
            GroupElement::k(),
        ])
        .unwrap();
        let moved = r_prime_move(&t, 1).unwrap();
        assert!(moved.entry(0).dist(&GroupElement::j()) < 1e-15);
        assert!(moved.entry(1).dist(&GroupElement::i().neg()) < 1e-15);
    }

    fn arb_tuple(n: usize) -> impl proptest::strategy::Strategy<Value = HolonomyTuple> {
        use proptest::prelude::*;
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0), n)
            .prop_filter_map("entries must be non-central", |coords| {
                let entries: Vec<GroupElement> = coords
                    .iter()
                    .map(|&(w, x, y, z)| GroupElement::new(w, x, y, z))
                    .collect();
                if entries.iter().any(|g| g.trace().abs() > 2.0 - 1e-3) {
                    return None;
                }
                HolonomyTuple::from_elements(entries).ok()
            })
    }

    proptest::proptest! {
        #[test]
        fn moves_are_mutually_inverse(t in arb_tuple(5), i in 1usize..5) {
            let round = r_prime_move(&r_move(&t, i).unwrap(), i).unwrap();
            proptest::prop_assert!(round.distance(&t) < 1e-14);
            let round = r_move(&r_prime_move(&t, i).unwrap(), i).unwrap();
            proptest::prop_assert!(round.distance(&t) < 1e-14);
        }

        #[test]
        fn braid_relation(t in arb_tuple(5), i in 1usize..4) {
            let lhs = r_move(&r_move(&r_move(&t, i).unwrap(), i + 1).unwrap(), i).unwrap();
            let rhs = r_move(&r_move(&r_move(&t, i + 1).unwrap(), i).unwrap(), i + 1).unwrap();
            proptest::prop_assert!(lhs.distance(&rhs) < 1e-12);
        }

        #[test]
        fn moves_preserve_pairwise_product(t in arb_tuple(4), i in 1usize..4) {
            let before = t.partial_product(i - 1, i + 1);
            let moved = r_move(&t, i).unwrap();
            let after = moved.partial_product(i - 1, i + 1);
            proptest::prop_assert!(before.dist(&after) < 1e-13);
        }
    }

    #[test]
    fn a_generator_restores_classes() {
        let mut rng = seeded_rng(33);
        for _ in 0..20 {
            let t = random_closed_tuple(5, &mut rng);
            let (i, j) = (1usize, rng.gen_range(2..=5));
            let out = a_generator(&t, i, j).unwrap();
            for (a, b) in t
                .side_lengths()
                .values()
                .iter()
                .zip(out.side_lengths().values())
            {
                assert!((a - b).abs() < 1e-10);
            }
            assert!(closure_residual(&out) < 1e-10);
        }
        // Same-axis entries commute: A acts trivially.
        let e = |t: f64| exp_alg(&AlgebraElement::new(t, 0.0, 0.0));
        let t =
            HolonomyTuple::from_elements(vec![e(0.7), e(1.1), e(0.9), e(2.0 * PI - 2.7)]).unwrap();
        let out = a_generator(&t, 1, 3).unwrap();
        assert!(out.distance(&t) < 1e-12);
    }

    #[test]
    fn h_val_examples() {
        // g_i g_j = k: theta = pi/2, h = pi^2/8.
        let t = HolonomyTuple::from_elements(vec![
            GroupElement::i(),
            GroupElement::j(),
            GroupElement::i(),
            GroupElement::j().neg(),
        ])
        .unwrap();
        assert!((h_val(&t, 1, 2).unwrap() - PI * PI / 8.0).abs() < 1e-12);
        // g_1 g_3 = i i = -1: theta = pi, h = pi^2/2.
        assert!((h_val(&t, 1, 3).unwrap() - PI * PI / 2.0).abs() < 1e-12);
        // g_2 g_4 = j (-j) = 1: theta = 0, h = 0.
        assert!(h_val(&t, 2, 4).unwrap().abs() < 1e-12);
        assert!(h_val(&t, 2, 2).is_err());
    }

    #[test]
    fn exp_reconstruction_identity() {
        let g = GroupElement::k();
        // arccos(0)/sqrt(4) * 2k = (pi/4) * 2k; exp((pi/2) k) = k.
        assert!(exp_reconstruct(&g).unwrap().dist(&g) < 1e-15);
        let mut rng = seeded_rng(34);
        for _ in 0..1000 {
            let g = GroupElement::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            if g.trace().abs() >= 2.0 - 1e-6 {
                continue;
            }
            let back = exp_reconstruct(&g).unwrap();
            assert!(back.dist(&g) < 1e-12, "{g:?}");
        }
        assert!(matches!(
            exp_reconstruct(&GroupElement::IDENTITY),
            Err(Error::DegenerateElement { .. })
        ));
    }

    #[test]
    fn braid_flow_basics() {
        let mut rng = seeded_rng(35);
        let t = random_closed_tuple(6, &mut rng);
        assert!(braid_flow(&t, 2, 5, 0.0).unwrap().distance(&t) < 1e-15);
        // f_ij and the full product are conserved at any time.
        let moved = braid_flow(&t, 2, 5, 0.83).unwrap();
        let f_before = t.entry(1).mul(t.entry(4)).trace();
        let f_after = moved.entry(1).mul(moved.entry(4)).trace();
        assert!((f_before - f_after).abs() < 1e-10);
        assert!(closure_residual(&moved) < 1e-9);
        // Adjacent pair: middle branch empty, plain conjugation.
        let adj = braid_flow(&t, 3, 4, 0.5).unwrap();
        for k in [0usize, 1, 4, 5] {
            assert!(adj.entry(k).dist(t.entry(k)) < 1e-14);
        }
    }

    #[test]
    fn time_one_flow_is_the_generator() {
        let mut rng = seeded_rng(36);
        for _ in 0..25 {
            let n = rng.gen_range(4..=7);
            let t = random_closed_tuple(n, &mut rng);
            let i = rng.gen_range(1..n);
            let j = rng.gen_range(i + 1..=n);
            let via_flow = match normalized_braid_flow(&t, i, j, 1.0) {
                Ok(x) => x,
                Err(Error::DegenerateElement { .. }) => continue,
                Err(e) => panic!("{e}"),
            };
            let via_moves = a_generator(&t, i, j).unwrap();
            assert!(
                via_flow.distance(&via_moves) < 1e-9,
                "n={n} i={i} j={j}: {}",
                via_flow.distance(&via_moves)
            );
        }
    }

    #[test]
    fn flow_parameter_is_a_one_parameter_group() {
        let mut rng = seeded_rng(37);
        let t = random_closed_tuple(5, &mut rng);
        let (i, j) = (1usize, 4usize);
        let twice = normalized_braid_flow(&t, i, j, 2.0).unwrap();
        let squared = a_generator(&a_generator(&t, i, j).unwrap(), i, j).unwrap();
        assert!(twice.distance(&squared) < 1e-8);
        let zero = normalized_braid_flow(&t, i, j, 0.0).unwrap();
        assert!(zero.distance(&t) < 1e-15);
    }

    #[test]
    fn disjoint_generators_commute() {
        let mut rng = seeded_rng(38);
        for _ in 0..10 {
            let t = random_closed_tuple(6, &mut rng);
            let ab = a_generator(&a_generator(&t, 1, 2).unwrap(), 4, 6).unwrap();
            let ba = a_generator(&a_generator(&t, 4, 6).unwrap(), 1, 2).unwrap();
            assert!(ab.distance(&ba) < 1e-9);
        }
    }

    #[test]
    fn generator_preserves_brackets() {
        // Bracket-level symplectomorphism witness:
        // {phi o A, psi o A}(t) = {phi, psi}(A t).
        let mut rng = seeded_rng(39);
        let t = random_closed_tuple(5, &mut rng);
        let (i, j) = (2usize, 4usize);
        let phi = InvariantFunction::pair_trace(1, 3);
        let psi = InvariantFunction::pair_trace(2, 5);
        let phi_pull = InvariantFunction::from_fn("phi∘A", move |t| {
            InvariantFunction::pair_trace(1, 3).eval(&a_generator(t, i, j).unwrap())
        });
        let psi_pull = InvariantFunction::from_fn("psi∘A", move |t| {
            InvariantFunction::pair_trace(2, 5).eval(&a_generator(t, i, j).unwrap())
        });
        let moved = a_generator(&t, i, j).unwrap();
        let lhs = bracket(&phi_pull, &psi_pull, &t).unwrap();
        let rhs = bracket(&phi, &psi, &moved).unwrap();
        assert!((lhs - rhs).abs() < 1e-6, "{lhs} vs {rhs}");
    }

    #[test]
    fn word_parsing() {
        let w = parse_word("R1 R'2 A13 A2,14").unwrap();
        assert_eq!(
            w.letters,
            vec![
                BraidLetter::R(1),
                BraidLetter::RPrime(2),
                BraidLetter::A(1, 3),
                BraidLetter::A(2, 14),
            ]
        );
        let err = parse_word("R1 Q9").unwrap_err();
        match err {
            Error::ParseWord { token, offset } => {
                assert_eq!(token, "Q9");
                assert_eq!(offset, 3);
            }
            other => panic!("unexpected {other}"),
        }
        assert!(parse_word("").unwrap().letters.is_empty());
    }

    #[test]
    fn word_application_round_trip() {
        let mut rng = seeded_rng(40);
        let t = random_closed_tuple(4, &mut rng);
        let w = parse_word("R1 R'1").unwrap();
        assert!(apply_word(&t, &w).unwrap().distance(&t) < 1e-12);
        let w = parse_word("A13").unwrap();
        let out = apply_word(&t, &w).unwrap();
        for (a, b) in t
            .side_lengths()
            .values()
            .iter()
            .zip(out.side_lengths().values())
        {
            assert!((a - b).abs() < 1e-10);
        }
    }
}
