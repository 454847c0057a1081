//! Arcs, simplices of arc complexes, cutting along simplices, and splitting
//! off X-powers.
//!
//! An arc is a vector with boundary value one. A collection of arcs spans a
//! simplex of the unimodular-systems complex when their pairing rows together
//! with the boundary form a unimodular sequence; it is a simplex of the
//! ordered destabilization complex when additionally the arcs pair to one in
//! some linear order. Cutting along a simplex intersects the kernels of the
//! twisted functionals del + lambda(a_i, -); the result carries the
//! restricted form and boundary, with the inclusion as witness.

use crate::error::{Error, Result};
use crate::exactlin::{is_unimodular_rows, kernel_basis, Mat};
use crate::formed::{FormedSpace, Morphism};
use num_bigint::BigInt;
use num_traits::One;

/// del(v) = 1.
pub fn is_arc(a: &FormedSpace, v: &[BigInt]) -> bool {
    v.len() == a.rank && a.boundary_of(v).is_one()
}

/// Arc whose pairing row, stacked with the boundary row, is unimodular.
pub fn is_nonseparating(a: &FormedSpace, v: &[BigInt]) -> bool {
    if !is_arc(a, v) {
        return false;
    }
    let rows = a.pairing_row(v).vcat(&a.del);
    is_unimodular_rows(&rows)
}

/// Arcs a_0..a_p whose pairing rows, together with the boundary, form a
/// unimodular sequence.
pub fn is_b_simplex(a: &FormedSpace, vs: &[Vec<BigInt>]) -> bool {
    if vs.is_empty() || !vs.iter().all(|v| is_arc(a, v)) {
        return false;
    }
    let mut rows = a.pairing_row(&vs[0]);
    for v in &vs[1..] {
        rows = rows.vcat(&a.pairing_row(v));
    }
    rows = rows.vcat(&a.del);
    is_unimodular_rows(&rows)
}

/// Destabilization simplex test: a B-simplex whose arcs admit a linear order
/// with pairing +1 from earlier to later. Returns such an order (indices
/// into `vs`) or None.
///
/// Over Z/2 the form is symmetric, every pair must pair to one, and every
/// order works; otherwise the +1/-1 pattern is a tournament and a valid
/// order exists exactly when sorting by win count produces one.
pub fn is_d_simplex(a: &FormedSpace, vs: &[Vec<BigInt>]) -> Option<Vec<usize>> {
    if !is_b_simplex(a, vs) {
        return None;
    }
    let n = vs.len();
    let one = BigInt::one();
    if a.ring.characteristic() == 2 {
        for i in 0..n {
            for j in (i + 1)..n {
                if a.pair(&vs[i], &vs[j]) != one {
                    return None;
                }
            }
        }
        return Some((0..n).collect());
    }
    let minus_one = a.ring.reduce(&BigInt::from(-1));
    let mut wins = vec![0usize; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let p = a.pair(&vs[i], &vs[j]);
            if p == one {
                wins[i] += 1;
            } else if p == minus_one {
                wins[j] += 1;
            } else {
                return None;
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(wins[i]));
    for x in 0..n {
        for y in (x + 1)..n {
            if a.pair(&vs[order[x]], &vs[order[y]]) != one {
                return None;
            }
        }
    }
    Some(order)
}

/// Cut along a simplex: the intersection of the kernels of the functionals
/// del + lambda(a_i, -), carrying the restricted form and boundary. Returns
/// the cut space and the inclusion matrix (columns are the kernel basis in
/// ambient coordinates).
pub fn cut(a: &FormedSpace, vs: &[Vec<BigInt>]) -> Result<(FormedSpace, Mat)> {
    if !is_b_simplex(a, vs) {
        return Err(Error::NotBSimplex(format!(
            "{} arcs do not span a simplex with unimodular pairing rows",
            vs.len()
        )));
    }
    let mut rows: Option<Mat> = None;
    for v in vs {
        let r = a.pairing_row(v).add(&a.del);
        rows = Some(match rows {
            None => r,
            Some(acc) => acc.vcat(&r),
        });
    }
    let rows = rows.expect("nonempty simplex");
    let k = kernel_basis(&rows)?;
    let lam = k.transpose().mul(&a.lambda).mul(&k);
    let del = a.del.mul(&k);
    let space = FormedSpace::new(a.ring, lam, del)?;
    Ok((space, k))
}

/// Split off an embedded X-power: given a morphism f from the k-th X-power
/// into A whose image is a monoidal summand, compute the complement
/// C = { m : lambda'(f(x), m) = 0 } and a checked isomorphism C # X^k -> A
/// whose last k columns are f.
pub fn split_off(a: &FormedSpace, f: &Morphism) -> Result<(FormedSpace, Morphism)> {
    if f.tgt != *a {
        return Err(Error::DimensionMismatch(
            "the morphism must land in the space being split".into(),
        ));
    }
    let k = f.src.rank;
    if f.src != FormedSpace::x_power(a.ring, k) {
        return Err(Error::InvalidInput(
            "split_off requires a morphism from an X-power".into(),
        ));
    }
    // Rows of lambda'(f(x_j), -).
    let rows = f.mat.transpose().mul(&a.curved_form());
    if !is_unimodular_rows(&rows) {
        return Err(Error::HypothesisFailed(
            "the X-power image does not split: its curved pairing rows are not unimodular".into(),
        ));
    }
    let kbasis = kernel_basis(&rows)?;
    let lam = kbasis.transpose().mul(&a.lambda).mul(&kbasis);
    let del = a.del.mul(&kbasis);
    let complement = FormedSpace::new(a.ring, lam, del)?;
    let src = complement.sum(&f.src)?;
    let witness = Morphism::iso(src, a.clone(), kbasis.hcat(&f.mat))?;
    Ok((complement, witness))
}

/// The canonical arc morphism X -> A with image v; fails unless del(v) = 1.
pub fn arc_morphism(a: &FormedSpace, v: &[BigInt]) -> Result<Morphism> {
    if !is_arc(a, v) {
        return Err(Error::NotAnArc(format!(
            "boundary value is {}, not 1",
            a.boundary_of(v)
        )));
    }
    Morphism::new(
        FormedSpace::x(a.ring),
        a.clone(),
        Mat::col_vector(a.ring, v),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingSpec;
    use num_traits::Zero;

    fn z() -> RingSpec {
        RingSpec::Z
    }

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn basis_vec(n: usize, i: usize) -> Vec<BigInt> {
        (0..n).map(|j| if j == i { BigInt::one() } else { BigInt::zero() }).collect()
    }

    #[test]
    fn basis_vectors_are_nonseparating_arcs() {
        for n in 2..=5 {
            let a = FormedSpace::x_power(z(), n);
            for i in 0..n {
                let e = basis_vec(n, i);
                assert!(is_arc(&a, &e));
                assert!(is_nonseparating(&a, &e), "e_{i} in rank {n}");
            }
        }
        // Rank one: the pairing row is zero, so {a.-, del} is two rows in a
        // rank-one dual and never unimodular. The generator arc separates.
        let x = FormedSpace::x(z());
        assert!(is_arc(&x, &[b(1)]));
        assert!(!is_nonseparating(&x, &[b(1)]));
        let a = FormedSpace::x_power(z(), 3);
        assert!(!is_arc(&a, &[b(1), b(1), b(0)]));
        assert!(is_arc(&a, &[b(2), b(0), b(-1)]));
    }

    #[test]
    fn separating_arc_example() {
        // A = X # (hyperbolic scaled by 2): the arc e_1 + e_2 has pairing row
        // (0, 0, 2), and {(0,0,2), (1,0,0)} only reaches even values on the
        // middle coordinate. The arc separates.
        let two_h = FormedSpace::new(
            z(),
            Mat::from_i64_rows(z(), &[&[0, 2], &[-2, 0]]),
            Mat::zero(z(), 1, 2),
        )
        .unwrap();
        let a = FormedSpace::x(z()).sum(&two_h).unwrap();
        let v = vec![b(1), b(1), b(0)];
        assert!(is_arc(&a, &v));
        assert!(!is_nonseparating(&a, &v));
        // With the unscaled hyperbolic the same arc is nonseparating.
        let a = FormedSpace::x(z()).sum(&FormedSpace::hyperbolic(z(), 1)).unwrap();
        assert!(is_nonseparating(&a, &[b(1), b(1), b(0)]));
        // The arc along the X factor pairs to zero with everything, so it
        // separates even though the boundary is unimodular.
        assert!(!is_nonseparating(&a, &basis_vec(3, 0)));
    }

    #[test]
    fn partial_standard_bases_span_d_simplices() {
        // p + 1 arcs need p + 2 unimodular rows (pairing rows plus boundary),
        // so the top dimension is n - 2: the full standard basis is out.
        for n in 2..=5 {
            let a = FormedSpace::x_power(z(), n);
            let full: Vec<Vec<BigInt>> = (0..n).map(|i| basis_vec(n, i)).collect();
            assert!(!is_b_simplex(&a, &full));
            let vs: Vec<Vec<BigInt>> = (0..n - 1).map(|i| basis_vec(n, i)).collect();
            assert!(is_b_simplex(&a, &vs));
            let order = is_d_simplex(&a, &vs).expect("partial standard basis is ordered");
            assert_eq!(order, (0..n - 1).collect::<Vec<_>>());
            // Reversed input must come back reversed.
            let rev: Vec<Vec<BigInt>> = vs.iter().rev().cloned().collect();
            let order = is_d_simplex(&a, &rev).unwrap();
            assert_eq!(order, (0..n - 1).rev().collect::<Vec<_>>());
        }
    }

    #[test]
    fn b_simplex_that_is_not_d() {
        // In the fourth X-power, e_1 and e_1+e_2-e_3 pair to zero.
        let a = FormedSpace::x_power(z(), 4);
        let v0 = basis_vec(4, 0);
        let v1 = vec![b(1), b(1), b(-1), b(0)];
        assert!(is_arc(&a, &v1));
        assert_eq!(a.pair(&v0, &v1), b(0));
        assert!(is_b_simplex(&a, &[v0.clone(), v1.clone()]));
        assert!(is_d_simplex(&a, &[v0, v1]).is_none());
    }

    #[test]
    fn char_two_simplices_ignore_order() {
        let ring = RingSpec::zmod(2);
        let a = FormedSpace::x_power(ring, 3);
        let vs = vec![basis_vec(3, 0), basis_vec(3, 1)];
        assert!(is_d_simplex(&a, &vs).is_some());
        let rev: Vec<Vec<BigInt>> = vs.iter().rev().cloned().collect();
        // Symmetric pairing: both orders are valid, identity order returned.
        assert_eq!(is_d_simplex(&a, &rev).unwrap(), vec![0, 1]);
    }

    #[test]
    fn cut_drops_rank_by_simplex_size() {
        for n in 2..=5 {
            let a = FormedSpace::x_power(z(), n);
            for p in 0..(n - 1).min(3) {
                let vs: Vec<Vec<BigInt>> = (0..=p).map(|i| basis_vec(n, i)).collect();
                let (cut_space, incl) = cut(&a, &vs).unwrap();
                assert_eq!(cut_space.rank, n - p - 1, "n = {n}, p = {p}");
                // Every inclusion column satisfies all the cut equations.
                for c in 0..incl.cols {
                    let col = incl.col_vec(c);
                    for v in &vs {
                        let val = a.ring.add(&a.pair(v, &col), &a.boundary_of(&col));
                        assert!(val.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn cut_rejects_non_simplices() {
        let a = FormedSpace::x_power(z(), 3);
        let not_arc = vec![b(0), b(0), b(0)];
        assert!(matches!(cut(&a, &[not_arc]), Err(Error::NotBSimplex(_))));
        assert!(matches!(cut(&a, &[]), Err(Error::NotBSimplex(_))));
    }

    #[test]
    fn split_off_x_power_blocks() {
        // The last two basis vectors of the fifth X-power form an embedded
        // X^2 summand; the complement has rank 3.
        let a = FormedSpace::x_power(z(), 5);
        let f_mat = Mat::from_fn(z(), 5, 2, |i, j| {
            if i == 3 + j {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        });
        let f = Morphism::new(FormedSpace::x_power(z(), 2), a.clone(), f_mat).unwrap();
        let (complement, witness) = split_off(&a, &f).unwrap();
        assert_eq!(complement.rank, 3);
        assert!(witness.is_iso());
        assert_eq!(witness.tgt, a);
        assert_eq!(witness.src, complement.sum(&FormedSpace::x_power(z(), 2)).unwrap());
    }

    #[test]
    fn split_off_single_arc_over_zmod() {
        let ring = RingSpec::zmod(6);
        let a = FormedSpace::x_power(ring, 4);
        let f = arc_morphism(&a, &basis_vec(4, 2)).unwrap();
        let (complement, witness) = split_off(&a, &f).unwrap();
        assert_eq!(complement.rank, 3);
        assert!(witness.is_iso());
    }

    #[test]
    fn every_x_power_morphism_splits() {
        // The pulled-back curved form of an X-power morphism is the
        // unitriangular curved form of the X-power itself, so the image is
        // always a monoidal summand: split_off cannot fail on a genuine
        // morphism. Exercise this on assorted arcs, including ones into a
        // degenerate ambient space.
        let degenerate = FormedSpace::new(
            z(),
            Mat::zero(z(), 2, 2),
            Mat::from_i64_rows(z(), &[&[1, 2]]),
        )
        .unwrap();
        let fm = arc_morphism(&degenerate, &[b(1), b(0)]).unwrap();
        let (c, w) = split_off(&degenerate, &fm).unwrap();
        assert_eq!(c.rank, 1);
        assert!(c.lambda.is_zero());
        assert!(c.del.is_zero());
        assert!(w.is_iso());

        for ring in [z(), RingSpec::zmod(4), RingSpec::zmod(7)] {
            let a = FormedSpace::x_power(ring, 4);
            for v in [
                vec![b(1), b(0), b(0), b(0)],
                vec![b(1), b(1), b(-1), b(0)],
                vec![b(3), b(-1), b(-1), b(0)],
            ] {
                let f = arc_morphism(&a, &v).unwrap();
                let (comp, wit) = split_off(&a, &f).unwrap();
                assert_eq!(comp.rank, 3);
                assert!(wit.is_iso());
            }
        }
    }

    #[test]
    fn arc_complement_keeps_unimodular_boundary() {
        let a = FormedSpace::x_power(z(), 4);
        let f = arc_morphism(&a, &basis_vec(4, 0)).unwrap();
        let (c, w) = split_off(&a, &f).unwrap();
        assert_eq!(c.rank, 3);
        assert!(is_unimodular_rows(&c.del));
        assert!(w.is_iso());
    }
}
