//! Formed spaces with boundary and their structure-preserving maps.
//!
//! A formed space over R is (R^n, lambda, del): an alternating n x n form
//! (skew transpose and zero diagonal, separate conditions in characteristic
//! two) together with a boundary functional given as a row vector.
//!
//! The monoidal sum installs the cross pairing del_1^T del_2 between the two
//! summands, so the sum of boundaryless spaces is the orthogonal sum but
//! X-powers acquire the full upper triangle of +1 entries. The braiding is
//! a concrete integer matrix, not a permutation: the symmetry of the sum is
//! genuinely braided, and beta_{1,1} squared is not the identity.

use crate::error::{Error, Result};
use crate::exactlin::{inverse, Mat};
use crate::ring::RingSpec;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::str::FromStr;

/// A free module with an alternating form and a boundary functional.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FormedSpace {
    pub ring: RingSpec,
    pub rank: usize,
    /// Alternating form, rank x rank.
    pub lambda: Mat,
    /// Boundary functional as a 1 x rank row.
    pub del: Mat,
}

impl std::fmt::Debug for FormedSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "FormedSpace(rank {} over {:?}, lambda {:?}, del {:?})",
            self.rank,
            self.ring,
            self.lambda,
            self.del.row_vec(0)
        )
    }
}

impl FormedSpace {
    pub fn new(ring: RingSpec, lambda: Mat, del: Mat) -> Result<Self> {
        let rank = lambda.rows;
        if lambda.cols != rank {
            return Err(Error::DimensionMismatch(format!(
                "form must be square, got {}x{}",
                lambda.rows, lambda.cols
            )));
        }
        if del.rows != 1 || del.cols != rank {
            return Err(Error::DimensionMismatch(format!(
                "boundary must be a 1x{} row, got {}x{}",
                rank, del.rows, del.cols
            )));
        }
        if lambda.ring != ring || del.ring != ring {
            return Err(Error::RingMismatch(
                "form and boundary must share the space's ring".into(),
            ));
        }
        for i in 0..rank {
            if !lambda.get(i, i).is_zero() {
                return Err(Error::NotAlternating(format!(
                    "diagonal entry ({i},{i}) is {}",
                    lambda.get(i, i)
                )));
            }
            for j in 0..rank {
                let skew = ring.add(lambda.get(i, j), lambda.get(j, i));
                if !skew.is_zero() {
                    return Err(Error::NotAlternating(format!(
                        "entries ({i},{j}) and ({j},{i}) do not sum to zero"
                    )));
                }
            }
        }
        Ok(FormedSpace { ring, rank, lambda, del })
    }

    /// The rank-zero space, the unit of the monoidal sum.
    pub fn unit(ring: RingSpec) -> Self {
        FormedSpace::new(ring, Mat::zero(ring, 0, 0), Mat::zero(ring, 1, 0)).unwrap()
    }

    /// X = (R, 0, 1), the generator of interest.
    pub fn x(ring: RingSpec) -> Self {
        let lambda = Mat::zero(ring, 1, 1);
        let del = Mat::from_i64_rows(ring, &[&[1]]);
        FormedSpace::new(ring, lambda, del).unwrap()
    }

    /// The n-fold monoidal power of X: lambda_{ij} = +1 for i < j, -1 for
    /// i > j, boundary all ones.
    pub fn x_power(ring: RingSpec, n: usize) -> Self {
        let lambda = Mat::from_fn(ring, n, n, |i, j| {
            if i < j {
                BigInt::one()
            } else if i > j {
                BigInt::from(-1)
            } else {
                BigInt::zero()
            }
        });
        let del = Mat::from_fn(ring, 1, n, |_, _| BigInt::one());
        FormedSpace::new(ring, lambda, del).unwrap()
    }

    /// Hyperbolic space of genus g with zero boundary: orthogonal sum of g
    /// planes with pairing matrix [[0,1],[-1,0]].
    pub fn hyperbolic(ring: RingSpec, g: usize) -> Self {
        let lambda = Mat::from_fn(ring, 2 * g, 2 * g, |i, j| {
            if i / 2 != j / 2 {
                BigInt::zero()
            } else if i % 2 == 0 && j == i + 1 {
                BigInt::one()
            } else if i % 2 == 1 && j + 1 == i {
                BigInt::from(-1)
            } else {
                BigInt::zero()
            }
        });
        let del = Mat::zero(ring, 1, 2 * g);
        FormedSpace::new(ring, lambda, del).unwrap()
    }

    /// Monoidal sum: forms on the blocks plus the cross pairing
    /// del_1^T del_2, boundaries concatenated.
    pub fn sum(&self, other: &FormedSpace) -> Result<FormedSpace> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!(
                "{:?} vs {:?}",
                self.ring, other.ring
            )));
        }
        let ring = self.ring;
        let (n1, n2) = (self.rank, other.rank);
        let cross = self.del.transpose().mul(&other.del);
        let lambda = Mat::from_fn(ring, n1 + n2, n1 + n2, |i, j| {
            if i < n1 && j < n1 {
                self.lambda.get(i, j).clone()
            } else if i >= n1 && j >= n1 {
                other.lambda.get(i - n1, j - n1).clone()
            } else if i < n1 {
                cross.get(i, j - n1).clone()
            } else {
                -cross.get(j, i - n1)
            }
        });
        let del = self.del.hcat(&other.del);
        FormedSpace::new(ring, lambda, del)
    }

    /// lambda(v, w).
    pub fn pair(&self, v: &[BigInt], w: &[BigInt]) -> BigInt {
        assert_eq!(v.len(), self.rank);
        let lw = self.lambda.mul_col(w);
        let mut acc = BigInt::zero();
        for i in 0..self.rank {
            acc += &v[i] * &lw[i];
        }
        self.ring.reduce(&acc)
    }

    /// del(v).
    pub fn boundary_of(&self, v: &[BigInt]) -> BigInt {
        self.del.mul_col(v)[0].clone()
    }

    /// The row functional lambda(v, -) as a 1 x rank matrix.
    pub fn pairing_row(&self, v: &[BigInt]) -> Mat {
        let row = Mat::row_vector(self.ring, v);
        row.mul(&self.lambda)
    }

    /// Curved form lambda' = lambda + del^T del; morphisms preserve it.
    pub fn curved_form(&self) -> Mat {
        self.lambda.add(&self.del.transpose().mul(&self.del))
    }

    /// Nondegeneracy of the curved form: invertibility over the ring.
    pub fn is_nondegenerate(&self) -> bool {
        inverse(&self.curved_form()).is_some()
    }
}

/// Alternating sign vector (1, -1, 1, ...) of length n. It pairs under the
/// curved form of the n-th X-power to the boundary functional, and under the
/// flat form to zero (n odd) or the boundary (n even).
pub fn characteristic_vector(ring: RingSpec, n: usize) -> Vec<BigInt> {
    (0..n)
        .map(|i| ring.reduce(&BigInt::from(if i % 2 == 0 { 1 } else { -1 })))
        .collect()
}

/// A form- and boundary-preserving map between formed spaces, stored with
/// its matrix (tgt.rank x src.rank) and, when invertible, its inverse.
#[derive(Clone, PartialEq, Eq)]
pub struct Morphism {
    pub src: FormedSpace,
    pub tgt: FormedSpace,
    pub mat: Mat,
    inv: Option<Mat>,
}

impl std::fmt::Debug for Morphism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Morphism({} -> {}, {:?}{})",
            self.src.rank,
            self.tgt.rank,
            self.mat,
            if self.inv.is_some() { ", iso" } else { "" }
        )
    }
}

impl Morphism {
    /// Checked constructor: requires mat^T lambda_tgt mat = lambda_src and
    /// del_tgt mat = del_src.
    pub fn new(src: FormedSpace, tgt: FormedSpace, mat: Mat) -> Result<Self> {
        if src.ring != tgt.ring || mat.ring != src.ring {
            return Err(Error::RingMismatch("morphism data must share one ring".into()));
        }
        if mat.rows != tgt.rank || mat.cols != src.rank {
            return Err(Error::DimensionMismatch(format!(
                "matrix must be {}x{}, got {}x{}",
                tgt.rank, src.rank, mat.rows, mat.cols
            )));
        }
        let pulled = mat.transpose().mul(&tgt.lambda).mul(&mat);
        if pulled != src.lambda {
            return Err(Error::NotAMorphism("form not preserved".into()));
        }
        if tgt.del.mul(&mat) != src.del {
            return Err(Error::NotAMorphism("boundary not preserved".into()));
        }
        Ok(Morphism { src, tgt, mat, inv: None })
    }

    /// Checked isomorphism constructor: additionally computes and stores the
    /// inverse matrix.
    pub fn iso(src: FormedSpace, tgt: FormedSpace, mat: Mat) -> Result<Self> {
        let mut m = Morphism::new(src, tgt, mat)?;
        let inv = inverse(&m.mat).ok_or(Error::Singular)?;
        m.inv = Some(inv);
        Ok(m)
    }

    pub fn identity(space: &FormedSpace) -> Self {
        let mat = Mat::identity(space.ring, space.rank);
        Morphism {
            src: space.clone(),
            tgt: space.clone(),
            mat: mat.clone(),
            inv: Some(mat),
        }
    }

    pub fn is_iso(&self) -> bool {
        self.inv.is_some()
    }

    /// Promote to isomorphism if the matrix is invertible.
    pub fn into_iso(mut self) -> Result<Self> {
        if self.inv.is_none() {
            let inv = inverse(&self.mat).ok_or(Error::Singular)?;
            self.inv = Some(inv);
        }
        Ok(self)
    }

    /// self after other: (self . other)(x) = self(other(x)).
    pub fn compose(&self, other: &Morphism) -> Result<Morphism> {
        if other.tgt != self.src {
            return Err(Error::DimensionMismatch(
                "composition requires matching middle space".into(),
            ));
        }
        let mat = self.mat.mul(&other.mat);
        let inv = match (&self.inv, &other.inv) {
            (Some(a), Some(b)) => Some(b.mul(a)),
            _ => None,
        };
        Ok(Morphism {
            src: other.src.clone(),
            tgt: self.tgt.clone(),
            mat,
            inv,
        })
    }

    pub fn inverse_morphism(&self) -> Option<Morphism> {
        let inv = self.inv.clone()?;
        Some(Morphism {
            src: self.tgt.clone(),
            tgt: self.src.clone(),
            mat: inv,
            inv: Some(self.mat.clone()),
        })
    }

    pub fn inverse_mat(&self) -> Option<&Mat> {
        self.inv.as_ref()
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.mat.mul_col(v)
    }

    /// Monoidal sum of morphisms: block diagonal matrix between the sums.
    pub fn direct_sum(&self, other: &Morphism) -> Result<Morphism> {
        let src = self.src.sum(&other.src)?;
        let tgt = self.tgt.sum(&other.tgt)?;
        let mat = self.mat.direct_sum(&other.mat);
        let inv = match (&self.inv, &other.inv) {
            (Some(a), Some(b)) => Some(a.direct_sum(b)),
            _ => None,
        };
        let m = Morphism::new(src, tgt, mat)?;
        Ok(Morphism { inv, ..m })
    }
}

/// The braiding X^{#n} # X^{#m} -> X^{#m} # X^{#n} as a checked isomorphism.
///
/// Block shape (output coordinates listed m-block first):
///   [ A    I_m ]
///   [ s*I_n  0 ]
/// with A the m x n matrix whose row i is constant (-1)^i * 2 (zero-indexed)
/// and s = (-1)^m. For n = 0 or m = 0 this collapses to the identity.
pub fn braid_matrix(ring: RingSpec, n: usize, m: usize) -> Morphism {
    let src = FormedSpace::x_power(ring, n).sum(&FormedSpace::x_power(ring, m)).unwrap();
    let tgt = FormedSpace::x_power(ring, m).sum(&FormedSpace::x_power(ring, n)).unwrap();
    let sign = if m % 2 == 0 { BigInt::one() } else { BigInt::from(-1) };
    let mat = Mat::from_fn(ring, n + m, n + m, |i, j| {
        if i < m {
            if j < n {
                // A block.
                if i % 2 == 0 {
                    BigInt::from(2)
                } else {
                    BigInt::from(-2)
                }
            } else if j - n == i {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        } else if j < n && j == i - m {
            sign.clone()
        } else {
            BigInt::zero()
        }
    });
    Morphism::iso(src, tgt, mat).expect("braiding must be a checked isomorphism")
}

/// The standard model that the n-th X-power standardizes to: hyperbolic
/// pairs, plus a free rank-one radical line for odd n, with boundary
/// supported on a single coordinate (the last for odd n, the first pair's
/// second vector for even n). For n = 1 the model is X itself.
pub fn x_power_model(ring: RingSpec, n: usize) -> FormedSpace {
    if n == 0 {
        return FormedSpace::unit(ring);
    }
    if n == 1 {
        return FormedSpace::x(ring);
    }
    if n % 2 == 0 {
        let g = n / 2;
        let h = FormedSpace::hyperbolic(ring, g);
        let mut del = Mat::zero(ring, 1, n);
        del.set(0, 1, BigInt::one());
        FormedSpace::new(ring, h.lambda, del).unwrap()
    } else {
        let g = (n - 1) / 2;
        let h = FormedSpace::hyperbolic(ring, g);
        let lambda = h.lambda.direct_sum(&Mat::zero(ring, 1, 1));
        let mut del = Mat::zero(ring, 1, n);
        del.set(0, n - 1, BigInt::one());
        FormedSpace::new(ring, lambda, del).unwrap()
    }
}

/// Checked isomorphism from `x_power_model(ring, n)` to the n-th X-power,
/// built by the inductive two-step standardization.
pub fn standardize_x_power(ring: RingSpec, n: usize) -> Morphism {
    let model = x_power_model(ring, n);
    let target = FormedSpace::x_power(ring, n);
    let mat = standardize_matrix(ring, n);
    Morphism::iso(model, target, mat).expect("standardization must be a checked isomorphism")
}

fn standardize_matrix(ring: RingSpec, n: usize) -> Mat {
    match n {
        0 => Mat::zero(ring, 0, 0),
        1 => Mat::identity(ring, 1),
        2 => Mat::from_i64_rows(ring, &[&[1, 0], &[-1, 1]]),
        3 => Mat::from_i64_rows(ring, &[&[1, 0, 1], &[-1, 1, -1], &[0, -1, 1]]),
        _ if n % 2 == 1 => {
            // S_{2g+1} = (S_{2g-1} + I_2) . (I_{2(g-1)} + S_3).
            let prev = standardize_matrix(ring, n - 2);
            let left = prev.direct_sum(&Mat::identity(ring, 2));
            let right = Mat::identity(ring, n - 3).direct_sum(&standardize_matrix(ring, 3));
            left.mul(&right)
        }
        _ => {
            // S_{2g} = (S_{2g-1} + I_1) . (I_{2(g-1)} + S_2) . P, where P
            // moves the boundary-carrying first pair behind the others.
            let prev = standardize_matrix(ring, n - 1);
            let left = prev.direct_sum(&Mat::identity(ring, 1));
            let mid = Mat::identity(ring, n - 2).direct_sum(&standardize_matrix(ring, 2));
            let perm = Mat::from_fn(ring, n, n, |i, j| {
                // Source pair (0,1) lands on (n-2, n-1); pair k >= 1 shifts down.
                let target = if j < 2 { n - 2 + j } else { j - 2 };
                if i == target {
                    BigInt::one()
                } else {
                    BigInt::zero()
                }
            });
            left.mul(&mid).mul(&perm)
        }
    }
}

/// Exact integer from a JSON value; floats and strings are rejected.
pub fn bigint_from_json(v: &serde_json::Value) -> Result<BigInt> {
    match v {
        serde_json::Value::Number(n) => {
            let s = n.to_string();
            if s.contains('.') || s.contains('e') || s.contains('E') {
                return Err(Error::InvalidInput(format!("not an exact integer: {s}")));
            }
            BigInt::from_str(&s).map_err(|e| Error::InvalidInput(format!("bad integer {s}: {e}")))
        }
        other => Err(Error::InvalidInput(format!("expected integer, got {other}"))),
    }
}

pub fn bigint_to_json(x: &BigInt) -> serde_json::Value {
    let n = serde_json::Number::from_str(&x.to_string())
        .expect("integer strings always parse as JSON numbers");
    serde_json::Value::Number(n)
}

pub fn mat_to_json_rows(m: &Mat) -> serde_json::Value {
    serde_json::Value::Array(
        (0..m.rows)
            .map(|i| {
                serde_json::Value::Array((0..m.cols).map(|j| bigint_to_json(m.get(i, j))).collect())
            })
            .collect(),
    )
}

impl FormedSpace {
    /// JSON form: {"ring": ..., "rank": n, "lambda": [[...]], "del": [...]}.
    pub fn to_json(&self) -> serde_json::Value {
        let del = serde_json::Value::Array(
            (0..self.rank).map(|j| bigint_to_json(self.del.get(0, j))).collect(),
        );
        serde_json::json!({
            "ring": self.ring,
            "rank": self.rank,
            "lambda": mat_to_json_rows(&self.lambda),
            "del": del,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<FormedSpace> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::InvalidInput("formed space must be a JSON object".into()))?;
        let ring: RingSpec = serde_json::from_value(
            obj.get("ring")
                .ok_or_else(|| Error::InvalidInput("missing \"ring\"".into()))?
                .clone(),
        )
        .map_err(|e| Error::InvalidInput(format!("bad ring: {e}")))?;
        ring.validate()?;
        let rank = obj
            .get("rank")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| Error::InvalidInput("missing or bad \"rank\"".into()))?
            as usize;
        let lam_rows = obj
            .get("lambda")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::InvalidInput("missing or bad \"lambda\"".into()))?;
        if lam_rows.len() != rank {
            return Err(Error::DimensionMismatch(format!(
                "lambda has {} rows for rank {rank}",
                lam_rows.len()
            )));
        }
        let mut lambda = Mat::zero(ring, rank, rank);
        for (i, row) in lam_rows.iter().enumerate() {
            let row = row
                .as_array()
                .ok_or_else(|| Error::InvalidInput("lambda rows must be arrays".into()))?;
            if row.len() != rank {
                return Err(Error::DimensionMismatch(format!(
                    "lambda row {i} has {} entries for rank {rank}",
                    row.len()
                )));
            }
            for (j, e) in row.iter().enumerate() {
                lambda.set(i, j, bigint_from_json(e)?);
            }
        }
        let del_arr = obj
            .get("del")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::InvalidInput("missing or bad \"del\"".into()))?;
        if del_arr.len() != rank {
            return Err(Error::DimensionMismatch(format!(
                "del has {} entries for rank {rank}",
                del_arr.len()
            )));
        }
        let mut del = Mat::zero(ring, 1, rank);
        for (j, e) in del_arr.iter().enumerate() {
            del.set(0, j, bigint_from_json(e)?);
        }
        FormedSpace::new(ring, lambda, del)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> RingSpec {
        RingSpec::Z
    }

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn sum_builds_x_powers() {
        let x = FormedSpace::x(z());
        let x2 = x.sum(&x).unwrap();
        assert_eq!(x2, FormedSpace::x_power(z(), 2));
        assert_eq!(x2.lambda, Mat::from_i64_rows(z(), &[&[0, 1], &[-1, 0]]));
        let mut acc = FormedSpace::unit(z());
        for n in 0..=6 {
            assert_eq!(acc, FormedSpace::x_power(z(), n), "n = {n}");
            acc = acc.sum(&x).unwrap();
        }
    }

    #[test]
    fn sum_is_strictly_associative_and_unital() {
        let a = FormedSpace::x_power(z(), 2);
        let h = FormedSpace::hyperbolic(z(), 1);
        let c = FormedSpace::x_power(z(), 3);
        let left = a.sum(&h).unwrap().sum(&c).unwrap();
        let right = a.sum(&h.sum(&c).unwrap()).unwrap();
        assert_eq!(left, right);
        let unit = FormedSpace::unit(z());
        assert_eq!(a.sum(&unit).unwrap(), a);
        assert_eq!(unit.sum(&a).unwrap(), a);
    }

    #[test]
    fn ring_mismatch_is_rejected() {
        let a = FormedSpace::x(z());
        let c = FormedSpace::x(RingSpec::zmod(5));
        assert!(matches!(a.sum(&c), Err(Error::RingMismatch(_))));
    }

    #[test]
    fn alternating_validation() {
        // Symmetric nonzero diagonal over Z/2 is skew but not alternating.
        let ring = RingSpec::zmod(2);
        let lambda = Mat::from_i64_rows(ring, &[&[1, 0], &[0, 1]]);
        let del = Mat::zero(ring, 1, 2);
        assert!(matches!(
            FormedSpace::new(ring, lambda, del),
            Err(Error::NotAlternating(_))
        ));
        // Zero diagonal but symmetric over Z/2 is allowed (skew = symmetric).
        let lambda = Mat::from_i64_rows(ring, &[&[0, 1], &[1, 0]]);
        let del = Mat::zero(ring, 1, 2);
        assert!(FormedSpace::new(ring, lambda, del).is_ok());
        // Over Z, failure of skew-symmetry.
        let lambda = Mat::from_i64_rows(z(), &[&[0, 1], &[1, 0]]);
        let del = Mat::zero(z(), 1, 2);
        assert!(matches!(
            FormedSpace::new(z(), lambda, del),
            Err(Error::NotAlternating(_))
        ));
    }

    #[test]
    fn curved_form_anchors() {
        let x2 = FormedSpace::x_power(z(), 2);
        assert_eq!(x2.curved_form(), Mat::from_i64_rows(z(), &[&[1, 2], &[0, 1]]));
        let x3 = FormedSpace::x_power(z(), 3);
        assert_eq!(
            x3.curved_form(),
            Mat::from_i64_rows(z(), &[&[1, 2, 2], &[0, 1, 2], &[0, 0, 1]])
        );
    }

    #[test]
    fn nondegeneracy() {
        for n in 0..=6 {
            assert!(FormedSpace::x_power(z(), n).is_nondegenerate(), "n = {n}");
        }
        assert!(FormedSpace::hyperbolic(z(), 2).is_nondegenerate());
        // A rank-one space with zero form and zero boundary is degenerate.
        let degenerate =
            FormedSpace::new(z(), Mat::zero(z(), 1, 1), Mat::zero(z(), 1, 1)).unwrap();
        assert!(!degenerate.is_nondegenerate());
        // Scaled boundary: curved form [2]^T[2] = [4], not invertible over Z
        // but invertible mod 5.
        let del = Mat::from_i64_rows(z(), &[&[2]]);
        let s = FormedSpace::new(z(), Mat::zero(z(), 1, 1), del).unwrap();
        assert!(!s.is_nondegenerate());
        let ring = RingSpec::zmod(5);
        let del = Mat::from_i64_rows(ring, &[&[2]]);
        let s = FormedSpace::new(ring, Mat::zero(ring, 1, 1), del).unwrap();
        assert!(s.is_nondegenerate());
    }

    #[test]
    fn braid_anchor_values() {
        let beta = braid_matrix(z(), 1, 1);
        assert_eq!(beta.mat, Mat::from_i64_rows(z(), &[&[2, 1], &[-1, 0]]));
        let beta = braid_matrix(z(), 2, 1);
        assert_eq!(
            beta.mat,
            Mat::from_i64_rows(z(), &[&[2, 2, 1], &[-1, 0, 0], &[0, -1, 0]])
        );
        assert!(braid_matrix(z(), 0, 3).mat.is_identity());
        assert!(braid_matrix(z(), 3, 0).mat.is_identity());
        // The braiding is not a symmetry.
        let b11 = braid_matrix(z(), 1, 1);
        let square = b11.compose(&b11).unwrap();
        assert!(!square.mat.is_identity());
    }

    #[test]
    fn braid_is_checked_iso_over_various_rings() {
        for ring in [z(), RingSpec::zmod(2), RingSpec::zmod(4), RingSpec::zmod(9)] {
            for n in 0..=3 {
                for m in 0..=3 {
                    let beta = braid_matrix(ring, n, m);
                    assert!(beta.is_iso());
                }
            }
        }
    }

    #[test]
    fn braid_yang_baxter() {
        for (n, m, p) in [(1, 1, 1), (1, 2, 1), (2, 1, 1), (1, 1, 2), (2, 2, 1)] {
            let id = |k: usize| Morphism::identity(&FormedSpace::x_power(z(), k));
            let lhs = braid_matrix(z(), m, p)
                .direct_sum(&id(n))
                .unwrap()
                .compose(&id(m).direct_sum(&braid_matrix(z(), n, p)).unwrap())
                .unwrap()
                .compose(&braid_matrix(z(), n, m).direct_sum(&id(p)).unwrap())
                .unwrap();
            let rhs = id(p)
                .direct_sum(&braid_matrix(z(), n, m))
                .unwrap()
                .compose(&braid_matrix(z(), n, p).direct_sum(&id(m)).unwrap())
                .unwrap()
                .compose(&id(n).direct_sum(&braid_matrix(z(), m, p)).unwrap())
                .unwrap();
            assert_eq!(lhs.mat, rhs.mat, "(n,m,p) = ({n},{m},{p})");
        }
    }

    #[test]
    fn braid_hexagons() {
        let id = |k: usize| Morphism::identity(&FormedSpace::x_power(z(), k));
        for n in 0..=2 {
            for np in 0..=2 {
                for m in 0..=2 {
                    let whole = braid_matrix(z(), n + np, m);
                    let steps = braid_matrix(z(), n, m)
                        .direct_sum(&id(np))
                        .unwrap()
                        .compose(&id(n).direct_sum(&braid_matrix(z(), np, m)).unwrap())
                        .unwrap();
                    assert_eq!(whole.mat, steps.mat, "left hexagon ({n},{np},{m})");
                    let whole = braid_matrix(z(), n, m + np);
                    let steps = id(m)
                        .direct_sum(&braid_matrix(z(), n, np))
                        .unwrap()
                        .compose(&braid_matrix(z(), n, m).direct_sum(&id(np)).unwrap())
                        .unwrap();
                    assert_eq!(whole.mat, steps.mat, "right hexagon ({n},{m},{np})");
                }
            }
        }
    }

    #[test]
    fn characteristic_vector_pairings() {
        for ring in [z(), RingSpec::zmod(5)] {
            for n in 1..=7 {
                let a = FormedSpace::x_power(ring, n);
                let v = characteristic_vector(ring, n);
                let flat = Mat::row_vector(ring, &v).mul(&a.lambda);
                let curved = Mat::row_vector(ring, &v).mul(&a.curved_form());
                assert_eq!(curved, a.del, "curved pairing, n = {n}");
                if n % 2 == 1 {
                    assert!(flat.is_zero(), "flat pairing, odd n = {n}");
                } else {
                    assert_eq!(flat, a.del, "flat pairing, even n = {n}");
                }
            }
        }
    }

    #[test]
    fn standardization_anchors() {
        let s2 = standardize_matrix(z(), 2);
        assert_eq!(s2, Mat::from_i64_rows(z(), &[&[1, 0], &[-1, 1]]));
        let s3 = standardize_matrix(z(), 3);
        assert_eq!(s3.col_vec(0), vec![b(1), b(-1), b(0)]);
        assert_eq!(s3.col_vec(1), vec![b(0), b(1), b(-1)]);
        assert_eq!(s3.col_vec(2), vec![b(1), b(-1), b(1)]);
    }

    #[test]
    fn standardization_is_checked_iso() {
        for ring in [z(), RingSpec::zmod(2), RingSpec::zmod(6)] {
            for n in 0..=8 {
                let s = standardize_x_power(ring, n);
                assert!(s.is_iso(), "n = {n} over {ring:?}");
                assert_eq!(s.src, x_power_model(ring, n));
                assert_eq!(s.tgt, FormedSpace::x_power(ring, n));
            }
        }
    }

    #[test]
    fn model_boundary_layout() {
        let m4 = x_power_model(z(), 4);
        assert_eq!(m4.del.row_vec(0), vec![b(0), b(1), b(0), b(0)]);
        let m5 = x_power_model(z(), 5);
        assert_eq!(m5.del.row_vec(0), vec![b(0), b(0), b(0), b(0), b(1)]);
    }

    #[test]
    fn morphism_checks_reject_bad_maps() {
        let x2 = FormedSpace::x_power(z(), 2);
        let bad = Mat::identity(z(), 2);
        let x2_twisted = FormedSpace::new(
            z(),
            Mat::from_i64_rows(z(), &[&[0, 2], &[-2, 0]]),
            Mat::from_i64_rows(z(), &[&[1, 1]]),
        )
        .unwrap();
        assert!(matches!(
            Morphism::new(x2_twisted, x2.clone(), bad.clone()),
            Err(Error::NotAMorphism(_))
        ));
        // Boundary must also be preserved.
        let h = FormedSpace::hyperbolic(z(), 1);
        assert!(matches!(
            Morphism::new(h, FormedSpace::x_power(z(), 2), bad),
            Err(Error::NotAMorphism(_))
        ));
    }

    #[test]
    fn composition_and_inverse() {
        let s = standardize_x_power(z(), 4);
        let inv = s.inverse_morphism().unwrap();
        let id1 = inv.compose(&s).unwrap();
        let id2 = s.compose(&inv).unwrap();
        assert!(id1.mat.is_identity());
        assert!(id2.mat.is_identity());
        assert_eq!(id1.src, x_power_model(z(), 4));
        assert_eq!(id2.src, FormedSpace::x_power(z(), 4));
    }

    #[test]
    fn json_round_trip() {
        let spaces = [
            FormedSpace::x_power(z(), 3),
            FormedSpace::hyperbolic(RingSpec::zmod(6), 2),
            FormedSpace::unit(z()),
        ];
        for s in &spaces {
            let v = s.to_json();
            let back = FormedSpace::from_json(&v).unwrap();
            assert_eq!(&back, s);
        }
        // Large integers survive exactly.
        let big = BigInt::from_str("1000000000000000000000000000007").unwrap();
        let mut lambda = Mat::zero(z(), 2, 2);
        lambda.set(0, 1, big.clone());
        lambda.set(1, 0, -big.clone());
        let s = FormedSpace::new(z(), lambda, Mat::zero(z(), 1, 2)).unwrap();
        let back = FormedSpace::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn json_rejects_floats_and_bad_shapes() {
        let v = serde_json::json!({
            "ring": {"kind": "Z"},
            "rank": 1,
            "lambda": [[0.5]],
            "del": [0],
        });
        assert!(FormedSpace::from_json(&v).is_err());
        let v = serde_json::json!({
            "ring": {"kind": "Z"},
            "rank": 2,
            "lambda": [[0, 1], [-1, 0]],
            "del": [0],
        });
        assert!(matches!(
            FormedSpace::from_json(&v),
            Err(Error::DimensionMismatch(_))
        ));
        let v = serde_json::json!({
            "ring": {"kind": "Z"},
            "rank": 1,
            "lambda": [[1]],
            "del": [0],
        });
        assert!(matches!(
            FormedSpace::from_json(&v),
            Err(Error::NotAlternating(_))
        ));
    }
}
