//! Coefficient rings: the integers and the quotients Z/m.
//!
//! Every element is stored as a canonical `BigInt` representative: arbitrary
//! for Z, and in `0..m` for Z/m. All arithmetic goes through [`RingSpec`] so
//! canonical form is preserved everywhere. Ideals in both rings are
//! principal; [`RingSpec::ideal_gcd`] returns the canonical generator
//! (nonnegative for Z, the smallest nonnegative divisor of m for Z/m), which
//! makes invariant tuples comparable by plain equality.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// A supported coefficient ring: Z or Z/m with m >= 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum RingSpec {
    Z,
    Zmod { m: u64 },
}

/// Stable-rank and structural metadata of a ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingProfile {
    pub sr: usize,
    pub usr: usize,
    pub is_pid: bool,
    pub characteristic: u64,
}

/// Deterministic Miller-Rabin for u64 moduli.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

impl RingSpec {
    pub fn z() -> Self {
        RingSpec::Z
    }

    pub fn zmod(m: u64) -> Self {
        RingSpec::Zmod { m }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            RingSpec::Z => Ok(()),
            RingSpec::Zmod { m } if *m >= 2 => Ok(()),
            RingSpec::Zmod { m } => Err(Error::InvalidInput(format!(
                "modulus must be at least 2, got {m}"
            ))),
        }
    }

    pub fn modulus(&self) -> Option<u64> {
        match self {
            RingSpec::Z => None,
            RingSpec::Zmod { m } => Some(*m),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, RingSpec::Zmod { .. })
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            RingSpec::Z => 0,
            RingSpec::Zmod { m } => *m,
        }
    }

    /// True for Z and for Z/p with p prime (the fields F_p).
    pub fn is_pid(&self) -> bool {
        match self {
            RingSpec::Z => true,
            RingSpec::Zmod { m } => is_prime_u64(*m),
        }
    }

    pub fn is_field(&self) -> bool {
        matches!(self, RingSpec::Zmod { m } if is_prime_u64(*m))
    }

    /// Stable rank: 2 for Z (Dedekind domain), 1 for the semi-local Z/m.
    pub fn sr(&self) -> usize {
        match self {
            RingSpec::Z => 2,
            RingSpec::Zmod { .. } => 1,
        }
    }

    /// Unitary stable rank; same values as `sr` for the supported rings.
    pub fn usr(&self) -> usize {
        match self {
            RingSpec::Z => 2,
            RingSpec::Zmod { .. } => 1,
        }
    }

    pub fn profile(&self) -> RingProfile {
        RingProfile {
            sr: self.sr(),
            usr: self.usr(),
            is_pid: self.is_pid(),
            characteristic: self.characteristic(),
        }
    }

    /// Canonical representative of `x`.
    pub fn reduce(&self, x: &BigInt) -> BigInt {
        match self {
            RingSpec::Z => x.clone(),
            RingSpec::Zmod { m } => x.mod_floor(&BigInt::from(*m)),
        }
    }

    pub fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.reduce(&(a + b))
    }

    pub fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.reduce(&(a - b))
    }

    pub fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.reduce(&(a * b))
    }

    pub fn neg(&self, a: &BigInt) -> BigInt {
        self.reduce(&(-a))
    }

    pub fn is_zero_elem(&self, a: &BigInt) -> bool {
        self.reduce(a).is_zero()
    }

    pub fn is_unit(&self, a: &BigInt) -> bool {
        match self {
            RingSpec::Z => a.abs().is_one(),
            RingSpec::Zmod { m } => self.reduce(a).gcd(&BigInt::from(*m)).is_one(),
        }
    }

    /// Multiplicative inverse, when `a` is a unit.
    pub fn inv(&self, a: &BigInt) -> Option<BigInt> {
        match self {
            RingSpec::Z => {
                if a.abs().is_one() {
                    Some(a.clone())
                } else {
                    None
                }
            }
            RingSpec::Zmod { m } => {
                let mm = BigInt::from(*m);
                let a = self.reduce(a);
                let eg = a.extended_gcd(&mm);
                if eg.gcd.is_one() {
                    Some(self.reduce(&eg.x))
                } else {
                    None
                }
            }
        }
    }

    /// Canonical generator of the ideal generated by `elems`.
    ///
    /// Zero for the empty list. For Z/m the result is the smallest
    /// nonnegative divisor-of-m representative, with the whole ring giving 1
    /// and the zero ideal giving 0.
    pub fn ideal_gcd(&self, elems: &[BigInt]) -> BigInt {
        match self {
            RingSpec::Z => {
                let mut g = BigInt::zero();
                for e in elems {
                    g = g.gcd(e);
                }
                g
            }
            RingSpec::Zmod { m } => {
                let mm = BigInt::from(*m);
                let mut g = mm.clone();
                for e in elems {
                    g = g.gcd(&self.reduce(e));
                }
                if g == mm {
                    BigInt::zero()
                } else {
                    g
                }
            }
        }
    }

    /// Does `a` divide `b` in the ring? Zero divides exactly zero.
    pub fn divides(&self, a: &BigInt, b: &BigInt) -> bool {
        let a = self.reduce(a);
        let b = self.reduce(b);
        match self {
            RingSpec::Z => {
                if a.is_zero() {
                    b.is_zero()
                } else {
                    (&b % &a).is_zero()
                }
            }
            RingSpec::Zmod { m } => {
                // (a) = (gcd(a, m)) as ideals of Z/m.
                let g = a.gcd(&BigInt::from(*m));
                if g.is_zero() {
                    b.is_zero()
                } else {
                    (&b % &g).is_zero()
                }
            }
        }
    }

    /// A solution x of a*x = b, when one exists.
    pub fn solve_scale(&self, a: &BigInt, b: &BigInt) -> Option<BigInt> {
        let a = self.reduce(a);
        let b = self.reduce(b);
        match self {
            RingSpec::Z => {
                if a.is_zero() {
                    return b.is_zero().then(BigInt::zero);
                }
                (&b % &a).is_zero().then(|| &b / &a)
            }
            RingSpec::Zmod { m } => {
                let mm = BigInt::from(*m);
                if a.is_zero() {
                    return b.is_zero().then(BigInt::zero);
                }
                let g = a.gcd(&mm);
                if !(&b % &g).is_zero() {
                    return None;
                }
                // Solve (a/g) x = b/g mod m/g, then lift.
                let sub = RingSpec::zmod((&mm / &g).to_u64().unwrap().max(2));
                let (aq, bq, mq) = (&a / &g, &b / &g, &mm / &g);
                if mq.is_one() {
                    return Some(BigInt::zero());
                }
                let inv = sub.inv(&aq)?;
                Some(self.reduce(&(inv * bq)))
            }
        }
    }

    /// Unit u and canonical generator g with u*a = g and (a) = (g).
    ///
    /// Over Z/m every element is a unit multiple of its canonical divisor
    /// representative; the witness unit is found by lifting an inverse mod
    /// m/g to a residue coprime to m.
    pub fn associate_unit(&self, a: &BigInt) -> (BigInt, BigInt) {
        let a = self.reduce(a);
        match self {
            RingSpec::Z => {
                if a.is_negative() {
                    (BigInt::from(-1), -a)
                } else {
                    (BigInt::one(), a)
                }
            }
            RingSpec::Zmod { m } => {
                let mm = BigInt::from(*m);
                if a.is_zero() {
                    return (BigInt::one(), BigInt::zero());
                }
                let g = a.gcd(&mm);
                let mq = &mm / &g;
                if mq.is_one() {
                    // a generates the same ideal as m, i.e. zero; cannot
                    // happen for canonical nonzero a < m.
                    return (BigInt::one(), BigInt::zero());
                }
                let aq = &a / &g;
                let eg = aq.extended_gcd(&mq);
                debug_assert!(eg.gcd.is_one());
                let v = eg.x.mod_floor(&mq);
                // Lift v to a unit mod m along v + t*(m/g).
                let mut u = v.clone();
                loop {
                    if u.gcd(&mm).is_one() {
                        break;
                    }
                    u += &mq;
                    debug_assert!(u < &mm + &mq);
                }
                let u = self.reduce(&u);
                debug_assert_eq!(self.mul(&u, &a), g);
                (u, g)
            }
        }
    }

    /// Canonical generator g of (elems) plus coefficients c with sum(c_i *
    /// elems_i) = g in the ring.
    pub fn bezout(&self, elems: &[BigInt]) -> (BigInt, Vec<BigInt>) {
        match self {
            RingSpec::Z => {
                let mut g = BigInt::zero();
                let mut coeffs: Vec<BigInt> = Vec::with_capacity(elems.len());
                for e in elems {
                    if g.is_zero() && e.is_zero() {
                        coeffs.push(BigInt::zero());
                        continue;
                    }
                    let eg = g.extended_gcd(e);
                    for c in coeffs.iter_mut() {
                        *c = &*c * &eg.x;
                    }
                    coeffs.push(eg.y.clone());
                    g = eg.gcd;
                }
                if g.is_negative() {
                    g = -g;
                    for c in coeffs.iter_mut() {
                        *c = -&*c;
                    }
                }
                (g, coeffs)
            }
            RingSpec::Zmod { m } => {
                let z = RingSpec::Z;
                let mut lifted: Vec<BigInt> = elems.iter().map(|e| self.reduce(e)).collect();
                lifted.push(BigInt::from(*m));
                let (g_int, mut coeffs) = z.bezout(&lifted);
                coeffs.pop();
                let coeffs = coeffs.iter().map(|c| self.reduce(c)).collect();
                let g = if g_int == BigInt::from(*m) {
                    BigInt::zero()
                } else {
                    g_int
                };
                (g, coeffs)
            }
        }
    }

    /// Uniform random canonical element; a small symmetric box for Z.
    pub fn random_elem<R: Rng>(&self, rng: &mut R) -> BigInt {
        match self {
            RingSpec::Z => BigInt::from(rng.gen_range(-4i64..=4)),
            RingSpec::Zmod { m } => BigInt::from(rng.gen_range(0..*m)),
        }
    }

    /// All canonical elements, for finite rings.
    pub fn all_elements(&self) -> Result<Vec<BigInt>> {
        match self {
            RingSpec::Z => Err(Error::InfiniteRing),
            RingSpec::Zmod { m } => Ok((0..*m).map(BigInt::from).collect()),
        }
    }

    /// All units, for finite rings.
    pub fn all_units(&self) -> Result<Vec<BigInt>> {
        Ok(self
            .all_elements()?
            .into_iter()
            .filter(|x| self.is_unit(x))
            .collect())
    }
}

/// is_unit as a free function mirroring the operation-level API.
pub fn is_unit(r: &BigInt, ring: RingSpec) -> bool {
    ring.is_unit(r)
}

/// ideal_gcd as a free function mirroring the operation-level API.
pub fn ideal_gcd(elems: &[BigInt], ring: RingSpec) -> BigInt {
    ring.ideal_gcd(elems)
}

/// ring_profile as a free function mirroring the operation-level API.
pub fn ring_profile(ring: RingSpec) -> RingProfile {
    ring.profile()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn units_of_z_and_zmod4() {
        assert!(is_unit(&b(-1), RingSpec::Z));
        assert!(!is_unit(&b(2), RingSpec::Z));
        assert!(is_unit(&b(3), RingSpec::zmod(4)));
        assert!(!is_unit(&b(2), RingSpec::zmod(4)));
    }

    #[test]
    fn ideal_gcd_examples() {
        assert_eq!(ideal_gcd(&[b(4), b(6)], RingSpec::Z), b(2));
        assert_eq!(ideal_gcd(&[], RingSpec::Z), b(0));
        assert_eq!(ideal_gcd(&[b(2), b(3)], RingSpec::zmod(6)), b(1));
    }

    /// Brute-force oracle: the ideal generated by elems inside Z/m,
    /// enumerated as a set, must equal the set of multiples of the gcd.
    #[test]
    fn ideal_gcd_matches_bruteforce_ideal_enumeration() {
        for m in 2u64..=12 {
            let ring = RingSpec::zmod(m);
            let elems_list: Vec<Vec<i64>> = vec![
                vec![],
                vec![0],
                vec![2, 3],
                vec![4, 6],
                vec![2],
                vec![3, 9],
                vec![m as i64 - 1],
                vec![2, 4, 8],
            ];
            for elems in elems_list {
                let elems: Vec<BigInt> = elems.into_iter().map(BigInt::from).collect();
                let g = ring.ideal_gcd(&elems);
                let mut ideal = std::collections::BTreeSet::new();
                // Closure of {0} under adding r*e for all r, e.
                ideal.insert(BigInt::zero());
                loop {
                    let mut grew = false;
                    let snapshot: Vec<BigInt> = ideal.iter().cloned().collect();
                    for x in &snapshot {
                        for e in &elems {
                            for r in 0..m {
                                let y = ring.add(x, &ring.mul(&BigInt::from(r), e));
                                if ideal.insert(y) {
                                    grew = true;
                                }
                            }
                        }
                    }
                    if !grew {
                        break;
                    }
                }
                let expected: std::collections::BTreeSet<BigInt> =
                    (0..m).map(|r| ring.mul(&BigInt::from(r), &g)).collect();
                assert_eq!(ideal, expected, "ideal mismatch for m={m}");
            }
        }
    }

    #[test]
    fn profiles() {
        let p = ring_profile(RingSpec::Z);
        assert_eq!((p.sr, p.usr, p.is_pid, p.characteristic), (2, 2, true, 0));
        let p = ring_profile(RingSpec::zmod(2));
        assert_eq!((p.sr, p.usr, p.is_pid, p.characteristic), (1, 1, true, 2));
        let p = ring_profile(RingSpec::zmod(12));
        assert_eq!((p.sr, p.usr, p.is_pid, p.characteristic), (1, 1, false, 12));
    }

    #[test]
    fn ideal_gcd_list_algebra() {
        let ring = RingSpec::zmod(12);
        let xs = [b(4), b(6), b(4)];
        let ys = [b(6), b(4)];
        assert_eq!(ring.ideal_gcd(&xs), ring.ideal_gcd(&ys));
        assert_eq!(ring.ideal_gcd(&[b(8)]), b(4));
        for r in 0..12 {
            let r = b(r);
            let unit_ideal = ring.is_unit(&ring.ideal_gcd(std::slice::from_ref(&r)));
            let spans = (0..12).any(|c| ring.mul(&b(c), &r) == b(1));
            assert_eq!(unit_ideal, spans);
        }
    }

    #[test]
    fn associate_unit_is_a_unit_witness() {
        for m in [4u64, 6, 8, 9, 12, 30] {
            let ring = RingSpec::zmod(m);
            for a in 0..m {
                let a = b(a as i64);
                let (u, g) = ring.associate_unit(&a);
                assert!(ring.is_unit(&u), "u not a unit for a={a}, m={m}");
                assert_eq!(ring.mul(&u, &a), g);
                assert_eq!(g, ring.ideal_gcd(std::slice::from_ref(&a)));
            }
        }
    }

    #[test]
    fn bezout_certificates() {
        for (elems, ring) in [
            (vec![b(4), b(6)], RingSpec::Z),
            (vec![b(0), b(0)], RingSpec::Z),
            (vec![b(-15), b(35), b(21)], RingSpec::Z),
            (vec![b(2), b(3)], RingSpec::zmod(6)),
            (vec![b(4), b(6)], RingSpec::zmod(8)),
            (vec![b(0)], RingSpec::zmod(9)),
        ] {
            let (g, coeffs) = ring.bezout(&elems);
            assert_eq!(g, ring.ideal_gcd(&elems));
            let mut acc = BigInt::zero();
            for (c, e) in coeffs.iter().zip(&elems) {
                acc = ring.add(&acc, &ring.mul(c, e));
            }
            assert_eq!(acc, ring.reduce(&g), "bezout failed on {elems:?}");
        }
    }

    #[test]
    fn divisibility_with_zero() {
        let ring = RingSpec::Z;
        assert!(ring.divides(&b(0), &b(0)));
        assert!(!ring.divides(&b(0), &b(3)));
        assert!(ring.divides(&b(3), &b(0)));
        let ring = RingSpec::zmod(12);
        assert!(!ring.divides(&b(8), &b(2)), "(8) = (4) does not contain 2");
        assert!(ring.divides(&b(8), &b(4)), "(8) = (4) contains 4");
    }

    #[test]
    fn divisibility_zmod_matches_ideal_membership() {
        for m in [6u64, 8, 12] {
            let ring = RingSpec::zmod(m);
            for a in 0..m as i64 {
                for bb in 0..m as i64 {
                    let lhs = ring.divides(&b(a), &b(bb));
                    let rhs = (0..m as i64).any(|x| ring.mul(&b(a), &b(x)) == b(bb));
                    assert_eq!(lhs, rhs, "a={a} b={bb} m={m}");
                }
            }
        }
    }

    #[test]
    fn solve_scale_solutions_verify() {
        for m in [6u64, 8, 12] {
            let ring = RingSpec::zmod(m);
            for a in 0..m as i64 {
                for bb in 0..m as i64 {
                    match ring.solve_scale(&b(a), &b(bb)) {
                        Some(x) => assert_eq!(ring.mul(&b(a), &x), ring.reduce(&b(bb))),
                        None => assert!(!ring.divides(&b(a), &b(bb))),
                    }
                }
            }
        }
    }

    #[test]
    fn primality_profile_consistency() {
        assert!(RingSpec::zmod(97).is_pid());
        assert!(!RingSpec::zmod(91).is_pid());
        assert!(RingSpec::zmod(2).is_field());
        assert!(!RingSpec::zmod(4).is_field());
    }
}
