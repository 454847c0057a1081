//! Stability range calculator for the symplectic-style homology of
//! automorphism groups of stabilized formed spaces.
//!
//! Two regimes share one offset constant c: c = 0 over a principal ideal
//! ring, c = 2*usr + 2 otherwise. With constant coefficients the
//! stabilization map on degree-i homology is an epimorphism for
//! i <= (n - c)/3 and a monomorphism for i <= (n - c - 3)/3 when n is odd
//! (every degree when n is even). With polynomial coefficients of degree r
//! the map is an epimorphism for i <= (n - c - 3r + 1)/3 and an
//! isomorphism for i <= (n - c - 3r - 2)/3. All divisions are floors; at
//! n = 0 there is no stabilization map and both ranges are empty.

use fsb_core::{Error, Result, RingSpec};
use serde::Serialize;

/// A single range query: ambient stabilization count, coefficient ring,
/// and an optional polynomial coefficient degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RangeQuery {
    pub n: i64,
    pub ring: RingSpec,
    pub coefficient_degree: Option<i64>,
}

impl RangeQuery {
    pub fn new(n: i64, ring: RingSpec, coefficient_degree: Option<i64>) -> Result<Self> {
        if n < 0 {
            return Err(Error::InvalidInput(format!("n must be nonnegative, got {n}")));
        }
        if let Some(r) = coefficient_degree {
            if r < 0 {
                return Err(Error::InvalidInput(format!(
                    "coefficient degree must be nonnegative, got {r}"
                )));
            }
        }
        Ok(RangeQuery { n, ring, coefficient_degree })
    }
}

/// A set of homological degrees of the form {0, 1, ..., max}, possibly
/// empty or all of them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DegreeRange {
    Empty,
    UpTo { max: i64 },
    All,
}

impl DegreeRange {
    fn bounded(max: i64) -> DegreeRange {
        if max < 0 {
            DegreeRange::Empty
        } else {
            DegreeRange::UpTo { max }
        }
    }

    pub fn contains(&self, i: i64) -> bool {
        match self {
            DegreeRange::Empty => false,
            DegreeRange::UpTo { max } => (0..=*max).contains(&i),
            DegreeRange::All => i >= 0,
        }
    }

    /// Compact cell text for tables.
    pub fn cell(&self) -> String {
        match self {
            DegreeRange::Empty => "empty".into(),
            DegreeRange::UpTo { max } => format!("i <= {max}"),
            DegreeRange::All => "all i".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityRanges {
    pub n: i64,
    pub ring: RingSpec,
    pub coefficient_degree: Option<i64>,
    /// Offset constant: 0 over a principal ideal ring, 2*usr + 2 otherwise.
    pub c: i64,
    pub epi_range: DegreeRange,
    /// Monomorphism range for constant coefficients, isomorphism range for
    /// polynomial coefficients; `second_range_kind` says which.
    pub mono_or_iso_range: DegreeRange,
    pub second_range_kind: &'static str,
}

/// The ranges in which stabilization is surjective respectively injective
/// or bijective on homology.
pub fn stability_ranges(q: &RangeQuery) -> Result<StabilityRanges> {
    let q = RangeQuery::new(q.n, q.ring, q.coefficient_degree)?;
    let n = q.n;
    let c = if q.ring.is_pid() { 0 } else { 2 * q.ring.usr() as i64 + 2 };
    let (epi, second, kind) = match (n, q.coefficient_degree) {
        // No stabilization map exists at n = 0: empty ranges by convention.
        (0, r) => (DegreeRange::Empty, DegreeRange::Empty, if r.is_some() { "iso" } else { "mono" }),
        (_, None) => {
            let epi = DegreeRange::bounded((n - c).div_euclid(3));
            let mono = if n % 2 == 0 {
                DegreeRange::All
            } else {
                DegreeRange::bounded((n - c - 3).div_euclid(3))
            };
            (epi, mono, "mono")
        }
        (_, Some(r)) => {
            let epi = DegreeRange::bounded((n - c - 3 * r + 1).div_euclid(3));
            let iso = DegreeRange::bounded((n - c - 3 * r - 2).div_euclid(3));
            (epi, iso, "iso")
        }
    };
    Ok(StabilityRanges {
        n,
        ring: q.ring,
        coefficient_degree: q.coefficient_degree,
        c,
        epi_range: epi,
        mono_or_iso_range: second,
        second_range_kind: kind,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, ring: RingSpec, r: Option<i64>) -> StabilityRanges {
        stability_ranges(&RangeQuery { n, ring, coefficient_degree: r }).unwrap()
    }

    #[test]
    fn constant_coefficients_over_the_integers() {
        let s = q(12, RingSpec::Z, None);
        assert_eq!(s.c, 0);
        assert_eq!(s.epi_range, DegreeRange::UpTo { max: 4 });
        assert_eq!(s.mono_or_iso_range, DegreeRange::All);
        assert_eq!(s.second_range_kind, "mono");
    }

    #[test]
    fn degree_one_coefficients_over_the_integers() {
        let s = q(12, RingSpec::Z, Some(1));
        assert_eq!(s.epi_range, DegreeRange::UpTo { max: 3 });
        assert_eq!(s.mono_or_iso_range, DegreeRange::UpTo { max: 2 });
        assert_eq!(s.second_range_kind, "iso");
    }

    #[test]
    fn no_map_no_ranges() {
        let s = q(0, RingSpec::zmod(6), None);
        assert_eq!(s.epi_range, DegreeRange::Empty);
        assert_eq!(s.mono_or_iso_range, DegreeRange::Empty);
    }

    #[test]
    fn odd_rank_monomorphism_bound() {
        let s = q(9, RingSpec::Z, None);
        assert_eq!(s.epi_range, DegreeRange::UpTo { max: 3 });
        assert_eq!(s.mono_or_iso_range, DegreeRange::UpTo { max: 2 });
    }

    #[test]
    fn composite_modulus_pays_the_offset() {
        let s = q(7, RingSpec::zmod(4), None);
        assert_eq!(s.c, 4);
        assert_eq!(s.epi_range, DegreeRange::UpTo { max: 1 });
        assert_eq!(s.mono_or_iso_range, DegreeRange::UpTo { max: 0 });
        // A prime modulus is a field, hence a principal ideal ring.
        assert_eq!(q(7, RingSpec::zmod(5), None).c, 0);
    }

    #[test]
    fn negative_bounds_collapse_to_empty() {
        let s = q(10, RingSpec::Z, Some(3));
        assert_eq!(s.epi_range, DegreeRange::UpTo { max: 0 });
        assert_eq!(s.mono_or_iso_range, DegreeRange::Empty);
        let s = q(3, RingSpec::zmod(4), None);
        assert_eq!(s.epi_range, DegreeRange::Empty);
        assert_eq!(s.mono_or_iso_range, DegreeRange::Empty);
    }

    #[test]
    fn negative_inputs_are_rejected() {
        assert!(stability_ranges(&RangeQuery { n: -1, ring: RingSpec::Z, coefficient_degree: None })
            .is_err());
        assert!(stability_ranges(&RangeQuery { n: 3, ring: RingSpec::Z, coefficient_degree: Some(-2) })
            .is_err());
    }

    #[test]
    fn membership_helper_matches_the_cells() {
        assert!(DegreeRange::UpTo { max: 2 }.contains(2));
        assert!(!DegreeRange::UpTo { max: 2 }.contains(3));
        assert!(!DegreeRange::UpTo { max: 2 }.contains(-1));
        assert!(DegreeRange::All.contains(100));
        assert!(!DegreeRange::Empty.contains(0));
        assert_eq!(DegreeRange::UpTo { max: 4 }.cell(), "i <= 4");
    }
}
