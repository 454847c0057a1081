//! Finite enumeration of arc complexes and unimodular-vector complexes,
//! simplicial links, integral reduced homology, connectivity verdicts
//! against the closed-form bounds, and the ordered-simplex counting
//! identity for destabilizations.
//!
//! Connectivity is verified homologically: a report certifies vanishing of
//! reduced integral homology through the predicted range, which is the
//! checkable shadow of the homotopical statement (the fundamental group is
//! not computed). Complexes are built over finite rings only; over the
//! integers the vertex sets are infinite and no truncation is offered,
//! since a truncated complex would be a different object. Simplex growth
//! re-tests the full joint condition at every extension because
//! unimodularity of a set is not implied by pairwise conditions.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arcs::{is_arc, is_b_simplex, is_d_simplex, is_nonseparating};
use crate::error::{Error, Result};
use crate::exactlin::{is_unimodular_rows, smith_normal_form, Mat};
use crate::formed::FormedSpace;
use crate::genus::arc_genus;
use crate::groups::aut_group;
use crate::ring::RingSpec;

/// Vector-enumeration budget: |R|^rank (and |R|^generators for coset
/// complexes) must stay at or below this.
const ENUM_BUDGET: u128 = 1 << 20;

/// Which complex to build.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComplexKind {
    /// Vertices are arcs; simplices are jointly unimodular vector sets.
    Aalg,
    /// Vertices are non-separating arcs; simplices are sets whose pairing
    /// rows together with the boundary are unimodular.
    B,
    /// Subcomplex of `B` whose simplices admit an ordering with pairing +1
    /// from earlier to later.
    D,
    /// Vertices are the unimodular vectors in base + span(subgens);
    /// simplices are jointly unimodular vector sets.
    U {
        base: Vec<BigInt>,
        subgens: Vec<Vec<BigInt>>,
    },
}

/// A finite simplicial complex on enumerated vectors, downward closed up
/// to `dim_cap`.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    pub ring: RingSpec,
    /// Vertex vectors in ambient coordinates, lexicographically sorted.
    pub vertices: Vec<Vec<BigInt>>,
    /// Level p holds the p-simplices as sorted vertex-index tuples, the
    /// tuples themselves in lexicographic order. Length dim_cap + 1.
    pub simplices_by_dim: Vec<Vec<Vec<usize>>>,
    pub kind: ComplexKind,
    pub dim_cap: usize,
}

impl SimplicialComplex {
    /// Largest dimension with at least one simplex, or None when empty.
    pub fn dim(&self) -> Option<usize> {
        (0..self.simplices_by_dim.len())
            .rev()
            .find(|&p| !self.simplices_by_dim[p].is_empty())
    }

    /// Membership test for a sorted index tuple.
    pub fn contains(&self, simplex: &[usize]) -> bool {
        if simplex.is_empty() {
            return true;
        }
        let p = simplex.len() - 1;
        self.simplices_by_dim
            .get(p)
            .map_or(false, |level| {
                level.binary_search_by(|probe| probe.as_slice().cmp(simplex)).is_ok()
            })
    }

    pub fn counts(&self) -> Vec<usize> {
        self.simplices_by_dim.iter().map(|l| l.len()).collect()
    }
}

fn enumeration_budget_check(count: usize, power: usize) -> Result<()> {
    let total = (count as u128).checked_pow(power as u32);
    if total.map_or(true, |t| t > ENUM_BUDGET) {
        return Err(Error::BudgetExceeded(format!(
            "enumerating {count}^{power} vectors exceeds the budget of {ENUM_BUDGET}"
        )));
    }
    Ok(())
}

/// All vectors of the given length over the listed elements, in
/// lexicographic order.
fn all_vectors(elems: &[BigInt], len: usize) -> Vec<Vec<BigInt>> {
    let mut out = Vec::new();
    let mut stack = vec![BigInt::zero(); len];
    fn rec(elems: &[BigInt], stack: &mut Vec<BigInt>, pos: usize, out: &mut Vec<Vec<BigInt>>) {
        if pos == stack.len() {
            out.push(stack.clone());
            return;
        }
        for e in elems {
            stack[pos] = e.clone();
            rec(elems, stack, pos + 1, out);
        }
    }
    if len == 0 {
        return vec![Vec::new()];
    }
    rec(elems, &mut stack, 0, &mut out);
    out
}

/// Joint unimodularity of a set of vectors: they generate a split free
/// summand, detected by an all-unit Smith form of the matrix with the
/// vectors as rows.
fn jointly_unimodular(ring: RingSpec, vs: &[Vec<BigInt>]) -> bool {
    let n = vs[0].len();
    let rows = Mat::from_fn(ring, vs.len(), n, |i, j| vs[i][j].clone());
    is_unimodular_rows(&rows)
}

fn passes(a: &FormedSpace, kind: &ComplexKind, vs: &[Vec<BigInt>]) -> bool {
    match kind {
        ComplexKind::Aalg | ComplexKind::U { .. } => jointly_unimodular(a.ring, vs),
        ComplexKind::B => is_b_simplex(a, vs),
        ComplexKind::D => is_d_simplex(a, vs).is_some(),
    }
}

fn vertex_vectors(a: &FormedSpace, kind: &ComplexKind) -> Result<Vec<Vec<BigInt>>> {
    let elems = a.ring.all_elements()?;
    let mut out: Vec<Vec<BigInt>> = match kind {
        ComplexKind::Aalg => {
            enumeration_budget_check(elems.len(), a.rank)?;
            all_vectors(&elems, a.rank)
                .into_iter()
                .filter(|v| is_arc(a, v))
                .collect()
        }
        ComplexKind::B | ComplexKind::D => {
            enumeration_budget_check(elems.len(), a.rank)?;
            all_vectors(&elems, a.rank)
                .into_iter()
                .filter(|v| is_nonseparating(a, v))
                .collect()
        }
        ComplexKind::U { base, subgens } => {
            if base.len() != a.rank || subgens.iter().any(|g| g.len() != a.rank) {
                return Err(Error::InvalidInput(
                    "coset data does not match the ambient rank".into(),
                ));
            }
            enumeration_budget_check(elems.len(), subgens.len())?;
            let mut seen: BTreeSet<Vec<BigInt>> = BTreeSet::new();
            for coeffs in all_vectors(&elems, subgens.len()) {
                let mut v = base.clone();
                for (c, g) in coeffs.iter().zip(subgens) {
                    for (vi, gi) in v.iter_mut().zip(g) {
                        *vi = a.ring.add(vi, &a.ring.mul(c, gi));
                    }
                }
                let v: Vec<BigInt> = v.iter().map(|x| a.ring.reduce(x)).collect();
                seen.insert(v);
            }
            seen.into_iter()
                .filter(|v| jointly_unimodular(a.ring, std::slice::from_ref(v)))
                .collect()
        }
    };
    out.sort();
    out.dedup();
    Ok(out)
}

/// Enumerate the complex: all vertices passing the kind's predicate, then
/// each level grown by extending the previous level with higher-indexed
/// vertices and re-testing the full simplex condition.
pub fn build_complex(a: &FormedSpace, kind: ComplexKind, dim_cap: usize) -> Result<SimplicialComplex> {
    let vertices = vertex_vectors(a, &kind)?;
    let mut simplices_by_dim: Vec<Vec<Vec<usize>>> = vec![Vec::new(); dim_cap + 1];
    simplices_by_dim[0] = (0..vertices.len()).map(|i| vec![i]).collect();
    for p in 1..=dim_cap {
        let (lower, upper) = simplices_by_dim.split_at_mut(p);
        let prev = &lower[p - 1];
        let level = &mut upper[0];
        for simplex in prev {
            let last = *simplex.last().expect("nonempty simplex");
            for v in (last + 1)..vertices.len() {
                let mut candidate = simplex.clone();
                candidate.push(v);
                let vs: Vec<Vec<BigInt>> =
                    candidate.iter().map(|&i| vertices[i].clone()).collect();
                if passes(a, &kind, &vs) {
                    level.push(candidate);
                }
            }
        }
        if level.is_empty() {
            break;
        }
    }
    Ok(SimplicialComplex {
        ring: a.ring,
        vertices,
        simplices_by_dim,
        kind,
        dim_cap,
    })
}

/// The link of a stored simplex: all simplices disjoint from it whose
/// union with it is stored, re-indexed on the link's own vertex list. The
/// result carries dimension cap `dim_cap - |sigma|` since deeper
/// cofaces of `sigma` are not stored.
pub fn link(cx: &SimplicialComplex, sigma: &[usize]) -> Result<SimplicialComplex> {
    let mut s = sigma.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.len() != sigma.len() || !cx.contains(&s) || s.is_empty() {
        return Err(Error::NotASimplex(format!(
            "{sigma:?} is not a stored simplex"
        )));
    }
    let k = s.len();
    let new_cap = cx.dim_cap.saturating_sub(k);
    let mut link_vertex_ids: Vec<usize> = Vec::new();
    let mut simplices: Vec<Vec<Vec<usize>>> = vec![Vec::new(); new_cap + 1];
    for (p, level) in cx.simplices_by_dim.iter().enumerate() {
        if p < k || p - k > new_cap {
            continue;
        }
        for simplex in level {
            if !s.iter().all(|v| simplex.binary_search(v).is_ok()) {
                continue;
            }
            let tau: Vec<usize> = simplex.iter().copied().filter(|v| !s.contains(v)).collect();
            if tau.len() == 1 {
                link_vertex_ids.push(tau[0]);
            }
            simplices[p - k].push(tau);
        }
    }
    link_vertex_ids.sort_unstable();
    let reindex: HashMap<usize, usize> = link_vertex_ids
        .iter()
        .enumerate()
        .map(|(new, &old)| (old, new))
        .collect();
    for level in &mut simplices {
        for simplex in level.iter_mut() {
            for v in simplex.iter_mut() {
                *v = reindex[v];
            }
        }
        level.sort();
    }
    Ok(SimplicialComplex {
        ring: cx.ring,
        vertices: link_vertex_ids
            .iter()
            .map(|&i| cx.vertices[i].clone())
            .collect(),
        simplices_by_dim: simplices,
        kind: cx.kind.clone(),
        dim_cap: new_cap,
    })
}

/// Reduced integral homology and the connectivity verdict extracted from it.
#[derive(Clone, Debug)]
pub struct HomologyReport {
    /// Reduced Betti numbers; index d holds degree d - 1, so index 0 is
    /// the augmentation degree -1.
    pub reduced_betti: Vec<u64>,
    /// Torsion invariant factors (canonical, each > 1) per degree, indexed
    /// like `reduced_betti`.
    pub torsion: Vec<Vec<BigInt>>,
    /// Largest c with vanishing reduced homology in all degrees <= c among
    /// those computed; -2 when even the augmentation degree is nonzero.
    pub verified_connectivity: i64,
    /// Greatest degree computed (inclusive); degrees -1..=max_degree.
    pub max_degree: i64,
    /// Closed-form bound, when the report came from a connectivity check.
    pub predicted_bound: Option<i64>,
    /// Human-readable provenance of the bound.
    pub formula: Option<String>,
}

impl HomologyReport {
    /// Reduced homology in one degree as (betti, torsion factors).
    pub fn degree(&self, d: i64) -> Option<(u64, &[BigInt])> {
        let idx = usize::try_from(d + 1).ok()?;
        if idx >= self.reduced_betti.len() {
            return None;
        }
        Some((self.reduced_betti[idx], &self.torsion[idx]))
    }

    pub fn is_trivial_through(&self, c: i64) -> bool {
        self.verified_connectivity >= c
    }
}

/// Sparse integer elimination on unit pivots with a dense Smith fallback
/// for whatever residue remains. Returns (rank, torsion factors > 1).
fn sparse_rank_and_torsion(
    rows_n: usize,
    cols_n: usize,
    entries: Vec<(usize, usize, i64)>,
) -> (usize, Vec<BigInt>) {
    let mut row_data: Vec<HashMap<usize, i64>> = vec![HashMap::new(); rows_n];
    let mut col_rows: Vec<HashSet<usize>> = vec![HashSet::new(); cols_n];
    for (r, c, v) in entries {
        if v != 0 {
            row_data[r].insert(c, v);
            col_rows[c].insert(r);
        }
    }
    let mut row_alive = vec![true; rows_n];
    let mut col_alive = vec![true; cols_n];
    // Lazy priority queue on column occupancy: stale keys are skipped on
    // pop, and every size change pushes a fresh key.
    let mut queue: BTreeSet<(usize, usize)> = (0..cols_n)
        .filter(|&c| !col_rows[c].is_empty())
        .map(|c| (col_rows[c].len(), c))
        .collect();
    let mut units = 0usize;
    let mut overflow = false;

    'outer: while let Some(&(size, c)) = queue.iter().next() {
        queue.remove(&(size, c));
        if !col_alive[c] || size != col_rows[c].len() || col_rows[c].is_empty() {
            continue;
        }
        // A unit entry in this column, preferring the sparsest row. A
        // column with no unit entry is left for the dense fallback; any
        // later change to it enqueues a fresh key, so it is retried.
        let pivot_row = col_rows[c]
            .iter()
            .filter(|&&r| row_data[r][&c].abs() == 1)
            .min_by_key(|&&r| (row_data[r].len(), r))
            .copied();
        let Some(pr) = pivot_row else {
            continue;
        };
        let pivot_val = row_data[pr][&c];
        let pivot_cols: Vec<(usize, i64)> = row_data[pr]
            .iter()
            .filter(|&(&pc, _)| pc != c)
            .map(|(&pc, &v)| (pc, v))
            .collect();
        let victims: Vec<usize> = col_rows[c].iter().filter(|&&r| r != pr).copied().collect();
        // First pass: compute every update with checked arithmetic, so an
        // overflow escalates from a consistent, unmodified state.
        let mut updates: Vec<(usize, Vec<(usize, i64)>)> = Vec::with_capacity(victims.len());
        for &r in &victims {
            let a = row_data[r][&c];
            let factor = a * pivot_val;
            let mut row_updates = Vec::with_capacity(pivot_cols.len());
            for (pc, pv) in &pivot_cols {
                let cur = row_data[r].get(pc).copied().unwrap_or(0);
                let next = pv
                    .checked_mul(factor)
                    .and_then(|scaled| cur.checked_sub(scaled));
                let Some(next) = next else {
                    overflow = true;
                    break 'outer;
                };
                row_updates.push((*pc, next));
            }
            updates.push((r, row_updates));
        }
        // Commit: retire the pivot row and column, then apply the row
        // operations (valid unimodular operations since the pivot is a
        // unit).
        units += 1;
        row_alive[pr] = false;
        col_alive[c] = false;
        for (pc, _) in &pivot_cols {
            let old = col_rows[*pc].len();
            col_rows[*pc].remove(&pr);
            if col_rows[*pc].len() != old && !col_rows[*pc].is_empty() {
                queue.insert((col_rows[*pc].len(), *pc));
            }
        }
        col_rows[c].clear();
        for (r, row_updates) in updates {
            row_data[r].remove(&c);
            for (pc, next) in row_updates {
                let old = col_rows[pc].len();
                if next == 0 {
                    row_data[r].remove(&pc);
                    col_rows[pc].remove(&r);
                } else {
                    row_data[r].insert(pc, next);
                    col_rows[pc].insert(r);
                }
                if col_rows[pc].len() != old && !col_rows[pc].is_empty() {
                    queue.insert((col_rows[pc].len(), pc));
                }
            }
        }
    }

    // Dense Smith form of whatever survives: columns without unit entries,
    // and the whole active region if integer overflow stopped the sweep.
    let _ = overflow;
    let live_cols: Vec<usize> = (0..cols_n)
        .filter(|&c| col_alive[c] && !col_rows[c].is_empty())
        .collect();
    let live_rows: Vec<usize> = (0..rows_n)
        .filter(|&r| row_alive[r] && !row_data[r].is_empty())
        .collect();
    let mut rank = units;
    let mut torsion = Vec::new();
    if !live_cols.is_empty() && !live_rows.is_empty() {
        let col_pos: HashMap<usize, usize> =
            live_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut dense = Mat::zero(RingSpec::z(), live_rows.len(), live_cols.len());
        for (i, &r) in live_rows.iter().enumerate() {
            for (&c, &v) in &row_data[r] {
                if let Some(&j) = col_pos.get(&c) {
                    dense.set(i, j, BigInt::from(v));
                }
            }
        }
        let snf = smith_normal_form(&dense);
        for d in snf.diag() {
            if d.is_zero() {
                continue;
            }
            rank += 1;
            let d = d.abs();
            if !d.is_one() {
                torsion.push(d);
            }
        }
    }
    torsion.sort();
    (rank, torsion)
}

/// Boundary matrix from level p to level p-1 as triples; level -1 is the
/// augmentation (a single row hit by every vertex with coefficient one).
fn boundary_entries(cx: &SimplicialComplex, p: usize) -> (usize, usize, Vec<(usize, usize, i64)>) {
    let cols = &cx.simplices_by_dim[p];
    if p == 0 {
        let entries = (0..cols.len()).map(|j| (0usize, j, 1i64)).collect();
        return (1, cols.len(), entries);
    }
    let rows = &cx.simplices_by_dim[p - 1];
    let mut entries = Vec::new();
    for (j, simplex) in cols.iter().enumerate() {
        let mut sign = 1i64;
        for omit in 0..simplex.len() {
            let mut face: Vec<usize> = simplex.clone();
            face.remove(omit);
            let i = rows
                .binary_search_by(|probe| probe.as_slice().cmp(&face))
                .expect("complexes are downward closed");
            entries.push((i, j, sign));
            sign = -sign;
        }
    }
    (rows.len(), cols.len(), entries)
}

/// Reduced integral homology in degrees -1..=max_degree. Needs the complex
/// built one level beyond the top degree, i.e. max_degree <= dim_cap - 1.
pub fn reduced_homology(cx: &SimplicialComplex, max_degree: i64) -> Result<HomologyReport> {
    if max_degree < -1 || max_degree + 1 > cx.dim_cap as i64 {
        return Err(Error::InvalidInput(format!(
            "homology degree {max_degree} outside -1..={}",
            cx.dim_cap as i64 - 1
        )));
    }
    let top = (max_degree + 1) as usize;
    // ranks[p] = rank of the boundary map from level p, for p in 0..=top;
    // rank_tor[p] also carries its torsion, which lands in degree p-1.
    let mut rank = vec![0usize; top + 1];
    let mut torsion_of = vec![Vec::new(); top + 1];
    for p in 0..=top {
        let (r, c, entries) = boundary_entries(cx, p);
        let (rk, tor) = sparse_rank_and_torsion(r, c, entries);
        rank[p] = rk;
        torsion_of[p] = tor;
    }
    let chain_rank = |d: i64| -> usize {
        if d == -1 {
            1
        } else {
            cx.simplices_by_dim[d as usize].len()
        }
    };
    let mut reduced_betti = Vec::new();
    let mut torsion = Vec::new();
    for d in -1..=max_degree {
        let out_rank = if d == -1 { 0 } else { rank[d as usize] };
        let in_rank = rank[(d + 1) as usize];
        let beta = chain_rank(d) - out_rank - in_rank;
        reduced_betti.push(beta as u64);
        torsion.push(torsion_of[(d + 1) as usize].clone());
    }
    let mut verified = -2i64;
    for (idx, d) in (-1..=max_degree).enumerate() {
        if reduced_betti[idx] == 0 && torsion[idx].is_empty() {
            verified = d;
        } else {
            break;
        }
    }
    Ok(HomologyReport {
        reduced_betti,
        torsion,
        verified_connectivity: verified,
        max_degree,
        predicted_bound: None,
        formula: None,
    })
}

fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

/// The closed-form connectivity bound for each complex kind, with its
/// provenance.
fn predicted_connectivity(a: &FormedSpace, kind: &ComplexKind) -> Result<(i64, String)> {
    let sr = a.ring.sr() as i64;
    match kind {
        ComplexKind::D => {
            let g = arc_genus(a)?.g_x as i64;
            if a.ring.is_pid() {
                Ok((
                    floor_div(g - 5, 3),
                    format!("(g_X - 5)/3 with g_X = {g} over a principal ideal ring"),
                ))
            } else {
                let u = a.ring.usr() as i64;
                Ok((
                    floor_div(g - 2 * u - 6, 3),
                    format!("(g_X - 2 usr - 6)/3 with g_X = {g}, usr = {u}"),
                ))
            }
        }
        ComplexKind::B => {
            let g = arc_genus(a)?.g_x as i64;
            Ok((
                g - sr - 3,
                format!("g_X - sr - 3 with g_X = {g}, sr = {sr}"),
            ))
        }
        ComplexKind::Aalg => {
            if !is_unimodular_rows(&a.del) {
                return Err(Error::HypothesisFailed(
                    "the arc-complex bound requires a surjective boundary".into(),
                ));
            }
            let rk = a.rank as i64;
            Ok((
                rk - sr - 2,
                format!("rank - sr - 2 with rank = {rk}, sr = {sr}"),
            ))
        }
        ComplexKind::U { subgens, .. } => {
            // Relative rank: the largest free direct summand of the ambient
            // module inside the span, read off the Smith form of the
            // generator matrix as its count of unit invariant factors.
            let r = if subgens.is_empty() {
                0
            } else {
                let gens = Mat::from_fn(a.ring, subgens.len(), a.rank, |i, j| {
                    subgens[i][j].clone()
                });
                smith_normal_form(&gens).unit_count() as i64
            };
            Ok((
                r - sr - 1,
                format!("r(M, N) - sr - 1 with r = {r}, sr = {sr}"),
            ))
        }
    }
}

/// Build the complex, compute homology through the predicted range plus
/// one degree, and report the verdict alongside the bound.
pub fn connectivity_report(
    a: &FormedSpace,
    kind: ComplexKind,
    dim_cap: usize,
) -> Result<HomologyReport> {
    let (bound, formula) = predicted_connectivity(a, &kind)?;
    let cx = build_complex(a, kind, dim_cap)?;
    let max_degree = (dim_cap as i64 - 1).min(bound + 1).max(-1);
    let mut report = reduced_homology(&cx, max_degree)?;
    report.predicted_bound = Some(bound);
    report.formula = Some(formula);
    Ok(report)
}

fn factorial(k: usize) -> u128 {
    (1..=k as u128).product()
}

/// Outcome of the ordered-simplex count against the coset index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountCheck {
    /// Ordered p-simplices of the disordered complex of the n-th X-power.
    pub lhs: u128,
    /// |Aut(X^n)| / |Aut(X^(n-p-1))|.
    pub rhs: u128,
    pub equal: bool,
}

/// Counting identity: ordered p-simplices of the disordered complex on the
/// n-th X-power against the index of the stabilizer coset. Over the
/// two-element field every ordering of a simplex is valid, so the
/// unordered count is scaled by (p+1)!; in any other characteristic the
/// valid ordering is unique.
pub fn destabilization_count_check(n: usize, p: usize, ring: RingSpec) -> Result<CountCheck> {
    if !ring.is_field() {
        return Err(Error::UnsupportedRing(
            "the counting identity needs a finite prime field".into(),
        ));
    }
    if p + 2 > n {
        return Err(Error::InvalidInput(format!(
            "p = {p} is outside the verified skeleton range of n = {n}"
        )));
    }
    let a = FormedSpace::x_power(ring, n);
    let cx = build_complex(&a, ComplexKind::D, p)?;
    let unordered = cx.simplices_by_dim[p].len() as u128;
    let orderings = if ring.modulus() == Some(2) {
        factorial(p + 1)
    } else {
        1
    };
    let lhs = unordered * orderings;
    let big = aut_group(&a, 0)?
        .order
        .expect("closed-form order for X-powers");
    let small = aut_group(&FormedSpace::x_power(ring, n - p - 1), 0)?
        .order
        .expect("closed-form order for X-powers");
    let equal = lhs * small == big;
    Ok(CountCheck {
        lhs,
        rhs: big / small,
        equal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arcs::cut;

    fn f2() -> RingSpec {
        RingSpec::zmod(2)
    }

    fn f3() -> RingSpec {
        RingSpec::zmod(3)
    }

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn bv(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| b(x)).collect()
    }

    /// A complex with every subset of 0..n as a simplex, on dummy vectors.
    fn full_simplex(n: usize) -> SimplicialComplex {
        let vertices: Vec<Vec<BigInt>> = (0..n).map(|i| vec![b(i as i64)]).collect();
        let mut simplices_by_dim: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n];
        for mask in 1u32..(1 << n) {
            let simplex: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            simplices_by_dim[simplex.len() - 1].push(simplex);
        }
        for level in &mut simplices_by_dim {
            level.sort();
        }
        SimplicialComplex {
            ring: f2(),
            vertices,
            simplices_by_dim,
            kind: ComplexKind::Aalg,
            dim_cap: n - 1,
        }
    }

    #[test]
    fn disordered_complex_of_the_third_x_power_is_a_hollow_triangle() {
        let a = FormedSpace::x_power(f2(), 3);
        let cx = build_complex(&a, ComplexKind::D, 2).unwrap();
        // Four arcs; the alternating vector (1,1,1) has zero pairing row,
        // so it separates: the three unit vectors remain.
        assert_eq!(
            cx.vertices,
            vec![bv(&[0, 0, 1]), bv(&[0, 1, 0]), bv(&[1, 0, 0])]
        );
        assert_eq!(cx.counts(), vec![3, 3, 0]);
        let rep = reduced_homology(&cx, 1).unwrap();
        assert_eq!(rep.reduced_betti, vec![0, 0, 1]);
        assert!(rep.torsion.iter().all(|t| t.is_empty()));
        assert_eq!(rep.verified_connectivity, 0);
    }

    #[test]
    fn vertex_count_anchors() {
        let b5 = build_complex(&FormedSpace::x_power(f2(), 5), ComplexKind::B, 1).unwrap();
        assert_eq!(b5.vertices.len(), 15);
        let d7 = build_complex(&FormedSpace::x_power(f2(), 7), ComplexKind::D, 0).unwrap();
        assert_eq!(d7.vertices.len(), 63);
        let d8 = build_complex(&FormedSpace::x_power(f2(), 8), ComplexKind::D, 1).unwrap();
        assert_eq!(d8.vertices.len(), 128);
    }

    #[test]
    fn vertex_predicates_match_a_brute_force_filter() {
        let a = FormedSpace::x_power(f3(), 3);
        let cx = build_complex(&a, ComplexKind::B, 0).unwrap();
        let elems = f3().all_elements().unwrap();
        let expected: Vec<Vec<BigInt>> = all_vectors(&elems, 3)
            .into_iter()
            .filter(|v| is_nonseparating(&a, v))
            .collect();
        assert_eq!(cx.vertices.len(), expected.len());
        assert_eq!(cx.vertices.len(), 8);
        let arcs = build_complex(&a, ComplexKind::Aalg, 0).unwrap();
        assert_eq!(arcs.vertices.len(), 9);
    }

    #[test]
    fn complexes_nest_as_subcomplexes() {
        for n in [4usize, 5] {
            let a = FormedSpace::x_power(f2(), n);
            let aalg = build_complex(&a, ComplexKind::Aalg, 2).unwrap();
            let bcx = build_complex(&a, ComplexKind::B, 2).unwrap();
            let dcx = build_complex(&a, ComplexKind::D, 2).unwrap();
            let to_vectors = |cx: &SimplicialComplex| -> HashSet<Vec<Vec<BigInt>>> {
                cx.simplices_by_dim
                    .iter()
                    .flatten()
                    .map(|s| s.iter().map(|&i| cx.vertices[i].clone()).collect())
                    .collect()
            };
            let av = to_vectors(&aalg);
            let bvs = to_vectors(&bcx);
            let dv = to_vectors(&dcx);
            assert!(dv.is_subset(&bvs), "D inside B at n = {n}");
            assert!(bvs.is_subset(&av), "B inside Aalg at n = {n}");
        }
    }

    #[test]
    fn link_of_a_vertex_in_the_full_simplex() {
        let cx = full_simplex(3);
        let lk = link(&cx, &[0]).unwrap();
        assert_eq!(lk.vertices.len(), 2);
        assert_eq!(lk.counts(), vec![2, 1]);
        // Maximal simplex: empty link.
        let top = link(&cx, &[0, 1, 2]).unwrap();
        assert!(top.vertices.is_empty());
        assert!(link(&cx, &[0, 0]).is_err());
    }

    #[test]
    fn links_in_the_disordered_complex_match_the_cut_space() {
        // Over F2 every link vertex lies "below" the simplex, so the link
        // is the disordered complex of the cut space under inclusion.
        let a = FormedSpace::x_power(f2(), 5);
        let cx = build_complex(&a, ComplexKind::D, 3).unwrap();
        for sigma_vectors in [vec![bv(&[1, 0, 0, 0, 0])], vec![bv(&[1, 0, 0, 0, 0]), bv(&[0, 1, 0, 0, 0])]] {
            let ids: Vec<usize> = sigma_vectors
                .iter()
                .map(|v| cx.vertices.binary_search(v).unwrap())
                .collect();
            let lk = link(&cx, &ids).unwrap();
            let (cut_space, incl) = cut(&a, &sigma_vectors).unwrap();
            let dcut = build_complex(&cut_space, ComplexKind::D, lk.dim_cap).unwrap();
            let mapped: BTreeSet<Vec<BigInt>> = dcut
                .vertices
                .iter()
                .map(|w| incl.mul_col(w).iter().map(|x| f2().reduce(x)).collect())
                .collect();
            let link_vertices: BTreeSet<Vec<BigInt>> = lk.vertices.iter().cloned().collect();
            assert_eq!(mapped, link_vertices, "sigma = {sigma_vectors:?}");
            // The identification is simplicial: counts agree level by level.
            assert_eq!(lk.counts(), dcut.counts(), "sigma = {sigma_vectors:?}");
        }
    }

    #[test]
    fn full_simplex_has_no_reduced_homology() {
        let cx = full_simplex(4);
        let rep = reduced_homology(&cx, 2).unwrap();
        assert_eq!(rep.reduced_betti, vec![0, 0, 0, 0]);
        assert_eq!(rep.verified_connectivity, 2);
    }

    #[test]
    fn empty_complex_has_augmentation_homology() {
        let a = FormedSpace::x_power(f2(), 1);
        // No non-separating arcs in rank one.
        let cx = build_complex(&a, ComplexKind::D, 1).unwrap();
        assert!(cx.vertices.is_empty());
        let rep = reduced_homology(&cx, 0).unwrap();
        assert_eq!(rep.reduced_betti, vec![1, 0]);
        assert_eq!(rep.verified_connectivity, -2);
    }

    #[test]
    fn projective_plane_torsion_is_detected() {
        // Minimal six-vertex triangulation of the projective plane.
        let faces: [[usize; 3]; 10] = [
            [0, 1, 2],
            [0, 1, 3],
            [0, 2, 4],
            [0, 3, 5],
            [0, 4, 5],
            [1, 2, 5],
            [1, 3, 4],
            [1, 4, 5],
            [2, 3, 4],
            [2, 3, 5],
        ];
        let mut edge_count: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut simplices_by_dim: Vec<Vec<Vec<usize>>> = vec![Vec::new(); 3];
        simplices_by_dim[0] = (0..6).map(|i| vec![i]).collect();
        for f in &faces {
            simplices_by_dim[2].push(f.to_vec());
            for omit in 0..3 {
                let mut e = f.to_vec();
                e.remove(omit);
                *edge_count.entry(e).or_insert(0) += 1;
            }
        }
        // A closed surface: every edge borders exactly two triangles.
        assert!(edge_count.values().all(|&c| c == 2));
        assert_eq!(edge_count.len(), 15);
        simplices_by_dim[1] = edge_count.into_keys().collect();
        simplices_by_dim[1].sort();
        simplices_by_dim[2].sort();
        let cx = SimplicialComplex {
            ring: f2(),
            vertices: (0..6).map(|i| vec![b(i)]).collect(),
            simplices_by_dim,
            kind: ComplexKind::Aalg,
            dim_cap: 2,
        };
        let rep = reduced_homology(&cx, 1).unwrap();
        assert_eq!(rep.reduced_betti, vec![0, 0, 0]);
        assert_eq!(rep.torsion[2], vec![b(2)]);
        assert_eq!(rep.verified_connectivity, 0);
    }

    #[test]
    fn connectivity_reports_meet_the_published_bounds() {
        let d5 = connectivity_report(&FormedSpace::x_power(f2(), 5), ComplexKind::D, 2).unwrap();
        assert_eq!(d5.predicted_bound, Some(0));
        assert!(d5.verified_connectivity >= 0, "{d5:?}");

        let b6 = connectivity_report(&FormedSpace::x_power(f2(), 6), ComplexKind::B, 4).unwrap();
        assert_eq!(b6.predicted_bound, Some(2));
        assert!(b6.verified_connectivity >= 2, "{b6:?}");

        let a3 = connectivity_report(&FormedSpace::x_power(f2(), 3), ComplexKind::Aalg, 2).unwrap();
        assert_eq!(a3.predicted_bound, Some(0));
        assert!(a3.verified_connectivity >= 0, "{a3:?}");
    }

    #[test]
    fn unimodular_complex_meets_its_bound_and_is_locally_connected() {
        let ring = f2();
        let ambient = FormedSpace::x_power(ring, 4);
        let basis: Vec<Vec<BigInt>> = (0..4)
            .map(|i| (0..4).map(|j| b((i == j) as i64)).collect())
            .collect();
        let kind = ComplexKind::U {
            base: bv(&[0, 0, 0, 0]),
            subgens: basis,
        };
        let rep = connectivity_report(&ambient, kind.clone(), 4).unwrap();
        assert_eq!(rep.predicted_bound, Some(2));
        assert!(rep.verified_connectivity >= 2, "{rep:?}");

        // Weak Cohen-Macaulay spot checks: the link of a k-vertex simplex
        // stays (r - sr - k - 1)-connected.
        let cx = build_complex(&ambient, kind, 4).unwrap();
        let vertex_link = link(&cx, &[0]).unwrap();
        let lrep = reduced_homology(&vertex_link, 2).unwrap();
        assert!(lrep.verified_connectivity >= 1, "{lrep:?}");
        let edge = cx.simplices_by_dim[1][0].clone();
        let edge_link = link(&cx, &edge).unwrap();
        let erep = reduced_homology(&edge_link, 1).unwrap();
        assert!(erep.verified_connectivity >= 0, "{erep:?}");
    }

    #[test]
    fn coset_complex_over_a_proper_submodule() {
        let ring = f2();
        let ambient = FormedSpace::x_power(ring, 5);
        let subgens: Vec<Vec<BigInt>> = (0..4)
            .map(|i| (0..5).map(|j| b((i == j) as i64)).collect())
            .collect();
        let kind = ComplexKind::U {
            base: bv(&[0, 0, 0, 0, 1]),
            subgens,
        };
        let cx = build_complex(&ambient, kind.clone(), 1).unwrap();
        assert_eq!(cx.vertices.len(), 16);
        let rep = connectivity_report(&ambient, kind, 4).unwrap();
        assert_eq!(rep.predicted_bound, Some(2));
        assert!(rep.verified_connectivity >= 2, "{rep:?}");
    }

    #[test]
    fn raising_the_dimension_cap_preserves_lower_levels_and_homology() {
        let a = FormedSpace::x_power(f2(), 5);
        let small = build_complex(&a, ComplexKind::D, 1).unwrap();
        let big = build_complex(&a, ComplexKind::D, 3).unwrap();
        assert_eq!(small.simplices_by_dim[0], big.simplices_by_dim[0]);
        assert_eq!(small.simplices_by_dim[1], big.simplices_by_dim[1]);
        let h_small = reduced_homology(&small, 0).unwrap();
        let h_big = reduced_homology(&big, 0).unwrap();
        assert_eq!(h_small.reduced_betti, h_big.reduced_betti);
    }

    #[test]
    fn ordered_simplex_counts_match_stabilizer_indices() {
        for (n, p) in [(2, 0), (3, 0), (3, 1), (5, 0), (5, 1), (5, 2), (5, 3)] {
            let check = destabilization_count_check(n, p, f2()).unwrap();
            assert!(check.equal, "n = {n}, p = {p}: {check:?}");
        }
        let v5 = destabilization_count_check(5, 0, f2()).unwrap();
        assert_eq!((v5.lhs, v5.rhs), (15, 15));
        let v3 = destabilization_count_check(3, 0, f2()).unwrap();
        assert_eq!((v3.lhs, v3.rhs), (3, 3));
        for (n, p) in [(3, 0), (3, 1), (4, 0)] {
            let check = destabilization_count_check(n, p, f3()).unwrap();
            assert!(check.equal, "n = {n}, p = {p} over F3: {check:?}");
        }
        assert!(destabilization_count_check(3, 2, f2()).is_err());
    }

    #[test]
    fn infinite_rings_and_oversized_enumerations_are_rejected() {
        let a = FormedSpace::x_power(RingSpec::z(), 3);
        assert!(matches!(
            build_complex(&a, ComplexKind::D, 1),
            Err(Error::InfiniteRing)
        ));
        let big = FormedSpace::x_power(f3(), 14);
        assert!(matches!(
            build_complex(&big, ComplexKind::D, 1),
            Err(Error::BudgetExceeded(_))
        ));
    }
}
