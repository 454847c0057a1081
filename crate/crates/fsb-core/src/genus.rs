//! Genus invariants: hyperbolic genus, arc genus, boundary-adapted
//! hyperbolic bases, and the boundary invariant rank.
//!
//! The hyperbolic genus counts unit hyperbolic planes splitting off the
//! form; it is half the number of unit invariant factors. The arc genus is
//! the largest X-power splitting off the whole formed space. The value
//! 1 + g_H(lambda) + g_H(lambda restricted to ker del) is always an upper
//! bound when the boundary is unimodular; it is the exact genus over a
//! principal ideal domain, or over any coefficient ring once the form
//! carries at least usr + 1 unit planes or a constructed splitting reaches
//! the stable range 2 usr + 2. Outside those hypotheses the answer is
//! certified constructively: a block splitting that meets the upper bound,
//! or an exhaustive arc enumeration over a finite ring.
//!
//! Every positive claim ships a witness. Splittings are checked
//! isomorphisms, hyperbolic pairs are re-verified against the form, and the
//! stable-range shortenings used in the functional-adapted constructions
//! are searched and then validated, never assumed.

use crate::arcs::{arc_morphism, split_off};
use crate::error::{Error, Result};
use crate::exactlin::{
    alternating_normal_form, is_unimodular_rows, kernel_basis, right_inverse, smith_normal_form,
    Mat,
};
use crate::formed::{standardize_x_power, x_power_model, FormedSpace, Morphism};
use crate::ring::RingSpec;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::HashMap;

/// Half the number of unit invariant factors of an alternating form.
pub fn hyperbolic_genus_of_form(lambda: &Mat) -> usize {
    smith_normal_form(lambda).unit_count() / 2
}

/// Hyperbolic genus of the underlying form of a space.
pub fn hyperbolic_genus(a: &FormedSpace) -> usize {
    hyperbolic_genus_of_form(&a.lambda)
}

/// How an arc genus value was certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GenusMethod {
    /// Decided by Smith normal forms alone (non-unimodular boundary).
    Snf,
    /// A greedy constructed splitting met the theoretical upper bound.
    Greedy,
    /// Exhaustive arc enumeration over a finite ring.
    BruteForce,
    /// The closed formula under its proven hypotheses.
    Formula,
}

#[derive(Clone, Debug, Serialize)]
pub struct GenusReport {
    pub g_h: usize,
    /// Hyperbolic genus of the form restricted to ker del; absent when the
    /// boundary is not unimodular (the kernel need not be free).
    pub g_h_ker_del: Option<usize>,
    pub g_x: usize,
    pub method: GenusMethod,
    pub conditions_used: Vec<String>,
}

/// Hyperbolic genus of the form restricted to the kernel of the boundary.
/// Requires a unimodular boundary so the kernel is a free summand.
pub fn kernel_form_genus(a: &FormedSpace) -> Result<usize> {
    let k = kernel_basis(&a.del)?;
    let restricted = k.transpose().mul(&a.lambda).mul(&k);
    Ok(hyperbolic_genus_of_form(&restricted))
}

/// The arc genus with certification metadata.
pub fn arc_genus(a: &FormedSpace) -> Result<GenusReport> {
    let ring = a.ring;
    let g_h = hyperbolic_genus(a);
    if !is_unimodular_rows(&a.del) {
        return Ok(GenusReport {
            g_h,
            g_h_ker_del: None,
            g_x: 0,
            method: GenusMethod::Snf,
            conditions_used: vec!["boundary row is not unimodular".into()],
        });
    }
    let g_h_ker = kernel_form_genus(a)?;
    let upper = 1 + g_h + g_h_ker;
    if ring.is_pid() {
        return Ok(GenusReport {
            g_h,
            g_h_ker_del: Some(g_h_ker),
            g_x: upper,
            method: GenusMethod::Formula,
            conditions_used: vec![
                "boundary row is unimodular".into(),
                "coefficient ring is a principal ideal domain".into(),
            ],
        });
    }
    if g_h >= ring.usr() + 1 {
        return Ok(GenusReport {
            g_h,
            g_h_ker_del: Some(g_h_ker),
            g_x: upper,
            method: GenusMethod::Formula,
            conditions_used: vec![
                "boundary row is unimodular".into(),
                format!(
                    "form has hyperbolic genus {} >= usr + 1 = {}",
                    g_h,
                    ring.usr() + 1
                ),
            ],
        });
    }
    // Constructive routes for small instances outside the formula
    // hypotheses.
    let split = maximal_x_split(a)?;
    if split.count == upper {
        return Ok(GenusReport {
            g_h,
            g_h_ker_del: Some(g_h_ker),
            g_x: upper,
            method: GenusMethod::Greedy,
            conditions_used: vec![
                "boundary row is unimodular".into(),
                "a constructed splitting reached the upper bound".into(),
            ],
        });
    }
    if split.count >= 2 * ring.usr() + 2 {
        // A genus this large puts the space in the stable range where the
        // upper bound is known to be attained.
        return Ok(GenusReport {
            g_h,
            g_h_ker_del: Some(g_h_ker),
            g_x: upper,
            method: GenusMethod::Formula,
            conditions_used: vec![
                "boundary row is unimodular".into(),
                format!(
                    "a constructed splitting of {} X summands reaches the stable range 2 usr + 2 = {}",
                    split.count,
                    2 * ring.usr() + 2
                ),
            ],
        });
    }
    let g_x = arc_genus_bruteforce(a, 2_000_000)?;
    Ok(GenusReport {
        g_h,
        g_h_ker_del: Some(g_h_ker),
        g_x,
        method: GenusMethod::BruteForce,
        conditions_used: vec![
            "boundary row is unimodular".into(),
            "exhaustive arc enumeration over a finite ring".into(),
        ],
    })
}

/// A constructed splitting A = complement # X^{#count} with its witness.
#[derive(Clone, Debug)]
pub struct GreedySplit {
    pub complement: FormedSpace,
    pub count: usize,
    /// Checked isomorphism complement # X^{#count} -> A.
    pub witness: Morphism,
}

/// Greedily split off one X at a time until the residual boundary dies.
/// The count is a certified lower bound for the arc genus, exact whenever
/// it meets the closed-formula upper bound.
pub fn greedy_split(a: &FormedSpace) -> Result<GreedySplit> {
    let ring = a.ring;
    let mut cur = a.clone();
    let mut count = 0usize;
    let mut witness = Morphism::identity(a);
    loop {
        if cur.rank == 0 || !is_unimodular_rows(&cur.del) {
            break;
        }
        let arc_col = right_inverse(&cur.del).expect("unimodular boundary has a section");
        let arc: Vec<BigInt> = arc_col.col_vec(0);
        let f = arc_morphism(&cur, &arc)?;
        let (complement, step) = split_off(&cur, &f)?;
        // step: complement # X -> cur. Extend by the X-power already
        // extracted and compose into the running witness.
        let tail = Morphism::identity(&FormedSpace::x_power(ring, count));
        let extended = step.direct_sum(&tail)?;
        witness = witness.compose(&extended)?;
        count += 1;
        cur = complement;
    }
    Ok(GreedySplit {
        complement: cur,
        count,
        witness,
    })
}

/// Split off as large an X-power as the constructive toolkit reaches.
/// While the form keeps unit hyperbolic pairs, whole blocks come off at
/// once: the pairs sit inside the boundary kernel with a closing arc when
/// the kernel form is as rich as the full form, and are adapted to the
/// boundary otherwise. Single arcs cover the rest until the residual
/// boundary dies. The count is a certified lower bound for the arc genus,
/// exact over a principal ideal domain.
pub fn maximal_x_split(a: &FormedSpace) -> Result<GreedySplit> {
    let ring = a.ring;
    let mut cur = a.clone();
    let mut count = 0usize;
    let mut witness = Morphism::identity(a);
    loop {
        if cur.rank == 0 || !is_unimodular_rows(&cur.del) {
            break;
        }
        let g = hyperbolic_genus(&cur);
        let mut step: Option<(FormedSpace, Morphism, usize)> = None;
        if g >= 1 {
            if kernel_form_genus(&cur)? >= g {
                step = soften(odd_block_step(&cur))?;
            }
            if step.is_none() {
                step = soften(even_block_step(&cur))?;
            }
        }
        let (comp, mor, k) = match step {
            Some(s) => s,
            None => single_arc_step(&cur)?,
        };
        // mor: comp # X^k -> cur. Extend by the X-power already extracted
        // and compose into the running witness; X-power sums associate
        // strictly, so the sources line up as data.
        let tail = Morphism::identity(&FormedSpace::x_power(ring, count));
        let extended = mor.direct_sum(&tail)?;
        witness = witness.compose(&extended)?;
        count += k;
        cur = comp;
    }
    Ok(GreedySplit {
        complement: cur,
        count,
        witness,
    })
}

/// Ok(Some) on success, Ok(None) when only the hypothesis failed.
fn soften<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::HypothesisFailed(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// One X split off along a section of the boundary.
fn single_arc_step(cur: &FormedSpace) -> Result<(FormedSpace, Morphism, usize)> {
    let arc = right_inverse(&cur.del)
        .expect("unimodular boundary has a section")
        .col_vec(0);
    let f = arc_morphism(cur, &arc)?;
    let (comp, step) = split_off(cur, &f)?;
    Ok((comp, step, 1))
}

/// Peel all unit hyperbolic pairs of the boundary-kernel form plus a
/// closing arc from their orthogonal complement as one model block of odd
/// rank. The pairs have boundary zero, the arc boundary one: exactly the
/// boundary pattern of the odd standard model.
fn odd_block_step(cur: &FormedSpace) -> Result<(FormedSpace, Morphism, usize)> {
    let ring = cur.ring;
    let k = kernel_basis(&cur.del)?;
    let sub = k.transpose().mul(&cur.lambda).mul(&k);
    let pairs = unit_pair_columns(ring, &sub)?;
    let g = pairs.len();
    if g == 0 {
        return Err(Error::HypothesisFailed(
            "no unit hyperbolic pair inside the boundary kernel".into(),
        ));
    }
    let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(2 * g + 1);
    for (e, f) in pairs {
        cols.push(k.mul_col(&e));
        cols.push(k.mul_col(&f));
    }
    // The pair block has unimodular Gram matrix, so the space splits as
    // pairs plus their orthogonal complement; the boundary restricted to
    // the complement stays unimodular and supplies the closing arc.
    let mut prow = cur.pairing_row(&cols[0]);
    for c in &cols[1..] {
        prow = prow.vcat(&cur.pairing_row(c));
    }
    let cbasis = kernel_basis(&prow)?;
    let del_c = cur.del.mul(&cbasis);
    if !is_unimodular_rows(&del_c) {
        return Err(Error::HypothesisFailed(
            "the pair complement has no arc".into(),
        ));
    }
    let arc_c = right_inverse(&del_c).expect("checked unimodular").col_vec(0);
    cols.push(cbasis.mul_col(&arc_c));
    finish_block_step(cur, &cols, 2 * g + 1)
}

/// Peel a full boundary-adapted hyperbolic basis as one model block of
/// even rank.
fn even_block_step(cur: &FormedSpace) -> Result<(FormedSpace, Morphism, usize)> {
    let ab = adapted_hyperbolic_basis(cur)?;
    let k = 2 * ab.pairs;
    let bridged = bridge_model_witness(&ab.complement, ab.witness, k)?;
    Ok((ab.complement, bridged, k))
}

/// Close a block step: the curved-orthogonal complement of the block
/// columns realizes the space as complement # model(k), and the
/// standardization turns the model factor into a genuine X-power.
fn finish_block_step(
    cur: &FormedSpace,
    cols: &[Vec<BigInt>],
    k: usize,
) -> Result<(FormedSpace, Morphism, usize)> {
    let ring = cur.ring;
    let cmat = Mat::from_cols(ring, cur.rank, cols);
    let rows = cmat.transpose().mul(&cur.curved_form());
    let kn = kernel_basis(&rows)?;
    let lam = kn.transpose().mul(&cur.lambda).mul(&kn);
    let del = cur.del.mul(&kn);
    let n_space = FormedSpace::new(ring, lam, del)?;
    let src = n_space.sum(&x_power_model(ring, k))?;
    let model_wit = Morphism::iso(src, cur.clone(), kn.hcat(&cmat))?;
    let bridged = bridge_model_witness(&n_space, model_wit, k)?;
    Ok((n_space, bridged, k))
}

/// Turn a witness N # model(k) -> cur into N # X^k -> cur through the
/// standardization of the k-th X-power.
fn bridge_model_witness(n_space: &FormedSpace, wit: Morphism, k: usize) -> Result<Morphism> {
    let ring = n_space.ring;
    let std = standardize_x_power(ring, k);
    let inv = std
        .inverse_morphism()
        .expect("standardization is an isomorphism");
    let ext = Morphism::identity(n_space).direct_sum(&inv)?;
    wit.compose(&ext)
}

/// Exact arc genus by exhaustive arc enumeration with memoization.
/// Only finite coefficient rings are supported; `cap` bounds the number of
/// arc candidates examined.
pub fn arc_genus_bruteforce(a: &FormedSpace, cap: usize) -> Result<usize> {
    let m = match a.ring {
        RingSpec::Zmod { m } => m,
        RingSpec::Z => {
            return Err(Error::UnsupportedRing(
                "exhaustive arc enumeration requires a finite coefficient ring".into(),
            ))
        }
    };
    let mut memo: HashMap<String, usize> = HashMap::new();
    let mut visits = 0usize;
    fn key(a: &FormedSpace) -> String {
        let mut s = format!("{};", a.rank);
        for i in 0..a.rank {
            for j in 0..a.rank {
                s.push_str(&a.lambda.get(i, j).to_string());
                s.push(',');
            }
        }
        s.push(';');
        for j in 0..a.rank {
            s.push_str(&a.del.get(0, j).to_string());
            s.push(',');
        }
        s
    }
    fn go(
        a: &FormedSpace,
        m: u64,
        cap: usize,
        visits: &mut usize,
        memo: &mut HashMap<String, usize>,
    ) -> Result<usize> {
        if a.rank == 0 || !is_unimodular_rows(&a.del) {
            return Ok(0);
        }
        let k = key(a);
        if let Some(&v) = memo.get(&k) {
            return Ok(v);
        }
        let base = right_inverse(&a.del).expect("unimodular boundary").col_vec(0);
        let kernel = kernel_basis(&a.del)?;
        let dim = kernel.cols;
        let mut best = 0usize;
        let mut coef = vec![0u64; dim];
        loop {
            *visits += 1;
            if *visits > cap {
                return Err(Error::CapExceeded(format!(
                    "arc enumeration exceeded {cap} candidates"
                )));
            }
            let mut arc = base.clone();
            for (j, &c) in coef.iter().enumerate() {
                if c != 0 {
                    let col = kernel.col_vec(j);
                    for (i, arc_i) in arc.iter_mut().enumerate() {
                        *arc_i = a.ring.add(arc_i, &a.ring.mul(&BigInt::from(c), &col[i]));
                    }
                }
            }
            // Complement along this arc; always defined since the curved
            // self-pairing of an arc is one.
            let row = Mat::row_vector(a.ring, &arc).mul(&a.curved_form());
            debug_assert!(is_unimodular_rows(&row));
            let kc = kernel_basis(&row)?;
            let lam = kc.transpose().mul(&a.lambda).mul(&kc);
            let del = a.del.mul(&kc);
            let comp = FormedSpace::new(a.ring, lam, del)?;
            let sub = go(&comp, m, cap, visits, memo)?;
            best = best.max(1 + sub);
            // Advance the mixed-radix counter.
            let mut c = 0;
            while c < dim {
                coef[c] += 1;
                if coef[c] < m {
                    break;
                }
                coef[c] = 0;
                c += 1;
            }
            if c == dim {
                break;
            }
        }
        memo.insert(k, best);
        Ok(best)
    }
    go(a, m, cap, &mut visits, &mut memo)
}

/// Report on the invariant rank of the boundary kernel: the number of unit
/// invariant factors of the form restricted to ker del.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryRankReport {
    pub rank: usize,
    pub boundary_unimodular: bool,
}

/// Rank of the form restricted to the boundary kernel; zero with a flag
/// when the boundary is not unimodular.
pub fn boundary_invariant_rank(a: &FormedSpace) -> Result<BoundaryRankReport> {
    if !is_unimodular_rows(&a.del) {
        return Ok(BoundaryRankReport {
            rank: 0,
            boundary_unimodular: false,
        });
    }
    let k = kernel_basis(&a.del)?;
    let restricted = k.transpose().mul(&a.lambda).mul(&k);
    Ok(BoundaryRankReport {
        rank: smith_normal_form(&restricted).unit_count(),
        boundary_unimodular: true,
    })
}

/// Search for a shortening witness: t_0..t_{k-1} such that
/// (r_i + t_i * r_k) is unimodular, given (r_0..r_k) unimodular. Guaranteed
/// to exist when k is at least the stable rank; found by a deterministic
/// then seeded search and always verified.
pub fn stable_range_shorten(ring: RingSpec, r: &[BigInt]) -> Result<Vec<BigInt>> {
    if r.len() < 2 {
        return Err(Error::InvalidInput("need at least two values to shorten".into()));
    }
    let k = r.len() - 1;
    let last = &r[k];
    let works = |t: &[BigInt]| -> bool {
        let shortened: Vec<BigInt> = (0..k).map(|i| ring.add(&r[i], &ring.mul(&t[i], last))).collect();
        ring.is_unit(&ring.ideal_gcd(&shortened))
    };
    let zero = vec![BigInt::zero(); k];
    if works(&zero) {
        return Ok(zero);
    }
    // Single-coordinate bumps with small multipliers.
    let small: Vec<BigInt> = match ring {
        RingSpec::Z => [1i64, -1, 2, -2, 3, -3].iter().map(|&x| BigInt::from(x)).collect(),
        RingSpec::Zmod { m } => (1..m.min(9)).map(BigInt::from).collect(),
    };
    for i in 0..k {
        for s in &small {
            let mut t = zero.clone();
            t[i] = s.clone();
            if works(&t) {
                return Ok(t);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1789);
    for _ in 0..5000 {
        let t: Vec<BigInt> = (0..k).map(|_| ring.random_elem(&mut rng)).collect();
        if works(&t) {
            return Ok(t);
        }
    }
    Err(Error::HypothesisFailed(
        "no stable-range shortening found within the search budget".into(),
    ))
}

/// Given an alternating form with at least one unit hyperbolic pair and a
/// unimodular functional l, produce vectors (u, v) with pairing
/// lambda(u, v) = 1 and l(u) = 1. Output is re-verified before returning.
pub fn find_hyperbolic_for_functional(lambda: &Mat, l: &Mat) -> Result<(Vec<BigInt>, Vec<BigInt>)> {
    let ring = lambda.ring;
    let n = lambda.rows;
    if l.rows != 1 || l.cols != n {
        return Err(Error::DimensionMismatch("functional must be a 1 x n row".into()));
    }
    if !is_unimodular_rows(l) {
        return Err(Error::HypothesisFailed("functional is not unimodular".into()));
    }
    let nf = alternating_normal_form(lambda)?;
    let g = nf.unit_pairs(ring);
    if g == 0 {
        return Err(Error::HypothesisFailed(
            "the form has no unit hyperbolic pair".into(),
        ));
    }
    // Work in normal-form coordinates: unit pairs occupy the first 2g.
    let l_nf = l.mul(&nf.p);
    let lambda_nf = nf.normal_matrix(ring);
    // A point with l(x) = 1, split into its unit-pair and tail parts.
    let x = right_inverse(&l_nf).expect("unimodular functional").col_vec(0);
    let mut tail = vec![BigInt::zero(); n];
    let mut l_tail = BigInt::zero();
    for i in 2 * g..n {
        tail[i] = x[i].clone();
        l_tail = ring.add(&l_tail, &ring.mul(l_nf.get(0, i), &x[i]));
    }
    // Shorten (l(x_1), ..., l(x_2g), l(tail)) to 2g unimodular values.
    let mut tuple: Vec<BigInt> = (0..2 * g).map(|i| l_nf.get(0, i).clone()).collect();
    tuple.push(l_tail.clone());
    let t = stable_range_shorten(ring, &tuple)?;
    let shortened: Vec<BigInt> = (0..2 * g)
        .map(|i| ring.add(&tuple[i], &ring.mul(&t[i], &l_tail)))
        .collect();
    let (gcd, coeffs) = ring.bezout(&shortened);
    if !ring.is_unit(&gcd) {
        return Err(Error::HypothesisFailed("shortened tuple is not unimodular".into()));
    }
    let unit_inv = ring.inv(&gcd).expect("unit");
    let coeffs: Vec<BigInt> = coeffs.iter().map(|c| ring.mul(c, &unit_inv)).collect();
    // u0 lives in the unit-pair block; u adds the tail correction.
    let mut u_nf = vec![BigInt::zero(); n];
    for (i, c) in coeffs.iter().enumerate() {
        u_nf[i] = c.clone();
    }
    let mut tail_mult = BigInt::zero();
    for (i, c) in coeffs.iter().enumerate() {
        tail_mult = ring.add(&tail_mult, &ring.mul(c, &t[i]));
    }
    let mut u_full = u_nf.clone();
    for i in 2 * g..n {
        u_full[i] = ring.mul(&tail_mult, &tail[i]);
    }
    // Solve lambda(u0, v) = 1 inside the unit-pair block.
    let u0_row = Mat::row_vector(ring, &u_nf).mul(&lambda_nf);
    let block = u0_row.select_cols(&(0..2 * g).collect::<Vec<_>>());
    let v_block = right_inverse(&block)
        .ok_or_else(|| Error::HypothesisFailed("pairing row of u0 is not unimodular".into()))?;
    let mut v_nf = vec![BigInt::zero(); n];
    for i in 0..2 * g {
        v_nf[i] = v_block.get(i, 0).clone();
    }
    // Map back to the original coordinates and verify.
    let u = nf.p.mul_col(&u_full);
    let v = nf.p.mul_col(&v_nf);
    let pair = Mat::row_vector(ring, &u).mul(lambda).mul_col(&v)[0].clone();
    let l_u = l.mul_col(&u)[0].clone();
    if !pair.is_one() || !l_u.is_one() {
        return Err(Error::HypothesisFailed(
            "constructed pair failed verification".into(),
        ));
    }
    Ok((u, v))
}

/// A boundary-adapted decomposition A = N # M where M is the standard
/// model of an even X-power: `pairs` hyperbolic planes with the boundary
/// supported on the first pair.
#[derive(Clone, Debug)]
pub struct AdaptedBasis {
    pub pairs: usize,
    pub complement: FormedSpace,
    /// Checked isomorphism complement # x_power_model(2 * pairs) -> A.
    pub witness: Morphism,
}

/// The unit hyperbolic pairs of an alternating form, as column vectors
/// with pairing exactly one (the first member of each pair is scaled by
/// the inverse of its unit divisor).
fn unit_pair_columns(ring: RingSpec, lambda: &Mat) -> Result<Vec<(Vec<BigInt>, Vec<BigInt>)>> {
    if lambda.rows == 0 {
        return Ok(Vec::new());
    }
    let nf = alternating_normal_form(lambda)?;
    let g = nf.unit_pairs(ring);
    let normal = nf.normal_matrix(ring);
    let mut out = Vec::with_capacity(g);
    for i in 0..g {
        let d_inv = ring.inv(normal.get(2 * i, 2 * i + 1)).expect("unit pair divisor");
        let e: Vec<BigInt> = nf
            .p
            .col_vec(2 * i)
            .iter()
            .map(|x| ring.mul(&d_inv, x))
            .collect();
        out.push((e, nf.p.col_vec(2 * i + 1)));
    }
    Ok(out)
}

/// Build a boundary-adapted hyperbolic basis in one pass. The unit pairs
/// of the form give coordinates in which the form is standard hyperbolic
/// and the boundary restricts to a functional l; when l is not unimodular
/// there, the pair list is rebuilt from a hyperbolic pair adapted to the
/// boundary, which forces a one into l. The dual vector v with
/// lambda(v, -) = l opens the model basis: it pairs to one with a section
/// of l, carries boundary zero, and the boundary vanishes identically on
/// the orthogonal complement of the two, which supplies the remaining
/// pairs. The curved-orthogonal complement of the block then realizes A
/// as complement # model(2 pairs).
pub fn adapted_hyperbolic_basis(a: &FormedSpace) -> Result<AdaptedBasis> {
    let ring = a.ring;
    if !is_unimodular_rows(&a.del) {
        return Err(Error::HypothesisFailed(
            "the boundary row is not unimodular".into(),
        ));
    }
    let pairs = unit_pair_columns(ring, &a.lambda)?;
    let g = pairs.len();
    if g == 0 {
        return Err(Error::HypothesisFailed(
            "the form has no unit hyperbolic pair".into(),
        ));
    }
    let mut pair_cols: Vec<Vec<BigInt>> = Vec::with_capacity(2 * g);
    for (e, f) in pairs {
        pair_cols.push(e);
        pair_cols.push(f);
    }
    let mut psi = Mat::from_cols(ring, a.rank, &pair_cols);
    let mut l_h = a.del.mul(&psi);
    if !is_unimodular_rows(&l_h) {
        // Rebuild from a pair adapted to the boundary: u with del(u) = 1
        // and w = v0 - del(v0) u with lambda(u, w) = 1, del(w) = 0. The
        // remaining pairs come from the plain orthogonal complement of
        // (u, w), so the restricted boundary now starts with a one.
        let (u, v0) = find_hyperbolic_for_functional(&a.lambda, &a.del)?;
        let dv = a.boundary_of(&v0);
        let w: Vec<BigInt> = (0..a.rank)
            .map(|i| ring.sub(&v0[i], &ring.mul(&dv, &u[i])))
            .collect();
        let rows = a.pairing_row(&u).vcat(&a.pairing_row(&w));
        let kc = kernel_basis(&rows)?;
        let sub = kc.transpose().mul(&a.lambda).mul(&kc);
        let sub_pairs = unit_pair_columns(ring, &sub)?;
        if sub_pairs.len() + 1 != g {
            return Err(Error::HypothesisFailed(
                "pair complement lost hyperbolic pairs".into(),
            ));
        }
        let mut cols = vec![u, w];
        for (e, f) in sub_pairs {
            cols.push(kc.mul_col(&e));
            cols.push(kc.mul_col(&f));
        }
        psi = Mat::from_cols(ring, a.rank, &cols);
        l_h = a.del.mul(&psi);
    }
    // Pair coordinates: the form is hyperbolic(g) and the boundary
    // restricts to l_h = lambda_h(v, -) for the dual vector v below; in
    // particular l_h(v) = 0.
    let lam_h = FormedSpace::hyperbolic(ring, g).lambda;
    let mut v = vec![BigInt::zero(); 2 * g];
    for i in 0..g {
        v[2 * i] = l_h.get(0, 2 * i + 1).clone();
        v[2 * i + 1] = ring.sub(&BigInt::zero(), l_h.get(0, 2 * i));
    }
    let e1 = right_inverse(&l_h)
        .expect("unimodular restricted boundary has a section")
        .col_vec(0);
    // Remaining pairs live in the orthogonal complement of (v, e1), where
    // the boundary vanishes identically: l_h(x) = lambda_h(v, x) = 0.
    let rows = Mat::row_vector(ring, &e1)
        .mul(&lam_h)
        .vcat(&Mat::row_vector(ring, &v).mul(&lam_h));
    let kh = kernel_basis(&rows)?;
    let sub = kh.transpose().mul(&lam_h).mul(&kh);
    let sub_pairs = unit_pair_columns(ring, &sub)?;
    if sub_pairs.len() + 1 != g {
        return Err(Error::HypothesisFailed(
            "adapted pair complement lost hyperbolic pairs".into(),
        ));
    }
    let mut model_cols: Vec<Vec<BigInt>> = Vec::with_capacity(2 * g);
    model_cols.push(psi.mul_col(&v));
    model_cols.push(psi.mul_col(&e1));
    for (e, f) in sub_pairs {
        model_cols.push(psi.mul_col(&kh.mul_col(&e)));
        model_cols.push(psi.mul_col(&kh.mul_col(&f)));
    }
    let cmat = Mat::from_cols(ring, a.rank, &model_cols);
    let rows = cmat.transpose().mul(&a.curved_form());
    let kn = kernel_basis(&rows)?;
    let lam = kn.transpose().mul(&a.lambda).mul(&kn);
    let del = a.del.mul(&kn);
    let complement = FormedSpace::new(ring, lam, del)?;
    let src = complement.sum(&x_power_model(ring, 2 * g))?;
    let witness = Morphism::iso(src, a.clone(), kn.hcat(&cmat))?;
    Ok(AdaptedBasis {
        pairs: g,
        complement,
        witness,
    })
}

/// Random formed space generator for tests and sampling suites: a seeded
/// alternating form and boundary with small entries.
pub fn random_formed_space(ring: RingSpec, rank: usize, seed: u64) -> FormedSpace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let raw = Mat::from_fn(ring, rank, rank, |_, _| match ring {
            RingSpec::Z => BigInt::from(rng.gen_range(-3i64..=3)),
            RingSpec::Zmod { m } => BigInt::from(rng.gen_range(0..m)),
        });
        let lambda = raw.sub(&raw.transpose());
        let del = Mat::from_fn(ring, 1, rank, |_, _| match ring {
            RingSpec::Z => BigInt::from(rng.gen_range(-3i64..=3)),
            RingSpec::Zmod { m } => BigInt::from(rng.gen_range(0..m)),
        });
        if let Ok(space) = FormedSpace::new(ring, lambda, del) {
            return space;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> RingSpec {
        RingSpec::Z
    }

    #[test]
    fn hyperbolic_genus_anchors() {
        for g in 0..=3 {
            assert_eq!(hyperbolic_genus(&FormedSpace::hyperbolic(z(), g)), g);
        }
        for n in 0..=7 {
            let expect = n / 2;
            assert_eq!(hyperbolic_genus(&FormedSpace::x_power(z(), n)), expect, "n = {n}");
        }
        // Scaled pair drops out of the unit count over Z but not mod 5.
        let two_h = FormedSpace::new(
            z(),
            Mat::from_i64_rows(z(), &[&[0, 2], &[-2, 0]]),
            Mat::zero(z(), 1, 2),
        )
        .unwrap();
        assert_eq!(hyperbolic_genus(&two_h), 0);
        let ring = RingSpec::zmod(5);
        let two_h5 = FormedSpace::new(
            ring,
            Mat::from_i64_rows(ring, &[&[0, 2], &[-2, 0]]),
            Mat::zero(ring, 1, 2),
        )
        .unwrap();
        assert_eq!(hyperbolic_genus(&two_h5), 1);
    }

    #[test]
    fn arc_genus_of_x_powers() {
        for ring in [z(), RingSpec::zmod(2), RingSpec::zmod(3)] {
            for n in 0..=6 {
                let report = arc_genus(&FormedSpace::x_power(ring, n)).unwrap();
                assert_eq!(report.g_x, n, "n = {n} over {ring:?}");
                if n == 0 {
                    assert_eq!(report.method, GenusMethod::Snf);
                } else {
                    assert_eq!(report.method, GenusMethod::Formula);
                }
            }
        }
    }

    #[test]
    fn arc_genus_of_x_powers_composite_modulus() {
        for n in 1..=6 {
            let report = arc_genus(&FormedSpace::x_power(RingSpec::zmod(6), n)).unwrap();
            assert_eq!(report.g_x, n, "n = {n} mod 6");
        }
        // Small ranks fall outside the formula hypotheses and must be
        // certified constructively.
        let r1 = arc_genus(&FormedSpace::x_power(RingSpec::zmod(6), 1)).unwrap();
        assert_ne!(r1.method, GenusMethod::Formula);
        let r5 = arc_genus(&FormedSpace::x_power(RingSpec::zmod(6), 5)).unwrap();
        assert_eq!(r5.method, GenusMethod::Formula);
    }

    #[test]
    fn genus_report_fields() {
        let report = arc_genus(&FormedSpace::x_power(z(), 5)).unwrap();
        assert_eq!(report.g_h, 2);
        assert_eq!(report.g_h_ker_del, Some(2));
        assert_eq!(report.g_x, 5);

        let report = arc_genus(&FormedSpace::x_power(z(), 4)).unwrap();
        assert_eq!(report.g_h, 2);
        assert_eq!(report.g_h_ker_del, Some(1));
        assert_eq!(report.g_x, 4);

        // Non-unimodular boundary: genus zero, kernel genus unreported.
        let s = FormedSpace::new(
            z(),
            Mat::from_i64_rows(z(), &[&[0, 1], &[-1, 0]]),
            Mat::from_i64_rows(z(), &[&[2, 0]]),
        )
        .unwrap();
        let report = arc_genus(&s).unwrap();
        assert_eq!(report.g_x, 0);
        assert_eq!(report.g_h_ker_del, None);
        assert_eq!(report.method, GenusMethod::Snf);
    }

    #[test]
    fn greedy_split_is_exact_on_x_powers() {
        for n in 0..=6 {
            let a = FormedSpace::x_power(z(), n);
            let split = greedy_split(&a).unwrap();
            assert_eq!(split.count, n, "n = {n}");
            assert_eq!(split.complement.rank, 0);
            assert!(split.witness.is_iso());
            assert_eq!(split.witness.tgt, a);
            assert_eq!(split.witness.src, FormedSpace::x_power(z(), n));
        }
    }

    #[test]
    fn maximal_split_is_exact_on_x_powers() {
        for ring in [z(), RingSpec::zmod(6)] {
            for n in 0..=6 {
                let a = FormedSpace::x_power(ring, n);
                let split = maximal_x_split(&a).unwrap();
                assert_eq!(split.count, n, "n = {n} over {ring:?}");
                assert_eq!(split.complement.rank, 0);
                assert!(split.witness.is_iso());
                assert_eq!(split.witness.tgt, a);
            }
        }
    }

    #[test]
    fn maximal_split_reaches_formula_on_random_integer_spaces() {
        // Over Z the closed formula is proven exact and the block splitting
        // must reach it. Single-arc peeling may stall strictly below when a
        // complement loses boundary unimodularity, so it only bounds.
        for seed in 0..30 {
            let a = random_formed_space(z(), 1 + (seed as usize % 5), 900 + seed);
            let report = arc_genus(&a).unwrap();
            let split = maximal_x_split(&a).unwrap();
            assert_eq!(split.count, report.g_x, "seed {seed}: {a:?}");
            assert!(split.witness.is_iso());
            assert_eq!(split.witness.tgt, a);
            let greedy = greedy_split(&a).unwrap();
            assert!(greedy.count <= report.g_x, "seed {seed}");
        }
    }

    #[test]
    fn single_arc_peeling_can_stall_below_the_genus() {
        // The fifth X-power is also a boundaryless double hyperbolic summed
        // with one X; peeling the X first strands the rest. The witness of
        // the stalled splitting is still a genuine isomorphism.
        let h2 = FormedSpace::hyperbolic(z(), 2);
        let a = h2.sum(&FormedSpace::x(z())).unwrap();
        assert_eq!(arc_genus(&a).unwrap().g_x, 5);
        let split = greedy_split(&a).unwrap();
        assert_eq!(split.count, 1);
        assert!(split.witness.is_iso());
        let split = maximal_x_split(&a).unwrap();
        assert_eq!(split.count, 5);
        assert_eq!(split.complement.rank, 0);
    }

    #[test]
    fn bruteforce_matches_formula_over_fields() {
        for m in [2u64, 3] {
            let ring = RingSpec::zmod(m);
            for seed in 0..12 {
                let rank = 1 + (seed as usize % 4);
                let a = random_formed_space(ring, rank, 120 + seed);
                let report = arc_genus(&a).unwrap();
                let brute = arc_genus_bruteforce(&a, 2_000_000).unwrap();
                assert_eq!(report.g_x, brute, "seed {seed} mod {m}: {a:?}");
            }
        }
    }

    #[test]
    fn bruteforce_agrees_on_composite_modulus() {
        let ring = RingSpec::zmod(4);
        for seed in 0..8 {
            let rank = 1 + (seed as usize % 3);
            let a = random_formed_space(ring, rank, 50 + seed);
            let report = arc_genus(&a).unwrap();
            let brute = arc_genus_bruteforce(&a, 2_000_000).unwrap();
            assert_eq!(report.g_x, brute, "seed {seed}: {a:?}");
        }
    }

    #[test]
    fn bruteforce_cap() {
        let a = FormedSpace::x_power(RingSpec::zmod(3), 4);
        assert!(matches!(arc_genus_bruteforce(&a, 2), Err(Error::CapExceeded(_))));
        assert!(matches!(
            arc_genus_bruteforce(&FormedSpace::x_power(z(), 2), 100),
            Err(Error::UnsupportedRing(_))
        ));
    }

    #[test]
    fn boundary_rank_anchors() {
        assert_eq!(
            boundary_invariant_rank(&FormedSpace::x_power(z(), 3)).unwrap(),
            BoundaryRankReport { rank: 2, boundary_unimodular: true }
        );
        assert_eq!(
            boundary_invariant_rank(&FormedSpace::x_power(z(), 1)).unwrap(),
            BoundaryRankReport { rank: 0, boundary_unimodular: true }
        );
        for g in 1..=3 {
            let r = boundary_invariant_rank(&FormedSpace::x_power(z(), 2 * g)).unwrap();
            assert_eq!(r.rank, 2 * g - 2, "g = {g}");
        }
        let s = FormedSpace::new(
            z(),
            Mat::zero(z(), 1, 1),
            Mat::from_i64_rows(z(), &[&[3]]),
        )
        .unwrap();
        assert_eq!(
            boundary_invariant_rank(&s).unwrap(),
            BoundaryRankReport { rank: 0, boundary_unimodular: false }
        );
    }

    #[test]
    fn stable_range_shortening_verified() {
        // (6, 10, 15) is unimodular over Z; shorten to two values.
        let r = vec![BigInt::from(6), BigInt::from(10), BigInt::from(15)];
        let t = stable_range_shorten(z(), &r).unwrap();
        let s0 = &r[0] + &t[0] * &r[2];
        let s1 = &r[1] + &t[1] * &r[2];
        assert!(z().is_unit(&z().ideal_gcd(&[s0, s1])));

        let ring = RingSpec::zmod(12);
        let r = vec![BigInt::from(2), BigInt::from(3), BigInt::from(4)];
        let t = stable_range_shorten(ring, &r).unwrap();
        let s0 = ring.add(&r[0], &ring.mul(&t[0], &r[2]));
        let s1 = ring.add(&r[1], &ring.mul(&t[1], &r[2]));
        assert!(ring.is_unit(&ring.ideal_gcd(&[s0, s1])));
    }

    #[test]
    fn hyperbolic_pair_for_functional() {
        for (ring, seeds) in [(z(), 0..6u64), (RingSpec::zmod(6), 6..12u64)] {
            for seed in seeds {
                // lambda = H^2 + a junk line; random unimodular functional.
                let h = FormedSpace::hyperbolic(ring, 2);
                let lambda = h.lambda.direct_sum(&Mat::zero(ring, 1, 1));
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let l = loop {
                    let cand = Mat::from_fn(ring, 1, 5, |_, _| ring.random_elem(&mut rng));
                    if is_unimodular_rows(&cand) {
                        break cand;
                    }
                };
                let (u, v) = find_hyperbolic_for_functional(&lambda, &l).unwrap();
                let pair = Mat::row_vector(ring, &u).mul(&lambda).mul_col(&v)[0].clone();
                assert!(pair.is_one(), "seed {seed}");
                assert!(l.mul_col(&u)[0].is_one(), "seed {seed}");
            }
        }
    }

    #[test]
    fn adapted_basis_on_x_powers() {
        // Even power: every pair is adapted, empty complement.
        let a = FormedSpace::x_power(z(), 4);
        let ab = adapted_hyperbolic_basis(&a).unwrap();
        assert_eq!(ab.pairs, 2);
        assert_eq!(ab.complement.rank, 0);
        assert!(ab.witness.is_iso());
        // Odd power: the radical line is left over as the complement X.
        let a = FormedSpace::x_power(z(), 5);
        let ab = adapted_hyperbolic_basis(&a).unwrap();
        assert_eq!(ab.pairs, 2);
        assert_eq!(ab.complement.rank, 1);
        assert!(z().is_unit(ab.complement.del.get(0, 0)));
    }

    #[test]
    fn adapted_basis_requires_pairs_and_boundary() {
        let no_pairs = FormedSpace::x(z());
        assert!(matches!(
            adapted_hyperbolic_basis(&no_pairs),
            Err(Error::HypothesisFailed(_))
        ));
        let h = FormedSpace::hyperbolic(z(), 1);
        assert!(matches!(
            adapted_hyperbolic_basis(&h),
            Err(Error::HypothesisFailed(_))
        ));
    }

    #[test]
    fn adapted_basis_on_composite_modulus() {
        let ring = RingSpec::zmod(6);
        for n in [4usize, 5, 6] {
            let a = FormedSpace::x_power(ring, n);
            let ab = adapted_hyperbolic_basis(&a).unwrap();
            assert_eq!(ab.pairs, n / 2, "n = {n}");
            assert!(ab.witness.is_iso());
        }
    }
}
