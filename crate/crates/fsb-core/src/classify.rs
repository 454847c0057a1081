//! Classification over principal ideal rings.
//!
//! Over Z or Z/p a formed space is determined up to isomorphism by its form
//! data: the rank, the radical rank, the divisor chain of the alternating
//! form, and the boundary divisor chain measured on the canonical filtration
//! of submodules where the form grows more divisible. `form_data` computes
//! the tuple, `standard_model` realizes any admissible tuple, and
//! `reduce_to_standard` produces a checked isomorphism from the model, which
//! powers `is_isomorphic` and the cancellation routine `cancel_x`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arcs::split_off;
use crate::error::{Error, Result};
use crate::exactlin::{
    alternating_normal_form, inverse, is_unimodular_rows, kernel_basis, right_inverse,
    AltNormalForm, Mat,
};
use crate::formed::{bigint_from_json, bigint_to_json, braid_matrix, FormedSpace, Morphism};
use crate::ring::RingSpec;

/// Visit budget for the finite-ring isomorphism search.
const SEARCH_CAP: u64 = 2_000_000;

/// Vertex budget for the arc-transport search in `cancel_x_with`.
const ARC_BUDGET: u128 = 1 << 20;

/// Complete isomorphism invariant of a formed space over a principal ideal
/// ring.
///
/// For a space of rank `n` whose alternating form has normal form with
/// pairing divisors `d = (d_1 | d_2 | ... | d_k)` and radical of rank `l`,
/// the boundary contributes `delta = (delta_1, ..., delta_{k+1})`:
/// `delta_i` generates the boundary image of the submodule where the form is
/// divisible by `d_i`, and `delta_{k+1}` generates the boundary image of the
/// radical. All entries are canonical associates (nonnegative over Z), so
/// equality of invariants is plain equality of tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormData {
    pub n: usize,
    pub l: usize,
    pub d: Vec<BigInt>,
    pub delta: Vec<BigInt>,
}

impl FormData {
    /// Number of pairing blocks; the rank satisfies n = 2*pairs + l.
    pub fn pairs(&self) -> usize {
        self.d.len()
    }

    /// The same data with every entry replaced by its canonical associate.
    pub fn normalized(&self, ring: RingSpec) -> FormData {
        let canon = |x: &BigInt| ring.associate_unit(x).1;
        FormData {
            n: self.n,
            l: self.l,
            d: self.d.iter().map(canon).collect(),
            delta: self.delta.iter().map(canon).collect(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "l": self.l,
            "d": self.d.iter().map(bigint_to_json).collect::<Vec<_>>(),
            "delta": self.delta.iter().map(bigint_to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<FormData> {
        let field = |name: &str| {
            v.get(name)
                .ok_or_else(|| Error::InvalidInput(format!("form data needs field '{name}'")))
        };
        let nat = |name: &str| -> Result<usize> {
            field(name)?
                .as_u64()
                .map(|x| x as usize)
                .ok_or_else(|| Error::InvalidInput(format!("field '{name}' must be a natural number")))
        };
        let list = |name: &str| -> Result<Vec<BigInt>> {
            field(name)?
                .as_array()
                .ok_or_else(|| Error::InvalidInput(format!("field '{name}' must be a list")))?
                .iter()
                .map(bigint_from_json)
                .collect()
        };
        Ok(FormData {
            n: nat("n")?,
            l: nat("l")?,
            d: list("d")?,
            delta: list("delta")?,
        })
    }
}

fn pid_guard(ring: RingSpec) -> Result<()> {
    if ring.is_pid() {
        Ok(())
    } else {
        Err(Error::UnsupportedRing(format!(
            "classification by form data needs Z or Z/p, not {ring:?}"
        )))
    }
}

/// Whether the tuple is the form data of some space: shape n = 2k + l with
/// k+1 boundary divisors, a nonzero divisor chain d_1 | ... | d_k, the
/// boundary chain delta_1 | ... | delta_{k+1}, and the interlocking bound
/// delta_i | (d_i/d_{i-1}) * delta_{i-1} between consecutive pairing blocks.
///
/// The radical slot delta_{k+1} is only bounded below (by delta_k); when
/// l = 0 the slot is immaterial and the realizing model normalizes it to
/// zero.
pub fn is_realizable(ring: RingSpec, fd: &FormData) -> bool {
    let k = fd.d.len();
    if fd.n != 2 * k + fd.l || fd.delta.len() != k + 1 {
        return false;
    }
    let fd = fd.normalized(ring);
    if fd.d.iter().any(|d| d.is_zero()) {
        return false;
    }
    for i in 1..k {
        if !ring.divides(&fd.d[i - 1], &fd.d[i]) {
            return false;
        }
    }
    for i in 1..=k {
        if !ring.divides(&fd.delta[i - 1], &fd.delta[i]) {
            return false;
        }
    }
    for i in 1..k {
        let q = ring
            .solve_scale(&fd.d[i - 1], &fd.d[i])
            .expect("divisor chain gives exact quotients");
        if !ring.divides(&fd.delta[i], &ring.mul(&q, &fd.delta[i - 1])) {
            return false;
        }
    }
    true
}

/// The standard space realizing the given form data: hyperbolic-style pairs
/// (e_i, f_i) with pairing d_i and boundary (delta_i, 0), then a radical of
/// rank l with boundary delta_{k+1} on every generator.
pub fn standard_model(ring: RingSpec, fd: &FormData) -> Result<FormedSpace> {
    if !is_realizable(ring, fd) {
        return Err(Error::NotRealizable(format!("{fd:?}")));
    }
    let fd = fd.normalized(ring);
    let k = fd.d.len();
    let mut lambda = Mat::zero(ring, fd.n, fd.n);
    let mut del = Mat::zero(ring, 1, fd.n);
    for i in 0..k {
        lambda.set(2 * i, 2 * i + 1, fd.d[i].clone());
        lambda.set(2 * i + 1, 2 * i, ring.neg(&fd.d[i]));
        del.set(0, 2 * i, fd.delta[i].clone());
    }
    for j in 0..fd.l {
        del.set(0, 2 * k + j, fd.delta[k].clone());
    }
    FormedSpace::new(ring, lambda, del)
}

/// The form data of a space over Z or Z/p.
pub fn form_data(a: &FormedSpace) -> Result<FormData> {
    pid_guard(a.ring)?;
    let nf = alternating_normal_form(&a.lambda)?;
    Ok(form_data_from(a, &nf))
}

/// Form data read off from a normal form of the alternating part. In normal
/// coordinates the submodule where the form is divisible by d_i is spanned
/// by (d_i/d_j) times the pair j for j <= i, the later pairs untouched, and
/// the radical; its boundary gcd is delta_i.
fn form_data_from(a: &FormedSpace, nf: &AltNormalForm) -> FormData {
    let ring = a.ring;
    let k = nf.pair_divisors.len();
    let b = a.del.mul(&nf.p);
    let bs: Vec<BigInt> = (0..a.rank).map(|j| b.get(0, j).clone()).collect();
    let mut delta = Vec::with_capacity(k + 1);
    for i in 0..k {
        let di = &nf.pair_divisors[i];
        let mut vals: Vec<BigInt> = Vec::with_capacity(a.rank);
        for j in 0..k {
            let c = if j <= i {
                ring.solve_scale(&nf.pair_divisors[j], di)
                    .expect("divisor chain gives exact quotients")
            } else {
                BigInt::one()
            };
            vals.push(ring.mul(&c, &bs[2 * j]));
            vals.push(ring.mul(&c, &bs[2 * j + 1]));
        }
        vals.extend_from_slice(&bs[2 * k..]);
        delta.push(ring.ideal_gcd(&vals));
    }
    delta.push(ring.ideal_gcd(&bs[2 * k..]));
    FormData {
        n: a.rank,
        l: nf.radical_rank,
        d: nf.pair_divisors.clone(),
        delta,
    }
}

/// Column-operation workspace for the boundary reduction: `phi` columns are
/// the current basis, expressed in the original coordinates, and always keep
/// the alternating form in normal shape.
struct Reduce {
    ring: RingSpec,
    phi: Mat,
    del: Mat,
}

impl Reduce {
    /// Boundary value of the current basis column j.
    fn bnd(&self, j: usize) -> BigInt {
        let mut acc = BigInt::zero();
        for r in 0..self.phi.rows {
            acc = self
                .ring
                .add(&acc, &self.ring.mul(self.del.get(0, r), self.phi.get(r, j)));
        }
        acc
    }

    fn col_addmul(&mut self, dst: usize, src: usize, c: &BigInt) {
        for r in 0..self.phi.rows {
            let v = self
                .ring
                .add(self.phi.get(r, dst), &self.ring.mul(c, self.phi.get(r, src)));
            self.phi.set(r, dst, v);
        }
    }

    fn col_scale(&mut self, j: usize, u: &BigInt) {
        for r in 0..self.phi.rows {
            let v = self.ring.mul(u, self.phi.get(r, j));
            self.phi.set(r, j, v);
        }
    }

    /// Replace columns (p, q) by (a11*p + a21*q, a12*p + a22*q).
    fn pair_mix(&mut self, p: usize, q: usize, a11: &BigInt, a21: &BigInt, a12: &BigInt, a22: &BigInt) {
        for r in 0..self.phi.rows {
            let cp = self.phi.get(r, p).clone();
            let cq = self.phi.get(r, q).clone();
            let np = self.ring.add(&self.ring.mul(a11, &cp), &self.ring.mul(a21, &cq));
            let nq = self.ring.add(&self.ring.mul(a12, &cp), &self.ring.mul(a22, &cq));
            self.phi.set(r, p, np);
            self.phi.set(r, q, nq);
        }
    }

    /// Determinant-one mix of pair i making the boundary (gcd, 0): with
    /// (a, b) the current pair boundaries and xa + yb = g, the new basis is
    /// (x e + y f, -(b/g) e + (a/g) f).
    fn gcd_fix(&mut self, i: usize) {
        let (p, q) = (2 * i, 2 * i + 1);
        let a = self.bnd(p);
        let b = self.bnd(q);
        let (g, co) = self.ring.bezout(&[a.clone(), b.clone()]);
        if g.is_zero() {
            return;
        }
        let qa = self.ring.solve_scale(&g, &a).expect("gcd divides");
        let qb = self.ring.solve_scale(&g, &b).expect("gcd divides");
        let neg_qb = self.ring.neg(&qb);
        self.pair_mix(p, q, &co[0], &co[1], &neg_qb, &qa);
    }

    /// Change of basis on the radical block: columns 2k..2k+l times U.
    fn radical_change(&mut self, k: usize, l: usize, u: &Mat) {
        let old: Vec<Vec<BigInt>> = (0..l).map(|j| self.phi.col_vec(2 * k + j)).collect();
        for c in 0..l {
            for r in 0..self.phi.rows {
                let mut acc = BigInt::zero();
                for t in 0..l {
                    acc = self.ring.add(&acc, &self.ring.mul(&old[t][r], u.get(t, c)));
                }
                self.phi.set(r, 2 * k + c, acc);
            }
        }
    }

    /// Mixing move on pairs i < j with vanishing f-boundaries: f_i += e_j and
    /// f_j += (d_j/d_i) e_i preserves the form; the follow-up gcd fixes push
    /// the new values back into the e-slots. Afterwards the boundary of e_i
    /// generates what it generated before together with the old boundary of
    /// e_j, and e_j's generates the old value together with (d_j/d_i) times
    /// e_i's.
    fn chain_mix(&mut self, i: usize, j: usize, d: &[BigInt]) {
        let q = self
            .ring
            .solve_scale(&d[i], &d[j])
            .expect("divisor chain gives exact quotients");
        self.col_addmul(2 * i + 1, 2 * j, &BigInt::one());
        self.col_addmul(2 * j + 1, 2 * i, &q);
        self.gcd_fix(i);
        self.gcd_fix(j);
    }
}

/// Invertible square matrix whose first column is the given vector; the
/// vector must be unimodular.
fn complete_unimodular_column(ring: RingSpec, c: &[BigInt]) -> Result<Mat> {
    let col = Mat::col_vector(ring, c);
    let psi = right_inverse(&col.transpose())
        .ok_or_else(|| Error::InvalidInput("coefficient vector is not unimodular".into()))?;
    let ker = kernel_basis(&psi.transpose())?;
    let m = col.hcat(&ker);
    if inverse(&m).is_none() {
        return Err(Error::InvalidInput("basis completion failed".into()));
    }
    Ok(m)
}

/// Form data together with a checked isomorphism from the standard model.
///
/// The reduction first normalizes the alternating form, then rebuilds the
/// boundary: a Bezout column makes one radical generator carry the radical
/// gcd and shears copy it to the rest; per-pair determinant-one mixes put
/// each pair's boundary into (value, 0) shape; adding the radical generator
/// to an f-column folds the radical gcd into the pair; and a decreasing
/// sweep of mixing moves forces each e-boundary to generate the boundary
/// image of its divisibility submodule. Unit scalings then match the
/// canonical divisors exactly, and the result is certified by constructing
/// the isomorphism.
pub fn reduce_to_standard(a: &FormedSpace) -> Result<(FormData, Morphism)> {
    pid_guard(a.ring)?;
    let ring = a.ring;
    let nf = alternating_normal_form(&a.lambda)?;
    let fd = form_data_from(a, &nf);
    let k = nf.pair_divisors.len();
    let l = nf.radical_rank;
    let mut ctx = Reduce {
        ring,
        phi: nf.p.clone(),
        del: a.del.clone(),
    };

    // Radical block: realize the gcd on the first generator, copy it out.
    if l > 0 {
        let rad: Vec<BigInt> = (0..l).map(|j| ctx.bnd(2 * k + j)).collect();
        let (g0, coeffs) = ring.bezout(&rad);
        if !g0.is_zero() {
            // The coefficient vector is unimodular: any common divisor of it
            // divides a combination equal to the gcd of values it produces.
            let u = complete_unimodular_column(ring, &coeffs)?;
            ctx.radical_change(k, l, &u);
            for j in 1..l {
                let t = ring
                    .solve_scale(&g0, &ctx.bnd(2 * k + j))
                    .expect("gcd divides every radical boundary");
                let c = ring.sub(&BigInt::one(), &t);
                ctx.col_addmul(2 * k + j, 2 * k, &c);
            }
        }
    }

    // Each pair to (gcd, 0) shape.
    for i in 0..k {
        ctx.gcd_fix(i);
    }

    // Fold the radical gcd into every pair through its f-column.
    if l > 0 {
        for i in 0..k {
            ctx.col_addmul(2 * i + 1, 2 * k, &BigInt::one());
            ctx.gcd_fix(i);
        }
    }

    // Decreasing sweep: tie pair m to its successor, then feed every earlier
    // pair into m, so e_m's boundary generates the whole divisibility image.
    for m in (0..k).rev() {
        if m + 1 < k {
            ctx.chain_mix(m, m + 1, &nf.pair_divisors);
        }
        for i in 0..m {
            ctx.chain_mix(i, m, &nf.pair_divisors);
        }
    }

    // Unit normalization against the computed invariants.
    for i in 0..k {
        if !ctx.bnd(2 * i + 1).is_zero() {
            return Err(Error::InvalidInput(format!(
                "boundary reduction left a nonzero f-boundary at pair {i}"
            )));
        }
        let (u, canon) = ring.associate_unit(&ctx.bnd(2 * i));
        if canon != fd.delta[i] {
            return Err(Error::InvalidInput(format!(
                "boundary reduction drifted at pair {i}: got {canon}, expected {}",
                fd.delta[i]
            )));
        }
        let uinv = ring.inv(&u).expect("associate witness is a unit");
        ctx.col_scale(2 * i, &u);
        ctx.col_scale(2 * i + 1, &uinv);
    }
    for j in 0..l {
        let (u, canon) = ring.associate_unit(&ctx.bnd(2 * k + j));
        if canon != fd.delta[k] {
            return Err(Error::InvalidInput(format!(
                "boundary reduction drifted at radical generator {j}"
            )));
        }
        ctx.col_scale(2 * k + j, &u);
    }

    let model = standard_model(ring, &fd)?;
    let witness = Morphism::iso(model, a.clone(), ctx.phi)?;
    Ok((fd, witness))
}

/// Checked isomorphism between two spaces, when one exists.
///
/// Over Z or Z/p the answer comes from comparing form data and composing the
/// two reductions. Over a finite non-principal ring the fallback is a
/// capped backtracking search over basis images, practical up to rank about
/// four for refutations; witnesses are often found well beyond that.
pub fn is_isomorphic(a: &FormedSpace, b: &FormedSpace) -> Result<Option<Morphism>> {
    if a.ring != b.ring {
        return Err(Error::RingMismatch(format!("{:?} vs {:?}", a.ring, b.ring)));
    }
    if a.rank != b.rank {
        return Ok(None);
    }
    if a.ring.is_pid() {
        let (fa, wa) = reduce_to_standard(a)?;
        let (fb, wb) = reduce_to_standard(b)?;
        if fa != fb {
            return Ok(None);
        }
        let wa_inv = wa
            .inverse_morphism()
            .expect("reduction witness is an isomorphism");
        return Ok(Some(wb.compose(&wa_inv)?));
    }
    search_isomorphism(a, b, SEARCH_CAP)
}

/// Backtracking search for an isomorphism over a finite ring: basis images
/// are chosen column by column under the boundary and pairing constraints.
fn search_isomorphism(a: &FormedSpace, b: &FormedSpace, cap: u64) -> Result<Option<Morphism>> {
    let ring = a.ring;
    let elems = ring.all_elements().map_err(|_| Error::InfiniteRing)?;
    let n = a.rank;
    if n == 0 {
        return Ok(Some(Morphism::iso(a.clone(), b.clone(), Mat::zero(ring, 0, 0))?));
    }
    let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    let mut visits = 0u64;
    let found = extend_column(a, b, &elems, &mut cols, &mut rows, &mut visits, cap)?;
    match found {
        Some(m) => Ok(Some(Morphism::iso(a.clone(), b.clone(), m)?)),
        None => Ok(None),
    }
}

fn extend_column(
    a: &FormedSpace,
    b: &FormedSpace,
    elems: &[BigInt],
    cols: &mut Vec<Vec<BigInt>>,
    rows: &mut Vec<Vec<BigInt>>,
    visits: &mut u64,
    cap: u64,
) -> Result<Option<Mat>> {
    let ring = a.ring;
    let n = a.rank;
    let j = cols.len();
    if j == n {
        let m = Mat::from_cols(ring, n, cols);
        if inverse(&m).is_some() {
            return Ok(Some(m));
        }
        return Ok(None);
    }
    let del_target = ring.reduce(a.del.get(0, j));
    let pair_targets: Vec<BigInt> = (0..j)
        .map(|i| ring.reduce(a.lambda.get(i, j)))
        .collect();
    let mut idx = vec![0usize; n];
    'candidates: loop {
        *visits += 1;
        if *visits > cap {
            return Err(Error::CapExceeded(format!(
                "isomorphism search visited more than {cap} candidates"
            )));
        }
        let t: Vec<BigInt> = idx.iter().map(|&i| elems[i].clone()).collect();
        let mut ok = dot(ring, &b.del.row_vec(0), &t) == del_target;
        if ok {
            for i in 0..j {
                if dot(ring, &rows[i], &t) != pair_targets[i] {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            let row = b.pairing_row(&t).row_vec(0);
            cols.push(t);
            rows.push(row);
            let r = extend_column(a, b, elems, cols, rows, visits, cap)?;
            cols.pop();
            rows.pop();
            if r.is_some() {
                return Ok(r);
            }
        }
        let mut pos = 0;
        loop {
            idx[pos] += 1;
            if idx[pos] < elems.len() {
                continue 'candidates;
            }
            idx[pos] = 0;
            pos += 1;
            if pos == n {
                break 'candidates;
            }
        }
    }
    Ok(None)
}

fn dot(ring: RingSpec, u: &[BigInt], v: &[BigInt]) -> BigInt {
    let mut acc = BigInt::zero();
    for (x, y) in u.iter().zip(v) {
        acc = ring.add(&acc, &ring.mul(x, y));
    }
    acc
}

/// Cancel one X summand: given that both boundaries are surjective and the
/// stabilized spaces M1 # X and M2 # X are isomorphic, produce a checked
/// isomorphism between M1 and M2.
///
/// Surjectivity is necessary: X # X and the boundaryless hyperbolic plane
/// are not isomorphic, but they become so after one more X summand, so the
/// precondition failure on such inputs is reported as `HypothesisFailed`.
pub fn cancel_x(m1: &FormedSpace, m2: &FormedSpace) -> Result<Option<Morphism>> {
    if m1.ring != m2.ring {
        return Err(Error::RingMismatch(format!("{:?} vs {:?}", m1.ring, m2.ring)));
    }
    let ring = m1.ring;
    check_surjective_boundaries(m1, m2)?;
    let x = FormedSpace::x(ring);
    let s1 = m1.sum(&x)?;
    let s2 = m2.sum(&x)?;
    let Some(phi) = is_isomorphic(&s1, &s2)? else {
        return Ok(None);
    };
    if ring.is_pid() {
        return is_isomorphic(m1, m2);
    }
    Ok(Some(cancel_x_with(m1, m2, &phi)?))
}

fn check_surjective_boundaries(m1: &FormedSpace, m2: &FormedSpace) -> Result<()> {
    for (name, m) in [("first", m1), ("second", m2)] {
        if !is_unimodular_rows(&m.del) {
            return Err(Error::HypothesisFailed(format!(
                "boundary of the {name} space is not surjective, and cancellation can fail \
                 without that: X # X and the boundaryless hyperbolic plane disagree yet \
                 agree after one more X"
            )));
        }
    }
    Ok(())
}

/// Cancellation with a caller-supplied isomorphism of the stabilized sums.
/// Works over any ring whose elements can be enumerated: the image of the
/// stabilizing generator is transported onto the standard one by a chain of
/// braid moves along arcs, after which the isomorphism restricts to the
/// complements.
pub fn cancel_x_with(m1: &FormedSpace, m2: &FormedSpace, phi: &Morphism) -> Result<Morphism> {
    if m1.ring != m2.ring {
        return Err(Error::RingMismatch(format!("{:?} vs {:?}", m1.ring, m2.ring)));
    }
    let ring = m1.ring;
    check_surjective_boundaries(m1, m2)?;
    let x = FormedSpace::x(ring);
    let s1 = m1.sum(&x)?;
    let s2 = m2.sum(&x)?;
    if phi.src != s1 || phi.tgt != s2 || !phi.is_iso() {
        return Err(Error::InvalidInput(
            "witness must be an isomorphism from the first space plus X to the second plus X"
                .into(),
        ));
    }
    let n1 = m1.rank;
    let n2 = m2.rank;
    let mut goal = vec![BigInt::zero(); n2 + 1];
    goal[n2] = BigInt::one();
    let mut h = phi.clone();
    let start = h.mat.col_vec(n1);
    if start != goal {
        for mv in arc_path(&s2, &start, &goal)? {
            h = mv.compose(&h)?;
        }
    }
    // The curved pairing against the stabilizing generator reads off the last
    // coordinate, so the transported map carries the leading block to the
    // leading block.
    let mut t = Mat::zero(ring, n2, n1);
    for j in 0..n1 {
        let col = h.mat.col_vec(j);
        if !col[n2].is_zero() {
            return Err(Error::InvalidInput(
                "transported witness does not preserve the complement".into(),
            ));
        }
        for r in 0..n2 {
            t.set(r, j, col[r].clone());
        }
    }
    Morphism::iso(m1.clone(), m2.clone(), t)
}

/// Automorphisms of `w` whose composite carries `start` to `goal`, found by
/// a breadth-first path through arcs of boundary one, stepping only between
/// arcs with unit pairing. Each step splits off the standard rank-two
/// summand the two arcs span and swaps its strands with the braiding.
fn arc_path(w: &FormedSpace, start: &[BigInt], goal: &[BigInt]) -> Result<Vec<Morphism>> {
    let ring = w.ring;
    let elems = ring.all_elements().map_err(|_| Error::InfiniteRing)?;
    let n = w.rank;
    let total = (elems.len() as u128).checked_pow(n as u32);
    if total.is_none_or(|t| t > ARC_BUDGET) {
        return Err(Error::CapExceeded(format!(
            "arc enumeration over {} elements in rank {n} exceeds the budget",
            elems.len()
        )));
    }
    let one = BigInt::one();
    let mut verts: Vec<Vec<BigInt>> = Vec::new();
    let mut index: HashMap<Vec<BigInt>, usize> = HashMap::new();
    let mut idx = vec![0usize; n];
    loop {
        let v: Vec<BigInt> = idx.iter().map(|&i| elems[i].clone()).collect();
        if dot(ring, &w.del.row_vec(0), &v) == one {
            index.insert(v.clone(), verts.len());
            verts.push(v);
        }
        let mut pos = 0;
        loop {
            idx[pos] += 1;
            if idx[pos] < elems.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
            if pos == n {
                return finish_arc_path(w, &verts, &index, start, goal);
            }
        }
    }
}

fn finish_arc_path(
    w: &FormedSpace,
    verts: &[Vec<BigInt>],
    index: &HashMap<Vec<BigInt>, usize>,
    start: &[BigInt],
    goal: &[BigInt],
) -> Result<Vec<Morphism>> {
    let ring = w.ring;
    let sv = *index
        .get(start)
        .ok_or_else(|| Error::NoPath("start vector is not an arc of boundary one".into()))?;
    let gv = *index
        .get(goal)
        .ok_or_else(|| Error::NoPath("goal vector is not an arc of boundary one".into()))?;
    let one = ring.reduce(&BigInt::one());
    let minus_one = ring.neg(&BigInt::one());
    let pairing_rows: Vec<Vec<BigInt>> = verts
        .iter()
        .map(|v| w.pairing_row(v).row_vec(0))
        .collect();
    let mut parent: Vec<Option<usize>> = vec![None; verts.len()];
    let mut seen = vec![false; verts.len()];
    let mut queue = std::collections::VecDeque::new();
    seen[sv] = true;
    queue.push_back(sv);
    while let Some(u) = queue.pop_front() {
        if u == gv {
            break;
        }
        for v in 0..verts.len() {
            if seen[v] {
                continue;
            }
            let p = dot(ring, &pairing_rows[u], &verts[v]);
            if p == one || p == minus_one {
                seen[v] = true;
                parent[v] = Some(u);
                queue.push_back(v);
            }
        }
    }
    if !seen[gv] {
        return Err(Error::NoPath(
            "no chain of unit-pairing arcs connects the stabilizing generators".into(),
        ));
    }
    let mut chain = vec![gv];
    while let Some(p) = parent[*chain.last().expect("chain is nonempty")] {
        chain.push(p);
    }
    chain.reverse();
    let mut moves = Vec::with_capacity(chain.len().saturating_sub(1));
    for step in chain.windows(2) {
        moves.push(edge_move(w, &verts[step[0]], &verts[step[1]])?);
    }
    Ok(moves)
}

/// Automorphism of `w` carrying arc `u` to arc `v`, given unit pairing
/// between them: split off the rank-two X-power they span and braid it.
fn edge_move(w: &FormedSpace, u: &[BigInt], v: &[BigInt]) -> Result<Morphism> {
    let ring = w.ring;
    let one = ring.reduce(&BigInt::one());
    let luv = w.pair(u, v);
    let (first, second, forward) = if luv == one {
        (u, v, true)
    } else {
        (v, u, false)
    };
    let f = Morphism::new(
        FormedSpace::x_power(ring, 2),
        w.clone(),
        Mat::from_cols(ring, w.rank, &[first.to_vec(), second.to_vec()]),
    )?;
    let (comp, wit) = split_off(w, &f)?;
    let beta = braid_matrix(ring, 1, 1);
    // The braiding carries the second strand to the first; its inverse goes
    // the other way.
    let swap = if forward {
        beta.inverse_morphism().expect("braiding is an isomorphism")
    } else {
        beta
    };
    let inner = Morphism::identity(&comp).direct_sum(&swap)?;
    let wit_inv = wit.inverse_morphism().expect("split witness is an isomorphism");
    wit.compose(&inner)?.compose(&wit_inv)
}
