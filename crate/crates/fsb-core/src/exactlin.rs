//! Exact matrix algebra over Z and Z/m.
//!
//! Everything here is witness-carrying: Smith normal forms store the
//! transformations and their inverses, kernels come with freeness
//! certificates, and unimodularity is decided by unit invariant factors.
//!
//! Z/m computations lift to Z. For kernels the lift adjoins m*I relation
//! columns, so correctness reduces to integer linear algebra. For Smith
//! forms the integer elimination runs on canonical representatives and the
//! diagonal is scaled by witness units into canonical divisor-of-m form at
//! the end; the divisibility chain survives because gcd(-, m) is monotone
//! with respect to integer divisibility.
//!
//! The count of unit invariant factors of a generator matrix equals the
//! maximal rank of a direct summand of the ambient module contained in the
//! generated submodule: splitting the SNF as N = sum d_i * (U^-1 e_i), the
//! unit-d_i columns span a summand, and conversely any rank-r summand inside
//! N maps onto a rank-r summand of N's projection to the unit coordinates.

use crate::error::{Error, Result};
use crate::ring::RingSpec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Dense row-major matrix with canonical entries in its ring.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    pub ring: RingSpec,
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Mat {}x{} over {:?} [", self.rows, self.cols, self.ring)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Mat {
    pub fn zero(ring: RingSpec, rows: usize, cols: usize) -> Self {
        Mat {
            ring,
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(ring: RingSpec, n: usize) -> Self {
        let mut m = Mat::zero(ring, n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_fn(ring: RingSpec, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut m = Mat::zero(ring, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn from_i64_rows(ring: RingSpec, rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat::from_fn(ring, r, c, |i, j| BigInt::from(rows[i][j]))
    }

    pub fn from_vec_rows(ring: RingSpec, rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat::from_fn(ring, r, c, |i, j| rows[i][j].clone())
    }

    pub fn row_vector(ring: RingSpec, v: &[BigInt]) -> Self {
        Mat::from_fn(ring, 1, v.len(), |_, j| v[j].clone())
    }

    pub fn col_vector(ring: RingSpec, v: &[BigInt]) -> Self {
        Mat::from_fn(ring, v.len(), 1, |i, _| v[i].clone())
    }

    pub fn from_cols(ring: RingSpec, dim: usize, cols: &[Vec<BigInt>]) -> Self {
        assert!(cols.iter().all(|c| c.len() == dim), "ragged columns");
        Mat::from_fn(ring, dim, cols.len(), |i, j| cols[j][i].clone())
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = self.ring.reduce(&v);
    }

    pub fn row_vec(&self, i: usize) -> Vec<BigInt> {
        (0..self.cols).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn col_vec(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.ring, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.ring, other.ring, "ring mismatch in mul");
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut out = Mat::zero(self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j) + a * b;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn mul_col(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "shape mismatch in mul_col");
        (0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for j in 0..self.cols {
                    acc += self.get(i, j) * &v[j];
                }
                self.ring.reduce(&acc)
            })
            .collect()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.ring, self.rows, self.cols, |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.ring, self.rows, self.cols, |i, j| self.get(i, j) - other.get(i, j))
    }

    pub fn neg(&self) -> Mat {
        Mat::from_fn(self.ring, self.rows, self.cols, |i, j| -self.get(i, j))
    }

    pub fn scale(&self, c: &BigInt) -> Mat {
        Mat::from_fn(self.ring, self.rows, self.cols, |i, j| self.get(i, j) * c)
    }

    pub fn hcat(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.ring, other.ring);
        Mat::from_fn(self.ring, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn vcat(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        assert_eq!(self.ring, other.ring);
        Mat::from_fn(self.ring, self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j).clone()
            } else {
                other.get(i - self.rows, j).clone()
            }
        })
    }

    pub fn select_cols(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(self.ring, self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(self.ring, idx.len(), self.cols, |i, j| self.get(idx[i], j).clone())
    }

    /// Block diagonal of self and other.
    pub fn direct_sum(&self, other: &Mat) -> Mat {
        assert_eq!(self.ring, other.ring);
        Mat::from_fn(self.ring, self.rows + other.rows, self.cols + other.cols, |i, j| {
            if i < self.rows && j < self.cols {
                self.get(i, j).clone()
            } else if i >= self.rows && j >= self.cols {
                other.get(i - self.rows, j - self.cols).clone()
            } else {
                BigInt::zero()
            }
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.get(i, j).is_one()
                    } else {
                        self.get(i, j).is_zero()
                    }
                })
            })
    }

    /// Reinterpret entries in another ring (canonicalizing).
    pub fn cast(&self, ring: RingSpec) -> Mat {
        Mat::from_fn(ring, self.rows, self.cols, |i, j| self.get(i, j).clone())
    }

    pub fn max_abs(&self) -> BigInt {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_else(BigInt::zero)
    }
}

/// Smith normal form with transformation witnesses: U*A*V = D.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub u: Mat,
    pub u_inv: Mat,
    pub d: Mat,
    pub v: Mat,
    pub v_inv: Mat,
}

impl SnfResult {
    /// The diagonal of D, length min(rows, cols).
    pub fn diag(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d.get(i, i).clone()).collect()
    }

    pub fn unit_count(&self) -> usize {
        let ring = self.d.ring;
        self.diag().iter().filter(|x| ring.is_unit(x)).count()
    }

    pub fn nonzero_count(&self) -> usize {
        self.diag().iter().filter(|x| !x.is_zero()).count()
    }

    /// Re-checks every stored equation; used by tests and debug callers.
    pub fn verify(&self, a: &Mat) -> bool {
        let ring = a.ring;
        if self.u.mul(a).mul(&self.v) != self.d {
            return false;
        }
        if !self.u.mul(&self.u_inv).is_identity() || !self.u_inv.mul(&self.u).is_identity() {
            return false;
        }
        if !self.v.mul(&self.v_inv).is_identity() || !self.v_inv.mul(&self.v).is_identity() {
            return false;
        }
        // Diagonal shape, canonical entries, divisibility chain.
        for i in 0..self.d.rows {
            for j in 0..self.d.cols {
                if i != j && !self.d.get(i, j).is_zero() {
                    return false;
                }
            }
        }
        let diag = self.diag();
        for (i, x) in diag.iter().enumerate() {
            let (_, canon) = ring.associate_unit(x);
            if *x != canon {
                return false;
            }
            if i + 1 < diag.len() && !ring.divides(x, &diag[i + 1]) {
                return false;
            }
            // Zeros must trail.
            if i + 1 < diag.len() && x.is_zero() && !diag[i + 1].is_zero() {
                return false;
            }
        }
        true
    }
}

/// Elimination workspace tracking A together with U, U^-1, V, V^-1.
struct Workspace {
    a: Mat,
    u: Mat,
    u_inv: Mat,
    v: Mat,
    v_inv: Mat,
}

impl Workspace {
    fn new(a: &Mat) -> Self {
        let ring = a.ring;
        Workspace {
            a: a.clone(),
            u: Mat::identity(ring, a.rows),
            u_inv: Mat::identity(ring, a.rows),
            v: Mat::identity(ring, a.cols),
            v_inv: Mat::identity(ring, a.cols),
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for m in [&mut self.a, &mut self.u] {
            for col in 0..m.cols {
                let x = m.get(i, col).clone();
                let y = m.get(j, col).clone();
                m.set(i, col, y);
                m.set(j, col, x);
            }
        }
        // U_inv gets the inverse op on columns.
        let m = &mut self.u_inv;
        for row in 0..m.rows {
            let x = m.get(row, i).clone();
            let y = m.get(row, j).clone();
            m.set(row, i, y);
            m.set(row, j, x);
        }
    }

    /// row_j += c * row_i on A and U; inverse op on U_inv columns.
    fn add_row(&mut self, i: usize, j: usize, c: &BigInt) {
        assert_ne!(i, j);
        if c.is_zero() {
            return;
        }
        for m in [&mut self.a, &mut self.u] {
            for col in 0..m.cols {
                let v = m.get(j, col) + c * m.get(i, col);
                m.set(j, col, v);
            }
        }
        let m = &mut self.u_inv;
        for row in 0..m.rows {
            let v = m.get(row, i) - c * m.get(row, j);
            m.set(row, i, v);
        }
    }

    /// col_j += c * col_i on A and V; inverse op on V_inv rows.
    fn add_col(&mut self, i: usize, j: usize, c: &BigInt) {
        assert_ne!(i, j);
        if c.is_zero() {
            return;
        }
        for m in [&mut self.a, &mut self.v] {
            for row in 0..m.rows {
                let v = m.get(row, j) + c * m.get(row, i);
                m.set(row, j, v);
            }
        }
        let m = &mut self.v_inv;
        for col in 0..m.cols {
            let v = m.get(i, col) - c * m.get(j, col);
            m.set(i, col, v);
        }
    }

    /// Scale row i by a unit u.
    fn scale_row(&mut self, i: usize, unit: &BigInt) {
        let ring = self.a.ring;
        let inv = ring.inv(unit).expect("scale_row requires a unit");
        for m in [&mut self.a, &mut self.u] {
            for col in 0..m.cols {
                let v = m.get(i, col) * unit;
                m.set(i, col, v);
            }
        }
        let m = &mut self.u_inv;
        for row in 0..m.rows {
            let v = m.get(row, i) * &inv;
            m.set(row, i, v);
        }
    }

    /// Apply [[s, t],[p, q]] with determinant a unit to rows (i, j) of A, U;
    /// the inverse acts on columns (i, j) of U_inv.
    fn row_transform2(&mut self, i: usize, j: usize, s: &BigInt, t: &BigInt, p: &BigInt, q: &BigInt) {
        let ring = self.a.ring;
        let det = ring.reduce(&(s * q - t * p));
        let det_inv = ring.inv(&det).expect("row_transform2 determinant must be a unit");
        for m in [&mut self.a, &mut self.u] {
            for col in 0..m.cols {
                let x = m.get(i, col).clone();
                let y = m.get(j, col).clone();
                m.set(i, col, s * &x + t * &y);
                m.set(j, col, p * &x + q * &y);
            }
        }
        // Inverse of [[s,t],[p,q]] is det^-1 [[q,-t],[-p,s]], applied on the right.
        let m = &mut self.u_inv;
        for row in 0..m.rows {
            let x = m.get(row, i).clone();
            let y = m.get(row, j).clone();
            m.set(row, i, (&x * q - &y * p) * &det_inv);
            m.set(row, j, (-(&x) * t + &y * s) * &det_inv);
        }
    }

    /// Column analogue of `row_transform2`: columns (i, j) of A, V get
    /// [[s, p],[t, q]] acting by new_i = s*ci + t*cj, new_j = p*ci + q*cj.
    fn col_transform2(&mut self, i: usize, j: usize, s: &BigInt, t: &BigInt, p: &BigInt, q: &BigInt) {
        let ring = self.a.ring;
        let det = ring.reduce(&(s * q - t * p));
        let det_inv = ring.inv(&det).expect("col_transform2 determinant must be a unit");
        for m in [&mut self.a, &mut self.v] {
            for row in 0..m.rows {
                let x = m.get(row, i).clone();
                let y = m.get(row, j).clone();
                m.set(row, i, s * &x + t * &y);
                m.set(row, j, p * &x + q * &y);
            }
        }
        let m = &mut self.v_inv;
        for col in 0..m.cols {
            let x = m.get(i, col).clone();
            let y = m.get(j, col).clone();
            m.set(i, col, (&x * q - &y * p) * &det_inv);
            m.set(j, col, (-(&x) * t + &y * s) * &det_inv);
        }
    }
}

/// Smith normal form with witnesses over Z or Z/m.
pub fn smith_normal_form(a: &Mat) -> SnfResult {
    let ring = a.ring;
    let mut w = Workspace::new(a);
    let n = a.rows.min(a.cols);
    let mut t = 0usize;
    while t < n {
        // Pick the nonzero entry with smallest representative magnitude.
        let mut best: Option<(usize, usize)> = None;
        for i in t..a.rows {
            for j in t..a.cols {
                if w.a.get(i, j).is_zero() {
                    continue;
                }
                match best {
                    None => best = Some((i, j)),
                    Some((bi, bj)) => {
                        if w.a.get(i, j).abs() < w.a.get(bi, bj).abs() {
                            best = Some((i, j));
                        }
                    }
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.swap_rows(t, pi);
        // Column swap via the 2x2 transform with a permutation block.
        if pj != t {
            w.col_transform2(t, pj, &BigInt::zero(), &BigInt::one(), &BigInt::one(), &BigInt::zero());
        }

        'pivot: loop {
            // Clear column t.
            for i in (t + 1)..a.rows {
                if w.a.get(i, t).is_zero() {
                    continue;
                }
                let p = w.a.get(t, t).clone();
                let x = w.a.get(i, t).clone();
                if let Some(qt) = exact_quotient(&p, &x) {
                    w.add_row(t, i, &(-qt));
                } else {
                    let (g, s, tt) = xgcd(&p, &x);
                    let (xp, pp) = (&x / &g, &p / &g);
                    w.row_transform2(t, i, &s, &tt, &(-xp), &pp);
                }
            }
            // Clear row t.
            let mut row_cleared = true;
            for j in (t + 1)..a.cols {
                if w.a.get(t, j).is_zero() {
                    continue;
                }
                let p = w.a.get(t, t).clone();
                let x = w.a.get(t, j).clone();
                if let Some(qt) = exact_quotient(&p, &x) {
                    w.add_col(t, j, &(-qt));
                } else {
                    let (g, s, tt) = xgcd(&p, &x);
                    let (xp, pp) = (&x / &g, &p / &g);
                    w.col_transform2(t, j, &s, &tt, &(-xp), &pp);
                    row_cleared = false;
                }
            }
            if !row_cleared {
                continue 'pivot;
            }
            // Column may have been refilled by column ops.
            if ((t + 1)..a.rows).any(|i| !w.a.get(i, t).is_zero()) {
                continue 'pivot;
            }
            // Divisibility repair: pivot must divide the remaining block.
            let p = w.a.get(t, t).clone();
            let mut offender = None;
            'scan: for i in (t + 1)..a.rows {
                for j in (t + 1)..a.cols {
                    if exact_quotient(&p, w.a.get(i, j)).is_none() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    w.add_row(i, t, &BigInt::one());
                    continue 'pivot;
                }
                None => break 'pivot,
            }
        }
        t += 1;
    }
    // Canonicalize diagonal entries by unit scaling.
    for i in 0..n {
        let x = w.a.get(i, i).clone();
        if x.is_zero() {
            continue;
        }
        let (unit, canon) = ring.associate_unit(&x);
        if !unit.is_one() {
            w.scale_row(i, &unit);
        }
        debug_assert_eq!(*w.a.get(i, i), canon);
    }
    SnfResult {
        u: w.u,
        u_inv: w.u_inv,
        d: w.a,
        v: w.v,
        v_inv: w.v_inv,
    }
}

/// Integer quotient q with x = q*p when p divides x exactly (representatives).
fn exact_quotient(p: &BigInt, x: &BigInt) -> Option<BigInt> {
    if x.is_zero() {
        return Some(BigInt::zero());
    }
    if p.is_zero() {
        return None;
    }
    let (q, r) = x.div_rem(p);
    r.is_zero().then_some(q)
}

/// g = gcd(a, b) > 0 with s*a + t*b = g.
fn xgcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let eg = a.extended_gcd(b);
    let (mut g, mut s, mut t) = (eg.gcd, eg.x, eg.y);
    if g.is_negative() {
        g = -g;
        s = -s;
        t = -t;
    }
    debug_assert_eq!(&s * a + &t * b, g.clone());
    (g, s, t)
}

/// True iff the rows of A form a unimodular sequence (A has a right inverse).
pub fn is_unimodular_rows(a: &Mat) -> bool {
    if a.rows == 0 {
        return true;
    }
    if a.rows > a.cols {
        return false;
    }
    let snf = smith_normal_form(a);
    snf.unit_count() == a.rows
}

/// True iff the columns of A form a unimodular sequence.
pub fn is_unimodular_sequence(a: &Mat) -> bool {
    is_unimodular_rows(&a.transpose())
}

/// Right inverse X with A*X = I, when the rows are unimodular.
pub fn right_inverse(a: &Mat) -> Option<Mat> {
    if a.rows > a.cols {
        return None;
    }
    let ring = a.ring;
    let snf = smith_normal_form(a);
    if snf.unit_count() < a.rows {
        return None;
    }
    let mut d_plus = Mat::zero(ring, a.cols, a.rows);
    for i in 0..a.rows {
        let inv = ring.inv(snf.d.get(i, i))?;
        d_plus.set(i, i, inv);
    }
    let x = snf.v.mul(&d_plus).mul(&snf.u);
    debug_assert!(a.mul(&x).is_identity());
    Some(x)
}

/// Two-sided inverse of a square matrix, when invertible over the ring.
pub fn inverse(a: &Mat) -> Option<Mat> {
    if a.rows != a.cols {
        return None;
    }
    let x = right_inverse(a)?;
    if x.mul(a).is_identity() {
        Some(x)
    } else {
        None
    }
}

/// Solve A x = b for a column vector b.
pub fn solve(a: &Mat, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows, b.len());
    let ring = a.ring;
    let snf = smith_normal_form(a);
    let ub = snf.u.mul_col(b);
    let n = a.rows.min(a.cols);
    let mut y = vec![BigInt::zero(); a.cols];
    for (i, ub_i) in ub.iter().enumerate() {
        if i < n {
            let d = snf.d.get(i, i);
            if d.is_zero() {
                if !ub_i.is_zero() {
                    return None;
                }
            } else {
                y[i] = ring.solve_scale(d, ub_i)?;
            }
        } else if !ub_i.is_zero() {
            return None;
        }
    }
    let x = snf.v.mul_col(&y);
    debug_assert_eq!(a.mul_col(&x), b.iter().map(|t| ring.reduce(t)).collect::<Vec<_>>());
    Some(x)
}

/// Basis of ker A as matrix columns, with a freeness certificate over Z/m.
pub fn kernel_basis(a: &Mat) -> Result<Mat> {
    let ring = a.ring;
    match ring {
        RingSpec::Z => {
            let snf = smith_normal_form(a);
            let n = a.rows.min(a.cols);
            let mut idx = Vec::new();
            for j in 0..a.cols {
                let zero = j >= n || snf.d.get(j, j).is_zero();
                if zero {
                    idx.push(j);
                }
            }
            let basis = snf.v.select_cols(&idx);
            Ok(column_hermite(&basis))
        }
        RingSpec::Zmod { m } => {
            let z = RingSpec::Z;
            let lift = a.cast(z);
            let mut rel = Mat::zero(z, a.rows, a.rows);
            for i in 0..a.rows {
                rel.set(i, i, BigInt::from(m));
            }
            let aug = lift.hcat(&rel);
            let kint = kernel_basis(&aug)?;
            // Project to the first block of coordinates; its column lattice
            // contains m*Z^cols, hence has full rank cols.
            let p = Mat::from_fn(z, a.cols, kint.cols, |i, j| kint.get(i, j).clone());
            if a.cols == 0 {
                return Ok(Mat::zero(ring, 0, 0));
            }
            let snf = smith_normal_form(&p);
            let mut basis_cols = Vec::new();
            for i in 0..a.cols {
                let b = if i < p.rows.min(p.cols) {
                    snf.d.get(i, i).clone()
                } else {
                    BigInt::zero()
                };
                if b.is_one() {
                    basis_cols.push(i);
                } else if b == BigInt::from(m) || b.is_zero() {
                    // Contributes nothing mod m. b = 0 cannot occur since the
                    // lattice has full rank; kept for robustness.
                } else {
                    // Invariant factor strictly between 1 and m: a cyclic
                    // summand of order m/b, so the kernel is not free.
                    return Err(Error::NonFreeKernel);
                }
            }
            let basis = snf.u_inv.select_cols(&basis_cols).cast(ring);
            // Certificate: every column really is in the kernel.
            for j in 0..basis.cols {
                let img = a.mul_col(&basis.col_vec(j));
                if img.iter().any(|x| !x.is_zero()) {
                    return Err(Error::NonFreeKernel);
                }
            }
            Ok(basis)
        }
    }
}

/// Number of unit invariant factors of `gens`, i.e. the maximal rank of a
/// direct summand of the rank-`ambient_rank` ambient module lying inside the
/// column span of `gens`.
pub fn relative_rank(ambient_rank: usize, gens: &Mat) -> Result<usize> {
    if gens.rows != ambient_rank {
        return Err(Error::DimensionMismatch(format!(
            "generators live in rank {} but ambient rank is {}",
            gens.rows, ambient_rank
        )));
    }
    Ok(smith_normal_form(gens).unit_count())
}

/// Deterministic-by-seed invertible matrix: a product of `steps` random
/// elementary operations (transvections, signed swaps, unit scalings).
pub fn random_unimodular(n: usize, ring: RingSpec, seed: u64, steps: usize) -> Mat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_unimodular_with(n, ring, steps, &mut rng)
}

/// Like `random_unimodular` but drawing from a caller-owned generator.
pub fn random_unimodular_with<R: Rng>(n: usize, ring: RingSpec, steps: usize, rng: &mut R) -> Mat {
    let mut m = Mat::identity(ring, n);
    if n == 0 {
        return m;
    }
    for _ in 0..steps {
        let op = rng.gen_range(0..3u8);
        match op {
            0 | 1 if n >= 2 => {
                // Transvection: row_j += c * row_i.
                let i = rng.gen_range(0..n);
                let mut j = rng.gen_range(0..n);
                while j == i {
                    j = rng.gen_range(0..n);
                }
                let c = match ring {
                    RingSpec::Z => BigInt::from([-2i64, -1, 1, 2][rng.gen_range(0..4)]),
                    RingSpec::Zmod { m: md } => BigInt::from(rng.gen_range(1..md)),
                };
                for col in 0..n {
                    let v = m.get(j, col) + &c * m.get(i, col);
                    m.set(j, col, v);
                }
            }
            _ => {
                if n >= 2 && rng.gen_bool(0.5) {
                    // Signed swap, determinant 1.
                    let i = rng.gen_range(0..n);
                    let mut j = rng.gen_range(0..n);
                    while j == i {
                        j = rng.gen_range(0..n);
                    }
                    for col in 0..n {
                        let x = m.get(i, col).clone();
                        let y = m.get(j, col).clone();
                        m.set(i, col, y);
                        m.set(j, col, -x);
                    }
                } else {
                    // Unit scaling of one row.
                    let i = rng.gen_range(0..n);
                    let u = match ring {
                        RingSpec::Z => BigInt::from(-1),
                        RingSpec::Zmod { m: md } => {
                            let units: Vec<u64> =
                                (1..md).filter(|x| x.gcd(&md) == 1).collect();
                            BigInt::from(units[rng.gen_range(0..units.len())])
                        }
                    };
                    for col in 0..n {
                        let v = m.get(i, col) * &u;
                        m.set(i, col, v);
                    }
                }
            }
        }
    }
    m
}

/// Congruence normal form of an alternating matrix: P^T A P is a block
/// diagonal of pairing blocks [[0, d_i], [-d_i, 0]] followed by a zero
/// radical block, with d_1 | d_2 | ... canonical.
#[derive(Clone, Debug)]
pub struct AltNormalForm {
    /// Invertible change of basis; columns are the new basis vectors.
    pub p: Mat,
    /// Pairing divisors d_1 | d_2 | ...
    pub pair_divisors: Vec<BigInt>,
    pub radical_rank: usize,
}

impl AltNormalForm {
    pub fn unit_pairs(&self, ring: RingSpec) -> usize {
        self.pair_divisors.iter().filter(|d| ring.is_unit(d)).count()
    }

    /// The block diagonal matrix this form asserts.
    pub fn normal_matrix(&self, ring: RingSpec) -> Mat {
        let n = 2 * self.pair_divisors.len() + self.radical_rank;
        let mut m = Mat::zero(ring, n, n);
        for (i, d) in self.pair_divisors.iter().enumerate() {
            m.set(2 * i, 2 * i + 1, d.clone());
            m.set(2 * i + 1, 2 * i, -d.clone());
        }
        m
    }

    pub fn verify(&self, a: &Mat) -> bool {
        let ring = a.ring;
        if inverse(&self.p).is_none() {
            return false;
        }
        if self.p.transpose().mul(a).mul(&self.p) != self.normal_matrix(ring) {
            return false;
        }
        for (i, d) in self.pair_divisors.iter().enumerate() {
            let (_, canon) = ring.associate_unit(d);
            if *d != canon || d.is_zero() {
                return false;
            }
            if i + 1 < self.pair_divisors.len() && !ring.divides(d, &self.pair_divisors[i + 1]) {
                return false;
            }
        }
        2 * self.pair_divisors.len() + self.radical_rank == a.rows
    }
}

/// Congruence workspace: B stays congruent to the input via B <- E^T B E
/// while P accumulates the basis columns.
struct CongrWorkspace {
    b: Mat,
    p: Mat,
}

impl CongrWorkspace {
    fn cswap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        let n = self.b.rows;
        for r in 0..n {
            let x = self.b.get(r, i).clone();
            let y = self.b.get(r, j).clone();
            self.b.set(r, i, y);
            self.b.set(r, j, x);
        }
        for c in 0..n {
            let x = self.b.get(i, c).clone();
            let y = self.b.get(j, c).clone();
            self.b.set(i, c, y);
            self.b.set(j, c, x);
        }
        for r in 0..self.p.rows {
            let x = self.p.get(r, i).clone();
            let y = self.p.get(r, j).clone();
            self.p.set(r, i, y);
            self.p.set(r, j, x);
        }
    }

    /// New basis vector e_j += c * e_i.
    fn cadd(&mut self, i: usize, j: usize, c: &BigInt) {
        if c.is_zero() || i == j {
            return;
        }
        let n = self.b.rows;
        for r in 0..n {
            let v = self.b.get(r, j) + c * self.b.get(r, i);
            self.b.set(r, j, v);
        }
        for col in 0..n {
            let v = self.b.get(j, col) + c * self.b.get(i, col);
            self.b.set(j, col, v);
        }
        for r in 0..self.p.rows {
            let v = self.p.get(r, j) + c * self.p.get(r, i);
            self.p.set(r, j, v);
        }
    }

    /// Unit rescale of basis vector e_i.
    fn cscale(&mut self, i: usize, u: &BigInt) {
        let n = self.b.rows;
        for r in 0..n {
            let v = self.b.get(r, i) * u;
            self.b.set(r, i, v);
        }
        for col in 0..n {
            let v = self.b.get(i, col) * u;
            self.b.set(i, col, v);
        }
        for r in 0..self.p.rows {
            let v = self.p.get(r, i) * u;
            self.p.set(r, i, v);
        }
    }

    /// Basis change on the pair (i, j): new e_i = s e_i + t e_j,
    /// new e_j = pq e_i + q e_j, with unit determinant.
    fn c2x2(&mut self, i: usize, j: usize, s: &BigInt, t: &BigInt, pq: &BigInt, q: &BigInt) {
        let n = self.b.rows;
        for r in 0..n {
            let x = self.b.get(r, i).clone();
            let y = self.b.get(r, j).clone();
            self.b.set(r, i, s * &x + t * &y);
            self.b.set(r, j, pq * &x + q * &y);
        }
        for col in 0..n {
            let x = self.b.get(i, col).clone();
            let y = self.b.get(j, col).clone();
            self.b.set(i, col, s * &x + t * &y);
            self.b.set(j, col, pq * &x + q * &y);
        }
        for r in 0..self.p.rows {
            let x = self.p.get(r, i).clone();
            let y = self.p.get(r, j).clone();
            self.p.set(r, i, s * &x + t * &y);
            self.p.set(r, j, pq * &x + q * &y);
        }
    }
}

/// Alternating congruence normal form over Z or Z/m. The input must be
/// alternating (skew with zero diagonal); returns the basis P, the pairing
/// chain, and the radical rank.
pub fn alternating_normal_form(a: &Mat) -> crate::error::Result<AltNormalForm> {
    let ring = a.ring;
    let n = a.rows;
    if a.cols != n {
        return Err(Error::DimensionMismatch("alternating matrix must be square".into()));
    }
    for i in 0..n {
        if !a.get(i, i).is_zero() {
            return Err(Error::NotAlternating(format!("nonzero diagonal at {i}")));
        }
        for j in 0..n {
            if !ring.reduce(&(a.get(i, j) + a.get(j, i))).is_zero() {
                return Err(Error::NotAlternating(format!("not skew at ({i},{j})")));
            }
        }
    }
    let mut w = CongrWorkspace {
        b: a.clone(),
        p: Mat::identity(ring, n),
    };
    let mut pairs = Vec::new();
    let mut t = 0usize;
    while t + 1 < n {
        // Smallest nonzero entry in the remaining block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..n {
            for j in t..n {
                if i == j || w.b.get(i, j).is_zero() {
                    continue;
                }
                best = match best {
                    None => Some((i, j)),
                    Some((bi, bj)) => {
                        if w.b.get(i, j).abs() < w.b.get(bi, bj).abs() {
                            Some((i, j))
                        } else {
                            Some((bi, bj))
                        }
                    }
                };
            }
        }
        let Some((bi, mut bj)) = best else { break };
        if bi != t {
            w.cswap(t, bi);
            if bj == t {
                bj = bi;
            }
        }
        if bj != t + 1 {
            w.cswap(t + 1, bj);
        }

        'pivot: loop {
            let p = w.b.get(t, t + 1).clone();
            debug_assert!(!p.is_zero());
            // Improve the pivot to divide row t entries.
            for k in (t + 2)..n {
                let x = w.b.get(t, k).clone();
                if x.is_zero() || exact_quotient(&p, &x).is_some() {
                    continue;
                }
                let (g, s, tt) = xgcd(&p, &x);
                let (xg, pg) = (&x / &g, &p / &g);
                // New e_{t+1} = s e_{t+1} + tt e_k picks up the gcd.
                w.c2x2(t + 1, k, &s, &tt, &(-xg), &pg);
                continue 'pivot;
            }
            // Improve to divide row t+1 entries.
            for k in (t + 2)..n {
                let x = w.b.get(t + 1, k).clone();
                if x.is_zero() || exact_quotient(&p, &x).is_some() {
                    continue;
                }
                // B[t+1][t] = -p; combine e_t with e_k.
                let (g, s, tt) = xgcd(&(-p.clone()), &x);
                let (xg, pg) = (&x / &g, -(&p) / &g);
                w.c2x2(t, k, &s, &tt, &(-xg), &pg);
                continue 'pivot;
            }
            // Clear both rows.
            for k in (t + 2)..n {
                let x = w.b.get(t, k).clone();
                if !x.is_zero() {
                    let q = exact_quotient(&p, &x).expect("pivot divides row t");
                    w.cadd(t + 1, k, &(-q));
                }
            }
            for k in (t + 2)..n {
                let x = w.b.get(t + 1, k).clone();
                if !x.is_zero() {
                    let q = exact_quotient(&p, &x).expect("pivot divides row t+1");
                    w.cadd(t, k, &q);
                }
            }
            // Divisibility repair against the remaining block.
            let mut offender = None;
            'scan: for oi in (t + 2)..n {
                for oj in (t + 2)..n {
                    if exact_quotient(&p, w.b.get(oi, oj)).is_none() {
                        offender = Some(oi);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(oi) => {
                    w.cadd(oi, t, &BigInt::one());
                    continue 'pivot;
                }
                None => break 'pivot,
            }
        }
        let piv = w.b.get(t, t + 1).clone();
        let (unit, canon) = ring.associate_unit(&piv);
        if !unit.is_one() {
            w.cscale(t, &unit);
        }
        debug_assert_eq!(*w.b.get(t, t + 1), canon);
        pairs.push(canon);
        t += 2;
    }
    let nf = AltNormalForm {
        p: w.p,
        radical_rank: n - 2 * pairs.len(),
        pair_divisors: pairs,
    };
    debug_assert!(nf.verify(a));
    Ok(nf)
}

/// Column-style Hermite form over Z: a canonical basis of the column
/// lattice. Over other rings the input is returned unchanged (construction
/// order is already deterministic there).
pub fn column_hermite(a: &Mat) -> Mat {
    if a.ring != RingSpec::Z || a.cols == 0 {
        return a.clone();
    }
    let mut m = a.clone();
    let (rows, cols) = (m.rows, m.cols);
    let mut pivot_col = 0usize;
    for r in 0..rows {
        if pivot_col >= cols {
            break;
        }
        // Reduce row r across columns pivot_col.. to a single gcd entry.
        loop {
            let mut best: Option<usize> = None;
            for j in pivot_col..cols {
                if m.get(r, j).is_zero() {
                    continue;
                }
                best = match best {
                    None => Some(j),
                    Some(b) => {
                        if m.get(r, j).abs() < m.get(r, b).abs() {
                            Some(j)
                        } else {
                            Some(b)
                        }
                    }
                };
            }
            let Some(jmin) = best else { break };
            // Swap into pivot position.
            if jmin != pivot_col {
                for i in 0..rows {
                    let x = m.get(i, pivot_col).clone();
                    let y = m.get(i, jmin).clone();
                    m.set(i, pivot_col, y);
                    m.set(i, jmin, x);
                }
            }
            let p = m.get(r, pivot_col).clone();
            let mut done = true;
            for j in (pivot_col + 1)..cols {
                let x = m.get(r, j).clone();
                if x.is_zero() {
                    continue;
                }
                let q = div_round(&x, &p);
                for i in 0..rows {
                    let v = m.get(i, j) - &q * m.get(i, pivot_col);
                    m.set(i, j, v);
                }
                if !m.get(r, j).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m.get(r, pivot_col).is_zero() {
            continue;
        }
        // Positive pivot; reduce earlier columns at this row.
        if m.get(r, pivot_col).is_negative() {
            for i in 0..rows {
                let v = -m.get(i, pivot_col);
                m.set(i, pivot_col, v);
            }
        }
        let p = m.get(r, pivot_col).clone();
        for j in 0..pivot_col {
            let x = m.get(r, j).clone();
            let q = x.div_floor(&p);
            if q.is_zero() {
                continue;
            }
            for i in 0..rows {
                let v = m.get(i, j) - &q * m.get(i, pivot_col);
                m.set(i, j, v);
            }
        }
        pivot_col += 1;
    }
    m
}

/// Quotient rounding toward the nearest integer, for Hermite reduction.
fn div_round(x: &BigInt, p: &BigInt) -> BigInt {
    let (q, r) = x.div_rem(p);
    let two_r = BigInt::from(2) * r.abs();
    if two_r > p.abs() {
        if (x.is_negative()) == (p.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}
