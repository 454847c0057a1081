//! Seeded verification suites behind `fsb suite`.
//!
//! Each suite runs a canonical list of checks. A check owns a random
//! stream derived from the suite seed and its position in the list, so a
//! budget that skips or truncates one check never shifts the randomness of
//! another: reports are a pure function of (seed, budget, version).
//!
//! Budgets are honest-partial-run controls: a check whose estimated cost
//! exceeds the budget is reported as skipped, and trial-based checks that
//! get truncated emit an explicit remainder record for the trials they did
//! not run.

use fsb_core::exactlin::random_unimodular_with;
use fsb_core::{
    alternating_normal_form, arc_genus, arc_genus_bruteforce, aut_group, boundary_invariant_rank,
    braid_matrix, build_complex, cancel_x, connectivity_report, destabilization_count_check,
    form_data, hyperbolic_genus, hyperbolic_genus_of_form, is_unimodular_rows, kernel_basis,
    random_formed_space, reduce_to_standard, standard_model, ComplexKind, Error, FormData,
    FormedSpace, Mat, Morphism, Result, RingSpec, SimplicialComplex,
};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

pub const SUITE_NAMES: [&str; 6] =
    ["braid", "classify", "genus", "connectivity", "counting", "cancellation"];

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    /// The mathematical fact the check verifies.
    pub provenance: String,
    pub inputs: Value,
    pub outputs: Value,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub budget: Option<u64>,
    pub version: &'static str,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub all_passed: bool,
    pub checks: Vec<CheckRecord>,
}

impl SuiteReport {
    pub fn first_failure(&self) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.status == "failed")
    }
}

/// A failed check: what was observed, and evidence to reproduce it.
pub struct Failure {
    pub outputs: Value,
    pub certificate: Value,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { outputs: json!({}), certificate: json!({ "error": e.to_string() }) }
    }
}

fn fail(reason: &str, evidence: Value) -> Failure {
    Failure { outputs: json!({}), certificate: json!({ "reason": reason, "evidence": evidence }) }
}

type CheckResult = std::result::Result<Value, Failure>;

struct Suite {
    seed: u64,
    budget: u64,
    checks: Vec<CheckRecord>,
}

impl Suite {
    fn new(seed: u64, budget: Option<u64>) -> Suite {
        Suite { seed, budget: budget.unwrap_or(u64::MAX), checks: Vec::new() }
    }

    /// Stable per-check stream: mixing the check index keeps streams
    /// independent of what other checks ran.
    fn rng_for(&self, index: usize) -> ChaCha8Rng {
        let salt = (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        ChaCha8Rng::seed_from_u64(self.seed ^ salt)
    }

    /// Run one check unless its estimated cost exceeds the budget. The
    /// cost unit is roughly "instances examined" and each check documents
    /// its own estimate in `inputs`.
    fn run(
        &mut self,
        name: &str,
        provenance: &str,
        cost: u64,
        inputs: Value,
        f: impl FnOnce(&mut ChaCha8Rng) -> CheckResult,
    ) {
        let index = self.checks.len();
        if cost > self.budget {
            self.checks.push(CheckRecord {
                name: name.into(),
                provenance: provenance.into(),
                inputs,
                outputs: json!({
                    "skipped_reason":
                        format!("estimated cost {cost} exceeds budget {}", self.budget)
                }),
                status: "skipped",
                certificate: None,
            });
            return;
        }
        let mut rng = self.rng_for(index);
        let record = match f(&mut rng) {
            Ok(outputs) => CheckRecord {
                name: name.into(),
                provenance: provenance.into(),
                inputs,
                outputs,
                status: "passed",
                certificate: None,
            },
            Err(failure) => CheckRecord {
                name: name.into(),
                provenance: provenance.into(),
                inputs,
                outputs: failure.outputs,
                status: "failed",
                certificate: Some(failure.certificate),
            },
        };
        self.checks.push(record);
    }

    /// Run a seeded-trial check, truncating the trial count to the budget.
    /// A truncated run is followed by an explicit skipped record for the
    /// remainder.
    fn run_trials(
        &mut self,
        name: &str,
        provenance: &str,
        requested: u64,
        inputs: Value,
        f: impl FnOnce(&mut ChaCha8Rng, u64) -> CheckResult,
    ) {
        let trials = requested.min(self.budget);
        if trials == 0 {
            self.run(name, provenance, u64::MAX, inputs, |_| unreachable!());
            return;
        }
        let mut inputs = inputs;
        if let Value::Object(map) = &mut inputs {
            map.insert("trials".into(), json!(trials));
            map.insert("trials_requested".into(), json!(requested));
        }
        self.run(name, provenance, trials, inputs, |rng| f(rng, trials));
        if trials < requested {
            self.checks.push(CheckRecord {
                name: format!("{name}_remainder"),
                provenance: provenance.into(),
                inputs: json!({ "trials": requested - trials }),
                outputs: json!({
                    "skipped_reason": format!(
                        "budget {} truncated the requested {requested} trials to {trials}",
                        self.budget
                    )
                }),
                status: "skipped",
                certificate: None,
            });
        }
    }

    fn finish(self, suite: &str, budget: Option<u64>) -> SuiteReport {
        let passed = self.checks.iter().filter(|c| c.status == "passed").count();
        let failed = self.checks.iter().filter(|c| c.status == "failed").count();
        let skipped = self.checks.iter().filter(|c| c.status == "skipped").count();
        SuiteReport {
            suite: suite.into(),
            seed: self.seed,
            budget,
            version: env!("CARGO_PKG_VERSION"),
            passed,
            failed,
            skipped,
            all_passed: failed == 0,
            checks: self.checks,
        }
    }
}

/// Run a named suite with one seed and an optional cost budget.
pub fn run_suite(name: &str, seed: u64, budget: Option<u64>) -> Result<SuiteReport> {
    let mut s = Suite::new(seed, budget);
    match name {
        "braid" => braid_suite(&mut s),
        "classify" => classify_suite(&mut s),
        "genus" => genus_suite(&mut s),
        "connectivity" => connectivity_suite(&mut s),
        "counting" => counting_suite(&mut s),
        "cancellation" => cancellation_suite(&mut s),
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown suite '{other}': expected one of {}",
                SUITE_NAMES.join(", ")
            )))
        }
    }
    Ok(s.finish(name, budget))
}

fn rings3() -> [RingSpec; 3] {
    [RingSpec::Z, RingSpec::zmod(2), RingSpec::zmod(3)]
}

fn ring_label(ring: RingSpec) -> String {
    crate::io::ring_to_string(ring)
}

fn mat_rows(m: &Mat) -> Value {
    fsb_core::formed::mat_to_json_rows(m)
}

// ---------------------------------------------------------------------
// braid
// ---------------------------------------------------------------------

/// The transvection x -> x + lambda(x, v) v as a matrix.
fn transvection_mat(a: &FormedSpace, v: &[BigInt]) -> Mat {
    let w = a.lambda.mul_col(v);
    Mat::from_fn(a.ring, a.rank, a.rank, |i, j| {
        let mut e = &w[j] * &v[i];
        if i == j {
            e += 1;
        }
        a.ring.reduce(&e)
    })
}

/// A random automorphism of the n-th X-power: a short word of transvections
/// along vectors with coordinate sum zero (such vectors are killed by the
/// boundary, so the transvections preserve it).
fn random_xpower_aut(ring: RingSpec, n: usize, rng: &mut ChaCha8Rng) -> Result<Morphism> {
    let space = FormedSpace::x_power(ring, n);
    let mut mat = Mat::identity(ring, n);
    if n >= 2 {
        for _ in 0..3 {
            let mut v: Vec<BigInt> =
                (0..n).map(|_| BigInt::from(rng.gen_range(-1i64..=1))).collect();
            let total: BigInt = v.iter().sum();
            let k = rng.gen_range(0..n);
            v[k] -= total;
            let v: Vec<BigInt> = v.iter().map(|x| ring.reduce(x)).collect();
            mat = transvection_mat(&space, &v).mul(&mat);
        }
    }
    Morphism::iso(space.clone(), space, mat)
}

fn braid_suite(s: &mut Suite) {
    s.run(
        "braiding_grid",
        "the braiding of two X-powers is a checked isomorphism with explicit inverse \
         for every split of total rank at most twelve",
        200,
        json!({ "rings": ["Z", "Zmod:2", "Zmod:3"], "max_total_rank": 12 }),
        |_| {
            let mut pairs = 0u64;
            for ring in rings3() {
                for n in 1..=11usize {
                    for m in 1..=(12 - n) {
                        let b = braid_matrix(ring, n, m);
                        let pulled = b.mat.transpose().mul(&b.tgt.lambda).mul(&b.mat);
                        if pulled != b.src.lambda || b.tgt.del.mul(&b.mat) != b.src.del {
                            return Err(fail(
                                "braiding does not preserve the form and boundary",
                                json!({ "ring": ring_label(ring), "n": n, "m": m }),
                            ));
                        }
                        let inv = b.inverse_morphism().ok_or_else(|| {
                            fail(
                                "braiding lacks an inverse",
                                json!({ "ring": ring_label(ring), "n": n, "m": m }),
                            )
                        })?;
                        if !inv.compose(&b)?.mat.is_identity()
                            || !b.compose(&inv)?.mat.is_identity()
                        {
                            return Err(fail(
                                "braiding inverse does not cancel",
                                json!({ "ring": ring_label(ring), "n": n, "m": m }),
                            ));
                        }
                        pairs += 1;
                    }
                }
            }
            Ok(json!({ "pairs_verified": pairs }))
        },
    );

    s.run(
        "yang_baxter",
        "the braiding satisfies the braid relation on three X summands",
        10,
        json!({ "strands": 3, "rings": ["Z", "Zmod:2", "Zmod:3"] }),
        |_| {
            for ring in rings3() {
                let x = FormedSpace::x(ring);
                let b = braid_matrix(ring, 1, 1);
                let id = Morphism::identity(&x);
                let b12 = b.direct_sum(&id)?;
                let b23 = id.direct_sum(&b)?;
                let lhs = b12.compose(&b23)?.compose(&b12)?;
                let rhs = b23.compose(&b12)?.compose(&b23)?;
                if lhs.mat != rhs.mat {
                    return Err(fail(
                        "braid relation fails",
                        json!({
                            "ring": ring_label(ring),
                            "lhs": mat_rows(&lhs.mat),
                            "rhs": mat_rows(&rhs.mat),
                        }),
                    ));
                }
            }
            Ok(json!({ "relation": "b12 b23 b12 = b23 b12 b23" }))
        },
    );

    s.run_trials(
        "braiding_naturality",
        "the braiding commutes with sums of automorphisms: beta (phi + psi) = (psi + phi) beta",
        100,
        json!({ "ranks": "2..=6 each side" }),
        |rng, trials| {
            for t in 0..trials {
                let ring = rings3()[rng.gen_range(0..3)];
                let n = rng.gen_range(2..=6usize);
                let m = rng.gen_range(2..=6usize);
                let phi = random_xpower_aut(ring, n, rng)?;
                let psi = random_xpower_aut(ring, m, rng)?;
                let beta = braid_matrix(ring, n, m);
                let lhs = beta.compose(&phi.direct_sum(&psi)?)?;
                let rhs = psi.direct_sum(&phi)?.compose(&beta)?;
                if lhs.mat != rhs.mat {
                    return Err(fail(
                        "naturality square does not commute",
                        json!({
                            "trial": t,
                            "ring": ring_label(ring),
                            "n": n,
                            "m": m,
                            "phi": mat_rows(&phi.mat),
                            "psi": mat_rows(&psi.mat),
                        }),
                    ));
                }
            }
            Ok(json!({}))
        },
    );
}

// ---------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------

/// A random realizable invariant tuple over Z with small entries. Entries
/// follow the divisor chains by construction, and the radical boundary slot
/// is normalized exactly as computed form data reports it.
fn random_form_data(rng: &mut ChaCha8Rng) -> FormData {
    let k = rng.gen_range(0..=3usize);
    let l = rng.gen_range(0..=(8 - 2 * k).min(3));
    let mut d: Vec<i64> = Vec::new();
    let mut delta: Vec<i64> = Vec::new();
    let mut cur_d = 1i64;
    let mut cur_del = [0i64, 1, 1, 2, 3][rng.gen_range(0..5)];
    for i in 0..k {
        let step = [1i64, 1, 2, 3, 4][rng.gen_range(0..5)];
        let step = if cur_d * step > 8 { 1 } else { step };
        cur_d *= step;
        if i > 0 && cur_del != 0 {
            let divisors: Vec<i64> = (1..=step).filter(|t| step % t == 0).collect();
            let b = divisors[rng.gen_range(0..divisors.len())];
            cur_del = if cur_del * b > 8 { cur_del } else { cur_del * b };
        }
        d.push(cur_d);
        delta.push(cur_del);
    }
    let tail = if l == 0 || (k > 0 && cur_del == 0) {
        0
    } else if k == 0 {
        [0i64, 1, 2, 3][rng.gen_range(0..4)]
    } else {
        let c = [0i64, 1, 2, 3][rng.gen_range(0..4)];
        if cur_del * c > 8 {
            cur_del
        } else {
            cur_del * c
        }
    };
    delta.push(tail);
    FormData {
        n: 2 * k + l,
        l,
        d: d.into_iter().map(BigInt::from).collect(),
        delta: delta.into_iter().map(BigInt::from).collect(),
    }
}

/// Congruent copy of a space along a random unimodular base change drawn
/// from the given generator.
fn twist_with(a: &FormedSpace, steps: usize, rng: &mut ChaCha8Rng) -> Result<FormedSpace> {
    let p = random_unimodular_with(a.rank, a.ring, steps, rng);
    FormedSpace::new(a.ring, p.transpose().mul(&a.lambda).mul(&p), a.del.mul(&p))
}

fn classify_suite(s: &mut Suite) {
    s.run_trials(
        "round_trip_witnesses",
        "a random realizable invariant tuple realizes to its model, survives a random \
         unimodular base change, and reclassifies to the same tuple with a checked isomorphism",
        200,
        json!({ "ring": "Z", "rank": "<= 8", "base_change_steps": 25 }),
        |rng, trials| {
            for t in 0..trials {
                let fd = random_form_data(rng);
                if !fsb_core::is_realizable(RingSpec::Z, &fd) {
                    return Err(fail(
                        "sampler produced an unrealizable tuple",
                        json!({ "trial": t, "form_data": fd.to_json() }),
                    ));
                }
                let model = standard_model(RingSpec::Z, &fd)?;
                let twisted = twist_with(&model, 25, rng)?;
                let (back, witness) = reduce_to_standard(&twisted)?;
                if back != fd {
                    return Err(fail(
                        "round trip changed the invariant",
                        json!({
                            "trial": t,
                            "expected": fd.to_json(),
                            "got": back.to_json(),
                            "twisted_lambda": mat_rows(&twisted.lambda),
                            "twisted_del": mat_rows(&twisted.del),
                        }),
                    ));
                }
                if !witness.is_iso() || witness.tgt != twisted {
                    return Err(fail(
                        "reduction witness is not an isomorphism onto the input",
                        json!({ "trial": t }),
                    ));
                }
            }
            Ok(json!({}))
        },
    );

    s.run_trials(
        "hyperbolic_shift_law",
        "summing a boundaryless hyperbolic plane prepends a unit pairing divisor and \
         repeats the leading boundary divisor",
        50,
        json!({ "ring": "Z", "rank": "<= 5 before the sum" }),
        |rng, trials| {
            let h = FormedSpace::hyperbolic(RingSpec::Z, 1);
            for t in 0..trials {
                let a = random_formed_space(RingSpec::Z, 1 + (t as usize % 5), rng.gen());
                let f = form_data(&a)?;
                let g = form_data(&a.sum(&h)?)?;
                let mut d_shift = vec![BigInt::one()];
                d_shift.extend(f.d.iter().cloned());
                let mut delta_shift = vec![f.delta[0].clone()];
                delta_shift.extend(f.delta.iter().cloned());
                let expected =
                    FormData { n: f.n + 2, l: f.l, d: d_shift, delta: delta_shift };
                if g != expected {
                    return Err(fail(
                        "shift law violated",
                        json!({
                            "trial": t,
                            "before": f.to_json(),
                            "after": g.to_json(),
                            "expected": expected.to_json(),
                        }),
                    ));
                }
            }
            Ok(json!({}))
        },
    );
}

// ---------------------------------------------------------------------
// genus
// ---------------------------------------------------------------------

/// The expected block matrix of an alternating congruence normal form.
fn normal_form_blocks(ring: RingSpec, divisors: &[BigInt], radical: usize) -> Mat {
    let k = divisors.len();
    let n = 2 * k + radical;
    Mat::from_fn(ring, n, n, |i, j| {
        if i / 2 == j / 2 && i / 2 < k {
            if i % 2 == 0 && j == i + 1 {
                return divisors[i / 2].clone();
            }
            if i % 2 == 1 && j + 1 == i {
                return ring.reduce(&-divisors[i / 2].clone());
            }
        }
        BigInt::zero()
    })
}

fn genus_suite(s: &mut Suite) {
    s.run_trials(
        "hyperbolic_genus_oracles",
        "half the unit invariant factor count equals the unit pairing count of an \
         independently constructed congruence normal form",
        100,
        json!({ "rings": ["Z", "Zmod:2", "Zmod:3"], "rank": "<= 8" }),
        |rng, trials| {
            for t in 0..trials {
                let ring = rings3()[(t % 3) as usize];
                let rank = rng.gen_range(1..=8usize);
                let a = random_formed_space(ring, rank, rng.gen());
                let snf_genus = hyperbolic_genus(&a);
                let nf = alternating_normal_form(&a.lambda)?;
                let rebuilt = nf.p.transpose().mul(&a.lambda).mul(&nf.p);
                if rebuilt != normal_form_blocks(ring, &nf.pair_divisors, nf.radical_rank) {
                    return Err(fail(
                        "congruence witness does not reach the claimed normal form",
                        json!({ "trial": t, "lambda": mat_rows(&a.lambda) }),
                    ));
                }
                let constructive = nf.unit_pairs(ring);
                if snf_genus != constructive {
                    return Err(fail(
                        "hyperbolic genus oracles disagree",
                        json!({
                            "trial": t,
                            "ring": ring_label(ring),
                            "lambda": mat_rows(&a.lambda),
                            "smith": snf_genus,
                            "constructive": constructive,
                        }),
                    ));
                }
            }
            Ok(json!({}))
        },
    );

    // Every alternating form over F_2 up to rank 5, every unimodular
    // boundary: the closed formula must agree with the exhaustive
    // splitting search.
    s.run(
        "arc_genus_sweep_f2",
        "closed-formula arc genus equals the exhaustive splitting search on every space \
         with unimodular boundary over the two-element field through rank five",
        33_000,
        json!({ "ring": "Zmod:2", "ranks": [1, 2, 3, 4, 5] }),
        |_| {
            let mut spaces = 0u64;
            for rank in 1..=5usize {
                sweep_field_spaces(RingSpec::zmod(2), rank, &mut spaces)?;
            }
            Ok(json!({ "spaces": spaces }))
        },
    );

    s.run(
        "arc_genus_sweep_f3",
        "closed-formula arc genus equals the exhaustive splitting search on every space \
         with unimodular boundary over the three-element field through rank three",
        800,
        json!({ "ring": "Zmod:3", "ranks": [1, 2, 3] }),
        |_| {
            let mut spaces = 0u64;
            for rank in 1..=3usize {
                sweep_field_spaces(RingSpec::zmod(3), rank, &mut spaces)?;
            }
            Ok(json!({ "spaces": spaces }))
        },
    );

    s.run_trials(
        "arc_genus_sampled_f3",
        "closed-formula arc genus equals the exhaustive splitting search on seeded \
         rank-four and rank-five spaces over the three-element field",
        300,
        json!({ "ring": "Zmod:3", "ranks": [4, 5] }),
        |rng, trials| {
            let ring = RingSpec::zmod(3);
            for t in 0..trials {
                let rank = 4 + (t as usize % 2);
                let a = loop {
                    let c = random_formed_space(ring, rank, rng.gen());
                    if is_unimodular_rows(&c.del) {
                        break c;
                    }
                };
                let report = arc_genus(&a)?;
                let brute = arc_genus_bruteforce(&a, 2_000_000)?;
                if report.g_x != brute {
                    return Err(fail(
                        "arc genus formula disagrees with the splitting search",
                        json!({
                            "trial": t,
                            "lambda": mat_rows(&a.lambda),
                            "del": mat_rows(&a.del),
                            "formula": report.g_x,
                            "search": brute,
                        }),
                    ));
                }
            }
            Ok(json!({}))
        },
    );

    s.run_trials(
        "kernel_hyperbolic_genus_inequality",
        "restricting a random integral form to the kernel of a unimodular functional \
         loses at most one hyperbolic pair",
        100,
        json!({ "ring": "Z", "rank": "2..=7" }),
        |rng, trials| {
            for t in 0..trials {
                let rank = rng.gen_range(2..=7usize);
                let lambda = random_formed_space(RingSpec::Z, rank, rng.gen()).lambda;
                let l = random_unimodular_row(RingSpec::Z, rank, rng);
                let k = kernel_basis(&l)?;
                let restricted = k.transpose().mul(&lambda).mul(&k);
                let g_full = hyperbolic_genus_of_form(&lambda);
                let g_ker = hyperbolic_genus_of_form(&restricted);
                if g_ker + 1 < g_full {
                    return Err(fail(
                        "kernel lost more than one hyperbolic pair",
                        json!({
                            "trial": t,
                            "lambda": mat_rows(&lambda),
                            "functional": mat_rows(&l),
                            "genus": g_full,
                            "kernel_genus": g_ker,
                        }),
                    ));
                }
            }
            Ok(json!({}))
        },
    );

    s.run_trials(
        "kernel_arc_genus_inequality",
        "cutting along a functional jointly unimodular with the boundary loses at most \
         two from the arc genus",
        100,
        json!({ "ring": "Z", "rank": "3..=6" }),
        |rng, trials| {
            for t in 0..trials {
                let rank = rng.gen_range(3..=6usize);
                let (a, l) = loop {
                    let c = random_formed_space(RingSpec::Z, rank, rng.gen());
                    let l = random_unimodular_row(RingSpec::Z, rank, rng);
                    if is_unimodular_rows(&l.vcat(&c.del)) {
                        break (c, l);
                    }
                };
                let g_m = arc_genus(&a)?.g_x;
                let k = kernel_basis(&l)?;
                let sub = FormedSpace::new(
                    RingSpec::Z,
                    k.transpose().mul(&a.lambda).mul(&k),
                    a.del.mul(&k),
                )?;
                let g_sub = arc_genus(&sub)?.g_x;
                if g_sub + 2 < g_m {
                    return Err(fail(
                        "kernel lost more than two from the arc genus",
                        json!({
                            "trial": t,
                            "lambda": mat_rows(&a.lambda),
                            "del": mat_rows(&a.del),
                            "functional": mat_rows(&l),
                            "genus": g_m,
                            "kernel_genus": g_sub,
                        }),
                    ));
                }
            }
            Ok(json!({}))
        },
    );

    s.run_trials(
        "boundary_rank_lower_bound",
        "the boundary invariant rank is at least the arc genus minus two on integral \
         spaces with unimodular boundary",
        50,
        json!({ "ring": "Z", "rank": "2..=6" }),
        |rng, trials| {
            for t in 0..trials {
                let rank = rng.gen_range(2..=6usize);
                let a = loop {
                    let c = random_formed_space(RingSpec::Z, rank, rng.gen());
                    if is_unimodular_rows(&c.del) {
                        break c;
                    }
                };
                let r = boundary_invariant_rank(&a)?.rank;
                let g = arc_genus(&a)?.g_x;
                if r + 2 < g {
                    return Err(fail(
                        "boundary invariant rank fell below the arc genus bound",
                        json!({
                            "trial": t,
                            "lambda": mat_rows(&a.lambda),
                            "del": mat_rows(&a.del),
                            "r": r,
                            "g_x": g,
                        }),
                    ));
                }
            }
            Ok(json!({}))
        },
    );
}

/// Exhaustive comparison of the arc genus formula against the splitting
/// search for one rank over a prime field.
fn sweep_field_spaces(ring: RingSpec, rank: usize, spaces: &mut u64) -> CheckResult {
    let q = ring.modulus().expect("field sweep needs a finite ring");
    let pairs = rank * (rank - 1) / 2;
    let form_count = (q as u128).pow(pairs as u32);
    let del_count = (q as u128).pow(rank as u32);
    for form_index in 0..form_count {
        // Decode the strictly-upper triangle from a base-q index.
        let mut upper = vec![vec![BigInt::zero(); rank]; rank];
        let mut rest = form_index;
        for i in 0..rank {
            for j in (i + 1)..rank {
                upper[i][j] = BigInt::from((rest % q as u128) as u64);
                rest /= q as u128;
            }
        }
        let lambda = Mat::from_fn(ring, rank, rank, |i, j| {
            if i < j {
                upper[i][j].clone()
            } else if i > j {
                ring.reduce(&-upper[j][i].clone())
            } else {
                BigInt::zero()
            }
        });
        for del_index in 1..del_count {
            let mut rest = del_index;
            let del = Mat::from_fn(ring, 1, rank, |_, _| {
                let e = BigInt::from((rest % q as u128) as u64);
                rest /= q as u128;
                e
            });
            let a = FormedSpace::new(ring, lambda.clone(), del)?;
            let report = arc_genus(&a)?;
            let brute = arc_genus_bruteforce(&a, 2_000_000)?;
            if report.g_x != brute {
                return Err(fail(
                    "arc genus formula disagrees with the splitting search",
                    json!({
                        "ring": ring_label(ring),
                        "lambda": mat_rows(&a.lambda),
                        "del": mat_rows(&a.del),
                        "formula": report.g_x,
                        "search": brute,
                    }),
                ));
            }
            *spaces += 1;
        }
    }
    Ok(json!({}))
}

/// A random unimodular row with entries in a small box, found by rejection.
fn random_unimodular_row(ring: RingSpec, rank: usize, rng: &mut ChaCha8Rng) -> Mat {
    loop {
        let row = Mat::from_fn(ring, 1, rank, |_, _| BigInt::from(rng.gen_range(-3i64..=3)));
        if is_unimodular_rows(&row) {
            return row;
        }
    }
}

// ---------------------------------------------------------------------
// connectivity
// ---------------------------------------------------------------------

/// Vertices and low simplices of a complex, exported when a homology check
/// fails so the offending cycle can be recomputed independently.
fn complex_dump(cx: &SimplicialComplex, through_dim: usize) -> Value {
    json!({
        "vertices": cx
            .vertices
            .iter()
            .map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "simplices_by_dim": cx
            .simplices_by_dim
            .iter()
            .take(through_dim + 1)
            .collect::<Vec<_>>(),
    })
}

fn connectivity_check(
    s: &mut Suite,
    name: &str,
    provenance: &str,
    cost: u64,
    inputs: Value,
    a: FormedSpace,
    kind: ComplexKind,
    bound: i64,
) {
    s.run(name, provenance, cost, inputs, move |_| {
        let cap = (bound + 1).max(0) as usize;
        let report = connectivity_report(&a, kind.clone(), cap)?;
        if report.predicted_bound != Some(bound) {
            return Err(fail(
                "closed-form bound disagrees with the expected value",
                json!({
                    "expected": bound,
                    "computed": report.predicted_bound,
                    "formula": report.formula,
                }),
            ));
        }
        if !report.is_trivial_through(bound) {
            let cx = build_complex(&a, kind.clone(), cap)?;
            let offending = (report.verified_connectivity + 1).max(0) as usize;
            return Err(fail(
                "reduced homology does not vanish through the predicted bound",
                json!({
                    "predicted_bound": bound,
                    "verified_connectivity": report.verified_connectivity,
                    "homology": crate::io::homology_json(&report),
                    "complex": complex_dump(&cx, offending + 1),
                }),
            ));
        }
        Ok(json!({
            "predicted_bound": bound,
            "verified_connectivity": report.verified_connectivity,
            "formula": report.formula,
        }))
    });
}

fn connectivity_suite(s: &mut Suite) {
    // Costs estimate candidate simplex tests; the budget compares against
    // these to decide what a partial run can afford.
    let f2 = RingSpec::zmod(2);
    let f3 = RingSpec::zmod(3);

    for (n, cost) in [(5usize, 2_000u64), (6, 3_000), (7, 30_000), (8, 300_000)] {
        let bound = (n as i64 - 5).div_euclid(3);
        connectivity_check(
            s,
            &format!("disordered_f2_rank_{n}"),
            "reduced integral homology of the disordered arc complex of an X-power \
             vanishes through (g - 5)/3 over a principal ideal ring",
            cost,
            json!({ "ring": "Zmod:2", "x_power": n, "bound": bound }),
            FormedSpace::x_power(f2, n),
            ComplexKind::D,
            bound,
        );
    }
    for (n, cost) in [(5usize, 5_000u64), (6, 40_000)] {
        let bound = (n as i64 - 5).div_euclid(3);
        connectivity_check(
            s,
            &format!("disordered_f3_rank_{n}"),
            "reduced integral homology of the disordered arc complex of an X-power \
             vanishes through (g - 5)/3 over a principal ideal ring",
            cost,
            json!({ "ring": "Zmod:3", "x_power": n, "bound": bound }),
            FormedSpace::x_power(f3, n),
            ComplexKind::D,
            bound,
        );
    }
    for (n, cost) in [(4usize, 500u64), (5, 2_000), (6, 50_000)] {
        let bound = n as i64 - 4;
        connectivity_check(
            s,
            &format!("nonseparating_f2_rank_{n}"),
            "reduced integral homology of the non-separating arc complex vanishes \
             through g - sr - 3",
            cost,
            json!({ "ring": "Zmod:2", "x_power": n, "bound": bound }),
            FormedSpace::x_power(f2, n),
            ComplexKind::B,
            bound,
        );
    }
    for (n, cost) in [(3usize, 100u64), (4, 2_000), (5, 20_000)] {
        let bound = n as i64 - 3;
        connectivity_check(
            s,
            &format!("arc_complex_f2_rank_{n}"),
            "reduced integral homology of the full arc complex vanishes through \
             rank - sr - 2 when the boundary is unimodular",
            cost,
            json!({ "ring": "Zmod:2", "x_power": n, "bound": bound }),
            FormedSpace::x_power(f2, n),
            ComplexKind::Aalg,
            bound,
        );
    }

    // Unimodular-vector complexes: a proper coset, and two full-module
    // instances. Bound r(M, N) - sr - 1.
    let zero_space = |rank: usize| {
        FormedSpace::new(f2, Mat::zero(f2, rank, rank), Mat::zero(f2, 1, rank)).unwrap()
    };
    let unit = |rank: usize, i: usize| {
        let mut v = vec![BigInt::zero(); rank];
        v[i] = BigInt::one();
        v
    };
    connectivity_check(
        s,
        "unimodular_coset_rank_5",
        "reduced integral homology of the unimodular-vector complex of a coset vanishes \
         through r - sr - 1",
        10_000,
        json!({ "ring": "Zmod:2", "rank": 5, "base": "e5", "span": "e1..e4", "bound": 2 }),
        zero_space(5),
        ComplexKind::U {
            base: unit(5, 4),
            subgens: (0..4).map(|i| unit(5, i)).collect(),
        },
        2,
    );
    connectivity_check(
        s,
        "unimodular_full_rank_4",
        "reduced integral homology of the unimodular-vector complex of the full module \
         vanishes through r - sr - 1",
        10_000,
        json!({ "ring": "Zmod:2", "rank": 4, "base": "0", "span": "full", "bound": 2 }),
        zero_space(4),
        ComplexKind::U {
            base: vec![BigInt::zero(); 4],
            subgens: (0..4).map(|i| unit(4, i)).collect(),
        },
        2,
    );
    connectivity_check(
        s,
        "unimodular_full_rank_5",
        "reduced integral homology of the unimodular-vector complex of the full module \
         vanishes through r - sr - 1",
        600_000,
        json!({ "ring": "Zmod:2", "rank": 5, "base": "0", "span": "full", "bound": 3 }),
        zero_space(5),
        ComplexKind::U {
            base: vec![BigInt::zero(); 5],
            subgens: (0..5).map(|i| unit(5, i)).collect(),
        },
        3,
    );
}

// ---------------------------------------------------------------------
// counting
// ---------------------------------------------------------------------

fn counting_suite(s: &mut Suite) {
    s.run(
        "ordered_simplex_coset_identity",
        "ordered destabilization tuples in the disordered complex are counted by the \
         automorphism order ratio",
        60_000,
        json!({ "ring": "Zmod:2", "n": "2..=6", "p": "0..=min(3, n-2)" }),
        |_| {
            let mut table = Vec::new();
            for n in 2..=6usize {
                for p in 0..=3.min(n - 2) {
                    let c = destabilization_count_check(n, p, RingSpec::zmod(2))?;
                    if !c.equal {
                        return Err(fail(
                            "ordered simplex count misses the order ratio",
                            json!({ "n": n, "p": p, "lhs": c.lhs.to_string(), "rhs": c.rhs.to_string() }),
                        ));
                    }
                    table.push(json!({
                        "n": n,
                        "p": p,
                        "ordered_simplices": c.lhs.to_string(),
                        "order_ratio": c.rhs.to_string(),
                    }));
                }
            }
            Ok(json!({ "identities": table }))
        },
    );

    s.run(
        "anchor_orders",
        "enumerated automorphism groups of small X-powers match the closed symplectic \
         order formulas, and the vertex count is their ratio",
        5_000,
        json!({ "ring": "Zmod:2", "anchors": { "aut_x5": 720, "aut_x4": 48, "vertices_n5": 15 } }),
        |_| {
            let f2 = RingSpec::zmod(2);
            let a5 = aut_group(&FormedSpace::x_power(f2, 5), 1_000)?;
            let a4 = aut_group(&FormedSpace::x_power(f2, 4), 1_000)?;
            let e5 = a5.elements.as_ref().map(Vec::len);
            let e4 = a4.elements.as_ref().map(Vec::len);
            if a5.order != Some(720) || e5 != Some(720) || a4.order != Some(48) || e4 != Some(48) {
                return Err(fail(
                    "group orders disagree with the anchors",
                    json!({ "order_x5": format!("{:?}", a5.order), "order_x4": format!("{:?}", a4.order) }),
                ));
            }
            let cx = build_complex(&FormedSpace::x_power(f2, 5), ComplexKind::D, 0)?;
            let vertices = cx.counts()[0];
            if vertices != 15 || 720 / 48 != 15 {
                return Err(fail(
                    "vertex count is not the order ratio",
                    json!({ "vertices": vertices }),
                ));
            }
            Ok(json!({ "vertices_n5": vertices }))
        },
    );
}

// ---------------------------------------------------------------------
// cancellation
// ---------------------------------------------------------------------

fn cancellation_suite(s: &mut Suite) {
    s.run_trials(
        "stable_cancellation_witnesses",
        "congruent integral spaces with surjective boundary have equal stabilized \
         invariants and cancellation returns a checked isomorphism",
        100,
        json!({ "ring": "Z", "rank": "2..=5" }),
        |rng, trials| {
            let x = FormedSpace::x(RingSpec::Z);
            for t in 0..trials {
                let rank = rng.gen_range(2..=5usize);
                let a = loop {
                    let c = random_formed_space(RingSpec::Z, rank, rng.gen());
                    if is_unimodular_rows(&c.del) {
                        break c;
                    }
                };
                let b = twist_with(&a, 20, rng)?;
                let fa = form_data(&a.sum(&x)?)?;
                let fb = form_data(&b.sum(&x)?)?;
                if fa != fb {
                    return Err(fail(
                        "stabilized invariants disagree for a congruent pair",
                        json!({ "trial": t, "first": fa.to_json(), "second": fb.to_json() }),
                    ));
                }
                let witness = cancel_x(&a, &b)?.ok_or_else(|| {
                    fail(
                        "cancellation found no isomorphism",
                        json!({
                            "trial": t,
                            "lambda": mat_rows(&a.lambda),
                            "del": mat_rows(&a.del),
                        }),
                    )
                })?;
                if !witness.is_iso() || witness.src != a || witness.tgt != b {
                    return Err(fail(
                        "cancellation witness is not an isomorphism between the summands",
                        json!({ "trial": t }),
                    ));
                }
            }
            Ok(json!({}))
        },
    );

    s.run(
        "documented_noncancellable_pair",
        "the second X-power and the boundaryless hyperbolic plane agree after one \
         stabilization yet are not isomorphic, and cancellation refuses them with the \
         surjectivity diagnostic",
        1,
        json!({ "ring": "Z", "pair": ["X^2", "(H, 0)"] }),
        |_| {
            let x = FormedSpace::x(RingSpec::Z);
            let a = FormedSpace::x_power(RingSpec::Z, 2);
            let h0 = FormedSpace::hyperbolic(RingSpec::Z, 1);
            let fa = form_data(&a.sum(&x)?)?;
            let fh = form_data(&h0.sum(&x)?)?;
            if fa != fh {
                return Err(fail(
                    "stabilized invariants should agree for the documented pair",
                    json!({ "first": fa.to_json(), "second": fh.to_json() }),
                ));
            }
            if form_data(&a)? == form_data(&h0)? {
                return Err(fail(
                    "the documented pair should not be isomorphic before stabilization",
                    json!({}),
                ));
            }
            match cancel_x(&a, &h0) {
                Err(Error::HypothesisFailed(msg)) if msg.contains("not surjective") => {
                    Ok(json!({ "diagnostic": msg }))
                }
                Err(e) => Err(fail(
                    "cancellation failed with the wrong diagnostic",
                    json!({ "error": e.to_string() }),
                )),
                Ok(w) => Err(fail(
                    "cancellation must refuse a non-surjective boundary",
                    json!({ "returned_witness": w.is_some() }),
                )),
            }
        },
    );
}
