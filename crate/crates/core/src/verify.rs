//! The built-in acceptance suite. Every criterion is a deterministic
//! computation; its JSON artifact is what the determinism criterion compares
//! across worker counts.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::Result;
use crate::exec::{with_threads, Execution};
use crate::folner::{
    layer_cake, set_report, subspace_report, subspace_to_function, words_as_multipliers,
};
use crate::groups::{
    act, ball, family_generate, generator_words, Family, FamilyMember, FreeGroup, GroupAction,
    Lattice, Point, Word,
};
use crate::linalg::{Field, LabeledSubspace, PrimeField, Rationals};
use crate::matroid::{basis_exchange, basis_extend, basis_restrict, BasisSet, SubspaceMatroid};
use crate::profile::{iso_family_upper, iso_set_exact, phi_from_table, Phi, ProfileTable};
use crate::rational::{self, ratio, Rational};
use crate::steiner::{
    coupled_nested_estimate_with, estimate_steiner_with, minkowski_combination_check, SteinerConfig,
};

pub const CRITERIA: usize = 10;

#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    pub checks: usize,
    pub failures: Vec<String>,
    pub elapsed: Duration,
    pub limit: Duration,
    pub artifact: Value,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let mut s = format!(
            "criterion {:>2} {status}  {} ({} checks, {:.2}s of {}s)",
            self.id,
            self.title,
            self.checks,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs()
        );
        if let Some(first) = self.failures.first() {
            s.push_str(&format!(": {first}"));
            if self.failures.len() > 1 {
                s.push_str(&format!(" (+{} more)", self.failures.len() - 1));
            }
        }
        s
    }

    pub fn to_json(&self) -> Value {
        json!({
            "criterion": self.id,
            "title": self.title,
            "passed": self.passed,
            "checks": self.checks,
            "failures": self.failures,
        })
    }
}

#[derive(Default)]
struct Check {
    checks: usize,
    failures: Vec<String>,
    artifact: Vec<Value>,
}

impl Check {
    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn record(&mut self, v: Value) {
        self.artifact.push(v);
    }

    fn absorb(&mut self, r: Result<()>, ctx: &str) {
        if let Err(e) = r {
            self.checks += 1;
            self.failures.push(format!("{ctx}: {e}"));
        }
    }
}

pub fn title(id: usize) -> &'static str {
    match id {
        1 => "lamplighter set family",
        2 => "lamplighter module family",
        3 => "divergent profiles",
        4 => "steiner exactness",
        5 => "coupled nested monotonicity",
        6 => "basis extend, restrict and exchange",
        7 => "minkowski additivity",
        8 => "set, subspace and function pipeline",
        9 => "exhaustive profile oracle",
        10 => "determinism across worker counts",
        _ => "unknown",
    }
}

fn limit(id: usize) -> Duration {
    Duration::from_secs(match id {
        1 => 5,
        2 | 6 => 10,
        3 => 30,
        4 | 5 => 60,
        7 => 30,
        8 | 9 => 120,
        _ => (1..CRITERIA).map(|i| limit(i).as_secs()).sum(),
    })
}

fn compute(id: usize, exec: Execution) -> Check {
    let mut c = Check::default();
    let r = match id {
        1 => lamp_box(&mut c),
        2 => lamp_span(&mut c),
        3 => divergence(&mut c),
        4 => steiner_exactness(&mut c, exec),
        5 => coupled(&mut c, exec),
        6 => basis_moves(&mut c),
        7 => minkowski(&mut c),
        8 => pipeline(&mut c, exec),
        9 => exhaustive(&mut c, exec),
        _ => Ok(()),
    };
    c.absorb(r, "error");
    c
}

fn outcome(id: usize, c: Check, elapsed: Duration) -> CriterionOutcome {
    let limit = limit(id);
    let mut failures = c.failures;
    if elapsed > limit {
        failures.push(format!(
            "took {:.2}s, limit {}s",
            elapsed.as_secs_f64(),
            limit.as_secs()
        ));
    }
    CriterionOutcome {
        id,
        title: title(id),
        passed: failures.is_empty(),
        checks: c.checks,
        failures,
        elapsed,
        limit,
        artifact: Value::Array(c.artifact),
    }
}

/// Runs criteria 1 to 9 under the current pool.
pub fn run_criterion(id: usize, exec: Execution) -> CriterionOutcome {
    assert!(
        (1..CRITERIA).contains(&id),
        "criterion {id} is not standalone"
    );
    let start = Instant::now();
    let c = compute(id, exec);
    outcome(id, c, start.elapsed())
}

/// Reruns criteria 1 to 9 with one and with four workers and compares the
/// serialized artifacts byte for byte.
pub fn run_determinism(reference: Option<&[CriterionOutcome]>) -> CriterionOutcome {
    let start = Instant::now();
    let mut c = Check::default();
    let bytes = |threads: usize, id: usize| {
        with_threads(threads, || {
            serde_json::to_string(&compute(id, Execution::Parallel).artifact).expect("json")
        })
    };
    for id in 1..CRITERIA {
        let one = bytes(1, id);
        let four = match reference.and_then(|r| r.iter().find(|o| o.id == id)) {
            Some(o) => serde_json::to_string(&o.artifact.as_array().cloned().unwrap_or_default())
                .expect("json"),
            None => bytes(4, id),
        };
        c.expect(one == four, || {
            format!("criterion {id} differs between 1 and 4 workers")
        });
        c.record(json!({ "criterion": id, "bytes": one.len() }));
    }
    outcome(CRITERIA, c, start.elapsed())
}

/// Runs all ten criteria: 1 to 9 on a four-worker pool, then 10.
pub fn run_all() -> Vec<CriterionOutcome> {
    let mut out: Vec<CriterionOutcome> = with_threads(4, || {
        (1..CRITERIA)
            .map(|id| run_criterion(id, Execution::Parallel))
            .collect()
    });
    let det = run_determinism(Some(&out));
    out.push(det);
    out
}

fn q(r: &Rational) -> Value {
    Value::String(rational::to_text(r))
}

fn lamp_box(c: &mut Check) -> Result<()> {
    let s = Family::LampBox.default_generators();
    let g = Family::LampBox.action();
    for n in 1..=6usize {
        let FamilyMember::Set(f) = family_generate(Family::LampBox, n, &Rationals)? else {
            unreachable!()
        };
        let r = set_report(&f, &s, g.as_ref())?;
        c.expect(f.len() == n << n, || {
            format!("lamp-box({n}) has {} points", f.len())
        });
        c.expect(r.union_ratio == ratio(2, n as i64), || {
            format!("lamp-box({n}) ratio {}", r.union_ratio)
        });
        c.expect(r.size + r.boundary == (n + 2) << n, || {
            format!("lamp-box({n}) #(F ∪ FS) = {}", r.size + r.boundary)
        });
        c.record(json!({ "n": n, "size": f.len(), "ratio": q(&r.union_ratio) }));
    }
    Ok(())
}

fn lamp_span_field<F: Field>(c: &mut Check, field: F) -> Result<()> {
    let s = Family::LampSpan.default_generators();
    let g = Family::LampSpan.action();
    let b = Word::parse(g.as_ref(), "b")?;
    for n in 1..=12usize {
        let FamilyMember::Span(f) = family_generate(Family::LampSpan, n, &field)? else {
            unreachable!()
        };
        let r = subspace_report(&f, &words_as_multipliers(&s), g.as_ref())?;
        let fb = f.act(g.as_ref(), &b)?;
        let fixed = fb.contains(&f)? && f.contains(&fb)?;
        c.expect(f.dim() == n, || {
            format!("lamp-span({n}) over {} has dim {}", field.spec(), f.dim())
        });
        c.expect(r.size + r.boundary == n + 2, || {
            format!("lamp-span({n}) dim(F + FS) = {}", r.size + r.boundary)
        });
        c.expect(fixed, || format!("lamp-span({n}) is not fixed by b"));
        c.record(json!({ "field": field.spec().to_string(), "n": n, "sum_dim": r.size + r.boundary, "fixed_by_b": fixed }));
    }
    Ok(())
}

fn lamp_span(c: &mut Check) -> Result<()> {
    lamp_span_field(c, PrimeField::new(2)?)?;
    lamp_span_field(c, PrimeField::new(3)?)
}

fn phi_value(p: Phi) -> Value {
    match p {
        Phi::Value(v) => json!(v),
        Phi::Unbounded => json!("unbounded"),
    }
}

fn divergence(c: &mut Check) -> Result<()> {
    let g = Family::LampBox.action();
    let s = Family::LampBox.default_generators();
    let sets = iso_family_upper(Family::LampBox, 12, &s, g.as_ref(), &Rationals)?;
    let modules = iso_family_upper(Family::LampSpan, 12, &s, g.as_ref(), &PrimeField::new(2)?)?;
    for n in 1..=6u64 {
        let (ps, pm) = (phi_from_table(&sets, n), phi_from_table(&modules, n));
        let want = (1usize << (2 * n)) * 2 * n as usize;
        c.expect(ps == Phi::Value(want), || {
            format!("set Φ({n}) = {ps:?}, expected {want}")
        });
        c.expect(matches!(pm, Phi::Value(v) if v <= 2 * n as usize), || {
            format!("module Φ({n}) = {pm:?}")
        });
        c.record(json!({ "n": n, "set": phi_value(ps), "module": phi_value(pm) }));
    }
    c.expect(
        sets.is_nonincreasing() && modules.is_nonincreasing(),
        || "profile tables increase".into(),
    );
    Ok(())
}

fn random_subspace<F: Field>(
    field: &F,
    rng: &mut ChaCha8Rng,
    n: usize,
    d: usize,
) -> Result<LabeledSubspace<F>> {
    let labels: Vec<Point> = (1..=n as i64).map(Point::Int).collect();
    loop {
        let rows: Vec<Vec<F::Elem>> = (0..d)
            .map(|_| {
                (0..n)
                    .map(|_| field.from_i64(rng.random_range(-2..=2)))
                    .collect()
            })
            .collect();
        let s = LabeledSubspace::from_rows(field.clone(), labels.clone(), rows)?;
        if !s.is_zero() {
            return Ok(s);
        }
    }
}

fn random_shape(rng: &mut ChaCha8Rng) -> (usize, usize) {
    let n = rng.random_range(1..=8);
    (n, rng.random_range(1..=n.min(4)))
}

/// A random non-zero `E ≤ F` spanned by combinations of the rows of `F`.
fn random_nested<F: Field>(
    field: &F,
    rng: &mut ChaCha8Rng,
) -> Result<(LabeledSubspace<F>, LabeledSubspace<F>)> {
    let (n, d) = random_shape(rng);
    let f = random_subspace(field, rng, n, d)?;
    loop {
        let k = rng.random_range(1..=f.dim());
        let rows: Vec<Vec<F::Elem>> = (0..k)
            .map(|_| {
                let mut v = vec![field.zero(); n];
                for r in f.rows() {
                    let c = field.from_i64(rng.random_range(-2..=2));
                    for (x, y) in v.iter_mut().zip(r) {
                        *x = field.add(x, &field.mul(&c, y));
                    }
                }
                v
            })
            .collect();
        let e = LabeledSubspace::from_rows(field.clone(), f.labels().to_vec(), rows)?;
        if !e.is_zero() {
            return Ok((e, f));
        }
    }
}

fn random_basis<F: Field>(m: &SubspaceMatroid<F>, rng: &mut ChaCha8Rng) -> Result<BasisSet> {
    let w: Vec<f64> = (0..m.ground_size()).map(|_| rng.random::<f64>()).collect();
    m.greedy_min_basis(&w)
}

fn steiner_field<F: Field>(c: &mut Check, field: F, exec: Execution, seed: u64) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..100u64 {
        let (n, d) = random_shape(&mut rng);
        let m = SubspaceMatroid::new(random_subspace(&field, &mut rng, n, d)?);
        let est = estimate_steiner_with(
            &m,
            &SteinerConfig::new(10_000, seed + i).with_execution(exec),
        )?;
        let angle_sum = est
            .angles()
            .map(|a| a.values().fold(Rational::zero(), |x, y| x + y));
        let tag = || format!("{} subspace {i}", field.spec());
        c.expect(est.l1() == Rational::from_integer(m.rank().into()), || {
            format!("{}: l1 {}", tag(), est.l1())
        });
        c.expect(angle_sum == Some(Rational::one()), || {
            format!("{}: angle sum {angle_sum:?}", tag())
        });
        c.expect(est.vector.iter().all(rational::is_unit_interval), || {
            format!("{}: entry outside [0, 1]", tag())
        });
        c.record(json!(est.vector.iter().map(q).collect::<Vec<_>>()));
    }
    Ok(())
}

fn steiner_exactness(c: &mut Check, exec: Execution) -> Result<()> {
    steiner_field(c, PrimeField::new(2)?, exec, 4_000)?;
    steiner_field(c, Rationals, exec, 4_100)?;
    let samples = 10_000;
    let tol = 4.0 * (0.25 / samples as f64).sqrt();
    let cfg = SteinerConfig::new(samples, 4_200)
        .without_vertices()
        .with_execution(exec);
    let labels = |n: i64| (1..=n).map(Point::Int).collect::<Vec<_>>();
    let close = |est: &crate::steiner::SteinerEstimate, want: f64| {
        est.vector
            .iter()
            .all(|x| (rational::to_f64(x) - want).abs() <= tol)
    };
    for n in 2..=6usize {
        let simplex = LabeledSubspace::from_rows(
            Rationals,
            labels(n as i64),
            vec![vec![rational::from_int(1); n]],
        )?;
        let est = estimate_steiner_with(&SubspaceMatroid::new(simplex), &cfg)?;
        c.expect(close(&est, 1.0 / n as f64), || {
            format!("Δ({n},1) estimate off")
        });
        c.record(json!(est.vector.iter().map(q).collect::<Vec<_>>()));
    }
    let one = || rational::from_int(1);
    let zero = Rational::zero;
    let hyper = LabeledSubspace::from_rows(
        Rationals,
        labels(3),
        vec![vec![one(), zero(), one()], vec![zero(), one(), one()]],
    )?;
    let est = estimate_steiner_with(&SubspaceMatroid::new(hyper), &cfg)?;
    c.expect(close(&est, 2.0 / 3.0), || "Δ(3,2) estimate off".into());
    c.record(json!(est.vector.iter().map(q).collect::<Vec<_>>()));
    let seg = LabeledSubspace::from_rows(
        Rationals,
        labels(3),
        vec![vec![one(), zero(), zero()], vec![zero(), one(), one()]],
    )?;
    let est = estimate_steiner_with(&SubspaceMatroid::new(seg), &cfg)?;
    c.expect(est.at(&Point::Int(1)) == one(), || {
        format!("segment label 1 gives {}", est.at(&Point::Int(1)))
    });
    c.record(json!(est.vector.iter().map(q).collect::<Vec<_>>()));
    Ok(())
}

fn coupled_field<F: Field>(c: &mut Check, field: F, exec: Execution, seed: u64) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..50 {
        let (e, f) = random_nested(&field, &mut rng)?;
        let (me, mf) = (SubspaceMatroid::new(e), SubspaceMatroid::new(f));
        for s in [1u64, 2, 3] {
            let cfg = SteinerConfig::new(2_000, seed * 10 + s)
                .without_vertices()
                .with_execution(exec);
            let est = coupled_nested_estimate_with(&me, &mf, &cfg)?;
            let gap = Rational::from_integer((mf.rank() - me.rank()).into());
            c.expect(est.is_monotone(), || {
                format!("{} pair {i} seed {s}: not monotone", field.spec())
            });
            c.expect(est.l1_gap() == gap, || {
                format!("{} pair {i} seed {s}: gap {}", field.spec(), est.l1_gap())
            });
            c.record(json!([
                est.inner.vector.iter().map(q).collect::<Vec<_>>(),
                est.outer.vector.iter().map(q).collect::<Vec<_>>()
            ]));
        }
    }
    Ok(())
}

fn coupled(c: &mut Check, exec: Execution) -> Result<()> {
    coupled_field(c, PrimeField::new(2)?, exec, 5_000)?;
    coupled_field(c, Rationals, exec, 5_100)
}

fn basis_moves(c: &mut Check) -> Result<()> {
    let field = PrimeField::new(2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(6_000);
    for i in 0..200 {
        let (e, f) = random_nested(&field, &mut rng)?;
        let (me, mf) = (SubspaceMatroid::new(e), SubspaceMatroid::new(f));
        let s = random_basis(&me, &mut rng)?;
        let t = basis_extend(&me, &mf, &s)?;
        c.expect(
            mf.is_basis(&t)? && mf.is_independent(t.labels())? && s.is_subset(&t),
            || format!("pair {i}: extend {s} -> {t}"),
        );

        let t2 = random_basis(&mf, &mut rng)?;
        let s2 = basis_restrict(&me, &mf, &t2)?;
        c.expect(
            me.is_basis(&s2)? && me.is_independent(s2.labels())? && s2.is_subset(&t2),
            || format!("pair {i}: restrict {t2} -> {s2}"),
        );

        for k in s.labels() {
            let l = basis_exchange(&me, &mf, &s, &t2, k)?;
            let (s3, t3) = (s.swap(k, &l), t2.swap(&l, k));
            let ok = t2.contains(&l)
                && s3.len() == me.rank()
                && me.is_independent(s3.labels())?
                && t3.len() == mf.rank()
                && mf.is_independent(t3.labels())?;
            c.expect(ok, || {
                format!("pair {i}: exchange {k} between {s} and {t2} gave {l}")
            });
            c.record(json!([
                s.to_string(),
                t2.to_string(),
                k.to_string(),
                l.to_string()
            ]));
        }
    }
    Ok(())
}

fn minkowski_field<F: Field>(c: &mut Check, field: F, seed: u64) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..10 {
        let (n, d) = random_shape(&mut rng);
        let m1 = SubspaceMatroid::new(random_subspace(&field, &mut rng, n, d)?);
        let d2 = rng.random_range(1..=n.min(4));
        let m2 = SubspaceMatroid::new(random_subspace(&field, &mut rng, n, d2)?);
        let alpha = ratio(rng.random_range(0..=4), 4);
        let chk = minkowski_combination_check(&m1, &m2, &alpha, 2_000, seed + i)?;
        c.expect(chk.equal, || {
            format!("{} pair {i}: combination differs", field.spec())
        });
        c.record(json!({ "alpha": q(&alpha), "brute": chk.brute_forced, "combined": chk.combined.iter().map(q).collect::<Vec<_>>() }));
    }
    Ok(())
}

fn minkowski(c: &mut Check) -> Result<()> {
    minkowski_field(c, PrimeField::new(2)?, 7_000)?;
    minkowski_field(c, Rationals, 7_100)
}

fn pipeline_case<F: Field>(
    c: &mut Check,
    tag: String,
    f: &LabeledSubspace<F>,
    action: &dyn GroupAction,
    s: &[Word],
    expected: &[Rational],
    cfg: &SteinerConfig,
) -> Result<()> {
    let cert = subspace_to_function(f, s, action, cfg)?;
    for (e, want) in cert.per_generator.iter().zip(expected) {
        c.expect(&e.certificate == want, || {
            format!("{tag} {}: certificate {}", e.generator, e.certificate)
        });
        c.expect(e.within_tolerance, || {
            format!(
                "{tag} {}: sampled {} vs {}",
                e.generator, e.sampled_ratio, e.certificate
            )
        });
    }
    let func = cert.weighted_function()?;
    let lc = layer_cake(&func, s, action)?;
    for w in &lc.coarea {
        c.expect(w.holds(), || {
            format!(
                "{tag} {}: △ ratio {} > {}",
                w.generator, w.symdiff_ratio, w.function_ratio
            )
        });
    }
    c.record(json!({
        "case": tag,
        "sampled": cert.per_generator.iter().map(|e| q(&e.sampled_ratio)).collect::<Vec<_>>(),
        "threshold": q(&lc.threshold),
        "level": lc.level_set.len(),
    }));
    Ok(())
}

fn pipeline(c: &mut Check, exec: Execution) -> Result<()> {
    let z = Lattice::integers();
    let zs = generator_words(&z);
    let g2 = PrimeField::new(2)?;
    for v in 2..=20i64 {
        let f = LabeledSubspace::coordinate_span(g2, &(1..=v).map(Point::Int).collect::<Vec<_>>())?;
        let cfg = SteinerConfig::new(2_000, 8_000 + v as u64)
            .without_vertices()
            .with_execution(exec);
        pipeline_case(
            c,
            format!("interval {v}"),
            &f,
            &z,
            &zs,
            &[ratio(2, v), ratio(2, v)],
            &cfg,
        )?;
    }
    let lg = Family::LampSpan.action();
    let ls = Family::LampSpan.default_generators();
    for n in 1..=6usize {
        let FamilyMember::Span(f) = family_generate(Family::LampSpan, n, &g2)? else {
            unreachable!()
        };
        let r = ratio(2, n as i64);
        let cfg = SteinerConfig::new(1_000, 8_100 + n as u64)
            .without_vertices()
            .with_execution(exec);
        pipeline_case(
            c,
            format!("lamp-span {n}"),
            &f,
            lg.as_ref(),
            &ls,
            &[r.clone(), r, Rational::zero()],
            &cfg,
        )?;
    }
    Ok(())
}

/// Minimum boundary ratio by size, by plain enumeration of every subset.
fn naive_profile(
    action: &dyn GroupAction,
    window: &[Point],
    s: &[Word],
    v_max: usize,
) -> Result<Vec<Option<Rational>>> {
    let mut best: Vec<Option<Rational>> = vec![None; v_max + 1];
    for mask in 1u32..(1 << window.len()) {
        let set: Vec<&Point> = (0..window.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| &window[i])
            .collect();
        if set.len() > v_max {
            continue;
        }
        let inside: HashSet<&Point> = set.iter().copied().collect();
        let mut outside = HashSet::new();
        for x in &set {
            for g in s {
                let y = act(action, x, g)?;
                if !inside.contains(&y) {
                    outside.insert(y);
                }
            }
        }
        let r = ratio(outside.len() as i64, set.len() as i64);
        let slot = &mut best[set.len()];
        if slot.as_ref().is_none_or(|b| r < *b) {
            *slot = Some(r);
        }
    }
    let mut running: Option<Rational> = None;
    Ok(best
        .into_iter()
        .map(|b| {
            if let Some(b) = b {
                if running.as_ref().is_none_or(|r| b < *r) {
                    running = Some(b);
                }
            }
            running.clone()
        })
        .collect())
}

fn table_json(t: &ProfileTable) -> Value {
    json!(t
        .rows
        .iter()
        .map(|r| json!([r.v, q(&r.ratio), r.witness]))
        .collect::<Vec<_>>())
}

fn exhaustive(c: &mut Check, exec: Execution) -> Result<()> {
    let z = Lattice::integers();
    let zs = generator_words(&z);
    let window: Vec<Point> = (-6..=6).map(Point::Int).collect();
    let table = iso_set_exact(&z, &window, &zs, 10, exec)?;
    let oracle = naive_profile(&z, &window, &zs, 10)?;
    c.expect(table.rows.len() == 10, || {
        format!("{} rows", table.rows.len())
    });
    for row in &table.rows {
        let v = row.v;
        c.expect(row.ratio == ratio(2, v as i64), || {
            format!("Z: I({v}) = {}", row.ratio)
        });
        c.expect(oracle[v].as_ref() == Some(&row.ratio), || {
            format!("Z: oracle disagrees at v = {v}")
        });
        let pts = row.points.clone().unwrap_or_default();
        let ints: Vec<i64> = pts
            .iter()
            .filter_map(|p| {
                if let Point::Int(k) = p {
                    Some(*k)
                } else {
                    None
                }
            })
            .collect();
        let interval = ints.len() == pts.len() && ints.windows(2).all(|w| w[1] == w[0] + 1);
        c.expect(interval, || {
            format!("Z: witness {} is not an interval", row.witness)
        });
    }
    c.record(table_json(&table));

    let f2 = FreeGroup::new(2)?;
    let fs = generator_words(&f2);
    let window = ball(&f2, &f2.base_point(), 2, 64)?;
    let table = iso_set_exact(&f2, &window, &fs, 6, exec)?;
    let oracle = naive_profile(&f2, &window, &fs, 6)?;
    for row in &table.rows {
        c.expect(row.ratio >= rational::from_int(2), || {
            format!("free: I({}) = {}", row.v, row.ratio)
        });
        c.expect(oracle[row.v].as_ref() == Some(&row.ratio), || {
            format!("free: oracle disagrees at v = {}", row.v)
        });
    }
    c.record(table_json(&table));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cheap_criteria_pass() {
        for id in [1, 2, 6] {
            let o = run_criterion(id, Execution::Sequential);
            assert!(o.passed, "{}", o.line());
        }
    }

    #[test]
    fn naive_oracle_on_a_path() {
        let z = Lattice::integers();
        let w: Vec<Point> = (0..5).map(Point::Int).collect();
        let p = naive_profile(&z, &w, &generator_words(&z), 3).unwrap();
        assert_eq!(p[1], Some(ratio(2, 1)));
        assert_eq!(p[3], Some(ratio(2, 3)));
    }
}
