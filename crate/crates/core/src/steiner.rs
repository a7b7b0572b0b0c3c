//! Monte Carlo Steiner points of matroid base polytopes.
//!
//! The Steiner point is the expected minimizer of a uniformly random linear
//! functional, and on a base polytope that minimizer is the greedy basis. A
//! sample is one direction on the sphere; the estimate averages the indicator
//! vectors of the greedy bases, so hit counts are integers and the estimate is
//! an exact rational with denominator dividing the sample count.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exec::{chunked_reduce, Execution};
use crate::groups::Point;
use crate::linalg::Field;
use crate::matroid::{BasisSet, SubspaceMatroid};
use crate::rational::{self, Rational};

pub const DEFAULT_SEED: u64 = 0x5EED_A11E;
const CHUNK: u64 = 256;

/// Uniform directions on the unit sphere in `R^dimension`. Sample `i` is
/// drawn from ChaCha8 keyed by the seed, on stream `i`, as independent
/// standard normals scaled to unit length; it depends on nothing else.
#[derive(Debug, Clone)]
pub struct DirectionSampler {
    seed: u64,
    dimension: usize,
    key: [u8; 32],
}

impl DirectionSampler {
    pub fn new(seed: u64, dimension: usize) -> Self {
        let key = ChaCha8Rng::seed_from_u64(seed).get_seed();
        DirectionSampler {
            seed,
            dimension,
            key,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn sample_into(&self, index: u64, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.dimension);
        let mut rng = ChaCha8Rng::from_seed(self.key);
        rng.set_stream(index);
        let mut norm = 0.0;
        for x in out.iter_mut() {
            *x = rng.sample(StandardNormal);
            norm += *x * *x;
        }
        let norm = norm.sqrt();
        if norm > 0.0 {
            out.iter_mut().for_each(|x| *x /= norm);
        }
    }

    pub fn sample(&self, index: u64) -> Vec<f64> {
        let mut v = vec![0.0; self.dimension];
        self.sample_into(index, &mut v);
        v
    }
}

/// Sampling parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SteinerConfig {
    pub samples: u64,
    pub seed: u64,
    /// Keep per-basis hit counts (needed for exterior angles).
    pub track_vertices: bool,
    pub execution: Execution,
}

impl SteinerConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        SteinerConfig {
            samples,
            seed,
            track_vertices: true,
            execution: Execution::default(),
        }
    }

    pub fn without_vertices(mut self) -> Self {
        self.track_vertices = false;
        self
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }
}

/// An empirical Steiner point: `vector[j]` is the fraction of samples whose
/// greedy basis contains label `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SteinerEstimate {
    pub labels: Vec<Point>,
    pub vector: Vec<Rational>,
    pub samples: u64,
    pub seed: u64,
    pub per_vertex_hits: Option<BTreeMap<BasisSet, u64>>,
    /// `sqrt(0.25 / N)`, the worst-case per-coordinate standard error.
    pub stderr_bound: f64,
}

impl SteinerEstimate {
    fn from_tally(
        m_labels: &[Point],
        tally: Tally,
        cfg: &SteinerConfig,
        basis_of: impl Fn(&[usize]) -> BasisSet,
    ) -> Self {
        let n = Rational::from_integer(cfg.samples.into());
        SteinerEstimate {
            labels: m_labels.to_vec(),
            vector: tally
                .label_hits
                .iter()
                .map(|&c| Rational::from_integer(c.into()) / &n)
                .collect(),
            samples: cfg.samples,
            seed: cfg.seed,
            per_vertex_hits: tally
                .vertex_hits
                .map(|v| v.into_iter().map(|(k, c)| (basis_of(&k), c)).collect()),
            stderr_bound: (0.25 / cfg.samples as f64).sqrt(),
        }
    }

    /// `‖m̂‖₁`, exact.
    pub fn l1(&self) -> Rational {
        self.vector.iter().fold(Rational::zero(), |a, b| a + b)
    }

    /// Hit fractions per basis, when vertices were tracked.
    pub fn angles(&self) -> Option<BTreeMap<BasisSet, Rational>> {
        let n = Rational::from_integer(self.samples.into());
        self.per_vertex_hits.as_ref().map(|h| {
            h.iter()
                .map(|(b, &c)| (b.clone(), Rational::from_integer(c.into()) / &n))
                .collect()
        })
    }

    /// Value at a label; zero for labels outside the estimate.
    pub fn at(&self, p: &Point) -> Rational {
        self.labels
            .binary_search(p)
            .map(|i| self.vector[i].clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    pub fn to_json(&self, with_angles: bool) -> Value {
        let mut v = json!({
            "labels": self.labels,
            "vector": self.vector.iter().map(rational::to_text).collect::<Vec<_>>(),
            "samples": self.samples,
            "seed": self.seed,
            "l1": rational::to_text(&self.l1()),
            "stderr_bound": self.stderr_bound,
        });
        if with_angles {
            if let Some(angles) = self.angles() {
                let map: serde_json::Map<String, Value> = angles
                    .iter()
                    .map(|(b, q)| {
                        (
                            serde_json::to_string(b).expect("labels serialize"),
                            Value::from(rational::to_text(q)),
                        )
                    })
                    .collect();
                v["angles"] = Value::Object(map);
            }
        }
        v
    }
}

#[derive(Debug, Clone, Default)]
struct Tally {
    label_hits: Vec<u64>,
    vertex_hits: Option<BTreeMap<Vec<usize>, u64>>,
}

impl Tally {
    fn new(n: usize, track: bool) -> Self {
        Tally {
            label_hits: vec![0; n],
            vertex_hits: track.then(BTreeMap::new),
        }
    }

    fn record(&mut self, basis: Vec<usize>) {
        for &j in &basis {
            self.label_hits[j] += 1;
        }
        if let Some(v) = &mut self.vertex_hits {
            *v.entry(basis).or_insert(0) += 1;
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        if self.label_hits.is_empty() {
            return other;
        }
        for (a, b) in self.label_hits.iter_mut().zip(other.label_hits) {
            *a += b;
        }
        if let (Some(a), Some(b)) = (&mut self.vertex_hits, other.vertex_hits) {
            for (k, c) in b {
                *a.entry(k).or_insert(0) += c;
            }
        }
        self
    }
}

fn check_inputs<F: Field>(m: &SubspaceMatroid<F>, cfg: &SteinerConfig) -> Result<()> {
    if cfg.samples == 0 {
        return Err(Error::Domain("sample count must be at least 1".into()));
    }
    if m.rank() == 0 {
        return Err(Error::Degenerate(
            "the zero subspace has no Steiner point to sample".into(),
        ));
    }
    Ok(())
}

/// Estimates `m(P_F)` as the average greedy basis over `N` sphere directions.
pub fn estimate_steiner<F: Field>(
    m: &SubspaceMatroid<F>,
    samples: u64,
    seed: u64,
) -> Result<SteinerEstimate> {
    estimate_steiner_with(m, &SteinerConfig::new(samples, seed))
}

pub fn estimate_steiner_with<F: Field>(
    m: &SubspaceMatroid<F>,
    cfg: &SteinerConfig,
) -> Result<SteinerEstimate> {
    check_inputs(m, cfg)?;
    let n = m.ground_size();
    let sampler = DirectionSampler::new(cfg.seed, n);
    let tally = chunked_reduce(
        cfg.execution,
        cfg.samples,
        CHUNK,
        |range| {
            let mut scratch = m.scratch();
            let mut w = vec![0.0; n];
            let mut t = Tally::new(n, cfg.track_vertices);
            for i in range {
                sampler.sample_into(i, &mut w);
                t.record(m.greedy_indices(&w, &mut scratch));
            }
            t
        },
        Tally::default(),
        Tally::merge,
    );
    Ok(SteinerEstimate::from_tally(m.labels(), tally, cfg, |b| {
        m.basis_from_indices(b)
    }))
}

/// Estimated exterior angle at each basis hit at least once; the fractions
/// sum to one exactly.
pub fn exterior_angles<F: Field>(
    m: &SubspaceMatroid<F>,
    samples: u64,
    seed: u64,
) -> Result<BTreeMap<BasisSet, Rational>> {
    Ok(estimate_steiner(m, samples, seed)?
        .angles()
        .expect("vertices tracked"))
}

/// Steiner estimates of nested `E ≤ F` from the same directions.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledEstimate {
    pub inner: SteinerEstimate,
    pub outer: SteinerEstimate,
    /// `dim F - dim E`.
    pub exact_l1_gap: usize,
}

impl CoupledEstimate {
    /// `m̂_E ≤ m̂_F` in every coordinate.
    pub fn is_monotone(&self) -> bool {
        self.inner
            .vector
            .iter()
            .zip(&self.outer.vector)
            .all(|(a, b)| a <= b)
    }

    /// `‖m̂_F - m̂_E‖₁`.
    pub fn l1_gap(&self) -> Rational {
        self.inner
            .vector
            .iter()
            .zip(&self.outer.vector)
            .fold(Rational::zero(), |acc, (a, b)| {
                let d = b - a;
                acc + if d < Rational::zero() { -d } else { d }
            })
    }
}

/// Samples `E ≤ F` on shared directions over a common label set. Each sample's
/// greedy basis of `E` is contained in that of `F`; a violation is reported as
/// an internal error.
pub fn coupled_nested_estimate<F: Field>(
    e: &SubspaceMatroid<F>,
    f: &SubspaceMatroid<F>,
    samples: u64,
    seed: u64,
) -> Result<CoupledEstimate> {
    coupled_nested_estimate_with(e, f, &SteinerConfig::new(samples, seed).without_vertices())
}

pub fn coupled_nested_estimate_with<F: Field>(
    e: &SubspaceMatroid<F>,
    f: &SubspaceMatroid<F>,
    cfg: &SteinerConfig,
) -> Result<CoupledEstimate> {
    if !f.space().contains(e.space())? {
        return Err(Error::Containment("E is not a subspace of F".into()));
    }
    let outer = SubspaceMatroid::new(f.space().extend_labels(e.labels()));
    let inner = SubspaceMatroid::new(e.space().extend_labels(outer.labels()));
    check_inputs(&outer, cfg)?;
    let n = outer.ground_size();
    let sampler = DirectionSampler::new(cfg.seed, n);
    let (t_in, t_out, violations) = chunked_reduce(
        cfg.execution,
        cfg.samples,
        CHUNK,
        |range| {
            let (mut s_in, mut s_out) = (inner.scratch(), outer.scratch());
            let mut w = vec![0.0; n];
            let (mut a, mut b, mut bad) = (
                Tally::new(n, cfg.track_vertices),
                Tally::new(n, cfg.track_vertices),
                0u64,
            );
            for i in range {
                sampler.sample_into(i, &mut w);
                let be = inner.greedy_indices(&w, &mut s_in);
                let bf = outer.greedy_indices(&w, &mut s_out);
                if !be.iter().all(|j| bf.binary_search(j).is_ok()) {
                    bad += 1;
                }
                a.record(be);
                b.record(bf);
            }
            (a, b, bad)
        },
        (Tally::default(), Tally::default(), 0),
        |(a1, b1, c1), (a2, b2, c2)| (a1.merge(a2), b1.merge(b2), c1 + c2),
    );
    if violations > 0 {
        return Err(Error::Internal(format!(
            "{violations} samples broke nested greedy containment"
        )));
    }
    Ok(CoupledEstimate {
        inner: SteinerEstimate::from_tally(inner.labels(), t_in, cfg, |b| {
            inner.basis_from_indices(b)
        }),
        outer: SteinerEstimate::from_tally(outer.labels(), t_out, cfg, |b| {
            outer.basis_from_indices(b)
        }),
        exact_l1_gap: outer.rank() - inner.rank(),
    })
}

/// Outcome of [`minkowski_combination_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct MinkowskiCheck {
    /// `m̂(αP₁ ∔ (1-α)P₂) = α m̂(P₁) + (1-α) m̂(P₂)` exactly.
    pub equal: bool,
    pub first: SteinerEstimate,
    pub second: SteinerEstimate,
    /// Estimate for the Minkowski combination.
    pub combined: Vec<Rational>,
    /// Whether the combination's per-sample minimizer was found by scanning
    /// all vertex pairs rather than by combining the two greedy minimizers.
    pub brute_forced: bool,
}

/// Largest `#V₁·#V₂` for which the combination's minimizer is found by scanning pairs.
pub const PAIR_SCAN_CAP: usize = 4096;

/// Estimates the Steiner point of `αP₁ ∔ (1-α)P₂` on the same directions as
/// the two summands and compares it to the combination of their estimates.
pub fn minkowski_combination_check<F: Field>(
    m1: &SubspaceMatroid<F>,
    m2: &SubspaceMatroid<F>,
    alpha: &Rational,
    samples: u64,
    seed: u64,
) -> Result<MinkowskiCheck> {
    if m1.labels() != m2.labels() {
        return Err(Error::Shape("summands must share the same labels".into()));
    }
    if !rational::is_unit_interval(alpha) {
        return Err(Error::Domain(format!(
            "alpha = {} is outside [0, 1]",
            rational::to_text(alpha)
        )));
    }
    let cfg = SteinerConfig::new(samples, seed).without_vertices();
    check_inputs(m1, &cfg)?;
    check_inputs(m2, &cfg)?;
    let v1 = m1.enumerate_base_indices(PAIR_SCAN_CAP).ok();
    let v2 = m2.enumerate_base_indices(PAIR_SCAN_CAP).ok();
    let pairs = match (&v1, &v2) {
        (Some(a), Some(b)) if a.len() * b.len() <= PAIR_SCAN_CAP => Some((a, b)),
        _ => None,
    };
    let a = rational::to_f64(alpha);
    let n = m1.ground_size();
    let sampler = DirectionSampler::new(seed, n);
    // per label: hits of the first and second summand, then of the combination's two parts
    let counts = chunked_reduce(
        cfg.execution,
        samples,
        CHUNK,
        |range| {
            let (mut s1, mut s2) = (m1.scratch(), m2.scratch());
            let mut w = vec![0.0; n];
            let mut c = vec![[0u64; 4]; n];
            for i in range {
                sampler.sample_into(i, &mut w);
                let g1 = m1.greedy_indices(&w, &mut s1);
                let g2 = m2.greedy_indices(&w, &mut s2);
                let (x, y) = match pairs {
                    Some((p1, p2)) => scan_pairs(p1, p2, &w, a),
                    None => (g1.clone(), g2.clone()),
                };
                for j in g1 {
                    c[j][0] += 1;
                }
                for j in g2 {
                    c[j][1] += 1;
                }
                for j in x {
                    c[j][2] += 1;
                }
                for j in y {
                    c[j][3] += 1;
                }
            }
            c
        },
        vec![[0u64; 4]; n],
        |mut acc, part| {
            for (a, b) in acc.iter_mut().zip(part) {
                for k in 0..4 {
                    a[k] += b[k];
                }
            }
            acc
        },
    );
    let total = Rational::from_integer(samples.into());
    let one_minus = Rational::one() - alpha;
    let frac = |c: u64| Rational::from_integer(c.into()) / &total;
    let est = |k: usize, m: &SubspaceMatroid<F>| SteinerEstimate {
        labels: m.labels().to_vec(),
        vector: counts.iter().map(|c| frac(c[k])).collect(),
        samples,
        seed,
        per_vertex_hits: None,
        stderr_bound: (0.25 / samples as f64).sqrt(),
    };
    let first = est(0, m1);
    let second = est(1, m2);
    let combined: Vec<Rational> = counts
        .iter()
        .map(|c| alpha * frac(c[2]) + &one_minus * frac(c[3]))
        .collect();
    let expected: Vec<Rational> = first
        .vector
        .iter()
        .zip(&second.vector)
        .map(|(x, y)| alpha * x + &one_minus * y)
        .collect();
    Ok(MinkowskiCheck {
        equal: combined == expected,
        first,
        second,
        combined,
        brute_forced: pairs.is_some(),
    })
}

/// Vertex pair minimizing `⟨αx + (1-α)y, w⟩`; the first pair wins ties.
fn scan_pairs(
    p1: &[Vec<usize>],
    p2: &[Vec<usize>],
    w: &[f64],
    alpha: f64,
) -> (Vec<usize>, Vec<usize>) {
    let value = |b: &[usize]| b.iter().map(|&j| w[j]).sum::<f64>();
    let vals2: Vec<f64> = p2.iter().map(|y| value(y)).collect();
    let mut best = (f64::INFINITY, 0, 0);
    for (i, x) in p1.iter().enumerate() {
        let vx = alpha * value(x);
        for (k, vy) in vals2.iter().enumerate() {
            let v = vx + (1.0 - alpha) * vy;
            if v < best.0 {
                best = (v, i, k);
            }
        }
    }
    (p1[best.1].clone(), p2[best.2].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{LabeledSubspace, Rationals};
    use crate::rational::{from_int, ratio};

    fn m(rows: &[&[i64]]) -> SubspaceMatroid<Rationals> {
        let n = rows[0].len();
        let labels = (1..=n as i64).map(Point::Int).collect();
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| from_int(x)).collect())
            .collect();
        SubspaceMatroid::new(LabeledSubspace::from_rows(Rationals, labels, rows).unwrap())
    }

    #[test]
    fn sampler_is_counter_based() {
        let s = DirectionSampler::new(7, 5);
        let a = s.sample(12);
        assert_eq!(a, DirectionSampler::new(7, 5).sample(12));
        assert_ne!(a, s.sample(13));
        assert!((a.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn full_space_is_exact() {
        let est = estimate_steiner(&m(&[&[1, 0], &[0, 1]]), 100, 3).unwrap();
        assert_eq!(est.vector, vec![from_int(1), from_int(1)]);
        assert_eq!(est.angles().unwrap().len(), 1);
    }

    #[test]
    fn diagonal_line_is_half() {
        let n = 4096;
        let est = estimate_steiner(&m(&[&[1, 1]]), n, 11).unwrap();
        let tol = 4.0 * est.stderr_bound;
        for x in &est.vector {
            assert!((rational::to_f64(x) - 0.5).abs() <= tol);
        }
        assert_eq!(est.l1(), from_int(1));
    }

    #[test]
    fn segment() {
        let est = estimate_steiner(&m(&[&[1, 0, 0], &[0, 1, 1]]), 2000, 5).unwrap();
        assert_eq!(est.vector[0], from_int(1));
        let angles = exterior_angles(&m(&[&[1, 0, 0], &[0, 1, 1]]), 2000, 5).unwrap();
        assert_eq!(
            angles.values().fold(Rational::zero(), |a, b| a + b),
            from_int(1)
        );
        assert_eq!(angles.len(), 2);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            estimate_steiner(&m(&[&[0, 0]]), 10, 1),
            Err(Error::Degenerate(_))
        ));
        assert!(matches!(
            estimate_steiner(&m(&[&[1, 0]]), 0, 1),
            Err(Error::Domain(_))
        ));
        let e = m(&[&[1, 0, 0]]);
        let f = m(&[&[1, 0, 1], &[0, 1, 1]]);
        assert!(matches!(
            coupled_nested_estimate(&e, &f, 10, 1),
            Err(Error::Containment(_))
        ));
        let g = m(&[&[1, 0]]);
        assert!(matches!(
            minkowski_combination_check(&e, &g, &ratio(1, 2), 10, 1),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            minkowski_combination_check(&e, &e, &ratio(3, 2), 10, 1),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn coupled_identity_and_gap() {
        let e = m(&[&[1, 0, 1]]);
        let f = m(&[&[1, 0, 1], &[0, 1, 1]]);
        let c = coupled_nested_estimate(&f, &f, 500, 2).unwrap();
        assert_eq!(c.inner, c.outer);
        assert_eq!(c.exact_l1_gap, 0);
        let c = coupled_nested_estimate(&e, &f, 500, 2).unwrap();
        assert!(c.is_monotone());
        assert_eq!(c.l1_gap(), from_int(1));
        assert_eq!(c.exact_l1_gap, 1);
    }

    #[test]
    fn minkowski_half() {
        let diag = m(&[&[1, 1]]);
        let full = m(&[&[1, 0], &[0, 1]]);
        let check = minkowski_combination_check(&diag, &full, &ratio(1, 2), 1000, 9).unwrap();
        assert!(check.equal && check.brute_forced);
        let zero = minkowski_combination_check(&diag, &full, &Rational::zero(), 200, 9).unwrap();
        assert!(zero.equal);
        assert_eq!(zero.combined, zero.second.vector);
    }

    #[test]
    fn execution_modes_agree() {
        let f = m(&[&[1, 0, 1, 2], &[0, 1, 1, 3]]);
        let cfg = SteinerConfig::new(3000, 42);
        let seq = estimate_steiner_with(&f, &cfg.with_execution(Execution::Sequential)).unwrap();
        let par = estimate_steiner_with(&f, &cfg.with_execution(Execution::Parallel)).unwrap();
        assert_eq!(seq, par);
    }
}
