//! Boundary ratios of finite sets, finitely supported functions and
//! finite-dimensional subspaces, and the constructions passing between them.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{act, FamilyMember, GroupAction, Point, Word};
use crate::linalg::{Field, LabeledSubspace, Multiplier};
use crate::matroid::SubspaceMatroid;
use crate::rational::{self, Rational};
use crate::steiner::{estimate_steiner_with, SteinerConfig, SteinerEstimate};

/// A set or a subspace, as handled by [`absorb_finite`].
pub type FolnerObject<F> = FamilyMember<F>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneratorRatio {
    pub generator: String,
    #[serde(with = "rational::text")]
    pub ratio: Rational,
}

/// Boundary ratios of a set (`(#(F ∪ Fs) - #F)/#F`) or a subspace
/// (`dim((F + Fs)/F)/dim F`), per generator and for the union `FS`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FolnerReport {
    pub object: String,
    pub size: usize,
    /// `#(F ∪ FS) - #F`, or `dim((F + FS)/F)`.
    pub boundary: usize,
    pub per_generator: Vec<GeneratorRatio>,
    #[serde(with = "rational::text")]
    pub union_ratio: Rational,
    /// Smallest `ε` with `union_ratio ≤ ε`.
    #[serde(with = "rational::text")]
    pub epsilon: Rational,
}

impl FolnerReport {
    fn new(
        object: String,
        size: usize,
        boundary: usize,
        per_generator: Vec<GeneratorRatio>,
    ) -> Self {
        let union_ratio = rational::ratio(boundary as i64, size as i64);
        FolnerReport {
            object,
            size,
            boundary,
            per_generator,
            epsilon: union_ratio.clone(),
            union_ratio,
        }
    }

    pub fn ratio_for(&self, generator: &str) -> Option<&Rational> {
        self.per_generator
            .iter()
            .find(|g| g.generator == generator)
            .map(|g| &g.ratio)
    }

    pub fn max_generator_ratio(&self) -> Rational {
        self.per_generator
            .iter()
            .map(|g| g.ratio.clone())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

fn describe_set(f: &[Point]) -> String {
    format!("set of {} points", f.len())
}

fn translate(action: &dyn GroupAction, f: &[Point], s: &Word) -> Result<Vec<Point>> {
    f.iter().map(|x| act(action, x, s)).collect()
}

/// Boundary report of a finite set under the generators `s`.
pub fn set_report(f: &[Point], s: &[Word], action: &dyn GroupAction) -> Result<FolnerReport> {
    if f.is_empty() {
        return Err(Error::Degenerate("empty set".into()));
    }
    let set: HashSet<&Point> = f.iter().collect();
    let mut union_new: HashSet<Point> = HashSet::new();
    let mut per = Vec::with_capacity(s.len());
    for g in s {
        let fresh: HashSet<Point> = translate(action, f, g)?
            .into_iter()
            .filter(|y| !set.contains(y))
            .collect();
        per.push(GeneratorRatio {
            generator: g.render(action),
            ratio: rational::ratio(fresh.len() as i64, set.len() as i64),
        });
        union_new.extend(fresh);
    }
    Ok(FolnerReport::new(
        describe_set(f),
        set.len(),
        union_new.len(),
        per,
    ))
}

/// `#(F △ Fs) / #F`.
pub fn symmetric_difference_ratio(
    f: &[Point],
    s: &Word,
    action: &dyn GroupAction,
) -> Result<Rational> {
    if f.is_empty() {
        return Err(Error::Degenerate("empty set".into()));
    }
    let a: HashSet<Point> = f.iter().cloned().collect();
    let b: HashSet<Point> = translate(action, f, s)?.into_iter().collect();
    Ok(rational::ratio(
        a.symmetric_difference(&b).count() as i64,
        a.len() as i64,
    ))
}

/// A finitely supported nonnegative function `X → Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedFunction {
    values: BTreeMap<Point, Rational>,
}

impl WeightedFunction {
    /// Drops zeros; negative values or an all-zero function are rejected.
    pub fn new(values: impl IntoIterator<Item = (Point, Rational)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (p, v) in values {
            if v.is_negative() {
                return Err(Error::Domain(format!("negative value at {p}")));
            }
            if !v.is_zero() {
                map.insert(p, v);
            }
        }
        if map.is_empty() {
            return Err(Error::Degenerate("zero function".into()));
        }
        Ok(WeightedFunction { values: map })
    }

    pub fn indicator(points: &[Point]) -> Result<Self> {
        Self::new(
            points
                .iter()
                .map(|p| (p.clone(), Rational::from_integer(1.into()))),
        )
    }

    pub fn from_estimate(est: &SteinerEstimate) -> Result<Self> {
        Self::new(est.labels.iter().cloned().zip(est.vector.iter().cloned()))
    }

    pub fn values(&self) -> &BTreeMap<Point, Rational> {
        &self.values
    }

    pub fn get(&self, p: &Point) -> Rational {
        self.values.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn l1(&self) -> Rational {
        self.values.values().fold(Rational::zero(), |a, b| a + b)
    }

    /// `fs`, with `(fs)(x·s) = f(x)`.
    pub fn translate(&self, s: &Word, action: &dyn GroupAction) -> Result<Self> {
        let moved = self
            .values
            .iter()
            .map(|(x, v)| Ok((act(action, x, s)?, v.clone())))
            .collect::<Result<Vec<_>>>()?;
        Self::new(moved)
    }

    /// `‖f - g‖₁`.
    pub fn l1_distance(&self, other: &Self) -> Rational {
        let keys: BTreeSet<&Point> = self.values.keys().chain(other.values.keys()).collect();
        keys.into_iter().fold(Rational::zero(), |acc, p| {
            acc + (self.get(p) - other.get(p)).abs()
        })
    }

    /// `{x : f(x) ≥ t}` in point order.
    pub fn level_set(&self, t: &Rational) -> Vec<Point> {
        self.values
            .iter()
            .filter(|(_, v)| *v >= t)
            .map(|(p, _)| p.clone())
            .collect()
    }

    /// Distinct attained values, increasing.
    pub fn attained_values(&self) -> Vec<Rational> {
        let set: BTreeSet<&Rational> = self.values.values().collect();
        set.into_iter().cloned().collect()
    }
}

/// `‖f - fs‖₁ / ‖f‖₁` for each generator.
pub fn function_report(
    f: &WeightedFunction,
    s: &[Word],
    action: &dyn GroupAction,
) -> Result<Vec<GeneratorRatio>> {
    let norm = f.l1();
    s.iter()
        .map(|g| {
            let moved = f.translate(g, action)?;
            Ok(GeneratorRatio {
                generator: g.render(action),
                ratio: f.l1_distance(&moved) / &norm,
            })
        })
        .collect()
}

/// Best level set for a single generator, with the co-area comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoareaWitness {
    pub generator: String,
    #[serde(with = "rational::text")]
    pub threshold: Rational,
    pub level_set_size: usize,
    /// `min_t #(F_t △ F_t s)/#F_t`.
    #[serde(with = "rational::text")]
    pub symdiff_ratio: Rational,
    /// `‖f - fs‖₁/‖f‖₁`.
    #[serde(with = "rational::text")]
    pub function_ratio: Rational,
}

impl CoareaWitness {
    pub fn holds(&self) -> bool {
        self.symdiff_ratio <= self.function_ratio
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayerCake {
    pub threshold: Rational,
    pub level_set: Vec<Point>,
    pub report: FolnerReport,
    pub coarea: Vec<CoareaWitness>,
}

/// Scans the level sets `F_t = {f ≥ t}` over attained values `t` and keeps the
/// one with the least union ratio (smallest `t` on ties). Per generator it
/// also records the least symmetric-difference ratio, which the co-area
/// formula bounds by `‖f - fs‖₁/‖f‖₁`.
pub fn layer_cake(f: &WeightedFunction, s: &[Word], action: &dyn GroupAction) -> Result<LayerCake> {
    let fr = function_report(f, s, action)?;
    let mut best: Option<(Rational, Vec<Point>, FolnerReport)> = None;
    let mut coarea: Vec<Option<CoareaWitness>> = vec![None; s.len()];
    for t in f.attained_values() {
        let level = f.level_set(&t);
        let report = set_report(&level, s, action)?;
        for (i, g) in s.iter().enumerate() {
            let r = symmetric_difference_ratio(&level, g, action)?;
            if coarea[i].as_ref().is_none_or(|w| r < w.symdiff_ratio) {
                coarea[i] = Some(CoareaWitness {
                    generator: fr[i].generator.clone(),
                    threshold: t.clone(),
                    level_set_size: level.len(),
                    symdiff_ratio: r,
                    function_ratio: fr[i].ratio.clone(),
                });
            }
        }
        if best
            .as_ref()
            .is_none_or(|(_, _, b)| report.union_ratio < b.union_ratio)
        {
            best = Some((t, level, report));
        }
    }
    let (threshold, level_set, report) = best.expect("a nonzero function attains a value");
    Ok(LayerCake {
        threshold,
        level_set,
        report,
        coarea: coarea
            .into_iter()
            .map(|w| w.expect("one threshold"))
            .collect(),
    })
}

/// `K F'`.
pub fn set_to_subspace<F: Field>(points: &[Point], field: &F) -> Result<LabeledSubspace<F>> {
    if points.is_empty() {
        return Err(Error::Degenerate("empty set".into()));
    }
    LabeledSubspace::coordinate_span(field.clone(), points)
}

/// Boundary report of a subspace: `dim((F + Fs)/F)/dim F` per multiplier and
/// `dim((F + FS)/F)/dim F` for `FS = Σ Fs`.
pub fn subspace_report<F: Field>(
    f: &LabeledSubspace<F>,
    s: &[Multiplier<F>],
    action: &dyn GroupAction,
) -> Result<FolnerReport> {
    if f.is_zero() {
        return Err(Error::Degenerate("zero subspace".into()));
    }
    let d = f.dim() as i64;
    let mut total = f.clone();
    let mut per = Vec::with_capacity(s.len());
    for m in s {
        let moved = f.apply(action, m)?;
        per.push(GeneratorRatio {
            generator: m.render(action),
            ratio: rational::ratio(f.quotient_dim(&moved)? as i64, d),
        });
        total = total.sum(&moved)?;
    }
    let boundary = total.dim() - f.dim();
    Ok(FolnerReport::new(
        format!("subspace of dimension {d} on {} labels", f.ambient_dim()),
        f.dim(),
        boundary,
        per,
    ))
}

pub fn words_as_multipliers<F: Field>(s: &[Word]) -> Vec<Multiplier<F>> {
    s.iter().cloned().map(Multiplier::Element).collect()
}

/// Certificate for one generator in [`subspace_to_function`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateEntry {
    pub generator: String,
    /// `[dim((F+Fs)/F) + dim((F+Fs)/Fs)] / dim F`, an exact bound on
    /// `‖m_F - m_{Fs}‖₁/‖m_F‖₁`.
    #[serde(with = "rational::text")]
    pub certificate: Rational,
    /// `‖f - fs‖₁/‖f‖₁` for the sampled `f = m̂_F`.
    #[serde(with = "rational::text")]
    pub sampled_ratio: Rational,
    /// `8·stderr·n/dim F`, with `n` the number of labels of `F`.
    pub tolerance: f64,
    pub within_tolerance: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionCertificate {
    pub function: SteinerEstimate,
    pub per_generator: Vec<CertificateEntry>,
}

impl FunctionCertificate {
    pub fn weighted_function(&self) -> Result<WeightedFunction> {
        WeightedFunction::from_estimate(&self.function)
    }
}

/// From an almost-invariant subspace to an almost-invariant function: `f` is
/// the sampled Steiner point of `F`. The per-generator certificate is exact
/// linear algebra; the sampled ratio is reported beside it.
pub fn subspace_to_function<F: Field>(
    f: &LabeledSubspace<F>,
    s: &[Word],
    action: &dyn GroupAction,
    cfg: &SteinerConfig,
) -> Result<FunctionCertificate> {
    if f.is_zero() {
        return Err(Error::Degenerate("zero subspace".into()));
    }
    let est = estimate_steiner_with(&SubspaceMatroid::new(f.clone()), cfg)?;
    let func = WeightedFunction::from_estimate(&est)?;
    let d = f.dim() as i64;
    let tolerance = 8.0 * est.stderr_bound * f.ambient_dim() as f64 / d as f64;
    let norm = func.l1();
    let per = s
        .iter()
        .map(|g| {
            let moved = f.act(action, g)?;
            let sum = f.sum(&moved)?;
            let cert = rational::ratio((2 * sum.dim() - f.dim() - moved.dim()) as i64, d);
            let sampled = func.l1_distance(&func.translate(g, action)?) / &norm;
            let within = rational::to_f64(&sampled) <= rational::to_f64(&cert) + tolerance;
            Ok(CertificateEntry {
                generator: g.render(action),
                certificate: cert,
                sampled_ratio: sampled,
                tolerance,
                within_tolerance: within,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FunctionCertificate {
        function: est,
        per_generator: per,
    })
}

/// Report for a Følner object enlarged by a mandatory finite piece `U`.
#[derive(Debug, Clone, PartialEq)]
pub struct AbsorbReport {
    pub report: FolnerReport,
    /// `(boundary of core + #(U ∪ US)) / #core`, or the subspace analogue.
    pub bound: Rational,
    pub contains_u: bool,
}

/// `F_core ∪ U` (sets) or `F_core + U` (subspaces), with the bound
/// `(∂F_core + #(U ∪ US))/#F_core` on its boundary ratio.
pub fn absorb_finite<F: Field>(
    core: &FolnerObject<F>,
    u: &FolnerObject<F>,
    s: &[Word],
    action: &dyn GroupAction,
) -> Result<AbsorbReport> {
    match (core, u) {
        (FamilyMember::Set(c), FamilyMember::Set(u)) => {
            let core_report = set_report(c, s, action)?;
            let mut merged: BTreeSet<Point> = c.iter().cloned().collect();
            merged.extend(u.iter().cloned());
            let merged: Vec<Point> = merged.into_iter().collect();
            let report = set_report(&merged, s, action)?;
            let mut u_closure: HashSet<Point> = u.iter().cloned().collect();
            for g in s {
                u_closure.extend(translate(action, u, g)?);
            }
            let bound = rational::ratio(
                (core_report.boundary + u_closure.len()) as i64,
                c.len() as i64,
            );
            let set: HashSet<&Point> = merged.iter().collect();
            Ok(AbsorbReport {
                report,
                bound,
                contains_u: u.iter().all(|p| set.contains(p)),
            })
        }
        (FamilyMember::Span(c), FamilyMember::Span(u)) => {
            let ms = words_as_multipliers(s);
            let core_report = subspace_report(c, &ms, action)?;
            let merged = c.sum(u)?;
            let report = subspace_report(&merged, &ms, action)?;
            let mut u_closure = u.clone();
            for g in s {
                u_closure = u_closure.sum(&u.act(action, g)?)?;
            }
            let bound = rational::ratio(
                (core_report.boundary + u_closure.dim()) as i64,
                c.dim() as i64,
            );
            Ok(AbsorbReport {
                report,
                bound,
                contains_u: merged.contains(u)?,
            })
        }
        _ => Err(Error::Domain(
            "core and U must both be sets or both be subspaces".into(),
        )),
    }
}
