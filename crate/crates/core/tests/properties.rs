use std::collections::HashSet;

use amen_core::exec::Execution;
use amen_core::folner::{set_report, subspace_report, words_as_multipliers, WeightedFunction};
use amen_core::groups::{
    act, generator_words, FreeGroup, GroupAction, LampElement, Lamplighter, Lattice,
    PermutationAction, Point, Word,
};
use amen_core::linalg::echelon::rref;
use amen_core::linalg::{Field, LabeledSubspace, PrimeField, Rationals};
use amen_core::matroid::{basis_exchange, basis_extend, basis_restrict, SubspaceMatroid};
use amen_core::profile::iso_set_exact;
use amen_core::rational::{self, ratio, Rational};
use amen_core::steiner::{coupled_nested_estimate, estimate_steiner_with, SteinerConfig};
use num_traits::Zero;
use proptest::prelude::*;

fn matrix(max_n: usize, max_d: usize) -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    (1..=max_n, 1..=max_d).prop_flat_map(|(n, d)| {
        (
            Just(n),
            prop::collection::vec(prop::collection::vec(-2i64..=2, n), d),
        )
    })
}

fn subspace<F: Field>(field: &F, n: usize, rows: &[Vec<i64>]) -> LabeledSubspace<F> {
    let labels = (1..=n as i64).map(Point::Int).collect();
    let rows = rows
        .iter()
        .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
        .collect();
    LabeledSubspace::from_rows(field.clone(), labels, rows).unwrap()
}

/// `F` together with the span of some integer combinations of its rows.
fn nested<F: Field>(
    field: &F,
    n: usize,
    rows: &[Vec<i64>],
    combos: &[Vec<i64>],
) -> (LabeledSubspace<F>, LabeledSubspace<F>) {
    let f = subspace(field, n, rows);
    let e_rows: Vec<Vec<F::Elem>> = combos
        .iter()
        .map(|c| {
            let mut v = vec![field.zero(); n];
            for (k, r) in f.rows().iter().enumerate() {
                let c = field.from_i64(c[k % c.len()]);
                for (x, y) in v.iter_mut().zip(r) {
                    *x = field.add(x, &field.mul(&c, y));
                }
            }
            v
        })
        .collect();
    let e = LabeledSubspace::from_rows(field.clone(), f.labels().to_vec(), e_rows).unwrap();
    (e, f)
}

fn combos() -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-2i64..=2, 4), 1..=3)
}

fn weights(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, n)
}

fn lamp() -> impl Strategy<Value = LampElement> {
    (prop::collection::vec(-4i64..=4, 0..4), -4i64..=4).prop_map(|(l, p)| LampElement::new(l, p))
}

fn weight_of(m: &SubspaceMatroid<Rationals>, b: &amen_core::matroid::BasisSet, w: &[f64]) -> f64 {
    b.labels()
        .iter()
        .map(|p| w[m.labels().iter().position(|q| q == p).unwrap()])
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rref_is_idempotent((n, rows) in matrix(6, 4), p in prop::sample::select(vec![2u64, 3, 5])) {
        let f = PrimeField::new(p).unwrap();
        let m: Vec<Vec<u32>> = rows.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect();
        let once = rref(&f, m).unwrap();
        let twice = rref(&f, once.rows.clone()).unwrap();
        prop_assert_eq!(&once.rows, &twice.rows);
        prop_assert_eq!(once.rank(), once.pivots.len());
        prop_assert!(once.pivots.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(once.ncols, n);
    }

    #[test]
    fn grassmann_identity((n, a) in matrix(6, 4), b in prop::collection::vec(prop::collection::vec(-2i64..=2, 6), 1..=4)) {
        let b: Vec<Vec<i64>> = b.into_iter().map(|r| r[..n].to_vec()).collect();
        let (e, f) = (subspace(&Rationals, n, &a), subspace(&Rationals, n, &b));
        let sum = e.sum(&f).unwrap();
        let cap = e.intersection(&f).unwrap();
        prop_assert_eq!(sum.dim() + cap.dim(), e.dim() + f.dim());
        prop_assert!(sum.contains(&e).unwrap() && e.contains(&cap).unwrap() && f.contains(&cap).unwrap());
        prop_assert_eq!(e.quotient_dim(&f).unwrap(), sum.dim() - e.dim());
    }

    #[test]
    fn acting_then_undoing_is_identity((n, rows) in matrix(5, 3), w in prop::collection::vec(0usize..3, 0..6)) {
        let lg = Lamplighter::new();
        let word = Word(w);
        let labels: Vec<Point> = (0..n as i64).map(|t| Point::Lamp(LampElement::new([t], t))).collect();
        let f = LabeledSubspace::from_rows(
            PrimeField::new(3).unwrap(),
            labels,
            rows.iter().map(|r| r.iter().map(|&x| PrimeField::new(3).unwrap().from_i64(x)).collect()).collect(),
        ).unwrap();
        let back = f.act(&lg, &word).unwrap().act(&lg, &word.inverse(&lg)).unwrap();
        prop_assert_eq!(back, f.clone());
        prop_assert_eq!(f.act(&lg, &word).unwrap().dim(), f.dim());
    }

    #[test]
    fn lamplighter_is_associative(a in lamp(), b in lamp(), c in lamp()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&LampElement::identity()), a.clone());
        prop_assert!(a.mul(&b).is_canonical());
    }

    #[test]
    fn generators_round_trip(x in lamp(), w in prop::collection::vec(0usize..3, 0..8), fw in prop::collection::vec(0usize..4, 0..8)) {
        let lg = Lamplighter::new();
        let p = Point::Lamp(x);
        let word = Word(w);
        let there = act(&lg, &p, &word).unwrap();
        prop_assert_eq!(act(&lg, &there, &word.inverse(&lg)).unwrap(), p);
        let f2 = FreeGroup::new(2).unwrap();
        let fword = Word(fw);
        let y = act(&f2, &f2.base_point(), &fword).unwrap();
        prop_assert_eq!(act(&f2, &y, &fword.inverse(&f2)).unwrap(), f2.base_point());
        let z = Lattice::new(2).unwrap();
        let parsed = Word::parse(&z, &word_text(&z, &fword)).unwrap();
        prop_assert_eq!(parsed, fword);
    }

    #[test]
    fn greedy_is_optimal((n, rows) in matrix(6, 3), w in weights(6)) {
        let m = SubspaceMatroid::new(subspace(&Rationals, n, &rows));
        let w = &w[..n];
        let g = m.greedy_min_basis(w).unwrap();
        prop_assert!(m.is_basis(&g).unwrap());
        let best = m.enumerate_bases(10_000).unwrap().iter().map(|b| weight_of(&m, b, w)).fold(f64::INFINITY, f64::min);
        prop_assert!(weight_of(&m, &g, w) <= best + 1e-12);
    }

    #[test]
    fn nested_greedy_bases_are_contained((n, rows) in matrix(7, 4), c in combos(), w in weights(7), p in prop::sample::select(vec![2u64, 3])) {
        let field = PrimeField::new(p).unwrap();
        let (e, f) = nested(&field, n, &rows, &c);
        let (me, mf) = (SubspaceMatroid::new(e), SubspaceMatroid::new(f));
        let w = &w[..n];
        prop_assert!(me.greedy_min_basis(w).unwrap().is_subset(&mf.greedy_min_basis(w).unwrap()));
    }

    #[test]
    fn extend_restrict_exchange((n, rows) in matrix(7, 4), c in combos(), w1 in weights(7), w2 in weights(7)) {
        let field = PrimeField::new(2).unwrap();
        let (e, f) = nested(&field, n, &rows, &c);
        prop_assume!(!e.is_zero());
        let (me, mf) = (SubspaceMatroid::new(e), SubspaceMatroid::new(f));
        let s = me.greedy_min_basis(&w1[..n]).unwrap();
        let t = mf.greedy_min_basis(&w2[..n]).unwrap();
        let ext = basis_extend(&me, &mf, &s).unwrap();
        prop_assert!(mf.is_basis(&ext).unwrap() && s.is_subset(&ext));
        let res = basis_restrict(&me, &mf, &t).unwrap();
        prop_assert!(me.is_basis(&res).unwrap() && res.is_subset(&t));
        for k in s.labels() {
            let l = basis_exchange(&me, &mf, &s, &t, k).unwrap();
            prop_assert!(t.contains(&l));
            prop_assert!(me.is_basis(&s.swap(k, &l)).unwrap());
            prop_assert!(mf.is_basis(&t.swap(&l, k)).unwrap());
        }
    }

    #[test]
    fn steiner_invariants((n, rows) in matrix(6, 3), seed in 0u64..1_000) {
        let m = SubspaceMatroid::new(subspace(&Rationals, n, &rows));
        prop_assume!(m.rank() > 0);
        let seq = estimate_steiner_with(&m, &SteinerConfig::new(300, seed).with_execution(Execution::Sequential)).unwrap();
        let par = estimate_steiner_with(&m, &SteinerConfig::new(300, seed).with_execution(Execution::Parallel)).unwrap();
        prop_assert_eq!(&seq, &par);
        prop_assert_eq!(seq.l1(), Rational::from_integer(m.rank().into()));
        prop_assert!(seq.vector.iter().all(rational::is_unit_interval));
        let total = seq.angles().unwrap().values().fold(Rational::zero(), |a, b| a + b);
        prop_assert_eq!(total, ratio(1, 1));
    }

    #[test]
    fn coupled_gap_is_exact((n, rows) in matrix(6, 4), c in combos(), seed in 0u64..1_000) {
        let (e, f) = nested(&Rationals, n, &rows, &c);
        prop_assume!(!f.is_zero());
        let (me, mf) = (SubspaceMatroid::new(e), SubspaceMatroid::new(f));
        let est = coupled_nested_estimate(&me, &mf, 200, seed).unwrap();
        prop_assert!(est.is_monotone());
        prop_assert_eq!(est.l1_gap(), Rational::from_integer((mf.rank() - me.rank()).into()));
    }

    #[test]
    fn union_bound_and_span_comparison(pts in prop::collection::btree_set(-10i64..10, 1..12)) {
        let z = Lattice::integers();
        let s = generator_words(&z);
        let set: Vec<Point> = pts.into_iter().map(Point::Int).collect();
        let r = set_report(&set, &s, &z).unwrap();
        let sum = r.per_generator.iter().fold(Rational::zero(), |a, g| a + &g.ratio);
        prop_assert!(r.union_ratio <= sum);
        prop_assert!(r.max_generator_ratio() <= r.union_ratio);
        let span = LabeledSubspace::coordinate_span(PrimeField::new(2).unwrap(), &set).unwrap();
        let sr = subspace_report(&span, &words_as_multipliers(&s), &z).unwrap();
        prop_assert_eq!(sr.union_ratio, r.union_ratio);
        let ind = WeightedFunction::indicator(&set).unwrap();
        let moved = ind.translate(&s[0], &z).unwrap();
        prop_assert_eq!(ind.l1_distance(&moved) / ind.l1(), amen_core::folner::symmetric_difference_ratio(&set, &s[0], &z).unwrap());
    }

    #[test]
    fn exact_profile_matches_brute_force(perm in Just((0..7usize).collect::<Vec<_>>()).prop_shuffle(), v_max in 1usize..=7) {
        let p = PermutationAction::new("p", 7, vec![("g".into(), perm)]).unwrap();
        let s = generator_words(&p);
        let table = iso_set_exact(&p, &p.points(), &s, v_max, Execution::Parallel).unwrap();
        let seq = iso_set_exact(&p, &p.points(), &s, v_max, Execution::Sequential).unwrap();
        prop_assert_eq!(&table, &seq);
        prop_assert!(table.is_nonincreasing());
        for row in &table.rows {
            prop_assert_eq!(Some(row.ratio.clone()), brute_force_profile(&p, &p.points(), &s, row.v));
            prop_assert_eq!(set_report(row.points.as_ref().unwrap(), &s, &p).unwrap().union_ratio, row.ratio.clone());
        }
    }

    #[test]
    fn rational_text_round_trip(a in -1_000i64..1_000, b in 1i64..1_000) {
        let r = ratio(a, b);
        prop_assert_eq!(rational::parse(&rational::to_text(&r)).unwrap(), r);
    }
}

fn word_text(action: &dyn GroupAction, w: &Word) -> String {
    w.render(action)
}

fn brute_force_profile(
    action: &dyn GroupAction,
    window: &[Point],
    s: &[Word],
    v: usize,
) -> Option<Rational> {
    let mut best: Option<Rational> = None;
    for mask in 1u32..(1 << window.len()) {
        if mask.count_ones() as usize > v {
            continue;
        }
        let set: HashSet<Point> = (0..window.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| window[i].clone())
            .collect();
        let image: HashSet<Point> = set
            .iter()
            .flat_map(|x| s.iter().map(move |g| act(action, x, g).unwrap()))
            .filter(|y| !set.contains(y))
            .collect();
        let r = ratio(image.len() as i64, set.len() as i64);
        if best.as_ref().is_none_or(|b| r < *b) {
            best = Some(r);
        }
    }
    best
}
