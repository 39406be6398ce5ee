use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use orbitset::lattice::DEFAULT_TORSION_CAP;
use orbitset::toric::{
    orbit_step, BinomialEquation, MonomialMap, RationalTorusPoint, ToricBuild, ToricProblem,
};
use orbitset::{APSet, Pipeline, SmlOptions};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn pipeline(bound: u64) -> Pipeline {
    Pipeline::new(
        SmlOptions::default().with_search_bound(bound),
        DEFAULT_TORSION_CAP,
    )
    .unwrap()
}

fn coordinate() -> impl Strategy<Value = BigRational> {
    (
        prop::sample::select(vec![1i64, 2, 3, 6]),
        prop::sample::select(vec![1i64, 2, 3]),
        any::<bool>(),
    )
        .prop_map(|(n, d, neg)| q(if neg { -n } else { n }, d))
}

/// Small point, map with entries in `-1..=1` (exponents may double every step), and one equation whose constant is
/// read off an early orbit point so that it has a chance of recurring.
fn instance() -> impl Strategy<Value = ToricProblem> {
    (1usize..=2).prop_flat_map(|n| {
        (
            prop::collection::vec(coordinate(), n),
            prop::collection::vec(prop::collection::vec(-1i64..=1, n), n),
            prop::collection::vec(-1i64..=1, n),
            0usize..6,
        )
            .prop_map(move |(coords, rows, exps, k0)| {
                let point = RationalTorusPoint::new(coords).unwrap();
                let rows: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
                let map = MonomialMap::from_i64s(&rows).unwrap();
                let exps: Vec<BigInt> = exps.into_iter().map(BigInt::from).collect();
                let mut x = point.clone();
                for _ in 0..k0 {
                    x = orbit_step(&map, &x);
                }
                let probe = BinomialEquation::new(exps.clone(), BigRational::one()).unwrap();
                let constant = monomial_value(&probe, &x);
                let eq = BinomialEquation::new(exps, constant).unwrap();
                ToricProblem::new(point, map, vec![eq]).unwrap()
            })
    })
}

fn monomial_value(eq: &BinomialEquation, x: &RationalTorusPoint) -> BigRational {
    x.coords()
        .iter()
        .zip(&eq.exponents)
        .fold(BigRational::one(), |acc, (c, a)| {
            let k: i32 = a.try_into().unwrap();
            acc * c.pow(k)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn embedding_commutes_with_the_map(t in instance()) {
        let group = t.group();
        let phi = t.endomorphism();
        let mut x = t.point.clone();
        let mut v = t.embed(&x).unwrap();
        for _ in 0..12 {
            prop_assert_eq!(t.lift(&v), x.clone());
            x = orbit_step(&t.map, &x);
            v = phi.apply(&group, &v);
            prop_assert_eq!(t.embed(&x), Some(v.clone()));
        }
    }

    #[test]
    fn solutions_match_direct_iteration(t in instance()) {
        let set = t.solve(&pipeline(30)).unwrap();
        prop_assert_eq!(set.enumerate_up_to(12), t.direct_hits(12));
    }
}

/// Bounded-growth maps whose orbits stay cheap to iterate far out.
fn corpus() -> Vec<ToricProblem> {
    let eq = |e: &[i64], c: BigRational| {
        BinomialEquation::new(e.iter().map(|&x| x.into()).collect(), c).unwrap()
    };
    let make = |p: &[i64], m: &[&[i64]], eqs: Vec<BinomialEquation>| {
        ToricProblem::new(
            RationalTorusPoint::from_i64s(p).unwrap(),
            MonomialMap::from_i64s(m).unwrap(),
            eqs,
        )
        .unwrap()
    };
    vec![
        make(&[3, 2], &[&[1, 1], &[0, 1]], vec![eq(&[1, 0], q(48, 1))]),
        make(&[2], &[&[-1]], vec![eq(&[1], q(2, 1))]),
        make(&[-2], &[&[-1]], vec![eq(&[1], q(-1, 2))]),
        make(&[2, 3], &[&[0, 1], &[1, 0]], vec![eq(&[1, -1], q(3, 2))]),
        make(&[6, -1], &[&[1, 1], &[0, 1]], vec![eq(&[1, 0], q(6, 1))]),
        make(
            &[2, -3],
            &[&[1, 0], &[1, 1]],
            vec![eq(&[0, 1], q(-3, 1)), eq(&[1, 0], q(2, 1))],
        ),
        make(&[1, 2], &[&[1, 0], &[0, 1]], vec![eq(&[0, 1], q(2, 1))]),
    ]
}

#[test]
fn corpus_agrees_with_direct_iteration() {
    let solver = pipeline(2000);
    for (i, t) in corpus().iter().enumerate() {
        let set = t.solve(&solver).unwrap();
        assert_eq!(
            set.enumerate_up_to(2000),
            t.direct_hits(2000),
            "corpus entry {i}"
        );
    }
}

#[test]
fn worked_examples() {
    let five = ToricProblem::new(
        RationalTorusPoint::from_i64s(&[5]).unwrap(),
        MonomialMap::from_i64s(&[&[1]]).unwrap(),
        vec![BinomialEquation::new(vec![1.into()], q(7, 1)).unwrap()],
    )
    .unwrap();
    assert!(matches!(five.build().unwrap(), ToricBuild::Empty(c) if c.equation == Some(0)));
    assert!(five.solve(&pipeline(100)).unwrap().is_empty());

    let ones = ToricProblem::new(
        RationalTorusPoint::from_i64s(&[1, 1]).unwrap(),
        MonomialMap::from_i64s(&[&[2, 1], &[1, 1]]).unwrap(),
        vec![BinomialEquation::new(vec![1.into(), 0.into()], q(1, 1)).unwrap()],
    )
    .unwrap();
    assert_eq!(ones.solve(&pipeline(100)).unwrap(), APSet::naturals());
}
