use proptest::prelude::*;
use wlab_core::problems::{catalog, Problem};
use wlab_core::realizers::harness::{cantor_codes, Sampler};
use wlab_core::realizers::library::inf_to_lpojump;
use wlab_core::realizers::stage_outputs;
use wlab_core::spaces::{
    ball_semantics, completion, cylinder_code, distinct_codes, interval_code, make_space,
    measure_upper, point_code, precompletion, set_members, whole_code, Ball, ClosedSet, Name,
    Observation, Point, Representation, Space, EMPTY_BALL,
};
use wlab_core::streams::{
    cantor_pair, cantor_unpair, minus_one, Digits, minus_one_word, pair, plus_one_embed, Digit, Family,
    MinusOne, NameStream,
};
use wlab_core::spaces::Q;

fn ep(alphabet: std::ops::Range<Digit>, max_prefix: usize, max_period: usize) -> impl Strategy<Value = NameStream> {
    (
        prop::collection::vec(alphabet.clone(), 0..=max_prefix),
        prop::collection::vec(alphabet, 1..=max_period),
    )
        .prop_map(|(a, b)| NameStream::new(a, b).unwrap())
}

fn take(p: &NameStream, n: usize) -> Vec<Digit> {
    (0..n).map(|i| p.digit(i)).collect()
}

fn reps() -> Vec<Representation> {
    let b = |s| make_space(s).unwrap();
    vec![
        b(Space::Naturals),
        b(Space::Sierpinski),
        b(Space::Finite(3)),
        b(Space::Cantor),
        b(Space::Baire),
        b(Space::Closed(Box::new(Space::Naturals))),
        b(Space::ClosedRange),
        completion(&b(Space::Naturals)),
        completion(&b(Space::Cantor)),
        precompletion(&b(Space::Finite(2))),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn canonicalization_is_idempotent(p in ep(0..4, 6, 6)) {
        let c = p.canonical();
        prop_assert_eq!(c.canonical(), c.clone());
        prop_assert_eq!(take(&c, 60), take(&p, 60));
    }

    #[test]
    fn plus_one_then_minus_one(q in ep(0..5, 6, 6)) {
        let back = minus_one(&plus_one_embed(&q));
        let MinusOne::Infinite(r) = back else { panic!("finite") };
        prop_assert_eq!(take(&r, 100), take(&q, 100));
    }

    #[test]
    fn minus_one_drops_zeros(p in ep(0..3, 6, 6)) {
        let brute = minus_one_word(&take(&p, 400));
        match minus_one(&p) {
            MinusOne::Infinite(q) => {
                prop_assert!(p.period().iter().any(|&d| d != 0));
                prop_assert_eq!(take(&q, brute.len()), brute);
            }
            MinusOne::Finite(w) => {
                prop_assert!(p.period().iter().all(|&d| d == 0));
                prop_assert_eq!(w, brute);
            }
        }
    }

    #[test]
    fn pairing_interleaves(p in ep(0..4, 5, 5), q in ep(0..4, 5, 5)) {
        let r = pair(&p, &q);
        for n in 0..60 {
            prop_assert_eq!(r.digit(2 * n), p.digit(n));
            prop_assert_eq!(r.digit(2 * n + 1), q.digit(n));
        }
    }

    #[test]
    fn cantor_pairing_is_bijective(i in 0u128..1 << 40, j in 0u128..1 << 40) {
        prop_assert_eq!(cantor_unpair(cantor_pair(i, j)), (i, j));
    }

    #[test]
    fn tuple_rows_are_members(head in prop::collection::vec(ep(0..3, 3, 3), 0..4), tail in ep(0..3, 3, 3)) {
        let f = Family::switching(head, tail.clone());
        let t = f.tupled();
        for i in 0..6 {
            let m = f.member(i);
            for j in 0..20 {
                prop_assert_eq!(t.digit(cantor_pair(i as Digit, j as Digit) as usize), m.digit(j));
            }
        }
        prop_assert_eq!(f.limit().unwrap(), tail.canonical());
    }

    #[test]
    fn precompletion_shifts_names(q in ep(0..4, 5, 5)) {
        for r in reps() {
            let pre = precompletion(&r);
            prop_assert_eq!(pre.decode_ep(&plus_one_embed(&q)), r.decode_ep(&q), "{}", r);
            let expect = match minus_one(&q) {
                MinusOne::Infinite(s) => r.decode_ep(&s),
                MinusOne::Finite(_) => None,
            };
            prop_assert_eq!(pre.decode_ep(&q), expect, "{}", r);
        }
    }

    #[test]
    fn completions_commit_and_decoding_is_monotone(p in ep(0..4, 5, 5)) {
        for r in reps() {
            let depth = p.prefix().len() + 2 * p.period().len() + 1;
            for r in [r.clone(), completion(&r)] {
                let mut last = Observation::Pending;
                for d in 0..=depth {
                    let o = r.decode(&p, d);
                    if last != Observation::Pending {
                        prop_assert_eq!(&o, &last, "{} on {} at {}", r, p, d);
                    }
                    last = o;
                }
                if r.is_total() {
                    prop_assert!(matches!(last, Observation::Committed(_)), "{} on {}", r, p);
                }
            }
        }
    }

    #[test]
    fn naturals_members_match_balls(codes in prop::collection::vec(prop_oneof![
        (0u128..100).prop_map(point_code),
        Just(EMPTY_BALL),
        Just(whole_code()),
    ], 1..8)) {
        let c = NameStream::periodic(codes).unwrap();
        let set = set_members(&Space::Naturals, &c).unwrap();
        for n in 0..=100u128 {
            let hit = distinct_codes(&c).iter().any(|&b| match ball_semantics(&Space::Naturals, b).unwrap() {
                Ball::Empty => false,
                Ball::Whole => true,
                Ball::Point(m) => m == n,
                other => panic!("{other}"),
            });
            prop_assert_eq!(set.contains(&Point::Nat(n)), !hit, "{}", n);
        }
    }

    #[test]
    fn cylinder_members_and_measure(codes in prop::collection::vec(prop::sample::select(cantor_codes(4)), 1..6), lead in 0usize..3) {
        let (pre, per) = codes.split_at(lead.min(codes.len() - 1));
        let c = NameStream::new(pre.to_vec(), per.to_vec()).unwrap();
        let set = set_members(&Space::Cantor, &c).unwrap();
        let balls: Vec<Ball> = distinct_codes(&c).iter().map(|&b| ball_semantics(&Space::Cantor, b).unwrap()).collect();
        let mut inside = 0u32;
        for w in 0..64u32 {
            let word: Vec<Digit> = (0..6).map(|k| ((w >> k) & 1) as Digit).collect();
            let hit = balls.iter().any(|b| match b {
                Ball::Empty => false,
                Ball::Cylinder(u) => word.starts_with(u),
                other => panic!("{other}"),
            });
            inside += !hit as u32;
            let x = Point::Stream(NameStream::padded(&word, 0));
            prop_assert_eq!(set.contains(&x), !hit, "{:?}", word);
        }
        let exact = set.measure().unwrap();
        prop_assert_eq!(exact, Q::new(inside as i128, 64));
        for s in distinct_codes(&c).len()..distinct_codes(&c).len() + 4 {
            prop_assert_eq!(measure_upper(&c, s).unwrap(), exact);
        }
    }

    #[test]
    fn wft_agrees_with_emptiness(codes in prop::collection::vec(prop::collection::vec(0u128..3, 0..3), 1..6)) {
        let codes: Vec<Digit> = codes.iter().map(|w| cylinder_code(&Space::Baire, w)).collect();
        let c = NameStream::periodic(codes).unwrap();
        let set = set_members(&Space::Baire, &c).unwrap();
        let wft: Problem = "WFT".parse().unwrap();
        let x = wft.input_point(&Name::Stream(c)).unwrap();
        let y = wft.solve(&x).unwrap();
        prop_assert_eq!(y, Point::Nat(set.is_empty() as Digit));
        match set.least() {
            Some(m) => prop_assert!(set.contains(&m)),
            None => prop_assert!(set.is_empty()),
        }
    }

    #[test]
    fn inf_is_lpo_of_the_limit(p in ep(0..3, 5, 5)) {
        let inf: Problem = "INF".parse().unwrap();
        let lpo: Problem = "LPO".parse().unwrap();
        let Point::Nat(v) = inf.solve(&Point::Stream(p.clone())).unwrap() else { unreachable!() };
        // at most 10 zeros before the period, so 30 digits separate the cases
        let n = p.prefix().len() + 40 * p.period().len();
        let outs = stage_outputs(&inf_to_lpojump(), &p, n..n + 1, 30, 10_000);
        let head = &outs[0];
        let lim = if head.iter().all(|&d| d == 1) {
            NameStream::constant(1)
        } else {
            NameStream::padded(head, 0)
        };
        prop_assert_eq!(lpo.solve(&Point::Stream(lim)).unwrap(), Point::Nat(v));
    }
}

fn names_for(p: &Problem, s: &mut Sampler) -> Name {
    let space = match p {
        Problem::Jump(_) => {
            let head = (0..s.below(3)).map(|_| s.stream(&[0, 1, 2], 4)).collect();
            return Name::Family(Family::switching(head, s.stream(&[0, 1, 2], 4)));
        }
        _ => p.input_rep().base_space().clone(),
    };
    let cyl = |sp: &Space, alphabet: &[Digit], depth| -> Vec<Digit> {
        let mut v = vec![EMPTY_BALL];
        let mut words: Vec<Vec<Digit>> = vec![vec![]];
        for _ in 0..depth {
            words = words
                .iter()
                .flat_map(|w| alphabet.iter().map(move |&a| [w.clone(), vec![a]].concat()))
                .collect();
            v.extend(words.iter().map(|w| cylinder_code(sp, w)));
        }
        v
    };
    let alphabet: Vec<Digit> = match &space {
        Space::Baire => vec![0, 1, 2, 3],
        Space::Cantor => vec![0, 1],
        Space::ClosedRange => (0..6).collect(),
        Space::Closed(b) => match **b {
            Space::Finite(n) => (0..n as Digit).map(point_code).chain([EMPTY_BALL]).collect(),
            Space::Naturals => (0..6).map(point_code).chain([EMPTY_BALL]).collect(),
            Space::Cantor => cantor_codes(3),
            Space::Baire => cyl(&Space::Baire, &[0, 1], 2),
            Space::UnitInterval => {
                let mut v = vec![EMPTY_BALL];
                for a in 0..=8 {
                    for r in 1..=4 {
                        v.push(interval_code(Q::new(a, 8), Q::new(r, 16)));
                    }
                }
                v
            }
            ref o => panic!("{o}"),
        },
        Space::Star(_) => {
            // tuples of subsets of {0,1}, encoded from points
            let k = 1 + s.below(3);
            let sets = (0..k)
                .map(|_| {
                    let members: Vec<Digit> = (0..2).filter(|_| s.below(3) > 0).collect();
                    Point::Set(ClosedSet::Finite { size: 2, members })
                })
                .collect();
            return Name::Stream(p.input_rep().encode(&Point::Tuple(sets)).unwrap());
        }
        o => panic!("{o}"),
    };
    Name::Stream(s.stream(&alphabet, 6))
}

#[test]
fn solvers_are_sound_and_completions_accept_bottom() {
    let mut s = Sampler::new(7);
    for p in catalog() {
        let mut hits = 0;
        let mut misses = 0;
        for _ in 0..4000 {
            if hits >= 200 {
                break;
            }
            let Some(x) = p.input_point(&names_for(&p, &mut s)) else { continue };
            if !p.in_domain(&x) {
                misses += 1;
                let bar = p.clone().bar();
                assert!(bar.check(&x, &Point::Bottom).unwrap(), "{bar} on {x}");
                for y in bar.answers(&x, 4) {
                    assert!(bar.check(&x, &y).unwrap(), "{bar} on {x} gives {y}");
                }
                continue;
            }
            hits += 1;
            let y = p.solve(&x).unwrap();
            assert!(p.check(&x, &y).unwrap(), "{p} on {x} gives {y}");
        }
        assert!(hits >= 200, "{p}: only {hits} sampled points in the domain");
        eprintln!("  {p}: {hits} in domain, {misses} outside");
    }
}
