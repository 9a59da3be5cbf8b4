//! Property tests for the invariants of each module.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::{
    antitone_presheaf, coherent_endomorphism, compatibility_oracle, names, presheaf_sets, random_poset,
    random_quotient, random_tree, square_oracle, Rng,
};
use proptest::prelude::*;
use semiostat::adjunction::{
    check_galois, check_triangles, factor_through_meaning, right_adjoint_of, GaloisConnection, QuotientFactorization,
};
use semiostat::context::{
    check_presheaf, global_sections, refine, stage_truth, truth_downset, DownsetLattice, Refinement, StageTruth,
};
use semiostat::equiv::{make_partition, Basin};
use semiostat::fincat::{category_of, check_category, check_functor, poset_morphism_id, FunctorData, Variance};
use semiostat::order::Poset;
use semiostat::scalar::{self, ScalarParams, TrajectoryStatus};
use semiostat::temporal::{check_endomorphism, check_tree, fixed_elements, unfold, TreeEndomorphism, TreeObject};
use semiostat::Error;

fn poset_from(seed: u64, max: usize) -> Poset {
    let mut rng = Rng::new(seed);
    let n = rng.range(1, max);
    random_poset(&mut rng, n, 0.45)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn poset_categories_satisfy_the_laws(seed in any::<u64>()) {
        let p = poset_from(seed, 6);
        let c = category_of(&p);
        prop_assert!(check_category(&c).unwrap().is_pass());
        prop_assert!(check_functor(&FunctorData::identity(&c)).unwrap().is_pass());
        let point = category_of(&Poset::chain(["*"]).unwrap());
        prop_assert!(check_functor(&FunctorData::constant(&c, &point).unwrap()).unwrap().is_pass());
    }

    #[test]
    fn reversal_is_a_contravariant_functor_to_the_opposite(seed in any::<u64>()) {
        let p = poset_from(seed, 5);
        let c = category_of(&p);
        let op = category_of(&p.opposite());
        let f = FunctorData {
            object_map: c.objects.iter().map(|o| (o.clone(), o.clone())).collect(),
            morphism_map: c.morphisms.iter().map(|m| (m.id.clone(), poset_morphism_id(&m.target, &m.source))).collect(),
            source: c,
            target: op,
            variance: Variance::Contravariant,
        };
        prop_assert!(check_functor(&f).unwrap().is_pass());
        let mut covariant = f.clone();
        covariant.variance = Variance::Covariant;
        let non_discrete = p.elements().iter().any(|a| p.elements().iter().any(|b| a != b && p.leq(a, b)));
        prop_assert_eq!(check_functor(&covariant).unwrap().is_pass(), !non_discrete);
    }

    #[test]
    fn every_composition_flip_is_detected(seed in any::<u64>()) {
        let p = poset_from(seed, 4);
        prop_assume!(p.len() >= 2);
        let c = category_of(&p);
        for (key, value) in &c.composition {
            for m in c.morphisms.iter().filter(|m| m.id != *value) {
                let mut broken = c.clone();
                broken.composition.insert(key.clone(), m.id.clone());
                prop_assert!(!check_category(&broken).unwrap().is_pass(), "{key:?} -> {}", m.id);
            }
        }
    }

    #[test]
    fn partitions_are_least_representative_equivalences(seed in any::<u64>()) {
        let q = random_quotient(&mut Rng::new(seed), 12);
        let part = q.partition();
        for (a, b) in &q.pairs {
            prop_assert!(part.same_class(a, b));
        }
        let mut covered = BTreeSet::new();
        for (rep, members) in part.classes() {
            prop_assert_eq!(members.iter().min().copied(), Some(rep));
            prop_assert!(part.is_representative(rep));
            for m in members {
                prop_assert!(covered.insert(m.to_string()));
                prop_assert_eq!(part.class_of(m), Some(rep));
            }
        }
        prop_assert_eq!(covered.len(), q.states.len());
    }

    #[test]
    fn certifier_matches_all_pairs_oracle(seed in any::<u64>()) {
        let q = random_quotient(&mut Rng::new(seed), 12);
        let sys = q.system();
        let verdict = sys.certify_compatibility();
        prop_assert_eq!(verdict.is_compatible(), compatibility_oracle(&q));
        if verdict.is_compatible() {
            let part = q.partition();
            let map = sys.class_map().unwrap();
            for x in &q.states {
                let image = part.class_of(&q.interpret[&q.transform[x]]).unwrap();
                prop_assert_eq!(map[part.class_of(x).unwrap()].as_str(), image);
            }
            let dynamics = sys.find_class_fixed_points().unwrap();
            for (class, basin) in &dynamics.basin {
                // Follow the class map long enough to enter the attractor.
                let mut c = class.clone();
                for _ in 0..map.len() {
                    c = map[&c].clone();
                }
                match basin {
                    Basin::Fixed(f) => prop_assert_eq!(&c, f),
                    Basin::Cycle(i) => prop_assert!(dynamics.cycles[*i].contains(&c)),
                    Basin::Absorbed => prop_assert!(false, "no sink"),
                }
            }
            for f in &dynamics.fixed {
                prop_assert_eq!(&map[f], f);
            }
        } else {
            let uncertified = matches!(sys.quotient_step(&q.states[0]), Err(Error::Uncertified { .. }));
            prop_assert!(uncertified);
        }
    }

    #[test]
    fn phi_is_bounded_and_its_derivative_matches(alpha in 0.0f64..3.0, beta in 0.01f64..2.0, x in -50.0f64..50.0) {
        let p = ScalarParams::new(alpha, beta).unwrap();
        let v = scalar::phi(&p, x).unwrap();
        prop_assert!(v.abs() <= beta);
        if x.abs() <= 3.0 {
            prop_assert!(v.abs() < beta);
        }
        let h = 1e-6;
        let fd = (scalar::phi(&p, x + h).unwrap() - scalar::phi(&p, x - h).unwrap()) / (2.0 * h);
        prop_assert!((fd - scalar::phi_derivative(&p, x).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn projection_is_idempotent_and_close(x in -1e3f64..1e3, k in 1i32..12) {
        let p = ScalarParams::new(0.5, 0.5).unwrap().with_epsilon(10f64.powi(-k)).unwrap();
        let y = scalar::project(&p, x);
        prop_assert!((y - x).abs() <= p.epsilon / 2.0 + 1e-12 * x.abs().max(1.0));
        prop_assert_eq!(scalar::project(&p, y), y);
    }

    #[test]
    fn certified_contractions_converge(alpha in 0.0f64..1.5, beta_frac in 0.05f64..0.95, x0 in -5.0f64..5.0, y in -5.0f64..5.0) {
        let beta = beta_frac / (1.0 + alpha);
        let p = ScalarParams::new(alpha, beta).unwrap();
        let r = scalar::contraction_report(&p).unwrap();
        prop_assert!(r.is_certified);
        prop_assert!(r.empirical_max <= r.bound + 1e-12);
        let lip = (scalar::phi(&p, x0).unwrap() - scalar::phi(&p, y).unwrap()).abs();
        prop_assert!(lip <= r.bound * (x0 - y).abs() + 1e-12);
        let t = scalar::iterate(&p, x0).unwrap();
        let converged = matches!(t.status, TrajectoryStatus::Converged { .. });
        prop_assert!(converged);
    }

    #[test]
    fn fixed_points_are_roots(alpha in 0.0f64..2.0, beta in 0.1f64..2.0) {
        let p = ScalarParams::new(alpha, beta).unwrap();
        let fps = scalar::find_fixed_points(&p, -4.0, 4.0).unwrap();
        prop_assert!(fps.iter().any(|f| f.x.abs() < 1e-10), "0 is always fixed");
        for w in fps.windows(2) {
            prop_assert!(w[0].x < w[1].x);
        }
        for f in &fps {
            prop_assert!((scalar::phi(&p, f.x).unwrap() - f.x).abs() < 1e-9);
        }
    }

    #[test]
    fn antitone_presheaves_pass_and_answer_queries(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let n = rng.range(1, 6);
        let poset = random_poset(&mut rng, n, 0.45);
        let universe = names("m", rng.range(1, 6));
        let p = antitone_presheaf(&mut rng, &poset, &universe);
        prop_assert!(check_presheaf(&p).is_pass());
        let sets = presheaf_sets(&p);
        let expected: BTreeSet<String> = universe.iter().filter(|m| sets.values().all(|s| s.contains(*m))).cloned().collect();
        prop_assert_eq!(global_sections(&p), expected);

        let prop_set: BTreeSet<String> = universe.iter().filter(|_| rng.chance(0.5)).cloned().collect();
        for c in poset.elements() {
            let s = &sets[c];
            let truth = stage_truth(&p, &prop_set, c).unwrap();
            let oracle = if !s.is_empty() && s.is_subset(&prop_set) {
                StageTruth::Validated
            } else if !s.is_empty() && s.is_disjoint(&prop_set) {
                StageTruth::Refuted
            } else {
                StageTruth::Undetermined
            };
            prop_assert_eq!(truth, oracle);
            for m in &universe {
                match refine(&p, c, m).unwrap() {
                    Refinement::Survives => prop_assert!(s.contains(m)),
                    Refinement::PrunedAt { context, chain } => {
                        prop_assert!(!s.contains(m));
                        prop_assert!(!sets[&context].contains(m));
                        prop_assert!(poset.leq(&context, c));
                        prop_assert_eq!(chain.last(), Some(c));
                        for w in chain.windows(2) {
                            prop_assert!(poset.leq(&w[0], &w[1]));
                        }
                        for b in poset.elements() {
                            if b != &context && poset.leq(b, &context) {
                                prop_assert!(sets[b].contains(m));
                            }
                        }
                    }
                }
            }
        }
        if sets.values().all(|s| !s.is_empty()) {
            let d = truth_downset(&p, &prop_set).unwrap();
            for c in d.members() {
                for e in poset.elements() {
                    if poset.leq(c, e) {
                        prop_assert!(d.contains(e));
                    }
                }
            }
        }
    }

    #[test]
    fn downset_implication_is_the_largest_solution(seed in any::<u64>()) {
        let lattice = DownsetLattice::new(poset_from(seed, 5));
        let all = lattice.all_downsets();
        for a in &all {
            for b in &all {
                let imp = lattice.implies(a, b);
                let largest = all
                    .iter()
                    .filter(|c| lattice.meet(c, a).members().is_subset(b.members()))
                    .fold(lattice.bottom(), |acc, c| lattice.join(&acc, c));
                prop_assert_eq!(&imp, &largest);
                prop_assert!(lattice.leq(&lattice.meet(a, b), a));
                prop_assert!(lattice.leq(a, &lattice.join(a, b)));
            }
        }
    }

    #[test]
    fn trees_and_endomorphisms_are_coherent(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let depth = rng.range(0, 4);
        let t = random_tree(&mut rng, depth, 6);
        prop_assert!(check_tree(&t).unwrap().is_pass());
        prop_assert!(check_endomorphism(&TreeEndomorphism::identity(&t)).unwrap().is_pass());
        let l = coherent_endomorphism(&mut rng, &t);
        prop_assert!(check_endomorphism(&l).unwrap().is_pass());
        let fixed = fixed_elements(&l).unwrap();
        for chain in &fixed.chains {
            prop_assert_eq!(chain.len(), depth + 1);
            for (i, x) in chain.iter().enumerate() {
                let n = depth - i;
                prop_assert_eq!(&l.components[n][x], x);
                if n > 0 {
                    prop_assert_eq!(&t.restrictions[n - 1][x], &chain[i + 1]);
                }
            }
        }
        // Oracle: every top-level thread that is fixed everywhere is listed.
        let expected = t.levels[depth].iter().filter(|x| {
            let thread = t.thread(depth, x).unwrap();
            thread.iter().enumerate().all(|(i, y)| l.components[depth - i][y] == *y)
        }).count();
        prop_assert_eq!(fixed.chains.len(), expected);
    }

    #[test]
    fn identity_unfold_is_constant(seed in any::<u64>(), depth in 0usize..5) {
        let mut rng = Rng::new(seed);
        let seeds = names("x", rng.range(1, 6));
        let t = unfold(seeds.clone(), depth, |_, x| Some(x.to_string())).unwrap();
        let level: BTreeSet<String> = seeds.into_iter().collect();
        prop_assert_eq!(t, TreeObject::constant(level, depth));
    }

    #[test]
    fn galois_connections_agree_with_enumeration(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let (n, m) = (rng.range(1, 4), rng.range(1, 4));
        let s = random_poset(&mut rng, n, 0.5);
        let t = random_poset(&mut rng, m, 0.5);
        let lower: BTreeMap<String, String> = s.elements().iter().map(|x| (x.clone(), rng.pick(t.elements()).clone())).collect();
        let adjoint = right_adjoint_of(&s, &t, &lower);
        // Every G: T -> S.
        let mut passing = Vec::new();
        for mut code in 0..n.pow(m as u32) {
            let upper: BTreeMap<String, String> = t.elements().iter().map(|y| {
                let x = s.elements()[code % n].clone();
                code /= n;
                (y.clone(), x)
            }).collect();
            let gc = GaloisConnection { source: s.clone(), target: t.clone(), lower: lower.clone(), upper };
            let report = check_galois(&gc).unwrap();
            if report.adjunction.is_pass() {
                prop_assert!(check_triangles(&gc).unwrap().is_pass());
                passing.push(gc.upper);
            }
        }
        prop_assert!(passing.len() <= 1, "right adjoints are unique");
        prop_assert_eq!(adjoint, passing.into_iter().next());
    }

    #[test]
    fn factorization_reproduces_class_constant_maps(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let n = rng.range(1, 7);
        let xs = names("s", n);
        let pairs: Vec<(String, String)> = (0..rng.below(n + 1)).map(|_| (rng.pick(&xs).clone(), rng.pick(&xs).clone())).collect();
        let partition = make_partition(xs.clone(), pairs).unwrap();
        let codomain = names("d", rng.range(1, 4));
        let meaning: BTreeMap<String, String> = xs.iter().map(|x| (x.clone(), rng.pick(&codomain).clone())).collect();
        let constant = xs.iter().all(|x| xs.iter().all(|y| !partition.same_class(x, y) || meaning[x] == meaning[y]));
        let q = QuotientFactorization { partition: partition.clone(), meaning: meaning.clone(), codomain: codomain.iter().cloned().collect() };
        match factor_through_meaning(&q) {
            Ok(f) => {
                prop_assert!(constant);
                prop_assert!(f.certificate.is_unique());
                for x in &xs {
                    prop_assert_eq!(f.apply(&partition, x), Some(meaning[x].as_str()));
                }
            }
            Err(Error::NotClassConstant { x, y, hx, hy }) => {
                prop_assert!(!constant);
                prop_assert!(partition.same_class(&x, &y));
                prop_assert_eq!(&meaning[&x], &hx);
                prop_assert_eq!(&meaning[&y], &hy);
                prop_assert_ne!(hx, hy);
            }
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}

/// Across seeds, at least 95% of single-component changes to a coherent
/// endomorphism are caught, and each one that is not really is coherent.
#[test]
fn endomorphism_mutations_are_detected_across_seeds() {
    let (mut total, mut detected) = (0, 0);
    for seed in 0..10u64 {
        let mut rng = Rng::new(seed);
        for _ in 0..200 {
            let depth = rng.range(1, 4);
            let t = random_tree(&mut rng, depth, 6);
            let l = coherent_endomorphism(&mut rng, &t);
            let n = rng.below(depth + 1);
            let states: Vec<String> = t.levels[n].iter().cloned().collect();
            let x = rng.pick(&states).clone();
            let others: Vec<String> = states.iter().filter(|s| **s != l.components[n][&x]).cloned().collect();
            let mut components = l.components.clone();
            components[n].insert(x, rng.pick(&others).clone());
            let coherent = square_oracle(&t, &components);
            let caught = !check_endomorphism(&TreeEndomorphism::new(t, components).unwrap()).unwrap().is_pass();
            assert!(caught || coherent, "seed {seed}: incoherent mutation missed");
            total += 1;
            detected += usize::from(caught);
        }
    }
    let rate = detected as f64 / total as f64;
    println!("endomorphism mutations detected: {detected}/{total} ({:.1}%)", 100.0 * rate);
    assert!(rate >= 0.95, "detection rate {rate}");
}
