//! Property tests over the random corpus and random firing walks.
//! Every oracle here is a brute-force search that shares no code with the
//! routine it checks.

use std::collections::BTreeSet;

use proptest::prelude::*;

use cdetect::corpus::{sample, CorpusConfig, Sample};
use cdetect::detect::{verify_all, Options};
use cdetect::feasibility::{integer_feasible, realize, ConstraintSystem};
use cdetect::io::{net_to_toml, parse_net};
use cdetect::{
    build_brg, minimal_explanations, unobservable_reach, BrgOptions, CrucialSet, Gmec, LabeledPetriNet, Marking,
    ParikhVector,
};

fn small(seed: u64) -> Sample {
    sample(seed, &CorpusConfig::default()).expect("default config always yields a net")
}

/// All Parikh vectors of unobservable firing sequences from `m`, with the
/// marking each one reaches. Finite because the subnet is acyclic.
fn silent_runs(net: &LabeledPetriNet, m: &Marking) -> BTreeSet<(Vec<u32>, Marking)> {
    let silent: Vec<usize> = net.unobservable_transitions().collect();
    let mut out = BTreeSet::new();
    let mut stack = vec![(vec![0u32; silent.len()], m.clone())];
    while let Some((y, mk)) = stack.pop() {
        if !out.insert((y.clone(), mk.clone())) {
            continue;
        }
        for (j, &t) in silent.iter().enumerate() {
            if net.enabled(&mk, t).unwrap() {
                let mut y2 = y.clone();
                y2[j] += 1;
                stack.push((y2, net.fire(&mk, t).unwrap()));
            }
        }
    }
    out
}

fn pareto_min(vs: &BTreeSet<Vec<u32>>) -> Vec<Vec<u32>> {
    let le = |a: &Vec<u32>, b: &Vec<u32>| a.iter().zip(b).all(|(x, y)| x <= y);
    vs.iter()
        .filter(|y| !vs.iter().any(|z| z != *y && le(z, y)))
        .cloned()
        .collect()
}

/// Every vector in `[0, bound]^k`.
fn boxed(k: usize, bound: u32) -> impl Iterator<Item = Vec<u32>> {
    let total = (bound as usize + 1).pow(k as u32);
    (0..total).map(move |mut i| {
        (0..k)
            .map(|_| {
                let d = (i % (bound as usize + 1)) as u32;
                i /= bound as usize + 1;
                d
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn firing_matches_state_equation(seed in any::<u64>(), picks in prop::collection::vec(any::<usize>(), 0..12)) {
        let s = small(seed);
        let mut m = s.net.initial().clone();
        let mut seq = Vec::new();
        for p in picks {
            let enabled: Vec<usize> = (0..s.net.transition_count()).filter(|&t| s.net.enabled(&m, t).unwrap()).collect();
            prop_assert!(!enabled.is_empty(), "corpus nets are deadlock-free");
            let t = enabled[p % enabled.len()];
            m = s.net.fire(&m, t).unwrap();
            seq.push(t);
        }
        let y = s.net.parikh(&seq).unwrap();
        prop_assert_eq!(s.net.apply_state_equation(s.net.initial(), &y), Some(m.clone()));
        prop_assert_eq!(s.net.fire_sequence(s.net.initial(), &seq).unwrap(), m);
    }

    #[test]
    fn enabling_is_monotone(seed in any::<u64>(), extra in prop::collection::vec(0u32..3, 6)) {
        let s = small(seed);
        for m in s.rg.markings() {
            let bigger = Marking::new(m.tokens().iter().zip(&extra).map(|(a, b)| a + b).collect());
            for t in 0..s.net.transition_count() {
                if s.net.enabled(m, t).unwrap() {
                    prop_assert!(s.net.enabled(&bigger, t).unwrap());
                }
            }
        }
    }

    #[test]
    fn minimal_explanations_match_brute_force(seed in any::<u64>()) {
        let s = small(seed);
        for m in s.rg.markings() {
            let runs = silent_runs(&s.net, m);
            for t in s.net.observable_transitions() {
                let enabling: BTreeSet<Vec<u32>> = runs
                    .iter()
                    .filter(|(_, mk)| s.net.enabled(mk, t).unwrap())
                    .map(|(y, _)| y.clone())
                    .collect();
                let expected = pareto_min(&enabling);
                let got = minimal_explanations(&s.net, m, t).unwrap();
                let got_vecs: Vec<Vec<u32>> = got.evectors.iter().map(|y| y.counts().to_vec()).collect();
                prop_assert_eq!(&got_vecs, &expected);
                for (y, w) in got.evectors.iter().zip(&got.witnesses) {
                    prop_assert!(w.iter().all(|&u| !s.net.is_observable(u)));
                    let reached = s.net.fire_sequence(m, w).unwrap();
                    prop_assert!(s.net.enabled(&reached, t).unwrap());
                    let counts: Vec<u32> = s.net.unobservable_transitions().map(|u| w.iter().filter(|&&x| x == u).count() as u32).collect();
                    prop_assert_eq!(&counts, y.counts());
                }
            }
        }
    }

    #[test]
    fn unobservable_reach_is_the_state_equation_solution_set(seed in any::<u64>()) {
        let s = small(seed);
        let sub = s.net.unobservable_subnet();
        prop_assume!(sub.len() <= 4);
        for m in s.rg.markings() {
            let ur = unobservable_reach(&s.net, m).unwrap();
            let mut solutions = BTreeSet::new();
            for y in boxed(sub.len(), 6) {
                let y = ParikhVector::new(y);
                if let Some(reached) = sub.apply(m, &y) {
                    // Acyclic subnets: every non-negative solution is realizable.
                    let seq = realize(&sub, m, &y);
                    prop_assert!(seq.is_some(), "solution {} at {} not realizable", y, m);
                    prop_assert_eq!(s.net.fire_sequence(m, &seq.unwrap()).unwrap(), reached.clone());
                    solutions.insert(reached);
                }
            }
            prop_assert_eq!(ur, solutions);
        }
    }

    #[test]
    fn feasibility_matches_enumeration(seed in any::<u64>(), w in prop::collection::vec(-1i64..=1, 6), k in -2i64..=1) {
        let s = small(seed);
        let sub = s.net.unobservable_subnet();
        let gmec = Gmec::new(vec![w[..s.net.place_count()].to_vec()], vec![k]).unwrap();
        for m in s.rg.markings() {
            let runs = silent_runs(&s.net, m);
            let y_sys = ConstraintSystem::crucial_reach(&sub, m, &gmec).unwrap();
            let z_sys = ConstraintSystem::nontrivial_reach(&sub, m).unwrap();
            for (y, _) in &runs {
                let bounded = y.iter().zip(y_sys.upper_bounds()).all(|(&a, &b)| u64::from(a) <= b);
                prop_assert!(bounded, "{:?} exceeds upper bounds {:?}", y, y_sys.upper_bounds());
            }
            let expect_y = runs.iter().any(|(_, mk)| gmec.satisfied_by(mk));
            let expect_z = runs.iter().any(|(y, _)| y.iter().any(|&c| c > 0));
            let got_y = integer_feasible(&y_sys);
            let got_z = integer_feasible(&z_sys);
            prop_assert_eq!(got_y.is_some(), expect_y);
            prop_assert_eq!(got_z.is_some(), expect_z);
            if let Some(y) = got_y {
                prop_assert!(y_sys.accepts(&y));
                prop_assert!(gmec.satisfied_by(&sub.apply(m, &y).unwrap()));
            }
            if let Some(y) = got_z {
                prop_assert!(!y.is_zero() && z_sys.accepts(&y));
            }
        }
    }

    #[test]
    fn verdicts_ignore_transition_order(seed in any::<u64>(), rot in 1usize..8) {
        let s = small(seed);
        let n = s.net.transition_count();
        let order: Vec<usize> = (0..n).map(|i| (i + rot) % n).collect();
        let pick = |mat: Vec<Vec<u32>>| -> Vec<Vec<u32>> {
            mat.into_iter().map(|row| order.iter().map(|&t| row[t]).collect()).collect()
        };
        let permuted = LabeledPetriNet::from_matrices(
            s.net.places().to_vec(),
            order.iter().map(|&t| s.net.transitions()[t].clone()).collect(),
            &pick(s.net.pre_matrix()),
            &pick(s.net.post_matrix()),
            s.net.initial().clone(),
            order.iter().map(|&t| s.net.label_symbol(t).map(str::to_string)).collect(),
        ).unwrap();
        let a = verify_all(&s.net, &s.crucial, &Options::default()).unwrap();
        let b = verify_all(&permuted, &s.crucial, &Options::default()).unwrap();
        prop_assert_eq!(a.verdict.holds(), b.verdict.holds());
        let nodes = |g: &cdetect::BasisGraph| g.markings().cloned().collect::<BTreeSet<_>>();
        prop_assert_eq!(nodes(&a.brg), nodes(&b.brg));
    }

    #[test]
    fn documents_round_trip(seed in any::<u64>()) {
        let s = small(seed);
        prop_assert_eq!(parse_net(&net_to_toml(&s.net)).unwrap(), s.net);
    }

    #[test]
    fn empty_crucial_set_is_detectable(seed in any::<u64>()) {
        let s = small(seed);
        let a = verify_all(&s.net, &CrucialSet::empty(), &Options::default()).unwrap();
        prop_assert_eq!(a.verdict.holds(), [true; 4]);
    }

    #[test]
    fn basis_markings_are_reachable(seed in any::<u64>()) {
        let s = small(seed);
        let brg = build_brg(&s.net, &s.crucial, BrgOptions::default()).unwrap();
        for mk in brg.markings() {
            prop_assert!(s.rg.index_of(mk).is_some());
        }
        // Every reachable marking is silently reachable from a basis marking.
        let mut covered = BTreeSet::new();
        for mk in brg.markings() {
            covered.extend(unobservable_reach(&s.net, mk).unwrap());
        }
        prop_assert_eq!(covered, s.rg.markings().iter().cloned().collect::<BTreeSet<_>>());
    }
}
