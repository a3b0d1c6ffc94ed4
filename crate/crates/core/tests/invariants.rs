use std::collections::BTreeSet;

use htforget::forgetting::{forget, forget_models, synthesize};
use htforget::properties::{random_program, GeneratorConfig};
use htforget::relativized::{v_ht_models, VhtAlgorithm};
use htforget::semantics::ht_models;
use htforget::{
    parse_program, render_program, ForgettingInstance, HtInterpretation, HtModelSet, Interpretation, OperatorKind,
    Program, ProgramClass, Signature,
};
use proptest::prelude::*;

fn program(seed: u64, atoms: usize, class: ProgramClass) -> Program {
    random_program(&GeneratorConfig {
        seed,
        atoms,
        class,
        ..Default::default()
    })
}

fn class() -> impl Strategy<Value = ProgramClass> {
    prop_oneof![
        Just(ProgramClass::Horn),
        Just(ProgramClass::Normal),
        Just(ProgramClass::Disjunctive),
        Just(ProgramClass::Extended),
    ]
}

/// A subset of the program's atoms picked by the low bits of `pick`.
fn forget_set(p: &Program, pick: u32) -> BTreeSet<String> {
    p.signature()
        .atoms()
        .iter()
        .enumerate()
        .filter(|(i, _)| pick >> i & 1 == 1)
        .map(|(_, a)| a.clone())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn parse_render_round_trip(seed in any::<u64>(), atoms in 1usize..=6, class in class()) {
        let p = program(seed, atoms, class);
        let text = render_program(&p);
        let back = parse_program(&text).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(render_program(&back), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ht_models_are_total_closed(seed in any::<u64>(), atoms in 1usize..=5) {
        let p = program(seed, atoms, ProgramClass::Extended);
        prop_assert!(ht_models(&p, &p.signature()).unwrap().is_total_closed());
    }

    #[test]
    fn adding_rules_removes_models(seed in any::<u64>(), other in any::<u64>()) {
        let p = program(seed, 4, ProgramClass::Extended);
        let q = program(other, 4, ProgramClass::Extended);
        let sig = p.signature().union(&q.signature());
        let bigger = ht_models(&p.union(&q), &sig).unwrap();
        prop_assert!(bigger.is_subset(&ht_models(&p, &sig).unwrap()));
    }

    #[test]
    fn vht_routes_agree(seed in any::<u64>(), pick in any::<u32>()) {
        let p = program(seed, 4, ProgramClass::Extended);
        let sig = p.signature();
        let v = sig.mask(&forget_set(&p, pick)).unwrap();
        let direct = v_ht_models(&p, v, &sig, VhtAlgorithm::Direct).unwrap();
        let via = v_ht_models(&p, v, &sig, VhtAlgorithm::ViaHt).unwrap();
        prop_assert_eq!(direct, via);
    }

    #[test]
    fn synthesis_reproduces_models(pairs in proptest::collection::vec((0u32..8, 0u32..8), 0..20)) {
        let sig = Signature::new(["a", "b", "c"]).unwrap();
        let mut set = BTreeSet::new();
        for (x, y) in pairs {
            let (x, y) = (Interpretation(x & y), Interpretation(y));
            set.insert(HtInterpretation::new(x, y).unwrap());
            set.insert(HtInterpretation::new(y, y).unwrap());
        }
        let target = HtModelSet::new(sig.clone(), set).unwrap();
        let synthesized = synthesize(&target, &sig).unwrap();
        prop_assert_eq!(ht_models(&synthesized, &sig).unwrap(), target);
    }

    #[test]
    fn results_avoid_forgotten_atoms(seed in any::<u64>(), pick in 1u32..16) {
        let p = program(seed, 4, ProgramClass::Extended);
        let v = forget_set(&p, pick);
        let inst = ForgettingInstance::new(p, &v, None).unwrap();
        for kind in OperatorKind::MODEL_BASED {
            let result = forget(&inst, kind).unwrap();
            prop_assert!(result.rules().iter().all(|r| r.atoms().all(|a| !v.contains(a))));
            prop_assert_eq!(
                ht_models(&result, &inst.remaining()).unwrap(),
                forget_models(&inst, kind).unwrap()
            );
        }
    }

    #[test]
    fn sp_below_m_below_r(seed in any::<u64>(), pick in 1u32..16) {
        let p = program(seed, 4, ProgramClass::Extended);
        let inst = ForgettingInstance::new(p.clone(), &forget_set(&p, pick), None).unwrap();
        let sp = forget_models(&inst, OperatorKind::Sp).unwrap();
        let m = forget_models(&inst, OperatorKind::M).unwrap();
        let r = forget_models(&inst, OperatorKind::R).unwrap();
        prop_assert!(sp.is_subset(&m) && m.is_subset(&r));
    }
}
