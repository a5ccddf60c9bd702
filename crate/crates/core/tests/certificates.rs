mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;

use sadic::certify::{certify, infer, Horizons, Premise, Property, RuleId, Status, RULES};

const PREMISES: [Property; 11] = [
    Property::Primitive,
    Property::Bounded,
    Property::FiniteAlphabetRank,
    Property::Recurrent,
    Property::Encoding,
    Property::Pure,
    Property::Circular,
    Property::Aperiodic,
    Property::RecognizableDirect,
    Property::EventuallyRecognizableDirect,
    Property::LeftProperContraction,
];

fn arb_status() -> impl Strategy<Value = Status> {
    prop_oneof![
        Just(Status::Verified),
        (1usize..40).prop_map(Status::VerifiedUpTo),
        Just(Status::Failed),
        Just(Status::Unknown),
    ]
}

fn premises(statuses: &[Status]) -> Vec<Premise> {
    PREMISES
        .iter()
        .zip(statuses)
        .map(|(&property, &status)| Premise {
            property,
            status,
            witness: String::new(),
        })
        .collect()
}

/// Rank on the chain unknown → verified_up_to(h) → verified.
fn rank(s: Status) -> (u8, usize) {
    match s {
        Status::Unknown | Status::Failed => (0, 0),
        Status::VerifiedUpTo(h) => (1, h),
        Status::Verified => (2, 0),
    }
}

fn raise(s: Status, bump: u8) -> Status {
    match (s, bump) {
        (Status::Unknown, 1) => Status::VerifiedUpTo(5),
        (Status::Unknown, 2) | (Status::VerifiedUpTo(_), 2) => Status::Verified,
        (Status::VerifiedUpTo(h), 1) => Status::VerifiedUpTo(h + 10),
        (other, _) => other,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn inferences_rest_on_established_inputs(statuses in proptest::collection::vec(arb_status(), PREMISES.len())) {
        let premises = premises(&statuses);
        let (inferences, verdicts) = infer(&premises);
        let mut known: BTreeMap<Property, Status> = premises.iter().map(|p| (p.property, p.status)).collect();
        for inference in &inferences {
            let inputs: Vec<Status> = inference
                .inputs
                .iter()
                .map(|p| *known.get(p).unwrap_or(&Status::Unknown))
                .collect();
            prop_assert!(inputs.iter().all(|s| s.is_established()), "{:?}", inference);
            if inputs.iter().any(|s| matches!(s, Status::VerifiedUpTo(_))) {
                prop_assert_ne!(inference.status, Status::Verified);
            }
            let current = known.entry(inference.conclusion).or_insert(Status::Unknown);
            if rank(inference.status) > rank(*current) {
                *current = inference.status;
            }
        }
        for verdict in [&verdicts.recognizable, &verdicts.eventually_recognizable, &verdicts.s_saturating, &verdicts.fully_recognizable] {
            prop_assert_eq!(verdict.status.is_established(), !verdict.rules.is_empty());
        }
        prop_assert_ne!(verdicts.s_saturating.status, Status::Failed);
    }

    #[test]
    fn stronger_premises_never_retract(
        statuses in proptest::collection::vec(arb_status(), PREMISES.len()),
        bumps in proptest::collection::vec(0u8..3, PREMISES.len()),
    ) {
        let before = infer(&premises(&statuses)).1;
        let raised: Vec<Status> = statuses.iter().zip(&bumps).map(|(&s, &b)| raise(s, b)).collect();
        let after = infer(&premises(&raised)).1;
        for (x, y) in [
            (before.recognizable, after.recognizable),
            (before.eventually_recognizable, after.eventually_recognizable),
            (before.s_saturating, after.s_saturating),
            (before.fully_recognizable, after.fully_recognizable),
        ] {
            prop_assert!(rank(y.status) >= rank(x.status), "{:?} then {:?}", x, y);
            if x.status == Status::Failed {
                prop_assert_eq!(y.status, Status::Failed);
            }
        }
    }
}

#[test]
fn corpus_certificates_replay() {
    for (name, seq) in common::sequences() {
        let cert = certify(&seq, &Horizons::default()).unwrap();
        assert!(cert.replay(), "{name}");
        if cert.premise(Property::RecognizableDirect).unwrap().status == Status::Verified {
            assert!(
                cert.inferences.iter().any(|i| i.rule == RuleId::R4 && i.conclusion == Property::SSaturating),
                "{name}"
            );
        }
    }
}

#[test]
fn larger_horizons_only_sharpen() {
    let small = Horizons {
        classify: 4,
        periodicity_cap: 6,
        ell_cap: 2,
    };
    for (name, seq) in common::sequences() {
        let a = certify(&seq, &small).unwrap();
        let b = certify(&seq, &Horizons::default()).unwrap();
        for (p, q) in a.premises.iter().zip(&b.premises) {
            assert_eq!(p.property, q.property);
            assert!(rank(q.status) >= rank(p.status), "{name}: {:?} then {:?}", p, q);
            if matches!(p.status, Status::Verified | Status::Failed) {
                assert_eq!(p.status, q.status, "{name}: {:?}", p.property);
            }
        }
    }
}

#[test]
fn no_rule_concludes_against_saturation() {
    for rule in RULES {
        assert!(rule.inputs.iter().all(|p| *p != rule.conclusion));
    }
    let saturating: Vec<&RuleId> = RULES
        .iter()
        .filter(|r| r.conclusion == Property::SSaturating)
        .map(|r| &r.id)
        .collect();
    assert_eq!(saturating, vec![&RuleId::R4, &RuleId::R5]);
}
