mod common;

use sadic::codes::{is_circular, is_code};
use sadic::directive::CutPattern;
use sadic::recognizability::{is_recognizable_seq, replay_witness, Decision, Mode, RecognizabilityContext};

const CAP: usize = 6;

#[test]
fn passing_constants_stay_passing() {
    for (name, seq) in common::sequences() {
        let ctx = RecognizabilityContext::new(&seq, CAP).unwrap();
        for mode in [Mode::MosseCut, Mode::StrongSync] {
            for level in 0..seq.canonical_levels() {
                let outcomes: Vec<bool> = (1..=CAP).map(|ell| ctx.test(level, ell, mode).unwrap().holds()).collect();
                if let Some(first) = outcomes.iter().position(|&h| h) {
                    assert!(outcomes[first..].iter().all(|&h| h), "{name} level {level} {mode:?}: {outcomes:?}");
                }
            }
        }
    }
}

#[test]
fn failure_witnesses_replay() {
    let mut replayed = 0;
    for (name, seq) in common::sequences() {
        let ctx = RecognizabilityContext::new(&seq, CAP).unwrap();
        for mode in [Mode::MosseCut, Mode::StrongSync] {
            for level in 0..seq.canonical_levels() {
                for ell in 1..=CAP {
                    if let Some(w) = ctx.test(level, ell, mode).unwrap().witness() {
                        assert!(replay_witness(&seq, level, mode, w).unwrap(), "{name} level {level} ℓ={ell}");
                        replayed += 1;
                    }
                }
            }
        }
    }
    assert!(replayed > 0);
}

#[test]
fn composites_are_recognizable_with_their_factors() {
    for (name, seq) in common::sequences() {
        let direct = is_recognizable_seq(&seq, CAP, Mode::StrongSync).unwrap().recognizable;
        for step in [2, 3] {
            let contracted = seq.contract(&CutPattern::uniform(step).unwrap()).unwrap();
            let telescoped = is_recognizable_seq(&contracted, CAP, Mode::StrongSync).unwrap().recognizable;
            if direct != Decision::Inconclusive && telescoped != Decision::Inconclusive {
                assert_eq!(direct, telescoped, "{name} contracted by {step}");
            }
        }
    }
}

#[test]
fn circular_levels_are_recognizable() {
    let mut checked = 0;
    for (name, seq) in common::sequences() {
        let circular = (0..seq.canonical_levels()).all(|n| {
            let images = seq.term(n).images();
            seq.term(n).is_letter_injective()
                && is_code(&images).unwrap().is_code
                && is_circular(&images).unwrap().is_circular
        });
        if circular {
            checked += 1;
            let result = is_recognizable_seq(&seq, CAP, Mode::StrongSync).unwrap();
            assert_eq!(result.recognizable, Decision::Holds, "{name}");
        }
    }
    assert!(checked > 0);
}
