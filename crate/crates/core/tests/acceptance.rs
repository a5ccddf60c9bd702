//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the summary is always printed.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;

use sadic::certify::{certify, rank_bounds, Horizons, RuleId, Status};
use sadic::codes::{analyze_code, in_code_plus, is_pure, purity_oracle, violates_circularity};
use sadic::directive::{classify_sequence, factor_language};
use sadic::matrices::{boundary_matrix, family_substitution, frequency_matrix, i2, invertibility_report, Family, IntMatrix};
use sadic::recognizability::{is_recognizable_seq, min_recognizability_constant, replay_witness, Decision, Mode, RecognizabilityContext};
use sadic::semigroup::{green_classification, rees_build, rees_induced_endo, syntactic_semigroup};
use sadic::words::factors;
use sadic::{Alphabet, Substitution, Word};

fn criterion_1() {
    let expected: [[i64; 12]; 12] = [
        [1, 1, 1, 0, 1, 0, 0, 0, 1, 0, 0, 0],
        [1, 2, 1, 0, 0, 0, 0, 1, 1, 1, 0, 0],
        [1, 1, 2, 0, 1, 0, 0, 0, 0, 1, 0, 1],
        [0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
        [0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0],
    ];
    let rows: Vec<Vec<i64>> = expected.iter().map(|r| r.to_vec()).collect();
    let bundle = i2(&family_substitution(Family::Sigma, 3).unwrap()).unwrap();
    assert_eq!(bundle.i2, IntMatrix::from_rows(&rows).unwrap());
    println!("{}", bundle.render());
}

fn criterion_2() {
    for n in 2..=6 {
        let sigma = family_substitution(Family::Sigma, n).unwrap();
        let report = invertibility_report(&sigma, &[2, 3, 5, 7, 11, 13]).unwrap();
        assert_eq!(report.det_f1, 1.into(), "det F1(sigma_{n})");
        assert!(report.i2_invertible_over_z, "sigma_{n} over Z");
        assert!(report.per_prime.iter().all(|p| p.i2_invertible), "sigma_{n} mod p");
    }
}

fn random_on(alphabet: &Arc<Alphabet>, rng: &mut impl Rng) -> Substitution {
    let n = alphabet.size();
    let images = (0..n)
        .map(|_| (0..rng.gen_range(1..=5)).map(|_| rng.gen_range(0..n)).collect())
        .collect();
    Substitution::from_symbols(alphabet, alphabet, images).unwrap()
}

fn criterion_3() {
    let mut rng = common::rng(2024);
    for _ in 0..100 {
        let alphabet = Alphabet::indexed(rng.gen_range(1..=4)).unwrap();
        let phi = random_on(&alphabet, &mut rng);
        let psi = random_on(&alphabet, &mut rng);
        let composite = psi.compose(&phi).unwrap();
        assert_eq!(i2(&composite).unwrap().i2, &i2(&phi).unwrap().i2 * &i2(&psi).unwrap().i2);
        let f1 = frequency_matrix(&phi, 1).unwrap();
        let f2 = |s: &Substitution| frequency_matrix(s, 2).unwrap();
        let rhs = &(&f1 * &f2(&psi)) + &(&f2(&phi) * &boundary_matrix(&psi).unwrap());
        assert_eq!(f2(&composite), rhs);
    }
}

fn criterion_4() {
    for (n, p, size, order) in [(2, 2, 32, 8), (2, 3, 108, 27), (3, 2, 1152, 128)] {
        let model = rees_build(n, p, 100_000).unwrap();
        assert_eq!(model.size(), size, "|T| for n={n}, p={p}");
        assert!(model.size_verified());
        assert_eq!(model.subgroup_order, order);
        assert!(model.subgroup_orders_verified(), "H-classes for n={n}, p={p}");
    }
}

fn criterion_5() {
    let mut corpus: Vec<Substitution> = vec![
        family_substitution(Family::Sigma, 2).unwrap(),
        family_substitution(Family::Sigma, 3).unwrap(),
        family_substitution(Family::SigmaPrime, 2).unwrap(),
        common::tau(),
        common::fibonacci(),
    ];
    let mut rng = common::rng(5);
    for i in 0..50 {
        corpus.push(common::random_endo(&mut rng, 2 + i % 2, 4));
    }
    let models: Vec<_> = [(2, 2), (2, 3), (3, 2), (3, 3)]
        .into_iter()
        .map(|(n, p)| rees_build(n, p, 100_000).unwrap())
        .collect();
    for phi in &corpus {
        for model in models.iter().filter(|m| m.n == phi.domain().size()) {
            let report = rees_induced_endo(phi, model).unwrap();
            assert_eq!(report.is_automorphism, report.matrix_invertible_mod_p, "{phi} with p={}", model.p);
        }
    }
}

fn criterion_6() {
    let abc = common::abc();
    let ab = common::ab();
    let words = |alph: &Arc<Alphabet>, ws: &[&str]| -> Vec<Word> { ws.iter().map(|w| Word::parse(alph, w).unwrap()).collect() };

    let bifix = analyze_code(&words(&abc, &["ac", "bcb", "ba"])).unwrap();
    assert!(bifix.is_code && bifix.is_bifix);
    assert!(bifix.purity.unwrap().evidence.aperiodic);

    let tm = words(&ab, &["ab", "ba"]);
    let report = analyze_code(&tm).unwrap();
    assert!(report.purity.unwrap().is_pure);
    let circ = report.circularity.unwrap();
    assert!(!circ.is_circular);
    let witness = circ.witness.unwrap();
    assert!(violates_circularity(&tm, &witness.u, &witness.v).unwrap());
    let (u, v) = (Word::parse(&ab, "a").unwrap(), Word::parse(&ab, "bab").unwrap());
    assert!(violates_circularity(&tm, &u, &v).unwrap());

    for code in common::codes() {
        if !analyze_code(&code).unwrap().is_code {
            continue;
        }
        let oracle = purity_oracle(&code, 6, 4).unwrap();
        assert_eq!(is_pure(&code).unwrap().is_pure, oracle.is_none(), "{code:?}");
        if let Some(root) = oracle {
            assert!(!in_code_plus(&code, &root.u).unwrap() && in_code_plus(&code, &root.u.pow(root.n)).unwrap());
        }
    }
}

fn criterion_7() {
    let sigma = common::bifix_sigma();
    let a = common::abc();
    let name = |pairs: &[(usize, usize)]| -> Vec<String> {
        pairs.iter().map(|&(f, l)| format!("{}{}", a.name(f), a.name(l))).collect()
    };
    let omega = sigma.omega_letters().unwrap();
    assert_eq!(name(&omega), ["aa", "bb", "bc"]);
    let ends = |k: usize| -> Vec<(usize, usize)> {
        let power = sigma.power(k).unwrap();
        (0..3).map(|l| (power.image(l).first().unwrap(), power.image(l).last().unwrap())).collect()
    };
    // The first-letter map is idempotent and the last-letter map has period 2.
    assert_ne!(ends(1), omega);
    for k in [2, 4, 6] {
        assert_eq!(ends(k), omega, "sigma^{k}");
    }
}

fn criterion_8() {
    let sigma = common::bifix_sigma();
    let a = common::abc();
    assert_eq!(sigma.power(2).unwrap().image(0).to_string(), "acba");
    let seq = common::constant(sigma);
    let lang = factor_language(&seq, 0, 2).unwrap();
    assert!(lang.exact_up_to >= 2);
    assert!(!lang.contains(&Word::parse(&a, "aa").unwrap()));
    let exact: BTreeSet<Word> = lang.by_length.values().flatten().cloned().collect();
    assert_eq!(exact, common::language_oracle(&seq, 0, 2));
}

fn criterion_9() {
    let seq = common::constant(common::tau());
    assert!(classify_sequence(&seq, 16).unwrap().stable);
    let lang = factor_language(&seq, 0, 2).unwrap();
    let ab = common::ab();
    for pair in ab.words_of_length(2) {
        let image = common::tau().apply(&Word::new(&ab, pair).unwrap()).unwrap();
        assert!(factors(&image, 2).unwrap().iter().all(|f| lang.contains(f)));
    }
}

fn criterion_10() {
    for (name, seq) in [
        ("fibonacci", common::constant(common::fibonacci())),
        ("thue_morse", common::constant(common::tau())),
    ] {
        let result = is_recognizable_seq(&seq, 10, Mode::StrongSync).unwrap();
        assert_eq!(result.recognizable, Decision::Holds, "{name}");
        assert!(result.levels.iter().all(|l| l.constant.is_some_and(|c| c <= 10)));
    }
    let seq = common::constant(common::collapsing());
    let ctx = RecognizabilityContext::new(&seq, 5).unwrap();
    for ell in 1..=5 {
        let verdict = ctx.test(0, ell, Mode::StrongSync).unwrap();
        let witness = verdict.witness().unwrap_or_else(|| panic!("no failure at ell={ell}"));
        assert!(replay_witness(&seq, 0, Mode::StrongSync, witness).unwrap(), "replay at ell={ell}");
    }
    assert!(min_recognizability_constant(&seq, 0, 5, Mode::StrongSync).unwrap().fails_for_all);
}

fn criterion_11() {
    let cert = certify(&common::constant(common::tau()), &Horizons::default()).unwrap();
    assert_eq!(cert.verdicts.recognizable.status, Status::Verified);
    assert_eq!(cert.verdicts.recognizable.rules.first(), Some(&RuleId::R7));
    assert_eq!(cert.verdicts.s_saturating.status, Status::Verified);
    for rule in [RuleId::R4, RuleId::R5] {
        assert!(cert.verdicts.s_saturating.rules.contains(&rule));
    }
    assert_eq!(cert.rank_bounds.as_ref().unwrap().general, 3);
    assert!(cert.replay());

    let proper = certify(&common::constant(family_substitution(Family::SigmaPrime, 2).unwrap()), &Horizons::default()).unwrap();
    assert_eq!(proper.rank_bounds.unwrap().proper_case, Some(2));

    let sigma3 = certify(&common::constant(family_substitution(Family::Sigma, 3).unwrap()), &Horizons::default()).unwrap();
    let rees = rees_build(3, 2, 100_000).unwrap();
    let bounds = rank_bounds(&sigma3, 3, Some(&rees)).unwrap();
    assert_eq!(bounds.general, 7);
    let witness = bounds.rees_witness.unwrap();
    assert_eq!(witness.subgroup_order, "128");
    assert!(witness.verified);
}

fn criterion_12() {
    for (name, seq) in common::sequences() {
        for level in 0..seq.canonical_levels() {
            let lang = factor_language(&seq, level, 8).unwrap();
            let exact: BTreeSet<Word> = lang.by_length.values().flatten().cloned().collect();
            assert_eq!(exact, common::language_oracle(&seq, level, 8), "{name} level {level}");
        }
    }
    let mut semigroups = vec![rees_build(2, 2, 1_000).unwrap().semigroup];
    for code in common::codes() {
        let s = syntactic_semigroup(&code, 10_000).unwrap().semigroup;
        if s.size() <= 60 {
            semigroups.push(s);
        }
    }
    for s in &semigroups {
        let green = green_classification(s);
        let oracle = common::IdealOracle::new(s);
        for x in 0..s.size() {
            for y in 0..s.size() {
                assert_eq!(green.r[x] == green.r[y], oracle.r(x, y));
                assert_eq!(green.l[x] == green.l[y], oracle.l(x, y));
                assert_eq!(green.j[x] == green.j[y], oracle.j(x, y));
            }
        }
    }
}

type Check = fn();

const CRITERIA: [(&str, Check, u64); 12] = [
    ("printed I2(sigma_3)", criterion_1, 1),
    ("unimodularity of sigma_n", criterion_2, 1),
    ("anti-homomorphism of I2", criterion_3, 5),
    ("Rees cardinalities", criterion_4, 30),
    ("matrix vs omega-power invertibility", criterion_5, 60),
    ("codes: bifix, pure, circular", criterion_6, 10),
    ("omega first/last letters", criterion_7, 1),
    ("bifix example language", criterion_8, 1),
    ("Thue-Morse stability", criterion_9, 1),
    ("recognizability verdicts", criterion_10, 60),
    ("certificates and rank bounds", criterion_11, 60),
    ("oracle equivalence", criterion_12, 120),
];

fn main() -> ExitCode {
    let mut failures = 0;
    for (i, (title, check, budget)) in CRITERIA.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check));
        let elapsed = start.elapsed();
        let status = match outcome {
            Ok(()) if elapsed <= Duration::from_secs(*budget) => "PASS",
            Ok(()) => "FAIL (over time budget)",
            Err(_) => "FAIL",
        };
        if status != "PASS" {
            failures += 1;
        }
        println!("criterion {:>2} {status:<5} {title} ({:.2?}, budget {budget}s)", i + 1, elapsed);
    }
    println!("acceptance: {} of {} criteria passed", CRITERIA.len() - failures, CRITERIA.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
