use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use sadic::certify::{certify, Certificate, Horizons, Status, Verdict};
use sadic::codes::{analyze_code, CodeReport};
use sadic::directive::{classify_sequence, factor_language, return_words, DirectiveSequence};
use sadic::matrices::{i2, invertibility_report};
use sadic::recognizability::{is_recognizable_seq, replay_witness, Decision, Mode};
use sadic::semigroup::{green_classification, rees_build, rees_induced_endo, syntactic_semigroup};
use sadic::{Alphabet, Word};

use crate::input::{load_any_sequence, load_substitution, Interner};
use crate::{CliError, Command, Outcome, Report, SCHEMA};

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("results serialize")
}

fn outcome(command: &'static str, horizons: &[(&'static str, usize)], result: Value, text: String) -> Outcome {
    Outcome {
        report: Report {
            schema: SCHEMA,
            command,
            horizons: horizons.iter().copied().collect::<BTreeMap<_, _>>(),
            result,
        },
        text,
    }
}

pub fn execute(command: &Command) -> Result<Outcome, CliError> {
    let mut interner = Interner::default();
    match command {
        Command::Analyze {
            input,
            classify_horizon,
            periodicity_cap,
            ell_cap,
        } => {
            let seq = load_any_sequence(input, &mut interner)?;
            let horizons = Horizons {
                classify: *classify_horizon,
                periodicity_cap: *periodicity_cap,
                ell_cap: *ell_cap,
            };
            let props = classify_sequence(&seq, horizons.classify)?;
            let cert = certify(&seq, &horizons)?;
            let text = render_certificate(&seq, &cert);
            Ok(outcome(
                "analyze",
                &[
                    ("classify_horizon", *classify_horizon),
                    ("periodicity_cap", *periodicity_cap),
                    ("ell_cap", *ell_cap),
                ],
                json!({ "properties": to_value(&props), "certificate": to_value(&cert) }),
                text,
            ))
        }
        Command::Language { input, length, level } => {
            let seq = load_any_sequence(input, &mut interner)?;
            if *level >= seq.canonical_levels() {
                return Err(CliError::Usage(format!(
                    "level {level} is not canonical; levels 0..{} repeat periodically",
                    seq.canonical_levels()
                )));
            }
            let lang = factor_language(&seq, *level, *length)?;
            let mut text = format!("level {level}, alphabet {}\n", lang.alphabet);
            for (k, words) in &lang.by_length {
                let list: Vec<String> = words.iter().map(ToString::to_string).collect();
                let _ = writeln!(text, "p({k}) = {:<4} {}", words.len(), list.join(" "));
            }
            Ok(outcome("language", &[("factor_length", *length)], to_value(&lang), text))
        }
        Command::Matrices { input, primes } => {
            let phi = load_substitution(input, &mut interner)?;
            let bundle = i2(&phi)?;
            let report = invertibility_report(&phi, primes)?;
            let mut text = format!("I2({phi}) =\n{}\n", bundle.render());
            let _ = writeln!(text, "det F1 = {}, det T2 = {}, det I2 = {}", report.det_f1, report.det_t2, report.det_i2);
            let _ = writeln!(text, "T2 permutation: {}, invertible over Z: {}", report.t2_is_permutation, report.i2_invertible_over_z);
            for p in &report.per_prime {
                let _ = writeln!(text, "mod {}: I2 invertible {}, F1 invertible {}", p.p, p.i2_invertible, p.f1_invertible);
            }
            Ok(outcome(
                "matrices",
                &[],
                json!({ "matrices": to_value(&bundle), "invertibility": to_value(&report) }),
                text,
            ))
        }
        Command::Code { words, alphabet, sub } => {
            let code: Vec<Word> = match sub {
                Some(path) => load_substitution(path, &mut interner)?.images(),
                None => parse_words(words, alphabet.as_deref())?,
            };
            let report = analyze_code(&code)?;
            let text = render_code(&report);
            Ok(outcome("code", &[], to_value(&report), text))
        }
        Command::Semigroup { input, cap, cayley } => {
            let phi = load_substitution(input, &mut interner)?;
            let syn = syntactic_semigroup(&phi.images(), *cap)?;
            let s = &syn.semigroup;
            let green = green_classification(s);
            let aperiodicity = s.aperiodicity();
            if let Some(path) = cayley {
                write(path, &s.cayley_table_tsv())?;
            }
            let elements: Vec<String> = (0..s.size()).map(|x| syn.representative(x).to_string()).collect();
            let mut text = format!(
                "syntactic semigroup of {{{}}}+: {} elements, {} automaton states\n",
                phi.images().iter().map(ToString::to_string).collect::<Vec<_>>().join(", "),
                s.size(),
                syn.automaton.states()
            );
            let _ = writeln!(text, "aperiodic: {}", aperiodicity.aperiodic);
            if let Some(c) = &aperiodicity.counterexample {
                let _ = writeln!(text, "  {} has index {} and period {}", c.element, c.index, c.period);
            }
            let _ = writeln!(
                text,
                "J-classes: {} ({} regular), H-classes: {}",
                green.j_classes.len(),
                green.j_classes.iter().filter(|j| j.regular).count(),
                sadic::semigroup::GreenClassification::class_count(&green.h)
            );
            Ok(outcome(
                "semigroup",
                &[("element_cap", *cap)],
                json!({
                    "size": s.size(),
                    "elements": elements,
                    "idempotents": s.idempotents(),
                    "aperiodicity": to_value(&aperiodicity),
                    "green": to_value(&green),
                }),
                text,
            ))
        }
        Command::Rees { n, p, cap, verify, endo } => {
            let model = rees_build(*n, *p, *cap)?;
            let mut text = format!(
                "T(n={n}, p={p}): |T| = {} (formula {}), maximal subgroup order {}\n",
                model.size(),
                model.expected_size,
                model.subgroup_order
            );
            let mut result = json!({
                "n": n,
                "p": p,
                "size": model.size(),
                "expected_size": model.expected_size.to_string(),
                "subgroup_order": model.subgroup_order.to_string(),
            });
            if *verify {
                let size_ok = model.size_verified();
                let groups_ok = model.subgroup_orders_verified();
                let _ = writeln!(text, "size verified: {size_ok}, H-class orders verified: {groups_ok}");
                result["size_verified"] = json!(size_ok);
                result["subgroup_orders_verified"] = json!(groups_ok);
                result["h_class_sizes"] = json!(model.h_class_sizes);
            }
            if let Some(path) = endo {
                let phi = load_substitution(path, &mut interner)?;
                if phi.domain().size() != *n || !phi.is_endomorphism() {
                    return Err(CliError::Usage(format!("--endo must be an endomorphism on {n} letters")));
                }
                let induced = rees_induced_endo(&phi, &model)?;
                let _ = writeln!(
                    text,
                    "induced map of {phi}: automorphism {}, I2 invertible mod {p} {}, agree {}",
                    induced.is_automorphism, induced.matrix_invertible_mod_p, induced.agrees
                );
                result["induced"] = to_value(&induced);
            }
            Ok(outcome("rees", &[("element_cap", *cap)], result, text))
        }
        Command::Recognize { input, ell_cap, mode } => {
            let seq = load_any_sequence(input, &mut interner)?;
            let mode: Mode = (*mode).into();
            let rec = is_recognizable_seq(&seq, *ell_cap, mode)?;
            let mut replays = Vec::new();
            let mut text = format!("mode {mode:?}, constants up to {ell_cap}\n");
            for search in &rec.levels {
                let witness = search.last_failure.as_ref().and_then(|v| v.witness());
                match (search.constant, witness) {
                    (Some(ell), _) => {
                        let _ = writeln!(text, "level {}: holds with constant {ell}", search.level);
                    }
                    (None, Some(w)) => {
                        let replayed = replay_witness(&seq, search.level, mode, w)?;
                        replays.push(json!({ "level": search.level, "replayed": replayed }));
                        let _ = writeln!(
                            text,
                            "level {}: fails{} on {} with preimages {} (offset {}) and {} (offset {}), replay {}",
                            search.level,
                            if search.fails_for_all { " for every constant" } else { "" },
                            w.word,
                            w.first.preimage,
                            w.first.offset,
                            w.second.preimage,
                            w.second.offset,
                            if replayed { "ok" } else { "FAILED" }
                        );
                    }
                    (None, None) => {
                        let _ = writeln!(text, "level {}: inconclusive", search.level);
                    }
                }
            }
            let _ = writeln!(
                text,
                "recognizable: {}, eventually recognizable: {}",
                decision(rec.recognizable),
                decision(rec.eventually_recognizable)
            );
            Ok(outcome(
                "recognize",
                &[("ell_cap", *ell_cap)],
                json!({ "recognizability": to_value(&rec), "witness_replays": replays }),
                text,
            ))
        }
        Command::Returns { input, word, horizon } => {
            let seq = load_any_sequence(input, &mut interner)?;
            let u = Word::parse(seq.level(0), word)?;
            let returns: BTreeSet<Word> = return_words(&seq, &u, *horizon)?;
            let list: Vec<String> = returns.iter().map(ToString::to_string).collect();
            let text = format!("{} return words to {u}: {}\n", list.len(), list.join(" "));
            Ok(outcome(
                "returns",
                &[("horizon", *horizon)],
                json!({ "word": u.to_string(), "return_words": list }),
                text,
            ))
        }
    }
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse_words(words: &[String], alphabet: Option<&str>) -> Result<Vec<Word>, CliError> {
    if words.is_empty() {
        return Err(CliError::Usage("give code words or --sub".into()));
    }
    let alphabet = match alphabet {
        Some(spec) => Alphabet::new(spec.split_whitespace())?,
        None => {
            let letters: BTreeSet<char> = words.iter().flat_map(|w| w.chars()).collect();
            Alphabet::new(letters.into_iter().map(String::from))?
        }
    };
    Ok(words.iter().map(|w| Word::parse(&alphabet, w)).collect::<sadic::Result<_>>()?)
}

fn decision(d: Decision) -> &'static str {
    match d {
        Decision::Holds => "yes",
        Decision::Fails => "no",
        Decision::Inconclusive => "inconclusive",
    }
}

fn status(s: Status) -> String {
    match s {
        Status::Verified => "verified".into(),
        Status::VerifiedUpTo(h) => format!("verified up to {h}"),
        Status::Failed => "failed".into(),
        Status::Unknown => "unknown".into(),
    }
}

fn render_code(report: &CodeReport) -> String {
    let words: Vec<String> = report.words.iter().map(ToString::to_string).collect();
    let mut text = format!("{{{}}}\n", words.join(", "));
    if let Some(amb) = &report.ambiguity {
        let join = |ws: &[Word]| ws.iter().map(ToString::to_string).collect::<Vec<_>>().join("·");
        let _ = writeln!(text, "not a code: {} = {} = {}", amb.word, join(&amb.left), join(&amb.right));
        return text;
    }
    let _ = writeln!(text, "code: prefix {}, suffix {}, bifix {}", report.is_prefix, report.is_suffix, report.is_bifix);
    if let Some(c) = &report.circularity {
        match &c.witness {
            Some(w) => {
                let _ = writeln!(text, "not circular: u = {}, v = {} (uv and vu factor, u and v do not)", w.u, w.v);
            }
            None => {
                let _ = writeln!(text, "circular");
            }
        }
    }
    if let Some(p) = &report.purity {
        let _ = writeln!(text, "pure: {} (syntactic semigroup of size {})", p.is_pure, p.evidence.size);
    }
    text
}

fn render_verdict(name: &str, v: &Verdict) -> String {
    let mut line = format!("  {name:<24} {}", status(v.status));
    if !v.rules.is_empty() {
        let rules: Vec<String> = v.rules.iter().map(|r| format!("{r:?}")).collect();
        let _ = write!(line, " via {}", rules.join(", "));
    }
    if !v.conflicts.is_empty() {
        let _ = write!(line, " (conflicting rules {:?})", v.conflicts);
    }
    line
}

fn render_certificate(seq: &DirectiveSequence, cert: &Certificate) -> String {
    let mut text = String::new();
    let _ = writeln!(text, "sequence with {} prefix and {} cycle terms", seq.prefix_len(), seq.cycle_len());
    let _ = writeln!(text, "subject sha256 {}", cert.subject.digest);
    let _ = writeln!(text, "premises:");
    for p in &cert.premises {
        let _ = writeln!(text, "  {:<32} {:<20} {}", format!("{:?}", p.property), status(p.status), p.witness);
    }
    let _ = writeln!(text, "inferences:");
    for i in &cert.inferences {
        let _ = writeln!(
            text,
            "  {:?}{} {:?} => {:?} [{}]: {}",
            i.rule,
            if i.corroborating { " (corroborating)" } else { "" },
            i.inputs,
            i.conclusion,
            status(i.status),
            i.citation
        );
    }
    let _ = writeln!(text, "verdicts:");
    let v = &cert.verdicts;
    for (name, verdict) in [
        ("recognizable", &v.recognizable),
        ("eventually recognizable", &v.eventually_recognizable),
        ("S-saturating", &v.s_saturating),
        ("fully recognizable", &v.fully_recognizable),
    ] {
        let _ = writeln!(text, "{}", render_verdict(name, verdict));
    }
    match &cert.rank_bounds {
        Some(b) => {
            let _ = write!(
                text,
                "rank of the Schützenberger group: at most {} (alphabet rank {})",
                b.general, b.alphabet_rank
            );
            if let Some(n) = b.proper_case {
                let _ = write!(text, ", at most {n} with the left proper contraction");
            }
            let _ = writeln!(text, "; saturation {}", status(b.qualifier));
        }
        None => {
            let _ = writeln!(text, "rank bounds: saturation not established");
        }
    }
    text
}
