//! Certificates: machine-checked premises about a directive sequence, and
//! the conclusions that known theorems draw from them.
//!
//! Saturation is never computed; it only ever appears as the conclusion of
//! a cited theorem. Every status is one of *verified*, *verified up to a
//! horizon*, *failed* or *unknown*, and a conclusion is never stronger than
//! the weakest premise it rests on.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::codes;
use crate::directive::{classify_sequence, periodicity_probe, DirectiveSequence, Periodicity};
use crate::error::{Error, Result};
use crate::recognizability::{is_recognizable_seq, Decision, Mode};
use crate::semigroup::ReesModel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "status", content = "horizon", rename_all = "snake_case")]
pub enum Status {
    Verified,
    VerifiedUpTo(usize),
    Failed,
    Unknown,
}

impl Status {
    pub fn is_established(self) -> bool {
        matches!(self, Status::Verified | Status::VerifiedUpTo(_))
    }

    /// Rank among established statuses; `None` otherwise.
    fn strength(self) -> Option<(u8, usize)> {
        match self {
            Status::Verified => Some((1, 0)),
            Status::VerifiedUpTo(h) => Some((0, h)),
            _ => None,
        }
    }

    fn stronger_than(self, other: Status) -> bool {
        match (self.strength(), other.strength()) {
            (Some(a), Some(b)) => a > b,
            (Some(_), None) => true,
            _ => false,
        }
    }

    /// The weakest of established statuses.
    fn weakest(statuses: impl IntoIterator<Item = Status>) -> Status {
        statuses
            .into_iter()
            .min_by_key(|s| s.strength().expect("established"))
            .unwrap_or(Status::Verified)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    Primitive,
    Bounded,
    FiniteAlphabetRank,
    Recurrent,
    Encoding,
    Pure,
    Circular,
    Aperiodic,
    RecognizableDirect,
    EventuallyRecognizableDirect,
    LeftProperContraction,
    FullyRecognizable,
    Recognizable,
    EventuallyRecognizable,
    SSaturating,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum RuleId {
    R0,
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
}

pub struct Rule {
    pub id: RuleId,
    pub citation: &'static str,
    pub inputs: &'static [Property],
    pub conclusion: Property,
}

use Property::*;

/// The implications used by the engine.
pub const RULES: &[Rule] = &[
    Rule {
        id: RuleId::R7,
        citation: "direct check: every level passes the window test on the exact factor languages, which for a minimal shift is recognizability in the shift of the next level",
        inputs: &[RecognizableDirect],
        conclusion: Recognizable,
    },
    Rule {
        id: RuleId::R7,
        citation: "direct check on the cycle levels: some tail is recognizable",
        inputs: &[EventuallyRecognizableDirect],
        conclusion: EventuallyRecognizable,
    },
    Rule {
        id: RuleId::R1,
        citation: "a homomorphism is fully recognizable exactly when it is circular",
        inputs: &[Circular],
        conclusion: FullyRecognizable,
    },
    Rule {
        id: RuleId::R1,
        citation: "full recognizability of every level gives recognizability in every subshift, in particular in the shift of the next level",
        inputs: &[FullyRecognizable],
        conclusion: Recognizable,
    },
    Rule {
        id: RuleId::R0,
        citation: "a recognizable sequence is eventually recognizable (take the whole sequence as the tail)",
        inputs: &[Recognizable],
        conclusion: EventuallyRecognizable,
    },
    Rule {
        id: RuleId::R2,
        citation: "a primitive directive sequence of finite alphabet rank generating an aperiodic shift is eventually recognizable",
        inputs: &[Primitive, FiniteAlphabetRank, Aperiodic],
        conclusion: EventuallyRecognizable,
    },
    Rule {
        id: RuleId::R3,
        citation: "an eventually recognizable primitive directive sequence that is pure is recognizable",
        inputs: &[Pure, EventuallyRecognizable, Primitive],
        conclusion: Recognizable,
    },
    Rule {
        id: RuleId::R6,
        citation: "a bounded primitive directive sequence that is eventually recognizable, recurrent and encoding is recognizable",
        inputs: &[EventuallyRecognizable, Recurrent, Encoding, Bounded, Primitive],
        conclusion: Recognizable,
    },
    Rule {
        id: RuleId::R4,
        citation: "a recognizable primitive directive sequence is S-saturating",
        inputs: &[Recognizable, Primitive],
        conclusion: SSaturating,
    },
    Rule {
        id: RuleId::R5,
        citation: "a pure primitive directive sequence is S-saturating",
        inputs: &[Pure, Primitive],
        conclusion: SSaturating,
    },
    Rule {
        id: RuleId::R8,
        citation: "an eventually recognizable primitive directive sequence that is saturating and encoding is recognizable",
        inputs: &[EventuallyRecognizable, Primitive, SSaturating, Encoding],
        conclusion: Recognizable,
    },
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Premise {
    pub property: Property,
    pub status: Status,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Inference {
    pub rule: RuleId,
    pub citation: String,
    pub inputs: Vec<Property>,
    pub conclusion: Property,
    pub status: Status,
    /// The conclusion was already at least this strong when the rule fired.
    pub corroborating: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub status: Status,
    /// Rules whose firing established the status, strongest first.
    pub rules: Vec<RuleId>,
    /// Rules whose inputs were established although a direct check
    /// refuted the conclusion; non-empty only for inconsistent premises.
    pub conflicts: Vec<RuleId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdicts {
    pub recognizable: Verdict,
    pub eventually_recognizable: Verdict,
    pub s_saturating: Verdict,
    pub fully_recognizable: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReesWitness {
    pub p: u64,
    pub subgroup_order: String,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankBounds {
    pub alphabet_rank: usize,
    /// `n² − n + 1`.
    pub general: usize,
    /// `n`, when a left proper contraction was found.
    pub proper_case: Option<usize>,
    /// Status of the saturation conclusion the bounds rest on.
    pub qualifier: Status,
    pub rees_witness: Option<ReesWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Horizons {
    pub classify: usize,
    pub periodicity_cap: usize,
    pub ell_cap: usize,
}

impl Default for Horizons {
    fn default() -> Self {
        Horizons {
            classify: 16,
            periodicity_cap: 20,
            ell_cap: 10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Subject {
    pub digest: String,
    pub canonical: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub subject: Subject,
    pub horizons: Horizons,
    pub alphabet_rank: usize,
    pub premises: Vec<Premise>,
    pub inferences: Vec<Inference>,
    pub verdicts: Verdicts,
    pub rank_bounds: Option<RankBounds>,
}

impl Certificate {
    pub fn premise(&self, property: Property) -> Option<&Premise> {
        self.premises.iter().find(|p| p.property == property)
    }

    /// Re-run the inference on the stored premises; a sound certificate
    /// reproduces its own inferences and verdicts.
    pub fn replay(&self) -> bool {
        let (inferences, verdicts) = infer(&self.premises);
        inferences == self.inferences && verdicts == self.verdicts
    }
}

/// Canonical text of a sequence: alphabets and images of every term.
pub fn canonical_text(seq: &DirectiveSequence) -> String {
    let mut out = String::new();
    for (name, terms) in [("prefix", seq.prefix()), ("cycle", seq.cycle())] {
        let _ = writeln!(out, "{name} {}", terms.len());
        for t in terms {
            let _ = writeln!(out, "  domain {}", t.domain().letters().join(" "));
            let _ = writeln!(out, "  codomain {}", t.codomain().letters().join(" "));
            for (a, image) in t.domain().letters().iter().zip(t.images()) {
                let _ = writeln!(out, "  {a} -> {}", t.codomain().render(image.symbols()).replace(' ', ""));
            }
        }
    }
    out
}

pub fn subject(seq: &DirectiveSequence) -> Subject {
    let canonical = canonical_text(seq);
    let digest = Sha256::digest(canonical.as_bytes());
    let mut hex = String::with_capacity(64);
    for byte in digest.iter() {
        let _ = write!(hex, "{byte:02x}");
    }
    Subject { digest: hex, canonical }
}

fn premise(property: Property, status: Status, witness: impl Into<String>) -> Premise {
    Premise {
        property,
        status,
        witness: witness.into(),
    }
}

fn exact(holds: bool) -> Status {
    if holds {
        Status::Verified
    } else {
        Status::Failed
    }
}

/// Gather premises from the other modules, then run the inference.
pub fn certify(seq: &DirectiveSequence, horizons: &Horizons) -> Result<Certificate> {
    let props = classify_sequence(seq, horizons.classify)?;
    let primitive = seq.is_primitive();
    let mut premises = vec![
        premise(
            Primitive,
            exact(primitive),
            format!("positivity witnesses {:?}", seq.positivity_witnesses(seq.exact_primitivity_horizon())),
        ),
        premise(Bounded, Status::Verified, format!("cycle alphabet sizes {:?}", props.alphabet_sizes)),
        premise(
            FiniteAlphabetRank,
            Status::Verified,
            format!("alphabet rank {}", props.alphabet_rank),
        ),
        premise(
            Recurrent,
            exact(props.recurrent),
            match props.recurrence_defect {
                Some(i) => format!("term {i} differs from term {}", i + seq.cycle_len()),
                None => "purely periodic".to_string(),
            },
        ),
    ];

    // Notes per premise; an encoding defect also refutes purity and circularity.
    let (mut encoding_notes, mut pure_notes, mut circular_notes) = (Vec::new(), Vec::new(), Vec::new());
    for n in 0..seq.canonical_levels() {
        let t = seq.term(n);
        let defect = if !t.is_letter_injective() {
            Some(format!("level {n}: two letters share an image"))
        } else {
            None
        };
        let report = match defect {
            Some(d) => {
                encoding_notes.push(d);
                continue;
            }
            None => codes::analyze_code(&t.images())?,
        };
        if let Some(amb) = report.ambiguity {
            encoding_notes.push(format!("level {n}: not a code, {} has two factorizations", amb.word));
            continue;
        }
        let purity = report.purity.expect("computed for codes");
        if let Some(c) = purity.evidence.counterexample {
            pure_notes.push(format!("level {n}: {} generates a group of order {}", c.element, c.period));
        }
        if let Some(w) = report.circularity.expect("computed for codes").witness {
            circular_notes.push(format!("level {n}: u = {}, v = {}", w.u, w.v));
        }
    }
    let encoding = encoding_notes.is_empty();
    let pure_notes: Vec<String> = encoding_notes.iter().chain(&pure_notes).cloned().collect();
    let circular_notes: Vec<String> = encoding_notes.iter().chain(&circular_notes).cloned().collect();
    let summarize = |notes: &[String], ok: &str| if notes.is_empty() { ok.to_string() } else { notes.join("; ") };
    premises.push(premise(Encoding, exact(encoding), summarize(&encoding_notes, "the images form a code at every level")));
    premises.push(premise(
        Pure,
        exact(pure_notes.is_empty()),
        summarize(&pure_notes, "every image code has an aperiodic syntactic semigroup"),
    ));
    premises.push(premise(
        Circular,
        exact(circular_notes.is_empty()),
        summarize(&circular_notes, "every image code is circular"),
    ));

    if primitive {
        match periodicity_probe(seq, horizons.periodicity_cap)? {
            Periodicity::Periodic { period, length } => premises.push(premise(
                Aperiodic,
                Status::Failed,
                format!("complexity constant ({period}) from length {length}"),
            )),
            Periodicity::AperiodicVerifiedUpTo { cap, complexity } => premises.push(premise(
                Aperiodic,
                Status::VerifiedUpTo(cap),
                format!("complexity strictly increasing up to length {cap}: {complexity:?}"),
            )),
        }
        let rec = is_recognizable_seq(seq, horizons.ell_cap, Mode::StrongSync)?;
        let describe = |levels: &[crate::recognizability::ConstantSearch]| {
            levels
                .iter()
                .map(|s| match (s.constant, s.fails_for_all) {
                    (Some(l), _) => format!("level {}: holds with constant {l}", s.level),
                    (None, true) => format!("level {}: fails for every constant", s.level),
                    (None, false) => format!("level {}: no constant up to {}", s.level, s.cap),
                })
                .collect::<Vec<_>>()
                .join("; ")
        };
        let status = |d: Decision| match d {
            Decision::Holds => Status::Verified,
            Decision::Fails => Status::Failed,
            Decision::Inconclusive => Status::Unknown,
        };
        premises.push(premise(RecognizableDirect, status(rec.recognizable), describe(&rec.levels)));
        premises.push(premise(
            EventuallyRecognizableDirect,
            status(rec.eventually_recognizable),
            describe(&rec.levels[seq.prefix_len()..]),
        ));
    } else {
        let note = "not computed: the sequence is not primitive";
        premises.push(premise(Aperiodic, Status::Unknown, note));
        premises.push(premise(RecognizableDirect, Status::Unknown, note));
        premises.push(premise(EventuallyRecognizableDirect, Status::Unknown, note));
    }
    premises.push(match &props.left_proper {
        Some(cuts) => premise(
            LeftProperContraction,
            Status::Verified,
            format!("cuts {:?} then gaps {:?}", cuts.head, cuts.cycle),
        ),
        None => premise(
            LeftProperContraction,
            Status::Unknown,
            format!("none found with gaps up to {}", horizons.classify),
        ),
    });

    let (inferences, verdicts) = infer(&premises);
    let mut cert = Certificate {
        subject: subject(seq),
        horizons: horizons.clone(),
        alphabet_rank: props.alphabet_rank,
        premises,
        inferences,
        verdicts,
        rank_bounds: None,
    };
    cert.rank_bounds = rank_bounds(&cert, props.alphabet_rank, None).ok();
    Ok(cert)
}

/// Conclusions that a failed direct check refutes: the window test itself,
/// and circularity, which is equivalent to full recognizability.
const REFUTED_BY: [(Property, Property); 3] = [
    (Recognizable, RecognizableDirect),
    (EventuallyRecognizable, EventuallyRecognizableDirect),
    (FullyRecognizable, Circular),
];

/// Deterministic fixpoint of the rules over the premises.
pub fn infer(premises: &[Premise]) -> (Vec<Inference>, Verdicts) {
    let mut status: BTreeMap<Property, Status> = BTreeMap::new();
    for p in premises {
        status.insert(p.property, p.status);
    }
    let get = |status: &BTreeMap<Property, Status>, p: Property| *status.get(&p).unwrap_or(&Status::Unknown);
    // A failed direct check refutes the conclusion; no rule may override it.
    for (conclusion, direct) in REFUTED_BY {
        if get(&status, direct) == Status::Failed {
            status.insert(conclusion, Status::Failed);
        }
    }
    let mut inferences: Vec<Inference> = Vec::new();
    let mut fired: BTreeMap<usize, usize> = BTreeMap::new();
    let mut conflicts: Vec<(Property, RuleId)> = Vec::new();
    loop {
        let mut changed = false;
        for (r, rule) in RULES.iter().enumerate() {
            let inputs: Vec<Status> = rule.inputs.iter().map(|&p| get(&status, p)).collect();
            if !inputs.iter().all(|s| s.is_established()) {
                continue;
            }
            let derived = Status::weakest(inputs);
            let current = get(&status, rule.conclusion);
            if current != Status::Failed && derived.stronger_than(current) {
                status.insert(rule.conclusion, derived);
                changed = true;
                let record = Inference {
                    rule: rule.id,
                    citation: rule.citation.to_string(),
                    inputs: rule.inputs.to_vec(),
                    conclusion: rule.conclusion,
                    status: derived,
                    corroborating: false,
                };
                match fired.get(&r) {
                    Some(&at) => inferences[at] = record,
                    None => {
                        fired.insert(r, inferences.len());
                        inferences.push(record);
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    for (r, rule) in RULES.iter().enumerate() {
        if fired.contains_key(&r) {
            continue;
        }
        let inputs: Vec<Status> = rule.inputs.iter().map(|&p| get(&status, p)).collect();
        if !inputs.iter().all(|s| s.is_established()) {
            continue;
        }
        if get(&status, rule.conclusion) == Status::Failed {
            conflicts.push((rule.conclusion, rule.id));
        } else {
            inferences.push(Inference {
                rule: rule.id,
                citation: rule.citation.to_string(),
                inputs: rule.inputs.to_vec(),
                conclusion: rule.conclusion,
                status: Status::weakest(inputs),
                corroborating: true,
            });
        }
    }

    let verdict = |property: Property| {
        let s = get(&status, property);
        let mut rules: Vec<RuleId> = Vec::new();
        if s.is_established() {
            let mut supporting: Vec<&Inference> = inferences
                .iter()
                .filter(|i| i.conclusion == property)
                .collect();
            supporting.sort_by_key(|i| (std::cmp::Reverse(i.status.strength()), i.corroborating));
            for i in supporting {
                if !rules.contains(&i.rule) {
                    rules.push(i.rule);
                }
            }
        }
        let mut conflicting: Vec<RuleId> = conflicts
            .iter()
            .filter(|(p, _)| *p == property)
            .map(|&(_, r)| r)
            .collect();
        conflicting.dedup();
        Verdict {
            status: s,
            rules,
            conflicts: conflicting,
        }
    };
    let verdicts = Verdicts {
        recognizable: verdict(Recognizable),
        eventually_recognizable: verdict(EventuallyRecognizable),
        s_saturating: verdict(SSaturating),
        fully_recognizable: verdict(FullyRecognizable),
    };
    (inferences, verdicts)
}

/// Rank bounds for the Schützenberger group, available once saturation is
/// established: `n² − n + 1` in general and `n` with a left proper
/// contraction. A matching Rees model contributes the order of its maximal
/// subgroups, `p^{n²−n+1}`, as a finite witness of the general bound.
pub fn rank_bounds(cert: &Certificate, alphabet_rank: usize, rees: Option<&ReesModel>) -> Result<RankBounds> {
    let qualifier = cert.verdicts.s_saturating.status;
    if !qualifier.is_established() {
        return Err(Error::SaturationNotEstablished);
    }
    let n = alphabet_rank;
    let proper = cert
        .premise(LeftProperContraction)
        .is_some_and(|p| p.status.is_established());
    let rees_witness = match rees {
        Some(model) if model.n == n => Some(ReesWitness {
            p: model.p,
            subgroup_order: model.subgroup_order.to_string(),
            verified: model.subgroup_orders_verified(),
        }),
        Some(model) => {
            return Err(Error::InvalidArgument(format!(
                "Rees model on {} generators does not match alphabet rank {n}",
                model.n
            )))
        }
        None => None,
    };
    Ok(RankBounds {
        alphabet_rank: n,
        general: n * n - n + 1,
        proper_case: proper.then_some(n),
        qualifier,
        rees_witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::substitution::Substitution;
    use crate::words::Alphabet;

    fn constant(images: &[&str]) -> DirectiveSequence {
        let a = Alphabet::from_chars("ab").unwrap();
        DirectiveSequence::constant(Substitution::endomorphism(&a, images).unwrap()).unwrap()
    }

    #[test]
    fn weakest_status() {
        assert_eq!(
            Status::weakest([Status::Verified, Status::VerifiedUpTo(5), Status::VerifiedUpTo(3)]),
            Status::VerifiedUpTo(3)
        );
        assert!(Status::Verified.stronger_than(Status::VerifiedUpTo(100)));
        assert!(!Status::Failed.stronger_than(Status::Unknown));
    }

    #[test]
    fn thue_morse_certificate() {
        let cert = certify(&constant(&["ab", "ba"]), &Horizons::default()).unwrap();
        assert_eq!(cert.verdicts.recognizable.status, Status::Verified);
        assert_eq!(cert.verdicts.recognizable.rules[0], RuleId::R7);
        assert_eq!(cert.verdicts.s_saturating.status, Status::Verified);
        assert!(cert.verdicts.s_saturating.rules.contains(&RuleId::R4));
        assert!(cert.verdicts.s_saturating.rules.contains(&RuleId::R5));
        assert_eq!(cert.premise(Aperiodic).unwrap().status, Status::VerifiedUpTo(20));
        assert_eq!(cert.rank_bounds.as_ref().unwrap().general, 3);
        assert_eq!(cert.rank_bounds.as_ref().unwrap().proper_case, None);
        assert_eq!(cert.verdicts.fully_recognizable.status, Status::Failed);
        assert!(cert.replay());
    }

    #[test]
    fn periodic_certificate() {
        let cert = certify(&constant(&["ab", "ab"]), &Horizons::default()).unwrap();
        assert_eq!(cert.verdicts.recognizable.status, Status::Failed);
        assert_eq!(cert.verdicts.s_saturating.status, Status::Unknown);
        assert_eq!(cert.premise(Encoding).unwrap().status, Status::Failed);
        assert!(cert.rank_bounds.is_none());
        assert_eq!(rank_bounds(&cert, 2, None), Err(Error::SaturationNotEstablished));
    }

    #[test]
    fn proper_case_bound() {
        let cert = certify(&constant(&["ab", "abb"]), &Horizons::default()).unwrap();
        let bounds = cert.rank_bounds.clone().unwrap();
        assert_eq!(bounds.proper_case, Some(2));
        assert_eq!(bounds.general, 3);
    }

    #[test]
    fn up_to_statuses_never_become_verified() {
        let premises = vec![
            premise(Primitive, Status::Verified, ""),
            premise(FiniteAlphabetRank, Status::Verified, ""),
            premise(Aperiodic, Status::VerifiedUpTo(20), ""),
            premise(Pure, Status::Verified, ""),
        ];
        let (inferences, verdicts) = infer(&premises);
        assert_eq!(verdicts.eventually_recognizable.status, Status::VerifiedUpTo(20));
        assert_eq!(verdicts.recognizable.status, Status::VerifiedUpTo(20));
        assert_eq!(verdicts.s_saturating.status, Status::Verified);
        assert!(inferences.iter().all(|i| i.status != Status::Verified || i.conclusion == SSaturating));
    }

    #[test]
    fn digest_is_stable() {
        let a = subject(&constant(&["ab", "ba"]));
        let b = subject(&constant(&["ab", "ba"]));
        assert_eq!(a, b);
        assert_eq!(a.digest.len(), 64);
        assert_ne!(a.digest, subject(&constant(&["ab", "a"])).digest);
    }
}
