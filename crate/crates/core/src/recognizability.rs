//! Recognizability of one level of a primitive directive sequence, tested on
//! exactly computed factor languages.
//!
//! An *interpretation* of a word `w ∈ L(σ⁽ⁿ⁾)` is a pair `(v, k)` with
//! `v ∈ L(σ⁽ⁿ⁺¹⁾)`, `0 ≤ k < |σₙ(v₀)|` and `σₙ(v)[k, k+|w|) = w`, with `v`
//! no longer than needed to cover `w`. For a minimal shift every such pair
//! is realised by some point, so conflicts between interpretations of
//! windows `w` of length `2ℓ` decide whether `ℓ` works as a constant of
//! recognizability.

use std::sync::Arc;

use serde::Serialize;

use crate::directive::{level_languages, DirectiveSequence, LevelLanguages};
use crate::error::{Error, Result};
use crate::substitution::Substitution;
use crate::words::{Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Interpretation {
    pub preimage: Word,
    pub offset: usize,
    pub covered: Word,
    /// `c − k` for every cutting point `c` of `σ(v)` with `k ≤ c ≤ k + |w|`.
    pub cut_offsets: Vec<usize>,
}

impl Interpretation {
    /// Letter of `v` covering position `offset + i` of `σ(v)`, and the
    /// position inside that letter's image.
    pub fn center(&self, sigma: &Substitution, i: usize) -> (Letter, usize) {
        let target = self.offset + i;
        let mut start = 0;
        for &a in self.preimage.symbols() {
            let len = sigma.image_len(a);
            if target < start + len {
                return (a, target - start);
            }
            start += len;
        }
        panic!("position {i} outside the interpretation");
    }

    /// Re-check every defining condition against the raw substitution.
    pub fn validate(&self, sigma: &Substitution) -> bool {
        let v = self.preimage.symbols();
        let w = self.covered.symbols();
        if v.is_empty() || w.is_empty() || self.offset >= sigma.image_len(v[0]) {
            return false;
        }
        let image = sigma.apply_symbols(v);
        if image.len() < self.offset + w.len() || image[self.offset..self.offset + w.len()] != *w {
            return false;
        }
        let without_last = image.len() - sigma.image_len(v[v.len() - 1]);
        if v.len() > 1 && self.offset + w.len() <= without_last {
            return false;
        }
        cut_offsets(sigma, v, self.offset, w.len()) == self.cut_offsets
    }
}

fn cut_offsets(sigma: &Substitution, v: &[Letter], k: usize, width: usize) -> Vec<usize> {
    let mut cuts = Vec::new();
    let mut c = 0;
    let mut push = |c: usize| {
        if c >= k && c <= k + width {
            cuts.push(c - k);
        }
    };
    push(c);
    for &a in v {
        c += sigma.image_len(a);
        push(c);
    }
    cuts
}

/// Horizon of the upper language needed to interpret words of length `len`.
pub fn required_upper_horizon(sigma: &Substitution, len: usize) -> usize {
    len.div_ceil(sigma.min_image_len()) + 2
}

/// `v` is accepted; the image of `v[last]` is matched against `w` from the
/// position `matched` of `w`, starting at offset `skip` inside that image.
fn extend(
    sigma: &Substitution,
    w: &[Letter],
    upper: &dyn Fn(&[Letter]) -> bool,
    v: &mut Vec<Letter>,
    skip: usize,
    matched: usize,
    out: &mut Vec<Vec<Letter>>,
) {
    let image = sigma.image_symbols(v[v.len() - 1]);
    let mut matched = matched;
    for &b in &image[skip..] {
        if matched == w.len() {
            break;
        }
        if b != w[matched] {
            return;
        }
        matched += 1;
    }
    if matched == w.len() {
        out.push(v.clone());
        return;
    }
    for b in 0..sigma.domain().size() {
        v.push(b);
        if upper(v) {
            extend(sigma, w, upper, v, 0, matched, out);
        }
        v.pop();
    }
}

/// All interpretations of `w` under `sigma`, with preimages in `upper`.
pub fn interpretations(
    w: &Word,
    sigma: &Substitution,
    upper: &crate::directive::FactorLanguage,
) -> Result<Vec<Interpretation>> {
    if w.alphabet() != sigma.codomain() || &upper.alphabet != sigma.domain() {
        return Err(Error::AlphabetMismatch("word, substitution and language do not match".into()));
    }
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let needed = required_upper_horizon(sigma, w.len());
    if upper.exact_up_to < needed {
        return Err(Error::HorizonInsufficient {
            what: "preimage language".into(),
            needed,
            available: upper.exact_up_to,
        });
    }
    let alphabet = Arc::clone(sigma.domain());
    let accept = |v: &[Letter]| {
        Word::new(&alphabet, v.to_vec()).is_ok_and(|word| upper.contains(&word))
    };
    Ok(collect_interpretations(sigma, w, &accept))
}

fn collect_interpretations(sigma: &Substitution, w: &Word, accept: &dyn Fn(&[Letter]) -> bool) -> Vec<Interpretation> {
    let mut result = Vec::new();
    for a in 0..sigma.domain().size() {
        if !accept(&[a]) {
            continue;
        }
        for k in 0..sigma.image_len(a) {
            let mut found = Vec::new();
            let mut v = vec![a];
            extend(sigma, w.symbols(), accept, &mut v, k, 0, &mut found);
            for v in found {
                result.push(Interpretation {
                    cut_offsets: cut_offsets(sigma, &v, k, w.len()),
                    preimage: Word::new(sigma.domain(), v).expect("letters in range"),
                    offset: k,
                    covered: w.clone(),
                });
            }
        }
    }
    result
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Windows must decide whether the center is a cutting point.
    MosseCut,
    /// Windows must decide the covering letter and its phase at the center.
    StrongSync,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FailureWitness {
    pub word: Word,
    pub first: Interpretation,
    pub second: Interpretation,
    /// Center offset `ℓ` inside the word.
    pub center: usize,
    /// Both levels are periodic and the window and preimages are long
    /// enough to extend uniquely, so the conflict survives for every larger
    /// constant.
    pub persistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    Holds,
    Fails { witness: Box<FailureWitness> },
    Inconclusive { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecognizabilityVerdict {
    pub level: usize,
    pub constant_tested: usize,
    pub mode: Mode,
    pub outcome: Outcome,
    pub windows_checked: usize,
    pub audit: Vec<String>,
}

impl RecognizabilityVerdict {
    pub fn holds(&self) -> bool {
        matches!(self.outcome, Outcome::Holds)
    }

    pub fn witness(&self) -> Option<&FailureWitness> {
        match &self.outcome {
            Outcome::Fails { witness } => Some(witness),
            _ => None,
        }
    }
}

/// Bound on the number of interpretations examined in one test.
pub const DEFAULT_INTERPRETATION_CAP: usize = 2_000_000;

/// Languages shared by the tests of one sequence up to a constant cap.
pub struct RecognizabilityContext<'a> {
    seq: &'a DirectiveSequence,
    langs: LevelLanguages,
    /// Length `k` at which the complexity of each canonical level stops
    /// growing, if observed within the computed horizon.
    periodic_from: Vec<Option<usize>>,
    pub interpretation_cap: usize,
}

impl<'a> RecognizabilityContext<'a> {
    /// Prepare languages for every constant `ℓ ≤ max_ell`.
    pub fn new(seq: &'a DirectiveSequence, max_ell: usize) -> Result<Self> {
        if max_ell == 0 {
            return Err(Error::InvalidArgument("recognizability constant must be positive".into()));
        }
        if !seq.is_primitive() {
            return Err(Error::NotPrimitive(seq.exact_primitivity_horizon()));
        }
        let min_len = (0..seq.canonical_levels())
            .map(|n| seq.term(n).min_image_len())
            .min()
            .expect("nonempty");
        let horizon = (2 * max_ell).max((2 * max_ell).div_ceil(min_len) + 2);
        let langs = level_languages(seq, horizon);
        let periodic_from = (0..seq.canonical_levels())
            .map(|n| {
                let counts: Vec<usize> = (1..=horizon)
                    .map(|k| langs.sets[n].iter().filter(|w| w.len() == k).count())
                    .collect();
                (1..horizon).find(|&k| counts[k - 1] == counts[k])
            })
            .collect();
        Ok(RecognizabilityContext {
            seq,
            langs,
            periodic_from,
            interpretation_cap: DEFAULT_INTERPRETATION_CAP,
        })
    }

    pub fn horizon(&self) -> usize {
        self.langs.max_len
    }

    pub fn test(&self, level: usize, ell: usize, mode: Mode) -> Result<RecognizabilityVerdict> {
        let sigma = self.seq.term(level);
        let needed = (2 * ell).max(required_upper_horizon(sigma, 2 * ell));
        if needed > self.langs.max_len {
            return Err(Error::HorizonInsufficient {
                what: "recognizability windows".into(),
                needed,
                available: self.langs.max_len,
            });
        }
        let lower = self.seq.canonical(level);
        let upper = self.seq.canonical(level + 1);
        let accept = |v: &[Letter]| v.len() <= self.langs.max_len && self.langs.sets[upper].contains(v);
        let mut windows: Vec<&Vec<Letter>> = self.langs.sets[lower].iter().filter(|w| w.len() == 2 * ell).collect();
        windows.sort();
        let mut audit = vec![
            format!("windows: all {} words of length {} at level {level}", windows.len(), 2 * ell),
            format!("preimages range over the exact language of level {} up to length {}", level + 1, self.langs.max_len),
            "every interpretation is realised in the shift since the sequence is primitive".to_string(),
        ];
        let mut seen = 0usize;
        for w in &windows {
            let word = Word::new(self.seq.level(level), (*w).clone())?;
            let interps = collect_interpretations(sigma, &word, &accept);
            seen += interps.len();
            if seen > self.interpretation_cap {
                audit.push(format!("stopped after {seen} interpretations"));
                return Ok(RecognizabilityVerdict {
                    level,
                    constant_tested: ell,
                    mode,
                    outcome: Outcome::Inconclusive {
                        reason: format!("interpretation cap {} exceeded", self.interpretation_cap),
                    },
                    windows_checked: windows.len(),
                    audit,
                });
            }
            if let Some((i, j)) = conflict(sigma, &interps, ell, mode) {
                let persistent = self.is_persistent(level, ell, &interps[i], &interps[j]);
                audit.push(format!("conflict on window {word}"));
                return Ok(RecognizabilityVerdict {
                    level,
                    constant_tested: ell,
                    mode,
                    outcome: Outcome::Fails {
                        witness: Box::new(FailureWitness {
                            word,
                            first: interps[i].clone(),
                            second: interps[j].clone(),
                            center: ell,
                            persistent,
                        }),
                    },
                    windows_checked: windows.len(),
                    audit,
                });
            }
        }
        Ok(RecognizabilityVerdict {
            level,
            constant_tested: ell,
            mode,
            outcome: Outcome::Holds,
            windows_checked: windows.len(),
            audit,
        })
    }

    fn is_persistent(&self, level: usize, ell: usize, a: &Interpretation, b: &Interpretation) -> bool {
        let lower = self.periodic_from[self.seq.canonical(level)];
        let upper = self.periodic_from[self.seq.canonical(level + 1)];
        let shortest = a.preimage.len().min(b.preimage.len());
        matches!((lower, upper), (Some(k0), Some(k1)) if k0 <= 2 * ell && k1 <= shortest)
    }
}

/// Indices of two interpretations that disagree at the center.
fn conflict(sigma: &Substitution, interps: &[Interpretation], ell: usize, mode: Mode) -> Option<(usize, usize)> {
    match mode {
        Mode::MosseCut => {
            let cut = |i: &Interpretation| i.cut_offsets.contains(&ell);
            let yes = interps.iter().position(cut)?;
            let no = interps.iter().position(|i| !cut(i))?;
            Some((yes, no))
        }
        Mode::StrongSync => {
            let first = interps.first()?;
            let c0 = first.center(sigma, ell);
            interps
                .iter()
                .position(|i| i.center(sigma, ell) != c0)
                .map(|j| (0, j))
        }
    }
}

pub fn mosse_test(seq: &DirectiveSequence, level: usize, ell: usize, mode: Mode) -> Result<RecognizabilityVerdict> {
    RecognizabilityContext::new(seq, ell)?.test(level, ell, mode)
}

/// Re-validate a failure witness from scratch: both interpretations are
/// rebuilt against the raw substitution and a freshly computed language.
pub fn replay_witness(seq: &DirectiveSequence, level: usize, mode: Mode, witness: &FailureWitness) -> Result<bool> {
    let sigma = seq.term(level);
    let ell = witness.center;
    let horizon = required_upper_horizon(sigma, witness.word.len()).max(witness.word.len());
    let langs = level_languages(seq, horizon);
    let in_lower = langs.contains(seq, level, witness.word.symbols());
    let valid = |i: &Interpretation| {
        i.covered == witness.word
            && i.validate(sigma)
            && i.preimage.len() <= horizon
            && langs.contains(seq, level + 1, i.preimage.symbols())
    };
    if !(in_lower && witness.word.len() == 2 * ell && valid(&witness.first) && valid(&witness.second)) {
        return Ok(false);
    }
    Ok(match mode {
        Mode::MosseCut => witness.first.cut_offsets.contains(&ell) != witness.second.cut_offsets.contains(&ell),
        Mode::StrongSync => witness.first.center(sigma, ell) != witness.second.center(sigma, ell),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstantSearch {
    pub level: usize,
    pub cap: usize,
    pub mode: Mode,
    /// Least `ℓ ≤ cap` for which the test holds.
    pub constant: Option<usize>,
    /// A failure at the cap that persists for every larger constant.
    pub fails_for_all: bool,
    pub last_failure: Option<RecognizabilityVerdict>,
}

pub fn min_recognizability_constant(
    seq: &DirectiveSequence,
    level: usize,
    cap: usize,
    mode: Mode,
) -> Result<ConstantSearch> {
    let ctx = RecognizabilityContext::new(seq, cap)?;
    search_constant(&ctx, level, cap, mode)
}

fn search_constant(ctx: &RecognizabilityContext<'_>, level: usize, cap: usize, mode: Mode) -> Result<ConstantSearch> {
    let mut last_failure = None;
    for ell in 1..=cap {
        let verdict = ctx.test(level, ell, mode)?;
        match verdict.outcome {
            Outcome::Holds => {
                return Ok(ConstantSearch {
                    level,
                    cap,
                    mode,
                    constant: Some(ell),
                    fails_for_all: false,
                    last_failure,
                })
            }
            Outcome::Fails { ref witness } if witness.persistent => {
                return Ok(ConstantSearch {
                    level,
                    cap,
                    mode,
                    constant: None,
                    fails_for_all: true,
                    last_failure: Some(verdict),
                })
            }
            _ => last_failure = Some(verdict),
        }
    }
    Ok(ConstantSearch {
        level,
        cap,
        mode,
        constant: None,
        fails_for_all: false,
        last_failure,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Holds,
    Fails,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceRecognizability {
    pub mode: Mode,
    pub cap: usize,
    /// One search per canonical level; the remaining levels repeat these.
    pub levels: Vec<ConstantSearch>,
    pub recognizable: Decision,
    /// Every cycle level holds, so some tail is recognizable.
    pub eventually_recognizable: Decision,
}

fn combine(results: &[&ConstantSearch]) -> Decision {
    if results.iter().all(|r| r.constant.is_some()) {
        Decision::Holds
    } else if results.iter().any(|r| r.fails_for_all) {
        Decision::Fails
    } else {
        Decision::Inconclusive
    }
}

pub fn is_recognizable_seq(seq: &DirectiveSequence, cap: usize, mode: Mode) -> Result<SequenceRecognizability> {
    let ctx = RecognizabilityContext::new(seq, cap)?;
    let levels = (0..seq.canonical_levels())
        .map(|n| search_constant(&ctx, n, cap, mode))
        .collect::<Result<Vec<_>>>()?;
    let all: Vec<&ConstantSearch> = levels.iter().collect();
    let cycle: Vec<&ConstantSearch> = levels[seq.prefix_len()..].iter().collect();
    let recognizable = combine(&all);
    let eventually_recognizable = combine(&cycle);
    Ok(SequenceRecognizability {
        mode,
        cap,
        levels,
        recognizable,
        eventually_recognizable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::directive::factor_language;
    use crate::words::Alphabet;

    fn constant(images: &[&str]) -> DirectiveSequence {
        let a = Alphabet::from_chars("ab").unwrap();
        DirectiveSequence::constant(Substitution::endomorphism(&a, images).unwrap()).unwrap()
    }

    fn render(interps: &[Interpretation]) -> Vec<(String, usize)> {
        let mut out: Vec<(String, usize)> =
            interps.iter().map(|i| (i.preimage.to_string(), i.offset)).collect();
        out.sort();
        out
    }

    #[test]
    fn interpretations_of_ab_under_thue_morse() {
        let tm = constant(&["ab", "ba"]);
        let lang = factor_language(&tm, 1, 6).unwrap();
        let w = Word::parse(tm.level(0), "ab").unwrap();
        let interps = interpretations(&w, tm.term(0), &lang).unwrap();
        let r = render(&interps);
        assert!(r.contains(&("a".into(), 0)));
        assert!(r.contains(&("bb".into(), 1)));
        assert!(!r.contains(&("ba".into(), 1)));
        assert!(interps.iter().all(|i| i.validate(tm.term(0))));
    }

    #[test]
    fn shared_images_give_all_pairs() {
        let seq = constant(&["ab", "ab"]);
        let lang = factor_language(&seq, 1, 6).unwrap();
        let w = Word::parse(seq.level(0), "abab").unwrap();
        let at_zero = |interps: &[Interpretation]| -> Vec<String> {
            render(interps)
                .into_iter()
                .filter(|(_, k)| *k == 0)
                .map(|(v, _)| v)
                .collect()
        };
        // Without a language constraint every two-letter preimage works.
        let free = collect_interpretations(seq.term(0), &w, &|_: &[Letter]| true);
        assert_eq!(at_zero(&free), vec!["aa", "ab", "ba", "bb"]);
        assert!(free.iter().all(|i| i.validate(seq.term(0))));
        // Inside the shift only ab and ba occur at the next level.
        assert_eq!(at_zero(&interpretations(&w, seq.term(0), &lang).unwrap()), vec!["ab", "ba"]);
    }

    #[test]
    fn short_words_have_short_preimages() {
        let tm = constant(&["ab", "ba"]);
        let lang = factor_language(&tm, 1, 6).unwrap();
        for w in factor_language(&tm, 0, 2).unwrap().words(2) {
            for i in interpretations(w, tm.term(0), &lang).unwrap() {
                assert!(i.preimage.len() <= 2);
            }
        }
    }

    #[test]
    fn horizon_is_checked() {
        let tm = constant(&["ab", "ba"]);
        let lang = factor_language(&tm, 1, 2).unwrap();
        let w = Word::parse(tm.level(0), "abba").unwrap();
        assert!(matches!(
            interpretations(&w, tm.term(0), &lang),
            Err(Error::HorizonInsufficient { .. })
        ));
    }

    #[test]
    fn periodic_substitution_fails_persistently() {
        let seq = constant(&["ab", "ab"]);
        for ell in 1..=5 {
            let v = mosse_test(&seq, 0, ell, Mode::StrongSync).unwrap();
            let w = v.witness().expect("fails");
            assert!(w.persistent);
            assert!(replay_witness(&seq, 0, Mode::StrongSync, w).unwrap());
        }
        // Cutting points alone are forced here: every image has length 2.
        assert!(mosse_test(&seq, 0, 1, Mode::MosseCut).unwrap().holds());
    }

    #[test]
    fn thue_morse_and_fibonacci_hold() {
        for images in [["ab", "ba"], ["ab", "a"]] {
            let seq = constant(&images);
            let search = min_recognizability_constant(&seq, 0, 10, Mode::StrongSync).unwrap();
            assert!(search.constant.is_some(), "{images:?}");
        }
    }

    #[test]
    fn sequence_verdicts() {
        let tm = is_recognizable_seq(&constant(&["ab", "ba"]), 6, Mode::StrongSync).unwrap();
        assert_eq!(tm.recognizable, Decision::Holds);
        let per = is_recognizable_seq(&constant(&["ab", "ab"]), 5, Mode::StrongSync).unwrap();
        assert_eq!(per.recognizable, Decision::Fails);
        assert!(per.levels[0].fails_for_all);
    }
}
