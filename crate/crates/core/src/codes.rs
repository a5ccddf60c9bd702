//! Codes, circular codes and pure codes over a finite alphabet.
//!
//! A finite set `C` of nonempty words is a code when `C⁺` is free on `C`,
//! circular when `uv, vu ∈ C⁺` forces `u, v ∈ C⁺`, and pure when `C⁺` is
//! closed under extraction of roots. For finite codes purity is equivalent
//! to aperiodicity of the syntactic semigroup of `C⁺`.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::semigroup::{syntactic_semigroup, AperiodicityEvidence, SyntacticSemigroup, DEFAULT_ELEMENT_CAP};
use crate::words::{Alphabet, Letter, Word};

/// A word with two distinct factorizations over the code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ambiguity {
    pub word: Word,
    pub left: Vec<Word>,
    pub right: Vec<Word>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeCheck {
    pub is_code: bool,
    pub ambiguity: Option<Ambiguity>,
}

/// Words `u, v` with `uv, vu ∈ C⁺` but not both of `u, v` in `C⁺`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CircularityViolation {
    pub u: Word,
    pub v: Word,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CircularityCheck {
    pub is_circular: bool,
    /// Shortest violation, least `|u| + |v|`, then least `|u|`, then
    /// lexicographically least.
    pub witness: Option<CircularityViolation>,
    pub semigroup_size: usize,
    /// Bound on `|uv|` of the exhaustive cross-check.
    pub brute_force_bound: usize,
    pub brute_force_agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PurityCheck {
    pub is_pure: bool,
    pub evidence: AperiodicityEvidence,
}

/// A word `u ∉ C⁺` with `uⁿ ∈ C⁺`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootViolation {
    pub u: Word,
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeReport {
    pub words: Vec<Word>,
    pub is_code: bool,
    pub ambiguity: Option<Ambiguity>,
    pub is_prefix: bool,
    pub is_suffix: bool,
    pub is_bifix: bool,
    /// Present when the set is a code.
    pub circularity: Option<CircularityCheck>,
    pub purity: Option<PurityCheck>,
}

/// Validated, deduplicated code words as raw symbols.
struct CodeWords {
    alphabet: Arc<Alphabet>,
    words: Vec<Vec<Letter>>,
}

impl CodeWords {
    fn new(code: &[Word]) -> Result<Self> {
        let alphabet = match code.first() {
            Some(w) => Arc::clone(w.alphabet()),
            None => return Err(Error::InvalidArgument("empty set of code words".into())),
        };
        if code.iter().any(|w| w.alphabet() != &alphabet) {
            return Err(Error::AlphabetMismatch("code words over different alphabets".into()));
        }
        if code.iter().any(Word::is_empty) {
            return Err(Error::EmptyWord);
        }
        let words: BTreeSet<Vec<Letter>> = code.iter().map(|w| w.symbols().to_vec()).collect();
        Ok(CodeWords {
            alphabet,
            words: words.into_iter().collect(),
        })
    }

    fn word(&self, symbols: Vec<Letter>) -> Word {
        Word::new(&self.alphabet, symbols).expect("letters in range")
    }

    fn words_of(&self, indices: &[usize]) -> Vec<Word> {
        indices.iter().map(|&i| self.word(self.words[i].clone())).collect()
    }

    fn max_len(&self) -> usize {
        self.words.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Membership in `C⁺`.
    fn generates(&self, w: &[Letter]) -> bool {
        if w.is_empty() {
            return false;
        }
        let mut reach = vec![false; w.len() + 1];
        reach[0] = true;
        for i in 0..w.len() {
            if !reach[i] {
                continue;
            }
            for c in &self.words {
                if w[i..].starts_with(c) {
                    reach[i + c.len()] = true;
                }
            }
        }
        reach[w.len()]
    }
}

/// Membership of `w` in `C⁺`.
pub fn in_code_plus(code: &[Word], w: &Word) -> Result<bool> {
    let c = CodeWords::new(code)?;
    if w.alphabet() != &c.alphabet {
        return Err(Error::AlphabetMismatch("word and code over different alphabets".into()));
    }
    Ok(c.generates(w.symbols()))
}

/// Sardinas–Patterson test. Each dangling suffix `d` is reached with two
/// partial factorizations, the first spelling the second followed by `d`;
/// a codeword equal to `d` closes an ambiguity.
pub fn is_code(code: &[Word]) -> Result<CodeCheck> {
    let c = CodeWords::new(code)?;
    let mut seen: HashSet<Vec<Letter>> = HashSet::new();
    let mut queue: VecDeque<(Vec<Letter>, Vec<usize>, Vec<usize>)> = VecDeque::new();
    for (x, wx) in c.words.iter().enumerate() {
        for (y, wy) in c.words.iter().enumerate() {
            if x != y && wx.len() > wy.len() && wx.starts_with(wy) {
                let d = wx[wy.len()..].to_vec();
                if seen.insert(d.clone()) {
                    queue.push_back((d, vec![x], vec![y]));
                }
            }
        }
    }
    while let Some((d, ahead, behind)) = queue.pop_front() {
        for (k, w) in c.words.iter().enumerate() {
            let mut extended = behind.clone();
            extended.push(k);
            if *w == d {
                let spelled: Vec<Letter> = ahead.iter().flat_map(|&i| c.words[i].clone()).collect();
                return Ok(CodeCheck {
                    is_code: false,
                    ambiguity: Some(Ambiguity {
                        word: c.word(spelled),
                        left: c.words_of(&ahead),
                        right: c.words_of(&extended),
                    }),
                });
            }
            let next = if d.len() > w.len() && d.starts_with(w) {
                Some((d[w.len()..].to_vec(), ahead.clone(), extended))
            } else if w.len() > d.len() && w.starts_with(&d) {
                Some((w[d.len()..].to_vec(), extended, ahead.clone()))
            } else {
                None
            };
            if let Some(state) = next {
                if seen.insert(state.0.clone()) {
                    queue.push_back(state);
                }
            }
        }
    }
    Ok(CodeCheck {
        is_code: true,
        ambiguity: None,
    })
}

fn require_code(code: &[Word]) -> Result<()> {
    if is_code(code)?.is_code {
        Ok(())
    } else {
        Err(Error::NotACode)
    }
}

/// Both `uv` and `vu` lie in `C⁺` while `u` or `v` does not.
pub fn violates_circularity(code: &[Word], u: &Word, v: &Word) -> Result<bool> {
    let c = CodeWords::new(code)?;
    if u.is_empty() || v.is_empty() {
        return Ok(false);
    }
    let uv: Vec<Letter> = u.symbols().iter().chain(v.symbols()).copied().collect();
    let vu: Vec<Letter> = v.symbols().iter().chain(u.symbols()).copied().collect();
    Ok(c.generates(&uv) && c.generates(&vu) && !(c.generates(u.symbols()) && c.generates(v.symbols())))
}

/// Circularity, decided on the syntactic semigroup of `C⁺`: membership in
/// `C⁺` depends only on syntactic classes, so it suffices to test every
/// pair of classes. The result is compared with an exhaustive search over
/// `|uv| ≤ 2·|C|·max|c|`.
pub fn is_circular(code: &[Word]) -> Result<CircularityCheck> {
    require_code(code)?;
    let c = CodeWords::new(code)?;
    let syn = syntactic_semigroup(code, DEFAULT_ELEMENT_CAP)?;
    let witness = circularity_witness(&syn);
    let bound = 2 * c.words.len() * c.max_len();
    let brute = brute_force_circularity(&c, bound);
    let brute_force_agrees = brute.is_some() == witness.is_some();
    Ok(CircularityCheck {
        is_circular: witness.is_none(),
        witness: witness.map(|(u, v)| CircularityViolation {
            u: syn.representative(u),
            v: syn.representative(v),
        }),
        semigroup_size: syn.semigroup.size(),
        brute_force_bound: bound,
        brute_force_agrees,
    })
}

fn circularity_witness(syn: &SyntacticSemigroup) -> Option<(usize, usize)> {
    let s = &syn.semigroup;
    let n = s.size();
    let accepted: Vec<bool> = (0..n).map(|x| syn.accepts(x)).collect();
    let key = |x: usize, y: usize| {
        let (rx, ry) = (s.representative(x), s.representative(y));
        (rx.len() + ry.len(), rx.len(), rx.to_vec(), ry.to_vec())
    };
    let mut best: Option<(usize, usize)> = None;
    for x in 0..n {
        for y in 0..n {
            if accepted[x] && accepted[y] {
                continue;
            }
            if accepted[s.multiply(x, y)]
                && accepted[s.multiply(y, x)]
                && best.is_none_or(|(bx, by)| key(x, y) < key(bx, by))
            {
                best = Some((x, y));
            }
        }
    }
    best
}

/// Some violation with `|uv| ≤ bound`, scanning words of `C⁺`.
fn brute_force_circularity(c: &CodeWords, bound: usize) -> Option<(Vec<Letter>, Vec<Letter>)> {
    let mut stack: Vec<Vec<Letter>> = vec![Vec::new()];
    while let Some(prefix) = stack.pop() {
        for w in &c.words {
            if prefix.len() + w.len() > bound {
                continue;
            }
            let mut word = prefix.clone();
            word.extend_from_slice(w);
            for split in 1..word.len() {
                let (u, v) = word.split_at(split);
                let vu: Vec<Letter> = v.iter().chain(u).copied().collect();
                if c.generates(&vu) && !(c.generates(u) && c.generates(v)) {
                    return Some((u.to_vec(), v.to_vec()));
                }
            }
            stack.push(word);
        }
    }
    None
}

/// Purity, decided by aperiodicity of the syntactic semigroup of `C⁺`.
pub fn is_pure(code: &[Word]) -> Result<PurityCheck> {
    require_code(code)?;
    let syn = syntactic_semigroup(code, DEFAULT_ELEMENT_CAP)?;
    let evidence = syn.semigroup.aperiodicity();
    Ok(PurityCheck {
        is_pure: evidence.aperiodic,
        evidence,
    })
}

/// Direct root-extraction check: some `u` with `|u| ≤ max_root_len` and
/// `2 ≤ n ≤ max_exponent` has `uⁿ ∈ C⁺` but `u ∉ C⁺`.
pub fn purity_oracle(code: &[Word], max_root_len: usize, max_exponent: usize) -> Result<Option<RootViolation>> {
    let c = CodeWords::new(code)?;
    for len in 1..=max_root_len {
        for u in c.alphabet.words_of_length(len) {
            if c.generates(&u) {
                continue;
            }
            for n in 2..=max_exponent {
                let power: Vec<Letter> = u.iter().copied().cycle().take(n * len).collect();
                if c.generates(&power) {
                    return Ok(Some(RootViolation { u: c.word(u), n }));
                }
            }
        }
    }
    Ok(None)
}

pub fn analyze_code(code: &[Word]) -> Result<CodeReport> {
    let c = CodeWords::new(code)?;
    let check = is_code(code)?;
    let proper_prefix = |x: &Vec<Letter>, y: &Vec<Letter>| x.len() < y.len() && y.starts_with(x);
    let proper_suffix = |x: &Vec<Letter>, y: &Vec<Letter>| x.len() < y.len() && y.ends_with(x);
    let is_prefix = !c.words.iter().any(|x| c.words.iter().any(|y| proper_prefix(x, y)));
    let is_suffix = !c.words.iter().any(|x| c.words.iter().any(|y| proper_suffix(x, y)));
    let (circularity, purity) = if check.is_code {
        (Some(is_circular(code)?), Some(is_pure(code)?))
    } else {
        (None, None)
    };
    Ok(CodeReport {
        words: c.words.iter().map(|w| c.word(w.clone())).collect(),
        is_code: check.is_code,
        ambiguity: check.ambiguity,
        is_prefix,
        is_suffix,
        is_bifix: is_prefix && is_suffix,
        circularity,
        purity,
    })
}
