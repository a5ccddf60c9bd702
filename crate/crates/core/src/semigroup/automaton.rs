//! Deterministic automata, minimization, and transition semigroups.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use super::FiniteSemigroup;
use crate::error::{Error, Result};
use crate::words::{Alphabet, Letter, Word};

/// Complete deterministic automaton over letters `0 .. alphabet_size`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Dfa {
    pub alphabet_size: usize,
    pub transitions: Vec<Vec<usize>>,
    pub initial: usize,
    pub accepting: Vec<bool>,
}

impl Dfa {
    pub fn new(alphabet_size: usize, transitions: Vec<Vec<usize>>, initial: usize, accepting: Vec<bool>) -> Result<Self> {
        let n = transitions.len();
        if n == 0 || initial >= n || accepting.len() != n {
            return Err(Error::InvalidArgument("malformed automaton".into()));
        }
        if transitions
            .iter()
            .any(|row| row.len() != alphabet_size || row.iter().any(|&q| q >= n))
        {
            return Err(Error::InvalidArgument("automaton is not complete".into()));
        }
        Ok(Dfa {
            alphabet_size,
            transitions,
            initial,
            accepting,
        })
    }

    /// Automaton of `C⁺` for a finite set of nonempty words: subset
    /// construction on the flower automaton, whose petals leave and return
    /// to a central accepting state.
    pub fn of_code_plus(code: &[Vec<Letter>], alphabet_size: usize) -> Result<Self> {
        if code.is_empty() {
            return Err(Error::EmptyLanguage);
        }
        if code.iter().any(Vec::is_empty) {
            return Err(Error::EmptyWord);
        }
        // NFA states: 0 = start, 1 = centre, then the inner petal states.
        let mut delta: Vec<HashMap<Letter, Vec<usize>>> = vec![HashMap::new(), HashMap::new()];
        for word in code {
            let mut prev_inner: Option<usize> = None;
            for (i, &a) in word.iter().enumerate() {
                let target = if i + 1 == word.len() {
                    1
                } else {
                    delta.push(HashMap::new());
                    delta.len() - 1
                };
                match prev_inner {
                    None => {
                        delta[0].entry(a).or_default().push(target);
                        delta[1].entry(a).or_default().push(target);
                    }
                    Some(q) => delta[q].entry(a).or_default().push(target),
                }
                prev_inner = Some(target);
            }
        }
        let start: BTreeSet<usize> = [0].into();
        let mut index: HashMap<BTreeSet<usize>, usize> = HashMap::new();
        let mut subsets = vec![start.clone()];
        index.insert(start, 0);
        let mut transitions = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(s) = queue.pop_front() {
            let mut row = Vec::with_capacity(alphabet_size);
            for a in 0..alphabet_size {
                let next: BTreeSet<usize> = subsets[s]
                    .iter()
                    .flat_map(|&q| delta[q].get(&a).into_iter().flatten().copied())
                    .collect();
                let id = *index.entry(next.clone()).or_insert_with(|| {
                    subsets.push(next);
                    queue.push_back(subsets.len() - 1);
                    subsets.len() - 1
                });
                row.push(id);
            }
            if transitions.len() <= s {
                transitions.resize(s + 1, Vec::new());
            }
            transitions[s] = row;
        }
        let accepting = subsets.iter().map(|set| set.contains(&1)).collect();
        Dfa::new(alphabet_size, transitions, 0, accepting)
    }

    pub fn states(&self) -> usize {
        self.transitions.len()
    }

    pub fn run(&self, from: usize, word: &[Letter]) -> usize {
        word.iter().fold(from, |q, &a| self.transitions[q][a])
    }

    pub fn accepts(&self, word: &[Letter]) -> bool {
        self.accepting[self.run(self.initial, word)]
    }

    /// Minimal complete automaton: unreachable states dropped, then Moore
    /// partition refinement. States are numbered in breadth-first order
    /// from the initial state.
    pub fn minimize(&self) -> Dfa {
        let mut reachable = vec![false; self.states()];
        let mut order = vec![self.initial];
        reachable[self.initial] = true;
        let mut head = 0;
        while head < order.len() {
            let q = order[head];
            head += 1;
            for &r in &self.transitions[q] {
                if !reachable[r] {
                    reachable[r] = true;
                    order.push(r);
                }
            }
        }
        let mut class: Vec<usize> = (0..self.states()).map(|q| usize::from(self.accepting[q])).collect();
        let mut count = 0;
        loop {
            let mut signatures: HashMap<Vec<usize>, usize> = HashMap::new();
            let mut next = vec![usize::MAX; self.states()];
            for &q in &order {
                let mut sig = vec![class[q]];
                sig.extend(self.transitions[q].iter().map(|&r| class[r]));
                let fresh = signatures.len();
                next[q] = *signatures.entry(sig).or_insert(fresh);
            }
            let new_count = signatures.len();
            class = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        // Renumber classes breadth-first from the initial state.
        let mut renumber: HashMap<usize, usize> = HashMap::new();
        let mut reps = Vec::new();
        let mut queue = VecDeque::from([self.initial]);
        renumber.insert(class[self.initial], 0);
        reps.push(self.initial);
        while let Some(q) = queue.pop_front() {
            for &r in &self.transitions[q] {
                if let std::collections::hash_map::Entry::Vacant(slot) = renumber.entry(class[r]) {
                    slot.insert(reps.len());
                    reps.push(r);
                    queue.push_back(r);
                }
            }
        }
        let transitions = reps
            .iter()
            .map(|&q| self.transitions[q].iter().map(|&r| renumber[&class[r]]).collect())
            .collect();
        let accepting = reps.iter().map(|&q| self.accepting[q]).collect();
        Dfa {
            alphabet_size: self.alphabet_size,
            transitions,
            initial: 0,
            accepting,
        }
    }

    /// Letter action as a transformation of the states.
    pub fn letter_transformation(&self, a: Letter) -> Vec<usize> {
        self.transitions.iter().map(|row| row[a]).collect()
    }
}

/// The syntactic semigroup of a language `L ⊆ A⁺`, realised as the
/// transition semigroup of the minimal automaton of `L`.
#[derive(Clone, Debug)]
pub struct SyntacticSemigroup {
    pub alphabet: std::sync::Arc<Alphabet>,
    pub automaton: Dfa,
    pub semigroup: FiniteSemigroup,
    /// State transformation of each element; `x · y` acts as `x` then `y`.
    pub transformations: Vec<Vec<usize>>,
}

impl SyntacticSemigroup {
    /// Elements whose words belong to the language.
    pub fn accepts(&self, x: usize) -> bool {
        self.automaton.accepting[self.transformations[x][self.automaton.initial]]
    }

    pub fn element_of(&self, word: &[Letter]) -> Option<usize> {
        self.semigroup.evaluate(word)
    }

    pub fn representative(&self, x: usize) -> Word {
        Word::new(&self.alphabet, self.semigroup.representative(x).to_vec()).expect("letters in range")
    }
}

/// Syntactic semigroup of `C⁺`.
pub fn syntactic_semigroup(code: &[Word], cap: usize) -> Result<SyntacticSemigroup> {
    let alphabet = match code.first() {
        Some(w) => std::sync::Arc::clone(w.alphabet()),
        None => return Err(Error::EmptyLanguage),
    };
    if code.iter().any(|w| w.alphabet() != &alphabet) {
        return Err(Error::AlphabetMismatch("code words over different alphabets".into()));
    }
    let raw: Vec<Vec<Letter>> = code.iter().map(|w| w.symbols().to_vec()).collect();
    let dfa = Dfa::of_code_plus(&raw, alphabet.size())?;
    syntactic_semigroup_of_dfa(&alphabet, &dfa, cap)
}

pub fn syntactic_semigroup_of_dfa(
    alphabet: &std::sync::Arc<Alphabet>,
    dfa: &Dfa,
    cap: usize,
) -> Result<SyntacticSemigroup> {
    if dfa.alphabet_size != alphabet.size() {
        return Err(Error::AlphabetMismatch("automaton alphabet size differs".into()));
    }
    let minimal = dfa.minimize();
    if !minimal.accepting.iter().any(|&f| f) {
        return Err(Error::EmptyLanguage);
    }
    let gens: Vec<Vec<usize>> = (0..alphabet.size()).map(|a| minimal.letter_transformation(a)).collect();
    let (semigroup, transformations) = FiniteSemigroup::closure(
        gens,
        alphabet.letters().to_vec(),
        |x: &Vec<usize>, y: &Vec<usize>| x.iter().map(|&q| y[q]).collect(),
        cap,
    )?;
    Ok(SyntacticSemigroup {
        alphabet: std::sync::Arc::clone(alphabet),
        automaton: minimal,
        semigroup,
        transformations,
    })
}
