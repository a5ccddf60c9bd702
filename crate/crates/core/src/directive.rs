//! Eventually periodic directive sequences `σ = (σₙ)`, with `σₙ: Aₙ₊₁⁺ → Aₙ⁺`.
//!
//! A sequence is stored as a finite prefix followed by a nonempty cycle
//! repeated forever. Level `n` carries the alphabet `Aₙ`, the codomain of
//! `σₙ`. Every level is equivalent to one of the *canonical* levels
//! `0 .. prefix_len + cycle_len`.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use serde::Serialize;

use crate::codes;
use crate::error::{Error, Result};
use crate::substitution::{Incidence, Substitution};
use crate::words::{symbol_occurrences, Alphabet, Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DirectiveSequence {
    prefix: Vec<Substitution>,
    cycle: Vec<Substitution>,
}

impl DirectiveSequence {
    pub fn new(prefix: Vec<Substitution>, cycle: Vec<Substitution>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::InvalidArgument("the cycle of a directive sequence is empty".into()));
        }
        let all: Vec<&Substitution> = prefix.iter().chain(cycle.iter()).collect();
        for (i, pair) in all.windows(2).enumerate() {
            if pair[0].domain() != pair[1].codomain() {
                return Err(Error::AlphabetMismatch(format!(
                    "term {} does not compose with term {}",
                    i,
                    i + 1
                )));
            }
        }
        if cycle[cycle.len() - 1].domain() != cycle[0].codomain() {
            return Err(Error::AlphabetMismatch("the cycle does not close up".into()));
        }
        Ok(DirectiveSequence { prefix, cycle })
    }

    /// The constant sequence `(σ, σ, …)`.
    pub fn constant(sigma: Substitution) -> Result<Self> {
        if !sigma.is_endomorphism() {
            return Err(Error::NotEndomorphism);
        }
        DirectiveSequence::new(Vec::new(), vec![sigma])
    }

    pub fn periodic(cycle: Vec<Substitution>) -> Result<Self> {
        DirectiveSequence::new(Vec::new(), cycle)
    }

    pub fn prefix(&self) -> &[Substitution] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[Substitution] {
        &self.cycle
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn cycle_len(&self) -> usize {
        self.cycle.len()
    }

    /// Number of canonical levels.
    pub fn canonical_levels(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    /// The canonical level equivalent to level `n`.
    pub fn canonical(&self, n: usize) -> usize {
        let p = self.prefix.len();
        if n < p {
            n
        } else {
            p + (n - p) % self.cycle.len()
        }
    }

    pub fn term(&self, n: usize) -> &Substitution {
        let c = self.canonical(n);
        if c < self.prefix.len() {
            &self.prefix[c]
        } else {
            &self.cycle[c - self.prefix.len()]
        }
    }

    /// The alphabet `Aₙ`.
    pub fn level(&self, n: usize) -> &Arc<Alphabet> {
        self.term(n).codomain()
    }

    /// Alphabets of the canonical levels.
    pub fn levels(&self) -> Vec<Arc<Alphabet>> {
        (0..self.canonical_levels()).map(|n| Arc::clone(self.level(n))).collect()
    }

    /// `σ_{n,m} = σₙ ∘ ⋯ ∘ σ_{m−1}`, the identity of `Aₙ` when `n = m`.
    pub fn compose_range(&self, n: usize, m: usize) -> Result<Substitution> {
        if n > m {
            return Err(Error::InvalidArgument(format!("empty range {n}..{m}")));
        }
        let mut acc = Substitution::identity(self.level(n));
        for i in n..m {
            acc = acc.compose(self.term(i))?;
        }
        Ok(acc)
    }

    /// The tail `σ⁽ⁿ⁾ = (σₙ, σₙ₊₁, …)`.
    pub fn tail(&self, n: usize) -> DirectiveSequence {
        let p = self.prefix.len();
        if n < p {
            return DirectiveSequence {
                prefix: self.prefix[n..].to_vec(),
                cycle: self.cycle.clone(),
            };
        }
        let shift = (n - p) % self.cycle.len();
        let mut cycle = self.cycle[shift..].to_vec();
        cycle.extend_from_slice(&self.cycle[..shift]);
        DirectiveSequence {
            prefix: Vec::new(),
            cycle,
        }
    }

    /// Telescope the sequence at the cut points of `cuts`.
    pub fn contract(&self, cuts: &CutPattern) -> Result<DirectiveSequence> {
        let mut terms = Vec::new();
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        let mut k = 0;
        loop {
            let (c, phase) = (cuts.cut(k), cuts.phase(k));
            if let Some(phase) = phase {
                if c >= self.prefix.len() {
                    if let Some(&start) = seen.get(&(self.canonical(c), phase)) {
                        let cycle = terms.split_off(start);
                        return DirectiveSequence::new(terms, cycle);
                    }
                    seen.insert((self.canonical(c), phase), k);
                }
            }
            terms.push(self.compose_range(c, cuts.cut(k + 1))?);
            k += 1;
        }
    }

    /// Every composable block `(σ₀, …, σₙ)` occurs again later, which for an
    /// eventually periodic sequence means it is purely periodic. Returns the
    /// first prefix index breaking this, if any.
    pub fn recurrence_defect(&self) -> Option<usize> {
        (0..self.prefix.len()).find(|&i| self.term(i) != self.term(i + self.cycle.len()))
    }

    pub fn is_recurrent(&self) -> bool {
        self.recurrence_defect().is_none()
    }

    /// Smallest `m > n` with `σ_{n,m}` positive, searching `m ≤ n + horizon`.
    pub fn positivity_witness(&self, n: usize, horizon: usize) -> Option<usize> {
        let mut inc = Incidence::of(self.term(n));
        for m in n + 1..=n + horizon {
            if m > n + 1 {
                inc = inc.then(&Incidence::of(self.term(m - 1)));
            }
            if inc.is_positive() {
                return Some(m);
            }
        }
        None
    }

    /// A horizon within which every positivity witness is found, if the
    /// sequence is primitive at all.
    pub fn exact_primitivity_horizon(&self) -> usize {
        let s = self.levels().iter().map(|a| a.size()).max().unwrap_or(1);
        self.prefix.len() + self.cycle.len() * ((s - 1) * (s - 1) + 1)
    }

    /// Positivity witnesses `m(n)` for each canonical level `n`.
    pub fn positivity_witnesses(&self, horizon: usize) -> Vec<Option<usize>> {
        (0..self.canonical_levels())
            .map(|n| self.positivity_witness(n, horizon))
            .collect()
    }

    /// Primitivity, decided exactly.
    pub fn is_primitive(&self) -> bool {
        let h = self.exact_primitivity_horizon();
        self.positivity_witnesses(h).iter().all(Option::is_some)
    }

    fn proper_cuts(&self, horizon: usize, side: Side) -> Option<CutPattern> {
        let mut cuts = vec![0usize];
        let mut seen: HashMap<usize, usize> = HashMap::new();
        loop {
            let c = *cuts.last().expect("nonempty");
            if c >= self.prefix.len() {
                if let Some(&j) = seen.get(&self.canonical(c)) {
                    let gaps = cuts[j..].windows(2).map(|w| w[1] - w[0]).collect();
                    cuts.truncate(j + 1);
                    return Some(CutPattern { head: cuts, cycle: gaps });
                }
                seen.insert(self.canonical(c), cuts.len() - 1);
            }
            let next = self.next_proper_cut(c, horizon, side)?;
            cuts.push(next);
        }
    }

    fn next_proper_cut(&self, c: usize, horizon: usize, side: Side) -> Option<usize> {
        let mut first: Vec<Letter> = (0..self.level(c).size()).collect();
        let mut last = first.clone();
        for m in c + 1..=c + horizon {
            let t = self.term(m - 1);
            let (f, l) = (t.first_letters(), t.last_letters());
            first = f.iter().map(|&b| first[b]).collect();
            last = l.iter().map(|&b| last[b]).collect();
            let constant = |v: &[Letter]| v.windows(2).all(|w| w[0] == w[1]);
            let ok = match side {
                Side::Left => constant(&first),
                Side::Right => constant(&last),
                Side::Both => constant(&first) && constant(&last),
            };
            if ok {
                return Some(m);
            }
        }
        None
    }
}

#[derive(Clone, Copy)]
enum Side {
    Left,
    Right,
    Both,
}

/// An eventually periodic sequence of cut points `0 = n₀ < n₁ < ⋯`: the
/// listed `head`, then the `cycle` of gaps repeated after its last entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CutPattern {
    pub head: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl CutPattern {
    pub fn new(head: Vec<usize>, cycle: Vec<usize>) -> Result<Self> {
        if head.first() != Some(&0) {
            return Err(Error::InvalidArgument("cut points must start at 0".into()));
        }
        if head.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("cut points must increase strictly".into()));
        }
        if cycle.is_empty() || cycle.contains(&0) {
            return Err(Error::InvalidArgument(
                "cut pattern needs a nonempty cycle of positive gaps".into(),
            ));
        }
        Ok(CutPattern { head, cycle })
    }

    /// Cuts every `step` levels.
    pub fn uniform(step: usize) -> Result<Self> {
        CutPattern::new(vec![0], vec![step])
    }

    /// The cut point `n_k`.
    pub fn cut(&self, k: usize) -> usize {
        if k < self.head.len() {
            return self.head[k];
        }
        let extra = k - (self.head.len() - 1);
        let period: usize = self.cycle.iter().sum();
        let full = extra / self.cycle.len();
        let rest: usize = self.cycle[..extra % self.cycle.len()].iter().sum();
        self.head[self.head.len() - 1] + full * period + rest
    }

    fn phase(&self, k: usize) -> Option<usize> {
        (k + 1 >= self.head.len()).then(|| (k + 1 - self.head.len()) % self.cycle.len())
    }
}

/// The set `L(σ⁽ⁿ⁾) ∩ A^{≤k}` of one level.
#[derive(Clone, Debug, Serialize)]
pub struct FactorLanguage {
    pub level: usize,
    pub alphabet: Arc<Alphabet>,
    pub by_length: BTreeMap<usize, BTreeSet<Word>>,
    pub exact_up_to: usize,
    /// The sequence is primitive, so this is also the language of the
    /// generated shift; otherwise it may be strictly larger.
    pub shift_language: bool,
    pub stabilization_log: Vec<String>,
}

impl FactorLanguage {
    pub fn words(&self, length: usize) -> impl Iterator<Item = &Word> {
        self.by_length.get(&length).into_iter().flatten()
    }

    pub fn complexity(&self, length: usize) -> usize {
        self.by_length.get(&length).map_or(0, BTreeSet::len)
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.by_length.get(&w.len()).is_some_and(|s| s.contains(w))
    }
}

#[derive(Clone, Debug, Default)]
pub struct LanguageOptions {
    /// Compute the language of a non-primitive sequence instead of failing.
    pub allow_non_primitive: bool,
}

/// Exact languages of all canonical levels, as raw symbol words.
#[derive(Clone, Debug)]
pub(crate) struct LevelLanguages {
    pub(crate) max_len: usize,
    pub(crate) sets: Vec<HashSet<Vec<Letter>>>,
    pub(crate) log: Vec<String>,
}

impl LevelLanguages {
    pub(crate) fn contains(&self, seq: &DirectiveSequence, level: usize, w: &[Letter]) -> bool {
        debug_assert!(w.len() <= self.max_len);
        self.sets[seq.canonical(level)].contains(w)
    }
}

/// Factors of `σ(u)` of length at most `k` that start inside the image of
/// the first letter of `u`. Over a factorial set of words `u` these are all
/// the factors of length at most `k` of their images.
fn fresh_factors(sigma: &Substitution, u: &[Letter], k: usize, mut emit: impl FnMut(Vec<Letter>)) {
    let image = sigma.apply_symbols(u);
    let head = sigma.image_len(u[0]);
    for s in 0..head {
        for len in 1..=k.min(image.len() - s) {
            emit(image[s..s + len].to_vec());
        }
    }
}

/// Least fixpoint of `Yₙ = Aₙ ∪ fac_{≤k}(σₙ(Yₙ₊₁))` over the canonical
/// levels. Its components are `L(σ⁽ⁿ⁾) ∩ A^{≤k}`: a factor of length at
/// most `k` of some `σ_{n,m}(a)` lies in the image of a factor of length at
/// most `k` of `σ_{n+1,m}(a)`.
pub(crate) fn level_languages(seq: &DirectiveSequence, k: usize) -> LevelLanguages {
    let p = seq.prefix_len();
    let total = seq.canonical_levels();
    let mut sets: Vec<HashSet<Vec<Letter>>> = vec![HashSet::new(); total];
    let mut pending: Vec<(usize, Vec<Letter>)> = Vec::new();
    for r in p..total {
        for a in 0..seq.level(r).size() {
            sets[r].insert(vec![a]);
            pending.push((r, vec![a]));
        }
    }
    let mut derivations = 0usize;
    while let Some((r, u)) = pending.pop() {
        let target = if r == p { total - 1 } else { r - 1 };
        derivations += 1;
        fresh_factors(seq.term(target), &u, k, |w| {
            if sets[target].insert(w.clone()) {
                pending.push((target, w));
            }
        });
    }
    let mut log = vec![format!(
        "cycle levels {p}..{total}: fixpoint reached after propagating {derivations} words"
    )];
    for r in (0..p).rev() {
        let mut set: HashSet<Vec<Letter>> = (0..seq.level(r).size()).map(|a| vec![a]).collect();
        for u in &sets[r + 1] {
            fresh_factors(seq.term(r), u, k, |w| {
                set.insert(w);
            });
        }
        sets[r] = set;
        log.push(format!("prefix level {r}: derived from level {}", r + 1));
    }
    for (r, s) in sets.iter().enumerate() {
        log.push(format!("level {r}: {} words of length at most {k}", s.len()));
    }
    LevelLanguages { max_len: k, sets, log }
}

pub fn factor_language(seq: &DirectiveSequence, level: usize, max_len: usize) -> Result<FactorLanguage> {
    factor_language_with(seq, level, max_len, &LanguageOptions::default())
}

pub fn factor_language_with(
    seq: &DirectiveSequence,
    level: usize,
    max_len: usize,
    options: &LanguageOptions,
) -> Result<FactorLanguage> {
    if max_len == 0 {
        return Err(Error::InvalidArgument("language length must be positive".into()));
    }
    let primitive = seq.is_primitive();
    if !primitive && !options.allow_non_primitive {
        return Err(Error::NotPrimitive(seq.exact_primitivity_horizon()));
    }
    // Languages are computed from the tail so that level indices past the
    // prefix need no special casing.
    let tail = seq.tail(level);
    let langs = level_languages(&tail, max_len);
    let alphabet = Arc::clone(seq.level(level));
    let mut by_length: BTreeMap<usize, BTreeSet<Word>> = (1..=max_len).map(|j| (j, BTreeSet::new())).collect();
    for w in &langs.sets[0] {
        let word = Word::new(&alphabet, w.clone())?;
        by_length.entry(w.len()).or_default().insert(word);
    }
    let mut stabilization_log = langs.log;
    if !primitive {
        stabilization_log.push("sequence is not primitive: inner language only".into());
    }
    Ok(FactorLanguage {
        level,
        alphabet,
        by_length,
        exact_up_to: max_len,
        shift_language: primitive,
        stabilization_log,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EncodingDefect {
    pub level: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityDefect {
    pub level: usize,
    /// The two-letter word `ab` of `A_{n+1}`.
    pub pair: String,
    /// A factor of `σₙ(ab)` outside `L(σ⁽ⁿ⁾)`.
    pub factor: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceProperties {
    pub bounded: bool,
    /// Alphabet sizes of the cycle levels.
    pub alphabet_sizes: Vec<usize>,
    /// `liminf card(Aₙ)`.
    pub alphabet_rank: usize,
    pub primitive: bool,
    pub primitivity_horizon: usize,
    /// `m(n)` for each canonical level `n`.
    pub positivity_witnesses: Vec<Option<usize>>,
    pub recurrent: bool,
    pub recurrence_defect: Option<usize>,
    pub left_proper: Option<CutPattern>,
    pub right_proper: Option<CutPattern>,
    pub proper: Option<CutPattern>,
    pub encoding: bool,
    pub encoding_defect: Option<EncodingDefect>,
    pub stable: bool,
    pub stability_defect: Option<StabilityDefect>,
    pub without_bottleneck: bool,
}

pub fn classify_sequence(seq: &DirectiveSequence, horizon: usize) -> Result<SequenceProperties> {
    if horizon == 0 {
        return Err(Error::InvalidArgument("classification horizon must be positive".into()));
    }
    let p = seq.prefix_len();
    let total = seq.canonical_levels();
    let alphabet_sizes: Vec<usize> = (p..total).map(|n| seq.level(n).size()).collect();
    let alphabet_rank = *alphabet_sizes.iter().min().expect("nonempty cycle");
    let positivity_witnesses = seq.positivity_witnesses(horizon);
    let primitive = positivity_witnesses.iter().all(Option::is_some);

    let mut encoding_defect = None;
    for n in 0..total {
        let t = seq.term(n);
        let reason = if !t.is_letter_injective() {
            Some("two letters share an image".to_string())
        } else {
            let check = codes::is_code(&t.images())?;
            check.ambiguity.map(|amb| format!("images are not a code: {} has two factorizations", amb.word))
        };
        if let Some(reason) = reason {
            encoding_defect = Some(EncodingDefect { level: n, reason });
            break;
        }
    }

    let langs = level_languages(seq, 2);
    let mut stability_defect = None;
    'levels: for n in 0..total {
        let t = seq.term(n);
        let upper = t.domain();
        for a in 0..upper.size() {
            for b in 0..upper.size() {
                let image = t.apply_symbols(&[a, b]);
                for f in image.windows(2) {
                    if !langs.contains(seq, n, f) {
                        stability_defect = Some(StabilityDefect {
                            level: n,
                            pair: upper.render(&[a, b]),
                            factor: seq.level(n).render(f),
                        });
                        break 'levels;
                    }
                }
            }
        }
    }

    Ok(SequenceProperties {
        bounded: true,
        alphabet_rank,
        without_bottleneck: seq.levels().iter().all(|a| a.size() >= 2),
        alphabet_sizes,
        primitive,
        primitivity_horizon: horizon,
        positivity_witnesses,
        recurrent: seq.is_recurrent(),
        recurrence_defect: seq.recurrence_defect(),
        left_proper: seq.proper_cuts(horizon, Side::Left),
        right_proper: seq.proper_cuts(horizon, Side::Right),
        proper: seq.proper_cuts(horizon, Side::Both),
        encoding: encoding_defect.is_none(),
        encoding_defect,
        stable: stability_defect.is_none(),
        stability_defect,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Periodicity {
    /// `p(k) = p(k+1) = period` was observed at length `k`.
    Periodic { period: usize, length: usize },
    /// Complexity strictly increased up to the cap; a bounded certificate.
    AperiodicVerifiedUpTo { cap: usize, complexity: Vec<usize> },
}

/// Complexity probe at level 0: `p(k) = |L ∩ Aᵏ|` stays constant from some
/// `k ≤ cap` on exactly when the shift is periodic.
pub fn periodicity_probe(seq: &DirectiveSequence, cap: usize) -> Result<Periodicity> {
    periodicity_probe_at(seq, 0, cap)
}

pub fn periodicity_probe_at(seq: &DirectiveSequence, level: usize, cap: usize) -> Result<Periodicity> {
    if cap == 0 {
        return Err(Error::InvalidArgument("probe cap must be positive".into()));
    }
    let lang = factor_language(seq, level, cap + 1)?;
    let mut complexity: Vec<usize> = (1..=cap + 1).map(|k| lang.complexity(k)).collect();
    for k in 1..=cap {
        if complexity[k - 1] == complexity[k] {
            return Ok(Periodicity::Periodic {
                period: complexity[k - 1],
                length: k,
            });
        }
    }
    complexity.truncate(cap);
    Ok(Periodicity::AperiodicVerifiedUpTo { cap, complexity })
}

/// First returns to `u` in `L(σ)`, as the words separating consecutive
/// occurrences of `u`.
///
/// A length `K` settles the set once every word of `L ∩ Aᴷ` beginning with
/// `u` contains a second occurrence; `K` grows up to `horizon`.
pub fn return_words(seq: &DirectiveSequence, u: &Word, horizon: usize) -> Result<BTreeSet<Word>> {
    let alphabet = seq.level(0);
    if u.alphabet() != alphabet {
        return Err(Error::AlphabetMismatch("word is not over the level-0 alphabet".into()));
    }
    if u.is_empty() {
        return Err(Error::EmptyWord);
    }
    if !seq.is_primitive() {
        return Err(Error::NotPrimitive(seq.exact_primitivity_horizon()));
    }
    let needed = u.len() + 1;
    if horizon < needed {
        return Err(Error::HorizonInsufficient {
            what: "return words".into(),
            needed,
            available: horizon,
        });
    }
    let langs = level_languages(seq, horizon);
    let level0 = &langs.sets[0];
    if u.len() > horizon || !level0.contains(u.symbols()) {
        return Err(Error::NotInLanguage(u.to_string()));
    }
    let pattern = u.symbols();
    for k in needed..=horizon {
        let mut returns = BTreeSet::new();
        let mut complete = true;
        for f in level0.iter().filter(|f| f.len() == k && f.starts_with(pattern)) {
            match symbol_occurrences(f, pattern).into_iter().find(|&j| j > 0) {
                Some(j) => {
                    returns.insert(Word::new(alphabet, f[..j].to_vec())?);
                }
                None => {
                    complete = false;
                    break;
                }
            }
        }
        if complete {
            return Ok(returns);
        }
    }
    Err(Error::HorizonInsufficient {
        what: "return words".into(),
        needed: horizon + 1,
        available: horizon,
    })
}
