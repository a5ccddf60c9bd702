//! Shared corpus and brute-force oracles for the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use sadic::directive::DirectiveSequence;
use sadic::matrices::{family_substitution, Family};
use sadic::semigroup::FiniteSemigroup;
use sadic::words::factors;
use sadic::{Alphabet, Substitution, Word};

pub fn ab() -> Arc<Alphabet> {
    static AB: OnceLock<Arc<Alphabet>> = OnceLock::new();
    Arc::clone(AB.get_or_init(|| Alphabet::from_chars("ab").unwrap()))
}

pub fn abc() -> Arc<Alphabet> {
    static ABC: OnceLock<Arc<Alphabet>> = OnceLock::new();
    Arc::clone(ABC.get_or_init(|| Alphabet::from_chars("abc").unwrap()))
}

pub fn tau() -> Substitution {
    Substitution::endomorphism(&ab(), &["ab", "ba"]).unwrap()
}

pub fn fibonacci() -> Substitution {
    Substitution::endomorphism(&ab(), &["ab", "a"]).unwrap()
}

pub fn collapsing() -> Substitution {
    Substitution::endomorphism(&ab(), &["ab", "ab"]).unwrap()
}

/// `a ↦ ac, b ↦ bcb, c ↦ ba`.
pub fn bifix_sigma() -> Substitution {
    Substitution::endomorphism(&abc(), &["ac", "bcb", "ba"]).unwrap()
}

pub fn constant(sigma: Substitution) -> DirectiveSequence {
    DirectiveSequence::constant(sigma).unwrap()
}

/// Named endomorphisms used across the suites.
pub fn endomorphisms() -> Vec<(&'static str, Substitution)> {
    let a = ab();
    let t = abc();
    vec![
        ("thue_morse", tau()),
        ("fibonacci", fibonacci()),
        ("collapsing", collapsing()),
        ("period_doubling", Substitution::endomorphism(&a, &["ab", "aa"]).unwrap()),
        ("sigma2", family_substitution(Family::Sigma, 2).unwrap()),
        ("sigma3", family_substitution(Family::Sigma, 3).unwrap()),
        ("sigma_prime2", family_substitution(Family::SigmaPrime, 2).unwrap()),
        ("sigma_prime3", family_substitution(Family::SigmaPrime, 3).unwrap()),
        ("bifix", bifix_sigma()),
        ("tribonacci", Substitution::endomorphism(&t, &["ab", "ac", "a"]).unwrap()),
    ]
}

/// Primitive directive sequences, constant and not.
pub fn sequences() -> Vec<(&'static str, DirectiveSequence)> {
    // σ'₃ keeps a₃ out of every image but its own, so it is not primitive.
    let mut out: Vec<(&'static str, DirectiveSequence)> = endomorphisms()
        .into_iter()
        .filter(|(name, _)| *name != "sigma_prime3")
        .map(|(name, s)| (name, constant(s)))
        .collect();
    out.push((
        "alternating",
        DirectiveSequence::periodic(vec![tau(), fibonacci()]).unwrap(),
    ));
    let xyz = Alphabet::from_chars("xyz").unwrap();
    let head = Substitution::parse(&ab(), &xyz, &["xy", "zx"]).unwrap();
    out.push(("with_prefix", DirectiveSequence::new(vec![head], vec![tau()]).unwrap()));
    out
}

pub fn sequence(name: &str) -> DirectiveSequence {
    sequences()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, s)| s)
        .unwrap_or_else(|| panic!("no corpus sequence {name}"))
}

/// Codes from the corpus images plus a few hand-picked sets.
pub fn codes() -> Vec<Vec<Word>> {
    let a = ab();
    let t = abc();
    let words = |alph: &Arc<Alphabet>, ws: &[&str]| -> Vec<Word> {
        ws.iter().map(|w| Word::parse(alph, w).unwrap()).collect()
    };
    let mut out: Vec<Vec<Word>> = endomorphisms()
        .into_iter()
        .filter(|(_, s)| s.is_letter_injective())
        .map(|(_, s)| s.images())
        .collect();
    out.push(words(&a, &["aa"]));
    out.push(words(&a, &["a", "ab", "bb"]));
    out.push(words(&a, &["ab", "ba"]));
    out.push(words(&a, &["aab", "ab", "b"]));
    out.push(words(&a, &["abab", "b"]));
    out.push(words(&a, &["aa", "b"]));
    out.push(words(&a, &["aab", "abb"]));
    out.push(words(&t, &["ac", "bcb", "ba"]));
    out.push(words(&t, &["ab", "c", "ca"]));
    out
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// A random endomorphism on `n` letters with images of length `1..=max_len`.
pub fn random_endo(rng: &mut StdRng, n: usize, max_len: usize) -> Substitution {
    let alphabet = Alphabet::indexed(n).unwrap();
    let images = (0..n)
        .map(|_| {
            let len = rng.gen_range(1..=max_len);
            (0..len).map(|_| rng.gen_range(0..n)).collect()
        })
        .collect();
    Substitution::from_symbols(&alphabet, &alphabet, images).unwrap()
}

/// `⋃ₘ ⋃ₐ fac_{≤k}(σ_{n,m}(a))` for `m` up to a depth where the images are
/// long and the union has not changed for two full cycles.
pub fn language_oracle(seq: &DirectiveSequence, level: usize, k: usize) -> BTreeSet<Word> {
    let alphabet = Arc::clone(seq.level(level));
    let mut found: BTreeSet<Word> = BTreeSet::new();
    for a in 0..alphabet.size() {
        found.insert(Word::letter(&alphabet, a).unwrap());
    }
    let settle = 2 * seq.cycle_len() + 1;
    let mut unchanged = 0;
    let mut m = level;
    loop {
        m += 1;
        let composite = seq.compose_range(level, m).unwrap();
        let before = found.len();
        for image in composite.images() {
            for len in 1..=k.min(image.len()) {
                found.extend(factors(&image, len).unwrap());
            }
        }
        unchanged = if found.len() == before { unchanged + 1 } else { 0 };
        if composite.min_image_len() >= 4 * k && unchanged >= settle {
            return found;
        }
        assert!(composite.max_image_len() < 2_000_000, "oracle depth exhausted");
    }
}

/// Ideal-comparison oracle: `x R y` iff `xS¹ = yS¹`, and dually.
pub struct IdealOracle {
    right: Vec<BTreeSet<usize>>,
    left: Vec<BTreeSet<usize>>,
    two_sided: Vec<BTreeSet<usize>>,
}

impl IdealOracle {
    pub fn new(s: &FiniteSemigroup) -> Self {
        let size = s.size();
        let right: Vec<BTreeSet<usize>> = (0..size)
            .map(|x| std::iter::once(x).chain((0..size).map(|y| s.multiply(x, y))).collect())
            .collect();
        let left: Vec<BTreeSet<usize>> = (0..size)
            .map(|x| std::iter::once(x).chain((0..size).map(|y| s.multiply(y, x))).collect())
            .collect();
        let two_sided = (0..size)
            .map(|x| {
                let mut ideal = left[x].clone();
                for &y in &left[x] {
                    ideal.extend(right[y].iter().copied());
                }
                ideal
            })
            .collect();
        IdealOracle { right, left, two_sided }
    }

    pub fn r(&self, x: usize, y: usize) -> bool {
        self.right[x] == self.right[y]
    }

    pub fn l(&self, x: usize, y: usize) -> bool {
        self.left[x] == self.left[y]
    }

    pub fn j(&self, x: usize, y: usize) -> bool {
        self.two_sided[x] == self.two_sided[y]
    }
}

/// Transformation semigroup generated by maps of `{0, …, points−1}`,
/// composed left to right.
pub fn transformation_semigroup(maps: Vec<Vec<usize>>) -> FiniteSemigroup {
    let names = (0..maps.len()).map(|i| format!("t{i}")).collect();
    let (s, _) = FiniteSemigroup::closure(
        maps,
        names,
        |x: &Vec<usize>, y: &Vec<usize>| x.iter().map(|&p| y[p]).collect(),
        10_000,
    )
    .unwrap();
    s
}
