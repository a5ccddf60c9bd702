//! Homomorphisms of free semigroups and their combinatorial properties.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{Alphabet, Letter, Word};

/// A free-semigroup homomorphism `A⁺ → B⁺` given by nonempty letter images.
#[derive(Clone)]
pub struct Substitution {
    domain: Arc<Alphabet>,
    codomain: Arc<Alphabet>,
    images: Vec<Vec<Letter>>,
}

impl Substitution {
    pub fn new(domain: &Arc<Alphabet>, codomain: &Arc<Alphabet>, images: Vec<Word>) -> Result<Self> {
        if images.len() != domain.size() {
            return Err(Error::InvalidArgument(format!(
                "expected {} images, got {}",
                domain.size(),
                images.len()
            )));
        }
        let mut raw = Vec::with_capacity(images.len());
        for (letter, image) in images.into_iter().enumerate() {
            if image.alphabet() != codomain {
                return Err(Error::AlphabetMismatch(format!(
                    "image of `{}` is not over the codomain",
                    domain.name(letter)
                )));
            }
            if image.is_empty() {
                return Err(Error::EmptyWord);
            }
            raw.push(image.into_symbols());
        }
        Ok(Substitution {
            domain: Arc::clone(domain),
            codomain: Arc::clone(codomain),
            images: raw,
        })
    }

    pub fn from_symbols(
        domain: &Arc<Alphabet>,
        codomain: &Arc<Alphabet>,
        images: Vec<Vec<Letter>>,
    ) -> Result<Self> {
        let words = images
            .into_iter()
            .map(|s| Word::new(codomain, s))
            .collect::<Result<Vec<_>>>()?;
        Substitution::new(domain, codomain, words)
    }

    /// Endomorphism of `alphabet` from textual images listed in letter order.
    pub fn endomorphism(alphabet: &Arc<Alphabet>, images: &[&str]) -> Result<Self> {
        Substitution::parse(alphabet, alphabet, images)
    }

    pub fn parse(domain: &Arc<Alphabet>, codomain: &Arc<Alphabet>, images: &[&str]) -> Result<Self> {
        let words = images
            .iter()
            .map(|text| Word::parse(codomain, text))
            .collect::<Result<Vec<_>>>()?;
        Substitution::new(domain, codomain, words)
    }

    pub fn identity(alphabet: &Arc<Alphabet>) -> Self {
        Substitution {
            domain: Arc::clone(alphabet),
            codomain: Arc::clone(alphabet),
            images: (0..alphabet.size()).map(|a| vec![a]).collect(),
        }
    }

    pub fn domain(&self) -> &Arc<Alphabet> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<Alphabet> {
        &self.codomain
    }

    pub fn is_endomorphism(&self) -> bool {
        self.domain == self.codomain
    }

    pub fn image(&self, letter: Letter) -> Word {
        Word::new(&self.codomain, self.images[letter].clone()).expect("images are valid")
    }

    pub fn image_symbols(&self, letter: Letter) -> &[Letter] {
        &self.images[letter]
    }

    pub fn images(&self) -> Vec<Word> {
        (0..self.domain.size()).map(|a| self.image(a)).collect()
    }

    pub fn image_len(&self, letter: Letter) -> usize {
        self.images[letter].len()
    }

    pub fn min_image_len(&self) -> usize {
        self.images.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_image_len(&self) -> usize {
        self.images.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        if w.is_empty() {
            return Err(Error::EmptyWord);
        }
        if w.alphabet() != &self.domain {
            return Err(Error::AlphabetMismatch(
                "word is not over the domain of the substitution".into(),
            ));
        }
        Ok(Word::new(&self.codomain, self.apply_symbols(w.symbols())).expect("valid image"))
    }

    pub(crate) fn apply_symbols(&self, w: &[Letter]) -> Vec<Letter> {
        let mut out = Vec::with_capacity(w.iter().map(|&a| self.images[a].len()).sum());
        for &a in w {
            out.extend_from_slice(&self.images[a]);
        }
        out
    }

    /// `self ∘ inner`: first apply `inner`, then `self`.
    pub fn compose(&self, inner: &Substitution) -> Result<Substitution> {
        if inner.codomain != self.domain {
            return Err(Error::AlphabetMismatch(
                "codomain of the inner substitution differs from the outer domain".into(),
            ));
        }
        Ok(Substitution {
            domain: Arc::clone(&inner.domain),
            codomain: Arc::clone(&self.codomain),
            images: inner.images.iter().map(|w| self.apply_symbols(w)).collect(),
        })
    }

    /// `φᵏ` for an endomorphism; `φ⁰` is the identity.
    pub fn power(&self, k: usize) -> Result<Substitution> {
        if !self.is_endomorphism() {
            return Err(Error::NotEndomorphism);
        }
        let mut acc = Substitution::identity(&self.domain);
        for _ in 0..k {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    pub fn first_letters(&self) -> Vec<Letter> {
        self.images.iter().map(|w| w[0]).collect()
    }

    pub fn last_letters(&self) -> Vec<Letter> {
        self.images.iter().map(|w| w[w.len() - 1]).collect()
    }

    pub fn is_expansive(&self) -> bool {
        self.images.iter().all(|w| w.len() >= 2)
    }

    /// Expansive, and every codomain letter occurs in every image.
    pub fn is_positive(&self) -> bool {
        self.is_expansive()
            && self.images.iter().all(|w| {
                let mut seen = vec![false; self.codomain.size()];
                for &b in w {
                    seen[b] = true;
                }
                seen.into_iter().all(|s| s)
            })
    }

    pub fn is_letter_injective(&self) -> bool {
        let mut sorted: Vec<&Vec<Letter>> = self.images.iter().collect();
        sorted.sort();
        sorted.windows(2).all(|p| p[0] != p[1])
    }

    pub fn properties(&self) -> SubstitutionProperties {
        let firsts = self.first_letters();
        let lasts = self.last_letters();
        let common = |letters: &[Letter]| {
            letters
                .iter()
                .all(|&b| b == letters[0])
                .then(|| letters[0])
        };
        let covers = |letters: &[Letter]| {
            let mut seen = vec![false; self.codomain.size()];
            for &b in letters {
                seen[b] = true;
            }
            seen.into_iter().all(|s| s)
        };
        let left = common(&firsts).map(|b| self.codomain.name(b).to_string());
        let right = common(&lasts).map(|b| self.codomain.name(b).to_string());
        SubstitutionProperties {
            expansive: self.is_expansive(),
            positive: self.is_positive(),
            left_proper: left.is_some(),
            left_proper_letter: left.clone(),
            right_proper: right.is_some(),
            right_proper_letter: right.clone(),
            proper: left.is_some() && right.is_some(),
            left_permutative: covers(&firsts),
            right_permutative: covers(&lasts),
            letter_injective: self.is_letter_injective(),
        }
    }

    /// Least `k ≤ (n−1)²+1` with `φᵏ` positive.
    ///
    /// Works on saturating letter counts, so the images of the powers are
    /// never expanded.
    pub fn primitivity_witness(&self) -> Result<Option<usize>> {
        if !self.is_endomorphism() {
            return Err(Error::NotEndomorphism);
        }
        let n = self.domain.size();
        let bound = (n - 1) * (n - 1) + 1;
        let step = Incidence::of(self);
        let mut acc = step.clone();
        for k in 1..=bound {
            if acc.is_positive() {
                return Ok(Some(k));
            }
            acc = acc.then(&step);
        }
        Ok(None)
    }

    /// First and last letters of `φ^ω(a)` for every letter `a`, computed as
    /// the idempotent powers of the first-letter and last-letter maps.
    pub fn omega_letters(&self) -> Result<Vec<(Letter, Letter)>> {
        if !self.is_endomorphism() {
            return Err(Error::NotEndomorphism);
        }
        let first = omega_of_map(&self.first_letters());
        let last = omega_of_map(&self.last_letters());
        Ok(first.into_iter().zip(last).collect())
    }
}

/// Idempotent power of a self-map of `{0, …, n−1}`.
pub(crate) fn omega_of_map(map: &[usize]) -> Vec<usize> {
    (0..map.len())
        .map(|x| {
            // Walk to the cycle, then pick the cycle point reached after a
            // multiple of the cycle length that is at least the tail length.
            let mut seen = vec![usize::MAX; map.len()];
            let mut path = Vec::new();
            let mut cur = x;
            while seen[cur] == usize::MAX {
                seen[cur] = path.len();
                path.push(cur);
                cur = map[cur];
            }
            let tail = seen[cur];
            let period = path.len() - tail;
            let steps = tail.div_ceil(period) * period;
            let mut y = x;
            for _ in 0..steps {
                y = map[y];
            }
            y
        })
        .collect()
}

/// Saturating letter-count matrix of a homomorphism: `counts[a][b] = |φ(a)|_b`.
///
/// Enough to decide positivity of long composites without expanding images.
#[derive(Clone, Debug)]
pub(crate) struct Incidence {
    pub(crate) target_size: usize,
    pub(crate) counts: Vec<Vec<u64>>,
}

impl Incidence {
    pub(crate) fn of(s: &Substitution) -> Self {
        let target_size = s.codomain.size();
        let counts = s
            .images
            .iter()
            .map(|w| {
                let mut row = vec![0u64; target_size];
                for &b in w {
                    row[b] += 1;
                }
                row
            })
            .collect();
        Incidence { target_size, counts }
    }

    /// Incidence of `self ∘ inner`, where `inner` is applied first.
    pub(crate) fn then(&self, inner: &Incidence) -> Incidence {
        let counts = inner
            .counts
            .iter()
            .map(|row| {
                let mut out = vec![0u64; self.target_size];
                for (mid, &k) in row.iter().enumerate().filter(|(_, &k)| k > 0) {
                    for (b, &c) in self.counts[mid].iter().enumerate() {
                        out[b] = out[b].saturating_add(k.saturating_mul(c));
                    }
                }
                out
            })
            .collect();
        Incidence {
            target_size: self.target_size,
            counts,
        }
    }

    pub(crate) fn lengths(&self) -> Vec<u64> {
        self.counts
            .iter()
            .map(|row| row.iter().fold(0u64, |acc, &c| acc.saturating_add(c)))
            .collect()
    }

    pub(crate) fn is_positive(&self) -> bool {
        self.lengths().iter().all(|&l| l >= 2) && self.counts.iter().all(|row| row.iter().all(|&c| c > 0))
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.domain.size())
            .map(|a| format!("{} ↦ {}", self.domain.name(a), self.codomain.render(&self.images[a])))
            .collect();
        f.write_str(&parts.join(", "))
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Substitution({self})")
    }
}

impl PartialEq for Substitution {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain && self.codomain == other.codomain && self.images == other.images
    }
}

impl Eq for Substitution {}

impl Serialize for Substitution {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(self.domain.size()))?;
        for a in 0..self.domain.size() {
            map.serialize_entry(self.domain.name(a), &self.codomain.render(&self.images[a]))?;
        }
        map.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubstitutionProperties {
    pub expansive: bool,
    pub positive: bool,
    pub left_proper: bool,
    /// The common first letter, when left proper.
    pub left_proper_letter: Option<String>,
    pub right_proper: bool,
    pub right_proper_letter: Option<String>,
    pub proper: bool,
    pub left_permutative: bool,
    pub right_permutative: bool,
    pub letter_injective: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ab() -> Arc<Alphabet> {
        Alphabet::from_chars("ab").unwrap()
    }

    fn thue_morse(a: &Arc<Alphabet>) -> Substitution {
        Substitution::endomorphism(a, &["ab", "ba"]).unwrap()
    }

    fn example_sigma() -> Substitution {
        let a = Alphabet::from_chars("abc").unwrap();
        Substitution::endomorphism(&a, &["ac", "bcb", "ba"]).unwrap()
    }

    #[test]
    fn apply_and_compose() {
        let a = ab();
        let tau = thue_morse(&a);
        let w = Word::parse(&a, "ab").unwrap();
        assert_eq!(tau.apply(&w).unwrap().to_string(), "abba");
        assert_eq!(tau.compose(&tau).unwrap().image(0).to_string(), "abba");
        let id = Substitution::identity(&a);
        assert_eq!(id.apply(&w).unwrap(), w);
        assert_eq!(tau.compose(&id).unwrap(), tau);
        assert!(tau.apply(&Word::empty(&a)).is_err());

        let sigma = example_sigma();
        let x = Word::parse(sigma.domain(), "a").unwrap();
        let twice = sigma.apply(&sigma.apply(&x).unwrap()).unwrap();
        assert_eq!(twice.to_string(), "acba");
        assert_eq!(sigma.compose(&sigma).unwrap().image(0).to_string(), "acba");
    }

    #[test]
    fn compose_rejects_mismatched_alphabets() {
        let tau = thue_morse(&ab());
        let other = thue_morse(&ab());
        assert!(tau.compose(&other).is_err());
    }

    #[test]
    fn property_flags() {
        let props = thue_morse(&ab()).properties();
        assert!(props.left_permutative && props.right_permutative);
        assert!(!props.left_proper && !props.right_proper && !props.proper);
        assert!(props.positive && props.expansive && props.letter_injective);

        let a3 = Alphabet::indexed(3).unwrap();
        let sigma_prime = Substitution::endomorphism(&a3, &["a1a2", "a1a2a2", "a1a3a2"]).unwrap();
        let props = sigma_prime.properties();
        assert!(props.proper);
        assert_eq!(props.left_proper_letter.as_deref(), Some("a1"));
        assert_eq!(props.right_proper_letter.as_deref(), Some("a2"));

        let single = Alphabet::from_chars("a").unwrap();
        let trivial = Substitution::endomorphism(&single, &["a"]).unwrap();
        assert!(!trivial.properties().expansive);
        assert!(!trivial.properties().positive);
    }

    #[test]
    fn primitivity_witnesses() {
        // Thue–Morse is already positive.
        assert_eq!(thue_morse(&ab()).primitivity_witness().unwrap(), Some(1));
        let a = ab();
        let fib = Substitution::endomorphism(&a, &["ab", "a"]).unwrap();
        assert_eq!(fib.primitivity_witness().unwrap(), Some(2));
        let perm = Substitution::endomorphism(&a, &["a", "b"]).unwrap();
        assert_eq!(perm.primitivity_witness().unwrap(), None);
        let single = Alphabet::from_chars("a").unwrap();
        let doubling = Substitution::endomorphism(&single, &["aa"]).unwrap();
        assert_eq!(doubling.primitivity_witness().unwrap(), Some(1));
    }

    #[test]
    fn omega_letters_of_the_bifix_example() {
        let sigma = example_sigma();
        let got = sigma.omega_letters().unwrap();
        assert_eq!(got, vec![(0, 0), (1, 1), (1, 2)]);
    }

    #[test]
    fn omega_of_map_is_idempotent() {
        let map = vec![1, 2, 0, 0, 3];
        let omega = omega_of_map(&map);
        let twice: Vec<usize> = omega.iter().map(|&x| omega[x]).collect();
        assert_eq!(omega, twice);
    }

    fn arb_endo(n: usize) -> impl Strategy<Value = Vec<Vec<usize>>> {
        proptest::collection::vec(proptest::collection::vec(0..n, 1..4), n)
    }

    proptest! {
        #[test]
        fn composition_is_associative_and_acts_correctly(
            f in arb_endo(3), g in arb_endo(3), h in arb_endo(3),
            w in proptest::collection::vec(0usize..3, 1..6),
        ) {
            let a = Alphabet::from_chars("abc").unwrap();
            let f = Substitution::from_symbols(&a, &a, f).unwrap();
            let g = Substitution::from_symbols(&a, &a, g).unwrap();
            let h = Substitution::from_symbols(&a, &a, h).unwrap();
            let left = f.compose(&g).unwrap().compose(&h).unwrap();
            let right = f.compose(&g.compose(&h).unwrap()).unwrap();
            prop_assert_eq!(&left, &right);
            let word = Word::new(&a, w).unwrap();
            prop_assert_eq!(
                f.compose(&g).unwrap().apply(&word).unwrap(),
                f.apply(&g.apply(&word).unwrap()).unwrap()
            );
        }

        #[test]
        fn positive_then_expansive_is_positive(f in arb_endo(3), g in arb_endo(3)) {
            let a = Alphabet::from_chars("abc").unwrap();
            let f = Substitution::from_symbols(&a, &a, f).unwrap();
            let g = Substitution::from_symbols(&a, &a, g).unwrap();
            if f.is_positive() && g.is_expansive() {
                prop_assert!(f.compose(&g).unwrap().is_positive());
            }
        }

        #[test]
        fn primitivity_witness_is_least(f in arb_endo(3)) {
            let a = Alphabet::from_chars("abc").unwrap();
            let f = Substitution::from_symbols(&a, &a, f).unwrap();
            if let Some(k) = f.primitivity_witness().unwrap() {
                prop_assert!(f.power(k).unwrap().is_positive());
                if k > 1 {
                    prop_assert!(!f.power(k - 1).unwrap().is_positive());
                }
            } else {
                for k in 1..=5 {
                    prop_assert!(!f.power(k).unwrap().is_positive());
                }
            }
        }
    }
}
