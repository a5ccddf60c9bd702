//! Alphabets, finite words and factor combinatorics.
//!
//! Letters are interned as indices into an [`Alphabet`]; the display names
//! live only in the alphabet. Every alphabet carries a process-unique
//! identity, so two alphabets with the same spelling are still different
//! alphabets and their words never compare equal.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Index of a letter inside its alphabet.
pub type Letter = usize;

static NEXT_ALPHABET_ID: AtomicU64 = AtomicU64::new(1);

/// An ordered finite alphabet. Letter `i` is the `i`-th name given at creation.
#[derive(Debug)]
pub struct Alphabet {
    id: u64,
    letters: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(letters: I) -> Result<Arc<Alphabet>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let letters: Vec<String> = letters.into_iter().map(Into::into).collect();
        if letters.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        for (i, name) in letters.iter().enumerate() {
            if name.is_empty() || name.chars().any(char::is_whitespace) {
                return Err(Error::InvalidArgument(format!(
                    "letter name `{name}` must be nonempty and contain no whitespace"
                )));
            }
            if letters[..i].contains(name) {
                return Err(Error::DuplicateLetter(name.clone()));
            }
        }
        Ok(Arc::new(Alphabet {
            id: NEXT_ALPHABET_ID.fetch_add(1, AtomicOrdering::Relaxed),
            letters,
        }))
    }

    /// Alphabet whose letters are the characters of `spelling`, e.g. `"abc"`.
    pub fn from_chars(spelling: &str) -> Result<Arc<Alphabet>> {
        Alphabet::new(spelling.chars().map(String::from))
    }

    /// The ordered alphabet `a1, …, an`.
    pub fn indexed(n: usize) -> Result<Arc<Alphabet>> {
        Alphabet::new((1..=n).map(|i| format!("a{i}")))
    }

    pub fn size(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn name(&self, letter: Letter) -> &str {
        &self.letters[letter]
    }

    pub fn index_of(&self, name: &str) -> Option<Letter> {
        self.letters.iter().position(|l| l == name)
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    /// True when the two alphabets list the same names in the same order.
    pub fn same_spelling(&self, other: &Alphabet) -> bool {
        self.letters == other.letters
    }

    /// Tokenize `text` into letters. Whitespace separates tokens; inside a
    /// token letters are matched greedily by longest name.
    pub fn parse_symbols(&self, text: &str) -> Result<Vec<Letter>> {
        let mut out = Vec::new();
        for token in text.split_whitespace() {
            let mut rest = token;
            while !rest.is_empty() {
                let best = self
                    .letters
                    .iter()
                    .enumerate()
                    .filter(|(_, name)| rest.starts_with(name.as_str()))
                    .max_by_key(|(_, name)| name.len());
                match best {
                    Some((index, name)) => {
                        out.push(index);
                        rest = &rest[name.len()..];
                    }
                    None => return Err(Error::UnknownLetter(rest.to_string())),
                }
            }
        }
        Ok(out)
    }

    pub fn render(&self, symbols: &[Letter]) -> String {
        symbols.iter().map(|&s| self.letters[s].as_str()).collect()
    }

    /// All words of length `k` over this alphabet, in lexicographic order of
    /// letter indices.
    pub fn words_of_length(&self, k: usize) -> Vec<Vec<Letter>> {
        let n = self.size();
        let total = n.checked_pow(k as u32).expect("too many words");
        (0..total)
            .map(|mut code| {
                let mut w = vec![0; k];
                for slot in w.iter_mut().rev() {
                    *slot = code % n;
                    code /= n;
                }
                w
            })
            .collect()
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for Alphabet {}

impl Serialize for Alphabet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.letters.serialize(serializer)
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.letters.join(", "))
    }
}

/// A finite word over an alphabet. The empty word is representable, but
/// free-semigroup operations reject it.
#[derive(Clone)]
pub struct Word {
    alphabet: Arc<Alphabet>,
    symbols: Vec<Letter>,
}

impl Word {
    pub fn new(alphabet: &Arc<Alphabet>, symbols: Vec<Letter>) -> Result<Word> {
        if let Some(&index) = symbols.iter().find(|&&s| s >= alphabet.size()) {
            return Err(Error::LetterOutOfRange {
                index,
                size: alphabet.size(),
            });
        }
        Ok(Word {
            alphabet: Arc::clone(alphabet),
            symbols,
        })
    }

    pub fn empty(alphabet: &Arc<Alphabet>) -> Word {
        Word {
            alphabet: Arc::clone(alphabet),
            symbols: Vec::new(),
        }
    }

    pub fn parse(alphabet: &Arc<Alphabet>, text: &str) -> Result<Word> {
        let symbols = alphabet.parse_symbols(text)?;
        Ok(Word {
            alphabet: Arc::clone(alphabet),
            symbols,
        })
    }

    pub fn letter(alphabet: &Arc<Alphabet>, letter: Letter) -> Result<Word> {
        Word::new(alphabet, vec![letter])
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn symbols(&self) -> &[Letter] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<Letter> {
        self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.symbols.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.symbols.last().copied()
    }

    /// The factor `w[i, j)`.
    pub fn slice(&self, i: usize, j: usize) -> Word {
        Word {
            alphabet: Arc::clone(&self.alphabet),
            symbols: self.symbols[i..j].to_vec(),
        }
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch(
                "cannot concatenate words over different alphabets".into(),
            ));
        }
        let mut symbols = self.symbols.clone();
        symbols.extend_from_slice(&other.symbols);
        Ok(Word {
            alphabet: Arc::clone(&self.alphabet),
            symbols,
        })
    }

    pub fn pow(&self, k: usize) -> Word {
        Word {
            alphabet: Arc::clone(&self.alphabet),
            symbols: self.symbols.repeat(k),
        }
    }

    /// `|w|_a`.
    pub fn count_letter(&self, letter: Letter) -> usize {
        self.symbols.iter().filter(|&&s| s == letter).count()
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        self.alphabet == other.alphabet && other.symbols.starts_with(&self.symbols)
    }

    pub fn is_suffix_of(&self, other: &Word) -> bool {
        self.alphabet == other.alphabet && other.symbols.ends_with(&self.symbols)
    }
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet.id == other.alphabet.id && self.symbols == other.symbols
    }
}

impl Eq for Word {}

impl Hash for Word {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.alphabet.id.hash(state);
        self.symbols.hash(state);
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Words over the same alphabet are ordered by length, then
/// lexicographically on letter indices.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.alphabet
            .id
            .cmp(&other.alphabet.id)
            .then(self.symbols.len().cmp(&other.symbols.len()))
            .then_with(|| self.symbols.cmp(&other.symbols))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.symbols.is_empty() {
            return f.write_str("ε");
        }
        f.write_str(&self.alphabet.render(&self.symbols))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// `fac_k(w)`: the set of factors of length `k`.
pub fn factors(w: &Word, k: usize) -> Result<BTreeSet<Word>> {
    if k == 0 {
        return Err(Error::InvalidArgument("factor length must be positive".into()));
    }
    Ok(symbol_factors(&w.symbols, k)
        .into_iter()
        .map(|symbols| Word {
            alphabet: Arc::clone(&w.alphabet),
            symbols,
        })
        .collect())
}

pub(crate) fn symbol_factors(w: &[Letter], k: usize) -> BTreeSet<Vec<Letter>> {
    if k == 0 || k > w.len() {
        return BTreeSet::new();
    }
    w.windows(k).map(<[Letter]>::to_vec).collect()
}

/// Ascending start positions of the occurrences of `u` in `w`.
pub fn occurrences(w: &Word, u: &Word) -> Result<Vec<usize>> {
    if u.is_empty() {
        return Err(Error::EmptyWord);
    }
    if w.alphabet != u.alphabet {
        return Err(Error::AlphabetMismatch(
            "pattern and text use different alphabets".into(),
        ));
    }
    Ok(symbol_occurrences(&w.symbols, &u.symbols))
}

/// Knuth–Morris–Pratt scan.
pub(crate) fn symbol_occurrences(text: &[Letter], pattern: &[Letter]) -> Vec<usize> {
    let m = pattern.len();
    if m == 0 || m > text.len() {
        return Vec::new();
    }
    let mut border = vec![0usize; m];
    let mut k = 0;
    for i in 1..m {
        while k > 0 && pattern[i] != pattern[k] {
            k = border[k - 1];
        }
        if pattern[i] == pattern[k] {
            k += 1;
        }
        border[i] = k;
    }
    let mut found = Vec::new();
    let mut q = 0;
    for (i, &c) in text.iter().enumerate() {
        while q > 0 && c != pattern[q] {
            q = border[q - 1];
        }
        if c == pattern[q] {
            q += 1;
        }
        if q == m {
            found.push(i + 1 - m);
            q = border[q - 1];
        }
    }
    found
}

/// Number of occurrences `|w|_u`.
pub(crate) fn count_occurrences(text: &[Letter], pattern: &[Letter]) -> usize {
    symbol_occurrences(text, pattern).len()
}
