//! Plain-text substitution (`.sub`) and sequence (`.seq`) files.
//!
//! ```text
//! # Thue–Morse
//! alphabet: a b
//! a -> ab
//! b -> ba
//! ```
//!
//! A substitution between different alphabets adds `codomain: x y z`; the
//! `alphabet:` line is then the domain. A sequence file lists substitution
//! files relative to itself:
//!
//! ```text
//! levels: x y z | a b
//! prefix: head.sub
//! cycle: tm.sub
//! ```
//!
//! `levels:` is optional; when given it must spell the alphabets of the
//! canonical levels in order.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use sadic::directive::DirectiveSequence;
use sadic::{Alphabet, Substitution};

use crate::CliError;

/// Alphabets keyed by spelling, so that files naming the same letters share
/// one alphabet.
#[derive(Default)]
pub struct Interner {
    alphabets: HashMap<Vec<String>, Arc<Alphabet>>,
}

impl Interner {
    pub fn alphabet(&mut self, letters: Vec<String>) -> sadic::Result<Arc<Alphabet>> {
        if let Some(a) = self.alphabets.get(&letters) {
            return Ok(Arc::clone(a));
        }
        let a = Alphabet::new(letters.clone())?;
        self.alphabets.insert(letters, Arc::clone(&a));
        Ok(a)
    }
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> CliError {
    CliError::Parse {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Non-blank lines with comments stripped, numbered from 1.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn letters(spec: &str) -> Vec<String> {
    spec.split_whitespace().map(str::to_string).collect()
}

pub fn parse_substitution(path: &Path, text: &str, interner: &mut Interner) -> Result<Substitution, CliError> {
    let mut domain: Option<(usize, Vec<String>)> = None;
    let mut codomain: Option<Vec<String>> = None;
    let mut rules: Vec<(usize, String, String)> = Vec::new();
    for (n, line) in lines(text) {
        if let Some(rest) = line.strip_prefix("alphabet:") {
            domain = Some((n, letters(rest)));
        } else if let Some(rest) = line.strip_prefix("codomain:") {
            codomain = Some(letters(rest));
        } else if let Some((lhs, rhs)) = line.split_once("->") {
            rules.push((n, lhs.trim().to_string(), rhs.trim().to_string()));
        } else {
            return Err(parse_error(path, n, format!("expected `alphabet:`, `codomain:` or `letter -> image`, got `{line}`")));
        }
    }
    let (alpha_line, domain_letters) = domain.ok_or_else(|| parse_error(path, 1, "missing `alphabet:` line"))?;
    let domain = interner
        .alphabet(domain_letters)
        .map_err(|e| parse_error(path, alpha_line, e.to_string()))?;
    let codomain = match codomain {
        Some(c) => interner.alphabet(c).map_err(|e| parse_error(path, alpha_line, e.to_string()))?,
        None => Arc::clone(&domain),
    };
    let mut images: Vec<Option<String>> = vec![None; domain.size()];
    for (n, lhs, rhs) in &rules {
        let a = domain
            .index_of(lhs)
            .ok_or_else(|| parse_error(path, *n, format!("`{lhs}` is not a letter of the alphabet")))?;
        if images[a].is_some() {
            return Err(parse_error(path, *n, format!("second rule for `{lhs}`")));
        }
        codomain
            .parse_symbols(rhs)
            .map_err(|e| parse_error(path, *n, e.to_string()))?;
        images[a] = Some(rhs.clone());
    }
    let images: Vec<String> = images
        .into_iter()
        .enumerate()
        .map(|(a, image)| image.ok_or_else(|| parse_error(path, alpha_line, format!("no rule for `{}`", domain.name(a)))))
        .collect::<Result<_, _>>()?;
    let refs: Vec<&str> = images.iter().map(String::as_str).collect();
    Substitution::parse(&domain, &codomain, &refs).map_err(|e| parse_error(path, alpha_line, e.to_string()))
}

pub fn load_substitution(path: &Path, interner: &mut Interner) -> Result<Substitution, CliError> {
    parse_substitution(path, &read(path)?, interner)
}

pub fn load_sequence(path: &Path, interner: &mut Interner) -> Result<DirectiveSequence, CliError> {
    let text = read(path)?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."));
    let mut prefix: Option<(usize, Vec<Substitution>)> = None;
    let mut cycle: Option<(usize, Vec<Substitution>)> = None;
    let mut levels: Option<(usize, Vec<Vec<String>>)> = None;
    for (n, line) in lines(&text) {
        let (key, rest) = line
            .split_once(':')
            .ok_or_else(|| parse_error(path, n, format!("expected `key: value`, got `{line}`")))?;
        match key.trim() {
            "prefix" | "cycle" => {
                let subs = rest
                    .split_whitespace()
                    .map(|file| load_substitution(&base.join(file), interner))
                    .collect::<Result<Vec<_>, _>>()?;
                let slot = if key.trim() == "prefix" { &mut prefix } else { &mut cycle };
                if slot.replace((n, subs)).is_some() {
                    return Err(parse_error(path, n, format!("`{}` given twice", key.trim())));
                }
            }
            "levels" => levels = Some((n, rest.split('|').map(letters).collect())),
            other => return Err(parse_error(path, n, format!("unknown key `{other}`"))),
        }
    }
    let (cycle_line, cycle) = cycle.ok_or_else(|| parse_error(path, 1, "missing `cycle:` line"))?;
    if cycle.is_empty() {
        return Err(parse_error(path, cycle_line, "the cycle needs at least one substitution"));
    }
    let prefix = prefix.map(|(_, p)| p).unwrap_or_default();
    let seq = DirectiveSequence::new(prefix, cycle).map_err(|e| parse_error(path, cycle_line, e.to_string()))?;
    if let Some((n, declared)) = levels {
        let actual: Vec<Vec<String>> = seq.levels().iter().map(|a| a.letters().to_vec()).collect();
        if declared != actual {
            return Err(parse_error(
                path,
                n,
                format!("declared levels {declared:?} differ from the substitutions' alphabets {actual:?}"),
            ));
        }
    }
    Ok(seq)
}

/// A `.seq` file, or a `.sub` file read as its constant sequence.
pub fn load_any_sequence(path: &Path, interner: &mut Interner) -> Result<DirectiveSequence, CliError> {
    if path.extension().is_some_and(|e| e == "seq") {
        load_sequence(path, interner)
    } else {
        let sigma = load_substitution(path, interner)?;
        DirectiveSequence::constant(sigma).map_err(|e| parse_error(path, 1, e.to_string()))
    }
}
