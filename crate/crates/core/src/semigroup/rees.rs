//! Rees matrix models `M(V, n, n, P)` over `V = (ℤ/pℤ)^m`, `m = n + n²`.
//!
//! Coordinates `0 .. n` carry the vectors `vᵢ`, and coordinate
//! `n + λ·n + j` carries `v_{λ,j}`, which is also the sandwich entry
//! `P(λ, j)`. The product is `(i, g, λ)(j, h, μ) = (i, g + P(λ, j) + h, μ)`,
//! and the generators are `sᵢ = (i, vᵢ, i)`. Their closure `T` is a
//! completely simple semigroup with `n²` group `H`-classes, each of order
//! `p^{n²−n+1}`.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_integer::Integer;
use serde::Serialize;

use super::FiniteSemigroup;
use crate::error::{Error, Result};
use crate::matrices::{ensure_prime, i2};
use crate::substitution::Substitution;
use crate::words::Letter;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ReesElement {
    pub i: usize,
    pub v: Vec<u32>,
    pub lambda: usize,
}

#[derive(Clone, Debug)]
pub struct ReesModel {
    pub n: usize,
    pub p: u64,
    pub m: usize,
    pub elements: Vec<ReesElement>,
    pub semigroup: FiniteSemigroup,
    pub expected_size: u128,
    pub subgroup_order: u128,
    /// Size of each `H`-class `T ∩ {(i, ·, λ)}`, row-major in `(i, λ)`.
    pub h_class_sizes: Vec<usize>,
    index: HashMap<ReesElement, usize>,
}

impl ReesModel {
    pub fn sandwich_coordinate(&self, lambda: usize, j: usize) -> usize {
        self.n + lambda * self.n + j
    }

    pub fn multiply_elements(&self, x: &ReesElement, y: &ReesElement) -> ReesElement {
        rees_product(self.n, self.p, x, y)
    }

    pub fn generator(&self, i: usize) -> ReesElement {
        generator(self.n, self.p, i)
    }

    pub fn index_of(&self, x: &ReesElement) -> Option<usize> {
        self.index.get(x).copied()
    }

    /// `(i, g, λ)` is idempotent iff `g = −P(λ, i)`.
    pub fn is_idempotent(&self, x: &ReesElement) -> bool {
        let c = self.sandwich_coordinate(x.lambda, x.i);
        x.v.iter().enumerate().all(|(k, &g)| {
            let target = if k == c { (self.p - 1) as u32 } else { 0 };
            g == target
        })
    }

    /// The value of a nonempty generator word by the closed form
    /// `(i₁, Σ λᵢ vᵢ + Σ λᵢⱼ vᵢⱼ, i_r)`, with `λᵢ` the letter counts and
    /// `λᵢⱼ` the two-letter factor counts of the word.
    pub fn closed_form(&self, word: &[Letter]) -> Option<ReesElement> {
        let (&first, &last) = (word.first()?, word.last()?);
        let mut v = vec![0u64; self.m];
        for &a in word {
            v[a] += 1;
        }
        for pair in word.windows(2) {
            v[self.sandwich_coordinate(pair[0], pair[1])] += 1;
        }
        Some(ReesElement {
            i: first,
            v: v.into_iter().map(|x| (x % self.p) as u32).collect(),
            lambda: last,
        })
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn size_verified(&self) -> bool {
        self.elements.len() as u128 == self.expected_size
    }

    pub fn subgroup_orders_verified(&self) -> bool {
        self.h_class_sizes.len() == self.n * self.n
            && self.h_class_sizes.iter().all(|&s| s as u128 == self.subgroup_order)
    }
}

fn rees_product(n: usize, p: u64, x: &ReesElement, y: &ReesElement) -> ReesElement {
    let c = n + x.lambda * n + y.i;
    let v = x
        .v
        .iter()
        .zip(&y.v)
        .enumerate()
        .map(|(k, (&a, &b))| ((a as u64 + b as u64 + u64::from(k == c)) % p) as u32)
        .collect();
    ReesElement {
        i: x.i,
        v,
        lambda: y.lambda,
    }
}

fn generator(n: usize, _p: u64, i: usize) -> ReesElement {
    let mut v = vec![0; n + n * n];
    v[i] = 1;
    ReesElement { i, v, lambda: i }
}

/// `n² · p^{n²−n+1}`, if it fits.
fn expected_sizes(n: usize, p: u64) -> Option<(u128, u128)> {
    let exponent = u32::try_from(n * n - n + 1).ok()?;
    let order = (p as u128).checked_pow(exponent)?;
    Some((((n * n) as u128).checked_mul(order)?, order))
}

pub fn rees_build(n: usize, p: u64, cap: usize) -> Result<ReesModel> {
    ensure_prime(p)?;
    if n < 2 {
        return Err(Error::InvalidArgument(format!("Rees model needs n >= 2, got {n}")));
    }
    let (expected_size, subgroup_order) = match expected_sizes(n, p) {
        Some(pair) if pair.0 <= cap as u128 => pair,
        other => {
            let required = match other {
                Some((size, _)) => size.to_string(),
                None => format!("{n}^2 * {p}^{}", n * n - n + 1),
            };
            return Err(Error::CapExceeded {
                what: "Rees closure".into(),
                cap,
                required,
            });
        }
    };
    let gens: Vec<ReesElement> = (0..n).map(|i| generator(n, p, i)).collect();
    let names = (1..=n).map(|i| format!("s{i}")).collect();
    let (semigroup, elements) = FiniteSemigroup::closure(gens, names, |x, y| rees_product(n, p, x, y), cap)?;
    let mut h_class_sizes = vec![0usize; n * n];
    for e in &elements {
        h_class_sizes[e.i * n + e.lambda] += 1;
    }
    let index = elements.iter().cloned().enumerate().map(|(k, e)| (e, k)).collect();
    Ok(ReesModel {
        n,
        p,
        m: n + n * n,
        elements,
        semigroup,
        expected_size,
        subgroup_order,
        h_class_sizes,
        index,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InducedEndoReport {
    pub n: usize,
    pub p: u64,
    /// Image of each generator, by element index.
    pub generator_images: Vec<usize>,
    /// Largest tail length of the induced transformation.
    pub index: usize,
    /// Least common multiple of its cycle lengths.
    pub period: String,
    pub bijective: bool,
    /// The ω-power of the induced transformation fixes every generator.
    pub is_automorphism: bool,
    /// `I₂(φ)` invertible mod `p`.
    pub matrix_invertible_mod_p: bool,
    pub agrees: bool,
}

/// The endomorphism of `T` sending `sᵢ` to the value of `φ(aᵢ)`.
pub fn rees_induced_endo(phi: &Substitution, model: &ReesModel) -> Result<InducedEndoReport> {
    if !phi.is_endomorphism() {
        return Err(Error::NotEndomorphism);
    }
    if phi.domain().size() != model.n {
        return Err(Error::AlphabetMismatch(format!(
            "substitution on {} letters, model on {}",
            phi.domain().size(),
            model.n
        )));
    }
    let s = &model.semigroup;
    let generator_images: Vec<usize> = (0..model.n)
        .map(|a| s.evaluate(phi.image_symbols(a)).expect("images are nonempty"))
        .collect();
    let map: Vec<usize> = (0..s.size())
        .map(|t| {
            let rep = s.representative(t);
            rep[1..]
                .iter()
                .fold(generator_images[rep[0]], |acc, &g| s.multiply(acc, generator_images[g]))
        })
        .collect();

    let (tails, cycles) = functional_graph(&map);
    let index = tails.iter().copied().max().unwrap_or(0);
    let mut period = BigUint::from(1u32);
    let mut seen_lengths: Vec<usize> = cycles.clone();
    seen_lengths.sort_unstable();
    seen_lengths.dedup();
    for c in seen_lengths {
        period = period.lcm(&BigUint::from(c));
    }
    let omega_at = |x: usize| {
        let c = cycles[x];
        let steps = tails[x].div_ceil(c).max(1) * c;
        (0..steps).fold(x, |y, _| map[y])
    };
    let is_automorphism = s.generators().iter().all(|&g| omega_at(g) == g);
    let mut hit = vec![false; map.len()];
    for &y in &map {
        hit[y] = true;
    }
    let bijective = hit.into_iter().all(|h| h);
    let matrix_invertible_mod_p = i2(phi)?.i2.is_invertible_mod(model.p)?;
    Ok(InducedEndoReport {
        n: model.n,
        p: model.p,
        generator_images,
        index,
        period: period.to_string(),
        bijective,
        is_automorphism,
        matrix_invertible_mod_p,
        agrees: is_automorphism == matrix_invertible_mod_p,
    })
}

/// Tail length and cycle length of every point of a self-map.
fn functional_graph(map: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let n = map.len();
    let mut tail = vec![usize::MAX; n];
    let mut cycle = vec![0usize; n];
    for start in 0..n {
        if tail[start] != usize::MAX {
            continue;
        }
        let mut path = Vec::new();
        let mut position: HashMap<usize, usize> = HashMap::new();
        let mut x = start;
        while tail[x] == usize::MAX && !position.contains_key(&x) {
            position.insert(x, path.len());
            path.push(x);
            x = map[x];
        }
        if tail[x] == usize::MAX {
            // Closed a new cycle at x.
            let at = position[&x];
            let len = path.len() - at;
            for &y in &path[at..] {
                tail[y] = 0;
                cycle[y] = len;
            }
            path.truncate(at);
        }
        let (mut t, c) = (tail[x], cycle[x]);
        for &y in path.iter().rev() {
            t += 1;
            tail[y] = t;
            cycle[y] = c;
        }
    }
    (tail, cycle)
}
