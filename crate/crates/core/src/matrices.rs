//! Frequency matrices of endomorphisms and the exact linear algebra behind
//! them.
//!
//! For an endomorphism `φ` of the ordered alphabet `{a₁, …, aₙ}`:
//!
//! * `F₁(φ)` is the `n×n` incidence matrix, `(i, j) = |φ(aᵢ)|_{aⱼ}`;
//! * `F₂(φ)` is the `n×n²` matrix counting two-letter factors, with the
//!   columns ordered lexicographically (`aᵣaₛ` is column `r·n + s`);
//! * `T₂(φ)` is the `n²×n²` 0/1 matrix sending the row of `aᵣaₛ` to the
//!   column of `aₜaᵤ`, where `aₜ` is the last letter of `φ(aᵣ)` and `aᵤ`
//!   the first letter of `φ(aₛ)`;
//! * `I₂(φ)` is the block matrix `[[F₁, F₂], [0, T₂]]`.
//!
//! `I₂` turns composition into matrix multiplication in reverse order,
//! `I₂(ψ∘φ) = I₂(φ)·I₂(ψ)`.

use std::fmt;
use std::ops::{Add, Mul};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::substitution::Substitution;
use crate::words::{count_occurrences, Alphabet, Letter};

/// Dense matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Copy>(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidArgument("ragged matrix rows".into()));
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flat_map(|r| r.iter().map(|&x| x.into())).collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    fn bump(&mut self, i: usize, j: usize) {
        self.data[i * self.cols + j] += 1;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_sum(&self, i: usize) -> BigInt {
        self.row(i).iter().sum()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn checked_mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::InvalidArgument(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn checked_add(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::InvalidArgument("dimension mismatch in matrix sum".into()));
        }
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    /// Copy of the block `[r0, r1) × [c0, c1)`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> IntMatrix {
        let mut out = IntMatrix::zeros(r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                out.set(i - r0, j - c0, self.get(i, j).clone());
            }
        }
        out
    }

    /// Assemble `[[a, b], [c, d]]`.
    pub fn from_blocks(a: &IntMatrix, b: &IntMatrix, c: &IntMatrix, d: &IntMatrix) -> Result<Self> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::InvalidArgument("incompatible block shapes".into()));
        }
        let rows = a.rows + c.rows;
        let cols = a.cols + b.cols;
        let mut out = IntMatrix::zeros(rows, cols);
        for (src, r0, c0) in [(a, 0, 0), (b, 0, a.cols), (c, a.rows, 0), (d, a.rows, a.cols)] {
            for i in 0..src.rows {
                for j in 0..src.cols {
                    out.set(r0 + i, c0 + j, src.get(i, j).clone());
                }
            }
        }
        Ok(out)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::InvalidArgument("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut m: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                    Some(r) => {
                        m.swap(k, r);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        Ok(sign * &m[n - 1][n - 1])
    }

    fn reduced_mod(&self, p: u64) -> Vec<Vec<u64>> {
        let modulus = BigInt::from(p);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| {
                        let r = x % &modulus;
                        let r = if r.is_negative() { r + &modulus } else { r };
                        r.to_u64().expect("residue fits")
                    })
                    .collect()
            })
            .collect()
    }

    /// Rank over the prime field `ℤ/pℤ`.
    pub fn rank_mod(&self, p: u64) -> Result<usize> {
        ensure_prime(p)?;
        let mut m = self.reduced_mod(p);
        Ok(eliminate_mod(&mut m, None, p))
    }

    /// Inverse over `ℤ/pℤ` by Gauss–Jordan elimination, `None` if singular.
    pub fn inverse_mod(&self, p: u64) -> Result<Option<Vec<Vec<u64>>>> {
        ensure_prime(p)?;
        if !self.is_square() {
            return Err(Error::InvalidArgument("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut m = self.reduced_mod(p);
        let mut inv: Vec<Vec<u64>> = (0..n)
            .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
            .collect();
        let rank = eliminate_mod(&mut m, Some(&mut inv), p);
        Ok((rank == n).then_some(inv))
    }

    pub fn is_invertible_mod(&self, p: u64) -> Result<bool> {
        Ok(self.is_square() && self.rank_mod(p)? == self.rows)
    }

    /// 0/1 matrix with exactly one 1 in each row and each column.
    pub fn is_permutation(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let mut col_hits = vec![0usize; self.cols];
        for i in 0..self.rows {
            let mut ones = 0;
            for (j, x) in self.row(i).iter().enumerate() {
                if x.is_one() {
                    ones += 1;
                    col_hits[j] += 1;
                } else if !x.is_zero() {
                    return false;
                }
            }
            if ones != 1 {
                return false;
            }
        }
        col_hits.into_iter().all(|c| c == 1)
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(ToPrimitive::to_i64).collect())
            .collect()
    }

    /// Plain-text rendering with a vertical rule after column `split_col`
    /// and a horizontal rule after row `split_row`.
    pub fn render_blocks(&self, split_row: usize, split_col: usize) -> String {
        let width = self.data.iter().map(|x| x.to_string().len()).max().unwrap_or(1);
        let mut out = String::new();
        for i in 0..self.rows {
            if i == split_row && i > 0 {
                let left = (width + 1) * split_col + 1;
                let right = (width + 1) * (self.cols - split_col);
                out.push_str(&"-".repeat(left));
                out.push('+');
                out.push_str(&"-".repeat(right));
                out.push('\n');
            }
            for j in 0..self.cols {
                if j == split_col && j > 0 {
                    out.push_str(" |");
                }
                out.push_str(&format!("{:>w$}", self.get(i, j).to_string(), w = width + 1));
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_blocks(self.rows, self.cols))
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(ToString::to_string).collect())
            .collect();
        rows.serialize(serializer)
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_mul(rhs).expect("dimension mismatch")
    }
}

impl Add for &IntMatrix {
    type Output = IntMatrix;

    fn add(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_add(rhs).expect("dimension mismatch")
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn ensure_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * base as u128 % p as u128) as u64;
        }
        base = (base as u128 * base as u128 % p as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Gauss–Jordan elimination over `ℤ/pℤ`; returns the rank. Row operations
/// are mirrored on `companion` when given.
fn eliminate_mod(m: &mut [Vec<u64>], mut companion: Option<&mut Vec<Vec<u64>>>, p: u64) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        if let Some(c) = companion.as_deref_mut() {
            c.swap(rank, pivot);
        }
        let inv = pow_mod(m[rank][col], p - 2, p);
        for x in m[rank].iter_mut() {
            *x = (*x as u128 * inv as u128 % p as u128) as u64;
        }
        if let Some(c) = companion.as_deref_mut() {
            for x in c[rank].iter_mut() {
                *x = (*x as u128 * inv as u128 % p as u128) as u64;
            }
        }
        for r in 0..rows {
            if r == rank || m[r][col] == 0 {
                continue;
            }
            let factor = m[r][col];
            for j in 0..cols {
                let sub = (factor as u128 * m[rank][j] as u128 % p as u128) as u64;
                m[r][j] = (m[r][j] + p - sub) % p;
            }
            if let Some(c) = companion.as_deref_mut() {
                for j in 0..c[r].len() {
                    let sub = (factor as u128 * c[rank][j] as u128 % p as u128) as u64;
                    c[r][j] = (c[r][j] + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn ensure_endomorphism(phi: &Substitution) -> Result<()> {
    if phi.is_endomorphism() {
        Ok(())
    } else {
        Err(Error::NotEndomorphism)
    }
}

/// `F_k(φ)` for `k ∈ {1, 2}`; columns follow the lexicographic order of
/// the `k`-letter words.
pub fn frequency_matrix(phi: &Substitution, k: usize) -> Result<IntMatrix> {
    ensure_endomorphism(phi)?;
    if !(1..=2).contains(&k) {
        return Err(Error::InvalidArgument(format!(
            "frequency matrices are defined here for k = 1, 2 (got {k})"
        )));
    }
    let alphabet = phi.domain();
    let n = alphabet.size();
    let columns = alphabet.words_of_length(k);
    let mut m = IntMatrix::zeros(n, columns.len());
    for i in 0..n {
        let image = phi.image_symbols(i);
        if k == 1 {
            for &b in image {
                m.bump(i, b);
            }
        } else {
            for pair in image.windows(2) {
                m.bump(i, pair[0] * n + pair[1]);
            }
        }
    }
    debug_assert!(columns
        .iter()
        .enumerate()
        .all(|(j, w)| *m.get(0, j) == BigInt::from(count_occurrences(phi.image_symbols(0), w))));
    Ok(m)
}

/// `T₂(φ)`.
pub fn boundary_matrix(phi: &Substitution) -> Result<IntMatrix> {
    ensure_endomorphism(phi)?;
    let n = phi.domain().size();
    let first = phi.first_letters();
    let last = phi.last_letters();
    let mut m = IntMatrix::zeros(n * n, n * n);
    for r in 0..n {
        for s in 0..n {
            m.set(r * n + s, last[r] * n + first[s], BigInt::one());
        }
    }
    Ok(m)
}

/// The matrices `F₁, F₂, T₂` of an endomorphism and their assembly `I₂`.
#[derive(Clone, Debug, Serialize)]
pub struct FrequencyBundle {
    pub n: usize,
    pub f1: IntMatrix,
    pub f2: IntMatrix,
    pub t2: IntMatrix,
    pub i2: IntMatrix,
}

impl FrequencyBundle {
    pub fn dimension(&self) -> usize {
        self.n + self.n * self.n
    }

    /// `I₂` rendered with its `F₁ | F₂ / 0 | T₂` block layout.
    pub fn render(&self) -> String {
        self.i2.render_blocks(self.n, self.n)
    }
}

pub fn i2(phi: &Substitution) -> Result<FrequencyBundle> {
    let f1 = frequency_matrix(phi, 1)?;
    let f2 = frequency_matrix(phi, 2)?;
    let t2 = boundary_matrix(phi)?;
    let n = f1.rows();
    let zero = IntMatrix::zeros(n * n, n);
    let i2 = IntMatrix::from_blocks(&f1, &f2, &zero, &t2)?;
    Ok(FrequencyBundle { n, f1, f2, t2, i2 })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeInvertibility {
    pub p: u64,
    pub i2_invertible: bool,
    pub f1_invertible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvertibilityReport {
    #[serde(serialize_with = "serialize_bigint")]
    pub det_f1: BigInt,
    #[serde(serialize_with = "serialize_bigint")]
    pub det_t2: BigInt,
    #[serde(serialize_with = "serialize_bigint")]
    pub det_i2: BigInt,
    pub t2_is_permutation: bool,
    /// `|det F₁| = 1`.
    pub unimodular: bool,
    /// `I₂` invertible over the integers.
    pub i2_invertible_over_z: bool,
    pub per_prime: Vec<PrimeInvertibility>,
}

fn serialize_bigint<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn invertibility_report(phi: &Substitution, primes: &[u64]) -> Result<InvertibilityReport> {
    for &p in primes {
        ensure_prime(p)?;
    }
    let bundle = i2(phi)?;
    let det_f1 = bundle.f1.determinant()?;
    let det_t2 = bundle.t2.determinant()?;
    let det_i2 = bundle.i2.determinant()?;
    let per_prime = primes
        .iter()
        .map(|&p| {
            Ok(PrimeInvertibility {
                p,
                i2_invertible: bundle.i2.is_invertible_mod(p)?,
                f1_invertible: bundle.f1.is_invertible_mod(p)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InvertibilityReport {
        unimodular: det_f1.abs().is_one(),
        i2_invertible_over_z: det_i2.abs().is_one(),
        t2_is_permutation: bundle.t2.is_permutation(),
        det_f1,
        det_t2,
        det_i2,
        per_prime,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `a₁ ↦ a₁a₂…aₙ`, `aᵢ ↦ aᵢaᵢ…aₙa₁…aᵢ₋₁`.
    Sigma,
    /// `a₁ ↦ a₁a₂`, `aᵢ ↦ a₁aᵢa₂`.
    SigmaPrime,
}

/// Members of the two generator families over `a1, …, an`.
pub fn family_substitution(kind: Family, n: usize) -> Result<Substitution> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("family needs n >= 2, got {n}")));
    }
    let alphabet: Arc<Alphabet> = Alphabet::indexed(n)?;
    let images: Vec<Vec<Letter>> = match kind {
        Family::Sigma => (0..n)
            .map(|i| {
                let rotation = (0..n).map(|t| (i + t) % n);
                if i == 0 {
                    rotation.collect()
                } else {
                    std::iter::once(i).chain(rotation).collect()
                }
            })
            .collect(),
        Family::SigmaPrime => (0..n)
            .map(|i| if i == 0 { vec![0, 1] } else { vec![0, i, 1] })
            .collect(),
    };
    Substitution::from_symbols(&alphabet, &alphabet, images)
}
