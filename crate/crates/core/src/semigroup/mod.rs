//! Finite semigroups given by generators, with ω-powers, aperiodicity and
//! Green's relations, plus the automata and Rees matrix models built on top.
//!
//! A semigroup is stored through its right Cayley graph and one shortest
//! generator word per element; products are evaluated by walking that word.
//! This keeps memory linear in the size, so closures of a few hundred
//! thousand elements remain practical.

pub mod automaton;
pub mod green;
pub mod rees;

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use serde::Serialize;

use crate::error::{Error, Result};

pub use automaton::{syntactic_semigroup, syntactic_semigroup_of_dfa, Dfa, SyntacticSemigroup};
pub use green::{green_classification, GreenClassification, JClassInfo};
pub use rees::{rees_build, rees_induced_endo, InducedEndoReport, ReesElement, ReesModel};

/// Default bound on the number of elements produced by a closure.
pub const DEFAULT_ELEMENT_CAP: usize = 200_000;

#[derive(Clone, Debug)]
pub struct FiniteSemigroup {
    generator_names: Vec<String>,
    /// Element index of each generator.
    generators: Vec<usize>,
    /// `right[x][g] = x · generator g`.
    right: Vec<Vec<usize>>,
    /// Shortest generator word of each element, least in shortlex order.
    representatives: Vec<Vec<usize>>,
}

impl FiniteSemigroup {
    /// Closure of `gens` under `mul`, elements listed in shortlex order of
    /// their representatives. Fails once more than `cap` elements appear.
    pub fn closure<T, F>(gens: Vec<T>, names: Vec<String>, mul: F, cap: usize) -> Result<(Self, Vec<T>)>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        if gens.is_empty() {
            return Err(Error::InvalidArgument("a semigroup needs at least one generator".into()));
        }
        if names.len() != gens.len() {
            return Err(Error::InvalidArgument("one name per generator is required".into()));
        }
        let mut index: HashMap<T, usize> = HashMap::new();
        let mut elements: Vec<T> = Vec::new();
        let mut representatives: Vec<Vec<usize>> = Vec::new();
        let mut generators = Vec::with_capacity(gens.len());
        let mut queue = VecDeque::new();
        for (g, t) in gens.iter().enumerate() {
            let id = *index.entry(t.clone()).or_insert_with(|| {
                elements.push(t.clone());
                representatives.push(vec![g]);
                queue.push_back(elements.len() - 1);
                elements.len() - 1
            });
            generators.push(id);
        }
        let mut right: Vec<Vec<usize>> = vec![Vec::new(); elements.len()];
        while let Some(x) = queue.pop_front() {
            let mut row = Vec::with_capacity(gens.len());
            for (g, gen) in gens.iter().enumerate() {
                let product = mul(&elements[x], gen);
                let id = match index.get(&product) {
                    Some(&id) => id,
                    None => {
                        if elements.len() >= cap {
                            return Err(Error::CapExceeded {
                                what: "semigroup closure".into(),
                                cap,
                                required: format!("more than {cap} elements"),
                            });
                        }
                        let mut rep = representatives[x].clone();
                        rep.push(g);
                        elements.push(product.clone());
                        representatives.push(rep);
                        right.push(Vec::new());
                        index.insert(product, elements.len() - 1);
                        queue.push_back(elements.len() - 1);
                        elements.len() - 1
                    }
                };
                row.push(id);
            }
            right[x] = row;
        }
        let semigroup = FiniteSemigroup {
            generator_names: names,
            generators,
            right,
            representatives,
        };
        Ok((semigroup, elements))
    }

    /// Semigroup of a full multiplication table, generated by `generators`.
    pub fn from_table(table: &[Vec<usize>], generators: &[usize]) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidArgument("malformed multiplication table".into()));
        }
        if generators.iter().any(|&g| g >= n) {
            return Err(Error::InvalidArgument("generator outside the table".into()));
        }
        check_associativity(table)?;
        let names = (0..generators.len()).map(|g| format!("g{g}")).collect();
        let gens = generators.to_vec();
        let (s, elements) =
            FiniteSemigroup::closure(gens, names, |&x: &usize, &y: &usize| table[x][y], n)?;
        if elements.len() != n {
            return Err(Error::InvalidArgument(format!(
                "generators produce {} of the {n} table elements",
                elements.len()
            )));
        }
        // Renumber so that element indices coincide with table indices.
        let mut position = vec![0; n];
        for (i, &e) in elements.iter().enumerate() {
            position[i] = e;
        }
        let mut right = vec![Vec::new(); n];
        let mut representatives = vec![Vec::new(); n];
        for i in 0..n {
            right[position[i]] = s.right[i].iter().map(|&j| position[j]).collect();
            representatives[position[i]] = s.representatives[i].clone();
        }
        Ok(FiniteSemigroup {
            generator_names: s.generator_names,
            generators: s.generators.iter().map(|&g| position[g]).collect(),
            right,
            representatives,
        })
    }

    pub fn with_generator_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.generators.len() {
            return Err(Error::InvalidArgument("one name per generator is required".into()));
        }
        self.generator_names = names;
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.right.len()
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    /// Shortest generator word (as generator indices) evaluating to `x`.
    pub fn representative(&self, x: usize) -> &[usize] {
        &self.representatives[x]
    }

    pub fn representative_name(&self, x: usize) -> String {
        self.representatives[x]
            .iter()
            .map(|&g| self.generator_names[g].as_str())
            .collect()
    }

    pub fn right_mul_generator(&self, x: usize, g: usize) -> usize {
        self.right[x][g]
    }

    /// Value of a nonempty generator word.
    pub fn evaluate(&self, word: &[usize]) -> Option<usize> {
        let (&first, rest) = word.split_first()?;
        Some(rest.iter().fold(self.generators[first], |acc, &g| self.right[acc][g]))
    }

    pub fn multiply(&self, x: usize, y: usize) -> usize {
        self.representatives[y].iter().fold(x, |acc, &g| self.right[acc][g])
    }

    pub fn power(&self, x: usize, k: usize) -> usize {
        assert!(k >= 1, "semigroup powers start at 1");
        let mut result = None;
        let mut base = x;
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = Some(match result {
                    None => base,
                    Some(r) => self.multiply(r, base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = self.multiply(base, base);
            }
        }
        result.expect("k >= 1")
    }

    /// Index and period of the cyclic subsemigroup of `x`: `x^{i+p} = x^i`
    /// with `i` and `p` least. Floyd cycle detection on `x, x², …`.
    pub fn index_and_period(&self, x: usize) -> (usize, usize) {
        let step = |y: usize| self.multiply(y, x);
        let mut tortoise = step(x);
        let mut hare = step(step(x));
        while tortoise != hare {
            tortoise = step(tortoise);
            hare = step(step(hare));
        }
        let mut mu = 0;
        tortoise = x;
        while tortoise != hare {
            tortoise = step(tortoise);
            hare = step(hare);
            mu += 1;
        }
        let mut lambda = 1;
        hare = step(tortoise);
        while tortoise != hare {
            hare = step(hare);
            lambda += 1;
        }
        (mu + 1, lambda)
    }

    /// The unique idempotent power `x^ω` of `x`.
    pub fn omega_power(&self, x: usize) -> usize {
        let (index, period) = self.index_and_period(x);
        let m = index.div_ceil(period) * period;
        self.power(x, m)
    }

    pub fn is_idempotent(&self, x: usize) -> bool {
        self.multiply(x, x) == x
    }

    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.size()).filter(|&x| self.is_idempotent(x)).collect()
    }

    /// Every element satisfies `x^ω x = x^ω`; otherwise the first element
    /// generating a nontrivial group.
    pub fn aperiodicity(&self) -> AperiodicityEvidence {
        let mut max_index = 1;
        for x in 0..self.size() {
            let (index, period) = self.index_and_period(x);
            if period > 1 {
                return AperiodicityEvidence {
                    size: self.size(),
                    aperiodic: false,
                    max_index,
                    counterexample: Some(PeriodicElement {
                        element: self.representative_name(x),
                        index,
                        period,
                    }),
                };
            }
            max_index = max_index.max(index);
        }
        AperiodicityEvidence {
            size: self.size(),
            aperiodic: true,
            max_index,
            counterexample: None,
        }
    }

    pub fn is_aperiodic(&self) -> bool {
        (0..self.size()).all(|x| {
            let w = self.omega_power(x);
            self.multiply(w, x) == w
        })
    }

    /// Tab-separated Cayley table, rows and columns by element index, with
    /// a header line naming each element by its representative.
    pub fn cayley_table_tsv(&self) -> String {
        let n = self.size();
        let mut out = String::new();
        out.push('*');
        for x in 0..n {
            out.push('\t');
            out.push_str(&self.representative_name(x));
        }
        out.push('\n');
        for x in 0..n {
            out.push_str(&self.representative_name(x));
            for y in 0..n {
                out.push('\t');
                out.push_str(&self.multiply(x, y).to_string());
            }
            out.push('\n');
        }
        out
    }

    /// Full multiplication table; quadratic in the size.
    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.size())
            .map(|x| (0..self.size()).map(|y| self.multiply(x, y)).collect())
            .collect()
    }
}

/// Exhaustive up to 200 elements, sampled on a fixed grid beyond.
fn check_associativity(table: &[Vec<usize>]) -> Result<()> {
    let n = table.len();
    let stride = if n <= 200 { 1 } else { n / 50 + 1 };
    for x in (0..n).step_by(stride) {
        for y in (0..n).step_by(stride) {
            for z in (0..n).step_by(stride) {
                if table[table[x][y]][z] != table[x][table[y][z]] {
                    return Err(Error::InvalidArgument(format!(
                        "table is not associative at ({x}, {y}, {z})"
                    )));
                }
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodicElement {
    pub element: String,
    pub index: usize,
    pub period: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AperiodicityEvidence {
    pub size: usize,
    pub aperiodic: bool,
    /// Largest index `i` with `x^i = x^{i+1}` seen; all periods are 1 when
    /// aperiodic.
    pub max_index: usize,
    pub counterexample: Option<PeriodicElement>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic_group(n: usize) -> FiniteSemigroup {
        let table: Vec<Vec<usize>> = (0..n).map(|x| (0..n).map(|y| (x + y) % n).collect()).collect();
        FiniteSemigroup::from_table(&table, &[1 % n]).unwrap()
    }

    #[test]
    fn omega_in_cyclic_group_is_identity() {
        let z3 = cyclic_group(3);
        assert_eq!(z3.omega_power(1), 0);
        assert_eq!(z3.omega_power(0), 0);
        assert!(!z3.is_aperiodic());
        assert_eq!(z3.index_and_period(1), (1, 3));
    }

    #[test]
    fn bands_are_aperiodic() {
        // Left-zero band on three elements.
        let table: Vec<Vec<usize>> = (0..3).map(|x| vec![x; 3]).collect();
        let s = FiniteSemigroup::from_table(&table, &[0, 1, 2]).unwrap();
        assert!(s.is_aperiodic());
        assert!(s.aperiodicity().aperiodic);
        assert_eq!(s.idempotents(), vec![0, 1, 2]);
    }

    #[test]
    fn nilpotent_index() {
        // x, x², x³ = x⁴ = 0 in a cyclic semigroup of index 3, period 1.
        let table = vec![vec![1, 2, 2], vec![2, 2, 2], vec![2, 2, 2]];
        let s = FiniteSemigroup::from_table(&table, &[0]).unwrap();
        assert_eq!(s.index_and_period(0), (3, 1));
        assert_eq!(s.omega_power(0), 2);
    }

    #[test]
    fn mixed_index_and_period() {
        // Transformation with tail 2 and cycle 3 on 5 points.
        let t = vec![1, 2, 3, 4, 2];
        let (s, _) = FiniteSemigroup::closure(
            vec![t],
            vec!["t".into()],
            |x: &Vec<usize>, y: &Vec<usize>| x.iter().map(|&q| y[q]).collect(),
            100,
        )
        .unwrap();
        assert_eq!(s.index_and_period(0), (2, 3));
        let w = s.omega_power(0);
        assert!(s.is_idempotent(w));
        assert_eq!(s.representative(w).len() % 3, 0);
    }

    #[test]
    fn table_validation() {
        assert!(FiniteSemigroup::from_table(&[vec![0, 0], vec![1, 0]], &[0, 1]).is_err());
        assert!(FiniteSemigroup::from_table(&[vec![0, 0], vec![0, 0]], &[0]).is_err());
    }

    #[test]
    fn closure_cap() {
        let t = vec![1, 2, 3, 4, 5, 0];
        let r = FiniteSemigroup::closure(
            vec![t],
            vec!["t".into()],
            |x: &Vec<usize>, y: &Vec<usize>| x.iter().map(|&q| y[q]).collect(),
            4,
        );
        assert!(matches!(r, Err(Error::CapExceeded { .. })));
    }
}
