//! Green's relations of a finite semigroup.
//!
//! `x ≤_R y` iff `x ∈ yS¹`, so `R`-classes are the strongly connected
//! components of the right Cayley graph; dually for `L` with the left graph
//! and for `J` with both.

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;

use super::FiniteSemigroup;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JClassInfo {
    pub elements: Vec<usize>,
    pub idempotents: Vec<usize>,
    pub regular: bool,
    /// Every `L`-class inside the `J`-class holds an idempotent; equivalent
    /// to regularity in a finite semigroup.
    pub every_l_class_has_idempotent: bool,
    /// `H`-class ids of the group `H`-classes inside the `J`-class.
    pub group_h_classes: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GreenClassification {
    /// Class id of each element, per relation. Ids are assigned in order of
    /// the least element of each class.
    pub r: Vec<usize>,
    pub l: Vec<usize>,
    pub j: Vec<usize>,
    pub h: Vec<usize>,
    pub j_classes: Vec<JClassInfo>,
}

impl GreenClassification {
    pub fn class_count(partition: &[usize]) -> usize {
        partition.iter().max().map_or(0, |m| m + 1)
    }

    pub fn classes(partition: &[usize]) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); GreenClassification::class_count(partition)];
        for (x, &c) in partition.iter().enumerate() {
            out[c].push(x);
        }
        out
    }

    pub fn is_simple(&self) -> bool {
        self.j_classes.len() == 1
    }
}

fn scc_partition(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> Vec<usize> {
    let mut graph: DiGraph<(), ()> = DiGraph::with_capacity(n, 0);
    let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    for (a, b) in edges {
        graph.add_edge(nodes[a], nodes[b], ());
    }
    let mut raw = vec![0; n];
    for (c, component) in tarjan_scc(&graph).into_iter().enumerate() {
        for node in component {
            raw[node.index()] = c;
        }
    }
    normalize(&raw)
}

/// Renumber class ids by first occurrence.
fn normalize(raw: &[usize]) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    raw.iter()
        .map(|c| {
            let next = map.len();
            *map.entry(*c).or_insert(next)
        })
        .collect()
}

pub fn green_classification(s: &FiniteSemigroup) -> GreenClassification {
    let n = s.size();
    let gens = s.generators().to_vec();
    let right_edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (0..gens.len()).map(move |g| (x, g)))
        .map(|(x, g)| (x, s.right_mul_generator(x, g)))
        .collect();
    let left_edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| gens.iter().map(move |&g| (x, g)))
        .map(|(x, g)| (x, s.multiply(g, x)))
        .collect();
    let r = scc_partition(n, right_edges.iter().copied());
    let l = scc_partition(n, left_edges.iter().copied());
    let j = scc_partition(n, right_edges.iter().chain(left_edges.iter()).copied());
    let h_raw: Vec<usize> = (0..n).map(|x| r[x] * n + l[x]).collect();
    let h = normalize(&h_raw);

    let idempotent: Vec<bool> = (0..n).map(|x| s.is_idempotent(x)).collect();
    let j_classes = GreenClassification::classes(&j)
        .into_iter()
        .map(|elements| {
            let idempotents: Vec<usize> = elements.iter().copied().filter(|&x| idempotent[x]).collect();
            let mut l_ids: Vec<usize> = elements.iter().map(|&x| l[x]).collect();
            l_ids.sort_unstable();
            l_ids.dedup();
            let every_l_class_has_idempotent = l_ids
                .iter()
                .all(|&lc| idempotents.iter().any(|&e| l[e] == lc));
            let mut group_h_classes: Vec<usize> = idempotents.iter().map(|&e| h[e]).collect();
            group_h_classes.sort_unstable();
            group_h_classes.dedup();
            JClassInfo {
                regular: !idempotents.is_empty(),
                elements,
                idempotents,
                every_l_class_has_idempotent,
                group_h_classes,
            }
        })
        .collect();
    GreenClassification { r, l, j, h, j_classes }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_is_one_class() {
        let table: Vec<Vec<usize>> = (0..4).map(|x| (0..4).map(|y| (x + y) % 4).collect()).collect();
        let s = FiniteSemigroup::from_table(&table, &[1]).unwrap();
        let g = green_classification(&s);
        for part in [&g.r, &g.l, &g.j, &g.h] {
            assert!(part.iter().all(|&c| c == 0));
        }
        assert_eq!(g.j_classes[0].idempotents, vec![0]);
    }

    #[test]
    fn rectangular_band() {
        // (i, λ)(j, μ) = (i, μ) on {0,1}², element index 2i + λ.
        let table: Vec<Vec<usize>> = (0..4)
            .map(|x| (0..4).map(|y| 2 * (x / 2) + y % 2).collect())
            .collect();
        let s = FiniteSemigroup::from_table(&table, &[0, 3]).unwrap();
        let g = green_classification(&s);
        assert!(g.is_simple());
        assert_eq!(GreenClassification::class_count(&g.h), 4);
        assert_eq!(GreenClassification::class_count(&g.r), 2);
        assert_eq!(GreenClassification::class_count(&g.l), 2);
        assert_eq!(g.j_classes[0].idempotents.len(), 4);
        assert!(g.j_classes[0].regular && g.j_classes[0].every_l_class_has_idempotent);
    }

    #[test]
    fn null_semigroup_has_non_regular_classes() {
        // x, x² = 0 with 0 absorbing.
        let table = vec![vec![1, 1], vec![1, 1]];
        let s = FiniteSemigroup::from_table(&table, &[0]).unwrap();
        let g = green_classification(&s);
        assert_eq!(g.j_classes.len(), 2);
        let top = g.j_classes.iter().find(|c| c.elements == vec![0]).unwrap();
        assert!(!top.regular && !top.every_l_class_has_idempotent);
    }
}
