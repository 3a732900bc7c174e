//! Brute-force oracles shared by the integration tests.
//!
//! Nothing here calls the EZ engine or the propagation code under test.

#![allow(dead_code)]

use std::collections::HashMap;

use symsets::finset::{enumerate_surjections, FinFn};
use symsets::propagraph::UGraph;
use symsets::symset::SymSet;

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Stirling numbers of the second kind.
pub fn stirling2(n: usize, k: usize) -> u64 {
    let mut row = vec![1u64];
    for i in 1..=n {
        let mut next = vec![0u64; i + 1];
        for j in 1..=i {
            let keep = if j < row.len() { j as u64 * row[j] } else { 0 };
            next[j] = keep + row[j - 1];
        }
        row = next;
    }
    row.get(k).copied().unwrap_or(0)
}

pub fn bell(n: usize) -> u64 {
    (0..=n).map(|k| stirling2(n, k)).sum()
}

/// Smallest `|B|` over all decompositions `x = y·α` with `α: A ↠ B`, for every structure on `size` points.
pub fn mass_table<M: SymSet>(m: &M, size: usize) -> HashMap<M::Structure, usize> {
    let mut table = HashMap::new();
    for b in 1..=size {
        let ys: Vec<M::Structure> = m.structures(b).collect();
        for alpha in enumerate_surjections(size, b) {
            for y in &ys {
                table.entry(m.pullback(y, &alpha)).or_insert(b);
            }
        }
    }
    table
}

/// Kernel of some minimal decomposition, as a label per point.
pub fn minimal_kernel<M: SymSet>(m: &M, x: &M::Structure) -> Vec<usize> {
    let size = m.carrier(x);
    for b in 1..=size {
        let ys: Vec<M::Structure> = m.structures(b).collect();
        for alpha in enumerate_surjections(size, b) {
            if ys.iter().any(|y| m.pullback(y, &alpha) == *x) {
                return alpha.images().to_vec();
            }
        }
    }
    unreachable!("the identity decomposition always exists")
}

/// Adjacency matrix.
pub fn adjacency(g: &UGraph) -> Vec<Vec<bool>> {
    let n = g.num_vertices();
    (0..n).map(|u| (0..n).map(|v| g.has_edge(u, v)).collect()).collect()
}

/// One Φ step on membership vectors.
pub fn naive_phi(adj: &[Vec<bool>], s: &[bool]) -> Vec<bool> {
    (0..adj.len())
        .map(|v| s[v] || (0..adj.len()).filter(|&u| s[u] && adj[v][u]).count() >= 2)
        .collect()
}

pub fn naive_closure(adj: &[Vec<bool>], s: &[bool]) -> Vec<bool> {
    let mut cur = s.to_vec();
    loop {
        let next = naive_phi(adj, &cur);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

pub fn naive_is_propagative(adj: &[Vec<bool>]) -> bool {
    let n = adj.len();
    (0..n).all(|u| {
        (u + 1..n).all(|v| {
            let mut s = vec![false; n];
            s[u] = true;
            s[v] = true;
            naive_closure(adj, &s).iter().all(|&b| b)
        })
    })
}

/// All graphs on `n` vertices, enumerated as edge subsets.
pub fn all_graphs(n: usize) -> impl Iterator<Item = UGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0..1u64 << pairs.len()).map(move |mask| {
        let edges: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        UGraph::new(n, &edges).unwrap()
    })
}

/// Every function between sets of the given sizes.
pub fn all_functions(dom: usize, cod: usize) -> Vec<FinFn> {
    let mut out = Vec::new();
    let mut images = vec![0usize; dom];
    loop {
        out.push(FinFn::new(cod, images.clone()).unwrap());
        let mut i = 0;
        while i < dom && images[i] + 1 == cod {
            images[i] = 0;
            i += 1;
        }
        if i == dom {
            return out;
        }
        images[i] += 1;
    }
}

pub fn twin_graph() -> UGraph {
    UGraph::new(
        7,
        &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 6), (1, 5), (2, 5), (3, 4), (3, 5), (4, 5), (4, 6), (5, 6)],
    )
    .unwrap()
}

pub fn hub_graph() -> UGraph {
    UGraph::new(
        7,
        &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (0, 6), (1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (3, 4)],
    )
    .unwrap()
}

/// Runs `$body` once for every bundled instance, binding it to `$m`.
#[macro_export]
macro_rules! for_each_instance {
    (|$m:ident| $body:block) => {{
        use symsets::finset::FinSet;
        use symsets::levels::graph_skeleton;
        use symsets::symset::*;
        { let $m = graph_symset(); $body }
        { let $m = eq_symset(); $body }
        for l in 1..=3 {
            let $m = eq_leq_symset(l).unwrap();
            $body
        }
        for l in 1..=3 {
            let $m = eq_exact_symset(l).unwrap();
            $body
        }
        for s in 1..=3 {
            let $m = representable_symset(FinSet::new(s).unwrap());
            $body
        }
        { let $m = discrete_symset(["0", "1"]).unwrap(); $body }
        { let $m = discrete_symset(["x", "y", "z"]).unwrap(); $body }
        for l in 1..=2 {
            let $m = graph_skeleton(l);
            $body
        }
    }};
}
