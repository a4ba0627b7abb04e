//! Maximal clique enumeration over threshold graphs.
//!
//! Subsets of a finite metric space with diameter below a threshold are
//! exactly the cliques of the graph joining points within that threshold,
//! so cover invariants reduce to clique enumeration. The enumerator is
//! Bron-Kerbosch with max-degree pivoting, seeded by a degeneracy order at
//! the top level, with a hard cap on the number of emitted cliques.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};

/// Default cap on emitted cliques; override with [`set_clique_cap`] or,
/// through the CLI, the `STONE_CLIQUE_CAP` environment variable.
pub const DEFAULT_CLIQUE_CAP: usize = 1_000_000;

static CLIQUE_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_CLIQUE_CAP);

pub fn clique_cap() -> usize {
    CLIQUE_CAP.load(Ordering::Relaxed)
}

pub fn set_clique_cap(cap: usize) {
    CLIQUE_CAP.store(cap.max(1), Ordering::Relaxed);
}

/// Fixed-width bitset over point indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mask {
    bits: Vec<u64>,
    len: usize,
}

impl Mask {
    pub fn empty(len: usize) -> Self {
        Mask {
            bits: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn full(len: usize) -> Self {
        let mut m = Mask::empty(len);
        for i in 0..len {
            m.insert(i);
        }
        m
    }

    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut m = Mask::empty(len);
        for &i in indices {
            m.insert(i);
        }
        m
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.bits[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.bits[i / 64] &= !(1 << (i % 64));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|w| *w == 0)
    }

    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_subset_of(&self, other: &Mask) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn intersect(&self, other: &Mask) -> Mask {
        Mask {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| a & b)
                .collect(),
            len: self.len,
        }
    }

    pub fn intersection_count(&self, other: &Mask) -> usize {
        self.bits
            .iter()
            .zip(&other.bits)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Ascending set bits.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    None
                } else {
                    let b = word.trailing_zeros() as usize;
                    word &= word - 1;
                    Some(w * 64 + b)
                }
            })
        })
    }

    pub fn to_indices(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

/// Undirected graph on `n` vertices as adjacency masks.
#[derive(Debug, Clone)]
pub struct AdjacencyGraph {
    pub n: usize,
    pub adj: Vec<Mask>,
}

impl AdjacencyGraph {
    /// Graph joining point pairs whose distance satisfies `edge`.
    pub fn from_predicate(n: usize, edge: impl Fn(usize, usize) -> bool) -> Self {
        let mut adj = vec![Mask::empty(n); n];
        for i in 0..n {
            for j in (i + 1)..n {
                if edge(i, j) {
                    adj[i].insert(j);
                    adj[j].insert(i);
                }
            }
        }
        AdjacencyGraph { n, adj }
    }

    /// Degeneracy order: repeatedly remove a minimum-degree vertex,
    /// breaking ties by index.
    fn degeneracy_order(&self) -> Vec<usize> {
        let mut degree: Vec<usize> = self.adj.iter().map(Mask::count).collect();
        let mut removed = vec![false; self.n];
        let mut order = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            let v = (0..self.n)
                .filter(|&v| !removed[v])
                .min_by_key(|&v| (degree[v], v))
                .expect("vertices remain");
            removed[v] = true;
            order.push(v);
            for u in self.adj[v].iter() {
                if !removed[u] {
                    degree[u] -= 1;
                }
            }
        }
        order
    }

    /// All maximal cliques, sorted lexicographically by index set.
    /// Fails with `CliqueCapExceeded` once more than `cap` cliques are
    /// emitted.
    pub fn maximal_cliques_capped(&self, cap: usize) -> Result<Vec<Mask>> {
        let mut out = Vec::new();
        let order = self.degeneracy_order();
        let mut position = vec![0; self.n];
        for (pos, &v) in order.iter().enumerate() {
            position[v] = pos;
        }
        for &v in &order {
            let mut r = Mask::empty(self.n);
            r.insert(v);
            let mut p = Mask::empty(self.n);
            let mut x = Mask::empty(self.n);
            for u in self.adj[v].iter() {
                if position[u] > position[v] {
                    p.insert(u);
                } else {
                    x.insert(u);
                }
            }
            self.expand(r, p, x, cap, &mut out)?;
        }
        out.sort();
        Ok(out)
    }

    /// All maximal cliques under the global cap.
    pub fn maximal_cliques(&self) -> Result<Vec<Mask>> {
        self.maximal_cliques_capped(clique_cap())
    }

    fn expand(
        &self,
        r: Mask,
        mut p: Mask,
        mut x: Mask,
        cap: usize,
        out: &mut Vec<Mask>,
    ) -> Result<()> {
        if p.is_empty() && x.is_empty() {
            if out.len() >= cap {
                return Err(Error::CliqueCapExceeded { cap });
            }
            out.push(r);
            return Ok(());
        }
        // Pivot on the vertex of P union X covering most of P.
        let pivot = p
            .iter()
            .chain(x.iter())
            .max_by_key(|&u| (self.adj[u].intersection_count(&p), usize::MAX - u))
            .expect("p or x nonempty");
        let candidates: Vec<usize> = p.iter().filter(|&v| !self.adj[pivot].contains(v)).collect();
        for v in candidates {
            let mut r2 = r.clone();
            r2.insert(v);
            let p2 = p.intersect(&self.adj[v]);
            let x2 = x.intersect(&self.adj[v]);
            self.expand(r2, p2, x2, cap, out)?;
            p.remove(v);
            x.insert(v);
        }
        Ok(())
    }
}
