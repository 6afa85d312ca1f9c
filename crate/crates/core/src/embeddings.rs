//! Embeddings of bicoloured graphs into Young diagrams.
//!
//! An embedding sends white vertices to columns, black vertices to rows and
//! edges injectively to boxes, each edge landing in the row of its black end
//! and the column of its white end. Negative embeddings swap the roles of the
//! two colours.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::partitions::Partition;
use crate::scalars::falling_factorial;

/// Bipartite multigraph; `edges` holds `(black, white)` pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BicoloredGraph {
    pub black: usize,
    pub white: usize,
    pub edges: Vec<(usize, usize)>,
}

/// `G_π`: one black vertex of degree `π_r` per part and `|π|` white leaves.
/// With `conjugate` the colours are exchanged.
pub fn graph_of_partition(pi: &Partition, conjugate: bool) -> BicoloredGraph {
    let mut edges = Vec::new();
    let mut leaf = 0;
    for (r, &part) in pi.parts().iter().enumerate() {
        for _ in 0..part {
            edges.push((r, leaf));
            leaf += 1;
        }
    }
    let g = BicoloredGraph { black: pi.len(), white: pi.size(), edges };
    if conjugate {
        g.swap_colours()
    } else {
        g
    }
}

impl BicoloredGraph {
    pub fn swap_colours(&self) -> BicoloredGraph {
        BicoloredGraph {
            black: self.white,
            white: self.black,
            edges: self.edges.iter().map(|&(b, w)| (w, b)).collect(),
        }
    }
}

/// `N_G(λ)`, or the negative count `N̄_G(λ)` when `negative` is set.
pub fn count_embeddings(g: &BicoloredGraph, lam: &Partition, negative: bool) -> BigInt {
    let g = if negative { g.swap_colours() } else { g.clone() };
    let rows = lam.parts().to_vec();
    let mut st = Search {
        g: &g,
        rows: &rows,
        row_of: vec![usize::MAX; g.black],
        col_of: vec![usize::MAX; g.white],
    };
    let order = vertex_order(&g);
    st.count(&order, 0)
}

#[derive(Clone, Copy)]
enum Vertex {
    Black(usize),
    White(usize),
}

/// Higher-degree vertices first; every vertex appears exactly once.
fn vertex_order(g: &BicoloredGraph) -> Vec<Vertex> {
    let mut v: Vec<(usize, Vertex)> = Vec::new();
    for b in 0..g.black {
        v.push((g.edges.iter().filter(|e| e.0 == b).count(), Vertex::Black(b)));
    }
    for w in 0..g.white {
        v.push((g.edges.iter().filter(|e| e.1 == w).count(), Vertex::White(w)));
    }
    v.sort_by(|a, b| b.0.cmp(&a.0));
    v.into_iter().map(|x| x.1).collect()
}

struct Search<'a> {
    g: &'a BicoloredGraph,
    rows: &'a [usize],
    row_of: Vec<usize>,
    col_of: Vec<usize>,
}

impl Search<'_> {
    fn count(&mut self, order: &[Vertex], k: usize) -> BigInt {
        if k == order.len() {
            return BigInt::from(1);
        }
        let ncols = self.rows.first().copied().unwrap_or(0);
        let mut total = BigInt::zero();
        match order[k] {
            Vertex::Black(b) => {
                for r in 0..self.rows.len() {
                    self.row_of[b] = r;
                    if self.consistent() {
                        total += self.count(order, k + 1);
                    }
                }
                self.row_of[b] = usize::MAX;
            }
            Vertex::White(w) => {
                for c in 0..ncols {
                    self.col_of[w] = c;
                    if self.consistent() {
                        total += self.count(order, k + 1);
                    }
                }
                self.col_of[w] = usize::MAX;
            }
        }
        total
    }

    /// Edges with both ends placed land on distinct boxes of the diagram.
    fn consistent(&self) -> bool {
        let mut boxes = Vec::new();
        for &(b, w) in &self.g.edges {
            let (r, c) = (self.row_of[b], self.col_of[w]);
            if r == usize::MAX || c == usize::MAX {
                continue;
            }
            if c >= self.rows[r] {
                return false;
            }
            boxes.push((r, c));
        }
        boxes.sort_unstable();
        boxes.windows(2).all(|w| w[0] != w[1])
    }
}

/// `p̂_π(λ) = Σ_f ∏_i λ_i^{↓(Σ_{f(r) = i} π_r)}` over maps `f` from the parts
/// of `π` to the rows of `λ`.
pub fn hat_p(pi: &Partition, lam: &Partition) -> BigInt {
    let mut load = vec![0u64; lam.len()];
    hat_rec(pi.parts(), lam.parts(), &mut load)
}

fn hat_rec(parts: &[usize], rows: &[usize], load: &mut [u64]) -> BigInt {
    let Some((&first, rest)) = parts.split_first() else {
        return rows.iter().zip(load.iter()).fold(BigInt::from(1), |a, (&r, &l)| a * falling_factorial(r as u64, l));
    };
    let mut total = BigInt::zero();
    for i in 0..rows.len() {
        load[i] += first as u64;
        if load[i] <= rows[i] as u64 {
            total += hat_rec(rest, rows, load);
        }
        load[i] -= first as u64;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::from_parts(parts).unwrap()
    }

    #[test]
    fn worked_example() {
        let (pi, lam) = (p(&[3, 1]), p(&[4, 3]));
        assert_eq!(hat_p(&pi, &lam), BigInt::from(120));
        assert_eq!(count_embeddings(&graph_of_partition(&pi, false), &lam, false), BigInt::from(120));
    }

    #[test]
    fn conjugate_graph_negative_count() {
        let lam = p(&[3, 2, 2]);
        for pi in [p(&[2, 1]), p(&[3]), p(&[1, 1, 1])] {
            let g = graph_of_partition(&pi, false);
            let gc = graph_of_partition(&pi, true);
            assert_eq!(count_embeddings(&g, &lam, false), count_embeddings(&gc, &lam, true));
        }
    }

    #[test]
    fn empty_cases() {
        assert_eq!(hat_p(&Partition::empty(), &p(&[2])), BigInt::from(1));
        assert_eq!(hat_p(&p(&[1]), &Partition::empty()), BigInt::from(0));
        let g = BicoloredGraph { black: 1, white: 1, edges: vec![(0, 0), (0, 0)] };
        assert_eq!(count_embeddings(&g, &p(&[3, 3]), false), BigInt::from(0));
    }
}
