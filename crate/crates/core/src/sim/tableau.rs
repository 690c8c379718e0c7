//! Product-basis sampling of graph states from the stabilizer description.
//!
//! Measuring every qubit in a fixed Pauli basis yields outcomes uniformly
//! distributed over an affine subspace: each stabilizer element whose letters
//! all agree with the measured bases fixes the parity of its support. The
//! compatible elements `K_p` are the solutions `p` of a linear system in the
//! generator exponents, so sampling reduces to one Gaussian elimination per
//! setting and a back-substitution per shot.

use rand::Rng;

use crate::error::Result;
use crate::gf2::{get_bit, set_bit, words_for, xor_into};
use crate::graph::Graph;
use crate::oracle::pauli::{stabilizer_group_element, Letter};

/// Reduced row echelon form in place; returns pivot columns, one per
/// leading row. Only the first `cols` columns take part in pivoting.
fn rref(rows: &mut Vec<Vec<u64>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| get_bit(&rows[i], c)) else { continue };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && get_bit(row, c) {
                xor_into(row, &pivot);
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{p : A p = 0}` for `A` given by rows over `n` columns.
fn nullspace(mut rows: Vec<Vec<u64>>, n: usize) -> Vec<Vec<u64>> {
    let pivots = rref(&mut rows, n);
    let mut is_pivot = vec![false; n];
    pivots.iter().for_each(|&c| is_pivot[c] = true);
    let w = words_for(n);
    (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![0u64; w];
            set_bit(&mut v, f, true);
            for (row, &pc) in rows.iter().zip(&pivots) {
                if get_bit(row, f) {
                    set_bit(&mut v, pc, true);
                }
            }
            v
        })
        .collect()
}

/// Parity constraints of one measurement setting on `|G⟩`.
#[derive(Clone, Debug)]
pub struct TableauSampler {
    n: usize,
    /// RREF rows over the outcome bits; the right-hand side is kept separately.
    rows: Vec<Vec<u64>>,
    rhs: Vec<bool>,
    pivots: Vec<usize>,
    last_mask: u64,
}

impl TableauSampler {
    /// `bases[q]` is the measured Pauli on qubit `q` (not `I`).
    pub fn new(g: &Graph, bases: &[Letter]) -> Result<Self> {
        let n = g.n();
        let w = words_for(n);
        // K_p has X part p and Z part Γp (Γ symmetric)
        let mut cond = Vec::with_capacity(n);
        for (q, b) in bases.iter().enumerate() {
            let mut row = vec![0u64; w];
            match b {
                Letter::Z => set_bit(&mut row, q, true),
                Letter::X => row.copy_from_slice(g.adjacency_row(q)),
                Letter::Y => {
                    row.copy_from_slice(g.adjacency_row(q));
                    set_bit(&mut row, q, true);
                }
                Letter::I => {
                    return Err(crate::error::Error::InvalidContext("identity is not a measurement basis".into()))
                }
            }
            cond.push(row);
        }
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for p in nullspace(cond, n) {
            let bits: Vec<bool> = (0..n).map(|i| get_bit(&p, i)).collect();
            let k = stabilizer_group_element(g, &bits)?;
            let support: Vec<u64> = k.x.iter().zip(&k.z).map(|(a, b)| a | b).collect();
            let sign = k.sign().expect("stabilizer elements are Hermitian");
            rows.push(support);
            rhs.push(sign < 0);
        }
        // carry the right-hand side through elimination as column n
        let mut aug: Vec<Vec<u64>> = rows
            .into_iter()
            .zip(&rhs)
            .map(|(mut r, &b)| {
                r.resize(words_for(n + 1), 0);
                set_bit(&mut r, n, b);
                r
            })
            .collect();
        let pivots = rref(&mut aug, n);
        let rhs = aug.iter().map(|r| get_bit(r, n)).collect();
        let rows = aug
            .into_iter()
            .map(|mut r| {
                set_bit(&mut r, n, false);
                r.truncate(w);
                r
            })
            .collect();
        let last_mask = if n % 64 == 0 { u64::MAX } else { (1u64 << (n % 64)) - 1 };
        Ok(TableauSampler { n, rows, rhs, pivots, last_mask })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of independent parity constraints.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Draws one shot into `out` (`words_for(n)` words).
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [u64]) {
        for w in out.iter_mut() {
            *w = rng.random();
        }
        if let Some(last) = out.last_mut() {
            *last &= self.last_mask;
        }
        for ((row, &pc), &b) in self.rows.iter().zip(&self.pivots).zip(&self.rhs) {
            set_bit(out, pc, false);
            // other pivot columns are zero in this row, so order is irrelevant
            let parity: u32 = row.iter().zip(out.iter()).map(|(a, o)| (a & o).count_ones()).sum();
            set_bit(out, pc, (parity % 2 == 1) ^ b);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn bases_for(n: usize, x: &[usize]) -> Vec<Letter> {
        (0..n).map(|q| if x.contains(&q) { Letter::X } else { Letter::Z }).collect()
    }

    #[test]
    fn chain_setting_constraints_hold() {
        let g = Graph::chain(4).unwrap();
        let t = TableauSampler::new(&g, &bases_for(4, &[0, 2])).unwrap();
        assert_eq!(t.rank(), 2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let mut shot = [0u64];
        for _ in 0..500 {
            t.sample(&mut rng, &mut shot);
            let b = |q: usize| shot[0] >> q & 1;
            assert_eq!(b(0) ^ b(1), 0, "x0 z1 = +1");
            assert_eq!(b(1) ^ b(2) ^ b(3), 0, "z1 x2 z3 = +1");
        }
    }

    #[test]
    fn all_z_is_uniform() {
        let g = Graph::lattice(3, 3).unwrap();
        let t = TableauSampler::new(&g, &[Letter::Z; 9]).unwrap();
        assert_eq!(t.rank(), 0);
    }

    #[test]
    fn y_bases_carry_signs() {
        // chain(2): S0 S1 = +YY, so YY parity is even
        let g = Graph::chain(2).unwrap();
        let t = TableauSampler::new(&g, &[Letter::Y, Letter::Y]).unwrap();
        assert_eq!(t.rank(), 1);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let mut shot = [0u64];
        let mut seen = [false; 4];
        for _ in 0..200 {
            t.sample(&mut rng, &mut shot);
            assert_eq!(shot[0].count_ones() % 2, 0);
            seen[shot[0] as usize] = true;
        }
        assert!(seen[0] && seen[3]);
    }

    #[test]
    fn wide_graphs() {
        let g = Graph::chain(130).unwrap();
        let class: Vec<usize> = (0..130).step_by(2).collect();
        let t = TableauSampler::new(&g, &bases_for(130, &class)).unwrap();
        assert_eq!(t.rank(), 65);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut shot = vec![0u64; 3];
        t.sample(&mut rng, &mut shot);
        assert_eq!(shot[2] >> 2, 0);
        for &i in &class {
            let mut par = get_bit(&shot, i) as u32;
            for j in g.neighbors(i) {
                par += get_bit(&shot, j) as u32;
            }
            assert_eq!(par % 2, 0);
        }
    }
}
