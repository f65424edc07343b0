//! Exact linear algebra over `Z` and `F2`: Smith normal form, rank and
//! kernel triviality.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense matrix of arbitrary-precision integers, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            entries.extend(r.iter().cloned().map(Into::into));
        }
        IntMatrix { rows: rows.len(), cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Drop zero rows and repeated rows; neither changes the rank or kernel.
    pub fn dedup_rows(&self) -> IntMatrix {
        let mut seen = std::collections::HashSet::new();
        let mut entries = Vec::new();
        let mut rows = 0;
        for i in 0..self.rows {
            let r = self.row(i);
            if r.iter().all(Zero::is_zero) || !seen.insert(r.to_vec()) {
                continue;
            }
            entries.extend_from_slice(r);
            rows += 1;
        }
        IntMatrix { rows, cols: self.cols, entries }
    }

    pub fn smith_normal_form(&self) -> SmithForm {
        smith_normal_form(self)
    }

    pub fn kernel_is_zero(&self, modulus: Modulus) -> bool {
        kernel_is_zero(self, modulus)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let r = self.row(i).iter().map(ToString::to_string).collect::<Vec<_>>();
            writeln!(f, "[{}]", r.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Modulus {
    None,
    Two,
}

/// Invariant factors `d1 | d2 | ...` (all positive) and the rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub invariant_factors: Vec<BigInt>,
    pub rank: usize,
}

impl SmithForm {
    /// Cokernel `Z^rows / image`: free rank plus the nontrivial cyclic
    /// factors.
    pub fn cokernel(&self, rows: usize) -> (usize, Vec<BigInt>) {
        let torsion = self.invariant_factors.iter().filter(|d| !d.is_one()).cloned().collect();
        (rows - self.rank, torsion)
    }
}

/// Smith normal form by elementary integer row and column operations,
/// pivoting on the entry of least absolute value.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let mut a: Vec<Vec<BigInt>> = (0..m.rows).map(|i| m.row(i).to_vec()).collect();
    let (rows, cols) = (m.rows, m.cols);
    let mut diagonal = Vec::new();

    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = min_abs_entry(&a, t..rows, t..cols) else {
            break;
        };
        a.swap(t, pi);
        swap_cols(&mut a, t, pj);

        loop {
            let pivot = a[t][t].clone();
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&pivot);
                let (head, tail) = a.split_at_mut(i);
                for (x, y) in tail[0][t..].iter_mut().zip(&head[t][t..]) {
                    *x -= &q * y;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&pivot);
                for row in a.iter_mut().skip(t) {
                    let y = row[t].clone();
                    row[j] -= &q * y;
                }
            }
            // the pivot is done once its row and column are clear; otherwise
            // a smaller remainder becomes the new pivot
            let col_rest = min_abs_entry(&a, t + 1..rows, t..t + 1);
            let row_rest = min_abs_entry(&a, t..t + 1, t + 1..cols);
            let next = match (col_rest, row_rest) {
                (None, None) => break,
                (Some(p), None) | (None, Some(p)) => p,
                (Some(p), Some(q)) => {
                    if a[p.0][p.1].abs() <= a[q.0][q.1].abs() {
                        p
                    } else {
                        q
                    }
                }
            };
            a.swap(t, next.0);
            swap_cols(&mut a, t, next.1);
        }
        diagonal.push(a[t][t].abs());
    }

    // a diagonal matrix is equivalent to the one with (gcd, lcm) in place of
    // any two of its entries
    let k = diagonal.len();
    for i in 0..k {
        for j in i + 1..k {
            if diagonal[j].is_multiple_of(&diagonal[i]) {
                continue;
            }
            let g = diagonal[i].gcd(&diagonal[j]);
            let l = diagonal[i].lcm(&diagonal[j]);
            diagonal[i] = g;
            diagonal[j] = l;
        }
    }
    SmithForm { rank: k, invariant_factors: diagonal }
}

fn swap_cols(a: &mut [Vec<BigInt>], i: usize, j: usize) {
    if i != j {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    }
}

fn min_abs_entry(
    a: &[Vec<BigInt>],
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            let v = &a[i][j];
            if v.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| v.abs() < a[bi][bj].abs()) {
                best = Some((i, j));
                if v.abs().is_one() {
                    return best;
                }
            }
        }
    }
    best
}

/// Rank of the matrix reduced mod 2.
pub fn rank_mod2(m: &IntMatrix) -> usize {
    let words = m.cols.div_ceil(64);
    let mut rows: Vec<Vec<u64>> = (0..m.rows)
        .map(|i| {
            let mut bits = vec![0u64; words];
            for (j, v) in m.row(i).iter().enumerate() {
                if v.is_odd() {
                    bits[j / 64] |= 1 << (j % 64);
                }
            }
            bits
        })
        .collect();
    let mut rank = 0;
    for col in 0..m.cols {
        let (w, b) = (col / 64, 1u64 << (col % 64));
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][w] & b != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (i, r) in rows.iter_mut().enumerate() {
            if i != rank && r[w] & b != 0 {
                for (x, y) in r.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Whether the matrix, as a map of free modules (columns are the source
/// basis), is injective over `Z` or over `F2`.
pub fn kernel_is_zero(m: &IntMatrix, modulus: Modulus) -> bool {
    if m.cols == 0 {
        return true;
    }
    let m = m.dedup_rows();
    match modulus {
        Modulus::None => smith_normal_form(&m).rank == m.cols,
        Modulus::Two => rank_mod2(&m) == m.cols,
    }
}
