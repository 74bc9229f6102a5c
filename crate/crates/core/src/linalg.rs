//! Exact ranks of sparse integer matrices over GF(2), GF(p) and Q.
//!
//! Boundary matrices are very sparse with ±1 entries, so the workhorse is
//! column reduction keyed on each column's lowest nonzero row. Small
//! matrices go through dense kernels instead: a packed-bitset eliminator for
//! GF(2) and fraction-free Bareiss elimination over big integers for Q.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Column-major sparse integer matrix; each column is sorted by row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    pub nrows: usize,
    pub ncols: usize,
    pub cols: Vec<Vec<(u32, i64)>>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix { nrows, ncols, cols: vec![Vec::new(); ncols] }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let cols = (0..ncols)
            .map(|j| {
                (0..nrows)
                    .filter(|&i| rows[i][j] != 0)
                    .map(|i| (i as u32, rows[i][j]))
                    .collect()
            })
            .collect();
        SparseMatrix { nrows, ncols, cols }
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut rows = vec![vec![0; self.ncols]; self.nrows];
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, v) in col {
                rows[i as usize][j] = v;
            }
        }
        rows
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.cols[col]
            .binary_search_by_key(&(row as u32), |&(r, _)| r)
            .map_or(0, |pos| self.cols[col][pos].1)
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    /// Integer product `self * rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols, rhs.nrows, "dimension mismatch");
        let cols = rhs
            .cols
            .iter()
            .map(|rcol| {
                let mut acc = std::collections::BTreeMap::new();
                for &(k, b) in rcol {
                    for &(i, a) in &self.cols[k as usize] {
                        *acc.entry(i).or_insert(0i64) += a * b;
                    }
                }
                acc.into_iter().filter(|&(_, v)| v != 0).collect()
            })
            .collect();
        SparseMatrix { nrows: self.nrows, ncols: rhs.ncols, cols }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.iter().all(|&(_, v)| v == 0))
    }
}

const NO_PIVOT: u32 = u32::MAX;

/// Sparse GF(2) rank by lowest-row column reduction.
pub fn rank_gf2_sparse(m: &SparseMatrix) -> usize {
    let mut pivot_of_row = vec![NO_PIVOT; m.nrows];
    let mut reduced: Vec<Vec<u32>> = Vec::new();
    let mut scratch = Vec::new();
    for col in &m.cols {
        let mut c: Vec<u32> = col.iter().filter(|&&(_, v)| v & 1 != 0).map(|&(r, _)| r).collect();
        while let Some(&low) = c.last() {
            let p = pivot_of_row[low as usize];
            if p == NO_PIVOT {
                pivot_of_row[low as usize] = reduced.len() as u32;
                reduced.push(c);
                break;
            }
            symmetric_difference(&c, &reduced[p as usize], &mut scratch);
            std::mem::swap(&mut c, &mut scratch);
        }
    }
    reduced.len()
}

fn symmetric_difference(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}

/// Dense GF(2) rank on rows packed 64 columns per word.
pub fn rank_gf2_dense(m: &SparseMatrix) -> usize {
    let words = m.ncols.div_ceil(64);
    let mut rows = vec![vec![0u64; words]; m.nrows];
    for (j, col) in m.cols.iter().enumerate() {
        for &(i, v) in col {
            if v & 1 != 0 {
                rows[i as usize][j / 64] |= 1 << (j % 64);
            }
        }
    }
    let mut rank = 0;
    for j in 0..m.ncols {
        let (w, bit) = (j / 64, 1u64 << (j % 64));
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][w] & bit != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot = &head[rank];
        for row in tail.iter_mut().filter(|r| r[w] & bit != 0) {
            for (x, y) in row[w..].iter_mut().zip(&pivot[w..]) {
                *x ^= y;
            }
        }
        rank += 1;
    }
    rank
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Sparse GF(p) rank; `p` must be a prime below 2^32.
pub fn rank_gfp(m: &SparseMatrix, p: u64) -> usize {
    assert!((2..1 << 32).contains(&p), "modulus out of range");
    let to_field = |v: i64| v.rem_euclid(p as i64) as u64;
    let mut pivot_of_row = vec![NO_PIVOT; m.nrows];
    // Stored pivot columns are scaled so their lowest entry is 1.
    let mut reduced: Vec<Vec<(u32, u64)>> = Vec::new();
    for col in &m.cols {
        let mut c: Vec<(u32, u64)> =
            col.iter().map(|&(r, v)| (r, to_field(v))).filter(|&(_, v)| v != 0).collect();
        while let Some(&(low, coeff)) = c.last() {
            let pid = pivot_of_row[low as usize];
            if pid == NO_PIVOT {
                let inv = pow_mod(coeff, p - 2, p);
                for entry in &mut c {
                    entry.1 = entry.1 * inv % p;
                }
                pivot_of_row[low as usize] = reduced.len() as u32;
                reduced.push(c);
                break;
            }
            c = axpy_mod(&c, &reduced[pid as usize], p - coeff, p);
        }
    }
    reduced.len()
}

/// `a + scale * b` over GF(p), dropping zeros.
fn axpy_mod(a: &[(u32, u64)], b: &[(u32, u64)], scale: u64, p: u64) -> Vec<(u32, u64)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ra = a.get(i).map_or(u32::MAX, |e| e.0);
        let rb = b.get(j).map_or(u32::MAX, |e| e.0);
        let (row, v) = if ra < rb {
            i += 1;
            (ra, a[i - 1].1)
        } else if rb < ra {
            j += 1;
            (rb, scale * b[j - 1].1 % p)
        } else {
            i += 1;
            j += 1;
            (ra, (a[i - 1].1 + scale * b[j - 1].1) % p)
        };
        if v != 0 {
            out.push((row, v));
        }
    }
    out
}

/// Integer arithmetic used by fraction-free column reduction. Operations
/// return `None` on overflow.
trait ExactInt: Clone + PartialEq + std::fmt::Debug {
    fn zero_value() -> Self;
    fn vanishes(&self) -> bool;
    fn gcd(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Option<Self>;
    fn sub(&self, other: &Self) -> Option<Self>;
    fn div(&self, other: &Self) -> Self;
}

impl ExactInt for i64 {
    fn zero_value() -> Self {
        0
    }
    fn vanishes(&self) -> bool {
        *self == 0
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        self.checked_sub(*other)
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
}

impl ExactInt for BigInt {
    fn zero_value() -> Self {
        Zero::zero()
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
}

/// Fraction-free lowest-row column reduction. Each new column is combined
/// as `a * col - b * pivot` (a, b the two lowest entries over their gcd)
/// and then divided by its content, which keeps entries small on boundary
/// matrices. Rank is field-independent over Q, so this is exact.
fn rank_fraction_free<T: ExactInt>(nrows: usize, cols: Vec<Vec<(u32, T)>>) -> Option<usize> {
    let mut pivot_of_row = vec![NO_PIVOT; nrows];
    let mut reduced: Vec<Vec<(u32, T)>> = Vec::new();
    for mut c in cols {
        c.retain(|e| !e.1.vanishes());
        while let Some((low, b)) = c.last().cloned() {
            let pid = pivot_of_row[low as usize];
            if pid == NO_PIVOT {
                pivot_of_row[low as usize] = reduced.len() as u32;
                reduced.push(c);
                break;
            }
            let pivot = &reduced[pid as usize];
            let a = pivot.last().unwrap().1.clone();
            let g = a.gcd(&b);
            let (a, b) = (a.div(&g), b.div(&g));
            c = combine(&c, &a, pivot, &b)?;
            let content = c.iter().fold(T::zero_value(), |acc, e| acc.gcd(&e.1));
            if !content.vanishes() {
                for e in &mut c {
                    e.1 = e.1.div(&content);
                }
            }
        }
    }
    Some(reduced.len())
}

/// `a * x - b * y` on sorted sparse columns, dropping zeros.
fn combine<T: ExactInt>(x: &[(u32, T)], a: &T, y: &[(u32, T)], b: &T) -> Option<Vec<(u32, T)>> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let rx = x.get(i).map_or(u32::MAX, |e| e.0);
        let ry = y.get(j).map_or(u32::MAX, |e| e.0);
        let (row, v) = if rx < ry {
            i += 1;
            (rx, x[i - 1].1.mul(a)?)
        } else if ry < rx {
            j += 1;
            (ry, T::zero_value().sub(&y[j - 1].1.mul(b)?)?)
        } else {
            i += 1;
            j += 1;
            (rx, x[i - 1].1.mul(a)?.sub(&y[j - 1].1.mul(b)?)?)
        };
        if !v.vanishes() {
            out.push((row, v));
        }
    }
    Some(out)
}

/// Rank over Q by sparse fraction-free reduction; runs in `i64` and
/// restarts with big integers if an intermediate overflows.
pub fn rank_rational_sparse(m: &SparseMatrix) -> usize {
    if let Some(rank) = rank_fraction_free::<i64>(m.nrows, m.cols.clone()) {
        return rank;
    }
    let big = m
        .cols
        .iter()
        .map(|c| c.iter().map(|&(r, v)| (r, BigInt::from(v))).collect())
        .collect();
    rank_fraction_free::<BigInt>(m.nrows, big).expect("big integers do not overflow")
}

/// Dense fraction-free Bareiss elimination over big integers. Each
/// division by the previous pivot is exact.
pub fn bareiss_rank(rows: &[Vec<BigInt>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let (head, tail) = a.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        let pivot = pivot_row[col].clone();
        for row in tail.iter_mut() {
            let lead = row[col].clone();
            for j in col + 1..ncols {
                let num = &pivot * &row[j] - &lead * &pivot_row[j];
                debug_assert!((&num % &prev).is_zero(), "Bareiss division must be exact");
                row[j] = num / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

pub fn bareiss_rank_of(m: &SparseMatrix) -> usize {
    let rows: Vec<Vec<BigInt>> =
        m.to_dense().into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
    bareiss_rank(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> SparseMatrix {
        SparseMatrix::from_dense(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn triangle_incidence_ranks() {
        // Vertex-edge incidence of a triangle, signed.
        let d1 = m(&[&[-1, -1, 0], &[1, 0, -1], &[0, 1, 1]]);
        assert_eq!(rank_gf2_sparse(&d1), 2);
        assert_eq!(rank_gf2_dense(&d1), 2);
        assert_eq!(rank_gfp(&d1, 32749), 2);
        assert_eq!(rank_rational_sparse(&d1), 2);
        assert_eq!(bareiss_rank_of(&d1), 2);
    }

    #[test]
    fn characteristic_dependent_rank() {
        // det = 2: full rank over Q and GF(3), rank 1 over GF(2).
        let a = m(&[&[1, 1], &[1, -1]]);
        assert_eq!(rank_gf2_sparse(&a), 1);
        assert_eq!(rank_gf2_dense(&a), 1);
        assert_eq!(rank_gfp(&a, 3), 2);
        assert_eq!(rank_rational_sparse(&a), 2);
        assert_eq!(bareiss_rank_of(&a), 2);
    }

    #[test]
    fn overflow_falls_back_to_big_integers() {
        // Rows of powers force large intermediate entries.
        let big = 1i64 << 40;
        let a = m(&[&[big, 1, 0], &[1, big, 1], &[0, 1, big], &[big - 1, big, 3]]);
        assert_eq!(rank_rational_sparse(&a), bareiss_rank_of(&a));
        assert_eq!(rank_rational_sparse(&a), 3);
    }

    #[test]
    fn products() {
        let a = m(&[&[1, 2], &[0, 1]]);
        let b = m(&[&[1, -2], &[0, 1]]);
        assert_eq!(a.mul(&b).to_dense(), vec![vec![1, 0], vec![0, 1]]);
        assert!(SparseMatrix::zeros(2, 3).is_zero());
        assert_eq!(a.get(0, 1), 2);
        assert_eq!(a.nnz(), 3);
    }

    #[test]
    fn empty_shapes() {
        let z = SparseMatrix::zeros(0, 4);
        assert_eq!(rank_gf2_sparse(&z), 0);
        assert_eq!(rank_rational_sparse(&SparseMatrix::zeros(3, 0)), 0);
        assert_eq!(bareiss_rank_of(&SparseMatrix::zeros(2, 2)), 0);
    }
}
