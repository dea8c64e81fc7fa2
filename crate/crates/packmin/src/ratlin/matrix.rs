//! Dense integer and rational matrices with the normal-form algorithms used
//! for lattice work: column-style HNF, SNF, exact inversion, LDL^T and Schur
//! complements, saturated kernels.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rat::{Int, Rat};
use crate::{Error, Result};

/// Row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Int>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Int::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Int>>) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() }
    }

    pub fn from_cols(cols: Vec<Vec<Int>>) -> Self {
        let c = cols.len();
        let r = if c == 0 { 0 } else { cols[0].len() };
        assert!(cols.iter().all(|col| col.len() == r), "ragged columns");
        let mut m = Self::zero(r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                *m.at_mut(i, j) = v.clone();
            }
        }
        m
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| Int::from(v)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Int {
        &self.entries[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Int {
        &mut self.entries[r * self.cols + c]
    }

    pub fn col(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut p = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut s = Int::zero();
                for k in 0..self.cols {
                    s += self.at(i, k) * other.at(k, j);
                }
                *p.at_mut(i, j) = s;
            }
        }
        p
    }

    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j { self.at(i, j).is_one() } else { self.at(i, j).is_zero() }
                })
            })
    }

    pub fn to_rat(&self) -> RatMatrix {
        let mut m = RatMatrix::zero(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *m.at_mut(i, j) = Rat::from_integer(self.at(i, j).clone());
            }
        }
        m
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// col_dst += q * col_src
    fn add_col_mul(&mut self, dst: usize, src: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let add = self.at(i, src) * q;
            *self.at_mut(i, dst) += add;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self.at(i, j).clone();
            *self.at_mut(i, j) = v;
        }
    }

    /// Flattened column-major key; used as the canonical identity of lattice
    /// planes (after HNF) and for deterministic lexicographic tie-breaking.
    pub fn key(&self) -> Vec<Int> {
        let mut k = Vec::with_capacity(2 + self.rows * self.cols);
        k.push(Int::from(self.rows));
        k.push(Int::from(self.cols));
        for j in 0..self.cols {
            for i in 0..self.rows {
                k.push(self.at(i, j).clone());
            }
        }
        k
    }
}

/// Row-major rational matrix; entries exact and normalized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl RatMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, entries: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RatMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() }
    }

    pub fn from_cols(cols: Vec<Vec<Rat>>) -> Self {
        let c = cols.len();
        let r = if c == 0 { 0 } else { cols[0].len() };
        let mut m = Self::zero(r, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), r, "ragged columns");
            for (i, v) in col.iter().enumerate() {
                *m.at_mut(i, j) = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Rat {
        &self.entries[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Rat {
        &mut self.entries[r * self.cols + c]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut p = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut s = Rat::zero();
                for k in 0..self.cols {
                    s += self.at(i, k) * other.at(k, j);
                }
                *p.at_mut(i, j) = s;
            }
        }
        p
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.at(i, j) == self.at(j, i)))
    }

    pub fn is_identity_matrix(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j { self.at(i, j).is_one() } else { self.at(i, j).is_zero() }
                })
            })
    }

    /// Determinant by fraction-preserving Gaussian elimination.
    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rat::one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m.at(r, col).is_zero());
            let Some(p) = pivot else { return Rat::zero() };
            if p != col {
                for j in 0..n {
                    let a = m.at(p, j).clone();
                    let b = m.at(col, j).clone();
                    *m.at_mut(p, j) = b;
                    *m.at_mut(col, j) = a;
                }
                det = -det;
            }
            let pv = m.at(col, col).clone();
            det *= &pv;
            for r in col + 1..n {
                let f = m.at(r, col) / &pv;
                if f.is_zero() {
                    continue;
                }
                for j in col..n {
                    let sub = m.at(col, j) * &f;
                    *m.at_mut(r, j) -= sub;
                }
            }
        }
        det
    }

    /// Exact inverse; `SingularMatrix` when det = 0.
    pub fn inverse(&self) -> Result<RatMatrix> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = RatMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m.at(r, col).is_zero());
            let Some(p) = pivot else { return Err(Error::SingularMatrix) };
            if p != col {
                for j in 0..n {
                    let (a, b) = (m.at(p, j).clone(), m.at(col, j).clone());
                    *m.at_mut(p, j) = b;
                    *m.at_mut(col, j) = a;
                    let (a, b) = (inv.at(p, j).clone(), inv.at(col, j).clone());
                    *inv.at_mut(p, j) = b;
                    *inv.at_mut(col, j) = a;
                }
            }
            let pv = m.at(col, col).clone();
            for j in 0..n {
                let v = m.at(col, j) / &pv;
                *m.at_mut(col, j) = v;
                let v = inv.at(col, j) / &pv;
                *inv.at_mut(col, j) = v;
            }
            for r in 0..n {
                if r == col || m.at(r, col).is_zero() {
                    continue;
                }
                let f = m.at(r, col).clone();
                for j in 0..n {
                    let sub = m.at(col, j) * &f;
                    *m.at_mut(r, j) -= sub;
                    let sub = inv.at(col, j) * &f;
                    *inv.at_mut(r, j) -= sub;
                }
            }
        }
        Ok(inv)
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        for col in 0..cols {
            let pivot = (rank..rows).find(|&r| !m.at(r, col).is_zero());
            let Some(p) = pivot else { continue };
            if p != rank {
                for j in 0..cols {
                    let (a, b) = (m.at(p, j).clone(), m.at(rank, j).clone());
                    *m.at_mut(p, j) = b;
                    *m.at_mut(rank, j) = a;
                }
            }
            let pv = m.at(rank, col).clone();
            for r in rank + 1..rows {
                let f = m.at(r, col) / &pv;
                if f.is_zero() {
                    continue;
                }
                for j in col..cols {
                    let sub = m.at(rank, j) * &f;
                    *m.at_mut(r, j) -= sub;
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }
}

/// Column-style Hermite normal form: returns (H, U) with H = M * U, U
/// unimodular. Pivot rows strictly increase over the nonzero columns, pivots
/// are positive, and in each pivot row the entries left of the pivot are
/// reduced into [0, pivot). Zero columns end up rightmost. A matrix already
/// in this form is returned unchanged with U = identity.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.cols());
    let (rows, cols) = (m.rows(), m.cols());
    let mut pivot_col = 0usize;
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    for row in 0..rows {
        if pivot_col == cols {
            break;
        }
        // Reduce columns pivot_col.. so at most one has a nonzero entry in
        // this row, by repeated division against the smallest magnitude.
        loop {
            let mut nonzero: Vec<usize> =
                (pivot_col..cols).filter(|&j| !h.at(row, j).is_zero()).collect();
            if nonzero.len() <= 1 {
                break;
            }
            nonzero.sort_by(|&a, &b| {
                h.at(row, a).abs().cmp(&h.at(row, b).abs()).then(a.cmp(&b))
            });
            let base = nonzero[0];
            let base_val = h.at(row, base).clone();
            for &j in &nonzero[1..] {
                let q = -(h.at(row, j).div_floor(&base_val));
                h.add_col_mul(j, base, &q);
                u.add_col_mul(j, base, &q);
            }
        }
        let nz = (pivot_col..cols).find(|&j| !h.at(row, j).is_zero());
        let Some(j) = nz else { continue };
        if j != pivot_col {
            h.swap_cols(j, pivot_col);
            u.swap_cols(j, pivot_col);
        }
        if h.at(row, pivot_col).is_negative() {
            h.negate_col(pivot_col);
            u.negate_col(pivot_col);
        }
        pivots.push((row, pivot_col));
        pivot_col += 1;
    }
    // Reduce entries left of each pivot into [0, pivot).
    for &(row, col) in &pivots {
        let pv = h.at(row, col).clone();
        for j in 0..col {
            let q = -(h.at(row, j).div_floor(&pv));
            h.add_col_mul(j, col, &q);
            u.add_col_mul(j, col, &q);
        }
    }
    (h, u)
}

/// Smith normal form: (S, U, V) with S = U * M * V diagonal, d_i | d_{i+1},
/// diagonal entries non-negative, U and V unimodular.
pub fn snf(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let mut s = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut v = IntMatrix::identity(m.cols());
    let (rows, cols) = (m.rows(), m.cols());
    let dim = rows.min(cols);

    let swap_rows = |mat: &mut IntMatrix, a: usize, b: usize| {
        if a == b {
            return;
        }
        for j in 0..mat.cols() {
            let (x, y) = (mat.at(a, j).clone(), mat.at(b, j).clone());
            *mat.at_mut(a, j) = y;
            *mat.at_mut(b, j) = x;
        }
    };
    let add_row_mul = |mat: &mut IntMatrix, dst: usize, src: usize, q: &Int| {
        if q.is_zero() {
            return;
        }
        for j in 0..mat.cols() {
            let add = mat.at(src, j) * q;
            *mat.at_mut(dst, j) += add;
        }
    };

    let mut t = 0usize;
    while t < dim {
        // Find the entry of smallest nonzero magnitude in the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if s.at(i, j).is_zero() {
                    continue;
                }
                match best {
                    None => best = Some((i, j)),
                    Some((bi, bj)) => {
                        if s.at(i, j).abs() < s.at(bi, bj).abs() {
                            best = Some((i, j));
                        }
                    }
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        swap_rows(&mut s, pi, t);
        swap_rows(&mut u, pi, t);
        s.swap_cols(pj, t);
        v.swap_cols(pj, t);

        // Clear row and column t; restart whenever a remainder shrinks the pivot.
        'clear: loop {
            for i in t + 1..rows {
                if s.at(i, t).is_zero() {
                    continue;
                }
                let q = -(s.at(i, t).div_floor(s.at(t, t)));
                add_row_mul(&mut s, i, t, &q);
                add_row_mul(&mut u, i, t, &q);
                if !s.at(i, t).is_zero() {
                    // remainder is smaller than pivot; promote it
                    swap_rows(&mut s, i, t);
                    swap_rows(&mut u, i, t);
                    continue 'clear;
                }
            }
            for j in t + 1..cols {
                if s.at(t, j).is_zero() {
                    continue;
                }
                let q = -(s.at(t, j).div_floor(s.at(t, t)));
                s.add_col_mul(j, t, &q);
                v.add_col_mul(j, t, &q);
                if !s.at(t, j).is_zero() {
                    s.swap_cols(j, t);
                    v.swap_cols(j, t);
                    continue 'clear;
                }
            }
            // Divisibility: pivot must divide the whole trailing block.
            let pv = s.at(t, t).clone();
            let mut fixed = true;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !s.at(i, j).mod_floor(&pv).is_zero() {
                        add_row_mul(&mut s, t, i, &Int::one());
                        add_row_mul(&mut u, t, i, &Int::one());
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if s.at(t, t).is_negative() {
            for j in 0..cols {
                let neg = -s.at(t, j).clone();
                *s.at_mut(t, j) = neg;
            }
            for j in 0..u.cols() {
                let neg = -u.at(t, j).clone();
                *u.at_mut(t, j) = neg;
            }
        }
        t += 1;
    }
    (s, u, v)
}

/// LDL^T factorization of a symmetric positive definite rational matrix:
/// G = L * diag(D) * L^T with L unit lower triangular and all D entries > 0.
pub fn ldlt(g: &RatMatrix) -> Result<(RatMatrix, Vec<Rat>)> {
    if !g.is_symmetric() {
        return Err(Error::NotPositiveDefinite);
    }
    let n = g.rows();
    let mut l = RatMatrix::identity(n);
    let mut d: Vec<Rat> = Vec::with_capacity(n);
    for j in 0..n {
        let mut dj = g.at(j, j).clone();
        for k in 0..j {
            dj -= l.at(j, k) * l.at(j, k) * &d[k];
        }
        if dj <= Rat::zero() {
            return Err(Error::NotPositiveDefinite);
        }
        for i in j + 1..n {
            let mut v = g.at(i, j).clone();
            for k in 0..j {
                v -= l.at(i, k) * l.at(j, k) * &d[k];
            }
            *l.at_mut(i, j) = v / &dj;
        }
        d.push(dj);
    }
    Ok((l, d))
}

/// Schur complement G / G[pivot_block]: Gram matrix of the non-pivot
/// generators after projecting orthogonally to the span of the pivot ones.
/// The pivot block of a positive definite matrix is always invertible.
pub fn schur_complement(g: &RatMatrix, pivot_block: &[usize]) -> RatMatrix {
    assert!(g.is_symmetric(), "schur_complement expects a symmetric matrix");
    let n = g.rows();
    assert!(!pivot_block.is_empty() && pivot_block.len() < n, "pivot block must be proper");
    let rest: Vec<usize> = (0..n).filter(|i| !pivot_block.contains(i)).collect();
    let sub = |rows: &[usize], cols: &[usize]| {
        let mut m = RatMatrix::zero(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                *m.at_mut(a, b) = g.at(i, j).clone();
            }
        }
        m
    };
    let gpp = sub(pivot_block, pivot_block);
    let grp = sub(&rest, pivot_block);
    let gpr = sub(pivot_block, &rest);
    let grr = sub(&rest, &rest);
    let gpp_inv = gpp.inverse().expect("pivot block of a PD matrix is invertible");
    let corr = grp.mul(&gpp_inv).mul(&gpr);
    let mut out = grr;
    for i in 0..out.rows() {
        for j in 0..out.cols() {
            let v = out.at(i, j) - corr.at(i, j);
            *out.at_mut(i, j) = v;
        }
    }
    out
}

/// Primitive integer basis of the rational kernel {x : M x = 0}, returned as
/// HNF-canonical columns. The kernel lattice of a rational matrix is
/// saturated by construction.
pub fn kernel_basis(m: &RatMatrix) -> IntMatrix {
    // Clear denominators row by row; the kernel is unchanged.
    let mut a = IntMatrix::zero(m.rows(), m.cols());
    for i in 0..m.rows() {
        let mut lcm = Int::one();
        for j in 0..m.cols() {
            lcm = lcm.lcm(m.at(i, j).denom());
        }
        for j in 0..m.cols() {
            let v = m.at(i, j) * Rat::from_integer(lcm.clone());
            assert!(v.denom().is_one());
            *a.at_mut(i, j) = v.numer().clone();
        }
    }
    let (s, _, v) = snf(&a);
    let dim = a.rows().min(a.cols());
    let free: Vec<usize> = (0..a.cols())
        .filter(|&j| j >= dim || s.at(j, j).is_zero())
        .collect();
    let cols: Vec<Vec<Int>> = free.iter().map(|&j| v.col(j)).collect();
    let k = IntMatrix::from_cols(cols);
    if k.cols() == 0 {
        return IntMatrix::zero(m.cols(), 0);
    }
    let (h, _) = hnf(&k);
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlin::{rat, rat_i};

    fn im(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows)
    }

    fn rm(rows: &[&[(i64, i64)]]) -> RatMatrix {
        RatMatrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&(p, q)| rat(p, q)).collect()).collect(),
        )
    }

    /// Naive column elimination oracle used to derive HNF expectations: it
    /// reduces with plain extended-gcd steps and canonicalizes the same way,
    /// but shares no code with `hnf`.
    fn hnf_oracle(m: &IntMatrix) -> IntMatrix {
        let mut cols: Vec<Vec<Int>> = (0..m.cols()).map(|j| m.col(j)).collect();
        let rows = m.rows();
        let mut pc = 0usize;
        let mut pivots = Vec::new();
        for row in 0..rows {
            if pc == cols.len() {
                break;
            }
            loop {
                let nz: Vec<usize> =
                    (pc..cols.len()).filter(|&j| !cols[j][row].is_zero()).collect();
                if nz.len() <= 1 {
                    break;
                }
                // subtract the column with the smallest |entry| from the others, one step
                let base = *nz
                    .iter()
                    .min_by_key(|&&j| (cols[j][row].abs(), j))
                    .unwrap();
                for &j in nz.iter().filter(|&&j| j != base) {
                    let q = cols[j][row].div_floor(&cols[base][row]);
                    for i in 0..rows {
                        let sub = &cols[base][i] * &q;
                        cols[j][i] -= sub;
                    }
                }
            }
            if let Some(j) = (pc..cols.len()).find(|&j| !cols[j][row].is_zero()) {
                cols.swap(j, pc);
                if cols[pc][row].is_negative() {
                    for v in cols[pc].iter_mut() {
                        *v = -v.clone();
                    }
                }
                pivots.push((row, pc));
                pc += 1;
            }
        }
        for &(row, col) in &pivots {
            let pv = cols[col][row].clone();
            for j in 0..col {
                let q = cols[j][row].div_floor(&pv);
                for i in 0..rows {
                    let sub = &cols[col][i] * &q;
                    cols[j][i] -= sub;
                }
            }
        }
        IntMatrix::from_cols(cols)
    }

    #[test]
    fn hnf_identity() {
        let m = IntMatrix::identity(2);
        let (h, u) = hnf(&m);
        assert!(h.is_identity());
        assert!(u.is_identity());
    }

    #[test]
    fn hnf_skew_columns() {
        // columns (2,0) and (1,1); expected value frozen from the column
        // elimination oracle (the sublattice {x = y mod 2} has determinant 2).
        let m = im(&[&[2, 1], &[0, 1]]);
        let expect = hnf_oracle(&m);
        assert_eq!(expect, im(&[&[1, 0], &[1, 2]]));
        let (h, u) = hnf(&m);
        assert_eq!(h, expect);
        assert_eq!(m.mul(&u), h);
        assert_eq!(u.to_rat().det().abs(), rat_i(1));
    }

    #[test]
    fn hnf_already_canonical() {
        let m = im(&[&[2, 0], &[0, 2]]);
        let (h, u) = hnf(&m);
        assert_eq!(h, m);
        assert!(u.is_identity());
    }

    #[test]
    fn hnf_idempotent_and_factorization() {
        let samples = [
            im(&[&[4, 6], &[2, 2]]),
            im(&[&[0, 3], &[5, 1]]),
            im(&[&[2, 4, 6], &[0, 2, 2], &[1, 1, 1]]),
            im(&[&[1, 1, 0], &[0, 2, 2], &[3, 0, 3]]),
            im(&[&[2, 4], &[1, 2], &[0, 0]]),
            im(&[&[0, 0], &[0, 0]]),
        ];
        for m in samples {
            let (h, u) = hnf(&m);
            assert_eq!(m.mul(&u), h, "H = M U");
            assert_eq!(u.to_rat().det().abs(), rat_i(1), "U unimodular");
            assert_eq!(h, hnf_oracle(&m), "matches naive oracle");
            let (h2, u2) = hnf(&h);
            assert_eq!(h2, h, "idempotent");
            assert!(u2.is_identity(), "identity transform on canonical input");
        }
    }

    /// d_k = gcd of determinants of all k x k minors; ratios give the
    /// elementary divisors. Independent of the SNF elimination path.
    fn minor_gcd(m: &IntMatrix, k: usize) -> Int {
        fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for first in 0..n {
                for mut rest in combos(n, k - 1) {
                    if rest.iter().all(|&r| r > first) {
                        let mut c = vec![first];
                        c.append(&mut rest);
                        out.push(c);
                    }
                }
            }
            out
        }
        let mut g = Int::zero();
        for ri in combos(m.rows(), k) {
            for ci in combos(m.cols(), k) {
                let mut sub = RatMatrix::zero(k, k);
                for (a, &i) in ri.iter().enumerate() {
                    for (b, &j) in ci.iter().enumerate() {
                        *sub.at_mut(a, b) = Rat::from_integer(m.at(i, j).clone());
                    }
                }
                let d = sub.det();
                assert!(d.denom().is_one());
                g = g.gcd(d.numer());
            }
        }
        g
    }

    #[test]
    fn snf_examples() {
        // diag(2,3): elementary divisor oracle gives d1 = 1, d1*d2 = |det| = 6.
        let m = im(&[&[2, 0], &[0, 3]]);
        assert_eq!(minor_gcd(&m, 1), Int::from(1));
        assert_eq!(minor_gcd(&m, 2), Int::from(6));
        let (s, u, v) = snf(&m);
        assert_eq!(s, im(&[&[1, 0], &[0, 6]]));
        assert_eq!(u.mul(&m).mul(&v), s);

        let (s, _, _) = snf(&IntMatrix::identity(3));
        assert!(s.is_identity());

        let z = IntMatrix::zero(2, 3);
        let (s, _, _) = snf(&z);
        assert_eq!(s, z);
    }

    #[test]
    fn snf_divisibility_chain() {
        let samples = [
            im(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]),
            im(&[&[6, 10], &[15, 4]]),
            im(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]),
            im(&[&[0, 2], &[4, 0], &[6, 6]]),
        ];
        for m in samples {
            let (s, u, v) = snf(&m);
            assert_eq!(u.mul(&m).mul(&v), s);
            assert_eq!(u.to_rat().det().abs(), rat_i(1));
            assert_eq!(v.to_rat().det().abs(), rat_i(1));
            let dim = m.rows().min(m.cols());
            for t in 0..dim {
                for j in 0..s.cols() {
                    if j != t {
                        assert!(s.at(t, j).is_zero());
                    }
                }
                assert!(!s.at(t, t).is_negative());
                if t + 1 < dim && !s.at(t + 1, t + 1).is_zero() {
                    assert!(
                        s.at(t + 1, t + 1).mod_floor(s.at(t, t).max(&Int::one())).is_zero(),
                        "divisibility chain"
                    );
                }
            }
            // cross-check elementary divisors against the minor-gcd oracle
            for k in 1..=dim {
                let g = minor_gcd(&m, k);
                if g.is_zero() {
                    break;
                }
                let prod = g.clone();
                let mut sprod = Int::from(1);
                for t in 0..k {
                    sprod *= s.at(t, t);
                }
                assert_eq!(sprod, prod, "product of first {k} divisors");
            }
        }
    }

    #[test]
    fn inverse_examples() {
        // hexagonal Gram; must equal the dual closed form a' = 4/3, b' = -2/3
        let g = rm(&[&[(1, 1), (1, 2)], &[(1, 2), (1, 1)]]);
        let gi = g.inverse().unwrap();
        assert_eq!(gi, rm(&[&[(4, 3), (-2, 3)], &[(-2, 3), (4, 3)]]));
        assert_eq!(g.mul(&gi), RatMatrix::identity(2));

        assert_eq!(RatMatrix::identity(3).inverse().unwrap(), RatMatrix::identity(3));

        let d = rm(&[&[(2, 1), (0, 1)], &[(0, 1), (5, 1)]]);
        assert_eq!(d.inverse().unwrap(), rm(&[&[(1, 2), (0, 1)], &[(0, 1), (1, 5)]]));

        let sing = rm(&[&[(1, 1), (2, 1)], &[(2, 1), (4, 1)]]);
        assert!(matches!(sing.inverse(), Err(Error::SingularMatrix)));

        // involution on a non-trivial matrix
        let m = rm(&[&[(3, 2), (1, 3)], &[(-1, 1), (2, 7)]]);
        assert_eq!(m.inverse().unwrap().inverse().unwrap(), m);
    }

    #[test]
    fn ldlt_examples() {
        let (l, d) = ldlt(&RatMatrix::identity(3)).unwrap();
        assert!(l.mul(&RatMatrix::identity(3)).is_symmetric());
        assert_eq!(d, vec![rat_i(1), rat_i(1), rat_i(1)]);

        // hand elimination: [[1,1/2],[1/2,1]] -> L = [[1,0],[1/2,1]], D = (1, 3/4)
        let g = rm(&[&[(1, 1), (1, 2)], &[(1, 2), (1, 1)]]);
        let (l, d) = ldlt(&g).unwrap();
        assert_eq!(*l.at(1, 0), rat(1, 2));
        assert_eq!(d, vec![rat_i(1), rat(3, 4)]);

        // hand elimination: [[4,2],[2,2]] -> L21 = 1/2, D = (4,1)
        let g = rm(&[&[(4, 1), (2, 1)], &[(2, 1), (2, 1)]]);
        let (l, d) = ldlt(&g).unwrap();
        assert_eq!(*l.at(1, 0), rat(1, 2));
        assert_eq!(d, vec![rat_i(4), rat_i(1)]);

        let not_pd = rm(&[&[(1, 1), (2, 1)], &[(2, 1), (1, 1)]]);
        assert!(matches!(ldlt(&not_pd), Err(Error::NotPositiveDefinite)));
    }

    #[test]
    fn ldlt_reconstructs() {
        let samples = [
            rm(&[&[(2, 1), (1, 1), (0, 1)], &[(1, 1), (3, 1), (1, 2)], &[(0, 1), (1, 2), (5, 4)]]),
            rm(&[&[(1, 1), (1, 2)], &[(1, 2), (1, 1)]]),
        ];
        for g in samples {
            let (l, d) = ldlt(&g).unwrap();
            let mut dm = RatMatrix::zero(d.len(), d.len());
            for (i, v) in d.iter().enumerate() {
                *dm.at_mut(i, i) = v.clone();
            }
            assert_eq!(l.mul(&dm).mul(&l.transpose()), g);
        }
    }

    #[test]
    fn schur_examples() {
        // G_{1,1/2} in dimension 3, pivot {v1}: matches the projected Gram
        // with a~ = 3/4, b~ = 1/4
        let g = rm(&[
            &[(1, 1), (1, 2), (1, 2)],
            &[(1, 2), (1, 1), (1, 2)],
            &[(1, 2), (1, 2), (1, 1)],
        ]);
        let s = schur_complement(&g, &[0]);
        assert_eq!(s, rm(&[&[(3, 4), (1, 4)], &[(1, 4), (3, 4)]]));

        let d = RatMatrix::identity(2);
        assert_eq!(schur_complement(&d, &[0]), RatMatrix::identity(1));

        let g2 = rm(&[&[(1, 1), (1, 2)], &[(1, 2), (1, 1)]]);
        assert_eq!(schur_complement(&g2, &[0]), rm(&[&[(3, 4)]]));
    }

    #[test]
    fn schur_of_pd_is_pd() {
        let g = rm(&[
            &[(4, 1), (1, 1), (1, 2)],
            &[(1, 1), (3, 1), (-1, 3)],
            &[(1, 2), (-1, 3), (2, 1)],
        ]);
        assert!(ldlt(&g).is_ok());
        for pivot in [&[0usize][..], &[1], &[2], &[0, 1], &[1, 2], &[0, 2]] {
            let s = schur_complement(&g, pivot);
            assert!(ldlt(&s).is_ok(), "pivot {pivot:?} gives PD complement");
        }
    }

    #[test]
    fn kernel_examples() {
        // row (1,1): symmetry-forced basis {(1,-1)}
        let m = rm(&[&[(1, 1), (1, 1)]]);
        let k = kernel_basis(&m);
        assert_eq!(k, im(&[&[1], &[-1]]));

        assert_eq!(kernel_basis(&RatMatrix::identity(3)).cols(), 0);

        // row (2,4,6): saturated rank-2 kernel of x + 2y + 3z = 0
        let m = rm(&[&[(2, 1), (4, 1), (6, 1)]]);
        let k = kernel_basis(&m);
        assert_eq!(k.cols(), 2);
        for j in 0..2 {
            let c = k.col(j);
            assert!((&c[0] + Int::from(2) * &c[1] + Int::from(3) * &c[2]).is_zero());
        }
        // saturation: elementary divisors of the basis are all 1
        let (s, _, _) = snf(&k);
        assert!(s.at(0, 0).is_one() && s.at(1, 1).is_one());
    }

    #[test]
    fn kernel_with_rational_entries() {
        let m = rm(&[&[(1, 2), (1, 3), (0, 1)]]);
        let k = kernel_basis(&m);
        assert_eq!(k.cols(), 2);
        for j in 0..k.cols() {
            let c = k.col(j);
            let s = rat(1, 2) * Rat::from_integer(c[0].clone())
                + rat(1, 3) * Rat::from_integer(c[1].clone());
            assert!(s.is_zero());
        }
    }
}
