//! Textbook two-phase simplex over exact rationals with Bland's rule, which
//! guarantees termination. Problem sizes here are tiny (gauge and support
//! evaluations on low-dimensional polytopes), so a dense tableau is fine.

use num_traits::{One, Signed, Zero};

use super::matrix::RatMatrix;
use super::rat::Rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rat, x: Vec<Rat> },
    Infeasible,
    Unbounded,
}

/// Minimize c.x subject to A x = b, x >= 0.
pub fn solve_standard_lp(a: &RatMatrix, b: &[Rat], c: &[Rat]) -> LpOutcome {
    let m = a.rows();
    let n = a.cols();
    assert_eq!(b.len(), m);
    assert_eq!(c.len(), n);

    // Tableau rows: m constraint rows plus the objective row. Columns:
    // n structural + m artificial + rhs.
    let total = n + m;
    let mut t = vec![vec![Rat::zero(); total + 1]; m + 1];
    for i in 0..m {
        let neg = b[i].is_negative();
        for j in 0..n {
            t[i][j] = if neg { -a.at(i, j).clone() } else { a.at(i, j).clone() };
        }
        t[i][n + i] = Rat::one();
        t[i][total] = if neg { -b[i].clone() } else { b[i].clone() };
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Phase 1: minimize the sum of artificials.
    for j in 0..=total {
        let mut s = Rat::zero();
        for i in 0..m {
            s += &t[i][j];
        }
        t[m][j] = -s;
    }
    // artificial columns have zero reduced cost against themselves
    for j in n..total {
        t[m][j] = Rat::zero();
    }
    if !pivot_loop(&mut t, &mut basis, total) {
        unreachable!("phase 1 is always bounded");
    }
    if !t[m][total].is_zero() {
        return LpOutcome::Infeasible;
    }
    // Drive remaining artificials out of the basis when possible.
    for i in 0..m {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !t[i][j].is_zero()) {
                pivot(&mut t, i, j);
                basis[i] = j;
            }
        }
    }

    // Phase 2: original objective, artificial columns frozen at zero.
    for j in n..total {
        for row in t.iter_mut() {
            row[j] = Rat::zero();
        }
    }
    for j in 0..=total {
        t[m][j] = Rat::zero();
    }
    for j in 0..n {
        t[m][j] = c[j].clone();
    }
    // express objective in terms of the current basis
    for i in 0..m {
        if basis[i] < n && !t[m][basis[i]].is_zero() {
            let f = t[m][basis[i]].clone();
            for j in 0..=total {
                let sub = &t[i][j] * &f;
                t[m][j] -= sub;
            }
        }
    }
    if !pivot_loop(&mut t, &mut basis, total) {
        return LpOutcome::Unbounded;
    }

    let mut x = vec![Rat::zero(); n];
    for i in 0..m {
        if basis[i] < n {
            x[basis[i]] = t[i][total].clone();
        }
    }
    LpOutcome::Optimal { value: -t[m][total].clone(), x }
}

/// Bland pivoting until optimal; false when unbounded.
fn pivot_loop(t: &mut [Vec<Rat>], basis: &mut [usize], total: usize) -> bool {
    let m = basis.len();
    loop {
        // entering: lowest index with negative reduced cost
        let Some(enter) = (0..total).find(|&j| t[m][j].is_negative()) else {
            return true;
        };
        // leaving: min ratio, ties by lowest basis variable index
        let mut leave: Option<usize> = None;
        let mut best: Option<Rat> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][total] / &t[i][enter];
                let better = match &best {
                    None => true,
                    Some(b) => {
                        ratio < *b || (ratio == *b && basis[i] < basis[leave.unwrap()])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let Some(row) = leave else {
            return false;
        };
        pivot(t, row, enter);
        basis[row] = enter;
    }
}

fn pivot(t: &mut [Vec<Rat>], row: usize, col: usize) {
    let cols = t[row].len();
    let pv = t[row][col].clone();
    for j in 0..cols {
        t[row][j] /= &pv;
    }
    let nrows = t.len();
    for i in 0..nrows {
        if i == row || t[i][col].is_zero() {
            continue;
        }
        let f = t[i][col].clone();
        for j in 0..cols {
            let sub = &t[row][j] * &f;
            t[i][j] -= sub;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlin::{rat, rat_i};

    #[test]
    fn simple_optimum() {
        // min -x - y st x + y = 1, x,y >= 0 -> value -1
        let a = RatMatrix::from_rows(vec![vec![rat_i(1), rat_i(1)]]);
        let out = solve_standard_lp(&a, &[rat_i(1)], &[rat_i(-1), rat_i(-1)]);
        match out {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat_i(-1)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn infeasible_detected() {
        // x = -1, x >= 0
        let a = RatMatrix::from_rows(vec![vec![rat_i(1)]]);
        assert_eq!(solve_standard_lp(&a, &[rat_i(-1)], &[rat_i(0)]), LpOutcome::Infeasible);
    }

    #[test]
    fn unbounded_detected() {
        // min -x st x - y = 0
        let a = RatMatrix::from_rows(vec![vec![rat_i(1), rat_i(-1)]]);
        assert_eq!(
            solve_standard_lp(&a, &[rat_i(0)], &[rat_i(-1), rat_i(0)]),
            LpOutcome::Unbounded
        );
    }

    #[test]
    fn gauge_style_lp() {
        // gauge of (1,0) in the square conv{(+-1,+-1)}: min sum(lambda)
        // st sum lambda_i v_i = x, lambda >= 0 -> 1
        let verts: [(i64, i64); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];
        let a = RatMatrix::from_rows(vec![
            verts.iter().map(|&(x, _)| rat_i(x)).collect(),
            verts.iter().map(|&(_, y)| rat_i(y)).collect(),
        ]);
        let ones = vec![rat_i(1); 4];
        let out = solve_standard_lp(&a, &[rat_i(1), rat_i(0)], &ones);
        match out {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat_i(1)),
            other => panic!("unexpected {other:?}"),
        }
        // gauge of (1/2, 1/4)
        let out = solve_standard_lp(&a, &[rat(1, 2), rat(1, 4)], &ones);
        match out {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat(1, 2)),
            other => panic!("unexpected {other:?}"),
        }
    }
}
