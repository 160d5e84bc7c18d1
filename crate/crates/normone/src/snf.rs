//! Dense integer matrices and the Smith normal form with explicit
//! unimodular transforms, S = U * A * V. The transforms are kept so that
//! infeasibility certificates and solution witnesses are constructive.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = x;
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

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, rhs: &IntMat) -> IntMat {
        assert_eq!(self.cols, rhs.rows);
        let mut out = IntMat::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row a += k * row b
    fn add_row(&mut self, a: usize, b: usize, k: i64) {
        for j in 0..self.cols {
            let x = self[(b, j)];
            self[(a, j)] += k * x;
        }
    }

    /// col a += k * col b
    fn add_col(&mut self, a: usize, b: usize, k: i64) {
        for i in 0..self.rows {
            let x = self[(i, b)];
            self[(i, a)] += k * x;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            self[(a, j)] = -self[(a, j)];
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

#[derive(Debug, Clone)]
pub struct Snf {
    /// Diagonal form.
    pub s: IntMat,
    /// Left transform, S = U * A * V.
    pub u: IntMat,
    /// Right transform.
    pub v: IntMat,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<i64> {
        let n = self.s.rows.min(self.s.cols);
        (0..n).map(|i| self.s[(i, i)]).collect()
    }

    /// Invariant factors larger than 1.
    pub fn nontrivial_factors(&self) -> Vec<i64> {
        self.diagonal().into_iter().filter(|&d| d > 1).collect()
    }
}

/// Smith normal form by pivoting on the least nonzero entry; the diagonal
/// is nonnegative with d_i | d_{i+1}.
pub fn smith_normal_form(a: &IntMat) -> Snf {
    let mut s = a.clone();
    let mut u = IntMat::identity(a.rows);
    let mut v = IntMat::identity(a.cols);
    let n = a.rows.min(a.cols);
    let mut k = 0;
    while k < n {
        let Some((pi, pj)) = pivot(&s, k) else { break };
        s.swap_rows(k, pi);
        u.swap_rows(k, pi);
        s.swap_cols(k, pj);
        v.swap_cols(k, pj);
        // clear row and column k by repeated division
        loop {
            let mut dirty = false;
            for i in k + 1..s.rows {
                let x = s[(i, k)];
                if x != 0 {
                    let q = div_round(x, s[(k, k)]);
                    s.add_row(i, k, -q);
                    u.add_row(i, k, -q);
                    if s[(i, k)] != 0 {
                        s.swap_rows(k, i);
                        u.swap_rows(k, i);
                        dirty = true;
                    }
                }
            }
            for j in k + 1..s.cols {
                let x = s[(k, j)];
                if x != 0 {
                    let q = div_round(x, s[(k, k)]);
                    s.add_col(j, k, -q);
                    v.add_col(j, k, -q);
                    if s[(k, j)] != 0 {
                        s.swap_cols(k, j);
                        v.swap_cols(k, j);
                        dirty = true;
                    }
                }
            }
            if !dirty
                && (k + 1..s.rows).all(|i| s[(i, k)] == 0)
                && (k + 1..s.cols).all(|j| s[(k, j)] == 0)
            {
                break;
            }
        }
        // divisibility: fold in any row holding an entry the pivot does not divide
        if let Some(i) =
            (k + 1..s.rows).find(|&i| (k + 1..s.cols).any(|j| s[(i, j)] % s[(k, k)] != 0))
        {
            s.add_row(k, i, 1);
            u.add_row(k, i, 1);
            continue; // redo this pivot
        }
        k += 1;
    }
    for i in 0..n {
        if s[(i, i)] < 0 {
            s.negate_row(i);
            u.negate_row(i);
        }
    }
    Snf { s, u, v }
}

fn pivot(s: &IntMat, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in k..s.rows {
        for j in k..s.cols {
            let x = s[(i, j)].abs();
            if x == 0 {
                continue;
            }
            if best.map(|(bi, bj)| x < s[(bi, bj)].abs()).unwrap_or(true) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn div_round(a: i64, b: i64) -> i64 {
    // quotient minimizing |a - q b|
    let q = a / b;
    let r = a - q * b;
    if 2 * r.abs() > b.abs() {
        q + if (r < 0) == (b < 0) { 1 } else { -1 }
    } else {
        q
    }
}

/// Outcome of solving A x = t over the integers.
pub enum LinearSolve {
    /// A solution vector x.
    Solution(Vec<i64>),
    /// Row c of the left transform with its diagonal d: c * A = 0 mod d
    /// for the image, while c * t != 0 mod d.
    Obstruction { row: Vec<i64>, modulus: i64 },
}

/// Solves A x = t exactly using the Smith form.
pub fn solve(a: &IntMat, t: &[i64]) -> Result<LinearSolve> {
    if t.len() != a.rows {
        return Err(Error::DimensionMismatch {
            expected: a.rows,
            got: t.len(),
        });
    }
    let snf = smith_normal_form(a);
    let y = snf.u.mul_vec(t);
    let n = a.rows.min(a.cols);
    let mut z = vec![0i64; a.cols];
    for i in 0..a.rows {
        let d = if i < n { snf.s[(i, i)] } else { 0 };
        if d == 0 {
            if y[i] != 0 {
                return Ok(LinearSolve::Obstruction {
                    row: snf.u.row(i).to_vec(),
                    modulus: 0,
                });
            }
        } else if y[i] % d != 0 {
            return Ok(LinearSolve::Obstruction {
                row: snf.u.row(i).to_vec(),
                modulus: d,
            });
        } else {
            z[i] = y[i] / d;
        }
    }
    Ok(LinearSolve::Solution(snf.v.mul_vec(&z)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_transforms(a: &IntMat) {
        let snf = smith_normal_form(a);
        assert_eq!(snf.u.mul(a).mul(&snf.v), snf.s, "U A V != S");
        // diagonal, nonnegative, divisibility chain
        for i in 0..snf.s.rows() {
            for j in 0..snf.s.cols() {
                if i != j {
                    assert_eq!(snf.s[(i, j)], 0);
                }
            }
        }
        let d = snf.diagonal();
        for w in d.windows(2) {
            assert!(w[0] >= 0);
            if w[0] != 0 {
                assert_eq!(w[1] % w[0].max(1), 0, "no divisibility: {d:?}");
            } else {
                assert_eq!(w[1], 0);
            }
        }
        // unimodularity via |det| = 1, checked by Smith form of U itself
        let du = smith_normal_form(&snf.u).diagonal();
        assert!(du.iter().all(|&x| x == 1), "U not unimodular: {du:?}");
        let dv = smith_normal_form(&snf.v).diagonal();
        assert!(dv.iter().all(|&x| x == 1), "V not unimodular: {dv:?}");
    }

    #[test]
    fn known_forms() {
        let a = IntMat::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.diagonal(), vec![2, 2, 156]);
        check_transforms(&a);

        let a = IntMat::from_rows(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.diagonal(), vec![1, 3, 0]);
        check_transforms(&a);
    }

    #[test]
    fn random_matrices_have_valid_transforms() {
        // deterministic pseudo-random fill
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 13) as i64 - 6
        };
        for rows in 1..5 {
            for cols in 1..5 {
                for _ in 0..20 {
                    let mut m = IntMat::zero(rows, cols);
                    for i in 0..rows {
                        for j in 0..cols {
                            m[(i, j)] = next();
                        }
                    }
                    check_transforms(&m);
                }
            }
        }
    }

    #[test]
    fn solve_finds_solutions_and_obstructions() {
        let a = IntMat::from_rows(&[vec![2, 0], vec![0, 3]]);
        match solve(&a, &[4, 9]).unwrap() {
            LinearSolve::Solution(x) => assert_eq!(a.mul_vec(&x), vec![4, 9]),
            _ => panic!("expected solution"),
        }
        match solve(&a, &[1, 0]).unwrap() {
            LinearSolve::Obstruction { row, modulus } => {
                assert!(modulus != 1);
                // row annihilates every column of A mod modulus
                for j in 0..2 {
                    let cj: i64 = (0..2).map(|i| row[i] * a[(i, j)]).sum();
                    assert_eq!(cj.rem_euclid(modulus), 0);
                }
                let rt: i64 = row.iter().zip([1, 0]).map(|(r, t)| r * t).sum();
                assert_ne!(rt.rem_euclid(modulus), 0);
            }
            _ => panic!("expected obstruction"),
        }
    }
}
