//! Small exact dense linear algebra over Q(√2), enough for (d+2)-dimensional
//! inversive coordinates: Gaussian elimination with nonzero pivoting.

use crate::exactnum::QuadExt;

/// Row-major dense matrix over Q(√2).
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<QuadExt>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![QuadExt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = QuadExt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<QuadExt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c));
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn mul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = &self[(i, k)];
                if aik.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let t = aik * &rhs[(k, j)];
                    out[(i, j)] = &out[(i, j)] + &t;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[QuadExt]) -> Vec<QuadExt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = QuadExt::zero();
                for j in 0..self.cols {
                    if !self[(i, j)].is_zero() {
                        acc = &acc + &(&self[(i, j)] * &v[j]);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Exact inverse; None when singular.
    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Mat::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[(r, col)].is_zero())?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let p = a[(col, col)].clone();
            let pinv = p.recip().ok()?;
            for j in 0..n {
                a[(col, j)] = &a[(col, j)] * &pinv;
                inv[(col, j)] = &inv[(col, j)] * &pinv;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone();
                for j in 0..n {
                    let t1 = &f * &a[(col, j)];
                    a[(r, j)] = &a[(r, j)] - &t1;
                    let t2 = &f * &inv[(col, j)];
                    inv[(r, j)] = &inv[(r, j)] - &t2;
                }
            }
        }
        Some(inv)
    }

    /// Basis of the (right) null space, one Vec per basis vector.
    pub fn nullspace(&self) -> Vec<Vec<QuadExt>> {
        let mut a = self.clone();
        let (m, n) = (a.rows, a.cols);
        let mut pivot_cols = Vec::new();
        let mut row = 0usize;
        for col in 0..n {
            let Some(p) = (row..m).find(|&r| !a[(r, col)].is_zero()) else {
                continue;
            };
            a.swap_rows(p, row);
            let pinv = a[(row, col)].recip().unwrap();
            for j in 0..n {
                a[(row, j)] = &a[(row, j)] * &pinv;
            }
            for r in 0..m {
                if r == row || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone();
                for j in 0..n {
                    let t = &f * &a[(row, j)];
                    a[(r, j)] = &a[(r, j)] - &t;
                }
            }
            pivot_cols.push(col);
            row += 1;
            if row == m {
                break;
            }
        }
        let free_cols: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
        free_cols
            .into_iter()
            .map(|fc| {
                let mut v = vec![QuadExt::zero(); n];
                v[fc] = QuadExt::one();
                for (r, &pc) in pivot_cols.iter().enumerate() {
                    v[pc] = -&a[(r, fc)];
                }
                v
            })
            .collect()
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = QuadExt;
    fn index(&self, (i, j): (usize, usize)) -> &QuadExt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut QuadExt {
        &mut self.data[i * self.cols + j]
    }
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}
