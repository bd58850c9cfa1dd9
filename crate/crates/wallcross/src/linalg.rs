//! Exact rational linear algebra: reduced row echelon forms, solves, kernels,
//! and a small phase-I simplex for cone feasibility questions.
//!
//! Everything here works over `BigRational`; no floating point enters any
//! structural decision in the crate.

use num::rational::BigRational;
use num::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

/// Dense rational matrix, row major.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Rat>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c));
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .fold(Rat::zero(), |s, x| s + x)
            })
            .collect()
    }

    /// In-place Gauss-Jordan. Returns the pivot column of each pivot row.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self[(r, c)].clone();
            for j in c..self.cols {
                let v = &self[(r, j)] / &inv;
                self[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let f = self[(i, c)].clone();
                    for j in c..self.cols {
                        let v = &self[(i, j)] - &f * &self[(r, j)];
                        self[(i, j)] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

/// Solve `A x = b`. Returns one solution if the system is consistent.
pub fn solve(a: &Mat, b: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(a.rows, b.len());
    let mut aug = Mat::zeros(a.rows, a.cols + 1);
    for i in 0..a.rows {
        for j in 0..a.cols {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, a.cols)] = b[i].clone();
    }
    let pivots = aug.rref();
    if pivots.contains(&a.cols) {
        return None; // pivot in the constant column: inconsistent
    }
    let mut x = vec![Rat::zero(); a.cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[(r, a.cols)].clone();
    }
    Some(x)
}

/// Solve `A x = b` and insist the solution is unique.
pub fn solve_unique(a: &Mat, b: &[Rat]) -> Option<Vec<Rat>> {
    if a.rank() != a.cols {
        return None;
    }
    solve(a, b)
}

/// Basis of the rational kernel of `A`.
pub fn kernel(a: &Mat) -> Vec<Vec<Rat>> {
    let mut m = a.clone();
    let pivots = m.rref();
    let free: Vec<usize> = (0..a.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); a.cols];
            v[f] = Rat::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -m[(r, f)].clone();
            }
            v
        })
        .collect()
}

/// Is `b` a nonnegative rational combination of the columns of `A`?
/// Phase-I simplex with Bland's rule; exact arithmetic, always terminates.
pub fn in_cone(a: &Mat, b: &[Rat]) -> bool {
    nonneg_solution(a, b).is_some()
}

/// Find `x >= 0` with `A x = b`, if one exists.
pub fn nonneg_solution(a: &Mat, b: &[Rat]) -> Option<Vec<Rat>> {
    let m = a.rows;
    let n = a.cols;
    // Normalize rows so b >= 0, then add artificial variables.
    let mut t = Mat::zeros(m, n + m + 1);
    for i in 0..m {
        let flip = b[i].is_negative();
        for j in 0..n {
            t[(i, j)] = if flip { -a[(i, j)].clone() } else { a[(i, j)].clone() };
        }
        t[(i, n + i)] = Rat::one();
        t[(i, n + m)] = if flip { -b[i].clone() } else { b[i].clone() };
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    // Objective: minimize the sum of artificials. Reduced cost row.
    let mut obj = vec![Rat::zero(); n + m + 1];
    for i in 0..m {
        for j in 0..=n + m {
            let v = &obj[j] - &t[(i, j)];
            obj[j] = v;
        }
    }
    loop {
        // Bland: entering variable = smallest index with negative reduced cost.
        let Some(e) = (0..n + m).find(|&j| obj[j].is_negative()) else {
            break;
        };
        // Ratio test, Bland tie-break on basis index.
        let mut leave: Option<(usize, Rat)> = None;
        for i in 0..m {
            if t[(i, e)].is_positive() {
                let ratio = &t[(i, n + m)] / &t[(i, e)];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((l, _)) = leave else {
            return None; // unbounded phase-I: cannot happen, but fail safe
        };
        // Pivot on (l, e).
        let inv = t[(l, e)].clone();
        for j in 0..=n + m {
            let v = &t[(l, j)] / &inv;
            t[(l, j)] = v;
        }
        for i in 0..m {
            if i != l && !t[(i, e)].is_zero() {
                let f = t[(i, e)].clone();
                for j in 0..=n + m {
                    let v = &t[(i, j)] - &f * &t[(l, j)];
                    t[(i, j)] = v;
                }
            }
        }
        if !obj[e].is_zero() {
            let f = obj[e].clone();
            for j in 0..=n + m {
                let v = &obj[j] - &f * &t[(l, j)];
                obj[j] = v;
            }
        }
        basis[l] = e;
    }
    if obj[n + m].is_zero() {
        let mut x = vec![Rat::zero(); n];
        for (i, &bv) in basis.iter().enumerate() {
            if bv < n {
                x[bv] = t[(i, n + m)].clone();
            } else if !t[(i, n + m)].is_zero() {
                return None; // artificial stuck at a nonzero level
            }
        }
        Some(x)
    } else {
        None
    }
}

/// Find a strictly positive functional: `y` with `A^T y >= 1` componentwise,
/// i.e. a vector pairing to at least 1 with every column of `A`.
pub fn strictly_positive_functional(a: &Mat) -> Option<Vec<Rat>> {
    // A^T y - s = 1, s >= 0, y free: split y = y+ - y-.
    let n = a.cols; // number of constraints
    let d = a.rows; // dimension of y
    let mut sys = Mat::zeros(n, 2 * d + n);
    for j in 0..n {
        for i in 0..d {
            sys[(j, i)] = a[(i, j)].clone();
            sys[(j, d + i)] = -a[(i, j)].clone();
        }
        sys[(j, 2 * d + j)] = -Rat::one();
    }
    let ones = vec![Rat::one(); n];
    let x = nonneg_solution(&sys, &ones)?;
    Some((0..d).map(|i| &x[i] - &x[d + i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rv(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn rref_and_solve() {
        let a = Mat::from_rows(vec![rv(&[1, 2]), rv(&[3, 4])]);
        let x = solve_unique(&a, &rv(&[5, 6])).unwrap();
        assert_eq!(a.mul_vec(&x), rv(&[5, 6]));
    }

    #[test]
    fn kernel_of_projection() {
        let a = Mat::from_rows(vec![rv(&[1, 1, 1])]);
        let k = kernel(&a);
        assert_eq!(k.len(), 2);
        for v in k {
            assert!(a.mul_vec(&v)[0].is_zero());
        }
    }

    #[test]
    fn cone_membership() {
        // Cone spanned by (1,0) and (1,1).
        let a = Mat::from_rows(vec![rv(&[1, 1]), rv(&[0, 1])]);
        assert!(in_cone(&a, &rv(&[2, 1])));
        assert!(!in_cone(&a, &rv(&[-1, 0])));
        assert!(!in_cone(&a, &rv(&[0, 1]))); // above the cone
        assert!(in_cone(&a, &rv(&[0, 0])));
    }

    #[test]
    fn positive_functional() {
        let a = Mat::from_rows(vec![rv(&[1, 0, -1]), rv(&[0, 1, 2])]);
        let y = strictly_positive_functional(&a).unwrap();
        for j in 0..3 {
            let dot = &y[0] * &a[(0, j)] + &y[1] * &a[(1, j)];
            assert!(dot >= Rat::one());
        }
    }
}
