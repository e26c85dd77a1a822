//! Compressed sparse rows and Jacobi-preconditioned conjugate gradients.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Csr {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub cols: Vec<usize>,
    pub vals: Vec<f64>,
}

/// Accumulates `(i, j, v)` triplets; duplicates are summed in insertion order.
#[derive(Debug, Default)]
pub struct TripletBuilder {
    n: usize,
    rows: Vec<BTreeMap<usize, f64>>,
}

impl TripletBuilder {
    pub fn new(n: usize) -> Self {
        Self { n, rows: vec![BTreeMap::new(); n] }
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        *self.rows[i].entry(j).or_insert(0.0) += v;
    }

    pub fn build(self) -> Csr {
        let mut row_ptr = Vec::with_capacity(self.n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for row in self.rows {
            for (j, v) in row {
                cols.push(j);
                vals.push(v);
            }
            row_ptr.push(cols.len());
        }
        Csr { n: self.n, row_ptr, cols, vals }
    }
}

impl Csr {
    pub fn mul(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.n {
            let mut s = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.vals[k] * x[self.cols[k]];
            }
            y[i] = s;
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.mul(x, &mut y);
        y
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                (self.row_ptr[i]..self.row_ptr[i + 1])
                    .find(|&k| self.cols[k] == i)
                    .map_or(0.0, |k| self.vals[k])
            })
            .collect()
    }

    /// `self + alpha·diag(d)`.
    pub fn add_diagonal(&self, alpha: f64, d: &[f64]) -> Csr {
        let mut out = self.clone();
        for i in 0..self.n {
            match (out.row_ptr[i]..out.row_ptr[i + 1]).find(|&k| out.cols[k] == i) {
                Some(k) => out.vals[k] += alpha * d[i],
                None => panic!("row {i} has no diagonal entry"),
            }
        }
        out
    }

    /// `a·self + b·other` for matrices with identical sparsity.
    pub fn combine(&self, a: f64, other: &Csr, b: f64) -> Csr {
        assert_eq!(self.cols, other.cols, "sparsity patterns differ");
        let mut out = self.clone();
        for (v, w) in out.vals.iter_mut().zip(&other.vals) {
            *v = a * *v + b * w;
        }
        out
    }

    /// `xᵀ·self·x`.
    pub fn quad_form(&self, x: &[f64]) -> f64 {
        let y = self.apply(x);
        crate::numeric::compensated_sum(x.iter().zip(&y).map(|(a, b)| a * b))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves `A x = b` for symmetric positive definite `A`, starting from `x`.
pub fn pcg(a: &Csr, b: &[f64], x: &mut [f64], rel_tol: f64, max_iter: usize) -> Result<usize> {
    let n = a.n;
    let inv_d: Vec<f64> = a.diagonal().iter().map(|d| 1.0 / d).collect();
    let mut r = vec![0.0; n];
    a.mul(x, &mut r);
    for i in 0..n {
        r[i] = b[i] - r[i];
    }
    let bnorm = dot(b, b).sqrt().max(f64::MIN_POSITIVE);
    let mut z: Vec<f64> = r.iter().zip(&inv_d).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; n];
    for it in 0..max_iter {
        if dot(&r, &r).sqrt() <= rel_tol * bnorm {
            return Ok(it);
        }
        a.mul(&p, &mut ap);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            return Err(Error::SolverFailure("matrix is not positive definite".into()));
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        for i in 0..n {
            z[i] = r[i] * inv_d[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    if dot(&r, &r).sqrt() <= rel_tol * bnorm {
        Ok(max_iter)
    } else {
        Err(Error::SolverFailure(format!("conjugate gradients stalled after {max_iter} iterations")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_1d(n: usize, shift: f64) -> Csr {
        let mut b = TripletBuilder::new(n);
        for i in 0..n {
            b.add(i, i, 2.0 + shift);
            if i > 0 {
                b.add(i, i - 1, -1.0);
            }
            if i + 1 < n {
                b.add(i, i + 1, -1.0);
            }
        }
        b.build()
    }

    #[test]
    fn pcg_solves_spd_system() {
        let a = laplacian_1d(50, 0.1);
        let x_true: Vec<f64> = (0..50).map(|i| (i as f64 * 0.3).sin()).collect();
        let b = a.apply(&x_true);
        let mut x = vec![0.0; 50];
        pcg(&a, &b, &mut x, 1e-13, 500).unwrap();
        for (u, v) in x.iter().zip(&x_true) {
            assert!((u - v).abs() < 1e-10);
        }
    }

    #[test]
    fn pcg_rejects_indefinite() {
        let a = laplacian_1d(10, -3.0);
        let mut x = vec![0.0; 10];
        let b = vec![1.0; 10];
        assert!(pcg(&a, &b, &mut x, 1e-12, 100).is_err());
    }

    #[test]
    fn duplicate_triplets_are_summed() {
        let mut b = TripletBuilder::new(2);
        b.add(0, 0, 1.0);
        b.add(0, 0, 2.0);
        b.add(1, 1, 1.0);
        let m = b.build();
        assert_eq!(m.diagonal(), vec![3.0, 1.0]);
    }
}
