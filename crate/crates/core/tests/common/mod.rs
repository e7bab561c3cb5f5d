#![allow(dead_code)]

use qpencil::algebra::{Fe, Field, Fq, Matrix};
use qpencil::pencil::{Congruence, Homography, Pencil};
use rand::Rng;

pub fn fq(q: u64) -> Fq {
    Fq::with_order(q).unwrap()
}

pub fn mat(f: &Fq, rows: &[&[i64]]) -> Matrix<Fe> {
    let n = rows.first().map_or(0, |r| r.len());
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| f.from_int(x)).collect()).collect(), n)
}

pub fn pencil(f: &Fq, bi: &[&[i64]], b0: &[&[i64]]) -> Pencil {
    Pencil::new(f.clone(), mat(f, bi), mat(f, b0)).unwrap()
}

pub fn random_invertible<R: Rng>(f: &Fq, n: usize, rng: &mut R) -> Matrix<Fe> {
    loop {
        let data = (0..n * n).map(|_| f.random(rng)).collect();
        let m = Matrix::from_vec(n, n, data);
        if !f.is_zero(&m.det(f)) {
            return m;
        }
    }
}

pub fn random_symmetric<R: Rng>(f: &Fq, n: usize, rng: &mut R) -> Matrix<Fe> {
    let mut m = Matrix::zeros(f, n, n);
    for i in 0..n {
        for j in i..n {
            let x = f.random(rng);
            m.set(i, j, x);
            m.set(j, i, x);
        }
    }
    m
}

pub fn random_alternating<R: Rng>(f: &Fq, n: usize, rng: &mut R) -> Matrix<Fe> {
    let mut m = Matrix::zeros(f, n, n);
    for i in 0..n {
        for j in i + 1..n {
            let x = f.random(rng);
            m.set(i, j, x);
            m.set(j, i, x);
        }
    }
    m
}

pub fn random_pencil<R: Rng>(f: &Fq, n: usize, rng: &mut R) -> Pencil {
    Pencil::new(f.clone(), random_symmetric(f, n, rng), random_symmetric(f, n, rng)).unwrap()
}

pub fn random_congruence<R: Rng>(f: &Fq, n: usize, rng: &mut R) -> Congruence {
    Congruence::new(f, random_invertible(f, n, rng)).unwrap()
}

pub fn random_homography<R: Rng>(f: &Fq, rng: &mut R) -> Homography {
    loop {
        let m = [f.random(rng), f.random(rng), f.random(rng), f.random(rng)];
        if let Ok(g) = Homography::new(f, m) {
            return g;
        }
    }
}

/// Cofactor-expansion determinant of `lambda B_inf + mu B_0` evaluated at a point;
/// independent of the library's determinant code.
pub fn det_cofactor(f: &Fq, m: &Matrix<Fe>) -> Fe {
    let n = m.rows();
    if n == 0 {
        return f.one();
    }
    if n == 1 {
        return *m.get(0, 0);
    }
    let mut acc = f.zero();
    for j in 0..n {
        let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
        let minor = m.submatrix(1, n, 0, n).select_cols(&cols);
        let t = f.mul(m.get(0, j), &det_cofactor(f, &minor));
        acc = if j % 2 == 0 { f.add(&acc, &t) } else { f.sub(&acc, &t) };
    }
    acc
}
