//! Subspace helpers over the instance field.

use crate::algebra::{Fe, Field, Fq, Matrix};

pub(crate) type Mat = Matrix<Fe>;

/// Independent columns spanning the column space of `m`.
pub(crate) fn col_basis(f: &Fq, m: &Mat) -> Mat {
    let ech = m.rref(f);
    m.select_cols(&ech.pivots)
}

/// Columns of `k` completing the columns of `e` (assumed independent) to a basis of `span(e, k)`.
pub(crate) fn complement(f: &Fq, e: &Mat, k: &Mat) -> Mat {
    let ech = e.hstack(k).rref(f);
    let idx: Vec<usize> = ech.pivots.iter().filter(|&&p| p >= e.cols()).map(|p| p - e.cols()).collect();
    k.select_cols(&idx)
}

/// Matrix with the given vectors as columns.
pub(crate) fn from_cols(f: &Fq, cols: &[Vec<Fe>], rows: usize) -> Mat {
    if cols.is_empty() {
        return Matrix::zeros(f, rows, 0);
    }
    Matrix::from_cols(cols, rows)
}

/// `U_{next} = { x : B_inf x in B_0 U }`, as an independent column basis.
pub(crate) fn preimage_step(f: &Fq, b_inf: &Mat, b_0: &Mat, u: &Mat) -> Mat {
    let n = b_inf.rows();
    let m = b_inf.hstack(&b_0.mul(f, u).neg(f));
    let ker = m.kernel(f);
    col_basis(f, &ker.submatrix(0, n, 0, ker.cols()))
}

/// Intersection of the column span of `u` with `Ker b`, as `u * t` for kernel vectors `t`.
pub(crate) fn intersect_kernel(f: &Fq, u: &Mat, b: &Mat) -> Mat {
    let t = b.mul(f, u).kernel(f);
    u.mul(f, &t)
}

/// Affine subspace `point + span(basis)`.
#[derive(Clone, Debug)]
pub(crate) struct Affine {
    pub point: Vec<Fe>,
    pub basis: Mat,
}

pub(crate) fn vec_add(f: &Fq, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()
}

pub(crate) fn vec_sub(f: &Fq, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    a.iter().zip(b).map(|(x, y)| f.sub(x, y)).collect()
}

pub(crate) fn vec_neg(f: &Fq, a: &[Fe]) -> Vec<Fe> {
    a.iter().map(|x| f.neg(x)).collect()
}
