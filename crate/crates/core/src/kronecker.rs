//! Singular part of a pencil: minimal isotropic chains, splitting of
//! Kronecker modules and reduction to the blocks `K_h`.

use crate::algebra::{Fe, Field, Fq, Matrix};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::pencil::{Congruence, Pencil};

/// Vectors `e_0, ..., e_h` with `B_0 e_0 = 0`, `B_0 e_i + B_inf e_(i-1) = 0`, `B_inf e_h = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotropicChain {
    pub h: usize,
    pub vectors: Vec<Vec<Fe>>,
}

/// Result of [`kronecker_decompose`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KroneckerReport {
    /// Minimal indices in ascending order.
    pub indices: Vec<usize>,
    /// Applying it yields `block_diag(K_h..., regular_part)`.
    pub transform: Congruence,
    pub regular_part: Pencil,
}

/// The canonical Kronecker block `K_h` in the basis `e_0..e_h, f_1..f_h`:
/// `b(e_(j-1), f_j) = lambda` and `b(e_j, f_j) = 1`.
pub fn kronecker_block(field: &Fq, h: usize) -> Pencil {
    let n = 2 * h + 1;
    let mut bi = Matrix::zeros(field, n, n);
    let mut b0 = Matrix::zeros(field, n, n);
    for j in 1..=h {
        let fj = h + j;
        bi.set(j - 1, fj, field.one());
        bi.set(fj, j - 1, field.one());
        b0.set(j, fj, field.one());
        b0.set(fj, j, field.one());
    }
    Pencil::from_parts(field.clone(), bi, b0)
}

fn check_characteristic(p: &Pencil) -> Result<()> {
    if p.field().characteristic() == 2 && !p.is_alternating() {
        return Err(Error::NotAlternating);
    }
    Ok(())
}

/// Chain spaces `U_0 = Ker B_inf`, `U_(i+1) = { x : B_inf x in B_0 U_i }`, grown on demand.
struct ChainSpaces {
    spaces: Vec<Mat>,
}

enum Search {
    Chain(IsotropicChain),
    Regular,
}

impl ChainSpaces {
    fn new() -> Self {
        ChainSpaces { spaces: Vec::new() }
    }

    fn ensure(&mut self, p: &Pencil, i: usize) {
        let f = p.field();
        if self.spaces.is_empty() {
            self.spaces.push(linalg::col_basis(f, &p.b_inf().kernel(f)));
        }
        while self.spaces.len() <= i {
            let last = self.spaces.last().unwrap();
            let next = linalg::preimage_step(f, p.b_inf(), p.b_0(), last);
            self.spaces.push(next);
        }
    }

    /// Search for a chain of minimal index, starting at `start`.
    fn search(&mut self, p: &Pencil, start: usize) -> Search {
        let f = p.field();
        if p.dim() == 0 {
            return Search::Regular;
        }
        let mut i = start;
        loop {
            self.ensure(p, i + 1);
            let inter = linalg::intersect_kernel(f, &self.spaces[i], p.b_0());
            if inter.cols() > 0 {
                let e0 = inter.col(0);
                return Search::Chain(self.back_substitute(p, i, e0));
            }
            if self.spaces[i + 1].cols() == self.spaces[i].cols() {
                // stabilized without isotropic start vectors
                return Search::Regular;
            }
            i += 1;
        }
    }

    fn back_substitute(&self, p: &Pencil, h: usize, e0: Vec<Fe>) -> IsotropicChain {
        let f = p.field();
        let mut vectors = vec![e0];
        for i in 1..=h {
            let u = &self.spaces[h - i];
            let rhs = linalg::vec_neg(f, &p.b_inf().mul_vec(f, &vectors[i - 1]));
            let t = p.b_0().mul(f, u).solve(f, &rhs).expect("chain spaces admit a continuation");
            vectors.push(u.mul_vec(f, &t));
        }
        IsotropicChain { h, vectors }
    }

    /// Replace each space by its coordinates on the columns `keep` of the basis `q`.
    fn project(&mut self, f: &Fq, q_inv: &Mat, keep: usize) {
        let n = q_inv.rows();
        for u in self.spaces.iter_mut() {
            let coords = q_inv.mul(f, u);
            *u = linalg::col_basis(f, &coords.submatrix(n - keep, n, 0, coords.cols()));
        }
    }
}

/// A chain of minimal index, or `None` when the pencil is regular.
pub fn minimal_chain(p: &Pencil) -> Option<IsotropicChain> {
    match ChainSpaces::new().search(p, 0) {
        Search::Chain(c) => Some(c),
        Search::Regular => None,
    }
}

/// Columns `e'_0..e'_h` and dual vectors `f_1..f_h` with `b_0(e'_i, f_j) = delta_ij`
/// and `b_inf(e'_(j-1), f_j) = 1`, plus a complement of `E` inside `E^perp`.
fn module_frame(p: &Pencil, c: &IsotropicChain) -> Result<(Mat, Mat, Mat)> {
    let f = p.field();
    let n = p.dim();
    let h = c.h;
    let signed: Vec<Vec<Fe>> = c
        .vectors
        .iter()
        .enumerate()
        .map(|(i, v)| if i % 2 == 1 { linalg::vec_neg(f, v) } else { v.clone() })
        .collect();
    let e = linalg::from_cols(f, &signed, n);
    // rows b_0(e'_i, .) for i = 1..h
    let phi = e.submatrix(0, n, 1, h + 1).transpose().mul(f, p.b_0());
    let duals = phi
        .solve_many(f, &Matrix::identity(f, h))
        .ok_or_else(|| Error::Internal("chain is not minimal: dual system unsolvable".into()))?;
    let perp = phi.kernel(f);
    let rest = linalg::complement(f, &e, &perp);
    if rest.cols() + 2 * h + 1 != n {
        return Err(Error::Internal("chain is not minimal: wrong complement dimension".into()));
    }
    Ok((e, duals, rest))
}

/// Zero the coupling between the module and the complement: returns `(Y, X)` where
/// `f_j <- f_j + rest y_j` and `z_k <- z_k + sum_i X_(i,k) e'_i`.
fn solve_staircase(p: &Pencil, duals: &Mat, rest: &Mat) -> Result<(Mat, Mat)> {
    let f = p.field();
    let h = duals.cols();
    let r = rest.cols();
    let binf_r = p.b_inf().mul(f, rest);
    let b0_r = p.b_0().mul(f, rest);
    let bp_inf = rest.transpose().mul(f, &binf_r);
    let bp_0 = rest.transpose().mul(f, &b0_r);
    // c_inf[j] = b_inf(f_j, z_.), c_0[j] = b_0(f_j, z_.)
    let dt = duals.transpose();
    let c_inf = dt.mul(f, &binf_r);
    let c_0 = dt.mul(f, &b0_r);
    let row = |m: &Mat, j: usize| m.row(j).to_vec();

    // forward sweep over affine spaces Y_1, ..., Y_h
    let mut spaces = vec![linalg::Affine { point: vec![f.zero(); r], basis: Matrix::identity(f, r) }];
    for j in 0..h.saturating_sub(1) {
        // B'_0 y_j - B'_inf y_(j+1) = c_inf[j+1] - c_0[j]
        let d = linalg::vec_sub(f, &row(&c_inf, j + 1), &row(&c_0, j));
        let cur = &spaces[j];
        let rhs = linalg::vec_sub(f, &d, &bp_0.mul_vec(f, &cur.point));
        let m = bp_inf.neg(f).hstack(&bp_0.mul(f, &cur.basis));
        let sol = m
            .solve(f, &rhs)
            .ok_or_else(|| Error::Internal("staircase system unsolvable: chain is not minimal".into()))?;
        let ker = m.kernel(f);
        let basis = linalg::col_basis(f, &ker.submatrix(0, r, 0, ker.cols()));
        spaces.push(linalg::Affine { point: sol[..r].to_vec(), basis });
    }
    let mut ys: Vec<Vec<Fe>> = vec![Vec::new(); h];
    if h > 0 {
        ys[h - 1] = spaces[h - 1].point.clone();
    }
    for j in (0..h.saturating_sub(1)).rev() {
        let d = linalg::vec_sub(f, &row(&c_inf, j + 1), &row(&c_0, j));
        let cur = &spaces[j];
        let target = linalg::vec_add(f, &d, &bp_inf.mul_vec(f, &ys[j + 1]));
        let rhs = linalg::vec_sub(f, &target, &bp_0.mul_vec(f, &cur.point));
        let t = bp_0
            .mul(f, &cur.basis)
            .solve(f, &rhs)
            .ok_or_else(|| Error::Internal("staircase back-substitution failed".into()))?;
        ys[j] = linalg::vec_add(f, &cur.point, &cur.basis.mul_vec(f, &t));
    }
    // x_j = -c_0[j] - B'_0 y_j (j = 1..h), x_0 = -c_inf[1] - B'_inf y_1
    let mut x = Matrix::zeros(f, h + 1, r);
    for j in 0..h {
        let xj = linalg::vec_neg(f, &linalg::vec_add(f, &row(&c_0, j), &bp_0.mul_vec(f, &ys[j])));
        for (k, v) in xj.into_iter().enumerate() {
            x.set(j + 1, k, v);
        }
    }
    if h > 0 {
        let x0 = linalg::vec_neg(f, &linalg::vec_add(f, &row(&c_inf, 0), &bp_inf.mul_vec(f, &ys[0])));
        for (k, v) in x0.into_iter().enumerate() {
            x.set(0, k, v);
        }
    }
    Ok((linalg::from_cols(f, &ys, r), x))
}

/// Correction `Z` with `f_j <- f_j + sum_i Z_(i,j) e'_i` making the Gram of the
/// `f` block vanish. `a0`, `ainf` are the current Gram matrices of the `f` block.
fn normalizing_shift(f: &Fq, a0: &Mat, ainf: &Mat) -> Result<Mat> {
    let h = a0.rows();
    let mut z = Matrix::zeros(f, h + 1, h);
    if h == 0 {
        return Ok(z);
    }
    let char2 = f.characteristic() == 2;
    let half = if char2 { f.zero() } else { f.inv(&f.from_int(2)).unwrap() };
    // a(j,l) = -A0, a'(j,l) = -Ainf, indices 1..h; z stored with column l-1
    let a = |j: usize, l: usize| f.neg(a0.get(j - 1, l - 1));
    let ap = |j: usize, l: usize| f.neg(ainf.get(j - 1, l - 1));
    let get = |z: &Mat, i: usize, j: usize| *z.get(i, j - 1);
    for s in 1..=2 * h {
        let lo = s.saturating_sub(h);
        let hi = h.min(s - 1);
        let pivot = if s % 2 == 0 {
            let i = s / 2;
            z.set(i, i - 1, if char2 { f.zero() } else { f.mul(&a(i, i), &half) });
            i
        } else {
            let i = s.div_ceil(2);
            z.set(i - 1, i - 1, if char2 { f.zero() } else { f.mul(&ap(i, i), &half) });
            i - 1
        };
        // z(i-1, j+1) = z(i, j) - (a(i, j) - a'(i, j+1))
        let mut i = pivot;
        while i > lo {
            let j = s - i;
            let v = f.sub(&get(&z, i, j), &f.sub(&a(i, j), &ap(i, j + 1)));
            z.set(i - 1, j, v);
            i -= 1;
        }
        let mut i = pivot;
        while i < hi {
            // z(i+1, j-1) = z(i, j) + (a(i+1, j-1) - a'(i+1, j))
            let j = s - i;
            let v = f.add(&get(&z, i, j), &f.sub(&a(i + 1, j - 1), &ap(i + 1, j)));
            z.set(i + 1, j - 2, v);
            i += 1;
        }
    }
    Ok(z)
}

/// Apply the normalizing shift to dual vectors `duals` given the signed chain `e`.
fn normalize_duals(p: &Pencil, e: &Mat, duals: &Mat) -> Result<Mat> {
    let f = p.field();
    let a0 = p.b_0().congruence(f, duals);
    let ainf = p.b_inf().congruence(f, duals);
    let z = normalizing_shift(f, &a0, &ainf)?;
    Ok(duals.add(f, &e.mul(f, &z)))
}

/// Congruence putting `P` in the shape `diag(K-module, complement)` with zero
/// coupling, and the complementary pencil.
pub fn split_kronecker(p: &Pencil, c: &IsotropicChain) -> Result<(Congruence, Pencil)> {
    check_characteristic(p)?;
    let q = split_frame(p, c, false)?;
    let n = p.dim();
    let rest = q.submatrix(0, n, 2 * c.h + 1, n);
    Ok((Congruence::from_matrix_unchecked(q), p.restrict(&rest)))
}

/// Columns `[e', f'', rest']` of the split basis; with `normalize` the module part is exactly `K_h`.
fn split_frame(p: &Pencil, c: &IsotropicChain, normalize: bool) -> Result<Mat> {
    let f = p.field();
    let (e, duals, rest) = module_frame(p, c)?;
    let (y, x) = solve_staircase(p, &duals, &rest)?;
    let mut duals = duals.add(f, &rest.mul(f, &y));
    let rest = rest.add(f, &e.mul(f, &x));
    if normalize {
        duals = normalize_duals(p, &e, &duals)?;
    }
    let q = e.hstack(&duals).hstack(&rest);
    Ok(q)
}

/// Congruence mapping a Kronecker module of dimension `2h+1` exactly onto `K_h`.
pub fn normalize_kronecker(p: &Pencil, c: &IsotropicChain) -> Result<Congruence> {
    check_characteristic(p)?;
    if p.dim() != 2 * c.h + 1 {
        return Err(Error::DimensionMismatch("Kronecker module must have dimension 2h+1".into()));
    }
    let (e, duals, _) = module_frame(p, c)?;
    let duals = normalize_duals(p, &e, &duals)?;
    let q = e.hstack(&duals);
    let f = p.field();
    if p.restrict(&q) != kronecker_block(f, c.h) {
        return Err(Error::Internal("Kronecker normalization did not reach K_h".into()));
    }
    Ok(Congruence::from_matrix_unchecked(q))
}

/// Full decomposition into Kronecker blocks and a regular part.
pub fn kronecker_decompose(p: &Pencil) -> Result<KroneckerReport> {
    check_characteristic(p)?;
    let f = p.field().clone();
    let n = p.dim();
    if p.is_zero() {
        return Ok(KroneckerReport {
            indices: vec![0; n],
            transform: Congruence::identity(&f, n),
            regular_part: Pencil::zero(f, 0),
        });
    }
    let mut indices = Vec::new();
    let mut block_cols: Vec<Mat> = Vec::new();
    let mut acc = Matrix::identity(&f, n);
    let mut cur = p.clone();
    let mut spaces = ChainSpaces::new();
    let mut start = 0;
    while let Search::Chain(chain) = spaces.search(&cur, start) {
        let h = chain.h;
        let q = split_frame(&cur, &chain, true)?;
        let m = cur.dim();
        let module = q.submatrix(0, m, 0, 2 * h + 1);
        if cur.restrict(&module) != kronecker_block(&f, h) {
            return Err(Error::Internal("Kronecker normalization did not reach K_h".into()));
        }
        let rest = q.submatrix(0, m, 2 * h + 1, m);
        let q_inv = q.inverse(&f).ok_or_else(|| Error::Internal("split basis is singular".into()))?;
        block_cols.push(acc.mul(&f, &module));
        acc = acc.mul(&f, &rest);
        cur = cur.restrict(&rest);
        spaces.project(&f, &q_inv, m - 2 * h - 1);
        indices.push(h);
        start = h;
    }
    let mut t = Matrix::zeros(&f, n, 0);
    for b in &block_cols {
        t = t.hstack(b);
    }
    t = t.hstack(&acc);
    Ok(KroneckerReport { indices, transform: Congruence::from_matrix_unchecked(t), regular_part: cur })
}
