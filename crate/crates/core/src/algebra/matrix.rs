use super::field::Field;
use super::poly::Poly;
use crate::error::{Error, Result};

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon<E> {
    pub matrix: Matrix<E>,
    pub pivots: Vec<usize>,
}

impl<E: Clone + Eq> Matrix<E> {
    pub fn zeros<F: Field<Elem = E>>(f: &F, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![f.zero(); rows * cols] }
    }

    pub fn identity<F: Field<Elem = E>>(f: &F, n: usize) -> Self {
        let mut m = Self::zeros(f, n, n);
        for i in 0..n {
            m.set(i, i, f.one());
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<E>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Matrix { rows, cols, data }
    }

    /// Build from rows; all rows must have length `cols`.
    pub fn from_rows(rows: Vec<Vec<E>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix");
            data.extend(row);
        }
        Matrix { rows: r, cols, data }
    }

    /// Build from column vectors of length `rows`.
    pub fn from_cols(cols: &[Vec<E>], rows: usize) -> Self
    where
        E: Default,
    {
        let c = cols.len();
        let mut data = vec![E::default(); rows * c];
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "ragged matrix");
            for (i, x) in col.iter().enumerate() {
                data[i * c + j] = x.clone();
            }
        }
        Matrix { rows, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn to_cols(&self) -> Vec<Vec<E>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.data.iter().all(|x| f.is_zero(x))
    }

    /// Columns with the given indices.
    pub fn select_cols(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(self.rows * idx.len());
        for i in 0..self.rows {
            for &j in idx {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.rows, cols: idx.len(), data }
    }

    /// Contiguous submatrix.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let mut data = Vec::with_capacity((r1 - r0) * (c1 - c0));
        for i in r0..r1 {
            data.extend_from_slice(&self.data[i * self.cols + c0..i * self.cols + c1]);
        }
        Matrix { rows: r1 - r0, cols: c1 - c0, data }
    }

    /// Horizontal concatenation; row counts must agree.
    pub fn hstack(&self, o: &Self) -> Self {
        assert_eq!(self.rows, o.rows, "hstack row mismatch");
        let cols = self.cols + o.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(o.row(i));
        }
        Matrix { rows: self.rows, cols, data }
    }

    pub fn vstack(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&o.data);
        Matrix { rows: self.rows + o.rows, cols: self.cols, data }
    }

    /// Block-diagonal matrix.
    pub fn block_diag<F: Field<Elem = E>>(f: &F, blocks: &[Self]) -> Self {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(f, r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn map<E2, G: Fn(&E) -> E2>(&self, g: G) -> Matrix<E2> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(g).collect() }
    }

    pub fn add<F: Field<Elem = E>>(&self, f: &F, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        let data = self.data.iter().zip(&o.data).map(|(a, b)| f.add(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub<F: Field<Elem = E>>(&self, f: &F, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        let data = self.data.iter().zip(&o.data).map(|(a, b)| f.sub(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg<F: Field<Elem = E>>(&self, f: &F) -> Self {
        self.map(|a| f.neg(a))
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, c: &E) -> Self {
        self.map(|a| f.mul(a, c))
    }

    pub fn mul<F: Field<Elem = E>>(&self, f: &F, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "product shape mismatch");
        let mut out = Self::zeros(f, self.rows, o.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * o.cols..(i + 1) * o.cols];
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if f.is_zero(a) {
                    continue;
                }
                let brow = &o.data[k * o.cols..(k + 1) * o.cols];
                for (x, b) in orow.iter_mut().zip(brow) {
                    *x = f.add(x, &f.mul(a, b));
                }
            }
        }
        out
    }

    pub fn mul_vec<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Vec<E> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !f.is_zero(a) {
                        acc = f.add(&acc, &f.mul(a, b));
                    }
                }
                acc
            })
            .collect()
    }

    /// `x^T M y`.
    pub fn bilinear<F: Field<Elem = E>>(&self, f: &F, x: &[E], y: &[E]) -> E {
        dot(f, x, &self.mul_vec(f, y))
    }

    /// `S^T M S`.
    pub fn congruence<F: Field<Elem = E>>(&self, f: &F, s: &Self) -> Self {
        s.transpose().mul(f, &self.mul(f, s))
    }

    pub fn pow<F: Field<Elem = E>>(&self, f: &F, mut e: u64) -> Self {
        let mut acc = Self::identity(f, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(f, &base);
            }
        }
        acc
    }

    /// Evaluate a polynomial at this (square) matrix by Horner's rule.
    pub fn eval_poly<F: Field<Elem = E>>(&self, f: &F, p: &Poly<E>) -> Self {
        let n = self.rows;
        let mut acc = Self::zeros(f, n, n);
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(f, self);
            for i in 0..n {
                let v = f.add(acc.get(i, i), c);
                acc.set(i, i, v);
            }
        }
        acc
    }

    /// Reduced row echelon form.
    pub fn rref<F: Field<Elem = E>>(&self, f: &F) -> Echelon<E> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        let cols = m.cols;
        for c in 0..cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    m.data.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(m.get(r, c)).unwrap();
            for j in c..cols {
                let v = f.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                for j in c..cols {
                    let t = f.mul(&factor, m.get(r, j));
                    let v = f.sub(m.get(i, j), &t);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { matrix: m, pivots }
    }

    pub fn rank<F: Field<Elem = E>>(&self, f: &F) -> usize {
        self.rref(f).pivots.len()
    }

    /// Basis of the right kernel, as columns. Basis vector `k` has a 1 in the
    /// `k`-th free column and zeros in the other free columns.
    pub fn kernel<F: Field<Elem = E>>(&self, f: &F) -> Self {
        let ech = self.rref(f);
        let n = self.cols;
        let free: Vec<usize> = (0..n).filter(|c| !ech.pivots.contains(c)).collect();
        let mut k = Self::zeros(f, n, free.len());
        for (kc, &fc) in free.iter().enumerate() {
            k.set(fc, kc, f.one());
            for (r, &pc) in ech.pivots.iter().enumerate() {
                k.set(pc, kc, f.neg(ech.matrix.get(r, fc)));
            }
        }
        k
    }

    /// One solution of `self * x = b` (free variables set to zero), if any.
    pub fn solve<F: Field<Elem = E>>(&self, f: &F, b: &[E]) -> Option<Vec<E>> {
        let bm = Self::from_vec(b.len(), 1, b.to_vec());
        self.solve_many(f, &bm).map(|x| x.col(0))
    }

    /// One solution `X` of `self * X = B`, if any.
    pub fn solve_many<F: Field<Elem = E>>(&self, f: &F, b: &Self) -> Option<Self> {
        assert_eq!(self.rows, b.rows, "right-hand side shape mismatch");
        let n = self.cols;
        let ech = self.hstack(b).rref(f);
        if ech.pivots.last().is_some_and(|&p| p >= n) {
            return None;
        }
        let mut x = Self::zeros(f, n, b.cols);
        for (r, &pc) in ech.pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, ech.matrix.get(r, n + j).clone());
            }
        }
        Some(x)
    }

    pub fn inverse<F: Field<Elem = E>>(&self, f: &F) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let ech = self.hstack(&Self::identity(f, n)).rref(f);
        if ech.pivots.len() < n || ech.pivots[n - 1] != n - 1 {
            return None;
        }
        Some(ech.matrix.submatrix(0, n, n, 2 * n))
    }

    pub fn det<F: Field<Elem = E>>(&self, f: &F) -> E {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = f.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !f.is_zero(m.get(i, c))) else {
                return f.zero();
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = f.neg(&det);
            }
            let piv = m.get(c, c).clone();
            det = f.mul(&det, &piv);
            let inv = f.inv(&piv).unwrap();
            for i in c + 1..n {
                let factor = f.mul(m.get(i, c), &inv);
                if f.is_zero(&factor) {
                    continue;
                }
                for j in c..n {
                    let t = f.mul(&factor, m.get(c, j));
                    let v = f.sub(m.get(i, j), &t);
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    /// Characteristic polynomial `det(xI - M)` via reduction to Hessenberg form.
    pub fn charpoly<F: Field<Elem = E>>(&self, f: &F) -> Poly<E> {
        assert!(self.is_square(), "characteristic polynomial of a non-square matrix");
        let n = self.rows;
        let mut h = self.clone();
        // similarity reduction to upper Hessenberg form
        for c in 0..n.saturating_sub(2) {
            let Some(p) = (c + 1..n).find(|&i| !f.is_zero(h.get(i, c))) else {
                continue;
            };
            if p != c + 1 {
                let r = c + 1;
                for j in 0..n {
                    h.data.swap(p * n + j, r * n + j);
                }
                for i in 0..n {
                    h.data.swap(i * n + p, i * n + r);
                }
            }
            let inv = f.inv(h.get(c + 1, c)).unwrap();
            for i in c + 2..n {
                let t = f.mul(h.get(i, c), &inv);
                if f.is_zero(&t) {
                    continue;
                }
                // row_i -= t row_{c+1}; col_{c+1} += t col_i
                for j in 0..n {
                    let v = f.sub(h.get(i, j), &f.mul(&t, h.get(c + 1, j)));
                    h.set(i, j, v);
                }
                for r in 0..n {
                    let v = f.add(h.get(r, c + 1), &f.mul(&t, h.get(r, i)));
                    h.set(r, c + 1, v);
                }
            }
        }
        // p_k(x) = (x - h_kk) p_{k-1} - sum_{i<k} h_ik (prod_{m=i+1..k} h_{m,m-1}) p_{i-1}
        let mut ps: Vec<Poly<E>> = vec![Poly::constant(f, f.one())];
        for k in 0..n {
            let mut pk = Poly::linear(f, h.get(k, k)).mul(f, &ps[k]);
            let mut prod = f.one();
            for i in (0..k).rev() {
                prod = f.mul(&prod, h.get(i + 1, i));
                if f.is_zero(&prod) {
                    break;
                }
                let c = f.mul(h.get(i, k), &prod);
                pk = pk.sub(f, &ps[i].scale(f, &c));
            }
            ps.push(pk);
        }
        ps.pop().unwrap()
    }
}

/// Dot product of two vectors.
pub fn dot<F: Field>(f: &F, x: &[F::Elem], y: &[F::Elem]) -> F::Elem {
    let mut acc = f.zero();
    for (a, b) in x.iter().zip(y) {
        if !f.is_zero(a) {
            acc = f.add(&acc, &f.mul(a, b));
        }
    }
    acc
}

/// Matrix of multiplication by `x` on `k[x]/f` in the basis `1, x, ..., x^(d-1)`.
pub fn companion_matrix<F: Field>(f: &F, p: &Poly<F::Elem>) -> Result<Matrix<F::Elem>> {
    let d = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::InvalidPolynomial("companion matrix needs degree >= 1".into())),
    };
    if !p.is_monic(f) {
        return Err(Error::InvalidPolynomial("companion matrix needs a monic polynomial".into()));
    }
    let mut m = Matrix::zeros(f, d, d);
    for i in 1..d {
        m.set(i, i - 1, f.one());
    }
    for i in 0..d {
        m.set(i, d - 1, f.neg(&p.coeffs()[i]));
    }
    Ok(m)
}

/// Values `h_0, ..., h_{len-1}` of the functional `a -> Tr(a / f'(z))` on powers of a root `z`
/// of the monic polynomial `f`: zeros up to `d - 2`, one at `d - 1`, then the recurrence of `f`.
pub fn dual_trace_sequence<F: Field>(f: &F, p: &Poly<F::Elem>, len: usize) -> Vec<F::Elem> {
    let d = p.degree().unwrap_or(0);
    let mut h = vec![f.zero(); len.max(d)];
    if d == 0 {
        return h;
    }
    h[d - 1] = f.one();
    for m in d..len {
        let mut acc = f.zero();
        for i in 0..d {
            acc = f.sub(&acc, &f.mul(&p.coeffs()[i], &h[m - d + i]));
        }
        h[m] = acc;
    }
    h.truncate(len);
    h
}

/// The Hankel matrix `T_f[i][j] = h_{i+j}` of the dual-trace sequence.
///
/// `T_f` and `T_f M_f` are symmetric and `T_f` is invertible.
pub fn trace_form_matrix<F: Field>(f: &F, p: &Poly<F::Elem>) -> Result<Matrix<F::Elem>> {
    if !p.is_monic(f) || !super::factor::is_irreducible(f, p) {
        return Err(Error::InvalidPolynomial("trace form needs a monic irreducible polynomial".into()));
    }
    if p.derivative(f).is_zero() {
        return Err(Error::InvalidPolynomial("trace form needs a separable polynomial".into()));
    }
    let d = p.degree().unwrap();
    let h = dual_trace_sequence(f, p, 2 * d - 1);
    let mut t = Matrix::zeros(f, d, d);
    for i in 0..d {
        for j in 0..d {
            t.set(i, j, h[i + j].clone());
        }
    }
    Ok(t)
}
