//! Symmetric pencils, their characteristic forms, and the congruence and
//! homography actions.

use crate::algebra::{Fe, Field, Fq, Matrix, Poly};
use crate::error::{Error, Result};

/// A pair `(B_inf, B_0)` of symmetric matrices, read as `lambda B_inf + B_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pencil {
    field: Fq,
    b_inf: Matrix<Fe>,
    b_0: Matrix<Fe>,
}

impl Pencil {
    pub fn new(field: Fq, b_inf: Matrix<Fe>, b_0: Matrix<Fe>) -> Result<Self> {
        if !b_inf.is_square() || !b_0.is_square() || b_inf.rows() != b_0.rows() {
            return Err(Error::DimensionMismatch("pencil matrices must be square of equal size".into()));
        }
        if !b_inf.is_symmetric() || !b_0.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(Pencil { field, b_inf, b_0 })
    }

    /// Construction without validation, for matrices symmetric by construction.
    pub(crate) fn from_parts(field: Fq, b_inf: Matrix<Fe>, b_0: Matrix<Fe>) -> Self {
        debug_assert!(b_inf.is_symmetric() && b_0.is_symmetric());
        Pencil { field, b_inf, b_0 }
    }

    pub fn zero(field: Fq, n: usize) -> Self {
        let z = Matrix::zeros(&field, n, n);
        Pencil { field, b_inf: z.clone(), b_0: z }
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.b_inf.rows()
    }

    pub fn b_inf(&self) -> &Matrix<Fe> {
        &self.b_inf
    }

    pub fn b_0(&self) -> &Matrix<Fe> {
        &self.b_0
    }

    pub fn is_zero(&self) -> bool {
        self.b_inf.is_zero(&self.field) && self.b_0.is_zero(&self.field)
    }

    /// Exchange the two forms.
    pub fn swap(&self) -> Self {
        Pencil { field: self.field.clone(), b_inf: self.b_0.clone(), b_0: self.b_inf.clone() }
    }

    /// Both matrices symmetric with zero diagonal.
    pub fn is_alternating(&self) -> bool {
        let f = &self.field;
        (0..self.dim()).all(|i| f.is_zero(self.b_inf.get(i, i)) && f.is_zero(self.b_0.get(i, i)))
    }

    /// Gram matrices of the restriction to the span of the columns of `w`.
    pub fn restrict(&self, w: &Matrix<Fe>) -> Self {
        Pencil {
            field: self.field.clone(),
            b_inf: self.b_inf.congruence(&self.field, w),
            b_0: self.b_0.congruence(&self.field, w),
        }
    }

    pub fn block_diag(field: &Fq, blocks: &[Pencil]) -> Self {
        let bi: Vec<_> = blocks.iter().map(|b| b.b_inf.clone()).collect();
        let b0: Vec<_> = blocks.iter().map(|b| b.b_0.clone()).collect();
        Pencil {
            field: field.clone(),
            b_inf: Matrix::block_diag(field, &bi),
            b_0: Matrix::block_diag(field, &b0),
        }
    }

    /// `lambda B_inf + mu B_0`.
    pub fn eval(&self, lambda: &Fe, mu: &Fe) -> Matrix<Fe> {
        let f = &self.field;
        self.b_inf.scale(f, lambda).add(f, &self.b_0.scale(f, mu))
    }

    /// The same pencil with entries embedded into an extension field.
    pub fn lift(&self, sup: &Fq) -> Result<Self> {
        let emb = |a: &Fe| crate::algebra::sqrt::embed_subfield(&self.field, sup, a);
        let conv = |m: &Matrix<Fe>| -> Result<Matrix<Fe>> {
            let rows = m
                .to_rows()
                .iter()
                .map(|r| r.iter().map(emb).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            Ok(Matrix::from_rows(rows, m.cols()))
        };
        Ok(Pencil { field: sup.clone(), b_inf: conv(&self.b_inf)?, b_0: conv(&self.b_0)? })
    }
}

/// Change of basis `S`, acting on Gram matrices by `B -> S^T B S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Congruence(Matrix<Fe>);

impl Congruence {
    pub fn new(field: &Fq, s: Matrix<Fe>) -> Result<Self> {
        if !s.is_square() || field.is_zero(&s.det(field)) {
            return Err(Error::Singular);
        }
        Ok(Congruence(s))
    }

    pub(crate) fn from_matrix_unchecked(s: Matrix<Fe>) -> Self {
        Congruence(s)
    }

    pub fn identity(field: &Fq, n: usize) -> Self {
        Congruence(Matrix::identity(field, n))
    }

    pub fn matrix(&self) -> &Matrix<Fe> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    /// Applying `self` then `other` equals applying `self * other`.
    pub fn then(&self, field: &Fq, other: &Congruence) -> Congruence {
        Congruence(self.0.mul(field, &other.0))
    }

    pub fn inverse(&self, field: &Fq) -> Congruence {
        Congruence(self.0.inverse(field).expect("congruence is invertible"))
    }
}

/// A point of the projective line, stored as a normalized pair `(lambda : mu)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point<E> {
    pub lambda: E,
    pub mu: E,
}

/// Projective class of an invertible 2x2 matrix `[[a, b], [c, d]]`, normalized
/// so the first nonzero entry in row-major order is one.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Homography {
    m: [Fe; 4],
}

impl Homography {
    pub fn new(field: &Fq, m: [Fe; 4]) -> Result<Self> {
        let det = field.sub(&field.mul(&m[0], &m[3]), &field.mul(&m[1], &m[2]));
        if field.is_zero(&det) {
            return Err(Error::Singular);
        }
        let lead = *m.iter().find(|x| !field.is_zero(x)).unwrap();
        let inv = field.inv(&lead).unwrap();
        Ok(Homography { m: m.map(|x| field.mul(&x, &inv)) })
    }

    pub fn identity(field: &Fq) -> Self {
        Homography { m: [field.one(), field.zero(), field.zero(), field.one()] }
    }

    pub fn entries(&self) -> [Fe; 4] {
        self.m
    }

    /// Matrix product `self * other`.
    pub fn compose(&self, field: &Fq, other: &Homography) -> Homography {
        let (a, b) = (&self.m, &other.m);
        let mm = |x: &Fe, y: &Fe, z: &Fe, w: &Fe| field.add(&field.mul(x, y), &field.mul(z, w));
        Homography::new(
            field,
            [
                mm(&a[0], &b[0], &a[1], &b[2]),
                mm(&a[0], &b[1], &a[1], &b[3]),
                mm(&a[2], &b[0], &a[3], &b[2]),
                mm(&a[2], &b[1], &a[3], &b[3]),
            ],
        )
        .expect("product of invertible matrices")
    }

    pub fn inverse(&self, field: &Fq) -> Homography {
        let m = &self.m;
        Homography::new(field, [m[3], field.neg(&m[1]), field.neg(&m[2]), m[0]]).expect("invertible")
    }

    /// `(lambda : mu) -> (a lambda + b mu : c lambda + d mu)`.
    pub fn apply(&self, field: &Fq, p: &Point<Fe>) -> Point<Fe> {
        let m = &self.m;
        let l = field.add(&field.mul(&m[0], &p.lambda), &field.mul(&m[1], &p.mu));
        let u = field.add(&field.mul(&m[2], &p.lambda), &field.mul(&m[3], &p.mu));
        normalize_point(field, l, u)
    }
}

/// Normalize homogeneous coordinates: `mu = 1`, or `(1 : 0)` at infinity.
pub fn normalize_point<F: Field>(field: &F, lambda: F::Elem, mu: F::Elem) -> Point<F::Elem> {
    if field.is_zero(&mu) {
        Point { lambda: field.one(), mu }
    } else {
        let inv = field.inv(&mu).unwrap();
        Point { lambda: field.mul(&lambda, &inv), mu: field.one() }
    }
}

/// Homogeneous form of degree `n`; coefficient `i` multiplies `lambda^i mu^(n-i)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BinaryForm {
    degree: usize,
    coeffs: Vec<Fe>,
}

impl BinaryForm {
    pub fn new(degree: usize, coeffs: Vec<Fe>) -> Self {
        assert_eq!(coeffs.len(), degree + 1, "binary form needs degree + 1 coefficients");
        BinaryForm { degree, coeffs }
    }

    /// Homogenize an affine polynomial in `lambda` to degree `n`.
    pub fn homogenize(field: &Fq, p: &Poly<Fe>, n: usize) -> Self {
        let mut c = p.coeffs().to_vec();
        assert!(c.len() <= n + 1, "polynomial degree exceeds form degree");
        c.resize(n + 1, field.zero());
        BinaryForm { degree: n, coeffs: c }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn is_zero(&self, field: &Fq) -> bool {
        self.coeffs.iter().all(|c| field.is_zero(c))
    }

    /// Dehomogenize at `mu = 1`.
    pub fn affine(&self, field: &Fq) -> Poly<Fe> {
        Poly::from_coeffs(field, self.coeffs.clone())
    }

    /// Divide by the first nonzero coefficient in `lambda`-descending order.
    pub fn normalized(&self, field: &Fq) -> Self {
        match self.coeffs.iter().rev().find(|c| !field.is_zero(c)) {
            None => self.clone(),
            Some(l) => {
                let inv = field.inv(l).unwrap();
                BinaryForm { degree: self.degree, coeffs: self.coeffs.iter().map(|c| field.mul(c, &inv)).collect() }
            }
        }
    }

    pub fn eval(&self, field: &Fq, lambda: &Fe, mu: &Fe) -> Fe {
        let mut acc = field.zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            let t = field.mul(&field.pow(lambda, i as u128), &field.pow(mu, (self.degree - i) as u128));
            acc = field.add(&acc, &field.mul(c, &t));
        }
        acc
    }

    pub fn mul(&self, field: &Fq, o: &BinaryForm) -> BinaryForm {
        let mut c = vec![field.zero(); self.degree + o.degree + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] = field.add(&c[i + j], &field.mul(a, b));
            }
        }
        BinaryForm { degree: self.degree + o.degree, coeffs: c }
    }

    /// `self(a lambda + b mu, c lambda + d mu)`.
    pub fn compose(&self, field: &Fq, g: &Homography) -> BinaryForm {
        let m = g.entries();
        let l = BinaryForm { degree: 1, coeffs: vec![m[1], m[0]] };
        let u = BinaryForm { degree: 1, coeffs: vec![m[3], m[2]] };
        let one = BinaryForm { degree: 0, coeffs: vec![field.one()] };
        let mut lp = vec![one.clone()];
        let mut up = vec![one];
        for i in 0..self.degree {
            lp.push(lp[i].mul(field, &l));
            up.push(up[i].mul(field, &u));
        }
        let mut acc = vec![field.zero(); self.degree + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if field.is_zero(c) {
                continue;
            }
            let t = lp[i].mul(field, &up[self.degree - i]);
            for (k, x) in t.coeffs.iter().enumerate() {
                acc[k] = field.add(&acc[k], &field.mul(c, x));
            }
        }
        BinaryForm { degree: self.degree, coeffs: acc }
    }
}

/// Polar matrix `A + A^T` of the quadratic form with upper-triangular coefficient matrix `A`.
pub fn polarize(field: &Fq, q: &Matrix<Fe>) -> Result<Matrix<Fe>> {
    if field.characteristic() == 2 {
        return Err(Error::EvenCharacteristic);
    }
    if !q.is_square() {
        return Err(Error::DimensionMismatch("quadratic coefficient matrix must be square".into()));
    }
    for i in 0..q.rows() {
        for j in 0..i {
            if !field.is_zero(q.get(i, j)) {
                return Err(Error::Parse("quadratic coefficient matrix must be upper triangular".into()));
            }
        }
    }
    Ok(q.add(field, &q.transpose()))
}

/// Inverse of [`polarize`]: the upper-triangular coefficient matrix of `x -> b(x, x) / 2`.
pub fn depolarize(field: &Fq, b: &Matrix<Fe>) -> Result<Matrix<Fe>> {
    if field.characteristic() == 2 {
        return Err(Error::EvenCharacteristic);
    }
    if !b.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let half = field.inv(&field.from_int(2)).unwrap();
    let n = b.rows();
    let mut q = Matrix::zeros(field, n, n);
    for i in 0..n {
        q.set(i, i, field.mul(b.get(i, i), &half));
        for j in i + 1..n {
            q.set(i, j, *b.get(i, j));
        }
    }
    Ok(q)
}

/// Determinant of a square matrix over `k[lambda]` by Berkowitz's division-free algorithm.
fn berkowitz_det(field: &Fq, a: &[Vec<Poly<Fe>>]) -> Poly<Fe> {
    let n = a.len();
    if n == 0 {
        return Poly::constant(field, field.one());
    }
    let one = Poly::constant(field, field.one());
    // c holds the coefficients of det(tI - A_r), highest power first
    let mut c = vec![one.clone(), a[0][0].neg(field)];
    for r in 1..n {
        let mut col = vec![one.clone(), a[r][r].neg(field)];
        let mut v: Vec<Poly<Fe>> = (0..r).map(|i| a[i][r].clone()).collect();
        for k in 0..r {
            let mut s = Poly::zero();
            for (j, vj) in v.iter().enumerate() {
                s = s.add(field, &a[r][j].mul(field, vj));
            }
            col.push(s.neg(field));
            if k + 1 < r {
                v = (0..r)
                    .map(|i| {
                        let mut acc = Poly::zero();
                        for (j, vj) in v.iter().enumerate() {
                            acc = acc.add(field, &a[i][j].mul(field, vj));
                        }
                        acc
                    })
                    .collect();
            }
        }
        let mut next = Vec::with_capacity(r + 2);
        for i in 0..r + 2 {
            let mut acc = Poly::zero();
            for (j, cj) in c.iter().enumerate().take(i + 1) {
                acc = acc.add(field, &col[i - j].mul(field, cj));
            }
            next.push(acc);
        }
        c = next;
    }
    let constant = c.pop().unwrap();
    if n % 2 == 1 {
        constant.neg(field)
    } else {
        constant
    }
}

/// `det(lambda B_inf + mu B_0)` as a binary form of degree `n`.
pub fn char_poly(p: &Pencil) -> BinaryForm {
    let f = &p.field;
    let n = p.dim();
    let a: Vec<Vec<Poly<Fe>>> = (0..n)
        .map(|i| (0..n).map(|j| Poly::from_coeffs(f, vec![*p.b_0.get(i, j), *p.b_inf.get(i, j)])).collect())
        .collect();
    BinaryForm::homogenize(f, &berkowitz_det(f, &a), n)
}

/// `(a B_inf + c B_0, b B_inf + d B_0)` for `g = [[a, b], [c, d]]`.
pub fn twist(p: &Pencil, g: &Homography) -> Pencil {
    let f = &p.field;
    let m = g.entries();
    let comb = |x: &Fe, y: &Fe| p.b_inf.scale(f, x).add(f, &p.b_0.scale(f, y));
    Pencil { field: f.clone(), b_inf: comb(&m[0], &m[2]), b_0: comb(&m[1], &m[3]) }
}

/// `(S^T B_inf S, S^T B_0 S)`.
pub fn apply_congruence(p: &Pencil, s: &Congruence) -> Result<Pencil> {
    if s.dim() != p.dim() {
        return Err(Error::DimensionMismatch("congruence size differs from pencil size".into()));
    }
    Ok(p.restrict(s.matrix()))
}

fn check_pair(a: &Pencil, b: &Pencil) -> Result<()> {
    if a.field != b.field {
        return Err(Error::IncompatibleFields);
    }
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch("pencils have different sizes".into()));
    }
    Ok(())
}

/// Whether `S^T A S = B` holds exactly for both forms.
pub fn verify_ip1s(a: &Pencil, b: &Pencil, s: &Matrix<Fe>) -> Result<bool> {
    check_pair(a, b)?;
    if s.rows() != a.dim() || s.cols() != a.dim() {
        return Err(Error::DimensionMismatch("transform size differs from pencil size".into()));
    }
    let f = &a.field;
    if f.is_zero(&s.det(f)) {
        return Ok(false);
    }
    Ok(a.b_inf.congruence(f, s) == b.b_inf && a.b_0.congruence(f, s) == b.b_0)
}

/// Whether `S^T twist(A, g) S = B`.
pub fn verify_ip2s(a: &Pencil, b: &Pencil, s: &Matrix<Fe>, g: &Homography) -> Result<bool> {
    check_pair(a, b)?;
    verify_ip1s(&twist(a, g), b, s)
}
