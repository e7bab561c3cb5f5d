use super::field::Field;
use crate::error::{Error, Result};

/// The truncated local ring `R = K[pi]/pi^ell`.
#[derive(Clone, Debug)]
pub struct LocalRing<F: Field> {
    base: F,
    ell: usize,
}

/// Element of a [`LocalRing`]: coefficient of `pi^i` at index `i`.
pub type LocalElem<F> = Vec<<F as Field>::Elem>;

impl<F: Field> LocalRing<F> {
    pub fn new(base: F, ell: usize) -> Self {
        assert!(ell >= 1, "truncation length must be positive");
        LocalRing { base, ell }
    }

    pub fn base(&self) -> &F {
        &self.base
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn zero(&self) -> LocalElem<F> {
        vec![self.base.zero(); self.ell]
    }

    pub fn one(&self) -> LocalElem<F> {
        self.constant(&self.base.one())
    }

    pub fn constant(&self, c: &F::Elem) -> LocalElem<F> {
        let mut v = self.zero();
        v[0] = c.clone();
        v
    }

    /// The uniformizer `pi` (zero when `ell = 1`).
    pub fn pi(&self) -> LocalElem<F> {
        let mut v = self.zero();
        if self.ell > 1 {
            v[1] = self.base.one();
        }
        v
    }

    pub fn add(&self, a: &[F::Elem], b: &[F::Elem]) -> LocalElem<F> {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }

    pub fn sub(&self, a: &[F::Elem], b: &[F::Elem]) -> LocalElem<F> {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }

    pub fn neg(&self, a: &[F::Elem]) -> LocalElem<F> {
        a.iter().map(|x| self.base.neg(x)).collect()
    }

    pub fn mul(&self, a: &[F::Elem], b: &[F::Elem]) -> LocalElem<F> {
        let k = &self.base;
        let mut out = self.zero();
        for i in 0..self.ell {
            if k.is_zero(&a[i]) {
                continue;
            }
            for j in 0..self.ell - i {
                out[i + j] = k.add(&out[i + j], &k.mul(&a[i], &b[j]));
            }
        }
        out
    }

    pub fn scale(&self, a: &[F::Elem], c: &F::Elem) -> LocalElem<F> {
        a.iter().map(|x| self.base.mul(x, c)).collect()
    }

    pub fn is_zero(&self, a: &[F::Elem]) -> bool {
        a.iter().all(|x| self.base.is_zero(x))
    }

    pub fn is_unit(&self, a: &[F::Elem]) -> bool {
        !self.base.is_zero(&a[0])
    }

    /// Inverse of a unit.
    pub fn inv(&self, a: &[F::Elem]) -> Option<LocalElem<F>> {
        let k = &self.base;
        let a0inv = k.inv(&a[0])?;
        // solve a * b = 1 coefficient by coefficient
        let mut b = self.zero();
        b[0] = a0inv.clone();
        for n in 1..self.ell {
            let mut acc = k.zero();
            for i in 1..=n {
                acc = k.add(&acc, &k.mul(&a[i], &b[n - i]));
            }
            b[n] = k.neg(&k.mul(&acc, &a0inv));
        }
        Some(b)
    }

    /// The functional `tau`: coefficient of `pi^(ell-1)`.
    pub fn tau(&self, a: &[F::Elem]) -> F::Elem {
        a[self.ell - 1].clone()
    }

    /// Evaluate a polynomial with coefficients in `R` (constant term first).
    pub fn eval(&self, g: &[LocalElem<F>], x: &[F::Elem]) -> LocalElem<F> {
        let mut acc = self.zero();
        for c in g.iter().rev() {
            acc = self.add(&self.mul(&acc, x), c);
        }
        acc
    }

    /// Formal derivative of a polynomial over `R`.
    pub fn derivative(&self, g: &[LocalElem<F>]) -> Vec<LocalElem<F>> {
        g.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| self.scale(c, &self.base.from_int(i as i64)))
            .collect()
    }

    /// Reduce to a shorter truncation `R_m`, `m <= ell`.
    pub fn truncate(&self, a: &[F::Elem], m: usize) -> LocalElem<F> {
        a[..m].to_vec()
    }
}

/// Newton lifting of a simple root modulo `pi` to an exact root in `R`.
pub fn hensel_root<F: Field>(ring: &LocalRing<F>, g: &[LocalElem<F>], x0: &[F::Elem]) -> Result<LocalElem<F>> {
    let dg = ring.derivative(g);
    if !ring.is_unit(&ring.eval(&dg, x0)) {
        return Err(Error::HenselFailed);
    }
    if !ring.base().is_zero(&ring.eval(g, x0)[0]) {
        return Err(Error::HenselFailed);
    }
    let mut x = x0.to_vec();
    let mut prec = 1;
    while prec < ring.ell() {
        let d = ring.inv(&ring.eval(&dg, &x)).ok_or(Error::HenselFailed)?;
        x = ring.sub(&x, &ring.mul(&ring.eval(g, &x), &d));
        prec *= 2;
    }
    if !ring.is_zero(&ring.eval(g, &x)) {
        return Err(Error::HenselFailed);
    }
    Ok(x)
}

/// Square root of a unit whose constant term is a square, lifted to `R`.
pub fn local_sqrt<F: Field>(ring: &LocalRing<F>, w: &[F::Elem]) -> Result<Option<LocalElem<F>>> {
    let Some(r0) = super::sqrt::field_sqrt(ring.base(), &w[0])? else {
        return Ok(None);
    };
    if ring.base().is_zero(&r0) {
        return Err(Error::HenselFailed);
    }
    let g = vec![ring.neg(w), ring.zero(), ring.one()];
    hensel_root(ring, &g, &ring.constant(&r0)).map(Some)
}
