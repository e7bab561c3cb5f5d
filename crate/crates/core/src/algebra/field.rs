use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::Rng;

use crate::error::{Error, Result};

/// Arithmetic context of a finite field.
///
/// Elements are plain values; every operation goes through the context so the
/// same element type can serve fields with different moduli.
pub trait Field: Clone + Debug {
    type Elem: Clone + Eq + Ord + Hash + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_int(&self, n: i64) -> Self::Elem;
    fn characteristic(&self) -> u64;
    fn order(&self) -> BigUint;
    /// The element at position `index` of the lexicographic order.
    ///
    /// `index` must be smaller than the field order.
    fn nth_element(&self, index: u128) -> Self::Elem;
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn square(&self, a: &Self::Elem) -> Self::Elem {
        self.mul(a, a)
    }

    fn pow(&self, a: &Self::Elem, mut e: u128) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn pow_big(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        if let Some(small) = e.to_u128() {
            return self.pow(a, small);
        }
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// Field order as a machine integer when it fits.
    fn order_u128(&self) -> Option<u128> {
        self.order().to_u128()
    }

    /// Quadratic residuosity; zero counts as a square.
    fn is_square(&self, a: &Self::Elem) -> bool {
        if self.is_zero(a) || self.characteristic() == 2 {
            return true;
        }
        let e = (self.order() - BigUint::one()) >> 1;
        self.is_one(&self.pow_big(a, &e))
    }

    /// Frobenius x -> x^p.
    fn frobenius(&self, a: &Self::Elem) -> Self::Elem {
        self.pow(a, self.characteristic() as u128)
    }

    /// Random nonzero element.
    fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        loop {
            let x = self.random(rng);
            if !self.is_zero(&x) {
                return x;
            }
        }
    }
}

pub const MAX_DEGREE: usize = 8;

/// Element of a prime-power field `F_p[t]/m(t)`, coefficients constant term first.
///
/// Unused trailing slots are always zero, so the derived order is the
/// lexicographic order on coefficient vectors.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fe(pub(crate) [u16; MAX_DEGREE]);

impl Fe {
    pub fn coeff(&self, i: usize) -> u16 {
        self.0[i]
    }
}

impl Debug for Fe {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let last = self.0.iter().rposition(|&c| c != 0).unwrap_or(0);
        if last == 0 {
            write!(f, "{}", self.0[0])
        } else {
            write!(f, "{:?}", &self.0[..=last])
        }
    }
}

/// The field `F_q = F_p[t]/m(t)` with `p < 2^16` and `deg m <= 8`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fq {
    p: u32,
    e: usize,
    /// Monic modulus, constant term first, length `e + 1`.
    modulus: Vec<u32>,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Fq {
    /// Prime field F_p.
    pub fn prime(p: u64) -> Result<Self> {
        if p >= 1 << 16 || !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not a prime below 2^16")));
        }
        Ok(Fq { p: p as u32, e: 1, modulus: vec![0, 1] })
    }

    /// Extension field with an explicit monic modulus (constant term first).
    ///
    /// A degree-1 modulus is accepted and yields the prime field.
    pub fn new(p: u64, modulus: &[u64]) -> Result<Self> {
        let base = Fq::prime(p)?;
        if modulus.len() < 2 || modulus.len() > MAX_DEGREE + 1 {
            return Err(Error::InvalidField(format!(
                "modulus degree must be between 1 and {MAX_DEGREE}"
            )));
        }
        if *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidField("modulus must be monic".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("modulus coefficient out of range".into()));
        }
        let e = modulus.len() - 1;
        if e == 1 {
            return Ok(base);
        }
        let poly = crate::algebra::Poly::new(modulus.iter().map(|&c| base.from_int(c as i64)).collect());
        if !crate::algebra::factor::is_irreducible(&base, &poly) {
            return Err(Error::InvalidField("modulus is reducible".into()));
        }
        Ok(Fq { p: p as u32, e, modulus: modulus.iter().map(|&c| c as u32).collect() })
    }

    /// The field of order `p^e` with the lexicographically first monic irreducible modulus.
    pub fn with_degree(p: u64, e: usize) -> Result<Self> {
        let base = Fq::prime(p)?;
        if e == 0 || e > MAX_DEGREE {
            return Err(Error::InvalidField(format!("degree must be between 1 and {MAX_DEGREE}")));
        }
        if e == 1 {
            return Ok(base);
        }
        let f = crate::algebra::factor::first_irreducible(&base, e);
        let modulus: Vec<u64> = f.coeffs().iter().map(|c| c.0[0] as u64).collect();
        Fq::new(p, &modulus)
    }

    /// The field of order `q`, if `q` is a prime power in range.
    pub fn with_order(q: u64) -> Result<Self> {
        let mut p = 2;
        while p * p <= q && q % p != 0 {
            p += 1;
        }
        if q < 2 {
            return Err(Error::InvalidField(format!("{q} is not a prime power")));
        }
        if q % p != 0 {
            p = q;
        }
        let mut r = q;
        let mut e = 0;
        while r % p == 0 {
            r /= p;
            e += 1;
        }
        if r != 1 {
            return Err(Error::InvalidField(format!("{q} is not a prime power")));
        }
        Fq::with_degree(p, e)
    }

    pub fn p(&self) -> u64 {
        self.p as u64
    }

    pub fn degree(&self) -> usize {
        self.e
    }

    pub fn modulus(&self) -> Vec<u64> {
        self.modulus.iter().map(|&c| c as u64).collect()
    }

    /// Field order as u128 (always fits for the supported parameter range).
    pub fn q(&self) -> u128 {
        (self.p as u128).pow(self.e as u32)
    }

    /// Build an element from coefficients, constant term first.
    pub fn elem(&self, coeffs: &[u64]) -> Result<Fe> {
        if coeffs.len() > self.e {
            return Err(Error::InvalidElement(format!("expected at most {} coefficients", self.e)));
        }
        let mut out = [0u16; MAX_DEGREE];
        for (i, &c) in coeffs.iter().enumerate() {
            if c >= self.p as u64 {
                return Err(Error::InvalidElement(format!("residue {c} out of range")));
            }
            out[i] = c as u16;
        }
        Ok(Fe(out))
    }

    pub fn coeffs(&self, a: &Fe) -> Vec<u64> {
        a.0[..self.e].iter().map(|&c| c as u64).collect()
    }

    /// The class of `t` in a proper extension; zero for a prime field.
    pub fn gen(&self) -> Fe {
        if self.e == 1 {
            return self.zero();
        }
        let mut out = [0u16; MAX_DEGREE];
        out[1] = 1;
        Fe(out)
    }

    /// Whether `a` lies in the prime subfield.
    pub fn is_prime_subfield(&self, a: &Fe) -> bool {
        a.0[1..].iter().all(|&c| c == 0)
    }

    #[inline]
    fn red(&self, x: u64) -> u16 {
        (x % self.p as u64) as u16
    }
}

impl Field for Fq {
    type Elem = Fe;

    #[inline]
    fn zero(&self) -> Fe {
        Fe([0; MAX_DEGREE])
    }

    #[inline]
    fn one(&self) -> Fe {
        let mut out = [0; MAX_DEGREE];
        out[0] = 1;
        Fe(out)
    }

    #[inline]
    fn add(&self, a: &Fe, b: &Fe) -> Fe {
        let p = self.p;
        let mut out = [0u16; MAX_DEGREE];
        for i in 0..self.e {
            let s = a.0[i] as u32 + b.0[i] as u32;
            out[i] = if s >= p { (s - p) as u16 } else { s as u16 };
        }
        Fe(out)
    }

    #[inline]
    fn sub(&self, a: &Fe, b: &Fe) -> Fe {
        let p = self.p;
        let mut out = [0u16; MAX_DEGREE];
        for i in 0..self.e {
            let (x, y) = (a.0[i] as u32, b.0[i] as u32);
            out[i] = if x >= y { (x - y) as u16 } else { (x + p - y) as u16 };
        }
        Fe(out)
    }

    #[inline]
    fn neg(&self, a: &Fe) -> Fe {
        let mut out = [0u16; MAX_DEGREE];
        for i in 0..self.e {
            out[i] = if a.0[i] == 0 { 0 } else { (self.p - a.0[i] as u32) as u16 };
        }
        Fe(out)
    }

    #[inline]
    fn mul(&self, a: &Fe, b: &Fe) -> Fe {
        if self.e == 1 {
            let mut out = [0u16; MAX_DEGREE];
            out[0] = ((a.0[0] as u32 * b.0[0] as u32) % self.p) as u16;
            return Fe(out);
        }
        let e = self.e;
        let p = self.p as u64;
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..e {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..e {
                prod[i + j] += a.0[i] as u64 * b.0[j] as u64;
            }
        }
        // reduce modulo the monic modulus, highest degree first
        for k in (e..2 * e - 1).rev() {
            let c = prod[k] % p;
            if c == 0 {
                continue;
            }
            for i in 0..e {
                let m = self.modulus[i] as u64;
                if m != 0 {
                    prod[k - e + i] += (p - c) * m;
                }
            }
        }
        let mut out = [0u16; MAX_DEGREE];
        for i in 0..e {
            out[i] = self.red(prod[i]);
        }
        Fe(out)
    }

    fn inv(&self, a: &Fe) -> Option<Fe> {
        if self.is_zero(a) {
            return None;
        }
        if self.e == 1 {
            // extended Euclid on integers
            let (mut r0, mut r1) = (self.p as i64, a.0[0] as i64);
            let (mut s0, mut s1) = (0i64, 1i64);
            while r1 != 0 {
                let qt = r0 / r1;
                (r0, r1) = (r1, r0 - qt * r1);
                (s0, s1) = (s1, s0 - qt * s1);
            }
            return Some(self.from_int(s0));
        }
        Some(self.pow(a, self.q() - 2))
    }

    fn from_int(&self, n: i64) -> Fe {
        let mut out = [0u16; MAX_DEGREE];
        out[0] = n.rem_euclid(self.p as i64) as u16;
        Fe(out)
    }

    fn characteristic(&self) -> u64 {
        self.p as u64
    }

    fn order(&self) -> BigUint {
        BigUint::from(self.p).pow(self.e as u32)
    }

    fn order_u128(&self) -> Option<u128> {
        Some(self.q())
    }

    fn nth_element(&self, mut index: u128) -> Fe {
        let mut out = [0u16; MAX_DEGREE];
        for i in (0..self.e).rev() {
            out[i] = (index % self.p as u128) as u16;
            index /= self.p as u128;
        }
        Fe(out)
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        let mut out = [0u16; MAX_DEGREE];
        for c in out.iter_mut().take(self.e) {
            *c = rng.gen_range(0..self.p) as u16;
        }
        Fe(out)
    }

    fn frobenius(&self, a: &Fe) -> Fe {
        if self.e == 1 {
            return *a;
        }
        self.pow(a, self.p as u128)
    }
}

/// Simple extension `K = F[x]/f` of a field `F` by a monic irreducible `f`.
///
/// Elements are coefficient vectors of length `deg f`, constant term first.
#[derive(Clone, Debug)]
pub struct ExtField<F: Field> {
    base: F,
    modulus: Vec<F::Elem>,
    d: usize,
}

impl<F: Field> ExtField<F> {
    /// Caller guarantees that `modulus` is monic irreducible of degree >= 1.
    pub fn new(base: F, modulus: &crate::algebra::Poly<F::Elem>) -> Self {
        let d = modulus.degree().expect("nonzero modulus");
        assert!(d >= 1, "modulus must have positive degree");
        ExtField { base, modulus: modulus.coeffs().to_vec(), d }
    }

    pub fn base(&self) -> &F {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn modulus(&self) -> crate::algebra::Poly<F::Elem> {
        crate::algebra::Poly::new(self.modulus.clone())
    }

    /// Embed a base-field element.
    pub fn embed(&self, a: &F::Elem) -> Vec<F::Elem> {
        let mut v = vec![self.base.zero(); self.d];
        v[0] = a.clone();
        v
    }

    /// The class of `x`.
    pub fn gen(&self) -> Vec<F::Elem> {
        let mut v = vec![self.base.zero(); self.d];
        if self.d == 1 {
            v[0] = self.base.neg(&self.modulus[0]);
        } else {
            v[1] = self.base.one();
        }
        v
    }

    /// Element from a polynomial over the base field, reduced modulo the modulus.
    pub fn from_poly(&self, p: &crate::algebra::Poly<F::Elem>) -> Vec<F::Elem> {
        let r = p.rem(&self.base, &self.modulus());
        let mut v = r.coeffs().to_vec();
        v.resize(self.d, self.base.zero());
        v
    }

    pub fn to_poly(&self, a: &[F::Elem]) -> crate::algebra::Poly<F::Elem> {
        crate::algebra::Poly::from_coeffs(&self.base, a.to_vec())
    }

    /// Whether `a` lies in the base field.
    pub fn is_base(&self, a: &[F::Elem]) -> bool {
        a[1..].iter().all(|c| self.base.is_zero(c))
    }

    /// Matrix (over the base) of multiplication by `a` in the power basis; column j is `a * x^j`.
    pub fn mul_matrix(&self, a: &[F::Elem]) -> crate::algebra::Matrix<F::Elem> {
        let mut m = crate::algebra::Matrix::zeros(&self.base, self.d, self.d);
        let x = self.gen();
        let mut col = a.to_vec();
        for j in 0..self.d {
            for i in 0..self.d {
                m.set(i, j, col[i].clone());
            }
            col = self.mul(&col, &x);
        }
        m
    }

    /// Relative norm to the base field.
    pub fn norm(&self, a: &[F::Elem]) -> F::Elem {
        self.mul_matrix(a).det(&self.base)
    }

    /// Relative trace to the base field.
    pub fn trace(&self, a: &[F::Elem]) -> F::Elem {
        let m = self.mul_matrix(a);
        let mut t = self.base.zero();
        for i in 0..self.d {
            t = self.base.add(&t, m.get(i, i));
        }
        t
    }
}

impl<F: Field> Field for ExtField<F> {
    type Elem = Vec<F::Elem>;

    fn zero(&self) -> Self::Elem {
        vec![self.base.zero(); self.d]
    }

    fn one(&self) -> Self::Elem {
        self.embed(&self.base.one())
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| self.base.neg(x)).collect()
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let k = &self.base;
        let d = self.d;
        let mut prod = vec![k.zero(); 2 * d - 1];
        for i in 0..d {
            if k.is_zero(&a[i]) {
                continue;
            }
            for j in 0..d {
                let t = k.mul(&a[i], &b[j]);
                prod[i + j] = k.add(&prod[i + j], &t);
            }
        }
        for deg in (d..2 * d - 1).rev() {
            let c = prod[deg].clone();
            if k.is_zero(&c) {
                continue;
            }
            for i in 0..d {
                let t = k.mul(&c, &self.modulus[i]);
                prod[deg - d + i] = k.sub(&prod[deg - d + i], &t);
            }
        }
        prod.truncate(d);
        prod
    }

    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if self.is_zero(a) {
            return None;
        }
        let k = &self.base;
        let (g, s, _) = self.to_poly(a).xgcd(k, &self.modulus());
        // g is a nonzero constant since the modulus is irreducible
        let c = k.inv(&g.coeffs()[0])?;
        Some(self.from_poly(&s.scale(k, &c)))
    }

    fn from_int(&self, n: i64) -> Self::Elem {
        self.embed(&self.base.from_int(n))
    }

    fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }

    fn order(&self) -> BigUint {
        self.base.order().pow(self.d as u32)
    }

    fn nth_element(&self, mut index: u128) -> Self::Elem {
        let q = self.base.order_u128().unwrap_or(u128::MAX);
        let mut v = vec![self.base.zero(); self.d];
        for i in (0..self.d).rev() {
            v[i] = self.base.nth_element(index % q);
            index /= q;
        }
        v
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        (0..self.d).map(|_| self.base.random(rng)).collect()
    }

    fn is_square(&self, a: &Self::Elem) -> bool {
        if self.is_zero(a) || self.characteristic() == 2 {
            return true;
        }
        // an element is a square iff its norm is a square in the base
        self.base.is_square(&self.norm(a))
    }

    fn order_u128(&self) -> Option<u128> {
        let q = self.base.order_u128()?;
        q.checked_pow(self.d as u32)
    }
}

/// Number of elements as a `usize` if small enough to enumerate.
pub fn small_order<F: Field>(f: &F, limit: u128) -> Option<u128> {
    f.order_u128().filter(|&q| q <= limit)
}
