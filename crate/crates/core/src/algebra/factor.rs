use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::Field;
use super::poly::Poly;
use crate::error::{Error, Result};

/// Seed used when a caller does not supply its own generator. Factorization
/// results are sorted and unique, so the seed only influences running time.
pub const DEFAULT_FACTOR_SEED: u64 = 0x5eed_f00d;

/// Sort key: degree first, then coefficients constant term first.
fn sort_key<E: Ord + Clone>(p: &Poly<E>) -> (usize, Vec<E>) {
    (p.degree().unwrap_or(0), p.coeffs().to_vec())
}

fn one<F: Field>(f: &F) -> Poly<F::Elem> {
    Poly::constant(f, f.one())
}

fn pth_root<F: Field>(f: &F, a: &Poly<F::Elem>) -> Poly<F::Elem> {
    let p = f.characteristic() as usize;
    let e = f.order() / BigUint::from(p as u64);
    let v = a.coeffs().iter().step_by(p).map(|c| f.pow_big(c, &e)).collect();
    Poly::from_coeffs(f, v)
}

/// Squarefree decomposition of a monic polynomial: pairs `(g, m)` with
/// `f = prod g^m` and every `g` squarefree.
pub fn squarefree<F: Field>(f: &F, a: &Poly<F::Elem>) -> Vec<(Poly<F::Elem>, usize)> {
    let mut out = Vec::new();
    if a.degree().unwrap_or(0) == 0 {
        return out;
    }
    let p = f.characteristic() as usize;
    let d = a.derivative(f);
    if d.is_zero() {
        for (g, m) in squarefree(f, &pth_root(f, a)) {
            out.push((g, m * p));
        }
        return out;
    }
    let mut c = a.gcd(f, &d);
    let mut w = a.divrem(f, &c).0;
    let mut i = 1;
    while w.degree().unwrap_or(0) > 0 {
        let y = w.gcd(f, &c);
        let z = w.divrem(f, &y).0;
        if z.degree().unwrap_or(0) > 0 {
            out.push((z.monic(f), i));
        }
        i += 1;
        w = y;
        c = c.divrem(f, &w).0;
    }
    if c.degree().unwrap_or(0) > 0 {
        for (g, m) in squarefree(f, &pth_root(f, &c.monic(f))) {
            out.push((g, m * p));
        }
    }
    out
}

/// Distinct-degree factorization of a squarefree monic polynomial.
pub fn distinct_degree<F: Field>(f: &F, a: &Poly<F::Elem>) -> Vec<(Poly<F::Elem>, usize)> {
    let q = f.order();
    let x = Poly::x(f);
    let mut rest = a.clone();
    let mut h = x.rem(f, &rest);
    let mut out = Vec::new();
    let mut i = 1;
    while rest.degree().unwrap_or(0) >= 2 * i {
        h = h.pow_mod(f, &q, &rest);
        let g = rest.gcd(f, &h.sub(f, &x));
        if g.degree().unwrap_or(0) > 0 {
            rest = rest.divrem(f, &g).0;
            h = h.rem(f, &rest);
            out.push((g, i));
        }
        i += 1;
    }
    if let Some(d) = rest.degree() {
        if d > 0 {
            out.push((rest.monic(f), d));
        }
    }
    out
}

fn random_poly<F: Field, R: Rng + ?Sized>(f: &F, deg: usize, rng: &mut R) -> Poly<F::Elem> {
    Poly::from_coeffs(f, (0..deg).map(|_| f.random(rng)).collect())
}

/// Equal-degree splitting (Cantor-Zassenhaus) of a squarefree monic product
/// of irreducibles of degree `d`.
pub fn equal_degree<F: Field, R: Rng + ?Sized>(
    f: &F,
    a: &Poly<F::Elem>,
    d: usize,
    rng: &mut R,
) -> Vec<Poly<F::Elem>> {
    let n = a.degree().unwrap_or(0);
    if n == 0 {
        return Vec::new();
    }
    if n == d {
        return vec![a.clone()];
    }
    let q = f.order();
    let char2 = f.characteristic() == 2;
    loop {
        let r = random_poly(f, n, rng);
        if r.degree().unwrap_or(0) == 0 {
            continue;
        }
        let mut g = a.gcd(f, &r);
        if g.degree().unwrap_or(0) == 0 {
            let b = if char2 {
                // absolute trace r + r^2 + ... + r^(2^(k d - 1))
                let k = q.bits() as usize - 1;
                let mut t = r.rem(f, a);
                let mut acc = t.clone();
                for _ in 1..k * d {
                    t = t.mul_mod(f, &t, a);
                    acc = acc.add(f, &t);
                }
                acc
            } else {
                let e = (q.pow(d as u32) - BigUint::one()) >> 1;
                r.pow_mod(f, &e, a).sub(f, &one(f))
            };
            g = a.gcd(f, &b);
        }
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let h = a.divrem(f, &g).0.monic(f);
            let mut out = equal_degree(f, &g, d, rng);
            out.extend(equal_degree(f, &h, d, rng));
            return out;
        }
    }
}

/// Full factorization into monic irreducibles with multiplicities, sorted by
/// degree and then lexicographically by coefficients.
pub fn factor_with_rng<F: Field, R: Rng + ?Sized>(
    f: &F,
    a: &Poly<F::Elem>,
    rng: &mut R,
) -> Result<Vec<(Poly<F::Elem>, usize)>> {
    if a.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for (g, m) in squarefree(f, &a.monic(f)) {
        for (h, d) in distinct_degree(f, &g) {
            for irr in equal_degree(f, &h, d, rng) {
                out.push((irr, m));
            }
        }
    }
    out.sort_by_key(|(g, _)| sort_key(g));
    Ok(out)
}

/// Factorization with the crate's default seed.
pub fn factor<F: Field>(f: &F, a: &Poly<F::Elem>) -> Result<Vec<(Poly<F::Elem>, usize)>> {
    factor_with_rng(f, a, &mut ChaCha8Rng::seed_from_u64(DEFAULT_FACTOR_SEED))
}

/// Distinct roots in the field, sorted.
pub fn roots<F: Field>(f: &F, a: &Poly<F::Elem>) -> Vec<F::Elem> {
    if a.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let x = Poly::x(f);
    let m = a.monic(f);
    let xq = x.pow_mod(f, &f.order(), &m);
    let g = m.gcd(f, &xq.sub(f, &x));
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_FACTOR_SEED);
    let mut out: Vec<F::Elem> = equal_degree(f, &g, 1, &mut rng)
        .into_iter()
        .map(|l| f.neg(&l.coeffs()[0]))
        .collect();
    out.sort();
    out
}

/// Irreducibility test (Rabin-style: no factor of degree up to half).
pub fn is_irreducible<F: Field>(f: &F, a: &Poly<F::Elem>) -> bool {
    let n = match a.degree() {
        Some(n) if n >= 1 => n,
        _ => return false,
    };
    if n == 1 {
        return true;
    }
    let m = a.monic(f);
    if m.gcd(f, &m.derivative(f)).degree() != Some(0) {
        return false;
    }
    let q = f.order();
    let x = Poly::x(f);
    let mut h = x.rem(f, &m);
    for _ in 1..=n / 2 {
        h = h.pow_mod(f, &q, &m);
        if m.gcd(f, &h.sub(f, &x)).degree() != Some(0) {
            return false;
        }
    }
    true
}

/// Lexicographically first monic irreducible polynomial of degree `d`
/// (non-leading coefficients compared constant term first).
pub fn first_irreducible<F: Field>(f: &F, d: usize) -> Poly<F::Elem> {
    let q = f.order_u128().expect("field too large to enumerate");
    let mut idx: u128 = 0;
    loop {
        let mut coeffs = vec![f.zero(); d + 1];
        let mut i = idx;
        for c in coeffs[..d].iter_mut().rev() {
            *c = f.nth_element(i % q);
            i /= q;
        }
        coeffs[d] = f.one();
        let p = Poly::from_coeffs(f, coeffs);
        if is_irreducible(f, &p) {
            return p;
        }
        idx += 1;
    }
}
