use num_bigint::BigUint;
use num_traits::One;

use super::field::{Field, Fq};
use super::poly::Poly;
use crate::error::{Error, Result};

const EXHAUSTIVE_LIMIT: u128 = 64;

fn check_odd<F: Field>(f: &F) -> Result<()> {
    if f.characteristic() == 2 {
        Err(Error::EvenCharacteristic)
    } else {
        Ok(())
    }
}

/// Square root with the lexicographically smaller of the two roots, or
/// `None` for non-squares.
pub fn field_sqrt<F: Field>(f: &F, x: &F::Elem) -> Result<Option<F::Elem>> {
    check_odd(f)?;
    if f.is_zero(x) {
        return Ok(Some(f.zero()));
    }
    if let Some(q) = f.order_u128().filter(|&q| q <= EXHAUSTIVE_LIMIT) {
        for i in 1..q {
            let r = f.nth_element(i);
            if f.square(&r) == *x {
                // the first hit in lexicographic order is the smaller root
                return Ok(Some(r));
            }
        }
        return Ok(None);
    }
    if !f.is_square(x) {
        return Ok(None);
    }
    let r = tonelli_shanks(f, x)?;
    let nr = f.neg(&r);
    Ok(Some(if nr < r { nr } else { r }))
}

fn tonelli_shanks<F: Field>(f: &F, x: &F::Elem) -> Result<F::Elem> {
    let q1 = f.order() - BigUint::one();
    let s = q1.trailing_zeros().unwrap_or(0);
    let t = &q1 >> s;
    let z = field_nonsquare(f)?;
    let mut c = f.pow_big(&z, &t);
    let mut r = f.pow_big(x, &((&t + BigUint::one()) >> 1));
    let mut u = f.pow_big(x, &t);
    let mut m = s;
    while !f.is_one(&u) {
        let mut i = 0;
        let mut uu = u.clone();
        while !f.is_one(&uu) {
            uu = f.square(&uu);
            i += 1;
        }
        let mut b = c.clone();
        for _ in 0..m - i - 1 {
            b = f.square(&b);
        }
        r = f.mul(&r, &b);
        c = f.square(&b);
        u = f.mul(&u, &c);
        m = i;
    }
    Ok(r)
}

/// Lexicographically first non-square.
pub fn field_nonsquare<F: Field>(f: &F) -> Result<F::Elem> {
    check_odd(f)?;
    let mut i = 1u128;
    loop {
        let x = f.nth_element(i);
        if !f.is_square(&x) {
            return Ok(x);
        }
        i += 1;
    }
}

/// Trace and norm of `x` from `sup` down to its subfield `sub`.
///
/// When `sub` is a proper extension of the prime field it is embedded in
/// `sup` by the lexicographically first root of its modulus.
pub fn trace_norm(x: &<Fq as Field>::Elem, sub: &Fq, sup: &Fq) -> Result<(<Fq as Field>::Elem, <Fq as Field>::Elem)> {
    if sub.p() != sup.p() || sup.degree() % sub.degree() != 0 {
        return Err(Error::IncompatibleFields);
    }
    let r = sup.degree() / sub.degree();
    let qs = sub.q();
    let mut conj = *x;
    let mut tr = sup.zero();
    let mut nm = sup.one();
    for _ in 0..r {
        tr = sup.add(&tr, &conj);
        nm = sup.mul(&nm, &conj);
        conj = sup.pow(&conj, qs);
    }
    Ok((pull_back(sub, sup, &tr)?, pull_back(sub, sup, &nm)?))
}

/// Image of the generator of `sub` inside `sup`.
pub fn subfield_generator(sub: &Fq, sup: &Fq) -> Result<<Fq as Field>::Elem> {
    if sub.degree() == 1 {
        return Ok(sup.zero());
    }
    if sub == sup {
        return Ok(sup.gen());
    }
    let m = Poly::from_coeffs(sup, sub.modulus().iter().map(|&c| sup.from_int(c as i64)).collect());
    super::factor::roots(sup, &m).into_iter().next().ok_or(Error::IncompatibleFields)
}

/// Embed an element of `sub` into `sup`.
pub fn embed_subfield(sub: &Fq, sup: &Fq, a: &<Fq as Field>::Elem) -> Result<<Fq as Field>::Elem> {
    let g = subfield_generator(sub, sup)?;
    let mut acc = sup.zero();
    let mut pw = sup.one();
    for c in sub.coeffs(a) {
        acc = sup.add(&acc, &sup.mul(&pw, &sup.from_int(c as i64)));
        pw = sup.mul(&pw, &g);
    }
    Ok(acc)
}

fn pull_back(sub: &Fq, sup: &Fq, y: &<Fq as Field>::Elem) -> Result<<Fq as Field>::Elem> {
    if sub.degree() == 1 {
        if !sup.is_prime_subfield(y) {
            return Err(Error::IncompatibleFields);
        }
        return Ok(sub.from_int(y.coeff(0) as i64));
    }
    // solve sum c_i g^i = y over F_p
    let fp = Fq::prime(sup.p())?;
    let g = subfield_generator(sub, sup)?;
    let (a, b) = (sub.degree(), sup.degree());
    let mut cols = Vec::new();
    let mut pw = sup.one();
    for _ in 0..a {
        cols.push(sup.coeffs(&pw).iter().map(|&c| fp.from_int(c as i64)).collect::<Vec<_>>());
        pw = sup.mul(&pw, &g);
    }
    let m = super::Matrix::from_cols(&cols, b);
    let rhs: Vec<_> = sup.coeffs(y).iter().map(|&c| fp.from_int(c as i64)).collect();
    let sol = m.solve(&fp, &rhs).ok_or(Error::IncompatibleFields)?;
    sub.elem(&sol.iter().map(|c| c.coeff(0) as u64).collect::<Vec<_>>())
}
