use crate::algebra::{factor, roots, ExtField, Fe, Field, Fq, Poly};
use crate::error::{Error, Result};
use crate::pencil::{normalize_point, BinaryForm, Homography, Point};

/// Matrix `[a, b, c, d]` acting by `(lambda : mu) -> (a lambda + b mu : c lambda + d mu)`.
pub type Mobius<E> = [E; 4];

pub fn infinity<F: Field>(f: &F) -> Point<F::Elem> {
    Point { lambda: f.one(), mu: f.zero() }
}

pub fn affine_point<F: Field>(f: &F, a: F::Elem) -> Point<F::Elem> {
    Point { lambda: a, mu: f.one() }
}

fn bracket<F: Field>(f: &F, a: &Point<F::Elem>, b: &Point<F::Elem>) -> F::Elem {
    f.sub(&f.mul(&a.lambda, &b.mu), &f.mul(&a.mu, &b.lambda))
}

fn check_distinct<F: Field>(f: &F, x: &[Point<F::Elem>]) -> Result<()> {
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            if f.is_zero(&bracket(f, &x[i], &x[j])) {
                return Err(Error::RepeatedPoints);
            }
        }
    }
    Ok(())
}

/// `[13][24] / [14][23]` in homogeneous brackets; `(inf, 0, 1, b)` has ratio `b`.
pub fn cross_ratio<F: Field>(f: &F, x: &[Point<F::Elem>; 4]) -> Result<F::Elem> {
    check_distinct(f, x)?;
    let num = f.mul(&bracket(f, &x[0], &x[2]), &bracket(f, &x[1], &x[3]));
    let den = f.mul(&bracket(f, &x[0], &x[3]), &bracket(f, &x[1], &x[2]));
    Ok(f.div(&num, &den).expect("distinct points"))
}

/// `(b^2 - b + 1)^3 / (b^2 (b - 1)^2)`.
pub fn j_of_cross_ratio<F: Field>(f: &F, b: &F::Elem) -> Result<F::Elem> {
    let p = f.characteristic();
    if p == 2 || p == 3 {
        return Err(Error::UnsupportedCharacteristic(p));
    }
    let b1 = f.sub(b, &f.one());
    let den = f.mul(&f.square(b), &f.square(&b1));
    let s = f.add(&f.mul(b, &b1), &f.one());
    let num = f.mul(&f.square(&s), &s);
    f.div(&num, &den).ok_or(Error::RepeatedPoints)
}

/// j-invariant of four distinct points; independent of their order.
pub fn j_invariant<F: Field>(f: &F, x: &[Point<F::Elem>; 4]) -> Result<F::Elem> {
    j_of_cross_ratio(f, &cross_ratio(f, x)?)
}

pub fn mobius_apply<F: Field>(f: &F, g: &Mobius<F::Elem>, p: &Point<F::Elem>) -> Point<F::Elem> {
    let l = f.add(&f.mul(&g[0], &p.lambda), &f.mul(&g[1], &p.mu));
    let u = f.add(&f.mul(&g[2], &p.lambda), &f.mul(&g[3], &p.mu));
    normalize_point(f, l, u)
}

fn mobius_mul<F: Field>(f: &F, a: &Mobius<F::Elem>, b: &Mobius<F::Elem>) -> Mobius<F::Elem> {
    let mm = |x: &F::Elem, y: &F::Elem, z: &F::Elem, w: &F::Elem| f.add(&f.mul(x, y), &f.mul(z, w));
    [
        mm(&a[0], &b[0], &a[1], &b[2]),
        mm(&a[0], &b[1], &a[1], &b[3]),
        mm(&a[2], &b[0], &a[3], &b[2]),
        mm(&a[2], &b[1], &a[3], &b[3]),
    ]
}

/// Scale so the first nonzero entry is one.
pub fn mobius_normalize<F: Field>(f: &F, m: &Mobius<F::Elem>) -> Mobius<F::Elem> {
    let lead = m.iter().find(|x| !f.is_zero(x)).expect("nonzero matrix");
    let inv = f.inv(lead).unwrap();
    m.clone().map(|x| f.mul(&x, &inv))
}

/// The map sending `x` to `(inf, 0, 1)`.
fn to_standard<F: Field>(f: &F, x: &[Point<F::Elem>; 3]) -> Result<Mobius<F::Elem>> {
    check_distinct(f, x)?;
    let alpha = bracket(f, &x[2], &x[0]);
    let beta = bracket(f, &x[2], &x[1]);
    Ok([
        f.mul(&alpha, &x[1].mu),
        f.neg(&f.mul(&alpha, &x[1].lambda)),
        f.mul(&beta, &x[0].mu),
        f.neg(&f.mul(&beta, &x[0].lambda)),
    ])
}

/// The unique matrix class with `g(x_i) = y_i`, over any field.
pub fn mobius_from_triples<F: Field>(f: &F, x: &[Point<F::Elem>; 3], y: &[Point<F::Elem>; 3]) -> Result<Mobius<F::Elem>> {
    let mx = to_standard(f, x)?;
    let my = to_standard(f, y)?;
    let adj = [my[3].clone(), f.neg(&my[1]), f.neg(&my[2]), my[0].clone()];
    Ok(mobius_normalize(f, &mobius_mul(f, &adj, &mx)))
}

/// The homography of `P^1(k)` sending the triple `x` to `y`.
pub fn homography_from_triples(k: &Fq, x: &[Point<Fe>; 3], y: &[Point<Fe>; 3]) -> Result<Homography> {
    Homography::new(k, mobius_from_triples(k, x, y)?)
}

/// `P^1(k)`: the points `(a : 1)` in element order, then infinity.
pub fn rational_points(k: &Fq) -> Vec<Point<Fe>> {
    let q = k.order_u128().expect("finite field");
    let mut out: Vec<Point<Fe>> = (0..q).map(|i| affine_point(k, k.nth_element(i))).collect();
    out.push(infinity(k));
    out
}

pub(crate) fn embed_point(ext: &ExtField<Fq>, p: &Point<Fe>) -> Point<Vec<Fe>> {
    Point { lambda: ext.embed(&p.lambda), mu: ext.embed(&p.mu) }
}

/// Distinct zeros of a binary form in `P^1` over `ext`.
pub fn form_roots(ext: &ExtField<Fq>, u: &BinaryForm) -> Vec<Point<Vec<Fe>>> {
    let k = ext.base();
    let aff = u.affine(k);
    let lifted = Poly::from_coeffs(ext, aff.coeffs().iter().map(|c| ext.embed(c)).collect());
    let mut out: Vec<Point<Vec<Fe>>> = roots(ext, &lifted).into_iter().map(|r| affine_point(ext, r)).collect();
    if aff.degree().is_none_or(|d| d < u.degree()) {
        out.push(infinity(ext));
    }
    out
}

/// j-invariant of a squarefree binary quartic, from its roots in the splitting field.
pub fn quartic_j_invariant(k: &Fq, u: &BinaryForm) -> Result<Fe> {
    if u.degree() != 4 {
        return Err(Error::InvalidPolynomial("j-invariant needs a binary quartic".into()));
    }
    let p = k.characteristic();
    if p == 2 || p == 3 {
        return Err(Error::UnsupportedCharacteristic(p));
    }
    let aff = u.affine(k);
    if aff.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let lcm = factor(k, &aff)?.iter().fold(1usize, |acc, (g, _)| {
        let d = g.degree().unwrap();
        acc * d / gcd(acc, d)
    });
    let ext = ExtField::new(k.clone(), &crate::algebra::factor::first_irreducible(k, lcm));
    let pts = form_roots(&ext, u);
    let pts: [Point<Vec<Fe>>; 4] = pts.try_into().map_err(|_| Error::RepeatedPoints)?;
    let j = j_invariant(&ext, &pts)?;
    if !ext.is_base(&j) {
        return Err(Error::Internal("j-invariant of a rational quartic is not rational".into()));
    }
    Ok(j[0])
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
