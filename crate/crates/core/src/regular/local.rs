use crate::algebra::{
    dot, field_nonsquare, field_sqrt, local_sqrt, ExtField, Fe, Field, Fq, LocalElem, LocalRing, Matrix, Poly,
};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::pencil::Pencil;

use super::blocks::{weighted_functional, Character};

/// Module structure of a local pencil over `R = K[pi]/pi^ell`, `K = k[x]/f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalStructure {
    pub f: Poly<Fe>,
    pub ell: usize,
    /// Action of the root `z` of `f` in `k[c]`.
    pub zeta: Mat,
    /// Action of `pi = c - z`, nilpotent of index `ell`.
    pub pi: Mat,
    /// Cyclic summands as `(length, count)`, longest first.
    pub layers: Vec<(usize, usize)>,
}

impl LocalStructure {
    pub fn residue_field(&self, field: &Fq) -> ExtField<Fq> {
        ExtField::new(field.clone(), &self.f)
    }

    fn degree(&self) -> usize {
        self.f.degree().unwrap_or(1)
    }

    /// Columns `z^i pi^j g` for `j < m`, `i < deg f`, with `j` outer.
    pub(crate) fn orbit(&self, field: &Fq, g: &[Fe], m: usize) -> Mat {
        let d = self.degree();
        let mut cols = Vec::with_capacity(d * m);
        let mut pj = g.to_vec();
        for _ in 0..m {
            let mut v = pj.clone();
            for _ in 0..d {
                let next = self.zeta.mul_vec(field, &v);
                cols.push(v);
                v = next;
            }
            pj = self.pi.mul_vec(field, &pj);
        }
        linalg::from_cols(field, &cols, g.len())
    }

    /// `r * g` for `r` in `R_m`, given as `m` coefficients in `K`.
    pub(crate) fn act(&self, field: &Fq, r: &[Vec<Fe>], g: &[Fe]) -> Vec<Fe> {
        let flat: Vec<Fe> = r.iter().flat_map(|c| c.iter().copied()).collect();
        self.orbit(field, g, r.len()).mul_vec(field, &flat)
    }
}

/// `c = -B_inf^(-1) B_0`.
pub fn char_endomorphism(p: &Pencil) -> Result<Mat> {
    let f = p.field();
    let inv = p.b_inf().inverse(f).ok_or(Error::Singular)?;
    Ok(inv.mul(f, p.b_0()).neg(f))
}

/// Root of `f` in `k[c]` by Newton iteration on matrices, the nilpotent part
/// and the cyclic decomposition of the module.
pub fn local_structure(block: &Pencil, f: &Poly<Fe>) -> Result<LocalStructure> {
    let k = block.field();
    let c = char_endomorphism(block)?;
    let n = block.dim();
    let d = f.degree().filter(|&d| d >= 1).ok_or_else(|| Error::InvalidPolynomial("place of degree zero".into()))?;
    if n % d != 0 {
        return Err(Error::DimensionMismatch("block dimension is not a multiple of deg f".into()));
    }
    let m = n / d;
    let df = f.derivative(k);
    let mut x = c.clone();
    let mut steps = 0;
    let limit = usize::BITS - m.leading_zeros() + 1;
    loop {
        let fx = x.eval_poly(k, f);
        if fx.is_zero(k) {
            break;
        }
        if steps as u32 >= limit {
            return Err(Error::HenselFailed);
        }
        let dinv = x.eval_poly(k, &df).inverse(k).ok_or(Error::HenselFailed)?;
        x = x.sub(k, &fx.mul(k, &dinv));
        steps += 1;
    }
    let pi = c.sub(k, &x);
    let mut ranks = vec![n];
    let mut pw = Matrix::identity(k, n);
    while ranks.last() != Some(&0) {
        if ranks.len() > m {
            return Err(Error::Internal("pi is not nilpotent on the block".into()));
        }
        pw = pi.mul(k, &pw);
        ranks.push(pw.rank(k));
    }
    let ell = ranks.len() - 1;
    // summands of length >= j are (rank pi^(j-1) - rank pi^j) / d
    let ge: Vec<usize> = (0..=ell + 1)
        .map(|j| if j == 0 || j > ell { 0 } else { (ranks[j - 1] - ranks[j]) / d })
        .collect();
    let layers = (1..=ell)
        .rev()
        .map(|len| (len, ge[len] - ge[len + 1]))
        .filter(|&(_, cnt)| cnt > 0)
        .collect();
    Ok(LocalStructure { f: f.clone(), ell, zeta: x, pi, layers })
}

/// Coefficients `a_0..a_(m-1)` in `K` of the `R_m`-valued form `beta(x, y)`
/// characterized by `b(z^i pi^(m-1-j) x, y) = psi(z^i a_j)`, where the Hankel
/// matrix `hankel[i][s] = psi(z^(i+s))` encodes the functional `psi` on `K`.
fn descend_pair(k: &Fq, st: &LocalStructure, gram: &Mat, hankel_inv: &Mat, m: usize, x: &[Fe], y: &[Fe]) -> Vec<Vec<Fe>> {
    let d = st.degree();
    let orbit = st.orbit(k, x, m);
    let by = gram.mul_vec(k, y);
    let r = orbit.transpose().mul_vec(k, &by);
    (0..m)
        .map(|j| {
            let jj = m - 1 - j;
            hankel_inv.mul_vec(k, &r[jj * d..(jj + 1) * d])
        })
        .collect()
}

fn hankel(k: &Fq, values: &[Fe], d: usize) -> Mat {
    let mut h = Matrix::zeros(k, d, d);
    for i in 0..d {
        for s in 0..d {
            h.set(i, s, values[i + s]);
        }
    }
    h
}

/// Matrix over `R_ell` of the unique `b_R` with `b_inf = Tr_(K/k) o tau o b_R`,
/// evaluated on the given generators.
pub fn descend_bilinear(block: &Pencil, st: &LocalStructure, gens: &[Vec<Fe>]) -> Result<Vec<Vec<LocalElem<ExtField<Fq>>>>> {
    let k = block.field();
    let kf = st.residue_field(k);
    let d = st.degree();
    let z = kf.gen();
    let mut traces = Vec::with_capacity(2 * d - 1);
    let mut zp = kf.one();
    for _ in 0..2 * d - 1 {
        traces.push(kf.trace(&zp));
        zp = kf.mul(&zp, &z);
    }
    let hinv = hankel(k, &traces, d)
        .inverse(k)
        .ok_or_else(|| Error::Internal("trace form of a separable extension is degenerate".into()))?;
    Ok(gens
        .iter()
        .map(|x| gens.iter().map(|y| descend_pair(k, st, block.b_inf(), &hinv, st.ell, x, y)).collect())
        .collect())
}

/// A free `R_ell`-layer: generators and the Gram matrix of the descended form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeLayer {
    pub ell: usize,
    pub gens: Vec<Vec<Fe>>,
    pub gram: Vec<Vec<LocalElem<ExtField<Fq>>>>,
}

/// Orthogonal decomposition of the module into free layers on which the
/// descended form is regular. `gram` is the `k`-bilinear form commuting with
/// `zeta` and `pi`; the descent uses `phi(a) = Tr(a / f'(z))`.
pub fn split_free_layers(k: &Fq, gram: &Mat, st: &LocalStructure) -> Result<Vec<FreeLayer>> {
    let n = gram.rows();
    if gram.inverse(k).is_none() {
        return Err(Error::NotRegular);
    }
    if !gram.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if !gram.mul(k, &st.pi).is_symmetric() || !gram.mul(k, &st.zeta).is_symmetric() {
        return Err(Error::Internal("form does not commute with the local algebra".into()));
    }
    let d = st.degree();
    let w = weighted_functional(k, &st.f, &ExtField::new(k.clone(), &st.f).one(), 2 * d - 1);
    let hinv = hankel(k, &w, d).inverse(k).ok_or_else(|| Error::Internal("singular trace-form matrix".into()))?;
    let zero = |v: &[Fe]| v.iter().all(|x| k.is_zero(x));

    let mut module = Matrix::identity(k, n);
    let mut found: Vec<(usize, Vec<Fe>, Vec<Vec<Fe>>)> = Vec::new();
    while module.cols() > 0 {
        // m = nilpotency index of pi on the current module
        let mut powers = vec![module.clone()];
        while !powers.last().unwrap().is_zero(k) {
            let next = st.pi.mul(k, powers.last().unwrap());
            powers.push(next);
        }
        let m = powers.len() - 1;
        let top = &powers[m - 1];
        let xi = (0..module.cols()).find(|&j| !zero(&top.col(j))).unwrap();
        let x = module.col(xi);
        let w = gram.mul_vec(k, &top.col(xi));
        let y = (0..module.cols())
            .map(|j| module.col(j))
            .find(|y| !k.is_zero(&dot(k, &w, y)))
            .ok_or(Error::NotRegular)?;
        let sum = linalg::vec_add(k, &x, &y);
        let mut chosen = None;
        for g in [x, y, sum] {
            let beta = descend_pair(k, st, gram, &hinv, m, &g, &g);
            if !zero(&beta[0]) {
                chosen = Some((g, beta));
                break;
            }
        }
        let (g, beta) = chosen.ok_or(Error::NotRegular)?;
        let orbit = st.orbit(k, &g, m);
        let coupling = orbit.transpose().mul(k, gram).mul(k, &module);
        let rest = module.mul(k, &coupling.kernel(k));
        if rest.cols() + d * m != module.cols() {
            return Err(Error::NotRegular);
        }
        module = rest;
        found.push((m, g, beta));
    }
    let kf = ExtField::new(k.clone(), &st.f);
    let mut groups: Vec<(usize, Vec<Vec<Fe>>, Vec<Vec<Vec<Fe>>>)> = Vec::new();
    for (m, g, beta) in found {
        match groups.last_mut() {
            Some(last) if last.0 == m => {
                last.1.push(g);
                last.2.push(beta);
            }
            _ => groups.push((m, vec![g], vec![beta])),
        }
    }
    // the summands are orthogonal, so each layer Gram is diagonal
    let layers = groups
        .into_iter()
        .map(|(ell, gens, diag)| {
            let zero = vec![kf.zero(); ell];
            let r = gens.len();
            let gram = (0..r)
                .map(|i| (0..r).map(|j| if i == j { diag[i].clone() } else { zero.clone() }).collect())
                .collect();
            FreeLayer { ell, gens, gram }
        })
        .collect();
    Ok(layers)
}

type RVec<F> = Vec<LocalElem<F>>;

fn rform<F: Field>(ring: &LocalRing<F>, b: &[Vec<LocalElem<F>>], x: &[LocalElem<F>], y: &[LocalElem<F>]) -> LocalElem<F> {
    let mut acc = ring.zero();
    for (i, xi) in x.iter().enumerate() {
        if ring.is_zero(xi) {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            acc = ring.add(&acc, &ring.mul(&ring.mul(xi, &b[i][j]), yj));
        }
    }
    acc
}

fn rcomb<F: Field>(ring: &LocalRing<F>, a: &LocalElem<F>, x: &[LocalElem<F>], c: &LocalElem<F>, y: &[LocalElem<F>]) -> RVec<F> {
    x.iter().zip(y).map(|(xi, yi)| ring.add(&ring.mul(a, xi), &ring.mul(c, yi))).collect()
}

/// Solve `u^2 + v^2 = delta` in the residue field.
fn sum_of_two_squares<F: Field>(k: &F, delta: &F::Elem) -> Result<(F::Elem, F::Elem)> {
    let q = k.order_u128().ok_or(Error::FieldTooLarge)?;
    for i in 0..q {
        let u = k.nth_element(i);
        let rest = k.sub(delta, &k.square(&u));
        if let Some(v) = field_sqrt(k, &rest)? {
            return Ok((u, v));
        }
    }
    Err(Error::Internal("no representation as a sum of two squares".into()))
}

/// Congruence `T` over `R_m` with `T^T b T = diag(1, ..., 1, u)`, `u` in `{1, Delta}`.
/// Columns of `T` are the new basis vectors.
pub fn diagonalize_unit<F: Field>(ring: &LocalRing<F>, b: &[Vec<LocalElem<F>>]) -> Result<(Vec<Vec<LocalElem<F>>>, Character)> {
    let k = ring.base();
    if k.characteristic() == 2 {
        return Err(Error::EvenCharacteristic);
    }
    let r = b.len();
    for i in 0..r {
        for j in 0..r {
            if b[i][j] != b[j][i] {
                return Err(Error::NotSymmetric);
            }
        }
    }
    let unit_vec = |i: usize| -> RVec<F> { (0..r).map(|j| if i == j { ring.one() } else { ring.zero() }).collect() };
    let mut remaining: Vec<RVec<F>> = (0..r).map(unit_vec).collect();
    let mut diag: Vec<(RVec<F>, LocalElem<F>)> = Vec::new();
    while !remaining.is_empty() {
        let pivot = match (0..remaining.len()).find(|&i| ring.is_unit(&rform(ring, b, &remaining[i], &remaining[i]))) {
            Some(i) => i,
            None => {
                // b(x + y, x + y) = 2 b(x, y) + non-units
                let (i, j) = (0..remaining.len())
                    .flat_map(|i| (i + 1..remaining.len()).map(move |j| (i, j)))
                    .find(|&(i, j)| ring.is_unit(&rform(ring, b, &remaining[i], &remaining[j])))
                    .ok_or(Error::NotRegular)?;
                let s = rcomb(ring, &ring.one(), &remaining[i], &ring.one(), &remaining[j]);
                remaining[i] = s;
                i
            }
        };
        let g = remaining.remove(pivot);
        let w = rform(ring, b, &g, &g);
        let winv = ring.inv(&w).ok_or(Error::NotRegular)?;
        for v in remaining.iter_mut() {
            let coef = ring.neg(&ring.mul(&rform(ring, b, &g, v), &winv));
            *v = rcomb(ring, &ring.one(), v, &coef, &g);
        }
        diag.push((g, w));
    }
    let delta = field_nonsquare(k)?;
    let delta_r = ring.constant(&delta);
    let mut ones = Vec::new();
    let mut deltas = Vec::new();
    for (g, w) in diag {
        let (target, list) = if k.is_square(&w[0]) {
            (w.clone(), &mut ones)
        } else {
            (ring.mul(&w, &ring.inv(&delta_r).unwrap()), &mut deltas)
        };
        let s = local_sqrt(ring, &target)?.ok_or_else(|| Error::Internal("square class misdetected".into()))?;
        let sinv = ring.inv(&s).ok_or(Error::HenselFailed)?;
        list.push(g.iter().map(|x| ring.mul(x, &sinv)).collect::<RVec<F>>());
    }
    if deltas.len() >= 2 {
        let (u, v) = sum_of_two_squares(k, &delta)?;
        let dinv = ring.constant(&k.inv(&delta).unwrap());
        let (u, v) = (ring.mul(&ring.constant(&u), &dinv), ring.mul(&ring.constant(&v), &dinv));
        while deltas.len() >= 2 {
            let g2 = deltas.pop().unwrap();
            let g1 = deltas.pop().unwrap();
            ones.push(rcomb(ring, &u, &g1, &v, &g2));
            ones.push(rcomb(ring, &ring.neg(&v), &g1, &u, &g2));
        }
    }
    let character = if deltas.is_empty() { Character::One } else { Character::Delta };
    ones.extend(deltas);
    // columns -> matrix rows
    let t = (0..r).map(|i| ones.iter().map(|col| col[i].clone()).collect()).collect();
    Ok((t, character))
}
