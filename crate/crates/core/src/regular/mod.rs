//! Canonical forms of pencils: infinite and primary splitting of the regular
//! part, descent to local algebras, diagonalization and block assembly.

mod blocks;
mod local;

pub use blocks::{local_block, CanonicalDescriptor, Character, LocalBlockDesc, Place};
pub use local::{
    char_endomorphism, descend_bilinear, diagonalize_unit, local_structure, split_free_layers, FreeLayer, LocalStructure,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{factor, Fe, Field, LocalRing, Matrix, Poly};
use crate::error::{Error, Result};
use crate::kronecker::kronecker_decompose;
use crate::linalg::{self, Mat};
use crate::pencil::{apply_congruence, Congruence, Pencil};

const KRYLOV_SEED: u64 = 0x6b72_796c;

/// `W`, reached from `Ker B_inf` by the chain relation, and its
/// `B_0`-orthogonal `W'`. `B_0` is regular on `W`, `B_inf` on `W'`.
pub fn infinite_split(p: &Pencil) -> Result<(Mat, Mat)> {
    let f = p.field();
    let n = p.dim();
    let mut w = linalg::col_basis(f, &p.b_inf().kernel(f));
    loop {
        let next = linalg::preimage_step(f, p.b_inf(), p.b_0(), &w);
        if next.cols() == w.cols() {
            break;
        }
        w = next;
    }
    let wp = w.transpose().mul(f, p.b_0()).kernel(f);
    if w.cols() + wp.cols() != n || w.hstack(&wp).rank(f) != n {
        return Err(Error::SingularPencil);
    }
    if p.b_0().congruence(f, &w).inverse(f).is_none() || p.b_inf().congruence(f, &wp).inverse(f).is_none() {
        return Err(Error::SingularPencil);
    }
    Ok((w, wp))
}

/// Primary decomposition for `B_inf` invertible: one summand `Ker f(c)^m` per
/// irreducible factor of the characteristic polynomial of `c`, in factor order.
pub fn primary_split(p: &Pencil) -> Result<Vec<(Poly<Fe>, Mat)>> {
    let f = p.field();
    let n = p.dim();
    let c = char_endomorphism(p)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let chi = c.charpoly(f);
    let factors = factor(f, &chi)?;
    if factors.len() == 1 {
        return Ok(vec![(factors[0].0.clone(), Matrix::identity(f, n))]);
    }
    // a cyclic vector turns c into the companion matrix of chi
    let mut rng = ChaCha8Rng::seed_from_u64(KRYLOV_SEED);
    let mut v: Vec<Fe> = (0..n).map(|_| f.random(&mut rng)).collect();
    let mut cols = Vec::with_capacity(n);
    for _ in 0..n {
        let next = c.mul_vec(f, &v);
        cols.push(v);
        v = next;
    }
    let krylov = linalg::from_cols(f, &cols, n);
    let cyclic = krylov.rank(f) == n;
    let mut out = Vec::with_capacity(factors.len());
    for (g, m) in factors {
        let gm = g.pow(f, m as u64);
        let basis = if cyclic {
            let (cof, _) = chi.divrem(f, &gm);
            let dm = gm.degree().unwrap();
            let coef: Vec<Vec<Fe>> = (0..dm)
                .map(|s| {
                    let mut col = cof.shift(f, s).coeffs().to_vec();
                    col.resize(n, f.zero());
                    col
                })
                .collect();
            krylov.mul(f, &linalg::from_cols(f, &coef, n))
        } else {
            linalg::col_basis(f, &c.eval_poly(f, &gm).kernel(f))
        };
        out.push((g, basis));
    }
    Ok(out)
}

/// Canonical basis of a local pencil at the place `f`: the layers found, and
/// columns in block coordinates ordered as the canonical blocks.
fn canonicalize_local(block: &Pencil, f: &Poly<Fe>) -> Result<Vec<(usize, usize, Character, Mat)>> {
    let k = block.field();
    let st = local_structure(block, f)?;
    let kf = st.residue_field(k);
    let layers = split_free_layers(k, block.b_inf(), &st)?;
    let mut out = Vec::new();
    for layer in layers.into_iter().rev() {
        let ring = LocalRing::new(kf.clone(), layer.ell);
        let (t, ch) = diagonalize_unit(&ring, &layer.gram)?;
        let r = layer.gens.len();
        let mut cols = Matrix::zeros(k, block.dim(), 0);
        for s in 0..r {
            let mut g = vec![k.zero(); block.dim()];
            for (tt, gen) in layer.gens.iter().enumerate() {
                g = linalg::vec_add(k, &g, &st.act(k, &t[tt][s], gen));
            }
            cols = cols.hstack(&st.orbit(k, &g, layer.ell));
        }
        out.push((layer.ell, r, ch, cols));
    }
    Ok(out)
}

/// Canonical layers and basis of a regular pencil.
fn canonicalize_regular(p: &Pencil) -> Result<(Vec<LocalBlockDesc>, Mat)> {
    let f = p.field();
    let n = p.dim();
    let mut pieces: Vec<(Place, Vec<(usize, usize, Character, Mat)>)> = Vec::new();
    if n == 0 {
        return Ok((Vec::new(), Matrix::zeros(f, 0, 0)));
    }
    let (w, wp) = infinite_split(p)?;
    if w.cols() > 0 {
        let swapped = p.restrict(&w).swap();
        let layers = canonicalize_local(&swapped, &Poly::x(f))?;
        pieces.push((Place::Infinity, layers.into_iter().map(|(l, r, c, m)| (l, r, c, w.mul(f, &m))).collect()));
    }
    if wp.cols() > 0 {
        let fin = p.restrict(&wp);
        for (g, q) in primary_split(&fin)? {
            let layers = canonicalize_local(&fin.restrict(&q), &g)?;
            let base = wp.mul(f, &q);
            pieces.push((Place::Finite(g), layers.into_iter().map(|(l, r, c, m)| (l, r, c, base.mul(f, &m))).collect()));
        }
    }
    pieces.sort_by(|a, b| a.0.cmp(&b.0));
    let mut descs = Vec::new();
    let mut basis = Matrix::zeros(f, n, 0);
    for (place, layers) in pieces {
        for (ell, mult, character, cols) in layers {
            descs.push(LocalBlockDesc { place: place.clone(), ell, mult, character });
            basis = basis.hstack(&cols);
        }
    }
    Ok((descs, basis))
}

/// Full canonical form: Kronecker blocks, then local blocks.
pub fn canonicalize(p: &Pencil) -> Result<CanonicalDescriptor> {
    let f = p.field();
    if f.characteristic() == 2 {
        return Err(Error::EvenCharacteristic);
    }
    let kron = kronecker_decompose(p)?;
    let (blocks, s_reg) = canonicalize_regular(&kron.regular_part)?;
    let singular: usize = kron.indices.iter().map(|h| 2 * h + 1).sum();
    let lift = Matrix::block_diag(f, &[Matrix::identity(f, singular), s_reg]);
    let t = kron.transform.matrix().mul(f, &lift);
    let desc = CanonicalDescriptor {
        kronecker: kron.indices,
        blocks,
        transform: Congruence::new(f, t).map_err(|_| Error::Internal("canonical basis is singular".into()))?,
    };
    if apply_congruence(p, &desc.transform)? != desc.canonical_pencil(f)? {
        return Err(Error::Internal("transform does not reach the canonical pencil".into()));
    }
    Ok(desc)
}

/// A congruence `S` with `S^T A S = B`, or `None` when the canonical forms differ.
pub fn ip1s_solve(a: &Pencil, b: &Pencil) -> Result<Option<Congruence>> {
    if a.field() != b.field() {
        return Err(Error::IncompatibleFields);
    }
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch("pencils of different sizes".into()));
    }
    let f = a.field();
    let da = canonicalize(a)?;
    let db = canonicalize(b)?;
    if !da.same_form(&db) {
        return Ok(None);
    }
    let s = da.transform.then(f, &db.transform.inverse(f));
    Ok(Some(s))
}
