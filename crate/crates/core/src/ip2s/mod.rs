//! Two-secret isomorphism: matching the factor signatures of characteristic
//! polynomials, enumerating compatible homographies, and solving IP2S.

mod projective;

pub use projective::{
    affine_point, cross_ratio, form_roots, homography_from_triples, infinity, j_invariant, j_of_cross_ratio,
    mobius_apply, mobius_from_triples, mobius_normalize, quartic_j_invariant, rational_points, Mobius,
};

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{factor, ExtField, Fe, Field, Fq, Poly};
use crate::error::{Error, Result};
use crate::kronecker::kronecker_decompose;
use crate::pencil::{char_poly, twist, verify_ip2s, BinaryForm, Congruence, Homography, Pencil, Point};
use crate::regular::canonicalize;
use projective::embed_point;

/// Largest candidate enumeration attempted before giving up.
pub const CANDIDATE_CAP: usize = 100_000;

/// Largest `|PGL_2(k)|` enumerated by [`bruteforce_homographies`].
pub const BRUTEFORCE_CAP: u128 = 1_000_000;

/// Irreducible factors of a binary form grouped by `(degree, exponent)`.
/// Places are monic in `lambda`, or `mu` for the point at infinity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FactorSignature {
    pub classes: BTreeMap<(usize, usize), Vec<BinaryForm>>,
}

impl FactorSignature {
    /// Class sizes, the part of the signature preserved by homographies.
    pub fn profile(&self) -> Vec<((usize, usize), usize)> {
        self.classes.iter().map(|(k, v)| (*k, v.len())).collect()
    }

    pub fn degree(&self) -> usize {
        self.classes.iter().map(|((d, e), v)| d * e * v.len()).sum()
    }
}

/// The form `mu`.
pub fn mu_place(k: &Fq) -> BinaryForm {
    BinaryForm::new(1, vec![k.one(), k.zero()])
}

pub fn form_signature(k: &Fq, u: &BinaryForm) -> Result<FactorSignature> {
    if u.is_zero(k) {
        return Err(Error::ZeroPolynomial);
    }
    let aff = u.affine(k);
    let mut sig = FactorSignature::default();
    let at_inf = u.degree() - aff.degree().unwrap();
    if at_inf > 0 {
        sig.classes.entry((1, at_inf)).or_default().push(mu_place(k));
    }
    if aff.degree().unwrap() > 0 {
        for (g, e) in factor(k, &aff)? {
            let d = g.degree().unwrap();
            sig.classes.entry((d, e)).or_default().push(BinaryForm::homogenize(k, &g, d));
        }
    }
    for v in sig.classes.values_mut() {
        v.sort();
    }
    Ok(sig)
}

/// Signature of `char_poly(p)`; the pencil must be regular.
pub fn factor_signature(p: &Pencil) -> Result<FactorSignature> {
    let c = char_poly(p);
    if c.is_zero(p.field()) {
        return Err(Error::SingularPencil);
    }
    form_signature(p.field(), &c)
}

fn proportional(k: &Fq, a: &BinaryForm, b: &BinaryForm) -> bool {
    a.degree() == b.degree() && a.normalized(k) == b.normalized(k)
}

fn product(k: &Fq, forms: &[BinaryForm]) -> BinaryForm {
    forms.iter().fold(BinaryForm::new(0, vec![k.one()]), |acc, u| acc.mul(k, u))
}

/// Homographies mapping the zeros of one class onto those of another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CandidateSet {
    Finite(BTreeSet<Homography>),
    /// Too few zeros to pin down a homography; checked only against other classes.
    Parametric { sources: Vec<BinaryForm>, targets: Vec<BinaryForm> },
}

/// Source points with the admissible image tuples. A homography over `k`
/// commutes with Frobenius, so conjugate roots travel together.
struct Atom {
    points: Vec<Point<Vec<Fe>>>,
    images: Vec<Vec<Point<Vec<Fe>>>>,
}

fn frobenius_orbit(ext: &ExtField<Fq>, p: &Point<Vec<Fe>>, len: usize) -> Vec<Point<Vec<Fe>>> {
    let q = ext.base().order_u128().expect("finite field");
    let mut out = vec![p.clone()];
    while out.len() < len {
        let last = out.last().unwrap();
        out.push(Point { lambda: ext.pow(&last.lambda, q), mu: ext.pow(&last.mu, q) });
    }
    out
}

/// Atoms for the places of one class: `len` leading Frobenius conjugates of a
/// root of each source, imaged onto conjugate runs of target roots.
fn class_atoms(ext: &ExtField<Fq>, sources: &[BinaryForm], targets: &[BinaryForm], len: usize) -> Vec<Atom> {
    let image_runs: Vec<Vec<Point<Vec<Fe>>>> =
        targets.iter().flat_map(|t| form_roots(ext, t)).map(|y| frobenius_orbit(ext, &y, len)).collect();
    sources
        .iter()
        .map(|s| {
            let x = form_roots(ext, s).into_iter().next().expect("place has a root in its residue field");
            Atom { points: frobenius_orbit(ext, &x, len), images: image_runs.clone() }
        })
        .collect()
}

fn residue_ext(k: &Fq, place: &BinaryForm) -> ExtField<Fq> {
    match place.affine(k).degree() {
        Some(d) if d >= 1 => ExtField::new(k.clone(), &place.affine(k)),
        _ => ExtField::new(k.clone(), &Poly::x(k)),
    }
}

/// Every homography determined by three source points of `atoms` and an image
/// choice per atom, padded with rational points when fewer than three source
/// points exist; keeps the rational ones passing `accept`.
fn enumerate<A: Fn(&Homography) -> bool>(k: &Fq, ext: &ExtField<Fq>, atoms: &[Atom], accept: A) -> Result<BTreeSet<Homography>> {
    let mut used = Vec::new();
    let mut npoints = 0;
    for a in atoms {
        if npoints >= 3 {
            break;
        }
        used.push(a);
        npoints += a.points.len();
    }
    let rational: Vec<Point<Vec<Fe>>> = rational_points(k).iter().map(|p| embed_point(ext, p)).collect();
    let src: Vec<&Point<Vec<Fe>>> = used.iter().flat_map(|a| a.points.iter()).collect();
    let aux: Vec<Point<Vec<Fe>>> =
        rational.iter().filter(|r| !src.contains(r)).take(3usize.saturating_sub(npoints)).cloned().collect();
    let mut count: u128 = 1;
    for a in &used {
        count = count.saturating_mul(a.images.len() as u128);
    }
    for _ in &aux {
        count = count.saturating_mul(rational.len() as u128);
    }
    if count > CANDIDATE_CAP as u128 {
        return Err(Error::ResourceExhausted(CANDIDATE_CAP));
    }
    let mut x: Vec<Point<Vec<Fe>>> = src.into_iter().cloned().collect();
    x.extend(aux.iter().cloned());
    x.truncate(3);
    let x: [Point<Vec<Fe>>; 3] = x.try_into().map_err(|_| Error::Internal("fewer than three points".into()))?;

    let mut radices: Vec<usize> = used.iter().map(|a| a.images.len()).collect();
    radices.extend(aux.iter().map(|_| rational.len()));
    let mut out = BTreeSet::new();
    let mut idx = vec![0usize; radices.len()];
    if radices.contains(&0) {
        return Ok(out);
    }
    loop {
        let mut y: Vec<Point<Vec<Fe>>> = Vec::with_capacity(3);
        for (i, a) in used.iter().enumerate() {
            y.extend(a.images[idx[i]].iter().cloned());
        }
        for i in used.len()..radices.len() {
            y.push(rational[idx[i]].clone());
        }
        y.truncate(3);
        let y: [Point<Vec<Fe>>; 3] = y.try_into().unwrap();
        if let Ok(m) = mobius_from_triples(ext, &x, &y) {
            if m.iter().all(|e| ext.is_base(e)) {
                let h = Homography::new(k, m.map(|e| e[0]))?;
                if accept(&h) {
                    out.insert(h);
                }
            }
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos == radices.len() {
                return Ok(out);
            }
            idx[pos] += 1;
            if idx[pos] < radices[pos] {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Whether a class determines finitely many homographies on its own.
fn is_finite_class(d: usize, size: usize) -> bool {
    match d {
        1 => size >= 3,
        2 => size >= 2,
        _ => size >= 1,
    }
}

/// Enumeration size for a finite class: triples of points for `d = 1`, a
/// conjugate pair and a point for `d = 2`, one conjugate run for `d >= 3`.
fn class_cost(d: usize, size: usize) -> u128 {
    let s = size as u128;
    match d {
        1 => s * s.saturating_sub(1) * s.saturating_sub(2),
        2 => 4 * s * s,
        _ => d as u128 * s,
    }
}

fn finite_class_atoms(k: &Fq, d: usize, sources: &[BinaryForm], targets: &[BinaryForm]) -> (ExtField<Fq>, Vec<Atom>) {
    let ext = residue_ext(k, &sources[0]);
    let atoms = match d {
        1 => class_atoms(&ext, &sources[..3], targets, 1),
        2 => {
            let mut a = class_atoms(&ext, &sources[..1], targets, 2);
            a.extend(class_atoms(&ext, &sources[1..2], targets, 1));
            a
        }
        _ => class_atoms(&ext, &sources[..1], targets, 3),
    };
    (ext, atoms)
}

/// Homographies sending the zeros of the `sources` places (degree `d`) onto
/// the zeros of the `targets` places, i.e. `prod(targets) o g ~ prod(sources)`.
pub fn candidates_for_class(k: &Fq, sources: &[BinaryForm], targets: &[BinaryForm], d: usize) -> Result<CandidateSet> {
    if sources.len() != targets.len() {
        return Ok(CandidateSet::Finite(BTreeSet::new()));
    }
    if !is_finite_class(d, sources.len()) {
        return Ok(CandidateSet::Parametric { sources: sources.to_vec(), targets: targets.to_vec() });
    }
    let (ext, atoms) = finite_class_atoms(k, d, sources, targets);
    let (ps, pt) = (product(k, sources), product(k, targets));
    Ok(CandidateSet::Finite(enumerate(k, &ext, &atoms, |h| proportional(k, &pt.compose(k, h), &ps))?))
}

/// All `g` in `PGL_2(k)` with `f o g` proportional to `u`, where `f` and `u`
/// are nonzero binary forms of equal degree.
pub fn candidate_homographies(k: &Fq, f: &BinaryForm, u: &BinaryForm) -> Result<Vec<Homography>> {
    if f.degree() != u.degree() {
        return Ok(Vec::new());
    }
    let sf = form_signature(k, f)?;
    let su = form_signature(k, u)?;
    if sf.profile() != su.profile() {
        return Ok(Vec::new());
    }
    let accept = |h: &Homography| proportional(k, &f.compose(k, h), u);
    if sf.classes.is_empty() {
        return bruteforce_homographies(k, f, u);
    }
    let mut finite: Vec<(u128, usize, usize)> = sf
        .classes
        .iter()
        .filter(|((d, _), v)| is_finite_class(*d, v.len()))
        .map(|(&(d, e), v)| (class_cost(d, v.len()), d, e))
        .collect();
    finite.sort();
    let mut exhausted = false;
    for (_, d, e) in finite {
        let (ext, atoms) = finite_class_atoms(k, d, &su.classes[&(d, e)], &sf.classes[&(d, e)]);
        match enumerate(k, &ext, &atoms, accept) {
            Ok(set) => return Ok(set.into_iter().collect()),
            Err(Error::ResourceExhausted(_)) => exhausted = true,
            Err(err) => return Err(err),
        }
    }
    if exhausted {
        return Err(Error::ResourceExhausted(CANDIDATE_CAP));
    }
    // only parametric classes: combine them, quadratic places first
    let quad = su.classes.iter().find(|((d, _), _)| *d == 2).map(|(_, v)| v[0].clone());
    let ext = match &quad {
        Some(s) => residue_ext(k, s),
        None => ExtField::new(k.clone(), &Poly::x(k)),
    };
    let mut atoms = Vec::new();
    for d in [2, 1] {
        for (&(dd, e), sources) in &su.classes {
            if dd == d {
                atoms.extend(class_atoms(&ext, sources, &sf.classes[&(dd, e)], d));
            }
        }
    }
    Ok(enumerate(k, &ext, &atoms, accept)?.into_iter().collect())
}

/// Exhaustive search of `PGL_2(k)` for `g` with `f o g` proportional to `u`.
pub fn bruteforce_homographies(k: &Fq, f: &BinaryForm, u: &BinaryForm) -> Result<Vec<Homography>> {
    let q = k.order_u128().ok_or(Error::FieldTooLarge)?;
    if q.saturating_pow(3) - q > BRUTEFORCE_CAP {
        return Err(Error::FieldTooLarge);
    }
    let el: Vec<Fe> = (0..q).map(|i| k.nth_element(i)).collect();
    let mut out = Vec::new();
    let mut consider = |m: [Fe; 4]| {
        if let Ok(h) = Homography::new(k, m) {
            if proportional(k, &f.compose(k, &h), u) {
                out.push(h);
            }
        }
    };
    for b in &el {
        for c in &el {
            for d in &el {
                consider([k.one(), *b, *c, *d]);
            }
        }
    }
    for c in &el {
        for d in &el {
            consider([k.zero(), k.one(), *c, *d]);
        }
    }
    out.sort();
    Ok(out)
}

/// `(S, g)` with `S^T twist(A, g) S = B`, or `None` when no homography
/// compatible with the characteristic polynomials makes the pencils congruent.
/// Candidates are tried in increasing order, so the smallest working `g` wins.
pub fn ip2s_solve(a: &Pencil, b: &Pencil) -> Result<Option<(Congruence, Homography)>> {
    if a.field() != b.field() {
        return Err(Error::IncompatibleFields);
    }
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch("pencils of different sizes".into()));
    }
    let k = a.field();
    if k.characteristic() == 2 {
        return Err(Error::EvenCharacteristic);
    }
    let ka = kronecker_decompose(a)?;
    let kb = kronecker_decompose(b)?;
    if ka.indices != kb.indices {
        return Ok(None);
    }
    let fa = char_poly(&ka.regular_part);
    let fb = char_poly(&kb.regular_part);
    // Kronecker blocks are unchanged by twists
    let cands = if fa.degree() == 0 { vec![Homography::identity(k)] } else { candidate_homographies(k, &fa, &fb)? };
    let db = canonicalize(b)?;
    let db_inv = db.transform.inverse(k);
    for g in cands {
        let da = canonicalize(&twist(a, &g))?;
        if da.same_form(&db) {
            let s = da.transform.then(k, &db_inv);
            if !verify_ip2s(a, b, s.matrix(), &g)? {
                return Err(Error::Internal("composed transform fails verification".into()));
            }
            return Ok(Some((s, g)));
        }
    }
    Ok(None)
}
