use std::cmp::Ordering;

use crate::algebra::{dual_trace_sequence, field_nonsquare, ExtField, Fe, Field, Fq, Matrix, Poly};
use crate::error::Result;
use crate::kronecker::kronecker_block;
use crate::pencil::{Congruence, Pencil};

/// A place of the projective line over `k`: a monic irreducible `f` or infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Place {
    Infinity,
    Finite(Poly<Fe>),
}

impl Place {
    /// Degree of the residue field over `k`.
    pub fn degree(&self) -> usize {
        match self {
            Place::Infinity => 1,
            Place::Finite(f) => f.degree().unwrap_or(0),
        }
    }
}

impl Ord for Place {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Place::Infinity, Place::Infinity) => Ordering::Equal,
            (Place::Infinity, _) => Ordering::Less,
            (_, Place::Infinity) => Ordering::Greater,
            (Place::Finite(a), Place::Finite(b)) => (a.degree(), a.coeffs()).cmp(&(b.degree(), b.coeffs())),
        }
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Square class of a free layer: all ones, or ones followed by one non-square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Character {
    One,
    Delta,
}

/// One free layer `R_ell^mult` at a place.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LocalBlockDesc {
    pub place: Place,
    pub ell: usize,
    pub mult: usize,
    pub character: Character,
}

impl LocalBlockDesc {
    pub fn dim(&self) -> usize {
        self.place.degree() * self.ell * self.mult
    }
}

/// Canonical form of a pencil and the congruence reaching it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalDescriptor {
    /// Kronecker indices in ascending order.
    pub kronecker: Vec<usize>,
    /// Local layers sorted by place, then length.
    pub blocks: Vec<LocalBlockDesc>,
    /// `S` with `S^T P S` equal to [`CanonicalDescriptor::canonical_pencil`].
    pub transform: Congruence,
}

impl CanonicalDescriptor {
    /// Equality of the invariants, ignoring the transform.
    pub fn same_form(&self, other: &CanonicalDescriptor) -> bool {
        self.kronecker == other.kronecker && self.blocks == other.blocks
    }

    pub fn dim(&self) -> usize {
        self.kronecker.iter().map(|h| 2 * h + 1).sum::<usize>() + self.blocks.iter().map(|b| b.dim()).sum::<usize>()
    }

    /// The block-diagonal canonical pencil described by the invariants.
    pub fn canonical_pencil(&self, field: &Fq) -> Result<Pencil> {
        let mut parts: Vec<Pencil> = self.kronecker.iter().map(|&h| kronecker_block(field, h)).collect();
        for b in &self.blocks {
            for i in 0..b.mult {
                let ch = if i + 1 == b.mult { b.character } else { Character::One };
                parts.push(local_block(field, &b.place, b.ell, ch)?);
            }
        }
        Ok(Pencil::block_diag(field, &parts))
    }
}

/// Residue field `k[x]/f` at a place; the infinite place uses `f = x`.
pub(crate) fn residue_field(field: &Fq, place: &Place) -> ExtField<Fq> {
    match place {
        Place::Infinity => ExtField::new(field.clone(), &Poly::x(field)),
        Place::Finite(f) => ExtField::new(field.clone(), f),
    }
}

/// The canonical unit `1` or the first non-square of the residue field.
pub(crate) fn character_unit(kf: &ExtField<Fq>, ch: Character) -> Result<Vec<Fe>> {
    match ch {
        Character::One => Ok(kf.one()),
        Character::Delta => field_nonsquare(kf),
    }
}

/// Values `phi(u z^m)` for `m < len`, where `phi(a) = Tr(a / f'(z))`.
pub(crate) fn weighted_functional(field: &Fq, f: &Poly<Fe>, u: &[Fe], len: usize) -> Vec<Fe> {
    let d = u.len();
    let h = dual_trace_sequence(field, f, len + d);
    (0..len)
        .map(|m| {
            let mut acc = field.zero();
            for (s, us) in u.iter().enumerate() {
                acc = field.add(&acc, &field.mul(us, &h[m + s]));
            }
            acc
        })
        .collect()
}

/// Gram matrices of `(x, y) -> phi(tau(u (lambda - z - pi) x y))` on the basis
/// `z^i pi^j` of `K[pi]/pi^ell`, ordered with `j` outer.
fn finite_block(field: &Fq, f: &Poly<Fe>, ell: usize, u: &[Fe]) -> Pencil {
    let d = f.degree().expect("nonzero place polynomial");
    let n = d * ell;
    let w = weighted_functional(field, f, u, 2 * d);
    let mut bi = Matrix::zeros(field, n, n);
    let mut b0 = Matrix::zeros(field, n, n);
    for j1 in 0..ell {
        for j2 in 0..ell {
            let top = j1 + j2 + 1 == ell;
            let below = j1 + j2 + 2 == ell;
            if !top && !below {
                continue;
            }
            for i1 in 0..d {
                for i2 in 0..d {
                    let (r, c) = (j1 * d + i1, j2 * d + i2);
                    let s = i1 + i2;
                    if top {
                        bi.set(r, c, w[s]);
                        b0.set(r, c, field.neg(&w[s + 1]));
                    } else {
                        b0.set(r, c, field.neg(&w[s]));
                    }
                }
            }
        }
    }
    Pencil::from_parts(field.clone(), bi, b0)
}

/// The canonical local block `L_(place, ell, u)`.
pub fn local_block(field: &Fq, place: &Place, ell: usize, ch: Character) -> Result<Pencil> {
    let kf = residue_field(field, place);
    let u = character_unit(&kf, ch)?;
    Ok(match place {
        Place::Infinity => finite_block(field, &Poly::x(field), ell, &u).swap(),
        Place::Finite(f) => finite_block(field, f, ell, &u),
    })
}
