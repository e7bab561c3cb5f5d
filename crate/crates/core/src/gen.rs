//! Random and planted instances.
//!
//! Block specifications are comma- or plus-separated items `K<h>`,
//! `L(<poly>,<ell>,<1|D>)` and `Linf(<ell>,<1|D>)`. Polynomials are written
//! like `x^2+2x+1` with integer coefficients, or as a coefficient array
//! `[1,2,1]` (constant term first) whose entries are field elements.

use rand::Rng;

use crate::algebra::{is_irreducible, Fe, Field, Fq, Matrix, Poly};
use crate::error::{Error, Result};
use crate::io::elem_from_json;
use crate::kronecker::kronecker_block;
use crate::pencil::{apply_congruence, twist, Congruence, Homography, Pencil};
use crate::regular::{local_block, Character, Place};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockSpec {
    Kronecker(usize),
    Local { place: Place, ell: usize, character: Character },
}

impl BlockSpec {
    pub fn dim(&self) -> usize {
        match self {
            BlockSpec::Kronecker(h) => 2 * h + 1,
            BlockSpec::Local { place, ell, .. } => place.degree() * ell,
        }
    }

    pub fn pencil(&self, field: &Fq) -> Result<Pencil> {
        match self {
            BlockSpec::Kronecker(h) => Ok(kronecker_block(field, *h)),
            BlockSpec::Local { place, ell, character } => local_block(field, place, *ell, *character),
        }
    }
}

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Split at top-level separators, ignoring those inside brackets.
fn split_top(s: &str, seps: &[char]) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if depth == 0 && seps.contains(&ch) {
            out.push(std::mem::take(&mut cur));
        } else {
            cur.push(ch);
        }
    }
    out.push(cur);
    out.into_iter().map(|t| t.trim().to_string()).filter(|t| !t.is_empty()).collect()
}

/// Parse `x^2+2x+1`, `x - 1`, `3` or a coefficient array.
pub fn parse_poly(field: &Fq, s: &str) -> Result<Poly<Fe>> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.starts_with('[') {
        let v: Vec<serde_json::Value> = serde_json::from_str(&s).map_err(|e| perr(e.to_string()))?;
        let coeffs = v.iter().map(|x| elem_from_json(field, x)).collect::<Result<Vec<_>>>()?;
        return Ok(Poly::from_coeffs(field, coeffs));
    }
    let mut coeffs: Vec<Fe> = Vec::new();
    let mut rest = s.as_str();
    if rest.is_empty() {
        return Err(perr("empty polynomial"));
    }
    while !rest.is_empty() {
        let (sign, body) = match rest.as_bytes()[0] {
            b'+' => (1, &rest[1..]),
            b'-' => (-1, &rest[1..]),
            _ => (1, rest),
        };
        let end = body.find(['+', '-']).unwrap_or(body.len());
        let term = &body[..end];
        rest = &body[end..];
        let (coef, deg) = match term.find('x') {
            None => (term.parse::<i64>().map_err(|_| perr(format!("bad term '{term}'")))?, 0),
            Some(pos) => {
                let c = match &term[..pos] {
                    "" => 1,
                    t => t.trim_end_matches('*').parse::<i64>().map_err(|_| perr(format!("bad coefficient in '{term}'")))?,
                };
                let d = match &term[pos + 1..] {
                    "" => 1,
                    t => t
                        .strip_prefix('^')
                        .and_then(|e| e.parse::<usize>().ok())
                        .ok_or_else(|| perr(format!("bad exponent in '{term}'")))?,
                };
                (c, d)
            }
        };
        if coeffs.len() <= deg {
            coeffs.resize(deg + 1, field.zero());
        }
        coeffs[deg] = field.add(&coeffs[deg], &field.from_int(sign * coef));
    }
    Ok(Poly::from_coeffs(field, coeffs))
}

fn parse_character(s: &str) -> Result<Character> {
    match s.trim() {
        "1" => Ok(Character::One),
        "D" => Ok(Character::Delta),
        other => Err(perr(format!("character must be 1 or D, got '{other}'"))),
    }
}

fn parse_ell(s: &str) -> Result<usize> {
    match s.trim().parse::<usize>() {
        Ok(l) if l >= 1 => Ok(l),
        _ => Err(perr(format!("bad length '{s}'"))),
    }
}

/// Parse a block specification string.
pub fn parse_blocks(field: &Fq, s: &str) -> Result<Vec<BlockSpec>> {
    let mut out = Vec::new();
    for item in split_top(s, &[',', '+']) {
        if let Some(h) = item.strip_prefix('K') {
            out.push(BlockSpec::Kronecker(h.trim().parse().map_err(|_| perr(format!("bad Kronecker index in '{item}'")))?));
        } else if let Some(args) = item.strip_prefix("Linf(").and_then(|r| r.strip_suffix(')')) {
            let parts = split_top(args, &[',']);
            if parts.len() != 2 {
                return Err(perr(format!("Linf takes two arguments: '{item}'")));
            }
            out.push(BlockSpec::Local { place: Place::Infinity, ell: parse_ell(&parts[0])?, character: parse_character(&parts[1])? });
        } else if let Some(args) = item.strip_prefix("L(").and_then(|r| r.strip_suffix(')')) {
            let parts = split_top(args, &[',']);
            if parts.len() != 3 {
                return Err(perr(format!("L takes three arguments: '{item}'")));
            }
            let f = parse_poly(field, &parts[0])?;
            if f.degree().unwrap_or(0) == 0 || !f.is_monic(field) || !is_irreducible(field, &f) {
                return Err(Error::InvalidPolynomial(format!("'{}' is not monic irreducible", parts[0])));
            }
            out.push(BlockSpec::Local { place: Place::Finite(f), ell: parse_ell(&parts[1])?, character: parse_character(&parts[2])? });
        } else {
            return Err(perr(format!("unknown block '{item}'")));
        }
    }
    Ok(out)
}

/// Block-diagonal pencil of the given blocks, unscrambled.
pub fn planted_pencil(field: &Fq, blocks: &[BlockSpec]) -> Result<Pencil> {
    let parts = blocks.iter().map(|b| b.pencil(field)).collect::<Result<Vec<_>>>()?;
    Ok(Pencil::block_diag(field, &parts))
}

/// Uniform element of `GL_n` by rejection.
pub fn random_invertible<R: Rng + ?Sized>(field: &Fq, n: usize, rng: &mut R) -> Matrix<Fe> {
    loop {
        let data = (0..n * n).map(|_| field.random(rng)).collect();
        let m = Matrix::from_vec(n, n, data);
        if !field.is_zero(&m.det(field)) {
            return m;
        }
    }
}

pub fn random_congruence<R: Rng + ?Sized>(field: &Fq, n: usize, rng: &mut R) -> Congruence {
    Congruence::new(field, random_invertible(field, n, rng)).expect("invertible by construction")
}

pub fn random_homography<R: Rng + ?Sized>(field: &Fq, rng: &mut R) -> Homography {
    loop {
        let m = [field.random(rng), field.random(rng), field.random(rng), field.random(rng)];
        if let Ok(g) = Homography::new(field, m) {
            return g;
        }
    }
}

pub fn random_symmetric<R: Rng + ?Sized>(field: &Fq, n: usize, rng: &mut R) -> Matrix<Fe> {
    let mut m = Matrix::zeros(field, n, n);
    for i in 0..n {
        for j in i..n {
            let x = field.random(rng);
            m.set(i, j, x);
            m.set(j, i, x);
        }
    }
    m
}

/// Pencil with independent uniform symmetric matrices.
pub fn random_pencil<R: Rng + ?Sized>(field: &Fq, n: usize, rng: &mut R) -> Pencil {
    Pencil::new(field.clone(), random_symmetric(field, n, rng), random_symmetric(field, n, rng)).expect("symmetric")
}

/// Monic irreducible polynomial of degree `d` drawn uniformly by rejection.
pub fn random_irreducible<R: Rng + ?Sized>(field: &Fq, d: usize, rng: &mut R) -> Poly<Fe> {
    loop {
        let mut c: Vec<Fe> = (0..d).map(|_| field.random(rng)).collect();
        c.push(field.one());
        let p = Poly::from_coeffs(field, c);
        if is_irreducible(field, &p) {
            return p;
        }
    }
}

/// Which secrets to plant alongside the pencil `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Plant {
    None,
    Ip1s,
    Ip2s,
}

/// A generated pencil with optional planted partner `B` and secrets.
#[derive(Clone, Debug)]
pub struct Instance {
    pub a: Pencil,
    pub b: Option<Pencil>,
    pub s: Option<Congruence>,
    pub gamma: Option<Homography>,
}

/// Generate an instance of size `n`: random when `blocks` is empty, otherwise
/// the scrambled block-diagonal pencil of the blocks.
pub fn generate<R: Rng + ?Sized>(field: &Fq, n: usize, blocks: &[BlockSpec], plant: Plant, rng: &mut R) -> Result<Instance> {
    let a = if blocks.is_empty() {
        random_pencil(field, n, rng)
    } else {
        let total: usize = blocks.iter().map(|b| b.dim()).sum();
        if total != n {
            return Err(Error::DimensionMismatch(format!("blocks have total dimension {total}, expected {n}")));
        }
        let p = planted_pencil(field, blocks)?;
        apply_congruence(&p, &random_congruence(field, n, rng))?
    };
    let mut inst = Instance { a, b: None, s: None, gamma: None };
    if plant != Plant::None {
        let s = random_congruence(field, n, rng);
        let base = if plant == Plant::Ip2s {
            let g = random_homography(field, rng);
            let t = twist(&inst.a, &g);
            inst.gamma = Some(g);
            t
        } else {
            inst.a.clone()
        };
        inst.b = Some(apply_congruence(&base, &s)?);
        inst.s = Some(s);
    }
    Ok(inst)
}
