//! Timing helpers for the scaling smoke test.

use std::time::{Duration, Instant};

use rand::Rng;

use crate::algebra::Fq;
use crate::error::Result;
use crate::gen::{random_congruence, random_pencil};
use crate::kronecker::kronecker_block;
use crate::pencil::{apply_congruence, char_poly, Pencil};
use crate::regular::canonicalize;

/// Median wall time of `reps` runs.
pub fn median_time<F: FnMut() -> Result<()>>(reps: usize, mut run: F) -> Result<Duration> {
    let mut times = Vec::with_capacity(reps);
    for _ in 0..reps {
        let t = Instant::now();
        run()?;
        times.push(t.elapsed());
    }
    times.sort();
    Ok(times[reps / 2])
}

/// Least-squares slope of `log t` against `log n`.
pub fn loglog_slope(samples: &[(usize, Duration)]) -> f64 {
    let pts: Vec<(f64, f64)> =
        samples.iter().map(|(n, t)| ((*n as f64).ln(), t.as_secs_f64().max(1e-9).ln())).collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Random pencil of size `n` with nonzero characteristic polynomial.
pub fn regular_instance<R: Rng + ?Sized>(field: &Fq, n: usize, rng: &mut R) -> Pencil {
    loop {
        let p = random_pencil(field, n, rng);
        if !char_poly(&p).is_zero(field) {
            return p;
        }
    }
}

/// A Kronecker block of index `n / 8` next to a random regular pencil, scrambled.
pub fn singular_instance<R: Rng + ?Sized>(field: &Fq, n: usize, rng: &mut R) -> Pencil {
    let h = n / 8;
    let reg = regular_instance(field, n - (2 * h + 1), rng);
    let p = Pencil::block_diag(field, &[kronecker_block(field, h), reg]);
    apply_congruence(&p, &random_congruence(field, n, rng)).expect("matching size")
}

/// Median canonicalization time per size on fresh instances.
pub fn scaling<R: Rng + ?Sized>(field: &Fq, sizes: &[usize], singular: bool, reps: usize, rng: &mut R) -> Result<Vec<(usize, Duration)>> {
    sizes
        .iter()
        .map(|&n| {
            let instances: Vec<Pencil> = (0..reps)
                .map(|_| if singular { singular_instance(field, n, rng) } else { regular_instance(field, n, rng) })
                .collect();
            let mut it = instances.iter();
            let t = median_time(reps, || canonicalize(it.next().unwrap()).map(|_| ()))?;
            Ok((n, t))
        })
        .collect()
}
