//! Support shifts making the periodized tube families pairwise disjoint.
//!
//! Each direction `k` carries a lattice of tube center lines parallel to `k1`:
//! in the plane coordinates `y = (k.(x - a), k2.(x - a))` the centers sit on
//! `(2 pi / L) Z^2` with `L` the integer argument scale. For two transversal
//! families the center lines of one project onto a family of parallel lines in
//! the other's plane, with rational direction and rationally spaced normal
//! offsets, so the minimal center distance is an exact 1D centered mod of the
//! relative shift. The search uses that closed form; a sampled line
//! certificate and an envelope overlap quadrature cross-check it.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::rational::{dot as rdot, Rat};
use crate::{Direction, GeometryError, GeometrySet, Result};

#[derive(Debug, Clone)]
pub struct ShiftConfig {
    pub r_perp: f64,
    pub lambda: f64,
    pub seed: u64,
    pub attempts: usize,
    pub line_samples: usize,
}

impl ShiftConfig {
    pub fn new(r_perp: f64, lambda: f64) -> Self {
        Self { r_perp, lambda, seed: 0x5eed, attempts: 200_000, line_samples: 4096 }
    }
}

/// Integer scale of the periodized profile arguments.
pub fn argument_scale(set: &GeometrySet, r_perp: f64, lambda: f64) -> i64 {
    let m_perp = (lambda * r_perp).round().max(1.0) as i64;
    m_perp * set.n_lambda
}

/// Tube radius in physical space, for the snapped concentration `m/lambda`
/// actually used by the periodized profiles.
pub fn tube_radius(set: &GeometrySet, r_perp: f64, lambda: f64) -> f64 {
    let m_perp = (lambda * r_perp).round().max(1.0);
    (m_perp / lambda) / argument_scale(set, r_perp, lambda) as f64
}

fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn centered_mod(v: f64, period: f64) -> f64 {
    let m = v.rem_euclid(period);
    if m > 0.5 * period {
        m - period
    } else {
        m
    }
}

fn rat_gcd(a: Rat, b: Rat) -> Rat {
    // gcd(p1/q1, p2/q2) = gcd(p1 q2, p2 q1) / (q1 q2)
    if a.is_zero() {
        return Rat::new(b.num.abs(), b.den);
    }
    if b.is_zero() {
        return Rat::new(a.num.abs(), a.den);
    }
    let p = igcd((a.num * b.den).abs(), (b.num * a.den).abs());
    Rat::new(p, a.den * b.den)
}

fn igcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        igcd(b, a % b)
    }
}

/// Exact pairwise geometry of two transversal tube families.
struct PairGeometry {
    /// Unit normal (in the plane of the second family) to the projected lines.
    normal: [f64; 2],
    /// Spacing of the combined arithmetic progression of normal offsets.
    spacing: f64,
}

fn pair_geometry(di: &Direction, dj: &Direction, scale: i64) -> Option<PairGeometry> {
    // projected direction of di's center lines in dj's plane coordinates
    let d1 = rdot(&dj.k, &di.k1);
    let d2 = rdot(&dj.k2, &di.k1);
    if d1.is_zero() && d2.is_zero() {
        return None; // parallel families, not supported by this oracle
    }
    let d1f = d1.to_f64();
    let d2f = d2.to_f64();
    let norm = (d1f * d1f + d2f * d2f).sqrt();
    let normal = [-d2f / norm, d1f / norm];

    // normal components of the projected base lattice of family i:
    //   u = proj(k_i), v = proj(k2_i), offsets (d1*u2 - d2*u1)/|d| etc.
    let ru = d1 * rdot(&dj.k2, &di.k) - d2 * rdot(&dj.k, &di.k);
    let rv = d1 * rdot(&dj.k2, &di.k2) - d2 * rdot(&dj.k, &di.k2);
    // and of family j's own lattice: d1, -d2
    let g = rat_gcd(rat_gcd(ru, rv), rat_gcd(d1, d2));
    let spacing = (2.0 * std::f64::consts::PI / scale as f64) * g.to_f64() / norm;
    Some(PairGeometry { normal, spacing })
}

/// Exact minimal distance between center lines of family `i` (shift `si`)
/// and family `j` (shift `sj`).
fn exact_separation(
    di: &Direction,
    si: &[f64; 3],
    dj: &Direction,
    sj: &[f64; 3],
    scale: i64,
) -> f64 {
    let pg = pair_geometry(di, dj, scale).expect("parallel tube families");
    let rel = [si[0] - sj[0], si[1] - sj[1], si[2] - sj[2]];
    let w = [dot3(&dj.k_f64(), &rel), dot3(&dj.k2_f64(), &rel)];
    let h = pg.normal[0] * w[0] + pg.normal[1] * w[1];
    centered_mod(h, pg.spacing).abs()
}

/// Largest possible separation of the pair over all shifts.
fn pair_capacity(di: &Direction, dj: &Direction, scale: i64) -> f64 {
    let pg = pair_geometry(di, dj, scale).expect("parallel tube families");
    0.5 * pg.spacing
}

/// Distance from the point `x` to the nearest tube center line of `d`.
pub fn plane_lattice_distance(d: &Direction, shift: &[f64; 3], scale: i64, x: &[f64; 3]) -> f64 {
    let rel = [x[0] - shift[0], x[1] - shift[1], x[2] - shift[2]];
    let spacing = 2.0 * std::f64::consts::PI / scale as f64;
    let y0 = centered_mod(dot3(&d.k_f64(), &rel), spacing);
    let y1 = centered_mod(dot3(&d.k2_f64(), &rel), spacing);
    (y0 * y0 + y1 * y1).sqrt()
}

fn line_period(d: &Direction, n_lambda: i64) -> f64 {
    let w: Vec<i64> = d.k1.iter().map(|r| n_lambda * r.num / r.den).collect();
    let g = w.iter().fold(0i64, |acc, &v| igcd(acc.abs(), v.abs()));
    2.0 * std::f64::consts::PI * n_lambda as f64 / g.max(1) as f64
}

/// Sampled minimal separation between the two families, for cross-checking
/// the exact oracle.
pub fn sampled_separation(
    a: &Direction,
    shift_a: &[f64; 3],
    b: &Direction,
    shift_b: &[f64; 3],
    scale: i64,
    n_lambda: i64,
    samples: usize,
) -> f64 {
    let spacing = 2.0 * std::f64::consts::PI / scale as f64;
    let period = line_period(a, n_lambda);
    let k = a.k_f64();
    let k1 = a.k1_f64();
    let k2 = a.k2_f64();
    let cells = scale as usize;
    let mut min_d = f64::INFINITY;
    for ai in 0..cells {
        for bi in 0..cells {
            let base = [
                shift_a[0] + spacing * (ai as f64 * k[0] + bi as f64 * k2[0]),
                shift_a[1] + spacing * (ai as f64 * k[1] + bi as f64 * k2[1]),
                shift_a[2] + spacing * (ai as f64 * k[2] + bi as f64 * k2[2]),
            ];
            for s in 0..samples {
                let t = period * s as f64 / samples as f64;
                let x = [base[0] + t * k1[0], base[1] + t * k1[1], base[2] + t * k1[2]];
                let d = plane_lattice_distance(b, shift_b, scale, &x);
                if d < min_d {
                    min_d = d;
                }
            }
        }
    }
    min_d
}

/// Choose support shifts making all tube families pairwise disjoint.
///
/// Uses the exact pair-separation oracle; fails with `NoAdmissibleShifts`
/// when some pair's best achievable separation cannot clear the two tube
/// radii, or when the randomized search exhausts its attempts. Returns the
/// quadrature bound on the largest pairwise envelope overlap (zero when the
/// certificate holds).
pub fn choose_shifts(set: &mut GeometrySet, cfg: &ShiftConfig) -> Result<f64> {
    if set.len() <= 1 {
        for d in set.directions.iter_mut() {
            d.shift = [0.0; 3];
        }
        return Ok(0.0);
    }
    let scale = argument_scale(set, cfg.r_perp, cfg.lambda);
    let radius = tube_radius(set, cfg.r_perp, cfg.lambda);
    let needed = 2.0 * radius * 1.001;

    // capacity oracle: every pair must have room for two tube radii
    for i in 0..set.len() {
        for j in i + 1..set.len() {
            let cap = pair_capacity(&set.directions[i], &set.directions[j], scale);
            if cap <= needed {
                return Err(GeometryError::NoAdmissibleShifts(format!(
                    "pair ({i},{j}) admits at most {cap:.4} separation, need > {needed:.4}"
                )));
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut shifts: Vec<[f64; 3]> = vec![[0.0; 3]];
    for idx in 1..set.len() {
        let mut best: Option<([f64; 3], f64)> = None;
        for _ in 0..cfg.attempts {
            let cand = [
                rng.gen_range(0.0..2.0 * std::f64::consts::PI),
                rng.gen_range(0.0..2.0 * std::f64::consts::PI),
                rng.gen_range(0.0..2.0 * std::f64::consts::PI),
            ];
            let mut min_sep = f64::INFINITY;
            for (j, prev) in shifts.iter().enumerate() {
                let sep =
                    exact_separation(&set.directions[idx], &cand, &set.directions[j], prev, scale);
                min_sep = min_sep.min(sep);
                if min_sep <= needed && best.is_some() {
                    break;
                }
            }
            if best.as_ref().map_or(true, |(_, b)| min_sep > *b) {
                best = Some((cand, min_sep));
            }
            if min_sep > needed {
                break;
            }
        }
        match best {
            Some((cand, sep)) if sep > needed => shifts.push(cand),
            _ => {
                return Err(GeometryError::NoAdmissibleShifts(format!(
                    "search exhausted after {} attempts for direction {idx} (best {:.4}, need {:.4})",
                    cfg.attempts,
                    best.map(|(_, s)| s).unwrap_or(0.0),
                    needed
                )))
            }
        }
    }
    for (d, s) in set.directions.iter_mut().zip(shifts.iter()) {
        d.shift = *s;
    }
    Ok(overlap_integral(set, scale, radius, cfg.seed))
}

/// Monte-Carlo bound on the largest pairwise overlap integral of tube
/// envelope functions; exactly zero at every sample when disjoint.
pub fn overlap_integral(set: &GeometrySet, scale: i64, radius: f64, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcdef);
    let env = |d: &Direction, shift: &[f64; 3], x: &[f64; 3]| -> f64 {
        let dist = plane_lattice_distance(d, shift, scale, x);
        (1.0 - dist / radius).max(0.0)
    };
    let mut worst: f64 = 0.0;
    for i in 0..set.len() {
        for j in i + 1..set.len() {
            let mut acc = 0.0;
            let samples = 20000;
            for _ in 0..samples {
                let x = [
                    rng.gen_range(0.0..2.0 * std::f64::consts::PI),
                    rng.gen_range(0.0..2.0 * std::f64::consts::PI),
                    rng.gen_range(0.0..2.0 * std::f64::consts::PI),
                ];
                acc += env(&set.directions[i], &set.directions[i].shift, &x)
                    * env(&set.directions[j], &set.directions[j].shift, &x);
            }
            worst = worst.max(acc * crate::TORUS_VOLUME_GEOM / samples as f64);
        }
    }
    worst
}
