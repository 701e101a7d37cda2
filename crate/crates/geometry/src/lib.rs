//! Rational wavevector frames and the rank-one decomposition
//! `S = sum_k gamma_k^2(S) k1 (x) k1` for symmetric matrices near the identity.
//!
//! The bundled set uses the 3-4-5 family: six orthonormal right-handed frames
//! `(k, k1, k2)` with exactly rational entries and integer scale 5. The six
//! `k1 (x) k1` are linearly independent and span the symmetric 3x3 matrices,
//! so the weight map is a plain 6x6 linear solve; positivity near the identity
//! is probed numerically and the probe radius is halved before use downstream.

mod rational;
pub mod shifts;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use rational::{cross, dot, rv, to_f64, Rat, RatVec};
pub use shifts::{argument_scale, choose_shifts, tube_radius, ShiftConfig};

pub(crate) const TORUS_VOLUME_GEOM: f64 =
    8.0 * std::f64::consts::PI * std::f64::consts::PI * std::f64::consts::PI;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("construction failure: {0}")]
    ConstructionFailure(String),

    #[error("out of domain: {0}")]
    OutOfDomain(String),

    #[error("no admissible shifts: {0}")]
    NoAdmissibleShifts(String),
}

pub type Result<T> = std::result::Result<T, GeometryError>;

/// One rational orthonormal right-handed frame with its support shift.
#[derive(Debug, Clone)]
pub struct Direction {
    pub k: RatVec,
    pub k1: RatVec,
    pub k2: RatVec,
    /// Support shift, chosen by [`choose_shifts`].
    pub shift: [f64; 3],
}

impl Direction {
    fn new(k: RatVec, k1: RatVec) -> Result<Self> {
        let k2 = cross(&k, &k1);
        let d = Self { k, k1, k2, shift: [0.0; 3] };
        d.check()?;
        Ok(d)
    }

    fn check(&self) -> Result<()> {
        let unit = |v: &RatVec| dot(v, v) == Rat::ONE;
        if !(unit(&self.k) && unit(&self.k1) && unit(&self.k2)) {
            return Err(GeometryError::ConstructionFailure("frame vectors not unit".into()));
        }
        if !dot(&self.k, &self.k1).is_zero()
            || !dot(&self.k, &self.k2).is_zero()
            || !dot(&self.k1, &self.k2).is_zero()
        {
            return Err(GeometryError::ConstructionFailure("frame not orthogonal".into()));
        }
        if cross(&self.k, &self.k1) != self.k2 {
            return Err(GeometryError::ConstructionFailure("frame not right-handed".into()));
        }
        Ok(())
    }

    pub fn k_f64(&self) -> [f64; 3] {
        to_f64(&self.k)
    }

    pub fn k1_f64(&self) -> [f64; 3] {
        to_f64(&self.k1)
    }

    pub fn k2_f64(&self) -> [f64; 3] {
        to_f64(&self.k2)
    }
}

/// Direction family with the decomposition data.
#[derive(Debug, Clone)]
pub struct GeometrySet {
    pub directions: Vec<Direction>,
    /// Integer scale: `n_lambda * (k, k1, k2)` all have integer coordinates.
    pub n_lambda: i64,
    /// Largest probed radius around the identity where all weights stay positive.
    pub eps_u: f64,
    /// Reported bound on the summed C^4 size of the weight functions.
    pub m_star: f64,
    /// Weights of the identity under the decomposition.
    pub golden_id_weights: Vec<f64>,
    /// True for the axis-aligned single-direction test mode, which does not
    /// satisfy the span property.
    pub surrogate: bool,
    lu: Lu6,
}

/// Symmetric 3x3 matrix as a flat `[f64; 9]`, row-major.
pub type Sym3 = [f64; 9];

pub fn sym3_identity() -> Sym3 {
    [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]
}

pub fn frobenius_distance(a: &Sym3, b: &Sym3) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn sym_to_vec6(s: &Sym3) -> [f64; 6] {
    [s[0], s[4], s[8], s[1], s[2], s[5]]
}

fn outer_k1(d: &Direction) -> Sym3 {
    let k1 = d.k1_f64();
    let mut m = [0.0; 9];
    for a in 0..3 {
        for b in 0..3 {
            m[3 * a + b] = k1[a] * k1[b];
        }
    }
    m
}

/// Build the bundled six-direction family and verify its properties.
pub fn build_lambda() -> Result<GeometrySet> {
    let frames: [(RatVec, RatVec); 6] = [
        (rv([(4, 5), (-3, 5), (0, 1)]), rv([(3, 5), (4, 5), (0, 1)])),
        (rv([(4, 5), (3, 5), (0, 1)]), rv([(3, 5), (-4, 5), (0, 1)])),
        (rv([(0, 1), (4, 5), (-3, 5)]), rv([(0, 1), (3, 5), (4, 5)])),
        (rv([(0, 1), (4, 5), (3, 5)]), rv([(0, 1), (3, 5), (-4, 5)])),
        (rv([(-3, 5), (0, 1), (4, 5)]), rv([(4, 5), (0, 1), (3, 5)])),
        (rv([(3, 5), (0, 1), (4, 5)]), rv([(-4, 5), (0, 1), (3, 5)])),
    ];
    let directions: Vec<Direction> = frames
        .into_iter()
        .map(|(k, k1)| Direction::new(k, k1))
        .collect::<Result<_>>()?;

    // integer scale: every 5*vector must be integral
    let n_lambda = 5i64;
    for d in &directions {
        for v in [&d.k, &d.k1, &d.k2] {
            for c in v {
                if (n_lambda * c.num) % c.den != 0 {
                    return Err(GeometryError::ConstructionFailure(
                        "frame coordinates not integral at the declared scale".into(),
                    ));
                }
            }
        }
    }

    let mut set = GeometrySet {
        directions,
        n_lambda,
        eps_u: 0.0,
        m_star: 0.0,
        golden_id_weights: Vec::new(),
        surrogate: false,
        lu: Lu6::default(),
    };
    set.lu = Lu6::factor(span_matrix(&set.directions)).ok_or_else(|| {
        GeometryError::ConstructionFailure("rank-one family does not span".into())
    })?;

    let id_weights = set.solve_weights(&sym3_identity())?;
    if id_weights.iter().any(|&w| w <= 0.0) {
        return Err(GeometryError::ConstructionFailure(
            "identity weights not strictly positive".into(),
        ));
    }
    set.golden_id_weights = id_weights.to_vec();

    // reconstruction sanity at the center point
    let recon = set.reconstruct(&id_weights);
    if frobenius_distance(&recon, &sym3_identity()) > 1e-12 {
        return Err(GeometryError::ConstructionFailure(
            "identity reconstruction failed".into(),
        ));
    }

    set.eps_u = estimate_epsilon_u(&mut set, 1_0000, 0xfeed);
    set.m_star = estimate_m_star(&set, 0xbeef);
    Ok(set)
}

/// Single axis-aligned frame for scaling experiments only: `k = e2`,
/// `k1 = e1`, `k2 = -e3`, integer scale 1. Does not satisfy the span property.
pub fn surrogate_lambda() -> GeometrySet {
    let k = rv([(0, 1), (1, 1), (0, 1)]);
    let k1 = rv([(1, 1), (0, 1), (0, 1)]);
    let d = Direction::new(k, k1).expect("surrogate frame");
    GeometrySet {
        directions: vec![d],
        n_lambda: 1,
        eps_u: 0.5,
        m_star: f64::NAN,
        golden_id_weights: vec![1.0],
        surrogate: true,
        lu: Lu6::default(),
    }
}

impl GeometrySet {
    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    /// Safety value used by amplitude constructions: half the probed radius.
    pub fn eps_u_safe(&self) -> f64 {
        0.5 * self.eps_u
    }

    fn solve_weights(&self, s: &Sym3) -> Result<[f64; 6]> {
        if self.surrogate {
            return Err(GeometryError::OutOfDomain(
                "surrogate direction mode has no spanning decomposition".into(),
            ));
        }
        Ok(self.lu.solve(sym_to_vec6(s)))
    }

    fn reconstruct(&self, weights: &[f64; 6]) -> Sym3 {
        let mut acc = [0.0; 9];
        for (d, w) in self.directions.iter().zip(weights.iter()) {
            let o = outer_k1(d);
            for i in 0..9 {
                acc[i] += w * o[i];
            }
        }
        acc
    }

    /// Weights `gamma_k(S) = sqrt(w_k)` of the rank-one decomposition.
    ///
    /// `S` must lie within the probed radius of the identity and every solved
    /// weight must come out nonnegative; otherwise the input is out of domain.
    pub fn gamma_decompose(&self, s: &Sym3) -> Result<[f64; 6]> {
        let dist = frobenius_distance(s, &sym3_identity());
        if dist > self.eps_u {
            return Err(GeometryError::OutOfDomain(format!(
                "|S - Id|_F = {dist:.4} exceeds the probed radius {:.4}",
                self.eps_u
            )));
        }
        let w = self.solve_weights(s)?;
        if let Some(bad) = w.iter().position(|&v| v < 0.0) {
            return Err(GeometryError::OutOfDomain(format!(
                "negative weight {} for direction {bad}; positivity probe was optimistic here",
                w[bad]
            )));
        }
        Ok([
            w[0].sqrt(),
            w[1].sqrt(),
            w[2].sqrt(),
            w[3].sqrt(),
            w[4].sqrt(),
            w[5].sqrt(),
        ])
    }

    /// Residual of the reconstruction from [`gamma_decompose`].
    pub fn reconstruction_residual(&self, s: &Sym3) -> Result<f64> {
        let gamma = self.gamma_decompose(s)?;
        let w = [
            gamma[0] * gamma[0],
            gamma[1] * gamma[1],
            gamma[2] * gamma[2],
            gamma[3] * gamma[3],
            gamma[4] * gamma[4],
            gamma[5] * gamma[5],
        ];
        Ok(frobenius_distance(&self.reconstruct(&w), s))
    }

    /// Serialize to a JSON document with exact integer fractions.
    pub fn to_json(&self) -> serde_json::Value {
        let frac = |r: &Rat| serde_json::json!([r.num, r.den]);
        let vecj = |v: &RatVec| serde_json::json!([frac(&v[0]), frac(&v[1]), frac(&v[2])]);
        serde_json::json!({
            "n_lambda": self.n_lambda,
            "eps_u_probe": self.eps_u,
            "eps_u_safe": self.eps_u_safe(),
            "m_star": if self.m_star.is_nan() { serde_json::Value::Null } else { serde_json::json!(self.m_star) },
            "surrogate": self.surrogate,
            "golden_id_weights": self.golden_id_weights,
            "directions": self.directions.iter().map(|d| serde_json::json!({
                "k": vecj(&d.k),
                "k1": vecj(&d.k1),
                "k2": vecj(&d.k2),
                "shift": d.shift,
            })).collect::<Vec<_>>(),
        })
    }
}

fn span_matrix(directions: &[Direction]) -> [[f64; 6]; 6] {
    assert_eq!(directions.len(), 6, "span matrix needs exactly six directions");
    let mut m = [[0.0; 6]; 6];
    for (col, d) in directions.iter().enumerate() {
        let v = sym_to_vec6(&outer_k1(d));
        for row in 0..6 {
            m[row][col] = v[row];
        }
    }
    m
}

/// Random symmetric matrix at exact Frobenius distance `radius` from Id.
fn random_sphere_point(rng: &mut ChaCha8Rng, radius: f64) -> Sym3 {
    // gaussian direction in the 6-dim space of symmetric matrices
    let mut g = [0.0f64; 6];
    loop {
        let mut norm2 = 0.0;
        for v in g.iter_mut() {
            // Box-Muller from two uniforms
            let u1: f64 = rng.gen_range(1e-12..1.0);
            let u2: f64 = rng.gen_range(0.0..1.0);
            *v = (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
            norm2 += *v * *v;
        }
        if norm2 > 1e-12 {
            // Frobenius norm counts off-diagonal entries twice
            let fro = (g[0] * g[0] + g[1] * g[1] + g[2] * g[2]
                + 2.0 * (g[3] * g[3] + g[4] * g[4] + g[5] * g[5]))
                .sqrt();
            let s = radius / fro;
            let mut m = sym3_identity();
            m[0] += s * g[0];
            m[4] += s * g[1];
            m[8] += s * g[2];
            m[1] += s * g[3];
            m[3] += s * g[3];
            m[2] += s * g[4];
            m[6] += s * g[4];
            m[5] += s * g[5];
            m[7] += s * g[5];
            return m;
        }
    }
}

/// Largest tested radius around the identity keeping all weights positive.
///
/// Bisection over the radius with `samples` random sphere points per level;
/// deterministic for a fixed seed. The result is stored by [`build_lambda`];
/// consumers should use the halved [`GeometrySet::eps_u_safe`].
pub fn estimate_epsilon_u(set: &mut GeometrySet, samples: usize, seed: u64) -> f64 {
    let all_positive = |radius: f64, set: &GeometrySet| -> bool {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (radius.to_bits() >> 17));
        for _ in 0..samples {
            let s = random_sphere_point(&mut rng, radius);
            match set.solve_weights(&s) {
                Ok(w) => {
                    if w.iter().any(|&v| v <= 0.0) {
                        return false;
                    }
                }
                Err(_) => return false,
            }
        }
        true
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    if all_positive(hi, set) {
        lo = hi;
    } else {
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            if all_positive(mid, set) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    set.eps_u = lo;
    lo
}

/// Sampled estimate of the summed C^0..C^4 size of the weight functions over
/// the positivity ball. Reported for documentation, never asserted.
pub fn estimate_m_star(set: &GeometrySet, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let radius = 0.5 * set.eps_u;
    let h = 1e-2 * radius.max(1e-3);
    let mut total = 0.0;
    for k in 0..set.len() {
        let mut sup = [0.0f64; 5];
        for _ in 0..200 {
            let r0 = rng.gen_range(0.0..radius);
            let s0 = random_sphere_point(&mut rng, r0);
            // random symmetric direction, Frobenius-normalized
            let dir = {
                let d = random_sphere_point(&mut rng, 1.0);
                let mut e = [0.0; 9];
                for i in 0..9 {
                    e[i] = d[i] - sym3_identity()[i];
                }
                e
            };
            let eval = |t: f64, set: &GeometrySet| -> Option<f64> {
                let mut s = s0;
                for i in 0..9 {
                    s[i] += t * dir[i];
                }
                set.solve_weights(&s).ok().map(|w| w[k].max(0.0).sqrt())
            };
            // central difference quotients up to 4th order
            let pts: Vec<Option<f64>> = (-2..=2).map(|j| eval(j as f64 * h, set)).collect();
            if pts.iter().any(|p| p.is_none()) {
                continue;
            }
            let v: Vec<f64> = pts.into_iter().map(|p| p.unwrap()).collect();
            sup[0] = sup[0].max(v[2].abs());
            sup[1] = sup[1].max(((v[3] - v[1]) / (2.0 * h)).abs());
            sup[2] = sup[2].max(((v[3] - 2.0 * v[2] + v[1]) / (h * h)).abs());
            sup[3] = sup[3].max(((v[4] - 2.0 * v[3] + 2.0 * v[1] - v[0]) / (2.0 * h * h * h)).abs());
            sup[4] = sup[4]
                .max(((v[4] - 4.0 * v[3] + 6.0 * v[2] - 4.0 * v[1] + v[0]) / (h * h * h * h)).abs());
        }
        total += sup.iter().sum::<f64>();
    }
    total
}

/// Plain 6x6 LU with partial pivoting.
#[derive(Debug, Clone, Default)]
struct Lu6 {
    lu: [[f64; 6]; 6],
    piv: [usize; 6],
}

impl Lu6 {
    fn factor(mut a: [[f64; 6]; 6]) -> Option<Self> {
        let mut piv = [0usize; 6];
        for col in 0..6 {
            let (mut best, mut best_val) = (col, a[col][col].abs());
            for row in col + 1..6 {
                if a[row][col].abs() > best_val {
                    best = row;
                    best_val = a[row][col].abs();
                }
            }
            if best_val < 1e-12 {
                return None;
            }
            a.swap(col, best);
            piv[col] = best;
            for row in col + 1..6 {
                let f = a[row][col] / a[col][col];
                a[row][col] = f;
                for c2 in col + 1..6 {
                    a[row][c2] -= f * a[col][c2];
                }
            }
        }
        Some(Self { lu: a, piv })
    }

    fn solve(&self, mut b: [f64; 6]) -> [f64; 6] {
        for col in 0..6 {
            b.swap(col, self.piv[col]);
        }
        for row in 1..6 {
            for col in 0..row {
                b[row] -= self.lu[row][col] * b[col];
            }
        }
        for row in (0..6).rev() {
            for col in row + 1..6 {
                b[row] -= self.lu[row][col] * b[col];
            }
            b[row] /= self.lu[row][row];
        }
        b
    }
}
