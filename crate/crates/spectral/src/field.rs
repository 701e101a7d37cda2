use std::collections::HashMap;
use std::ops::{Add, Mul, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use crate::{Complex64, Fft3, Grid, Result, SpectralError};

/// Component counts a field can carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    Scalar,
    Vector,
    Tensor,
}

impl Component {
    pub fn count(self) -> usize {
        match self {
            Component::Scalar => 1,
            Component::Vector => 3,
            Component::Tensor => 9,
        }
    }

    pub fn from_count(c: usize) -> Result<Self> {
        match c {
            1 => Ok(Component::Scalar),
            3 => Ok(Component::Vector),
            9 => Ok(Component::Tensor),
            _ => Err(SpectralError::InvalidParameter(format!(
                "component count must be 1, 3 or 9, got {c}"
            ))),
        }
    }
}

fn engine(n: usize) -> Arc<Fft3> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Fft3>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    map.entry(n).or_insert_with(|| Arc::new(Fft3::new(n))).clone()
}

/// Truncated Fourier series of a scalar/vector/rank-2 tensor field on `T^3`.
///
/// Coefficients are stored component-major with the usual FFT index folding;
/// `data[c*n^3 + lin]` is the coefficient of `e^{i xi . x}` for the frequency
/// `xi` obtained by folding `lin`. The `real` flag records that Hermitian
/// symmetry is maintained, so physical samples are real.
#[derive(Debug, Clone)]
pub struct SpectralField {
    grid: Grid,
    comps: usize,
    real: bool,
    data: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: Grid, comps: Component) -> Self {
        let c = comps.count();
        Self {
            grid,
            comps: c,
            real: true,
            data: vec![Complex64::default(); c * grid.len()],
        }
    }

    pub fn constant(grid: Grid, values: &[f64]) -> Self {
        let mut f = Self::zeros(grid, Component::from_count(values.len()).expect("component count"));
        for (c, v) in values.iter().enumerate() {
            f.data[c * grid.len()] = Complex64::new(*v, 0.0);
        }
        f
    }

    /// Build from physical samples (row-major `(i*n + j)*n + k` per component).
    pub fn from_physical(grid: Grid, comps: Component, phys: &[f64]) -> Self {
        let c = comps.count();
        let n3 = grid.len();
        assert_eq!(phys.len(), c * n3, "physical sample length mismatch");
        let mut data: Vec<Complex64> = phys.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let eng = engine(grid.n);
        let scale = 1.0 / n3 as f64;
        for chunk in data.chunks_mut(n3) {
            eng.forward(chunk);
            apply_origin_phase(grid, chunk);
            for v in chunk.iter_mut() {
                *v *= scale;
            }
        }
        let mut f = Self { grid, comps: c, real: true, data };
        f.enforce_real();
        f
    }

    pub fn from_physical_complex(grid: Grid, comps: Component, phys: Vec<Complex64>) -> Self {
        let c = comps.count();
        let n3 = grid.len();
        assert_eq!(phys.len(), c * n3);
        let mut data = phys;
        let eng = engine(grid.n);
        let scale = 1.0 / n3 as f64;
        for chunk in data.chunks_mut(n3) {
            eng.forward(chunk);
            apply_origin_phase(grid, chunk);
            for v in chunk.iter_mut() {
                *v *= scale;
            }
        }
        Self { grid, comps: c, real: false, data }
    }

    /// Physical samples of one component at the collocation points.
    pub fn to_physical(&self) -> Vec<Complex64> {
        let n3 = self.grid.len();
        let eng = engine(self.grid.n);
        let mut out = self.data.clone();
        for chunk in out.chunks_mut(n3) {
            apply_origin_phase(self.grid, chunk);
            eng.inverse(chunk);
        }
        out
    }

    /// Real parts of the physical samples (valid for real fields).
    pub fn to_physical_real(&self) -> Vec<f64> {
        self.to_physical().iter().map(|v| v.re).collect()
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn comps(&self) -> usize {
        self.comps
    }

    pub fn component_kind(&self) -> Component {
        Component::from_count(self.comps).unwrap()
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn set_real(&mut self, real: bool) {
        self.real = real;
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        let n3 = self.grid.len();
        &self.data[c * n3..(c + 1) * n3]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [Complex64] {
        let n3 = self.grid.len();
        &mut self.data[c * n3..(c + 1) * n3]
    }

    /// Coefficient of `e^{i xi . x}` in component `c`.
    pub fn coeff(&self, c: usize, xi: [i64; 3]) -> Complex64 {
        self.data[c * self.grid.len() + self.grid.index_of(xi)]
    }

    pub fn set_coeff(&mut self, c: usize, xi: [i64; 3], v: Complex64) {
        let idx = c * self.grid.len() + self.grid.index_of(xi);
        self.data[idx] = v;
    }

    /// Mean value (zero mode) of each component.
    pub fn mean(&self) -> Vec<Complex64> {
        (0..self.comps).map(|c| self.coeff(c, [0, 0, 0])).collect()
    }

    pub fn remove_mean(&mut self) {
        let n3 = self.grid.len();
        for c in 0..self.comps {
            self.data[c * n3] = Complex64::default();
        }
    }

    /// Project onto Hermitian-symmetric coefficients (real physical samples).
    pub fn enforce_real(&mut self) {
        let n = self.grid.n as i64;
        let n3 = self.grid.len();
        let grid = self.grid;
        for c in 0..self.comps {
            let slab = &mut self.data[c * n3..(c + 1) * n3];
            for i in 0..grid.n {
                for j in 0..grid.n {
                    for k in 0..grid.n {
                        let xi = [grid.wavenumber(i), grid.wavenumber(j), grid.wavenumber(k)];
                        let mi = [
                            (-xi[0]).rem_euclid(n) as usize,
                            (-xi[1]).rem_euclid(n) as usize,
                            (-xi[2]).rem_euclid(n) as usize,
                        ];
                        let a = (i * grid.n + j) * grid.n + k;
                        let b = (mi[0] * grid.n + mi[1]) * grid.n + mi[2];
                        if a <= b {
                            let va = slab[a];
                            let vb = slab[b];
                            let sym = 0.5 * (va + vb.conj());
                            slab[a] = sym;
                            slab[b] = sym.conj();
                        }
                    }
                }
            }
        }
        self.real = true;
    }

    /// Zero every mode with any |xi_m| above the two-thirds cutoff.
    pub fn dealias(&mut self) {
        let cut = self.grid.dealias_cutoff() as i64;
        self.retain_modes(|xi| xi.iter().all(|&v| v.abs() <= cut));
    }

    /// Zero every mode with Euclidean norm above `bound`.
    pub fn truncate_band(&mut self, bound: f64) {
        let b2 = bound * bound;
        self.retain_modes(|xi| {
            let q = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]) as f64;
            q <= b2
        });
    }

    pub fn retain_modes<F: Fn([i64; 3]) -> bool>(&mut self, keep: F) {
        let grid = self.grid;
        let n3 = grid.len();
        for c in 0..self.comps {
            let slab = &mut self.data[c * n3..(c + 1) * n3];
            let mut lin = 0usize;
            for i in 0..grid.n {
                let xi0 = grid.wavenumber(i);
                for j in 0..grid.n {
                    let xi1 = grid.wavenumber(j);
                    for k in 0..grid.n {
                        let xi2 = grid.wavenumber(k);
                        if !keep([xi0, xi1, xi2]) {
                            slab[lin] = Complex64::default();
                        }
                        lin += 1;
                    }
                }
            }
        }
    }

    /// In-place `self += scale * other`.
    pub fn axpy(&mut self, scale: f64, other: &SpectralField) {
        assert_eq!(self.grid, other.grid);
        assert_eq!(self.comps, other.comps);
        for (a, b) in self.data.iter_mut().zip(other.data.iter()) {
            *a += scale * b;
        }
        self.real = self.real && other.real;
    }

    pub fn scale(&mut self, s: f64) {
        for v in self.data.iter_mut() {
            *v *= s;
        }
    }

    /// Pointwise product on the collocation grid (no dealiasing).
    pub fn mul_pointwise(&self, other: &SpectralField) -> SpectralField {
        product(self, other, false)
    }

    /// Pointwise product followed by the two-thirds dealias mask.
    pub fn mul_dealiased(&self, other: &SpectralField) -> SpectralField {
        product(self, other, true)
    }

    /// Tensor product of two vector fields: component `3*a + b` is `u_a v_b`.
    pub fn outer(&self, other: &SpectralField) -> SpectralField {
        assert_eq!(self.comps, 3);
        assert_eq!(other.comps, 3);
        let n3 = self.grid.len();
        let up = self.to_physical();
        let vp = other.to_physical();
        let mut phys = vec![Complex64::default(); 9 * n3];
        for a in 0..3 {
            for b in 0..3 {
                let dst = &mut phys[(3 * a + b) * n3..(3 * a + b + 1) * n3];
                for (idx, d) in dst.iter_mut().enumerate() {
                    *d = up[a * n3 + idx] * vp[b * n3 + idx];
                }
            }
        }
        let mut out = SpectralField::from_physical_complex(self.grid, Component::Tensor, phys);
        if self.real && other.real {
            out.enforce_real();
        }
        out
    }

    /// Remove the pointwise trace from a rank-2 tensor field.
    pub fn traceless(&self) -> SpectralField {
        assert_eq!(self.comps, 9);
        let n3 = self.grid.len();
        let mut out = self.clone();
        for idx in 0..n3 {
            let tr = (self.data[idx] + self.data[4 * n3 + idx] + self.data[8 * n3 + idx]) / 3.0;
            out.data[idx] -= tr;
            out.data[4 * n3 + idx] -= tr;
            out.data[8 * n3 + idx] -= tr;
        }
        out
    }

    /// L2 norm from the coefficients (Parseval).
    pub fn l2_norm_parseval(&self) -> f64 {
        let sum: f64 = self.data.iter().map(|v| v.norm_sqr()).sum();
        (crate::TORUS_VOLUME * sum).sqrt()
    }
}

fn apply_origin_phase(grid: Grid, slab: &mut [Complex64]) {
    // the collocation origin sits at x = -pi, contributing (-1)^(i+j+k)
    let n = grid.n;
    let mut lin = 0usize;
    for i in 0..n {
        for j in 0..n {
            let base = (i + j) % 2;
            for k in 0..n {
                if (base + k) % 2 == 1 {
                    slab[lin] = -slab[lin];
                }
                lin += 1;
            }
        }
    }
}

fn product(a: &SpectralField, b: &SpectralField, dealias: bool) -> SpectralField {
    assert_eq!(a.grid, b.grid, "product on mismatched grids");
    let n3 = a.grid.len();
    let ap = a.to_physical();
    let bp = b.to_physical();
    let (big, small, bp_ref) = if a.comps >= b.comps {
        (a, b, (&ap, &bp))
    } else {
        (b, a, (&bp, &ap))
    };
    assert!(
        small.comps == 1 || small.comps == big.comps,
        "product needs a scalar factor or equal shapes"
    );
    let (big_phys, small_phys) = bp_ref;
    let mut phys = vec![Complex64::default(); big.comps * n3];
    for c in 0..big.comps {
        let sc = if small.comps == 1 { 0 } else { c };
        for idx in 0..n3 {
            phys[c * n3 + idx] = big_phys[c * n3 + idx] * small_phys[sc * n3 + idx];
        }
    }
    let mut out =
        SpectralField::from_physical_complex(a.grid, Component::from_count(big.comps).unwrap(), phys);
    if dealias {
        out.dealias();
    }
    if a.real && b.real {
        out.enforce_real();
    }
    out
}

impl Add for &SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: &SpectralField) -> SpectralField {
        let mut out = self.clone();
        out.axpy(1.0, rhs);
        out
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: &SpectralField) -> SpectralField {
        let mut out = self.clone();
        out.axpy(-1.0, rhs);
        out
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;
    fn mul(self, rhs: f64) -> SpectralField {
        let mut out = self.clone();
        out.scale(rhs);
        out
    }
}

/// Uniformly time-sampled sequence of spatial fields on `[0, T]`.
#[derive(Debug, Clone)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub frames: Vec<SpectralField>,
}

impl TimeSeries {
    pub fn new(times: Vec<f64>, frames: Vec<SpectralField>) -> Self {
        assert_eq!(times.len(), frames.len());
        Self { times, frames }
    }

    pub fn uniform(period: f64, frames: Vec<SpectralField>) -> Self {
        let m = frames.len();
        let times = if m == 1 {
            vec![0.0]
        } else {
            (0..m).map(|i| period * i as f64 / (m - 1) as f64).collect()
        };
        Self { times, frames }
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    /// 4th-order finite-difference time derivative of the sample sequence.
    ///
    /// Centered in the interior, one-sided 5-point stencils at the two ends.
    /// Needs at least five samples.
    pub fn time_derivative(&self) -> TimeSeries {
        let m = self.len();
        assert!(m >= 5, "4th-order time differencing needs >= 5 samples");
        let dt = self.times[1] - self.times[0];
        let mut frames = Vec::with_capacity(m);
        for i in 0..m {
            let mut out = SpectralField::zeros(self.frames[0].grid(), self.frames[0].component_kind());
            // window start and in-window position for a 5-point stencil
            let start = i.saturating_sub(2).min(m - 5);
            let pos = i - start;
            for (off, w) in fd5_weights(pos).iter().enumerate() {
                if *w != 0.0 {
                    out.axpy(w / dt, &self.frames[start + off]);
                }
            }
            frames.push(out);
        }
        TimeSeries::new(self.times.clone(), frames)
    }

    /// Trapezoidal time quadrature of per-frame values.
    pub fn integrate_in_time(times: &[f64], values: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 1..times.len() {
            acc += 0.5 * (values[i] + values[i - 1]) * (times[i] - times[i - 1]);
        }
        acc
    }
}

/// 4th-order first-derivative weights on a 5-point unit-spaced window,
/// evaluated at in-window position `pos` (0..=4), in units of 1/dt.
pub fn fd5_weights(pos: usize) -> [f64; 5] {
    match pos {
        0 => [-25.0 / 12.0, 4.0, -3.0, 4.0 / 3.0, -0.25],
        1 => [-0.25, -5.0 / 6.0, 1.5, -0.5, 1.0 / 12.0],
        2 => [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0],
        3 => [-1.0 / 12.0, 0.5, -1.5, 5.0 / 6.0, 0.25],
        4 => [0.25, -4.0 / 3.0, 3.0, -4.0, 25.0 / 12.0],
        _ => panic!("stencil position out of range"),
    }
}
