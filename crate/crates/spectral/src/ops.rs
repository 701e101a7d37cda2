//! Fourier-multiplier operators and grid quadrature.
//!
//! Everything here acts exactly on the truncated series: derivatives multiply
//! by `i xi`, the fractional dissipation by `nu |xi|^{2a}`, the Helmholtz-Leray
//! projector by `Id - xi xi^T / |xi|^2`, and the inverse divergence by the
//! symmetric right inverse of the divergence on mean-free fields.

use crate::{Complex64, Component, Grid, Result, SpectralError, SpectralField};

/// Differential operators available through [`differentiate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiffOp {
    Grad,
    Div,
    Curl,
    Laplacian,
}

/// Mode selectors for [`freq_project`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FreqMode {
    /// Remove the spatial mean (projection onto nonzero modes).
    Nonzero,
    /// Keep only modes with `|xi| >= kappa`.
    GeqKappa(f64),
}

fn for_each_mode(grid: Grid, mut f: impl FnMut(usize, [i64; 3], f64)) {
    let n = grid.n;
    let mut lin = 0usize;
    for i in 0..n {
        let a = grid.wavenumber(i);
        for j in 0..n {
            let b = grid.wavenumber(j);
            for k in 0..n {
                let c = grid.wavenumber(k);
                let q = (a * a + b * b + c * c) as f64;
                f(lin, [a, b, c], q);
                lin += 1;
            }
        }
    }
}

/// `L^p` norm by grid quadrature (trapezoidal weights on the periodic grid),
/// `p = infinity` as the grid maximum. Exact for band-limited fields at `p = 2`.
pub fn lp_norm(f: &SpectralField, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(SpectralError::InvalidParameter(format!(
            "p must be >= 1, got {p}"
        )));
    }
    let n3 = f.grid().len() as f64;
    let phys = f.to_physical();
    let n3u = f.grid().len();
    // pointwise magnitude over components
    let mag2 = |idx: usize| -> f64 {
        (0..f.comps()).map(|c| phys[c * n3u + idx].norm_sqr()).sum()
    };
    if p.is_infinite() {
        let mut m: f64 = 0.0;
        for idx in 0..n3u {
            m = m.max(mag2(idx));
        }
        return Ok(m.sqrt());
    }
    let w = crate::TORUS_VOLUME / n3;
    let mut acc = 0.0;
    for idx in 0..n3u {
        acc += mag2(idx).powf(p / 2.0) * w;
    }
    Ok(acc.powf(1.0 / p))
}

/// Exact spectral derivative.
pub fn differentiate(f: &SpectralField, op: DiffOp) -> Result<SpectralField> {
    let grid = f.grid();
    let n3 = grid.len();
    match op {
        DiffOp::Grad => {
            if f.comps() != 1 {
                return Err(SpectralError::ShapeMismatch { expected: "scalar", got: f.comps() });
            }
            let mut out = SpectralField::zeros(grid, Component::Vector);
            for_each_mode(grid, |lin, xi, _| {
                let v = f.data()[lin];
                for a in 0..3 {
                    out.data_mut()[a * n3 + lin] = Complex64::new(0.0, xi[a] as f64) * v;
                }
            });
            out.set_real(f.is_real());
            Ok(out)
        }
        DiffOp::Div => {
            if f.comps() != 3 {
                return Err(SpectralError::ShapeMismatch { expected: "vector", got: f.comps() });
            }
            let mut out = SpectralField::zeros(grid, Component::Scalar);
            for_each_mode(grid, |lin, xi, _| {
                let mut acc = Complex64::default();
                for a in 0..3 {
                    acc += Complex64::new(0.0, xi[a] as f64) * f.data()[a * n3 + lin];
                }
                out.data_mut()[lin] = acc;
            });
            out.set_real(f.is_real());
            Ok(out)
        }
        DiffOp::Curl => {
            if f.comps() != 3 {
                return Err(SpectralError::ShapeMismatch { expected: "vector", got: f.comps() });
            }
            let mut out = SpectralField::zeros(grid, Component::Vector);
            for_each_mode(grid, |lin, xi, _| {
                let u = [f.data()[lin], f.data()[n3 + lin], f.data()[2 * n3 + lin]];
                let ix = [
                    Complex64::new(0.0, xi[0] as f64),
                    Complex64::new(0.0, xi[1] as f64),
                    Complex64::new(0.0, xi[2] as f64),
                ];
                out.data_mut()[lin] = ix[1] * u[2] - ix[2] * u[1];
                out.data_mut()[n3 + lin] = ix[2] * u[0] - ix[0] * u[2];
                out.data_mut()[2 * n3 + lin] = ix[0] * u[1] - ix[1] * u[0];
            });
            out.set_real(f.is_real());
            Ok(out)
        }
        DiffOp::Laplacian => {
            let mut out = f.clone();
            for c in 0..f.comps() {
                let slab = &mut out.data_mut()[c * n3..(c + 1) * n3];
                for_each_mode(grid, |lin, _, q| {
                    slab[lin] *= -q;
                });
            }
            Ok(out)
        }
    }
}

/// Divergence of a rank-2 tensor field, row contraction: `(div T)_a = d_b T_{ab}`.
pub fn tensor_divergence(t: &SpectralField) -> Result<SpectralField> {
    if t.comps() != 9 {
        return Err(SpectralError::ShapeMismatch { expected: "tensor", got: t.comps() });
    }
    let grid = t.grid();
    let n3 = grid.len();
    let mut out = SpectralField::zeros(grid, Component::Vector);
    for_each_mode(grid, |lin, xi, _| {
        for a in 0..3 {
            let mut acc = Complex64::default();
            for b in 0..3 {
                acc += Complex64::new(0.0, xi[b] as f64) * t.data()[(3 * a + b) * n3 + lin];
            }
            out.data_mut()[a * n3 + lin] = acc;
        }
    });
    out.set_real(t.is_real());
    Ok(out)
}

/// `nu (-Delta)^alpha`: multiply the coefficient at `xi` by `nu |xi|^{2 alpha}`.
pub fn fractional_laplacian(f: &SpectralField, alpha: f64, nu: f64) -> Result<SpectralField> {
    if !(1.0..2.0).contains(&alpha) {
        return Err(SpectralError::InvalidParameter(format!(
            "dissipation exponent must lie in [1,2), got {alpha}"
        )));
    }
    let grid = f.grid();
    let n3 = grid.len();
    let mut out = f.clone();
    let mut mult = vec![0.0f64; n3];
    for_each_mode(grid, |lin, _, q| {
        mult[lin] = if q == 0.0 { 0.0 } else { nu * q.powf(alpha) };
    });
    for c in 0..f.comps() {
        let slab = &mut out.data_mut()[c * n3..(c + 1) * n3];
        for (v, m) in slab.iter_mut().zip(mult.iter()) {
            *v *= *m;
        }
    }
    Ok(out)
}

/// Helmholtz-Leray projection `Id - grad Delta^{-1} div`; the mean mode passes through.
pub fn leray_project(v: &SpectralField) -> Result<SpectralField> {
    if v.comps() != 3 {
        return Err(SpectralError::ShapeMismatch { expected: "vector", got: v.comps() });
    }
    let grid = v.grid();
    let n3 = grid.len();
    let mut out = v.clone();
    for_each_mode(grid, |lin, xi, q| {
        if q == 0.0 {
            return;
        }
        let u = [v.data()[lin], v.data()[n3 + lin], v.data()[2 * n3 + lin]];
        let dot = (0..3).map(|a| xi[a] as f64 * u[a]).sum::<Complex64>();
        for a in 0..3 {
            out.data_mut()[a * n3 + lin] = u[a] - (xi[a] as f64 / q) * dot;
        }
    });
    Ok(out)
}

/// Symmetric trace-free right inverse of the divergence on mean-free vectors.
pub fn inverse_divergence(v: &SpectralField) -> Result<SpectralField> {
    if v.comps() != 3 {
        return Err(SpectralError::ShapeMismatch { expected: "vector", got: v.comps() });
    }
    let mean: f64 = v.mean().iter().map(|m| m.norm()).sum();
    let scale = lp_norm(v, 2.0)?;
    if mean > 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(SpectralError::PreconditionViolation(format!(
            "inverse divergence needs a mean-free field (|mean| = {mean:.3e}, |v|_2 = {scale:.3e})"
        )));
    }
    let grid = v.grid();
    let n3 = grid.len();
    let mut out = SpectralField::zeros(grid, Component::Tensor);
    for_each_mode(grid, |lin, xi, q| {
        if q == 0.0 {
            return;
        }
        let u = [v.data()[lin], v.data()[n3 + lin], v.data()[2 * n3 + lin]];
        let xf = [xi[0] as f64, xi[1] as f64, xi[2] as f64];
        let dot = (0..3).map(|a| xf[a] * u[a]).sum::<Complex64>();
        for a in 0..3 {
            for b in 0..3 {
                let mut val = Complex64::new(0.0, -1.0) * (xf[a] * u[b] + xf[b] * u[a]) / q;
                let delta = if a == b { 1.0 } else { 0.0 };
                val += Complex64::new(0.0, 0.5) * (delta + xf[a] * xf[b] / q) * dot / q;
                out.data_mut()[(3 * a + b) * n3 + lin] = val;
            }
        }
    });
    out.set_real(v.is_real());
    Ok(out)
}

/// Frequency projection: kill the zero mode, or keep `|xi| >= kappa`.
pub fn freq_project(f: &SpectralField, mode: FreqMode) -> Result<SpectralField> {
    let mut out = f.clone();
    match mode {
        FreqMode::Nonzero => out.remove_mean(),
        FreqMode::GeqKappa(kappa) => {
            if kappa < 0.0 {
                return Err(SpectralError::InvalidParameter(format!(
                    "kappa must be nonnegative, got {kappa}"
                )));
            }
            let k2 = kappa * kappa;
            out.retain_modes(|xi| {
                let q = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]) as f64;
                q >= k2
            });
        }
    }
    Ok(out)
}

/// Dissipation semigroup `exp(-t nu (-Delta)^alpha)`.
pub fn semigroup_apply(f: &SpectralField, t: f64, alpha: f64, nu: f64) -> Result<SpectralField> {
    if t < 0.0 {
        return Err(SpectralError::InvalidParameter(format!(
            "semigroup time must be nonnegative, got {t}"
        )));
    }
    let grid = f.grid();
    let n3 = grid.len();
    let mut mult = vec![0.0f64; n3];
    for_each_mode(grid, |lin, _, q| {
        mult[lin] = (-t * nu * q.powf(alpha)).exp();
    });
    let mut out = f.clone();
    for c in 0..f.comps() {
        let slab = &mut out.data_mut()[c * n3..(c + 1) * n3];
        for (v, m) in slab.iter_mut().zip(mult.iter()) {
            *v *= *m;
        }
    }
    Ok(out)
}

/// Axes a mollifier can act on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MollifyAxes {
    Space,
    Time,
    Both,
}

/// Fourier transform of the normalized compactly supported bump at scale `len`,
/// evaluated at integer frequency `xi` (per axis).
pub fn bump_symbol(len: f64, xi: f64) -> f64 {
    // one-dimensional normalized bump on [-len, len], transform by quadrature
    let m = 256;
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..m {
        let s = -1.0 + (2.0 * i as f64 + 1.0) / m as f64;
        let w = (-1.0 / (1.0 - s * s)).exp();
        num += w * (xi * len * s).cos();
        den += w;
    }
    num / den
}

/// Spatial mollification by a product of per-axis normalized bumps at scale
/// `len`; preserves the mean exactly.
pub fn mollify(f: &SpectralField, len: f64, axes: MollifyAxes) -> Result<SpectralField> {
    if !(len > 0.0 && len <= 1.0) {
        return Err(SpectralError::InvalidParameter(format!(
            "mollification scale must lie in (0,1], got {len}"
        )));
    }
    match axes {
        MollifyAxes::Space | MollifyAxes::Both => {}
        MollifyAxes::Time => {
            return Err(SpectralError::InvalidParameter(
                "time mollification acts on a TimeSeries, use mollify_series".into(),
            ))
        }
    }
    let grid = f.grid();
    let n3 = grid.len();
    let mut table = Vec::with_capacity(grid.n);
    for i in 0..grid.n {
        let xi = grid.wavenumber(i);
        table.push(bump_symbol(len, xi as f64));
    }
    let mut out = f.clone();
    for c in 0..f.comps() {
        let slab = &mut out.data_mut()[c * n3..(c + 1) * n3];
        let n = grid.n;
        let mut lin = 0usize;
        for i in 0..n {
            for j in 0..n {
                let pij = table[i] * table[j];
                for k in 0..n {
                    slab[lin] *= pij * table[k];
                    lin += 1;
                }
            }
        }
    }
    Ok(out)
}

/// Mollify a time series along space, time, or both.
pub fn mollify_series(series: &TimeSeriesRef<'_>, len: f64, axes: MollifyAxes) -> Result<crate::TimeSeries> {
    if !(len > 0.0 && len <= 1.0) {
        return Err(SpectralError::InvalidParameter(format!(
            "mollification scale must lie in (0,1], got {len}"
        )));
    }
    let m = series.frames.len();
    let mut frames: Vec<SpectralField> = series.frames.to_vec();
    if matches!(axes, MollifyAxes::Space | MollifyAxes::Both) {
        for fr in frames.iter_mut() {
            *fr = mollify(fr, len, MollifyAxes::Space)?;
        }
    }
    if matches!(axes, MollifyAxes::Time | MollifyAxes::Both) && m > 1 {
        let dt = series.times[1] - series.times[0];
        // discrete normalized bump kernel of half-width len
        let halfw = (len / dt).ceil() as isize;
        let mut kernel = Vec::new();
        let mut total = 0.0;
        for o in -halfw..=halfw {
            let s = o as f64 * dt / len;
            let w = if s.abs() < 1.0 { (-1.0 / (1.0 - s * s)).exp() } else { 0.0 };
            kernel.push(w);
            total += w;
        }
        for k in kernel.iter_mut() {
            *k /= total;
        }
        let src = frames.clone();
        for (i, fr) in frames.iter_mut().enumerate() {
            let mut acc = SpectralField::zeros(src[0].grid(), src[0].component_kind());
            for (oi, w) in kernel.iter().enumerate() {
                let off = oi as isize - halfw;
                // reflect at the ends of [0, T]
                let mut j = i as isize + off;
                if j < 0 {
                    j = -j;
                }
                if j >= m as isize {
                    j = 2 * (m as isize - 1) - j;
                }
                acc.axpy(*w, &src[j as usize]);
            }
            *fr = acc;
        }
    }
    Ok(crate::TimeSeries::new(series.times.to_vec(), frames))
}

/// Borrowed view of a time series for operators that do not consume it.
pub struct TimeSeriesRef<'a> {
    pub times: &'a [f64],
    pub frames: &'a [SpectralField],
}

impl<'a> From<&'a crate::TimeSeries> for TimeSeriesRef<'a> {
    fn from(ts: &'a crate::TimeSeries) -> Self {
        Self { times: &ts.times, frames: &ts.frames }
    }
}

/// Relative L2 residual between two fields, normalized by the larger norm.
pub fn relative_l2(a: &SpectralField, b: &SpectralField) -> f64 {
    let diff = a - b;
    let na = a.l2_norm_parseval();
    let nb = b.l2_norm_parseval();
    let scale = na.max(nb).max(f64::MIN_POSITIVE);
    diff.l2_norm_parseval() / scale
}
