//! Uniformly sampled functions and their discrete Sobolev norms. Fourier
//! transforms are unitary in the angular frequency, so the `τ = 0` norm is
//! the plain `L²` norm.

use std::f64::consts::PI;

use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{C64, ZERO};

pub const MIN_SAMPLES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid1D {
    pub origin: f64,
    pub step: f64,
    pub count: usize,
}

impl Grid1D {
    /// `count` points from `lo` to `hi` inclusive.
    pub fn spanning(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if count < MIN_SAMPLES {
            return Err(Error::Sampling(format!("need at least {MIN_SAMPLES} samples, got {count}")));
        }
        if !(hi > lo) {
            return Err(Error::Sampling(format!("empty interval [{lo}, {hi}]")));
        }
        Ok(Self { origin: lo, step: (hi - lo) / (count - 1) as f64, count })
    }

    pub fn point(&self, k: usize) -> f64 {
        self.origin + self.step * k as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|k| self.point(k))
    }

    fn validate(&self) -> Result<()> {
        if self.count < MIN_SAMPLES || !(self.step > 0.0) || !self.step.is_finite() {
            return Err(Error::Sampling(format!("invalid grid {self:?}")));
        }
        Ok(())
    }
}

fn check_finite(samples: &[C64]) -> Result<()> {
    match samples.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        Some(k) => Err(Error::Sampling(format!("sample {k} is not finite"))),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction1D {
    pub grid: Grid1D,
    pub samples: Vec<C64>,
}

impl SampledFunction1D {
    pub fn new(grid: Grid1D, samples: Vec<C64>) -> Result<Self> {
        grid.validate()?;
        if samples.len() != grid.count {
            return Err(Error::Shape(format!("{} samples for a grid of {}", samples.len(), grid.count)));
        }
        check_finite(&samples)?;
        Ok(Self { grid, samples })
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> Result<C64>) -> Result<Self> {
        let samples = grid.points().map(f).collect::<Result<Vec<_>>>()?;
        Self::new(grid, samples)
    }

    /// Whether the first or last sample is non-negligible, so the
    /// zero-padded transform sees a cut.
    pub fn touches_boundary(&self) -> bool {
        let peak = self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let ends = self.samples[0].norm().max(self.samples[self.samples.len() - 1].norm());
        ends > 1e-8 * peak.max(f64::MIN_POSITIVE)
    }
}

/// Samples `[i][j]` at `(λ_i, ξ_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction2D {
    pub lambda: Grid1D,
    pub xi: Grid1D,
    pub samples: Vec<Vec<C64>>,
}

impl SampledFunction2D {
    pub fn new(lambda: Grid1D, xi: Grid1D, samples: Vec<Vec<C64>>) -> Result<Self> {
        lambda.validate()?;
        xi.validate()?;
        if samples.len() != lambda.count || samples.iter().any(|r| r.len() != xi.count) {
            return Err(Error::Shape("sample array does not match the grids".to_string()));
        }
        samples.iter().try_for_each(|r| check_finite(r))?;
        Ok(Self { lambda, xi, samples })
    }

    pub fn from_fn(lambda: Grid1D, xi: Grid1D, f: impl Fn(f64, f64) -> Result<C64>) -> Result<Self> {
        let samples = lambda.points().map(|l| xi.points().map(|x| f(l, x)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
        Self::new(lambda, xi, samples)
    }
}

fn padded_len(count: usize, pad_factor: usize) -> usize {
    (count * pad_factor.max(1)).next_power_of_two()
}

/// Signed angular frequencies of a length-`p` transform with step `h`.
fn frequencies(p: usize, h: f64) -> Vec<f64> {
    (0..p)
        .map(|k| {
            let kk = if k <= p / 2 { k as f64 } else { k as f64 - p as f64 };
            2.0 * PI * kk / (p as f64 * h)
        })
        .collect()
}

/// Zero-padded DFT of the samples.
fn spectrum_1d(f: &SampledFunction1D, pad_factor: usize) -> Vec<C64> {
    let p = padded_len(f.grid.count, pad_factor);
    let mut buf = f.samples.clone();
    buf.resize(p, ZERO);
    FftPlanner::new().plan_fft_forward(p).process(&mut buf);
    buf
}

fn spectrum_2d(f: &SampledFunction2D, pad_factor: usize) -> (usize, usize, Vec<C64>) {
    let (pl, px) = (padded_len(f.lambda.count, pad_factor), padded_len(f.xi.count, pad_factor));
    let mut data = vec![ZERO; pl * px];
    for (i, row) in f.samples.iter().enumerate() {
        data[i * px..i * px + row.len()].copy_from_slice(row);
    }
    let mut planner = FftPlanner::new();
    let row_fft = planner.plan_fft_forward(px);
    for row in data.chunks_mut(px) {
        row_fft.process(row);
    }
    let col_fft = planner.plan_fft_forward(pl);
    let mut col = vec![ZERO; pl];
    for j in 0..px {
        for i in 0..pl {
            col[i] = data[i * px + j];
        }
        col_fft.process(&mut col);
        for i in 0..pl {
            data[i * px + j] = col[i];
        }
    }
    (pl, px, data)
}

/// Default zero-padding factor of the transforms.
pub const PAD_FACTOR: usize = 4;

/// `‖(1 + |ζ|)^τ f̂‖₂`.
pub fn sobolev_norm_1d(f: &SampledFunction1D, tau: f64) -> f64 {
    sobolev_norm_1d_padded(f, tau, PAD_FACTOR)
}

pub fn sobolev_norm_1d_padded(f: &SampledFunction1D, tau: f64, pad_factor: usize) -> f64 {
    let spec = spectrum_1d(f, pad_factor);
    let p = spec.len();
    let h = f.grid.step;
    let sum: f64 = frequencies(p, h).iter().zip(&spec).map(|(z, c)| (1.0 + z.abs()).powf(2.0 * tau) * c.norm_sqr()).sum();
    (sum * h / p as f64).sqrt()
}

/// `(∫ (1+|ξ'|)^{2ρ} (1+|λ'|+|ξ'|)^{2σ} |F̂|²)^{1/2}`.
pub fn mixed_sobolev_norm(f: &SampledFunction2D, rho: f64, sigma: f64) -> f64 {
    mixed_sobolev_norm_padded(f, rho, sigma, PAD_FACTOR)
}

pub fn mixed_sobolev_norm_padded(f: &SampledFunction2D, rho: f64, sigma: f64, pad_factor: usize) -> f64 {
    spectral_weighted_norm(f, pad_factor, |l, x| (1.0 + x.abs()).powf(2.0 * rho) * (1.0 + l.abs() + x.abs()).powf(2.0 * sigma))
}

fn spectral_weighted_norm(f: &SampledFunction2D, pad_factor: usize, weight: impl Fn(f64, f64) -> f64) -> f64 {
    let (pl, px, data) = spectrum_2d(f, pad_factor);
    let (hl, hx) = (f.lambda.step, f.xi.step);
    let fl = frequencies(pl, hl);
    let fx = frequencies(px, hx);
    let mut sum = 0.0;
    for i in 0..pl {
        for j in 0..px {
            sum += weight(fl[i], fx[j]) * data[i * px + j].norm_sqr();
        }
    }
    (sum * hl * hx / (pl * px) as f64).sqrt()
}

/// Derivative orders `(i, j)` with `i ≤ σ` and `i + j ≤ ρ + σ`.
pub fn derivative_orders(rho: usize, sigma: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..=sigma {
        for j in 0..=(rho + sigma - i) {
            out.push((i, j));
        }
    }
    out
}

/// `(Σ_{(i,j)} ‖∂_λ^i ∂_ξ^j F‖₂²)^{1/2}` through the spectrum.
pub fn derivative_norm_spectral(f: &SampledFunction2D, rho: usize, sigma: usize) -> f64 {
    let orders = derivative_orders(rho, sigma);
    spectral_weighted_norm(f, PAD_FACTOR, |l, x| orders.iter().map(|&(i, j)| l.powi(2 * i as i32) * x.powi(2 * j as i32)).sum())
}

/// Sixth-order central difference weights for the first derivative.
const D1: [f64; 7] = [-1.0 / 60.0, 3.0 / 20.0, -3.0 / 4.0, 0.0, 3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0];

fn diff_axis(data: &[Vec<C64>], along_lambda: bool, h: f64) -> Vec<Vec<C64>> {
    let (nl, nx) = (data.len(), data[0].len());
    let get = |i: isize, j: isize| -> C64 {
        if i < 0 || j < 0 || i as usize >= nl || j as usize >= nx {
            ZERO
        } else {
            data[i as usize][j as usize]
        }
    };
    (0..nl as isize)
        .map(|i| {
            (0..nx as isize)
                .map(|j| {
                    D1.iter()
                        .enumerate()
                        .map(|(k, w)| {
                            let o = k as isize - 3;
                            let v = if along_lambda { get(i + o, j) } else { get(i, j + o) };
                            v * *w
                        })
                        .sum::<C64>()
                        / h
                })
                .collect()
        })
        .collect()
}

/// Same quantity as [`derivative_norm_spectral`] by sixth-order finite
/// differences (samples outside the grid are zero).
pub fn derivative_norm_fd(f: &SampledFunction2D, rho: usize, sigma: usize) -> f64 {
    let (hl, hx) = (f.lambda.step, f.xi.step);
    let mut total = 0.0;
    let mut by_i = f.samples.clone();
    for i in 0..=sigma {
        let mut cur = by_i.clone();
        for j in 0..=(rho + sigma - i) {
            total += cur.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>() * hl * hx;
            if j < rho + sigma - i {
                cur = diff_axis(&cur, false, hx);
            }
        }
        by_i = diff_axis(&by_i, true, hl);
    }
    total.sqrt()
}
