//! Uniform periodic discretization of the circle `(-π, π]`.
//!
//! All integrals are taken against the probability measure `dσ = ds / 2π`, so
//! `∫ 1 dσ = 1` and every constant function `c` has `‖c‖_p = |c|`. Nodes are
//! `s_j = -π + 2πj/n` for `j = 0..n`; the node `s = 0` sits at index `n/2`.
//!
//! Fourier coefficients follow `f(s) = Σ_k c_k e^{iks}` with wavenumbers
//! `k ∈ [-n/2, n/2)`. The Nyquist mode `k = -n/2` is kept by the transforms but
//! dropped by [`derivative`] and [`antiderivative`].

use std::cell::RefCell;
use std::f64::consts::PI;
use std::fmt::Debug;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Sub};

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Grid size used when callers have no opinion.
pub const DEFAULT_GRID: usize = 512;

/// Uniform grid on `(-π, π]` with an even number of nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Grid {
    n: usize,
}

impl Grid {
    pub fn new(n_nodes: usize) -> Result<Self> {
        if n_nodes < 8 || !n_nodes.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "node count must be even and at least 8, got {n_nodes}"
            )));
        }
        Ok(Self { n: n_nodes })
    }

    pub fn n_nodes(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        -PI + 2.0 * PI * j as f64 / self.n as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |j| self.node(j))
    }

    /// Index of the node `s = 0`.
    pub fn origin_index(&self) -> usize {
        self.n / 2
    }

    /// Samples `f` at every node.
    pub fn sample<T: Scalar>(&self, f: impl Fn(f64) -> T) -> Result<GridFunction<T>> {
        GridFunction::new(*self, self.nodes().map(f).collect())
    }
}

/// Scalars a [`GridFunction`] can hold: `f64` or `Complex64`.
pub trait Scalar:
    Copy
    + Debug
    + Send
    + Sync
    + PartialEq
    + Sum
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    const IS_REAL: bool;
    fn modulus(self) -> f64;
    fn is_finite(self) -> bool;
    fn to_complex(self) -> Complex64;
    /// Real part for `f64`, identity for `Complex64`.
    fn from_complex(z: Complex64) -> Self;
}

impl Scalar for f64 {
    const IS_REAL: bool = true;
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
    fn from_complex(z: Complex64) -> Self {
        z.re
    }
}

impl Scalar for Complex64 {
    const IS_REAL: bool = false;
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn to_complex(self) -> Complex64 {
        self
    }
    fn from_complex(z: Complex64) -> Self {
        z
    }
}

/// Samples of a 2π-periodic function on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction<T> {
    grid: Grid,
    values: Vec<T>,
}

pub type RealFunction = GridFunction<f64>;
pub type ComplexFunction = GridFunction<Complex64>;

impl<T: Scalar> GridFunction<T> {
    pub fn new(grid: Grid, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.n_nodes() {
            return Err(Error::InvalidInput(format!(
                "expected {} samples, got {}",
                grid.n_nodes(),
                values.len()
            )));
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite sample at node {j}")));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Pointwise map; fails if the result is not finite.
    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> Result<GridFunction<U>> {
        GridFunction::new(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| v * c).collect(),
        }
    }

    pub fn to_complex(&self) -> ComplexFunction {
        GridFunction {
            grid: self.grid,
            values: self.values.iter().map(|v| v.to_complex()).collect(),
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.modulus()).fold(0.0, f64::max)
    }

    /// `max_j |f_j - g_j|`; panics if the grids differ.
    pub fn sup_distance(&self, other: &Self) -> f64 {
        assert_eq!(self.grid, other.grid, "grid mismatch");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| (a - b).modulus())
            .fold(0.0, f64::max)
    }
}

impl RealFunction {
    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Truncated Fourier coefficients `c_k`, `k = -K..=K`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierVector {
    cutoff: usize,
    coeffs: Vec<Complex64>,
}

impl FourierVector {
    /// `coeffs[i]` is the coefficient of `k = i - K`.
    pub fn new(cutoff: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != 2 * cutoff + 1 {
            return Err(Error::InvalidInput(format!(
                "cutoff {cutoff} needs {} coefficients, got {}",
                2 * cutoff + 1,
                coeffs.len()
            )));
        }
        Ok(Self { cutoff, coeffs })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `e^{iks}`; zero outside `-K..=K`.
    pub fn coeff(&self, k: i64) -> Complex64 {
        let idx = k + self.cutoff as i64;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[idx as usize]
        }
    }

    /// `Σ_k |c_k|²`.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Wavenumber of FFT slot `idx` on an `n`-point grid, in `[-n/2, n/2)`.
pub(crate) fn wavenumber(idx: usize, n: usize) -> i64 {
    if idx < n / 2 {
        idx as i64
    } else {
        idx as i64 - n as i64
    }
}

/// Fourier coefficients of the samples, in FFT slot order.
pub(crate) fn spectrum(values: &[Complex64]) -> Vec<Complex64> {
    let n = values.len();
    let mut buf = values.to_vec();
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n).process(&mut buf));
    let inv_n = 1.0 / n as f64;
    // s_0 = -π contributes the factor (-1)^k.
    for (idx, c) in buf.iter_mut().enumerate() {
        let sign = if idx % 2 == 0 { inv_n } else { -inv_n };
        *c *= sign;
    }
    buf
}

/// Inverse of [`spectrum`].
pub(crate) fn synthesize(mut coeffs: Vec<Complex64>) -> Vec<Complex64> {
    let n = coeffs.len();
    for (idx, c) in coeffs.iter_mut().enumerate() {
        if idx % 2 == 1 {
            *c = -*c;
        }
    }
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(n).process(&mut coeffs));
    coeffs
}

/// Applies the Fourier multiplier `m(k)` to the samples.
pub(crate) fn apply_multiplier(values: &[Complex64], m: impl Fn(i64) -> Complex64) -> Vec<Complex64> {
    let n = values.len();
    let mut c = spectrum(values);
    for (idx, ck) in c.iter_mut().enumerate() {
        *ck *= m(wavenumber(idx, n));
    }
    synthesize(c)
}

/// `∫ f dσ` by the rectangle rule, exact for trigonometric polynomials of
/// degree below the node count.
pub fn integrate<T: Scalar>(f: &GridFunction<T>) -> T {
    f.values.iter().copied().sum::<T>() / f.len() as f64
}

/// `L^p(dσ)` norm for `p ≥ 1` (including `p = ∞`), or the `p = -2` convention
/// `(∫ f^{-2} dσ)^{-1/2}` for real functions without zeros.
pub fn lp_norm<T: Scalar>(f: &GridFunction<T>, p: f64) -> Result<f64> {
    if p == -2.0 {
        if !T::IS_REAL {
            return Err(Error::InvalidInput("p = -2 requires a real function".into()));
        }
        if let Some(j) = f.values.iter().position(|v| v.modulus() == 0.0) {
            return Err(Error::InvalidInput(format!(
                "p = -2 norm of a function vanishing at node {j}: u^-2 is not integrable"
            )));
        }
        let m = f.values.iter().map(|v| v.modulus().powi(-2)).sum::<f64>() / f.len() as f64;
        return Ok(m.powf(-0.5));
    }
    if !(p >= 1.0) {
        return Err(Error::InvalidInput(format!("norm exponent must be >= 1 or -2, got {p}")));
    }
    if p.is_infinite() {
        return Ok(f.sup_norm());
    }
    let m = f.values.iter().map(|v| v.modulus().powf(p)).sum::<f64>() / f.len() as f64;
    Ok(m.powf(1.0 / p))
}

/// Spectral derivative `f'`.
///
/// Accurate only when the Fourier tail of `f` near the Nyquist mode is
/// negligible; this is not checked.
pub fn derivative<T: Scalar>(f: &GridFunction<T>) -> GridFunction<T> {
    let n = f.len() as i64;
    let z: Vec<Complex64> = f.values.iter().map(|v| v.to_complex()).collect();
    let d = apply_multiplier(&z, |k| {
        if k == -n / 2 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, k as f64)
        }
    });
    GridFunction {
        grid: f.grid,
        values: d.into_iter().map(T::from_complex).collect(),
    }
}

/// Spectral second derivative `f''` (Nyquist mode dropped).
pub fn second_derivative(f: &RealFunction) -> RealFunction {
    let n = f.len() as i64;
    let z: Vec<Complex64> = f.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let d = apply_multiplier(&z, |k| {
        if k == -n / 2 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(-(k * k) as f64, 0.0)
        }
    });
    GridFunction {
        grid: f.grid,
        values: d.into_iter().map(|z| z.re).collect(),
    }
}

/// Second derivative of a real `f` with `f(s + 2π) = cos(2πt) f(s)`, for
/// `t ∈ {0, 1/2}`: the periodic factor `e^{-its} f` is differentiated
/// spectrally. With `t = 1/2` the modes `k + 1/2` are symmetric, so no
/// Nyquist mode is dropped.
pub fn twisted_second_derivative(f: &RealFunction, twist: f64) -> RealFunction {
    let n = f.len() as i64;
    let z: Vec<Complex64> = f
        .grid
        .nodes()
        .zip(&f.values)
        .map(|(s, &v)| Complex64::from_polar(v, -twist * s))
        .collect();
    let d = apply_multiplier(&z, |k| {
        if twist == 0.0 && k == -n / 2 {
            Complex64::new(0.0, 0.0)
        } else {
            let w = k as f64 + twist;
            Complex64::new(-w * w, 0.0)
        }
    });
    let values = f
        .grid
        .nodes()
        .zip(d)
        .map(|(s, z)| (Complex64::from_polar(1.0, twist * s) * z).re)
        .collect();
    GridFunction { grid: f.grid, values }
}

/// `F(s_j) = ∫_{-π}^{s_j} f(s) ds` (arc length, not `dσ`), computed spectrally.
pub fn antiderivative(f: &RealFunction) -> RealFunction {
    let n = f.len();
    let z: Vec<Complex64> = f.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let c = spectrum(&z);
    let mean = c[0].re;
    let mut g = c;
    for (idx, ck) in g.iter_mut().enumerate() {
        let k = wavenumber(idx, n);
        *ck = if k == 0 || k == -(n as i64) / 2 {
            Complex64::new(0.0, 0.0)
        } else {
            *ck / Complex64::new(0.0, k as f64)
        };
    }
    let g = synthesize(g);
    let g0 = g[0].re;
    let values = f
        .grid
        .nodes()
        .zip(&g)
        .map(|(s, gj)| mean * (s + PI) + gj.re - g0)
        .collect();
    GridFunction { grid: f.grid, values }
}

/// Coefficients `c_k` for `|k| ≤ K`; requires `2K + 1 ≤ n` (no aliasing).
pub fn fourier<T: Scalar>(f: &GridFunction<T>, cutoff: usize) -> Result<FourierVector> {
    let n = f.len();
    if 2 * cutoff + 1 > n {
        return Err(Error::InvalidInput(format!(
            "cutoff {cutoff} aliases on a {n}-node grid"
        )));
    }
    let z: Vec<Complex64> = f.values.iter().map(|v| v.to_complex()).collect();
    let c = spectrum(&z);
    let coeffs = (-(cutoff as i64)..=cutoff as i64)
        .map(|k| c[k.rem_euclid(n as i64) as usize])
        .collect();
    FourierVector::new(cutoff, coeffs)
}

/// Samples `Σ_{|k|≤K} c_k e^{iks}` on `grid`; requires `2K + 1 ≤ n`.
pub fn inverse_fourier(c: &FourierVector, grid: Grid) -> Result<ComplexFunction> {
    let n = grid.n_nodes();
    if 2 * c.cutoff + 1 > n {
        return Err(Error::InvalidInput(format!(
            "cutoff {} aliases on a {n}-node grid",
            c.cutoff
        )));
    }
    let mut slots = vec![Complex64::new(0.0, 0.0); n];
    let k_max = c.cutoff as i64;
    for k in -k_max..=k_max {
        slots[k.rem_euclid(n as i64) as usize] = c.coeff(k);
    }
    GridFunction::new(grid, synthesize(slots))
}

/// Trigonometric interpolation of `f` onto `n ≥ len` nodes by zero padding in
/// Fourier space; the Nyquist coefficient is split evenly between `±len/2`.
pub fn resample(f: &RealFunction, n: usize) -> Result<RealFunction> {
    let m = f.len();
    let grid = Grid::new(n)?;
    if n < m {
        return Err(Error::InvalidGrid(format!("cannot resample {m} nodes down to {n}")));
    }
    let z: Vec<Complex64> = f.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let c = spectrum(&z);
    let mut padded = vec![Complex64::new(0.0, 0.0); n];
    for (idx, ck) in c.into_iter().enumerate() {
        let k = wavenumber(idx, m);
        if n > m && k == -(m as i64) / 2 {
            padded[k.rem_euclid(n as i64) as usize] += 0.5 * ck;
            padded[(-k) as usize] += 0.5 * ck;
        } else {
            padded[k.rem_euclid(n as i64) as usize] = ck;
        }
    }
    let values = synthesize(padded).into_iter().map(|z| z.re).collect();
    GridFunction::new(grid, values)
}

/// Symmetric decreasing rearrangement about `s = 0`.
///
/// Values are sorted descending (ties by ascending node index) and laid out
/// from the origin outward: `s = 0`, then `+h, -h, +2h, -2h, …`, and `s = -π`
/// last. The result is equimeasurable with `f`; it is exactly even only when
/// the paired values coincide.
pub fn rearrange_decreasing(f: &RealFunction) -> Result<RealFunction> {
    if let Some(j) = f.values.iter().position(|&v| v < 0.0) {
        return Err(Error::InvalidInput(format!(
            "rearrangement needs a non-negative function, negative at node {j}"
        )));
    }
    let mut order: Vec<usize> = (0..f.len()).collect();
    order.sort_by(|&i, &j| f.values[j].total_cmp(&f.values[i]).then(i.cmp(&j)));

    let mut out = vec![0.0; f.len()];
    for (&slot, &src) in outward_slots(f.grid).iter().zip(&order) {
        out[slot] = f.values[src];
    }
    GridFunction::new(f.grid, out)
}

/// Node indices in order of non-decreasing `|s|`, positive side first.
fn outward_slots(grid: Grid) -> Vec<usize> {
    let n = grid.n_nodes();
    let mid = n / 2;
    let mut slots = Vec::with_capacity(n);
    slots.push(mid);
    for m in 1..mid {
        slots.push(mid + m);
        slots.push(mid - m);
    }
    slots.push(0);
    slots
}
