//! Spectrum of the intersection matrix, hitting-time generating functions and
//! the distance-projected birth-death chain.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::array::IntersectionArray;
use crate::error::{Error, Result};
use crate::rational::{to_f64, uint, Q};

/// Off-diagonal deflation tolerance, relative to the neighbouring diagonal.
const DEFLATION_TOL: f64 = 1e-12;
/// Multiplicities must round to integers within this residual.
const MULTIPLICITY_TOL: f64 = 1e-6;
/// Eigenvalues closer than this are reported as a numerical failure.
const MIN_GAP: f64 = 1e-9;
const MAX_SWEEPS: usize = 60;
/// Forward-iteration cap for mixing times.
pub const MIXING_CAP: u64 = 1_000_000;

/// The tridiagonal `(D+1) x (D+1)` matrix with `b_0..b_{D-1}` below the diagonal,
/// `a_0..a_D` on it and `c_1..c_D` above it. Every column sums to `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionMatrix {
    lower: Vec<u64>,
    diag: Vec<u64>,
    upper: Vec<u64>,
}

impl IntersectionMatrix {
    pub fn new(arr: &IntersectionArray) -> Self {
        let d = arr.diameter();
        Self {
            lower: (0..d).map(|i| arr.b(i)).collect(),
            diag: (0..=d).map(|i| arr.a(i)).collect(),
            upper: (1..=d).map(|i| arr.c(i)).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.diag.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> u64 {
        if row == col {
            self.diag[row]
        } else if row == col + 1 {
            self.lower[col]
        } else if col == row + 1 {
            self.upper[row]
        } else {
            0
        }
    }

    pub fn column_sums(&self) -> Vec<u64> {
        let n = self.size();
        (0..n).map(|col| (0..n).map(|row| self.entry(row, col)).sum()).collect()
    }
}

/// Eigen-structure of the intersection matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    /// Strictly decreasing; `eigenvalues[0] = k`.
    pub eigenvalues: Vec<f64>,
    /// `right[r][i] = v_r(i)`, the distance polynomial `v_i` at `lambda_r`.
    pub right: Vec<Vec<f64>>,
    /// `left[r][i] = u_r(i) = v_r(i) / k_i`.
    pub left: Vec<Vec<f64>>,
    pub multiplicities: Vec<u64>,
    /// Largest distance of `n / (u_r, v_r)` from the nearest integer.
    pub multiplicity_residual: f64,
}

impl SpectralData {
    pub fn degree(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Relaxation time `1 / (1 - lambda_1 / k)` of the simple random walk.
    pub fn relaxation_time(&self) -> Option<f64> {
        let k = self.degree();
        self.eigenvalues.get(1).map(|l| 1.0 / (1.0 - l / k))
    }
}

/// Implicit QL on a symmetric tridiagonal matrix. Returns eigenvalues and an
/// orthonormal eigenvector matrix with eigenvectors in columns.
fn tridiagonal_eigen(diag: &[f64], off: &[f64]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    let mut z = vec![vec![0.0; n]; n];
    for (i, row) in z.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= DEFLATION_TOL * dd.max(f64::MIN_POSITIVE) {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_SWEEPS {
                return Err(Error::Numerical(format!(
                    "tridiagonal QL did not converge for eigenvalue {l}"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for row in z.iter_mut() {
                    let t = row[i + 1];
                    row[i + 1] = s * row[i] + c * t;
                    row[i] = c * row[i] - s * t;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok((d, z))
}

/// Eigenvalues, eigenvectors and multiplicities of the intersection matrix.
///
/// The matrix is made symmetric by the diagonal similarity with weights
/// `1/sqrt(k_i)`, which gives off-diagonal entries `sqrt(b_i c_{i+1})`.
pub fn decompose(arr: &IntersectionArray) -> Result<SpectralData> {
    let d = arr.diameter();
    let size = d + 1;
    let n = arr.vertex_count() as f64;
    let diag: Vec<f64> = (0..size).map(|i| arr.a(i) as f64).collect();
    let off: Vec<f64> = (0..d).map(|i| ((arr.b(i) * arr.c(i + 1)) as f64).sqrt()).collect();
    let (values, vectors) = tridiagonal_eigen(&diag, &off)?;
    let sqrt_k: Vec<f64> = (0..size).map(|i| (arr.sphere_size(i) as f64).sqrt()).collect();

    let mut order: Vec<usize> = (0..size).collect();
    order.sort_by(|&x, &y| values[y].total_cmp(&values[x]));

    let mut eigenvalues = Vec::with_capacity(size);
    let mut right = Vec::with_capacity(size);
    let mut left = Vec::with_capacity(size);
    let mut multiplicities = Vec::with_capacity(size);
    let mut residual: f64 = 0.0;
    for &col in &order {
        let y0 = vectors[0][col];
        if y0.abs() < 1e-300 {
            return Err(Error::Numerical(format!(
                "eigenvector for {} vanishes at distance 0",
                values[col]
            )));
        }
        let v: Vec<f64> = (0..size).map(|i| sqrt_k[i] * vectors[i][col] / y0).collect();
        let u: Vec<f64> = (0..size).map(|i| v[i] / arr.sphere_size(i) as f64).collect();
        let inner: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
        let m = n / inner;
        let rounded = m.round();
        residual = residual.max((m - rounded).abs());
        if (m - rounded).abs() >= MULTIPLICITY_TOL || rounded < 1.0 {
            return Err(Error::Numerical(format!(
                "multiplicity of eigenvalue {} is {m}, not a positive integer",
                values[col]
            )));
        }
        eigenvalues.push(values[col]);
        right.push(v);
        left.push(u);
        multiplicities.push(rounded as u64);
    }
    for w in eigenvalues.windows(2) {
        if w[0] - w[1] < MIN_GAP {
            return Err(Error::Numerical(format!(
                "eigenvalues {} and {} are not separated",
                w[0], w[1]
            )));
        }
    }
    let k = arr.degree() as f64;
    if (eigenvalues[0] - k).abs() > 1e-9 * k.max(1.0) {
        return Err(Error::Numerical(format!(
            "largest eigenvalue {} differs from k = {k}",
            eigenvalues[0]
        )));
    }
    Ok(SpectralData {
        eigenvalues,
        right,
        left,
        multiplicities,
        multiplicity_residual: residual,
    })
}

fn check_gf_args(arr: &IntersectionArray, i: usize, s: f64) -> Result<()> {
    let d = arr.diameter();
    if i == 0 || i > d {
        return Err(Error::OutOfRange(format!("distance i = {i} must lie in 1..={d}")));
    }
    if s.is_nan() || s.abs() > 1.0 {
        return Err(Error::OutOfRange(format!("|s| = {} exceeds 1", s.abs())));
    }
    if s == -1.0 && arr.is_bipartite() {
        return Err(Error::OutOfRange(
            "s = -1 is a pole of the generating function on a bipartite array".into(),
        ));
    }
    Ok(())
}

/// `E[s^tau]` for the hitting time between two vertices at distance `i`.
///
/// Numerator and denominator are both evaluated as `1 + (1-s) * sum(..)` over
/// the nontrivial eigenvalues, so `s = 1` gives exactly 1 with no 0/0.
pub fn generating_function(arr: &IntersectionArray, spectral: &SpectralData, i: usize, s: f64) -> Result<f64> {
    check_gf_args(arr, i, s)?;
    let k = arr.degree() as f64;
    let mut num = 0.0;
    let mut den = 0.0;
    for r in 1..spectral.eigenvalues.len() {
        let m = spectral.multiplicities[r] as f64;
        let pole = 1.0 / (1.0 - s * spectral.eigenvalues[r] / k);
        num += m * spectral.left[r][i] * pole;
        den += m * pole;
    }
    Ok((1.0 + (1.0 - s) * num) / (1.0 + (1.0 - s) * den))
}

/// First `order + 1` power-series coefficients of the generating function,
/// expanded directly from its spectral form.
pub fn generating_series(arr: &IntersectionArray, spectral: &SpectralData, i: usize, order: usize) -> Result<Vec<f64>> {
    check_gf_args(arr, i, 0.0)?;
    let k = arr.degree() as f64;
    // sum_r w_r rho_r^t for t = 0..=order.
    let power_sums = |weight: &dyn Fn(usize) -> f64| -> Vec<f64> {
        let mut out = vec![0.0; order + 1];
        for r in 1..spectral.eigenvalues.len() {
            let rho = spectral.eigenvalues[r] / k;
            let mut term = weight(r);
            for slot in out.iter_mut() {
                *slot += term;
                term *= rho;
            }
        }
        out
    };
    let a = power_sums(&|r| spectral.multiplicities[r] as f64 * spectral.left[r][i]);
    let b = power_sums(&|r| spectral.multiplicities[r] as f64);
    // 1 + (1 - s) A(s) has coefficients 1 + A_0, then A_t - A_{t-1}.
    let shift = |c: &[f64]| -> Vec<f64> {
        (0..=order)
            .map(|t| if t == 0 { 1.0 + c[0] } else { c[t] - c[t - 1] })
            .collect()
    };
    let num = shift(&a);
    let den = shift(&b);
    let mut out = vec![0.0; order + 1];
    for t in 0..=order {
        let mut acc = num[t];
        for j in 1..=t {
            acc -= den[j] * out[t - j];
        }
        out[t] = acc / den[0];
    }
    Ok(out)
}

/// Richardson-extrapolated one-sided difference `(GF(1) - GF(1-h)) / h` at `s = 1`.
pub fn generating_derivative_at_one(arr: &IntersectionArray, spectral: &SpectralData, i: usize, h: f64) -> Result<f64> {
    let diff = |step: f64| -> Result<f64> { Ok((1.0 - generating_function(arr, spectral, i, 1.0 - step)?) / step) };
    Ok(2.0 * diff(h / 2.0)? - diff(h)?)
}

/// The walk's distance from a base vertex, as a birth-death chain on `0..=D`,
/// optionally made lazy: `beta I + (1 - beta) P`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedChain {
    arr: IntersectionArray,
    laziness: Q,
}

impl ProjectedChain {
    pub fn new(arr: &IntersectionArray, laziness: Q) -> Result<Self> {
        if laziness.is_negative() || laziness >= uint(1) {
            return Err(Error::OutOfRange(format!(
                "laziness must lie in [0, 1), got {laziness}"
            )));
        }
        Ok(Self {
            arr: arr.clone(),
            laziness,
        })
    }

    pub fn simple(arr: &IntersectionArray) -> Self {
        Self {
            arr: arr.clone(),
            laziness: Q::zero(),
        }
    }

    pub fn array(&self) -> &IntersectionArray {
        &self.arr
    }

    pub fn laziness(&self) -> &Q {
        &self.laziness
    }

    pub fn states(&self) -> usize {
        self.arr.diameter() + 1
    }

    /// Transition probability `from -> to`.
    pub fn kernel(&self, from: usize, to: usize) -> Q {
        let k = uint(self.arr.degree());
        let step = if to == from + 1 {
            uint(self.arr.b(from)) / &k
        } else if to == from {
            uint(self.arr.a(from)) / &k
        } else if to + 1 == from {
            uint(self.arr.c(from)) / &k
        } else {
            Q::zero()
        };
        let stay = if to == from { self.laziness.clone() } else { Q::zero() };
        stay + (uint(1) - &self.laziness) * step
    }

    /// `pi(j) = k_j / n`.
    pub fn stationary(&self) -> Vec<Q> {
        let n = uint(self.arr.vertex_count());
        (0..self.states()).map(|j| uint(self.arr.sphere_size(j)) / &n).collect()
    }

    pub fn is_stationary(&self, pi: &[Q]) -> bool {
        (0..self.states()).all(|j| {
            let mass: Q = (0..self.states())
                .map(|i| &pi[i] * self.kernel(i, j))
                .fold(Q::zero(), |a, b| a + b);
            mass == pi[j]
        })
    }

    /// Integer kernel `K` and common denominator `scale` with `P = K / scale`.
    fn integer_kernel(&self) -> (Vec<[BigInt; 3]>, BigInt) {
        let k = BigInt::from(self.arr.degree());
        let lp = self.laziness.numer().clone();
        let lq = self.laziness.denom().clone();
        let scale = &lq * &k;
        let move_weight = &lq - &lp;
        let rows = (0..self.states())
            .map(|i| {
                let down = &move_weight * BigInt::from(self.arr.c(i));
                let stay = &move_weight * BigInt::from(self.arr.a(i)) + &lp * &k;
                let up = &move_weight * BigInt::from(self.arr.b(i));
                [down, stay, up]
            })
            .collect();
        (rows, scale)
    }

    fn step_weights(rows: &[[BigInt; 3]], w: &[BigInt]) -> Vec<BigInt> {
        let n = w.len();
        let mut next = vec![BigInt::zero(); n];
        for (i, wi) in w.iter().enumerate() {
            if wi.is_zero() {
                continue;
            }
            let [down, stay, up] = &rows[i];
            if i > 0 {
                next[i - 1] += wi * down;
            }
            next[i] += wi * stay;
            if i + 1 < n {
                next[i + 1] += wi * up;
            }
        }
        next
    }

    /// Distribution after `t` steps from the point mass at state 0.
    pub fn evolve(&self, t: u64) -> Vec<Q> {
        let (weights, den) = self.weights_after(t);
        weights.into_iter().map(|w| Q::new(w, den.clone())).collect()
    }

    fn weights_after(&self, t: u64) -> (Vec<BigInt>, BigInt) {
        let (rows, scale) = self.integer_kernel();
        let mut w = vec![BigInt::zero(); self.states()];
        w[0] = BigInt::from(1);
        let mut den = BigInt::from(1);
        for _ in 0..t {
            w = Self::step_weights(&rows, &w);
            den *= &scale;
        }
        (w, den)
    }

    /// `2 n den * d(t)` as an integer, for weights over `den`.
    fn scaled_tv(&self, w: &[BigInt], den: &BigInt) -> BigInt {
        let n = BigInt::from(self.arr.vertex_count());
        w.iter()
            .enumerate()
            .map(|(j, wj)| (wj * &n - den * BigInt::from(self.arr.sphere_size(j))).abs())
            .fold(BigInt::zero(), |a, b| a + b)
    }

    /// Total variation distance `d(t)` from the projected stationary law.
    pub fn tv_distance(&self, t: u64) -> Q {
        let (w, den) = self.weights_after(t);
        let scaled = self.scaled_tv(&w, &den);
        Q::new(scaled, den * BigInt::from(2 * self.arr.vertex_count()))
    }

    /// `d(0), d(1), ..., d(t_max)` as floats.
    pub fn tv_curve(&self, t_max: u64) -> Vec<f64> {
        let (rows, scale) = self.integer_kernel();
        let mut w = vec![BigInt::zero(); self.states()];
        w[0] = BigInt::from(1);
        let mut den = BigInt::from(1);
        let two_n = BigInt::from(2 * self.arr.vertex_count());
        let mut out = Vec::with_capacity(t_max as usize + 1);
        for t in 0..=t_max {
            if t > 0 {
                w = Self::step_weights(&rows, &w);
                den *= &scale;
            }
            out.push(to_f64(&Q::new(self.scaled_tv(&w, &den), &den * &two_n)));
        }
        out
    }

    /// Smallest `t` with `d(t) < eps`, by exact forward iteration.
    pub fn mixing_time(&self, eps: f64) -> Result<u64> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::OutOfRange(format!("eps must lie in (0, 1), got {eps}")));
        }
        if self.arr.is_bipartite() && self.laziness.is_zero() {
            return Err(Error::OutOfRange(
                "the array is bipartite (lambda_D = -k), so d(t) does not converge; \
                 use a positive laziness"
                    .into(),
            ));
        }
        let eps = Q::from_float(eps).ok_or_else(|| Error::OutOfRange("eps is not finite".into()))?;
        let (rows, scale) = self.integer_kernel();
        let two_n = Q::from_integer(BigInt::from(2 * self.arr.vertex_count()));
        // d(t) < eps  <=>  scaled_tv < eps * 2n * den.
        let threshold = &eps * &two_n;
        let mut w = vec![BigInt::zero(); self.states()];
        w[0] = BigInt::from(1);
        let mut den = BigInt::from(1);
        for t in 0..=MIXING_CAP {
            if t > 0 {
                w = Self::step_weights(&rows, &w);
                den *= &scale;
            }
            let lhs = Q::from_integer(self.scaled_tv(&w, &den));
            if lhs < &threshold * Q::from_integer(den.clone()) {
                return Ok(t);
            }
        }
        Err(Error::Numerical(format!(
            "d(t) stayed above {eps} for {MIXING_CAP} steps"
        )))
    }

    /// `P(first visit to 0 happens at time t)` from `start`, for `t = 0..=order`.
    pub fn first_passage(&self, start: usize, order: usize) -> Vec<Q> {
        let (rows, scale) = self.integer_kernel();
        let mut w = vec![BigInt::zero(); self.states()];
        w[start] = BigInt::from(1);
        let mut den = BigInt::from(1);
        let mut out = Vec::with_capacity(order + 1);
        for t in 0..=order {
            if t > 0 {
                w = Self::step_weights(&rows, &w);
                den *= &scale;
            }
            out.push(Q::new(w[0].clone(), den.clone()));
            w[0] = BigInt::zero();
        }
        out
    }
}
