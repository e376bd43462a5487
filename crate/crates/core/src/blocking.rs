//! Blocking of a weight function into period-length pieces and its expansion
//! in the interleaved exponential basis.
//!
//! Basis index `k = 1, 2, 3, ...` maps to the integer frequency
//! `m(k) = (-1)^k * floor(k/2)`, i.e. 0, +1, -1, +2, -2, ...; the basis
//! function is `e_k(u) = T^{-1/2} exp(2*pi*i*m(k)*u/T)` on `[0, T)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::parallel::par_map_indexed;
use crate::weight::WeightFunction;

/// Integer frequency for 1-based basis index `k`: 0, +1, -1, +2, -2, ...
#[inline]
pub fn frequency(k: usize) -> i64 {
    let half = (k / 2) as i64;
    if k % 2 == 0 {
        half
    } else {
        -half
    }
}

/// A weight function cut into `J` blocks of length `T`:
/// block `j` evaluates `a(u + j*T)` for `u` in `[0, T)`.
#[derive(Debug, Clone)]
pub struct BlockedFunction {
    weight: WeightFunction,
    period: f64,
    block_count: usize,
}

impl BlockedFunction {
    pub fn weight(&self) -> &WeightFunction {
        &self.weight
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn block_count(&self) -> usize {
        self.block_count
    }

    /// Evaluate block `j` at offset `u` in `[0, T)`.
    pub fn eval_block(&self, j: usize, u: f64) -> f64 {
        debug_assert!(j < self.block_count);
        self.weight.eval(u + j as f64 * self.period)
    }
}

/// Cut `a(t)` into `block_count` blocks of length `period`.
pub fn block_function(
    a: &WeightFunction,
    period: f64,
    block_count: usize,
) -> Result<BlockedFunction> {
    if !(period.is_finite() && period > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "period must be positive, got {period}"
        )));
    }
    if block_count == 0 {
        return Err(Error::InvalidArgument("block count must be at least 1".into()));
    }
    a.validate()?;
    Ok(BlockedFunction {
        weight: a.clone(),
        period,
        block_count,
    })
}

/// Truncated matrix of block Fourier coefficients `a_{kj}`,
/// `k = 1..K` (basis index), `j = 0..J-1` (block index).
#[derive(Debug, Clone)]
pub struct FourierBlockCoefficients {
    freq_count: usize,
    block_count: usize,
    period: f64,
    /// Row-major `K x J`: entry `(k-1) * J + j`.
    coeffs: Vec<Complex64>,
}

impl FourierBlockCoefficients {
    /// Build directly from a `K x J` row-major coefficient matrix.
    pub fn from_matrix(
        freq_count: usize,
        block_count: usize,
        period: f64,
        coeffs: Vec<Complex64>,
    ) -> Result<Self> {
        if freq_count == 0 || block_count == 0 {
            return Err(Error::InvalidArgument(
                "coefficient matrix needs K >= 1 and J >= 1".into(),
            ));
        }
        if coeffs.len() != freq_count * block_count {
            return Err(Error::DimensionMismatch(format!(
                "expected {} coefficients, got {}",
                freq_count * block_count,
                coeffs.len()
            )));
        }
        Ok(Self {
            freq_count,
            block_count,
            period,
            coeffs,
        })
    }

    /// Number of retained basis indices `K`.
    pub fn freq_count(&self) -> usize {
        self.freq_count
    }

    /// Number of retained blocks `J`.
    pub fn block_count(&self) -> usize {
        self.block_count
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Coefficient `a_{kj}` with 0-based frequency row `k0 = k - 1`.
    #[inline]
    pub fn get(&self, k0: usize, j: usize) -> Complex64 {
        self.coeffs[k0 * self.block_count + j]
    }

    /// The column vector of block `j` over all retained frequencies.
    pub fn block_vector(&self, j: usize) -> Vec<Complex64> {
        (0..self.freq_count).map(|k0| self.get(k0, j)).collect()
    }

    /// Euclidean norm of block column `j`.
    pub fn block_norm(&self, j: usize) -> f64 {
        (0..self.freq_count)
            .map(|k0| self.get(k0, j).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Scale every coefficient by a real factor.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            freq_count: self.freq_count,
            block_count: self.block_count,
            period: self.period,
            coeffs: self.coeffs.iter().map(|z| z * c).collect(),
        }
    }

    /// Largest pairing defect `|a_{kj} - conj(a_{k'j})|` over index pairs with
    /// `m(k') = -m(k)`. Zero (to rounding) for real-valued weights.
    pub fn conjugate_pairing_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for k in 1..=self.freq_count {
            let m = frequency(k);
            // partner index with opposite frequency: swap within the (2r, 2r+1) pair
            let k_pair = match m.cmp(&0) {
                std::cmp::Ordering::Equal => k,
                std::cmp::Ordering::Greater => k + 1,
                std::cmp::Ordering::Less => k - 1,
            };
            if k_pair > self.freq_count {
                continue;
            }
            for j in 0..self.block_count {
                let d = (self.get(k - 1, j) - self.get(k_pair - 1, j).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }
}

/// Coefficients `a_{kj} = T^{-1/2} int_0^T a_j(v) exp(-2*pi*i*m(k)*v/T) dv`.
///
/// Named analytic and piecewise-constant kinds use closed-form integrals;
/// sampled grids use the composite trapezoid with `quad_nodes` panels.
/// `quad_nodes >= 2 * freq_count` is required either way so a too-coarse grid
/// is reported rather than silently accepted.
pub fn fourier_coefficients(
    bf: &BlockedFunction,
    freq_count: usize,
    quad_nodes: usize,
) -> Result<FourierBlockCoefficients> {
    if freq_count == 0 {
        return Err(Error::InvalidArgument("freq_count must be at least 1".into()));
    }
    if quad_nodes < 2 * freq_count {
        return Err(Error::GridTooCoarse(format!(
            "quad_nodes = {quad_nodes} is below the Nyquist safeguard 2*K = {}",
            2 * freq_count
        )));
    }
    match bf.weight() {
        WeightFunction::SampledGrid { .. } => {
            fourier_coefficients_quadrature(bf, freq_count, quad_nodes)
        }
        _ => fourier_coefficients_closed_form(bf, freq_count),
    }
}

/// Generic quadrature path: composite trapezoid with `quad_nodes` uniform
/// panels over `[0, T]`.
pub fn fourier_coefficients_quadrature(
    bf: &BlockedFunction,
    freq_count: usize,
    quad_nodes: usize,
) -> Result<FourierBlockCoefficients> {
    if quad_nodes < 2 * freq_count {
        return Err(Error::GridTooCoarse(format!(
            "quad_nodes = {quad_nodes} is below the Nyquist safeguard 2*K = {}",
            2 * freq_count
        )));
    }
    let t = bf.period();
    let h = t / quad_nodes as f64;
    let scale = t.sqrt().recip();
    let j_count = bf.block_count();
    // per-block quadrature is independent; summation inside each block is a
    // fixed left-to-right loop
    let columns: Vec<Vec<Complex64>> = par_map_indexed(j_count, |j| {
        let samples: Vec<f64> = (0..=quad_nodes)
            .map(|l| bf.eval_block(j, (l as f64 * h).min(t)))
            .collect();
        (1..=freq_count)
            .map(|k| {
                let mu = std::f64::consts::TAU * frequency(k) as f64 / t;
                let mut acc = Complex64::new(0.0, 0.0);
                for (l, &val) in samples.iter().enumerate() {
                    let w = if l == 0 || l == quad_nodes { 0.5 } else { 1.0 };
                    let angle = -mu * (l as f64) * h;
                    acc += Complex64::new(angle.cos(), angle.sin()) * (w * val);
                }
                acc * (h * scale)
            })
            .collect()
    });
    from_columns(freq_count, j_count, t, &columns)
}

fn fourier_coefficients_closed_form(
    bf: &BlockedFunction,
    freq_count: usize,
) -> Result<FourierBlockCoefficients> {
    let t = bf.period();
    let scale = t.sqrt().recip();
    let j_count = bf.block_count();
    let columns: Vec<Vec<Complex64>> = par_map_indexed(j_count, |j| {
        (1..=freq_count)
            .map(|k| {
                let mu = std::f64::consts::TAU * frequency(k) as f64 / t;
                closed_form_integral(bf.weight(), j as f64 * t, t, mu) * scale
            })
            .collect()
    });
    from_columns(freq_count, j_count, t, &columns)
}

fn from_columns(
    freq_count: usize,
    block_count: usize,
    period: f64,
    columns: &[Vec<Complex64>],
) -> Result<FourierBlockCoefficients> {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); freq_count * block_count];
    for (j, col) in columns.iter().enumerate() {
        for (k0, v) in col.iter().enumerate() {
            coeffs[k0 * block_count + j] = *v;
        }
    }
    FourierBlockCoefficients::from_matrix(freq_count, block_count, period, coeffs)
}

/// `int_0^L exp(z*u) du`, stable for small `|z*L|`.
fn integral_exp(z: Complex64, len: f64) -> Complex64 {
    let w = z * len;
    if w.norm() < 1e-2 {
        // len * sum_{n>=0} w^n / (n+1)!
        let mut term = Complex64::new(1.0, 0.0);
        let mut acc = term;
        for n in 1..=6 {
            term = term * w / (n as f64 + 1.0);
            acc += term;
        }
        acc * len
    } else {
        (w.exp() - 1.0) / z
    }
}

/// `int_lo^hi exp(z*u) du`.
fn integral_exp_interval(z: Complex64, lo: f64, hi: f64) -> Complex64 {
    if hi <= lo {
        return Complex64::new(0.0, 0.0);
    }
    (z * lo).exp() * integral_exp(z, hi - lo)
}

/// Closed-form `int_0^T a(offset + u) exp(-i*mu*u) du` for the analytic kinds.
fn closed_form_integral(w: &WeightFunction, offset: f64, t: f64, mu: f64) -> Complex64 {
    let zmu = Complex64::new(0.0, -mu);
    match w {
        WeightFunction::ExponentialDecay { amplitude, rate } => {
            let z = Complex64::new(-rate, -mu);
            integral_exp(z, t) * (*amplitude * (-rate * offset).exp())
        }
        WeightFunction::Indicator { amplitude, start, end } => {
            let lo = (start - offset).max(0.0);
            let hi = (end - offset).min(t);
            integral_exp_interval(zmu, lo, hi) * *amplitude
        }
        WeightFunction::PiecewiseConstant { edges, values } => {
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, v) in values.iter().enumerate() {
                let lo = (edges[i] - offset).max(0.0);
                let hi = (edges[i + 1] - offset).min(t);
                if hi > lo {
                    acc += integral_exp_interval(zmu, lo, hi) * *v;
                }
            }
            acc
        }
        WeightFunction::WindowedCosine { amplitude, freq, phase, end } => {
            let len = (end - offset).min(t);
            if len <= 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let omega = std::f64::consts::TAU * freq;
            let theta = omega * offset + phase;
            let plus = Complex64::from_polar(1.0, theta)
                * integral_exp(Complex64::new(0.0, omega - mu), len);
            let minus = Complex64::from_polar(1.0, -theta)
                * integral_exp(Complex64::new(0.0, -(omega + mu)), len);
            (plus + minus) * (0.5 * amplitude)
        }
        WeightFunction::SampledGrid { .. } => {
            unreachable!("sampled grids take the quadrature path")
        }
    }
}

/// Decay hint for estimating coefficient tails beyond the retained blocks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailModel {
    /// No extrapolation: tails are reported as zero.
    None,
    /// `|a_j| ~ ratio^j` with `0 < ratio < 1`.
    Geometric { ratio: f64 },
    /// `|a_j| ~ (j+1)^(-exponent)`.
    PowerLaw { exponent: f64 },
}

/// Partial sums and tail estimates for the admissibility conditions
/// `sum_j |a_j| < inf` and `sum_j (j+1) |a_j|^2 < inf`.
#[derive(Debug, Clone)]
pub struct AdmissibilityReport {
    /// `sum_{j<J} |a_j|` over retained blocks.
    pub norm_sum: f64,
    /// `sum_{j<J} (j+1) |a_j|^2` over retained blocks.
    pub weighted_sq_sum: f64,
    /// Estimated `sum_{j>=J} |a_j|` from the tail model.
    pub tail_norm: f64,
    /// Estimated `sum_{j>=J} (j+1) |a_j|^2` from the tail model.
    pub tail_weighted_sq: f64,
    /// Per-block norms of the last retained blocks (truncation residuals).
    pub last_block_norms: Vec<f64>,
    /// True when a tail model implies a divergent sum.
    pub divergent: bool,
    pub diagnosis: Option<String>,
    pub pass: bool,
}

impl AdmissibilityReport {
    pub fn norm_total(&self) -> f64 {
        self.norm_sum + self.tail_norm
    }

    pub fn weighted_total(&self) -> f64 {
        self.weighted_sq_sum + self.tail_weighted_sq
    }
}

/// Evaluate the admissibility sums against `bound`; report-only.
pub fn check_summability(
    c: &FourierBlockCoefficients,
    tail: TailModel,
    bound: f64,
) -> AdmissibilityReport {
    let j_count = c.block_count();
    let norms: Vec<f64> = (0..j_count).map(|j| c.block_norm(j)).collect();
    let norm_sum: f64 = norms.iter().sum();
    let weighted_sq_sum: f64 = norms
        .iter()
        .enumerate()
        .map(|(j, n)| (j + 1) as f64 * n * n)
        .sum();
    let last = norms[j_count - 1];

    let mut divergent = false;
    let mut diagnosis = None;
    let (tail_norm, tail_weighted_sq) = match tail {
        TailModel::None => (0.0, 0.0),
        TailModel::Geometric { ratio } => {
            if !(0.0 < ratio && ratio < 1.0) {
                divergent = true;
                diagnosis = Some(format!(
                    "geometric tail ratio {ratio} is outside (0, 1): sums diverge"
                ));
                (f64::INFINITY, f64::INFINITY)
            } else {
                let rho = ratio * ratio;
                let jf = j_count as f64;
                (
                    last * ratio / (1.0 - ratio),
                    last * last * (jf * rho / (1.0 - rho) + rho / ((1.0 - rho) * (1.0 - rho))),
                )
            }
        }
        TailModel::PowerLaw { exponent } => {
            if exponent <= 1.0 {
                divergent = true;
                diagnosis = Some(format!(
                    "power-law exponent {exponent} <= 1: sum of (j+1)|a_j|^2 (and for \
                     exponent <= 1 the norm sum) diverges"
                ));
                (f64::INFINITY, f64::INFINITY)
            } else {
                // scale constant fitted to the last retained block
                let jf = j_count as f64;
                let c0 = last * jf.powf(exponent);
                (
                    c0 * jf.powf(1.0 - exponent) / (exponent - 1.0),
                    c0 * c0 * jf.powf(2.0 - 2.0 * exponent) / (2.0 * exponent - 2.0),
                )
            }
        }
    };

    let tail_start = j_count.saturating_sub(3);
    let pass = !divergent
        && (norm_sum + tail_norm) <= bound
        && (weighted_sq_sum + tail_weighted_sq) <= bound;
    AdmissibilityReport {
        norm_sum,
        weighted_sq_sum,
        tail_norm,
        tail_weighted_sq,
        last_block_norms: norms[tail_start..].to_vec(),
        divergent,
        diagnosis,
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::WeightFunction;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn frequency_map_interleaves() {
        let got: Vec<i64> = (1..=7).map(frequency).collect();
        assert_eq!(got, vec![0, 1, -1, 2, -2, 3, -3]);
    }

    #[test]
    fn block_function_indicator_first_block_only() {
        let a = WeightFunction::Indicator { amplitude: 1.0, start: 0.0, end: 1.0 };
        let bf = block_function(&a, 1.0, 2).unwrap();
        for u in [0.0, 0.25, 0.5, 0.99] {
            assert_eq!(bf.eval_block(0, u), 1.0);
            assert_eq!(bf.eval_block(1, u), 0.0);
        }
    }

    #[test]
    fn block_function_exponential_shifts() {
        let a = WeightFunction::ExponentialDecay { amplitude: 1.0, rate: 1.0 };
        let bf = block_function(&a, 1.0, 3).unwrap();
        assert!(close(bf.eval_block(1, 0.5), (-1.5f64).exp(), 1e-15));
        assert!(close(bf.eval_block(2, 0.25), (-2.25f64).exp(), 1e-15));
    }

    #[test]
    fn block_function_rejects_bad_args() {
        let a = WeightFunction::Indicator { amplitude: 1.0, start: 0.0, end: 1.0 };
        assert!(block_function(&a, 0.0, 2).is_err());
        assert!(block_function(&a, -1.0, 2).is_err());
        assert!(block_function(&a, 1.0, 0).is_err());
        let bad = WeightFunction::ExponentialDecay { amplitude: 1.0, rate: -2.0 };
        assert!(block_function(&bad, 1.0, 2).is_err());
    }

    #[test]
    fn sampled_blocks_match_analytic_within_interpolation_error() {
        let step = 1.0 / 256.0;
        let n = 4 * 256 + 1;
        let values: Vec<f64> = (0..n).map(|i| (-(i as f64) * step).exp()).collect();
        let sampled = WeightFunction::SampledGrid { step, values };
        let analytic = WeightFunction::ExponentialDecay { amplitude: 1.0, rate: 1.0 };
        let bs = block_function(&sampled, 1.0, 4).unwrap();
        let ba = block_function(&analytic, 1.0, 4).unwrap();
        // linear interpolation error bound: h^2/8 * max|a''| = step^2/8
        let tol = step * step / 8.0 + 1e-12;
        for j in 0..4 {
            for i in 0..128 {
                let u = i as f64 / 128.0;
                assert!(
                    close(bs.eval_block(j, u), ba.eval_block(j, u), tol),
                    "block {j} at u={u}"
                );
            }
        }
    }

    #[test]
    fn constant_weight_hits_only_zero_frequency() {
        let c = 0.7;
        let t = 2.0;
        let a = WeightFunction::Indicator { amplitude: c, start: 0.0, end: t };
        let bf = block_function(&a, t, 3).unwrap();
        let fc = fourier_coefficients(&bf, 3, 64).unwrap();
        assert!(close(fc.get(0, 0).re, c * t.sqrt(), 1e-12));
        assert!(close(fc.get(0, 0).im, 0.0, 1e-12));
        for k0 in 1..3 {
            assert!(fc.get(k0, 0).norm() < 1e-12, "k0 = {k0}");
        }
        for j in 1..3 {
            for k0 in 0..3 {
                assert_eq!(fc.get(k0, j), Complex64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn cosine_weight_splits_between_conjugate_frequencies() {
        let t = 1.0;
        let a = WeightFunction::WindowedCosine { amplitude: 1.0, freq: 1.0, phase: 0.0, end: t };
        let bf = block_function(&a, t, 2).unwrap();
        let fc = fourier_coefficients(&bf, 3, 64).unwrap();
        let half_sqrt_t = t.sqrt() / 2.0;
        assert!(fc.get(0, 0).norm() < 1e-12);
        assert!(close(fc.get(1, 0).re, half_sqrt_t, 1e-12));
        assert!(close(fc.get(1, 0).im, 0.0, 1e-12));
        assert!(close(fc.get(2, 0).re, half_sqrt_t, 1e-12));
        assert!(close(fc.get(2, 0).im, 0.0, 1e-12));
    }

    /// Independent composite-Simpson oracle for one coefficient.
    fn simpson_coefficient(bf: &BlockedFunction, k: usize, j: usize, panels: usize) -> Complex64 {
        let t = bf.period();
        let mu = std::f64::consts::TAU * frequency(k) as f64 / t;
        let h = t / panels as f64;
        let f = |u: f64| {
            let angle = -mu * u;
            Complex64::new(angle.cos(), angle.sin()) * bf.eval_block(j, u)
        };
        let mut acc = f(0.0) + f(t);
        for l in 1..panels {
            let w = if l % 2 == 1 { 4.0 } else { 2.0 };
            acc += f(l as f64 * h) * w;
        }
        acc * (h / 3.0) / t.sqrt()
    }

    #[test]
    fn exponential_coefficients_match_fine_quadrature_oracle() {
        let a = WeightFunction::ExponentialDecay { amplitude: 1.0, rate: 1.0 };
        let bf = block_function(&a, 1.0, 6).unwrap();
        let fc = fourier_coefficients(&bf, 5, 4096).unwrap();
        for j in 0..6 {
            for k in 1..=5 {
                let oracle = simpson_coefficient(&bf, k, j, 40_960);
                let got = fc.get(k - 1, j);
                let rel = (got - oracle).norm() / oracle.norm();
                assert!(rel < 1e-8, "k={k} j={j}: got {got}, oracle {oracle}, rel {rel}");
            }
        }
    }

    #[test]
    fn quadrature_path_rejects_coarse_grid() {
        let a = WeightFunction::SampledGrid { step: 0.25, values: vec![1.0, 0.5, 0.25, 0.12, 0.0] };
        let bf = block_function(&a, 1.0, 1).unwrap();
        assert!(matches!(
            fourier_coefficients(&bf, 4, 7),
            Err(Error::GridTooCoarse(_))
        ));
    }

    #[test]
    fn parseval_partial_sums_increase_to_block_energy() {
        let a = WeightFunction::ExponentialDecay { amplitude: 1.0, rate: 1.0 };
        let bf = block_function(&a, 1.0, 2).unwrap();
        // block energy: int_0^1 e^{-2u} du
        let energy = (1.0 - (-2.0f64).exp()) / 2.0;
        let mut prev = 0.0;
        for cap in [1usize, 3, 9, 33, 129] {
            let fc = fourier_coefficients(&bf, cap, 4 * cap.max(64)).unwrap();
            let sum: f64 = (0..cap).map(|k0| fc.get(k0, 0).norm_sqr()).sum();
            assert!(sum <= energy + 1e-10, "cap {cap}: {sum} > {energy}");
            assert!(sum >= prev - 1e-12);
            prev = sum;
        }
        assert!(energy - prev < 2e-4, "K=129 residual too large: {}", energy - prev);
    }

    #[test]
    fn conjugate_pairing_for_real_weights() {
        for w in [
            WeightFunction::ExponentialDecay { amplitude: 1.3, rate: 0.7 },
            WeightFunction::WindowedCosine { amplitude: 0.9, freq: 1.7, phase: 0.3, end: 2.4 },
            WeightFunction::PiecewiseConstant {
                edges: vec![0.0, 0.4, 1.1, 2.0],
                values: vec![1.0, -0.5, 0.25],
            },
        ] {
            let bf = block_function(&w, 0.9, 4).unwrap();
            let fc = fourier_coefficients(&bf, 7, 256).unwrap();
            assert!(
                fc.conjugate_pairing_defect() < 1e-12,
                "defect {} for {w:?}",
                fc.conjugate_pairing_defect()
            );
        }
        // sampled path too
        let values: Vec<f64> = (0..257).map(|i| (-(i as f64) / 64.0).exp()).collect();
        let w = WeightFunction::SampledGrid { step: 1.0 / 64.0, values };
        let bf = block_function(&w, 1.0, 4).unwrap();
        let fc = fourier_coefficients(&bf, 7, 512).unwrap();
        assert!(fc.conjugate_pairing_defect() < 1e-12);
    }

    #[test]
    fn support_confined_weights_have_exactly_zero_tail_columns() {
        let a = WeightFunction::Indicator { amplitude: 2.0, start: 0.25, end: 1.75 };
        let bf = block_function(&a, 1.0, 5).unwrap();
        let fc = fourier_coefficients(&bf, 4, 64).unwrap();
        for j in 2..5 {
            for k0 in 0..4 {
                assert_eq!(fc.get(k0, j), Complex64::new(0.0, 0.0), "k0={k0} j={j}");
            }
        }
        assert!(fc.block_norm(0) > 0.0 && fc.block_norm(1) > 0.0);
    }

    #[test]
    fn summability_single_block() {
        let c = FourierBlockCoefficients::from_matrix(
            1,
            1,
            1.0,
            vec![Complex64::new(1.0, 0.0)],
        )
        .unwrap();
        let r = check_summability(&c, TailModel::None, 1e9);
        assert!(close(r.norm_total(), 1.0, 1e-15));
        assert!(close(r.weighted_total(), 1.0, 1e-15));
        assert!(r.pass && !r.divergent);
    }

    #[test]
    fn summability_geometric_matches_closed_form() {
        // |a_j| = 2^{-j}; independent closed forms: sum = 2, sum (j+1) 4^{-j} = 16/9
        for j_count in [1usize, 2, 5, 12] {
            let coeffs: Vec<Complex64> = (0..j_count)
                .map(|j| Complex64::new(0.5f64.powi(j as i32), 0.0))
                .collect();
            let c = FourierBlockCoefficients::from_matrix(1, j_count, 1.0, coeffs).unwrap();
            let r = check_summability(&c, TailModel::Geometric { ratio: 0.5 }, 1e9);
            assert!(close(r.norm_total(), 2.0, 1e-12), "J={j_count}: {}", r.norm_total());
            assert!(
                close(r.weighted_total(), 16.0 / 9.0, 1e-12),
                "J={j_count}: {}",
                r.weighted_total()
            );
            assert!(r.pass);
        }
    }

    #[test]
    fn summability_harmonic_tail_flags_divergence() {
        let coeffs: Vec<Complex64> = (0..8)
            .map(|j| Complex64::new(1.0 / (j as f64 + 1.0), 0.0))
            .collect();
        let c = FourierBlockCoefficients::from_matrix(1, 8, 1.0, coeffs).unwrap();
        let r = check_summability(&c, TailModel::PowerLaw { exponent: 1.0 }, 1e9);
        assert!(r.divergent);
        assert!(!r.pass);
        assert!(r.diagnosis.as_deref().unwrap_or("").contains("diverges"));
    }
}
