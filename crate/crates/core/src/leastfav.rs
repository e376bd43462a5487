//! Least-favorable one-sided moving average built from the top eigenvector,
//! its spectral density `f(lambda) = G(lambda) G*(lambda)`, and the power
//! normalization checks.

use num_complex::Complex64;

use crate::eigen::{jacobi_hermitian, Eigenpair};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::parallel::par_map_indexed;

/// One-sided moving average `zeta_j = sum_{s=0}^{order} g(s) eps(j-s)` with a
/// single innovation channel and total power `sum_p |g(p)|_F^2 = P`.
#[derive(Debug, Clone)]
pub struct MovingAverageModel {
    order: usize,
    freq_count: usize,
    multiplicity: usize,
    /// `g[p]` is the K x M coefficient block at lag `p` (M = 1: one column).
    g: Vec<Vec<Complex64>>,
    power: f64,
}

impl MovingAverageModel {
    /// Construct from raw lag blocks; `g[p]` must each hold `freq_count`
    /// entries (single innovation channel).
    pub fn from_coefficients(g: Vec<Vec<Complex64>>, freq_count: usize) -> Result<Self> {
        if g.is_empty() {
            return Err(Error::InvalidArgument("need at least the lag-0 block".into()));
        }
        if g.iter().any(|col| col.len() != freq_count) {
            return Err(Error::DimensionMismatch(
                "every lag block must have freq_count entries".into(),
            ));
        }
        let power: f64 = g.iter().flatten().map(|z| z.norm_sqr()).sum();
        Ok(Self {
            order: g.len() - 1,
            freq_count,
            multiplicity: 1,
            g,
            power,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn freq_count(&self) -> usize {
        self.freq_count
    }

    pub fn multiplicity(&self) -> usize {
        self.multiplicity
    }

    /// The power constraint `P` the coefficients are normalized to.
    pub fn power(&self) -> f64 {
        self.power
    }

    /// Lag-`p` coefficient column (`K` entries, innovation channel 0).
    pub fn lag(&self, p: usize) -> &[Complex64] {
        &self.g[p]
    }

    /// `g_{km}(p)`; zero beyond the order.
    pub fn coeff(&self, k0: usize, _m0: usize, p: usize) -> Complex64 {
        if p <= self.order {
            self.g[p][k0]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// Frobenius norms of the lag blocks.
    pub fn lag_norms(&self) -> Vec<f64> {
        self.g
            .iter()
            .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
            .collect()
    }

    /// True when every coefficient has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.g.iter().flatten().all(|z| z.im == 0.0)
    }
}

/// Scale the conjugated top eigenvector into the least-favorable model:
/// `g(p) = conj(v_p) * sqrt(P)` blockwise, so `sum_p |g(p)|^2 = P`.
pub fn build_least_favorable(
    pair: &Eigenpair,
    power: f64,
    order: usize,
    freq_count: usize,
) -> Result<MovingAverageModel> {
    if !pair.converged {
        return Err(Error::InvalidArgument(
            "refusing to build a model from a non-converged eigenpair".into(),
        ));
    }
    if !(power > 0.0 && power.is_finite()) {
        return Err(Error::InvalidArgument(format!("power must be positive, got {power}")));
    }
    let dim = (order + 1) * freq_count;
    if pair.vector.len() != dim {
        return Err(Error::DimensionMismatch(format!(
            "eigenvector has length {}, expected (N+1)*K = {dim}",
            pair.vector.len()
        )));
    }
    let vnorm = crate::linalg::norm(&pair.vector);
    if vnorm == 0.0 {
        return Err(Error::InvalidArgument("eigenvector must be nonzero".into()));
    }
    let scale = power.sqrt() / vnorm;
    let g: Vec<Vec<Complex64>> = (0..=order)
        .map(|p| {
            pair.vector[p * freq_count..(p + 1) * freq_count]
                .iter()
                .map(|z| z.conj() * scale)
                .collect()
        })
        .collect();
    MovingAverageModel::from_coefficients(g, freq_count)
}

/// Spectral density sample at one frequency: `f = G G*` with
/// `G(lambda) = sum_s g(s) exp(-i s lambda)`.
#[derive(Debug, Clone)]
pub struct SpectralDensitySample {
    pub lambda: f64,
    /// `K x K` Hermitian PSD density matrix.
    pub f: CMatrix,
    /// The `K x M` factor column(s) at this frequency (M = 1).
    pub factor: Vec<Complex64>,
}

/// Transfer column `G(lambda)` of the moving average.
pub fn transfer_at(model: &MovingAverageModel, lambda: f64) -> Vec<Complex64> {
    let k = model.freq_count();
    let mut g = vec![Complex64::new(0.0, 0.0); k];
    for s in 0..=model.order() {
        let phase = Complex64::from_polar(1.0, -(s as f64) * lambda);
        for (dst, coeff) in g.iter_mut().zip(model.lag(s)) {
            *dst += coeff * phase;
        }
    }
    g
}

/// Evaluate `f = G G*` on the given frequency grid.
pub fn spectral_density(model: &MovingAverageModel, lambdas: &[f64]) -> Vec<SpectralDensitySample> {
    let k = model.freq_count();
    par_map_indexed(lambdas.len(), |i| {
        let lambda = lambdas[i];
        let g = transfer_at(model, lambda);
        let mut f = CMatrix::zeros(k, k);
        for r in 0..k {
            for c in 0..k {
                f[(r, c)] = g[r] * g[c].conj();
            }
        }
        SpectralDensitySample { lambda, f, factor: g }
    })
}

/// Uniform grid of `size` frequencies on `[-pi, pi)`.
pub fn uniform_lambda_grid(size: usize) -> Vec<f64> {
    (0..size)
        .map(|l| -std::f64::consts::PI + std::f64::consts::TAU * l as f64 / size as f64)
        .collect()
}

/// Result of checking `f = G G*` and positive semidefiniteness per sample.
#[derive(Debug, Clone, Copy)]
pub struct FactorizationCheck {
    /// `max_lambda |f - G G*|_F`.
    pub max_residual: f64,
    /// Most negative `lambda_min(f) / Tr f` over the samples (0 when every
    /// trace vanishes).
    pub worst_eigen_ratio: f64,
    /// True when `lambda_min(f) >= -1e-10 * Tr f` at every sample.
    pub psd_ok: bool,
}

/// Verify the canonical factorization on a list of samples.
pub fn verify_factorization(samples: &[SpectralDensitySample]) -> Result<FactorizationCheck> {
    let mut max_residual = 0.0f64;
    let mut worst_ratio = 0.0f64;
    let mut psd_ok = true;
    for sample in samples {
        let k = sample.f.rows();
        if sample.factor.len() != k || sample.f.cols() != k {
            return Err(Error::DimensionMismatch(
                "sample factor and density sizes disagree".into(),
            ));
        }
        let mut diff = 0.0f64;
        for r in 0..k {
            for c in 0..k {
                let recon = sample.factor[r] * sample.factor[c].conj();
                diff += (sample.f[(r, c)] - recon).norm_sqr();
            }
        }
        max_residual = max_residual.max(diff.sqrt());

        let trace = sample.f.trace().re;
        let (values, _) = jacobi_hermitian(&sample.f)?;
        let min_eig = values.last().copied().unwrap_or(0.0);
        if trace > 0.0 {
            worst_ratio = worst_ratio.min(min_eig / trace);
            if min_eig < -1e-10 * trace {
                psd_ok = false;
            }
        } else if min_eig < 0.0 {
            psd_ok = false;
        }
    }
    Ok(FactorizationCheck {
        max_residual,
        worst_eigen_ratio: worst_ratio,
        psd_ok,
    })
}

/// `(1/2pi) int Tr f(lambda) dlambda` by uniform-grid quadrature.
///
/// The integrand is a trigonometric polynomial of degree `order`, so any grid
/// larger than `2 * order` integrates it exactly up to rounding; the result
/// equals the model power `P`.
pub fn trace_power(model: &MovingAverageModel, grid_size: usize) -> Result<f64> {
    if grid_size < 2 * (model.order() + 1) {
        return Err(Error::GridTooCoarse(format!(
            "grid_size = {grid_size} is below 2*(order+1) = {}",
            2 * (model.order() + 1)
        )));
    }
    let traces = par_map_indexed(grid_size, |l| {
        let lambda = -std::f64::consts::PI + std::f64::consts::TAU * l as f64 / grid_size as f64;
        transfer_at(model, lambda)
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
    });
    Ok(traces.iter().sum::<f64>() / grid_size as f64)
}

/// Write density samples as CSV rows `lambda,k,n,re,im`.
pub fn write_spectral_csv<W: std::io::Write>(
    samples: &[SpectralDensitySample],
    out: &mut W,
) -> Result<()> {
    writeln!(out, "lambda,k,n,re,im")?;
    for sample in samples {
        let k = sample.f.rows();
        for r in 0..k {
            for c in 0..k {
                let z = sample.f[(r, c)];
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    crate::operator::fmt_f64(sample.lambda),
                    r + 1,
                    c + 1,
                    crate::operator::fmt_f64(z.re),
                    crate::operator::fmt_f64(z.im)
                )?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocking::FourierBlockCoefficients;
    use crate::eigen::power_iteration;
    use crate::operator::assemble_qn;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unit_pair(vector: Vec<Complex64>) -> Eigenpair {
        Eigenpair {
            value: 1.0,
            vector,
            residual: 0.0,
            iterations: 1,
            converged: true,
        }
    }

    #[test]
    fn normalization_only_for_order_zero() {
        let pair = unit_pair(vec![c64(1.0, 0.0)]);
        let model = build_least_favorable(&pair, 4.0, 0, 1).unwrap();
        assert!((model.lag(0)[0].norm() - 2.0).abs() < 1e-14);
        assert!((model.power() - 4.0).abs() < 1e-13);
    }

    #[test]
    fn fixture_eigenvector_ratio_is_golden() {
        let c = FourierBlockCoefficients::from_matrix(
            1,
            2,
            1.0,
            vec![c64(1.0, 0.0), c64(1.0, 0.0)],
        )
        .unwrap();
        let q = assemble_qn(&c, 1).unwrap();
        let pair = power_iteration(&q, 1e-14, 1000, 5).unwrap();
        let model = build_least_favorable(&pair, 1.0, 1, 1).unwrap();
        let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
        let g0 = model.lag(0)[0];
        let g1 = model.lag(1)[0];
        assert!((g0.norm_sqr() + g1.norm_sqr() - 1.0).abs() < 1e-12);
        assert!(((g0 / g1).re - phi).abs() < 1e-9, "ratio {}", (g0 / g1).re);
        assert!((g0 / g1).im.abs() < 1e-9);
    }

    #[test]
    fn real_eigenvector_gives_real_model() {
        let pair = unit_pair(vec![
            c64(0.6, 0.0),
            c64(0.0, 0.0),
            c64(-0.8, 0.0),
            c64(0.0, 0.0),
        ]);
        let model = build_least_favorable(&pair, 2.0, 1, 2).unwrap();
        assert!(model.is_real());
    }

    #[test]
    fn rejects_bad_inputs() {
        let mut pair = unit_pair(vec![c64(1.0, 0.0)]);
        assert!(build_least_favorable(&pair, 0.0, 0, 1).is_err());
        assert!(build_least_favorable(&pair, 1.0, 1, 1).is_err());
        pair.converged = false;
        assert!(build_least_favorable(&pair, 1.0, 0, 1).is_err());
    }

    #[test]
    fn order_zero_density_is_constant_outer_product() {
        let v = vec![c64(0.6, 0.2), c64(-0.3, 0.4)];
        let model = MovingAverageModel::from_coefficients(vec![v.clone()], 2).unwrap();
        let samples = spectral_density(&model, &uniform_lambda_grid(8));
        for sample in &samples {
            for r in 0..2 {
                for c in 0..2 {
                    assert!((sample.f[(r, c)] - v[r] * v[c].conj()).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn scalar_ma1_density_formula() {
        let (g0, g1) = (1.5, -0.5);
        let model =
            MovingAverageModel::from_coefficients(vec![vec![c64(g0, 0.0)], vec![c64(g1, 0.0)]], 1)
                .unwrap();
        for lambda in uniform_lambda_grid(16) {
            let want = g0 * g0 + g1 * g1 + 2.0 * g0 * g1 * lambda.cos();
            let sample = &spectral_density(&model, &[lambda])[0];
            assert!((sample.f[(0, 0)].re - want).abs() < 1e-13);
            assert!(sample.f[(0, 0)].im.abs() < 1e-15);
        }
    }

    #[test]
    fn riemann_trace_matches_power() {
        let model = MovingAverageModel::from_coefficients(
            vec![
                vec![c64(0.7, 0.1), c64(-0.2, 0.3)],
                vec![c64(0.1, -0.4), c64(0.5, 0.0)],
                vec![c64(-0.3, 0.2), c64(0.0, 0.6)],
            ],
            2,
        )
        .unwrap();
        // plain Riemann sum over 4096 points as an independent route
        let grid = uniform_lambda_grid(4096);
        let samples = spectral_density(&model, &grid);
        let riemann: f64 =
            samples.iter().map(|s| s.f.trace().re).sum::<f64>() / grid.len() as f64;
        assert!((riemann - model.power()).abs() < 1e-6 * model.power());
    }

    #[test]
    fn factorization_residual_detects_corruption() {
        let model =
            MovingAverageModel::from_coefficients(vec![vec![c64(1.0, 0.0), c64(0.5, 0.0)]], 2)
                .unwrap();
        let mut samples = spectral_density(&model, &uniform_lambda_grid(8));
        let clean = verify_factorization(&samples).unwrap();
        assert!(clean.max_residual <= 1e-12);
        assert!(clean.psd_ok);
        // order-0 white model: K - M zero eigenvalues beyond the rank
        let (values, _) = jacobi_hermitian(&samples[0].f).unwrap();
        assert!(values[1].abs() <= 1e-12 * values[0].max(1.0));

        samples[3].f[(0, 1)] += c64(1e-3, 0.0);
        let corrupted = verify_factorization(&samples).unwrap();
        assert!(
            (corrupted.max_residual - 1e-3).abs() < 2e-4,
            "residual {}",
            corrupted.max_residual
        );
    }

    #[test]
    fn trace_power_is_exact_for_trig_polynomials() {
        let model = MovingAverageModel::from_coefficients(
            vec![
                vec![c64(0.3, -0.2)],
                vec![c64(-0.8, 0.1)],
                vec![c64(0.25, 0.45)],
            ],
            1,
        )
        .unwrap();
        let coarse = trace_power(&model, 2 * model.order() + 2).unwrap();
        let fine = trace_power(&model, 4096).unwrap();
        assert!((coarse - fine).abs() < 1e-13);
        assert!((coarse - model.power()).abs() < 1e-13);
        assert!(trace_power(&model, 5).is_err());
    }

    #[test]
    fn order_zero_trace_power_returns_power() {
        let model =
            MovingAverageModel::from_coefficients(vec![vec![c64(0.6, 0.0), c64(0.8, 0.0)]], 2)
                .unwrap();
        let got = trace_power(&model, 2).unwrap();
        assert!((got - 1.0).abs() < 1e-14);
    }

    #[test]
    fn scalar_ma1_trace_power() {
        let model =
            MovingAverageModel::from_coefficients(vec![vec![c64(1.2, 0.0)], vec![c64(0.7, 0.0)]], 1)
                .unwrap();
        let got = trace_power(&model, 4).unwrap();
        assert!((got - (1.2f64 * 1.2 + 0.7 * 0.7)).abs() < 1e-14);
    }

    #[test]
    fn phase_rotation_leaves_density_unchanged() {
        let base = vec![
            vec![c64(0.5, 0.2), c64(-0.1, 0.3)],
            vec![c64(0.2, -0.6), c64(0.4, 0.1)],
        ];
        let model = MovingAverageModel::from_coefficients(base.clone(), 2).unwrap();
        let phase = Complex64::from_polar(1.0, std::f64::consts::PI / 3.0);
        let rotated: Vec<Vec<Complex64>> = base
            .iter()
            .map(|col| col.iter().map(|z| z * phase).collect())
            .collect();
        let model_rot = MovingAverageModel::from_coefficients(rotated, 2).unwrap();
        let grid = uniform_lambda_grid(32);
        let a = spectral_density(&model, &grid);
        let b = spectral_density(&model_rot, &grid);
        for (sa, sb) in a.iter().zip(&b) {
            for r in 0..2 {
                for c in 0..2 {
                    assert!((sa.f[(r, c)] - sb.f[(r, c)]).norm() < 1e-14);
                }
            }
        }
        assert!((model.power() - model_rot.power()).abs() < 1e-14);
    }

    #[test]
    fn spectral_csv_shape() {
        let model =
            MovingAverageModel::from_coefficients(vec![vec![c64(1.0, 0.0), c64(0.0, 1.0)]], 2)
                .unwrap();
        let samples = spectral_density(&model, &uniform_lambda_grid(2));
        let mut buf = Vec::new();
        write_spectral_csv(&samples, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1 + 2 * 4);
        assert!(text.starts_with("lambda,k,n,re,im\n"));
    }
}
