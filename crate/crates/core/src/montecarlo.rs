//! Simulation of the least-favorable sequence, the optimal one-step-ahead
//! estimate from past innovations, and the empirical saddle-value check
//! `E|A_N zeta - hat A_N zeta|^2 = P * nu_N^2`.
//!
//! Replicates are independent and may run in parallel; per-replicate results
//! are keyed by replicate index and reduced in a fixed order, so reports are
//! bit-identical for any thread count.

use num_complex::Complex64;

use crate::blocking::FourierBlockCoefficients;
use crate::error::{Error, Result};
use crate::leastfav::MovingAverageModel;
use crate::operator::assemble_qn;
use crate::parallel::par_map_indexed;
use crate::rng;

/// Distribution of the innovation values; both have zero mean and
/// `E |eps|^2 = 1`, so second-moment targets are identical.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InnovationLaw {
    /// Circularly symmetric complex Gaussian.
    ComplexCircular,
    /// Real standard Gaussian (used when model and functional are real).
    RealGaussian,
}

/// Orthonormal innovation values `eps_m(s)` on an index window.
///
/// Values are a pure function of `(seed, s, m)`, so the draw at a given index
/// does not depend on the requested range.
#[derive(Debug, Clone)]
pub struct InnovationStream {
    seed: u64,
    s_min: i64,
    s_max: i64,
    multiplicity: usize,
    law: InnovationLaw,
    values: Vec<Complex64>,
}

impl InnovationStream {
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn s_min(&self) -> i64 {
        self.s_min
    }

    pub fn s_max(&self) -> i64 {
        self.s_max
    }

    pub fn multiplicity(&self) -> usize {
        self.multiplicity
    }

    pub fn law(&self) -> InnovationLaw {
        self.law
    }

    pub fn covers(&self, lo: i64, hi: i64) -> bool {
        lo > hi || (self.s_min <= lo && hi <= self.s_max)
    }

    /// Value `eps_m(s)`; panics outside the simulated window.
    #[inline]
    pub fn epsilon(&self, s: i64, m: usize) -> Complex64 {
        debug_assert!(self.s_min <= s && s <= self.s_max && m < self.multiplicity);
        self.values[(s - self.s_min) as usize * self.multiplicity + m]
    }
}

/// Draw innovations on `[s_min, s_max]` (complex circular law).
pub fn simulate_innovations(
    seed: u64,
    s_min: i64,
    s_max: i64,
    multiplicity: usize,
) -> Result<InnovationStream> {
    simulate_innovations_with_law(seed, s_min, s_max, multiplicity, InnovationLaw::ComplexCircular)
}

pub fn simulate_innovations_with_law(
    seed: u64,
    s_min: i64,
    s_max: i64,
    multiplicity: usize,
    law: InnovationLaw,
) -> Result<InnovationStream> {
    if s_min > s_max {
        return Err(Error::InvalidArgument(format!(
            "innovation window [{s_min}, {s_max}] is empty"
        )));
    }
    if multiplicity == 0 {
        return Err(Error::InvalidArgument("multiplicity must be at least 1".into()));
    }
    let count = (s_max - s_min + 1) as usize * multiplicity;
    let values = (0..count)
        .map(|i| {
            let s = s_min + (i / multiplicity) as i64;
            let m = (i % multiplicity) as u32;
            match law {
                InnovationLaw::ComplexCircular => rng::complex_gaussian(seed, s, m),
                InnovationLaw::RealGaussian => rng::real_gaussian(seed, s, m),
            }
        })
        .collect();
    Ok(InnovationStream {
        seed,
        s_min,
        s_max,
        multiplicity,
        law,
        values,
    })
}

/// Realized blocks `zeta_j` on a window of block indices.
#[derive(Debug, Clone)]
pub struct SequenceRealization {
    j_min: i64,
    j_max: i64,
    freq_count: usize,
    zeta: Vec<Vec<Complex64>>,
}

impl SequenceRealization {
    pub fn j_min(&self) -> i64 {
        self.j_min
    }

    pub fn j_max(&self) -> i64 {
        self.j_max
    }

    pub fn freq_count(&self) -> usize {
        self.freq_count
    }

    /// The K-vector at block `j`.
    pub fn block(&self, j: i64) -> &[Complex64] {
        assert!(self.j_min <= j && j <= self.j_max, "block {j} not realized");
        &self.zeta[(j - self.j_min) as usize]
    }
}

/// Exact finite convolution `zeta_j = sum_{s=j-order}^{j} g(j-s) eps(s)`.
pub fn realize_sequence(
    model: &MovingAverageModel,
    noise: &InnovationStream,
    j_min: i64,
    j_max: i64,
) -> Result<SequenceRealization> {
    convolve(model, noise, j_min, j_max, i64::MAX)
}

/// The optimal estimate `hat zeta_j`: the same convolution restricted to
/// observed innovations `s <= -1`.
pub fn optimal_estimate(
    model: &MovingAverageModel,
    noise: &InnovationStream,
    j_min: i64,
    j_max: i64,
) -> Result<SequenceRealization> {
    convolve(model, noise, j_min, j_max, -1)
}

fn convolve(
    model: &MovingAverageModel,
    noise: &InnovationStream,
    j_min: i64,
    j_max: i64,
    s_cap: i64,
) -> Result<SequenceRealization> {
    if j_min > j_max {
        return Err(Error::InvalidArgument(format!(
            "block window [{j_min}, {j_max}] is empty"
        )));
    }
    if noise.multiplicity() != model.multiplicity() {
        return Err(Error::DimensionMismatch(format!(
            "innovation multiplicity {} differs from model multiplicity {}",
            noise.multiplicity(),
            model.multiplicity()
        )));
    }
    let order = model.order() as i64;
    let need_lo = j_min - order;
    let need_hi = j_max.min(s_cap);
    if !noise.covers(need_lo, need_hi) {
        return Err(Error::InvalidArgument(format!(
            "innovation window [{}, {}] does not cover required [{need_lo}, {need_hi}]",
            noise.s_min(),
            noise.s_max()
        )));
    }
    let k = model.freq_count();
    let zeta = (j_min..=j_max)
        .map(|j| {
            let mut block = vec![Complex64::new(0.0, 0.0); k];
            let s_lo = j - order;
            let s_hi = j.min(s_cap);
            let mut s = s_lo;
            while s <= s_hi {
                let lag = (j - s) as usize;
                for m in 0..model.multiplicity() {
                    let eps = noise.epsilon(s, m);
                    for (k0, dst) in block.iter_mut().enumerate() {
                        *dst += model.coeff(k0, m, lag) * eps;
                    }
                }
                s += 1;
            }
            block
        })
        .collect();
    Ok(SequenceRealization {
        j_min,
        j_max,
        freq_count: k,
        zeta,
    })
}

/// `A_N zeta = sum_{j=0}^{N} sum_k a_{kj} zeta_{kj}` on a realization.
pub fn functional_value(
    c: &FourierBlockCoefficients,
    r: &SequenceRealization,
    n: usize,
) -> Result<Complex64> {
    if r.freq_count() != c.freq_count() {
        return Err(Error::DimensionMismatch(format!(
            "realization has {} frequencies, coefficients have {}",
            r.freq_count(),
            c.freq_count()
        )));
    }
    if n + 1 > c.block_count() {
        return Err(Error::InvalidArgument(format!(
            "functional horizon N = {n} needs {} coefficient blocks, have {}",
            n + 1,
            c.block_count()
        )));
    }
    if r.j_min() > 0 || r.j_max() < n as i64 {
        return Err(Error::InvalidArgument(format!(
            "realization window [{}, {}] does not cover blocks [0, {n}]",
            r.j_min(),
            r.j_max()
        )));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..=n {
        let block = r.block(j as i64);
        for k0 in 0..c.freq_count() {
            acc += c.get(k0, j) * block[k0];
        }
    }
    Ok(acc)
}

/// Population mean-square error of the optimal estimate, evaluated by the
/// deterministic triple sum
/// `sum_{k,n,m} sum_{p,q} g_{km}(p) conj(g_{nm}(q)) Q^N_{kn}(p,q)`.
///
/// With `g` the scaled top eigenvector this equals `P * nu_N^2`.
pub fn population_mse(
    model: &MovingAverageModel,
    c: &FourierBlockCoefficients,
    n: usize,
) -> Result<f64> {
    if model.freq_count() != c.freq_count() {
        return Err(Error::DimensionMismatch(format!(
            "model has {} frequencies, coefficients have {}",
            model.freq_count(),
            c.freq_count()
        )));
    }
    let q = assemble_qn(c, n)?;
    let m = q.matrix().expect("assemble_qn is explicit");
    let k = c.freq_count();
    let mut acc = Complex64::new(0.0, 0.0);
    for mm in 0..model.multiplicity() {
        for p in 0..=n {
            for qq in 0..=n {
                for k0 in 0..k {
                    let gp = model.coeff(k0, mm, p);
                    if gp == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for n0 in 0..k {
                        let gq = model.coeff(n0, mm, qq);
                        acc += gp * gq.conj() * m[(p * k + k0, qq * k + n0)];
                    }
                }
            }
        }
    }
    Ok(acc.re)
}

/// Empirical saddle-value report.
#[derive(Debug, Clone, Copy)]
pub struct MonteCarloReport {
    pub replicates: usize,
    /// Sample mean of `|A_N zeta - hat A_N zeta|^2`.
    pub mse: f64,
    /// Sample standard deviation / sqrt(replicates).
    pub stderr: f64,
    /// The deterministic target `P * nu_N^2`.
    pub target: f64,
    pub z_score: f64,
    pub seed: u64,
}

/// Monte Carlo estimate of the mean-square error against the analytic target.
///
/// Per replicate: draw innovations, realize the sequence and the optimal
/// estimate, and take `|A_N zeta - hat A_N zeta|^2`. The innovation law is
/// real Gaussian when both the model and the functional are real-valued,
/// complex circular otherwise.
pub fn mc_mse(
    model: &MovingAverageModel,
    c: &FourierBlockCoefficients,
    n: usize,
    replicates: usize,
    seed: u64,
) -> Result<MonteCarloReport> {
    let target = population_mse(model, c, n)?;
    mc_mse_with_target(model, c, n, replicates, seed, target)
}

/// [`mc_mse`] with an explicit target (the CLI's verification hook).
pub fn mc_mse_with_target(
    model: &MovingAverageModel,
    c: &FourierBlockCoefficients,
    n: usize,
    replicates: usize,
    seed: u64,
    target: f64,
) -> Result<MonteCarloReport> {
    if replicates == 0 {
        return Err(Error::InvalidArgument("replicates must be at least 1".into()));
    }
    let coeffs_real = (0..c.freq_count())
        .all(|k0| (0..c.block_count()).all(|j| c.get(k0, j).im == 0.0));
    let law = if model.is_real() && coeffs_real {
        InnovationLaw::RealGaussian
    } else {
        InnovationLaw::ComplexCircular
    };
    let order = model.order() as i64;

    let squared_errors: Vec<f64> = try_par_map(replicates, |rep| {
        let rep_seed = rng::derive_seed(seed, rep as u64);
        let noise = simulate_innovations_with_law(rep_seed, -order, n as i64, 1, law)?;
        let zeta = realize_sequence(model, &noise, 0, n as i64)?;
        let estimate = optimal_estimate(model, &noise, 0, n as i64)?;
        let a = functional_value(c, &zeta, n)?;
        let a_hat = functional_value(c, &estimate, n)?;
        Ok((a - a_hat).norm_sqr())
    })?;

    // fixed-order reduction keyed by replicate index
    let mean = squared_errors.iter().sum::<f64>() / replicates as f64;
    let var = if replicates > 1 {
        squared_errors
            .iter()
            .map(|x| (x - mean) * (x - mean))
            .sum::<f64>()
            / (replicates - 1) as f64
    } else {
        0.0
    };
    let stderr = (var / replicates as f64).sqrt();
    let z_score = if stderr > 0.0 {
        (mean - target) / stderr
    } else if (mean - target).abs() <= 1e-12 * target.abs().max(1.0) {
        0.0
    } else {
        f64::INFINITY * (mean - target).signum()
    };
    Ok(MonteCarloReport {
        replicates,
        mse: mean,
        stderr,
        target,
        z_score,
        seed,
    })
}

fn try_par_map<T, F>(n: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    par_map_indexed(n, f).into_iter().collect()
}

/// A sampled path of the periodically correlated process on a block window.
#[derive(Debug, Clone)]
pub struct PcPath {
    pub period: f64,
    pub u_grid: usize,
    pub j_min: i64,
    /// Sample times `u_l + j T`, block-major.
    pub times: Vec<f64>,
    pub values: Vec<Complex64>,
}

/// Expand one block `zeta_j` on the basis grid:
/// `zeta(u_l + jT) = sum_k zeta_{kj} e_k(u_l)` with
/// `e_k(u) = T^{-1/2} exp(2 pi i m(k) u / T)`.
pub fn expand_block(zeta_j: &[Complex64], period: f64, u_grid: usize) -> Vec<Complex64> {
    let scale = period.sqrt().recip();
    (0..u_grid)
        .map(|l| {
            let u = period * l as f64 / u_grid as f64;
            let mut acc = Complex64::new(0.0, 0.0);
            for (k0, z) in zeta_j.iter().enumerate() {
                let m = crate::blocking::frequency(k0 + 1) as f64;
                let phase = Complex64::from_polar(1.0, std::f64::consts::TAU * m * u / period);
                acc += z * phase;
            }
            acc * scale
        })
        .collect()
}

/// Realize the moving average on `[j_min, j_max]` and expand each block on a
/// uniform grid of `u_grid` points per period.
pub fn synthesize_pc_path(
    model: &MovingAverageModel,
    period: f64,
    j_min: i64,
    j_max: i64,
    u_grid: usize,
    noise: &InnovationStream,
) -> Result<PcPath> {
    if u_grid < 2 * model.freq_count() {
        return Err(Error::GridTooCoarse(format!(
            "u_grid = {u_grid} is below 2*K = {}",
            2 * model.freq_count()
        )));
    }
    if !(period.is_finite() && period > 0.0) {
        return Err(Error::InvalidArgument(format!("period must be positive, got {period}")));
    }
    let r = realize_sequence(model, noise, j_min, j_max)?;
    let mut times = Vec::with_capacity(((j_max - j_min + 1) as usize) * u_grid);
    let mut values = Vec::with_capacity(times.capacity());
    for j in j_min..=j_max {
        let block = expand_block(r.block(j), period, u_grid);
        for (l, v) in block.into_iter().enumerate() {
            times.push(period * (j as f64 + l as f64 / u_grid as f64));
            values.push(v);
        }
    }
    Ok(PcPath {
        period,
        u_grid,
        j_min,
        times,
        values,
    })
}

/// Write a path as CSV rows `t,re,im`.
pub fn write_path_csv<W: std::io::Write>(path: &PcPath, out: &mut W) -> Result<()> {
    writeln!(out, "t,re,im")?;
    for (t, v) in path.times.iter().zip(&path.values) {
        writeln!(
            out,
            "{},{},{}",
            crate::operator::fmt_f64(*t),
            crate::operator::fmt_f64(v.re),
            crate::operator::fmt_f64(v.im)
        )?;
    }
    Ok(())
}

/// Sample covariance table of an ensemble of PC paths with its periodicity
/// diagnostics.
#[derive(Debug, Clone)]
pub struct PcCovariance {
    pub times: Vec<f64>,
    /// `cov[(a, b)] = mean_r zeta_r(t_a) * conj(zeta_r(t_b))`.
    pub cov: crate::linalg::CMatrix,
    /// `max |cov(t_a, t_b) - cov(t_a + T, t_b + T)|` over the comparable grid.
    pub periodicity_defect: f64,
    /// The same maximum measured in per-entry standard errors.
    pub periodicity_max_z: f64,
}

/// Estimate the covariance table and the periodicity defect of an ensemble.
///
/// All paths must share the same grid; the defect compares every pair of
/// sample times against the pair shifted by one period.
pub fn empirical_pc_covariance(paths: &[PcPath]) -> Result<PcCovariance> {
    if paths.len() < 2 {
        return Err(Error::InvalidArgument(
            "degenerate ensemble: need at least 2 paths".into(),
        ));
    }
    let first = &paths[0];
    let len = first.times.len();
    if paths.iter().any(|p| {
        p.times.len() != len
            || p.u_grid != first.u_grid
            || p.period != first.period
            || p.j_min != first.j_min
    }) {
        return Err(Error::InvalidArgument("paths have mismatched grids".into()));
    }
    let r = paths.len() as f64;

    let rows: Vec<Vec<Complex64>> = par_map_indexed(len, |a| {
        (0..len)
            .map(|b| {
                let mut acc = Complex64::new(0.0, 0.0);
                for p in paths {
                    acc += p.values[a] * p.values[b].conj();
                }
                acc / r
            })
            .collect()
    });
    let cov = crate::linalg::CMatrix::from_rows(&rows);

    // compare (a, b) against (a + shift, b + shift), one period later
    let shift = first.u_grid;
    let mut defect = 0.0f64;
    let mut max_z = 0.0f64;
    if len > shift {
        let stats: Vec<(f64, f64)> = par_map_indexed((len - shift) * (len - shift), |idx| {
            let a = idx / (len - shift);
            let b = idx % (len - shift);
            let mean = cov[(a, b)] - cov[(a + shift, b + shift)];
            let mut var = 0.0;
            for p in paths {
                let x = p.values[a] * p.values[b].conj()
                    - p.values[a + shift] * p.values[b + shift].conj();
                var += (x - mean).norm_sqr();
            }
            let se = (var / (r * (r - 1.0))).sqrt();
            (mean.norm(), se)
        });
        for (d, se) in stats {
            defect = defect.max(d);
            let z = if se > 0.0 {
                d / se
            } else if d == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            max_z = max_z.max(z);
        }
    }
    Ok(PcCovariance {
        times: first.times.clone(),
        cov,
        periodicity_defect: defect,
        periodicity_max_z: max_z,
    })
}

/// Grid maximum of `|A_N(e^{i lambda})|^2 = sum_k |sum_j a_{kj} e^{i j lambda}|^2`.
///
/// By the saddle-point chain this bounds `nu_N^2` from above (estimate with
/// the zero observation filter).
pub fn upper_bound_grid(c: &FourierBlockCoefficients, n: usize, grid_size: usize) -> Result<f64> {
    if n + 1 > c.block_count() {
        return Err(Error::InvalidArgument(format!(
            "horizon N = {n} needs {} blocks, have {}",
            n + 1,
            c.block_count()
        )));
    }
    if grid_size < 2 * (n + 1) {
        return Err(Error::GridTooCoarse(format!(
            "grid_size = {grid_size} is below 2*(N+1) = {}",
            2 * (n + 1)
        )));
    }
    let values = par_map_indexed(grid_size, |l| {
        let lambda = -std::f64::consts::PI + std::f64::consts::TAU * l as f64 / grid_size as f64;
        (0..c.freq_count())
            .map(|k0| {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..=n {
                    acc += c.get(k0, j) * Complex64::from_polar(1.0, j as f64 * lambda);
                }
                acc.norm_sqr()
            })
            .sum::<f64>()
    });
    Ok(values.into_iter().fold(0.0, f64::max))
}
