//! Weight functions a(t) on [0, infinity).
//!
//! The estimated functional integrates the process against one of these
//! weights. Named analytic kinds carry closed-form Fourier integrals; sampled
//! grids interpolate linearly and fall back to quadrature.

use crate::error::{Error, Result};

/// A weight function on `[0, inf)`, absolutely integrable.
#[derive(Debug, Clone)]
pub enum WeightFunction {
    /// `amplitude * exp(-rate * t)` for all `t >= 0`.
    ExponentialDecay { amplitude: f64, rate: f64 },
    /// `amplitude * cos(2*pi*freq*t + phase)` on `[0, end)`, zero after.
    WindowedCosine {
        amplitude: f64,
        freq: f64,
        phase: f64,
        end: f64,
    },
    /// `amplitude` on `[start, end)`, zero elsewhere.
    Indicator {
        amplitude: f64,
        start: f64,
        end: f64,
    },
    /// Constant `values[i]` on `[edges[i], edges[i+1])`, zero after the last edge.
    PiecewiseConstant { edges: Vec<f64>, values: Vec<f64> },
    /// Samples on the uniform grid `t_i = i * step`, linear interpolation
    /// between samples, zero beyond the last sample.
    SampledGrid { step: f64, values: Vec<f64> },
}

impl WeightFunction {
    /// Validate the parameters of this kind.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidArgument(msg));
        match self {
            Self::ExponentialDecay { amplitude, rate } => {
                if !rate.is_finite() || *rate <= 0.0 {
                    return fail(format!("exponential-decay rate must be positive, got {rate}"));
                }
                if !amplitude.is_finite() {
                    return fail("exponential-decay amplitude must be finite".into());
                }
            }
            Self::WindowedCosine { freq, end, amplitude, phase } => {
                if !end.is_finite() || *end <= 0.0 {
                    return fail(format!("windowed-cosine end must be positive, got {end}"));
                }
                if ![*freq, *amplitude, *phase].iter().all(|x| x.is_finite()) {
                    return fail("windowed-cosine parameters must be finite".into());
                }
            }
            Self::Indicator { start, end, amplitude } => {
                if !(*start >= 0.0 && end > start) {
                    return fail(format!("indicator needs 0 <= start < end, got [{start}, {end})"));
                }
                if !amplitude.is_finite() {
                    return fail("indicator amplitude must be finite".into());
                }
            }
            Self::PiecewiseConstant { edges, values } => {
                if edges.len() != values.len() + 1 {
                    return fail(format!(
                        "piecewise-constant needs edges.len() == values.len() + 1, got {} and {}",
                        edges.len(),
                        values.len()
                    ));
                }
                if values.is_empty() {
                    return fail("piecewise-constant needs at least one piece".into());
                }
                if edges[0] < 0.0 || edges.windows(2).any(|w| w[1] <= w[0]) {
                    return fail("piecewise-constant edges must be nonnegative and increasing".into());
                }
            }
            Self::SampledGrid { step, values } => {
                if !step.is_finite() || *step <= 0.0 {
                    return fail(format!("sampled-grid step must be positive, got {step}"));
                }
                if values.len() < 2 {
                    return fail("sampled-grid needs at least two samples".into());
                }
            }
        }
        Ok(())
    }

    /// Evaluate `a(t)`. Defined for every `t >= 0`; negative `t` returns zero.
    pub fn eval(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        match self {
            Self::ExponentialDecay { amplitude, rate } => amplitude * (-rate * t).exp(),
            Self::WindowedCosine { amplitude, freq, phase, end } => {
                if t < *end {
                    amplitude * (std::f64::consts::TAU * freq * t + phase).cos()
                } else {
                    0.0
                }
            }
            Self::Indicator { amplitude, start, end } => {
                if t >= *start && t < *end {
                    *amplitude
                } else {
                    0.0
                }
            }
            Self::PiecewiseConstant { edges, values } => {
                if t < edges[0] || t >= edges[edges.len() - 1] {
                    return 0.0;
                }
                // edges are sorted; find the piece containing t
                match edges.binary_search_by(|e| e.partial_cmp(&t).unwrap()) {
                    Ok(i) => {
                        if i < values.len() {
                            values[i]
                        } else {
                            0.0
                        }
                    }
                    Err(i) => values[i - 1],
                }
            }
            Self::SampledGrid { step, values } => {
                let last = step * (values.len() - 1) as f64;
                if t > last {
                    return 0.0;
                }
                let x = t / step;
                let i = (x.floor() as usize).min(values.len() - 2);
                let frac = x - i as f64;
                values[i] * (1.0 - frac) + values[i + 1] * frac
            }
        }
    }

    /// End of support, or `f64::INFINITY` for kinds with unbounded decay.
    pub fn support_end(&self) -> f64 {
        match self {
            Self::ExponentialDecay { .. } => f64::INFINITY,
            Self::WindowedCosine { end, .. } => *end,
            Self::Indicator { end, .. } => *end,
            Self::PiecewiseConstant { edges, .. } => edges[edges.len() - 1],
            Self::SampledGrid { step, values } => step * (values.len() - 1) as f64,
        }
    }

    /// Numerical `int_0^inf |a(t)| dt` (closed form where available).
    pub fn integral_abs(&self) -> f64 {
        match self {
            Self::ExponentialDecay { amplitude, rate } => amplitude.abs() / rate,
            Self::Indicator { amplitude, start, end } => amplitude.abs() * (end - start),
            Self::PiecewiseConstant { edges, values } => values
                .iter()
                .zip(edges.windows(2))
                .map(|(v, w)| v.abs() * (w[1] - w[0]))
                .sum(),
            Self::SampledGrid { step, values } => {
                // trapezoid on |values|; exact for the piecewise-linear |a| when
                // samples do not change sign inside an interval
                let mut acc = 0.0;
                for w in values.windows(2) {
                    acc += 0.5 * step * (w[0].abs() + w[1].abs());
                }
                acc
            }
            Self::WindowedCosine { .. } => {
                let end = self.support_end();
                let n = 65_536;
                let h = end / n as f64;
                let mut acc = 0.5 * (self.eval(0.0).abs() + self.eval(end).abs());
                for i in 1..n {
                    acc += self.eval(i as f64 * h).abs();
                }
                acc * h
            }
        }
    }

    /// Check absolute integrability against a configured bound.
    pub fn check_integrable(&self, bound: f64) -> Result<f64> {
        let total = self.integral_abs();
        if !total.is_finite() || total > bound {
            return Err(Error::InvalidArgument(format!(
                "integral of |a(t)| is {total}, exceeds the configured bound {bound}"
            )));
        }
        Ok(total)
    }
}

/// Load a sampled-grid weight from CSV with header `t,value`.
///
/// The grid must be uniform starting at t = 0; the step is inferred from the
/// first two rows.
pub fn load_weight_csv(path: &std::path::Path) -> Result<WeightFunction> {
    let text = std::fs::read_to_string(path)?;
    parse_weight_csv(&text)
}

pub fn parse_weight_csv(text: &str) -> Result<WeightFunction> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::CsvParse("empty weight CSV".into()))?;
    let header_norm: String = header.chars().filter(|c| !c.is_whitespace()).collect();
    if header_norm != "t,value" {
        return Err(Error::CsvParse(format!(
            "expected header \"t,value\", got {header:?}"
        )));
    }
    let mut ts = Vec::new();
    let mut values = Vec::new();
    for (lineno, line) in lines {
        let mut fields = line.split(',');
        let t: f64 = fields
            .next()
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::CsvParse(format!("line {}: bad t field", lineno + 1)))?;
        let v: f64 = fields
            .next()
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::CsvParse(format!("line {}: bad value field", lineno + 1)))?;
        if fields.next().is_some() {
            return Err(Error::CsvParse(format!("line {}: too many fields", lineno + 1)));
        }
        ts.push(t);
        values.push(v);
    }
    if ts.len() < 2 {
        return Err(Error::CsvParse("need at least two samples".into()));
    }
    if ts[0] != 0.0 {
        return Err(Error::CsvParse(format!("grid must start at t = 0, got {}", ts[0])));
    }
    let step = ts[1] - ts[0];
    if step <= 0.0 {
        return Err(Error::CsvParse("grid step must be positive".into()));
    }
    for (i, &t) in ts.iter().enumerate() {
        let expected = step * i as f64;
        if (t - expected).abs() > 1e-9 * step.max(t.abs()) {
            return Err(Error::CsvParse(format!(
                "non-uniform grid at row {}: t = {t}, expected {expected}",
                i + 1
            )));
        }
    }
    let w = WeightFunction::SampledGrid { step, values };
    w.validate()?;
    Ok(w)
}
