//! Counter-based deterministic random values.
//!
//! Every draw is a pure function of a key, so a value at index `(s, m)` does
//! not depend on which range of indices was requested, how many replicates
//! ran before it, or how work was scheduled across threads. This is not
//! cryptographic randomness.

use num_complex::Complex64;

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer. Good bit avalanche, stable across platforms.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive a child seed from a parent seed and a stream index.
///
/// Used to key independent replicate streams off one experiment seed.
#[inline]
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    mix64(seed ^ mix64(stream.wrapping_mul(GAMMA).wrapping_add(GAMMA)))
}

/// Map a 64-bit word to the open interval (0, 1).
#[inline]
fn to_unit_open(x: u64) -> f64 {
    ((x >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
}

/// The `slot`-th 64-bit word of the counter stream keyed by `(seed, s, m)`.
#[inline]
fn word(seed: u64, s: i64, m: u32, slot: u64) -> u64 {
    let mut h = mix64(seed.wrapping_add(GAMMA));
    h = mix64(h ^ (s as u64).wrapping_mul(GAMMA));
    h = mix64(h ^ (m as u64).wrapping_add(GAMMA));
    mix64(h.wrapping_add(slot.wrapping_mul(GAMMA)))
}

/// Pair of independent standard normals at counter `(s, m)`, via Box-Muller.
#[inline]
pub fn gaussian_pair(seed: u64, s: i64, m: u32) -> (f64, f64) {
    let u1 = to_unit_open(word(seed, s, m, 1));
    let u2 = to_unit_open(word(seed, s, m, 2));
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = std::f64::consts::TAU * u2;
    (r * theta.cos(), r * theta.sin())
}

/// Circularly symmetric complex normal with `E|z|^2 = 1` at counter `(s, m)`.
#[inline]
pub fn complex_gaussian(seed: u64, s: i64, m: u32) -> Complex64 {
    let (x, y) = gaussian_pair(seed, s, m);
    Complex64::new(x, y) * std::f64::consts::FRAC_1_SQRT_2
}

/// Real standard normal (as a complex number with zero imaginary part).
#[inline]
pub fn real_gaussian(seed: u64, s: i64, m: u32) -> Complex64 {
    Complex64::new(gaussian_pair(seed, s, m).0, 0.0)
}

/// Small sequential PRNG for start vectors and test corpora.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix64(self.state)
    }

    /// Uniform draw in (0, 1).
    #[inline]
    pub fn next_unit(&mut self) -> f64 {
        to_unit_open(self.next_u64())
    }

    /// Uniform draw in (-1, 1).
    #[inline]
    pub fn next_symmetric(&mut self) -> f64 {
        2.0 * self.next_unit() - 1.0
    }

    /// Uniform complex draw in the square (-1, 1) x (-1, 1).
    #[inline]
    pub fn next_complex(&mut self) -> Complex64 {
        Complex64::new(self.next_symmetric(), self.next_symmetric())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counter_values_do_not_depend_on_order() {
        let a = complex_gaussian(7, -3, 0);
        for s in -10..10 {
            let _ = complex_gaussian(7, s, 0);
        }
        assert_eq!(a, complex_gaussian(7, -3, 0));
    }

    #[test]
    fn gaussian_moments() {
        let n = 200_000;
        let mut sum = Complex64::new(0.0, 0.0);
        let mut sum_sq = 0.0;
        for s in 0..n {
            let z = complex_gaussian(42, s, 0);
            sum += z;
            sum_sq += z.norm_sqr();
        }
        let mean = sum / n as f64;
        let var = sum_sq / n as f64;
        // 4 standard errors: SE(mean component) = sqrt(0.5/n), SE(|z|^2) = 1/sqrt(n)
        let se_mean = (0.5 / n as f64).sqrt();
        assert!(mean.re.abs() < 4.0 * se_mean, "mean.re = {}", mean.re);
        assert!(mean.im.abs() < 4.0 * se_mean, "mean.im = {}", mean.im);
        assert!((var - 1.0).abs() < 4.0 / (n as f64).sqrt(), "var = {var}");
    }

    #[test]
    fn distinct_seeds_decorrelated() {
        let n = 10_000;
        let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
        for s in 0..n {
            let x = complex_gaussian(1, s, 0).re;
            let y = complex_gaussian(2, s, 0).re;
            sxy += x * y;
            sxx += x * x;
            syy += y * y;
        }
        let corr = sxy / (sxx * syy).sqrt();
        assert!(corr.abs() < 0.02, "corr = {corr}");
    }

    #[test]
    fn splitmix_reproducible() {
        let mut a = SplitMix64::new(123);
        let mut b = SplitMix64::new(123);
        for _ in 0..64 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }
}
