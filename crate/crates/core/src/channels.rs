//! Binary asymmetric channels, distribution distances and entropy bounds.

use crate::{Error, Result};
use std::f64::consts::E;

/// Classical binary channel that flips input 0 with probability `eps0`
/// and input 1 with probability `eps1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryChannel {
    pub eps0: f64,
    pub eps1: f64,
}

/// Below this `|1 - eps0 - eps1|` the output is treated as independent of the input.
const DEGENERATE: f64 = 1e-12;
const GOLDEN_ITERATIONS: usize = 200;

impl BinaryChannel {
    pub fn new(eps0: f64, eps1: f64) -> Result<Self> {
        for e in [eps0, eps1] {
            if !(0.0..=1.0).contains(&e) {
                return Err(Error::OutOfRange { value: e, range: "[0, 1]" });
            }
        }
        Ok(Self { eps0, eps1 })
    }

    /// Output distribution `(P(0), P(1))` conditioned on each input.
    pub fn conditional_outputs(&self) -> ([f64; 2], [f64; 2]) {
        ([1.0 - self.eps0, self.eps0], [self.eps1, 1.0 - self.eps1])
    }

    /// Total variation distance between the two conditional output distributions.
    pub fn output_tvd(&self) -> f64 {
        (1.0 - self.eps0 - self.eps1).abs()
    }

    /// Mutual information in bits when input 0 is sent with probability `p0`.
    pub fn mutual_information(&self, p0: f64) -> f64 {
        let out1 = p0 * self.eps0 + (1.0 - p0) * (1.0 - self.eps1);
        let noise = p0 * binary_entropy(self.eps0) + (1.0 - p0) * binary_entropy(self.eps1);
        (binary_entropy(out1) - noise).max(0.0)
    }
}

/// `x log2 x` with the convention `0 log 0 = 0`.
fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> f64 {
    -xlog2x(p) - xlog2x(1.0 - p)
}

/// Shannon entropy in bits.
pub fn entropy(p: &[f64]) -> f64 {
    -p.iter().map(|&x| xlog2x(x)).sum::<f64>()
}

/// `log2(1 + 2^s)` without overflow for large `|s|`.
fn log2_one_plus_exp2(s: f64) -> f64 {
    if s > 0.0 {
        s + (-s).exp2().ln_1p() / std::f64::consts::LN_2
    } else {
        s.exp2().ln_1p() / std::f64::consts::LN_2
    }
}

/// Capacity in bits from the closed-form optimum of the binary asymmetric channel.
///
/// With `s = (h(e0) - h(e1)) / (1 - e0 - e1)` the capacity is
/// `log2(1 + 2^s) - ((1 - e1) h(e0) - e0 h(e1)) / (1 - e0 - e1)`.
pub fn capacity_closed_form(ch: BinaryChannel) -> f64 {
    let d = 1.0 - ch.eps0 - ch.eps1;
    if d.abs() < DEGENERATE {
        return 0.0;
    }
    let (h0, h1) = (binary_entropy(ch.eps0), binary_entropy(ch.eps1));
    let s = (h0 - h1) / d;
    let c = log2_one_plus_exp2(s) - ((1.0 - ch.eps1) * h0 - ch.eps0 * h1) / d;
    c.clamp(0.0, 1.0)
}

/// Capacity in bits by maximizing the mutual information over the input prior.
///
/// The mutual information is concave in the prior, so golden-section search converges
/// to the global maximum.
pub fn capacity_optimized(ch: BinaryChannel) -> f64 {
    let f = |p: f64| ch.mutual_information(p);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (0.0, 1.0);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..GOLDEN_ITERATIONS {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    f1.max(f2).max(f(0.5 * (a + b)))
}

fn check_regime(x: f64) -> Result<()> {
    if x > 0.0 && x <= 1.0 / E {
        Ok(())
    } else {
        Err(Error::OutOfRegime { value: x, regime: "(0, 1/e]" })
    }
}

/// Upper bound `d - d log2 d` on the capacity of a channel whose conditional outputs
/// are at total variation distance `delta`.
pub fn tvd_capacity_bound(delta: f64) -> Result<f64> {
    check_regime(delta)?;
    Ok(delta - delta * delta.log2())
}

/// Continuity bound `T log2 d - T log2 T` on the entropy difference of two
/// distributions over `d` symbols at distance `t`.
pub fn fannes_bound(t: f64, d: usize) -> Result<f64> {
    check_regime(t)?;
    if d < 2 {
        return Err(Error::OutOfRange { value: d as f64, range: "alphabet size >= 2" });
    }
    Ok(t * (d as f64).log2() - t * t.log2())
}

fn check_distribution(p: &[f64]) -> Result<()> {
    let s: f64 = p.iter().sum();
    if (s - 1.0).abs() > 1e-9 || p.iter().any(|&x| x < -1e-12) {
        return Err(Error::NotNormalized(s));
    }
    Ok(())
}

/// Total variation distance `(1/2) sum |p_j - q_j|`.
pub fn tvd(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch(p.len(), q.len()));
    }
    check_distribution(p)?;
    check_distribution(q)?;
    let d = 0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>();
    Ok(d.min(1.0))
}
