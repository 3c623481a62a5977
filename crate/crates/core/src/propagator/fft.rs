//! In-place radix-2 FFT with unit-modulus twiddles.
//!
//! Each twiddle is nudged by a few ulps toward the unit circle. Together with
//! the plain butterfly structure this keeps the norm drift of a long
//! propagation a random walk rather than a steady gain.

use std::f64::consts::PI;

use num_complex::Complex64;

pub(crate) struct Radix2 {
    n: usize,
    bits: u32,
    /// exp(∓2πik/n), k < n/2
    twiddles: Vec<Complex64>,
}

impl Radix2 {
    /// `n` must be a power of two.
    pub(crate) fn new(n: usize, inverse: bool) -> Self {
        assert!(n.is_power_of_two() && n >= 2, "radix-2 length {n}");
        let sign = if inverse { 1.0 } else { -1.0 };
        let twiddles = (0..n / 2)
            .map(|k| unit_phasor(sign * 2.0 * PI * k as f64 / n as f64))
            .collect();
        Radix2 {
            n,
            bits: n.trailing_zeros(),
            twiddles,
        }
    }

    /// Unnormalized transform, `Σ x_j exp(∓2πijk/n)`.
    pub(crate) fn process(&self, a: &mut [Complex64]) {
        assert_eq!(a.len(), self.n);
        let shift = usize::BITS - self.bits;
        for i in 0..self.n {
            let j = i.reverse_bits() >> shift;
            if j > i {
                a.swap(i, j);
            }
        }
        let mut half = 1;
        while half < self.n {
            let stride = self.n / (2 * half);
            for block in a.chunks_exact_mut(2 * half) {
                let (lo, hi) = block.split_at_mut(half);
                for (k, (x, y)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                    let t = *y * self.twiddles[k * stride];
                    *y = *x - t;
                    *x += t;
                }
            }
            half *= 2;
        }
    }
}

/// `c² + s² − 1` to about twice double precision.
fn unit_error(c: f64, s: f64) -> f64 {
    let (cc, s2) = (c * c, s * s);
    let (cc_err, s2_err) = (c.mul_add(c, -cc), s.mul_add(s, -s2));
    // the larger square is at least 1/2, so subtracting 1 from it is exact
    let head = if cc >= s2 {
        (cc - 1.0) + s2
    } else {
        (s2 - 1.0) + cc
    };
    head + (cc_err + s2_err)
}

fn nudge(x: f64, ulps: i64) -> f64 {
    if x == 0.0 || ulps == 0 {
        return x;
    }
    // same-sign neighbours: moving the bit pattern moves the magnitude
    let bits = x.abs().to_bits() as i64 + ulps;
    f64::from_bits(bits as u64).copysign(x)
}

/// `exp(iθ)` rounded to the nearby double pair with the smallest modulus error.
pub(crate) fn unit_phasor(theta: f64) -> Complex64 {
    let (s0, c0) = theta.sin_cos();
    let mut best = (c0, s0, unit_error(c0, s0).abs());
    for i in -2..=2 {
        for j in -2..=2 {
            let (c, s) = (nudge(c0, i), nudge(s0, j));
            let e = unit_error(c, s).abs();
            if e < best.2 {
                best = (c, s, e);
            }
        }
    }
    Complex64::new(best.0, best.1)
}
