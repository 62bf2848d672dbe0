//! Closed forms for the period doubling chain: the explicit point sets,
//! autocorrelation coefficients, and Bragg amplitudes on the module
//! `{m/2^r}`.

use num_rational::Ratio;

/// Exact rational wide enough for `η±` at every `i64` lag.
pub type EtaRatio = Ratio<i128>;

use crate::dyadic::{Complex, Dyadic};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    A,
    B,
}

impl Letter {
    pub fn flip(self) -> Letter {
        match self {
            Letter::A => Letter::B,
            Letter::B => Letter::A,
        }
    }

    /// Index in the bundled alphabet `a b`.
    pub fn index(self) -> u8 {
        match self {
            Letter::A => 0,
            Letter::B => 1,
        }
    }
}

/// Weights `α` (letter a) and `β` (letter b).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdWeights {
    pub alpha: Complex,
    pub beta: Complex,
}

impl PdWeights {
    pub fn new(alpha: Complex, beta: Complex) -> Self {
        PdWeights { alpha, beta }
    }

    pub fn real(alpha: f64, beta: f64) -> Self {
        PdWeights::new(Complex::new(alpha, 0.0), Complex::new(beta, 0.0))
    }

    /// `α = 1`, `β = -1`.
    pub fn balanced() -> Self {
        PdWeights::real(1.0, -1.0)
    }

    pub fn as_array(&self) -> [Complex; 2] {
        [self.alpha, self.beta]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdAmplitudes {
    pub k: Dyadic,
    pub a: Complex,
    pub b: Complex,
}

impl PdAmplitudes {
    pub fn combined(&self, w: &PdWeights) -> Complex {
        w.alpha * self.a + w.beta * self.b
    }
}

/// Letter at position `n` of the two-sided fixed point grown from `a|a`.
///
/// `n` lies in `Λ_b` iff `n ≡ 2·4^{i-1} - 1 (mod 4^i)` for some `i >= 1`;
/// the limit point `-1` belongs to `Λ_a`.
pub fn pd_label(n: i64) -> Letter {
    if n == -1 {
        return Letter::A;
    }
    let n = n as i128;
    // n + 1 != 0 has 2-adic valuation below 64, so i <= 32 suffices.
    for i in 1..=32u32 {
        let modulus = 1i128 << (2 * i);
        let residue = (1i128 << (2 * i - 1)) - 1;
        if n.rem_euclid(modulus) == residue {
            return Letter::B;
        }
    }
    Letter::A
}

/// Autocorrelation coefficient `η±(m)` of the balanced comb `α = 1, β = -1`,
/// from the recursion `η(2m) = (1 + η(m))/2`, `η(2m+1) = -1/3`.
pub fn pd_eta_balanced(m: i64) -> EtaRatio {
    let mut m = m.unsigned_abs();
    if m == 0 {
        return EtaRatio::from_integer(1);
    }
    // Unwind the even steps: η(2^r · odd) applies (1 + ·)/2 r times to -1/3.
    let mut halvings = 0;
    while m % 2 == 0 {
        m /= 2;
        halvings += 1;
    }
    let half = EtaRatio::new(1, 2);
    let one = EtaRatio::from_integer(1);
    let mut eta = EtaRatio::new(-1, 3);
    for _ in 0..halvings {
        eta = (one + eta) * half;
    }
    eta
}

/// `1 - 1/(3·2^{r-2})` for `m = 2^r (2s+1)`; `1` at `m = 0`.
pub fn pd_eta_balanced_closed(m: i64) -> EtaRatio {
    if m == 0 {
        return EtaRatio::from_integer(1);
    }
    let r = m.unsigned_abs().trailing_zeros();
    // 1/(3·2^{r-2}) = 4 / (3·2^r)
    EtaRatio::from_integer(1) - EtaRatio::new(4, 3 * (1i128 << r))
}

/// `η(z)` for general weights: with `p = (α+β)/2`, `q = (α-β)/2`,
/// `η = |p|² + (2/3) Re(p q̄) + |q|² η±(z)`.
pub fn pd_eta(z: i64, w: &PdWeights) -> Complex {
    let p = (w.alpha + w.beta) / 2.0;
    let q = (w.alpha - w.beta) / 2.0;
    let eta_pm = pd_eta_balanced(z);
    let eta_pm = *eta_pm.numer() as f64 / *eta_pm.denom() as f64;
    Complex::new(
        p.norm_sqr() + (2.0 / 3.0) * (p * q.conj()).re + q.norm_sqr() * eta_pm,
        0.0,
    )
}

/// `A(k) = 2 e^{2πik} / (3 (-2)^r)`, `B(k) = δ_{r,0} - A(k)`.
pub fn pd_amplitudes(k: Dyadic) -> PdAmplitudes {
    let r = k.exp();
    let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
    let magnitude = 2.0 / (3.0 * crate::dyadic::pow2_f64(r));
    let a = k.phase() * (sign * magnitude);
    let delta = if r == 0 { 1.0 } else { 0.0 };
    PdAmplitudes {
        k,
        a,
        b: Complex::new(delta, 0.0) - a,
    }
}

/// `|α A(k) + β B(k)|²`.
pub fn pd_intensity(k: Dyadic, w: &PdWeights) -> f64 {
    pd_amplitudes(k).combined(w).norm_sqr()
}
