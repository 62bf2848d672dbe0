//! The four-colour chair block coloring of `Z^2`: explicit labels, Bragg
//! amplitudes on the module `⋃ Z^2/2^s`, and its `D4` colour symmetry.
//!
//! Lattice conventions: `u = (1,0)`, `v = (0,1)`, `Γ₊` is the even
//! (checkerboard) sublattice and `Γ₋ = Γ₊ + u`. Colours `0, 2` live on `Γ₊`,
//! colours `1, 3` on `Γ₋`.

use thiserror::Error;

use crate::dyadic::{pow2_f64, root_of_unity, Complex, Dyadic, DyadicPoint2};
use crate::subst::{Label, PatternWindow};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChairError {
    #[error("window must be a square centred on the origin, got origin {origin:?} extent {extent:?}")]
    NotCentered { origin: Vec<i64>, extent: Vec<usize> },
}

/// Weights `α_0..α_3` of the four colour classes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChairWeights {
    pub alpha: [Complex; 4],
}

impl ChairWeights {
    pub fn new(alpha: [Complex; 4]) -> Self {
        ChairWeights { alpha }
    }

    pub fn real(alpha: [f64; 4]) -> Self {
        ChairWeights::new(alpha.map(|a| Complex::new(a, 0.0)))
    }

    pub fn ones() -> Self {
        ChairWeights::real([1.0; 4])
    }

    /// `α_j = i^j`.
    pub fn powers_of_i() -> Self {
        ChairWeights::new([
            Complex::new(1.0, 0.0),
            Complex::new(0.0, 1.0),
            Complex::new(-1.0, 0.0),
            Complex::new(0.0, -1.0),
        ])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChairAmplitudes {
    pub k: DyadicPoint2,
    pub a: [Complex; 4],
}

impl ChairAmplitudes {
    pub fn combined(&self, w: &ChairWeights) -> Complex {
        self.a.iter().zip(&w.alpha).map(|(a, w)| a * w).sum()
    }
}

fn on_even_sublattice(x: [i64; 2]) -> bool {
    (x[0] + x[1]).rem_euclid(2) == 0
}

/// Colour of the density-zero diagonal points that the lattice unions miss.
fn diagonal_label(x: [i64; 2]) -> Option<Label> {
    let [a, b] = x;
    if a == b && a >= 0 {
        Some(0)
    } else if a >= 0 && b == -1 - a {
        Some(1)
    } else if a == b && a < 0 {
        Some(2)
    } else if a < 0 && b == -1 - a {
        Some(3)
    } else {
        None
    }
}

/// Colour of the cell with lower left corner `x` in the fixed point grown
/// from the seed `3 0 / 2 1`.
///
/// Uses `Λ₀ = 2Γ₋ ∪ (2Λ₀ + {0, u+v})` on `Γ₊` and
/// `Λ₁ = (2Γ₊ + v) ∪ (2Λ₁ + {u, v})` on `Γ₋`, with the diagonals settled
/// first since the descent fixes them.
pub fn chair_label(x: [i64; 2]) -> Label {
    let even = on_even_sublattice(x);
    // `member` answers x ∈ Λ₀ (even) or x ∈ Λ₁ (odd).
    let pick = |member: bool| match (even, member) {
        (true, true) => 0,
        (true, false) => 2,
        (false, true) => 1,
        (false, false) => 3,
    };
    let mut p = x;
    loop {
        if let Some(l) = diagonal_label(p) {
            return pick(l == 0 || l == 1);
        }
        let (ax, ay) = (p[0].rem_euclid(2), p[1].rem_euclid(2));
        let next = if even {
            if ax == 0 && ay == 0 {
                let half = [p[0] / 2, p[1] / 2];
                if !on_even_sublattice(half) {
                    return pick(true);
                }
                half
            } else {
                [(p[0] - 1) / 2, (p[1] - 1) / 2]
            }
        } else if ax == 0 {
            // x - v ∈ 2Z^2
            let half = [p[0] / 2, (p[1] - 1) / 2];
            if on_even_sublattice(half) {
                return pick(true);
            }
            half
        } else {
            [(p[0] - 1) / 2, p[1] / 2]
        };
        if on_even_sublattice(next) != even {
            return pick(false);
        }
        p = next;
    }
}

/// Coefficient of `δ_k` in the Fourier transform of `δ_{Q_r(x)}`, where
/// `Q_r(x) = 2^{r+1} Γ₋ + {0, .., 2^r - 1}·x`.
pub fn qr_amplitude(r: u32, x: [i64; 2], k: DyadicPoint2) -> Complex {
    let s = k.exp();
    // k must lie in Γ₊ / 2^{r+2}
    if s > r + 2 || (s == r + 2 && (k.m() + k.n()).rem_euclid(2) != 0) {
        return Complex::new(0.0, 0.0);
    }
    let kx = k.dot(x).expect("k·x overflow");
    let geometric = if kx.is_integer() {
        Complex::new(pow2_f64(r), 0.0)
    } else {
        let scaled = kx.checked_mul_int(1 << r).expect("2^r k·x overflow");
        let num = Complex::new(1.0, 0.0) - scaled.checked_neg().unwrap().phase();
        let den = Complex::new(1.0, 0.0) - kx.checked_neg().unwrap().phase();
        num / den
    };
    let shift = k.x().checked_mul_int(1 << (r + 1)).expect("2^{r+1} k·u overflow");
    let translation = shift.checked_neg().unwrap().phase();
    geometric * translation / pow2_f64(2 * r + 3)
}

/// `ε_s^j` with `ε_s = e^{-2πi/2^s}`, by exact index arithmetic.
fn eps_pow(j: i128, s: u32) -> Complex {
    let modulus = 1i128 << s;
    root_of_unity((-j).rem_euclid(modulus) as u64, s)
}

/// The `s >= 2` amplitude shape shared by `A₀` (with `j = m+n`) and `A₁`
/// (with `j = m-n`).
fn deep_amplitude(j: i128, s: u32) -> Complex {
    let four_s = pow2_f64(2 * s);
    let modulus = 1i128 << s;
    if j.rem_euclid(modulus) == 0 {
        Complex::new(0.0, 0.0)
    } else if j.rem_euclid(2) == 0 {
        let sign_term = if (j / 2).rem_euclid(2) == 0 { 0.0 } else { 2.0 };
        let den = Complex::new(1.0, 0.0) - eps_pow(j, s);
        -(2.0 / four_s) * sign_term / den
    } else {
        (1.0 / four_s) / (Complex::new(1.0, 0.0) - eps_pow(j, s))
    }
}

/// Amplitudes `A_0..A_3` at a module point.
pub fn chair_amplitudes(k: DyadicPoint2) -> ChairAmplitudes {
    let (m, n, s) = (k.m(), k.n(), k.exp());
    let c = |v: f64| Complex::new(v, 0.0);
    let sign = |v: i64| if v.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let a = match s {
        0 => [c(0.25); 4],
        1 if m.rem_euclid(2) == 1 && n.rem_euclid(2) == 1 => [c(0.25), c(-0.25), c(0.25), c(-0.25)],
        1 => [c(0.125), c(sign(n) / 8.0), c(-0.125), c(sign(m) / 8.0)],
        _ => {
            let (m, n) = (m as i128, n as i128);
            let a0 = deep_amplitude(m + n, s);
            let a1 = eps_pow(-n, s) * deep_amplitude(m - n, s);
            [a0, a1, -a0, -a1]
        }
    };
    ChairAmplitudes { k, a }
}

/// `|Σ α_i A_i(k)|²`.
pub fn chair_intensity(k: DyadicPoint2, w: &ChairWeights) -> f64 {
    chair_amplitudes(k).combined(w).norm_sqr()
}

/// An element `R^rotation ∘ F^reflect` of the dihedral group of the square,
/// where `R` is the anticlockwise quarter turn and `F` the reflection in the
/// horizontal axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct D4Element {
    rotation: u8,
    reflect: bool,
}

impl D4Element {
    pub const IDENTITY: D4Element = D4Element {
        rotation: 0,
        reflect: false,
    };
    pub const QUARTER_TURN: D4Element = D4Element {
        rotation: 1,
        reflect: false,
    };
    pub const HORIZONTAL_REFLECTION: D4Element = D4Element {
        rotation: 0,
        reflect: true,
    };

    pub fn new(rotation: u8, reflect: bool) -> Self {
        D4Element {
            rotation: rotation % 4,
            reflect,
        }
    }

    pub fn all() -> [D4Element; 8] {
        let mut out = [D4Element::IDENTITY; 8];
        for (i, g) in out.iter_mut().enumerate() {
            *g = D4Element::new((i % 4) as u8, i >= 4);
        }
        out
    }

    pub fn rotation(&self) -> u8 {
        self.rotation
    }

    pub fn reflects(&self) -> bool {
        self.reflect
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &D4Element) -> D4Element {
        // F R^c = R^{-c} F
        let c = if self.reflect {
            (4 - other.rotation) % 4
        } else {
            other.rotation
        };
        D4Element::new(self.rotation + c, self.reflect ^ other.reflect)
    }

    pub fn inverse(&self) -> D4Element {
        if self.reflect {
            *self
        } else {
            D4Element::new(4 - self.rotation, false)
        }
    }

    /// Linear part as an integer matrix (rows).
    pub fn matrix(&self) -> [[i64; 2]; 2] {
        let mut m = if self.reflect {
            [[1, 0], [0, -1]]
        } else {
            [[1, 0], [0, 1]]
        };
        for _ in 0..self.rotation {
            // R = [[0,-1],[1,0]] applied on the left
            m = [[-m[1][0], -m[1][1]], [m[0][0], m[0][1]]];
        }
        m
    }

    /// Image of the unit cell with lower left corner `x`: the cell's centre
    /// `x + (1/2, 1/2)` is mapped linearly.
    pub fn apply_to_cell(&self, x: [i64; 2]) -> [i64; 2] {
        let m = self.matrix();
        let cx = 2 * x[0] + 1;
        let cy = 2 * x[1] + 1;
        let ix = m[0][0] * cx + m[0][1] * cy;
        let iy = m[1][0] * cx + m[1][1] * cy;
        [(ix - 1) / 2, (iy - 1) / 2]
    }

    pub fn apply_to_k(&self, k: DyadicPoint2) -> DyadicPoint2 {
        k.transform(self.matrix())
    }

    /// Colour permutation carried with the spatial map: the pattern obeys
    /// `label(g·x) = σ_g(label(x))`. The quarter turn shifts each colour
    /// down by one (`0 → 3 → 2 → 1 → 0`), the reflection swaps `0↔1`, `2↔3`.
    pub fn permutation(&self) -> [Label; 4] {
        let mut out = [0; 4];
        for (i, slot) in out.iter_mut().enumerate() {
            let mut c = i as Label;
            if self.reflect {
                c ^= 1;
            }
            c = (c + 4 - self.rotation) % 4;
            *slot = c;
        }
        out
    }
}

/// Moves every cell by `g` and recolours it by `g`'s permutation.
pub fn d4_apply(g: &D4Element, window: &PatternWindow) -> Result<PatternWindow, ChairError> {
    let centred = window.dim() == 2
        && window.extent()[0] == window.extent()[1]
        && window.extent()[0] % 2 == 0
        && window.origin().iter().all(|&o| o == -(window.extent()[0] as i64 / 2));
    if !centred {
        return Err(ChairError::NotCentered {
            origin: window.origin().to_vec(),
            extent: window.extent().to_vec(),
        });
    }
    let sigma = g.permutation();
    let inv = g.inverse();
    Ok(PatternWindow::from_fn(
        window.origin().to_vec(),
        window.extent().to_vec(),
        |p| {
            let src = inv.apply_to_cell([p[0], p[1]]);
            let label = window.get(&src).expect("D4 preserves centred squares");
            sigma[label as usize % 4]
        },
    ))
}

/// `e^{-2πi k·u}`, the phase in the `Γ₋` sum rule.
pub fn odd_coset_phase(k: DyadicPoint2) -> Complex {
    let t: Dyadic = k.x();
    t.checked_neg().expect("negation overflow").phase()
}
