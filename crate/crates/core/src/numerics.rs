//! Brute-force estimators over finite windows of a fixed point: empirical
//! autocorrelation coefficients, windowed Fourier amplitudes, and the
//! periodic-approximant route to the chair amplitudes.
//!
//! All window sums are normalised by the full cube cardinality `(2N+1)^d`.
//! Integer counts are accumulated exactly; complex sums use Neumaier
//! compensation over a fixed chunking, so results do not depend on the
//! number of worker threads.

use rayon::prelude::*;
use thiserror::Error;

use crate::chair::qr_amplitude;
use crate::dyadic::{root_of_unity, Complex, Dyadic, DyadicPoint2};
use crate::subst::{fixed_point_window, Label, PatternWindow, Seed, SubstError, SubstitutionSystem};

const CHUNK: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericsError {
    #[error("window must be the centred cube [-N, N]^d")]
    NotCentered,
    #[error("lag {lag:?} exceeds N/2 = {limit}")]
    LagOutOfRange { lag: Vec<i64>, limit: i64 },
    #[error("label {0} has no weight")]
    MissingWeight(Label),
    #[error("expected a {expected}-dimensional argument, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Subst(#[from] SubstError),
}

/// Neumaier-compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: [f64; 2],
    carry: [f64; 2],
}

impl CompensatedSum {
    pub fn add(&mut self, z: Complex) {
        for (i, v) in [z.re, z.im].into_iter().enumerate() {
            let t = self.sum[i] + v;
            if self.sum[i].abs() >= v.abs() {
                self.carry[i] += (self.sum[i] - t) + v;
            } else {
                self.carry[i] += (v - t) + self.sum[i];
            }
            self.sum[i] = t;
        }
    }

    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(Complex::new(other.sum[0], other.sum[1]));
        self.add(Complex::new(other.carry[0], other.carry[1]));
    }

    pub fn value(&self) -> Complex {
        Complex::new(self.sum[0] + self.carry[0], self.sum[1] + self.carry[1])
    }
}

/// A window of labels with one complex weight per label.
#[derive(Debug, Clone)]
pub struct WeightedComb {
    window: PatternWindow,
    weights: Vec<Complex>,
}

impl WeightedComb {
    pub fn new(window: PatternWindow, weights: Vec<Complex>) -> Result<Self, NumericsError> {
        if let Some(&l) = window.labels().iter().find(|&&l| l as usize >= weights.len()) {
            return Err(NumericsError::MissingWeight(l));
        }
        Ok(WeightedComb { window, weights })
    }

    pub fn window(&self) -> &PatternWindow {
        &self.window
    }

    pub fn weights(&self) -> &[Complex] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.window.dim()
    }

    /// `N` for a window `[-N, N]^d`.
    pub fn half_width(&self) -> Result<usize, NumericsError> {
        let e = self.window.extent();
        let n = e[0] / 2;
        let ok = e.iter().all(|&x| x == 2 * n + 1)
            && self.window.origin().iter().all(|&o| o == -(n as i64));
        if ok {
            Ok(n)
        } else {
            Err(NumericsError::NotCentered)
        }
    }

    fn cardinality(&self) -> f64 {
        self.window.labels().len() as f64
    }
}

/// Grows the fixed point until it covers `[-n, n]^d` and cuts that cube out.
pub fn fixed_point_cube(
    system: &SubstitutionSystem,
    seed: &Seed,
    n: usize,
) -> Result<PatternWindow, SubstError> {
    let b = system.factor() as u128;
    let mut iterations = 0;
    let mut half = 1u128;
    while half < n as u128 + 1 {
        half *= b;
        iterations += 1;
    }
    let w = fixed_point_window(system, seed, iterations)?;
    Ok(w.centered_cube(n).expect("window covers the cube"))
}

/// `η(z) = (2N+1)^{-d} Σ w(x) conj(w(x - z))` over `x` with both `x` and
/// `x - z` in the window.
pub fn empirical_autocorrelation(comb: &WeightedComb, z: &[i64]) -> Result<Complex, NumericsError> {
    let n = comb.half_width()? as i64;
    let d = comb.dim();
    if z.len() != d {
        return Err(NumericsError::DimensionMismatch {
            expected: d,
            found: z.len(),
        });
    }
    if z.iter().any(|&c| 2 * c.abs() > n) {
        return Err(NumericsError::LagOutOfRange {
            lag: z.to_vec(),
            limit: n / 2,
        });
    }
    let q = comb.weights.len();
    let labels = comb.window.labels();
    let side = (2 * n + 1) as usize;
    // counts[a * q + b]: cells labelled a whose partner x - z is labelled b
    let counts: Vec<u64> = match d {
        1 => {
            let shift = z[0];
            let lo = shift.max(0) as usize;
            let hi = (side as i64 + shift.min(0)) as usize;
            pair_counts(&labels[lo..hi], &labels[(lo as i64 - shift) as usize..(hi as i64 - shift) as usize], q)
        }
        _ => {
            let (zx, zy) = (z[0], z[1]);
            let ylo = zy.max(0) as usize;
            let yhi = (side as i64 + zy.min(0)) as usize;
            let xlo = zx.max(0) as usize;
            let xhi = (side as i64 + zx.min(0)) as usize;
            (ylo..yhi)
                .into_par_iter()
                .map(|y| {
                    let row = &labels[y * side..(y + 1) * side];
                    let py = (y as i64 - zy) as usize;
                    let partner = &labels[py * side..(py + 1) * side];
                    pair_counts(
                        &row[xlo..xhi],
                        &partner[(xlo as i64 - zx) as usize..(xhi as i64 - zx) as usize],
                        q,
                    )
                })
                .reduce(
                    || vec![0u64; q * q],
                    |mut a, b| {
                        a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                        a
                    },
                )
        }
    };
    let mut acc = CompensatedSum::default();
    for a in 0..q {
        for b in 0..q {
            let c = counts[a * q + b];
            if c > 0 {
                acc.add(comb.weights[a] * comb.weights[b].conj() * c as f64);
            }
        }
    }
    Ok(acc.value() / comb.cardinality())
}

fn pair_counts(xs: &[Label], partners: &[Label], q: usize) -> Vec<u64> {
    let mut counts = vec![0u64; q * q];
    for (&a, &b) in xs.iter().zip(partners) {
        counts[a as usize * q + b as usize] += 1;
    }
    counts
}

/// A point of a dyadic Fourier module in one or two dimensions.
pub trait ModulePoint: Copy + Send + Sync {
    const DIM: usize;
    fn exp(&self) -> u32;
    /// Numerators over `2^exp`; unused axes are zero.
    fn numerators(&self) -> [i64; 2];
}

impl ModulePoint for Dyadic {
    const DIM: usize = 1;
    fn exp(&self) -> u32 {
        Dyadic::exp(self)
    }
    fn numerators(&self) -> [i64; 2] {
        [self.num(), 0]
    }
}

impl ModulePoint for DyadicPoint2 {
    const DIM: usize = 2;
    fn exp(&self) -> u32 {
        DyadicPoint2::exp(self)
    }
    fn numerators(&self) -> [i64; 2] {
        [self.m(), self.n()]
    }
}

/// Windowed sums `Σ w(x) e^{-2πi k·x}` for all `k` with denominator dividing
/// `2^exp`, via the weighted histogram of positions modulo `2^exp`.
#[derive(Debug, Clone)]
pub struct AmplitudeEstimator {
    exp: u32,
    dim: usize,
    cardinality: f64,
    /// Weighted mass per residue class, x residue fastest.
    table: Vec<Complex>,
}

impl AmplitudeEstimator {
    pub fn new(comb: &WeightedComb, exp: u32) -> Result<Self, NumericsError> {
        comb.half_width()?;
        let dim = comb.dim();
        let q = comb.weights.len();
        let period = 1usize << exp;
        let classes = period.pow(dim as u32);
        let mask = period as i64 - 1;
        let window = &comb.window;
        let width = window.extent()[0];
        let ox = window.origin()[0];
        let oy = if dim == 2 { window.origin()[1] } else { 0 };
        let rows = if dim == 2 { window.extent()[1] } else { 1 };
        // exact label counts per (residue class, label)
        let counts = window
            .labels()
            .par_chunks(width.max(1))
            .enumerate()
            .fold(
                || vec![0u64; classes * q],
                |mut acc, (iy, row)| {
                    let ry = if dim == 2 { ((oy + iy as i64) & mask) as usize } else { 0 };
                    for (ix, &l) in row.iter().enumerate() {
                        let rx = ((ox + ix as i64) & mask) as usize;
                        acc[(ry * period + rx) * q + l as usize] += 1;
                    }
                    acc
                },
            )
            .reduce(
                || vec![0u64; classes * q],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            );
        debug_assert_eq!(counts.iter().sum::<u64>() as usize, width * rows);
        let table = counts
            .chunks(q)
            .map(|c| {
                let mut acc = CompensatedSum::default();
                for (l, &n) in c.iter().enumerate() {
                    if n > 0 {
                        acc.add(comb.weights[l] * n as f64);
                    }
                }
                acc.value()
            })
            .collect();
        Ok(AmplitudeEstimator {
            exp,
            dim,
            cardinality: comb.cardinality(),
            table,
        })
    }

    pub fn exp(&self) -> u32 {
        self.exp
    }

    /// `None` if `k` needs a finer histogram than this one.
    pub fn amplitude<K: ModulePoint>(&self, k: K) -> Option<Complex> {
        if K::DIM != self.dim || k.exp() > self.exp {
            return None;
        }
        let s = k.exp();
        let [m, n] = k.numerators();
        let period = 1i64 << self.exp;
        let smask = (1i64 << s) - 1;
        let mut acc = CompensatedSum::default();
        for (idx, &mass) in self.table.iter().enumerate() {
            if mass == Complex::new(0.0, 0.0) {
                continue;
            }
            let a = idx as i64 % period;
            let b = idx as i64 / period;
            let j = (m.wrapping_mul(a).wrapping_add(n.wrapping_mul(b))) & smask;
            let phase = root_of_unity(((-j) & smask) as u64, s);
            acc.add(mass * phase);
        }
        Some(acc.value() / self.cardinality)
    }
}

/// `(2N+1)^{-d} Σ_x w(x) e^{-2πi k·x}` over the window.
pub fn empirical_amplitude<K: ModulePoint>(comb: &WeightedComb, k: K) -> Result<Complex, NumericsError> {
    let d = comb.dim();
    if K::DIM != d {
        return Err(NumericsError::DimensionMismatch {
            expected: d,
            found: K::DIM,
        });
    }
    let s = k.exp();
    let classes = 1u128 << (s as u128 * d as u128).min(100);
    if classes <= comb.window.labels().len() as u128 {
        let est = AmplitudeEstimator::new(comb, s)?;
        return Ok(est.amplitude(k).expect("exponent fits"));
    }
    direct_amplitude(comb, k)
}

/// Plain cell-by-cell sum; used when the histogram would be larger than the
/// window itself.
pub fn direct_amplitude<K: ModulePoint>(comb: &WeightedComb, k: K) -> Result<Complex, NumericsError> {
    comb.half_width()?;
    let s = k.exp();
    let [m, n] = k.numerators();
    let smask = if s >= 64 { -1i64 } else { (1i64 << s) - 1 };
    let window = &comb.window;
    let width = window.extent()[0];
    let origin = window.origin().to_vec();
    let weights = &comb.weights;
    let labels = window.labels();
    let partials: Vec<CompensatedSum> = labels
        .par_chunks(CHUNK)
        .enumerate()
        .map(|(c, chunk)| {
            let mut acc = CompensatedSum::default();
            for (i, &l) in chunk.iter().enumerate() {
                let idx = c * CHUNK + i;
                let x = origin[0] + (idx % width) as i64;
                let y = if origin.len() == 2 { origin[1] + (idx / width) as i64 } else { 0 };
                let j = m.wrapping_mul(x).wrapping_add(n.wrapping_mul(y)) & smask;
                acc.add(weights[l as usize] * root_of_unity(((-j) & smask) as u64, s));
            }
            acc
        })
        .collect();
    let mut total = CompensatedSum::default();
    for p in &partials {
        total.merge(p);
    }
    Ok(total.value() / comb.cardinality())
}

/// Cosets `Λ_i + t_i ⊇ ⋃_r Q_r(x_i)` of the explicit chair solution, as
/// `(t_i, x_i)`.
pub const CHAIR_TRANSLATES: [([i64; 2], [i64; 2]); 4] = [
    ([0, 0], [1, 1]),
    ([0, 1], [1, -1]),
    ([1, 1], [-1, -1]),
    ([1, 0], [-1, 1]),
];

/// `e^{2πi k·t_i} Σ_{r=0}^{R} \hat δ_{Q_r(x_i)}(k)`: the amplitude of the
/// periodic approximant of level `R` for colour `i`. The density-zero
/// diagonals contribute nothing.
pub fn approximant_amplitude_chair(level: u32, colour: usize, k: DyadicPoint2) -> Complex {
    let (t, x) = CHAIR_TRANSLATES[colour];
    let shift = k.dot(t).expect("k·t overflow").phase();
    let mut acc = CompensatedSum::default();
    for r in 0..=level {
        acc.add(qr_amplitude(r, x, k));
    }
    shift * acc.value()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRecord<K> {
    pub k: K,
    pub closed_form: Complex,
    pub empirical: Complex,
    pub abs_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport<K> {
    pub records: Vec<ComparisonRecord<K>>,
    pub max_error: f64,
    pub mean_error: f64,
    /// Half-width `N` of the window, or the approximant level.
    pub window: Option<usize>,
}

impl<K: std::fmt::Display> ComparisonReport<K> {
    pub fn worst(&self) -> Option<&ComparisonRecord<K>> {
        self.records
            .iter()
            .max_by(|a, b| a.abs_error.total_cmp(&b.abs_error))
    }
}

/// Evaluates both sides at every point, in order.
pub fn compare<K, F, G>(points: &[K], closed_form: F, other: G, window: Option<usize>) -> ComparisonReport<K>
where
    K: Copy + Send + Sync,
    F: Fn(K) -> Complex + Sync,
    G: Fn(K) -> Complex + Sync,
{
    let records: Vec<ComparisonRecord<K>> = points
        .par_iter()
        .map(|&k| {
            let closed = closed_form(k);
            let emp = other(k);
            ComparisonRecord {
                k,
                closed_form: closed,
                empirical: emp,
                abs_error: (closed - emp).norm(),
            }
        })
        .collect();
    let max_error = records.iter().map(|r| r.abs_error).fold(0.0, f64::max);
    let mean_error = if records.is_empty() {
        0.0
    } else {
        records.iter().map(|r| r.abs_error).sum::<f64>() / records.len() as f64
    };
    ComparisonReport {
        records,
        max_error,
        mean_error,
        window,
    }
}
