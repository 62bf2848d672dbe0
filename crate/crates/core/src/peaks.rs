//! Bragg peak lists over a region of the Fourier module.

use rayon::prelude::*;

use crate::chair::{chair_amplitudes, ChairWeights};
use crate::dyadic::{chair_module_enumerate, pd_module_enumerate, Complex, Dyadic, DyadicPoint2, Interval};
use crate::numerics::{AmplitudeEstimator, ModulePoint, NumericsError, WeightedComb};
use crate::period_doubling::{pd_amplitudes, PdWeights};

/// One Bragg peak: module point, amplitude, and intensity `|amplitude|²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak<K> {
    pub k: K,
    pub amplitude: Complex,
    pub intensity: f64,
}

impl<K> Peak<K> {
    pub fn new(k: K, amplitude: Complex) -> Self {
        Peak {
            k,
            amplitude,
            intensity: amplitude.norm_sqr(),
        }
    }
}

fn keep<K: Send>(peaks: Vec<Peak<K>>, floor: f64) -> Vec<Peak<K>> {
    peaks
        .into_iter()
        .filter(|p| p.intensity.is_finite() && p.intensity >= floor)
        .collect()
}

/// Closed-form period doubling peaks with `r <= r_max` in `interval`.
pub fn pd_peaks(r_max: u32, interval: &Interval, weights: &PdWeights, floor: f64) -> Vec<Peak<Dyadic>> {
    let points = pd_module_enumerate(r_max, interval);
    let peaks = points
        .par_iter()
        .map(|&k| Peak::new(k, pd_amplitudes(k).combined(weights)))
        .collect();
    keep(peaks, floor)
}

/// Closed-form chair peaks with `s <= s_max` in the box `xs × ys`.
pub fn chair_peaks(
    s_max: u32,
    xs: &Interval,
    ys: &Interval,
    weights: &ChairWeights,
    floor: f64,
) -> Vec<Peak<DyadicPoint2>> {
    let points = chair_module_enumerate(s_max, xs, ys);
    let peaks = points
        .par_iter()
        .map(|&k| Peak::new(k, chair_amplitudes(k).combined(weights)))
        .collect();
    keep(peaks, floor)
}

/// Windowed-sum peaks of an arbitrary comb at the given module points.
pub fn empirical_peaks<K: ModulePoint>(
    comb: &WeightedComb,
    points: &[K],
    floor: f64,
) -> Result<Vec<Peak<K>>, NumericsError> {
    let exp = points.iter().map(|k| k.exp()).max().unwrap_or(0);
    let classes = 1u128 << (exp as u128 * K::DIM as u128).min(100);
    let peaks = if classes <= comb.window().labels().len() as u128 {
        let est = AmplitudeEstimator::new(comb, exp)?;
        points
            .par_iter()
            .map(|&k| Peak::new(k, est.amplitude(k).expect("exponent fits")))
            .collect()
    } else {
        points
            .iter()
            .map(|&k| crate::numerics::direct_amplitude(comb, k).map(|a| Peak::new(k, a)))
            .collect::<Result<Vec<_>, _>>()?
    };
    Ok(keep(peaks, floor))
}
