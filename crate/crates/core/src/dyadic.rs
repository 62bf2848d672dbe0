//! Dyadic rationals `m / 2^r`, two-dimensional dyadic points, exact
//! 2-power roots of unity and enumeration of the two Fourier modules.

use std::cmp::Ordering;
use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

/// Complex amplitudes and weights.
pub type Complex = Complex64;

/// Largest supported denominator exponent. Keeps `2^r` inside an `i64`.
pub const MAX_EXPONENT: u32 = 62;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DyadicError {
    #[error("dyadic arithmetic overflowed 64-bit integers")]
    Overflow,
    #[error("denominator exponent {0} exceeds the supported maximum {MAX_EXPONENT}")]
    ExponentTooLarge(u32),
    #[error("invalid interval: {0}")]
    InvalidInterval(String),
}

/// A dyadic rational `num / 2^exp` in normal form: `exp == 0` or `num` odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: i64,
    exp: u32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { num: 0, exp: 0 };

    /// Cancels common factors of two.
    pub fn normalize(num: i64, den_exp: u32) -> Dyadic {
        if num == 0 {
            return Dyadic::ZERO;
        }
        let shift = num.trailing_zeros().min(den_exp);
        Dyadic {
            num: num >> shift,
            exp: den_exp - shift,
        }
    }

    pub fn integer(n: i64) -> Dyadic {
        Dyadic { num: n, exp: 0 }
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    /// The denominator exponent `r` of the normal form.
    pub fn exp(&self) -> u32 {
        self.exp
    }

    pub fn is_integer(&self) -> bool {
        self.exp == 0
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / pow2_f64(self.exp)
    }

    pub fn checked_add(self, other: Dyadic) -> Result<Dyadic, DyadicError> {
        let exp = self.exp.max(other.exp);
        let a = shl_checked(self.num, exp - self.exp)?;
        let b = shl_checked(other.num, exp - other.exp)?;
        let sum = a.checked_add(b).ok_or(DyadicError::Overflow)?;
        Ok(Dyadic::normalize(sum, exp))
    }

    pub fn checked_neg(self) -> Result<Dyadic, DyadicError> {
        let num = self.num.checked_neg().ok_or(DyadicError::Overflow)?;
        Ok(Dyadic { num, exp: self.exp })
    }

    pub fn checked_sub(self, other: Dyadic) -> Result<Dyadic, DyadicError> {
        self.checked_add(other.checked_neg()?)
    }

    pub fn checked_mul_int(self, k: i64) -> Result<Dyadic, DyadicError> {
        let num = self.num.checked_mul(k).ok_or(DyadicError::Overflow)?;
        Ok(Dyadic::normalize(num, self.exp))
    }

    /// Residue of the numerator modulo `2^exp`, i.e. the index of
    /// `e^{2πi t}` among the `2^exp`-th roots of unity.
    pub fn root_index(&self) -> u64 {
        if self.exp == 0 {
            0
        } else {
            (self.num as u64) & ((1u64 << self.exp) - 1)
        }
    }

    /// `e^{2πi t}`.
    pub fn phase(&self) -> Complex {
        root_of_unity(self.root_index(), self.exp)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let exp = self.exp.max(other.exp);
        let a = (self.num as i128) << (exp - self.exp);
        let b = (other.num as i128) << (exp - other.exp);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.exp)
        }
    }
}

/// Free-function form of [`Dyadic::phase`].
pub fn phase(t: Dyadic) -> Complex {
    t.phase()
}

/// `e^{2πi j / 2^exp}` for `0 <= j < 2^exp`; exact for `exp <= 2`.
pub fn root_of_unity(j: u64, exp: u32) -> Complex {
    match (exp, j) {
        (0, _) => Complex::new(1.0, 0.0),
        (1, 0) | (2, 0) => Complex::new(1.0, 0.0),
        (1, _) | (2, 2) => Complex::new(-1.0, 0.0),
        (2, 1) => Complex::new(0.0, 1.0),
        (2, _) => Complex::new(0.0, -1.0),
        _ => {
            // Fold into the first octant so every index of the same root
            // evaluates through the same trig call.
            let n = 1u64 << exp;
            let quarter = n >> 2;
            let q = j / quarter;
            let rem = j % quarter;
            let base = if 2 * rem <= quarter {
                let a = TAU * rem as f64 / n as f64;
                Complex::new(a.cos(), a.sin())
            } else {
                let a = TAU * (quarter - rem) as f64 / n as f64;
                Complex::new(a.sin(), a.cos())
            };
            match q {
                0 => base,
                1 => Complex::new(-base.im, base.re),
                2 => -base,
                _ => Complex::new(base.im, -base.re),
            }
        }
    }
}

/// A planar dyadic point `(m, n) / 2^s` in normal form: `s == 0` or not
/// both of `m`, `n` even.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DyadicPoint2 {
    m: i64,
    n: i64,
    s: u32,
}

impl DyadicPoint2 {
    pub fn normalize(m: i64, n: i64, s: u32) -> DyadicPoint2 {
        let tz = |v: i64| if v == 0 { u32::MAX } else { v.trailing_zeros() };
        let shift = tz(m).min(tz(n)).min(s);
        DyadicPoint2 {
            m: m >> shift,
            n: n >> shift,
            s: s - shift,
        }
    }

    pub fn integer(m: i64, n: i64) -> DyadicPoint2 {
        DyadicPoint2 { m, n, s: 0 }
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn exp(&self) -> u32 {
        self.s
    }

    pub fn x(&self) -> Dyadic {
        Dyadic::normalize(self.m, self.s)
    }

    pub fn y(&self) -> Dyadic {
        Dyadic::normalize(self.n, self.s)
    }

    pub fn from_coords(x: Dyadic, y: Dyadic) -> DyadicPoint2 {
        let s = x.exp().max(y.exp());
        DyadicPoint2::normalize(x.num() << (s - x.exp()), y.num() << (s - y.exp()), s)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        let d = pow2_f64(self.s);
        (self.m as f64 / d, self.n as f64 / d)
    }

    pub fn checked_add(self, other: DyadicPoint2) -> Result<DyadicPoint2, DyadicError> {
        Ok(DyadicPoint2::from_coords(
            self.x().checked_add(other.x())?,
            self.y().checked_add(other.y())?,
        ))
    }

    pub fn checked_sub(self, other: DyadicPoint2) -> Result<DyadicPoint2, DyadicError> {
        Ok(DyadicPoint2::from_coords(
            self.x().checked_sub(other.x())?,
            self.y().checked_sub(other.y())?,
        ))
    }

    /// The scalar product `k · x` with an integer vector.
    pub fn dot(&self, x: [i64; 2]) -> Result<Dyadic, DyadicError> {
        let a = self.m.checked_mul(x[0]).ok_or(DyadicError::Overflow)?;
        let b = self.n.checked_mul(x[1]).ok_or(DyadicError::Overflow)?;
        let sum = a.checked_add(b).ok_or(DyadicError::Overflow)?;
        Ok(Dyadic::normalize(sum, self.s))
    }

    /// Image under an integer matrix given by rows.
    pub fn transform(&self, rows: [[i64; 2]; 2]) -> DyadicPoint2 {
        DyadicPoint2::normalize(
            rows[0][0] * self.m + rows[0][1] * self.n,
            rows[1][0] * self.m + rows[1][1] * self.n,
            self.s,
        )
    }
}

impl Ord for DyadicPoint2 {
    fn cmp(&self, other: &Self) -> Ordering {
        self.x()
            .cmp(&other.x())
            .then_with(|| self.y().cmp(&other.y()))
    }
}

impl PartialOrd for DyadicPoint2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DyadicPoint2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.s == 0 {
            write!(f, "({}, {})", self.m, self.n)
        } else {
            write!(f, "({}, {})/2^{}", self.m, self.n, self.s)
        }
    }
}

/// A real interval with independently open or closed ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: f64, hi: f64, lo_closed: bool, hi_closed: bool) -> Result<Self, DyadicError> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(DyadicError::InvalidInterval("bounds must be finite".into()));
        }
        if lo > hi {
            return Err(DyadicError::InvalidInterval(format!("{lo} > {hi}")));
        }
        Ok(Interval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        })
    }

    pub fn closed(lo: f64, hi: f64) -> Result<Self, DyadicError> {
        Interval::new(lo, hi, true, true)
    }

    pub fn half_open(lo: f64, hi: f64) -> Result<Self, DyadicError> {
        Interval::new(lo, hi, true, false)
    }

    /// Exact membership of `num / 2^exp` (scaling by a power of two is exact
    /// in binary floating point).
    fn contains_scaled(&self, num: i64, exp: u32) -> bool {
        let x = num as f64;
        let scale = pow2_f64(exp);
        let lo = self.lo * scale;
        let hi = self.hi * scale;
        let above = if self.lo_closed { x >= lo } else { x > lo };
        let below = if self.hi_closed { x <= hi } else { x < hi };
        above && below
    }

    pub fn contains(&self, t: Dyadic) -> bool {
        self.contains_scaled(t.num(), t.exp())
    }

    fn numerator_range(&self, exp: u32) -> std::ops::RangeInclusive<i64> {
        let scale = pow2_f64(exp);
        let lo = (self.lo * scale).floor() as i64;
        let hi = (self.hi * scale).ceil() as i64;
        lo..=hi
    }
}

/// All points of the period doubling module `{m/2^r : r = 0, or r >= 1 and
/// m odd}` with `r <= r_max` inside `interval`, ascending.
pub fn pd_module_enumerate(r_max: u32, interval: &Interval) -> Vec<Dyadic> {
    let r_max = r_max.min(MAX_EXPONENT);
    let mut out = Vec::new();
    for r in 0..=r_max {
        for m in interval.numerator_range(r) {
            if (r == 0 || m & 1 == 1) && interval.contains_scaled(m, r) {
                out.push(Dyadic { num: m, exp: r });
            }
        }
    }
    out.sort();
    out
}

/// All points of the chair module (`Z^2` together with `(m,n)/2^s`,
/// `gcd(m,n,2) = 1`) with `s <= s_max` in the box `xs × ys`, sorted
/// lexicographically by value.
pub fn chair_module_enumerate(s_max: u32, xs: &Interval, ys: &Interval) -> Vec<DyadicPoint2> {
    let s_max = s_max.min(MAX_EXPONENT);
    let mut out = Vec::new();
    for s in 0..=s_max {
        let ms: Vec<i64> = xs
            .numerator_range(s)
            .filter(|&m| xs.contains_scaled(m, s))
            .collect();
        let ns: Vec<i64> = ys
            .numerator_range(s)
            .filter(|&n| ys.contains_scaled(n, s))
            .collect();
        for &m in &ms {
            for &n in &ns {
                if s == 0 || (m | n) & 1 == 1 {
                    out.push(DyadicPoint2 { m, n, s });
                }
            }
        }
    }
    out.sort();
    out
}

fn shl_checked(v: i64, by: u32) -> Result<i64, DyadicError> {
    if by >= 63 {
        return if v == 0 { Ok(0) } else { Err(DyadicError::Overflow) };
    }
    let shifted = v << by;
    if shifted >> by != v {
        return Err(DyadicError::Overflow);
    }
    Ok(shifted)
}

pub(crate) fn pow2_f64(exp: u32) -> f64 {
    f64::powi(2.0, exp as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex, b: Complex) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(Dyadic::normalize(6, 2), Dyadic { num: 3, exp: 1 });
        assert_eq!(Dyadic::normalize(4, 2), Dyadic { num: 1, exp: 0 });
        assert_eq!(Dyadic::normalize(5, 3), Dyadic { num: 5, exp: 3 });
        assert_eq!(Dyadic::normalize(0, 7), Dyadic::ZERO);
        assert_eq!(Dyadic::normalize(-12, 3), Dyadic { num: -3, exp: 1 });
    }

    #[test]
    fn small_phases_are_exact() {
        assert_eq!(phase(Dyadic::ZERO), Complex::new(1.0, 0.0));
        assert_eq!(phase(Dyadic::normalize(1, 1)), Complex::new(-1.0, 0.0));
        assert_eq!(phase(Dyadic::normalize(1, 2)), Complex::new(0.0, 1.0));
        assert_eq!(phase(Dyadic::normalize(-1, 2)), Complex::new(0.0, -1.0));
        assert_eq!(phase(Dyadic::normalize(7, 0)), Complex::new(1.0, 0.0));
    }

    #[test]
    fn larger_phases_match_trig() {
        for exp in 3..12 {
            for j in 0..(1u64 << exp) {
                let a = TAU * j as f64 / (1u64 << exp) as f64;
                assert!(close(root_of_unity(j, exp), Complex::new(a.cos(), a.sin())));
            }
        }
    }

    #[test]
    fn negative_numerators_wrap() {
        let t = Dyadic::normalize(-3, 3);
        assert_eq!(t.root_index(), 5);
        assert!(close(t.phase(), Dyadic::normalize(5, 3).phase()));
    }

    #[test]
    fn overflow_is_reported() {
        let big = Dyadic::integer(i64::MAX);
        assert_eq!(big.checked_add(Dyadic::integer(1)), Err(DyadicError::Overflow));
        assert_eq!(
            Dyadic::integer(i64::MIN).checked_neg(),
            Err(DyadicError::Overflow)
        );
        let fine = Dyadic::normalize(1, 60);
        assert_eq!(
            fine.checked_add(Dyadic::integer(1 << 10)),
            Err(DyadicError::Overflow)
        );
    }

    #[test]
    fn pd_module_examples() {
        let unit = Interval::half_open(0.0, 1.0).unwrap();
        let pts: Vec<String> = pd_module_enumerate(1, &unit)
            .iter()
            .map(|d| d.to_string())
            .collect();
        assert_eq!(pts, ["0", "1/2^1"]);
        let vals: Vec<f64> = pd_module_enumerate(2, &unit)
            .iter()
            .map(Dyadic::to_f64)
            .collect();
        assert_eq!(vals, [0.0, 0.25, 0.5, 0.75]);
        let ints: Vec<i64> = pd_module_enumerate(0, &Interval::closed(-2.0, 2.0).unwrap())
            .iter()
            .map(Dyadic::num)
            .collect();
        assert_eq!(ints, [-2, -1, 0, 1, 2]);
    }

    #[test]
    fn chair_module_examples() {
        let unit = Interval::half_open(0.0, 1.0).unwrap();
        let pts: Vec<(f64, f64)> = chair_module_enumerate(1, &unit, &unit)
            .iter()
            .map(DyadicPoint2::to_f64)
            .collect();
        assert_eq!(pts, [(0.0, 0.0), (0.0, 0.5), (0.5, 0.0), (0.5, 0.5)]);

        let half = DyadicPoint2::normalize(1, 1, 1);
        assert_eq!((half.m(), half.n(), half.exp()), (1, 1, 1));
        let q = DyadicPoint2::normalize(1, 2, 2);
        assert_eq!(q.exp(), 2);
        let box2 = Interval::closed(-1.0, 1.0).unwrap();
        let all = chair_module_enumerate(2, &box2, &box2);
        assert!(all.contains(&half));
        assert!(all.contains(&q));
        assert_eq!(chair_module_enumerate(0, &box2, &box2).len(), 9);
    }

    #[test]
    fn point_normalization() {
        assert_eq!(DyadicPoint2::normalize(2, 4, 2), DyadicPoint2::normalize(1, 2, 1));
        assert_eq!(DyadicPoint2::normalize(4, 8, 2), DyadicPoint2::integer(1, 2));
        assert_eq!(DyadicPoint2::normalize(0, 0, 5), DyadicPoint2::integer(0, 0));
        assert_eq!(DyadicPoint2::normalize(2, 0, 2).exp(), 1);
    }

    #[test]
    fn interval_rejects_reversed_bounds() {
        assert!(Interval::closed(1.0, 0.0).is_err());
        assert!(Interval::closed(0.0, f64::NAN).is_err());
    }
}
