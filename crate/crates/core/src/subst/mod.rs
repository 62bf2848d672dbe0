//! Constant-length substitutions on words and on square blocks.
//!
//! A block rule maps one cell to a `b × b` block. Rule images are stored in
//! printed order (top row first); when laid out on the lattice the top row
//! receives the larger y-coordinate and columns run left to right with
//! increasing x.

mod parse;
mod window;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

pub use parse::{parse_rules, render_rules};
pub use window::{PatternWindow, Seed};

/// Index of a letter in the alphabet of a [`SubstitutionSystem`].
pub type Label = u8;

pub const MAX_ALPHABET: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("rule for `{rule}` uses unknown label `{label}`")]
    UnknownLabel { rule: String, label: String },
    #[error("rule for `{rule}` has image length {found}, expected {expected} (non-constant length)")]
    NonConstantLength {
        rule: String,
        expected: usize,
        found: usize,
    },
    #[error("rule for `{rule}` is ragged: {detail}")]
    RaggedBlock { rule: String, detail: String },
    #[error("no rule given for label `{0}`")]
    MissingRule(String),
    #[error("label `{0}` has more than one rule")]
    DuplicateRule(String),
    #[error("label `{0}` appears twice in the alphabet")]
    DuplicateLabel(String),
    #[error("expansion factor must be at least 2, got {0}")]
    FactorTooSmall(usize),
    #[error("alphabet must have between 1 and {MAX_ALPHABET} labels, got {0}")]
    AlphabetSize(usize),
    #[error("seed is not legal for this substitution")]
    IllegalSeed,
    #[error("substitution is not primitive")]
    NotPrimitive,
    #[error("invalid window: {0}")]
    InvalidWindow(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    /// One-dimensional word substitution.
    Word,
    /// Two-dimensional square block substitution.
    Block,
}

impl Kind {
    pub fn dim(self) -> usize {
        match self {
            Kind::Word => 1,
            Kind::Block => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstitutionSystem {
    alphabet: Vec<String>,
    kind: Kind,
    factor: usize,
    rules: Vec<Vec<Label>>,
}

impl SubstitutionSystem {
    /// Builds a validated system. `rules[l]` is the image of label `l`;
    /// block images are `factor²` labels in printed (top row first) order.
    pub fn new(
        alphabet: Vec<String>,
        kind: Kind,
        factor: usize,
        rules: Vec<Vec<Label>>,
    ) -> Result<Self, SubstError> {
        if alphabet.is_empty() || alphabet.len() > MAX_ALPHABET {
            return Err(SubstError::AlphabetSize(alphabet.len()));
        }
        for (i, a) in alphabet.iter().enumerate() {
            if alphabet[..i].contains(a) {
                return Err(SubstError::DuplicateLabel(a.clone()));
            }
        }
        if factor < 2 {
            return Err(SubstError::FactorTooSmall(factor));
        }
        if rules.len() != alphabet.len() {
            let missing = alphabet.get(rules.len()).cloned().unwrap_or_default();
            return Err(SubstError::MissingRule(missing));
        }
        let expected = factor.pow(kind.dim() as u32);
        for (label, image) in rules.iter().enumerate() {
            if image.len() != expected {
                let rule = alphabet[label].clone();
                return Err(match kind {
                    Kind::Word => SubstError::NonConstantLength {
                        rule,
                        expected,
                        found: image.len(),
                    },
                    Kind::Block => SubstError::RaggedBlock {
                        rule,
                        detail: format!("{} cells, expected {expected}", image.len()),
                    },
                });
            }
            if let Some(&bad) = image.iter().find(|&&l| l as usize >= alphabet.len()) {
                return Err(SubstError::UnknownLabel {
                    rule: alphabet[label].clone(),
                    label: bad.to_string(),
                });
            }
        }
        Ok(SubstitutionSystem {
            alphabet,
            kind,
            factor,
            rules,
        })
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.kind.dim()
    }

    /// Linear expansion factor `b`.
    pub fn factor(&self) -> usize {
        self.factor
    }

    pub fn rule(&self, label: Label) -> &[Label] {
        &self.rules[label as usize]
    }

    pub fn label_of(&self, name: &str) -> Option<Label> {
        self.alphabet
            .iter()
            .position(|a| a == name)
            .map(|i| i as Label)
    }

    /// Label of the image of `label` at offset `(dx, dy)` inside its block,
    /// where `dy = 0` is the bottom row.
    fn image_cell(&self, label: Label, dx: usize, dy: usize) -> Label {
        let b = self.factor;
        match self.kind {
            Kind::Word => self.rules[label as usize][dx],
            Kind::Block => self.rules[label as usize][(b - 1 - dy) * b + dx],
        }
    }

    /// The `p`-th power of the substitution, `p >= 1`.
    pub fn power(&self, p: u32) -> SubstitutionSystem {
        assert!(p >= 1, "substitution power must be positive");
        if p == 1 {
            return self.clone();
        }
        let rules = (0..self.alphabet.len())
            .map(|label| {
                let mut w = PatternWindow::single(self.dim(), label as Label);
                for _ in 0..p {
                    w = substitute(self, &w);
                }
                match self.kind {
                    Kind::Word => w.labels().to_vec(),
                    Kind::Block => w.rows_top_down().concat(),
                }
            })
            .collect();
        SubstitutionSystem {
            alphabet: self.alphabet.clone(),
            kind: self.kind,
            factor: self.factor.pow(p),
            rules,
        }
    }

    /// `counts[i][j]` = number of `i` in the image of `j`.
    pub fn count_matrix(&self) -> Vec<Vec<u64>> {
        let n = self.alphabet.len();
        let mut m = vec![vec![0u64; n]; n];
        for (j, image) in self.rules.iter().enumerate() {
            for &i in image {
                m[i as usize][j] += 1;
            }
        }
        m
    }

    /// True if some power of the count matrix is strictly positive.
    pub fn is_primitive(&self) -> bool {
        let n = self.alphabet.len();
        let base: Vec<Vec<bool>> = self
            .count_matrix()
            .iter()
            .map(|row| row.iter().map(|&c| c > 0).collect())
            .collect();
        // Wielandt: a primitive n×n matrix has a positive power of order at
        // most (n-1)^2 + 1.
        let bound = (n - 1) * (n - 1) + 1;
        let mut acc = base.clone();
        for _ in 0..bound {
            if acc.iter().all(|row| row.iter().all(|&x| x)) {
                return true;
            }
            acc = bool_mul(&acc, &base);
        }
        acc.iter().all(|row| row.iter().all(|&x| x))
    }
}

fn bool_mul(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).any(|k| a[i][k] && b[k][j]))
                .collect()
        })
        .collect()
}

/// Applies the substitution once; origin and extent scale by the factor.
pub fn substitute(system: &SubstitutionSystem, patch: &PatternWindow) -> PatternWindow {
    let b = system.factor();
    assert_eq!(patch.dim(), system.dim(), "patch dimension mismatch");
    let origin: Vec<i64> = patch.origin().iter().map(|&o| o * b as i64).collect();
    let extent: Vec<usize> = patch.extent().iter().map(|&e| e * b).collect();
    let src = patch.labels();
    let labels = match system.kind() {
        Kind::Word => {
            let mut out = vec![0; extent[0]];
            out.par_chunks_mut(b)
                .zip(src.par_iter())
                .for_each(|(chunk, &l)| chunk.copy_from_slice(system.rule(l)));
            out
        }
        Kind::Block => {
            let (w_in, w_out) = (patch.extent()[0], extent[0]);
            let mut out = vec![0; extent[0] * extent[1]];
            if w_out > 0 {
                out.par_chunks_mut(w_out).enumerate().for_each(|(oy, row)| {
                    let (iy, dy) = (oy / b, oy % b);
                    let src_row = &src[iy * w_in..(iy + 1) * w_in];
                    for (ix, &l) in src_row.iter().enumerate() {
                        for dx in 0..b {
                            row[ix * b + dx] = system.image_cell(l, dx, dy);
                        }
                    }
                });
            }
            out
        }
    };
    PatternWindow::from_parts_unchecked(origin, extent, labels)
}

/// True if the central `2^d` patch of the substituted seed is the seed.
pub fn check_seed_legal(system: &SubstitutionSystem, seed: &Seed) -> bool {
    let w = seed.window();
    if w.dim() != system.dim() {
        return false;
    }
    let image = substitute(system, w);
    image.restrict(w.origin(), w.extent()).as_ref() == Some(w)
}

/// Iterates the substitution on a legal seed. The result covers
/// `[-b^n, b^n)` per axis and contains the previous iterate at its centre.
pub fn fixed_point_window(
    system: &SubstitutionSystem,
    seed: &Seed,
    iterations: u32,
) -> Result<PatternWindow, SubstError> {
    if !check_seed_legal(system, seed) {
        return Err(SubstError::IllegalSeed);
    }
    let mut w = seed.window().clone();
    for _ in 0..iterations {
        w = substitute(system, &w);
    }
    Ok(w)
}

/// Smallest power `p <= max_power` of `system` for which `seed` is legal.
pub fn legal_power(system: &SubstitutionSystem, seed: &Seed, max_power: u32) -> Option<u32> {
    (1..=max_power).find(|&p| check_seed_legal(&system.power(p), seed))
}

/// Searches all seeds in label order for one that is legal under some power
/// `<= max_power`; returns the first found together with that power.
pub fn find_legal_seed(system: &SubstitutionSystem, max_power: u32) -> Option<(Seed, u32)> {
    let n = system.alphabet().len();
    let cells = 1usize << system.dim();
    let total = n.checked_pow(cells as u32)?;
    let powers: Vec<SubstitutionSystem> = (1..=max_power).map(|p| system.power(p)).collect();
    for code in 0..total {
        let mut labels = vec![0 as Label; cells];
        let mut c = code;
        for slot in labels.iter_mut().rev() {
            *slot = (c % n) as Label;
            c /= n;
        }
        let seed = Seed::from_labels(system.dim(), labels).expect("seed shape");
        if let Some(p) = powers.iter().position(|s| check_seed_legal(s, &seed)) {
            return Some((seed, p as u32 + 1));
        }
    }
    None
}

/// Letter frequencies of the fixed point: the right Perron eigenvector of the
/// count matrix normalised to sum 1, indexed by label.
pub fn natural_frequencies(system: &SubstitutionSystem) -> Result<Vec<BigRational>, SubstError> {
    if !system.is_primitive() {
        return Err(SubstError::NotPrimitive);
    }
    let n = system.alphabet().len();
    // Constant length: every column sums to b^d, which is the Perron root.
    let lambda = BigInt::from(system.rule(0).len());
    let counts = system.count_matrix();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut v = BigInt::from(counts[i][j]);
                    if i == j {
                        v -= &lambda;
                    }
                    BigRational::from_integer(v)
                })
                .collect()
        })
        .collect();
    let v = null_vector(&mut a).ok_or(SubstError::NotPrimitive)?;
    let total: BigRational = v.iter().cloned().fold(BigRational::zero(), |s, x| s + x);
    Ok(v.into_iter().map(|x| x / &total).collect())
}

/// One non-zero vector of the kernel of `a` (square), by exact row reduction.
fn null_vector(a: &mut [Vec<BigRational>]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..n).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = BigRational::one() / a[row][col].clone();
        for x in a[row].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..n {
                    let delta = &f * &a[row][c];
                    a[r][c] = &a[r][c] - delta;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
    }
    let free = (0..n).find(|c| !pivot_cols.contains(c))?;
    let mut v = vec![BigRational::zero(); n];
    v[free] = BigRational::one();
    for (r, &pc) in pivot_cols.iter().enumerate() {
        v[pc] = -a[r][free].clone();
    }
    Some(v)
}

/// Relative frequency of every label in a window.
pub fn letter_frequencies(window: &PatternWindow, alphabet_size: usize) -> Vec<f64> {
    let mut counts = vec![0u64; alphabet_size];
    for &l in window.labels() {
        counts[l as usize] += 1;
    }
    let total = window.labels().len().max(1) as f64;
    counts.into_iter().map(|c| c as f64 / total).collect()
}

/// The two systems shipped with the crate, parsed from the bundled rule files.
pub mod builtin {
    use super::*;

    pub const PERIOD_DOUBLING_RULES: &str = include_str!("../../rules/period_doubling.sub");
    pub const CHAIR_RULES: &str = include_str!("../../rules/chair.sub");

    /// `a -> ab, b -> aa`.
    pub fn period_doubling() -> SubstitutionSystem {
        parse_rules(PERIOD_DOUBLING_RULES).expect("bundled period doubling rules")
    }

    /// The square of the period doubling substitution, which fixes `a|a`.
    pub fn period_doubling_squared() -> SubstitutionSystem {
        period_doubling().power(2)
    }

    pub fn period_doubling_seed() -> Seed {
        Seed::word(0, 0)
    }

    pub fn chair() -> SubstitutionSystem {
        parse_rules(CHAIR_RULES).expect("bundled chair rules")
    }

    /// `3 0` over `2 1`, centred on the origin.
    pub fn chair_seed() -> Seed {
        Seed::block([3, 0], [2, 1])
    }
}
