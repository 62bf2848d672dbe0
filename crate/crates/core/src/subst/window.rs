use super::{Label, SubstError};

/// A finite box of lattice cells carrying labels.
///
/// Cells are stored row-major with x fastest: in two dimensions the cell
/// `(x, y)` lives at `(y - origin_y) * extent_x + (x - origin_x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternWindow {
    origin: Vec<i64>,
    extent: Vec<usize>,
    labels: Vec<Label>,
}

impl PatternWindow {
    pub fn new(origin: Vec<i64>, extent: Vec<usize>, labels: Vec<Label>) -> Result<Self, SubstError> {
        if origin.len() != extent.len() || !(1..=2).contains(&origin.len()) {
            return Err(SubstError::InvalidWindow(format!(
                "origin has {} axes, extent has {}",
                origin.len(),
                extent.len()
            )));
        }
        let cells: usize = extent.iter().product();
        if cells != labels.len() {
            return Err(SubstError::InvalidWindow(format!(
                "{} labels for {} cells",
                labels.len(),
                cells
            )));
        }
        Ok(PatternWindow {
            origin,
            extent,
            labels,
        })
    }

    pub(crate) fn from_parts_unchecked(origin: Vec<i64>, extent: Vec<usize>, labels: Vec<Label>) -> Self {
        debug_assert_eq!(extent.iter().product::<usize>(), labels.len());
        PatternWindow {
            origin,
            extent,
            labels,
        }
    }

    /// One cell at the origin.
    pub fn single(dim: usize, label: Label) -> Self {
        PatternWindow {
            origin: vec![0; dim],
            extent: vec![1; dim],
            labels: vec![label],
        }
    }

    /// Builds a window by evaluating `f` on every cell.
    pub fn from_fn(origin: Vec<i64>, extent: Vec<usize>, mut f: impl FnMut(&[i64]) -> Label) -> Self {
        let mut labels = Vec::with_capacity(extent.iter().product());
        match extent.len() {
            1 => {
                for i in 0..extent[0] {
                    labels.push(f(&[origin[0] + i as i64]));
                }
            }
            _ => {
                for iy in 0..extent[1] {
                    for ix in 0..extent[0] {
                        labels.push(f(&[origin[0] + ix as i64, origin[1] + iy as i64]));
                    }
                }
            }
        }
        PatternWindow {
            origin,
            extent,
            labels,
        }
    }

    pub fn dim(&self) -> usize {
        self.origin.len()
    }

    /// Inclusive lower corner.
    pub fn origin(&self) -> &[i64] {
        &self.origin
    }

    pub fn extent(&self) -> &[usize] {
        &self.extent
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    fn index(&self, pos: &[i64]) -> Option<usize> {
        if pos.len() != self.dim() {
            return None;
        }
        let mut idx = 0usize;
        let mut stride = 1usize;
        for axis in 0..self.dim() {
            let rel = pos[axis] - self.origin[axis];
            if rel < 0 || rel as usize >= self.extent[axis] {
                return None;
            }
            idx += rel as usize * stride;
            stride *= self.extent[axis];
        }
        Some(idx)
    }

    pub fn get(&self, pos: &[i64]) -> Option<Label> {
        self.index(pos).map(|i| self.labels[i])
    }

    /// The sub-box with the given corner and extent, if it lies inside.
    pub fn restrict(&self, origin: &[i64], extent: &[usize]) -> Option<PatternWindow> {
        if origin.len() != self.dim() || extent.len() != self.dim() {
            return None;
        }
        for axis in 0..self.dim() {
            let lo = origin[axis] - self.origin[axis];
            if lo < 0 || lo as usize + extent[axis] > self.extent[axis] {
                return None;
            }
        }
        let labels = match self.dim() {
            1 => {
                let lo = (origin[0] - self.origin[0]) as usize;
                self.labels[lo..lo + extent[0]].to_vec()
            }
            _ => {
                let lo_x = (origin[0] - self.origin[0]) as usize;
                let lo_y = (origin[1] - self.origin[1]) as usize;
                let w = self.extent[0];
                let mut out = Vec::with_capacity(extent[0] * extent[1]);
                for iy in lo_y..lo_y + extent[1] {
                    out.extend_from_slice(&self.labels[iy * w + lo_x..iy * w + lo_x + extent[0]]);
                }
                out
            }
        };
        Some(PatternWindow {
            origin: origin.to_vec(),
            extent: extent.to_vec(),
            labels,
        })
    }

    /// The centred cube `[-n, n]^d`, if contained.
    pub fn centered_cube(&self, n: usize) -> Option<PatternWindow> {
        let origin = vec![-(n as i64); self.dim()];
        let extent = vec![2 * n + 1; self.dim()];
        self.restrict(&origin, &extent)
    }

    /// Rows from the largest y down (printed order). A word is one row.
    pub fn rows_top_down(&self) -> Vec<Vec<Label>> {
        match self.dim() {
            1 => vec![self.labels.clone()],
            _ => {
                let w = self.extent[0];
                if w == 0 {
                    return Vec::new();
                }
                self.labels.chunks(w).rev().map(<[Label]>::to_vec).collect()
            }
        }
    }

    /// Iterates `(position, label)` over all cells in storage order.
    pub fn cells(&self) -> impl Iterator<Item = (Vec<i64>, Label)> + '_ {
        let w = self.extent[0].max(1);
        self.labels.iter().enumerate().map(move |(i, &l)| {
            let mut pos = vec![self.origin[0] + (i % w) as i64];
            if self.dim() == 2 {
                pos.push(self.origin[1] + (i / w) as i64);
            }
            (pos, l)
        })
    }
}

/// A two-cell (1D) or 2×2 (2D) patch around the origin, occupying `{-1, 0}`
/// on every axis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seed(PatternWindow);

impl Seed {
    /// `left | right` at positions -1 and 0.
    pub fn word(left: Label, right: Label) -> Seed {
        Seed(PatternWindow {
            origin: vec![-1],
            extent: vec![2],
            labels: vec![left, right],
        })
    }

    /// Rows in printed order: `top` at y = 0, `bottom` at y = -1.
    pub fn block(top: [Label; 2], bottom: [Label; 2]) -> Seed {
        Seed(PatternWindow {
            origin: vec![-1, -1],
            extent: vec![2, 2],
            labels: vec![bottom[0], bottom[1], top[0], top[1]],
        })
    }

    /// Labels in storage order (x fastest, bottom row first).
    pub fn from_labels(dim: usize, labels: Vec<Label>) -> Result<Seed, SubstError> {
        Seed::from_window(PatternWindow::new(vec![-1; dim], vec![2; dim], labels)?)
    }

    pub fn from_window(window: PatternWindow) -> Result<Seed, SubstError> {
        if window.extent.iter().any(|&e| e != 2) || window.origin.iter().any(|&o| o != -1) {
            return Err(SubstError::InvalidWindow(
                "a seed must cover {-1, 0} on every axis".into(),
            ));
        }
        Ok(Seed(window))
    }

    pub fn window(&self) -> &PatternWindow {
        &self.0
    }
}
