//! Convergence planes: sweep initial estimations along a line of the
//! complex plane against fractional orders `alpha`, run one method per grid
//! cell, and classify which root (if any) each cell reaches.
//!
//! A plane is an `n_alpha x n_x0` grid. Columns sample the chosen segment
//! `[lo, hi]` left to right; rows sample `alpha` from `alpha_hi` at the top
//! (row 0) down to `alpha_lo`, so the classical `alpha = 1` behavior sits
//! on the top edge when `alpha_hi = 1`. Each cell is independent, which
//! makes generation embarrassingly parallel; results are merged by row
//! index so the output is byte-identical for every worker count.
//!
//! A cell counts as convergent only when the solver reports convergence
//! *and* the final iterate lies within `match_tol` of a known root —
//! iterations can settle on spurious points far from every root, and those
//! are reported as [`DIVERGED`].

use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;
use std::thread;

use crate::error::{Error, Result};
use crate::funcmodel::FunctionModel;
use crate::solvers::{Engine, MethodKind, SolverConfig};
use crate::ComplexValue;

/// Default classification tolerance: published reference roots are quoted
/// to about 5 significant decimals, so anything nearer than `1e-3` to a
/// root is attributed to it.
pub const DEFAULT_MATCH_TOL: f64 = 1e-3;

/// CSV value written for cells that reach no known root.
pub const DIVERGED: i64 = -1;

/// The line of the complex plane the initial estimations sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// `x0 = v` for `v` in `[lo, hi]`.
    RealLine,
    /// `x0 = i v` for `v` in `[lo, hi]`.
    ImaginaryLine,
}

impl Axis {
    /// The initial estimation for a sample value `v` on this axis.
    fn point(self, v: f64) -> ComplexValue {
        match self {
            Axis::RealLine => ComplexValue::new(v, 0.0),
            Axis::ImaginaryLine => ComplexValue::new(0.0, v),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::RealLine => write!(f, "real"),
            Axis::ImaginaryLine => write!(f, "imag"),
        }
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "real" | "re" => Ok(Axis::RealLine),
            "imag" | "imaginary" | "im" => Ok(Axis::ImaginaryLine),
            other => Err(Error::domain(format!("unknown axis '{other}' (use real|imag)"))),
        }
    }
}

/// Full description of one convergence plane.
///
/// The `alpha` grid overrides the order stored in `solver`; the solver
/// config contributes the derivative base, iteration budget, and stopping
/// tolerances. Grids of width or height 1 are permitted and sample `lo`
/// (respectively `alpha_hi`) alone.
#[derive(Debug, Clone)]
pub struct PlaneConfig {
    method: MethodKind,
    f: FunctionModel,
    axis: Axis,
    lo: f64,
    hi: f64,
    alpha_lo: f64,
    alpha_hi: f64,
    n_x0: usize,
    n_alpha: usize,
    roots: Vec<ComplexValue>,
    match_tol: f64,
    solver: SolverConfig,
}

impl PlaneConfig {
    /// Validated construction.
    ///
    /// # Errors
    ///
    /// [`Error::Domain`] for an empty segment (`lo >= hi` unless the grid
    /// direction is a single sample), an `alpha` range outside `(0, 1]`,
    /// zero resolution, an empty or insufficiently separated root list;
    /// [`Error::BaseMismatch`] when the solver base is not the model's
    /// reference point.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        method: MethodKind,
        f: FunctionModel,
        axis: Axis,
        segment: (f64, f64),
        alpha_range: (f64, f64),
        resolution: (usize, usize),
        roots: Vec<ComplexValue>,
        solver: SolverConfig,
    ) -> Result<Self> {
        let (lo, hi) = segment;
        let (alpha_lo, alpha_hi) = alpha_range;
        let (n_x0, n_alpha) = resolution;
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(Error::domain(format!("segment must satisfy lo < hi, got [{lo}, {hi}]")));
        }
        if !alpha_lo.is_finite() || !alpha_hi.is_finite() {
            return Err(Error::domain("alpha range must be finite"));
        }
        if alpha_lo <= 0.0 || alpha_lo > alpha_hi || alpha_hi > 1.0 {
            return Err(Error::domain(format!(
                "alpha range must satisfy 0 < alpha_lo <= alpha_hi <= 1, got [{alpha_lo}, {alpha_hi}]"
            )));
        }
        if n_x0 == 0 || n_alpha == 0 {
            return Err(Error::domain("plane resolution must be at least 1x1"));
        }
        if solver.base() != f.reference_point() {
            return Err(Error::BaseMismatch {
                base: solver.base(),
                reference_point: f.reference_point(),
            });
        }
        let config = Self {
            method,
            f,
            axis,
            lo,
            hi,
            alpha_lo,
            alpha_hi,
            n_x0,
            n_alpha,
            roots,
            match_tol: DEFAULT_MATCH_TOL,
            solver,
        };
        config.validate_roots()?;
        Ok(config)
    }

    /// Replace the classification tolerance (default [`DEFAULT_MATCH_TOL`]).
    ///
    /// # Errors
    ///
    /// [`Error::Domain`] unless `0 < match_tol` and the roots stay pairwise
    /// separated by more than `2 * match_tol`.
    pub fn with_match_tol(mut self, match_tol: f64) -> Result<Self> {
        if !match_tol.is_finite() || match_tol <= 0.0 {
            return Err(Error::domain(format!("match_tol must be positive, got {match_tol}")));
        }
        self.match_tol = match_tol;
        self.validate_roots()?;
        Ok(self)
    }

    fn validate_roots(&self) -> Result<()> {
        if self.roots.is_empty() {
            return Err(Error::domain("root list must not be empty"));
        }
        for r in &self.roots {
            if !r.re.is_finite() || !r.im.is_finite() {
                return Err(Error::domain(format!("root {r} is not finite")));
            }
        }
        for (i, a) in self.roots.iter().enumerate() {
            for b in &self.roots[i + 1..] {
                if (a - b).norm() <= 2.0 * self.match_tol {
                    return Err(Error::domain(format!(
                        "roots {a} and {b} are closer than twice the classification \
                         tolerance {}; classification would be ambiguous",
                        self.match_tol
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn method(&self) -> MethodKind {
        self.method
    }

    pub fn function(&self) -> &FunctionModel {
        &self.f
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn segment(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn alpha_range(&self) -> (f64, f64) {
        (self.alpha_lo, self.alpha_hi)
    }

    /// `(n_x0, n_alpha)`: columns sample the segment, rows sample alpha.
    pub fn resolution(&self) -> (usize, usize) {
        (self.n_x0, self.n_alpha)
    }

    pub fn roots(&self) -> &[ComplexValue] {
        &self.roots
    }

    pub fn match_tol(&self) -> f64 {
        self.match_tol
    }

    pub fn solver(&self) -> &SolverConfig {
        &self.solver
    }

    /// The alpha of grid row `row` (row 0 is `alpha_hi`, the top of the
    /// rendered image; the endpoints are sampled exactly).
    pub fn alpha_of_row(&self, row: usize) -> f64 {
        lerp(self.alpha_hi, self.alpha_lo, row, self.n_alpha)
    }

    /// The initial estimation of grid column `col` (column 0 is `lo`; the
    /// endpoints are sampled exactly).
    pub fn x0_of_col(&self, col: usize) -> ComplexValue {
        self.axis.point(lerp(self.lo, self.hi, col, self.n_x0))
    }
}

/// Endpoint-exact convex interpolation: `i = 0` gives `a`, `i = n - 1`
/// gives `b`, and a single-sample grid collapses to `a`.
fn lerp(a: f64, b: f64, i: usize, n: usize) -> f64 {
    if n <= 1 {
        return a;
    }
    let t = i as f64 / (n - 1) as f64;
    (1.0 - t) * a + t * b
}

/// A generated convergence plane.
///
/// `cells` and `iteration_counts` are row-major `n_alpha x n_x0` grids
/// (row 0 = `alpha_hi`); a cell holds the index into `config.roots()` of
/// the root it converged to, or `None` for divergence (including solver
/// convergence to a point that matches no known root). `percentage` is
/// always `100 * convergent cells / total cells`.
#[derive(Debug, Clone)]
pub struct PlaneResult {
    pub config: PlaneConfig,
    pub cells: Vec<Option<usize>>,
    pub iteration_counts: Vec<usize>,
    pub percentage: f64,
}

impl PlaneResult {
    /// Root index (or `None` for divergence) of the cell at `row`, `col`.
    pub fn cell(&self, row: usize, col: usize) -> Option<usize> {
        self.cells[row * self.config.n_x0 + col]
    }

    /// Iteration count of the cell at `row`, `col`.
    pub fn iterations(&self, row: usize, col: usize) -> usize {
        self.iteration_counts[row * self.config.n_x0 + col]
    }
}

/// Index of the unique root within `tol` of `x_final`, or `None` when no
/// root is that close (the plane's DIVERGED state). Roots separated by
/// more than `2 tol` guarantee uniqueness; with closer roots the nearest
/// one wins.
pub fn classify_root(x_final: ComplexValue, roots: &[ComplexValue], tol: f64) -> Option<usize> {
    if !x_final.re.is_finite() || !x_final.im.is_finite() {
        return None;
    }
    roots
        .iter()
        .enumerate()
        .map(|(i, r)| (i, (x_final - r).norm()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .filter(|(_, d)| *d <= tol)
        .map(|(i, _)| i)
}

/// One row of cells: `(root index, iterations)` per column.
type RowCells = Vec<(Option<usize>, usize)>;

fn compute_row(config: &PlaneConfig, row: usize) -> RowCells {
    let alpha = config.alpha_of_row(row);
    // The derivative preparation depends only on alpha, so it is shared by
    // the whole row. A config-level failure (e.g. a model whose derivative
    // has no closed form) marks the row divergent rather than aborting.
    let engine = match Engine::new(config.method, &config.f, alpha, config.solver.base()) {
        Ok(engine) => engine,
        Err(_) => return vec![(None, 0); config.n_x0],
    };
    (0..config.n_x0)
        .map(|col| {
            let x0 = config.x0_of_col(col);
            let mut last = x0;
            let (status, iterations) = engine.drive(
                x0,
                config.solver.max_iterations(),
                config.solver.step_tol(),
                config.solver.residual_tol(),
                |x, _| last = x,
            );
            let index = if status.converged() {
                classify_root(last, &config.roots, config.match_tol)
            } else {
                None
            };
            (index, iterations)
        })
        .collect()
}

/// Generate a plane with one worker per available CPU (capped at the row
/// count). Output is identical for every worker count; see
/// [`generate_plane_with_workers`].
pub fn generate_plane(config: &PlaneConfig) -> PlaneResult {
    let workers = thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    generate_plane_with_workers(config, workers)
}

/// Generate a plane on a fixed number of worker threads.
///
/// Rows are handed out through a shared queue and merged back by row
/// index, and every cell depends only on its own `(x0, alpha)`, so the
/// result — including the exact float `percentage` — is byte-for-byte
/// reproducible for any `workers` value (0 is treated as 1).
pub fn generate_plane_with_workers(config: &PlaneConfig, workers: usize) -> PlaneResult {
    let (n_x0, n_alpha) = config.resolution();
    let workers = workers.max(1).min(n_alpha);
    let mut rows: Vec<(usize, RowCells)> = if workers == 1 {
        (0..n_alpha).map(|row| (row, compute_row(config, row))).collect()
    } else {
        // Row 0 sits at the end so that pop() serves rows in order.
        let queue = Mutex::new((0..n_alpha).rev().collect::<Vec<_>>());
        let done = Mutex::new(Vec::with_capacity(n_alpha));
        thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let row = match queue.lock().unwrap().pop() {
                        Some(row) => row,
                        None => break,
                    };
                    let cells = compute_row(config, row);
                    done.lock().unwrap().push((row, cells));
                });
            }
        });
        done.into_inner().unwrap()
    };
    rows.sort_unstable_by_key(|(row, _)| *row);
    let mut cells = Vec::with_capacity(n_alpha * n_x0);
    let mut iteration_counts = Vec::with_capacity(n_alpha * n_x0);
    for (_, row_cells) in rows {
        for (index, iterations) in row_cells {
            cells.push(index);
            iteration_counts.push(iterations);
        }
    }
    let convergent = cells.iter().filter(|c| c.is_some()).count();
    let percentage = 100.0 * convergent as f64 / cells.len() as f64;
    PlaneResult { config: config.clone(), cells, iteration_counts, percentage }
}

/// The default 14-entry palette: a ColorBrewer-style qualitative set of 13
/// root colors followed by black for divergence. Enough for every builtin
/// model (the largest root list has 13 entries).
pub fn default_palette() -> Vec<[u8; 3]> {
    vec![
        [228, 26, 28],
        [55, 126, 184],
        [77, 175, 74],
        [152, 78, 163],
        [255, 127, 0],
        [255, 255, 51],
        [166, 86, 40],
        [247, 129, 191],
        [153, 153, 153],
        [27, 158, 119],
        [217, 95, 2],
        [117, 112, 179],
        [231, 41, 138],
        [0, 0, 0],
    ]
}

/// Render a plane as a binary P6 PPM image: width `n_x0`, height
/// `n_alpha`, row 0 = `alpha_hi` at the top, column 0 = `lo` on the left.
/// Cells converging to root `i` take `palette[i]`; divergent cells take
/// the palette's last color (black in [`default_palette`]).
///
/// # Errors
///
/// [`Error::PaletteTooSmall`] unless `palette.len() >= roots + 1`.
pub fn render_ppm(result: &PlaneResult, palette: &[[u8; 3]]) -> Result<Vec<u8>> {
    let needed = result.config.roots().len() + 1;
    if palette.len() < needed {
        return Err(Error::PaletteTooSmall { needed, got: palette.len() });
    }
    let diverged = palette[palette.len() - 1];
    let (n_x0, n_alpha) = result.config.resolution();
    let mut bytes = format!("P6\n{n_x0} {n_alpha}\n255\n").into_bytes();
    bytes.reserve(3 * result.cells.len());
    for cell in &result.cells {
        let rgb = match cell {
            Some(index) => palette[*index],
            None => diverged,
        };
        bytes.extend_from_slice(&rgb);
    }
    Ok(bytes)
}

/// Serialize a plane as UTF-8 CSV with header
/// `alpha,x0_re,x0_im,root_index,iterations`, one data row per cell in
/// row-major grid order. Floats carry 17 significant digits (round-trip
/// exact); `root_index` is [`DIVERGED`] (−1) for divergent cells.
pub fn write_csv(result: &PlaneResult) -> Vec<u8> {
    let (n_x0, n_alpha) = result.config.resolution();
    let mut out = String::from("alpha,x0_re,x0_im,root_index,iterations\n");
    for row in 0..n_alpha {
        let alpha = result.config.alpha_of_row(row);
        for col in 0..n_x0 {
            let x0 = result.config.x0_of_col(col);
            let index = match result.cell(row, col) {
                Some(i) => i as i64,
                None => DIVERGED,
            };
            let iterations = result.iterations(row, col);
            out.push_str(&format!(
                "{alpha:.16e},{:.16e},{:.16e},{index},{iterations}\n",
                x0.re, x0.im
            ));
        }
    }
    out.into_bytes()
}
