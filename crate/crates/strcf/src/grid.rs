//! Dense real/complex 2-D grids, multichannel stacks, and the 2-D DFT
//! conventions shared by the whole crate.
//!
//! Conventions, fixed here and relied on everywhere else:
//!
//! * forward DFT is unnormalized, inverse carries the 1/(MN) factor;
//! * `correlate` slides the sample past the filter,
//!   `r(m) = sum_d sum_i x^d(i + m) f^d(i)`, spectrally
//!   `sum_d xhat^d . conj(fhat^d)`, so the response peak sits at the
//!   target displacement and a delta filter reproduces the sample;
//! * grids are row-major, `data[r * cols + c]`.

use std::cell::RefCell;

use rustfft::FftPlanner;

use crate::error::{Error, Result};

pub use rustfft::num_complex::Complex64;

/// Dense real-valued M x N grid in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct RealGrid {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

/// Dense complex-valued M x N grid in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexGrid {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

/// Anything with a rectangular shape; lets [`MultiChannel`] hold either
/// grid flavor.
pub trait GridShape {
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;
}

macro_rules! grid_common {
    ($ty:ident, $elem:ty, $zero:expr) => {
        impl $ty {
            /// All-zero grid. Dimensions must be at least 1x1.
            pub fn zeros(rows: usize, cols: usize) -> Self {
                assert!(rows >= 1 && cols >= 1, "grid dimensions must be >= 1");
                Self {
                    rows,
                    cols,
                    data: vec![$zero; rows * cols],
                }
            }

            /// Wrap an existing row-major buffer.
            pub fn from_vec(rows: usize, cols: usize, data: Vec<$elem>) -> Self {
                assert!(rows >= 1 && cols >= 1, "grid dimensions must be >= 1");
                assert_eq!(data.len(), rows * cols, "buffer length != rows * cols");
                Self { rows, cols, data }
            }

            /// Build a grid by evaluating `f(row, col)`.
            pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> $elem) -> Self {
                let mut data = Vec::with_capacity(rows * cols);
                for r in 0..rows {
                    for c in 0..cols {
                        data.push(f(r, c));
                    }
                }
                Self::from_vec(rows, cols, data)
            }

            pub fn rows(&self) -> usize {
                self.rows
            }

            pub fn cols(&self) -> usize {
                self.cols
            }

            pub fn len(&self) -> usize {
                self.data.len()
            }

            pub fn is_empty(&self) -> bool {
                self.data.is_empty()
            }

            #[inline]
            pub fn at(&self, r: usize, c: usize) -> $elem {
                self.data[r * self.cols + c]
            }

            #[inline]
            pub fn set(&mut self, r: usize, c: usize, v: $elem) {
                self.data[r * self.cols + c] = v;
            }

            pub fn data(&self) -> &[$elem] {
                &self.data
            }

            pub fn data_mut(&mut self) -> &mut [$elem] {
                &mut self.data
            }

            pub fn same_shape(&self, other: &Self) -> bool {
                self.rows == other.rows && self.cols == other.cols
            }
        }

        impl GridShape for $ty {
            fn rows(&self) -> usize {
                self.rows
            }

            fn cols(&self) -> usize {
                self.cols
            }
        }
    };
}

grid_common!(RealGrid, f64, 0.0);
grid_common!(ComplexGrid, Complex64, Complex64::new(0.0, 0.0));

impl RealGrid {
    /// Constant-valued grid.
    pub fn filled(rows: usize, cols: usize, value: f64) -> Self {
        let mut g = Self::zeros(rows, cols);
        g.data_mut().fill(value);
        g
    }

    /// Squared Frobenius norm.
    pub fn norm_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    /// Elementwise map into a new grid.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Elementwise combination of two equally shaped grids.
    pub fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert!(self.same_shape(other), "zip_map shape mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }
}

impl ComplexGrid {
    /// Squared Frobenius norm, `sum |z|^2`.
    pub fn norm_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Ordered stack of D equally sized channels.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiChannel<G> {
    channels: Vec<G>,
}

impl<G: GridShape> MultiChannel<G> {
    /// Wrap a non-empty set of equally sized channels.
    pub fn new(channels: Vec<G>) -> Self {
        assert!(!channels.is_empty(), "at least one channel required");
        let (r, c) = (channels[0].rows(), channels[0].cols());
        assert!(
            channels.iter().all(|g| g.rows() == r && g.cols() == c),
            "all channels must share dimensions"
        );
        Self { channels }
    }

    pub fn num_channels(&self) -> usize {
        self.channels.len()
    }

    pub fn rows(&self) -> usize {
        self.channels[0].rows()
    }

    pub fn cols(&self) -> usize {
        self.channels[0].cols()
    }

    pub fn channel(&self, d: usize) -> &G {
        &self.channels[d]
    }

    pub fn channel_mut(&mut self, d: usize) -> &mut G {
        &mut self.channels[d]
    }

    pub fn channels(&self) -> &[G] {
        &self.channels
    }

    pub fn iter(&self) -> std::slice::Iter<'_, G> {
        self.channels.iter()
    }

    /// Per-channel map into a possibly different grid flavor.
    pub fn map<H: GridShape>(&self, f: impl Fn(&G) -> H) -> MultiChannel<H> {
        MultiChannel::new(self.channels.iter().map(f).collect())
    }

    /// True when both stacks share channel count and grid dimensions.
    pub fn same_shape<H: GridShape>(&self, other: &MultiChannel<H>) -> bool {
        self.num_channels() == other.num_channels()
            && self.rows() == other.rows()
            && self.cols() == other.cols()
    }
}

impl MultiChannel<RealGrid> {
    /// All-zero stack with the given shape.
    pub fn zeros(channels: usize, rows: usize, cols: usize) -> Self {
        Self::new((0..channels).map(|_| RealGrid::zeros(rows, cols)).collect())
    }

    /// Sum of per-channel squared norms.
    pub fn norm_sq(&self) -> f64 {
        self.channels.iter().map(RealGrid::norm_sq).sum()
    }

    /// Per-channel elementwise combination.
    pub fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64 + Copy) -> Self {
        assert!(self.same_shape(other), "zip_map shape mismatch");
        Self::new(
            self.channels
                .iter()
                .zip(&other.channels)
                .map(|(a, b)| a.zip_map(b, f))
                .collect(),
        )
    }
}

thread_local! {
    // rustfft planners cache their plans per size; one per thread keeps the
    // grid operations pure from the caller's point of view.
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn fft2_in_place(data: &mut [Complex64], rows: usize, cols: usize, inverse: bool) {
    let (row_fft, col_fft) = PLANNER.with(|p| {
        let mut planner = p.borrow_mut();
        if inverse {
            (planner.plan_fft_inverse(cols), planner.plan_fft_inverse(rows))
        } else {
            (planner.plan_fft_forward(cols), planner.plan_fft_forward(rows))
        }
    });

    for r in 0..rows {
        row_fft.process(&mut data[r * cols..(r + 1) * cols]);
    }

    // Column pass via transpose so each 1-D FFT runs on contiguous memory.
    let mut t = vec![Complex64::new(0.0, 0.0); rows * cols];
    for r in 0..rows {
        for c in 0..cols {
            t[c * rows + r] = data[r * cols + c];
        }
    }
    for c in 0..cols {
        col_fft.process(&mut t[c * rows..(c + 1) * rows]);
    }
    for r in 0..rows {
        for c in 0..cols {
            data[r * cols + c] = t[c * rows + r];
        }
    }
}

/// Unnormalized forward 2-D DFT of a real grid. The DC coefficient equals
/// the sum of all input entries.
pub fn dft2(g: &RealGrid) -> ComplexGrid {
    let mut data: Vec<Complex64> = g.data().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft2_in_place(&mut data, g.rows(), g.cols(), false);
    ComplexGrid::from_vec(g.rows(), g.cols(), data)
}

/// Relative tolerance for the imaginary residue allowed when inverting a
/// nominally conjugate-symmetric spectrum.
pub const IDFT_SYMMETRY_TOL: f64 = 1e-8;

/// Inverse 2-D DFT with 1/(MN) normalization.
///
/// The input must be (approximately) the DFT of a real grid; the imaginary
/// residue is discarded after checking it stays below
/// `IDFT_SYMMETRY_TOL * max |G|`.
pub fn idft2(g: &ComplexGrid) -> Result<RealGrid> {
    let mut data = g.data().to_vec();
    fft2_in_place(&mut data, g.rows(), g.cols(), true);

    let scale = 1.0 / (g.rows() * g.cols()) as f64;
    let max_in = g.data().iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
    let tolerance = IDFT_SYMMETRY_TOL * max_in;
    // The residue is checked pre-normalization against the input scale;
    // rustfft's inverse is unnormalized just like the forward.
    let residue = data.iter().map(|z| z.im.abs()).fold(0.0_f64, f64::max) * scale;
    if residue > tolerance {
        return Err(Error::SymmetryViolation { residue, tolerance });
    }

    Ok(RealGrid::from_vec(
        g.rows(),
        g.cols(),
        data.iter().map(|z| z.re * scale).collect(),
    ))
}

/// Elementwise complex product.
pub fn hadamard(a: &ComplexGrid, b: &ComplexGrid) -> Result<ComplexGrid> {
    if !a.same_shape(b) {
        return Err(Error::DimMismatch(format!(
            "hadamard: {}x{} vs {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(ComplexGrid::from_vec(
        a.rows(),
        a.cols(),
        a.data().iter().zip(b.data()).map(|(&x, &y)| x * y).collect(),
    ))
}

/// Accumulate `sum_d xhat^d . conj(fhat^d)`, the cross spectrum behind
/// [`correlate`]. Shapes must already agree.
pub(crate) fn cross_spectrum(
    xhat: &MultiChannel<ComplexGrid>,
    fhat: &MultiChannel<ComplexGrid>,
) -> ComplexGrid {
    debug_assert!(xhat.same_shape(fhat));
    let mut acc = ComplexGrid::zeros(xhat.rows(), xhat.cols());
    for (xc, fc) in xhat.iter().zip(fhat.iter()) {
        for (a, (&x, &f)) in acc.data_mut().iter_mut().zip(xc.data().iter().zip(fc.data())) {
            *a += x * f.conj();
        }
    }
    acc
}

/// Sum over channels of the circular cross-correlation of `x^d` with `f^d`,
/// computed spectrally. This is the response map used both for the training
/// residual and for detection.
pub fn correlate(x: &MultiChannel<RealGrid>, f: &MultiChannel<RealGrid>) -> Result<RealGrid> {
    if !x.same_shape(f) {
        return Err(Error::DimMismatch(format!(
            "correlate: {}ch {}x{} vs {}ch {}x{}",
            x.num_channels(),
            x.rows(),
            x.cols(),
            f.num_channels(),
            f.rows(),
            f.cols()
        )));
    }
    let xhat = x.map(dft2);
    let fhat = f.map(dft2);
    idft2(&cross_spectrum(&xhat, &fhat))
}
