//! Filter learning for one frame: ADMM with closed-form subproblems.
//!
//! The model fit here is a single-sample correlation filter with two
//! penalties: a per-location spatial weight on the filter coefficients and
//! a temporal proximity term `mu/2 * ||f - f_prev||^2` keeping the new
//! filter close to the previous frame's. Splitting `f = g` turns each ADMM
//! round into three cheap steps: a per-pixel rank-one solve in the Fourier
//! domain for `f`, an elementwise division for `g`, and the scaled
//! multiplier update for `h`.

use crate::error::{Error, Result};
use crate::grid::{cross_spectrum, dft2, idft2, Complex64, ComplexGrid, MultiChannel, RealGrid};

/// Nonnegative per-location penalty on filter coefficients. Small over the
/// target region, large toward the boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialWeight {
    grid: RealGrid,
}

impl SpatialWeight {
    /// Wrap a weight grid; every entry must be finite and nonnegative.
    pub fn new(grid: RealGrid) -> Self {
        assert!(
            grid.data().iter().all(|w| w.is_finite() && *w >= 0.0),
            "spatial weights must be finite and nonnegative"
        );
        Self { grid }
    }

    pub fn grid(&self) -> &RealGrid {
        &self.grid
    }

    pub fn rows(&self) -> usize {
        self.grid.rows()
    }

    pub fn cols(&self) -> usize {
        self.grid.cols()
    }
}

/// ADMM hyper-parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmmParams {
    /// Temporal regularization weight.
    pub mu: f64,
    /// Initial stepsize.
    pub gamma0: f64,
    /// Stepsize cap.
    pub gamma_max: f64,
    /// Stepsize growth factor per iteration.
    pub rho: f64,
    /// Number of ADMM rounds.
    pub iters: usize,
}

impl Default for AdmmParams {
    fn default() -> Self {
        Self {
            mu: 16.0,
            gamma0: 10.0,
            gamma_max: 100.0,
            rho: 1.2,
            iters: 2,
        }
    }
}

impl AdmmParams {
    /// Check the parameter invariants, reporting the first violation.
    pub fn validate(&self) -> Result<()> {
        if !(self.mu >= 0.0) {
            return Err(Error::Config(format!("mu must be >= 0, got {}", self.mu)));
        }
        if !(self.gamma0 > 0.0) {
            return Err(Error::Config(format!(
                "gamma0 must be > 0, got {}",
                self.gamma0
            )));
        }
        if !(self.gamma_max >= self.gamma0) {
            return Err(Error::Config(format!(
                "gamma_max ({}) must be >= gamma0 ({})",
                self.gamma_max, self.gamma0
            )));
        }
        if !(self.rho >= 1.0) {
            return Err(Error::Config(format!("rho must be >= 1, got {}", self.rho)));
        }
        if self.iters < 1 {
            return Err(Error::Config("iters must be >= 1".into()));
        }
        Ok(())
    }
}

/// The learned filter for the current frame together with the previous
/// frame's filter that anchors the temporal penalty.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterState {
    pub f_prev: MultiChannel<RealGrid>,
    pub f_cur: MultiChannel<RealGrid>,
}

impl FilterState {
    pub fn new(f_prev: MultiChannel<RealGrid>, f_cur: MultiChannel<RealGrid>) -> Self {
        assert!(f_prev.same_shape(&f_cur), "filter shapes must match");
        Self { f_prev, f_cur }
    }

    /// Shift the current filter into the previous slot and install `f_new`.
    pub fn advance(&mut self, f_new: MultiChannel<RealGrid>) {
        assert!(self.f_cur.same_shape(&f_new), "filter shapes must match");
        self.f_prev = std::mem::replace(&mut self.f_cur, f_new);
    }

    pub fn num_channels(&self) -> usize {
        self.f_cur.num_channels()
    }

    pub fn rows(&self) -> usize {
        self.f_cur.rows()
    }

    pub fn cols(&self) -> usize {
        self.f_cur.cols()
    }
}

/// Per-call solver telemetry: objective value after every round and the
/// final primal residual `||f - g||`.
#[derive(Debug, Clone, Default)]
pub struct LearnDiagnostics {
    pub objectives: Vec<f64>,
    pub primal_residual: f64,
}

fn check_problem_shapes(
    x_channels: usize,
    x_rows: usize,
    x_cols: usize,
    y_rows: usize,
    y_cols: usize,
    w: &SpatialWeight,
    f_channels: usize,
    f_rows: usize,
    f_cols: usize,
) -> Result<()> {
    if x_rows != y_rows || x_cols != y_cols {
        return Err(Error::DimMismatch(format!(
            "sample {x_rows}x{x_cols} vs label {y_rows}x{y_cols}"
        )));
    }
    if w.rows() != x_rows || w.cols() != x_cols {
        return Err(Error::DimMismatch(format!(
            "sample {x_rows}x{x_cols} vs spatial weight {}x{}",
            w.rows(),
            w.cols()
        )));
    }
    if x_channels != f_channels || x_rows != f_rows || x_cols != f_cols {
        return Err(Error::DimMismatch(format!(
            "sample {x_channels}ch {x_rows}x{x_cols} vs filter {f_channels}ch {f_rows}x{f_cols}"
        )));
    }
    Ok(())
}

/// Full model objective:
/// `1/2 ||correlate(x, f) - y||^2 + 1/2 sum_d ||w . f^d||^2 + mu/2 ||f - f_prev||^2`.
pub fn objective(
    x: &MultiChannel<RealGrid>,
    y: &RealGrid,
    w: &SpatialWeight,
    f: &MultiChannel<RealGrid>,
    f_prev: &MultiChannel<RealGrid>,
    mu: f64,
) -> Result<f64> {
    check_problem_shapes(
        x.num_channels(),
        x.rows(),
        x.cols(),
        y.rows(),
        y.cols(),
        w,
        f.num_channels(),
        f.rows(),
        f.cols(),
    )?;
    if !f.same_shape(f_prev) {
        return Err(Error::DimMismatch("filter vs previous filter".into()));
    }

    let response = crate::grid::correlate(x, f)?;
    let data_term = response.zip_map(y, |r, t| r - t).norm_sq();
    let spatial_term: f64 = f
        .iter()
        .map(|ch| ch.zip_map(w.grid(), |v, wv| wv * v).norm_sq())
        .sum();
    let temporal_term = f.zip_map(f_prev, |a, b| a - b).norm_sq();
    Ok(0.5 * data_term + 0.5 * spatial_term + 0.5 * mu * temporal_term)
}

/// Filter subproblem, solved independently at every pixel `j` via the
/// Sherman-Morrison closed form of the rank-one-plus-identity system
/// `(V_j(xhat) V_j(xhat)^H + (mu + gamma) I) V_j(fhat) = q` with
/// `q = V_j(xhat) conj(yhat_j) + gamma (V_j(ghat) - V_j(hhat)) + mu V_j(fprev_hat)`.
///
/// The conjugate on the label comes from the Hermitian form of the
/// least-squares residual under the sample-sliding correlation convention;
/// for the even labels used in tracking the spectrum is real and the
/// conjugate is a no-op.
pub fn solve_f_subproblem(
    xhat: &MultiChannel<ComplexGrid>,
    yhat: &ComplexGrid,
    ghat: &MultiChannel<ComplexGrid>,
    hhat: &MultiChannel<ComplexGrid>,
    fprev_hat: &MultiChannel<ComplexGrid>,
    mu: f64,
    gamma: f64,
) -> Result<MultiChannel<ComplexGrid>> {
    let c = mu + gamma;
    if c <= 0.0 {
        return Err(Error::DegenerateRegularization);
    }
    if !(xhat.same_shape(ghat) && xhat.same_shape(hhat) && xhat.same_shape(fprev_hat)) {
        return Err(Error::DimMismatch("f-subproblem operand shapes".into()));
    }
    if xhat.rows() != yhat.rows() || xhat.cols() != yhat.cols() {
        return Err(Error::DimMismatch("sample spectrum vs label spectrum".into()));
    }

    let d = xhat.num_channels();
    let pixels = xhat.rows() * xhat.cols();
    let mut out: Vec<ComplexGrid> = (0..d)
        .map(|_| ComplexGrid::zeros(xhat.rows(), xhat.cols()))
        .collect();
    let mut q = vec![Complex64::new(0.0, 0.0); d];

    for j in 0..pixels {
        let yj = yhat.data()[j].conj();
        let mut sx = 0.0;
        let mut xq = Complex64::new(0.0, 0.0);
        for ch in 0..d {
            let xj = xhat.channel(ch).data()[j];
            q[ch] = xj * yj
                + gamma * (ghat.channel(ch).data()[j] - hhat.channel(ch).data()[j])
                + mu * fprev_hat.channel(ch).data()[j];
            sx += xj.norm_sqr();
            xq += xj.conj() * q[ch];
        }
        let scale = xq / (c + sx);
        for ch in 0..d {
            let xj = xhat.channel(ch).data()[j];
            out[ch].data_mut()[j] = (q[ch] - xj * scale) / c;
        }
    }

    Ok(MultiChannel::new(out))
}

/// Masked subproblem: with a diagonal weight the minimizer is elementwise,
/// `g = gamma (f + h) / (w^2 + gamma)`.
pub fn solve_g_subproblem(
    w: &SpatialWeight,
    f: &MultiChannel<RealGrid>,
    h: &MultiChannel<RealGrid>,
    gamma: f64,
) -> MultiChannel<RealGrid> {
    assert!(gamma > 0.0, "gamma must be positive");
    assert!(f.same_shape(h), "f and h shapes must match");
    assert_eq!((w.rows(), w.cols()), (f.rows(), f.cols()));
    MultiChannel::new(
        f.iter()
            .zip(h.iter())
            .map(|(fc, hc)| {
                RealGrid::from_fn(fc.rows(), fc.cols(), |r, c| {
                    let wv = w.grid().at(r, c);
                    gamma * (fc.at(r, c) + hc.at(r, c)) / (wv * wv + gamma)
                })
            })
            .collect(),
    )
}

/// Scaled multiplier update `h' = h + f - g`.
pub fn update_multiplier(
    h: &MultiChannel<RealGrid>,
    f: &MultiChannel<RealGrid>,
    g: &MultiChannel<RealGrid>,
) -> MultiChannel<RealGrid> {
    h.zip_map(f, |hv, fv| hv + fv).zip_map(g, |s, gv| s - gv)
}

/// Stepsize update `gamma' = min(gamma_max, rho * gamma)`.
pub fn update_gamma(gamma: f64, rho: f64, gamma_max: f64) -> f64 {
    gamma_max.min(rho * gamma)
}

/// Ablation update: `f' = (1 - eta) f_model + eta f_new`.
pub fn linear_interp_update(
    f_model: &MultiChannel<RealGrid>,
    f_new: &MultiChannel<RealGrid>,
    eta: f64,
) -> MultiChannel<RealGrid> {
    assert!((0.0..=1.0).contains(&eta), "eta must lie in [0, 1]");
    f_model.zip_map(f_new, |m, n| (1.0 - eta) * m + eta * n)
}

/// Learn the filter for one frame.
///
/// Starts from `g = f_prev`, `h = 0`, `gamma = gamma0` and runs
/// `params.iters` rounds of f-step, g-step, multiplier step, stepsize step.
/// Returns the spatial filter from the final f-step plus diagnostics.
pub fn learn(
    x: &MultiChannel<RealGrid>,
    y: &RealGrid,
    w: &SpatialWeight,
    f_prev: &MultiChannel<RealGrid>,
    params: &AdmmParams,
) -> Result<(MultiChannel<RealGrid>, LearnDiagnostics)> {
    check_problem_shapes(
        x.num_channels(),
        x.rows(),
        x.cols(),
        y.rows(),
        y.cols(),
        w,
        f_prev.num_channels(),
        f_prev.rows(),
        f_prev.cols(),
    )?;

    let xhat = x.map(dft2);
    let yhat = dft2(y);
    let fprev_hat = f_prev.map(dft2);

    let mut g = f_prev.clone();
    let mut h = MultiChannel::zeros(x.num_channels(), x.rows(), x.cols());
    let mut gamma = params.gamma0;

    let mut f = f_prev.clone();
    let mut diag = LearnDiagnostics::default();

    for _ in 0..params.iters {
        let ghat = g.map(dft2);
        let hhat = h.map(dft2);
        let fhat = solve_f_subproblem(&xhat, &yhat, &ghat, &hhat, &fprev_hat, params.mu, gamma)?;
        f = MultiChannel::new(
            fhat.iter()
                .map(idft2)
                .collect::<Result<Vec<RealGrid>>>()?,
        );
        g = solve_g_subproblem(w, &f, &h, gamma);
        h = update_multiplier(&h, &f, &g);
        gamma = update_gamma(gamma, params.rho, params.gamma_max);

        // Same value as `objective(x, y, w, &f, f_prev, mu)` but reuses the
        // spectra already in hand.
        let response = idft2(&cross_spectrum(&xhat, &fhat))?;
        let data_term = response.zip_map(y, |r, t| r - t).norm_sq();
        let spatial_term: f64 = f
            .iter()
            .map(|ch| ch.zip_map(w.grid(), |v, wv| wv * v).norm_sq())
            .sum();
        let temporal_term = f.zip_map(f_prev, |a, b| a - b).norm_sq();
        diag.objectives
            .push(0.5 * data_term + 0.5 * spatial_term + 0.5 * params.mu * temporal_term);
    }

    diag.primal_residual = f.zip_map(&g, |a, b| a - b).norm_sq().sqrt();
    Ok((f, diag))
}
