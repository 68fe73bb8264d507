//! Brute-force reference solvers for the filter-learning objective.
//!
//! Everything here trades speed for independence: correlations are written
//! as index loops instead of transforms, and the model objective is
//! minimized by direct dense factorization (small instances) or by a
//! majorize-minimize descent with exact per-pixel solves (medium
//! instances). Intended for tests; guarded against large problems.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::grid::{dft2, idft2, Complex64, ComplexGrid, MultiChannel, RealGrid};
use crate::solver::SpatialWeight;

/// Largest D*M*N the dense normal-equations path accepts.
pub const DENSE_LIMIT: usize = 256;
/// Largest D*M*N the oracle accepts at all.
pub const ORACLE_LIMIT: usize = 1024;

/// Circular cross-correlation summed over channels, by direct triple loop:
/// `out(m) = sum_d sum_i x^d(i + m) f^d(i)` with wrap-around indices.
///
/// This is the spatial-domain definition that `grid::correlate` must agree
/// with.
pub fn spatial_correlate(x: &MultiChannel<RealGrid>, f: &MultiChannel<RealGrid>) -> RealGrid {
    assert!(x.same_shape(f));
    let (m, n) = (x.rows(), x.cols());
    RealGrid::from_fn(m, n, |mr, mc| {
        let mut acc = 0.0;
        for d in 0..x.num_channels() {
            let (xc, fc) = (x.channel(d), f.channel(d));
            for ir in 0..m {
                for ic in 0..n {
                    acc += xc.at((ir + mr) % m, (ic + mc) % n) * fc.at(ir, ic);
                }
            }
        }
        acc
    })
}

/// Single-channel version of [`spatial_correlate`]:
/// `out(j) = sum_m a(j + m) b(m)`. The per-channel correlation operator is
/// self-adjoint up to this index pairing, so it also assembles gradients.
fn scorr1(a: &RealGrid, b: &RealGrid) -> RealGrid {
    assert!(a.same_shape(b));
    let (m, n) = (a.rows(), a.cols());
    RealGrid::from_fn(m, n, |jr, jc| {
        let mut acc = 0.0;
        for mr in 0..m {
            for mc in 0..n {
                acc += a.at((jr + mr) % m, (jc + mc) % n) * b.at(mr, mc);
            }
        }
        acc
    })
}

/// Analytic gradient of the model objective with respect to every filter
/// coefficient, assembled from the correlation adjoint:
/// `grad^d(i) = sum_m x^d(i + m) residual(m) + w^2 . f^d + mu (f^d - fprev^d)`
/// with `residual = correlate(x, f) - y`.
pub fn analytic_grad(
    x: &MultiChannel<RealGrid>,
    y: &RealGrid,
    w: &SpatialWeight,
    f: &MultiChannel<RealGrid>,
    f_prev: &MultiChannel<RealGrid>,
    mu: f64,
) -> MultiChannel<RealGrid> {
    let residual = spatial_correlate(x, f).zip_map(y, |a, b| a - b);
    MultiChannel::new(
        (0..x.num_channels())
            .map(|d| {
                let data_part = scorr1(x.channel(d), &residual);
                RealGrid::from_fn(f.rows(), f.cols(), |r, c| {
                    let wv = w.grid().at(r, c);
                    data_part.at(r, c)
                        + wv * wv * f.channel(d).at(r, c)
                        + mu * (f.channel(d).at(r, c) - f_prev.channel(d).at(r, c))
                })
            })
            .collect(),
    )
}

/// One filter-learning instance, assembled for direct minimization.
#[derive(Debug, Clone)]
pub struct DenseProblem {
    pub xhat: MultiChannel<ComplexGrid>,
    pub yhat: ComplexGrid,
    pub w: SpatialWeight,
    pub fprev: MultiChannel<RealGrid>,
    pub mu: f64,
}

impl DenseProblem {
    /// Build a problem from spatial-domain inputs.
    pub fn from_spatial(
        x: &MultiChannel<RealGrid>,
        y: &RealGrid,
        w: SpatialWeight,
        fprev: MultiChannel<RealGrid>,
        mu: f64,
    ) -> Self {
        Self {
            xhat: x.map(dft2),
            yhat: dft2(y),
            w,
            fprev,
            mu,
        }
    }

    fn dims(&self) -> (usize, usize, usize) {
        (self.xhat.num_channels(), self.xhat.rows(), self.xhat.cols())
    }

    fn spatial_sample(&self) -> Result<MultiChannel<RealGrid>> {
        Ok(MultiChannel::new(
            self.xhat
                .iter()
                .map(idft2)
                .collect::<Result<Vec<RealGrid>>>()?,
        ))
    }
}

/// Minimize the model objective by brute force.
///
/// Instances with `D*M*N <= 256` are solved exactly through the full
/// real-valued normal equations; larger instances up to 1024 run the
/// block-descent path with `outer_iters` as its iteration cap. Anything
/// bigger is rejected.
pub fn dense_solve(p: &DenseProblem, outer_iters: usize) -> Result<MultiChannel<RealGrid>> {
    let (d, m, n) = p.dims();
    let size = d * m * n;
    if size <= DENSE_LIMIT {
        solve_normal_equations(p)
    } else if size <= ORACLE_LIMIT {
        solve_block_descent(p, outer_iters)
    } else {
        Err(Error::TooLarge {
            size,
            limit: ORACLE_LIMIT,
        })
    }
}

/// Assemble and factorize the full `DMN x DMN` normal equations.
///
/// The correlation operator matrix is filled from the spatial definition
/// (`A[m, (d, j)] = x^d(j + m)`), so this path shares no transform code
/// with the production solver.
pub fn solve_normal_equations(p: &DenseProblem) -> Result<MultiChannel<RealGrid>> {
    let (d, m, n) = p.dims();
    let size = d * m * n;
    if size > DENSE_LIMIT {
        return Err(Error::TooLarge {
            size,
            limit: DENSE_LIMIT,
        });
    }
    let x = p.spatial_sample()?;
    let y = idft2(&p.yhat)?;
    let pixels = m * n;

    let mut a = DMatrix::<f64>::zeros(pixels, size);
    for mr in 0..m {
        for mc in 0..n {
            let row = mr * n + mc;
            for ch in 0..d {
                for jr in 0..m {
                    for jc in 0..n {
                        let col = ch * pixels + jr * n + jc;
                        a[(row, col)] = x.channel(ch).at((jr + mr) % m, (jc + mc) % n);
                    }
                }
            }
        }
    }

    let mut h = a.transpose() * &a;
    for ch in 0..d {
        for j in 0..pixels {
            let wv = p.w.grid().data()[j];
            h[(ch * pixels + j, ch * pixels + j)] += wv * wv + p.mu;
        }
    }

    let yv = DVector::from_column_slice(y.data());
    let mut b = a.transpose() * yv;
    for ch in 0..d {
        for j in 0..pixels {
            b[ch * pixels + j] += p.mu * p.fprev.channel(ch).data()[j];
        }
    }

    let sol = match h.clone().cholesky() {
        Some(chol) => chol.solve(&b),
        None => h.lu().solve(&b).expect("singular oracle normal equations"),
    };

    Ok(MultiChannel::new(
        (0..d)
            .map(|ch| {
                RealGrid::from_vec(
                    m,
                    n,
                    sol.as_slice()[ch * pixels..(ch + 1) * pixels].to_vec(),
                )
            })
            .collect(),
    ))
}

/// Block descent: per-pixel exact Hermitian solves in the spectral domain
/// with the spatial penalty linearized (majorized) at the current iterate,
/// alternated with spatial-domain updates of the linearization point.
/// Stops when the analytic gradient drops below 1e-10 in max norm or after
/// `outer_iters` rounds.
pub fn solve_block_descent(p: &DenseProblem, outer_iters: usize) -> Result<MultiChannel<RealGrid>> {
    let (d, m, n) = p.dims();
    let size = d * m * n;
    if size > ORACLE_LIMIT {
        return Err(Error::TooLarge {
            size,
            limit: ORACLE_LIMIT,
        });
    }
    let x = p.spatial_sample()?;
    let y = idft2(&p.yhat)?;
    let pixels = m * n;

    // Majorization constant for the spatial term; any c >= max(w^2) keeps
    // every round a descent step.
    let c = p
        .w
        .grid()
        .data()
        .iter()
        .map(|w| w * w)
        .fold(0.0_f64, f64::max)
        .max(1e-6);
    let shift = p.mu + c;

    // Data part of the right-hand side, computed once spatially.
    let b_data: Vec<RealGrid> = (0..d).map(|ch| scorr1(x.channel(ch), &y)).collect();

    let mut f = p.fprev.clone();
    for _ in 0..outer_iters {
        // Spatial update of the linearization point.
        let rhs = MultiChannel::new(
            (0..d)
                .map(|ch| {
                    RealGrid::from_fn(m, n, |r, cc| {
                        let wv = p.w.grid().at(r, cc);
                        b_data[ch].at(r, cc)
                            + p.mu * p.fprev.channel(ch).at(r, cc)
                            + (c - wv * wv) * f.channel(ch).at(r, cc)
                    })
                })
                .collect(),
        );
        let rhs_hat = rhs.map(dft2);

        // Exact per-pixel D x D Hermitian solves.
        let mut fhat: Vec<ComplexGrid> = (0..d).map(|_| ComplexGrid::zeros(m, n)).collect();
        for j in 0..pixels {
            if d == 1 {
                let xv = p.xhat.channel(0).data()[j];
                fhat[0].data_mut()[j] = rhs_hat.channel(0).data()[j] / (xv.norm_sqr() + shift);
            } else {
                let mut mat = DMatrix::<Complex64>::zeros(d, d);
                for r in 0..d {
                    let xr = p.xhat.channel(r).data()[j];
                    for cc in 0..d {
                        mat[(r, cc)] = xr * p.xhat.channel(cc).data()[j].conj();
                    }
                    mat[(r, r)] += Complex64::new(shift, 0.0);
                }
                let rv =
                    DVector::from_iterator(d, (0..d).map(|ch| rhs_hat.channel(ch).data()[j]));
                let sol = mat.lu().solve(&rv).expect("per-pixel system singular");
                for ch in 0..d {
                    fhat[ch].data_mut()[j] = sol[ch];
                }
            }
        }
        f = MultiChannel::new(
            fhat.iter()
                .map(idft2)
                .collect::<Result<Vec<RealGrid>>>()?,
        );

        let grad = analytic_grad(&x, &y, &p.w, &f, &p.fprev, p.mu);
        let gmax = grad
            .iter()
            .flat_map(|g| g.data().iter())
            .fold(0.0_f64, |acc, v| acc.max(v.abs()));
        if gmax < 1e-10 {
            break;
        }
    }
    Ok(f)
}

/// Central-difference gradient of an arbitrary objective with respect to
/// every filter coefficient.
pub fn finite_diff_grad(
    obj: impl Fn(&MultiChannel<RealGrid>) -> f64,
    f: &MultiChannel<RealGrid>,
    step: f64,
) -> MultiChannel<RealGrid> {
    assert!(step > 0.0, "step must be positive");
    let mut probe = f.clone();
    let mut out = Vec::with_capacity(f.num_channels());
    for ch in 0..f.num_channels() {
        let mut grad = RealGrid::zeros(f.rows(), f.cols());
        for j in 0..f.rows() * f.cols() {
            let orig = probe.channel(ch).data()[j];
            probe.channel_mut(ch).data_mut()[j] = orig + step;
            let plus = obj(&probe);
            probe.channel_mut(ch).data_mut()[j] = orig - step;
            let minus = obj(&probe);
            probe.channel_mut(ch).data_mut()[j] = orig;
            grad.data_mut()[j] = (plus - minus) / (2.0 * step);
        }
        out.push(grad);
    }
    MultiChannel::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_stack(rng: &mut impl Rng, d: usize, m: usize, n: usize) -> MultiChannel<RealGrid> {
        MultiChannel::new(
            (0..d)
                .map(|_| RealGrid::from_fn(m, n, |_, _| rng.gen_range(-1.0..1.0)))
                .collect(),
        )
    }

    fn random_weight(rng: &mut impl Rng, m: usize, n: usize) -> SpatialWeight {
        SpatialWeight::new(RealGrid::from_fn(m, n, |_, _| rng.gen_range(0.1..3.0)))
    }

    fn max_abs(g: &MultiChannel<RealGrid>) -> f64 {
        g.iter()
            .flat_map(|c| c.data().iter())
            .fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    #[test]
    fn dense_solve_scalar_ground_truth() {
        let x = MultiChannel::new(vec![RealGrid::filled(1, 1, 2.0)]);
        let y = RealGrid::filled(1, 1, 1.0);
        let w = SpatialWeight::new(RealGrid::filled(1, 1, 1.0));
        let fp = MultiChannel::zeros(1, 1, 1);
        let p = DenseProblem::from_spatial(&x, &y, w, fp, 16.0);
        let f = dense_solve(&p, 1000).unwrap();
        assert!((f.channel(0).data()[0] - 2.0 / 21.0).abs() < 1e-12);

        // The iterated path lands on the same answer.
        let g = solve_block_descent(&p, 100_000).unwrap();
        assert!((g.channel(0).data()[0] - 2.0 / 21.0).abs() < 1e-9);
    }

    #[test]
    fn dense_solve_matches_spectral_ridge_closed_form() {
        // w = 0, mu = 0, D = 1 with a spectrum bounded away from zero.
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let m = 4;
        let mut x0 = RealGrid::from_fn(m, m, |_, _| rng.gen_range(-0.5..0.5));
        x0.set(0, 0, x0.at(0, 0) + 20.0);
        let x = MultiChannel::new(vec![x0]);
        let y = RealGrid::from_fn(m, m, |_, _| rng.gen_range(-1.0..1.0));
        let w = SpatialWeight::new(RealGrid::zeros(m, m));
        let fp = MultiChannel::zeros(1, m, m);
        let p = DenseProblem::from_spatial(&x, &y, w, fp, 0.0);
        let f = dense_solve(&p, 1).unwrap();

        // Exact interpolator of xhat . conj(fhat) = yhat.
        let xhat = dft2(x.channel(0));
        let yhat = dft2(&y);
        let fhat = ComplexGrid::from_vec(
            m,
            m,
            xhat.data()
                .iter()
                .zip(yhat.data())
                .map(|(&xz, &yz)| xz * yz.conj() / xz.norm_sqr())
                .collect(),
        );
        let closed = idft2(&fhat).unwrap();
        for (a, b) in f.channel(0).data().iter().zip(closed.data()) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn dense_solution_passes_first_order_optimality() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for (d, m) in [(1, 4), (2, 4), (1, 8)] {
            let x = random_stack(&mut rng, d, m, m);
            let y = RealGrid::from_fn(m, m, |_, _| rng.gen_range(-1.0..1.0));
            let w = random_weight(&mut rng, m, m);
            let fp = random_stack(&mut rng, d, m, m);
            let p = DenseProblem::from_spatial(&x, &y, w.clone(), fp.clone(), 16.0);
            let f = dense_solve(&p, 1).unwrap();
            let grad = finite_diff_grad(
                |cand| solver::objective(&x, &y, &w, cand, &fp, 16.0).unwrap(),
                &f,
                1e-5,
            );
            assert!(max_abs(&grad) < 1e-6, "d={d} m={m}: grad {}", max_abs(&grad));
        }
    }

    #[test]
    fn finite_diff_recovers_quadratic_gradient() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let f = random_stack(&mut rng, 2, 3, 3);
        let grad = finite_diff_grad(|g| 0.5 * g.norm_sq(), &f, 1e-5);
        for ch in 0..2 {
            for (a, b) in grad.channel(ch).data().iter().zip(f.channel(ch).data()) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn gradient_at_previous_filter_is_pure_spatial_term() {
        // With y = correlate(x, f_prev) the residual vanishes at f = f_prev
        // and so does the temporal term; only w^2 . f remains.
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let (d, m) = (2, 4);
        let x = random_stack(&mut rng, d, m, m);
        let fp = random_stack(&mut rng, d, m, m);
        let w = random_weight(&mut rng, m, m);
        let y = spatial_correlate(&x, &fp);
        let grad = finite_diff_grad(
            |cand| solver::objective(&x, &y, &w, cand, &fp, 16.0).unwrap(),
            &fp,
            1e-5,
        );
        for ch in 0..d {
            for r in 0..m {
                for c in 0..m {
                    let wv = w.grid().at(r, c);
                    let expect = wv * wv * fp.channel(ch).at(r, c);
                    assert!((grad.channel(ch).at(r, c) - expect).abs() < 1e-6);
                }
            }
        }
    }

    #[test]
    fn finite_diff_matches_analytic_gradient() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        let (d, m) = (2, 4);
        let x = random_stack(&mut rng, d, m, m);
        let f = random_stack(&mut rng, d, m, m);
        let fp = random_stack(&mut rng, d, m, m);
        let w = random_weight(&mut rng, m, m);
        let y = RealGrid::from_fn(m, m, |_, _| rng.gen_range(-1.0..1.0));
        let numeric = finite_diff_grad(
            |cand| solver::objective(&x, &y, &w, cand, &fp, 16.0).unwrap(),
            &f,
            1e-5,
        );
        let exact = analytic_grad(&x, &y, &w, &f, &fp, 16.0);
        for ch in 0..d {
            for (a, b) in numeric
                .channel(ch)
                .data()
                .iter()
                .zip(exact.channel(ch).data())
            {
                assert!((a - b).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn both_oracle_paths_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        let (d, m) = (4, 8); // D*M*N = 256: dense limit, still block-solvable
        let x = random_stack(&mut rng, d, m, m);
        let y = RealGrid::from_fn(m, m, |_, _| rng.gen_range(-1.0..1.0));
        let w = random_weight(&mut rng, m, m);
        let fp = random_stack(&mut rng, d, m, m);
        let p = DenseProblem::from_spatial(&x, &y, w.clone(), fp.clone(), 16.0);
        let dense = solve_normal_equations(&p).unwrap();
        let descent = solve_block_descent(&p, 100_000).unwrap();
        let obj_dense = solver::objective(&x, &y, &w, &dense, &fp, 16.0).unwrap();
        let obj_descent = solver::objective(&x, &y, &w, &descent, &fp, 16.0).unwrap();
        assert!(
            (obj_dense - obj_descent).abs() <= 1e-9 * obj_dense.abs().max(1.0),
            "dense {obj_dense} vs descent {obj_descent}"
        );
    }

    #[test]
    fn oversized_problems_are_rejected() {
        let x = MultiChannel::zeros(2, 32, 32);
        let y = RealGrid::zeros(32, 32);
        let w = SpatialWeight::new(RealGrid::zeros(32, 32));
        let p = DenseProblem::from_spatial(&x, &y, w, MultiChannel::zeros(2, 32, 32), 16.0);
        assert!(matches!(
            dense_solve(&p, 10),
            Err(Error::TooLarge { size: 2048, .. })
        ));
    }

    #[test]
    fn dense_solve_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(27);
        let x = random_stack(&mut rng, 2, 4, 4);
        let y = RealGrid::from_fn(4, 4, |_, _| rng.gen_range(-1.0..1.0));
        let w = random_weight(&mut rng, 4, 4);
        let fp = random_stack(&mut rng, 2, 4, 4);
        let p = DenseProblem::from_spatial(&x, &y, w, fp, 16.0);
        assert_eq!(dense_solve(&p, 5).unwrap(), dense_solve(&p, 5).unwrap());
    }
}
