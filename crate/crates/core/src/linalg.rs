//! Dense linear-algebra helpers shared by the assembly and solver layers:
//! rank-revealing kernel extraction, extreme generalized eigenvalues of a
//! symmetric pencil via Lanczos, and 1-norm machinery for condition
//! estimates.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative singular-value cutoff for rank decisions. Coboundary-derived
/// matrices have integer entries with a crisp rank boundary; the tolerance
/// only guards floating orthogonalisation.
pub const RANK_CUTOFF: f64 = 1e-9;

/// Orthonormal basis of the kernel of `a`, from a column-pivoted QR.
///
/// Diagonal entries of R within a factor 10 of the cutoff make the rank
/// decision ambiguous and are reported as an error. A matrix with no zero
/// singular values returns an `n x 0` basis.
pub fn kernel_basis(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let ncols = a.ncols();
    let qr = a.clone().col_piv_qr();
    let r = qr.r();
    let mind = r.nrows().min(r.ncols());
    let diag: Vec<f64> = (0..mind).map(|i| r[(i, i)].abs()).collect();
    let max_diag = diag.iter().fold(0.0f64, |m, &d| m.max(d));
    if max_diag == 0.0 {
        // zero matrix: the kernel is everything
        return Ok(DMatrix::identity(ncols, ncols));
    }
    let cutoff = RANK_CUTOFF * max_diag;
    for &d in &diag {
        if d > cutoff / 10.0 && d < cutoff * 10.0 {
            return Err(Error::RankAmbiguous {
                value: d,
                cutoff,
                gap: d / cutoff,
            });
        }
    }
    let rank = diag.iter().filter(|&&d| d > cutoff).count();
    if rank == ncols {
        return Ok(DMatrix::zeros(ncols, 0));
    }
    let r1 = r.view((0, 0), (rank, rank)).into_owned();
    let r2 = r.view((0, rank), (rank, ncols - rank)).into_owned();
    let x = r1
        .solve_upper_triangular(&(-r2))
        .ok_or_else(|| Error::Solver("triangular solve failed in kernel extraction".into()))?;
    let mut n0 = DMatrix::zeros(ncols, ncols - rank);
    n0.view_mut((0, 0), (rank, ncols - rank)).copy_from(&x);
    for j in 0..ncols - rank {
        n0[(rank + j, j)] = 1.0;
    }
    // map R-coordinates back through the column permutation; self-check the
    // residual and fall back to the inverse application if needed
    let scale = max_diag * n0.norm();
    let mut n = n0.clone();
    qr.p().permute_rows(&mut n);
    if (a * &n).norm() > 1e-8 * scale {
        n = n0;
        qr.p().inv_permute_rows(&mut n);
        if (a * &n).norm() > 1e-8 * scale {
            return Err(Error::Solver("kernel residual check failed".into()));
        }
    }
    // orthonormalise (the candidate has full column rank by construction)
    let q = n.qr().q();
    Ok(q)
}

/// Orthonormal basis of the range (column space) of `a`: the leading
/// columns of Q from the column-pivoted QR, up to the numerical rank.
pub fn range_basis(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let qr = a.clone().col_piv_qr();
    let r = qr.r();
    let mind = r.nrows().min(r.ncols());
    let diag: Vec<f64> = (0..mind).map(|i| r[(i, i)].abs()).collect();
    let max_diag = diag.iter().fold(0.0f64, |m, &d| m.max(d));
    if max_diag == 0.0 {
        return Ok(DMatrix::zeros(a.nrows(), 0));
    }
    let cutoff = RANK_CUTOFF * max_diag;
    for &d in &diag {
        if d > cutoff / 10.0 && d < cutoff * 10.0 {
            return Err(Error::RankAmbiguous {
                value: d,
                cutoff,
                gap: d / cutoff,
            });
        }
    }
    let rank = diag.iter().filter(|&&d| d > cutoff).count();
    let q = qr.q();
    Ok(q.columns(0, rank).into_owned())
}

/// Orthonormalise the columns of `basis` in the inner product induced by the
/// symmetric positive definite matrix `m` (modified Gram-Schmidt).
pub fn m_orthonormalize(basis: &DMatrix<f64>, m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let mut q = basis.clone();
    for j in 0..q.ncols() {
        for i in 0..j {
            let qi = q.column(i).into_owned();
            let proj = (m * q.column(j)).dot(&qi);
            let update = &qi * proj;
            let mut col = q.column_mut(j);
            col -= update;
        }
        let col = q.column(j).into_owned();
        let norm2 = (m * &col).dot(&col);
        if norm2 <= 0.0 {
            return Err(Error::Solver(
                "M-orthonormalisation hit a nonpositive norm".into(),
            ));
        }
        q.column_mut(j).scale_mut(1.0 / norm2.sqrt());
    }
    Ok(q)
}

/// Extreme eigenvalues of the symmetric pencil `A x = lambda B x` with `B`
/// symmetric positive definite, via Lanczos with full reorthogonalisation on
/// `L^{-1} A L^{-T}` where `B = L L^T`.
///
/// The returned values are inner bounds (Ritz extremes) refined until
/// stagnation; coordinate directions with extreme Rayleigh quotients sharpen
/// them further, which matters for pencils with nearly singular `A`.
pub fn pencil_extremes(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<(f64, f64)> {
    let n = a.nrows();
    assert_eq!(a.ncols(), n);
    assert_eq!((b.nrows(), b.ncols()), (n, n));
    let chol = b
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Solver("pencil right-hand matrix is not positive definite".into()))?;
    let l = chol.l();
    let lt = l.transpose();

    // C v = L^{-1} A L^{-T} v
    let apply = |v: &DVector<f64>| -> Result<DVector<f64>> {
        let x = lt
            .solve_upper_triangular(v)
            .ok_or_else(|| Error::Solver("triangular solve failed".into()))?;
        let y = a * x;
        l.solve_lower_triangular(&y)
            .ok_or_else(|| Error::Solver("triangular solve failed".into()))
    };

    // coordinate Rayleigh quotients bound the extremes from inside
    let mut diag_min = f64::INFINITY;
    let mut diag_max = f64::NEG_INFINITY;
    let mut argmin = 0;
    let mut argmax = 0;
    for i in 0..n {
        let q = a[(i, i)] / b[(i, i)];
        if q < diag_min {
            diag_min = q;
            argmin = i;
        }
        if q > diag_max {
            diag_max = q;
            argmax = i;
        }
    }

    // deterministic pseudo-random start enriched with the extreme coordinates
    let mut v = DVector::zeros(n);
    let mut state = 0x9e3779b97f4a7c15u64;
    for i in 0..n {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        v[i] = ((state >> 33) as f64) / (u32::MAX as f64) - 0.5;
    }
    v[argmin] += 2.0;
    v[argmax] += 2.0;
    v /= v.norm();

    let max_iter = n.min(250);
    let mut qs: Vec<DVector<f64>> = Vec::with_capacity(max_iter);
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut prev_extremes = (f64::NAN, f64::NAN);
    let mut result = (diag_min, diag_max);
    qs.push(v);
    for j in 0..max_iter {
        let mut w = apply(&qs[j])?;
        let alpha = w.dot(&qs[j]);
        alphas.push(alpha);
        w -= &qs[j] * alpha;
        if j > 0 {
            w -= &qs[j - 1] * betas[j - 1];
        }
        // full reorthogonalisation
        for q in &qs {
            let c = w.dot(q);
            w -= q * c;
        }
        let beta = w.norm();

        let check_now = beta <= 1e-14 || j + 1 == max_iter || (j + 1) % 10 == 0;
        if check_now {
            let (lo, hi) = tridiag_extremes(&alphas, &betas);
            result = (lo.min(diag_min), hi.max(diag_max));
            let (plo, phi) = prev_extremes;
            let stag = |new: f64, old: f64| (new - old).abs() <= 1e-12 * (1.0 + new.abs());
            if beta <= 1e-14 || (stag(lo, plo) && stag(hi, phi)) {
                return Ok(result);
            }
            prev_extremes = (lo, hi);
        }
        if beta <= 1e-14 {
            break;
        }
        betas.push(beta);
        qs.push(w / beta);
    }
    Ok(result)
}

/// Extreme eigenvalues of the symmetric tridiagonal matrix with diagonal
/// `alphas` and off-diagonal `betas`.
fn tridiag_extremes(alphas: &[f64], betas: &[f64]) -> (f64, f64) {
    let k = alphas.len();
    let mut t = DMatrix::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alphas[i];
        if i + 1 < k {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let eig = nalgebra::linalg::SymmetricEigen::new(t);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &e in eig.eigenvalues.iter() {
        lo = lo.min(e);
        hi = hi.max(e);
    }
    (lo, hi)
}

/// Matrix 1-norm (maximum absolute column sum).
pub fn one_norm(a: &DMatrix<f64>) -> f64 {
    let mut best = 0.0f64;
    for j in 0..a.ncols() {
        let s: f64 = a.column(j).iter().map(|x| x.abs()).sum();
        best = best.max(s);
    }
    best
}

/// Hager-style estimate of `||A^{-1}||_1` for a symmetric matrix given its
/// LU factorisation; a handful of solves instead of n column solves.
pub fn inv_one_norm_estimate(lu: &nalgebra::linalg::LU<f64, nalgebra::Dyn, nalgebra::Dyn>, n: usize) -> Result<f64> {
    let solve = |v: &DVector<f64>| -> Result<DVector<f64>> {
        lu.solve(v)
            .ok_or_else(|| Error::Solver("singular matrix in 1-norm estimate".into()))
    };
    let mut x = DVector::from_element(n, 1.0 / n as f64);
    let mut best = 0.0f64;
    for _ in 0..8 {
        let y = solve(&x)?;
        best = best.max(y.iter().map(|v| v.abs()).sum());
        let xi = y.map(|v| if v >= 0.0 { 1.0 } else { -1.0 });
        // symmetric matrix: A^{-T} = A^{-1}
        let z = solve(&xi)?;
        let (mut j_best, mut z_best) = (0usize, 0.0f64);
        for (j, &zj) in z.iter().enumerate() {
            if zj.abs() > z_best {
                z_best = zj.abs();
                j_best = j;
            }
        }
        if z_best <= z.dot(&x) + 1e-14 * z_best {
            break;
        }
        x = DVector::zeros(n);
        x[j_best] = 1.0;
    }
    // the classic correction vector catches gradually varying inverses
    let alt = DVector::from_fn(n, |i, _| {
        let s = if i % 2 == 0 { 1.0 } else { -1.0 };
        s * (1.0 + i as f64 / (n.max(2) - 1) as f64)
    });
    let y = solve(&alt)?;
    let alt_est = 2.0 * y.iter().map(|v| v.abs()).sum::<f64>() / (3.0 * n as f64);
    Ok(best.max(alt_est))
}
