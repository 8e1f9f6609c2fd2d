//! Discrete harmonic forms, the stabilised mixed Hodge-Laplace system, its
//! direct solver, error norms over the physical domain and condition-number
//! estimation.
//!
//! The harmonic space of degree k is the part of the kernel of the
//! coboundary that is ghost-orthogonal to the exact forms; its dimension
//! recovers the topology of the domain (1 for the 0-degree constants on a
//! connected mesh, the number of holes for degree 1). The mixed system is
//! assembled in symmetric block form with the first block row negated.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::forms::AltForm;
use crate::geometry::{ActiveMesh, CutPaths};
use crate::ghost::{ghost_gram, FacetSelection, GhostGram};
use crate::linalg::{inv_one_norm_estimate, kernel_basis, m_orthonormalize, one_norm};
use crate::quadrature::{cut_rule, Point2};
use crate::spaces::{coboundary, load_vector, CoboundaryMatrix, FESpace};

/// M_s-orthonormal basis of the stabilised harmonic space of one degree.
#[derive(Debug, Clone)]
pub struct HarmonicBasis {
    pub k: usize,
    /// Columns span the harmonic space; empty matrix when the space is {0}.
    pub vectors: DMatrix<f64>,
    pub dim: usize,
}

/// Compute the stabilised harmonic space: the kernel of `d_k` made
/// orthogonal, in the inner product `m`, to the range of `d_km1`, then
/// m-orthonormalised. `None` coboundaries encode the empty spaces below
/// degree 0 and above the top degree.
pub fn harmonic_basis(
    k: usize,
    d_km1: Option<&CoboundaryMatrix>,
    d_k: Option<&CoboundaryMatrix>,
    m: &DMatrix<f64>,
) -> Result<HarmonicBasis> {
    let n = m.nrows();
    let kernel = match d_k {
        Some(d) => kernel_basis(&d.to_dense())?,
        None => DMatrix::identity(n, n),
    };
    let pre = match d_km1 {
        Some(d) => {
            let w = kernel.transpose() * (m * d.to_dense());
            let z = kernel_basis(&w.transpose())?;
            &kernel * z
        }
        None => kernel,
    };
    let vectors = m_orthonormalize(&pre, m)?;
    let dim = vectors.ncols();
    // the defining invariants, asserted after every build
    if dim > 0 {
        if let Some(d) = d_k {
            let res = (d.to_dense() * &vectors).norm();
            if res > 1e-10 {
                return Err(Error::Solver(format!(
                    "harmonic basis leaves the kernel of d (residual {res:.3e})"
                )));
            }
        }
        if let Some(d) = d_km1 {
            let res = (vectors.transpose() * (m * d.to_dense())).norm();
            if res > 1e-10 * m.norm() {
                return Err(Error::Solver(format!(
                    "harmonic basis not orthogonal to exact forms (residual {res:.3e})"
                )));
            }
        }
        let gram = vectors.transpose() * m * &vectors;
        if (gram - DMatrix::identity(dim, dim)).norm() > 1e-10 {
            return Err(Error::Solver("harmonic basis not orthonormal".into()));
        }
    }
    Ok(HarmonicBasis { k, dim, vectors })
}

/// Assembled symmetric saddle system for one form degree.
#[derive(Debug, Clone)]
pub struct MixedSystem {
    pub k: usize,
    pub matrix: DMatrix<f64>,
    pub rhs: DVector<f64>,
    pub n_sigma: usize,
    pub n_eta: usize,
    pub n_harmonic: usize,
}

/// Solution blocks of the mixed system in DOF coordinates; the multiplier is
/// expressed in harmonic-basis coordinates.
#[derive(Debug, Clone)]
pub struct MixedSolution {
    pub sigma: DVector<f64>,
    pub eta: DVector<f64>,
    pub lambda_coeffs: DVector<f64>,
    pub residual: f64,
}

/// Assemble the symmetric block system
/// `[-M_s^{k-1}, D^T M_s^k, 0; M_s^k D, D_k^T M_s^{k+1} D_k, M_s^k H; 0, H^T M_s^k, 0]`
/// with right-hand side `(0, F, 0)`. Degenerate blocks (k = 0 has no sigma,
/// the top degree has no curl-curl term, a trivial harmonic space drops the
/// multiplier) are omitted.
#[allow(clippy::too_many_arguments)]
pub fn assemble_mixed(
    k: usize,
    gram_km1: Option<&GhostGram>,
    gram_k: &GhostGram,
    gram_kp1: Option<&GhostGram>,
    d_km1: Option<&CoboundaryMatrix>,
    d_k: Option<&CoboundaryMatrix>,
    harmonic: &HarmonicBasis,
    rhs_k: &DVector<f64>,
) -> Result<MixedSystem> {
    let n_eta = gram_k.m_s.nrows();
    if harmonic.vectors.nrows() != n_eta && harmonic.dim > 0 {
        return Err(Error::Assembly(format!(
            "harmonic basis rows {} do not match the degree-{k} space size {n_eta}",
            harmonic.vectors.nrows()
        )));
    }
    if rhs_k.len() != n_eta {
        return Err(Error::Assembly("right-hand side size mismatch".into()));
    }
    let n_sigma = match (k, gram_km1, d_km1) {
        (0, _, _) => 0,
        (_, Some(g), Some(_)) => g.m_s.nrows(),
        _ => {
            return Err(Error::Assembly(
                "degrees above 0 need the next-lower Gram and coboundary".into(),
            ))
        }
    };
    let n_h = harmonic.dim;
    let total = n_sigma + n_eta + n_h;
    let mut a = DMatrix::zeros(total, total);
    let mut b = DVector::zeros(total);

    if n_sigma > 0 {
        let gm = gram_km1.unwrap();
        let d = d_km1.unwrap().to_dense();
        a.view_mut((0, 0), (n_sigma, n_sigma))
            .copy_from(&(-&gm.m_s));
        let coupling = &gram_k.m_s * &d; // n_eta x n_sigma
        a.view_mut((n_sigma, 0), (n_eta, n_sigma)).copy_from(&coupling);
        a.view_mut((0, n_sigma), (n_sigma, n_eta))
            .copy_from(&coupling.transpose());
    }
    if let (Some(gp), Some(dk)) = (gram_kp1, d_k) {
        let d = dk.to_dense();
        let g = d.transpose() * &gp.m_s * &d;
        let g = (&g + g.transpose()) * 0.5;
        let mut mid = a.view_mut((n_sigma, n_sigma), (n_eta, n_eta));
        mid += g;
    }
    if n_h > 0 {
        let hm = &gram_k.m_s * &harmonic.vectors; // n_eta x n_h
        a.view_mut((n_sigma, n_sigma + n_eta), (n_eta, n_h))
            .copy_from(&hm);
        a.view_mut((n_sigma + n_eta, n_sigma), (n_h, n_eta))
            .copy_from(&hm.transpose());
    }
    b.rows_mut(n_sigma, n_eta).copy_from(rhs_k);
    Ok(MixedSystem {
        k,
        matrix: a,
        rhs: b,
        n_sigma,
        n_eta,
        n_harmonic: n_h,
    })
}

/// Direct solve by LU with partial pivoting, with a residual check.
pub fn solve_mixed(sys: &MixedSystem) -> Result<MixedSolution> {
    let lu = sys.matrix.clone().lu();
    let u_diag = lu.u().diagonal().into_owned();
    for (i, &p) in u_diag.iter().enumerate() {
        if p == 0.0 {
            return Err(Error::Solver(format!(
                "factorization reports singularity at pivot {i} of {}",
                u_diag.len()
            )));
        }
    }
    let x = lu
        .solve(&sys.rhs)
        .ok_or_else(|| Error::Solver("LU solve failed".into()))?;
    let residual = (&sys.matrix * &x - &sys.rhs).norm();
    let scale = sys.rhs.norm();
    let rel = if scale > 0.0 { residual / scale } else { residual };
    if rel > 1e-10 {
        return Err(Error::Solver(format!(
            "solve residual {rel:.3e} exceeds tolerance 1e-10"
        )));
    }
    Ok(MixedSolution {
        sigma: x.rows(0, sys.n_sigma).into_owned(),
        eta: x.rows(sys.n_sigma, sys.n_eta).into_owned(),
        lambda_coeffs: x
            .rows(sys.n_sigma + sys.n_eta, sys.n_harmonic)
            .into_owned(),
        residual: rel,
    })
}

/// 1-norm condition number `kappa_1 = ||A||_1 ||A^{-1}||_1` of a symmetric
/// matrix, with the inverse norm estimated Hager-style from one LU
/// factorisation.
pub fn condition_estimate(a: &DMatrix<f64>) -> Result<f64> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::Solver("condition estimate needs a square matrix".into()));
    }
    let asym = (a - a.transpose()).abs().max();
    if asym > 1e-12 * (1.0 + a.abs().max()) {
        return Err(Error::Solver(
            "condition estimate implemented for symmetric matrices only".into(),
        ));
    }
    let norm_a = one_norm(a);
    let lu = a.clone().lu();
    let u_diag = lu.u().diagonal().into_owned();
    for (i, &p) in u_diag.iter().enumerate() {
        if p == 0.0 {
            return Err(Error::Solver(format!(
                "singular matrix: zero pivot at {i}"
            )));
        }
    }
    let norm_inv = inv_one_norm_estimate(&lu, n)?;
    Ok(norm_a * norm_inv)
}

/// L2(Omega) errors of the solution blocks against closed-form fields.
#[derive(Debug, Clone, Copy, Default)]
pub struct ErrorRecord {
    pub eta: f64,
    pub d_eta: f64,
    pub sigma: f64,
    pub d_sigma: f64,
    pub lambda: f64,
}

/// L2 norm over the physical domain of `field_h - exact`.
pub fn l2_error_on_omega<F>(
    am: &ActiveMesh,
    sp: &FESpace,
    dofs: &DVector<f64>,
    exact: F,
    degree: usize,
) -> Result<f64>
where
    F: Fn(Point2) -> AltForm,
{
    let mut total = 0.0;
    for (slot, el) in sp.elements.iter().enumerate() {
        let coords = am.parent.tri_coords(el.tri);
        let rule = cut_rule(&coords, &am.tri_phi(el.tri), degree)?;
        for (p, &w) in rule.points.iter().zip(&rule.weights) {
            let diff = sp
                .eval_field(slot, dofs, *p, 0, [0.0, 0.0])
                .sub(&exact(*p));
            total += w * diff.inner(&diff).expect("same degree");
        }
    }
    Ok(total.sqrt())
}

/// One mesh, all three spaces, their Gram matrices and coboundaries: the
/// standing data every experiment operates on.
pub struct Discretization {
    pub am: ActiveMesh,
    pub paths: CutPaths,
    pub spaces: Vec<FESpace>,
    pub grams: Vec<GhostGram>,
    pub d: Vec<CoboundaryMatrix>,
    pub vol_degree: usize,
    pub facet_degree: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct DiscretizationParams {
    pub eta: f64,
    pub facet_set: FacetSelection,
    pub vol_degree: usize,
    pub facet_degree: usize,
    pub stabilize: bool,
    pub n_max: usize,
}

impl Default for DiscretizationParams {
    fn default() -> Self {
        DiscretizationParams {
            eta: 1.0,
            facet_set: FacetSelection::Full,
            vol_degree: 2,
            facet_degree: 2,
            stabilize: true,
            n_max: 10,
        }
    }
}

impl Discretization {
    pub fn build(am: ActiveMesh, p: &DiscretizationParams) -> Result<Self> {
        let paths = am.cut_to_uncut(p.n_max)?;
        let spaces: Vec<FESpace> = (0..=2)
            .map(|k| FESpace::build(&am, k))
            .collect::<Result<_>>()?;
        let grams: Vec<GhostGram> = spaces
            .iter()
            .map(|sp| {
                ghost_gram(
                    sp,
                    &am,
                    p.eta,
                    p.facet_set,
                    p.vol_degree,
                    p.facet_degree,
                    p.stabilize,
                )
            })
            .collect::<Result<_>>()?;
        let d = vec![
            coboundary(&spaces[0], &spaces[1], &am)?,
            coboundary(&spaces[1], &spaces[2], &am)?,
        ];
        Ok(Discretization {
            am,
            paths,
            spaces,
            grams,
            d,
            vol_degree: p.vol_degree,
            facet_degree: p.facet_degree,
        })
    }

    fn d_below(&self, k: usize) -> Option<&CoboundaryMatrix> {
        if k >= 1 {
            Some(&self.d[k - 1])
        } else {
            None
        }
    }

    fn d_at(&self, k: usize) -> Option<&CoboundaryMatrix> {
        if k <= 1 {
            Some(&self.d[k])
        } else {
            None
        }
    }

    /// Stabilised harmonic basis of degree k.
    pub fn harmonic(&self, k: usize) -> Result<HarmonicBasis> {
        harmonic_basis(k, self.d_below(k), self.d_at(k), &self.grams[k].m_s)
    }

    /// Load vector of the degree-k space for the right-hand side `f`.
    pub fn rhs<F>(&self, k: usize, f: F) -> Result<DVector<f64>>
    where
        F: Fn(Point2) -> AltForm + Sync,
    {
        load_vector(&self.spaces[k], &self.am, f, self.vol_degree)
    }

    pub fn assemble(
        &self,
        k: usize,
        harmonic: &HarmonicBasis,
        rhs: &DVector<f64>,
    ) -> Result<MixedSystem> {
        if k > 2 {
            return Err(Error::Config(format!("form degree {k} out of range")));
        }
        assemble_mixed(
            k,
            if k >= 1 { Some(&self.grams[k - 1]) } else { None },
            &self.grams[k],
            if k <= 1 { Some(&self.grams[k + 1]) } else { None },
            self.d_below(k),
            self.d_at(k),
            harmonic,
            rhs,
        )
    }

    /// Assemble and solve the degree-k problem for the right-hand side `f`.
    pub fn solve<F>(&self, k: usize, f: F) -> Result<(MixedSystem, MixedSolution, HarmonicBasis)>
    where
        F: Fn(Point2) -> AltForm + Sync,
    {
        let h = self.harmonic(k)?;
        let rhs = self.rhs(k, f)?;
        let sys = self.assemble(k, &h, &rhs)?;
        let sol = solve_mixed(&sys)?;
        Ok((sys, sol, h))
    }

    /// Ghost norm of a degree-k DOF vector.
    pub fn s_norm(&self, k: usize, x: &DVector<f64>) -> f64 {
        self.grams[k].s_norm(x)
    }

    /// Errors of the solution blocks against closed-form fields, at the
    /// given cut-quadrature degree.
    pub fn errors(
        &self,
        k: usize,
        sol: &MixedSolution,
        harmonic: &HarmonicBasis,
        exact: &crate::problems::ExactFields,
        degree: usize,
    ) -> Result<ErrorRecord> {
        let sp_k = &self.spaces[k];
        let eta = l2_error_on_omega(&self.am, sp_k, &sol.eta, |p| (exact.eta)(p), degree)?;
        let d_eta = match (self.d_at(k), &exact.d_eta) {
            (Some(dk), Some(ex)) => {
                let deta = dk.apply(&sol.eta);
                l2_error_on_omega(&self.am, &self.spaces[k + 1], &deta, ex, degree)?
            }
            _ => 0.0,
        };
        let (sigma, d_sigma) = if k >= 1 {
            let s = match &exact.sigma {
                Some(ex) => l2_error_on_omega(&self.am, &self.spaces[k - 1], &sol.sigma, ex, degree)?,
                None => 0.0,
            };
            let ds = match &exact.d_sigma {
                Some(ex) => {
                    let dsig = self.d[k - 1].apply(&sol.sigma);
                    l2_error_on_omega(&self.am, sp_k, &dsig, ex, degree)?
                }
                None => 0.0,
            };
            (s, ds)
        } else {
            (0.0, 0.0)
        };
        let lambda_dof = if harmonic.dim > 0 {
            &harmonic.vectors * &sol.lambda_coeffs
        } else {
            DVector::zeros(sp_k.ndofs)
        };
        let lambda = l2_error_on_omega(&self.am, sp_k, &lambda_dof, |p| (exact.lambda)(p), degree)?;
        Ok(ErrorRecord {
            eta,
            d_eta,
            sigma,
            d_sigma,
            lambda,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_background, classify, LevelSet};
    use crate::linalg::range_basis;

    fn disk(m: usize) -> ActiveMesh {
        let bg = build_background([0.0, 0.0, 1.0, 1.0], m).unwrap();
        classify(bg, &LevelSet::circle([0.5, 0.5], 0.25)).unwrap()
    }

    fn annulus(m: usize) -> ActiveMesh {
        let bg = build_background([0.0, 0.0, 1.0, 1.0], m).unwrap();
        classify(bg, &LevelSet::annulus([0.5, 0.5], 0.25, 0.45)).unwrap()
    }

    #[test]
    fn harmonic_dimensions_match_topology() {
        let p = DiscretizationParams::default();
        let disk_disc = Discretization::build(disk(12), &p).unwrap();
        assert_eq!(disk_disc.harmonic(0).unwrap().dim, 1);
        assert_eq!(disk_disc.harmonic(1).unwrap().dim, 0);
        assert_eq!(disk_disc.harmonic(2).unwrap().dim, 0);
        let ann_disc = Discretization::build(annulus(12), &p).unwrap();
        assert_eq!(ann_disc.harmonic(0).unwrap().dim, 1);
        assert_eq!(ann_disc.harmonic(1).unwrap().dim, 1);
        assert_eq!(ann_disc.harmonic(2).unwrap().dim, 0);
    }

    #[test]
    fn harmonic_invariants() {
        let p = DiscretizationParams::default();
        let disc = Discretization::build(annulus(10), &p).unwrap();
        for k in 0..=1usize {
            let h = disc.harmonic(k).unwrap();
            if h.dim == 0 {
                continue;
            }
            // kernel of d
            if let Some(dk) = disc.d_at(k) {
                assert!((dk.to_dense() * &h.vectors).norm() < 1e-10);
            }
            // s-orthogonal to exact forms
            if let Some(dkm1) = disc.d_below(k) {
                let w = h.vectors.transpose() * &disc.grams[k].m_s * dkm1.to_dense();
                assert!(w.norm() < 1e-10);
            }
            // orthonormal in the ghost product
            let g = h.vectors.transpose() * &disc.grams[k].m_s * &h.vectors;
            assert!((g - DMatrix::identity(h.dim, h.dim)).norm() < 1e-10);
        }
        // k = 0 harmonic is the normalized constant
        let h0 = disc.harmonic(0).unwrap();
        let col = h0.vectors.column(0);
        let first = col[0];
        assert!(col.iter().all(|&v| (v - first).abs() < 1e-10 * first.abs()));
    }

    #[test]
    fn hodge_decomposition_dimensions_and_orthogonality() {
        let p = DiscretizationParams::default();
        for am in [disk(10), annulus(10)] {
            let disc = Discretization::build(am, &p).unwrap();
            let k = 1usize;
            let m_s = &disc.grams[k].m_s;
            let kernel = kernel_basis(&disc.d[1].to_dense()).unwrap();
            let exact = range_basis(&disc.d[0].to_dense()).unwrap();
            let h = disc.harmonic(k).unwrap();
            assert_eq!(kernel.ncols(), exact.ncols() + h.dim);
            // complement of the kernel in the ghost product
            let perp = kernel_basis(&(kernel.transpose() * m_s)).unwrap();
            assert_eq!(perp.ncols() + kernel.ncols(), disc.spaces[k].ndofs);
            if h.dim > 0 {
                let cross = h.vectors.transpose() * m_s * &exact;
                assert!(cross.norm() < 1e-10 * m_s.norm());
            }
            let cross = perp.transpose() * m_s * &kernel;
            assert!(cross.norm() < 1e-10 * m_s.norm());
        }
    }

    #[test]
    fn harmonic_dims_agree_with_active_product() {
        let p = DiscretizationParams::default();
        let disc = Discretization::build(annulus(10), &p).unwrap();
        for k in 0..=1usize {
            let hs = disc.harmonic(k).unwrap();
            let hh = harmonic_basis(
                k,
                disc.d_below(k),
                disc.d_at(k),
                &disc.grams[k].m_active,
            )
            .unwrap();
            assert_eq!(hs.dim, hh.dim);
        }
    }

    #[test]
    fn zero_rhs_gives_zero_solution() {
        let p = DiscretizationParams::default();
        let disc = Discretization::build(annulus(8), &p).unwrap();
        for k in 0..=2usize {
            let (_, sol, _) = disc.solve(k, |_| AltForm::zero(2, k)).unwrap();
            assert!(sol.sigma.norm() < 1e-10);
            assert!(sol.eta.norm() < 1e-10);
            assert!(sol.lambda_coeffs.norm() < 1e-10);
        }
    }

    #[test]
    fn assembled_matrix_symmetric() {
        let p = DiscretizationParams::default();
        let disc = Discretization::build(annulus(8), &p).unwrap();
        for k in 0..=2usize {
            let h = disc.harmonic(k).unwrap();
            let rhs = disc.rhs(k, |_| AltForm::zero(2, k)).unwrap();
            let sys = disc.assemble(k, &h, &rhs).unwrap();
            let asym = (&sys.matrix - sys.matrix.transpose()).abs().max();
            assert!(asym < 1e-14 * (1.0 + sys.matrix.abs().max()));
        }
    }

    #[test]
    fn harmonic_constraint_enforced() {
        // with f equal to a harmonic-ish field the solve must keep eta
        // s-orthogonal to the harmonic space
        let p = DiscretizationParams::default();
        let disc = Discretization::build(annulus(8), &p).unwrap();
        let (sys, sol, h) = disc
            .solve(1, |pt| {
                let x = pt[0] - 0.5;
                let y = pt[1] - 0.5;
                let r2 = x * x + y * y;
                AltForm::from_coeffs(2, 1, vec![-y / r2, x / r2]).unwrap()
            })
            .unwrap();
        assert_eq!(sys.n_harmonic, 1);
        let viol = (h.vectors.transpose() * &disc.grams[1].m_s * &sol.eta).norm();
        assert!(viol < 1e-9, "harmonic constraint violation {viol}");
        // the multiplier actually picks up the harmonic content
        assert!(sol.lambda_coeffs.norm() > 1e-3);
    }

    #[test]
    fn divergence_reproduction_top_degree() {
        let p = DiscretizationParams::default();
        let disc = Discretization::build(disk(12), &p).unwrap();
        let f = |_: Point2| AltForm::from_coeffs(2, 2, vec![4.0]).unwrap();
        let (_, sol, _) = disc.solve(2, f).unwrap();
        let div_sigma = disc.d[1].apply(&sol.sigma);
        // ghost projection of f onto the top-degree space
        let rhs = disc.rhs(2, f).unwrap();
        let proj = disc.grams[2]
            .m_s
            .clone()
            .lu()
            .solve(&rhs)
            .expect("ghost Gram invertible");
        let rel = (div_sigma - &proj).norm() / proj.norm();
        assert!(rel < 1e-10, "divergence reproduction off by {rel:.3e}");
    }

    #[test]
    fn top_degree_system_is_mixed_poisson() {
        // no curl-curl block and no multiplier at the top degree
        let p = DiscretizationParams::default();
        let disc = Discretization::build(disk(8), &p).unwrap();
        let h = disc.harmonic(2).unwrap();
        assert_eq!(h.dim, 0);
        let rhs = disc.rhs(2, |_| AltForm::from_coeffs(2, 2, vec![1.0]).unwrap()).unwrap();
        let sys = disc.assemble(2, &h, &rhs).unwrap();
        assert_eq!(sys.n_harmonic, 0);
        assert_eq!(sys.matrix.nrows(), sys.n_sigma + sys.n_eta);
        let mid = sys.matrix.view((sys.n_sigma, sys.n_sigma), (sys.n_eta, sys.n_eta));
        assert_eq!(mid.norm(), 0.0);
        // sigma block carries the negated mass
        let top = sys.matrix.view((0, 0), (sys.n_sigma, sys.n_sigma)).into_owned();
        assert!((top + &disc.grams[1].m_s).norm() == 0.0);
    }

    #[test]
    fn condition_estimate_basics() {
        let id = DMatrix::identity(20, 20);
        assert!((condition_estimate(&id).unwrap() - 1.0).abs() < 1e-12);
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1e-6]));
        let k = condition_estimate(&d).unwrap();
        assert!((k - 1e6).abs() < 1.0);
        let sing = DMatrix::zeros(3, 3);
        assert!(condition_estimate(&sing).is_err());
    }

    #[test]
    fn interpolated_exact_solution_small_error() {
        // consistency smoke test: errors against a field equal to the
        // discrete interpolant stay below the field magnitude
        let p = DiscretizationParams::default();
        let disc = Discretization::build(disk(10), &p).unwrap();
        let f = |_: Point2| AltForm::from_coeffs(2, 2, vec![4.0]).unwrap();
        let (_, sol, h) = disc.solve(2, f).unwrap();
        let exact = crate::problems::disk_poisson([0.5, 0.5], 0.25);
        let errs = disc.errors(2, &sol, &h, &exact.exact, 4).unwrap();
        // the exact potential has magnitude ~ r^2/2; the discrete error must
        // be well below that
        assert!(errs.eta < 0.03, "eta error {}", errs.eta);
        assert!(errs.sigma < 0.5, "sigma error {}", errs.sigma);
    }
}
