//! Facet-based ghost penalty stabilisation and the stabilised Gram matrices.
//!
//! For every stabilisation facet F with neighbours (T_from, T_to), the
//! penalty accumulates, for derivative orders ell = 0..r,
//! `eta * h_F^{2 ell + 1}` times the facet integral of the inner product of
//! the jumps of the ell-th normal derivatives of the basis forms, where the
//! jump uses the canonical polynomial extension of both neighbours.
//!
//! Two evaluation paths exist: the production path integrates the full
//! alternating-form inner product of the jumps; the check path decomposes
//! the integrand into facet trace and normal-trace inner products. They are
//! algebraically identical because the adapted facet frame is orthonormal,
//! and their agreement is asserted facet by facet in the test suites.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forms::{normal_trace, trace, AltForm, FacetFrame};
use crate::geometry::ActiveMesh;
use crate::linalg::pencil_extremes;
use crate::quadrature::facet_rule;
use crate::spaces::{mass_matrix, FESpace, MassRegion};

/// Which facets carry the penalty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FacetSelection {
    /// Every stabilisation facet.
    Full,
    /// Facets of the small-to-large patch paths for the given area-fraction
    /// threshold.
    Macro(f64),
}

impl FacetSelection {
    pub fn resolve(&self, am: &ActiveMesh) -> Result<Vec<usize>> {
        match self {
            FacetSelection::Full => Ok(am.stab_facets.clone()),
            FacetSelection::Macro(delta) => am.macro_facets(*delta),
        }
    }
}

/// Gram matrices of one form degree: physical mass, stabilisation, their sum
/// (the ghost inner product) and the active-mesh mass used as the reference
/// norm in the equivalence statement.
#[derive(Debug, Clone)]
pub struct GhostGram {
    pub k: usize,
    pub m_phys: DMatrix<f64>,
    pub s: DMatrix<f64>,
    pub m_s: DMatrix<f64>,
    pub m_active: DMatrix<f64>,
    pub eta: f64,
    pub facet_set: FacetSelection,
}

impl GhostGram {
    /// The unstabilised comparison variant: the penalty removed and the
    /// ghost product replaced by the bare physical mass.
    pub fn unstabilized(&self) -> GhostGram {
        GhostGram {
            k: self.k,
            m_phys: self.m_phys.clone(),
            s: DMatrix::zeros(self.s.nrows(), self.s.ncols()),
            m_s: self.m_phys.clone(),
            m_active: self.m_active.clone(),
            eta: self.eta,
            facet_set: self.facet_set,
        }
    }

    /// Extreme generalized eigenvalues of `(M_s, M_active)`.
    pub fn stabilized_extremes(&self) -> Result<(f64, f64)> {
        pencil_extremes(&self.m_s, &self.m_active)
    }

    /// Extreme generalized eigenvalues of `(M_phys, M_active)`.
    pub fn physical_extremes(&self) -> Result<(f64, f64)> {
        pencil_extremes(&self.m_phys, &self.m_active)
    }

    pub fn s_norm(&self, x: &nalgebra::DVector<f64>) -> f64 {
        ((&self.m_s * x).dot(x)).max(0.0).sqrt()
    }
}

struct FacetWork<'a> {
    frame: FacetFrame,
    h_f: f64,
    /// union of the global DOFs of both neighbours, sorted
    dofs: Vec<usize>,
    /// (element slot, +1/-1 jump weight) pairs
    sides: [(usize, f64); 2],
    sp: &'a FESpace,
}

fn facet_work<'a>(sp: &'a FESpace, am: &ActiveMesh, edge: usize) -> Result<FacetWork<'a>> {
    let info = am.interior_facets.get(&edge).ok_or_else(|| {
        Error::Assembly(format!(
            "facet {edge} is not an interior facet of the active mesh"
        ))
    })?;
    let [a, b] = am.parent.edges[edge];
    let (pa, pb) = (am.parent.vertices[a], am.parent.vertices[b]);
    let frame = FacetFrame::from_segment(pa, pb, info.normal)
        .map_err(|e| Error::Assembly(format!("facet frame: {e}")))?;
    let slot_from = am.active_slot[info.from]
        .ok_or_else(|| Error::Assembly(format!("facet {edge} neighbour not active")))?;
    let slot_to = am.active_slot[info.to]
        .ok_or_else(|| Error::Assembly(format!("facet {edge} neighbour not active")))?;
    let mut dofs: Vec<usize> = sp.elements[slot_from]
        .dofs
        .iter()
        .chain(sp.elements[slot_to].dofs.iter())
        .copied()
        .collect();
    dofs.sort_unstable();
    dofs.dedup();
    Ok(FacetWork {
        frame,
        h_f: info.length,
        dofs,
        sides: [(slot_to, 1.0), (slot_from, -1.0)],
        sp,
    })
}

impl FacetWork<'_> {
    /// Jump of the ell-th normal derivative of each union DOF's basis form
    /// at the physical point `x` (polynomial extension from both sides).
    fn jumps(&self, x: [f64; 2], ell: usize) -> Vec<AltForm> {
        let normal = [self.frame.normal[0], self.frame.normal[1]];
        let mut out = vec![AltForm::zero(2, self.sp.k); self.dofs.len()];
        for &(slot, sign) in &self.sides {
            let el = &self.sp.elements[slot];
            for (local, dof) in el.dofs.iter().enumerate() {
                let pos = self.dofs.binary_search(dof).expect("dof in union");
                out[pos].axpy(sign, &el.basis[local].eval_dn(x, ell, normal));
            }
        }
        out
    }
}

/// Local ghost matrices per facet, via the requested integrand path.
fn facet_local(
    work: &FacetWork<'_>,
    am: &ActiveMesh,
    edge: usize,
    eta: f64,
    facet_degree: usize,
    trace_path: bool,
) -> Result<DMatrix<f64>> {
    let [a, b] = am.parent.edges[edge];
    let rule = facet_rule(am.parent.vertices[a], am.parent.vertices[b], facet_degree)?;
    let nd = work.dofs.len();
    let mut local = DMatrix::zeros(nd, nd);
    for (p, &w) in rule.points.iter().zip(&rule.weights) {
        for ell in 0..=work.sp.r {
            let scale = eta * work.h_f.powi(2 * ell as i32 + 1) * w;
            let jumps = work.jumps(*p, ell);
            if trace_path {
                let traces: Vec<AltForm> = jumps.iter().map(|j| trace(j, &work.frame)).collect();
                let ntraces: Vec<AltForm> = jumps
                    .iter()
                    .map(|j| normal_trace(j, &work.frame))
                    .collect();
                for i in 0..nd {
                    for j in 0..=i {
                        let v = traces[i].inner(&traces[j]).expect("same degree")
                            + ntraces[i].inner(&ntraces[j]).expect("same degree");
                        local[(i, j)] += scale * v;
                        if i != j {
                            local[(j, i)] += scale * v;
                        }
                    }
                }
            } else {
                for i in 0..nd {
                    for j in 0..=i {
                        let v = jumps[i].inner(&jumps[j]).expect("same degree");
                        local[(i, j)] += scale * v;
                        if i != j {
                            local[(j, i)] += scale * v;
                        }
                    }
                }
            }
        }
    }
    Ok(local)
}

/// Assemble the ghost-penalty matrix over the given facets (production
/// path: full-jump inner products). Facets are processed in parallel and
/// combined in facet order.
pub fn assemble_ghost(
    sp: &FESpace,
    am: &ActiveMesh,
    facets: &[usize],
    eta: f64,
    facet_degree: usize,
) -> Result<DMatrix<f64>> {
    if eta <= 0.0 {
        return Err(Error::Config(format!("penalty eta must be > 0, got {eta}")));
    }
    let locals: Vec<Result<(Vec<usize>, DMatrix<f64>)>> = facets
        .par_iter()
        .map(|&edge| {
            let work = facet_work(sp, am, edge)?;
            let local = facet_local(&work, am, edge, eta, facet_degree, false)?;
            Ok((work.dofs, local))
        })
        .collect();
    let mut s = DMatrix::zeros(sp.ndofs, sp.ndofs);
    for item in locals {
        let (dofs, local) = item?;
        for (i, &gi) in dofs.iter().enumerate() {
            for (j, &gj) in dofs.iter().enumerate() {
                s[(gi, gj)] += local[(i, j)];
            }
        }
    }
    Ok(s)
}

/// Maximum absolute discrepancy between the full-jump path and the
/// trace-decomposed path over every assembled facet.
pub fn check_paths_agree(
    sp: &FESpace,
    am: &ActiveMesh,
    facets: &[usize],
    eta: f64,
    facet_degree: usize,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for &edge in facets {
        let work = facet_work(sp, am, edge)?;
        let full = facet_local(&work, am, edge, eta, facet_degree, false)?;
        let dec = facet_local(&work, am, edge, eta, facet_degree, true)?;
        worst = worst.max((full - dec).abs().max());
    }
    Ok(worst)
}

/// Assemble the Gram matrices of degree `sp.k`: physical and active mass,
/// the stabilisation over the selected facets, and their sum.
#[allow(clippy::too_many_arguments)]
pub fn ghost_gram(
    sp: &FESpace,
    am: &ActiveMesh,
    eta: f64,
    facet_set: FacetSelection,
    vol_degree: usize,
    facet_degree: usize,
    stabilize: bool,
) -> Result<GhostGram> {
    let m_phys = mass_matrix(sp, am, MassRegion::Physical, vol_degree)?;
    let m_active = mass_matrix(sp, am, MassRegion::Active, vol_degree)?;
    let s = if stabilize {
        let facets = facet_set.resolve(am)?;
        assemble_ghost(sp, am, &facets, eta, facet_degree)?
    } else {
        DMatrix::zeros(sp.ndofs, sp.ndofs)
    };
    let m_s = &m_phys + &s;
    if stabilize && m_s.clone().cholesky().is_none() {
        return Err(Error::Solver(
            "ghost Gram matrix is numerically singular (Assumption 1 failure or a bug)".into(),
        ));
    }
    Ok(GhostGram {
        k: sp.k,
        m_phys,
        s,
        m_s,
        m_active,
        eta,
        facet_set,
    })
}
