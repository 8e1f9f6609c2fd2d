//! Lowest-order trimmed (Whitney) k-form spaces on the 2D active mesh.
//!
//! Degrees of freedom sit on the k-subsimplices of the active mesh: vertex
//! values for k = 0, signed tangential edge integrals for k = 1 (edges
//! globally oriented low vertex index to high), unit triangle integrals for
//! k = 2. Local bases are stored as Cartesian polynomial coefficient tables
//! per alternating component, which makes normal derivatives exact linear
//! operations and extends the polynomials canonically outside their element.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forms::AltForm;
use crate::geometry::ActiveMesh;
use crate::quadrature::{cut_rule, facet_rule, triangle_rule, Point2, QuadRule};

/// A 2D alternating-form-valued polynomial of degree <= 1: for every
/// multi-index component, coefficients `[c, cx, cy]` of `c + cx x + cy y`.
#[derive(Debug, Clone)]
pub struct PolyAltForm {
    pub k: usize,
    pub comps: Vec<[f64; 3]>,
}

impl PolyAltForm {
    fn ncomps(k: usize) -> usize {
        match k {
            0 | 2 => 1,
            1 => 2,
            _ => 0,
        }
    }

    pub fn zero(k: usize) -> Self {
        PolyAltForm {
            k,
            comps: vec![[0.0; 3]; Self::ncomps(k)],
        }
    }

    /// Evaluate the `ell`-th directional derivative along `normal` at `x`.
    /// Order 0 is the value; order 1 differentiates each affine component;
    /// orders above the polynomial degree vanish identically.
    pub fn eval_dn(&self, x: Point2, ell: usize, normal: [f64; 2]) -> AltForm {
        let coeffs = match ell {
            0 => self
                .comps
                .iter()
                .map(|c| c[0] + c[1] * x[0] + c[2] * x[1])
                .collect(),
            1 => self
                .comps
                .iter()
                .map(|c| c[1] * normal[0] + c[2] * normal[1])
                .collect(),
            _ => vec![0.0; self.comps.len()],
        };
        AltForm::from_coeffs(2, self.k, coeffs).expect("component count matches degree")
    }

    pub fn eval(&self, x: Point2) -> AltForm {
        self.eval_dn(x, 0, [0.0, 0.0])
    }

    /// Exterior derivative (a constant (k+1)-form polynomial for degree 1).
    pub fn d(&self) -> PolyAltForm {
        match self.k {
            0 => PolyAltForm {
                k: 1,
                comps: vec![[self.comps[0][1], 0.0, 0.0], [self.comps[0][2], 0.0, 0.0]],
            },
            1 => PolyAltForm {
                k: 2,
                // d(wx dx + wy dy) = (dwy/dx - dwx/dy) dx^dy
                comps: vec![[self.comps[1][1] - self.comps[0][2], 0.0, 0.0]],
            },
            _ => PolyAltForm::zero(self.k + 1),
        }
    }
}

/// Local basis of one active triangle: global DOF ids and the matching
/// polynomial forms, in the same order.
#[derive(Debug, Clone)]
pub struct ElementBasis {
    /// Parent triangle id.
    pub tri: usize,
    pub dofs: Vec<usize>,
    pub basis: Vec<PolyAltForm>,
}

/// Trimmed degree-1 Whitney k-form space over the active mesh.
#[derive(Debug, Clone)]
pub struct FESpace {
    pub k: usize,
    /// Polynomial degree of the trimmed family; only r = 1 is implemented.
    pub r: usize,
    pub ndofs: usize,
    pub elements: Vec<ElementBasis>,
    /// Parent entity id per DOF (vertex, edge or triangle id).
    pub dof_entity: Vec<usize>,
}

/// Integration region selector for Gram matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MassRegion {
    /// `T /\ Omega` via the linearised cut rule.
    Physical,
    /// The whole active triangle.
    Active,
}

fn barycentric_tables(coords: &[Point2; 3]) -> [[f64; 3]; 3] {
    // coefficients [c, cx, cy] of each hat: solve M lambda_i = e_i with
    // M = [1 x_j y_j] rows, via the adjugate of the 3x3 matrix
    let m = [
        [1.0, coords[0][0], coords[0][1]],
        [1.0, coords[1][0], coords[1][1]],
        [1.0, coords[2][0], coords[2][1]],
    ];
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    let cof = |r: usize, c: usize| -> f64 {
        let rows: Vec<usize> = (0..3).filter(|&i| i != r).collect();
        let cols: Vec<usize> = (0..3).filter(|&j| j != c).collect();
        let minor = m[rows[0]][cols[0]] * m[rows[1]][cols[1]]
            - m[rows[0]][cols[1]] * m[rows[1]][cols[0]];
        if (r + c).is_multiple_of(2) {
            minor
        } else {
            -minor
        }
    };
    // inverse transpose structure: lambda_i coefficients are column i of M^{-1}
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for c in 0..3 {
            out[i][c] = cof(i, c) / det;
        }
    }
    out
}

impl FESpace {
    /// Build the degree-1 trimmed space of k-forms on the active mesh and
    /// verify local unisolvence numerically.
    pub fn build(am: &ActiveMesh, k: usize) -> Result<FESpace> {
        if k > 2 {
            return Err(Error::Config(format!(
                "form degree k must be 0, 1 or 2 in two dimensions, got {k}"
            )));
        }
        let vertex_slot = |v: usize| am.active_vertices.binary_search(&v).expect("active vertex");
        let edge_slot = |e: usize| am.active_edges.binary_search(&e).expect("active edge");

        let ndofs = match k {
            0 => am.active_vertices.len(),
            1 => am.active_edges.len(),
            _ => am.active.len(),
        };
        let dof_entity = match k {
            0 => am.active_vertices.clone(),
            1 => am.active_edges.clone(),
            _ => am.active.clone(),
        };

        let mut elements = Vec::with_capacity(am.active.len());
        for (slot, &ti) in am.active.iter().enumerate() {
            let tri = am.parent.triangles[ti];
            let coords = am.parent.tri_coords(ti);
            let lambda = barycentric_tables(&coords);
            let mut dofs = Vec::new();
            let mut basis = Vec::new();
            match k {
                0 => {
                    for (local, &v) in tri.iter().enumerate() {
                        dofs.push(vertex_slot(v));
                        basis.push(PolyAltForm {
                            k: 0,
                            comps: vec![lambda[local]],
                        });
                    }
                }
                1 => {
                    for &e in &am.parent.tri_edges[ti] {
                        let [a, b] = am.parent.edges[e];
                        let la = tri.iter().position(|&v| v == a).expect("edge vertex");
                        let lb = tri.iter().position(|&v| v == b).expect("edge vertex");
                        // w = lambda_a d lambda_b - lambda_b d lambda_a per component
                        let mut comps = vec![[0.0; 3]; 2];
                        for (ci, comp) in comps.iter_mut().enumerate() {
                            let ga = lambda[la][1 + ci];
                            let gb = lambda[lb][1 + ci];
                            comp[0] = lambda[la][0] * gb - lambda[lb][0] * ga;
                            comp[1] = lambda[la][1] * gb - lambda[lb][1] * ga;
                            comp[2] = lambda[la][2] * gb - lambda[lb][2] * ga;
                        }
                        dofs.push(edge_slot(e));
                        basis.push(PolyAltForm { k: 1, comps });
                    }
                }
                _ => {
                    let area = triangle_rule(&coords, 1)?.total_weight();
                    dofs.push(slot);
                    basis.push(PolyAltForm {
                        k: 2,
                        comps: vec![[1.0 / area, 0.0, 0.0]],
                    });
                }
            }
            let el = ElementBasis {
                tri: ti,
                dofs,
                basis,
            };
            verify_unisolvence(am, &el, k)?;
            elements.push(el);
        }
        Ok(FESpace {
            k,
            r: 1,
            ndofs,
            elements,
            dof_entity,
        })
    }

    /// Values (or `ell`-th normal derivatives) of every local basis form of
    /// element `slot` at `x`; `x` may lie outside the triangle, in which case
    /// the canonical polynomial extension is evaluated.
    pub fn eval_basis(&self, slot: usize, x: Point2, ell: usize, normal: [f64; 2]) -> Vec<AltForm> {
        self.elements[slot]
            .basis
            .iter()
            .map(|p| p.eval_dn(x, ell, normal))
            .collect()
    }

    /// Evaluate the discrete field with DOF vector `coeffs` on element `slot`.
    pub fn eval_field(
        &self,
        slot: usize,
        coeffs: &DVector<f64>,
        x: Point2,
        ell: usize,
        normal: [f64; 2],
    ) -> AltForm {
        let el = &self.elements[slot];
        let mut out = AltForm::zero(2, self.k);
        for (dof, poly) in el.dofs.iter().zip(&el.basis) {
            out.axpy(coeffs[*dof], &poly.eval_dn(x, ell, normal));
        }
        out
    }
}

fn verify_unisolvence(am: &ActiveMesh, el: &ElementBasis, _k: usize) -> Result<()> {
    let nb = el.basis.len();
    for i in 0..nb {
        for j in 0..nb {
            let expect = if i == j { 1.0 } else { 0.0 };
            let got = apply_dof_functional(am, el, j, &el.basis[i])?;
            if (got - expect).abs() > 1e-12 {
                return Err(Error::Assembly(format!(
                    "unisolvence failure on triangle {}: functional {j} of basis {i} = {got}",
                    el.tri
                )));
            }
        }
    }
    Ok(())
}

/// The canonical DOF functional attached to local slot `j` of the element,
/// applied to an arbitrary polynomial form.
fn apply_dof_functional(
    am: &ActiveMesh,
    el: &ElementBasis,
    j: usize,
    form: &PolyAltForm,
) -> Result<f64> {
    let tri = am.parent.triangles[el.tri];
    let coords = am.parent.tri_coords(el.tri);
    match form.k {
        0 => {
            let p = coords[j];
            Ok(form.eval(p).coeffs()[0])
        }
        1 => {
            let e = am.parent.tri_edges[el.tri][j];
            let [a, b] = am.parent.edges[e];
            let (pa, pb) = (am.parent.vertices[a], am.parent.vertices[b]);
            let len = ((pb[0] - pa[0]).powi(2) + (pb[1] - pa[1]).powi(2)).sqrt();
            let t = [(pb[0] - pa[0]) / len, (pb[1] - pa[1]) / len];
            let rule = facet_rule(pa, pb, 2)?;
            Ok(rule.integrate(|p| {
                let v = form.eval(p);
                v.coeffs()[0] * t[0] + v.coeffs()[1] * t[1]
            }))
        }
        2 => {
            let _ = tri;
            let rule = triangle_rule(&coords, 2)?;
            Ok(rule.integrate(|p| form.eval(p).coeffs()[0]))
        }
        _ => Err(Error::Assembly("unsupported degree".into())),
    }
}

/// Sparse integer matrix with exact arithmetic, used for the signed
/// incidence (coboundary) maps.
#[derive(Debug, Clone)]
pub struct CoboundaryMatrix {
    pub nrows: usize,
    pub ncols: usize,
    pub rows: Vec<Vec<(usize, i64)>>,
}

impl CoboundaryMatrix {
    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.nrows, self.ncols);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                m[(i, j)] = v as f64;
            }
        }
        m
    }

    /// Exact integer product `self * other`.
    pub fn mul_int(&self, other: &CoboundaryMatrix) -> CoboundaryMatrix {
        assert_eq!(self.ncols, other.nrows);
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc: std::collections::BTreeMap<usize, i64> = std::collections::BTreeMap::new();
                for &(mid, v) in row {
                    for &(j, w) in &other.rows[mid] {
                        *acc.entry(j).or_insert(0) += v * w;
                    }
                }
                acc.into_iter().filter(|&(_, v)| v != 0).collect()
            })
            .collect();
        CoboundaryMatrix {
            nrows: self.nrows,
            ncols: other.ncols,
            rows,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    /// Apply to a DOF vector.
    pub fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.nrows);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                out[i] += v as f64 * x[j];
            }
        }
        out
    }
}

/// Signed incidence matrix realising the exterior derivative from the
/// degree-k space to the degree-(k+1) space.
pub fn coboundary(sp_k: &FESpace, sp_k1: &FESpace, am: &ActiveMesh) -> Result<CoboundaryMatrix> {
    if sp_k1.k != sp_k.k + 1 {
        return Err(Error::Assembly(format!(
            "coboundary expects consecutive degrees, got {} and {}",
            sp_k.k, sp_k1.k
        )));
    }
    let mut rows: Vec<Vec<(usize, i64)>> = vec![Vec::new(); sp_k1.ndofs];
    match sp_k.k {
        0 => {
            // d(hat_v) over edge (a,b), a < b: +1 at head b, -1 at tail a
            for (row, &e) in am.active_edges.iter().enumerate() {
                let [a, b] = am.parent.edges[e];
                let sa = am.active_vertices.binary_search(&a).expect("active vertex");
                let sb = am.active_vertices.binary_search(&b).expect("active vertex");
                rows[row].push((sb, 1));
                rows[row].push((sa, -1));
                rows[row].sort_unstable_by_key(|&(c, _)| c);
            }
        }
        1 => {
            // d(w_ab) integrates to the orientation of edge (a,b) in the
            // counterclockwise boundary of each incident triangle
            for (row, &ti) in am.active.iter().enumerate() {
                let tri = am.parent.triangles[ti];
                for &e in &am.parent.tri_edges[ti] {
                    let [a, b] = am.parent.edges[e];
                    let col = am.active_edges.binary_search(&e).expect("active edge");
                    let la = tri.iter().position(|&v| v == a).unwrap();
                    let lb = tri.iter().position(|&v| v == b).unwrap();
                    let sign = if (la + 1) % 3 == lb { 1 } else { -1 };
                    rows[row].push((col, sign));
                }
                rows[row].sort_unstable_by_key(|&(c, _)| c);
            }
        }
        _ => {
            return Err(Error::Assembly(
                "no coboundary above the top degree in 2D".into(),
            ))
        }
    }
    Ok(CoboundaryMatrix {
        nrows: sp_k1.ndofs,
        ncols: sp_k.ndofs,
        rows,
    })
}

fn quadrature_for(am: &ActiveMesh, tri: usize, region: MassRegion, degree: usize) -> Result<QuadRule> {
    let coords = am.parent.tri_coords(tri);
    match region {
        MassRegion::Active => triangle_rule(&coords, degree),
        MassRegion::Physical => cut_rule(&coords, &am.tri_phi(tri), degree),
    }
}

/// Gram matrix of the space over the selected region. Triangles are
/// processed in parallel, contributions combined in element order, so the
/// result is independent of the thread count.
pub fn mass_matrix(
    sp: &FESpace,
    am: &ActiveMesh,
    region: MassRegion,
    degree: usize,
) -> Result<DMatrix<f64>> {
    let locals: Vec<Result<DMatrix<f64>>> = sp
        .elements
        .par_iter()
        .map(|el| -> Result<DMatrix<f64>> {
            let rule = quadrature_for(am, el.tri, region, degree)?;
            let nb = el.basis.len();
            let mut local = DMatrix::zeros(nb, nb);
            for (p, &w) in rule.points.iter().zip(&rule.weights) {
                let vals: Vec<AltForm> = el.basis.iter().map(|b| b.eval(*p)).collect();
                for i in 0..nb {
                    for j in 0..=i {
                        let v = w * vals[i].inner(&vals[j]).expect("same degree");
                        local[(i, j)] += v;
                        if i != j {
                            local[(j, i)] += v;
                        }
                    }
                }
            }
            Ok(local)
        })
        .collect();
    let mut m = DMatrix::zeros(sp.ndofs, sp.ndofs);
    for (el, local) in sp.elements.iter().zip(locals) {
        let local = local?;
        for (i, &gi) in el.dofs.iter().enumerate() {
            for (j, &gj) in el.dofs.iter().enumerate() {
                m[(gi, gj)] += local[(i, j)];
            }
        }
    }
    Ok(m)
}

/// Canonical (Whitney) interpolant of a smooth k-form field: vertex values,
/// oriented tangential edge integrals or triangle integrals, by degree.
pub fn interpolate<F>(sp: &FESpace, am: &ActiveMesh, f: F, degree: usize) -> Result<DVector<f64>>
where
    F: Fn(Point2) -> AltForm,
{
    let mut out = DVector::zeros(sp.ndofs);
    match sp.k {
        0 => {
            for (dof, &v) in am.active_vertices.iter().enumerate() {
                out[dof] = f(am.parent.vertices[v]).coeffs()[0];
            }
        }
        1 => {
            for (dof, &e) in am.active_edges.iter().enumerate() {
                let [a, b] = am.parent.edges[e];
                let (pa, pb) = (am.parent.vertices[a], am.parent.vertices[b]);
                let len = ((pb[0] - pa[0]).powi(2) + (pb[1] - pa[1]).powi(2)).sqrt();
                let t = [(pb[0] - pa[0]) / len, (pb[1] - pa[1]) / len];
                let rule = facet_rule(pa, pb, degree)?;
                out[dof] = rule.integrate(|p| {
                    let v = f(p);
                    v.coeffs()[0] * t[0] + v.coeffs()[1] * t[1]
                });
            }
        }
        _ => {
            for (dof, &ti) in am.active.iter().enumerate() {
                let coords = am.parent.tri_coords(ti);
                let rule = triangle_rule(&coords, degree)?;
                out[dof] = rule.integrate(|p| f(p).coeffs()[0]);
            }
        }
    }
    Ok(out)
}

/// Load vector `F_i = integral over Omega of <f(x), phi_i(x)>` using the cut
/// quadrature (the physical domain only).
pub fn load_vector<F>(sp: &FESpace, am: &ActiveMesh, f: F, degree: usize) -> Result<DVector<f64>>
where
    F: Fn(Point2) -> AltForm + Sync,
{
    let locals: Vec<Result<Vec<f64>>> = sp
        .elements
        .par_iter()
        .map(|el| -> Result<Vec<f64>> {
            let rule = quadrature_for(am, el.tri, MassRegion::Physical, degree)?;
            let mut local = vec![0.0; el.basis.len()];
            for (p, &w) in rule.points.iter().zip(&rule.weights) {
                let fv = f(*p);
                for (i, b) in el.basis.iter().enumerate() {
                    local[i] += w * fv.inner(&b.eval(*p)).expect("degree of f matches space");
                }
            }
            Ok(local)
        })
        .collect();
    let mut out = DVector::zeros(sp.ndofs);
    for (el, local) in sp.elements.iter().zip(locals) {
        let local = local?;
        for (i, &gi) in el.dofs.iter().enumerate() {
            out[gi] += local[i];
        }
    }
    Ok(out)
}
