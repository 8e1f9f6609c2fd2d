//! Background structured simplicial meshes in R^2, level sets, active-mesh
//! extraction and the stabilisation-facet machinery.
//!
//! The active mesh keeps every background triangle whose linearised level-set
//! region `{phi_lin < 0}` meets it. Active triangles are labelled CUT or
//! IMMERSED; interior facets of the active mesh touching at least one cut
//! triangle form the stabilisation facet set. Breadth-first searches over the
//! interior facet graph realise the cut-to-uncut paths of the mesh-regularity
//! assumption and the macro-patch facet selection.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::io::Write;

use crate::error::{Error, Result};
use crate::quadrature::{cut_rule, Point2};

/// Signed-distance-like description of the physical domain `{phi < 0}`.
///
/// The query offset is added to the point before evaluation, which is how
/// cut-position sweeps shift the geometry relative to the mesh.
#[derive(Debug, Clone)]
pub struct LevelSet {
    kind: LevelSetKind,
    offset: [f64; 2],
}

#[derive(Debug, Clone)]
enum LevelSetKind {
    Circle {
        center: [f64; 2],
        radius: f64,
    },
    Annulus {
        center: [f64; 2],
        r_inner: f64,
        r_outer: f64,
    },
    Affine {
        normal: [f64; 2],
        offset: f64,
    },
}

impl LevelSet {
    pub fn circle(center: [f64; 2], radius: f64) -> Self {
        LevelSet {
            kind: LevelSetKind::Circle { center, radius },
            offset: [0.0, 0.0],
        }
    }

    pub fn annulus(center: [f64; 2], r_inner: f64, r_outer: f64) -> Self {
        LevelSet {
            kind: LevelSetKind::Annulus {
                center,
                r_inner,
                r_outer,
            },
            offset: [0.0, 0.0],
        }
    }

    /// Half plane `{normal . x < offset}`.
    pub fn affine(normal: [f64; 2], offset: f64) -> Self {
        LevelSet {
            kind: LevelSetKind::Affine { normal, offset },
            offset: [0.0, 0.0],
        }
    }

    /// Translate the query point before evaluation (shifts the domain by
    /// `-off` relative to the mesh).
    pub fn with_offset(mut self, off: [f64; 2]) -> Self {
        self.offset = off;
        self
    }

    pub fn eval(&self, p: Point2) -> f64 {
        let x = p[0] + self.offset[0];
        let y = p[1] + self.offset[1];
        match &self.kind {
            LevelSetKind::Circle { center, radius } => {
                ((x - center[0]).powi(2) + (y - center[1]).powi(2)).sqrt() - radius
            }
            LevelSetKind::Annulus {
                center,
                r_inner,
                r_outer,
            } => {
                let rho = ((x - center[0]).powi(2) + (y - center[1]).powi(2)).sqrt();
                let mid = 0.5 * (r_inner + r_outer);
                let half_width = 0.5 * (r_outer - r_inner);
                (rho - mid).abs() - half_width
            }
            LevelSetKind::Affine { normal, offset } => normal[0] * x + normal[1] * y - offset,
        }
    }
}

/// Conforming triangulation of a rectangle with deduplicated, globally
/// oriented edges (low vertex index to high).
#[derive(Debug, Clone)]
pub struct BackgroundMesh {
    pub vertices: Vec<Point2>,
    /// Vertex index triples, positively oriented.
    pub triangles: Vec<[usize; 3]>,
    /// Sorted pairs `(a, b)` with `a < b`, lexicographic order.
    pub edges: Vec<[usize; 2]>,
    /// Per edge, the one or two incident triangles.
    pub edge_tris: Vec<(usize, Option<usize>)>,
    /// Per triangle, its three edge ids.
    pub tri_edges: Vec<[usize; 3]>,
    /// Cell size of the structured build (box width / m).
    pub h: f64,
}

fn tri_area(v: &[Point2], t: &[usize; 3]) -> f64 {
    let (a, b, c) = (v[t[0]], v[t[1]], v[t[2]]);
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}

impl BackgroundMesh {
    /// Validate a raw vertex/triangle list and build the edge tables.
    pub fn from_raw(vertices: Vec<Point2>, triangles: Vec<[usize; 3]>, h: f64) -> Result<Self> {
        let mut edge_map: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (ti, t) in triangles.iter().enumerate() {
            if tri_area(&vertices, t) <= 0.0 {
                return Err(Error::Geometry(format!(
                    "triangle {ti} is degenerate or negatively oriented"
                )));
            }
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                let key = (a.min(b), a.max(b));
                edge_map.entry(key).or_default().push(ti);
            }
        }
        let mut edges = Vec::with_capacity(edge_map.len());
        let mut edge_tris = Vec::with_capacity(edge_map.len());
        for (&(a, b), tris) in &edge_map {
            if tris.len() > 2 {
                return Err(Error::Geometry(format!(
                    "edge ({a},{b}) shared by {} triangles",
                    tris.len()
                )));
            }
            edges.push([a, b]);
            edge_tris.push((tris[0], tris.get(1).copied()));
        }
        let index: BTreeMap<(usize, usize), usize> = edges
            .iter()
            .enumerate()
            .map(|(i, e)| ((e[0], e[1]), i))
            .collect();
        let tri_edges = triangles
            .iter()
            .map(|t| {
                let mut ids = [0usize; 3];
                for (slot, (a, b)) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])]
                    .into_iter()
                    .enumerate()
                {
                    ids[slot] = index[&(a.min(b), a.max(b))];
                }
                ids
            })
            .collect();
        Ok(BackgroundMesh {
            vertices,
            triangles,
            edges,
            edge_tris,
            tri_edges,
            h,
        })
    }

    pub fn tri_coords(&self, t: usize) -> [Point2; 3] {
        let tri = self.triangles[t];
        [
            self.vertices[tri[0]],
            self.vertices[tri[1]],
            self.vertices[tri[2]],
        ]
    }

    pub fn edge_coords(&self, e: usize) -> [Point2; 2] {
        let edge = self.edges[e];
        [self.vertices[edge[0]], self.vertices[edge[1]]]
    }

    pub fn edge_length(&self, e: usize) -> f64 {
        let [p, q] = self.edge_coords(e);
        ((q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2)).sqrt()
    }
}

/// Structured mesh of `m x m` squares over the box, each split into two
/// triangles along the (+1,+1) diagonal.
pub fn build_background(bbox: [f64; 4], m: usize) -> Result<BackgroundMesh> {
    let [x0, y0, x1, y1] = bbox;
    if !(x1 > x0 && y1 > y0) {
        return Err(Error::Geometry(format!("degenerate box {bbox:?}")));
    }
    if m < 1 {
        return Err(Error::Config("mesh resolution m must be >= 1".into()));
    }
    let nv = m + 1;
    let dx = (x1 - x0) / m as f64;
    let dy = (y1 - y0) / m as f64;
    let mut vertices = Vec::with_capacity(nv * nv);
    for iy in 0..nv {
        for ix in 0..nv {
            vertices.push([x0 + ix as f64 * dx, y0 + iy as f64 * dy]);
        }
    }
    let mut triangles = Vec::with_capacity(2 * m * m);
    for iy in 0..m {
        for ix in 0..m {
            let a = iy * nv + ix;
            let b = iy * nv + ix + 1;
            let c = (iy + 1) * nv + ix + 1;
            let d = (iy + 1) * nv + ix;
            triangles.push([a, b, c]);
            triangles.push([a, c, d]);
        }
    }
    BackgroundMesh::from_raw(vertices, triangles, (x1 - x0) / m as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    Cut,
    Immersed,
}

/// An interior facet of the active mesh with its from/to neighbours (lower
/// parent triangle index first) and the unit normal pointing from -> to.
#[derive(Debug, Clone)]
pub struct FacetInfo {
    pub edge: usize,
    pub from: usize,
    pub to: usize,
    pub normal: [f64; 2],
    pub length: f64,
}

/// The background mesh restricted to level-set-active triangles.
#[derive(Debug, Clone)]
pub struct ActiveMesh {
    pub parent: BackgroundMesh,
    /// Level-set values at every parent vertex.
    pub phi_vertex: Vec<f64>,
    /// Sorted parent triangle ids with `{phi_lin < 0} /\ T` nonempty.
    pub active: Vec<usize>,
    /// Labels parallel to `active`.
    pub labels: Vec<Label>,
    /// Parent triangle id -> slot in `active`.
    pub active_slot: Vec<Option<usize>>,
    /// Interior facets of the active mesh, keyed by parent edge id.
    pub interior_facets: BTreeMap<usize, FacetInfo>,
    /// Stabilisation facets: interior facets touching >= 1 cut triangle.
    pub stab_facets: Vec<usize>,
    /// Sorted parent vertex ids appearing in active triangles.
    pub active_vertices: Vec<usize>,
    /// Sorted parent edge ids appearing in active triangles.
    pub active_edges: Vec<usize>,
}

/// Shortest cut-to-uncut paths: per cut triangle, the reached immersed
/// triangle and the facet path, plus the realized element-count bound N.
#[derive(Debug, Clone)]
pub struct CutPaths {
    pub target: BTreeMap<usize, (usize, Vec<usize>)>,
    pub realized_n: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct MeshDiagnostics {
    pub kappa_max: f64,
    pub n_realized: usize,
    pub h_min: f64,
    pub h_max: f64,
}

/// Classify the background mesh against the level set.
///
/// A triangle is active iff its linearised level set is negative somewhere
/// on it (equivalently at some vertex); it is immersed iff `phi < 0` at all
/// vertices and edge midpoints, otherwise cut.
pub fn classify(parent: BackgroundMesh, phi: &LevelSet) -> Result<ActiveMesh> {
    let phi_vertex: Vec<f64> = parent.vertices.iter().map(|&p| phi.eval(p)).collect();
    let mut active = Vec::new();
    let mut labels = Vec::new();
    let mut active_slot = vec![None; parent.triangles.len()];
    for (ti, tri) in parent.triangles.iter().enumerate() {
        let vals = [phi_vertex[tri[0]], phi_vertex[tri[1]], phi_vertex[tri[2]]];
        if !vals.iter().any(|&v| v < 0.0) {
            continue;
        }
        let mut immersed = vals.iter().all(|&v| v < 0.0);
        if immersed {
            for (a, b) in [(tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])] {
                let (pa, pb) = (parent.vertices[a], parent.vertices[b]);
                let mid = [(pa[0] + pb[0]) / 2.0, (pa[1] + pb[1]) / 2.0];
                if phi.eval(mid) >= 0.0 {
                    immersed = false;
                    break;
                }
            }
        }
        active_slot[ti] = Some(active.len());
        active.push(ti);
        labels.push(if immersed { Label::Immersed } else { Label::Cut });
    }
    if active.is_empty() {
        return Err(Error::Geometry(
            "no active triangles: the domain misses the background box".into(),
        ));
    }

    let mut interior_facets = BTreeMap::new();
    let mut stab_facets = Vec::new();
    for (ei, &(t1, t2)) in parent.edge_tris.iter().enumerate() {
        let Some(t2) = t2 else { continue };
        if active_slot[t1].is_none() || active_slot[t2].is_none() {
            continue;
        }
        let (from, to) = (t1.min(t2), t1.max(t2));
        let [p, q] = parent.edge_coords(ei);
        let len = ((q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2)).sqrt();
        let tangent = [(q[0] - p[0]) / len, (q[1] - p[1]) / len];
        let mut normal = [tangent[1], -tangent[0]];
        let centroid = |t: usize| -> Point2 {
            let c = parent.tri_coords(t);
            [
                (c[0][0] + c[1][0] + c[2][0]) / 3.0,
                (c[0][1] + c[1][1] + c[2][1]) / 3.0,
            ]
        };
        let (cf, ct) = (centroid(from), centroid(to));
        if normal[0] * (ct[0] - cf[0]) + normal[1] * (ct[1] - cf[1]) < 0.0 {
            normal = [-normal[0], -normal[1]];
        }
        interior_facets.insert(
            ei,
            FacetInfo {
                edge: ei,
                from,
                to,
                normal,
                length: len,
            },
        );
        let cut_touch = labels[active_slot[t1].unwrap()] == Label::Cut
            || labels[active_slot[t2].unwrap()] == Label::Cut;
        if cut_touch {
            stab_facets.push(ei);
        }
    }

    let mut vset = BTreeSet::new();
    let mut eset = BTreeSet::new();
    for &ti in &active {
        for &v in &parent.triangles[ti] {
            vset.insert(v);
        }
        for &e in &parent.tri_edges[ti] {
            eset.insert(e);
        }
    }

    Ok(ActiveMesh {
        parent,
        phi_vertex,
        active,
        labels,
        active_slot,
        interior_facets,
        stab_facets,
        active_vertices: vset.into_iter().collect(),
        active_edges: eset.into_iter().collect(),
    })
}

impl ActiveMesh {
    pub fn label_of(&self, parent_tri: usize) -> Option<Label> {
        self.active_slot[parent_tri].map(|s| self.labels[s])
    }

    pub fn tri_phi(&self, parent_tri: usize) -> [f64; 3] {
        let t = self.parent.triangles[parent_tri];
        [
            self.phi_vertex[t[0]],
            self.phi_vertex[t[1]],
            self.phi_vertex[t[2]],
        ]
    }

    /// Interior-facet neighbours of an active triangle, in edge-id order.
    fn neighbours(&self, tri: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut edges = self.parent.tri_edges[tri];
        edges.sort_unstable();
        for e in edges {
            if let Some(info) = self.interior_facets.get(&e) {
                let other = if info.from == tri { info.to } else { info.from };
                out.push((e, other));
            }
        }
        out
    }

    /// Shortest facet paths from every cut triangle to an immersed one.
    ///
    /// Errors if some cut triangle cannot reach an immersed triangle within
    /// `n_max` elements (the uniformly-bounded path assumption fails at this
    /// resolution).
    pub fn cut_to_uncut(&self, n_max: usize) -> Result<CutPaths> {
        let mut target = BTreeMap::new();
        let mut realized_n = 0usize;
        for (slot, &tri) in self.active.iter().enumerate() {
            if self.labels[slot] != Label::Cut {
                continue;
            }
            // BFS over interior facets
            let mut prev: BTreeMap<usize, (usize, usize)> = BTreeMap::new(); // tri -> (prev tri, edge)
            let mut seen = BTreeSet::new();
            let mut queue = VecDeque::new();
            seen.insert(tri);
            queue.push_back((tri, 1usize));
            let mut found = None;
            while let Some((cur, depth)) = queue.pop_front() {
                if self.label_of(cur) == Some(Label::Immersed) {
                    found = Some((cur, depth));
                    break;
                }
                if depth >= n_max {
                    continue;
                }
                for (e, other) in self.neighbours(cur) {
                    if seen.insert(other) {
                        prev.insert(other, (cur, e));
                        queue.push_back((other, depth + 1));
                    }
                }
            }
            let Some((hit, depth)) = found else {
                return Err(Error::Geometry(format!(
                    "cut triangle {tri} has no immersed triangle within {n_max} hops"
                )));
            };
            let mut path = Vec::new();
            let mut cur = hit;
            while cur != tri {
                let (p, e) = prev[&cur];
                path.push(e);
                cur = p;
            }
            path.reverse();
            realized_n = realized_n.max(depth);
            target.insert(tri, (hit, path));
        }
        Ok(CutPaths { target, realized_n })
    }

    /// Physical-area fraction `|T /\ Omega| / |T|` of an active triangle,
    /// from the linearised level set (degree-2 cut quadrature).
    pub fn area_fraction(&self, tri: usize) -> f64 {
        let phi = self.tri_phi(tri);
        if phi.iter().all(|&v| v < 0.0) {
            return 1.0;
        }
        let coords = self.parent.tri_coords(tri);
        let area = tri_area(&self.parent.vertices, &self.parent.triangles[tri]);
        let cut = cut_rule(&coords, &phi, 2).expect("degree 2 is supported");
        cut.total_weight() / area
    }

    /// Macro-stabilisation facets for the area-fraction threshold `delta`:
    /// the facets of shortest paths attaching each small triangle (fraction
    /// < delta) to a large one. The result is a subset of the stabilisation
    /// facets. Callers should have checked cut-to-uncut reachability first.
    pub fn macro_facets(&self, delta: f64) -> Result<Vec<usize>> {
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(Error::Config(format!(
                "macro parameter delta must be in (0,1], got {delta}"
            )));
        }
        let large: BTreeSet<usize> = self
            .active
            .iter()
            .copied()
            .filter(|&t| self.area_fraction(t) >= delta)
            .collect();
        let mut facets = BTreeSet::new();
        for &tri in &self.active {
            if large.contains(&tri) {
                continue;
            }
            // BFS to the nearest large triangle
            let mut prev: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
            let mut seen = BTreeSet::new();
            let mut queue = VecDeque::new();
            seen.insert(tri);
            queue.push_back(tri);
            let mut found = None;
            while let Some(cur) = queue.pop_front() {
                if large.contains(&cur) {
                    found = Some(cur);
                    break;
                }
                for (e, other) in self.neighbours(cur) {
                    if seen.insert(other) {
                        prev.insert(other, (cur, e));
                        queue.push_back(other);
                    }
                }
            }
            let Some(hit) = found else {
                return Err(Error::Geometry(format!(
                    "small triangle {tri} cannot reach any large element (delta = {delta})"
                )));
            };
            let mut cur = hit;
            while cur != tri {
                let (p, e) = prev[&cur];
                facets.insert(e);
                cur = p;
            }
        }
        Ok(facets.into_iter().collect())
    }

    /// Shape-regularity and path diagnostics over the active triangles.
    pub fn diagnostics(&self, paths: Option<&CutPaths>) -> MeshDiagnostics {
        let mut kappa_max: f64 = 0.0;
        let mut h_min = f64::INFINITY;
        let mut h_max: f64 = 0.0;
        for &ti in &self.active {
            let c = self.parent.tri_coords(ti);
            let mut lengths = [0.0; 3];
            for (i, (a, b)) in [(c[0], c[1]), (c[1], c[2]), (c[2], c[0])].into_iter().enumerate() {
                lengths[i] = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
            }
            let h_t = lengths.iter().fold(0.0f64, |m, &l| m.max(l));
            let perimeter: f64 = lengths.iter().sum();
            let area = tri_area(&self.parent.vertices, &self.parent.triangles[ti]);
            // inscribed-ball diameter: 2 * area / semi-perimeter
            let rho_t = 4.0 * area / perimeter;
            kappa_max = kappa_max.max(h_t / rho_t);
            h_min = h_min.min(h_t);
            h_max = h_max.max(h_t);
        }
        MeshDiagnostics {
            kappa_max,
            n_realized: paths.map_or(0, |p| p.realized_n),
            h_min,
            h_max,
        }
    }

    /// Plain-text debug dump: `v x y` per background vertex, `t i j k` per
    /// active triangle, `f i j STAB` per stabilisation facet.
    pub fn dump(&self, w: &mut impl Write) -> std::io::Result<()> {
        for v in &self.parent.vertices {
            writeln!(w, "v {:.17e} {:.17e}", v[0], v[1])?;
        }
        for &ti in &self.active {
            let t = self.parent.triangles[ti];
            writeln!(w, "t {} {} {}", t[0], t[1], t[2])?;
        }
        for &e in &self.stab_facets {
            let edge = self.parent.edges[e];
            writeln!(w, "f {} {} STAB", edge[0], edge[1])?;
        }
        Ok(())
    }
}
