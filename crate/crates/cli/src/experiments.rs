//! The four experiment drivers: convergence study, cut-position sweep,
//! norm-equivalence sweep and single solve with an optional field dump.

use std::time::Instant;

use cutfeec::error::{Error, Result};
use cutfeec::geometry::{build_background, classify, ActiveMesh};
use cutfeec::ghost::{ghost_gram, FacetSelection};
use cutfeec::hodge::{condition_estimate, Discretization, DiscretizationParams};
use cutfeec::problems::{self, Problem};
use cutfeec::spaces::FESpace;

use crate::config::{ExperimentConfig, Shape};
use crate::csv::{Cell, CsvDoc};

fn build_mesh(cfg: &ExperimentConfig, m: usize, epsilon: f64) -> Result<ActiveMesh> {
    let bg = build_background(cfg.bbox, m)?;
    classify(bg, &cfg.level_set(epsilon))
}

fn params(cfg: &ExperimentConfig, stabilize: bool) -> DiscretizationParams {
    DiscretizationParams {
        eta: cfg.eta,
        facet_set: cfg.facet_selection(),
        vol_degree: cfg.quad_degree_volume,
        facet_degree: cfg.quad_degree_facet,
        stabilize,
        n_max: cfg.n_max,
    }
}

fn problem_for(cfg: &ExperimentConfig) -> Result<Problem> {
    let prob = problems::by_name(&cfg.problem, cfg.k, cfg.center, cfg.problem_radius())?;
    match (&cfg.shape, prob.name) {
        (Shape::Disk { .. }, "annulus_harmonic") => Err(Error::Config(
            "annulus_harmonic needs geometry.shape = annulus".into(),
        )),
        (Shape::Annulus { .. }, "disk_poisson") => Err(Error::Config(
            "disk_poisson needs geometry.shape = disk".into(),
        )),
        _ => Ok(prob),
    }
}

/// Error norms integrate non-polynomial exact fields: use the highest
/// supported cut-quadrature degree.
const ERROR_QUAD_DEGREE: usize = 4;

/// One row per mesh resolution: sizes, physical-domain errors, conditioning
/// and wall time, with observed convergence orders as a footer.
pub fn run_converge(cfg: &ExperimentConfig) -> Result<CsvDoc> {
    let prob = problem_for(cfg)?;
    let epsilon = cfg.epsilon_list[0];
    let mut doc = CsvDoc::new(
        cfg.resolved_lines(),
        &[
            "m",
            "h",
            "dofs_sigma",
            "dofs_eta",
            "dofs_harmonic",
            "err_eta",
            "err_d_eta",
            "err_sigma",
            "err_d_sigma",
            "err_lambda",
            "kappa1",
            "wall_s",
        ],
    );
    let mut history: Vec<(usize, [f64; 5])> = Vec::new();
    for &m in &cfg.m_list {
        let t0 = Instant::now();
        let disc = Discretization::build(build_mesh(cfg, m, epsilon)?, &params(cfg, cfg.stabilize))?;
        let (sys, sol, harmonic) = disc.solve(cfg.k, |p| (prob.f)(p))?;
        let errs = disc.errors(cfg.k, &sol, &harmonic, &prob.exact, ERROR_QUAD_DEGREE)?;
        let kappa = condition_estimate(&sys.matrix)?;
        let wall = t0.elapsed().as_secs_f64();
        let h = (cfg.bbox[2] - cfg.bbox[0]) / m as f64;
        doc.push_row(vec![
            Cell::Int(m),
            Cell::Num(h),
            Cell::Int(sys.n_sigma),
            Cell::Int(sys.n_eta),
            Cell::Int(sys.n_harmonic),
            Cell::Num(errs.eta),
            Cell::Num(errs.d_eta),
            Cell::Num(errs.sigma),
            Cell::Num(errs.d_sigma),
            Cell::Num(errs.lambda),
            Cell::Num(kappa),
            Cell::Num(wall),
        ]);
        history.push((m, [errs.eta, errs.d_eta, errs.sigma, errs.d_sigma, errs.lambda]));
    }
    for (slot, name) in ["eta", "d_eta", "sigma", "d_sigma", "lambda"]
        .iter()
        .enumerate()
    {
        let mut parts = Vec::new();
        for pair in history.windows(2) {
            let (m0, e0) = (pair[0].0, pair[0].1[slot]);
            let (m1, e1) = (pair[1].0, pair[1].1[slot]);
            if e0 > 0.0 && e1 > 0.0 {
                parts.push(format!("m{m0}->m{m1}={:.3}", (e0 / e1).log2()));
            }
        }
        if !parts.is_empty() {
            doc.footer.push(format!("order err_{name}: {}", parts.join(", ")));
        }
    }
    Ok(doc)
}

/// One row per level-set offset: stabilised and unstabilised condition
/// numbers (the latter may be infeasible) and the extreme generalized
/// eigenvalues of the stabilised and bare pencils, at the first resolution
/// of `m_list`.
pub fn run_sweep_cut(cfg: &ExperimentConfig) -> Result<CsvDoc> {
    let prob = problem_for(cfg)?;
    let m = cfg.m_list[0];
    let mut doc = CsvDoc::new(
        cfg.resolved_lines(),
        &[
            "epsilon",
            "kappa1_stab",
            "kappa1_unstab",
            "lambda_min_s",
            "lambda_max_s",
            "lambda_min_phys",
            "lambda_max_phys",
        ],
    );
    for &eps in &cfg.epsilon_list {
        let am = build_mesh(cfg, m, eps)?;
        let disc = Discretization::build(am.clone(), &params(cfg, true))?;
        let harmonic = disc.harmonic(cfg.k)?;
        let rhs = disc.rhs(cfg.k, |p| (prob.f)(p))?;
        let sys = disc.assemble(cfg.k, &harmonic, &rhs)?;
        let kappa_stab = condition_estimate(&sys.matrix)?;
        let (lmin_s, lmax_s) = disc.grams[cfg.k].stabilized_extremes()?;
        let (lmin_p, lmax_p) = disc.grams[cfg.k].physical_extremes()?;
        let kappa_unstab = (|| -> Result<f64> {
            let ud = Discretization::build(am, &params(cfg, false))?;
            let h = ud.harmonic(cfg.k)?;
            let rhs = ud.rhs(cfg.k, |p| (prob.f)(p))?;
            let sys = ud.assemble(cfg.k, &h, &rhs)?;
            condition_estimate(&sys.matrix)
        })();
        doc.push_row(vec![
            Cell::Num(eps),
            Cell::Num(kappa_stab),
            match kappa_unstab {
                Ok(k) => Cell::Num(k),
                Err(_) => Cell::Text("infeasible".into()),
            },
            Cell::Num(lmin_s),
            Cell::Num(lmax_s),
            Cell::Num(lmin_p),
            Cell::Num(lmax_p),
        ]);
    }
    Ok(doc)
}

/// Extreme generalized eigenvalues of `(M_s, M_active)` over every form
/// degree, resolution, offset and facet set, with per-family summaries.
pub fn run_norm_equiv(cfg: &ExperimentConfig) -> Result<CsvDoc> {
    let mut doc = CsvDoc::new(
        cfg.resolved_lines(),
        &["k", "m", "epsilon", "facet_set", "lambda_min", "lambda_max"],
    );
    let mut records: Vec<(usize, &'static str, f64, f64)> = Vec::new();
    for &m in &cfg.m_list {
        for &eps in &cfg.epsilon_list {
            let am = build_mesh(cfg, m, eps)?;
            for k in 0..=2usize {
                let sp = FESpace::build(&am, k)?;
                for (name, sel) in [
                    ("full", FacetSelection::Full),
                    ("macro", FacetSelection::Macro(cfg.delta)),
                ] {
                    let g = ghost_gram(
                        &sp,
                        &am,
                        cfg.eta,
                        sel,
                        cfg.quad_degree_volume,
                        cfg.quad_degree_facet,
                        cfg.stabilize,
                    )?;
                    let (lmin, lmax) = g.stabilized_extremes()?;
                    doc.push_row(vec![
                        Cell::Int(k),
                        Cell::Int(m),
                        Cell::Num(eps),
                        Cell::Text(name.into()),
                        Cell::Num(lmin),
                        Cell::Num(lmax),
                    ]);
                    records.push((k, name, lmin, lmax));
                }
            }
        }
    }
    for k in 0..=2usize {
        for name in ["full", "macro"] {
            let sel: Vec<_> = records.iter().filter(|r| r.0 == k && r.1 == name).collect();
            if sel.is_empty() {
                continue;
            }
            let cmin = sel.iter().map(|r| r.2).fold(f64::INFINITY, f64::min);
            let cmax = sel.iter().map(|r| r.2).fold(f64::NEG_INFINITY, f64::max);
            let dmin = sel.iter().map(|r| r.3).fold(f64::INFINITY, f64::min);
            let dmax = sel.iter().map(|r| r.3).fold(f64::NEG_INFINITY, f64::max);
            doc.footer.push(format!(
                "summary k={k} {name}: lambda_min in [{cmin:.12e}, {cmax:.12e}], lambda_max in [{dmin:.12e}, {dmax:.12e}]"
            ));
        }
    }
    let gmin = records.iter().map(|r| r.2).fold(f64::INFINITY, f64::min);
    let gmax = records.iter().map(|r| r.3).fold(f64::NEG_INFINITY, f64::max);
    doc.footer
        .push(format!("summary overall: min lambda_min = {gmin:.12e}, max lambda_max = {gmax:.12e}"));
    Ok(doc)
}

/// Solve once at the first resolution and offset; returns the run summary,
/// the sampled solution on a uniform grid (when a field dump is configured)
/// and the raw DOF values (when a DOF dump is configured).
pub fn run_solve(cfg: &ExperimentConfig) -> Result<(CsvDoc, Option<CsvDoc>, Option<CsvDoc>)> {
    let prob = problem_for(cfg)?;
    let m = cfg.m_list[0];
    let epsilon = cfg.epsilon_list[0];
    let disc = Discretization::build(build_mesh(cfg, m, epsilon)?, &params(cfg, cfg.stabilize))?;
    let (sys, sol, harmonic) = disc.solve(cfg.k, |p| (prob.f)(p))?;
    let errs = disc.errors(cfg.k, &sol, &harmonic, &prob.exact, ERROR_QUAD_DEGREE)?;
    let kappa = condition_estimate(&sys.matrix)?;
    let mut doc = CsvDoc::new(
        cfg.resolved_lines(),
        &[
            "m",
            "h",
            "dofs_sigma",
            "dofs_eta",
            "harmonic_dim",
            "lambda_coeff_norm",
            "eta_norm_s",
            "sigma_norm_s",
            "err_eta",
            "err_lambda",
            "residual",
            "kappa1",
        ],
    );
    let sigma_norm = if cfg.k >= 1 {
        disc.grams[cfg.k - 1].s_norm(&sol.sigma)
    } else {
        0.0
    };
    doc.push_row(vec![
        Cell::Int(m),
        Cell::Num((cfg.bbox[2] - cfg.bbox[0]) / m as f64),
        Cell::Int(sys.n_sigma),
        Cell::Int(sys.n_eta),
        Cell::Int(sys.n_harmonic),
        Cell::Num(sol.lambda_coeffs.norm()),
        Cell::Num(disc.grams[cfg.k].s_norm(&sol.eta)),
        Cell::Num(sigma_norm),
        Cell::Num(errs.eta),
        Cell::Num(errs.lambda),
        Cell::Num(sol.residual),
        Cell::Num(kappa),
    ]);

    let dump = if cfg.field_dump.is_some() {
        Some(sample_field(cfg, &disc, &sol.eta)?)
    } else {
        None
    };
    let dofs = if cfg.dof_dump.is_some() {
        Some(dof_values(cfg, &disc, &sol))
    } else {
        None
    };
    Ok((doc, dump, dofs))
}

/// Raw DOF values of the solution blocks, one row per degree of freedom,
/// keyed by the parent mesh entity (vertex, edge or triangle id).
fn dof_values(
    cfg: &ExperimentConfig,
    disc: &Discretization,
    sol: &cutfeec::hodge::MixedSolution,
) -> CsvDoc {
    let mut doc = CsvDoc::new(cfg.resolved_lines(), &["block", "entity", "value"]);
    if cfg.k >= 1 {
        let sp = &disc.spaces[cfg.k - 1];
        for (dof, &entity) in sp.dof_entity.iter().enumerate() {
            doc.push_row(vec![
                Cell::Text("sigma".into()),
                Cell::Int(entity),
                Cell::Num(sol.sigma[dof]),
            ]);
        }
    }
    let sp = &disc.spaces[cfg.k];
    for (dof, &entity) in sp.dof_entity.iter().enumerate() {
        doc.push_row(vec![
            Cell::Text("eta".into()),
            Cell::Int(entity),
            Cell::Num(sol.eta[dof]),
        ]);
    }
    doc
}

/// Sample the eta field's proxy components on a uniform grid over the box;
/// points outside the active mesh carry `in_active = 0` and zero components.
fn sample_field(
    cfg: &ExperimentConfig,
    disc: &Discretization,
    eta: &cutfeec::nalgebra::DVector<f64>,
) -> Result<CsvDoc> {
    let k = cfg.k;
    let comp_names: Vec<&str> = match k {
        0 => vec!["value"],
        1 => vec!["vx", "vy"],
        _ => vec!["density"],
    };
    let mut header = vec!["x", "y", "in_active"];
    header.extend(comp_names);
    let mut doc = CsvDoc::new(cfg.resolved_lines(), &header);
    let sp = &disc.spaces[k];
    let am = &disc.am;
    let n = cfg.grid;
    for iy in 0..n {
        for ix in 0..n {
            let x = cfg.bbox[0] + (cfg.bbox[2] - cfg.bbox[0]) * ix as f64 / (n - 1) as f64;
            let y = cfg.bbox[1] + (cfg.bbox[3] - cfg.bbox[1]) * iy as f64 / (n - 1) as f64;
            let hit = locate(am, [x, y]);
            let mut row = vec![Cell::Num(x), Cell::Num(y)];
            match hit {
                Some(slot) => {
                    let v = sp.eval_field(slot, eta, [x, y], 0, [0.0, 0.0]);
                    row.push(Cell::Int(1));
                    for &c in v.coeffs() {
                        row.push(Cell::Num(c));
                    }
                }
                None => {
                    row.push(Cell::Int(0));
                    for _ in 0..v_components(k) {
                        row.push(Cell::Num(0.0));
                    }
                }
            }
            doc.push_row(row);
        }
    }
    Ok(doc)
}

fn v_components(k: usize) -> usize {
    match k {
        1 => 2,
        _ => 1,
    }
}

/// Index of the active-element slot containing the point, if any.
fn locate(am: &ActiveMesh, p: [f64; 2]) -> Option<usize> {
    for (slot, &ti) in am.active.iter().enumerate() {
        let c = am.parent.tri_coords(ti);
        let det = (c[1][0] - c[0][0]) * (c[2][1] - c[0][1]) - (c[2][0] - c[0][0]) * (c[1][1] - c[0][1]);
        let l1 = ((c[1][0] - p[0]) * (c[2][1] - p[1]) - (c[2][0] - p[0]) * (c[1][1] - p[1])) / det;
        let l2 = ((c[2][0] - p[0]) * (c[0][1] - p[1]) - (c[0][0] - p[0]) * (c[2][1] - p[1])) / det;
        let l3 = 1.0 - l1 - l2;
        if l1 >= -1e-12 && l2 >= -1e-12 && l3 >= -1e-12 {
            return Some(slot);
        }
    }
    None
}
