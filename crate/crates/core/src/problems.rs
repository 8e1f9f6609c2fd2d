//! Manufactured problems with closed-form fields, used by the convergence
//! experiments and the verification suites.

use crate::error::{Error, Result};
use crate::forms::AltForm;
use crate::quadrature::Point2;

pub type Field = Box<dyn Fn(Point2) -> AltForm + Sync + Send>;

/// Closed-form solution fields of a mixed problem. Entries that do not
/// exist for the degree (sigma below degree 1, d eta at the top degree) are
/// `None` and their errors are reported as zero.
pub struct ExactFields {
    pub eta: Field,
    pub d_eta: Option<Field>,
    pub sigma: Option<Field>,
    pub d_sigma: Option<Field>,
    pub lambda: Field,
}

/// A manufactured right-hand side with its exact solution.
pub struct Problem {
    pub name: &'static str,
    pub k: usize,
    pub f: Field,
    pub exact: ExactFields,
}

/// Mixed Poisson on the disk (top degree k = 2): f = 4 with the potential
/// `u = R^2 - |x - c|^2` vanishing on the circle; the flux is the rotated
/// gradient `sigma = (du/dy, -du/dx)` and `d sigma = 4`.
pub fn disk_poisson(center: [f64; 2], radius: f64) -> Problem {
    let c = center;
    Problem {
        name: "disk_poisson",
        k: 2,
        f: Box::new(|_| AltForm::from_coeffs(2, 2, vec![4.0]).expect("valid")),
        exact: ExactFields {
            eta: Box::new(move |p| {
                let u = radius * radius - (p[0] - c[0]).powi(2) - (p[1] - c[1]).powi(2);
                AltForm::from_coeffs(2, 2, vec![u]).expect("valid")
            }),
            d_eta: None,
            sigma: Some(Box::new(move |p| {
                AltForm::from_coeffs(2, 1, vec![-2.0 * (p[1] - c[1]), 2.0 * (p[0] - c[0])])
                    .expect("valid")
            })),
            d_sigma: Some(Box::new(|_| {
                AltForm::from_coeffs(2, 2, vec![4.0]).expect("valid")
            })),
            lambda: Box::new(|_| AltForm::zero(2, 2)),
        },
    }
}

/// Hodge-Laplace on the annulus (k = 1) with the harmonic right-hand side
/// `f = (-y', x') / |x - c|^2`: the continuous solution is `eta = 0`,
/// `sigma = 0` and `lambda = f`.
pub fn annulus_harmonic(center: [f64; 2]) -> Problem {
    let c = center;
    let harm = move |p: Point2| {
        let x = p[0] - c[0];
        let y = p[1] - c[1];
        let r2 = x * x + y * y;
        AltForm::from_coeffs(2, 1, vec![-y / r2, x / r2]).expect("valid")
    };
    Problem {
        name: "annulus_harmonic",
        k: 1,
        f: Box::new(harm),
        exact: ExactFields {
            eta: Box::new(|_| AltForm::zero(2, 1)),
            d_eta: Some(Box::new(|_| AltForm::zero(2, 2))),
            sigma: Some(Box::new(|_| AltForm::zero(2, 0))),
            d_sigma: Some(Box::new(|_| AltForm::zero(2, 1))),
            lambda: Box::new(harm),
        },
    }
}

/// Zero right-hand side of any degree; the exact solution vanishes.
pub fn zero_problem(k: usize) -> Result<Problem> {
    if k > 2 {
        return Err(Error::Config(format!("degree {k} out of range")));
    }
    Ok(Problem {
        name: "zero",
        k,
        f: Box::new(move |_| AltForm::zero(2, k)),
        exact: ExactFields {
            eta: Box::new(move |_| AltForm::zero(2, k)),
            d_eta: if k <= 1 {
                Some(Box::new(move |_| AltForm::zero(2, k + 1)))
            } else {
                None
            },
            sigma: if k >= 1 {
                Some(Box::new(move |_| AltForm::zero(2, k - 1)))
            } else {
                None
            },
            d_sigma: if k >= 1 {
                Some(Box::new(move |_| AltForm::zero(2, k)))
            } else {
                None
            },
            lambda: Box::new(move |_| AltForm::zero(2, k)),
        },
    })
}

/// Look up a problem by its config identifier.
pub fn by_name(name: &str, k: usize, center: [f64; 2], radius: f64) -> Result<Problem> {
    match name {
        "disk_poisson" => {
            if k != 2 {
                return Err(Error::Config(format!(
                    "problem disk_poisson is posed at degree 2, config says k = {k}"
                )));
            }
            Ok(disk_poisson(center, radius))
        }
        "annulus_harmonic" => {
            if k != 1 {
                return Err(Error::Config(format!(
                    "problem annulus_harmonic is posed at degree 1, config says k = {k}"
                )));
            }
            Ok(annulus_harmonic(center))
        }
        "zero" => zero_problem(k),
        other => Err(Error::Config(format!("unknown problem '{other}'"))),
    }
}
