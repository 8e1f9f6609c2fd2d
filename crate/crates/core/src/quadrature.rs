//! Quadrature rules on triangles, on the negative region of a linearised
//! level set inside a triangle, and on facet segments.
//!
//! Triangle rules are symmetric Gauss rules with positive weights up to
//! exactness degree 4. Cut rules linearise the level set from its vertex
//! values, split the sub-region `{phi_lin < 0}` into at most two triangles
//! and reuse the triangle rules, so classification and integration agree.
//! Facet rules are Gauss-Legendre rules on the whole segment.

use crate::error::{Error, Result};

pub type Point2 = [f64; 2];

/// Points and positive weights in physical coordinates; weights sum to the
/// measure of the integration region.
#[derive(Debug, Clone, Default)]
pub struct QuadRule {
    pub points: Vec<Point2>,
    pub weights: Vec<f64>,
    /// Highest polynomial degree integrated exactly.
    pub degree: usize,
}

impl QuadRule {
    pub fn empty(degree: usize) -> Self {
        QuadRule {
            points: Vec::new(),
            weights: Vec::new(),
            degree,
        }
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate(&self, f: impl Fn(Point2) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| w * f(*p))
            .sum()
    }

    fn merge(&mut self, other: QuadRule) {
        self.points.extend(other.points);
        self.weights.extend(other.weights);
    }
}

/// Barycentric points and reference weights (summing to 1) for the unit
/// reference triangle; all weights positive.
fn reference_rule(degree: usize) -> Result<(Vec<[f64; 3]>, Vec<f64>)> {
    match degree {
        1 => Ok((vec![[1.0 / 3.0; 3]], vec![1.0])),
        2 => {
            let a = 2.0 / 3.0;
            let b = 1.0 / 6.0;
            Ok((
                vec![[a, b, b], [b, a, b], [b, b, a]],
                vec![1.0 / 3.0; 3],
            ))
        }
        // Dunavant order-4 rule (6 points, positive weights); also used for
        // degree-3 requests to keep all weights positive.
        3 | 4 => {
            let a1 = 0.108_103_018_168_070;
            let b1 = 0.445_948_490_915_965;
            let w1 = 0.223_381_589_678_011;
            let a2 = 0.816_847_572_980_459;
            let b2 = 0.091_576_213_509_771;
            let w2 = 0.109_951_743_655_322;
            Ok((
                vec![
                    [a1, b1, b1],
                    [b1, a1, b1],
                    [b1, b1, a1],
                    [a2, b2, b2],
                    [b2, a2, b2],
                    [b2, b2, a2],
                ],
                vec![w1, w1, w1, w2, w2, w2],
            ))
        }
        d => Err(Error::Config(format!(
            "unsupported triangle quadrature degree {d} (supported: 1..=4)"
        ))),
    }
}

fn triangle_area(t: &[Point2; 3]) -> f64 {
    0.5 * ((t[1][0] - t[0][0]) * (t[2][1] - t[0][1]) - (t[2][0] - t[0][0]) * (t[1][1] - t[0][1]))
}

/// Quadrature on a physical triangle, exact for polynomials up to `degree`.
pub fn triangle_rule(tri: &[Point2; 3], degree: usize) -> Result<QuadRule> {
    let (bary, wts) = reference_rule(degree)?;
    let area = triangle_area(tri).abs();
    let points = bary
        .iter()
        .map(|l| {
            [
                l[0] * tri[0][0] + l[1] * tri[1][0] + l[2] * tri[2][0],
                l[0] * tri[0][1] + l[1] * tri[1][1] + l[2] * tri[2][1],
            ]
        })
        .collect();
    let weights = wts.iter().map(|w| w * area).collect();
    Ok(QuadRule {
        points,
        weights,
        degree,
    })
}

/// Quadrature over `{phi_lin < 0}` inside the triangle, where `phi_lin` is
/// the linear interpolant of the vertex values `phi`. The sub-region is a
/// triangle, a quadrilateral (split in two), all of the triangle, or empty;
/// degenerate zero-measure intersections yield empty rules.
pub fn cut_rule(tri: &[Point2; 3], phi: &[f64; 3], degree: usize) -> Result<QuadRule> {
    let neg: Vec<usize> = (0..3).filter(|&i| phi[i] < 0.0).collect();
    match neg.len() {
        0 => Ok(QuadRule::empty(degree)),
        3 => triangle_rule(tri, degree),
        _ => {
            let pos: Vec<usize> = (0..3).filter(|&i| phi[i] >= 0.0).collect();
            // zero crossing on the segment from a negative to a nonnegative vertex
            let crossing = |i: usize, j: usize| -> Point2 {
                let t = phi[i] / (phi[i] - phi[j]);
                [
                    tri[i][0] + t * (tri[j][0] - tri[i][0]),
                    tri[i][1] + t * (tri[j][1] - tri[i][1]),
                ]
            };
            let mut rule = QuadRule::empty(degree);
            if neg.len() == 1 {
                let a = neg[0];
                let q1 = crossing(a, pos[0]);
                let q2 = crossing(a, pos[1]);
                let sub = [tri[a], q1, q2];
                if triangle_area(&sub).abs() > 0.0 {
                    rule.merge(triangle_rule(&sub, degree)?);
                }
            } else {
                // two negative vertices: quadrilateral (n1, n2, q2, q1)
                let (a, b, p) = (neg[0], neg[1], pos[0]);
                let q1 = crossing(a, p);
                let q2 = crossing(b, p);
                for sub in [[tri[a], tri[b], q2], [tri[a], q2, q1]] {
                    if triangle_area(&sub).abs() > 0.0 {
                        rule.merge(triangle_rule(&sub, degree)?);
                    }
                }
            }
            Ok(rule)
        }
    }
}

/// [`cut_rule`] with the vertex values taken from a level-set evaluator.
pub fn cut_rule_level_set<F>(tri: &[Point2; 3], phi: F, degree: usize) -> Result<QuadRule>
where
    F: Fn(Point2) -> f64,
{
    let values = [phi(tri[0]), phi(tri[1]), phi(tri[2])];
    cut_rule(tri, &values, degree)
}

/// Gauss-Legendre abscissae on [-1, 1] exact to the requested degree.
fn gauss_segment(degree: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    match degree {
        0 | 1 => Ok((vec![0.0], vec![2.0])),
        2 | 3 => {
            let x = 1.0 / 3.0_f64.sqrt();
            Ok((vec![-x, x], vec![1.0, 1.0]))
        }
        4 | 5 => {
            let x = (3.0 / 5.0_f64).sqrt();
            Ok((
                vec![-x, 0.0, x],
                vec![5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0],
            ))
        }
        6 | 7 => {
            let a = (3.0 / 7.0 - 2.0 / 7.0 * (6.0 / 5.0_f64).sqrt()).sqrt();
            let b = (3.0 / 7.0 + 2.0 / 7.0 * (6.0 / 5.0_f64).sqrt()).sqrt();
            let wa = (18.0 + 30.0_f64.sqrt()) / 36.0;
            let wb = (18.0 - 30.0_f64.sqrt()) / 36.0;
            Ok((vec![-b, -a, a, b], vec![wb, wa, wa, wb]))
        }
        d => Err(Error::Config(format!(
            "unsupported facet quadrature degree {d} (supported: 0..=7)"
        ))),
    }
}

/// Quadrature over the whole facet segment from `p` to `q`.
pub fn facet_rule(p: Point2, q: Point2, degree: usize) -> Result<QuadRule> {
    let (xs, ws) = gauss_segment(degree)?;
    let len = ((q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2)).sqrt();
    let mid = [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0];
    let half = [(q[0] - p[0]) / 2.0, (q[1] - p[1]) / 2.0];
    let points = xs
        .iter()
        .map(|x| [mid[0] + x * half[0], mid[1] + x * half[1]])
        .collect();
    let weights = ws.iter().map(|w| w * len / 2.0).collect();
    Ok(QuadRule {
        points,
        weights,
        degree,
    })
}
