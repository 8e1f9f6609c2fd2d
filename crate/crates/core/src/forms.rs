//! Pointwise exterior algebra in R^n for small n (n <= 4).
//!
//! An [`AltForm`] is the value of an alternating k-form at a single point:
//! a dense coefficient vector over the lexicographically ordered strictly
//! increasing multi-indices of degree k. All operations are exact up to
//! floating rounding; there are no tolerance parameters in this module.
//!
//! Facet-relative operations (trace, normal trace, tangential/normal parts,
//! facet Hodge star) are taken relative to a [`FacetFrame`], an orthonormal
//! basis `{normal, t_1, ..., t_{n-1}}` of R^n attached to a hyperplane. The
//! facet star carries the orientation sign of that basis so that the trace
//! identities `star_F (gamma_n w) = gamma (star w)` and
//! `gamma_n (star w) = (-1)^k star_F (gamma w)` hold for frames of either
//! handedness.
//!
//! Degenerate degrees are permitted: a form with k > n has an empty
//! coefficient vector and is identically zero. Traces of top-degree forms
//! produce such values instead of erroring.

use crate::error::{Error, Result};

/// Binomial coefficient for the small range used here.
pub(crate) fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num = 1usize;
    let mut den = 1usize;
    for i in 0..k {
        num *= n - i;
        den *= i + 1;
    }
    num / den
}

/// A strictly increasing tuple of coordinate indices (0-based, all < n).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(pub Vec<usize>);

impl MultiIndex {
    pub fn new(indices: Vec<usize>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        MultiIndex(indices)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// All degree-k multi-indices over {0,...,n-1} in lexicographic order.
    pub fn all(n: usize, k: usize) -> Vec<MultiIndex> {
        let mut out = Vec::with_capacity(binom(n, k));
        let mut idx: Vec<usize> = (0..k).collect();
        if k > n {
            return out;
        }
        loop {
            out.push(MultiIndex(idx.clone()));
            // advance to the next increasing tuple
            let mut i = k;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if idx[i] < n - (k - i) {
                    idx[i] += 1;
                    for j in i + 1..k {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    /// Position of this multi-index in the lexicographic enumeration.
    pub fn rank(&self, n: usize) -> usize {
        let k = self.degree();
        let mut rank = 0;
        let mut prev: isize = -1;
        for (i, &c) in self.0.iter().enumerate() {
            for j in (prev + 1) as usize..c {
                rank += binom(n - 1 - j, k - 1 - i);
            }
            prev = c as isize;
        }
        rank
    }
}

/// Sign of merging two disjoint increasing index sets by sorting their
/// concatenation: (-1)^{#inversions}.
fn merge_sign(a: &[usize], b: &[usize]) -> f64 {
    let mut inversions = 0usize;
    for &x in a {
        for &y in b {
            if y < x {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn det_small(m: &[Vec<f64>]) -> f64 {
    match m.len() {
        0 => 1.0,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        n => {
            // Laplace expansion along the first row; n <= 4 in practice.
            let mut det = 0.0;
            for j in 0..n {
                let minor: Vec<Vec<f64>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                det += sign * m[0][j] * det_small(&minor);
            }
            det
        }
    }
}

/// The value of an alternating k-form at a point of R^n.
#[derive(Debug, Clone, PartialEq)]
pub struct AltForm {
    n: usize,
    k: usize,
    coeffs: Vec<f64>,
}

impl AltForm {
    pub fn zero(n: usize, k: usize) -> Self {
        AltForm {
            n,
            k,
            coeffs: vec![0.0; binom(n, k)],
        }
    }

    /// A 0-form holding a single value.
    pub fn scalar(n: usize, value: f64) -> Self {
        AltForm {
            n,
            k: 0,
            coeffs: vec![value],
        }
    }

    /// The basis form dx^{idx} with unit coefficient.
    pub fn basis(n: usize, idx: &[usize]) -> Self {
        let mi = MultiIndex::new(idx.to_vec());
        let mut f = AltForm::zero(n, idx.len());
        let r = mi.rank(n);
        f.coeffs[r] = 1.0;
        f
    }

    /// The 1-form dual to `v` under the Euclidean metric.
    pub fn one_form(v: &[f64]) -> Self {
        AltForm {
            n: v.len(),
            k: 1,
            coeffs: v.to_vec(),
        }
    }

    pub fn from_coeffs(n: usize, k: usize, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != binom(n, k) {
            return Err(Error::Form(format!(
                "expected {} coefficients for a {k}-form in R^{n}, got {}",
                binom(n, k),
                coeffs.len()
            )));
        }
        Ok(AltForm { n, k, coeffs })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, idx: &[usize]) -> f64 {
        let mi = MultiIndex::new(idx.to_vec());
        self.coeffs[mi.rank(self.n)]
    }

    pub fn coeff_mut(&mut self, idx: &[usize]) -> &mut f64 {
        let mi = MultiIndex::new(idx.to_vec());
        let r = mi.rank(self.n);
        &mut self.coeffs[r]
    }

    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.norm_inf() <= tol
    }

    pub fn scale(&self, s: f64) -> AltForm {
        AltForm {
            n: self.n,
            k: self.k,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add(&self, other: &AltForm) -> AltForm {
        assert_eq!((self.n, self.k), (other.n, other.k), "form shape mismatch");
        AltForm {
            n: self.n,
            k: self.k,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &AltForm) -> AltForm {
        self.add(&other.scale(-1.0))
    }

    pub fn axpy(&mut self, s: f64, other: &AltForm) {
        assert_eq!((self.n, self.k), (other.n, other.k), "form shape mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += s * b;
        }
    }

    /// Wedge product. Errors on ambient-dimension mismatch or k+l > n.
    pub fn wedge(&self, other: &AltForm) -> Result<AltForm> {
        if self.n != other.n {
            return Err(Error::Form(format!(
                "wedge: ambient dimensions differ ({} vs {})",
                self.n, other.n
            )));
        }
        let (k, l) = (self.k, other.k);
        if k + l > self.n {
            return Err(Error::Form(format!(
                "wedge: degree {k} + {l} exceeds ambient dimension {}",
                self.n
            )));
        }
        let mut out = AltForm::zero(self.n, k + l);
        let idx_a = MultiIndex::all(self.n, k);
        let idx_b = MultiIndex::all(self.n, l);
        for (ia, mi_a) in idx_a.iter().enumerate() {
            let a = self.coeffs[ia];
            if a == 0.0 {
                continue;
            }
            'b: for (ib, mi_b) in idx_b.iter().enumerate() {
                let b = other.coeffs[ib];
                if b == 0.0 {
                    continue;
                }
                for x in &mi_a.0 {
                    if mi_b.0.contains(x) {
                        continue 'b;
                    }
                }
                let sign = merge_sign(&mi_a.0, &mi_b.0);
                let mut merged: Vec<usize> = mi_a.0.iter().chain(mi_b.0.iter()).copied().collect();
                merged.sort_unstable();
                let r = MultiIndex::new(merged).rank(self.n);
                out.coeffs[r] += sign * a * b;
            }
        }
        Ok(out)
    }

    /// Euclidean Hodge star with the standard orientation of R^n. A
    /// degenerate input (k > n, identically zero) stars to the zero 0-form.
    pub fn star(&self) -> AltForm {
        let n = self.n;
        if self.k > n {
            return AltForm::zero(n, 0);
        }
        let mut out = AltForm::zero(n, n - self.k);
        for (i, mi) in MultiIndex::all(n, self.k).iter().enumerate() {
            let comp: Vec<usize> = (0..n).filter(|j| !mi.0.contains(j)).collect();
            let sign = merge_sign(&mi.0, &comp);
            let r = MultiIndex::new(comp).rank(n);
            out.coeffs[r] = sign * self.coeffs[i];
        }
        out
    }

    /// Pointwise inner product: the coefficient of `self ^ star(other)` on
    /// the volume index, which for the orthonormal basis is the dot product
    /// of coefficient vectors.
    pub fn inner(&self, other: &AltForm) -> Result<f64> {
        if self.n != other.n || self.k != other.k {
            return Err(Error::Form(format!(
                "inner: shape mismatch ({},{}) vs ({},{})",
                self.n, self.k, other.n, other.k
            )));
        }
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a * b)
            .sum())
    }

    /// Contraction (interior product) `v -| self`.
    pub fn contract(&self, v: &[f64]) -> Result<AltForm> {
        if self.k == 0 {
            return Err(Error::Form("contract: cannot contract a 0-form".into()));
        }
        assert_eq!(v.len(), self.n, "contract: vector dimension mismatch");
        let mut out = AltForm::zero(self.n, self.k - 1);
        for (i, mi) in MultiIndex::all(self.n, self.k).iter().enumerate() {
            let a = self.coeffs[i];
            if a == 0.0 {
                continue;
            }
            for (pos, &ci) in mi.0.iter().enumerate() {
                let rest: Vec<usize> = mi
                    .0
                    .iter()
                    .enumerate()
                    .filter(|&(p, _)| p != pos)
                    .map(|(_, &x)| x)
                    .collect();
                let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
                let r = MultiIndex::new(rest).rank(self.n);
                out.coeffs[r] += sign * v[ci] * a;
            }
        }
        Ok(out)
    }

    /// Evaluate the alternating form on k vectors.
    pub fn eval(&self, vectors: &[&[f64]]) -> f64 {
        assert_eq!(vectors.len(), self.k, "eval: wrong number of vectors");
        let mut total = 0.0;
        for (i, mi) in MultiIndex::all(self.n, self.k).iter().enumerate() {
            let a = self.coeffs[i];
            if a == 0.0 {
                continue;
            }
            let minor: Vec<Vec<f64>> = mi
                .0
                .iter()
                .map(|&row| vectors.iter().map(|v| v[row]).collect())
                .collect();
            total += a * det_small(&minor);
        }
        total
    }

    /// Pullback along the linear map sending the j-th coordinate direction
    /// of R^m to `vectors[j]`.
    pub fn pullback(&self, vectors: &[&[f64]]) -> AltForm {
        let m = vectors.len();
        let mut out = AltForm::zero(m, self.k);
        if self.k > m {
            return out; // identically zero in the smaller space
        }
        for (r, mi) in MultiIndex::all(m, self.k).iter().enumerate() {
            let chosen: Vec<&[f64]> = mi.0.iter().map(|&j| vectors[j]).collect();
            out.coeffs[r] = self.eval(&chosen);
        }
        out
    }
}

/// Orthonormal frame adapted to a hyperplane facet: a unit normal and n-1
/// orthonormal tangents. The orientation sign of the ordered basis
/// `(normal, t_1, ..., t_{n-1})` is recorded and used by the facet star.
#[derive(Debug, Clone)]
pub struct FacetFrame {
    pub normal: Vec<f64>,
    pub tangents: Vec<Vec<f64>>,
    pub origin: Vec<f64>,
    orientation: f64,
}

impl FacetFrame {
    pub fn new(normal: Vec<f64>, tangents: Vec<Vec<f64>>, origin: Vec<f64>) -> Result<Self> {
        let n = normal.len();
        if tangents.len() != n - 1 {
            return Err(Error::Form(format!(
                "facet frame in R^{n} needs {} tangents, got {}",
                n - 1,
                tangents.len()
            )));
        }
        let mut basis: Vec<&[f64]> = vec![&normal];
        for t in &tangents {
            basis.push(t);
        }
        for (i, u) in basis.iter().enumerate() {
            for (j, v) in basis.iter().enumerate() {
                let dot: f64 = u.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                if (dot - expect).abs() > 1e-10 {
                    return Err(Error::Form(format!(
                        "facet frame not orthonormal: <b{i},b{j}> = {dot:.3e}"
                    )));
                }
            }
        }
        let cols: Vec<Vec<f64>> = (0..n)
            .map(|row| basis.iter().map(|b| b[row]).collect())
            .collect();
        let orientation = det_small(&cols).signum();
        Ok(FacetFrame {
            normal,
            tangents,
            origin,
            orientation,
        })
    }

    /// Deterministic frame from a 2D facet segment: the tangent follows the
    /// vertex order `p -> q`, the normal is supplied by the caller.
    pub fn from_segment(p: [f64; 2], q: [f64; 2], normal: [f64; 2]) -> Result<Self> {
        let len = ((q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2)).sqrt();
        if len == 0.0 {
            return Err(Error::Form("degenerate facet segment".into()));
        }
        let t = vec![(q[0] - p[0]) / len, (q[1] - p[1]) / len];
        FacetFrame::new(normal.to_vec(), vec![t], p.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    /// +1 if `(normal, tangents)` is positively oriented in R^n, else -1.
    pub fn orientation(&self) -> f64 {
        self.orientation
    }

    fn tangent_refs(&self) -> Vec<&[f64]> {
        self.tangents.iter().map(|t| t.as_slice()).collect()
    }
}

/// Trace (pullback onto the facet): a k-form on the facet's n-1 coordinates.
/// For k = n the result is the degenerate zero form.
pub fn trace(a: &AltForm, frame: &FacetFrame) -> AltForm {
    a.pullback(&frame.tangent_refs())
}

/// Normal trace: trace of the contraction with the facet normal; maps
/// k-forms to (k-1)-forms on the facet. The normal trace of a 0-form is the
/// zero 0-form on the facet.
pub fn normal_trace(a: &AltForm, frame: &FacetFrame) -> AltForm {
    if a.degree() == 0 {
        return AltForm::zero(frame.dim() - 1, 0);
    }
    let contracted = a.contract(&frame.normal).expect("degree >= 1");
    trace(&contracted, frame)
}

/// Hodge star on the facet, in the facet's tangent coordinates, carrying the
/// orientation sign of the frame.
pub fn facet_star(a: &AltForm, frame: &FacetFrame) -> AltForm {
    a.star().scale(frame.orientation())
}

/// Split a form into its tangential and normal parts relative to the facet;
/// both summands live in the ambient space and `a = a_par + a_perp`.
/// The normal part carries exactly the `dt ^ dx^J` terms of the frame-adapted
/// expansion, so `trace(a_perp) = 0` and `normal_trace(a_par) = 0`.
pub fn split_parts(a: &AltForm, frame: &FacetFrame) -> (AltForm, AltForm) {
    let n = a.dim();
    let k = a.degree();
    let mut perp = AltForm::zero(n, k);
    if k >= 1 {
        // coefficients on dt ^ dx^J are the normal-trace coefficients
        let gamma_n = normal_trace(a, frame);
        let n_flat = AltForm::one_form(&frame.normal);
        for (r, mi) in MultiIndex::all(n - 1, k - 1).iter().enumerate() {
            let c = gamma_n.coeffs()[r];
            if c == 0.0 {
                continue;
            }
            let mut term = n_flat.clone();
            for &j in &mi.0 {
                term = term
                    .wedge(&AltForm::one_form(&frame.tangents[j]))
                    .expect("frame wedge");
            }
            perp.axpy(c, &term);
        }
    }
    let par = a.sub(&perp);
    (par, perp)
}

/// Vector-proxy value of a form in R^3 (or R^2 components for internal use).
#[derive(Debug, Clone, PartialEq)]
pub enum Proxy3 {
    Scalar(f64),
    Vector([f64; 3]),
}

/// Convert a form in R^3 to its vector proxy:
/// degree 0 and 3 map to scalars, degree 1 maps to its coefficient vector,
/// degree 2 maps `a dx12 + b dx13 + c dx23` to `(c, -b, a)`.
pub fn to_proxy3(a: &AltForm) -> Result<Proxy3> {
    if a.dim() != 3 {
        return Err(Error::Form(format!(
            "vector proxies require R^3, got R^{}",
            a.dim()
        )));
    }
    let c = a.coeffs();
    Ok(match a.degree() {
        0 => Proxy3::Scalar(c[0]),
        1 => Proxy3::Vector([c[0], c[1], c[2]]),
        2 => Proxy3::Vector([c[2], -c[1], c[0]]),
        3 => Proxy3::Scalar(c[0]),
        k => return Err(Error::Form(format!("no proxy for degree {k} in R^3"))),
    })
}

/// Inverse of [`to_proxy3`].
pub fn from_proxy3(k: usize, proxy: &Proxy3) -> Result<AltForm> {
    match (k, proxy) {
        (0, Proxy3::Scalar(q)) => Ok(AltForm::scalar(3, *q)),
        (3, Proxy3::Scalar(r)) => AltForm::from_coeffs(3, 3, vec![*r]),
        (1, Proxy3::Vector(v)) => AltForm::from_coeffs(3, 1, v.to_vec()),
        (2, Proxy3::Vector(w)) => AltForm::from_coeffs(3, 2, vec![w[2], -w[1], w[0]]),
        _ => Err(Error::Form(format!("proxy kind does not match degree {k}"))),
    }
}
