//! Spectrum of the Laplace–Beltrami operator `Δ_s` on the boundary.
//!
//! Every finite path `η` (and the empty path) carries an eigenvalue with a
//! `(D-1)`-dimensional eigenspace spanned by normalized differences of the
//! indicators of sibling cylinders `[ηe]`.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{int, pow_i, to_f64, Rational};
use crate::function::CylinderFunction;
use crate::path_space::{paths_up_to, Path};
use crate::weights::WeightScheme;

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralParams {
    pub s: f64,
    pub weight: WeightScheme,
}

impl SpectralParams {
    pub fn new(s: f64, weight: WeightScheme) -> Self {
        SpectralParams { s, weight }
    }

    pub fn d(&self) -> usize {
        self.weight.d()
    }

    /// `s` as an integer, when it is one; integer `s` keeps `G_s` rational.
    pub fn integer_s(&self) -> Option<i64> {
        (self.s.fract() == 0.0 && self.s.abs() < 1e9).then_some(self.s as i64)
    }
}

/// `Σ_{e≠e'} μ[ξe] μ[ξe']`, summed over ordered pairs of distinct children.
fn sibling_pair_sum(weight: &WeightScheme, xi: &Path) -> Rational {
    let mu = weight.measure();
    let children: Vec<Rational> = (0..weight.d()).map(|e| mu.of(&xi.child(e))).collect();
    let mut sum = Rational::zero();
    for (e, a) in children.iter().enumerate() {
        for (f, b) in children.iter().enumerate() {
            if e != f {
                sum += a * b;
            }
        }
    }
    sum
}

/// `G_s(ξ) = ½ w(ξ)^{2-s} Σ_{e≠e'} μ[ξe] μ[ξe']` exactly, when `s` is an integer.
pub fn g_s_exact(params: &SpectralParams, xi: &Path) -> Option<Rational> {
    let s = params.integer_s()?;
    let w = params.weight.weight(xi);
    Some(pow_i(&w, 2 - s) * sibling_pair_sum(&params.weight, xi) / int(2))
}

/// `G_s(ξ)` from the general formula, for any real `s`.
pub fn g_s(params: &SpectralParams, xi: &Path) -> f64 {
    if let Some(g) = g_s_exact(params, xi) {
        return to_f64(&g);
    }
    let w = to_f64(&params.weight.weight(xi));
    0.5 * w.powf(2.0 - params.s) * to_f64(&sibling_pair_sum(&params.weight, xi))
}

/// `G_s(ξ)` from the family-specific closed forms:
/// `(D-1) D^{s(|ξ|+1)} / (2 D^{4|ξ|+5})` for self-similar weights with `λ = D`,
/// and `r^{4p+1-ps} (1-r)^{4q+1-qs}` for two-vertex product weights, where
/// `p` and `q` count the occurrences of each vertex in `ξ`.
pub fn g_s_closed(params: &SpectralParams, xi: &Path) -> Result<f64> {
    let s = params.s;
    match &params.weight {
        w if w.is_self_similar_with_lambda_d() => {
            let d = w.d() as f64;
            let n = xi.len() as f64;
            Ok((d - 1.0) * d.powf(s * (n + 1.0)) / (2.0 * d.powf(4.0 * n + 5.0)))
        }
        WeightScheme::Product { r } if r.len() == 2 => {
            let r = to_f64(&r[0]);
            let (p, q) = (xi.count(0) as f64, xi.count(1) as f64);
            Ok(r.powf(4.0 * p + 1.0 - p * s) * (1.0 - r).powf(4.0 * q + 1.0 - q * s))
        }
        _ => Err(Error::Unsupported(
            "closed-form G_s needs λ = D or a two-vertex product weight".into(),
        )),
    }
}

/// `Σ_{k=-1}^{|η|-1} (μ[η[0,k+1]] - μ[η[0,k]]) / G_s(η[0,k]) - μ[η] / G_s(η)` exactly,
/// when `s` is an integer.
pub fn eigenvalue_general_exact(params: &SpectralParams, eta: &Path) -> Option<Rational> {
    params.integer_s()?;
    let mu = params.weight.measure();
    let n = eta.len();
    let mut total = Rational::zero();
    for k in -1..n {
        let head = eta.prefix(k);
        let step = mu.of(&eta.prefix(k + 1)) - mu.of(&head);
        total += step / g_s_exact(params, &head)?;
    }
    Some(total - mu.of(eta) / g_s_exact(params, eta)?)
}

/// The eigenvalue attached to a nonempty path by the general summation formula.
pub fn eigenvalue_general(params: &SpectralParams, eta: &Path) -> f64 {
    if let Some(v) = eigenvalue_general_exact(params, eta) {
        return to_f64(&v);
    }
    let mu = params.weight.measure();
    let n = eta.len();
    let mut total = 0.0;
    for k in -1..n {
        let head = eta.prefix(k);
        let step = to_f64(&(mu.of(&eta.prefix(k + 1)) - mu.of(&head)));
        total += step / g_s(params, &head);
    }
    total - to_f64(&mu.of(eta)) / g_s(params, eta)
}

/// The eigenvalue from the closed forms: the self-similar family with `λ = D`
/// (any `D`) and two-vertex product weights.
pub fn eigenvalue_closed(params: &SpectralParams, eta: &Path) -> Result<f64> {
    let s = params.s;
    let n = eta.len();
    match &params.weight {
        w if w.is_self_similar_with_lambda_d() => {
            let d = w.d() as f64;
            let nf = n as f64;
            let x = d.powf(3.0 - s);
            // x (1 - x^n) / (1 - x) tends to n as s -> 3.
            let geometric = if (x - 1.0).abs() < 1e-12 {
                nf
            } else {
                x * (1.0 - x.powf(nf)) / (1.0 - x)
            };
            Ok(-2.0
                - 2.0 * geometric
                - 2.0 * d.powf(3.0 * nf + 4.0) / ((d - 1.0) * d.powf(s * (nf + 1.0))))
        }
        WeightScheme::Product { r } if r.len() == 2 => {
            let rv: Vec<f64> = r.iter().map(to_f64).collect();
            let g_root = rv[0] * rv[1];
            let v = eta.vertices();
            let mut mu = rv[v[0]];
            let mut total = (rv[v[0]] - 1.0) / g_root;
            for &next in &v[1..] {
                total += mu.powf(s - 3.0) * (rv[next] - 1.0) / g_root;
                mu *= rv[next];
            }
            Ok(total - mu.powf(s - 3.0) / g_root)
        }
        WeightScheme::Product { .. } => Err(Error::Unsupported(
            "closed-form eigenvalues for product weights need D = 2".into(),
        )),
        WeightScheme::SelfSimilar { .. } => Err(Error::Unsupported(
            "closed-form eigenvalues for self-similar weights need λ = D".into(),
        )),
    }
}

/// The eigenvalue of the empty path.
///
/// The printed value is `1/G_s(∘)` (so `2D/(D-1)` in the even case), which is
/// positive, while the summation convention used for every other path gives
/// `-1/G_s(∘)`. Both are kept.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootEigenvalue {
    #[serde(skip)]
    pub exact: Rational,
    pub printed: f64,
    pub general: f64,
    pub sign_flag: bool,
}

pub fn eigenvalue_root(params: &SpectralParams) -> RootEigenvalue {
    // G_s(∘) does not depend on s because w(∘) = 1.
    let g = sibling_pair_sum(&params.weight, &Path::empty()) / int(2);
    let exact = g.recip();
    let printed = to_f64(&exact);
    RootEigenvalue {
        exact,
        printed,
        general: -printed,
        sign_flag: true,
    }
}

/// The `D-1` consecutive differences `χ[ηℓ]/μ[ηℓ] - χ[η(ℓ+1)]/μ[η(ℓ+1)]` at level `|η|+1`.
pub fn eigenspace_basis(params: &SpectralParams, eta: &Path) -> Vec<CylinderFunction<Rational>> {
    let d = params.d();
    let mu = params.weight.measure();
    let level = (eta.len() + 1) as usize;
    (0..d - 1)
        .map(|l| {
            let (a, b) = (eta.child(l), eta.child(l + 1));
            let mut f = CylinderFunction::zeros(d, level);
            *f.coeff_mut(&a) = mu.of(&a).recip();
            *f.coeff_mut(&b) = -mu.of(&b).recip();
            f
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaSource {
    ClosedEven,
    #[serde(rename = "closed_O2_uneven")]
    ClosedO2Uneven,
    GeneralSum,
}

impl FormulaSource {
    fn for_weight(weight: &WeightScheme) -> Self {
        match weight {
            w if w.is_self_similar_with_lambda_d() => FormulaSource::ClosedEven,
            WeightScheme::Product { r } if r.len() == 2 => FormulaSource::ClosedO2Uneven,
            _ => FormulaSource::GeneralSum,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenRecord {
    pub path: Path,
    pub eigen_closed: Option<f64>,
    pub eigen_general: f64,
    pub abs_diff: Option<f64>,
    pub dim: usize,
    pub formula_source: FormulaSource,
    /// Set on the empty path only: the closed value carries the opposite sign
    /// to the summation convention.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign_flag: Option<bool>,
    #[serde(skip)]
    pub eigen_general_exact: Option<Rational>,
    #[serde(skip)]
    pub basis: Vec<CylinderFunction<Rational>>,
}

fn eigen_record(params: &SpectralParams, path: &Path) -> EigenRecord {
    let basis = eigenspace_basis(params, path);
    let formula_source = FormulaSource::for_weight(&params.weight);
    if path.is_empty() {
        let root = eigenvalue_root(params);
        return EigenRecord {
            path: path.clone(),
            eigen_closed: Some(root.printed),
            eigen_general: root.general,
            abs_diff: Some((root.printed.abs() - root.general.abs()).abs()),
            dim: basis.len(),
            formula_source,
            sign_flag: Some(root.sign_flag),
            eigen_general_exact: Some(-root.exact),
            basis,
        };
    }
    let eigen_general_exact = eigenvalue_general_exact(params, path);
    let eigen_general = eigen_general_exact
        .as_ref()
        .map_or_else(|| eigenvalue_general(params, path), to_f64);
    let eigen_closed = eigenvalue_closed(params, path).ok();
    EigenRecord {
        path: path.clone(),
        eigen_closed,
        eigen_general,
        abs_diff: eigen_closed.map(|c| (c - eigen_general).abs()),
        dim: basis.len(),
        formula_source,
        sign_flag: None,
        eigen_general_exact,
        basis,
    }
}

/// Records for ∘ and every path of length at most `depth`, shortest first and
/// lexicographic within a length.
pub fn spectrum_table(params: &SpectralParams, depth: usize) -> Vec<EigenRecord> {
    paths_up_to(params.d(), depth as isize)
        .iter()
        .map(|p| eigen_record(params, p))
        .collect()
}

impl EigenRecord {
    pub fn is_root(&self) -> bool {
        self.path.is_empty()
    }
}

impl RootEigenvalue {
    pub fn is_positive(&self) -> bool {
        self.exact > Rational::zero()
    }
}
