//! Finite-dimensional subspaces of locally constant functions: rank, span
//! equality, cross-Gram orthogonality, and the check that each wavelet detail
//! space is the direct sum of the Laplacian eigenspaces of the same level.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{to_f64, Rational};
use crate::function::{CylinderFunction, Generator};
use crate::path_space::{paths_up_to, Path};
use crate::spectral::{eigenspace_basis, SpectralParams};
use crate::wavelets::{
    scaling_basis, uneven_constant, uneven_wavelet_basis, wavelet_basis, ComplementBasis, OnbMode,
};
use crate::weights::{CylinderMeasure, WeightScheme};

/// Relative singular-value threshold for numerical rank.
pub const FLOAT_RANK_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NumericMode {
    ExactRational,
    Float,
}

/// A finite list of generators at a common level.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    d: usize,
    level: usize,
    generators: Vec<Generator>,
}

impl Subspace {
    /// Refines every generator to the finest level present.
    pub fn new(d: usize, generators: Vec<Generator>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.d() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: g.d(),
            });
        }
        let level = generators.iter().map(Generator::level).max().unwrap_or(0);
        let generators = generators
            .iter()
            .map(|g| g.refine(level))
            .collect::<Result<_>>()?;
        Ok(Subspace {
            d,
            level,
            generators,
        })
    }

    pub fn from_rational(d: usize, generators: Vec<CylinderFunction<Rational>>) -> Result<Self> {
        Self::new(d, generators.into_iter().map(Generator::from).collect())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn mode(&self) -> NumericMode {
        if self.generators.iter().all(Generator::is_exact) {
            NumericMode::ExactRational
        } else {
            NumericMode::Float
        }
    }

    pub fn refine(&self, level: usize) -> Result<Self> {
        Ok(Subspace {
            d: self.d,
            level,
            generators: self
                .generators
                .iter()
                .map(|g| g.refine(level))
                .collect::<Result<_>>()?,
        })
    }

    /// The direct sum, realized as concatenation of the generator lists.
    pub fn union(&self, other: &Subspace) -> Result<Self> {
        let mut generators = self.generators.clone();
        generators.extend(other.generators.iter().cloned());
        Self::new(self.d, generators)
    }

    /// Rational coefficient rows with the surd scales dropped (a nonzero
    /// scale does not change the span).
    fn rational_rows(&self) -> Option<Vec<Vec<Rational>>> {
        self.generators
            .iter()
            .map(|g| match g {
                Generator::Exact(f) if f.scale().is_zero() => {
                    Some(vec![Rational::zero(); f.body().coeffs().len()])
                }
                Generator::Exact(f) => Some(f.body().coeffs().to_vec()),
                Generator::Float(_) => None,
            })
            .collect()
    }

    fn complex_rows(&self) -> Vec<Vec<Complex64>> {
        self.generators
            .iter()
            .map(|g| g.to_complex().into_coeffs())
            .collect()
    }
}

fn rational_rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = rows[rank][col].recip();
        for r in rank + 1..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] * &inv;
            let (top, bottom) = rows.split_at_mut(r);
            for (a, b) in bottom[0].iter_mut().zip(&top[rank]).skip(col) {
                if !b.is_zero() {
                    *a -= &factor * b;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

fn singular_values(rows: &[Vec<Complex64>]) -> Vec<f64> {
    if rows.is_empty() || rows[0].is_empty() {
        return Vec::new();
    }
    let m = DMatrix::from_fn(rows[0].len(), rows.len(), |p, g| rows[g][p]);
    m.singular_values().iter().copied().collect()
}

fn float_rank(rows: &[Vec<Complex64>]) -> usize {
    let sv = singular_values(rows);
    let max = sv.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > FLOAT_RANK_TOL * max).count()
}

/// Rank of the generator matrix: exact elimination for exact generators,
/// singular values above `1e-9 · σ_max` otherwise.
pub fn rank(s: &Subspace) -> usize {
    match s.rational_rows() {
        Some(rows) => rational_rank(rows),
        None => float_rank(&s.complex_rows()),
    }
}

fn weighted_dot(x: &[Rational], y: &[Rational], masses: &[Rational]) -> Rational {
    let mut sum = Rational::zero();
    for ((a, b), m) in x.iter().zip(y).zip(masses) {
        if !a.is_zero() && !b.is_zero() {
            sum += a * b * m;
        }
    }
    sum
}

/// `μ`-orthogonal basis of the span of `rows`, by exact Gram–Schmidt.
fn orthogonal_basis(rows: &[Vec<Rational>], masses: &[Rational]) -> Vec<(Vec<Rational>, Rational)> {
    let mut basis: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for row in rows {
        let u = project_out(row, &basis, masses);
        let norm = weighted_dot(&u, &u, masses);
        if !norm.is_zero() {
            basis.push((u, norm));
        }
    }
    basis
}

fn project_out(
    x: &[Rational],
    basis: &[(Vec<Rational>, Rational)],
    masses: &[Rational],
) -> Vec<Rational> {
    let mut u = x.to_vec();
    for (v, norm) in basis {
        let coef = weighted_dot(v, &u, masses) / norm;
        if coef.is_zero() {
            continue;
        }
        for (a, b) in u.iter_mut().zip(v) {
            if !b.is_zero() {
                *a -= &coef * b;
            }
        }
    }
    u
}

/// `max_x ‖x - P x‖ / ‖x‖` over the rows `x`, with `P` the `μ`-orthogonal
/// projection onto the span of `target`.
fn exact_residual(rows: &[Vec<Rational>], target: &[Vec<Rational>], masses: &[Rational]) -> f64 {
    let basis = orthogonal_basis(target, masses);
    rows.iter()
        .map(|x| {
            let norm = weighted_dot(x, x, masses);
            if norm.is_zero() {
                return 0.0;
            }
            let defect = project_out(x, &basis, masses);
            to_f64(&(weighted_dot(&defect, &defect, masses) / norm)).sqrt()
        })
        .fold(0.0, f64::max)
}

fn float_residual(rows: &[Vec<Complex64>], target: &[Vec<Complex64>], masses: &[f64]) -> f64 {
    let sqrt_mu: Vec<f64> = masses.iter().map(|m| m.sqrt()).collect();
    let weigh = |x: &[Complex64]| -> Vec<Complex64> {
        x.iter().zip(&sqrt_mu).map(|(a, s)| a * s).collect()
    };
    let target: Vec<Vec<Complex64>> = target.iter().map(|t| weigh(t)).collect();
    let onb: Vec<Vec<Complex64>> = if target.is_empty() {
        Vec::new()
    } else {
        let m = DMatrix::from_fn(target[0].len(), target.len(), |p, g| target[g][p]);
        let svd = m.svd(true, false);
        let max = svd.singular_values.iter().copied().fold(0.0, f64::max);
        let u = svd.u.expect("left singular vectors requested");
        svd.singular_values
            .iter()
            .enumerate()
            .filter(|(_, &s)| max > 0.0 && s > FLOAT_RANK_TOL * max)
            .map(|(k, _)| u.column(k).iter().copied().collect())
            .collect()
    };
    rows.iter()
        .map(|x| {
            let x = weigh(x);
            let norm: f64 = x.iter().map(|a| a.norm_sqr()).sum();
            if norm == 0.0 {
                return 0.0;
            }
            let mut defect = x.clone();
            for q in &onb {
                let coef: Complex64 = q.iter().zip(&x).map(|(a, b)| a.conj() * b).sum();
                for (d, a) in defect.iter_mut().zip(q) {
                    *d -= coef * a;
                }
            }
            (defect.iter().map(|a| a.norm_sqr()).sum::<f64>() / norm).sqrt()
        })
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpanReport {
    pub equal: bool,
    pub rank_a: usize,
    pub rank_b: usize,
    pub rank_union: usize,
    /// Largest relative `μ`-projection defect of a generator of either side
    /// onto the span of the other side.
    pub residual: f64,
    pub mode: NumericMode,
}

/// Whether two subspaces have the same span: equal ranks, a union of the
/// same rank, and a projection residual within `tol`.
pub fn span_equal(
    a: &Subspace,
    b: &Subspace,
    mu: &CylinderMeasure,
    tol: f64,
) -> Result<SpanReport> {
    if a.d != b.d || a.d != mu.d() {
        return Err(Error::DimensionMismatch {
            expected: a.d,
            found: b.d,
        });
    }
    let level = a.level.max(b.level);
    let (a, b) = (a.refine(level)?, b.refine(level)?);
    let union = a.union(&b)?;
    let (rank_a, rank_b, rank_union) = (rank(&a), rank(&b), rank(&union));
    let (residual, mode) = match (a.rational_rows(), b.rational_rows()) {
        (Some(ra), Some(rb)) => {
            let masses = mu.level_masses(level);
            (
                exact_residual(&ra, &rb, &masses).max(exact_residual(&rb, &ra, &masses)),
                NumericMode::ExactRational,
            )
        }
        _ => {
            let masses = mu.level_masses_f64(level);
            let (ca, cb) = (a.complex_rows(), b.complex_rows());
            (
                float_residual(&ca, &cb, &masses).max(float_residual(&cb, &ca, &masses)),
                NumericMode::Float,
            )
        }
    };
    let equal = rank_a == rank_b && rank_b == rank_union && residual <= tol;
    Ok(SpanReport {
        equal,
        rank_a,
        rank_b,
        rank_union,
        residual,
        mode,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GramReport {
    /// Largest `|⟨f, g⟩|` with `f` and `g` from different subspaces.
    pub max_off_block: f64,
    /// True when every cross pair was exact and exactly zero.
    pub exact_zero: bool,
    pub pairs_checked: usize,
}

/// Cross-subspace Gram entries; a single subspace passes vacuously.
pub fn gram_orthogonality(spaces: &[Subspace], mu: &CylinderMeasure) -> Result<GramReport> {
    let mut report = GramReport {
        max_off_block: 0.0,
        exact_zero: true,
        pairs_checked: 0,
    };
    for (i, a) in spaces.iter().enumerate() {
        for b in &spaces[i + 1..] {
            for f in &a.generators {
                for g in &b.generators {
                    report.pairs_checked += 1;
                    let value = match (f, g) {
                        (Generator::Exact(f), Generator::Exact(g)) => {
                            let ip = f.inner_product(g, mu)?;
                            report.exact_zero &= ip.is_zero();
                            ip.to_f64().abs()
                        }
                        _ => {
                            report.exact_zero = false;
                            crate::function::inner_product(&f.to_complex(), &g.to_complex(), mu)?
                                .norm()
                        }
                    };
                    report.max_off_block = report.max_off_block.max(value);
                }
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelReport {
    pub n: usize,
    pub expected_rank: usize,
    pub rank_wavelets: usize,
    pub rank_eigen: usize,
    pub rank_union: usize,
    pub residual: f64,
    /// Same comparison using the Fourier complement basis in binary64.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fourier_residual: Option<f64>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingReport {
    pub rank_scaling: usize,
    pub rank_split: usize,
    pub residual: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantReport {
    pub checked: usize,
    pub max_deviation: f64,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Even,
    Uneven,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub d: usize,
    pub family: Family,
    pub depth: usize,
    pub tol: f64,
    pub levels: Vec<LevelReport>,
    /// `V₀` against the constants plus the eigenspace of the empty path.
    pub scaling: ScalingReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constants: Option<ConstantReport>,
    pub pass: bool,
}

/// Tolerance for the wavelet-to-eigenfunction proportionality constants.
pub const CONSTANT_TOL: f64 = 1e-10;

fn eigen_union(params: &SpectralParams, n: usize) -> Result<Subspace> {
    let d = params.d();
    let gens = paths_up_to(d, n as isize)
        .into_iter()
        .filter(|p| p.len() == n as isize)
        .flat_map(|p| eigenspace_basis(params, &p))
        .collect();
    Subspace::from_rational(d, gens)
}

/// Checks, for every level `n ≤ depth`, that the wavelet detail space equals
/// the direct sum of the eigenspaces `E_γ` with `|γ| = n`; that `V₀` is the
/// constants plus `E_∘`; and, for two-vertex product weights, the exact
/// proportionality constants between wavelets and eigenspace spanners.
///
/// Failures are reported in the result rather than returned as errors.
pub fn verify_decomposition(
    w: &WeightScheme,
    depth: usize,
    tol: f64,
) -> Result<DecompositionReport> {
    let d = w.d();
    let mu = w.measure();
    let uniform = mu.probs().iter().all(|p| *p == mu.probs()[0]);
    let family = if uniform {
        Family::Even
    } else if d == 2 {
        Family::Uneven
    } else {
        return Err(Error::Unsupported(format!(
            "wavelet decomposition for non-uniform weights needs D = 2, got D = {d}"
        )));
    };
    // Eigenspaces depend only on the measure, so any s will do.
    let params = SpectralParams::new(2.0, w.clone());

    let mut levels = Vec::with_capacity(depth + 1);
    let mut constants = (family == Family::Uneven).then_some(ConstantReport {
        checked: 0,
        max_deviation: 0.0,
        pass: true,
    });
    for n in 0..=depth {
        let eigen = eigen_union(&params, n)?;
        let (wavelets, fourier_residual) = match family {
            Family::Even => {
                let real =
                    wavelet_basis(d, n, &ComplementBasis::new(d, OnbMode::GramSchmidtReal)?)?;
                let fourier = wavelet_basis(d, n, &ComplementBasis::new(d, OnbMode::Fourier)?)?;
                let fourier = Subspace::new(d, fourier.into_iter().map(|w| w.function).collect())?;
                let fourier_report = span_equal(&fourier, &eigen, &mu, tol)?;
                (real, Some((fourier_report.residual, fourier_report.equal)))
            }
            Family::Uneven => (uneven_wavelet_basis(w, n)?, None),
        };
        if let Some(report) = constants.as_mut() {
            let r = to_f64(&mu.probs()[0]);
            for wavelet in &wavelets {
                let wv = Path::new(wavelet.word.clone()).child(wavelet.k);
                let spanner = Generator::from(eigenspace_basis(&params, &wv).remove(0));
                let ratio = match (&wavelet.function, &spanner) {
                    (Generator::Exact(f), Generator::Exact(g)) => f.ratio_to(g).map(|c| c.to_f64()),
                    _ => None,
                };
                let deviation =
                    ratio.map_or(f64::INFINITY, |c| (c - uneven_constant(r, &wv)).abs());
                report.checked += 1;
                report.max_deviation = report.max_deviation.max(deviation);
                report.pass &= deviation < CONSTANT_TOL;
            }
        }
        let wavelets = Subspace::new(d, wavelets.into_iter().map(|w| w.function).collect())?;
        let span = span_equal(&wavelets, &eigen, &mu, tol)?;
        let expected_rank = d.pow(n as u32 + 1) * (d - 1);
        let fourier_ok = fourier_residual.is_none_or(|(_, ok)| ok);
        levels.push(LevelReport {
            n,
            expected_rank,
            rank_wavelets: span.rank_a,
            rank_eigen: span.rank_b,
            rank_union: span.rank_union,
            residual: span.residual,
            fourier_residual: fourier_residual.map(|(r, _)| r),
            pass: span.equal && span.rank_a == expected_rank && fourier_ok,
        });
    }

    let scaling_space = Subspace::from_rational(d, scaling_basis(d))?;
    let mut split = vec![CylinderFunction::constant(d, 0, Rational::one())];
    split.extend(eigenspace_basis(&params, &Path::empty()));
    let split = Subspace::from_rational(d, split)?;
    let span = span_equal(&scaling_space, &split, &mu, tol)?;
    let scaling = ScalingReport {
        rank_scaling: span.rank_a,
        rank_split: span.rank_b,
        residual: span.residual,
        pass: span.equal && span.rank_a == d,
    };

    let pass =
        levels.iter().all(|l| l.pass) && scaling.pass && constants.as_ref().is_none_or(|c| c.pass);
    Ok(DecompositionReport {
        d,
        family,
        depth,
        tol,
        levels,
        scaling,
        constants,
        pass,
    })
}

/// `‖f‖²` under `μ` for an exact generator, as a rational.
pub fn exact_norm_sq(g: &Generator, mu: &CylinderMeasure) -> Option<Rational> {
    match g {
        Generator::Exact(f) => f
            .inner_product(f, mu)
            .ok()?
            .as_rational()
            .filter(|q| !q.is_negative()),
        Generator::Float(_) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use crate::function::ScaledFunction;
    use crate::representation::apply_isometry;
    use proptest::prelude::*;

    fn even_wavelets(d: usize, n: usize) -> Subspace {
        let b = ComplementBasis::new(d, OnbMode::GramSchmidtReal).unwrap();
        Subspace::new(
            d,
            wavelet_basis(d, n, &b)
                .unwrap()
                .into_iter()
                .map(|w| w.function)
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn rank_examples() {
        let v0 = Subspace::from_rational(2, scaling_basis(2)).unwrap();
        assert_eq!(rank(&v0), 2);
        let params = SpectralParams::new(2.0, WeightScheme::even(2).unwrap());
        assert_eq!(rank(&eigen_union(&params, 2).unwrap()), 8);
        let dup = v0.union(&v0).unwrap();
        assert_eq!(rank(&dup), 2);
        let empty = Subspace::new(2, vec![]).unwrap();
        assert_eq!(rank(&empty), 0);
        let complex = Subspace::new(
            2,
            v0.generators()
                .iter()
                .map(|g| Generator::Float(g.to_complex()))
                .collect(),
        )
        .unwrap();
        assert_eq!(rank(&complex), 2);
    }

    #[test]
    fn span_equal_examples() {
        let mu = CylinderMeasure::uniform(2);
        let params = SpectralParams::new(2.0, WeightScheme::even(2).unwrap());
        let w0 = even_wavelets(2, 0);
        let e0 = eigen_union(&params, 0).unwrap();
        let report = span_equal(&w0, &e0, &mu, 1e-12).unwrap();
        assert!(report.equal && report.residual == 0.0, "{report:?}");

        let v0 = Subspace::from_rational(2, scaling_basis(2)).unwrap();
        assert!(!span_equal(&v0, &w0, &mu, 1e-9).unwrap().equal);
        let same = span_equal(&w0, &w0, &mu, 0.0).unwrap();
        assert!(same.equal && same.residual == 0.0);
    }

    #[test]
    fn float_residuals_detect_differences() {
        let mu = CylinderMeasure::uniform(2);
        let fourier = ComplementBasis::new(2, OnbMode::Fourier).unwrap();
        let w1 = Subspace::new(
            2,
            wavelet_basis(2, 1, &fourier)
                .unwrap()
                .into_iter()
                .map(|w| w.function)
                .collect(),
        )
        .unwrap();
        let params = SpectralParams::new(2.0, WeightScheme::even(2).unwrap());
        let report = span_equal(&w1, &eigen_union(&params, 1).unwrap(), &mu, 1e-10).unwrap();
        assert!(report.equal && report.residual < 1e-12 && report.mode == NumericMode::Float);
        let other = span_equal(&w1, &eigen_union(&params, 0).unwrap(), &mu, 1e-10).unwrap();
        assert!(!other.equal && other.residual > 0.5);
    }

    #[test]
    fn gram_examples() {
        let mu = CylinderMeasure::uniform(2);
        let v0 = Subspace::from_rational(2, scaling_basis(2)).unwrap();
        let report =
            gram_orthogonality(&[v0.clone(), even_wavelets(2, 0), even_wavelets(2, 1)], &mu)
                .unwrap();
        assert!(report.exact_zero && report.max_off_block == 0.0);
        let single = gram_orthogonality(&[v0], &mu).unwrap();
        assert_eq!(single.pairs_checked, 0);

        let w = WeightScheme::product(vec![rat(3, 10), rat(7, 10)]).unwrap();
        let spaces: Vec<Subspace> = (0..2)
            .map(|k| {
                Subspace::new(
                    2,
                    uneven_wavelet_basis(&w, k)
                        .unwrap()
                        .into_iter()
                        .map(|w| w.function)
                        .collect(),
                )
                .unwrap()
            })
            .collect();
        assert!(
            gram_orthogonality(&spaces, &w.measure())
                .unwrap()
                .exact_zero
        );
    }

    #[test]
    fn decomposition_even_and_uneven() {
        let report = verify_decomposition(&WeightScheme::even(2).unwrap(), 2, 1e-9).unwrap();
        assert!(report.pass, "{report:?}");
        assert_eq!(report.levels[2].expected_rank, 8);
        let report = verify_decomposition(&WeightScheme::even(3).unwrap(), 1, 1e-9).unwrap();
        assert!(report.pass, "{report:?}");
        let w = WeightScheme::product(vec![rat(3, 10), rat(7, 10)]).unwrap();
        let report = verify_decomposition(&w, 2, 1e-9).unwrap();
        assert!(report.pass, "{report:?}");
        assert_eq!(report.constants.unwrap().checked, 2 + 4 + 8);
        let skew = WeightScheme::product(vec![rat(1, 2), rat(1, 4), rat(1, 4)]).unwrap();
        assert!(verify_decomposition(&skew, 1, 1e-9).is_err());
    }

    #[test]
    fn isometries_carry_eigenspaces_to_eigenspaces() {
        for w in [
            WeightScheme::even(3).unwrap(),
            WeightScheme::product(vec![rat(1, 3), rat(2, 3)]).unwrap(),
        ] {
            let d = w.d();
            let mu = w.measure();
            let params = SpectralParams::new(2.0, w.clone());
            for gamma in paths_up_to(d, 1) {
                for i in 0..d {
                    let images: Vec<ScaledFunction> = eigenspace_basis(&params, &gamma)
                        .into_iter()
                        .map(|b| apply_isometry(i, &ScaledFunction::rational(b), &w).unwrap())
                        .collect();
                    for (img, b) in images.iter().zip(eigenspace_basis(&params, &gamma)) {
                        let original = ScaledFunction::rational(b);
                        assert_eq!(
                            img.inner_product(img, &mu).unwrap(),
                            original.inner_product(&original, &mu).unwrap()
                        );
                    }
                    let a = Subspace::new(d, images.into_iter().map(Generator::from).collect())
                        .unwrap();
                    let b =
                        Subspace::from_rational(d, eigenspace_basis(&params, &gamma.prepend(i)))
                            .unwrap();
                    assert!(span_equal(&a, &b, &mu, 0.0).unwrap().equal, "{gamma} {i}");
                }
            }
        }
    }

    #[test]
    fn isometries_map_detail_spaces_forward() {
        let w = WeightScheme::even(2).unwrap();
        let mu = w.measure();
        let w1 = even_wavelets(2, 1);
        let w2 = even_wavelets(2, 2);
        for i in 0..2 {
            let images: Vec<Generator> = w1
                .generators()
                .iter()
                .map(|g| match g {
                    Generator::Exact(f) => Generator::Exact(apply_isometry(i, f, &w).unwrap()),
                    Generator::Float(_) => unreachable!(),
                })
                .collect();
            let image = Subspace::new(2, images).unwrap();
            let joint = w2.union(&image).unwrap();
            assert_eq!(rank(&joint), rank(&w2));
            assert!(exact_norm_sq(&image.generators()[0], &mu) == Some(int(1)));
        }
    }

    fn rational_rows(
        d: usize,
        level: usize,
        count: usize,
    ) -> impl Strategy<Value = Vec<CylinderFunction<Rational>>> {
        prop::collection::vec(
            prop::collection::vec(-3i64..4, d.pow(level as u32 + 1)),
            1..count,
        )
        .prop_map(move |rows| {
            rows.into_iter()
                .map(|r| CylinderFunction::new(d, level, r.into_iter().map(int).collect()).unwrap())
                .collect()
        })
    }

    proptest! {
        #[test]
        fn span_equality_is_scale_invariant(rows in rational_rows(2, 1, 4), k in 1i64..9) {
            let mu = CylinderMeasure::uniform(2);
            let a = Subspace::from_rational(2, rows.clone()).unwrap();
            let scaled: Vec<_> = rows.iter().map(|f| f.scale(&rat(k, 3))).collect();
            let b = Subspace::from_rational(2, scaled).unwrap();
            prop_assert_eq!(rank(&a), rank(&b));
            prop_assert!(span_equal(&a, &b, &mu, 0.0).unwrap().equal);
        }

        #[test]
        fn span_equality_is_transitive(
            a in rational_rows(2, 1, 4),
            b in rational_rows(2, 1, 4),
            c in rational_rows(2, 1, 4),
        ) {
            let mu = CylinderMeasure::uniform(2);
            let (a, b, c) = (
                Subspace::from_rational(2, a).unwrap(),
                Subspace::from_rational(2, b).unwrap(),
                Subspace::from_rational(2, c).unwrap(),
            );
            let ab = span_equal(&a, &b, &mu, 0.0).unwrap().equal;
            prop_assert_eq!(ab, span_equal(&b, &a, &mu, 0.0).unwrap().equal);
            if ab && span_equal(&b, &c, &mu, 0.0).unwrap().equal {
                prop_assert!(span_equal(&a, &c, &mu, 0.0).unwrap().equal);
            }
        }
    }
}
