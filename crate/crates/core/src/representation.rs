//! The Cuntz isometries `S_i` and their adjoints on locally constant functions.
//!
//! `S_i f` is supported on `[i]` with `(S_i f)(i x) = c_i f(x)`, where
//! `c_i = μ[i]^{-1/2}`; this is `√D` for the uniform measure and `r_i^{-1/2}`
//! for product weights (for `D > 2` the latter extends the two-vertex formulas
//! in the obvious way). The factors are kept as exact surds.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{int, Rational, Surd};
use crate::function::{CylinderFunction, Scalar, ScaledFunction};
use crate::path_space::Path;
use crate::weights::WeightScheme;

pub use crate::function::inner_product;

/// `f` viewed at level `m >= f.level`.
pub fn refine<T: Scalar>(f: &CylinderFunction<T>, m: usize) -> Result<CylinderFunction<T>> {
    f.refine(m)
}

/// `c_i = μ[i]^{-1/2}`.
pub fn isometry_factor(w: &WeightScheme, i: usize) -> Result<Surd> {
    check_vertex(w, i)?;
    Surd::sqrt_of(&w.measure().probs()[i].recip())
}

fn check_vertex(w: &WeightScheme, i: usize) -> Result<()> {
    if i >= w.d() {
        return Err(Error::VertexOutOfRange {
            vertex: i,
            d: w.d(),
        });
    }
    Ok(())
}

/// Places the coefficients of `f` on the paths `i·p` one level down, zero elsewhere.
fn shift_in<T: Scalar>(i: usize, f: &CylinderFunction<T>) -> CylinderFunction<T> {
    let d = f.d();
    let block = f.coeffs().len();
    let mut coeffs = vec![T::zero(); block * d];
    coeffs[i * block..(i + 1) * block].clone_from_slice(f.coeffs());
    CylinderFunction::new(d, f.level() + 1, coeffs).expect("block layout matches level size")
}

/// Reads the coefficients of `f` on the paths `i·p`, one level up.
fn shift_out<T: Scalar>(i: usize, f: &CylinderFunction<T>) -> Result<CylinderFunction<T>> {
    if f.level() == 0 {
        return Err(Error::AdjointAtLevelZero);
    }
    let block = f.coeffs().len() / f.d();
    CylinderFunction::new(
        f.d(),
        f.level() - 1,
        f.coeffs()[i * block..(i + 1) * block].to_vec(),
    )
}

/// `S_i f`, one level finer than `f`.
pub fn apply_isometry(i: usize, f: &ScaledFunction, w: &WeightScheme) -> Result<ScaledFunction> {
    let c = isometry_factor(w, i)?;
    Ok(ScaledFunction::new(
        f.scale().mul(&c),
        shift_in(i, f.body()),
    ))
}

/// `S_i* f`, one level coarser than `f`: `(S_i* f)(p) = c_i^{-1} f(i·p)`.
pub fn apply_adjoint(i: usize, f: &ScaledFunction, w: &WeightScheme) -> Result<ScaledFunction> {
    let c = isometry_factor(w, i)?
        .recip()
        .expect("isometry factors are nonzero");
    Ok(ScaledFunction::new(
        f.scale().mul(&c),
        shift_out(i, f.body())?,
    ))
}

/// `S_w f = S_{w_1} S_{w_2} ⋯ S_{w_n} f`; the last letter acts first.
pub fn apply_word(word: &[usize], f: &ScaledFunction, w: &WeightScheme) -> Result<ScaledFunction> {
    word.iter()
        .rev()
        .try_fold(f.clone(), |g, &i| apply_isometry(i, &g, w))
}

/// `S_i` on a binary64 complex function.
pub fn apply_isometry_complex(
    i: usize,
    f: &CylinderFunction<Complex64>,
    w: &WeightScheme,
) -> Result<CylinderFunction<Complex64>> {
    let c = Complex64::new(isometry_factor(w, i)?.to_f64(), 0.0);
    Ok(shift_in(i, f).scale(&c))
}

/// `S_i*` on a binary64 complex function.
pub fn apply_adjoint_complex(
    i: usize,
    f: &CylinderFunction<Complex64>,
    w: &WeightScheme,
) -> Result<CylinderFunction<Complex64>> {
    let c = Complex64::new(isometry_factor(w, i)?.to_f64().recip(), 0.0);
    Ok(shift_out(i, f)?.scale(&c))
}

pub fn apply_word_complex(
    word: &[usize],
    f: &CylinderFunction<Complex64>,
    w: &WeightScheme,
) -> Result<CylinderFunction<Complex64>> {
    word.iter()
        .rev()
        .try_fold(f.clone(), |g, &i| apply_isometry_complex(i, &g, w))
}

/// The standard positive monic operator `f ↦ √D χ_[i] (f∘σ)`, where `σ`
/// drops the first vertex. In the uniform case it coincides with `S_i`.
pub fn monic_apply(i: usize, f: &ScaledFunction) -> Result<ScaledFunction> {
    let d = f.d();
    if i >= d {
        return Err(Error::VertexOutOfRange { vertex: i, d });
    }
    let level = f.level() + 1;
    let mut body = CylinderFunction::<Rational>::zeros(d, level);
    for idx in 0..d.pow(level as u32 + 1) {
        let x = Path::from_index(d, level as isize, idx);
        if x.first() == Some(i) {
            *body.coeff_mut(&x) = f.body().value(&x.tail());
        }
    }
    let root_d = Surd::sqrt_of(&int(d as i64))?;
    Ok(ScaledFunction::new(f.scale().mul(&root_d), body))
}

/// Outcome of checking the Cuntz relations on every indicator of a level.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CuntzReport {
    pub d: usize,
    pub level: usize,
    pub basis_size: usize,
    /// Largest coefficient of `S_j* S_i f - δ_ij f` over basis functions and pairs.
    pub orthogonality_deviation: f64,
    /// Largest coefficient of `Σ_i S_i S_i* f - f`.
    pub completeness_deviation: f64,
    /// Largest `|⟨S_i* f, g⟩ - ⟨f, S_i g⟩|` over basis pairs.
    pub adjoint_deviation: f64,
    pub max_deviation: f64,
    /// True when every relation held with exact equality.
    pub exact: bool,
}

fn deviation(f: &ScaledFunction) -> f64 {
    if f.is_zero() {
        0.0
    } else {
        f.max_abs()
    }
}

/// Verifies `S_j* S_i = δ_ij`, `Σ S_i S_i* = 1` and `⟨S_i* f, g⟩ = ⟨f, S_i g⟩`
/// exactly on the indicator basis of the level-`level` functions.
pub fn cuntz_check(w: &WeightScheme, level: usize) -> Result<CuntzReport> {
    if level == 0 {
        return Err(Error::AdjointAtLevelZero);
    }
    let d = w.d();
    let mu = w.measure();
    let size = d.pow(level as u32 + 1);
    let basis: Vec<Path> = (0..size)
        .map(|k| Path::from_index(d, level as isize, k))
        .collect();
    let mut exact = true;
    let mut orthogonality_deviation: f64 = 0.0;
    let mut completeness_deviation: f64 = 0.0;
    let mut adjoint_deviation: f64 = 0.0;

    let factors: Vec<Surd> = (0..d)
        .map(|i| isometry_factor(w, i))
        .collect::<Result<_>>()?;
    let inverses: Vec<Surd> = factors
        .iter()
        .map(|c| c.recip().expect("isometry factors are nonzero"))
        .collect();
    let lift = |i: usize, f: &ScaledFunction| {
        ScaledFunction::new(f.scale().mul(&factors[i]), shift_in(i, f.body()))
    };
    let lower = |i: usize, f: &ScaledFunction| -> Result<ScaledFunction> {
        Ok(ScaledFunction::new(
            f.scale().mul(&inverses[i]),
            shift_out(i, f.body())?,
        ))
    };

    for p in &basis {
        let f = ScaledFunction::indicator(d, p);
        for i in 0..d {
            let sf = lift(i, &f);
            for j in 0..d {
                let back = lower(j, &sf)?;
                let defect = if i == j { back.sub(&f)? } else { back };
                let dev = deviation(&defect);
                exact &= dev == 0.0 && defect.is_zero();
                orthogonality_deviation = orthogonality_deviation.max(dev);
            }
        }

        let mut sum = ScaledFunction::zeros(d, level);
        for i in 0..d {
            sum = sum.add(&lift(i, &lower(i, &f)?))?;
        }
        let defect = sum.sub(&f)?;
        exact &= defect.is_zero();
        completeness_deviation = completeness_deviation.max(deviation(&defect));
    }

    // ⟨h, χ_q⟩ = h(q) μ[q], so pairing against the indicator basis reads off
    // weighted coefficients.
    let coarse: Vec<Path> = (0..size / d)
        .map(|k| Path::from_index(d, level as isize - 1, k))
        .collect();
    let coarse_mu = mu.level_masses(level - 1);
    let fine_mu = mu.level_masses(level);
    for i in 0..d {
        let adjoints: Vec<ScaledFunction> = basis
            .iter()
            .map(|p| lower(i, &ScaledFunction::indicator(d, p)))
            .collect::<Result<_>>()?;
        let images: Vec<ScaledFunction> = coarse
            .iter()
            .map(|q| lift(i, &ScaledFunction::indicator(d, q)))
            .collect();
        for (pi, adj) in adjoints.iter().enumerate() {
            for (qi, img) in images.iter().enumerate() {
                let a = &adj.body().coeffs()[qi];
                let b = &img.body().coeffs()[pi];
                if num_traits::Zero::is_zero(a) && num_traits::Zero::is_zero(b) {
                    continue;
                }
                let lhs = adj.scale().mul_rational(&(a * &coarse_mu[qi]));
                let rhs = img.scale().mul_rational(&(b * &fine_mu[pi]));
                let gap = lhs
                    .add(&rhs.neg())
                    .map(|g| g.to_f64().abs())
                    .unwrap_or(f64::INFINITY);
                exact &= lhs == rhs;
                adjoint_deviation = adjoint_deviation.max(gap);
            }
        }
    }

    let max_deviation = orthogonality_deviation
        .max(completeness_deviation)
        .max(adjoint_deviation);
    Ok(CuntzReport {
        d,
        level,
        basis_size: size,
        orthogonality_deviation,
        completeness_deviation,
        adjoint_deviation,
        max_deviation,
        exact,
    })
}
