//! Locally constant functions on the boundary of the Bratteli diagram.
//!
//! A level-`n` function is constant on every cylinder `[p]` with `|p| = n`
//! and is stored as one coefficient per length-`n` path, in lexicographic
//! order (`D^{n+1}` entries).

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{to_f64, Rational, Surd};
use crate::path_space::Path;
use crate::weights::CylinderMeasure;

/// Coefficient field of a cylinder function.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn conj(&self) -> Self;
    fn from_rational(q: &Rational) -> Self;
    fn to_complex(&self) -> Complex64;
}

impl Scalar for Rational {
    fn conj(&self) -> Self {
        self.clone()
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(to_f64(self), 0.0)
    }
}

impl Scalar for Complex64 {
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn from_rational(q: &Rational) -> Self {
        Complex64::new(to_f64(q), 0.0)
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }
}

fn level_size(d: usize, level: usize) -> usize {
    d.pow(level as u32 + 1)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CylinderFunction<T> {
    d: usize,
    level: usize,
    coeffs: Vec<T>,
}

impl<T: Scalar> CylinderFunction<T> {
    pub fn new(d: usize, level: usize, coeffs: Vec<T>) -> Result<Self> {
        let expected = level_size(d, level);
        if coeffs.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: coeffs.len(),
            });
        }
        Ok(CylinderFunction { d, level, coeffs })
    }

    pub fn zeros(d: usize, level: usize) -> Self {
        CylinderFunction {
            d,
            level,
            coeffs: vec![T::zero(); level_size(d, level)],
        }
    }

    pub fn constant(d: usize, level: usize, c: T) -> Self {
        CylinderFunction {
            d,
            level,
            coeffs: vec![c; level_size(d, level)],
        }
    }

    /// `χ_{[γ]}` at level `|γ|`; the empty path gives the constant 1 at level 0.
    pub fn indicator(d: usize, path: &Path) -> Self {
        if path.is_empty() {
            return Self::constant(d, 0, T::one());
        }
        let mut f = Self::zeros(d, path.len() as usize);
        f.coeffs[path.index(d)] = T::one();
        f
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff_mut(&mut self, path: &Path) -> &mut T {
        let idx = path.index(self.d);
        &mut self.coeffs[idx]
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Value on any point of the cylinder `[path]`; `path` must have length at least `level`.
    pub fn value(&self, path: &Path) -> T {
        debug_assert!(path.len() >= self.level as isize);
        self.coeffs[path.prefix(self.level as isize).index(self.d)].clone()
    }

    /// The same function viewed at the finer level `m`.
    pub fn refine(&self, m: usize) -> Result<Self> {
        if m < self.level {
            return Err(Error::Refinement {
                from: self.level,
                to: m,
            });
        }
        let block = self.d.pow((m - self.level) as u32);
        let coeffs = self
            .coeffs
            .iter()
            .flat_map(|c| std::iter::repeat_n(c.clone(), block))
            .collect();
        Ok(CylinderFunction {
            d: self.d,
            level: m,
            coeffs,
        })
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> CylinderFunction<U> {
        CylinderFunction {
            d: self.d,
            level: self.level,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    /// `a·self + b·other`, refined to the finer of the two levels.
    pub fn combine(&self, a: &T, other: &Self, b: &T) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: other.d,
            });
        }
        let level = self.level.max(other.level);
        let (x, y) = (self.refine(level)?, other.refine(level)?);
        let coeffs = x
            .coeffs
            .into_iter()
            .zip(y.coeffs)
            .map(|(u, v)| a.clone() * u + b.clone() * v)
            .collect();
        Ok(CylinderFunction {
            d: self.d,
            level,
            coeffs,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(&T::one(), other, &T::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(&T::one(), other, &-T::one())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// True if every nonzero coefficient sits on a path extending `path`.
    pub fn supported_in(&self, path: &Path) -> bool {
        if path.len() > self.level as isize {
            return self.is_zero();
        }
        self.coeffs.iter().enumerate().all(|(i, c)| {
            c.is_zero() || path.is_prefix_of(&Path::from_index(self.d, self.level as isize, i))
        })
    }

    pub fn to_complex(&self) -> CylinderFunction<Complex64> {
        self.map(|c| c.to_complex())
    }
}

impl CylinderFunction<Complex64> {
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// `Σ_p conj(f(p)) g(p) μ[p]` over the paths of the common refinement level.
pub fn inner_product<T: Scalar>(
    f: &CylinderFunction<T>,
    g: &CylinderFunction<T>,
    mu: &CylinderMeasure,
) -> Result<T> {
    if f.d != g.d || f.d != mu.d() {
        return Err(Error::DimensionMismatch {
            expected: f.d,
            found: g.d.max(mu.d()),
        });
    }
    let level = f.level.max(g.level);
    let (f, g) = (f.refine(level)?, g.refine(level)?);
    let masses = mu.level_masses(level);
    Ok(f.coeffs
        .iter()
        .zip(&g.coeffs)
        .zip(&masses)
        .filter(|((a, b), _)| !a.is_zero() && !b.is_zero())
        .fold(T::zero(), |acc, ((a, b), m)| {
            acc + a.conj() * b.clone() * T::from_rational(m)
        }))
}

/// `∫ f dμ`.
pub fn integral<T: Scalar>(f: &CylinderFunction<T>, mu: &CylinderMeasure) -> Result<T> {
    inner_product(&CylinderFunction::constant(f.d, 0, T::one()), f, mu)
}

/// An exact real function `scale · body` with a surd scale and rational body.
///
/// Applying the isometries multiplies by `μ[i]^{-1/2}`; keeping that factor
/// outside the rational coefficients lets every Cuntz relation be checked
/// exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledFunction {
    scale: Surd,
    body: CylinderFunction<Rational>,
}

impl ScaledFunction {
    pub fn new(scale: Surd, body: CylinderFunction<Rational>) -> Self {
        ScaledFunction { scale, body }
    }

    pub fn rational(body: CylinderFunction<Rational>) -> Self {
        ScaledFunction {
            scale: Surd::one(),
            body,
        }
    }

    pub fn indicator(d: usize, path: &Path) -> Self {
        Self::rational(CylinderFunction::indicator(d, path))
    }

    pub fn zeros(d: usize, level: usize) -> Self {
        Self::rational(CylinderFunction::zeros(d, level))
    }

    pub fn scale(&self) -> &Surd {
        &self.scale
    }

    pub fn body(&self) -> &CylinderFunction<Rational> {
        &self.body
    }

    pub fn d(&self) -> usize {
        self.body.d
    }

    pub fn level(&self) -> usize {
        self.body.level
    }

    pub fn is_zero(&self) -> bool {
        self.scale.is_zero() || self.body.is_zero()
    }

    pub fn refine(&self, m: usize) -> Result<Self> {
        Ok(ScaledFunction {
            scale: self.scale.clone(),
            body: self.body.refine(m)?,
        })
    }

    pub fn scaled(&self, c: &Surd) -> Self {
        ScaledFunction {
            scale: self.scale.mul(c),
            body: self.body.clone(),
        }
    }

    /// Moves the rational part of the scale into the body, leaving `sqrt(m)`.
    fn normalized(&self) -> (Surd, CylinderFunction<Rational>) {
        let coeff = self.scale.coeff().clone();
        let unit = Surd::sqrt_of(&Rational::from_integer(
            self.scale.radicand().clone().into(),
        ))
        .expect("radicands are nonnegative");
        (unit, self.body.scale(&coeff))
    }

    /// `a·self + b·other`. Fails if the two scales are not rational multiples
    /// of the same square root (and neither side is zero).
    pub fn combine(&self, a: &Rational, other: &Self, b: &Rational) -> Result<Self> {
        if other.is_zero() || b.is_zero() {
            let level = self.level().max(other.level());
            return Ok(ScaledFunction {
                scale: self.scale.clone(),
                body: self.body.scale(a).refine(level)?,
            });
        }
        if self.is_zero() || a.is_zero() {
            let level = self.level().max(other.level());
            return Ok(ScaledFunction {
                scale: other.scale.clone(),
                body: other.body.scale(b).refine(level)?,
            });
        }
        let (u, f) = self.normalized();
        let (v, g) = other.normalized();
        if u != v {
            return Err(Error::IncompatibleSurds(
                u.radicand().to_string(),
                v.radicand().to_string(),
            ));
        }
        Ok(ScaledFunction {
            scale: u,
            body: f.combine(a, &g, b)?,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(&Rational::one(), other, &Rational::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(&Rational::one(), other, &-Rational::one())
    }

    pub fn inner_product(&self, other: &Self, mu: &CylinderMeasure) -> Result<Surd> {
        let body = inner_product(&self.body, &other.body, mu)?;
        Ok(self.scale.mul(&other.scale).mul_rational(&body))
    }

    /// Largest coefficient magnitude, collapsed to binary64.
    pub fn max_abs(&self) -> f64 {
        self.to_complex().max_abs()
    }

    /// `c` with `self = c · other`, if one exists (`None` when `other` is zero
    /// or the functions are not proportional).
    pub fn ratio_to(&self, other: &Self) -> Option<Surd> {
        let level = self.level().max(other.level());
        let (f, g) = (
            self.body.refine(level).ok()?,
            other.body.refine(level).ok()?,
        );
        let pivot = g.coeffs.iter().position(|c| !c.is_zero())?;
        let q = &f.coeffs[pivot] / &g.coeffs[pivot];
        if !f.coeffs.iter().zip(&g.coeffs).all(|(a, b)| *a == &q * b) {
            return None;
        }
        Some(self.scale.mul(&other.scale.recip()?).mul_rational(&q))
    }

    pub fn to_complex(&self) -> CylinderFunction<Complex64> {
        let s = self.scale.to_f64();
        self.body.map(|c| Complex64::new(s * to_f64(c), 0.0))
    }
}

/// A generator of a subspace: exact (surd-scaled rational) or binary64 complex.
#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    Exact(ScaledFunction),
    Float(CylinderFunction<Complex64>),
}

impl Generator {
    pub fn d(&self) -> usize {
        match self {
            Generator::Exact(f) => f.d(),
            Generator::Float(f) => f.d(),
        }
    }

    pub fn level(&self) -> usize {
        match self {
            Generator::Exact(f) => f.level(),
            Generator::Float(f) => f.level(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Generator::Exact(_))
    }

    pub fn refine(&self, m: usize) -> Result<Self> {
        Ok(match self {
            Generator::Exact(f) => Generator::Exact(f.refine(m)?),
            Generator::Float(f) => Generator::Float(f.refine(m)?),
        })
    }

    pub fn to_complex(&self) -> CylinderFunction<Complex64> {
        match self {
            Generator::Exact(f) => f.to_complex(),
            Generator::Float(f) => f.clone(),
        }
    }
}

impl From<ScaledFunction> for Generator {
    fn from(f: ScaledFunction) -> Self {
        Generator::Exact(f)
    }
}

impl From<CylinderFunction<Rational>> for Generator {
    fn from(f: CylinderFunction<Rational>) -> Self {
        Generator::Exact(ScaledFunction::rational(f))
    }
}

impl From<CylinderFunction<Complex64>> for Generator {
    fn from(f: CylinderFunction<Complex64>) -> Self {
        Generator::Float(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn p(s: &str) -> Path {
        s.parse().unwrap()
    }

    #[test]
    fn refine_splits_cylinders() {
        let chi0 = CylinderFunction::<Rational>::indicator(2, &p("0"));
        assert_eq!(chi0.refine(0).unwrap(), chi0);
        let fine = chi0.refine(1).unwrap();
        assert_eq!(fine.coeffs(), &[int(1), int(1), int(0), int(0)]);
        assert!(matches!(fine.refine(0), Err(Error::Refinement { .. })));
    }

    #[test]
    fn refine_preserves_integrals() {
        let mu = CylinderMeasure::uniform(3);
        let f = CylinderFunction::new(3, 0, vec![int(2), rat(-1, 3), int(5)]).unwrap();
        for m in 0..4 {
            assert_eq!(
                integral(&f.refine(m).unwrap(), &mu).unwrap(),
                integral(&f, &mu).unwrap()
            );
        }
    }

    #[test]
    fn inner_product_examples() {
        let mu = CylinderMeasure::uniform(2);
        let one = CylinderFunction::<Rational>::constant(2, 0, int(1));
        let chi0 = CylinderFunction::<Rational>::indicator(2, &p("0"));
        let chi1 = CylinderFunction::<Rational>::indicator(2, &p("1"));
        assert_eq!(inner_product(&one, &one, &mu).unwrap(), int(1));
        assert_eq!(inner_product(&chi0, &chi1, &mu).unwrap(), int(0));
        assert_eq!(inner_product(&chi0, &chi0, &mu).unwrap(), rat(1, 2));

        let skew = crate::weights::WeightScheme::product(vec![rat(1, 3), rat(2, 3)])
            .unwrap()
            .measure();
        assert_eq!(inner_product(&chi0, &chi1, &skew).unwrap(), int(0));
        assert_eq!(inner_product(&chi0, &chi0, &skew).unwrap(), rat(1, 3));
    }

    #[test]
    fn complex_inner_product_conjugates_the_left_argument() {
        let mu = CylinderMeasure::uniform(2);
        let i = Complex64::new(0.0, 1.0);
        let f = CylinderFunction::new(2, 0, vec![i, Complex64::zero()]).unwrap();
        let ip = inner_product(&f, &f, &mu).unwrap();
        assert!((ip - Complex64::new(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn support_detection() {
        let f = CylinderFunction::<Rational>::indicator(2, &p("011"));
        assert!(f.supported_in(&p("01")));
        assert!(f.supported_in(&Path::empty()));
        assert!(!f.supported_in(&p("1")));
    }

    #[test]
    fn scaled_functions_combine_over_a_common_root() {
        let root2 = Surd::sqrt_of(&int(2)).unwrap();
        let f = ScaledFunction::new(root2.clone(), CylinderFunction::indicator(2, &p("0")));
        let g = ScaledFunction::new(
            root2.mul_rational(&int(3)),
            CylinderFunction::indicator(2, &p("1")),
        );
        let h = f.add(&g).unwrap();
        assert_eq!(h.scale(), &root2);
        assert_eq!(h.body().coeffs(), &[int(1), int(3)]);

        let k = ScaledFunction::new(
            Surd::sqrt_of(&int(3)).unwrap(),
            CylinderFunction::indicator(2, &p("1")),
        );
        assert!(f.add(&k).is_err());
        assert!(f.sub(&f).unwrap().is_zero());
    }

    #[test]
    fn ratio_between_proportional_functions() {
        let root2 = Surd::sqrt_of(&int(2)).unwrap();
        let body = CylinderFunction::new(2, 0, vec![int(1), int(-1)]).unwrap();
        let f = ScaledFunction::new(root2.clone(), body.scale(&int(3)));
        let g = ScaledFunction::rational(body.clone());
        assert_eq!(f.ratio_to(&g).unwrap(), root2.mul_rational(&int(3)));
        let h =
            ScaledFunction::rational(CylinderFunction::new(2, 0, vec![int(1), int(1)]).unwrap());
        assert!(f.ratio_to(&h).is_none());
    }
}
