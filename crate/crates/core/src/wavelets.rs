//! Wavelets built from the Cuntz isometries.
//!
//! In the uniform case the scaling space `V₀` is spanned by the vertex
//! cylinders and the detail space `W_n` by the functions
//! `S_w f^{j,k} = D^{(n+1)/2} Σ_ℓ c^j_ℓ χ_[w k ℓ]` with `|w| = n`, where
//! `c^1, …, c^{D-1}` is an orthonormal basis of the complement of the
//! constant vector. For two-vertex product weights the detail spaces are
//! spanned by `S_w ψ_{1,k}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{int, pow_i, Rational, Surd};
use crate::function::{CylinderFunction, Generator, ScaledFunction};
use crate::path_space::Path;
use crate::representation::apply_word;
use crate::weights::WeightScheme;

/// `⟨x, y⟩ = (1/D) Σ conj(x_j) y_j`.
pub fn pf_inner(x: &[Complex64], y: &[Complex64]) -> Result<Complex64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    let sum: Complex64 = x.iter().zip(y).map(|(a, b)| a.conj() * b).sum();
    Ok(sum / x.len() as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OnbMode {
    /// `c^j_ℓ = exp(2πi jℓ/D)`.
    Fourier,
    /// Gram–Schmidt applied to `e_ℓ - e_{ℓ+1}`, kept exact.
    GramSchmidtReal,
}

/// A real vector `scale · entries` with rational entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactVector {
    pub scale: Surd,
    pub entries: Vec<Rational>,
}

impl ExactVector {
    fn to_complex(&self) -> Vec<Complex64> {
        let s = self.scale.to_f64();
        self.entries
            .iter()
            .map(|e| Complex64::new(s * crate::exact::to_f64(e), 0.0))
            .collect()
    }
}

/// `c^0 = (1, …, 1)` followed by `c^1, …, c^{D-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplementBasis {
    d: usize,
    mode: OnbMode,
    vectors: Vec<Vec<Complex64>>,
    exact: Option<Vec<ExactVector>>,
}

impl ComplementBasis {
    pub fn new(d: usize, mode: OnbMode) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidGraph(format!("need D >= 2, got {d}")));
        }
        match mode {
            OnbMode::Fourier => {
                let vectors = (0..d)
                    .map(|j| {
                        (0..d)
                            .map(|l| {
                                Complex64::from_polar(1.0, 2.0 * PI * (j * l % d) as f64 / d as f64)
                            })
                            .collect()
                    })
                    .collect();
                Ok(ComplementBasis {
                    d,
                    mode,
                    vectors,
                    exact: None,
                })
            }
            OnbMode::GramSchmidtReal => {
                let exact = gram_schmidt_real(d)?;
                let vectors = exact.iter().map(ExactVector::to_complex).collect();
                Ok(ComplementBasis {
                    d,
                    mode,
                    vectors,
                    exact: Some(exact),
                })
            }
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn mode(&self) -> OnbMode {
        self.mode
    }

    /// `c^j` as binary64 complex entries.
    pub fn vector(&self, j: usize) -> &[Complex64] {
        &self.vectors[j]
    }

    /// `c^j` exactly, available in the real mode.
    pub fn exact_vector(&self, j: usize) -> Option<&ExactVector> {
        self.exact.as_ref().map(|v| &v[j])
    }
}

fn pf_inner_exact(x: &[Rational], y: &[Rational]) -> Rational {
    x.iter().zip(y).map(|(a, b)| a * b).sum::<Rational>() / int(x.len() as i64)
}

fn gram_schmidt_real(d: usize) -> Result<Vec<ExactVector>> {
    let mut out = vec![ExactVector {
        scale: Surd::one(),
        entries: vec![int(1); d],
    }];
    let mut orthogonal: Vec<Vec<Rational>> = Vec::new();
    for l in 0..d - 1 {
        let mut u: Vec<Rational> = (0..d)
            .map(|m| {
                if m == l {
                    int(1)
                } else if m == l + 1 {
                    int(-1)
                } else {
                    Rational::zero()
                }
            })
            .collect();
        for v in &orthogonal {
            let coef = pf_inner_exact(v, &u) / pf_inner_exact(v, v);
            for (a, b) in u.iter_mut().zip(v) {
                *a -= &coef * b;
            }
        }
        let scale = Surd::sqrt_of(&pf_inner_exact(&u, &u).recip())?;
        out.push(ExactVector {
            scale,
            entries: u.clone(),
        });
        orthogonal.push(u);
    }
    Ok(out)
}

/// `V₀`: the indicators of the `D` vertex cylinders.
pub fn scaling_basis(d: usize) -> Vec<CylinderFunction<Rational>> {
    (0..d)
        .map(|i| CylinderFunction::indicator(d, &Path::vertex(i)))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Wavelet {
    pub word: Vec<usize>,
    pub j: usize,
    pub k: usize,
    pub function: Generator,
}

/// `{S_w f^{j,k} : |w| = n, k ∈ Z_D, 1 ≤ j ≤ D-1}` at level `n+1`, ordered by
/// word, then `k`, then `j`.
pub fn wavelet_basis(d: usize, n: usize, basis: &ComplementBasis) -> Result<Vec<Wavelet>> {
    if basis.d() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: basis.d(),
        });
    }
    let level = n + 1;
    let norm_sq = pow_i(&int(d as i64), level as i64);
    let norm = Surd::sqrt_of(&norm_sq)?;
    let mut out = Vec::with_capacity(d.pow(level as u32) * (d - 1));
    for widx in 0..d.pow(n as u32) {
        let word = Path::from_index(d, n as isize - 1, widx);
        for k in 0..d {
            let wk = word.child(k);
            for j in 1..d {
                let function = match basis.exact_vector(j) {
                    Some(c) => {
                        let mut body = CylinderFunction::<Rational>::zeros(d, level);
                        for (l, e) in c.entries.iter().enumerate() {
                            *body.coeff_mut(&wk.child(l)) = e.clone();
                        }
                        Generator::Exact(ScaledFunction::new(norm.mul(&c.scale), body))
                    }
                    None => {
                        let mut f = CylinderFunction::<Complex64>::zeros(d, level);
                        let scale = norm.to_f64();
                        for (l, e) in basis.vector(j).iter().enumerate() {
                            *f.coeff_mut(&wk.child(l)) = e * scale;
                        }
                        Generator::Float(f)
                    }
                };
                out.push(Wavelet {
                    word: word.vertices().to_vec(),
                    j,
                    k,
                    function,
                });
            }
        }
    }
    Ok(out)
}

/// `ψ_{1,k} = sqrt(r(1-r) r_k) [χ_[k0]/μ[k0] - χ_[k1]/μ[k1]]`.
pub fn mother_wavelet(w: &WeightScheme, k: usize) -> Result<ScaledFunction> {
    if w.d() != 2 {
        return Err(Error::Unsupported(format!(
            "two-vertex wavelets need D = 2, got D = {}",
            w.d()
        )));
    }
    if k >= 2 {
        return Err(Error::VertexOutOfRange { vertex: k, d: 2 });
    }
    let mu = w.measure();
    let r = mu.probs();
    let scale = Surd::sqrt_of(&(&r[0] * &r[1] * &r[k]))?;
    let vk = Path::vertex(k);
    let mut body = CylinderFunction::<Rational>::zeros(2, 1);
    *body.coeff_mut(&vk.child(0)) = mu.of(&vk.child(0)).recip();
    *body.coeff_mut(&vk.child(1)) = -mu.of(&vk.child(1)).recip();
    Ok(ScaledFunction::new(scale, body))
}

/// `{S_w ψ_{1,j} : |w| = k, j ∈ {0, 1}}` for a two-vertex weight, exactly.
pub fn uneven_wavelet_basis(w: &WeightScheme, k: usize) -> Result<Vec<Wavelet>> {
    let psi = [mother_wavelet(w, 0)?, mother_wavelet(w, 1)?];
    let mut out = Vec::with_capacity(2usize.pow(k as u32 + 1));
    for widx in 0..2usize.pow(k as u32) {
        let word = Path::from_index(2, k as isize - 1, widx);
        for (v, psi) in psi.iter().enumerate() {
            let function = Generator::Exact(apply_word(word.vertices(), psi, w)?);
            out.push(Wavelet {
                word: word.vertices().to_vec(),
                j: 1,
                k: v,
                function,
            });
        }
    }
    Ok(out)
}

/// The proportionality constant `sqrt(r(1-r)) (√r)^j (√(1-r))^{|w|+1-j}`
/// between `S_w ψ_{1,v}` and the eigenspace spanner of `[w v]`, where `j`
/// counts the zeros in `w v`.
pub fn uneven_constant(r: f64, wv: &Path) -> f64 {
    let zeros = wv.count(0) as i32;
    let ones = wv.num_vertices() as i32 - zeros;
    (r * (1.0 - r)).sqrt() * r.sqrt().powi(zeros) * (1.0 - r).sqrt().powi(ones)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::function::inner_product;
    use crate::weights::CylinderMeasure;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn pf_inner_examples() {
        let one = Complex64::new(1.0, 0.0);
        assert!(close(
            pf_inner(&[one, one], &[one, -one]).unwrap(),
            Complex64::zero()
        ));
        assert!(close(pf_inner(&[one, one], &[one, one]).unwrap(), one));
        assert!(pf_inner(&[one], &[one, one]).is_err());
    }

    #[test]
    fn complement_bases_are_orthonormal() {
        for d in 2..=6 {
            for mode in [OnbMode::Fourier, OnbMode::GramSchmidtReal] {
                let b = ComplementBasis::new(d, mode).unwrap();
                for j in 0..d {
                    for k in 0..d {
                        let expected = if j == k { 1.0 } else { 0.0 };
                        assert!(close(
                            pf_inner(b.vector(j), b.vector(k)).unwrap(),
                            Complex64::new(expected, 0.0)
                        ));
                    }
                }
            }
        }
    }

    #[test]
    fn complement_basis_examples() {
        let one = Complex64::new(1.0, 0.0);
        for mode in [OnbMode::Fourier, OnbMode::GramSchmidtReal] {
            let b = ComplementBasis::new(2, mode).unwrap();
            assert!(close(b.vector(1)[0], one) && close(b.vector(1)[1], -one));
        }
        let b = ComplementBasis::new(3, OnbMode::Fourier).unwrap();
        let omega = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        assert!(close(b.vector(1)[1], omega) && close(b.vector(1)[2], omega * omega));
        let exact = ComplementBasis::new(3, OnbMode::GramSchmidtReal).unwrap();
        let c2 = exact.exact_vector(2).unwrap();
        assert_eq!(c2.entries, vec![rat(1, 2), rat(1, 2), int(-1)]);
        assert_eq!(c2.scale.square(), int(2));
    }

    #[test]
    fn scaling_space() {
        let v0 = scaling_basis(2);
        assert_eq!(v0.len(), 2);
        let mu = CylinderMeasure::uniform(2);
        assert!(inner_product(&v0[0], &v0[1], &mu).unwrap().is_zero());
        assert_eq!(
            v0[0].add(&v0[1]).unwrap(),
            CylinderFunction::constant(2, 0, int(1))
        );
    }

    #[test]
    fn first_wavelets_for_two_vertices() {
        let b = ComplementBasis::new(2, OnbMode::GramSchmidtReal).unwrap();
        let w0 = wavelet_basis(2, 0, &b).unwrap();
        assert_eq!(w0.len(), 2);
        let Generator::Exact(f) = &w0[1].function else {
            panic!("expected exact generator")
        };
        assert_eq!(f.scale(), &Surd::sqrt_of(&int(2)).unwrap());
        assert_eq!(f.body().coeffs(), &[int(0), int(0), int(1), int(-1)]);
        assert_eq!((w0[1].k, w0[1].j), (1, 1));
        assert_eq!(
            wavelet_basis(3, 1, &ComplementBasis::new(3, OnbMode::Fourier).unwrap())
                .unwrap()
                .len(),
            18
        );
    }

    #[test]
    fn wavelets_are_orthonormal_and_orthogonal_to_scaling_space() {
        let d = 3;
        let mu = CylinderMeasure::uniform(d);
        for mode in [OnbMode::Fourier, OnbMode::GramSchmidtReal] {
            let b = ComplementBasis::new(d, mode).unwrap();
            let w1: Vec<_> = wavelet_basis(d, 1, &b)
                .unwrap()
                .into_iter()
                .map(|w| w.function.to_complex())
                .collect();
            for (a, f) in w1.iter().enumerate() {
                for (c, g) in w1.iter().enumerate() {
                    let expected = if a == c { 1.0 } else { 0.0 };
                    assert!(close(
                        inner_product(f, g, &mu).unwrap(),
                        Complex64::new(expected, 0.0)
                    ));
                }
                for v in scaling_basis(d) {
                    assert!(close(
                        inner_product(&v.to_complex(), f, &mu).unwrap(),
                        Complex64::zero()
                    ));
                }
            }
        }
    }

    #[test]
    fn uneven_wavelets() {
        let w = WeightScheme::product(vec![rat(1, 3), rat(2, 3)]).unwrap();
        let psi = mother_wavelet(&w, 0).unwrap();
        assert_eq!(psi.scale().square(), rat(2, 27));
        assert_eq!(psi.body().coeffs(), &[int(9), rat(-9, 2), int(0), int(0)]);

        let mu = w.measure();
        let basis = uneven_wavelet_basis(&w, 0).unwrap();
        for (a, f) in basis.iter().enumerate() {
            for (b, g) in basis.iter().enumerate() {
                let (Generator::Exact(f), Generator::Exact(g)) = (&f.function, &g.function) else {
                    unreachable!()
                };
                let ip = f.inner_product(g, &mu).unwrap();
                assert_eq!(ip.as_rational(), Some(if a == b { int(1) } else { int(0) }));
            }
        }
        assert_eq!(uneven_wavelet_basis(&w, 2).unwrap().len(), 8);
        let three = WeightScheme::even(3).unwrap();
        assert!(uneven_wavelet_basis(&three, 0).is_err());
    }

    #[test]
    fn uneven_reduces_to_even_at_one_half() {
        let w = WeightScheme::product(vec![rat(1, 2), rat(1, 2)]).unwrap();
        let even = wavelet_basis(
            2,
            0,
            &ComplementBasis::new(2, OnbMode::GramSchmidtReal).unwrap(),
        )
        .unwrap();
        for (u, e) in uneven_wavelet_basis(&w, 0).unwrap().iter().zip(&even) {
            let (Generator::Exact(u), Generator::Exact(e)) = (&u.function, &e.function) else {
                unreachable!()
            };
            assert!(u.ratio_to(e).is_some());
        }
    }
}
