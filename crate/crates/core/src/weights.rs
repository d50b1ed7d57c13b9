//! Weights on finite paths, the induced ultrametric, cylinder measures and
//! the closed-form ζ-functions of the associated spectral triples.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{int, pow_i, to_f64, Rational};
use crate::path_space::{longest_common_prefix, Path};

/// A weight on the finite paths of the full graph on `D` vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightScheme {
    /// `w(γ) = λ^{-|γ|} / D`, `w(∘) = 1`.
    SelfSimilar { d: usize, lambda: Rational },
    /// `w(γ) = ∏ r_v` over the vertices of `γ`, `w(∘) = 1`.
    Product { r: Vec<Rational> },
}

impl WeightScheme {
    pub fn self_similar(d: usize, lambda: Rational) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidWeight(format!("need D >= 2, got {d}")));
        }
        if lambda <= Rational::one() {
            return Err(Error::InvalidWeight(format!(
                "scaling factor must exceed 1, got {lambda}"
            )));
        }
        Ok(WeightScheme::SelfSimilar { d, lambda })
    }

    /// The self-similar weight with `λ = D`, the choice made for the closed-form spectrum.
    pub fn even(d: usize) -> Result<Self> {
        Self::self_similar(d, int(d as i64))
    }

    /// Product weight; the entries must be positive and sum to exactly 1.
    pub fn product(r: Vec<Rational>) -> Result<Self> {
        if r.len() < 2 {
            return Err(Error::InvalidWeight(format!(
                "need at least 2 vertex weights, got {}",
                r.len()
            )));
        }
        if let Some(bad) = r.iter().find(|x| !x.is_positive()) {
            return Err(Error::InvalidWeight(format!(
                "vertex weights must be positive, got {bad}"
            )));
        }
        let total: Rational = r.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidWeight(format!(
                "vertex weights must sum to 1, got {total}"
            )));
        }
        Ok(WeightScheme::Product { r })
    }

    pub fn d(&self) -> usize {
        match self {
            WeightScheme::SelfSimilar { d, .. } => *d,
            WeightScheme::Product { r } => r.len(),
        }
    }

    pub fn is_self_similar_with_lambda_d(&self) -> bool {
        matches!(self, WeightScheme::SelfSimilar { d, lambda } if *lambda == int(*d as i64))
    }

    /// The exact weight of a path.
    pub fn weight(&self, path: &Path) -> Rational {
        if path.is_empty() {
            return Rational::one();
        }
        match self {
            WeightScheme::SelfSimilar { d, lambda } => {
                pow_i(lambda, -(path.len() as i64)) / int(*d as i64)
            }
            WeightScheme::Product { r } => path.vertices().iter().map(|&v| r[v].clone()).product(),
        }
    }

    /// The measure induced by the Dixmier trace: uniform for self-similar
    /// weights (whatever λ is) and the weight itself for product weights.
    pub fn measure(&self) -> CylinderMeasure {
        match self {
            WeightScheme::SelfSimilar { d, .. } => CylinderMeasure::uniform(*d),
            WeightScheme::Product { r } => CylinderMeasure { probs: r.clone() },
        }
    }

    pub fn dixmier_measure(&self, path: &Path) -> Rational {
        self.measure().of(path)
    }

    /// Abscissa of convergence of the ζ-function: `ln D / ln λ`, or 1 for product weights.
    pub fn abscissa(&self) -> f64 {
        match self {
            WeightScheme::SelfSimilar { d, lambda } => (*d as f64).ln() / to_f64(lambda).ln(),
            WeightScheme::Product { .. } => 1.0,
        }
    }

    fn check_convergence(&self, s: f64) -> Result<()> {
        let abscissa = self.abscissa();
        let diverges = match self {
            WeightScheme::SelfSimilar { d, lambda } => {
                s <= abscissa || *d as f64 * to_f64(lambda).powf(-s) >= 1.0
            }
            WeightScheme::Product { r } => {
                s <= 1.0 || r.iter().map(|x| to_f64(x).powf(s)).sum::<f64>() >= 1.0
            }
        };
        if diverges || s.is_nan() {
            return Err(Error::Divergence { s, abscissa });
        }
        Ok(())
    }

    /// `ζ(s) = Σ_γ w(γ)^s` over all finite paths including ∘, in closed form.
    pub fn zeta(&self, s: f64) -> Result<f64> {
        self.check_convergence(s)?;
        Ok(match self {
            WeightScheme::SelfSimilar { d, lambda } => {
                let d = *d as f64;
                let lambda = to_f64(lambda);
                // w(∘) = 1, then D^{n+1} paths of weight λ^{-n}/D at each length n ≥ 0.
                1.0 + d.powf(1.0 - s) / (1.0 - d * lambda.powf(-s))
            }
            WeightScheme::Product { r } => {
                1.0 / (1.0 - r.iter().map(|x| to_f64(x).powf(s)).sum::<f64>())
            }
        })
    }

    /// `Σ_{η ⊇ γ} w(η)^s / ζ(s)`, whose limit as `s` decreases to the
    /// abscissa is the cylinder measure.
    pub fn dixmier_ratio(&self, path: &Path, s: f64) -> Result<f64> {
        self.check_convergence(s)?;
        if path.is_empty() {
            return Ok(1.0);
        }
        Ok(match self {
            WeightScheme::SelfSimilar { d, lambda } => {
                let d = *d as f64;
                let lambda = to_f64(lambda);
                let n = path.len() as f64;
                lambda.powf(-n * s) / ((1.0 - d * lambda.powf(-s)) * d.powf(s) + d)
            }
            WeightScheme::Product { .. } => {
                // Extensions γη factor as w(γ) w(η') over all finite η' (including ∘).
                let zeta = self.zeta(s)?;
                to_f64(&self.weight(path)).powf(s) * (zeta - 1.0) / zeta
            }
        })
    }
}

/// Perron–Frobenius measure of the cylinder `[γ]` in the full graph: `D^{-(|γ|+1)}`.
pub fn pf_measure(d: usize, path: &Path) -> Rational {
    pow_i(&int(d as i64), -(path.num_vertices() as i64))
}

/// A Bernoulli measure on the boundary: `μ[γ] = ∏ p_v` over the vertices of `γ`.
///
/// Both weight families induce such a measure, with `p_v = 1/D` in the
/// self-similar case and `p_v = r_v` for product weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CylinderMeasure {
    probs: Vec<Rational>,
}

impl CylinderMeasure {
    pub fn uniform(d: usize) -> Self {
        CylinderMeasure {
            probs: vec![Rational::new(1.into(), (d as i64).into()); d],
        }
    }

    pub fn d(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn of(&self, path: &Path) -> Rational {
        path.vertices()
            .iter()
            .map(|&v| self.probs[v].clone())
            .product()
    }

    /// Measures of every length-`level` path, indexed in lexicographic order.
    pub fn level_masses(&self, level: usize) -> Vec<Rational> {
        let mut masses = vec![Rational::one()];
        for _ in 0..=level {
            masses = masses
                .iter()
                .flat_map(|m| self.probs.iter().map(move |p| m * p))
                .collect();
        }
        masses
    }

    pub fn level_masses_f64(&self, level: usize) -> Vec<f64> {
        let probs: Vec<f64> = self.probs.iter().map(to_f64).collect();
        let mut masses = vec![1.0];
        for _ in 0..=level {
            masses = masses
                .iter()
                .flat_map(|m| probs.iter().map(move |p| m * p))
                .collect();
        }
        masses
    }
}

/// `d_w(x, y) = w(x ∧ y)` for distinct points, 0 otherwise.
///
/// `x` and `y` are finite truncations of infinite paths. If one truncation
/// is a prefix of the other the points cannot be told apart, so the caller
/// must state whether the underlying infinite paths are equal.
pub fn ultrametric(w: &WeightScheme, x: &Path, y: &Path, declared_equal: bool) -> Result<Rational> {
    let meet = longest_common_prefix(x, y);
    let undecided =
        meet.num_vertices() == x.num_vertices() || meet.num_vertices() == y.num_vertices();
    match (declared_equal, undecided) {
        (true, true) => Ok(Rational::zero()),
        (true, false) => Err(Error::InvalidPath(format!(
            "{x} and {y} differ but were declared equal"
        ))),
        (false, true) => Err(Error::AmbiguousTruncation),
        (false, false) => Ok(w.weight(&meet)),
    }
}

/// Summary line used by the CLI.
#[derive(Clone, Debug, Serialize)]
pub struct MeasureRecord {
    pub path: Path,
    pub measure_num: String,
    pub measure_den: String,
}

impl MeasureRecord {
    pub fn new(path: Path, measure: &Rational) -> Self {
        MeasureRecord {
            path,
            measure_num: measure.numer().to_string(),
            measure_den: measure.denom().to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::path_space::paths_up_to;
    use proptest::prelude::*;

    fn p(s: &str) -> Path {
        s.parse().unwrap()
    }

    #[test]
    fn pf_measure_examples() {
        assert_eq!(pf_measure(2, &Path::empty()), int(1));
        assert_eq!(pf_measure(2, &p("01")), rat(1, 4));
        // Child-sum oracle: 1/27 must equal the sum of its three children at 1/81.
        let children: Rational = (0..3).map(|v| pf_measure(3, &p("012").child(v))).sum();
        assert_eq!(children, rat(1, 27));
        assert_eq!(pf_measure(3, &p("012")), rat(1, 27));
    }

    #[test]
    fn weight_examples() {
        let ss = WeightScheme::self_similar(3, int(3)).unwrap();
        assert_eq!(ss.weight(&p("012")), rat(1, 27));
        let pr = WeightScheme::product(vec![rat(1, 3), rat(2, 3)]).unwrap();
        assert_eq!(pr.weight(&p("01")), rat(2, 9));
        assert_eq!(ss.weight(&Path::empty()), int(1));
        assert_eq!(pr.weight(&Path::empty()), int(1));
    }

    #[test]
    fn weight_validation() {
        assert!(WeightScheme::self_similar(2, int(1)).is_err());
        assert!(WeightScheme::product(vec![rat(1, 2), rat(1, 3)]).is_err());
        assert!(WeightScheme::product(vec![int(1), int(0)]).is_err());
        assert!(WeightScheme::product(vec![int(1)]).is_err());
    }

    #[test]
    fn ultrametric_examples() {
        let w = WeightScheme::self_similar(2, int(2)).unwrap();
        assert_eq!(
            ultrametric(&w, &p("0101"), &p("0101"), true).unwrap(),
            int(0)
        );
        assert!(matches!(
            ultrametric(&w, &p("0101"), &p("0101"), false),
            Err(Error::AmbiguousTruncation)
        ));
        assert_eq!(ultrametric(&w, &p("00"), &p("10"), false).unwrap(), int(1));
        assert_eq!(
            ultrametric(&w, &p("010"), &p("011"), false).unwrap(),
            rat(1, 4)
        );
    }

    #[test]
    fn zeta_examples() {
        let w = WeightScheme::self_similar(2, int(2)).unwrap();
        assert!((w.zeta(2.0).unwrap() - 2.0).abs() < 1e-15);
        let u = WeightScheme::product(vec![rat(1, 2), rat(1, 2)]).unwrap();
        assert!((u.zeta(2.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(matches!(w.zeta(1.0), Err(Error::Divergence { .. })));
        assert!(matches!(w.zeta(0.5), Err(Error::Divergence { .. })));
        assert!(matches!(u.zeta(1.0), Err(Error::Divergence { .. })));
        // 1 + Σ_n 2^{n+1} (4^{-n}/2) = 1 + 2.
        let v = WeightScheme::self_similar(2, int(4)).unwrap();
        assert!((v.zeta(1.0).unwrap() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn abscissa_examples() {
        assert!((WeightScheme::even(5).unwrap().abscissa() - 1.0).abs() < 1e-15);
        assert!((WeightScheme::self_similar(2, int(4)).unwrap().abscissa() - 0.5).abs() < 1e-15);
        assert_eq!(
            WeightScheme::product(vec![rat(1, 3), rat(2, 3)])
                .unwrap()
                .abscissa(),
            1.0
        );
    }

    #[test]
    fn dixmier_ratio_examples() {
        let w = WeightScheme::self_similar(2, int(2)).unwrap();
        assert!((w.dixmier_ratio(&p("01"), 2.0).unwrap() - 1.0 / 16.0).abs() < 1e-15);
        assert!((w.dixmier_ratio(&p("01"), 1.0 + 1e-9).unwrap() - 0.25).abs() < 1e-8);
        assert_eq!(w.dixmier_ratio(&Path::empty(), 3.0).unwrap(), 1.0);
        assert!(w.dixmier_ratio(&p("01"), 1.0).is_err());
    }

    #[test]
    fn dixmier_measure_examples() {
        let w = WeightScheme::self_similar(2, int(5)).unwrap();
        assert_eq!(w.dixmier_measure(&p("010")), rat(1, 8));
        let pr = WeightScheme::product(vec![rat(1, 3), rat(2, 3)]).unwrap();
        assert_eq!(pr.dixmier_measure(&p("01")), rat(2, 9));
        assert_eq!(pr.dixmier_measure(&Path::empty()), int(1));
    }

    #[test]
    fn measures_are_additive_over_children() {
        let schemes = [
            WeightScheme::even(3).unwrap(),
            WeightScheme::self_similar(2, rat(5, 2)).unwrap(),
            WeightScheme::product(vec![rat(1, 3), rat(2, 3)]).unwrap(),
            WeightScheme::product(vec![rat(1, 5), rat(3, 10), rat(1, 2)]).unwrap(),
        ];
        for w in &schemes {
            let mu = w.measure();
            for path in paths_up_to(w.d(), 5) {
                let children: Rational = (0..w.d()).map(|v| mu.of(&path.child(v))).sum();
                assert_eq!(children, mu.of(&path), "{path}");
            }
            assert_eq!(mu.of(&Path::empty()), int(1));
        }
    }

    #[test]
    fn uniform_product_reproduces_even_weights() {
        for d in 2..5usize {
            let even = WeightScheme::even(d).unwrap();
            let uniform = WeightScheme::product(vec![rat(1, d as i64); d]).unwrap();
            for path in paths_up_to(d, 3) {
                assert_eq!(even.weight(&path), uniform.weight(&path));
                assert_eq!(even.dixmier_measure(&path), uniform.dixmier_measure(&path));
            }
        }
    }

    #[test]
    fn weights_decrease_along_extensions() {
        let w = WeightScheme::product(vec![rat(1, 3), rat(2, 3)]).unwrap();
        for path in paths_up_to(2, 4) {
            for v in 0..2 {
                assert!(w.weight(&path.child(v)) < w.weight(&path));
            }
        }
    }

    fn truncation() -> impl Strategy<Value = Path> {
        prop::collection::vec(0usize..2, 9).prop_map(Path::new)
    }

    proptest! {
        #[test]
        fn strong_triangle_inequality(x in truncation(), y in truncation(), z in truncation()) {
            prop_assume!(x != y && y != z && x != z);
            for w in [WeightScheme::even(2).unwrap(), WeightScheme::product(vec![rat(3, 10), rat(7, 10)]).unwrap()] {
                let dxy = ultrametric(&w, &x, &y, false).unwrap();
                let dxz = ultrametric(&w, &x, &z, false).unwrap();
                let dzy = ultrametric(&w, &z, &y, false).unwrap();
                prop_assert!(dxy <= dxz.clone().max(dzy));
            }
        }
    }
}
