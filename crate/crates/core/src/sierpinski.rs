//! Sierpinski-type fractals `S_A` attached to `{0,1}` matrices and the
//! measure-preserving identification of the path space with `S_A`.
//!
//! The 1-entries `(a_j, b_j)` of an `N × N` matrix `A`, in lexicographic
//! order, index the contractions `τ_j(x, y) = ((x + a_j)/N, (y + b_j)/N)`.
//! A path `v_0 … v_{M-1}` goes to the box `τ_{v_0} ∘ ⋯ ∘ τ_{v_{M-1}}([0,1]²)`.

use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{int, pow_i, Rational};
use crate::function::{CylinderFunction, Scalar};
use crate::path_space::Path;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymbolSet {
    n: usize,
    symbols: Vec<(usize, usize)>,
}

impl SymbolSet {
    /// The positions of the 1-entries of a square `{0,1}` matrix, sorted.
    pub fn from_matrix(a: &[Vec<u32>]) -> Result<Self> {
        let n = a.len();
        if n < 2 {
            return Err(Error::DegenerateMatrix(format!("need N >= 2, got {n}")));
        }
        if let Some(row) = a.iter().find(|r| r.len() != n) {
            return Err(Error::DegenerateMatrix(format!(
                "matrix is not square: row of length {} for N = {n}",
                row.len()
            )));
        }
        if a.iter().flatten().any(|&x| x > 1) {
            return Err(Error::DegenerateMatrix("entries must be 0 or 1".into()));
        }
        let symbols: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| a[i][j] == 1)
            .collect();
        if symbols.len() < 2 {
            return Err(Error::DegenerateMatrix(format!(
                "need at least 2 nonzero entries, got {}",
                symbols.len()
            )));
        }
        Ok(SymbolSet { n, symbols })
    }

    /// The number of symbols `D`.
    pub fn d(&self) -> usize {
        self.symbols.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn symbols(&self) -> &[(usize, usize)] {
        &self.symbols
    }

    /// `τ_j(x, y) = ((x + a_j)/N, (y + b_j)/N)`.
    pub fn contract(&self, j: usize, point: &(Rational, Rational)) -> Result<(Rational, Rational)> {
        let &(a, b) = self.symbols.get(j).ok_or(Error::VertexOutOfRange {
            vertex: j,
            d: self.d(),
        })?;
        let n = int(self.n as i64);
        Ok((
            (&point.0 + int(a as i64)) / &n,
            (&point.1 + int(b as i64)) / &n,
        ))
    }

    /// The path of length `depth - 1` whose box contains `point` in its
    /// half-open interior, or `None` if the point lies outside `S_A` at that
    /// resolution.
    pub fn address(&self, point: &(Rational, Rational), depth: usize) -> Option<Path> {
        let n = int(self.n as i64);
        let (mut x, mut y) = point.clone();
        let mut vertices = Vec::with_capacity(depth);
        for _ in 0..depth {
            x *= &n;
            y *= &n;
            let a = x.floor();
            let b = y.floor();
            x -= &a;
            y -= &b;
            let key = (a.to_integer().to_usize()?, b.to_integer().to_usize()?);
            vertices.push(self.symbols.binary_search(&key).ok()?);
        }
        Some(Path::new(vertices))
    }
}

/// Parses rows given as `0/1` strings separated by commas, e.g. `"10,11"`.
pub fn parse_matrix(text: &str) -> Result<Vec<Vec<u32>>> {
    text.split(',')
        .map(|row| {
            row.trim()
                .chars()
                .map(|c| c.to_digit(2).ok_or_else(|| Error::Parse(text.to_string())))
                .collect()
        })
        .collect()
}

/// The box `[x, x+side) × [y, y+side)` attached to a nonempty path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractalBox {
    pub anchor: (Rational, Rational),
    pub side: Rational,
    pub depth: usize,
    pub path: Path,
}

impl FractalBox {
    pub fn contains_box(&self, other: &FractalBox) -> bool {
        self.anchor.0 <= other.anchor.0
            && self.anchor.1 <= other.anchor.1
            && &other.anchor.0 + &other.side <= &self.anchor.0 + &self.side
            && &other.anchor.1 + &other.side <= &self.anchor.1 + &self.side
    }

    /// Whether the half-open boxes share no point.
    pub fn disjoint_from(&self, other: &FractalBox) -> bool {
        let apart =
            |a: &Rational, sa: &Rational, b: &Rational, sb: &Rational| a + sa <= *b || b + sb <= *a;
        apart(&self.anchor.0, &self.side, &other.anchor.0, &other.side)
            || apart(&self.anchor.1, &self.side, &other.anchor.1, &other.side)
    }

    pub fn center(&self) -> (Rational, Rational) {
        let half = &self.side / int(2);
        (&self.anchor.0 + &half, &self.anchor.1 + &half)
    }
}

/// `(Σ a_{v_{i-1}}/N^i, Σ b_{v_{i-1}}/N^i)` with side `N^{-M}`, `M = |γ|+1`.
pub fn embed_path(s: &SymbolSet, path: &Path) -> Result<FractalBox> {
    if path.is_empty() {
        return Err(Error::InvalidPath("the empty path has no box".into()));
    }
    let n = int(s.n as i64);
    let mut scale = Rational::from_integer(1.into());
    let (mut x, mut y) = (Rational::zero(), Rational::zero());
    for &v in path.vertices() {
        let &(a, b) = s.symbols.get(v).ok_or(Error::VertexOutOfRange {
            vertex: v,
            d: s.d(),
        })?;
        scale /= &n;
        x += int(a as i64) * &scale;
        y += int(b as i64) * &scale;
    }
    Ok(FractalBox {
        anchor: (x, y),
        side: scale,
        depth: path.num_vertices(),
        path: path.clone(),
    })
}

/// `H(τ_{j_1} ∘ ⋯ ∘ τ_{j_M}(S_A)) = D^{-M}`.
pub fn hausdorff_measure(s: &SymbolSet, depth: usize) -> Rational {
    pow_i(&int(s.d() as i64), -(depth as i64))
}

/// `ln D / ln N`.
pub fn hausdorff_dimension(s: &SymbolSet) -> f64 {
    (s.d() as f64).ln() / (s.n as f64).ln()
}

/// All boxes of depth `depth ≥ 1`, in lexicographic path order.
pub fn boxes(s: &SymbolSet, depth: usize) -> Result<Vec<FractalBox>> {
    let d = s.d();
    (0..d.pow(depth as u32))
        .map(|k| embed_path(s, &Path::from_index(d, depth as isize - 1, k)))
        .collect()
}

/// `∫ f dH`, summed box by box: each depth-`(level+1)` box contributes the
/// value of `f` at the path addressed by its center times `H` of the box.
pub fn box_integral<T: Scalar>(s: &SymbolSet, f: &CylinderFunction<T>) -> Result<T> {
    if f.d() != s.d() {
        return Err(Error::DimensionMismatch {
            expected: s.d(),
            found: f.d(),
        });
    }
    let depth = f.level() + 1;
    let h = T::from_rational(&hausdorff_measure(s, depth));
    let mut total = T::zero();
    for b in boxes(s, depth)? {
        let path = s
            .address(&b.center(), depth)
            .ok_or_else(|| Error::InvalidPath(b.path.to_string()))?;
        total = total + f.value(&path) * h.clone();
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderFormat {
    Csv,
    Svg,
}

impl FromStr for RenderFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(RenderFormat::Csv),
            "svg" => Ok(RenderFormat::Svg),
            other => Err(Error::UnsupportedFormat(other.to_string())),
        }
    }
}

pub const CSV_HEADER: &str = "x_num,x_den,y_num,y_den,side_num,side_den,re,im";

const SVG_SIZE: f64 = 512.0;

/// Blue–white–red colour for `t ∈ [-1, 1]`, as `#RRGGBBAA`.
fn diverging_color(t: f64) -> String {
    let t = if t.is_finite() {
        t.clamp(-1.0, 1.0)
    } else {
        0.0
    };
    let (cold, warm) = ((59.0, 76.0, 192.0), (180.0, 4.0, 38.0));
    let white = (247.0, 247.0, 247.0);
    let (end, u) = if t < 0.0 { (cold, -t) } else { (warm, t) };
    let mix = |a: f64, b: f64| (a + (b - a) * u).round() as u8;
    format!(
        "#{:02x}{:02x}{:02x}ff",
        mix(white.0, end.0),
        mix(white.1, end.1),
        mix(white.2, end.2)
    )
}

/// One record (CSV) or rectangle (SVG) per box of depth `depth + 1`, after
/// refining `f` to level `depth`.
pub fn render(
    s: &SymbolSet,
    f: &CylinderFunction<Complex64>,
    depth: usize,
    format: RenderFormat,
) -> Result<String> {
    if f.d() != s.d() {
        return Err(Error::DimensionMismatch {
            expected: s.d(),
            found: f.d(),
        });
    }
    let f = f.refine(depth)?;
    let all = boxes(s, depth + 1)?;
    let mut out = String::new();
    match format {
        RenderFormat::Csv => {
            out.push_str(CSV_HEADER);
            out.push('\n');
            for (b, v) in all.iter().zip(f.coeffs()) {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    b.anchor.0.numer(),
                    b.anchor.0.denom(),
                    b.anchor.1.numer(),
                    b.anchor.1.denom(),
                    b.side.numer(),
                    b.side.denom(),
                    v.re,
                    v.im
                )
                .expect("writing to a String cannot fail");
            }
        }
        RenderFormat::Svg => {
            let max = f.coeffs().iter().map(|v| v.re.abs()).fold(0.0, f64::max);
            writeln!(
                out,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_SIZE}\" height=\"{SVG_SIZE}\" viewBox=\"0 0 {SVG_SIZE} {SVG_SIZE}\">"
            )
            .expect("writing to a String cannot fail");
            for (b, v) in all.iter().zip(f.coeffs()) {
                let side = crate::exact::to_f64(&b.side) * SVG_SIZE;
                let x = crate::exact::to_f64(&b.anchor.0) * SVG_SIZE;
                // Flip so that (0, 0) is the bottom-left corner.
                let y = SVG_SIZE - crate::exact::to_f64(&b.anchor.1) * SVG_SIZE - side;
                let t = if max > 0.0 { v.re / max } else { 0.0 };
                writeln!(
                    out,
                    "<rect x=\"{x}\" y=\"{y}\" width=\"{side}\" height=\"{side}\" fill=\"{}\"/>",
                    diverging_color(t)
                )
                .expect("writing to a String cannot fail");
            }
            out.push_str("</svg>\n");
        }
    }
    Ok(out)
}
