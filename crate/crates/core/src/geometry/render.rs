//! SVG and CSV output for point clouds in projective space.
//!
//! Points are mapped into the affine chart `x / ⟨w, x⟩` and then projected
//! to the plane by two linear functionals. Output is byte-for-byte
//! deterministic for a given input.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{LimitPoint, OrbitPoint, ProjectivePoint};
use crate::error::{Error, Result};

/// Width and height of the SVG view box.
pub const SVG_SIZE: f64 = 1000.0;
const MARGIN: f64 = 40.0;
const RADIUS: f64 = 2.0;
/// Points with `|⟨w, x⟩| ≤ CHART_EPS · |x|` lie at infinity in the chart.
const CHART_EPS: f64 = 1e-12;

/// Affine chart plus planar projection.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct Chart {
    /// Functional `w` defining the affine chart `⟨w, x⟩ = 1`.
    pub functional: Vec<f64>,
    /// The two rows of the projection to the plane.
    pub axes: [Vec<f64>; 2],
}

impl Chart {
    /// Chart with the given functional (all ones when `None`) showing
    /// coordinates `i` and `j`.
    pub fn coordinates(dim: usize, i: usize, j: usize, functional: Option<Vec<f64>>) -> Result<Self> {
        for k in [i, j] {
            if k >= dim {
                return Err(Error::IndexOutOfRange { index: k, len: dim });
            }
        }
        let unit = |k: usize| (0..dim).map(|m| if m == k { 1.0 } else { 0.0 }).collect();
        Chart::projection(functional.unwrap_or_else(|| vec![1.0; dim]), [unit(i), unit(j)])
    }

    /// Default coordinate axes for a chart: the first two coordinates, except
    /// that when the functional is a multiple of a basis covector `e_k`,
    /// coordinate `k` is constant on the chart and is skipped.
    pub fn default_axes(dim: usize, functional: Option<&[f64]>) -> (usize, usize) {
        let pinned = functional.and_then(|w| {
            let support: Vec<usize> = (0..w.len()).filter(|&k| w[k] != 0.0).collect();
            (support.len() == 1).then(|| support[0])
        });
        let mut free = (0..dim).filter(|&k| Some(k) != pinned);
        let i = free.next().unwrap_or(0);
        (i, free.next().unwrap_or(i + 1))
    }

    pub fn projection(functional: Vec<f64>, axes: [Vec<f64>; 2]) -> Result<Self> {
        let dim = functional.len();
        for a in &axes {
            if a.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: a.len() });
            }
        }
        if functional.iter().all(|x| *x == 0.0) || functional.iter().any(|x| !x.is_finite()) {
            return Err(Error::Unsupported("chart functional must be finite and nonzero".into()));
        }
        Ok(Chart { functional, axes })
    }

    pub fn dim(&self) -> usize {
        self.functional.len()
    }

    /// Planar coordinates of `x`, or `None` when `x` is at infinity in the chart.
    pub fn project(&self, x: &[f64]) -> Option<(f64, f64)> {
        let dot = |a: &[f64]| a.iter().zip(x).map(|(p, q)| p * q).sum::<f64>();
        let scale = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let h = dot(&self.functional);
        if !h.is_finite() || h.abs() <= CHART_EPS * scale || scale == 0.0 {
            return None;
        }
        Some((dot(&self.axes[0]) / h, dot(&self.axes[1]) / h))
    }
}

/// One row of a plot: the point, its group word (0-based generators) and,
/// for limit points, proximality.
#[derive(Clone, Debug, PartialEq)]
pub struct PlotPoint {
    pub point: ProjectivePoint,
    pub word: Vec<usize>,
    pub proximal: Option<bool>,
}

impl From<&OrbitPoint> for PlotPoint {
    fn from(p: &OrbitPoint) -> Self {
        PlotPoint { point: ProjectivePoint::Exact(p.representative()), word: p.word.clone(), proximal: None }
    }
}

impl From<&LimitPoint> for PlotPoint {
    fn from(p: &LimitPoint) -> Self {
        PlotPoint { point: p.point.clone(), word: p.word.clone(), proximal: Some(p.proximal) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct RenderReport {
    pub chart: Chart,
    pub points_drawn: usize,
    /// Points at infinity in the chart, or with non-finite coordinates.
    pub points_skipped: usize,
    /// `[min_u, min_v, max_u, max_v]` of the drawn points in chart coordinates.
    pub bounds: Option<[f64; 4]>,
    /// `[s, cu, cv]`: chart point `(u, v)` is drawn at
    /// `x = 500 + s·(u − cu)`, `y = 500 − s·(v − cv)`.
    pub transform: [f64; 3],
    /// Set when the drawn points are fewer than three or collinear.
    pub warning: Option<String>,
}

fn planar(points: &[PlotPoint], chart: &Chart) -> Result<Vec<Option<(f64, f64)>>> {
    points
        .iter()
        .map(|p| {
            if p.point.dim() != chart.dim() {
                return Err(Error::DimensionMismatch { expected: chart.dim(), got: p.point.dim() });
            }
            Ok(chart.project(&p.point.to_f64()).filter(|(u, v)| u.is_finite() && v.is_finite()))
        })
        .collect()
}

fn degeneracy(drawn: &[(f64, f64)]) -> Option<String> {
    if drawn.len() < 3 {
        return Some(format!("degenerate: only {} drawable point(s)", drawn.len()));
    }
    let (u0, v0) = drawn[0];
    let far = drawn.iter().copied().max_by(|a, b| {
        let d = |p: &(f64, f64)| (p.0 - u0).hypot(p.1 - v0);
        d(a).total_cmp(&d(b))
    })?;
    let (du, dv) = (far.0 - u0, far.1 - v0);
    let len = du.hypot(dv);
    if len == 0.0 {
        return Some("degenerate: all points coincide in the chart".into());
    }
    let off = drawn.iter().map(|&(u, v)| ((u - u0) * dv - (v - v0) * du).abs() / len).fold(0.0, f64::max);
    if off <= 1e-9 * len {
        return Some("degenerate: points are collinear in the chart".into());
    }
    None
}

/// Renders `points` as an SVG scatter plot; `note` (e.g. the PRNG seed) is
/// appended to the metadata when nonempty.
pub fn render_svg(points: &[PlotPoint], chart: &Chart, note: &str) -> Result<(String, RenderReport)> {
    let projected = planar(points, chart)?;
    let drawn: Vec<(f64, f64)> = projected.iter().flatten().copied().collect();
    let bounds = (!drawn.is_empty()).then(|| {
        drawn.iter().fold([f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY], |b, &(u, v)| {
            [b[0].min(u), b[1].min(v), b[2].max(u), b[3].max(v)]
        })
    });
    // One scale for both axes keeps the picture undistorted.
    let (scale, cu, cv) = match bounds {
        Some([a, b, c, d]) => {
            let extent = (c - a).max(d - b);
            let scale = if extent > 0.0 { (SVG_SIZE - 2.0 * MARGIN) / extent } else { 1.0 };
            (scale, (a + c) / 2.0, (b + d) / 2.0)
        }
        None => (1.0, 0.0, 0.0),
    };
    let report = RenderReport {
        chart: chart.clone(),
        points_drawn: drawn.len(),
        points_skipped: points.len() - drawn.len(),
        bounds,
        transform: [scale, cu, cv],
        warning: degeneracy(&drawn),
    };
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SVG_SIZE} {SVG_SIZE}" width="{SVG_SIZE}" height="{SVG_SIZE}">"#);
    let _ = writeln!(
        svg,
        "<metadata>{}chart functional {:?}; axes {:?} {:?}; transform {:?}; drawn {}; skipped {}{}</metadata>",
        if note.is_empty() { String::new() } else { format!("{note}; ") },
        chart.functional,
        chart.axes[0],
        chart.axes[1],
        report.transform,
        report.points_drawn,
        report.points_skipped,
        report.warning.as_ref().map(|w| format!("; warning: {w}")).unwrap_or_default()
    );
    for &(u, v) in &drawn {
        let x = SVG_SIZE / 2.0 + (u - cu) * scale;
        // SVG's y axis points down.
        let y = SVG_SIZE / 2.0 - (v - cv) * scale;
        let _ = writeln!(svg, r#"<circle cx="{x:.3}" cy="{y:.3}" r="{RADIUS}"/>"#);
    }
    svg.push_str("</svg>\n");
    Ok((svg, report))
}

/// Renders `points` as CSV with columns `x1..xn, chart_u, chart_v, word,
/// proximal`. Chart columns are empty for points at infinity; the word is
/// space-separated 0-based generator indices.
pub fn render_csv(points: &[PlotPoint], chart: &Chart) -> Result<String> {
    let projected = planar(points, chart)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = (1..=chart.dim()).map(|k| format!("x{k}")).collect();
    header.extend(["chart_u", "chart_v", "word", "proximal"].map(String::from));
    let csv_err = |e: csv::Error| Error::Unsupported(format!("csv output: {e}"));
    w.write_record(&header).map_err(csv_err)?;
    for (p, uv) in points.iter().zip(&projected) {
        let mut row: Vec<String> = match &p.point {
            ProjectivePoint::Exact(v) => v.iter().map(|x| x.to_string()).collect(),
            ProjectivePoint::Float(v) => v.iter().map(|x| x.to_string()).collect(),
        };
        match uv {
            Some((u, v)) => row.extend([u.to_string(), v.to_string()]),
            None => row.extend([String::new(), String::new()]),
        }
        row.push(p.word.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(" "));
        row.push(p.proximal.map(|b| b.to_string()).unwrap_or_default());
        w.write_record(&row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Unsupported(format!("csv output: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Unsupported(format!("csv output: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn exact(v: &[i64]) -> PlotPoint {
        PlotPoint { point: ProjectivePoint::Exact(v.iter().map(|&x| BigInt::from(x)).collect()), word: vec![0, 2], proximal: None }
    }

    fn chart() -> Chart {
        Chart::coordinates(3, 0, 1, None).unwrap()
    }

    #[test]
    fn empty_input() {
        let (svg, r) = render_svg(&[], &chart(), "").unwrap();
        assert_eq!(r.points_drawn, 0);
        assert!(r.bounds.is_none());
        assert!(r.warning.as_deref().unwrap().contains("degenerate"));
        assert!(svg.contains("<metadata>") && !svg.contains("<circle"));
        let (svg, _) = render_svg(&[], &chart(), "seed 7").unwrap();
        assert!(svg.contains("<metadata>seed 7; chart"));
        assert_eq!(render_csv(&[], &chart()).unwrap(), "x1,x2,x3,chart_u,chart_v,word,proximal\n");
    }

    #[test]
    fn single_point_is_centered() {
        let (svg, r) = render_svg(&[exact(&[1, 1, 2])], &chart(), "").unwrap();
        assert_eq!(r.points_drawn, 1);
        assert_eq!(r.bounds, Some([0.25, 0.25, 0.25, 0.25]));
        assert!(svg.contains(r#"<circle cx="500.000" cy="500.000" r="2"/>"#));
        assert_eq!(svg.matches("<circle").count(), 1);
        assert_eq!(r.transform, [1.0, 0.25, 0.25]);
        assert!(r.warning.is_some());
    }

    #[test]
    fn collinear_and_infinite_points() {
        let pts = [exact(&[1, 0, 0]), exact(&[2, 0, 0]), exact(&[1, -1, 0]), exact(&[0, 0, 1])];
        let (_, r) = render_svg(&pts, &chart(), "").unwrap();
        // (1,-1,0) is at infinity for the all-ones functional.
        assert_eq!((r.points_drawn, r.points_skipped), (3, 1));
        assert!(r.warning.as_deref().unwrap().contains("collinear"));
        let pts = [exact(&[1, 0, 0]), exact(&[0, 1, 0]), exact(&[0, 0, 1])];
        let (_, r) = render_svg(&pts, &chart(), "").unwrap();
        assert!(r.warning.is_none());
    }

    #[test]
    fn csv_rows() {
        let mut f = exact(&[1, -1, 0]);
        f.point = ProjectivePoint::Float(vec![0.5, 0.5, 0.0]);
        f.proximal = Some(true);
        let csv = render_csv(&[exact(&[1, 1, 2]), exact(&[1, -1, 0]), f], &chart()).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[1], "1,1,2,0.25,0.25,0 2,");
        assert_eq!(lines[2], "1,-1,0,,,0 2,");
        assert_eq!(lines[3], "0.5,0.5,0,0.5,0.5,0 2,true");
    }

    #[test]
    fn output_is_stable() {
        let pts: Vec<PlotPoint> = (1..20).map(|k| exact(&[k, k * k % 7, 3])).collect();
        let a = render_svg(&pts, &chart(), "").unwrap();
        let b = render_svg(&pts, &chart(), "").unwrap();
        assert_eq!(a, b);
        assert_eq!(render_csv(&pts, &chart()).unwrap(), render_csv(&pts, &chart()).unwrap());
    }

    #[test]
    fn default_axes_skip_a_pinned_coordinate() {
        assert_eq!(Chart::default_axes(5, None), (0, 1));
        assert_eq!(Chart::default_axes(5, Some(&[1.0, 1.0, 0.0, 0.0, 0.0])), (0, 1));
        assert_eq!(Chart::default_axes(5, Some(&[0.5, 0.0, 0.0, 0.0, 0.0])), (1, 2));
        assert_eq!(Chart::default_axes(5, Some(&[0.0, 2.0, 0.0, 0.0, 0.0])), (0, 2));
    }

    #[test]
    fn chart_validation() {
        assert!(Chart::coordinates(3, 0, 3, None).is_err());
        assert!(Chart::projection(vec![0.0; 3], [vec![1.0; 3], vec![1.0; 3]]).is_err());
        assert!(Chart::projection(vec![1.0; 3], [vec![1.0; 2], vec![1.0; 3]]).is_err());
        assert!(render_svg(&[exact(&[1, 2])], &chart(), "").is_err());
    }
}
