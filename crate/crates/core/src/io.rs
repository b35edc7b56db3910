//! Reading polylines from CSV or GeoJSON and writing results as JSON, CSV
//! and SVG.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;
use serde_json::Value;

use crate::error::IoError;
use crate::geom::{arc_geometry, Orientation, Point, Polyline, Primitive};
use crate::solver::{CompressedPolyline, PenaltyConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputFormat {
    Csv,
    GeoJson,
}

impl FromStr for InputFormat {
    type Err = IoError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(InputFormat::Csv),
            "geojson" | "json" => Ok(InputFormat::GeoJson),
            other => Err(IoError::Parse {
                line: 0,
                message: format!("unknown format `{other}`"),
            }),
        }
    }
}

pub fn ingest(path: &Path, format: InputFormat) -> Result<Polyline, IoError> {
    let text = std::fs::read_to_string(path)?;
    ingest_str(&text, format)
}

pub fn ingest_str(text: &str, format: InputFormat) -> Result<Polyline, IoError> {
    let pts = match format {
        InputFormat::Csv => parse_csv(text)?,
        InputFormat::GeoJson => parse_geojson(text)?,
    };
    let poly = Polyline::new(pts)?;
    if poly.collapsed() > 0 {
        log::warn!("collapsed {} duplicate vertices", poly.collapsed());
    }
    Ok(poly)
}

/// Rows of `x,y`. Blank lines and `#` comments are skipped, and a non-numeric
/// first row is taken as a header.
pub fn parse_csv(text: &str) -> Result<Vec<Point>, IoError> {
    let mut pts = Vec::new();
    let mut seen_row = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let first = !seen_row;
        seen_row = true;
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed = match fields.as_slice() {
            [x, y] => x.parse::<f64>().ok().zip(y.parse::<f64>().ok()),
            _ => None,
        };
        match parsed {
            Some((x, y)) => pts.push(Point::new(x, y)),
            None if first && fields.len() == 2 => continue,
            None => {
                return Err(IoError::Parse {
                    line: idx + 1,
                    message: format!("expected `x,y`, found `{line}`"),
                })
            }
        }
    }
    if pts.is_empty() {
        return Err(IoError::Parse {
            line: 0,
            message: "no coordinates".into(),
        });
    }
    Ok(pts)
}

/// Coordinates of a LineString given bare, as a Feature, or as the first
/// LineString feature of a FeatureCollection.
pub fn parse_geojson(text: &str) -> Result<Vec<Point>, IoError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| IoError::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    let geometry =
        find_linestring(&doc).ok_or_else(|| IoError::GeoJson("no LineString found".into()))?;
    let coords = geometry
        .get("coordinates")
        .and_then(Value::as_array)
        .ok_or_else(|| IoError::GeoJson("LineString without coordinates".into()))?;
    coords
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let xy = c.as_array().filter(|a| a.len() >= 2);
            match xy.map(|a| (a[0].as_f64(), a[1].as_f64())) {
                Some((Some(x), Some(y))) => Ok(Point::new(x, y)),
                _ => Err(IoError::GeoJson(format!(
                    "coordinate {i} is not a number pair"
                ))),
            }
        })
        .collect()
}

fn find_linestring(v: &Value) -> Option<&Value> {
    match v.get("type")?.as_str()? {
        "LineString" => Some(v),
        "Feature" => find_linestring(v.get("geometry")?),
        "FeatureCollection" => v
            .get("features")?
            .as_array()?
            .iter()
            .find_map(find_linestring),
        _ => None,
    }
}

pub fn write_polyline_csv<W: std::io::Write>(poly: &Polyline, mut out: W) -> std::io::Result<()> {
    writeln!(out, "x,y")?;
    for p in poly.vertices() {
        writeln!(out, "{},{}", fmt_real(p.x), fmt_real(p.y))?;
    }
    Ok(())
}

/// Shortest decimal that reads back to the same `f64` (at most 17 significant digits).
pub fn fmt_real(v: f64) -> String {
    format!("{v}")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct XY {
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrimitiveRecord {
    #[serde(rename = "type")]
    pub kind: &'static str,
    pub start_index: usize,
    pub end_index: usize,
    pub sse: f64,
    pub max_deviation: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center: Option<XY>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    /// +1 for counter-clockwise, -1 for clockwise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orientation: Option<i8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sagitta: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Totals {
    pub penalty: u32,
    pub sse: f64,
    pub max_deviation: f64,
    pub segments: usize,
    pub arcs: usize,
    pub source_vertices: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutputDocument {
    pub penalties: PenaltyConfig,
    pub tolerance: f64,
    pub primitives: Vec<PrimitiveRecord>,
    pub totals: Totals,
}

pub fn encode_output(
    result: &CompressedPolyline,
    poly: &Polyline,
    tol: f64,
    penalties: PenaltyConfig,
) -> OutputDocument {
    let primitives = result
        .primitives
        .iter()
        .map(|p| {
            let (kind, center, radius, orientation, sagitta) = match p.primitive {
                Primitive::Segment(_) => ("segment", None, None, None, None),
                Primitive::Arc(ref a) => {
                    let g = arc_geometry(a, poly).expect("anchors of a fitted arc are distinct");
                    let sign = match g.orientation {
                        Orientation::Ccw => 1,
                        Orientation::Cw => -1,
                    };
                    (
                        "arc",
                        Some(XY {
                            x: g.center.x,
                            y: g.center.y,
                        }),
                        Some(g.radius),
                        Some(sign),
                        Some(g.sagitta()),
                    )
                }
            };
            PrimitiveRecord {
                kind,
                start_index: p.primitive.start(),
                end_index: p.primitive.end(),
                sse: p.sse,
                max_deviation: p.max_dev,
                center,
                radius,
                orientation,
                sagitta,
            }
        })
        .collect();
    OutputDocument {
        penalties,
        tolerance: tol,
        primitives,
        totals: Totals {
            penalty: result.total_penalty,
            sse: result.total_sse,
            max_deviation: result.max_deviation(),
            segments: result.primitives.len() - result.arc_count(),
            arcs: result.arc_count(),
            source_vertices: poly.len(),
        },
    }
}

struct Frame {
    min: Point,
    max: Point,
}

impl Frame {
    fn of(points: &[Point]) -> Frame {
        let mut min = Point::new(f64::INFINITY, f64::INFINITY);
        let mut max = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            min = Point::new(min.x.min(p.x), min.y.min(p.y));
            max = Point::new(max.x.max(p.x), max.y.max(p.y));
        }
        Frame { min, max }
    }

    fn size(&self) -> f64 {
        (self.max.x - self.min.x)
            .max(self.max.y - self.min.y)
            .max(1e-12)
    }
}

/// Source vertices as dots and each primitive as one `<path>`, y axis up.
pub fn render_svg(poly: &Polyline, result: &CompressedPolyline) -> String {
    let frame = Frame::of(poly.vertices());
    let pad = 0.05 * frame.size();
    let stroke = 0.003 * frame.size();
    let (w, h) = (
        frame.max.x - frame.min.x + 2.0 * pad,
        frame.max.y - frame.min.y + 2.0 * pad,
    );
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        frame.min.x - pad,
        -(frame.max.y + pad),
        w,
        h
    );
    let _ = writeln!(s, r#"<g transform="scale(1,-1)">"#);
    let _ = writeln!(s, r##"<g fill="#888">"##);
    for p in poly.vertices() {
        let _ = writeln!(
            s,
            r#"<circle cx="{}" cy="{}" r="{}"/>"#,
            p.x,
            p.y,
            1.5 * stroke
        );
    }
    let _ = writeln!(s, "</g>");
    for prim in &result.primitives {
        let (a, b) = (poly[prim.primitive.start()], poly[prim.primitive.end()]);
        let d = match prim.primitive {
            Primitive::Segment(_) => format!("M {} {} L {} {}", a.x, a.y, b.x, b.y),
            Primitive::Arc(ref arc) => {
                let g = arc_geometry(arc, poly).expect("anchors of a fitted arc are distinct");
                let large = u8::from(g.sweep > std::f64::consts::PI);
                let sweep = u8::from(g.orientation == Orientation::Ccw);
                format!(
                    "M {} {} A {} {} 0 {} {} {} {}",
                    a.x, a.y, g.radius, g.radius, large, sweep, b.x, b.y
                )
            }
        };
        let color = if prim.primitive.is_arc() {
            "#c33"
        } else {
            "#36c"
        };
        let _ = writeln!(
            s,
            r#"<path d="{d}" fill="none" stroke="{color}" stroke-width="{stroke}"/>"#
        );
    }
    let _ = writeln!(s, "</g>\n</svg>");
    s
}
