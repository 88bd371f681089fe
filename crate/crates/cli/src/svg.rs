//! Deterministic SVG overlays. Colors: x red, y green, z blue, outliers gray. Fitted
//! segments are dashed and the final frame is drawn bold.

use std::fmt::Write;

use roomframe::{Axis, ImageBounds, Point2, Segment};

const OUTLIER: &str = "#888888";

pub fn axis_color(axis: Axis) -> &'static str {
    match axis {
        Axis::X => "#d62728",
        Axis::Y => "#2ca02c",
        Axis::Z => "#1f77b4",
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stroke {
    pub color: &'static str,
    pub width: f64,
    pub dashed: bool,
    pub opacity: f64,
}

impl Stroke {
    pub fn axis(axis: Option<Axis>, width: f64) -> Self {
        Self { color: axis.map_or(OUTLIER, axis_color), width, dashed: false, opacity: 1.0 }
    }

    pub fn dashed(self, dashed: bool) -> Self {
        Self { dashed, ..self }
    }

    pub fn opacity(self, opacity: f64) -> Self {
        Self { opacity, ..self }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Element {
    Line(Point2, Point2, Stroke),
    Dot(Point2, f64),
    Label(Point2, String),
}

/// A named `<g>` group of primitives.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    id: String,
    elements: Vec<Element>,
}

impl Layer {
    pub fn new(id: &str) -> Self {
        Self { id: id.to_string(), elements: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn segment(&mut self, s: &Segment, stroke: Stroke) {
        self.elements.push(Element::Line(s.p, s.q, stroke));
    }

    pub fn line(&mut self, p: Point2, q: Point2, stroke: Stroke) {
        self.elements.push(Element::Line(p, q, stroke));
    }

    pub fn corner(&mut self, p: Point2, label: &str) {
        self.elements.push(Element::Dot(p, 4.0));
        self.elements.push(Element::Label(Point2::new(p.x + 6.0, p.y - 6.0), label.to_string()));
    }
}

fn num(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

/// Canvas equals the image size; layers are written in the given order.
pub fn document(bounds: ImageBounds, layers: &[Layer]) -> String {
    let (w, h) = (num(bounds.width), num(bounds.height));
    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(
        out,
        r##"  <rect x="0" y="0" width="{w}" height="{h}" fill="#ffffff" stroke="#000000" stroke-width="1"/>"##
    );
    for layer in layers {
        let _ = writeln!(out, r#"  <g id="{}">"#, layer.id);
        for e in &layer.elements {
            match e {
                Element::Line(p, q, s) => {
                    let dash = if s.dashed { r#" stroke-dasharray="6 4""# } else { "" };
                    let _ = writeln!(
                        out,
                        r#"    <line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="{}" stroke-opacity="{}"{dash}/>"#,
                        num(p.x),
                        num(p.y),
                        num(q.x),
                        num(q.y),
                        s.color,
                        num(s.width),
                        num(s.opacity)
                    );
                }
                Element::Dot(p, r) => {
                    let _ = writeln!(
                        out,
                        r##"    <circle cx="{}" cy="{}" r="{}" fill="#000000"/>"##,
                        num(p.x),
                        num(p.y),
                        num(*r)
                    );
                }
                Element::Label(p, text) => {
                    let _ = writeln!(
                        out,
                        r#"    <text x="{}" y="{}" font-family="sans-serif" font-size="14">{text}</text>"#,
                        num(p.x),
                        num(p.y)
                    );
                }
            }
        }
        let _ = writeln!(out, "  </g>");
    }
    out.push_str("</svg>\n");
    out
}
