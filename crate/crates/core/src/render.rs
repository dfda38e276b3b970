//! SVG drawings of arc diagrams and arc pair diagrams. Floating point is
//! used only here, for coordinates.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::circle::Angle;
use crate::diagram::ArcDiagram;
use crate::element::Element;
use crate::lamination::{Arc, StandardInterval};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("unknown render style {0:?} (expected geodesic or chord)")]
    UnknownStyle(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RenderStyle {
    /// Circular arcs orthogonal to the boundary circle.
    #[default]
    Geodesic,
    /// Straight chords.
    Chord,
}

impl FromStr for RenderStyle {
    type Err = RenderError;

    fn from_str(s: &str) -> Result<RenderStyle, RenderError> {
        match s {
            "geodesic" => Ok(RenderStyle::Geodesic),
            "chord" => Ok(RenderStyle::Chord),
            _ => Err(RenderError::UnknownStyle(s.to_string())),
        }
    }
}

const PANEL: f64 = 240.0;
const RADIUS: f64 = 100.0;

fn num(x: f64) -> String {
    let s = format!("{:.4}", x);
    if s == "-0.0000" {
        "0.0000".to_string()
    } else {
        s
    }
}

struct Panel {
    cx: f64,
    cy: f64,
}

impl Panel {
    fn point(&self, t: &Angle) -> (f64, f64) {
        let theta = 2.0 * PI * t.to_f64();
        (self.cx + RADIUS * theta.cos(), self.cy - RADIUS * theta.sin())
    }

    fn arc_path(&self, arc: &Arc, style: RenderStyle) -> String {
        // draw from the endpoint whose ccw distance to the other is shorter
        let (a, b) = arc.endpoints();
        let (p, q) = if a.ccw_to(&b).to_f64() <= 0.5 { (a, b) } else { (b, a) };
        let (x1, y1) = self.point(&p);
        let (x2, y2) = self.point(&q);
        let sep = 2.0 * PI * p.ccw_to(&q).to_f64();
        let straight = style == RenderStyle::Chord || (sep - PI).abs() < 1e-12;
        if straight {
            format!("M {} {} L {} {}", num(x1), num(y1), num(x2), num(y2))
        } else {
            let r = RADIUS * (sep / 2.0).tan();
            format!(
                "M {} {} A {} {} 0 0 1 {} {}",
                num(x1),
                num(y1),
                num(r),
                num(r),
                num(x2),
                num(y2)
            )
        }
    }

    fn draw(&self, out: &mut String, diagram: &ArcDiagram, style: RenderStyle, mark: Option<&StandardInterval>) {
        let _ = writeln!(
            out,
            r#"  <circle class="boundary" cx="{}" cy="{}" r="{}" fill="none" stroke="black" stroke-width="1"/>"#,
            num(self.cx),
            num(self.cy),
            num(RADIUS)
        );
        let mut arcs = diagram.arcs();
        arcs.sort();
        for arc in &arcs {
            let _ = writeln!(
                out,
                r#"  <path class="arc" d="{}" fill="none" stroke="steelblue" stroke-width="1.5"><title>{}</title></path>"#,
                self.arc_path(arc, style),
                arc
            );
        }
        if let Some(leaf) = mark {
            let mid = leaf.lo().ccw_midpoint(&leaf.hi());
            let (x, y) = self.point(&mid);
            let _ = writeln!(
                out,
                r#"  <circle class="dot" cx="{}" cy="{}" r="4" fill="crimson"/>"#,
                num(x),
                num(y)
            );
        }
    }
}

fn document(width: f64, body: &str) -> Vec<u8> {
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = num(width),
        h = num(PANEL)
    );
    out.push_str(body);
    out.push_str("</svg>\n");
    out.into_bytes()
}

pub fn render_diagram(diagram: &ArcDiagram, style: RenderStyle) -> Vec<u8> {
    let mut body = String::new();
    Panel {
        cx: PANEL / 2.0,
        cy: PANEL / 2.0,
    }
    .draw(&mut body, diagram, style, None);
    document(PANEL, &body)
}

/// Domain on the left, range on the right; the dots mark domain leaf 0
/// and the range leaf it corresponds to.
pub fn render_element(f: &Element, style: RenderStyle) -> Vec<u8> {
    let domain = f.domain();
    let range = f.range();
    let mut body = String::new();
    Panel {
        cx: PANEL / 2.0,
        cy: PANEL / 2.0,
    }
    .draw(&mut body, &domain, style, Some(&domain.leaves()[0]));
    Panel {
        cx: 1.5 * PANEL,
        cy: PANEL / 2.0,
    }
    .draw(&mut body, &range, style, Some(&range.leaves()[f.offset()]));
    document(2.0 * PANEL, &body)
}
