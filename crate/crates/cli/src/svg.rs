//! Minimal SVG 1.1 figures of point sets with their matchings.

use std::fmt::Write;

use localmatch::{Disk, Matching, Point, PointSet};

const MATCHING_COLOR: &str = "red";
const STAR_COLOR: &str = "black";
const ORACLE_COLOR: &str = "blue";
const WITNESS_COLOR: &str = "green";

pub struct DiskLayer {
    pub disks: Vec<Disk>,
    pub color: &'static str,
}

pub struct Figure<'a> {
    pub points: &'a PointSet,
    pub matching: Option<&'a Matching>,
    pub oracle: Option<&'a Matching>,
    /// Center of the star; edges go to every point.
    pub witness: Option<Point>,
    pub disk_layers: Vec<DiskLayer>,
    pub opacity: f64,
    pub title: String,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl Figure<'_> {
    fn bounds(&self) -> (Point, Point) {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        let mut grow = |p: Point, r: f64| {
            lo.x = lo.x.min(p.x - r);
            lo.y = lo.y.min(p.y - r);
            hi.x = hi.x.max(p.x + r);
            hi.y = hi.y.max(p.y + r);
        };
        for &p in self.points.points() {
            grow(p, 0.0);
        }
        if let Some(w) = self.witness {
            grow(w, 0.0);
        }
        for layer in &self.disk_layers {
            for d in &layer.disks {
                grow(d.center, d.radius);
            }
        }
        (lo, hi)
    }

    pub fn render(&self) -> String {
        let (lo, hi) = self.bounds();
        let extent = (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
        let pad = 0.05 * extent;
        let (x0, y0) = (lo.x - pad, lo.y - pad);
        let (w, h) = (hi.x - lo.x + 2.0 * pad, hi.y - lo.y + 2.0 * pad);
        let stroke = 0.004 * extent;
        let dot = 0.008 * extent;
        // Flip y so the figure has the usual mathematical orientation.
        let map = |p: Point| (p.x, y0 + h - (p.y - y0));
        let pixels = 640.0;
        let (pw, ph) = (pixels * w / w.max(h), pixels * h / w.max(h));

        let mut s = String::new();
        let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{pw:.1}" height="{ph:.1}" viewBox="{x0} {y0} {w} {h}">"#
        );
        let _ = writeln!(s, "  <title>{}</title>", escape(&self.title));
        let _ = writeln!(
            s,
            r#"  <rect x="{x0}" y="{y0}" width="{w}" height="{h}" fill="white"/>"#
        );

        for layer in &self.disk_layers {
            let _ = writeln!(
                s,
                r#"  <g fill="{}" fill-opacity="{}" stroke="{}" stroke-width="{stroke}">"#,
                layer.color, self.opacity, layer.color
            );
            for d in &layer.disks {
                let (cx, cy) = map(d.center);
                let _ = writeln!(s, r#"    <circle cx="{cx}" cy="{cy}" r="{}"/>"#, d.radius);
            }
            let _ = writeln!(s, "  </g>");
        }

        let segments = |s: &mut String,
                        color: &str,
                        width: f64,
                        dash: Option<f64>,
                        edges: &mut dyn Iterator<Item = (Point, Point)>| {
            let dash = dash.map_or(String::new(), |d| format!(r#" stroke-dasharray="{d} {d}""#));
            let _ = writeln!(s, r#"  <g stroke="{color}" stroke-width="{width}"{dash}>"#);
            for (a, b) in edges {
                let ((ax, ay), (bx, by)) = (map(a), map(b));
                let _ = writeln!(s, r#"    <line x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}"/>"#);
            }
            let _ = writeln!(s, "  </g>");
        };
        let ps = self.points;
        if let Some(c) = self.witness {
            segments(
                &mut s,
                STAR_COLOR,
                0.5 * stroke,
                None,
                &mut ps.points().iter().map(|&p| (c, p)),
            );
        }
        if let Some(m) = self.oracle {
            segments(
                &mut s,
                ORACLE_COLOR,
                stroke,
                Some(3.0 * stroke),
                &mut m.pairs().iter().map(|&(i, j)| (ps.point(i), ps.point(j))),
            );
        }
        if let Some(m) = self.matching {
            segments(
                &mut s,
                MATCHING_COLOR,
                stroke,
                None,
                &mut m.pairs().iter().map(|&(i, j)| (ps.point(i), ps.point(j))),
            );
        }

        let _ = writeln!(s, r#"  <g fill="black">"#);
        for &p in ps.points() {
            let (cx, cy) = map(p);
            let _ = writeln!(s, r#"    <circle cx="{cx}" cy="{cy}" r="{dot}"/>"#);
        }
        let _ = writeln!(s, "  </g>");
        if let Some(c) = self.witness {
            let (cx, cy) = map(c);
            let _ = writeln!(
                s,
                r#"  <circle cx="{cx}" cy="{cy}" r="{}" fill="{WITNESS_COLOR}"/>"#,
                1.5 * dot
            );
        }
        s.push_str("</svg>\n");
        s
    }
}
