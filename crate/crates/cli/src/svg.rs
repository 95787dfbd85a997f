//! Deterministic SVG drawings of rank-2 polyhedra inside the positive chamber.
//!
//! Weights are placed with the invariant form, the first fundamental weight
//! along the horizontal axis. Normal arrows sit at facet midpoints and have
//! length proportional to the facet label.

use std::fmt::Write;

use symcut_core::polyhedra::{Ambient, Facet, LabeledPolyhedron, Region};
use symcut_core::rational::{rat, to_f64};
use symcut_core::rootsys::RootDatum;

use crate::CliError;

#[derive(Clone, Debug, PartialEq)]
pub struct PlotOptions {
    pub width: f64,
    pub margin: f64,
    pub show_normals: bool,
}

impl Default for PlotOptions {
    fn default() -> Self {
        PlotOptions { width: 480.0, margin: 24.0, show_normals: true }
    }
}

fn fmt3(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

/// Linear map from fundamental-weight coordinates to the plane.
struct Embedding {
    e1: (f64, f64),
    e2: (f64, f64),
}

impl Embedding {
    fn new(rd: &RootDatum) -> Self {
        let g = |i: usize, j: usize| to_f64(&rd.pairing[i][j]);
        let a = g(0, 0).sqrt();
        let b = g(0, 1) / a;
        Embedding { e1: (a, 0.0), e2: (b, (g(1, 1) - b * b).sqrt()) }
    }

    fn point(&self, x: &[f64]) -> (f64, f64) {
        (x[0] * self.e1.0 + x[1] * self.e2.0, x[0] * self.e1.1 + x[1] * self.e2.1)
    }

    /// Unit outward normal of `{<beta, x> <= c}` in the plane.
    fn normal(&self, beta: &[i64]) -> (f64, f64) {
        let nx = beta[0] as f64 / self.e1.0;
        let ny = (beta[1] as f64 - self.e2.0 * nx) / self.e2.1;
        let len = nx.hypot(ny);
        (nx / len, ny / len)
    }
}

struct Shape {
    polygon: Vec<(f64, f64)>,
    arrows: Vec<(usize, u64, (f64, f64), (f64, f64))>,
}

fn clip(p: &LabeledPolyhedron, bound: i64) -> Option<LabeledPolyhedron> {
    let mut facets = p.with_chamber_walls().facets;
    for j in 0..2 {
        for s in [1, -1] {
            let mut b = vec![0; 2];
            b[j] = s;
            facets.push(Facet::new(b, rat(bound)));
        }
    }
    LabeledPolyhedron::new(p.root_datum.clone(), Ambient::Full, 2, facets).ok()
}

fn shape(p: &LabeledPolyhedron, bound: i64, emb: &Embedding) -> Option<Shape> {
    let clipped = clip(p, bound)?;
    let verts = clipped.vertices();
    let pts: Vec<(f64, f64)> = verts
        .iter()
        .map(|v| emb.point(&v.iter().map(to_f64).collect::<Vec<_>>()))
        .collect();
    let n = pts.len() as f64;
    let c = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0 / n, a.1 + p.1 / n));
    let mut polygon = pts.clone();
    polygon.sort_by(|a, b| (a.1 - c.1).atan2(a.0 - c.0).total_cmp(&(b.1 - c.1).atan2(b.0 - c.0)));
    let mut arrows = Vec::new();
    for (i, f) in p.facets.iter().enumerate() {
        let on: Vec<usize> = (0..verts.len()).filter(|&k| f.value(&verts[k]) == f.xi).collect();
        let (Some(&first), Some(&last)) = (on.first(), on.last()) else {
            continue;
        };
        let mid = ((pts[first].0 + pts[last].0) / 2.0, (pts[first].1 + pts[last].1) / 2.0);
        arrows.push((i, f.label, mid, emb.normal(&f.beta)));
    }
    Some(Shape { polygon, arrows })
}

/// Chamber walls, each polyhedron filled, and labelled normal arrows.
pub fn plot_rank2(rd: &RootDatum, regions: &[Region], opts: &PlotOptions) -> Result<String, CliError> {
    if rd.rank != 2 {
        return Err(CliError::Usage(format!("plot needs a rank-2 root datum, got rank {}", rd.rank)));
    }
    if opts.width <= 2.0 * opts.margin {
        return Err(CliError::Usage("width must exceed twice the margin".into()));
    }
    let polys: Vec<&LabeledPolyhedron> = regions.iter().filter_map(Region::polyhedron).collect();
    if let Some(p) = polys.iter().find(|p| p.dim != 2) {
        return Err(CliError::Usage(format!("plot needs 2-dimensional polyhedra, got {}", p.dim)));
    }
    let emb = Embedding::new(rd);
    let extent = polys
        .iter()
        .flat_map(|p| p.vertices())
        .flatten()
        .map(|x| to_f64(&x).abs())
        .fold(1.0, f64::max);
    let bound = (1.25 * extent).ceil() as i64 + 1;
    let b = bound as f64;
    let chamber = [emb.point(&[0.0, 0.0]), emb.point(&[b, 0.0]), emb.point(&[b, b]), emb.point(&[0.0, b])];
    let shapes: Vec<Shape> = polys.iter().filter_map(|p| shape(p, bound, &emb)).collect();

    let all = chamber.iter().chain(shapes.iter().flat_map(|s| s.polygon.iter()));
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for p in all {
        x0 = x0.min(p.0);
        x1 = x1.max(p.0);
        y0 = y0.min(p.1);
        y1 = y1.max(p.1);
    }
    let inner = opts.width - 2.0 * opts.margin;
    let scale = inner / (x1 - x0).max(1e-9);
    let height = (y1 - y0) * scale + 2.0 * opts.margin;
    let px = |p: (f64, f64)| (opts.margin + (p.0 - x0) * scale, opts.margin + (y1 - p.1) * scale);
    let points = |ps: &[(f64, f64)]| {
        ps.iter().map(|&p| px(p)).map(|(x, y)| format!("{},{}", fmt3(x), fmt3(y))).collect::<Vec<_>>().join(" ")
    };

    let mut out = String::new();
    let (w, h) = (fmt3(opts.width), fmt3(height));
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#).unwrap();
    writeln!(out, r##"<polygon class="chamber" points="{}" fill="#ececec" stroke="none"/>"##, points(&chamber)).unwrap();
    for end in [chamber[1], chamber[3]] {
        let (a, z) = (px(chamber[0]), px(end));
        writeln!(
            out,
            r##"<line class="wall" x1="{}" y1="{}" x2="{}" y2="{}" stroke="#333333" stroke-width="3"/>"##,
            fmt3(a.0), fmt3(a.1), fmt3(z.0), fmt3(z.1)
        )
        .unwrap();
    }
    for (k, s) in shapes.iter().enumerate() {
        writeln!(
            out,
            r##"<polygon class="polytope" data-index="{k}" points="{}" fill="#7aa6d6" fill-opacity="0.6" stroke="#1f4e79" stroke-width="1.5"/>"##,
            points(&s.polygon)
        )
        .unwrap();
    }
    if opts.show_normals {
        let unit = 0.05 * inner;
        for (k, s) in shapes.iter().enumerate() {
            for &(i, label, mid, n) in &s.arrows {
                let len = unit * label as f64;
                let a = px(mid);
                let d = (n.0, -n.1);
                let z = (a.0 + d.0 * len, a.1 + d.1 * len);
                let head = 0.25 * unit;
                let side = (-d.1 * head * 0.5, d.0 * head * 0.5);
                let base = (z.0 - d.0 * head, z.1 - d.1 * head);
                writeln!(
                    out,
                    r##"<g class="normal" data-polytope="{k}" data-facet="{i}" data-label="{label}"><line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#b22222" stroke-width="1.5"/><polygon points="{},{} {},{} {},{}" fill="#b22222"/></g>"##,
                    fmt3(a.0), fmt3(a.1), fmt3(z.0), fmt3(z.1),
                    fmt3(z.0), fmt3(z.1),
                    fmt3(base.0 + side.0), fmt3(base.1 + side.1),
                    fmt3(base.0 - side.0), fmt3(base.1 - side.1)
                )
                .unwrap();
            }
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}
