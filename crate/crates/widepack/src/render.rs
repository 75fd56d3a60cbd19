//! Plain-text SVG emission: box outline, items as filled labeled rectangles,
//! and optional separating polylines. No drawing dependency; coordinates are
//! flipped so y grows upward like the packing grid.

use crate::geometry::Polyline;
use crate::model::{Instance, Packing};
use crate::structure::StructuredPacking;

const SCALE: i64 = 40;
const MARGIN: i64 = 20;

/// Fill palette, cycled by item id.
const FILLS: &[&str] = &[
    "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5",
];

const STROKES: &[&str] = &["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e"];

struct Canvas {
    body: String,
    height_px: i64,
}

impl Canvas {
    fn new(w: i64, h: i64) -> Canvas {
        let mut c = Canvas { body: String::new(), height_px: h * SCALE };
        c.body.push_str(&format!(
            "<rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{}\" height=\"{}\" fill=\"white\" stroke=\"black\" stroke-width=\"2\"/>\n",
            w * SCALE,
            h * SCALE
        ));
        c
    }

    fn px(&self, x: i64, y: i64) -> (i64, i64) {
        (MARGIN + x * SCALE, MARGIN + self.height_px - y * SCALE)
    }

    fn rect(&mut self, x: i64, y: i64, w: i64, h: i64, id: u32) {
        let (px, py) = self.px(x, y + h);
        let fill = FILLS[id as usize % FILLS.len()];
        self.body.push_str(&format!(
            "<rect x=\"{px}\" y=\"{py}\" width=\"{}\" height=\"{}\" fill=\"{fill}\" stroke=\"black\"/>\n",
            w * SCALE,
            h * SCALE
        ));
        let (tx, ty) = self.px(x, y);
        self.body.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"16\" font-family=\"monospace\">{id}</text>\n",
            tx + w * SCALE / 2 - 5,
            ty - h * SCALE / 2 + 6
        ));
    }

    /// Polyline on the doubled grid (coordinates halved for display).
    fn polyline_doubled(&mut self, p: &Polyline, color: &str) {
        let pts: Vec<String> = p
            .points()
            .iter()
            .map(|&(x, y)| {
                let (px, py) = (
                    MARGIN + x * SCALE / 2,
                    MARGIN + self.height_px - y * SCALE / 2,
                );
                format!("{px},{py}")
            })
            .collect();
        self.body.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"3\" stroke-linejoin=\"round\" opacity=\"0.85\"/>\n",
            pts.join(" ")
        ));
    }

    fn finish(self, w: i64) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\">\n{}</svg>\n",
            w * SCALE + 2 * MARGIN,
            self.height_px + 2 * MARGIN,
            self.body
        )
    }
}

/// Renders a packing inside its instance's box.
pub fn render_packing(inst: &Instance, pk: &Packing) -> String {
    let mut c = Canvas::new(inst.bbox.w, inst.bbox.h);
    for p in &pk.placements {
        c.rect(p.at.x, p.at.y, p.at.w(), p.at.h(), p.id);
    }
    c.finish(inst.bbox.w)
}

/// Renders a structured packing: items plus its separating polylines.
pub fn render_structured(sp: &StructuredPacking) -> String {
    let mut c = Canvas::new(sp.bbox.w, sp.bbox.h);
    for p in &sp.packing.placements {
        c.rect(p.at.x, p.at.y, p.at.w(), p.at.h(), p.id);
    }
    for (i, poly) in sp.polylines.iter().enumerate() {
        c.polyline_doubled(poly, STROKES[i % STROKES.len()]);
    }
    c.finish(sp.bbox.w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{BBox, Rect};
    use crate::model::{Instance, Item, Placement};

    #[test]
    fn packing_svg_wellformed() {
        let inst = Instance::new(
            BBox::new(4, 3),
            vec![Item::new(0, 2, 1), Item::new(1, 2, 2)],
            2,
        )
        .unwrap();
        let pk = Packing {
            placements: vec![
                Placement { id: 0, at: Rect::new(2, 1).at(0, 0) },
                Placement { id: 1, at: Rect::new(2, 2).at(2, 0) },
            ],
        };
        let svg = render_packing(&inst, &pk);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        // Box outline plus one rect per item.
        assert_eq!(svg.matches("<rect").count(), 3);
        assert_eq!(svg.matches("<text").count(), 2);
    }
}
