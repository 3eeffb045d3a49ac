//! Deterministic SVG rendering of wiring diagrams: wires as polylines, nodes
//! as dots, crossings with a gap in the under strand, labels on the left
//! margin.

use alloc::format;
use alloc::string::String;

use crate::wiring::{Event, WiringDiagram};

const MARGIN_LEFT: f64 = 34.0;
const MARGIN_RIGHT: f64 = 14.0;
const MARGIN_TOP: f64 = 14.0;
const COL_WIDTH: f64 = 36.0;
const ROW_HEIGHT: f64 = 22.0;
/// Fraction of an event cell left blank around the under strand.
const GAP: f64 = 0.3;

fn y_of(row: usize) -> f64 {
    MARGIN_TOP + ROW_HEIGHT * (row as f64 + 0.5)
}

fn seg(out: &mut String, x0: f64, y0: f64, x1: f64, y1: f64) {
    out.push_str(&format!(
        "<line x1=\"{x0:.1}\" y1=\"{y0:.1}\" x2=\"{x1:.1}\" y2=\"{y1:.1}\"/>\n"
    ));
}

/// Render the diagram left to right, one column per event. The under strand
/// of a crossing is interrupted around the midpoint; each node gets a filled
/// dot at the center of its reversing block.
pub fn render_svg(w: &WiringDiagram) -> String {
    let n = w.n_strands();
    let cols = w.events.len();
    let width = MARGIN_LEFT + COL_WIDTH * (cols as f64 + 1.0) + MARGIN_RIGHT;
    let height = 2.0 * MARGIN_TOP + ROW_HEIGHT * n as f64;

    let mut order = w.initial_order.clone();
    let mut body = String::new();
    let mut dots = String::new();

    // Leading straight run with the labels.
    let x0 = MARGIN_LEFT;
    for (row, &label) in order.iter().enumerate() {
        let y = y_of(row);
        body.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\">{}</text>\n",
            6.0,
            y + 4.0,
            label
        ));
        seg(&mut body, x0, y, x0 + COL_WIDTH * 0.5, y);
    }

    for (k, event) in w.events.iter().enumerate() {
        let xl = MARGIN_LEFT + COL_WIDTH * (k as f64 + 0.5);
        let xr = xl + COL_WIDTH;
        match event {
            Event::Crossing { at, over, under, .. } => {
                let (top, bot) = (at - 1, *at);
                for row in 0..n {
                    let y = y_of(row);
                    if row != top && row != bot {
                        seg(&mut body, xl, y, xr, y);
                    }
                }
                let (yt, yb) = (y_of(top), y_of(bot));
                let draw = |out: &mut String, ya: f64, yb2: f64, gapped: bool| {
                    if gapped {
                        let half = 0.5 - GAP / 2.0;
                        let (mx1, my1) = (xl + (xr - xl) * half, ya + (yb2 - ya) * half);
                        let (mx2, my2) =
                            (xr - (xr - xl) * half, yb2 - (yb2 - ya) * half);
                        seg(out, xl, ya, mx1, my1);
                        seg(out, mx2, my2, xr, yb2);
                    } else {
                        seg(out, xl, ya, xr, yb2);
                    }
                };
                // The strand entering on top exits at the bottom; the under
                // strand gets the gap.
                if order[top] == *over {
                    debug_assert_eq!(order[bot], *under);
                    draw(&mut body, yt, yb, false);
                    draw(&mut body, yb, yt, true);
                } else {
                    debug_assert_eq!(order[top], *under);
                    draw(&mut body, yt, yb, true);
                    draw(&mut body, yb, yt, false);
                }
                order.swap(top, bot);
            }
            Event::Node { at, wires } => {
                let k2 = wires.len();
                let (top, bot) = (at - 1, at - 1 + k2 - 1);
                for row in 0..n {
                    let y = y_of(row);
                    if row < top || row > bot {
                        seg(&mut body, xl, y, xr, y);
                    }
                }
                // Block reversal: straight lines through the common center.
                for row in top..=bot {
                    let y_in = y_of(row);
                    let y_out = y_of(bot - (row - top));
                    seg(&mut body, xl, y_in, xr, y_out);
                }
                let cx = (xl + xr) / 2.0;
                let cy = (y_of(top) + y_of(bot)) / 2.0;
                dots.push_str(&format!(
                    "<circle cx=\"{cx:.1}\" cy=\"{cy:.1}\" r=\"3\"/>\n"
                ));
                order[top..=bot].reverse();
            }
        }
    }

    // Trailing straight run.
    let xe = MARGIN_LEFT + COL_WIDTH * (cols as f64 + 0.5);
    for row in 0..n {
        let y = y_of(row);
        seg(&mut body, xe, y, xe + COL_WIDTH * 0.5, y);
    }

    debug_assert_eq!(order, w.final_order);
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" \
         height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\">\n\
         <g stroke=\"black\" stroke-width=\"1.4\" fill=\"black\" \
         font-family=\"monospace\" font-size=\"12\">\n{body}{dots}</g>\n</svg>\n"
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::builtin_arrangement;
    use crate::wiring::{generic_diagram, PipelineOptions};
    use alloc::vec;

    #[test]
    fn tiny_diagram_golden() {
        let w = WiringDiagram {
            initial_order: vec![2, 1],
            initial_depth: vec![1, 2],
            events: vec![Event::Crossing { at: 1, sign: 1, over: 2, under: 1 }],
            final_order: vec![1, 2],
        };
        let svg = render_svg(&w);
        assert!(svg.starts_with("<svg "));
        assert!(svg.ends_with("</svg>\n"));
        // Two labels, one crossing: the under strand is split in two.
        assert_eq!(svg.matches("<text").count(), 2);
        assert_eq!(svg.matches("<line").count(), 2 + 3 + 2);
        assert_eq!(svg.matches("<circle").count(), 0);
    }

    #[test]
    fn node_gets_a_dot() {
        let w = WiringDiagram {
            initial_order: vec![1, 2, 3],
            initial_depth: vec![1, 2, 3],
            events: vec![Event::Node { at: 1, wires: vec![1, 2, 3] }],
            final_order: vec![3, 2, 1],
        };
        let svg = render_svg(&w);
        assert_eq!(svg.matches("<circle").count(), 1);
    }

    #[test]
    fn n_plus_diagram_renders_all_wires() {
        let a = builtin_arrangement("N+").unwrap();
        let g = generic_diagram(&a, 5, &PipelineOptions::default()).unwrap();
        let svg = render_svg(&g.diagram);
        assert_eq!(svg.matches("<text").count(), 10);
        assert_eq!(
            svg.matches("<circle").count(),
            g.diagram.nodes().count()
        );
        // Determinism.
        assert_eq!(svg, render_svg(&g.diagram));
    }
}
