//! Minimal SVG output: one physical unit per user unit, points as small disks.

use std::fmt::Write;

use meyerion_core::cps::PointPattern;

const DOT: f64 = 0.08;
pub const PALETTE: [&str; 8] = [
    "#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// A drawing of layers over `[-r, r]^2`, drawn in order; `y` points up.
pub struct Drawing {
    radius: f64,
    body: String,
}

impl Drawing {
    pub fn new(radius: f64) -> Self {
        Drawing {
            radius: radius.max(1.0),
            body: String::new(),
        }
    }

    pub fn layer(&mut self, color: &str, points: impl IntoIterator<Item = (f64, f64)>) {
        writeln!(self.body, "<g fill=\"{color}\">").unwrap();
        for (x, y) in points {
            writeln!(self.body, "<circle cx=\"{x:.6}\" cy=\"{:.6}\" r=\"{DOT}\"/>", -y).unwrap();
        }
        self.body.push_str("</g>\n");
    }

    pub fn finish(self) -> String {
        let r = self.radius + 2.0 * DOT;
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{:.6} {:.6} {:.6} {:.6}\">\n{}</svg>\n",
            -r,
            -r,
            2.0 * r,
            2.0 * r,
            self.body
        )
    }
}

/// `(x, y)` of each point; 1-dimensional patterns are drawn on the x-axis.
pub fn coords(p: &PointPattern, indices: impl IntoIterator<Item = usize>) -> Vec<(f64, f64)> {
    indices
        .into_iter()
        .map(|i| {
            let a = &p.approx()[i];
            (a[0], a.get(1).copied().unwrap_or(0.0))
        })
        .collect()
}

pub fn pattern(p: &PointPattern) -> String {
    let mut d = Drawing::new(p.radius().to_f64());
    d.layer("black", coords(p, 0..p.len()));
    d.finish()
}
