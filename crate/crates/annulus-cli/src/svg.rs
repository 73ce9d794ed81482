//! Minimal SVG plotting: enough for scatter plots, error bars and lines,
//! written directly so reports need no display stack.

/// A fixed-size plot area with linear data-to-screen mapping and margins
/// reserved for axes and labels.
pub struct Plot {
    width: f64,
    height: f64,
    margin: f64,
    x_range: (f64, f64),
    y_range: (f64, f64),
    body: String,
}

impl Plot {
    pub fn new(title: &str, x_range: (f64, f64), y_range: (f64, f64)) -> Plot {
        let mut plot = Plot {
            width: 640.0,
            height: 480.0,
            margin: 56.0,
            x_range: pad_range(x_range),
            y_range: pad_range(y_range),
            body: String::new(),
        };
        plot.text(plot.width / 2.0, 24.0, title, 16, "middle", "#000");
        plot
    }

    fn sx(&self, x: f64) -> f64 {
        let (lo, hi) = self.x_range;
        self.margin + (x - lo) / (hi - lo) * (self.width - 2.0 * self.margin)
    }

    fn sy(&self, y: f64) -> f64 {
        let (lo, hi) = self.y_range;
        self.height - self.margin - (y - lo) / (hi - lo) * (self.height - 2.0 * self.margin)
    }

    fn text(&mut self, x: f64, y: f64, s: &str, size: u32, anchor: &str, fill: &str) {
        self.body.push_str(&format!(
            "<text x=\"{x:.1}\" y=\"{y:.1}\" font-size=\"{size}\" text-anchor=\"{anchor}\" \
             font-family=\"sans-serif\" fill=\"{fill}\">{}</text>\n",
            escape(s)
        ));
    }

    pub fn point(&mut self, x: f64, y: f64, color: &str) {
        self.body.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{color}\" fill-opacity=\"0.7\"/>\n",
            self.sx(x),
            self.sy(y)
        ));
    }

    pub fn line(&mut self, from: (f64, f64), to: (f64, f64), color: &str, width: f64) {
        self.body.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" \
             stroke=\"{color}\" stroke-width=\"{width}\"/>\n",
            self.sx(from.0),
            self.sy(from.1),
            self.sx(to.0),
            self.sy(to.1)
        ));
    }

    pub fn polyline(&mut self, points: &[(f64, f64)], color: &str) {
        let coords: Vec<String> = points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", self.sx(x), self.sy(y)))
            .collect();
        self.body.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
            coords.join(" ")
        ));
    }

    /// Vertical mean ± std error bar with serif caps.
    pub fn error_bar(&mut self, x: f64, mean: f64, std: f64, color: &str) {
        self.line((x, mean - std), (x, mean + std), color, 1.0);
        let cap = (self.x_range.1 - self.x_range.0) / 80.0;
        self.line((x - cap, mean - std), (x + cap, mean - std), color, 1.0);
        self.line((x - cap, mean + std), (x + cap, mean + std), color, 1.0);
        self.point(x, mean, color);
    }

    pub fn legend(&mut self, entries: &[(&str, &str)]) {
        let mut y = self.margin + 8.0;
        for (label, color) in entries {
            let x = self.width - self.margin - 120.0;
            self.body.push_str(&format!(
                "<rect x=\"{x:.1}\" y=\"{:.1}\" width=\"12\" height=\"12\" fill=\"{color}\"/>\n",
                y - 10.0
            ));
            self.text(x + 18.0, y, label, 12, "start", "#000");
            y += 18.0;
        }
    }

    pub fn finish(mut self, x_label: &str, y_label: &str, comments: &[String]) -> String {
        // axes
        let (x0, x1) = self.x_range;
        let (y0, y1) = self.y_range;
        self.line((x0, y0), (x1, y0), "#000", 1.0);
        self.line((x0, y0), (x0, y1), "#000", 1.0);
        for frac in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let xv = x0 + frac * (x1 - x0);
            let yv = y0 + frac * (y1 - y0);
            let (sx, sy0) = (self.sx(xv), self.sy(y0));
            self.text(sx, sy0 + 18.0, &format!("{xv:.3}"), 10, "middle", "#444");
            let (sx0, sy) = (self.sx(x0), self.sy(yv));
            self.text(sx0 - 6.0, sy + 3.0, &format!("{yv:.3}"), 10, "end", "#444");
        }
        self.text(
            self.width / 2.0,
            self.height - 12.0,
            x_label,
            12,
            "middle",
            "#000",
        );
        let (cx, cy) = (14.0, self.height / 2.0);
        self.body.push_str(&format!(
            "<text x=\"{cx}\" y=\"{cy}\" font-size=\"12\" text-anchor=\"middle\" \
             font-family=\"sans-serif\" transform=\"rotate(-90 {cx} {cy})\">{}</text>\n",
            escape(y_label)
        ));

        let header: String = comments
            .iter()
            .map(|c| format!("<!-- {} -->\n", escape(c)))
            .collect();
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n{header}\
             <svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" \
             viewBox=\"0 0 {} {}\">\n<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n{}</svg>\n",
            self.width, self.height, self.width, self.height, self.body
        )
    }
}

fn pad_range((lo, hi): (f64, f64)) -> (f64, f64) {
    let span = (hi - lo).max(1e-9);
    (lo - 0.05 * span, hi + 0.05 * span)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
