//! Minimal SVG rendering of result tables: polylines over the first column,
//! or a two-color-ramp heatmap for two-axis grids. No external renderer; the
//! output is a plain `<svg>` document with lines, rects, and text.

use super::table::ResultTable;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 20.0;
const MARGIN_B: f64 = 50.0;

const SERIES_COLORS: [&str; 6] = ["#2b6cb0", "#e53e3e", "#2f855a", "#b7791f", "#6b46c1", "#319795"];

fn finite_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values.filter(|v| v.is_finite()) {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() || !hi.is_finite() {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else if v.abs() >= 0.01 && v.abs() < 10000.0 {
        format!("{v:.3}")
    } else {
        format!("{v:.2e}")
    }
}

struct Frame {
    x_lo: f64,
    x_hi: f64,
    y_lo: f64,
    y_hi: f64,
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        MARGIN_L + (v - self.x_lo) / (self.x_hi - self.x_lo) * (WIDTH - MARGIN_L - MARGIN_R)
    }

    fn y(&self, v: f64) -> f64 {
        HEIGHT - MARGIN_B - (v - self.y_lo) / (self.y_hi - self.y_lo) * (HEIGHT - MARGIN_T - MARGIN_B)
    }

    fn axes(&self, out: &mut String, x_label: &str, y_label: &str) {
        out.push_str(&format!(
            "<rect x='{:.1}' y='{:.1}' width='{:.1}' height='{:.1}' fill='none' stroke='black'/>\n",
            MARGIN_L,
            MARGIN_T,
            WIDTH - MARGIN_L - MARGIN_R,
            HEIGHT - MARGIN_T - MARGIN_B
        ));
        for k in 0..=4 {
            let fx = self.x_lo + (self.x_hi - self.x_lo) * k as f64 / 4.0;
            let px = self.x(fx);
            out.push_str(&format!(
                "<line x1='{px:.1}' y1='{:.1}' x2='{px:.1}' y2='{:.1}' stroke='black'/>\n",
                HEIGHT - MARGIN_B,
                HEIGHT - MARGIN_B + 5.0
            ));
            out.push_str(&format!(
                "<text x='{px:.1}' y='{:.1}' font-size='11' text-anchor='middle'>{}</text>\n",
                HEIGHT - MARGIN_B + 18.0,
                tick_label(fx)
            ));
            let fy = self.y_lo + (self.y_hi - self.y_lo) * k as f64 / 4.0;
            let py = self.y(fy);
            out.push_str(&format!(
                "<line x1='{:.1}' y1='{py:.1}' x2='{:.1}' y2='{py:.1}' stroke='black'/>\n",
                MARGIN_L - 5.0,
                MARGIN_L
            ));
            out.push_str(&format!(
                "<text x='{:.1}' y='{:.1}' font-size='11' text-anchor='end'>{}</text>\n",
                MARGIN_L - 8.0,
                py + 4.0,
                tick_label(fy)
            ));
        }
        out.push_str(&format!(
            "<text x='{:.1}' y='{:.1}' font-size='13' text-anchor='middle'>{x_label}</text>\n",
            MARGIN_L + (WIDTH - MARGIN_L - MARGIN_R) / 2.0,
            HEIGHT - 10.0
        ));
        out.push_str(&format!(
            "<text x='16' y='{:.1}' font-size='13' text-anchor='middle' transform='rotate(-90 16 {:.1})'>{y_label}</text>\n",
            MARGIN_T + (HEIGHT - MARGIN_T - MARGIN_B) / 2.0,
            MARGIN_T + (HEIGHT - MARGIN_T - MARGIN_B) / 2.0
        ));
    }
}

fn document(body: &str) -> String {
    format!(
        "<svg xmlns='http://www.w3.org/2000/svg' width='{WIDTH}' height='{HEIGHT}' \
         viewBox='0 0 {WIDTH} {HEIGHT}'>\n<rect width='100%' height='100%' fill='white'/>\n{body}</svg>\n"
    )
}

/// Line plot: first column on x, every further column a polyline series.
pub fn render_lines(table: &ResultTable) -> String {
    let mut body = String::new();
    if table.columns.len() < 2 || table.rows.is_empty() {
        return document("<text x='20' y='30'>empty table</text>");
    }
    let (x_lo, x_hi) = finite_range(table.rows.iter().map(|r| r[0]));
    let (y_lo, y_hi) = finite_range(table.rows.iter().flat_map(|r| r[1..].iter().copied()));
    let frame = Frame { x_lo, x_hi, y_lo, y_hi };
    frame.axes(&mut body, &table.columns[0], "value");

    for (s, name) in table.columns[1..].iter().enumerate() {
        let color = SERIES_COLORS[s % SERIES_COLORS.len()];
        let pts: Vec<String> = table
            .rows
            .iter()
            .filter(|r| r[s + 1].is_finite())
            .map(|r| format!("{:.1},{:.1}", frame.x(r[0]), frame.y(r[s + 1])))
            .collect();
        body.push_str(&format!(
            "<polyline points='{}' fill='none' stroke='{color}' stroke-width='1.5'/>\n",
            pts.join(" ")
        ));
        body.push_str(&format!(
            "<text x='{:.1}' y='{:.1}' font-size='12' fill='{color}'>{name}</text>\n",
            WIDTH - MARGIN_R - 150.0,
            MARGIN_T + 16.0 * (s + 1) as f64
        ));
    }
    document(&body)
}

fn ramp(t: f64) -> String {
    // fixed two-color ramp: blue -> red
    let lerp = |a: f64, b: f64| a + (b - a) * t.clamp(0.0, 1.0);
    format!(
        "rgb({},{},{})",
        lerp(43.0, 229.0) as u8,
        lerp(108.0, 62.0) as u8,
        lerp(176.0, 62.0) as u8
    )
}

/// Heatmap of column 3 over the (column 1, column 2) grid.
pub fn render_heatmap(table: &ResultTable) -> String {
    let mut body = String::new();
    if table.columns.len() < 3 || table.rows.is_empty() {
        return document("<text x='20' y='30'>empty table</text>");
    }
    let mut xs: Vec<f64> = table.rows.iter().map(|r| r[0]).collect();
    let mut ys: Vec<f64> = table.rows.iter().map(|r| r[1]).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    ys.sort_by(f64::total_cmp);
    ys.dedup();
    let (v_lo, v_hi) = finite_range(table.rows.iter().map(|r| r[2]));
    let frame = Frame {
        x_lo: xs[0],
        x_hi: *xs.last().unwrap(),
        y_lo: ys[0],
        y_hi: *ys.last().unwrap(),
    };
    let cell_w = (WIDTH - MARGIN_L - MARGIN_R) / xs.len() as f64;
    let cell_h = (HEIGHT - MARGIN_T - MARGIN_B) / ys.len() as f64;
    for row in &table.rows {
        if !row[2].is_finite() {
            continue;
        }
        let t = (row[2] - v_lo) / (v_hi - v_lo).max(f64::MIN_POSITIVE);
        body.push_str(&format!(
            "<rect x='{:.1}' y='{:.1}' width='{:.1}' height='{:.1}' fill='{}'/>\n",
            frame.x(row[0]) - cell_w / 2.0,
            frame.y(row[1]) - cell_h / 2.0,
            cell_w + 0.5,
            cell_h + 0.5,
            ramp(t)
        ));
    }
    frame.axes(&mut body, &table.columns[0], &table.columns[1]);
    body.push_str(&format!(
        "<text x='{:.1}' y='{:.1}' font-size='12'>{}: {} .. {}</text>\n",
        MARGIN_L,
        MARGIN_T - 6.0,
        table.columns[2],
        tick_label(v_lo),
        tick_label(v_hi)
    ));
    document(&body)
}

/// Heatmap when the table has a 2D grid shape, polylines otherwise.
pub fn render(table: &ResultTable, two_axes: bool) -> String {
    if two_axes {
        render_heatmap(table)
    } else {
        render_lines(table)
    }
}
