//! Surface data for `|S|`, `Re S` and `Im S` over a rectangle, written as
//! whitespace-separated `x y value` lines in blocks of constant `x`.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gaussian::normalized_ratio;
use crate::point::HalfPlanePoint;

/// Upper limit on `rows·cols`.
pub const MAX_GRID_POINTS: usize = 10_000_000;

/// Rectangle `[x_min, x_max] × [y_min, y_max]` sampled at `rows` values of
/// `x` and `cols` values of `y`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub rows: usize,
    pub cols: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64, rows: usize, cols: usize) -> Result<Self> {
        let g = GridSpec { x_min, x_max, y_min, y_max, rows, cols };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.x_min, self.x_max, self.y_min, self.y_max].iter().all(|v| v.is_finite());
        if !finite || self.x_min < 0.0 || self.x_min >= self.x_max || self.y_min >= self.y_max {
            return Err(Error::Domain(format!(
                "grid needs 0 <= x_min < x_max and y_min < y_max, got [{}, {}] x [{}, {}]",
                self.x_min, self.x_max, self.y_min, self.y_max
            )));
        }
        if self.rows < 2 || self.cols < 2 || self.rows.saturating_mul(self.cols) > MAX_GRID_POINTS {
            return Err(Error::Domain(format!(
                "grid needs rows, cols >= 2 and rows*cols <= {MAX_GRID_POINTS}, got {} x {}",
                self.rows, self.cols
            )));
        }
        Ok(())
    }

    /// The figure panels: `[0,8]×[−8,8]` for `|S|` and `Re S`,
    /// `[0,16]×[−8,8]` for `Im S`, 41 by 41.
    pub fn default_for(q: GridQuantity) -> Self {
        let x_max = if q == GridQuantity::ImS { 16.0 } else { 8.0 };
        GridSpec { x_min: 0.0, x_max, y_min: -8.0, y_max: 8.0, rows: 41, cols: 41 }
    }

    pub fn x(&self, i: usize) -> f64 {
        node(self.x_min, self.x_max, i, self.rows)
    }

    pub fn y(&self, j: usize) -> f64 {
        node(self.y_min, self.y_max, j, self.cols)
    }
}

/// Written so that nodes of a range symmetric about 0 are exact negatives.
fn node(lo: f64, hi: f64, k: usize, n: usize) -> f64 {
    let m = (n - 1) as f64;
    ((m - k as f64) * lo + k as f64 * hi) / m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GridQuantity {
    AbsS,
    ReS,
    ImS,
}

impl GridQuantity {
    pub const ALL: [GridQuantity; 3] = [GridQuantity::AbsS, GridQuantity::ReS, GridQuantity::ImS];

    pub fn as_str(&self) -> &'static str {
        match self {
            GridQuantity::AbsS => "absS",
            GridQuantity::ReS => "reS",
            GridQuantity::ImS => "imS",
        }
    }

    pub fn eval(&self, z: HalfPlanePoint) -> f64 {
        let s = normalized_ratio(z).value;
        match self {
            GridQuantity::AbsS => s.norm(),
            GridQuantity::ReS => s.re,
            GridQuantity::ImS => s.im,
        }
    }
}

impl fmt::Display for GridQuantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GridQuantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GridQuantity::ALL
            .into_iter()
            .find(|q| q.as_str() == s)
            .ok_or_else(|| Error::Domain(format!("unknown grid quantity {s:?}; expected absS, reS or imS")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub x: f64,
    pub y: f64,
    pub value: f64,
}

/// Values in blocks of constant `x`, `y` increasing within each block.
pub fn grid_values(spec: &GridSpec, q: GridQuantity) -> Result<Vec<Vec<GridPoint>>> {
    spec.validate()?;
    Ok((0..spec.rows)
        .into_par_iter()
        .map(|i| {
            let x = spec.x(i);
            (0..spec.cols)
                .map(|j| {
                    let y = spec.y(j);
                    let z = HalfPlanePoint::new(x, y).expect("validated grid lies in the half-plane");
                    GridPoint { x, y, value: q.eval(z) }
                })
                .collect()
        })
        .collect())
}

/// 17 significant digits, trailing zeros dropped; plain notation for
/// exponents in `[−5, 17)`, scientific otherwise. Zero prints as `0`.
pub fn format_sig17(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Writes the table; with `header`, a few `#` lines describe it first.
pub fn write_grid<W: Write>(
    out: &mut W,
    spec: &GridSpec,
    q: GridQuantity,
    blocks: &[Vec<GridPoint>],
    header: bool,
) -> io::Result<()> {
    if header {
        writeln!(out, "# quantity {q}")?;
        writeln!(
            out,
            "# x in [{}, {}] ({} values), y in [{}, {}] ({} values)",
            format_sig17(spec.x_min),
            format_sig17(spec.x_max),
            spec.rows,
            format_sig17(spec.y_min),
            format_sig17(spec.y_max),
            spec.cols
        )?;
        writeln!(out, "# columns: x y value; blocks of constant x, y varies fastest")?;
    }
    for (i, block) in blocks.iter().enumerate() {
        if i > 0 {
            writeln!(out)?;
        }
        for p in block {
            writeln!(out, "{} {} {}", format_sig17(p.x), format_sig17(p.y), format_sig17(p.value))?;
        }
    }
    Ok(())
}

/// Reads a table written by [`write_grid`] back into blocks.
pub fn parse_grid(text: &str) -> Result<Vec<Vec<GridPoint>>> {
    let mut blocks = Vec::new();
    let mut current = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.starts_with('#') {
            continue;
        }
        if line.is_empty() {
            if !current.is_empty() {
                blocks.push(std::mem::take(&mut current));
            }
            continue;
        }
        let fields: Vec<f64> = line
            .split_whitespace()
            .map(|t| t.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Domain(format!("line {}: {e}", n + 1)))?;
        if fields.len() != 3 {
            return Err(Error::Domain(format!("line {}: expected 3 fields, got {}", n + 1, fields.len())));
        }
        current.push(GridPoint { x: fields[0], y: fields[1], value: fields[2] });
    }
    if !current.is_empty() {
        blocks.push(current);
    }
    Ok(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig17_formatting() {
        assert_eq!(format_sig17(0.0), "0");
        assert_eq!(format_sig17(-0.0), "0");
        assert_eq!(format_sig17(1.0), "1");
        assert_eq!(format_sig17(-8.0), "-8");
        assert_eq!(format_sig17(crate::consts::SQRT_2_OVER_PI), "0.79788456080286541");
        assert_eq!(format_sig17(0.2), "0.20000000000000001");
        assert_eq!(format_sig17(1.5e-16), "1.5e-16");
        assert_eq!(format_sig17(0.000015), "0.000015");
        assert_eq!(format_sig17(1e20), "1e20");
        for v in [0.1, 1.0 / 3.0, 123456.789, -2.5e-7, 1.7976931348623157e308, 5e-324] {
            assert_eq!(format_sig17(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn nodes_include_endpoints_and_are_symmetric() {
        let g = GridSpec::default_for(GridQuantity::AbsS);
        assert_eq!(g.x(0), 0.0);
        assert_eq!(g.x(40), 8.0);
        assert_eq!(g.y(20), 0.0);
        for j in 0..41 {
            assert_eq!(g.y(j), -g.y(40 - j));
        }
        assert_eq!(GridSpec::default_for(GridQuantity::ImS).x_max, 16.0);
    }

    #[test]
    fn spec_validation() {
        assert!(GridSpec::new(-1.0, 1.0, 0.0, 1.0, 3, 3).is_err());
        assert!(GridSpec::new(1.0, 1.0, 0.0, 1.0, 3, 3).is_err());
        assert!(GridSpec::new(0.0, 1.0, 0.0, 1.0, 1, 3).is_err());
        assert!(GridSpec::new(0.0, 1.0, 0.0, 1.0, 10_000, 10_000).is_err());
        assert!(GridSpec::new(0.0, 1.0, -1.0, 1.0, 2, 2).is_ok());
    }

    #[test]
    fn round_trip() {
        let spec = GridSpec::new(0.0, 2.0, -1.0, 1.0, 5, 7).unwrap();
        let blocks = grid_values(&spec, GridQuantity::ReS).unwrap();
        for header in [false, true] {
            let mut buf = Vec::new();
            write_grid(&mut buf, &spec, GridQuantity::ReS, &blocks, header).unwrap();
            let text = String::from_utf8(buf).unwrap();
            assert_eq!(parse_grid(&text).unwrap(), blocks);
            assert_eq!(text.lines().filter(|l| l.is_empty()).count(), 4);
        }
        assert!(parse_grid("1 2\n").is_err());
        assert!(parse_grid("1 2 x\n").is_err());
    }

    #[test]
    fn quantity_names() {
        for q in GridQuantity::ALL {
            assert_eq!(q.as_str().parse::<GridQuantity>().unwrap(), q);
        }
        assert!("abss".parse::<GridQuantity>().is_err());
    }
}
