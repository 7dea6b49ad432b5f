//! Uniform sampling grids and sampled series with CSV/JSON serialization.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform grid `x_min, …, x_max` with `n_points ≥ 2` nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if n_points < 2 || !(x_min < x_max) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::InvalidInput(format!(
                "grid needs finite x_min < x_max and n_points >= 2, got {x_min}..{x_max} x {n_points}"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            n_points,
        })
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.x_max
        } else {
            self.x_min + self.spacing() * i as f64
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.point(i))
    }
}

/// Ordered samples `(x, value₁, value₂, …)` sharing one abscissa column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSeries {
    pub columns: Vec<String>,
    pub x: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl GridSeries {
    /// Empty series with `width` value columns named `value`, `value2`, ….
    pub fn new(width: usize) -> Self {
        let columns = (0..width)
            .map(|i| {
                if i == 0 {
                    "value".to_string()
                } else {
                    format!("value{}", i + 1)
                }
            })
            .collect();
        Self {
            columns,
            x: Vec::new(),
            values: vec![Vec::new(); width],
        }
    }

    pub fn width(&self) -> usize {
        self.values.len()
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn push(&mut self, x: f64, row: &[f64]) -> Result<()> {
        if row.len() != self.width() {
            return Err(Error::InvalidInput(format!(
                "row has {} values, series has {} columns",
                row.len(),
                self.width()
            )));
        }
        self.x.push(x);
        for (col, &v) in self.values.iter_mut().zip(row) {
            col.push(v);
        }
        Ok(())
    }

    pub fn column(&self, i: usize) -> &[f64] {
        &self.values[i]
    }

    /// CSV text: header `x,value[,value2,...]`, LF line endings, values with 17
    /// significant digits so that parsing them back is exact.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x");
        for c in &self.columns {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for (i, x) in self.x.iter().enumerate() {
            write!(out, "{}", fmt17(*x)).unwrap();
            for col in &self.values {
                write!(out, ",{}", fmt17(col[i])).unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::InvalidInput("empty CSV".into()))?;
        let mut names = header.split(',');
        if names.next() != Some("x") {
            return Err(Error::InvalidInput(format!("unexpected CSV header {header:?}")));
        }
        let columns: Vec<String> = names.map(str::to_string).collect();
        let mut series = Self {
            values: vec![Vec::new(); columns.len()],
            columns,
            x: Vec::new(),
        };
        for (lineno, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let fields = line
                .split(',')
                .map(|f| {
                    f.parse::<f64>().map_err(|e| {
                        Error::InvalidInput(format!("line {}: {f:?}: {e}", lineno + 2))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let (x, row) = fields
                .split_first()
                .ok_or_else(|| Error::InvalidInput(format!("line {} is empty", lineno + 2)))?;
            series.push(*x, row)?;
        }
        Ok(series)
    }

    /// JSON object `{"columns": [...], "x": [...], "values": [[...], ...]}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("series serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("bad series JSON: {e}")))
    }
}

/// `{:.16e}` formatting: 17 significant digits, enough to round-trip any f64.
pub fn fmt17(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn grid_endpoints_are_exact() {
        let g = GridSpec::new(0.0, 1.0, 501).unwrap();
        let pts: Vec<f64> = g.points().collect();
        assert_eq!(pts.len(), 501);
        assert_eq!(pts[0], 0.0);
        assert_eq!(pts[500], 1.0);
        assert!((pts[250] - 0.5).abs() < 1e-15);
        assert!(GridSpec::new(0.0, 1.0, 1).is_err());
        assert!(GridSpec::new(1.0, 0.0, 10).is_err());
    }

    #[test]
    fn csv_layout() {
        let mut s = GridSeries::new(2);
        s.push(0.0, &[1.0, -2.5]).unwrap();
        let csv = s.to_csv();
        assert!(csv.starts_with("x,value,value2\n"));
        assert!(!csv.contains('\r'));
        assert!(s.push(1.0, &[1.0]).is_err());
    }

    proptest! {
        #[test]
        fn csv_and_json_round_trip_bit_exactly(rows in proptest::collection::vec((any::<f64>(), any::<f64>()), 1..20)) {
            let mut s = GridSeries::new(1);
            for (x, v) in &rows {
                let x = if x.is_finite() { *x } else { 0.0 };
                let v = if v.is_finite() { *v } else { 1.0 };
                s.push(x, &[v]).unwrap();
            }
            let back = GridSeries::from_csv(&s.to_csv()).unwrap();
            prop_assert_eq!(&back, &s);
            let back = GridSeries::from_json(&s.to_json()).unwrap();
            prop_assert_eq!(&back, &s);
        }
    }
}
