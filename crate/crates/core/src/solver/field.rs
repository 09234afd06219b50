use std::io::{self, Write};

use super::{Grid, SolverError};

/// A scalar sampled on every node of a [`Grid`], stored time-major:
/// `values[k * nx + i]` is the value at `(x_i, t_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionField {
    grid: Grid,
    values: Vec<f64>,
}

/// Seventeen significant digits in scientific notation; round-trips every `f64`.
pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

impl SolutionField {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self, SolverError> {
        let expected = grid.nx() * grid.nt();
        if values.len() != expected {
            return Err(SolverError::Shape {
                expected,
                found: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(grid.nx() * grid.nt());
        for k in 0..grid.nt() {
            let t = grid.t(k);
            values.extend((0..grid.nx()).map(|i| f(grid.x(i), t)));
        }
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, i: usize, k: usize) -> f64 {
        self.values[k * self.grid.nx() + i]
    }

    pub fn column(&self, k: usize) -> &[f64] {
        let nx = self.grid.nx();
        &self.values[k * nx..(k + 1) * nx]
    }

    pub fn column_mut(&mut self, k: usize) -> &mut [f64] {
        let nx = self.grid.nx();
        &mut self.values[k * nx..(k + 1) * nx]
    }

    /// `u_x` on column `k`: centered inside, one-sided at the two ends.
    pub fn slope_column(&self, k: usize) -> Vec<f64> {
        slopes(self.column(k), self.grid.dx())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// CSV with header `t,x,u` (or custom labels), one row per node.
    pub fn write_csv<W: Write>(&self, out: &mut W, labels: [&str; 3]) -> io::Result<()> {
        writeln!(out, "{},{},{}", labels[0], labels[1], labels[2])?;
        for k in 0..self.grid.nt() {
            let t = format_number(self.grid.t(k));
            for (i, v) in self.column(k).iter().enumerate() {
                writeln!(out, "{t},{},{}", format_number(self.grid.x(i)), format_number(*v))?;
            }
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf, ["t", "x", "u"]).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }
}

pub(crate) fn slopes(col: &[f64], dx: f64) -> Vec<f64> {
    let n = col.len();
    (0..n)
        .map(|i| {
            if i == 0 {
                (col[1] - col[0]) / dx
            } else if i + 1 == n {
                (col[n - 1] - col[n - 2]) / dx
            } else {
                (col[i + 1] - col[i - 1]) / (2.0 * dx)
            }
        })
        .collect()
}
