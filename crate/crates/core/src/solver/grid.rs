use super::SolverError;

/// Uniform space-time grid with `nx` nodes in space and `nt` in time,
/// endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    x_min: f64,
    x_max: f64,
    nx: usize,
    t_min: f64,
    t_max: f64,
    nt: usize,
}

impl Grid {
    pub fn new(x: (f64, f64), nx: usize, t: (f64, f64), nt: usize) -> Result<Self, SolverError> {
        let finite = [x.0, x.1, t.0, t.1].iter().all(|v| v.is_finite());
        if !finite || x.0 >= x.1 || t.0 >= t.1 {
            return Err(SolverError::InvalidGrid(format!("bad extents {x:?} x {t:?}")));
        }
        if nx < 3 || nt < 2 {
            return Err(SolverError::InvalidGrid(format!(
                "need nx >= 3 and nt >= 2, got {nx} and {nt}"
            )));
        }
        Ok(Self {
            x_min: x.0,
            x_max: x.1,
            nx,
            t_min: t.0,
            t_max: t.1,
            nt,
        })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }
    pub fn x_max(&self) -> f64 {
        self.x_max
    }
    pub fn t_min(&self) -> f64 {
        self.t_min
    }
    pub fn t_max(&self) -> f64 {
        self.t_max
    }
    pub fn nx(&self) -> usize {
        self.nx
    }
    pub fn nt(&self) -> usize {
        self.nt
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn dt(&self) -> f64 {
        (self.t_max - self.t_min) / (self.nt - 1) as f64
    }

    /// Node abscissa; the last node is pinned to `x_max` exactly.
    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.nx {
            self.x_max
        } else {
            self.x_min + i as f64 * self.dx()
        }
    }

    pub fn t(&self, k: usize) -> f64 {
        if k + 1 == self.nt {
            self.t_max
        } else {
            self.t_min + k as f64 * self.dt()
        }
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.nx).map(|i| self.x(i)).collect()
    }

    pub fn ts(&self) -> Vec<f64> {
        (0..self.nt).map(|k| self.t(k)).collect()
    }

    pub fn same_shape(&self, other: &Grid) -> bool {
        self == other
    }
}
