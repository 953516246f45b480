//! Uniform time grids and the map that fans work out across them.
//!
//! Grid sweeps are embarrassingly parallel — every time point builds its own
//! propagator — so [`map_times`] dispatches to a rayon parallel iterator when
//! the `parallel` feature (default) is enabled and falls back to the
//! sequential loop otherwise. Both paths produce identically ordered output.

use crate::{Error, Result};

/// Strictly increasing uniform grid over [start, end].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    start: f64,
    end: f64,
    points: usize,
}

impl TimeGrid {
    pub fn new(start: f64, end: f64, points: usize) -> Result<Self> {
        if !start.is_finite() || !end.is_finite() {
            return Err(Error::Config(format!(
                "time range [{start}, {end}] must be finite"
            )));
        }
        if end <= start {
            return Err(Error::Config(format!(
                "time range [{start}, {end}] must be increasing"
            )));
        }
        if points < 2 {
            return Err(Error::Config(format!(
                "a grid needs at least 2 points, got {points}"
            )));
        }
        Ok(TimeGrid { start, end, points })
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    pub fn points(&self) -> usize {
        self.points
    }

    /// The sample times; endpoints land exactly on `start` and `end`.
    pub fn times(&self) -> Vec<f64> {
        let step = (self.end - self.start) / (self.points - 1) as f64;
        let mut ts: Vec<f64> = (0..self.points)
            .map(|k| self.start + k as f64 * step)
            .collect();
        *ts.last_mut().unwrap() = self.end;
        ts
    }
}

/// Applies `f` to every time point, preserving order.
#[cfg(feature = "parallel")]
pub fn map_times<T, F>(times: &[f64], f: F) -> Vec<T>
where
    T: Send,
    F: Fn(f64) -> T + Sync,
{
    use rayon::prelude::*;
    times.par_iter().map(|&t| f(t)).collect()
}

/// Applies `f` to every time point, preserving order.
#[cfg(not(feature = "parallel"))]
pub fn map_times<T, F>(times: &[f64], f: F) -> Vec<T>
where
    T: Send,
    F: Fn(f64) -> T + Sync,
{
    map_times_sequential(times, f)
}

/// Sequential reference implementation; the benchmark baseline.
pub fn map_times_sequential<T, F>(times: &[f64], f: F) -> Vec<T>
where
    F: Fn(f64) -> T,
{
    times.iter().map(|&t| f(t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_grid_shape() {
        let grid = TimeGrid::new(0.0, 50.0, 501).unwrap();
        let ts = grid.times();
        assert_eq!(ts.len(), 501);
        assert_eq!(ts[0], 0.0);
        assert_eq!(ts[500], 50.0);
        assert!((ts[1] - 0.1).abs() < 1e-15);
        assert!(ts.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn rejects_degenerate_ranges() {
        assert!(matches!(TimeGrid::new(0.0, 0.0, 10), Err(Error::Config(_))));
        assert!(matches!(TimeGrid::new(5.0, 1.0, 10), Err(Error::Config(_))));
        assert!(matches!(TimeGrid::new(0.0, 1.0, 1), Err(Error::Config(_))));
        assert!(matches!(
            TimeGrid::new(0.0, f64::INFINITY, 10),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn parallel_and_sequential_maps_agree() {
        let ts = TimeGrid::new(0.0, 3.0, 64).unwrap().times();
        let f = |t: f64| (t * 1.7).sin() + t * t;
        assert_eq!(map_times(&ts, f), map_times_sequential(&ts, f));
    }
}
