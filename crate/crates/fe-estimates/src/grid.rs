use serde::{Deserialize, Serialize};

/// One sweep axis: a name the case evaluator understands and the list of
/// values to visit. Integer-valued quantities (derivative orders, selector
/// indices) ride along as exactly representable floats.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub points: Vec<f64>,
}

impl Axis {
    pub fn list(name: &str, points: &[f64]) -> Axis {
        Axis { name: name.to_string(), points: points.to_vec() }
    }

    /// Geometrically spaced points from `min` to `max` inclusive.
    pub fn log(name: &str, min: f64, max: f64, n: usize) -> Axis {
        assert!(min > 0.0 && max > min && n >= 2, "bad log axis parameters");
        let ratio = max / min;
        let points = (0..n)
            .map(|i| min * ratio.powf(i as f64 / (n - 1) as f64))
            .collect();
        Axis { name: name.to_string(), points }
    }

    /// Consecutive integers `lo..=hi` as exact floats.
    pub fn ints(name: &str, lo: u8, hi: u8) -> Axis {
        Axis {
            name: name.to_string(),
            points: (lo..=hi).map(f64::from).collect(),
        }
    }

    pub(crate) fn describe(&self) -> String {
        let n = self.points.len();
        if n <= 6 {
            let vals: Vec<String> = self.points.iter().map(|v| format!("{v}")).collect();
            format!("{}: {{{}}}", self.name, vals.join(", "))
        } else {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for &v in &self.points {
                lo = lo.min(v);
                hi = hi.max(v);
            }
            format!("{}: {} values in [{}, {}]", self.name, n, lo, hi)
        }
    }
}

/// Cartesian product of axes; a sweep visits every combination.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridSpec {
    pub axes: Vec<Axis>,
}

impl GridSpec {
    pub fn new(axes: Vec<Axis>) -> GridSpec {
        GridSpec { axes }
    }

    pub fn len(&self) -> u64 {
        self.axes.iter().map(|a| a.points.len() as u64).product()
    }

    pub fn is_empty(&self) -> bool {
        self.axes.iter().any(|a| a.points.is_empty())
    }

    pub fn axis(&self, name: &str) -> Option<&Axis> {
        self.axes.iter().find(|a| a.name == name)
    }

    /// Values of the idx-th point in row-major order (last axis fastest).
    pub(crate) fn point(&self, mut idx: u64) -> Vec<f64> {
        let mut vals = vec![0.0; self.axes.len()];
        for (i, ax) in self.axes.iter().enumerate().rev() {
            let n = ax.points.len() as u64;
            vals[i] = ax.points[(idx % n) as usize];
            idx /= n;
        }
        vals
    }

    pub(crate) fn describe(&self) -> Vec<String> {
        self.axes.iter().map(Axis::describe).collect()
    }
}
