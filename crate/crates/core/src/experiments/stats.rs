//! One-pass mean and population standard deviation.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub mean: f64,
    /// Population standard deviation (denominator `count`).
    pub sd: f64,
    pub count: usize,
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Streaming accumulator. Values are shifted by the first observation
/// and both moments are summed with compensation, so identical inputs give
/// an exact zero deviation and the result does not depend on input order
/// beyond rounding.
#[derive(Debug, Clone, Default)]
pub struct StreamingStats {
    shift: Option<f64>,
    first: CompensatedSum,
    second: CompensatedSum,
    count: usize,
}

impl StreamingStats {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        let shift = *self.shift.get_or_insert(x);
        let d = x - shift;
        self.first.add(d);
        self.second.add(d * d);
        self.count += 1;
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn finish(&self) -> Option<SummaryStats> {
        let shift = self.shift?;
        let n = self.count as f64;
        let m = self.first.value() / n;
        let var = (self.second.value() / n - m * m).max(0.0);
        Some(SummaryStats {
            mean: shift + m,
            sd: var.sqrt(),
            count: self.count,
        })
    }
}

/// Summary of a value sequence; `None` when it is empty.
pub fn summarize<I: IntoIterator<Item = f64>>(values: I) -> Option<SummaryStats> {
    let mut acc = StreamingStats::new();
    for v in values {
        acc.push(v);
    }
    acc.finish()
}
