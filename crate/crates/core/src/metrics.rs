//! Confusion matrix, accuracy and macro/per-class F1.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::MetricsError;
use crate::scenario::ThreatType;

/// `counts[true][predicted]` over `n` classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    n: usize,
    counts: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            counts: vec![0; n * n],
        }
    }

    /// Tallies `(true, predicted)` pairs. Fails on empty input.
    pub fn from_pairs<I>(n: usize, pairs: I) -> Result<Self, MetricsError>
    where
        I: IntoIterator<Item = (ThreatType, ThreatType)>,
    {
        let mut cm = Self::new(n);
        for (t, p) in pairs {
            cm.add(t, p)?;
        }
        if cm.total() == 0 {
            return Err(MetricsError::Empty);
        }
        Ok(cm)
    }

    pub fn add(&mut self, truth: ThreatType, predicted: ThreatType) -> Result<(), MetricsError> {
        for t in [truth, predicted] {
            if t.0 >= self.n {
                return Err(MetricsError::TypeOutOfRange {
                    index: t.0,
                    size: self.n,
                });
            }
        }
        self.counts[truth.0 * self.n + predicted.0] += 1;
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, truth: usize, predicted: usize) -> u64 {
        self.counts[truth * self.n + predicted]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    fn row_sum(&self, i: usize) -> u64 {
        (0..self.n).map(|j| self.get(i, j)).sum()
    }

    fn col_sum(&self, j: usize) -> u64 {
        (0..self.n).map(|i| self.get(i, j)).sum()
    }

    /// Matrix with classes relabeled so that old class `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut out = Self::new(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.counts[perm[i] * self.n + perm[j]] = self.get(i, j);
            }
        }
        out
    }

    pub fn report(&self) -> MetricsReport {
        report(self)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub accuracy: f64,
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
    pub per_class_precision: Vec<f64>,
    pub per_class_recall: Vec<f64>,
    pub per_class_f1: Vec<f64>,
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        0.0
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

/// Accuracy plus per-class and unweighted macro precision, recall and F1.
/// A ratio whose denominator is zero is taken as 0.
pub fn report(cm: &ConfusionMatrix) -> MetricsReport {
    let n = cm.size();
    let mut precision = Vec::with_capacity(n);
    let mut recall = Vec::with_capacity(n);
    let mut f1 = Vec::with_capacity(n);
    for k in 0..n {
        let tp = cm.get(k, k) as f64;
        let p = ratio(tp, cm.col_sum(k) as f64);
        let r = ratio(tp, cm.row_sum(k) as f64);
        precision.push(p);
        recall.push(r);
        f1.push(ratio(2.0 * p * r, p + r));
    }
    MetricsReport {
        accuracy: ratio(cm.trace() as f64, cm.total() as f64),
        macro_precision: mean(&precision),
        macro_recall: mean(&recall),
        macro_f1: mean(&f1),
        per_class_precision: precision,
        per_class_recall: recall,
        per_class_f1: f1,
    }
}
