use serde::{Deserialize, Serialize};

/// A per-item acceptance threshold fixed before any arrival.
///
/// A finite threshold passes values strictly above `value` always and values
/// equal to `value` when the item's upfront coin lands below `atom_accept`.
/// A plain `x >= T` comparison is `atom_accept = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Threshold {
    Infinite,
    Finite { value: f64, atom_accept: f64 },
}

impl Threshold {
    pub fn at_least(value: f64) -> Self {
        Threshold::Finite { value, atom_accept: 1.0 }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Threshold::Finite { .. })
    }

    /// `coin` is the item's uniform draw from `[0, 1)`.
    pub fn passes(&self, x: f64, coin: f64) -> bool {
        match *self {
            Threshold::Infinite => false,
            Threshold::Finite { value, atom_accept } => x > value || (x == value && coin < atom_accept),
        }
    }
}

/// One threshold per ground-set element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRule {
    thresholds: Vec<Threshold>,
}

impl ThresholdRule {
    pub fn new(thresholds: Vec<Threshold>) -> Self {
        ThresholdRule { thresholds }
    }

    /// Rejects everything.
    pub fn never(n: usize) -> Self {
        ThresholdRule { thresholds: vec![Threshold::Infinite; n] }
    }

    pub fn uniform(n: usize, t: Threshold) -> Self {
        ThresholdRule { thresholds: vec![t; n] }
    }

    pub fn len(&self) -> usize {
        self.thresholds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thresholds.is_empty()
    }

    pub fn get(&self, i: usize) -> Threshold {
        self.thresholds[i]
    }

    pub fn thresholds(&self) -> &[Threshold] {
        &self.thresholds
    }

    /// Elements with a finite threshold.
    pub fn considered(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.thresholds[i].is_finite()).collect()
    }
}
