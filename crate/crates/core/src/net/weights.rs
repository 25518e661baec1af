use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Branch-metric weights per position: a priori, systematic, parity.
pub const GAMMA_WEIGHTS: usize = 3;
/// Posterior weights per position: `alpha, gamma, beta` for `u = 1`, then for `u = 0`.
pub const LLR_WEIGHTS: usize = 6;
/// Extrinsic weights per position: posterior, systematic, a priori.
pub const EXT_WEIGHTS: usize = 3;
/// All weights attached to one trellis position of one subnet.
pub const WEIGHTS_PER_POSITION: usize = GAMMA_WEIGHTS + LLR_WEIGHTS + EXT_WEIGHTS;

pub(crate) const GAMMA_OFFSET: usize = 0;
pub(crate) const LLR_OFFSET: usize = GAMMA_WEIGHTS;
pub(crate) const EXT_OFFSET: usize = GAMMA_WEIGHTS + LLR_WEIGHTS;

/// Subnets per decoding unit (one per constituent decoder).
pub const SUBNETS: usize = 2;

/// Trainable parameters of an unrolled decoder.
///
/// Flat layout, outermost first: unit, subnet, position `k`, then the twelve
/// per-position weights `[gamma1..3, llr1..6, ext1..3]`. In shared mode a
/// single unit's weights are reused by every unit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSet {
    k: usize,
    units: usize,
    shared: bool,
    values: Vec<f64>,
}

impl WeightSet {
    /// All-ones weights: the network then computes plain max-log-MAP.
    pub fn ones(k: usize, units: usize) -> Self {
        Self::filled(k, units, false, 1.0)
    }

    pub fn ones_shared(k: usize, units: usize) -> Self {
        Self::filled(k, units, true, 1.0)
    }

    pub fn filled(k: usize, units: usize, shared: bool, value: f64) -> Self {
        let stored = if shared { 1 } else { units };
        WeightSet {
            k,
            units,
            shared,
            values: vec![value; stored * SUBNETS * k * WEIGHTS_PER_POSITION],
        }
    }

    pub fn from_values(k: usize, units: usize, shared: bool, values: Vec<f64>) -> Result<Self> {
        let w = WeightSet {
            k,
            units,
            shared,
            values,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.units == 0 {
            return Err(Error::WeightShape(format!(
                "K={} and units={} must both be positive",
                self.k, self.units
            )));
        }
        let expected = self.stored_units() * SUBNETS * self.k * WEIGHTS_PER_POSITION;
        if self.values.len() != expected {
            return Err(Error::WeightShape(format!(
                "expected {expected} values for K={}, units={}, shared={}, got {}",
                self.k,
                self.units,
                self.shared,
                self.values.len()
            )));
        }
        if let Some(i) = self.values.iter().position(|v| !v.is_finite()) {
            return Err(Error::WeightShape(format!("weight {i} is not finite")));
        }
        Ok(())
    }

    /// Zeros with the same shape, e.g. for gradients.
    pub fn zeros_like(&self) -> Self {
        WeightSet {
            values: vec![0.0; self.values.len()],
            ..*self
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn units(&self) -> usize {
        self.units
    }

    pub fn shared(&self) -> bool {
        self.shared
    }

    fn stored_units(&self) -> usize {
        if self.shared {
            1
        } else {
            self.units
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Offset of the `K * 12` block used by `subnet` of `unit`.
    pub(crate) fn block_offset(&self, unit: usize, subnet: usize) -> usize {
        let u = if self.shared { 0 } else { unit };
        (u * SUBNETS + subnet) * self.k * WEIGHTS_PER_POSITION
    }

    /// Weights of `subnet` in `unit`, `K * 12` values.
    pub fn block(&self, unit: usize, subnet: usize) -> &[f64] {
        let o = self.block_offset(unit, subnet);
        &self.values[o..o + self.k * WEIGHTS_PER_POSITION]
    }

    /// The twelve weights of one position.
    pub fn position(&self, unit: usize, subnet: usize, k: usize) -> &[f64] {
        let o = self.block_offset(unit, subnet) + k * WEIGHTS_PER_POSITION;
        &self.values[o..o + WEIGHTS_PER_POSITION]
    }

    pub fn position_mut(&mut self, unit: usize, subnet: usize, k: usize) -> &mut [f64] {
        let o = self.block_offset(unit, subnet) + k * WEIGHTS_PER_POSITION;
        &mut self.values[o..o + WEIGHTS_PER_POSITION]
    }

    /// Number of distinct trainable parameters, counted by walking the layout.
    pub fn count_parameters(&self) -> usize {
        let mut n = 0;
        for unit in 0..self.stored_units() {
            for subnet in 0..SUBNETS {
                for k in 0..self.k {
                    let o = self.block_offset(unit, subnet) + k * WEIGHTS_PER_POSITION;
                    n += self.values[o..o + GAMMA_WEIGHTS].len()
                        + self.values[o + LLR_OFFSET..o + EXT_OFFSET].len()
                        + self.values[o + EXT_OFFSET..o + WEIGHTS_PER_POSITION].len();
                }
            }
        }
        n
    }

    pub fn is_all_ones(&self) -> bool {
        self.values.iter().all(|&v| v == 1.0)
    }
}

/// Closed-form parameter count `M * 2 * K * 12` of the unshared layout.
pub fn parameter_count_formula(k: usize, units: usize) -> usize {
    units * SUBNETS * k * WEIGHTS_PER_POSITION
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_counts() {
        assert_eq!(WeightSet::ones(40, 3).count_parameters(), 2880);
        assert_eq!(WeightSet::ones(1, 1).count_parameters(), 24);
        assert_eq!(parameter_count_formula(40, 3), 2880);
        assert_eq!(WeightSet::ones_shared(40, 3).count_parameters(), 960);
        for (k, m) in [(1, 1), (7, 2), (40, 5)] {
            assert_eq!(
                WeightSet::ones(k, m).count_parameters(),
                parameter_count_formula(k, m)
            );
        }
    }

    #[test]
    fn layout_offsets() {
        let mut w = WeightSet::filled(4, 2, false, 0.0);
        w.position_mut(1, 0, 3)[5] = 7.0;
        let flat = (2 * 4 + 3) * 12 + 5;
        assert_eq!(w.values()[flat], 7.0);
        assert_eq!(w.block(1, 0)[3 * 12 + 5], 7.0);

        let s = WeightSet::ones_shared(4, 3);
        assert_eq!(s.block_offset(2, 1), s.block_offset(0, 1));
    }

    #[test]
    fn shape_validation() {
        assert!(WeightSet::from_values(40, 3, false, vec![1.0; 2880]).is_ok());
        assert!(matches!(
            WeightSet::from_values(40, 3, false, vec![1.0; 2879]),
            Err(Error::WeightShape(_))
        ));
        assert!(WeightSet::from_values(1, 1, false, vec![f64::NAN; 24]).is_err());
    }
}
