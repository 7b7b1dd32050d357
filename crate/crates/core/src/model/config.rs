use serde::{Deserialize, Serialize};

use super::{ClassIndex, Model};
use crate::units::Bandwidth;
use crate::{Error, Result};

/// DS-TE defines at most eight traffic classes (TC0..TC7).
pub const MAX_CLASSES: usize = 8;

/// Per-class bandwidth constraints of one link.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassConfig {
    /// `BC_0..BC_{C-1}`; the class count is `bc.len()`.
    pub bc: Vec<Bandwidth>,
    /// Reservable link bandwidth `M`.
    pub link_capacity: Bandwidth,
    /// MAM only: allow `sum(BC_i) > M`.
    #[serde(default)]
    pub mam_overprovision: bool,
}

impl ClassConfig {
    pub fn new(bc: Vec<Bandwidth>, link_capacity: Bandwidth) -> Self {
        ClassConfig {
            bc,
            link_capacity,
            mam_overprovision: false,
        }
    }

    /// The three-class STM-4 configuration used by the bundled scenarios:
    /// `M = 622`, `BC = (622, 435.4, 248.8)` (100%, 70%, 40% of the link).
    pub fn stm4_three_class() -> Self {
        ClassConfig {
            bc: vec![
                Bandwidth::from_tenths(6220),
                Bandwidth::from_tenths(4354),
                Bandwidth::from_tenths(2488),
            ],
            link_capacity: Bandwidth::from_mbps(622),
            mam_overprovision: true,
        }
    }

    pub fn with_mam_overprovision(mut self, enabled: bool) -> Self {
        self.mam_overprovision = enabled;
        self
    }

    pub fn class_count(&self) -> usize {
        self.bc.len()
    }

    pub fn check_class(&self, class: ClassIndex) -> Result<()> {
        if class < self.class_count() {
            Ok(())
        } else {
            Err(Error::InvalidClass {
                class,
                class_count: self.class_count(),
            })
        }
    }

    /// Validates the constraints for use with `model`.
    pub fn validate(&self, model: Model) -> Result<()> {
        let c = self.class_count();
        if c == 0 || c > MAX_CLASSES {
            return Err(Error::Config(format!(
                "class count must be in 1..={MAX_CLASSES}, got {c}"
            )));
        }
        if !self.link_capacity.is_positive() {
            return Err(Error::Config(format!(
                "link capacity must be positive, got {}",
                self.link_capacity
            )));
        }
        if let Some((i, bc)) = self.bc.iter().enumerate().find(|(_, bc)| !bc.is_positive()) {
            return Err(Error::Config(format!("BC_{i} must be positive, got {bc}")));
        }

        if model.is_nested() {
            if self.bc[0] != self.link_capacity {
                return Err(Error::Config(format!(
                    "{model}: BC_0 ({}) must equal the link capacity ({})",
                    self.bc[0], self.link_capacity
                )));
            }
            for k in 1..c {
                if self.bc[k] > self.bc[k - 1] {
                    return Err(Error::Config(format!(
                        "{model}: constraints must be nested, but BC_{k} ({}) > BC_{} ({})",
                        self.bc[k],
                        k - 1,
                        self.bc[k - 1]
                    )));
                }
            }
        } else {
            if let Some((i, bc)) = self.bc.iter().enumerate().find(|(_, bc)| **bc > self.link_capacity) {
                return Err(Error::Config(format!(
                    "mam: BC_{i} ({bc}) exceeds the link capacity ({})",
                    self.link_capacity
                )));
            }
            let sum: Bandwidth = self.bc.iter().sum();
            if !self.mam_overprovision && sum > self.link_capacity {
                return Err(Error::Config(format!(
                    "mam: sum of constraints ({sum}) exceeds the link capacity ({}) \
                     and overprovisioning is disabled",
                    self.link_capacity
                )));
            }
        }
        Ok(())
    }
}
