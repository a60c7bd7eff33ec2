//! Configurations: finite maps from exact rational positions to signals.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::machine::SignalId;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("two signals share position {0}")]
    DuplicatePosition(String),
}

/// A finite-support assignment of meta-signals to rational positions.
/// At most one signal occupies a given position.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Configuration {
    placements: BTreeMap<Rational, SignalId>,
}

impl Configuration {
    pub fn new() -> Self {
        Configuration::default()
    }

    pub fn from_placements<I>(placements: I) -> Result<Self, ConfigError>
    where
        I: IntoIterator<Item = (Rational, SignalId)>,
    {
        let mut config = Configuration::new();
        for (position, signal) in placements {
            config.place(position, signal)?;
        }
        Ok(config)
    }

    pub fn place(&mut self, position: Rational, signal: SignalId) -> Result<(), ConfigError> {
        use crate::rational::format_rational;
        if self.placements.contains_key(&position) {
            return Err(ConfigError::DuplicatePosition(format_rational(&position)));
        }
        self.placements.insert(position, signal);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.placements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.placements.is_empty()
    }

    /// Placements in position order.
    pub fn iter(&self) -> impl Iterator<Item = (&Rational, SignalId)> {
        self.placements.iter().map(|(p, &s)| (p, s))
    }

    pub fn signal_at(&self, position: &Rational) -> Option<SignalId> {
        self.placements.get(position).copied()
    }

    /// The same configuration shifted by `delta`.
    pub fn translated(&self, delta: &Rational) -> Configuration {
        Configuration {
            placements: self
                .placements
                .iter()
                .map(|(p, &s)| (p + delta, s))
                .collect(),
        }
    }

    /// The same configuration with all positions scaled by `alpha > 0`.
    pub fn scaled(&self, alpha: &Rational) -> Configuration {
        Configuration {
            placements: self
                .placements
                .iter()
                .map(|(p, &s)| (p * alpha, s))
                .collect(),
        }
    }
}

impl<'a> IntoIterator for &'a Configuration {
    type Item = (&'a Rational, SignalId);
    type IntoIter = std::vec::IntoIter<(&'a Rational, SignalId)>;

    fn into_iter(self) -> Self::IntoIter {
        self.iter().collect::<Vec<_>>().into_iter()
    }
}
