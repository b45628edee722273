//! Qubit labels and registers.
//!
//! Basis convention: `|0>` is H, L or U and `|1>` is V, R or D. The first
//! label of a register is the most significant bit of a basis index.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Party {
    A,
    B,
}

/// Degree of freedom carried by a qubit. `Pair(i)` is used for the abstract
/// n-pair registers, where each party holds one qubit of every pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Dof {
    Polarization,
    Momentum,
    Pair(u8),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct QubitLabel {
    pub party: Party,
    pub dof: Dof,
}

impl QubitLabel {
    pub const fn new(party: Party, dof: Dof) -> Self {
        Self { party, dof }
    }

    pub const fn pol(party: Party) -> Self {
        Self::new(party, Dof::Polarization)
    }

    pub const fn mom(party: Party) -> Self {
        Self::new(party, Dof::Momentum)
    }

    pub const fn pair(party: Party, index: u8) -> Self {
        Self::new(party, Dof::Pair(index))
    }
}

impl fmt::Display for QubitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let party = match self.party {
            Party::A => "A",
            Party::B => "B",
        };
        match self.dof {
            Dof::Polarization => write!(f, "{party}.pol"),
            Dof::Momentum => write!(f, "{party}.mom"),
            Dof::Pair(i) => write!(f, "{party}{i}"),
        }
    }
}

/// Ordered list of distinct qubit labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Register {
    labels: Vec<QubitLabel>,
}

impl Register {
    pub fn new(labels: Vec<QubitLabel>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(labels.len());
        for label in &labels {
            if !seen.insert(*label) {
                return Err(Error::LabelCollision(*label));
            }
        }
        Ok(Self { labels })
    }

    /// (A,pol), (A,mom), (B,pol), (B,mom).
    pub fn hyperentangled() -> Self {
        Self {
            labels: vec![
                QubitLabel::pol(Party::A),
                QubitLabel::mom(Party::A),
                QubitLabel::pol(Party::B),
                QubitLabel::mom(Party::B),
            ],
        }
    }

    /// (A,pol), (B,pol).
    pub fn polarization_pair() -> Self {
        Self {
            labels: vec![QubitLabel::pol(Party::A), QubitLabel::pol(Party::B)],
        }
    }

    /// A1..An, B1..Bn.
    pub fn n_pairs(n: usize) -> Self {
        let labels = [Party::A, Party::B]
            .into_iter()
            .flat_map(|p| (1..=n).map(move |i| QubitLabel::pair(p, i as u8)))
            .collect();
        Self { labels }
    }

    pub fn labels(&self) -> &[QubitLabel] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        1 << self.labels.len()
    }

    pub fn position(&self, label: QubitLabel) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| *l == label)
            .ok_or(Error::UnknownLabel(label))
    }

    pub fn positions(&self, labels: &[QubitLabel]) -> Result<Vec<usize>> {
        let mut seen = HashSet::with_capacity(labels.len());
        labels
            .iter()
            .map(|l| {
                if !seen.insert(*l) {
                    return Err(Error::LabelCollision(*l));
                }
                self.position(*l)
            })
            .collect()
    }

    pub fn contains(&self, label: QubitLabel) -> bool {
        self.labels.contains(&label)
    }

    /// Labels held by one party, in register order.
    pub fn party_labels(&self, party: Party) -> Vec<QubitLabel> {
        self.labels.iter().copied().filter(|l| l.party == party).collect()
    }

    pub fn is_canonical(&self) -> bool {
        self.labels.windows(2).all(|w| w[0] < w[1])
    }

    pub fn canonical(&self) -> Self {
        let mut labels = self.labels.clone();
        labels.sort();
        Self { labels }
    }

    /// Bit shift of the qubit at `position` inside a basis index.
    pub(crate) fn shift(&self, position: usize) -> usize {
        self.labels.len() - 1 - position
    }
}

impl fmt::Display for Register {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, l) in self.labels.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_label_rejected() {
        let l = QubitLabel::pol(Party::A);
        assert_eq!(Register::new(vec![l, l]), Err(Error::LabelCollision(l)));
    }

    #[test]
    fn canonical_orders() {
        assert!(Register::hyperentangled().is_canonical());
        assert!(Register::n_pairs(3).is_canonical());
        let r = Register::new(vec![QubitLabel::pol(Party::B), QubitLabel::mom(Party::A)]).unwrap();
        assert!(!r.is_canonical());
        assert_eq!(
            r.canonical().labels(),
            &[QubitLabel::mom(Party::A), QubitLabel::pol(Party::B)]
        );
    }

    #[test]
    fn n_pair_layout() {
        let r = Register::n_pairs(2);
        assert_eq!(r.to_string(), "[A1, A2, B1, B2]");
        assert_eq!(r.dim(), 16);
    }
}
