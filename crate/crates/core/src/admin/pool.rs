//! The pool of attacks the administrator has seen and must defend against.

use crate::model::Attack;

/// An ordered, duplicate-free collection of attacks. Insertion order is
/// preserved so that scenario indices in the robust program and the game
/// trace line up with the iterations that produced them.
#[derive(Debug, Clone, Default)]
pub struct AttackPool {
    attacks: Vec<Attack>,
}

impl AttackPool {
    pub fn new() -> AttackPool {
        AttackPool::default()
    }

    /// Adds `attack` unless an equal attack is already pooled; returns
    /// whether the pool grew.
    pub fn insert(&mut self, attack: Attack) -> bool {
        if self.contains(&attack) {
            return false;
        }
        self.attacks.push(attack);
        true
    }

    pub fn contains(&self, attack: &Attack) -> bool {
        self.attacks.iter().any(|a| a == attack)
    }

    pub fn attacks(&self) -> &[Attack] {
        &self.attacks
    }

    pub fn len(&self) -> usize {
        self.attacks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attacks.is_empty()
    }
}

impl FromIterator<Attack> for AttackPool {
    fn from_iter<I: IntoIterator<Item = Attack>>(iter: I) -> AttackPool {
        let mut pool = AttackPool::new();
        for attack in iter {
            pool.insert(attack);
        }
        pool
    }
}
