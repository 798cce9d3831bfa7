//! Checked integer helpers: lcm without silent wraparound and the generalized
//! Chinese remainder merge used by the reachability solver.

use num_integer::Integer;

use crate::error::{Error, Result};

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// `lcm(a, b)`, or `None` if it does not fit in a `u64`.
pub fn checked_lcm(a: u64, b: u64) -> Option<u64> {
    if a == 0 || b == 0 {
        return Some(0);
    }
    (a / gcd(a, b)).checked_mul(b)
}

pub fn lcm_all(values: &[u64]) -> Result<u64> {
    values
        .iter()
        .try_fold(1u64, |acc, &v| checked_lcm(acc, v))
        .ok_or(Error::Overflow("lcm of grid dimensions"))
}

pub fn product(values: impl IntoIterator<Item = u64>, what: &'static str) -> Result<u64> {
    values
        .into_iter()
        .try_fold(1u64, |acc, v| acc.checked_mul(v))
        .ok_or(Error::Overflow(what))
}

/// A residue class `r mod n` with `0 <= r < n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Congruence {
    pub residue: u64,
    pub modulus: u64,
}

impl Congruence {
    pub fn new(value: i128, modulus: u64) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        let residue = value.rem_euclid(modulus as i128) as u64;
        Self { residue, modulus }
    }

    /// Intersects two residue classes. Moduli need not be coprime; the classes
    /// are compatible iff the residues agree modulo `gcd(n1, n2)`.
    ///
    /// Returns `Ok(None)` when the system has no solution.
    pub fn merge(self, other: Congruence) -> Result<Option<Congruence>> {
        let (n1, n2) = (self.modulus as i128, other.modulus as i128);
        let ext = n1.extended_gcd(&n2);
        let g = ext.gcd;
        let diff = other.residue as i128 - self.residue as i128;
        if diff % g != 0 {
            return Ok(None);
        }
        let lcm = n1 / g * n2;
        if lcm > u64::MAX as i128 {
            return Err(Error::Overflow("congruence modulus"));
        }
        // n1·x ≡ diff (mod n2)  ⇒  x ≡ (diff/g)·inv(n1/g) (mod n2/g)
        let step = n2 / g;
        let a = (diff / g).rem_euclid(step) as u128;
        let b = ext.x.rem_euclid(step) as u128;
        let x = (a * b % step as u128) as i128;
        let value = self.residue as i128 + n1 * x;
        Ok(Some(Congruence::new(value, lcm as u64)))
    }
}

/// Solves a simultaneous system of congruences; the empty system is `0 mod 1`.
pub fn solve_congruences(system: &[Congruence]) -> Result<Option<Congruence>> {
    let mut acc = Congruence {
        residue: 0,
        modulus: 1,
    };
    for &c in system {
        match acc.merge(c)? {
            Some(next) => acc = next,
            None => return Ok(None),
        }
    }
    Ok(Some(acc))
}
