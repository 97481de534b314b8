//! Finitely supported signed measures on `σ_m(2^X)`.

use std::collections::btree_map::{self, BTreeMap};

use num_traits::{Signed, Zero};

use crate::rational::Rational;
use crate::subset::Subset;

/// A purely atomic signed measure with exact rational masses.
///
/// Zero masses are never stored, so equality of measures is structural
/// equality of the atom maps.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SignedMeasure {
    atoms: BTreeMap<Subset, Rational>,
}

impl SignedMeasure {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn dirac(at: Subset) -> Self {
        let mut mu = Self::zero();
        mu.add_atom(at, Rational::from_integer(1.into()));
        mu
    }

    /// Sums masses at repeated atoms.
    pub fn from_atoms<I: IntoIterator<Item = (Subset, Rational)>>(atoms: I) -> Self {
        let mut mu = Self::zero();
        for (s, c) in atoms {
            mu.add_atom(s, c);
        }
        mu
    }

    pub fn add_atom(&mut self, at: Subset, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.atoms.entry(at) {
            btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += scale · other`
    pub fn add_scaled(&mut self, other: &SignedMeasure, scale: &Rational) {
        if scale.is_zero() {
            return;
        }
        for (s, c) in &other.atoms {
            self.add_atom(*s, c * scale);
        }
    }

    pub fn atoms(&self) -> impl Iterator<Item = (Subset, &Rational)> + '_ {
        self.atoms.iter().map(|(s, c)| (*s, c))
    }

    pub fn coefficient(&self, at: Subset) -> Rational {
        self.atoms.get(&at).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = Subset> + '_ {
        self.atoms.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Total variation: the sum of absolute atom masses.
    pub fn tv_norm(&self) -> Rational {
        self.atoms.values().map(|c| c.abs()).sum()
    }

    pub fn total_mass(&self) -> Rational {
        self.atoms.values().sum()
    }

    /// Mass of the set of atoms selected by `region`.
    pub fn mass_where(&self, mut region: impl FnMut(Subset) -> bool) -> Rational {
        self.atoms
            .iter()
            .filter(|(s, _)| region(**s))
            .map(|(_, c)| c)
            .sum()
    }

    /// Mass of the cylinder `O_B = {χ_C : B ⊆ C}`.
    pub fn cylinder_mass(&self, base: Subset) -> Rational {
        self.mass_where(|c| base.is_subset_of(c))
    }

    /// Image measure under `h`; masses landing on the same atom are summed.
    pub fn pushforward(&self, mut h: impl FnMut(Subset) -> Subset) -> SignedMeasure {
        SignedMeasure::from_atoms(self.atoms.iter().map(|(s, c)| (h(*s), c.clone())))
    }

    pub fn max_atom_len(&self) -> usize {
        self.atoms.keys().map(|s| s.len()).max().unwrap_or(0)
    }

    /// `∫ f dμ`; `None` when `f` has no value at some atom.
    pub fn integrate<'a>(
        &self,
        mut f: impl FnMut(Subset) -> Option<&'a Rational>,
    ) -> Result<Rational, Subset> {
        let mut acc = Rational::zero();
        for (s, c) in &self.atoms {
            let v = f(*s).ok_or(*s)?;
            acc += c * v;
        }
        Ok(acc)
    }
}

impl FromIterator<(Subset, Rational)> for SignedMeasure {
    fn from_iter<T: IntoIterator<Item = (Subset, Rational)>>(iter: T) -> Self {
        Self::from_atoms(iter)
    }
}

/// Free-function form of [`SignedMeasure::tv_norm`].
pub fn tv_norm(mu: &SignedMeasure) -> Rational {
    mu.tv_norm()
}

/// Free-function form of [`SignedMeasure::pushforward`].
pub fn pushforward(mu: &SignedMeasure, h: impl FnMut(Subset) -> Subset) -> SignedMeasure {
    mu.pushforward(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn s(xs: &[usize]) -> Subset {
        Subset::from_members(xs.iter().copied()).unwrap()
    }

    fn mixed() -> SignedMeasure {
        SignedMeasure::from_atoms([
            (s(&[0]), int(1)),
            (s(&[1]), int(1)),
            (Subset::EMPTY, int(-1)),
        ])
    }

    #[test]
    fn total_variation() {
        assert_eq!(tv_norm(&SignedMeasure::dirac(s(&[0]))), int(1));
        assert_eq!(tv_norm(&mixed()), int(3));
        assert_eq!(tv_norm(&SignedMeasure::zero()), int(0));
    }

    #[test]
    fn zero_masses_are_dropped() {
        let mut mu = SignedMeasure::dirac(s(&[2]));
        mu.add_atom(s(&[2]), int(-1));
        assert!(mu.is_empty());
        mu.add_atom(s(&[3]), int(0));
        assert!(mu.is_empty());
    }

    #[test]
    fn pushforward_by_intersection() {
        let keep0 = |c: Subset| c.intersection(s(&[0]));
        assert_eq!(
            pushforward(&SignedMeasure::dirac(s(&[0, 1])), keep0),
            SignedMeasure::dirac(s(&[0]))
        );
        // δ{1} lands on ∅ and cancels -δ∅
        assert_eq!(pushforward(&mixed(), keep0), SignedMeasure::dirac(s(&[0])));
        assert_eq!(pushforward(&mixed(), |c| c), mixed());
    }

    #[test]
    fn cylinder_masses() {
        let mu = mixed();
        assert_eq!(mu.cylinder_mass(Subset::EMPTY), int(1));
        assert_eq!(mu.cylinder_mass(s(&[0])), int(1));
        assert_eq!(mu.cylinder_mass(s(&[0, 1])), int(0));
    }
}
