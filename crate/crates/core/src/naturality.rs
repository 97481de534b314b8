//! Naturality of extension operators under injections, as a finite linear system.
//!
//! A family `T̃_X` that commutes with every `e_u` in particular commutes with
//! permutations of `X`, so its kernel only depends on the orbit of a pair
//! `(A, B)`: the unknowns are `c(a, i, j)` with `a = |A|`, `i = |A∩B|`,
//! `j = |B∖A|`, `i + j ≤ m`. The unknowns are shared by all ground sizes.
//!
//! Equations, for every ground size `p ≤ pmax`:
//! * extension: `c(a, i, j) = [i = a, j = 0]` for `a ≤ m`;
//! * commutation `T̃_X ∘ e_u = e_u ∘ T̃_Y` on indicator functions, for each
//!   `q < p`, along the inclusion `{0..q-1} ↪ {0..p-1}` and along the same
//!   inclusion followed by a transposition that moves its image.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::canonical::canonical_coefficient;
use crate::error::{domain, Error, Result};
use crate::kernel::Injection;
use crate::linalg::{solve, Equation};
use crate::rational::Rational;
use crate::subset::{GroundSet, SigmaSpace, Subset};

/// Orbit label `(a, i, j)` of a point/atom pair.
pub type Orbit = (usize, usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NaturalitySystem {
    pub m: usize,
    pub n: usize,
    pub pmax: usize,
    pub unknowns: usize,
    pub equations: usize,
    pub rank: usize,
    pub dim: usize,
    pub contains_canonical: bool,
}

struct Unknowns {
    index: BTreeMap<Orbit, usize>,
}

impl Unknowns {
    fn new(m: usize, n: usize) -> Self {
        let mut index = BTreeMap::new();
        for a in 0..=n {
            for i in 0..=a.min(m) {
                for j in 0..=m - i {
                    let next = index.len();
                    index.insert((a, i, j), next);
                }
            }
        }
        Unknowns { index }
    }

    fn column(&self, point: Subset, atom: Subset) -> usize {
        let orbit = (
            point.len(),
            point.intersection(atom).len(),
            atom.difference(point).len(),
        );
        self.index[&orbit]
    }
}

/// The canonical operator written in orbit coordinates.
pub fn canonical_assignment(m: usize, (a, i, j): Orbit) -> Rational {
    if j > 0 {
        Rational::zero()
    } else if a <= m {
        if i == a {
            Rational::one()
        } else {
            Rational::zero()
        }
    } else {
        Rational::from_integer(canonical_coefficient(a, i, m))
    }
}

fn injections(q: usize, p: usize) -> Result<Vec<Injection>> {
    let inclusion = Injection::new((0..q).collect(), p)?;
    let mut out = vec![inclusion.clone()];
    if q >= 1 && q < p {
        // swap the last image point with the first point outside the image
        let swap: Vec<usize> = (0..p)
            .map(|x| match x {
                x if x == q - 1 => q,
                x if x == q => q - 1,
                x => x,
            })
            .collect();
        out.push(Injection::new(swap, p)?.compose(&inclusion)?);
    }
    Ok(out)
}

fn naturality_equations(
    unknowns: &Unknowns,
    m: usize,
    n: usize,
    u: &Injection,
    out: &mut BTreeSet<Equation>,
) -> Result<()> {
    let p = u.target_size();
    let q = u.source_size();
    let x_points = SigmaSpace::new(GroundSet::new(p)?, n).points();
    let x_atoms = SigmaSpace::new(GroundSet::new(p)?, m).points();
    let y_atoms = SigmaSpace::new(GroundSet::new(q)?, m).points();
    for &a in &x_points {
        let a_pre = u.preimage(a);
        for &b_pre in &y_atoms {
            // (T̃_X e_u 1_{B'})(χ_A) = Σ_{B : u⁻¹(B) = B'} φ_X(χ_A){χ_B}
            let mut terms: Vec<(usize, Rational)> = x_atoms
                .iter()
                .filter(|b| u.preimage(**b) == b_pre)
                .map(|b| (unknowns.column(a, *b), Rational::one()))
                .collect();
            // (e_u T̃_Y 1_{B'})(χ_A) = φ_Y(χ_{u⁻¹(A)}){χ_{B'}}
            terms.push((unknowns.column(a_pre, b_pre), -Rational::one()));
            let eq = Equation::normalized(terms, Rational::zero());
            if !eq.is_trivial() {
                out.insert(eq);
            }
        }
    }
    Ok(())
}

/// Builds and solves the naturality system for grounds of size `≤ pmax`.
pub fn natural_solution_space(m: usize, n: usize, pmax: usize) -> Result<NaturalitySystem> {
    if m >= n || n > pmax {
        return domain(format!(
            "naturality system needs m < n ≤ pmax, got m={m}, n={n}, pmax={pmax}"
        ));
    }
    let unknowns = Unknowns::new(m, n);
    let mut equations = BTreeSet::new();

    for p in 0..=pmax {
        for a in 0..=m.min(p) {
            for i in 0..=a {
                for j in 0..=(p - a).min(m - i) {
                    let rhs = if i == a && j == 0 {
                        Rational::one()
                    } else {
                        Rational::zero()
                    };
                    equations.insert(Equation::normalized(
                        vec![(unknowns.index[&(a, i, j)], Rational::one())],
                        rhs,
                    ));
                }
            }
        }
        for q in 0..p {
            for u in injections(q, p)? {
                naturality_equations(&unknowns, m, n, &u, &mut equations)?;
            }
        }
    }

    let equations: Vec<Equation> = equations.into_iter().collect();
    let canonical: Vec<Rational> = unknowns
        .index
        .keys()
        .map(|orbit| canonical_assignment(m, *orbit))
        .collect();
    let contains_canonical = equations.iter().all(|eq| eq.residual(&canonical).is_zero());

    let count = unknowns.index.len();
    let solution = solve(count, &equations);
    if !solution.consistent {
        return Err(Error::InconsistentSystem);
    }
    Ok(NaturalitySystem {
        m,
        n,
        pmax,
        unknowns: count,
        equations: equations.len(),
        rank: solution.rank,
        dim: solution.nullity(count),
        contains_canonical,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_solves_small_systems() {
        for (m, n, pmax) in [(1, 2, 2), (1, 2, 4), (0, 1, 3), (1, 3, 4), (2, 3, 4)] {
            let sys = natural_solution_space(m, n, pmax).unwrap();
            assert!(sys.contains_canonical, "{sys:?}");
            assert!(sys.dim <= sys.unknowns);
        }
    }

    #[test]
    fn dimension_does_not_grow_with_pmax() {
        let dims: Vec<usize> = (2..=5)
            .map(|p| natural_solution_space(1, 2, p).unwrap().dim)
            .collect();
        assert!(dims.windows(2).all(|w| w[1] <= w[0]), "{dims:?}");
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(natural_solution_space(2, 2, 3).is_err());
        assert!(natural_solution_space(1, 3, 2).is_err());
    }

    #[test]
    fn transposed_injection_moves_the_image() {
        let us = injections(2, 4).unwrap();
        assert_eq!(us.len(), 2);
        assert_eq!(us[0].image(Subset::prefix(2)), Subset::prefix(2));
        assert_eq!(us[1].image(Subset::prefix(2)).to_vec(), vec![0, 2]);
    }
}
