#![allow(dead_code)]

use extop::freeset::SetValuedMap;
use extop::rational::{int, ratio, Rational};
use extop::{ExtensionKernel, GroundSet, SigmaSpace, SignedMeasure, Subset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn s(xs: &[usize]) -> Subset {
    Subset::from_members(xs.iter().copied()).unwrap()
}

/// Pascal's triangle in i128, independent of the library's table.
pub fn pascal(a: i64, b: i64) -> i128 {
    if a < 0 || b < 0 || b > a {
        return 0;
    }
    let mut row = vec![1i128];
    for _ in 0..a {
        let mut next = vec![1i128; row.len() + 1];
        for j in 1..row.len() {
            next[j] = row[j - 1] + row[j];
        }
        row = next;
    }
    row[b as usize]
}

/// Every subset of `{0..n-1}` with at most `cap` elements, by brute force over masks.
pub fn small_subsets(n: usize, cap: usize) -> Vec<Subset> {
    (0u128..1 << n)
        .filter(|mask| mask.count_ones() as usize <= cap)
        .map(Subset::from_mask)
        .collect()
}

/// A random kernel with Dirac entries on `σ_m` and random measures elsewhere.
pub fn random_kernel(
    rng: &mut ChaCha8Rng,
    ground_size: usize,
    m: usize,
    n: usize,
) -> ExtensionKernel {
    let domain = small_subsets(ground_size, m);
    let entries = SigmaSpace::new(GroundSet::new(ground_size).unwrap(), n)
        .points()
        .into_iter()
        .map(|a| {
            if a.len() <= m {
                return (a, SignedMeasure::dirac(a));
            }
            let atoms = (0..rng.gen_range(1..=4)).map(|_| {
                let c = domain[rng.gen_range(0..domain.len())];
                (c, ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4)))
            });
            (a, SignedMeasure::from_atoms(atoms))
        });
    ExtensionKernel::from_entries(ground_size, m, n, entries).unwrap()
}

/// A random map on subsets of size at most `cap` with `|S(A)| ≤ 3` and `S(A) ∩ A = ∅`.
pub fn random_map(rng: &mut ChaCha8Rng, ground_size: usize, cap: usize) -> SetValuedMap {
    SigmaSpace::new(GroundSet::new(ground_size).unwrap(), cap)
        .points()
        .into_iter()
        .map(|a| {
            let count = rng.gen_range(0..=3);
            let image =
                Subset::from_members((0..count).map(|_| rng.gen_range(0..ground_size))).unwrap();
            (a, image.difference(a))
        })
        .collect()
}

/// A random rational point of the positive unit ball on `{0..dim-1}`.
pub fn random_ball_coords(rng: &mut ChaCha8Rng, dim: usize, m: usize) -> Vec<(usize, Rational)> {
    let den = rng.gen_range(1..=60i64);
    let mut budget = den;
    let mut coords = Vec::new();
    for i in 0..dim {
        if budget == 0 {
            break;
        }
        // about half the coordinates sit near 1/m
        let w = if rng.gen_bool(0.5) {
            (den / m as i64 + rng.gen_range(-2..=2)).clamp(0, budget)
        } else {
            rng.gen_range(0..=budget)
        };
        budget -= w;
        if w > 0 {
            coords.push((i, ratio(w, den)));
        }
    }
    coords
}

pub fn zero() -> Rational {
    int(0)
}
