//! Free sets for set-valued maps, and the lower-bound certificate built on them.
//!
//! Two searches are provided. [`greedy_free_set`] looks for `Y` with
//! `S(A) ∩ Y = ∅` for every `A ⊆ Y`, `|A| ≤ m`. [`block_free_chain`] builds
//! `Z = {z_1 < … < z_n}` with `z_j ∉ S({z_i : i ∈ I})` whenever `j < min I` or
//! `j > max I`, using finite blocks in place of countable ones. On a finite
//! ground neither is guaranteed to exist, so both return `None` on failure.

use std::collections::{BTreeMap, HashSet};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::kernel::ExtensionKernel;
use crate::measure::SignedMeasure;
use crate::rational::{int, Rational};
use crate::subset::{GroundSet, SigmaSpace, Subset};

/// A finite table `A ↦ S(A)`; inputs that are not listed map to `∅`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SetValuedMap {
    entries: BTreeMap<Subset, Subset>,
}

impl SetValuedMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, input: Subset, output: Subset) {
        if output.is_empty() {
            self.entries.remove(&input);
        } else {
            self.entries.insert(input, output);
        }
    }

    pub fn image(&self, input: Subset) -> Subset {
        self.entries.get(&input).copied().unwrap_or(Subset::EMPTY)
    }

    /// Listed entries with a nonempty image.
    pub fn entries(&self) -> impl Iterator<Item = (Subset, Subset)> + '_ {
        self.entries.iter().map(|(a, b)| (*a, *b))
    }

    /// `⋃ { S(A) : A ⊆ frame }`.
    pub fn images_inside(&self, frame: Subset) -> Subset {
        self.entries
            .iter()
            .filter(|(a, _)| a.is_subset_of(frame))
            .fold(Subset::EMPTY, |acc, (_, b)| acc.union(*b))
    }
}

impl FromIterator<(Subset, Subset)> for SetValuedMap {
    fn from_iter<T: IntoIterator<Item = (Subset, Subset)>>(iter: T) -> Self {
        let mut map = SetValuedMap::new();
        for (a, b) in iter {
            let merged = map.image(a).union(b);
            map.insert(a, merged);
        }
        map
    }
}

/// Backtracking search for a `p`-element `Y ⊆ {0..N-1}` with `S(A) ∩ Y = ∅`
/// for all `A ∈ [Y]^{≤m}`. Returns the lexicographically first such `Y`.
pub fn greedy_free_set(
    s: &SetValuedMap,
    ground_size: usize,
    m: usize,
    p: usize,
) -> Result<Option<Subset>> {
    let ground = GroundSet::new(ground_size)?;
    for (a, b) in s.entries() {
        if a.len() <= m && ground.contains(a) && !a.is_disjoint(b) {
            return Err(Error::InvalidMap(format!(
                "S({a}) = {b} meets its argument"
            )));
        }
    }
    let mut chosen = Vec::with_capacity(p);
    Ok(extend_free(
        s,
        ground_size,
        m,
        p,
        0,
        Subset::EMPTY,
        &mut chosen,
    ))
}

fn extend_free(
    s: &SetValuedMap,
    ground_size: usize,
    m: usize,
    p: usize,
    from: usize,
    current: Subset,
    chosen: &mut Vec<usize>,
) -> Option<Subset> {
    if chosen.len() == p {
        return Some(current);
    }
    let needed = p - chosen.len();
    for y in from..ground_size {
        if ground_size - y < needed {
            break;
        }
        let next = current.with(y);
        let old_ok = current
            .subsets_up_to(m)
            .into_iter()
            .all(|a| !s.image(a).contains(y));
        let new_ok = old_ok
            && current
                .subsets_up_to(m.saturating_sub(1))
                .into_iter()
                .filter(|_| m >= 1)
                .all(|a| s.image(a.with(y)).is_disjoint(next));
        if !new_ok {
            continue;
        }
        chosen.push(y);
        if let Some(found) = extend_free(s, ground_size, m, p, y + 1, next, chosen) {
            return Some(found);
        }
        chosen.pop();
    }
    None
}

/// Checks the free-set conclusion exhaustively over `[Y]^{≤m}`.
pub fn is_free_set(s: &SetValuedMap, y: Subset, m: usize) -> bool {
    y.subsets_up_to(m)
        .into_iter()
        .all(|a| s.image(a).is_disjoint(y))
}

/// `z_1 < … < z_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainWitness {
    pub z: Vec<usize>,
}

impl ChainWitness {
    pub fn as_subset(&self) -> Subset {
        Subset::from_members(self.z.iter().copied()).expect("witness inside ground")
    }
}

/// Two-phase block construction.
///
/// Forward: blocks `Y_1 < … < Y_n` of `block` elements each, with `Y_j`
/// avoiding `S(A)` for every `A` taking at most one element from each of
/// `Y_1, …, Y_{j-1}` (`∅` included). Reverse: `z_n, …, z_1` with `z_j ∈ Y_j`
/// avoiding `S(A)` for every `A ⊆ {z_{j+1}, …, z_n}`, backtracking inside
/// the blocks when a choice runs out.
pub fn block_free_chain(
    s: &SetValuedMap,
    ground_size: usize,
    n: usize,
    block: usize,
) -> Result<Option<ChainWitness>> {
    if block < 1 {
        return domain("block size must be at least 1");
    }
    GroundSet::new(ground_size)?;
    let mut blocks: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut transversals = vec![Subset::EMPTY];
    let mut next = 0;
    for j in 0..n {
        let forbidden = if j == 0 {
            Subset::EMPTY
        } else {
            transversals
                .iter()
                .fold(Subset::EMPTY, |acc, a| acc.union(s.image(*a)))
        };
        let picked: Vec<usize> = (next..ground_size)
            .filter(|x| !forbidden.contains(*x))
            .take(block)
            .collect();
        if picked.len() < block {
            return Ok(None);
        }
        next = picked[block - 1] + 1;
        let extended: Vec<Subset> = transversals
            .iter()
            .flat_map(|a| picked.iter().map(move |x| a.with(*x)))
            .collect();
        transversals.extend(extended);
        blocks.push(picked);
    }

    let mut z = vec![0usize; n];
    Ok(choose_reverse(s, &blocks, n, Subset::EMPTY, &mut z).then_some(ChainWitness { z }))
}

fn choose_reverse(
    s: &SetValuedMap,
    blocks: &[Vec<usize>],
    j: usize,
    tail: Subset,
    z: &mut [usize],
) -> bool {
    if j == 0 {
        return true;
    }
    let forbidden = s.images_inside(tail);
    for &x in &blocks[j - 1] {
        if forbidden.contains(x) {
            continue;
        }
        z[j - 1] = x;
        if choose_reverse(s, blocks, j - 1, tail.with(x), z) {
            return true;
        }
    }
    false
}

/// Depth-first search for the lexicographically first chain `z_1 < … < z_n`
/// satisfying the condition of [`verify_chain_witness`].
pub fn search_free_chain(
    s: &SetValuedMap,
    ground_size: usize,
    n: usize,
) -> Result<Option<ChainWitness>> {
    GroundSet::new(ground_size)?;
    if n >= 64 {
        return domain("chain too long for exhaustive search");
    }
    let mut z = Vec::with_capacity(n);
    Ok(extend_chain(s, ground_size, n, &mut z).then_some(ChainWitness { z }))
}

fn extend_chain(s: &SetValuedMap, ground_size: usize, n: usize, z: &mut Vec<usize>) -> bool {
    let k = z.len();
    if k == n {
        return true;
    }
    let from = z.last().map_or(0, |x| x + 1);
    for x in from..ground_size - (n - k - 1).min(ground_size) {
        z.push(x);
        if new_element_ok(s, z) && extend_chain(s, ground_size, n, z) {
            return true;
        }
        z.pop();
    }
    false
}

/// The chain conditions that involve the last element of `z` and no later one.
fn new_element_ok(s: &SetValuedMap, z: &[usize]) -> bool {
    let k = z.len() - 1;
    let x = z[k];
    for mask in 1u64..(1u64 << (k + 1)) {
        let a = (0..=k)
            .filter(|i| mask >> i & 1 == 1)
            .fold(Subset::EMPTY, |acc, i| acc.with(z[i]));
        let image = s.image(a);
        if image.is_empty() {
            continue;
        }
        if mask >> k & 1 == 0 {
            // j = k lies above max I
            if image.contains(x) {
                return false;
            }
        } else {
            let lo = mask.trailing_zeros() as usize;
            if z[..lo].iter().any(|y| image.contains(*y)) {
                return false;
            }
        }
    }
    true
}

/// Checks `z_j ∉ S({z_i : i ∈ I})` for every nonempty `I` and every `j < min I` or `j > max I`.
pub fn verify_chain_witness(s: &SetValuedMap, z: &[usize]) -> Result<bool> {
    if z.windows(2).any(|w| w[0] >= w[1]) {
        return domain(format!("witness {z:?} is not strictly increasing"));
    }
    let n = z.len();
    if n >= 64 {
        return domain("witness too long for exhaustive verification");
    }
    for mask in 1u64..(1u64 << n) {
        let lo = mask.trailing_zeros() as usize;
        let hi = 63 - mask.leading_zeros() as usize;
        let a = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .fold(Subset::EMPTY, |acc, i| acc.with(z[i]));
        let image = s.image(a);
        if image.is_empty() {
            continue;
        }
        if z[..lo]
            .iter()
            .chain(&z[hi + 1..])
            .any(|x| image.contains(*x))
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A finite `S_A ⊆ X∖A` such that every `B ⊇ A`, `|B| ≤ n`, `B ∩ S_A = ∅`
/// has `|φ(χ_B)(O_{B'}) − 1| < ε′` for all `B' ⊆ A`.
///
/// Elements are added greedily, each time the one lying in the most
/// remaining violating sets (smallest index on ties). `B = A` itself is
/// governed by the extension property and is not scanned.
pub fn extract_s_a(k: &ExtensionKernel, a: Subset, epsilon_prime: &Rational) -> Result<Subset> {
    if a.len() > k.m() {
        return domain(format!("|A| = {} exceeds m = {}", a.len(), k.m()));
    }
    if !epsilon_prime.is_positive() {
        return domain("ε′ must be positive");
    }
    k.ground().check(a)?;
    let bases = a.all_subsets();
    let outside = k.ground().full().difference(a);
    let mut violators: Vec<Subset> = outside
        .subsets_up_to(k.n() - a.len())
        .into_iter()
        .filter(|e| !e.is_empty())
        .map(|e| a.union(e))
        .filter(|b| {
            let mu = k.measure(*b).expect("kernel covers σ_n");
            bases
                .iter()
                .any(|base| (mu.cylinder_mass(*base) - Rational::one()).abs() >= *epsilon_prime)
        })
        .collect();

    let mut s_a = Subset::EMPTY;
    while !violators.is_empty() {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for b in &violators {
            for x in b.difference(a).iter() {
                *counts.entry(x).or_default() += 1;
            }
        }
        let best = counts
            .iter()
            .max_by(|(x1, c1), (x2, c2)| c1.cmp(c2).then(x2.cmp(x1)))
            .map(|(x, _)| *x)
            .expect("violators have elements outside A");
        s_a = s_a.with(best);
        violators.retain(|b| !b.contains(best));
    }
    Ok(s_a)
}

/// One of the disjoint regions of `σ_m(2^X)` whose masses certify the bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Region {
    /// `{χ_A}`, expected mass `≈ 1`.
    Atom(Subset),
    /// `O_base ∖ {χ_C : C ∈ minus}`, expected mass `≈ −(|minus| − 1)`.
    CylinderMinus { base: Subset, minus: Vec<Subset> },
}

impl Region {
    pub fn mass(&self, mu: &SignedMeasure) -> Rational {
        match self {
            Region::Atom(a) => mu.coefficient(*a),
            Region::CylinderMinus { base, minus } => {
                mu.mass_where(|c| base.is_subset_of(c) && !minus.contains(&c))
            }
        }
    }

    /// The points of `σ_m(2^X)` in the region.
    pub fn points(&self, ground: GroundSet, m: usize) -> Vec<Subset> {
        match self {
            Region::Atom(a) => vec![*a],
            Region::CylinderMinus { base, minus } => ground
                .full()
                .difference(*base)
                .subsets_up_to(m.saturating_sub(base.len()))
                .into_iter()
                .map(|e| base.union(e))
                .filter(|c| !minus.contains(c))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionMass {
    pub region: Region,
    pub mass: Rational,
    pub target: Rational,
    pub tolerance: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerBoundCertificate {
    pub witness: ChainWitness,
    pub measure: SignedMeasure,
    pub epsilon: Rational,
    pub epsilon_prime: Rational,
    pub block_size: usize,
    pub regions: Vec<RegionMass>,
    pub certified_bound: Rational,
    pub tv_norm: Rational,
}

/// Two elements per block when the ground has room for them, else one.
pub fn default_block_size(ground_size: usize, n: usize) -> usize {
    if ground_size >= 2 * n {
        2
    } else {
        1
    }
}

/// Searches for a point `χ_Z` whose measure certifies `‖T‖ ≥ (2n−2m+1)(1−3ε′)`,
/// with `ε′ = ε / (3(2n−2m+1))`.
pub fn lower_bound_certificate(
    k: &ExtensionKernel,
    epsilon: &Rational,
    block: Option<usize>,
) -> Result<Option<LowerBoundCertificate>> {
    let (m, n) = (k.m(), k.n());
    if m == 0 || m >= n {
        return domain(format!("certificate needs 1 ≤ m < n, got m={m}, n={n}"));
    }
    if !epsilon.is_positive() {
        return domain("ε must be positive");
    }
    let units = 2 * n + 1 - 2 * m;
    let epsilon_prime = epsilon / int(3 * units as i64);

    let mut s = SetValuedMap::new();
    for a in SigmaSpace::new(k.ground(), m).points() {
        s.insert(a, extract_s_a(k, a, &epsilon_prime)?);
    }
    let block_size = block.unwrap_or_else(|| default_block_size(k.ground_size(), n));
    let witness = match block_free_chain(&s, k.ground_size(), n, block_size)? {
        Some(w) => Some(w),
        None if block.is_none() => search_free_chain(&s, k.ground_size(), n)?,
        None => None,
    };
    let Some(witness) = witness else {
        return Ok(None);
    };
    if !verify_chain_witness(&s, &witness.z)? {
        return Err(Error::CertificateInvalid(
            "block construction produced a bad witness".into(),
        ));
    }

    let z = &witness.z;
    let window = |from: usize, len: usize| {
        Subset::from_members(z[from..from + len].iter().copied()).expect("inside ground")
    };
    let one = Rational::one();
    let three_eps = &epsilon_prime * int(3);
    let mut regions: Vec<(Region, Rational, Rational)> = Vec::new();
    if m == 1 {
        // one negative region: O_∅ minus the singletons
        let singles: Vec<Subset> = z.iter().map(|x| Subset::singleton(*x)).collect();
        for a in &singles {
            regions.push((Region::Atom(*a), one.clone(), epsilon_prime.clone()));
        }
        regions.push((
            Region::CylinderMinus {
                base: Subset::EMPTY,
                minus: singles,
            },
            int(1 - n as i64),
            &epsilon_prime * int(n as i64 + 1),
        ));
    } else {
        for i in 0..=n - m {
            regions.push((
                Region::Atom(window(i, m)),
                one.clone(),
                epsilon_prime.clone(),
            ));
        }
        for i in 1..=n - m {
            regions.push((
                Region::CylinderMinus {
                    base: window(i, m - 1),
                    minus: vec![window(i - 1, m), window(i, m)],
                },
                -one.clone(),
                three_eps.clone(),
            ));
        }
    }

    let mu = k
        .measure(witness.as_subset())
        .expect("kernel covers σ_n")
        .clone();
    let mut seen = HashSet::new();
    let mut covered = Rational::zero();
    let mut masses = Vec::with_capacity(regions.len());
    for (region, target, tolerance) in regions {
        for p in region.points(k.ground(), m) {
            if !seen.insert(p) {
                return Err(Error::CertificateInvalid(format!("regions overlap at {p}")));
            }
        }
        let mass = region.mass(&mu);
        if (&mass - &target).abs() >= tolerance {
            return Err(Error::CertificateInvalid(format!(
                "region {region:?} has mass {mass}, expected {target} ± {tolerance}"
            )));
        }
        covered += mass.abs();
        masses.push(RegionMass {
            region,
            mass,
            target,
            tolerance,
        });
    }

    let certified_bound = int(units as i64) * (&one - &three_eps);
    let tv_norm = mu.tv_norm();
    if covered < certified_bound || certified_bound > tv_norm {
        return Err(Error::CertificateInvalid(format!(
            "region masses {covered} do not reach the bound {certified_bound}"
        )));
    }
    Ok(Some(LowerBoundCertificate {
        witness,
        measure: mu,
        epsilon: epsilon.clone(),
        epsilon_prime,
        block_size,
        regions: masses,
        certified_bound,
        tv_norm,
    }))
}
