//! The chain operator on an ordered finite ground with auxiliary β-orders.
//!
//! For `A = {α_1 < … < α_k}` with `k > m`,
//! `φ(χ_A) = Σ_{i=m}^{k} δ_{{α_i} ∪ Γ_i(A)} − Σ_{i=m+1}^{k} δ_{Γ_i(A)}`,
//! where `Γ_i(A)` holds the first `m−1` elements of `{α_1, …, α_{i−1}}` in the
//! order attached to `α_i`. Every positive atom has maximum `α_i`, and the
//! negative atoms have `m−1` elements, so `‖φ(χ_A)‖ = 2k − 2m + 1` exactly.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::kernel::ExtensionKernel;
use crate::measure::SignedMeasure;
use crate::rational::{int, Rational};
use crate::report::CheckReport;
use crate::subset::{GroundSet, SigmaSpace, Subset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OrderMode {
    Random,
    Reverse,
    Natural,
}

impl OrderMode {
    pub fn name(self) -> &'static str {
        match self {
            OrderMode::Random => "random",
            OrderMode::Reverse => "reverse",
            OrderMode::Natural => "natural",
        }
    }
}

/// For each `β` of the ground, a total order on `{0..β-1}` listed first to last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaOrderFamily {
    orders: Vec<Vec<usize>>,
    /// `rank[β][x]` = position of `x` in `orders[β]`.
    rank: Vec<Vec<usize>>,
    mode: Option<OrderMode>,
    seed: u64,
}

impl BetaOrderFamily {
    /// Validates that each `orders[β]` is a permutation of `{0..β-1}`.
    pub fn from_orders(
        orders: Vec<Vec<usize>>,
        mode: Option<OrderMode>,
        seed: u64,
    ) -> Result<Self> {
        GroundSet::new(orders.len())?;
        let mut rank = Vec::with_capacity(orders.len());
        for (beta, order) in orders.iter().enumerate() {
            let mut r = vec![usize::MAX; beta];
            if order.len() != beta {
                return Err(Error::Schema(format!(
                    "order {beta} has {} entries",
                    order.len()
                )));
            }
            for (pos, &x) in order.iter().enumerate() {
                if x >= beta || r[x] != usize::MAX {
                    return Err(Error::Schema(format!(
                        "order {beta} is not a permutation of 0..{beta}"
                    )));
                }
                r[x] = pos;
            }
            rank.push(r);
        }
        Ok(BetaOrderFamily {
            orders,
            rank,
            mode,
            seed,
        })
    }

    pub fn ground_size(&self) -> usize {
        self.orders.len()
    }

    pub fn orders(&self) -> &[Vec<usize>] {
        &self.orders
    }

    pub fn mode(&self) -> Option<OrderMode> {
        self.mode
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Position of `x` in the order attached to `beta`; requires `x < beta`.
    pub fn position(&self, beta: usize, x: usize) -> usize {
        self.rank[beta][x]
    }

    /// The family seen on `Y`, relabelled to `{0..|Y|-1}`.
    pub fn induced(&self, y: Subset) -> Result<BetaOrderFamily> {
        GroundSet::new(self.ground_size())?.check(y)?;
        let members = y.to_vec();
        let orders = members
            .iter()
            .enumerate()
            .map(|(j, &beta)| {
                self.orders[beta]
                    .iter()
                    .filter(|x| y.contains(**x))
                    .map(|x| members[..j].binary_search(x).expect("predecessor inside Y"))
                    .collect()
            })
            .collect();
        BetaOrderFamily::from_orders(orders, self.mode, self.seed)
    }
}

/// Builds a deterministic order family on `{0..N-1}`.
pub fn make_beta_orders(ground_size: usize, mode: OrderMode, seed: u64) -> Result<BetaOrderFamily> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let orders = (0..ground_size)
        .map(|beta| match mode {
            OrderMode::Natural => (0..beta).collect(),
            OrderMode::Reverse => (0..beta).rev().collect(),
            OrderMode::Random => {
                let mut v: Vec<usize> = (0..beta).collect();
                v.shuffle(&mut rng);
                v
            }
        })
        .collect();
    BetaOrderFamily::from_orders(orders, Some(mode), seed)
}

/// `Γ_i(A)` for the 1-based index `i` with `m ≤ i ≤ |A|`.
pub fn gamma_set(a: Subset, i: usize, family: &BetaOrderFamily, m: usize) -> Result<Subset> {
    let members = a.to_vec();
    if m == 0 || i < m || i > members.len() {
        return domain(format!(
            "Γ_{i} needs 1 ≤ m ≤ i ≤ |A|; got m={m}, |A|={}",
            members.len()
        ));
    }
    let beta = members[i - 1];
    if beta >= family.ground_size() {
        return Err(Error::NotASubset(a.to_string()));
    }
    let mut preds = members[..i - 1].to_vec();
    preds.sort_by_key(|x| family.position(beta, *x));
    Subset::from_members(preds.into_iter().take(m - 1))
}

/// `φ(χ_A)` of the chain operator.
pub fn chain_measure(a: Subset, family: &BetaOrderFamily, m: usize) -> Result<SignedMeasure> {
    let k = a.len();
    if k <= m {
        return Ok(SignedMeasure::dirac(a));
    }
    let members = a.to_vec();
    let mut mu = SignedMeasure::zero();
    for i in m..=k {
        let gamma = gamma_set(a, i, family, m)?;
        mu.add_atom(gamma.with(members[i - 1]), int(1));
        if i > m {
            mu.add_atom(gamma, int(-1));
        }
    }
    Ok(mu)
}

pub fn chain_kernel(
    ground_size: usize,
    family: &BetaOrderFamily,
    m: usize,
    n: usize,
) -> Result<ExtensionKernel> {
    if m == 0 || m >= n {
        return domain(format!("chain operator needs 1 ≤ m < n, got m={m}, n={n}"));
    }
    if family.ground_size() != ground_size {
        return domain(format!(
            "order family covers {} elements, ground has {ground_size}",
            family.ground_size()
        ));
    }
    let points = SigmaSpace::new(GroundSet::new(ground_size)?, n).points();
    let entries = points
        .into_iter()
        .map(|a| chain_measure(a, family, m).map(|mu| (a, mu)))
        .collect::<Result<Vec<_>>>()?;
    ExtensionKernel::from_entries(ground_size, m, n, entries)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainNormReport {
    #[serde(serialize_with = "crate::io::ser_display")]
    pub norm: Rational,
    pub bound: usize,
    pub witness: Option<Vec<usize>>,
}

/// Norm of a chain kernel against `2n − 2m + 1`, with the first attaining point.
pub fn chain_norm_report(k: &ExtensionKernel) -> ChainNormReport {
    let bound = 2 * k.n() + 1 - 2 * k.m();
    let norm = k.operator_norm();
    let target = int(bound as i64);
    let witness = k
        .entries()
        .find(|(_, mu)| mu.tv_norm() == target)
        .map(|(a, _)| a.to_vec());
    ChainNormReport {
        norm,
        bound,
        witness,
    }
}

/// Escaping elements of `C` come after every earlier element of `B` in each order of `B`.
pub fn is_late(family: &BetaOrderFamily, b: Subset, c: Subset) -> bool {
    b.iter().all(|beta| {
        let persistent: Vec<usize> = b.iter().take_while(|x| *x < beta).collect();
        c.iter().filter(|x| *x < beta).all(|x| {
            persistent
                .iter()
                .all(|y| family.position(beta, *y) < family.position(beta, x))
        })
    })
}

/// Whether `(D ↦ D∩B)_* φ(χ_{B∪C}) = φ(χ_B)` for a late scenario.
pub fn late_continuity_check(
    family: &BetaOrderFamily,
    m: usize,
    n: usize,
    b: Subset,
    c: Subset,
) -> Result<bool> {
    let ground = GroundSet::new(family.ground_size())?;
    ground.check(b.union(c))?;
    if !b.is_disjoint(c) {
        return domain(format!("{b} and {c} are not disjoint"));
    }
    if b.union(c).len() > n {
        return domain(format!("|B ∪ C| exceeds n={n}"));
    }
    if !is_late(family, b, c) {
        return Err(Error::NotLate(format!("B={b}, C={c}")));
    }
    let whole = chain_measure(b.union(c), family, m)?;
    Ok(whole.pushforward(|d| d.intersection(b)) == chain_measure(b, family, m)?)
}

/// Exhaustive chain checks on one ground and order family.
pub fn chain_checks(family: &BetaOrderFamily, m: usize, n: usize) -> Result<Vec<CheckReport>> {
    let ground_size = family.ground_size();
    let k = chain_kernel(ground_size, family, m, n)?;

    let mut ext = CheckReport::new("extension");
    ext.record(k.is_extension_kernel(), || "kernel does not extend".into());

    let mut norm = CheckReport::new("norm_bound");
    let report = chain_norm_report(&k);
    norm.record(report.norm <= int(report.bound as i64), || {
        format!("norm {}", report.norm)
    });
    if ground_size >= n {
        norm.record(report.witness.is_some(), || "bound not attained".into());
    }

    let mut late = CheckReport::new("late_continuity");
    for bc in k.domain().points() {
        for b in bc.all_subsets() {
            let c = bc.difference(b);
            if !is_late(family, b, c) {
                continue;
            }
            let ok = late_continuity_check(family, m, n, b, c)?;
            late.record(ok, || format!("B={b} C={c}"));
        }
    }

    let mut restriction = CheckReport::new("restriction_is_induced_chain");
    for y in GroundSet::new(ground_size)?.full().all_subsets() {
        let induced = family.induced(y)?;
        let ok = k.restrict(y)? == chain_kernel(y.len(), &induced, m, n)?;
        restriction.record(ok, || format!("Y={y}"));
    }

    let mut reports = vec![ext, norm, late, restriction];
    if m == 1 {
        let mut same = CheckReport::new("coincides_with_canonical");
        same.record(
            k == crate::canonical::canonical_kernel(ground_size, m, n)?,
            || "chain and canonical kernels differ".into(),
        );
        reports.push(same);
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(xs: &[usize]) -> Subset {
        Subset::from_members(xs.iter().copied()).unwrap()
    }

    #[test]
    fn order_modes() {
        let rev = make_beta_orders(3, OrderMode::Reverse, 0).unwrap();
        assert_eq!(rev.orders()[2], vec![1, 0]);
        let nat = make_beta_orders(6, OrderMode::Natural, 0).unwrap();
        for (beta, o) in nat.orders().iter().enumerate() {
            assert_eq!(*o, (0..beta).collect::<Vec<_>>());
        }
        let r1 = make_beta_orders(5, OrderMode::Random, 7).unwrap();
        let r2 = make_beta_orders(5, OrderMode::Random, 7).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn bad_orders_are_rejected() {
        assert!(BetaOrderFamily::from_orders(vec![vec![], vec![0], vec![0, 0]], None, 0).is_err());
        assert!(BetaOrderFamily::from_orders(vec![vec![], vec![1]], None, 0).is_err());
    }

    #[test]
    fn gamma_examples() {
        let rev = make_beta_orders(10, OrderMode::Reverse, 0).unwrap();
        let nat = make_beta_orders(10, OrderMode::Natural, 0).unwrap();
        let a = s(&[2, 5, 9]);
        assert_eq!(gamma_set(a, 3, &rev, 2).unwrap(), s(&[5]));
        assert_eq!(gamma_set(a, 3, &nat, 2).unwrap(), s(&[2]));
        assert_eq!(gamma_set(a, 2, &rev, 1).unwrap(), Subset::EMPTY);
        assert!(gamma_set(a, 1, &rev, 2).is_err());
        assert!(gamma_set(a, 4, &rev, 2).is_err());
    }

    #[test]
    fn chain_measures() {
        let rev = make_beta_orders(3, OrderMode::Reverse, 0).unwrap();
        let mu = chain_measure(s(&[0, 1, 2]), &rev, 2).unwrap();
        let expected = SignedMeasure::from_atoms([
            (s(&[0, 1]), int(1)),
            (s(&[1, 2]), int(1)),
            (s(&[1]), int(-1)),
        ]);
        assert_eq!(mu, expected);
        assert_eq!(mu.tv_norm(), int(3));

        let mu = chain_measure(s(&[0, 2]), &rev, 1).unwrap();
        assert_eq!(mu.tv_norm(), int(3));
        assert_eq!(
            chain_measure(s(&[1, 2]), &rev, 2).unwrap(),
            SignedMeasure::dirac(s(&[1, 2]))
        );
    }

    #[test]
    fn norm_report_and_small_ground() {
        let fam = make_beta_orders(6, OrderMode::Reverse, 0).unwrap();
        let k = chain_kernel(6, &fam, 2, 3).unwrap();
        let r = chain_norm_report(&k);
        assert_eq!(r.norm, int(3));
        assert_eq!(r.bound, 3);
        assert_eq!(r.witness.as_ref().map(|w| w.len()), Some(3));

        // ground smaller than n: no point reaches the bound
        let fam = make_beta_orders(3, OrderMode::Random, 1).unwrap();
        let k = chain_kernel(3, &fam, 1, 4).unwrap();
        let r = chain_norm_report(&k);
        assert_eq!(r.norm, int(5));
        assert_eq!(r.bound, 7);
        assert!(r.witness.is_none());
    }

    #[test]
    fn late_scenarios() {
        let rev = make_beta_orders(10, OrderMode::Reverse, 0).unwrap();
        assert!(late_continuity_check(&rev, 2, 3, s(&[5, 9]), s(&[2])).unwrap());
        assert!(late_continuity_check(&rev, 2, 3, s(&[5, 9]), Subset::EMPTY).unwrap());
        // 7 precedes 5 in the reverse order of 9
        assert!(matches!(
            late_continuity_check(&rev, 2, 3, s(&[5, 9]), s(&[7])),
            Err(Error::NotLate(_))
        ));
        let rnd = make_beta_orders(8, OrderMode::Random, 3).unwrap();
        for bc in SigmaSpace::new(GroundSet::new(8).unwrap(), 4).points() {
            for b in bc.all_subsets() {
                // m = 1 needs no lateness for the identity to hold
                let whole = chain_measure(bc, &rnd, 1).unwrap();
                assert_eq!(
                    whole.pushforward(|d| d.intersection(b)),
                    chain_measure(b, &rnd, 1).unwrap()
                );
            }
        }
    }

    #[test]
    fn checks_pass() {
        for mode in [OrderMode::Reverse, OrderMode::Natural, OrderMode::Random] {
            let fam = make_beta_orders(6, mode, 11).unwrap();
            for (m, n) in [(1, 2), (2, 3), (2, 4)] {
                for r in chain_checks(&fam, m, n).unwrap() {
                    assert!(
                        r.passed(),
                        "{mode:?} m={m} n={n} {}: {:?}",
                        r.name,
                        r.failures
                    );
                }
            }
        }
    }
}
