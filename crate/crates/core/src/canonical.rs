//! The canonical extension operator `T_X: C(σ_m(2^X)) → C(σ_n(2^X))`.
//!
//! For `|A| > m` its kernel is
//! `φ(χ_A) = Σ_{B ⊆ A, |B| ≤ m} (-1)^{m-|B|} C(|A|-|B|-1, m-|B|) δ_{χ_B}`,
//! and `δ_{χ_A}` otherwise. Continuity of `T_X f` is checked here through the
//! exact intersect-pushforward identity `(C ↦ C∩B)_* φ(χ_A) = φ(χ_B)` for
//! `B ⊆ A`, and through the limit coefficients expressed with Ψ and Φ.

use num_bigint::BigInt;
use num_traits::One;

use crate::combinat::{binom, phi, psi};
use crate::error::{domain, Error, Result};
use crate::kernel::ExtensionKernel;
use crate::measure::SignedMeasure;
use crate::rational::Rational;
use crate::report::CheckReport;
use crate::subset::Subset;

pub use crate::naturality::{natural_solution_space, NaturalitySystem};

/// `(-1)^{m-b} C(a-b-1, m-b)`: the mass that `φ(χ_A)` puts on `χ_B`, `|A| = a > m ≥ b = |B|`.
pub fn canonical_coefficient(a: usize, b: usize, m: usize) -> BigInt {
    debug_assert!(a > m && b <= m);
    let mag = binom(a as i64 - b as i64 - 1, (m - b) as i64);
    if (m - b).is_multiple_of(2) {
        mag
    } else {
        -mag
    }
}

/// The measure `φ_{T_X}(χ_A)` of the canonical operator.
pub fn canonical_measure(a: Subset, m: usize) -> SignedMeasure {
    if a.len() <= m {
        return SignedMeasure::dirac(a);
    }
    a.subsets_up_to(m)
        .into_iter()
        .map(|b| {
            let c = canonical_coefficient(a.len(), b.len(), m);
            (b, Rational::from_integer(c))
        })
        .collect()
}

/// Kernel of `T_X` on the ground `{0..N-1}`.
///
/// Grounds smaller than `n` are allowed; `σ_n(2^X)` is then the full power set,
/// which is what restrictions to small subsets produce.
pub fn canonical_kernel(ground_size: usize, m: usize, n: usize) -> Result<ExtensionKernel> {
    if m >= n {
        return domain(format!("canonical operator needs m < n, got m={m}, n={n}"));
    }
    ExtensionKernel::from_fn(ground_size, m, n, |a| canonical_measure(a, m))
}

/// Whether `(C ↦ C∩B)_* φ(χ_A) = φ(χ_B)`.
pub fn continuity_pushforward_check(k: &ExtensionKernel, a: Subset, b: Subset) -> Result<bool> {
    if !b.is_subset_of(a) {
        return domain(format!("{b} is not a subset of {a}"));
    }
    let mu_a = k
        .measure(a)
        .ok_or_else(|| Error::NotASubset(a.to_string()))?;
    let mu_b = k
        .measure(b)
        .ok_or_else(|| Error::NotASubset(b.to_string()))?;
    Ok(mu_a.pushforward(|c| c.intersection(b)) == *mu_b)
}

/// Coefficient of `f(χ_D)` in the limit of `T_X f(χ_{A_k})` when `χ_{A_k} → χ_B`,
/// with `r = |A_k|`, `p = |B|`, `d = |D|`: `Ψ(m-d, r-p, r-d-1)`.
pub fn limit_coefficient(m: usize, r: usize, p: usize, d: usize) -> Result<BigInt> {
    if d > p.min(m) || m >= r || p > r {
        return domain(format!(
            "limit coefficient needs d ≤ min(p,m), m < r, p ≤ r; got m={m}, r={r}, p={p}, d={d}"
        ));
    }
    psi(m - d, r - p, r - d - 1)
}

/// The value the limit coefficient must take for `T_X f` to be continuous at `χ_B`.
pub fn expected_limit_coefficient(m: usize, p: usize, d: usize) -> BigInt {
    if p > m {
        canonical_coefficient(p, d, m)
    } else if d == p {
        BigInt::one()
    } else {
        BigInt::from(0)
    }
}

/// Checks one grid point; for `p ≤ m, d = p` also cross-checks `Φ(m-p, r-m, m-p) = 1`.
pub fn check_limit_coefficient(m: usize, r: usize, p: usize, d: usize) -> Result<bool> {
    let got = limit_coefficient(m, r, p, d)?;
    let mut ok = got == expected_limit_coefficient(m, p, d);
    if p <= m && d == p {
        ok &= phi(m - p, r - m, m - p)? == got;
    }
    Ok(ok)
}

/// Runs [`check_limit_coefficient`] on every `m < r ≤ rmax`, `p ≤ r`, `d ≤ min(p,m)`.
pub fn limit_coefficient_grid(rmax: usize) -> CheckReport {
    let mut report = CheckReport::new("limit_coefficients");
    for r in 1..=rmax {
        for m in 0..r {
            for p in 0..=r {
                for d in 0..=p.min(m) {
                    let ok = check_limit_coefficient(m, r, p, d).unwrap_or(false);
                    report.record(ok, || format!("m={m} r={r} p={p} d={d}"));
                }
            }
        }
    }
    report
}

/// Exhaustive kernel-level checks of the canonical operator on one ground.
pub fn canonical_checks(ground_size: usize, m: usize, n: usize) -> Result<Vec<CheckReport>> {
    let k = canonical_kernel(ground_size, m, n)?;
    let points = k.domain().points();

    let mut ext = CheckReport::new("extension");
    ext.record(k.is_extension_kernel(), || "kernel does not extend".into());

    let mut norm = CheckReport::new("norm_formula");
    if ground_size >= n {
        let formula = Rational::from_integer(crate::combinat::norm_formula(m, n)?);
        norm.record(k.operator_norm() == formula, || {
            format!("norm {} != formula {}", k.operator_norm(), formula)
        });
    }

    let mut row_sum = CheckReport::new("row_sum");
    for a in &points {
        let total = k.measure(*a).map(SignedMeasure::total_mass);
        row_sum.record(total == Some(Rational::one()), || format!("A={a}"));
    }

    let mut continuity = CheckReport::new("continuity_pushforward");
    for a in &points {
        for b in a.all_subsets() {
            let ok = continuity_pushforward_check(&k, *a, b)?;
            continuity.record(ok, || format!("A={a} B={b}"));
        }
    }

    let mut restriction = CheckReport::new("restriction_is_canonical");
    for y in k.ground().full().all_subsets() {
        let restricted = k.restrict(y)?;
        let expected = canonical_kernel(y.len(), m, n)?;
        restriction.record(restricted == expected, || format!("Y={y}"));
    }

    Ok(vec![ext, norm, row_sum, continuity, restriction])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn s(xs: &[usize]) -> Subset {
        Subset::from_members(xs.iter().copied()).unwrap()
    }

    #[test]
    fn small_canonical_measures() {
        let mu = canonical_measure(s(&[0, 1]), 1);
        let expected = SignedMeasure::from_atoms([
            (s(&[0]), int(1)),
            (s(&[1]), int(1)),
            (Subset::EMPTY, int(-1)),
        ]);
        assert_eq!(mu, expected);

        let mu = canonical_measure(s(&[0, 1, 2]), 2);
        for b in s(&[0, 1, 2]).subsets_up_to(2) {
            let want = match b.len() {
                2 => 1,
                1 => -1,
                _ => 1,
            };
            assert_eq!(mu.coefficient(b), int(want), "B={b}");
        }
        assert_eq!(mu.tv_norm(), int(7));
        assert_eq!(canonical_measure(s(&[3]), 1), SignedMeasure::dirac(s(&[3])));
    }

    #[test]
    fn canonical_norms() {
        assert_eq!(canonical_kernel(2, 1, 2).unwrap().operator_norm(), int(3));
        assert_eq!(canonical_kernel(3, 2, 3).unwrap().operator_norm(), int(7));
        assert!(canonical_kernel(3, 2, 2).is_err());
    }

    #[test]
    fn pushforward_examples() {
        let k = canonical_kernel(2, 1, 2).unwrap();
        assert!(continuity_pushforward_check(&k, s(&[0, 1]), s(&[0])).unwrap());
        assert!(continuity_pushforward_check(&k, s(&[0, 1]), s(&[0, 1])).unwrap());
        assert!(continuity_pushforward_check(&k, s(&[0]), s(&[1])).is_err());

        let k = canonical_kernel(3, 1, 3).unwrap();
        assert!(continuity_pushforward_check(&k, s(&[0, 1, 2]), s(&[0, 1])).unwrap());
    }

    #[test]
    fn limit_coefficient_examples() {
        assert_eq!(limit_coefficient(1, 3, 2, 1).unwrap(), BigInt::from(1));
        assert_eq!(limit_coefficient(1, 3, 2, 0).unwrap(), BigInt::from(-1));
        assert_eq!(limit_coefficient(1, 2, 0, 0).unwrap(), BigInt::from(1));
        assert_eq!(phi(1, 1, 1).unwrap(), BigInt::from(1));
        assert!(limit_coefficient(2, 2, 1, 0).is_err());
        assert!(limit_coefficient(1, 3, 1, 2).is_err());
    }

    #[test]
    fn limit_grid_small() {
        let report = limit_coefficient_grid(6);
        assert!(report.passed(), "{:?}", report.failures);
        assert!(report.cases > 0);
    }

    #[test]
    fn checks_pass_on_small_grounds() {
        for reports in [
            canonical_checks(4, 1, 2).unwrap(),
            canonical_checks(5, 1, 3).unwrap(),
        ] {
            for r in reports {
                assert!(r.passed(), "{}: {:?}", r.name, r.failures);
            }
        }
    }
}
