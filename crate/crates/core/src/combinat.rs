//! Exact binomial sums Θ, Φ, Ψ and exhaustive verification of their identities.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{domain, Result};

/// Memoized Pascal triangle `C(a, b)` for `0 ≤ b ≤ a ≤ limit`.
#[derive(Debug, Clone)]
pub struct BinomialTable {
    rows: Vec<Vec<BigInt>>,
}

impl BinomialTable {
    pub fn new(limit: usize) -> Self {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(limit + 1);
        for a in 0..=limit {
            let mut row = vec![BigInt::one(); a + 1];
            for b in 1..a {
                row[b] = &rows[a - 1][b - 1] + &rows[a - 1][b];
            }
            rows.push(row);
        }
        BinomialTable { rows }
    }

    pub fn limit(&self) -> usize {
        self.rows.len() - 1
    }

    /// `C(a, b)`, zero outside `0 ≤ b ≤ a`.
    pub fn get(&self, a: i64, b: i64) -> BigInt {
        if a < 0 || b < 0 || b > a {
            return BigInt::zero();
        }
        let (a, b) = (a as usize, b as usize);
        match self.rows.get(a) {
            Some(row) => row[b].clone(),
            None => binom_direct(a, b),
        }
    }
}

fn binom_direct(a: usize, b: usize) -> BigInt {
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for i in 0..b {
        acc = acc * BigInt::from(a - i) / BigInt::from(i + 1);
    }
    acc
}

fn table() -> &'static BinomialTable {
    static TABLE: OnceLock<BinomialTable> = OnceLock::new();
    TABLE.get_or_init(|| BinomialTable::new(128))
}

/// `C(a, b)` with the convention `C(a, b) = 0` when `b < 0`, `b > a` or `a < 0`.
pub fn binom(a: i64, b: i64) -> BigInt {
    table().get(a, b)
}

fn sign(e: usize) -> BigInt {
    if e.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

fn c(a: usize, b: usize) -> BigInt {
    binom(a as i64, b as i64)
}

/// `Θ(p,q,r,s,t) = Σ_{i=0}^{p} (-1)^{q-i} C(r,i) C(s-i,t-i)`.
pub fn theta(p: usize, q: usize, r: usize, s: usize, t: usize) -> Result<BigInt> {
    if p > q.min(r).min(s).min(t) || t > s {
        return domain(format!(
            "Θ({p},{q},{r},{s},{t}) needs p ≤ min(q,r,s,t) and t ≤ s"
        ));
    }
    Ok((0..=p)
        .map(|i| sign(q - i) * c(r, i) * c(s - i, t - i))
        .sum())
}

/// `Φ(k,l,m) = Σ_{i=0}^{m} (-1)^{m-i} C(k+l,i) C(m+l-i-1,m-i)`.
pub fn phi(k: usize, l: usize, m: usize) -> Result<BigInt> {
    if l < 1 || m > k + l {
        return domain(format!("Φ({k},{l},{m}) needs l ≥ 1 and m ≤ k+l"));
    }
    Ok((0..=m)
        .map(|i| sign(m - i) * c(k + l, i) * c(m + l - i - 1, m - i))
        .sum())
}

/// `Ψ(k,m,s) = Σ_{i=0}^{min(k,m)} (-1)^{k-i} C(m,i) C(s-i,k-i)`.
pub fn psi(k: usize, m: usize, s: usize) -> Result<BigInt> {
    if s < k {
        return domain(format!("Ψ({k},{m},{s}) needs s ≥ k"));
    }
    Ok((0..=k.min(m))
        .map(|i| sign(k - i) * c(m, i) * c(s - i, k - i))
        .sum())
}

/// `Σ_{k=0}^{m} C(n,k) C(n-k-1,m-k)`, the norm of the canonical operator.
pub fn norm_formula(m: usize, n: usize) -> Result<BigInt> {
    if m >= n {
        return domain(format!("norm formula needs m < n, got m={m}, n={n}"));
    }
    Ok((0..=m).map(|k| c(n, k) * c(n - k - 1, m - k)).sum())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub params: Vec<usize>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub name: String,
    pub statement: String,
    pub parameter_range: String,
    pub cases: u64,
    pub counterexamples: Vec<Counterexample>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

struct Scan {
    report: IdentityReport,
}

impl Scan {
    fn new(name: &str, statement: &str, range: String) -> Self {
        Scan {
            report: IdentityReport {
                name: name.into(),
                statement: statement.into(),
                parameter_range: range,
                cases: 0,
                counterexamples: Vec::new(),
            },
        }
    }

    fn check(&mut self, params: &[usize], lhs: Result<BigInt>, rhs: Result<BigInt>) {
        self.report.cases += 1;
        let show = |v: &Result<BigInt>| match v {
            Ok(v) => v.to_string(),
            Err(e) => e.to_string(),
        };
        let ok = matches!((&lhs, &rhs), (Ok(a), Ok(b)) if a == b);
        if !ok {
            self.report.counterexamples.push(Counterexample {
                params: params.to_vec(),
                lhs: show(&lhs),
                rhs: show(&rhs),
            });
        }
    }
}

/// Checks every identity at every admissible parameter tuple with entries `≤ limit`.
///
/// Only admissible tuples are enumerated.
pub fn verify_identity_suite(limit: usize) -> Vec<IdentityReport> {
    let lim = limit;
    let range = |vars: &str| format!("{vars} ≤ {lim}");
    let neg = |v: Result<BigInt>| v.map(|x| -x);

    let mut theta0 = Scan::new(
        "Theta0",
        "Θ(p,q+1,r,s,t) = -Θ(p,q,r,s,t)",
        range("p ≤ min(q,r,s,t), t ≤ s, all"),
    );
    let mut theta1 = Scan::new(
        "Theta1",
        "Θ(p,q,r+1,s+1,p) = Θ(p,q,r,s,p)",
        range("p ≤ min(q,r,s), all"),
    );
    let mut theta2 = Scan::new(
        "Theta2",
        "Θ(p+1,q+1,p+1,s+1,t) = -Θ(p,q,p,s,t)",
        range("p ≤ min(q,s), p ≤ t-1, t ≤ s, all"),
    );
    for p in 0..=lim {
        for q in p..=lim {
            for s in p..=lim {
                for t in p..=s {
                    for r in p..=lim {
                        theta0.check(
                            &[p, q, r, s, t],
                            theta(p, q + 1, r, s, t),
                            neg(theta(p, q, r, s, t)),
                        );
                    }
                    if t > p {
                        theta2.check(
                            &[p, q, s, t],
                            theta(p + 1, q + 1, p + 1, s + 1, t),
                            neg(theta(p, q, p, s, t)),
                        );
                    }
                }
                for r in p..=lim {
                    theta1.check(
                        &[p, q, r, s],
                        theta(p, q, r + 1, s + 1, p),
                        theta(p, q, r, s, p),
                    );
                }
            }
        }
    }

    let mut phi1 = Scan::new("Phi1", "Φ(k,l,k) = 1", range("l ≥ 1, k, l"));
    let mut phi2 = Scan::new("Phi2", "Φ(k,l,m) = 0", range("l ≥ 1, k < m ≤ k+l, k, l, m"));
    let mut phi3 = Scan::new(
        "Phi3",
        "Θ(k+l,k+l,k+l,n+l-1,n) = 0",
        range("l ≥ 1, n ≥ k+l, k, l, n"),
    );
    for k in 0..=lim {
        for l in 1..=lim {
            phi1.check(&[k, l], phi(k, l, k), Ok(BigInt::one()));
            for m in k + 1..=(k + l).min(lim) {
                phi2.check(&[k, l, m], phi(k, l, m), Ok(BigInt::zero()));
            }
            for n in k + l..=lim {
                let p = k + l;
                phi3.check(&[k, l, n], theta(p, p, p, n + l - 1, n), Ok(BigInt::zero()));
            }
        }
    }

    let mut psi1 = Scan::new(
        "Psi1",
        "Ψ(k,m,s) = (-1)^k C(s-m,k)",
        range("s ≥ k+m, k, m, s"),
    );
    let mut psi2 = Scan::new(
        "Psi2",
        "Ψ(k,m,s) = 0",
        range("k ≥ 1, m ≤ s < k+m, s ≥ k, k, m, s"),
    );
    for k in 0..=lim {
        for m in 0..=lim {
            for s in k..=lim {
                if s >= k + m {
                    psi1.check(&[k, m, s], psi(k, m, s), Ok(sign(k) * c(s - m, k)));
                } else if k >= 1 && m <= s {
                    psi2.check(&[k, m, s], psi(k, m, s), Ok(BigInt::zero()));
                }
            }
        }
    }

    [theta0, theta1, theta2, phi1, phi2, phi3, psi1, psi2]
        .into_iter()
        .map(|s| s.report)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn binomial_conventions() {
        assert_eq!(binom(4, 2), b(6));
        assert_eq!(binom(0, 0), b(1));
        assert_eq!(binom(2, 5), b(0));
        assert_eq!(binom(-1, 0), b(0));
        assert_eq!(binom(3, -1), b(0));
        assert_eq!(binom(200, 2), b(19900));
    }

    #[test]
    fn table_satisfies_pascal() {
        let t = BinomialTable::new(30);
        for a in 1..=30i64 {
            assert_eq!(t.get(a, 0), b(1));
            assert_eq!(t.get(a, a), b(1));
            for k in 1..a {
                assert_eq!(t.get(a, k), t.get(a - 1, k - 1) + t.get(a - 1, k));
            }
        }
    }

    #[test]
    fn theta_values() {
        // single term: (-1)^q C(s,t)
        assert_eq!(theta(0, 3, 2, 5, 2).unwrap(), b(-10));
        assert_eq!(theta(1, 1, 1, 2, 1).unwrap(), b(-1));
        assert!(theta(2, 1, 3, 3, 3).is_err());
        assert!(theta(0, 0, 0, 1, 2).is_err());
    }

    #[test]
    fn phi_values() {
        assert_eq!(phi(1, 1, 1).unwrap(), b(1));
        assert_eq!(phi(0, 2, 1).unwrap(), b(0));
        assert_eq!(phi(2, 3, 2).unwrap(), b(1));
        assert!(phi(1, 0, 0).is_err());
        assert!(phi(0, 1, 2).is_err());
    }

    #[test]
    fn psi_values() {
        assert_eq!(psi(1, 1, 2).unwrap(), b(-1));
        assert_eq!(psi(1, 1, 1).unwrap(), b(0));
        for m in 0..6 {
            for s in m..9 {
                assert_eq!(psi(0, m, s).unwrap(), b(1));
            }
        }
        assert!(psi(3, 0, 2).is_err());
    }

    #[test]
    fn norm_formula_values() {
        assert_eq!(norm_formula(1, 2).unwrap(), b(3));
        assert_eq!(norm_formula(2, 3).unwrap(), b(7));
        assert_eq!(norm_formula(1, 3).unwrap(), b(5));
        assert!(norm_formula(2, 2).is_err());
        for m in 0..20 {
            assert_eq!(norm_formula(m, m + 1).unwrap(), (b(1) << (m + 1)) - 1);
        }
    }

    #[test]
    fn suite_passes_on_small_limits() {
        for limit in [1, 2, 6] {
            let reports = verify_identity_suite(limit);
            assert_eq!(reports.len(), 8);
            for r in &reports {
                assert!(r.passed(), "{} failed: {:?}", r.name, r.counterexamples);
            }
        }
    }

    #[test]
    fn suite_case_counts_grow() {
        let small: u64 = verify_identity_suite(3).iter().map(|r| r.cases).sum();
        let large: u64 = verify_identity_suite(6).iter().map(|r| r.cases).sum();
        assert!(large > small);
        assert!(verify_identity_suite(6).iter().all(|r| r.cases > 0));
    }
}
