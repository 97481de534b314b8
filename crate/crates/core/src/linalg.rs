//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use crate::rational::Rational;

/// A sparse linear equation `Σ coeffs[k].1 · x[coeffs[k].0] = rhs`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Equation {
    pub coeffs: Vec<(usize, Rational)>,
    pub rhs: Rational,
}

impl Equation {
    /// Sorts and merges the terms, dropping zeros.
    pub fn normalized(mut terms: Vec<(usize, Rational)>, rhs: Rational) -> Self {
        terms.sort_by_key(|t| t.0);
        let mut coeffs: Vec<(usize, Rational)> = Vec::with_capacity(terms.len());
        for (col, c) in terms {
            match coeffs.last_mut() {
                Some((last, acc)) if *last == col => *acc += c,
                _ => coeffs.push((col, c)),
            }
        }
        coeffs.retain(|(_, c)| !c.is_zero());
        Equation { coeffs, rhs }
    }

    pub fn is_trivial(&self) -> bool {
        self.coeffs.is_empty() && self.rhs.is_zero()
    }

    pub fn residual(&self, x: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .map(|(k, c)| c * &x[*k])
            .sum::<Rational>()
            - &self.rhs
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub rank: usize,
    pub consistent: bool,
    /// One solution (free variables set to zero) when consistent.
    pub particular: Option<Vec<Rational>>,
    pub pivots: Vec<usize>,
}

impl Solution {
    pub fn nullity(&self, unknowns: usize) -> usize {
        unknowns - self.rank
    }
}

/// Reduces `[A | b]` to reduced row echelon form.
pub fn solve(unknowns: usize, equations: &[Equation]) -> Solution {
    let mut rows: Vec<Vec<Rational>> = equations
        .iter()
        .map(|eq| {
            let mut row = vec![Rational::zero(); unknowns + 1];
            for (k, c) in &eq.coeffs {
                row[*k] += c;
            }
            row[unknowns] = eq.rhs.clone();
            row
        })
        .collect();

    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..unknowns {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = Rational::one() / &rows[r][col];
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }

    let consistent = rows[r..].iter().all(|row| row[unknowns].is_zero());
    let particular = consistent.then(|| {
        let mut x = vec![Rational::zero(); unknowns];
        for (i, &col) in pivots.iter().enumerate() {
            x[col] = rows[i][unknowns].clone();
        }
        x
    });
    Solution {
        rank: pivots.len(),
        consistent,
        particular,
        pivots,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn eq(terms: &[(usize, i64)], rhs: i64) -> Equation {
        Equation::normalized(terms.iter().map(|&(k, c)| (k, int(c))).collect(), int(rhs))
    }

    #[test]
    fn unique_solution() {
        // x + y = 3, x - y = 1
        let sol = solve(2, &[eq(&[(0, 1), (1, 1)], 3), eq(&[(0, 1), (1, -1)], 1)]);
        assert!(sol.consistent);
        assert_eq!(sol.rank, 2);
        assert_eq!(sol.particular.unwrap(), vec![int(2), int(1)]);
    }

    #[test]
    fn rank_deficient_and_inconsistent() {
        let sol = solve(3, &[eq(&[(0, 2), (2, 4)], 2), eq(&[(0, 1), (2, 2)], 1)]);
        assert!(sol.consistent);
        assert_eq!(sol.nullity(3), 2);
        assert_eq!(sol.particular.unwrap(), vec![int(1), int(0), int(0)]);

        let bad = solve(1, &[eq(&[(0, 1)], 1), eq(&[(0, 1)], 2)]);
        assert!(!bad.consistent);
        assert!(bad.particular.is_none());
    }

    #[test]
    fn fractional_pivots() {
        let sol = solve(1, &[eq(&[(0, 3)], 1)]);
        assert_eq!(sol.particular.unwrap(), vec![ratio(1, 3)]);
    }

    #[test]
    fn normalization_merges_terms() {
        let e = eq(&[(1, 2), (0, 1), (1, -2)], 0);
        assert_eq!(e.coeffs, vec![(0, int(1))]);
        assert!(eq(&[(0, 1), (0, -1)], 0).is_trivial());
    }
}
