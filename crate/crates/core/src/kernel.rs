//! Extension kernels `φ_T = T*∘δ` and the operations on them.
//!
//! An operator `T: C(σ_m(2^X)) → C(σ_n(2^X))` is stored through its kernel:
//! for each point `χ_A` of `σ_n(2^X)` the measure `T*(δ_{χ_A})` on
//! `σ_m(2^X)`. Everything (application, norm, restriction) is computed at the
//! kernel level.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::measure::SignedMeasure;
use crate::rational::Rational;
use crate::subset::{GroundSet, SigmaSpace, Subset};

/// A function on the points of some `σ_k(2^X)`, keyed by the subset `A` of `χ_A`.
pub type PointFunction = BTreeMap<Subset, Rational>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionKernel {
    ground: GroundSet,
    m: usize,
    n: usize,
    entries: BTreeMap<Subset, SignedMeasure>,
}

impl ExtensionKernel {
    /// Assembles a kernel from one measure per point of `σ_n(2^ground)`.
    ///
    /// Only structural validity is enforced here (exactly one entry per
    /// point, atoms inside the ground, `m ≤ n`). Whether the kernel actually
    /// extends is a separate question, see [`ExtensionKernel::is_extension_kernel`].
    pub fn from_entries<I>(ground_size: usize, m: usize, n: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Subset, SignedMeasure)>,
    {
        let ground = GroundSet::new(ground_size)?;
        if m > n {
            return Err(Error::Domain(format!("codomain cap m={m} exceeds n={n}")));
        }
        let space = SigmaSpace::new(ground, n);
        let mut map = BTreeMap::new();
        for (point, mu) in entries {
            if !space.contains(point) {
                return Err(Error::Schema(format!(
                    "entry point {point} is not a point of σ_{n}(2^{ground_size})"
                )));
            }
            if let Some(bad) = mu.support().find(|s| !ground.contains(*s)) {
                return Err(Error::NotASubset(bad.to_string()));
            }
            if map.insert(point, mu).is_some() {
                return Err(Error::Schema(format!("duplicate entry for point {point}")));
            }
        }
        if map.len() != space.point_count() {
            let missing = space.points().into_iter().find(|p| !map.contains_key(p));
            return Err(Error::Schema(format!(
                "kernel has no entry for point {}",
                missing.map(|p| p.to_string()).unwrap_or_default()
            )));
        }
        Ok(ExtensionKernel {
            ground,
            m,
            n,
            entries: map,
        })
    }

    /// Builds a kernel by evaluating `phi` at every point of `σ_n(2^ground)`.
    pub fn from_fn(
        ground_size: usize,
        m: usize,
        n: usize,
        mut phi: impl FnMut(Subset) -> SignedMeasure,
    ) -> Result<Self> {
        let ground = GroundSet::new(ground_size)?;
        let points = SigmaSpace::new(ground, n).points();
        Self::from_entries(ground_size, m, n, points.into_iter().map(|a| (a, phi(a))))
    }

    /// The kernel of the identity operator (`m = n`).
    pub fn identity(ground_size: usize, n: usize) -> Result<Self> {
        Self::from_fn(ground_size, n, n, SignedMeasure::dirac)
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn ground_size(&self) -> usize {
        self.ground.size
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn domain(&self) -> SigmaSpace {
        SigmaSpace::new(self.ground, self.n)
    }

    pub fn codomain(&self) -> SigmaSpace {
        SigmaSpace::new(self.ground, self.m)
    }

    pub fn measure(&self, point: Subset) -> Option<&SignedMeasure> {
        self.entries.get(&point)
    }

    pub fn entries(&self) -> impl Iterator<Item = (Subset, &SignedMeasure)> + '_ {
        self.entries.iter().map(|(p, mu)| (*p, mu))
    }

    /// Replaces one entry; used to build perturbed kernels.
    pub fn with_entry(mut self, point: Subset, mu: SignedMeasure) -> Result<Self> {
        if !self.entries.contains_key(&point) {
            return Err(Error::NotASubset(point.to_string()));
        }
        if let Some(bad) = mu.support().find(|s| !self.ground.contains(*s)) {
            return Err(Error::NotASubset(bad.to_string()));
        }
        self.entries.insert(point, mu);
        Ok(self)
    }

    /// `(Tf)(χ_A) = Σ_B φ(χ_A){χ_B} f(χ_B)` at every point of `σ_n`.
    pub fn apply(&self, f: &PointFunction) -> Result<PointFunction> {
        self.entries
            .iter()
            .map(|(a, mu)| {
                mu.integrate(|b| f.get(&b))
                    .map(|v| (*a, v))
                    .map_err(|b| Error::IncompleteFunction(b.to_string()))
            })
            .collect()
    }

    /// `‖T‖ = max_A ‖φ(χ_A)‖`, exact.
    pub fn operator_norm(&self) -> Rational {
        self.entries
            .values()
            .map(SignedMeasure::tv_norm)
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Points attaining the operator norm.
    pub fn norm_attainers(&self) -> Vec<Subset> {
        let norm = self.operator_norm();
        self.entries
            .iter()
            .filter(|(_, mu)| mu.tv_norm() == norm)
            .map(|(a, _)| *a)
            .collect()
    }

    /// `φ(χ_A) = δ_{χ_A}` for `|A| ≤ m` and every atom has at most `m` elements.
    pub fn is_extension_kernel(&self) -> bool {
        self.entries.iter().all(|(a, mu)| {
            mu.max_atom_len() <= self.m && (a.len() > self.m || *mu == SignedMeasure::dirac(*a))
        })
    }

    /// The kernel of `T|_Y = r_Y ∘ T ∘ e_Y` on the ground `Y`, relabelled to `{0..|Y|-1}`.
    ///
    /// `φ_{T|_Y}(χ_Z)` is the image of `φ_T(χ_Z)` under `C ↦ C ∩ Y`.
    pub fn restrict(&self, y: Subset) -> Result<ExtensionKernel> {
        self.ground.check(y)?;
        let mut entries = Vec::new();
        for z in y.subsets_up_to(self.n) {
            let mu = &self.entries[&z];
            let pushed = mu.pushforward(|c| c.intersection(y).reindex_into(y));
            entries.push((z.reindex_into(y), pushed));
        }
        ExtensionKernel::from_entries(y.len(), self.m, self.n, entries)
    }
}

/// Free-function form of [`ExtensionKernel::apply`].
pub fn apply_kernel(k: &ExtensionKernel, f: &PointFunction) -> Result<PointFunction> {
    k.apply(f)
}

pub fn operator_norm(k: &ExtensionKernel) -> Rational {
    k.operator_norm()
}

pub fn is_extension_kernel(k: &ExtensionKernel) -> bool {
    k.is_extension_kernel()
}

pub fn restrict_kernel(k: &ExtensionKernel, y: Subset) -> Result<ExtensionKernel> {
    k.restrict(y)
}

/// An injective map `u: Y → X` between anonymous finite grounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Injection {
    target: usize,
    map: Vec<usize>,
}

impl Injection {
    pub fn new(map: Vec<usize>, target: usize) -> Result<Self> {
        GroundSet::new(target)?;
        let mut seen = Subset::EMPTY;
        for &x in &map {
            if x >= target {
                return Err(Error::Domain(format!(
                    "image {x} outside target of size {target}"
                )));
            }
            if seen.contains(x) {
                return Err(Error::Domain(format!("map is not injective at {x}")));
            }
            seen = seen.with(x);
        }
        Ok(Injection { target, map })
    }

    pub fn identity(size: usize) -> Result<Self> {
        Self::new((0..size).collect(), size)
    }

    /// `{0..|Y|-1} → X`, sending rank `r` to the `r`-th element of `y`.
    pub fn inclusion(y: Subset, target: usize) -> Result<Self> {
        Self::new(y.to_vec(), target)
    }

    pub fn source_size(&self) -> usize {
        self.map.len()
    }

    pub fn target_size(&self) -> usize {
        self.target
    }

    pub fn apply(&self, y: usize) -> usize {
        self.map[y]
    }

    pub fn image(&self, b: Subset) -> Subset {
        b.iter().fold(Subset::EMPTY, |acc, y| acc.with(self.map[y]))
    }

    /// `u^{-1}(A)`.
    pub fn preimage(&self, a: Subset) -> Subset {
        self.map
            .iter()
            .enumerate()
            .filter(|(_, x)| a.contains(**x))
            .fold(Subset::EMPTY, |acc, (y, _)| acc.with(y))
    }

    /// `u ∘ v`.
    pub fn compose(&self, inner: &Injection) -> Result<Injection> {
        if inner.target != self.map.len() {
            return Err(Error::Domain("injections do not compose".into()));
        }
        Injection::new(
            inner.map.iter().map(|&y| self.map[y]).collect(),
            self.target,
        )
    }
}

/// `e_u(f)(χ_A) = f(χ_{u^{-1}(A)})` on every point of `σ_m(2^X)`.
pub fn pullback_function(u: &Injection, f: &PointFunction, m: usize) -> Result<PointFunction> {
    let target = SigmaSpace::new(GroundSet::new(u.target_size())?, m);
    target
        .points()
        .into_iter()
        .map(|a| {
            let pre = u.preimage(a);
            f.get(&pre)
                .cloned()
                .map(|v| (a, v))
                .ok_or_else(|| Error::IncompleteFunction(pre.to_string()))
        })
        .collect()
}
