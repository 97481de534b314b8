//! Positive ℓ¹-balls `B⁺_λ`, the lattice sets `S_n`, the regular extension
//! operator `R: C(S_m) → C(B⁺_1)` and the composition harness `E = rTR`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Error, Result};
use crate::freeset::{lower_bound_certificate, LowerBoundCertificate};
use crate::kernel::{ExtensionKernel, PointFunction};
use crate::measure::SignedMeasure;
use crate::rational::{int, ratio, Rational};
use crate::subset::{GroundSet, SigmaSpace, Subset, MAX_GROUND};

/// Finitely supported coordinates; zero coordinates are not stored.
pub type Coords = BTreeMap<usize, Rational>;

fn clean(coords: Coords) -> Result<Coords> {
    if let Some(i) = coords.keys().find(|i| **i >= MAX_GROUND) {
        return domain(format!("coordinate index {i} exceeds {MAX_GROUND}"));
    }
    Ok(coords.into_iter().filter(|(_, v)| !v.is_zero()).collect())
}

/// A point of `B⁺_λ`: nonnegative coordinates with sum at most `λ`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct BallPoint {
    coords: Coords,
    lambda: Rational,
}

impl BallPoint {
    pub fn new(coords: Coords, lambda: Rational) -> Result<Self> {
        let coords = clean(coords)?;
        if coords.values().any(|v| v.is_negative()) {
            return domain("ball point has a negative coordinate");
        }
        let total: Rational = coords.values().sum();
        if total > lambda {
            return domain(format!("coordinate sum {total} exceeds λ = {lambda}"));
        }
        Ok(BallPoint { coords, lambda })
    }

    /// A point of `B⁺_1`.
    pub fn unit(coords: Coords) -> Result<Self> {
        Self::new(coords, Rational::one())
    }

    pub fn coords(&self) -> &Coords {
        &self.coords
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    pub fn coord(&self, i: usize) -> Rational {
        self.coords.get(&i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn l1(&self) -> Rational {
        self.coords.values().sum()
    }

    pub fn support(&self) -> Subset {
        Subset::from_members(self.coords.keys().copied()).expect("indices checked")
    }
}

/// A point of `B_λ` or of `λB_{ℓ₂}`: signed, finitely supported.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SignedPoint {
    coords: Coords,
}

impl SignedPoint {
    pub fn new(coords: Coords) -> Result<Self> {
        Ok(SignedPoint {
            coords: clean(coords)?,
        })
    }

    pub fn coords(&self) -> &Coords {
        &self.coords
    }

    pub fn l1(&self) -> Rational {
        self.coords.values().map(|v| v.abs()).sum()
    }

    pub fn l2_squared(&self) -> Rational {
        self.coords.values().map(|v| v * v).sum()
    }
}

/// `g_1` rises linearly from 0 at `ε` to 1 at `1/m`; `g_0 = 1 − g_1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RampPair {
    m: usize,
    epsilon: Rational,
}

impl RampPair {
    /// `ε` halfway between `1/(m+1)` and `1/m`.
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return domain("ramp needs m ≥ 1");
        }
        let m_ = m as i64;
        let epsilon = (ratio(1, m_ + 1) + ratio(1, m_)) / int(2);
        Ok(RampPair { m, epsilon })
    }

    pub fn with_epsilon(m: usize, epsilon: Rational) -> Result<Self> {
        if m == 0 {
            return domain("ramp needs m ≥ 1");
        }
        let m_ = m as i64;
        if epsilon <= ratio(1, m_ + 1) || epsilon >= ratio(1, m_) {
            return domain(format!(
                "ε = {epsilon} must lie strictly between 1/{} and 1/{m}",
                m + 1
            ));
        }
        Ok(RampPair { m, epsilon })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    pub fn g1(&self, t: &Rational) -> Rational {
        let top = ratio(1, self.m as i64);
        if *t <= self.epsilon {
            Rational::zero()
        } else if *t >= top {
            Rational::one()
        } else {
            (t - &self.epsilon) / (top - &self.epsilon)
        }
    }

    pub fn g0(&self, t: &Rational) -> Rational {
        Rational::one() - self.g1(t)
    }
}

/// `n^{-1} χ_A ∈ S_n`.
pub fn lattice_point(a: Subset, n: usize) -> Result<BallPoint> {
    if a.len() > n {
        return domain(format!("|A| = {} exceeds n = {n}", a.len()));
    }
    if n == 0 {
        return BallPoint::unit(Coords::new());
    }
    let step = ratio(1, n as i64);
    BallPoint::unit(a.iter().map(|i| (i, step.clone())).collect())
}

/// `F_z = {i : z_i > ε}`; it has at most `m` elements because `(m+1)ε > 1`.
pub fn support_f(z: &BallPoint, ramp: &RampPair) -> Subset {
    let members = z
        .coords
        .iter()
        .filter(|(_, v)| **v > ramp.epsilon)
        .map(|(i, _)| *i);
    Subset::from_members(members).expect("indices checked")
}

/// `R*(δ_z)`: weight `Π_{i∈F_z} g_{χ_A(i)}(z_i)` on each `A ⊆ F_z`.
pub fn r_weights(z: &BallPoint, ramp: &RampPair) -> SignedMeasure {
    weights_on(z, ramp, support_f(z, ramp))
}

fn weights_on(z: &BallPoint, ramp: &RampPair, frame: Subset) -> SignedMeasure {
    let factors: Vec<(usize, Rational, Rational)> = frame
        .iter()
        .map(|i| {
            let t = z.coord(i);
            (i, ramp.g0(&t), ramp.g1(&t))
        })
        .collect();
    frame
        .all_subsets()
        .into_iter()
        .map(|a| {
            let w = factors
                .iter()
                .map(|(i, g0, g1)| if a.contains(*i) { g1 } else { g0 })
                .fold(Rational::one(), |acc, g| acc * g);
            (a, w)
        })
        .collect()
}

/// `Rf(z) = Σ_{A ⊆ F_z} Π_{i∈F_z} g_{χ_A(i)}(z_i) · f(m^{-1}χ_A)`; `f` is keyed by `A`.
pub fn r_apply(f: &PointFunction, z: &BallPoint, ramp: &RampPair) -> Result<Rational> {
    r_weights(z, ramp)
        .integrate(|a| f.get(&a))
        .map_err(|a| Error::IncompleteFunction(a.to_string()))
}

/// The same sum restricted to `A ⊆ F_z ∩ H`, valid when `f` only sees coordinates in `H`.
pub fn r_apply_local(
    f: &PointFunction,
    z: &BallPoint,
    ramp: &RampPair,
    h: Subset,
) -> Result<Rational> {
    weights_on(z, ramp, support_f(z, ramp).intersection(h))
        .integrate(|a| f.get(&a))
        .map_err(|a| Error::IncompleteFunction(a.to_string()))
}

/// `Δ(w)_i = sign(w_i) w_i²`, mapping `λB_{ℓ₂}` onto `B_{√λ}`-type ℓ¹ balls.
pub fn delta_map(w: &SignedPoint, lambda: &Rational) -> Result<SignedPoint> {
    if w.l2_squared() > *lambda {
        return domain(format!("Σ w_i² = {} exceeds {lambda}", w.l2_squared()));
    }
    SignedPoint::new(w.coords.iter().map(|(i, v)| (*i, v * v.abs())).collect())
}

fn rational_sqrt(v: &Rational) -> Option<Rational> {
    let sqrt = |x: &BigInt| {
        let r = x.sqrt();
        (&r * &r == *x).then_some(r)
    };
    Some(Rational::new(sqrt(v.numer())?, sqrt(v.denom())?))
}

/// Inverse of [`delta_map`] where every `|z_i|` is a rational square.
pub fn delta_inverse(z: &SignedPoint) -> Option<SignedPoint> {
    let coords = z
        .coords
        .iter()
        .map(|(i, v)| {
            let r = rational_sqrt(&v.abs())?;
            Some((*i, if v.is_negative() { -r } else { r }))
        })
        .collect::<Option<Coords>>()?;
    SignedPoint::new(coords).ok()
}

/// `ρ(z)_i = |z_i|`, the retraction `B_λ → B⁺_λ`.
pub fn rho_abs(z: &SignedPoint, lambda: &Rational) -> Result<BallPoint> {
    BallPoint::new(
        z.coords.iter().map(|(i, v)| (*i, v.abs())).collect(),
        lambda.clone(),
    )
}

/// A finitely supported signed measure on points of `B⁺_1`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BallMeasure {
    atoms: BTreeMap<BallPoint, Rational>,
}

impl BallMeasure {
    pub fn dirac(z: BallPoint) -> Self {
        let mut mu = Self::default();
        mu.add(z, Rational::one());
        mu
    }

    pub fn add(&mut self, z: BallPoint, coeff: Rational) {
        let slot = self.atoms.entry(z.clone()).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.atoms.remove(&z);
        }
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&BallPoint, &Rational)> + '_ {
        self.atoms.iter()
    }

    pub fn tv_norm(&self) -> Rational {
        self.atoms.values().map(|c| c.abs()).sum()
    }

    /// `Σ_z c_z R*(δ_z)`, a measure on `σ_m(2^X)`.
    pub fn pull_through_r(&self, ramp: &RampPair) -> SignedMeasure {
        let mut out = SignedMeasure::zero();
        for (z, c) in &self.atoms {
            out.add_scaled(&r_weights(z, ramp), c);
        }
        out
    }
}

/// Values of `T*` at the points `m^{-1}χ_A`, `|A| ≤ m + k`, of `((m+k)/m) S_{m+k} ⊆ B⁺_μ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallKernelStub {
    pub mu: Rational,
    pub m: usize,
    pub k: usize,
    pub entries: BTreeMap<Subset, BallMeasure>,
}

impl BallKernelStub {
    pub fn sup_tv(&self) -> Rational {
        self.entries
            .values()
            .map(BallMeasure::tv_norm)
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositionReport {
    pub kernel: ExtensionKernel,
    pub norm: Rational,
    pub stub_sup_tv: Rational,
    pub is_extension: bool,
    /// `2k + 1`.
    pub bound: usize,
    pub m_exceeds_k: bool,
    pub k_exceeds_stub_norm: bool,
    pub mu_exceeds_one_plus_k_over_m: bool,
}

/// Kernel of `E = rTR: C(σ_m(2^X)) → C(σ_{m+k}(2^X))` on the ground `{0..N-1}`.
pub fn compose_e(
    stub: &BallKernelStub,
    ground_size: usize,
    ramp: Option<RampPair>,
) -> Result<CompositionReport> {
    let ramp = match ramp {
        Some(r) if r.m() != stub.m => return domain("ramp and stub disagree on m"),
        Some(r) => r,
        None => RampPair::new(stub.m)?,
    };
    let ground = GroundSet::new(ground_size)?;
    let n = stub.m + stub.k;
    let mut entries = Vec::new();
    for a in SigmaSpace::new(ground, n).points() {
        let t = stub
            .entries
            .get(&a)
            .ok_or_else(|| Error::StubIncomplete(a.to_string()))?;
        if let Some((z, _)) = t.atoms().find(|(z, _)| !ground.contains(z.support())) {
            return Err(Error::NotASubset(z.support().to_string()));
        }
        entries.push((a, t.pull_through_r(&ramp)));
    }
    let kernel = ExtensionKernel::from_entries(ground_size, stub.m, n, entries)?;
    let stub_sup_tv = stub.sup_tv();
    let k_ = int(stub.k as i64);
    Ok(CompositionReport {
        norm: kernel.operator_norm(),
        is_extension: kernel.is_extension_kernel(),
        kernel,
        bound: 2 * stub.k + 1,
        m_exceeds_k: stub.m > stub.k,
        k_exceeds_stub_norm: k_ > stub_sup_tv,
        mu_exceeds_one_plus_k_over_m: Rational::one() + ratio(stub.k as i64, stub.m as i64)
            < stub.mu,
        stub_sup_tv,
    })
}

/// Runs the lower-bound certificate search on the composed kernel.
pub fn certify_composition(
    report: &CompositionReport,
    epsilon: &Rational,
) -> Result<Option<LowerBoundCertificate>> {
    lower_bound_certificate(&report.kernel, epsilon, None)
}

/// A seeded stub that honours the extension property on `S_m` and is
/// arbitrary elsewhere, with at most `atoms` ball points per entry.
pub fn random_stub(
    ground_size: usize,
    m: usize,
    k: usize,
    seed: u64,
    atoms: usize,
) -> Result<BallKernelStub> {
    if m == 0 {
        return domain("stub needs m ≥ 1");
    }
    let ground = GroundSet::new(ground_size)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = BTreeMap::new();
    for a in SigmaSpace::new(ground, m + k).points() {
        let measure = if a.len() <= m {
            BallMeasure::dirac(lattice_point(a, m)?)
        } else {
            let mut mu = BallMeasure::default();
            for _ in 0..rng.gen_range(1..=atoms.max(1)) {
                let z = random_unit_point(&mut rng, a, ground_size, m)?;
                let c = ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3));
                mu.add(z, c);
            }
            mu
        };
        entries.insert(a, measure);
    }
    Ok(BallKernelStub {
        mu: int(1) + ratio(k as i64 + 1, m as i64),
        m,
        k,
        entries,
    })
}

fn random_unit_point(
    rng: &mut ChaCha8Rng,
    near: Subset,
    ground_size: usize,
    m: usize,
) -> Result<BallPoint> {
    if ground_size == 0 {
        return BallPoint::unit(Coords::new());
    }
    // half the time, a point close to a lattice point m^{-1}χ_B with B ⊆ near
    if rng.gen_bool(0.5) {
        let members = near.to_vec();
        let take = rng.gen_range(0..=m.min(members.len()));
        let den = 4 * m as i64;
        let coords = members
            .iter()
            .take(take)
            .map(|i| (*i, ratio(rng.gen_range(2..=4), den)))
            .collect();
        return BallPoint::unit(coords);
    }
    let mut coords = Coords::new();
    let mut budget = 12i64;
    for _ in 0..3 {
        let i = rng.gen_range(0..ground_size);
        let w = rng.gen_range(0..=budget);
        budget -= w;
        *coords.entry(i).or_insert_with(Rational::zero) += ratio(w, 12);
    }
    BallPoint::unit(coords)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(xs: &[usize]) -> Subset {
        Subset::from_members(xs.iter().copied()).unwrap()
    }

    fn pt(coords: &[(usize, Rational)]) -> BallPoint {
        BallPoint::unit(coords.iter().cloned().collect()).unwrap()
    }

    #[test]
    fn lattice_points() {
        assert_eq!(lattice_point(Subset::EMPTY, 3).unwrap().l1(), int(0));
        let z = lattice_point(s(&[0, 2]), 2).unwrap();
        assert_eq!(z.coord(0), ratio(1, 2));
        assert_eq!(z.coord(2), ratio(1, 2));
        assert_eq!(z.coord(1), int(0));
        assert_eq!(lattice_point(s(&[0, 1, 2]), 3).unwrap().l1(), int(1));
        assert!(lattice_point(s(&[0, 1, 2]), 2).is_err());
    }

    #[test]
    fn ramp_values() {
        let ramp = RampPair::with_epsilon(1, ratio(3, 4)).unwrap();
        assert_eq!(ramp.g1(&ratio(7, 8)), ratio(1, 2));
        assert_eq!(ramp.g1(&ratio(3, 4)), int(0));
        assert_eq!(ramp.g1(&int(1)), int(1));
        assert_eq!(ramp.g0(&ratio(7, 8)), ratio(1, 2));
        assert!(RampPair::with_epsilon(2, ratio(1, 3)).is_err());
        assert!(RampPair::with_epsilon(2, ratio(1, 2)).is_err());
        assert_eq!(RampPair::new(2).unwrap().epsilon(), &ratio(5, 12));
    }

    #[test]
    fn support_sets() {
        let ramp = RampPair::with_epsilon(1, ratio(3, 4)).unwrap();
        assert_eq!(
            support_f(&pt(&[(0, ratio(7, 8)), (1, ratio(1, 16))]), &ramp),
            s(&[0])
        );
        assert_eq!(support_f(&pt(&[(0, ratio(1, 2))]), &ramp), Subset::EMPTY);
        let ramp = RampPair::new(3).unwrap();
        assert_eq!(
            support_f(&lattice_point(s(&[1, 4, 6]), 3).unwrap(), &ramp),
            s(&[1, 4, 6])
        );
    }

    #[test]
    fn weights() {
        let ramp = RampPair::with_epsilon(1, ratio(3, 4)).unwrap();
        assert_eq!(
            r_weights(&pt(&[(0, int(1))]), &ramp),
            SignedMeasure::dirac(s(&[0]))
        );
        assert_eq!(
            r_weights(&pt(&[(3, ratio(1, 5))]), &ramp),
            SignedMeasure::dirac(Subset::EMPTY)
        );
        let w = r_weights(&pt(&[(0, ratio(7, 8))]), &ramp);
        assert_eq!(w.coefficient(s(&[0])), ratio(1, 2));
        assert_eq!(w.coefficient(Subset::EMPTY), ratio(1, 2));
    }

    #[test]
    fn r_apply_examples() {
        let ramp = RampPair::with_epsilon(1, ratio(3, 4)).unwrap();
        let f: PointFunction = [
            (Subset::EMPTY, int(0)),
            (s(&[0]), int(1)),
            (s(&[1]), int(0)),
        ]
        .into_iter()
        .collect();
        assert_eq!(
            r_apply(&f, &pt(&[(0, ratio(7, 8))]), &ramp).unwrap(),
            ratio(1, 2)
        );
        assert_eq!(
            r_apply(&f, &lattice_point(s(&[0]), 1).unwrap(), &ramp).unwrap(),
            int(1)
        );
        let partial: PointFunction = [(Subset::EMPTY, int(0))].into_iter().collect();
        assert!(r_apply(&partial, &pt(&[(0, ratio(7, 8))]), &ramp).is_err());
    }

    #[test]
    fn delta_and_rho() {
        let zero = SignedPoint::default();
        assert_eq!(delta_map(&zero, &int(1)).unwrap(), zero);
        let e0 = SignedPoint::new([(0, int(1))].into_iter().collect()).unwrap();
        assert_eq!(delta_map(&e0, &int(1)).unwrap(), e0);
        let w =
            SignedPoint::new([(0, ratio(3, 5)), (1, ratio(-4, 5))].into_iter().collect()).unwrap();
        let d = delta_map(&w, &int(1)).unwrap();
        assert_eq!(d.coords()[&0], ratio(9, 25));
        assert_eq!(d.coords()[&1], ratio(-16, 25));
        assert_eq!(d.l1(), int(1));
        assert_eq!(delta_inverse(&d).unwrap(), w);
        assert!(delta_map(&w, &ratio(1, 2)).is_err());

        let z =
            SignedPoint::new([(0, ratio(-1, 2)), (1, ratio(1, 4))].into_iter().collect()).unwrap();
        let r = rho_abs(&z, &int(1)).unwrap();
        assert_eq!(r.coord(0), ratio(1, 2));
        assert_eq!(r.l1(), z.l1());
    }

    #[test]
    fn composition_with_point_evaluation() {
        // T* δ ≡ δ_origin: E collapses everything onto χ_∅
        let origin = BallPoint::unit(Coords::new()).unwrap();
        let entries = SigmaSpace::new(GroundSet::new(3).unwrap(), 2)
            .points()
            .into_iter()
            .map(|a| (a, BallMeasure::dirac(origin.clone())))
            .collect();
        let stub = BallKernelStub {
            mu: int(3),
            m: 1,
            k: 1,
            entries,
        };
        let report = compose_e(&stub, 3, None).unwrap();
        assert_eq!(report.norm, int(1));
        assert!(!report.is_extension);
        for (_, mu) in report.kernel.entries() {
            assert_eq!(*mu, SignedMeasure::dirac(Subset::EMPTY));
        }
    }

    #[test]
    fn composition_respects_stub_norm() {
        for seed in 0..5 {
            let stub = random_stub(4, 2, 1, seed, 3).unwrap();
            let report = compose_e(&stub, 4, None).unwrap();
            assert!(report.is_extension);
            assert!(report.norm <= report.stub_sup_tv);
        }
    }

    #[test]
    fn incomplete_stub() {
        let mut stub = random_stub(3, 1, 1, 0, 2).unwrap();
        stub.entries.remove(&s(&[0, 1]));
        assert!(matches!(
            compose_e(&stub, 3, None),
            Err(Error::StubIncomplete(_))
        ));
    }
}
