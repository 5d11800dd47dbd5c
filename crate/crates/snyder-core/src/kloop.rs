//! K-loops from group factorization.
//!
//! A pseudo-orthogonal group `G` with involutive automorphism `σ` splits
//! uniquely as `g = a·h`, where `h` is fixed by `σ` (the stabilizer) and `a`
//! satisfies `σ(a) = a⁻¹` (a transvection). The transvection set `L` closes
//! under `a·b := first factor of (ab)` and this product makes `L` a left Bol
//! loop with the automorphic inverse property — a K-loop. The stabilizer part
//! `h_ab` of `ab` is the precession of the composition.
//!
//! Three decompositions are packaged as [`Preset`]s:
//!
//! * `DeSitter`  — `SO(4,1) / SO(3,1)`, transvections sweep de Sitter space;
//! * `Lorentz`   — `SO(3,1) / SO(3)`, transvections are the Lorentz boosts;
//! * `Sphere`    — `SO(4) / SO(3)`, transvections sweep the 3-sphere.

use crate::ambient::{
    exp, generator, AlgebraElement, AmbientError, GroupElement, Involution, Metric, TOL_GROUP,
};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Residual bound for factorization reconstruction `‖a·h − g‖`.
pub const TOL_FACT: f64 = 1e-10;
/// Positivity margin for the chart coordinate on the reflected axis.
pub const TOL_CHART: f64 = 1e-12;

/// Errors from factorization and loop arithmetic.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum KloopError {
    /// Propagated from the ambient exponential/logarithm.
    #[error(transparent)]
    Ambient(#[from] AmbientError),
    /// The factored transvection leaves the positive-coordinate chart.
    #[error("chart violation: coordinate on the reflected axis is {0:.3e}")]
    Chart(f64),
    /// Operands from different presets.
    #[error("preset mismatch")]
    PresetMismatch,
}

/// Named group decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// `SO(4,1)/SO(3,1)`: signs `(+,−,−,−,−)`, reflected axis 4.
    DeSitter,
    /// `SO(3,1)/SO(3)`: signs `(+,−,−,−)`, reflected axis 0 (boost sector).
    Lorentz,
    /// `SO(4)/SO(3)`: signs `(+,+,+,+)`, reflected axis 3.
    Sphere,
}

impl Preset {
    pub fn metric(self) -> Metric {
        let signs = match self {
            Preset::DeSitter => vec![1, -1, -1, -1, -1],
            Preset::Lorentz => vec![1, -1, -1, -1],
            Preset::Sphere => vec![1, 1, 1, 1],
        };
        Metric::new(signs).expect("preset metric is valid")
    }

    pub fn dim(self) -> usize {
        match self {
            Preset::DeSitter => 5,
            Preset::Lorentz | Preset::Sphere => 4,
        }
    }

    pub fn reflected_axis(self) -> usize {
        match self {
            Preset::DeSitter => 4,
            Preset::Lorentz => 0,
            Preset::Sphere => 3,
        }
    }

    /// `σ(g) = s g s` with `s` flipping the transvection directions: the
    /// diagonal has `−1` on the reflected axis and `+1` elsewhere (for the
    /// Lorentz preset the complementary sign choice is used, which is the
    /// same conjugation).
    pub fn involution(self) -> Involution {
        let d = self.dim();
        let r = self.reflected_axis();
        let s: Vec<i8> = (0..d).map(|i| if i == r { -1 } else { 1 }).collect();
        Involution::new(s, r, self.metric()).expect("preset involution is valid")
    }

    /// The basepoint `e_r` on the quadric swept by the transvections.
    pub fn basepoint(self) -> Vec<f64> {
        let mut v = vec![0.0; self.dim()];
        v[self.reflected_axis()] = 1.0;
        v
    }

    /// Transvection generators `K_μ`, one per non-reflected axis, normalized
    /// so that `K_μ · basepoint = e_μ`. Concretely `K_μ = −η_rr J_{r,μ}` with
    /// `r` the reflected axis.
    pub fn transvection_generators(self) -> Vec<AlgebraElement> {
        let m = self.metric();
        let r = self.reflected_axis();
        let sr = m.sign(r);
        (0..self.dim())
            .filter(|&mu| mu != r)
            .map(|mu| {
                let (a, b, s) = if mu < r {
                    (mu, r, 1.0) // J_{μr} = −J_{rμ}
                } else {
                    (r, mu, -1.0)
                };
                generator(a, b, &m).unwrap().scale(s * sr)
            })
            .collect()
    }

    /// Indices of the non-reflected axes, in chart order.
    pub fn chart_axes(self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| i != self.reflected_axis()).collect()
    }
}

/// A transvection in the positive chart: `σ(g) = g⁻¹` and the reflected-axis
/// coordinate of `g · basepoint` is strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopElement {
    g: GroupElement,
    preset: Preset,
}

impl LoopElement {
    pub fn new(g: GroupElement, preset: Preset) -> Result<Self, KloopError> {
        let s = preset.involution();
        let r = (s.apply(&g).matrix() * g.matrix()
            - nalgebra::DMatrix::<f64>::identity(preset.dim(), preset.dim()))
        .norm()
            / (1.0 + g.matrix().norm_squared());
        if r > TOL_GROUP {
            return Err(KloopError::Ambient(AmbientError::NotInGroup(r)));
        }
        let coord = chart_coordinate(&g, preset);
        if coord <= TOL_CHART {
            return Err(KloopError::Chart(coord));
        }
        Ok(LoopElement { g, preset })
    }

    pub fn identity(preset: Preset) -> Self {
        LoopElement {
            g: GroupElement::identity(preset.metric()),
            preset,
        }
    }

    pub fn group_element(&self) -> &GroupElement {
        &self.g
    }

    pub fn preset(&self) -> Preset {
        self.preset
    }

    /// The quadric point `g · basepoint`.
    pub fn point(&self) -> Vec<f64> {
        self.g.act(&self.preset.basepoint())
    }

    /// Compact-sector rotation angle of the transvection: `acos` of the
    /// reflected-axis coordinate when it dips below 1, zero otherwise.
    /// Hyperbolic transvections never wrap, so their angle is zero.
    pub fn elliptic_angle(&self) -> f64 {
        let c = self.point()[self.preset.reflected_axis()];
        if c < 1.0 {
            c.clamp(-1.0, 1.0).acos()
        } else {
            0.0
        }
    }
}

/// Chart coordinate (reflected-axis component of `g · basepoint`).
fn chart_coordinate(g: &GroupElement, preset: Preset) -> f64 {
    g.act(&preset.basepoint())[preset.reflected_axis()]
}

/// Result of the unique decomposition `g = a·h`.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub a: LoopElement,
    pub h: GroupElement,
    pub residual: f64,
}

/// Unique decomposition `g = a·h` with `a = exp(½ log(g σ(g)⁻¹))`, `h = a⁻¹g`.
///
/// Going through the principal logarithm guarantees the square root lies in
/// the exponential of the `−1` eigenspace, which fixes the factor uniquely.
pub fn factorize(g: &GroupElement, preset: Preset) -> Result<Factorization, KloopError> {
    let s = preset.involution();
    let m = g.matrix() * s.apply(&g.inverse()).matrix();
    let w = crate::ambient::log_raw(&m)?;
    let a_m = crate::ambient::exp_raw(&(w * 0.5));
    let a_g = GroupElement::new(a_m, g.metric().clone())?;
    let h = a_g.inverse().compose(g);
    // stabilizer membership of h
    let hr = (s.apply(&h).matrix() - h.matrix()).norm() / (1.0 + h.matrix().norm());
    if hr > TOL_GROUP {
        return Err(KloopError::Ambient(AmbientError::NotInGroup(hr)));
    }
    let a = LoopElement::new(a_g, preset)?;
    let residual = (a.g.matrix() * h.matrix() - g.matrix()).norm() / (1.0 + g.matrix().norm());
    if residual > TOL_FACT {
        return Err(KloopError::Ambient(AmbientError::NotInGroup(residual)));
    }
    Ok(Factorization { a, h, residual })
}

/// Loop product `(a·b, h_ab)`: factorize the group product of the carriers.
pub fn loop_product(
    a: &LoopElement,
    b: &LoopElement,
) -> Result<(LoopElement, GroupElement), KloopError> {
    if a.preset != b.preset {
        return Err(KloopError::PresetMismatch);
    }
    // Compact directions wrap: once the combined rotation content reaches a
    // quarter turn the principal square root can silently pick the antipodal
    // factor. Refuse the composition near that boundary instead of
    // extrapolating across it; checkers treat the refusal as inconclusive
    // and resample.
    let reach = a.elliptic_angle() + b.elliptic_angle();
    if reach >= std::f64::consts::FRAC_PI_2 {
        return Err(KloopError::Chart(reach));
    }
    let f = factorize(&a.g.compose(&b.g), a.preset)?;
    Ok((f.a, f.h))
}

/// Loop inverse, which coincides with the group inverse on transvections.
pub fn loop_inverse(a: &LoopElement) -> Result<LoopElement, KloopError> {
    LoopElement::new(a.g.inverse(), a.preset)
}

/// Loop identities checkable on sampled triples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityKind {
    LeftBol,
    Aip,
    LeftAlternative,
    Lip,
    Gyrocommutative,
    Gyroassociative,
}

impl IdentityKind {
    pub const ALL: [IdentityKind; 6] = [
        IdentityKind::LeftBol,
        IdentityKind::Aip,
        IdentityKind::LeftAlternative,
        IdentityKind::Lip,
        IdentityKind::Gyrocommutative,
        IdentityKind::Gyroassociative,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityKind::LeftBol => "left_bol",
            IdentityKind::Aip => "aip",
            IdentityKind::LeftAlternative => "left_alternative",
            IdentityKind::Lip => "lip",
            IdentityKind::Gyrocommutative => "gyrocommutative",
            IdentityKind::Gyroassociative => "gyroassociative",
        }
    }
}

/// Outcome of a single identity evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum CheckOutcome {
    /// Both sides evaluated; `residual ≤ tol`.
    Passed { max_residual: f64 },
    /// Both sides evaluated; `residual > tol`.
    Failed { max_residual: f64 },
    /// A chart violation or branch cut interrupted the evaluation.
    Inconclusive,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, CheckOutcome::Passed { .. })
    }
}

fn conj(h: &GroupElement, c: &LoopElement) -> Result<LoopElement, KloopError> {
    LoopElement::new(h.compose(&c.g).compose(&h.inverse()), c.preset)
}

/// Evaluates one loop identity on a concrete tuple and reports the
/// Frobenius-norm residual between the two sides. Chart violations and
/// branch cuts are reported as [`CheckOutcome::Inconclusive`], never as
/// failures: the identity is simply not testable on that tuple.
pub fn check_identity(
    kind: IdentityKind,
    a: &LoopElement,
    b: &LoopElement,
    c: &LoopElement,
    tol: f64,
) -> CheckOutcome {
    match identity_residual(kind, a, b, c) {
        Ok(r) => {
            if r <= tol {
                CheckOutcome::Passed { max_residual: r }
            } else {
                CheckOutcome::Failed { max_residual: r }
            }
        }
        Err(KloopError::Chart(_)) | Err(KloopError::Ambient(AmbientError::BranchCut { .. })) => {
            CheckOutcome::Inconclusive
        }
        Err(_) => CheckOutcome::Inconclusive,
    }
}

fn diff(x: &LoopElement, y: &LoopElement) -> f64 {
    (x.group_element().matrix() - y.group_element().matrix()).norm()
}

/// Residual of the identity `kind` on `(a, b, c)`; `c` is ignored by the
/// binary identities.
pub fn identity_residual(
    kind: IdentityKind,
    a: &LoopElement,
    b: &LoopElement,
    c: &LoopElement,
) -> Result<f64, KloopError> {
    match kind {
        IdentityKind::LeftBol => {
            // a·(b·(a·c)) = (a·(b·a))·c
            let ac = loop_product(a, c)?.0;
            let bac = loop_product(b, &ac)?.0;
            let lhs = loop_product(a, &bac)?.0;
            let ba = loop_product(b, a)?.0;
            let aba = loop_product(a, &ba)?.0;
            let rhs = loop_product(&aba, c)?.0;
            Ok(diff(&lhs, &rhs))
        }
        IdentityKind::Aip => {
            // (a·b)⁻¹ = a⁻¹·b⁻¹
            let ab = loop_product(a, b)?.0;
            let lhs = loop_inverse(&ab)?;
            let rhs = loop_product(&loop_inverse(a)?, &loop_inverse(b)?)?.0;
            Ok(diff(&lhs, &rhs))
        }
        IdentityKind::LeftAlternative => {
            // a·(a·b) = (a·a)·b
            let ab = loop_product(a, b)?.0;
            let lhs = loop_product(a, &ab)?.0;
            let aa = loop_product(a, a)?.0;
            let rhs = loop_product(&aa, b)?.0;
            Ok(diff(&lhs, &rhs))
        }
        IdentityKind::Lip => {
            // a⁻¹·(a·b) = b
            let ab = loop_product(a, b)?.0;
            let lhs = loop_product(&loop_inverse(a)?, &ab)?.0;
            Ok(diff(&lhs, b))
        }
        IdentityKind::Gyrocommutative => {
            // a·b = h_ab (b·a) h_ab⁻¹
            let (ab, h) = loop_product(a, b)?;
            let ba = loop_product(b, a)?.0;
            let rhs = conj(&h, &ba)?;
            Ok(diff(&ab, &rhs))
        }
        IdentityKind::Gyroassociative => {
            // a·(b·c) = (a·b)·(h_ab c h_ab⁻¹)
            let bc = loop_product(b, c)?.0;
            let lhs = loop_product(a, &bc)?.0;
            let (ab, h) = loop_product(a, b)?;
            let rhs = loop_product(&ab, &conj(&h, c)?)?.0;
            Ok(diff(&lhs, &rhs))
        }
    }
}

/// Draws a random algebra element with independent normal coefficients over
/// the generator basis, rescaled so its Frobenius norm does not exceed
/// `bound`.
pub fn sample_algebra<R: Rng>(rng: &mut R, metric: &Metric, bound: f64) -> AlgebraElement {
    let d = metric.dim();
    let mut x = AlgebraElement::zero(metric.clone());
    for a in 0..d {
        for b in (a + 1)..d {
            let coeff: f64 = StandardNormal.sample(rng);
            x = x.add(&generator(a, b, metric).unwrap().scale(coeff));
        }
    }
    let n = x.norm();
    if n > bound {
        x.scale(bound / n)
    } else {
        x
    }
}

/// Random transvection: exponential of a random element of the `−1`
/// eigenspace with norm ≤ `bound`. The bound keeps the sample inside the
/// principal-branch and positive-chart domains.
pub fn sample_loop_element<R: Rng>(
    rng: &mut R,
    preset: Preset,
    bound: f64,
) -> Result<LoopElement, KloopError> {
    let gens = preset.transvection_generators();
    let axes = preset.chart_axes();
    let metric = preset.metric();
    let mut coeffs: Vec<f64> = gens.iter().map(|_| StandardNormal.sample(rng)).collect();
    let norm2: f64 = coeffs.iter().map(|c| 2.0 * c * c).sum();
    let n = norm2.sqrt();
    if n > bound {
        for c in coeffs.iter_mut() {
            *c *= bound / n;
        }
    }
    // cap the compact rotation content so identity checkers can nest
    // several products without approaching the quarter-turn wrap
    let sr = -metric.sign(preset.reflected_axis());
    let q: f64 = coeffs
        .iter()
        .zip(&axes)
        .map(|(c, &ax)| sr * metric.sign(ax) * c * c)
        .sum();
    if q < 0.0 {
        let theta = (-q).sqrt();
        let cap = 0.35;
        if theta > cap {
            for c in coeffs.iter_mut() {
                *c *= cap / theta;
            }
        }
    }
    let mut x = AlgebraElement::zero(metric);
    for (g, c) in gens.iter().zip(&coeffs) {
        x = x.add(&g.scale(*c));
    }
    LoopElement::new(exp(&x)?, preset)
}

/// Random group element `exp(Y)` with `‖Y‖ ≤ bound` over the full algebra.
pub fn sample_group_element<R: Rng>(
    rng: &mut R,
    preset: Preset,
    bound: f64,
) -> Result<GroupElement, KloopError> {
    let x = sample_algebra(rng, &preset.metric(), bound);
    Ok(exp(&x)?)
}

/// Aggregate of a sampled identity suite.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteOutcome {
    pub samples: usize,
    pub max_residual: f64,
    pub passed: bool,
    /// Tuples that had to be redrawn after chart/branch interruptions.
    pub resampled: usize,
}

/// Runs `kind` on `samples` random tuples with norm bound 1. Inconclusive
/// draws are resampled, capped at 10 retries per tuple.
pub fn run_identity_suite<R: Rng>(
    rng: &mut R,
    preset: Preset,
    kind: IdentityKind,
    samples: usize,
    tol: f64,
) -> SuiteOutcome {
    let mut max_residual: f64 = 0.0;
    let mut resampled = 0usize;
    let mut passed = true;
    for _ in 0..samples {
        let mut done = false;
        for _retry in 0..10 {
            let abc = (|| -> Result<_, KloopError> {
                let a = sample_loop_element(rng, preset, 1.0)?;
                let b = sample_loop_element(rng, preset, 1.0)?;
                let c = sample_loop_element(rng, preset, 1.0)?;
                Ok((a, b, c))
            })();
            let (a, b, c) = match abc {
                Ok(t) => t,
                Err(_) => {
                    resampled += 1;
                    continue;
                }
            };
            match check_identity(kind, &a, &b, &c, tol) {
                CheckOutcome::Passed { max_residual: r } => {
                    max_residual = max_residual.max(r);
                    done = true;
                }
                CheckOutcome::Failed { max_residual: r } => {
                    max_residual = max_residual.max(r);
                    passed = false;
                    done = true;
                }
                CheckOutcome::Inconclusive => {
                    resampled += 1;
                    continue;
                }
            }
            break;
        }
        if !done {
            // 10 interruptions in a row: report and move on
            passed = false;
        }
    }
    SuiteOutcome {
        samples,
        max_residual,
        passed,
        resampled,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn factorize_identity_gives_identity_pair() {
        for preset in [Preset::DeSitter, Preset::Lorentz, Preset::Sphere] {
            let g = GroupElement::identity(preset.metric());
            let f = factorize(&g, preset).unwrap();
            assert!(diff(&f.a, &LoopElement::identity(preset)) < 1e-14);
            assert!(f.residual < 1e-14);
        }
    }

    #[test]
    fn factorize_stabilizer_element_is_trivial_on_loop_part() {
        // g in the stabilizer: g·σ(g)⁻¹ = 1, so a = 1 and h = g
        let preset = Preset::DeSitter;
        let m = preset.metric();
        let h = exp(&generator(1, 2, &m).unwrap().scale(0.8)).unwrap();
        let f = factorize(&h, preset).unwrap();
        assert!(diff(&f.a, &LoopElement::identity(preset)) < 1e-13);
        assert!((f.h.matrix() - h.matrix()).norm() < 1e-13);
    }

    #[test]
    fn factorize_pure_transvection_has_trivial_stabilizer_part() {
        let preset = Preset::DeSitter;
        let gens = preset.transvection_generators();
        let x = gens[0].scale(0.5).add(&gens[2].scale(-0.3));
        let a = exp(&x).unwrap();
        let f = factorize(&a, preset).unwrap();
        assert!((f.a.group_element().matrix() - a.matrix()).norm() < 1e-12);
        let d = preset.dim();
        assert!((f.h.matrix() - nalgebra::DMatrix::<f64>::identity(d, d)).norm() < 1e-12);
    }

    #[test]
    fn factorization_roundtrips_on_random_elements() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for preset in [Preset::DeSitter, Preset::Lorentz, Preset::Sphere] {
            for _ in 0..200 {
                let g = sample_group_element(&mut rng, preset, 1.0).unwrap();
                let f = factorize(&g, preset).unwrap();
                assert!(f.residual <= 1e-10, "residual {}", f.residual);
            }
        }
    }

    #[test]
    fn factorization_uniqueness_roundtrip() {
        // factorize(a.g · h) returns (a, h) again
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let preset = Preset::DeSitter;
        let m = preset.metric();
        for _ in 0..100 {
            let a = sample_loop_element(&mut rng, preset, 1.0).unwrap();
            let h = exp(&{
                let c1: f64 = rand_distr::StandardNormal.sample(&mut rng);
                let c2: f64 = rand_distr::StandardNormal.sample(&mut rng);
                generator(0, 1, &m)
                    .unwrap()
                    .scale(0.5 * c1)
                    .add(&generator(2, 3, &m).unwrap().scale(0.5 * c2))
            })
            .unwrap();
            let g = a.group_element().compose(&h);
            let f = factorize(&g, preset).unwrap();
            assert!(diff(&f.a, &a) < 1e-10);
            assert!((f.h.matrix() - h.matrix()).norm() < 1e-10);
        }
    }

    #[test]
    fn loop_product_with_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let preset = Preset::DeSitter;
        let a = sample_loop_element(&mut rng, preset, 1.0).unwrap();
        let e = LoopElement::identity(preset);
        let (c, h) = loop_product(&a, &e).unwrap();
        assert!(diff(&c, &a) < 1e-12);
        assert!((h.matrix() - nalgebra::DMatrix::<f64>::identity(5, 5)).norm() < 1e-12);
    }

    #[test]
    fn collinear_transvections_compose_additively() {
        let preset = Preset::DeSitter;
        let k = &preset.transvection_generators()[1];
        let a = LoopElement::new(exp(&k.scale(0.4)).unwrap(), preset).unwrap();
        let b = LoopElement::new(exp(&k.scale(0.35)).unwrap(), preset).unwrap();
        let (c, h) = loop_product(&a, &b).unwrap();
        let expect = exp(&k.scale(0.75)).unwrap();
        assert!((c.group_element().matrix() - expect.matrix()).norm() < 1e-12);
        assert!((h.matrix() - nalgebra::DMatrix::<f64>::identity(5, 5)).norm() < 1e-12);
    }

    #[test]
    fn generic_precession_is_nontrivial_and_gyrocommutativity_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let preset = Preset::DeSitter;
        let a = sample_loop_element(&mut rng, preset, 1.0).unwrap();
        let b = sample_loop_element(&mut rng, preset, 1.0).unwrap();
        let (_, h) = loop_product(&a, &b).unwrap();
        assert!((h.matrix() - nalgebra::DMatrix::<f64>::identity(5, 5)).norm() > 1e-4);
        let out = check_identity(IdentityKind::Gyrocommutative, &a, &b, &a, 1e-9);
        assert!(out.passed());
    }

    #[test]
    fn loop_inverse_cancels_from_the_left() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for preset in [Preset::DeSitter, Preset::Lorentz, Preset::Sphere] {
            let a = sample_loop_element(&mut rng, preset, 1.0).unwrap();
            let b = sample_loop_element(&mut rng, preset, 1.0).unwrap();
            let ab = loop_product(&a, &b).unwrap().0;
            let lhs = loop_product(&loop_inverse(&a).unwrap(), &ab).unwrap().0;
            assert!(diff(&lhs, &b) < 1e-10);
        }
    }

    #[test]
    fn identity_residual_zero_on_identity_tuple() {
        let preset = Preset::Sphere;
        let e = LoopElement::identity(preset);
        for kind in IdentityKind::ALL {
            match check_identity(kind, &e, &e, &e, 1e-14) {
                CheckOutcome::Passed { max_residual } => assert!(max_residual < 1e-14),
                other => panic!("{kind:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn identity_suites_pass_on_all_presets() {
        // smaller sample count here; the acceptance suite runs the full 1000
        for preset in [Preset::DeSitter, Preset::Lorentz, Preset::Sphere] {
            for kind in IdentityKind::ALL {
                let mut rng = ChaCha8Rng::seed_from_u64(16);
                let out = run_identity_suite(&mut rng, preset, kind, 50, 1e-9);
                assert!(
                    out.passed,
                    "{kind:?} on {preset:?}: max residual {}",
                    out.max_residual
                );
            }
        }
    }

    #[test]
    fn loop_product_is_not_associative() {
        // stored witness triple; associator norm ≈ 0.089
        let preset = Preset::DeSitter;
        let gens = preset.transvection_generators();
        let build = |coeffs: [f64; 4]| {
            let mut x = AlgebraElement::zero(preset.metric());
            for (g, c) in gens.iter().zip(coeffs) {
                x = x.add(&g.scale(c));
            }
            LoopElement::new(exp(&x).unwrap(), preset).unwrap()
        };
        let a = build([0.55, 0.2, 0.0, 0.0]);
        let b = build([0.2, 0.3, 0.3, 0.0]);
        let c = build([0.45, -0.15, 0.25, 0.0]);
        let ab_c = loop_product(&loop_product(&a, &b).unwrap().0, &c).unwrap().0;
        let a_bc = loop_product(&a, &loop_product(&b, &c).unwrap().0).unwrap().0;
        assert!(diff(&ab_c, &a_bc) > 1e-3, "associator unexpectedly small");
    }

    #[test]
    fn chart_violation_is_reported() {
        // a rotation past the quarter turn leaves the positive chart
        let preset = Preset::Sphere;
        let k = &preset.transvection_generators()[0];
        let g = exp(&k.scale(2.0)).unwrap();
        match LoopElement::new(g, preset) {
            Err(KloopError::Chart(_)) => {}
            other => panic!("expected chart violation, got {other:?}"),
        }
    }

    use rand_distr::Distribution;
}
