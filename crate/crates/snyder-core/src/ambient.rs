//! Fixed-convention linear algebra for the ambient pseudo-orthogonal groups.
//!
//! Everything downstream lives inside a group `SO(p,q)` preserving a diagonal
//! metric `η = diag(signs)`. This module owns that convention: the metric,
//! the generator basis `J_{AB}`, the matrix exponential/logarithm, and the
//! involutive automorphism `σ(g) = s g s` whose fixed points form the
//! stabilizer subgroup of a decomposition.
//!
//! Generator normalization is integer-valued: `(J_{AB})^C_D = δ^C_A η_{BD} −
//! δ^C_B η_{AD}`, with no factor of `i` and no factor of `1/2`, so that all
//! structure constants of interest are exact integers.

use nalgebra::DMatrix;
use thiserror::Error;

/// Membership tolerance for `mᵀηm = η` and `det m = 1`. Comfortably above
/// accumulated rounding for dim ≤ 5 chains of ≤ 10 products.
pub const TOL_GROUP: f64 = 1e-10;
/// Truncation target for the scaled Taylor series in [`exp`].
pub const TOL_EXP: f64 = 1e-13;
/// Round-trip target for [`log`]: `exp(log g) = g` within this bound.
pub const TOL_LOG: f64 = 1e-11;
/// An eigenvalue closer than this to the negative real axis aborts [`log`].
pub const TOL_BRANCH: f64 = 1e-8;

/// Errors from ambient-level linear algebra.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum AmbientError {
    /// Metric signs must be ±1 and there must be at least two of them.
    #[error("invalid metric: signs must be ±1 and dim ≥ 2")]
    BadMetric,
    /// Generator index outside `0..dim` or not strictly ordered.
    #[error("generator index out of range: ({0},{1}) for dim {2}")]
    IndexOutOfRange(usize, usize, usize),
    /// Matrix fails `mᵀηm = η` or `det = +1` within [`TOL_GROUP`].
    #[error("matrix is not in the metric-preserving group (residual {0:.3e})")]
    NotInGroup(f64),
    /// Matrix fails `xᵀη + ηx = 0` within [`TOL_GROUP`].
    #[error("matrix is not η-antisymmetric (residual {0:.3e})")]
    NotInAlgebra(f64),
    /// Input to `exp`/`log` contains NaN or infinity.
    #[error("non-finite matrix entry")]
    NonFinite,
    /// An eigenvalue lies within [`TOL_BRANCH`] of the negative real axis,
    /// so the principal logarithm is not trustworthy here.
    #[error("eigenvalue {re:.3e}{im:+.3e}i too close to the branch cut")]
    BranchCut { re: f64, im: f64 },
    /// Square-root iteration failed to converge (input far from the group).
    #[error("matrix square root did not converge")]
    SqrtDiverged,
    /// Operands carry different metrics or dimensions.
    #[error("dimension or metric mismatch")]
    DimensionMismatch,
}

/// Diagonal metric `η = diag(signs)`, each sign ±1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Metric {
    signs: Vec<i8>,
}

impl Metric {
    pub fn new(signs: Vec<i8>) -> Result<Self, AmbientError> {
        if signs.len() < 2 || signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(AmbientError::BadMetric);
        }
        Ok(Metric { signs })
    }

    pub fn dim(&self) -> usize {
        self.signs.len()
    }

    pub fn sign(&self, i: usize) -> f64 {
        f64::from(self.signs[i])
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// The metric as a dense matrix.
    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            if i == j {
                self.sign(i)
            } else {
                0.0
            }
        })
    }

    /// η-inner product `uᵀηv` of two coordinate vectors.
    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        u.iter()
            .zip(v)
            .zip(&self.signs)
            .map(|((a, b), &s)| f64::from(s) * a * b)
            .sum()
    }
}

/// Residual of the group membership conditions for `m`, relative to the
/// natural quadratic scale of the constraint (`mᵀηm` grows like `‖m‖²`).
fn group_residual(m: &DMatrix<f64>, metric: &Metric) -> f64 {
    let eta = metric.matrix();
    let cons = m.transpose() * &eta * m - &eta;
    let det = m.determinant();
    let scale = 1.0 + m.norm_squared();
    cons.norm().max((det - 1.0).abs()) / scale
}

/// Residual of η-antisymmetry for `x`.
fn algebra_residual(x: &DMatrix<f64>, metric: &Metric) -> f64 {
    let eta = metric.matrix();
    (x.transpose() * &eta + &eta * x).norm() / (1.0 + x.norm())
}

/// Element of the metric-preserving group: `mᵀηm = η`, `det m = +1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    m: DMatrix<f64>,
    metric: Metric,
}

impl GroupElement {
    pub fn new(m: DMatrix<f64>, metric: Metric) -> Result<Self, AmbientError> {
        if m.nrows() != metric.dim() || m.ncols() != metric.dim() {
            return Err(AmbientError::DimensionMismatch);
        }
        if !m.iter().all(|v| v.is_finite()) {
            return Err(AmbientError::NonFinite);
        }
        let r = group_residual(&m, &metric);
        if r > TOL_GROUP {
            return Err(AmbientError::NotInGroup(r));
        }
        Ok(GroupElement { m, metric })
    }

    pub fn identity(metric: Metric) -> Self {
        GroupElement {
            m: DMatrix::identity(metric.dim(), metric.dim()),
            metric,
        }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    /// Group inverse, computed as `η⁻¹ mᵀ η` (exact for η-orthogonal m).
    pub fn inverse(&self) -> GroupElement {
        let eta = self.metric.matrix();
        let mi = &eta * self.m.transpose() * &eta;
        GroupElement {
            m: mi,
            metric: self.metric.clone(),
        }
    }

    /// Group product. Panics on metric mismatch (exercised only internally).
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        assert_eq!(self.metric, other.metric, "metric mismatch");
        GroupElement {
            m: &self.m * &other.m,
            metric: self.metric.clone(),
        }
    }

    /// Apply to a coordinate vector.
    pub fn act(&self, v: &[f64]) -> Vec<f64> {
        let x = DMatrix::from_column_slice(v.len(), 1, v);
        (&self.m * x).column(0).iter().copied().collect()
    }

    pub fn residual(&self) -> f64 {
        group_residual(&self.m, &self.metric)
    }
}

/// Element of the Lie algebra: `xᵀη + ηx = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    x: DMatrix<f64>,
    metric: Metric,
}

impl AlgebraElement {
    pub fn new(x: DMatrix<f64>, metric: Metric) -> Result<Self, AmbientError> {
        if x.nrows() != metric.dim() || x.ncols() != metric.dim() {
            return Err(AmbientError::DimensionMismatch);
        }
        if !x.iter().all(|v| v.is_finite()) {
            return Err(AmbientError::NonFinite);
        }
        let r = algebra_residual(&x, &metric);
        if r > TOL_GROUP {
            return Err(AmbientError::NotInAlgebra(r));
        }
        Ok(AlgebraElement { x, metric })
    }

    pub fn zero(metric: Metric) -> Self {
        AlgebraElement {
            x: DMatrix::zeros(metric.dim(), metric.dim()),
            metric,
        }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn scale(&self, c: f64) -> AlgebraElement {
        AlgebraElement {
            x: &self.x * c,
            metric: self.metric.clone(),
        }
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            x: &self.x + &other.x,
            metric: self.metric.clone(),
        }
    }

    /// Matrix commutator `[x, y]`; lands back in the algebra.
    pub fn commutator(&self, other: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            x: &self.x * &other.x - &other.x * &self.x,
            metric: self.metric.clone(),
        }
    }

    pub fn norm(&self) -> f64 {
        self.x.norm()
    }
}

/// Basis generator `J_{AB}` with `(J_{AB})^C_D = δ^C_A η_{BD} − δ^C_B η_{AD}`.
///
/// Requires `a < b`; the antisymmetrized partner is `−J_{AB}`.
pub fn generator(a: usize, b: usize, metric: &Metric) -> Result<AlgebraElement, AmbientError> {
    let d = metric.dim();
    if a >= b || b >= d {
        return Err(AmbientError::IndexOutOfRange(a, b, d));
    }
    let mut x = DMatrix::zeros(d, d);
    for col in 0..d {
        if col == b {
            x[(a, col)] += metric.sign(b);
        }
        if col == a {
            x[(b, col)] -= metric.sign(a);
        }
    }
    AlgebraElement::new(x, metric.clone())
}

/// Matrix exponential by scaling-and-squaring with a truncated Taylor series.
///
/// The argument is scaled down to norm ≤ 1/4, summed until the term norm
/// drops below [`TOL_EXP`] relative tolerance, then squared back up.
pub fn exp(x: &AlgebraElement) -> Result<GroupElement, AmbientError> {
    if !x.matrix().iter().all(|v| v.is_finite()) {
        return Err(AmbientError::NonFinite);
    }
    let m = exp_raw(x.matrix());
    GroupElement::new(m, x.metric().clone())
}

pub(crate) fn exp_raw(x: &DMatrix<f64>) -> DMatrix<f64> {
    let d = x.nrows();
    let norm = x.norm();
    let s = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as u32
    } else {
        0
    };
    let t = x * 0.5f64.powi(s as i32);
    let mut sum = DMatrix::identity(d, d);
    let mut term = DMatrix::identity(d, d);
    for k in 1..60 {
        term = &term * &t / (k as f64);
        sum += &term;
        if term.norm() < TOL_EXP * 0.01 {
            break;
        }
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

/// Principal square root of a matrix near the identity component, by the
/// Denman–Beavers iteration. Quadratic convergence; the branch screening in
/// [`log`] keeps the iteration inside its basin.
fn sqrtm(m: &DMatrix<f64>) -> Result<DMatrix<f64>, AmbientError> {
    let d = m.nrows();
    let mut y = m.clone();
    let mut z = DMatrix::<f64>::identity(d, d);
    for _ in 0..60 {
        let yi = y.clone().try_inverse().ok_or(AmbientError::SqrtDiverged)?;
        let zi = z.clone().try_inverse().ok_or(AmbientError::SqrtDiverged)?;
        let yn = (&y + zi) * 0.5;
        let zn = (&z + yi) * 0.5;
        let delta = (&yn - &y).norm();
        y = yn;
        z = zn;
        if delta < 1e-15 * (1.0 + y.norm()) {
            break;
        }
    }
    if ((&y * &y) - m).norm() > 1e-9 * (1.0 + m.norm()) {
        return Err(AmbientError::SqrtDiverged);
    }
    Ok(y)
}

/// Distance from `λ` to the closed negative real axis `{x ≤ 0}`.
fn branch_distance(re: f64, im: f64) -> f64 {
    if re <= 0.0 {
        im.abs()
    } else {
        (re * re + im * im).sqrt()
    }
}

/// Branch screening for the principal logarithm, bounded-time.
///
/// Fast accept: `‖M − I‖ < 0.9` puts the whole spectrum in the right half
/// plane. Otherwise `det(M + I)` close to or below zero flags an eigenvalue
/// near `−1` or a negative real pair, and a bounded Schur iteration refines
/// the verdict when it converges. A final `exp∘log` round-trip check in
/// [`log_raw`] backstops the rare case where none of the screens decide.
fn branch_screen(m: &DMatrix<f64>) -> Result<(), AmbientError> {
    let n = m.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    if (m - &id).norm() < 0.9 {
        return Ok(());
    }
    let detp = (m + &id).determinant();
    if detp <= 1e-10 {
        return Err(AmbientError::BranchCut { re: -1.0, im: 0.0 });
    }
    if let Some(schur) = nalgebra::linalg::Schur::try_new(m.clone(), 1e-13, 300) {
        for lam in schur.complex_eigenvalues().iter() {
            if branch_distance(lam.re, lam.im) < TOL_BRANCH {
                return Err(AmbientError::BranchCut {
                    re: lam.re,
                    im: lam.im,
                });
            }
        }
    }
    Ok(())
}

/// Principal matrix logarithm by inverse scaling-and-squaring.
///
/// Fails with [`AmbientError::BranchCut`] when an eigenvalue lies within
/// [`TOL_BRANCH`] of the negative real axis, which signals that the input is
/// outside the safe chart rather than a numerical breakdown.
pub fn log(g: &GroupElement) -> Result<AlgebraElement, AmbientError> {
    let x = log_raw(g.matrix())?;
    AlgebraElement::new(x, g.metric().clone())
}

pub(crate) fn log_raw(m: &DMatrix<f64>) -> Result<DMatrix<f64>, AmbientError> {
    if !m.iter().all(|v| v.is_finite()) {
        return Err(AmbientError::NonFinite);
    }
    branch_screen(m)?;
    let d = m.nrows();
    let id = DMatrix::<f64>::identity(d, d);
    let mut a = m.clone();
    let mut k = 0u32;
    while (&a - &id).norm() > 0.25 {
        a = sqrtm(&a)?;
        k += 1;
        if k > 50 {
            return Err(AmbientError::SqrtDiverged);
        }
    }
    // log(I + E) by alternating series, ‖E‖ ≤ 1/4
    let e = &a - &id;
    let mut term = e.clone();
    let mut sum = e.clone();
    for n in 2..60 {
        term = &term * &e;
        let contrib = &term * (if n % 2 == 0 { -1.0 } else { 1.0 } / n as f64);
        sum += &contrib;
        if term.norm() < 1e-17 {
            break;
        }
    }
    let out = sum * 2f64.powi(k as i32);
    // principal-branch backstop: the result must reproduce the input
    if (exp_raw(&out) - m).norm() > 10.0 * TOL_LOG * (1.0 + m.norm()) {
        return Err(AmbientError::BranchCut { re: -1.0, im: 0.0 });
    }
    Ok(out)
}

/// Involutive automorphism `σ(g) = s g s` with `s` diagonal, `s² = 1`.
///
/// `reflected_axis` names the transvection direction singled out by the
/// decomposition (the axis whose chart coordinate must stay positive).
#[derive(Debug, Clone, PartialEq)]
pub struct Involution {
    s: Vec<f64>,
    reflected_axis: usize,
    metric: Metric,
}

impl Involution {
    /// Builds `s` from ±1 entries; exactly involutive by construction.
    pub fn new(s: Vec<i8>, reflected_axis: usize, metric: Metric) -> Result<Self, AmbientError> {
        if s.len() != metric.dim() || reflected_axis >= metric.dim() {
            return Err(AmbientError::DimensionMismatch);
        }
        if s.iter().any(|&v| v != 1 && v != -1) {
            return Err(AmbientError::BadMetric);
        }
        Ok(Involution {
            s: s.iter().map(|&v| f64::from(v)).collect(),
            reflected_axis,
            metric,
        })
    }

    pub fn reflected_axis(&self) -> usize {
        self.reflected_axis
    }

    pub fn sign(&self, i: usize) -> f64 {
        self.s[i]
    }

    /// `σ(g) = s g s` on the group. Applying twice returns `g` exactly.
    pub fn apply(&self, g: &GroupElement) -> GroupElement {
        GroupElement {
            m: self.conjugate(g.matrix()),
            metric: g.metric().clone(),
        }
    }

    /// The differential `dσ(x) = s x s` on the algebra.
    pub fn apply_algebra(&self, x: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            x: self.conjugate(x.matrix()),
            metric: x.metric().clone(),
        }
    }

    pub(crate) fn conjugate(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        let d = m.nrows();
        DMatrix::from_fn(d, d, |i, j| self.s[i] * m[(i, j)] * self.s[j])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn m5() -> Metric {
        Metric::new(vec![1, -1, -1, -1, -1]).unwrap()
    }

    fn random_algebra(rng: &mut ChaCha8Rng, metric: &Metric, bound: f64) -> AlgebraElement {
        let d = metric.dim();
        let mut x = AlgebraElement::zero(metric.clone());
        for a in 0..d {
            for b in (a + 1)..d {
                let c: f64 = StandardNormal.sample(rng);
                x = x.add(&generator(a, b, metric).unwrap().scale(c));
            }
        }
        let n = x.norm();
        if n > bound {
            x = x.scale(bound / n);
        }
        x
    }

    #[test]
    fn generator_defining_formula() {
        // direct evaluation for signs (+,−): J_{01} = [[0,−1],[−1,0]]
        let m = Metric::new(vec![1, -1]).unwrap();
        let j = generator(0, 1, &m).unwrap();
        assert_eq!(j.matrix()[(0, 1)], -1.0);
        assert_eq!(j.matrix()[(1, 0)], -1.0);
        assert_eq!(j.matrix()[(0, 0)], 0.0);
        assert_abs_diff_eq!(algebra_residual(j.matrix(), &m), 0.0);
    }

    #[test]
    fn generator_index_errors() {
        let m = m5();
        assert!(generator(1, 1, &m).is_err());
        assert!(generator(3, 5, &m).is_err());
        assert!(generator(2, 1, &m).is_err());
    }

    #[test]
    fn mixed_plane_commutator_lands_in_stabilizer_block() {
        // [J_{04-type}, J_{14-type}] has vanishing row/column on the last axis
        let m = m5();
        let j40 = generator(0, 4, &m).unwrap();
        let j41 = generator(1, 4, &m).unwrap();
        let c = j40.commutator(&j41);
        for i in 0..5 {
            assert_abs_diff_eq!(c.matrix()[(4, i)], 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(c.matrix()[(i, 4)], 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn so_pq_commutation_pattern_brute_force() {
        // [J_AB, J_CD] = η_BC J_AD − η_AC J_BD − η_BD J_AC + η_AD J_BC,
        // with J antisymmetrized in its indices; checked exactly for dim 5.
        let m = m5();
        let d = m.dim();
        let j = |a: usize, b: usize| -> DMatrix<f64> {
            use std::cmp::Ordering;
            match a.cmp(&b) {
                Ordering::Less => generator(a, b, &m).unwrap().matrix().clone(),
                Ordering::Greater => -generator(b, a, &m).unwrap().matrix().clone(),
                Ordering::Equal => DMatrix::zeros(d, d),
            }
        };
        for a in 0..d {
            for b in (a + 1)..d {
                for c in 0..d {
                    for e in (c + 1)..d {
                        let lhs = j(a, b) * j(c, e) - j(c, e) * j(a, b);
                        let rhs = j(a, e) * m.sign(b) * if b == c { 1.0 } else { 0.0 }
                            - j(b, e) * m.sign(a) * if a == c { 1.0 } else { 0.0 }
                            - j(a, c) * m.sign(b) * if b == e { 1.0 } else { 0.0 }
                            + j(b, c) * m.sign(a) * if a == e { 1.0 } else { 0.0 };
                        assert!((lhs - rhs).norm() == 0.0, "pattern fails at {a}{b},{c}{e}");
                    }
                }
            }
        }
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let m = m5();
        let g = exp(&AlgebraElement::zero(m.clone())).unwrap();
        assert_abs_diff_eq!(
            (g.matrix() - DMatrix::<f64>::identity(5, 5)).norm(),
            0.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn exp_hyperbolic_block_closed_form() {
        // signs (+,−): exp(t·η·J_{01}) is the cosh/sinh block
        let m = Metric::new(vec![1, -1]).unwrap();
        let j = generator(0, 1, &m).unwrap();
        let t = 0.7;
        let g = exp(&j.scale(-t)).unwrap(); // −J_{01} = [[0,1],[1,0]]
        assert_abs_diff_eq!(g.matrix()[(0, 0)], t.cosh(), epsilon = 1e-14);
        assert_abs_diff_eq!(g.matrix()[(0, 1)], t.sinh(), epsilon = 1e-14);
        assert_abs_diff_eq!(g.matrix()[(1, 0)], t.sinh(), epsilon = 1e-14);
    }

    #[test]
    fn exp_inverse_cancels() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = m5();
        for _ in 0..50 {
            let x = random_algebra(&mut rng, &m, 2.0);
            let g = exp(&x).unwrap();
            let gi = exp(&x.scale(-1.0)).unwrap();
            let r = (g.matrix() * gi.matrix() - DMatrix::<f64>::identity(5, 5)).norm();
            assert!(r < 2.0 * TOL_EXP * 100.0, "residual {r}");
        }
    }

    #[test]
    fn exp_lands_in_group_for_random_elements() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let m = m5();
        for _ in 0..1000 {
            let x = random_algebra(&mut rng, &m, 2.0);
            let g = exp(&x).unwrap();
            assert!(g.residual() <= TOL_GROUP);
        }
    }

    #[test]
    fn log_of_identity_is_zero() {
        let m = m5();
        let x = log(&GroupElement::identity(m)).unwrap();
        assert_abs_diff_eq!(x.norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn log_exp_roundtrip_inside_unit_ball() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = m5();
        for _ in 0..200 {
            let x = random_algebra(&mut rng, &m, 1.0);
            let g = exp(&x).unwrap();
            let y = log(&g).unwrap();
            assert!((y.matrix() - x.matrix()).norm() < TOL_LOG, "roundtrip");
        }
    }

    #[test]
    fn log_rejects_rotation_by_pi() {
        let m = Metric::new(vec![1, 1]).unwrap();
        let j = generator(0, 1, &m).unwrap();
        let g = exp(&j.scale(std::f64::consts::PI)).unwrap();
        match log(&g) {
            Err(AmbientError::BranchCut { .. }) => {}
            other => panic!("expected BranchCut, got {other:?}"),
        }
    }

    #[test]
    fn involution_is_homomorphism_and_involutive() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let m = m5();
        let s = Involution::new(vec![1, 1, 1, 1, -1], 4, m.clone()).unwrap();
        for _ in 0..50 {
            let g1 = exp(&random_algebra(&mut rng, &m, 1.0)).unwrap();
            let g2 = exp(&random_algebra(&mut rng, &m, 1.0)).unwrap();
            let lhs = s.apply(&g1.compose(&g2));
            let rhs = s.apply(&g1).compose(&s.apply(&g2));
            // conjugation by a diagonal sign matrix is exact in floating point
            assert_eq!(lhs.matrix(), rhs.matrix());
            let twice = s.apply(&s.apply(&g1));
            assert_eq!(twice.matrix(), g1.matrix());
        }
    }

    #[test]
    fn involution_fixes_stabilizer_and_flips_transvections() {
        let m = m5();
        let s = Involution::new(vec![1, 1, 1, 1, -1], 4, m.clone()).unwrap();
        let h = exp(&generator(0, 1, &m).unwrap().scale(0.4)).unwrap();
        assert_eq!(s.apply(&h).matrix(), h.matrix());
        let x = generator(1, 4, &m).unwrap().scale(0.4);
        let a = exp(&x).unwrap();
        let lhs = s.apply(&a);
        let rhs = exp(&x.scale(-1.0)).unwrap();
        assert!((lhs.matrix() - rhs.matrix()).norm() < 1e-13);
    }
}
