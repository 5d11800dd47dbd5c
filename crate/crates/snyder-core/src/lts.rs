//! Lie triple system of a group decomposition.
//!
//! The involution splits the ambient algebra into eigenspaces `𝔤 = ℓ ⊕ 𝔪`
//! (`s x s = ∓x`). The `−1` eigenspace `ℓ` closes under the trilinear product
//! `⟨X,Y,Z⟩ = [[X,Y],Z]` and is a Lie triple system; the embedding of `ℓ`
//! into `ℓ ⊕ [ℓ,ℓ]` realizes the triple product through the matrix bracket.
//! The same trilinear data is recovered from the smooth loop by finite
//! differences of the associator curve, which is what ties the infinitesimal
//! picture to the factorization loop.
//!
//! All generator arithmetic is exact: the basis matrices are integer-valued
//! and small, so products and commutators incur no rounding.

use crate::ambient::{AlgebraElement, AmbientError};
use crate::kloop::{loop_product, LoopElement, Preset};
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

/// Eigenspace tolerance for constructor validation.
pub const TOL_EIGEN: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LtsError {
    /// Matrix does not lie in the requested eigenspace of the involution.
    #[error("matrix is not in the {0:+} eigenspace (residual {1:.3e})")]
    WrongEigenspace(i8, f64),
    /// Finite-difference step outside the supported range.
    #[error("step size {0} outside [1e-4, 1e-1]")]
    StepOutOfRange(f64),
    #[error(transparent)]
    Ambient(#[from] AmbientError),
}

/// Element of the `−1` eigenspace (`s x s = −x`): a Lie triple system vector.
#[derive(Debug, Clone, PartialEq)]
pub struct LtsElement {
    x: AlgebraElement,
    preset: Preset,
}

/// Element of the `+1` eigenspace (`s x s = +x`): stabilizer algebra vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilizerAlgebraElement {
    x: AlgebraElement,
    preset: Preset,
}

fn eigen_residual(x: &AlgebraElement, preset: Preset, sign: f64) -> f64 {
    let s = preset.involution();
    (s.conjugate(x.matrix()) - x.matrix() * sign).norm()
}

impl LtsElement {
    pub fn new(x: AlgebraElement, preset: Preset) -> Result<Self, LtsError> {
        let r = eigen_residual(&x, preset, -1.0);
        if r > TOL_EIGEN {
            return Err(LtsError::WrongEigenspace(-1, r));
        }
        Ok(LtsElement { x, preset })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        self.x.matrix()
    }

    pub fn algebra_element(&self) -> &AlgebraElement {
        &self.x
    }

    pub fn preset(&self) -> Preset {
        self.preset
    }

    pub fn scale(&self, c: f64) -> LtsElement {
        LtsElement {
            x: self.x.scale(c),
            preset: self.preset,
        }
    }
}

impl StabilizerAlgebraElement {
    pub fn new(x: AlgebraElement, preset: Preset) -> Result<Self, LtsError> {
        let r = eigen_residual(&x, preset, 1.0);
        if r > TOL_EIGEN {
            return Err(LtsError::WrongEigenspace(1, r));
        }
        Ok(StabilizerAlgebraElement { x, preset })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        self.x.matrix()
    }
}

/// Eigenspace projection `X = (X − sXs)/2 + (X + sXs)/2`; recomposition is
/// exact because conjugation by `s` only flips signs.
pub fn split(
    x: &AlgebraElement,
    preset: Preset,
) -> (LtsElement, StabilizerAlgebraElement) {
    let s = preset.involution();
    let sxs = s.conjugate(x.matrix());
    let minus = (x.matrix() - &sxs) * 0.5;
    let plus = (x.matrix() + &sxs) * 0.5;
    let metric = preset.metric();
    (
        LtsElement {
            x: AlgebraElement::new(minus, metric.clone()).expect("projection stays in algebra"),
            preset,
        },
        StabilizerAlgebraElement {
            x: AlgebraElement::new(plus, metric).expect("projection stays in algebra"),
            preset,
        },
    )
}

/// Trilinear product `⟨X,Y,Z⟩ = [[X,Y],Z]`; closure `[ℓ,ℓ] ⊂ 𝔪`,
/// `[𝔪,ℓ] ⊂ ℓ` puts the result back into the `−1` eigenspace.
pub fn trilinear(x: &LtsElement, y: &LtsElement, z: &LtsElement) -> LtsElement {
    let inner = x.x.commutator(&y.x);
    let outer = inner.commutator(&z.x);
    LtsElement::new(outer, x.preset).expect("trilinear closes in the -1 eigenspace")
}

/// The transvection basis of `ℓ` for a preset, as [`LtsElement`]s.
pub fn lts_basis(preset: Preset) -> Vec<LtsElement> {
    preset
        .transvection_generators()
        .into_iter()
        .map(|k| LtsElement::new(k, preset).unwrap())
        .collect()
}

/// Random real combination of the basis.
pub fn sample_lts<R: Rng>(rng: &mut R, preset: Preset, bound: f64) -> LtsElement {
    let basis = lts_basis(preset);
    let metric = preset.metric();
    let mut x = AlgebraElement::zero(metric);
    for b in &basis {
        let c: f64 = StandardNormal.sample(rng);
        x = x.add(&b.algebra_element().scale(c));
    }
    let n = x.norm();
    if n > bound {
        x = x.scale(bound / n);
    }
    LtsElement::new(x, preset).unwrap()
}

/// Summary of an axiom sweep.
#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub antisymmetry: f64,
    pub cyclic: f64,
    pub derivation: f64,
    pub samples: usize,
}

impl AxiomReport {
    pub fn max_residual(&self) -> f64 {
        self.antisymmetry.max(self.cyclic).max(self.derivation)
    }
}

/// Verifies antisymmetry, the cyclic identity, and the derivation identity
/// of the trilinear product over random real samples.
pub fn check_lts_axioms<R: Rng>(rng: &mut R, preset: Preset, samples: usize) -> AxiomReport {
    let mut anti: f64 = 0.0;
    let mut cyc: f64 = 0.0;
    let mut der: f64 = 0.0;
    for _ in 0..samples {
        let x = sample_lts(rng, preset, 1.0);
        let y = sample_lts(rng, preset, 1.0);
        let z = sample_lts(rng, preset, 1.0);
        let u = sample_lts(rng, preset, 1.0);
        let v = sample_lts(rng, preset, 1.0);
        anti = anti.max(
            (trilinear(&x, &y, &z).matrix() + trilinear(&y, &x, &z).matrix()).norm(),
        );
        cyc = cyc.max(
            (trilinear(&x, &y, &z).matrix()
                + trilinear(&y, &z, &x).matrix()
                + trilinear(&z, &x, &y).matrix())
            .norm(),
        );
        // ⟨U,V,⟨Z,X,Y⟩⟩ = ⟨⟨U,V,Z⟩,X,Y⟩ + ⟨Z,⟨U,V,X⟩,Y⟩ + ⟨Z,X,⟨U,V,Y⟩⟩
        let lhs = trilinear(&u, &v, &trilinear(&z, &x, &y));
        let rhs = trilinear(&trilinear(&u, &v, &z), &x, &y)
            .matrix()
            .clone()
            + trilinear(&z, &trilinear(&u, &v, &x), &y).matrix()
            + trilinear(&z, &x, &trilinear(&u, &v, &y)).matrix();
        der = der.max((lhs.matrix() - rhs).norm());
    }
    AxiomReport {
        antisymmetry: anti,
        cyclic: cyc,
        derivation: der,
        samples,
    }
}

/// Outcome of the embedding closure sweep over the full generator basis.
#[derive(Debug, Clone)]
pub struct ClosureReport {
    /// `[ℓ,ℓ] ⊆ 𝔪`, `[𝔪,ℓ] ⊆ ℓ`, `[𝔪,𝔪] ⊆ 𝔪`, exact.
    pub closure_exact: bool,
    /// `[[X,Y],Z] = ⟨X,Y,Z⟩` on the basis, exact.
    pub bracket_matches_trilinear: bool,
    /// Residual of `[X_μ, X_ν] = (1/κ²)·(stabilizer generator)` for the
    /// κ-scaled coordinates.
    pub scaled_commutator_residual: f64,
}

/// Exhaustive closure check of the eigenspace decomposition on the preset's
/// generator basis. All arithmetic here is exact (small integer matrices).
pub fn jacobson_closure_check(preset: Preset, kappa: f64) -> ClosureReport {
    let metric = preset.metric();
    let dim = metric.dim();
    let mut ell: Vec<AlgebraElement> = Vec::new();
    let mut stab: Vec<AlgebraElement> = Vec::new();
    for a in 0..dim {
        for b in (a + 1)..dim {
            let j = crate::ambient::generator(a, b, &metric).unwrap();
            let (lpart, mpart) = split(&j, preset);
            if lpart.matrix().norm() > 0.0 {
                ell.push(lpart.x.clone());
            }
            if mpart.matrix().norm() > 0.0 {
                stab.push(mpart.x.clone());
            }
        }
    }
    let mut closure = true;
    let check = |v: &AlgebraElement, sign: f64| -> bool {
        eigen_residual(v, preset, sign) == 0.0
    };
    for x in &ell {
        for y in &ell {
            closure &= check(&x.commutator(y), 1.0);
        }
        for m in &stab {
            closure &= check(&m.commutator(x), -1.0);
        }
    }
    for m1 in &stab {
        for m2 in &stab {
            closure &= check(&m1.commutator(m2), 1.0);
        }
    }
    let mut bracket_ok = true;
    for x in &ell {
        for y in &ell {
            for z in &ell {
                let lhs = x.commutator(y).commutator(z);
                let tri = trilinear(
                    &LtsElement::new(x.clone(), preset).unwrap(),
                    &LtsElement::new(y.clone(), preset).unwrap(),
                    &LtsElement::new(z.clone(), preset).unwrap(),
                );
                bracket_ok &= lhs.matrix() == tri.matrix();
            }
        }
    }
    // κ-scaled coordinates: [X_μ, X_ν] = (1/κ²)[K_μ, K_ν]
    let mut scaled_res: f64 = 0.0;
    for x in &ell {
        for y in &ell {
            let lhs = x.scale(1.0 / kappa).commutator(&y.scale(1.0 / kappa));
            let rhs = x.commutator(y).scale(1.0 / (kappa * kappa));
            scaled_res = scaled_res.max((lhs.matrix() - rhs.matrix()).norm());
        }
    }
    ClosureReport {
        closure_exact: closure,
        bracket_matches_trilinear: bracket_ok,
        scaled_commutator_residual: scaled_res,
    }
}

/// Finite-difference estimates extracted from the smooth loop.
#[derive(Debug, Clone)]
pub struct LoopDerivativeEstimates {
    /// Second mixed derivative of `(a₁·a₂)·(a₂·a₁)⁻¹`; the bilinear bracket,
    /// which vanishes for this loop family.
    pub bol_bracket: DMatrix<f64>,
    /// `−2 ×` third mixed derivative of `((a₁·a₂)·a₃)·(a₁·(a₂·a₃))⁻¹`; the
    /// trilinear product.
    pub trilinear: DMatrix<f64>,
}

fn loop_from_parameter(x: &LtsElement, t: f64) -> LoopElement {
    let g = crate::ambient::exp(&x.algebra_element().scale(t)).unwrap();
    LoopElement::new(g, x.preset()).expect("small transvections stay in chart")
}

/// Central finite differences of the commutator curve and the associator
/// curve. The associator's third mixed derivative carries the trilinear
/// product with weight `−1/2`; the returned estimate is already rescaled,
/// so it converges to [`trilinear`] at rate `O(h²)`.
pub fn loop_derivative_products(
    x1: &LtsElement,
    x2: &LtsElement,
    x3: &LtsElement,
    h: f64,
) -> Result<LoopDerivativeEstimates, LtsError> {
    if !(1e-4..=1e-1).contains(&h) {
        return Err(LtsError::StepOutOfRange(h));
    }
    let dim = x1.preset().dim();
    // (a₁·a₂)·(a₂·a₁)⁻¹, 2×2 central stencil
    let comm_curve = |t1: f64, t2: f64| -> DMatrix<f64> {
        let a1 = loop_from_parameter(x1, t1);
        let a2 = loop_from_parameter(x2, t2);
        let ab = loop_product(&a1, &a2).unwrap().0;
        let ba = loop_product(&a2, &a1).unwrap().0;
        ab.group_element().matrix() * ba.group_element().inverse().matrix()
    };
    let mut bol = DMatrix::<f64>::zeros(dim, dim);
    for e1 in [1.0f64, -1.0] {
        for e2 in [1.0f64, -1.0] {
            bol += comm_curve(e1 * h, e2 * h) * (e1 * e2);
        }
    }
    bol /= 4.0 * h * h;

    // ((a₁·a₂)·a₃)·(a₁·(a₂·a₃))⁻¹, 2×2×2 central stencil
    let assoc_curve = |t1: f64, t2: f64, t3: f64| -> DMatrix<f64> {
        let a1 = loop_from_parameter(x1, t1);
        let a2 = loop_from_parameter(x2, t2);
        let a3 = loop_from_parameter(x3, t3);
        let ab = loop_product(&a1, &a2).unwrap().0;
        let ab_c = loop_product(&ab, &a3).unwrap().0;
        let bc = loop_product(&a2, &a3).unwrap().0;
        let a_bc = loop_product(&a1, &bc).unwrap().0;
        ab_c.group_element().matrix() * a_bc.group_element().inverse().matrix()
    };
    let mut assoc = DMatrix::<f64>::zeros(dim, dim);
    for e1 in [1.0f64, -1.0] {
        for e2 in [1.0f64, -1.0] {
            for e3 in [1.0f64, -1.0] {
                assoc += assoc_curve(e1 * h, e2 * h, e3 * h) * (e1 * e2 * e3);
            }
        }
    }
    assoc /= 8.0 * h * h * h;
    Ok(LoopDerivativeEstimates {
        bol_bracket: bol,
        trilinear: assoc * -2.0,
    })
}
