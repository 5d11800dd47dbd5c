//! Star product and sampled scalar-field machinery.
//!
//! The deformed product on functions is defined through plane waves:
//! `e^{ip·x} * e^{iq·x} = e^{i(p⊕q)·x}` with `⊕` the exact momentum sum.
//! Its entire content at polynomial level sits in the Taylor data of `⊕` at
//! the origin, which [`expand_sum`] extracts numerically: the linear part is
//! the identity in both slots, every quadratic coefficient vanishes, and the
//! first deformation is cubic, of order `κ^{−2}`.
//!
//! Monomial star products are evaluated from that expansion by a truncated
//! jet exponential; products nest from the right (`x_μ ▷ (x_ν ▷ f)`), which
//! matters because the product is not associative.
//!
//! The sampled field-theory pieces (convolution at the identity, the kinetic
//! and cubic action terms, the symmetry checks) are deterministic seeded
//! Monte-Carlo estimates over the chart measure `½ (1 − dot_mm(p,p)/κ²)^{-5/2} d⁴p`.

use crate::ambient::GroupElement;
use crate::snyder::{
    dot_mm, left_divide, lorentz_act, negate, right_divide, sum_closed_form, sum_exact,
    sum_first_order, Momentum, SnyderError,
};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

/// Extracted coefficients smaller than this are snapped to zero.
pub const TOL_COEFF: f64 = 1e-7;
/// Density cutoff excluding the near-boundary region of the chart measure.
pub const DENSITY_CUTOFF: f64 = 1e6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StarError {
    /// Monomial star products are supported to total degree 3 only.
    #[error("total degree {0} exceeds the supported expansion order 3")]
    Degree(usize),
    /// Finite-difference step outside the supported range.
    #[error("step size {0} outside [1e-4, 1e-2]")]
    StepOutOfRange(f64),
    #[error(transparent)]
    Snyder(#[from] SnyderError),
}

// ---------------------------------------------------------------------------
// Taylor data of the sum
// ---------------------------------------------------------------------------

/// Cubic Taylor data of `(p, q) ↦ p ⊕ q` at the origin.
///
/// Variable slots 0..4 are `p₀..p₃`, slots 4..8 are `q₀..q₃`. The `cubic`
/// map sends a sorted slot triple to the polynomial coefficient vector of
/// the four output components (already divided by monomial multiplicities).
#[derive(Debug, Clone)]
pub struct SumExpansion {
    pub kappa: f64,
    /// `linear[0]` acts on `p`, `linear[1]` on `q`; both are the identity.
    pub linear: [[[f64; 4]; 4]; 2],
    pub cubic: BTreeMap<[u8; 3], [f64; 4]>,
    /// Largest deviation between the factorization path and the closed-form
    /// path over all extracted coefficients.
    pub cross_check_residual: f64,
}

fn eval_at(kappa: f64, v: &[f64; 8], f: &dyn Fn(&Momentum, &Momentum) -> [f64; 4]) -> [f64; 4] {
    let p = Momentum {
        p: [v[0], v[1], v[2], v[3]],
        kappa,
    };
    let q = Momentum {
        p: [v[4], v[5], v[6], v[7]],
        kappa,
    };
    f(&p, &q)
}

/// Third partial derivative of `f` at 0 for the sorted slot triple `m`,
/// central stencils, step `h`.
fn third_derivative(
    kappa: f64,
    m: [u8; 3],
    h: f64,
    f: &dyn Fn(&Momentum, &Momentum) -> [f64; 4],
) -> [f64; 4] {
    let mut out = [0.0; 4];
    let (i, j, k) = (m[0] as usize, m[1] as usize, m[2] as usize);
    let mut add = |coeff: f64, steps: &[(usize, f64)]| {
        let mut v = [0.0; 8];
        for &(slot, dv) in steps {
            v[slot] += dv;
        }
        let y = eval_at(kappa, &v, f);
        for c in 0..4 {
            out[c] += coeff * y[c];
        }
    };
    if i != j && j != k {
        // all distinct
        for e1 in [1.0f64, -1.0] {
            for e2 in [1.0f64, -1.0] {
                for e3 in [1.0f64, -1.0] {
                    add(
                        e1 * e2 * e3 / (8.0 * h * h * h),
                        &[(i, e1 * h), (j, e2 * h), (k, e3 * h)],
                    );
                }
            }
        }
    } else if i == j && j == k {
        // ∂³/∂x³
        for (c, s) in [(1.0, 2.0), (-2.0, 1.0), (2.0, -1.0), (-1.0, -2.0)] {
            add(c / (2.0 * h * h * h), &[(i, s * h)]);
        }
    } else {
        // one repeated pair; x is the repeated slot, y the lone one
        let (x, y) = if i == j { (i, k) } else { (j, i) };
        for ey in [1.0f64, -1.0] {
            for (c, s) in [(1.0, 1.0), (-2.0, 0.0), (1.0, -1.0)] {
                add(
                    ey * c / (2.0 * h * h * h),
                    &[(x, s * h), (y, ey * h)],
                );
            }
        }
    }
    out
}

fn first_derivative(
    kappa: f64,
    slot: usize,
    h: f64,
    f: &dyn Fn(&Momentum, &Momentum) -> [f64; 4],
) -> [f64; 4] {
    let mut vp = [0.0; 8];
    vp[slot] = h;
    let mut vm = [0.0; 8];
    vm[slot] = -h;
    let a = eval_at(kappa, &vp, f);
    let b = eval_at(kappa, &vm, f);
    core::array::from_fn(|c| (a[c] - b[c]) / (2.0 * h))
}

fn second_derivative(
    kappa: f64,
    i: usize,
    j: usize,
    h: f64,
    f: &dyn Fn(&Momentum, &Momentum) -> [f64; 4],
) -> [f64; 4] {
    let mut out = [0.0; 4];
    if i == j {
        for (c, s) in [(1.0, 1.0), (-2.0, 0.0), (1.0, -1.0)] {
            let mut v = [0.0; 8];
            v[i] = s * h;
            let y = eval_at(kappa, &v, f);
            for k in 0..4 {
                out[k] += c * y[k] / (h * h);
            }
        }
    } else {
        for e1 in [1.0f64, -1.0] {
            for e2 in [1.0f64, -1.0] {
                let mut v = [0.0; 8];
                v[i] = e1 * h;
                v[j] = e2 * h;
                let y = eval_at(kappa, &v, f);
                for k in 0..4 {
                    out[k] += e1 * e2 * y[k] / (4.0 * h * h);
                }
            }
        }
    }
    out
}

/// Multiplicity normalization `m!` of a sorted slot triple.
fn multiplicity(m: [u8; 3]) -> f64 {
    if m[0] == m[1] && m[1] == m[2] {
        6.0
    } else if m[0] == m[1] || m[1] == m[2] {
        2.0
    } else {
        1.0
    }
}

fn sorted_triples() -> Vec<[u8; 3]> {
    let mut out = Vec::new();
    for i in 0..8u8 {
        for j in i..8 {
            for k in j..8 {
                out.push([i, j, k]);
            }
        }
    }
    out
}

/// Extracts cubic polynomial coefficients of a map by Richardson-refined
/// central differences. Exact for polynomial inputs (up to rounding).
fn extract_cubic_table(
    kappa: f64,
    h: f64,
    f: &dyn Fn(&Momentum, &Momentum) -> [f64; 4],
) -> BTreeMap<[u8; 3], [f64; 4]> {
    let mut out = BTreeMap::new();
    for m in sorted_triples() {
        let c1 = third_derivative(kappa, m, h, f);
        let c2 = third_derivative(kappa, m, h / 2.0, f);
        let mult = multiplicity(m);
        let coeff: [f64; 4] =
            core::array::from_fn(|c| (4.0 * c2[c] - c1[c]) / 3.0 / mult);
        out.insert(m, coeff);
    }
    out
}

/// Numerical Taylor extraction of the exact sum at the origin, to total
/// degree 3, cross-validated against the closed-form path.
///
/// Verifies on the way that the linear part is the identity in both slots,
/// that all quadratic coefficients vanish, and that pure-`p` cubic terms
/// vanish (`p ⊕ 0 = p` exactly); coefficients below [`TOL_COEFF`] snap to
/// zero.
pub fn expand_sum(kappa: f64, h: f64) -> Result<SumExpansion, StarError> {
    if !(1e-4..=1e-2).contains(&h) {
        return Err(StarError::StepOutOfRange(h));
    }
    let hs = h * kappa;
    let exact = |p: &Momentum, q: &Momentum| sum_exact(p, q).expect("chart-safe near origin").p;
    let closed =
        |p: &Momentum, q: &Momentum| sum_closed_form(p, q).expect("chart-safe near origin").0.p;

    let mut linear = [[[0.0; 4]; 4]; 2];
    for slot in 0..8usize {
        let d = first_derivative(kappa, slot, hs, &exact);
        for c in 0..4 {
            linear[slot / 4][c][slot % 4] = snap(d[c]);
        }
    }
    for (block, lin) in linear.iter().enumerate() {
        for c in 0..4 {
            for v in 0..4 {
                let expect = if c == v { 1.0 } else { 0.0 };
                debug_assert!(
                    (lin[c][v] - expect).abs() < TOL_COEFF,
                    "linear block {block} not the identity"
                );
            }
        }
    }
    // quadratic coefficients all vanish
    for i in 0..8usize {
        for j in i..8 {
            let d = second_derivative(kappa, i, j, hs, &exact);
            for v in d {
                debug_assert!(v.abs() < 1e-5, "unexpected quadratic term {v}");
            }
        }
    }
    let cubic_exact = extract_cubic_table(kappa, hs, &exact);
    let cubic_closed = extract_cubic_table(kappa, hs, &closed);
    let mut cross: f64 = 0.0;
    let mut cubic = BTreeMap::new();
    for (m, ce) in &cubic_exact {
        let cc = cubic_closed[m];
        for c in 0..4 {
            cross = cross.max((ce[c] - cc[c]).abs());
        }
        let snapped: [f64; 4] = core::array::from_fn(|c| snap(ce[c]));
        if snapped.iter().any(|&v| v != 0.0) {
            // pure-p monomials must not appear
            debug_assert!(
                m.iter().any(|&s| s >= 4),
                "pure-p cubic term survived at {m:?}"
            );
            cubic.insert(*m, snapped);
        }
    }
    Ok(SumExpansion {
        kappa,
        linear,
        cubic,
        cross_check_residual: cross,
    })
}

fn snap(v: f64) -> f64 {
    if v.abs() < TOL_COEFF {
        0.0
    } else {
        v
    }
}

impl SumExpansion {
    /// Extracts the cubic coefficient table of the quoted first-order
    /// formula with the same stencils, for coefficient-level comparison.
    pub fn reference_first_order(kappa: f64, h: f64) -> BTreeMap<[u8; 3], [f64; 4]> {
        let hs = h * kappa;
        let f = |p: &Momentum, q: &Momentum| sum_first_order(p, q).expect("polynomial").p;
        extract_cubic_table(kappa, hs, &f)
            .into_iter()
            .map(|(m, c)| (m, core::array::from_fn(|i| snap(c[i]))))
            .collect()
    }

    /// Evaluates the truncated expansion.
    pub fn evaluate(&self, p: &[f64; 4], q: &[f64; 4]) -> [f64; 4] {
        let vars = [p[0], p[1], p[2], p[3], q[0], q[1], q[2], q[3]];
        let mut out = [0.0; 4];
        for c in 0..4 {
            for v in 0..4 {
                out[c] += self.linear[0][c][v] * p[v] + self.linear[1][c][v] * q[v];
            }
        }
        for (m, coeff) in &self.cubic {
            let prod = vars[m[0] as usize] * vars[m[1] as usize] * vars[m[2] as usize];
            for c in 0..4 {
                out[c] += coeff[c] * prod;
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Plane waves
// ---------------------------------------------------------------------------

/// Finite combination of plane waves, canonicalized by momentum.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneWaveSum {
    terms: Vec<(Complex64, Momentum)>,
}

impl PlaneWaveSum {
    /// Builds and canonicalizes: momenta are chart-validated, equal momenta
    /// merged, zero coefficients dropped.
    pub fn new(terms: Vec<(Complex64, Momentum)>) -> Result<Self, StarError> {
        for (_, m) in &terms {
            m.gamma().map_err(StarError::Snyder)?;
        }
        let mut sorted = terms;
        sorted.sort_by(|a, b| {
            a.1.p
                .iter()
                .map(|v| v.to_bits())
                .cmp(b.1.p.iter().map(|v| v.to_bits()))
        });
        let mut merged: Vec<(Complex64, Momentum)> = Vec::new();
        for (c, m) in sorted {
            if let Some(last) = merged.last_mut() {
                if last.1.p == m.p && last.1.kappa == m.kappa {
                    last.0 += c;
                    continue;
                }
            }
            merged.push((c, m));
        }
        merged.retain(|(c, _)| c.norm() > 0.0);
        Ok(PlaneWaveSum { terms: merged })
    }

    pub fn single(momentum: Momentum) -> Result<Self, StarError> {
        PlaneWaveSum::new(vec![(Complex64::new(1.0, 0.0), momentum)])
    }

    pub fn terms(&self) -> &[(Complex64, Momentum)] {
        &self.terms
    }
}

/// Star product of plane-wave sums: bilinear extension of
/// `wave(p) * wave(q) = wave(p ⊕ q)`.
pub fn star_plane_waves(w1: &PlaneWaveSum, w2: &PlaneWaveSum) -> Result<PlaneWaveSum, StarError> {
    let mut terms = Vec::new();
    for (c1, p) in &w1.terms {
        for (c2, q) in &w2.terms {
            let s = sum_exact(p, q)?;
            terms.push((c1 * c2, s));
        }
    }
    PlaneWaveSum::new(terms)
}

// ---------------------------------------------------------------------------
// Coordinate polynomials and the monomial star product
// ---------------------------------------------------------------------------

/// Finitely supported polynomial in the commuting symbols `x₀..x₃` with
/// complex coefficients, in canonical sorted-monomial form.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CoordinatePolynomial {
    terms: BTreeMap<Vec<u8>, Complex64>,
}

impl CoordinatePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        let mut t = BTreeMap::new();
        if c.norm() > 0.0 {
            t.insert(Vec::new(), c);
        }
        CoordinatePolynomial { terms: t }
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    /// The coordinate monomial `x_{i₁}·…·x_{i_k}` (indices 0..4).
    pub fn monomial(indices: &[u8]) -> Self {
        assert!(indices.iter().all(|&i| i < 4), "coordinate index out of range");
        let mut key = indices.to_vec();
        key.sort_unstable();
        let mut t = BTreeMap::new();
        t.insert(key, Complex64::new(1.0, 0.0));
        CoordinatePolynomial { terms: t }
    }

    pub fn coordinate(i: u8) -> Self {
        Self::monomial(&[i])
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u8>, Complex64> {
        &self.terms
    }

    pub fn coefficient(&self, monomial: &[u8]) -> Complex64 {
        let mut key = monomial.to_vec();
        key.sort_unstable();
        self.terms
            .get(&key)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|k| k.len()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut t = self.terms.clone();
        for (k, v) in &other.terms {
            *t.entry(k.clone()).or_insert(Complex64::new(0.0, 0.0)) += v;
        }
        t.retain(|_, v| v.norm() > 0.0);
        CoordinatePolynomial { terms: t }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        if c.norm() == 0.0 {
            return Self::zero();
        }
        CoordinatePolynomial {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Pointwise (commutative) product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut t: BTreeMap<Vec<u8>, Complex64> = BTreeMap::new();
        for (k1, v1) in &self.terms {
            for (k2, v2) in &other.terms {
                let mut k = k1.clone();
                k.extend_from_slice(k2);
                k.sort_unstable();
                *t.entry(k).or_insert(Complex64::new(0.0, 0.0)) += v1 * v2;
            }
        }
        t.retain(|_, v| v.norm() > 0.0);
        CoordinatePolynomial { terms: t }
    }

    /// Drops coefficients with magnitude below `tol`.
    pub fn snapped(&self, tol: f64) -> Self {
        CoordinatePolynomial {
            terms: self
                .terms
                .iter()
                .filter(|(_, v)| v.norm() >= tol)
                .map(|(k, v)| (k.clone(), *v))
                .collect(),
        }
    }

    pub fn max_coefficient_norm(&self) -> f64 {
        self.terms.values().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Polynomial jet in the eight momentum slots with coordinate-polynomial
/// coefficients, truncated at total momentum degree 3.
#[derive(Debug, Clone, Default)]
struct MomentumJet {
    terms: BTreeMap<Vec<u8>, CoordinatePolynomial>,
}

impl MomentumJet {
    fn one() -> Self {
        let mut t = BTreeMap::new();
        t.insert(Vec::new(), CoordinatePolynomial::one());
        MomentumJet { terms: t }
    }

    fn add_term(&mut self, mono: Vec<u8>, poly: CoordinatePolynomial) {
        let entry = self
            .terms
            .entry(mono)
            .or_insert_with(CoordinatePolynomial::zero);
        *entry = entry.add(&poly);
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = MomentumJet::default();
        for (k1, v1) in &self.terms {
            for (k2, v2) in &other.terms {
                if k1.len() + k2.len() > 3 {
                    continue;
                }
                let mut k = k1.clone();
                k.extend_from_slice(k2);
                k.sort_unstable();
                out.add_term(k, v1.mul(v2));
            }
        }
        out
    }

    fn coefficient(&self, mono: &[u8]) -> CoordinatePolynomial {
        let mut key = mono.to_vec();
        key.sort_unstable();
        self.terms
            .get(&key)
            .cloned()
            .unwrap_or_else(CoordinatePolynomial::zero)
    }
}

/// The jet of `exp(i s(p,q)·x)` truncated at momentum degree 3, where `s`
/// carries the expansion's linear and cubic data, with `s·x` contracted by
/// the plain Euclidean pairing of components.
fn wave_jet(expansion: &SumExpansion) -> MomentumJet {
    // S = i * s(p,q)·x as a jet
    let mut s = MomentumJet::default();
    let i = Complex64::new(0.0, 1.0);
    for slot in 0..8usize {
        let mut poly = CoordinatePolynomial::zero();
        for c in 0..4usize {
            let coeff = expansion.linear[slot / 4][c][slot % 4];
            if coeff != 0.0 {
                poly = poly.add(
                    &CoordinatePolynomial::coordinate(c as u8).scale(i * coeff),
                );
            }
        }
        if poly != CoordinatePolynomial::zero() {
            s.add_term(vec![slot as u8], poly);
        }
    }
    for (m, coeff) in &expansion.cubic {
        let mut poly = CoordinatePolynomial::zero();
        for c in 0..4usize {
            if coeff[c] != 0.0 {
                poly = poly.add(
                    &CoordinatePolynomial::coordinate(c as u8).scale(i * coeff[c]),
                );
            }
        }
        if poly != CoordinatePolynomial::zero() {
            s.add_term(m.to_vec(), poly);
        }
    }
    // exp(S) = 1 + S + S²/2 + S³/6 (S has no constant term; degree caps at 3)
    let s2 = s.mul(&s);
    let s3 = s2.mul(&s);
    let mut out = MomentumJet::one();
    for (k, v) in &s.terms {
        out.add_term(k.clone(), v.clone());
    }
    for (k, v) in &s2.terms {
        out.add_term(k.clone(), v.scale(Complex64::new(0.5, 0.0)));
    }
    for (k, v) in &s3.terms {
        out.add_term(k.clone(), v.scale(Complex64::new(1.0 / 6.0, 0.0)));
    }
    out
}

fn factorial_of_multiplicities(mono: &[u8]) -> f64 {
    let mut fact = 1.0;
    let mut run = 1usize;
    for w in 1..=mono.len() {
        if w < mono.len() && mono[w] == mono[w - 1] {
            run += 1;
        } else {
            fact *= match run {
                1 => 1.0,
                2 => 2.0,
                3 => 6.0,
                _ => unreachable!("degree ≤ 3"),
            };
            run = 1;
        }
    }
    fact
}

/// Star product of two coordinate monomials through the expansion: the left
/// factor differentiates the `p` slots, the right factor the `q` slots of
/// the wave jet at the origin. Right-nested products are obtained by feeding
/// an earlier result in as the right factor.
fn star_monomial_pair(
    m1: &[u8],
    m2: &[u8],
    jet: &MomentumJet,
) -> Result<CoordinatePolynomial, StarError> {
    let deg = m1.len() + m2.len();
    if deg > 3 {
        return Err(StarError::Degree(deg));
    }
    // slots: p_μ = μ, q_μ = 4 + μ
    let mut mono: Vec<u8> = m1.to_vec();
    mono.extend(m2.iter().map(|&v| v + 4));
    mono.sort_unstable();
    let coeff = jet.coefficient(&mono);
    let norm = factorial_of_multiplicities(&mono);
    // D^m = m! × jet coefficient; each coordinate factor contributes (−i)
    let pre = Complex64::new(0.0, -1.0).powu(deg as u32) * norm;
    Ok(coeff.scale(pre))
}

/// Star product of coordinate polynomials, bilinear over their terms.
///
/// The result total degree must stay within the expansion order (3).
pub fn star_monomials(
    f: &CoordinatePolynomial,
    g: &CoordinatePolynomial,
    expansion: &SumExpansion,
) -> Result<CoordinatePolynomial, StarError> {
    let deg = f.degree() + g.degree();
    if deg > 3 {
        return Err(StarError::Degree(deg));
    }
    let jet = wave_jet(expansion);
    let mut out = CoordinatePolynomial::zero();
    for (m1, c1) in f.terms() {
        for (m2, c2) in g.terms() {
            let part = star_monomial_pair(m1, m2, &jet)?;
            out = out.add(&part.scale(c1 * c2));
        }
    }
    Ok(out)
}

/// `[x_μ, x_ν]_* = x_μ*x_ν − x_ν*x_μ`.
pub fn star_commutator(
    mu: u8,
    nu: u8,
    expansion: &SumExpansion,
) -> Result<CoordinatePolynomial, StarError> {
    let xmu = CoordinatePolynomial::coordinate(mu);
    let xnu = CoordinatePolynomial::coordinate(nu);
    let ab = star_monomials(&xmu, &xnu, expansion)?;
    let ba = star_monomials(&xnu, &xmu, expansion)?;
    Ok(ab.sub(&ba))
}

/// `⟨x_μ, x_ν, x_α⟩_* = x_μ*(x_ν*x_α) − x_ν*(x_μ*x_α)`, right-nested.
pub fn star_triple(
    mu: u8,
    nu: u8,
    alpha: u8,
    expansion: &SumExpansion,
) -> Result<CoordinatePolynomial, StarError> {
    let inner1 = star_monomials(
        &CoordinatePolynomial::coordinate(nu),
        &CoordinatePolynomial::coordinate(alpha),
        expansion,
    )?;
    let t1 = star_monomials(&CoordinatePolynomial::coordinate(mu), &inner1, expansion)?;
    let inner2 = star_monomials(
        &CoordinatePolynomial::coordinate(mu),
        &CoordinatePolynomial::coordinate(alpha),
        expansion,
    )?;
    let t2 = star_monomials(&CoordinatePolynomial::coordinate(nu), &inner2, expansion)?;
    Ok(t1.sub(&t2))
}

// ---------------------------------------------------------------------------
// Sampled field theory
// ---------------------------------------------------------------------------

/// Built-in momentum-space test profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Profile {
    /// `exp(−|p − center|² / (2 width²))` in chart coordinates (Euclidean
    /// norm, so the profile is integrable against the chart measure).
    Gaussian { center: [f64; 4], width: f64 },
    /// The constant function 1.
    One,
}

impl Profile {
    pub fn eval(&self, p: &[f64; 4]) -> f64 {
        match self {
            Profile::Gaussian { center, width } => {
                let d2: f64 = (0..4).map(|i| (p[i] - center[i]) * (p[i] - center[i])).sum();
                (-d2 / (2.0 * width * width)).exp()
            }
            Profile::One => 1.0,
        }
    }

    /// Composes with a linear momentum map: `(φ∘Λ)(p) = φ(Λ p)`.
    pub fn eval_composed(&self, u: &GroupElement, p: &Momentum) -> f64 {
        match lorentz_act(u, p) {
            Ok(up) => self.eval(&up.p),
            Err(_) => 0.0,
        }
    }
}

/// Chart measure density `½ (1 − dot_mm(p,p)/κ²)^{−5/2}`, with the
/// near-boundary region above [`DENSITY_CUTOFF`] excluded.
pub fn measure_density(p: &[f64; 4], kappa: f64) -> Option<f64> {
    let arg = 1.0 - dot_mm(p, p) / (kappa * kappa);
    if arg <= 0.0 {
        return None;
    }
    let d = 0.5 * arg.powf(-2.5);
    if d > DENSITY_CUTOFF {
        None
    } else {
        Some(d)
    }
}

/// A seeded Monte-Carlo estimate with its statistics.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: usize,
    /// Fraction of draws excluded by the chart boundary or density cutoff.
    pub excluded_fraction: f64,
}

/// Kahan-compensated accumulator for mean and variance.
#[derive(Debug, Default, Clone)]
struct Accumulator {
    sum: f64,
    sum_c: f64,
    sumsq: f64,
    sumsq_c: f64,
    n: usize,
}

impl Accumulator {
    fn push(&mut self, v: f64) {
        let y = v - self.sum_c;
        let t = self.sum + y;
        self.sum_c = (t - self.sum) - y;
        self.sum = t;
        let y2 = v * v - self.sumsq_c;
        let t2 = self.sumsq + y2;
        self.sumsq_c = (t2 - self.sumsq) - y2;
        self.sumsq = t2;
        self.n += 1;
    }

    fn estimate(&self, excluded: usize) -> McEstimate {
        let n = self.n as f64;
        let mean = self.sum / n;
        let var = (self.sumsq / n - mean * mean).max(0.0);
        McEstimate {
            value: mean,
            std_error: (var / n).sqrt(),
            samples: self.n,
            excluded_fraction: excluded as f64 / n,
        }
    }
}

fn gaussian_pdf(p: &[f64; 4], center: &[f64; 4], sigma: f64) -> f64 {
    let d2: f64 = (0..4).map(|i| (p[i] - center[i]) * (p[i] - center[i])).sum();
    let norm = (2.0 * std::f64::consts::PI * sigma * sigma).powi(2);
    (-d2 / (2.0 * sigma * sigma)).exp() / norm
}

fn draw(rng: &mut ChaCha8Rng, center: &[f64; 4], sigma: f64) -> [f64; 4] {
    core::array::from_fn(|i| {
        let z: f64 = StandardNormal.sample(rng);
        center[i] + sigma * z
    })
}

fn proposal_center(profile: &Profile) -> ([f64; 4], f64) {
    match profile {
        Profile::Gaussian { center, width } => (*center, *width),
        Profile::One => ([0.0; 4], 1.0),
    }
}

/// Monte-Carlo estimate of `∫ [dp] φ₁(p) φ₂(⊖p)`: the convolution of two
/// profiles evaluated at the loop identity.
pub fn convolve_at_identity(
    phi1: &Profile,
    phi2: &Profile,
    kappa: f64,
    n_samples: usize,
    seed: u64,
) -> McEstimate {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (c, w) = proposal_center(phi1);
    let mut acc = Accumulator::default();
    let mut excluded = 0usize;
    for _ in 0..n_samples {
        let p = draw(&mut rng, &c, w);
        match measure_density(&p, kappa) {
            Some(dens) => {
                let neg = [-p[0], -p[1], -p[2], -p[3]];
                let v = dens * phi1.eval(&p) * phi2.eval(&neg) / gaussian_pdf(&p, &c, w);
                acc.push(v);
            }
            None => {
                excluded += 1;
                acc.push(0.0);
            }
        }
    }
    acc.estimate(excluded)
}

/// Monte-Carlo estimate of the kinetic action term
/// `∫ [dp] (p² + m²) φ(p) φ(⊖p)` with `p²` in the spacelike-positive
/// reading (`−dot_mm`).
pub fn propagating_term(
    profile: &Profile,
    mass: f64,
    kappa: f64,
    n_samples: usize,
    seed: u64,
) -> McEstimate {
    propagating_term_composed(profile, None, mass, kappa, n_samples, seed)
}

fn propagating_term_composed(
    profile: &Profile,
    lorentz: Option<&GroupElement>,
    mass: f64,
    kappa: f64,
    n_samples: usize,
    seed: u64,
) -> McEstimate {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (c, w) = proposal_center(profile);
    let mut acc = Accumulator::default();
    let mut excluded = 0usize;
    for _ in 0..n_samples {
        let p = draw(&mut rng, &c, w);
        match (measure_density(&p, kappa), Momentum::new(p, kappa)) {
            (Some(dens), Ok(pm)) => {
                let neg = negate(&pm);
                let (f1, f2) = match lorentz {
                    None => (profile.eval(&pm.p), profile.eval(&neg.p)),
                    Some(u) => (
                        profile.eval_composed(u, &pm),
                        profile.eval_composed(u, &neg),
                    ),
                };
                let p2 = -dot_mm(&pm.p, &pm.p);
                let v = dens * (p2 + mass * mass) * f1 * f2 / gaussian_pdf(&p, &c, w);
                acc.push(v);
            }
            _ => {
                excluded += 1;
                acc.push(0.0);
            }
        }
    }
    acc.estimate(excluded)
}

/// Which way the cubic convolution is bracketed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Bracketing {
    /// `φ∘(φ∘φ)(e)`, first slot solved as `p₁ = ⊖(p₂ ⊕ p₃)`.
    Inner,
    /// `(φ∘φ)∘φ(e)`, first slot solved by right division
    /// `p₁ = (⊖p₃) / p₂`.
    Outer,
}

/// Joint Monte-Carlo evaluation of both bracketings of the cubic term over
/// common random numbers, together with their per-sample difference.
pub struct InteractionEstimates {
    pub inner: McEstimate,
    pub outer: McEstimate,
    pub difference: McEstimate,
}

/// Estimates `∫ [dp₂][dp₃] φ(p₁(p₂,p₃)) φ(p₂) φ(p₃)` for both bracketings.
pub fn interaction_terms(
    profile: &Profile,
    kappa: f64,
    n_samples: usize,
    seed: u64,
) -> InteractionEstimates {
    interaction_terms_composed(profile, None, kappa, n_samples, seed)
}

fn interaction_terms_composed(
    profile: &Profile,
    lorentz: Option<&GroupElement>,
    kappa: f64,
    n_samples: usize,
    seed: u64,
) -> InteractionEstimates {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (c, w) = proposal_center(profile);
    let mut acc_i = Accumulator::default();
    let mut acc_o = Accumulator::default();
    let mut acc_d = Accumulator::default();
    let mut excluded = 0usize;
    let eval = |m: &Momentum| -> f64 {
        match lorentz {
            None => profile.eval(&m.p),
            Some(u) => profile.eval_composed(u, m),
        }
    };
    for _ in 0..n_samples {
        let p2r = draw(&mut rng, &c, w);
        let p3r = draw(&mut rng, &c, w);
        let contribution = (|| -> Option<(f64, f64, f64)> {
            let d2 = measure_density(&p2r, kappa)?;
            let d3 = measure_density(&p3r, kappa)?;
            let p2 = Momentum::new(p2r, kappa).ok()?;
            let p3 = Momentum::new(p3r, kappa).ok()?;
            let base =
                d2 * d3 * eval(&p2) * eval(&p3)
                    / (gaussian_pdf(&p2r, &c, w) * gaussian_pdf(&p3r, &c, w));
            let inner_arg = negate(&sum_exact(&p2, &p3).ok()?);
            let outer_arg = right_divide(&negate(&p3), &p2).ok()?;
            let fi = eval(&inner_arg);
            let fo = eval(&outer_arg);
            Some((base * fi, base * fo, base * (fi - fo)))
        })();
        match contribution {
            Some((vi, vo, vd)) => {
                acc_i.push(vi);
                acc_o.push(vo);
                acc_d.push(vd);
            }
            None => {
                excluded += 1;
                acc_i.push(0.0);
                acc_o.push(0.0);
                acc_d.push(0.0);
            }
        }
    }
    InteractionEstimates {
        inner: acc_i.estimate(excluded),
        outer: acc_o.estimate(excluded),
        difference: acc_d.estimate(excluded),
    }
}

/// Full sampled action `Σ(φ) = kinetic + (λ/3!) · cubic(inner)`.
pub struct ActionEstimate {
    pub kinetic: McEstimate,
    pub interaction: InteractionEstimates,
    pub total: f64,
}

pub fn action(
    profile: &Profile,
    mass: f64,
    lambda: f64,
    kappa: f64,
    n_samples: usize,
    seed: u64,
) -> ActionEstimate {
    action_composed(profile, None, mass, lambda, kappa, n_samples, seed)
}

fn action_composed(
    profile: &Profile,
    lorentz: Option<&GroupElement>,
    mass: f64,
    lambda: f64,
    kappa: f64,
    n_samples: usize,
    seed: u64,
) -> ActionEstimate {
    let kinetic = propagating_term_composed(profile, lorentz, mass, kappa, n_samples, seed);
    let interaction = interaction_terms_composed(profile, lorentz, kappa, n_samples, seed + 1);
    let total = kinetic.value + lambda / 6.0 * interaction.inner.value;
    ActionEstimate {
        kinetic,
        interaction,
        total,
    }
}

/// Outcome of the symmetry checks on the sampled action.
#[derive(Debug, Clone, Serialize)]
pub struct SymmetryReport {
    /// |Σ(φ∘Λ) − Σ(φ)| over common samples.
    pub lorentz_difference: f64,
    /// Standard error of that difference.
    pub lorentz_std_error: f64,
    /// Whether the difference stays within three standard errors.
    pub lorentz_pass: bool,
    /// Largest `|exp(i ε·(p₁⊕(p₂⊕p₃))) − 1|` over constrained samples.
    pub max_phase_residual: f64,
    pub phase_samples: usize,
}

/// Checks (a) invariance of the sampled action under a stabilizer element
/// acting on the profile, within three standard errors on common samples,
/// and (b) that the on-shell translation phase is exactly 1: with
/// `p₁ = ⊖(p₂⊕p₃)`, the total `p₁⊕(p₂⊕p₃)` vanishes, so
/// `exp(i ε·p_total) = 1` up to the closure residual. The pairing `ε·p`
/// uses `dot_mm`.
pub fn check_action_symmetries(
    profile: &Profile,
    lorentz_element: &GroupElement,
    translation_eps: &[f64; 4],
    mass: f64,
    lambda: f64,
    kappa: f64,
    n_samples: usize,
    seed: u64,
) -> SymmetryReport {
    // (a) Lorentz: same seed → common random numbers for both estimates
    let plain = action(profile, mass, lambda, kappa, n_samples, seed);
    let moved = action_composed(
        profile,
        Some(lorentz_element),
        mass,
        lambda,
        kappa,
        n_samples,
        seed,
    );
    let diff = (moved.total - plain.total).abs();
    let sigma = (plain.kinetic.std_error.powi(2)
        + moved.kinetic.std_error.powi(2)
        + (lambda / 6.0 * plain.interaction.inner.std_error).powi(2)
        + (lambda / 6.0 * moved.interaction.inner.std_error).powi(2))
    .sqrt();
    let lorentz_pass = diff <= 3.0 * sigma.max(1e-12);

    // (b) translation phase on the constraint set
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0001);
    let (c, w) = proposal_center(profile);
    let mut max_phase: f64 = 0.0;
    let mut used = 0usize;
    while used < n_samples.min(1000) {
        let p2r = draw(&mut rng, &c, w);
        let p3r = draw(&mut rng, &c, w);
        let ok = (|| -> Option<f64> {
            let p2 = Momentum::new(p2r, kappa).ok()?;
            let p3 = Momentum::new(p3r, kappa).ok()?;
            let s23 = sum_exact(&p2, &p3).ok()?;
            let p1 = negate(&s23);
            let total = sum_exact(&p1, &s23).ok()?;
            let phase_arg = dot_mm(translation_eps, &total.p);
            // |e^{iθ} − 1| = 2|sin(θ/2)|
            Some(2.0 * (phase_arg / 2.0).sin().abs())
        })();
        if let Some(r) = ok {
            max_phase = max_phase.max(r);
            used += 1;
        }
    }
    SymmetryReport {
        lorentz_difference: diff,
        lorentz_std_error: sigma,
        lorentz_pass,
        max_phase_residual: max_phase,
        phase_samples: used,
    }
}

/// Momentum-level left inverse property `⊖p ⊕ (p ⊕ q) = q`, the identity
/// the delta-function reduction of the convolution rests on.
pub fn lip_residual(p: &Momentum, q: &Momentum) -> Result<f64, SnyderError> {
    let s = sum_exact(p, q)?;
    let back = left_divide(p, &s)?;
    Ok((0..4).map(|i| (back.p[i] - q.p[i]).abs()).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expansion() -> SumExpansion {
        expand_sum(1.0, 5e-3).unwrap()
    }

    fn mm_metric(i: usize) -> f64 {
        if i == 0 {
            1.0
        } else {
            -1.0
        }
    }

    #[test]
    fn linear_part_is_identity_and_quadratic_vanishes() {
        let e = expansion();
        for b in 0..2 {
            for c in 0..4 {
                for v in 0..4 {
                    assert_eq!(e.linear[b][c][v], if c == v { 1.0 } else { 0.0 });
                }
            }
        }
        // pure-p cubic monomials absent (p ⊕ 0 = p exactly)
        for m in e.cubic.keys() {
            assert!(m.iter().any(|&s| s >= 4), "pure-p monomial {m:?}");
        }
    }

    #[test]
    fn cross_check_against_closed_form_is_tight() {
        let e = expansion();
        assert!(
            e.cross_check_residual < 1e-9,
            "paths disagree: {}",
            e.cross_check_residual
        );
    }

    #[test]
    fn known_cubic_coefficient_q0_p_squared() {
        // coefficient of q₀·dot_mm(p,p)-part: the q₀p₀² entry in component 0
        // of the exact expansion is −1/(2κ²), and q₀p₁² is +1/(2κ²)
        let e = expansion();
        let c1 = e.cubic.get(&[0, 0, 4]).copied().unwrap_or_default();
        assert!((c1[0] - (-1.0)).abs() < 1e-6, "q0 p0^2: {}", c1[0]);
        let c2 = e.cubic.get(&[1, 1, 4]).copied().unwrap_or_default();
        assert!((c2[0] - 0.5).abs() < 1e-6, "q0 p1^2: {}", c2[0]);
    }

    #[test]
    fn kappa_scaling_of_cubic_terms() {
        let e1 = expand_sum(1.0, 5e-3).unwrap();
        let e2 = expand_sum(2.0, 5e-3).unwrap();
        // cubic coefficients scale as 1/κ²
        for (m, c) in &e1.cubic {
            let c2 = e2.cubic.get(m).copied().unwrap_or_default();
            for i in 0..4 {
                assert!((c[i] / 4.0 - c2[i]).abs() < 1e-5, "{m:?} {i}");
            }
        }
    }

    #[test]
    fn expansion_evaluation_tracks_exact_sum() {
        let e = expansion();
        let p = [0.02, -0.015, 0.01, 0.005];
        let q = [-0.01, 0.02, 0.015, -0.005];
        let exact = sum_exact(
            &Momentum::new(p, 1.0).unwrap(),
            &Momentum::new(q, 1.0).unwrap(),
        )
        .unwrap();
        let approx = e.evaluate(&p, &q);
        for i in 0..4 {
            assert!((approx[i] - exact.p[i]).abs() < 1e-8);
        }
    }

    #[test]
    fn plane_wave_unit_is_neutral() {
        let w = PlaneWaveSum::new(vec![
            (
                Complex64::new(0.7, 0.1),
                Momentum::new([0.1, 0.2, -0.1, 0.0], 1.0).unwrap(),
            ),
            (
                Complex64::new(-0.3, 0.2),
                Momentum::new([0.0, -0.15, 0.2, 0.1], 1.0).unwrap(),
            ),
        ])
        .unwrap();
        let unit = PlaneWaveSum::single(Momentum::zero(1.0)).unwrap();
        let prod = star_plane_waves(&w, &unit).unwrap();
        for ((c1, m1), (c2, m2)) in prod.terms().iter().zip(w.terms()) {
            assert!((c1 - c2).norm() < 1e-15);
            for i in 0..4 {
                assert!((m1.p[i] - m2.p[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn plane_wave_product_momentum_is_the_sum() {
        let p = Momentum::new([0.2, 0.1, 0.0, -0.1], 1.0).unwrap();
        let q = Momentum::new([0.0, 0.25, -0.1, 0.05], 1.0).unwrap();
        let prod = star_plane_waves(
            &PlaneWaveSum::single(p).unwrap(),
            &PlaneWaveSum::single(q).unwrap(),
        )
        .unwrap();
        assert_eq!(prod.terms().len(), 1);
        let s = sum_exact(&p, &q).unwrap();
        for i in 0..4 {
            assert!((prod.terms()[0].1.p[i] - s.p[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn plane_wave_nonassociativity_witness() {
        let p = PlaneWaveSum::single(Momentum::new([0.3, 0.2, 0.0, 0.0], 1.0).unwrap()).unwrap();
        let q =
            PlaneWaveSum::single(Momentum::new([0.0, 0.25, 0.15, 0.0], 1.0).unwrap()).unwrap();
        let r = PlaneWaveSum::single(Momentum::new([0.1, 0.0, 0.3, 0.2], 1.0).unwrap()).unwrap();
        let left = star_plane_waves(&star_plane_waves(&p, &q).unwrap(), &r).unwrap();
        let right = star_plane_waves(&p, &star_plane_waves(&q, &r).unwrap()).unwrap();
        let d: f64 = (0..4)
            .map(|i| (left.terms()[0].1.p[i] - right.terms()[0].1.p[i]).abs())
            .fold(0.0, f64::max);
        assert!(d > 1e-6, "momenta differ by {d}");
    }

    #[test]
    fn monomial_star_against_unit_and_constants() {
        let e = expansion();
        let x1 = CoordinatePolynomial::coordinate(1);
        let one = CoordinatePolynomial::one();
        let left = star_monomials(&x1, &one, &e).unwrap();
        let right = star_monomials(&one, &x1, &e).unwrap();
        assert_eq!(left.snapped(1e-12), x1);
        assert_eq!(right.snapped(1e-12), x1);
    }

    #[test]
    fn coordinate_star_commutators_vanish() {
        let e = expansion();
        for mu in 0..4u8 {
            for nu in 0..4u8 {
                let c = star_commutator(mu, nu, &e).unwrap().snapped(1e-9);
                assert_eq!(c, CoordinatePolynomial::zero(), "[{mu},{nu}]");
            }
        }
    }

    #[test]
    fn degree_cap_is_enforced() {
        let e = expansion();
        let x2 = CoordinatePolynomial::monomial(&[0, 1]);
        assert!(matches!(
            star_monomials(&x2, &x2, &e),
            Err(StarError::Degree(4))
        ));
    }

    #[test]
    fn star_triple_has_the_linear_eta_structure() {
        // ⟨x_μ,x_ν,x_α⟩_* = −(1/κ²)(η_{να} x_μ − η_{μα} x_ν), η = (+,−,−,−)
        let e = expansion();
        for mu in 0..4u8 {
            for nu in 0..4u8 {
                for al in 0..4u8 {
                    let t = star_triple(mu, nu, al, &e).unwrap();
                    let mut expect = CoordinatePolynomial::zero();
                    if nu == al {
                        expect = expect.add(
                            &CoordinatePolynomial::coordinate(mu)
                                .scale(Complex64::new(-mm_metric(nu as usize), 0.0)),
                        );
                    }
                    if mu == al {
                        expect = expect.add(
                            &CoordinatePolynomial::coordinate(nu)
                                .scale(Complex64::new(mm_metric(mu as usize), 0.0)),
                        );
                    }
                    let resid = t.sub(&expect).max_coefficient_norm();
                    assert!(resid < 1e-6, "triple ({mu},{nu},{al}): residual {resid}");
                }
            }
        }
    }

    #[test]
    fn convolution_with_unit_profile_is_the_measure_integral() {
        let phi = Profile::Gaussian {
            center: [0.0; 4],
            width: 0.25,
        };
        let a = convolve_at_identity(&phi, &Profile::One, 1.0, 20_000, 7);
        // compare against the same integral with the roles as a plain
        // measure-weighted integral of φ alone, estimated with another seed
        let b = convolve_at_identity(&phi, &Profile::One, 1.0, 20_000, 8);
        assert!((a.value - b.value).abs() < 4.0 * (a.std_error + b.std_error));
        assert!(a.value > 0.0);
    }

    #[test]
    fn estimates_are_reproducible_under_fixed_seed() {
        let phi = Profile::Gaussian {
            center: [0.05, 0.1, -0.05, 0.0],
            width: 0.3,
        };
        let a = propagating_term(&phi, 0.5, 1.0, 5000, 42);
        let b = propagating_term(&phi, 0.5, 1.0, 5000, 42);
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
    }

    #[test]
    fn lip_holds_at_momentum_level() {
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        for _ in 0..200 {
            let draw4 = |rng: &mut ChaCha8Rng| -> Momentum {
                loop {
                    let p: [f64; 4] = core::array::from_fn(|_| {
                        let z: f64 = StandardNormal.sample(rng);
                        0.3 * z
                    });
                    if let Ok(m) = Momentum::new(p, 1.0) {
                        if dot_mm(&m.p, &m.p) < 0.9 {
                            return m;
                        }
                    }
                }
            };
            let p = draw4(&mut rng);
            let q = draw4(&mut rng);
            assert!(lip_residual(&p, &q).unwrap() < 1e-9);
        }
    }

    #[test]
    fn translation_phase_is_unity_on_shell() {
        let profile = Profile::Gaussian {
            center: [0.0, 0.2, 0.1, 0.0],
            width: 0.25,
        };
        let m = crate::kloop::Preset::DeSitter.metric();
        let u = crate::ambient::exp(
            &crate::ambient::generator(1, 2, &m).unwrap().scale(0.4),
        )
        .unwrap();
        let rep = check_action_symmetries(
            &profile,
            &u,
            &[0.7, -0.3, 0.2, 0.5],
            0.4,
            0.1,
            1.0,
            2000,
            9,
        );
        assert!(rep.max_phase_residual < 1e-9, "{}", rep.max_phase_residual);
        assert!(rep.lorentz_pass, "lorentz diff {} sigma {}", rep.lorentz_difference, rep.lorentz_std_error);
    }
}
