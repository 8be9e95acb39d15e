//! Vertex operator modes on `V_L~`.
//!
//! For `u = α_1(-n_1)···α_d(-n_d) ⊗ e^β` and `v = P ⊗ e^μ` the field is the
//! normal-ordered product
//!
//! ```text
//! Y(u,z) v = : Π_i ∂^{(n_i-1)} α_i(z) · E^-(β,z) E^+(β,z) e_β z^{<β,·>} : v
//! E^-(β,z) = exp( Σ_{n≥1} β(-n) z^n / n ),   E^+(β,z) = exp( -Σ_{n≥1} β(n) z^{-n} / n )
//! ```
//!
//! where the non-negative modes of each `α_i` act on `v` first and the
//! creation modes act last. `E^+` is a shift of Heisenberg variables,
//! `x_{b,n} -> x_{b,n} - <β,b> z^{-n}`, so every coefficient is a finite sum.
//! Mode `s` is the coefficient of `z^{-s-1}`; it vanishes unless
//! `s + <β,μ>` is an integer.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::fock::{Direction, FockElement, HeisenbergFactor, Monomial, Poly};
use crate::lattice::{pair, LatticeVector};
use crate::rational::{binomial, qi, to_i64, Rational};

/// Mode label `s` in `Y(v,z) = Σ v_s z^{-s-1}`.
pub type ModeIndex = Rational;

/// The sign function `ε(α, β)` attached to `e_α e_β`.
pub trait Cocycle: Send + Sync + fmt::Debug {
    fn epsilon(&self, a: &LatticeVector, b: &LatticeVector) -> Rational;
}

/// `ε ≡ 1`.
#[derive(Clone, Copy, Debug, Default)]
pub struct TrivialCocycle;

impl Cocycle for TrivialCocycle {
    fn epsilon(&self, _a: &LatticeVector, _b: &LatticeVector) -> Rational {
        Rational::one()
    }
}

/// `ε(α, β) = (-1)^{m_α n_β}` in the coordinates
/// `α = m_α (γ+δ) + n_α (γ-δ)`.
///
/// On `L` this is bimultiplicative with `ε(α,β)/ε(β,α) = (-1)^{<α,β>}`
/// whenever `<α,β>` is an integer, so lattice fields with odd pairing
/// commute. Pairs outside `L` with a non-integral exponent get `+1`.
#[derive(Clone, Copy, Debug, Default)]
pub struct LatticeCocycle;

impl Cocycle for LatticeCocycle {
    fn epsilon(&self, a: &LatticeVector, b: &LatticeVector) -> Rational {
        let m = (&a.g + &a.d) / qi(2);
        let n = (&b.g - &b.d) / qi(2);
        let e = m * n;
        if e.is_integer() && e.to_integer().is_odd() {
            -Rational::one()
        } else {
            Rational::one()
        }
    }
}

type Laurent = BTreeMap<i64, Poly>;

fn laurent_add(map: &mut Laurent, exp: i64, p: Poly) {
    if p.is_zero() {
        return;
    }
    let entry = map.entry(exp).or_default();
    entry.add_assign(&p);
    if entry.is_zero() {
        map.remove(&exp);
    }
}

/// Evaluates modes of lattice vertex operators.
#[derive(Debug)]
pub struct VertexEngine {
    cocycle: Arc<dyn Cocycle>,
    // Coefficients S_a(β) of E^-(β, z), extended on demand.
    creation_cache: RwLock<HashMap<LatticeVector, Arc<Vec<Poly>>>>,
}

impl Default for VertexEngine {
    fn default() -> Self {
        Self::new(Arc::new(LatticeCocycle))
    }
}

impl VertexEngine {
    pub fn new(cocycle: Arc<dyn Cocycle>) -> Self {
        Self { cocycle, creation_cache: RwLock::new(HashMap::new()) }
    }

    /// Shared engine with [`LatticeCocycle`].
    pub fn standard() -> &'static VertexEngine {
        static ENGINE: OnceLock<VertexEngine> = OnceLock::new();
        ENGINE.get_or_init(VertexEngine::default)
    }

    pub fn cocycle(&self) -> &dyn Cocycle {
        self.cocycle.as_ref()
    }

    /// `[S_0(β), ..., S_deg(β)]`, the z-expansion of `E^-(β, z)`.
    fn creation_series(&self, beta: &LatticeVector, deg: usize) -> Arc<Vec<Poly>> {
        if let Some(s) = self.creation_cache.read().unwrap().get(beta) {
            if s.len() > deg {
                return s.clone();
            }
        }
        let mut series = vec![Poly::one()];
        // a·S_a = Σ_{k=1..a} β(-k) S_{a-k}
        for a in 1..=deg.max(8) {
            let mut acc = Poly::zero();
            for k in 1..=a {
                acc.add_assign(&series[a - k].mul_creation(beta, k as u32));
            }
            series.push(acc.scale(&Rational::new(1.into(), (a as i64).into())));
        }
        let series = Arc::new(series);
        self.creation_cache.write().unwrap().insert(beta.clone(), series.clone());
        series
    }

    /// `e^α_s v`.
    pub fn exp_mode(&self, alpha: &LatticeVector, s: &ModeIndex, v: &FockElement) -> FockElement {
        let mut out = FockElement::zero();
        for (mu, p) in v.sectors() {
            self.monomial_mode_into(&mut out, &Monomial::one(), alpha, &Rational::one(), s, mu, p);
        }
        out
    }

    /// `u_s v` for a homogeneous `u`.
    pub fn general_mode(&self, u: &FockElement, s: &ModeIndex, v: &FockElement) -> Result<FockElement> {
        u.homogeneous_weight()?;
        Ok(self.mode_unchecked(u, s, v))
    }

    /// `u_s v` without the homogeneity check; linear in `u`.
    pub fn mode_unchecked(&self, u: &FockElement, s: &ModeIndex, v: &FockElement) -> FockElement {
        let mut out = FockElement::zero();
        for (beta, up) in u.sectors() {
            for (mu, p) in v.sectors() {
                for (m, c) in up.iter() {
                    self.monomial_mode_into(&mut out, m, beta, c, s, mu, p);
                }
            }
        }
        out
    }

    /// Integer-mode convenience wrapper.
    pub fn mode(&self, u: &FockElement, n: i64, v: &FockElement) -> FockElement {
        self.mode_unchecked(u, &qi(n), v)
    }

    /// Adds `c · (m ⊗ e^β)_s (p ⊗ e^μ)` to `out`.
    #[allow(clippy::too_many_arguments)]
    fn monomial_mode_into(
        &self,
        out: &mut FockElement,
        m: &Monomial,
        beta: &LatticeVector,
        c: &Rational,
        s: &ModeIndex,
        mu: &LatticeVector,
        p: &Poly,
    ) {
        let r = pair(beta, mu);
        // Coefficient of z^{target} after stripping z^r.
        let Some(target) = to_i64(&(-s - Rational::one() - &r)) else {
            return;
        };
        let lowest = -((p.degree() + m.degree()) as i64);
        if target < lowest {
            return;
        }
        let sign = self.cocycle.epsilon(beta, mu);
        let scalar = c * &sign;
        let shifted = shift_substitute(p, beta);
        let factors = m.factors();
        let d = factors.len();
        let mut total = Poly::zero();
        for subset in 0u32..(1u32 << d) {
            let mut right = shifted.clone();
            for (i, f) in factors.iter().enumerate() {
                if subset & (1 << i) != 0 {
                    right = apply_annihilation_field(&right, *f, mu);
                    if right.is_empty() {
                        break;
                    }
                }
            }
            if right.is_empty() {
                continue;
            }
            let min_exp = *right.keys().next().unwrap();
            if min_exp > target {
                continue;
            }
            let creation = self.creation_part(factors, subset, beta, (target - min_exp) as usize);
            for (exp, poly) in right.range(..=target) {
                let cp = &creation[(target - exp) as usize];
                if !cp.is_zero() {
                    total.add_assign(&cp.mul(poly));
                }
            }
        }
        out.add_poly_scaled(beta + mu, &total, &scalar);
    }

    /// Power-series coefficients (up to `deg`) of
    /// `Π_{i ∉ subset} A^-_i(z) · E^-(β, z)`, where
    /// `A^-_i(z) = Σ_{q≥0} C(q+n_i-1, n_i-1) α_i(-(q+n_i)) z^q`.
    fn creation_part(&self, factors: &[HeisenbergFactor], subset: u32, beta: &LatticeVector, deg: usize) -> Vec<Poly> {
        let mut series: Vec<Poly> = self.creation_series(beta, deg)[..=deg].to_vec();
        for (i, f) in factors.iter().enumerate() {
            if subset & (1 << i) != 0 {
                continue;
            }
            let n = f.level as i64;
            let mut next = vec![Poly::zero(); deg + 1];
            for (a, sa) in series.iter().enumerate() {
                if sa.is_zero() {
                    continue;
                }
                for qd in 0..=(deg - a) {
                    let coeff = binomial(qd as i64 + n - 1, (n - 1) as u64);
                    let factor = HeisenbergFactor::new(f.dir, (qd as i64 + n) as u32);
                    next[a + qd].add_assign(&sa.mul_factor(factor, &coeff));
                }
            }
            series = next;
        }
        series
    }

    /// Largest `s` for which `u_s v` can be nonzero, if either side is nonzero.
    pub fn mode_upper_bound(&self, u: &FockElement, v: &FockElement) -> Option<Rational> {
        let mut best: Option<Rational> = None;
        for (beta, up) in u.sectors() {
            for (mu, p) in v.sectors() {
                let b = qi((up.degree() + p.degree()) as i64) - pair(beta, mu) - Rational::one();
                if best.as_ref().is_none_or(|cur| b > *cur) {
                    best = Some(b);
                }
            }
        }
        best
    }

    /// `a_n(b_m v) - b_m(a_n v) - Σ_{i≥0} C(n,i) (a_i b)_{n+m-i} v`; zero
    /// whenever the commutator formula holds.
    pub fn commutator_defect(&self, a: &FockElement, n: i64, b: &FockElement, m: i64, v: &FockElement) -> FockElement {
        let mut out = self.mode(a, n, &self.mode(b, m, v));
        out.add_assign_scaled(&self.mode(b, m, &self.mode(a, n, v)), &-Rational::one());
        let Some(bound) = self.mode_upper_bound(a, b) else {
            return out;
        };
        let top = bound.floor().to_integer();
        let top: i64 = top.try_into().unwrap_or(i64::MAX);
        for i in 0..=top.max(-1) {
            let c = binomial(n, i as u64);
            if c.is_zero() {
                continue;
            }
            let aib = self.mode(a, i, b);
            if aib.is_zero() {
                continue;
            }
            out.add_assign_scaled(&self.mode(&aib, n + m - i, v), &-c);
        }
        out
    }
}

/// `E^+(β, z)` on `p`, as a Laurent polynomial in `z` (exponents `<= 0`).
fn shift_substitute(p: &Poly, beta: &LatticeVector) -> Laurent {
    let weights = [Direction::Gamma.pair_with(beta), Direction::Delta.pair_with(beta)];
    let mut out = Laurent::new();
    for (m, c) in p.iter() {
        // Π over factor groups of (x_f - w_f z^{-level})^k
        let mut acc: Laurent = Laurent::new();
        acc.insert(0, Poly::monomial(Monomial::one(), c.clone()));
        for (f, k) in m.grouped() {
            let w = &weights[f.dir as usize];
            let mut next = Laurent::new();
            for (exp, poly) in &acc {
                for j in 0..=k {
                    if j > 0 && w.is_zero() {
                        break;
                    }
                    let mut coeff = binomial(k as i64, j as u64);
                    for _ in 0..j {
                        coeff *= -w;
                    }
                    let mut term = poly.scale(&coeff);
                    for _ in 0..(k - j) {
                        term = term.mul_factor(f, &Rational::one());
                    }
                    laurent_add(&mut next, exp - (j as i64) * f.level as i64, term);
                }
            }
            acc = next;
        }
        for (e, poly) in acc {
            laurent_add(&mut out, e, poly);
        }
    }
    out
}

/// Applies the non-negative part of `∂^{(n-1)} α(z)` for the factor
/// `α(-n)`: `Σ_{k≥0} (-1)^{n-1} C(k+n-1, n-1) α(k) z^{-k-n}`, with `α(0)`
/// acting as `<α, μ>` on the original sector.
fn apply_annihilation_field(right: &Laurent, f: HeisenbergFactor, mu: &LatticeVector) -> Laurent {
    let n = f.level as i64;
    let alpha = f.dir.vector();
    let zero_mode = pair(&alpha, mu);
    let sign = if (n - 1) % 2 == 0 { Rational::one() } else { -Rational::one() };
    let mut out = Laurent::new();
    for (exp, poly) in right {
        for k in 0..=(poly.max_level() as i64) {
            let image = if k == 0 {
                if zero_mode.is_zero() {
                    continue;
                }
                poly.scale(&zero_mode)
            } else {
                poly.annihilate(&alpha, k as u32)
            };
            if image.is_zero() {
                continue;
            }
            let coeff = &sign * binomial(k + n - 1, (n - 1) as u64);
            laurent_add(&mut out, exp - k - n, image.scale(&coeff));
        }
    }
    out
}

/// `e^α_s v` with the standard engine.
pub fn exp_mode(alpha: &LatticeVector, s: &ModeIndex, v: &FockElement) -> FockElement {
    VertexEngine::standard().exp_mode(alpha, s, v)
}

/// `u_s v` with the standard engine; `u` must be homogeneous.
pub fn general_mode(u: &FockElement, s: &ModeIndex, v: &FockElement) -> Result<FockElement> {
    VertexEngine::standard().general_mode(u, s, v)
}

/// Integer mode `u_n v` with the standard engine, linear in `u`.
pub fn mode(u: &FockElement, n: i64, v: &FockElement) -> FockElement {
    VertexEngine::standard().mode(u, n, v)
}

pub fn commutator_defect(a: &FockElement, n: i64, b: &FockElement, m: i64, v: &FockElement) -> FockElement {
    VertexEngine::standard().commutator_defect(a, n, b, m, v)
}
