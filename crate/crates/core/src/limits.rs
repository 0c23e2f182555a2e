//! Limits `m -> infinity` at `s = xi^(1/m)`: the scaled free energy `F_0`,
//! the current generating function `E(mu)`, the `d_0` characterisation of
//! `F_0`, the limiting vector `Psi_0`, and the Legendre transform of `E`.
//!
//! All limits are Richardson-extrapolated in `1/m`. That the correction is a
//! power series in `1/m` is an ansatz; the reports carry the successive
//! corrections so a violation is visible.

use rayon::prelude::*;
use serde::Serialize;

use crate::asep::{build_m, lambda0, scattering_matrix};
use crate::error::{Error, Result};
use crate::koornwinder::{d0, g_i};
use crate::mpa::{psi_m, state_tail, z_m, AlgebraicMoments, AtPoint, Boundary, FockMoments, Letter, MomentSource};
use crate::params::Params;
use crate::report::Verdict;
use crate::scalar::{ser_bigfloat, ser_bigfloat_vec, BigFloat, Rational, Real, Scalar};

/// Where the MP moments come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Backend {
    /// Exact recursion from the boundary relations; valid for any `s`.
    Algebraic,
    /// Truncated Fock sums; needs convergent series (`s < 1` in practice).
    Fock { k: usize },
}

#[derive(Clone, Debug)]
pub struct LimitConfig {
    pub m_list: Vec<usize>,
    pub precision: usize,
    /// Finite-difference step.
    pub h: Rational,
    pub backend: Backend,
    /// Permit `xi` outside `[1/4, 4]`.
    pub wide_xi: bool,
}

impl Default for LimitConfig {
    fn default() -> Self {
        LimitConfig {
            m_list: vec![8, 16, 32, 64],
            precision: 256,
            h: Rational::new(1, 1024),
            backend: Backend::Algebraic,
            wide_xi: false,
        }
    }
}

impl LimitConfig {
    fn validate(&self) -> Result<()> {
        if self.m_list.len() < 2 {
            return Err(Error::Argument("need at least two m values".into()));
        }
        if self.m_list[0] == 0 || self.m_list.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Argument("m values must be positive and strictly increasing".into()));
        }
        if self.precision < 64 {
            return Err(Error::Argument("precision below 64 bits".into()));
        }
        if !self.h.is_positive() || self.h >= Rational::new(1, 4) {
            return Err(Error::Argument("step h must lie in (0, 1/4)".into()));
        }
        Ok(())
    }

    fn bf(&self, r: &Rational) -> BigFloat {
        BigFloat::from_rational(r, self.precision)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitEstimate {
    pub m_values: Vec<usize>,
    #[serde(serialize_with = "ser_bigfloat_vec")]
    pub raw_values: Vec<BigFloat>,
    #[serde(serialize_with = "ser_bigfloat")]
    pub extrapolated: BigFloat,
    /// Twice the last Richardson correction, plus any finite-difference error.
    #[serde(serialize_with = "ser_bigfloat")]
    pub error_estimate: BigFloat,
    /// Successive Richardson corrections, lowest order first.
    pub corrections: Vec<f64>,
    /// Whether the corrections shrink monotonically.
    pub monotone: bool,
}

impl LimitEstimate {
    pub fn value(&self) -> f64 {
        self.extrapolated.to_f64()
    }

    pub fn error(&self) -> f64 {
        self.error_estimate.to_f64()
    }

    fn scaled(mut self, c: &BigFloat) -> LimitEstimate {
        self.raw_values = self.raw_values.iter().map(|v| v.clone() * c).collect();
        self.extrapolated = self.extrapolated * c;
        self.error_estimate = self.error_estimate * &c.abs();
        let f = c.to_f64();
        self.corrections = self.corrections.iter().map(|v| v * f).collect();
        self
    }
}

/// Polynomial extrapolation to `1/m = 0` (Neville). The error estimate is twice
/// the difference between the top two levels that use the finest point.
pub fn richardson(ms: &[usize], vals: &[BigFloat], prec: usize) -> Result<LimitEstimate> {
    if ms.len() != vals.len() || ms.len() < 2 {
        return Err(Error::Argument("need matching m values and samples, at least two".into()));
    }
    let hs: Vec<BigFloat> = ms.iter().map(|&m| BigFloat::from_rational(&Rational::new(1, m as i64), prec)).collect();
    let n = vals.len();
    // row i holds extrapolants ending at point i; table[i][j] uses points i-j..=i
    let mut table: Vec<Vec<BigFloat>> = vals.iter().map(|v| vec![v.clone()]).collect();
    for i in 1..n {
        for j in 1..=i {
            let lo = &hs[i - j];
            let hi = &hs[i];
            let v = (lo.clone() * &table[i][j - 1] - hi.clone() * &table[i - 1][j - 1]) / (lo.clone() - hi);
            table[i].push(v);
        }
    }
    let last = &table[n - 1];
    let corrections: Vec<f64> = last.windows(2).map(|w| (w[1].clone() - &w[0]).to_f64()).collect();
    let monotone = corrections.windows(2).all(|w| w[1].abs() <= w[0].abs());
    let top = last[n - 1].clone();
    let err = (top.clone() - &last[n - 2]).abs() * &BigFloat::from_rational(&Rational::from(2), prec);
    Ok(LimitEstimate { m_values: ms.to_vec(), raw_values: vals.to_vec(), extrapolated: top, error_estimate: err, corrections, monotone })
}

enum Source {
    Algebraic(AlgebraicMoments<BigFloat>),
    Fock(FockMoments<BigFloat>),
}

impl MomentSource<BigFloat> for Source {
    fn params(&self) -> &Params<BigFloat> {
        match self {
            Source::Algebraic(s) => s.params(),
            Source::Fock(s) => s.params(),
        }
    }

    fn ratio(&self, j: u32, b: Boundary, word: &[Letter]) -> Result<BigFloat> {
        match self {
            Source::Algebraic(s) => s.ratio(j, b, word),
            Source::Fock(s) => s.ratio(j, b, word),
        }
    }

    fn tail(&self, j: u32, b: Boundary) -> Result<f64> {
        match self {
            Source::Algebraic(s) => s.tail(j, b),
            Source::Fock(s) => s.tail(j, b),
        }
    }
}

/// One `m` of the sequence: moments at `s = xi^(1/m)` and the prefactor `ln xi / m`.
struct Level {
    m: usize,
    scale: BigFloat,
    src: Source,
}

impl Level {
    fn new(params: &Params<BigFloat>, ln_xi: &BigFloat, m: usize, cfg: &LimitConfig) -> Result<Level> {
        let mb = cfg.bf(&Rational::from(m as i64));
        let s_half = (ln_xi.clone() / (mb.clone() + &mb)).exp();
        let p = params.with_s_half(s_half);
        let src = match cfg.backend {
            Backend::Algebraic => Source::Algebraic(AlgebraicMoments::new(&p)),
            Backend::Fock { k } => {
                let src = FockMoments::new(&p, k)?;
                let tail = state_tail(&src, m, false)?;
                let budget = (-(cfg.precision as f64) / 2.0).exp2();
                if tail > budget {
                    return Err(Error::Truncation(format!("relative tail {tail:.3e} at m = {m} exceeds {budget:.3e}")));
                }
                Source::Fock(src)
            }
        };
        Ok(Level { m, scale: ln_xi.clone() / mb, src })
    }

    fn z(&self, x: &[BigFloat]) -> Result<BigFloat> {
        let z = z_m(&self.src, x, self.m)?;
        if z <= z.zero_like() {
            return Err(Error::Domain(format!("Z_{} is not positive at this point", self.m)));
        }
        Ok(z)
    }

    /// `F_m(x) = (ln xi / m) ln Z_m(x)`.
    fn f(&self, x: &[BigFloat]) -> Result<BigFloat> {
        Ok(self.scale.clone() * self.z(x)?.ln())
    }

    /// Central difference of order 1 or 2 in `x_i`.
    fn difference(&self, x: &[BigFloat], i: usize, order: u8, h: &BigFloat) -> Result<BigFloat> {
        let mut up = x.to_vec();
        up[i] = up[i].clone() + h;
        let mut down = x.to_vec();
        down[i] = down[i].clone() - h;
        let (fu, fd) = (self.f(&up)?, self.f(&down)?);
        Ok(match order {
            1 => (fu - fd) / (h.clone() + h),
            _ => {
                let f0 = self.f(x)?;
                (fu - &(f0.clone() + &f0) + fd) / (h.clone() * h)
            }
        })
    }

    /// Difference at `h` and `h/2`, combined to cancel the `h^2` term.
    /// Returns the combined value and the size of that correction.
    fn derivative(&self, x: &[BigFloat], i: usize, order: u8, h: &BigFloat) -> Result<(BigFloat, BigFloat)> {
        let two = h.one_like() + &h.one_like();
        let coarse = self.difference(x, i, order, h)?;
        let fine = self.difference(x, i, order, &(h.clone() / &two))?;
        let corr = (fine.clone() - &coarse) / (two.clone() + &h.one_like());
        Ok((fine + &corr, corr.abs()))
    }
}

/// Largest `xi` for which `Z_m(1; xi^(1/m))` stays away from its zeros as `m`
/// grows: `1 / max(A C, B D, A D, B C)` over the positive cross products of
/// the boundary parameters `A, B = t0^(1/2) u0^(+-1/2)` (signs as in the Noumi
/// parameters) and `C, D = tN^(1/2) uN^(+-1/2)`. Infinite when none is positive.
pub fn xi_bound<F: Real>(params: &Params<F>) -> Option<F> {
    let left = [params.a.clone() / &params.s_half, params.b.clone() / &params.s_half];
    let right = [params.c.clone(), params.d.clone()];
    let zero = params.t.zero_like();
    left.iter()
        .flat_map(|l| right.iter().map(move |r| l.clone() * r))
        .filter(|v| *v > zero)
        .fold(None, |acc: Option<F>, v| Some(match acc {
            Some(a) if a > v => a,
            _ => v,
        }))
        .map(|v| v.inv())
}

fn check_xi(params: &Params<BigFloat>, xi: &BigFloat, cfg: &LimitConfig) -> Result<BigFloat> {
    if *xi <= xi.zero_like() {
        return Err(Error::Argument("xi must be positive".into()));
    }
    let quarter = cfg.bf(&Rational::new(1, 4));
    let four = cfg.bf(&Rational::from(4));
    if !cfg.wide_xi && (*xi < quarter || *xi > four) {
        return Err(Error::Range("xi outside [1/4, 4]; larger truncations are needed there, pass the wide-xi override".into()));
    }
    if let Some(bound) = xi_bound(params) {
        if *xi >= bound {
            return Err(Error::Range(format!(
                "xi = {} is not below {}, where Z_m changes sign for large m",
                xi.to_decimal_string(10),
                bound.to_decimal_string(10)
            )));
        }
    }
    Ok(xi.ln())
}

fn check_point(x: &[BigFloat], n: usize, margin: &BigFloat) -> Result<()> {
    if x.len() != n {
        return Err(Error::Argument(format!("point has {} coordinates, expected {n}", x.len())));
    }
    if x.iter().any(|v| *v <= *margin) {
        return Err(Error::Domain("coordinates must be positive (and exceed the difference step)".into()));
    }
    Ok(())
}

fn levels(params: &Params<BigFloat>, ln_xi: &BigFloat, cfg: &LimitConfig) -> Result<Vec<Level>> {
    cfg.m_list.par_iter().map(|&m| Level::new(params, ln_xi, m, cfg)).collect()
}

/// `F_0(x; xi)` as the limit of `(ln xi / m) ln Z_m(x; s = xi^(1/m))`.
pub fn f0_estimate(params: &Params<BigFloat>, n: usize, xi: &BigFloat, x: &[BigFloat], cfg: &LimitConfig) -> Result<LimitEstimate> {
    cfg.validate()?;
    let ln_xi = check_xi(params, xi, cfg)?;
    if ln_xi.is_zero() {
        return Err(Error::Argument("xi = 1 gives F_m = 0 identically".into()));
    }
    check_point(x, n, &x[0].zero_like())?;
    let lv = levels(params, &ln_xi, cfg)?;
    let vals: Vec<BigFloat> = lv.par_iter().map(|l| l.f(x)).collect::<Result<_>>()?;
    richardson(&cfg.m_list, &vals, cfg.precision)
}

/// `d^order F_0 / dx_i^order` at `x` (0-based `i`), extrapolated in `h^2` and `1/m`.
pub fn derivative_estimate(
    params: &Params<BigFloat>,
    n: usize,
    xi: &BigFloat,
    x: &[BigFloat],
    i: usize,
    order: u8,
    cfg: &LimitConfig,
) -> Result<LimitEstimate> {
    cfg.validate()?;
    if !(1..=2).contains(&order) || i >= n {
        return Err(Error::Argument("derivative order must be 1 or 2 and index below N".into()));
    }
    let ln_xi = check_xi(params, xi, cfg)?;
    let h = cfg.bf(&cfg.h);
    check_point(x, n, &h)?;
    let lv = levels(params, &ln_xi, cfg)?;
    let parts: Vec<(BigFloat, BigFloat)> = lv.par_iter().map(|l| l.derivative(x, i, order, &h)).collect::<Result<_>>()?;
    let vals: Vec<BigFloat> = parts.iter().map(|p| p.0.clone()).collect();
    let mut est = richardson(&cfg.m_list, &vals, cfg.precision)?;
    let fd_err = parts.iter().map(|p| p.1.clone()).fold(h.zero_like(), |a, b| if b > a { b } else { a });
    est.error_estimate = est.error_estimate + fd_err;
    Ok(est)
}

/// `E(mu) = (p - q)/2 d^2 F_0 / dx_1^2 (1; e^mu)`.
pub fn e_mu_estimate(params: &Params<BigFloat>, n: usize, mu: &BigFloat, cfg: &LimitConfig) -> Result<LimitEstimate> {
    let xi = mu.exp();
    let ones = vec![mu.one_like(); n];
    let rates = params.rates();
    let two = mu.one_like() + &mu.one_like();
    let pref = (rates.p - &rates.q) / two;
    if mu.is_zero() {
        cfg.validate()?;
        let zero = mu.zero_like();
        let vals = vec![zero; cfg.m_list.len()];
        return richardson(&cfg.m_list, &vals, cfg.precision);
    }
    Ok(derivative_estimate(params, n, &xi, &ones, 0, 2, cfg)?.scaled(&pref))
}

#[derive(Clone, Debug, Serialize)]
pub struct RawSample {
    pub m: usize,
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct EmuReport {
    pub n: usize,
    pub mu: String,
    pub raw: Vec<RawSample>,
    pub extrapolated: String,
    pub error: String,
    pub lambda0_reference: String,
    pub discrepancy: f64,
    pub corrections: Vec<f64>,
    pub monotone: bool,
    pub agree: bool,
    pub verdict: Verdict,
}

/// `E(mu)` against `Lambda_0(e^mu)`. With `rel_width = Some(r)` an error bar
/// above `r |Lambda_0|` downgrades agreement to `Yellow`.
pub fn check_e_mu(
    params: &Params<BigFloat>,
    n: usize,
    mu: &BigFloat,
    cfg: &LimitConfig,
    rel_width: Option<f64>,
) -> Result<EmuReport> {
    let est = e_mu_estimate(params, n, mu, cfg)?;
    let reference = lambda0(params, n, &mu.exp())?.value;
    let disc = (est.extrapolated.clone() - &reference).abs();
    // the reference carries its own rounding
    let ref_tol = reference.to_f64().abs().max(1.0) * (-(cfg.precision as f64) / 2.0).exp2();
    let agree = disc.to_f64() <= est.error() + ref_tol;
    let wide = rel_width.is_some_and(|r| est.error() > r * reference.to_f64().abs());
    let verdict = match (agree, wide) {
        (false, _) => Verdict::Fail,
        (true, true) => Verdict::Yellow,
        (true, false) => Verdict::Pass,
    };
    Ok(EmuReport {
        n,
        mu: mu.to_decimal_string(20),
        raw: est.m_values.iter().zip(&est.raw_values).map(|(&m, v)| RawSample { m, value: v.to_decimal_string(40) }).collect(),
        extrapolated: est.extrapolated.to_decimal_string(40),
        error: est.error_estimate.to_decimal_string(10),
        lambda0_reference: reference.to_decimal_string(40),
        discrepancy: disc.to_f64(),
        corrections: est.corrections.clone(),
        monotone: est.monotone,
        agree,
        verdict,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct F0Characterization {
    pub n: usize,
    pub xi: String,
    pub x: Vec<String>,
    pub gradient: Vec<LimitEstimate>,
    pub lhs: String,
    pub d0: String,
    pub discrepancy: f64,
    pub error_bar: f64,
    pub passed: bool,
}

/// `sum_i g_i(x;1)[exp(x_i dF_0/dx_i) - 1] + g_i(1/x;1)[exp(-x_i dF_0/dx_i) - 1]`
/// against `d_0(xi)`, with first-order error propagation from the gradient.
pub fn check_f0_characterization(
    params: &Params<BigFloat>,
    n: usize,
    xi: &BigFloat,
    x: &[BigFloat],
    cfg: &LimitConfig,
) -> Result<F0Characterization> {
    let one = xi.one_like();
    if x.iter().all(|v| (v.clone() - &one).is_zero()) {
        return Err(Error::Precondition("x = 1 is fixed by the Weyl group; the identity degenerates there".into()));
    }
    let at_one = params.with_s_half(one.clone());
    let xinv: Vec<BigFloat> = x.iter().map(|v| v.inv()).collect();
    let g_up: Vec<BigFloat> = (0..n).map(|i| g_i(&at_one, x, i)).collect::<Result<_>>()?;
    let g_down: Vec<BigFloat> = (0..n).map(|i| g_i(&at_one, &xinv, i)).collect::<Result<_>>()?;
    let gradient: Vec<LimitEstimate> =
        (0..n).map(|i| derivative_estimate(params, n, xi, x, i, 1, cfg)).collect::<Result<_>>()?;
    let mut lhs = one.zero_like();
    let mut err = 0.0f64;
    for i in 0..n {
        let a = x[i].clone() * &gradient[i].extrapolated;
        let (ep, em) = (a.exp(), (-a).exp());
        lhs = lhs + g_up[i].clone() * &(ep.clone() - &one) + g_down[i].clone() * &(em.clone() - &one);
        let slope = (g_up[i].clone() * &ep - g_down[i].clone() * &em) * &x[i];
        err += slope.to_f64().abs() * gradient[i].error();
    }
    let rhs = d0(params, n, xi);
    let disc = (lhs.clone() - &rhs).to_f64().abs();
    Ok(F0Characterization {
        n,
        xi: xi.to_decimal_string(20),
        x: x.iter().map(|v| v.to_decimal_string(20)).collect(),
        gradient,
        lhs: lhs.to_decimal_string(30),
        d0: rhs.to_decimal_string(30),
        discrepancy: disc,
        error_bar: err,
        passed: disc <= err,
    })
}

/// Componentwise limit of `Psi^(m)(x) / Z_m(x)`.
pub fn psi0_estimate(params: &Params<BigFloat>, n: usize, xi: &BigFloat, x: &[BigFloat], cfg: &LimitConfig) -> Result<Vec<LimitEstimate>> {
    cfg.validate()?;
    let ln_xi = check_xi(params, xi, cfg)?;
    check_point(x, n, &x[0].zero_like())?;
    let lv = levels(params, &ln_xi, cfg)?;
    let normalised: Vec<Vec<BigFloat>> = lv
        .par_iter()
        .map(|l| {
            let psi = psi_m(&l.src, &AtPoint { x: x.to_vec() }, n, l.m)?;
            let z = l.z(x)?;
            Ok(psi.entries.into_iter().map(|c| c / &z).collect())
        })
        .collect::<Result<_>>()?;
    (0..1usize << n)
        .map(|c| {
            let vals: Vec<BigFloat> = normalised.iter().map(|v| v[c].clone()).collect();
            richardson(&cfg.m_list, &vals, cfg.precision)
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct VectorCheck {
    pub name: String,
    pub residual: f64,
    pub error_bar: f64,
    pub passed: bool,
}

fn vector_check(name: &str, op: &crate::matrix::Matrix<BigFloat>, v: &[LimitEstimate], eig: &BigFloat, eig_err: f64) -> VectorCheck {
    let vals: Vec<BigFloat> = v.iter().map(|e| e.extrapolated.clone()).collect();
    let mv = op.mul_vec(&vals);
    let residual = mv.iter().zip(&vals).map(|(a, b)| (a.clone() - &(eig.clone() * b)).to_f64().abs()).fold(0.0, f64::max);
    let row_norm = (0..op.rows())
        .map(|r| (0..op.cols()).map(|c| op.get(r, c).to_f64().abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let v_err = v.iter().map(|e| e.error()).fold(0.0, f64::max);
    let v_max = vals.iter().map(|b| b.to_f64().abs()).fold(0.0, f64::max);
    let error_bar = (row_norm + eig.to_f64().abs()) * v_err + eig_err * v_max;
    VectorCheck { name: name.into(), residual, error_bar, passed: residual <= error_bar }
}

/// `M(xi) Psi_0(1) = Lambda_0(xi) Psi_0(1)` within the propagated error bar.
pub fn check_psi0_eigenvector(params: &Params<BigFloat>, n: usize, xi: &BigFloat, cfg: &LimitConfig) -> Result<VectorCheck> {
    let ones = vec![xi.one_like(); n];
    let v = psi0_estimate(params, n, xi, &ones, cfg)?;
    let l0 = lambda0(params, n, xi)?;
    Ok(vector_check("M(xi) Psi_0 = Lambda_0 Psi_0", &build_m(params, n, xi)?, &v, &l0.value, l0.residual))
}

/// `S_i(x; s = 1) Psi_0(x) = exp(x_i dF_0/dx_i) Psi_0(x)` (0-based `i`).
pub fn check_scattering_eigenvector(
    params: &Params<BigFloat>,
    n: usize,
    xi: &BigFloat,
    x: &[BigFloat],
    i: usize,
    cfg: &LimitConfig,
) -> Result<VectorCheck> {
    let v = psi0_estimate(params, n, xi, x, cfg)?;
    let grad = derivative_estimate(params, n, xi, x, i, 1, cfg)?;
    let eig = (x[i].clone() * &grad.extrapolated).exp();
    let eig_err = eig.to_f64().abs() * x[i].to_f64() * grad.error();
    let s = scattering_matrix(&params.with_s_half(xi.one_like()), i + 1, x, xi)?;
    Ok(vector_check(&format!("S_{} Psi_0 = exp(x_i dF_0/dx_i) Psi_0", i + 1), &s, &v, &eig, eig_err))
}

#[derive(Clone, Debug, Serialize)]
pub struct LegendrePoint {
    pub j: f64,
    /// `None` when the optimum sits on the edge of the sampled grid.
    pub g: Option<f64>,
    pub mu_star: Option<f64>,
}

/// `G(j) = max_mu (mu j - E(mu))` for one `j`, refined by a parabola through the
/// best grid point and its neighbours.
pub fn legendre_g_at(mus: &[f64], es: &[f64], j: f64) -> Result<(f64, f64)> {
    if mus.len() != es.len() || mus.len() < 3 {
        return Err(Error::Argument("need at least three matching (mu, E) samples".into()));
    }
    if mus.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Argument("mu grid must be strictly increasing".into()));
    }
    let vals: Vec<f64> = mus.iter().zip(es).map(|(m, e)| m * j - e).collect();
    let best = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    // ties (flat E) resolve to the grid point nearest the centre
    let centre = (mus.len() - 1) as f64 / 2.0;
    let k = (0..vals.len())
        .filter(|&k| vals[k] == best)
        .min_by(|&a, &b| (a as f64 - centre).abs().total_cmp(&(b as f64 - centre).abs()))
        .expect("non-empty grid");
    if k == 0 || k == vals.len() - 1 {
        return Err(Error::Range(format!("optimum for j = {j} lies on the edge of the mu grid")));
    }
    let (x0, x1, x2) = (mus[k - 1], mus[k], mus[k + 1]);
    let (y0, y1, y2) = (vals[k - 1], vals[k], vals[k + 1]);
    let d1 = (y1 - y0) / (x1 - x0);
    let d2 = (y2 - y1) / (x2 - x1);
    let a = (d2 - d1) / (x2 - x0);
    if a >= 0.0 {
        return Ok((y1, x1));
    }
    // Newton form through the three points; vertex where the derivative vanishes
    let xs = ((x0 + x1) / 2.0 - d1 / (2.0 * a)).clamp(x0, x2);
    Ok((y0 + d1 * (xs - x0) + a * (xs - x0) * (xs - x1), xs))
}

/// Tabulated `G(j)`; points whose optimum leaves the grid are flagged with `None`.
pub fn legendre_g(mus: &[f64], es: &[f64], js: &[f64]) -> Result<Vec<LegendrePoint>> {
    js.iter()
        .map(|&j| match legendre_g_at(mus, es, j) {
            Ok((g, m)) => Ok(LegendrePoint { j, g: Some(g), mu_star: Some(m) }),
            Err(Error::Range(_)) => Ok(LegendrePoint { j, g: None, mu_star: None }),
            Err(e) => Err(e),
        })
        .collect()
}

/// `ln(gamma delta / (alpha beta) (q/p)^(N-1))`, the slope of `G(j) - G(-j)`.
pub fn gc_slope(params: &Params<BigFloat>, n: usize) -> f64 {
    let r = params.rates();
    let v = r.gamma.clone() * &r.delta / (r.alpha.clone() * &r.beta) * (r.q.clone() / &r.p).pow_i(n as i64 - 1);
    v.ln().to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ParameterPoint;

    fn phys(prec: usize) -> Params<BigFloat> {
        Params::from_point(&ParameterPoint::physical_point(), &prec)
    }

    fn bf(r: Rational) -> BigFloat {
        BigFloat::from_rational(&r, 256)
    }

    #[test]
    fn richardson_is_exact_below_top_degree() {
        let ms = [8usize, 16, 32, 64];
        let vals: Vec<BigFloat> = ms
            .iter()
            .map(|&m| {
                let h = Rational::new(1, m as i64);
                bf(Rational::new(3, 2) + h.clone() * Rational::from(5) - h.clone() * h * Rational::from(7))
            })
            .collect();
        let est = richardson(&ms, &vals, 256).unwrap();
        assert!((est.extrapolated.clone() - &bf(Rational::new(3, 2))).to_f64().abs() < 1e-60);
        assert!(est.error() < 1e-60);
    }

    #[test]
    fn richardson_error_reflects_unmodelled_terms() {
        let ms = [8usize, 16, 32, 64];
        let vals: Vec<BigFloat> = ms.iter().map(|&m| bf(Rational::new(1, m as i64)).sqrt()).collect();
        let est = richardson(&ms, &vals, 256).unwrap();
        assert!(est.error() > 1e-3);
    }

    #[test]
    fn e_mu_matches_lambda0_for_two_sites() {
        let p = phys(256);
        let rep = check_e_mu(&p, 2, &bf(Rational::new(1, 10)), &LimitConfig::default(), Some(1e-2)).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "{rep:#?}");
    }

    #[test]
    fn e_mu_vanishes_at_zero() {
        let rep = check_e_mu(&phys(256), 2, &bf(Rational::from(0)), &LimitConfig::default(), None).unwrap();
        assert!(rep.agree);
        assert!(rep.discrepancy < 1e-60);
    }

    #[test]
    fn gradient_vanishes_at_one_and_f0_is_symmetric() {
        let p = phys(256);
        let cfg = LimitConfig::default();
        let xi = bf(Rational::new(3, 2));
        let ones = vec![bf(Rational::from(1)); 2];
        let g = derivative_estimate(&p, 2, &xi, &ones, 0, 1, &cfg).unwrap();
        assert!(g.value().abs() <= g.error().max(1e-30), "{g:?}");
        let a = f0_estimate(&p, 2, &xi, &[bf(Rational::new(6, 5)), bf(Rational::new(9, 10))], &cfg).unwrap();
        let b = f0_estimate(&p, 2, &xi, &[bf(Rational::new(9, 10)), bf(Rational::new(6, 5))], &cfg).unwrap();
        assert!((a.value() - b.value()).abs() <= a.error() + b.error() + 1e-30);
    }

    #[test]
    fn f0_characterisation_at_generic_point() {
        let p = phys(256);
        let xi = bf(Rational::new(3, 2));
        let x = [bf(Rational::new(6, 5)), bf(Rational::new(9, 10))];
        let rep = check_f0_characterization(&p, 2, &xi, &x, &LimitConfig::default()).unwrap();
        assert!(rep.passed, "{rep:#?}");
        let ones = [bf(Rational::from(1)), bf(Rational::from(1))];
        assert!(matches!(check_f0_characterization(&p, 2, &xi, &ones, &LimitConfig::default()), Err(Error::Precondition(_))));
    }

    #[test]
    fn psi0_is_the_perron_vector() {
        let rep = check_psi0_eigenvector(&phys(256), 2, &bf(Rational::new(3, 2)), &LimitConfig::default()).unwrap();
        assert!(rep.passed, "{rep:#?}");
    }

    #[test]
    fn psi0_diagonalises_scattering() {
        let x = [bf(Rational::new(6, 5)), bf(Rational::new(9, 10))];
        let rep = check_scattering_eigenvector(&phys(256), 2, &bf(Rational::new(3, 2)), &x, 0, &LimitConfig::default()).unwrap();
        assert!(rep.passed, "{rep:#?}");
    }

    #[test]
    fn xi_beyond_bound_is_refused() {
        let p = phys(256);
        let bound = xi_bound(&p).unwrap().to_f64();
        assert!((bound - 1.0 / (0.6 * 10.0 / 9.0 * 5.0 / 7.0 * 11.0 / 10.0)).abs() < 1e-12);
        let ones = vec![bf(Rational::from(1)); 2];
        let err = f0_estimate(&p, 2, &bf(Rational::from(2)), &ones, &LimitConfig::default()).unwrap_err();
        assert!(matches!(err, Error::Range(_)));
    }

    #[test]
    fn legendre_flat_and_quadratic() {
        let mus: Vec<f64> = (-20..=20).map(|k| k as f64 / 10.0).collect();
        let zero = vec![0.0; mus.len()];
        let g = legendre_g(&mus, &zero, &[0.0, 0.5]).unwrap();
        assert_eq!(g[0].g, Some(0.0));
        assert_eq!(g[1].g, None);
        // E = mu^2 / 2 gives G = j^2 / 2
        let es: Vec<f64> = mus.iter().map(|m| m * m / 2.0).collect();
        let (v, m) = legendre_g_at(&mus, &es, 0.33).unwrap();
        assert!((v - 0.33 * 0.33 / 2.0).abs() < 1e-12 && (m - 0.33).abs() < 1e-12);
    }

    #[test]
    fn legendre_gc_symmetry() {
        let p = phys(128);
        let n = 2;
        let mus: Vec<f64> = (-60..=110).map(|k| k as f64 / 20.0).collect();
        let es: Vec<f64> = mus
            .iter()
            .map(|&m| lambda0(&p, n, &BigFloat::with_precision(m, 128).exp()).unwrap().value.to_f64())
            .collect();
        let slope = gc_slope(&p, n);
        for j in [0.02, 0.05, 0.1] {
            let (gp, _) = legendre_g_at(&mus, &es, j).unwrap();
            let (gm, _) = legendre_g_at(&mus, &es, -j).unwrap();
            assert!((gp - gm - j * slope).abs() < 1e-4, "j={j} {gp} {gm} {}", j * slope);
        }
        let g = legendre_g(&mus, &es, &[-0.04, -0.02, 0.0, 0.02, 0.04]).unwrap();
        let v: Vec<f64> = g.iter().map(|p| p.g.unwrap()).collect();
        assert!(v.windows(3).all(|w| w[0] + w[2] - 2.0 * w[1] >= -1e-9));
    }
}
