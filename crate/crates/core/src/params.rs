//! Parameter points: the six Hecke half-parameters, the fugacity, and the
//! dictionary to the ASEP hopping rates.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// Exact parameter point. Field names follow the half-power convention:
/// `t_half` is `t^(1/2)` and so on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParameterPoint {
    pub s_half: Rational,
    pub t_half: Rational,
    pub t0_half: Rational,
    pub u0_half: Rational,
    #[serde(rename = "tN_half")]
    pub tn_half: Rational,
    #[serde(rename = "uN_half")]
    pub un_half: Rational,
    pub xi: Rational,
}

/// Hopping rates of the open ASEP. `p` right, `q` left, `alpha`/`gamma`
/// injection/extraction on the left, `delta`/`beta` injection/extraction on the right.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rates {
    pub p: Rational,
    pub q: Rational,
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
    pub delta: Rational,
}

impl Rates {
    pub fn is_physical(&self) -> bool {
        [&self.p, &self.q, &self.alpha, &self.beta, &self.gamma, &self.delta]
            .iter()
            .all(|r| r.is_positive())
    }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn one() -> Rational {
    Rational::from(1)
}

/// Positive root of `u - 1/u = r`.
fn kappa_plus(r: &Rational) -> Result<Rational> {
    let disc = r.clone() * r + Rational::from(4);
    let root = disc.sqrt_exact().ok_or_else(|| {
        Error::Argument(format!(
            "r^2 + 4 = {disc} is not the square of a rational (r = {r}); choose rates with perfect-square combinations"
        ))
    })?;
    Ok((r.clone() + root) / Rational::from(2))
}

fn exact_sqrt(name: &str, v: &Rational) -> Result<Rational> {
    if !v.is_positive() {
        return Err(Error::Argument(format!("{name} = {v} must be positive")));
    }
    v.sqrt_exact().ok_or_else(|| {
        Error::Argument(format!("{name} = {v} is not a perfect square; choose rates whose ratios are squares of rationals"))
    })
}

impl ParameterPoint {
    /// Generic point used for all exact identity checks. Its rates are not all positive.
    pub fn default_point() -> ParameterPoint {
        ParameterPoint {
            s_half: q(4, 9),
            t_half: q(2, 3),
            t0_half: q(3, 5),
            u0_half: q(7, 4),
            tn_half: q(5, 7),
            un_half: q(9, 5),
            xi: one(),
        }
    }

    /// A second generic point, independent of the default one.
    pub fn alternate_point() -> ParameterPoint {
        ParameterPoint {
            s_half: q(3, 7),
            t_half: q(5, 8),
            t0_half: q(4, 7),
            u0_half: q(11, 6),
            tn_half: q(7, 9),
            un_half: q(8, 3),
            xi: one(),
        }
    }

    /// Same `s`, `t`, `t0`, `tN` as the default point but with positive rates
    /// `q = 1, p = 4/9, alpha = 30/77, gamma = 250/231, beta = 2750/3429, delta = 5390/3429`.
    /// The boundary products are small enough that the scaled limits exist for
    /// `xi < 1.909`.
    pub fn physical_point() -> ParameterPoint {
        ParameterPoint { u0_half: q(10, 9), un_half: q(11, 10), ..ParameterPoint::default_point() }
    }

    /// Physical point with `t0 tN t^(N-1) = 1`, where the stationary state is a product measure.
    pub fn equilibrium_point(n: usize) -> ParameterPoint {
        let t_half = q(2, 3);
        let t0_half = (one() / &t_half).pow_i(n as i64 - 1);
        // u0^(1/2) = 1/(2 t0^(1/2)) keeps the left rates positive for every n
        let u0_half = (Rational::from(2) * &t0_half).inv();
        ParameterPoint {
            s_half: q(4, 9),
            t_half,
            t0_half,
            u0_half,
            tn_half: one(),
            un_half: q(1, 2),
            xi: one(),
        }
    }

    pub fn with_xi(mut self, xi: Rational) -> ParameterPoint {
        self.xi = xi;
        self
    }

    pub fn with_s_half(mut self, s_half: Rational) -> ParameterPoint {
        self.s_half = s_half;
        self
    }

    /// Build from hopping rates. `s_half` and `xi` are not fixed by the rates.
    pub fn from_rates(rates: &Rates, s_half: Rational, xi: Rational) -> Result<ParameterPoint> {
        let t_half = exact_sqrt("p/q", &(rates.p.clone() / &rates.q))?;
        let t0_half = exact_sqrt("alpha/gamma", &(rates.alpha.clone() / &rates.gamma))?;
        let tn_half = exact_sqrt("beta/delta", &(rates.beta.clone() / &rates.delta))?;
        let sq_ag = exact_sqrt("alpha*gamma", &(rates.alpha.clone() * &rates.gamma))?;
        let sq_bd = exact_sqrt("beta*delta", &(rates.beta.clone() * &rates.delta))?;
        let diff = rates.p.clone() - &rates.q;
        let r0 = (diff.clone() + &rates.gamma - &rates.alpha) / &sq_ag;
        let rn = (diff + &rates.delta - &rates.beta) / &sq_bd;
        Ok(ParameterPoint {
            s_half,
            t_half,
            t0_half,
            u0_half: kappa_plus(&r0)?,
            tn_half,
            un_half: kappa_plus(&rn)?,
            xi,
        })
    }

    /// Rates with the overall scale fixed by `q = 1`. Signs are whatever the
    /// dictionary produces; see [`Rates::is_physical`].
    pub fn rates(&self) -> Result<Rates> {
        let t = self.t_half.square();
        let t0 = self.t0_half.square();
        let tn = self.tn_half.square();
        let p = t;
        let qq = one();
        let diff = p.clone() - &qq;
        let c0 = self.u0_half.clone() - self.u0_half.inv();
        let cn = self.un_half.clone() - self.un_half.inv();
        let den0 = c0 * &self.t0_half + &t0 - one();
        let denn = cn * &self.tn_half + &tn - one();
        if den0.is_zero() || denn.is_zero() || diff.is_zero() {
            return Err(Error::DegenerateParameters("boundary rates are zero or infinite at this point".into()));
        }
        let gamma = diff.clone() / &den0;
        let delta = diff / &denn;
        Ok(Rates { alpha: t0 * &gamma, beta: tn * &delta, gamma, delta, p, q: qq })
    }

    pub fn is_physical(&self) -> bool {
        self.rates().map(|r| r.is_physical()).unwrap_or(false)
    }

    /// Image of `xi` under the Gallavotti-Cohen involution for `n` sites.
    pub fn gc_xi(&self, n: usize, xi: &Rational) -> Rational {
        let t0 = self.t0_half.square();
        let tn = self.tn_half.square();
        let t = self.t_half.square();
        (t0 * &tn * t.pow_i(n as i64 - 1) * xi).inv()
    }

    /// Parse the flat `key=value` format. Missing Hecke keys take the default
    /// point's values; rate keys, if any is present, must all be present.
    pub fn parse(text: &str) -> Result<ParameterPoint> {
        let mut kv = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key=value, got {raw:?}", lineno + 1)))?;
            let key = k.trim().to_string();
            let value: Rational =
                v.parse().map_err(|e| Error::Parse(format!("line {}: key {key}: {e}", lineno + 1)))?;
            if kv.insert(key.clone(), value).is_some() {
                return Err(Error::Parse(format!("line {}: duplicate key {key}", lineno + 1)));
            }
        }
        const HECKE: [&str; 6] = ["s_half", "t_half", "t0_half", "u0_half", "tN_half", "uN_half"];
        const RATES: [&str; 6] = ["p", "q", "alpha", "beta", "gamma", "delta"];
        if let Some(k) = kv.keys().find(|k| !HECKE.contains(&k.as_str()) && !RATES.contains(&k.as_str()) && *k != "xi") {
            return Err(Error::Parse(format!("unknown key {k}")));
        }
        let mut pt = ParameterPoint::default_point();
        let take = |name: &str, slot: &mut Rational| {
            if let Some(v) = kv.get(name) {
                *slot = v.clone();
            }
        };
        take("s_half", &mut pt.s_half);
        take("xi", &mut pt.xi);
        let has_rates = RATES.iter().any(|k| kv.contains_key(*k));
        if has_rates {
            if let Some(k) = HECKE[1..].iter().find(|k| kv.contains_key(**k)) {
                return Err(Error::Parse(format!("key {k} cannot be combined with rate keys")));
            }
            let get = |k: &str| kv.get(k).cloned().ok_or_else(|| Error::Parse(format!("rate key {k} missing")));
            let rates = Rates {
                p: get("p")?,
                q: get("q")?,
                alpha: get("alpha")?,
                beta: get("beta")?,
                gamma: get("gamma")?,
                delta: get("delta")?,
            };
            return ParameterPoint::from_rates(&rates, pt.s_half, pt.xi);
        }
        take("t_half", &mut pt.t_half);
        take("t0_half", &mut pt.t0_half);
        take("u0_half", &mut pt.u0_half);
        take("tN_half", &mut pt.tn_half);
        take("uN_half", &mut pt.un_half);
        for (name, v) in [
            ("s_half", &pt.s_half),
            ("t_half", &pt.t_half),
            ("t0_half", &pt.t0_half),
            ("u0_half", &pt.u0_half),
            ("tN_half", &pt.tn_half),
            ("uN_half", &pt.un_half),
            ("xi", &pt.xi),
        ] {
            if v.is_zero() {
                return Err(Error::Argument(format!("{name} must be nonzero")));
            }
        }
        Ok(pt)
    }

    pub fn from_file(path: &Path) -> Result<ParameterPoint> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Argument(format!("cannot read {}: {e}", path.display())))?;
        ParameterPoint::parse(&text)
    }

    pub fn to_config(&self) -> String {
        format!(
            "s_half={}\nt_half={}\nt0_half={}\nu0_half={}\ntN_half={}\nuN_half={}\nxi={}\n",
            self.s_half, self.t_half, self.t0_half, self.u0_half, self.tn_half, self.un_half, self.xi
        )
    }
}

/// A parameter point specialised to a coefficient field, with all derived
/// quantities precomputed. `s_half` may be overridden by a non-rational value.
#[derive(Clone, Debug)]
pub struct Params<F> {
    pub s_half: F,
    pub t_half: F,
    pub t0_half: F,
    pub u0_half: F,
    pub tn_half: F,
    pub un_half: F,
    pub xi: F,
    pub s: F,
    pub t: F,
    pub t0: F,
    pub tn: F,
    /// Noumi parameters.
    pub a: F,
    pub b: F,
    pub c: F,
    pub d: F,
}

impl<F: Scalar> Params<F> {
    pub fn from_point(pt: &ParameterPoint, ctx: &F::Ctx) -> Params<F> {
        let f = |r: &Rational| F::from_rational(r, ctx);
        Params::from_halves(
            f(&pt.s_half),
            f(&pt.t_half),
            f(&pt.t0_half),
            f(&pt.u0_half),
            f(&pt.tn_half),
            f(&pt.un_half),
            f(&pt.xi),
        )
    }

    pub fn from_halves(s_half: F, t_half: F, t0_half: F, u0_half: F, tn_half: F, un_half: F, xi: F) -> Params<F> {
        let a = s_half.clone() * &t0_half * &u0_half;
        let b = -(s_half.clone() * &t0_half / &u0_half);
        let c = tn_half.clone() * &un_half;
        let d = -(tn_half.clone() / &un_half);
        Params {
            s: s_half.square(),
            t: t_half.square(),
            t0: t0_half.square(),
            tn: tn_half.square(),
            a,
            b,
            c,
            d,
            s_half,
            t_half,
            t0_half,
            u0_half,
            tn_half,
            un_half,
            xi,
        }
    }

    pub fn with_s_half(&self, s_half: F) -> Params<F> {
        Params::from_halves(
            s_half,
            self.t_half.clone(),
            self.t0_half.clone(),
            self.u0_half.clone(),
            self.tn_half.clone(),
            self.un_half.clone(),
            self.xi.clone(),
        )
    }

    /// Same point with `u0 := t0` and `uN := tN` (the tilde boundary).
    pub fn tilde(&self) -> Params<F> {
        Params::from_halves(
            self.s_half.clone(),
            self.t_half.clone(),
            self.t0_half.clone(),
            self.t0_half.clone(),
            self.tn_half.clone(),
            self.tn_half.clone(),
            self.xi.clone(),
        )
    }

    pub fn with_xi(&self, xi: F) -> Params<F> {
        let mut p = self.clone();
        p.xi = xi;
        p
    }

    pub fn ctx(&self) -> F::Ctx {
        self.t.ctx()
    }

    pub fn c0(&self) -> F {
        self.u0_half.clone() - self.u0_half.inv()
    }

    pub fn cn(&self) -> F {
        self.un_half.clone() - self.un_half.inv()
    }

    /// Rates with `q = 1`, in the field `F`.
    pub fn rates(&self) -> RatesF<F> {
        let one = self.t.one_like();
        let diff = self.t.clone() - &one;
        let gamma = diff.clone() / (self.c0() * &self.t0_half + &self.t0 - &one);
        let delta = diff / (self.cn() * &self.tn_half + &self.tn - &one);
        RatesF {
            p: self.t.clone(),
            q: one,
            alpha: self.t0.clone() * &gamma,
            beta: self.tn.clone() * &delta,
            gamma,
            delta,
        }
    }

    /// `t0^-1 tN^-1 t^-(N-1) xi^-1`.
    pub fn gc_xi(&self, n: usize, xi: &F) -> F {
        (self.t0.clone() * &self.tn * self.t.pow_i(n as i64 - 1) * xi).inv()
    }
}

/// Rates in a coefficient field, together with the signed square roots
/// used in the transition matrix.
#[derive(Clone, Debug)]
pub struct RatesF<F> {
    pub p: F,
    pub q: F,
    pub alpha: F,
    pub beta: F,
    pub gamma: F,
    pub delta: F,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn physical_point_rates() {
        let r = ParameterPoint::physical_point().rates().unwrap();
        assert_eq!(r.p, q(4, 9));
        assert_eq!(r.q, q(1, 1));
        assert_eq!(r.alpha, q(30, 77));
        assert_eq!(r.gamma, q(250, 231));
        assert_eq!(r.beta, q(2750, 3429));
        assert_eq!(r.delta, q(5390, 3429));
        assert!(r.is_physical());
        assert!(!ParameterPoint::default_point().is_physical());
    }

    #[test]
    fn rates_roundtrip() {
        for pt in [ParameterPoint::physical_point(), ParameterPoint::default_point(), ParameterPoint::equilibrium_point(3)] {
            let r = pt.rates().unwrap();
            if !r.is_physical() {
                continue;
            }
            let back = ParameterPoint::from_rates(&r, pt.s_half.clone(), pt.xi.clone()).unwrap();
            assert_eq!(back, pt);
        }
    }

    #[test]
    fn equilibrium_condition() {
        for n in 1..=4 {
            let pt = ParameterPoint::equilibrium_point(n);
            assert!(pt.is_physical());
            assert_eq!(pt.gc_xi(n, &q(1, 1)), q(1, 1));
        }
    }

    #[test]
    fn noumi_parameters() {
        let p: Params<Rational> = Params::from_point(&ParameterPoint::default_point(), &());
        assert_eq!(p.a, q(4, 9) * q(3, 5) * q(7, 4));
        assert_eq!(p.b, -(q(4, 9) * q(3, 5) / q(7, 4)));
        assert_eq!(p.c, q(5, 7) * q(9, 5));
        assert_eq!(p.d, -(q(5, 7) / q(9, 5)));
    }

    #[test]
    fn parse_config() {
        let pt = ParameterPoint::parse("# comment\nt_half = 1/2\nxi=3/2\n").unwrap();
        assert_eq!(pt.t_half, q(1, 2));
        assert_eq!(pt.xi, q(3, 2));
        assert_eq!(pt.s_half, q(4, 9));
        let text = ParameterPoint::physical_point().to_config();
        assert_eq!(ParameterPoint::parse(&text).unwrap(), ParameterPoint::physical_point());
        let rates = "p=4/9\nq=1\nalpha=30/77\ngamma=250/231\nbeta=2750/3429\ndelta=5390/3429\n";
        assert_eq!(ParameterPoint::parse(rates).unwrap(), ParameterPoint::physical_point());
        assert!(ParameterPoint::parse("p=1/4\n").is_err());
        assert!(ParameterPoint::parse("bogus=1\n").is_err());
        assert!(ParameterPoint::parse("t_half\n").is_err());
        assert!(ParameterPoint::parse("t_half=0\n").is_err());
    }

    #[test]
    fn irrational_rates_rejected() {
        let r = Rates { p: q(2, 1), q: q(1, 1), alpha: q(1, 1), beta: q(1, 1), gamma: q(1, 1), delta: q(1, 1) };
        let err = ParameterPoint::from_rates(&r, q(1, 2), q(1, 1)).unwrap_err();
        assert!(matches!(err, Error::Argument(_)));
    }
}
