//! Multivariate Laurent polynomials over a [`Scalar`] field.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Mul, Neg, Sub};

use serde_json::{json, Value};

use crate::composition::{orbit, Composition};
use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// Sparse Laurent polynomial in `nvars` variables. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPolynomial<F> {
    nvars: usize,
    terms: BTreeMap<Composition, F>,
}

/// A change of variables acting on polynomials.
#[derive(Clone, Debug, PartialEq)]
pub enum Substitution<F> {
    /// `x_i <-> x_j` (0-based).
    Swap(usize, usize),
    /// `x_i -> 1/x_i`.
    Invert(usize),
    /// `x_i -> c x_i`.
    Scale(usize, F),
    /// `x_i -> c / x_i`. With `i = 0` and `c = s` this is the affine reflection.
    Reflect(usize, F),
}

impl<F: Scalar> Substitution<F> {
    pub fn s0(s: F) -> Substitution<F> {
        Substitution::Reflect(0, s)
    }

    pub fn inverse(&self) -> Substitution<F> {
        match self {
            Substitution::Scale(i, c) => Substitution::Scale(*i, c.inv()),
            other => other.clone(),
        }
    }
}

impl<F: Scalar> LaurentPolynomial<F> {
    pub fn zero(nvars: usize) -> Self {
        LaurentPolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        Self::monomial(Composition::zeros(nvars), c)
    }

    pub fn monomial(exp: Composition, c: F) -> Self {
        let nvars = exp.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPolynomial { nvars, terms }
    }

    /// The variable `x_i` (0-based).
    pub fn var(i: usize, nvars: usize, ctx: &F::Ctx) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(Composition(e), F::one(ctx))
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Composition, F)>) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::Argument(format!("exponent {e} does not have {nvars} entries")));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Composition, &F)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Composition, F> {
        self.terms
    }

    pub fn coeff(&self, exp: &Composition) -> Option<&F> {
        self.terms.get(exp)
    }

    /// Coefficient, or zero in the context `ctx`.
    pub fn coeff_or_zero(&self, exp: &Composition, ctx: &F::Ctx) -> F {
        self.terms.get(exp).cloned().unwrap_or_else(|| F::zero(ctx))
    }

    /// Per-variable `(min, max)` exponents; `None` for the zero polynomial.
    pub fn degree_box(&self) -> Option<Vec<(i32, i32)>> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let mut b: Vec<(i32, i32)> = first.0.iter().map(|&e| (e, e)).collect();
        for e in it {
            for (slot, &v) in b.iter_mut().zip(&e.0) {
                slot.0 = slot.0.min(v);
                slot.1 = slot.1.max(v);
            }
        }
        Some(b)
    }

    pub fn add_term(&mut self, exp: Composition, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// `self += c * x^shift * other`.
    pub fn add_scaled_shifted(&mut self, other: &Self, c: &F, shift: Option<&Composition>) {
        for (e, v) in &other.terms {
            let exp = match shift {
                Some(s) => Composition(e.0.iter().zip(&s.0).map(|(a, b)| a + b).collect()),
                None => e.clone(),
            };
            self.add_term(exp, v.clone() * c);
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        let terms = self.terms.iter().map(|(e, v)| (e.clone(), v.clone() * c)).filter(|(_, v)| !v.is_zero()).collect();
        LaurentPolynomial { nvars: self.nvars, terms }
    }

    /// Multiply by the monomial `x^shift`.
    pub fn shift(&self, shift: &Composition) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, v)| (Composition(e.0.iter().zip(&shift.0).map(|(a, b)| a + b).collect()), v.clone()))
            .collect();
        LaurentPolynomial { nvars: self.nvars, terms }
    }

    pub fn map_coeffs<G: Scalar>(&self, f: impl Fn(&F) -> G) -> LaurentPolynomial<G> {
        let mut out = LaurentPolynomial::zero(self.nvars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), f(v));
        }
        out
    }

    pub fn substitute(&self, action: &Substitution<F>) -> Result<Self> {
        let n = self.nvars;
        let check = |i: usize| {
            if i >= n {
                Err(Error::Argument(format!("variable index {i} out of range for {n} variables")))
            } else {
                Ok(())
            }
        };
        let mut out = Self::zero(n);
        match action {
            Substitution::Swap(i, j) => {
                check(*i)?;
                check(*j)?;
                for (e, v) in &self.terms {
                    let mut e = e.clone();
                    e.0.swap(*i, *j);
                    out.terms.insert(e, v.clone());
                }
            }
            Substitution::Invert(i) => {
                check(*i)?;
                for (e, v) in &self.terms {
                    let mut e = e.clone();
                    e.0[*i] = -e.0[*i];
                    out.terms.insert(e, v.clone());
                }
            }
            Substitution::Scale(i, c) | Substitution::Reflect(i, c) => {
                check(*i)?;
                if c.is_zero() {
                    return Err(Error::Argument("substitution by a zero scale".into()));
                }
                let reflect = matches!(action, Substitution::Reflect(..));
                let mut powers = HashMap::new();
                for (e, v) in &self.terms {
                    let k = e.0[*i];
                    let p = powers.entry(k).or_insert_with(|| c.pow_i(k as i64)).clone();
                    let mut e = e.clone();
                    if reflect {
                        e.0[*i] = -k;
                    }
                    out.add_term(e, v.clone() * &p);
                }
            }
        }
        Ok(out)
    }

    pub fn evaluate(&self, point: &[F]) -> Result<F> {
        if point.len() != self.nvars {
            return Err(Error::Argument(format!("point has {} coordinates, expected {}", point.len(), self.nvars)));
        }
        if let Some(i) = point.iter().position(|x| x.is_zero()) {
            return Err(Error::Domain(format!("coordinate x_{} is zero", i + 1)));
        }
        let ctx = match point.first() {
            Some(x) => x.ctx(),
            None => return Ok(self.terms.values().next().cloned().expect("nvars = 0 polynomial needs a coefficient")),
        };
        let mut cache: Vec<HashMap<i32, F>> = vec![HashMap::new(); self.nvars];
        let mut acc = F::zero(&ctx);
        for (e, v) in &self.terms {
            let mut term = v.clone();
            for (i, &k) in e.0.iter().enumerate() {
                if k != 0 {
                    let p = cache[i].entry(k).or_insert_with(|| point[i].pow_i(k as i64));
                    term = term * &*p;
                }
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    /// Exact quotient `self / divisor`, where `divisor` is monic of degree
    /// `d >= 1` in `var` with lowest `var`-degree 0. Any nonzero remainder is
    /// reported as an internal-consistency failure.
    pub fn div_exact(&self, divisor: &Self, var: usize) -> Result<Self> {
        let ctx = match self.terms.values().next() {
            Some(c) => c.ctx(),
            None => return Ok(Self::zero(self.nvars)),
        };
        let (dlo, dhi) = divisor
            .degree_box()
            .map(|b| b[var])
            .ok_or_else(|| Error::Argument("division by zero polynomial".into()))?;
        let lead: Vec<(&Composition, &F)> = divisor.terms.iter().filter(|(e, _)| e.0[var] == dhi).collect();
        let monic = lead.len() == 1 && lead[0].0 .0.iter().enumerate().all(|(j, &k)| j == var || k == 0) && {
            let one = F::one(&ctx);
            *lead[0].1 == one
        };
        if dlo != 0 || dhi < 1 || !monic {
            return Err(Error::Argument(format!("divisor must be monic in x_{} with constant term in it", var + 1)));
        }
        let lo = self.terms.keys().map(|e| e.0[var]).min().expect("nonzero");
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        let minus_one = -F::one(&ctx);
        loop {
            let top = match rem.terms.keys().map(|e| e.0[var]).max() {
                Some(t) if t >= lo + dhi => t,
                _ => break,
            };
            let slice: Vec<(Composition, F)> =
                rem.terms.iter().filter(|(e, _)| e.0[var] == top).map(|(e, v)| (e.clone(), v.clone())).collect();
            for (e, v) in slice {
                let mut qe = e;
                qe.0[var] -= dhi;
                let term = Self::monomial(qe.clone(), v.clone());
                rem.add_scaled_shifted(divisor, &(v.clone() * &minus_one), Some(&qe));
                quot.add_scaled_shifted(&term, &F::one(&ctx), None);
            }
        }
        let tol = self.max_coeff_magnitude() * F::one(&ctx).tolerance();
        if rem.terms.values().any(|v| v.magnitude() > tol) {
            return Err(Error::InternalConsistency(format!(
                "inexact Laurent division in x_{}: remainder has {} terms",
                var + 1,
                rem.len()
            )));
        }
        Ok(quot)
    }

    /// W0-invariance: fixed by every swap of neighbours and by `x_N -> 1/x_N`.
    pub fn is_w0_invariant(&self) -> bool {
        let n = self.nvars;
        (0..n.saturating_sub(1)).all(|i| self.substitute(&Substitution::Swap(i, i + 1)).ok().as_ref() == Some(self))
            && (n == 0 || self.substitute(&Substitution::Invert(n - 1)).ok().as_ref() == Some(self))
    }

    /// Sum of all coefficients weighted by a magnitude, for residual reports.
    pub fn max_coeff_magnitude(&self) -> f64 {
        self.terms.values().map(|v| v.magnitude()).fold(0.0, f64::max)
    }

    /// JSON in the `{"nvars", "terms": [{"exp", "num", "den"}]}` schema.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(e, v)| {
                let (num, den) = v.json_parts();
                json!({"exp": e.0, "num": num, "den": den})
            })
            .collect();
        json!({"nvars": self.nvars, "terms": terms})
    }
}

impl LaurentPolynomial<Rational> {
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("polynomial JSON: {m}"));
        let nvars = v["nvars"].as_u64().ok_or_else(|| bad("missing nvars"))? as usize;
        let terms = v["terms"].as_array().ok_or_else(|| bad("missing terms"))?;
        let mut p = Self::zero(nvars);
        for t in terms {
            let exp: Vec<i32> = serde_json::from_value(t["exp"].clone()).map_err(|e| bad(&e.to_string()))?;
            let num = t["num"].as_str().ok_or_else(|| bad("num must be a string"))?;
            let den = t["den"].as_str().ok_or_else(|| bad("den must be a string"))?;
            let c: Rational = format!("{num}/{den}").parse()?;
            if exp.len() != nvars {
                return Err(bad("exponent length differs from nvars"));
            }
            p.add_term(Composition(exp), c);
        }
        Ok(p)
    }
}

/// Sum of `x^mu` over the W0-orbit of the partition `lambda`.
pub fn orbit_sum<F: Scalar>(lambda: &Composition, ctx: &F::Ctx) -> Result<LaurentPolynomial<F>> {
    if !lambda.is_partition() {
        return Err(Error::Argument(format!("{lambda} is not a partition")));
    }
    let mut p = LaurentPolynomial::zero(lambda.len());
    for mu in orbit(lambda) {
        p.add_term(mu, F::one(ctx));
    }
    Ok(p)
}

impl<F: Scalar> Add for &LaurentPolynomial<F> {
    type Output = LaurentPolynomial<F>;
    fn add(self, rhs: &LaurentPolynomial<F>) -> LaurentPolynomial<F> {
        let mut out = self.clone();
        for (e, v) in &rhs.terms {
            out.add_term(e.clone(), v.clone());
        }
        out
    }
}

impl<F: Scalar> Add for LaurentPolynomial<F> {
    type Output = LaurentPolynomial<F>;
    fn add(mut self, rhs: LaurentPolynomial<F>) -> LaurentPolynomial<F> {
        for (e, v) in rhs.terms {
            self.add_term(e, v);
        }
        self
    }
}

impl<F: Scalar> Neg for &LaurentPolynomial<F> {
    type Output = LaurentPolynomial<F>;
    fn neg(self) -> LaurentPolynomial<F> {
        let terms = self.terms.iter().map(|(e, v)| (e.clone(), -v.clone())).collect();
        LaurentPolynomial { nvars: self.nvars, terms }
    }
}

impl<F: Scalar> Neg for LaurentPolynomial<F> {
    type Output = LaurentPolynomial<F>;
    fn neg(self) -> LaurentPolynomial<F> {
        -&self
    }
}

impl<F: Scalar> Sub for &LaurentPolynomial<F> {
    type Output = LaurentPolynomial<F>;
    fn sub(self, rhs: &LaurentPolynomial<F>) -> LaurentPolynomial<F> {
        let mut out = self.clone();
        for (e, v) in &rhs.terms {
            out.add_term(e.clone(), -v.clone());
        }
        out
    }
}

impl<F: Scalar> Sub for LaurentPolynomial<F> {
    type Output = LaurentPolynomial<F>;
    fn sub(self, rhs: LaurentPolynomial<F>) -> LaurentPolynomial<F> {
        &self - &rhs
    }
}

impl<F: Scalar> Mul for &LaurentPolynomial<F> {
    type Output = LaurentPolynomial<F>;
    fn mul(self, rhs: &LaurentPolynomial<F>) -> LaurentPolynomial<F> {
        assert_eq!(self.nvars, rhs.nvars, "multiplying polynomials in different numbers of variables");
        let mut out = LaurentPolynomial::zero(self.nvars);
        for (e1, v1) in &self.terms {
            for (e2, v2) in &rhs.terms {
                let e = Composition(e1.0.iter().zip(&e2.0).map(|(a, b)| a + b).collect());
                out.add_term(e, v1.clone() * v2);
            }
        }
        out
    }
}

impl<F: Scalar> Mul for LaurentPolynomial<F> {
    type Output = LaurentPolynomial<F>;
    fn mul(self, rhs: LaurentPolynomial<F>) -> LaurentPolynomial<F> {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn mono(e: &[i32], c: Rational) -> LaurentPolynomial<Rational> {
        LaurentPolynomial::monomial(Composition(e.to_vec()), c)
    }

    #[test]
    fn substitution_examples() {
        let f = mono(&[1, 1], q(1, 1));
        assert_eq!(f.substitute(&Substitution::Swap(0, 1)).unwrap(), f);
        let g = mono(&[1], q(1, 1)).substitute(&Substitution::s0(q(4, 9))).unwrap();
        assert_eq!(g, mono(&[-1], q(4, 9)));
        let h = mono(&[2, -1], q(1, 1)).substitute(&Substitution::Invert(0)).unwrap();
        assert_eq!(h, mono(&[-2, -1], q(1, 1)));
        assert!(f.substitute(&Substitution::Scale(0, q(0, 1))).is_err());
        assert!(f.substitute(&Substitution::Swap(0, 2)).is_err());
    }

    #[test]
    fn evaluation_examples() {
        let f = mono(&[1], q(1, 1)) + mono(&[-1], q(1, 1));
        assert_eq!(f.evaluate(&[q(2, 1)]).unwrap(), q(5, 2));
        let one = LaurentPolynomial::constant(2, q(1, 1));
        assert_eq!(one.evaluate(&[q(3, 1), q(7, 5)]).unwrap(), q(1, 1));
        let g = mono(&[1, -1], q(1, 1));
        assert_eq!(g.evaluate(&[q(3, 1), q(1, 2)]).unwrap(), q(6, 1));
        assert!(matches!(g.evaluate(&[q(0, 1), q(1, 2)]), Err(Error::Domain(_))));
    }

    #[test]
    fn orbit_sum_examples() {
        let p: LaurentPolynomial<Rational> = orbit_sum(&Composition(vec![1]), &()).unwrap();
        assert_eq!(p, mono(&[1], q(1, 1)) + mono(&[-1], q(1, 1)));
        let p: LaurentPolynomial<Rational> = orbit_sum(&Composition(vec![0, 0]), &()).unwrap();
        assert_eq!(p, LaurentPolynomial::constant(2, q(1, 1)));
        let p: LaurentPolynomial<Rational> = orbit_sum(&Composition(vec![1, 0]), &()).unwrap();
        assert_eq!(p.len(), 4);
        assert!(p.is_w0_invariant());
        assert!(orbit_sum::<Rational>(&Composition(vec![0, 1]), &()).is_err());
    }

    #[test]
    fn exact_division() {
        // (x1^3 - x2^3) / (x1 - x2) = x1^2 + x1 x2 + x2^2
        let num = mono(&[3, 0], q(1, 1)) - mono(&[0, 3], q(1, 1));
        let den = mono(&[1, 0], q(1, 1)) - mono(&[0, 1], q(1, 1));
        let quo = num.div_exact(&den, 0).unwrap();
        assert_eq!(quo, mono(&[2, 0], q(1, 1)) + mono(&[1, 1], q(1, 1)) + mono(&[0, 2], q(1, 1)));
        // x^-1 - s x is not divisible by x^2 - s
        let s = q(4, 9);
        let num = mono(&[-1], q(1, 1)) - mono(&[1], s.clone());
        let den = mono(&[2], q(1, 1)) - LaurentPolynomial::constant(1, s.clone());
        assert!(matches!(num.div_exact(&den, 0), Err(Error::InternalConsistency(_))));
        // (x - s x^-1) / (x^2 - s) = x^-1
        let good = mono(&[1], q(1, 1)) - mono(&[-1], s.clone());
        assert_eq!(good.div_exact(&den, 0).unwrap(), mono(&[-1], q(1, 1)));
    }

    #[test]
    fn json_roundtrip() {
        let f = mono(&[1, -2], q(-3, 4)) + mono(&[0, 0], q(5, 1));
        let v = f.to_json();
        assert_eq!(v["nvars"], 2);
        assert_eq!(LaurentPolynomial::from_json(&v).unwrap(), f);
    }
}
