//! Noumi's polynomial representation of the affine Hecke algebra of type C_N.
//!
//! Generators are indexed `0..=N`: `T_0` acts on `x_1` through the affine
//! reflection `x_1 -> s/x_1`, `T_i` (`1 <= i < N`) through `x_i <-> x_{i+1}`,
//! and `T_N` through `x_N -> 1/x_N`.

use rand::Rng;

use crate::composition::Composition;
use crate::error::{Error, Result};
use crate::laurent::{LaurentPolynomial, Substitution};
use crate::params::{ParameterPoint, Params};
use crate::report::{CheckEntry, Report};
use crate::sampling::random_polynomial;
use crate::scalar::{Rational, Scalar};

type Poly<F> = LaurentPolynomial<F>;

/// Parameters and lattice size for the operators.
#[derive(Clone, Debug)]
pub struct HeckeContext<F: Scalar> {
    pub params: Params<F>,
    pub n: usize,
    /// `x_1^2 - s`
    den0: Poly<F>,
    /// `x_N^2 - 1`
    den_n: Poly<F>,
    /// `(x_1 - a)(x_1 - b)`
    num0: Poly<F>,
    /// `(c x_N - 1)(d x_N - 1)`
    num_n: Poly<F>,
}

impl HeckeContext<Rational> {
    pub fn exact(pt: &ParameterPoint, n: usize) -> Result<Self> {
        HeckeContext::new(Params::from_point(pt, &()), n)
    }
}

impl<F: Scalar> HeckeContext<F> {
    pub fn new(params: Params<F>, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument("need at least one site".into()));
        }
        for (name, v) in [
            ("s^(1/2)", &params.s_half),
            ("t^(1/2)", &params.t_half),
            ("t0^(1/2)", &params.t0_half),
            ("u0^(1/2)", &params.u0_half),
            ("tN^(1/2)", &params.tn_half),
            ("uN^(1/2)", &params.un_half),
        ] {
            if v.is_zero() {
                return Err(Error::DegenerateParameters(format!("{name} = 0")));
            }
        }
        let ctx = params.ctx();
        let one = F::one(&ctx);
        let x1 = Poly::var(0, n, &ctx);
        let xn = Poly::var(n - 1, n, &ctx);
        let c1 = |c: F| Poly::constant(n, c);
        let den0 = &(&x1 * &x1) - &c1(params.s.clone());
        let den_n = &(&xn * &xn) - &c1(one.clone());
        let num0 = &(&x1 - &c1(params.a.clone())) * &(&x1 - &c1(params.b.clone()));
        let num_n = &(&xn.scale(&params.c) - &c1(one.clone())) * &(&xn.scale(&params.d) - &c1(one));
        Ok(HeckeContext { params, n, den0, den_n, num0, num_n })
    }

    pub fn ctx(&self) -> F::Ctx {
        self.params.ctx()
    }

    /// The simple reflection `s_i` for `i` in `0..=N`.
    pub fn reflection(&self, i: usize) -> Result<Substitution<F>> {
        match i {
            0 => Ok(Substitution::s0(self.params.s.clone())),
            i if i < self.n => Ok(Substitution::Swap(i - 1, i)),
            i if i == self.n => Ok(Substitution::Invert(self.n - 1)),
            _ => Err(Error::Argument(format!("generator index {i} out of range 0..={}", self.n))),
        }
    }

    /// `T_i^{sign}` applied to `f`; `inverse` selects `T_i^{-1}`.
    pub fn apply_t(&self, i: usize, inverse: bool, f: &Poly<F>) -> Result<Poly<F>> {
        if f.nvars() != self.n {
            return Err(Error::Argument(format!("polynomial in {} variables, context has {}", f.nvars(), self.n)));
        }
        let p = &self.params;
        let diff = f - &f.substitute(&self.reflection(i)?)?;
        let n = self.n;
        if i == 0 {
            let lead = if inverse { p.t0_half.inv() } else { p.t0_half.clone() };
            let q = diff.div_exact(&self.den0, 0)?;
            let h = &self.num0 * &q;
            Ok(&f.scale(&lead) - &h.scale(&p.t0_half.inv()))
        } else if i < n {
            let ctx = self.ctx();
            let lead = if inverse { p.t_half.inv() } else { p.t_half.clone() };
            let xi = Poly::var(i - 1, n, &ctx);
            let xj = Poly::var(i, n, &ctx);
            let q = diff.div_exact(&(&xi - &xj), i - 1)?;
            let h = &(&xi.scale(&p.t_half) - &xj.scale(&p.t_half.inv())) * &q;
            Ok(&f.scale(&lead) - &h)
        } else {
            let lead = if inverse { p.tn_half.inv() } else { p.tn_half.clone() };
            let q = diff.div_exact(&self.den_n, n - 1)?;
            let h = &self.num_n * &q;
            Ok(&f.scale(&lead) + &h.scale(&p.tn_half.inv()))
        }
    }

    /// Apply a word of generators, rightmost letter first. Letters are `(index, inverse)`.
    pub fn apply_word(&self, word: &[(usize, bool)], f: &Poly<F>) -> Result<Poly<F>> {
        let mut g = f.clone();
        for &(i, inv) in word.iter().rev() {
            g = self.apply_t(i, inv, &g)?;
        }
        Ok(g)
    }

    /// The word `T_i ... T_{N-1} T_N T_{N-1} ... T_1 T_0 T_1^-1 ... T_{i-1}^-1` (1-based `i`).
    pub fn y_word(&self, i: usize) -> Result<Vec<(usize, bool)>> {
        if i == 0 || i > self.n {
            return Err(Error::Argument(format!("Y index {i} out of range 1..={}", self.n)));
        }
        let n = self.n;
        let mut w: Vec<(usize, bool)> = (i..=n).map(|k| (k, false)).collect();
        w.extend((0..n).rev().map(|k| (k, false)));
        w.extend((1..i).map(|k| (k, true)));
        Ok(w)
    }

    pub fn apply_y(&self, i: usize, f: &Poly<F>) -> Result<Poly<F>> {
        self.apply_word(&self.y_word(i)?, f)
    }

    /// `t_i^{1/2}` for generator `i`.
    pub fn generator_parameter(&self, i: usize) -> F {
        if i == 0 {
            self.params.t0_half.clone()
        } else if i < self.n {
            self.params.t_half.clone()
        } else {
            self.params.tn_half.clone()
        }
    }

    /// Eigenvalues of `Y_1..Y_N` on `E_{((-m)^N)}`.
    pub fn y_eigenvalues_negative(&self, m: usize) -> Vec<F> {
        let p = &self.params;
        let base = (p.t0_half.clone() * &p.tn_half * p.s.pow_i(m as i64)).inv();
        (1..=self.n).map(|i| base.clone() * p.t.pow_i(-(i as i64 - 1))).collect()
    }

    /// Eigenvalues of `Y_1..Y_N` on `E_{(m^N)}`.
    pub fn y_eigenvalues_positive(&self, m: usize) -> Vec<F> {
        let p = &self.params;
        let base = p.t0_half.clone() * &p.tn_half * p.s.pow_i(m as i64);
        (1..=self.n).map(|i| base.clone() * p.t.pow_i((self.n - i) as i64)).collect()
    }
}

impl HeckeContext<Rational> {
    /// Check the defining relations on random polynomials: quadratic relations,
    /// inverses, braid relations (length 3 in the bulk, length 4 at both
    /// boundaries), distant commutation, and commutativity of the `Y_i`.
    pub fn check_relations<R: Rng>(&self, trials: usize, rng: &mut R) -> Result<Report> {
        if trials == 0 {
            return Err(Error::Argument("trials must be at least 1".into()));
        }
        let n = self.n;
        let mut quad = CheckEntry::exact("quadratic (T_i - t_i^(1/2))(T_i + t_i^(-1/2)) = 0");
        let mut inv = CheckEntry::exact("T_i T_i^-1 = T_i^-1 T_i = 1");
        let mut braid3 = CheckEntry::exact("braid T_i T_(i+1) T_i = T_(i+1) T_i T_(i+1)");
        let mut braid0 = CheckEntry::exact("braid T_1 T_0 T_1 T_0 = T_0 T_1 T_0 T_1");
        let mut braid_n = CheckEntry::exact("braid T_(N-1) T_N T_(N-1) T_N = T_N T_(N-1) T_N T_(N-1)");
        let mut distant = CheckEntry::exact("T_i T_j = T_j T_i for |i - j| >= 2");
        let mut ycomm = CheckEntry::exact("Y_i Y_j = Y_j Y_i");
        let record = |e: &mut CheckEntry, d: &Poly<Rational>| e.record(d.max_coeff_magnitude(), d.is_zero());
        let word_diff = |a: &[(usize, bool)], b: &[(usize, bool)], f: &Poly<Rational>| -> Result<Poly<Rational>> {
            Ok(&self.apply_word(a, f)? - &self.apply_word(b, f)?)
        };
        for _ in 0..trials {
            let f = random_polynomial(rng, n, 2, 4);
            for i in 0..=n {
                let ti = self.generator_parameter(i);
                let tf = self.apply_t(i, false, &f)?;
                let ttf = self.apply_t(i, false, &tf)?;
                let d = &(&ttf - &tf.scale(&(ti.clone() - ti.inv()))) - &f;
                record(&mut quad, &d);
                record(&mut inv, &(&self.apply_t(i, true, &tf)? - &f));
                record(&mut inv, &(&self.apply_t(i, false, &self.apply_t(i, true, &f)?)? - &f));
            }
            for i in 1..n.saturating_sub(1) {
                let d = word_diff(&[(i, false), (i + 1, false), (i, false)], &[(i + 1, false), (i, false), (i + 1, false)], &f)?;
                record(&mut braid3, &d);
            }
            if n >= 2 {
                let d = word_diff(&[(1, false), (0, false), (1, false), (0, false)], &[(0, false), (1, false), (0, false), (1, false)], &f)?;
                record(&mut braid0, &d);
                let (a, b) = (n - 1, n);
                let d = word_diff(&[(a, false), (b, false), (a, false), (b, false)], &[(b, false), (a, false), (b, false), (a, false)], &f)?;
                record(&mut braid_n, &d);
            }
            for i in 0..=n {
                for j in i + 2..=n {
                    record(&mut distant, &word_diff(&[(i, false), (j, false)], &[(j, false), (i, false)], &f)?);
                }
            }
            for i in 1..=n {
                for j in i + 1..=n {
                    let a = self.apply_y(i, &self.apply_y(j, &f)?)?;
                    let b = self.apply_y(j, &self.apply_y(i, &f)?)?;
                    record(&mut ycomm, &(&a - &b));
                }
            }
        }
        let mut report = Report::new(format!("hecke relations, N = {n}"));
        for e in [quad, inv, braid3, braid0, braid_n, distant, ycomm] {
            if e.instances > 0 {
                report.push(e);
            }
        }
        Ok(report)
    }
}

/// Monomial `x^e` with unit coefficient.
pub fn monomial<F: Scalar>(e: &[i32], ctx: &F::Ctx) -> Poly<F> {
    Poly::monomial(Composition(e.to_vec()), F::one(ctx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::rng;

    fn ctx(n: usize) -> HeckeContext<Rational> {
        HeckeContext::exact(&ParameterPoint::default_point(), n).unwrap()
    }

    #[test]
    fn generators_on_constants() {
        let h = ctx(2);
        let one = Poly::constant(2, Rational::from(1));
        assert_eq!(h.apply_t(1, false, &one).unwrap(), one.scale(&h.params.t_half));
        assert_eq!(h.apply_t(0, false, &one).unwrap(), one.scale(&h.params.t0_half));
        assert_eq!(h.apply_t(2, true, &one).unwrap(), one.scale(&h.params.tn_half.inv()));
    }

    #[test]
    fn y_on_constant() {
        for n in 1..=3 {
            let h = ctx(n);
            let one = Poly::constant(n, Rational::from(1));
            let ev = h.y_eigenvalues_positive(0);
            for i in 1..=n {
                assert_eq!(h.apply_y(i, &one).unwrap(), one.scale(&ev[i - 1]));
            }
        }
    }

    #[test]
    fn relations_small() {
        let mut r = rng(11);
        for n in 1..=3 {
            let rep = ctx(n).check_relations(2, &mut r).unwrap();
            assert!(rep.all_passed(), "{rep:?}");
        }
    }

    #[test]
    fn out_of_range_generator() {
        let h = ctx(2);
        let one = Poly::constant(2, Rational::from(1));
        assert!(h.apply_t(3, false, &one).is_err());
        assert!(h.apply_y(0, &one).is_err());
        assert!(h.apply_t(1, false, &Poly::constant(3, Rational::from(1))).is_err());
    }
}
