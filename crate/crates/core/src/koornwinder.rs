//! Non-symmetric Koornwinder polynomials from the `Y`-eigenproblem and
//! symmetric ones from the `s`-difference operator `D`.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::composition::{box_partitions, dominance_leq, preceq, preceq_basis, prec, Composition};
use crate::error::{Error, Result};
use crate::hecke::HeckeContext;
use crate::laurent::{orbit_sum, LaurentPolynomial};
use crate::matrix::Matrix;
use crate::params::Params;
use crate::scalar::{Rational, Scalar};

type Poly<F> = LaurentPolynomial<F>;

/// `E_lambda` with its `Y_i` eigenvalues.
#[derive(Clone, Debug)]
pub struct NonsymmetricE<F> {
    pub lambda: Composition,
    pub poly: Poly<F>,
    pub eigenvalues: Vec<F>,
    /// Which combination of `Y_i` drove the triangular solve (`[1, 0, ..]` is `Y_1` alone).
    pub solve_weights: Vec<i64>,
}

/// `P_(m^N)` with its `D` eigenvalue.
#[derive(Clone, Debug)]
pub struct SymmetricP<F> {
    pub lambda: Composition,
    pub poly: Poly<F>,
    pub d_eigenvalue: F,
    /// Coefficients in the orbit-sum basis, keyed by partition.
    pub orbit_coefficients: BTreeMap<Composition, F>,
    /// Largest coefficient of `D P - d P` (exactly zero in exact mode).
    pub residual: f64,
}

impl<F: Scalar> SymmetricP<F> {
    pub fn to_json(&self) -> Value {
        json!({
            "lambda": self.lambda.0,
            "poly": self.poly.to_json(),
            "d_eigenvalue": self.d_eigenvalue.json_parts(),
            "residual": if F::is_exact() { "0".to_string() } else { format!("{:e}", self.residual) },
        })
    }
}

impl<F: Scalar> NonsymmetricE<F> {
    pub fn to_json(&self) -> Value {
        json!({
            "lambda": self.lambda.0,
            "poly": self.poly.to_json(),
            "eigenvalues": self.eigenvalues.iter().map(|e| e.json_parts()).collect::<Vec<_>>(),
        })
    }
}

/// Combinations of the `Y_i` tried in turn when the plain `Y_1` diagonal is degenerate.
fn solve_weight_candidates(n: usize) -> Vec<Vec<i64>> {
    let mut out = vec![{
        let mut w = vec![0; n];
        w[0] = 1;
        w
    }];
    if n > 1 {
        out.push((1..=n as i64).collect());
        out.push((0..n).map(|i| [2, 3, 5, 7, 11, 13, 17, 19][i % 8]).collect());
    }
    out
}

/// Solve `Y_i E = y_i E` for `E = x^lambda + lower terms` with `lambda+ = (m^N)`.
pub fn nonsymmetric_e<F: Scalar>(h: &HeckeContext<F>, lambda: &Composition) -> Result<NonsymmetricE<F>> {
    let n = h.n;
    if lambda.len() != n {
        return Err(Error::Argument(format!("{lambda} has {} entries, context has {n} sites", lambda.len())));
    }
    let plus = lambda.plus();
    if plus.0.iter().any(|&v| v != plus.0[0]) {
        return Err(Error::Argument(format!("{lambda}+ = {plus} is not of the form (m^N)")));
    }
    let ctx = h.ctx();
    let basis = preceq_basis(lambda);

    // Columns of each Y_i in the basis, computed lazily per operator.
    let y_columns = |i: usize| -> Result<Vec<Poly<F>>> {
        basis.iter().map(|mu| h.apply_y(i, &Poly::monomial(mu.clone(), F::one(&ctx)))).collect()
    };
    let mut cols_by_op: BTreeMap<usize, Vec<Poly<F>>> = BTreeMap::new();

    for weights in solve_weight_candidates(n) {
        let mut combined: Vec<Poly<F>> = vec![Poly::zero(n); basis.len()];
        for (i, &w) in weights.iter().enumerate() {
            if w == 0 {
                continue;
            }
            if let std::collections::btree_map::Entry::Vacant(e) = cols_by_op.entry(i + 1) {
                e.insert(y_columns(i + 1)?);
            }
            let wf = F::from_i64(w, &ctx);
            for (acc, col) in combined.iter_mut().zip(&cols_by_op[&(i + 1)]) {
                acc.add_scaled_shifted(col, &wf, None);
            }
        }
        // triangularity with respect to ⪯
        for (mu, col) in basis.iter().zip(&combined) {
            for (nu, _) in col.terms() {
                if !preceq(nu, mu)? {
                    return Err(Error::InternalConsistency(format!("Y image of x^{mu} contains x^{nu}, not below it")));
                }
            }
        }
        let diag: Vec<F> = basis.iter().zip(&combined).map(|(mu, col)| col.coeff_or_zero(mu, &ctx)).collect();
        let top = basis.len() - 1;
        debug_assert_eq!(&basis[top], lambda);
        let y = diag[top].clone();
        if diag[..top].contains(&y) {
            continue;
        }
        let mut coeffs: Vec<F> = vec![F::zero(&ctx); basis.len()];
        coeffs[top] = F::one(&ctx);
        for k in (0..top).rev() {
            let nu = &basis[k];
            let mut rhs = F::zero(&ctx);
            for j in k + 1..basis.len() {
                if coeffs[j].is_zero() {
                    continue;
                }
                if let Some(a) = combined[j].coeff(nu) {
                    rhs = rhs + a.clone() * &coeffs[j];
                }
            }
            coeffs[k] = rhs / (y.clone() - &diag[k]);
        }
        let poly = Poly::from_terms(n, basis.iter().cloned().zip(coeffs))?;
        let eigenvalues = verify_e(h, lambda, &poly)?;
        return Ok(NonsymmetricE { lambda: lambda.clone(), poly, eigenvalues, solve_weights: weights });
    }
    Err(Error::DegenerateParameters(format!("Y eigenvalues collide in the basis below {lambda}")))
}

/// Check monic normalisation, ⪯-support, and all `N` eigen-equations; return the eigenvalues.
pub fn verify_e<F: Scalar>(h: &HeckeContext<F>, lambda: &Composition, poly: &Poly<F>) -> Result<Vec<F>> {
    let ctx = h.ctx();
    if poly.coeff(lambda) != Some(&F::one(&ctx)) {
        return Err(Error::InternalConsistency(format!("coefficient of x^{lambda} is not 1")));
    }
    for (mu, _) in poly.terms() {
        if mu != lambda && !prec(mu, lambda)? {
            return Err(Error::InternalConsistency(format!("term x^{mu} is not below {lambda}")));
        }
    }
    let mut eig = Vec::with_capacity(h.n);
    for i in 1..=h.n {
        let image = h.apply_y(i, poly)?;
        let y = image.coeff_or_zero(lambda, &ctx);
        let resid = &image - &poly.scale(&y);
        let tol = poly.max_coeff_magnitude() * y.tolerance() * 1e3;
        if (F::is_exact() && !resid.is_zero()) || resid.max_coeff_magnitude() > tol.max(0.0) && !F::is_exact() {
            return Err(Error::InternalConsistency(format!("Y_{i} eigen-equation fails for E_{lambda}")));
        }
        eig.push(y);
    }
    Ok(eig)
}

/// `d_lambda = sum_i [t0 tN t^(2N-i-1) (s^lambda_i - 1) + t^(i-1) (s^-lambda_i - 1)]` with `s` from `params`.
pub fn d_eigenvalue<F: Scalar>(params: &Params<F>, lambda: &Composition) -> Result<F> {
    if !lambda.is_partition() {
        return Err(Error::Argument(format!("{lambda} is not a partition")));
    }
    let n = lambda.len() as i64;
    let one = params.t.one_like();
    let mut acc = params.t.zero_like();
    for (k, &l) in lambda.0.iter().enumerate() {
        let i = k as i64 + 1;
        let sl = params.s.pow_i(l as i64);
        acc = acc
            + params.t0.clone() * &params.tn * params.t.pow_i(2 * n - i - 1) * (sl.clone() - &one)
            + params.t.pow_i(i - 1) * (sl.inv() - &one);
    }
    Ok(acc)
}

/// `d0(xi) = (1 - t^N)/(1 - t) (xi - 1)(t0 tN t^(N-1) - 1/xi)`.
pub fn d0<F: Scalar>(params: &Params<F>, n: usize, xi: &F) -> F {
    let one = xi.one_like();
    let t = &params.t;
    let geom = (one.clone() - t.pow_i(n as i64)) / (one.clone() - t);
    geom * (xi.clone() - &one) * (params.t0.clone() * &params.tn * t.pow_i(n as i64 - 1) - xi.inv())
}

/// `g_i(x)` (0-based `i`), with the Noumi parameters of `params`.
pub fn g_i<F: Scalar>(params: &Params<F>, x: &[F], i: usize) -> Result<F> {
    let one = params.t.one_like();
    let xi = &x[i];
    let mut num = (one.clone() - params.a.clone() * xi)
        * (one.clone() - params.b.clone() * xi)
        * (one.clone() - params.c.clone() * xi)
        * (one.clone() - params.d.clone() * xi);
    let x2 = xi.square();
    let mut den = (one.clone() - &x2) * (one.clone() - params.s.clone() * &x2);
    for (j, xj) in x.iter().enumerate() {
        if j == i {
            continue;
        }
        let r = xi.clone() / xj;
        let p = xi.clone() * xj;
        num = num * ((one.clone() - params.t.clone() * &r) * (one.clone() - params.t.clone() * &p));
        den = den * ((one.clone() - r) * (one.clone() - p));
    }
    if den.is_zero() {
        return Err(Error::Domain(format!("g_{} has a pole at this point", i + 1)));
    }
    Ok(num / den)
}

/// `(D f)(x)` evaluated pointwise.
pub fn eval_d<F: Scalar>(params: &Params<F>, f: &Poly<F>, x: &[F]) -> Result<F> {
    let fx = f.evaluate(x)?;
    let xinv: Vec<F> = x.iter().map(|v| v.inv()).collect();
    let mut acc = fx.zero_like();
    for i in 0..x.len() {
        let mut up = x.to_vec();
        up[i] = up[i].clone() * &params.s;
        let mut down = x.to_vec();
        down[i] = down[i].clone() / &params.s;
        acc = acc + g_i(params, x, i)? * (f.evaluate(&up)? - &fx) + g_i(params, &xinv, i)? * (f.evaluate(&down)? - &fx);
    }
    Ok(acc)
}

const PRIMES: [i64; 64] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107,
    109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223, 227, 229,
    233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307, 311,
];

/// Deterministic interpolation points built from primes over 7. Coordinates
/// cycle through the prime list with a stride that keeps them distinct within
/// a point; points where `D` has a pole are skipped.
fn interpolation_points<F: Scalar>(params: &Params<F>, n: usize, count: usize) -> Vec<Vec<F>> {
    let ctx = params.ctx();
    let mut out = Vec::with_capacity(count);
    let mut k = 0usize;
    while out.len() < count {
        let x: Vec<F> = (0..n)
            .map(|i| {
                let idx = (k * n + i) % PRIMES.len();
                let wrap = ((k * n + i) / PRIMES.len()) as i64;
                F::from_rational(&Rational::new(PRIMES[idx] + wrap, 7), &ctx)
            })
            .collect();
        k += 1;
        let xinv: Vec<F> = x.iter().map(|v| v.inv()).collect();
        let ok = (0..n).all(|i| g_i(params, &x, i).is_ok() && g_i(params, &xinv, i).is_ok());
        if ok {
            out.push(x);
        }
    }
    out
}

const EXTRA_POINTS: usize = 4;

/// `D f` for a W0-invariant `f`, by evaluation and interpolation in the
/// orbit-sum basis of the box containing `f`.
pub fn apply_d<F: Scalar>(params: &Params<F>, f: &Poly<F>) -> Result<Poly<F>> {
    let n = f.nvars();
    if f.is_zero() {
        return Ok(Poly::zero(n));
    }
    if !f.is_w0_invariant() {
        return Err(Error::Precondition("D is applied to W0-invariant polynomials only".into()));
    }
    let ctx = params.ctx();
    let m = f.terms().map(|(e, _)| e.max_abs()).max().unwrap_or(0) as usize;
    let basis = box_partitions(m, n);
    let sums: Vec<Poly<F>> = basis.iter().map(|mu| orbit_sum(mu, &ctx)).collect::<Result<_>>()?;
    let points = interpolation_points(params, n, basis.len() + EXTRA_POINTS);
    let a = Matrix::from_fn(points.len(), basis.len(), |r, c| sums[c].evaluate(&points[r]).expect("nonzero point"));
    let rhs: Vec<F> = points.iter().map(|x| eval_d(params, f, x)).collect::<Result<_>>()?;
    let coeffs = a.solve_consistent(&rhs)?;
    let mut out = Poly::zero(n);
    for (s, c) in sums.iter().zip(coeffs) {
        out.add_scaled_shifted(s, &c, None);
    }
    Ok(out)
}

/// `P_(m^N)` from the triangular `D`-eigenproblem in the orbit-sum basis.
pub fn symmetric_p<F: Scalar>(params: &Params<F>, n: usize, m: usize) -> Result<SymmetricP<F>> {
    if n == 0 {
        return Err(Error::Argument("need at least one site".into()));
    }
    let ctx = params.ctx();
    let lambda = Composition::constant(m as i32, n);
    let basis = box_partitions(m, n);
    let sums: Vec<Poly<F>> = basis.iter().map(|mu| orbit_sum(mu, &ctx)).collect::<Result<_>>()?;
    let images: Vec<Poly<F>> = sums.iter().map(|s| apply_d(params, s)).collect::<Result<_>>()?;
    let coef = |img: &Poly<F>, nu: &Composition| img.coeff_or_zero(nu, &ctx);
    for (mu, img) in basis.iter().zip(&images) {
        for nu in &basis {
            let c = coef(img, nu);
            let negligible = if F::is_exact() { c.is_zero() } else { c.magnitude() <= img.max_coeff_magnitude() * c.tolerance() * 1e3 };
            if !dominance_leq(nu, mu)? && !negligible {
                return Err(Error::InternalConsistency(format!("D m_{mu} contains m_{nu}, not dominated by it")));
            }
        }
    }
    let d = d_eigenvalue(params, &lambda)?;
    let top = basis.len() - 1;
    let diag: Vec<F> = basis.iter().zip(&images).map(|(mu, img)| coef(img, mu)).collect();
    let diag_err = (diag[top].clone() - &d).magnitude();
    if diag_err > d.magnitude().max(1.0) * d.tolerance() * 1e6 || (F::is_exact() && diag[top] != d) {
        return Err(Error::InternalConsistency(format!("D diagonal at {lambda} differs from d_lambda")));
    }
    let mut coeffs = vec![F::zero(&ctx); basis.len()];
    coeffs[top] = F::one(&ctx);
    for k in (0..top).rev() {
        let gap = d.clone() - &diag[k];
        if gap.is_zero() || (!F::is_exact() && gap.magnitude() <= d.magnitude() * d.tolerance() * 1e3) {
            return Err(Error::DegenerateParameters(format!("d_(m^N) coincides with d_{}", basis[k])));
        }
        let mut rhs = F::zero(&ctx);
        for j in k + 1..basis.len() {
            rhs = rhs + coef(&images[j], &basis[k]) * &coeffs[j];
        }
        coeffs[k] = rhs / gap;
    }
    let mut poly = Poly::zero(n);
    for (s, c) in sums.iter().zip(&coeffs) {
        poly.add_scaled_shifted(s, c, None);
    }
    let resid = &apply_d(params, &poly)? - &poly.scale(&d);
    let residual = resid.max_coeff_magnitude();
    if F::is_exact() && !resid.is_zero() {
        return Err(Error::InternalConsistency("D P - d P is not zero".into()));
    }
    Ok(SymmetricP {
        lambda,
        poly,
        d_eigenvalue: d,
        orbit_coefficients: basis.into_iter().zip(coeffs).collect(),
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ParameterPoint;

    fn params() -> Params<Rational> {
        Params::from_point(&ParameterPoint::default_point(), &())
    }

    fn c(v: &[i32]) -> Composition {
        Composition(v.to_vec())
    }

    #[test]
    fn trivial_cases() {
        let p = params();
        for n in 1..=3 {
            let h = HeckeContext::new(p.clone(), n).unwrap();
            let e = nonsymmetric_e(&h, &Composition::zeros(n)).unwrap();
            assert_eq!(e.poly, Poly::constant(n, Rational::from(1)));
            assert_eq!(e.eigenvalues, h.y_eigenvalues_positive(0));
            let s = symmetric_p(&p, n, 0).unwrap();
            assert_eq!(s.poly, Poly::constant(n, Rational::from(1)));
            assert!(s.d_eigenvalue.is_zero());
        }
    }

    #[test]
    fn d_of_constant_vanishes() {
        let f = Poly::constant(2, Rational::from(1));
        assert!(apply_d(&params(), &f).unwrap().is_zero());
    }

    #[test]
    fn d_rejects_non_invariant_input() {
        let f = Poly::monomial(c(&[1, 0]), Rational::from(1));
        assert!(matches!(apply_d(&params(), &f), Err(Error::Precondition(_))));
    }

    #[test]
    fn e_minus_one_single_site() {
        let h = HeckeContext::new(params(), 1).unwrap();
        let e = nonsymmetric_e(&h, &c(&[-1])).unwrap();
        // (1) is not below (-1), so only x^-1 and a constant appear
        assert_eq!(e.poly.len(), 2);
        assert!(e.poly.coeff(&c(&[1])).is_none());
        assert_eq!(e.eigenvalues, h.y_eigenvalues_negative(1));
    }

    #[test]
    fn d0_matches_d_eigenvalue_and_is_gc_symmetric() {
        let p = params();
        for n in 1..=3 {
            for m in 1..=3 {
                // s = xi^(1/m) with s rational: pick xi = s^m
                let d = d_eigenvalue(&p, &Composition::constant(m, n)).unwrap();
                let xi = p.s.pow_i(m as i64);
                assert_eq!(d, d0(&p, n, &xi));
                assert_eq!(d0(&p, n, &xi), d0(&p, n, &p.gc_xi(n, &xi)));
            }
        }
    }
}
