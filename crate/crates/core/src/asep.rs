//! Transition matrix, integrability matrices, scattering matrices and the
//! ground-state eigenvalue of the open ASEP.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::params::Params;
use crate::report::{CheckEntry, Report};
use crate::sampling::spectral_point;
use crate::scalar::{BigFloat, Jet, Rational, Real, Scalar};

fn ctx_of<F: Scalar>(p: &Params<F>) -> F::Ctx {
    p.ctx()
}

/// Bulk generator `w` in the two-site basis `|00>, |01>, |10>, |11>`.
pub fn local_w<F: Scalar>(p: &Params<F>) -> Matrix<F> {
    let ctx = ctx_of(p);
    let mut w = Matrix::zeros(4, 4, &ctx);
    let th = &p.t_half;
    w.set(1, 1, -th.inv());
    w.set(1, 2, th.clone());
    w.set(2, 1, th.inv());
    w.set(2, 2, -th.clone());
    w
}

/// Left boundary block `B(xi)`.
pub fn local_b<F: Scalar>(p: &Params<F>, xi: &F) -> Matrix<F> {
    let t = &p.t0_half;
    Matrix::from_rows(vec![
        vec![-t.clone(), xi.inv() * t.inv()],
        vec![xi.clone() * t, -t.inv()],
    ])
}

/// Right boundary block `B-bar`.
pub fn local_bbar<F: Scalar>(p: &Params<F>) -> Matrix<F> {
    let t = &p.tn_half;
    Matrix::from_rows(vec![vec![-t.inv(), t.clone()], vec![t.inv(), -t.clone()]])
}

/// `r(x) = (x - 1)/(t^(-1/2) x - t^(1/2))`.
pub fn r_fn<F: Scalar>(p: &Params<F>, x: &F) -> Result<F> {
    let den = p.t_half.inv() * x - &p.t_half;
    if den.is_zero() {
        return Err(Error::Domain("pole of r(x): t^(-1/2) x - t^(1/2) = 0".into()));
    }
    Ok((x.clone() - x.one_like()) / den)
}

/// `k(x; t_i^(1/2), u_i^(1/2)) = (x^2 - 1)/(t_i^(-1/2) x^2 - (u_i^(1/2) - u_i^(-1/2)) x - t_i^(1/2))`.
pub fn k_fn<F: Scalar>(x: &F, t_half: &F, u_half: &F) -> Result<F> {
    let x2 = x.square();
    let den = t_half.inv() * &x2 - (u_half.clone() - u_half.inv()) * x - t_half;
    if den.is_zero() {
        return Err(Error::Domain("pole of k(x): t_i^(-1/2) x^2 - (u_i^(1/2) - u_i^(-1/2)) x - t_i^(1/2) = 0".into()));
    }
    Ok((x2 - x.one_like()) / den)
}

pub fn build_r<F: Scalar>(p: &Params<F>, x: &F) -> Result<Matrix<F>> {
    let ctx = ctx_of(p);
    Ok(&Matrix::identity(4, &ctx) + &local_w(p).scale(&r_fn(p, x)?))
}

pub fn build_k<F: Scalar>(p: &Params<F>, x: &F, xi: &F) -> Result<Matrix<F>> {
    let ctx = ctx_of(p);
    let k = k_fn(x, &p.t0_half, &p.u0_half)?;
    Ok(&Matrix::identity(2, &ctx) + &local_b(p, xi).scale(&k))
}

pub fn build_kbar<F: Scalar>(p: &Params<F>, x: &F) -> Result<Matrix<F>> {
    let ctx = ctx_of(p);
    let k = k_fn(&x.inv(), &p.tn_half, &p.un_half)?;
    Ok(&Matrix::identity(2, &ctx) + &local_bbar(p).scale(&k))
}

/// `K-tilde(x) = K(s^(-1/2) x)`.
pub fn build_ktilde<F: Scalar>(p: &Params<F>, x: &F, xi: &F) -> Result<Matrix<F>> {
    build_k(p, &(x.clone() / &p.s_half), xi)
}

/// Signed square roots `(sqrt(pq), sqrt(alpha gamma), sqrt(beta delta))` with `q = 1`.
pub fn rate_roots<F: Scalar>(p: &Params<F>) -> (F, F, F) {
    let r = p.rates();
    (r.q.clone() * &p.t_half, r.gamma.clone() * &p.t0_half, r.delta.clone() * &p.tn_half)
}

/// `M(xi)` on `n` sites.
pub fn build_m<F: Scalar>(p: &Params<F>, n: usize, xi: &F) -> Result<Matrix<F>> {
    if n == 0 {
        return Err(Error::Argument("need at least one site".into()));
    }
    let (spq, sag, sbd) = rate_roots(p);
    let mut m = local_b(p, xi).scale(&sag).embed(0, n)?;
    let w = local_w(p).scale(&spq);
    for i in 0..n.saturating_sub(1) {
        m = &m + &w.embed(i, n)?;
    }
    Ok(&m + &local_bbar(p).scale(&sbd).embed(n - 1, n)?)
}

/// `U_GC = (x)_i diag(1, tN^-1 t^-(N-i))`.
pub fn u_gc<F: Scalar>(p: &Params<F>, n: usize) -> Matrix<F> {
    let ctx = ctx_of(p);
    let mut u = Matrix::identity(1, &ctx);
    for i in 1..=n {
        let f = (p.tn.clone() * p.t.pow_i((n - i) as i64)).inv();
        u = u.kron(&Matrix::diagonal(vec![F::one(&ctx), f]));
    }
    u
}

/// `U M^T U^-1` for diagonal `U`.
pub fn gc_conjugate<F: Scalar>(u: &Matrix<F>, m: &Matrix<F>) -> Matrix<F> {
    Matrix::from_fn(m.rows(), m.cols(), |i, j| u.get(i, i).clone() * m.get(j, i) / u.get(j, j))
}

/// `R-check` acting on sites `i, i+1` (1-based `i`) of `n`.
pub fn r_at<F: Scalar>(p: &Params<F>, i: usize, n: usize, x: &F) -> Result<Matrix<F>> {
    build_r(p, x)?.embed(i - 1, n)
}

/// Scattering matrix `S_i(x)` (1-based `i`), built as the ordered product of its factors.
pub fn scattering_matrix<F: Scalar>(p: &Params<F>, i: usize, x: &[F], xi: &F) -> Result<Matrix<F>> {
    let n = x.len();
    if i == 0 || i > n {
        return Err(Error::Argument(format!("scattering index {i} out of range 1..={n}")));
    }
    let xi_ = &x[i - 1];
    let s = &p.s;
    let mut factors: Vec<Matrix<F>> = Vec::new();
    for j in (1..i).rev() {
        factors.push(r_at(p, j, n, &(x[j - 1].clone() / (s.clone() * xi_)))?);
    }
    factors.push(build_ktilde(p, &xi_.inv(), xi)?.embed(0, n)?);
    for j in 1..i {
        factors.push(r_at(p, j, n, &(xi_.clone() * &x[j - 1]).inv())?);
    }
    for j in i..n {
        factors.push(r_at(p, j, n, &(xi_.clone() * &x[j]).inv())?);
    }
    factors.push(build_kbar(p, xi_)?.embed(n - 1, n)?);
    for j in (i..n).rev() {
        factors.push(r_at(p, j, n, &(x[j].clone() / xi_))?);
    }
    let ctx = ctx_of(p);
    let mut acc = Matrix::identity(1 << n, &ctx);
    for f in &factors {
        acc = &acc * f;
    }
    Ok(acc)
}

fn record_diff<F: Scalar>(e: &mut CheckEntry, a: &Matrix<F>, b: &Matrix<F>) {
    let d = a - b;
    e.record(d.max_abs(), d.is_zero());
}

/// Draw spectral points until `f` avoids every pole.
fn with_points<R: Rng, T>(rng: &mut R, k: usize, mut f: impl FnMut(&[Rational]) -> Result<T>) -> Result<T> {
    for _ in 0..64 {
        let pts: Vec<Rational> = (0..k).map(|_| spectral_point(rng)).collect();
        match f(&pts) {
            Err(Error::Domain(_)) => continue,
            other => return other,
        }
    }
    Err(Error::Domain("could not find spectral points away from poles".into()))
}

/// Exact checks of the Yang-Baxter, reflection and unitarity relations, the
/// deformed left boundary relations, the Gallavotti-Cohen conjugations and the
/// local derivative identities, at `trials` random spectral points.
pub fn check_integrability<R: Rng>(p: &Params<Rational>, trials: usize, rng: &mut R) -> Result<Report> {
    if trials == 0 {
        return Err(Error::Argument("trials must be at least 1".into()));
    }
    let one = Rational::from(1);
    let mut ybe = CheckEntry::exact("Yang-Baxter");
    let mut refl_l = CheckEntry::exact("left reflection (K)");
    let mut refl_r = CheckEntry::exact("right reflection (K-bar)");
    let mut unit_r = CheckEntry::exact("unitarity R(x) R(1/x) = 1");
    let mut unit_k = CheckEntry::exact("unitarity K(x) K(1/x) = 1");
    let mut unit_kb = CheckEntry::exact("unitarity K-bar(x) K-bar(1/x) = 1");
    let mut unit_kt = CheckEntry::exact("deformed unitarity K-tilde(s x) K-tilde(1/x) = 1");
    let mut refl_kt = CheckEntry::exact("deformed left reflection (K-tilde)");
    let mut gc_m = CheckEntry::exact("GC: U M(xi)^T U^-1 = M(xi')");
    let mut gc_r = CheckEntry::exact("GC: U R_i(x)^T U^-1 = R_i(x)");
    let mut gc_k = CheckEntry::exact("GC: U K_1(x; xi)^T U^-1 = K_1(x; xi')");
    let mut gc_kt = CheckEntry::exact("GC: U K-tilde_1(x; xi)^T U^-1 = K-tilde_1(x; xi')");
    let mut gc_kb = CheckEntry::exact("GC: U K-bar_N(x)^T U^-1 = K-bar_N(x)");
    let id2 = Matrix::identity(2, &());
    let id4 = Matrix::identity(4, &());
    for _ in 0..trials {
        let xi = spectral_point(rng);
        with_points(rng, 3, |x| {
            let (x1, x2, x3) = (&x[0], &x[1], &x[2]);
            let r3 = |i: usize, v: Rational| r_at(p, i, 3, &v);
            let lhs = &(&r3(1, x2.clone() / x3)? * &r3(2, x1.clone() / x3)?) * &r3(1, x1.clone() / x2)?;
            let rhs = &(&r3(2, x1.clone() / x2)? * &r3(1, x1.clone() / x3)?) * &r3(2, x2.clone() / x3)?;
            record_diff(&mut ybe, &lhs, &rhs);
            Ok(())
        })?;
        with_points(rng, 2, |x| {
            let (x1, x2) = (&x[0], &x[1]);
            let r = |v: Rational| r_at(p, 1, 2, &v);
            let k1 = |v: &Rational| build_k(p, v, &xi)?.embed(0, 2);
            let lhs = &(&(&r(x2.clone() / x1)? * &k1(x2)?) * &r(x1.clone() * x2)?) * &k1(x1)?;
            let rhs = &(&(&k1(x1)? * &r(x1.clone() * x2)?) * &k1(x2)?) * &r(x2.clone() / x1)?;
            record_diff(&mut refl_l, &lhs, &rhs);
            let kb2 = |v: Rational| build_kbar(p, &v)?.embed(1, 2);
            let lhs = &(&(&r(x1.clone() / x2)? * &kb2(x1.inv())?) * &r(x1.clone() * x2)?) * &kb2(x2.inv())?;
            let rhs = &(&(&kb2(x2.inv())? * &r(x1.clone() * x2)?) * &kb2(x1.inv())?) * &r(x1.clone() / x2)?;
            record_diff(&mut refl_r, &lhs, &rhs);
            let kt1 = |v: &Rational| build_ktilde(p, v, &xi)?.embed(0, 2);
            let s_inv = p.s.inv();
            let lhs = &(&(&r(x2.clone() / x1)? * &kt1(x2)?) * &r(s_inv.clone() * x1 * x2)?) * &kt1(x1)?;
            let rhs = &(&(&kt1(x1)? * &r(s_inv * x1 * x2)?) * &kt1(x2)?) * &r(x2.clone() / x1)?;
            record_diff(&mut refl_kt, &lhs, &rhs);
            Ok(())
        })?;
        with_points(rng, 1, |x| {
            let x = &x[0];
            record_diff(&mut unit_r, &(&build_r(p, x)? * &build_r(p, &x.inv())?), &id4);
            record_diff(&mut unit_k, &(&build_k(p, x, &xi)? * &build_k(p, &x.inv(), &xi)?), &id2);
            record_diff(&mut unit_kb, &(&build_kbar(p, x)? * &build_kbar(p, &x.inv())?), &id2);
            let sx = p.s.clone() * x;
            record_diff(&mut unit_kt, &(&build_ktilde(p, &sx, &xi)? * &build_ktilde(p, &x.inv(), &xi)?), &id2);
            for n in 1..=3 {
                let u = u_gc(p, n);
                let xi_p = p.gc_xi(n, &xi);
                record_diff(&mut gc_m, &gc_conjugate(&u, &build_m(p, n, &xi)?), &build_m(p, n, &xi_p)?);
                for i in 1..n {
                    let r = r_at(p, i, n, x)?;
                    record_diff(&mut gc_r, &gc_conjugate(&u, &r), &r);
                }
                let k = build_k(p, x, &xi)?.embed(0, n)?;
                record_diff(&mut gc_k, &gc_conjugate(&u, &k), &build_k(p, x, &xi_p)?.embed(0, n)?);
                let kt = build_ktilde(p, x, &xi)?.embed(0, n)?;
                record_diff(&mut gc_kt, &gc_conjugate(&u, &kt), &build_ktilde(p, x, &xi_p)?.embed(0, n)?);
                let kb = build_kbar(p, x)?.embed(n - 1, n)?;
                record_diff(&mut gc_kb, &gc_conjugate(&u, &kb), &kb);
            }
            Ok(())
        })?;
        let _ = &one;
    }
    let mut report = Report::new("integrability");
    for e in [ybe, refl_l, refl_r, unit_r, unit_k, unit_kb, unit_kt, refl_kt, gc_m, gc_r, gc_k, gc_kt, gc_kb] {
        report.push(e);
    }
    report.extend(check_local_derivatives(p, &spectral_point(rng))?);
    Ok(report)
}

fn jet_params(p: &Params<Rational>) -> Params<Jet<Rational>> {
    let c = |v: &Rational| Jet::constant(v.clone());
    Params::from_halves(c(&p.s_half), c(&p.t_half), c(&p.t0_half), c(&p.u0_half), c(&p.tn_half), c(&p.un_half), c(&p.xi))
}

fn derivative(m: &Matrix<Jet<Rational>>) -> Matrix<Rational> {
    m.map(|j| j.deriv.clone())
}

/// `(q - p) R'(1) = sqrt(pq) w`, `(q - p) K'(1) / 2 = sqrt(alpha gamma) B(xi)`,
/// `-(q - p) K-bar'(1) / 2 = sqrt(beta delta) B-bar`, by exact jets.
pub fn check_local_derivatives(p: &Params<Rational>, xi: &Rational) -> Result<Report> {
    let jp = jet_params(p);
    let x = Jet::variable(Rational::from(1));
    let jxi = Jet::constant(xi.clone());
    let rates = p.rates();
    let qp = rates.q.clone() - &rates.p;
    let half = Rational::new(1, 2);
    let (spq, sag, sbd) = rate_roots(p);
    let mut report = Report::new("local generators from spectral derivatives");
    let mut e = CheckEntry::exact("(q - p) R'(1) = sqrt(pq) w");
    record_diff(&mut e, &derivative(&build_r(&jp, &x)?).scale(&qp), &local_w(p).scale(&spq));
    report.push(e);
    let mut e = CheckEntry::exact("(q - p) K'(1) / 2 = sqrt(alpha gamma) B(xi)");
    record_diff(&mut e, &derivative(&build_k(&jp, &x, &jxi)?).scale(&(qp.clone() * &half)), &local_b(p, xi).scale(&sag));
    report.push(e);
    let mut e = CheckEntry::exact("-(q - p) K-bar'(1) / 2 = sqrt(beta delta) B-bar");
    record_diff(&mut e, &derivative(&build_kbar(&jp, &x)?).scale(&(-(qp * &half))), &local_bbar(p).scale(&sbd));
    report.push(e);
    Ok(report)
}

/// Scattering-matrix properties on `n` sites: `S_i = 1` at `s = x = 1`,
/// `dS_i/dx_i = 2/(p - q) M(xi)` there, and the deformed exchange relation
/// at random rational points.
pub fn check_scattering<R: Rng>(p: &Params<Rational>, n: usize, trials: usize, rng: &mut R) -> Result<Report> {
    let mut report = Report::new(format!("scattering matrices, N = {n}"));
    let xi = spectral_point(rng);
    let p1 = p.with_s_half(Rational::from(1));
    let ones = vec![Rational::from(1); n];
    let id = Matrix::identity(1 << n, &());
    let mut unit = CheckEntry::exact("S_i = 1 at s = x = 1");
    for i in 1..=n {
        record_diff(&mut unit, &scattering_matrix(&p1, i, &ones, &xi)?, &id);
    }
    report.push(unit);
    let jp = jet_params(&p1);
    let rates = p.rates();
    let factor = Rational::from(2) / (rates.p.clone() - &rates.q);
    let m = build_m(p, n, &xi)?.scale(&factor);
    let mut deriv = CheckEntry::exact("dS_i/dx_i = 2/(p - q) M(xi) at s = x = 1");
    for i in 1..=n {
        let x: Vec<Jet<Rational>> = (1..=n)
            .map(|j| if j == i { Jet::variable(Rational::from(1)) } else { Jet::constant(Rational::from(1)) })
            .collect();
        let s = scattering_matrix(&jp, i, &x, &Jet::constant(xi.clone()))?;
        record_diff(&mut deriv, &derivative(&s), &m);
    }
    report.push(deriv);
    let mut exch = CheckEntry::exact("S_i(.., s x_j, ..) S_j(x) = S_j(.., s x_i, ..) S_i(x)");
    for _ in 0..trials {
        with_points(rng, n, |x| {
            for i in 1..=n {
                for j in i + 1..=n {
                    let mut xs_j = x.to_vec();
                    xs_j[j - 1] = xs_j[j - 1].clone() * &p.s;
                    let mut xs_i = x.to_vec();
                    xs_i[i - 1] = xs_i[i - 1].clone() * &p.s;
                    let lhs = &scattering_matrix(p, i, &xs_j, &xi)? * &scattering_matrix(p, j, x, &xi)?;
                    let rhs = &scattering_matrix(p, j, &xs_i, &xi)? * &scattering_matrix(p, i, x, &xi)?;
                    record_diff(&mut exch, &lhs, &rhs);
                }
            }
            Ok(())
        })?;
    }
    report.push(exch);
    Ok(report)
}

/// Outcome of the ground-state eigenvalue computation.
#[derive(Clone, Debug, Serialize)]
pub struct Lambda0 {
    #[serde(serialize_with = "crate::scalar::ser_bigfloat")]
    pub value: BigFloat,
    pub squarings: usize,
    pub residual: f64,
}

/// Largest eigenvalue of `M(xi)`, by power iteration on `M + c 1` with
/// `c = max |M_ii| + 1`, accelerated by repeated squaring of the shifted matrix.
pub fn lambda0(p: &Params<BigFloat>, n: usize, xi: &BigFloat) -> Result<Lambda0> {
    if *xi <= xi.zero_like() {
        return Err(Error::Argument("xi must be positive".into()));
    }
    let prec = xi.precision_bits();
    let m = build_m(p, n, xi)?;
    let dim = m.rows();
    for i in 0..dim {
        for j in 0..dim {
            if i != j && *m.get(i, j) < xi.zero_like() {
                return Err(Error::Precondition(
                    "M(xi) has a negative off-diagonal entry; power iteration needs positive rates".into(),
                ));
            }
        }
    }
    let shift = (0..dim).map(|i| m.get(i, i).abs()).fold(xi.zero_like(), |a, b| if b > a { b } else { a }) + xi.one_like();
    let shifted = &m + &Matrix::identity(dim, &prec).scale(&shift);
    let ones = vec![xi.one_like(); dim];
    let estimate = |v: &[BigFloat]| -> BigFloat {
        let av = shifted.mul_vec(v);
        let num = av.iter().fold(xi.zero_like(), |a, b| a + b);
        let den = v.iter().fold(xi.zero_like(), |a, b| a + b);
        num / den
    };
    let tol = 2f64.powi(-((prec as i32) - 24));
    // at xi = 1 the all-ones row is a left eigenvector, so the estimate settles
    // before the vector does; require the eigen-residual too
    let res_tol = 2f64.powi(-((prec / 2) as i32)) * m.max_abs().max(1.0);
    let mut power = shifted.clone();
    let mut prev: Option<BigFloat> = None;
    for k in 0..200 {
        let v = power.mul_vec(&ones);
        let est = estimate(&v);
        if let Some(pv) = &prev {
            let change = (est.clone() - pv).magnitude();
            if change <= tol * est.magnitude().max(1.0) {
                let value = est.clone() - &shift;
                let mv = m.mul_vec(&v);
                let vmax = v.iter().map(|c| c.magnitude()).fold(0.0, f64::max);
                let residual = mv
                    .iter()
                    .zip(&v)
                    .map(|(a, b)| (a.clone() - value.clone() * b).magnitude())
                    .fold(0.0, f64::max)
                    / vmax;
                if residual <= res_tol {
                    return Ok(Lambda0 { value, squarings: k, residual });
                }
            }
        }
        prev = Some(est);
        power = &power * &power;
        let norm = power.max_abs();
        power = power.scale(&BigFloat::with_precision(1.0 / norm, prec));
    }
    Err(Error::Convergence("power iteration did not settle after 200 squarings".into()))
}

/// Roots of the characteristic polynomial of the 2x2 matrix, larger first.
pub fn larger_root_2x2(m: &Matrix<BigFloat>) -> BigFloat {
    let tr = m.trace();
    let det = m.get(0, 0).clone() * m.get(1, 1) - m.get(0, 1).clone() * m.get(1, 0);
    let two = tr.one_like() + tr.one_like();
    let disc = tr.square() - (two.clone() + &two) * det;
    (tr + disc.sqrt()) / two
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ParameterPoint;
    use crate::sampling::rng;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn exact(pt: &ParameterPoint) -> Params<Rational> {
        Params::from_point(pt, &())
    }

    #[test]
    fn m_single_site() {
        let p = exact(&ParameterPoint::physical_point());
        let r = ParameterPoint::physical_point().rates().unwrap();
        let xi = q(3, 2);
        let m = build_m(&p, 1, &xi).unwrap();
        let expect = Matrix::from_rows(vec![
            vec![-(r.alpha.clone() + &r.delta), xi.inv() * &r.gamma + &r.beta],
            vec![xi.clone() * &r.alpha + &r.delta, -(r.gamma.clone() + &r.beta)],
        ]);
        assert_eq!(m, expect);
    }

    #[test]
    fn stochastic_at_xi_one() {
        for n in 1..=3 {
            let m = build_m(&exact(&ParameterPoint::default_point()), n, &q(1, 1)).unwrap();
            let ones = vec![q(1, 1); 1 << n];
            assert!(m.vec_mul(&ones).iter().all(|v| v.is_zero()));
        }
    }

    #[test]
    fn r_at_one_is_identity() {
        let p = exact(&ParameterPoint::default_point());
        assert_eq!(build_r(&p, &q(1, 1)).unwrap(), Matrix::identity(4, &()));
        let k = build_k(&p, &q(3, 2), &q(1, 1)).unwrap();
        assert_eq!(&k * &build_k(&p, &q(2, 3), &q(1, 1)).unwrap(), Matrix::identity(2, &()));
    }

    #[test]
    fn pole_is_reported() {
        let p = exact(&ParameterPoint::default_point());
        assert!(matches!(build_r(&p, &p.t), Err(Error::Domain(_))));
    }

    #[test]
    fn integrability_default_point() {
        let rep = check_integrability(&exact(&ParameterPoint::default_point()), 2, &mut rng(3)).unwrap();
        assert!(rep.all_passed(), "{:#?}", rep.failures());
    }

    #[test]
    fn scattering_two_sites() {
        let rep = check_scattering(&exact(&ParameterPoint::default_point()), 2, 1, &mut rng(5)).unwrap();
        assert!(rep.all_passed(), "{:#?}", rep.failures());
    }

    #[test]
    fn lambda0_single_site_matches_quadratic() {
        let prec = 256;
        let pt = ParameterPoint::physical_point();
        let p: Params<BigFloat> = Params::from_point(&pt, &prec);
        let xi = BigFloat::from_rational(&q(3, 2), prec);
        let l = lambda0(&p, 1, &xi).unwrap();
        let m = build_m(&p, 1, &xi).unwrap();
        let root = larger_root_2x2(&m);
        assert!((l.value - root).magnitude() < 1e-60);
    }

    #[test]
    fn lambda0_vanishes_at_xi_one() {
        let prec = 256;
        let p: Params<BigFloat> = Params::from_point(&ParameterPoint::physical_point(), &prec);
        let l = lambda0(&p, 2, &BigFloat::from_rational(&q(1, 1), prec)).unwrap();
        assert!(l.value.magnitude() < 1e-60, "{:?}", l.value);
    }
}
