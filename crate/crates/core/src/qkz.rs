//! qKZ solutions from non-symmetric Koornwinder polynomials and checkers for
//! the right/left qKZ systems, their component exchange relations and the
//! Gallavotti-Cohen correspondence.

use std::collections::VecDeque;

use rand::Rng;

use crate::asep::{build_kbar, build_ktilde, build_m, r_at, u_gc};
use crate::composition::Composition;
use crate::error::{Error, Result};
use crate::hecke::HeckeContext;
use crate::koornwinder::{nonsymmetric_e, symmetric_p};
use crate::laurent::LaurentPolynomial;
use crate::matrix::Matrix;
use crate::mpa::ConfigurationVector;
use crate::params::Params;
use crate::report::{CheckEntry, Report};
use crate::sampling::spectral_point;
use crate::scalar::{Rational, Scalar};

type Poly<F> = LaurentPolynomial<F>;

/// Column (right) or row (left) qKZ system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Right,
    Left,
}

/// Exchange-relation constants `(c_0, c_N, c_swap)`: the component relations read
/// `T_0 f_(o..) = c_0 f_(*..)`, `T_N f_(..*) = c_N f_(..o)` and
/// `T_i f_(..*o..) = c_swap f_(..o*..)`.
fn exchange_constants<F: Scalar>(p: &Params<F>, side: Side, xi: &F) -> (F, F, F) {
    match side {
        Side::Right => (xi.inv() / &p.t0_half, p.tn_half.inv(), p.t_half.inv()),
        Side::Left => (xi.clone() * &p.t0_half, p.tn_half.clone(), p.t_half.clone()),
    }
}

/// The state generated from its empty-lattice component: a particle enters at
/// site `N` through `T_N^-1` and moves left through `T_i^-1`.
pub fn build_from_reference<F: Scalar>(
    h: &HeckeContext<F>,
    side: Side,
    xi: &F,
    reference: Poly<F>,
) -> Result<ConfigurationVector<Poly<F>>> {
    let n = h.n;
    let (_, cn, cswap) = exchange_constants(&h.params, side, xi);
    let dim = 1usize << n;
    let mut entries: Vec<Option<Poly<F>>> = vec![None; dim];
    entries[0] = Some(reference);
    let mut queue = VecDeque::from([0usize]);
    while let Some(idx) = queue.pop_front() {
        let tau = ConfigurationVector::<()>::occupations(n, idx);
        let cur = entries[idx].clone().expect("queued entries are filled");
        let mut push = |next: Vec<u8>, val: Poly<F>, entries: &mut Vec<Option<Poly<F>>>| {
            let j = ConfigurationVector::<()>::index(&next);
            if entries[j].is_none() {
                entries[j] = Some(val);
                queue.push_back(j);
            }
        };
        if tau[n - 1] == 0 {
            let mut next = tau.clone();
            next[n - 1] = 1;
            let val = h.apply_t(n, true, &cur)?.scale(&cn);
            push(next, val, &mut entries);
        }
        for i in 1..n {
            if tau[i - 1] == 0 && tau[i] == 1 {
                let mut next = tau.clone();
                next.swap(i - 1, i);
                let val = h.apply_t(i, true, &cur)?.scale(&cswap);
                push(next, val, &mut entries);
            }
        }
    }
    Ok(ConfigurationVector { n, entries: entries.into_iter().map(|e| e.expect("all configurations reached")).collect() })
}

/// Right solution at `xi = s^m` from `E_((-m)^N)`.
pub fn oracle_right_state(h: &HeckeContext<Rational>, m: usize) -> Result<ConfigurationVector<Poly<Rational>>> {
    let e = nonsymmetric_e(h, &Composition::constant(-(m as i32), h.n))?;
    let xi = h.params.s.pow_i(m as i64);
    build_from_reference(h, Side::Right, &xi, e.poly)
}

/// Left solution at `xi = s^m` from `E_((m)^N)`.
pub fn oracle_left_state(h: &HeckeContext<Rational>, m: usize) -> Result<ConfigurationVector<Poly<Rational>>> {
    let e = nonsymmetric_e(h, &Composition::constant(m as i32, h.n))?;
    let xi = h.params.s.pow_i(m as i64);
    build_from_reference(h, Side::Left, &xi, e.poly)
}

/// Component exchange relations and the empty-lattice `Y_i` eigenvalues, exactly.
pub fn check_components<F: Scalar>(
    h: &HeckeContext<F>,
    side: Side,
    xi: &F,
    state: &ConfigurationVector<Poly<F>>,
) -> Result<Report> {
    let n = h.n;
    let p = &h.params;
    let (c0, cn, cswap) = exchange_constants(p, side, xi);
    let mut report = Report::new(format!("{side:?} exchange relations, N = {n}"));
    let dim = 1usize << n;
    let diff = |a: &Poly<F>, b: &Poly<F>, e: &mut CheckEntry| {
        let d = a - b;
        e.record(d.max_coeff_magnitude(), d.is_zero());
    };
    let mut e0 = CheckEntry::exact("T_0 f_(o..) = c_0 f_(*..)");
    let mut en = CheckEntry::exact("T_N f_(..*) = c_N f_(..o)");
    let mut e00 = CheckEntry::exact("T_i f_(..oo..) = t^(1/2) f_(..oo..)");
    let mut e11 = CheckEntry::exact("T_i f_(..**..) = t^(1/2) f_(..**..)");
    let mut e10 = CheckEntry::exact("T_i f_(..*o..) = c_swap f_(..o*..)");
    for idx in 0..dim {
        let tau = ConfigurationVector::<()>::occupations(n, idx);
        let f = &state.entries[idx];
        if tau[0] == 0 {
            let mut other = tau.clone();
            other[0] = 1;
            diff(&h.apply_t(0, false, f)?, &state.get(&other).scale(&c0), &mut e0);
        }
        if tau[n - 1] == 1 {
            let mut other = tau.clone();
            other[n - 1] = 0;
            diff(&h.apply_t(n, false, f)?, &state.get(&other).scale(&cn), &mut en);
        }
        for i in 1..n {
            let tf = h.apply_t(i, false, f)?;
            match (tau[i - 1], tau[i]) {
                (0, 0) => diff(&tf, &f.scale(&p.t_half), &mut e00),
                (1, 1) => diff(&tf, &f.scale(&p.t_half), &mut e11),
                (1, 0) => {
                    let mut other = tau.clone();
                    other.swap(i - 1, i);
                    diff(&tf, &state.get(&other).scale(&cswap), &mut e10)
                }
                _ => {}
            }
        }
    }
    // bulk relations are vacuous on one site
    for e in [e0, en, e00, e11, e10] {
        if e.instances > 0 {
            report.push(e);
        }
    }
    let mut ey = CheckEntry::exact("Y_i on the empty-lattice component");
    let empty = &state.entries[0];
    for i in 1..=n {
        let y = match side {
            Side::Right => (xi.clone() * &p.t0_half * &p.tn_half * p.t.pow_i(i as i64 - 1)).inv(),
            Side::Left => xi.clone() * &p.t0_half * &p.tn_half * p.t.pow_i((n - i) as i64),
        };
        diff(&h.apply_y(i, empty)?, &empty.scale(&y), &mut ey);
    }
    report.push(ey);
    Ok(report)
}

fn apply_side<F: Scalar>(side: Side, m: &Matrix<F>, v: &[F]) -> Vec<F> {
    match side {
        Side::Right => m.mul_vec(v),
        Side::Left => m.vec_mul(v),
    }
}

fn record_vec<F: Scalar>(e: &mut CheckEntry, a: &[F], b: &[F]) {
    let d: Vec<F> = a.iter().zip(b).map(|(x, y)| x.clone() - y).collect();
    let mag = d.iter().map(|x| x.magnitude()).fold(0.0, f64::max);
    e.record(mag, d.iter().all(|x| x.is_zero()));
}

/// Pointwise check of the qKZ system at the given spectral points. `state(x)`
/// returns the `2^N` components at `x`; `tol` is ignored for exact fields.
pub fn verify_qkz_pointwise<F: Scalar>(
    p: &Params<F>,
    n: usize,
    side: Side,
    xi: &F,
    points: &[Vec<F>],
    tol: f64,
    state: impl Fn(&[F]) -> Result<Vec<F>>,
) -> Result<Report> {
    let entry = |name: &str| if F::is_exact() { CheckEntry::exact(name) } else { CheckEntry::numeric(name, tol) };
    let mut bulk = entry("R_i(x_(i+1)/x_i) f(.., x_i, x_(i+1), ..) = f(.., x_(i+1), x_i, ..)");
    let mut left = entry("K~_1(1/x_1) f(1/x_1, ..) = f(s x_1, ..)");
    let mut right = entry("K-bar_N(x_N) f(.., x_N) = f(.., 1/x_N)");
    for x in points {
        let fx = state(x)?;
        for i in 1..n {
            let r = r_at(p, i, n, &(x[i].clone() / &x[i - 1]))?;
            let mut sx = x.clone();
            sx.swap(i - 1, i);
            record_vec(&mut bulk, &apply_side(side, &r, &fx), &state(&sx)?);
        }
        let mut inv = x.clone();
        inv[0] = x[0].inv();
        let mut shifted = x.clone();
        shifted[0] = x[0].clone() * &p.s;
        let kt = build_ktilde(p, &x[0].inv(), xi)?.embed(0, n)?;
        record_vec(&mut left, &apply_side(side, &kt, &state(&inv)?), &state(&shifted)?);
        let kb = build_kbar(p, &x[n - 1])?.embed(n - 1, n)?;
        let mut inv_n = x.clone();
        inv_n[n - 1] = x[n - 1].inv();
        record_vec(&mut right, &apply_side(side, &kb, &fx), &state(&inv_n)?);
    }
    let mut report = Report::new(format!("{side:?} qKZ system, N = {n}"));
    if n > 1 {
        report.push(bulk);
    }
    report.push(left);
    report.push(right);
    Ok(report)
}

/// Random rational spectral points avoiding the poles of every local matrix the
/// pointwise check evaluates.
pub fn admissible_points<F: Scalar, R: Rng>(p: &Params<F>, n: usize, xi: &F, count: usize, rng: &mut R) -> Vec<Vec<F>> {
    let ctx = p.ctx();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let x: Vec<F> = (0..n).map(|_| F::from_rational(&spectral_point(rng), &ctx)).collect();
        let ok = (1..n).all(|i| r_at(p, i, n, &(x[i].clone() / &x[i - 1])).is_ok())
            && build_ktilde(p, &x[0].inv(), xi).is_ok()
            && build_kbar(p, &x[n - 1]).is_ok();
        if ok {
            out.push(x);
        }
    }
    out
}

/// Full exact check of a symbolic state: pointwise qKZ plus component relations.
pub fn verify_qkz(
    h: &HeckeContext<Rational>,
    side: Side,
    xi: &Rational,
    state: &ConfigurationVector<Poly<Rational>>,
    points: &[Vec<Rational>],
) -> Result<Report> {
    let mut report = verify_qkz_pointwise(&h.params, h.n, side, xi, points, 0.0, |x| state.evaluate(x))?;
    report.entries.extend(check_components(h, side, xi, state)?.entries);
    Ok(report)
}

/// `U_GC Phi` as a column vector.
pub fn gc_image<F: Scalar>(p: &Params<F>, phi: &ConfigurationVector<Poly<F>>) -> ConfigurationVector<Poly<F>> {
    let u = u_gc(p, phi.n);
    ConfigurationVector { n: phi.n, entries: phi.entries.iter().enumerate().map(|(i, c)| c.scale(u.get(i, i))).collect() }
}

/// `M(1) U_GC |1> = 0` at a point with `t0 tN t^(N-1) = 1`.
pub fn check_equilibrium(p: &Params<Rational>, n: usize) -> Result<CheckEntry> {
    let one = Rational::from(1);
    if p.t0.clone() * &p.tn * p.t.pow_i(n as i64 - 1) != one {
        return Err(Error::Precondition("equilibrium needs t0 tN t^(N-1) = 1".into()));
    }
    let u = u_gc(p, n);
    let v: Vec<Rational> = (0..1 << n).map(|i| u.get(i, i).clone()).collect();
    let mut e = CheckEntry::exact(format!("M(1) U_GC |1> = 0, N = {n}"));
    let mv = build_m(p, n, &one)?.mul_vec(&v);
    e.record(mv.iter().map(|x| x.magnitude()).fold(0.0, f64::max), mv.iter().all(|x| x.is_zero()));
    Ok(e)
}

/// Characteristic polynomials of `M(xi)` and `M(xi')` coincide.
pub fn check_gc_spectrum(p: &Params<Rational>, n: usize, xi: &Rational) -> Result<CheckEntry> {
    let a = build_m(p, n, xi)?.charpoly();
    let b = build_m(p, n, &p.gc_xi(n, xi))?.charpoly();
    let mut e = CheckEntry::exact(format!("charpoly M(xi) = charpoly M(xi'), N = {n}"));
    record_vec(&mut e, &a, &b);
    Ok(e)
}

/// `c` with `a = c b` exactly, if it exists.
pub fn proportionality<F: Scalar>(a: &Poly<F>, b: &Poly<F>) -> Option<F> {
    let (lead, c) = b.terms().next()?;
    let ratio = a.coeff(lead)?.clone() / c;
    (a - &b.scale(&ratio)).is_zero().then_some(ratio)
}

/// Sum of the components of a right solution against `P_(m^N)`. Returns the
/// check (exact proportionality) and the ratio when it exists.
pub fn check_sum_rule(
    h: &HeckeContext<Rational>,
    state: &ConfigurationVector<Poly<Rational>>,
    m: usize,
    name: &str,
) -> Result<(CheckEntry, Option<Rational>)> {
    let p = symmetric_p(&h.params, h.n, m)?;
    let total = state.sum();
    let ratio = proportionality(&total, &p.poly);
    let mut e = CheckEntry::exact(format!("{name}: sum of components proportional to P_(m^N), N = {}, m = {m}", h.n));
    match &ratio {
        Some(_) => e.record(0.0, true),
        None => {
            let lead = p.poly.terms().next().map(|(k, _)| total.coeff_or_zero(k, &())).unwrap_or_else(|| Rational::from(0));
            let d = &total - &p.poly.scale(&lead);
            e.record(d.max_coeff_magnitude(), false)
        }
    }
    Ok((e, ratio))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpa::{phi_m, psi_m, AlgebraicMoments, Symbolic};
    use crate::params::ParameterPoint;
    use crate::sampling::rng;

    fn ctx(n: usize) -> HeckeContext<Rational> {
        HeckeContext::exact(&ParameterPoint::default_point(), n).unwrap()
    }

    #[test]
    fn oracle_right_state_solves_qkz() {
        let h = ctx(2);
        let psi = oracle_right_state(&h, 1).unwrap();
        let xi = h.params.s.clone();
        let rep = verify_qkz(&h, Side::Right, &xi, &psi, &admissible_points(&h.params, 2, &xi, 3, &mut rng(1))).unwrap();
        assert!(rep.all_passed(), "{:#?}", rep.failures());
    }

    #[test]
    fn oracle_left_state_solves_qkz() {
        let h = ctx(2);
        let phi = oracle_left_state(&h, 1).unwrap();
        let xi = h.params.s.clone();
        let rep = verify_qkz(&h, Side::Left, &xi, &phi, &admissible_points(&h.params, 2, &xi, 3, &mut rng(2))).unwrap();
        assert!(rep.all_passed(), "{:#?}", rep.failures());
    }

    #[test]
    fn matrix_product_equals_oracle_exactly() {
        for n in 1..=2 {
            let h = ctx(n);
            let src = AlgebraicMoments::new(&h.params);
            for m in 1..=2 {
                let psi = psi_m(&src, &Symbolic { n }, n, m).unwrap();
                assert_eq!(psi, oracle_right_state(&h, m).unwrap(), "right N={n} m={m}");
                let phi = phi_m(&src, &Symbolic { n }, n, m).unwrap();
                assert_eq!(phi, oracle_left_state(&h, m).unwrap(), "left N={n} m={m}");
            }
        }
    }

    #[test]
    fn matrix_product_solves_qkz() {
        let h = ctx(2);
        let src = AlgebraicMoments::new(&h.params);
        let xi = h.params.s.clone();
        let pts = admissible_points(&h.params, 2, &xi, 3, &mut rng(4));
        let psi = psi_m(&src, &Symbolic { n: 2 }, 2, 1).unwrap();
        let rep = verify_qkz(&h, Side::Right, &xi, &psi, &pts).unwrap();
        assert!(rep.all_passed(), "{:#?}", rep.failures());
        let phi = phi_m(&src, &Symbolic { n: 2 }, 2, 1).unwrap();
        let rep = verify_qkz(&h, Side::Left, &xi, &phi, &pts).unwrap();
        assert!(rep.all_passed(), "{:#?}", rep.failures());
    }

    #[test]
    fn gc_image_of_left_state_is_right_solution() {
        let h = ctx(2);
        let phi = oracle_left_state(&h, 1).unwrap();
        let xi = h.params.gc_xi(2, &h.params.s);
        let psi = gc_image(&h.params, &phi);
        let rep = verify_qkz(&h, Side::Right, &xi, &psi, &admissible_points(&h.params, 2, &xi, 3, &mut rng(3))).unwrap();
        assert!(rep.all_passed(), "{:#?}", rep.failures());
    }

    #[test]
    fn sum_rules() {
        for n in 1..=2 {
            let h = ctx(n);
            for m in 1..=2 {
                let psi = oracle_right_state(&h, m).unwrap();
                let (e, r) = check_sum_rule(&h, &psi, m, "psi").unwrap();
                assert!(e.passed);
                assert_eq!(r, Some(Rational::from(1)));
                let phi = gc_image(&h.params, &oracle_left_state(&h, m).unwrap());
                let (e, r) = check_sum_rule(&h, &phi, m, "U_GC phi").unwrap();
                assert!(e.passed && r.is_some());
            }
        }
    }

    #[test]
    fn equilibrium_and_spectrum() {
        for n in 1..=3 {
            let p = Params::from_point(&ParameterPoint::equilibrium_point(n), &());
            assert!(check_equilibrium(&p, n).unwrap().passed);
        }
        let p = Params::from_point(&ParameterPoint::physical_point(), &());
        assert!(check_gc_spectrum(&p, 2, &Rational::new(3, 2)).unwrap().passed);
    }
}
