//! Matrix-product states built on the `t`-oscillator algebra: Fock
//! representation, boundary vectors, normalisations, and the right/left
//! recursive constructions of `Psi^(m)` and `Phi^(m)`.
//!
//! Every contraction that enters a state is a normalised moment
//! `<<w|S^j W|v>> / <<w|S^j|v>>` for a word `W` in `a`, `a+`. Two sources are
//! provided: [`FockMoments`] sums the truncated Fock series, and
//! [`AlgebraicMoments`] solves the boundary relations degree by degree, which
//! is exact and has no convergence requirement on `s`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use serde::Serialize;

use crate::composition::{dominance_leq, Composition};
use crate::error::{Error, Result};
use crate::laurent::LaurentPolynomial;
use crate::matrix::Matrix;
use crate::params::Params;
use crate::scalar::{BigFloat, Real, Scalar};

type Poly<F> = LaurentPolynomial<F>;

/// `(x; t)_n = prod_{k < n} (1 - t^k x)`.
pub fn t_pochhammer<F: Scalar>(x: &F, t: &F, n: usize) -> F {
    let mut acc = x.one_like();
    let mut tk = x.one_like();
    for _ in 0..n {
        acc = acc * (x.one_like() - tk.clone() * x);
        tk = tk * t;
    }
    acc
}

/// `H_n(x, y)` from `H_{n+1} = (x + y) H_n - x y (1 - t^n) H_{n-1}`.
pub fn t_hermite<F: Scalar>(n: usize, x: &F, y: &F, t: &F) -> F {
    hermite_sequence(n + 1, x, y, t).pop().expect("nonempty")
}

fn hermite_sequence<F: Scalar>(len: usize, x: &F, y: &F, t: &F) -> Vec<F> {
    let one = x.one_like();
    let mut out = Vec::with_capacity(len);
    let (sum, prod) = (x.clone() + y, x.clone() * y);
    let mut tn = one.clone();
    for n in 0..len {
        let next = match n {
            0 => one.clone(),
            1 => sum.clone(),
            _ => {
                
                sum.clone() * &out[n - 1] - prod.clone() * (one.clone() - &tn) * &out[n - 2]
            }
        };
        if n >= 1 {
            tn = tn * t;
        }
        out.push(next);
    }
    out
}

/// Generators of the oscillator algebra appearing in words.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A,
    Adag,
}

/// Which boundary pair a moment is taken in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Boundary {
    /// `<<w|`, `|v>>` with the model's `u0`, `uN`.
    Plain,
    /// `<<w~|`, `|v~>>`, i.e. `u_i := t_i`.
    Tilde,
}

/// Boundary scalars `(t0^(1/2)(u0^(1/2) - u0^(-1/2)), tN^(1/2)(uN^(1/2) - uN^(-1/2)))`.
fn boundary_shifts<F: Scalar>(p: &Params<F>, b: Boundary) -> (F, F) {
    match b {
        Boundary::Plain => (p.t0_half.clone() * p.c0(), p.tn_half.clone() * p.cn()),
        Boundary::Tilde => (p.t0.clone() - p.t0.one_like(), p.tn.clone() - p.tn.one_like()),
    }
}

/// Truncated Fock representation on `span{|0>, .., |K-1>}`.
#[derive(Clone, Debug)]
pub struct FockRep<F: Scalar> {
    pub k: usize,
    pub params: Params<F>,
    pub w: Vec<F>,
    pub v: Vec<F>,
    pub w_tilde: Vec<F>,
    pub v_tilde: Vec<F>,
    /// `1 - t^k`, the superdiagonal of `a`.
    lowering: Vec<F>,
    /// `s^(k/2)`, the diagonal of `S`.
    s_diag: Vec<F>,
}

/// Fill the Fock representation and the four boundary vectors.
pub fn build_fock<F: Scalar>(params: &Params<F>, k: usize) -> Result<FockRep<F>> {
    if k < 2 {
        return Err(Error::Argument(format!("Fock truncation K = {k}; need K >= 2")));
    }
    let p = params;
    let t = &p.t;
    let ctx = p.ctx();
    let mut lowering = Vec::with_capacity(k);
    let mut s_diag = Vec::with_capacity(k);
    let (mut tk, mut sk) = (F::one(&ctx), F::one(&ctx));
    for _ in 0..k {
        lowering.push(F::one(&ctx) - &tk);
        s_diag.push(sk.clone());
        tk = tk * t;
        sk = sk * &p.s_half;
    }
    let left = |u_half: &F| hermite_sequence(k, &(p.t0_half.clone() / u_half), &(-(p.t0_half.clone() * u_half)), t);
    let right = |u_half: &F| {
        let h = hermite_sequence(k, &(p.tn_half.clone() / u_half), &(-(p.tn_half.clone() * u_half)), t);
        let mut poch = F::one(&ctx);
        let mut tn = F::one(&ctx);
        h.into_iter()
            .enumerate()
            .map(|(n, hn)| {
                if n > 0 {
                    tn = tn.clone() * t;
                    poch = poch.clone() * (F::one(&ctx) - &tn);
                }
                hn / &poch
            })
            .collect::<Vec<F>>()
    };
    if lowering.iter().skip(1).any(|l| l.is_zero()) {
        return Err(Error::DegenerateParameters("t is a root of unity below the truncation".into()));
    }
    Ok(FockRep {
        k,
        w: left(&p.u0_half),
        v: right(&p.un_half),
        w_tilde: left(&p.t0_half),
        v_tilde: right(&p.tn_half),
        params: p.clone(),
        lowering,
        s_diag,
    })
}

impl<F: Scalar> FockRep<F> {
    pub fn a(&self) -> Matrix<F> {
        let ctx = self.params.ctx();
        let mut m = Matrix::zeros(self.k, self.k, &ctx);
        for n in 1..self.k {
            m.set(n - 1, n, self.lowering[n].clone());
        }
        m
    }

    pub fn adag(&self) -> Matrix<F> {
        let ctx = self.params.ctx();
        let mut m = Matrix::zeros(self.k, self.k, &ctx);
        for n in 0..self.k - 1 {
            m.set(n + 1, n, F::one(&ctx));
        }
        m
    }

    pub fn s(&self) -> Matrix<F> {
        Matrix::diagonal(self.s_diag.clone())
    }

    fn boundary(&self, b: Boundary) -> (&[F], &[F]) {
        match b {
            Boundary::Plain => (&self.w, &self.v),
            Boundary::Tilde => (&self.w_tilde, &self.v_tilde),
        }
    }

    /// Row vector `r` times `a` or `a+`.
    fn row_apply(&self, r: &[F], l: Letter) -> Vec<F> {
        let zero = r[0].zero_like();
        (0..self.k)
            .map(|n| match l {
                Letter::A if n == 0 => zero.clone(),
                Letter::A => r[n - 1].clone() * &self.lowering[n],
                Letter::Adag if n + 1 < self.k => r[n + 1].clone(),
                Letter::Adag => zero.clone(),
            })
            .collect()
    }

    /// Terms `w_n s^(jn/2) v_n` of `<<w|S^j|v>>`.
    fn omega_terms(&self, j: u32, b: Boundary) -> Vec<F> {
        let (w, v) = self.boundary(b);
        (0..self.k).map(|n| w[n].clone() * self.s_diag[n].pow_i(j as i64) * &v[n]).collect()
    }

    /// Truncated `<<w|S^j|v>>`.
    pub fn omega(&self, j: u32, b: Boundary) -> F {
        let terms = self.omega_terms(j, b);
        terms.iter().fold(terms[0].zero_like(), |a, x| a + x)
    }

    /// Truncated `<<w|S^j W|v>>`.
    pub fn moment(&self, j: u32, b: Boundary, word: &[Letter]) -> F {
        let (w, v) = self.boundary(b);
        let mut r: Vec<F> = (0..self.k).map(|n| w[n].clone() * self.s_diag[n].pow_i(j as i64)).collect();
        for &l in word {
            r = self.row_apply(&r, l);
        }
        r.iter().zip(v).fold(r[0].zero_like(), |a, (x, y)| a + x.clone() * y)
    }

    /// Relative size of the neglected tail of `<<w|S^j|v>>`, extrapolating the
    /// geometric decay of the last few terms. Fails when the terms do not decay.
    pub fn tail_estimate(&self, j: u32, b: Boundary) -> Result<f64> {
        let terms: Vec<f64> = self.omega_terms(j, b).iter().map(|x| x.magnitude()).collect();
        let total = self.omega(j, b).magnitude();
        let k = self.k;
        let window = 6.min(k - 1);
        let mut ratio: f64 = 0.0;
        for n in k - window..k {
            if terms[n - 1] > 0.0 {
                ratio = ratio.max(terms[n] / terms[n - 1]);
            }
        }
        // Alternate-index decay guards against sign-alternating sequences with a vanishing term.
        for n in k.saturating_sub(window).max(2)..k {
            if terms[n - 2] > 0.0 {
                ratio = ratio.max((terms[n] / terms[n - 2]).sqrt());
            }
        }
        if !(ratio < 1.0) {
            return Err(Error::Truncation(format!(
                "terms of <<w|S^{j}|v>> stop decaying by index K = {k} (ratio {ratio:.3}); |s| may be too close to 1"
            )));
        }
        if total == 0.0 {
            return Err(Error::Truncation(format!("truncated <<w|S^{j}|v>> vanishes")));
        }
        Ok(terms[k - 1] * ratio / (1.0 - ratio) / total)
    }
}

/// Normalised moments `<<w|S^j W|v>> / <<w|S^j|v>>`.
pub trait MomentSource<F: Scalar>: Sync {
    fn params(&self) -> &Params<F>;
    fn ratio(&self, j: u32, b: Boundary, word: &[Letter]) -> Result<F>;
    /// Relative truncation error of the `j`-th normalisation (zero when exact).
    fn tail(&self, j: u32, b: Boundary) -> Result<f64>;
}

/// Moments by summing the truncated Fock series.
pub struct FockMoments<F: Scalar> {
    pub rep: FockRep<F>,
    omegas: Mutex<HashMap<(u32, Boundary), F>>,
}

impl<F: Scalar> FockMoments<F> {
    pub fn new(params: &Params<F>, k: usize) -> Result<Self> {
        Ok(FockMoments { rep: build_fock(params, k)?, omegas: Mutex::new(HashMap::new()) })
    }

    pub fn omega(&self, j: u32, b: Boundary) -> F {
        let mut cache = self.omegas.lock().expect("cache lock");
        cache.entry((j, b)).or_insert_with(|| self.rep.omega(j, b)).clone()
    }
}

impl<F: Scalar> MomentSource<F> for FockMoments<F> {
    fn params(&self) -> &Params<F> {
        &self.rep.params
    }

    fn ratio(&self, j: u32, b: Boundary, word: &[Letter]) -> Result<F> {
        let om = self.omega(j, b);
        if om.is_zero() {
            return Err(Error::DegenerateParameters(format!("<<w|S^{j}|v>> vanishes")));
        }
        Ok(self.rep.moment(j, b, word) / om)
    }

    fn tail(&self, j: u32, b: Boundary) -> Result<f64> {
        self.rep.tail_estimate(j, b)
    }
}

/// Moments from the algebra alone. With `f(i, k) = <<w|(a+)^i a^k S^j|v>> / <<w|S^j|v>>`
/// the left boundary relation links `f(i, k)` to `f(i-1, k+1)` and the right one
/// links `f(i-1, k+1)` back to `f(i, k)`; each pair is a 2x2 solve with
/// determinant `1 - t0 tN s^j t^(n-1)` at degree `n = i + k`.
pub struct AlgebraicMoments<F: Scalar> {
    params: Params<F>,
    tables: Mutex<HashMap<(u32, Boundary), Vec<Vec<F>>>>,
    words: Mutex<HashMap<(u32, Boundary, Vec<Letter>), F>>,
}

impl<F: Scalar> AlgebraicMoments<F> {
    pub fn new(params: &Params<F>) -> Self {
        AlgebraicMoments { params: params.clone(), tables: Mutex::new(HashMap::new()), words: Mutex::new(HashMap::new()) }
    }

    /// `f[i][k]` for `i + k <= degree`.
    fn table(&self, j: u32, b: Boundary, degree: usize) -> Result<Vec<Vec<F>>> {
        if let Some(t) = self.tables.lock().expect("cache lock").get(&(j, b)) {
            if t.len() > degree {
                return Ok(t.clone());
            }
        }
        let p = &self.params;
        let ctx = p.ctx();
        let one = F::one(&ctx);
        let (cl, cr) = boundary_shifts(p, b);
        let sj = p.s.pow_i(j as i64);
        let sj_half = p.s_half.pow_i(j as i64);
        let tp = |e: usize| p.t.pow_i(e as i64);
        let mut f: Vec<Vec<F>> = (0..=degree).map(|i| vec![F::zero(&ctx); degree + 1 - i]).collect();
        f[0][0] = one.clone();
        let get = |f: &Vec<Vec<F>>, i: isize, k: isize| -> F {
            if i < 0 || k < 0 {
                F::zero(&ctx)
            } else {
                f[i as usize][k as usize].clone()
            }
        };
        for n in 1..=degree {
            let det = one.clone() - p.t0.clone() * &p.tn * &sj * tp(n - 1);
            if det.is_zero() {
                return Err(Error::DegenerateParameters(format!(
                    "1 - t0 tN s^{j} t^{} = 0: boundary moments are not determined",
                    n - 1
                )));
            }
            let ni = n as isize;
            let mut row = vec![F::zero(&ctx); n + 1];
            let ro = |f: &Vec<Vec<F>>, i: isize| -> F {
                // lower-degree part of the right relation at (i - 1, n - i + 1)
                sj.clone() * &p.tn * (one.clone() - tp((ni - i) as usize)) * get(f, i - 1, ni - i - 1)
                    - sj_half.clone() * &cr * get(f, i - 1, ni - i)
            };
            for i in 1..=ni {
                let lo = p.t0.clone() * (one.clone() - tp((i - 1) as usize)) * get(&f, i - 2, ni - i)
                    - cl.clone() * get(&f, i - 1, ni - i);
                row[i as usize] = (p.t0.clone() * tp((i - 1) as usize) * ro(&f, i) + lo) / &det;
            }
            row[0] = sj.clone() * &p.tn * tp(n - 1) * &row[1] + ro(&f, 1);
            for (i, v) in row.into_iter().enumerate() {
                f[i][n - i] = v;
            }
        }
        self.tables.lock().expect("cache lock").insert((j, b), f.clone());
        Ok(f)
    }
}

/// Normal-order a word: `W = sum c_(i,k) (a+)^i a^k`.
fn normal_order<F: Scalar>(word: &[Letter], t: &F) -> BTreeMap<(usize, usize), F> {
    let mut cur: BTreeMap<(usize, usize), F> = BTreeMap::new();
    cur.insert((0, 0), t.one_like());
    for &l in word {
        let mut next: BTreeMap<(usize, usize), F> = BTreeMap::new();
        let mut add = |key: (usize, usize), c: F| {
            let e = next.entry(key).or_insert_with(|| c.zero_like());
            *e = e.clone() + c;
        };
        for ((i, k), c) in cur {
            match l {
                Letter::A => add((i, k + 1), c),
                Letter::Adag => {
                    let tk = t.pow_i(k as i64);
                    if k > 0 {
                        add((i, k - 1), c.clone() * (t.one_like() - &tk));
                    }
                    add((i + 1, k), c * tk);
                }
            }
        }
        cur = next;
    }
    cur
}

impl<F: Scalar> MomentSource<F> for AlgebraicMoments<F> {
    fn params(&self) -> &Params<F> {
        &self.params
    }

    fn ratio(&self, j: u32, b: Boundary, word: &[Letter]) -> Result<F> {
        let key = (j, b, word.to_vec());
        if let Some(v) = self.words.lock().expect("cache lock").get(&key) {
            return Ok(v.clone());
        }
        let f = self.table(j, b, word.len())?;
        let mut acc = F::zero(&self.params.ctx());
        for ((i, k), c) in normal_order(word, &self.params.t) {
            acc = acc + c * &f[i][k];
        }
        let ups = word.iter().filter(|l| **l == Letter::Adag).count() as i64;
        let shift = self.params.s_half.pow_i(j as i64 * (2 * ups - word.len() as i64));
        let v = acc * shift;
        self.words.lock().expect("cache lock").insert(key, v.clone());
        Ok(v)
    }

    fn tail(&self, _j: u32, _b: Boundary) -> Result<f64> {
        Ok(0.0)
    }
}

/// `<<w|S^a|v>>` from the `t`-Mehler formula, each infinite product cut at the
/// first factor within `2^-(precision + 8)` of one.
pub fn omega_closed_form(params: &Params<BigFloat>, a: u32, boundary: Boundary) -> Result<BigFloat> {
    let p = match boundary {
        Boundary::Plain => params.clone(),
        Boundary::Tilde => params.tilde(),
    };
    let prec = p.t.precision_bits();
    let one = p.t.one_like();
    if !(p.t.abs() < one) {
        return Err(Error::Convergence("the t-Mehler products need |t| < 1".into()));
    }
    let lam = p.s_half.pow_i(a as i64);
    let (x, y) = (p.t0_half.clone() / &p.u0_half, -(p.t0_half.clone() * &p.u0_half));
    let (w, z) = (p.tn_half.clone() / &p.un_half, -(p.tn_half.clone() * &p.un_half));
    let eps = 2f64.powi(-(prec as i32 + 8));
    let infinite = |arg: &BigFloat| -> Result<BigFloat> {
        let mut acc = one.clone();
        let mut term = arg.clone();
        for _ in 0..100_000 {
            if term.magnitude() < eps {
                return Ok(acc);
            }
            acc = acc * (one.clone() - &term);
            term = term * &p.t;
        }
        Err(Error::Convergence(format!("(x; t)_inf at x = {:e} did not settle", arg.to_f64())))
    };
    let mut den = one.clone();
    for arg in [x.clone() * &w, x.clone() * &z, y.clone() * &w, y.clone() * &z] {
        let arg = arg * &lam;
        if !(arg.abs() < one) {
            return Err(Error::Convergence(format!(
                "t-Mehler series diverges: boundary product s^(a/2) * {:.6} has modulus >= 1",
                (arg.clone() / &lam).to_f64()
            )));
        }
        den = den * infinite(&arg)?;
    }
    if den.is_zero() {
        return Err(Error::DegenerateParameters("t-Mehler denominator vanishes".into()));
    }
    let num = infinite(&(x * y * w * z * lam.square()))?;
    Ok(num / den)
}

/// A state vector indexed by occupations, site 1 the most significant bit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigurationVector<T> {
    pub n: usize,
    pub entries: Vec<T>,
}

impl<T> ConfigurationVector<T> {
    pub fn index(tau: &[u8]) -> usize {
        tau.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }

    pub fn occupations(n: usize, idx: usize) -> Vec<u8> {
        (0..n).map(|i| ((idx >> (n - 1 - i)) & 1) as u8).collect()
    }

    pub fn get(&self, tau: &[u8]) -> &T {
        &self.entries[Self::index(tau)]
    }
}

impl<F: Scalar> ConfigurationVector<Poly<F>> {
    pub fn evaluate(&self, x: &[F]) -> Result<Vec<F>> {
        self.entries.iter().map(|p| p.evaluate(x)).collect()
    }

    pub fn sum(&self) -> Poly<F> {
        self.entries.iter().fold(Poly::zero(self.n), |a, b| &a + b)
    }
}

/// `lambda^(m)(tau)`: `-m` on empty sites, `m` on occupied ones.
pub fn lambda_m(tau: &[u8], m: usize) -> Composition {
    Composition::new(tau.iter().map(|&b| if b == 1 { m as i32 } else { -(m as i32) }).collect())
}

/// How matrix-product entries (monomial times moment) are realised.
pub trait Evaluator<F: Scalar> {
    type Val: Clone;
    fn zero(&self) -> Self::Val;
    fn term(&self, exps: &[i32], c: F) -> Self::Val;
    fn add(&self, a: &Self::Val, b: &Self::Val) -> Self::Val;
    fn mul(&self, a: &Self::Val, b: &Self::Val) -> Self::Val;
}

/// Entries as Laurent polynomials in `x_1..x_N`.
pub struct Symbolic {
    pub n: usize,
}

impl<F: Scalar> Evaluator<F> for Symbolic {
    type Val = Poly<F>;
    fn zero(&self) -> Poly<F> {
        Poly::zero(self.n)
    }
    fn term(&self, exps: &[i32], c: F) -> Poly<F> {
        Poly::monomial(Composition::new(exps.to_vec()), c)
    }
    fn add(&self, a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
        a + b
    }
    fn mul(&self, a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
        a * b
    }
}

/// Entries evaluated at a fixed spectral point.
pub struct AtPoint<F> {
    pub x: Vec<F>,
}

impl<F: Scalar> Evaluator<F> for AtPoint<F> {
    type Val = F;
    fn zero(&self) -> F {
        self.x[0].zero_like()
    }
    fn term(&self, exps: &[i32], c: F) -> F {
        exps.iter().zip(&self.x).fold(c, |acc, (&e, xi)| acc * xi.pow_i(e as i64))
    }
    fn add(&self, a: &F, b: &F) -> F {
        a.clone() + b
    }
    fn mul(&self, a: &F, b: &F) -> F {
        a.clone() * b
    }
}

/// A physical 2x2 matrix whose entries are `x^e` times identity or one letter.
type Cells = [[(i32, Option<Letter>); 2]; 2];

/// First factor of `L(x)`.
const L_FIRST: Cells = [[(0, None), (0, Some(Letter::A))], [(1, Some(Letter::Adag)), (1, None)]];
/// Second factor of `L(x)`.
const L_SECOND: Cells = [[(-1, None), (-1, Some(Letter::A))], [(0, Some(Letter::Adag)), (0, None)]];

fn flip(c: Cells) -> Cells {
    let f = |(e, l): (i32, Option<Letter>)| (-e, l);
    [[f(c[0][0]), f(c[0][1])], [f(c[1][0]), f(c[1][1])]]
}

type Table<V> = Vec<Vec<V>>;

/// `<<w|S^j prod_i C_(sigma_i rho_i)(x_i)|v>> / <<w|S^j|v>>` as a `2^N x 2^N` table.
fn contracted<F: Scalar, M: MomentSource<F>, E: Evaluator<F>>(
    src: &M,
    ev: &E,
    n: usize,
    j: u32,
    b: Boundary,
    cells: &Cells,
) -> Result<Table<E::Val>> {
    let dim = 1 << n;
    let mut out = Vec::with_capacity(dim);
    for sigma in 0..dim {
        let so = ConfigurationVector::<()>::occupations(n, sigma);
        let mut row = Vec::with_capacity(dim);
        for rho in 0..dim {
            let ro = ConfigurationVector::<()>::occupations(n, rho);
            let mut exps = Vec::with_capacity(n);
            let mut word = Vec::new();
            for i in 0..n {
                let (e, l) = cells[so[i] as usize][ro[i] as usize];
                exps.push(e);
                word.extend(l);
            }
            row.push(ev.term(&exps, src.ratio(j, b, &word)?));
        }
        out.push(row);
    }
    Ok(out)
}

fn table_mul<F: Scalar, E: Evaluator<F>>(ev: &E, a: &Table<E::Val>, b: &Table<E::Val>) -> Table<E::Val> {
    let dim = a.len();
    (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| (0..dim).fold(ev.zero(), |acc, k| ev.add(&acc, &ev.mul(&a[i][k], &b[k][j]))))
                .collect()
        })
        .collect()
}

/// Normalised increment `<<L(x_1)_1 .. L(x_N)_N>>` with slots `(j1, j2)`;
/// `inverted` uses `L(1/x)`.
pub fn increment<F: Scalar, M: MomentSource<F>, E: Evaluator<F>>(
    src: &M,
    ev: &E,
    n: usize,
    j1: u32,
    j2: u32,
    inverted: bool,
) -> Result<Table<E::Val>> {
    let (first, second) = if inverted { (flip(L_FIRST), flip(L_SECOND)) } else { (L_FIRST, L_SECOND) };
    let p = contracted(src, ev, n, j1, Boundary::Plain, &first)?;
    let q = contracted(src, ev, n, j2, Boundary::Tilde, &second)?;
    Ok(table_mul(ev, &p, &q))
}

/// `Psi^(1) = <<b(x_1)_1 .. b(x_N)_N>>` in slot `S^1`.
fn psi_one<F: Scalar, M: MomentSource<F>, E: Evaluator<F>>(src: &M, ev: &E, n: usize) -> Result<Vec<E::Val>> {
    let dim = 1 << n;
    let mut out = Vec::with_capacity(dim);
    for tau in 0..dim {
        let occ = ConfigurationVector::<()>::occupations(n, tau);
        let mut acc = ev.zero();
        for choice in 0..dim {
            let pick = ConfigurationVector::<()>::occupations(n, choice);
            let mut exps = Vec::with_capacity(n);
            let mut word = Vec::new();
            for i in 0..n {
                match (occ[i], pick[i]) {
                    (0, 0) => exps.push(-1),
                    (0, _) => {
                        exps.push(0);
                        word.push(Letter::A)
                    }
                    (_, 0) => exps.push(1),
                    _ => {
                        exps.push(0);
                        word.push(Letter::Adag)
                    }
                }
            }
            acc = ev.add(&acc, &ev.term(&exps, src.ratio(1, Boundary::Plain, &word)?));
        }
        out.push(acc);
    }
    Ok(out)
}

/// Right state `Psi^(m)` (solving the right qKZ system at `xi = s^m`), `m >= 1`.
pub fn psi_m<F: Scalar, M: MomentSource<F>, E: Evaluator<F>>(
    src: &M,
    ev: &E,
    n: usize,
    m: usize,
) -> Result<ConfigurationVector<E::Val>> {
    if n == 0 || m == 0 {
        return Err(Error::Argument("psi_m needs N >= 1 and m >= 1".into()));
    }
    let mut state = psi_one(src, ev, n)?;
    for k in 2..=m {
        let inc = increment(src, ev, n, (2 * k - 1) as u32, (2 * k - 2) as u32, false)?;
        state = inc
            .iter()
            .map(|row| row.iter().zip(&state).fold(ev.zero(), |acc, (a, b)| ev.add(&acc, &ev.mul(a, b))))
            .collect();
    }
    Ok(ConfigurationVector { n, entries: state })
}

/// Left state `Phi^(m)` (solving the left qKZ system at `xi = s^m`), `m >= 0`.
pub fn phi_m<F: Scalar, M: MomentSource<F>, E: Evaluator<F>>(
    src: &M,
    ev: &E,
    n: usize,
    m: usize,
) -> Result<ConfigurationVector<E::Val>> {
    if n == 0 {
        return Err(Error::Argument("phi_m needs N >= 1".into()));
    }
    let ctx = src.params().ctx();
    let mut state: Vec<E::Val> = vec![ev.term(&vec![0; n], F::one(&ctx)); 1 << n];
    for k in 1..=m {
        let inc = increment(src, ev, n, (2 * k - 1) as u32, (2 * k) as u32, true)?;
        state = (0..state.len())
            .map(|j| state.iter().zip(&inc).fold(ev.zero(), |acc, (a, row)| ev.add(&acc, &ev.mul(a, &row[j]))))
            .collect();
    }
    Ok(ConfigurationVector { n, entries: state })
}

/// Slots `(j, boundary)` whose normalisations enter `Psi^(m)` or `Phi^(m)`.
pub fn slots(m: usize, left: bool) -> Vec<(u32, Boundary)> {
    let mut out = Vec::new();
    if left {
        for k in 1..=m {
            out.push((2 * k as u32 - 1, Boundary::Plain));
            out.push((2 * k as u32, Boundary::Tilde));
        }
    } else if m >= 1 {
        out.push((1, Boundary::Plain));
        for k in 2..=m {
            out.push((2 * k as u32 - 1, Boundary::Plain));
            out.push((2 * k as u32 - 2, Boundary::Tilde));
        }
    }
    out
}

/// Largest relative truncation tail over the slots of a state.
pub fn state_tail<F: Scalar, M: MomentSource<F>>(src: &M, m: usize, left: bool) -> Result<f64> {
    slots(m, left).into_iter().try_fold(0.0f64, |acc, (j, b)| Ok(acc.max(src.tail(j, b)?)))
}

/// `Z_m(x) = <1|Psi^(m)(x)>`.
pub fn z_m<F: Scalar, M: MomentSource<F>>(src: &M, x: &[F], m: usize) -> Result<F> {
    let ev = AtPoint { x: x.to_vec() };
    let psi = psi_m(src, &ev, x.len(), m)?;
    Ok(psi.entries.iter().fold(x[0].zero_like(), |a, b| a + b))
}

/// Numeric evaluation of a state at one point, with its truncation budget.
#[derive(Clone, Debug, Serialize)]
pub struct MpEvaluation {
    pub components: Vec<String>,
    pub tail_estimate: f64,
    /// `3 x tail x max |component|`
    pub tolerance: f64,
    pub omega: Vec<(u32, String)>,
}

/// Evaluate `Psi^(m)` (or `Phi^(m)`) at `x` in the truncated Fock representation.
pub fn evaluate_fock(params: &Params<BigFloat>, x: &[BigFloat], m: usize, k: usize, left: bool) -> Result<MpEvaluation> {
    let src = FockMoments::new(params, k)?;
    let ev = AtPoint { x: x.to_vec() };
    let state = if left { phi_m(&src, &ev, x.len(), m)? } else { psi_m(&src, &ev, x.len(), m)? };
    let tail = state_tail(&src, m, left)?;
    let scale = state.entries.iter().map(|c| c.magnitude()).fold(0.0, f64::max);
    Ok(MpEvaluation {
        components: state.entries.iter().map(|c| c.to_decimal_string(40)).collect(),
        tail_estimate: tail,
        tolerance: 3.0 * tail * scale.max(1.0),
        omega: slots(m, left)
            .into_iter()
            .filter(|(_, b)| *b == Boundary::Plain)
            .map(|(j, b)| (j, src.omega(j, b).to_decimal_string(40)))
            .collect(),
    })
}

/// Check the leading-term structure of a right state: `psi_tau` has `x^lambda(tau)`
/// with coefficient one and every other exponent `mu` has `mu+ < (m^N)`.
pub fn check_right_leading<F: Scalar>(state: &ConfigurationVector<Poly<F>>, m: usize) -> Result<()> {
    let n = state.n;
    let top = Composition::constant(m as i32, n);
    for (idx, comp) in state.entries.iter().enumerate() {
        let tau = ConfigurationVector::<()>::occupations(n, idx);
        let lead = lambda_m(&tau, m);
        match comp.coeff(&lead) {
            Some(c) if (c.clone() - c.one_like()).is_zero() => {}
            other => {
                return Err(Error::InternalConsistency(format!(
                    "component {tau:?}: coefficient of x^{lead} is {other:?}, expected 1"
                )))
            }
        }
        for (e, _) in comp.terms() {
            if *e == lead {
                continue;
            }
            let plus = e.plus();
            if plus == top || !dominance_leq(&plus, &top)? {
                return Err(Error::InternalConsistency(format!("component {tau:?} has term x^{e} not below (m^N)")));
            }
        }
    }
    Ok(())
}

/// Left analogue: `phi_tau` contains `x^-lambda(tau)` with coefficient one and
/// every exponent has `mu+ <= (m^N)`.
pub fn check_left_leading<F: Scalar>(state: &ConfigurationVector<Poly<F>>, m: usize) -> Result<()> {
    let n = state.n;
    let top = Composition::constant(m as i32, n);
    for (idx, comp) in state.entries.iter().enumerate() {
        let tau = ConfigurationVector::<()>::occupations(n, idx);
        let lead = lambda_m(&tau, m).neg();
        match comp.coeff(&lead) {
            Some(c) if (c.clone() - c.one_like()).is_zero() => {}
            other => {
                return Err(Error::InternalConsistency(format!(
                    "component {tau:?}: coefficient of x^{lead} is {other:?}, expected 1"
                )))
            }
        }
        for (e, _) in comp.terms() {
            if !dominance_leq(&e.plus(), &top)? {
                return Err(Error::InternalConsistency(format!("component {tau:?} has term x^{e} above (m^N)")));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ParameterPoint;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn exact() -> Params<Rational> {
        Params::from_point(&ParameterPoint::default_point(), &())
    }

    #[test]
    fn hermite_low_orders() {
        let (x, y, t) = (q(2, 3), q(-5, 7), q(4, 9));
        assert_eq!(t_hermite(0, &x, &y, &t), q(1, 1));
        assert_eq!(t_hermite(1, &x, &y, &t), x.clone() + &y);
        let h2 = x.square() + (q(1, 1) + &t) * &x * &y + y.square();
        assert_eq!(t_hermite(2, &x, &y, &t), h2);
    }

    #[test]
    fn hermite_matches_definition_sum() {
        let (x, y, t) = (q(3, 5), q(-7, 4), q(2, 7));
        for n in 0..7usize {
            let mut sum = q(0, 1);
            for k in 0..=n {
                let c = t_pochhammer(&t, &t, n) / (t_pochhammer(&t, &t, k) * t_pochhammer(&t, &t, n - k));
                sum = sum + c * x.pow_i(k as i64) * y.pow_i((n - k) as i64);
            }
            assert_eq!(t_hermite(n, &x, &y, &t), sum, "n = {n}");
        }
    }

    #[test]
    fn fock_relations() {
        let p = exact();
        let f = build_fock(&p, 10).unwrap();
        let (a, ad, s) = (f.a(), f.adag(), f.s());
        let comm = &(&a * &ad) - &(&ad * &a).scale(&p.t);
        for i in 0..9 {
            for j in 0..9 {
                let expect = if i == j { q(1, 1) - &p.t } else { q(0, 1) };
                assert_eq!(comm.get(i, j), &expect);
            }
        }
        assert!((&(&a * &s) - &(&s * &a).scale(&p.s_half)).is_zero());
        assert!((&(&s * &ad) - &(&ad * &s).scale(&p.s_half)).is_zero());
        assert_eq!(f.w[1], p.t0_half.clone() / &p.u0_half - p.t0_half.clone() * &p.u0_half);
        assert_eq!(f.w[0], q(1, 1));
        assert_eq!(f.v_tilde[0], q(1, 1));
    }

    #[test]
    fn algebraic_matches_truncated_fock() {
        let p = exact().with_s_half(q(1, 5));
        let pf: Params<BigFloat> = Params::from_halves(
            BigFloat::from_rational(&p.s_half, 256),
            BigFloat::from_rational(&p.t_half, 256),
            BigFloat::from_rational(&p.t0_half, 256),
            BigFloat::from_rational(&p.u0_half, 256),
            BigFloat::from_rational(&p.tn_half, 256),
            BigFloat::from_rational(&p.un_half, 256),
            BigFloat::from_rational(&p.xi, 256),
        );
        let alg = AlgebraicMoments::new(&p);
        let fock = FockMoments::new(&pf, 96).unwrap();
        use Letter::*;
        for word in [vec![A], vec![Adag], vec![A, Adag], vec![Adag, A, A], vec![A, A, Adag, Adag]] {
            for (j, b) in [(1, Boundary::Plain), (3, Boundary::Plain), (2, Boundary::Tilde)] {
                let e = alg.ratio(j, b, &word).unwrap().to_bigfloat(256);
                let f = fock.ratio(j, b, &word).unwrap();
                assert!((e - f).magnitude() < 1e-40, "{word:?} j={j}");
            }
        }
    }

    #[test]
    fn omega_closed_form_vs_sum() {
        let p: Params<BigFloat> = Params::from_point(&ParameterPoint::default_point(), &256);
        let rep = build_fock(&p, 64).unwrap();
        for b in [Boundary::Plain, Boundary::Tilde] {
            let closed = omega_closed_form(&p, 2, b).unwrap();
            assert!((closed - rep.omega(2, b)).magnitude() < 1e-30);
        }
        let big = omega_closed_form(&p, 40, Boundary::Plain).unwrap();
        assert!((big - p.t.one_like()).magnitude() < 1e-10);
    }

    #[test]
    fn psi_one_single_site() {
        let p = exact();
        let src = AlgebraicMoments::new(&p);
        let psi = psi_m(&src, &Symbolic { n: 1 }, 1, 1).unwrap();
        let fa = src.ratio(1, Boundary::Plain, &[Letter::A]).unwrap();
        let mut expect = Poly::monomial(Composition::new(vec![-1]), q(1, 1));
        expect.add_term(Composition::new(vec![0]), fa);
        assert_eq!(psi.entries[0], expect);
        check_right_leading(&psi, 1).unwrap();
    }

    #[test]
    fn phi_zero_is_all_ones() {
        let p = exact();
        let src = AlgebraicMoments::new(&p);
        let phi = phi_m(&src, &Symbolic { n: 2 }, 2, 0).unwrap();
        assert!(phi.entries.iter().all(|c| *c == Poly::constant(2, q(1, 1))));
    }

    #[test]
    fn leading_terms_exact() {
        let p = exact();
        let src = AlgebraicMoments::new(&p);
        for m in 1..=2 {
            let psi = psi_m(&src, &Symbolic { n: 2 }, 2, m).unwrap();
            check_right_leading(&psi, m).unwrap();
            let phi = phi_m(&src, &Symbolic { n: 2 }, 2, m).unwrap();
            check_left_leading(&phi, m).unwrap();
        }
    }
}
