//! Integer exponent vectors and the two partial orders on them.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A vector of `N` signed integers, used both as exponent of a Laurent
/// monomial and as label of a Koornwinder polynomial.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Composition(pub Vec<i32>);

impl Composition {
    pub fn new(entries: Vec<i32>) -> Composition {
        Composition(entries)
    }

    pub fn zeros(n: usize) -> Composition {
        Composition(vec![0; n])
    }

    /// `(c, c, ..., c)` with `n` entries.
    pub fn constant(c: i32, n: usize) -> Composition {
        Composition(vec![c; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[i32] {
        &self.0
    }

    /// Absolute values sorted decreasing.
    pub fn plus(&self) -> Composition {
        let mut v: Vec<i32> = self.0.iter().map(|x| x.abs()).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        Composition(v)
    }

    pub fn is_partition(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1]) && self.0.iter().all(|&x| x >= 0)
    }

    pub fn prefix_sums(&self) -> Vec<i64> {
        self.0
            .iter()
            .scan(0i64, |acc, &x| {
                *acc += x as i64;
                Some(*acc)
            })
            .collect()
    }

    /// Key of a total order refining `preceq`: lexicographic on the prefix
    /// sums of `plus()`, then on the prefix sums of the composition itself.
    pub fn order_key(&self) -> (Vec<i64>, Vec<i64>) {
        (self.plus().prefix_sums(), self.prefix_sums())
    }

    pub fn max_abs(&self) -> i32 {
        self.0.iter().map(|x| x.abs()).max().unwrap_or(0)
    }

    pub fn neg(&self) -> Composition {
        Composition(self.0.iter().map(|x| -x).collect())
    }
}

impl fmt::Debug for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<i32>> for Composition {
    fn from(v: Vec<i32>) -> Composition {
        Composition(v)
    }
}

fn check_len(mu: &Composition, lambda: &Composition) -> Result<()> {
    if mu.len() != lambda.len() {
        return Err(Error::Argument(format!("length mismatch: {mu} has {} entries, {lambda} has {}", mu.len(), lambda.len())));
    }
    Ok(())
}

/// Dominance order: every prefix sum of `mu - lambda` is nonpositive.
pub fn dominance_leq(mu: &Composition, lambda: &Composition) -> Result<bool> {
    check_len(mu, lambda)?;
    Ok(mu.prefix_sums().iter().zip(lambda.prefix_sums()).all(|(a, b)| *a <= b))
}

/// `mu ⪯ lambda`: either `mu+ < lambda+` strictly in dominance, or
/// `mu+ = lambda+` and `mu <= lambda` in dominance.
pub fn preceq(mu: &Composition, lambda: &Composition) -> Result<bool> {
    check_len(mu, lambda)?;
    let (mp, lp) = (mu.plus(), lambda.plus());
    if mp == lp {
        dominance_leq(mu, lambda)
    } else {
        dominance_leq(&mp, &lp)
    }
}

/// Strict version of [`preceq`].
pub fn prec(mu: &Composition, lambda: &Composition) -> Result<bool> {
    Ok(mu != lambda && preceq(mu, lambda)?)
}

/// Partitions inside the box `[0, m]^n`, which are exactly the partitions
/// dominated by `(m^n)`. Sorted by a total order refining dominance.
pub fn box_partitions(m: usize, n: usize) -> Vec<Composition> {
    fn rec(n: usize, bound: i32, cur: &mut Vec<i32>, out: &mut Vec<Composition>) {
        if cur.len() == n {
            out.push(Composition(cur.clone()));
            return;
        }
        for v in 0..=bound {
            cur.push(v);
            rec(n, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, m as i32, &mut Vec::with_capacity(n), &mut out);
    out.sort_by_key(|c| c.prefix_sums());
    out
}

/// The orbit of `lambda` under permutations and sign changes, sorted.
pub fn orbit(lambda: &Composition) -> Vec<Composition> {
    fn perms(rest: &mut Vec<i32>, cur: &mut Vec<i32>, out: &mut BTreeSet<Vec<i32>>) {
        if rest.is_empty() {
            out.insert(cur.clone());
            return;
        }
        let mut seen = BTreeSet::new();
        for i in 0..rest.len() {
            let v = rest[i];
            if !seen.insert(v) {
                continue;
            }
            rest.remove(i);
            let signs: &[i32] = if v == 0 { &[1] } else { &[1, -1] };
            for s in signs {
                cur.push(s * v);
                perms(rest, cur, out);
                cur.pop();
            }
            rest.insert(i, v);
        }
    }
    let mut out = BTreeSet::new();
    let mut rest: Vec<i32> = lambda.plus().0;
    perms(&mut rest, &mut Vec::new(), &mut out);
    out.into_iter().map(Composition).collect()
}

/// All compositions `mu ⪯ lambda`, sorted by [`Composition::order_key`].
pub fn preceq_basis(lambda: &Composition) -> Vec<Composition> {
    let n = lambda.len();
    let mut out: Vec<Composition> = box_partitions(lambda.max_abs() as usize, n)
        .iter()
        .flat_map(orbit)
        .filter(|mu| preceq(mu, lambda).expect("equal lengths"))
        .collect();
    out.sort_by_key(|c| c.order_key());
    out
}

/// All of `[-m, m]^n`, sorted by [`Composition::order_key`].
pub fn full_box(m: usize, n: usize) -> Vec<Composition> {
    let mut out: Vec<Composition> = box_partitions(m, n).iter().flat_map(orbit).collect();
    out.sort_by_key(|c| c.order_key());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: &[i32]) -> Composition {
        Composition(v.to_vec())
    }

    #[test]
    fn dominance_examples() {
        assert!(dominance_leq(&c(&[1, 1]), &c(&[2, 0])).unwrap());
        assert!(!dominance_leq(&c(&[2, 0]), &c(&[1, 1])).unwrap());
        assert!(dominance_leq(&c(&[2, 1]), &c(&[2, 2])).unwrap());
        assert!(dominance_leq(&c(&[1]), &c(&[1, 2])).is_err());
    }

    #[test]
    fn preceq_examples() {
        assert!(preceq(&c(&[-1, 1]), &c(&[1, 1])).unwrap());
        assert!(preceq(&c(&[1, 1]), &c(&[1, 1])).unwrap());
        assert!(!preceq(&c(&[2, 0]), &c(&[1, 1])).unwrap());
        assert!(preceq(&c(&[1, 1]), &c(&[2, 0])).unwrap());
    }

    #[test]
    fn box_examples() {
        assert_eq!(box_partitions(2, 2), vec![c(&[0, 0]), c(&[1, 0]), c(&[1, 1]), c(&[2, 0]), c(&[2, 1]), c(&[2, 2])]);
        assert_eq!(box_partitions(0, 3), vec![c(&[0, 0, 0])]);
        assert_eq!(box_partitions(1, 2), vec![c(&[0, 0]), c(&[1, 0]), c(&[1, 1])]);
    }

    #[test]
    fn orbit_sizes() {
        assert_eq!(orbit(&c(&[1])), vec![c(&[-1]), c(&[1])]);
        assert_eq!(orbit(&c(&[0, 0])), vec![c(&[0, 0])]);
        assert_eq!(orbit(&c(&[1, 0])).len(), 4);
        assert_eq!(orbit(&c(&[2, 1])).len(), 8);
        assert_eq!(orbit(&c(&[1, 1, 1])).len(), 8);
    }

    #[test]
    fn basis_of_negative_box_corner() {
        // only lambda itself has lambda+ = (1,1) and lies below (-1,-1)
        let lam = c(&[-1, -1]);
        let b = preceq_basis(&lam);
        assert_eq!(b.last(), Some(&lam));
        assert_eq!(b.iter().filter(|m| m.plus() == lam.plus()).count(), 1);
        assert_eq!(b.len(), 1 + 4 + 1);
        assert_eq!(full_box(1, 2).len(), 9);
    }
}
