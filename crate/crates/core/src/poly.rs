//! Sparse polynomials in seven variables with `f64` coefficients.
//!
//! One fixed variable space serves two charts: generating *functions* live on
//! the contact space with coordinates `(p, q, r, u, v, w, s)`, generating
//! *families* on the fibration chart `(p, q, r, x, y, z, t)`.  Slots 0..2 are
//! the fiber coordinates in both readings; slots 3..6 are the base.  Terms
//! are kept in a `BTreeMap` keyed by exponent vectors so every iteration is
//! deterministic.
//!
//! Coefficient arithmetic is plain `f64`; the polynomials that appear here
//! have small integer or dyadic-rational coefficients, so products and sums
//! of matching terms cancel exactly (e.g. the antisymmetry of the contact
//! bracket holds to the last bit, not merely to a tolerance).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Number of variables in the fixed chart.
pub const NVARS: usize = 7;

/// Exponent vector of a monomial.
pub type Exps = [u8; NVARS];

/// Fiber coordinate indices (`p`, `q`, `r`).
pub const FIBER: [usize; 3] = [0, 1, 2];
/// Base coordinate indices (`u,v,w` or `x,y,z`).
pub const BASE: [usize; 3] = [3, 4, 5];
/// Index of the last coordinate (`s` on contact space, `t` on families).
pub const LAST: usize = 6;

/// Variable names for the contact-space reading.
pub const PHASE_NAMES: [&str; NVARS] = ["p", "q", "r", "u", "v", "w", "s"];
/// Variable names for the generating-family reading.
pub const FAMILY_NAMES: [&str; NVARS] = ["p", "q", "r", "x", "y", "z", "t"];

/// Sparse multivariate polynomial.
#[derive(Clone, Default, PartialEq)]
pub struct Poly {
    terms: BTreeMap<Exps, f64>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: f64) -> Self {
        let mut p = Poly::default();
        if c != 0.0 {
            p.terms.insert([0; NVARS], c);
        }
        p
    }

    /// The variable `x_i` as a polynomial.
    pub fn var(i: usize) -> Self {
        Poly::monomial_in(i, 1, 1.0)
    }

    /// `c · x_i^k`.
    pub fn monomial_in(i: usize, k: u8, c: f64) -> Self {
        assert!(i < NVARS);
        let mut e = [0u8; NVARS];
        e[i] = k;
        Poly::monomial(e, c)
    }

    pub fn monomial(exps: Exps, c: f64) -> Self {
        let mut p = Poly::default();
        if c != 0.0 {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Exps, f64)>) -> Self {
        let mut p = Poly::default();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of the given monomial (0 if absent).
    pub fn coeff(&self, exps: Exps) -> f64 {
        self.terms.get(&exps).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &f64)> {
        self.terms.iter()
    }

    /// Largest absolute coefficient.
    pub fn coeff_norm(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    fn add_term(&mut self, exps: Exps, c: f64) {
        if c == 0.0 {
            return;
        }
        let entry = self.terms.entry(exps).or_insert(0.0);
        *entry += c;
        if *entry == 0.0 {
            self.terms.remove(&exps);
        }
    }

    pub fn scale(&self, c: f64) -> Poly {
        if c == 0.0 {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u8) -> Poly {
        let mut out = Poly::constant(1.0);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Exact partial derivative with respect to variable `i`.
    pub fn diff(&self, i: usize) -> Poly {
        assert!(i < NVARS);
        let mut out = Poly::default();
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut d = *e;
                d[i] -= 1;
                out.add_term(d, c * e[i] as f64);
            }
        }
        out
    }

    /// Evaluate at a full point.
    pub fn eval(&self, x: &[f64; NVARS]) -> f64 {
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            let mut m = *c;
            for i in 0..NVARS {
                for _ in 0..e[i] {
                    m *= x[i];
                }
            }
            acc += m;
        }
        acc
    }

    /// Substitute numbers for a subset of the variables, leaving the rest
    /// symbolic.
    pub fn eval_partial(&self, x: &[Option<f64>; NVARS]) -> Poly {
        let mut out = Poly::default();
        for (e, c) in &self.terms {
            let mut m = *c;
            let mut rest = [0u8; NVARS];
            for i in 0..NVARS {
                match x[i] {
                    Some(v) => {
                        for _ in 0..e[i] {
                            m *= v;
                        }
                    }
                    None => rest[i] = e[i],
                }
            }
            out.add_term(rest, m);
        }
        out
    }

    /// Substitute polynomials for a subset of the variables (`None` keeps the
    /// variable itself).  This is full composition, used e.g. to form
    /// `K(κ, F_κ, F − κF_κ)`.
    pub fn compose(&self, subs: &[Option<&Poly>; NVARS]) -> Poly {
        // Cache powers of each substituted polynomial.
        let mut powers: Vec<Vec<Poly>> = vec![Vec::new(); NVARS];
        let mut out = Poly::default();
        for (e, c) in &self.terms {
            let mut m = Poly::constant(*c);
            for i in 0..NVARS {
                if e[i] == 0 {
                    continue;
                }
                match subs[i] {
                    None => m = &m * &Poly::monomial_in(i, e[i], 1.0),
                    Some(_) => {
                        let cache = &mut powers[i];
                        if cache.is_empty() {
                            cache.push(Poly::constant(1.0));
                        }
                        while cache.len() <= e[i] as usize {
                            let next = &cache[cache.len() - 1] * subs[i].unwrap();
                            cache.push(next);
                        }
                        m = &m * &cache[e[i] as usize];
                    }
                }
            }
            out = &out + &m;
        }
        out
    }

    /// Quasidegree of a monomial under the given weights.
    pub fn quasidegree_of(exps: &Exps, weights: &[u32; NVARS]) -> u32 {
        (0..NVARS).map(|i| exps[i] as u32 * weights[i]).sum()
    }

    /// Split into quasihomogeneous components, keyed by quasidegree.
    pub fn quasi_split(&self, weights: &[u32; NVARS]) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let d = Self::quasidegree_of(e, weights);
            out.entry(d).or_default().add_term(*e, *c);
        }
        out
    }

    /// Render with the given variable names.
    pub fn display_with(&self, names: [&'static str; NVARS]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (e, c) in &self.terms {
            let mut piece = String::new();
            let abs = c.abs();
            let is_bare = e.iter().all(|&k| k == 0);
            if is_bare || (abs - 1.0).abs() > 1e-12 {
                piece.push_str(&format!("{}", abs));
            }
            for i in 0..NVARS {
                if e[i] > 0 {
                    if !piece.is_empty() {
                        piece.push('*');
                    }
                    piece.push_str(names[i]);
                    if e[i] > 1 {
                        piece.push_str(&format!("^{}", e[i]));
                    }
                }
            }
            if out.is_empty() {
                if *c < 0.0 {
                    out.push('-');
                }
            } else if *c < 0.0 {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            out.push_str(&piece);
        }
        out
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(PHASE_NAMES))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, *c);
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::default();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let mut e = *ea;
                for i in 0..NVARS {
                    e[i] = e[i]
                        .checked_add(eb[i])
                        .expect("monomial exponent overflow");
                }
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Poly {
        Poly::var(0)
    }
    fn u() -> Poly {
        Poly::var(3)
    }

    #[test]
    fn arithmetic_and_eval() {
        // (p + u)² = p² + 2pu + u²
        let s = &p() + &u();
        let sq = s.pow(2);
        assert_eq!(sq.coeff([2, 0, 0, 0, 0, 0, 0]), 1.0);
        assert_eq!(sq.coeff([1, 0, 0, 1, 0, 0, 0]), 2.0);
        assert_eq!(sq.coeff([0, 0, 0, 2, 0, 0, 0]), 1.0);
        let mut x = [0.0; NVARS];
        x[0] = 2.0;
        x[3] = 3.0;
        assert_eq!(sq.eval(&x), 25.0);
    }

    #[test]
    fn diff_and_partial_eval() {
        // d/dp (p²u) = 2pu
        let f = &p().pow(2) * &u();
        let fp = f.diff(0);
        assert_eq!(fp.coeff([1, 0, 0, 1, 0, 0, 0]), 2.0);
        let restricted = f.eval_partial(&[None, None, None, Some(3.0), None, None, None]);
        assert_eq!(restricted.coeff([2, 0, 0, 0, 0, 0, 0]), 3.0);
    }

    #[test]
    fn compose_substitutes_polynomials() {
        // K = p·u, substitute u ← p + 1: K = p² + p.
        let k = &p() * &u();
        let sub = &p() + &Poly::constant(1.0);
        let subs: [Option<&Poly>; NVARS] =
            [None, None, None, Some(&sub), None, None, None];
        let out = k.compose(&subs);
        assert_eq!(out.coeff([2, 0, 0, 0, 0, 0, 0]), 1.0);
        assert_eq!(out.coeff([1, 0, 0, 0, 0, 0, 0]), 1.0);
        assert_eq!(out.num_terms(), 2);
    }

    #[test]
    fn quasi_split_respects_weights() {
        // weights: fiber/base weight 1, t weight 2.
        let w = [1, 1, 1, 1, 1, 1, 2];
        // p² + p·t has quasidegrees 2 and 3.
        let f = &p().pow(2) + &(&p() * &Poly::var(LAST));
        let parts = f.quasi_split(&w);
        assert_eq!(parts.len(), 2);
        assert!(parts[&2].num_terms() == 1 && parts[&3].num_terms() == 1);
    }

    #[test]
    fn exact_cancellation() {
        let f = &(&p() * &u()) - &(&u() * &p());
        assert!(f.is_zero());
    }
}
