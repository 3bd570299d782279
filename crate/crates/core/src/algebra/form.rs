//! Homogeneous binary forms `c₀·r^d + c₁·r^{d−1}s + … + c_d·s^d` over ℚ.
//!
//! Roots live on P¹(ℚ); a root `(r₀:s₀)` corresponds to the linear factor
//! `s₀·r − r₀·s`. Arithmetic that needs a one-variable polynomial goes through
//! the dehomogenization `s = 1` after splitting off the power of `s`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{format_rational, rational_sqrt, Rational};
use crate::error::{Error, Result};
use crate::projective::ProjPoint;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BinaryForm {
    #[serde(with = "super::rational::serde_rational_vec")]
    coeffs: Vec<Rational>,
}

/// A rational root `(r₀:s₀)` of a binary form together with its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormRoot {
    pub point: ProjPoint,
    pub multiplicity: usize,
}

/// Output of [`BinaryForm::rational_roots`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDecomposition {
    pub roots: Vec<FormRoot>,
    /// What is left after dividing out every rational linear factor.
    pub residual: BinaryForm,
}

impl BinaryForm {
    /// Coefficients of `r^d, r^{d−1}s, …, s^d`.
    pub fn new(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a binary form needs at least one coefficient");
        BinaryForm { coeffs }
    }

    pub fn zero(degree: usize) -> Self {
        BinaryForm {
            coeffs: vec![Rational::zero(); degree + 1],
        }
    }

    pub fn constant(c: Rational) -> Self {
        BinaryForm { coeffs: vec![c] }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// `a·r + b·s`.
    pub fn linear(a: Rational, b: Rational) -> Self {
        BinaryForm { coeffs: vec![a, b] }
    }

    /// The linear form `s₀·r − r₀·s` vanishing at `(r₀:s₀)`.
    pub fn vanishing_at(r0: &Rational, s0: &Rational) -> Self {
        Self::linear(s0.clone(), -r0.clone())
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Nonzero and of degree zero.
    pub fn is_constant(&self) -> bool {
        !self.is_zero() && self.degree() == 0
    }

    pub fn eval(&self, r: &Rational, s: &Rational) -> Rational {
        let d = self.degree();
        let mut acc = Rational::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc += c * pow(r, d - i) * pow(s, i);
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> Self {
        BinaryForm {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Divides by the first nonzero coefficient. The zero form is returned unchanged.
    pub fn normalized(&self) -> Self {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            Some(lead) => self.scale(&lead.recip()),
            None => self.clone(),
        }
    }

    /// Exponent of the largest power of `s` dividing the form (the multiplicity of the root (1:0)).
    pub fn s_order(&self) -> usize {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(self.degree() + 1)
    }

    pub fn derivative_r(&self) -> Self {
        let d = self.degree();
        if d == 0 {
            return Self::zero(0);
        }
        let coeffs = (0..d)
            .map(|i| &self.coeffs[i] * Rational::from_integer(BigInt::from(d - i)))
            .collect();
        BinaryForm { coeffs }
    }

    pub fn derivative_s(&self) -> Self {
        let d = self.degree();
        if d == 0 {
            return Self::zero(0);
        }
        let coeffs = (1..=d)
            .map(|i| &self.coeffs[i] * Rational::from_integer(BigInt::from(i)))
            .collect();
        BinaryForm { coeffs }
    }

    /// Greatest common divisor, normalized so the first nonzero coefficient is 1.
    pub fn gcd(&self, other: &BinaryForm) -> BinaryForm {
        if self.is_zero() {
            return other.normalized();
        }
        if other.is_zero() {
            return self.normalized();
        }
        let (a, ka) = self.split_s();
        let (b, kb) = other.split_s();
        let g = uni_gcd(&a, &b);
        Self::homogenize(&g, uni_degree(&g)).mul_s_power(ka.min(kb)).normalized()
    }

    /// Exact division; fails if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &BinaryForm) -> Result<BinaryForm> {
        if divisor.is_zero() {
            return Err(Error::InvalidInput("division by the zero form".into()));
        }
        if self.is_zero() {
            let d = self.degree().saturating_sub(divisor.degree());
            return Ok(Self::zero(d));
        }
        if divisor.degree() > self.degree() {
            return Err(Error::InvalidInput("divisor degree exceeds dividend".into()));
        }
        let (a, ka) = self.split_s();
        let (b, kb) = divisor.split_s();
        if kb > ka {
            return Err(Error::InvalidInput("form is not divisible".into()));
        }
        let (q, rem) = uni_divrem(&a, &b);
        if !rem.is_empty() {
            return Err(Error::InvalidInput("form is not divisible".into()));
        }
        let qdeg = self.degree() - divisor.degree() - (ka - kb);
        Ok(Self::homogenize(&q, qdeg).mul_s_power(ka - kb))
    }

    /// Vanishing order at the projective point `(r₀:s₀)`.
    pub fn multiplicity_at(&self, r0: &Rational, s0: &Rational) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let lin = Self::vanishing_at(r0, s0);
        let mut f = self.clone();
        let mut m = 0;
        while f.degree() > 0 && f.eval(r0, s0).is_zero() {
            f = f.div_exact(&lin).expect("linear factor divides at a root");
            m += 1;
        }
        m
    }

    /// True if the form has no repeated factor over ℚ̄.
    pub fn is_squarefree(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        if self.degree() <= 1 {
            return true;
        }
        // A repeated factor is a common factor of both partial derivatives (Euler).
        self.derivative_r().gcd(&self.derivative_s()).degree() == 0
    }

    /// All roots in P¹(ℚ) with multiplicities, plus the residual factor without rational roots.
    pub fn rational_roots(&self) -> Result<RootDecomposition> {
        if self.is_zero() {
            return Err(Error::InvalidInput("rational_roots of the zero form".into()));
        }
        let mut roots = Vec::new();
        let (mut poly, k) = self.split_s();
        if k > 0 {
            roots.push(FormRoot {
                point: ProjPoint::from_pair(Rational::one(), Rational::zero()),
                multiplicity: k,
            });
        }
        for root in uni_distinct_rational_roots(&poly) {
            let lin = vec![-root.clone(), Rational::one()];
            let mut mult = 0;
            loop {
                let (q, rem) = uni_divrem(&poly, &lin);
                if !rem.is_empty() {
                    break;
                }
                poly = q;
                mult += 1;
            }
            roots.push(FormRoot {
                point: ProjPoint::from_pair(root, Rational::one()),
                multiplicity: mult,
            });
        }
        roots.sort_by(|a, b| a.point.cmp(&b.point));
        let residual = Self::homogenize(&poly, uni_degree(&poly)).normalized();
        Ok(RootDecomposition { roots, residual })
    }

    /// Splits `self = s^k · g(r, s)` with `s ∤ g`; returns `g(r, 1)` (ascending in r) and `k`.
    fn split_s(&self) -> (Vec<Rational>, usize) {
        let k = self.s_order();
        let d = self.degree();
        // g(r,1) = Σ_{i ≥ k} c_i r^{d−i}
        let mut poly = vec![Rational::zero(); d - k + 1];
        for i in k..=d {
            poly[d - i] = self.coeffs[i].clone();
        }
        (trim(poly), k)
    }

    /// Homogenizes an ascending univariate polynomial in r to the given degree.
    fn homogenize(poly: &[Rational], degree: usize) -> BinaryForm {
        let mut coeffs = vec![Rational::zero(); degree + 1];
        for (e, c) in poly.iter().enumerate() {
            coeffs[degree - e] = c.clone();
        }
        BinaryForm { coeffs }
    }

    fn mul_s_power(&self, k: usize) -> BinaryForm {
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        BinaryForm { coeffs }
    }
}

fn pow(x: &Rational, e: usize) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

// ---- one-variable helpers (ascending coefficients, trimmed: no trailing zeros) ----

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn uni_degree(p: &[Rational]) -> usize {
    p.len().saturating_sub(1)
}

fn uni_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut rem = a.to_vec();
    if a.len() < b.len() {
        return (Vec::new(), trim(rem));
    }
    let lead_inv = b.last().unwrap().recip();
    let mut q = vec![Rational::zero(); a.len() - b.len() + 1];
    for i in (0..q.len()).rev() {
        let c = &rem[i + b.len() - 1] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            let x = &rem[i + j] - &c * bj;
            rem[i + j] = x;
        }
        q[i] = c;
    }
    (trim(q), trim(rem))
}

fn uni_monic(p: &[Rational]) -> Vec<Rational> {
    match p.last() {
        Some(l) => {
            let inv = l.recip();
            p.iter().map(|c| c * &inv).collect()
        }
        None => Vec::new(),
    }
}

fn uni_gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let (_, r) = uni_divrem(&a, &b);
        a = b;
        b = r;
    }
    uni_monic(&a)
}

fn uni_derivative(p: &[Rational]) -> Vec<Rational> {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(e, c)| c * Rational::from_integer(BigInt::from(e)))
            .collect(),
    )
}

fn uni_eval(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

/// Distinct rational roots of a univariate polynomial, in no particular order.
fn uni_distinct_rational_roots(p: &[Rational]) -> Vec<Rational> {
    let p = trim(p.to_vec());
    if p.len() <= 1 {
        return Vec::new();
    }
    // Work with the squarefree part; its roots are the distinct roots.
    let g = uni_gcd(&p, &uni_derivative(&p));
    let mut sf = uni_divrem(&p, &g).0;
    let mut roots = Vec::new();
    if sf[0].is_zero() {
        roots.push(Rational::zero());
        sf = uni_divrem(&sf, &[Rational::zero(), Rational::one()]).0;
    }
    loop {
        match sf.len() {
            0 | 1 => break,
            2 => {
                roots.push(-&sf[0] / &sf[1]);
                break;
            }
            3 => {
                // a x² + b x + c
                let (c, b, a) = (&sf[0], &sf[1], &sf[2]);
                let disc = b * b - Rational::from_integer(BigInt::from(4)) * a * c;
                if let Some(sq) = rational_sqrt(&disc) {
                    let two_a = a * Rational::from_integer(BigInt::from(2));
                    roots.push((-b + &sq) / &two_a);
                    roots.push((-b - &sq) / &two_a);
                }
                break;
            }
            _ => match find_rational_root(&sf) {
                Some(r) => {
                    sf = uni_divrem(&sf, &[-r.clone(), Rational::one()]).0;
                    roots.push(r);
                }
                None => break,
            },
        }
    }
    roots
}

/// One rational root of a polynomial with nonzero constant term, by the rational root test.
fn find_rational_root(p: &[Rational]) -> Option<Rational> {
    let den_lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .iter()
        .map(|c| (c * Rational::from_integer(den_lcm.clone())).to_integer())
        .collect();
    let a0 = ints.first()?.abs();
    let an = ints.last()?.abs();
    if a0.is_zero() {
        return Some(Rational::zero());
    }
    let num_divs = divisors(&a0);
    let den_divs = divisors(&an);
    for q in &den_divs {
        for n in &num_divs {
            for cand in [Rational::new(n.clone(), q.clone()), Rational::new(-n.clone(), q.clone())] {
                if uni_eval(p, &cand).is_zero() {
                    return Some(cand);
                }
            }
        }
    }
    None
}

/// Positive divisors by trial division.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            let e = n / &d;
            if e != d {
                large.push(e);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

impl Add for &BinaryForm {
    type Output = BinaryForm;
    fn add(self, rhs: &BinaryForm) -> BinaryForm {
        // The zero form adapts to the other operand's degree.
        if self.is_zero() && self.degree() != rhs.degree() {
            return rhs.clone();
        }
        if rhs.is_zero() && self.degree() != rhs.degree() {
            return self.clone();
        }
        assert_eq!(self.degree(), rhs.degree(), "adding forms of different degree");
        BinaryForm {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &BinaryForm {
    type Output = BinaryForm;
    fn sub(self, rhs: &BinaryForm) -> BinaryForm {
        self + &(-rhs)
    }
}

impl Neg for &BinaryForm {
    type Output = BinaryForm;
    fn neg(self) -> BinaryForm {
        BinaryForm {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl Mul for &BinaryForm {
    type Output = BinaryForm;
    fn mul(self, rhs: &BinaryForm) -> BinaryForm {
        let mut coeffs = vec![Rational::zero(); self.degree() + rhs.degree() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        BinaryForm { coeffs }
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match (d - i, i) {
                (0, 0) => String::new(),
                (a, 0) => var("r", a),
                (0, b) => var("s", b),
                (a, b) => format!("{}*{}", var("r", a), var("s", b)),
            };
            let coef = format_rational(c);
            terms.push(match (mono.is_empty(), coef.as_str()) {
                (true, _) => coef,
                (false, "1") => mono,
                (false, "-1") => format!("-{mono}"),
                (false, _) => format!("{coef}*{mono}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + ").replace("+ -", "- "))
        }
    }
}

fn var(name: &str, e: usize) -> String {
    if e == 1 {
        name.to_string()
    } else {
        format!("{name}^{e}")
    }
}

impl fmt::Debug for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryForm[{}]({})", self.degree(), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    fn pt(a: i64, b: i64) -> ProjPoint {
        ProjPoint::from_pair(rat(a), rat(b))
    }

    #[test]
    fn gcd_examples() {
        // gcd(−s², rs) = s
        let f = BinaryForm::from_i64(&[0, 0, -1]);
        let g = BinaryForm::from_i64(&[0, 1, 0]);
        assert_eq!(f.gcd(&g), BinaryForm::from_i64(&[0, 1]));
        // gcd(f, 0) = normalized f
        let h = BinaryForm::from_i64(&[2, 4, 0]);
        assert_eq!(h.gcd(&BinaryForm::zero(2)), BinaryForm::from_i64(&[1, 2, 0]));
        // gcd(r²+s², r²−s²) = 1
        let a = BinaryForm::from_i64(&[1, 0, 1]);
        let b = BinaryForm::from_i64(&[1, 0, -1]);
        assert_eq!(a.gcd(&b), BinaryForm::one());
    }

    #[test]
    fn roots_of_cubic_pencil_form() {
        // λ(λ−μ)(λ+μ) = λ³ − λμ²
        let f = BinaryForm::from_i64(&[1, 0, -1, 0]);
        let dec = f.rational_roots().unwrap();
        assert_eq!(dec.residual, BinaryForm::one());
        let pts: Vec<_> = dec.roots.iter().map(|r| r.point.clone()).collect();
        for p in [pt(0, 1), pt(1, 1), pt(-1, 1)] {
            assert!(pts.contains(&p), "missing root {p:?}");
        }
        assert!(dec.roots.iter().all(|r| r.multiplicity == 1));
    }

    #[test]
    fn roots_at_infinity() {
        let dec = BinaryForm::from_i64(&[0, 0, 1]).rational_roots().unwrap();
        assert_eq!(dec.roots.len(), 1);
        assert_eq!(dec.roots[0].point, pt(1, 0));
        assert_eq!(dec.roots[0].multiplicity, 2);
        assert_eq!(dec.residual, BinaryForm::one());
    }

    #[test]
    fn sum_of_squares_has_no_rational_roots() {
        let f = BinaryForm::from_i64(&[1, 0, 1]);
        let dec = f.rational_roots().unwrap();
        assert!(dec.roots.is_empty());
        assert_eq!(dec.residual, f);
        assert!(BinaryForm::zero(2).rational_roots().is_err());
    }

    #[test]
    fn cubic_roots_by_rational_root_test() {
        // (2r − 3s)(r + 5s)(r² + s²)  — degree 4, one irrational quadratic factor
        let f = &(&BinaryForm::from_i64(&[2, -3]) * &BinaryForm::from_i64(&[1, 5]))
            * &BinaryForm::from_i64(&[1, 0, 1]);
        let dec = f.rational_roots().unwrap();
        assert_eq!(dec.residual, BinaryForm::from_i64(&[1, 0, 1]));
        let pts: Vec<_> = dec.roots.iter().map(|r| r.point.clone()).collect();
        assert!(pts.contains(&pt(3, 2)));
        assert!(pts.contains(&pt(-5, 1)));
    }

    #[test]
    fn multiplicity_and_division() {
        let f = &BinaryForm::from_i64(&[1, -1]) * &BinaryForm::from_i64(&[1, -2, 1]); // (r−s)³
        assert_eq!(f.multiplicity_at(&rat(1), &rat(1)), 3);
        assert_eq!(f.multiplicity_at(&rat(0), &rat(1)), 0);
        assert!(!f.is_squarefree());
        let q = f.div_exact(&BinaryForm::from_i64(&[1, -1])).unwrap();
        assert_eq!(q, BinaryForm::from_i64(&[1, -2, 1]));
        assert!(f.div_exact(&BinaryForm::from_i64(&[1, 1])).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(BinaryForm::from_i64(&[0, 0, -1]).to_string(), "-s^2");
        assert_eq!(BinaryForm::from_i64(&[1, -2, 3]).to_string(), "r^2 - 2*r*s + 3*s^2");
    }
}
