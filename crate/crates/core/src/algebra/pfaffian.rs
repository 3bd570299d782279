//! Pfaffians of antisymmetric matrices, numeric and over linear pencils.

use num_traits::Zero;

use super::form::BinaryForm;
use super::matrix::RatMatrix;
use super::rational::Rational;
use crate::error::{Error, Result};

trait PfEntry: Clone {
    fn is_zero(&self) -> bool;
    fn mul(&self, other: &Self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl PfEntry for Rational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
}

impl PfEntry for BinaryForm {
    fn is_zero(&self) -> bool {
        BinaryForm::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn neg(&self) -> Self {
        -self
    }
}

/// Cofactor expansion along the first remaining index. `None` means zero.
fn expand<T: PfEntry>(entry: &dyn Fn(usize, usize) -> T, idx: &[usize]) -> Option<T> {
    if idx.len() == 2 {
        let e = entry(idx[0], idx[1]);
        return (!e.is_zero()).then_some(e);
    }
    let first = idx[0];
    let mut acc: Option<T> = None;
    for k in 1..idx.len() {
        let a = entry(first, idx[k]);
        if a.is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx[1..]
            .iter()
            .enumerate()
            .filter(|&(j, _)| j + 1 != k)
            .map(|(_, &i)| i)
            .collect();
        let Some(sub) = expand(entry, &rest) else {
            continue;
        };
        let mut term = a.mul(&sub);
        if k % 2 == 0 {
            term = term.neg();
        }
        acc = Some(match acc {
            Some(s) => s.add(&term),
            None => term,
        });
    }
    acc.filter(|s| !s.is_zero())
}

fn check_even_antisymmetric(m: &RatMatrix) -> Result<()> {
    if !m.is_antisymmetric() || !m.rows().is_multiple_of(2) {
        return Err(Error::InvalidInput("pfaffian requires even antisymmetric".into()));
    }
    Ok(())
}

pub fn pfaffian(m: &RatMatrix) -> Result<Rational> {
    check_even_antisymmetric(m)?;
    if m.rows() == 0 {
        return Ok(Rational::from_integer(1.into()));
    }
    let idx: Vec<usize> = (0..m.rows()).collect();
    let entry = |i: usize, j: usize| m[(i, j)].clone();
    Ok(expand(&entry, &idx).unwrap_or_else(Rational::zero))
}

fn pencil_pfaffian_on(a: &RatMatrix, b: &RatMatrix, idx: &[usize]) -> BinaryForm {
    let entry = |i: usize, j: usize| BinaryForm::linear(a[(i, j)].clone(), -b[(i, j)].clone());
    expand(&entry, idx).unwrap_or_else(|| BinaryForm::zero(idx.len() / 2))
}

/// `Pf(λA − μB)` as a binary form of degree n in `(λ, μ)`, for antisymmetric `A`, `B` of size 2n.
pub fn pfaffian_form(a: &RatMatrix, b: &RatMatrix) -> Result<BinaryForm> {
    check_even_antisymmetric(a)?;
    check_even_antisymmetric(b)?;
    if a.rows() != b.rows() {
        return Err(Error::Dimension("pencil matrices differ in size".into()));
    }
    let idx: Vec<usize> = (0..a.rows()).collect();
    Ok(pencil_pfaffian_on(a, b, &idx))
}

/// Pfaffians of `λA − μB` restricted to every principal submatrix of even size `k`.
pub fn principal_subpfaffian_forms(a: &RatMatrix, b: &RatMatrix, k: usize) -> Result<Vec<BinaryForm>> {
    if !a.is_antisymmetric() || !b.is_antisymmetric() || a.rows() != b.rows() {
        return Err(Error::InvalidInput("principal sub-Pfaffians need an antisymmetric pencil".into()));
    }
    if !k.is_multiple_of(2) || k > a.rows() || k == 0 {
        return Err(Error::InvalidInput(format!("invalid sub-Pfaffian size {k}")));
    }
    Ok(subsets(a.rows(), k)
        .iter()
        .map(|idx| pencil_pfaffian_on(a, b, idx))
        .collect())
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}
