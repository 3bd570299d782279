//! Plücker coordinates of lines, hyperplane pairings against antisymmetric
//! matrices, and the two-row Schubert calculus of G(1,N).
//!
//! Conventions: `σ_{a,b}` with `N−1 ≥ a ≥ b ≥ 0` has codimension `a+b`; the
//! point class is `σ_{N−1,N−1}` and the dual of `σ_{a,b}` is
//! `σ_{N−1−b, N−1−a}`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::algebra::rational::primitive_integer_vector;
use crate::algebra::{RatMatrix, Rational};
use crate::error::{Error, Result};
use crate::projective::ProjLine;

/// The 2×2 minors `p_ij = u_i v_j − u_j v_i` (i<j, lexicographic order) of a line, up to scalar.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PluckerCoords {
    ambient: usize,
    coords: Vec<Rational>,
}

impl PluckerCoords {
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.coords[pair_index(self.ambient + 1, i, j)].clone(),
            std::cmp::Ordering::Greater => -self.coords[pair_index(self.ambient + 1, j, i)].clone(),
            std::cmp::Ordering::Equal => Rational::zero(),
        }
    }

    /// Values of all three-term Plücker relations `p_ij p_kl − p_ik p_jl + p_il p_jk`.
    pub fn relations(&self) -> Vec<Rational> {
        let n = self.ambient + 1;
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for l in k + 1..n {
                        out.push(
                            self.get(i, j) * self.get(k, l) - self.get(i, k) * self.get(j, l)
                                + self.get(i, l) * self.get(j, k),
                        );
                    }
                }
            }
        }
        out
    }
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    // number of pairs (a,b) with a < i, plus offset of j within row i
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

pub fn plucker(line: &ProjLine) -> PluckerCoords {
    let (u, v) = (line.p(), line.q());
    let n = u.len();
    let mut coords = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            coords.push(&u[i] * &v[j] - &u[j] * &v[i]);
        }
    }
    let coords = primitive_integer_vector(&coords).expect("a line has a nonzero Plücker vector");
    PluckerCoords {
        ambient: n - 1,
        coords,
    }
}

/// `p·M·qᵀ` for the canonical basis `(p, q)` of the line; zero iff `[l] ∈ P(M)*`.
pub fn hyperplane_pairing(line: &ProjLine, m: &RatMatrix) -> Result<Rational> {
    if !m.is_antisymmetric() {
        return Err(Error::InvalidInput("hyperplane pairing needs an antisymmetric matrix".into()));
    }
    if m.rows() != line.ambient() + 1 {
        return Err(Error::Dimension(format!(
            "matrix of size {} against a line of P^{}",
            m.rows(),
            line.ambient()
        )));
    }
    Ok(m.bilinear(line.p(), line.q()))
}

/// Schubert class `σ_{a,b}` of G(1,N).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TwoRowPartition {
    pub a: usize,
    pub b: usize,
    pub n: usize,
}

impl TwoRowPartition {
    pub fn new(a: usize, b: usize, n: usize) -> Result<Self> {
        if n < 2 || a < b || a > n - 1 {
            return Err(Error::InvalidInput(format!(
                "σ_({a},{b}) is not a Schubert class of G(1,{n})"
            )));
        }
        Ok(TwoRowPartition { a, b, n })
    }

    pub fn codim(&self) -> usize {
        self.a + self.b
    }

    pub fn dual(&self) -> TwoRowPartition {
        TwoRowPartition {
            a: self.n - 1 - self.b,
            b: self.n - 1 - self.a,
            n: self.n,
        }
    }

    pub fn point_class(n: usize) -> TwoRowPartition {
        TwoRowPartition { a: n - 1, b: n - 1, n }
    }

    /// Every valid partition of G(1,N).
    pub fn all(n: usize) -> Vec<TwoRowPartition> {
        (0..n)
            .flat_map(|a| (0..=a).map(move |b| TwoRowPartition { a, b, n }))
            .collect()
    }
}

impl fmt::Display for TwoRowPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "σ_({},{})", self.a, self.b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecialClass {
    Sigma1,
    Sigma2,
    Sigma11,
}

/// A formal integer combination of Schubert classes of one G(1,N).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SchubertSum {
    terms: BTreeMap<TwoRowPartition, BigInt>,
}

impl SchubertSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(s: TwoRowPartition) -> Self {
        let mut out = Self::zero();
        out.add_term(s, BigInt::from(1));
        out
    }

    pub fn add_term(&mut self, s: TwoRowPartition, c: BigInt) {
        let e = self.terms.entry(s).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&s);
        }
    }

    pub fn add(&mut self, other: &SchubertSum, scale: &BigInt) {
        for (s, c) in &other.terms {
            self.add_term(*s, c * scale);
        }
    }

    pub fn coefficient(&self, s: &TwoRowPartition) -> BigInt {
        self.terms.get(s).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TwoRowPartition, &BigInt)> {
        self.terms.iter()
    }

    /// Multiplies every term by a special class via [`pieri_special`].
    pub fn times_special(&self, special: SpecialClass) -> SchubertSum {
        let mut out = SchubertSum::zero();
        for (s, c) in &self.terms {
            out.add(&pieri_special(*s, special), c);
        }
        out
    }
}

/// Pieri rule for `σ₁`, `σ₂` and `σ₁,₁`: all `σ_{c,d}` with `c+d = a+b+k` and
/// `N−1 ≥ c ≥ a ≥ d ≥ b` (for `σ₁,₁` the single term `σ_{a+1,b+1}`).
pub fn pieri_special(s: TwoRowPartition, special: SpecialClass) -> SchubertSum {
    let top = s.n - 1;
    let mut out = SchubertSum::zero();
    match special {
        SpecialClass::Sigma11 => {
            if s.a < top {
                out.add_term(TwoRowPartition { a: s.a + 1, b: s.b + 1, n: s.n }, BigInt::from(1));
            }
        }
        SpecialClass::Sigma1 | SpecialClass::Sigma2 => {
            let k = if special == SpecialClass::Sigma1 { 1 } else { 2 };
            for d in s.b..=s.a {
                let c = s.a + s.b + k - d;
                if d <= s.b + k && c >= s.a && c <= top {
                    out.add_term(TwoRowPartition { a: c, b: d, n: s.n }, BigInt::from(1));
                }
            }
        }
    }
    out
}

/// Degree of `σ_s · σ_t` for complementary codimensions: 1 iff `t` is the dual of `s`.
pub fn pairing_degree(s: TwoRowPartition, t: TwoRowPartition) -> Result<i64> {
    if s.n != t.n {
        return Err(Error::Dimension("classes of different Grassmannians".into()));
    }
    if s.codim() + t.codim() != 2 * (s.n - 1) {
        return Err(Error::InvalidInput(format!(
            "codimensions {} + {} do not add up to dim G(1,{}) = {}",
            s.codim(),
            t.codim(),
            s.n,
            2 * (s.n - 1)
        )));
    }
    Ok(i64::from(t == s.dual()))
}

/// Coefficients of `ch₂ = ((N−3)/2)·σ₂ − ((N−3)/2)·σ₁,₁` on a general codimension-2 section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ch2Class {
    pub n: usize,
    pub sigma2: Rational,
    pub sigma11: Rational,
}

impl Ch2Class {
    pub fn for_codim2_section(n: usize) -> Self {
        let c = Rational::new(BigInt::from(n as i64 - 3), BigInt::from(2));
        Ch2Class {
            n,
            sigma2: c.clone(),
            sigma11: -c,
        }
    }
}

/// `ch₂(X)·[S]` for a surface class `σ_s` of codimension `2(N−1)−2`.
pub fn ch2_pair(n: usize, surface: TwoRowPartition) -> Result<Rational> {
    if surface.n != n {
        return Err(Error::Dimension("surface class of another Grassmannian".into()));
    }
    let want = 2 * (n - 1) - 2;
    if surface.codim() != want {
        return Err(Error::InvalidInput(format!(
            "surface class must have codimension {want}, got {}",
            surface.codim()
        )));
    }
    let point = TwoRowPartition::point_class(n);
    let single = SchubertSum::single(surface);
    let deg2 = single.times_special(SpecialClass::Sigma2).coefficient(&point);
    let deg11 = single.times_special(SpecialClass::Sigma11).coefficient(&point);
    let ch2 = Ch2Class::for_codim2_section(n);
    Ok(&ch2.sigma2 * Rational::from_integer(deg2) + &ch2.sigma11 * Rational::from_integer(deg11))
}

/// `σ_s · σ_t` computed only from σ₁ and σ₁,₁ Pieri steps:
/// `σ_{a,b} = σ₁,₁^b · σ_{a−b}` and `σ_k = σ₁·σ_{k−1} − σ₁,₁·σ_{k−2}`.
pub fn multiply_by_iterated_pieri(s: TwoRowPartition, t: TwoRowPartition) -> SchubertSum {
    fn times_single_row(x: &SchubertSum, k: usize) -> SchubertSum {
        match k {
            0 => x.clone(),
            1 => x.times_special(SpecialClass::Sigma1),
            _ => {
                let mut out = times_single_row(x, k - 1).times_special(SpecialClass::Sigma1);
                let sub = times_single_row(x, k - 2).times_special(SpecialClass::Sigma11);
                out.add(&sub, &BigInt::from(-1));
                out
            }
        }
    }
    let mut x = SchubertSum::single(s);
    for _ in 0..t.b {
        x = x.times_special(SpecialClass::Sigma11);
    }
    times_single_row(&x, t.a - t.b)
}
