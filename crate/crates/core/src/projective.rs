//! Points and linear subspaces of P^N over ℚ.
//!
//! Every subspace is stored through the rref of a spanning matrix, so two
//! subspaces are equal exactly when their stored bases are equal entry-wise.

use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::rational::primitive_integer_vector;
use crate::algebra::{format_rational, is_zero_vec, rat, RatMatrix, Rational};
use crate::error::{Error, Result};

/// Default height bound for random integer coordinates.
pub const DEFAULT_HEIGHT: i64 = 20;

/// A point of P^N with coprime integer coordinates, first nonzero coordinate positive.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProjPoint {
    #[serde(with = "crate::algebra::rational::serde_rational_vec")]
    coords: Vec<Rational>,
}

impl ProjPoint {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        let coords = primitive_integer_vector(&coords)
            .ok_or_else(|| Error::InvalidInput("projective point with all coordinates zero".into()))?;
        Ok(ProjPoint { coords })
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        Self::new(coords.iter().map(|&x| rat(x)).collect()).expect("nonzero coordinates")
    }

    /// A point of P¹; panics on `(0, 0)`.
    pub fn from_pair(a: Rational, b: Rational) -> Self {
        Self::new(vec![a, b]).expect("nonzero pair")
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// The N of P^N.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn random(rng: &mut impl Rng, ambient: usize, bound: i64) -> Self {
        Self::new(random_nonzero_vector(rng, ambient + 1, bound)).expect("nonzero")
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords.iter().map(format_rational).collect();
        write!(f, "({})", c.join(":"))
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Integer vector with entries uniform in `[−bound, bound]`, resampled until nonzero.
pub fn random_nonzero_vector(rng: &mut impl Rng, len: usize, bound: i64) -> Vec<Rational> {
    loop {
        let v: Vec<Rational> = (0..len).map(|_| rat(rng.gen_range(-bound..=bound))).collect();
        if !is_zero_vec(&v) {
            return v;
        }
    }
}

/// Invertible integer matrix with entries in `[−bound, bound]` (a random change of coordinates).
pub fn random_invertible(rng: &mut impl Rng, n: usize, bound: i64) -> RatMatrix {
    loop {
        let rows: Vec<Vec<Rational>> = (0..n)
            .map(|_| (0..n).map(|_| rat(rng.gen_range(-bound..=bound))).collect())
            .collect();
        let m = RatMatrix::from_row_slices(n, &rows);
        if m.rank() == n {
            return m;
        }
    }
}

/// A k-plane of P^N, held as the row space of a full-rank (k+1)×(N+1) matrix in rref.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinSubspace {
    basis: RatMatrix,
}

impl LinSubspace {
    /// The span of the rows of `generators`. Fails if every row is zero.
    pub fn from_generators(generators: &RatMatrix) -> Result<Self> {
        let basis = generators.row_space();
        if basis.rows() == 0 {
            return Err(Error::InvalidInput("span of zero vectors".into()));
        }
        Ok(LinSubspace { basis })
    }

    pub fn from_vectors(ambient_len: usize, vectors: &[Vec<Rational>]) -> Result<Self> {
        if vectors.iter().any(|v| v.len() != ambient_len) {
            return Err(Error::Dimension("generator length differs from ambient".into()));
        }
        Self::from_generators(&RatMatrix::from_row_slices(ambient_len, vectors))
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_generators(&RatMatrix::from_i64(rows)).expect("nonzero generators")
    }

    pub fn point(p: &ProjPoint) -> Self {
        Self::from_vectors(p.coords.len(), std::slice::from_ref(&p.coords)).expect("nonzero point")
    }

    /// The whole space P^N.
    pub fn full(ambient: usize) -> Self {
        LinSubspace {
            basis: RatMatrix::identity(ambient + 1),
        }
    }

    /// The subspace cut out by the linear forms given as rows of `equations`.
    pub fn from_equations(equations: &RatMatrix) -> Result<Self> {
        Self::from_generators(&equations.kernel())
    }

    /// Projective dimension k.
    pub fn dim(&self) -> usize {
        self.basis.rows() - 1
    }

    /// The N of the ambient P^N.
    pub fn ambient(&self) -> usize {
        self.basis.cols() - 1
    }

    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Rational>> {
        self.basis.row_vecs()
    }

    /// Linear forms (rows) whose common zero locus is this subspace.
    pub fn equations(&self) -> RatMatrix {
        self.basis.kernel()
    }

    pub fn contains_vector(&self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.basis.cols(), "ambient mismatch");
        is_zero_vec(&self.equations().mul_vec(v))
    }

    pub fn contains_point(&self, p: &ProjPoint) -> bool {
        self.contains_vector(&p.coords)
    }

    pub fn contains(&self, other: &LinSubspace) -> bool {
        let eq = self.equations();
        (0..other.basis.rows()).all(|i| is_zero_vec(&eq.mul_vec(other.basis.row(i))))
    }

    pub fn as_point(&self) -> Option<ProjPoint> {
        (self.dim() == 0).then(|| ProjPoint::new(self.basis.row(0).to_vec()).expect("nonzero"))
    }

    /// The smallest subspace containing both.
    pub fn join(&self, other: &LinSubspace) -> Result<LinSubspace> {
        check_ambient(self, other)?;
        Self::from_generators(&self.basis.vstack(&other.basis)?)
    }

    /// Exact intersection; `None` when empty.
    pub fn meet(&self, other: &LinSubspace) -> Result<Option<LinSubspace>> {
        check_ambient(self, other)?;
        let eqs = self.equations().vstack(&other.equations())?;
        let k = eqs.kernel();
        if k.rows() == 0 {
            return Ok(None);
        }
        Ok(Some(LinSubspace::from_generators(&k)?))
    }

    pub fn random_point(&self, rng: &mut impl Rng, bound: i64) -> ProjPoint {
        loop {
            let c = random_nonzero_vector(rng, self.basis.rows(), bound);
            let v = self.basis.vec_mul(&c);
            if let Ok(p) = ProjPoint::new(v) {
                return p;
            }
        }
    }

    /// A random line inside this subspace (requires dim ≥ 1).
    pub fn random_line(&self, rng: &mut impl Rng, bound: i64) -> ProjLine {
        assert!(self.dim() >= 1, "no lines in a point");
        loop {
            let p = self.random_point(rng, bound);
            let q = self.random_point(rng, bound);
            if let Ok(l) = ProjLine::through(&p, &q) {
                return l;
            }
        }
    }
}

fn check_ambient(a: &LinSubspace, b: &LinSubspace) -> Result<()> {
    if a.ambient() != b.ambient() {
        return Err(Error::Dimension(format!(
            "subspaces of P^{} and P^{}",
            a.ambient(),
            b.ambient()
        )));
    }
    Ok(())
}

impl fmt::Debug for LinSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinSubspace(dim {}) {self}", self.dim())
    }
}

impl fmt::Display for LinSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .basis
            .row_vecs()
            .iter()
            .map(|r| format!("({})", r.iter().map(format_rational).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "<{}>", rows.join(", "))
    }
}

/// Smallest subspace containing all of the given subspaces.
pub fn span(parts: &[&LinSubspace]) -> Result<LinSubspace> {
    let Some((first, rest)) = parts.split_first() else {
        return Err(Error::InvalidInput("span of nothing".into()));
    };
    rest.iter().try_fold((*first).clone(), |acc, s| acc.join(s))
}

pub fn meet(s: &LinSubspace, t: &LinSubspace) -> Result<Option<LinSubspace>> {
    s.meet(t)
}

/// True iff the line meets the subspace.
pub fn incident(line: &ProjLine, other: &LinSubspace) -> Result<bool> {
    Ok(line.subspace().meet(other)?.is_some())
}

/// A line of P^N. Its canonical basis `(p, q)` is the rref of any spanning pair.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ProjLine {
    space: LinSubspace,
}

impl ProjLine {
    pub fn new(space: LinSubspace) -> Result<Self> {
        if space.dim() != 1 {
            return Err(Error::InvalidInput(format!(
                "a line needs rank 2, got rank {}",
                space.dim() + 1
            )));
        }
        Ok(ProjLine { space })
    }

    pub fn from_vectors(p: &[Rational], q: &[Rational]) -> Result<Self> {
        if p.len() != q.len() {
            return Err(Error::Dimension("line generators differ in length".into()));
        }
        Self::new(LinSubspace::from_vectors(p.len(), &[p.to_vec(), q.to_vec()])?)
    }

    pub fn through(p: &ProjPoint, q: &ProjPoint) -> Result<Self> {
        Self::from_vectors(p.coords(), q.coords())
    }

    pub fn from_i64(p: &[i64], q: &[i64]) -> Self {
        Self::new(LinSubspace::from_i64(&[p, q])).expect("independent generators")
    }

    pub fn subspace(&self) -> &LinSubspace {
        &self.space
    }

    pub fn ambient(&self) -> usize {
        self.space.ambient()
    }

    /// The canonical basis `(p, q)`.
    pub fn p(&self) -> &[Rational] {
        self.space.basis.row(0)
    }

    pub fn q(&self) -> &[Rational] {
        self.space.basis.row(1)
    }

    /// The point `a·p + b·q`.
    pub fn point_at(&self, a: &Rational, b: &Rational) -> Option<ProjPoint> {
        let v: Vec<Rational> = self.p().iter().zip(self.q()).map(|(x, y)| a * x + b * y).collect();
        ProjPoint::new(v).ok()
    }

    pub fn contains_point(&self, p: &ProjPoint) -> bool {
        self.space.contains_point(p)
    }

    pub fn random_point(&self, rng: &mut impl Rng, bound: i64) -> ProjPoint {
        self.space.random_point(rng, bound)
    }
}

impl fmt::Display for ProjLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fmtv = |v: &[Rational]| v.iter().map(format_rational).collect::<Vec<_>>().join(",");
        write!(f, "span{{({}), ({})}}", fmtv(self.p()), fmtv(self.q()))
    }
}

/// The standard basis vector e_i (0-based) of length `n`.
pub fn unit_vector(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}
