use num_traits::Zero;

use super::matrix::RatMatrix;
use super::rational::{ratio, Rational};
use crate::error::{Error, Result};

/// A quadratic form `x·Q·xᵀ` given by its symmetric matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymQuadForm {
    matrix: RatMatrix,
}

impl SymQuadForm {
    pub fn new(matrix: RatMatrix) -> Result<Self> {
        if !matrix.is_symmetric() {
            return Err(Error::InvalidInput("quadratic form matrix must be symmetric".into()));
        }
        Ok(SymQuadForm { matrix })
    }

    /// Builds the form from monomial coefficients: `terms` lists `(i, j, c)` meaning `c·x_i·x_j`.
    pub fn from_monomials(dim: usize, terms: &[(usize, usize, Rational)]) -> Self {
        let mut m = RatMatrix::zeros(dim, dim);
        for (i, j, c) in terms {
            if i == j {
                m[(*i, *i)] += c.clone();
            } else {
                let h = c * ratio(1, 2);
                m[(*i, *j)] += h.clone();
                m[(*j, *i)] += h;
            }
        }
        SymQuadForm { matrix: m }
    }

    /// Symmetrized product of two linear forms, `ℓ₁·ℓ₂`.
    pub fn product_of_linear(l1: &[Rational], l2: &[Rational]) -> Self {
        assert_eq!(l1.len(), l2.len());
        let n = l1.len();
        let mut m = RatMatrix::zeros(n, n);
        let half = ratio(1, 2);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = (&l1[i] * &l2[j] + &l1[j] * &l2[i]) * &half;
            }
        }
        SymQuadForm { matrix: m }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.matrix.bilinear(x, x)
    }

    pub fn sub(&self, other: &SymQuadForm) -> SymQuadForm {
        SymQuadForm {
            matrix: &self.matrix - &other.matrix,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// Equal up to a nonzero scalar.
    pub fn proportional_to(&self, other: &SymQuadForm) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let n = self.dim();
        let pivot = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| !self.matrix[(i, j)].is_zero());
        match pivot {
            None => other.is_zero(),
            Some((i, j)) => {
                if other.matrix[(i, j)].is_zero() {
                    return false;
                }
                let c = &other.matrix[(i, j)] / &self.matrix[(i, j)];
                self.matrix.scale(&c) == other.matrix
            }
        }
    }

    /// Restriction to the span of the rows of `basis`: the Gram matrix `B·Q·Bᵀ`.
    pub fn restrict(&self, basis: &RatMatrix) -> SymQuadForm {
        let m = &(basis * &self.matrix) * &basis.transpose();
        SymQuadForm { matrix: m }
    }
}

/// Rank of the quadric and a basis (rows) of its kernel, the vertex locus.
pub fn quad_rank_and_vertex(q: &SymQuadForm) -> (usize, RatMatrix) {
    (q.matrix.rank(), q.matrix.kernel())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    #[test]
    fn cone_has_rank_three_and_vertex_e0() {
        // t1 t2 + 2 t1 t3 − t2 t3 in (t0..t3)
        let q = SymQuadForm::from_monomials(4, &[(1, 2, rat(1)), (1, 3, rat(2)), (2, 3, rat(-1))]);
        let (rank, ker) = quad_rank_and_vertex(&q);
        assert_eq!(rank, 3);
        assert_eq!(ker.rows(), 1);
        assert_eq!(ker.row(0), &[rat(1), rat(0), rat(0), rat(0)]);
    }

    #[test]
    fn zero_form_rank_zero() {
        let q = SymQuadForm::new(RatMatrix::zeros(4, 4)).unwrap();
        assert_eq!(quad_rank_and_vertex(&q).0, 0);
    }

    #[test]
    fn smooth_quadric_rank_four() {
        let q = SymQuadForm::from_monomials(4, &[(0, 3, rat(1)), (1, 2, rat(2))]);
        let (rank, ker) = quad_rank_and_vertex(&q);
        assert_eq!(rank, 4);
        assert_eq!(ker.rows(), 0);
    }

    #[test]
    fn product_of_linear_forms_evaluates() {
        let l1 = vec![rat(1), rat(2), rat(0)];
        let l2 = vec![rat(0), rat(-1), rat(3)];
        let q = SymQuadForm::product_of_linear(&l1, &l2);
        let x = vec![rat(2), rat(1), rat(5)];
        let d = |l: &[Rational]| crate::algebra::dot(l, &x);
        assert_eq!(q.eval(&x), d(&l1) * d(&l2));
        assert!(q.proportional_to(&SymQuadForm::new(q.matrix().scale(&rat(-3))).unwrap()));
        assert!(SymQuadForm::new(RatMatrix::from_i64(&[&[0, 1], &[2, 0]])).is_err());
    }
}
