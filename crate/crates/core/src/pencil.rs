//! Pencils `λA − μB` of antisymmetric forms: generality, degenerate members,
//! the center and hyperplane curves of odd pencils, and normalization of even
//! pencils of size 6 to the block form `A = diag(J,J,J)`, `B = diag(J,0,−J)`.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{
    format_rational, parse_rational, pfaffian_form, principal_subpfaffian_forms, BinaryForm, RatMatrix, Rational,
};
use crate::error::{Error, Result};
use crate::projective::{LinSubspace, ProjPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    /// Matrices of size 2n, sections of G(1,2n−1).
    Even,
    /// Matrices of size 2n+1, sections of G(1,2n).
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AntisymPencil {
    a: RatMatrix,
    b: RatMatrix,
    parity: Parity,
}

/// A singular member `λ₀A − μ₀B` and its kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegenerateMember {
    pub parameter: ProjPoint,
    pub kernel: LinSubspace,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneralityCertificate {
    /// `Pf(λA − μB)` is squarefree of full degree; rational roots listed, the
    /// rest of the form kept in `residual`.
    Even {
        pfaffian: BinaryForm,
        roots: Vec<ProjPoint>,
        residual: BinaryForm,
    },
    /// The principal sub-Pfaffians of maximal even size have no common root.
    Odd { subpfaffian_gcd: BinaryForm },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralityViolation {
    pub reason: String,
    pub witness: Option<BinaryForm>,
}

impl fmt::Display for GeneralityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            Some(w) => write!(f, "{} (witness {w})", self.reason),
            None => f.write_str(&self.reason),
        }
    }
}

/// Output of [`AntisymPencil::normalize_even`].
///
/// With `A' = R₁₁A − R₂₁B`, `B' = −R₁₂A + R₂₂B` one has `ᵗT·A'·T = A_std`
/// and `ᵗT·B'·T = B_std`; the map `x ↦ T·x` carries the normal-form section
/// onto the input section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedPencil {
    pub transform: RatMatrix,
    pub mobius: RatMatrix,
    pub pencil: AntisymPencil,
}

fn j_block() -> RatMatrix {
    RatMatrix::from_i64(&[&[0, -1], &[1, 0]])
}

impl AntisymPencil {
    /// Checks shape and antisymmetry; the parity follows from the size.
    pub fn new(a: RatMatrix, b: RatMatrix) -> Result<Self> {
        if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
            return Err(Error::Dimension("pencil matrices must be square of equal size".into()));
        }
        if a.rows() < 4 {
            return Err(Error::InvalidInput("pencil matrices must have size at least 4".into()));
        }
        if !a.is_antisymmetric() || !b.is_antisymmetric() {
            return Err(Error::InvalidInput("pencil matrices must be antisymmetric".into()));
        }
        let parity = if a.rows().is_multiple_of(2) { Parity::Even } else { Parity::Odd };
        Ok(AntisymPencil { a, b, parity })
    }

    /// The even normal form of size 6.
    pub fn normal_form_g15() -> Self {
        let j = j_block();
        let z = RatMatrix::zeros(2, 2);
        let a = RatMatrix::block_diagonal(&[j.clone(), j.clone(), j.clone()]);
        let b = RatMatrix::block_diagonal(&[j.clone(), z, -&j]);
        Self::new(a, b).expect("normal form is valid")
    }

    /// The odd normal form of size 5, with center curve `(0:0:μ²:μλ:λ²)`.
    pub fn normal_form_g14() -> Self {
        let a = RatMatrix::from_i64(&[
            &[0, 0, -1, 0, 0],
            &[0, 0, 0, -1, 0],
            &[1, 0, 0, 0, 0],
            &[0, 1, 0, 0, 0],
            &[0, 0, 0, 0, 0],
        ]);
        let b = RatMatrix::from_i64(&[
            &[0, 0, 0, -1, 0],
            &[0, 0, 0, 0, -1],
            &[0, 0, 0, 0, 0],
            &[1, 0, 0, 0, 0],
            &[0, 1, 0, 0, 0],
        ]);
        Self::new(a, b).expect("normal form is valid")
    }

    pub fn a(&self) -> &RatMatrix {
        &self.a
    }

    pub fn b(&self) -> &RatMatrix {
        &self.b
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// Matrix size N+1.
    pub fn size(&self) -> usize {
        self.a.rows()
    }

    /// The N of P^N.
    pub fn ambient(&self) -> usize {
        self.size() - 1
    }

    /// The n of G(1,2n−1) (even) or G(1,2n) (odd).
    pub fn half(&self) -> usize {
        self.size() / 2
    }

    /// `λA − μB`.
    pub fn member(&self, lambda: &Rational, mu: &Rational) -> RatMatrix {
        &self.a.scale(lambda) - &self.b.scale(mu)
    }

    /// Same pencil after the change of coordinates `x ↦ x·M`, i.e. `(M·A·ᵗM, M·B·ᵗM)`.
    pub fn congruent(&self, m: &RatMatrix) -> Result<Self> {
        if m.rows() != self.size() || m.cols() != self.size() {
            return Err(Error::Dimension("congruence matrix has the wrong size".into()));
        }
        let mt = m.transpose();
        Self::new(&(m * &self.a) * &mt, &(m * &self.b) * &mt)
    }

    fn independent(&self) -> bool {
        let n = self.size();
        let flat = |m: &RatMatrix| -> Vec<Rational> {
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| m[(i, j)].clone()).collect()
        };
        RatMatrix::from_row_slices(n * n, &[flat(&self.a), flat(&self.b)]).rank() == 2
    }

    pub fn generality_check(&self) -> std::result::Result<GeneralityCertificate, GeneralityViolation> {
        if !self.independent() {
            return Err(GeneralityViolation {
                reason: "pencil not 2-dimensional".into(),
                witness: None,
            });
        }
        match self.parity {
            Parity::Even => {
                let pf = pfaffian_form(&self.a, &self.b).expect("shape checked");
                if pf.is_zero() {
                    return Err(GeneralityViolation {
                        reason: "every member of the pencil is degenerate".into(),
                        witness: Some(pf),
                    });
                }
                if !pf.is_squarefree() {
                    return Err(GeneralityViolation {
                        reason: "Pfaffian form has a repeated root".into(),
                        witness: Some(pf),
                    });
                }
                let dec = pf.rational_roots().expect("nonzero form");
                Ok(GeneralityCertificate::Even {
                    pfaffian: pf,
                    roots: dec.roots.into_iter().map(|r| r.point).collect(),
                    residual: dec.residual,
                })
            }
            Parity::Odd => {
                let k = self.size() - 1;
                let forms = principal_subpfaffian_forms(&self.a, &self.b, k).expect("shape checked");
                let g = forms.iter().fold(BinaryForm::zero(0), |acc, f| acc.gcd(f));
                if g.is_zero() || !g.is_constant() {
                    return Err(GeneralityViolation {
                        reason: format!("some member has rank below {k}"),
                        witness: Some(g),
                    });
                }
                Ok(GeneralityCertificate::Odd { subpfaffian_gcd: g })
            }
        }
    }

    /// [`Self::generality_check`] as a `Result` with [`Error::NotGeneral`].
    pub fn require_general(&self) -> Result<GeneralityCertificate> {
        self.generality_check().map_err(|v| Error::NotGeneral(v.to_string()))
    }

    fn require_parity(&self, parity: Parity, what: &str) -> Result<()> {
        if self.parity != parity {
            return Err(Error::Precondition(format!("{what} needs a pencil of {parity} size")));
        }
        Ok(())
    }

    /// The degenerate members of a general even pencil, ordered by the pivot
    /// columns of their kernels.
    pub fn exceptional_lines(&self) -> Result<Vec<DegenerateMember>> {
        self.require_parity(Parity::Even, "exceptional lines")?;
        let GeneralityCertificate::Even { roots, residual, .. } = self.require_general()? else {
            unreachable!("even parity")
        };
        if !residual.is_constant() {
            return Err(Error::IrrationalRoots { residual });
        }
        let mut out = Vec::with_capacity(roots.len());
        for root in roots {
            let c = root.coords();
            let kernel = LinSubspace::from_generators(&self.member(&c[0], &c[1]).kernel())?;
            if kernel.dim() != 1 {
                return Err(Error::NotGeneral(format!("kernel at {root} is not a line")));
            }
            out.push(DegenerateMember { parameter: root, kernel });
        }
        out.sort_by_key(|m| pivots(m.kernel.basis()));
        Ok(out)
    }

    /// The kernel point `c(λ:μ)` of an odd pencil.
    pub fn center_curve_point(&self, lambda: &Rational, mu: &Rational) -> Result<ProjPoint> {
        self.require_parity(Parity::Odd, "the center curve")?;
        let ker = self.member(lambda, mu).kernel();
        if ker.rows() != 1 {
            return Err(Error::NotGeneral(format!(
                "pencil not general at ({}:{})",
                format_rational(lambda),
                format_rational(mu)
            )));
        }
        ProjPoint::new(ker.row(0).to_vec())
    }

    /// `c(λ:μ)` as binary forms: the signed principal sub-Pfaffians of size
    /// `2n`, scaled so the first nonzero coefficient is positive.
    pub fn center_curve_forms(&self) -> Result<Vec<BinaryForm>> {
        self.require_parity(Parity::Odd, "the center curve")?;
        let size = self.size();
        // subsets come in lexicographic order, so subset k omits index size − 1 − k
        let mut forms = principal_subpfaffian_forms(&self.a, &self.b, size - 1)?;
        forms.reverse();
        for (i, f) in forms.iter_mut().enumerate() {
            if i % 2 == 1 {
                *f = -&*f;
            }
        }
        let lead = forms.iter().flat_map(|f| f.coeffs()).find(|c| !c.is_zero()).cloned();
        match lead {
            Some(c) if c < Rational::zero() => Ok(forms.iter().map(|f| -f).collect()),
            Some(_) => Ok(forms),
            None => Err(Error::NotGeneral("all sub-Pfaffians vanish".into())),
        }
    }

    /// The plane spanned by the center curve, from n+1 distinct parameters.
    pub fn center_plane(&self) -> Result<LinSubspace> {
        let n = self.half();
        let pts: Result<Vec<Vec<Rational>>> = (0..=n)
            .map(|i| {
                let (l, m) = if i == 0 {
                    (Rational::one(), Rational::zero())
                } else {
                    (Rational::from_integer((i as i64 - 1).into()), Rational::one())
                };
                self.center_curve_point(&l, &m).map(|p| p.coords().to_vec())
            })
            .collect();
        let plane = LinSubspace::from_vectors(self.size(), &pts?)?;
        if plane.dim() != n {
            return Err(Error::NotGeneral("center curve does not span an n-plane".into()));
        }
        Ok(plane)
    }

    /// The hyperplane `ker[c·A; c·B]` at `c = c(λ:μ)`.
    pub fn hyperplane_curve_point(&self, lambda: &Rational, mu: &Rational) -> Result<LinSubspace> {
        let c = self.center_curve_point(lambda, mu)?;
        let rows = vec![self.a.vec_mul(c.coords()), self.b.vec_mul(c.coords())];
        let m = RatMatrix::from_row_slices(self.size(), &rows);
        if m.rank() != 1 {
            return Err(Error::InvariantViolation(format!(
                "[cA; cB] has rank {} at c = {c}",
                m.rank()
            )));
        }
        LinSubspace::from_equations(&m)
    }

    /// Whether the pencil is literally the even normal form.
    pub fn is_even_normal_form(&self) -> bool {
        *self == Self::normal_form_g15()
    }

    /// Whether the pencil is literally the odd normal form.
    pub fn is_odd_normal_form(&self) -> bool {
        *self == Self::normal_form_g14()
    }

    /// Brings a general size-6 pencil with rational degenerate members to the
    /// normal form; the three roots go to `(1:1)`, `(0:1)`, `(−1:1)`.
    pub fn normalize_even(&self) -> Result<NormalizedPencil> {
        self.require_parity(Parity::Even, "normalization")?;
        if self.size() != 6 {
            return Err(Error::Unsupported("normalization is implemented for size 6 only".into()));
        }
        let members = self.exceptional_lines().map_err(|e| match e {
            Error::IrrationalRoots { residual } => Error::Unsupported(format!(
                "degenerate members are not rational (residual {residual})"
            )),
            other => other,
        })?;
        let targets = [
            ProjPoint::from_i64(&[1, 1]),
            ProjPoint::from_i64(&[0, 1]),
            ProjPoint::from_i64(&[1, -1]),
        ];
        // roots that already sit on a target keep it
        let mut assigned: [Option<usize>; 3] = [None; 3];
        let mut used = [false; 3];
        for (ti, t) in targets.iter().enumerate() {
            if let Some(k) = members.iter().position(|m| &m.parameter == t) {
                assigned[ti] = Some(k);
                used[k] = true;
            }
        }
        let mut free = (0..3).filter(|k| !used[*k]);
        for slot in assigned.iter_mut() {
            if slot.is_none() {
                *slot = free.next();
            }
        }
        let order: Vec<usize> = assigned.iter().map(|s| s.expect("three roots")).collect();
        let root = |i: usize| members[order[i]].parameter.coords().to_vec();
        let (r1, r2, r3) = (root(0), root(1), root(2));

        // R·tᵢ ∝ rootᵢ with t = (1,1), (0,1), (−1,1)
        let basis = RatMatrix::from_row_slices(2, &[r1.clone(), r2.clone()]).transpose();
        let ab = basis
            .solve_right(&r3)
            .ok_or_else(|| Error::InvariantViolation("pencil roots are not distinct".into()))?;
        let k1 = -ab[0].clone();
        let k2 = &ab[1] / Rational::from_integer(2.into());
        let col2: Vec<Rational> = r2.iter().map(|x| x * &k2).collect();
        let col1: Vec<Rational> = r1.iter().zip(&col2).map(|(x, c)| x * &k1 - c).collect();
        let mut mobius = RatMatrix::from_row_slices(2, &[col1, col2]).transpose();
        let lead = if !mobius[(0, 0)].is_zero() {
            mobius[(0, 0)].clone()
        } else {
            mobius[(0, 1)].clone()
        };
        if lead < Rational::zero() {
            mobius = -&mobius;
        }

        let a2 = &self.a.scale(&mobius[(0, 0)]) - &self.b.scale(&mobius[(1, 0)]);
        let b2 = &self.b.scale(&mobius[(1, 1)]) - &self.a.scale(&mobius[(0, 1)]);

        let mut t = RatMatrix::zeros(6, 6);
        for (i, &k) in order.iter().enumerate() {
            let ker = members[k].kernel.basis();
            let (u, w) = (ker.row(0), ker.row(1));
            let pair = a2.bilinear(u, w);
            if pair.is_zero() {
                return Err(Error::InvariantViolation("member restricts to zero on a kernel".into()));
            }
            let c = -pair.recip();
            for r in 0..6 {
                t[(r, 2 * i)] = u[r].clone();
                t[(r, 2 * i + 1)] = &w[r] * &c;
            }
        }
        let tt = t.transpose();
        let a_std = &(&tt * &a2) * &t;
        let b_std = &(&tt * &b2) * &t;
        let pencil = AntisymPencil::new(a_std, b_std)?;
        if !pencil.is_even_normal_form() {
            return Err(Error::InvariantViolation("normalization did not reach the normal form".into()));
        }
        Ok(NormalizedPencil {
            transform: t,
            mobius,
            pencil,
        })
    }

    pub fn to_json(&self) -> String {
        let file = PencilFile {
            n: self.half(),
            parity: self.parity,
            a: matrix_strings(&self.a),
            b: matrix_strings(&self.b),
        };
        serde_json::to_string_pretty(&file).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: PencilFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let a = parse_matrix(&file.a, "A")?;
        let b = parse_matrix(&file.b, "B")?;
        let pencil = Self::new(a, b)?;
        if pencil.parity != file.parity || pencil.half() != file.n {
            return Err(Error::Parse(format!(
                "declared n = {}, parity {} but matrices have size {}",
                file.n,
                file.parity,
                pencil.size()
            )));
        }
        Ok(pencil)
    }
}

fn pivots(m: &RatMatrix) -> Vec<usize> {
    (0..m.rows())
        .map(|i| m.row(i).iter().position(|x| !x.is_zero()).unwrap_or(usize::MAX))
        .collect()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PencilFile {
    n: usize,
    parity: Parity,
    #[serde(rename = "A")]
    a: Vec<Vec<String>>,
    #[serde(rename = "B")]
    b: Vec<Vec<String>>,
}

fn matrix_strings(m: &RatMatrix) -> Vec<Vec<String>> {
    m.row_vecs().iter().map(|r| r.iter().map(format_rational).collect()).collect()
}

fn parse_matrix(rows: &[Vec<String>], name: &str) -> Result<RatMatrix> {
    let parsed: Result<Vec<Vec<Rational>>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter()
                .enumerate()
                .map(|(j, s)| {
                    parse_rational(s).map_err(|e| Error::Parse(format!("{name}[{i}][{j}]: {e}")))
                })
                .collect()
        })
        .collect();
    RatMatrix::from_rows(parsed?).map_err(|e| Error::Parse(format!("{name}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> RatMatrix {
        crate::projective::random_invertible(rng, n, 4)
    }

    #[test]
    fn center_curve_forms_of_normal_form() {
        let p = AntisymPencil::normal_form_g14();
        let forms = p.center_curve_forms().unwrap();
        let want = [[0, 0, 0], [0, 0, 0], [0, 0, 1], [0, 1, 0], [1, 0, 0]];
        for (f, w) in forms.iter().zip(want) {
            assert_eq!(*f, BinaryForm::from_i64(&w));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let q = p.congruent(&random_invertible(&mut rng, 5)).unwrap();
        let forms = q.center_curve_forms().unwrap();
        for (l, m) in [(1, 0), (0, 1), (3, -2), (5, 7)] {
            let v: Vec<Rational> = forms.iter().map(|f| f.eval(&rat(l), &rat(m))).collect();
            assert_eq!(ProjPoint::new(v).unwrap(), q.center_curve_point(&rat(l), &rat(m)).unwrap());
        }
    }

    #[test]
    fn even_normal_form_roots_and_lines() {
        let p = AntisymPencil::normal_form_g15();
        let GeneralityCertificate::Even { pfaffian, roots, residual } = p.require_general().unwrap() else {
            panic!("expected even certificate")
        };
        // −(λ−μ)λ(λ+μ) = −λ³ + λμ²
        assert_eq!(pfaffian, BinaryForm::from_i64(&[-1, 0, 1, 0]));
        assert!(residual.is_constant());
        for r in [[1, 1], [0, 1], [-1, 1]] {
            assert!(roots.contains(&ProjPoint::from_i64(&r)));
        }
        let lines = p.exceptional_lines().unwrap();
        let expected = [
            LinSubspace::from_i64(&[&[1, 0, 0, 0, 0, 0], &[0, 1, 0, 0, 0, 0]]),
            LinSubspace::from_i64(&[&[0, 0, 1, 0, 0, 0], &[0, 0, 0, 1, 0, 0]]),
            LinSubspace::from_i64(&[&[0, 0, 0, 0, 1, 0], &[0, 0, 0, 0, 0, 1]]),
        ];
        for (m, e) in lines.iter().zip(&expected) {
            assert_eq!(&m.kernel, e);
        }
        assert_eq!(lines[0].parameter, ProjPoint::from_i64(&[1, 1]));
        assert_eq!(lines[1].parameter, ProjPoint::from_i64(&[0, 1]));
        assert_eq!(lines[2].parameter, ProjPoint::from_i64(&[-1, 1]));
    }

    #[test]
    fn odd_normal_form_is_general() {
        let p = AntisymPencil::normal_form_g14();
        assert!(matches!(p.require_general().unwrap(), GeneralityCertificate::Odd { .. }));
    }

    #[test]
    fn dependent_pencil_rejected() {
        let a = AntisymPencil::normal_form_g15().a().clone();
        let p = AntisymPencil::new(a.clone(), a.scale(&rat(2))).unwrap();
        assert_eq!(p.generality_check().unwrap_err().reason, "pencil not 2-dimensional");
    }

    #[test]
    fn fused_blocks_not_general() {
        // blocks 2 and 3 share the root (0:1)
        let j = j_block();
        let z = RatMatrix::zeros(2, 2);
        let a = RatMatrix::block_diagonal(&[j.clone(), j.clone(), j.clone()]);
        let b = RatMatrix::block_diagonal(&[j.clone(), z.clone(), z]);
        let p = AntisymPencil::new(a, b).unwrap();
        assert!(p.generality_check().is_err());
        assert!(matches!(p.exceptional_lines(), Err(Error::NotGeneral(_))));
    }

    #[test]
    fn irrational_roots_carry_residual() {
        // Pf(λA − μB) = λ(λ² − 2μ²)
        let mut a = RatMatrix::zeros(6, 6);
        let mut b = RatMatrix::zeros(6, 6);
        for (i, j) in [(0, 1), (2, 3), (4, 5)] {
            a[(i, j)] = rat(1);
            a[(j, i)] = rat(-1);
        }
        for (i, j, v) in [(2, 4, -1), (3, 5, -2)] {
            b[(i, j)] = rat(v);
            b[(j, i)] = rat(-v);
        }
        let p = AntisymPencil::new(a, b).unwrap();
        assert_eq!(pfaffian_form(p.a(), p.b()).unwrap(), BinaryForm::from_i64(&[1, 0, -2, 0]));
        match p.exceptional_lines() {
            Err(Error::IrrationalRoots { residual }) => {
                assert_eq!(residual, BinaryForm::from_i64(&[1, 0, -2]))
            }
            other => panic!("expected irrational roots, got {other:?}"),
        }
        assert!(matches!(p.normalize_even(), Err(Error::Unsupported(_))));
    }

    #[test]
    fn center_curve_examples() {
        let p = AntisymPencil::normal_form_g14();
        assert_eq!(p.center_curve_point(&rat(0), &rat(1)).unwrap(), ProjPoint::from_i64(&[0, 0, 1, 0, 0]));
        assert_eq!(p.center_curve_point(&rat(1), &rat(0)).unwrap(), ProjPoint::from_i64(&[0, 0, 0, 0, 1]));
        assert_eq!(p.center_curve_point(&rat(1), &rat(1)).unwrap(), ProjPoint::from_i64(&[0, 0, 1, 1, 1]));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let (l, m) = (rat(rng.gen_range(-9..=9)), rat(rng.gen_range(1..=9)));
            let c = p.center_curve_point(&l, &m).unwrap();
            let want = ProjPoint::new(vec![rat(0), rat(0), &m * &m, &m * &l, &l * &l]).unwrap();
            assert_eq!(c, want);
        }
        let plane = p.center_plane().unwrap();
        assert_eq!(plane, LinSubspace::from_i64(&[&[0, 0, 1, 0, 0], &[0, 0, 0, 1, 0], &[0, 0, 0, 0, 1]]));
        assert!(p.center_curve_point(&rat(1), &rat(0)).is_ok());
        assert!(AntisymPencil::normal_form_g15().center_curve_point(&rat(1), &rat(0)).is_err());
    }

    #[test]
    fn hyperplane_curve_examples() {
        let p = AntisymPencil::normal_form_g14();
        let plane = p.center_plane().unwrap();
        for (l, m) in [(0, 1), (1, 0), (1, 1), (3, -2), (5, 7)] {
            let h = p.hyperplane_curve_point(&rat(l), &rat(m)).unwrap();
            let eq = RatMatrix::from_row_slices(5, &[vec![rat(m), rat(l), rat(0), rat(0), rat(0)]]);
            assert_eq!(h, LinSubspace::from_equations(&eq).unwrap());
            assert!(h.contains(&plane));
            let c = p.center_curve_point(&rat(l), &rat(m)).unwrap();
            assert!(h.contains_point(&c));
        }
    }

    #[test]
    fn normalize_identity() {
        let p = AntisymPencil::normal_form_g15();
        let n = p.normalize_even().unwrap();
        assert_eq!(n.transform, RatMatrix::identity(6));
        assert_eq!(n.mobius, RatMatrix::identity(2));
        assert!(n.pencil.is_even_normal_form());
    }

    #[test]
    fn normalize_random_conjugates() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let std = AntisymPencil::normal_form_g15();
        for _ in 0..20 {
            let m = random_invertible(&mut rng, 6);
            let conj = std.congruent(&m).unwrap();
            let n = conj.normalize_even().unwrap();
            assert!(n.pencil.is_even_normal_form());
        }
    }

    #[test]
    fn normalize_roots_at_zero_infinity_one() {
        // Pf(λA − μB) vanishing at (0:1), (1:0), (1:1)
        let j = j_block();
        let z = RatMatrix::zeros(2, 2);
        let a = RatMatrix::block_diagonal(&[j.clone(), z.clone(), j.clone()]);
        let b = RatMatrix::block_diagonal(&[z, j.clone(), j.clone()]);
        let p = AntisymPencil::new(a, b).unwrap();
        let GeneralityCertificate::Even { roots, .. } = p.require_general().unwrap() else { panic!() };
        assert_eq!(roots.len(), 3);
        for r in [[0, 1], [1, 0], [1, 1]] {
            assert!(roots.contains(&ProjPoint::from_i64(&r)));
        }
        assert!(p.normalize_even().unwrap().pencil.is_even_normal_form());
    }

    #[test]
    fn json_round_trip() {
        for p in [AntisymPencil::normal_form_g14(), AntisymPencil::normal_form_g15()] {
            let text = p.to_json();
            let back = AntisymPencil::from_json(&text).unwrap();
            assert_eq!(back, p);
            assert_eq!(back.to_json(), text);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let m = random_invertible(&mut rng, 6).scale(&Rational::new(1.into(), 3.into()));
        let p = AntisymPencil::normal_form_g15().congruent(&m).unwrap();
        assert_eq!(AntisymPencil::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn json_errors() {
        let e = AntisymPencil::from_json("{\"n\": 2,\n \"parity\": \"odd\", \"A\": [[\"x\"]]").unwrap_err();
        assert!(matches!(e, Error::Parse(_)));
        let mismatched = AntisymPencil::normal_form_g14().to_json().replace("\"odd\"", "\"even\"");
        assert!(matches!(AntisymPencil::from_json(&mismatched), Err(Error::Parse(_))));
        let bad_entry = AntisymPencil::normal_form_g14().to_json().replacen("\"-1\"", "\"1/0\"", 1);
        assert!(AntisymPencil::from_json(&bad_entry).is_err());
    }
}
