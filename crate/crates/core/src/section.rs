//! The section `X = G(1,4) ∩ H²` (odd) or `Y = G(1,5) ∩ H²` (even) as a set of
//! lines `l ⊂ P^N` with `pAqᵀ = pBqᵀ = 0`, its invariant geometry, the
//! four-orbit classifier and per-orbit samplers.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{RatMatrix, Rational, SymQuadForm};
use crate::error::{Error, Result};
use crate::pencil::{AntisymPencil, Parity};
use crate::projective::{LinSubspace, ProjLine, ProjPoint, DEFAULT_HEIGHT};

/// Retry budget for the rejection steps of the orbit samplers.
pub const MAX_SAMPLE_ATTEMPTS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitLabel {
    O1,
    O2,
    O3,
    O4,
}

impl OrbitLabel {
    pub const ALL: [OrbitLabel; 4] = [OrbitLabel::O1, OrbitLabel::O2, OrbitLabel::O3, OrbitLabel::O4];

    pub fn as_str(&self) -> &'static str {
        match self {
            OrbitLabel::O1 => "o1",
            OrbitLabel::O2 => "o2",
            OrbitLabel::O3 => "o3",
            OrbitLabel::O4 => "o4",
        }
    }
}

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OrbitLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "o1" => Ok(OrbitLabel::O1),
            "o2" => Ok(OrbitLabel::O2),
            "o3" => Ok(OrbitLabel::O3),
            "o4" => Ok(OrbitLabel::O4),
            _ => Err(Error::Parse(format!("unknown orbit label {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
enum Geometry {
    Even {
        /// Exceptional lines l₁, l₂, l₃.
        lines: Vec<LinSubspace>,
        /// `V_j` = span of the `l_i` with `i ≠ j`.
        spans: Vec<LinSubspace>,
    },
    Odd {
        plane: LinSubspace,
        /// The center conic in the coordinates of `plane`'s basis.
        conic: SymQuadForm,
    },
}

/// A general pencil together with the geometry it determines.
#[derive(Clone, Debug)]
pub struct SectionSpace {
    pencil: AntisymPencil,
    geometry: Geometry,
}

/// A point `[l]` of the section.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SectionPoint {
    line: ProjLine,
}

impl SectionPoint {
    pub fn line(&self) -> &ProjLine {
        &self.line
    }

    pub fn p(&self) -> &[Rational] {
        self.line.p()
    }

    pub fn q(&self) -> &[Rational] {
        self.line.q()
    }
}

impl fmt::Display for SectionPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.line)
    }
}

impl SectionSpace {
    /// Requires a general pencil; even pencils must have size 6 and rational
    /// degenerate members, odd pencils size 5.
    pub fn new(pencil: AntisymPencil) -> Result<Self> {
        pencil.require_general()?;
        let geometry = match pencil.parity() {
            Parity::Even => {
                if pencil.size() != 6 {
                    return Err(Error::Unsupported("even sections are supported in P^5 only".into()));
                }
                let lines: Vec<LinSubspace> = pencil.exceptional_lines()?.into_iter().map(|m| m.kernel).collect();
                let spans = (0..3)
                    .map(|j| {
                        let others: Vec<&LinSubspace> = (0..3).filter(|&i| i != j).map(|i| &lines[i]).collect();
                        crate::projective::span(&others)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Geometry::Even { lines, spans }
            }
            Parity::Odd => {
                if pencil.size() != 5 {
                    return Err(Error::Unsupported("odd sections are supported in P^4 only".into()));
                }
                let plane = pencil.center_plane()?;
                let conic = fit_conic(&pencil, &plane)?;
                Geometry::Odd { plane, conic }
            }
        };
        Ok(SectionSpace { pencil, geometry })
    }

    /// `G(1,4) ∩ H²` in its normal form.
    pub fn g14() -> Self {
        Self::new(AntisymPencil::normal_form_g14()).expect("normal form is general")
    }

    /// `G(1,5) ∩ H²` in its normal form.
    pub fn g15() -> Self {
        Self::new(AntisymPencil::normal_form_g15()).expect("normal form is general")
    }

    pub fn pencil(&self) -> &AntisymPencil {
        &self.pencil
    }

    pub fn parity(&self) -> Parity {
        self.pencil.parity()
    }

    /// The N of P^N.
    pub fn ambient(&self) -> usize {
        self.pencil.ambient()
    }

    pub fn exceptional_lines(&self) -> Result<&[LinSubspace]> {
        match &self.geometry {
            Geometry::Even { lines, .. } => Ok(lines),
            Geometry::Odd { .. } => Err(Error::Precondition("exceptional lines exist for even sections".into())),
        }
    }

    /// `V₁, V₂, V₃`.
    pub fn v_spans(&self) -> Result<&[LinSubspace]> {
        match &self.geometry {
            Geometry::Even { spans, .. } => Ok(spans),
            Geometry::Odd { .. } => Err(Error::Precondition("the spans V_j exist for even sections".into())),
        }
    }

    pub fn center_plane(&self) -> Result<&LinSubspace> {
        match &self.geometry {
            Geometry::Odd { plane, .. } => Ok(plane),
            Geometry::Even { .. } => Err(Error::Precondition("the center plane exists for odd sections".into())),
        }
    }

    /// The conic C as a quadratic form in the coordinates of the center plane's basis.
    pub fn center_conic(&self) -> Result<&SymQuadForm> {
        match &self.geometry {
            Geometry::Odd { conic, .. } => Ok(conic),
            Geometry::Even { .. } => Err(Error::Precondition("the center conic exists for odd sections".into())),
        }
    }

    /// `(pAqᵀ, pBqᵀ)` for the canonical basis of `l`.
    pub fn pairings(&self, line: &ProjLine) -> Result<(Rational, Rational)> {
        if line.ambient() != self.ambient() {
            return Err(Error::Dimension(format!(
                "line of P^{} in a section of G(1,{})",
                line.ambient(),
                self.ambient()
            )));
        }
        Ok((
            self.pencil.a().bilinear(line.p(), line.q()),
            self.pencil.b().bilinear(line.p(), line.q()),
        ))
    }

    pub fn membership(&self, line: &ProjLine) -> bool {
        matches!(self.pairings(line), Ok((a, b)) if a.is_zero() && b.is_zero())
    }

    pub fn point(&self, line: ProjLine) -> Result<SectionPoint> {
        let (a, b) = self.pairings(&line)?;
        if !a.is_zero() || !b.is_zero() {
            return Err(Error::NotMember(format!(
                "{line}: pAq = {}, pBq = {}",
                crate::algebra::format_rational(&a),
                crate::algebra::format_rational(&b)
            )));
        }
        Ok(SectionPoint { line })
    }

    pub fn point_from_i64(&self, p: &[i64], q: &[i64]) -> Result<SectionPoint> {
        self.point(ProjLine::from_i64(p, q))
    }

    /// Coordinates of a vector of the center plane in its basis.
    fn plane_coords(plane: &LinSubspace, v: &[Rational]) -> Option<Vec<Rational>> {
        plane.basis().solve_left(v)
    }

    /// Whether a point of the center plane lies on the conic.
    pub fn on_center_conic(&self, p: &ProjPoint) -> Result<bool> {
        let plane = self.center_plane()?;
        let conic = self.center_conic()?;
        match Self::plane_coords(plane, p.coords()) {
            Some(y) => Ok(conic.eval(&y).is_zero()),
            None => Ok(false),
        }
    }

    /// Tangency of a line of the center plane to C: the restricted binary
    /// quadratic form has zero discriminant.
    pub fn tangent_to_conic(&self, line: &ProjLine) -> Result<bool> {
        let plane = self.center_plane()?;
        let conic = self.center_conic()?;
        let (Some(yp), Some(yq)) = (Self::plane_coords(plane, line.p()), Self::plane_coords(plane, line.q())) else {
            return Ok(false);
        };
        let restricted = conic.restrict(&RatMatrix::from_row_slices(3, &[yp, yq]));
        Ok(restricted.matrix().det()?.is_zero())
    }

    pub fn classify_orbit(&self, x: &SectionPoint) -> Result<OrbitLabel> {
        let line = x.line.subspace();
        match &self.geometry {
            Geometry::Even { lines, spans } => {
                let mut met = 0;
                for l in lines {
                    if line.meet(l)?.is_some() {
                        met += 1;
                    }
                }
                match met {
                    2 => Ok(OrbitLabel::O1),
                    1 => Ok(OrbitLabel::O2),
                    0 => {
                        for v in spans {
                            if line.meet(v)?.is_some() {
                                return Ok(OrbitLabel::O3);
                            }
                        }
                        Ok(OrbitLabel::O4)
                    }
                    _ => Err(Error::InvariantViolation(format!("{x} meets all three exceptional lines"))),
                }
            }
            Geometry::Odd { plane, .. } => {
                if plane.contains(line) {
                    return Ok(if self.tangent_to_conic(&x.line)? {
                        OrbitLabel::O1
                    } else {
                        OrbitLabel::O2
                    });
                }
                match line.meet(plane)? {
                    None => Ok(OrbitLabel::O4),
                    Some(m) => {
                        let pt = m.as_point().expect("a line not in the plane meets it in at most a point");
                        if self.on_center_conic(&pt)? {
                            Ok(OrbitLabel::O3)
                        } else {
                            Err(Error::InvariantViolation(format!(
                                "{x} meets the center plane at {pt}, off the conic"
                            )))
                        }
                    }
                }
            }
        }
    }

    /// True iff the line meets none or all three of `V₁, V₂, V₃`.
    pub fn check_meets_all_v(&self, x: &SectionPoint) -> Result<bool> {
        let spans = self.v_spans()?;
        let mut met = 0;
        for v in spans {
            if x.line.subspace().meet(v)?.is_some() {
                met += 1;
            }
        }
        Ok(met == 0 || met == 3)
    }

    fn in_exceptional_line(&self, p: &ProjPoint) -> bool {
        match &self.geometry {
            Geometry::Even { lines, .. } => lines.iter().any(|l| l.contains_point(p)),
            Geometry::Odd { .. } => false,
        }
    }

    /// Lines through `p` in the section: `{q : pAqᵀ = pBqᵀ = 0}`.
    pub fn solution_space(&self, p: &[Rational]) -> Result<LinSubspace> {
        let rows = vec![self.pencil.a().vec_mul(p), self.pencil.b().vec_mul(p)];
        LinSubspace::from_equations(&RatMatrix::from_row_slices(p.len(), &rows))
    }

    fn line_through(&self, p: &ProjPoint, space: &LinSubspace, rng: &mut impl Rng) -> Option<ProjLine> {
        let q = space.random_point(rng, DEFAULT_HEIGHT);
        ProjLine::through(p, &q).ok()
    }

    /// A random point of the requested orbit; always passes membership and classification.
    pub fn sample_orbit(&self, label: OrbitLabel, rng: &mut impl Rng) -> Result<SectionPoint> {
        for _ in 0..MAX_SAMPLE_ATTEMPTS {
            let Some(line) = self.candidate(label, rng)? else {
                continue;
            };
            let Ok(x) = self.point(line) else {
                continue;
            };
            if self.classify_orbit(&x)? == label {
                return Ok(x);
            }
        }
        Err(Error::SamplingExhausted {
            what: format!("{} orbit {label}", self.parity()),
            attempts: MAX_SAMPLE_ATTEMPTS,
        })
    }

    /// A random member of a uniformly chosen orbit.
    pub fn sample_member(&self, rng: &mut impl Rng) -> Result<SectionPoint> {
        let label = OrbitLabel::ALL[rng.gen_range(0..4)];
        self.sample_orbit(label, rng)
    }

    fn candidate(&self, label: OrbitLabel, rng: &mut impl Rng) -> Result<Option<ProjLine>> {
        let h = DEFAULT_HEIGHT;
        let n = self.ambient();
        Ok(match (&self.geometry, label) {
            (Geometry::Even { lines, .. }, OrbitLabel::O1) => {
                let i = rng.gen_range(0..3);
                let j = (i + rng.gen_range(1..3)) % 3;
                ProjLine::through(&lines[i].random_point(rng, h), &lines[j].random_point(rng, h)).ok()
            }
            (Geometry::Even { lines, .. }, OrbitLabel::O2) => {
                let i = rng.gen_range(0..3);
                let p = lines[i].random_point(rng, h);
                // p lies in the kernel of one member, so the two conditions collapse to one
                let space = self.solution_space(p.coords())?;
                self.line_through(&p, &space, rng)
            }
            (Geometry::Even { spans, .. }, OrbitLabel::O3) => {
                let j = rng.gen_range(0..3);
                let p = spans[j].random_point(rng, h);
                if self.in_exceptional_line(&p) {
                    return Ok(None);
                }
                let space = self.solution_space(p.coords())?;
                self.line_through(&p, &space, rng)
            }
            (Geometry::Even { .. }, OrbitLabel::O4) | (Geometry::Odd { .. }, OrbitLabel::O4) => {
                let p = ProjPoint::random(rng, n, h);
                let space = self.solution_space(p.coords())?;
                self.line_through(&p, &space, rng)
            }
            (Geometry::Odd { plane, conic }, OrbitLabel::O1) => {
                let c = self.random_conic_point(rng)?;
                let y = Self::plane_coords(plane, c.coords()).expect("curve lies in its plane");
                // polar line of c: {z : y·Q·zᵀ = 0} inside the plane
                let polar = conic.matrix().vec_mul(&y);
                let eq = RatMatrix::from_row_slices(3, &[polar]);
                let k = eq.kernel();
                let vs: Vec<Vec<Rational>> = (0..k.rows()).map(|i| plane.basis().vec_mul(k.row(i))).collect();
                ProjLine::new(LinSubspace::from_vectors(n + 1, &vs)?).ok()
            }
            (Geometry::Odd { plane, .. }, OrbitLabel::O2) => Some(plane.random_line(rng, h)),
            (Geometry::Odd { .. }, OrbitLabel::O3) => {
                let p = self.random_conic_point(rng)?;
                let space = self.solution_space(p.coords())?;
                self.line_through(&p, &space, rng)
            }
        })
    }

    /// `c(λ:μ)` at a random parameter.
    pub fn random_conic_point(&self, rng: &mut impl Rng) -> Result<ProjPoint> {
        let h = DEFAULT_HEIGHT;
        let t = ProjPoint::random(rng, 1, h);
        self.pencil.center_curve_point(&t.coords()[0], &t.coords()[1])
    }
}

/// The conic through the center curve, from five of its points.
fn fit_conic(pencil: &AntisymPencil, plane: &LinSubspace) -> Result<SymQuadForm> {
    let monomials = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];
    let mut rows = Vec::new();
    for t in 0..5i64 {
        let (l, m) = if t == 0 {
            (Rational::from_integer(1.into()), Rational::zero())
        } else {
            (Rational::from_integer((t - 2).into()), Rational::from_integer(1.into()))
        };
        let c = pencil.center_curve_point(&l, &m)?;
        let y = plane
            .basis()
            .solve_left(c.coords())
            .ok_or_else(|| Error::InvariantViolation("center curve leaves its plane".into()))?;
        rows.push(monomials.iter().map(|&(i, j)| &y[i] * &y[j]).collect::<Vec<_>>());
    }
    let k = RatMatrix::from_row_slices(6, &rows).kernel();
    if k.rows() != 1 {
        return Err(Error::InvariantViolation("center curve is not a smooth conic".into()));
    }
    let terms: Vec<(usize, usize, Rational)> =
        monomials.iter().zip(k.row(0)).map(|(&(i, j), c)| (i, j, c.clone())).collect();
    let conic = SymQuadForm::from_monomials(3, &terms);
    if conic.matrix().rank() != 3 {
        return Err(Error::InvariantViolation("center conic is singular".into()));
    }
    Ok(conic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn even_geometry() {
        let s = SectionSpace::g15();
        let v = s.v_spans().unwrap();
        let eqs = |i: usize| {
            let mut e = vec![0i64; 6];
            e[2 * i] = 1;
            let mut f = vec![0i64; 6];
            f[2 * i + 1] = 1;
            LinSubspace::from_equations(&RatMatrix::from_i64(&[&e, &f])).unwrap()
        };
        for (j, vj) in v.iter().enumerate() {
            assert_eq!(vj, &eqs(j));
        }
        assert_eq!(v[0].meet(&v[1]).unwrap().unwrap(), s.exceptional_lines().unwrap()[2]);
    }

    #[test]
    fn odd_geometry() {
        let s = SectionSpace::g14();
        let plane = s.center_plane().unwrap();
        assert_eq!(plane, &LinSubspace::from_i64(&[&[0, 0, 1, 0, 0], &[0, 0, 0, 1, 0], &[0, 0, 0, 0, 1]]));
        // x₄² − x₃x₅ up to scalar
        let expected = SymQuadForm::from_monomials(3, &[(1, 1, rat(1)), (0, 2, rat(-1))]);
        assert!(s.center_conic().unwrap().proportional_to(&expected));
    }

    #[test]
    fn membership_examples() {
        let odd = SectionSpace::g14();
        assert!(odd.membership(&ProjLine::from_i64(&[0, 0, 1, 0, 0], &[0, 0, 0, 1, 0])));
        let even = SectionSpace::g15();
        assert!(!even.membership(&ProjLine::from_i64(&[1, 0, 0, 0, 0, 0], &[0, 1, 0, 0, 0, 0])));
        assert!(even.membership(&ProjLine::from_i64(&[1, 0, 1, 0, 1, 0], &[0, 1, 0, -2, 0, 1])));
        assert!(matches!(
            even.point_from_i64(&[1, 0, 0, 0, 0, 0], &[0, 1, 0, 0, 0, 0]),
            Err(Error::NotMember(_))
        ));
    }

    #[test]
    fn classify_examples() {
        let even = SectionSpace::g15();
        let c = |s: &SectionSpace, p: &[i64], q: &[i64]| s.classify_orbit(&s.point_from_i64(p, q).unwrap()).unwrap();
        assert_eq!(c(&even, &[1, 0, 0, 0, 0, 0], &[0, 0, 1, 0, 0, 0]), OrbitLabel::O1);
        assert_eq!(c(&even, &[1, 0, 0, 0, 0, 0], &[0, 0, 1, 0, 1, 0]), OrbitLabel::O2);
        assert_eq!(c(&even, &[0, 0, 1, 0, 1, 0], &[1, 0, 0, 0, 1, 0]), OrbitLabel::O3);
        assert_eq!(c(&even, &[1, 0, 1, 0, 1, 0], &[0, 1, 0, -2, 0, 1]), OrbitLabel::O4);
        let odd = SectionSpace::g14();
        assert_eq!(c(&odd, &[0, 0, 1, 0, 0], &[0, 0, 0, 1, 0]), OrbitLabel::O1);
        assert_eq!(c(&odd, &[0, 0, 1, 0, 0], &[0, 0, 0, 0, 1]), OrbitLabel::O2);
        assert_eq!(c(&odd, &[0, 0, 1, 0, 0], &[0, 1, 2, 3, 4]), OrbitLabel::O3);
        assert_eq!(c(&odd, &[1, 0, 0, 0, 1], &[0, 1, 0, 1, 0]), OrbitLabel::O4);
    }

    #[test]
    fn lemma_examples() {
        let even = SectionSpace::g15();
        let o3 = even.point_from_i64(&[0, 0, 1, 0, 1, 0], &[1, 0, 0, 0, 1, 0]).unwrap();
        let o4 = even.point_from_i64(&[1, 0, 1, 0, 1, 0], &[0, 1, 0, -2, 0, 1]).unwrap();
        assert!(even.check_meets_all_v(&o3).unwrap());
        assert!(even.check_meets_all_v(&o4).unwrap());
        // outside the section a line may meet V₁ alone
        let l = ProjLine::from_i64(&[0, 0, 1, 0, 1, 0], &[1, 1, 1, 1, 1, 1]);
        assert!(!even.membership(&l));
        assert!(!even.check_meets_all_v(&SectionPoint { line: l }).unwrap());
    }

    #[test]
    fn samplers_hit_every_orbit() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for s in [SectionSpace::g14(), SectionSpace::g15()] {
            for label in OrbitLabel::ALL {
                for _ in 0..10 {
                    let x = s.sample_orbit(label, &mut rng).unwrap();
                    assert!(s.membership(x.line()));
                    assert_eq!(s.classify_orbit(&x).unwrap(), label);
                }
            }
        }
    }

    #[test]
    fn orbit_label_strings() {
        for l in OrbitLabel::ALL {
            assert_eq!(l.as_str().parse::<OrbitLabel>().unwrap(), l);
            assert_eq!(serde_json::to_string(&l).unwrap(), format!("\"{l}\""));
        }
        assert!("o5".parse::<OrbitLabel>().is_err());
    }
}
