//! The plane of lines swept by a horizontal curve of `Z_x`, its Schubert class,
//! and the resulting negative value of `ch₂` on it.

use num_traits::{Signed, Zero};
use rand::Rng;

use crate::algebra::{format_rational, Rational};
use crate::error::{Error, Result};
use crate::lines::{decompose, ComponentKind, Support, ZxReport};
use crate::projective::{random_nonzero_vector, LinSubspace, DEFAULT_HEIGHT};
use crate::schubert::{ch2_pair, TwoRowPartition};
use crate::section::{OrbitLabel, SectionPoint, SectionSpace};

/// Redraw budget for non-transverse flags.
pub const MAX_FLAG_REDRAWS: usize = 10;
/// Random lines of the plane checked for membership.
pub const PLANE_MEMBERSHIP_SAMPLES: usize = 100;

/// `S = { [l′] : l′ ⊂ Π }` for a plane `Π` through the line of `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweptSurface {
    pub plane: LinSubspace,
    /// The horizontal direction `v₀` (an ambient vector) that spans `Π` with `p, q`.
    pub ruling: Vec<Rational>,
    pub orbit: OrbitLabel,
}

impl SweptSurface {
    pub fn ambient(&self) -> usize {
        self.plane.ambient()
    }
}

/// Sweep along the first basis vector of the horizontal component.
pub fn sweep_surface(s: &SectionSpace, x: &SectionPoint, report: &ZxReport) -> Result<SweptSurface> {
    sweep_surface_with_ruling(s, x, report, 0)
}

/// Sweep along basis vector `index` of the horizontal component's support.
pub fn sweep_surface_with_ruling(
    s: &SectionSpace,
    x: &SectionPoint,
    report: &ZxReport,
    index: usize,
) -> Result<SweptSurface> {
    let kernel = report
        .components
        .iter()
        .find_map(|c| match (&c.kind, &c.support) {
            (ComponentKind::Horizontal, Support::Constant { kernel }) => Some(kernel),
            _ => None,
        })
        .ok_or_else(|| Error::Precondition(format!("Z_x of {} has no horizontal component", report.orbit)))?;
    if index >= kernel.rows() {
        return Err(Error::InvalidInput(format!(
            "ruling index {index} out of range for a {}-dimensional support",
            kernel.rows()
        )));
    }
    let ruling = report.frame.vector(kernel.row(index));
    let plane = LinSubspace::from_vectors(s.ambient() + 1, &[x.p().to_vec(), x.q().to_vec(), ruling.clone()])?;
    if plane.dim() != 2 {
        return Err(Error::InvariantViolation("swept span is not a plane".into()));
    }
    // every line of the plane lies in the section iff both forms vanish on it
    let basis = plane.basis_vectors();
    for m in [s.pencil().a(), s.pencil().b()] {
        for i in 0..3 {
            for j in i + 1..3 {
                if !m.bilinear(&basis[i], &basis[j]).is_zero() {
                    return Err(Error::InvariantViolation("swept plane is not isotropic".into()));
                }
            }
        }
    }
    Ok(SweptSurface {
        plane,
        ruling,
        orbit: report.orbit,
    })
}

/// Checks `samples` random lines of the plane for membership.
pub fn plane_lines_are_members(s: &SectionSpace, surface: &SweptSurface, samples: usize, rng: &mut impl Rng) -> bool {
    (0..samples).all(|_| s.membership(&surface.plane.random_line(rng, DEFAULT_HEIGHT)))
}

/// `(S·σ₂, S·σ₁,₁)` against a given `(N−3)`-plane and hyperplane; `None` when not transverse.
pub fn count_against_flag(surface: &SweptSurface, plane: &LinSubspace, hyperplane: &LinSubspace) -> Result<Option<(u32, u32)>> {
    let n = surface.ambient();
    if plane.dim() + 3 != n || hyperplane.dim() + 1 != n {
        return Err(Error::Dimension("flag of the wrong dimensions".into()));
    }
    // lines of Π meeting the (N−3)-plane: none if disjoint, a pencil otherwise
    let sigma2 = match surface.plane.meet(plane)? {
        None => 0,
        Some(_) => return Ok(None),
    };
    // lines of Π inside the hyperplane: the single line Π ∩ H
    let sigma11 = match surface.plane.meet(hyperplane)? {
        Some(m) if m.dim() == 1 => 1,
        _ => return Ok(None),
    };
    Ok(Some((sigma2, sigma11)))
}

fn random_subspace(rng: &mut impl Rng, ambient: usize, dim: usize) -> Result<LinSubspace> {
    loop {
        let gens: Vec<Vec<Rational>> = (0..=dim)
            .map(|_| random_nonzero_vector(rng, ambient + 1, DEFAULT_HEIGHT))
            .collect();
        let sub = LinSubspace::from_vectors(ambient + 1, &gens)?;
        if sub.dim() == dim {
            return Ok(sub);
        }
    }
}

/// `(S·σ₂, S·σ₁,₁)` against a random flag, redrawing non-transverse ones.
pub fn enumerative_class(s: &SectionSpace, surface: &SweptSurface, rng: &mut impl Rng) -> Result<(u32, u32)> {
    let n = s.ambient();
    for _ in 0..MAX_FLAG_REDRAWS {
        let plane = random_subspace(rng, n, n - 3)?;
        let hyperplane = random_subspace(rng, n, n - 1)?;
        if let Some(c) = count_against_flag(surface, &plane, &hyperplane)? {
            return Ok(c);
        }
    }
    Err(Error::NonTransverse {
        what: "flag against the swept plane".into(),
        redraws: MAX_FLAG_REDRAWS,
    })
}

/// `S·σ₂ = a`, `S·σ₁,₁ = b` means `[S] = a·σ₂* + b·σ₁,₁*`.
pub fn surface_class(n: usize, counts: (u32, u32)) -> Vec<(TwoRowPartition, u32)> {
    let sigma2 = TwoRowPartition { a: 2, b: 0, n };
    let sigma11 = TwoRowPartition { a: 1, b: 1, n };
    [(sigma2.dual(), counts.0), (sigma11.dual(), counts.1)]
        .into_iter()
        .filter(|(_, c)| *c > 0)
        .collect()
}

#[derive(Clone, Debug)]
pub struct CorollaryOutcome {
    pub ambient: usize,
    pub point: SectionPoint,
    pub surface: SweptSurface,
    pub counts: (u32, u32),
    pub class: Vec<(TwoRowPartition, u32)>,
    pub value: Rational,
}

impl CorollaryOutcome {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "N": self.ambient,
            "point": self.point.to_string(),
            "plane": self.surface.plane.basis_vectors().iter()
                .map(|r| r.iter().map(format_rational).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "counts": [self.counts.0, self.counts.1],
            "class": self.class.iter().map(|(t, c)| format!("{c}·{t}")).collect::<Vec<_>>(),
            "ch2": format_rational(&self.value),
        })
    }
}

/// Sample `x ∈ O1`, decompose, sweep, count and pair with `ch₂`; the value must be negative.
pub fn corollary_check(s: &SectionSpace, rng: &mut impl Rng) -> Result<CorollaryOutcome> {
    let n = s.ambient();
    let x = s.sample_orbit(OrbitLabel::O1, rng)?;
    let report = decompose(s, &x)?;
    let surface = sweep_surface(s, &x, &report)?;
    if !plane_lines_are_members(s, &surface, PLANE_MEMBERSHIP_SAMPLES, rng) {
        return Err(Error::InvariantViolation("a line of the swept plane is not a member".into()));
    }
    let counts = enumerative_class(s, &surface, rng)?;
    let class = surface_class(n, counts);
    let mut value = Rational::zero();
    for (t, c) in &class {
        value += ch2_pair(n, *t)? * Rational::from_integer((*c).into());
    }
    if !value.is_negative() {
        return Err(Error::InvariantViolation(format!(
            "ch₂·[S] = {} is not negative",
            format_rational(&value)
        )));
    }
    Ok(CorollaryOutcome {
        ambient: n,
        point: x,
        surface,
        counts,
        class,
        value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ratio;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn odd_o1_sweeps_the_center_plane() {
        let s = SectionSpace::g14();
        let x = s.point_from_i64(&[0, 0, 1, 0, 0], &[0, 0, 0, 1, 0]).unwrap();
        let r = decompose(&s, &x).unwrap();
        let surf = sweep_surface(&s, &x, &r).unwrap();
        assert_eq!(surf.plane, LinSubspace::from_i64(&[&[0, 0, 1, 0, 0], &[0, 0, 0, 1, 0], &[0, 0, 0, 0, 1]]));
        assert_eq!(&surf.plane, s.center_plane().unwrap());
    }

    #[test]
    fn even_o1_rulings() {
        let s = SectionSpace::g15();
        let x = s.point_from_i64(&[1, 0, 0, 0, 0, 0], &[0, 0, 1, 0, 0, 0]).unwrap();
        let r = decompose(&s, &x).unwrap();
        let a = sweep_surface_with_ruling(&s, &x, &r, 0).unwrap();
        let b = sweep_surface_with_ruling(&s, &x, &r, 1).unwrap();
        assert_eq!(a.plane, LinSubspace::from_i64(&[&[1, 0, 0, 0, 0, 0], &[0, 0, 1, 0, 0, 0], &[0, 0, 0, 0, 1, 0]]));
        assert_eq!(b.plane, LinSubspace::from_i64(&[&[1, 0, 0, 0, 0, 0], &[0, 0, 1, 0, 0, 0], &[0, 0, 0, 0, 0, 1]]));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(enumerative_class(&s, &a, &mut rng).unwrap(), enumerative_class(&s, &b, &mut rng).unwrap());
        assert!(sweep_surface_with_ruling(&s, &x, &r, 2).is_err());
    }

    #[test]
    fn no_horizontal_component_is_an_error() {
        let s = SectionSpace::g14();
        let x = s.point_from_i64(&[1, 0, 0, 0, 1], &[0, 1, 0, 1, 0]).unwrap();
        let r = decompose(&s, &x).unwrap();
        assert!(matches!(sweep_surface(&s, &x, &r), Err(Error::Precondition(_))));
    }

    #[test]
    fn swept_plane_lines_are_members_and_counts_are_stable() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for s in [SectionSpace::g14(), SectionSpace::g15()] {
            let x = s.sample_orbit(OrbitLabel::O1, &mut rng).unwrap();
            let r = decompose(&s, &x).unwrap();
            let surf = sweep_surface(&s, &x, &r).unwrap();
            assert!(plane_lines_are_members(&s, &surf, PLANE_MEMBERSHIP_SAMPLES, &mut rng));
            for _ in 0..10 {
                assert_eq!(enumerative_class(&s, &surf, &mut rng).unwrap(), (0, 1));
            }
        }
    }

    #[test]
    fn degenerate_flag_is_rejected() {
        let s = SectionSpace::g14();
        let x = s.point_from_i64(&[0, 0, 1, 0, 0], &[0, 0, 0, 1, 0]).unwrap();
        let r = decompose(&s, &x).unwrap();
        let surf = sweep_surface(&s, &x, &r).unwrap();
        // a line through a point of Π, and a hyperplane containing Π
        let through = LinSubspace::from_i64(&[&[0, 0, 1, 0, 0], &[1, 0, 0, 0, 0]]);
        let generic_h = LinSubspace::from_i64(&[&[1, 0, 0, 0, 0], &[0, 1, 0, 0, 0], &[0, 0, 1, 0, 0], &[0, 0, 0, 1, 1]]);
        assert_eq!(count_against_flag(&surf, &through, &generic_h).unwrap(), None);
        let away = LinSubspace::from_i64(&[&[1, 0, 0, 0, 0], &[0, 1, 0, 0, 0]]);
        let containing = LinSubspace::from_i64(&[&[1, 0, 0, 0, 0], &[0, 0, 1, 0, 0], &[0, 0, 0, 1, 0], &[0, 0, 0, 0, 1]]);
        assert_eq!(count_against_flag(&surf, &away, &containing).unwrap(), None);
        assert_eq!(count_against_flag(&surf, &away, &generic_h).unwrap(), Some((0, 1)));
    }

    #[test]
    fn corollary_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let odd = corollary_check(&SectionSpace::g14(), &mut rng).unwrap();
        assert_eq!(odd.value, ratio(-1, 2));
        assert_eq!(odd.class, vec![(TwoRowPartition { a: 2, b: 2, n: 4 }, 1)]);
        let even = corollary_check(&SectionSpace::g15(), &mut rng).unwrap();
        assert_eq!(even.value, ratio(-1, 1));
        assert_eq!(even.class, vec![(TwoRowPartition { a: 3, b: 3, n: 5 }, 1)]);
    }
}
