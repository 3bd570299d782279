//! Property tests for the algebraic and geometric invariants.

use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;

use grasslines::algebra::{pfaffian, rat, ratio, BinaryForm, RatMatrix, Rational};
use grasslines::aut::{is_automorphism, sample_automorphism, transport_line};
use grasslines::fano::{enumerative_class, plane_lines_are_members, sweep_surface};
use grasslines::lines::{
    build_system, component_point, decompose, decompose_in_frame, ComplementFrame, ComponentKind, Support,
};
use grasslines::pencil::AntisymPencil;
use grasslines::projective::{random_invertible, random_nonzero_vector, span, LinSubspace, ProjPoint, DEFAULT_HEIGHT};
use grasslines::schubert::{ch2_pair, hyperplane_pairing, pairing_degree, plucker, TwoRowPartition};
use grasslines::section::{OrbitLabel, SectionSpace};
use grasslines::seeded_rng;

fn small_form(max_degree: usize) -> impl Strategy<Value = BinaryForm> {
    (0..=max_degree)
        .prop_flat_map(|d| prop::collection::vec(-5i64..=5, d + 1))
        .prop_map(|c| BinaryForm::from_i64(&c))
        .prop_filter("nonzero", |f| !f.is_zero())
}

fn antisymmetric(n: usize, entries: &[i64]) -> RatMatrix {
    let mut m = RatMatrix::zeros(n, n);
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            m[(i, j)] = rat(entries[k]);
            m[(j, i)] = rat(-entries[k]);
            k += 1;
        }
    }
    m
}

fn space(odd: bool) -> SectionSpace {
    if odd {
        SectionSpace::g14()
    } else {
        SectionSpace::g15()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn pfaffian_squared_is_determinant(half in 1usize..=3, entries in prop::collection::vec(-9i64..=9, 15)) {
        let m = antisymmetric(2 * half, &entries);
        let pf = pfaffian(&m).unwrap();
        prop_assert_eq!(&pf * &pf, m.det().unwrap());
    }

    #[test]
    fn gcd_divides_and_leaves_coprime_quotients(h in small_form(2), a in small_form(2), b in small_form(2)) {
        let f = &h * &a;
        let g = &h * &b;
        let d = f.gcd(&g);
        let qf = f.div_exact(&d).unwrap();
        let qg = g.div_exact(&d).unwrap();
        prop_assert!(qf.gcd(&qg).is_constant());
        prop_assert!(d.div_exact(&h.normalized()).is_ok());
    }

    #[test]
    fn kernel_and_rank_nullity(rows in 1usize..=4, cols in 1usize..=6, seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let entries: Vec<Vec<Rational>> = (0..rows)
            .map(|_| (0..cols).map(|_| rat(rng.gen_range(-3..=3))).collect())
            .collect();
        let m = RatMatrix::from_row_slices(cols, &entries);
        let k = m.kernel();
        prop_assert_eq!(k.rows() + m.rank(), cols);
        for v in k.row_vecs() {
            prop_assert!(m.mul_vec(&v).iter().all(Zero::is_zero));
        }
        prop_assert_eq!(k.rank(), k.rows());
    }

    #[test]
    fn root_multiplicities_account_for_degree(
        roots in prop::collection::vec((-4i64..=4, 0i64..=3), 0..4),
        extra in small_form(2),
    ) {
        let mut f = extra;
        for (a, b) in &roots {
            if (*a, *b) != (0, 0) {
                f = &f * &BinaryForm::vanishing_at(&rat(*a), &rat(*b));
            }
        }
        let dec = f.rational_roots().unwrap();
        let total: usize = dec.roots.iter().map(|r| r.multiplicity).sum();
        prop_assert_eq!(total + dec.residual.degree(), f.degree());
        for r in &dec.roots {
            prop_assert_eq!(f.multiplicity_at(&r.point.coords()[0], &r.point.coords()[1]), r.multiplicity);
        }
    }

    #[test]
    fn normalize_round_trips_random_conjugates(seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let std = AntisymPencil::normal_form_g15();
        let conj = std.congruent(&random_invertible(&mut rng, 6, 4)).unwrap();
        let n = conj.normalize_even().unwrap();
        prop_assert!(n.pencil.is_even_normal_form());
        let lines = conj.exceptional_lines().unwrap();
        for i in 0..3 {
            for j in i + 1..3 {
                prop_assert!(lines[i].kernel.meet(&lines[j].kernel).unwrap().is_none());
            }
        }
    }

    #[test]
    fn center_curve_is_a_conic_in_its_plane(seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let p = AntisymPencil::normal_form_g14().congruent(&random_invertible(&mut rng, 5, 3)).unwrap();
        let plane = p.center_plane().unwrap();
        let mut pts = Vec::new();
        while pts.len() < 3 {
            let t = ProjPoint::random(&mut rng, 1, DEFAULT_HEIGHT);
            if pts.iter().any(|(u, _): &(ProjPoint, Vec<Rational>)| *u == t) {
                continue;
            }
            let c = p.center_curve_point(&t.coords()[0], &t.coords()[1]).unwrap();
            prop_assert!(plane.contains_point(&c));
            let h = p.hyperplane_curve_point(&t.coords()[0], &t.coords()[1]).unwrap();
            prop_assert!(h.contains_point(&c));
            pts.push((t, c.coords().to_vec()));
        }
        let rows: Vec<Vec<Rational>> = pts.into_iter().map(|(_, c)| c).collect();
        prop_assert_eq!(RatMatrix::from_row_slices(5, &rows).rank(), 3);
    }

    #[test]
    fn sampled_automorphisms_compose(odd in any::<bool>(), seed in any::<u64>()) {
        let s = space(odd);
        let mut rng = seeded_rng(seed);
        let g = sample_automorphism(&s, &mut rng).unwrap();
        let h = sample_automorphism(&s, &mut rng).unwrap();
        prop_assert!(is_automorphism(&s, g.compose(&h).matrix()).unwrap());
        let scaled = g.matrix().scale(&ratio(-7, 3));
        prop_assert!(is_automorphism(&s, &scaled).unwrap());
    }

    #[test]
    fn transporters_are_checked_automorphisms(orbit in 0usize..4, seed in any::<u64>()) {
        let s = SectionSpace::g15();
        let mut rng = seeded_rng(seed);
        let label = OrbitLabel::ALL[orbit];
        let x = s.sample_orbit(label, &mut rng).unwrap();
        let y = s.sample_orbit(label, &mut rng).unwrap();
        let g = transport_line(&s, &x, &y).unwrap();
        prop_assert!(is_automorphism(&s, g.matrix()).unwrap());
        let image = g.apply(&s, &x).unwrap();
        prop_assert_eq!(image.line().subspace(), y.line().subspace());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn meet_and_span_dimensions(n in 3usize..=5, a in 0usize..=3, b in 0usize..=3, shared in 0usize..=2, seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let a = a.min(n - 1);
        let b = b.min(n - 1);
        let common: Vec<Vec<Rational>> = (0..shared.min(a).min(b)).map(|_| random_nonzero_vector(&mut rng, n + 1, 5)).collect();
        let mut gen = |k: usize| {
            let mut v = common.clone();
            while v.len() <= k {
                v.push(random_nonzero_vector(&mut rng, n + 1, 5));
            }
            LinSubspace::from_vectors(n + 1, &v).unwrap()
        };
        let s = gen(a);
        let t = gen(b);
        let joined = span(&[&s, &t]).unwrap();
        if let Some(m) = s.meet(&t).unwrap() {
            prop_assert_eq!(m.dim() + joined.dim(), s.dim() + t.dim());
            prop_assert!(s.contains(&m) && t.contains(&m));
        } else {
            prop_assert_eq!(joined.dim(), s.dim() + t.dim() + 1);
        }
    }

    #[test]
    fn subspaces_compare_by_rref(n in 2usize..=5, k in 0usize..=2, seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let k = k.min(n - 1);
        let s = loop {
            let v: Vec<Vec<Rational>> = (0..=k).map(|_| random_nonzero_vector(&mut rng, n + 1, 5)).collect();
            let s = LinSubspace::from_vectors(n + 1, &v).unwrap();
            if s.dim() == k {
                break s;
            }
        };
        let g = random_invertible(&mut rng, k + 1, 3);
        let rebased = &g * s.basis();
        prop_assert_eq!(LinSubspace::from_generators(&rebased).unwrap(), s);
    }

    #[test]
    fn plucker_relations_vanish(n in 3usize..=5, seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let line = LinSubspace::full(n).random_line(&mut rng, DEFAULT_HEIGHT);
        prop_assert!(plucker(&line).relations().iter().all(Zero::is_zero));
    }

    #[test]
    fn pairing_is_linear_in_the_pencil(odd in any::<bool>(), l in -5i64..=5, m in -5i64..=5, seed in any::<u64>()) {
        let s = space(odd);
        let mut rng = seeded_rng(seed);
        let line = if seed % 2 == 0 {
            s.sample_member(&mut rng).unwrap().line().clone()
        } else {
            LinSubspace::full(s.ambient()).random_line(&mut rng, DEFAULT_HEIGHT)
        };
        let pa = hyperplane_pairing(&line, s.pencil().a()).unwrap();
        let pb = hyperplane_pairing(&line, s.pencil().b()).unwrap();
        let member = s.pencil().member(&rat(l), &rat(m));
        prop_assert_eq!(hyperplane_pairing(&line, &member).unwrap(), rat(l) * &pa - rat(m) * &pb);
        prop_assert_eq!(pa.is_zero() && pb.is_zero(), s.membership(&line));
    }

    #[test]
    fn lemma_on_v_spans(seed in any::<u64>()) {
        let s = SectionSpace::g15();
        let mut rng = seeded_rng(seed);
        let x = s.sample_member(&mut rng).unwrap();
        prop_assert!(s.check_meets_all_v(&x).unwrap());
        let lines = s.exceptional_lines().unwrap();
        let met = lines.iter().filter(|l| x.line().subspace().meet(l).unwrap().is_some()).count();
        prop_assert!(met < 3);
        for l in lines {
            prop_assert!(!s.membership(&grasslines::projective::ProjLine::new(l.clone()).unwrap()));
        }
    }

    #[test]
    fn odd_members_meet_the_center_plane_on_the_conic(seed in any::<u64>()) {
        let s = SectionSpace::g14();
        let mut rng = seeded_rng(seed);
        let plane = s.center_plane().unwrap().clone();
        let p = plane.random_point(&mut rng, DEFAULT_HEIGHT);
        let q = s.solution_space(p.coords()).unwrap().random_point(&mut rng, DEFAULT_HEIGHT);
        if let Ok(line) = grasslines::projective::ProjLine::through(&p, &q) {
            let x = s.point(line).unwrap();
            prop_assert!(s.classify_orbit(&x).is_ok());
            if !plane.contains(x.line().subspace()) {
                prop_assert!(s.on_center_conic(&p).unwrap());
            }
        }
    }

    #[test]
    fn classification_invariant_under_automorphisms(odd in any::<bool>(), seed in any::<u64>()) {
        let s = space(odd);
        let mut rng = seeded_rng(seed);
        let g = sample_automorphism(&s, &mut rng).unwrap();
        let x = s.sample_member(&mut rng).unwrap();
        prop_assert_eq!(s.classify_orbit(&g.apply(&s, &x).unwrap()).unwrap(), s.classify_orbit(&x).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn schubert_pairing_symmetry_and_duality(n in 3usize..=6) {
        let all = TwoRowPartition::all(n);
        for s in &all {
            prop_assert_eq!(s.dual().dual(), *s);
            for t in &all {
                if s.codim() + t.codim() == 2 * (n - 1) {
                    prop_assert_eq!(pairing_degree(*s, *t).unwrap(), pairing_degree(*t, *s).unwrap());
                }
            }
        }
        if n == 4 || n == 5 {
            let s11 = TwoRowPartition::new(1, 1, n).unwrap();
            prop_assert_eq!(ch2_pair(n, s11.dual()).unwrap(), ratio(-(n as i64 - 3), 2));
        }
    }

    #[test]
    fn class_conservation_and_point_soundness(odd in any::<bool>(), orbit in 0usize..4, seed in any::<u64>()) {
        let s = space(odd);
        let mut rng = seeded_rng(seed);
        let x = s.sample_orbit(OrbitLabel::ALL[orbit], &mut rng).unwrap();
        let r = decompose(&s, &x).unwrap();
        prop_assert_eq!(r.total_class, (2, 1));
        for c in &r.components {
            for _ in 0..20 {
                if let Some((a, b, t)) = component_point(&r.system, c, &mut rng) {
                    prop_assert!(r.system.satisfied(&a, &b, &t));
                }
            }
            if let (ComponentKind::Vertical, Support::Fiber { parameter, .. }) = (c.kind, &c.support) {
                let (r0, s0) = (&parameter.coords()[0], &parameter.coords()[1]);
                prop_assert_eq!(r.minor_gcd.multiplicity_at(r0, s0), c.multiplicity as usize);
            }
        }
        // a random point of P¹ × P^{N−2} is not on Z_x
        let mut misses = 0;
        for _ in 0..20 {
            let rs = ProjPoint::random(&mut rng, 1, DEFAULT_HEIGHT);
            let t = random_nonzero_vector(&mut rng, r.system.width(), DEFAULT_HEIGHT);
            if !r.system.satisfied(&rs.coords()[0], &rs.coords()[1], &t) {
                misses += 1;
            }
        }
        prop_assert!(misses >= 18);
    }

    #[test]
    fn stacked_kernel_contains_the_line(odd in any::<bool>(), seed in any::<u64>()) {
        let s = space(odd);
        let mut rng = seeded_rng(seed);
        let x = s.sample_member(&mut rng).unwrap();
        let rows = vec![
            s.pencil().a().vec_mul(x.p()),
            s.pencil().b().vec_mul(x.p()),
            s.pencil().a().vec_mul(x.q()),
            s.pencil().b().vec_mul(x.q()),
        ];
        let k = LinSubspace::from_equations(&RatMatrix::from_row_slices(s.ambient() + 1, &rows)).unwrap();
        prop_assert!(k.contains(x.line().subspace()));
    }

    #[test]
    fn even_quadric_rank_by_orbit(orbit in 0usize..4, seed in any::<u64>()) {
        let s = SectionSpace::g15();
        let mut rng = seeded_rng(seed);
        let label = OrbitLabel::ALL[orbit];
        let x = s.sample_orbit(label, &mut rng).unwrap();
        let r = decompose(&s, &x).unwrap();
        let rank = r.quadric.as_ref().unwrap().matrix().rank();
        prop_assert_eq!(rank, [2, 2, 3, 4][orbit]);
        let verticals = r.count(ComponentKind::Vertical);
        prop_assert_eq!(verticals, [2, 1, 0, 0][orbit]);
    }

    #[test]
    fn classes_do_not_depend_on_the_frame(odd in any::<bool>(), orbit in 0usize..4, seed in any::<u64>()) {
        let s = space(odd);
        let mut rng = seeded_rng(seed);
        let x = s.sample_orbit(OrbitLabel::ALL[orbit], &mut rng).unwrap();
        let base = decompose(&s, &x).unwrap();
        let n = s.ambient() + 1;
        let frame = loop {
            let c: Vec<Vec<Rational>> = (0..n - 2).map(|_| random_nonzero_vector(&mut rng, n, 4)).collect();
            if let Ok(f) = ComplementFrame::with_complement(x.p(), x.q(), &c) {
                break f;
            }
        };
        let other = decompose_in_frame(&s, &x, frame, &mut rng).unwrap();
        let mut a: Vec<_> = base.components.iter().map(|c| (c.kind as u8, c.class, c.multiplicity)).collect();
        let mut b: Vec<_> = other.components.iter().map(|c| (c.kind as u8, c.class, c.multiplicity)).collect();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
        prop_assert_eq!(base.signature, other.signature);
        prop_assert_eq!(base.minor_gcd.degree(), other.minor_gcd.degree());
        let (_, sys) = build_system(&s, &x);
        prop_assert_eq!(sys, base.system);
    }

    #[test]
    fn swept_planes_lie_in_the_section(odd in any::<bool>(), seed in any::<u64>()) {
        let s = space(odd);
        let mut rng = seeded_rng(seed);
        let x = s.sample_orbit(OrbitLabel::O1, &mut rng).unwrap();
        let r = decompose(&s, &x).unwrap();
        let surface = sweep_surface(&s, &x, &r).unwrap();
        prop_assert!(surface.plane.contains(x.line().subspace()));
        prop_assert!(plane_lines_are_members(&s, &surface, 100, &mut rng));
        for _ in 0..10 {
            prop_assert_eq!(enumerative_class(&s, &surface, &mut rng).unwrap(), (0, 1));
        }
    }
}
