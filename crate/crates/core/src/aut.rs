//! Automorphisms of the section inside PGL(N+1): the membership test
//! `ᵗT·A·T, ᵗT·B·T ∈ span{A, B}`, random elements of the known shapes
//! (filtered through that test), and constructive transporters for even
//! sections in normal form.

use std::fmt;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::rational::primitive_integer_vector;
use crate::algebra::{is_zero_vec, rat, ratio, RatMatrix, Rational};
use crate::error::{Error, Result};
use crate::pencil::Parity;
use crate::projective::{ProjLine, ProjPoint};
use crate::section::{OrbitLabel, SectionPoint, SectionSpace};

/// Candidates drawn per sampler call before giving up.
pub const MAX_SAMPLER_CANDIDATES: usize = 100;

/// An invertible matrix up to a nonzero scalar, stored with coprime integer
/// entries and first nonzero entry positive. Acts on points by `p ↦ T·pᵀ`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjectiveMap {
    matrix: RatMatrix,
}

impl ProjectiveMap {
    pub fn new(matrix: RatMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension("projective map must be square".into()));
        }
        if matrix.det()?.is_zero() {
            return Err(Error::Singular("projective map is not invertible".into()));
        }
        let n = matrix.cols();
        let flat: Vec<Rational> = matrix.row_vecs().concat();
        let prim = primitive_integer_vector(&flat).expect("invertible matrix is nonzero");
        let rows: Vec<Vec<Rational>> = prim.chunks(n).map(|c| c.to_vec()).collect();
        Ok(ProjectiveMap {
            matrix: RatMatrix::from_row_slices(n, &rows),
        })
    }

    pub fn identity(n: usize) -> Self {
        ProjectiveMap {
            matrix: RatMatrix::identity(n),
        }
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &ProjectiveMap) -> ProjectiveMap {
        Self::new(&self.matrix * &other.matrix).expect("product of invertible maps")
    }

    pub fn inverse(&self) -> ProjectiveMap {
        Self::new(self.matrix.inverse().expect("invertible")).expect("invertible")
    }

    pub fn apply_vector(&self, v: &[Rational]) -> Vec<Rational> {
        self.matrix.mul_vec(v)
    }

    pub fn apply_point(&self, p: &ProjPoint) -> ProjPoint {
        ProjPoint::new(self.apply_vector(p.coords())).expect("invertible map")
    }

    pub fn apply_line(&self, l: &ProjLine) -> ProjLine {
        ProjLine::from_vectors(&self.apply_vector(l.p()), &self.apply_vector(l.q())).expect("invertible map")
    }

    /// Image of a section point; membership of the image is rechecked.
    pub fn apply(&self, s: &SectionSpace, x: &SectionPoint) -> Result<SectionPoint> {
        s.point(self.apply_line(x.line()))
    }
}

impl fmt::Debug for ProjectiveMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ProjectiveMap{:?}", self.matrix)
    }
}

fn in_span(a: &RatMatrix, b: &RatMatrix, x: &RatMatrix) -> bool {
    let n = a.cols() * a.rows();
    let flat = |m: &RatMatrix| m.row_vecs().concat();
    RatMatrix::from_row_slices(n, &[flat(a), flat(b), flat(x)]).rank() <= 2
}

/// Whether `T` preserves the section: `ᵗT·A·T` and `ᵗT·B·T` lie in `span{A, B}`.
pub fn is_automorphism(s: &SectionSpace, t: &RatMatrix) -> Result<bool> {
    let (a, b) = (s.pencil().a(), s.pencil().b());
    if t.rows() != a.rows() || t.cols() != a.cols() {
        return Err(Error::Dimension(format!(
            "map of size {}×{} on P^{}",
            t.rows(),
            t.cols(),
            s.ambient()
        )));
    }
    if t.det()?.is_zero() {
        return Err(Error::Singular("automorphism candidate is singular".into()));
    }
    let tt = t.transpose();
    let ta = &(&tt * a) * t;
    let tb = &(&tt * b) * t;
    Ok(in_span(a, b, &ta) && in_span(a, b, &tb))
}

fn require_even_normal(s: &SectionSpace) -> Result<()> {
    if !s.pencil().is_even_normal_form() {
        return Err(Error::Precondition("needs the even section in normal form".into()));
    }
    Ok(())
}

fn require_odd_normal(s: &SectionSpace) -> Result<()> {
    if !s.pencil().is_odd_normal_form() {
        return Err(Error::Precondition("needs the odd section in normal form".into()));
    }
    Ok(())
}

// ---- 2×2 helpers ----

fn mat2(a: Rational, b: Rational, c: Rational, d: Rational) -> RatMatrix {
    RatMatrix::from_rows(vec![vec![a, b], vec![c, d]]).expect("2×2")
}

/// Determinant-one matrix with first column `(a, b)`; second column `(0, 1/a)`
/// when `a ≠ 0`, else `(−1/b, 0)`.
pub fn det_one_completion(a: &Rational, b: &Rational) -> Result<RatMatrix> {
    if !a.is_zero() {
        Ok(mat2(a.clone(), Rational::zero(), b.clone(), a.recip()))
    } else if !b.is_zero() {
        Ok(mat2(a.clone(), -b.recip(), b.clone(), Rational::zero()))
    } else {
        Err(Error::Precondition("cannot complete a zero column".into()))
    }
}

/// An element of SL(2) sending `u` to `v`.
pub fn sl2_mapping(u: &[Rational], v: &[Rational]) -> Result<RatMatrix> {
    let mu = det_one_completion(&u[0], &u[1])?;
    let mv = det_one_completion(&v[0], &v[1])?;
    Ok(&mv * &mu.inverse()?)
}

fn block(v: &[Rational], i: usize) -> Vec<Rational> {
    v[2 * i..2 * i + 2].to_vec()
}

fn block_diag3(blocks: &[RatMatrix]) -> RatMatrix {
    RatMatrix::block_diagonal(blocks)
}

/// `P_σ`: block `i` goes to block `σ(i)`.
pub fn block_permutation(sigma: [usize; 3]) -> RatMatrix {
    let mut p = RatMatrix::zeros(6, 6);
    for (i, &si) in sigma.iter().enumerate() {
        p[(2 * si, 2 * i)] = Rational::one();
        p[(2 * si + 1, 2 * i + 1)] = Rational::one();
    }
    p
}

/// `ᵗM·X·M` block coefficients for block-diagonal `X = diag(x₁J, x₂J, x₃J)`.
fn block_coefficients(x: &RatMatrix) -> [Rational; 3] {
    [x[(1, 0)].clone(), x[(3, 2)].clone(), x[(5, 4)].clone()]
}

/// Determinants `d` making `P_σ·diag(t₁,t₂,t₃)` with `det tᵢ = dᵢ` an
/// automorphism of the even normal form, or `None` if no rational choice exists.
pub fn permutation_compensation(sigma: [usize; 3]) -> Option<[Rational; 3]> {
    let s = SectionSpace::g15();
    let p = block_permutation(sigma);
    let pt = p.transpose();
    let a = block_coefficients(&(&(&pt * s.pencil().a()) * &p));
    let b = block_coefficients(&(&(&pt * s.pencil().b()) * &p));
    // the triple (x₁,x₂,x₃) is in span{A,B} iff x₁ − 2x₂ + x₃ = 0
    let w = [rat(1), rat(-2), rat(1)];
    let rows = vec![
        (0..3).map(|i| &w[i] * &a[i]).collect::<Vec<_>>(),
        (0..3).map(|i| &w[i] * &b[i]).collect::<Vec<_>>(),
    ];
    let k = RatMatrix::from_row_slices(3, &rows).kernel();
    (0..k.rows()).find_map(|r| {
        let d = k.row(r);
        d.iter().all(|x| !x.is_zero()).then(|| [d[0].clone(), d[1].clone(), d[2].clone()])
    })
}

/// `P_σ·diag(diag(d₁,1), diag(d₂,1), diag(d₃,1))`, an automorphism of the even normal form.
pub fn compensated_permutation(sigma: [usize; 3]) -> Result<RatMatrix> {
    let d = permutation_compensation(sigma)
        .ok_or_else(|| Error::Unsupported(format!("no rational compensation for σ = {sigma:?}")))?;
    let blocks: Vec<RatMatrix> = d.iter().map(|x| mat2(x.clone(), rat(0), rat(0), rat(1))).collect();
    Ok(&block_permutation(sigma) * &block_diag3(&blocks))
}

fn random_small_nonzero(rng: &mut impl Rng) -> Rational {
    let choices = [ratio(1, 2), rat(1), rat(2), rat(3), ratio(1, 3), ratio(2, 3)];
    let x = choices.choose(rng).expect("nonempty").clone();
    if rng.gen_bool(0.5) {
        -x
    } else {
        x
    }
}

/// A random element of SL(2) with small entries.
pub fn random_sl2(rng: &mut impl Rng) -> RatMatrix {
    let mut m = RatMatrix::identity(2);
    for _ in 0..3 {
        let a = rat(rng.gen_range(-3..=3));
        let b = rat(rng.gen_range(-3..=3));
        m = &m * &mat2(rat(1), a, rat(0), rat(1));
        m = &m * &mat2(rat(1), rat(0), b, rat(1));
    }
    let c = random_small_nonzero(rng);
    &m * &mat2(c.clone(), rat(0), rat(0), c.recip())
}

fn random_gl2(rng: &mut impl Rng) -> RatMatrix {
    let d = random_small_nonzero(rng);
    &random_sl2(rng) * &mat2(d, rat(0), rat(0), rat(1))
}

/// `Sym²g` acting on `(μ², μλ, λ²)` for `g` acting on `(μ, λ)`.
pub fn sym2(g: &RatMatrix) -> RatMatrix {
    let (a, b, c, d) = (&g[(0, 0)], &g[(0, 1)], &g[(1, 0)], &g[(1, 1)]);
    let two = rat(2);
    RatMatrix::from_rows(vec![
        vec![a * a, &two * a * b, b * b],
        vec![a * c, a * d + b * c, b * d],
        vec![c * c, &two * c * d, d * d],
    ])
    .expect("3×3")
}

/// `[[α·I₂, 0], [S, I₃]]·diag(g⁻ᵀ, Sym²g)` with Hankel `S`.
pub fn odd_candidate(alpha: &Rational, s: &[Rational; 4], g: &RatMatrix) -> Result<RatMatrix> {
    let mut lower = RatMatrix::identity(5);
    lower[(0, 0)] = alpha.clone();
    lower[(1, 1)] = alpha.clone();
    for i in 0..3 {
        for j in 0..2 {
            lower[(2 + i, j)] = s[i + j].clone();
        }
    }
    let ginv_t = g.inverse()?.transpose();
    Ok(&lower * &RatMatrix::block_diagonal(&[ginv_t, sym2(g)]))
}

/// A random automorphism of a section in normal form, verified before return.
pub fn sample_automorphism(s: &SectionSpace, rng: &mut impl Rng) -> Result<ProjectiveMap> {
    for _ in 0..MAX_SAMPLER_CANDIDATES {
        let candidate = match s.parity() {
            Parity::Even => {
                require_even_normal(s)?;
                let mut sigma = [0usize, 1, 2];
                sigma.shuffle(rng);
                let d = permutation_compensation(sigma)
                    .ok_or_else(|| Error::Unsupported(format!("σ = {sigma:?} has no rational compensation")))?;
                let scale = random_small_nonzero(rng);
                let blocks: Vec<RatMatrix> = d
                    .iter()
                    .map(|di| &random_sl2(rng) * &mat2(di * &scale, rat(0), rat(0), rat(1)))
                    .collect();
                &block_permutation(sigma) * &block_diag3(&blocks)
            }
            Parity::Odd => {
                require_odd_normal(s)?;
                let alpha = random_small_nonzero(rng);
                let hankel = [0; 4].map(|_| rat(rng.gen_range(-3..=3)));
                odd_candidate(&alpha, &hankel, &random_gl2(rng))?
            }
        };
        if is_automorphism(s, &candidate)? {
            return ProjectiveMap::new(candidate);
        }
    }
    Err(Error::SamplingExhausted {
        what: "automorphism candidates passing the span test".into(),
        attempts: MAX_SAMPLER_CANDIDATES,
    })
}

fn checked(s: &SectionSpace, t: RatMatrix) -> Result<ProjectiveMap> {
    if !is_automorphism(s, &t)? {
        return Err(Error::InvariantViolation("constructed map is not an automorphism".into()));
    }
    ProjectiveMap::new(t)
}

fn block_index_zero(v: &[Rational]) -> Vec<usize> {
    (0..3).filter(|&i| is_zero_vec(&block(v, i))).collect()
}

/// Block-diagonal `T` with `T·(1,0,1,0,1,0)ᵀ = q`.
pub fn transport_point_off_v(s: &SectionSpace, q: &ProjPoint) -> Result<ProjectiveMap> {
    require_even_normal(s)?;
    let v = q.coords();
    if !block_index_zero(v).is_empty() {
        return Err(Error::Precondition(format!("{q} lies in V")));
    }
    let blocks = (0..3)
        .map(|i| det_one_completion(&v[2 * i], &v[2 * i + 1]))
        .collect::<Result<Vec<_>>>()?;
    checked(s, block_diag3(&blocks))
}

/// The unique zero block of a point of `V ∖ ∪lᵢ`.
fn v_block(p: &ProjPoint) -> Result<usize> {
    match block_index_zero(p.coords()).as_slice() {
        [j] => Ok(*j),
        [] => Err(Error::Precondition(format!("{p} is not in V"))),
        _ => Err(Error::Precondition(format!("{p} lies on an exceptional line"))),
    }
}

/// A permutation σ with `σ(from[k]) = to[k]`.
fn permutation_sending(from: &[usize], to: &[usize]) -> [usize; 3] {
    let mut sigma = [usize::MAX; 3];
    for (f, t) in from.iter().zip(to) {
        sigma[*f] = *t;
    }
    let mut rest_to = (0..3).filter(|t| !to.contains(t));
    for s in sigma.iter_mut() {
        if *s == usize::MAX {
            *s = rest_to.next().expect("bijection");
        }
    }
    sigma
}

/// `T` with `T·p ∝ q` for `p, q ∈ V ∖ ∪lᵢ`.
pub fn transport_point_in_v(s: &SectionSpace, p: &ProjPoint, q: &ProjPoint) -> Result<ProjectiveMap> {
    require_even_normal(s)?;
    let to_v1 = |x: &ProjPoint| -> Result<RatMatrix> {
        let j = v_block(x)?;
        compensated_permutation(permutation_sending(&[j], &[0]))
    };
    let gp = to_v1(p)?;
    let gq = to_v1(q)?;
    let p1 = gp.mul_vec(p.coords());
    let q1 = gq.mul_vec(q.coords());
    let t2 = sl2_mapping(&block(&p1, 1), &block(&q1, 1))?;
    let t3 = sl2_mapping(&block(&p1, 2), &block(&q1, 2))?;
    let d = block_diag3(&[RatMatrix::identity(2), t2, t3]);
    let t = &(&gq.inverse()? * &d) * &gp;
    let map = checked(s, t)?;
    if map.apply_point(p) != *q {
        return Err(Error::InvariantViolation("point transport missed its target".into()));
    }
    Ok(map)
}

/// The orbit representatives used by [`transport_line`].
pub fn orbit_representative(s: &SectionSpace, label: OrbitLabel) -> Result<SectionPoint> {
    require_even_normal(s)?;
    match label {
        OrbitLabel::O1 => s.point_from_i64(&[1, 0, 0, 0, 0, 0], &[0, 0, 1, 0, 0, 0]),
        OrbitLabel::O2 => s.point_from_i64(&[1, 0, 0, 0, 0, 0], &[0, 0, 1, 0, 1, 0]),
        OrbitLabel::O3 => s.point_from_i64(&[0, 0, 1, 0, 1, 0], &[1, 0, 0, 0, 1, 0]),
        OrbitLabel::O4 => s.point_from_i64(&[1, 0, 1, 0, 1, 0], &[1, 1, 1, -2, 1, 1]),
    }
}

/// The unipotent blocks `(1, q₁−1; 0, 1)`, `(1, (1−q₃)/2; 0, 1)`, `(1, q₅−1; 0, 1)`
/// carrying `span{(1,0,1,0,1,0), (1,1,1,−2,1,1)}` to `span{(1,0,1,0,1,0), (q₁,1,q₃,−2,q₅,1)}`.
pub fn o4_block_matrix(q1: &Rational, q3: &Rational, q5: &Rational) -> RatMatrix {
    let one = Rational::one();
    block_diag3(&[
        mat2(one.clone(), q1 - &one, rat(0), one.clone()),
        mat2(one.clone(), (&one - q3) / rat(2), rat(0), one.clone()),
        mat2(one.clone(), q5 - &one, rat(0), one.clone()),
    ])
}

fn point_of(v: Vec<Rational>) -> Result<ProjPoint> {
    ProjPoint::new(v)
}

fn meet_point(line: &ProjLine, other: &crate::projective::LinSubspace) -> Result<Option<Vec<Rational>>> {
    Ok(line
        .subspace()
        .meet(other)?
        .map(|m| m.basis().row(0).to_vec()))
}

/// An automorphism sending the orbit representative of `label` to `x`.
fn from_representative(s: &SectionSpace, x: &SectionPoint, label: OrbitLabel) -> Result<RatMatrix> {
    let lines = s.exceptional_lines()?;
    let spans = s.v_spans()?;
    let l = x.line();
    let to_rep = match label {
        OrbitLabel::O1 | OrbitLabel::O2 => {
            let mut met = Vec::new();
            for (i, li) in lines.iter().enumerate() {
                if let Some(v) = meet_point(l, li)? {
                    met.push((i, v));
                }
            }
            let idx: Vec<usize> = met.iter().map(|(i, _)| *i).collect();
            let targets: Vec<usize> = (0..idx.len()).collect();
            let g = compensated_permutation(permutation_sending(&idx, &targets))?;
            let e1 = [rat(1), rat(0)];
            if label == OrbitLabel::O1 {
                let u = g.mul_vec(&met[0].1);
                let w = g.mul_vec(&met[1].1);
                let t1 = sl2_mapping(&block(&u, 0), &e1)?;
                let t2 = sl2_mapping(&block(&w, 1), &e1)?;
                &block_diag3(&[t1, t2, RatMatrix::identity(2)]) * &g
            } else {
                let u = g.mul_vec(&met[0].1);
                // another point of l, with its first block cleared against u
                let other = if proportional(l.p(), &met[0].1) { l.q() } else { l.p() };
                let mut w = g.mul_vec(other);
                let (ub, wb) = (block(&u, 0), block(&w, 0));
                let k = if !ub[0].is_zero() { &wb[0] / &ub[0] } else { &wb[1] / &ub[1] };
                for (wi, ui) in w.iter_mut().zip(&u) {
                    *wi -= &k * ui;
                }
                if !is_zero_vec(&block(&w, 0)) {
                    return Err(Error::InvariantViolation("o2 line is not isotropic on l₁".into()));
                }
                let t1 = sl2_mapping(&block(&u, 0), &e1)?;
                let t2 = sl2_mapping(&block(&w, 1), &e1)?;
                let t3 = sl2_mapping(&block(&w, 2), &e1)?;
                &block_diag3(&[t1, t2, t3]) * &g
            }
        }
        OrbitLabel::O3 => {
            let p = meet_point(l, &spans[0])?.ok_or_else(|| Error::InvariantViolation("o3 line misses V₁".into()))?;
            let mut q = meet_point(l, &spans[1])?.ok_or_else(|| Error::InvariantViolation("o3 line misses V₂".into()))?;
            let (pb, qb) = (block(&p, 2), block(&q, 2));
            let k = if !qb[0].is_zero() { &pb[0] / &qb[0] } else { &pb[1] / &qb[1] };
            for qi in q.iter_mut() {
                *qi *= &k;
            }
            if block(&q, 2) != pb {
                return Err(Error::InvariantViolation("o3 points disagree on block 3".into()));
            }
            let e1 = [rat(1), rat(0)];
            let t1 = sl2_mapping(&block(&q, 0), &e1)?;
            let t2 = sl2_mapping(&block(&p, 1), &e1)?;
            let t3 = sl2_mapping(&pb, &e1)?;
            block_diag3(&[t1, t2, t3])
        }
        OrbitLabel::O4 => {
            let p0 = point_of(l.p().to_vec())?;
            let t0 = transport_point_off_v(s, &p0)?.matrix().inverse()?;
            let image = ProjLine::from_vectors(&t0.mul_vec(l.p()), &t0.mul_vec(l.q()))?;
            // the image contains e = (1,0,1,0,1,0); its second rref row has q₂ = 1 after scaling
            let e: Vec<Rational> = [1, 0, 1, 0, 1, 0].iter().map(|&x| rat(x)).collect();
            let other = if proportional(image.p(), &e) { image.q() } else { image.p() };
            if other[1].is_zero() {
                return Err(Error::InvariantViolation("o4 line meets V".into()));
            }
            let c = other[1].recip();
            let q: Vec<Rational> = other.iter().map(|x| x * &c).collect();
            let b = o4_block_matrix(&q[0], &q[2], &q[4]);
            // b maps the representative onto span{e, q}; invert to go back
            &b.inverse()? * &t0
        }
    };
    to_rep.inverse()
}

fn proportional(u: &[Rational], v: &[Rational]) -> bool {
    RatMatrix::from_row_slices(u.len(), &[u.to_vec(), v.to_vec()]).rank() < 2
}

/// An automorphism sending `x` to `x′` (same orbit, even normal form).
pub fn transport_line(s: &SectionSpace, x: &SectionPoint, x2: &SectionPoint) -> Result<ProjectiveMap> {
    require_even_normal(s)?;
    let label = s.classify_orbit(x)?;
    let label2 = s.classify_orbit(x2)?;
    if label != label2 {
        return Err(Error::Precondition(format!("points lie in different orbits ({label} vs {label2})")));
    }
    let h1 = from_representative(s, x, label)?;
    let h2 = from_representative(s, x2, label)?;
    let t = &h2 * &h1.inverse()?;
    let map = checked(s, t)?;
    if map.apply_line(x.line()) != *x2.line() {
        return Err(Error::InvariantViolation(format!("transport of {x} missed {x2}")));
    }
    Ok(map)
}
