//! The variety `Z_x` of lines through `x = [l]` inside the section.
//!
//! For `l = P(span{p, q})` a line through `x` is given by `((r:s), v)` with
//! `(rp + sq)·A·vᵀ = (rp + sq)·B·vᵀ = 0`, where `v` is taken modulo `span{p, q}`.
//! Writing `v` in the coordinates `t` of a complement frame turns this into
//! `(r·M₁ + s·M₂)·tᵀ = 0` on `P¹ × P^{N−2}`, a complete intersection of two
//! divisors of type (1,1) with class `(2,1)`.

use std::fmt;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{format_rational, BinaryForm, RatMatrix, Rational, SymQuadForm};
use crate::error::{Error, Result};
use crate::pencil::{AntisymPencil, Parity};
use crate::projective::{random_nonzero_vector, unit_vector, ProjPoint, DEFAULT_HEIGHT};
use crate::section::{OrbitLabel, SectionPoint, SectionSpace};

/// Redraw budget for non-transverse random incidence data.
pub const MAX_REDRAWS: usize = 10;
/// Points sampled by the structure-signature checks.
pub const SIGNATURE_SAMPLES: usize = 50;
/// Seed of the internal stream used by [`decompose`].
pub const DECOMPOSE_SEED: u64 = 0x5eed_2a11;

/// A basis `p, q, c₁, …, c_{N−1}` of ℚ^{N+1}; the `t`-coordinates of a vector
/// are its coefficients on the `cₖ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplementFrame {
    p: Vec<Rational>,
    q: Vec<Rational>,
    complement: Vec<Vec<Rational>>,
    /// Inverse of the matrix with rows `p, q, c₁, …`.
    inverse: RatMatrix,
}

impl ComplementFrame {
    /// Complement by the standard basis vectors at the non-pivot columns of `rref[p; q]`.
    pub fn standard(p: &[Rational], q: &[Rational]) -> Result<Self> {
        let n = p.len();
        let (_, pivots) = RatMatrix::from_row_slices(n, &[p.to_vec(), q.to_vec()]).rref();
        let complement: Vec<Vec<Rational>> =
            (0..n).filter(|k| !pivots.contains(k)).map(|k| unit_vector(n, k)).collect();
        Self::with_complement(p, q, &complement)
    }

    pub fn with_complement(p: &[Rational], q: &[Rational], complement: &[Vec<Rational>]) -> Result<Self> {
        let n = p.len();
        if complement.len() + 2 != n {
            return Err(Error::Dimension(format!(
                "a complement in dimension {n} needs {} vectors",
                n - 2
            )));
        }
        let mut rows = vec![p.to_vec(), q.to_vec()];
        rows.extend(complement.iter().cloned());
        let inverse = RatMatrix::from_row_slices(n, &rows)
            .inverse()
            .map_err(|_| Error::InvalidInput("frame vectors are not a basis".into()))?;
        Ok(ComplementFrame {
            p: p.to_vec(),
            q: q.to_vec(),
            complement: complement.to_vec(),
            inverse,
        })
    }

    pub fn complement(&self) -> &[Vec<Rational>] {
        &self.complement
    }

    /// Number of `t`-coordinates, N − 1.
    pub fn len(&self) -> usize {
        self.complement.len()
    }

    pub fn is_empty(&self) -> bool {
        self.complement.is_empty()
    }

    /// `t`-coordinates of a vector (its class modulo `span{p, q}`).
    pub fn coordinates(&self, v: &[Rational]) -> Vec<Rational> {
        self.inverse.vec_mul(v)[2..].to_vec()
    }

    /// `Σ tₖ cₖ`.
    pub fn vector(&self, t: &[Rational]) -> Vec<Rational> {
        let n = self.p.len();
        let mut v = vec![Rational::zero(); n];
        for (tk, c) in t.iter().zip(&self.complement) {
            for (vi, ci) in v.iter_mut().zip(c) {
                *vi += tk * ci;
            }
        }
        v
    }
}

/// `(r·M₁ + s·M₂)·tᵀ = 0`; row 0 is the A-equation, row 1 the B-equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PencilSystem {
    pub m1: RatMatrix,
    pub m2: RatMatrix,
}

impl PencilSystem {
    pub fn build(pencil: &AntisymPencil, p: &[Rational], q: &[Rational], frame: &ComplementFrame) -> Self {
        let row = |m: &RatMatrix, u: &[Rational]| -> Vec<Rational> {
            frame.complement.iter().map(|c| m.bilinear(u, c)).collect()
        };
        let k = frame.len();
        let m1 = RatMatrix::from_row_slices(k, &[row(pencil.a(), p), row(pencil.b(), p)]);
        let m2 = RatMatrix::from_row_slices(k, &[row(pencil.a(), q), row(pencil.b(), q)]);
        PencilSystem { m1, m2 }
    }

    /// Number of `t`-coordinates.
    pub fn width(&self) -> usize {
        self.m1.cols()
    }

    /// The N of the ambient P^N.
    pub fn ambient(&self) -> usize {
        self.width() + 1
    }

    pub fn at(&self, r: &Rational, s: &Rational) -> RatMatrix {
        &self.m1.scale(r) + &self.m2.scale(s)
    }

    /// Entry `(i, j)` of `r·M₁ + s·M₂` as a linear form.
    pub fn entry(&self, i: usize, j: usize) -> BinaryForm {
        BinaryForm::linear(self.m1[(i, j)].clone(), self.m2[(i, j)].clone())
    }

    /// The 2×2 minor on columns `i < j`.
    pub fn minor(&self, i: usize, j: usize) -> BinaryForm {
        &(&self.entry(0, i) * &self.entry(1, j)) - &(&self.entry(0, j) * &self.entry(1, i))
    }

    pub fn minors(&self) -> Vec<((usize, usize), BinaryForm)> {
        let w = self.width();
        (0..w)
            .flat_map(|i| (i + 1..w).map(move |j| (i, j)))
            .map(|(i, j)| ((i, j), self.minor(i, j)))
            .collect()
    }

    /// gcd of all 2×2 minors.
    pub fn minor_gcd(&self) -> BinaryForm {
        self.minors()
            .iter()
            .fold(BinaryForm::zero(0), |g, (_, m)| g.gcd(m))
    }

    pub fn satisfied(&self, r: &Rational, s: &Rational, t: &[Rational]) -> bool {
        self.at(r, s).mul_vec(t).iter().all(Zero::is_zero)
    }

    /// Kernel of the stacked `[M₁; M₂]`: solutions independent of `(r:s)`.
    pub fn stacked_kernel(&self) -> RatMatrix {
        self.m1.vstack(&self.m2).expect("same width").kernel()
    }

    /// `2 × (N+1)` Jacobian of the two equations in `(r, s, t)`.
    pub fn jacobian(&self, r: &Rational, s: &Rational, t: &[Rational]) -> RatMatrix {
        let m = self.at(r, s);
        let rows: Vec<Vec<Rational>> = (0..2)
            .map(|k| {
                let mut row = vec![
                    crate::algebra::dot(self.m1.row(k), t),
                    crate::algebra::dot(self.m2.row(k), t),
                ];
                row.extend(m.row(k).iter().cloned());
                row
            })
            .collect();
        RatMatrix::from_row_slices(self.width() + 2, &rows)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentKind {
    Vertical,
    Horizontal,
    Residual,
}

impl fmt::Display for ComponentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ComponentKind::Vertical => "vertical",
            ComponentKind::Horizontal => "horizontal",
            ComponentKind::Residual => "residual",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Support {
    /// Fiber over a rational `(r₀:s₀)`: the kernel of `M(r₀,s₀)` (rows, `t`-coordinates).
    Fiber { parameter: ProjPoint, kernel: RatMatrix },
    /// Fibers over the roots of an irreducible binary form.
    ConjugateFibers { factor: BinaryForm },
    /// `P¹ × P(K)`.
    Constant { kernel: RatMatrix },
    /// Graph of `(r:s) ↦ (f₁ : … : f_{N−1})`.
    Graph { parametrization: Vec<BinaryForm> },
    /// A surface whose image in `P³` is the zero locus of the quadric.
    Surface { quadric: SymQuadForm },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZxComponent {
    pub kind: ComponentKind,
    /// `(a, b)`: `a·[fiber class] + b·[pullback class]`.
    pub class: (u32, u32),
    pub multiplicity: u32,
    pub support: Support,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StructureSignature {
    #[serde(rename = "reducible")]
    Reducible,
    #[serde(rename = "rational-curve")]
    RationalCurve,
    #[serde(rename = "blowup-of-cone/F2")]
    BlowupOfCone,
    #[serde(rename = "smooth-quadric")]
    SmoothQuadric,
}

impl StructureSignature {
    pub fn as_str(&self) -> &'static str {
        match self {
            StructureSignature::Reducible => "reducible",
            StructureSignature::RationalCurve => "rational-curve",
            StructureSignature::BlowupOfCone => "blowup-of-cone/F2",
            StructureSignature::SmoothQuadric => "smooth-quadric",
        }
    }
}

impl fmt::Display for StructureSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug)]
pub struct ZxReport {
    pub orbit: OrbitLabel,
    pub parity: Parity,
    pub frame: ComplementFrame,
    pub system: PencilSystem,
    pub minor_gcd: BinaryForm,
    pub components: Vec<ZxComponent>,
    pub total_class: (u32, u32),
    /// Elimination quadric (N = 5 only).
    pub quadric: Option<SymQuadForm>,
    pub signature: StructureSignature,
}

impl ZxReport {
    pub fn count(&self, kind: ComponentKind) -> usize {
        self.components.iter().filter(|c| c.kind == kind).count()
    }

    pub fn of_kind(&self, kind: ComponentKind) -> impl Iterator<Item = &ZxComponent> {
        self.components.iter().filter(move |c| c.kind == kind)
    }

    pub fn horizontal(&self) -> Option<&ZxComponent> {
        self.of_kind(ComponentKind::Horizontal).next()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        use serde_json::json;
        let comps: Vec<serde_json::Value> = self
            .components
            .iter()
            .map(|c| {
                json!({
                    "kind": c.kind,
                    "class": [c.class.0, c.class.1],
                    "multiplicity": c.multiplicity,
                    "support": support_json(&c.support),
                })
            })
            .collect();
        let mut v = json!({
            "orbit": self.orbit,
            "components": comps,
            "total_class": [self.total_class.0, self.total_class.1],
            "signature": self.signature,
            "minor_gcd": self.minor_gcd.to_string(),
        });
        if let Some(q) = &self.quadric {
            v["quadric"] = matrix_json(q.matrix());
        }
        v
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("serializable")
    }

    /// A table with one row per component.
    pub fn to_markdown(&self) -> String {
        let (fiber, pullback) = match self.parity {
            Parity::Odd => ("[L₁]", "[L₂]"),
            Parity::Even => ("[P]", "[L]"),
        };
        let class = |(a, b): (u32, u32)| -> String {
            let mut parts = Vec::new();
            if a > 0 {
                parts.push(if a == 1 { fiber.to_string() } else { format!("{a}{fiber}") });
            }
            if b > 0 {
                parts.push(if b == 1 { pullback.to_string() } else { format!("{b}{pullback}") });
            }
            if parts.is_empty() {
                "0".into()
            } else {
                parts.join(" + ")
            }
        };
        let mut out = format!(
            "### Z_x for x in {}\n\n| kind | class | multiplicity | support |\n|---|---|---|---|\n",
            self.orbit
        );
        for c in &self.components {
            out.push_str(&format!(
                "| {} | {} | {} | {} |\n",
                c.kind,
                class(c.class),
                c.multiplicity,
                support_text(&c.support)
            ));
        }
        out.push_str(&format!(
            "\ntotal class: {}  \nsignature: {}  \ngcd of minors: {}\n",
            class(self.total_class),
            self.signature,
            self.minor_gcd
        ));
        if let Some(q) = &self.quadric {
            out.push_str(&format!("elimination quadric rank: {}\n", q.matrix().rank()));
        }
        out
    }
}

fn matrix_json(m: &RatMatrix) -> serde_json::Value {
    serde_json::Value::Array(
        m.row_vecs()
            .iter()
            .map(|r| serde_json::Value::Array(r.iter().map(|x| format_rational(x).into()).collect()))
            .collect(),
    )
}

fn support_json(s: &Support) -> serde_json::Value {
    use serde_json::json;
    match s {
        Support::Fiber { parameter, kernel } => {
            json!({"type": "fiber", "parameter": parameter.to_string(), "kernel": matrix_json(kernel)})
        }
        Support::ConjugateFibers { factor } => json!({"type": "conjugate-fibers", "factor": factor.to_string()}),
        Support::Constant { kernel } => json!({"type": "constant", "kernel": matrix_json(kernel)}),
        Support::Graph { parametrization } => json!({
            "type": "graph",
            "parametrization": parametrization.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        }),
        Support::Surface { quadric } => json!({"type": "surface", "quadric": matrix_json(quadric.matrix())}),
    }
}

fn support_text(s: &Support) -> String {
    let rows = |m: &RatMatrix| {
        m.row_vecs()
            .iter()
            .map(|r| format!("({})", r.iter().map(format_rational).collect::<Vec<_>>().join(",")))
            .collect::<Vec<_>>()
            .join(", ")
    };
    match s {
        Support::Fiber { parameter, kernel } => format!("(r:s) = {parameter}, t ∈ ⟨{}⟩", rows(kernel)),
        Support::ConjugateFibers { factor } => format!("roots of {factor}"),
        Support::Constant { kernel } => format!("t ∈ ⟨{}⟩", rows(kernel)),
        Support::Graph { parametrization } => format!(
            "t = ({})",
            parametrization.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(" : ")
        ),
        Support::Surface { .. } => "over the elimination quadric".into(),
    }
}

/// The system of `x` in the standard complement frame.
pub fn build_system(s: &SectionSpace, x: &SectionPoint) -> (ComplementFrame, PencilSystem) {
    let frame = ComplementFrame::standard(x.p(), x.q()).expect("p, q independent");
    let sys = PencilSystem::build(s.pencil(), x.p(), x.q(), &frame);
    (frame, sys)
}

/// One component per common root of the 2×2 minors, class `(deg, 0)`.
pub fn vertical_components(sys: &PencilSystem) -> Result<Vec<ZxComponent>> {
    let g = sys.minor_gcd();
    if g.is_zero() {
        return Err(Error::InvariantViolation("every 2×2 minor vanishes identically".into()));
    }
    let dec = g.rational_roots()?;
    let mut out = Vec::new();
    for root in dec.roots {
        let (r0, s0) = (&root.point.coords()[0], &root.point.coords()[1]);
        let m = sys.at(r0, s0);
        if m.rank() == 0 {
            return Err(Error::InvariantViolation(format!(
                "the system vanishes identically at {}",
                root.point
            )));
        }
        out.push(ZxComponent {
            kind: ComponentKind::Vertical,
            class: (1, 0),
            multiplicity: root.multiplicity as u32,
            support: Support::Fiber {
                parameter: root.point.clone(),
                kernel: m.kernel(),
            },
        });
    }
    if !dec.residual.is_constant() {
        // an irreducible quadratic: two conjugate fibers
        out.push(ZxComponent {
            kind: ComponentKind::Vertical,
            class: (dec.residual.degree() as u32, 0),
            multiplicity: 1,
            support: Support::ConjugateFibers {
                factor: dec.residual.normalized(),
            },
        });
    }
    Ok(out)
}

/// `P¹ × P(K)` when `dim P(K) = N − 4`.
pub fn horizontal_components(sys: &PencilSystem) -> Result<Vec<ZxComponent>> {
    let k = sys.stacked_kernel();
    let want = sys.ambient() - 3;
    if k.rows() > want {
        return Err(Error::InvariantViolation(format!(
            "constant solutions have dimension {} (expected at most {want})",
            k.rows()
        )));
    }
    if k.rows() < want || k.rows() == 0 {
        return Ok(Vec::new());
    }
    Ok(vec![ZxComponent {
        kind: ComponentKind::Horizontal,
        class: (0, 1),
        multiplicity: 1,
        support: Support::Constant { kernel: k },
    }])
}

fn add_class(found: &[ZxComponent]) -> (u32, u32) {
    found
        .iter()
        .fold((0, 0), |(a, b), c| (a + c.multiplicity * c.class.0, b + c.multiplicity * c.class.1))
}

/// The component that is neither vertical nor horizontal, if any.
pub fn residual_component(
    sys: &PencilSystem,
    found: &[ZxComponent],
    rng: &mut impl Rng,
) -> Result<Option<ZxComponent>> {
    match sys.ambient() {
        4 => residual_curve(sys, found),
        5 => residual_surface(sys, found, rng),
        n => Err(Error::Unsupported(format!("Z_x in P^{n}"))),
    }
}

fn residual_curve(sys: &PencilSystem, found: &[ZxComponent]) -> Result<Option<ZxComponent>> {
    let g = sys.minor_gcd();
    let cramer = [sys.minor(1, 2), -&sys.minor(0, 2), sys.minor(0, 1)];
    let reduced: Vec<BinaryForm> = cramer.iter().map(|f| f.div_exact(&g)).collect::<Result<_>>()?;
    let e = 2 - g.degree();
    if e == 0 {
        // the kernel of M(r,s) is constant: it must be the horizontal component
        let v: Vec<Rational> = reduced.iter().map(|f| f.coeffs()[0].clone()).collect();
        let on_horizontal = found.iter().any(|c| match &c.support {
            Support::Constant { kernel } => kernel.rows() == 1 && RatMatrix::from_row_slices(3, &[kernel.row(0).to_vec(), v.clone()]).rank() == 1,
            _ => false,
        });
        if !on_horizontal {
            return Err(Error::InvariantViolation("constant kernel is not a horizontal component".into()));
        }
        return Ok(None);
    }
    Ok(Some(ZxComponent {
        kind: ComponentKind::Residual,
        class: (e as u32, 1),
        multiplicity: 1,
        support: Support::Graph {
            parametrization: reduced,
        },
    }))
}

fn span_rank(vectors: &[Vec<Rational>], width: usize) -> usize {
    RatMatrix::from_row_slices(width, vectors).rank()
}

fn residual_surface(sys: &PencilSystem, found: &[ZxComponent], rng: &mut impl Rng) -> Result<Option<ZxComponent>> {
    let k = sys.stacked_kernel();
    let horizontal = found.iter().any(|c| c.kind == ComponentKind::Horizontal);
    let mut verticals = Vec::new();
    for c in found.iter().filter(|c| c.kind == ComponentKind::Vertical) {
        match &c.support {
            Support::Fiber { parameter, .. } => verticals.push(parameter.clone()),
            _ => return Err(Error::Unsupported("non-rational vertical components in P^5".into())),
        }
    }

    let c_p = count_over_random_line(sys, &k, &verticals, rng)?;
    let c_l = count_in_random_fiber(sys, &k, horizontal, rng)?;
    if (c_p, c_l) == (0, 0) {
        return Ok(None);
    }
    Ok(Some(ZxComponent {
        kind: ComponentKind::Residual,
        class: (c_p, c_l),
        multiplicity: 1,
        support: Support::Surface {
            quadric: elimination_quadric(sys),
        },
    }))
}

/// Intersection with the pullback of a random line of `P³`, outside the vertical fibers.
fn count_over_random_line(
    sys: &PencilSystem,
    k: &RatMatrix,
    verticals: &[ProjPoint],
    rng: &mut impl Rng,
) -> Result<u32> {
    let w = sys.width();
    'draw: for _ in 0..MAX_REDRAWS {
        let a = random_nonzero_vector(rng, w, DEFAULT_HEIGHT);
        let b = random_nonzero_vector(rng, w, DEFAULT_HEIGHT);
        let mut gens = vec![a.clone(), b.clone()];
        gens.extend(k.row_vecs());
        if span_rank(&gens, w) < 2 + k.rows() {
            continue; // the line meets P(K) or is degenerate
        }
        let lin = |row: &[Rational]| {
            BinaryForm::linear(crate::algebra::dot(row, &a), crate::algebra::dot(row, &b))
        };
        let d = &(&lin(sys.m1.row(0)) * &lin(sys.m2.row(1))) - &(&lin(sys.m2.row(0)) * &lin(sys.m1.row(1)));
        if d.is_zero() {
            continue;
        }
        let mut rest = d;
        let mut factors = Vec::new();
        for v in verticals {
            let m = sys.at(&v.coords()[0], &v.coords()[1]);
            let row = (0..2).map(|i| m.row(i)).find(|r| r.iter().any(|x| !x.is_zero())).expect("rank 1");
            let (ra, rb) = (crate::algebra::dot(row, &a), crate::algebra::dot(row, &b));
            if ra.is_zero() && rb.is_zero() {
                continue 'draw; // the line lies in the vertical fiber's hyperplane
            }
            let factor = BinaryForm::vanishing_at(&rb, &-ra);
            rest = match rest.div_exact(&factor) {
                Ok(q) => q,
                Err(_) => continue 'draw,
            };
            factors.push(factor);
        }
        if !rest.is_constant()
            && (!rest.is_squarefree() || factors.iter().any(|f| !f.gcd(&rest).is_constant())) {
                continue;
            }
        return Ok(rest.degree() as u32);
    }
    Err(Error::NonTransverse {
        what: "line of P³ against the residual surface".into(),
        redraws: MAX_REDRAWS,
    })
}

/// Intersection with a random fiber and the pullback of a random hyperplane.
fn count_in_random_fiber(sys: &PencilSystem, k: &RatMatrix, horizontal: bool, rng: &mut impl Rng) -> Result<u32> {
    let w = sys.width();
    let g = sys.minor_gcd();
    for _ in 0..MAX_REDRAWS {
        let t = ProjPoint::random(rng, 1, DEFAULT_HEIGHT);
        let (r0, s0) = (&t.coords()[0], &t.coords()[1]);
        if g.eval(r0, s0).is_zero() {
            continue;
        }
        let ker = sys.at(r0, s0).kernel();
        let h = random_nonzero_vector(rng, w, DEFAULT_HEIGHT);
        let eq = RatMatrix::from_row_slices(w, &[h]);
        // points of ker inside the hyperplane
        let restricted = &ker * &eq.transpose();
        let sub = restricted.transpose().kernel();
        if sub.rows() != ker.rows() - 1 {
            continue; // the fiber lies inside the hyperplane
        }
        if sub.rows() != 1 {
            return Err(Error::Unsupported("fiber count needs N = 5".into()));
        }
        let point = ker.transpose().mul_vec(sub.row(0));
        let mut gens = k.row_vecs();
        gens.push(point);
        let in_k = k.rows() > 0 && span_rank(&gens, w) == k.rows();
        if in_k {
            if horizontal {
                return Ok(0);
            }
            continue;
        }
        return Ok(1);
    }
    Err(Error::NonTransverse {
        what: "fiber and hyperplane against the residual surface".into(),
        redraws: MAX_REDRAWS,
    })
}

/// `det[[pA·v, qA·v], [pB·v, qB·v]]` in frame coordinates (N = 5).
pub fn elimination_quadric(sys: &PencilSystem) -> SymQuadForm {
    let l1 = sys.m1.row(0);
    let l2 = sys.m2.row(0);
    let l3 = sys.m1.row(1);
    let l4 = sys.m2.row(1);
    SymQuadForm::product_of_linear(l1, l4).sub(&SymQuadForm::product_of_linear(l2, l3))
}

/// A random point `((r:s), t)` of `Z_x` off the vertical fibers.
pub fn random_zx_point(sys: &PencilSystem, rng: &mut impl Rng) -> (Rational, Rational, Vec<Rational>) {
    let g = sys.minor_gcd();
    loop {
        let rs = ProjPoint::random(rng, 1, DEFAULT_HEIGHT);
        let (r, s) = (rs.coords()[0].clone(), rs.coords()[1].clone());
        if g.eval(&r, &s).is_zero() {
            continue;
        }
        let ker = sys.at(&r, &s).kernel();
        let c = random_nonzero_vector(rng, ker.rows(), DEFAULT_HEIGHT);
        let t = ker.transpose().mul_vec(&c);
        if t.iter().any(|x| !x.is_zero()) {
            return (r, s, t);
        }
    }
}

/// Rank of the 2×2 matrix whose kernel gives the `(r:s)` over `t`.
fn fiber_rank(sys: &PencilSystem, t: &[Rational]) -> usize {
    let col1 = sys.m1.mul_vec(t);
    let col2 = sys.m2.mul_vec(t);
    RatMatrix::from_rows(vec![vec![col1[0].clone(), col2[0].clone()], vec![col1[1].clone(), col2[1].clone()]])
        .expect("2×2")
        .rank()
}

fn mismatch(what: impl Into<String>) -> Error {
    Error::SignatureMismatch(what.into())
}

fn check_smooth_points(sys: &PencilSystem, rng: &mut impl Rng) -> Result<Vec<(Rational, Rational, Vec<Rational>)>> {
    let mut pts = Vec::with_capacity(SIGNATURE_SAMPLES);
    for _ in 0..SIGNATURE_SAMPLES {
        let (r, s, t) = random_zx_point(sys, rng);
        if sys.jacobian(&r, &s, &t).rank() != 2 {
            return Err(mismatch(format!("Jacobian rank drops at a sampled point (r:s) = ({r}:{s})")));
        }
        pts.push((r, s, t));
    }
    Ok(pts)
}

/// The structure check for the orbit of `x`; see [`StructureSignature`].
pub fn structure_signature(
    s: &SectionSpace,
    report: &ZxReport,
    rng: &mut impl Rng,
) -> Result<StructureSignature> {
    let sys = &report.system;
    match (s.parity(), report.orbit) {
        (Parity::Even, OrbitLabel::O3) => {
            let q = report.quadric.as_ref().ok_or_else(|| mismatch("no elimination quadric"))?;
            let (rank, vertex) = crate::algebra::quad_rank_and_vertex(q);
            if rank != 3 {
                return Err(mismatch(format!("quadric rank {rank}, expected 3")));
            }
            let o = vertex.row(0).to_vec();
            if !(sys.m1.mul_vec(&o).iter().all(Zero::is_zero) && sys.m2.mul_vec(&o).iter().all(Zero::is_zero)) {
                return Err(mismatch("fiber over the vertex is not all of P¹"));
            }
            for (_, _, t) in check_smooth_points(sys, rng)? {
                if span_rank(&[t.clone(), o.clone()], sys.width()) < 2 {
                    continue;
                }
                if !q.eval(&t).is_zero() {
                    return Err(mismatch("sampled point off the quadric"));
                }
                if fiber_rank(sys, &t) != 1 {
                    return Err(mismatch("non-vertex fiber is not a single point"));
                }
            }
            Ok(StructureSignature::BlowupOfCone)
        }
        (Parity::Even, OrbitLabel::O4) => {
            let q = report.quadric.as_ref().ok_or_else(|| mismatch("no elimination quadric"))?;
            let rank = q.matrix().rank();
            if rank != 4 {
                return Err(mismatch(format!("quadric rank {rank}, expected 4")));
            }
            for (r, s2, t) in check_smooth_points(sys, rng)? {
                if fiber_rank(sys, &t) != 1 {
                    return Err(mismatch("projection to the quadric is not injective"));
                }
                // the unique (r:s) over t is the one we started from
                let col1 = sys.m1.mul_vec(&t);
                let col2 = sys.m2.mul_vec(&t);
                let k = (0..2).find(|&i| !col1[i].is_zero() || !col2[i].is_zero()).expect("rank 1");
                if !(&r * &col1[k] + &s2 * &col2[k]).is_zero() {
                    return Err(mismatch("fiber point disagrees with the sample"));
                }
            }
            Ok(StructureSignature::SmoothQuadric)
        }
        (Parity::Odd, OrbitLabel::O4) => {
            let [c] = report.components.as_slice() else {
                return Err(mismatch("odd o4 Z_x is not irreducible"));
            };
            if c.kind != ComponentKind::Residual || c.class != (2, 1) || !report.minor_gcd.is_constant() {
                return Err(mismatch("odd o4 Z_x is not a conic graph over P¹"));
            }
            check_smooth_points(sys, rng)?;
            Ok(StructureSignature::RationalCurve)
        }
        _ => {
            if report.components.len() < 2 {
                return Err(mismatch(format!("{} Z_x expected to be reducible", report.orbit)));
            }
            Ok(StructureSignature::Reducible)
        }
    }
}

/// Full decomposition in the standard frame, deterministic in `x`.
pub fn decompose(s: &SectionSpace, x: &SectionPoint) -> Result<ZxReport> {
    let frame = ComplementFrame::standard(x.p(), x.q())?;
    decompose_in_frame(s, x, frame, &mut ChaCha8Rng::seed_from_u64(DECOMPOSE_SEED))
}

pub fn decompose_in_frame(
    s: &SectionSpace,
    x: &SectionPoint,
    frame: ComplementFrame,
    rng: &mut impl Rng,
) -> Result<ZxReport> {
    if !s.membership(x.line()) {
        return Err(Error::NotMember(x.to_string()));
    }
    let orbit = s.classify_orbit(x)?;
    let system = PencilSystem::build(s.pencil(), x.p(), x.q(), &frame);
    let mut components = vertical_components(&system)?;
    components.extend(horizontal_components(&system)?);
    if let Some(r) = residual_component(&system, &components, rng)? {
        components.push(r);
    }
    let total_class = add_class(&components);
    if total_class != (2, 1) {
        return Err(Error::InvariantViolation(format!(
            "total class of Z_x is {total_class:?}, expected (2, 1)"
        )));
    }
    let quadric = (system.ambient() == 5).then(|| elimination_quadric(&system));
    let mut report = ZxReport {
        orbit,
        parity: s.parity(),
        frame,
        minor_gcd: system.minor_gcd(),
        system,
        components,
        total_class,
        quadric,
        signature: StructureSignature::Reducible,
    };
    report.signature = structure_signature(s, &report, rng)?;
    Ok(report)
}

/// A random point on the support of a component, as `((r:s), t)`.
pub fn component_point(
    sys: &PencilSystem,
    c: &ZxComponent,
    rng: &mut impl Rng,
) -> Option<(Rational, Rational, Vec<Rational>)> {
    let h = DEFAULT_HEIGHT;
    let combo = |m: &RatMatrix, rng: &mut dyn rand::RngCore| -> Vec<Rational> {
        let c: Vec<Rational> = (0..m.rows()).map(|_| Rational::from_integer(rng.gen_range(-h..=h).into())).collect();
        m.transpose().mul_vec(&c)
    };
    match &c.support {
        Support::Fiber { parameter, kernel } => {
            Some((parameter.coords()[0].clone(), parameter.coords()[1].clone(), combo(kernel, rng)))
        }
        Support::Constant { kernel } => {
            let rs = ProjPoint::random(rng, 1, h);
            Some((rs.coords()[0].clone(), rs.coords()[1].clone(), combo(kernel, rng)))
        }
        Support::Graph { parametrization } => {
            let rs = ProjPoint::random(rng, 1, h);
            let (r, s) = (rs.coords()[0].clone(), rs.coords()[1].clone());
            let t = parametrization.iter().map(|f| f.eval(&r, &s)).collect();
            Some((r, s, t))
        }
        Support::Surface { .. } => Some(random_zx_point(sys, rng)),
        Support::ConjugateFibers { .. } => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn sys_of(s: &SectionSpace, p: &[i64], q: &[i64]) -> (SectionPoint, PencilSystem) {
        let x = s.point_from_i64(p, q).unwrap();
        let (_, sys) = build_system(s, &x);
        (x, sys)
    }

    fn paper_frame(p: &[i64], q: &[i64], idx: &[usize]) -> (Vec<Rational>, Vec<Rational>, ComplementFrame) {
        let pv: Vec<Rational> = p.iter().map(|&x| rat(x)).collect();
        let qv: Vec<Rational> = q.iter().map(|&x| rat(x)).collect();
        let comp: Vec<Vec<Rational>> = idx.iter().map(|&i| unit_vector(p.len(), i)).collect();
        let f = ComplementFrame::with_complement(&pv, &qv, &comp).unwrap();
        (pv, qv, f)
    }

    #[test]
    fn odd_o1_system_and_minor() {
        let s = SectionSpace::g14();
        let (_, sys) = sys_of(&s, &[0, 0, 1, 0, 0], &[0, 0, 0, 1, 0]);
        // t = (v₁, v₂, v₅): r·v₁ + s·v₂ = 0, s·v₁ = 0
        assert_eq!(sys.m1, RatMatrix::from_i64(&[&[1, 0, 0], &[0, 0, 0]]));
        assert_eq!(sys.m2, RatMatrix::from_i64(&[&[0, 1, 0], &[1, 0, 0]]));
        assert_eq!(sys.minor(0, 1), BinaryForm::from_i64(&[0, 0, -1]));
        assert_eq!(sys.minor_gcd(), BinaryForm::from_i64(&[0, 0, 1]));
    }

    #[test]
    fn even_o1_and_o2_systems() {
        let s = SectionSpace::g15();
        let (_, sys) = sys_of(&s, &[1, 0, 0, 0, 0, 0], &[0, 0, 1, 0, 0, 0]);
        // t = (v₂, v₄, v₅, v₆): −r v₂ − s v₄ = 0, −r v₂ = 0
        assert_eq!(sys.m1, RatMatrix::from_i64(&[&[-1, 0, 0, 0], &[-1, 0, 0, 0]]));
        assert_eq!(sys.m2, RatMatrix::from_i64(&[&[0, -1, 0, 0], &[0, 0, 0, 0]]));
        assert_eq!(sys.minor(0, 1), BinaryForm::from_i64(&[0, -1, 0]));

        let (_, sys) = sys_of(&s, &[1, 0, 0, 0, 0, 0], &[0, 0, 1, 0, 1, 0]);
        // −r v₂ − s v₄ − s v₆ = 0, −r v₂ + s v₆ = 0 with t = (v₂, v₄, v₅, v₆)
        assert_eq!(sys.m1, RatMatrix::from_i64(&[&[-1, 0, 0, 0], &[-1, 0, 0, 0]]));
        assert_eq!(sys.m2, RatMatrix::from_i64(&[&[0, -1, 0, -1], &[0, 0, 0, 1]]));
        assert_eq!(sys.minor(0, 1), BinaryForm::from_i64(&[0, -1, 0]));
        assert_eq!(sys.minor(0, 3), BinaryForm::from_i64(&[0, -2, 0]));
        assert_eq!(sys.minor(1, 3), BinaryForm::from_i64(&[0, 0, -1]));
        assert_eq!(sys.minor_gcd(), BinaryForm::from_i64(&[0, 1]));
    }

    #[test]
    fn vertical_examples() {
        let odd = SectionSpace::g14();
        let (_, sys) = sys_of(&odd, &[0, 0, 1, 0, 0], &[0, 0, 0, 1, 0]);
        let v = vertical_components(&sys).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].multiplicity, 2);
        assert!(matches!(&v[0].support, Support::Fiber { parameter, .. } if *parameter == ProjPoint::from_i64(&[1, 0])));

        let (_, sys) = sys_of(&odd, &[0, 0, 1, 0, 0], &[0, 0, 0, 0, 1]);
        let v = vertical_components(&sys).unwrap();
        assert_eq!(v.len(), 2);
        assert!(v.iter().all(|c| c.multiplicity == 1 && c.class == (1, 0)));

        let even = SectionSpace::g15();
        let (_, sys) = sys_of(&even, &[1, 0, 0, 0, 0, 0], &[0, 0, 1, 0, 1, 0]);
        let v = vertical_components(&sys).unwrap();
        assert_eq!(v.len(), 1);
        assert!(matches!(&v[0].support, Support::Fiber { parameter, .. } if *parameter == ProjPoint::from_i64(&[1, 0])));
    }

    #[test]
    fn horizontal_examples() {
        let odd = SectionSpace::g14();
        let (_, sys) = sys_of(&odd, &[0, 0, 1, 0, 0], &[0, 0, 0, 1, 0]);
        let h = horizontal_components(&sys).unwrap();
        assert_eq!(h.len(), 1);
        // ⟨e₃, e₄, e₅⟩ / W is the frame point t = (0, 0, 1)
        assert!(matches!(&h[0].support, Support::Constant { kernel } if kernel.row(0) == [rat(0), rat(0), rat(1)]));

        let even = SectionSpace::g15();
        let (_, sys) = sys_of(&even, &[1, 0, 0, 0, 0, 0], &[0, 0, 1, 0, 0, 0]);
        let h = horizontal_components(&sys).unwrap();
        assert_eq!(h.len(), 1);
        assert!(matches!(&h[0].support, Support::Constant { kernel } if kernel.rows() == 2));

        let (_, sys) = sys_of(&even, &[1, 0, 0, 0, 0, 0], &[0, 0, 1, 0, 1, 0]);
        assert_eq!(sys.stacked_kernel().rows(), 1);
        assert!(horizontal_components(&sys).unwrap().is_empty());
    }

    #[test]
    fn paper_frame_coordinates() {
        let (_, _, f) = paper_frame(&[0, 0, 1, 0, 1, 0], &[1, 0, 0, 0, 1, 0], &[0, 1, 3, 5]);
        // (v₁ − v₅ + v₃ : v₂ : v₄ : v₆)
        let v: Vec<Rational> = [3, 5, 7, 11, 13, 17].iter().map(|&x| rat(x)).collect();
        assert_eq!(f.coordinates(&v), vec![rat(3 - 13 + 7), rat(5), rat(11), rat(17)]);
        let (_, _, f) = paper_frame(&[1, 0, 1, 0, 1, 0], &[0, 1, 0, -2, 0, 1], &[0, 1, 2, 3]);
        // (v₁ − v₅ : v₂ − v₆ : v₃ − v₅ : v₄ + 2v₆)
        assert_eq!(f.coordinates(&v), vec![rat(3 - 13), rat(5 - 17), rat(7 - 13), rat(11 + 34)]);
    }

    #[test]
    fn elimination_quadric_examples() {
        let s = SectionSpace::g15();
        let (p, q, f) = paper_frame(&[0, 0, 1, 0, 1, 0], &[1, 0, 0, 0, 1, 0], &[0, 1, 3, 5]);
        let sys = PencilSystem::build(s.pencil(), &p, &q, &f);
        let cone = SymQuadForm::from_monomials(4, &[(1, 2, rat(1)), (1, 3, rat(2)), (2, 3, rat(-1))]);
        assert_eq!(elimination_quadric(&sys), cone);
        let (rank, vertex) = crate::algebra::quad_rank_and_vertex(&cone);
        assert_eq!(rank, 3);
        assert_eq!(vertex.row(0), &[rat(1), rat(0), rat(0), rat(0)]);

        let (p, q, f) = paper_frame(&[1, 0, 1, 0, 1, 0], &[0, 1, 0, -2, 0, 1], &[0, 1, 2, 3]);
        let sys = PencilSystem::build(s.pencil(), &p, &q, &f);
        assert_eq!(sys.m1, RatMatrix::from_i64(&[&[0, -1, 0, -1], &[0, -1, 0, 0]]));
        let smooth = SymQuadForm::from_monomials(4, &[(0, 3, rat(1)), (1, 2, rat(2))]);
        let e = elimination_quadric(&sys);
        assert!(e.proportional_to(&smooth));
        assert_eq!(e.matrix().rank(), 4);

        let (_, sys) = sys_of(&s, &[1, 0, 0, 0, 0, 0], &[0, 0, 1, 0, 0, 0]);
        // −v₂·v₄ in t = (v₂, v₄, v₅, v₆)... up to sign
        let e = elimination_quadric(&sys);
        assert!(e.proportional_to(&SymQuadForm::from_monomials(4, &[(0, 1, rat(1))])));
        assert_eq!(e.matrix().rank(), 2);
    }

    fn classes(r: &ZxReport, kind: ComponentKind) -> Vec<((u32, u32), u32)> {
        r.of_kind(kind).map(|c| (c.class, c.multiplicity)).collect()
    }

    #[test]
    fn theorem_for_g14_representatives() {
        let s = SectionSpace::g14();
        let r = decompose(&s, &s.point_from_i64(&[0, 0, 1, 0, 0], &[0, 0, 0, 1, 0]).unwrap()).unwrap();
        assert_eq!(classes(&r, ComponentKind::Vertical), vec![((1, 0), 2)]);
        assert_eq!(classes(&r, ComponentKind::Horizontal), vec![((0, 1), 1)]);
        assert_eq!(r.count(ComponentKind::Residual), 0);

        let r = decompose(&s, &s.point_from_i64(&[0, 0, 1, 0, 0], &[0, 0, 0, 0, 1]).unwrap()).unwrap();
        assert_eq!(classes(&r, ComponentKind::Vertical), vec![((1, 0), 1), ((1, 0), 1)]);
        assert_eq!(classes(&r, ComponentKind::Horizontal), vec![((0, 1), 1)]);

        let r = decompose(&s, &s.point_from_i64(&[0, 0, 1, 0, 0], &[0, 1, 2, 3, 4]).unwrap()).unwrap();
        assert_eq!(classes(&r, ComponentKind::Vertical), vec![((1, 0), 1)]);
        assert_eq!(classes(&r, ComponentKind::Residual), vec![((1, 1), 1)]);

        let r = decompose(&s, &s.point_from_i64(&[1, 0, 0, 0, 1], &[0, 1, 0, 1, 0]).unwrap()).unwrap();
        assert_eq!(r.components.len(), 1);
        assert_eq!(classes(&r, ComponentKind::Residual), vec![((2, 1), 1)]);
        assert_eq!(r.signature, StructureSignature::RationalCurve);
    }

    #[test]
    fn theorem_for_g15_representatives() {
        let s = SectionSpace::g15();
        let r = decompose(&s, &s.point_from_i64(&[1, 0, 0, 0, 0, 0], &[0, 0, 1, 0, 0, 0]).unwrap()).unwrap();
        assert_eq!(classes(&r, ComponentKind::Vertical), vec![((1, 0), 1), ((1, 0), 1)]);
        assert_eq!(classes(&r, ComponentKind::Horizontal), vec![((0, 1), 1)]);
        assert_eq!(r.count(ComponentKind::Residual), 0);

        let r = decompose(&s, &s.point_from_i64(&[1, 0, 0, 0, 0, 0], &[0, 0, 1, 0, 1, 0]).unwrap()).unwrap();
        assert_eq!(classes(&r, ComponentKind::Vertical), vec![((1, 0), 1)]);
        assert_eq!(classes(&r, ComponentKind::Residual), vec![((1, 1), 1)]);

        let r = decompose(&s, &s.point_from_i64(&[0, 0, 1, 0, 1, 0], &[1, 0, 0, 0, 1, 0]).unwrap()).unwrap();
        assert_eq!(r.signature, StructureSignature::BlowupOfCone);
        assert_eq!(classes(&r, ComponentKind::Residual), vec![((2, 1), 1)]);

        let r = decompose(&s, &s.point_from_i64(&[1, 0, 1, 0, 1, 0], &[0, 1, 0, -2, 0, 1]).unwrap()).unwrap();
        assert_eq!(r.signature, StructureSignature::SmoothQuadric);
        assert_eq!(classes(&r, ComponentKind::Residual), vec![((2, 1), 1)]);
    }

    #[test]
    fn report_json_shape() {
        let s = SectionSpace::g14();
        let r = decompose(&s, &s.point_from_i64(&[0, 0, 1, 0, 0], &[0, 0, 0, 1, 0]).unwrap()).unwrap();
        let v = r.to_json_value();
        assert_eq!(v["orbit"], "o1");
        assert_eq!(v["total_class"], serde_json::json!([2, 1]));
        assert_eq!(v["components"][0]["kind"], "vertical");
        assert_eq!(v["components"][0]["multiplicity"], 2);
        assert_eq!(v["signature"], "reducible");
        assert!(r.to_markdown().contains("2[L₁]") || r.to_markdown().contains("[L₁]"));
    }

    #[test]
    fn component_points_satisfy_the_system() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for s in [SectionSpace::g14(), SectionSpace::g15()] {
            for label in OrbitLabel::ALL {
                let x = s.sample_orbit(label, &mut rng).unwrap();
                let r = decompose(&s, &x).unwrap();
                for c in &r.components {
                    for _ in 0..20 {
                        if let Some((a, b, t)) = component_point(&r.system, c, &mut rng) {
                            assert!(r.system.satisfied(&a, &b, &t));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn non_member_rejected() {
        let s = SectionSpace::g15();
        let line = crate::projective::ProjLine::from_i64(&[1, 0, 0, 0, 0, 0], &[0, 1, 0, 0, 0, 0]);
        assert!(s.point(line).is_err());
    }
}
