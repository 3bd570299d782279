//! Verification suites: every check is deterministic given the seed and
//! records a witness that reproduces it.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::algebra::{format_rational, pfaffian, ratio, RatMatrix, Rational};
use crate::aut::{is_automorphism, sample_automorphism, transport_line};
use crate::error::Error;
use crate::fano::corollary_check;
use crate::lines::{decompose, decompose_in_frame, ComplementFrame, ComponentKind, StructureSignature, ZxReport};
use crate::pencil::AntisymPencil;
use crate::projective::{random_invertible, unit_vector, LinSubspace, ProjLine, ProjPoint, DEFAULT_HEIGHT};
use crate::schubert::{multiply_by_iterated_pieri, pairing_degree, TwoRowPartition};
use crate::section::{OrbitLabel, SectionPoint, SectionSpace};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
/// Sampling budget per requested trial when filtering for a property.
pub const FILTER_ATTEMPTS_PER_TRIAL: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Thm1,
    Thm2,
    Orbits,
    Lemma25,
    Corollary,
    Pencil,
    Oracles,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 8] = ["thm1", "thm2", "orbits", "lemma25", "corollary", "pencil", "oracles", "all"];

    pub fn as_str(&self) -> &'static str {
        match self {
            Suite::Thm1 => "thm1",
            Suite::Thm2 => "thm2",
            Suite::Orbits => "orbits",
            Suite::Lemma25 => "lemma25",
            Suite::Corollary => "corollary",
            Suite::Pencil => "pencil",
            Suite::Oracles => "oracles",
            Suite::All => "all",
        }
    }

    fn includes(&self, group: Suite) -> bool {
        *self == Suite::All || *self == group
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(match s {
            "thm1" => Suite::Thm1,
            "thm2" => Suite::Thm2,
            "orbits" => Suite::Orbits,
            "lemma25" => Suite::Lemma25,
            "corollary" => Suite::Corollary,
            "pencil" => Suite::Pencil,
            "oracles" => Suite::Oracles,
            "all" => Suite::All,
            other => return Err(Error::Parse(format!("unknown suite {other:?}"))),
        })
    }
}

#[derive(Clone, Debug)]
pub struct CheckRecord {
    pub id: String,
    pub passed: bool,
    pub detail: String,
    pub witness: Value,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub suite: Suite,
    pub seed: u64,
    pub version: &'static str,
    pub checks: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// Timings are included only on request so that reports stay byte-identical.
    pub fn to_json_value(&self, timings: bool) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                let mut v = json!({
                    "id": c.id,
                    "status": if c.passed { "pass" } else { "fail" },
                    "detail": c.detail,
                    "witness": c.witness,
                });
                if timings {
                    v["elapsed_ms"] = json!(c.elapsed.as_secs_f64() * 1e3);
                }
                v
            })
            .collect();
        json!({
            "suite": self.suite.as_str(),
            "seed": self.seed,
            "version": self.version,
            "passed": self.passed(),
            "checks": checks,
        })
    }

    pub fn to_json(&self, timings: bool) -> String {
        serde_json::to_string_pretty(&self.to_json_value(timings)).expect("serializable")
    }

    pub fn to_markdown(&self, timings: bool) -> String {
        let mut out = format!(
            "## Verification: suite {} (seed {}, version {})\n\n",
            self.suite, self.seed, self.version
        );
        if timings {
            out.push_str("| check | status | detail | ms |\n|---|---|---|---|\n");
        } else {
            out.push_str("| check | status | detail |\n|---|---|---|\n");
        }
        for c in &self.checks {
            let status = if c.passed { "pass" } else { "FAIL" };
            if timings {
                out.push_str(&format!(
                    "| {} | {} | {} | {:.1} |\n",
                    c.id,
                    status,
                    c.detail,
                    c.elapsed.as_secs_f64() * 1e3
                ));
            } else {
                out.push_str(&format!("| {} | {} | {} |\n", c.id, status, c.detail));
            }
        }
        let failed = self.failures().count();
        out.push_str(&format!("\n{} checks, {} failed\n", self.checks.len(), failed));
        out
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Overrides the default trial count of every sampling check.
    pub trials: Option<usize>,
}

/// A failed check with the data needed to reproduce it.
#[derive(Debug)]
pub struct Failure {
    pub message: String,
    pub witness: Value,
}

impl Failure {
    fn new(message: impl Into<String>, witness: Value) -> Self {
        Failure {
            message: message.into(),
            witness,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::new(e.to_string(), json!({ "error": e.to_string() }))
    }
}

type Outcome = Result<(String, Value), Failure>;
type CheckFn = fn(&mut ChaCha8Rng, usize) -> Outcome;

struct CheckSpec {
    id: &'static str,
    group: Suite,
    default_trials: usize,
    run: CheckFn,
}

/// All checks; the position in this table is the check's rng stream.
const CHECKS: &[CheckSpec] = &[
    CheckSpec { id: "thm1.o1", group: Suite::Thm1, default_trials: 1, run: |_, _| thm1(OrbitLabel::O1) },
    CheckSpec { id: "thm1.o2", group: Suite::Thm1, default_trials: 1, run: |_, _| thm1(OrbitLabel::O2) },
    CheckSpec { id: "thm1.o3", group: Suite::Thm1, default_trials: 1, run: |_, _| thm1(OrbitLabel::O3) },
    CheckSpec { id: "thm1.o4", group: Suite::Thm1, default_trials: 1, run: |_, _| thm1(OrbitLabel::O4) },
    CheckSpec { id: "thm2.o1", group: Suite::Thm2, default_trials: 1, run: |_, _| thm2(OrbitLabel::O1) },
    CheckSpec { id: "thm2.o2", group: Suite::Thm2, default_trials: 1, run: |_, _| thm2(OrbitLabel::O2) },
    CheckSpec { id: "thm2.o3", group: Suite::Thm2, default_trials: 1, run: |_, _| thm2(OrbitLabel::O3) },
    CheckSpec { id: "thm2.o4", group: Suite::Thm2, default_trials: 1, run: |_, _| thm2(OrbitLabel::O4) },
    CheckSpec { id: "orbits.conservation.g14", group: Suite::Orbits, default_trials: 200, run: |r, n| conservation(&SectionSpace::g14(), r, n) },
    CheckSpec { id: "orbits.conservation.g15", group: Suite::Orbits, default_trials: 200, run: |r, n| conservation(&SectionSpace::g15(), r, n) },
    CheckSpec { id: "orbits.invariance.g14", group: Suite::Orbits, default_trials: 500, run: |r, n| invariance(&SectionSpace::g14(), r, n) },
    CheckSpec { id: "orbits.invariance.g15", group: Suite::Orbits, default_trials: 500, run: |r, n| invariance(&SectionSpace::g15(), r, n) },
    CheckSpec { id: "orbits.transport.g15", group: Suite::Orbits, default_trials: 100, run: transport },
    CheckSpec { id: "lemma25.meets-all-v", group: Suite::Lemma25, default_trials: 500, run: meets_all_v },
    CheckSpec { id: "lemma25.center-plane-on-conic", group: Suite::Lemma25, default_trials: 500, run: meets_plane_on_conic },
    CheckSpec { id: "corollary.g14", group: Suite::Corollary, default_trials: 1, run: |r, _| corollary(&SectionSpace::g14(), r, ratio(-1, 2), (2, 2)) },
    CheckSpec { id: "corollary.g15", group: Suite::Corollary, default_trials: 1, run: |r, _| corollary(&SectionSpace::g15(), r, ratio(-1, 1), (3, 3)) },
    CheckSpec { id: "pencil.g15-roots", group: Suite::Pencil, default_trials: 1, run: |_, _| even_roots() },
    CheckSpec { id: "pencil.g14-center-curve", group: Suite::Pencil, default_trials: 10, run: center_curve },
    CheckSpec { id: "pencil.normalize", group: Suite::Pencil, default_trials: 100, run: normalize },
    CheckSpec { id: "oracles.pfaffian-det", group: Suite::Oracles, default_trials: 100, run: pfaffian_det },
    CheckSpec { id: "oracles.schubert-duality", group: Suite::Oracles, default_trials: 1, run: |_, _| schubert_duality() },
];

/// Ids of the checks a suite runs, in report order.
pub fn check_ids(suite: Suite) -> Vec<&'static str> {
    CHECKS.iter().filter(|c| suite.includes(c.group)).map(|c| c.id).collect()
}

pub fn run_suite(suite: Suite, opts: VerifyOptions) -> VerificationReport {
    let checks = CHECKS
        .iter()
        .enumerate()
        .filter(|(_, c)| suite.includes(c.group))
        .map(|(stream, c)| execute(stream, c, opts))
        .collect();
    VerificationReport {
        suite,
        seed: opts.seed,
        version: VERSION,
        checks,
    }
}

/// Runs one check by id, with the same rng stream it gets inside a suite.
pub fn run_check(id: &str, opts: VerifyOptions) -> Option<CheckRecord> {
    CHECKS
        .iter()
        .enumerate()
        .find(|(_, c)| c.id == id)
        .map(|(stream, c)| execute(stream, c, opts))
}

fn execute(stream: usize, c: &CheckSpec, opts: VerifyOptions) -> CheckRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(stream as u64);
    let trials = if c.default_trials > 1 { opts.trials.unwrap_or(c.default_trials) } else { 1 };
    let start = Instant::now();
    let outcome = (c.run)(&mut rng, trials);
    let elapsed = start.elapsed();
    let (passed, detail, witness) = match outcome {
        Ok((detail, witness)) => (true, detail, witness),
        Err(f) => (false, f.message, f.witness),
    };
    CheckRecord {
        id: c.id.to_string(),
        passed,
        detail,
        witness,
        elapsed,
    }
}

type Expected = Vec<(ComponentKind, (u32, u32), u32)>;

fn table(report: &ZxReport) -> Expected {
    let mut t: Expected = report.components.iter().map(|c| (c.kind, c.class, c.multiplicity)).collect();
    t.sort_by_key(|(k, c, m)| (*k as u8, *c, *m));
    t
}

fn describe(t: &Expected) -> String {
    t.iter()
        .map(|(k, (a, b), m)| format!("{k} ({a},{b})×{m}"))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn compare_table(report: &ZxReport, mut want: Expected, signature: StructureSignature) -> Outcome {
    want.sort_by_key(|(k, c, m)| (*k as u8, *c, *m));
    let got = table(report);
    let witness = report.to_json_value();
    if got != want {
        return Err(Failure::new(
            format!("got {}, expected {}", describe(&got), describe(&want)),
            witness,
        ));
    }
    if report.signature != signature {
        return Err(Failure::new(
            format!("signature {}, expected {signature}", report.signature),
            witness,
        ));
    }
    Ok((format!("{} [{}]", describe(&got), report.signature), witness))
}

const V: ComponentKind = ComponentKind::Vertical;
const H: ComponentKind = ComponentKind::Horizontal;
const R: ComponentKind = ComponentKind::Residual;

/// Representatives of the four orbits in the odd normal form.
pub fn g14_representative(label: OrbitLabel) -> (Vec<i64>, Vec<i64>) {
    match label {
        OrbitLabel::O1 => (vec![0, 0, 1, 0, 0], vec![0, 0, 0, 1, 0]),
        OrbitLabel::O2 => (vec![0, 0, 1, 0, 0], vec![0, 0, 0, 0, 1]),
        OrbitLabel::O3 => (vec![0, 0, 1, 0, 0], vec![0, 1, 2, 3, 4]),
        OrbitLabel::O4 => (vec![1, 0, 0, 0, 1], vec![0, 1, 0, 1, 0]),
    }
}

/// Representatives of the four orbits in the even normal form.
pub fn g15_representative(label: OrbitLabel) -> (Vec<i64>, Vec<i64>) {
    match label {
        OrbitLabel::O1 => (vec![1, 0, 0, 0, 0, 0], vec![0, 0, 1, 0, 0, 0]),
        OrbitLabel::O2 => (vec![1, 0, 0, 0, 0, 0], vec![0, 0, 1, 0, 1, 0]),
        OrbitLabel::O3 => (vec![0, 0, 1, 0, 1, 0], vec![1, 0, 0, 0, 1, 0]),
        OrbitLabel::O4 => (vec![1, 0, 1, 0, 1, 0], vec![0, 1, 0, -2, 0, 1]),
    }
}

/// Complement indices used for the o3 and o4 elimination quadrics.
fn g15_frame_indices(label: OrbitLabel) -> Option<[usize; 4]> {
    match label {
        OrbitLabel::O3 => Some([0, 1, 3, 5]),
        OrbitLabel::O4 => Some([0, 1, 2, 3]),
        _ => None,
    }
}

fn thm1(label: OrbitLabel) -> Outcome {
    let s = SectionSpace::g14();
    let (p, q) = g14_representative(label);
    let x = s.point_from_i64(&p, &q)?;
    let report = decompose(&s, &x)?;
    let (want, sig) = match label {
        OrbitLabel::O1 => (vec![(V, (1, 0), 2), (H, (0, 1), 1)], StructureSignature::Reducible),
        OrbitLabel::O2 => (vec![(V, (1, 0), 1), (V, (1, 0), 1), (H, (0, 1), 1)], StructureSignature::Reducible),
        OrbitLabel::O3 => (vec![(V, (1, 0), 1), (R, (1, 1), 1)], StructureSignature::Reducible),
        OrbitLabel::O4 => (vec![(R, (2, 1), 1)], StructureSignature::RationalCurve),
    };
    if report.orbit != label {
        return Err(Failure::new(format!("classified as {}", report.orbit), report.to_json_value()));
    }
    compare_table(&report, want, sig)
}

fn thm2(label: OrbitLabel) -> Outcome {
    let s = SectionSpace::g15();
    let (p, q) = g15_representative(label);
    let x = s.point_from_i64(&p, &q)?;
    let report = match g15_frame_indices(label) {
        Some(idx) => {
            let pv: Vec<Rational> = p.iter().map(|&v| Rational::from_integer(v.into())).collect();
            let qv: Vec<Rational> = q.iter().map(|&v| Rational::from_integer(v.into())).collect();
            let comp: Vec<Vec<Rational>> = idx.iter().map(|&i| unit_vector(6, i)).collect();
            let frame = ComplementFrame::with_complement(&pv, &qv, &comp)?;
            let mut rng = ChaCha8Rng::seed_from_u64(crate::lines::DECOMPOSE_SEED);
            decompose_in_frame(&s, &x, frame, &mut rng)?
        }
        None => decompose(&s, &x)?,
    };
    if report.orbit != label {
        return Err(Failure::new(format!("classified as {}", report.orbit), report.to_json_value()));
    }
    let (want, sig) = match label {
        OrbitLabel::O1 => (vec![(V, (1, 0), 1), (V, (1, 0), 1), (H, (0, 1), 1)], StructureSignature::Reducible),
        OrbitLabel::O2 => (vec![(V, (1, 0), 1), (R, (1, 1), 1)], StructureSignature::Reducible),
        OrbitLabel::O3 => (vec![(R, (2, 1), 1)], StructureSignature::BlowupOfCone),
        OrbitLabel::O4 => (vec![(R, (2, 1), 1)], StructureSignature::SmoothQuadric),
    };
    let (mut detail, witness) = compare_table(&report, want, sig)?;
    if let Some(q) = &report.quadric {
        let (rank, vertex) = crate::algebra::quad_rank_and_vertex(q);
        let want_rank = match label {
            OrbitLabel::O3 => Some(3),
            OrbitLabel::O4 => Some(4),
            _ => None,
        };
        if let Some(w) = want_rank {
            if rank != w {
                return Err(Failure::new(format!("quadric rank {rank}, expected {w}"), witness));
            }
            detail.push_str(&format!(", quadric rank {rank}"));
        }
        if label == OrbitLabel::O3 {
            let v = ProjPoint::new(vertex.row(0).to_vec())?;
            if v != ProjPoint::from_i64(&[1, 0, 0, 0]) {
                return Err(Failure::new(format!("vertex {v}, expected (1:0:0:0)"), witness));
            }
            detail.push_str(&format!(", vertex {v}"));
        }
    }
    Ok((detail, witness))
}

fn conservation(s: &SectionSpace, rng: &mut ChaCha8Rng, trials: usize) -> Outcome {
    let mut per_orbit = [0usize; 4];
    for i in 0..trials {
        let label = OrbitLabel::ALL[i % 4];
        let x = s.sample_orbit(label, rng)?;
        let report = decompose(s, &x).map_err(|e| Failure::new(e.to_string(), json!({ "point": x.to_string() })))?;
        if report.total_class != (2, 1) {
            return Err(Failure::new(
                format!("total class {:?}", report.total_class),
                report.to_json_value(),
            ));
        }
        per_orbit[i % 4] += 1;
    }
    Ok((
        format!("{trials} members, total class (2,1) in every case"),
        json!({ "per_orbit": per_orbit }),
    ))
}

fn invariance(s: &SectionSpace, rng: &mut ChaCha8Rng, trials: usize) -> Outcome {
    for _ in 0..trials {
        let g = sample_automorphism(s, rng)?;
        let x = s.sample_member(rng)?;
        let before = s.classify_orbit(&x)?;
        let y = g.apply(s, &x)?;
        let after = s.classify_orbit(&y)?;
        if before != after {
            return Err(Failure::new(
                format!("{before} mapped to {after}"),
                json!({ "map": matrix_json(g.matrix()), "point": x.to_string(), "image": y.to_string() }),
            ));
        }
    }
    Ok((format!("{trials} pairs, orbit label preserved"), Value::Null))
}

fn transport(rng: &mut ChaCha8Rng, trials: usize) -> Outcome {
    let s = SectionSpace::g15();
    for i in 0..trials {
        let label = OrbitLabel::ALL[i % 4];
        let x = s.sample_orbit(label, rng)?;
        let x2 = s.sample_orbit(label, rng)?;
        let witness = || json!({ "x": x.to_string(), "x2": x2.to_string() });
        let g = transport_line(&s, &x, &x2).map_err(|e| Failure::new(e.to_string(), witness()))?;
        if !is_automorphism(&s, g.matrix())? {
            return Err(Failure::new("transporter is not an automorphism", witness()));
        }
        if g.apply(&s, &x)?.line().subspace() != x2.line().subspace() {
            return Err(Failure::new("transporter misses the target", witness()));
        }
    }
    Ok((format!("{trials} same-orbit pairs transported"), Value::Null))
}

/// A member through a random point of a random `V_j` (alternating with orbit samples).
fn member_through_v(s: &SectionSpace, rng: &mut ChaCha8Rng) -> crate::Result<Option<SectionPoint>> {
    let spans = s.v_spans()?;
    let j = rng.gen_range(0..spans.len());
    let p = spans[j].random_point(rng, DEFAULT_HEIGHT);
    let space = s.solution_space(p.coords())?;
    let q = space.random_point(rng, DEFAULT_HEIGHT);
    Ok(ProjLine::through(&p, &q).ok().and_then(|l| s.point(l).ok()))
}

fn meets_all_v(rng: &mut ChaCha8Rng, trials: usize) -> Outcome {
    let s = SectionSpace::g15();
    let spans = s.v_spans()?.to_vec();
    let mut found = 0;
    for attempt in 0..trials * FILTER_ATTEMPTS_PER_TRIAL {
        if found == trials {
            break;
        }
        let x = if attempt % 2 == 0 {
            Some(s.sample_member(rng)?)
        } else {
            member_through_v(&s, rng)?
        };
        let Some(x) = x else { continue };
        let mut met = 0;
        for v in &spans {
            if x.line().subspace().meet(v)?.is_some() {
                met += 1;
            }
        }
        if met == 0 {
            continue;
        }
        found += 1;
        if met != 3 {
            return Err(Failure::new(format!("{x} meets {met} of the V_j"), json!({ "point": x.to_string() })));
        }
    }
    if found < trials {
        return Err(Failure::new(format!("only {found} of {trials} samples met some V_j"), Value::Null));
    }
    Ok((format!("{trials} members meeting some V_j meet all three"), Value::Null))
}

fn meets_plane_on_conic(rng: &mut ChaCha8Rng, trials: usize) -> Outcome {
    let s = SectionSpace::g14();
    let plane = s.center_plane()?.clone();
    let mut found = 0;
    for attempt in 0..trials * FILTER_ATTEMPTS_PER_TRIAL {
        if found == trials {
            break;
        }
        // alternate orbit samples with members through arbitrary points of P
        let x = if attempt % 2 == 0 {
            Some(s.sample_member(rng)?)
        } else {
            let p = plane.random_point(rng, DEFAULT_HEIGHT);
            let q = s.solution_space(p.coords())?.random_point(rng, DEFAULT_HEIGHT);
            ProjLine::through(&p, &q).ok().and_then(|l| s.point(l).ok())
        };
        let Some(x) = x else { continue };
        let line = x.line().subspace();
        if plane.contains(line) {
            continue;
        }
        let Some(m) = line.meet(&plane)? else { continue };
        found += 1;
        let pt = m.as_point().expect("a line not in a plane meets it in a point");
        if !s.on_center_conic(&pt)? {
            return Err(Failure::new(
                format!("{x} meets P at {pt}, off the conic"),
                json!({ "point": x.to_string(), "meet": pt.to_string() }),
            ));
        }
    }
    if found < trials {
        return Err(Failure::new(format!("only {found} of {trials} samples met P"), Value::Null));
    }
    Ok((format!("{trials} members meeting P meet it on C"), Value::Null))
}

fn corollary(s: &SectionSpace, rng: &mut ChaCha8Rng, want: Rational, class: (usize, usize)) -> Outcome {
    let out = corollary_check(s, rng)?;
    let witness = out.to_json_value();
    let want_class = vec![(TwoRowPartition { a: class.0, b: class.1, n: s.ambient() }, 1)];
    if out.counts != (0, 1) || out.class != want_class {
        return Err(Failure::new(format!("counts {:?}", out.counts), witness));
    }
    if out.value != want {
        return Err(Failure::new(format!("ch₂·[S] = {}", format_rational(&out.value)), witness));
    }
    Ok((
        format!("counts (0,1), [S] = σ_({},{}), ch₂·[S] = {}", class.0, class.1, format_rational(&out.value)),
        witness,
    ))
}

fn even_roots() -> Outcome {
    let p = AntisymPencil::normal_form_g15();
    let members = p.exceptional_lines()?;
    let expected = [
        ([1, 1], [[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0]]),
        ([0, 1], [[0, 0, 1, 0, 0, 0], [0, 0, 0, 1, 0, 0]]),
        ([1, -1], [[0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1]]),
    ];
    let witness = json!(members
        .iter()
        .map(|m| json!({ "parameter": m.parameter.to_string(), "kernel": m.kernel.to_string() }))
        .collect::<Vec<_>>());
    if members.len() != 3 {
        return Err(Failure::new(format!("{} degenerate members", members.len()), witness));
    }
    for (root, [u, w]) in expected {
        let line = LinSubspace::from_i64(&[&u, &w]);
        let ok = members
            .iter()
            .any(|m| m.parameter == ProjPoint::from_i64(&root) && m.kernel == line);
        if !ok {
            return Err(Failure::new(format!("no member at {:?} with kernel {line}", root), witness));
        }
    }
    Ok(("roots (1:1), (0:1), (1:-1) with kernels l1, l2, l3".into(), witness))
}

fn center_curve(rng: &mut ChaCha8Rng, trials: usize) -> Outcome {
    let p = AntisymPencil::normal_form_g14();
    for _ in 0..trials {
        let t = ProjPoint::random(rng, 1, DEFAULT_HEIGHT);
        let (l, m) = (&t.coords()[0], &t.coords()[1]);
        let got = p.center_curve_point(l, m)?;
        let want = ProjPoint::new(vec![Rational::zero(), Rational::zero(), m * m, m * l, l * l])?;
        if got != want {
            return Err(Failure::new(
                format!("c{t} = {got}, expected {want}"),
                json!({ "parameter": t.to_string() }),
            ));
        }
    }
    Ok((format!("c(λ:μ) = (0:0:μ²:μλ:λ²) at {trials} parameters"), Value::Null))
}

fn normalize(rng: &mut ChaCha8Rng, trials: usize) -> Outcome {
    let std = AntisymPencil::normal_form_g15();
    for _ in 0..trials {
        let m = random_invertible(rng, 6, 4);
        let g = random_invertible(rng, 2, 3);
        // reparametrize the pencil, then change coordinates
        let a = &std.a().scale(&g[(0, 0)]) + &std.b().scale(&g[(0, 1)]);
        let b = &std.a().scale(&g[(1, 0)]) + &std.b().scale(&g[(1, 1)]);
        let conj = AntisymPencil::new(a, b)?.congruent(&m)?;
        let witness = || json!({ "congruence": matrix_json(&m), "reparametrization": matrix_json(&g) });
        let n = conj.normalize_even().map_err(|e| Failure::new(e.to_string(), witness()))?;
        let r = &n.mobius;
        let a2 = &conj.a().scale(&r[(0, 0)]) - &conj.b().scale(&r[(1, 0)]);
        let b2 = &conj.b().scale(&r[(1, 1)]) - &conj.a().scale(&r[(0, 1)]);
        let back = AntisymPencil::new(a2, b2)?.congruent(&n.transform.transpose())?;
        if !back.is_even_normal_form() {
            return Err(Failure::new("transform does not reproduce the normal form", witness()));
        }
    }
    Ok((format!("{trials} random conjugates normalized"), Value::Null))
}

fn pfaffian_det(rng: &mut ChaCha8Rng, trials: usize) -> Outcome {
    for i in 0..trials {
        let n = 2 * (1 + i % 3);
        let mut m = RatMatrix::zeros(n, n);
        for r in 0..n {
            for c in r + 1..n {
                let v = Rational::from_integer(rng.gen_range(-9i64..=9).into());
                m[(c, r)] = -v.clone();
                m[(r, c)] = v;
            }
        }
        let pf = pfaffian(&m)?;
        let det = m.det()?;
        if &pf * &pf != det {
            return Err(Failure::new("Pf² ≠ det", json!({ "matrix": matrix_json(&m) })));
        }
    }
    Ok((format!("Pf² = det on {trials} antisymmetric matrices"), Value::Null))
}

fn schubert_duality() -> Outcome {
    let mut pairs = 0;
    for n in [4, 5] {
        let point = TwoRowPartition::point_class(n);
        let all = TwoRowPartition::all(n);
        for s in &all {
            for t in &all {
                if s.codim() + t.codim() != 2 * (n - 1) {
                    continue;
                }
                let closed = pairing_degree(*s, *t)?;
                let pieri = multiply_by_iterated_pieri(*s, *t).coefficient(&point);
                if num_bigint::BigInt::from(closed) != pieri {
                    return Err(Failure::new(
                        format!("{s}·{t} in G(1,{n}): closed form {closed}, Pieri {pieri}"),
                        Value::Null,
                    ));
                }
                pairs += 1;
            }
        }
    }
    Ok((format!("{pairs} complementary pairs agree at N = 4, 5"), Value::Null))
}

fn matrix_json(m: &RatMatrix) -> Value {
    json!(m
        .row_vecs()
        .iter()
        .map(|r| r.iter().map(format_rational).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}
