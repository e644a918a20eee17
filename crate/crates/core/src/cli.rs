//! Job descriptions and the commands behind the `defhull` binary.
//!
//! A job is one JSON document. Matrices are row-major lists of exact scalar strings,
//! polynomials are written as expressions in the ring's variable names.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::artin::TestRing;
use crate::complexes::{cohomology, presentation_complex, split, CohomologyData, DeltaComplex, LocalSystem, Presentation};
use crate::dgla::{def_class_representatives, def_classes, dgla_from_complex, Dgla};
use crate::error::{Error, Result};
use crate::hull::{brute_force_def, build_hull, hull_vs_oracle, quadratic_vs_cup, representation_classes, HullPresentation, OracleMethod, DEFAULT_ORDER};
use crate::linalg::{Field, Matrix, Scalar};
use crate::mpoly::{MPoly, Mono};
use crate::orbits::DEFAULT_BUDGET;
use crate::sdc::exp_log_compare;
use crate::weights::{degree_bound_certificate, equivariant_hull, f_equivariant, induced_action, weight_decomposition, DegreeBound, FrobeniusAction};

pub type MatrixSpec = Vec<Vec<String>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InputSpec {
    Presentation {
        generators: Vec<String>,
        #[serde(default)]
        relators: Vec<String>,
    },
    /// Either a named fixture (`point`, `circle`, `torus`, `wedge-<k>`) or an explicit cell table.
    DeltaComplex {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        fixture: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        vertices: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cells: Option<Vec<Vec<Vec<usize>>>>,
    },
    /// A DGLA given directly, concentrated in degrees 0..3.
    Dgla {
        dims: [usize; 4],
        #[serde(default)]
        differentials: Vec<DifferentialSpec>,
        #[serde(default)]
        brackets: Vec<BracketSpec>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentialSpec {
    pub degree: usize,
    pub matrix: MatrixSpec,
}

/// `[e^p_a, e^q_b] = value`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketSpec {
    pub p: usize,
    pub a: usize,
    pub q: usize,
    pub b: usize,
    pub value: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RingSpec {
    Dual,
    Truncated { n: u32 },
    Quotient {
        variables: Vec<String>,
        #[serde(default)]
        relations: Vec<String>,
        truncation: u32,
    },
}

/// `Φ` on the governing DGLA, either degree by degree or as maps on cells tensored with the
/// identity of the fibre.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusSpec {
    pub q: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<Vec<MatrixSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cell_maps: Option<Vec<MatrixSpec>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobDescription {
    pub input: InputSpec,
    #[serde(default = "default_field")]
    pub field: String,
    #[serde(default = "default_rank")]
    pub rank: usize,
    /// One matrix per generator (presentations) or per edge (cell tables); trivial when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transport: Option<Vec<MatrixSpec>>,
    #[serde(default)]
    pub rings: Vec<RingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frobenius: Option<FrobeniusSpec>,
    /// Relators used by the representation oracle in place of the input's.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_relators: Option<Vec<String>>,
}

fn default_field() -> String {
    "Q".into()
}

fn default_rank() -> usize {
    1
}

impl JobDescription {
    pub fn from_json(text: &str) -> Result<JobDescription> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("jobs serialize")
    }

    pub fn field(&self) -> Result<Field> {
        Field::parse(&self.field)
    }

    /// Checks that every name resolves and every matrix has the right shape.
    pub fn validate(&self) -> Result<()> {
        let field = self.field()?;
        self.geometry(field)?;
        for r in &self.rings {
            ring_of(r, field)?;
        }
        Ok(())
    }

    fn geometry(&self, field: Field) -> Result<Geometry> {
        match &self.input {
            InputSpec::Presentation { generators, relators } => {
                let gens: Vec<&str> = generators.iter().map(String::as_str).collect();
                let rels: Vec<&str> = relators.iter().map(String::as_str).collect();
                let p = Presentation::parse(&gens, &rels)?;
                let pc = presentation_complex(&p)?;
                let images = self.matrices(field, generators.len())?;
                let sys = pc.local_system(field, &images)?;
                Ok(Geometry::Complex { x: pc.complex, sys, presentation: Some((p, images)) })
            }
            InputSpec::DeltaComplex { fixture, vertices, cells } => {
                let x = match (fixture, cells) {
                    (Some(name), None) => named_complex(name)?,
                    (None, Some(c)) => DeltaComplex::with_vertices(vertices.unwrap_or(1), c.clone())?,
                    _ => return Err(Error::Schema("give exactly one of `fixture` and `cells`".into())),
                };
                let images = self.matrices(field, x.count(1))?;
                let sys = LocalSystem::new(&x, field, self.rank, images)?;
                Ok(Geometry::Complex { x, sys, presentation: None })
            }
            InputSpec::Dgla { dims, differentials, brackets } => {
                let mut d = Dgla::zero(field, *dims);
                for spec in differentials {
                    if spec.degree > 2 {
                        return Err(Error::Schema(format!("differential in degree {}", spec.degree)));
                    }
                    d.set_differential(spec.degree, parse_matrix(field, &spec.matrix)?)?;
                }
                for b in brackets {
                    let v = b.value.iter().map(|s| field.parse_scalar(s)).collect::<Result<Vec<_>>>()?;
                    d.set_bracket(b.p, b.a, b.q, b.b, &v)?;
                }
                d.validate()?;
                Ok(Geometry::Dgla(d))
            }
        }
    }

    fn matrices(&self, field: Field, count: usize) -> Result<Vec<Matrix>> {
        match &self.transport {
            None => Ok(vec![Matrix::identity(field, self.rank); count]),
            Some(ms) => {
                if ms.len() != count {
                    return Err(Error::Schema(format!("{} transport matrices for {count} slots", ms.len())));
                }
                let out = ms.iter().map(|m| parse_matrix(field, m)).collect::<Result<Vec<_>>>()?;
                if out.iter().any(|m| m.rows() != self.rank || m.cols() != self.rank) {
                    return Err(Error::Schema(format!("transport matrices must be {0}x{0}", self.rank)));
                }
                Ok(out)
            }
        }
    }
}

enum Geometry {
    Complex { x: DeltaComplex, sys: LocalSystem, presentation: Option<(Presentation, Vec<Matrix>)> },
    Dgla(Dgla),
}

impl Geometry {
    fn dgla(&self) -> Result<Dgla> {
        match self {
            Geometry::Complex { x, sys, .. } => dgla_from_complex(x, sys),
            Geometry::Dgla(d) => Ok(d.clone()),
        }
    }
}

fn named_complex(name: &str) -> Result<DeltaComplex> {
    match name {
        "point" => Ok(DeltaComplex::point()),
        "circle" => Ok(DeltaComplex::circle()),
        "torus" => Ok(DeltaComplex::torus(2)),
        _ => match name.strip_prefix("wedge-").and_then(|k| k.parse().ok()) {
            Some(k) => Ok(DeltaComplex::wedge_of_circles(k)),
            None => Err(Error::Schema(format!("unknown fixture `{name}`"))),
        },
    }
}

pub fn parse_matrix(field: Field, m: &MatrixSpec) -> Result<Matrix> {
    let rows = m
        .iter()
        .map(|r| r.iter().map(|s| field.parse_scalar(s)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(Error::Schema("ragged matrix".into()));
    }
    Matrix::from_rows(field, rows)
}

pub fn ring_of(spec: &RingSpec, field: Field) -> Result<TestRing> {
    match spec {
        RingSpec::Dual => Ok(TestRing::dual_numbers(field)),
        RingSpec::Truncated { n } => TestRing::truncated_polynomial(field, *n),
        RingSpec::Quotient { variables, relations, truncation } => {
            let rels = relations.iter().map(|r| MPoly::parse(field, variables, r)).collect::<Result<Vec<_>>>()?;
            TestRing::new(field, variables, &rels, *truncation, None)
        }
    }
}

fn ring_label(spec: &RingSpec, field: Field) -> String {
    match spec {
        RingSpec::Dual => format!("{field}[e]/(e^2)"),
        RingSpec::Truncated { n } => format!("{field}[t]/(t^{n})"),
        RingSpec::Quotient { variables, relations, truncation } => {
            let mut gens: Vec<String> = relations.clone();
            gens.push(format!("m^{truncation}"));
            format!("{field}[{}]/({})", variables.join(","), gens.join(", "))
        }
    }
}

/// Flag overrides applied on top of a job.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub order: Option<u32>,
    pub prime: Option<u32>,
    pub budget: Option<u64>,
    pub tolerance: Option<u32>,
}

impl Overrides {
    pub fn apply(&self, job: &mut JobDescription) {
        if let Some(p) = self.prime {
            job.field = format!("F{p}");
        }
        if self.order.is_some() {
            job.order = self.order;
        }
        if self.budget.is_some() {
            job.budget = self.budget;
        }
        if self.tolerance.is_some() {
            job.tolerance = self.tolerance;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Cohomology,
    Hull,
    Oracle,
    Weights,
    Selftest,
}

impl Command {
    pub fn parse(s: &str) -> Result<Command> {
        match s {
            "cohomology" => Ok(Command::Cohomology),
            "hull" => Ok(Command::Hull),
            "oracle" => Ok(Command::Oracle),
            "weights" => Ok(Command::Weights),
            "selftest" => Ok(Command::Selftest),
            _ => Err(Error::Schema(format!("unknown command `{s}`"))),
        }
    }
}

/// Output of one command. `passed` is false only for an oracle or selftest failure.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub text: String,
    pub json: Value,
    pub passed: bool,
}

impl Report {
    pub fn json_string(&self) -> String {
        serde_json::to_string_pretty(&self.json).expect("reports serialize")
    }

    /// 0 on success, 5 on a failed comparison.
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            5
        }
    }
}

pub fn run(command: Command, job: &JobDescription) -> Result<Report> {
    match command {
        Command::Cohomology => cmd_cohomology(job),
        Command::Hull => cmd_hull(job),
        Command::Oracle => cmd_oracle(job),
        Command::Weights => cmd_weights(job),
        Command::Selftest => selftest(),
    }
}

fn render_vec(v: &[Scalar]) -> Vec<String> {
    v.iter().map(|c| c.to_string()).collect()
}

fn dgla_cohomology(d: &Dgla) -> Result<Vec<CohomologyData>> {
    (0..3)
        .map(|n| {
            let prev = if n == 0 { Matrix::zeros(d.field(), d.dim(0), 0) } else { d.differential(n - 1) };
            split(n, &prev, &d.differential(n), None)
        })
        .collect()
}

pub fn cmd_cohomology(job: &JobDescription) -> Result<Report> {
    let field = job.field()?;
    let hs = match job.geometry(field)? {
        Geometry::Complex { x, sys, .. } => (0..3).map(|n| cohomology(&x, &sys, n)).collect::<Result<Vec<_>>>()?,
        Geometry::Dgla(d) => dgla_cohomology(&d)?,
    };
    let dims: Vec<usize> = hs.iter().map(|h| h.dim()).collect();
    let bases: Vec<Vec<Vec<String>>> = hs.iter().map(|h| h.representatives.iter().map(|r| render_vec(r)).collect()).collect();
    let mut text = format!("{} {} {}\n", dims[0], dims[1], dims[2]);
    for (n, b) in bases.iter().enumerate() {
        for v in b {
            text.push_str(&format!("H{n}: [{}]\n", v.join(", ")));
        }
    }
    Ok(Report { text, json: json!({ "command": "cohomology", "field": field.to_string(), "dims": dims, "bases": bases }), passed: true })
}

fn order_of(job: &JobDescription) -> u32 {
    job.order.unwrap_or(DEFAULT_ORDER)
}

fn relation_json(f: &MPoly) -> Value {
    let terms: Vec<Value> = f.to_term_list().into_iter().map(|(e, c)| json!([e, c])).collect();
    Value::Array(terms)
}

fn hull_json(hp: &HullPresentation) -> Value {
    json!({
        "field": hp.field.to_string(),
        "truncation": hp.truncation,
        "variables": hp.variables,
        "weights": hp.weights,
        "relation_weights": hp.relation_weights,
        "relations": hp.relations.iter().map(|f| f.render(&hp.variables)).collect::<Vec<_>>(),
        "terms": hp.relations.iter().map(relation_json).collect::<Vec<_>>(),
    })
}

fn quadratic_rank(hp: &HullPresentation) -> Result<usize> {
    let quad = hp.quadratic_parts();
    if quad.is_empty() {
        return Ok(0);
    }
    let monos = Mono::of_degree(hp.nvars(), 2);
    let rows = quad.iter().map(|f| monos.iter().map(|m| f.coeff(m)).collect()).collect();
    Ok(Matrix::from_rows(hp.field, rows)?.rank())
}

pub fn cmd_hull(job: &JobDescription) -> Result<Report> {
    let field = job.field()?;
    let d = job.geometry(field)?.dgla()?;
    let hp = build_hull(&d, order_of(job), None)?;
    let quad_rank = quadratic_rank(&hp)?;
    let cup = quadratic_vs_cup(&hp, &d)?;
    let mut text = format!(
        "variables: {}\nrelations: {}\nquadratic rank: {quad_rank}\nquadratic part is the dual half cup: {cup}\n",
        hp.nvars(),
        hp.relations.len()
    );
    for f in &hp.relations {
        text.push_str(&format!("  {}\n", f.render(&hp.variables)));
    }
    let json = json!({
        "command": "hull",
        "hull": hull_json(&hp),
        "quadratic_rank": quad_rank,
        "quadratic_vs_cup": cup,
    });
    Ok(Report { text, json, passed: true })
}

/// Hull for the oracle: over ℚ when the transports are flat there, otherwise over the job's
/// prime field when its characteristic allows.
fn oracle_hull(job: &JobDescription, order: u32) -> Option<HullPresentation> {
    let try_field = |field: Field| -> Result<HullPresentation> {
        let d = job.geometry(field)?.dgla()?;
        build_hull(&d, order, None)
    };
    try_field(Field::Rational).or_else(|_| try_field(job.field()?)).ok()
}

pub fn cmd_oracle(job: &JobDescription) -> Result<Report> {
    let field = job.field()?;
    if field.order().is_none() {
        return Err(Error::Precondition("the oracle runs over a finite field".into()));
    }
    if job.rings.is_empty() {
        return Err(Error::Schema("the oracle needs at least one ring".into()));
    }
    let budget = job.budget.unwrap_or(DEFAULT_BUDGET);
    let geometry = job.geometry(field)?;
    let max_nil = job.rings.iter().map(|r| ring_of(r, field).map(|a| a.exact_nilpotency())).collect::<Result<Vec<_>>>()?;
    let order = order_of(job).max(max_nil.into_iter().max().unwrap_or(2).saturating_sub(1));
    let hull = match geometry {
        Geometry::Dgla(_) => None,
        _ => oracle_hull(job, order),
    };
    let mut text = String::new();
    let mut runs = Vec::new();
    let mut passed = true;
    for spec in &job.rings {
        let ring = ring_of(spec, field)?;
        let label = ring_label(spec, field);
        let mut counts: Vec<(&str, u128)> = Vec::new();
        let mut notes: Vec<String> = Vec::new();
        let mut points = None;
        let mut fibres = None;
        match &geometry {
            Geometry::Complex { x, sys, presentation } => {
                let cmp = exp_log_compare(x, sys, &ring, budget, 20, 0)?;
                counts.push(("dgla", cmp.dgla_classes));
                counts.push(("sdc", cmp.sdc_classes));
                if !cmp.samples_agree {
                    notes.push("exp/log comparison maps disagree on a sample".into());
                    passed = false;
                }
                if let Some((p, rho0)) = presentation {
                    let oracle_p = match &job.oracle_relators {
                        Some(rels) => {
                            let gens: Vec<&str> = p.generators.iter().map(String::as_str).collect();
                            let rels: Vec<&str> = rels.iter().map(String::as_str).collect();
                            Presentation::parse(&gens, &rels)?
                        }
                        None => p.clone(),
                    };
                    let (oracle, method) = match brute_force_def(&oracle_p, rho0, &ring, budget) {
                        Ok(c) => (c.count, OracleMethod::Exhaustive),
                        Err(Error::Budget { .. }) => (representation_classes(&oracle_p, rho0, &ring, budget)?, OracleMethod::Tower),
                        Err(e) => return Err(e),
                    };
                    counts.push(("representations", oracle));
                    notes.push(format!("representation oracle: {method:?}"));
                    match &hull {
                        Some(hp) if ring.exact_nilpotency() <= hp.truncation + 1 => {
                            let rep = hull_vs_oracle(hp, p, rho0, &ring, budget)?;
                            points = Some(rep.presentation_points);
                            fibres = rep.fibre_sizes.clone();
                            if rep.presentation_points < rep.dgla_classes {
                                notes.push("fewer hull points than classes".into());
                                passed = false;
                            }
                        }
                        _ => notes.push("hull points skipped: no hull in this characteristic".into()),
                    }
                }
            }
            Geometry::Dgla(d) => {
                counts.push(("dgla", def_classes(d, &ring, budget)?.count));
                counts.push(("enumeration", def_class_representatives(d, &ring, budget)?.count));
            }
        }
        let agree = counts.windows(2).all(|w| w[0].1 == w[1].1);
        if !agree {
            passed = false;
            notes.push(format!(
                "mismatch: {}",
                counts.iter().map(|(n, c)| format!("{n} = {c}")).collect::<Vec<_>>().join(", ")
            ));
        }
        let shown: Vec<String> = counts.iter().map(|(_, c)| c.to_string()).collect();
        text.push_str(&format!("{label}: {} {}\n", if agree { "pass" } else { "FAIL" }, shown.join(" = ")));
        if let Some(p) = points {
            text.push_str(&format!("  hull points: {p}\n"));
        }
        for n in &notes {
            text.push_str(&format!("  {n}\n"));
        }
        runs.push(json!({
            "ring": label,
            "counts": counts.iter().map(|(n, c)| json!({ "source": n, "classes": c.to_string() })).collect::<Vec<_>>(),
            "hull_points": points.map(|p| p.to_string()),
            "fibre_sizes": fibres.map(|f| f.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
            "agree": agree,
            "notes": notes,
        }));
    }
    Ok(Report { text, json: json!({ "command": "oracle", "field": field.to_string(), "runs": runs, "passed": passed }), passed })
}

fn frobenius_of(d: &Dgla, spec: &FrobeniusSpec, fibre: usize) -> Result<FrobeniusAction> {
    let field = d.field();
    let mut phi: Vec<Matrix> = (0..4).map(|n| Matrix::identity(field, d.dim(n))).collect();
    match (&spec.matrices, &spec.cell_maps) {
        (Some(ms), None) => {
            for (n, m) in ms.iter().enumerate().take(4) {
                phi[n] = parse_matrix(field, m)?;
            }
        }
        (None, Some(ms)) => {
            for (n, m) in ms.iter().enumerate().take(4) {
                phi[n] = parse_matrix(field, m)?.kron(&Matrix::identity(field, fibre));
            }
        }
        _ => return Err(Error::Schema("give exactly one of `matrices` and `cell_maps`".into())),
    }
    for (n, m) in phi.iter().enumerate() {
        if m.rows() != d.dim(n) || m.cols() != d.dim(n) {
            return Err(Error::Schema(format!("Φ in degree {n} must be {0}x{0}", d.dim(n))));
        }
    }
    FrobeniusAction::new(d, phi, spec.q)
}

fn certificate_text(b: &DegreeBound) -> String {
    match b {
        DegreeBound::Bounded(2) => "quadratic".into(),
        DegreeBound::Bounded(n) => format!("degree <= {n}"),
        DegreeBound::NoBound => "no bound".into(),
    }
}

pub fn cmd_weights(job: &JobDescription) -> Result<Report> {
    let field = job.field()?;
    if field != Field::Rational {
        return Err(Error::Precondition("weights are computed over Q".into()));
    }
    let spec = job.frobenius.as_ref().ok_or_else(|| Error::Schema("the weights command needs `frobenius`".into()))?;
    let d = job.geometry(field)?.dgla()?;
    let phi = frobenius_of(&d, spec, job.rank * job.rank)?;
    let hs = dgla_cohomology(&d)?;
    let mut per_degree = Vec::new();
    let mut text = String::new();
    for h in &hs[1..] {
        let dec = weight_decomposition(&induced_action(&phi, h)?, spec.q)?;
        let w = dec.basis_weights();
        text.push_str(&format!("H{} weights: {:?}\n", h.degree, w));
        per_degree.push(w);
    }
    let hp = equivariant_hull(&d, &phi, order_of(job))?;
    let equivariant = f_equivariant(&hp, &phi)?;
    let w1: Vec<i64> = hp.weights.clone().unwrap_or_default().iter().map(|w| -w).collect();
    let w2: Vec<i64> = hp.relation_weights.clone().unwrap_or_default().iter().map(|w| -w).collect();
    let cert = degree_bound_certificate(&w1, &w2);
    let verdict = certificate_text(&cert.bound);
    text.push_str(&format!("hull: {} variables, {} relations, f-equivariant: {equivariant}\n", hp.nvars(), hp.relations.len()));
    for f in &hp.relations {
        text.push_str(&format!("  {}\n", f.render(&hp.variables)));
    }
    text.push_str(&format!("certificate: {verdict}\n"));
    if !cert.unreachable.is_empty() {
        text.push_str(&format!("  unreachable H2 weights: {:?}\n", cert.unreachable));
    }
    let json = json!({
        "command": "weights",
        "q": spec.q,
        "h1_weights": per_degree[0],
        "h2_weights": per_degree[1],
        "hull": hull_json(&hp),
        "f_equivariant": equivariant,
        "certificate": verdict,
        "unreachable": cert.unreachable,
    });
    Ok(Report { text, json, passed: equivariant })
}

/// Built-in fixtures, name and job.
pub fn fixtures() -> Vec<(&'static str, JobDescription)> {
    let m = |rows: &[&[&str]]| -> MatrixSpec { rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect() };
    let pres = |gens: &[&str], rels: &[&str]| InputSpec::Presentation {
        generators: gens.iter().map(|s| s.to_string()).collect(),
        relators: rels.iter().map(|s| s.to_string()).collect(),
    };
    let delta = |name: &str| InputSpec::DeltaComplex { fixture: Some(name.into()), vertices: None, cells: None };
    let base = |input: InputSpec| JobDescription {
        input,
        field: "Q".into(),
        rank: 1,
        transport: None,
        rings: Vec::new(),
        order: None,
        budget: None,
        tolerance: None,
        frobenius: None,
        oracle_relators: None,
    };
    let torus = || pres(&["a", "b"], &["a*b*a^-1*b^-1"]);
    let free = || pres(&["a", "b"], &[]);
    let mut out = Vec::new();
    out.push(("torus-rank1", base(delta("torus"))));
    out.push(("wedge", base(delta("wedge-2"))));
    out.push(("twisted-torus", JobDescription { transport: Some(vec![m(&[&["2"]]), m(&[&["3"]]), m(&[&["6"]])]), ..base(delta("torus")) }));
    out.push(("free-group", base(free())));
    out.push(("torus-rank2", JobDescription { rank: 2, ..base(torus()) }));
    out.push(("oracle-free-f3", JobDescription { field: "F3".into(), rings: vec![RingSpec::Dual], ..base(free()) }));
    out.push(("oracle-torus-f3", JobDescription { field: "F3".into(), rings: vec![RingSpec::Dual], ..base(torus()) }));
    out.push((
        "oracle-corrupted",
        JobDescription { field: "F3".into(), rings: vec![RingSpec::Dual], oracle_relators: Some(vec!["a*b".into()]), ..base(torus()) },
    ));
    out.push((
        "weights-pure",
        JobDescription {
            rank: 2,
            frobenius: Some(FrobeniusSpec {
                q: 4,
                matrices: None,
                cell_maps: Some(vec![m(&[&["1"]]), m(&[&["2", "0", "0"], &["0", "2", "0"], &["-2", "-2", "4"]]), m(&[&["4", "0"], &["0", "4"]])]),
            }),
            ..base(delta("torus"))
        },
    ));
    out.push(("weights-mixed", JobDescription { frobenius: Some(mixed_frobenius()), ..base(mixed_dgla()) }));
    out.push((
        "weights-zero",
        JobDescription { frobenius: Some(FrobeniusSpec { q: 5, matrices: None, cell_maps: Some(Vec::new()) }), ..base(delta("torus")) },
    ));
    out
}

/// `L¹ = <u1, u2, v, a>` of weights 1, 1, 2, 2 and `L² = <s, r2, r3, r4>` of weights 2, 2, 3, 4.
fn mixed_dgla() -> InputSpec {
    let e = |i: usize, c: &str| -> Vec<String> { (0..4).map(|j| if j == i { c.to_string() } else { "0".into() }).collect() };
    let br = |a: usize, b: usize, v: Vec<String>| BracketSpec { p: 1, a, q: 1, b, value: v };
    let mut d1 = vec![vec!["0".to_string(); 4]; 4];
    d1[0][3] = "1".into();
    InputSpec::Dgla {
        dims: [0, 4, 4, 0],
        differentials: vec![DifferentialSpec { degree: 1, matrix: d1 }],
        brackets: vec![br(0, 1, e(0, "1")), br(0, 2, e(2, "1")), br(0, 3, e(2, "1")), br(1, 1, e(1, "2")), br(2, 2, e(3, "2"))],
    }
}

fn mixed_frobenius() -> FrobeniusSpec {
    let diag = |v: &[&str]| -> MatrixSpec {
        (0..v.len()).map(|i| (0..v.len()).map(|j| if i == j { v[i].to_string() } else { "0".into() }).collect()).collect()
    };
    FrobeniusSpec { q: 4, matrices: Some(vec![Vec::new(), diag(&["2", "2", "4", "4"]), diag(&["4", "4", "8", "16"]), Vec::new()]), cell_maps: None }
}

pub fn fixture(name: &str) -> Option<JobDescription> {
    fixtures().into_iter().find(|(n, _)| *n == name).map(|(_, j)| j)
}

/// Runs each command on the built-in fixtures and checks the expected answers.
pub fn selftest() -> Result<Report> {
    let checks: Vec<(&str, Command, &str, Box<dyn Fn(&Report) -> bool>)> = vec![
        ("torus-rank1", Command::Cohomology, "cohomology 1 2 1", Box::new(|r| r.json["dims"] == json!([1, 2, 1]))),
        ("wedge", Command::Cohomology, "cohomology 1 2 0", Box::new(|r| r.json["dims"] == json!([1, 2, 0]))),
        ("twisted-torus", Command::Cohomology, "cohomology 0 0 0", Box::new(|r| r.json["dims"] == json!([0, 0, 0]))),
        (
            "free-group",
            Command::Hull,
            "free hull",
            Box::new(|r| r.json["hull"]["variables"].as_array().map(Vec::len) == Some(2) && r.json["hull"]["relations"] == json!([])),
        ),
        (
            "torus-rank2",
            Command::Hull,
            "quadratic rank-3 hull",
            Box::new(|r| r.json["hull"]["variables"].as_array().map(Vec::len) == Some(8) && r.json["quadratic_rank"] == json!(3)),
        ),
        ("oracle-free-f3", Command::Oracle, "oracle 9 = 9", Box::new(|r| r.passed && r.text.contains("9 = 9"))),
        ("oracle-torus-f3", Command::Oracle, "oracle 9 = 9", Box::new(|r| r.passed && r.text.contains("9 = 9"))),
        ("oracle-corrupted", Command::Oracle, "corrupted relator fails", Box::new(|r| !r.passed && r.text.contains("mismatch"))),
        ("weights-pure", Command::Weights, "quadratic", Box::new(|r| r.json["certificate"] == json!("quadratic"))),
        ("weights-mixed", Command::Weights, "degree <= 4", Box::new(|r| r.json["certificate"] == json!("degree <= 4"))),
        ("weights-zero", Command::Weights, "no bound", Box::new(|r| r.json["certificate"] == json!("no bound"))),
    ];
    let mut text = String::new();
    let mut results = Vec::new();
    let mut passed = true;
    for (name, cmd, what, ok) in checks {
        let job = fixture(name).expect("fixture exists");
        let good = run(cmd, &job).map(|r| ok(&r)).unwrap_or(false);
        passed &= good;
        text.push_str(&format!("{} {name}: {what}\n", if good { "PASS" } else { "FAIL" }));
        results.push(json!({ "fixture": name, "check": what, "passed": good }));
    }
    Ok(Report { text, json: json!({ "command": "selftest", "results": results, "passed": passed }), passed })
}
