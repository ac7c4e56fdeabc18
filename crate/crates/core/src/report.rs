//! Analysis pipeline and report rendering.
//!
//! Rationals are always printed as `p/q` (so `1` is `1/1`); real values are
//! printed with nine decimals. Field order is fixed, so identical inputs give
//! byte-identical output when timing is off.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::bounds::{self, BoundValue};
use crate::error::{Error, Result};
use crate::graph::{
    build_coset_graph, covering_radius_bruteforce, MAX_BRUTEFORCE_LENGTH, MAX_GRAPH_DIM,
};
use crate::local::{self, PerfectVerdict, MAX_EXACT_PACKING_LENGTH};
use crate::transport::{self, Rational, Verdict};
use crate::zoo::LinearCode;

pub fn fmt_rational(r: Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn fmt_real(x: f64) -> String {
    format!("{x:.9}")
}

fn fmt_bound(v: BoundValue) -> String {
    match v {
        BoundValue::Exact(r) => fmt_rational(r),
        BoundValue::Real(x) => fmt_real(x),
    }
}

/// Output format shared by every subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(Error::out_of_range("format", s, "json, csv or text")),
        }
    }
}

/// A serializable record with a human-readable rendering.
pub trait Render: Serialize {
    fn text(&self) -> String;

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Csv => to_csv(&serde_json::to_value(self).expect("report serializes")),
            Format::Text => self.text(),
        }
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => map.iter().for_each(|(k, v)| flatten(&key(k), v, out)),
        Value::Array(items) if !items.is_empty() => items
            .iter()
            .enumerate()
            .for_each(|(i, v)| flatten(&key(&i.to_string()), v, out)),
        Value::Array(_) => out.push((prefix.to_string(), String::new())),
        Value::Null => out.push((prefix.to_string(), String::new())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

/// `key,value` rows with dotted paths into the JSON form.
fn to_csv(v: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["key", "value"]).expect("in-memory write");
    for (k, v) in rows {
        w.write_record([k, v]).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CodeIdentity {
    /// `construct` or `file`.
    pub source: String,
    /// Constructor spec or file path.
    pub name: String,
    pub rows: usize,
}

impl CodeIdentity {
    pub fn constructed(name: &str, code: &LinearCode) -> Self {
        Self {
            source: "construct".into(),
            name: name.into(),
            rows: code.generator().rows(),
        }
    }

    pub fn file(path: &str, code: &LinearCode) -> Self {
        Self {
            source: "file".into(),
            name: path.into(),
            rows: code.generator().rows(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Measured {
    pub n: usize,
    pub dim: usize,
    /// `None` when the coset graph exceeds the dimension cap.
    pub diameter: Option<usize>,
    /// Exhaustive over `F_2^n`, only for `n <= 20`.
    pub covering_radius: Option<usize>,
    pub kappa_graph: Option<String>,
    pub max_jump: Option<String>,
    #[serde(rename = "K")]
    pub k: Option<usize>,
    pub sigma: usize,
    pub p: usize,
    pub t: usize,
    pub regular: bool,
    pub zero_columns: usize,
    pub sphere_profile: Option<Vec<usize>>,
    /// Exhaustive, only for `n <= 16`.
    pub perfect_3lcc: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Hypothesis not met; no verdict.
    Na,
    /// Certifying bound whose measured side was not computed.
    Unmeasured,
    /// Asymptotic formula with unit constant; never a verdict.
    Informational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundEntry {
    pub id: &'static str,
    pub anchor: &'static str,
    pub value: Option<String>,
    /// Name of the measured quantity the bound constrains.
    pub compares_to: &'static str,
    pub measured: Option<String>,
    pub certifying: bool,
    pub status: Status,
    pub note: String,
}

/// Every bound id with the result it instantiates. Entries can only be
/// created for ids listed here.
pub const ANCHORS: &[(&str, &str, bool)] = &[
    (
        "pair_diameter",
        "pair representations: diam(T) <= n/(K+1)",
        true,
    ),
    (
        "curvature_lower_bound",
        "pair representations: kappa(T) >= 2(K+1)/(n+1)",
        true,
    ),
    (
        "ball_dimension",
        "ball counting: dim <= log2 |B(n, floor(n/(K+1)))|",
        true,
    ),
    (
        "ball_dimension_measured",
        "ball counting: dim <= log2 |B(n, diam(T))|",
        true,
    ),
    (
        "entropy_dimension",
        "ball counting: dim <= n H(1/(K+1))",
        true,
    ),
    (
        "closed_form_dimension",
        "ball counting: dim <= (n log2(K+1) + n/ln 2)/(K+1)",
        true,
    ),
    (
        "bonnet_myers",
        "discrete Bonnet-Myers: diam(T) <= 2 max J / kappa(T)",
        true,
    ),
    (
        "bounded_repetition_pairs",
        "bounded repetitions: K >= ceil(sigma/p)",
        true,
    ),
    (
        "regular_ltc_dimension",
        "regular LTC: dim <= 2n/sqrt(sigma)",
        true,
    ),
    (
        "ltc_layout_identity",
        "bounded-repetition construction: dim = n/(2 sigma/p)",
        true,
    ),
    (
        "ltc_layout_identity_ceil",
        "bounded-repetition construction: n/(2 ceil(sigma/p))",
        false,
    ),
    (
        "pair_density_diameter",
        "2-LCC: diam(T) <= 1/delta with delta = K/n",
        false,
    ),
    (
        "lcc_covering_radius_order",
        "q-LCC: covering radius O(n^((q-2)/(q-1)))",
        false,
    ),
    (
        "lcc_dimension_order",
        "q-LCC: dim O(n^((q-2)/(q-1)) (log2 n)^(1/(q-1)))",
        false,
    ),
    (
        "perfect_lcc_dimension_order",
        "perfect 3-LCC: dim O(sqrt n)",
        false,
    ),
    (
        "bounded_repetition_order",
        "bounded repetitions: dim O(log2(ceil(sigma/p))/ceil(sigma/p) n)",
        false,
    ),
    (
        "regular_ltc_prior_order",
        "regular LTC, earlier bound: dim O(log2(sigma)/sqrt(sigma) n)",
        false,
    ),
];

fn anchor(id: &str) -> (&'static str, &'static str, bool) {
    *ANCHORS
        .iter()
        .find(|(i, _, _)| *i == id)
        .unwrap_or_else(|| panic!("bound id `{id}` has no anchor"))
}

struct EntryBuilder {
    id: &'static str,
    anchor: &'static str,
    certifying: bool,
    compares_to: &'static str,
}

fn entry(id: &str, compares_to: &'static str) -> EntryBuilder {
    let (id, anchor, certifying) = anchor(id);
    EntryBuilder {
        id,
        anchor,
        certifying,
        compares_to,
    }
}

impl EntryBuilder {
    fn finish(
        self,
        value: Option<String>,
        measured: Option<String>,
        status: Status,
        note: impl Into<String>,
    ) -> BoundEntry {
        debug_assert!(self.certifying || status == Status::Informational);
        BoundEntry {
            id: self.id,
            anchor: self.anchor,
            value,
            compares_to: self.compares_to,
            measured,
            certifying: self.certifying,
            status,
            note: note.into(),
        }
    }

    fn verdict(self, value: String, measured: Option<String>, pass: Option<bool>) -> BoundEntry {
        let status = match pass {
            Some(true) => Status::Pass,
            Some(false) => Status::Fail,
            None => Status::Unmeasured,
        };
        self.finish(Some(value), measured, status, "")
    }

    fn na(self, why: impl Into<String>) -> BoundEntry {
        self.finish(None, None, Status::Na, why)
    }

    fn info(self, value: String, measured: Option<String>, note: impl Into<String>) -> BoundEntry {
        self.finish(Some(value), measured, Status::Informational, note)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub code: CodeIdentity,
    pub measured: Measured,
    pub bounds: Vec<BoundEntry>,
    /// Seconds per stage; empty unless timing was requested.
    pub timing: BTreeMap<String, String>,
}

impl BoundReport {
    /// True iff no certifying entry failed.
    pub fn all_certifying_pass(&self) -> bool {
        self.bounds
            .iter()
            .all(|b| !b.certifying || b.status != Status::Fail)
    }

    pub fn bound(&self, id: &str) -> Option<&BoundEntry> {
        self.bounds.iter().find(|b| b.id == id)
    }
}

impl Render for BoundReport {
    fn text(&self) -> String {
        let m = &self.measured;
        let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
        let mut s = String::new();
        let _ = writeln!(s, "code       {} ({})", self.code.name, self.code.source);
        let _ = writeln!(s, "n, dim     {}, {}", m.n, m.dim);
        let _ = writeln!(s, "diameter   {}", opt(m.diameter.map(|d| d.to_string())));
        let _ = writeln!(
            s,
            "cov radius {}",
            opt(m.covering_radius.map(|d| d.to_string()))
        );
        let _ = writeln!(s, "kappa      {}", opt(m.kappa_graph.clone()));
        let _ = writeln!(s, "max J      {}", opt(m.max_jump.clone()));
        let _ = writeln!(s, "K          {}", opt(m.k.map(|d| d.to_string())));
        let _ = writeln!(
            s,
            "sigma, p, t {}, {}, {} (regular: {})",
            m.sigma, m.p, m.t, m.regular
        );
        if let Some(profile) = &m.sphere_profile {
            let sizes: Vec<String> = profile.iter().map(ToString::to_string).collect();
            let _ = writeln!(s, "spheres    {}", sizes.join(" "));
        }
        let _ = writeln!(s);
        for b in &self.bounds {
            let status = serde_json::to_value(b.status).expect("status serializes");
            let _ = writeln!(
                s,
                "{:<13} {:<28} {:>16} vs {} = {}  {}",
                status.as_str().unwrap_or_default(),
                b.id,
                opt(b.value.clone()),
                b.compares_to,
                opt(b.measured.clone()),
                b.note
            );
        }
        for (stage, secs) in &self.timing {
            let _ = writeln!(s, "time {stage}: {secs}s");
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub dim_cap: usize,
    /// Locality used for the asymptotic LCC entries.
    pub q: usize,
    pub timing: bool,
    /// `(m, k)` when the code came from the bounded-repetition construction.
    pub ltc_layout: Option<(usize, usize)>,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self {
            dim_cap: MAX_GRAPH_DIM,
            q: 3,
            timing: false,
            ltc_layout: None,
        }
    }
}

struct Stopwatch {
    enabled: bool,
    last: Instant,
    stages: BTreeMap<String, String>,
}

impl Stopwatch {
    fn lap(&mut self, stage: &str) {
        if self.enabled {
            let now = Instant::now();
            self.stages.insert(
                stage.into(),
                format!("{:.6}", (now - self.last).as_secs_f64()),
            );
            self.last = now;
        }
    }
}

/// Caps and degenerate inputs turn a stage off instead of failing the run.
fn optional<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::ResourceCap { .. } | Error::DegenerateCode) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Runs graph, curvature, local-structure and bound stages on one code.
pub fn analyze(
    code: &LinearCode,
    identity: CodeIdentity,
    options: AnalyzeOptions,
) -> Result<BoundReport> {
    if options.dim_cap > MAX_GRAPH_DIM {
        return Err(Error::out_of_range(
            "dim cap",
            options.dim_cap,
            format!("0..={MAX_GRAPH_DIM}"),
        ));
    }
    if options.q < 2 {
        return Err(Error::out_of_range("q", options.q, ">= 2"));
    }
    let mut clock = Stopwatch {
        enabled: options.timing,
        last: Instant::now(),
        stages: BTreeMap::new(),
    };
    let n = code.n();
    let dim = code.dim();

    let graph = optional(build_coset_graph(code, options.dim_cap))?;
    let diameter = graph.as_ref().map(|g| g.diameter());
    let sphere_profile = graph.as_ref().map(|g| g.sphere_profile().sizes);
    let covering_radius = if n <= MAX_BRUTEFORCE_LENGTH {
        Some(covering_radius_bruteforce(code)?)
    } else {
        None
    };
    clock.lap("graph");

    let curvature = optional(transport::curvature_graph(code))?;
    clock.lap("curvature");

    let profile = local::ltc_profile(code);
    let k = optional(local::min_k(code))?;
    let perfect = if n <= MAX_EXACT_PACKING_LENGTH {
        Some(local::is_perfect_3lcc(code)?.is_perfect())
    } else {
        None
    };
    clock.lap("local");

    let measured = Measured {
        n,
        dim,
        diameter,
        covering_radius,
        kappa_graph: curvature.as_ref().map(|c| fmt_rational(c.kappa_graph)),
        max_jump: curvature.as_ref().map(|c| fmt_rational(c.max_jump)),
        k,
        sigma: profile.sigma,
        p: profile.p,
        t: profile.t,
        regular: profile.regular,
        zero_columns: code.zero_columns(),
        sphere_profile,
        perfect_3lcc: perfect,
    };
    let bounds = bound_entries(&measured, curvature.as_ref(), options)?;
    clock.lap("bounds");

    Ok(BoundReport {
        code: identity,
        measured,
        bounds,
        timing: clock.stages,
    })
}

fn bound_entries(
    m: &Measured,
    curvature: Option<&transport::CurvatureReport>,
    options: AnalyzeOptions,
) -> Result<Vec<BoundEntry>> {
    let n = m.n;
    let dim_s = Some(m.dim.to_string());
    let diam_s = m.diameter.map(|d| d.to_string());
    let mut out = Vec::new();

    match m.k {
        Some(k) if k >= 1 => {
            let b = bounds::bound_pair_diameter(n, k);
            out.push(entry("pair_diameter", "diameter").verdict(
                fmt_rational(b),
                diam_s.clone(),
                m.diameter.map(|d| Rational::from_integer(d as i64) <= b),
            ));
        }
        Some(_) => {
            out.push(entry("pair_diameter", "diameter").na("K = 0: hypothesis K > 0 not met"))
        }
        None => out.push(entry("pair_diameter", "diameter").na("no nonzero column")),
    }

    match (m.k, curvature) {
        (Some(k), Some(c)) => {
            let b = Rational::new(2 * (k as i64 + 1), n as i64 + 1);
            out.push(entry("curvature_lower_bound", "kappa_graph").verdict(
                fmt_rational(b),
                Some(fmt_rational(c.kappa_graph)),
                Some(c.kappa_graph >= b),
            ));
        }
        (Some(k), None) => {
            let b = Rational::new(2 * (k as i64 + 1), n as i64 + 1);
            out.push(entry("curvature_lower_bound", "kappa_graph").verdict(
                fmt_rational(b),
                None,
                None,
            ));
        }
        (None, _) => {
            out.push(entry("curvature_lower_bound", "kappa_graph").na("no nonzero column"))
        }
    }

    let k0 = m.k.unwrap_or(0);
    let ball = bounds::bound_dimension(n, n / (k0 + 1), Some(k0))?;
    out.push(entry("ball_dimension", "dim").finish(
        Some(fmt_real(ball.log2_ball)),
        dim_s.clone(),
        if ball.admits(m.dim) {
            Status::Pass
        } else {
            Status::Fail
        },
        format!("radius {} ball size {}", ball.radius, ball.ball_size),
    ));

    match m.diameter {
        Some(d) => {
            let ball = bounds::bound_dimension(n, d, None)?;
            out.push(entry("ball_dimension_measured", "dim").finish(
                Some(fmt_real(ball.log2_ball)),
                dim_s.clone(),
                if ball.admits(m.dim) {
                    Status::Pass
                } else {
                    Status::Fail
                },
                format!("radius {} ball size {}", ball.radius, ball.ball_size),
            ));
        }
        None => out.push(entry("ball_dimension_measured", "dim").na("diameter not measured")),
    }

    // Real-valued bounds compare with a 1e-9 slack.
    let real_verdict = |id: &str, value: f64| {
        entry(id, "dim").verdict(
            fmt_real(value),
            dim_s.clone(),
            Some(m.dim as f64 <= value + 1e-9),
        )
    };
    match m.k {
        Some(k) if k >= 1 => {
            out.push(real_verdict(
                "entropy_dimension",
                bounds::entropy_dimension_bound(n, k)?,
            ));
            out.push(real_verdict(
                "closed_form_dimension",
                bounds::dimension_closed_form(n, k),
            ));
        }
        _ => {
            out.push(entry("entropy_dimension", "dim").na("hypothesis K > 0 not met"));
            out.push(entry("closed_form_dimension", "dim").na("hypothesis K > 0 not met"));
        }
    }

    match curvature.and_then(|c| c.bonnet_myers_bound) {
        Some(b) => out.push(entry("bonnet_myers", "diameter").verdict(
            fmt_rational(b),
            diam_s.clone(),
            m.diameter.map(|d| Rational::from_integer(d as i64) <= b),
        )),
        None if curvature.is_some() => {
            out.push(entry("bonnet_myers", "diameter").na("curvature not positive"))
        }
        None => out.push(entry("bonnet_myers", "diameter").na("curvature not computed")),
    }

    let ratio = (m.sigma > m.p).then(|| m.sigma.div_ceil(m.p));
    match (ratio, m.k) {
        (Some(r), Some(k)) => out.push(entry("bounded_repetition_pairs", "K").verdict(
            r.to_string(),
            Some(k.to_string()),
            Some(k >= r),
        )),
        _ => out.push(entry("bounded_repetition_pairs", "K").na("hypothesis sigma > p not met")),
    }

    if m.regular && m.sigma >= 1 {
        out.push(entry("regular_ltc_dimension", "dim").verdict(
            fmt_bound(bounds::bound_regular_ltc(n, m.sigma)?),
            dim_s.clone(),
            Some(bounds::regular_ltc_admits(n, m.sigma, m.dim)),
        ));
    } else {
        out.push(entry("regular_ltc_dimension", "dim").na("code not regular or sigma = 0"));
    }

    match options.ltc_layout {
        Some((lm, lk)) if m.sigma >= 1 => {
            let literal = Rational::new((n * m.p) as i64, 2 * m.sigma as i64);
            out.push(entry("ltc_layout_identity", "dim").finish(
                Some(fmt_rational(literal)),
                dim_s.clone(),
                if literal == Rational::from_integer(m.dim as i64) {
                    Status::Pass
                } else {
                    Status::Fail
                },
                format!(
                    "m = {lm}, k = {lk}, measured sigma = {}, km = {}",
                    m.sigma,
                    lm * lk
                ),
            ));
            let ceil = Rational::new(n as i64, 2 * m.sigma.div_ceil(m.p) as i64);
            out.push(entry("ltc_layout_identity_ceil", "dim").info(
                fmt_rational(ceil),
                dim_s.clone(),
                "",
            ));
        }
        Some(_) => out.push(entry("ltc_layout_identity", "dim").na("sigma = 0")),
        None => {}
    }

    if let Some(k) = m.k.filter(|&k| k >= 1) {
        out.push(entry("pair_density_diameter", "diameter").info(
            fmt_rational(Rational::new(n as i64, k as i64)),
            diam_s.clone(),
            "",
        ));
    }
    let asym = bounds::bound_asymptotics(n, options.q, m.sigma, m.p)?;
    let q_note = format!("q = {}, unit constant", options.q);
    out.push(entry("lcc_covering_radius_order", "diameter").info(
        fmt_real(asym.lcc_covering_radius),
        diam_s,
        q_note.clone(),
    ));
    out.push(entry("lcc_dimension_order", "dim").info(
        fmt_real(asym.lcc_dimension),
        dim_s.clone(),
        q_note,
    ));
    out.push(entry("perfect_lcc_dimension_order", "dim").info(
        fmt_real(asym.perfect_lcc_dimension),
        dim_s.clone(),
        "unit constant",
    ));
    if let Some(v) = asym.bounded_repetition_dimension {
        out.push(entry("bounded_repetition_order", "dim").info(
            fmt_real(v),
            dim_s.clone(),
            "unit constant",
        ));
    }
    if let (true, Some(v)) = (m.regular, asym.regular_ltc_prior) {
        out.push(entry("regular_ltc_prior_order", "dim").info(fmt_real(v), dim_s, "unit constant"));
    }
    Ok(out)
}

/// Curvature along every direction plus the Bonnet-Myers comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurvatureSummary {
    pub code: CodeIdentity,
    /// `null` for loop directions.
    pub per_direction: Vec<Option<String>>,
    pub kappa_graph: String,
    pub max_jump: String,
    pub bonnet_myers_bound: Option<String>,
    pub diameter: Option<usize>,
    /// `pass`, `fail`, `bound-only` or `na`.
    pub bonnet_myers: String,
}

impl Render for CurvatureSummary {
    fn text(&self) -> String {
        let mut s = format!("code {}\n", self.code.name);
        for (i, k) in self.per_direction.iter().enumerate() {
            let _ = writeln!(s, "kappa[{i}] = {}", k.as_deref().unwrap_or("loop"));
        }
        let _ = writeln!(s, "kappa(T) = {}", self.kappa_graph);
        let _ = writeln!(s, "max J = {}", self.max_jump);
        let _ = writeln!(
            s,
            "Bonnet-Myers bound = {}, diameter = {}: {}",
            self.bonnet_myers_bound.as_deref().unwrap_or("-"),
            self.diameter.map_or("-".into(), |d| d.to_string()),
            self.bonnet_myers
        );
        s
    }
}

pub fn curvature_summary(
    code: &LinearCode,
    identity: CodeIdentity,
    dim_cap: usize,
) -> Result<CurvatureSummary> {
    let report = transport::curvature_graph(code)?;
    let (bound, diameter, verdict) = match transport::bonnet_myers_check(code, dim_cap) {
        Ok(c) => (
            Some(fmt_rational(c.bound)),
            c.diameter,
            match c.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "fail",
                Verdict::BoundOnly => "bound-only",
            },
        ),
        Err(Error::Hypothesis(_)) => (None, None, "na"),
        Err(e) => return Err(e),
    };
    Ok(CurvatureSummary {
        code: identity,
        per_direction: report
            .per_direction
            .iter()
            .map(|k| k.map(fmt_rational))
            .collect(),
        kappa_graph: fmt_rational(report.kappa_graph),
        max_jump: fmt_rational(report.max_jump),
        bonnet_myers_bound: bound,
        diameter,
        bonnet_myers: verdict.into(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilySummary {
    pub q: usize,
    /// `min |M_i| / n` over nonzero columns.
    pub delta: String,
    /// `false` when some family is a greedy lower bound.
    pub exact: bool,
    pub sizes: Vec<usize>,
    /// Sorted index lists per coordinate.
    pub families: Vec<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaSummary {
    pub k_measured: usize,
    pub k_required: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SphereRowSummary {
    pub r: usize,
    pub lhs: usize,
    pub rhs: usize,
    pub pass: bool,
    pub min_down_edges: Option<usize>,
    pub per_vertex_pass: bool,
}

/// Local-structure checks: LTC profile, pair packing against `ceil(sigma/p)`,
/// perfect 3-LCC certification and sphere growth.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifySummary {
    pub code: CodeIdentity,
    pub sigma: usize,
    pub sigma_per_coordinate: Vec<usize>,
    pub p: usize,
    pub t: usize,
    pub regular: bool,
    #[serde(rename = "K")]
    pub k: Option<usize>,
    /// `null` when `sigma <= p`.
    pub bounded_repetition: Option<LemmaSummary>,
    /// `null` when `n > 16`.
    pub perfect_3lcc: Option<bool>,
    /// Why the code is not perfect, or the empty string.
    pub perfect_3lcc_reason: String,
    pub sphere_growth: Option<Vec<SphereRowSummary>>,
    pub families: FamilySummary,
    /// Every checked inequality held.
    pub pass: bool,
}

impl Render for VerifySummary {
    fn text(&self) -> String {
        let mut s = format!("code {}\n", self.code.name);
        let _ = writeln!(
            s,
            "sigma = {}, p = {}, t = {}, regular = {}",
            self.sigma, self.p, self.t, self.regular
        );
        let _ = writeln!(s, "K = {}", self.k.map_or("-".into(), |k| k.to_string()));
        match &self.bounded_repetition {
            Some(l) => {
                let _ = writeln!(
                    s,
                    "K >= ceil(sigma/p): {} >= {}: {}",
                    l.k_measured, l.k_required, l.pass
                );
            }
            None => s.push_str("K >= ceil(sigma/p): na (sigma <= p)\n"),
        }
        match self.perfect_3lcc {
            Some(true) => s.push_str("perfect 3-LCC: yes\n"),
            Some(false) => {
                let _ = writeln!(s, "perfect 3-LCC: no ({})", self.perfect_3lcc_reason);
            }
            None => s.push_str("perfect 3-LCC: not searched (n > 16)\n"),
        }
        for row in self.sphere_growth.iter().flatten() {
            let _ = writeln!(
                s,
                "r = {}: {} <= {}: {} (per vertex: {})",
                row.r, row.lhs, row.rhs, row.pass, row.per_vertex_pass
            );
        }
        let _ = writeln!(
            s,
            "q = {} families: delta = {}, exact = {}",
            self.families.q, self.families.delta, self.families.exact
        );
        let _ = writeln!(s, "pass: {}", self.pass);
        s
    }
}

pub fn verify_summary(
    code: &LinearCode,
    identity: CodeIdentity,
    q: usize,
    dim_cap: usize,
) -> Result<VerifySummary> {
    let profile = local::ltc_profile(code);
    let k = optional(local::min_k(code))?;
    let bounded_repetition = match local::verify_pair_packing(code) {
        Ok(c) => Some(LemmaSummary {
            k_measured: c.k_measured,
            k_required: c.k_required,
            pass: c.pass,
        }),
        Err(Error::Hypothesis(_) | Error::DegenerateCode) => None,
        Err(e) => return Err(e),
    };
    let (perfect, reason) = if code.n() <= MAX_EXACT_PACKING_LENGTH {
        match local::is_perfect_3lcc(code)? {
            PerfectVerdict::Perfect { .. } => (Some(true), String::new()),
            PerfectVerdict::LengthNotOneModThree { n } => {
                (Some(false), format!("n = {n} is not 1 mod 3"))
            }
            PerfectVerdict::NoPartition { coordinate } => (
                Some(false),
                format!("no triple partition for coordinate {coordinate}"),
            ),
        }
    } else {
        (None, String::new())
    };
    let sphere_growth = match perfect {
        Some(true) => optional(local::sphere_growth_check(code, dim_cap))?.map(|rows| {
            rows.into_iter()
                .map(|r| SphereRowSummary {
                    r: r.r,
                    lhs: r.lhs,
                    rhs: r.rhs,
                    pass: r.pass,
                    min_down_edges: r.min_down_edges,
                    per_vertex_pass: r.per_vertex_pass,
                })
                .collect::<Vec<_>>()
        }),
        _ => None,
    };
    let fams = local::all_families(code, q)?;
    let families = FamilySummary {
        q,
        delta: fmt_rational(local::measured_delta(code, &fams)),
        exact: fams.iter().all(|f| f.exact),
        sizes: fams.iter().map(|f| f.len()).collect(),
        families: fams.iter().map(|f| f.tuples.clone()).collect(),
    };
    let pass = bounded_repetition.as_ref().is_none_or(|l| l.pass)
        && sphere_growth
            .iter()
            .flatten()
            .all(|r| r.pass && r.per_vertex_pass);
    Ok(VerifySummary {
        code: identity,
        sigma: profile.sigma,
        sigma_per_coordinate: profile.sigma_per_coordinate,
        p: profile.p,
        t: profile.t,
        regular: profile.regular,
        k,
        bounded_repetition,
        perfect_3lcc: perfect,
        perfect_3lcc_reason: reason,
        sphere_growth,
        families,
        pass,
    })
}

/// Repeated draws of the random restriction set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonteCarloReport {
    pub code: CodeIdentity,
    pub q: usize,
    pub a: String,
    pub seed: u64,
    pub trials: usize,
    /// `false` when the families are greedy lower bounds.
    pub families_exact: bool,
    pub delta: String,
    pub threshold: String,
    pub bullet1_bound: String,
    pub mean_size: String,
    pub within_bound_fraction: String,
    pub bullet2_all: bool,
    pub sizes: Vec<usize>,
}

impl Render for MonteCarloReport {
    fn text(&self) -> String {
        format!(
            "code {}\nq = {}, a = {}, seed = {}, trials = {}\ndelta = {} (exact families: {})\nthreshold = {}\nmean |B| = {} vs bound {}\nwithin bound: {}\nsecond property in every trial: {}\n",
            self.code.name,
            self.q,
            self.a,
            self.seed,
            self.trials,
            self.delta,
            self.families_exact,
            self.threshold,
            self.mean_size,
            self.bullet1_bound,
            self.within_bound_fraction,
            self.bullet2_all
        )
    }
}

pub fn monte_carlo_report(
    code: &LinearCode,
    identity: CodeIdentity,
    q: usize,
    a: Rational,
    seed: u64,
    trials: usize,
) -> Result<MonteCarloReport> {
    let fams = local::all_families(code, q)?;
    let af = *a.numer() as f64 / *a.denom() as f64;
    let summary = local::monte_carlo_subset_b(code, &fams, q, af, seed, trials)?;
    Ok(MonteCarloReport {
        code: identity,
        q,
        a: fmt_rational(a),
        seed,
        trials,
        families_exact: fams.iter().all(|f| f.exact),
        delta: fmt_real(summary.delta),
        threshold: fmt_real(summary.threshold),
        bullet1_bound: fmt_real(summary.bullet1_bound),
        mean_size: fmt_real(summary.mean_size),
        within_bound_fraction: fmt_real(summary.within_bound_fraction),
        bullet2_all: summary.bullet2_all,
        sizes: summary.sizes,
    })
}

/// Parses `p/q` or an integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidArgument(format!("`{s}` is not a rational p/q"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let p: i64 = p.parse().map_err(|_| bad())?;
    let q: i64 = q.parse().map_err(|_| bad())?;
    if q == 0 {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::construct;
    use crate::zoo;

    fn run(spec: &str) -> BoundReport {
        let c = construct(spec).unwrap();
        let options = AnalyzeOptions {
            ltc_layout: c.ltc_layout,
            ..AnalyzeOptions::default()
        };
        analyze(
            &c.code,
            CodeIdentity::constructed(&c.name, &c.code),
            options,
        )
        .unwrap()
    }

    #[test]
    fn hadamard_report() {
        let r = run("hadamard:3");
        assert_eq!(r.measured.diameter, Some(1));
        assert_eq!(r.measured.kappa_graph.as_deref(), Some("1/1"));
        assert_eq!(r.measured.k, Some(3));
        assert!(r.all_certifying_pass());
        assert_eq!(
            r.bound("pair_diameter").unwrap().value.as_deref(),
            Some("7/4")
        );
        assert!(r.timing.is_empty());
    }

    #[test]
    fn zero_k_gate() {
        let r = run("hadamard+identity:3");
        assert_eq!(r.measured.k, Some(0));
        let e = r.bound("pair_diameter").unwrap();
        assert_eq!(e.status, Status::Na);
        assert!(e.note.contains("K = 0"));
    }

    #[test]
    fn layout_identity_is_reported_literally() {
        let r = run("repetition:4,5");
        let e = r.bound("ltc_layout_identity").unwrap();
        assert_eq!(e.value.as_deref(), Some("100/19"));
        assert_eq!(e.status, Status::Fail);
        assert!(!r.all_certifying_pass());
        assert_eq!(
            r.bound("bounded_repetition_pairs").unwrap().status,
            Status::Pass
        );
        // Multiplicities are 1 and k, so the regular bound does not apply.
        assert!(!r.measured.regular);
        assert_eq!(r.bound("regular_ltc_dimension").unwrap().status, Status::Na);
    }

    #[test]
    fn every_entry_has_a_registered_anchor() {
        for spec in [
            "hadamard:3",
            "identity:4",
            "perfect3",
            "repetition:4,5",
            "random:4,9,1",
        ] {
            for b in run(spec).bounds {
                let (_, anchor, certifying) = super::anchor(b.id);
                assert_eq!((anchor, certifying), (b.anchor, b.certifying));
            }
        }
    }

    #[test]
    fn rendering_is_stable() {
        let a = run("hadamard:2*hadamard:2");
        let b = run("hadamard:2*hadamard:2");
        for f in [Format::Json, Format::Csv, Format::Text] {
            assert_eq!(a.render(f), b.render(f));
        }
        let json: Value = serde_json::from_str(&a.render(Format::Json)).unwrap();
        let keys: Vec<&String> = json.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["code", "measured", "bounds", "timing"]);
        assert!(a
            .render(Format::Csv)
            .starts_with("key,value\ncode.source,construct\n"));
    }

    #[test]
    fn large_codes_skip_graph_stages() {
        let c = zoo::random_code(6, 30, 4).unwrap();
        let options = AnalyzeOptions {
            dim_cap: 3,
            ..AnalyzeOptions::default()
        };
        let r = analyze(&c, CodeIdentity::constructed("r", &c), options).unwrap();
        assert_eq!(r.measured.diameter, None);
        assert_eq!(r.measured.covering_radius, None);
        assert!(r.all_certifying_pass());
    }

    #[test]
    fn summaries() {
        let p = zoo::perfect_3lcc_basic();
        let v = verify_summary(&p, CodeIdentity::constructed("perfect3", &p), 3, 24).unwrap();
        assert_eq!(v.perfect_3lcc, Some(true));
        assert_eq!(v.sphere_growth.as_ref().unwrap()[0].lhs, 3);
        assert_eq!(v.families.delta, "1/4");
        assert!(v.pass);

        let c = curvature_summary(&p, CodeIdentity::constructed("perfect3", &p), 24).unwrap();
        assert_eq!(c.kappa_graph, "2/5");
        assert_eq!(c.bonnet_myers_bound.as_deref(), Some("4/1"));
        assert_eq!(c.bonnet_myers, "pass");
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("3/2").unwrap(), Rational::new(3, 2));
        assert_eq!(parse_rational("2").unwrap(), Rational::from_integer(2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
