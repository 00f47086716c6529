//! Scenario files and the `verdict-v1` report.
//!
//! A scenario names a world (a finite graph, a graph family, an infinite
//! generator or a terrain), two labeled agents, route limits and an adversary
//! suite. Running it builds both routes, runs every strategy for every seed
//! and collects the verdicts.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::adversary::{
    verify_rendezvous_graph, verify_rendezvous_planar, RendezvousReport, SuiteStrategy, VERDICT_SCHEMA,
};
use crate::enumeration::{Label, Port, ENUMERATION_VERSION};
use crate::geometry::{
    approx_rendezvous, geometric_rv_in, own_frame_route, terrain_quadruple, GtGraph, PlanarRoute, QPoint, Terrain,
    TerrainSpec,
};
use crate::graph::{
    complete2, cycle, follow_ports, path, random_connected, star, FiniteGraph, GeneratorKind, GraphError, GraphSpec,
    InfiniteBinaryTree, InfiniteGrid, InfiniteLine, PortGraph,
};
use crate::rational::{parse_q, q_to_f64, qi, serde_q, Q};
use crate::rendezvous::{
    connecting_quadruple, dump_route, graph_rv, tunnel_check, Limits, Route, RouteError, DEFAULT_STEP_BUDGET,
};

pub const SCENARIO_SCHEMA: &str = "scenario-v1";

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("cannot read `{path}`: {reason}")]
    Io { path: String, reason: String },
    #[error("malformed {what}: {reason}")]
    Parse { what: String, reason: String },
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error("enumeration version mismatch: {0}")]
    Version(String),
    #[error(transparent)]
    Route(#[from] RouteError),
}

impl From<GraphError> for ScenarioError {
    fn from(e: GraphError) -> Self {
        ScenarioError::Route(e.into())
    }
}

impl ScenarioError {
    /// 1 when a route ran out of budget, 2 for every input problem.
    pub fn exit_code(&self) -> i32 {
        match self {
            ScenarioError::Route(RouteError::StepBudgetExceeded { .. }) => 1,
            _ => 2,
        }
    }
}

fn invalid(msg: impl Into<String>) -> ScenarioError {
    ScenarioError::Invalid(msg.into())
}

fn parse_err(what: &str, e: impl std::fmt::Display) -> ScenarioError {
    ScenarioError::Parse {
        what: what.to_string(),
        reason: e.to_string(),
    }
}

pub fn read_text(path: &Path) -> Result<String, ScenarioError> {
    fs::read_to_string(path).map_err(|e| ScenarioError::Io {
        path: path.display().to_string(),
        reason: e.to_string(),
    })
}

// ---------------------------------------------------------------------------
// Scenario documents

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub schema: Option<String>,
    pub name: String,
    pub world: WorldSpec,
    pub agents: Vec<AgentSpec>,
    #[serde(default)]
    pub limits: LimitsSpec,
    #[serde(default)]
    pub adversary: AdversarySpec,
    #[serde(default, with = "serde_q::option")]
    pub epsilon: Option<Q>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WorldSpec {
    Graph {
        graph: GraphSpec,
    },
    GraphFile {
        path: PathBuf,
    },
    /// `complete2`, `path`, `cycle`, `star` or `random`.
    Family {
        family: String,
        #[serde(default)]
        n: usize,
        #[serde(default)]
        extra: usize,
        #[serde(default)]
        seed: u64,
    },
    Generator {
        generator: GeneratorKind,
    },
    Terrain {
        terrain: TerrainSpec,
    },
    TerrainFile {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentSpec {
    pub label: Label,
    /// Node name for graphs, `["x", "y"]` for terrains.
    pub start: Value,
    /// Fixed port sequence walked instead of the constructed route.
    #[serde(default)]
    pub ports: Option<Vec<Port>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum PhaseCap {
    Fixed(u64),
    Named(String),
}

impl Default for PhaseCap {
    fn default() -> Self {
        PhaseCap::Named("connecting".into())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitsSpec {
    #[serde(default)]
    pub phase_cap: PhaseCap,
    #[serde(default = "default_budget")]
    pub step_budget: usize,
    #[serde(default)]
    pub truncate_on_budget: bool,
}

fn default_budget() -> usize {
    DEFAULT_STEP_BUDGET
}

impl Default for LimitsSpec {
    fn default() -> Self {
        LimitsSpec {
            phase_cap: PhaseCap::default(),
            step_budget: DEFAULT_STEP_BUDGET,
            truncate_on_budget: false,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdversarySpec {
    #[serde(default = "all_strategies")]
    pub strategies: Vec<SuiteStrategy>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
}

fn all_strategies() -> Vec<SuiteStrategy> {
    SuiteStrategy::ALL.to_vec()
}

fn default_seeds() -> Vec<u64> {
    (0..20).collect()
}

impl Default for AdversarySpec {
    fn default() -> Self {
        AdversarySpec {
            strategies: all_strategies(),
            seeds: default_seeds(),
        }
    }
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| parse_err("scenario", e))?;
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<(), ScenarioError> {
        if let Some(schema) = &self.schema {
            if schema != SCENARIO_SCHEMA {
                return Err(invalid(format!(
                    "unsupported schema `{schema}` (expected `{SCENARIO_SCHEMA}`)"
                )));
            }
        }
        if self.agents.len() != 2 {
            return Err(invalid(format!("expected 2 agents, found {}", self.agents.len())));
        }
        let (a, b) = (self.agents[0].label, self.agents[1].label);
        if a == 0 || b == 0 {
            return Err(RouteError::ZeroLabel.into());
        }
        if a == b {
            return Err(RouteError::DuplicateLabel(a).into());
        }
        if let PhaseCap::Named(n) = &self.limits.phase_cap {
            if n != "connecting" {
                return Err(invalid(format!(
                    "phase_cap must be a number or \"connecting\", not `{n}`"
                )));
            }
        }
        if let Some(eps) = &self.epsilon {
            if *eps <= qi(0) {
                return Err(invalid("epsilon must be positive"));
            }
        }
        Ok(())
    }
}

/// Command-line overrides applied on top of a scenario.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub phase_cap: Option<u64>,
    pub step_budget: Option<usize>,
}

// ---------------------------------------------------------------------------
// Worlds

/// A loaded world.
pub enum World {
    Finite(FiniteGraph),
    Line(InfiniteLine),
    Grid(InfiniteGrid),
    Tree(InfiniteBinaryTree),
    Terrain(Terrain),
}

impl World {
    pub fn kind(&self) -> &'static str {
        match self {
            World::Finite(_) => "graph",
            World::Line(_) => "infinite_line",
            World::Grid(_) => "infinite_grid",
            World::Tree(_) => "infinite_binary_tree",
            World::Terrain(_) => "terrain",
        }
    }

    pub fn from_spec(spec: &WorldSpec, base: &Path) -> Result<World, ScenarioError> {
        Ok(match spec {
            WorldSpec::Graph { graph } => World::Finite(graph.build()?),
            WorldSpec::GraphFile { path } => {
                let text = read_text(&base.join(path))?;
                let spec = GraphSpec::from_json(&text).map_err(|e| parse_err("graph", e))?;
                World::Finite(spec.build()?)
            }
            WorldSpec::Family { family, n, extra, seed } => World::Finite(family_graph(family, *n, *extra, *seed)?),
            WorldSpec::Generator { generator } => match generator {
                GeneratorKind::InfiniteLine => World::Line(InfiniteLine::default()),
                GeneratorKind::InfiniteGrid => World::Grid(InfiniteGrid::default()),
                GeneratorKind::InfiniteBinaryTree => World::Tree(InfiniteBinaryTree::default()),
            },
            WorldSpec::Terrain { terrain } => {
                World::Terrain(Terrain::from_spec(terrain.clone()).map_err(RouteError::from)?)
            }
            WorldSpec::TerrainFile { path } => {
                let text = read_text(&base.join(path))?;
                World::Terrain(Terrain::from_json(&text).map_err(RouteError::from)?)
            }
        })
    }

    /// A bare `graph-v1` or `terrain-v1` document, or a scenario whose world is used.
    pub fn from_file(path: &Path) -> Result<World, ScenarioError> {
        let text = read_text(path)?;
        let value: Value = serde_json::from_str(&text).map_err(|e| parse_err("world file", e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        if value.get("world").is_some() {
            let s = Scenario::from_json(&text)?;
            return World::from_spec(&s.world, base);
        }
        if value.get("outer").is_some() {
            return Ok(World::Terrain(Terrain::from_json(&text).map_err(RouteError::from)?));
        }
        if value.get("nodes").is_some() {
            let spec = GraphSpec::from_json(&text).map_err(|e| parse_err("graph", e))?;
            return Ok(World::Finite(spec.build()?));
        }
        Err(invalid(format!(
            "`{}` is neither a scenario, a graph nor a terrain",
            path.display()
        )))
    }
}

fn family_graph(family: &str, n: usize, extra: usize, seed: u64) -> Result<FiniteGraph, ScenarioError> {
    let need = |min: usize| {
        if n < min {
            Err(invalid(format!("family `{family}` needs n >= {min}")))
        } else {
            Ok(())
        }
    };
    Ok(match family {
        "complete2" => complete2(),
        "path" => {
            need(1)?;
            path(n)
        }
        "cycle" => {
            need(3)?;
            cycle(n)
        }
        "star" => {
            need(1)?;
            star(n)
        }
        "random" => {
            need(1)?;
            random_connected(n, extra, seed)
        }
        other => return Err(invalid(format!("unknown graph family `{other}`"))),
    })
}

fn node_text(v: &Value) -> Result<String, ScenarioError> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(invalid(format!("graph start must be a node name, got {other}"))),
    }
}

/// Parses a terrain start, `["x", "y"]` or `"x y"`.
pub fn point_value(v: &Value) -> Result<QPoint, ScenarioError> {
    if let Value::String(s) = v {
        return parse_point(s);
    }
    serde_json::from_value(v.clone()).map_err(|e| parse_err("point", e))
}

pub fn parse_point(text: &str) -> Result<QPoint, ScenarioError> {
    let parts: Vec<&str> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .collect();
    if parts.len() != 2 {
        return Err(invalid(format!("expected a point `x y`, got `{text}`")));
    }
    let x = parse_q(parts[0]).map_err(|e| parse_err("point", e))?;
    let y = parse_q(parts[1]).map_err(|e| parse_err("point", e))?;
    Ok(QPoint::new(x, y))
}

// ---------------------------------------------------------------------------
// Running

#[derive(Debug, Clone, Serialize)]
pub struct AgentOutcome {
    pub label: Label,
    pub start: String,
    pub route_length: usize,
    pub phases_built: u64,
    /// Fewer phases than the cap, because the step budget ran out.
    pub truncated: bool,
    pub explicit_ports: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ApproxInfo {
    #[serde(with = "serde_q")]
    pub epsilon: Q,
    pub proxy: QPoint,
    #[serde(with = "serde_q")]
    pub radius: Q,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub schema: &'static str,
    pub scenario: String,
    pub enumeration: &'static str,
    pub world: &'static str,
    pub phase_cap: u64,
    /// Enumeration index of the quadruple along a shortest connecting path,
    /// when one is known and fits in 64 bits.
    pub connecting_index: Option<u64>,
    pub step_budget: usize,
    pub agents: Vec<AgentOutcome>,
    /// Length of the shortest tunnel between the two routes, if any.
    pub tunnel: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub approx: Option<ApproxInfo>,
    pub report: RendezvousReport,
    pub success: bool,
}

impl Verdict {
    pub fn exit_code(&self) -> i32 {
        if self.success {
            0
        } else {
            1
        }
    }

    /// Pretty JSON with keys in a fixed order; `float` adds `<key>_float`
    /// next to every exact `num/den` field.
    pub fn to_json(&self, float: bool) -> String {
        let mut v = serde_json::to_value(self).expect("verdicts serialize");
        if float {
            add_floats(&mut v);
        }
        let mut text = serde_json::to_string_pretty(&v).expect("values serialize");
        text.push('\n');
        text
    }
}

fn as_fraction(s: &str) -> Option<Q> {
    let (n, d) = s.split_once('/')?;
    if n.is_empty() || d.is_empty() {
        return None;
    }
    parse_q(s).ok()
}

fn add_floats(v: &mut Value) {
    match v {
        Value::Object(map) => {
            let extra: Vec<(String, f64)> = map
                .iter()
                .filter_map(|(k, val)| {
                    let q = as_fraction(val.as_str()?)?;
                    Some((format!("{k}_float"), q_to_f64(&q)))
                })
                .collect();
            for val in map.values_mut() {
                add_floats(val);
            }
            for (k, f) in extra {
                map.insert(k, serde_json::json!(f));
            }
        }
        Value::Array(items) => items.iter_mut().for_each(add_floats),
        _ => {}
    }
}

struct Plan {
    seeds: Vec<u64>,
    step_budget: usize,
    truncate: bool,
    fixed_cap: Option<u64>,
}

impl Plan {
    fn new(s: &Scenario, o: &Overrides) -> Plan {
        let fixed_cap = o.phase_cap.or(match s.limits.phase_cap {
            PhaseCap::Fixed(k) => Some(k),
            PhaseCap::Named(_) => None,
        });
        Plan {
            seeds: o.seed.map_or_else(|| s.adversary.seeds.clone(), |seed| vec![seed]),
            step_budget: o.step_budget.unwrap_or(s.limits.step_budget),
            truncate: s.limits.truncate_on_budget,
            fixed_cap,
        }
    }

    fn limits(&self, cap: u64) -> Limits {
        let l = Limits::phases(cap).with_budget(self.step_budget);
        if self.truncate {
            l.truncating()
        } else {
            l
        }
    }
}

/// Loads a scenario file and runs it; relative world paths resolve against
/// the scenario's directory.
pub fn run_scenario_file(path: &Path, o: &Overrides) -> Result<Verdict, ScenarioError> {
    let s = Scenario::from_json(&read_text(path)?)?;
    run_scenario(&s, path.parent().unwrap_or(Path::new(".")), o)
}

pub fn run_scenario(s: &Scenario, base: &Path, o: &Overrides) -> Result<Verdict, ScenarioError> {
    let world = World::from_spec(&s.world, base)?;
    let plan = Plan::new(s, o);
    if s.epsilon.is_some() && !matches!(world, World::Terrain(_)) {
        return Err(invalid("epsilon is only meaningful for terrains"));
    }
    match &world {
        World::Finite(g) => {
            let starts = graph_starts(g, s)?;
            let connecting = connecting_quadruple(g, (starts.0, s.agents[0].label), (starts.1, s.agents[1].label))?.0;
            run_graph(g, world.kind(), s, &plan, starts, Some(connecting))
        }
        World::Line(g) => run_graph(g, world.kind(), s, &plan, graph_starts(g, s)?, None),
        World::Grid(g) => run_graph(g, world.kind(), s, &plan, graph_starts(g, s)?, None),
        World::Tree(g) => run_graph(g, world.kind(), s, &plan, graph_starts(g, s)?, None),
        World::Terrain(t) => run_terrain(t, s, &plan),
    }
}

fn graph_starts<G: PortGraph>(g: &G, s: &Scenario) -> Result<(G::Node, G::Node), ScenarioError> {
    let a = g.parse_node(&node_text(&s.agents[0].start)?)?;
    let b = g.parse_node(&node_text(&s.agents[1].start)?)?;
    Ok((a, b))
}

fn fixed_route<G: PortGraph>(g: &G, start: &G::Node, ports: &[Port]) -> Result<Route<G::Node>, ScenarioError> {
    let steps = follow_ports(g, start, ports)?;
    if steps.len() < ports.len() {
        return Err(invalid(format!(
            "port {} is not available after {} steps from `{}`",
            ports[steps.len()],
            steps.len(),
            g.node_label(start)
        )));
    }
    Ok(Route::from_steps(start.clone(), steps)?)
}

fn outcome<N: Clone + Eq + Ord>(label: Label, start: String, r: &Route<N>, cap: u64, explicit: bool) -> AgentOutcome {
    AgentOutcome {
        label,
        start,
        route_length: r.len(),
        phases_built: r.phase_count(),
        truncated: !explicit && r.phase_count() < cap,
        explicit_ports: explicit,
    }
}

fn resolve_cap(plan: &Plan, connecting: Option<u64>) -> Result<u64, ScenarioError> {
    match (plan.fixed_cap, connecting) {
        (Some(k), _) => Ok(k),
        (None, Some(k)) => Ok(k),
        (None, None) => Err(invalid(
            "phase_cap \"connecting\" needs a finite graph or terrain; give a number",
        )),
    }
}

fn run_graph<G: PortGraph>(
    g: &G,
    kind: &'static str,
    s: &Scenario,
    plan: &Plan,
    starts: (G::Node, G::Node),
    connecting: Option<u64>,
) -> Result<Verdict, ScenarioError> {
    let cap = resolve_cap(plan, connecting)?;
    let limits = plan.limits(cap);
    let mut routes = Vec::new();
    let mut agents = Vec::new();
    for (spec, start) in s.agents.iter().zip([&starts.0, &starts.1]) {
        let r = match &spec.ports {
            Some(ports) => fixed_route(g, start, ports)?,
            None => graph_rv(g, start, spec.label, &limits)?,
        };
        agents.push(outcome(spec.label, g.node_label(start), &r, cap, spec.ports.is_some()));
        routes.push(r);
    }
    let tunnel = tunnel_check(&routes[0], &routes[1]).map(|c| c.n);
    let report = verify_rendezvous_graph(g, &routes[0], &routes[1], &s.adversary.strategies, &plan.seeds);
    Ok(Verdict {
        schema: VERDICT_SCHEMA,
        scenario: s.name.clone(),
        enumeration: ENUMERATION_VERSION,
        world: kind,
        phase_cap: cap,
        connecting_index: connecting,
        step_budget: plan.step_budget,
        agents,
        tunnel,
        approx: None,
        success: report.success(),
        report,
    })
}

fn run_terrain(t: &Terrain, s: &Scenario, plan: &Plan) -> Result<Verdict, ScenarioError> {
    let starts = (point_value(&s.agents[0].start)?, point_value(&s.agents[1].start)?);
    let labels = (s.agents[0].label, s.agents[1].label);
    if s.agents.iter().any(|a| a.ports.is_some()) {
        return Err(invalid("explicit ports are only supported on graphs"));
    }
    if let Some(eps) = &s.epsilon {
        return run_approx(t, s, plan, starts, labels, eps);
    }
    let connecting = match plan.fixed_cap {
        Some(_) => None,
        None => terrain_quadruple(t, (&starts.0, labels.0), (&starts.1, labels.1))?.0,
    };
    // an index beyond 64 bits is unreachable anyway: build as far as the budget allows
    let cap = plan.fixed_cap.or(connecting).unwrap_or(u64::MAX);
    let limits = plan.limits(cap);
    let gt = GtGraph::new(t);
    let (g1, p1) = geometric_rv_in(&gt, &starts.0, labels.0, &limits)?;
    let (g2, p2) = geometric_rv_in(&gt, &starts.1, labels.1, &limits)?;
    let tunnel = tunnel_check(&g1, &g2).map(|c| c.n);
    let report = verify_rendezvous_planar(&p1, &p2, &s.adversary.strategies, &plan.seeds, None);
    Ok(Verdict {
        schema: VERDICT_SCHEMA,
        scenario: s.name.clone(),
        enumeration: ENUMERATION_VERSION,
        world: "terrain",
        phase_cap: cap,
        connecting_index: connecting,
        step_budget: plan.step_budget,
        agents: vec![
            outcome(labels.0, starts.0.to_string(), &g1, cap, false),
            outcome(labels.1, starts.1.to_string(), &g2, cap, false),
        ],
        tunnel,
        approx: None,
        success: report.success(),
        report,
    })
}

fn planar_outcome(label: Label, start: &QPoint, r: &PlanarRoute, cap: u64) -> AgentOutcome {
    let phases = r.phase_marks().len() as u64;
    AgentOutcome {
        label,
        start: start.to_string(),
        route_length: r.len(),
        phases_built: phases,
        truncated: phases < cap,
        explicit_ports: false,
    }
}

fn run_approx(
    t: &Terrain,
    s: &Scenario,
    plan: &Plan,
    starts: (QPoint, QPoint),
    labels: (Label, Label),
    eps: &Q,
) -> Result<Verdict, ScenarioError> {
    // the connecting index is taken against the coarse proxy of the second start
    let probe = approx_rendezvous(t, (&starts.0, &starts.1), labels, eps, &Limits::phases(0), &[], &[])?;
    let connecting = match plan.fixed_cap {
        Some(_) => None,
        None => terrain_quadruple(t, (&starts.0, labels.0), (&probe.proxy, labels.1))?.0,
    };
    let cap = plan.fixed_cap.or(connecting).unwrap_or(u64::MAX);
    let limits = plan.limits(cap);
    let out = approx_rendezvous(
        t,
        (&starts.0, &starts.1),
        labels,
        eps,
        &limits,
        &s.adversary.strategies,
        &plan.seeds,
    )?;
    Ok(Verdict {
        schema: VERDICT_SCHEMA,
        scenario: s.name.clone(),
        enumeration: ENUMERATION_VERSION,
        world: "terrain",
        phase_cap: cap,
        connecting_index: connecting,
        step_budget: plan.step_budget,
        agents: vec![
            planar_outcome(labels.0, &starts.0, &out.first, cap),
            planar_outcome(labels.1, &starts.1, &out.second, cap),
        ],
        tunnel: None,
        approx: Some(ApproxInfo {
            epsilon: eps.clone(),
            proxy: out.proxy.clone(),
            radius: out.radius.clone(),
        }),
        success: out.report.success(),
        report: out.report,
    })
}

// ---------------------------------------------------------------------------
// Route dumps

/// Dump of the route of `label` from `start` (a node name, or `x y` on a terrain).
pub fn route_dump(world: &World, start: &str, label: Label, limits: &Limits) -> Result<String, ScenarioError> {
    fn graph<G: PortGraph>(g: &G, start: &str, label: Label, limits: &Limits) -> Result<String, ScenarioError> {
        let v = g.parse_node(start)?;
        let r = graph_rv(g, &v, label, limits)?;
        Ok(dump_route(&r, |n| g.node_label(n)))
    }
    match world {
        World::Finite(g) => graph(g, start, label, limits),
        World::Line(g) => graph(g, start, label, limits),
        World::Grid(g) => graph(g, start, label, limits),
        World::Tree(g) => graph(g, start, label, limits),
        World::Terrain(t) => {
            let p = parse_point(start)?;
            Ok(own_frame_route(t, &p, label, limits)?.dump())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const K2: &str = r#"{
        "schema": "scenario-v1",
        "name": "k2",
        "world": {"kind": "family", "family": "complete2"},
        "agents": [{"label": 1, "start": "A"}, {"label": 2, "start": "B"}],
        "adversary": {"seeds": [0, 1, 2]}
    }"#;

    #[test]
    fn k2_runs_and_meets() {
        let s = Scenario::from_json(K2).unwrap();
        let v = run_scenario(&s, Path::new("."), &Overrides::default()).unwrap();
        assert_eq!(v.phase_cap, 1);
        assert_eq!(v.tunnel, Some(1));
        assert_eq!(v.report.entries.len(), 15);
        assert!(v.success);
        assert_eq!(v.to_json(false), v.to_json(false));
        assert!(v.to_json(true).contains("\"time_float\""));
    }

    #[test]
    fn rejects_bad_input() {
        let dup = K2.replace("\"label\": 2", "\"label\": 1");
        assert_eq!(Scenario::from_json(&dup).unwrap_err().exit_code(), 2);
        let junk = K2.replace("\"name\"", "\"nam\"");
        let e = Scenario::from_json(&junk).unwrap_err();
        assert!(e.to_string().contains("line"), "{e}");
        let unknown = K2.replace("\"A\"", "\"Z\"");
        let s = Scenario::from_json(&unknown).unwrap();
        assert_eq!(
            run_scenario(&s, Path::new("."), &Overrides::default())
                .unwrap_err()
                .exit_code(),
            2
        );
    }

    #[test]
    fn budget_overrun_is_exit_one() {
        let s = Scenario::from_json(K2).unwrap();
        let o = Overrides {
            phase_cap: Some(60),
            step_budget: Some(50),
            ..Overrides::default()
        };
        let e = run_scenario(&s, Path::new("."), &o).unwrap_err();
        assert!(matches!(e, ScenarioError::Route(RouteError::StepBudgetExceeded { .. })));
        assert_eq!(e.exit_code(), 1);
    }

    #[test]
    fn float_fields() {
        let mut v = serde_json::json!({"t": "3/4", "p": {"x": "-1/2"}, "n": "A", "d": "3/"});
        add_floats(&mut v);
        assert_eq!(v["t_float"], serde_json::json!(0.75));
        assert_eq!(v["p"]["x_float"], serde_json::json!(-0.5));
        assert!(v.get("n_float").is_none() && v.get("d_float").is_none());
    }

    #[test]
    fn points_parse_both_ways() {
        let a = point_value(&serde_json::json!(["1/4", "3/4"])).unwrap();
        let b = point_value(&serde_json::json!("1/4 3/4")).unwrap();
        assert_eq!(a, b);
        assert!(parse_point("1/4").is_err());
    }
}
