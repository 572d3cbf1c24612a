//! Families of classes over a finite graph model of the orbit space, loop
//! windings of the pairing component, and the T-duality decision.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde_json::{json, Value};

use super::BrauerClass;
use crate::cohomology::{Mode, Phase, PhaseMatrix, FLOAT_TOL};
use crate::error::{Error, Result};
use crate::scalar::{rat, Rational, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyOverBase {
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
    loops: Vec<Vec<String>>,
    classes: BTreeMap<String, BrauerClass>,
    epsilon: Option<f64>,
}

/// Real lift in `(−1/2, 1/2)` of a phase step; a step of exactly `1/2` is ambiguous.
fn lift(from: &Phase, to: &Phase, names: (&str, &str)) -> Result<Rational> {
    let d = to.clone() - from.clone();
    let ambiguous = || Error::AmbiguousStep { from: names.0.to_string(), to: names.1.to_string() };
    match d {
        Phase::Exact(r) => {
            let half = rat(1, 2);
            if r == half {
                Err(ambiguous())
            } else if r > half {
                Ok(r - rat(1, 1))
            } else {
                Ok(r)
            }
        }
        Phase::Float(x) => {
            if (x - 0.5).abs() <= FLOAT_TOL {
                Err(ambiguous())
            } else {
                let lifted = if x > 0.5 { x - 1.0 } else { x };
                Rational::from_float(lifted).ok_or_else(ambiguous)
            }
        }
    }
}

impl FamilyOverBase {
    pub fn new(
        vertices: Vec<String>,
        edges: Vec<(String, String)>,
        loops: Vec<Vec<String>>,
        classes: BTreeMap<String, BrauerClass>,
        epsilon: Option<f64>,
    ) -> Result<Self> {
        let names: BTreeSet<&String> = vertices.iter().collect();
        if names.len() != vertices.len() {
            return Err(Error::FamilyInvariant("duplicate vertex".into()));
        }
        if let Some(eps) = epsilon {
            if !(eps > 0.0 && eps < 0.5) {
                return Err(Error::FamilyInvariant(format!("epsilon {eps} must lie in (0, 1/2)")));
            }
        }
        for v in &vertices {
            if !classes.contains_key(v) {
                return Err(Error::FamilyInvariant(format!("vertex `{v}` has no class")));
            }
        }
        if let Some(k) = classes.keys().find(|k| !names.contains(k)) {
            return Err(Error::UnknownPoint(k.clone()));
        }
        let n = classes.values().next().map(BrauerClass::n);
        if classes.values().any(|c| Some(c.n()) != n) {
            return Err(Error::FamilyInvariant("classes over different dimensions".into()));
        }
        let modes: BTreeSet<bool> = classes.values().map(|c| c.theta().mode() == Mode::Exact).collect();
        if modes.len() > 1 {
            return Err(Error::ModeMix("family mixes exact and float classes".into()));
        }
        let family = Self { vertices, edges, loops, classes, epsilon };
        for (a, b) in &family.edges {
            family.check_edge(a, b)?;
        }
        for lp in &family.loops {
            if lp.is_empty() {
                return Err(Error::FamilyInvariant("empty loop".into()));
            }
            for (a, b) in family.loop_steps(lp) {
                if !family.has_edge(a, b) {
                    return Err(Error::FamilyInvariant(format!("loop step `{a}`-`{b}` is not an edge")));
                }
            }
        }
        Ok(family)
    }

    fn check_edge(&self, a: &str, b: &str) -> Result<()> {
        let (x, y) = (self.class(a)?, self.class(b)?);
        if x.m() != y.m() {
            return Err(Error::FamilyInvariant(format!("m jumps along edge `{a}`-`{b}`")));
        }
        for (p, q) in x.theta().upper().iter().zip(y.theta().upper()) {
            let step = Scalar::to_f64(&lift(p, &q, (a, b))?).abs();
            if let Some(eps) = self.epsilon {
                if step > eps {
                    return Err(Error::FamilyInvariant(format!(
                        "theta step {step} along `{a}`-`{b}` exceeds epsilon {eps}"
                    )));
                }
            }
        }
        Ok(())
    }

    fn has_edge(&self, a: &str, b: &str) -> bool {
        a == b || self.edges.iter().any(|(x, y)| (x == a && y == b) || (x == b && y == a))
    }

    /// Consecutive pairs of a loop, closing it if the last vertex is not the first.
    fn loop_steps<'a>(&self, lp: &'a [String]) -> Vec<(&'a str, &'a str)> {
        let mut pts: Vec<&str> = lp.iter().map(String::as_str).collect();
        if pts.len() > 1 && pts.first() == pts.last() {
            pts.pop();
        }
        (0..pts.len()).map(|i| (pts[i], pts[(i + 1) % pts.len()])).collect()
    }

    pub fn class(&self, v: &str) -> Result<&BrauerClass> {
        self.classes.get(v).ok_or_else(|| Error::UnknownPoint(v.to_string()))
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(String, String)] {
        &self.edges
    }

    pub fn loops(&self) -> &[Vec<String>] {
        &self.loops
    }

    pub fn classes(&self) -> &BTreeMap<String, BrauerClass> {
        &self.classes
    }

    pub fn epsilon(&self) -> Option<f64> {
        self.epsilon
    }

    pub fn to_json(&self) -> Value {
        let classes: serde_json::Map<String, Value> =
            self.classes.iter().map(|(k, c)| (k.clone(), c.to_json())).collect();
        let mut v = json!({
            "vertices": self.vertices,
            "edges": self.edges.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
            "loops": self.loops,
            "classes": classes,
        });
        if let Some(eps) = self.epsilon {
            v["epsilon"] = json!(eps);
        }
        v
    }

    pub fn from_json(v: &Value, mode: Mode) -> Result<Self> {
        let name = |x: &Value| match x {
            Value::String(s) => Ok(s.clone()),
            Value::Number(n) => Ok(n.to_string()),
            _ => Err(Error::Schema(format!("vertex names are strings or integers, got {x}"))),
        };
        let list = |key: &str| {
            v.get(key).and_then(Value::as_array).ok_or_else(|| Error::Schema(format!("`{key}` must be an array")))
        };
        let vertices = list("vertices")?.iter().map(name).collect::<Result<Vec<_>>>()?;
        let edges = list("edges")?
            .iter()
            .map(|e| match e.as_array().map(Vec::as_slice) {
                Some([a, b]) => Ok((name(a)?, name(b)?)),
                _ => Err(Error::Schema("edges are pairs".into())),
            })
            .collect::<Result<Vec<_>>>()?;
        let loops = list("loops")?
            .iter()
            .map(|l| {
                l.as_array()
                    .ok_or_else(|| Error::Schema("loops are vertex lists".into()))?
                    .iter()
                    .map(name)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let classes = v
            .get("classes")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Schema("`classes` must be an object".into()))?
            .iter()
            .map(|(k, c)| Ok((k.clone(), BrauerClass::from_json(c, mode)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let epsilon = match v.get("epsilon") {
            None | Some(Value::Null) => None,
            Some(e) => Some(e.as_f64().ok_or_else(|| Error::Schema("`epsilon` must be a number".into()))?),
        };
        Self::new(vertices, edges, loops, classes, epsilon)
    }
}

impl FamilyOverBase {
    /// `k` vertices around a circle; the first pairing entry `Θ₁₂` turns
    /// `winding` times and every vertex carries the associator vector `m`.
    pub fn circle(n: usize, k: usize, winding: i64, m: &[i64]) -> Result<Self> {
        if n < 2 || k < 3 {
            return Err(Error::FamilyInvariant("a circle needs n ≥ 2 and at least 3 vertices".into()));
        }
        let names: Vec<String> = (0..k).map(|i| format!("v{i}")).collect();
        let ell = crate::exterior::binomial(n, 2);
        let mut classes = BTreeMap::new();
        for (i, name) in names.iter().enumerate() {
            let mut upper = vec![Phase::zero(Mode::Exact); ell];
            upper[0] = Phase::ratio((winding * i as i64).rem_euclid(k as i64), k as i64);
            let theta = PhaseMatrix::antisymmetric_from_upper(n, &upper, Mode::Exact)?;
            classes.insert(name.clone(), BrauerClass::new(m.to_vec(), theta)?);
        }
        let edges = (0..k).map(|i| (names[i].clone(), names[(i + 1) % k].clone())).collect();
        Self::new(names.clone(), edges, vec![names], classes, None)
    }
}

/// Winding of each upper pairing entry `(i<j)` around the loop.
pub fn mackey_winding(f: &FamilyOverBase, lp: &[String]) -> Result<Vec<i64>> {
    let steps = f.loop_steps(lp);
    let ell = f.classes.values().next().map(|c| c.theta().upper().len()).unwrap_or(0);
    let mut sums = vec![Rational::from_i64(0); ell];
    for (a, b) in steps {
        if !f.has_edge(a, b) {
            return Err(Error::FamilyInvariant(format!("loop step `{a}`-`{b}` is not an edge")));
        }
        let (x, y) = (f.class(a)?, f.class(b)?);
        for (slot, (p, q)) in sums.iter_mut().zip(x.theta().upper().iter().zip(y.theta().upper())) {
            *slot = slot.clone() + lift(p, &q, (a, b))?;
        }
    }
    sums.into_iter()
        .map(|s| {
            let r = s.round();
            let err = Scalar::to_f64(&(s.clone() - r.clone())).abs();
            let ok = if s.is_integer() { true } else { err <= FLOAT_TOL * lp.len() as f64 };
            if !ok {
                return Err(Error::FamilyInvariant(format!("winding {} is not integral", Scalar::to_f64(&s))));
            }
            num_traits::ToPrimitive::to_i64(&r)
                .ok_or_else(|| Error::FamilyInvariant("winding overflow".into()))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Classical,
    NoncommutativeTorusBundle,
    NonassociativeOnly,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::Classical => "Classical",
            Decision::NoncommutativeTorusBundle => "NoncommutativeTorusBundle",
            Decision::NonassociativeOnly => "NonassociativeOnly",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Evidence {
    None,
    NonzeroObstruction { vertices: Vec<(String, Vec<i64>)> },
    Winding { loops: Vec<(usize, Vec<i64>)> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct TDualityReport {
    pub decision: Decision,
    pub evidence: Evidence,
    pub windings: Vec<Vec<i64>>,
}

impl TDualityReport {
    pub fn to_json(&self) -> Value {
        let evidence = match &self.evidence {
            Evidence::None => json!({"kind": "none"}),
            Evidence::NonzeroObstruction { vertices } => json!({
                "kind": "nonzero-m",
                "vertices": vertices.iter().map(|(v, m)| json!({"vertex": v, "m": m})).collect::<Vec<_>>(),
            }),
            Evidence::Winding { loops } => json!({
                "kind": "mackey-winding",
                "loops": loops.iter().map(|(i, w)| json!({"loop": i, "winding": w})).collect::<Vec<_>>(),
            }),
        };
        json!({
            "decision": self.decision.to_string(),
            "evidence": evidence,
            "windings": self.windings,
        })
    }
}

pub fn t_duality_decision(f: &FamilyOverBase) -> Result<TDualityReport> {
    let windings = f.loops.iter().map(|lp| mackey_winding(f, lp)).collect::<Result<Vec<_>>>()?;
    let obstructed: Vec<(String, Vec<i64>)> = f
        .classes
        .iter()
        .filter(|(_, c)| c.m().iter().any(|&x| x != 0))
        .map(|(v, c)| (v.clone(), c.m().to_vec()))
        .collect();
    if !obstructed.is_empty() {
        return Ok(TDualityReport {
            decision: Decision::NonassociativeOnly,
            evidence: Evidence::NonzeroObstruction { vertices: obstructed },
            windings,
        });
    }
    let winding: Vec<(usize, Vec<i64>)> = windings
        .iter()
        .enumerate()
        .filter(|(_, w)| w.iter().any(|&x| x != 0))
        .map(|(i, w)| (i, w.clone()))
        .collect();
    if !winding.is_empty() {
        return Ok(TDualityReport {
            decision: Decision::NoncommutativeTorusBundle,
            evidence: Evidence::Winding { loops: winding },
            windings,
        });
    }
    Ok(TDualityReport { decision: Decision::Classical, evidence: Evidence::None, windings })
}
