//! Assembles window-checked evidence into a Krull–Gabriel certificate.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{GentleTriple, Mode};
use crate::error::{Error, Result};
use crate::functor::{is_in_c0, FpFunctor, Window};
use crate::gamma::{Family, Gamma, VertexId};

use super::objects::{Simple1, Simple1Kind};
use super::replay::{Replay, Verdict};

pub const DEFAULT_DEPTH: u32 = 8;

pub fn default_window() -> Window {
    Window::square(-8, 8)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Lemma {
    #[serde(rename = "simple0")]
    Simple0,
    #[serde(rename = "simple1")]
    Simple1,
    #[serde(rename = "finite1")]
    Finite1,
    #[serde(rename = "nonsimple1")]
    Nonsimple1,
    #[serde(rename = "c2simple")]
    C2Simple,
    #[serde(rename = "inf_simple0")]
    InfSimple0,
    #[serde(rename = "inf_simple1")]
    InfSimple1,
    #[serde(rename = "inf_finite1")]
    InfFinite1,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub vertex: VertexId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<Simple1Kind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aux: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckRecord {
    pub lemma: Lemma,
    pub params: Params,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
}

/// The filtration layer at which `H_vertex` becomes of finite length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerRecord {
    pub vertex: VertexId,
    pub layer: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub triple: GentleTriple,
    pub kg: u8,
    pub window: Window,
    pub depth: u32,
    pub checks: Vec<CheckRecord>,
    pub verdict: Outcome,
    pub layers: Vec<LayerRecord>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.verdict == Outcome::Pass
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

#[derive(Debug, Clone, Copy)]
enum Job {
    Simple0(VertexId),
    Simple1(Simple1),
    Finite1(VertexId),
    Nonsimple1(VertexId),
    C2(VertexId),
    InfSimple0(VertexId),
    InfSimple1(Simple1),
    InfFinite1(VertexId),
}

fn simple1_samples(g: &Gamma, v: &VertexId) -> Vec<Simple1> {
    let (i, a, b) = (v.orbit, v.a(), v.b());
    let with_bound = |kind| {
        let s = Simple1::new(kind, i, a, b, 0);
        let bound = s.aux_bound(g).expect("kind has a bound");
        vec![Simple1 { aux: bound, ..s }, Simple1 { aux: bound - 2, ..s }]
    };
    match (g.mode(), v.family) {
        (Mode::FiniteGldim, Family::X) => {
            vec![Simple1::new(Simple1Kind::BPrime, i, a, b, 0), Simple1::new(Simple1Kind::BPrime, i, a, b, b + 1)]
        }
        (Mode::FiniteGldim, Family::Y) => {
            vec![Simple1::new(Simple1Kind::BDouble, i, a, b, 0), Simple1::new(Simple1Kind::BDouble, i, a, b, a - 1)]
        }
        (Mode::FiniteGldim, Family::Z) => {
            let mut out = with_bound(Simple1Kind::CPrime);
            out.extend(with_bound(Simple1Kind::CDouble));
            out
        }
        (Mode::InfiniteGldim, _) => with_bound(Simple1Kind::B),
    }
}

fn plan(g: &Gamma, window: &Window) -> Vec<Job> {
    let inner = window.inner_half();
    let inner_vertices = inner.vertices(g);
    let mut jobs = Vec::new();
    match g.mode() {
        Mode::FiniteGldim => {
            jobs.extend(inner_vertices.iter().map(|v| Job::Simple0(*v)));
            for v in &inner_vertices {
                jobs.extend(simple1_samples(g, v).into_iter().map(Job::Simple1));
            }
            jobs.extend(
                window.vertices(g).into_iter().filter(|v| v.family != Family::Z).map(Job::Finite1),
            );
            for v in inner_vertices.iter().filter(|v| v.family == Family::Z) {
                jobs.push(Job::Nonsimple1(*v));
                jobs.push(Job::C2(*v));
            }
        }
        Mode::InfiniteGldim => {
            jobs.extend(inner_vertices.iter().map(|v| Job::InfSimple0(*v)));
            for v in &inner_vertices {
                jobs.extend(simple1_samples(g, v).into_iter().map(Job::InfSimple1));
            }
            jobs.extend(window.vertices(g).into_iter().map(Job::InfFinite1));
        }
    }
    jobs
}

fn vertex_params(v: VertexId) -> Params {
    Params { vertex: v, kind: None, aux: None, depth: None }
}

fn simple1_params(s: &Simple1, depth: u32) -> Params {
    Params { vertex: s.top(), kind: Some(s.kind), aux: Some(s.aux), depth: Some(depth) }
}

/// `H_v` must not be of finite length; folded into the finite-length
/// checks so every examined representable is shown to be nonzero mod 𝒞₀.
fn with_infinite_support(g: &Gamma, v: &VertexId, verdict: Verdict) -> Verdict {
    if verdict.pass && is_in_c0(g, &FpFunctor::representable(*v)) {
        Verdict { pass: false, detail: format!("H at {v} has finite support") }
    } else {
        verdict
    }
}

fn run(g: &Gamma, replay: &Replay, depth: u32, job: &Job) -> CheckRecord {
    let (lemma, params, verdict) = match *job {
        Job::Simple0(v) => (Lemma::Simple0, vertex_params(v), replay.simple0(&v)),
        Job::InfSimple0(v) => (Lemma::InfSimple0, vertex_params(v), replay.simple0(&v)),
        Job::Simple1(s) => (Lemma::Simple1, simple1_params(&s, depth), replay.simple1(&s)),
        Job::InfSimple1(s) => (Lemma::InfSimple1, simple1_params(&s, depth), replay.simple1(&s)),
        Job::Finite1(v) => (
            Lemma::Finite1,
            vertex_params(v),
            replay.finite1(&v).map(|r| with_infinite_support(g, &v, r)),
        ),
        Job::InfFinite1(v) => (
            Lemma::InfFinite1,
            vertex_params(v),
            replay.inf_finite1(&v).map(|r| with_infinite_support(g, &v, r)),
        ),
        Job::Nonsimple1(v) => (
            Lemma::Nonsimple1,
            Params { depth: Some(depth), ..vertex_params(v) },
            replay.nonsimple1(&v, depth),
        ),
        Job::C2(v) => (Lemma::C2Simple, vertex_params(v), replay.c2_simple(&v)),
    };
    let verdict = verdict.unwrap_or_else(|e| Verdict { pass: false, detail: e.to_string() });
    CheckRecord { lemma, params, pass: verdict.pass, detail: verdict.detail }
}

fn layers(checks: &[CheckRecord]) -> Vec<LayerRecord> {
    let mut out: Vec<LayerRecord> = Vec::new();
    let mut z_passes: std::collections::BTreeMap<VertexId, usize> = Default::default();
    for c in checks.iter().filter(|c| c.pass) {
        match c.lemma {
            Lemma::Finite1 | Lemma::InfFinite1 => {
                out.push(LayerRecord { vertex: c.params.vertex, layer: 1 })
            }
            Lemma::Nonsimple1 | Lemma::C2Simple => *z_passes.entry(c.params.vertex).or_default() += 1,
            _ => {}
        }
    }
    out.extend(
        z_passes.into_iter().filter(|&(_, n)| n == 2).map(|(vertex, _)| LayerRecord { vertex, layer: 2 }),
    );
    out.sort_by_key(|l| l.vertex);
    out
}

/// Replays every step of the dimension argument on `window` and claims
/// dimension 2 for finite global dimension, 1 otherwise.
pub fn certify(triple: GentleTriple, window: &Window, depth: u32) -> Certificate {
    let g = Gamma::new(triple);
    let replay = Replay::new(&g, *window, depth);
    let jobs = plan(&g, window);
    let checks: Vec<CheckRecord> = jobs.par_iter().map(|job| run(&g, &replay, depth, job)).collect();
    let verdict = if checks.iter().all(|c| c.pass) { Outcome::Pass } else { Outcome::Fail };
    let kg = match triple.mode() {
        Mode::FiniteGldim => 2,
        Mode::InfiniteGldim => 1,
    };
    let layers = layers(&checks);
    Certificate { triple, kg, window: *window, depth, checks, verdict, layers }
}

/// All infinite-model checks of [`certify`].
pub fn check_infinite_mode(g: &Gamma, window: &Window, depth: u32) -> Result<bool> {
    if g.mode() != Mode::InfiniteGldim {
        return Err(Error::ModeMismatch { expected: Mode::InfiniteGldim.as_str() });
    }
    Ok(certify(g.triple(), window, depth).passed())
}
