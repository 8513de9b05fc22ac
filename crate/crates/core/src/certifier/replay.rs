//! Window-checked replays of the exact sequences behind each layer of the
//! Krull–Gabriel filtration.
//!
//! A [`Replay`] fixes the model, a window and a tower length, and memoizes
//! results per object so that shared sub-objects are checked once. Every
//! check ends in a [`Verdict`]; an `Err` is reserved for calls whose inputs
//! violate a precondition (wrong family, wrong mode, bad parameters).

use std::collections::{HashMap, HashSet};
use std::hash::Hash;
use std::sync::Mutex;

use crate::algebra::Mode;
use crate::error::{Error, Result};
use crate::functor::{basis_out, is_in_c0, quotient_support, ses_check, Layer, Subfunctor, Window};
use crate::gamma::{Family, Gamma, MorphismKey, VertexId};

use super::objects::{build_simple0, Simple1, Simple1Kind};

/// Walks longer than this are reported as failures rather than followed.
const WALK_CAP: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    fn from_step(step: Step<String>) -> Result<Verdict> {
        match step {
            Ok(detail) => Ok(Verdict { pass: true, detail }),
            Err(Halt::Failed(detail)) => Ok(Verdict { pass: false, detail }),
            Err(Halt::Invalid(e)) => Err(e),
        }
    }
}

enum Halt {
    Invalid(Error),
    Failed(String),
}

impl From<Error> for Halt {
    fn from(e: Error) -> Self {
        Halt::Invalid(e)
    }
}

type Step<T = ()> = std::result::Result<T, Halt>;

fn ensure(ok: bool, why: impl FnOnce() -> String) -> Step {
    if ok {
        Ok(())
    } else {
        Err(Halt::Failed(why()))
    }
}

type Memo<K, V> = Mutex<HashMap<K, std::result::Result<V, String>>>;

fn memoized<K: Hash + Eq, V: Clone>(memo: &Memo<K, V>, key: K, run: impl FnOnce() -> Step<V>) -> Step<V> {
    if let Some(hit) = memo.lock().expect("memo lock").get(&key) {
        return hit.clone().map_err(Halt::Failed);
    }
    let out = run();
    let stored = match &out {
        Ok(v) => Ok(v.clone()),
        Err(Halt::Failed(why)) => Err(why.clone()),
        Err(Halt::Invalid(_)) => return out,
    };
    memo.lock().expect("memo lock").insert(key, stored);
    out
}

/// A deliberate corruption of the claims a replay checks, for negative
/// controls: a correct checker must reject every perturbed replay.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Perturbation {
    /// Claimed quotient objects get a wrong coordinate or auxiliary value.
    Coordinate,
    /// Towers and filtrations advance two steps where the sequence has one.
    SkippedStep,
}

pub struct Replay<'g> {
    g: &'g Gamma,
    window: Window,
    tower_len: u32,
    perturbation: Option<Perturbation>,
    towers: Memo<Simple1, ()>,
    finite1: Memo<VertexId, usize>,
}

impl<'g> Replay<'g> {
    pub fn new(g: &'g Gamma, window: Window, tower_len: u32) -> Self {
        Replay {
            g,
            window,
            tower_len,
            perturbation: None,
            towers: Mutex::default(),
            finite1: Mutex::default(),
        }
    }

    pub fn perturbed(mut self, p: Perturbation) -> Self {
        self.perturbation = Some(p);
        self
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    fn stride(&self) -> i64 {
        if self.perturbation == Some(Perturbation::SkippedStep) {
            2
        } else {
            1
        }
    }

    fn claim(&self, s: Simple1) -> Simple1 {
        if self.perturbation == Some(Perturbation::Coordinate) {
            Simple1 { aux: s.aux - 1, ..s }
        } else {
            s
        }
    }

    fn claim_vertex(&self, v: VertexId) -> VertexId {
        if self.perturbation == Some(Perturbation::Coordinate) {
            v.shifted(0, 1)
        } else {
            v
        }
    }

    fn last(&self, orbit: u32) -> i64 {
        i64::from(orbit + 1 == self.g.orbit_count())
    }

    fn m(&self) -> i64 {
        self.g.triple().m().into()
    }

    fn n(&self) -> i64 {
        self.g.triple().n().into()
    }

    fn require_mode(&self, mode: Mode) -> Result<()> {
        if self.g.mode() == mode {
            Ok(())
        } else {
            Err(Error::ModeMismatch { expected: mode.as_str() })
        }
    }

    fn layer(&self, layer: &Layer) -> Step {
        match layer.mismatch(self.g, &self.window)? {
            None => Ok(()),
            Some(v) => Err(Halt::Failed(format!(
                "(Im {} + D)/(Im {:?} + D) differs from {:?} at {v}",
                layer.upper,
                layer.lower.iter().map(ToString::to_string).collect::<Vec<_>>(),
                layer.quotient.generators().iter().map(ToString::to_string).collect::<Vec<_>>(),
            ))),
        }
    }

    /// `A_v` is one-dimensional at `v` and vanishes elsewhere in the window.
    pub fn simple0(&self, v: &VertexId) -> Result<Verdict> {
        Verdict::from_step(self.simple0_step(v))
    }

    fn simple0_step(&self, v: &VertexId) -> Step<String> {
        let a = build_simple0(self.g, &self.claim_vertex(*v))?;
        for h in basis_out(self.g, &a.top, &self.window) {
            let survives = !a.denominators.contains(self.g, &h);
            let expected = h == MorphismKey::Identity(*v);
            ensure(survives == expected, || format!("A at {v} is wrong on {h}"))?;
        }
        if self.window.contains_vertex(v) {
            Ok(format!("A at {v} is supported exactly at {v}"))
        } else {
            Ok(format!("{v} lies outside the window; only the zero checks ran"))
        }
    }

    /// The tower, infinitude, and case analysis for one simple-mod-finite
    /// object.
    pub fn simple1(&self, s: &Simple1) -> Result<Verdict> {
        Verdict::from_step(self.tower(s).map(|()| {
            format!("{s}: tower of length {} and every map out of the top resolved", self.tower_len)
        }))
    }

    fn tower(&self, s: &Simple1) -> Step {
        memoized(&self.towers, *s, || self.tower_uncached(s))
    }

    fn tower_uncached(&self, s: &Simple1) -> Step {
        let g = self.g;
        let k = s.build(g)?;
        ensure(!is_in_c0(g, &k), || format!("{s} has finite support"))?;
        let (ea, eb) = s.kind.tower_step();
        let stride = self.stride();
        for j in 0..=i64::from(self.tower_len) {
            let here = s.along_tower(j);
            let t = here.top();
            let kh = here.build(g)?;
            let f = g.morphism_or_zero(&t, &t.shifted(stride * ea, stride * eb), 0)?;
            let sub = Subfunctor::new(t, vec![f])?;
            let ok = ses_check(g, &sub, &kh.denominators, &build_simple0(g, &t)?, &self.window)?;
            ensure(ok, || format!("0 -> {} -> {here} -> A -> 0 is not exact", s.along_tower(j + 1)))?;
            self.layer(&Layer {
                frame: kh.denominators.clone(),
                upper: f,
                lower: Vec::new(),
                quotient: self.claim(s.along_tower(j + stride)).build(g)?,
            })?;
        }
        let mut settled = HashSet::new();
        for f in basis_out(g, &k.top, &self.window) {
            self.settle(s, &k.denominators, f, &mut settled)?;
        }
        Ok(())
    }

    /// Shows that the image of `f` in the object is zero or the whole object
    /// modulo finite length: a chain of layers, each a simple `A`, linking
    /// `f` either to the identity (along the tower) or into the denominator.
    fn settle(&self, s: &Simple1, denoms: &Subfunctor, f: MorphismKey, settled: &mut HashSet<MorphismKey>) -> Step {
        let g = self.g;
        let top = denoms.top;
        let (ea, eb) = s.kind.tower_step();
        let mut path = Vec::new();
        let mut cur = f;
        loop {
            if settled.contains(&cur)
                || matches!(cur, MorphismKey::Zero | MorphismKey::Identity(_))
                || denoms.contains(g, &cur)
            {
                break;
            }
            ensure(path.len() < WALK_CAP, || format!("{s}: walk from {f} does not terminate"))?;
            let v = cur.target().expect("nonzero");
            let degree = cur.degree().expect("nonzero");
            let next = if v.family == top.family && v.orbit == top.orbit && degree == 0 {
                let (da, db) = (v.a() - top.a(), v.b() - top.b());
                let on_tower = if ea != 0 { db == 0 && da > 0 } else { da == 0 && db > 0 };
                ensure(on_tower, || format!("{s}: {cur} is off the tower and not in the denominator"))?;
                let prev = g.morphism_or_zero(&top, &v.shifted(-ea, -eb), 0)?;
                self.layer(&Layer {
                    frame: denoms.clone(),
                    upper: prev,
                    lower: vec![cur],
                    quotient: build_simple0(g, &prev.target().expect("nonzero"))?,
                })?;
                prev
            } else if let Some((da, db)) = s.kind.walk_step(v.family, degree) {
                let next = g.morphism_or_zero(&top, &v.shifted(da, db), degree)?;
                self.layer(&Layer {
                    frame: denoms.clone(),
                    upper: cur,
                    lower: vec![next],
                    quotient: build_simple0(g, &v)?,
                })?;
                next
            } else {
                return Err(Halt::Failed(format!("{s}: no case covers {cur}")));
            };
            path.push(cur);
            cur = next;
        }
        settled.extend(path);
        Ok(())
    }

    /// `H_v` has finite length modulo finite length functors, for `v` in
    /// the `X` or `Y` family of the finite model.
    pub fn finite1(&self, v: &VertexId) -> Result<Verdict> {
        self.require_mode(Mode::FiniteGldim)?;
        Verdict::from_step(self.finite1_step(v).map(|steps| {
            format!("H at {v}: {steps} induction steps down to the base case")
        }))
    }

    fn finite1_step(&self, v: &VertexId) -> Step<usize> {
        if v.family == Family::Z {
            return Err(Error::WrongFamily { vertex: *v, family: v.family }.into());
        }
        self.g.check_vertex(v)?;
        memoized(&self.finite1, *v, || self.finite1_uncached(v))
    }

    fn finite1_uncached(&self, v: &VertexId) -> Step<usize> {
        let g = self.g;
        let (i, a, b) = (v.orbit, v.a(), v.b());
        let first = i64::from(i == 0);
        let last = self.last(i);
        let (map_to_z, sub, quot, base): (_, Simple1, Simple1, _) = match v.family {
            Family::X => (
                g.arrow(v, &VertexId::z(i, a, 0), 1)?,
                Simple1::new(Simple1Kind::CPrime, i, a, 0, a + last * self.m() + 1),
                Simple1::new(Simple1Kind::BPrime, i, a, b, 0),
                -first * self.m(),
            ),
            Family::Y => (
                g.arrow(v, &VertexId::z(i, 0, a), 1)?,
                Simple1::new(Simple1Kind::CDouble, i, 0, a, a - last * self.n() + 1),
                Simple1::new(Simple1Kind::BDouble, i, a, b, 0),
                first * self.n(),
            ),
            Family::Z => unreachable!("guarded by finite1_step"),
        };
        let (sub, quot) = (self.claim(sub), self.claim(quot));
        let sink = g.morphism_or_zero(v, &v.shifted(1, 0), 0)?;
        let frame = Subfunctor::new(*v, vec![sink])?;
        self.layer(&Layer { frame: frame.clone(), upper: map_to_z, lower: Vec::new(), quotient: sub.build(g)? })?;
        self.layer(&Layer {
            frame,
            upper: MorphismKey::Identity(*v),
            lower: vec![map_to_z],
            quotient: quot.build(g)?,
        })?;
        self.tower(&sub)?;
        self.tower(&quot)?;
        if sink.is_zero() {
            ensure(b - a == base, || format!("{v}: sink map vanishes above the base case"))?;
            Ok(1)
        } else {
            Ok(1 + self.finite1_step(&v.shifted(1, 0))?)
        }
    }

    /// The first `depth` layers of the infinite filtration of `H_v` by
    /// images of the maps `v -> v + (k, 0)`, each a `C′` object.
    pub fn nonsimple1(&self, v: &VertexId, depth: u32) -> Result<Verdict> {
        self.require_mode(Mode::FiniteGldim)?;
        if v.family != Family::Z {
            return Err(Error::WrongFamily { vertex: *v, family: v.family });
        }
        self.g.check_vertex(v)?;
        Verdict::from_step(self.nonsimple1_step(v, depth))
    }

    fn nonsimple1_step(&self, v: &VertexId, depth: u32) -> Step<String> {
        let g = self.g;
        let (i, a, b) = (v.orbit, v.a(), v.b());
        let aux = a + self.last(i) * self.m() + 1;
        for k in 0..i64::from(depth) {
            let upper = g.morphism_or_zero(v, &v.shifted(k, 0), 0)?;
            let lower = g.morphism_or_zero(v, &v.shifted(k + self.stride(), 0), 0)?;
            let c = self.claim(Simple1::new(Simple1Kind::CPrime, i, a + k, b, aux));
            let quotient = c.build(g)?;
            if k == 0 {
                let sub = Subfunctor::new(*v, vec![lower])?;
                let ok = ses_check(g, &sub, &Subfunctor::zero(*v), &quotient, &self.window)?;
                ensure(ok, || format!("{v}: first layer sequence is not exact"))?;
            }
            self.layer(&Layer { frame: Subfunctor::zero(*v), upper, lower: vec![lower], quotient })?;
            self.tower(&c)?;
        }
        Ok(format!("H at {v}: {depth} layers, each simple modulo finite length"))
    }

    /// Every map out of the `Z` vertex `v` has an image equal to `H_v` or to
    /// zero modulo the functors of finite length modulo finite length.
    pub fn c2_simple(&self, v: &VertexId) -> Result<Verdict> {
        self.require_mode(Mode::FiniteGldim)?;
        if v.family != Family::Z {
            return Err(Error::WrongFamily { vertex: *v, family: v.family });
        }
        self.g.check_vertex(v)?;
        Verdict::from_step(self.c2_step(v))
    }

    fn c2_step(&self, v: &VertexId) -> Step<String> {
        let g = self.g;
        let (i, a, b) = (v.orbit, v.a(), v.b());
        let next = g.next_orbit(i);
        let last = self.last(i);
        let mut counts = [0usize; 3];
        for f in basis_out(g, v, &self.window) {
            let MorphismKey::Arrow(arrow) = f else { continue };
            let w = arrow.dst;
            match (w.family, arrow.degree) {
                (Family::Z, 0) => {
                    let (c, d) = (w.a(), w.b());
                    let (upper_at, quot) = if c > a {
                        (w.shifted(-1, 0), Simple1::new(Simple1Kind::CPrime, i, c - 1, d, a + last * self.m() + 1))
                    } else {
                        (w.shifted(0, -1), Simple1::new(Simple1Kind::CDouble, i, c, d - 1, b - last * self.n() + 1))
                    };
                    let quot = self.claim(quot);
                    let upper = g.morphism_or_zero(v, &upper_at, 0)?;
                    self.layer(&Layer {
                        frame: Subfunctor::zero(*v),
                        upper,
                        lower: vec![f],
                        quotient: quot.build(g)?,
                    })?;
                    self.tower(&quot)?;
                    counts[0] += 1;
                }
                (Family::X, 1) | (Family::Y, 1) if w.orbit == next => {
                    self.finite1_step(&w)?;
                    counts[1] += 1;
                }
                (Family::Z, 2) if w.orbit == next => {
                    let through = VertexId::x(next, w.a(), a);
                    let h = g.arrow(v, &through, 1)?;
                    let e = g.arrow(&through, &w, 1)?;
                    ensure(g.compose(&e, &h)? == f, || format!("{f} does not factor through {through}"))?;
                    self.finite1_step(&through)?;
                    counts[2] += 1;
                }
                _ => return Err(Halt::Failed(format!("no case covers {f}"))),
            }
        }
        Ok(format!(
            "H at {v}: {} maps by induction, {} through X/Y vertices, {} through X factorizations",
            counts[0], counts[1], counts[2]
        ))
    }

    /// The infinite-model version of [`Replay::finite1`], for `X` vertices.
    pub fn inf_finite1(&self, v: &VertexId) -> Result<Verdict> {
        self.require_mode(Mode::InfiniteGldim)?;
        self.g.check_vertex(v)?;
        Verdict::from_step(self.inf_finite1_step(v).map(|steps| {
            format!("H at {v}: {steps} induction steps, finite length sub-objects")
        }))
    }

    fn inf_finite1_step(&self, v: &VertexId) -> Step<usize> {
        memoized(&self.finite1, *v, || self.inf_finite1_uncached(v))
    }

    fn inf_finite1_uncached(&self, v: &VertexId) -> Step<usize> {
        let g = self.g;
        let (i, a, b) = (v.orbit, v.a(), v.b());
        let reach = a + self.last(i) * self.m();
        let e = g.arrow(v, &VertexId::x(g.next_orbit(i), reach, a), 1)?;
        let quot = self.claim(Simple1::new(Simple1Kind::B, i, a, b, reach));
        let sink = g.morphism_or_zero(v, &v.shifted(1, 0), 0)?;
        let frame = Subfunctor::new(*v, vec![sink])?;
        let gap = quotient_support(g, &frame.with(&[e]), &frame)?;
        ensure(gap.is_finite(), || format!("{v}: (Im {e} + D)/D has infinite support"))?;
        self.layer(&Layer {
            frame,
            upper: MorphismKey::Identity(*v),
            lower: vec![e],
            quotient: quot.build(g)?,
        })?;
        self.tower(&quot)?;
        if sink.is_zero() {
            let base = -i64::from(i == 0) * self.m();
            ensure(b - a == base, || format!("{v}: sink map vanishes above the base case"))?;
            Ok(1)
        } else {
            Ok(1 + self.inf_finite1_step(&v.shifted(1, 0))?)
        }
    }
}

pub fn check_simple0(g: &Gamma, v: &VertexId, window: &Window) -> Result<bool> {
    Ok(Replay::new(g, *window, 0).simple0(v)?.pass)
}

pub fn check_simple1_tower(g: &Gamma, instance: &Simple1, len: u32, window: &Window) -> Result<bool> {
    Ok(Replay::new(g, *window, len).simple1(instance)?.pass)
}

pub fn check_finite1(g: &Gamma, v: &VertexId, window: &Window) -> Result<bool> {
    Ok(Replay::new(g, *window, 4).finite1(v)?.pass)
}

pub fn check_nonsimple1(g: &Gamma, v: &VertexId, depth: u32, window: &Window) -> Result<bool> {
    Ok(Replay::new(g, *window, 4).nonsimple1(v, depth)?.pass)
}

pub fn check_c2_simple(g: &Gamma, v: &VertexId, window: &Window) -> Result<bool> {
    Ok(Replay::new(g, *window, 4).c2_simple(v)?.pass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GentleTriple;

    fn model(r: i64, n: i64, m: i64) -> Gamma {
        Gamma::new(GentleTriple::new(r, n, m).unwrap())
    }

    #[test]
    fn simple0_instances() {
        let g = model(1, 2, 0);
        let w = Window::square(-4, 4);
        for v in [VertexId::z(0, 0, 0), VertexId::x(0, 0, 0), VertexId::y(0, -1, 3)] {
            assert!(check_simple0(&g, &v, &w).unwrap(), "{v}");
        }
        let outside = Replay::new(&g, Window::square(5, 6), 0).simple0(&VertexId::z(0, 0, 0)).unwrap();
        assert!(outside.pass);
        assert!(outside.detail.contains("outside"));
    }

    #[test]
    fn simple1_towers() {
        let g = model(1, 2, 0);
        let w = Window::square(-6, 6);
        let b = Simple1::new(Simple1Kind::BPrime, 0, 0, 1, 0);
        assert!(check_simple1_tower(&g, &b, 4, &w).unwrap());
        assert!(check_simple1_tower(&g, &b, 0, &w).unwrap());
        for s in [
            Simple1::new(Simple1Kind::BDouble, 0, 0, 3, -1),
            Simple1::new(Simple1Kind::CPrime, 0, 0, 0, 1),
            Simple1::new(Simple1Kind::CDouble, 0, 1, -1, -2),
        ] {
            assert!(check_simple1_tower(&g, &s, 3, &w).unwrap(), "{s}");
        }
        let inf = model(1, 1, 0);
        let s = Simple1::new(Simple1Kind::B, 0, 0, 0, -1);
        assert!(check_simple1_tower(&inf, &s, 3, &w).unwrap());
    }

    #[test]
    fn finite1_instances() {
        let g = model(1, 2, 0);
        let w = Window::square(-8, 8);
        let replay = Replay::new(&g, w, 4);
        let x = replay.finite1(&VertexId::x(0, 0, 3)).unwrap();
        assert!(x.pass, "{}", x.detail);
        assert!(x.detail.contains("4 induction steps"), "{}", x.detail);
        let y = replay.finite1(&VertexId::y(0, 0, 5)).unwrap();
        assert!(y.pass, "{}", y.detail);
        assert!(y.detail.contains("4 induction steps"), "{}", y.detail);
        assert!(matches!(
            check_finite1(&g, &VertexId::z(0, 0, 0), &w),
            Err(Error::WrongFamily { .. })
        ));
    }

    #[test]
    fn nonsimple1_and_c2_instances() {
        let g = model(1, 2, 0);
        let z = VertexId::z(0, 0, 0);
        assert!(check_nonsimple1(&g, &z, 5, &Window::square(-6, 6)).unwrap());
        assert!(check_nonsimple1(&g, &z, 1, &Window::square(-6, 6)).unwrap());
        assert!(check_c2_simple(&g, &z, &Window::square(-5, 5)).unwrap());
        let inf = model(1, 1, 0);
        assert!(matches!(
            check_nonsimple1(&inf, &VertexId::x(0, 0, 0), 2, &Window::square(-3, 3)),
            Err(Error::ModeMismatch { .. })
        ));
        assert!(matches!(
            check_c2_simple(&inf, &VertexId::x(0, 0, 0), &Window::square(-3, 3)),
            Err(Error::ModeMismatch { .. })
        ));
    }

    #[test]
    fn perturbed_replays_fail() {
        let g = model(1, 2, 0);
        let w = Window::square(-6, 6);
        let z = VertexId::z(0, 0, 0);
        let b = Simple1::new(Simple1Kind::BPrime, 0, 0, 1, 0);
        let fresh = |p| Replay::new(&g, w, 3).perturbed(p);
        use Perturbation::*;
        assert!(!fresh(Coordinate).simple0(&z).unwrap().pass);
        assert!(!fresh(Coordinate).simple1(&b).unwrap().pass);
        assert!(!fresh(SkippedStep).simple1(&b).unwrap().pass);
        assert!(!fresh(Coordinate).finite1(&VertexId::x(0, 0, 2)).unwrap().pass);
        assert!(!fresh(Coordinate).finite1(&VertexId::y(0, 0, 3)).unwrap().pass);
        assert!(!fresh(SkippedStep).nonsimple1(&z, 3).unwrap().pass);
        assert!(!fresh(Coordinate).nonsimple1(&z, 3).unwrap().pass);
        assert!(!fresh(Coordinate).c2_simple(&z).unwrap().pass);
        let inf = model(1, 1, 0);
        let replay = Replay::new(&inf, w, 3).perturbed(Coordinate);
        assert!(!replay.inf_finite1(&VertexId::x(0, 0, 1)).unwrap().pass);
        let s = Simple1::new(Simple1Kind::B, 0, 0, 0, -1);
        assert!(!Replay::new(&inf, w, 3).perturbed(SkippedStep).simple1(&s).unwrap().pass);
    }

    #[test]
    fn nested_windows_agree() {
        let g = model(2, 3, 1);
        let z = VertexId::z(1, 0, 0);
        for hi in [3, 4, 5] {
            let w = Window::square(-hi, hi);
            assert!(check_c2_simple(&g, &z, &w).unwrap(), "window {hi}");
            assert!(check_nonsimple1(&g, &z, 3, &w).unwrap(), "window {hi}");
            assert!(check_finite1(&g, &VertexId::x(1, 0, 1), &w).unwrap(), "window {hi}");
        }
    }
}
