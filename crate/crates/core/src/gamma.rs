//! The quiver-with-relations model of the perfect derived category.
//!
//! Vertices are `X`, `Y` and `Z` objects indexed by an orbit `i` and a
//! coordinate `(a, b)`. Each vertex has a small [`ArrowFan`]: for every
//! target family and degree, a rectangle of target coordinates. Hom spaces
//! have the arrows (plus the identity) as a basis, and composition is
//! monomial: `g ∘ f` is the arrow of degree `deg f + deg g` between the outer
//! endpoints when it exists, and zero otherwise.
//!
//! In the infinite global dimension model (`r = n`) only `X` vertices exist,
//! degrees are 0 and 1, and orbits run mod `n`.

use std::fmt;
use std::str::FromStr;

use arrayvec::ArrayVec;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{GentleTriple, Mode};
use crate::error::{Error, Result};
use crate::region::{Coord, Interval, Region};

/// Vertices with a coordinate beyond this magnitude are rejected, which keeps
/// every fan bound (`b + m`, `a - n`, …) far from `i64` overflow.
pub const COORD_LIMIT: i64 = 1 << 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    X,
    Y,
    Z,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::X => "X",
            Family::Y => "Y",
            Family::Z => "Z",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "X" => Ok(Family::X),
            "Y" => Ok(Family::Y),
            "Z" => Ok(Family::Z),
            other => Err(Error::Parse(format!("unknown family {other:?}"))),
        }
    }
}

/// An indecomposable object: `family^(orbit)_(a,b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId {
    pub family: Family,
    pub orbit: u32,
    pub coord: Coord,
}

impl VertexId {
    pub const fn new(family: Family, orbit: u32, a: i64, b: i64) -> Self {
        VertexId { family, orbit, coord: Coord { a, b } }
    }

    pub const fn x(orbit: u32, a: i64, b: i64) -> Self {
        VertexId::new(Family::X, orbit, a, b)
    }

    pub const fn y(orbit: u32, a: i64, b: i64) -> Self {
        VertexId::new(Family::Y, orbit, a, b)
    }

    pub const fn z(orbit: u32, a: i64, b: i64) -> Self {
        VertexId::new(Family::Z, orbit, a, b)
    }

    pub fn a(&self) -> i64 {
        self.coord.a
    }

    pub fn b(&self) -> i64 {
        self.coord.b
    }

    /// Same family and orbit, coordinate moved by `(da, db)`.
    pub fn shifted(&self, da: i64, db: i64) -> VertexId {
        VertexId { coord: Coord::new(self.coord.a + da, self.coord.b + db), ..*self }
    }

    pub fn with_coord(&self, a: i64, b: i64) -> VertexId {
        VertexId { coord: Coord::new(a, b), ..*self }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.family, self.orbit, self.coord)
    }
}

impl FromStr for VertexId {
    type Err = Error;

    /// Parses `X:0:(0,1)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad vertex {s:?}, expected e.g. X:0:(0,1)"));
        let mut parts = s.trim().splitn(3, ':');
        let family: Family = parts.next().ok_or_else(bad)?.parse()?;
        let orbit: u32 = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
        let coord = parts.next().ok_or_else(bad)?.trim();
        let inner = coord.strip_prefix('(').and_then(|c| c.strip_suffix(')')).ok_or_else(bad)?;
        let (a, b) = inner.split_once(',').ok_or_else(bad)?;
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().parse().map_err(|_| bad())?;
        Ok(VertexId::new(family, orbit, a, b))
    }
}

/// A basis arrow of the quiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arrow {
    pub src: VertexId,
    pub dst: VertexId,
    pub degree: u8,
}

/// A basis morphism, the identity, or zero. No scalars: every relation of
/// the model is monomial with coefficient one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MorphismKey {
    Zero,
    Identity(VertexId),
    Arrow(Arrow),
}

impl MorphismKey {
    pub fn arrow(src: VertexId, dst: VertexId, degree: u8) -> Self {
        MorphismKey::Arrow(Arrow { src, dst, degree })
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, MorphismKey::Zero)
    }

    pub fn source(&self) -> Option<VertexId> {
        match self {
            MorphismKey::Zero => None,
            MorphismKey::Identity(v) => Some(*v),
            MorphismKey::Arrow(a) => Some(a.src),
        }
    }

    pub fn target(&self) -> Option<VertexId> {
        match self {
            MorphismKey::Zero => None,
            MorphismKey::Identity(v) => Some(*v),
            MorphismKey::Arrow(a) => Some(a.dst),
        }
    }

    /// Identities have degree 0.
    pub fn degree(&self) -> Option<u8> {
        match self {
            MorphismKey::Zero => None,
            MorphismKey::Identity(_) => Some(0),
            MorphismKey::Arrow(a) => Some(a.degree),
        }
    }
}

impl fmt::Display for MorphismKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorphismKey::Zero => f.write_str("zero"),
            MorphismKey::Identity(v) => write!(f, "id@{v}"),
            MorphismKey::Arrow(a) => write!(f, "{}->{}@{}", a.src, a.dst, a.degree),
        }
    }
}

impl FromStr for MorphismKey {
    type Err = Error;

    /// Parses `zero`, `id@X:0:(0,1)` or `X:0:(0,1)->Z:0:(0,5)@1`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "zero" {
            return Ok(MorphismKey::Zero);
        }
        if let Some(v) = s.strip_prefix("id@") {
            return Ok(MorphismKey::Identity(v.parse()?));
        }
        let bad = || Error::Parse(format!("bad morphism {s:?}, expected SRC->DST@DEGREE"));
        let (src, rest) = s.split_once("->").ok_or_else(bad)?;
        let (dst, degree) = rest.rsplit_once('@').ok_or_else(bad)?;
        let degree: u8 = degree.trim().parse().map_err(|_| bad())?;
        Ok(MorphismKey::arrow(src.parse()?, dst.parse()?, degree))
    }
}

macro_rules! string_serde {
    ($ty:ty) => {
        impl Serialize for $ty {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }

        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let text = String::deserialize(d)?;
                text.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

string_serde!(VertexId);
string_serde!(MorphismKey);

/// One family of outgoing arrows: all targets `family^(orbit)_u` with `u` in
/// `region`, each reached by exactly one arrow of `degree`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanEntry {
    pub family: Family,
    pub orbit: u32,
    pub degree: u8,
    pub region: Region,
    /// Set on the degree-0 entry of the source's own family: the source
    /// itself lies in the region but carries the identity, not an arrow.
    pub excludes_src: bool,
}

impl FanEntry {
    pub fn reaches(&self, src: &VertexId, dst: &VertexId) -> bool {
        self.family == dst.family
            && self.orbit == dst.orbit
            && self.region.member(dst.coord)
            && !(self.excludes_src && src == dst)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowFan {
    pub src: VertexId,
    pub entries: Vec<FanEntry>,
}

/// The category `kΓ/R` for one triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Gamma {
    triple: GentleTriple,
}

fn delta(i: u32, j: u32) -> i64 {
    i64::from(i == j)
}

impl Gamma {
    pub fn new(triple: GentleTriple) -> Self {
        Gamma { triple }
    }

    pub fn triple(&self) -> GentleTriple {
        self.triple
    }

    pub fn mode(&self) -> Mode {
        self.triple.mode()
    }

    pub fn orbit_count(&self) -> u32 {
        self.triple.orbit_count()
    }

    pub fn families(&self) -> &'static [Family] {
        match self.mode() {
            Mode::FiniteGldim => &[Family::X, Family::Y, Family::Z],
            Mode::InfiniteGldim => &[Family::X],
        }
    }

    pub fn next_orbit(&self, orbit: u32) -> u32 {
        (orbit + 1) % self.orbit_count()
    }

    fn m(&self) -> i64 {
        self.triple.m().into()
    }

    fn n(&self) -> i64 {
        self.triple.n().into()
    }

    /// The coordinate set of `family^(orbit)`, or `None` when that family or
    /// orbit does not occur in this model.
    pub fn index_set(&self, family: Family, orbit: u32) -> Option<Region> {
        if orbit >= self.orbit_count() || !self.families().contains(&family) {
            return None;
        }
        let first = delta(orbit, 0);
        Some(match family {
            // a <= b + δ_{i,0}·m
            Family::X => Region::FULL.with_diff(Interval::at_most(first * self.m())),
            // a + δ_{i,0}·n <= b
            Family::Y => Region::FULL.with_diff(Interval::at_most(-first * self.n())),
            Family::Z => Region::FULL,
        })
    }

    pub fn vertex_valid(&self, v: &VertexId) -> bool {
        v.coord.a.abs() <= COORD_LIMIT
            && v.coord.b.abs() <= COORD_LIMIT
            && self.index_set(v.family, v.orbit).is_some_and(|set| set.member(v.coord))
    }

    pub fn check_vertex(&self, v: &VertexId) -> Result<()> {
        if self.vertex_valid(v) {
            Ok(())
        } else {
            Err(Error::InvalidVertex(*v))
        }
    }

    /// The fan without validating `v`; callers guarantee validity.
    pub(crate) fn fan_entries(&self, v: &VertexId) -> ArrayVec<FanEntry, 4> {
        let VertexId { family, orbit: i, coord: Coord { a, b } } = *v;
        let next = self.next_orbit(i);
        let (m, n) = (self.m(), self.n());
        let d0 = delta(i, 0);
        let dl = delta(i, self.orbit_count() - 1);
        let entry = |family, orbit, degree, region, excludes_src| FanEntry {
            family,
            orbit,
            degree,
            region,
            excludes_src,
        };
        let ge = Interval::at_least;
        let le = Interval::at_most;
        let span = Interval::closed;
        let mut out = ArrayVec::new();
        match (self.mode(), family) {
            (Mode::InfiniteGldim, _) => {
                out.push(entry(Family::X, i, 0, Region::boxed(span(a, b + d0 * m), ge(b)), true));
                out.push(entry(
                    Family::X,
                    next,
                    1,
                    Region::boxed(le(a + dl * m), span(a, b + d0 * m)),
                    false,
                ));
            }
            (Mode::FiniteGldim, Family::X) => {
                out.push(entry(Family::X, i, 0, Region::boxed(span(a, b + d0 * m), ge(b)), true));
                out.push(entry(
                    Family::Z,
                    i,
                    1,
                    Region::boxed(span(a, b + d0 * m), Interval::FULL),
                    false,
                ));
                out.push(entry(
                    Family::X,
                    next,
                    2,
                    Region::boxed(le(a + dl * m), span(a, b + d0 * m)),
                    false,
                ));
            }
            (Mode::FiniteGldim, Family::Y) => {
                out.push(entry(Family::Y, i, 0, Region::boxed(span(a, b - d0 * n), ge(b)), true));
                out.push(entry(
                    Family::Z,
                    i,
                    1,
                    Region::boxed(Interval::FULL, span(a, b - d0 * n)),
                    false,
                ));
                out.push(entry(
                    Family::Y,
                    next,
                    2,
                    Region::boxed(le(a - dl * n), span(a, b - d0 * n)),
                    false,
                ));
            }
            (Mode::FiniteGldim, Family::Z) => {
                out.push(entry(Family::Z, i, 0, Region::boxed(ge(a), ge(b)), true));
                out.push(entry(Family::X, next, 1, Region::boxed(le(a + dl * m), ge(a)), false));
                out.push(entry(Family::Y, next, 1, Region::boxed(le(b - dl * n), ge(b)), false));
                out.push(entry(
                    Family::Z,
                    next,
                    2,
                    Region::boxed(le(a + dl * m), le(b - dl * n)),
                    false,
                ));
            }
        }
        out
    }

    pub fn arrow_fan(&self, v: &VertexId) -> Result<ArrowFan> {
        self.check_vertex(v)?;
        Ok(ArrowFan { src: *v, entries: self.fan_entries(v).into_iter().collect() })
    }

    pub fn arrow_exists(&self, src: &VertexId, dst: &VertexId, degree: u8) -> bool {
        self.vertex_valid(src)
            && self.vertex_valid(dst)
            && self
                .fan_entries(src)
                .iter()
                .any(|e| e.degree == degree && e.reaches(src, dst))
    }

    /// The basis arrow `src -> dst` of `degree`, if there is one.
    pub fn arrow(&self, src: &VertexId, dst: &VertexId, degree: u8) -> Result<MorphismKey> {
        if self.arrow_exists(src, dst, degree) {
            Ok(MorphismKey::arrow(*src, *dst, degree))
        } else {
            Err(Error::NoSuchArrow { src: *src, dst: *dst, degree })
        }
    }

    /// The morphism named by `(src, dst, degree)` under the zero convention:
    /// zero when `dst` is not a vertex, the identity for `(v, v, 0)`, the
    /// basis arrow otherwise. Fails if `dst` is a vertex that no arrow of
    /// that degree reaches.
    pub fn morphism_or_zero(&self, src: &VertexId, dst: &VertexId, degree: u8) -> Result<MorphismKey> {
        self.check_vertex(src)?;
        if !self.vertex_valid(dst) {
            return Ok(MorphismKey::Zero);
        }
        if src == dst && degree == 0 {
            return Ok(MorphismKey::Identity(*src));
        }
        self.arrow(src, dst, degree)
    }

    /// Identity first (when `u = v`), then arrows by ascending degree.
    pub fn hom_basis(&self, u: &VertexId, v: &VertexId) -> Vec<MorphismKey> {
        self.hom_iter(u, v).collect()
    }

    pub(crate) fn hom_iter(&self, u: &VertexId, v: &VertexId) -> impl Iterator<Item = MorphismKey> {
        let valid = self.vertex_valid(u) && self.vertex_valid(v);
        let identity = (valid && u == v).then_some(MorphismKey::Identity(*u));
        let fan = if valid { self.fan_entries(u) } else { ArrayVec::new() };
        let (u, v) = (*u, *v);
        identity.into_iter().chain(
            fan.into_iter()
                .filter(move |e| e.reaches(&u, &v))
                .map(move |e| MorphismKey::arrow(u, v, e.degree)),
        )
    }

    /// `g ∘ f`.
    pub fn compose(&self, g: &MorphismKey, f: &MorphismKey) -> Result<MorphismKey> {
        let mismatch = || Error::NotComposable { f: *f, g: *g };
        match (g, f) {
            (MorphismKey::Zero, _) | (_, MorphismKey::Zero) => Ok(MorphismKey::Zero),
            (g, MorphismKey::Identity(v)) => {
                if g.source() == Some(*v) {
                    Ok(*g)
                } else {
                    Err(mismatch())
                }
            }
            (MorphismKey::Identity(v), f) => {
                if f.target() == Some(*v) {
                    Ok(*f)
                } else {
                    Err(mismatch())
                }
            }
            (MorphismKey::Arrow(ga), MorphismKey::Arrow(fa)) => {
                if fa.dst != ga.src {
                    return Err(mismatch());
                }
                let degree = fa.degree + ga.degree;
                if self.arrow_exists(&fa.src, &ga.dst, degree) {
                    Ok(MorphismKey::arrow(fa.src, ga.dst, degree))
                } else {
                    Ok(MorphismKey::Zero)
                }
            }
        }
    }

    /// The two degree-0 maps `v -> v+(1,0)` and `v -> v+(0,1)`; a map whose
    /// target leaves the index set is zero.
    pub fn ar_sink_maps(&self, v: &VertexId) -> Result<[MorphismKey; 2]> {
        Ok([
            self.morphism_or_zero(v, &v.shifted(1, 0), 0)?,
            self.morphism_or_zero(v, &v.shifted(0, 1), 0)?,
        ])
    }

    /// All vertices whose coordinate lies in `window`, sorted.
    pub fn vertices_in(&self, window: &Region) -> Result<Vec<VertexId>> {
        let mut out = Vec::new();
        for &family in self.families() {
            for orbit in 0..self.orbit_count() {
                let set = self.index_set(family, orbit).expect("family and orbit in range");
                for coord in set.enumerate(window)? {
                    let v = VertexId { family, orbit, coord };
                    if self.vertex_valid(&v) {
                        out.push(v);
                    }
                }
            }
        }
        Ok(out)
    }
}
