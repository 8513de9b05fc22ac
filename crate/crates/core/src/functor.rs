//! Finitely generated subfunctors of representables and their quotients.
//!
//! A [`Subfunctor`] of `H_top = Hom(top, -)` is generated by basis
//! morphisms out of `top`. Because composition is monomial, its value at
//! any vertex is a subset of the Hom basis, so every computation here is a
//! set comparison. An [`FpFunctor`] is `H_top` modulo such a subfunctor.
//!
//! Pointwise checks run over a finite [`Window`]; [`support_region`] gives
//! the same information symbolically, as region sets per channel.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma::{Family, Gamma, MorphismKey, VertexId};
use crate::region::{Coord, Region, RegionSet};

/// A finite coordinate box; all families and orbits are included.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Region", into = "Region")]
pub struct Window {
    coord_box: Region,
}

impl TryFrom<Region> for Window {
    type Error = Error;

    fn try_from(r: Region) -> Result<Self> {
        Window::new(r)
    }
}

impl From<Window> for Region {
    fn from(w: Window) -> Region {
        w.coord_box
    }
}

impl Window {
    pub fn new(coord_box: Region) -> Result<Self> {
        if coord_box.is_finite() {
            Ok(Window { coord_box })
        } else {
            Err(Error::InfiniteWindow)
        }
    }

    /// `[x_lo, x_hi] × [y_lo, y_hi]`; empty when a range is reversed.
    pub fn rect(x_lo: i64, x_hi: i64, y_lo: i64, y_hi: i64) -> Self {
        Window { coord_box: Region::rect(x_lo, x_hi, y_lo, y_hi) }
    }

    /// `[lo, hi]²`.
    pub fn square(lo: i64, hi: i64) -> Self {
        Window::rect(lo, hi, lo, hi)
    }

    pub fn region(&self) -> &Region {
        &self.coord_box
    }

    pub fn contains(&self, p: Coord) -> bool {
        self.coord_box.member(p)
    }

    pub fn contains_vertex(&self, v: &VertexId) -> bool {
        self.contains(v.coord)
    }

    /// The centred box of half the side length, e.g. `[-4,4]²` in `[-8,8]²`.
    pub fn inner_half(&self) -> Window {
        let Some(c) = self.coord_box.close() else {
            return *self;
        };
        let shrink = |lo: Option<i64>, hi: Option<i64>| {
            let (lo, hi) = (lo.unwrap_or(0), hi.unwrap_or(0));
            let mid = lo + (hi - lo) / 2;
            let half = (hi - lo) / 4;
            (mid - half, mid + half)
        };
        let (x_lo, x_hi) = shrink(c.x.lo, c.x.hi);
        let (y_lo, y_hi) = shrink(c.y.lo, c.y.hi);
        Window::rect(x_lo, x_hi, y_lo, y_hi)
    }

    pub fn vertices(&self, g: &Gamma) -> Vec<VertexId> {
        g.vertices_in(&self.coord_box).expect("windows are finite")
    }

    pub fn points(&self, r: &Region) -> Vec<Coord> {
        r.enumerate(&self.coord_box).expect("windows are finite")
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.coord_box.fmt(f)
    }
}

/// Every basis morphism out of `u` whose target lies in `window`, the
/// identity included. Each element appears once.
pub fn basis_out(g: &Gamma, u: &VertexId, window: &Window) -> Vec<MorphismKey> {
    let mut out = Vec::new();
    if !g.vertex_valid(u) {
        return out;
    }
    if window.contains_vertex(u) {
        out.push(MorphismKey::Identity(*u));
    }
    for e in g.fan_entries(u) {
        for coord in window.points(&e.region) {
            let v = VertexId { family: e.family, orbit: e.orbit, coord };
            if !(e.excludes_src && v == *u) {
                out.push(MorphismKey::arrow(*u, v, e.degree));
            }
        }
    }
    out
}

/// The subfunctor of `H_top` generated by basis morphisms out of `top`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subfunctor {
    pub top: VertexId,
    pub generators: Vec<MorphismKey>,
}

impl Subfunctor {
    pub fn new(top: VertexId, generators: Vec<MorphismKey>) -> Result<Self> {
        for f in &generators {
            if let Some(src) = f.source() {
                if src != top {
                    return Err(Error::ForeignGenerator { generator: *f, top });
                }
            }
        }
        Ok(Subfunctor { top, generators })
    }

    pub fn zero(top: VertexId) -> Self {
        Subfunctor { top, generators: Vec::new() }
    }

    /// The improper subfunctor `H_top` itself.
    pub fn full(top: VertexId) -> Self {
        Subfunctor { top, generators: vec![MorphismKey::Identity(top)] }
    }

    /// Generator-list concatenation.
    pub fn sum(&self, other: &Subfunctor) -> Result<Subfunctor> {
        if self.top != other.top {
            return Err(Error::IncompatibleTops(self.top, other.top));
        }
        let mut generators = self.generators.clone();
        generators.extend(other.generators.iter().copied());
        Ok(Subfunctor { top: self.top, generators })
    }

    pub fn with(&self, extra: &[MorphismKey]) -> Subfunctor {
        let mut generators = self.generators.clone();
        generators.extend_from_slice(extra);
        Subfunctor { top: self.top, generators }
    }

    /// Whether the basis morphism `h` (out of `top`) lies in the subfunctor.
    pub fn contains(&self, g: &Gamma, h: &MorphismKey) -> bool {
        contains(g, &self.generators, h)
    }
}

/// Whether the basis morphism `h` factors as `x ∘ f` for some generator `f`.
/// With monomial composition the factorization is unique when it exists,
/// so this is a few arrow lookups.
pub(crate) fn contains(g: &Gamma, generators: &[MorphismKey], h: &MorphismKey) -> bool {
    let (Some(v), Some(p)) = (h.target(), h.degree()) else {
        return false;
    };
    let is_identity = matches!(h, MorphismKey::Identity(_));
    generators.iter().any(|f| match f {
        MorphismKey::Zero => false,
        MorphismKey::Identity(_) => true,
        MorphismKey::Arrow(a) => {
            !is_identity
                && a.degree <= p
                && ((a.dst == v && a.degree == p) || g.arrow_exists(&a.dst, &v, p - a.degree))
        }
    })
}

/// `H_top / denominators`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FpFunctorJson", into = "FpFunctorJson")]
pub struct FpFunctor {
    pub top: VertexId,
    pub denominators: Subfunctor,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FpFunctorJson {
    top: VertexId,
    generators: Vec<MorphismKey>,
}

impl TryFrom<FpFunctorJson> for FpFunctor {
    type Error = Error;

    fn try_from(raw: FpFunctorJson) -> Result<Self> {
        FpFunctor::new(raw.top, raw.generators)
    }
}

impl From<FpFunctor> for FpFunctorJson {
    fn from(f: FpFunctor) -> Self {
        FpFunctorJson { top: f.top, generators: f.denominators.generators }
    }
}

impl FpFunctor {
    pub fn new(top: VertexId, generators: Vec<MorphismKey>) -> Result<Self> {
        Ok(FpFunctor { top, denominators: Subfunctor::new(top, generators)? })
    }

    pub fn representable(top: VertexId) -> Self {
        FpFunctor { top, denominators: Subfunctor::zero(top) }
    }

    pub fn generators(&self) -> &[MorphismKey] {
        &self.denominators.generators
    }

    /// Checks every generator against the model, not only its source.
    pub fn validate(&self, g: &Gamma) -> Result<()> {
        g.check_vertex(&self.top)?;
        for f in self.generators() {
            if let MorphismKey::Arrow(a) = f {
                if !g.arrow_exists(&a.src, &a.dst, a.degree) {
                    return Err(Error::NoSuchArrow { src: a.src, dst: a.dst, degree: a.degree });
                }
            }
        }
        Ok(())
    }
}

/// The basis morphisms `top -> v` lying in `s`.
pub fn eval_sub(g: &Gamma, s: &Subfunctor, v: &VertexId) -> Vec<MorphismKey> {
    g.hom_iter(&s.top, v).filter(|h| s.contains(g, h)).collect()
}

/// `dim F(v)`.
pub fn eval_fp(g: &Gamma, f: &FpFunctor, v: &VertexId) -> usize {
    g.hom_iter(&f.top, v).filter(|h| !f.denominators.contains(g, h)).count()
}

/// A support channel: basis arrows of one degree into one family and orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Channel {
    pub family: Family,
    pub orbit: u32,
    pub degree: u8,
}

/// A symbolic vertex set, one region set per channel.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Support {
    pub channels: BTreeMap<Channel, RegionSet>,
}

impl Support {
    pub fn member(&self, v: &VertexId) -> bool {
        self.channels
            .iter()
            .any(|(c, set)| c.family == v.family && c.orbit == v.orbit && set.member(v.coord))
    }

    pub fn is_finite(&self) -> bool {
        self.channels.values().all(RegionSet::is_finite)
    }

    pub fn is_empty(&self) -> bool {
        self.channels.values().all(RegionSet::is_empty)
    }

    pub fn channel(&self, family: Family, orbit: u32, degree: u8) -> Option<&RegionSet> {
        self.channels.get(&Channel { family, orbit, degree })
    }

    fn insert(&mut self, channel: Channel, set: RegionSet) {
        if !set.is_empty() {
            self.channels.insert(channel, set);
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ChannelJson {
    family: Family,
    orbit: u32,
    degree: u8,
    regions: RegionSet,
}

impl Serialize for Support {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.channels.iter().map(|(c, set)| ChannelJson {
            family: c.family,
            orbit: c.orbit,
            degree: c.degree,
            regions: set.clone(),
        }))
    }
}

impl<'de> Deserialize<'de> for Support {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<ChannelJson>::deserialize(d)?;
        let mut out = Support::default();
        for c in raw {
            out.channels.insert(
                Channel { family: c.family, orbit: c.orbit, degree: c.degree },
                c.regions,
            );
        }
        Ok(out)
    }
}

fn top_channels(g: &Gamma, top: &VertexId) -> BTreeMap<Channel, Region> {
    g.fan_entries(top)
        .into_iter()
        .map(|e| (Channel { family: e.family, orbit: e.orbit, degree: e.degree }, e.region))
        .collect()
}

/// The symbolic image of a generator list: for each channel of `top`, the
/// targets reached by composites `x ∘ f`.
fn coverage(g: &Gamma, top: &VertexId, generators: &[MorphismKey]) -> BTreeMap<Channel, RegionSet> {
    let channels = top_channels(g, top);
    let mut out: BTreeMap<Channel, RegionSet> = BTreeMap::new();
    for f in generators {
        let (Some(w), Some(q)) = (f.target(), f.degree()) else {
            continue;
        };
        if !g.vertex_valid(&w) {
            continue;
        }
        // The degree-0 fan entry of `w` contains `w` itself, which accounts
        // for the identity of `w` as the outer factor.
        for e in g.fan_entries(&w) {
            let channel = Channel { family: e.family, orbit: e.orbit, degree: e.degree + q };
            if let Some(own) = channels.get(&channel) {
                if let Some(hit) = own.intersect(&e.region) {
                    out.entry(channel).or_default().push(hit);
                }
            }
        }
    }
    out
}

/// `{v : F(v) ≠ 0}`, per channel.
pub fn support_region(g: &Gamma, f: &FpFunctor) -> Support {
    let covered = coverage(g, &f.top, f.generators());
    let mut out = Support::default();
    if !g.vertex_valid(&f.top) {
        return out;
    }
    for (channel, region) in top_channels(g, &f.top) {
        let set = RegionSet::from(region);
        let left = match covered.get(&channel) {
            Some(cut) => set.subtract_all(cut),
            None => set,
        };
        out.insert(channel, left);
    }
    out
}

/// Membership in the Serre subcategory of finite length functors.
pub fn is_in_c0(g: &Gamma, f: &FpFunctor) -> bool {
    support_region(g, f).is_finite()
}

/// Support of `big / small` for subfunctors `small ⊆ big` of one `H_top`.
/// Containment is decided exactly: each generator of `small` must lie in
/// `big` at its own target.
pub fn quotient_support(g: &Gamma, big: &Subfunctor, small: &Subfunctor) -> Result<Support> {
    if big.top != small.top {
        return Err(Error::IncompatibleTops(big.top, small.top));
    }
    for s in &small.generators {
        if !s.is_zero() && !big.contains(g, s) {
            return Err(Error::NotASubfunctor(*s));
        }
    }
    let upper = coverage(g, &big.top, &big.generators);
    let lower = coverage(g, &small.top, &small.generators);
    let mut out = Support::default();
    for (channel, set) in upper {
        let left = match lower.get(&channel) {
            Some(cut) => set.subtract_all(cut),
            None => set,
        };
        out.insert(channel, left);
    }
    Ok(out)
}

/// One layer of a filtration of `H_T / D`: the quotient
/// `(Im upper + D) / (Im lower + D)`, claimed isomorphic to `quotient`
/// through precomposition with `upper`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Layer {
    pub frame: Subfunctor,
    pub upper: MorphismKey,
    pub lower: Vec<MorphismKey>,
    pub quotient: FpFunctor,
}

impl Layer {
    /// The first window vertex where the claimed isomorphism fails, if any.
    ///
    /// At each `V`, `h: W -> V` (with `W` the target of `upper`) must lie in
    /// the quotient's denominator exactly when `h ∘ upper` lies in
    /// `Im lower + D` or vanishes.
    pub fn mismatch(&self, g: &Gamma, window: &Window) -> Result<Option<VertexId>> {
        let Some(w) = self.upper.target() else {
            return Err(Error::ParameterRange("the upper map of a layer must be nonzero".into()));
        };
        if self.upper.source() != Some(self.frame.top) {
            return Err(Error::IncompatibleTops(self.frame.top, self.upper.source().unwrap_or(w)));
        }
        if self.quotient.top != w {
            return Err(Error::IncompatibleTops(w, self.quotient.top));
        }
        let mut killed = self.frame.generators.clone();
        killed.extend_from_slice(&self.lower);
        for h in basis_out(g, &w, window) {
            let composite = g.compose(&h, &self.upper)?;
            let in_kernel = composite.is_zero() || contains(g, &killed, &composite);
            if in_kernel != self.quotient.denominators.contains(g, &h) {
                return Ok(h.target());
            }
        }
        Ok(None)
    }

    pub fn holds(&self, g: &Gamma, window: &Window) -> Result<bool> {
        Ok(self.mismatch(g, window)?.is_none())
    }
}

/// Whether `Im H_f ≅ q` on `window`, i.e. the kernel of `- ∘ f` out of
/// `q.top` is exactly the denominator of `q`.
pub fn image_presentation_check(g: &Gamma, f: &MorphismKey, q: &FpFunctor, window: &Window) -> Result<bool> {
    let Some(src) = f.source() else {
        return Err(Error::ParameterRange("image presentation of the zero morphism".into()));
    };
    Layer { frame: Subfunctor::zero(src), upper: *f, lower: Vec::new(), quotient: q.clone() }
        .holds(g, window)
}

/// Pointwise exactness of `0 -> sub -> H_top/mid -> quot -> 0` on `window`,
/// where `sub` maps to the middle term through its image. At each vertex
/// the dimensions must add up and the image of `sub` must die in `quot`.
pub fn ses_check(g: &Gamma, sub: &Subfunctor, mid: &Subfunctor, quot: &FpFunctor, window: &Window) -> Result<bool> {
    if sub.top != mid.top {
        return Err(Error::IncompatibleTops(sub.top, mid.top));
    }
    if quot.top != mid.top {
        return Err(Error::IncompatibleTops(mid.top, quot.top));
    }
    let both = sub.sum(mid)?;
    let mut by_target: BTreeMap<VertexId, [usize; 4]> = BTreeMap::new();
    for h in basis_out(g, &mid.top, window) {
        let v = h.target().expect("basis morphisms are nonzero");
        let in_mid = mid.contains(g, &h);
        let in_both = both.contains(g, &h);
        let in_quot = quot.denominators.contains(g, &h);
        if in_both && !in_quot {
            return Ok(false);
        }
        let dims = by_target.entry(v).or_default();
        dims[0] += usize::from(!in_mid);
        dims[1] += usize::from(in_both && !in_mid);
        dims[2] += usize::from(!in_quot);
    }
    Ok(by_target.values().all(|d| d[0] == d[1] + d[2]))
}
