//! Integer regions of ℤ² cut out by bounds on `x`, `y` and `x - y`.
//!
//! A [`Region`] is a conjunction of six optional bounds. Emptiness and
//! finiteness are decided exactly by shortest-path closure over the
//! constraint graph on the three nodes `{0, x, y}`. Difference constraints
//! with integer constants have integral closures, so the tightened bounds
//! are exact for ℤ², not only for ℝ².
//!
//! All closure arithmetic is carried out in `i128`; coordinates are `i64`,
//! so sums of at most two bounds can never overflow.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A lattice point `(a, b)`; regions read `a` as `x` and `b` as `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coord {
    pub a: i64,
    pub b: i64,
}

impl Coord {
    pub const fn new(a: i64, b: i64) -> Self {
        Coord { a, b }
    }

    pub fn shift(self, da: i64, db: i64) -> Option<Coord> {
        Some(Coord { a: self.a.checked_add(da)?, b: self.b.checked_add(db)? })
    }
}

impl From<(i64, i64)> for Coord {
    fn from((a, b): (i64, i64)) -> Self {
        Coord { a, b }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// An extended integer bound. `NegInf` is only meaningful as a lower bound
/// and `PosInf` only as an upper bound; [`Interval::new`] enforces that.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bound {
    NegInf,
    Finite(i64),
    PosInf,
}

/// A closed integer interval with optional ends; `None` is the infinite end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Interval {
    pub lo: Option<i64>,
    pub hi: Option<i64>,
}

impl Interval {
    pub const FULL: Interval = Interval { lo: None, hi: None };

    pub fn new(lo: Bound, hi: Bound) -> Result<Self> {
        let lo = match lo {
            Bound::NegInf => None,
            Bound::Finite(v) => Some(v),
            Bound::PosInf => return Err(Error::Parse("+inf used as a lower bound".into())),
        };
        let hi = match hi {
            Bound::PosInf => None,
            Bound::Finite(v) => Some(v),
            Bound::NegInf => return Err(Error::Parse("-inf used as an upper bound".into())),
        };
        Ok(Interval { lo, hi })
    }

    pub const fn closed(lo: i64, hi: i64) -> Self {
        Interval { lo: Some(lo), hi: Some(hi) }
    }

    pub const fn at_least(lo: i64) -> Self {
        Interval { lo: Some(lo), hi: None }
    }

    pub const fn at_most(hi: i64) -> Self {
        Interval { lo: None, hi: Some(hi) }
    }

    pub fn contains(&self, v: i64) -> bool {
        self.lo.is_none_or(|lo| lo <= v) && self.hi.is_none_or(|hi| v <= hi)
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_some() && self.hi.is_some()
    }

    fn meet(self, other: Interval) -> Interval {
        let lo = match (self.lo, other.lo) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        let hi = match (self.hi, other.hi) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        Interval { lo, hi }
    }

    pub fn lower(&self) -> Bound {
        self.lo.map_or(Bound::NegInf, Bound::Finite)
    }

    pub fn upper(&self) -> Bound {
        self.hi.map_or(Bound::PosInf, Bound::Finite)
    }
}

/// `{(x, y) : x ∈ x_range, y ∈ y_range, x - y ∈ diff}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Region {
    pub x: Interval,
    pub y: Interval,
    pub diff: Interval,
}

// DBM node indices: v_0 = 0, v_1 = x, v_2 = y. Entry w[i][j] bounds v_j - v_i.
const ZERO: usize = 0;
const X: usize = 1;
const Y: usize = 2;
type Dbm = [[Option<i128>; 3]; 3];

fn add(a: Option<i128>, b: Option<i128>) -> Option<i128> {
    Some(a? + b?)
}

fn min(a: Option<i128>, b: Option<i128>) -> Option<i128> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    }
}

#[derive(Clone, Copy)]
enum Axis {
    X,
    Y,
    Diff,
}

impl Region {
    /// The whole plane.
    pub const FULL: Region =
        Region { x: Interval::FULL, y: Interval::FULL, diff: Interval::FULL };

    pub const fn boxed(x: Interval, y: Interval) -> Self {
        Region { x, y, diff: Interval::FULL }
    }

    /// `[x_lo, x_hi] × [y_lo, y_hi]`.
    pub const fn rect(x_lo: i64, x_hi: i64, y_lo: i64, y_hi: i64) -> Self {
        Region::boxed(Interval::closed(x_lo, x_hi), Interval::closed(y_lo, y_hi))
    }

    pub const fn point(p: Coord) -> Self {
        Region::rect(p.a, p.a, p.b, p.b)
    }

    pub const fn with_diff(mut self, diff: Interval) -> Self {
        self.diff = diff;
        self
    }

    pub fn member(&self, p: Coord) -> bool {
        self.x.contains(p.a)
            && self.y.contains(p.b)
            && p.a.checked_sub(p.b).map_or_else(
                // The difference only leaves i64 when it is astronomically
                // large; compare in i128 instead.
                || {
                    let d = i128::from(p.a) - i128::from(p.b);
                    self.diff.lo.is_none_or(|lo| i128::from(lo) <= d)
                        && self.diff.hi.is_none_or(|hi| d <= i128::from(hi))
                },
                |d| self.diff.contains(d),
            )
    }

    fn axis(&self, axis: Axis) -> &Interval {
        match axis {
            Axis::X => &self.x,
            Axis::Y => &self.y,
            Axis::Diff => &self.diff,
        }
    }

    fn axis_mut(&mut self, axis: Axis) -> &mut Interval {
        match axis {
            Axis::X => &mut self.x,
            Axis::Y => &mut self.y,
            Axis::Diff => &mut self.diff,
        }
    }

    fn to_dbm(self) -> Dbm {
        let mut w: Dbm = [[None; 3]; 3];
        for (i, row) in w.iter_mut().enumerate() {
            row[i] = Some(0);
        }
        let up = |v: Option<i64>| v.map(i128::from);
        let down = |v: Option<i64>| v.map(|v| -i128::from(v));
        w[ZERO][X] = up(self.x.hi);
        w[X][ZERO] = down(self.x.lo);
        w[ZERO][Y] = up(self.y.hi);
        w[Y][ZERO] = down(self.y.lo);
        // x - y <= hi  is  v_x - v_y <= hi, an edge y -> x.
        w[Y][X] = up(self.diff.hi);
        w[X][Y] = down(self.diff.lo);
        w
    }

    fn from_dbm(w: &Dbm) -> Option<Region> {
        // Upper bounds below i64::MIN (lower bounds above i64::MAX) leave no
        // i64 point. Bounds outside i64 on the loose side constrain nothing
        // representable and are dropped.
        fn hi(v: Option<i128>) -> Option<Option<i64>> {
            match v {
                Some(v) if v < i128::from(i64::MIN) => None,
                Some(v) => Some(i64::try_from(v).ok()),
                None => Some(None),
            }
        }
        fn lo(v: Option<i128>) -> Option<Option<i64>> {
            match v.map(|v| -v) {
                Some(v) if v > i128::from(i64::MAX) => None,
                Some(v) => Some(i64::try_from(v).ok()),
                None => Some(None),
            }
        }
        // x - y of two i64 values can leave i64; a derived diff bound past
        // i64 on its tight side is implied by the x/y bounds, so clamping it
        // keeps the denotation.
        fn clamp(v: Option<i128>) -> Option<i64> {
            v.map(|v| v.clamp(i128::from(i64::MIN), i128::from(i64::MAX)) as i64)
        }
        let diff_hi = w[Y][X].filter(|&v| v <= i128::from(i64::MAX));
        let diff_lo = w[X][Y].map(|v| -v).filter(|&v| v >= i128::from(i64::MIN));
        Some(Region {
            x: Interval { lo: lo(w[X][ZERO])?, hi: hi(w[ZERO][X])? },
            y: Interval { lo: lo(w[Y][ZERO])?, hi: hi(w[ZERO][Y])? },
            diff: Interval { lo: clamp(diff_lo), hi: clamp(diff_hi) },
        })
    }

    /// Tightest equivalent bounds, or `None` when the region is empty.
    pub fn close(&self) -> Option<Region> {
        let mut w = self.to_dbm();
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    w[i][j] = min(w[i][j], add(w[i][k], w[k][j]));
                }
            }
        }
        if (0..3).any(|i| w[i][i].is_some_and(|v| v < 0)) {
            return None;
        }
        Region::from_dbm(&w)
    }

    pub fn is_empty(&self) -> bool {
        self.close().is_none()
    }

    /// True iff the region has finitely many points. Empty regions are finite.
    pub fn is_finite(&self) -> bool {
        match self.close() {
            None => true,
            Some(c) => c.x.is_bounded() && c.y.is_bounded(),
        }
    }

    /// Number of points, if finite.
    pub fn cardinality(&self) -> Option<u128> {
        let c = match self.close() {
            None => return Some(0),
            Some(c) if c.x.is_bounded() && c.y.is_bounded() => c,
            Some(_) => return None,
        };
        let (x_lo, x_hi) = (c.x.lo?, c.x.hi?);
        let mut total = 0u128;
        for x in x_lo..=x_hi {
            // y ∈ [y_lo, y_hi] ∩ [x - d_hi, x - d_lo]
            let mut lo = i128::from(c.y.lo?);
            let mut hi = i128::from(c.y.hi?);
            if let Some(dh) = c.diff.hi {
                lo = lo.max(i128::from(x) - i128::from(dh));
            }
            if let Some(dl) = c.diff.lo {
                hi = hi.min(i128::from(x) - i128::from(dl));
            }
            if hi >= lo {
                total += (hi - lo + 1) as u128;
            }
        }
        Some(total)
    }

    fn meet(&self, other: &Region) -> Region {
        Region {
            x: self.x.meet(other.x),
            y: self.y.meet(other.y),
            diff: self.diff.meet(other.diff),
        }
    }

    pub fn intersect(&self, other: &Region) -> Option<Region> {
        self.meet(other).close()
    }

    /// `self \ other` as pairwise disjoint pieces (at most six).
    pub fn subtract(&self, other: &Region) -> RegionSet {
        let Some(a) = self.close() else {
            return RegionSet::empty();
        };
        let Some(b) = other.close() else {
            return RegionSet::from(a);
        };
        // Piece k keeps constraints 0..k of b and negates constraint k.
        let mut kept = a;
        let mut pieces = Vec::new();
        for axis in [Axis::X, Axis::Y, Axis::Diff] {
            let source = *b.axis(axis);
            for upper in [false, true] {
                let Some(bound) = (if upper { source.hi } else { source.lo }) else {
                    continue;
                };
                let negated = if upper {
                    bound.checked_add(1).map(Interval::at_least)
                } else {
                    bound.checked_sub(1).map(Interval::at_most)
                };
                if let Some(neg) = negated {
                    let mut piece = kept;
                    let slot = piece.axis_mut(axis);
                    *slot = slot.meet(neg);
                    if let Some(piece) = piece.close() {
                        pieces.push(piece);
                    }
                }
                let keep = if upper { Interval::at_most(bound) } else { Interval::at_least(bound) };
                let slot = kept.axis_mut(axis);
                *slot = slot.meet(keep);
                if kept.close().is_none() {
                    return RegionSet { regions: pieces };
                }
            }
        }
        RegionSet { regions: pieces }
    }

    /// All points of `self ∩ window`, sorted lexicographically.
    pub fn enumerate(&self, window: &Region) -> Result<Vec<Coord>> {
        if !window.is_finite() {
            return Err(Error::InfiniteWindow);
        }
        let Some(c) = self.intersect(window) else {
            return Ok(Vec::new());
        };
        let mut out = Vec::new();
        let (Some(x_lo), Some(x_hi), Some(y_lo), Some(y_hi)) = (c.x.lo, c.x.hi, c.y.lo, c.y.hi)
        else {
            unreachable!("closure of a finite region is bounded");
        };
        for a in x_lo..=x_hi {
            for b in y_lo..=y_hi {
                let p = Coord { a, b };
                if c.member(p) {
                    out.push(p);
                }
            }
        }
        Ok(out)
    }
}

/// A finite union of regions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RegionSet {
    pub regions: Vec<Region>,
}

impl From<Region> for RegionSet {
    fn from(r: Region) -> Self {
        RegionSet { regions: vec![r] }
    }
}

impl RegionSet {
    pub fn empty() -> Self {
        RegionSet { regions: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.regions.iter().all(Region::is_empty)
    }

    pub fn member(&self, p: Coord) -> bool {
        self.regions.iter().any(|r| r.member(p))
    }

    pub fn is_finite(&self) -> bool {
        self.regions.iter().all(Region::is_finite)
    }

    pub fn push(&mut self, r: Region) {
        if let Some(r) = r.close() {
            self.regions.push(r);
        }
    }

    /// Removes `cut` from every piece; disjoint pieces stay disjoint.
    pub fn subtract(&self, cut: &Region) -> RegionSet {
        RegionSet {
            regions: self.regions.iter().flat_map(|r| r.subtract(cut).regions).collect(),
        }
    }

    pub fn subtract_all(&self, cuts: &RegionSet) -> RegionSet {
        cuts.regions.iter().fold(self.clone(), |acc, cut| acc.subtract(cut))
    }

    /// Sum of piece cardinalities; equals the union's size when the pieces
    /// are disjoint (as produced by [`Region::subtract`]).
    pub fn disjoint_cardinality(&self) -> Option<u128> {
        self.regions.iter().map(Region::cardinality).sum()
    }

    pub fn enumerate(&self, window: &Region) -> Result<Vec<Coord>> {
        let mut out = Vec::new();
        for r in &self.regions {
            out.extend(r.enumerate(window)?);
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

// Textual form: {"x":[lo,hi],"y":[lo,hi],"diff":[lo,hi]} with "-inf"/"inf".

fn bound_json(v: Option<i64>, upper: bool) -> serde_json::Value {
    match v {
        Some(v) => v.into(),
        None if upper => "inf".into(),
        None => "-inf".into(),
    }
}

fn bound_from_json(v: &serde_json::Value) -> Result<Bound> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(Bound::Finite)
            .ok_or_else(|| Error::Parse(format!("bound {n} is not a 64-bit integer"))),
        serde_json::Value::String(s) if s == "inf" || s == "+inf" => Ok(Bound::PosInf),
        serde_json::Value::String(s) if s == "-inf" => Ok(Bound::NegInf),
        other => Err(Error::Parse(format!("bad bound {other}"))),
    }
}

impl Interval {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(vec![bound_json(self.lo, false), bound_json(self.hi, true)])
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        match v.as_array().map(Vec::as_slice) {
            Some([lo, hi]) => Interval::new(bound_from_json(lo)?, bound_from_json(hi)?),
            _ => Err(Error::Parse(format!("expected [lo, hi], got {v}"))),
        }
    }
}

impl Serialize for Region {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(3))?;
        map.serialize_entry("x", &self.x.to_json())?;
        map.serialize_entry("y", &self.y.to_json())?;
        map.serialize_entry("diff", &self.diff.to_json())?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for Region {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let v = serde_json::Value::deserialize(d)?;
        let obj = v.as_object().ok_or_else(|| D::Error::custom("region must be an object"))?;
        let field = |name: &str| -> std::result::Result<Interval, D::Error> {
            match obj.get(name) {
                None => Ok(Interval::FULL),
                Some(v) => Interval::from_json(v).map_err(D::Error::custom),
            }
        };
        if let Some(extra) = obj.keys().find(|k| !["x", "y", "diff"].contains(&k.as_str())) {
            return Err(D::Error::custom(format!("unknown region key {extra:?}")));
        }
        Ok(Region { x: field("x")?, y: field("y")?, diff: field("diff")? })
    }
}

impl Serialize for RegionSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.regions.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RegionSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(RegionSet { regions: Vec::deserialize(d)? })
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |i: &Interval| {
            let lo = i.lo.map_or("-inf".to_string(), |v| v.to_string());
            let hi = i.hi.map_or("inf".to_string(), |v| v.to_string());
            format!("[{lo},{hi}]")
        };
        write!(f, "x∈{} y∈{}", side(&self.x), side(&self.y))?;
        if self.diff != Interval::FULL {
            write!(f, " x-y∈{}", side(&self.diff))?;
        }
        Ok(())
    }
}
