//! The distinguished quotient functors: the simple objects `A_v` and the
//! objects `B′, B″, C′, C″` (and `B` in the infinite model) that are simple
//! modulo finite length functors.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::Mode;
use crate::error::{Error, Result};
use crate::functor::FpFunctor;
use crate::gamma::{Family, Gamma, MorphismKey, VertexId};
use crate::region::Coord;

/// `H_v` modulo the two sink maps of the Auslander–Reiten triangle at `v`.
pub fn build_simple0(g: &Gamma, v: &VertexId) -> Result<FpFunctor> {
    FpFunctor::new(*v, g.ar_sink_maps(v)?.to_vec())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Simple1Kind {
    #[serde(rename = "B'")]
    BPrime,
    #[serde(rename = "B''")]
    BDouble,
    #[serde(rename = "C'")]
    CPrime,
    #[serde(rename = "C''")]
    CDouble,
    /// The infinite global dimension analogue of `B′`.
    #[serde(rename = "B")]
    B,
}

impl Simple1Kind {
    pub const FINITE: [Simple1Kind; 4] =
        [Simple1Kind::BPrime, Simple1Kind::BDouble, Simple1Kind::CPrime, Simple1Kind::CDouble];

    pub fn name(&self) -> &'static str {
        match self {
            Simple1Kind::BPrime => "B'",
            Simple1Kind::BDouble => "B''",
            Simple1Kind::CPrime => "C'",
            Simple1Kind::CDouble => "C''",
            Simple1Kind::B => "B",
        }
    }

    pub fn top_family(&self) -> Family {
        match self {
            Simple1Kind::BPrime | Simple1Kind::B => Family::X,
            Simple1Kind::BDouble => Family::Y,
            Simple1Kind::CPrime | Simple1Kind::CDouble => Family::Z,
        }
    }

    fn mode(&self) -> Mode {
        match self {
            Simple1Kind::B => Mode::InfiniteGldim,
            _ => Mode::FiniteGldim,
        }
    }

    /// Direction of the tower `0 -> K(top + e) -> K(top) -> A(top) -> 0`.
    pub fn tower_step(&self) -> (i64, i64) {
        match self {
            Simple1Kind::CDouble => (1, 0),
            _ => (0, 1),
        }
    }

    /// The sink map that is a generator; the other sink map spans the tower.
    fn sink_step(&self) -> (i64, i64) {
        match self {
            Simple1Kind::CDouble => (0, 1),
            _ => (1, 0),
        }
    }

    /// For arrows out of the top that neither lie in the denominator nor
    /// run along the tower: the step that walks them into the denominator.
    pub(crate) fn walk_step(&self, family: Family, degree: u8) -> Option<(i64, i64)> {
        match (self, family, degree) {
            (Simple1Kind::BPrime, Family::Z, 1) => Some((0, 1)),
            (Simple1Kind::BDouble, Family::Z, 1) => Some((1, 0)),
            (Simple1Kind::CPrime, Family::X, 1) => Some((1, 0)),
            (Simple1Kind::CDouble, Family::Y, 1) => Some((1, 0)),
            (Simple1Kind::B, Family::X, 1) => Some((1, 0)),
            _ => None,
        }
    }
}

impl fmt::Display for Simple1Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters of one object simple modulo finite length functors: the kind,
/// the top vertex's orbit and coordinate, and the auxiliary bound (`b′` or
/// `a′`) locating the second generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simple1 {
    pub kind: Simple1Kind,
    pub orbit: u32,
    pub coord: Coord,
    pub aux: i64,
}

impl Simple1 {
    pub fn new(kind: Simple1Kind, orbit: u32, a: i64, b: i64, aux: i64) -> Self {
        Simple1 { kind, orbit, coord: Coord::new(a, b), aux }
    }

    pub fn top(&self) -> VertexId {
        VertexId { family: self.kind.top_family(), orbit: self.orbit, coord: self.coord }
    }

    /// The largest admissible auxiliary value, if the kind has one.
    pub fn aux_bound(&self, g: &Gamma) -> Option<i64> {
        let last = i64::from(self.orbit + 1 == g.orbit_count());
        let (m, n) = (i64::from(g.triple().m()), i64::from(g.triple().n()));
        let Coord { a, b } = self.coord;
        match self.kind {
            Simple1Kind::BPrime | Simple1Kind::BDouble => None,
            Simple1Kind::CPrime => Some(a + last * m + 1),
            Simple1Kind::CDouble => Some(b - last * n + 1),
            Simple1Kind::B => Some(a + last * m),
        }
    }

    /// The same kind and auxiliary value, `k` steps further along the tower.
    pub fn along_tower(&self, k: i64) -> Simple1 {
        let (da, db) = self.kind.tower_step();
        Simple1 { coord: Coord::new(self.coord.a + k * da, self.coord.b + k * db), ..*self }
    }

    /// The second generator's target.
    fn aux_target(&self, g: &Gamma) -> VertexId {
        let next = g.next_orbit(self.orbit);
        let Coord { a, b } = self.coord;
        match self.kind {
            Simple1Kind::BPrime => VertexId::z(self.orbit, a, self.aux),
            Simple1Kind::BDouble => VertexId::z(self.orbit, self.aux, a),
            Simple1Kind::CPrime | Simple1Kind::B => VertexId::x(next, self.aux, a),
            Simple1Kind::CDouble => VertexId::y(next, self.aux, b),
        }
    }

    pub fn generators(&self, g: &Gamma) -> Result<[MorphismKey; 2]> {
        let expected = self.kind.mode();
        if g.mode() != expected {
            return Err(Error::ModeMismatch { expected: expected.as_str() });
        }
        let top = self.top();
        g.check_vertex(&top)?;
        if let Some(bound) = self.aux_bound(g) {
            if self.aux > bound {
                return Err(Error::ParameterRange(format!(
                    "{} at {top}: auxiliary value {} exceeds {bound}",
                    self.kind, self.aux
                )));
            }
        }
        let (da, db) = self.kind.sink_step();
        let sink = g.morphism_or_zero(&top, &top.shifted(da, db), 0)?;
        let second = g.morphism_or_zero(&top, &self.aux_target(g), 1)?;
        Ok([sink, second])
    }

    pub fn build(&self, g: &Gamma) -> Result<FpFunctor> {
        FpFunctor::new(self.top(), self.generators(g)?.to_vec())
    }
}

impl fmt::Display for Simple1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}_{{{},{},{}}}", self.kind, self.orbit, self.coord.a, self.coord.b, self.aux)
    }
}

pub fn build_simple1(
    g: &Gamma,
    kind: Simple1Kind,
    orbit: u32,
    coord: Coord,
    aux: i64,
) -> Result<FpFunctor> {
    Simple1 { kind, orbit, coord, aux }.build(g)
}
