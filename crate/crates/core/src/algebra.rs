//! The parameter space Omega and the bound quiver of Λ(r,n,m).
//!
//! The quiver has vertices `-m..=n-1`. Arrow `α_j` leaves vertex `j`; it
//! ends at `j+1`, except `α_{n-1}` which closes the cycle at `0`. The `r`
//! zero relations are `α_{n-r+1}α_{n-r}, …, α_{n-1}α_{n-2}, α_0α_{n-1}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which combinatorial model of the perfect derived category applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `r < n`: X, Y and Z vertices, degrees 0..=2, orbits mod r.
    #[serde(rename = "finite")]
    FiniteGldim,
    /// `r = n`: X vertices only, degrees 0..=1, orbits mod n.
    #[serde(rename = "infinite")]
    InfiniteGldim,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::FiniteGldim => "finite",
            Mode::InfiniteGldim => "infinite",
        }
    }
}

/// A triple `(r, n, m)` with `1 <= r <= n` and `m >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawTriple", into = "RawTriple")]
pub struct GentleTriple {
    r: u32,
    n: u32,
    m: u32,
}

#[derive(Serialize, Deserialize)]
struct RawTriple {
    r: i64,
    n: i64,
    m: i64,
}

impl TryFrom<RawTriple> for GentleTriple {
    type Error = Error;

    fn try_from(raw: RawTriple) -> Result<Self> {
        validate_triple(raw.r, raw.n, raw.m)
    }
}

impl From<GentleTriple> for RawTriple {
    fn from(t: GentleTriple) -> Self {
        RawTriple { r: t.r.into(), n: t.n.into(), m: t.m.into() }
    }
}

pub fn validate_triple(r: i64, n: i64, m: i64) -> Result<GentleTriple> {
    let violation = Error::OmegaViolation { r, n, m };
    if r < 1 || r > n || m < 0 {
        return Err(violation);
    }
    let narrow = |v: i64| u32::try_from(v).map_err(|_| violation.clone());
    Ok(GentleTriple { r: narrow(r)?, n: narrow(n)?, m: narrow(m)? })
}

impl GentleTriple {
    pub fn new(r: i64, n: i64, m: i64) -> Result<Self> {
        validate_triple(r, n, m)
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn mode(&self) -> Mode {
        if self.r < self.n {
            Mode::FiniteGldim
        } else {
            Mode::InfiniteGldim
        }
    }

    /// Number of orbit indices: `r` in the finite model, `n` in the infinite one.
    pub fn orbit_count(&self) -> u32 {
        match self.mode() {
            Mode::FiniteGldim => self.r,
            Mode::InfiniteGldim => self.n,
        }
    }
}

impl std::fmt::Display for GentleTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.r, self.n, self.m)
    }
}

pub fn has_finite_global_dimension(t: &GentleTriple) -> bool {
    t.r < t.n
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverArrow {
    pub name: String,
    pub source: i64,
    pub target: i64,
}

/// A length-two zero relation `second ∘ first` (written `second first`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroRelation {
    pub first: String,
    pub second: String,
}

impl ZeroRelation {
    /// Relations read right to left, as in `α_1α_0`.
    pub fn path(&self) -> String {
        format!("{}{}", self.second, self.first)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundQuiver {
    pub vertices: Vec<i64>,
    pub arrows: Vec<QuiverArrow>,
    pub relations: Vec<ZeroRelation>,
}

fn alpha(j: i64) -> String {
    format!("α{j}")
}

pub fn build_bound_quiver(t: &GentleTriple) -> BoundQuiver {
    let n = i64::from(t.n);
    let m = i64::from(t.m);
    let r = i64::from(t.r);
    let vertices: Vec<i64> = (-m..n).collect();
    let arrows = vertices
        .iter()
        .map(|&j| QuiverArrow {
            name: alpha(j),
            source: j,
            target: if j == n - 1 { 0 } else { j + 1 },
        })
        .collect();
    // α_{j+1}α_j for j = n-r .. n-2, then α_0α_{n-1}.
    let mut relations: Vec<ZeroRelation> = (n - r..n - 1)
        .map(|j| ZeroRelation { first: alpha(j), second: alpha(j + 1) })
        .collect();
    relations.push(ZeroRelation { first: alpha(n - 1), second: alpha(0) });
    BoundQuiver { vertices, arrows, relations }
}

impl BoundQuiver {
    pub fn arrow(&self, name: &str) -> Option<&QuiverArrow> {
        self.arrows.iter().find(|a| a.name == name)
    }

    /// Every relation is a path: the first arrow ends where the second starts.
    pub fn relations_composable(&self) -> bool {
        self.relations.iter().all(|rel| {
            match (self.arrow(&rel.first), self.arrow(&rel.second)) {
                (Some(a), Some(b)) => a.target == b.source,
                _ => false,
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_membership() {
        assert_eq!(validate_triple(1, 2, 0).unwrap().mode(), Mode::FiniteGldim);
        assert_eq!(validate_triple(1, 1, 0).unwrap().mode(), Mode::InfiniteGldim);
        assert!(matches!(validate_triple(3, 2, 0), Err(Error::OmegaViolation { .. })));
        assert!(validate_triple(0, 2, 0).is_err());
        assert!(validate_triple(1, 2, -1).is_err());
    }

    #[test]
    fn dual_numbers_quiver() {
        let q = build_bound_quiver(&GentleTriple::new(1, 1, 0).unwrap());
        assert_eq!(q.vertices, vec![0]);
        assert_eq!(q.arrows, vec![QuiverArrow { name: "α0".into(), source: 0, target: 0 }]);
        assert_eq!(q.relations.len(), 1);
        assert_eq!(q.relations[0].path(), "α0α0");
    }

    #[test]
    fn auslander_algebra_quiver() {
        let q = build_bound_quiver(&GentleTriple::new(1, 2, 0).unwrap());
        assert_eq!(q.vertices, vec![0, 1]);
        assert_eq!(q.arrow("α0").map(|a| (a.source, a.target)), Some((0, 1)));
        assert_eq!(q.arrow("α1").map(|a| (a.source, a.target)), Some((1, 0)));
        let paths: Vec<_> = q.relations.iter().map(ZeroRelation::path).collect();
        assert_eq!(paths, vec!["α0α1"]);
    }

    #[test]
    fn quiver_231() {
        let q = build_bound_quiver(&GentleTriple::new(2, 3, 1).unwrap());
        assert_eq!(q.vertices, vec![-1, 0, 1, 2]);
        assert_eq!(q.arrows.len(), 4);
        assert_eq!(q.arrow("α-1").map(|a| a.target), Some(0));
        assert_eq!(q.arrow("α2").map(|a| a.target), Some(0));
        let paths: Vec<_> = q.relations.iter().map(ZeroRelation::path).collect();
        assert_eq!(paths, vec!["α2α1", "α0α2"]);
    }

    #[test]
    fn global_dimension_criterion() {
        let t = |r, n, m| GentleTriple::new(r, n, m).unwrap();
        assert!(has_finite_global_dimension(&t(1, 2, 0)));
        assert!(!has_finite_global_dimension(&t(1, 1, 0)));
        assert!(!has_finite_global_dimension(&t(2, 2, 5)));
    }

    #[test]
    fn relation_counts_and_shape() {
        for n in 1..6 {
            for r in 1..=n {
                for m in 0..3 {
                    let t = GentleTriple::new(r, n, m).unwrap();
                    let q = build_bound_quiver(&t);
                    assert_eq!(q.vertices.len() as i64, n + m);
                    assert_eq!(q.arrows.len() as i64, n + m);
                    assert_eq!(q.relations.len() as i64, r);
                    assert!(q.relations_composable(), "{t}");
                    assert_eq!(q, build_bound_quiver(&t));
                }
            }
        }
    }
}
