//! Exact Hom calculus, finitely presented functors and Krull–Gabriel
//! certificates for the derived-discrete algebras `Λ(r, n, m)`.

pub mod algebra;
pub mod certifier;
pub mod error;
pub mod functor;
pub mod gamma;
pub mod region;

pub use algebra::{build_bound_quiver, BoundQuiver, GentleTriple, Mode};
pub use error::{Error, Result};
pub use functor::{
    eval_fp, eval_sub, image_presentation_check, is_in_c0, quotient_support, ses_check,
    support_region, Channel, FpFunctor, Layer, Subfunctor, Support, Window,
};
pub use gamma::{Arrow, ArrowFan, Family, FanEntry, Gamma, MorphismKey, VertexId};
pub use region::{Bound, Coord, Interval, Region, RegionSet};
pub use certifier::{certify, Certificate, Simple1, Simple1Kind};
