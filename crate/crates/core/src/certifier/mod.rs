//! Distinguished functors, window-checked proof replays, and certificates.

mod certificate;
mod objects;
mod replay;

pub use certificate::{
    certify, check_infinite_mode, default_window, Certificate, CheckRecord, LayerRecord, Lemma, Outcome,
    Params, DEFAULT_DEPTH,
};
pub use objects::{build_simple0, build_simple1, Simple1, Simple1Kind};
pub use replay::{
    check_c2_simple, check_finite1, check_nonsimple1, check_simple0, check_simple1_tower, Perturbation, Replay,
    Verdict,
};
