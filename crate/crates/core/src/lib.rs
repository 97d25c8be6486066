//! Exact certificates of non-distillability for tripartite secret
//! correlations.
//!
//! Given a distribution `G_ABE` and a finite family of local map pairs, the
//! [`certifier`] assembles the activation linear program over bounded-alphabet
//! distributions `Q_ABK`, solves it over the rationals and emits a
//! certificate. An optimum of zero shows that `G_ABE` cannot raise the
//! extractable secret bit fraction of any distribution above one half, and
//! in particular has no distillable key.

pub mod certifier;
pub mod families;
pub mod lifting;
pub mod measures;
pub mod probvec;
pub mod rational;
pub mod ratlp;


pub use certifier::{certify, verify_certificate, Certificate, CertifyOptions, Verdict};
pub use families::{MapFamily, MapPair};
pub use probvec::{Axis, JointDist, LocalMap};
pub use rational::Rational;
