//! Certificates: serialization, integrity digest and exact rechecking.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::{build_lp, CertificationLp, CertificationProblem, CertifyError, CertifyOptions};
use crate::families::MapFamily;
use crate::probvec::{DistWire, JointDist};
use crate::ratlp::{LpSolution, Sense};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// Optimum `≤ 0`: no activation distribution beats `λ0`.
    Undistillable,
    /// Optimum `> 0`: this family does not certify anything.
    Inconclusive,
}

impl Verdict {
    fn for_optimum(optimum: &Rational) -> Verdict {
        if optimum.is_positive() {
            Verdict::Inconclusive
        } else {
            Verdict::Undistillable
        }
    }

    fn wire(self) -> &'static str {
        match self {
            Verdict::Undistillable => "undistillable",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Undistillable => "UNDISTILLABLE",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub verdict: Verdict,
    pub optimum: Rational,
    pub lambda0: Rational,
    pub fingerprint: String,
    /// Optimal `Q_ABK`.
    pub primal: Option<JointDist>,
    /// One multiplier per LP row, in row order.
    pub dual: Option<Vec<Rational>>,
    /// SHA-256 over the serialized fields above.
    pub digest: String,
}

#[derive(Serialize, Deserialize)]
struct DualWire {
    row_multipliers: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct CertificateWire {
    verdict: String,
    optimum: String,
    lambda0: String,
    fingerprint: String,
    primal: Option<DistWire>,
    dual: Option<DualWire>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    digest: Option<String>,
}

impl Certificate {
    pub(super) fn from_solution(
        problem: &CertificationProblem,
        sol: &LpSolution,
    ) -> Result<Certificate, CertifyError> {
        let mut cert = Certificate {
            verdict: Verdict::for_optimum(&sol.objective_value),
            optimum: sol.objective_value.clone(),
            lambda0: problem.lambda0().clone(),
            fingerprint: problem.fingerprint(),
            primal: Some(problem.vector_to_q(&sol.primal)?),
            dual: Some(sol.dual.clone()),
            digest: String::new(),
        };
        cert.reseal();
        Ok(cert)
    }

    fn wire(&self, with_digest: bool) -> CertificateWire {
        CertificateWire {
            verdict: self.verdict.wire().into(),
            optimum: rational::format(&self.optimum),
            lambda0: rational::format(&self.lambda0),
            fingerprint: self.fingerprint.clone(),
            primal: self.primal.as_ref().map(JointDist::to_wire),
            dual: self.dual.as_ref().map(|y| DualWire {
                row_multipliers: y.iter().map(rational::format).collect(),
            }),
            digest: with_digest.then(|| self.digest.clone()),
        }
    }

    /// Digest of the current contents.
    pub fn compute_digest(&self) -> String {
        let body = serde_json::to_string(&self.wire(false)).expect("certificate serializes");
        hex::encode(Sha256::digest(body.as_bytes()))
    }

    /// Recomputes the digest after the contents were edited.
    pub fn reseal(&mut self) {
        self.digest = self.compute_digest();
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.wire(true)).expect("certificate serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.wire(true)).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Certificate, CertifyError> {
        let bad = |m: String| CertifyError::Invalid(format!("certificate: {m}"));
        let wire: CertificateWire = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
        let verdict = match wire.verdict.as_str() {
            "undistillable" => Verdict::Undistillable,
            "inconclusive" => Verdict::Inconclusive,
            other => return Err(bad(format!("unknown verdict {other:?}"))),
        };
        let num = |s: &str| rational::parse(s).map_err(|e| bad(e.to_string()));
        Ok(Certificate {
            verdict,
            optimum: num(&wire.optimum)?,
            lambda0: num(&wire.lambda0)?,
            fingerprint: wire.fingerprint,
            primal: wire.primal.map(JointDist::from_wire).transpose()?,
            dual: wire
                .dual
                .map(|d| d.row_multipliers.iter().map(|s| num(s)).collect())
                .transpose()?,
            digest: wire.digest.unwrap_or_default(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Problem(#[from] CertifyError),
    #[error("lambda0 {found} does not match the requested {expected}")]
    Lambda0 { expected: String, found: String },
    #[error("fingerprint does not match (g, family, lambda0)")]
    Fingerprint,
    #[error("digest does not match the certificate contents")]
    Digest,
    #[error("verdict {verdict} is inconsistent with optimum {optimum}")]
    Verdict { verdict: Verdict, optimum: String },
    #[error("{verdict} certificate lacks its {missing} part")]
    Missing { verdict: Verdict, missing: &'static str },
    #[error("primal witness: {0}")]
    Primal(String),
    #[error("dual certificate: {0}")]
    Dual(String),
}

/// Full check: fingerprint, digest, then the exact LP recheck.
pub fn check_certificate(
    g: &JointDist,
    family: &MapFamily,
    lambda0: &Rational,
    cert: &Certificate,
    opts: &CertifyOptions,
) -> Result<(), VerifyError> {
    let problem = CertificationProblem::new(g, family, lambda0)?;
    if cert.lambda0 != *lambda0 {
        return Err(VerifyError::Lambda0 {
            expected: rational::format(lambda0),
            found: rational::format(&cert.lambda0),
        });
    }
    if cert.fingerprint != problem.fingerprint() {
        return Err(VerifyError::Fingerprint);
    }
    if cert.digest != cert.compute_digest() {
        return Err(VerifyError::Digest);
    }
    recheck_math(&problem, cert, opts)
}

/// `true` iff [`check_certificate`] passes with default options.
pub fn verify_certificate(
    g: &JointDist,
    family: &MapFamily,
    lambda0: &Rational,
    cert: &Certificate,
) -> bool {
    check_certificate(g, family, lambda0, cert, &CertifyOptions::default()).is_ok()
}

/// Rechecks the certificate's mathematics against a freshly built LP,
/// ignoring fingerprint and digest. Undistillable certificates need a dual,
/// inconclusive ones a primal; whatever is present is checked.
pub fn recheck_math(
    problem: &CertificationProblem,
    cert: &Certificate,
    opts: &CertifyOptions,
) -> Result<(), VerifyError> {
    let clp = build_lp(problem, opts)?;
    recheck_against(problem, &clp, cert)
}

/// [`recheck_math`] against an already assembled LP for `problem`.
pub fn recheck_against(
    problem: &CertificationProblem,
    clp: &CertificationLp,
    cert: &Certificate,
) -> Result<(), VerifyError> {
    if cert.verdict != Verdict::for_optimum(&cert.optimum) {
        return Err(VerifyError::Verdict {
            verdict: cert.verdict,
            optimum: rational::format(&cert.optimum),
        });
    }
    match (cert.verdict, &cert.primal, &cert.dual) {
        (Verdict::Undistillable, _, None) => {
            return Err(VerifyError::Missing {
                verdict: cert.verdict,
                missing: "dual",
            })
        }
        (Verdict::Inconclusive, None, _) => {
            return Err(VerifyError::Missing {
                verdict: cert.verdict,
                missing: "primal",
            })
        }
        _ => {}
    }
    let lp = &clp.lp;

    let x = match &cert.primal {
        Some(q) => {
            let x = problem.q_to_vector(q).map_err(|e| VerifyError::Primal(e.to_string()))?;
            for (row, kind) in lp.rows.iter().zip(&clp.kinds) {
                if !row.is_satisfied(&x) {
                    return Err(VerifyError::Primal(format!(
                        "violates {kind}: activity {} vs rhs {}",
                        rational::format(&row.activity(&x)),
                        rational::format(&row.rhs)
                    )));
                }
            }
            let value = lp.objective_at(&x);
            if value != cert.optimum {
                return Err(VerifyError::Primal(format!(
                    "objective {} differs from the claimed optimum {}",
                    rational::format(&value),
                    rational::format(&cert.optimum)
                )));
            }
            Some(x)
        }
        None => None,
    };

    if let Some(y) = &cert.dual {
        if y.len() != lp.rows.len() {
            return Err(VerifyError::Dual(format!(
                "{} multipliers for {} rows",
                y.len(),
                lp.rows.len()
            )));
        }
        for ((row, v), kind) in lp.rows.iter().zip(y).zip(&clp.kinds) {
            let ok = match row.sense {
                Sense::Le => !v.is_negative(),
                Sense::Ge => !v.is_positive(),
                Sense::Eq => true,
            };
            if !ok {
                return Err(VerifyError::Dual(format!("multiplier of {kind} has the wrong sign")));
            }
        }
        let aty = lp.transpose_times(y);
        let c = lp.cost_vector();
        if let Some(j) = (0..lp.num_vars).find(|&j| aty[j] < c[j]) {
            return Err(VerifyError::Dual(format!(
                "dual constraint of variable {j} fails: {} < {}",
                rational::format(&aty[j]),
                rational::format(&c[j])
            )));
        }
        let bound = crate::ratlp::dual_bound(lp, y);
        if bound != cert.optimum {
            return Err(VerifyError::Dual(format!(
                "bound {} differs from the claimed optimum {}",
                rational::format(&bound),
                rational::format(&cert.optimum)
            )));
        }
        if let Some(x) = &x {
            for ((row, v), kind) in lp.rows.iter().zip(y).zip(&clp.kinds) {
                if !v.is_zero() && row.activity(x) != row.rhs {
                    return Err(VerifyError::Dual(format!(
                        "complementary slackness fails on {kind}"
                    )));
                }
            }
        }
    }
    Ok(())
}
