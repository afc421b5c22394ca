//! Aggregation of every lower and upper bound into certified intervals for
//! the smooth and topological nonorientable 4-ball genus.

mod facts;

pub use facts::{Fact, FactKind, FactsParseError, FactsTable, DEFAULT_FACTS};

use crate::classical;
use crate::floer::{self, FloerError};
use crate::topobstruct::{self, ObstructError, TopVerdict};
use crate::torusknot::{self, Stretch, TorusKnot};
use serde::Serialize;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("certificates are inconsistent: lower {lo} exceeds upper {hi}")]
    Inconsistent { lo: u64, hi: u64 },
    #[error(transparent)]
    Obstruct(#[from] ObstructError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    Lower,
    Upper,
}

/// One independently reproducible bound with its provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundCertificate {
    pub name: String,
    pub value: i64,
    pub direction: Direction,
    pub citation: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Interval {
    pub lo: u64,
    pub hi: u64,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub knot: TorusKnot,
    pub smooth: Interval,
    pub topological: Interval,
    pub certificates: Vec<BoundCertificate>,
    /// False when floer-derived certificates were withheld (calibration
    /// failure or genus cap).
    pub floer_certificates_available: bool,
}

/// Knobs for the aggregator; defaults match the CLI defaults.
#[derive(Debug, Clone)]
pub struct BoundsConfig {
    pub facts: FactsTable,
    pub skip_floer: bool,
    /// Staircase homology is skipped above this genus; the certificates are
    /// then reported unavailable rather than guessed.
    pub floer_genus_cap: u64,
    pub max_factor_digits: u32,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        BoundsConfig {
            facts: FactsTable::shipped(),
            skip_floer: false,
            floer_genus_cap: 512,
            max_factor_digits: crate::arith::DEFAULT_FACTOR_DIGITS,
        }
    }
}

/// Quick self-test of the floer calibration; when it fails, oss and
/// involutive certificates are withheld rather than emitted unsound.
pub fn floer_calibrated() -> bool {
    static CALIBRATED: OnceLock<bool> = OnceLock::new();
    *CALIBRATED.get_or_init(|| {
        let unknot = TorusKnot::new(1, 2).unwrap();
        let trefoil = TorusKnot::new(2, 3).unwrap();
        let t45 = TorusKnot::new(4, 5).unwrap();
        floer::upsilon(&unknot) == Ok(0)
            && floer::upsilon(&trefoil) == Ok(-1)
            && floer::upsilon(&t45) == Ok(-4)
            && floer::involutive_upsilons_lspace(&trefoil)
                .is_ok_and(|s| (s.upsilon_bar, s.upsilon_underbar) == (-1, -2))
    })
}

/// Stretch lower bound: a defined stretch k ≥ 2 rules out a Möbius band, so
/// γ₄ ≥ max(2, k-1); k = 1 carries no information.
pub fn stretch_lower_bound(knot: &TorusKnot) -> Option<BoundCertificate> {
    if knot.is_unknot {
        return None;
    }
    match torusknot::stretch(knot).ok()? {
        Stretch::Undefined => None,
        Stretch::Defined(k) if k >= 2 => {
            let value = (k - 1).max(2) as i64;
            let (name, citation) = if k > 2 {
                ("stretch-general", format!("first positive exponent k={k}"))
            } else {
                (
                    "stretch-mobius",
                    format!("k={k} ≥ 2 excludes a Möbius band"),
                )
            };
            Some(BoundCertificate {
                name: name.into(),
                value,
                direction: Direction::Lower,
                citation,
            })
        }
        Stretch::Defined(_) => None,
    }
}

/// |υ - σ/2| ≤ γ₄.
pub fn oss_lower_bound(knot: &TorusKnot) -> Result<BoundCertificate, FloerError> {
    let upsilon = if knot.is_unknot {
        0
    } else {
        floer::upsilon(knot)?
    };
    let sigma = classical::signature(knot);
    let value = (upsilon - sigma / 2).abs();
    Ok(BoundCertificate {
        name: "oss".into(),
        value,
        direction: Direction::Lower,
        citation: format!("|υ - σ/2| with υ={upsilon}, σ={sigma}"),
    })
}

/// Certificates from the involutive invariants: γ₄ ≥ ῡ-υ-1, γ₄ ≥ υ-ῡ̲-1,
/// γ₄ ≥ ῡ-ῡ̲-2, and a Möbius exclusion (γ₄ ≥ 2) when ῡ-ῡ̲ ≥ 2.
pub fn involutive_lower_bounds(knot: &TorusKnot) -> Result<Vec<BoundCertificate>, FloerError> {
    let summary = floer::involutive_upsilons_torus(knot)?;
    Ok(involutive_certs_from_summary(
        summary.upsilon,
        summary.upsilon_bar,
        summary.upsilon_underbar,
    ))
}

/// The same certificates from explicitly supplied invariants (fixture path).
pub fn involutive_certs_from_summary(
    upsilon: i64,
    upsilon_bar: i64,
    upsilon_underbar: i64,
) -> Vec<BoundCertificate> {
    let mut certs = Vec::new();
    let mut push = |name: &str, value: i64, citation: String| {
        if value >= 1 {
            certs.push(BoundCertificate {
                name: name.into(),
                value,
                direction: Direction::Lower,
                citation,
            });
        }
    };
    push(
        "involutive-gap",
        upsilon_bar - upsilon - 1,
        format!("ῡ-υ-1 with ῡ={upsilon_bar}, υ={upsilon}"),
    );
    push(
        "involutive-gap",
        upsilon - upsilon_underbar - 1,
        format!("υ-ῡ̲-1 with υ={upsilon}, ῡ̲={upsilon_underbar}"),
    );
    push(
        "involutive-gap",
        upsilon_bar - upsilon_underbar - 2,
        format!("ῡ-ῡ̲-2 with ῡ={upsilon_bar}, ῡ̲={upsilon_underbar}"),
    );
    if upsilon_bar - upsilon_underbar >= 2 {
        push(
            "involutive-gap",
            2,
            format!(
                "ῡ-ῡ̲ = {} ≥ 2 excludes a Möbius band",
                upsilon_bar - upsilon_underbar
            ),
        );
    }
    certs
}

/// Batson's d-invariant bound, available through the closed forms for T(4,q)
/// only.
fn batson_d_lower_bound(knot: &TorusKnot) -> Option<BoundCertificate> {
    let (e, o) = if knot.p.is_multiple_of(2) || knot.q.is_multiple_of(2) {
        knot.even_first()
    } else {
        return None;
    };
    if e != 4 || o < 3 {
        return None;
    }
    let value: i64 = match o % 8 {
        1 => 0,
        3 => 1,
        5 => -2,
        7 => -1,
        _ => unreachable!(),
    };
    Some(BoundCertificate {
        name: "batson-d".into(),
        value,
        direction: Direction::Lower,
        citation: "closed-form d-invariant table for T(4,q)".into(),
    })
}

/// Smooth interval: hi from the pinch number refined by the literature
/// table along the pinch walk; lo from the certificate set.
pub fn smooth_bounds(knot: &TorusKnot) -> Result<BoundReport, BoundsError> {
    smooth_bounds_with(knot, &BoundsConfig::default())
}

pub fn smooth_bounds_with(
    knot: &TorusKnot,
    config: &BoundsConfig,
) -> Result<BoundReport, BoundsError> {
    let mut certs: Vec<BoundCertificate> = Vec::new();

    let theta = torusknot::pinch_number(knot);
    let mut hi = theta.max(1);
    certs.push(BoundCertificate {
        name: "pinch-upper".into(),
        value: theta.max(1) as i64,
        direction: Direction::Upper,
        citation: format!("ϑ = {theta}"),
    });

    // literature facts transported back along the pinch walk:
    // j pinches from K to K' give γ₄(K) ≤ γ₄(K') + j
    let mut lo: u64 = 1;
    let mut walk_knot = *knot;
    for j in 0..=theta {
        for fact in config.facts.lookup(&walk_knot) {
            let (is_upper, is_lower) = match fact.kind {
                FactKind::Upper => (true, false),
                FactKind::Lower => (false, true),
                FactKind::Exact => (true, true),
            };
            if is_upper {
                let candidate = fact.value + j;
                if candidate < hi {
                    hi = candidate.max(1);
                }
                certs.push(BoundCertificate {
                    name: "literature".into(),
                    value: candidate.max(1) as i64,
                    direction: Direction::Upper,
                    citation: if j == 0 {
                        fact.citation.clone()
                    } else {
                        format!("{} after {j} pinches", fact.citation)
                    },
                });
            }
            if is_lower && j == 0 {
                lo = lo.max(fact.value);
                certs.push(BoundCertificate {
                    name: "literature".into(),
                    value: fact.value as i64,
                    direction: Direction::Lower,
                    citation: fact.citation.clone(),
                });
            }
        }
        if walk_knot.is_unknot {
            break;
        }
        walk_knot = torusknot::pinch_once(&walk_knot).expect("nontrivial").to;
    }

    if !knot.is_unknot {
        let record = classical::yasuhara_obstruction(knot);
        if record.mobius_parity_obstructed {
            let cert = BoundCertificate {
                name: "yasuhara".into(),
                value: 2,
                direction: Direction::Lower,
                citation: format!("σ+4·Arf ≡ {} mod 8", record.yasuhara_class),
            };
            lo = lo.max(2);
            certs.push(cert);
        }
        if let Some(cert) = stretch_lower_bound(knot) {
            lo = lo.max(cert.value as u64);
            certs.push(cert);
        }
    }

    let floer_ok =
        !config.skip_floer && knot.genus() <= config.floer_genus_cap && floer_calibrated();
    if floer_ok {
        if let Ok(cert) = oss_lower_bound(knot) {
            if cert.value >= 1 {
                lo = lo.max(cert.value as u64);
                certs.push(cert);
            }
        }
        if !knot.is_unknot {
            if let Ok(involutive) = involutive_lower_bounds(knot) {
                for cert in involutive {
                    lo = lo.max(cert.value as u64);
                    certs.push(cert);
                }
            }
            if let Some(cert) = batson_d_lower_bound(knot) {
                if cert.value >= 1 {
                    lo = lo.max(cert.value as u64);
                }
                certs.push(cert);
            }
        }
    }

    if lo > hi {
        return Err(BoundsError::Inconsistent { lo, hi });
    }
    let smooth = Interval {
        lo,
        hi,
        exact: lo == hi,
    };
    Ok(BoundReport {
        knot: *knot,
        smooth,
        // the lf refinement is applied by topological_bounds
        topological: Interval {
            lo: 1,
            hi,
            exact: hi == 1,
        },
        certificates: certs,
        floer_certificates_available: floer_ok,
    })
}

/// Topological interval: hi inherited from the smooth side, lo raised to 2
/// by the quadratic-residue obstruction when it fires.
pub fn topological_bounds(knot: &TorusKnot) -> Result<BoundReport, BoundsError> {
    topological_bounds_with(knot, &BoundsConfig::default())
}

pub fn topological_bounds_with(
    knot: &TorusKnot,
    config: &BoundsConfig,
) -> Result<BoundReport, BoundsError> {
    let mut report = smooth_bounds_with(knot, config)?;
    let mut lo = 1u64;
    if !knot.is_unknot {
        let verdict = topobstruct::lf_mobius_obstructed_with_limit(knot, config.max_factor_digits)?;
        if verdict == TopVerdict::Obstructed {
            lo = 2;
            report.certificates.push(BoundCertificate {
                name: "lf-residue".into(),
                value: 2,
                direction: Direction::Lower,
                citation: "odd-power prime factor in an obstructing class".into(),
            });
        }
    }
    let hi = report.topological.hi;
    if lo > hi {
        return Err(BoundsError::Inconsistent { lo, hi });
    }
    report.topological = Interval {
        lo,
        hi,
        exact: lo == hi,
    };
    Ok(report)
}
