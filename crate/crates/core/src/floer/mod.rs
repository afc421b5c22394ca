//! Knot Floer machinery over F2[U]: staircases, involutions, mapping cones,
//! and the unoriented upsilon invariants υ, ῡ, ῡ̲.

mod complex;
mod homology;
mod parse;
mod staircase;

pub use complex::{CfkComplex, Generator, Involution};
pub use homology::GradedHomology;
pub use parse::parse_complex;
pub use staircase::{staircase, staircase_from_alexander, staircase_from_gaps};

use crate::torusknot::{self, Stretch, TorusKnot};
use serde::Serialize;
use std::collections::HashMap;
use std::sync::RwLock;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FloerError {
    #[error("not a valid complex: {0}")]
    NotAComplex(String),
    #[error("entry {from_gen} -> U^{exponent}·{to_gen} violates the δ-grading rule")]
    GradingViolation {
        from_gen: String,
        to_gen: String,
        exponent: u32,
    },
    #[error("the map fails to commute with ∂ on generator {generator}")]
    NotAChainMap { generator: String },
    #[error("Alexander polynomial does not have the L-space staircase shape")]
    NotStaircase,
    #[error("structure violation: {0}")]
    StructureViolation(String),
    #[error("constant coefficient is +1, the stretch hypothesis fails")]
    ConstantTermPlusOne,
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// One U-nontorsion class of the mapping-cone homology: its δ-grading and
/// whether some U-power of it lands in the image of Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TowerClass {
    pub grading: i64,
    pub eventually_in_q_image: bool,
}

/// The three unoriented upsilon invariants of a knot, with the tower data
/// they were read from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HfkiSummary {
    pub upsilon: i64,
    pub upsilon_bar: i64,
    pub upsilon_underbar: i64,
    pub tower_data: Vec<TowerClass>,
}

/// A summand of the homology of a complex over F2[U].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Summand {
    /// Free F2[U] tower generated in the given δ-grading.
    Tower { grading: i64 },
    /// F2[U]/U^order generated in the given δ-grading.
    Torsion { grading: i64, order: u32 },
}

/// Graded decomposition of the homology of a complex over F2[U]; exact and
/// deterministic.
pub fn homology(complex: &CfkComplex) -> Result<Vec<Summand>, FloerError> {
    let engine = GradedHomology::new(complex, None);
    Ok(engine.decompose())
}

/// υ of a torus knot: the δ-grading of the U-tower of the staircase
/// homology.
pub fn upsilon(knot: &TorusKnot) -> Result<i64, FloerError> {
    let (complex, _) = staircase(knot)?;
    let engine = GradedHomology::new(&complex, None);
    if engine.localized_rank() != 1 {
        return Err(FloerError::StructureViolation(format!(
            "localized homology rank {} != 1",
            engine.localized_rank()
        )));
    }
    engine.tower_grading()
}

/// Full involutive computation: υ from the complex, ῡ and ῡ̲ from the
/// mapping cone of 1 + ι over F2[U,Q]/(Q²).
pub fn involutive_upsilons(
    complex: &CfkComplex,
    iota: &Involution,
) -> Result<HfkiSummary, FloerError> {
    let plain = GradedHomology::new(complex, None);
    if plain.localized_rank() != 1 {
        return Err(FloerError::StructureViolation(format!(
            "localized homology rank {} != 1",
            plain.localized_rank()
        )));
    }
    let upsilon = plain.tower_grading()?;

    let (cone, q_map) = complex.mapping_cone(iota)?;
    let engine = GradedHomology::new(&cone, Some(&q_map));
    if engine.localized_rank() != 2 {
        return Err(FloerError::StructureViolation(format!(
            "localized mapping-cone rank {} != 2",
            engine.localized_rank()
        )));
    }
    let upsilon_underbar = engine.upsilon_underbar()?;
    let upsilon_bar = engine.upsilon_bar()?;
    if !(upsilon_bar >= upsilon && upsilon >= upsilon_underbar) {
        return Err(FloerError::StructureViolation(format!(
            "invariant chain violated: ῡ={upsilon_bar}, υ={upsilon}, ῡ̲={upsilon_underbar}"
        )));
    }
    Ok(HfkiSummary {
        upsilon,
        upsilon_bar,
        upsilon_underbar,
        tower_data: vec![
            TowerClass {
                grading: upsilon_underbar,
                eventually_in_q_image: false,
            },
            TowerClass {
                grading: upsilon_bar - 1,
                eventually_in_q_image: true,
            },
        ],
    })
}

/// Involutive invariants of any torus knot via its staircase and the
/// reflection involution. Memoized: family tables revisit the same knots.
pub fn involutive_upsilons_torus(knot: &TorusKnot) -> Result<HfkiSummary, FloerError> {
    static CACHE: RwLock<Option<HashMap<(u64, u64), HfkiSummary>>> = RwLock::new(None);
    let key = (knot.p.min(knot.q), knot.p.max(knot.q));
    if let Some(cache) = CACHE.read().unwrap().as_ref() {
        if let Some(hit) = cache.get(&key) {
            return Ok(hit.clone());
        }
    }
    let (complex, iota) = staircase(knot)?;
    let summary = involutive_upsilons(&complex, &iota)?;
    CACHE
        .write()
        .unwrap()
        .get_or_insert_with(HashMap::new)
        .insert(key, summary.clone());
    Ok(summary)
}

/// The L-space-knot entry point: requires the stretch hypothesis (constant
/// coefficient -1) and checks ῡ = υ and ῡ - ῡ̲ ≥ n₁ on the way out.
pub fn involutive_upsilons_lspace(knot: &TorusKnot) -> Result<HfkiSummary, FloerError> {
    let n1 = if knot.is_unknot {
        0
    } else {
        let s = torusknot::stretch(knot).map_err(|e| FloerError::NotAComplex(e.to_string()))?;
        match s {
            Stretch::Defined(n1) => n1 as i64,
            Stretch::Undefined => return Err(FloerError::ConstantTermPlusOne),
        }
    };
    let summary = involutive_upsilons_torus(knot)?;
    if summary.upsilon_bar != summary.upsilon {
        return Err(FloerError::StructureViolation(format!(
            "expected ῡ = υ for an L-space staircase, got ῡ={} υ={}",
            summary.upsilon_bar, summary.upsilon
        )));
    }
    if summary.upsilon_bar - summary.upsilon_underbar < n1 {
        return Err(FloerError::StructureViolation(format!(
            "expected ῡ - ῡ̲ ≥ n₁ = {n1}, got {}",
            summary.upsilon_bar - summary.upsilon_underbar
        )));
    }
    Ok(summary)
}

/// Involutive upsilons of a thin knot from σ and Arf. Only the residues
/// 0 and 4 of σ + 4·Arf mod 8 are covered.
pub fn thin_knot_upsilons(sigma: i64, arf: u8) -> Result<(i64, i64, i64), FloerError> {
    match (sigma + 4 * arf as i64).rem_euclid(8) {
        0 => Ok((0, 0, 0)),
        4 => Ok((1, 0, -1)),
        r => Err(FloerError::StructureViolation(format!(
            "thin-knot formula covers residues 0 and 4 mod 8, got {r}"
        ))),
    }
}
