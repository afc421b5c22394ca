//! Literature-facts table: externally proven values consumed as
//! certificates. Line-oriented, human-auditable format:
//!
//! ```text
//! fact <p> <q> <lower|upper|exact> <value> <citation-key>
//! family <key> <lower|upper|exact>
//! ```
//!
//! Family semantics (parameters written with the even coordinate first):
//!
//! - `batson`: T(p, p-1) for even p ≥ 4 has γ₄ = (p-2)/2 (exact).
//! - `longo`: T(4n, (2n±1)²) for n ≥ 2 has γ₄ ≤ 2n-1 (upper).
//! - `tairi`: T(4n+2m+2, 10n+6m+5) for n ≥ 0, m ≥ 2 has γ₄ = m (exact).

use crate::torusknot::TorusKnot;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("facts table parse error at line {line}: {message}")]
pub struct FactsParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactKind {
    Lower,
    Upper,
    Exact,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fact {
    pub kind: FactKind,
    pub value: u64,
    pub citation: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum FamilyKey {
    Batson,
    Longo,
    Tairi,
}

#[derive(Debug, Clone)]
pub struct FactsTable {
    explicit: Vec<(u64, u64, Fact)>,
    families: Vec<(FamilyKey, FactKind)>,
}

/// The default shipped table.
pub const DEFAULT_FACTS: &str = "\
# Externally proven nonorientable 4-ball genus facts for torus knots.
# fact <p> <q> <lower|upper|exact> <value> <citation-key>
fact 4 9 exact 1 lobb
fact 4 11 exact 1 tairi

# family <key> <lower|upper|exact>; parameters below have the even
# coordinate written first.
#   batson: T(p, p-1), p even >= 4          -> gamma4 = (p-2)/2
#   longo:  T(4n, (2n+-1)^2), n >= 2        -> gamma4 <= 2n-1
#   tairi:  T(4n+2m+2, 10n+6m+5), n>=0 m>=2 -> gamma4 = m
family batson exact
family longo upper
family tairi exact
";

impl FactsTable {
    pub fn parse(text: &str) -> Result<FactsTable, FactsParseError> {
        let mut explicit = Vec::new();
        let mut families = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let err = |message: &str| FactsParseError {
                line: lineno + 1,
                message: message.to_string(),
            };
            match fields[0] {
                "fact" => {
                    if fields.len() != 6 {
                        return Err(err("expected: fact <p> <q> <kind> <value> <citation>"));
                    }
                    let p: u64 = fields[1].parse().map_err(|_| err("bad p"))?;
                    let q: u64 = fields[2].parse().map_err(|_| err("bad q"))?;
                    let kind = parse_kind(fields[3]).ok_or_else(|| err("bad kind"))?;
                    let value: u64 = fields[4].parse().map_err(|_| err("bad value"))?;
                    explicit.push((
                        p,
                        q,
                        Fact {
                            kind,
                            value,
                            citation: fields[5].into(),
                        },
                    ));
                }
                "family" => {
                    if fields.len() != 3 {
                        return Err(err("expected: family <key> <kind>"));
                    }
                    let key = match fields[1] {
                        "batson" => FamilyKey::Batson,
                        "longo" => FamilyKey::Longo,
                        "tairi" => FamilyKey::Tairi,
                        _ => return Err(err("unknown family key")),
                    };
                    let kind = parse_kind(fields[2]).ok_or_else(|| err("bad kind"))?;
                    families.push((key, kind));
                }
                _ => return Err(err("unknown directive")),
            }
        }
        Ok(FactsTable { explicit, families })
    }

    pub fn shipped() -> FactsTable {
        FactsTable::parse(DEFAULT_FACTS).expect("shipped table parses")
    }

    /// All facts applying to this knot (symmetric in p and q).
    pub fn lookup(&self, knot: &TorusKnot) -> Vec<Fact> {
        let mut out = Vec::new();
        for (p, q, fact) in &self.explicit {
            if (knot.p, knot.q) == (*p, *q) || (knot.p, knot.q) == (*q, *p) {
                out.push(fact.clone());
            }
        }
        if knot.p.is_multiple_of(2) || knot.q.is_multiple_of(2) {
            let (e, o) = knot.even_first();
            for (key, kind) in &self.families {
                if let Some((value, citation)) = match_family(key, e, o) {
                    out.push(Fact {
                        kind: *kind,
                        value,
                        citation,
                    });
                }
            }
        }
        out
    }
}

fn parse_kind(s: &str) -> Option<FactKind> {
    match s {
        "lower" => Some(FactKind::Lower),
        "upper" => Some(FactKind::Upper),
        "exact" => Some(FactKind::Exact),
        _ => None,
    }
}

fn match_family(key: &FamilyKey, e: u64, o: u64) -> Option<(u64, String)> {
    match key {
        FamilyKey::Batson => {
            if e >= 4 && o == e - 1 {
                return Some(((e - 2) / 2, "batson".into()));
            }
            None
        }
        FamilyKey::Longo => {
            if !e.is_multiple_of(4) {
                return None;
            }
            let n = e / 4;
            if n < 2 {
                return None;
            }
            if o == (2 * n - 1) * (2 * n - 1) || o == (2 * n + 1) * (2 * n + 1) {
                return Some((2 * n - 1, format!("longo(n={n})")));
            }
            None
        }
        FamilyKey::Tairi => {
            // e = 4n+2m+2, o = 10n+6m+5  =>  n = (3e-o-1)/2, m = (e-2-4n)/2
            let three_e = 3 * e;
            if three_e < o + 1 || !(three_e - o - 1).is_multiple_of(2) {
                return None;
            }
            let n = (three_e - o - 1) / 2;
            if e < 2 + 4 * n || !(e - 2 - 4 * n).is_multiple_of(2) {
                return None;
            }
            let m = (e - 2 - 4 * n) / 2;
            if m >= 2 {
                return Some((m, format!("tairi(n={n},m={m})")));
            }
            None
        }
    }
}
