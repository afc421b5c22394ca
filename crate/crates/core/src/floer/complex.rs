//! Finite δ-graded chain complexes over F2[U] and involutions on them.

use super::FloerError;
use serde::Serialize;
use std::collections::BTreeMap;

/// A generator with its δ-grading.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub name: String,
    pub delta: i64,
}

/// A finitely generated δ-graded chain complex over F2[U].
///
/// U carries δ-degree -1 and the differential carries δ-degree -1, so a term
/// U^e·g_i in ∂g_j forces e = δ(g_i) - δ(g_j) + 1. Entries therefore carry a
/// single exponent per (source, target) pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfkComplex {
    gens: Vec<Generator>,
    /// d[j] = sorted (target, exponent) pairs of ∂g_j.
    d: Vec<Vec<(usize, u32)>>,
}

/// A grading-preserving chain map in the generator basis, with the same
/// single-exponent entry encoding (here e = δ(target) - δ(source)).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Involution {
    entries: Vec<Vec<(usize, u32)>>,
}

impl CfkComplex {
    /// Validates the grading rule on every entry and ∂² = 0.
    pub fn new(gens: Vec<Generator>, d: Vec<Vec<(usize, u32)>>) -> Result<Self, FloerError> {
        if d.len() != gens.len() {
            return Err(FloerError::NotAComplex("differential size mismatch".into()));
        }
        let mut seen = BTreeMap::new();
        for (i, g) in gens.iter().enumerate() {
            if seen.insert(g.name.clone(), i).is_some() {
                return Err(FloerError::NotAComplex(format!(
                    "duplicate generator {}",
                    g.name
                )));
            }
        }
        let mut d = d;
        for row in &mut d {
            row.sort_unstable();
            if row.windows(2).any(|w| w[0] == w[1]) {
                return Err(FloerError::NotAComplex(
                    "repeated differential entry".into(),
                ));
            }
        }
        for (j, row) in d.iter().enumerate() {
            for &(i, e) in row {
                if i >= gens.len() {
                    return Err(FloerError::NotAComplex("target out of range".into()));
                }
                let expected = gens[i].delta - gens[j].delta + 1;
                if expected < 0 || expected as u32 != e {
                    return Err(FloerError::GradingViolation {
                        from_gen: gens[j].name.clone(),
                        to_gen: gens[i].name.clone(),
                        exponent: e,
                    });
                }
            }
        }
        let complex = CfkComplex { gens, d };
        complex.check_d_squared()?;
        Ok(complex)
    }

    fn check_d_squared(&self) -> Result<(), FloerError> {
        for j in 0..self.gens.len() {
            let composed = compose_entry_lists(&self.d, &self.d[j]);
            if !composed.is_empty() {
                return Err(FloerError::NotAComplex(format!(
                    "∂² ≠ 0 starting from {}",
                    self.gens[j].name
                )));
            }
        }
        Ok(())
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn differential(&self) -> &[Vec<(usize, u32)>] {
        &self.d
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn max_delta(&self) -> i64 {
        self.gens.iter().map(|g| g.delta).max().unwrap_or(0)
    }

    pub fn min_delta(&self) -> i64 {
        self.gens.iter().map(|g| g.delta).min().unwrap_or(0)
    }

    /// The mapping cone of 1 + ι over F2[U,Q]/(Q²): generators g and Qg with
    /// δ(Qg) = δ(g) - 1, differential ∂(a + Qb) = ∂a + Q((1+ι)a + ∂b).
    pub fn mapping_cone(
        &self,
        iota: &Involution,
    ) -> Result<(CfkComplex, Vec<Option<usize>>), FloerError> {
        iota.validate(self)?;
        let n = self.gens.len();
        let mut gens = Vec::with_capacity(2 * n);
        gens.extend(self.gens.iter().cloned());
        gens.extend(self.gens.iter().map(|g| Generator {
            name: format!("Q{}", g.name),
            delta: g.delta - 1,
        }));
        let mut d = vec![Vec::new(); 2 * n];
        for j in 0..n {
            // plain part keeps ∂ and acquires Q(1 + ι)
            let mut row: Vec<(usize, u32)> = self.d[j].clone();
            let mut one_plus_iota = iota.entries[j].clone();
            toggle_entry(&mut one_plus_iota, (j, 0));
            row.extend(one_plus_iota.into_iter().map(|(i, e)| (n + i, e)));
            row.sort_unstable();
            d[j] = row;
            // Q part maps by ∂ within the Q copy
            d[n + j] = self.d[j].iter().map(|&(i, e)| (n + i, e)).collect();
        }
        let cone = CfkComplex::new(gens, d)?;
        let q_map = (0..2 * n)
            .map(|i| if i < n { Some(n + i) } else { None })
            .collect();
        Ok((cone, q_map))
    }
}

impl Involution {
    /// Build from entry lists; validated against a complex separately.
    pub fn from_entries(entries: Vec<Vec<(usize, u32)>>) -> Self {
        let mut entries = entries;
        for row in &mut entries {
            row.sort_unstable();
        }
        Involution { entries }
    }

    pub fn identity(n: usize) -> Self {
        Involution {
            entries: (0..n).map(|i| vec![(i, 0)]).collect(),
        }
    }

    pub fn entries(&self) -> &[Vec<(usize, u32)>] {
        &self.entries
    }

    /// Checks shape, the grading-preservation rule, and the chain-map
    /// identity ι∂ = ∂ι.
    pub fn validate(&self, complex: &CfkComplex) -> Result<(), FloerError> {
        let gens = complex.generators();
        if self.entries.len() != gens.len() {
            return Err(FloerError::NotAComplex("involution size mismatch".into()));
        }
        for (j, row) in self.entries.iter().enumerate() {
            for &(i, e) in row {
                if i >= gens.len() {
                    return Err(FloerError::NotAComplex(
                        "involution target out of range".into(),
                    ));
                }
                let expected = gens[i].delta - gens[j].delta;
                if expected < 0 || expected as u32 != e {
                    return Err(FloerError::GradingViolation {
                        from_gen: gens[j].name.clone(),
                        to_gen: gens[i].name.clone(),
                        exponent: e,
                    });
                }
            }
        }
        for ((d_row, iota_row), gen) in complex.d.iter().zip(&self.entries).zip(gens) {
            let di = compose_entry_lists(&self.entries, d_row);
            let id = compose_entry_lists(&complex.d, iota_row);
            if di != id {
                return Err(FloerError::NotAChainMap {
                    generator: gen.name.clone(),
                });
            }
        }
        Ok(())
    }

    /// ι ∘ ι, with F2 cancellation.
    pub fn composed_with_self(&self) -> Involution {
        let entries = (0..self.entries.len())
            .map(|j| compose_entry_lists(&self.entries, &self.entries[j]))
            .collect();
        Involution { entries }
    }
}

/// Apply a sparse map (rows of (target, exp)) to a single entry list,
/// cancelling duplicate terms over F2.
fn compose_entry_lists(map: &[Vec<(usize, u32)>], input: &[(usize, u32)]) -> Vec<(usize, u32)> {
    let mut acc: Vec<(usize, u32)> = Vec::new();
    for &(i, e) in input {
        for &(k, f) in &map[i] {
            toggle_entry(&mut acc, (k, e + f));
        }
    }
    acc.sort_unstable();
    acc
}

fn toggle_entry(list: &mut Vec<(usize, u32)>, entry: (usize, u32)) {
    if let Some(pos) = list.iter().position(|x| *x == entry) {
        list.remove(pos);
    } else {
        list.push(entry);
    }
}
