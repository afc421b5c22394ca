//! Line-oriented complex-description format:
//!
//! ```text
//! gen <name> <delta>
//! d <from> <U-exp> <to>
//! iota <from> <U-exp> <to>
//! ```
//!
//! Blank lines and `#` comments are ignored. Generators must be declared
//! before they are referenced.

use super::complex::{CfkComplex, Generator, Involution};
use super::FloerError;
use std::collections::BTreeMap;

pub fn parse_complex(text: &str) -> Result<(CfkComplex, Involution), FloerError> {
    let mut gens: Vec<Generator> = Vec::new();
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    let mut d_lines: Vec<(usize, usize, u32)> = Vec::new();
    let mut iota_lines: Vec<(usize, usize, u32)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let err = |msg: &str| FloerError::Parse {
            line: lineno + 1,
            message: msg.to_string(),
        };
        match fields[0] {
            "gen" => {
                if fields.len() != 3 {
                    return Err(err("expected: gen <name> <delta>"));
                }
                let delta: i64 = fields[2].parse().map_err(|_| err("bad delta"))?;
                let name = fields[1].to_string();
                if index.contains_key(&name) {
                    return Err(err("duplicate generator"));
                }
                index.insert(name.clone(), gens.len());
                gens.push(Generator { name, delta });
            }
            "d" | "iota" => {
                if fields.len() != 4 {
                    return Err(err("expected: <kind> <from> <U-exp> <to>"));
                }
                let from = *index
                    .get(fields[1])
                    .ok_or_else(|| err("unknown source generator"))?;
                let exp: u32 = fields[2].parse().map_err(|_| err("bad U-exponent"))?;
                let to = *index
                    .get(fields[3])
                    .ok_or_else(|| err("unknown target generator"))?;
                if fields[0] == "d" {
                    d_lines.push((from, to, exp));
                } else {
                    iota_lines.push((from, to, exp));
                }
            }
            _ => return Err(err("unknown directive")),
        }
    }

    if gens.is_empty() {
        return Err(FloerError::Parse {
            line: 0,
            message: "no generators".into(),
        });
    }

    let mut d = vec![Vec::new(); gens.len()];
    for (from, to, exp) in d_lines {
        d[from].push((to, exp));
    }
    let mut iota = vec![Vec::new(); gens.len()];
    for (from, to, exp) in iota_lines {
        iota[from].push((to, exp));
    }
    let complex = CfkComplex::new(gens, d)?;
    let involution = Involution::from_entries(iota);
    involution.validate(&complex)?;
    Ok((complex, involution))
}
