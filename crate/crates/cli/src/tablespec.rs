//! Family specifications for the `table` subcommand, e.g. "p=4 q=5..99 odd".

use anyhow::{anyhow, bail, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableSpec {
    pub p: u64,
    pub q_from: u64,
    pub q_to: u64,
    pub parity: Option<Parity>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

impl TableSpec {
    pub fn parse(spec: &str) -> Result<TableSpec> {
        let mut p = None;
        let mut q_range = None;
        let mut parity = None;
        for token in spec.split_whitespace() {
            if let Some(v) = token.strip_prefix("p=") {
                p = Some(
                    v.parse::<u64>()
                        .map_err(|_| anyhow!("bad p in '{token}'"))?,
                );
            } else if let Some(v) = token.strip_prefix("q=") {
                let (a, b) = v
                    .split_once("..")
                    .ok_or_else(|| anyhow!("expected q=<from>..<to>, got '{token}'"))?;
                q_range = Some((
                    a.parse::<u64>()
                        .map_err(|_| anyhow!("bad q range in '{token}'"))?,
                    b.parse::<u64>()
                        .map_err(|_| anyhow!("bad q range in '{token}'"))?,
                ));
            } else if token == "odd" {
                parity = Some(Parity::Odd);
            } else if token == "even" {
                parity = Some(Parity::Even);
            } else {
                bail!("unrecognized table token '{token}'");
            }
        }
        let p = p.ok_or_else(|| anyhow!("table spec needs p=<n>"))?;
        let (q_from, q_to) = q_range.ok_or_else(|| anyhow!("table spec needs q=<a>..<b>"))?;
        if q_from > q_to {
            bail!("empty q range");
        }
        Ok(TableSpec {
            p,
            q_from,
            q_to,
            parity,
        })
    }

    pub fn knots(&self) -> Vec<u64> {
        (self.q_from..=self.q_to)
            .filter(|q| match self.parity {
                Some(Parity::Odd) => q % 2 == 1,
                Some(Parity::Even) => q % 2 == 0,
                None => true,
            })
            .collect()
    }
}
