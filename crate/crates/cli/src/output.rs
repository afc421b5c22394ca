//! Output records and serialization. JSON when piped, aligned tables on a
//! terminal, CSV with a fixed documented column order.

use gamma4_core::bounds::BoundReport;
use gamma4_core::torusknot::TorusKnot;
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Serialize)]
pub struct KnotOut {
    pub p: u64,
    pub q: u64,
    pub unknot: bool,
}

impl From<&TorusKnot> for KnotOut {
    fn from(k: &TorusKnot) -> Self {
        KnotOut {
            p: k.p,
            q: k.q,
            unknot: k.is_unknot,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct InvariantsOut {
    pub signature: i64,
    pub arf: u8,
    pub determinant: u64,
    pub genus: u64,
    pub theta: u64,
    pub stretch: Option<u64>,
    pub stretch_cf: Option<u64>,
    pub upsilon: Option<i64>,
    pub upsilon_bar: Option<i64>,
    pub upsilon_underbar: Option<i64>,
    /// Coefficient map of the Alexander polynomial, exponent -> coefficient.
    pub alexander: Option<BTreeMap<i64, i64>>,
    /// λ(x,x) as "num/den" in [0,1), when the double cover has cyclic H₁ of
    /// order > 1 (even parameter present).
    pub linking_form: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct IntervalOut {
    pub lo: u64,
    pub hi: u64,
    pub exact: bool,
}

#[derive(Debug, Serialize)]
pub struct CertificateOut {
    pub name: String,
    pub value: i64,
    pub direction: String,
    pub citation: String,
}

#[derive(Debug, Serialize)]
pub struct BoundsOut {
    pub smooth: IntervalOut,
    pub topological: IntervalOut,
    pub certificates: Vec<CertificateOut>,
}

impl From<&BoundReport> for BoundsOut {
    fn from(r: &BoundReport) -> Self {
        BoundsOut {
            smooth: IntervalOut {
                lo: r.smooth.lo,
                hi: r.smooth.hi,
                exact: r.smooth.exact,
            },
            topological: IntervalOut {
                lo: r.topological.lo,
                hi: r.topological.hi,
                exact: r.topological.exact,
            },
            certificates: r
                .certificates
                .iter()
                .map(|c| CertificateOut {
                    name: c.name.clone(),
                    value: c.value,
                    direction: match c.direction {
                        gamma4_core::bounds::Direction::Lower => "lower".into(),
                        gamma4_core::bounds::Direction::Upper => "upper".into(),
                    },
                    citation: c.citation.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct DiagnosticsOut {
    pub floer_calibrated: bool,
    pub floer_skipped: bool,
    pub linkform_skipped: bool,
    pub elapsed_ms: u64,
}

/// The full single-knot record; absent values serialize as explicit nulls.
#[derive(Debug, Serialize)]
pub struct OutputRecord {
    pub knot: KnotOut,
    pub invariants: InvariantsOut,
    pub bounds: Option<BoundsOut>,
    pub diagnostics: DiagnosticsOut,
}

/// Fixed CSV column order for records and table rows.
pub const CSV_HEADER: &str = "p,q,signature,arf,determinant,genus,theta,stretch,upsilon,\
upsilon_bar,upsilon_underbar,smooth_lo,smooth_hi,smooth_exact,top_lo,top_hi,top_exact,error";

impl OutputRecord {
    pub fn csv_row(&self) -> String {
        fn opt<T: std::fmt::Display>(v: &Option<T>) -> String {
            v.as_ref().map(|x| x.to_string()).unwrap_or_default()
        }
        let (slo, shi, sex, tlo, thi, tex) = match &self.bounds {
            Some(b) => (
                b.smooth.lo.to_string(),
                b.smooth.hi.to_string(),
                b.smooth.exact.to_string(),
                b.topological.lo.to_string(),
                b.topological.hi.to_string(),
                b.topological.exact.to_string(),
            ),
            None => Default::default(),
        };
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},",
            self.knot.p,
            self.knot.q,
            self.invariants.signature,
            self.invariants.arf,
            self.invariants.determinant,
            self.invariants.genus,
            self.invariants.theta,
            opt(&self.invariants.stretch),
            opt(&self.invariants.upsilon),
            opt(&self.invariants.upsilon_bar),
            opt(&self.invariants.upsilon_underbar),
            slo,
            shi,
            sex,
            tlo,
            thi,
            tex
        )
    }

    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let k = &self.knot;
        let inv = &self.invariants;
        let mut push = |k: &str, v: String| out.push_str(&format!("{k:<18} {v}\n"));
        push(
            "knot",
            format!(
                "T({},{}){}",
                k.p,
                k.q,
                if k.unknot { " (unknot)" } else { "" }
            ),
        );
        push("genus", inv.genus.to_string());
        push("determinant", inv.determinant.to_string());
        push("signature", inv.signature.to_string());
        push("arf", inv.arf.to_string());
        push("theta", inv.theta.to_string());
        push("stretch", display_opt(&inv.stretch));
        push("stretch_cf", display_opt(&inv.stretch_cf));
        push("upsilon", display_opt(&inv.upsilon));
        push("upsilon_bar", display_opt(&inv.upsilon_bar));
        push("upsilon_underbar", display_opt(&inv.upsilon_underbar));
        if let Some(alex) = &inv.alexander {
            let terms: Vec<String> = alex.iter().map(|(e, c)| format!("{e}:{c}")).collect();
            push("alexander", terms.join(" "));
        }
        if let Some(lf) = &inv.linking_form {
            push("linking_form", lf.clone());
        }
        if let Some(b) = &self.bounds {
            push(
                "gamma4 (smooth)",
                format!(
                    "[{}, {}]{}",
                    b.smooth.lo,
                    b.smooth.hi,
                    exact_tag(b.smooth.exact)
                ),
            );
            push(
                "gamma4 (top)",
                format!(
                    "[{}, {}]{}",
                    b.topological.lo,
                    b.topological.hi,
                    exact_tag(b.topological.exact)
                ),
            );
            for c in &b.certificates {
                push(
                    &format!("  {} {}", c.name, c.direction),
                    format!("{}  ({})", c.value, c.citation),
                );
            }
        }
        out
    }
}

fn exact_tag(exact: bool) -> &'static str {
    if exact {
        " exact"
    } else {
        ""
    }
}

fn display_opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref()
        .map(|x| x.to_string())
        .unwrap_or_else(|| "null".into())
}

/// Structured error payload with a stable shape for automation.
#[derive(Debug, Serialize)]
pub struct ErrorOut {
    pub error: String,
    pub kind: String,
}
