//! Quadratic-residue obstruction to locally flat Möbius bands, and the
//! empirical density experiment behind it.

use crate::arith::{self, ArithError};
use crate::torusknot::TorusKnot;
use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ObstructError {
    #[error("the obstruction needs even p with p/2 not a perfect square, got p = {0}")]
    Inapplicable(u64),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("witness primes disagree for residue class {class} mod {modulus}")]
    WitnessDisagreement { class: u64, modulus: u64 },
    #[error("density sweep to N = {n} exceeds the sieve cap {cap}")]
    SieveTooLarge { n: u64, cap: u64 },
}

/// Largest N a density sweep will sieve; the spf table is 4 bytes per entry.
pub const DENSITY_SIEVE_CAP: u64 = 50_000_000;

/// The residue classes r mod 2p such that both ±p/2 are quadratic
/// nonresidues modulo every prime ≡ r (mod 2p).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObstructionResidues {
    pub p: u64,
    pub modulus: u64,
    pub classes: Vec<u64>,
    /// Classes found outside the r ≡ 1 mod 4 construction, if any ever are.
    pub non_canonical_classes: Vec<u64>,
}

/// Verdict of the locally-flat Möbius obstruction. "Not obstructed" is not a
/// claim that a band exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TopVerdict {
    Obstructed,
    NotObstructedByThisTest,
    Inapplicable,
}

/// Compute the obstructing residue classes mod 2p for even p with p/2 not a
/// perfect square. Each class verdict is decided on the smallest witness
/// prime and re-verified on two more.
pub fn obstructing_residues(p: u64) -> Result<ObstructionResidues, ObstructError> {
    if !p.is_multiple_of(2) || p == 0 || arith::is_perfect_square_u64(p / 2) {
        return Err(ObstructError::Inapplicable(p));
    }
    let modulus = 2 * p;
    let half = p / 2;
    let mut classes = Vec::new();
    let mut non_canonical = Vec::new();
    for r in (1..modulus).step_by(2) {
        if arith::gcd_u64(r, modulus) != 1 {
            continue;
        }
        let witnesses = arith::primes_in_class(r, modulus, 3)?;
        let verdicts: Vec<bool> = witnesses
            .iter()
            .map(|&s| {
                arith::jacobi_u64(half as i64, s) == -1
                    && arith::jacobi_u64(-(half as i64), s) == -1
            })
            .collect();
        if verdicts.windows(2).any(|w| w[0] != w[1]) {
            return Err(ObstructError::WitnessDisagreement { class: r, modulus });
        }
        if verdicts[0] {
            classes.push(r);
            if r % 4 != 1 {
                non_canonical.push(r);
            }
        }
    }
    if classes.is_empty() {
        // ruled out by the character argument whenever p/2 is not a square
        return Err(ObstructError::Inapplicable(p));
    }
    Ok(ObstructionResidues {
        p,
        modulus,
        classes,
        non_canonical_classes: non_canonical,
    })
}

/// Locally-flat Möbius-band obstruction for a torus knot: obstructed when
/// the odd parameter has an odd-power prime factor in an obstructing class
/// mod 2p.
pub fn lf_mobius_obstructed(knot: &TorusKnot) -> Result<TopVerdict, ObstructError> {
    lf_mobius_obstructed_with_limit(knot, arith::DEFAULT_FACTOR_DIGITS)
}

pub fn lf_mobius_obstructed_with_limit(
    knot: &TorusKnot,
    max_digits: u32,
) -> Result<TopVerdict, ObstructError> {
    if knot.p % 2 == 1 && knot.q % 2 == 1 {
        return Ok(TopVerdict::Inapplicable);
    }
    let (p, q) = knot.even_first();
    let residues = match obstructing_residues(p) {
        Ok(r) => r,
        Err(ObstructError::Inapplicable(_)) => return Ok(TopVerdict::Inapplicable),
        Err(e) => return Err(e),
    };
    let factorization = arith::factorize_with_limit(&BigUint::from(q), max_digits)?;
    for s in factorization.odd_power_primes() {
        let class = (s % BigUint::from(residues.modulus)).to_u64().unwrap();
        if residues.classes.binary_search(&class).is_ok() {
            return Ok(TopVerdict::Obstructed);
        }
    }
    Ok(TopVerdict::NotObstructedByThisTest)
}

/// Exact counts from an exhaustive scan of q ≤ N coprime to p.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DensityReport {
    pub p: u64,
    pub n: u64,
    pub eligible: u64,
    pub obstructed: u64,
    /// Non-obstructed fraction, exact: (eligible - obstructed) / eligible.
    pub ratio_num: BigUint,
    pub ratio_den: BigUint,
    /// Mertens-type product ∏ s/(s+1) over obstructing-class primes ≤ N.
    pub mertens_num: BigUint,
    pub mertens_den: BigUint,
    /// Non-obstructed ratios at N/100 and N/10 checkpoints, for the
    /// monotonicity check.
    pub checkpoints: Vec<(u64, u64, u64)>,
    /// Ratio is nonincreasing across the checkpoints and N.
    pub monotone_nonincreasing: bool,
}

impl DensityReport {
    pub fn ratio_f64(&self) -> f64 {
        big_ratio_f64(&self.ratio_num, &self.ratio_den)
    }

    pub fn mertens_f64(&self) -> f64 {
        big_ratio_f64(&self.mertens_num, &self.mertens_den)
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.p,
            self.n,
            self.eligible,
            self.obstructed,
            self.ratio_num,
            self.ratio_den,
            self.mertens_num,
            self.mertens_den
        )
    }
}

fn big_ratio_f64(num: &BigUint, den: &BigUint) -> f64 {
    // exact enough for reporting: scale into f64 range via bit lengths
    let shift = den.bits().saturating_sub(53);
    let n = (num >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (den >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Smallest-prime-factor sieve; spf[x] = least prime dividing x (x ≥ 2).
fn spf_sieve(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

/// Exhaustive density scan. Exact rational ratio and Mertens product; the
/// report carries checkpoint ratios at N/100 and N/10.
pub fn density_experiment(p: u64, n: u64) -> Result<DensityReport, ObstructError> {
    if n == 0 {
        return Err(ObstructError::Arith(ArithError::NotPositive));
    }
    if n > DENSITY_SIEVE_CAP {
        return Err(ObstructError::SieveTooLarge { n, cap: DENSITY_SIEVE_CAP });
    }
    let residues = obstructing_residues(p)?;
    let modulus = residues.modulus;
    let spf = spf_sieve(n as usize);

    let checkpoints_at: Vec<u64> = [n / 100, n / 10].into_iter().filter(|c| *c >= 10).collect();
    let mut checkpoints: Vec<(u64, u64, u64)> = Vec::new();

    let mut eligible = 0u64;
    let mut obstructed = 0u64;
    for q in 1..=n {
        if arith::gcd_u64(q % p, p) == 1 {
            eligible += 1;
            let mut m = q;
            let mut hit = false;
            while m > 1 {
                let s = spf[m as usize] as u64;
                let mut e = 0u32;
                while m % s == 0 {
                    m /= s;
                    e += 1;
                }
                if e % 2 == 1 && residues.classes.binary_search(&(s % modulus)).is_ok() {
                    hit = true;
                    // keep dividing to finish the factorization loop cheaply
                }
            }
            if hit {
                obstructed += 1;
            }
        }
        if checkpoints_at.contains(&q) {
            checkpoints.push((q, eligible, obstructed));
        }
    }

    // exact Mertens product over primes ≤ N in the obstructing classes
    let mut mertens_num = BigUint::from(1u32);
    let mut mertens_den = BigUint::from(1u32);
    for s in 2..=n {
        if spf[s as usize] as u64 == s && residues.classes.binary_search(&(s % modulus)).is_ok() {
            mertens_num *= s;
            mertens_den *= s + 1;
        }
    }

    let mut ratios: Vec<(BigUint, BigUint)> = checkpoints
        .iter()
        .map(|(_, e, o)| (BigUint::from(e - o), BigUint::from(*e)))
        .collect();
    ratios.push((
        BigUint::from(eligible - obstructed),
        BigUint::from(eligible),
    ));
    let monotone = ratios
        .windows(2)
        .all(|w| &w[0].0 * &w[1].1 >= &w[1].0 * &w[0].1);

    Ok(DensityReport {
        p,
        n,
        eligible,
        obstructed,
        ratio_num: BigUint::from(eligible - obstructed),
        ratio_den: BigUint::from(eligible),
        mertens_num,
        mertens_den,
        checkpoints,
        monotone_nonincreasing: monotone,
    })
}

/// |ratio - mertens| / mertens as an exact rational comparison against a
/// percentage bound; used by the acceptance suite.
pub fn ratio_within_relative(report: &DensityReport, percent_num: u64, percent_den: u64) -> bool {
    let r = BigInt::from(report.ratio_num.clone()) * BigInt::from(report.mertens_den.clone());
    let m = BigInt::from(report.mertens_num.clone()) * BigInt::from(report.ratio_den.clone());
    let diff = (r - &m).magnitude().clone();
    // diff/m ≤ percent_num/percent_den  <=>  diff·percent_den ≤ m·percent_num
    diff * percent_den <= m.magnitude() * percent_num
}
