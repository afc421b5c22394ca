//! Staircase complexes of L-space knots from their Alexander polynomials.

use super::complex::{CfkComplex, Generator, Involution};
use super::FloerError;
use crate::torusknot::{self, LaurentPoly, TorusKnot};

/// Build the staircase complex and its reflection involution for a torus
/// knot. Fails with `NotStaircase` if the polynomial does not have the
/// alternating ±1 shape (never the case for torus knots).
pub fn staircase(knot: &TorusKnot) -> Result<(CfkComplex, Involution), FloerError> {
    if knot.is_unknot {
        return staircase_from_gaps(&[]);
    }
    let delta = torusknot::alexander(knot).map_err(|e| FloerError::NotAComplex(e.to_string()))?;
    staircase_from_alexander(&delta)
}

/// Staircase from any L-space-shaped symmetric Laurent polynomial.
pub fn staircase_from_alexander(
    delta: &LaurentPoly,
) -> Result<(CfkComplex, Involution), FloerError> {
    let gaps: Vec<u64> = delta.positive_support().iter().map(|e| *e as u64).collect();
    let m = gaps.len();
    // alternating-sign check: top coefficient +1, then -1, ..., constant (-1)^m
    let mut sign = 1i64;
    for e in delta.positive_support().iter().rev() {
        if delta.coeff(*e) != sign {
            return Err(FloerError::NotStaircase);
        }
        sign = -sign;
    }
    if delta.coeff(0) != if m.is_multiple_of(2) { 1 } else { -1 } {
        return Err(FloerError::NotStaircase);
    }
    if !delta.is_symmetric() || delta.terms().count() != 2 * m + 1 {
        return Err(FloerError::NotStaircase);
    }
    staircase_from_gaps(&gaps)
}

/// Staircase from the gap exponents 0 < n_1 < ... < n_m directly.
///
/// Generators sit at the nonzero Alexander exponents a_0 > ... > a_{2m}
/// (a_j = n_{m-j} for j < m, a_m = 0, a_{m+s} = -n_s); odd positions carry
/// the differential ∂y_{2j+1} = U^{a_{2j}-a_{2j+1}} y_{2j} +
/// U^{a_{2j+1}-a_{2j+2}} y_{2j+2}. Absolute δ-gradings come from the
/// normalization H(CFK/(V=1)) ≅ F[U] with its generator in degree 0.
pub fn staircase_from_gaps(gaps: &[u64]) -> Result<(CfkComplex, Involution), FloerError> {
    let m = gaps.len();
    if gaps.windows(2).any(|w| w[0] >= w[1]) || gaps.first().is_some_and(|n| *n == 0) {
        return Err(FloerError::NotStaircase);
    }
    if m == 0 {
        let gens = vec![Generator {
            name: "x0".into(),
            delta: 0,
        }];
        let complex = CfkComplex::new(gens, vec![Vec::new()])?;
        return Ok((complex, Involution::identity(1)));
    }
    let genus = *gaps.last().unwrap() as i64;

    // exponents descending: n_m, ..., n_1, 0, -n_1, ..., -n_m
    let mut exps: Vec<i64> = Vec::with_capacity(2 * m + 1);
    exps.extend(gaps.iter().rev().map(|n| *n as i64));
    exps.push(0);
    exps.extend(gaps.iter().map(|n| -(*n as i64)));

    // propagate the two one-variable gradings along the chain
    let count = 2 * m + 1;
    let mut gr_u = vec![0i64; count];
    let mut gr_v = vec![0i64; count];
    gr_v[0] = -2 * genus;
    for j in 0..m {
        let alpha = exps[2 * j] - exps[2 * j + 1];
        let beta = exps[2 * j + 1] - exps[2 * j + 2];
        gr_u[2 * j + 1] = gr_u[2 * j] + 1 - 2 * alpha;
        gr_u[2 * j + 2] = gr_u[2 * j] - 2 * alpha;
        gr_v[2 * j + 1] = gr_v[2 * j] + 1;
        gr_v[2 * j + 2] = gr_v[2 * j] + 2 * beta;
    }

    let name = |j: usize| -> String {
        use std::cmp::Ordering::*;
        match j.cmp(&m) {
            Less => format!("x1_{}", m - j),
            Equal => "x0".into(),
            Greater => format!("x2_{}", j - m),
        }
    };
    let gens: Vec<Generator> = (0..count)
        .map(|j| {
            let sum = gr_u[j] + gr_v[j];
            debug_assert_eq!(sum % 2, 0);
            Generator {
                name: name(j),
                delta: sum / 2,
            }
        })
        .collect();

    let mut d = vec![Vec::new(); count];
    for j in 0..m {
        let alpha = (exps[2 * j] - exps[2 * j + 1]) as u32;
        let beta = (exps[2 * j + 1] - exps[2 * j + 2]) as u32;
        d[2 * j + 1] = vec![(2 * j, alpha), (2 * j + 2, beta)];
    }
    let complex = CfkComplex::new(gens, d)?;

    // involution: reflection through the central generator
    let iota = Involution::from_entries((0..count).map(|j| vec![(count - 1 - j, 0u32)]).collect());
    iota.validate(&complex)?;
    Ok((complex, iota))
}
