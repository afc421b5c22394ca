//! Torus knots T(p,q): Alexander polynomial, semigroup, stretch, and the
//! pinch-move calculus.

use crate::arith::{self, ArithError};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KnotError {
    #[error("T({p},{q}) is not a knot: gcd(p,q) = {g} != 1")]
    NotAKnot { p: u64, q: u64, g: u64 },
    #[error("operation needs a nontrivial torus knot, got the unknot")]
    UnknotInput,
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// A validated torus knot. Parameters are kept in input order; the symmetry
/// T(p,q) = T(q,p) is honored by the operations, not by the constructor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TorusKnot {
    pub p: u64,
    pub q: u64,
    pub is_unknot: bool,
}

impl fmt::Display for TorusKnot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unknot {
            write!(f, "T({},{}) [unknot]", self.p, self.q)
        } else {
            write!(f, "T({},{})", self.p, self.q)
        }
    }
}

impl TorusKnot {
    pub fn new(p: u64, q: u64) -> Result<Self, KnotError> {
        let g = arith::gcd_u64(p, q);
        if g != 1 {
            return Err(KnotError::NotAKnot { p, q, g });
        }
        Ok(TorusKnot {
            p,
            q,
            is_unknot: p.min(q) <= 1,
        })
    }

    /// Same knot with coordinates swapped.
    pub fn swapped(&self) -> TorusKnot {
        TorusKnot {
            p: self.q,
            q: self.p,
            is_unknot: self.is_unknot,
        }
    }

    /// Equality up to the T(p,q) = T(q,p) symmetry; all unknots are equal.
    pub fn same_knot(&self, other: &TorusKnot) -> bool {
        if self.is_unknot || other.is_unknot {
            return self.is_unknot == other.is_unknot;
        }
        (self.p, self.q) == (other.p, other.q) || (self.p, self.q) == (other.q, other.p)
    }

    /// Seifert genus (p-1)(q-1)/2.
    pub fn genus(&self) -> u64 {
        if self.is_unknot {
            return 0;
        }
        (self.p - 1) * (self.q - 1) / 2
    }

    /// Knot determinant |Δ(-1)|: q if p is even, p if q is even, 1 otherwise.
    pub fn determinant(&self) -> u64 {
        if self.p.is_multiple_of(2) {
            self.q
        } else if self.q.is_multiple_of(2) {
            self.p
        } else {
            1
        }
    }

    /// The coordinates ordered with the even one first, if there is one.
    pub fn even_first(&self) -> (u64, u64) {
        if self.p.is_multiple_of(2) {
            (self.p, self.q)
        } else {
            (self.q, self.p)
        }
    }
}

/// The numerical semigroup <p, q>, stored as its finite gap list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Semigroup {
    pub generators: (u64, u64),
    /// Sorted nonnegative integers not of the form ap + bq.
    pub gaps: Vec<u64>,
    /// Largest gap; membership above it is constant true.
    pub frobenius: Option<u64>,
}

impl Semigroup {
    pub fn contains(&self, x: u64) -> bool {
        match self.frobenius {
            None => true,
            Some(f) => x > f || self.gaps.binary_search(&x).is_err(),
        }
    }
}

/// Gap set of <p, q> by an exhaustive reachability sweep up to the Frobenius
/// number pq - p - q.
pub fn semigroup(knot: &TorusKnot) -> Semigroup {
    let (p, q) = (knot.p.min(knot.q), knot.p.max(knot.q));
    if knot.is_unknot {
        return Semigroup {
            generators: (p, q),
            gaps: Vec::new(),
            frobenius: None,
        };
    }
    let frobenius = p * q - p - q;
    let bound = (frobenius + 1) as usize;
    let mut member = vec![false; bound + 1];
    member[0] = true;
    for x in 1..=bound {
        let xp = x as u64;
        member[x] = (xp >= p && member[x - p as usize]) || (xp >= q && member[x - q as usize]);
    }
    let gaps: Vec<u64> = (0..=bound as u64)
        .filter(|&x| !member[x as usize])
        .collect();
    debug_assert_eq!(gaps.last().copied(), Some(frobenius));
    Semigroup {
        generators: (p, q),
        gaps,
        frobenius: Some(frobenius),
    }
}

/// Sparse symmetric integer Laurent polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, i64>,
}

impl LaurentPoly {
    pub fn from_coeffs(pairs: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut coeffs = BTreeMap::new();
        for (e, c) in pairs {
            if c != 0 {
                coeffs.insert(e, c);
            }
        }
        LaurentPoly { coeffs }
    }

    pub fn coeff(&self, exponent: i64) -> i64 {
        self.coeffs.get(&exponent).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> i64 {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.coeffs.iter().map(|(e, c)| (*e, *c))
    }

    pub fn is_symmetric(&self) -> bool {
        self.coeffs.iter().all(|(e, c)| self.coeff(-e) == *c)
    }

    pub fn eval_at_one(&self) -> i64 {
        self.coeffs.values().sum()
    }

    pub fn eval_at_minus_one(&self) -> i64 {
        self.coeffs
            .iter()
            .map(|(e, c)| if e.rem_euclid(2) == 0 { *c } else { -*c })
            .sum()
    }

    /// Exponents of the nonzero terms of positive degree, ascending. For an
    /// L-space knot polynomial these are the gap exponents n_1 < ... < n_m.
    pub fn positive_support(&self) -> Vec<i64> {
        self.coeffs.keys().copied().filter(|e| *e > 0).collect()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.coeffs {
            let sign = if *c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.abs();
            let body = match (*e, mag) {
                (0, m) => format!("{m}"),
                (1, 1) => "t".to_string(),
                (1, m) => format!("{m}t"),
                (e, 1) => format!("t^{e}"),
                (e, m) => format!("{m}t^{e}"),
            };
            if first {
                write!(f, "{sign}{body}")?;
                first = false;
            } else {
                write!(f, " {sign} {body}")?;
            }
        }
        Ok(())
    }
}

/// Alexander polynomial of a nontrivial torus knot.
///
/// The primary route reads the coefficients off semigroup membership
/// transitions; debug builds cross-check against exact polynomial division of
/// (t-1)(t^{pq}-1) by (t^p-1)(t^q-1).
pub fn alexander(knot: &TorusKnot) -> Result<LaurentPoly, KnotError> {
    if knot.is_unknot {
        return Err(KnotError::UnknotInput);
    }
    let sg = semigroup(knot);
    let poly = alexander_from_semigroup(knot, &sg);
    debug_assert_eq!(poly, alexander_by_division(knot).unwrap());
    Ok(poly)
}

/// Coefficient of t^i is +1/-1/0 according to the semigroup membership
/// transition between d+i-1 and d+i, where d is the genus.
pub fn alexander_from_semigroup(knot: &TorusKnot, sg: &Semigroup) -> LaurentPoly {
    let d = knot.genus() as i64;
    let member = |n: i64| -> bool { n >= 0 && sg.contains(n as u64) };
    let mut pairs = Vec::new();
    for i in -d..=d {
        let prev = member(d + i - 1);
        let cur = member(d + i);
        let c = match (prev, cur) {
            (false, true) => 1,
            (true, false) => -1,
            _ => 0,
        };
        if c != 0 {
            pairs.push((i, c));
        }
    }
    LaurentPoly::from_coeffs(pairs)
}

/// Independent route: exact division of (t-1)(t^{pq}-1) by (t^p-1)(t^q-1),
/// recentred to the symmetric Laurent form.
pub fn alexander_by_division(knot: &TorusKnot) -> Result<LaurentPoly, KnotError> {
    if knot.is_unknot {
        return Err(KnotError::UnknotInput);
    }
    let (p, q) = (knot.p as usize, knot.q as usize);
    let pq = p * q;
    // numerator (t-1)(t^{pq}-1) = t^{pq+1} - t^{pq} - t + 1
    let mut num = vec![0i64; pq + 2];
    num[0] = 1;
    num[1] = -1;
    num[pq] = -1;
    num[pq + 1] = 1;
    // denominator (t^p-1)(t^q-1) = t^{p+q} - t^p - t^q + 1
    let mut den = vec![0i64; p + q + 1];
    den[0] = 1;
    den[p] += -1;
    den[q] += -1;
    den[p + q] += 1;

    let quot = poly_divide_exact(&num, &den);
    let d = knot.genus() as i64;
    Ok(LaurentPoly::from_coeffs(
        quot.iter().enumerate().map(|(k, c)| (k as i64 - d, *c)),
    ))
}

/// Exact division of integer polynomials (ascending coefficients); panics if
/// the division leaves a remainder, which would mean the inputs are wrong.
fn poly_divide_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    assert!(dn >= dd);
    let lead = den[dd];
    assert_eq!(lead.abs(), 1);
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; dn - dd + 1];
    for k in (0..=dn - dd).rev() {
        let c = rem[k + dd] / lead;
        quot[k] = c;
        if c != 0 {
            for (j, dj) in den.iter().enumerate() {
                rem[k + j] = rem[k + j].checked_sub(c.checked_mul(*dj).unwrap()).unwrap();
            }
        }
    }
    assert!(rem.iter().all(|c| *c == 0), "division left a remainder");
    quot
}

/// Stretch of a torus knot: defined only when the constant coefficient of the
/// Alexander polynomial is -1, in which case it is the exponent of the first
/// nonzero term of positive degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Stretch {
    Defined(u64),
    /// Constant coefficient is +1; the stretch bound does not apply.
    Undefined,
}

pub fn stretch(knot: &TorusKnot) -> Result<Stretch, KnotError> {
    let delta = alexander(knot)?;
    Ok(stretch_of_poly(&delta))
}

pub fn stretch_of_poly(delta: &LaurentPoly) -> Stretch {
    if delta.coeff(0) != -1 {
        return Stretch::Undefined;
    }
    let n1 = delta
        .positive_support()
        .first()
        .copied()
        .expect("nontrivial polynomial");
    Stretch::Defined(n1 as u64)
}

/// Continued-fraction route to the stretch: floor((a_k - 1)/2) + 1 from the
/// expansion q/p = [a_0, ..., a_k] with a_k > 1, applicable only when k >= 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StretchCf {
    Applicable(u64),
    /// The expansion has fewer than two terms past a_0.
    Inapplicable,
}

pub fn stretch_cf(knot: &TorusKnot) -> Result<StretchCf, KnotError> {
    if knot.is_unknot {
        return Err(KnotError::UnknotInput);
    }
    let (small, large) = (knot.p.min(knot.q), knot.p.max(knot.q));
    let cf = arith::continued_fraction(&large.into(), &small.into())?;
    let k = cf.terms.len() - 1;
    if k < 2 {
        return Ok(StretchCf::Inapplicable);
    }
    let ak: u64 = u64::try_from(cf.terms.last().unwrap().clone()).expect("small term");
    Ok(StretchCf::Applicable((ak - 1) / 2 + 1))
}

/// Sign of a pinch move, per the convention that the move T(p,q) -> T(r,s) is
/// positive when rq - sp > 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PinchSign {
    Positive,
    Negative,
}

/// One pinch move with its modular certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PinchStep {
    pub from: TorusKnot,
    pub to: TorusKnot,
    /// t ≡ -q^{-1} (mod p), t in [0, p-1]
    pub t: u64,
    /// h ≡ p^{-1} (mod q), h in [0, q-1]
    pub h: u64,
    pub sign: PinchSign,
}

/// Apply one pinch move to a nontrivial torus knot.
pub fn pinch_once(knot: &TorusKnot) -> Result<PinchStep, KnotError> {
    if knot.is_unknot {
        return Err(KnotError::UnknotInput);
    }
    let (p, q) = (knot.p, knot.q);
    let q_inv = arith::mod_inverse_u64(q % p, p).expect("coprime");
    let t = (p - q_inv) % p;
    let h = arith::mod_inverse_u64(p % q, q).expect("coprime");
    let r = p.abs_diff(2 * t);
    let s = q.abs_diff(2 * h);
    // A zero coordinate only arises as T(0,1), which is the unknot.
    let to = if r == 0 || s == 0 {
        debug_assert_eq!(r.max(s), 1);
        TorusKnot {
            p: r,
            q: s,
            is_unknot: true,
        }
    } else {
        TorusKnot::new(r, s)?
    };
    let sign = if (r as i128) * (q as i128) - (s as i128) * (p as i128) > 0 {
        PinchSign::Positive
    } else {
        PinchSign::Negative
    };
    Ok(PinchStep {
        from: *knot,
        to,
        t,
        h,
        sign,
    })
}

/// Pinch until the unknot. Each move strictly decreases p + q, so this
/// terminates.
pub fn pinch_sequence(knot: &TorusKnot) -> Vec<PinchStep> {
    let mut steps = Vec::new();
    let mut current = *knot;
    while !current.is_unknot {
        let step = pinch_once(&current).expect("nontrivial knot");
        current = step.to;
        steps.push(step);
    }
    steps
}

/// Number of pinch moves to reach the unknot.
pub fn pinch_number(knot: &TorusKnot) -> u64 {
    pinch_sequence(knot).len() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn knot(p: u64, q: u64) -> TorusKnot {
        TorusKnot::new(p, q).unwrap()
    }

    #[test]
    fn constructor_validates() {
        assert!(!knot(4, 9).is_unknot);
        assert!(matches!(
            TorusKnot::new(4, 6),
            Err(KnotError::NotAKnot { g: 2, .. })
        ));
        assert!(knot(1, 5).is_unknot);
        assert!(knot(0, 1).is_unknot);
        assert!(TorusKnot::new(0, 0).is_err());
    }

    #[test]
    fn genus_examples() {
        assert_eq!(knot(3, 5).genus(), 4);
        assert_eq!(knot(4, 9).genus(), 12);
        assert_eq!(knot(1, 7).genus(), 0);
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(knot(4, 9).determinant(), 9);
        assert_eq!(knot(3, 5).determinant(), 1);
        assert_eq!(knot(2, 7).determinant(), 7);
    }

    #[test]
    fn semigroup_of_t35() {
        let sg = semigroup(&knot(3, 5));
        assert_eq!(sg.gaps, vec![1, 2, 4, 7]);
        let members: Vec<u64> = (0..10).filter(|&x| sg.contains(x)).collect();
        assert_eq!(members, vec![0, 3, 5, 6, 8, 9]);
        assert!(sg.contains(100));
    }

    #[test]
    fn semigroup_edge_cases() {
        assert_eq!(semigroup(&knot(2, 3)).gaps, vec![1]);
        assert!(semigroup(&knot(1, 9)).gaps.is_empty());
    }

    #[test]
    fn alexander_t35_matches_worked_example() {
        let delta = alexander(&knot(3, 5)).unwrap();
        let expected = LaurentPoly::from_coeffs([
            (-4, 1),
            (-3, -1),
            (-1, 1),
            (0, -1),
            (1, 1),
            (3, -1),
            (4, 1),
        ]);
        assert_eq!(delta, expected);
    }

    #[test]
    fn alexander_small_cases() {
        let t23 = alexander(&knot(2, 3)).unwrap();
        assert_eq!(t23, LaurentPoly::from_coeffs([(-1, 1), (0, -1), (1, 1)]));
        let t45 = alexander(&knot(4, 5)).unwrap();
        let expected = LaurentPoly::from_coeffs([
            (-6, 1),
            (-5, -1),
            (-2, 1),
            (0, -1),
            (2, 1),
            (5, -1),
            (6, 1),
        ]);
        assert_eq!(t45, expected);
    }

    #[test]
    fn alexander_routes_agree() {
        for p in 2u64..=12 {
            for q in (p + 1)..=13 {
                if arith::gcd_u64(p, q) != 1 {
                    continue;
                }
                let k = knot(p, q);
                assert_eq!(
                    alexander_from_semigroup(&k, &semigroup(&k)),
                    alexander_by_division(&k).unwrap(),
                    "T({p},{q})"
                );
            }
        }
    }

    #[test]
    fn stretch_examples() {
        assert_eq!(stretch(&knot(4, 7)).unwrap(), Stretch::Defined(2));
        assert_eq!(stretch(&knot(4, 9)).unwrap(), Stretch::Undefined);
        assert_eq!(stretch(&knot(2, 3)).unwrap(), Stretch::Defined(1));
    }

    #[test]
    fn stretch_cf_examples() {
        assert_eq!(stretch_cf(&knot(4, 7)).unwrap(), StretchCf::Applicable(2));
        assert_eq!(stretch_cf(&knot(5, 8)).unwrap(), StretchCf::Applicable(1));
        assert_eq!(stretch_cf(&knot(4, 9)).unwrap(), StretchCf::Inapplicable);
    }

    #[test]
    fn pinch_examples() {
        let step = pinch_once(&knot(4, 9)).unwrap();
        assert_eq!((step.t, step.h), (3, 7));
        assert!(step.to.same_knot(&knot(2, 5)));
        assert_eq!(step.sign, PinchSign::Negative);

        let step = pinch_once(&knot(5, 9)).unwrap();
        assert_eq!((step.t, step.h), (1, 2));
        assert!(step.to.same_knot(&knot(3, 5)));
        assert_eq!(step.sign, PinchSign::Positive);

        let step = pinch_once(&knot(2, 5)).unwrap();
        assert_eq!((step.t, step.h), (1, 3));
        assert!(step.to.is_unknot);
        assert_eq!(step.sign, PinchSign::Negative);

        assert!(pinch_once(&knot(1, 5)).is_err());
    }

    #[test]
    fn pinch_sequences() {
        let seq = pinch_sequence(&knot(4, 9));
        assert_eq!(seq.len(), 2);
        assert!(seq[0].to.same_knot(&knot(2, 5)));
        assert!(seq[1].to.is_unknot);

        assert_eq!(pinch_number(&knot(8, 7)), 3);
        for q in [2u64, 4, 5, 7, 8, 10, 11] {
            assert_eq!(pinch_number(&knot(3, q)), 1, "T(3,{q})");
        }
    }

    #[test]
    fn pinch_number_closed_forms() {
        assert_eq!(pinch_number(&knot(4, 11)), 2);
        assert_eq!(pinch_number(&knot(5, 11)), 2);
        assert_eq!(pinch_number(&knot(8, 9)), 4);
    }

    #[test]
    fn laurent_display_is_readable() {
        let delta = alexander(&knot(2, 3)).unwrap();
        assert_eq!(delta.to_string(), "t^-1 - 1 + t");
    }
}
