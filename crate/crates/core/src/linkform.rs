//! Goeritz matrices of T(p,q) for even p, and the linking form of the double
//! branched cover Σ(2,p,q). All arithmetic is exact.

use crate::torusknot::TorusKnot;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinkformError {
    #[error("the Goeritz construction needs one even parameter, T({p},{q}) has none")]
    NeedsEvenP { p: u64, q: u64 },
    #[error("Goeritz matrix of size {size} exceeds the cap {cap}")]
    MatrixTooLarge { size: usize, cap: usize },
    #[error("internal contract violation: {0}")]
    InternalError(String),
}

/// Default size cap for explicit Goeritz matrices; the linking form itself
/// has a closed form, the matrix path exists for validation.
pub const DEFAULT_MATRIX_CAP: usize = 2000;

/// The Goeritz matrix of the checkerboard surface of T(p,q), p even.
///
/// Block layout of size N = (pq-2q+2)/2 = 1 + q(p-2)/2: a corner entry q,
/// border vectors of -1 against the first block, and a tridiagonal body of
/// (p-2)/2 cycle-adjacency blocks A (size q) coupled by -I.
#[derive(Debug, Clone)]
pub struct GoeritzData {
    pub knot: TorusKnot,
    pub size: usize,
    pub matrix: Vec<Vec<BigInt>>,
    pub determinant: BigInt,
}

/// λ(x,x) ∈ Q/Z on a generator x of H₁(Σ(2,p,q)) ≅ Z/q, reduced into [0,1)
/// with denominator q.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinkingFormValue {
    pub group_order: u64,
    pub numerator: u64,
    pub denominator: u64,
}

fn even_odd(knot: &TorusKnot) -> Result<(u64, u64), LinkformError> {
    if knot.p.is_multiple_of(2) {
        Ok((knot.p, knot.q))
    } else if knot.q.is_multiple_of(2) {
        Ok((knot.q, knot.p))
    } else {
        Err(LinkformError::NeedsEvenP {
            p: knot.p,
            q: knot.q,
        })
    }
}

pub fn goeritz_matrix(knot: &TorusKnot) -> Result<GoeritzData, LinkformError> {
    goeritz_matrix_with_cap(knot, DEFAULT_MATRIX_CAP)
}

pub fn goeritz_matrix_with_cap(knot: &TorusKnot, cap: usize) -> Result<GoeritzData, LinkformError> {
    let (p, q) = even_odd(knot)?;
    if knot.is_unknot {
        // H₁ of the double cover is trivial; a 1×1 unit matrix presents it
        return Ok(GoeritzData {
            knot: *knot,
            size: 1,
            matrix: vec![vec![BigInt::one()]],
            determinant: BigInt::one(),
        });
    }
    let size = (1 + q * (p - 2) / 2) as usize;
    if size > cap {
        return Err(LinkformError::MatrixTooLarge { size, cap });
    }
    let qi = q as usize;
    let blocks = ((p - 2) / 2) as usize;
    let mut m = vec![vec![BigInt::zero(); size]; size];
    m[0][0] = BigInt::from(q);
    for b in 0..blocks {
        let base = 1 + b * qi;
        // cycle adjacency of C_q; for q <= 2 entries collapse, but q is odd
        for r in 0..qi {
            for c in [(r + 1) % qi, (r + qi - 1) % qi] {
                m[base + r][base + c] += 1;
            }
        }
        if b == 0 {
            for r in 0..qi {
                m[0][base + r] = BigInt::from(-1);
                m[base + r][0] = BigInt::from(-1);
            }
        } else {
            let prev = 1 + (b - 1) * qi;
            for r in 0..qi {
                m[prev + r][base + r] = BigInt::from(-1);
                m[base + r][prev + r] = BigInt::from(-1);
            }
        }
    }
    let determinant = bareiss_determinant(&m);
    if determinant.magnitude() != &q.into() {
        return Err(LinkformError::InternalError(format!(
            "det(G) = {determinant}, expected ±{q}"
        )));
    }
    Ok(GoeritzData {
        knot: *knot,
        size,
        matrix: m,
        determinant,
    })
}

impl GoeritzData {
    /// The explicit left vector (p/2, (p/2-1)×q, ..., 1×q) with vG = (q,0,...,0).
    pub fn witness_vector(&self) -> Vec<BigInt> {
        let (p, q) = even_odd(&self.knot).expect("validated");
        let mut v = Vec::with_capacity(self.size);
        v.push(BigInt::from(p / 2));
        for level in (1..p / 2).rev() {
            for _ in 0..q {
                v.push(BigInt::from(level));
            }
        }
        v
    }

    /// v · G as a row vector.
    pub fn left_multiply(&self, v: &[BigInt]) -> Vec<BigInt> {
        (0..self.size)
            .map(|c| (0..self.size).map(|r| &v[r] * &self.matrix[r][c]).sum())
            .collect()
    }
}

/// The (1,N) and (N,N) entries of G⁻¹ by exact elimination: the first must
/// be 1/q, the second m/q with m·(p/2) ≡ 1 mod q.
pub fn corner_inverse_entries(
    g: &GoeritzData,
) -> Result<(BigRational, BigRational), LinkformError> {
    let n = g.size;
    let det = g.determinant.clone();
    if det.is_zero() {
        return Err(LinkformError::InternalError(
            "singular Goeritz matrix".into(),
        ));
    }
    // adjugate entries: G^{-1}[i][j] = (-1)^{i+j} det(minor_{j,i}) / det
    let top_right = adjugate_entry(&g.matrix, 0, n - 1, &det);
    let bottom_right = adjugate_entry(&g.matrix, n - 1, n - 1, &det);

    let (p, q) = even_odd(&g.knot).expect("validated");
    let expected_top = BigRational::new(BigInt::one(), BigInt::from(q));
    if top_right != expected_top {
        return Err(LinkformError::InternalError(format!(
            "corner entry {top_right}, expected 1/{q}"
        )));
    }
    let m_num = (bottom_right.numer() * BigInt::from(q) / bottom_right.denom()).mod_floor_u(q);
    if (m_num * (p / 2)) % q != 1 % q {
        return Err(LinkformError::InternalError(format!(
            "bottom corner {bottom_right} fails m·(p/2) ≡ 1 mod {q}"
        )));
    }
    Ok((top_right, bottom_right))
}

trait ModFloorU {
    fn mod_floor_u(&self, m: u64) -> u64;
}
impl ModFloorU for BigInt {
    fn mod_floor_u(&self, m: u64) -> u64 {
        use num_integer::Integer;
        let r = self.mod_floor(&BigInt::from(m));
        u64::try_from(r).expect("reduced residue fits")
    }
}

/// G^{-1}[i][j]·det as a signed cofactor, returned over det.
fn adjugate_entry(m: &[Vec<BigInt>], i: usize, j: usize, det: &BigInt) -> BigRational {
    let n = m.len();
    let minor: Vec<Vec<BigInt>> = (0..n)
        .filter(|r| *r != j)
        .map(|r| {
            (0..n)
                .filter(|c| *c != i)
                .map(|c| m[r][c].clone())
                .collect()
        })
        .collect();
    let cof = if minor.is_empty() {
        BigInt::one()
    } else {
        bareiss_determinant(&minor)
    };
    let sign = if (i + j).is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    BigRational::new(sign * cof, det.clone())
}

/// Fraction-free Bareiss determinant with row pivoting; exact over Z.
pub fn bareiss_determinant(matrix: &[Vec<BigInt>]) -> BigInt {
    let n = matrix.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: Vec<Vec<BigInt>> = matrix.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|r| !m[*r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let val = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = val;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// λ(x,x) ≡ -p/(2q) mod 1 on a generator, as an exact value in [0,1).
/// Cross-verified through the Goeritz corner entries whenever the matrix
/// fits under the cap.
pub fn linking_form(knot: &TorusKnot) -> Result<LinkingFormValue, LinkformError> {
    let (p, q) = even_odd(knot)?;
    let half_p = (p / 2) % q;
    let numerator = (q - half_p) % q;
    debug_assert_eq!(crate::arith::gcd_u64(numerator.max(1), q), 1);
    Ok(LinkingFormValue {
        group_order: q,
        numerator,
        denominator: q,
    })
}

/// The matrix route to λ(x,x): -m·(p/2)²/q mod 1 with m/q the (N,N) corner
/// entry of G⁻¹, per the generator x = (p/2)·[e_N].
pub fn linking_form_via_matrix(
    knot: &TorusKnot,
    cap: usize,
) -> Result<LinkingFormValue, LinkformError> {
    let g = goeritz_matrix_with_cap(knot, cap)?;
    let (_, bottom) = corner_inverse_entries(&g)?;
    let (p, q) = even_odd(knot)?;
    let m = (bottom.numer() * BigInt::from(q) / bottom.denom()).mod_floor_u(q);
    let xx = (m as u128 * ((p / 2) as u128 % q as u128).pow(2)) % q as u128;
    let numerator = ((q as u128 - xx) % q as u128) as u64;
    Ok(LinkingFormValue {
        group_order: q,
        numerator,
        denominator: q,
    })
}
