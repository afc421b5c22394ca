//! Gradewise homology of δ-graded complexes over F2[U], and the tower /
//! Q-image predicates behind υ, ῡ, ῡ̲.
//!
//! Each graded piece C_r is finite dimensional over F2 with basis
//! {U^k·g : δ(g) - k = r}, so homology per grading is exact linear algebra.
//! The U-action is an isomorphism of chain groups below the minimal
//! generator grading, which makes every "for all n" quantifier decidable at
//! a finite depth.

use super::complex::CfkComplex;
use super::FloerError;
use crate::f2::{F2Matrix, F2Vec, Quotient, Subspace};
use std::collections::BTreeMap;

pub struct GradedHomology<'a> {
    complex: &'a CfkComplex,
    /// plain index -> Q-copy index, when analyzing a mapping cone
    q_map: Option<&'a [Option<usize>]>,
    r_hi: i64,
    /// all quantifiers stabilize below min_delta; levels extend a bit past it
    stable_r: i64,
    levels: BTreeMap<i64, Level>,
}

struct Level {
    basis: Vec<(usize, u32)>,
    h: Quotient,
    /// image of Q on homology at this grading (zero space for plain complexes)
    q_image: Subspace,
}

impl<'a> GradedHomology<'a> {
    pub fn new(complex: &'a CfkComplex, q_map: Option<&'a [Option<usize>]>) -> Self {
        let r_hi = complex.max_delta();
        let stable_r = complex.min_delta() - 2;
        let mut engine = GradedHomology {
            complex,
            q_map,
            r_hi,
            stable_r,
            levels: BTreeMap::new(),
        };
        engine.build_levels();
        engine
    }

    fn basis_at(&self, r: i64) -> Vec<(usize, u32)> {
        let mut basis = Vec::new();
        for (i, g) in self.complex.generators().iter().enumerate() {
            if g.delta >= r {
                basis.push((i, (g.delta - r) as u32));
            }
        }
        basis
    }

    fn boundary_matrix(&self, source: &[(usize, u32)], target: &[(usize, u32)]) -> F2Matrix {
        let index: BTreeMap<(usize, u32), usize> = target
            .iter()
            .enumerate()
            .map(|(pos, key)| (*key, pos))
            .collect();
        let mut m = F2Matrix::zero(target.len(), source.len());
        let d = self.complex.differential();
        for (col, &(j, k)) in source.iter().enumerate() {
            for &(i, e) in &d[j] {
                let row = index[&(i, k + e)];
                m.set(row, col, !m.get(row, col));
            }
        }
        m
    }

    fn build_levels(&mut self) {
        let r_lo = self.stable_r - 2;
        let mut bases: BTreeMap<i64, Vec<(usize, u32)>> = BTreeMap::new();
        for r in r_lo..=self.r_hi {
            bases.insert(r, self.basis_at(r));
        }
        let below = self.basis_at(r_lo - 1);
        let mut boundaries_into: BTreeMap<i64, Vec<F2Vec>> = BTreeMap::new();
        let mut cycles: BTreeMap<i64, Vec<F2Vec>> = BTreeMap::new();
        for r in r_lo..=self.r_hi {
            let source = &bases[&r];
            let target = if r == r_lo { &below } else { &bases[&(r - 1)] };
            let m = self.boundary_matrix(source, target);
            cycles.insert(r, m.kernel_basis());
            if r > r_lo {
                boundaries_into.insert(r - 1, m.image_basis());
            }
        }
        for r in r_lo..=self.r_hi {
            let basis = bases.remove(&r).unwrap();
            let empty = Vec::new();
            let b = boundaries_into.get(&r).unwrap_or(&empty);
            let h = Quotient::new(basis.len(), &cycles[&r], b);
            let q_image = Subspace::new(h.dim().max(1));
            self.levels.insert(r, Level { basis, h, q_image });
        }
        // second pass: Q images on homology (needs the quotients in place)
        if self.q_map.is_some() {
            let gradings: Vec<i64> = self.levels.keys().copied().collect();
            for &r in &gradings {
                if r == self.r_hi {
                    continue;
                }
                let mut image = Subspace::new(self.levels[&r].h.dim().max(1));
                let upper_dim = self.levels[&(r + 1)].h.dim();
                for i in 0..upper_dim {
                    let rep = self.levels[&(r + 1)].h.rep(i).clone();
                    let chain = self.apply_q(&rep, r + 1);
                    let class = self.levels[&r].h.class_of(&chain);
                    image.insert(class);
                }
                self.levels.get_mut(&r).unwrap().q_image = image;
            }
        }
    }

    /// Chain-level U: C_r -> C_{r-1}, i.e. (g, k) -> (g, k+1).
    fn apply_u(&self, v: &F2Vec, r: i64) -> F2Vec {
        let src = &self.levels[&r].basis;
        let dst = &self.levels[&(r - 1)].basis;
        let index: BTreeMap<(usize, u32), usize> = dst
            .iter()
            .enumerate()
            .map(|(pos, key)| (*key, pos))
            .collect();
        let mut out = F2Vec::zero(dst.len());
        for (pos, &(g, k)) in src.iter().enumerate() {
            if v.get(pos) {
                let t = index[&(g, k + 1)];
                out.set(t, !out.get(t));
            }
        }
        out
    }

    /// Chain-level Q: sends a plain generator to its Q-twin, kills Q-copies.
    fn apply_q(&self, v: &F2Vec, r: i64) -> F2Vec {
        let q_map = self.q_map.expect("Q structure");
        let src = &self.levels[&r].basis;
        let dst = &self.levels[&(r - 1)].basis;
        let index: BTreeMap<(usize, u32), usize> = dst
            .iter()
            .enumerate()
            .map(|(pos, key)| (*key, pos))
            .collect();
        let mut out = F2Vec::zero(dst.len());
        for (pos, &(g, k)) in src.iter().enumerate() {
            if v.get(pos) {
                if let Some(qg) = q_map[g] {
                    let t = index[&(qg, k)];
                    out.set(t, !out.get(t));
                }
            }
        }
        out
    }

    /// Matrix of U on homology H_r -> H_{r-1}.
    fn u_on_homology(&self, r: i64) -> F2Matrix {
        let src = &self.levels[&r].h;
        let dst = &self.levels[&(r - 1)].h;
        let mut m = F2Matrix::zero(dst.dim(), src.dim());
        for i in 0..src.dim() {
            let chain = self.apply_u(src.rep(i), r);
            let class = dst.class_of(&chain);
            for row in 0..dst.dim() {
                if class.get(row) {
                    m.set(row, i, true);
                }
            }
        }
        m
    }

    pub fn homology_dim(&self, r: i64) -> usize {
        self.levels.get(&r).map(|l| l.h.dim()).unwrap_or(0)
    }

    /// Gradings of the homology generators of each graded piece, with their
    /// U-torsion exponents (None = nontorsion). Used for decompositions
    /// reported to callers.
    pub fn graded_dims(&self) -> Vec<(i64, usize)> {
        self.levels
            .iter()
            .filter(|(r, l)| **r >= self.stable_r && l.h.dim() > 0)
            .map(|(r, l)| (*r, l.h.dim()))
            .collect()
    }

    /// Dimension of every graded piece deep in the stable zone; this is the
    /// rank of the U-localized homology.
    pub fn localized_rank(&self) -> usize {
        self.homology_dim(self.stable_r)
    }

    /// Depth needed before "for all n" quantifiers at grading r are decided.
    fn depth(&self, r: i64) -> usize {
        (r - self.stable_r).max(1) as usize
    }

    /// Subspace of H_r killed by some power of U.
    fn eventual_kernel(&self, r: i64) -> Subspace {
        let dim = self.levels[&r].h.dim();
        let mut composite: Option<F2Matrix> = None;
        let mut kernel = Subspace::new(dim.max(1));
        let mut prev_dim = usize::MAX;
        for n in 1..=self.depth(r) {
            let step = self.u_on_homology(r - n as i64 + 1);
            composite = Some(match composite {
                None => step,
                Some(m) => matmul(&step, &m),
            });
            kernel =
                Subspace::from_vectors(dim.max(1), &composite.as_ref().unwrap().kernel_basis());
            if kernel.dim() == prev_dim && r - (n as i64) < self.stable_r + 2 {
                break;
            }
            prev_dim = kernel.dim();
        }
        kernel
    }

    /// Subspace of H_r whose classes land in Im(Q) after some power of U
    /// (includes everything U eventually kills, since 0 ∈ Im Q).
    fn eventual_q_preimage(&self, r: i64) -> Subspace {
        let dim = self.levels[&r].h.dim();
        let mut composite: Option<F2Matrix> = None;
        let mut result = subspace_preimage(&identity(dim), &self.levels[&r].q_image, dim);
        for n in 1..=self.depth(r) {
            let step = self.u_on_homology(r - n as i64 + 1);
            composite = Some(match composite {
                None => step,
                Some(m) => matmul(&step, &m),
            });
            let target = r - n as i64;
            let pre = subspace_preimage(
                composite.as_ref().unwrap(),
                &self.levels[&target].q_image,
                dim,
            );
            for v in pre.basis() {
                result.insert(v.clone());
            }
        }
        result
    }

    /// Largest grading carrying a U-nontorsion class: the tower grading. For
    /// the plain complex of a knot this is υ.
    pub fn tower_grading(&self) -> Result<i64, FloerError> {
        let mut r = self.r_hi;
        while r >= self.stable_r {
            if self.homology_dim(r) > 0 {
                let kernel = self.eventual_kernel(r);
                if kernel.dim() < self.homology_dim(r) {
                    return Ok(r);
                }
            }
            r -= 1;
        }
        Err(FloerError::StructureViolation(
            "no U-nontorsion class found".into(),
        ))
    }

    /// ῡ̲: largest grading with a class that never enters Im(Q).
    pub fn upsilon_underbar(&self) -> Result<i64, FloerError> {
        let mut r = self.r_hi;
        while r >= self.stable_r {
            if self.homology_dim(r) > 0 {
                let t = self.eventual_q_preimage(r);
                if t.dim() < self.homology_dim(r) {
                    return Ok(r);
                }
            }
            r -= 1;
        }
        Err(FloerError::StructureViolation(
            "no class avoiding Im(Q)".into(),
        ))
    }

    /// ῡ: one more than the largest grading with a U-nontorsion class that
    /// eventually enters Im(Q).
    pub fn upsilon_bar(&self) -> Result<i64, FloerError> {
        let mut r = self.r_hi;
        while r >= self.stable_r {
            if self.homology_dim(r) > 0 {
                let t = self.eventual_q_preimage(r);
                let k = self.eventual_kernel(r);
                if !k.contains_subspace(&t) {
                    return Ok(r + 1);
                }
            }
            r -= 1;
        }
        Err(FloerError::StructureViolation(
            "no nontorsion class in Im(Q)".into(),
        ))
    }

    /// Barcode decomposition into towers and U-torsion summands.
    ///
    /// The graded homology with its U-maps is a one-parameter persistence
    /// module; summand multiplicities come from ranks of composite maps by
    /// inclusion-exclusion. Bars alive at the stable grading never die (U is
    /// a chain isomorphism down there), so they are the free towers.
    pub fn decompose(&self) -> Vec<super::Summand> {
        use super::Summand;
        let lo = self.stable_r - 1;
        // rho[(t, s)] = rank of the composite U-map H_t -> H_s
        let mut rho: BTreeMap<(i64, i64), usize> = BTreeMap::new();
        for t in lo..=self.r_hi {
            let dim_t = self.homology_dim(t);
            rho.insert((t, t), dim_t);
            if dim_t == 0 {
                for s in lo..t {
                    rho.insert((t, s), 0);
                }
                continue;
            }
            let mut composite: Option<F2Matrix> = None;
            for s in (lo..t).rev() {
                let step = self.u_on_homology(s + 1);
                composite = Some(match composite {
                    None => step,
                    Some(m) => matmul(&step, &m),
                });
                rho.insert((t, s), composite.as_ref().unwrap().rank());
            }
        }
        let get = |t: i64, s: i64| -> i64 {
            if t > self.r_hi {
                0
            } else {
                rho[&(t, s)] as i64
            }
        };
        // born at t, alive at s
        let beta = |t: i64, s: i64| -> i64 { get(t, s) - get(t + 1, s) };

        let mut towers = Vec::new();
        let mut torsion = Vec::new();
        for t in (self.stable_r..=self.r_hi).rev() {
            for _ in 0..beta(t, self.stable_r) {
                towers.push(Summand::Tower { grading: t });
            }
            for s in (self.stable_r + 1..=t).rev() {
                let mu = beta(t, s) - beta(t, s - 1);
                debug_assert!(mu >= 0);
                for _ in 0..mu {
                    torsion.push(Summand::Torsion {
                        grading: t,
                        order: (t - s + 1) as u32,
                    });
                }
            }
        }
        towers.extend(torsion);
        towers
    }
}

fn identity(dim: usize) -> F2Matrix {
    let mut m = F2Matrix::zero(dim, dim);
    for i in 0..dim {
        m.set(i, i, true);
    }
    m
}

fn matmul(a: &F2Matrix, b: &F2Matrix) -> F2Matrix {
    debug_assert_eq!(a.cols, b.rows);
    let mut out = F2Matrix::zero(a.rows, b.cols);
    for c in 0..b.cols {
        let col = a.apply(&b.column(c));
        for r in 0..a.rows {
            if col.get(r) {
                out.set(r, c, true);
            }
        }
    }
    out
}

/// {x : M x ∈ S}, for a subspace S of the target of M.
fn subspace_preimage(m: &F2Matrix, s: &Subspace, source_dim: usize) -> Subspace {
    // kernel of (quotient-by-S) ∘ M
    let target_dim = m.rows;
    let full: Vec<F2Vec> = (0..target_dim)
        .map(|i| F2Vec::unit(target_dim, i))
        .collect();
    let quot = Quotient::new(target_dim, &full, s.basis());
    let mut composed = F2Matrix::zero(quot.dim().max(1), source_dim);
    for c in 0..source_dim {
        let image = m.apply(&F2Vec::unit(source_dim, c));
        let class = quot.class_of(&image);
        for r in 0..quot.dim() {
            if class.get(r) {
                composed.set(r, c, true);
            }
        }
    }
    Subspace::from_vectors(source_dim.max(1), &composed.kernel_basis())
}
