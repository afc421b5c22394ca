//! Dense F2 linear algebra on u64-packed bit rows.
//!
//! The homology engine only ever sees a few hundred dimensions per graded
//! piece, so straightforward Gaussian elimination is plenty.

/// A vector over F2, packed 64 bits per word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct F2Vec {
    pub len: usize,
    words: Vec<u64>,
}

impl F2Vec {
    pub fn zero(len: usize) -> Self {
        F2Vec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = F2Vec::zero(len);
        v.set(i, true);
        v
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn xor_assign(&mut self, other: &F2Vec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn leading_bit(&self) -> Option<usize> {
        for (wi, w) in self.words.iter().enumerate() {
            if *w != 0 {
                return Some(wi * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.len).filter(|i| self.get(*i)).collect()
    }
}

/// Dense F2 matrix, row-major.
#[derive(Debug, Clone)]
pub struct F2Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<F2Vec>,
}

impl F2Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        F2Matrix {
            rows,
            cols,
            data: (0..rows).map(|_| F2Vec::zero(cols)).collect(),
        }
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value);
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    /// Matrix-vector product (the vector indexes columns).
    pub fn apply(&self, v: &F2Vec) -> F2Vec {
        debug_assert_eq!(v.len, self.cols);
        let mut out = F2Vec::zero(self.rows);
        for r in 0..self.rows {
            let mut acc = 0u64;
            for (a, b) in self.data[r].words.iter().zip(&v.words) {
                acc ^= a & b;
            }
            out.set(r, acc.count_ones() % 2 == 1);
        }
        out
    }

    pub fn column(&self, c: usize) -> F2Vec {
        let mut v = F2Vec::zero(self.rows);
        for r in 0..self.rows {
            v.set(r, self.get(r, c));
        }
        v
    }

    /// Basis of the kernel {x : Ax = 0}.
    pub fn kernel_basis(&self) -> Vec<F2Vec> {
        // Column-reduce the transpose: row-reduce the matrix whose rows are
        // the columns of A, tracking the combinations.
        let mut rows: Vec<(F2Vec, F2Vec)> = (0..self.cols)
            .map(|c| (self.column(c), F2Vec::unit(self.cols, c)))
            .collect();
        let mut echelon: Vec<(usize, F2Vec, F2Vec)> = Vec::new(); // (pivot, row, comb)
        let mut kernel = Vec::new();
        for (mut v, mut comb) in rows.drain(..) {
            loop {
                match v.leading_bit() {
                    None => {
                        kernel.push(comb);
                        break;
                    }
                    Some(p) => {
                        if let Some((_, ev, ec)) = echelon.iter().find(|(pivot, _, _)| *pivot == p)
                        {
                            v.xor_assign(ev);
                            comb.xor_assign(ec);
                        } else {
                            echelon.push((p, v, comb));
                            break;
                        }
                    }
                }
            }
        }
        kernel
    }

    /// Basis of the column space.
    pub fn image_basis(&self) -> Vec<F2Vec> {
        let mut space = Subspace::new(self.rows);
        for c in 0..self.cols {
            space.insert(self.column(c));
        }
        space.basis().to_vec()
    }

    pub fn rank(&self) -> usize {
        self.image_basis().len()
    }
}

/// An echelonized subspace of F2^n supporting membership tests and
/// incremental insertion.
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<F2Vec>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn new(ambient: usize) -> Self {
        Subspace {
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_vectors(ambient: usize, vectors: &[F2Vec]) -> Self {
        let mut s = Subspace::new(ambient);
        for v in vectors {
            s.insert(v.clone());
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[F2Vec] {
        &self.rows
    }

    /// Reduce v against the stored rows; the remainder is zero iff v lies in
    /// the subspace.
    pub fn reduce(&self, mut v: F2Vec) -> F2Vec {
        loop {
            match v.leading_bit() {
                None => return v,
                Some(p) => match self.pivots.iter().position(|q| *q == p) {
                    Some(i) => v.xor_assign(&self.rows[i]),
                    None => return v,
                },
            }
        }
    }

    pub fn contains(&self, v: &F2Vec) -> bool {
        self.reduce(v.clone()).is_zero()
    }

    /// Insert; returns true when the dimension grew.
    pub fn insert(&mut self, v: F2Vec) -> bool {
        let r = self.reduce(v);
        match r.leading_bit() {
            None => false,
            Some(p) => {
                self.rows.push(r);
                self.pivots.push(p);
                true
            }
        }
    }

    /// Does `self` contain `other` as a subspace?
    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|v| self.contains(v))
    }
}

/// A quotient Z/B presented by explicit coset representatives, with exact
/// coordinates for arbitrary elements of Z.
#[derive(Debug, Clone)]
pub struct Quotient {
    ambient: usize,
    /// Echelon rows spanning B + reps, augmented with rep coordinates.
    rows: Vec<(F2Vec, F2Vec)>,
    pivots: Vec<usize>,
    reps: Vec<F2Vec>,
}

impl Quotient {
    /// Build H = Z/B from a basis of cycles and a basis of boundaries.
    pub fn new(ambient: usize, cycles: &[F2Vec], boundaries: &[F2Vec]) -> Self {
        let mut q = Quotient {
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
            reps: Vec::new(),
        };
        for b in boundaries {
            q.insert_row(b.clone(), None);
        }
        for z in cycles {
            let dim = q.reps.len();
            q.insert_row(z.clone(), Some(dim));
        }
        q
    }

    fn insert_row(&mut self, v: F2Vec, rep_slot: Option<usize>) {
        let mut v = v;
        let mut aug = F2Vec::zero(64); // grown lazily below
        loop {
            match v.leading_bit() {
                None => return, // dependent: never a new rep
                Some(p) => match self.pivots.iter().position(|q| *q == p) {
                    Some(i) => {
                        let (row, row_aug) = &self.rows[i];
                        let row = row.clone();
                        let row_aug = row_aug.clone();
                        v.xor_assign(&row);
                        grow_to(&mut aug, row_aug.len);
                        let mut padded = row_aug.clone();
                        grow_to(&mut padded, aug.len);
                        aug.xor_assign(&padded);
                    }
                    None => {
                        if let Some(slot) = rep_slot {
                            self.reps.push(v.clone());
                            grow_to(&mut aug, slot + 1);
                            aug.set(slot, !aug.get(slot));
                        }
                        self.rows.push((v, aug));
                        self.pivots.push(p);
                        return;
                    }
                },
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Chain-level representative of the i-th homology basis class.
    pub fn rep(&self, i: usize) -> &F2Vec {
        &self.reps[i]
    }

    /// Coordinates of the class [v] for a cycle v. Panics if v is not in the
    /// span of boundaries and representatives (i.e. not a cycle of this
    /// grading).
    pub fn class_of(&self, v: &F2Vec) -> F2Vec {
        let mut v = v.clone();
        let mut aug = F2Vec::zero(self.reps.len().max(1));
        loop {
            match v.leading_bit() {
                None => {
                    let mut out = F2Vec::zero(self.dim());
                    for i in 0..self.dim().min(aug.len) {
                        out.set(i, aug.get(i));
                    }
                    return out;
                }
                Some(p) => {
                    let i = self
                        .pivots
                        .iter()
                        .position(|q| *q == p)
                        .expect("vector is not a cycle in this quotient");
                    let (row, row_aug) = &self.rows[i];
                    let row = row.clone();
                    let row_aug = row_aug.clone();
                    v.xor_assign(&row);
                    grow_to(&mut aug, row_aug.len);
                    let mut padded = row_aug;
                    grow_to(&mut padded, aug.len);
                    aug.xor_assign(&padded);
                }
            }
        }
    }
}

fn grow_to(v: &mut F2Vec, len: usize) {
    if v.len < len {
        let mut bigger = F2Vec::zero(len);
        for i in 0..v.len {
            bigger.set(i, v.get(i));
        }
        *v = bigger;
    }
}
