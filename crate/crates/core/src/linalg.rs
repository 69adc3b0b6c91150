//! Dense linear algebra over `F_p`.
//!
//! Vectors over `F_2` are bit-packed; other primes use one limb per entry.
//! The graded pieces seen here reach a few thousand dimensions (PSO(16) mod 2),
//! where packing is the difference between milliseconds and seconds.

use std::fmt;

pub fn inverse_mod(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0);
    let mut result = 1u64;
    let mut base = (a % p) as u64;
    let mut exp = p - 2;
    let p = p as u64;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    result as u32
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpVector {
    p: u32,
    len: usize,
    limbs: Vec<u64>,
}

impl fmt::Debug for FpVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.entries())
    }
}

impl FpVector {
    pub fn zero(p: u32, len: usize) -> Self {
        let n = if p == 2 { len.div_ceil(64) } else { len };
        FpVector {
            p,
            len,
            limbs: vec![0; n],
        }
    }

    pub fn from_entries(p: u32, entries: &[u32]) -> Self {
        let mut v = Self::zero(p, entries.len());
        for (i, &c) in entries.iter().enumerate() {
            v.set(i, c % p);
        }
        v
    }

    pub fn unit(p: u32, len: usize, i: usize) -> Self {
        let mut v = Self::zero(p, len);
        v.set(i, 1);
        v
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> u32 {
        debug_assert!(i < self.len);
        if self.p == 2 {
            ((self.limbs[i / 64] >> (i % 64)) & 1) as u32
        } else {
            self.limbs[i] as u32
        }
    }

    pub fn set(&mut self, i: usize, c: u32) {
        debug_assert!(i < self.len);
        if self.p == 2 {
            let mask = 1u64 << (i % 64);
            if c & 1 == 1 {
                self.limbs[i / 64] |= mask;
            } else {
                self.limbs[i / 64] &= !mask;
            }
        } else {
            self.limbs[i] = (c % self.p) as u64;
        }
    }

    pub fn entries(&self) -> Vec<u32> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.iter().all(|&l| l == 0)
    }

    pub fn first_nonzero(&self) -> Option<usize> {
        if self.p == 2 {
            self.limbs
                .iter()
                .enumerate()
                .find(|(_, &l)| l != 0)
                .map(|(i, l)| i * 64 + l.trailing_zeros() as usize)
        } else {
            self.limbs.iter().position(|&l| l != 0)
        }
    }

    pub fn nonzero_positions(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i) != 0)
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &FpVector, c: u32) {
        debug_assert_eq!(self.len, other.len);
        let c = c % self.p;
        if c == 0 {
            return;
        }
        if self.p == 2 {
            for (a, b) in self.limbs.iter_mut().zip(&other.limbs) {
                *a ^= b;
            }
        } else {
            let p = self.p as u64;
            let c = c as u64;
            for (a, b) in self.limbs.iter_mut().zip(&other.limbs) {
                *a = (*a + c * b) % p;
            }
        }
    }

    pub fn add(&mut self, other: &FpVector) {
        self.add_scaled(other, 1);
    }

    pub fn scale(&mut self, c: u32) {
        let c = c % self.p;
        if self.p == 2 {
            if c == 0 {
                self.limbs.iter_mut().for_each(|l| *l = 0);
            }
        } else {
            let p = self.p as u64;
            for a in &mut self.limbs {
                *a = *a * c as u64 % p;
            }
        }
    }

    /// Scale so the first nonzero entry is 1; returns its position.
    pub fn normalize(&mut self) -> Option<usize> {
        let lead = self.first_nonzero()?;
        let c = self.get(lead);
        if c != 1 {
            self.scale(inverse_mod(c, self.p));
        }
        Some(lead)
    }
}

/// A subspace held as rows in echelon form, sorted by pivot column.
///
/// Each row has leading entry 1 at its pivot. [`Subspace::reduce`] clears pivot
/// positions, so two vectors are congruent modulo the subspace exactly when
/// their reductions agree once the basis is fully reduced.
#[derive(Clone, Debug)]
pub struct Subspace {
    p: u32,
    dim: usize,
    rows: Vec<FpVector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn new(p: u32, ambient: usize) -> Self {
        Subspace {
            p,
            dim: ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn spanned_by<'a>(p: u32, ambient: usize, vectors: impl IntoIterator<Item = &'a FpVector>) -> Self {
        let mut s = Self::new(p, ambient);
        for v in vectors {
            s.insert(v.clone());
        }
        s
    }

    pub fn ambient_dimension(&self) -> usize {
        self.dim
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[FpVector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn reduce(&self, v: &mut FpVector) {
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = v.get(piv);
            if c != 0 {
                v.add_scaled(row, self.p - c);
            }
        }
    }

    pub fn contains(&self, v: &FpVector) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        w.is_zero()
    }

    /// Add a vector; returns whether the dimension grew.
    pub fn insert(&mut self, mut v: FpVector) -> bool {
        self.reduce(&mut v);
        let Some(piv) = v.normalize() else {
            return false;
        };
        let at = self.pivots.partition_point(|&q| q < piv);
        self.rows.insert(at, v);
        self.pivots.insert(at, piv);
        true
    }

    /// Bring the basis to reduced row echelon form, the canonical basis of
    /// the subspace.
    pub fn make_reduced(&mut self) {
        for i in (0..self.rows.len()).rev() {
            let (head, tail) = self.rows.split_at_mut(i);
            let row = &tail[0];
            let piv = self.pivots[i];
            for other in head.iter_mut() {
                let c = other.get(piv);
                if c != 0 {
                    other.add_scaled(row, self.p - c);
                }
            }
        }
    }
}

/// Row reduction of `rows` (each a vector in the target space) returning the
/// rank and a basis for the kernel of `x -> sum_i x_i rows[i]`, as vectors of
/// length `rows.len()`.
pub fn rank_and_kernel(p: u32, rows: &[FpVector]) -> (usize, Vec<FpVector>) {
    let n = rows.len();
    // (reduced image, combination that produced it, pivot)
    let mut basis: Vec<(FpVector, FpVector, usize)> = Vec::new();
    let mut kernel = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let mut img = row.clone();
        let mut track = FpVector::unit(p, n, i);
        for (brow, btrack, piv) in &basis {
            let c = img.get(*piv);
            if c != 0 {
                img.add_scaled(brow, p - c);
                track.add_scaled(btrack, p - c);
            }
        }
        match img.first_nonzero() {
            None => kernel.push(track),
            Some(piv) => {
                let inv = inverse_mod(img.get(piv), p);
                img.scale(inv);
                track.scale(inv);
                basis.push((img, track, piv));
            }
        }
    }
    (basis.len(), kernel)
}

pub fn rank(p: u32, rows: &[FpVector]) -> usize {
    let mut s = Subspace::new(p, rows.first().map_or(0, |r| r.len()));
    for r in rows {
        s.insert(r.clone());
    }
    s.dimension()
}
