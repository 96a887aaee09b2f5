//! Packed bit vectors and linear algebra over GF(2).

use std::fmt;

/// Fixed-length bit vector packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn and_parity(&self, other: &BitVec) -> bool {
        let mut acc = 0u32;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= (a & b).count_ones() & 1;
        }
        acc == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * 64 + t)
                }
            })
        })
    }

    /// Concatenation `self ++ other`.
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut v = BitVec::zeros(self.len + other.len);
        for i in self.ones() {
            v.set(i, true);
        }
        for i in other.ones() {
            v.set(self.len + i, true);
        }
        v
    }

    pub fn slice(&self, start: usize, len: usize) -> BitVec {
        let mut v = BitVec::zeros(len);
        for i in 0..len {
            if self.get(start + i) {
                v.set(i, true);
            }
        }
        v
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Incrementally built row echelon form that remembers which inserted rows
/// each reduced row is made of.
#[derive(Clone, Debug)]
pub struct Echelon {
    width: usize,
    inserted: usize,
    rows: Vec<BitVec>,
    combos: Vec<BitVec>,
    pivots: Vec<usize>,
    capacity: usize,
}

/// Outcome of reducing a vector against an [`Echelon`].
#[derive(Clone, Debug)]
pub struct Reduction {
    pub residual: BitVec,
    /// Inserted rows whose sum was subtracted.
    pub combo: BitVec,
}

impl Echelon {
    /// `capacity` bounds how many rows may be inserted (combination width).
    pub fn new(width: usize, capacity: usize) -> Self {
        Echelon { width, inserted: 0, rows: Vec::new(), combos: Vec::new(), pivots: Vec::new(), capacity }
    }

    pub fn from_rows(width: usize, rows: &[BitVec]) -> Self {
        let mut e = Echelon::new(width, rows.len());
        for r in rows {
            let _ = e.insert(r);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn reduce(&self, v: &BitVec) -> Reduction {
        let mut residual = v.clone();
        let mut combo = BitVec::zeros(self.capacity);
        for (k, row) in self.rows.iter().enumerate() {
            if residual.get(self.pivots[k]) {
                residual.xor_assign(row);
                combo.xor_assign(&self.combos[k]);
            }
        }
        Reduction { residual, combo }
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).residual.is_zero()
    }

    /// Inserts a row. Returns `Err(combo)` when it is dependent, with the
    /// combination of earlier rows (plus itself) summing to zero.
    pub fn insert(&mut self, v: &BitVec) -> Result<(), BitVec> {
        assert!(self.inserted < self.capacity, "echelon capacity exceeded");
        let Reduction { residual, mut combo } = self.reduce(v);
        combo.flip(self.inserted);
        self.inserted += 1;
        match residual.first_one() {
            None => Err(combo),
            Some(p) => {
                // keep earlier pivots clean so reduce() is a single pass
                for k in 0..self.rows.len() {
                    if self.rows[k].get(p) {
                        let (r, c) = (residual.clone(), combo.clone());
                        self.rows[k].xor_assign(&r);
                        self.combos[k].xor_assign(&c);
                    }
                }
                self.rows.push(residual);
                self.combos.push(combo);
                self.pivots.push(p);
                Ok(())
            }
        }
    }
}

pub fn rank(rows: &[BitVec]) -> usize {
    match rows.first() {
        None => 0,
        Some(r) => Echelon::from_rows(r.len(), rows).rank(),
    }
}

/// Basis of `{ x : rows · x = 0 }` for vectors of length `width`.
pub fn nullspace(rows: &[BitVec], width: usize) -> Vec<BitVec> {
    // reduced row echelon form of the matrix itself
    let mut m: Vec<BitVec> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        let Some(p) = (r..m.len()).find(|&i| m[i].get(c)) else {
            continue;
        };
        m.swap(r, p);
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row.get(c) {
                row.xor_assign(&pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    let mut is_pivot = vec![false; width];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..width).filter(|&c| !is_pivot[c]) {
        let mut v = BitVec::zeros(width);
        v.set(free, true);
        for (k, &p) in pivots.iter().enumerate() {
            if m[k].get(free) {
                v.set(p, true);
            }
        }
        basis.push(v);
    }
    basis
}
