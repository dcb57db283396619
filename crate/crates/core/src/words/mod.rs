//! Reduced words in a free group of fixed rank.
//!
//! Generators are numbered `1..=rank`; the letter `-i` stands for the inverse
//! of generator `i`. A [`Word`] is freely reduced at all times, so equality of
//! group elements is equality of letter sequences.

mod stallings;

pub use stallings::SubgroupGraph;

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::Int;

/// A signed generator index.
pub type Letter = i32;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

/// `original = conjugator⁻¹ · core · conjugator`, with `core` cyclically reduced.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CyclicDecomposition {
    pub core: Word,
    pub conjugator: Word,
}

fn push_reduced(buf: &mut Vec<Letter>, l: Letter) {
    if buf.last() == Some(&-l) {
        buf.pop();
    } else {
        buf.push(l);
    }
}

impl Word {
    pub fn identity(rank: usize) -> Word {
        Word { rank, letters: Vec::new() }
    }

    /// The generator `x_i` (1-based). Panics when `i` is out of range.
    pub fn generator(rank: usize, i: usize) -> Word {
        assert!(i >= 1 && i <= rank, "generator x{i} out of range for rank {rank}");
        Word { rank, letters: vec![i as Letter] }
    }

    /// Builds a word from arbitrary letters, freely reducing them.
    pub fn new(rank: usize, letters: impl IntoIterator<Item = Letter>) -> Result<Word> {
        let mut buf = Vec::new();
        for l in letters {
            if l == 0 || l.unsigned_abs() as usize > rank {
                return Err(Error::BadGenerator { index: l as i64, rank });
            }
            push_reduced(&mut buf, l);
        }
        Ok(Word { rank, letters: buf })
    }

    pub(crate) fn from_reduced(rank: usize, letters: Vec<Letter>) -> Word {
        debug_assert!(letters.windows(2).all(|p| p[0] != -p[1]));
        Word { rank, letters }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn checked_mul(&self, other: &Word) -> Result<Word> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        let mut buf = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut buf, l);
        }
        Ok(Word { rank: self.rank, letters: buf })
    }

    pub fn inverse(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| -l).collect(),
        }
    }

    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let dec = base.cyclic_reduce();
        // c⁻¹ C^k c: the core powers do not cancel.
        let k = e.unsigned_abs() as usize;
        let mut core = Vec::with_capacity(dec.core.len() * k);
        for _ in 0..k {
            core.extend_from_slice(&dec.core.letters);
        }
        let core = Word::from_reduced(self.rank, core);
        &(&dec.conjugator.inverse() * &core) * &dec.conjugator
    }

    /// `z⁻¹ · self · z`
    pub fn conjugate_by(&self, z: &Word) -> Word {
        &(&z.inverse() * self) * z
    }

    pub fn cyclic_reduce(&self) -> CyclicDecomposition {
        let n = self.letters.len();
        let mut i = 0;
        while 2 * i + 1 < n && self.letters[i] == -self.letters[n - 1 - i] {
            i += 1;
        }
        let prefix = Word::from_reduced(self.rank, self.letters[..i].to_vec());
        CyclicDecomposition {
            core: Word::from_reduced(self.rank, self.letters[i..n - i].to_vec()),
            conjugator: prefix.inverse(),
        }
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(a), Some(b)) => self.letters.len() == 1 || *a != -*b,
            _ => true,
        }
    }

    /// Returns `z` with `z⁻¹ · self · z = other`, when one exists.
    pub fn is_conjugate(&self, other: &Word) -> Option<Word> {
        assert_eq!(self.rank, other.rank, "rank mismatch in conjugacy test");
        let du = self.cyclic_reduce();
        let dv = other.cyclic_reduce();
        let (cu, cv) = (&du.core.letters, &dv.core.letters);
        if cu.len() != cv.len() {
            return None;
        }
        let len = cu.len();
        let shift = (0..len.max(1)).find(|&k| {
            len == 0 || (0..len).all(|i| cu[(i + k) % len] == cv[i])
        })?;
        // core_v = A⁻¹ core_u A with A the first `shift` letters of core_u.
        let rot = Word::from_reduced(self.rank, cu[..shift].to_vec());
        Some(&(&du.conjugator.inverse() * &rot) * &dv.conjugator)
    }

    /// Canonical representative of the conjugacy class: the least rotation of
    /// the cyclic core.
    pub fn conjugacy_key(&self) -> Vec<Letter> {
        let core = self.cyclic_reduce().core.letters;
        let len = core.len();
        (0..len)
            .map(|k| core[k..].iter().chain(&core[..k]).copied().collect::<Vec<_>>())
            .min()
            .unwrap_or_default()
    }

    pub fn abelianize(&self) -> Vec<Int> {
        let mut v = vec![0i64; self.rank];
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize - 1;
            v[i] += l.signum() as i64;
        }
        v.into_iter().map(BigInt::from).collect()
    }

    /// The exponent `l` with `self = w^l`, if any.
    pub fn power_index(&self, w: &Word) -> Result<Option<i64>> {
        if w.is_identity() {
            return Err(Error::TrivialWord);
        }
        if self.rank != w.rank {
            return Err(Error::RankMismatch(self.rank, w.rank));
        }
        if self.is_identity() {
            return Ok(Some(0));
        }
        // w = c⁻¹ C c, so self = w^l iff c·self·c⁻¹ = C^l.
        let dec = w.cyclic_reduce();
        let inner = self.conjugate_by(&dec.conjugator.inverse());
        let core = &dec.core.letters;
        if !inner.len().is_multiple_of(core.len()) {
            return Ok(None);
        }
        let l = (inner.len() / core.len()) as i64;
        for cand in [l, -l] {
            if dec.core.pow(cand) == inner {
                return Ok(Some(cand));
            }
        }
        Ok(None)
    }

    /// `(root, k)` with `self = root^k` and `root` not a proper power.
    pub fn primitive_root(&self) -> Result<(Word, u64)> {
        if self.is_identity() {
            return Err(Error::TrivialWord);
        }
        let dec = self.cyclic_reduce();
        let core = &dec.core.letters;
        let len = core.len();
        for d in (1..=len).filter(|d| len.is_multiple_of(*d)) {
            if (d..len).all(|i| core[i] == core[i - d]) {
                let piece = Word::from_reduced(self.rank, core[..d].to_vec());
                let root = piece.conjugate_by(&dec.conjugator);
                return Ok((root, (len / d) as u64));
            }
        }
        unreachable!("d = len always succeeds")
    }

    /// Applies the endomorphism `x_i ↦ images[i-1]`.
    pub fn substitute(&self, images: &[Word]) -> Word {
        assert_eq!(images.len(), self.rank, "one image per generator");
        let rank = images.first().map_or(0, |w| w.rank);
        let mut buf = Vec::new();
        for &l in &self.letters {
            let img = &images[l.unsigned_abs() as usize - 1];
            if l > 0 {
                for &a in &img.letters {
                    push_reduced(&mut buf, a);
                }
            } else {
                for &a in img.letters.iter().rev() {
                    push_reduced(&mut buf, -a);
                }
            }
        }
        Word { rank, letters: buf }
    }

    /// Same group element viewed in a free group of a different rank.
    pub fn with_rank(&self, rank: usize) -> Result<Word> {
        Word::new(rank, self.letters.iter().copied())
    }
}

impl Mul for &Word {
    type Output = Word;

    fn mul(self, rhs: &Word) -> Word {
        self.checked_mul(rhs).expect("rank mismatch in word product")
    }
}

impl Mul for Word {
    type Output = Word;

    fn mul(self, rhs: Word) -> Word {
        &self * &rhs
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == l {
                j += 1;
            }
            let e = (j - i) as i64 * l.signum() as i64;
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", l.abs())?;
            } else {
                write!(f, "x{}^{}", l.abs(), e)?;
            }
            i = j;
        }
        Ok(())
    }
}
