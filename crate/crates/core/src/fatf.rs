//! The group `Fn × Zm` with normal forms `u·t^a`.

use std::fmt;
use std::ops::Mul;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{vec_add, vec_scale};
use crate::words::Word;
use crate::{Int, IntVector};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Signature {
    pub n: usize,
    pub m: usize,
}

impl Signature {
    pub fn new(n: usize, m: usize) -> Self {
        Signature { n, m }
    }

    pub fn check(&self, other: Signature) -> Result<()> {
        if *self == other {
            Ok(())
        } else {
            Err(Error::SignatureMismatch {
                expected_n: self.n,
                expected_m: self.m,
                found_n: other.n,
                found_m: other.m,
            })
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FatfElement {
    free: Word,
    ab: IntVector,
}

impl FatfElement {
    pub fn new(free: Word, ab: IntVector) -> Self {
        FatfElement { free, ab }
    }

    pub fn identity(sig: Signature) -> Self {
        FatfElement { free: Word::identity(sig.n), ab: vec![Int::zero(); sig.m] }
    }

    pub fn from_word(free: Word, m: usize) -> Self {
        FatfElement { free, ab: vec![Int::zero(); m] }
    }

    pub fn from_ab(n: usize, ab: IntVector) -> Self {
        FatfElement { free: Word::identity(n), ab }
    }

    pub fn signature(&self) -> Signature {
        Signature::new(self.free.rank(), self.ab.len())
    }

    pub fn free(&self) -> &Word {
        &self.free
    }

    pub fn ab(&self) -> &[Int] {
        &self.ab
    }

    /// `(gπ, gτ)`
    pub fn project(&self) -> (Word, IntVector) {
        (self.free.clone(), self.ab.clone())
    }

    pub fn is_identity(&self) -> bool {
        self.free.is_identity() && self.ab.iter().all(Zero::is_zero)
    }

    pub fn checked_mul(&self, other: &FatfElement) -> Result<FatfElement> {
        self.signature().check(other.signature())?;
        Ok(FatfElement {
            free: &self.free * &other.free,
            ab: vec_add(&self.ab, &other.ab),
        })
    }

    pub fn inverse(&self) -> FatfElement {
        FatfElement {
            free: self.free.inverse(),
            ab: self.ab.iter().map(|x| -x).collect(),
        }
    }

    pub fn pow(&self, e: i64) -> FatfElement {
        FatfElement { free: self.free.pow(e), ab: vec_scale(&self.ab, &Int::from(e)) }
    }

    /// `z⁻¹ · self · z`
    pub fn conjugate_by(&self, z: &FatfElement) -> FatfElement {
        FatfElement { free: self.free.conjugate_by(&z.free), ab: self.ab.clone() }
    }

    /// A `z` with `z⁻¹ · self · z = other`.
    pub fn is_conjugate(&self, other: &FatfElement) -> Option<FatfElement> {
        if self.signature() != other.signature() || self.ab != other.ab {
            return None;
        }
        let z = self.free.is_conjugate(&other.free)?;
        Some(FatfElement::from_word(z, self.ab.len()))
    }
}

impl Mul for &FatfElement {
    type Output = FatfElement;

    fn mul(self, rhs: &FatfElement) -> FatfElement {
        self.checked_mul(rhs).expect("signature mismatch in product")
    }
}

impl fmt::Display for FatfElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.ab.iter().map(|x| x.to_string()).collect();
        write!(f, "{} t^({})", self.free, parts.join(","))
    }
}
