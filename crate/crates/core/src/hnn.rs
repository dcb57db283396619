//! Ascending HNN extensions `⟨G, x | x⁻¹gx = gΦ⟩` of `G = Fn × Zm` by an
//! injective endomorphism `Φ`.
//!
//! Elements are kept as `x^i g x^-j`, reduced while `i, j > 0` and `g ∈ im Φ`.

use std::fmt;

use crate::decide::Solver;
use crate::decision::{Certificate, Decision, Taint};
use crate::endo::{Endomorphism, TypeI};
use crate::error::{Error, Result};
use crate::fatf::{FatfElement, Signature};
use crate::linalg::{solve_linear, vec_sub};
use crate::oracle::FreeOracle;
use crate::words::SubgroupGraph;

/// `x^i · g · x^-j`
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct HnnElement {
    pub i: u64,
    pub g: FatfElement,
    pub j: u64,
}

impl HnnElement {
    /// Image under the map to `Z` sending `x ↦ 1` and `G ↦ 0`.
    pub fn exponent_sum(&self) -> i64 {
        self.i as i64 - self.j as i64
    }
}

impl fmt::Display for HnnElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.i > 0 {
            write!(f, "x^{} ", self.i)?;
        }
        write!(f, "{}", self.g)?;
        if self.j > 0 {
            write!(f, " x^-{}", self.j)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct HnnGroup {
    phi: Endomorphism,
    image: SubgroupGraph,
}

impl HnnGroup {
    pub fn new(phi: Endomorphism) -> Result<HnnGroup> {
        if !phi.is_injective() {
            return Err(Error::NotInjective);
        }
        let f = phi.as_type_i().expect("injective maps are type I");
        let image = SubgroupGraph::new(f.signature().n, f.phi())?;
        Ok(HnnGroup { phi, image })
    }

    pub fn endomorphism(&self) -> &Endomorphism {
        &self.phi
    }

    pub fn signature(&self) -> Signature {
        self.phi.signature()
    }

    fn type_i(&self) -> &TypeI {
        self.phi.as_type_i().unwrap()
    }

    /// The unique `h` with `hΦ = g`, if any.
    pub fn preimage(&self, g: &FatfElement) -> Option<FatfElement> {
        let f = self.type_i();
        let free = self.image.member(g.free())?;
        // a = cQ + h̄P
        let rhs = vec_sub(g.ab(), &f.p().left_mul(&free.abelianize()));
        let (c, _) = solve_linear(f.q(), &rhs)?;
        Some(FatfElement::new(free, c))
    }

    pub fn normalize(&self, mut i: u64, mut g: FatfElement, mut j: u64) -> Result<HnnElement> {
        self.signature().check(g.signature())?;
        while i > 0 && j > 0 {
            let Some(h) = self.preimage(&g) else { break };
            g = h;
            i -= 1;
            j -= 1;
        }
        Ok(HnnElement { i, g, j })
    }

    pub fn identity(&self) -> HnnElement {
        HnnElement { i: 0, g: FatfElement::identity(self.signature()), j: 0 }
    }

    pub fn base(&self, g: FatfElement) -> Result<HnnElement> {
        self.normalize(0, g, 0)
    }

    /// `x^k` for `k ∈ Z`.
    pub fn stable(&self, k: i64) -> HnnElement {
        let g = FatfElement::identity(self.signature());
        if k >= 0 {
            HnnElement { i: k as u64, g, j: 0 }
        } else {
            HnnElement { i: 0, g, j: k.unsigned_abs() }
        }
    }

    pub fn mul(&self, a: &HnnElement, b: &HnnElement) -> Result<HnnElement> {
        let sig = self.signature();
        sig.check(a.g.signature())?;
        sig.check(b.g.signature())?;
        if a.j <= b.i {
            // g·x = x·(gΦ)
            let d = b.i - a.j;
            let g = &self.phi.iterate(&a.g, d)? * &b.g;
            self.normalize(a.i + d, g, b.j)
        } else {
            // x⁻¹·g = (gΦ)·x⁻¹
            let d = a.j - b.i;
            let g = &a.g * &self.phi.iterate(&b.g, d)?;
            self.normalize(a.i, g, b.j + d)
        }
    }

    pub fn inverse(&self, e: &HnnElement) -> HnnElement {
        HnnElement { i: e.j, g: e.g.inverse(), j: e.i }
    }

    pub fn is_identity(&self, e: &HnnElement) -> bool {
        self.normalize(e.i, e.g.clone(), e.j).is_ok_and(|n| n.i == 0 && n.j == 0 && n.g.is_identity())
    }

    /// Some `z` with `z⁻¹·a·z = b`.
    pub fn conjugacy<O: FreeOracle>(
        &self,
        a: &HnnElement,
        b: &HnnElement,
        solver: &Solver<O>,
    ) -> Result<Decision<HnnElement>> {
        let a = self.normalize(a.i, a.g.clone(), a.j)?;
        let b = self.normalize(b.i, b.g.clone(), b.j)?;
        let (ea, eb) = (a.exponent_sum(), b.exponent_sum());
        if ea != eb {
            return Ok(Decision::No(Certificate::ExponentSum { left: ea, right: eb }));
        }
        let d = match ea {
            0 => self.conjugacy_in_base(&a, &b, solver)?,
            e if e > 0 => self.conjugacy_twisted(&a, &b, e as u64, solver)?,
            _ => return self.conjugacy(&self.inverse(&a), &self.inverse(&b), solver),
        };
        if let Decision::Yes(z) = &d {
            if !crate::verify::hnn_conjugator(self, &a, &b, z) {
                return Ok(Decision::Unknown(Taint::new("HNN conjugator failed verification")));
            }
        }
        Ok(d)
    }

    /// `x^i g x^-i ∼ g`, and `g1 ∼ g2` iff `g1Φ^r ∼ g2Φ^s` in `G` for some `r, s`.
    fn conjugacy_in_base<O: FreeOracle>(
        &self,
        a: &HnnElement,
        b: &HnnElement,
        solver: &Solver<O>,
    ) -> Result<Decision<HnnElement>> {
        let (r, s) = match solver.tsbrcp(&self.phi, &a.g, &b.g)? {
            Decision::Yes(w) => w,
            Decision::No(c) => return Ok(Decision::No(c)),
            Decision::Unknown(t) => return Ok(Decision::Unknown(t)),
        };
        let ga = self.phi.iterate(&a.g, r)?;
        let gb = self.phi.iterate(&b.g, s)?;
        let z = ga.is_conjugate(&gb).expect("two-sided witness");
        let left = self.stable((a.i + r) as i64);
        let right = self.stable(-((s + b.j) as i64));
        let z = self.mul(&self.mul(&left, &self.base(z)?)?, &right)?;
        Ok(Decision::Yes(z))
    }

    /// After conjugating to `x^e g`, base elements act by `Φ^e`-twisted
    /// conjugacy and `x` by `g ↦ gΦ`. The twisted class of `gΦ^r` depends only
    /// on `r mod e`, so `r < e` and `s = 0` suffice.
    fn conjugacy_twisted<O: FreeOracle>(
        &self,
        a: &HnnElement,
        b: &HnnElement,
        e: u64,
        solver: &Solver<O>,
    ) -> Result<Decision<HnnElement>> {
        let phi_e = self.phi.power(e)?;
        let mut refuted = Vec::new();
        let mut open = None;
        let mut ga = a.g.clone();
        for r in 0..e {
            match solver.tcp(&phi_e, &ga, &b.g)? {
                Decision::Yes(z) => {
                    let c = self.normalize(r, z, 0)?;
                    let z = self.mul(&self.mul(&self.stable(a.j as i64), &c)?, &self.stable(-(b.j as i64)))?;
                    return Ok(Decision::Yes(z));
                }
                Decision::No(c) => refuted.push(c),
                Decision::Unknown(t) => open = open.or(Some(t)),
            }
            ga = self.phi.apply(&ga)?;
        }
        Ok(match open {
            Some(t) => Decision::Unknown(t),
            None => Decision::No(Certificate::Branches(refuted)),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{vec_from_i64, Matrix};
    use crate::words::Word;

    fn word(letters: &[i32]) -> Word {
        Word::new(2, letters.iter().copied()).unwrap()
    }

    fn el(letters: &[i32], ab: &[i64]) -> FatfElement {
        FatfElement::new(word(letters), vec_from_i64(ab))
    }

    fn group(phi: &[&[i32]], q: i64) -> HnnGroup {
        let f = TypeI::new(
            Signature::new(2, 1),
            phi.iter().map(|l| word(l)).collect(),
            Matrix::from_i64(&[&[q]]),
            Matrix::zeros(2, 1),
        )
        .unwrap();
        HnnGroup::new(Endomorphism::I(f)).unwrap()
    }

    fn squaring() -> HnnGroup {
        group(&[&[1, 1], &[2]], 1)
    }

    #[test]
    fn preimages() {
        let h = squaring();
        assert_eq!(h.preimage(&el(&[1, 1], &[0])), Some(el(&[1], &[0])));
        assert_eq!(h.preimage(&el(&[1], &[0])), None);
        let doubling = group(&[&[1], &[2]], 2);
        assert_eq!(doubling.preimage(&el(&[], &[3])), None);
        assert_eq!(doubling.preimage(&el(&[2], &[4])), Some(el(&[2], &[2])));
    }

    #[test]
    fn normal_forms() {
        let h = squaring();
        assert_eq!(h.normalize(1, el(&[1, 1], &[0]), 1).unwrap(), h.base(el(&[1], &[0])).unwrap());
        assert_eq!(h.normalize(2, el(&[], &[0]), 2).unwrap(), h.identity());
        let e = h.normalize(1, el(&[1], &[0]), 0).unwrap();
        assert_eq!((e.i, e.j), (1, 0));
        assert!(!h.is_identity(&h.base(el(&[1], &[0])).unwrap()));
        assert_eq!(e.to_string(), "x^1 x1 t^(0)");
    }

    #[test]
    fn relation_holds() {
        let h = squaring();
        let g = h.base(el(&[1, -2], &[3])).unwrap();
        let gphi = h.base(h.endomorphism().apply(&g.g).unwrap()).unwrap();
        let x = h.stable(1);
        let lhs = h.mul(&h.mul(&h.inverse(&x), &g).unwrap(), &x).unwrap();
        assert_eq!(lhs, gphi);
        // [x, x1] is not trivial
        let g = h.base(el(&[1], &[0])).unwrap();
        let comm = h.mul(&h.mul(&h.inverse(&x), &h.inverse(&g)).unwrap(), &h.mul(&x, &g).unwrap()).unwrap();
        assert!(!h.is_identity(&comm));
    }

    #[test]
    fn conjugacy_examples() {
        let h = squaring();
        let solver = Solver::default();
        let g = el(&[1, 2], &[1]);
        let a = h.base(g.clone()).unwrap();
        let b = h.base(h.endomorphism().apply(&g).unwrap()).unwrap();
        let d = h.conjugacy(&a, &b, &solver).unwrap();
        assert!(d.is_yes(), "{d:?}");

        let x = h.stable(1);
        let z = el(&[2, 1], &[0]);
        let g2 = &(&h.endomorphism().apply(&z).unwrap().inverse() * &g) * &z;
        let xa = h.mul(&x, &a).unwrap();
        let xb = h.mul(&x, &h.base(g2).unwrap()).unwrap();
        assert!(h.conjugacy(&xa, &xb, &solver).unwrap().is_yes());

        let x2 = h.stable(2);
        assert_eq!(
            h.conjugacy(&xa, &h.mul(&x2, &a).unwrap(), &solver).unwrap(),
            Decision::No(Certificate::ExponentSum { left: 1, right: 2 })
        );
        let inv = h.conjugacy(&h.inverse(&xa), &h.inverse(&xb), &solver).unwrap();
        assert!(inv.is_yes());
    }

    #[test]
    fn rejects_non_injective() {
        let f = TypeI::new(Signature::new(2, 1), vec![word(&[1]), word(&[1])], Matrix::from_i64(&[&[1]]), Matrix::zeros(2, 1))
            .unwrap();
        assert!(matches!(HnnGroup::new(Endomorphism::I(f)), Err(Error::NotInjective)));
    }
}
