//! Independent re-checks of witnesses by direct group arithmetic.

use crate::decision::LogSet;
use crate::endo::Endomorphism;
use crate::fatf::FatfElement;
use crate::hnn::{HnnElement, HnnGroup};

/// `gΦ^k = h`.
pub fn brp(phi: &Endomorphism, g: &FatfElement, h: &FatfElement, k: u64) -> bool {
    phi.iterate(g, k).is_ok_and(|x| &x == h)
}

/// `gΦ^k ∼ h`.
pub fn brcp(phi: &Endomorphism, g: &FatfElement, h: &FatfElement, k: u64) -> bool {
    phi.iterate(g, k).is_ok_and(|x| x.is_conjugate(h).is_some())
}

/// `(zΦ)⁻¹·g·z = h`.
pub fn twisted_conjugator(phi: &Endomorphism, g: &FatfElement, h: &FatfElement, z: &FatfElement) -> bool {
    if z.signature() != g.signature() {
        return false;
    }
    phi.apply(z).is_ok_and(|zphi| &(&zphi.inverse() * g) * z == *h)
}

/// `gΦ^r ∼ hΦ^s`.
pub fn two_sided(phi: &Endomorphism, g: &FatfElement, h: &FatfElement, r: u64, s: u64) -> bool {
    match (phi.iterate(g, r), phi.iterate(h, s)) {
        (Ok(a), Ok(b)) => a.is_conjugate(&b).is_some(),
        _ => false,
    }
}

/// Membership in `set` agrees with direct iteration for `0 ≤ k ≤ upto`.
pub fn log_set(phi: &Endomorphism, g: &FatfElement, h: &FatfElement, set: &LogSet, conjugacy: bool, upto: u64) -> bool {
    let mut x = g.clone();
    for k in 0..=upto {
        let hit = if conjugacy { x.is_conjugate(h).is_some() } else { &x == h };
        if hit != set.contains(k) {
            return false;
        }
        if k < upto {
            match phi.apply(&x) {
                Ok(y) => x = y,
                Err(_) => return false,
            }
        }
    }
    true
}

/// `z⁻¹·e1·z = e2` in the HNN extension.
pub fn hnn_conjugator(group: &HnnGroup, e1: &HnnElement, e2: &HnnElement, z: &HnnElement) -> bool {
    let lhs = group
        .mul(&group.inverse(z), e1)
        .and_then(|x| group.mul(&x, z));
    lhs.is_ok_and(|x| x == *e2)
}
