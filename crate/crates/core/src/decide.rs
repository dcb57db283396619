//! Brinkmann, twisted conjugacy and two-sided conjugacy problems in `Fn × Zm`.
//!
//! Type II endomorphisms reduce to integer orbit problems in the basis
//! `(w, t)`. Type I endomorphisms split into a free question, answered by a
//! [`FreeOracle`], and an affine orbit problem on the abelian coordinates
//! along the free log set.

use num_traits::{One, Zero};

use crate::decision::{Certificate, Config, Decision, LogSet, Taint};
use crate::endo::{bounded_pow, Endomorphism, TypeI, TypeII};
use crate::error::{Error, Result};
use crate::fatf::FatfElement;
use crate::linalg::{coset_meet, dot, solve_linear, vec_add, vec_sub, AffineMap, LatticeCoset, Matrix};
use crate::oracle::{ClassOrbit, DeskOracle, FreeOracle, OrbitShape};
use crate::orbit::{solve_affine_orbit, solve_linear_orbit, NoCertificate, OrbitAnswer, OrbitConfig};
use crate::words::Word;
use crate::{Int, IntMatrix, IntVector};

/// Decision procedures sharing one oracle and one set of bounds.
#[derive(Clone, Debug)]
pub struct Solver<O = DeskOracle> {
    pub oracle: O,
    pub orbit: OrbitConfig,
    /// Diagonal bound for two-sided searches.
    pub grid: u64,
}

impl Solver<DeskOracle> {
    pub fn new(cfg: &Config) -> Self {
        Solver { oracle: DeskOracle::new(cfg.oracle.clone()), orbit: cfg.orbit.clone(), grid: cfg.grid }
    }
}

impl Default for Solver<DeskOracle> {
    fn default() -> Self {
        Solver::new(&Config::default())
    }
}

fn check(phi: &Endomorphism, g: &FatfElement, h: &FatfElement) -> Result<()> {
    let sig = phi.signature();
    sig.check(g.signature())?;
    sig.check(h.signature())
}

fn orbit_decision(ans: OrbitAnswer, k: impl Fn(u64) -> u64) -> Decision<u64> {
    match ans {
        OrbitAnswer::Yes(j) => Decision::Yes(k(j)),
        OrbitAnswer::No(c) => Decision::No(Certificate::Orbit(c)),
        OrbitAnswer::Unknown { bound } => Decision::Unknown(Taint::new(format!("orbit solver: bound {bound}"))),
    }
}

/// Turns a word-size error into `Unknown`, passing other errors through.
fn sized<T>(r: Result<T>) -> Result<std::result::Result<T, Taint>> {
    match r {
        Ok(x) => Ok(Ok(x)),
        Err(Error::TooLarge(what)) => Ok(Err(Taint::new(format!("too large: {what}")))),
        Err(e) => Err(e),
    }
}

/// Abelian parts of `(u t^a)Φ^k` for a type I map, extended on demand.
struct AbelianTrack<'a> {
    f: &'a TypeI,
    phi_ab: &'a IntMatrix,
    free: IntVector,
    alphas: Vec<IntVector>,
}

impl<'a> AbelianTrack<'a> {
    fn new(f: &'a TypeI, phi_ab: &'a IntMatrix, free_ab: IntVector, a: IntVector) -> Self {
        AbelianTrack { f, phi_ab, free: free_ab, alphas: vec![a] }
    }

    fn at(&mut self, k: u64) -> &IntVector {
        while self.alphas.len() as u64 <= k {
            let last = self.alphas.last().unwrap();
            let next = vec_add(&self.f.q().left_mul(last), &self.f.p().left_mul(&self.free));
            self.free = self.phi_ab.left_mul(&self.free);
            self.alphas.push(next);
        }
        &self.alphas[k as usize]
    }
}

/// `x ↦ x·Q^p + (v t^0)Φ^p τ`: the abelian step along `p` iterates whose free
/// parts all abelianize like `v, vφ, …`.
fn shift_map(f: &TypeI, phi_ab: &IntMatrix, v_ab: &[Int], p: u64) -> AffineMap<Int> {
    let mut track = AbelianTrack::new(f, phi_ab, v_ab.to_vec(), vec![Int::zero(); f.signature().m]);
    let b = track.at(p).clone();
    AffineMap::new(f.q().pow(p), b).expect("shapes agree")
}

impl<O: FreeOracle> Solver<O> {
    pub fn with_oracle(oracle: O, orbit: OrbitConfig, grid: u64) -> Self {
        Solver { oracle, orbit, grid }
    }

    /// Least `k` with `gΦ^k = h`.
    pub fn brp(&self, phi: &Endomorphism, g: &FatfElement, h: &FatfElement) -> Result<Decision<u64>> {
        check(phi, g, h)?;
        if g == h {
            return Ok(Decision::Yes(0));
        }
        Ok(match phi {
            Endomorphism::II(f) => match h.free().power_index(f.w()) {
                Ok(Some(l)) => self.type_ii_orbit(f, g, h, l),
                _ => Decision::No(Certificate::NotInCyclicSubgroup),
            },
            Endomorphism::I(f) => self.type_i_log(f, g, h, false),
        })
    }

    /// Least `k` with `gΦ^k ∼ h`.
    pub fn brcp(&self, phi: &Endomorphism, g: &FatfElement, h: &FatfElement) -> Result<Decision<u64>> {
        check(phi, g, h)?;
        if g.is_conjugate(h).is_some() {
            return Ok(Decision::Yes(0));
        }
        Ok(match phi {
            Endomorphism::II(f) => {
                let v = h.free();
                let l = if v.is_identity() {
                    Some(0)
                } else {
                    let core = f.w().cyclic_reduce().core.len();
                    let vc = v.cyclic_reduce().core.len();
                    if !vc.is_multiple_of(core) {
                        return Ok(Decision::No(Certificate::LengthRatio));
                    }
                    let l = (vc / core) as i64;
                    [l, -l].into_iter().find(|&l| f.w().pow(l).is_conjugate(v).is_some())
                };
                match l {
                    Some(l) => self.type_ii_orbit(f, g, h, l),
                    None => Decision::No(Certificate::NotConjugateToPower),
                }
            }
            Endomorphism::I(f) => self.type_i_log(f, g, h, true),
        })
    }

    /// `k ≥ 1` with `gΦ^k = w^l t^b`, where `(e, b)` of `gΦ^k` is `(ū, a)·S·T^(k-1)`.
    fn type_ii_orbit(&self, f: &TypeII, g: &FatfElement, h: &FatfElement, l: i64) -> Decision<u64> {
        let mats = f.matrices();
        let x0 = mats.coordinates(g, 1);
        let mut y = vec![Int::from(l)];
        y.extend(h.ab().iter().cloned());
        orbit_decision(solve_linear_orbit(&x0, &mats.t, &y, 0, &self.orbit), |j| j + 1)
    }

    fn type_i_log(&self, f: &TypeI, g: &FatfElement, h: &FatfElement, conjugacy: bool) -> Decision<u64> {
        let (u, v) = (g.free(), h.free());
        let log = if conjugacy { self.oracle.conj_philog(f.phi(), u, v) } else { self.oracle.philog(f.phi(), u, v) };
        let phi_ab = f.phi_ab();
        let k0 = match log.first {
            Decision::Yes(k0) => k0,
            Decision::No(c) => return Decision::No(c),
            Decision::Unknown(t) => return self.joint_abelian(f, &phi_ab, g, h).unwrap_or(Decision::Unknown(t)),
        };
        let mut track = AbelianTrack::new(f, &phi_ab, u.abelianize(), g.ab().to_vec());
        if track.at(k0).as_slice() == h.ab() {
            return Decision::Yes(k0);
        }
        let p = match log.period {
            Decision::Yes(p) => p,
            Decision::No(_) => return Decision::No(Certificate::AbelianMismatch { k0 }),
            Decision::Unknown(t) => return self.joint_abelian(f, &phi_ab, g, h).unwrap_or(Decision::Unknown(t)),
        };
        let map = shift_map(f, &phi_ab, &v.abelianize(), p);
        match solve_affine_orbit(track.at(k0), &map, h.ab(), 1, &self.orbit) {
            OrbitAnswer::Unknown { bound } => self
                .joint_abelian(f, &phi_ab, g, h)
                .unwrap_or(Decision::Unknown(Taint::new(format!("orbit solver: bound {bound}")))),
            ans => orbit_decision(ans, |j| k0 + j * p),
        }
    }

    /// Necessary condition shared by equality and conjugacy: the abelianized
    /// orbit of `(ū, a)` must reach `(v̄, b)`.
    fn joint_abelian(&self, f: &TypeI, phi_ab: &IntMatrix, g: &FatfElement, h: &FatfElement) -> Option<Decision<u64>> {
        let (n, m) = (f.signature().n, f.signature().m);
        let big = phi_ab.hstack(f.p()).vstack(&Matrix::zeros(m, n).hstack(f.q()));
        let mut x = g.free().abelianize();
        x.extend(g.ab().iter().cloned());
        let mut y = h.free().abelianize();
        y.extend(h.ab().iter().cloned());
        match solve_linear_orbit(&x, &big, &y, 0, &self.orbit) {
            OrbitAnswer::No(c) => Some(Decision::No(Certificate::AbelianOrbit(c))),
            _ => None,
        }
    }

    /// Some `Z` with `(ZΦ)⁻¹·g·Z = h`.
    pub fn tcp(&self, phi: &Endomorphism, g: &FatfElement, h: &FatfElement) -> Result<Decision<FatfElement>> {
        check(phi, g, h)?;
        let d = match phi {
            Endomorphism::I(f) => self.tcp_i(f, g, h)?,
            Endomorphism::II(f) => self.tcp_ii(f, g, h)?,
        };
        if let Decision::Yes(z) = &d {
            if !crate::verify::twisted_conjugator(phi, g, h, z) {
                return Ok(Decision::Unknown(Taint::new("twisted conjugator failed verification")));
            }
        }
        Ok(d)
    }

    fn tcp_i(&self, f: &TypeI, g: &FatfElement, h: &FatfElement) -> Result<Decision<FatfElement>> {
        let (n, m) = (f.signature().n, f.signature().m);
        let (u, v) = (g.free(), h.free());
        let (a, b) = (g.ab(), h.ab());
        let phi_ab = f.phi_ab();
        let iq = Matrix::identity(m).sub(f.q());
        // (z̄, c)·[[I − φab, −P], [0, I − Q]] = (v̄ − ū, b − a)
        let joint = Matrix::identity(n)
            .sub(&phi_ab)
            .hstack(&f.p().scale(&-Int::one()))
            .vstack(&Matrix::zeros(m, n).hstack(&iq));
        let mut rhs = vec_sub(&v.abelianize(), &u.abelianize());
        rhs.extend(vec_sub(b, a));
        if solve_linear(&joint, &rhs).is_none() {
            return Ok(Decision::No(Certificate::NoIntegerSolution));
        }
        let z0 = match self.oracle.tcp(f.phi(), u, v) {
            Decision::Yes(z) => z,
            Decision::No(c) => return Ok(Decision::No(c)),
            Decision::Unknown(t) => return Ok(Decision::Unknown(t)),
        };
        // All free solutions are Fix(φγ_u)·z0; pick one whose abelianization
        // satisfies z̄P ∈ (a − b) + rowspace(I − Q).
        let fix = self.oracle.fix_twisted(f.phi(), u);
        let basis: Vec<IntVector> = fix.gens.iter().map(Word::abelianize).collect();
        let source = LatticeCoset::new(z0.abelianize(), basis);
        let target = LatticeCoset::with_rowspace(vec_sub(a, b), &iq);
        let Some(zbar) = coset_meet(&source, f.p(), &target) else {
            return Ok(if fix.exact {
                Decision::No(Certificate::FixedCosetMiss)
            } else {
                Decision::Unknown(Taint::new("fixed subgroup only underapproximated"))
            });
        };
        let lambda = source.coordinates(&zbar).expect("meet lies in the source coset");
        let mut y = Word::identity(n);
        for (gen, l) in fix.gens.iter().zip(&lambda) {
            match sized(bounded_pow(gen, l))? {
                Ok(p) => y = &y * &p,
                Err(t) => return Ok(Decision::Unknown(t)),
            }
        }
        let z = &y * &z0;
        let rhs = vec_add(&vec_sub(b, a), &f.p().left_mul(&z.abelianize()));
        let (c, _) = solve_linear(&iq, &rhs).expect("abelian constraint met");
        Ok(Decision::Yes(FatfElement::new(z, c)))
    }

    /// Every twisted conjugator has the form `u⁻¹ w^e v · t^c`, and `(e, c)`
    /// solves a square integer system.
    fn tcp_ii(&self, f: &TypeII, g: &FatfElement, h: &FatfElement) -> Result<Decision<FatfElement>> {
        let m = f.signature().m;
        let (u, v) = (g.free(), h.free());
        let w_ab = f.w().abelianize();
        let delta = vec_sub(&v.abelianize(), &u.abelianize());
        let r_col = Matrix::from_fn(m, 1, |i, _| -f.r()[i].clone());
        let top = Matrix::from_fn(1, 1, |_, _| Int::one() - dot(&w_ab, f.s()))
            .hstack(&Matrix::from_rows(vec![f.p().left_mul(&w_ab)], m)?.scale(&-Int::one()));
        let system = top.vstack(&r_col.hstack(&Matrix::identity(m).sub(f.q())));
        let mut rhs = vec![dot(&delta, f.s())];
        rhs.extend(vec_add(&vec_sub(h.ab(), g.ab()), &f.p().left_mul(&delta)));
        let Some((x, _)) = solve_linear(&system, &rhs) else {
            return Ok(Decision::No(Certificate::NoIntegerSolution));
        };
        let we = match sized(bounded_pow(f.w(), &x[0]))? {
            Ok(p) => p,
            Err(t) => return Ok(Decision::Unknown(t)),
        };
        let z = &(&u.inverse() * &we) * v;
        Ok(Decision::Yes(FatfElement::new(z, x[1..].to_vec())))
    }

    /// Least `(r, s)` in the order `(r + s, s)` with `gΦ^r ∼ hΦ^s`, for injective `Φ`.
    ///
    /// Pairs with conjugate free parts are closed under `(r, s) ↦ (r+1, s+1)`,
    /// and along such a diagonal ray the abelian condition holds everywhere or
    /// nowhere (`Q` is injective). When both class orbits are periodic, every
    /// ray meets the cross `r = e_A` or `s = e_B` through their cycle entries,
    /// where the abelian condition becomes an affine orbit problem.
    pub fn tsbrcp(&self, phi: &Endomorphism, g: &FatfElement, h: &FatfElement) -> Result<Decision<(u64, u64)>> {
        check(phi, g, h)?;
        if !phi.is_injective() {
            return Err(Error::NotInjective);
        }
        let f = phi.as_type_i().expect("injective maps are type I");
        let limit = self.oracle.config().steps.max(self.grid);
        let a_orb = self.oracle.class_orbit(f.phi(), g.free(), limit);
        let b_orb = self.oracle.class_orbit(f.phi(), h.free(), limit);
        let phi_ab = f.phi_ab();
        let mut ta = AbelianTrack::new(f, &phi_ab, g.free().abelianize(), g.ab().to_vec());
        let mut tb = AbelianTrack::new(f, &phi_ab, h.free().abelianize(), h.ab().to_vec());

        if let Some(w) = scan(&a_orb, &b_orb, &mut ta, &mut tb, 0, self.grid) {
            return Ok(Decision::Yes(w));
        }
        Ok(match (a_orb.shape, b_orb.shape) {
            (OrbitShape::Periodic { entry: ea, period: pa }, OrbitShape::Periodic { entry: eb, period: pb }) => {
                self.cross(f, &phi_ab, (&a_orb, &mut ta, ea, pa), (&b_orb, &mut tb, eb, pb))
            }
            (OrbitShape::Periodic { .. }, OrbitShape::Escaping) | (OrbitShape::Escaping, OrbitShape::Periodic { .. }) => {
                Decision::No(Certificate::FiniteAgainstInfinite)
            }
            (OrbitShape::Escaping, OrbitShape::Escaping) => {
                // Injective class orbits: the free solutions form one ray,
                // whose first point the scan has already refuted.
                match first_class_pair(&a_orb, &b_orb, self.grid) {
                    Some(start) => Decision::No(Certificate::SingleRay { start: Some(start) }),
                    None => Decision::Unknown(Taint::new(format!("two-sided search: grid {} exhausted", self.grid))),
                }
            }
            _ => Decision::Unknown(Taint::new(format!("two-sided search: grid {} exhausted", self.grid))),
        })
    }

    fn cross(
        &self,
        f: &TypeI,
        phi_ab: &IntMatrix,
        (a, ta, ea, pa): (&ClassOrbit, &mut AbelianTrack, u64, u64),
        (b, tb, eb, pb): (&ClassOrbit, &mut AbelianTrack, u64, u64),
    ) -> Decision<(u64, u64)> {
        let mut found: Vec<(u64, u64)> = Vec::new();
        let mut rays: Vec<NoCertificate> = Vec::new();
        let mut open = false;

        // vertical line r = ea
        for s in 0..eb {
            if a.key(ea) == b.key(s) && ta.at(ea) == tb.at(s) {
                found.push((ea, s));
            }
        }
        for s0 in eb..eb + pb {
            if a.key(ea) != b.key(s0) {
                continue;
            }
            let map = shift_map(f, phi_ab, &b.class(s0).unwrap().abelianize(), pb);
            match solve_affine_orbit(tb.at(s0), &map, ta.at(ea), 0, &self.orbit) {
                OrbitAnswer::Yes(j) => found.push((ea, s0 + j * pb)),
                OrbitAnswer::No(c) => rays.push(c),
                OrbitAnswer::Unknown { .. } => open = true,
            }
        }
        // horizontal line s = eb
        for r in 0..ea {
            if a.key(r) == b.key(eb) && ta.at(r) == tb.at(eb) {
                found.push((r, eb));
            }
        }
        for r0 in ea..ea + pa {
            if a.key(r0) != b.key(eb) {
                continue;
            }
            let map = shift_map(f, phi_ab, &a.class(r0).unwrap().abelianize(), pa);
            match solve_affine_orbit(ta.at(r0), &map, tb.at(eb), 0, &self.orbit) {
                OrbitAnswer::Yes(j) => found.push((r0 + j * pa, eb)),
                OrbitAnswer::No(c) => rays.push(c),
                OrbitAnswer::Unknown { .. } => open = true,
            }
        }

        let best = found
            .into_iter()
            .map(|(mut r, mut s)| {
                // descend to the start of the ray
                while r > 0 && s > 0 && a.key(r - 1) == b.key(s - 1) {
                    r -= 1;
                    s -= 1;
                }
                (r, s)
            })
            .min_by_key(|&(r, s)| (r + s, s));
        match best {
            Some((r, s)) => {
                let upto = (r + s).min(4 * self.grid.max(1));
                let earlier = scan(a, b, ta, tb, self.grid + 1, upto).filter(|&(r2, s2)| (r2 + s2, s2) < (r + s, s));
                Decision::Yes(earlier.unwrap_or((r, s)))
            }
            None if open => Decision::Unknown(Taint::new("two-sided search: affine orbit unresolved")),
            None => Decision::No(Certificate::Cross { entry: (ea, eb), periods: (pa, pb), rays }),
        }
    }

    /// The set `{k : gΦ^k = h}` (or `∼ h`); `No` means empty.
    pub fn philog(&self, phi: &Endomorphism, g: &FatfElement, h: &FatfElement, conjugacy: bool) -> Result<Decision<LogSet>> {
        let first = if conjugacy { self.brcp(phi, g, h)? } else { self.brp(phi, g, h)? };
        let k0 = match first {
            Decision::Yes(k) => k,
            Decision::No(c) => return Ok(Decision::No(c)),
            Decision::Unknown(t) => return Ok(Decision::Unknown(t)),
        };
        let next = match sized(phi.apply(h))? {
            Ok(x) => x,
            Err(t) => return Ok(Decision::Unknown(t)),
        };
        let period = if conjugacy { self.brcp(phi, &next, h)? } else { self.brp(phi, &next, h)? };
        Ok(match period {
            Decision::Yes(j) => Decision::Yes(LogSet::Progression { k0, p: j + 1 }),
            Decision::No(_) => Decision::Yes(LogSet::Progression { k0, p: 0 }),
            Decision::Unknown(t) => Decision::Unknown(t),
        })
    }
}

/// First pair on diagonals `from..=to` (order `(r + s, s)`) with conjugate
/// free parts and equal abelian parts.
fn scan(
    a: &ClassOrbit,
    b: &ClassOrbit,
    ta: &mut AbelianTrack,
    tb: &mut AbelianTrack,
    from: u64,
    to: u64,
) -> Option<(u64, u64)> {
    for t in from..=to {
        for s in 0..=t {
            let r = t - s;
            match (a.key(r), b.key(s)) {
                (Some(ka), Some(kb)) if ka == kb
                    && ta.at(r) == tb.at(s) => {
                        return Some((r, s));
                    }
                _ => {}
            }
        }
    }
    None
}

fn first_class_pair(a: &ClassOrbit, b: &ClassOrbit, grid: u64) -> Option<(u64, u64)> {
    (0..=grid).find_map(|t| {
        (0..=t).find_map(|s| match (a.key(t - s), b.key(s)) {
            (Some(ka), Some(kb)) if ka == kb => Some((t - s, s)),
            _ => None,
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fatf::Signature;
    use crate::linalg::vec_from_i64;

    fn word(letters: &[i32]) -> Word {
        Word::new(2, letters.iter().copied()).unwrap()
    }

    fn el(letters: &[i32], ab: &[i64]) -> FatfElement {
        FatfElement::new(word(letters), vec_from_i64(ab))
    }

    fn running() -> Endomorphism {
        Endomorphism::II(
            TypeII::new(
                Signature::new(2, 1),
                word(&[1]),
                vec_from_i64(&[1]),
                vec_from_i64(&[1, 1]),
                Matrix::from_i64(&[&[0]]),
                Matrix::from_i64(&[&[1], &[1]]),
            )
            .unwrap(),
        )
    }

    fn type_i(phi: &[&[i32]], q: &[&[i64]], p: &[&[i64]]) -> Endomorphism {
        let m = q.len();
        Endomorphism::I(
            TypeI::new(
                Signature::new(2, m),
                phi.iter().map(|l| word(l)).collect(),
                Matrix::from_i64(q),
                Matrix::from_rows(p.iter().map(|r| vec_from_i64(r)).collect(), m).unwrap(),
            )
            .unwrap(),
        )
    }

    fn swap() -> Endomorphism {
        type_i(&[&[2], &[1]], &[&[1]], &[&[0], &[0]])
    }

    #[test]
    fn brp_running_example() {
        let s = Solver::default();
        let phi = running();
        let g = el(&[2], &[2]);
        assert_eq!(s.brp(&phi, &g, &el(&[1, 1, 1, 1], &[3])).unwrap(), Decision::Yes(2));
        assert_eq!(s.brp(&phi, &g, &el(&[2; 5], &[0])).unwrap(), Decision::No(Certificate::NotInCyclicSubgroup));
        assert_eq!(s.brp(&phi, &g, &g).unwrap(), Decision::Yes(0));
        assert!(s.brp(&phi, &g, &el(&[1], &[1, 1])).is_err());
    }

    #[test]
    fn brcp_examples() {
        let s = Solver::default();
        let g = el(&[2], &[2]);
        let h = el(&[-2, 1, 1, 1, 1, 2], &[3]);
        assert_eq!(s.brcp(&running(), &g, &h).unwrap(), Decision::Yes(2));
        assert_eq!(s.brcp(&swap(), &el(&[1], &[0]), &el(&[2], &[0])).unwrap(), Decision::Yes(1));
        // rotation on the abelian part: (1,0) never reaches (2,0)
        let rot = type_i(&[&[1], &[2]], &[&[0, 1], &[-1, 0]], &[&[0, 0], &[0, 0]]);
        let d = s.brcp(&rot, &el(&[1], &[1, 0]), &el(&[1], &[2, 0])).unwrap();
        assert!(matches!(d, Decision::No(Certificate::Orbit(NoCertificate::Cycle { .. }))), "{d:?}");
    }

    #[test]
    fn type_i_log_sets() {
        let s = Solver::default();
        // free part fixed, abelian part drifts by one each step
        let drift = type_i(&[&[1], &[2]], &[&[1]], &[&[1], &[0]]);
        assert_eq!(s.brp(&drift, &el(&[1], &[0]), &el(&[1], &[5])).unwrap(), Decision::Yes(5));
        assert!(s.brp(&drift, &el(&[1], &[0]), &el(&[1], &[-5])).unwrap().is_no());
        assert_eq!(
            s.philog(&swap(), &el(&[1], &[0]), &el(&[1], &[0]), false).unwrap(),
            Decision::Yes(LogSet::Progression { k0: 0, p: 2 })
        );
        let id = Endomorphism::identity(Signature::new(2, 1));
        assert_eq!(
            s.philog(&id, &el(&[1], &[3]), &el(&[1], &[3]), false).unwrap(),
            Decision::Yes(LogSet::Progression { k0: 0, p: 1 })
        );
        assert!(s.philog(&swap(), &el(&[1], &[0]), &el(&[1, 2], &[0]), false).unwrap().is_no());
    }

    #[test]
    fn tcp_examples() {
        let s = Solver::default();
        let id = Endomorphism::identity(Signature::new(2, 1));
        let z = s.tcp(&id, &el(&[1, 2], &[4]), &el(&[2, 1], &[4])).unwrap();
        assert_eq!(z.witness().unwrap().free(), &word(&[1]));
        let g = el(&[1, 2, 2], &[1]);
        assert_eq!(s.tcp(&id, &g, &g).unwrap(), Decision::Yes(FatfElement::identity(g.signature())));
        let plain = type_i(&[&[1], &[2]], &[&[1]], &[&[0], &[0]]);
        assert!(s.tcp(&plain, &el(&[1], &[0]), &el(&[1], &[1])).unwrap().is_no());
    }

    #[test]
    fn tcp_type_ii_planted() {
        let s = Solver::default();
        let phi = running();
        let g = el(&[1, -2, 1], &[3]);
        for z in [el(&[2, 1], &[1]), el(&[], &[-2]), el(&[1, 1, -2], &[0])] {
            let h = &(&phi.apply(&z).unwrap().inverse() * &g) * &z;
            let d = s.tcp(&phi, &g, &h).unwrap();
            assert!(d.is_yes(), "{d:?}");
        }
    }

    #[test]
    fn two_sided_examples() {
        let s = Solver::default();
        let phi = type_i(&[&[1, 2], &[2]], &[&[2]], &[&[1], &[0]]);
        let g = el(&[1], &[1]);
        assert_eq!(s.tsbrcp(&phi, &g, &phi.apply(&g).unwrap()).unwrap(), Decision::Yes((1, 0)));
        assert_eq!(s.tsbrcp(&phi, &g, &g).unwrap(), Decision::Yes((0, 0)));
        assert_eq!(s.tsbrcp(&swap(), &el(&[1], &[0]), &el(&[2], &[0])).unwrap(), Decision::Yes((1, 0)));
        assert!(matches!(s.tsbrcp(&running(), &g, &g), Err(Error::NotInjective)));
    }

    #[test]
    fn two_sided_cross() {
        let s = Solver::default();
        // swap with t ↦ t + x-length: classes alternate x1, x2 while the
        // abelian part grows by one per step
        let phi = type_i(&[&[2], &[1]], &[&[1]], &[&[1], &[1]]);
        let d = s.tsbrcp(&phi, &el(&[1], &[0]), &el(&[1], &[1])).unwrap();
        assert!(matches!(d, Decision::No(Certificate::Cross { entry: (0, 0), periods: (2, 2), .. })), "{d:?}");
        assert_eq!(s.tsbrcp(&phi, &el(&[1], &[0]), &el(&[2], &[1])).unwrap(), Decision::Yes((1, 0)));
        assert_eq!(s.tsbrcp(&phi, &el(&[1], &[0]), &el(&[1], &[-2])).unwrap(), Decision::Yes((0, 2)));
    }
}
