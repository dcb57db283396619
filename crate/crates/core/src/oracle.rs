//! Free-group subproblems behind the FATF procedures.
//!
//! Two desk-scale backends stand in for the general free-group algorithms:
//! bounded iteration and enumeration with exact equality and cycle detection,
//! and an exact reduction to a one-dimensional orbit problem when every image
//! lies in one cyclic subgroup `⟨w⟩`. Whenever neither can certify an answer
//! the result is `Unknown`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::decision::{Certificate, Decision, LogSet, Taint};
use crate::endo::canonical_root;
use crate::error::{Error, Result};
use crate::linalg::{dot, solve_linear, vec_sub, Matrix};
use crate::orbit::{escapes, solve_linear_orbit, OrbitAnswer, OrbitConfig};
use crate::words::{Letter, SubgroupGraph, Word};
use crate::{Int, IntMatrix, IntVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Bounded,
    AbelianImage,
    Auto,
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Backend> {
        match s {
            "bounded" => Ok(Backend::Bounded),
            "abelian" | "abelian-image" => Ok(Backend::AbelianImage),
            "auto" => Ok(Backend::Auto),
            _ => Err(Error::Precondition(format!("unknown oracle backend `{s}`"))),
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Bounded => "bounded",
            Backend::AbelianImage => "abelian",
            Backend::Auto => "auto",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub backend: Backend,
    /// Iteration steps for orbit walks.
    pub steps: u64,
    /// Word length beyond which walks give up (raised to `4·|input|` when larger).
    pub maxlen: usize,
    /// Longest twisted conjugator tried by enumeration.
    pub tcp_len: usize,
    /// Longest fixed word tried by enumeration.
    pub fix_len: usize,
    /// Most words any single enumeration visits.
    pub search_cap: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            backend: Backend::Auto,
            steps: 10_000,
            maxlen: 64,
            tcp_len: 6,
            fix_len: 6,
            search_cap: 200_000,
        }
    }
}

/// Generators of a fixed subgroup; `exact` is false when only the words found
/// by a bounded search are listed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedSubgroup {
    pub gens: Vec<Word>,
    pub exact: bool,
}

/// First logarithm and period of a free orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeLog {
    pub first: Decision<u64>,
    /// `Yes(p)` with `p ≥ 1` the least return time of the target, `No` when
    /// the target never returns.
    pub period: Decision<u64>,
}

impl FreeLog {
    /// `No` stands for the empty set.
    pub fn log_set(&self) -> Decision<LogSet> {
        match (&self.first, &self.period) {
            (Decision::No(c), _) => Decision::No(c.clone()),
            (Decision::Unknown(t), _) => Decision::Unknown(t.clone()),
            (Decision::Yes(k0), Decision::Yes(p)) => Decision::Yes(LogSet::Progression { k0: *k0, p: *p }),
            (Decision::Yes(k0), Decision::No(_)) => Decision::Yes(LogSet::Progression { k0: *k0, p: 0 }),
            (Decision::Yes(_), Decision::Unknown(t)) => Decision::Unknown(t.clone()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitShape {
    /// Classes `0..entry+period` are stored and then repeat with `period`.
    Periodic { entry: u64, period: u64 },
    /// No two classes of the orbit coincide (certified on abelianizations).
    Escaping,
    /// Neither could be established within the bounds.
    Open,
}

/// The sequence of conjugacy classes of `uφ^r`, stored as cyclic cores.
#[derive(Clone, Debug)]
pub struct ClassOrbit {
    cores: Vec<Word>,
    keys: Vec<Vec<Letter>>,
    pub shape: OrbitShape,
}

impl ClassOrbit {
    pub fn stored(&self) -> usize {
        self.cores.len()
    }

    fn index(&self, r: u64) -> Option<usize> {
        if (r as usize) < self.cores.len() {
            return Some(r as usize);
        }
        match self.shape {
            OrbitShape::Periodic { entry, period } => Some((entry + (r - entry) % period) as usize),
            _ => None,
        }
    }

    pub fn class(&self, r: u64) -> Option<&Word> {
        self.index(r).map(|i| &self.cores[i])
    }

    pub fn key(&self, r: u64) -> Option<&[Letter]> {
        self.index(r).map(|i| self.keys[i].as_slice())
    }
}

/// The free-group questions the FATF procedures rely on.
pub trait FreeOracle {
    fn config(&self) -> &OracleConfig;

    /// Least `k` with `uφ^k = v`.
    fn brp(&self, phi: &[Word], u: &Word, v: &Word) -> Decision<u64>;

    /// Least `k` with `uφ^k ∼ v`.
    fn brcp(&self, phi: &[Word], u: &Word, v: &Word) -> Decision<u64>;

    /// Some `z` with `(zφ)⁻¹·u·z = v`.
    fn tcp(&self, phi: &[Word], u: &Word, v: &Word) -> Decision<Word>;

    /// Generators of `{z : zψ = z}`.
    fn fix(&self, psi: &[Word]) -> FixedSubgroup;

    /// Conjugacy classes of `uφ^r` for `r ≤ limit`.
    fn class_orbit(&self, phi: &[Word], u: &Word, limit: u64) -> ClassOrbit;

    /// Least `p ≥ 1` with `vφ^p = v` (or `∼ v` when `conjugacy`).
    fn period(&self, phi: &[Word], v: &Word, conjugacy: bool) -> Decision<u64> {
        let Some(next) = apply_capped(phi, v, self.cap(&[v])) else {
            return Decision::Unknown(Taint::new("free period: image exceeds length bound"));
        };
        let d = if conjugacy { self.brcp(phi, &next, v) } else { self.brp(phi, &next, v) };
        d.map(|j| j + 1)
    }

    fn philog(&self, phi: &[Word], u: &Word, v: &Word) -> FreeLog {
        let first = self.brp(phi, u, v);
        let period = match &first {
            Decision::Yes(_) => self.period(phi, v, false),
            other => other.clone(),
        };
        FreeLog { first, period }
    }

    fn conj_philog(&self, phi: &[Word], u: &Word, v: &Word) -> FreeLog {
        let first = self.brcp(phi, u, v);
        let period = match &first {
            Decision::Yes(_) => self.period(phi, v, true),
            other => other.clone(),
        };
        FreeLog { first, period }
    }

    /// `Fix(φγ_u)` for `y ↦ u⁻¹·(yφ)·u`.
    fn fix_twisted(&self, phi: &[Word], u: &Word) -> FixedSubgroup {
        let n = u.rank();
        if is_identity_map(phi) {
            // centralizer of u
            if u.is_identity() {
                return FixedSubgroup { gens: (1..=n).map(|i| Word::generator(n, i)).collect(), exact: true };
            }
            let (root, _) = u.primitive_root().expect("nontrivial word");
            return FixedSubgroup { gens: vec![root], exact: true };
        }
        let psi: Vec<Word> = phi.iter().map(|w| w.conjugate_by(u)).collect();
        self.fix(&psi)
    }

    /// Least `(r, s)` in the order `(r + s, s)` with `uφ^r ∼ vφ^s`, for injective `φ`.
    fn tsbrcp(&self, phi: &[Word], u: &Word, v: &Word, grid: u64) -> Result<Decision<(u64, u64)>> {
        check_injective(phi, u.rank())?;
        let limit = self.config().steps.max(grid);
        let a = self.class_orbit(phi, u, limit);
        let b = self.class_orbit(phi, v, limit);
        Ok(two_sided_classes(&a, &b, grid, |_, _| true))
    }

    fn cap(&self, words: &[&Word]) -> usize {
        let longest = words.iter().map(|w| w.len()).max().unwrap_or(0);
        self.config().maxlen.max(4 * longest)
    }
}

pub(crate) fn check_injective(phi: &[Word], n: usize) -> Result<()> {
    let g = SubgroupGraph::new(n, phi)?;
    if g.rank() != n {
        return Err(Error::NotInjective);
    }
    Ok(())
}

/// Scans pairs of equal classes in the order `(r + s, s)` and accepts the first
/// one passing `accept`. Without a hit, decides from the shapes of the orbits
/// when `accept` is trivially true.
pub(crate) fn two_sided_classes(
    a: &ClassOrbit,
    b: &ClassOrbit,
    grid: u64,
    mut accept: impl FnMut(u64, u64) -> bool,
) -> Decision<(u64, u64)> {
    if let (OrbitShape::Periodic { entry: ea, period: pa }, OrbitShape::Periodic { entry: eb, period: pb }) =
        (a.shape, b.shape)
    {
        // Any solution shifts back into the stored boxes, so those suffice.
        let mut best: Option<(u64, u64)> = None;
        let mut by_key: HashMap<&[Letter], Vec<u64>> = HashMap::new();
        for s in 0..eb + pb {
            by_key.entry(b.key(s).unwrap()).or_default().push(s);
        }
        for r in 0..ea + pa {
            for &s in by_key.get(a.key(r).unwrap()).map(Vec::as_slice).unwrap_or(&[]) {
                let better = best.is_none_or(|(br, bs)| (r + s, s) < (br + bs, bs));
                if better && accept(r, s) {
                    best = Some((r, s));
                }
            }
        }
        return match best {
            Some(w) => Decision::Yes(w),
            None => Decision::No(Certificate::ClassCycle { entry: ea.max(eb), period: pa.lcm(&pb) }),
        };
    }
    for t in 0..=grid {
        for s in 0..=t {
            let r = t - s;
            if let (Some(ka), Some(kb)) = (a.key(r), b.key(s)) {
                if ka == kb && accept(r, s) {
                    return Decision::Yes((r, s));
                }
            }
        }
    }
    match (a.shape, b.shape) {
        (OrbitShape::Periodic { .. }, OrbitShape::Escaping) | (OrbitShape::Escaping, OrbitShape::Periodic { .. }) => {
            Decision::No(Certificate::FiniteAgainstInfinite)
        }
        _ => Decision::Unknown(Taint::new(format!("two-sided class search: grid {grid} exhausted"))),
    }
}

/// Desk-scale oracle combining the bounded and cyclic-image backends.
#[derive(Clone, Debug, Default)]
pub struct DeskOracle {
    cfg: OracleConfig,
}

impl DeskOracle {
    pub fn new(cfg: OracleConfig) -> Self {
        DeskOracle { cfg }
    }

    fn orbit_cfg(&self) -> OrbitConfig {
        OrbitConfig::with_bound(self.cfg.steps)
    }

    /// `Some` when the cyclic-image backend should answer; `Err` when it was
    /// forced but does not apply.
    fn cyclic(&self, phi: &[Word]) -> std::result::Result<Option<CyclicImage>, Taint> {
        match self.cfg.backend {
            Backend::Bounded => Ok(None),
            Backend::Auto => Ok(cyclic_image(phi)),
            Backend::AbelianImage => cyclic_image(phi)
                .map(Some)
                .ok_or_else(|| Taint::new("abelian-image backend: images not in a common cyclic subgroup")),
        }
    }

    fn abelian_no(&self, phi: &[Word], u: &Word, v: &Word) -> Option<Certificate> {
        let m = phi_ab(phi, u.rank());
        match solve_linear_orbit(&u.abelianize(), &m, &v.abelianize(), 0, &self.orbit_cfg()) {
            OrbitAnswer::No(c) => Some(Certificate::AbelianOrbit(c)),
            _ => None,
        }
    }
}

/// `φ(x_i) = w^(s_i)` for all `i`.
#[derive(Clone, Debug)]
struct CyclicImage {
    w: Word,
    s: IntVector,
}

impl CyclicImage {
    /// `e ↦ σe` with `σ = w̄·s` acts on exponents of `w`.
    fn sigma(&self) -> Int {
        dot(&self.w.abelianize(), &self.s)
    }

    fn exponent(&self, u: &Word) -> Int {
        dot(&u.abelianize(), &self.s)
    }

    /// Least `k ≥ 1` with `uφ^k = w^l`.
    fn reach(&self, u: &Word, l: i64, cfg: &OrbitConfig) -> Decision<u64> {
        let m = Matrix::from_fn(1, 1, |_, _| self.sigma());
        match solve_linear_orbit(&[self.exponent(u)], &m, &[Int::from(l)], 0, cfg) {
            OrbitAnswer::Yes(j) => Decision::Yes(j + 1),
            OrbitAnswer::No(c) => Decision::No(Certificate::CyclicImage(c)),
            OrbitAnswer::Unknown { bound } => Decision::Unknown(Taint::new(format!("cyclic image orbit: bound {bound}"))),
        }
    }
}

fn cyclic_image(phi: &[Word]) -> Option<CyclicImage> {
    let n = phi.len();
    if n == 0 {
        return None;
    }
    let Some(first) = phi.iter().find(|w| !w.is_identity()) else {
        return Some(CyclicImage { w: Word::generator(n, 1), s: vec![Int::zero(); n] });
    };
    let (w, _) = canonical_root(first).ok()?;
    let s = phi
        .iter()
        .map(|x| x.power_index(&w).ok().flatten().map(Int::from))
        .collect::<Option<Vec<_>>>()?;
    Some(CyclicImage { w, s })
}

pub(crate) fn is_identity_map(phi: &[Word]) -> bool {
    phi.iter().enumerate().all(|(i, w)| w.letters() == [i as Letter + 1])
}

/// Matrix of `φ` on `Z^n`, one row per generator image.
pub fn phi_ab(phi: &[Word], n: usize) -> IntMatrix {
    Matrix::from_rows(phi.iter().map(Word::abelianize).collect(), n).unwrap()
}

/// `wφ`, or `None` if it would be longer than `cap`.
pub fn apply_capped(phi: &[Word], w: &Word, cap: usize) -> Option<Word> {
    if phi.is_empty() {
        return Some(w.clone());
    }
    let len: usize = w.letters().iter().map(|&l| phi[l.unsigned_abs() as usize - 1].len()).sum();
    (len <= cap).then(|| w.substitute(phi))
}

/// Reduced words of length `≤ max_len` in order of length, then letter order
/// `x1, x1⁻¹, x2, …`. Stops when `visit` returns true or after `cap` words;
/// returns false if the cap cut the enumeration short.
pub fn for_each_word(rank: usize, max_len: usize, cap: usize, mut visit: impl FnMut(&Word) -> bool) -> bool {
    let alphabet: Vec<Letter> = (1..=rank as Letter).flat_map(|i| [i, -i]).collect();
    let mut frontier: Vec<Vec<Letter>> = vec![Vec::new()];
    let mut seen = 0usize;
    for len in 0..=max_len {
        for letters in &frontier {
            if seen >= cap {
                return false;
            }
            seen += 1;
            if visit(&Word::new(rank, letters.iter().copied()).unwrap()) {
                return true;
            }
        }
        if len == max_len {
            break;
        }
        let mut next = Vec::new();
        for letters in &frontier {
            for &a in &alphabet {
                if letters.last() == Some(&-a) {
                    continue;
                }
                let mut w = letters.clone();
                w.push(a);
                next.push(w);
            }
        }
        frontier = next;
    }
    true
}

impl FreeOracle for DeskOracle {
    fn config(&self) -> &OracleConfig {
        &self.cfg
    }

    fn brp(&self, phi: &[Word], u: &Word, v: &Word) -> Decision<u64> {
        if u == v {
            return Decision::Yes(0);
        }
        match self.cyclic(phi) {
            Err(t) => return Decision::Unknown(t),
            Ok(Some(ci)) => {
                return match v.power_index(&ci.w) {
                    Ok(Some(l)) => ci.reach(u, l, &self.orbit_cfg()),
                    _ => Decision::No(Certificate::NotInCyclicSubgroup),
                };
            }
            Ok(None) => {}
        }
        let cap = self.cap(&[u, v]);
        let mut seen: HashMap<Word, u64> = HashMap::new();
        seen.insert(u.clone(), 0);
        let mut cur = u.clone();
        let mut blocked = "step bound";
        for k in 1..=self.cfg.steps {
            let Some(next) = apply_capped(phi, &cur, cap) else {
                blocked = "length bound";
                break;
            };
            if &next == v {
                return Decision::Yes(k);
            }
            if let Some(&e) = seen.get(&next) {
                return Decision::No(Certificate::WordCycle { entry: e, period: k - e });
            }
            seen.insert(next.clone(), k);
            cur = next;
        }
        if !SubgroupGraph::new(u.rank(), phi).map(|g| g.contains(v)).unwrap_or(true) {
            return Decision::No(Certificate::NotInImage);
        }
        if let Some(c) = self.abelian_no(phi, u, v) {
            return Decision::No(c);
        }
        Decision::Unknown(Taint::new(format!("free BrP: {blocked} reached")))
    }

    fn brcp(&self, phi: &[Word], u: &Word, v: &Word) -> Decision<u64> {
        if u.is_conjugate(v).is_some() {
            return Decision::Yes(0);
        }
        match self.cyclic(phi) {
            Err(t) => return Decision::Unknown(t),
            Ok(Some(ci)) => {
                let core = ci.w.cyclic_reduce().core.len();
                let vc = v.cyclic_reduce().core.len();
                if !vc.is_multiple_of(core) {
                    return Decision::No(Certificate::LengthRatio);
                }
                let l = (vc / core) as i64;
                let Some(l) = [l, -l].into_iter().find(|&l| ci.w.pow(l).is_conjugate(v).is_some()) else {
                    return Decision::No(Certificate::NotConjugateToPower);
                };
                return ci.reach(u, l, &self.orbit_cfg());
            }
            Ok(None) => {}
        }
        let orbit = self.class_orbit(phi, u, self.cfg.steps);
        let target = v.conjugacy_key();
        for r in 1..orbit.stored() as u64 {
            if orbit.key(r) == Some(target.as_slice()) {
                return Decision::Yes(r);
            }
        }
        if let OrbitShape::Periodic { entry, period } = orbit.shape {
            return Decision::No(Certificate::ClassCycle { entry, period });
        }
        if !SubgroupGraph::new(u.rank(), phi).map(|g| g.contains_conjugate(v)).unwrap_or(true) {
            return Decision::No(Certificate::NotConjugateIntoImage);
        }
        if let Some(c) = self.abelian_no(phi, u, v) {
            return Decision::No(c);
        }
        Decision::Unknown(Taint::new("free BrCP: bound reached"))
    }

    fn tcp(&self, phi: &[Word], u: &Word, v: &Word) -> Decision<Word> {
        let n = u.rank();
        if is_identity_map(phi) {
            return match u.is_conjugate(v) {
                Some(z) => Decision::Yes(z),
                None => Decision::No(Certificate::NotConjugate),
            };
        }
        let delta = vec_sub(&v.abelianize(), &u.abelianize());
        match self.cyclic(phi) {
            Err(t) => return Decision::Unknown(t),
            Ok(Some(ci)) => {
                // z = u⁻¹ w^e v with e(1 − σ) = (v̄ − ū)·s
                let rhs = dot(&delta, &ci.s);
                let coef = Int::one() - ci.sigma();
                let e = if coef.is_zero() {
                    if !rhs.is_zero() {
                        return Decision::No(Certificate::CyclicImageEquation);
                    }
                    Int::zero()
                } else {
                    let (q, r) = rhs.div_rem(&coef);
                    if !r.is_zero() {
                        return Decision::No(Certificate::CyclicImageEquation);
                    }
                    q
                };
                let Some(e) = e.to_i64().filter(|e| e.unsigned_abs() as usize * ci.w.len() <= crate::endo::MAX_WORD_LEN)
                else {
                    return Decision::Unknown(Taint::new("cyclic image TCP: witness too long"));
                };
                return Decision::Yes(&(&u.inverse() * &ci.w.pow(e)) * v);
            }
            Ok(None) => {}
        }
        let i_minus = Matrix::identity(n).sub(&phi_ab(phi, n));
        if solve_linear(&i_minus, &delta).is_none() {
            return Decision::No(Certificate::NoIntegerSolution);
        }
        let cap = self.cap(&[u, v]).max(self.cfg.tcp_len * phi.iter().map(Word::len).max().unwrap_or(1));
        let mut found = None;
        let complete = for_each_word(n, self.cfg.tcp_len, self.cfg.search_cap, |z| {
            if i_minus.left_mul(&z.abelianize()) != delta {
                return false;
            }
            let Some(zphi) = apply_capped(phi, z, cap) else { return false };
            if &(&zphi.inverse() * u) * z == *v {
                found = Some(z.clone());
                return true;
            }
            false
        });
        match found {
            Some(z) => Decision::Yes(z),
            None => Decision::Unknown(Taint::new(format!(
                "free TCP: no twisted conjugator of length <= {}{}",
                self.cfg.tcp_len,
                if complete { "" } else { " (search cap hit)" }
            ))),
        }
    }

    fn fix(&self, psi: &[Word]) -> FixedSubgroup {
        let n = psi.len();
        if is_identity_map(psi) {
            return FixedSubgroup { gens: (1..=n).map(|i| Word::generator(n, i)).collect(), exact: true };
        }
        if self.cfg.backend != Backend::Bounded {
            if let Some(ci) = cyclic_image(psi) {
                // Fixed words lie in ⟨w⟩, and w^e is fixed iff eσ = e.
                let gens = if ci.sigma().is_one() { vec![ci.w] } else { Vec::new() };
                return FixedSubgroup { gens, exact: true };
            }
        }
        let kernel = phi_ab(psi, n).sub(&Matrix::identity(n));
        let mut gens: Vec<Word> = Vec::new();
        let mut graph = SubgroupGraph::new(n, &gens).unwrap();
        let cap = self.cfg.maxlen.max(self.cfg.fix_len * psi.iter().map(Word::len).max().unwrap_or(1));
        for_each_word(n, self.cfg.fix_len, self.cfg.search_cap, |y| {
            if y.is_identity() || kernel.left_mul(&y.abelianize()).iter().any(|x| !x.is_zero()) {
                return false;
            }
            if apply_capped(psi, y, cap).as_ref() == Some(y) && !graph.contains(y) {
                gens.push(y.clone());
                graph = SubgroupGraph::new(n, &gens).unwrap();
            }
            false
        });
        FixedSubgroup { gens, exact: false }
    }

    fn class_orbit(&self, phi: &[Word], u: &Word, limit: u64) -> ClassOrbit {
        let cap = self.cap(&[u]);
        let mut cores = vec![u.cyclic_reduce().core];
        let mut keys = vec![u.conjugacy_key()];
        let mut index: HashMap<Vec<Letter>, u64> = HashMap::new();
        index.insert(keys[0].clone(), 0);
        let mut shape = OrbitShape::Open;
        for k in 1..=limit {
            let Some(next) = apply_capped(phi, cores.last().unwrap(), cap) else { break };
            let core = next.cyclic_reduce().core;
            let key = core.conjugacy_key();
            if let Some(&e) = index.get(&key) {
                shape = OrbitShape::Periodic { entry: e, period: k - e };
                break;
            }
            index.insert(key.clone(), k);
            cores.push(core);
            keys.push(key);
        }
        if shape == OrbitShape::Open && escapes(&u.abelianize(), &phi_ab(phi, u.rank()), &self.orbit_cfg()) {
            shape = OrbitShape::Escaping;
        }
        ClassOrbit { cores, keys, shape }
    }
}
