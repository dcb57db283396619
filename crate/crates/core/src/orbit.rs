//! Orbit problems for integer matrices: is `y = x·M^k` for some `k ≥ k_min`?
//!
//! Full decidability needs algebraic-number machinery; this solver instead
//! combines exact iteration with a handful of certificate families, each of
//! which can be re-checked by plain integer arithmetic ([`verify_linear`]):
//!
//! * `Cycle`: the orbit repeats and all of it was enumerated;
//! * `Functional`: on every residue class of `k` modulo a period `p`, an
//!   invariant or linearly drifting functional of `M^p` pins `k` down;
//! * `Preimage`: `y ∉ Z^d·M^j`, so only `k < j` are possible;
//! * `Growth`: a quadratic form `V` with `M H Mᵀ − H ≻ 0` never decreases
//!   along the orbit and already exceeds `V(y)`;
//! * `Congruence`: modulo `q` the orbit misses `y`.
//!
//! Anything else is `Unknown` after a configurable number of steps.

use std::collections::HashMap;
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg::{dot, solve_linear, solve_scaled, vec_sub, AffineMap, Matrix};
use crate::{Int, IntMatrix, IntVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitConfig {
    /// Maximal number of plain iteration steps.
    pub bound: u64,
    /// Steps tried before looking for structural certificates.
    pub probe: u64,
    /// Largest `j` for which `Z^d·M^j` is tested.
    pub preimage_depth: u64,
    /// Periods `p` tried for functional certificates.
    pub periods: Vec<u64>,
    /// Moduli for the congruence filter.
    pub moduli: Vec<u64>,
    /// Longest orbit walked modulo `q`.
    pub congruence_steps: u64,
    /// Largest exponent a functional certificate may ask to evaluate.
    pub max_candidate: u64,
}

impl Default for OrbitConfig {
    fn default() -> Self {
        OrbitConfig {
            bound: 10_000,
            probe: 64,
            preimage_depth: 48,
            periods: vec![1, 12],
            moduli: vec![2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32],
            congruence_steps: 20_000,
            max_candidate: 1 << 20,
        }
    }
}

impl OrbitConfig {
    pub fn with_bound(bound: u64) -> Self {
        OrbitConfig { bound, ..Self::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassCertificate {
    /// `M^p f0 = f0` and `x_r·f0 ≠ y·f0`.
    Invariant { f0: IntVector },
    /// `(M^p − I) f = den·f0` and `M^p f0 = f0`: the only possible `j` is
    /// determined by `y·f = x_r·f + j·den·(x_r·f0)`, and it fails.
    Drift { f0: IntVector, f: IntVector, den: Int },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NoCertificate {
    Cycle { entry: u64, period: u64 },
    Functional { period: u64, classes: Vec<ClassCertificate> },
    Preimage { depth: u64 },
    Growth { k0: u64, form: IntMatrix },
    Congruence { modulus: u64, entry: u64, period: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitAnswer {
    Yes(u64),
    No(NoCertificate),
    Unknown { bound: u64 },
}

impl OrbitAnswer {
    pub fn is_yes(&self) -> bool {
        matches!(self, OrbitAnswer::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, OrbitAnswer::No(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, OrbitAnswer::Unknown { .. })
    }
}

/// Recorded prefix of an orbit, with the cycle once it closes.
struct Walk<S> {
    states: Vec<S>,
    index: HashMap<S, u64>,
    cycle: Option<(u64, u64)>,
}

impl<S: Clone + Eq + Hash> Walk<S> {
    fn new(start: S) -> Self {
        let mut index = HashMap::new();
        index.insert(start.clone(), 0);
        Walk { states: vec![start], index, cycle: None }
    }

    fn last_index(&self) -> u64 {
        self.states.len() as u64 - 1
    }

    /// Walks until state `upto` is known or the orbit closes.
    fn extend(&mut self, step: &impl Fn(&S) -> S, upto: u64) {
        while self.cycle.is_none() && self.last_index() < upto {
            self.push(step);
        }
    }

    fn push(&mut self, step: &impl Fn(&S) -> S) {
        let next = step(self.states.last().unwrap());
        let k = self.states.len() as u64;
        if let Some(&e) = self.index.get(&next) {
            self.cycle = Some((e, k - e));
        } else {
            self.index.insert(next.clone(), k);
            self.states.push(next);
        }
    }

    /// Smallest `k ≥ k_min` among the recorded states (and their recurrences).
    fn first_hit(&self, y: &S, k_min: u64) -> Option<u64> {
        let &i = self.index.get(y)?;
        if i >= k_min {
            return Some(i);
        }
        match self.cycle {
            Some((entry, period)) if i >= entry => Some(i + (k_min - i).div_ceil(period) * period),
            _ => None,
        }
    }
}

fn linear_step(m: &IntMatrix) -> impl Fn(&IntVector) -> IntVector + '_ {
    move |s| m.left_mul(s)
}

/// Right kernel of `a`: columns `f` with `a·f = 0`.
fn right_kernel(a: &IntMatrix) -> Vec<IntVector> {
    let zero = vec![Int::zero(); a.rows()];
    solve_linear(&a.transpose(), &zero).map(|(_, k)| k).unwrap_or_default()
}

fn residues_miss(walk: &Walk<Vec<u64>>, y: &[u64], k_min: u64) -> bool {
    let (entry, _) = walk.cycle.expect("closed walk");
    match walk.index.get(y) {
        None => true,
        Some(&i) => i < entry && i < k_min,
    }
}

fn reduce_mod(v: &[Int], q: u64) -> Vec<u64> {
    let q = Int::from(q);
    v.iter().map(|x| x.mod_floor(&q).to_u64().unwrap()).collect()
}

fn modular_step(m: &IntMatrix, q: u64) -> impl Fn(&Vec<u64>) -> Vec<u64> {
    let mq: Vec<Vec<u64>> = m.to_rows().iter().map(|r| reduce_mod(r, q)).collect();
    let d = m.cols();
    move |s: &Vec<u64>| {
        let mut out = vec![0u64; d];
        for (i, si) in s.iter().enumerate() {
            if *si == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = (*o + si * mq[i][j]) % q;
            }
        }
        out
    }
}

fn quadratic(h: &IntMatrix, v: &[Int]) -> Int {
    dot(&h.left_mul(v), v)
}

/// A symmetric `H` with `M H Mᵀ − H` positive definite, if the Stein
/// equation `M H Mᵀ − H = I` is solvable.
fn lyapunov_form(m: &IntMatrix) -> Option<IntMatrix> {
    let d = m.rows();
    let id = Matrix::identity(d);
    if (m * &m.transpose()).sub(&id).is_positive_definite() {
        return Some(id);
    }
    let a = Matrix::from_fn(d * d, d * d, |row, col| {
        let (a, b) = (row / d, row % d);
        let (i, j) = (col / d, col % d);
        let mut v = m[(i, a)].clone() * m[(j, b)].clone();
        if a == i && b == j {
            v -= Int::one();
        }
        v
    });
    let rhs: IntVector = (0..d * d).map(|k| if k / d == k % d { Int::one() } else { Int::zero() }).collect();
    let (num, _) = solve_scaled(&a, &rhs)?;
    let h = Matrix::from_fn(d, d, |i, j| num[i * d + j].clone());
    let h = h.add(&h.transpose());
    stein_gap(m, &h).is_positive_definite().then_some(h)
}

fn stein_gap(m: &IntMatrix, h: &IntMatrix) -> IntMatrix {
    (&(m * h) * &m.transpose()).sub(h)
}

enum ClassOutcome {
    Impossible(ClassCertificate),
    Hit(u64),
    Open,
}

/// Decides the residue class `k ≡ r (mod p)` using functionals of `M^p`.
fn decide_class(
    xr: &[Int],
    r: u64,
    p: u64,
    mp: &IntMatrix,
    kernel: &[IntVector],
    y: &[Int],
    k_min: u64,
    cfg: &OrbitConfig,
) -> ClassOutcome {
    for f0 in kernel {
        if dot(xr, f0) != dot(y, f0) {
            return ClassOutcome::Impossible(ClassCertificate::Invariant { f0: f0.clone() });
        }
    }
    let a = mp.sub(&Matrix::identity(mp.rows()));
    for f0 in kernel {
        if dot(xr, f0).is_zero() {
            continue;
        }
        let Some((f, den)) = solve_scaled(&a.transpose(), f0) else { continue };
        let cert = ClassCertificate::Drift { f0: f0.clone(), f, den };
        return match drift_candidate(xr, r, p, y, k_min, &cert) {
            None => ClassOutcome::Impossible(cert),
            Some(j) if j > cfg.max_candidate => ClassOutcome::Open,
            Some(j) => {
                if mp.pow(j).left_mul(xr) == y {
                    ClassOutcome::Hit(r + p * j)
                } else {
                    ClassOutcome::Impossible(cert)
                }
            }
        };
    }
    ClassOutcome::Open
}

/// The unique `j` allowed by a drift certificate, if it is admissible.
fn drift_candidate(xr: &[Int], r: u64, p: u64, y: &[Int], k_min: u64, cert: &ClassCertificate) -> Option<u64> {
    let ClassCertificate::Drift { f0, f, den } = cert else { return None };
    let step = den.clone() * dot(xr, f0);
    let (j, rem) = (dot(y, f) - dot(xr, f)).div_rem(&step);
    if !rem.is_zero() || j.is_negative() {
        return None;
    }
    let j = j.to_u64()?;
    (r + p * j >= k_min).then_some(j)
}

fn functional_certificate(
    x: &[Int],
    m: &IntMatrix,
    y: &[Int],
    k_min: u64,
    cfg: &OrbitConfig,
) -> Option<OrbitAnswer> {
    for &p in &cfg.periods {
        let mp = m.pow(p);
        let kernel = right_kernel(&mp.sub(&Matrix::identity(m.rows())));
        if kernel.is_empty() {
            continue;
        }
        let mut classes = Vec::new();
        let mut hits = Vec::new();
        let mut open = false;
        let mut xr = x.to_vec();
        for r in 0..p {
            match decide_class(&xr, r, p, &mp, &kernel, y, k_min, cfg) {
                ClassOutcome::Impossible(c) => classes.push(c),
                ClassOutcome::Hit(k) => hits.push(k),
                ClassOutcome::Open => open = true,
            }
            xr = m.left_mul(&xr);
        }
        if !open {
            return Some(match hits.into_iter().min() {
                Some(k) => OrbitAnswer::Yes(k),
                None => OrbitAnswer::No(NoCertificate::Functional { period: p, classes }),
            });
        }
    }
    None
}

/// Smallest `j ≤ depth` with `y ∉ Z^d·M^j`.
fn preimage_depth(m: &IntMatrix, y: &[Int], depth: u64) -> Option<u64> {
    let mut mj = m.clone();
    for j in 1..=depth {
        if solve_linear(&mj, y).is_none() {
            return Some(j);
        }
        mj = &mj * m;
    }
    None
}

fn congruence_certificate(x: &[Int], m: &IntMatrix, y: &[Int], k_min: u64, cfg: &OrbitConfig) -> Option<NoCertificate> {
    for &q in &cfg.moduli {
        let step = modular_step(m, q);
        let mut walk = Walk::new(reduce_mod(x, q));
        walk.extend(&step, cfg.congruence_steps);
        let Some((entry, period)) = walk.cycle else { continue };
        if residues_miss(&walk, &reduce_mod(y, q), k_min) {
            return Some(NoCertificate::Congruence { modulus: q, entry, period });
        }
    }
    None
}

/// Decides whether `y = x·M^k` for some `k ≥ k_min`; `Yes` carries the least such `k`.
pub fn solve_linear_orbit(x: &[Int], m: &IntMatrix, y: &[Int], k_min: u64, cfg: &OrbitConfig) -> OrbitAnswer {
    assert!(m.is_square() && m.rows() == x.len() && x.len() == y.len(), "orbit instance dimensions");
    let step = linear_step(m);
    let mut walk = Walk::new(x.to_vec());
    walk.extend(&step, cfg.probe.min(cfg.bound));
    if let Some(k) = walk.first_hit(&y.to_vec(), k_min) {
        return OrbitAnswer::Yes(k);
    }
    if let Some((entry, period)) = walk.cycle {
        return OrbitAnswer::No(NoCertificate::Cycle { entry, period });
    }

    if let Some(ans) = functional_certificate(x, m, y, k_min, cfg) {
        return ans;
    }

    if let Some(j) = preimage_depth(m, y, cfg.preimage_depth) {
        if j <= cfg.bound {
            walk.extend(&step, j);
            return match walk.first_hit(&y.to_vec(), k_min) {
                Some(k) if k < j => OrbitAnswer::Yes(k),
                _ => OrbitAnswer::No(NoCertificate::Preimage { depth: j }),
            };
        }
    }

    if let Some(h) = lyapunov_form(m) {
        let target = quadratic(&h, y);
        let mut k = 0;
        loop {
            walk.extend(&step, k);
            if walk.cycle.is_some() && k > walk.last_index() {
                break;
            }
            if quadratic(&h, &walk.states[k as usize]) > target {
                // V never decreases, so only the recorded states can hit.
                return match walk.first_hit(&y.to_vec(), k_min) {
                    Some(hit) => OrbitAnswer::Yes(hit),
                    None => OrbitAnswer::No(NoCertificate::Growth { k0: k, form: h }),
                };
            }
            if k >= cfg.bound {
                break;
            }
            k += 1;
        }
    }

    if let Some(c) = congruence_certificate(x, m, y, k_min, cfg) {
        return OrbitAnswer::No(c);
    }

    walk.extend(&step, cfg.bound);
    if let Some(k) = walk.first_hit(&y.to_vec(), k_min) {
        return OrbitAnswer::Yes(k);
    }
    match walk.cycle {
        Some((entry, period)) => OrbitAnswer::No(NoCertificate::Cycle { entry, period }),
        None => OrbitAnswer::Unknown { bound: cfg.bound },
    }
}

/// True when `x·M^k` is certified never to repeat: either a quadratic form
/// grows strictly along the orbit once positive, or some functional of `M^p`
/// drifts by a nonzero constant on the subsequence `x·M^(pj)`.
pub fn escapes(x: &[Int], m: &IntMatrix, cfg: &OrbitConfig) -> bool {
    assert!(m.is_square() && m.rows() == x.len(), "orbit instance dimensions");
    let step = linear_step(m);
    let mut walk = Walk::new(x.to_vec());
    walk.extend(&step, cfg.probe.min(cfg.bound));
    if walk.cycle.is_some() {
        return false;
    }
    if let Some(h) = lyapunov_form(m) {
        if walk.states.iter().any(|s| quadratic(&h, s).is_positive()) {
            return true;
        }
    }
    let mut periods = vec![1];
    periods.extend(cfg.periods.iter().copied().filter(|&p| p > 1));
    for p in periods {
        let mp = m.pow(p);
        let a = mp.sub(&Matrix::identity(m.rows()));
        for f0 in right_kernel(&a) {
            if dot(x, &f0).is_zero() {
                continue;
            }
            if let Some((_, den)) = solve_scaled(&a.transpose(), &f0) {
                if !den.is_zero() {
                    return true;
                }
            }
        }
    }
    false
}

/// A linear instance equivalent to an affine one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearizedOrbit {
    pub x: IntVector,
    pub m: IntMatrix,
    pub y: IntVector,
}

/// Moves to the fixed point when `I − M` is invertible over `Q`, and
/// homogenizes otherwise.
pub fn linearize(x: &[Int], t: &AffineMap<Int>, y: &[Int]) -> LinearizedOrbit {
    let d = t.dim();
    let i_minus_m = Matrix::identity(d).sub(&t.m);
    let delta = i_minus_m.determinant();
    if !delta.is_zero() {
        // δ(x − c) with c(I − M) = b
        let shift = i_minus_m.adjugate().left_mul(&t.b);
        let scale = |v: &[Int]| vec_sub(&v.iter().map(|a| a * &delta).collect::<Vec<_>>(), &shift);
        return LinearizedOrbit { x: scale(x), m: t.m.clone(), y: scale(y) };
    }
    let hat = |v: &[Int]| {
        let mut v = v.to_vec();
        v.push(Int::one());
        v
    };
    LinearizedOrbit { x: hat(x), m: t.homogenize(), y: hat(y) }
}

pub fn solve_affine_orbit(x: &[Int], t: &AffineMap<Int>, y: &[Int], k_min: u64, cfg: &OrbitConfig) -> OrbitAnswer {
    assert!(x.len() == t.dim() && y.len() == t.dim(), "affine orbit dimensions");
    let lin = linearize(x, t, y);
    solve_linear_orbit(&lin.x, &lin.m, &lin.y, k_min, cfg)
}

/// Least `k ≤ k_max` with `x·M^k = y`, by plain iteration.
pub fn brute_force_orbit(x: &[Int], m: &IntMatrix, y: &[Int], k_max: u64) -> Option<u64> {
    let mut s = x.to_vec();
    for k in 0..=k_max {
        if s == y {
            return Some(k);
        }
        s = m.left_mul(&s);
    }
    None
}

fn replay_misses(x: &[Int], m: &IntMatrix, y: &[Int], k_min: u64, upto: u64) -> bool {
    let mut s = x.to_vec();
    for k in 0..upto {
        if k >= k_min && s == y {
            return false;
        }
        s = m.left_mul(&s);
    }
    true
}

fn verify_class(xr: &[Int], r: u64, p: u64, mp: &IntMatrix, y: &[Int], k_min: u64, c: &ClassCertificate) -> bool {
    let id = Matrix::identity(mp.rows());
    let col = |v: &IntVector| Matrix::from_fn(v.len(), 1, |i, _| v[i].clone());
    match c {
        ClassCertificate::Invariant { f0 } => {
            &mp.sub(&id) * &col(f0) == Matrix::zeros(mp.rows(), 1) && dot(xr, f0) != dot(y, f0)
        }
        ClassCertificate::Drift { f0, f, den } => {
            let a = mp.sub(&id);
            if !(&a * &col(f0)).is_zero() || &a * &col(f) != col(f0).scale(den) || den.is_zero() || dot(xr, f0).is_zero() {
                return false;
            }
            match drift_candidate(xr, r, p, y, k_min, c) {
                None => true,
                Some(j) => mp.pow(j).left_mul(xr) != y,
            }
        }
    }
}

/// Re-checks an answer of [`solve_linear_orbit`] with integer arithmetic only.
pub fn verify_linear(x: &[Int], m: &IntMatrix, y: &[Int], k_min: u64, answer: &OrbitAnswer) -> bool {
    match answer {
        OrbitAnswer::Yes(k) => *k >= k_min && m.pow(*k).left_mul(x) == y,
        OrbitAnswer::Unknown { .. } => true,
        OrbitAnswer::No(cert) => match cert {
            NoCertificate::Cycle { entry, period } => {
                if *period == 0 {
                    return false;
                }
                let mut states = vec![x.to_vec()];
                for _ in 0..entry + period {
                    states.push(m.left_mul(states.last().unwrap()));
                }
                states[*entry as usize] == states[(entry + period) as usize]
                    && states[..(entry + period) as usize]
                        .iter()
                        .enumerate()
                        .all(|(i, s)| s != y || ((i as u64) < *entry && (i as u64) < k_min))
            }
            NoCertificate::Functional { period, classes } => {
                if classes.len() as u64 != *period {
                    return false;
                }
                let mp = m.pow(*period);
                let mut xr = x.to_vec();
                for (r, c) in classes.iter().enumerate() {
                    if !verify_class(&xr, r as u64, *period, &mp, y, k_min, c) {
                        return false;
                    }
                    xr = m.left_mul(&xr);
                }
                true
            }
            NoCertificate::Preimage { depth } => {
                *depth >= 1 && solve_linear(&m.pow(*depth), y).is_none() && replay_misses(x, m, y, k_min, *depth)
            }
            NoCertificate::Growth { k0, form } => {
                form == &form.transpose()
                    && stein_gap(m, form).is_positive_definite()
                    && replay_misses(x, m, y, k_min, k0 + 1)
                    && quadratic(form, &m.pow(*k0).left_mul(x)) > quadratic(form, y)
            }
            NoCertificate::Congruence { modulus, entry, period } => {
                let step = modular_step(m, *modulus);
                let mut walk = Walk::new(reduce_mod(x, *modulus));
                walk.extend(&step, entry + period);
                walk.cycle == Some((*entry, *period)) && residues_miss(&walk, &reduce_mod(y, *modulus), k_min)
            }
        },
    }
}

pub fn verify_affine(x: &[Int], t: &AffineMap<Int>, y: &[Int], k_min: u64, answer: &OrbitAnswer) -> bool {
    let lin = linearize(x, t, y);
    verify_linear(&lin.x, &lin.m, &lin.y, k_min, answer)
}
