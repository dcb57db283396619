//! Three-valued answers shared by the decision procedures.

use std::fmt;

use crate::orbit::{NoCertificate, OrbitConfig};
use crate::oracle::OracleConfig;

/// Default diagonal bound for two-sided searches.
pub const DEFAULT_GRID: u64 = 512;

/// Why a `No` answer holds. Each variant names the step of the argument that
/// failed; the attached data lets it be re-checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// The free orbit `uφ^k` repeats without meeting the target.
    WordCycle { entry: u64, period: u64 },
    /// The orbit of conjugacy classes repeats without meeting the target class.
    ClassCycle { entry: u64, period: u64 },
    /// Already the abelianized orbit misses the abelianized target.
    AbelianOrbit(NoCertificate),
    /// The target is neither the start nor in the image subgroup.
    NotInImage,
    /// The target is neither conjugate to the start nor into the image subgroup.
    NotConjugateIntoImage,
    /// All images lie in a cyclic subgroup, and the exponent orbit misses.
    CyclicImage(NoCertificate),
    /// The target's free part is not a power of `w`.
    NotInCyclicSubgroup,
    /// Cyclic core lengths of target and `w` are not commensurable.
    LengthRatio,
    /// The target's free part is not conjugate to `w^l` or `w^-l`.
    NotConjugateToPower,
    /// The integer orbit of the abelian coordinates misses the target.
    Orbit(NoCertificate),
    /// Plain conjugacy fails where it is the whole question.
    NotConjugate,
    /// The abelianized equations have no integer solution.
    NoIntegerSolution,
    /// The abelian-image twisted conjugacy equation has no integer solution.
    CyclicImageEquation,
    /// The target is not periodic, so the log set is a single point.
    Aperiodic,
    /// The free log set is `{k0}` and the abelian part differs there.
    AbelianMismatch { k0: u64 },
    /// No translate of a free twisted conjugator by the fixed subgroup
    /// satisfies the abelian equation.
    FixedCosetMiss,
    /// Both class sequences are periodic and every ray of candidate pairs was
    /// refuted; one entry per affine search through the cross.
    Cross { entry: (u64, u64), periods: (u64, u64), rays: Vec<NoCertificate> },
    /// One class sequence is finite and the other never repeats.
    FiniteAgainstInfinite,
    /// Both class sequences never repeat, so the only candidate ray fails.
    SingleRay { start: Option<(u64, u64)> },
    /// Exponent sums in the stable letter differ.
    ExponentSum { left: i64, right: i64 },
    /// Every branch of a finite case split was refuted.
    Branches(Vec<Certificate>),
}

impl Certificate {
    pub fn step(&self) -> &'static str {
        match self {
            Certificate::WordCycle { .. } => "free orbit cycle misses target",
            Certificate::ClassCycle { .. } => "conjugacy class orbit cycle misses target",
            Certificate::AbelianOrbit(_) => "abelianized orbit misses target",
            Certificate::NotInImage => "v not in image of phi",
            Certificate::NotConjugateIntoImage => "v not conjugate into image of phi",
            Certificate::CyclicImage(_) => "cyclic image exponent orbit misses target",
            Certificate::NotInCyclicSubgroup => "v not in <w>",
            Certificate::LengthRatio => "cyclic length ratio non-integral",
            Certificate::NotConjugateToPower => "v not conjugate to a power of w",
            Certificate::Orbit(_) => "orbit misses target",
            Certificate::NotConjugate => "not conjugate",
            Certificate::NoIntegerSolution => "abelianized system has no integer solution",
            Certificate::CyclicImageEquation => "cyclic image equation has no integer solution",
            Certificate::Aperiodic => "target not periodic",
            Certificate::AbelianMismatch { .. } => "abelian part differs on the free log set",
            Certificate::FixedCosetMiss => "fixed subgroup coset misses abelian constraint",
            Certificate::Cross { .. } => "all rays through the periodic cross refuted",
            Certificate::FiniteAgainstInfinite => "finite class orbit against injective class orbit",
            Certificate::SingleRay { .. } => "single candidate ray refuted",
            Certificate::ExponentSum { .. } => "exponent sums differ",
            Certificate::Branches(_) => "all branches refuted",
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.step())
    }
}

/// Which bound or incomplete backend prevented an answer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Taint(pub String);

impl Taint {
    pub fn new(s: impl Into<String>) -> Self {
        Taint(s.into())
    }
}

impl fmt::Display for Taint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision<W> {
    Yes(W),
    No(Certificate),
    Unknown(Taint),
}

impl<W> Decision<W> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Decision::No(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Decision::Unknown(_))
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Decision::Yes(w) => Some(w),
            _ => None,
        }
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> Decision<V> {
        match self {
            Decision::Yes(w) => Decision::Yes(f(w)),
            Decision::No(c) => Decision::No(c),
            Decision::Unknown(t) => Decision::Unknown(t),
        }
    }
}

/// `{k0 + λp : λ ≥ 0}`, with `p = 0` meaning `{k0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogSet {
    Empty,
    Progression { k0: u64, p: u64 },
}

impl LogSet {
    pub fn contains(&self, k: u64) -> bool {
        match *self {
            LogSet::Empty => false,
            LogSet::Progression { k0, p } => k >= k0 && if p == 0 { k == k0 } else { (k - k0).is_multiple_of(p) },
        }
    }
}

impl fmt::Display for LogSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogSet::Empty => write!(f, "empty"),
            LogSet::Progression { k0, p } => write!(f, "{k0} + {p}N"),
        }
    }
}

/// Bounds used by every decision procedure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub oracle: OracleConfig,
    pub orbit: OrbitConfig,
    /// Diagonal bound for two-sided searches.
    pub grid: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config { oracle: OracleConfig::default(), orbit: OrbitConfig::default(), grid: DEFAULT_GRID }
    }
}
