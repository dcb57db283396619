//! Endomorphisms of `Fn × Zm`.
//!
//! Every endomorphism is of one of two shapes:
//!
//! * type I: `u t^a ↦ uφ · t^(aQ + ūP)` for a free endomorphism `φ`;
//! * type II: `u t^a ↦ w^(a·r + ū·s) · t^(aQ + ūP)` with `w` not a proper power
//!   and `r ≠ 0`.
//!
//! Here `ū` is the abelianization of `u`. Compositions are written on the
//! right, matching the right action: `g(ΦΨ) = (gΦ)Ψ`.

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fatf::{FatfElement, Signature};
use crate::linalg::{dot, vec_add, Matrix};
use crate::words::{SubgroupGraph, Word};
use crate::{Int, IntMatrix, IntVector};

/// Longest word any endomorphism evaluation is allowed to produce.
pub const MAX_WORD_LEN: usize = 1 << 20;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TypeI {
    sig: Signature,
    phi: Vec<Word>,
    q: IntMatrix,
    p: IntMatrix,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TypeII {
    sig: Signature,
    w: Word,
    r: IntVector,
    s: IntVector,
    q: IntMatrix,
    p: IntMatrix,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Endomorphism {
    I(TypeI),
    II(TypeII),
}

/// Block matrices describing iterates of a type II endomorphism in the basis
/// `(w, t1, …, tm)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TypeIIMatrices {
    /// `[[sᵀ, P], [rᵀ, Q]]`, of shape `(n+m) × (1+m)`.
    pub s: IntMatrix,
    /// `[[w̄·sᵀ, w̄P], [rᵀ, Q]]`, of shape `(1+m) × (1+m)`.
    pub t: IntMatrix,
    pub w: Word,
}

fn check_shape(name: &str, m: &IntMatrix, rows: usize, cols: usize) -> Result<()> {
    if m.rows() != rows || m.cols() != cols {
        return Err(Error::DimensionMismatch(format!(
            "{name} is {}x{}, expected {rows}x{cols}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

fn check_len(name: &str, v: &[Int], len: usize) -> Result<()> {
    if v.len() != len {
        return Err(Error::DimensionMismatch(format!(
            "{name} has length {}, expected {len}",
            v.len()
        )));
    }
    Ok(())
}

fn exponent(e: &Int) -> Result<i64> {
    e.to_i64().ok_or_else(|| Error::TooLarge(format!("exponent {e}")))
}

/// `w^e`, refusing to build words longer than [`MAX_WORD_LEN`].
pub fn bounded_pow(w: &Word, e: &Int) -> Result<Word> {
    let k = exponent(e)?;
    let len = w.cyclic_reduce().core.len() as u128 * k.unsigned_abs() as u128;
    if len > MAX_WORD_LEN as u128 {
        return Err(Error::TooLarge(format!("power {e} of a word of length {}", w.len())));
    }
    Ok(w.pow(k))
}

/// `true` when `w` is the preferred one of `{w, w⁻¹}`: positive first nonzero
/// abelianization coordinate, else lexicographically smaller letters.
pub fn is_canonical_orientation(w: &Word) -> bool {
    match w.abelianize().iter().find(|x| !x.is_zero()) {
        Some(x) => x.is_positive(),
        None => w.letters() <= w.inverse().letters(),
    }
}

/// `(root, d)` with `v = root^d`, `root` not a proper power and canonically oriented.
pub fn canonical_root(v: &Word) -> Result<(Word, i64)> {
    let (root, k) = v.primitive_root()?;
    let k = k as i64;
    Ok(if is_canonical_orientation(&root) { (root, k) } else { (root.inverse(), -k) })
}

fn abelianization_matrix(words: &[Word], n: usize) -> IntMatrix {
    Matrix::from_rows(words.iter().map(Word::abelianize).collect(), n).unwrap()
}

impl TypeI {
    pub fn new(sig: Signature, phi: Vec<Word>, q: IntMatrix, p: IntMatrix) -> Result<Self> {
        if phi.len() != sig.n {
            return Err(Error::NotAnEndomorphism(format!(
                "expected {} free images, got {}",
                sig.n,
                phi.len()
            )));
        }
        if let Some(w) = phi.iter().find(|w| w.rank() != sig.n) {
            return Err(Error::RankMismatch(sig.n, w.rank()));
        }
        check_shape("Q", &q, sig.m, sig.m)?;
        check_shape("P", &p, sig.n, sig.m)?;
        Ok(TypeI { sig, phi, q, p })
    }

    pub fn identity(sig: Signature) -> Self {
        TypeI {
            sig,
            phi: (1..=sig.n).map(|i| Word::generator(sig.n, i)).collect(),
            q: Matrix::identity(sig.m),
            p: Matrix::zeros(sig.n, sig.m),
        }
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn phi(&self) -> &[Word] {
        &self.phi
    }

    pub fn q(&self) -> &IntMatrix {
        &self.q
    }

    pub fn p(&self) -> &IntMatrix {
        &self.p
    }

    /// The `n × n` matrix of `φ` on the abelianization.
    pub fn phi_ab(&self) -> IntMatrix {
        abelianization_matrix(&self.phi, self.sig.n)
    }

    pub fn apply_free(&self, u: &Word) -> Result<Word> {
        if u.rank() != self.sig.n {
            return Err(Error::RankMismatch(self.sig.n, u.rank()));
        }
        let len: usize = u.letters().iter().map(|&l| self.phi[l.unsigned_abs() as usize - 1].len()).sum();
        if len > MAX_WORD_LEN {
            return Err(Error::TooLarge(format!("image word of length {len}")));
        }
        if self.sig.n == 0 {
            return Ok(u.clone());
        }
        Ok(u.substitute(&self.phi))
    }

    pub fn apply(&self, g: &FatfElement) -> Result<FatfElement> {
        self.sig.check(g.signature())?;
        let free = self.apply_free(g.free())?;
        let ab = vec_add(&self.q.left_mul(g.ab()), &self.p.left_mul(&g.free().abelianize()));
        Ok(FatfElement::new(free, ab))
    }

    /// `self` followed by `other`.
    pub fn compose(&self, other: &TypeI) -> Result<TypeI> {
        self.sig.check(other.sig)?;
        let phi = self.phi.iter().map(|w| other.apply_free(w)).collect::<Result<Vec<_>>>()?;
        let q = &self.q * &other.q;
        let p = (&self.p * &other.q).add(&(&self.phi_ab() * &other.p));
        Ok(TypeI { sig: self.sig, phi, q, p })
    }

    pub fn power(&self, k: u64) -> Result<TypeI> {
        let mut phi: Vec<Word> = (1..=self.sig.n).map(|i| Word::generator(self.sig.n, i)).collect();
        for _ in 0..k {
            phi = phi.iter().map(|w| self.apply_free(w)).collect::<Result<Vec<_>>>()?;
        }
        // P^(k) = Σ_{i=1..k} φab^(i-1) · P · Q^(k-i)
        let phi_ab = self.phi_ab();
        let mut p = Matrix::zeros(self.sig.n, self.sig.m);
        let mut left = Matrix::identity(self.sig.n);
        for i in 1..=k {
            p = p.add(&(&(&left * &self.p) * &self.q.pow(k - i)));
            left = &left * &phi_ab;
        }
        Ok(TypeI { sig: self.sig, phi, q: self.q.pow(k), p })
    }

    /// `(ū, a) ↦ (ūP + aQ, ūφab)` as an `(n+m) × (m+n)` matrix.
    fn linear_part(&self) -> IntMatrix {
        let (n, m) = (self.sig.n, self.sig.m);
        let top = self.p.hstack(&self.phi_ab());
        let bottom = self.q.hstack(&Matrix::zeros(m, n));
        top.vstack(&bottom)
    }

    pub fn is_injective(&self) -> bool {
        let g = SubgroupGraph::new(self.sig.n, &self.phi).unwrap();
        g.rank() == self.sig.n && !self.q.determinant().is_zero()
    }

    pub fn is_bijective(&self) -> bool {
        let g = SubgroupGraph::new(self.sig.n, &self.phi).unwrap();
        g.is_whole_group() && self.q.determinant().abs().is_one()
    }
}

impl TypeII {
    /// Builds a type II endomorphism; `w` is replaced by its canonical
    /// primitive root, rescaling `r` and `s`.
    pub fn new(sig: Signature, w: Word, r: IntVector, s: IntVector, q: IntMatrix, p: IntMatrix) -> Result<Self> {
        if sig.n < 2 || sig.m == 0 {
            return Err(Error::DegenerateSignature(format!(
                "type II endomorphisms need n >= 2 and m >= 1, got n = {}, m = {}",
                sig.n, sig.m
            )));
        }
        if w.rank() != sig.n {
            return Err(Error::RankMismatch(sig.n, w.rank()));
        }
        check_len("r", &r, sig.m)?;
        check_len("s", &s, sig.n)?;
        check_shape("Q", &q, sig.m, sig.m)?;
        check_shape("P", &p, sig.n, sig.m)?;
        if r.iter().all(Zero::is_zero) {
            return Err(Error::Precondition("type II needs r != 0".into()));
        }
        let (root, d) = canonical_root(&w)?;
        let d = Int::from(d);
        let scale = |v: IntVector| v.into_iter().map(|x| x * &d).collect();
        Ok(TypeII { sig, w: root, r: scale(r), s: scale(s), q, p })
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn w(&self) -> &Word {
        &self.w
    }

    pub fn r(&self) -> &[Int] {
        &self.r
    }

    pub fn s(&self) -> &[Int] {
        &self.s
    }

    pub fn q(&self) -> &IntMatrix {
        &self.q
    }

    pub fn p(&self) -> &IntMatrix {
        &self.p
    }

    /// The `w`-exponent of the image of `u t^a`.
    pub fn exponent_of(&self, g: &FatfElement) -> Int {
        dot(g.ab(), &self.r) + dot(&g.free().abelianize(), &self.s)
    }

    pub fn apply(&self, g: &FatfElement) -> Result<FatfElement> {
        self.sig.check(g.signature())?;
        let e = self.exponent_of(g);
        let ab = vec_add(&self.q.left_mul(g.ab()), &self.p.left_mul(&g.free().abelianize()));
        Ok(FatfElement::new(bounded_pow(&self.w, &e)?, ab))
    }

    pub fn matrices(&self) -> TypeIIMatrices {
        let (n, m) = (self.sig.n, self.sig.m);
        let s_col = Matrix::from_fn(n, 1, |i, _| self.s[i].clone());
        let r_col = Matrix::from_fn(m, 1, |i, _| self.r[i].clone());
        let s = s_col.hstack(&self.p).vstack(&r_col.hstack(&self.q));
        TypeIIMatrices { s, t: self.t_matrix(&self.w.abelianize()), w: self.w.clone() }
    }

    /// `[[v̄·sᵀ, v̄P], [rᵀ, Q]]`: how this map acts on `(e, b)` for elements `v^e t^b`.
    fn t_matrix(&self, v_ab: &[Int]) -> IntMatrix {
        let m = self.sig.m;
        let r_col = Matrix::from_fn(m, 1, |i, _| self.r[i].clone());
        let top = Matrix::from_fn(1, 1, |_, _| dot(v_ab, &self.s)).hstack(&Matrix::from_rows(
            vec![self.p.left_mul(v_ab)],
            m,
        ).unwrap());
        top.vstack(&r_col.hstack(&self.q))
    }
}

impl TypeIIMatrices {
    /// Coordinates `(e, b)` of `gΦ^k` in the basis `(w, t)`, for `k ≥ 1`.
    pub fn coordinates(&self, g: &FatfElement, k: u64) -> Vec<Int> {
        assert!(k >= 1);
        let mut x: Vec<Int> = g.free().abelianize();
        x.extend(g.ab().iter().cloned());
        let mut y = self.s.left_mul(&x);
        for _ in 1..k {
            y = self.t.left_mul(&y);
        }
        y
    }
}

impl Endomorphism {
    pub fn identity(sig: Signature) -> Self {
        Endomorphism::I(TypeI::identity(sig))
    }

    pub fn signature(&self) -> Signature {
        match self {
            Endomorphism::I(f) => f.sig,
            Endomorphism::II(f) => f.sig,
        }
    }

    pub fn apply(&self, g: &FatfElement) -> Result<FatfElement> {
        match self {
            Endomorphism::I(f) => f.apply(g),
            Endomorphism::II(f) => f.apply(g),
        }
    }

    /// `g` pushed `k` times through the map.
    pub fn iterate(&self, g: &FatfElement, k: u64) -> Result<FatfElement> {
        (0..k).try_fold(g.clone(), |h, _| self.apply(&h))
    }

    /// Images of `x1…xn` and of `t1…tm`.
    pub fn images(&self) -> (Vec<FatfElement>, Vec<FatfElement>) {
        let sig = self.signature();
        let xs = (1..=sig.n)
            .map(|i| self.apply(&FatfElement::from_word(Word::generator(sig.n, i), sig.m)).unwrap())
            .collect();
        let ts = (0..sig.m)
            .map(|j| {
                let mut a = vec![Int::zero(); sig.m];
                a[j] = Int::one();
                self.apply(&FatfElement::from_ab(sig.n, a)).unwrap()
            })
            .collect();
        (xs, ts)
    }

    /// Type II data, degrading to type I when `r = 0` or `w = 1`. The base
    /// word may be a proper power.
    pub fn from_type_ii_data(
        sig: Signature,
        w: Word,
        r: IntVector,
        s: IntVector,
        q: IntMatrix,
        p: IntMatrix,
    ) -> Result<Endomorphism> {
        if w.rank() != sig.n {
            return Err(Error::RankMismatch(sig.n, w.rank()));
        }
        check_len("r", &r, sig.m)?;
        check_len("s", &s, sig.n)?;
        if w.is_identity() || r.iter().all(Zero::is_zero) {
            let phi = s.iter().map(|e| bounded_pow(&w, e)).collect::<Result<Vec<_>>>()?;
            return TypeI::new(sig, phi, q, p).map(Endomorphism::I);
        }
        TypeII::new(sig, w, r, s, q, p).map(Endomorphism::II)
    }

    /// Splits an `(n+m) × (1+m)` matrix `[[sᵀ, P], [rᵀ, Q]]` over base word `w`.
    fn from_linear(sig: Signature, w: Word, big: &IntMatrix) -> Result<Endomorphism> {
        let (n, m) = (sig.n, sig.m);
        let s = (0..n).map(|i| big[(i, 0)].clone()).collect();
        let r = (0..m).map(|j| big[(n + j, 0)].clone()).collect();
        let p = Matrix::from_fn(n, m, |i, j| big[(i, j + 1)].clone());
        let q = Matrix::from_fn(m, m, |i, j| big[(n + i, j + 1)].clone());
        Self::from_type_ii_data(sig, w, r, s, q, p)
    }

    /// `self` followed by `other`.
    pub fn compose(&self, other: &Endomorphism) -> Result<Endomorphism> {
        let sig = self.signature();
        sig.check(other.signature())?;
        match (self, other) {
            (Endomorphism::I(a), Endomorphism::I(b)) => a.compose(b).map(Endomorphism::I),
            (Endomorphism::I(a), Endomorphism::II(b)) => {
                let m = sig.m;
                let r_col = Matrix::from_fn(m, 1, |i, _| b.r[i].clone());
                let s_col = Matrix::from_fn(sig.n, 1, |i, _| b.s[i].clone());
                let right = r_col.hstack(&b.q).vstack(&s_col.hstack(&b.p));
                let big = &a.linear_part() * &right;
                Self::from_linear(sig, b.w.clone(), &big)
            }
            (Endomorphism::II(a), Endomorphism::I(b)) => {
                let v = b.apply_free(&a.w)?;
                let v_ab = a.w.abelianize();
                let right = Matrix::from_fn(1, 1, |_, _| Int::one())
                    .hstack(&Matrix::from_rows(vec![b.p.left_mul(&v_ab)], sig.m).unwrap())
                    .vstack(&Matrix::zeros(sig.m, 1).hstack(&b.q));
                let big = &a.matrices().s * &right;
                Self::from_linear(sig, v, &big)
            }
            (Endomorphism::II(a), Endomorphism::II(b)) => {
                let big = &a.matrices().s * &b.t_matrix(&a.w.abelianize());
                Self::from_linear(sig, b.w.clone(), &big)
            }
        }
    }

    /// `Φ^k` in closed form.
    pub fn power(&self, k: u64) -> Result<Endomorphism> {
        if k == 0 {
            return Ok(Endomorphism::identity(self.signature()));
        }
        match self {
            Endomorphism::I(f) => f.power(k).map(Endomorphism::I),
            Endomorphism::II(f) => {
                let mats = f.matrices();
                let big = &mats.s * &mats.t.pow(k - 1);
                Self::from_linear(f.sig, f.w.clone(), &big)
            }
        }
    }

    pub fn is_injective(&self) -> bool {
        match self {
            Endomorphism::I(f) => f.is_injective(),
            Endomorphism::II(_) => false,
        }
    }

    pub fn is_bijective(&self) -> bool {
        match self {
            Endomorphism::I(f) => f.is_bijective(),
            Endomorphism::II(_) => false,
        }
    }

    pub fn as_type_i(&self) -> Option<&TypeI> {
        match self {
            Endomorphism::I(f) => Some(f),
            Endomorphism::II(_) => None,
        }
    }

    /// Recognizes the endomorphism determined by generator images, after
    /// checking the defining relations of the group on them.
    pub fn classify(sig: Signature, xs: &[FatfElement], ts: &[FatfElement]) -> Result<Endomorphism> {
        if xs.len() != sig.n || ts.len() != sig.m {
            return Err(Error::NotAnEndomorphism(format!(
                "expected {} x-images and {} t-images, got {} and {}",
                sig.n,
                sig.m,
                xs.len(),
                ts.len()
            )));
        }
        for g in xs.iter().chain(ts) {
            sig.check(g.signature())?;
        }
        let commute = |a: &Word, b: &Word| a * b == b * a;
        for (j, t) in ts.iter().enumerate() {
            for (i, x) in xs.iter().enumerate() {
                if !commute(t.free(), x.free()) {
                    return Err(Error::RelationViolated(format!("[t{}, x{}]", j + 1, i + 1)));
                }
            }
            for (k, t2) in ts.iter().enumerate().skip(j + 1) {
                if !commute(t.free(), t2.free()) {
                    return Err(Error::RelationViolated(format!("[t{}, t{}]", j + 1, k + 1)));
                }
            }
        }

        let ab_rows = |gs: &[FatfElement]| Matrix::from_rows(gs.iter().map(|g| g.ab().to_vec()).collect(), sig.m);
        let p = ab_rows(xs)?;
        let q = ab_rows(ts)?;

        let Some(v) = ts.iter().map(FatfElement::free).find(|w| !w.is_identity()) else {
            let phi = xs.iter().map(|g| g.free().clone()).collect();
            return TypeI::new(sig, phi, q, p).map(Endomorphism::I);
        };
        if sig.n < 2 {
            return Err(Error::DegenerateSignature(format!(
                "t-image {v} has nontrivial free part but n = {}",
                sig.n
            )));
        }
        let (w, _) = canonical_root(v)?;
        let index = |g: &FatfElement| -> Result<Int> {
            g.free()
                .power_index(&w)?
                .map(Int::from)
                .ok_or_else(|| Error::NotAnEndomorphism(format!("{} is not a power of {w}", g.free())))
        };
        let s = xs.iter().map(index).collect::<Result<Vec<_>>>()?;
        let r = ts.iter().map(index).collect::<Result<Vec<_>>>()?;
        TypeII::new(sig, w, r, s, q, p).map(Endomorphism::II)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vec_from_i64;

    fn sig(n: usize, m: usize) -> Signature {
        Signature::new(n, m)
    }

    fn w2(letters: &[i32]) -> Word {
        Word::new(2, letters.iter().copied()).unwrap()
    }

    fn el(letters: &[i32], ab: &[i64]) -> FatfElement {
        FatfElement::new(w2(letters), vec_from_i64(ab))
    }

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        Matrix::from_i64(rows)
    }

    fn swap_map() -> TypeI {
        TypeI::new(sig(2, 1), vec![w2(&[2]), w2(&[1])], mat(&[&[2]]), mat(&[&[1], &[0]])).unwrap()
    }

    fn running_type_ii() -> TypeII {
        TypeII::new(sig(2, 1), w2(&[1]), vec_from_i64(&[1]), vec_from_i64(&[1, 1]), mat(&[&[0]]), mat(&[&[1], &[1]]))
            .unwrap()
    }

    #[test]
    fn type_i_application() {
        let f = swap_map();
        assert_eq!(f.apply(&el(&[1], &[3])).unwrap(), el(&[2], &[7]));
        let id = TypeI::identity(sig(2, 1));
        let g = el(&[1, -2, 1], &[-4]);
        assert_eq!(id.apply(&g).unwrap(), g);
    }

    #[test]
    fn type_ii_application() {
        let f = running_type_ii();
        assert_eq!(f.apply(&el(&[2], &[2])).unwrap(), el(&[1, 1, 1], &[1]));
    }

    #[test]
    fn type_i_powers() {
        let f = swap_map();
        let f2 = f.power(2).unwrap();
        assert_eq!(f2.p(), &mat(&[&[2], &[1]]));
        assert_eq!(f2.apply(&el(&[1], &[3])).unwrap(), el(&[1], &[14]));
        assert_eq!(f.power(1).unwrap(), f);
        let shear = TypeI::new(sig(2, 1), TypeI::identity(sig(2, 1)).phi().to_vec(), mat(&[&[1]]), mat(&[&[2], &[-1]]))
            .unwrap();
        assert_eq!(shear.power(5).unwrap().p(), &mat(&[&[10], &[-5]]));
    }

    #[test]
    fn type_ii_matrices() {
        let m = running_type_ii().matrices();
        assert_eq!(m.t, mat(&[&[1, 1], &[1, 0]]));
        let g = el(&[2], &[2]);
        assert_eq!(m.coordinates(&g, 1), vec_from_i64::<Int>(&[3, 1]));
        assert_eq!(m.coordinates(&g, 2), vec_from_i64::<Int>(&[4, 3]));
        let f = Endomorphism::II(running_type_ii());
        assert_eq!(f.iterate(&g, 2).unwrap(), el(&[1, 1, 1, 1], &[3]));
    }

    #[test]
    fn classification() {
        let s = sig(2, 1);
        let f = Endomorphism::classify(s, &[el(&[1], &[1]), el(&[2], &[0])], &[el(&[], &[2])]).unwrap();
        let Endomorphism::I(f) = f else { panic!("expected type I") };
        assert_eq!(f.phi(), &[w2(&[1]), w2(&[2])]);
        assert_eq!((f.p(), f.q()), (&mat(&[&[1], &[0]]), &mat(&[&[2]])));

        let err = Endomorphism::classify(s, &[el(&[1], &[0]), el(&[2], &[0])], &[el(&[1], &[0])]);
        assert_eq!(err, Err(Error::RelationViolated("[t1, x2]".into())));

        let f = Endomorphism::classify(s, &[el(&[1], &[0]), el(&[1], &[0])], &[el(&[1], &[1])]).unwrap();
        let Endomorphism::II(f) = f else { panic!("expected type II") };
        assert_eq!(f.w(), &w2(&[1]));
        assert_eq!((f.s(), f.r()), (&vec_from_i64::<Int>(&[1, 1])[..], &vec_from_i64::<Int>(&[1])[..]));
        assert_eq!((f.q(), f.p()), (&mat(&[&[1]]), &mat(&[&[0], &[0]])));
    }

    #[test]
    fn classification_edge_cases() {
        let s = sig(1, 1);
        let g = |l: &[i32], a: i64| FatfElement::new(Word::new(1, l.iter().copied()).unwrap(), vec_from_i64(&[a]));
        assert!(matches!(
            Endomorphism::classify(s, &[g(&[1], 0)], &[g(&[1], 1)]),
            Err(Error::DegenerateSignature(_))
        ));
        assert!(matches!(Endomorphism::classify(s, &[g(&[1], 0)], &[g(&[], 3)]), Ok(Endomorphism::I(_))));
        assert!(matches!(Endomorphism::classify(s, &[], &[g(&[], 3)]), Err(Error::NotAnEndomorphism(_))));
    }

    #[test]
    fn type_ii_canonical_roots() {
        let f = TypeII::new(sig(2, 1), w2(&[-1, -1]), vec_from_i64(&[1]), vec_from_i64(&[0, 2]), mat(&[&[1]]), mat(&[&[0], &[0]]))
            .unwrap();
        assert_eq!(f.w(), &w2(&[1]));
        assert_eq!(f.r(), &vec_from_i64::<Int>(&[-2])[..]);
        assert_eq!(f.s(), &vec_from_i64::<Int>(&[0, -4])[..]);
    }

    #[test]
    fn compositions_match_two_step_application() {
        let a = Endomorphism::I(swap_map());
        let b = Endomorphism::II(running_type_ii());
        let gs = [el(&[1, 2, -1], &[2]), el(&[2, 2], &[-1]), el(&[], &[3]), el(&[-2, 1], &[0])];
        for (f, g) in [(&a, &a), (&a, &b), (&b, &a), (&b, &b)] {
            let fg = f.compose(g).unwrap();
            for x in &gs {
                assert_eq!(fg.apply(x).unwrap(), g.apply(&f.apply(x).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn composing_into_a_degenerate_type_ii() {
        // x1, x2 ↦ 1 kills w, so the composite is type I with trivial free part
        let kill = Endomorphism::I(TypeI::new(sig(2, 1), vec![w2(&[]), w2(&[])], mat(&[&[1]]), mat(&[&[0], &[0]])).unwrap());
        let b = Endomorphism::II(running_type_ii());
        let c = b.compose(&kill).unwrap();
        assert!(matches!(c, Endomorphism::I(_)));
        let x = el(&[2, 1], &[1]);
        assert_eq!(c.apply(&x).unwrap(), kill.apply(&b.apply(&x).unwrap()).unwrap());
    }

    #[test]
    fn injectivity() {
        assert!(!Endomorphism::II(running_type_ii()).is_injective());
        let f = TypeI::new(sig(2, 1), TypeI::identity(sig(2, 1)).phi().to_vec(), mat(&[&[2]]), mat(&[&[0], &[0]])).unwrap();
        assert!(f.is_injective() && !f.is_bijective());
        let f = TypeI::new(sig(2, 1), vec![w2(&[1, 2]), w2(&[2])], mat(&[&[1]]), mat(&[&[0], &[0]])).unwrap();
        assert!(f.is_injective() && f.is_bijective());
        let f = TypeI::new(sig(2, 1), vec![w2(&[1]), w2(&[1])], mat(&[&[1]]), mat(&[&[0], &[0]])).unwrap();
        assert!(!f.is_injective());
    }
}
