use super::{snf, vec_add, vec_sub, Matrix, Scalar};

/// Integer solutions of `x·A = b`: a particular solution and a basis of the
/// left kernel of `A`.
pub fn solve_linear<T: Scalar>(a: &Matrix<T>, b: &[T]) -> Option<(Vec<T>, Vec<Vec<T>>)> {
    assert_eq!(b.len(), a.cols(), "right-hand side must have one entry per column");
    let s = snf(a);
    // x = y·U with y·D = b·V
    let c = s.v.left_mul(b);
    let mut y = vec![T::zero(); a.rows()];
    for (i, ci) in c.iter().enumerate() {
        if i < s.rank {
            let (q, r) = ci.div_rem(&s.d[(i, i)]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !ci.is_zero() {
            return None;
        }
    }
    let x0 = s.u.left_mul(&y);
    let kernel = (s.rank..a.rows()).map(|i| s.u.row(i).to_vec()).collect();
    Some((x0, kernel))
}

/// Rational solution of `x·A = b`, returned as `(numerators, denominator)` with
/// a positive denominator.
pub fn solve_scaled<T: Scalar>(a: &Matrix<T>, b: &[T]) -> Option<(Vec<T>, T)> {
    assert_eq!(b.len(), a.cols());
    let s = snf(a);
    let c = s.v.left_mul(b);
    if c.iter().skip(s.rank).any(|x| !x.is_zero()) {
        return None;
    }
    let den = (0..s.rank).fold(T::one(), |l, i| l.lcm(&s.d[(i, i)]));
    let mut y = vec![T::zero(); a.rows()];
    for i in 0..s.rank {
        y[i] = c[i].clone() * (den.clone() / s.d[(i, i)].clone());
    }
    Some((s.u.left_mul(&y), den))
}

/// `offset + span_Z(basis)` inside `Z^dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeCoset<T> {
    pub offset: Vec<T>,
    pub basis: Vec<Vec<T>>,
}

impl<T: Scalar> LatticeCoset<T> {
    pub fn new(offset: Vec<T>, basis: Vec<Vec<T>>) -> Self {
        assert!(basis.iter().all(|v| v.len() == offset.len()), "basis vectors must match the offset");
        LatticeCoset { offset, basis }
    }

    pub fn point(offset: Vec<T>) -> Self {
        LatticeCoset { offset, basis: Vec::new() }
    }

    pub fn whole(dim: usize) -> Self {
        let basis = Matrix::<T>::identity(dim).to_rows();
        LatticeCoset { offset: vec![T::zero(); dim], basis }
    }

    /// `offset + rowspace(m)`
    pub fn with_rowspace(offset: Vec<T>, m: &Matrix<T>) -> Self {
        Self::new(offset, m.to_rows())
    }

    pub fn dim(&self) -> usize {
        self.offset.len()
    }

    pub fn basis_matrix(&self) -> Matrix<T> {
        Matrix::from_rows(self.basis.clone(), self.dim()).unwrap()
    }

    /// Coefficients `λ` with `v = offset + λ·basis`, if `v` is in the coset.
    pub fn coordinates(&self, v: &[T]) -> Option<Vec<T>> {
        assert_eq!(v.len(), self.dim());
        let diff = vec_sub(v, &self.offset);
        solve_linear(&self.basis_matrix(), &diff).map(|(x, _)| x)
    }

    pub fn contains(&self, v: &[T]) -> bool {
        self.coordinates(v).is_some()
    }
}

/// Finds `w ∈ source` with `w·P ∈ target`.
pub fn coset_meet<T: Scalar>(
    source: &LatticeCoset<T>,
    p: &Matrix<T>,
    target: &LatticeCoset<T>,
) -> Option<Vec<T>> {
    assert_eq!(p.rows(), source.dim());
    assert_eq!(p.cols(), target.dim());
    // λ·(B_s P) − μ·B_t = t0 − w0·P
    let bs = source.basis_matrix();
    let bt = target.basis_matrix();
    let block = (&bs * p).vstack(&bt.scale(&-T::one()));
    let rhs = vec_sub(&target.offset, &p.left_mul(&source.offset));
    let (z, _) = solve_linear(&block, &rhs)?;
    let lambda = &z[..bs.rows()];
    Some(vec_add(&source.offset, &bs.left_mul(lambda)))
}
