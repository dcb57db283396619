#![allow(dead_code)]

use fatf_core::linalg::Matrix;
use fatf_core::{Endomorphism, FatfElement, Int, IntMatrix, IntVector, Signature, TypeI, TypeII, Word};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random reduced word of length at most `max_len`.
pub fn word(rng: &mut Rng8, n: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    let mut letters: Vec<i32> = Vec::with_capacity(len);
    while letters.len() < len {
        let g = rng.gen_range(1..=n as i32);
        let l = if rng.gen_bool(0.5) { g } else { -g };
        if letters.last() == Some(&-l) {
            continue;
        }
        letters.push(l);
    }
    Word::new(n, letters).unwrap()
}

pub fn nontrivial_word(rng: &mut Rng8, n: usize, max_len: usize) -> Word {
    loop {
        let w = word(rng, n, max_len);
        if !w.is_identity() {
            return w;
        }
    }
}

pub fn vector(rng: &mut Rng8, len: usize, r: i64) -> IntVector {
    (0..len).map(|_| Int::from(rng.gen_range(-r..=r))).collect()
}

pub fn matrix(rng: &mut Rng8, rows: usize, cols: usize, r: i64) -> IntMatrix {
    Matrix::from_fn(rows, cols, |_, _| Int::from(rng.gen_range(-r..=r)))
}

pub fn nonsingular(rng: &mut Rng8, d: usize, r: i64) -> IntMatrix {
    loop {
        let q = matrix(rng, d, d, r);
        if !num_traits::Zero::is_zero(&q.determinant()) {
            return q;
        }
    }
}

/// Product of random elementary matrices, so `det = ±1`.
pub fn unimodular(rng: &mut Rng8, d: usize) -> IntMatrix {
    let mut q: IntMatrix = Matrix::identity(d);
    for _ in 0..2 * d {
        match rng.gen_range(0..3) {
            0 if d > 1 => {
                let (a, b) = distinct(rng, d);
                q.add_row_multiple(a, b, &Int::from(if rng.gen_bool(0.5) { 1 } else { -1 }));
            }
            1 if d > 1 => {
                let (a, b) = distinct(rng, d);
                q.swap_rows(a, b);
            }
            _ if d > 0 => {
                let a = rng.gen_range(0..d);
                q.negate_row(a);
            }
            _ => {}
        }
    }
    q
}

fn distinct(rng: &mut Rng8, d: usize) -> (usize, usize) {
    let a = rng.gen_range(0..d);
    let mut b = rng.gen_range(0..d - 1);
    if b >= a {
        b += 1;
    }
    (a, b)
}

pub fn element(rng: &mut Rng8, sig: Signature, max_len: usize, r: i64) -> FatfElement {
    FatfElement::new(word(rng, sig.n, max_len), vector(rng, sig.m, r))
}

pub fn signature(rng: &mut Rng8, n_max: usize, m_max: usize) -> Signature {
    Signature::new(rng.gen_range(1..=n_max), rng.gen_range(0..=m_max))
}

pub fn type_i(rng: &mut Rng8, sig: Signature, max_len: usize) -> Endomorphism {
    let phi = (0..sig.n).map(|_| word(rng, sig.n, max_len)).collect();
    let q = matrix(rng, sig.m, sig.m, 2);
    let p = matrix(rng, sig.n, sig.m, 2);
    Endomorphism::I(TypeI::new(sig, phi, q, p).unwrap())
}

/// Type II needs `n ≥ 2` and `m ≥ 1`.
pub fn type_ii(rng: &mut Rng8, sig: Signature, max_len: usize) -> Endomorphism {
    let w = nontrivial_word(rng, sig.n, max_len);
    let r = loop {
        let r = vector(rng, sig.m, 2);
        if r.iter().any(|x| !num_traits::Zero::is_zero(x)) {
            break r;
        }
    };
    let s = vector(rng, sig.n, 2);
    let q = matrix(rng, sig.m, sig.m, 2);
    let p = matrix(rng, sig.n, sig.m, 2);
    Endomorphism::II(TypeII::new(sig, w, r, s, q, p).unwrap())
}

/// Elementary Nielsen automorphism of `Fn`: a product move, an inversion or a swap.
pub fn nielsen(rng: &mut Rng8, n: usize) -> Vec<Word> {
    let mut imgs: Vec<Word> = (1..=n).map(|i| Word::generator(n, i)).collect();
    match rng.gen_range(0..3) {
        0 if n > 1 => {
            let (a, b) = distinct(rng, n);
            let e = if rng.gen_bool(0.5) { 1 } else { -1 };
            let g = Word::generator(n, b + 1).pow(e);
            imgs[a] = if rng.gen_bool(0.5) { &imgs[a] * &g } else { &g * &imgs[a] };
        }
        1 if n > 1 => {
            let (a, b) = distinct(rng, n);
            imgs.swap(a, b);
        }
        _ => {
            let a = rng.gen_range(0..n);
            imgs[a] = imgs[a].inverse();
        }
    }
    imgs
}

/// `a` followed by `b` on the free factor.
pub fn then(a: &[Word], b: &[Word]) -> Vec<Word> {
    a.iter().map(|w| w.substitute(b)).collect()
}

/// Random automorphism of `Fn`, optionally followed by `x1 ↦ x1^k` to make it
/// non-surjective while keeping it injective.
pub fn injective_free(rng: &mut Rng8, n: usize, moves: usize, squash: bool) -> Vec<Word> {
    let mut phi: Vec<Word> = (1..=n).map(|i| Word::generator(n, i)).collect();
    for _ in 0..moves {
        phi = then(&phi, &nielsen(rng, n));
    }
    if squash {
        let mut power: Vec<Word> = (1..=n).map(|i| Word::generator(n, i)).collect();
        power[0] = power[0].pow(rng.gen_range(2..=3));
        phi = then(&phi, &power);
    }
    phi
}

pub fn injective_type_i(rng: &mut Rng8, sig: Signature, moves: usize) -> Endomorphism {
    let squash = rng.gen_bool(0.5);
    let phi = injective_free(rng, sig.n, moves, squash);
    let q = nonsingular(rng, sig.m, 2);
    let p = matrix(rng, sig.n, sig.m, 2);
    Endomorphism::I(TypeI::new(sig, phi, q, p).unwrap())
}

pub fn choose<'a, T>(rng: &mut Rng8, xs: &'a [T]) -> &'a T {
    xs.choose(rng).unwrap()
}

/// All reduced words of length at most `max_len`, shortest first.
pub fn all_words(n: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::identity(n)];
    let mut layer = vec![Vec::<i32>::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for g in 1..=n as i32 {
                for l in [g, -g] {
                    if w.last() == Some(&-l) {
                        continue;
                    }
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().map(|v| Word::new(n, v.iter().copied()).unwrap()));
        layer = next;
    }
    out
}

/// `g, gΦ, …, gΦ^k`, stopping early once the free part exceeds `cap` letters.
pub fn orbit_capped(phi: &Endomorphism, g: &FatfElement, k: u64, cap: usize) -> Vec<FatfElement> {
    let mut out = vec![g.clone()];
    let mut cur = g.clone();
    for _ in 0..k {
        match phi.apply(&cur) {
            Ok(x) if x.free().len() <= cap => {
                out.push(x.clone());
                cur = x;
            }
            _ => break,
        }
    }
    out
}

/// Random type I (`n, m ≤ 3`) or type II (`2 ≤ n ≤ 3`, `1 ≤ m ≤ 3`) endomorphism.
pub fn random_endo(rng: &mut Rng8, ty: u8, max_len: usize) -> Endomorphism {
    if ty == 1 {
        let sig = Signature::new(rng.gen_range(1..=3), rng.gen_range(0..=3));
        type_i(rng, sig, max_len)
    } else {
        let sig = Signature::new(rng.gen_range(2..=3), rng.gen_range(1..=3));
        type_ii(rng, sig, max_len)
    }
}
