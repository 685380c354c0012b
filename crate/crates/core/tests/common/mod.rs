//! Independent oracles shared by the integration tests. Nothing here calls
//! into the solver being checked.
#![allow(dead_code)]

use std::collections::HashMap;

use massey_core::{HomogeneousPoly, Monomial};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn p(s: &str) -> HomogeneousPoly {
    s.parse().unwrap()
}

pub fn fermat(n: u32) -> HomogeneousPoly {
    p(&format!("x0^{n} + x1^{n} + x2^{n}"))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// All exponent triples of degree d, in an arbitrary but fixed order.
pub fn monomials(d: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for a in 0..=d {
        for b in 0..=d - a {
            out.push([a, b, d - a - b]);
        }
    }
    out
}

/// Rank of a dense rational matrix by textbook Gaussian elimination.
pub fn naive_rank(mut m: Vec<Vec<BigRational>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pr) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, pr);
        let piv = m[rank][c].clone();
        for r in 0..rows {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &piv;
                let pivot_row = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot_row).skip(c) {
                    *x -= y * &f;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Dense matrix whose columns are the coordinates of all `m * g` of degree d,
/// optionally followed by extra columns.
pub fn ideal_columns(gens: &[HomogeneousPoly], d: u32, extra: &[HomogeneousPoly]) -> Vec<Vec<BigRational>> {
    let rows = monomials(d);
    let index: HashMap<[u32; 3], usize> = rows.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut cols: Vec<Vec<BigRational>> = Vec::new();
    let to_col = |q: &HomogeneousPoly| {
        let mut v = vec![BigRational::zero(); rows.len()];
        for (m, c) in q.terms() {
            v[index[&m.exponents()]] = c.clone();
        }
        v
    };
    for g in gens {
        if g.degree() > d {
            continue;
        }
        for e in monomials(d - g.degree()) {
            cols.push(to_col(&g.mul_monomial(&Monomial(e))));
        }
    }
    for q in extra {
        cols.push(to_col(q));
    }
    // transpose into row-major
    (0..rows.len())
        .map(|r| cols.iter().map(|c| c[r].clone()).collect())
        .collect()
}

pub fn ideal_rank(gens: &[HomogeneousPoly], d: u32, extra: &[HomogeneousPoly]) -> usize {
    let m = ideal_columns(gens, d, extra);
    if m.first().is_none_or(Vec::is_empty) {
        return 0;
    }
    naive_rank(m)
}

/// Coefficients of ((1 - t^k) / (1 - t))^3 = (1 + t + ... + t^{k-1})^3.
pub fn ci_hilbert_series(k: u32) -> Vec<u64> {
    let base = vec![1u64; k as usize];
    let mul = |a: &[u64], b: &[u64]| {
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    };
    mul(&mul(&base, &base), &base)
}

pub fn small_coeff<R: Rng>(rng: &mut R) -> BigRational {
    BigRational::from_integer(BigInt::from(rng.random_range(-3i64..=3)))
}

/// Dense random polynomial of degree d with small integer coefficients.
pub fn random_dense<R: Rng>(d: u32, rng: &mut R) -> HomogeneousPoly {
    HomogeneousPoly::from_terms(d, monomials(d).into_iter().map(|e| (small_coeff(rng), Monomial(e)))).unwrap()
}

/// Sparse perturbation of the Fermat curve: x0^n + x1^n + x2^n plus a few
/// small random terms.
pub fn perturbed_fermat<R: Rng>(n: u32, terms: usize, rng: &mut R) -> HomogeneousPoly {
    let ms = monomials(n);
    let mut g = fermat(n);
    for _ in 0..terms {
        let m = ms[rng.random_range(0..ms.len())];
        g = &g + &HomogeneousPoly::term(small_coeff(rng), Monomial(m));
    }
    g
}

/// `g(L x)` for a 3×3 matrix `L` of integers (rows give the new coordinates).
pub fn substitute(g: &HomogeneousPoly, l: [[i64; 3]; 3]) -> HomogeneousPoly {
    let forms: Vec<HomogeneousPoly> = l
        .iter()
        .map(|row| {
            HomogeneousPoly::from_terms(
                1,
                row.iter()
                    .enumerate()
                    .map(|(j, c)| (BigRational::from_integer(BigInt::from(*c)), Monomial::var(j))),
            )
            .unwrap()
        })
        .collect();
    let mut out = HomogeneousPoly::zero(g.degree());
    for (m, c) in g.terms() {
        let e = m.exponents();
        let t = forms[0].pow(e[0]) * forms[1].pow(e[1]) * forms[2].pow(e[2]);
        out = &out + &t.scale(c);
    }
    out
}

/// A random curve of degree n singular at [1:0:0] (no x0^n, x0^{n-1}x1,
/// x0^{n-1}x2 terms), moved by an invertible integer change of coordinates.
pub fn random_singular<R: Rng>(n: u32, rng: &mut R) -> HomogeneousPoly {
    let h = HomogeneousPoly::from_terms(
        n,
        monomials(n)
            .into_iter()
            .filter(|e| e[0] + 1 < n)
            .map(|e| (small_coeff(rng), Monomial(e))),
    )
    .unwrap();
    // Unimodular, so invertible over the integers.
    let a = rng.random_range(-2i64..=2);
    let b = rng.random_range(-2i64..=2);
    let c = rng.random_range(-2i64..=2);
    substitute(&h, [[1, a, b], [0, 1, c], [0, 0, 1]])
}

pub fn evaluate(g: &HomogeneousPoly, pt: [i64; 3]) -> BigRational {
    let mut acc = BigRational::zero();
    for (m, c) in g.terms() {
        let e = m.exponents();
        let mut v = c.clone();
        for i in 0..3 {
            for _ in 0..e[i] {
                v *= BigRational::from_integer(BigInt::from(pt[i]));
            }
        }
        acc += v;
    }
    acc
}

pub fn one() -> BigRational {
    BigRational::one()
}
