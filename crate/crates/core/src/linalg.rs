//! Exact linear algebra on the degree-`d` piece of `k[x0, x1, x2]`.
//!
//! An ideal generated by homogeneous polynomials `g_0, …, g_k` meets the
//! degree-`d` piece in the span of all products `m * g_i` with `m` a monomial
//! of degree `d - deg g_i`. [`IdealPiece`] lays those products out as the
//! columns of a matrix whose rows are the degree-`d` monomials, factors it
//! once, and then answers membership queries against the factorization.
//!
//! Column order is `(generator index, multiplier monomial)` with multipliers
//! in descending graded-lex order. Pivots are the first independent columns
//! in that order and free variables are set to zero, so the witness returned
//! for a given target is canonical.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{Coefficient, HomogeneousPoly, Monomial};

/// All monomials of a fixed degree, in descending graded-lex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialBasis {
    degree: u32,
    monomials: Vec<Monomial>,
}

impl MonomialBasis {
    fn build(degree: u32) -> Self {
        let monomials = (0..=degree)
            .rev()
            .flat_map(|a| (0..=degree - a).rev().map(move |b| Monomial::new(a, b, degree - a - b)))
            .collect();
        MonomialBasis { degree, monomials }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn get(&self, index: usize) -> Monomial {
        self.monomials[index]
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        (m.degree() == self.degree).then(|| m.rank_in_degree())
    }
}

/// The canonical monomial basis of degree `d`, shared process-wide.
pub fn monomial_basis(d: u32) -> Arc<MonomialBasis> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<MonomialBasis>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(b) = cache.read().expect("basis cache poisoned").get(&d) {
        return Arc::clone(b);
    }
    let built = Arc::new(MonomialBasis::build(d));
    let mut w = cache.write().expect("basis cache poisoned");
    Arc::clone(w.entry(d).or_insert(built))
}

/// Dense coordinate vector of `p` with respect to `basis`.
pub fn to_coords(p: &HomogeneousPoly, basis: &MonomialBasis) -> Result<Vec<Coefficient>> {
    if p.degree() != basis.degree() {
        return Err(Error::DegreeMismatch {
            expected: basis.degree(),
            found: p.degree(),
        });
    }
    let mut v = vec![Coefficient::zero(); basis.len()];
    for (m, c) in p.terms() {
        v[m.rank_in_degree()] = c.clone();
    }
    Ok(v)
}

pub fn from_coords(v: &[Coefficient], basis: &MonomialBasis) -> Result<HomogeneousPoly> {
    if v.len() != basis.len() {
        return Err(Error::InvalidConfig(format!(
            "coordinate vector has length {}, basis has {}",
            v.len(),
            basis.len()
        )));
    }
    HomogeneousPoly::from_terms(
        basis.degree(),
        v.iter().cloned().zip(basis.monomials().iter().copied()),
    )
}

/// Result of a membership solve at one degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradedSolveReport {
    pub target_degree: u32,
    /// One multiplier per generator (the distinguished element excluded).
    #[serde(serialize_with = "crate::json::polys")]
    pub witness: Vec<HomogeneousPoly>,
    #[serde(serialize_with = "crate::json::opt_rational")]
    pub special_coefficient: Option<Coefficient>,
    pub residual_is_zero: bool,
}

type SparseRow<T> = Vec<(usize, T)>;

/// A factored degree piece of a homogeneous ideal.
#[derive(Debug)]
pub struct IdealPiece {
    degree: u32,
    generators: Vec<HomogeneousPoly>,
    /// Per generator: the denominator-clearing multiplier used to build the
    /// integer matrix.
    scales: Vec<BigInt>,
    /// Column layout: generator index and multiplier monomial.
    columns: Vec<(usize, Monomial)>,
    /// Pivot column of each reduced row.
    pivots: Vec<usize>,
    /// For each monomial `j` of degree `d`, the nonzero entries `(row, t)` of
    /// column `j` of the reduced transform restricted to the pivot rows,
    /// scaled by `transform_den`.
    transform: Vec<SparseRow<BigInt>>,
    transform_den: BigInt,
    /// For each monomial `j`, its coordinates `(k, c)` in the quotient with
    /// respect to `representatives`, scaled by `quotient_den`.
    quotient: Vec<SparseRow<BigInt>>,
    quotient_den: BigInt,
    /// Monomial indices whose classes form a basis of the quotient piece.
    representatives: Vec<usize>,
}

impl IdealPiece {
    /// Factors the degree-`degree` piece of the ideal. Generators of degree
    /// above `degree` contribute nothing.
    pub fn new(generators: &[HomogeneousPoly], degree: u32) -> Self {
        let basis = monomial_basis(degree);
        let nrows = basis.len();

        let mut columns = Vec::new();
        let mut scales = Vec::with_capacity(generators.len());
        let mut rows: Vec<SparseRow<BigInt>> = vec![Vec::new(); nrows];
        for (g, gen) in generators.iter().enumerate() {
            let (int_terms, scale) = gen.clear_denominators();
            scales.push(scale);
            if gen.degree() > degree || gen.is_zero() {
                continue;
            }
            for m in monomial_basis(degree - gen.degree()).monomials() {
                let col = columns.len();
                columns.push((g, *m));
                for (tm, c) in &int_terms {
                    rows[tm.mul(m).rank_in_degree()].push((col, c.clone()));
                }
            }
        }
        let ncols = columns.len();
        for (i, row) in rows.iter_mut().enumerate() {
            row.sort_by_key(|e| e.0);
            row.push((ncols + i, BigInt::one()));
        }

        let (pivots, transform_den) = fraction_free_rref(&mut rows, ncols);
        let rank = pivots.len();

        let mut transform = vec![Vec::new(); nrows];
        for (r, row) in rows[..rank].iter().enumerate() {
            for (c, v) in row {
                if *c >= ncols {
                    transform[*c - ncols].push((r, v.clone()));
                }
            }
        }

        // Left kernel of the ideal columns: rows past the rank, identity part.
        let mut kernel: Vec<SparseRow<BigInt>> = rows[rank..]
            .iter()
            .map(|row| {
                debug_assert!(row.iter().all(|(c, _)| *c >= ncols));
                primitive(row).into_iter().map(|(c, v)| (c - ncols, v)).collect()
            })
            .collect();
        let (representatives, quotient_den) = fraction_free_rref(&mut kernel, usize::MAX);
        let q_rows = &kernel[..representatives.len()];
        let mut quotient = vec![Vec::new(); nrows];
        for (k, row) in q_rows.iter().enumerate() {
            for (j, v) in row {
                quotient[*j].push((k, v.clone()));
            }
        }

        IdealPiece {
            degree,
            generators: generators.to_vec(),
            scales,
            columns,
            pivots,
            transform,
            transform_den,
            quotient,
            quotient_den,
            representatives,
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn generators(&self) -> &[HomogeneousPoly] {
        &self.generators
    }

    /// Dimension of the ideal piece.
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Dimension of the quotient piece.
    pub fn quotient_dim(&self) -> usize {
        self.representatives.len()
    }

    /// Monomials whose classes form the canonical quotient basis.
    pub fn representatives(&self) -> Vec<Monomial> {
        let basis = monomial_basis(self.degree);
        self.representatives.iter().map(|&j| basis.get(j)).collect()
    }

    /// Coordinates of the class of `f` in the quotient, relative to
    /// [`IdealPiece::representatives`].
    pub fn quotient_coords(&self, f: &HomogeneousPoly) -> Result<Vec<Coefficient>> {
        self.check_degree(f)?;
        let (terms, lcm) = f.clear_denominators();
        let mut out = vec![BigInt::zero(); self.quotient_dim()];
        for (m, c) in &terms {
            for (k, q) in &self.quotient[m.rank_in_degree()] {
                out[*k] += c * q;
            }
        }
        let den = lcm * &self.quotient_den;
        Ok(out.into_iter().map(|v| BigRational::new(v, den.clone())).collect())
    }

    pub fn contains(&self, f: &HomogeneousPoly) -> Result<bool> {
        Ok(self.quotient_coords(f)?.iter().all(Zero::is_zero))
    }

    fn check_degree(&self, f: &HomogeneousPoly) -> Result<()> {
        if f.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: f.degree(),
            });
        }
        Ok(())
    }

    /// Canonical multipliers expressing `f` in the ideal, or `None` when `f`
    /// is not a member. The returned witness is always re-verified.
    pub fn solve(&self, f: &HomogeneousPoly) -> Result<Option<GradedSolveReport>> {
        if !self.contains(f)? {
            return Ok(None);
        }
        let (f_terms, lcm) = f.clear_denominators();
        let mut coords: BTreeMap<usize, BigInt> = BTreeMap::new();
        for (m, c) in &f_terms {
            for (r, t) in &self.transform[m.rank_in_degree()] {
                *coords.entry(*r).or_insert_with(BigInt::zero) += c * t;
            }
        }
        let den = lcm * &self.transform_den;
        let mut terms: Vec<Vec<(Coefficient, Monomial)>> = vec![Vec::new(); self.generators.len()];
        for (r, x) in coords {
            if x.is_zero() {
                continue;
            }
            let (g, m) = self.columns[self.pivots[r]];
            terms[g].push((BigRational::new(x * &self.scales[g], den.clone()), m));
        }
        let witness = terms
            .into_iter()
            .zip(&self.generators)
            .map(|(t, g)| {
                let d = self.degree.saturating_sub(g.degree());
                HomogeneousPoly::from_terms(d, t)
            })
            .collect::<Result<Vec<_>>>()?;

        let residual_is_zero = combine(&witness, &self.generators, self.degree) == *f;
        if !residual_is_zero {
            return Err(Error::Internal(
                "membership witness failed re-multiplication".into(),
            ));
        }
        Ok(Some(GradedSolveReport {
            target_degree: self.degree,
            witness,
            special_coefficient: None,
            residual_is_zero,
        }))
    }
}

/// `Σ witness_i * generator_i` as a polynomial of degree `degree`.
pub fn combine(witness: &[HomogeneousPoly], generators: &[HomogeneousPoly], degree: u32) -> HomogeneousPoly {
    witness
        .iter()
        .zip(generators)
        .filter(|(w, _)| !w.is_zero())
        .fold(HomogeneousPoly::zero(degree), |acc, (w, g)| acc + w * g)
}

fn check_generators(f: &HomogeneousPoly, generators: &[HomogeneousPoly]) -> Result<()> {
    if let Some(g) = generators.iter().find(|g| g.degree() > f.degree()) {
        return Err(Error::DegreeMismatch {
            expected: f.degree(),
            found: g.degree(),
        });
    }
    Ok(())
}

/// Decides whether `f` lies in the ideal generated by `generators` and, if
/// so, returns canonical multipliers.
pub fn solve_membership(
    f: &HomogeneousPoly,
    generators: &[HomogeneousPoly],
) -> Result<Option<GradedSolveReport>> {
    check_generators(f, generators)?;
    IdealPiece::new(generators, f.degree()).solve(f)
}

/// Writes `f = Σ v_i * generator_i + c * special` where the class of
/// `special` spans the one-dimensional quotient at this degree, and returns
/// the `v_i` and `c`.
pub fn solve_with_distinguished(
    f: &HomogeneousPoly,
    generators: &[HomogeneousPoly],
    special: &HomogeneousPoly,
) -> Result<GradedSolveReport> {
    check_generators(f, generators)?;
    if special.degree() != f.degree() {
        return Err(Error::DegreeMismatch {
            expected: f.degree(),
            found: special.degree(),
        });
    }
    DistinguishedPiece::new(generators, special)?.solve(f)
}

/// An [`IdealPiece`] whose quotient is spanned by a chosen element, used to
/// read off the coefficient along that element.
#[derive(Debug)]
pub struct DistinguishedPiece {
    piece: IdealPiece,
    special: HomogeneousPoly,
}

impl DistinguishedPiece {
    pub fn new(generators: &[HomogeneousPoly], special: &HomogeneousPoly) -> Result<Self> {
        if special.is_zero() {
            return Err(Error::SpecialInIdeal);
        }
        let mut gens = generators.to_vec();
        gens.push(special.clone());
        let piece = IdealPiece::new(&gens, special.degree());
        let special_col = piece.columns.len() - 1;
        let special_is_pivot = piece.pivots.last() == Some(&special_col);
        if !special_is_pivot || piece.quotient_dim() != 0 {
            return Err(Error::SpecialInIdeal);
        }
        Ok(DistinguishedPiece {
            piece,
            special: special.clone(),
        })
    }

    pub fn special(&self) -> &HomogeneousPoly {
        &self.special
    }

    pub fn solve(&self, f: &HomogeneousPoly) -> Result<GradedSolveReport> {
        let mut report = self
            .piece
            .solve(f)?
            .ok_or_else(|| Error::Internal("full-rank system left a residual".into()))?;
        let special = report.witness.pop().expect("special column present");
        let coefficient = special.coeff(&Monomial::ONE);
        report.special_coefficient = Some(coefficient);
        Ok(report)
    }
}

/// Fraction-free Gauss-Jordan elimination in place. The pivot of each step
/// is the remaining row with the leftmost leading entry (first such row on
/// ties). Only columns `< ncols` are pivot candidates; later columns (such as
/// an identity augmentation) are carried along.
///
/// On return the leading rows are in reduced echelon form multiplied by the
/// returned common pivot value, and the remaining rows vanish on the first
/// `ncols` columns. Every division is exact.
fn fraction_free_rref(rows: &mut [SparseRow<BigInt>], ncols: usize) -> (Vec<usize>, BigInt) {
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    for k in 0..nrows {
        // Rows from k on are zero left of the next pivot column.
        let Some((found, col)) = (k..nrows)
            .filter_map(|i| rows[i].first().map(|e| (i, e.0)))
            .filter(|&(_, c)| c < ncols)
            .min_by_key(|&(i, c)| (c, i))
        else {
            break;
        };
        rows.swap(k, found);
        let (head, rest) = rows.split_at_mut(k);
        let (pivot_row, tail) = rest.split_first_mut().expect("row k exists");
        let pivot_row = &*pivot_row;
        let p = pivot_row[0].1.clone();
        head.par_iter_mut().chain(tail.par_iter_mut()).for_each(|row| {
            let a = match row.binary_search_by_key(&col, |e| e.0) {
                Ok(pos) => row[pos].1.clone(),
                Err(_) => BigInt::zero(),
            };
            *row = bareiss_update(row, pivot_row, &p, &a, &prev);
        });
        prev = p;
        pivots.push(col);
    }
    (pivots, prev)
}

/// `(p * row - a * pivot_row) / prev`, exact.
fn bareiss_update(
    row: &[(usize, BigInt)],
    pivot_row: &[(usize, BigInt)],
    p: &BigInt,
    a: &BigInt,
    prev: &BigInt,
) -> SparseRow<BigInt> {
    let div = |v: BigInt| -> BigInt {
        if prev.is_one() {
            return v;
        }
        let (q, r) = v.div_rem(prev);
        debug_assert!(r.is_zero(), "Bareiss division not exact");
        q
    };
    if a.is_zero() {
        return row.iter().map(|(c, v)| (*c, div(v * p))).collect();
    }
    let mut out = Vec::with_capacity(row.len() + pivot_row.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot_row.len() {
        let ci = row.get(i).map_or(usize::MAX, |e| e.0);
        let cj = pivot_row.get(j).map_or(usize::MAX, |e| e.0);
        let (c, v) = if ci < cj {
            i += 1;
            (ci, &row[i - 1].1 * p)
        } else if cj < ci {
            j += 1;
            (cj, -(&pivot_row[j - 1].1 * a))
        } else {
            i += 1;
            j += 1;
            (ci, &row[i - 1].1 * p - &pivot_row[j - 1].1 * a)
        };
        if !v.is_zero() {
            out.push((c, div(v)));
        }
    }
    out
}

fn scale_down(rows: &[SparseRow<BigInt>], common: &BigInt) -> Vec<SparseRow<BigRational>> {
    rows.par_iter()
        .map(|row| {
            row.iter()
                .map(|(c, v)| (*c, BigRational::new(v.clone(), common.clone())))
                .collect()
        })
        .collect()
}

fn primitive(row: &[(usize, BigInt)]) -> SparseRow<BigInt> {
    let g = row.iter().fold(BigInt::zero(), |g, (_, v)| g.gcd(v));
    if g.is_zero() || g.is_one() {
        return row.to_vec();
    }
    let sign = if row[0].1.is_negative() { -BigInt::one() } else { BigInt::one() };
    let g = g * sign;
    row.iter().map(|(c, v)| (*c, v / &g)).collect()
}

/// Reduced row echelon form of sparse rows over the rationals; returns the
/// pivot columns and the nonzero reduced rows.
pub(crate) fn rref_rows(rows: Vec<SparseRow<BigRational>>) -> (Vec<usize>, Vec<SparseRow<BigRational>>) {
    let mut ints: Vec<SparseRow<BigInt>> = rows
        .into_iter()
        .map(|row| {
            let lcm = row.iter().fold(BigInt::one(), |l, (_, v)| l.lcm(v.denom()));
            row.into_iter()
                .map(|(c, v)| (c, (v * BigRational::from_integer(lcm.clone())).to_integer()))
                .collect()
        })
        .collect();
    let (pivots, common) = fraction_free_rref(&mut ints, usize::MAX);
    let reduced = scale_down(&ints[..pivots.len()], &common);
    (pivots, reduced)
}

/// Kernel of the linear map whose matrix has the given sparse columns (each
/// column a list of `(row, value)`), as a list of basis vectors over the
/// column indices. Free variables are taken in column order, each basis vector
/// has a single free variable set to one.
pub(crate) fn kernel_of_columns(columns: &[SparseRow<BigRational>], nrows: usize) -> Vec<Vec<BigRational>> {
    let ncols = columns.len();
    let mut rows: Vec<SparseRow<BigRational>> = vec![Vec::new(); nrows];
    for (j, col) in columns.iter().enumerate() {
        for (i, v) in col {
            rows[*i].push((j, v.clone()));
        }
    }
    for r in rows.iter_mut() {
        r.sort_by_key(|e| e.0);
    }
    let (pivots, reduced) = rref_rows(rows);
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    (0..ncols)
        .filter(|j| !pivot_set.contains(j))
        .map(|free| {
            let mut v = vec![BigRational::zero(); ncols];
            v[free] = BigRational::one();
            for (r, row) in reduced.iter().enumerate() {
                if let Ok(pos) = row.binary_search_by_key(&free, |e| e.0) {
                    v[pivots[r]] = -row[pos].1.clone();
                }
            }
            v
        })
        .collect()
}
