//! Smooth plane curves and their Jacobian rings `k[x]/(G0, G1, G2)`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{kernel_of_columns, monomial_basis, DistinguishedPiece, IdealPiece};
use crate::poly::{Coefficient, HomogeneousPoly, Monomial};

/// A validated smooth curve `G = 0` in the projective plane, with lazily
/// filled caches of factored ideal pieces.
///
/// The Jacobian-ideal pieces are factored with the generators in the order
/// `(G2, G1, G0)`, so canonical decomposition witnesses prefer the
/// highest-index partial derivative. Quotient data does not depend on that
/// order.
#[derive(Debug)]
pub struct CurveContext {
    g: HomogeneousPoly,
    n: u32,
    partials: [HomogeneousPoly; 3],
    genus: u64,
    hessian: HomogeneousPoly,
    jacobian_pieces: RwLock<HashMap<u32, Arc<IdealPiece>>>,
    pairing: OnceLock<Arc<DistinguishedPiece>>,
    pub(crate) big_ideal: OnceLock<Arc<DistinguishedPiece>>,
}

/// Basis of one graded piece of the Jacobian ring, given by monomial
/// representatives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientBasis {
    pub degree: u32,
    pub representative_monomials: Vec<String>,
    #[serde(skip)]
    pub monomials: Vec<Monomial>,
}

impl CurveContext {
    pub fn curve(&self) -> &HomogeneousPoly {
        &self.g
    }

    /// Degree `n` of the curve.
    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn partials(&self) -> &[HomogeneousPoly; 3] {
        &self.partials
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    /// `n - 3`, the degree of the Jacobian-ring piece representing holomorphic
    /// one-forms.
    pub fn c_x(&self) -> u32 {
        self.n - 3
    }

    /// Socle degree `3n - 6` of the Jacobian ring.
    pub fn socle_degree(&self) -> u32 {
        3 * self.n - 6
    }

    pub(crate) fn decomposition_order(&self) -> [HomogeneousPoly; 3] {
        let [g0, g1, g2] = self.partials.clone();
        [g2, g1, g0]
    }

    /// The factored degree-`d` piece of the Jacobian ideal.
    pub fn jacobian_piece(&self, d: u32) -> Arc<IdealPiece> {
        if let Some(p) = self.jacobian_pieces.read().expect("cache poisoned").get(&d) {
            return Arc::clone(p);
        }
        let built = Arc::new(IdealPiece::new(&self.decomposition_order(), d));
        let mut w = self.jacobian_pieces.write().expect("cache poisoned");
        Arc::clone(w.entry(d).or_insert(built))
    }

    /// Whether `f` lies in the Jacobian ideal.
    pub fn in_jacobian_ideal(&self, f: &HomogeneousPoly) -> bool {
        if f.is_zero() {
            return true;
        }
        if f.degree() > self.socle_degree() {
            return true;
        }
        self.jacobian_piece(f.degree())
            .contains(f)
            .expect("piece built at the polynomial's degree")
    }

    /// Canonical `(R0, R1, R2)` with `f = R0*G0 + R1*G1 + R2*G2`, or `None`.
    pub fn jacobian_witness(&self, f: &HomogeneousPoly) -> Result<Option<[HomogeneousPoly; 3]>> {
        if f.degree() < self.n - 1 {
            return Err(Error::DegreeMismatch {
                expected: self.n - 1,
                found: f.degree(),
            });
        }
        Ok(self.jacobian_piece(f.degree()).solve(f)?.map(|r| {
            let [w2, w1, w0]: [HomogeneousPoly; 3] =
                r.witness.try_into().expect("three generators");
            [w0, w1, w2]
        }))
    }

    fn pairing_piece(&self) -> Result<Arc<DistinguishedPiece>> {
        if let Some(p) = self.pairing.get() {
            return Ok(Arc::clone(p));
        }
        let piece = DistinguishedPiece::new(&self.partials, &self.hessian)
            .map_err(|_| Error::Internal("Hessian lies in the Jacobian ideal".into()))?;
        Ok(Arc::clone(self.pairing.get_or_init(|| Arc::new(piece))))
    }
}

/// Validates `g` and builds its context.
pub fn build_context(g: HomogeneousPoly) -> Result<CurveContext> {
    let n = g.degree();
    if n < 3 {
        return Err(Error::DegreeTooLow(n));
    }
    if !is_smooth(&g) {
        return Err(Error::SingularCurve);
    }
    let partials = [g.partial(0), g.partial(1), g.partial(2)];
    let hessian = det3(&std::array::from_fn(|i| {
        std::array::from_fn(|j| partials[i].partial(j))
    }));
    let n64 = u64::from(n);
    let ctx = CurveContext {
        g,
        n,
        partials,
        genus: (n64 - 1) * (n64 - 2) / 2,
        hessian,
        jacobian_pieces: RwLock::new(HashMap::new()),
        pairing: OnceLock::new(),
        big_ideal: OnceLock::new(),
    };
    // Nonzero modulo the Jacobian ideal for every smooth curve.
    ctx.pairing_piece()?;
    Ok(ctx)
}

/// Smoothness test: the curve is smooth exactly when every monomial of degree
/// `3n - 5` lies in the Jacobian ideal, i.e. the partials form a regular
/// sequence.
pub fn is_smooth(g: &HomogeneousPoly) -> bool {
    let n = g.degree();
    if n < 3 || g.is_zero() {
        return false;
    }
    let partials = [g.partial(0), g.partial(1), g.partial(2)];
    IdealPiece::new(&partials, 3 * n - 5).quotient_dim() == 0
}

/// Dimension of the degree-`d` piece of the Jacobian ring.
pub fn jacobian_ring_dim(ctx: &CurveContext, d: u32) -> usize {
    if d > ctx.socle_degree() {
        return 0;
    }
    ctx.jacobian_piece(d).quotient_dim()
}

/// Monomial representatives of a basis of the degree-`d` Jacobian-ring piece:
/// the first monomials, in descending graded-lex order, independent of the
/// ideal and of each other.
pub fn jacobian_ring_basis(ctx: &CurveContext, d: u32) -> QuotientBasis {
    let monomials = if d > ctx.socle_degree() {
        Vec::new()
    } else {
        ctx.jacobian_piece(d).representatives()
    };
    QuotientBasis {
        degree: d,
        representative_monomials: monomials.iter().map(|m| m.to_string()).collect(),
        monomials,
    }
}

/// `det(∂G_i/∂x_j)`, the Hessian of the curve; spans the socle of the
/// Jacobian ring and normalizes [`cup_pairing`].
pub fn hessian_like_det(ctx: &CurveContext) -> &HomogeneousPoly {
    &ctx.hessian
}

/// Coefficient of the Hessian class in `u_a * u_b` modulo the Jacobian ideal.
pub fn cup_pairing(ctx: &CurveContext, u_a: &HomogeneousPoly, u_b: &HomogeneousPoly) -> Result<Coefficient> {
    let found = u_a.degree() + u_b.degree();
    if found != ctx.socle_degree() {
        return Err(Error::DegreeMismatch {
            expected: ctx.socle_degree(),
            found,
        });
    }
    let product = u_a * u_b;
    let report = ctx.pairing_piece()?.solve(&product)?;
    Ok(report.special_coefficient.unwrap_or_else(Coefficient::zero))
}

/// Basis of `{U0 of degree d : U0 * u1 ∈ J_G}`, computed as the kernel of the
/// linear map `U0 ↦ [U0 * u1]` into the Jacobian ring.
pub fn annihilator_space(ctx: &CurveContext, u1: &HomogeneousPoly, d: u32) -> Vec<HomogeneousPoly> {
    let basis = monomial_basis(d);
    let target = d + u1.degree();
    if u1.is_zero() || target > ctx.socle_degree() {
        return basis
            .monomials()
            .iter()
            .map(|m| HomogeneousPoly::term(Coefficient::from_integer(1.into()), *m))
            .collect();
    }
    let piece = ctx.jacobian_piece(target);
    let columns: Vec<Vec<(usize, Coefficient)>> = basis
        .monomials()
        .iter()
        .map(|m| {
            piece
                .quotient_coords(&u1.mul_monomial(m))
                .expect("degree matches")
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .collect()
        })
        .collect();
    kernel_of_columns(&columns, piece.quotient_dim())
        .into_iter()
        .map(|v| {
            HomogeneousPoly::from_terms(d, v.into_iter().zip(basis.monomials().iter().copied()))
                .expect("basis monomials have degree d")
        })
        .collect()
}

/// Determinant of a 3×3 matrix of homogeneous polynomials whose entries in
/// each row share a degree.
pub fn det3(m: &[[HomogeneousPoly; 3]; 3]) -> HomogeneousPoly {
    let minor = |a: usize, b: usize| &(&m[1][a] * &m[2][b]) - &(&m[1][b] * &m[2][a]);
    let t0 = &m[0][0] * &minor(1, 2);
    let t1 = &m[0][1] * &minor(0, 2);
    let t2 = &m[0][2] * &minor(0, 1);
    let degree = m.iter().map(|r| r[0].degree()).sum();
    [t0, -t1, t2]
        .iter()
        .fold(HomogeneousPoly::zero(degree), |acc, t| {
            acc.try_add(t).expect("rows of a homogeneous matrix")
        })
}
