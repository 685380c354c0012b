//! Massey triple products `<w0, w1, w2>` of a smooth plane curve.
//!
//! Classes are given by Jacobian-ring representatives `U0, U2` of degree
//! `2n - 3` and `U1` of degree `n - 3`. The defining system is encoded by two
//! decompositions `U0*U1 = Σ R(01)_i G_i` and `U1*U2 = Σ R(12)_i G_i`. From
//! these the polynomials `A` and `B` of degree `6n - 9` are assembled, and the
//! product is the coefficient of `Det_G` when `n * (A - B)` is reduced modulo
//! `J = (G0², G1², G2²)`.

use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jacobian::{det3, CurveContext};
use crate::linalg::{combine, DistinguishedPiece, GradedSolveReport};
use crate::poly::{Coefficient, HomogeneousPoly};

/// `(R0, R1, R2)` with `Σ R_i G_i` equal to a product of two classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompWitness {
    #[serde(serialize_with = "crate::json::polys")]
    pub r: [HomogeneousPoly; 3],
}

impl DecompWitness {
    pub fn new(r0: HomogeneousPoly, r1: HomogeneousPoly, r2: HomogeneousPoly) -> Self {
        DecompWitness { r: [r0, r1, r2] }
    }

    /// `Σ R_i G_i`.
    pub fn evaluate(&self, ctx: &CurveContext) -> Result<HomogeneousPoly> {
        let degree = self.r[0].degree() + ctx.degree() - 1;
        let mut acc = HomogeneousPoly::zero(degree);
        for (r, g) in self.r.iter().zip(ctx.partials()) {
            acc = acc.try_add(&(r * g))?;
        }
        Ok(acc)
    }

    /// Whether this witness decomposes `product`.
    pub fn certifies(&self, ctx: &CurveContext, product: &HomogeneousPoly) -> bool {
        self.evaluate(ctx).is_ok_and(|s| s == *product)
    }

    pub fn a_vectors(&self) -> AVectors {
        let x = [HomogeneousPoly::var(0), HomogeneousPoly::var(1), HomogeneousPoly::var(2)];
        let [r0, r1, r2] = &self.r;
        AVectors {
            a: [
                &x[1] * r2 - &x[2] * r1,
                &x[2] * r0 - &x[0] * r2,
                &x[0] * r1 - &x[1] * r0,
            ],
        }
    }
}

/// `A_0 = x1 R2 - x2 R1`, `A_1 = -x0 R2 + x2 R0`, `A_2 = x0 R1 - x1 R0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AVectors {
    pub a: [HomogeneousPoly; 3],
}

/// The value of a Massey triple product together with everything needed to
/// audit it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MasseyResult {
    #[serde(serialize_with = "crate::json::rational")]
    pub value: Coefficient,
    #[serde(serialize_with = "crate::json::poly")]
    pub a: HomogeneousPoly,
    #[serde(serialize_with = "crate::json::poly")]
    pub b: HomogeneousPoly,
    pub witnesses01: DecompWitness,
    pub witnesses12: DecompWitness,
    pub residue_witnesses: GradedSolveReport,
    #[serde(serialize_with = "crate::json::poly")]
    pub det_g: HomogeneousPoly,
}

/// Canonical decomposition of `u_a * u_b` over the Jacobian ideal, or `None`
/// when the product is not in it.
pub fn decompose_cup(
    ctx: &CurveContext,
    u_a: &HomogeneousPoly,
    u_b: &HomogeneousPoly,
) -> Result<Option<DecompWitness>> {
    let found = u_a.degree() + u_b.degree();
    if found < ctx.socle_degree() {
        return Err(Error::DegreeMismatch {
            expected: ctx.socle_degree(),
            found,
        });
    }
    let product = u_a * u_b;
    let witness = ctx
        .jacobian_witness(&product)?
        .map(|[r0, r1, r2]| DecompWitness::new(r0, r1, r2));
    if let Some(w) = &witness {
        if !w.certifies(ctx, &product) {
            return Err(Error::Internal("decomposition failed re-multiplication".into()));
        }
    }
    Ok(witness)
}

/// `Det_G = det(∂(G_i²)/∂x_j)`, of degree `6n - 9`.
pub fn big_ideal_det(ctx: &CurveContext) -> HomogeneousPoly {
    let squares = big_ideal_generators(ctx);
    det3(&std::array::from_fn(|i| std::array::from_fn(|j| squares[i].partial(j))))
}

/// `(G0², G1², G2²)`.
pub fn big_ideal_generators(ctx: &CurveContext) -> [HomogeneousPoly; 3] {
    std::array::from_fn(|i| &ctx.partials()[i] * &ctx.partials()[i])
}

fn residue_piece(ctx: &CurveContext) -> Result<Arc<DistinguishedPiece>> {
    if let Some(p) = ctx.big_ideal.get() {
        return Ok(Arc::clone(p));
    }
    let piece = DistinguishedPiece::new(&big_ideal_generators(ctx), &big_ideal_det(ctx))
        .map_err(|_| Error::Internal("Det_G lies in (G0², G1², G2²)".into()))?;
    Ok(Arc::clone(ctx.big_ideal.get_or_init(|| Arc::new(piece))))
}

/// Reduces `f` (degree `6n - 9`) modulo `(G0², G1², G2²)` and returns the
/// coefficient along `Det_G` with the multipliers.
pub fn residue(ctx: &CurveContext, f: &HomogeneousPoly) -> Result<GradedSolveReport> {
    let d = 6 * ctx.degree() - 9;
    if f.degree() != d {
        return Err(Error::DegreeMismatch {
            expected: d,
            found: f.degree(),
        });
    }
    residue_piece(ctx)?.solve(f)
}

/// Whether `f` of degree `6n - 9` lies in `(G0², G1², G2²)`.
pub fn in_big_ideal(ctx: &CurveContext, f: &HomogeneousPoly) -> Result<bool> {
    Ok(residue(ctx, f)?
        .special_coefficient
        .is_some_and(|c| num_traits::Zero::is_zero(&c)))
}

fn coerce(u: &HomogeneousPoly, expected: u32) -> Result<HomogeneousPoly> {
    if u.degree() == expected {
        Ok(u.clone())
    } else if u.is_zero() {
        u.clone().with_degree(expected)
    } else {
        Err(Error::DegreeMismatch {
            expected,
            found: u.degree(),
        })
    }
}

fn check_witness(w: &DecompWitness, expected_degree: u32, which: &'static str) -> Result<DecompWitness> {
    let r = w
        .r
        .iter()
        .map(|r| coerce(r, expected_degree))
        .collect::<Result<Vec<_>>>()
        .map_err(|_| Error::WitnessIdentity { which })?;
    let [r0, r1, r2]: [HomogeneousPoly; 3] = r.try_into().expect("three entries");
    Ok(DecompWitness::new(r0, r1, r2))
}

/// Assembles `A` and `B` from the classes and the two decompositions.
///
/// ```text
/// A = U0 x1 R0(12) G0 G1 + U2 x0 R2(01) G0 G2 + U0 x0 R0(12) G0 G0
/// B = A0(01) U2 G1 G2 + U0 A1(12) G0 G2 + U0 U1 U2 x0 G0
/// ```
pub fn compute_ab(
    ctx: &CurveContext,
    u0: &HomogeneousPoly,
    u1: &HomogeneousPoly,
    u2: &HomogeneousPoly,
    w01: &DecompWitness,
    w12: &DecompWitness,
) -> Result<(HomogeneousPoly, HomogeneousPoly)> {
    let n = ctx.degree();
    let u0 = coerce(u0, 2 * n - 3)?;
    let u1 = coerce(u1, n - 3)?;
    let u2 = coerce(u2, 2 * n - 3)?;
    // Both products have degree 3n - 6; witnesses have degree 2n - 5.
    let w01 = check_witness(w01, 2 * n - 5, "U0*U1")?;
    let w12 = check_witness(w12, 2 * n - 5, "U1*U2")?;
    if !w01.certifies(ctx, &(&u0 * &u1)) {
        return Err(Error::WitnessIdentity { which: "U0*U1" });
    }
    if !w12.certifies(ctx, &(&u1 * &u2)) {
        return Err(Error::WitnessIdentity { which: "U1*U2" });
    }

    let [g0, g1, g2] = ctx.partials();
    let x0 = HomogeneousPoly::var(0);
    let x1 = HomogeneousPoly::var(1);
    let a01 = w01.a_vectors();
    let a12 = w12.a_vectors();
    let r01 = &w01.r;
    let r12 = &w12.r;

    let d = 6 * n - 9;
    let a_terms = [
        product(&[&u0, &x1, &r12[0], g0, g1]),
        product(&[&u2, &x0, &r01[2], g0, g2]),
        product(&[&u0, &x0, &r12[0], g0, g0]),
    ];
    let b_terms = [
        product(&[&a01.a[0], &u2, g1, g2]),
        product(&[&u0, &a12.a[1], g0, g2]),
        product(&[&u0, &u1, &u2, &x0, g0]),
    ];
    let sum = |terms: &[HomogeneousPoly]| -> Result<HomogeneousPoly> {
        terms.iter().try_fold(HomogeneousPoly::zero(d), |acc, t| {
            if t.degree() != d {
                return Err(Error::Internal(format!(
                    "summand of degree {} in a degree-{d} formula",
                    t.degree()
                )));
            }
            acc.try_add(t)
        })
    };
    Ok((sum(&a_terms)?, sum(&b_terms)?))
}

fn product(factors: &[&HomogeneousPoly]) -> HomogeneousPoly {
    crate::poly::product(factors.iter().copied())
}

/// Massey triple product with the canonical defining system.
pub fn massey_triple(
    ctx: &CurveContext,
    u0: &HomogeneousPoly,
    u1: &HomogeneousPoly,
    u2: &HomogeneousPoly,
) -> Result<MasseyResult> {
    let n = ctx.degree();
    let u0 = coerce(u0, 2 * n - 3)?;
    let u1 = coerce(u1, n - 3)?;
    let u2 = coerce(u2, 2 * n - 3)?;
    let w01 = decompose_cup(ctx, &u0, &u1)?.ok_or(Error::CupObstruction { pair: "U0*U1" })?;
    let w12 = decompose_cup(ctx, &u1, &u2)?.ok_or(Error::CupObstruction { pair: "U1*U2" })?;
    massey_triple_with_witnesses(ctx, &u0, &u1, &u2, &w01, &w12)
}

/// Massey triple product relative to the defining system given by the
/// caller's decompositions.
pub fn massey_triple_with_witnesses(
    ctx: &CurveContext,
    u0: &HomogeneousPoly,
    u1: &HomogeneousPoly,
    u2: &HomogeneousPoly,
    w01: &DecompWitness,
    w12: &DecompWitness,
) -> Result<MasseyResult> {
    let n = ctx.degree();
    let (a, b) = compute_ab(ctx, u0, u1, u2, w01, w12)?;
    let scaled = (&a - &b).scale(&Coefficient::from_integer(BigInt::from(n)));
    let report = residue(ctx, &scaled)?;
    let value = report
        .special_coefficient
        .clone()
        .ok_or_else(|| Error::Internal("residue solve without a coefficient".into()))?;
    let det_g = residue_piece(ctx)?.special().clone();

    // n (A - B) = Σ v_i G_i² + value * Det_G, checked independently of the
    // solver's own verification.
    let squares = big_ideal_generators(ctx);
    let rebuilt = combine(&report.witness, &squares, scaled.degree()) + det_g.scale(&value);
    if rebuilt != scaled {
        return Err(Error::Internal("residue identity failed".into()));
    }

    let r = |w: &DecompWitness, d| check_witness(w, d, "witness");
    Ok(MasseyResult {
        value,
        a,
        b,
        witnesses01: r(w01, 2 * n - 5)?,
        witnesses12: r(w12, 2 * n - 5)?,
        residue_witnesses: report,
        det_g,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobian::build_context;
    use crate::poly::rat;

    fn p(s: &str) -> HomogeneousPoly {
        s.parse().unwrap()
    }

    fn quintic() -> CurveContext {
        build_context(p("x0^5 + x1^5 + x2^5")).unwrap()
    }

    #[test]
    fn big_ideal_determinants() {
        assert_eq!(big_ideal_det(&quintic()), p("8000000*x0^7*x1^7*x2^7"));
        let cubic = build_context(p("x0^3 + x1^3 + x2^3")).unwrap();
        assert_eq!(big_ideal_det(&cubic), p("46656*x0^3*x1^3*x2^3"));
    }

    #[test]
    fn second_example_value() {
        let ctx = quintic();
        let r = massey_triple(
            &ctx,
            &p("-1/6*x0^3*x1^2*x2^2"),
            &p("x2^2"),
            &p("2/9*x0^4*x2^3"),
        )
        .unwrap();
        assert_eq!(r.value, rat(1, 8640000));
        assert_eq!(r.witnesses12.r[2], p("2/45*x0^4*x2"));
    }

    #[test]
    fn first_example_decompositions() {
        let ctx = quintic();
        let u0 = p("x0^3*x1^4 + x1^5*x2^2");
        let u1 = p("1/4*x2^2");
        let u2 = p("1/3*x0^4*x1*x2^2");
        let w01 = decompose_cup(&ctx, &u0, &u1).unwrap().unwrap();
        assert_eq!(w01.r, [HomogeneousPoly::zero(5), p("1/20*x0^3*x2^2"), p("1/20*x1^5")]);
        let w12 = decompose_cup(&ctx, &u1, &u2).unwrap().unwrap();
        assert_eq!(w12.r, [HomogeneousPoly::zero(5), HomogeneousPoly::zero(5), p("1/60*x0^4*x1")]);
        assert!(massey_triple(&ctx, &u0, &u1, &u2).unwrap().value == rat(0, 1));
    }

    #[test]
    fn low_degree_product_is_rejected() {
        let ctx = quintic();
        let g0 = ctx.partials()[0].clone();
        assert!(matches!(
            decompose_cup(&ctx, &g0, &HomogeneousPoly::one()),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn zero_classes_give_zero() {
        let ctx = quintic();
        let z7 = HomogeneousPoly::zero(7);
        let z2 = HomogeneousPoly::zero(2);
        let w = DecompWitness::new(HomogeneousPoly::zero(5), HomogeneousPoly::zero(5), HomogeneousPoly::zero(5));
        let (a, b) = compute_ab(&ctx, &z7, &z2, &z7, &w, &w).unwrap();
        assert!(a.is_zero() && b.is_zero());
        assert_eq!(a.degree(), 21);
    }

    #[test]
    fn obstruction_is_reported() {
        let ctx = quintic();
        let err = massey_triple(&ctx, &p("x0^3*x1^3*x2"), &p("x2^2"), &p("x0^7")).unwrap_err();
        assert_eq!(err, Error::CupObstruction { pair: "U0*U1" });
    }

    #[test]
    fn bad_witness_is_rejected() {
        let ctx = quintic();
        let u0 = p("-1/6*x0^3*x1^2*x2^2");
        let u1 = p("x2^2");
        let u2 = p("2/9*x0^4*x2^3");
        let good = decompose_cup(&ctx, &u0, &u1).unwrap().unwrap();
        let mut bad = good.clone();
        bad.r[2] = bad.r[2].scale(&rat(2, 1));
        assert_eq!(
            massey_triple_with_witnesses(&ctx, &u0, &u1, &u2, &good, &bad).unwrap_err(),
            Error::WitnessIdentity { which: "U1*U2" }
        );
    }
}
