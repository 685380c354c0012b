mod common;

use common::*;
use massey_core::{
    annihilator_space, build_context, cup_pairing, is_smooth, jacobian_ring_basis, jacobian_ring_dim,
    Error, HomogeneousPoly, Monomial,
};
use num_traits::Zero;

#[test]
fn fermat_hilbert_functions() {
    for n in 3..=8 {
        let ctx = build_context(fermat(n)).unwrap();
        let want = ci_hilbert_series(n - 1);
        for d in 0..=(3 * n - 4) {
            let expected = want.get(d as usize).copied().unwrap_or(0) as usize;
            assert_eq!(jacobian_ring_dim(&ctx, d), expected, "n={n} d={d}");
        }
        let top = 3 * n - 6;
        for d in 0..=top {
            assert_eq!(jacobian_ring_dim(&ctx, d), jacobian_ring_dim(&ctx, top - d));
        }
        assert_eq!(jacobian_ring_dim(&ctx, n - 3) as u64, ctx.genus());
        assert_eq!(ctx.genus(), u64::from((n - 1) * (n - 2) / 2));
    }
}

#[test]
fn random_smooth_curves_have_complete_intersection_dims() {
    let mut r = rng(21);
    for n in [3u32, 4, 5] {
        let mut found = 0;
        while found < 3 {
            let g = perturbed_fermat(n, 3, &mut r);
            if !is_smooth(&g) {
                continue;
            }
            found += 1;
            let ctx = build_context(g.clone()).unwrap();
            let partials: Vec<_> = (0..3).map(|i| g.partial(i)).collect();
            let want = ci_hilbert_series(n - 1);
            for d in 0..=(3 * n - 6) {
                assert_eq!(jacobian_ring_dim(&ctx, d) as u64, want[d as usize]);
                let oracle = Monomial::count(d) - ideal_rank(&partials, d, &[]);
                assert_eq!(jacobian_ring_dim(&ctx, d), oracle);
            }
        }
    }
}

#[test]
fn singular_curves_are_rejected() {
    let mut r = rng(8);
    for n in 3..=6 {
        for _ in 0..3 {
            let g = random_singular(n, &mut r);
            for i in 0..3 {
                assert!(evaluate(&g.partial(i), [1, 0, 0]).is_zero());
            }
            assert!(!is_smooth(&g));
            assert_eq!(build_context(g).unwrap_err(), Error::SingularCurve);
        }
    }
    assert_eq!(build_context(p("x0^3")).unwrap_err(), Error::SingularCurve);
    assert_eq!(build_context(p("x0*x1*x2 + x0^3")).unwrap_err(), Error::SingularCurve);
    assert_eq!(build_context(p("x0^2 + x1^2 + x2^2")).unwrap_err(), Error::DegreeTooLow(2));
}

#[test]
fn basis_representatives_are_independent_mod_ideal() {
    let g = fermat(5);
    let ctx = build_context(g.clone()).unwrap();
    let partials: Vec<_> = (0..3).map(|i| g.partial(i)).collect();
    for d in 0..=9 {
        let b = jacobian_ring_basis(&ctx, d);
        assert_eq!(b.representative_monomials.len(), jacobian_ring_dim(&ctx, d));
        let reps: Vec<_> = b
            .representative_monomials
            .iter()
            .map(|s| p(s))
            .collect();
        assert_eq!(ideal_rank(&partials, d, &reps), Monomial::count(d));
    }
    assert_eq!(jacobian_ring_basis(&ctx, 10).representative_monomials.len(), 0);
}

#[test]
fn pairing_is_perfect() {
    for n in [4u32, 5] {
        let ctx = build_context(fermat(n)).unwrap();
        let low = n - 3;
        let high = 2 * n - 3;
        let a = jacobian_ring_basis(&ctx, low).representative_monomials;
        let b = jacobian_ring_basis(&ctx, high).representative_monomials;
        let matrix: Vec<Vec<_>> = a
            .iter()
            .map(|x| b.iter().map(|y| cup_pairing(&ctx, &p(x), &p(y)).unwrap()).collect())
            .collect();
        assert_eq!(naive_rank(matrix), ctx.genus() as usize, "n={n}");
    }
    let ctx = build_context(fermat(5)).unwrap();
    assert!(cup_pairing(&ctx, &p("x0"), &p("x1")).is_err());
}

#[test]
fn hessian_pairs_to_one_with_unit() {
    let mut r = rng(3);
    for n in [3u32, 4] {
        let g = loop {
            let g = perturbed_fermat(n, 2, &mut r);
            if is_smooth(&g) {
                break g;
            }
        };
        let ctx = build_context(g).unwrap();
        let h = massey_core::hessian_like_det(&ctx).clone();
        assert_eq!(cup_pairing(&ctx, &HomogeneousPoly::one(), &h).unwrap(), one());
    }
}

#[test]
fn annihilators_kill_the_class() {
    let mut r = rng(13);
    for n in [4u32, 5] {
        let ctx = build_context(fermat(n)).unwrap();
        for _ in 0..4 {
            let u1 = random_dense(n - 3, &mut r);
            let space = annihilator_space(&ctx, &u1, 2 * n - 3);
            for u0 in &space {
                assert!(ctx.in_jacobian_ideal(&(u0 * &u1)));
            }
            // Dimension equals the kernel dimension of multiplication, checked
            // against a dense rank computation on the images.
            let basis: Vec<_> = monomials(2 * n - 3)
                .into_iter()
                .map(|e| HomogeneousPoly::term(one(), Monomial(e)))
                .collect();
            let partials = ctx.partials().to_vec();
            let base = ideal_rank(&partials, 3 * n - 6, &[]);
            let images: Vec<_> = basis.iter().map(|m| m * &u1).collect();
            let image_rank = ideal_rank(&partials, 3 * n - 6, &images) - base;
            assert_eq!(space.len(), basis.len() - image_rank);
        }
    }
}
