use clover_core::analytics::gk_periodic;
use clover_core::closure::{
    clover_generators, restricted_closure, trusted_bound, verify_basis_theorem, verify_grading,
};
use clover_core::derivations::{apply, bracket, Derivation, Partial};
use clover_core::dpalgebra::{AlgebraElement, DpContext, DpMonomial};
use clover_core::params::ParameterTuple;
use proptest::prelude::*;

fn ctx(p: u32, s: u32, r: u32, depth: usize) -> DpContext {
    DpContext::new(&ParameterTuple::constant(p, s, r).unwrap(), depth).unwrap()
}

// (basis index, coefficient) pairs, reduced modulo the basis size and p at use.
fn arb_terms() -> impl Strategy<Value = Vec<(usize, u32)>> {
    prop::collection::vec((any::<usize>(), 1u32..5), 1..5)
}

fn element(k: &DpContext, basis: &[DpMonomial], terms: &[(usize, u32)]) -> AlgebraElement {
    let mut a = AlgebraElement::zero();
    for &(i, c) in terms {
        a.add_term(k.fp(), basis[i % basis.len()].clone(), c % k.p());
    }
    a
}

fn derivation(k: &DpContext, basis: &[DpMonomial], terms: &[(usize, u32, usize, u32)]) -> Derivation {
    let vars: Vec<_> = k.variables().collect();
    let mut d = Derivation::zero();
    for &(i, c, v, level) in terms {
        let var = vars[v % vars.len()];
        let level = level % k.levels(var);
        d.add_term(k, Partial::new(var, level), basis[i % basis.len()].clone(), c % k.p());
    }
    d
}

fn arb_derivation() -> impl Strategy<Value = Vec<(usize, u32, usize, u32)>> {
    prop::collection::vec((any::<usize>(), 1u32..5, any::<usize>(), 0u32..3), 1..5)
}

fn contexts() -> [DpContext; 2] {
    [ctx(2, 2, 1, 2), ctx(3, 1, 1, 2)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derivations_satisfy_leibniz(pick in 0usize..2, d in arb_derivation(), f in arb_terms(), g in arb_terms()) {
        let k = &contexts()[pick];
        let basis = k.basis(1 << 12).unwrap();
        let d = derivation(k, &basis, &d);
        let (f, g) = (element(k, &basis, &f), element(k, &basis, &g));
        let lhs = apply(k, &d, &k.mul(&f, &g));
        let rhs = k.mul(&apply(k, &d, &f), &g).add(k.fp(), &k.mul(&f, &apply(k, &d, &g)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bracket_is_bilinear_and_satisfies_jacobi(
        pick in 0usize..2, a in arb_derivation(), b in arb_derivation(), c in arb_derivation(), lambda in 0u32..3
    ) {
        let k = &contexts()[pick];
        let basis = k.basis(1 << 12).unwrap();
        let (a, b, c) = (derivation(k, &basis, &a), derivation(k, &basis, &b), derivation(k, &basis, &c));
        let lhs = bracket(k, &a.add(k, &b.scaled(k, lambda)), &c);
        let rhs = bracket(k, &a, &c).add(k, &bracket(k, &b, &c).scaled(k, lambda));
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(bracket(k, &a, &b).add(k, &bracket(k, &b, &a)), Derivation::zero());
        let jacobi = bracket(k, &a, &bracket(k, &b, &c))
            .add(k, &bracket(k, &b, &bracket(k, &c, &a)))
            .add(k, &bracket(k, &c, &bracket(k, &a, &b)));
        prop_assert_eq!(jacobi, Derivation::zero());
    }

    #[test]
    fn closure_dimensions_are_prefixes(lo in 1u64..9, extra in 0u64..4) {
        let k = ctx(2, 1, 1, 4);
        let w = trusted_bound(&k).unwrap();
        let hi = (lo + extra).min(w);
        let gens = clover_generators(&k).unwrap();
        let small = restricted_closure(&k, &gens, lo.min(hi)).unwrap().dims_by_multidegree();
        let big = restricted_closure(&k, &gens, hi).unwrap().dims_by_multidegree();
        for (g, d) in &small {
            prop_assert_eq!(big.get(g), Some(d));
        }
        prop_assert!(big.keys().filter(|g| g.iter().sum::<u64>() <= lo.min(hi)).all(|g| small.contains_key(g)));
    }
}

#[test]
fn verification_is_deterministic() {
    let t = ParameterTuple::constant(3, 1, 1).unwrap();
    let a = (verify_basis_theorem(&t, 3).unwrap(), verify_grading(&t, 3).unwrap());
    let b = (verify_basis_theorem(&t, 3).unwrap(), verify_grading(&t, 3).unwrap());
    assert_eq!(format!("{}{}", a.0, a.1), format!("{}{}", b.0, b.1));
}

#[test]
fn lambda_decreases_in_s() {
    let mut prev: Option<f64> = None;
    for s in 1..=64 {
        let g = gk_periodic(&ParameterTuple::constant(2, s, 1).unwrap()).unwrap();
        if let Some(lo) = prev {
            assert!(g.lambda.hi < lo, "S={s}");
        }
        prev = Some(g.lambda.lo);
    }
}
