//! Character sums against a direct enumeration that uses only field
//! arithmetic: Horner evaluation, definitional trace, norm by powering.

use lpoly_core::char_sums::{MultiplicativeCharacter, PolySpec, SumEngine};
use lpoly_core::cyclotomic::{CycloElem, CycloRing, ZetaPart};
use lpoly_core::field::{norm_to, Embedding, FieldSpec};

fn oracle_twisted(poly: &PolySpec, chi: &MultiplicativeCharacter, kappa: u64, r: usize) -> CycloElem {
    let base = poly.base();
    let big = FieldSpec::new(base.p(), base.degree() * r).unwrap();
    let emb = Embedding::new(base, &big).unwrap();
    let coeffs: Vec<_> = poly.coefficients();
    let d = chi.d();
    let mut table = vec![vec![0i64; d as usize]; base.p() as usize];
    for x in big.elements().filter(|x| !big.is_zero(x)) {
        let v = lpoly_core::field::eval_poly(&coeffs, &x, &emb);
        let tr = big.trace_to_prime(&v);
        let n = norm_to(&x, base, &emb).unwrap();
        let b = chi.exponent(&n, kappa).unwrap();
        table[tr as usize][b as usize] += 1;
    }
    CycloRing::new(base.p(), d).unwrap().from_exponent_table(&table)
}

fn oracle_power(poly: &PolySpec, d: u64, r: usize) -> CycloElem {
    let base = poly.base();
    let big = FieldSpec::new(base.p(), base.degree() * r).unwrap();
    let emb = Embedding::new(base, &big).unwrap();
    let coeffs = poly.coefficients();
    let mut table = vec![vec![0i64; 1]; base.p() as usize];
    for x in big.elements() {
        let v = lpoly_core::field::eval_poly(&coeffs, &big.pow(&x, d as u128), &emb);
        table[big.trace_to_prime(&v) as usize][0] += 1;
    }
    CycloRing::new(base.p(), 1).unwrap().from_exponent_table(&table)
}

#[test]
fn quadratic_gauss_sum_q3() {
    let engine = SumEngine::default();
    let f3 = FieldSpec::new(3, 1).unwrap();
    let ring = CycloRing::new(3, 2).unwrap();
    let expect = ring.zeta_pow(ZetaPart::P, 1).sub(&ring.zeta_pow(ZetaPart::P, 2)).unwrap();
    let g = engine.gauss_sum(&f3, 2, 1).unwrap();
    assert_eq!(g, expect);
    assert_eq!(g.mul(&g).unwrap(), ring.from_int(-3));
    let x = PolySpec::new(&f3, vec![]).unwrap();
    let chi = MultiplicativeCharacter::new(&f3, 2).unwrap();
    assert_eq!(engine.twisted_sum(&x, &chi, 1, 1).unwrap(), expect);
}

#[test]
fn additive_examples() {
    let engine = SumEngine::default();
    let f3 = FieldSpec::new(3, 1).unwrap();
    let ring = CycloRing::new(3, 1).unwrap();
    let one_plus_two_zeta = ring.one().add(&ring.zeta_pow(ZetaPart::P, 1).scale(&2.into())).unwrap();
    let x2 = PolySpec::from_encodings(&f3, &[0]).unwrap();
    assert_eq!(engine.additive_sum(&x2, 1).unwrap(), one_plus_two_zeta);
    let x = PolySpec::new(&f3, vec![]).unwrap();
    assert_eq!(engine.power_sum(&x, 2, 1).unwrap(), one_plus_two_zeta);
    let f7 = FieldSpec::new(7, 1).unwrap();
    assert!(engine.additive_sum(&PolySpec::new(&f7, vec![]).unwrap(), 1).unwrap().is_zero());
}

#[test]
fn twisted_sums_match_enumeration() {
    let engine = SumEngine::default();
    let cases: &[(u64, usize, u64, &[u64])] = &[
        (7, 1, 3, &[1]),
        (7, 1, 6, &[3, 2]),
        (5, 1, 4, &[2]),
        (2, 2, 3, &[1, 0]),
        (3, 2, 4, &[5]),
        (3, 2, 8, &[]),
        (13, 1, 3, &[4]),
    ];
    for &(p, m, d, codes) in cases {
        let base = FieldSpec::new(p, m).unwrap();
        let poly = PolySpec::from_encodings(&base, codes).unwrap();
        let chi = MultiplicativeCharacter::new(&base, d).unwrap();
        for kappa in 1..d {
            for r in 1..=3 {
                if base.order().pow(r as u32) > 5000 {
                    continue;
                }
                assert_eq!(
                    engine.twisted_sum(&poly, &chi, kappa, r).unwrap(),
                    oracle_twisted(&poly, &chi, kappa, r),
                    "p={p} m={m} d={d} kappa={kappa} r={r} P={codes:?}"
                );
            }
        }
    }
}

#[test]
fn gauss_sum_f4() {
    let engine = SumEngine::default();
    let f4 = FieldSpec::new(2, 2).unwrap();
    let x = PolySpec::new(&f4, vec![]).unwrap();
    let chi = MultiplicativeCharacter::new(&f4, 3).unwrap();
    assert_eq!(engine.gauss_sum(&f4, 3, 1).unwrap(), oracle_twisted(&x, &chi, 1, 1));
    // G(chi) G(chi-bar) = chi(-1) q = 4
    let g1 = engine.gauss_sum(&f4, 3, 1).unwrap();
    let g2 = engine.gauss_sum(&f4, 3, 2).unwrap();
    assert_eq!(g1.mul(&g2).unwrap(), CycloRing::new(2, 3).unwrap().from_int(4));
}

#[test]
fn power_sums_match_enumeration() {
    let engine = SumEngine::default();
    for &(p, m, d, codes) in &[(5u64, 1usize, 3u64, &[1u64][..]), (7, 1, 2, &[2, 5]), (3, 2, 4, &[1]), (2, 3, 3, &[3, 1])] {
        let base = FieldSpec::new(p, m).unwrap();
        let poly = PolySpec::from_encodings(&base, codes).unwrap();
        for r in 1..=3 {
            if base.order().pow(r as u32) > 5000 {
                continue;
            }
            assert_eq!(engine.power_sum(&poly, d, r).unwrap(), oracle_power(&poly, d, r));
        }
    }
}

#[test]
fn gauss_family_l_function() {
    let engine = SumEngine::default();
    let f7 = FieldSpec::new(7, 1).unwrap();
    let x = PolySpec::new(&f7, vec![]).unwrap();
    let chi = MultiplicativeCharacter::new(&f7, 3).unwrap();
    let l = engine.twisted_l_function(&x, &chi, 1).unwrap();
    assert_eq!(l.degree(), 1);
    assert_eq!(l.coeffs()[1], engine.gauss_sum(&f7, 3, 1).unwrap());
}

#[test]
fn frobenius_invariance() {
    let engine = SumEngine::default();
    let f9 = FieldSpec::new(3, 2).unwrap();
    let f3 = FieldSpec::new(3, 1).unwrap();
    // coefficients from the prime field, so P commutes with Frobenius
    let emb = Embedding::new(&f3, &f9).unwrap();
    let poly = PolySpec::from_encodings(&f3, &[2]).unwrap().base_change(&emb).unwrap();
    let chi = MultiplicativeCharacter::new(&f9, 8).unwrap();
    for kappa in 1..8u64 {
        for r in 1..=2 {
            let a = engine.twisted_sum(&poly, &chi, kappa, r).unwrap();
            let b = engine.twisted_sum(&poly, &chi, kappa * 9 % 8, r).unwrap();
            assert_eq!(a, b);
        }
    }
}

#[test]
fn character_decomposition_of_power_sums() {
    let engine = SumEngine::default();
    for &(p, m, d, codes) in &[(7u64, 1usize, 3u64, &[2u64][..]), (5, 1, 3, &[1]), (5, 1, 4, &[3, 1]), (3, 2, 4, &[7])] {
        let base = FieldSpec::new(p, m).unwrap();
        let poly = PolySpec::from_encodings(&base, codes).unwrap();
        for r in 1..=3 {
            if base.order().pow(r as u32) > 20000 {
                continue;
            }
            let lhs = engine.power_sum(&poly, d, r).unwrap();
            let rhs = engine.power_sum_by_characters(&poly, d, r).unwrap();
            assert_eq!(lhs.embed_into(rhs.ring()).unwrap(), rhs, "p={p} d={d} r={r}");
        }
    }
}

#[test]
fn power_l_function_factors() {
    let engine = SumEngine::default();
    for &(p, m, d, codes) in &[(5u64, 1usize, 3u64, &[1u64][..]), (7, 1, 3, &[3]), (7, 1, 2, &[1, 4]), (5, 1, 2, &[2]), (3, 1, 2, &[])] {
        let base = FieldSpec::new(p, m).unwrap();
        let poly = PolySpec::from_encodings(&base, codes).unwrap();
        let lhs = engine.power_l_function(&poly, d).unwrap();
        assert_eq!(lhs.degree() as u64, d * poly.degree() - 1);
        let rhs = engine.power_factor_product(&poly, d).unwrap();
        assert_eq!(lhs.embed_into(rhs.ring()).unwrap(), rhs, "p={p} d={d} P={codes:?}");
    }
}
