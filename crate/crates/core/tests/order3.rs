use std::collections::BTreeMap;

use proptest::prelude::*;
use tensorgap::algebra::{FieldElement, FieldSpec, Matrix, Scalar};
use tensorgap::bruteforce::subrank_bruteforce;
use tensorgap::gap::*;
use tensorgap::order3::*;
use tensorgap::sampling::{f2_tensor_from_code, random_invertible, random_scalar, random_tensor, rng};
use tensorgap::tensor::{unit_tensor, w_tensor_2, Tensor};

const Q: FieldSpec = FieldSpec::Rational;
const F2: FieldSpec = FieldSpec::Prime(2);

/// Discriminant of `det(λ·T[:,:,0] + μ·T[:,:,1])` as a binary quadratic form.
fn pencil_discriminant(t: &Tensor<Scalar>) -> Scalar {
    let f = t.field();
    let e = |i, j, k| t.get(&[i, j, k]).clone();
    let det = |a: Scalar, b: Scalar, c: Scalar, d: Scalar| a.mul(&d).sub(&b.mul(&c));
    let qa = det(e(0, 0, 0), e(0, 1, 0), e(1, 0, 0), e(1, 1, 0));
    let qc = det(e(0, 0, 1), e(0, 1, 1), e(1, 0, 1), e(1, 1, 1));
    let qb = e(0, 0, 0).mul(&e(1, 1, 1)).add(&e(0, 0, 1).mul(&e(1, 1, 0)))
        .sub(&e(0, 1, 0).mul(&e(1, 0, 1))).sub(&e(0, 1, 1).mul(&e(1, 0, 0)));
    qb.mul(&qb).sub(&Scalar::from_i64(4, f).mul(&qa).mul(&qc))
}

/// All 2×2 matrices over F₂, each tuple checked directly.
fn naive_restricts_to_unit(t: &Tensor<Scalar>) -> bool {
    let mats: Vec<Matrix<Scalar>> = (0..16u32)
        .map(|c| {
            let d = (0..4).map(|i| Scalar::residue(u64::from(c >> i & 1), 2)).collect();
            Matrix::new(F2, 2, 2, d).unwrap()
        })
        .collect();
    let target = unit_tensor::<Scalar>(3, 2, F2).unwrap();
    mats.iter().any(|a| mats.iter().any(|b| mats.iter().any(|c| {
        t.restrict(&[a.clone(), b.clone(), c.clone()]).unwrap() == target
    })))
}

#[test]
fn cay_examples() {
    assert_eq!(cayley_hyperdet(&unit_tensor::<Scalar>(3, 2, Q).unwrap()).unwrap(), Scalar::one(Q));
    assert!(cayley_hyperdet(&w_tensor_2::<Scalar>(3, Q)).unwrap().is_zero());
    assert!(cayley_hyperdet(&Tensor::<Scalar>::zeros(Q, vec![2, 2, 2]).unwrap()).unwrap().is_zero());
    assert!(cayley_hyperdet(&Tensor::<Scalar>::zeros(Q, vec![2, 3, 2]).unwrap()).is_err());
}

#[test]
fn classify_examples() {
    let pencil = Tensor::<Scalar>::indicator(Q, vec![2, 2, 2], &[vec![0, 0, 0], vec![1, 1, 0]]).unwrap();
    assert_eq!(classify_222(&pencil).unwrap(), Orbit222::Pencil2x2Split);
    assert_eq!(classify_222(&w_tensor_2::<Scalar>(3, Q)).unwrap(), Orbit222::WClass);
    assert_eq!(classify_222(&unit_tensor::<Scalar>(3, 2, Q).unwrap()).unwrap(), Orbit222::UnitClass);
    for o in Orbit222::ALL {
        assert_eq!(classify_222(&o.representative::<Scalar>(Q)).unwrap(), o);
        assert_eq!(o.name().parse::<Orbit222>().unwrap(), o);
    }
}

#[test]
fn multilinear_rank_examples() {
    let w = w_tensor_2::<Scalar>(3, Q).pad_to(&[3, 3, 3]).unwrap();
    assert!(multilinear_rank_le_2(&w).unwrap());
    assert!(!multilinear_rank_le_2(&unit_tensor::<Scalar>(3, 3, Q).unwrap()).unwrap());
    let mut g = rng(2);
    assert!(multilinear_rank_le_2(&random_tensor(&mut g, Q, &[2, 2, 2], 9)).unwrap());
}

#[test]
fn f2_census_partitions_and_matches_oracles() {
    let mut counts = BTreeMap::new();
    for code in 0..256u64 {
        let t = f2_tensor_from_code(&[2, 2, 2], code);
        let label = classify_222(&t).unwrap();
        *counts.entry(label.name()).or_insert(0) += 1;
        let cay = cayley_hyperdet(&t).unwrap();
        assert_eq!(cay, pencil_discriminant(&t), "code {code}");
        match label {
            Orbit222::WClass => {
                assert!(cay.is_zero());
                assert_eq!(factor_ranks(&t).unwrap(), [2, 2, 2]);
                assert!(!naive_restricts_to_unit(&t));
                assert!(!subrank_bruteforce(&t, 2).unwrap());
            }
            Orbit222::UnitClass => {
                // subrank 2 over F₂ exactly when the pencil splits over F₂
                let naive = naive_restricts_to_unit(&t);
                assert_eq!(subrank_bruteforce(&t, 2).unwrap(), naive);
                assert_eq!(unit_witness_222(&t).unwrap().is_some(), naive);
            }
            _ => assert!(!naive_restricts_to_unit(&t)),
        }
    }
    assert_eq!(counts.values().sum::<usize>(), 256);
    assert_eq!(counts["Zero"], 1);
    assert_eq!(counts["Rank1"], 27);
    assert_eq!(counts.len(), 7);
}

#[test]
fn twisted_unit_class_lacks_ground_field_witness() {
    // multiplication tensor of F₄ over F₂: Cay = 1, pencil irreducible
    let t = Tensor::<Scalar>::indicator(F2, vec![2, 2, 2], &[vec![0, 0, 0], vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0], vec![1, 1, 1]]).unwrap();
    assert_eq!(classify_222(&t).unwrap(), Orbit222::UnitClass);
    assert!(!naive_restricts_to_unit(&t));
    let report = trichotomy(&t, 0, 8).unwrap();
    assert_eq!(report.trichotomy, Trichotomy::RestrictsToUnit2);
    assert!(report.ground_field_witness_missing);
    assert!(report.unit_witness.is_none());
    assert_eq!(gap_class(&report).class, AsymptoticClass::AtLeastTwo);
}

#[test]
fn trichotomy_examples() {
    let w = w_tensor_2::<Scalar>(3, Q).pad_to(&[5, 4, 3]).unwrap();
    let r = trichotomy(&w, 1, 8).unwrap();
    assert_eq!(r.trichotomy, Trichotomy::WIsomorphic);
    assert_eq!(r.confidence, Confidence::Randomized(8));
    assert_eq!(r.cayley_samples.len(), 8);
    assert!((gap_class(&r).value - 1.88988).abs() < 1e-5);

    let i = unit_tensor::<Scalar>(3, 2, Q).unwrap();
    let r = trichotomy(&i, 1, 8).unwrap();
    assert_eq!(r.trichotomy, Trichotomy::RestrictsToUnit2);
    let maps = r.unit_witness.clone().unwrap();
    assert_eq!(i.restrict(&maps).unwrap(), i);
    assert_eq!(gap_class(&r).to_string(), "≥ 2");

    let m = Tensor::<Scalar>::indicator(Q, vec![2, 2], &[vec![0, 0], vec![1, 1]]).unwrap();
    let e1m = Tensor::stack_last(&[m.clone(), Tensor::zeros(Q, vec![2, 2]).unwrap()])
        .unwrap()
        .permute(&[2, 0, 1])
        .unwrap();
    let r = trichotomy(&e1m, 0, 8).unwrap();
    assert_eq!(r.trichotomy, Trichotomy::FlatteningRankOne);
    assert_eq!(r.confidence, Confidence::Deterministic);
    assert_eq!(r.flattening_witness.unwrap().to_string(), "{0}");
    assert_eq!(gap_class(&r).value, 1.0);

    assert!(trichotomy(&Tensor::<Scalar>::zeros(Q, vec![2, 2, 2]).unwrap(), 0, 8).is_err());
    assert!(trichotomy(&w_tensor_2::<Scalar>(4, Q), 0, 8).is_err());
}

#[test]
fn constants() {
    assert_eq!(gap_constant(2).unwrap().value, 2.0);
    assert_eq!(gap_constant(2).unwrap().exact, "2");
    for (k, v) in [(3, 1.88988), (4, 1.75477), (5, 1.64938)] {
        assert!((gap_constant(k).unwrap().value - v).abs() < 1e-5);
    }
    let mut prev = f64::INFINITY;
    for k in 2..64 {
        let c = gap_constant(k).unwrap().value;
        assert!(c > 1.0 && c < prev);
        assert!((gap_constant_ratio(k) - gap_constant_entropy(k)).abs() < 1e-12);
        prev = c;
    }
    assert!(gap_constant(1).is_err());
    assert!(class_constant(AsymptoticClass::C3).value < 2.0);
}

// coordinate projection K³ → K² dropping basis vector `drop`
fn drop_coord(drop: usize) -> Matrix<Scalar> {
    let keep: Vec<usize> = (0..3).filter(|&i| i != drop).collect();
    let rows = keep.iter().map(|&c| (0..3).map(|j| Scalar::from_i64((j == c) as i64, Q)).collect()).collect();
    Matrix::from_rows(Q, rows).unwrap()
}

fn cay_of_projection(t: &Tensor<Scalar>, ijk: [usize; 3]) -> Scalar {
    let maps: Vec<_> = ijk.iter().map(|&d| drop_coord(d)).collect();
    cayley_hyperdet(&t.restrict(&maps).unwrap()).unwrap()
}

struct Theta(BTreeMap<[usize; 3], Scalar>);

impl Theta {
    fn get(&self, idx: [usize; 3]) -> Scalar {
        self.0[&idx].clone()
    }
    fn set(&mut self, idx: [usize; 3], v: Scalar) {
        self.0.insert(idx, v);
    }
    fn tensor(&self) -> Tensor<Scalar> {
        let mut t = w_tensor_2::<Scalar>(3, Q).pad_to(&[3, 3, 3]).unwrap();
        for (idx, v) in &self.0 {
            t.set(idx, v.clone());
        }
        t
    }
}

fn random_theta(seed: u64) -> Theta {
    let mut g = rng(seed);
    let mut m = BTreeMap::new();
    for i in 0..3 { for j in 0..3 { for k in 0..3 {
        if i == 2 || j == 2 || k == 2 {
            m.insert([i, j, k], random_scalar(&mut g, Q, 50));
        }
    }}}
    Theta(m)
}

fn sq(x: Scalar) -> Scalar {
    x.mul(&x)
}

#[test]
fn cay_eliminations_on_the_cubic_family() {
    for seed in 0..20 {
        let mut th = random_theta(seed);
        let t = th.tensor();
        assert_eq!(cay_of_projection(&t, [0, 2, 2]), sq(th.get([2, 1, 1])));
        assert_eq!(cay_of_projection(&t, [2, 0, 2]), sq(th.get([1, 2, 1])));
        assert_eq!(cay_of_projection(&t, [2, 2, 0]), sq(th.get([1, 1, 2])));

        for idx in [[2, 1, 1], [1, 2, 1], [1, 1, 2]] {
            th.set(idx, Scalar::zero(Q));
        }
        let t = th.tensor();
        assert_eq!(cay_of_projection(&t, [1, 2, 2]), sq(th.get([2, 0, 1]).sub(&th.get([2, 1, 0]))));
        assert_eq!(cay_of_projection(&t, [2, 1, 2]), sq(th.get([0, 2, 1]).sub(&th.get([1, 2, 0]))));
        assert_eq!(cay_of_projection(&t, [2, 2, 1]), sq(th.get([0, 1, 2]).sub(&th.get([1, 0, 2]))));

        th.set([2, 0, 1], th.get([2, 1, 0]));
        th.set([0, 2, 1], th.get([1, 2, 0]));
        th.set([0, 1, 2], th.get([1, 0, 2]));
        let t = th.tensor();
        assert_eq!(cay_of_projection(&t, [2, 1, 0]), sq(th.get([1, 2, 2]).sub(&th.get([1, 0, 2]).mul(&th.get([1, 2, 0])))));
        assert_eq!(cay_of_projection(&t, [0, 2, 1]), sq(th.get([2, 1, 2]).sub(&th.get([0, 1, 2]).mul(&th.get([2, 1, 0])))));
        assert_eq!(cay_of_projection(&t, [1, 0, 2]), sq(th.get([2, 2, 1]).sub(&th.get([2, 1, 0]).mul(&th.get([1, 2, 0])))));

        th.set([1, 2, 2], th.get([1, 0, 2]).mul(&th.get([1, 2, 0])));
        th.set([2, 1, 2], th.get([0, 1, 2]).mul(&th.get([2, 1, 0])));
        th.set([2, 2, 1], th.get([2, 1, 0]).mul(&th.get([1, 2, 0])));
        let t = th.tensor();
        let e220 = th.get([1, 2, 0]).mul(&th.get([2, 0, 0])).add(&th.get([0, 2, 0]).mul(&th.get([2, 1, 0])));
        let e202 = th.get([1, 0, 2]).mul(&th.get([2, 0, 0])).add(&th.get([0, 0, 2]).mul(&th.get([2, 1, 0])));
        let e022 = th.get([0, 2, 0]).mul(&th.get([1, 0, 2])).add(&th.get([0, 0, 2]).mul(&th.get([1, 2, 0])));
        assert_eq!(cay_of_projection(&t, [1, 1, 2]), sq(th.get([2, 2, 0]).sub(&e220)));
        assert_eq!(cay_of_projection(&t, [1, 2, 1]), sq(th.get([2, 0, 2]).sub(&e202)));
        assert_eq!(cay_of_projection(&t, [2, 1, 1]), sq(th.get([0, 2, 2]).sub(&e022)));

        th.set([2, 2, 0], e220);
        th.set([2, 0, 2], e202);
        th.set([0, 2, 2], e022);
        let t = th.tensor();
        let e222 = th.get([1, 0, 2]).mul(&th.get([2, 2, 0])).add(&th.get([0, 0, 2]).mul(&th.get([2, 2, 1])));
        assert_eq!(cay_of_projection(&t, [0, 1, 1]), sq(th.get([2, 2, 2]).sub(&e222)));

        th.set([2, 2, 2], e222);
        let t = th.tensor();
        assert!(multilinear_rank_le_2(&t).unwrap());
        for i in 0..3 { for j in 0..3 { for k in 0..3 {
            assert!(cay_of_projection(&t, [i, j, k]).is_zero(), "seed {seed}, projection {i}{j}{k}");
        }}}
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn orbit_label_is_gl_invariant(seed in any::<u64>(), p in prop::sample::select(vec![0u64, 2, 3, 7])) {
        let field = if p == 0 { Q } else { FieldSpec::Prime(p) };
        let mut g = rng(seed);
        let t = random_tensor(&mut g, field, &[2, 2, 2], 2);
        let maps: Vec<_> = (0..3).map(|_| random_invertible(&mut g, field, 2, 3)).collect();
        let moved = t.restrict(&maps).unwrap();
        prop_assert_eq!(classify_222(&moved).unwrap(), classify_222(&t).unwrap());
        prop_assert_eq!(cayley_hyperdet(&moved).unwrap().is_zero(), cayley_hyperdet(&t).unwrap().is_zero());
    }

    #[test]
    fn cay_is_pencil_discriminant(seed in any::<u64>()) {
        let t = random_tensor(&mut rng(seed), Q, &[2, 2, 2], 20);
        prop_assert_eq!(cayley_hyperdet(&t).unwrap(), pencil_discriminant(&t));
    }

    #[test]
    fn report_class_follows_trichotomy(seed in any::<u64>(), dims in prop::collection::vec(2usize..4, 3)) {
        let t = random_tensor(&mut rng(seed), Q, &dims, 2);
        prop_assume!(!t.is_zero());
        let r = trichotomy(&t, seed, 4).unwrap();
        prop_assert_eq!(r.asymptotic_class, r.trichotomy.asymptotic_class());
        prop_assert_eq!(gap_class(&r).class, r.asymptotic_class);
        if let Some(maps) = &r.unit_witness {
            prop_assert_eq!(t.restrict(maps).unwrap(), unit_tensor::<Scalar>(3, 2, Q).unwrap());
        }
    }
}
