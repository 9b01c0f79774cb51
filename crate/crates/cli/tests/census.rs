use std::collections::{BTreeMap, BTreeSet};

use tensorgap::{FieldSpec, Orbit222, Scalar, Tensor};
use tensorgap_cli::census::{census_222, census_row, tensor_from_id, write_csv, CENSUS_DIMS};

const F2: FieldSpec = FieldSpec::Prime(2);

fn counts(labels: impl Iterator<Item = Orbit222>) -> BTreeMap<&'static str, usize> {
    let mut m = BTreeMap::new();
    for l in labels {
        *m.entry(l.name()).or_insert(0) += 1;
    }
    m
}

#[test]
fn f2_census_counts() {
    let rows = census_222(2).unwrap();
    assert_eq!(rows.len(), 256);
    assert!(rows.iter().enumerate().all(|(i, r)| r.id == i as u64));
    let c = counts(rows.iter().map(|r| r.label));
    assert_eq!(c.values().sum::<usize>(), 256);
    assert_eq!(c["Zero"], 1);
    for r in &rows {
        assert_eq!(r.gap_class, r.label.asymptotic_class());
        if r.label == Orbit222::WClass {
            assert_eq!(r.subrank, 1);
            assert_eq!(r.ranks, [2, 2, 2]);
        }
    }
}

#[test]
fn rank_one_count_matches_outer_products() {
    let vecs: Vec<Vec<u64>> = (1..4u64).map(|c| vec![c & 1, c >> 1 & 1]).collect();
    let mut products = BTreeSet::new();
    for a in &vecs { for b in &vecs { for c in &vecs {
        let mut id = 0u64;
        let mut o = 0;
        for i in 0..2 { for j in 0..2 { for k in 0..2 {
            id |= (a[i] * b[j] * c[k]) << o;
            o += 1;
        }}}
        products.insert(id);
    }}}
    let rows = census_222(2).unwrap();
    let rank1: BTreeSet<u64> = rows.iter().filter(|r| r.label == Orbit222::Rank1).map(|r| r.id).collect();
    assert_eq!(rank1, products);
}

#[test]
fn labels_are_invariant_under_axis_permutation() {
    let rows = census_222(2).unwrap();
    let base = counts(rows.iter().map(|r| r.label));
    for perm in [[1, 0, 2], [0, 2, 1], [2, 0, 1], [1, 2, 0], [2, 1, 0]] {
        let permuted = (0..256).map(|id| {
            let t = tensor_from_id(2, &CENSUS_DIMS, id).permute(&perm).unwrap();
            tensorgap::order3::classify_222(&t).unwrap()
        });
        assert_eq!(counts(permuted), base, "perm {perm:?}");
    }
}

#[test]
fn census_output_is_byte_identical() {
    let render = || {
        let mut buf = Vec::new();
        write_csv(&census_222(2).unwrap(), 2, &mut buf).unwrap();
        buf
    };
    let a = render();
    assert_eq!(a, render());
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("id,label,ranks,cay,subrank,gap_class\n0,Zero,0;0;0,0,0,none\n"));
    assert!(text.lines().last().unwrap().starts_with("# summary {"));
}

#[test]
fn f3_rows_sample() {
    let zero = census_row(&tensor_from_id(3, &CENSUS_DIMS, 0), 1 << 30).unwrap();
    assert_eq!(zero.label, Orbit222::Zero);
    let unit = Tensor::<Scalar>::indicator(FieldSpec::Prime(3), vec![2, 2, 2], &[vec![0, 0, 0], vec![1, 1, 1]]).unwrap();
    let row = census_row(&unit, 1 << 30).unwrap();
    assert_eq!((row.label, row.subrank), (Orbit222::UnitClass, 2));
    let w = tensorgap::w_tensor_2::<Scalar>(3, F2);
    assert_eq!(census_row(&w, 1 << 30).unwrap().subrank, 1);
}
