mod common;

use symdiff::bounds;
use symdiff::search::{self, Method, SearchConfig};
use symdiff::Plane;

use common::Known;

fn known_row(q: u32) -> Vec<Known> {
    match q {
        3 => common::exact_known(&common::Q3),
        5 => common::exact_known(&common::Q5),
        7 => common::exact_known(&common::Q7),
        9 => common::exact_known(&common::Q9),
        11 => common::Q11.to_vec(),
        _ => unreachable!(),
    }
}

#[test]
fn theory_bounds_bracket_reference_values() {
    for q in [3u32, 5, 7, 9, 11] {
        let p = Plane::of_order(q).unwrap();
        let table = bounds::assemble(&p).unwrap();
        for (i, k) in known_row(q).into_iter().enumerate() {
            let r = i + 1;
            for rec in [&table[r], &table[p.n() - r]] {
                match k {
                    Known::Exact(v) => {
                        assert!(rec.lo <= v && v <= rec.hi, "q={q} r={}: {v} outside [{}, {}]", rec.r, rec.lo, rec.hi)
                    }
                    Known::Range(lo, hi) => assert!(rec.lo <= hi && lo <= rec.hi, "q={q} r={}", rec.r),
                }
            }
        }
    }
}

#[test]
fn every_upper_bound_has_a_checked_witness() {
    for q in [3u32, 5, 7, 9, 11, 13] {
        let p = Plane::of_order(q).unwrap();
        for rec in bounds::assemble(&p).unwrap() {
            let w = rec.witness.as_ref().unwrap_or_else(|| panic!("q={q} r={} has no witness", rec.r));
            w.verify(&p, rec.r, rec.hi).unwrap();
            assert!(rec.lo <= rec.hi);
            assert_eq!(rec.exact, rec.lo == rec.hi);
        }
    }
}

#[test]
fn q3_search_table_matches_and_verifies() {
    let p = Plane::of_order(3).unwrap();
    let want = common::full_row(&common::Q3);
    for method in [Method::Exhaustive, Method::DualSweep] {
        let table = search::run(&p, &SearchConfig::new(3, method)).unwrap();
        table.verify(&p).unwrap();
        let got: Vec<usize> = table.entries.iter().map(|e| e.hi).collect();
        assert_eq!(got, want, "{method:?}");
        assert!(table.entries.iter().all(|e| e.exact));
    }
}

#[test]
fn q5_sweep_certifies_whole_table() {
    let p = Plane::of_order(5).unwrap();
    let table = search::run(&p, &SearchConfig::new(5, Method::DualSweep)).unwrap();
    let got: Vec<usize> = table.entries.iter().map(|e| e.hi).collect();
    assert_eq!(got, common::full_row(&common::Q5));
    assert!(table.entries.iter().all(|e| e.exact));
}

#[test]
fn max_of_f_is_attained_in_table() {
    for q in [5u32, 7] {
        let m = bounds::max_of_f(q, None);
        let row = common::full_row(if q == 5 { &common::Q5 } else { &common::Q7 });
        let max = *row.iter().max().unwrap();
        assert_eq!(m.value, max);
        let argmax: Vec<usize> = (0..row.len()).filter(|&r| row[r] == max).collect();
        assert_eq!(m.argmax, argmax);
    }
}
