use monozeta::ff_oracle::{build_jet_system, count_jets, count_naive, verify_class, CountOptions};
use monozeta::SemigroupData;

fn s(text: &str) -> SemigroupData {
    text.parse().unwrap()
}

fn opts(local: bool) -> CountOptions {
    CountOptions { local, ..CountOptions::default() }
}

#[test]
fn layered_counts_equal_full_product_counts() {
    for (text, qs) in [("2,3", &[5u64, 7][..]), ("4,6,13", &[5][..]), ("8,12,26,53", &[5][..]), ("3,5", &[7][..])] {
        let c = s(text);
        for &q in qs {
            for m in 0..=1 {
                let sys = build_jet_system(&c, m, q).unwrap();
                for local in [false, true] {
                    assert_eq!(
                        count_jets(&sys, opts(local)).unwrap(),
                        count_naive(&sys, local),
                        "{text} q={q} m={m} local={local}"
                    );
                }
            }
        }
    }
}

#[test]
fn shortcuts_do_not_change_counts() {
    for (text, q, m) in [("2,3", 5, 4), ("4,6,13", 5, 3), ("6,9,19", 5, 2), ("3,7", 5, 4)] {
        let c = s(text);
        let sys = build_jet_system(&c, m, q).unwrap();
        for local in [false, true] {
            let fast = count_jets(&sys, opts(local)).unwrap();
            let slow = count_jets(&sys, CountOptions { exhaustive: true, ..opts(local) }).unwrap();
            assert_eq!(fast, slow, "{text} q={q} m={m} local={local}");
        }
    }
}

#[test]
fn counts_match_classes_for_reference_curves() {
    let c = s("4,6,13");
    for q in [5, 7] {
        for m in 0..=3 {
            for local in [false, true] {
                let r = verify_class(&c, m, q, opts(local)).unwrap();
                assert!(r.matched, "{r:?}");
            }
        }
    }
    let cusp = s("2,3");
    for q in [5, 7, 11] {
        for m in 0..=6 {
            for local in [false, true] {
                let r = verify_class(&cusp, m, q, opts(local)).unwrap();
                assert!(r.matched, "{r:?}");
            }
        }
    }
}

#[test]
fn thread_count_does_not_change_counts() {
    let c = s("4,6,13");
    let sys = build_jet_system(&c, 4, 5).unwrap();
    for local in [false, true] {
        let base = count_jets(&sys, opts(local)).unwrap();
        for threads in [2, 3, 8] {
            let r = count_jets(&sys, CountOptions { threads, ..opts(local) }).unwrap();
            assert_eq!(r, base);
        }
    }
}
