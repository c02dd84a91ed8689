mod common;

use factoromata::oracle::{
    factorial_residue, factorial_residues, lemma_window_count, scan_members, theta_direct,
    three_square_test, triple_counts, triple_prefix_counts, FactorialResidue,
};
use factoromata::seed::ThetaTriple;

#[test]
fn triangle_window_factorial_three_squares() {
    let limit = 100_000;
    let lib = factorial_residues(limit);
    let reference = common::factorial_table(limit);
    let members = common::non_sum_table(limit);
    for n in 0..=limit {
        let FactorialResidue { nu2, odd_mod8 } = lib[n as usize];
        assert_eq!((nu2, odd_mod8), reference[n as usize], "n = {n}");
        let by_theta = theta_direct(n) == ThetaTriple::NON_SUM;
        let by_factorial = nu2 % 2 == 0 && odd_mod8 == 7;
        assert_eq!(by_theta, by_factorial, "n = {n}");
        assert_eq!(by_factorial, members[n as usize], "n = {n}");
    }
    for n in 0..=25u64 {
        let f = common::factorial(n);
        assert_eq!(three_square_test(&f), common::is_sum_of_three_squares(&f));
        assert_eq!(!three_square_test(&f), members[n as usize], "n = {n}");
    }
}

#[test]
fn documented_examples() {
    assert_eq!(
        factorial_residue(10),
        FactorialResidue {
            nu2: 8,
            odd_mod8: 7
        }
    );
    assert_eq!(
        factorial_residue(0),
        FactorialResidue {
            nu2: 0,
            odd_mod8: 1
        }
    );
    assert_eq!(theta_direct(0), ThetaTriple::new(0, 0, 0));
    assert_eq!(theta_direct(1), ThetaTriple::new(0, 0, 0));
    assert_eq!(theta_direct(10), ThetaTriple::NON_SUM);
    assert_eq!(theta_direct(6), ThetaTriple::new(0, 1, 1));
    let scan = scan_members(1 << 12);
    assert_eq!(scan.count(8), 0);
    assert_eq!(scan.count(16), 2);
    assert_eq!(scan.members().take(2).collect::<Vec<_>>(), vec![10, 12]);
}

#[test]
fn triple_tables_partition() {
    let n = 1 << 14;
    let counts = triple_counts(n);
    assert_eq!(counts.iter().sum::<u64>(), n);
    let mut direct = [0u64; 8];
    for r in 1..=n {
        direct[common::theta_code(r)] += 1;
    }
    assert_eq!(counts, direct);
    let prefix = triple_prefix_counts(n);
    for t in 0..8 {
        assert_eq!(prefix[t][n as usize] as u64, counts[t]);
    }
    let sbar = scan_members(n);
    assert_eq!(counts[ThetaTriple::NON_SUM.index()], sbar.count(n));
}

#[test]
fn window_count_cross_checks_scan() {
    let scan = scan_members(1 << 10);
    let (count, _) = lemma_window_count(1, 4, 3);
    assert_eq!(count, scan.count_between(16, 24));
    let (single, dev) = lemma_window_count(5, 6, 0);
    assert!(single <= 1);
    assert!(dev <= 7.0 / 8.0);
}
