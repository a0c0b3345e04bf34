use std::collections::BTreeSet;

use mgood_core::nice::{extension_findings, extension_tables, pattern_report, sequence, ternary_string, Sequence};
use mgood_core::{construct_3good, enumerate_nice, nice_certificates, validate};

/// (k, n', sum, ternary) as printed in the published table.
const TABLE_1: [(u64, u64, u64, &str); 41] = [
    (0, 1, 3, "10"),
    (1, 4, 9, "100"),
    (2, 1, 36, "1100"),
    (4, 13, 27, "1000"),
    (5, 10, 108, "11000"),
    (7, 4, 270, "101000"),
    (8, 1, 351, "111000"),
    (12, 3, 738, "1000100"),
    (12, 1, 741, "1000110"),
    (13, 40, 81, "10000"),
    (14, 37, 324, "110000"),
    (16, 31, 810, "1010000"),
    (17, 28, 1053, "1110000"),
    (22, 13, 2268, "10010000"),
    (23, 10, 2511, "10110000"),
    (25, 4, 2997, "11010000"),
    (26, 1, 3240, "11110000"),
    (40, 121, 243, "100000"),
    (41, 118, 972, "1100000"),
    (43, 112, 2430, "10100000"),
    (44, 109, 3159, "11100000"),
    (49, 94, 6804, "100100000"),
    (50, 91, 7533, "101100000"),
    (52, 85, 8991, "110100000"),
    (53, 82, 9720, "111100000"),
    (67, 40, 19926, "1000100000"),
    (68, 37, 20655, "1001100000"),
    (70, 31, 22113, "1010100000"),
    (71, 28, 22842, "1011100000"),
    (76, 13, 26487, "1100100000"),
    (77, 10, 27216, "1101100000"),
    (79, 4, 28674, "1110100000"),
    (80, 1, 29403, "1111100000"),
    (114, 7, 59319, "10000101000"),
    (114, 21, 59130, "10000010000"),
    (115, 24, 60102, "10001110000"),
    (117, 30, 62046, "10011010000"),
    (120, 3, 65700, "10100010100"),
    (120, 1, 65703, "10100010110"),
    (121, 364, 729, "1000000"),
    (122, 361, 2916, "11000000"),
];

#[test]
fn table_one_is_reproduced_exactly() {
    let want: BTreeSet<(u64, u64, u64, String)> =
        TABLE_1.iter().map(|&(k, np, s, t)| (k, np, s, t.to_string())).collect();
    let rows = enumerate_nice(123);
    let got: BTreeSet<(u64, u64, u64, String)> =
        rows.iter().flat_map(|(_, c)| c.iter().map(|c| (c.k, c.n_prime, c.interval_sum, c.ternary.clone()))).collect();
    assert_eq!(got, want);
    assert_eq!(rows.len(), 38);
    let doubles: Vec<u64> = rows.iter().filter(|(_, c)| c.len() == 2).map(|(k, _)| *k).collect();
    assert_eq!(doubles, vec![12, 114, 120]);
}

/// Direct recomputation of the defining conditions, sharing no code with
/// the library.
fn naive_nice(k: u64) -> Vec<u64> {
    let n = 3 * k + 2;
    (1..n)
        .filter(|&np| {
            let len = n - np + 1;
            let sum: u64 = (np..=n).sum();
            let mut digits = Vec::new();
            let mut x = sum;
            while x > 0 {
                digits.push(x % 3);
                x /= 3;
            }
            let lowest = digits.iter().position(|&d| d != 0).unwrap();
            len.is_multiple_of(2) && !digits.contains(&2) && 3u64.pow(lowest as u32) > 2 * np
        })
        .collect()
}

#[test]
fn certificates_match_direct_scan() {
    for k in 0..400 {
        let got: Vec<u64> = nice_certificates(k).iter().map(|c| c.n_prime).collect();
        assert_eq!(got, naive_nice(k), "k = {k}");
        assert!(nice_certificates(k).iter().all(|c| c.is_sound()));
    }
    let ks: Vec<u64> = enumerate_nice(211).into_iter().map(|(k, _)| k).collect();
    assert!(ks.contains(&199) && ks.contains(&210));
    assert!(nice_certificates(3).is_empty());
}

#[test]
fn sequences_match() {
    assert_eq!(sequence(Sequence::D, 6), vec![1, 3, 6, 15, 42, 123]);
    assert_eq!(sequence(Sequence::E, 5), vec![1, 2, 5, 14, 41]);
    assert_eq!(sequence(Sequence::F, 5), vec![-1, -4, -13, -40, -121]);
}

#[test]
fn pattern_report_on_the_table() {
    let r = pattern_report(123);
    assert_eq!(r.outside, vec![0, 12, 114, 115, 117, 120, 121, 122]);
    assert_eq!(r.double_certificates, vec![12, 114, 120]);
    assert_eq!(r.gaps, vec![3, 3, 6, 3, 6, 3, 15, 3, 6, 3, 15, 3, 6, 3]);
    assert_eq!(r.gap_levels, vec![3, 6, 15]);
    assert_eq!(r.length_quotients, vec![0, 1, -1, 1, 2, 1, -4, 1, 2, 1, 5, 1, 2, 1]);
    // the quotients recomputed from the table's interval lengths
    let len = |k: u64| {
        let &(_, np, _, _) = TABLE_1.iter().find(|r| r.0 == k).unwrap();
        (3 * k + 2 - np + 1) as i64
    };
    let starts: Vec<i64> = r.pattern_pairs.iter().map(|&(a, _)| len(a)).collect();
    let q: Vec<i64> = starts.windows(2).map(|w| (w[1] - w[0]) / 18).collect();
    assert!(starts.windows(2).all(|w| (w[1] - w[0]) % 18 == 0));
    assert_eq!(q, r.length_quotients);
    assert!(r.findings.iter().all(|f| f.holds), "{:?}", r.findings);
}

#[test]
fn extension_rows() {
    // (a, b, k, sum, ternary), with the a = 4 rows indexed by the b that
    // satisfies k = a + (3^b - 1) / 2
    let shown: [(u64, u32, u64, u64, &str); 32] = [
        (0, 0, 0, 3, "10"),
        (0, 1, 1, 9, "100"),
        (0, 2, 4, 27, "1000"),
        (0, 3, 13, 81, "10000"),
        (0, 4, 40, 243, "100000"),
        (0, 5, 121, 729, "1000000"),
        (0, 6, 364, 2187, "10000000"),
        (1, 1, 2, 36, "1100"),
        (1, 2, 5, 108, "11000"),
        (1, 3, 14, 324, "110000"),
        (1, 4, 41, 972, "1100000"),
        (1, 5, 122, 2916, "11000000"),
        (1, 6, 365, 8748, "110000000"),
        (2, 2, 6, 189, "21000"),
        (2, 3, 15, 567, "210000"),
        (2, 4, 42, 1701, "2100000"),
        (2, 5, 123, 5103, "21000000"),
        (2, 6, 366, 15309, "210000000"),
        (3, 2, 7, 270, "101000"),
        (3, 3, 16, 810, "1010000"),
        (3, 4, 43, 2430, "10100000"),
        (3, 5, 124, 7290, "101000000"),
        (3, 6, 367, 21870, "1010000000"),
        (4, 2, 8, 351, "111000"),
        (4, 3, 17, 1053, "1110000"),
        (4, 4, 44, 3159, "11100000"),
        (4, 5, 125, 9477, "111000000"),
        (4, 6, 368, 28431, "1110000000"),
        (5, 3, 18, 1296, "1210000"),
        (5, 4, 45, 3888, "12100000"),
        (5, 5, 126, 11664, "121000000"),
        (5, 6, 369, 34992, "1210000000"),
    ];
    let rows = extension_tables(6, 6);
    for &(a, b, k, sum, ternary) in &shown {
        let r = rows.iter().find(|r| r.a == a && r.b == b).unwrap_or_else(|| panic!("a = {a}, b = {b}"));
        assert_eq!((r.k, r.sum, r.ternary.as_str(), r.min_t), (k, sum, ternary, b + 2));
        assert_eq!(r.window, 6 * a + 2);
        assert_eq!(ternary_string(r.sum), r.ternary);
    }
    let a6: Vec<u64> = rows.iter().filter(|r| r.a == 6).map(|r| r.sum).collect();
    assert_eq!(a6, vec![1539, 4617, 13851, 41553]);
    assert!(extension_findings(&rows).iter().all(|f| f.holds));
}

#[test]
fn nice_k_bridge() {
    for (k, _) in enumerate_nice(41) {
        for t in 1..=5u32 {
            let n = 3u64.pow(t) + 3 * k + 2;
            let c = construct_3good(n).unwrap().unwrap_or_else(|| panic!("t = {t}, k = {k}"));
            assert!(validate(c.partition.instance(), c.partition.parts()).is_ok());
            assert_eq!(c.trace.replay().unwrap(), c.partition);
        }
    }
}
