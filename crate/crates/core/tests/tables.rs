use practium::practical::{is_practical_oracle, residue_obstruction};
use practium::search::{
    count_practical, goldbach_practical, odd_prime_plus_practical, s_table, sun_chain_search,
    twin_practical,
};

/// `{1 <= c <= 100 : c mod 12 not in residues, c not in exceptions}`
fn displayed(residues: &[u64], exceptions: &[u64]) -> Vec<u64> {
    (1..=100)
        .filter(|c| !residues.contains(&(c % 12)) && !exceptions.contains(c))
        .collect()
}

pub const TABLES: [(u64, [u64; 2], &[u64]); 11] = [
    (0, [1, 10], &[43, 67, 93]),
    (2, [2, 11], &[44, 68, 94]),
    (4, [2, 5], &[47, 71, 97]),
    (6, [7, 10], &[52, 76]),
    (8, [2, 5], &[59, 83]),
    (10, [2, 11], &[68, 92]),
    (12, [1, 10], &[79]),
    (14, [2, 11], &[92]),
    (16, [2, 5], &[]),
    (18, [7, 10], &[]),
    (20, [2, 5], &[]),
];

#[test]
fn all_eleven_tables() {
    for (b, residues, exceptions) in TABLES {
        let t = s_table(b, 100, 20_000).unwrap();
        assert_eq!(t.members, displayed(&residues, exceptions), "S_{b}");
        let obstructed: Vec<u64> = (1..=100).filter(|c| residues.contains(&(c % 12))).collect();
        assert_eq!(t.obstructed, obstructed, "S_{b} obstruction classes");
        for (&c, &n) in &t.witnesses {
            assert!((2..=20_000).contains(&n));
            let v = n * n + b * n + c;
            if v <= 10_000_000 {
                assert!(is_practical_oracle(v, 10_000_000).unwrap().practical);
            }
        }
        for c in 1..=100 {
            if residue_obstruction(b, c) {
                assert!(!t.members.contains(&c));
            }
        }
    }
}

#[test]
fn members_grow_with_n_max() {
    for b in [0u64, 6, 12] {
        let small = s_table(b, 100, 1000).unwrap();
        let large = s_table(b, 100, 20_000).unwrap();
        assert!(small.members.iter().all(|c| large.members.contains(c)));
        for (c, n) in &small.witnesses {
            assert_eq!(large.witnesses.get(c), Some(n));
        }
    }
}

#[test]
fn desk_scale_scans() {
    assert!(goldbach_practical(100_000).unwrap().is_empty());
    assert!(odd_prime_plus_practical(100_000).unwrap().is_empty());

    let twins = twin_practical(100_000).unwrap();
    assert_eq!(twins[0], 4);
    for &m in &twins {
        assert_eq!(m % 2, 0);
        for v in [m - 2, m, m + 2] {
            assert!(is_practical_oracle(v, 10_000_000).unwrap().practical, "{v}");
        }
    }

    let sun = sun_chain_search(10_000).unwrap();
    assert_eq!(&sun[..2], &[2, 4]);
    for &q in &sun {
        assert_eq!(q % 2, 0);
        for v in [q, q + 2, q * q + 2] {
            if v <= 10_000_000 {
                assert!(is_practical_oracle(v, 10_000_000).unwrap().practical, "{v}");
            }
        }
    }
}

#[test]
fn density_ratios() {
    let points: Vec<_> = [100_000u64, 1_000_000, 10_000_000]
        .iter()
        .map(|&x| count_practical(x).unwrap())
        .collect();
    let counts: Vec<u64> = points.iter().map(|p| p.count).collect();
    assert_eq!(counts, vec![11_751, 97_385, 829_157]);
    let max = points.iter().map(|p| p.ratio).fold(f64::MIN, f64::max);
    let min = points.iter().map(|p| p.ratio).fold(f64::MAX, f64::min);
    assert!(max / min <= 1.2);
    assert_eq!(count_practical(1000).unwrap().count, 198);
}
