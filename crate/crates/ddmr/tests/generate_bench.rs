use ddmr::bench::{log_log_slope, run_bench, to_csv, CSV_HEADER};
use ddmr::generate::{generate_theory, Family};
use ddmr::{render_theory, validate, Variant};

#[test]
fn families_parse_and_print() {
    for f in Family::ALL {
        assert_eq!(f.as_str().parse::<Family>().unwrap(), f);
        assert_eq!(f.to_string(), f.as_str());
    }
    assert_eq!("meta-chain".parse::<Family>().unwrap(), Family::MetaChain);
    assert!("ladder".parse::<Family>().is_err());
}

#[test]
fn generation_is_deterministic() {
    for f in Family::ALL {
        let a = render_theory(&generate_theory(f, 1000, 42));
        let b = render_theory(&generate_theory(f, 1000, 42));
        assert_eq!(a, b, "{f}");
    }
    let a = generate_theory(Family::Random, 50, 1);
    let b = generate_theory(Family::Random, 50, 2);
    assert_ne!(a, b);
}

#[test]
fn zero_target_is_empty() {
    assert_eq!(generate_theory(Family::Chain, 0, 7).size(), 0);
}

#[test]
fn sizes_hit_the_target() {
    for f in [Family::Chain, Family::Team, Family::MetaChain] {
        for target in [100, 1000, 10_000] {
            let t = generate_theory(f, target, 3);
            let size = t.size() as f64;
            assert!((size - target as f64).abs() <= 0.1 * target as f64, "{f} {target}: {size}");
            assert!(validate(&t).is_ok(), "{f} {target}");
        }
    }
}

#[test]
fn csv_output() {
    assert_eq!(to_csv(&[]), format!("{CSV_HEADER}\n"));
    let rows = run_bench(&[Family::Chain], &[50], 0, &[Variant::Simple, Variant::Cautious]).unwrap();
    assert_eq!(rows.len(), 2);
    let csv = to_csv(&rows);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("chain,"));
    assert_eq!(lines[1].split(',').count(), 6);
    assert_eq!(rows[0].undetermined, 0);
}

#[test]
fn slope_of_power_laws() {
    let quad: Vec<(f64, f64)> = [10.0, 100.0, 1000.0].iter().map(|&x| (x, 3.0 * x * x)).collect();
    assert!((log_log_slope(&quad).unwrap() - 2.0).abs() < 1e-9);
    assert_eq!(log_log_slope(&[(10.0, 1.0)]), None);
    assert_eq!(log_log_slope(&[(10.0, 1.0), (10.0, 2.0)]), None);
}
