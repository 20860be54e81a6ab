//! Values recomputed by independent means and compared with the library.

use num_integer::Integer;
use singord::bounds::{check_degree_bounds, expected_ord1_reduced, germ_invariants};
use singord::cohomology::{castelnuovo, cohomology};
use singord::colength::{milnor_number, origin, tjurina_number};
use singord::puiseux::{intersection_number, resolve};
use singord::schemes::{build_scheme, simple_points, Position, SampleMode, SchemeKind};
use singord::{ExactScalar, MultiPoly};

fn p(s: &str) -> MultiPoly {
    MultiPoly::parse(s).unwrap()
}

fn binom2(n: i64) -> i64 {
    if n < 0 {
        0
    } else {
        (n + 1) * (n + 2) / 2
    }
}

#[test]
fn brieskorn_pham_invariants() {
    for a in 2..=6i64 {
        for b in a..=7 {
            let f = p(&format!("x^{a} + y^{b}"));
            let mu = ((a - 1) * (b - 1)) as usize;
            let r = a.gcd(&b) as usize;
            let res = resolve(&f, &origin(2)).unwrap();
            assert_eq!(milnor_number(&f).unwrap(), mu, "{f}");
            // quasi-homogeneous germs have tau = mu
            assert_eq!(tjurina_number(&f).unwrap(), mu, "{f}");
            assert_eq!(res.r, r, "{f}");
            assert_eq!(2 * res.delta, mu + r - 1, "{f}");
        }
    }
}

#[test]
fn simple_scheme_degrees() {
    for k in 1..=12usize {
        let f = p(&format!("x^{} + y^2", k + 1));
        let want = (3 * k + 4) / 2;
        let inv = germ_invariants(&f).unwrap();
        assert_eq!((inv.deg_s, inv.deg_a), (want, want), "A{k}");
    }
    for k in 4..=10usize {
        let f = p(&format!("x^2*y + y^{}", k - 1));
        assert_eq!(germ_invariants(&f).unwrap().deg_s, (3 * k).div_ceil(2), "D{k}");
    }
    for (k, f) in [(6, "x^3 + y^4"), (7, "x^3 + x*y^3"), (8, "x^3 + y^5")] {
        assert_eq!(germ_invariants(&p(f)).unwrap().deg_a, k + 3, "E{k}");
    }
}

#[test]
fn crit0_of_the_cusp() {
    let z = build_scheme(Some(&p("y^2 - x^3")), &SchemeKind::Crit0, Position::origin()).unwrap();
    assert_eq!(z.degree(), 5);
    assert!(check_degree_bounds(&p("y^2 - x^3")).unwrap().iter().all(|b| b.passed()));
}

/// `dim` of plane curves of degree `n` with two given points of
/// multiplicity `m`; the line through them splits off while `2m > n`.
fn two_fat_h0(n: i64, m: i64) -> i64 {
    if n < 0 {
        0
    } else if m <= 0 {
        binom2(n)
    } else if 2 * m > n {
        two_fat_h0(n - 1, m - 1)
    } else {
        (binom2(n) - m * (m + 1)).max(0)
    }
}

#[test]
fn two_fat_points_cohomology() {
    for m in 2..=5u32 {
        let fat = build_scheme(None, &SchemeKind::Fat(m), Position::Generic).unwrap();
        let z = fat.union(&fat).unwrap().sample_representative(SampleMode::Iso, 11).unwrap();
        let deg = (m * (m + 1)) as i64;
        assert_eq!(z.degree() as i64, deg);
        for n in 0..=(2 * m + 1) {
            let (h0, h1) = cohomology(&z, n as usize).unwrap();
            let o0 = two_fat_h0(n as i64, m as i64);
            assert_eq!(h0 as i64, o0, "m={m} n={n}");
            assert_eq!(h1 as i64, deg - (binom2(n as i64) - o0), "m={m} n={n}");
        }
    }
}

#[test]
fn collinear_points() {
    for k in 1..=8i64 {
        let pts: Vec<Vec<ExactScalar>> = (0..k).map(|i| vec![ExactScalar::from_i64(i), ExactScalar::zero()]).collect();
        let z = simple_points(&pts).unwrap();
        let prof = castelnuovo(&z).unwrap();
        for (n, &h1) in prof.h1.iter().enumerate() {
            assert_eq!(h1 as i64, (k - n as i64 - 1).max(0), "k={k} n={n}");
        }
        assert_eq!(prof.ord1 as i64, k - 1);
    }
}

#[test]
fn generic_points_expected_order() {
    for n in 1..=30usize {
        let want = (0..).find(|&d| binom2(d) >= n as i64).unwrap() as usize;
        assert_eq!(expected_ord1_reduced(n), want, "n={n}");
    }
}

#[test]
fn intersection_with_smooth_graphs() {
    let cases = [
        ("y^2 - x^3", "y", 3),
        ("y^2 - x^3", "x", 2),
        ("y^2 - x^3", "y - x", 2),
        ("y^2 - x^5", "y - x^2", 4),
        ("x^4 + y^4", "x^3 + y^5", 12),
        ("y^2 - x^3", "y^2 - x^3 + x^4", 8),
        ("(y^2 - x^3)^2 - 4*x^5*y - x^7", "y^2 - x^3", 13),
    ];
    for (f, g, want) in cases {
        assert_eq!(intersection_number(&p(f), &p(g), &origin(2)).unwrap(), want, "{f} . {g}");
    }
}
