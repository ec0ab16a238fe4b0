mod common;

use proptest::prelude::*;

use qapsnark::algebra::{
    interpolate, is_prime, vanishing_poly, Field, Polynomial, DEFAULT_MODULUS,
};

const P: u128 = DEFAULT_MODULUS as u128;

fn mulmod(a: u128, b: u128) -> u128 {
    a * b % P
}

fn powmod(mut b: u128, mut e: u128) -> u128 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b);
        }
        b = mulmod(b, b);
        e >>= 1;
    }
    acc
}

fn invmod(a: u128) -> u128 {
    powmod(a, P - 2)
}

/// Solves the Vandermonde system by Gaussian elimination mod P.
fn vandermonde_solve(xs: &[u128], ys: &[u128]) -> Vec<u128> {
    let n = xs.len();
    let mut rows: Vec<Vec<u128>> = (0..n)
        .map(|i| {
            let mut row: Vec<u128> = (0..n).map(|j| powmod(xs[i], j as u128)).collect();
            row.push(ys[i]);
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| rows[r][col] != 0).unwrap();
        rows.swap(col, pivot);
        let inv = invmod(rows[col][col]);
        for v in rows[col].iter_mut() {
            *v = mulmod(*v, inv);
        }
        for r in 0..n {
            if r != col && rows[r][col] != 0 {
                let k = rows[r][col];
                let pivot = rows[col].clone();
                for (x, &y) in rows[r].iter_mut().zip(&pivot) {
                    *x = (*x + P - mulmod(k, y)) % P;
                }
            }
        }
    }
    rows.iter().map(|r| r[n]).collect()
}

fn field() -> Field {
    Field::default()
}

fn poly_of(cs: &[u64]) -> Polynomial {
    let f = field();
    Polynomial::new(f, cs.iter().map(|&c| f.elem(c)).collect())
}

fn coeffs() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0..DEFAULT_MODULUS, 0..8)
}

#[test]
fn default_modulus_is_the_mersenne_prime() {
    assert_eq!(DEFAULT_MODULUS, (1 << 61) - 1);
    assert!(is_prime(DEFAULT_MODULUS));
    assert_eq!(field().bits(), 61);
    assert!(Field::new(15).is_err());
}

proptest! {
    #[test]
    fn field_ops_match_u128_reference(a in 0..DEFAULT_MODULUS, b in 0..DEFAULT_MODULUS) {
        let f = field();
        let (x, y) = (f.elem(a), f.elem(b));
        let (a, b) = (a as u128, b as u128);
        prop_assert_eq!((x + y).value() as u128, (a + b) % P);
        prop_assert_eq!((x - y).value() as u128, (a + P - b) % P);
        prop_assert_eq!((x * y).value() as u128, mulmod(a, b));
        prop_assert_eq!((-x).value() as u128, (P - a) % P);
        if b != 0 {
            prop_assert_eq!(y.inverse().unwrap().value() as u128, invmod(b));
        } else {
            prop_assert!(y.inverse().is_err());
        }
    }

    #[test]
    fn signed_and_rational_constructors(n in -1_000_000i64..1_000_000, d in 1i64..1000) {
        let f = field();
        let expect = (n as i128).rem_euclid(P as i128) as u128;
        prop_assert_eq!(f.from_i64(n).value() as u128, expect);
        let r = f.rational(n, d).unwrap();
        prop_assert_eq!(r * f.from_i64(d), f.from_i64(n));
    }

    #[test]
    fn interpolation_matches_gaussian_elimination(ys in prop::collection::vec(0..DEFAULT_MODULUS, 1..7), start in 0u64..1000) {
        let f = field();
        let xs: Vec<u64> = (0..ys.len() as u64).map(|i| start + 3 * i).collect();
        let pts: Vec<_> = xs.iter().zip(&ys).map(|(&x, &y)| (f.elem(x), f.elem(y))).collect();
        let p = interpolate(f, &pts).unwrap();
        let expect = vandermonde_solve(
            &xs.iter().map(|&x| x as u128).collect::<Vec<_>>(),
            &ys.iter().map(|&y| y as u128).collect::<Vec<_>>(),
        );
        let got: Vec<u128> = (0..ys.len()).map(|k| p.coeff(k).value() as u128).collect();
        prop_assert_eq!(got, expect);
        prop_assert!(p.degree().is_none_or(|d| d < ys.len()));
    }

    #[test]
    fn divrem_reconstructs_the_dividend(a in coeffs(), b in coeffs()) {
        let (a, b) = (poly_of(&a), poly_of(&b));
        prop_assume!(!b.is_zero());
        let (q, r) = a.divrem(&b).unwrap();
        prop_assert_eq!(&(&q * &b) + &r, a);
        prop_assert!(r.is_zero() || r.degree() < b.degree());
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(a in coeffs(), b in coeffs(), x in 0..DEFAULT_MODULUS) {
        let (a, b) = (poly_of(&a), poly_of(&b));
        let x = field().elem(x);
        prop_assert_eq!((&a + &b).eval(x), a.eval(x) + b.eval(x));
        prop_assert_eq!((&a - &b).eval(x), a.eval(x) - b.eval(x));
        prop_assert_eq!((&a * &b).eval(x), a.eval(x) * b.eval(x));
    }

    #[test]
    fn distinct_polynomials_rarely_agree_at_random_points(a in coeffs(), b in coeffs(), x in 0..DEFAULT_MODULUS) {
        let (a, b) = (poly_of(&a), poly_of(&b));
        prop_assume!(a != b);
        // degree <= 7 over a 61-bit field: a collision has probability < 2^-57
        prop_assert_ne!(a.eval(field().elem(x)), b.eval(field().elem(x)));
    }

    #[test]
    fn vanishing_poly_has_exactly_the_indices_as_roots(d in 1usize..12) {
        let f = field();
        let t = vanishing_poly(f, d);
        prop_assert_eq!(t.degree(), Some(d));
        for i in 0..=d as u64 + 1 {
            prop_assert_eq!(t.eval(f.elem(i)).is_zero(), (1..=d as u64).contains(&i));
        }
    }
}

#[test]
fn zero_polynomial_has_no_degree() {
    let p = Polynomial::from_i64s(field(), &[0, 0, 0]);
    assert!(p.is_zero());
    assert_eq!(p.degree(), None);
    assert!(p
        .divrem(&Polynomial::from_i64s(field(), &[1]))
        .unwrap()
        .0
        .is_zero());
    assert!(Polynomial::from_i64s(field(), &[1]).divrem(&p).is_err());
}
