//! Group law and scalar multiplication against affine oracles written
//! here with plain modular arithmetic.

use std::sync::Arc;

use ibekit::curve::{naf, Curve, CurveProfile, Point};
use ibekit::ledger::{measure, Op};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

/// Affine arithmetic over `F_p` with no shared code.
struct Oracle {
    p: BigUint,
    a4: BigUint,
}

type Aff = Option<(BigUint, BigUint)>;

impl Oracle {
    fn of(curve: &Curve) -> Oracle {
        Oracle {
            p: curve.fp().modulus().clone(),
            a4: curve.a4().clone(),
        }
    }

    fn inv(&self, a: &BigUint) -> BigUint {
        a.modpow(&(&self.p - 2u8), &self.p)
    }

    fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a + &self.p - b) % &self.p
    }

    fn add(&self, a: &Aff, b: &Aff) -> Aff {
        let (Some((x1, y1)), Some((x2, y2))) = (a, b) else {
            return a.clone().or(b.clone());
        };
        let p = &self.p;
        let lambda = if x1 == x2 {
            if (y1 + y2) % p == BigUint::zero() {
                return None;
            }
            (BigUint::from(3u8) * x1 * x1 + &self.a4) % p * self.inv(&(y1 * 2u8 % p)) % p
        } else {
            self.sub(y2, y1) * self.inv(&self.sub(x2, x1)) % p
        };
        let x3 = self.sub(&self.sub(&(&lambda * &lambda % p), x1), x2);
        let y3 = self.sub(&(&lambda * self.sub(x1, &x3) % p), y1);
        Some((x3, y3))
    }

    /// Plain left-to-right double-and-add.
    fn mul(&self, d: &BigUint, a: &Aff) -> Aff {
        let mut acc: Aff = None;
        for i in (0..d.bits()).rev() {
            acc = self.add(&acc, &acc);
            if d.bit(i) {
                acc = self.add(&acc, a);
            }
        }
        acc
    }
}

fn a6_one_profile() -> Arc<Curve> {
    let text = "name = tiny-a6-1\np = 11\na4 = 0\na6 = 1\nr = 3\ncof = 4\nk = 2\next = 1 0\ngx = 0\ngy = 1\n";
    Curve::new(CurveProfile::parse(text).unwrap()).unwrap()
}

fn check_group_law(curve: &Arc<Curve>) {
    let o = Oracle::of(curve);
    let pts = curve.enumerate();
    assert_eq!(pts.len(), 12);
    for a in &pts {
        assert!(a.is_on_curve());
        assert!(a.add(&a.neg()).is_infinity());
        assert_eq!(a.double(), a.add(a));
        for b in &pts {
            let sum = a.add(b);
            assert_eq!(sum.to_affine(), o.add(&a.to_affine(), &b.to_affine()), "{a:?} + {b:?}");
            assert_eq!(sum, b.add(a));
            for c in &pts {
                assert_eq!(sum.add(c), a.add(&b.add(c)));
            }
        }
        for k in 0u32..30 {
            let k = BigUint::from(k);
            assert_eq!(a.mul(&k).to_affine(), o.mul(&k, &a.to_affine()));
        }
        // The group has order 12.
        assert!(a.mul(&BigUint::from(12u8)).is_infinity());
    }
}

#[test]
fn tiny_group_law_is_exhaustively_correct() {
    check_group_law(&Curve::tiny());
    check_group_law(&a6_one_profile());
}

#[test]
fn tiny_subgroup_has_order_three() {
    let curve = Curve::tiny();
    let members: Vec<Point> = curve.enumerate().into_iter().filter(Point::in_subgroup).collect();
    assert_eq!(members.len(), 3);
    assert!(members.contains(&curve.generator()));
}

#[test]
fn bench_scalar_mul_matches_double_and_add() {
    let curve = Curve::bench();
    let o = Oracle::of(&curve);
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    let g = curve.generator();
    for _ in 0..1000 {
        let base = g.mul(&curve.random_scalar(&mut rng));
        let d = curve.fr().random(&mut rng);
        assert_eq!(base.mul(&d).to_affine(), o.mul(&d, &base.to_affine()));
    }
}

#[test]
fn naf_addition_density_is_a_third() {
    let curve = Curve::bench();
    let mut rng = ChaCha20Rng::seed_from_u64(12);
    let g = curve.generator();
    let n = 160u64;
    let trials = 1000;
    let mut adds = 0u64;
    for _ in 0..trials {
        let mut bytes = [0u8; 20];
        rng.fill_bytes(&mut bytes);
        let mut d = BigUint::from_bytes_be(&bytes);
        d.set_bit(n - 1, true);
        let (_, l) = measure(|| g.mul(&d));
        assert_eq!(l.top.get(Op::ScalarMul), 1);
        adds += l.all.get(Op::EcAdd);
    }
    let mean = adds as f64 / trials as f64;
    let target = (n - 1) as f64 / 3.0;
    assert!(
        (mean - target).abs() / target < 0.05,
        "mean ECADD per scalar {mean:.2} vs {target:.2}"
    );
}

#[test]
fn point_operation_field_costs() {
    let curve = Curve::bench();
    let g = curve.generator();
    let h = g.double().add(&g);
    // Doubling: 4M + 6S. The a4 product is spent even though a4 = 0.
    let (_, l) = measure(|| h.double());
    assert_eq!((l.all.get(Op::Mul), l.all.get(Op::Sq)), (4, 6));
    // General addition: 12M + 4S, and 8M + 3S with an affine operand.
    let h2 = h.double();
    let (_, l) = measure(|| h.add(&h2));
    assert_eq!((l.all.get(Op::Mul), l.all.get(Op::Sq)), (12, 4));
    let (_, l) = measure(|| h.add(&g));
    assert_eq!((l.all.get(Op::Mul), l.all.get(Op::Sq)), (8, 3));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn naf_reconstructs_and_has_no_adjacent_digits(bytes in proptest::collection::vec(any::<u8>(), 0..40)) {
        let d = BigUint::from_bytes_be(&bytes);
        let digits = naf(&d);
        let mut v = BigInt::zero();
        for &x in digits.iter().rev() {
            v = v * 2 + BigInt::from(x);
        }
        prop_assert_eq!(v, BigInt::from(d.clone()));
        prop_assert!(digits.windows(2).all(|w| w[0] == 0 || w[1] == 0));
        prop_assert!(digits.last().is_none_or(|&x| x == 1));
    }

    #[test]
    fn msm_matches_separate_products(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let curve = Curve::bench();
        let g = curve.generator();
        let h = g.mul(&BigUint::from(c | 1));
        let (a, b) = (BigUint::from(a), BigUint::from(b));
        let (got, l) = measure(|| Point::msm(&curve, &[(&a, &g), (&b, &h)]).unwrap());
        prop_assert_eq!(got, g.mul(&a).add(&h.mul(&b)));
        prop_assert_eq!(l.top.get(Op::ScalarMul), 1);
    }

    #[test]
    fn scalar_mul_is_linear(a in any::<u64>(), b in any::<u64>()) {
        let curve = Curve::bench();
        let g = curve.generator();
        let (a, b) = (BigUint::from(a), BigUint::from(b));
        prop_assert_eq!(g.mul(&(&a + &b)), g.mul(&a).add(&g.mul(&b)));
        prop_assert!(g.mul(&(&a * curve.r())).is_infinity() || a.is_zero() || !g.mul(curve.r()).is_infinity());
        prop_assert_eq!(g.mul(&BigUint::one()), g.clone());
    }
}
