use num::{One, Signed, Zero};
use proptest::prelude::*;

use cantor_cert::content::{
    cover_sum_lemma1, lemma1_bound, lemma1_configuration, lemma2_series, projection_lower, region_content_upper,
};
use cantor_cert::enclosure::{Enclosure, Precision};
use cantor_cert::geometry::{
    build_em, build_fm, cantor_interval, complement_by_cross, complement_region, containing_index, crosses,
    total_length, DeltaSequence, Rect, RectRegion,
};
use cantor_cert::rational::{int, inv_pow3, parse_rational, rat, to_f64, to_scientific, Rational, Round};

fn p(bits: u32) -> Precision {
    Precision::bits(bits).unwrap()
}

/// `δ_n = u_n · 3^-(n+1)` with `u_n ∈ (0, 1)`.
fn mid(e: &Enclosure) -> f64 {
    to_f64(&((e.lo() + e.hi()) / int(2)))
}

fn admissible_explicit(levels: usize) -> impl Strategy<Value = DeltaSequence> {
    prop::collection::vec(1i64..=99, levels).prop_map(|us| {
        let values = us.iter().enumerate().map(|(n, &u)| rat(u, 100) * inv_pow3(n as u32 + 1)).collect();
        DeltaSequence::explicit(values).unwrap()
    })
}

fn small_rect() -> impl Strategy<Value = Rect> {
    (0i64..27, 0i64..27, 1i64..10, 1i64..10)
        .prop_map(|(x, y, w, h)| Rect::new(rat(x, 27), rat(x + w, 27), rat(y, 27), rat(y + h, 27)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn complement_is_symmetric(seq in admissible_explicit(3), m in 0u32..=2) {
        let g = complement_region(&seq, m).unwrap();
        prop_assert!(g.transpose().same_point_set(&g));
    }

    #[test]
    fn stages_are_nested(seq in admissible_explicit(4), m in 0u32..=2) {
        let f = build_fm(&seq, m).unwrap();
        let next = build_fm(&seq, m + 1).unwrap();
        prop_assert!(next.is_subset_of(&f));
        let e = build_em(&seq, m).unwrap();
        let e_next = build_em(&seq, m + 1).unwrap();
        prop_assert!(total_length(&e_next) < total_length(&e));
    }

    #[test]
    fn complement_area_and_unit_square(seq in admissible_explicit(3), m in 0u32..=2) {
        let g = complement_region(&seq, m).unwrap();
        let e = build_em(&seq, m).unwrap();
        let gap = Rational::one() - total_length(&e);
        prop_assert_eq!(g.area(), &gap * &gap);
        let f = build_fm(&seq, m).unwrap();
        prop_assert_eq!(f.area() + g.area(), Rational::one());
        prop_assert!(g.rects().iter().all(|r| r.x0() >= &Rational::zero() && r.x1() <= &Rational::one()));
    }

    #[test]
    fn crosses_partition_the_complement(seq in admissible_explicit(3), m in 0u32..=2) {
        let groups = complement_by_cross(&seq, m).unwrap();
        let total: usize = groups.iter().map(|(_, rs)| rs.len()).sum();
        prop_assert_eq!(total, complement_region(&seq, m).unwrap().len());
        for (cross, rects) in &groups {
            prop_assert!(rects.iter().all(|r| cross.contains_rect(r)));
        }
        let expected: usize = (0..=m).map(|n| 1usize << (2 * n)).sum();
        prop_assert_eq!(crosses(&seq, m).unwrap().len(), expected);
    }

    #[test]
    fn containing_index_inverts_cantor_interval(level in 0u32..12, raw in any::<u64>(), num in 1i64..1000) {
        let j = raw % (1u64 << level) + 1;
        let iv = cantor_interval(level, j).unwrap();
        // any interior point
        let x = iv.left() + iv.length() * rat(num, 1001);
        prop_assert_eq!(containing_index(level, &x), Some(j));
    }

    #[test]
    fn covering_scales_triadically(rects in prop::collection::vec(small_rect(), 1..6), s in 1u32..4, k in 1i64..4) {
        let region = RectRegion::new(rects);
        let side = rat(k, 27);
        let lambda = inv_pow3(s);
        let a = region_content_upper(&region.scale(&lambda), &(&side * &lambda)).unwrap();
        let b = region_content_upper(&region, &side).unwrap();
        prop_assert_eq!(a.witnessed_sum().unwrap(), b.witnessed_sum().unwrap() * &lambda);
    }

    #[test]
    fn covering_is_subadditive_and_covers(
        left in prop::collection::vec(small_rect(), 1..4),
        right in prop::collection::vec(small_rect(), 1..4),
        k in 1i64..4,
    ) {
        let side = rat(k, 27);
        let a = RectRegion::new(left);
        let b = RectRegion::new(right);
        let u = a.union(&b);
        let cu = region_content_upper(&u, &side).unwrap();
        let ca = region_content_upper(&a, &side).unwrap();
        let cb = region_content_upper(&b, &side).unwrap();
        prop_assert!(cu.witnessed_sum().unwrap() <= ca.witnessed_sum().unwrap() + cb.witnessed_sum().unwrap());
        prop_assert!(u.is_subset_of(&cu.squares().unwrap()));
        prop_assert!(projection_lower(&u) <= cu.witnessed_sum().unwrap());
    }

    #[test]
    fn lemma1_dominance(num in 1i64..1000, den_exp in 1u32..9) {
        let delta = rat(num, 1000) * inv_pow3(den_exp);
        let prec = p(96);
        for n0 in 0..=den_exp + 2 {
            match lemma1_bound(&delta, n0, prec) {
                Ok(b) => {
                    let c = cover_sum_lemma1(&delta, n0);
                    prop_assert!(&c < b.lo());
                }
                Err(_) => {
                    // rejected exactly when δ >= 3^(2-n0)
                    let limit = if n0 <= 2 { int(3i64.pow(2 - n0)) } else { inv_pow3(n0 - 2) };
                    prop_assert!(delta >= limit);
                }
            }
        }
    }

    #[test]
    fn lemma1_projection_equals_sum_when_disjoint(t in 3u32..7) {
        // with n0 = t - 1 the level-n0 spacing 2·3^-n0 exceeds δ = 3^-t
        let delta = inv_pow3(t);
        let n0 = t - 1;
        let conf = lemma1_configuration(&delta, n0).unwrap();
        let sum = cover_sum_lemma1(&delta, n0);
        prop_assert_eq!(projection_lower(&conf), sum.clone());
        prop_assert_eq!(region_content_upper(&conf, &delta).unwrap().witnessed_sum().unwrap(), sum);
    }

    #[test]
    fn series_is_termwise_monotone(seq in admissible_explicit(4), k in 0usize..4, shrink in 2i64..10) {
        let prec = p(96);
        let DeltaSequence::Explicit { values } = &seq else { unreachable!() };
        let mut smaller = values.clone();
        smaller[k] = &smaller[k] / int(shrink);
        let a = lemma2_series(&seq, prec).unwrap();
        let b = lemma2_series(&DeltaSequence::explicit(smaller).unwrap(), prec).unwrap();
        prop_assert!(b.value().unwrap().hi() <= a.value().unwrap().hi());
    }

    #[test]
    fn exp_ln_contain_float_values(num in 1i64..100_000, den in 1i64..1000) {
        let x = rat(num, den);
        let f = to_f64(&x);
        let prec = p(80);
        let ln = Enclosure::exact(x.clone()).ln(prec).unwrap();
        prop_assert!((mid(&ln) - f.ln()).abs() <= 1e-12 * f.ln().abs().max(1.0));
        let small = rat(num % 200 - 100, den.max(1));
        let e = Enclosure::exact(small.clone()).exp(prec).unwrap();
        let fe = to_f64(&small).exp();
        prop_assert!((mid(&e) - fe).abs() <= 1e-12 * fe.max(1.0));
        let back = e.ln(prec).unwrap();
        prop_assert!(back.contains(&small));
    }

    #[test]
    fn enclosure_arithmetic_contains_exact(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
        let x = rat(a, b);
        let y = rat(c, d);
        let prec = p(24);
        let ex = Enclosure::exact(x.clone());
        let ey = Enclosure::exact(y.clone());
        prop_assert!(ex.add(&ey, prec).contains(&(&x + &y)));
        prop_assert!(ex.sub(&ey, prec).contains(&(&x - &y)));
        prop_assert!(ex.mul(&ey, prec).contains(&(&x * &y)));
        if !y.is_zero() {
            prop_assert!(ex.div(&ey, prec).unwrap().contains(&(&x / &y)));
        }
    }

    #[test]
    fn scientific_rendering_is_directed(a in -100_000i64..100_000, b in 1i64..100_000, sig in 3usize..20) {
        let x = rat(a, b);
        let down = parse_rational(&to_scientific(&x, sig, Round::Down)).unwrap();
        let up = parse_rational(&to_scientific(&x, sig, Round::Up)).unwrap();
        prop_assert!(down <= x && x <= up);
        if !x.is_zero() {
            prop_assert!((&up - &down).abs() <= x.abs() * rat(1, 10i64.pow(sig as u32 - 2)));
        }
    }

    #[test]
    fn rational_text_round_trip(a in any::<i64>(), b in 1i64..i64::MAX) {
        let x = rat(a, b);
        prop_assert_eq!(parse_rational(&x.to_string()).unwrap(), x);
    }
}
