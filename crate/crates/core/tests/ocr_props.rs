//! Feature-extraction symmetries and the calibrated preset against the
//! bundled glyph assets.

use std::path::PathBuf;

use proptest::prelude::*;

use qsvm_core::ocr::{
    binarize, calibrate_diagonal, featurize, load_image, ratios, ConversionMap,
    FeatureVector, InkMask,
};

fn asset(name: &str) -> Vec<u8> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../assets")
        .join(name);
    std::fs::read(&path).unwrap_or_else(|e| panic!("missing asset {}: {e}", path.display()))
}

fn mask_counts(mask: &InkMask) -> (usize, usize, usize, usize) {
    let w = mask.width();
    let h = mask.height();
    let mut counts = (0, 0, 0, 0);
    for r in 0..h {
        for c in 0..w {
            if !mask.is_ink(r, c) {
                continue;
            }
            if c < w / 2 {
                counts.0 += 1;
            } else if c >= w - w / 2 {
                counts.1 += 1;
            }
            if r < h / 2 {
                counts.2 += 1;
            } else if r >= h - h / 2 {
                counts.3 += 1;
            }
        }
    }
    counts
}

fn upscale(mask: &InkMask, k: usize) -> InkMask {
    let w = mask.width();
    let h = mask.height();
    let mut bits = Vec::with_capacity(w * h * k * k);
    for r in 0..h * k {
        for c in 0..w * k {
            bits.push(mask.is_ink(r / k, c / k));
        }
    }
    InkMask::new(w * k, h * k, bits).unwrap()
}

fn mirror_lr(mask: &InkMask) -> InkMask {
    let w = mask.width();
    let h = mask.height();
    let mut bits = Vec::with_capacity(w * h);
    for r in 0..h {
        for c in 0..w {
            bits.push(mask.is_ink(r, w - 1 - c));
        }
    }
    InkMask::new(w, h, bits).unwrap()
}

fn mirror_tb(mask: &InkMask) -> InkMask {
    let w = mask.width();
    let h = mask.height();
    let mut bits = Vec::with_capacity(w * h);
    for r in 0..h {
        for c in 0..w {
            bits.push(mask.is_ink(h - 1 - r, c));
        }
    }
    InkMask::new(w, h, bits).unwrap()
}

fn arb_mask() -> impl Strategy<Value = InkMask> {
    // Even dimensions: the middle-line exclusion makes integer upscaling of
    // odd sizes change which pixels count, so the exact scale invariance is
    // an even-dimension property.
    (1usize..=4, 1usize..=4).prop_flat_map(|(hw, hh)| {
        let w = hw * 2;
        let h = hh * 2;
        proptest::collection::vec(any::<bool>(), w * h)
            .prop_filter_map("every half needs ink", move |bits| {
                let mask = InkMask::new(w, h, bits).ok()?;
                let (l, r, u, d) = mask_counts(&mask);
                (l > 0 && r > 0 && u > 0 && d > 0).then_some(mask)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn ratios_are_invariant_under_integer_upscaling(mask in arb_mask(), k in 1usize..=3) {
        let base: FeatureVector<f64> = ratios(&mask).unwrap();
        let scaled: FeatureVector<f64> = ratios(&upscale(&mask, k)).unwrap();
        // Counts scale by k^2 on both sides of each division, so the rounded
        // quotients are bit-identical.
        prop_assert_eq!(base.v, scaled.v);
        prop_assert_eq!(base.h, scaled.h);
    }

    #[test]
    fn left_right_mirror_inverts_v_and_keeps_h(mask in arb_mask()) {
        let (l, r, _, _) = mask_counts(&mask);
        let base: FeatureVector<f64> = ratios(&mask).unwrap();
        let mirrored: FeatureVector<f64> = ratios(&mirror_lr(&mask)).unwrap();
        prop_assert_eq!(mirrored.v, r as f64 / l as f64);
        prop_assert_eq!(mirrored.h, base.h);
    }

    #[test]
    fn top_bottom_mirror_inverts_h_and_keeps_v(mask in arb_mask()) {
        let (_, _, u, d) = mask_counts(&mask);
        let base: FeatureVector<f64> = ratios(&mask).unwrap();
        let mirrored: FeatureVector<f64> = ratios(&mirror_tb(&mask)).unwrap();
        prop_assert_eq!(mirrored.h, d as f64 / u as f64);
        prop_assert_eq!(mirrored.v, base.v);
    }

    #[test]
    fn normalized_conversion_returns_unit_vectors(
        v in 0.05f64..20.0, h in 0.05f64..20.0,
        a00 in -2.0f64..2.0, a11 in -2.0f64..2.0,
        c0 in -1.0f64..1.0, c1 in -1.0f64..1.0,
    ) {
        prop_assume!(a00.abs() > 1e-3 && a11.abs() > 1e-3);
        let map = ConversionMap::new([[a00, 0.0], [0.0, a11]], [c0, c1], true).unwrap();
        let out = map.apply(FeatureVector::new(v, h));
        prop_assume!(out.v.is_finite() && out.h.is_finite());
        prop_assert!((out.norm() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn bundled_standard_glyphs_reproduce_reference_features() {
    let six = load_image(&asset("standard_6.pgm")).unwrap();
    let nine = load_image(&asset("standard_9.pgm")).unwrap();
    let map = ConversionMap::<f64>::paper();
    let f6 = featurize(&six, &map).unwrap();
    let f9 = featurize(&nine, &map).unwrap();
    assert!((f6.v - 0.9872).abs() < 1e-4, "six v = {}", f6.v);
    assert!((f6.h - 0.1595).abs() < 1e-4, "six h = {}", f6.h);
    assert!((f9.v - 0.3544).abs() < 1e-4, "nine v = {}", f9.v);
    assert!((f9.h - 0.9351).abs() < 1e-4, "nine h = {}", f9.h);
}

#[test]
fn recalibrating_from_assets_reproduces_the_paper_preset() {
    let six = load_image(&asset("standard_6.pgm")).unwrap();
    let nine = load_image(&asset("standard_9.pgm")).unwrap();
    let raw6: FeatureVector<f64> = ratios(&binarize(&six, 0.5).unwrap()).unwrap();
    let raw9: FeatureVector<f64> = ratios(&binarize(&nine, 0.5).unwrap()).unwrap();
    let fitted =
        calibrate_diagonal(raw6, [0.9872, 0.1595], raw9, [0.3544, 0.9351]).unwrap();
    let preset = ConversionMap::<f64>::paper();
    for i in 0..2 {
        for j in 0..2 {
            assert!((fitted.matrix()[i][j] - preset.matrix()[i][j]).abs() < 1e-12);
        }
        assert!((fitted.offset()[i] - preset.offset()[i]).abs() < 1e-12);
    }
}

#[test]
fn standard_glyphs_are_exact_rotations_of_each_other() {
    // The bundled nine is the 180-degree rotation of the six, so its raw
    // ratios are the reciprocals.
    let six = load_image(&asset("standard_6.pgm")).unwrap();
    let nine = load_image(&asset("standard_9.pgm")).unwrap();
    let m6 = binarize(&six, 0.5).unwrap();
    let m9 = binarize(&nine, 0.5).unwrap();
    let r6: FeatureVector<f64> = ratios(&m6).unwrap();
    let r9: FeatureVector<f64> = ratios(&m9).unwrap();
    assert!((r6.v * r9.v - 1.0).abs() < 1e-12);
    assert!((r6.h * r9.h - 1.0).abs() < 1e-12);
}

#[test]
fn all_bundled_glyphs_have_extractable_features() {
    let names = [
        "standard_6.pgm",
        "standard_9.pgm",
        "handwritten_6_a.pgm",
        "handwritten_6_b.pgm",
        "handwritten_6_c.pgm",
        "handwritten_6_d.pgm",
        "handwritten_9_a.pgm",
        "handwritten_9_b.pgm",
        "handwritten_9_c.pgm",
        "handwritten_9_d.pgm",
    ];
    let map = ConversionMap::<f64>::paper();
    for name in names {
        let img = load_image(&asset(name)).unwrap();
        let f = featurize(&img, &map).unwrap();
        assert!(f.v.is_finite() && f.v > 0.0, "{name}: v = {}", f.v);
        assert!(f.h.is_finite() && f.h > 0.0, "{name}: h = {}", f.h);
    }
}
