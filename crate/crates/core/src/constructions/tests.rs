use super::acurve::{self, chi_b1, chi_b2, is_chi_basis, nonpositive_basis};
use super::ribbon::{ribbon_certificate, ribbon_closed_form, ribbon_family, RibbonFamily};
use super::rosary::{
    block_form, rosary1_decide, rosary1_family, rosary1_w_multiple, rosary2_certificate,
    rosary2_family, Rosary1Family, Rosary1Outcome, Rosary2Family,
};
use super::wiman::{
    delta_max, eps_max, kempf_form, kempf_multibasis, lambda_form, nu_form, path_lemma_multiset,
    s_balanced, s_form, type1, type1_form, type2, type2_form, wiman_certificate,
    wiman_negative_basis, Pointing, WimanCertificate,
};
use crate::basiskit::{
    is_monomial_basis, verify_certificate, verify_multibasis, BasisCandidate, MbExpr, RncSpace,
    SectionSpace, WeightForm,
};
use crate::models::{build_model, CurveModel, ModelKind, VarBlock};
use crate::ratlin::{EchelonState, Insert, Rat, SplitMix64};

fn ribbon(g: u32) -> CurveModel {
    build_model(ModelKind::Ribbon, g).unwrap()
}

fn double_a(g: u32) -> CurveModel {
    build_model(ModelKind::DoubleA, g).unwrap()
}

fn wiman(g: u32) -> CurveModel {
    build_model(ModelKind::Wiman, g).unwrap()
}

fn leaf_candidate(e: &MbExpr) -> &BasisCandidate {
    match e {
        MbExpr::Leaf(b) => b,
        _ => panic!("expected a leaf"),
    }
}

// ---------------------------------------------------------------- ribbon

#[test]
fn ribbon_bplus2_g5() {
    let md = ribbon(5);
    let expr = ribbon_family(&md, 2, RibbonFamily::BPlus2).unwrap();
    let cand = leaf_candidate(&expr);
    assert_eq!(cand.len(), 12);
    assert!(is_monomial_basis(&md, 2, cand).is_basis());
    let form = expr.weight_form(&md.mb_ctx());
    assert!(form.eq_on_hyperplane(&ribbon_closed_form(5, 2, RibbonFamily::BPlus2)));
    // 3(rho0 + rho2 + rho4) on the hyperplane
    let mut expect = WeightForm::zero(5);
    for i in [0, 2, 4] {
        expect.coeffs[i] = Rat::int(3);
    }
    assert!(form.eq_on_hyperplane(&expect));
}

#[test]
fn ribbon_bminus_7_3_closed_form() {
    let md = ribbon(7);
    let expr = ribbon_family(&md, 3, RibbonFamily::BMinus).unwrap();
    assert!(is_monomial_basis(&md, 3, leaf_candidate(&expr)).is_basis());
    let mut expect = WeightForm::zero(7);
    expect.coeffs[0] = Rat::int(-5);
    expect.coeffs[3] = Rat::int(-5);
    expect.coeffs[6] = Rat::int(-5);
    assert!(expr.weight_form(&md.mb_ctx()).eq_on_hyperplane(&expect));
}

#[test]
fn ribbon_families_match_closed_forms_and_are_bases() {
    for g in [3u32, 5, 7, 9, 11] {
        let md = ribbon(g);
        let ctx = md.mb_ctx();
        for m in 2..=5u32 {
            let fams: &[RibbonFamily] = if m == 2 {
                &[RibbonFamily::BPlus2, RibbonFamily::BMinus2]
            } else {
                &[RibbonFamily::B1Plus, RibbonFamily::B2Plus, RibbonFamily::BMinus]
            };
            for &fam in fams {
                let expr = ribbon_family(&md, m, fam)
                    .unwrap_or_else(|e| panic!("build {fam:?} g={g} m={m}: {e}"));
                assert!(
                    expr.weight_form(&ctx)
                        .eq_on_hyperplane(&ribbon_closed_form(g, m, fam)),
                    "closed form mismatch for {fam:?} at g={g}, m={m}"
                );
                assert!(
                    is_monomial_basis(&md, m, leaf_candidate(&expr)).is_basis(),
                    "{fam:?} at g={g}, m={m} is not a basis"
                );
            }
        }
    }
}

#[test]
fn ribbon_certificate_g3_m2() {
    let md = ribbon(3);
    let cert = ribbon_certificate(&md, 2).unwrap();
    let coeffs: Vec<_> = cert.entries.iter().map(|e| e.coefficient.clone()).collect();
    assert_eq!(coeffs, vec![Rat::int(2), Rat::int(1)]);
    let verdict = verify_certificate(&cert).unwrap();
    assert!(verdict.ok);
    // the combination is an exact multiple of the all-ones covector
    assert!(cert.combined_form().unwrap().is_constant());
}

#[test]
fn ribbon_certificate_g7_m3_pinned_coefficients() {
    // solving c1*21 + c2*13 = 5, c1*17 + c2*21 = 5 and clearing denominators
    // gives (c0, c1, c2) = (11, 2, 1)
    let md = ribbon(7);
    let cert = ribbon_certificate(&md, 3).unwrap();
    let coeffs: Vec<_> = cert.entries.iter().map(|e| e.coefficient.clone()).collect();
    assert_eq!(coeffs, vec![Rat::int(11), Rat::int(2), Rat::int(1)]);
    assert!(verify_certificate(&cert).unwrap().ok);
}

#[test]
fn ribbon_certificates_verify_in_sweep() {
    for g in [3u32, 5, 7, 9, 13] {
        let md = ribbon(g);
        for m in 2..=6u32 {
            let cert = ribbon_certificate(&md, m)
                .unwrap_or_else(|e| panic!("certificate g={g} m={m}: {e}"));
            assert!(
                verify_certificate(&cert).unwrap().ok,
                "certificate fails at g={g}, m={m}"
            );
        }
    }
}

// ---------------------------------------------------------------- double A

#[test]
fn chi_b1_b2_k2() {
    let md = double_a(4);
    let b1 = chi_b1(&md).unwrap();
    let mut names: Vec<String> = b1
        .monomials()
        .iter()
        .map(|m| md.format_monomial(m))
        .collect();
    names.sort();
    assert_eq!(names, vec!["x1*y1", "x1*y2", "x2*y1"]);
    assert!(is_chi_basis(&md, 2, &b1));
    let w1 = WeightForm::of_candidate(4, &b1);
    let mut lknk = WeightForm::zero(4);
    lknk.coeffs[md.block_var(VarBlock::X, 2)] = Rat::one();
    lknk.coeffs[md.block_var(VarBlock::Y, 2)] = Rat::one();
    assert!(w1.eq_on_hyperplane(&lknk.scale(&-Rat::one())));
    let b2 = chi_b2(&md).unwrap();
    assert!(is_chi_basis(&md, 2, &b2));
    // (k-1)(lambda_k + nu_k) with k = 2
    assert!(WeightForm::of_candidate(4, &b2).eq_on_hyperplane(&lknk));
}

#[test]
fn chi_m2_identity_is_exact() {
    // (k-1) w(B1) + w(B2) is an exact multiple of the all-ones covector
    for k in 2..=8u32 {
        let md = double_a(2 * k);
        let w1 = WeightForm::of_candidate(md.num_vars(), &chi_b1(&md).unwrap());
        let w2 = WeightForm::of_candidate(md.num_vars(), &chi_b2(&md).unwrap());
        let combo = w1.scale(&Rat::int(k as i64 - 1)).add(&w2);
        assert!(combo.is_constant(), "m=2 chi identity fails at k={k}");
    }
}

#[test]
fn chi_aggregates_reduce_to_lknk_multiples() {
    for k in 2..=6u32 {
        let md = double_a(2 * k);
        let ctx = md.mb_ctx();
        let lknk = acurve::lknk_form(&md);
        for m in 3..=5u32 {
            let plus = acurve::chi_plus_aggregate(&md, m).unwrap();
            let c = plus
                .weight_form(&ctx)
                .hyperplane_multiple_of(&lknk)
                .unwrap_or_else(|| panic!("plus aggregate not proportional at k={k} m={m}"));
            assert!(c.is_positive(), "plus multiple {c} not positive (k={k}, m={m})");
            let minus = acurve::chi_minus_aggregate(&md, m).unwrap();
            let c = minus
                .weight_form(&ctx)
                .hyperplane_multiple_of(&lknk)
                .unwrap_or_else(|| panic!("minus aggregate not proportional at k={k} m={m}"));
            assert!(c.is_negative(), "minus multiple {c} not negative (k={k}, m={m})");
            // every member is a chi-basis
            for expr in [&plus, &minus] {
                let members = expr.collect_members(&ctx, 10_000).unwrap();
                for (path, cand) in members {
                    assert!(
                        is_chi_basis(&md, m, &cand),
                        "member {path} is not a chi-basis at k={k}, m={m}"
                    );
                }
            }
        }
    }
}

#[test]
fn nonpositive_basis_examples() {
    let md = double_a(4);
    // lambda = (1,1), nu = (-1,-1): lambda_2 + nu_2 = 0
    let rho = vec![Rat::one(), Rat::one(), -Rat::one(), -Rat::one()];
    let (basis, w) = nonpositive_basis(&md, 2, &rho).unwrap();
    assert!(is_monomial_basis(&md, 2, &basis).is_basis());
    assert!(w <= Rat::zero());
    // rho = (0, 1, 0, -1)
    let rho = vec![Rat::zero(), Rat::one(), Rat::zero(), -Rat::one()];
    let (basis, w) = nonpositive_basis(&md, 2, &rho).unwrap();
    assert!(is_monomial_basis(&md, 2, &basis).is_basis());
    assert!(w <= Rat::zero());
    // random traceless rho across sizes and degrees
    let mut rng = SplitMix64::new(5);
    for k in 2..=4u32 {
        let md = double_a(2 * k);
        for m in 2..=4u32 {
            for _ in 0..3 {
                let mut rho: Vec<Rat> =
                    (0..md.num_vars()).map(|_| rng.small_rat(7)).collect();
                rho = crate::ratlin::center(&rho);
                let (basis, w) = nonpositive_basis(&md, m, &rho).unwrap();
                assert!(w <= Rat::zero(), "positive weight at k={k}, m={m}");
                assert!(
                    is_monomial_basis(&md, m, &basis).is_basis(),
                    "completion not a basis at k={k}, m={m}"
                );
            }
        }
    }
}

// ---------------------------------------------------------------- rosary

#[test]
fn rosary2_means_at_g5_m2() {
    let md = build_model(ModelKind::RosaryBicanonical, 5).unwrap();
    let ctx = md.mb_ctx();
    let w = |fam| {
        rosary2_family(&md, 2, fam)
            .unwrap()
            .weight_form(&ctx)
    };
    let plus_avg = w(Rosary2Family::B1Plus)
        .add(&w(Rosary2Family::B2Plus))
        .scale(&Rat::new(1, 2));
    assert_eq!(plus_avg, block_form(&md, 5, 4, 5));
    let minus_avg = w(Rosary2Family::B1Minus)
        .add(&w(Rosary2Family::B2Minus))
        .scale(&Rat::new(1, 2));
    assert_eq!(minus_avg, block_form(&md, 4, 6, 4));
}

#[test]
fn rosary2_families_are_bases_and_certificates_verify() {
    for g in [3u32, 5, 7] {
        let md = build_model(ModelKind::RosaryBicanonical, g).unwrap();
        let ctx = md.mb_ctx();
        for m in 2..=4u32 {
            let gi = g as i64;
            let mi = m as i64;
            for fam in [
                Rosary2Family::B1Plus,
                Rosary2Family::B2Plus,
                Rosary2Family::B1Minus,
                Rosary2Family::B2Minus,
            ] {
                let expr = rosary2_family(&md, m, fam)
                    .unwrap_or_else(|e| panic!("{fam:?} g={g} m={m}: {e}"));
                assert!(
                    is_monomial_basis(&md, m, leaf_candidate(&expr)).is_basis(),
                    "{fam:?} not a basis at g={g}, m={m}"
                );
                let _ = expr.weight_form(&ctx);
            }
            let cert = rosary2_certificate(&md, m).unwrap();
            assert_eq!(
                cert.entries[0].coefficient,
                Rat::int(mi * mi - mi),
                "plus coefficient at m={m}"
            );
            assert_eq!(
                cert.entries[2].coefficient,
                Rat::int(2 * mi * mi - 5 * mi + 3)
            );
            assert!(
                verify_certificate(&cert).unwrap().ok,
                "rosary2 certificate fails at g={g}, m={m}"
            );
            let _ = gi;
        }
    }
}

#[test]
fn rosary1_forms_follow_w_multiples() {
    for g in [5u32, 7, 9] {
        let md = build_model(ModelKind::RosaryCanonical, g).unwrap();
        let ctx = md.mb_ctx();
        for m in 2..=4u32 {
            for fam in [Rosary1Family::BPlus, Rosary1Family::BMinus] {
                let expr = rosary1_family(&md, m, fam)
                    .unwrap_or_else(|e| panic!("{fam:?} g={g} m={m}: {e}"));
                assert!(
                    is_monomial_basis(&md, m, leaf_candidate(&expr)).is_basis(),
                    "{fam:?} not a basis at g={g}, m={m}"
                );
                let mult = rosary1_w_multiple(g, m, fam);
                let expect = block_form(&md, mult, 0, 0);
                assert!(
                    expr.weight_form(&ctx).eq_on_hyperplane(&expect),
                    "w-multiple mismatch for {fam:?} at g={g}, m={m}"
                );
            }
        }
    }
}

#[test]
fn rosary1_decide_certificate_side() {
    // (7, 3): B+ multiple 1, B- multiple -13, certificate {13 B+, 1 B-}
    assert_eq!(rosary1_w_multiple(7, 3, Rosary1Family::BPlus), 1);
    assert_eq!(rosary1_w_multiple(7, 3, Rosary1Family::BMinus), -13);
    let md = build_model(ModelKind::RosaryCanonical, 7).unwrap();
    match rosary1_decide(&md, 3).unwrap() {
        Rosary1Outcome::Certificate(cert) => {
            let coeffs: Vec<_> = cert.entries.iter().map(|e| e.coefficient.clone()).collect();
            assert_eq!(coeffs, vec![Rat::int(13), Rat::int(1)]);
            assert!(verify_certificate(&cert).unwrap().ok);
        }
        other => panic!("expected certificate, got {other:?}"),
    }
}

#[test]
fn rosary1_decide_destabilizer_side() {
    // (9, 3): min weight at (-1,...,-1, 8) is at least (g-1)(2m-3) = 24
    let md = build_model(ModelKind::RosaryCanonical, 9).unwrap();
    match rosary1_decide(&md, 3).unwrap() {
        Rosary1Outcome::Destabilizer {
            min_weight, bound, ..
        } => {
            assert_eq!(bound, Rat::int(24));
            assert!(min_weight >= bound);
        }
        other => panic!("expected destabilizer, got {other:?}"),
    }
}

// ---------------------------------------------------------------- wiman

#[test]
fn path_multiset_small_values() {
    let c = path_lemma_multiset(1, 1);
    let as_u64: Vec<Vec<u64>> = c
        .iter()
        .map(|row| row.iter().map(|x| x.try_into().unwrap()).collect())
        .collect();
    assert_eq!(as_u64, vec![vec![2, 1], vec![1, 2]]);
    let c = path_lemma_multiset(2, 1);
    let as_u64: Vec<Vec<u64>> = c
        .iter()
        .map(|row| row.iter().map(|x| x.try_into().unwrap()).collect())
        .collect();
    assert_eq!(as_u64, vec![vec![3, 1], vec![2, 2], vec![1, 3]]);
    // single-column case: all ones
    let c = path_lemma_multiset(4, 0);
    for row in &c {
        assert_eq!(row.len(), 1);
        assert_eq!(u64::try_from(&row[0]).unwrap(), 1);
    }
}

fn check_path_balance(n: u32, m: u32) {
    let c = path_lemma_multiset(n, m);
    use num_bigint::BigUint;
    let total: BigUint = c.iter().flatten().sum();
    // degree sums
    let mut by_deg = vec![BigUint::from(0u32); (n + m + 1) as usize];
    for (i, row) in c.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            by_deg[i + j] += v;
        }
    }
    assert!(by_deg.iter().all(|d| d * (n + m + 1) == total), "degree balance");
    for row in &c {
        let s: BigUint = row.iter().sum();
        assert_eq!(s * (n + 1), total.clone(), "x balance");
    }
    for j in 0..=m as usize {
        let s: BigUint = c.iter().map(|row| row[j].clone()).sum();
        assert_eq!(s * (m + 1), total.clone(), "y balance");
    }
}

#[test]
fn path_balance_properties() {
    for n in 0..=8 {
        for m in 0..=8 {
            check_path_balance(n, m);
        }
    }
}

#[test]
fn kempf_base_and_recursion_cases() {
    // H^2_2: three singleton members covering {x0 x2, x1^2}
    let block: Vec<usize> = (0..3).collect();
    let ctx = crate::basiskit::MbCtx {
        num_vars: 3,
        z_degree: vec![0, 1, 2],
    };
    let h22 = kempf_multibasis(3, &block, 2);
    let members = h22.collect_members(&ctx, 100).unwrap();
    assert_eq!(members.len(), 3);
    for (_, cand) in &members {
        assert_eq!(cand.len(), 1);
    }
    assert_eq!(h22.weight_form(&ctx), kempf_form(3, &block, 2));
    // H^2_0 = 2 B- ∪ B+, balanced form (10/3) Λ
    let h20 = kempf_multibasis(3, &block, 0);
    let w = h20.weight_form(&ctx);
    assert_eq!(w.coeffs, vec![Rat::new(10, 3); 3]);
}

#[test]
fn kempf_is_x_balanced_and_members_span() {
    for n in 1..=7u32 {
        let nv = (n + 1) as usize;
        let block: Vec<usize> = (0..nv).collect();
        let ctx = crate::basiskit::MbCtx {
            num_vars: nv,
            z_degree: (0..n + 1).collect(),
        };
        for k in 0..=n {
            let expr = kempf_multibasis(nv, &block, k);
            assert_eq!(
                expr.weight_form(&ctx),
                kempf_form(nv, &block, k),
                "balance fails at n={n}, k={k}"
            );
            // every member spans exactly span{z^i : k <= i <= 2n-k}
            let space = RncSpace {
                num_vars: nv,
                degree: 2,
            };
            let want = (2 * n - 2 * k + 1) as usize;
            let mut rng = SplitMix64::new(1);
            let sample: Vec<(String, BasisCandidate)> = match expr.collect_members(&ctx, 500) {
                Some(members) => members,
                None => (0..40)
                    .map(|i| (format!("sample#{i}"), expr.sample(&ctx, &mut rng)))
                    .collect(),
            };
            for (path, cand) in sample {
                assert_eq!(cand.len(), want, "member size at n={n}, k={k} ({path})");
                let mut st = EchelonState::new((2 * n + 1) as usize);
                for mono in cand.monomials() {
                    let img = space.image_of(mono);
                    let lead = img.iter().position(|x| !x.is_zero()).unwrap();
                    assert!(
                        (k as usize..=(2 * n - k) as usize).contains(&lead),
                        "degree outside window"
                    );
                    assert_eq!(
                        st.try_insert(&img).unwrap(),
                        Insert::Accepted,
                        "dependent member at n={n}, k={k} ({path})"
                    );
                }
            }
        }
    }
}

#[test]
fn s_balanced_matches_closed_form_and_spans() {
    for g in [3u32, 4, 5] {
        let md = wiman(g);
        let ctx = md.mb_ctx();
        for (k, mk) in [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2)] {
            let expr = s_balanced(&md, k, mk).unwrap();
            assert_eq!(
                expr.weight_form(&ctx),
                s_form(&md, k, mk),
                "S({k},{mk}) weight at g={g}"
            );
            let want = expr.member_len();
            let d = k as usize * (2 * g as usize - 2) + mk as usize * (g as usize - 3);
            assert_eq!(want, d + 1);
            // spot-check one extracted member for independence in the model
            let zero = crate::ratlin::zeros(md.num_vars());
            let member = expr.extract(&ctx, &zero);
            assert!(
                crate::models::images_independent(&md, member.monomials()),
                "dependent member of S({k},{mk}) at g={g}"
            );
        }
    }
}

#[test]
fn type1_matches_paper_forms() {
    // (3,2): 23/5 Λ + 5 N; (4,2): 34/7 Λ + 4 N
    let md = wiman(3);
    let ctx = md.mb_ctx();
    let t1 = type1(&md, 2).unwrap();
    let expect = lambda_form(&md)
        .scale(&Rat::new(23, 5))
        .add(&nu_form(&md).scale(&Rat::int(5)));
    assert_eq!(t1.weight_form(&ctx), expect);
    let md = wiman(4);
    let ctx = md.mb_ctx();
    let t1 = type1(&md, 2).unwrap();
    let expect = lambda_form(&md)
        .scale(&Rat::new(34, 7))
        .add(&nu_form(&md).scale(&Rat::int(4)));
    assert_eq!(t1.weight_form(&ctx), expect);
    // sweep against the closed form
    for g in 3..=6u32 {
        let md = wiman(g);
        let ctx = md.mb_ctx();
        for m in 2..=4u32 {
            let t1 = type1(&md, m).unwrap();
            assert_eq!(
                t1.weight_form(&ctx),
                type1_form(&md, m),
                "type I form at g={g}, m={m}"
            );
        }
    }
}

#[test]
fn type2_matches_closed_form_with_a_less_than_b() {
    for g in 3..=5u32 {
        let md = wiman(g);
        let ctx = md.mb_ctx();
        for m in 2..=4u32 {
            let t2 = type2(&md, m, None)
                .unwrap_or_else(|e| panic!("type II at g={g}, m={m}: {e}"));
            assert_eq!(
                t2.weight_form(&ctx),
                type2_form(&md, m),
                "type II form at g={g}, m={m}"
            );
            if m >= 3 {
                // a < b
                let gi = g as i64;
                let mi = m as i64;
                let a = Rat::new((gi + 1) * mi * mi + (2 * gi - 2) * mi - gi, 2 * gi - 1);
                let b = Rat::new((3 * gi - 5) * mi * mi - (3 * gi - 3) * mi + gi, gi - 2);
                assert!(a < b, "a < b fails at g={g}, m={m}");
            }
        }
    }
}

#[test]
fn type_members_verify_as_bases() {
    let md = wiman(3);
    let t1 = type1(&md, 2).unwrap();
    let report = verify_multibasis(&md, 2, &t1, 5000, 0);
    assert!(report.exhaustive);
    assert!(report.passed(), "failures: {:?}", report.failures);
    let t2 = type2(&md, 2, None).unwrap();
    let report = verify_multibasis(&md, 2, &t2, 5000, 0);
    assert!(report.exhaustive);
    assert!(report.passed(), "failures: {:?}", report.failures);
    // sampled for a bigger instance
    let md = wiman(4);
    let t2 = type2(&md, 3, None).unwrap();
    let report = verify_multibasis(&md, 3, &t2, 60, 7);
    assert!(report.passed(), "failures: {:?}", report.failures);
}

#[test]
fn wiman_m2_certificate_coefficients() {
    // g = 4: alpha (34/7 Λ + 4N) + beta (4Λ + 7N) with beta/alpha = 2/7
    let md = wiman(4);
    match wiman_certificate(&md, 2).unwrap() {
        WimanCertificate::Semistable(cert) => {
            assert_eq!(cert.entries[0].coefficient, Rat::int(7));
            assert_eq!(cert.entries[1].coefficient, Rat::int(2));
            assert!(verify_certificate(&cert).unwrap().ok);
        }
        _ => panic!("expected a semistable certificate"),
    }
}

#[test]
fn wiman_g3_m2_is_refused() {
    let md = wiman(3);
    let err = wiman_certificate(&md, 2).unwrap_err();
    assert!(err.to_string().contains("non-semistable"), "{err}");
}

#[test]
fn wiman_pointed_certificates_g3_m3() {
    let md = wiman(3);
    match wiman_certificate(&md, 3).unwrap() {
        WimanCertificate::Pointed(certs) => {
            assert_eq!(certs.len(), 6);
            for cert in &certs {
                let verdict = verify_certificate(cert).unwrap();
                assert!(verdict.ok, "residual {:?}", verdict.residual);
                assert!(verdict.pointed_multiple.unwrap().is_positive());
            }
        }
        _ => panic!("expected pointed certificates"),
    }
}

#[test]
fn wiman_negative_basis_examples() {
    let md = wiman(3);
    // rho = (2, -1, -1, 0, 0, 0)
    let rho: Vec<Rat> = [2, -1, -1, 0, 0, 0].iter().map(|&x| Rat::int(x)).collect();
    let (basis, w) = wiman_negative_basis(&md, 3, &rho).unwrap();
    assert!(w.is_negative());
    assert!(is_monomial_basis(&md, 3, &basis).is_basis());
    // cross-check against the greedy oracle: the true minimum is at most w
    let (_, greedy_w) = crate::engine::greedy_min_basis(&md, 3, &rho).unwrap();
    assert!(greedy_w <= w);
    assert!(greedy_w.is_negative());
    // one +1/-1 pair
    let mut rho = crate::ratlin::zeros(6);
    rho[0] = Rat::one();
    rho[3] = -Rat::one();
    let (_, w) = wiman_negative_basis(&md, 3, &rho).unwrap();
    assert!(w.is_negative());
    // zero rho rejected
    assert!(wiman_negative_basis(&md, 3, &crate::ratlin::zeros(6)).is_err());
}

#[test]
fn pointing_bounds_are_positive() {
    for g in [3u32, 4, 5] {
        let md = wiman(g);
        assert!(eps_max(&md, 3).is_positive(), "eps bound at g={g}");
        assert!(delta_max(&md, 4).is_positive(), "delta bound at g={g}");
    }
    // pointing far beyond the feasible range is rejected with the bound
    let md = wiman(4);
    let err = type2(
        &md,
        3,
        Some(&Pointing::AtX {
            i: 0,
            eps: Rat::int(1_000_000),
        }),
    );
    match err {
        Err(super::ConstructionError::PointingInfeasible(msg)) => {
            assert!(msg.contains("feasible bound"), "{msg}");
        }
        other => panic!("expected pointing rejection, got {other:?}"),
    }
}
