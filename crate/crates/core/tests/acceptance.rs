//! Acceptance suite. Each test prints one PASS/FAIL line (visible with
//! --nocapture) and asserts the same condition, so a red run pinpoints the
//! criterion that broke.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use group_expansions::expand::{abelianized_expansion, nilpotent_equal, Expansion};
use group_expansions::kz::{
    circle, concat, lollipop, num_grouplike_defect, num_mul, transport, Ambient, Loop, Segment,
    Track,
};
use group_expansions::lie::{
    derived_quotient_dims, dynkin_project, lie_embed, lie_ideal_build, lie_quotient_dims,
    lyndon_words, LiePoly,
};
use group_expansions::malcev::{graded_rank_probe, malcev_present};
use group_expansions::presets;
use group_expansions::ranks::{
    chen_free, distinguish, lcs_braidlike, lcs_surface, rank_table, witt_free, Family, RankKind,
};
use group_expansions::series::{bch, GradedIdeal, Series};
use group_expansions::words::{commutator, default_names, parse_word, Word};
use group_expansions::{NcSeries, Rat};

fn report(n: usize, what: &str, ok: bool) {
    println!("criterion {n:2}: {} - {what}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} failed: {what}");
}

#[test]
fn criterion_01_lyndon_counts_match_witt() {
    let mut ok = true;
    for n in 1..=4 {
        let witt = witt_free(n, 8).unwrap();
        for k in 1..=8 {
            ok &= lyndon_words(n, k).len() as u64 == witt.values[k - 1];
        }
    }
    report(1, "Lyndon word counts equal Witt numbers, n <= 4, k <= 8", ok);
}

#[test]
fn criterion_02_bch_embeds_and_dynkin_round_trips() {
    let s = bch::<Rat>(1, 2, 4).unwrap();
    let direct = Series::<Rat>::generator(2, 4, 1)
        .unwrap()
        .exp()
        .unwrap()
        .mul(&Series::generator(2, 4, 2).unwrap().exp().unwrap())
        .unwrap()
        .log()
        .unwrap();
    let mut ok = s == direct;

    let p = dynkin_project(&s).unwrap();
    ok &= lie_embed(&p, 4).unwrap() == s;

    for n in 1..=3 {
        for d in 1..=6 {
            for w in lyndon_words(n, d) {
                let p = LiePoly::from_terms(n, vec![(w, Rat::from_integer(1.into()))]).unwrap();
                let back = dynkin_project(&lie_embed(&p, d).unwrap()).unwrap();
                ok &= back == p;
            }
        }
    }
    report(2, "bch(1,2,4) = log(exp X1 exp X2) exactly; Dynkin round-trip, deg <= 6", ok);
}

#[test]
fn criterion_03_exponential_images_grouplike_magnus_not() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e3779b9);
    let mut ok = true;
    for _ in 0..200 {
        let n = rng.gen_range(1..=3usize);
        let len = rng.gen_range(1..=8usize);
        let letters: Vec<i32> = (0..len)
            .map(|_| {
                let g = rng.gen_range(1..=n) as i32;
                if rng.gen_bool(0.5) {
                    g
                } else {
                    -g
                }
            })
            .collect();
        let w = Word::new(n, letters).unwrap();
        let e = Expansion::exponential(n, 4).unwrap();
        ok &= e.expand(&w).unwrap().is_grouplike();
    }
    for n in 1..=3 {
        let e = Expansion::magnus(n, 2).unwrap();
        for i in 1..=n {
            let img = e.expand(&Word::generator(n, i).unwrap()).unwrap();
            ok &= !img.is_grouplike();
        }
    }
    report(3, "200 exponential images group-like at N=4; Magnus generators fail at N=2", ok);
}

#[test]
fn criterion_04_surface_and_torus_rank_probes() {
    let names = default_names(4);
    let rel = parse_word("[x1,x2] [x3,x4]", &names).unwrap();
    let p = group_expansions::words::GroupPresentation::new(names, vec![rel]).unwrap();
    let e = Expansion::exponential(4, 4).unwrap();
    let probe = graded_rank_probe(&malcev_present(&p, &e, 4).unwrap()).unwrap();
    let labute = lcs_surface(2, 4).unwrap().values;
    let mut ok = probe.ranks_holonomy_like == labute && probe.ranks_filtration == labute;
    ok &= labute == vec![4, 5, 16, 45];

    let names = default_names(2);
    let rel = parse_word("[x1,x2]", &names).unwrap();
    let p = group_expansions::words::GroupPresentation::new(names, vec![rel]).unwrap();
    let e = Expansion::exponential(2, 4).unwrap();
    let probe = graded_rank_probe(&malcev_present(&p, &e, 4).unwrap()).unwrap();
    ok &= probe.ranks_holonomy_like == vec![2, 0, 0, 0]
        && probe.ranks_filtration == vec![2, 0, 0, 0];
    report(4, "surface g=2 probe gives (4,5,16,45) twice; Z^2 gives (2,0,0,0)", ok);
}

#[test]
fn criterion_05_pure_braid_quotients() {
    let ideal3 = lie_ideal_build(3, 4, &presets::pure_braid_lie_gens(3).unwrap()).unwrap();
    let mut ok = lie_quotient_dims(&ideal3) == vec![3, 1, 2, 3];

    let assoc = GradedIdeal::build(3, 4, &presets::pure_braid_assoc_gens(3, 4).unwrap()).unwrap();
    // Poincare-Birkhoff-Witt: prod_d (1-t^d)^(-phi_d) with phi = (3,1,2,3)
    let phi = [3usize, 1, 2, 3];
    let mut pbw = vec![0i64; 5];
    pbw[0] = 1;
    for (d, &m) in phi.iter().enumerate() {
        for _ in 0..m {
            // multiply by 1/(1-t^(d+1))
            let step = d + 1;
            let mut next = pbw.clone();
            for k in step..=4 {
                next[k] += next[k - step];
            }
            pbw = next;
        }
    }
    let pbw: Vec<u64> = pbw.into_iter().map(|x| x as u64).collect();
    ok &= assoc.hilbert() == pbw && pbw == vec![1, 3, 7, 15, 31];

    let ideal4 = lie_ideal_build(6, 4, &presets::pure_braid_lie_gens(4).unwrap()).unwrap();
    let prod = lcs_braidlike(Family::ProductOfFree(4), 4).unwrap().values;
    ok &= lie_quotient_dims(&ideal4) == prod && prod == vec![6, 4, 10, 21];
    report(5, "pure-braid quotient dims (3,1,2,3), PBW Hilbert (1,3,7,15,31), n=4 dims (6,4,10,21)", ok);
}

#[test]
fn criterion_06_derived_quotient_matches_chen_closed_form() {
    let mut ok = true;
    for n in 1..=3 {
        let free = lie_ideal_build(n, 5, &[]).unwrap();
        let derived = derived_quotient_dims(&free, 2).unwrap();
        ok &= derived == chen_free(n, 5).unwrap().values;
    }
    report(6, "derived-series quotient of the free Lie algebra equals Chen ranks, n <= 3, k <= 5", ok);
}

#[test]
fn criterion_07_chen_tables_distinguish_braid_like_groups() {
    let mut ok = true;
    for (n, expect) in [(4usize, [15u64, 16, 18]), (5, [45, 51, 63])] {
        let fams = [Family::PureBraid(n), Family::UpperMcCool(n), Family::ProductOfFree(n)];
        let tables: Vec<_> = fams
            .iter()
            .map(|&f| rank_table(f, RankKind::Chen, 4).unwrap())
            .collect();
        for (t, e) in tables.iter().zip(expect) {
            ok &= t.values[3] == e;
        }
        let rep = distinguish(&tables).unwrap();
        ok &= rep.pairs.iter().all(|&(_, _, k)| k == Some(4));
    }
    report(7, "Chen tables of P_n, wP_n^+, prod F_i first differ at k=4: (15,16,18) and (45,51,63)", ok);
}

// ---- criterion 8: brute-force collection in the free class-3 group ----
//
// Letters of the collected normal form x^a y^b c^e u^f v^g, where c=[x,y],
// u=[c,x], v=[c,y] and u,v are central. Encoding: 1=x, 2=y, 3=c, 4=u, 5=v,
// negatives are inverses. The swap table moves a lower letter left past a
// higher one, emitting the commutator correction on the right.

fn swap_rule(p: i8, q: i8) -> Option<Vec<i8>> {
    Some(match (p, q) {
        (2, 1) => vec![1, 2, -3, -4, -5],
        (2, -1) => vec![-1, 2, 3, 5],
        (-2, 1) => vec![1, -2, 3, 4],
        (-2, -1) => vec![-1, -2, -3],
        (3, 1) => vec![1, 3, 4],
        (3, -1) => vec![-1, 3, -4],
        (-3, 1) => vec![1, -3, -4],
        (-3, -1) => vec![-1, -3, 4],
        (3, 2) => vec![2, 3, 5],
        (3, -2) => vec![-2, 3, -5],
        (-3, 2) => vec![2, -3, -5],
        (-3, -2) => vec![-2, -3, 5],
        // u and v are central: plain swaps
        (4 | -4 | 5 | -5, _) if q.abs() < p.abs() => vec![q, p],
        (5 | -5, 4 | -4) => vec![q, p],
        _ => return None,
    })
}

fn collect_letters(mut word: Vec<i8>) -> [i64; 5] {
    let mut guard = 0usize;
    loop {
        guard += 1;
        assert!(guard < 1_000_000, "collection did not terminate");
        let mut changed = false;
        let mut i = 0;
        while i + 1 < word.len() {
            let (p, q) = (word[i], word[i + 1]);
            if p == -q {
                word.drain(i..=i + 1);
                changed = true;
                i = i.saturating_sub(1);
                continue;
            }
            if let Some(rep) = swap_rule(p, q) {
                word.splice(i..=i + 1, rep);
                changed = true;
                i = i.saturating_sub(1);
                continue;
            }
            i += 1;
        }
        if !changed {
            break;
        }
    }
    let mut exps = [0i64; 5];
    for l in word {
        exps[(l.abs() - 1) as usize] += l.signum() as i64;
    }
    exps
}

fn collect_word(w: &Word) -> [i64; 5] {
    collect_letters(w.letters().iter().map(|&l| l as i8).collect())
}

fn inverse_letters(w: &[i8]) -> Vec<i8> {
    w.iter().rev().map(|&l| -l).collect()
}

#[test]
fn criterion_08_nilpotent_equality_matches_collection_oracle() {
    // sanity of the machine against its defining relations
    let xyx_iy_i = vec![1i8, 2, -1, -2];
    assert_eq!(collect_letters(xyx_iy_i.clone()), [0, 0, 1, 0, 0], "c = [x,y]");
    let mut u_word = xyx_iy_i.clone();
    u_word.push(1);
    u_word.extend(inverse_letters(&xyx_iy_i));
    u_word.push(-1);
    assert_eq!(collect_letters(u_word.clone()), [0, 0, 0, 1, 0], "u = [c,x]");
    let mut v_word = xyx_iy_i.clone();
    v_word.push(2);
    v_word.extend(inverse_letters(&xyx_iy_i));
    v_word.push(-2);
    assert_eq!(collect_letters(v_word.clone()), [0, 0, 0, 0, 1], "v = [c,y]");
    for g in [1i8, -1, 2, -2] {
        // weight-4 commutators [u, g] collapse: class 3
        let mut comm = u_word.clone();
        comm.push(g);
        comm.extend(inverse_letters(&u_word));
        comm.push(-g);
        assert_eq!(collect_letters(comm), [0; 5], "u central");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..20 {
        let w: Vec<i8> = (0..rng.gen_range(1..=10))
            .map(|_| *[1i8, -1, 2, -2].iter().nth(rng.gen_range(0..4)).unwrap())
            .collect();
        let mut ww = w.clone();
        ww.extend(inverse_letters(&w));
        assert_eq!(collect_letters(ww), [0; 5], "w w^-1 collects to 1");
    }

    // the comparison itself: 50 pairs decided identically
    let e = Expansion::exponential(2, 3).unwrap();
    let random_word = |len_max: usize, rng: &mut ChaCha8Rng| -> Word {
        let len = rng.gen_range(0..=len_max);
        let letters: Vec<i32> = (0..len)
            .map(|_| *[1i32, -1, 2, -2].iter().nth(rng.gen_range(0..4)).unwrap())
            .collect();
        Word::new(2, letters).unwrap()
    };
    let mut ok = true;
    let mut equal_seen = 0;
    let mut unequal_seen = 0;
    for t in 0..50 {
        let w1 = random_word(8, &mut rng);
        let w2 = if t % 2 == 0 {
            // same element of F_2/Gamma_4 by construction: append a
            // weight-4 commutator of generators
            let a = Word::generator(2, 1).unwrap();
            let b = Word::generator(2, 2).unwrap();
            let c3 = commutator(&commutator(&commutator(&a, &b).unwrap(), &a).unwrap(), &b).unwrap();
            w1.mul(&c3).unwrap()
        } else {
            random_word(8, &mut rng)
        };
        let oracle = collect_word(&w1) == collect_word(&w2);
        let lib = nilpotent_equal(&e, &w1, &w2, 3).unwrap();
        ok &= oracle == lib;
        if oracle {
            equal_seen += 1;
        } else {
            unequal_seen += 1;
        }
    }
    ok &= equal_seen >= 25 && unequal_seen >= 10;
    report(8, "nilpotent_equal agrees with the collection oracle on 50 pairs in F_2/Gamma_4", ok);
}

#[test]
fn criterion_09_transport_numerics() {
    let tol = 1e-8;
    let c = Complex64::new;

    // one puncture: transport of a circle is exp(X_1), checked through degree 4
    let lp = circle(Ambient::PuncturedPlane(vec![c(0.0, 0.0)]), c(0.0, 0.0), 0.5).unwrap();
    let t = transport(&lp, 4, tol).unwrap();
    let expx = NcSeries::generator(1, 4, 1).unwrap().exp().unwrap();
    let mut ok = group_expansions::kz::compare_symbolic(&t, &expx).unwrap() < 1e-6;

    // configuration space of two strands: one full turn has linking number 1
    let start = c(1.0, 0.0);
    let turn = Track::arc(start, start, c(0.0, 0.0), true).unwrap();
    let a12 = Loop::new(
        Ambient::Configuration(2),
        vec![Segment::solo(&[start, c(0.0, 0.0)], 0, turn).unwrap()],
    )
    .unwrap();
    let t12 = transport(&a12, 3, tol).unwrap();
    ok &= (t12.coeff(&[1]) - c(1.0, 0.0)).norm() < 1e-6;

    // group-likeness and multiplicativity at K = 3
    let ps = vec![c(0.0, 0.0), c(3.0, 0.0)];
    let base = c(1.5, -2.0);
    let g1 = lollipop(ps.clone(), 1, base, 0.5).unwrap();
    let g2 = lollipop(ps.clone(), 2, base, 0.5).unwrap();
    let t1 = transport(&g1, 3, tol).unwrap();
    let t2 = transport(&g2, 3, tol).unwrap();
    let t12b = transport(&concat(&g1, &g2).unwrap(), 3, tol).unwrap();
    for s in [&t1, &t2, &t12b, &t12] {
        ok &= num_grouplike_defect(s) < 1e-6;
    }
    let prod = num_mul(&t1, &t2).unwrap();
    let mut mult_defect: f64 = 0.0;
    for (w, coeff) in prod.terms() {
        mult_defect = mult_defect.max((coeff - t12b.coeff(w)).norm());
    }
    for (w, coeff) in t12b.terms() {
        mult_defect = mult_defect.max((coeff - prod.coeff(w)).norm());
    }
    ok &= mult_defect < 1e-6;
    report(9, "transport: exp around one puncture, linking number 1, group-like and multiplicative", ok);
}

#[test]
fn criterion_10_braid_abelianization_is_blind() {
    let braid = [1i32, 2, -1, -2];
    let img = abelianized_expansion(&braid, 4).unwrap();
    let ok = img == Series::one(1, 4) && !braid.is_empty();
    report(10, "abelianized expansion sends the nonempty braid word s1 s2 s1^-1 s2^-1 to 1", ok);
}
