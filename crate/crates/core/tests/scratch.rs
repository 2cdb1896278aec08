//! Temporary planning experiments (not part of the suite).

use triplex_core::catalog;
use triplex_core::latin::{realize_diagonal_triple, realize_three_way};
use triplex_core::search::{permutation_probe, SearchConfig};

#[test]
#[ignore]
fn probe_r7_small_k() {
    let ids = ["STS15-A", "STS15-B", "STS15-C", "STS15-D", "STS15-E"];
    for target in [5u32, 10, 11] {
        let mut found = false;
        'outer: for base_id in ids {
            for moved_id in ids {
                let base = catalog::system(base_id).unwrap();
                let moved = catalog::system(moved_id).unwrap();
                for seed in 0..3u64 {
                    let cfg = SearchConfig { seed, budget: 60_000, ..Default::default() };
                    if let Ok(cert) = permutation_probe(&base, &moved, 0, target, &cfg) {
                        println!(
                            "k={target}: HIT base={base_id} moved={moved_id} seed={seed} k={}",
                            cert.claimed_k
                        );
                        found = true;
                        break 'outer;
                    }
                }
            }
        }
        if !found {
            println!("k={target}: no hit");
        }
    }
}

#[test]
#[ignore]
fn latin6_coverage() {
    let mut ok = vec![];
    let mut fail = vec![];
    for b in (0..=19).chain([27, 36]) {
        match realize_three_way(6, b, 0, 200_000) {
            Ok(t) => {
                assert_eq!(t.k(), b);
                ok.push(b);
            }
            Err(_) => fail.push(b),
        }
    }
    println!("order 6 ok: {ok:?}");
    println!("order 6 fail: {fail:?}");
}

#[test]
#[ignore]
fn latin8_coverage() {
    let mut ok = vec![];
    let mut fail = vec![];
    for b in (0..=56).chain([58, 64]) {
        match realize_three_way(8, b, 0, 200_000) {
            Ok(t) => {
                assert_eq!(t.k(), b);
                ok.push(b);
            }
            Err(_) => fail.push(b),
        }
    }
    println!("order 8 ok: {ok:?}");
    println!("order 8 fail: {fail:?}");
}

#[test]
#[ignore]
fn diag_reachable_sets() {
    for n in [7usize, 9] {
        let mut ok = vec![];
        for k in (n as u32)..=((n * n) as u32) {
            if let Ok((t, _)) = realize_diagonal_triple(n, k, 0, 40_000) {
                assert_eq!(t.triple().k(), k);
                ok.push(k - n as u32);
            }
        }
        println!("order {n} reachable b: {ok:?}");
    }
    let mut ok15 = vec![];
    for k in (15u32..=225).step_by(1) {
        if let Ok((t, _)) = realize_diagonal_triple(15, k, 0, 20_000) {
            assert_eq!(t.triple().k(), k);
            ok15.push(k - 15);
        }
    }
    println!("order 15 reachable b: {ok15:?}");
}

#[test]
#[ignore]
fn latin14_spot() {
    let mut ok = vec![];
    let mut fail = vec![];
    for b in [0u32, 1, 5, 14, 28, 50, 100, 140, 170, 182, 196] {
        match realize_three_way(14, b, 0, 150_000) {
            Ok(t) => {
                assert_eq!(t.k(), b);
                ok.push(b);
            }
            Err(_) => fail.push(b),
        }
    }
    println!("order 14 ok: {ok:?}  fail: {fail:?}");
}

#[test]
#[ignore]
fn catalog_word_combos() {
    use triplex_core::design::{Permutation, StsTriple};
    let ids = ["STS15-A", "STS15-B", "STS15-C", "STS15-D", "STS15-E"];
    let systems: Vec<_> = ids.iter().map(|id| catalog::system(id).unwrap()).collect();
    let mut pool: Vec<Permutation> = vec![Permutation::identity(15)];
    for i in 1..=6 {
        for suffix in ["", "P"] {
            pool.push(catalog::permutation(&format!("PI-15-{i}{suffix}")).unwrap());
        }
    }
    let singles = pool.clone();
    // inverses and pairwise compositions of the recorded permutations
    for p in &singles {
        pool.push(p.inverse());
    }
    for p in &singles {
        for q in &singles {
            pool.push(p.compose(q));
        }
    }
    let key = |p: &Permutation| (0..15u16).map(|x| p.apply(x)).collect::<Vec<_>>();
    pool.sort_by_key(&key);
    pool.dedup_by_key(|p| key(p));
    println!("pool size {}", pool.len());
    let mut hits: std::collections::BTreeMap<u32, usize> = Default::default();
    let mut examples: std::collections::BTreeMap<u32, String> = Default::default();
    for (bi, base) in systems.iter().enumerate() {
        for (mi, moved) in systems.iter().enumerate() {
            let images: Vec<_> =
                pool.iter().map(|p| moved.apply_permutation(p).unwrap()).collect();
            for (pi, s2) in images.iter().enumerate() {
                for (qi, s3) in images.iter().enumerate().skip(pi) {
                    let triple =
                        StsTriple::new([base.clone(), s2.clone(), s3.clone()]);
                    let Ok(common) = triple.common() else { continue };
                    // common flower at any point?
                    let mut flower_pt = None;
                    for x in 0..15u16 {
                        let fl = base.flower_of(x);
                        if fl.blocks.iter().all(|b| common.contains(b)) {
                            flower_pt = Some(x);
                            break;
                        }
                    }
                    if let Some(x) = flower_pt {
                        let k = common.len() as u32 - 7;
                        *hits.entry(k).or_default() += 1;
                        examples.entry(k).or_insert_with(|| {
                            format!("base={bi} moved={mi} p={pi} q={qi} flower={x}")
                        });
                    }
                }
            }
        }
    }
    println!("k histogram: {hits:?}");
    for (k, ex) in &examples {
        println!("k={k}: {ex}");
    }
}

#[test]
#[ignore]
fn catalog_word_combos_deep() {
    use triplex_core::design::{Permutation, StsTriple};
    let ids = ["STS15-A", "STS15-B", "STS15-C", "STS15-D", "STS15-E"];
    let systems: Vec<_> = ids.iter().map(|id| catalog::system(id).unwrap()).collect();
    let mut singles: Vec<Permutation> = vec![Permutation::identity(15)];
    for i in 1..=6 {
        for suffix in ["", "P"] {
            singles.push(catalog::permutation(&format!("PI-15-{i}{suffix}")).unwrap());
        }
    }
    let invs: Vec<Permutation> = singles.iter().map(|p| p.inverse()).collect();
    singles.extend(invs);
    let key = |p: &Permutation| (0..15u16).map(|x| p.apply(x)).collect::<Vec<_>>();
    let mut pool2: Vec<Permutation> = vec![];
    for p in &singles {
        for q in &singles {
            pool2.push(p.compose(q));
        }
    }
    pool2.sort_by_key(&key);
    pool2.dedup_by_key(|p| key(p));
    let mut pool3: Vec<Permutation> = vec![];
    for p in &pool2 {
        for q in &singles {
            pool3.push(p.compose(q));
        }
    }
    pool3.sort_by_key(&key);
    pool3.dedup_by_key(|p| key(p));
    println!("pool2 {} pool3 {}", pool2.len(), pool3.len());
    let targets = [5u32, 10, 11];
    let mut found: std::collections::BTreeMap<u32, String> = Default::default();
    // mixed moved systems, depth-2 words
    for (bi, base) in systems.iter().enumerate() {
        let flowers: Vec<_> = (0..15u16).map(|x| base.flower_of(x)).collect();
        for (mi, m1) in systems.iter().enumerate() {
            let im1: Vec<_> = pool2.iter().map(|p| m1.apply_permutation(p).unwrap()).collect();
            for (ni, m2) in systems.iter().enumerate() {
                let im2: Vec<_> =
                    pool2.iter().map(|p| m2.apply_permutation(p).unwrap()).collect();
                for (pi, s2) in im1.iter().enumerate() {
                    for (qi, s3) in im2.iter().enumerate() {
                        let triple = StsTriple::new([base.clone(), s2.clone(), s3.clone()]);
                        let Ok(common) = triple.common() else { continue };
                        let k = common.len() as u32;
                        if !targets.contains(&(k.saturating_sub(7))) {
                            continue;
                        }
                        for x in 0..15u16 {
                            if flowers[x as usize].blocks.iter().all(|b| common.contains(b)) {
                                let kk = k - 7;
                                found.entry(kk).or_insert_with(|| format!(
                                    "base={bi} m1={mi} m2={ni} p={pi} q={qi} flower={x}"
                                ));
                                break;
                            }
                        }
                    }
                }
            }
        }
    }
    println!("mixed depth-2 hits: {found:?}");
}

#[test]
#[ignore]
fn latin6_hard_values() {
    for b in [14u32, 15, 17, 27] {
        let mut ok = false;
        for seed in 0..6u64 {
            if let Ok(t) = realize_three_way(6, b, seed, 2_000_000) {
                assert_eq!(t.k(), b);
                println!("b={b}: ok at seed {seed}");
                ok = true;
                break;
            }
        }
        if !ok {
            println!("b={b}: FAIL all seeds");
        }
    }
}

#[test]
#[ignore]
fn latin8_hard_values() {
    let mut ok = vec![];
    let mut fail = vec![];
    for b in 22..=58u32 {
        let mut hit = false;
        for seed in 0..6u64 {
            if let Ok(t) = realize_three_way(8, b, seed, 2_000_000) {
                assert_eq!(t.k(), b);
                hit = true;
                break;
            }
        }
        if hit { ok.push(b) } else { fail.push(b) }
    }
    println!("order 8 hard ok: {ok:?}");
    println!("order 8 hard fail: {fail:?}");
}

#[test]
#[ignore]
fn diag9_retry() {
    let mut ok = vec![];
    for k in 9u32..=81 {
        let mut hit = false;
        for seed in 0..4u64 {
            if let Ok((t, _)) = realize_diagonal_triple(9, k, seed, 500_000) {
                assert_eq!(t.triple().k(), k);
                hit = true;
                break;
            }
        }
        if hit {
            ok.push(k - 9);
        }
    }
    println!("order 9 diag b retry: {ok:?}");
}

#[test]
#[ignore]
fn time_planner_tuples() {
    use std::time::Instant;
    use triplex_core::planner::plan_and_realize;
    use triplex_core::search::SearchConfig;
    let cfg = SearchConfig::default();
    for (r, k) in [
        (12usize, 9u32),
        (13, 1),
        (13, 40),
        (16, 3),
        (21, 24),
        (9, 20),
        (10, 33),
        (12, 16),
        (13, 27),
    ] {
        let t0 = Instant::now();
        let out = plan_and_realize(r, k, &cfg);
        println!("({r},{k}): {:?} -> {}", t0.elapsed(), out.is_ok());
    }
}

#[test]
#[ignore]
fn time_r12_components() {
    use std::time::Instant;
    use triplex_core::constructions::flower_only;
    use triplex_core::latin::realize_three_way;
    use triplex_core::search::SearchConfig;
    let cfg = SearchConfig::default();
    let t0 = Instant::now();
    let f4 = flower_only(4, &cfg);
    println!("flower_only(4): {:?} -> {}", t0.elapsed(), f4.is_ok());
    for b in [0u32, 1, 8, 9, 16] {
        let t0 = Instant::now();
        let mut got = false;
        for attempt in 0..6u64 {
            if realize_three_way(8, b, attempt, 2_000_000).is_ok() {
                got = true;
                break;
            }
        }
        println!("latin(8,{b}): {:?} -> {got}", t0.elapsed());
    }
}

#[test]
#[ignore]
fn time_det_sizes() {
    use std::time::Instant;
    use triplex_core::latin::{deterministic_three_way, deterministic_three_way_sizes};
    for n in [4usize, 6, 8, 10, 14] {
        let t0 = Instant::now();
        let s = deterministic_three_way_sizes(n);
        println!("sizes({n}): {:?} ({} values)", t0.elapsed(), s.len());
    }
    for k in [1u32, 9, 13, 25] {
        let t0 = Instant::now();
        let got = deterministic_three_way(8, k).is_some();
        println!("det(8,{k}): {:?} -> {got}", t0.elapsed());
    }
}
