//! Acceptance suite: one test per criterion, each ending in a single
//! PASS/FAIL line.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cutmimic::cut::{brute_force_min_cut, min_cut};
use cutmimic::dblexp::{
    generate_dblexp, verify_incompressibility, verify_side_assignment, IncompressMode,
    DEFAULT_MAX_OUTER,
};
use cutmimic::graph::enumerate_bipartitions;
use cutmimic::planar::{
    generate_planar_dual, verify_claim_paths, verify_identity_submatrix,
    verify_unique_cut_cycles,
};
use cutmimic::profile::{cut_profile, hagerup_compress, validate_mimicking};
use cutmimic::rank::{build_incidence_matrix, exact_rank, RowMode};
use cutmimic::{TerminalGraph, Weight};

fn report(name: &str, passed: bool) {
    println!("criterion {name}: {}", if passed { "PASS" } else { "FAIL" });
    assert!(passed, "criterion {name} failed");
}

// 1. For k = 3..6 every important minimum cut is unique and equals its
// cycle, edge set and value.
#[test]
fn criterion_1_unique_important_cuts() {
    let mut ok = true;
    for k in 3..=6 {
        let inst = generate_planar_dual(k).unwrap();
        let r = verify_unique_cut_cycles(&inst).unwrap();
        let all = r.important.len() == 1 << (k - 2) && r.passed();
        println!("  k={k}: {}/{} important cuts verified", r.important.len(), 1 << (k - 2));
        ok &= all;
    }
    report("1 (unique important cut cycles, k=3..6)", ok);
}

// 2. Incidence-matrix rank certificates: important rows have rank exactly
// 2^{k-2} with an identity submatrix; unique rows reach at least that.
#[test]
fn criterion_2_rank_certificates() {
    let mut ok = true;
    for k in 3..=6 {
        let inst = generate_planar_dual(k).unwrap();
        let p = cut_profile(&inst.primal).unwrap();
        let important = build_incidence_matrix(&inst.primal, &p, RowMode::ImportantOnly).unwrap();
        let unique = build_incidence_matrix(&inst.primal, &p, RowMode::UniqueOnly).unwrap();
        let all = build_incidence_matrix(&inst.primal, &p, RowMode::All { strict: false }).unwrap();
        let target = 1usize << (k - 2);
        let identity = verify_identity_submatrix(&inst, &all).unwrap();
        let ri = exact_rank(&important);
        let ru = exact_rank(&unique);
        println!("  k={k}: important rank {ri} (target {target}), unique rank {ru}, identity {}", identity.passed());
        ok &= ri == target && ru >= target && identity.passed() && identity.size == target;
    }
    report("2 (rank >= 2^(k-2) with identity submatrix, k=3..6)", ok);
}

// 3. The k edge-disjoint heavy paths with doubling lengths and terminal
// midpoints.
#[test]
fn criterion_3_heavy_paths() {
    let mut ok = true;
    for k in 3..=6 {
        let inst = generate_planar_dual(k).unwrap();
        let r = verify_claim_paths(&inst).unwrap();
        let lengths: Vec<usize> = r.paths.iter().map(|p| p.length).collect();
        let mut expected: Vec<usize> = (0..=k - 2).map(|i| 1 << i).collect();
        expected.push(1 << (k - 2));
        println!("  k={k}: path lengths {lengths:?}");
        ok &= r.passed() && lengths == expected;
    }
    report("3 (edge-disjoint heavy paths with doubling lengths, k=3..6)", ok);
}

// 4. Weight hierarchy and crossing counts for every k <= 8. The generator
// asserts both; this re-derives them independently from the instance.
#[test]
fn criterion_4_weight_hierarchy_and_crossings() {
    let mut ok = true;
    for k in 3..=8 {
        let inst = generate_planar_dual(k).unwrap();
        // C > sum of all non-C weights
        let mut non_c = Weight::zero();
        for e in inst.dual.edges() {
            if e.weight != inst.weights.big_c {
                non_c += &e.weight;
            }
        }
        let mut good = inst.weights.big_c > non_c;
        // each c_i > sum of strictly lighter weights
        for c in inst.weights.all_c() {
            let mut lighter = Weight::zero();
            for e in inst.dual.edges() {
                if e.weight < *c {
                    lighter += &e.weight;
                }
            }
            good &= *c > lighter;
        }
        // crossing counts: dec(a) on 0-children, 2^i - 1 - dec(a) on 1-children
        for (child, &count) in &inst.crossing_counts {
            let parent = &child[1..];
            let i = parent.len() as u32;
            let dec: usize = parent
                .chars()
                .fold(0, |acc, ch| acc << 1 | (ch == '1') as usize);
            let expected = if child.starts_with('0') {
                dec
            } else {
                (1usize << i) - 1 - dec
            };
            good &= count == expected;
        }
        println!("  k={k}: hierarchy and {} crossing counts hold: {good}", inst.crossing_counts.len());
        ok &= good;
    }
    report("4 (weight hierarchy and crossing counts, k<=8)", ok);
}

// 5. Forced outer-layer placement at r = 2: all 10 important sets, all 252
// outer vertices each, membership rule exact, middle placement unique.
#[test]
fn criterion_5_forced_side_assignment() {
    let inst = generate_dblexp(2, None, DEFAULT_MAX_OUTER).unwrap();
    let r = verify_side_assignment(&inst).unwrap();
    let cases_ok = r.cases.len() == 10
        && r.cases.iter().all(|c| {
            c.ok() && c.w_on_s_side == 126 && c.w_mismatches.is_empty() && c.u_placement_ok
        });
    println!(
        "  r=2: {} important sets x {} outer decisions, all forced",
        r.cases.len(),
        inst.w.len()
    );
    report("5 (forced outer-layer sides at r=2)", cases_ok && r.passed());
}

// 6. Incompressibility at r = 2: 268 pairwise-distinct side vectors and a
// 500-pair seeded merge sample with zero mergeable pairs.
#[test]
fn criterion_6_incompressibility() {
    let inst = generate_dblexp(2, None, DEFAULT_MAX_OUTER).unwrap();
    let r = verify_incompressibility(
        &inst,
        IncompressMode::Sampled { pairs: 500, min_ww_pairs: 20 },
        0,
    )
    .unwrap();
    println!(
        "  r=2: {} vertices, distinct vectors {}, {} pairs ({} outer-outer), {} mergeable",
        r.vertices,
        r.side_vectors_distinct,
        r.pairs_tested,
        r.ww_pairs_tested,
        r.mergeable_pairs.len()
    );
    let ok = r.vertices == 268
        && r.bipartitions == 31
        && r.pairs_tested >= 500
        && r.ww_pairs_tested >= 20
        && r.passed();
    report("6 (incompressibility at r=2, seed 0)", ok);
}

fn random_graph(rng: &mut ChaCha8Rng) -> TerminalGraph {
    let n = rng.gen_range(2..=10usize);
    let t = rng.gen_range(2..=4.min(n));
    let mut g = TerminalGraph::new();
    for i in 0..n {
        g.add_vertex(format!("n{i}")).unwrap();
    }
    let weight = |rng: &mut ChaCha8Rng| {
        let num = rng.gen_range(0..=8i64);
        let den = rng.gen_range(1..=4i64);
        Weight::ratio(num, den)
    };
    // random spanning tree keeps it connected; extra edges may be parallel
    for v in 1..n {
        let u = rng.gen_range(0..v);
        let w = weight(rng);
        g.add_edge(u, v, w).unwrap();
    }
    let extra = rng.gen_range(0..=n);
    for _ in 0..extra {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            let w = weight(rng);
            g.add_edge(u, v, w).unwrap();
        }
    }
    let mut terminals: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        terminals.swap(i, j);
    }
    terminals.truncate(t);
    g.set_terminals(terminals).unwrap();
    g
}

// 7. Compression soundness on 1000 seeded random graphs: compression
// mimics exactly, min_cut matches the brute-force oracle everywhere, and
// no single merge ever lowers a cut value.
#[test]
fn criterion_7_compression_soundness() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut merges_checked = 0usize;
    for case in 0..1000 {
        let g = random_graph(&mut rng);
        let bipartitions = enumerate_bipartitions(g.terminal_count()).unwrap();

        // oracle agreement on every bipartition
        let mut originals = Vec::new();
        for b in &bipartitions {
            let cut = min_cut(&g, b).unwrap();
            let (oracle, _) = brute_force_min_cut(&g, b).unwrap();
            assert_eq!(cut.value, oracle, "case {case}: oracle disagrees on {b:?}");
            originals.push(cut.value);
        }

        // compression mimics exactly
        let (compressed, _) = hagerup_compress(&g).unwrap();
        let mim = validate_mimicking(&g, &compressed).unwrap();
        assert!(mim.passed(), "case {case}: compression broke a cut value");

        // no single merge lowers any cut value
        for u in 0..g.vertex_count() {
            for v in u + 1..g.vertex_count() {
                if g.is_terminal(u) && g.is_terminal(v) {
                    continue;
                }
                let merged = g.merge_vertices(u, v).unwrap();
                merges_checked += 1;
                for (b, original) in bipartitions.iter().zip(&originals) {
                    let after = min_cut(&merged, b).unwrap().value;
                    assert!(
                        after >= *original,
                        "case {case}: merge ({u},{v}) lowered the cut for {b:?}"
                    );
                }
            }
        }
    }
    println!("  1000 graphs, {merges_checked} single merges checked");
    report("7 (compression soundness on 1000 random graphs)", true);
}

// 8. Structural counts: layer sizes, Euler's formula, and the k=4 weight
// table (1, 6, 18).
#[test]
fn criterion_8_structural_counts() {
    let mut ok = true;
    for k in 3..=8usize {
        let inst = generate_planar_dual(k).unwrap();
        let mut good = inst.layers[0].len() == 1 && inst.layers[k - 1].len() == 1 << (k - 2);
        for j in 1..=k - 2 {
            let half = 1usize << (j - 1);
            good &= inst.layers[j].len() == half * (half + 1);
        }
        let euler = inst.dual.vertex_count() as i64 - inst.dual.edge_count() as i64
            + inst.dual.face_count() as i64;
        good &= euler == 2;
        println!(
            "  k={k}: layers {:?}, V-E+F = {euler}",
            inst.layers.iter().map(|l| l.len()).collect::<Vec<_>>()
        );
        ok &= good;
    }
    let inst = generate_planar_dual(4).unwrap();
    let table_ok = *inst.weights.c(2) == Weight::one()
        && *inst.weights.c(1) == Weight::from_integer(6)
        && inst.weights.big_c == Weight::from_integer(18);
    println!("  k=4 weight table (c_2, c_1, C) = (1, 6, 18): {table_ok}");
    // the four k=4 important cut values, cross-checked by the oracle
    let b = cutmimic::planar::Signature::from_bitstring("00")
        .unwrap()
        .to_bipartition()
        .unwrap();
    let zero_sig = min_cut(&inst.primal, &b).unwrap().value;
    report(
        "8 (structural counts and the k=4 weight table)",
        ok && table_ok && zero_sig == Weight::from_integer(72),
    );
}
