//! Acceptance suite. Each criterion prints one PASS/FAIL line; run with
//! `cargo test -p infosynth --test acceptance -- --nocapture` to see them.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use infosynth::boolfn::{self, BitColumn, TruthTable};
use infosynth::evolve::{self, decode, EvolutionParams, Genotype};
use infosynth::gatelib::{self, GateKind, GateLibrary};
use infosynth::geometry::{self, CapacityMode, Candidate, Cell, Geometry, Precision, TargetShape};
use infosynth::io;
use infosynth::metrics;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(label: &str, got: f64, want: f64, tol: f64) -> Result<(), String> {
    check((got - want).abs() <= tol, || {
        format!("{label}: got {got:.6}, expected {want} +/- {tol}")
    })
}

fn lib(names: &str) -> GateLibrary {
    GateLibrary::from_names(names).unwrap()
}

// (gate, H(X), H(f), I_gate, transmission) as tabulated for the standard gates.
const STANDARD_GATE_TABLE: [(&str, f64, f64, f64, f64); 4] = [
    ("NOT", 1.0, 1.0, 0.0, 1.0),
    ("AND", 2.0, 0.81, 1.19, 0.5),
    ("OR", 2.0, 0.81, 1.19, 0.5),
    ("EXOR", 2.0, 1.0, 1.0, 1.0),
];

fn c1_gate_measures() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    for (name, hx, hf, igate, trans) in STANDARD_GATE_TABLE {
        let g = GateKind::standard(name).unwrap();
        close(&format!("{name} H(X)"), boolfn::input_entropy(g.arity()).unwrap(), hx, 0.01)?;
        close(&format!("{name} H(f)"), gatelib::gate_output_entropy(&g), hf, 0.01)?;
        close(&format!("{name} I_gate"), gatelib::gate_info_measure(&g), igate, 0.01)?;
        for i in 0..g.arity() {
            let t = gatelib::gate_transmission(&g, i).unwrap();
            if name == "NOT" {
                close("NOT H(f|x)", t, 0.0, 1e-12)?;
                notes.push(format!("NOT H(f|x) computed {t:.2}, table lists {trans:.2} (reported, not asserted)"));
            } else {
                close(&format!("{name} H(f|x{})", i + 1), t, trans, 0.01)?;
            }
        }
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("12 cells + AND/OR/EXOR transmission within 0.01; {}", notes.join("; ")))
}

fn c2_capacity_table() -> Outcome {
    let start = Instant::now();
    let cases = [
        ((2, 2), "NOT,AND,OR", 3.57, 2.0 * 1.19 * 1.5),
        ((2, 2), "NOT,EXOR", 3.00, 2.0 * 1.0 * 1.5),
        ((2, 2), "NOT,AND,OR,EXOR", 3.57, 2.0 * 1.19 * 1.5),
        ((3, 3), "NOT,AND,OR", 6.2475, 3.0 * 1.19 * 1.75),
        ((3, 3), "NOT,EXOR", 5.25, 3.0 * 1.0 * 1.75),
        ((3, 3), "NOT,AND,OR,EXOR", 6.2475, 3.0 * 1.19 * 1.75),
    ];
    let mut got = Vec::new();
    for ((p, q), names, printed, closed_form) in cases {
        let r = geometry::geometry_capacity(
            &Geometry::array(p, q).unwrap(),
            &lib(names),
            CapacityMode::Attenuated,
            Precision::Tabulated,
        );
        close(&format!("{p}x{q} {{{names}}}"), r.total, printed, 1e-3)?;
        close(&format!("{p}x{q} {{{names}}} closed form"), r.total, closed_form, 1e-3)?;
        got.push(format!("{:.4}", r.total));
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("capacities {} within 1e-3", got.join(" / ")))
}

fn c3_entropy_example() -> Outcome {
    let tt = TruthTable::from_vectors(3, &["10001111"]).unwrap();
    let h = boolfn::entropy(&tt, 0).unwrap();
    let h1 = boolfn::conditional_entropy_on_var(&tt, 0, 0).unwrap();
    let h2 = boolfn::conditional_entropy_on_var(&tt, 0, 1).unwrap();
    let h3 = boolfn::conditional_entropy_on_var(&tt, 0, 2).unwrap();
    close("H(f)", h, 0.9544, 1e-3)?;
    close("H(f|x1)", h1, 0.4056, 1e-3)?;
    close("H(f|x2)", h2, 0.9056, 1e-3)?;
    close("H(f|x3)", h3, 0.9056, 1e-3)?;
    Ok(format!(
        "H(f)={h:.4} (printed 0.96), H(f|x1)={h1:.4} (0.41), H(f|x2)={h2:.4}, H(f|x3)={h3:.4} (0.91)"
    ))
}

fn c4_capacity_examples() -> Outcome {
    let il = geometry::library_capacity(&lib("NOT,AND,OR"), Precision::Tabulated);
    close("I_L{NOT,AND,OR}", il, 2.38, 0.01)?;
    let g33 = Geometry::array(3, 3).unwrap();
    let used = (0..3).flat_map(|l| (0..2).map(move |p| Cell::new(l, p)));
    let eff = geometry::effective_capacity(&g33, &lib("NOT,EXOR"), used, Precision::Tabulated).unwrap();
    close("effective 3x3 {NOT,EXOR}", eff, 3.5, 1e-6)?;
    let target = TargetShape {
        n_inputs: 4,
        n_outputs: 2,
    };
    let cands = [
        Candidate {
            geometry: g33,
            library: lib("NOT,EXOR"),
        },
        Candidate {
            geometry: Geometry::array(2, 2).unwrap(),
            library: lib("NOT,AND,OR"),
        },
    ];
    let ranked = geometry::advise(target, &cands, Precision::Tabulated).unwrap();
    check(ranked[0].candidate == cands[1], || {
        format!("ranked {} first", ranked[0].candidate.geometry)
    })?;
    Ok(format!(
        "I_L={il:.4}, effective={eff:.4}, advise: 2x2/{{NOT,AND,OR}} ({:.4}) > 3x3/{{NOT,EXOR}} ({:.4})",
        ranked[0].effective_capacity, ranked[1].effective_capacity
    ))
}

struct RunSummary {
    seed: u64,
    first_hit: Option<u64>,
    elapsed: Duration,
    verified: Option<bool>,
}

fn run_seeds(target: &TruthTable, geom: Geometry, budget: u64) -> Vec<RunSummary> {
    let lib = Arc::new(GateLibrary::standard());
    std::thread::scope(|s| {
        let handles: Vec<_> = (1..=10u64)
            .map(|seed| {
                let lib = lib.clone();
                s.spawn(move || {
                    let params = EvolutionParams {
                        max_evaluations: budget,
                        ..EvolutionParams::with_seed(seed)
                    };
                    let start = Instant::now();
                    let r = evolve::evolve(target, geom, lib, &params).unwrap();
                    let elapsed = start.elapsed();
                    // Independent re-simulation of every functional result.
                    let verified = r.fitness.is_functional().then(|| {
                        r.verified == Some(true)
                            && r.netlist.simulate() == *target
                            && io::parse_netlist(&io::emit_netlist(&r.netlist)).unwrap().simulate() == *target
                    });
                    RunSummary {
                        seed,
                        first_hit: r.first_functional_evaluation(),
                        elapsed,
                        verified,
                    }
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    })
}

fn c5_evolution() -> Outcome {
    let half_adder = TruthTable::from_vectors(2, &["0110", "0001"]).unwrap();
    let full_adder = TruthTable::from_fn(3, 2, |x| {
        let (a, b, c) = (x[0], x[1], x[2]);
        vec![a ^ b ^ c, (a & b) | (c & (a ^ b))]
    })
    .unwrap();
    let mut lines = Vec::new();
    for (name, target, geom, budget, needed) in [
        ("half adder 2x2", &half_adder, Geometry::new(2, 2, 2, 2, 2).unwrap(), 100_000u64, 9),
        ("full adder 3x3", &full_adder, Geometry::new(3, 3, 3, 3, 2).unwrap(), 1_000_000u64, 7),
    ] {
        let runs = run_seeds(target, geom, budget);
        let hits = runs
            .iter()
            .filter(|r| r.first_hit.is_some_and(|e| e <= budget))
            .count();
        for r in &runs {
            check(r.elapsed < Duration::from_secs(60), || {
                format!("{name} seed {} took {:?}", r.seed, r.elapsed)
            })?;
            check(r.verified != Some(false), || {
                format!("{name} seed {} functional circuit failed re-simulation", r.seed)
            })?;
        }
        check(hits >= needed, || format!("{name}: {hits}/10 seeds reached 1.0, need {needed}"))?;
        let worst = runs.iter().map(|r| r.elapsed).max().unwrap();
        let evals: Vec<String> = runs
            .iter()
            .map(|r| r.first_hit.map_or("-".into(), |e| e.to_string()))
            .collect();
        lines.push(format!(
            "{name}: {hits}/10 (first hit at [{}] evals, slowest run {worst:.2?})",
            evals.join(",")
        ));
    }
    Ok(lines.join("; "))
}

/// Row-enumeration oracle: H(A|B) = -sum p(a,b) log2 p(a|b) over the joint
/// distribution of (f, x_S), counted from scratch.
fn oracle_conditional(tt: &TruthTable, out: usize, given: &[usize]) -> f64 {
    let rows = tt.n_rows() as f64;
    let mut joint: HashMap<(Vec<bool>, bool), usize> = HashMap::new();
    let mut marginal: HashMap<Vec<bool>, usize> = HashMap::new();
    for row in 0..tt.n_rows() {
        let b: Vec<bool> = given.iter().map(|&v| tt.input_value(row, v)).collect();
        let a = tt.columns()[out].get(row);
        *joint.entry((b.clone(), a)).or_default() += 1;
        *marginal.entry(b).or_default() += 1;
    }
    let mut h = 0.0;
    for ((b, _), &k) in &joint {
        let p_ab = k as f64 / rows;
        let p_b = marginal[b] as f64 / rows;
        h -= p_ab * (p_ab / p_b).log2();
    }
    h
}

fn c6_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    let mut checks = 0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=10);
        let m = rng.gen_range(1..=2);
        let bias: f64 = rng.gen_range(0.0..=1.0);
        let cols = (0..m)
            .map(|_| BitColumn::from_bits((0..1 << n).map(|_| rng.gen_bool(bias))))
            .collect();
        let tt = TruthTable::new(n, cols).unwrap();
        for out in 0..m {
            let mut diff = |a: f64, b: f64| {
                worst = worst.max((a - b).abs());
                checks += 1;
            };
            diff(boolfn::entropy(&tt, out).unwrap(), oracle_conditional(&tt, out, &[]));
            for v in 0..n {
                let oracle = oracle_conditional(&tt, out, &[v]);
                diff(boolfn::conditional_entropy_on_var(&tt, out, v).unwrap(), oracle);
                diff(boolfn::conditional_entropy_general(&tt, out, &[v]).unwrap(), oracle);
            }
            let subset: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
            diff(
                boolfn::conditional_entropy_general(&tt, out, &subset).unwrap(),
                oracle_conditional(&tt, out, &subset),
            );
        }
    }
    check(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
    Ok(format!("{checks} comparisons over 200 functions, max deviation {worst:.1e}"))
}

fn c7_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut counts = Vec::new();

    // Conditioning never increases entropy.
    for _ in 0..300 {
        let n = rng.gen_range(1..=8);
        let tt = TruthTable::new(n, vec![BitColumn::from_bits((0..1 << n).map(|_| rng.gen_bool(0.5)))]).unwrap();
        let h = boolfn::entropy(&tt, 0).unwrap();
        for v in 0..n {
            let c = boolfn::conditional_entropy_on_var(&tt, 0, v).unwrap();
            check(c <= h + 1e-12, || format!("H(f|x{v}) = {c} > H(f) = {h}"))?;
        }
        check(
            boolfn::conditional_entropy_general(&tt, 0, &(0..n).collect::<Vec<_>>()).unwrap() == 0.0,
            || "H(f|X) != 0".into(),
        )?;
    }
    counts.push("conditioning 300 fns");

    // Gate measures over every 1- and 2-input gate.
    for arity in 1..=2 {
        for bits in 0..(1u32 << (1 << arity)) {
            let vector: String = (0..1 << arity).map(|r| if bits >> r & 1 == 1 { '1' } else { '0' }).collect();
            let g = GateKind::new("G", &vector).unwrap();
            check(gatelib::gate_info_measure(&g) >= -1e-12, || format!("I_gate < 0 for {vector}"))?;
            for i in 0..arity {
                check(
                    gatelib::gate_transmission(&g, i).unwrap() <= gatelib::gate_output_entropy(&g) + 1e-12,
                    || format!("transmission > H(f) for {vector}"),
                )?;
            }
        }
    }
    counts.push("all 20 gates of arity <= 2");

    // Attenuated <= flat, full-cell effective == attenuated.
    for names in ["NOT", "NOT,EXOR", "NOT,AND,OR", "NOT,AND,OR,EXOR"] {
        let l = lib(names);
        for p in 1..=6 {
            for q in 1..=6 {
                let g = Geometry::array(p, q).unwrap();
                let att = geometry::geometry_capacity(&g, &l, CapacityMode::Attenuated, Precision::Exact).total;
                let flat = geometry::geometry_capacity(&g, &l, CapacityMode::Flat, Precision::Exact).total;
                check(att <= flat + 1e-12, || format!("{p}x{q}: attenuated {att} > flat {flat}"))?;
                let all = (0..p).flat_map(|l| (0..q).map(move |pos| Cell::new(l, pos)));
                let eff = geometry::effective_capacity(&g, &l, all, Precision::Exact).unwrap();
                check((eff - att).abs() <= 1e-12, || format!("{p}x{q}: effective {eff} != {att}"))?;
            }
        }
    }
    counts.push("capacity grid 4 libs x 6x6");

    // Genotype validity under 10^4 random operators.
    let library = Arc::new(GateLibrary::standard());
    let geom = Geometry::new(3, 3, 2, 3, 2).unwrap();
    let mut current = Genotype::random(geom, library.clone(), &mut rng);
    let mut other = Genotype::random(geom, library.clone(), &mut rng);
    for i in 0..10_000 {
        current = match rng.gen_range(0..3) {
            0 => current.mutate(rng.gen_range(0.01..=1.0), &mut rng),
            1 => {
                if current.geometry() != other.geometry() {
                    other = Genotype::random(*current.geometry(), library.clone(), &mut rng);
                }
                current.crossover(&other, &mut rng).unwrap()
            }
            _ => current.resize(6, &mut rng),
        };
        current.validate().map_err(|e| format!("operator {i}: {e}"))?;
        let nl = decode(&current);
        check(nl.active_gate_count() <= current.geometry().cell_count(), || "too many active gates".into())?;
    }
    counts.push("10^4 genotype operators");

    // (1+lambda) best-ever monotone; potential monotone non-increasing.
    let target = TruthTable::from_vectors(3, &["01101001", "00010111"]).unwrap();
    for seed in 0..4 {
        let params = EvolutionParams {
            max_evaluations: 30_000,
            crossover: seed % 2 == 1,
            ..EvolutionParams::with_seed(seed)
        };
        let r = evolve::evolve(&target, Geometry::new(3, 3, 3, 3, 2).unwrap(), library.clone(), &params).unwrap();
        for w in r.history.windows(2) {
            check(w[1].functionality >= w[0].functionality, || format!("seed {seed}: functionality dropped"))?;
        }
        let running = metrics::running_potential(&r.history);
        for w in running.windows(2) {
            if let (Some(a), Some(b)) = (w[0], w[1]) {
                check(b <= a, || format!("seed {seed}: potential rose {a} -> {b}"))?;
            }
            check(!(w[0].is_some() && w[1].is_none()), || "potential disappeared".into())?;
        }
    }
    counts.push("4 evolution runs monotone");

    // Round-trips.
    for seed in 0..100 {
        let g = Genotype::random(Geometry::new(3, 4, 2, 4, 3).unwrap(), library.clone(), &mut ChaCha8Rng::seed_from_u64(seed));
        let nl = decode(&g);
        let text = io::emit_netlist(&nl);
        let back = io::parse_netlist(&text).map_err(|e| e.to_string())?;
        check(back == nl && io::emit_netlist(&back) == text, || format!("netlist round-trip {seed}"))?;
        let tt = nl.simulate();
        check(io::parse_pla(&io::emit_pla(&tt)).unwrap() == tt, || "PLA round-trip".into())?;
        check(io::parse_truthvector(&io::emit_truthvector(&tt)).unwrap() == tt, || "vector round-trip".into())?;
    }
    counts.push("100 netlist/PLA/vector round-trips");

    Ok(counts.join(", "))
}

type Criterion = (&'static str, fn() -> Outcome);

#[test]
fn acceptance() {
    let criteria: [Criterion; 7] = [
        ("1 primitive gate measures", c1_gate_measures),
        ("2 geometry capacity table", c2_capacity_table),
        ("3 worked entropy example", c3_entropy_example),
        ("4 library/effective capacity and ranking", c4_capacity_examples),
        ("5 evolution capability", c5_evolution),
        ("6 entropy oracle equivalence", c6_oracle),
        ("7 property suites", c7_properties),
    ];
    let mut failed = Vec::new();
    for (name, f) in criteria {
        let start = Instant::now();
        match f() {
            Ok(detail) => println!("PASS  criterion {name} ({:.2?}): {detail}", start.elapsed()),
            Err(why) => {
                println!("FAIL  criterion {name}: {why}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
