//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use num_complex::Complex64;
use rand::Rng;
use spinwire_core::chain::{hamiltonian_dense, spmc_check, ChainSpec, SpmcStatus};
use spinwire_core::codes::{
    decode, encode, logical_operators, BlochVector, LogicalFrame, DEFAULT_LEAKAGE_TOL,
};
use spinwire_core::dynamics::verify_mirror_relations;
use spinwire_core::linalg::{commutator, embed, expectation, frobenius_distance, kron, spin};
use spinwire_core::pauli::{
    hamiltonian_symbolic, nested_adjoint, to_matrix, GaussianRational, Monomial,
    DEFAULT_TERM_BUDGET,
};
use spinwire_core::protocols::{fidelity_scan, random_bloch, ProtocolId, Simulator, WireStateSpec};
use spinwire_core::{PauliOperator, PauliString};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, detail: impl Into<String>) -> Outcome {
    let detail = detail.into();
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn engineered(n: usize) -> ChainSpec {
    ChainSpec::engineered(n, 1.0).expect("engineered chain")
}

fn central_claim() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 1.0;
    let mut runs = 0;
    for n in 4..=10 {
        let sim = Simulator::new(&engineered(n)).map_err(|e| e.to_string())?;
        let dim = 1usize << (n - 2);
        let mut wires = vec![WireStateSpec::AllDown];
        wires.extend((0..5).map(|_| WireStateSpec::RandomPure { seed: rng.random() }));
        wires.extend([2, 8, dim].map(|rank| WireStateSpec::RandomMixed {
            seed: rng.random(),
            rank: rank.min(dim),
        }));
        for _ in 0..20 {
            let r = random_bloch(&mut rng);
            for wire in &wires {
                let report = sim.two_qubit_code(&r, wire).map_err(|e| e.to_string())?;
                if report.measurements != 0 || report.classical_bits != 0 {
                    return Err(format!(
                        "n = {n}: protocol used measurements or classical bits"
                    ));
                }
                worst = worst.min(report.fidelity);
                runs += 1;
            }
        }
    }
    ensure(
        1.0 - worst <= 1e-8,
        format!("{runs} runs, min fidelity 1 - {:.2e}", 1.0 - worst),
    )
}

fn transfer_time_peak() -> Outcome {
    let mut details = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in [4, 5, 6] {
        let spec = engineered(n);
        let step = 2.0 * std::f64::consts::PI / 200.0;
        let grid: Vec<f64> = (0..=200).map(|k| k as f64 * step).collect();
        let r = random_bloch(&mut rng);
        let wire = WireStateSpec::RandomPure { seed: rng.random() };
        let scan = fidelity_scan(&spec, ProtocolId::TwoQubitCode, &r, &wire, &grid)
            .map_err(|e| e.to_string())?;
        let (t_peak, _) = scan
            .iter()
            .copied()
            .fold((0.0, f64::NEG_INFINITY), |best, p| {
                if p.1 > best.1 {
                    p
                } else {
                    best
                }
            });
        if (t_peak - spec.transfer_time()).abs() > step {
            return Err(format!("n = {n}: peak at t = {t_peak}"));
        }
        details.push(format!("n={n} peak t={t_peak:.4}"));
    }
    Ok(details.join(", "))
}

fn mirror_relations(sites: std::ops::RangeInclusive<usize>, receiver_frame: bool) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut parities = BTreeSet::new();
    let mut count = 0;
    for n in sites {
        let report = verify_mirror_relations(&engineered(n), 1e-9).map_err(|e| e.to_string())?;
        parities.insert(format!("{:?}", report.parity));
        for check in report
            .checks
            .iter()
            .filter(|c| c.relation.contains("sender") == receiver_frame)
        {
            if !check.pass {
                return Err(format!(
                    "n = {n}: {} residual {:.2e}",
                    check.relation, check.residual
                ));
            }
            worst = worst.max(check.residual);
            count += 1;
        }
    }
    ensure(
        parities.len() == 2,
        format!("{count} relations, parities {parities:?}, max residual {worst:.2e}"),
    )
}

/// Term strings of the closed forms, in the order the operators are listed.
fn printed_term_sets() -> Vec<(&'static str, usize, Vec<&'static str>)> {
    vec![
        ("X1 X2 + Y1 Y2", 1, vec!["X1 Z2 Y3", "Y1 Z2 X3"]),
        (
            "X1 X2 + Y1 Y2",
            2,
            vec![
                "X1 X2",
                "Y1 Y2",
                "X2 X3",
                "Y2 Y3",
                "X1 Z2 Z3 X4",
                "Y1 Z2 Z3 Y4",
            ],
        ),
        ("Y1 X2 - X1 Y2", 1, vec!["Z1", "Z2", "Y1 Z2 Y3", "X1 Z2 X3"]),
        (
            "Y1 X2 - X1 Y2",
            2,
            vec![
                "Y2 X3",
                "X2 Y3",
                "Y1 X2",
                "X1 Y2",
                "Y1 Z2 Z3 X4",
                "X1 Z2 Z3 Y4",
            ],
        ),
        // as printed, the first bond term repeats one string, which cancels
        ("Z1 - Z2", 1, vec!["Y2 X3", "X2 Y3"]),
        (
            "Z1 - Z2",
            2,
            vec![
                "Z1", "Z2", "X1 Z2 X3", "Y1 Z2 Y3", "Z3", "X2 Z3 X4", "Y2 Z3 Y4",
            ],
        ),
        ("Z1 Z2", 1, vec!["Z1 X2 Y3", "Z1 Y2 X3"]),
        (
            "Z1 Z2",
            2,
            vec![
                "X1 X3",
                "Y1 Y3",
                "Z1 Z2",
                "Z1 Z3",
                "Z1 X2 Z3 X4",
                "Z1 Y2 Z3 Y4",
            ],
        ),
        ("X1", 1, vec!["Z1 Y2"]),
        ("X1", 2, vec!["X1", "Z1 Z2 X3"]),
        ("Y1", 1, vec!["Z1 X2"]),
        ("Y1", 2, vec!["Y1", "Z1 Z2 Y3"]),
    ]
}

fn symbolic_numeric_equivalence() -> Outcome {
    let n = 6;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let couplings: Vec<f64> = (1..n).map(|_| rng.random_range(0.5..2.0)).collect();
    let h_dense =
        hamiltonian_dense(&ChainSpec::custom(n, couplings.clone()).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
    let h = hamiltonian_symbolic(n).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for expr in [
        "X1 X2 + Y1 Y2",
        "Y1 X2 - X1 Y2",
        "1/2 Z1 - 1/2 Z2",
        "Z1 Z2",
        "X1",
        "Y1",
    ] {
        let o = PauliOperator::parse_expression(n, expr).map_err(|e| e.to_string())?;
        let iterates = nested_adjoint(&h, &o, 4, DEFAULT_TERM_BUDGET).map_err(|e| e.to_string())?;
        let mut dense = to_matrix(&o, &couplings).map_err(|e| e.to_string())?;
        for (k, op) in iterates.iter().enumerate() {
            if k > 0 {
                dense = commutator(&h_dense, &dense);
            }
            let residual = frobenius_distance(
                &to_matrix(op, &couplings).map_err(|e| e.to_string())?,
                &dense,
            );
            if residual >= 1e-12 {
                return Err(format!("{expr} depth {k}: residual {residual:.2e}"));
            }
            worst = worst.max(residual);
        }
    }
    let mut mismatches = Vec::new();
    for (expr, depth, strings) in printed_term_sets() {
        let o = PauliOperator::parse_expression(n, expr).map_err(|e| e.to_string())?;
        let computed: BTreeSet<PauliString> = nested_adjoint(&h, &o, depth, DEFAULT_TERM_BUDGET)
            .map_err(|e| e.to_string())?[depth]
            .strings();
        let printed: BTreeSet<PauliString> = strings
            .iter()
            .map(|s| PauliString::parse(s).unwrap())
            .collect();
        if computed != printed {
            mismatches.push(format!("[H,·]^{depth}({expr})"));
        }
    }
    ensure(
        mismatches == ["[H,·]^1(Z1 - Z2)"],
        format!("max residual {worst:.2e}; term-set mismatches {mismatches:?} (expected only the repeated-string typo)"),
    )
}

fn shift_properties() -> Outcome {
    let n = 6;
    let h = hamiltonian_symbolic(n).map_err(|e| e.to_string())?;
    let coefficient_at = |expr: &str, depth: usize, string: &str| {
        let o = PauliOperator::parse_expression(n, expr).unwrap();
        let iterates = nested_adjoint(&h, &o, depth, DEFAULT_TERM_BUDGET).unwrap();
        iterates
            .into_iter()
            .map(|op| op.coefficient(&PauliString::parse(string).unwrap()))
            .collect::<Vec<_>>()
    };
    let j = |exps: Vec<u32>| Monomial::from_exponents(exps);
    for (expr, shifted) in [
        ("X1 X2 + Y1 Y2", "X2 X3"),
        ("Y1 X2 - X1 Y2", "X2 Y3"),
        ("Z1 - Z2", "Z3"),
    ] {
        let coeffs = coefficient_at(expr, 2, shifted);
        if coeffs[1].terms().next().is_some() || coeffs[2].terms().next().is_none() {
            return Err(format!(
                "{expr}: shifted copy {shifted} not first at depth 2"
            ));
        }
    }
    let xx = coefficient_at("X1 X2 + Y1 Y2", 2, "X2 X3");
    if xx[2].get(&j(vec![1, 1])) != GaussianRational::ratio(-1, 4) {
        return Err(format!("X2 X3 coefficient at depth 2 is {:?}", xx[2]));
    }
    let zz = coefficient_at("Z1 Z2", 4, "Z2 Z3");
    let first_depth = zz.iter().position(|c| c.terms().next().is_some());
    if first_depth != Some(4) {
        return Err(format!("Z2 Z3 first appears at depth {first_depth:?}"));
    }
    ensure(
        zz[4].get(&j(vec![2, 2])) == GaussianRational::ratio(3, 8) && zz[4].terms().count() == 1,
        format!(
            "Z2 Z3 appears first at depth 4 with coefficient {:?}",
            zz[4]
        ),
    )
}

fn spmc() -> Outcome {
    for n in 2..=20 {
        let report = spmc_check(&engineered(n), 1e-10).map_err(|e| e.to_string())?;
        let alternating = report
            .parities
            .windows(2)
            .all(|w| w[0] == -w[1] && w[0] != 0);
        let equidistant = n == 2 || report.spacing_max - report.spacing_min < 1e-10;
        if !(report.spmc_pass && alternating && equidistant) {
            return Err(format!("n = {n}: {report:?}"));
        }
    }
    let broken = spmc_check(&ChainSpec::custom(4, vec![1.0, 2.0, 1.0]).unwrap(), 1e-10)
        .map_err(|e| e.to_string())?;
    let asymmetric = spmc_check(&ChainSpec::custom(3, vec![1.0, 5.0]).unwrap(), 1e-10)
        .map_err(|e| e.to_string())?;
    ensure(
        broken.status == SpmcStatus::Fail && !asymmetric.spmc_pass,
        format!(
            "n = 2..20 pass; [1,2,1] {:?}, [1,5] {:?}",
            broken.status, asymmetric.status
        ),
    )
}

fn negative_controls() -> Outcome {
    let sim = Simulator::new(&engineered(5)).map_err(|e| e.to_string())?;
    let r = BlochVector::new(1.0, 0.0, 0.0);
    let mut total = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..100 {
        let wire = WireStateSpec::RandomPure { seed: rng.random() };
        total += sim
            .run(
                ProtocolId::SingleUninitialized,
                &r,
                &wire,
                sim.spec().transfer_time(),
            )
            .map_err(|e| e.to_string())?
            .fidelity;
    }
    let mean = total / 100.0;
    let uniform = ChainSpec::uniform(6, 1.0).unwrap();
    let mirror = verify_mirror_relations(&uniform, 1e-9).map_err(|e| e.to_string())?;
    let code = Simulator::new(&uniform)
        .map_err(|e| e.to_string())?
        .two_qubit_code(
            &random_bloch(&mut rng),
            &WireStateSpec::RandomPure { seed: 3 },
        )
        .map_err(|e| e.to_string())?;
    ensure(
        mean < 0.99 && !mirror.all_pass && code.fidelity < 1.0 - 1e-8,
        format!(
            "uninitialized mean {mean:.4}; uniform n=6 mirror pass {}, code fidelity {:.4}",
            mirror.all_pass, code.fidelity
        ),
    )
}

fn difranco() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut details = Vec::new();
    for n in [4, 5] {
        let sim = Simulator::new(&engineered(n)).map_err(|e| e.to_string())?;
        let mut worst: f64 = 1.0;
        for _ in 0..10 {
            let r = random_bloch(&mut rng);
            let wire = WireStateSpec::RandomPure { seed: rng.random() };
            let report = sim
                .difranco(
                    &r,
                    &wire,
                    spinwire_core::protocols::DiFrancoMode::Exhaustive,
                )
                .map_err(|e| e.to_string())?;
            let d = report.difranco.as_ref().unwrap();
            if d.branches.len() != 4 || (d.probability_total - 1.0).abs() > 1e-12 {
                return Err(format!(
                    "n = {n}: {} branches, total probability {}",
                    d.branches.len(),
                    d.probability_total
                ));
            }
            if report.measurements != 2 || report.classical_bits != 1 {
                return Err(format!(
                    "n = {n}: counted {} measurements, {} bits",
                    report.measurements, report.classical_bits
                ));
            }
            worst = worst.min(d.min_branch_fidelity);
        }
        let axis = sim.corrections().unwrap().receiver_axis;
        if 1.0 - worst > 1e-8 {
            return Err(format!("n = {n}: min branch fidelity {worst}"));
        }
        details.push(format!(
            "n={n} axis {axis} min branch fidelity 1 - {:.1e}",
            1.0 - worst
        ));
    }
    Ok(details.join(", "))
}

fn algebra_suites() -> Outcome {
    let two_i = Complex64::new(0.0, 2.0);
    for frame in [LogicalFrame::sender(6), LogicalFrame::receiver(6)] {
        let ops = logical_operators(&frame);
        let [lx, ly, lz] = ops.logical();
        for (a, b, c) in [(lx, ly, lz), (ly, lz, lx), (lz, lx, ly)] {
            if frobenius_distance(&commutator(a, b), &(c * two_i)) > 1e-14 {
                return Err(format!("{:?} frame commutator", frame.role));
            }
        }
        for l in [lx, ly, lz] {
            if frobenius_distance(&(l * l), &ops.p) > 1e-14 {
                return Err(format!("{:?} frame square", frame.role));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let [_, _, z] = spin();
    let zz = kron(&z, &z);
    let mut worst_round: f64 = 0.0;
    let mut worst_zz: f64 = 0.0;
    for k in 0..100 {
        let mut r = random_bloch(&mut rng);
        if k % 2 == 1 {
            let shrink: f64 = rng.random();
            r = BlochVector::new(r.x * shrink, r.y * shrink, r.z * shrink);
        }
        let rho = encode(&r).map_err(|e| e.to_string())?;
        let back = decode(&rho, &LogicalFrame::sender(2), DEFAULT_LEAKAGE_TOL)
            .map_err(|e| e.to_string())?;
        for (a, b) in back.to_array().iter().zip(r.to_array()) {
            worst_round = worst_round.max((a - b).abs());
        }
        worst_zz = worst_zz.max((expectation(&rho, &embed(&zz, &[1, 2], 2)) + 0.25).abs());
    }
    ensure(
        worst_round < 1e-12 && worst_zz < 1e-12,
        format!("frames ok; round trip {worst_round:.1e}; |Tr ρ Z1Z2 + 1/4| {worst_zz:.1e}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (
            "code transfer is perfect for any wire, n = 4..10",
            central_claim,
        ),
        ("fidelity peaks at t = pi/J", transfer_time_peak),
        ("mirror relations, n = 3..8", || {
            mirror_relations(3..=8, false)
        }),
        ("sender frame evolves to receiver frame, n = 4..8", || {
            mirror_relations(4..=8, true)
        }),
        (
            "symbolic and matrix commutators agree",
            symbolic_numeric_equivalence,
        ),
        (
            "shifted copies and the four-step Z1 Z2 shift",
            shift_properties,
        ),
        ("spectrum parity matching, n = 2..20", spmc),
        ("negative controls", negative_controls),
        ("measurement-assisted transfer", difranco),
        ("code algebra, round trip, Z1 Z2 constraint", algebra_suites),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
