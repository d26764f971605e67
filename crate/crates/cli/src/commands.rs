//! Subcommand implementations.

use std::collections::BTreeMap;
use std::path::Path;

use iqp_matroid::clifford::{self, SupportCase};
use iqp_matroid::marginals::{self, Marginal, Projector};
use iqp_matroid::{codes, oracle, tutte, xprogram, Angle, BinaryMatrix, BitVector, Complex64, XProgram};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::input::{dump_matrix, parse_angle, parse_bits, parse_matrix_file};
use crate::report::{self, bit_list, bits, complex, dyadic, gaussian, num};
use crate::{Cli, CliError, Command, MarginalPath, MaskArgs, MatrixArg, ProgramArgs};

/// Largest support listed point by point in the `clifford` report.
const MAX_LISTED_SUPPORT: usize = 16;
/// Largest `l` accepted by `verify`.
const MAX_VERIFY_QUBITS: usize = 12;

fn load(arg: &MatrixArg) -> Result<BinaryMatrix, CliError> {
    parse_matrix_file(&arg.matrix)
}

fn load_program(args: &ProgramArgs) -> Result<(XProgram, Value), CliError> {
    let m = load(&args.matrix)?;
    let theta = parse_angle(&args.theta)?;
    let echo = json!({
        "matrix": args.matrix.matrix.display().to_string(),
        "n": m.nrows(),
        "l": m.ncols(),
        "theta": theta.to_string(),
    });
    Ok((XProgram::new(m, theta), echo))
}

fn matrix_echo(arg: &MatrixArg, m: &BinaryMatrix) -> Value {
    json!({ "matrix": arg.matrix.display().to_string(), "n": m.nrows(), "l": m.ncols() })
}

fn with(mut echo: Value, key: &str, value: Value) -> Value {
    echo.as_object_mut().expect("echo is an object").insert(key.into(), value);
    echo
}

fn matrix_of(command: &Command) -> &MatrixArg {
    match command {
        Command::Wenum(m) | Command::Clifford(m) => m,
        Command::Tutte { matrix, .. } => matrix,
        Command::Alpha(p) | Command::Dist(p) | Command::Reduce(p) | Command::Verify(p) => &p.matrix,
        Command::Amplitude { program, .. }
        | Command::Prob { program, .. }
        | Command::Beta { program, .. }
        | Command::Marginal { program, .. }
        | Command::Sample { program, .. } => &program.matrix,
    }
}

pub fn execute(cli: &Cli) -> Result<(i32, String), CliError> {
    if cli.dump {
        return Ok((0, dump_matrix(&load(matrix_of(&cli.command))?)));
    }
    let (code, value) = match &cli.command {
        Command::Wenum(arg) => (0, wenum(arg)?),
        Command::Tutte { matrix, at } => (0, tutte_cmd(matrix, at.as_deref())?),
        Command::Alpha(args) => (0, alpha(args)?),
        Command::Amplitude { program, x } => (0, amplitude(program, x)?),
        Command::Prob { program, x } => (0, prob(program, x)?),
        Command::Beta { program, s } => (0, beta(program, s)?),
        Command::Dist(args) => (0, dist(args)?),
        Command::Clifford(arg) => (0, clifford_cmd(arg)?),
        Command::Marginal { program, mask, path, column_bound } => {
            (0, marginal(program, mask, *path, *column_bound)?)
        }
        Command::Sample { program, mask, samples, seed } => (0, sample(program, mask, *samples, *seed)?),
        Command::Reduce(args) => (0, reduce(args)?),
        Command::Verify(args) => verify(args)?,
    };
    Ok((code, report::render(&value, cli.output)))
}

fn wenum(arg: &MatrixArg) -> Result<Value, CliError> {
    let m = load(arg)?;
    let w = codes::weight_enumerator(&m)?;
    let last = w.weights.iter().rposition(|&c| c != 0).unwrap_or(0);
    Ok(json!({
        "command": "wenum",
        "inputs": matrix_echo(arg, &m),
        "length": w.length,
        "rank": w.rank,
        "weights": w.weights,
        "coefficients": w.weights[..=last],
        "exact": true,
    }))
}

fn parse_point(text: &str) -> Result<(Complex64, Complex64), CliError> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::BadArgument(format!("--at {text:?}: expected four numbers a,b,c,d")))?;
    match parts[..] {
        [a, b, c, d] => Ok((Complex64::new(a, b), Complex64::new(c, d))),
        [a, c] => Ok((Complex64::new(a, 0.0), Complex64::new(c, 0.0))),
        _ => Err(CliError::BadArgument(format!("--at {text:?}: expected four numbers a,b,c,d"))),
    }
}

fn tutte_cmd(arg: &MatrixArg, at: Option<&str>) -> Result<Value, CliError> {
    let m = load(arg)?;
    match at {
        None => {
            let t = tutte::tutte_subset_sum(&m)?;
            let terms: Vec<Value> = t.terms().map(|((i, j), c)| json!([i, j, c])).collect();
            Ok(json!({
                "command": "tutte",
                "inputs": matrix_echo(arg, &m),
                "polynomial": t.to_string(),
                "terms": terms,
                "exact": true,
            }))
        }
        Some(text) => {
            let (x, y) = parse_point(text)?;
            let v = tutte::tutte_eval(&m, x, y)?;
            Ok(json!({
                "command": "tutte",
                "inputs": with(matrix_echo(arg, &m), "at", json!({ "x": complex(x), "y": complex(y) })),
                "path": "deletion-contraction",
                "value": complex(v),
                "exact": false,
            }))
        }
    }
}

fn alpha(args: &ProgramArgs) -> Result<Value, CliError> {
    let (prog, echo) = load_program(args)?;
    let mut out = json!({ "command": "alpha", "inputs": echo });
    let obj = out.as_object_mut().unwrap();
    if let Some(k) = prog.angle().eighth_turns() {
        let a = clifford::alpha_exact(prog.matrix(), k)?;
        let z = a.to_complex();
        obj.insert("re".into(), num(z.re));
        obj.insert("im".into(), num(z.im));
        obj.insert("exact".into(), json!(true));
        obj.insert("path".into(), json!("gauss-sum"));
        obj.insert(
            "exact_value".into(),
            json!({
                "omega_power": a.eighths,
                "gaussian": gaussian(a.value),
                "log2_denominator": a.log2_den,
            }),
        );
    } else {
        let z = codes::alpha(prog.matrix(), prog.angle())?;
        obj.insert("re".into(), num(z.re));
        obj.insert("im".into(), num(z.im));
        obj.insert("exact".into(), json!(false));
        obj.insert("path".into(), json!("weight-enumerator"));
    }
    Ok(out)
}

fn amplitude(args: &ProgramArgs, x: &str) -> Result<Value, CliError> {
    let (prog, echo) = load_program(args)?;
    let x = parse_bits(x, prog.qubits(), "x")?;
    let a = xprogram::amplitude(&prog, &x)?;
    Ok(json!({
        "command": "amplitude",
        "inputs": with(echo, "x", bits(&x)),
        "re": num(a.re),
        "im": num(a.im),
        "exact": false,
    }))
}

fn prob(args: &ProgramArgs, x: &str) -> Result<Value, CliError> {
    let (prog, echo) = load_program(args)?;
    let x = parse_bits(x, prog.qubits(), "x")?;
    if prog.angle().eighth_turns() == Some(1) {
        let p = clifford::clifford_probability(prog.matrix(), &x);
        return Ok(json!({
            "command": "prob",
            "inputs": with(echo, "x", bits(&x)),
            "probability": num(p.to_f64()),
            "dyadic": dyadic(p),
            "path": "clifford",
            "exact": true,
        }));
    }
    let p = xprogram::probability(&prog, &x)?;
    Ok(json!({
        "command": "prob",
        "inputs": with(echo, "x", bits(&x)),
        "probability": num(p),
        "path": "amplitude",
        "exact": false,
    }))
}

fn beta(args: &ProgramArgs, s: &str) -> Result<Value, CliError> {
    let (prog, echo) = load_program(args)?;
    let s = parse_bits(s, prog.qubits(), "s")?;
    let b = xprogram::beta(&prog, &s)?;
    Ok(json!({
        "command": "beta",
        "inputs": with(echo, "s", bits(&s)),
        "beta": num(b),
        "exact": false,
    }))
}

fn dist(args: &ProgramArgs) -> Result<Value, CliError> {
    let (prog, echo) = load_program(args)?;
    let d = xprogram::full_distribution(&prog)?;
    let l = d.bits();
    let entries: Vec<Value> = d
        .probabilities()
        .iter()
        .enumerate()
        .map(|(i, &p)| json!({ "x": BitVector::from_u64(l, i as u64).to_string(), "p": num(p) }))
        .collect();
    Ok(json!({
        "command": "dist",
        "inputs": echo,
        "path": "fourier",
        "distribution": entries,
        "total": num(d.total()),
        "exact": false,
    }))
}

fn clifford_cmd(arg: &MatrixArg) -> Result<Value, CliError> {
    let m = load(arg)?;
    let s = clifford::clifford_support(&m);
    let case = match s.case {
        SupportCase::One => "One",
        SupportCase::Two => "Two",
    };
    let l = m.ncols();
    let mut out = json!({
        "command": "clifford",
        "inputs": with(matrix_echo(arg, &m), "theta", json!("1/4")),
        "case": case,
        "v_basis": bit_list(&s.v_basis),
        "u_basis": bit_list(&s.u_basis),
        "dim": s.dim,
        "offset": bits(&s.offset),
        "directions": bit_list(&s.directions),
        "probability_on_support": dyadic(clifford::Dyadic::inverse_power_of_two(s.dim as u32)),
        "p_zero": dyadic(s.probability(&BitVector::zeros(l))),
        "exact": true,
    });
    if s.dim <= MAX_LISTED_SUPPORT {
        let mut points: Vec<BitVector> = (0..1u64 << s.dim)
            .map(|c| {
                let mut x = s.offset.clone();
                for (i, d) in s.directions.iter().enumerate() {
                    if c >> i & 1 == 1 {
                        x.xor_assign(d);
                    }
                }
                x
            })
            .collect();
        points.sort();
        out.as_object_mut().unwrap().insert("support".into(), bit_list(&points));
    }
    Ok(out)
}

fn load_projector(mask: &MaskArgs, l: usize) -> Result<(Projector, Value), CliError> {
    match (&mask.mask, &mask.projector) {
        (Some(text), None) => {
            let keep = parse_bits(text, l, "mask")?;
            let bits: Vec<usize> = keep.ones_iter().collect();
            Ok((Projector::mask(l, &bits)?, json!({ "mask": text })))
        }
        (None, Some(path)) => {
            let m = parse_matrix_file(path)?;
            if m.ncols() != l || m.nrows() != l {
                return Err(CliError::BadArgument(format!(
                    "projector must be {l}x{l}, found {}x{}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            Ok((marginals::make_projector(m)?, json!({ "projector": path_string(path) })))
        }
        _ => Err(CliError::BadArgument("give exactly one of --mask or --projector".into())),
    }
}

fn path_string(p: &Path) -> String {
    p.display().to_string()
}

fn choose_path(prog: &XProgram, m: &Projector, bound: usize) -> MarginalPath {
    if prog.angle() == Angle::pi_fraction(1, 8) {
        return MarginalPath::Pi8;
    }
    if prog.matrix().rows().iter().all(|r| r.weight() <= 2) && m.support_bits() <= 2 {
        return MarginalPath::Graphic;
    }
    if bound * m.support_bits() <= 20 {
        return MarginalPath::Sparse;
    }
    MarginalPath::Generic
}

fn path_name(p: MarginalPath) -> &'static str {
    match p {
        MarginalPath::Auto => "auto",
        MarginalPath::Generic => "generic",
        MarginalPath::Pi8 => "pi8",
        MarginalPath::Sparse => "sparse",
        MarginalPath::Graphic => "graphic",
    }
}

fn marginal_report(d: &Marginal) -> Value {
    let entries: Vec<Value> = (0..d.probabilities.len())
        .map(|i| json!({ "x": d.point(i).to_string(), "p": num(d.probabilities[i]) }))
        .collect();
    json!({
        "range_basis": bit_list(&d.range_basis),
        "distribution": entries,
        "drift": num(d.drift),
    })
}

fn marginal(
    args: &ProgramArgs,
    mask: &MaskArgs,
    path: MarginalPath,
    column_bound: Option<usize>,
) -> Result<Value, CliError> {
    let (prog, echo) = load_program(args)?;
    let (m, mecho) = load_projector(mask, prog.qubits())?;
    let bound = column_bound
        .unwrap_or_else(|| prog.matrix().column_weights().into_iter().max().unwrap_or(0));
    let chosen = match path {
        MarginalPath::Auto => choose_path(&prog, &m, bound),
        p => p,
    };
    let d = match chosen {
        MarginalPath::Pi8 => {
            if prog.angle() != Angle::pi_fraction(1, 8) {
                return Err(CliError::BadArgument("the pi8 path needs theta = 1/8".into()));
            }
            marginals::marginal_pi8(prog.matrix(), &m)?
        }
        MarginalPath::Sparse => marginals::marginal_sparse(&prog, &m, bound)?,
        MarginalPath::Graphic => marginals::marginal_graphic(&prog, &m)?,
        _ => marginals::marginal_distribution(&prog, &m)?,
    };
    let mut out = json!({
        "command": "marginal",
        "inputs": with(with(echo, "projector", mecho), "column_bound", json!(bound)),
        "path": path_name(chosen),
        "range_dim": m.range_dim(),
        "support_bits": m.support_bits(),
        "exact": false,
    });
    if let Value::Object(extra) = marginal_report(&d) {
        out.as_object_mut().unwrap().extend(extra);
    }
    Ok(out)
}

fn sample(args: &ProgramArgs, mask: &MaskArgs, count: usize, seed: u64) -> Result<Value, CliError> {
    let (prog, echo) = load_program(args)?;
    let (m, mecho) = load_projector(mask, prog.qubits())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(count);
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for _ in 0..count {
        let x = marginals::sample_marginal(&prog, &m, &mut rng)?.to_string();
        *counts.entry(x.clone()).or_insert(0) += 1;
        samples.push(x);
    }
    Ok(json!({
        "command": "sample",
        "inputs": with(with(with(echo, "projector", mecho), "samples", json!(count)), "seed", json!(seed)),
        "path": "conditional",
        "samples": samples,
        "counts": counts,
        "exact": false,
    }))
}

fn reduce(args: &ProgramArgs) -> Result<Value, CliError> {
    let (prog, echo) = load_program(args)?;
    let red = xprogram::reduce_rows(&prog)?;
    let terms: Vec<Value> = red
        .terms
        .iter()
        .map(|(r, mult)| json!({ "row": r.to_string(), "multiplicity": mult }))
        .collect();
    Ok(json!({
        "command": "reduce",
        "inputs": echo,
        "degree": red.degree,
        "distinct_rows": red.terms.len(),
        "rows": red.row_count(),
        "terms": terms,
        "phase_units": red.phase_units,
        "phase_modulus": 2u64 << red.degree,
        "global_phase": complex(red.global_phase()),
        "exact": true,
    }))
}

struct Check {
    name: &'static str,
    error: f64,
    tolerance: f64,
}

fn max_err<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

fn verify(args: &ProgramArgs) -> Result<(i32, Value), CliError> {
    let (prog, echo) = load_program(args)?;
    let l = prog.qubits();
    if l > MAX_VERIFY_QUBITS {
        return Err(iqp_matroid::Error::TooManyQubits { qubits: l, limit: MAX_VERIFY_QUBITS }.into());
    }
    let p = prog.matrix();
    let psi = oracle::statevector(&prog)?;
    let od = oracle::oracle_distribution(&prog)?;
    let points: Vec<BitVector> = (0..1u64 << l).map(|x| BitVector::from_u64(l, x)).collect();
    let mut checks = Vec::new();

    let mut e = 0.0f64;
    for x in &points {
        e = e.max((xprogram::amplitude(&prog, x)? - psi.amplitude(x)).norm());
    }
    checks.push(Check { name: "amplitudes", error: e, tolerance: 1e-9 });

    let mut e = 0.0f64;
    for s in &points {
        e = e.max((xprogram::beta(&prog, s)? - oracle::oracle_beta(&prog, s)?).abs());
    }
    checks.push(Check { name: "betas", error: e, tolerance: 1e-9 });

    let fd = xprogram::full_distribution(&prog)?;
    checks.push(Check { name: "distribution", error: fd.max_abs_diff(&od), tolerance: 1e-9 });

    let a = codes::alpha(p, prog.angle())?;
    let g = tutte::greene_alpha(p, prog.angle())?;
    checks.push(Check { name: "greene", error: (a - g).norm() / a.norm().max(1.0), tolerance: 1e-8 });

    let t = if p.nrows() <= oracle::MAX_ROWS {
        let truth = oracle::oracle_tutte(p)?;
        let fast = tutte::tutte_subset_sum(p)?;
        let z = Complex64::new(0.7, -0.3);
        let w = Complex64::new(-0.4, 1.1);
        let d = (tutte::tutte_eval(p, z, w)? - truth.eval(z, w)).norm() / truth.eval(z, w).norm().max(1.0);
        if fast == truth { d } else { f64::INFINITY }
    } else {
        0.0
    };
    checks.push(Check { name: "tutte", error: t, tolerance: 1e-9 });

    let keep: Vec<usize> = (0..l.min(3)).collect();
    let m = Projector::mask(l, &keep)?;
    let md = marginals::marginal_distribution(&prog, &m)?;
    let om = oracle::oracle_marginal(&prog, &m)?;
    let e = max_err((0..md.probabilities.len()).map(|i| (md.probabilities[i] - om.get(md.point(i).to_u64() as usize)).abs()));
    checks.push(Check { name: "marginal", error: e, tolerance: 1e-9 });

    let quarter = XProgram::new(p.clone(), Angle::pi_fraction(1, 4));
    let qd = oracle::oracle_distribution(&quarter)?;
    let support = clifford::clifford_support(p);
    let e = max_err(points.iter().map(|x| (support.probability(x).to_f64() - qd.get(x.to_u64() as usize)).abs()));
    checks.push(Check { name: "clifford", error: e, tolerance: 1e-12 });

    let failed = checks.iter().filter(|c| !(c.error <= c.tolerance)).count();
    let list: Vec<Value> = checks
        .iter()
        .map(|c| json!({ "name": c.name, "max_error": num(c.error), "tolerance": c.tolerance, "passed": c.error <= c.tolerance }))
        .collect();
    let summary = if failed == 0 {
        format!("all {} checks passed", checks.len())
    } else {
        format!("{failed} of {} checks failed", checks.len())
    };
    let code = if failed == 0 { 0 } else { 4 };
    Ok((
        code,
        json!({ "command": "verify", "inputs": echo, "checks": list, "summary": summary }),
    ))
}
