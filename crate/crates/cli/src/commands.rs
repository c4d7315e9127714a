use std::fmt::Write;

use serde::Serialize;
use serde_json::{json, Value};
use unialg::commutator::{self, Decided, Mode, Supernilpotence, Witness};
use unialg::lattice::{self, Partition};
use unialg::retract::{self, RetractCertificate, Verdict};
use unialg::{z6, ClosureConfig, FiniteAlgebra};

use crate::input::{load_algebra, parse_congruence, parse_subalgebra};
use crate::{Command, Failure, Format, ModeArg, Outcome};

pub fn run(
    command: &Command,
    config: &ClosureConfig,
    format: Format,
    out: &mut String,
) -> Result<Outcome, Failure> {
    match command {
        Command::Parse { input } => {
            let a = load_algebra(input)?;
            match format {
                Format::Text => out.push_str(&a.serialize()),
                Format::Json => emit(out, &algebra_json(&a)),
            }
            Ok(Outcome::Success)
        }
        Command::Con { input, bound } => {
            let a = load_algebra(input)?;
            let con = lattice::congruence_lattice_with(&a, *bound, config.parallelism)?;
            match format {
                Format::Text => con.iter().for_each(|p| line(out, p)),
                Format::Json => emit(
                    out,
                    &json!({ "algebra": a.name(), "size": a.size(), "congruences": con }),
                ),
            }
            Ok(Outcome::Success)
        }
        Command::Sub { input, bound } => {
            let a = load_algebra(input)?;
            let sub = lattice::all_subuniverses_with(&a, *bound, config.parallelism)?;
            match format {
                Format::Text => sub.iter().for_each(|s| line(out, s)),
                Format::Json => emit(
                    out,
                    &json!({ "algebra": a.name(), "size": a.size(), "subuniverses": sub }),
                ),
            }
            Ok(Outcome::Success)
        }
        Command::Commutator {
            input,
            alpha,
            beta,
            higher,
            theta,
            dim,
            mode,
        } => {
            let a = load_algebra(input)?;
            if *higher {
                higher_commutator(&a, theta, *dim, *mode, config, format, out)
            } else {
                let (Some(alpha), Some(beta)) = (alpha, beta) else {
                    return Err(Failure::input(
                        "commutator needs --alpha and --beta, or --higher",
                    ));
                };
                let alpha = parse_congruence(&a, alpha)?;
                let beta = parse_congruence(&a, beta)?;
                let value = commutator::tc_commutator_with(&a, &alpha, &beta, config)?;
                match format {
                    Format::Text => {
                        let _ = writeln!(out, "alpha: {alpha}\nbeta: {beta}\ncommutator: {value}");
                    }
                    Format::Json => emit(
                        out,
                        &json!({ "alpha": alpha, "beta": beta, "commutator": value }),
                    ),
                }
                Ok(Outcome::Success)
            }
        }
        Command::Supernil { input, cls, theta } => {
            let a = load_algebra(input)?;
            let theta = parse_congruence(&a, theta)?;
            supernil(&a, &theta, *cls, config, format, out)
        }
        Command::Retract {
            input,
            subalgebra,
            cls,
            theta,
            max_cls,
        } => {
            let a = load_algebra(input)?;
            let b = parse_subalgebra(&a, subalgebra)?;
            let cert = match cls {
                Some(cls) => {
                    let theta = match theta {
                        Some(t) => parse_congruence(&a, t)?,
                        None => Partition::one(a.size()),
                    };
                    retract::build_retract(&a, &b, &theta, *cls, config)?
                }
                None => retract::theorem_main(&a, &b, *max_cls, config)?,
            };
            render_certificate(&a, &cert, format, out)?;
            Ok(match cert.verdict {
                Verdict::Valid => Outcome::Success,
                Verdict::Invalid => Outcome::Fails,
                Verdict::Undecided => Outcome::Undecided,
            })
        }
        Command::VerifyPaperExample => {
            let report = z6::verify_theorem_example(config)?;
            match format {
                Format::Text => line(out, &report),
                Format::Json => emit(
                    out,
                    &json!({ "passed": report.passed(), "sections": report.sections }),
                ),
            }
            Ok(if report.passed() {
                Outcome::Success
            } else {
                Outcome::Fails
            })
        }
    }
}

fn higher_commutator(
    a: &FiniteAlgebra,
    theta: &[String],
    dim: Option<usize>,
    mode: ModeArg,
    config: &ClosureConfig,
    format: Format,
    out: &mut String,
) -> Result<Outcome, Failure> {
    let thetas: Vec<Partition> = match (theta, dim) {
        ([single], Some(k)) => vec![parse_congruence(a, single)?; k],
        (_, Some(_)) => return Err(Failure::input("--dim takes exactly one --theta")),
        ([], None) => return Err(Failure::input("--higher needs at least one --theta")),
        (list, None) => list
            .iter()
            .map(|t| parse_congruence(a, t))
            .collect::<Result<_, _>>()?,
    };
    if thetas.len() > commutator::MAX_DIMENSION {
        return Err(Failure::input(format!(
            "dimension {} exceeds {}",
            thetas.len(),
            commutator::MAX_DIMENSION
        )));
    }
    let mode = match mode {
        ModeArg::Exact => Mode::Exact,
        ModeArg::ZeroTest => Mode::ZeroTest,
    };
    let r = commutator::two_term_higher_commutator(a, &thetas, mode, config)?;
    match format {
        Format::Text => {
            let _ = writeln!(out, "dimension: {}", thetas.len());
            for (i, t) in thetas.iter().enumerate() {
                let _ = writeln!(out, "theta{i}: {t}");
            }
            let _ = writeln!(out, "value: {}", r.value);
            let _ = writeln!(out, "decided: {}", kebab(&r.decided));
            let _ = writeln!(out, "cube size: {}", r.cube_size);
            let _ = writeln!(out, "termination: {}", kebab(&r.termination));
            for w in &r.witnesses {
                write_witness(out, "witness", w);
            }
        }
        Format::Json => emit(out, &json!({ "thetas": thetas, "result": r })),
    }
    Ok(match r.decided {
        Decided::UnknownBudget => Outcome::Undecided,
        _ => Outcome::Success,
    })
}

fn supernil(
    a: &FiniteAlgebra,
    theta: &Partition,
    cls: usize,
    config: &ClosureConfig,
    format: Format,
    out: &mut String,
) -> Result<Outcome, Failure> {
    let answer = commutator::is_supernilpotent(a, theta, cls, config)?;
    let check = match &answer {
        Supernilpotence::No(w) => Some(commutator::verify_witness(
            a,
            &vec![theta.clone(); cls + 1],
            w,
            config,
        )?),
        _ => None,
    };
    match format {
        Format::Text => {
            let _ = writeln!(out, "theta: {theta}\ncls: {cls}");
            match &answer {
                Supernilpotence::Yes => line(out, "answer: YES"),
                Supernilpotence::Unknown => line(out, "answer: UNDECIDED"),
                Supernilpotence::No(w) => {
                    line(out, "answer: NO");
                    write_witness(out, "witness", w);
                }
            }
            if let Some(c) = check {
                let _ = writeln!(
                    out,
                    "witness verified: {} (members {}, prefix equal {}, last distinct {})",
                    c.passed(),
                    opt(c.members),
                    c.prefix_equal,
                    c.last_distinct
                );
            }
        }
        Format::Json => emit(
            out,
            &json!({ "theta": theta, "cls": cls, "result": answer, "verification": check }),
        ),
    }
    Ok(match answer {
        Supernilpotence::Yes => Outcome::Success,
        Supernilpotence::No(_) => Outcome::Fails,
        Supernilpotence::Unknown => Outcome::Undecided,
    })
}

fn render_certificate(
    a: &FiniteAlgebra,
    cert: &RetractCertificate,
    format: Format,
    out: &mut String,
) -> Result<(), Failure> {
    let recheck = match cert.verdict {
        Verdict::Valid => Some(cert.recheck(a)?),
        _ => None,
    };
    match format {
        Format::Json => emit(out, &json!({ "certificate": cert, "recheck": recheck })),
        Format::Text => {
            let _ = writeln!(out, "verdict: {}", kebab(&cert.verdict));
            for ev in &cert.supernilpotence {
                let answer = match ev.answer {
                    Supernilpotence::Yes => "yes",
                    Supernilpotence::No(_) => "no",
                    Supernilpotence::Unknown => "undecided",
                };
                let _ = writeln!(out, "supernilpotent at cls {}: {answer}", ev.cls);
            }
            let _ = writeln!(out, "cls: {}\ndim: {}", cert.cls, cert.dim);
            let _ = writeln!(out, "subalgebra: {}", cert.subalgebra);
            if cert.verdict == Verdict::Undecided && cert.termination.is_none() {
                return Ok(());
            }
            let _ = writeln!(
                out,
                "gamma size: {}\nmu size: {}",
                cert.gamma_size, cert.mu_size
            );
            let _ = writeln!(out, "functional: {}", opt(cert.functional));
            if let Some(w) = &cert.functional_witness {
                write_witness(out, "functional witness", w);
            }
            let image = cert
                .image_of_last
                .as_ref()
                .map_or("n/a".to_string(), |s| s.to_string());
            let _ = writeln!(out, "image of last: {image}");
            let _ = writeln!(out, "D size: {}", cert.d_size);
            let _ = writeln!(out, "subdirect: {}", opt(cert.subdirect));
            let _ = writeln!(
                out,
                "retraction verified: {}",
                opt(cert.retraction_verified)
            );
            let _ = writeln!(out, "homomorphism: {}", opt(cert.homomorphism));
            if let Some(t) = cert.termination {
                let _ = writeln!(out, "termination: {}", kebab(&t));
            }
            if let Some(r) = recheck {
                let _ = writeln!(
                    out,
                    "recheck: {} (functional {}, image {}, subdirect {}, retraction {}, homomorphism {})",
                    if r.passed() { "PASS" } else { "FAIL" },
                    r.functional,
                    r.image_is_b,
                    r.subdirect,
                    r.retraction,
                    opt(r.homomorphism)
                );
            }
        }
    }
    Ok(())
}

fn algebra_json(a: &FiniteAlgebra) -> Value {
    let ops: Vec<Value> = a
        .ops()
        .iter()
        .map(|op| json!({ "symbol": op.name(), "arity": op.arity(), "table": op.table() }))
        .collect();
    json!({ "name": a.name(), "size": a.size(), "operations": ops })
}

fn write_witness(out: &mut String, label: &str, w: &Witness) {
    let join = |t: &[u8]| {
        t.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let _ = writeln!(out, "{label} s: {}", join(&w.s));
    let _ = writeln!(out, "{label} t: {}", join(&w.t));
}

fn line(out: &mut String, item: impl std::fmt::Display) {
    let _ = writeln!(out, "{item}");
}

fn emit(out: &mut String, value: &Value) {
    out.push_str(&serde_json::to_string_pretty(value).expect("json values serialize"));
    out.push('\n');
}

/// The serde name of a unit variant.
fn kebab<T: Serialize>(value: &T) -> String {
    match serde_json::to_value(value) {
        Ok(Value::String(s)) => s,
        other => format!("{other:?}"),
    }
}

fn opt(value: Option<bool>) -> String {
    value.map_or("n/a".to_string(), |b| b.to_string())
}
