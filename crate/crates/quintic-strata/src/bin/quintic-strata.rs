//! Command line front end: classify matrix files, compute cohomology,
//! dualize, sample strata, audit dimensions, cross-check the King oracle.
//!
//! Every command prints one JSON report on standard output.  Exit codes:
//! 0 success, 1 domain error (for instance a non-injective matrix on a
//! command that needs the cokernel), 2 usage or parse error.

use std::process::ExitCode;

use quintic_strata::cohomology;
use quintic_strata::crosscheck;
use quintic_strata::doc::{self, MatrixDocument};
use quintic_strata::error::Error;
use quintic_strata::gallery::{self, SampleRequest};
use quintic_strata::report;
use quintic_strata::scalar::Field;
use quintic_strata::strata::{self, ModuliSpaceId, StratumLabel, SubLabel};

const USAGE: &str = "usage: quintic-strata <command> [flags]

commands:
  classify FILE [--field q|fp:P] [--space M(5,C)]
  cohom FILE --twists M..N [--field q|fp:P]
  det FILE [--field q|fp:P]
  dualize FILE --twist K [--field q|fp:P]
  sample --space M(5,C) --stratum L [--sublabel S] --seed N [--field q|fp:P] [--bound B]
  audit [--space M(5,C)] [--samples N]
  oracle-compare --space M(5,C) --stratum L --trials N --prime P [--seed N]

files use the grammar:
  space M(5,3)
  source O(-2)^2 O(-1)
  target O^3
  matrix
  [ x*y , x^2 , 0 ]
  [ x*z , 0 , x ]
  [ 0 , -x*z , y ]
";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match run(&args) {
        Ok(code) => code,
        Err(e) => {
            let (code, kind) = match &e {
                Error::Parse { .. } => (2u8, "parse"),
                Error::Other(msg) if msg.starts_with("usage") => (2, "usage"),
                _ => (1, "domain"),
            };
            println!(
                "{{\"error\":\"{}\",\"kind\":\"{kind}\",\"warnings\":[]}}",
                report::escape(&e.to_string())
            );
            ExitCode::from(code)
        }
    }
}

struct Flags {
    positional: Vec<String>,
    named: Vec<(String, String)>,
}

impl Flags {
    fn parse(args: &[String]) -> Result<Flags, Error> {
        let mut positional = Vec::new();
        let mut named = Vec::new();
        let mut i = 0;
        while i < args.len() {
            let a = &args[i];
            if let Some(name) = a.strip_prefix("--") {
                let value = args
                    .get(i + 1)
                    .cloned()
                    .ok_or_else(|| Error::Other(format!("usage: flag --{name} needs a value")))?;
                named.push((name.to_string(), value));
                i += 2;
            } else {
                positional.push(a.clone());
                i += 1;
            }
        }
        Ok(Flags { positional, named })
    }

    fn get(&self, name: &str) -> Option<&str> {
        self.named.iter().rev().find(|(n, _)| n == name).map(|(_, v)| v.as_str())
    }
}

fn parse_field(flags: &Flags) -> Result<Field, Error> {
    match flags.get("field") {
        None | Some("q") => Ok(Field::Q),
        Some(spec) => {
            let p = spec
                .strip_prefix("fp:")
                .and_then(|s| s.parse::<u64>().ok())
                .ok_or_else(|| Error::Other(format!("usage: bad --field {spec}; use q or fp:P")))?;
            Field::check_modulus(p)
        }
    }
}

fn parse_space(text: &str) -> Result<ModuliSpaceId, Error> {
    let chi = text
        .strip_prefix("M(5,")
        .and_then(|t| t.strip_suffix(')'))
        .and_then(|t| t.parse::<i64>().ok())
        .ok_or_else(|| Error::Other(format!("usage: bad space {text}; expected M(5,C)")))?;
    ModuliSpaceId::new(chi)
}

fn parse_label(text: &str) -> Result<StratumLabel, Error> {
    match text {
        "X0" => Ok(StratumLabel::X0),
        "X1" => Ok(StratumLabel::X1),
        "X2" => Ok(StratumLabel::X2),
        "X3" => Ok(StratumLabel::X3),
        _ => Err(Error::Other(format!("usage: bad stratum {text}; expected X0..X3"))),
    }
}

fn parse_sublabel(text: &str) -> Result<SubLabel, Error> {
    for s in [
        SubLabel::X0Generic,
        SubLabel::X01,
        SubLabel::X02,
        SubLabel::X10,
        SubLabel::X11,
        SubLabel::X20,
        SubLabel::X21,
        SubLabel::Stable,
        SubLabel::StrictlySemistable,
    ] {
        if s.as_str() == text {
            return Ok(s);
        }
    }
    Err(Error::Other(format!("usage: unknown sublabel {text}")))
}

fn load_document(flags: &Flags) -> Result<(MatrixDocument, Field), Error> {
    let path = flags
        .positional
        .get(1)
        .ok_or_else(|| Error::Other("usage: missing FILE argument".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Other(format!("usage: cannot read {path}: {e}")))?;
    let field = parse_field(flags)?;
    Ok((doc::parse(&text, field)?, field))
}

fn run(args: &[String]) -> Result<ExitCode, Error> {
    let flags = Flags::parse(args)?;
    let Some(command) = flags.positional.first() else {
        print!("{USAGE}");
        return Ok(ExitCode::from(2));
    };
    match command.as_str() {
        "classify" => {
            let (document, _) = load_document(&flags)?;
            let space = match flags.get("space") {
                Some(s) => parse_space(s)?,
                None => match document.space {
                    Some(chi) => ModuliSpaceId::new(chi)?,
                    None => {
                        return Err(Error::Other(
                            "usage: no space line in the file; pass --space M(5,C)".into(),
                        ))
                    }
                },
            };
            let phi = document.to_morphism()?;
            let rep = strata::classify(space, &phi)?;
            println!("{}", report::classify_json(&rep));
            let ok = rep.label.index().is_some();
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        "cohom" => {
            let (document, _) = load_document(&flags)?;
            let range = flags
                .get("twists")
                .ok_or_else(|| Error::Other("usage: cohom needs --twists M..N".into()))?;
            let (lo, hi) = range
                .split_once("..")
                .and_then(|(a, b)| Some((a.parse::<i64>().ok()?, b.parse::<i64>().ok()?)))
                .ok_or_else(|| Error::Other(format!("usage: bad twist range {range}")))?;
            if lo > hi {
                return Err(Error::Other(format!("usage: empty twist range {range}")));
            }
            let phi = document.to_morphism()?;
            let hilbert = phi.hilbert()?;
            let mut h0 = Vec::new();
            let mut h1 = Vec::new();
            for m in lo..=hi {
                h0.push((m, cohomology::h0_twist(&phi, m)?));
                h1.push((m, cohomology::h1_twist(&phi, m)?));
            }
            println!("{}", report::cohom_json(&h0, &h1, &hilbert));
            Ok(ExitCode::SUCCESS)
        }
        "det" => {
            let (document, _) = load_document(&flags)?;
            let phi = document.to_morphism()?;
            let det = phi.determinant()?;
            println!("{}", report::det_json(&det));
            Ok(ExitCode::SUCCESS)
        }
        "dualize" => {
            let (document, _) = load_document(&flags)?;
            let k = flags
                .get("twist")
                .ok_or_else(|| Error::Other("usage: dualize needs --twist K".into()))?
                .parse::<i64>()
                .map_err(|_| Error::Other("usage: bad --twist value".into()))?;
            let phi = document.to_morphism()?;
            let dual = phi.dual_resolution(k)?;
            let dual_chi = document.space.map(|chi| -chi + 5 * k);
            let dual_space = dual_chi.map(|chi| format!("M(5,{chi})"));
            let out = MatrixDocument::from_morphism(dual_chi, &dual);
            println!(
                "{}",
                report::dualize_json(dual_space.as_deref(), &doc::print(&out), &dual.hilbert()?)
            );
            Ok(ExitCode::SUCCESS)
        }
        "sample" => {
            let space = parse_space(
                flags
                    .get("space")
                    .ok_or_else(|| Error::Other("usage: sample needs --space".into()))?,
            )?;
            let label = parse_label(
                flags
                    .get("stratum")
                    .ok_or_else(|| Error::Other("usage: sample needs --stratum".into()))?,
            )?;
            let sublabel = flags.get("sublabel").map(parse_sublabel).transpose()?;
            let seed = flags
                .get("seed")
                .ok_or_else(|| Error::Other("usage: sample needs --seed".into()))?
                .parse::<u64>()
                .map_err(|_| Error::Other("usage: bad --seed value".into()))?;
            let field = parse_field(&flags)?;
            let bound = match flags.get("bound") {
                Some(b) => b
                    .parse::<u64>()
                    .map_err(|_| Error::Other("usage: bad --bound value".into()))?,
                None => 10,
            };
            let req = SampleRequest {
                space,
                label,
                sublabel,
                seed,
                field,
                coefficient_bound: bound,
                retry_cap: 500,
            };
            let phi = gallery::sample_stratum(&req)?;
            let rep = strata::classify(space, &phi)?;
            let document = doc::print(&MatrixDocument::from_morphism(Some(space.chi), &phi));
            println!("{}", report::sample_json(&rep, &document, seed));
            Ok(ExitCode::SUCCESS)
        }
        "audit" => {
            let samples = match flags.get("samples") {
                Some(s) => s
                    .parse::<usize>()
                    .map_err(|_| Error::Other("usage: bad --samples value".into()))?,
                None => 20,
            };
            let (rows, all_ok) = match flags.get("space") {
                Some(s) => {
                    let space = parse_space(s)?;
                    if !space.is_primal() {
                        return Err(Error::Other(format!(
                            "audit covers the primal spaces; {space} is reached by duality"
                        )));
                    }
                    let mut rows = Vec::new();
                    let mut ok = true;
                    for index in 0..4 {
                        let a = strata::dimension_audit(space, index, samples)?;
                        ok &= a.ok;
                        rows.push(a);
                    }
                    (rows, ok)
                }
                None => strata::audit_all(samples)?,
            };
            println!("{}", report::audit_json(&rows, all_ok));
            Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        "oracle-compare" => {
            let space = parse_space(
                flags
                    .get("space")
                    .ok_or_else(|| Error::Other("usage: oracle-compare needs --space".into()))?,
            )?;
            let label = parse_label(
                flags
                    .get("stratum")
                    .ok_or_else(|| Error::Other("usage: oracle-compare needs --stratum".into()))?,
            )?;
            let trials = flags
                .get("trials")
                .ok_or_else(|| Error::Other("usage: oracle-compare needs --trials".into()))?
                .parse::<usize>()
                .map_err(|_| Error::Other("usage: bad --trials value".into()))?;
            let prime = match flags.get("prime") {
                Some(p) => {
                    let p = p
                        .parse::<u64>()
                        .map_err(|_| Error::Other("usage: bad --prime value".into()))?;
                    match Field::check_modulus(p)? {
                        Field::Fp(p) => p,
                        Field::Q => unreachable!(),
                    }
                }
                None => 5,
            };
            let seed = match flags.get("seed") {
                Some(s) => s
                    .parse::<u64>()
                    .map_err(|_| Error::Other("usage: bad --seed value".into()))?,
                None => 0,
            };
            let out = crosscheck::oracle_compare(space, label, trials, prime, seed)?;
            println!(
                "{}",
                report::oracle_compare_json(
                    &space.to_string(),
                    label.as_str(),
                    prime,
                    out.trials,
                    out.agreements,
                    &out.disagreements,
                )
            );
            Ok(if out.disagreements.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        other => Err(Error::Other(format!("usage: unknown command {other}\n{USAGE}"))),
    }
}
