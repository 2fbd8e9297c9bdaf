//! Deterministic JSON reports.
//!
//! Keys are emitted in fixed alphabetical order and all content is derived
//! from exact data, so a report is byte-identical across runs for the same
//! input and seed.  Rational values are emitted as strings "a/b".

use crate::cohomology::CohomologySignature;
use crate::graded::HilbertData;
use crate::strata::{DimensionAudit, StratumReport};

pub fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

fn string(s: &str) -> String {
    format!("\"{}\"", escape(s))
}

fn opt_string(s: Option<String>) -> String {
    match s {
        Some(v) => string(&v),
        None => "null".into(),
    }
}

fn warnings_json(warnings: &[String]) -> String {
    let items: Vec<String> = warnings.iter().map(|w| string(w)).collect();
    format!("[{}]", items.join(","))
}

fn signature_json(sig: &CohomologySignature) -> String {
    format!(
        "{{\"h0_minus1\":{},\"h0_omega\":{},\"h1\":{}}}",
        sig.h0_minus1, sig.h0_omega, sig.h1
    )
}

fn hilbert_json(h: &HilbertData) -> String {
    format!("{{\"euler\":{},\"multiplicity\":{}}}", h.euler, h.multiplicity)
}

fn conditions_json(conditions: &[(String, bool)]) -> String {
    let items: Vec<String> = conditions
        .iter()
        .map(|(name, ok)| format!("[{},{}]", string(name), ok))
        .collect();
    format!("[{}]", items.join(","))
}

/// The classify report: keys conditions, determinant, hilbert, label,
/// signature, space, sublabel, warnings.
pub fn classify_json(rep: &StratumReport) -> String {
    format!(
        "{{\"conditions\":{},\"determinant\":{},\"hilbert\":{},\"label\":{},\"signature\":{},\"space\":{},\"sublabel\":{},\"warnings\":{}}}",
        conditions_json(&rep.conditions),
        opt_string(rep.determinant.as_ref().map(|d| d.to_string())),
        rep.hilbert.as_ref().map(|h| hilbert_json(h)).unwrap_or_else(|| "null".into()),
        string(rep.label.as_str()),
        rep.signature.as_ref().map(signature_json).unwrap_or_else(|| "null".into()),
        string(&rep.space.to_string()),
        opt_string(rep.sublabel.map(|s| s.as_str().to_string())),
        warnings_json(&rep.warnings),
    )
}

/// classify report with the sampled document attached (sample subcommand).
pub fn sample_json(rep: &StratumReport, document: &str, seed: u64) -> String {
    format!(
        "{{\"conditions\":{},\"determinant\":{},\"document\":{},\"hilbert\":{},\"label\":{},\"seed\":{},\"signature\":{},\"space\":{},\"sublabel\":{},\"warnings\":{}}}",
        conditions_json(&rep.conditions),
        opt_string(rep.determinant.as_ref().map(|d| d.to_string())),
        string(document),
        rep.hilbert.as_ref().map(|h| hilbert_json(h)).unwrap_or_else(|| "null".into()),
        string(rep.label.as_str()),
        seed,
        rep.signature.as_ref().map(signature_json).unwrap_or_else(|| "null".into()),
        string(&rep.space.to_string()),
        opt_string(rep.sublabel.map(|s| s.as_str().to_string())),
        warnings_json(&rep.warnings),
    )
}

pub fn cohom_json(h0: &[(i64, usize)], h1: &[(i64, usize)], hilbert: &HilbertData) -> String {
    let fmt = |vals: &[(i64, usize)]| {
        let items: Vec<String> = vals.iter().map(|(m, v)| format!("[{m},{v}]")).collect();
        format!("[{}]", items.join(","))
    };
    format!(
        "{{\"h0\":{},\"h1\":{},\"hilbert\":{},\"warnings\":[]}}",
        fmt(h0),
        fmt(h1),
        hilbert_json(hilbert)
    )
}

pub fn det_json(det: &crate::forms::Form) -> String {
    format!(
        "{{\"degree\":{},\"determinant\":{},\"warnings\":[]}}",
        det.degree(),
        string(&det.to_string())
    )
}

pub fn dualize_json(space: Option<&str>, document: &str, hilbert: &HilbertData) -> String {
    format!(
        "{{\"document\":{},\"hilbert\":{},\"space\":{},\"warnings\":[]}}",
        string(document),
        hilbert_json(hilbert),
        opt_string(space.map(|s| s.to_string())),
    )
}

pub fn audit_json(rows: &[DimensionAudit], all_ok: bool) -> String {
    let items: Vec<String> = rows
        .iter()
        .map(|r| {
            format!(
                "{{\"codim\":{},\"dim_g\":{},\"dim_w\":{},\"label\":{},\"ok\":{},\"space\":{},\"stab_dim\":{},\"stratum_dim\":{}}}",
                r.expected_codim,
                r.dim_g,
                r.dim_w,
                string(r.label.as_str()),
                r.ok,
                string(&r.space.to_string()),
                r.stab_dim,
                r.stratum_dim,
            )
        })
        .collect();
    format!(
        "{{\"all_ok\":{},\"kronecker\":{{\"N(3,2,3)\":{},\"N(3,5,5)\":{}}},\"rows\":[{}],\"warnings\":[]}}",
        all_ok,
        crate::strata::kronecker_moduli_dim(3, 2, 3),
        crate::strata::kronecker_moduli_dim(3, 5, 5),
        items.join(","),
    )
}

pub fn oracle_compare_json(
    space: &str,
    stratum: &str,
    prime: u64,
    trials: usize,
    agreements: usize,
    disagreements: &[String],
) -> String {
    let items: Vec<String> = disagreements.iter().map(|d| string(d)).collect();
    format!(
        "{{\"agreements\":{},\"disagreements\":[{}],\"prime\":{},\"space\":{},\"stratum\":{},\"trials\":{},\"warnings\":[]}}",
        agreements,
        items.join(","),
        prime,
        string(space),
        string(stratum),
        trials,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escaping() {
        assert_eq!(escape("a\"b\\c\nd"), "a\\\"b\\\\c\\nd");
    }

    #[test]
    fn classify_json_shape() {
        let phi = crate::graded::GradedMorphism::new(
            vec![-4],
            vec![1],
            vec![crate::forms::Form::var(crate::scalar::Field::Q, 0).pow(5)],
        )
        .unwrap();
        let rep = crate::strata::classify(crate::strata::ModuliSpaceId::new(0).unwrap(), &phi).unwrap();
        let json = classify_json(&rep);
        assert!(json.starts_with("{\"conditions\":"));
        assert!(json.contains("\"label\":\"X3\""));
        assert!(json.contains("\"space\":\"M(5,0)\""));
        assert!(json.contains("\"signature\":{\"h0_minus1\":1,\"h0_omega\":3,\"h1\":3}"));
        assert!(json.ends_with("}"));
    }
}
