//! Cross-validation of the closed-form condition batteries against the
//! finite-field enumeration oracles.
//!
//! Trials draw integral matrices (uniform fills interleaved with planted
//! degenerate structures so the unstable branches are exercised), reduce
//! them modulo the enumeration prime, and ask both routes for a verdict.
//! Any disagreement is surfaced with the offending matrix.

use crate::doc::{self, MatrixDocument};
use crate::error::{Error, Result};
use crate::exec;
use crate::forms::Form;
use crate::gallery;
use crate::graded::GradedMorphism;
use crate::kronecker::{self, KingOptions, KroneckerModule};
use crate::rng::Rng;
use crate::scalar::{Field, Scalar};
use crate::strata::{self, ModuliSpaceId, StratumLabel};

#[derive(Debug, Clone)]
pub struct CompareOutcome {
    pub trials: usize,
    pub agreements: usize,
    pub disagreements: Vec<String>,
}

fn random_linear(bound: u64, rng: &mut Rng) -> Form {
    let field = Field::Q;
    let mut acc = Form::zero(field, 1);
    for v in 0..3 {
        let c = Scalar::from_i64(field, rng.int(bound));
        acc = acc.add(&Form::var(field, v).scale(&c).unwrap()).unwrap();
    }
    acc
}

fn random_unimodular(n: usize, p: u64, rng: &mut Rng) -> crate::linalg::ScalarMatrix {
    // Integral matrix invertible both over Q and modulo p.
    loop {
        let m = crate::linalg::ScalarMatrix::from_fn(Field::Q, n, n, |_, _| {
            Scalar::from_i64(Field::Q, rng.int(3))
        })
        .expect("shape");
        if m.rank() == n {
            if let Ok(mp) = m.reduce_mod(p) {
                if mp.rank() == n {
                    return m;
                }
            }
        }
    }
}

fn conjugate_module(m: &KroneckerModule, p: u64, rng: &mut Rng) -> KroneckerModule {
    let g = random_unimodular(m.rows(), p, rng);
    let h = random_unimodular(m.cols(), p, rng);
    let mut entries = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let mut acc = Form::zero(Field::Q, 1);
            for k in 0..m.rows() {
                for l in 0..m.cols() {
                    let c = g.at(i, k).mul(h.at(l, j)).expect("field");
                    if !c.is_zero() && !m.entry(k, l).is_zero() {
                        acc = acc.add(&m.entry(k, l).scale(&c).unwrap()).unwrap();
                    }
                }
            }
            entries.push(acc);
        }
    }
    KroneckerModule::new(Field::Q, m.rows(), m.cols(), entries).expect("shape")
}

/// Integral 3 x 4 Kronecker modules: uniform fills plus planted forbidden
/// forms and kernel-degeneration structures.
fn sample_3x4(kind: usize, bound: u64, rng: &mut Rng, p: u64) -> KroneckerModule {
    let field = Field::Q;
    let base = match kind {
        0 => {
            let entries: Vec<Form> = (0..12).map(|_| random_linear(bound, rng)).collect();
            return KroneckerModule::new(field, 3, 4, entries).expect("shape");
        }
        1 => {
            // zero column
            let mut entries: Vec<Form> = (0..12).map(|_| random_linear(bound, rng)).collect();
            for i in 0..3 {
                entries[i * 4 + 1] = Form::zero(field, 1);
            }
            KroneckerModule::new(field, 3, 4, entries).expect("shape")
        }
        2 => {
            // 2 x 2 zero block
            let mut entries: Vec<Form> = (0..12).map(|_| random_linear(bound, rng)).collect();
            for i in 0..2 {
                for j in 2..4 {
                    entries[i * 4 + j] = Form::zero(field, 1);
                }
            }
            KroneckerModule::new(field, 3, 4, entries).expect("shape")
        }
        3 => {
            // 1 x 3 zero block
            let mut entries: Vec<Form> = (0..12).map(|_| random_linear(bound, rng)).collect();
            for j in 1..4 {
                entries[j] = Form::zero(field, 1);
            }
            KroneckerModule::new(field, 3, 4, entries).expect("shape")
        }
        4 => {
            // gcd degree one: [[l1, m, 0, 0], [l2, 0, m, 0], [a, b, c, s]]
            let (l1, l2, m) = (random_linear(bound, rng), random_linear(bound, rng), random_linear(bound, rng));
            let (a, b, c, s) = (
                random_linear(bound, rng),
                random_linear(bound, rng),
                random_linear(bound, rng),
                random_linear(bound, rng),
            );
            let zero = Form::zero(field, 1);
            KroneckerModule::new(
                field,
                3,
                4,
                vec![
                    l1, m.clone(), zero.clone(), zero.clone(),
                    l2, zero.clone(), m, zero.clone(),
                    a, b, c, s,
                ],
            )
            .expect("shape")
        }
        _ => {
            // gcd degree two: Koszul block with a free column
            let x = Form::var(field, 0);
            let y = Form::var(field, 1);
            let z = Form::var(field, 2);
            let zero = Form::zero(field, 1);
            let v: Vec<Form> = (0..3).map(|_| random_linear(bound, rng)).collect();
            KroneckerModule::new(
                field,
                3,
                4,
                vec![
                    y.neg(), x.clone(), zero.clone(), v[0].clone(),
                    z.neg(), zero.clone(), x.clone(), v[1].clone(),
                    zero.clone(), z.neg(), y.clone(), v[2].clone(),
                ],
            )
            .expect("shape")
        }
    };
    conjugate_module(&base, p, rng)
}

fn module_text(m: &KroneckerModule) -> String {
    let doc = MatrixDocument::from_morphism(None, &m.to_graded());
    doc::print(&doc)
}

/// Battery vs enumeration for the Kronecker block of the open stratum of
/// M(5,1).
pub fn compare_m51_x0(trials: usize, prime: u64, seed: u64) -> Result<CompareOutcome> {
    let opts = KingOptions::default();
    let results = exec::par_map(trials, |t| {
        let mut rng = Rng::new(seed ^ (t as u64).wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1));
        let m = sample_3x4(t % 6, 5, &mut rng, prime);
        let mp = m.reduce_mod(prime)?;
        let battery = mp.semistable_by_minors()?;
        let (oracle, _) = mp.king_semistable(&opts)?;
        if battery == oracle {
            Ok(None)
        } else {
            Ok(Some(format!(
                "trial {t}: battery {battery}, enumeration {oracle}:\n{}",
                module_text(&mp)
            )))
        }
    });
    collect(results, trials)
}

/// Battery vs forbidden-form search for the open stratum of M(5,3).
pub fn compare_m53_x0(trials: usize, prime: u64, seed: u64) -> Result<CompareOutcome> {
    let results = exec::par_map(trials, |t| {
        let mut rng = Rng::new(seed ^ (t as u64).wrapping_mul(0x517cc1b727220a95).wrapping_add(1));
        let phi = sample_m53_shape(t % 3, 5, &mut rng, prime)?;
        let php = phi.reduce_mod(prime)?;
        let (a, b, _) = strata::m53_x0_battery(&php)?;
        let battery = a && b;
        let oracle = kronecker::m53_x0_oracle(&php)?;
        if battery == oracle {
            Ok(None)
        } else {
            let docp = MatrixDocument::from_morphism(Some(3), &php);
            Ok(Some(format!(
                "trial {t}: battery {battery}, search {oracle}:\n{}",
                doc::print(&docp)
            )))
        }
    });
    collect(results, trials)
}

fn sample_m53_shape(kind: usize, bound: u64, rng: &mut Rng, p: u64) -> Result<GradedMorphism> {
    let field = Field::Q;
    let mut entries = Vec::with_capacity(9);
    // Canonical source order (-1, -2, -2): column 0 linear, columns 1-2
    // quadratic.
    for _ in 0..3 {
        entries.push(random_linear(bound, rng));
        entries.push(gallery::random_form(field, 2, bound, rng));
        entries.push(gallery::random_form(field, 2, bound, rng));
    }
    let mut phi = GradedMorphism::new(vec![-1, -2, -2], vec![0, 0, 0], entries)?;
    match kind {
        1 => {
            // Plant the first forbidden form: the linear column spans a line.
            let l = random_linear(bound, rng);
            let c1 = Scalar::from_i64(field, rng.int(bound));
            let c2 = Scalar::from_i64(field, rng.int(bound));
            let col = vec![l.clone(), l.scale(&c1)?, l.scale(&c2)?];
            phi = replace_col(&phi, 0, &col)?;
        }
        2 => {
            // Plant the second forbidden form: a functional v kills the
            // linear column and makes the quadratic combinations dependent.
            let l1 = random_linear(bound, rng);
            let l2 = random_linear(bound, rng);
            let a = Scalar::from_i64(field, rng.int(bound));
            let b = Scalar::from_i64(field, rng.int(bound));
            let l3 = l1.scale(&a)?.add(&l2.scale(&b)?)?;
            // v = (a, b, -1) kills (l1, l2, l3).
            phi = replace_col(&phi, 0, &[l1, l2, l3])?;
            // Force v.col2 = lambda v.col1 for v = (a, b, -1): solve for the
            // bottom entry of the second quadratic column.
            let lambda = Scalar::from_i64(field, rng.int(bound));
            let vq1 = phi.entry(0, 1).scale(&a)?.add(&phi.entry(1, 1).scale(&b)?)?
                .sub(phi.entry(2, 1))?;
            let top2 = phi.entry(0, 2).scale(&a)?.add(&phi.entry(1, 2).scale(&b)?)?;
            let e22 = top2.sub(&vq1.scale(&lambda)?)?;
            phi = replace_entry(&phi, 2, 2, &e22)?;
        }
        _ => {}
    }
    // Conjugate rows by a unimodular constant matrix for variety.
    let g = random_unimodular(3, p, rng);
    let h = crate::linalg::ScalarMatrix::identity(field, 3);
    phi.recombine(&g, &h)
}

fn replace_entry(phi: &GradedMorphism, i: usize, j: usize, e: &Form) -> Result<GradedMorphism> {
    let mut entries = Vec::with_capacity(phi.rows() * phi.cols());
    for r in 0..phi.rows() {
        for c in 0..phi.cols() {
            entries.push(if (r, c) == (i, j) { e.clone() } else { phi.entry(r, c).clone() });
        }
    }
    GradedMorphism::new(phi.source().twists().to_vec(), phi.target().twists().to_vec(), entries)
}

fn replace_col(phi: &GradedMorphism, j: usize, col: &[Form]) -> Result<GradedMorphism> {
    let mut out = phi.clone();
    for (i, e) in col.iter().enumerate() {
        out = replace_entry(&out, i, j, e)?;
    }
    Ok(out)
}

/// Primal versus dual-route King decisions for the square modules of the
/// open stratum of M(5,0), including the stable flag, plus the implication
/// det != 0 => semi-stable.
pub fn compare_m50_x0(trials: usize, prime: u64, seed: u64) -> Result<CompareOutcome> {
    let opts = KingOptions::default();
    let results = exec::par_map(trials, |t| {
        let mut rng = Rng::new(seed ^ (t as u64).wrapping_mul(0x2545f4914f6cdd1d).wrapping_add(1));
        let m = sample_5x5(t % 3, 4, &mut rng, prime);
        let mp = m.reduce_mod(prime)?;
        let primal = mp.king(&opts)?;
        let dual = mp.king_dual_route(&opts)?;
        let det_nonzero = !mp.to_graded().determinant()?.is_zero();
        let mut problems = Vec::new();
        if (primal.semistable, primal.stable) != (dual.semistable, dual.stable) {
            problems.push(format!(
                "primal (ss {}, stable {}) vs dual route (ss {}, stable {})",
                primal.semistable, primal.stable, dual.semistable, dual.stable
            ));
        }
        if det_nonzero && !primal.semistable {
            problems.push("nonzero determinant but enumeration says unstable".into());
        }
        if problems.is_empty() {
            Ok(None)
        } else {
            Ok(Some(format!("trial {t}: {}\n{}", problems.join("; "), module_text(&mp))))
        }
    });
    collect(results, trials)
}

fn sample_5x5(kind: usize, bound: u64, rng: &mut Rng, p: u64) -> KroneckerModule {
    let field = Field::Q;
    match kind {
        0 => {
            let entries: Vec<Form> = (0..25).map(|_| random_linear(bound, rng)).collect();
            KroneckerModule::new(field, 5, 5, entries).expect("shape")
        }
        _ => {
            // Plant the properly semi-stable block-triangular form with a
            // random block size and conjugate.
            let m = 1 + rng.below(4) as usize;
            let mut entries = Vec::with_capacity(25);
            for i in 0..5 {
                for j in 0..5 {
                    if j >= 5 - m && i >= m {
                        entries.push(Form::zero(field, 1));
                    } else {
                        entries.push(random_linear(bound, rng));
                    }
                }
            }
            let planted = KroneckerModule::new(field, 5, 5, entries).expect("shape");
            conjugate_module(&planted, p, rng)
        }
    }
}

fn collect(results: Vec<Result<Option<String>>>, trials: usize) -> Result<CompareOutcome> {
    let mut disagreements = Vec::new();
    for r in results {
        if let Some(d) = r? {
            disagreements.push(d);
        }
    }
    Ok(CompareOutcome {
        trials,
        agreements: trials - disagreements.len(),
        disagreements,
    })
}

/// Dispatch used by the CLI and the acceptance suite.
pub fn oracle_compare(
    space: ModuliSpaceId,
    label: StratumLabel,
    trials: usize,
    prime: u64,
    seed: u64,
) -> Result<CompareOutcome> {
    match (space.chi, label) {
        (3, StratumLabel::X0) => compare_m53_x0(trials, prime, seed),
        (1, StratumLabel::X0) => compare_m51_x0(trials, prime, seed),
        (0, StratumLabel::X0) => compare_m50_x0(trials, prime, seed),
        _ => Err(Error::Other(format!(
            "no oracle comparison for {space} {}; supported: M(5,3) X0, M(5,1) X0, M(5,0) X0",
            label.as_str()
        ))),
    }
}
