//! Classification of graded morphisms into the strata of M(5, chi) and the
//! dimension bookkeeping of the stratification.
//!
//! Each moduli space M(5, chi) for chi in {0, 1, 3} carries a catalogue of
//! four resolution shapes with open matrix conditions; the spaces chi = 2
//! and chi = 4 are reached through the duality isomorphism (transposed
//! catalogue, Serre-dual signature triple).

use num_integer::Integer;

use crate::cohomology::{self, CohomologySignature};
use crate::error::{Error, Result};
use crate::forms::{self, Form};
use crate::graded::{GradedMorphism, HilbertData};
use crate::kronecker::{KingOptions, KroneckerModule};
use crate::linalg::ScalarMatrix;
use crate::scalar::{Field, Scalar};

/// A moduli space M(5, chi).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModuliSpaceId {
    pub chi: i64,
}

impl ModuliSpaceId {
    pub fn new(chi: i64) -> Result<ModuliSpaceId> {
        if (0..=4).contains(&chi) {
            Ok(ModuliSpaceId { chi })
        } else {
            Err(Error::Other(format!(
                "unsupported Euler characteristic {chi}; twist into 0..=4 first"
            )))
        }
    }

    /// Slope chi / 5 in lowest terms.
    pub fn slope(&self) -> (i64, i64) {
        if self.chi == 0 {
            return (0, 1);
        }
        let g = self.chi.gcd(&5);
        (self.chi / g, 5 / g)
    }

    /// True for the spaces with a primal catalogue (chi = 0, 1, 3); the
    /// other two are handled through duality.
    pub fn is_primal(&self) -> bool {
        matches!(self.chi, 0 | 1 | 3)
    }

    /// The dual space and the twist k used to land in it: F -> F^D(k) sends
    /// chi to -chi + 5k, with k = 1 except for the self-dual chi = 0.
    pub fn dual(&self) -> (ModuliSpaceId, i64) {
        let k = if self.chi == 0 { 0 } else { 1 };
        (ModuliSpaceId { chi: -self.chi + 5 * k }, k)
    }
}

impl std::fmt::Display for ModuliSpaceId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "M(5,{})", self.chi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StratumLabel {
    X0,
    X1,
    X2,
    X3,
    NotInjective,
    WrongShape,
    ConditionsFailed,
}

impl StratumLabel {
    pub fn from_index(i: usize) -> StratumLabel {
        [StratumLabel::X0, StratumLabel::X1, StratumLabel::X2, StratumLabel::X3][i]
    }

    pub fn index(&self) -> Option<usize> {
        match self {
            StratumLabel::X0 => Some(0),
            StratumLabel::X1 => Some(1),
            StratumLabel::X2 => Some(2),
            StratumLabel::X3 => Some(3),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            StratumLabel::X0 => "X0",
            StratumLabel::X1 => "X1",
            StratumLabel::X2 => "X2",
            StratumLabel::X3 => "X3",
            StratumLabel::NotInjective => "NotInjective",
            StratumLabel::WrongShape => "WrongShape",
            StratumLabel::ConditionsFailed => "ConditionsFailed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubLabel {
    X0Generic,
    X01,
    X02,
    X10,
    X11,
    X20,
    X21,
    Stable,
    StrictlySemistable,
}

impl SubLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            SubLabel::X0Generic => "X0∖X01",
            SubLabel::X01 => "X01",
            SubLabel::X02 => "X02",
            SubLabel::X10 => "X10",
            SubLabel::X11 => "X11",
            SubLabel::X20 => "X20",
            SubLabel::X21 => "X21",
            SubLabel::Stable => "stable",
            SubLabel::StrictlySemistable => "strictly-semistable",
        }
    }
}

#[derive(Debug, Clone)]
pub struct StratumReport {
    pub space: ModuliSpaceId,
    pub label: StratumLabel,
    pub sublabel: Option<SubLabel>,
    pub conditions: Vec<(String, bool)>,
    pub signature: Option<CohomologySignature>,
    pub determinant: Option<Form>,
    pub hilbert: Option<HilbertData>,
    pub warnings: Vec<String>,
}

/// One row of the shape catalogue.
#[derive(Debug, Clone)]
pub struct CatalogueRow {
    pub chi: i64,
    pub index: usize,
    pub source: Vec<i64>,
    pub target: Vec<i64>,
    pub expected_signature: (usize, usize, usize),
    pub codim: usize,
    /// Blocks (target twist, source twist) the stratum prescribes to vanish.
    pub zero_blocks: Vec<(i64, i64)>,
}

impl CatalogueRow {
    /// Number of free form coefficients in the shape, with the prescribed
    /// zero blocks removed.
    pub fn dim_w(&self) -> usize {
        let mut dim = 0;
        for &t in &self.target {
            for &s in &self.source {
                if self.zero_blocks.contains(&(t, s)) {
                    continue;
                }
                dim += forms::monomial_count(t - s);
            }
        }
        dim
    }

    /// dim Aut(A) + dim Aut(B) - 1.
    pub fn dim_g(&self) -> usize {
        let src = crate::graded::TwistSum::new(self.source.clone());
        let tgt = crate::graded::TwistSum::new(self.target.clone());
        src.end_dim() + tgt.end_dim() - 1
    }
}

/// The primal catalogue for chi in {0, 1, 3}.
pub fn catalogue(chi: i64) -> Option<Vec<CatalogueRow>> {
    let rows: Vec<(Vec<i64>, Vec<i64>, (usize, usize, usize), usize, Vec<(i64, i64)>)> = match chi {
        3 => vec![
            (vec![-2, -2, -1], vec![0, 0, 0], (0, 0, 1), 0, vec![]),
            (vec![-2, -2, -1, -1], vec![-1, 0, 0, 0], (0, 0, 2), 2, vec![(-1, -1)]),
            (vec![-2, -2, -2], vec![-1, -1, 1], (1, 0, 3), 3, vec![]),
            (vec![-3, -1], vec![0, 1], (1, 1, 4), 4, vec![]),
        ],
        1 => vec![
            (vec![-2, -2, -2, -2], vec![-1, -1, -1, 0], (0, 0, 0), 0, vec![]),
            (vec![-3, -2], vec![0, 0], (0, 1, 0), 2, vec![]),
            (vec![-3, -2, -1], vec![-1, 0, 0], (0, 1, 1), 3, vec![(-1, -1)]),
            (vec![-3, -3], vec![-2, 1], (1, 2, 3), 5, vec![]),
        ],
        0 => vec![
            (vec![-2; 5], vec![-1; 5], (0, 0, 0), 0, vec![]),
            (vec![-3, -2, -2], vec![-1, -1, 0], (0, 1, 0), 1, vec![]),
            (vec![-3, -3, -1], vec![-2, 0, 0], (0, 2, 1), 4, vec![]),
            (vec![-4], vec![1], (1, 3, 3), 6, vec![]),
        ],
        _ => return None,
    };
    Some(
        rows.into_iter()
            .enumerate()
            .map(|(i, (mut s, mut t, sig, codim, zb))| {
                s.sort_unstable_by(|a, b| b.cmp(a));
                t.sort_unstable_by(|a, b| b.cmp(a));
                CatalogueRow {
                    chi,
                    index: i,
                    source: s,
                    target: t,
                    expected_signature: sig,
                    codim,
                    zero_blocks: zb,
                }
            })
            .collect(),
    )
}

/// The catalogue of a dual space (chi = 2 or 4): transposed shapes of the
/// primal catalogue under F -> F^D(1).
pub fn dual_catalogue(chi: i64) -> Option<Vec<CatalogueRow>> {
    let primal_chi = match chi {
        2 => 3,
        4 => 1,
        _ => return None,
    };
    let rows = catalogue(primal_chi)?;
    Some(
        rows.into_iter()
            .map(|r| {
                let mut source: Vec<i64> = r.target.iter().map(|&b| -2 - b).collect();
                let mut target: Vec<i64> = r.source.iter().map(|&a| -2 - a).collect();
                source.sort_unstable_by(|a, b| b.cmp(a));
                target.sort_unstable_by(|a, b| b.cmp(a));
                let (h0m1, h1, h0o) = r.expected_signature;
                CatalogueRow {
                    chi,
                    index: r.index,
                    source,
                    target,
                    // Serre duality swaps the twist conditions; the third
                    // entry becomes h^1(G tensor Omega^1(1)).
                    expected_signature: (h1, h0m1, h0o),
                    codim: r.codim,
                    zero_blocks: r.zero_blocks.iter().map(|&(t, s)| (-2 - s, -2 - t)).collect(),
                }
            })
            .collect(),
    )
}

/// Closed-form condition battery for the open stratum of M(5,3): the linear
/// column spans at least a pencil, and no row functional killing the linear
/// column makes the two quadratic row combinations dependent.  Returns the
/// two condition booleans plus the span of the linear column.
pub fn m53_x0_battery(phi: &GradedMorphism) -> Result<(bool, bool, usize)> {
    let field = phi.field();
    let lin_cols = phi.cols_with_twist(-1);
    let quad_cols = phi.cols_with_twist(-2);
    if lin_cols.len() != 1 || quad_cols.len() != 2 || phi.rows() != 3 {
        return Err(Error::Shape("expected the 2O(-2)+O(-1) -> 3O shape".into()));
    }
    let ell: Vec<Form> = (0..3).map(|i| phi.entry(i, lin_cols[0]).clone()).collect();
    let span = forms::linear_span_dim(&ell)?;
    let cond_a = span >= 2;
    let cond_b = if span >= 3 {
        true
    } else if span == 2 {
        // The functional v with sum v_i ell_i = 0 is unique up to scale.
        let coords = [(1u8, 0u8, 0u8), (0, 1, 0), (0, 0, 1)];
        let mat = ScalarMatrix::from_fn(field, 3, 3, |c, i| ell[i].coeff(coords[c]))?;
        let kernel = mat.kernel_basis();
        let v = &kernel[0];
        let mut combos = Vec::new();
        for &qc in &quad_cols {
            let mut acc = Form::zero(field, 2);
            for i in 0..3 {
                if !v[i].is_zero() && !phi.entry(i, qc).is_zero() {
                    acc = acc.add(&phi.entry(i, qc).scale(&v[i])?)?;
                }
            }
            combos.push(acc);
        }
        forms::linear_span_dim(&combos)? == 2
    } else {
        false
    };
    Ok((cond_a, cond_b, span))
}

struct Battery {
    conditions: Vec<(String, bool)>,
    sublabel: Option<SubLabel>,
    warnings: Vec<String>,
}

fn run_battery(row: &CatalogueRow, phi: &GradedMorphism, injective: bool) -> Result<Battery> {
    let mut conditions: Vec<(String, bool)> = Vec::new();
    let mut sublabel = None;
    let mut warnings = Vec::new();
    match (row.chi, row.index) {
        (3, 0) => {
            let (a, b, span) = m53_x0_battery(phi)?;
            conditions.push(("linear-column-span".into(), a));
            conditions.push(("quadratic-pair-independent".into(), b));
            if a && b && injective {
                sublabel = Some(if span == 3 { SubLabel::X0Generic } else { SubLabel::X01 });
            }
        }
        (3, 1) => {
            let consts = phi.submatrix(&phi.rows_with_twist(-1), &phi.cols_with_twist(-1));
            conditions.push(("constant-block-zero".into(), consts.is_zero()));
            let phi11 = phi.submatrix(&phi.rows_with_twist(-1), &phi.cols_with_twist(-2));
            let ells: Vec<Form> = (0..2).map(|j| phi11.entry(0, j).clone()).collect();
            conditions.push(("phi11-independent".into(), forms::linear_span_dim(&ells)? == 2));
            let phi22 =
                KroneckerModule::from_block(phi, &phi.rows_with_twist(0), &phi.cols_with_twist(-1))?;
            let prof = phi22.minors_profile()?;
            conditions.push(("phi22-minors-independent".into(), prof.span_dim == 3));
        }
        (3, 2) => {
            let phi11 =
                KroneckerModule::from_block(phi, &phi.rows_with_twist(-1), &phi.cols_with_twist(-2))?;
            let prof = phi11.minors_profile()?;
            conditions.push(("phi11-minors-independent".into(), prof.span_dim == 3));
            if prof.span_dim == 3 && injective {
                let gdeg = prof.gcd.as_ref().map(|g| g.degree()).unwrap_or(0);
                sublabel = Some(if gdeg == 0 { SubLabel::X20 } else { SubLabel::X21 });
            }
        }
        (3, 3) => {
            let ell = phi
                .submatrix(&phi.rows_with_twist(0), &phi.cols_with_twist(-1))
                .entry(0, 0)
                .clone();
            conditions.push(("phi12-nonzero".into(), !ell.is_zero()));
            let q = phi
                .submatrix(&phi.rows_with_twist(1), &phi.cols_with_twist(-1))
                .entry(0, 0)
                .clone();
            let nondiv = if ell.is_zero() { false } else { !forms::divides(&ell, &q)? };
            conditions.push(("phi12-not-dividing-phi22".into(), nondiv));
        }
        (1, 0) => {
            let phi11 =
                KroneckerModule::from_block(phi, &phi.rows_with_twist(-1), &phi.cols_with_twist(-2))?;
            let semistable = phi11.semistable_by_minors()?;
            conditions.push(("phi11-king-semistable".into(), semistable));
            if semistable && injective {
                let (d, _, _) = phi11.kernel_twist()?;
                sublabel = match d {
                    4 => Some(SubLabel::X01),
                    3 => Some(SubLabel::X02),
                    _ => None,
                };
            }
        }
        (1, 1) => {
            let quads: Vec<Form> = phi
                .rows_with_twist(0)
                .iter()
                .map(|&i| phi.entry(i, phi.cols_with_twist(-2)[0]).clone())
                .collect();
            let span = forms::linear_span_dim(&quads)?;
            conditions.push(("quadratic-pair-independent".into(), span == 2));
            if span == 2 && injective {
                let g = forms::gcd(&quads[0], &quads[1])?;
                sublabel = Some(if g.degree() == 0 { SubLabel::X10 } else { SubLabel::X11 });
            }
        }
        (1, 2) => {
            let consts = phi.submatrix(&phi.rows_with_twist(-1), &phi.cols_with_twist(-1));
            conditions.push(("constant-block-zero".into(), consts.is_zero()));
            let ell = phi
                .submatrix(&phi.rows_with_twist(-1), &phi.cols_with_twist(-2))
                .entry(0, 0)
                .clone();
            conditions.push(("ell-nonzero".into(), !ell.is_zero()));
            let q = phi
                .submatrix(&phi.rows_with_twist(-1), &phi.cols_with_twist(-3))
                .entry(0, 0)
                .clone();
            let nondiv = if ell.is_zero() { false } else { !forms::divides(&ell, &q)? };
            conditions.push(("ell-not-dividing-q".into(), nondiv));
            let pair: Vec<Form> = phi
                .rows_with_twist(0)
                .iter()
                .map(|&i| phi.entry(i, phi.cols_with_twist(-1)[0]).clone())
                .collect();
            conditions.push(("phi23-independent".into(), forms::linear_span_dim(&pair)? == 2));
        }
        (1, 3) => {
            let pair: Vec<Form> = phi
                .cols_with_twist(-3)
                .iter()
                .map(|&j| phi.entry(phi.rows_with_twist(-2)[0], j).clone())
                .collect();
            conditions.push(("phi11-independent".into(), forms::linear_span_dim(&pair)? == 2));
        }
        (0, 0) => {
            // Semi-stability follows from injectivity; the stable flag comes
            // from the King enumeration (exact over F_p, consensus over Q).
            if injective {
                let module = KroneckerModule::from_block(
                    phi,
                    &(0..5).collect::<Vec<_>>(),
                    &(0..5).collect::<Vec<_>>(),
                )?;
                let decision = module.king(&KingOptions::default())?;
                if let Some(primes) = &decision.primes_used {
                    warnings.push(format!(
                        "stable flag decided by reduction modulo {primes:?}; probabilistic over Q"
                    ));
                }
                sublabel = Some(if decision.stable {
                    SubLabel::Stable
                } else {
                    SubLabel::StrictlySemistable
                });
            }
        }
        (0, 1) => {
            let phi12 = phi.submatrix(&phi.rows_with_twist(-1), &phi.cols_with_twist(-2));
            conditions.push(("phi12-injective".into(), !phi12.determinant()?.is_zero()));
        }
        (0, 2) => {
            let top: Vec<Form> = phi
                .cols_with_twist(-3)
                .iter()
                .map(|&j| phi.entry(phi.rows_with_twist(-2)[0], j).clone())
                .collect();
            conditions.push(("phi11-independent".into(), forms::linear_span_dim(&top)? == 2));
            let right: Vec<Form> = phi
                .rows_with_twist(0)
                .iter()
                .map(|&i| phi.entry(i, phi.cols_with_twist(-1)[0]).clone())
                .collect();
            conditions.push(("phi22-independent".into(), forms::linear_span_dim(&right)? == 2));
        }
        (0, 3) => {
            conditions.push(("nonzero".into(), !phi.entry(0, 0).is_zero()));
        }
        _ => return Err(Error::Other("no battery for this catalogue row".into())),
    }
    Ok(Battery { conditions, sublabel, warnings })
}

/// Classify a morphism into the stratification of the given moduli space.
pub fn classify(space: ModuliSpaceId, phi: &GradedMorphism) -> Result<StratumReport> {
    if !phi.validate() {
        return Err(Error::InvalidGrading("classification input".into()));
    }
    let reduced = phi.minimize();
    let rows = if space.is_primal() {
        catalogue(space.chi).expect("primal catalogue")
    } else {
        dual_catalogue(space.chi).expect("dual catalogue")
    };
    let shape = reduced.shape();
    let matched = rows.iter().find(|r| (r.source.clone(), r.target.clone()) == shape);

    let square = reduced.rows() == reduced.cols();
    let det = if square { Some(reduced.determinant()?) } else { None };
    let injective = det.as_ref().map(|d| !d.is_zero()).unwrap_or(false);

    // Signature: the primal triple, or the Serre triple for dual spaces.
    let signature = if injective {
        let sig = cohomology::signature(&reduced)?;
        if space.is_primal() {
            Some(sig)
        } else {
            Some(CohomologySignature {
                h0_minus1: sig.h0_minus1,
                h1: sig.h1,
                h0_omega: cohomology::h1_omega(&reduced)?,
            })
        }
    } else {
        None
    };
    let hilbert = if square { reduced.hilbert().ok() } else { None };

    let Some(row) = matched else {
        return Ok(StratumReport {
            space,
            label: StratumLabel::WrongShape,
            sublabel: None,
            conditions: Vec::new(),
            signature,
            determinant: det,
            hilbert,
            warnings: vec![format!(
                "minimized shape {} -> {} is not in the catalogue of {space}",
                reduced.source(),
                reduced.target()
            )],
        });
    };

    // For dual spaces the conditions are the transposed primal conditions:
    // run the primal battery on the dualized morphism.
    let (battery_phi, battery_row) = if space.is_primal() {
        (reduced.clone(), row.clone())
    } else {
        let (primal_space, k) = space.dual();
        let transposed = transpose_with_twists(&reduced, k)?;
        let primal_row = catalogue(primal_space.chi)
            .expect("primal catalogue")
            .into_iter()
            .nth(row.index)
            .expect("row index");
        (transposed, primal_row)
    };
    let battery = run_battery(&battery_row, &battery_phi, injective)?;
    let mut conditions = battery.conditions;
    conditions.push(("injective".into(), injective));
    let mut warnings = battery.warnings;

    if !injective {
        return Ok(StratumReport {
            space,
            label: StratumLabel::NotInjective,
            sublabel: None,
            conditions,
            signature,
            determinant: det,
            hilbert,
            warnings,
        });
    }
    if conditions.iter().any(|(_, ok)| !ok) {
        return Ok(StratumReport {
            space,
            label: StratumLabel::ConditionsFailed,
            sublabel: None,
            conditions,
            signature,
            determinant: det,
            hilbert,
            warnings,
        });
    }
    // Cross-check the signature against the table row.
    let sig = signature.expect("injective");
    if sig.as_tuple() != row.expected_signature {
        warnings.push(format!(
            "signature {:?} does not match the table row {:?}",
            sig.as_tuple(),
            row.expected_signature
        ));
        return Ok(StratumReport {
            space,
            label: StratumLabel::ConditionsFailed,
            sublabel: None,
            conditions,
            signature,
            determinant: det,
            hilbert,
            warnings,
        });
    }
    Ok(StratumReport {
        space,
        label: StratumLabel::from_index(row.index),
        sublabel: battery.sublabel,
        conditions,
        signature,
        determinant: det,
        hilbert,
        warnings,
    })
}

/// Transpose with dual twists, without demanding injectivity (condition
/// evaluation for dual-space inputs must work on degenerate matrices too).
fn transpose_with_twists(phi: &GradedMorphism, k: i64) -> Result<GradedMorphism> {
    let new_source: Vec<i64> = phi.target().twists().iter().map(|&b| -3 + k - b).collect();
    let new_target: Vec<i64> = phi.source().twists().iter().map(|&a| -3 + k - a).collect();
    let m = phi.cols();
    let n = phi.rows();
    let mut entries = Vec::with_capacity(m * n);
    for i in 0..m {
        for j in 0..n {
            entries.push(phi.entry(j, i).clone());
        }
    }
    GradedMorphism::new(new_source, new_target, entries)
}

/// Apply the duality isomorphism and classify in the dual space.
pub fn dual_classify(
    space: ModuliSpaceId,
    phi: &GradedMorphism,
) -> Result<(ModuliSpaceId, StratumReport)> {
    let (dual_space, k) = space.dual();
    let psi = phi.dual_resolution(k)?;
    let report = classify(dual_space, &psi)?;
    Ok((dual_space, report))
}

/// Dimension of the stabilizer of phi inside Aut(A) x Aut(B) modulo the
/// homotheties: the solution space of b phi = phi a over graded
/// endomorphism pairs, minus one.
pub fn stabilizer_dimension(phi: &GradedMorphism) -> Result<usize> {
    if !phi.validate() {
        return Err(Error::InvalidGrading("stabilizer input".into()));
    }
    let field = phi.field();
    let src = phi.source();
    let tgt = phi.target();
    let n = src.len();
    let m = tgt.len();

    struct Slot {
        is_b: bool,
        to: usize,
        from: usize,
        mono: crate::forms::Mono,
    }
    let mut slots: Vec<Slot> = Vec::new();
    for to in 0..n {
        for from in 0..n {
            let d = src.twist(to) - src.twist(from);
            if d >= 0 {
                for mono in forms::monomials(d as usize) {
                    slots.push(Slot { is_b: false, to, from, mono });
                }
            }
        }
    }
    for to in 0..m {
        for from in 0..m {
            let d = tgt.twist(to) - tgt.twist(from);
            if d >= 0 {
                for mono in forms::monomials(d as usize) {
                    slots.push(Slot { is_b: true, to, from, mono });
                }
            }
        }
    }

    // Equations: entry (i, j) of b phi - phi a, one per monomial of degree
    // t_i - s_j whenever that degree is nonnegative.
    let mut eq_base = vec![usize::MAX; m * n];
    let mut eq_total = 0usize;
    for i in 0..m {
        for j in 0..n {
            let d = tgt.twist(i) - src.twist(j);
            if d >= 0 {
                eq_base[i * n + j] = eq_total;
                eq_total += forms::monomial_count(d);
            }
        }
    }

    let mut mat = ScalarMatrix::zero(field, eq_total, slots.len());
    let scatter = |mat: &mut ScalarMatrix, i: usize, j: usize, form: &Form, negate: bool, col: usize| {
        let base = eq_base[i * n + j];
        if base == usize::MAX || form.is_zero() {
            return;
        }
        let d = (tgt.twist(i) - src.twist(j)) as usize;
        let basis = forms::monomials(d);
        for (mono, coeff) in form.terms() {
            let pos = basis.iter().position(|b| b == mono).expect("degree bookkeeping");
            let value = if negate { coeff.neg() } else { coeff.clone() };
            let slot = mat.at_mut(base + pos, col);
            *slot = slot.add_uc(&value);
        }
    };
    for (col, slot) in slots.iter().enumerate() {
        let mono_form = Form::monomial(field, slot.mono, Scalar::one(field))?;
        if slot.is_b {
            // + b_{to,from} phi_{from, j} contributes to entry (to, j).
            for j in 0..n {
                let e = phi.entry(slot.from, j);
                if !e.is_zero() {
                    let prod = mono_form.mul(e)?;
                    scatter(&mut mat, slot.to, j, &prod, false, col);
                }
            }
        } else {
            // - phi_{i, to} a_{to, from} contributes to entry (i, from).
            for i in 0..m {
                let e = phi.entry(i, slot.to);
                if !e.is_zero() {
                    let prod = e.mul(&mono_form)?;
                    scatter(&mut mat, i, slot.from, &prod, true, col);
                }
            }
        }
    }
    let nullity = slots.len() - mat.rank();
    Ok(nullity - 1)
}

/// Kronecker moduli dimension dim N(n, a, b) = n a b - a^2 - b^2 + 1.
pub fn kronecker_moduli_dim(n: i64, a: i64, b: i64) -> i64 {
    n * a * b - a * a - b * b + 1
}

#[derive(Debug, Clone)]
pub struct DimensionAudit {
    pub space: ModuliSpaceId,
    pub label: StratumLabel,
    pub dim_w: usize,
    pub dim_g: usize,
    pub stab_dim: usize,
    pub stratum_dim: i64,
    pub expected_codim: usize,
    pub ok: bool,
}

/// Audit one catalogue row: count coefficients, subtract the group, add the
/// generic stabilizer measured on sampled members, compare with 26 - codim.
pub fn dimension_audit(space: ModuliSpaceId, index: usize, samples: usize) -> Result<DimensionAudit> {
    if !space.is_primal() {
        return Err(Error::Other("the audit runs on the primal spaces 0, 1, 3".into()));
    }
    let row = catalogue(space.chi)
        .expect("primal catalogue")
        .into_iter()
        .nth(index)
        .ok_or_else(|| Error::Other(format!("no stratum index {index}")))?;
    let dim_w = row.dim_w();
    let dim_g = row.dim_g();
    let mut stab_dim: Option<usize> = None;
    for seed in 0..samples as u64 {
        let req = crate::gallery::SampleRequest {
            space,
            label: StratumLabel::from_index(index),
            sublabel: None,
            seed: seed + 1,
            field: Field::Q,
            coefficient_bound: 10,
            retry_cap: 200,
        };
        let phi = crate::gallery::sample_stratum(&req)?;
        let s = stabilizer_dimension(&phi)?;
        stab_dim = Some(stab_dim.map_or(s, |cur| cur.min(s)));
    }
    let stab_dim = stab_dim.ok_or_else(|| Error::SamplerExhausted {
        space: space.to_string(),
        label: StratumLabel::from_index(index).as_str().into(),
        retries: 0,
    })?;
    let stratum_dim = dim_w as i64 - dim_g as i64 + stab_dim as i64;
    let ok = stratum_dim == 26 - row.codim as i64;
    Ok(DimensionAudit {
        space,
        label: StratumLabel::from_index(index),
        dim_w,
        dim_g,
        stab_dim,
        stratum_dim,
        expected_codim: row.codim,
        ok,
    })
}

/// Audit all twelve catalogue rows and the quoted Kronecker moduli
/// dimensions N(3,2,3) = 6 and N(3,5,5) = 26.
pub fn audit_all(samples: usize) -> Result<(Vec<DimensionAudit>, bool)> {
    let mut out = Vec::new();
    let mut all_ok = true;
    for chi in [3, 1, 0] {
        let space = ModuliSpaceId::new(chi)?;
        for index in 0..4 {
            let audit = dimension_audit(space, index, samples)?;
            all_ok &= audit.ok;
            out.push(audit);
        }
    }
    all_ok &= kronecker_moduli_dim(3, 2, 3) == 6;
    all_ok &= kronecker_moduli_dim(3, 5, 5) == 26;
    Ok((out, all_ok))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Form {
        Form::var(Field::Q, 0)
    }
    fn y() -> Form {
        Form::var(Field::Q, 1)
    }
    fn z() -> Form {
        Form::var(Field::Q, 2)
    }

    #[test]
    fn catalogue_shapes_have_degree_five_determinants() {
        for chi in [0, 1, 3] {
            for row in catalogue(chi).unwrap() {
                let t: i64 = row.target.iter().sum();
                let s: i64 = row.source.iter().sum();
                assert_eq!(t - s, 5, "chi {chi} row {}", row.index);
            }
        }
        for chi in [2, 4] {
            for row in dual_catalogue(chi).unwrap() {
                let t: i64 = row.target.iter().sum();
                let s: i64 = row.source.iter().sum();
                assert_eq!(t - s, 5, "chi {chi} row {}", row.index);
            }
        }
    }

    #[test]
    fn audit_dimension_counting() {
        let expect: [(i64, [usize; 4], [usize; 4]); 3] = [
            (3, [45, 60, 48, 34], [19, 38, 25, 12]),
            (1, [60, 32, 47, 36], [34, 8, 25, 15]),
            (0, [75, 46, 52, 21], [49, 21, 33, 1]),
        ];
        for (chi, ws, gs) in expect {
            let rows = catalogue(chi).unwrap();
            for (i, row) in rows.iter().enumerate() {
                assert_eq!(row.dim_w(), ws[i], "dim_w chi {chi} X{i}");
                assert_eq!(row.dim_g(), gs[i], "dim_g chi {chi} X{i}");
            }
        }
        assert_eq!(kronecker_moduli_dim(3, 2, 3), 6);
        assert_eq!(kronecker_moduli_dim(3, 5, 5), 26);
    }

    #[test]
    fn classify_twisted_structure_sheaf() {
        let phi = GradedMorphism::new(vec![-4], vec![1], vec![x().pow(5)]).unwrap();
        let rep = classify(ModuliSpaceId::new(0).unwrap(), &phi).unwrap();
        assert_eq!(rep.label, StratumLabel::X3);
        assert_eq!(rep.signature.unwrap().as_tuple(), (1, 3, 3));
    }

    #[test]
    fn classify_m53_counterexample_not_injective() {
        let zero = |d: usize| Form::zero(Field::Q, d);
        let phi = GradedMorphism::new(
            vec![-2, -2, -1],
            vec![0, 0, 0],
            vec![
                x().mul(&y()).unwrap(),
                x().pow(2),
                zero(1),
                x().mul(&z()).unwrap(),
                zero(2),
                x(),
                zero(2),
                x().mul(&z()).unwrap().neg(),
                y(),
            ],
        )
        .unwrap();
        let rep = classify(ModuliSpaceId::new(3).unwrap(), &phi).unwrap();
        assert_eq!(rep.label, StratumLabel::NotInjective);
        assert!(rep.determinant.unwrap().is_zero());
    }

    #[test]
    fn classify_quintic_with_point_shape() {
        // [[x, y], [z^4, y^4]]: 2O(-3) -> O(-2) + O(1), stratum X3 of M(5,1).
        let phi = GradedMorphism::new(
            vec![-3, -3],
            vec![-2, 1],
            vec![x(), y(), z().pow(4), y().pow(4)],
        )
        .unwrap();
        let rep = classify(ModuliSpaceId::new(1).unwrap(), &phi).unwrap();
        assert_eq!(rep.label, StratumLabel::X3);
        assert_eq!(rep.signature.unwrap().as_tuple(), (1, 2, 3));
    }

    #[test]
    fn classify_diagonal_quintic_m50() {
        let entries = {
            let ls = [x(), y(), z(), x().add(&y()).unwrap(), y().add(&z()).unwrap()];
            let mut e = vec![Form::zero(Field::Q, 1); 25];
            for (i, l) in ls.iter().enumerate() {
                e[i * 5 + i] = l.clone();
            }
            e
        };
        let phi = GradedMorphism::new(vec![-2; 5], vec![-1; 5], entries).unwrap();
        let rep = classify(ModuliSpaceId::new(0).unwrap(), &phi).unwrap();
        assert_eq!(rep.label, StratumLabel::X0);
        assert_eq!(rep.sublabel, Some(SubLabel::StrictlySemistable));
        assert_eq!(rep.signature.unwrap().as_tuple(), (0, 0, 0));
    }

    #[test]
    fn stabilizer_of_structure_sheaf_is_trivial() {
        let phi = GradedMorphism::new(vec![-4], vec![1], vec![x().pow(5)]).unwrap();
        assert_eq!(stabilizer_dimension(&phi).unwrap(), 0);
    }

    #[test]
    fn wrong_shape_reported() {
        let phi = GradedMorphism::new(vec![-5], vec![0], vec![x().pow(5)]).unwrap();
        let rep = classify(ModuliSpaceId::new(0).unwrap(), &phi).unwrap();
        assert_eq!(rep.label, StratumLabel::WrongShape);
    }
}
