//! Named constructors for the explicit families of the stratification,
//! horseshoe-style block assembly of extensions, and seeded stratum
//! samplers.

use crate::error::{Error, Result};
use crate::forms::{self, Form};
use crate::graded::GradedMorphism;
use crate::rng::Rng;
use crate::scalar::{Field, Scalar};
use crate::strata::{self, catalogue, ModuliSpaceId, StratumLabel, SubLabel};

#[derive(Debug, Clone)]
pub struct SampleRequest {
    pub space: ModuliSpaceId,
    pub label: StratumLabel,
    pub sublabel: Option<SubLabel>,
    pub seed: u64,
    pub field: Field,
    pub coefficient_bound: u64,
    pub retry_cap: u32,
}

impl SampleRequest {
    pub fn new(space: ModuliSpaceId, label: StratumLabel, seed: u64) -> SampleRequest {
        SampleRequest {
            space,
            label,
            sublabel: None,
            seed,
            field: Field::Q,
            coefficient_bound: 10,
            retry_cap: 200,
        }
    }
}

/// Uniform random form of the given degree with coefficients in
/// [-bound, bound] over Q, or uniform over F_p.
pub fn random_form(field: Field, degree: usize, bound: u64, rng: &mut Rng) -> Form {
    let mut terms = Vec::new();
    for m in forms::monomials(degree) {
        let c = match field {
            Field::Q => Scalar::from_i64(field, rng.int(bound)),
            Field::Fp(p) => Scalar::from_i64(field, rng.below(p) as i64),
        };
        terms.push((m, c));
    }
    Form::from_terms(field, degree, terms).expect("homogeneous by construction")
}

fn random_linear_in(field: Field, vars: &[usize], bound: u64, rng: &mut Rng) -> Form {
    let mut acc = Form::zero(field, 1);
    for &v in vars {
        let c = match field {
            Field::Q => Scalar::from_i64(field, rng.int(bound)),
            Field::Fp(p) => Scalar::from_i64(field, rng.below(p) as i64),
        };
        acc = acc.add(&Form::var(field, v).scale(&c).unwrap()).unwrap();
    }
    acc
}

/// The 2 x 2 presentation [[l1, l2], [f1, f2]] : 2O(-3) -> O(-2) + O(1) of a
/// point extension of a quintic structure sheaf twist; classifies into the
/// closed stratum of M(5,1).
pub fn quintic_with_point(l1: &Form, l2: &Form, f1: &Form, f2: &Form) -> Result<GradedMorphism> {
    if forms::linear_span_dim(&[l1.clone(), l2.clone()])? != 2 {
        return Err(Error::Other("the one-forms must be linearly independent".into()));
    }
    for f in [f1, f2] {
        if !f.is_zero() && f.degree() != 4 {
            return Err(Error::DegreeMismatch("expected quartic entries".into()));
        }
    }
    let det = l1.mul(f2)?.sub(&l2.mul(f1)?)?;
    if det.is_zero() {
        return Err(Error::Other("l1 f2 - l2 f1 vanishes; the presentation is not injective".into()));
    }
    GradedMorphism::new(
        vec![-3, -3],
        vec![-2, 1],
        vec![l1.clone(), l2.clone(), f1.clone(), f2.clone()],
    )?
    .validated()
}

/// The 1 x 1 presentation [f] : O(-4) -> O(1) of a twisted structure sheaf
/// of a quintic curve.
pub fn twisted_structure_sheaf(f: &Form) -> Result<GradedMorphism> {
    if f.is_zero() || f.degree() != 5 {
        return Err(Error::DegreeMismatch("expected a nonzero quintic".into()));
    }
    GradedMorphism::new(vec![-4], vec![1], vec![f.clone()])?.validated()
}

/// The explicit section [[h1/g, x], [-h2, g]] : O(-3) + O(-1) -> O + O(1)
/// of the flag-scheme quotient: h = h1(y,z) + x h2 with g | h1, and the
/// determinant recovers h exactly.
pub fn flag_section(g: &Form, h: &Form) -> Result<GradedMorphism> {
    if g.is_zero() || g.degree() != 2 {
        return Err(Error::DegreeMismatch("expected a nonzero quadratic form".into()));
    }
    if g.terms().any(|(m, _)| m.0 > 0) {
        return Err(Error::Other("the quadratic must involve only y and z".into()));
    }
    if h.is_zero() || h.degree() != 5 {
        return Err(Error::DegreeMismatch("expected a nonzero quintic".into()));
    }
    let field = h.field();
    // Split h = h1(y, z) + x * h2(x, y, z).
    let mut h1_terms = Vec::new();
    let mut h2_terms = Vec::new();
    for (m, c) in h.terms() {
        if m.0 == 0 {
            h1_terms.push((*m, c.clone()));
        } else {
            h2_terms.push(((m.0 - 1, m.1, m.2), c.clone()));
        }
    }
    let h1 = Form::from_terms(field, 5, h1_terms)?;
    let h2 = Form::from_terms(field, 4, h2_terms)?;
    let quotient = h1
        .div_exact(g)
        .ok_or_else(|| Error::Other("the quadratic does not divide the x-free part".into()))?;
    let x = Form::var(field, 0);
    GradedMorphism::new(
        vec![-3, -1],
        vec![0, 1],
        vec![quotient, x, h2.neg(), g.clone()],
    )?
    .validated()
}

/// Horseshoe-style block assembly [[phi_quot, 0], [delta, phi_sub]] followed
/// by minimization; models an extension of coker(phi_quot) by
/// coker(phi_sub) at the matrix level.
pub fn extension_block(
    phi_sub: &GradedMorphism,
    phi_quot: &GradedMorphism,
    delta: &GradedMorphism,
) -> Result<GradedMorphism> {
    if delta.source() != phi_quot.source() || delta.target() != phi_sub.target() {
        return Err(Error::Shape(
            "delta must map source(phi_quot) to target(phi_sub)".into(),
        ));
    }
    let field = phi_sub.field();
    let src: Vec<i64> = phi_quot
        .source()
        .twists()
        .iter()
        .chain(phi_sub.source().twists())
        .copied()
        .collect();
    let tgt: Vec<i64> = phi_quot
        .target()
        .twists()
        .iter()
        .chain(phi_sub.target().twists())
        .copied()
        .collect();
    let (mq, nq) = (phi_quot.rows(), phi_quot.cols());
    let (ms, ns) = (phi_sub.rows(), phi_sub.cols());
    let mut entries = Vec::with_capacity((mq + ms) * (nq + ns));
    for i in 0..mq + ms {
        for j in 0..nq + ns {
            let e = if i < mq && j < nq {
                phi_quot.entry(i, j).clone()
            } else if i >= mq && j < nq {
                delta.entry(i - mq, j).clone()
            } else if i >= mq && j >= nq {
                phi_sub.entry(i - mq, j - nq).clone()
            } else {
                Form::zero(field, 0)
            };
            entries.push(e);
        }
    }
    let block = GradedMorphism::new(src, tgt, entries)?.validated()?;
    Ok(block.minimize())
}

/// The assembly of the closed-stratum extension of M(5,1): a quintic
/// structure sheaf twist below a point presentation.  After minimization the
/// redundant source O(-4) column is annihilated by the Koszul relation; the
/// first two columns form the quintic_with_point matrix.
pub fn point_extension_assembly(
    l1: &Form,
    l2: &Form,
    f1: &Form,
    f2: &Form,
) -> Result<GradedMorphism> {
    let field = l1.field();
    let f = l1.mul(f2)?.sub(&l2.mul(f1)?)?;
    if f.is_zero() {
        return Err(Error::Other("l1 f2 - l2 f1 vanishes".into()));
    }
    let one = Form::one(field);
    let phi_quot = GradedMorphism::new(
        vec![-3, -3, -4],
        vec![-2, -4],
        vec![
            l1.clone(),
            l2.clone(),
            Form::zero(field, 2),
            Form::zero(field, 0),
            Form::zero(field, 0),
            one,
        ],
    )?
    .validated()?;
    let phi_sub = twisted_structure_sheaf(&f)?;
    let delta = GradedMorphism::new(
        vec![-3, -3, -4],
        vec![1],
        vec![f1.clone(), f2.clone(), Form::zero(field, 5)],
    )?
    .validated()?;
    extension_block(&phi_sub, &phi_quot, &delta)
}

fn random_invertible(field: Field, n: usize, rng: &mut Rng) -> crate::linalg::ScalarMatrix {
    loop {
        let m = crate::linalg::ScalarMatrix::from_fn(field, n, n, |_, _| match field {
            Field::Q => Scalar::from_i64(field, rng.int(3)),
            Field::Fp(p) => Scalar::from_i64(field, rng.below(p) as i64),
        })
        .expect("shape");
        if m.rank() == n {
            return m;
        }
    }
}

/// Fill the catalogue shape with random coefficients, honouring the
/// prescribed zero blocks and, when a sub-stratum was requested, the
/// displayed normal form of that sub-stratum (randomizing the free blocks).
fn fill_shape(
    row: &strata::CatalogueRow,
    sublabel: Option<SubLabel>,
    field: Field,
    bound: u64,
    rng: &mut Rng,
) -> Result<GradedMorphism> {
    let mut entries = Vec::new();
    for &t in &row.target {
        for &s in &row.source {
            let d = t - s;
            if d < 0 || row.zero_blocks.contains(&(t, s)) {
                entries.push(Form::zero(field, d.max(0) as usize));
            } else {
                entries.push(random_form(field, d as usize, bound, rng));
            }
        }
    }
    let phi = GradedMorphism::new(row.source.clone(), row.target.clone(), entries)?;
    let phi = match (row.chi, row.index, sublabel) {
        // Open stratum of M(5,3), codimension-one part: the linear column
        // spans only a pencil.
        (3, 0, Some(SubLabel::X01)) => {
            let lin = phi.cols_with_twist(-1)[0];
            let l1 = random_linear_in(field, &[0, 1, 2], bound, rng);
            let l2 = random_linear_in(field, &[0, 1, 2], bound, rng);
            let a = Scalar::from_i64(field, rng.int(bound));
            let b = Scalar::from_i64(field, rng.int(bound));
            let l3 = l1.scale(&a)?.add(&l2.scale(&b)?)?;
            replace_column(&phi, lin, &[l1, l2, l3])?
        }
        // Codimension-one part of X2 in M(5,3): the three maximal minors of
        // the linear block share a linear factor (rank drop on a line).
        (3, 2, Some(SubLabel::X21)) => {
            let rows2 = phi.rows_with_twist(-1);
            let cols3 = phi.cols_with_twist(-2);
            let c: Vec<Scalar> = (0..2).map(|_| Scalar::from_i64(field, rng.nonzero_int(bound))).collect();
            let x = Form::var(field, 0);
            let mut phi2 = phi.clone();
            for (ri, &i) in rows2.iter().enumerate() {
                for &j in cols3.iter() {
                    let u = random_linear_in(field, &[1, 2], bound, rng);
                    let b = Scalar::from_i64(field, rng.int(bound));
                    let e = u.scale(&c[ri])?.add(&x.scale(&b)?)?;
                    phi2 = replace_entry(&phi2, i, j, &e)?;
                }
            }
            phi2
        }
        // Kernel twist 4 in the open stratum of M(5,1): the block-triangular
        // normal form whose minors are m (q, l2 S, l1 S, m S), conjugated by
        // random constant changes of basis.
        (1, 0, Some(SubLabel::X01)) => {
            let rows3 = phi.rows_with_twist(-1);
            let cols4 = phi.cols_with_twist(-2);
            let rand_lin = |rng: &mut Rng| random_linear_in(field, &[0, 1, 2], bound, rng);
            let (l1, l2, m) = (rand_lin(rng), rand_lin(rng), rand_lin(rng));
            let (a, b, c, s) = (rand_lin(rng), rand_lin(rng), rand_lin(rng), rand_lin(rng));
            let zero = Form::zero(field, 1);
            let normal: [[Form; 4]; 3] = [
                [l1, m.clone(), zero.clone(), zero.clone()],
                [l2, zero.clone(), m, zero.clone()],
                [a, b, c, s],
            ];
            let g = random_invertible(field, 3, rng);
            let h = random_invertible(field, 4, rng);
            let mut phi2 = phi.clone();
            for (ri, &i) in rows3.iter().enumerate() {
                for (cj, &j) in cols4.iter().enumerate() {
                    let mut acc = Form::zero(field, 1);
                    for k in 0..3 {
                        for l in 0..4 {
                            let coeff = g.at(ri, k).mul(h.at(l, cj))?;
                            if !coeff.is_zero() && !normal[k][l].is_zero() {
                                acc = acc.add(&normal[k][l].scale(&coeff)?)?;
                            }
                        }
                    }
                    phi2 = replace_entry(&phi2, i, j, &acc)?;
                }
            }
            phi2
        }
        // Kernel twist 3: the Koszul normal form with a random fourth column,
        // conjugated by random constant row/column changes.
        (1, 0, Some(SubLabel::X02)) => {
            let rows3 = phi.rows_with_twist(-1);
            let cols4 = phi.cols_with_twist(-2);
            let x = Form::var(field, 0);
            let y = Form::var(field, 1);
            let z = Form::var(field, 2);
            let zero = Form::zero(field, 1);
            let v: Vec<Form> = (0..3).map(|_| random_linear_in(field, &[0, 1, 2], bound, rng)).collect();
            let normal: [[Form; 4]; 3] = [
                [y.neg(), x.clone(), zero.clone(), v[0].clone()],
                [z.neg(), zero.clone(), x.clone(), v[1].clone()],
                [zero.clone(), z.neg(), y.clone(), v[2].clone()],
            ];
            let g = random_invertible(field, 3, rng);
            let h = random_invertible(field, 4, rng);
            let mut phi2 = phi.clone();
            for (ri, &i) in rows3.iter().enumerate() {
                for (cj, &j) in cols4.iter().enumerate() {
                    let mut acc = Form::zero(field, 1);
                    for k in 0..3 {
                        for l in 0..4 {
                            let coeff = g.at(ri, k).mul(h.at(l, cj))?;
                            if !coeff.is_zero() && !normal[k][l].is_zero() {
                                acc = acc.add(&normal[k][l].scale(&coeff)?)?;
                            }
                        }
                    }
                    phi2 = replace_entry(&phi2, i, j, &acc)?;
                }
            }
            phi2
        }
        // Common linear factor of the two defining quadratics of X1 in
        // M(5,1).
        (1, 1, Some(SubLabel::X11)) => {
            let col = phi.cols_with_twist(-2)[0];
            let ell = random_linear_in(field, &[0, 1, 2], bound, rng);
            let m1 = random_linear_in(field, &[0, 1, 2], bound, rng);
            let m2 = random_linear_in(field, &[0, 1, 2], bound, rng);
            replace_column(&phi, col, &[ell.mul(&m1)?, ell.mul(&m2)?])?
        }
        // Properly semi-stable members of the open stratum of M(5,0): plant
        // a block-triangular form and conjugate.
        (0, 0, Some(SubLabel::StrictlySemistable)) => {
            let m = 1 + rng.below(4) as usize;
            let mut entries = Vec::with_capacity(25);
            for i in 0..5 {
                for j in 0..5 {
                    // columns >= 5 - m are supported in the top m rows
                    if j >= 5 - m && i >= m {
                        entries.push(Form::zero(field, 1));
                    } else {
                        entries.push(random_linear_in(field, &[0, 1, 2], bound, rng));
                    }
                }
            }
            let planted = GradedMorphism::new(vec![-2; 5], vec![-1; 5], entries)?;
            let g = random_invertible(field, 5, rng);
            let h = random_invertible(field, 5, rng);
            planted.recombine(&g, &h)?
        }
        _ => phi,
    };
    phi.validated()
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

fn replace_column(phi: &GradedMorphism, j: usize, col: &[Form]) -> Result<GradedMorphism> {
    let mut out = phi.clone();
    for (i, e) in col.iter().enumerate() {
        out = replace_entry(&out, i, j, e)?;
    }
    Ok(out)
}

/// Fill the requested catalogue shape with random coefficients and retry
/// until the classifier confirms the requested label (and sub-label, when
/// one was asked for).  Deterministic for a fixed seed.
pub fn sample_stratum(req: &SampleRequest) -> Result<GradedMorphism> {
    if req.retry_cap == 0 {
        return Err(Error::Other("retry cap must be at least 1".into()));
    }
    let Some(index) = req.label.index() else {
        return Err(Error::Other("only catalogue strata X0..X3 can be sampled".into()));
    };
    // Dual spaces: sample the primal stratum and dualize.
    if !req.space.is_primal() {
        let (primal, k) = req.space.dual();
        let mut inner = req.clone();
        inner.space = primal;
        let phi = sample_stratum(&inner)?;
        return phi.dual_resolution(k);
    }
    let row = catalogue(req.space.chi)
        .expect("primal catalogue")
        .into_iter()
        .nth(index)
        .expect("stratum index");
    let mut rng = Rng::new(req.seed ^ 0x9d_0c_2b_55_71_u64.wrapping_mul(index as u64 + 1));
    for _ in 0..req.retry_cap {
        let phi = fill_shape(&row, req.sublabel, req.field, req.coefficient_bound, &mut rng)?;
        let rep = strata::classify(req.space, &phi)?;
        if rep.label != req.label {
            continue;
        }
        if let Some(sub) = req.sublabel {
            if rep.sublabel != Some(sub) {
                continue;
            }
        }
        return Ok(phi);
    }
    Err(Error::SamplerExhausted {
        space: req.space.to_string(),
        label: req.label.as_str().into(),
        retries: req.retry_cap,
    })
}

/// Number of retries the sampler needed (for genericity diagnostics).
pub fn sample_retry_count(req: &SampleRequest) -> Result<u32> {
    let Some(index) = req.label.index() else {
        return Err(Error::Other("only catalogue strata X0..X3 can be sampled".into()));
    };
    if !req.space.is_primal() {
        return Err(Error::Other("retry counting runs on primal spaces".into()));
    }
    let row = catalogue(req.space.chi)
        .expect("primal catalogue")
        .into_iter()
        .nth(index)
        .expect("stratum index");
    let mut rng = Rng::new(req.seed ^ 0x9d_0c_2b_55_71_u64.wrapping_mul(index as u64 + 1));
    for attempt in 0..req.retry_cap {
        let phi = fill_shape(&row, req.sublabel, req.field, req.coefficient_bound, &mut rng)?;
        let rep = strata::classify(req.space, &phi)?;
        if rep.label == req.label
            && (req.sublabel.is_none() || rep.sublabel == req.sublabel)
        {
            return Ok(attempt + 1);
        }
    }
    Err(Error::SamplerExhausted {
        space: req.space.to_string(),
        label: req.label.as_str().into(),
        retries: req.retry_cap,
    })
}
