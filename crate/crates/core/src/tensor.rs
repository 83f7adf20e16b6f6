//! (1,1)-tensors on `A + A*` in both representations, and the deformation /
//! torsion / concomitant calculus built on them.
//!
//! A skew-symmetric tensor lives in two equivalent forms: a `2d x 2d` matrix
//! over polynomials in x (block form `(N, pi; omega, -N*)`), and a degree-2
//! function `N + pi + omega` with no momentum terms. The function acts on
//! sections by `J(X) = {X, J}`, and the two pictures are glued by the
//! contract
//!
//! ```text
//! dorfman(Theta_J)(X,Y) = [J X, Y] + [X, J Y] - J [X, Y]
//! ```
//!
//! for all sections, where `Theta_J = {J, Theta}`. Non-skew endomorphisms
//! (for instance even powers `I^2`) are first-class at the bracket-operator
//! level; only the function-level deformation is reserved for skew tensors.

use crate::algebra::{left_partial, Generator, Rat, Signature, SuperPolynomial};
use crate::bracket::{bracket, bracket2};
use crate::courant::{basis_sections, PreCourant, Section};
use crate::error::{Error, Result};
use num_traits::{One, Zero};
use std::fmt;

/// A vector bundle endomorphism of `A + A*`: a `2d x 2d` matrix whose entries
/// are polynomials in the base coordinates only. Basis order: `theta^1..
/// theta^d` (frame of A) then `xi_1..xi_d` (frame of A*).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Endomorphism {
    sig: Signature,
    size: usize,
    entries: Vec<SuperPolynomial>, // row-major
}

impl Endomorphism {
    pub fn zero(sig: Signature) -> Self {
        let size = 2 * sig.d as usize;
        Endomorphism {
            sig,
            size,
            entries: vec![SuperPolynomial::zero(sig); size * size],
        }
    }

    pub fn identity(sig: Signature) -> Self {
        Endomorphism::scalar(sig, &Rat::one())
    }

    pub fn scalar(sig: Signature, c: &Rat) -> Self {
        let mut e = Endomorphism::zero(sig);
        for i in 0..e.size {
            e.set(i, i, SuperPolynomial::constant(sig, c.clone()));
        }
        e
    }

    pub fn from_entries(sig: Signature, entries: Vec<SuperPolynomial>) -> Result<Self> {
        let size = 2 * sig.d as usize;
        if entries.len() != size * size {
            return Err(Error::Invalid(format!(
                "endomorphism needs {} entries, got {}",
                size * size,
                entries.len()
            )));
        }
        for p in &entries {
            if p.signature() != sig {
                return Err(Error::SignatureMismatch(sig, p.signature()));
            }
            p.expect_degree(0)?;
        }
        Ok(Endomorphism { sig, size, entries })
    }

    /// Assemble from blocks `(N, P; W, M)` with `N: A->A`, `P: A*->A`,
    /// `W: A->A*`, `M: A*->A*`, each `d x d` row-major.
    pub fn from_blocks(
        sig: Signature,
        n: &[SuperPolynomial],
        p: &[SuperPolynomial],
        w: &[SuperPolynomial],
        m: &[SuperPolynomial],
    ) -> Result<Self> {
        let d = sig.d as usize;
        if [n, p, w, m].iter().any(|b| b.len() != d * d) {
            return Err(Error::Invalid("each block must be d x d".into()));
        }
        let mut out = Endomorphism::zero(sig);
        for i in 0..d {
            for j in 0..d {
                out.set(i, j, n[i * d + j].clone());
                out.set(i, d + j, p[i * d + j].clone());
                out.set(d + i, j, w[i * d + j].clone());
                out.set(d + i, d + j, m[i * d + j].clone());
            }
        }
        for e in &out.entries {
            e.expect_degree(0)?;
        }
        Ok(out)
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, i: usize, j: usize) -> &SuperPolynomial {
        &self.entries[i * self.size + j]
    }

    fn set(&mut self, i: usize, j: usize, v: SuperPolynomial) {
        self.entries[i * self.size + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn add(&self, other: &Endomorphism) -> Result<Endomorphism> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch(self.sig, other.sig));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(Endomorphism {
            sig: self.sig,
            size: self.size,
            entries,
        })
    }

    pub fn sub(&self, other: &Endomorphism) -> Result<Endomorphism> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Endomorphism {
        Endomorphism {
            sig: self.sig,
            size: self.size,
            entries: self.entries.iter().map(|e| e.neg()).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Endomorphism {
        Endomorphism {
            sig: self.sig,
            size: self.size,
            entries: self.entries.iter().map(|e| e.scale(c)).collect(),
        }
    }

    /// Composition `(self . other)(u) = self(other(u))`.
    pub fn compose(&self, other: &Endomorphism) -> Result<Endomorphism> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch(self.sig, other.sig));
        }
        let mut out = Endomorphism::zero(self.sig);
        for i in 0..self.size {
            for j in 0..self.size {
                let mut acc = SuperPolynomial::zero(self.sig);
                for k in 0..self.size {
                    let prod = self.entry(i, k).mul(other.entry(k, j))?;
                    acc = acc.add(&prod)?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// `power(E, 0)` is the identity.
    pub fn power(&self, n: u32) -> Result<Endomorphism> {
        let mut out = Endomorphism::identity(self.sig);
        for _ in 0..n {
            out = out.compose(self)?;
        }
        Ok(out)
    }

    /// The adjoint w.r.t. the canonical pairing: `<E u, v> = <u, E* v>`.
    pub fn adjoint(&self) -> Endomorphism {
        let d = self.sig.d as usize;
        let swap = |i: usize| if i < d { i + d } else { i - d };
        let mut out = Endomorphism::zero(self.sig);
        for i in 0..self.size {
            for j in 0..self.size {
                out.set(i, j, self.entry(swap(j), swap(i)).clone());
            }
        }
        out
    }

    /// Exact check of `E + E* = 0`.
    pub fn is_skew(&self) -> bool {
        self.add(&self.adjoint()).map(|s| s.is_zero()).unwrap_or(false)
    }

    /// Do `self` and `other` anti-commute (`E F + F E = 0`)?
    pub fn anti_commutes_with(&self, other: &Endomorphism) -> Result<bool> {
        Ok(self
            .compose(other)?
            .add(&other.compose(self)?)?
            .is_zero())
    }

    /// Solve `E^2 = alpha * id` for a rational constant.
    pub fn scalar_square(&self) -> Result<Option<Rat>> {
        let sq = self.compose(self)?;
        let mut alpha: Option<Rat> = None;
        for i in 0..self.size {
            for j in 0..self.size {
                let e = sq.entry(i, j);
                if i != j {
                    if !e.is_zero() {
                        return Ok(None);
                    }
                    continue;
                }
                // diagonal entries must all be one constant
                let c = if e.is_zero() {
                    Rat::zero()
                } else {
                    match e.proportionality(&SuperPolynomial::constant(self.sig, Rat::one())) {
                        Some(c) => c,
                        None => return Ok(None),
                    }
                };
                match &alpha {
                    None => alpha = Some(c),
                    Some(a) if *a == c => {}
                    Some(_) => return Ok(None),
                }
            }
        }
        Ok(Some(alpha.unwrap_or_else(Rat::zero)))
    }

    /// Matrix action on a section.
    pub fn apply(&self, x: &Section) -> Result<Section> {
        if x.as_poly().signature() != self.sig {
            return Err(Error::SignatureMismatch(self.sig, x.as_poly().signature()));
        }
        let coeffs = section_coefficients(x);
        let basis = basis_sections(self.sig);
        let mut out = SuperPolynomial::zero(self.sig);
        for (i, b) in basis.iter().enumerate() {
            let mut acc = SuperPolynomial::zero(self.sig);
            for (j, c) in coeffs.iter().enumerate() {
                if !c.is_zero() {
                    acc = acc.add(&self.entry(i, j).mul(c)?)?;
                }
            }
            out = out.add(&acc.mul(b.as_poly())?)?;
        }
        Section::new(out)
    }
}

impl fmt::Display for Endomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.size {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.size {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.entry(i, j))?;
            }
        }
        Ok(())
    }
}

/// Coefficients of a section in the basis `theta^1..theta^d, xi_1..xi_d`,
/// as polynomials in x.
pub fn section_coefficients(x: &Section) -> Vec<SuperPolynomial> {
    let sig = x.as_poly().signature();
    let mut out = Vec::with_capacity(2 * sig.d as usize);
    for a in 1..=sig.d {
        out.push(left_partial(x.as_poly(), Generator::Theta(a)));
    }
    for a in 1..=sig.d {
        out.push(left_partial(x.as_poly(), Generator::Xi(a)));
    }
    out
}

/// A skew-symmetric (1,1)-tensor in its function representation: a degree-2
/// function with no momentum terms (bidegree components (2,0), (1,1), (0,2)).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorFunction(SuperPolynomial);

impl TensorFunction {
    pub fn new(poly: SuperPolynomial) -> Result<Self> {
        poly.expect_degree(2)?;
        if poly.has_momentum() {
            return Err(Error::MomentumTerms(poly.to_string()));
        }
        Ok(TensorFunction(poly))
    }

    pub fn zero(sig: Signature) -> Self {
        TensorFunction(SuperPolynomial::zero(sig))
    }

    pub fn as_poly(&self) -> &SuperPolynomial {
        &self.0
    }

    pub fn signature(&self) -> Signature {
        self.0.signature()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, other: &TensorFunction) -> Result<TensorFunction> {
        Ok(TensorFunction(self.0.add(&other.0)?))
    }

    pub fn scale(&self, c: &Rat) -> TensorFunction {
        TensorFunction(self.0.scale(c))
    }

    /// Action on sections: `J(X) = {X, J}`.
    pub fn apply(&self, x: &Section) -> Result<Section> {
        Section::new(bracket(x.as_poly(), &self.0)?)
    }

    /// Matrix form of this tensor.
    pub fn endo(&self) -> Endomorphism {
        endo_of(self)
    }
}

impl fmt::Display for TensorFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Matrix form of a skew tensor: column `j` is `{u_j, J}` in the section
/// basis.
pub fn endo_of(j: &TensorFunction) -> Endomorphism {
    let sig = j.signature();
    let basis = basis_sections(sig);
    let mut out = Endomorphism::zero(sig);
    for (col, u) in basis.iter().enumerate() {
        let image = j.apply(u).expect("degree-1 action");
        for (row, c) in section_coefficients(&image).into_iter().enumerate() {
            out.set(row, col, c);
        }
    }
    out
}

/// Function form of a skew endomorphism. Errors when `E + E* != 0` (for
/// example `I^2` is generally not skew).
pub fn func_of(e: &Endomorphism) -> Result<TensorFunction> {
    if !e.is_skew() {
        return Err(Error::NotSkew(e.to_string()));
    }
    let sig = e.signature();
    let d = sig.d as usize;
    let mut acc = SuperPolynomial::zero(sig);
    let gen = |g: Generator| SuperPolynomial::generator(sig, g).expect("in range");
    // N block: sum N^a_b xi_b theta^a
    for a in 1..=d {
        for b in 1..=d {
            let coeff = e.entry(a - 1, b - 1);
            if !coeff.is_zero() {
                let m = gen(Generator::Xi(b as u8)).mul(&gen(Generator::Theta(a as u8)))?;
                acc = acc.add(&coeff.mul(&m)?)?;
            }
        }
    }
    // pi block (A* -> A): coefficient of theta^a theta^b sits in column d+a
    for a in 1..=d {
        for b in (a + 1)..=d {
            let coeff = e.entry(b - 1, d + a - 1);
            if !coeff.is_zero() {
                let m = gen(Generator::Theta(a as u8)).mul(&gen(Generator::Theta(b as u8)))?;
                acc = acc.add(&coeff.mul(&m)?)?;
            }
        }
    }
    // omega block (A -> A*)
    for a in 1..=d {
        for b in (a + 1)..=d {
            let coeff = e.entry(d + b - 1, a - 1);
            if !coeff.is_zero() {
                let m = gen(Generator::Xi(a as u8)).mul(&gen(Generator::Xi(b as u8)))?;
                acc = acc.add(&coeff.mul(&m)?)?;
            }
        }
    }
    TensorFunction::new(acc)
}

/// Either representation of a (1,1)-tensor, as bound in a setup definition.
/// Function-form tensors are always skew; matrix-form tensors may not be.
#[derive(Debug, Clone)]
pub enum Tensor {
    Skew(TensorFunction),
    General(Endomorphism),
}

impl Tensor {
    pub fn endo(&self) -> Endomorphism {
        match self {
            Tensor::Skew(tf) => tf.endo(),
            Tensor::General(e) => e.clone(),
        }
    }

    /// The function form, when the tensor is skew.
    pub fn skew(&self) -> Option<TensorFunction> {
        match self {
            Tensor::Skew(tf) => Some(tf.clone()),
            Tensor::General(e) => func_of(e).ok(),
        }
    }

    pub fn signature(&self) -> Signature {
        match self {
            Tensor::Skew(tf) => tf.signature(),
            Tensor::General(e) => e.signature(),
        }
    }
}

/// `Theta_J = {J, Theta}`.
pub fn deform_theta(theta: &PreCourant, j: &TensorFunction) -> Result<PreCourant> {
    PreCourant::new(bracket(j.as_poly(), theta.as_poly())?)
}

/// Deformation by an arbitrary degree-2 function (used for brackets of
/// tensors such as `{J,{I,J}}`).
pub fn deform_theta_by_function(theta: &PreCourant, f: &SuperPolynomial) -> Result<PreCourant> {
    f.expect_degree(2)?;
    PreCourant::new(bracket(f, theta.as_poly())?)
}

/// Iterated deformation `Theta_{J_1, ..., J_s} = {J_s, ... {J_1, Theta}}`.
pub fn theta_path(theta: &PreCourant, steps: &[&TensorFunction]) -> Result<PreCourant> {
    let mut out = theta.clone();
    for j in steps {
        out = deform_theta(&out, j)?;
    }
    Ok(out)
}

/// A Dorfman bracket deformed by a list of endomorphisms:
/// `[X,Y]_T = [T X, Y] + [X, T Y] - T [X, Y]`, applied left to right.
#[derive(Debug, Clone)]
pub struct BracketOp {
    base: PreCourant,
    steps: Vec<Endomorphism>,
}

impl BracketOp {
    pub fn new(base: PreCourant) -> Self {
        BracketOp {
            base,
            steps: Vec::new(),
        }
    }

    pub fn deform(&self, t: &Endomorphism) -> BracketOp {
        let mut steps = self.steps.clone();
        steps.push(t.clone());
        BracketOp {
            base: self.base.clone(),
            steps,
        }
    }

    pub fn eval(&self, x: &Section, y: &Section) -> Result<Section> {
        self.eval_upto(self.steps.len(), x, y)
    }

    fn eval_upto(&self, k: usize, x: &Section, y: &Section) -> Result<Section> {
        if k == 0 {
            return self.base.dorfman(x, y);
        }
        let t = &self.steps[k - 1];
        let a = self.eval_upto(k - 1, &t.apply(x)?, y)?;
        let b = self.eval_upto(k - 1, x, &t.apply(y)?)?;
        let c = t.apply(&self.eval_upto(k - 1, x, y)?)?;
        a.add(&b)?.sub(&c)
    }
}

/// Nijenhuis torsion `T_Theta I (X,Y) = [IX,IY] - I([X,Y]_I)`, for an
/// arbitrary endomorphism.
pub fn torsion(
    theta: &PreCourant,
    t: &Endomorphism,
    x: &Section,
    y: &Section,
) -> Result<Section> {
    let tx = t.apply(x)?;
    let ty = t.apply(y)?;
    let a = theta.dorfman(&tx, &ty)?;
    let b = t.apply(&theta.dorfman(&tx, y)?)?;
    let c = t.apply(&theta.dorfman(x, &ty)?)?;
    let d = t.apply(&t.apply(&theta.dorfman(x, y)?)?)?;
    a.sub(&b)?.sub(&c)?.add(&d)
}

/// Torsion vanishing on all basis pairs (torsion is function-bilinear, so
/// this settles it for all sections).
pub fn is_nijenhuis(theta: &PreCourant, t: &Endomorphism) -> Result<bool> {
    let basis = basis_sections(theta.signature());
    for x in &basis {
        for y in &basis {
            if !torsion(theta, t, x, y)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Does `T_Theta I` vanish whenever one argument is in the image of `J`?
pub fn torsion_vanishes_on_image(
    theta: &PreCourant,
    i: &Endomorphism,
    j: &Endomorphism,
) -> Result<bool> {
    let basis = basis_sections(theta.signature());
    for x in &basis {
        let jx = j.apply(x)?;
        for y in &basis {
            if !torsion(theta, i, &jx, y)?.is_zero() {
                return Ok(false);
            }
            if !torsion(theta, i, y, &jx)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Supergeometric torsion `T_Theta I = 1/2 (Theta_{I,I} - alpha Theta)`,
/// valid for skew `I` with `I^2 = alpha id` (checked exactly).
pub fn torsion_function(
    theta: &PreCourant,
    i: &TensorFunction,
    alpha: &Rat,
) -> Result<SuperPolynomial> {
    let e = i.endo();
    match e.scalar_square()? {
        Some(a) if &a == alpha => {}
        other => {
            return Err(Error::NotScalarSquare(format!(
                "expected I^2 = {} id, found {}",
                crate::algebra::format_rat(alpha),
                match other {
                    Some(a) => format!("I^2 = {} id", crate::algebra::format_rat(&a)),
                    None => "I^2 not a scalar multiple of the identity".into(),
                }
            )))
        }
    }
    let tii = theta_path(theta, &[i, i])?;
    Ok(tii
        .as_poly()
        .sub(&theta.as_poly().scale(alpha))?
        .scale(&Rat::new(1.into(), 2.into())))
}

/// Concomitant `C_Theta(I,J) = Theta_{I,J} + Theta_{J,I}`, a degree-3
/// function, symmetric in (I,J). Its vanishing is "I and J anti-commute
/// w.r.t. Theta".
pub fn concomitant(
    theta: &PreCourant,
    i: &TensorFunction,
    j: &TensorFunction,
) -> Result<SuperPolynomial> {
    concomitant_funcs(theta, i.as_poly(), j.as_poly())
}

/// Concomitant of two arbitrary degree-2 functions.
pub fn concomitant_funcs(
    theta: &PreCourant,
    i: &SuperPolynomial,
    j: &SuperPolynomial,
) -> Result<SuperPolynomial> {
    let a = bracket2(j, i, theta.as_poly())?;
    let b = bracket2(i, j, theta.as_poly())?;
    a.add(&b)
}

/// Operator form `C_Theta(I,J)(X,Y) = [X,Y]_{I,J} + [X,Y]_{J,I}`, valid for
/// arbitrary endomorphisms.
pub fn concomitant_op(
    theta: &PreCourant,
    i: &Endomorphism,
    j: &Endomorphism,
    x: &Section,
    y: &Section,
) -> Result<Section> {
    let base = BracketOp::new(theta.clone());
    let ij = base.deform(i).deform(j).eval(x, y)?;
    let ji = base.deform(j).deform(i).eval(x, y)?;
    ij.add(&ji)
}

/// Nijenhuis concomitant
/// `N_Theta(I,J)(X,Y) = [IX,JY] - I[X,JY] - J[IX,Y] + IJ[X,Y] + (I <-> J)`.
pub fn nijenhuis_concomitant(
    theta: &PreCourant,
    i: &Endomorphism,
    j: &Endomorphism,
    x: &Section,
    y: &Section,
) -> Result<Section> {
    let half = |a: &Endomorphism, b: &Endomorphism| -> Result<Section> {
        let ax = a.apply(x)?;
        let by = b.apply(y)?;
        let t1 = theta.dorfman(&ax, &by)?;
        let t2 = a.apply(&theta.dorfman(x, &by)?)?;
        let t3 = b.apply(&theta.dorfman(&ax, y)?)?;
        let t4 = a.apply(&b.apply(&theta.dorfman(x, y)?)?)?;
        t1.sub(&t2)?.sub(&t3)?.add(&t4)
    };
    half(i, j)?.add(&half(j, i)?)
}

/// Solve `Theta_{J,J} = eta Theta` for a rational constant. When both sides
/// vanish the constant is 0 by convention; `None` means no constant exists.
pub fn deforming_eta(theta: &PreCourant, j: &TensorFunction) -> Result<Option<Rat>> {
    let tjj = theta_path(theta, &[j, j])?;
    Ok(tjj.as_poly().proportionality(theta.as_poly()))
}

/// `Theta_{J,J} = 0`.
pub fn is_poisson(theta: &PreCourant, j: &TensorFunction) -> Result<bool> {
    Ok(theta_path(theta, &[j, j])?.is_zero())
}

/// Classification record for a tensor pair `(I, J)`: `I` is tested for the
/// Nijenhuis role, `J` for the deforming / Poisson role.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairClassification {
    pub anti_commute: bool,
    pub anti_commute_wrt_theta: bool,
    pub compatible_pair: bool,
    pub nijenhuis_i: bool,
    pub nijenhuis_j: bool,
    pub deforming_eta: Option<Rat>,
    pub poisson_j: bool,
    /// Theta = 0 makes every predicate vacuously true; reported explicitly.
    pub degenerate_theta: bool,
    pub pair_class: PairClass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairClass {
    None,
    Compatible,
    DeformingNijenhuis,
    PoissonNijenhuis,
    Nijenhuis,
}

impl fmt::Display for PairClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PairClass::None => "none",
            PairClass::Compatible => "compatible",
            PairClass::DeformingNijenhuis => "deforming-nijenhuis",
            PairClass::PoissonNijenhuis => "poisson-nijenhuis",
            PairClass::Nijenhuis => "nijenhuis",
        };
        write!(f, "{s}")
    }
}

impl PairClass {
    pub fn parse(s: &str) -> Option<PairClass> {
        match s {
            "none" => Some(PairClass::None),
            "compatible" => Some(PairClass::Compatible),
            "deforming-nijenhuis" => Some(PairClass::DeformingNijenhuis),
            "poisson-nijenhuis" => Some(PairClass::PoissonNijenhuis),
            "nijenhuis" => Some(PairClass::Nijenhuis),
            _ => None,
        }
    }
}

/// Evaluate every pair predicate exactly. Class precedence when several
/// apply: Poisson-Nijenhuis, then deforming-Nijenhuis, then Nijenhuis, then
/// compatible.
pub fn classify_pair(
    theta: &PreCourant,
    i: &TensorFunction,
    j: &TensorFunction,
) -> Result<PairClassification> {
    let ei = i.endo();
    let ej = j.endo();
    let anti_commute = ei.anti_commutes_with(&ej)?;
    let anti_commute_wrt_theta = concomitant(theta, i, j)?.is_zero();
    let compatible_pair = anti_commute && anti_commute_wrt_theta;
    let nijenhuis_i = is_nijenhuis(theta, &ei)?;
    let nijenhuis_j = is_nijenhuis(theta, &ej)?;
    let deforming_eta = deforming_eta(theta, j)?;
    let poisson_j = is_poisson(theta, j)?;
    let pair_class = if compatible_pair && poisson_j && nijenhuis_i {
        PairClass::PoissonNijenhuis
    } else if compatible_pair && deforming_eta.is_some() && nijenhuis_i {
        PairClass::DeformingNijenhuis
    } else if compatible_pair && nijenhuis_i && nijenhuis_j {
        PairClass::Nijenhuis
    } else if compatible_pair {
        PairClass::Compatible
    } else {
        PairClass::None
    };
    Ok(PairClassification {
        anti_commute,
        anti_commute_wrt_theta,
        compatible_pair,
        nijenhuis_i,
        nijenhuis_j,
        deforming_eta,
        poisson_j,
        degenerate_theta: theta.is_zero(),
        pair_class,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn sig(n: u8, d: u8) -> Signature {
        Signature::new(n, d).unwrap()
    }

    fn poly(s: Signature, terms: &[(&[Generator], Rat)]) -> SuperPolynomial {
        let raw: Vec<(Vec<Generator>, Rat)> =
            terms.iter().map(|(w, c)| (w.to_vec(), c.clone())).collect();
        SuperPolynomial::normalize(s, &raw).unwrap()
    }

    /// Heisenberg structure with dorfman(theta^1,theta^2) = theta^3.
    fn heisenberg(s: Signature) -> PreCourant {
        PreCourant::new(poly(
            s,
            &[(
                &[Generator::Xi(2), Generator::Xi(1), Generator::Theta(3)],
                Rat::one(),
            )],
        ))
        .unwrap()
    }

    fn pi_tensor(s: Signature, a: u8, b: u8, c: Rat) -> TensorFunction {
        TensorFunction::new(poly(s, &[(&[Generator::Theta(a), Generator::Theta(b)], c)])).unwrap()
    }

    fn omega_tensor(s: Signature, a: u8, b: u8, c: Rat) -> TensorFunction {
        TensorFunction::new(poly(s, &[(&[Generator::Xi(a), Generator::Xi(b)], c)])).unwrap()
    }

    /// N-type tensor from a constant d x d matrix.
    fn n_tensor(s: Signature, n: &[&[i64]]) -> TensorFunction {
        let mut terms: Vec<(Vec<Generator>, Rat)> = Vec::new();
        for (a, row) in n.iter().enumerate() {
            for (b, &v) in row.iter().enumerate() {
                if v != 0 {
                    terms.push((
                        vec![Generator::Xi(b as u8 + 1), Generator::Theta(a as u8 + 1)],
                        rat(v, 1),
                    ));
                }
            }
        }
        TensorFunction::new(SuperPolynomial::normalize(s, &terms).unwrap()).unwrap()
    }

    #[test]
    fn pi_tensor_has_only_upper_right_block() {
        let s = sig(0, 2);
        let j = pi_tensor(s, 1, 2, Rat::one());
        let e = j.endo();
        let d = 2;
        for i in 0..2 * d {
            for k in 0..2 * d {
                let in_pi_block = i < d && k >= d;
                assert_eq!(e.entry(i, k).is_zero(), !in_pi_block || (i == k - d));
            }
        }
        assert!(e.is_skew());
        // J_pi . J_pi = 0
        assert!(e.compose(&e).unwrap().is_zero());
    }

    #[test]
    fn identity_is_not_skew() {
        let s = sig(0, 2);
        assert!(!Endomorphism::identity(s).is_skew());
        assert!(func_of(&Endomorphism::identity(s)).is_err());
    }

    #[test]
    fn n_type_tensors_are_skew() {
        let s = sig(0, 3);
        let n = n_tensor(s, &[&[0, 1, 0], &[2, 0, 0], &[0, 0, -1]]);
        let e = n.endo();
        assert!(e.is_skew());
        // lower-right block is -N^T
        assert_eq!(e.entry(3, 4), &SuperPolynomial::constant(s, rat(-2, 1)));
        assert_eq!(e.entry(4, 3), &SuperPolynomial::constant(s, rat(-1, 1)));
    }

    #[test]
    fn roundtrip_func_endo() {
        let s = sig(1, 3);
        let x1 = SuperPolynomial::generator(s, Generator::X(1)).unwrap();
        let j = TensorFunction::new(
            poly(
                s,
                &[
                    (&[Generator::Theta(1), Generator::Theta(2)], rat(2, 3)),
                    (&[Generator::Xi(1), Generator::Xi(3)], rat(-1, 2)),
                    (&[Generator::Xi(2), Generator::Theta(1)], rat(5, 1)),
                ],
            )
            .add(
                &x1.mul(&poly(
                    s,
                    &[(&[Generator::Xi(1), Generator::Theta(3)], Rat::one())],
                ))
                .unwrap(),
            )
            .unwrap(),
        )
        .unwrap();
        let e = j.endo();
        assert!(e.is_skew());
        let back = func_of(&e).unwrap();
        assert_eq!(back, j);

        // and endo_of . func_of is the identity on skew matrices
        let e2 = back.endo();
        assert_eq!(e2, e);
    }

    #[test]
    fn power_zero_is_identity() {
        let s = sig(0, 2);
        let e = pi_tensor(s, 1, 2, rat(7, 2)).endo();
        assert_eq!(e.power(0).unwrap(), Endomorphism::identity(s));
    }

    #[test]
    fn composition_anticommutator_matches_np_condition() {
        // I_N . J_pi = -J_pi . I_N  iff  N pi# = pi# N*
        let s = sig(0, 2);
        let j = pi_tensor(s, 1, 2, Rat::one());
        // N = diag(1, 2): N pi# != pi# N*
        let n1 = n_tensor(s, &[&[1, 0], &[0, 2]]);
        assert!(!n1.endo().anti_commutes_with(&j.endo()).unwrap());
        // N = diag(1, 1): commutes with everything, N pi# = pi# N*
        let n2 = n_tensor(s, &[&[1, 0], &[0, 1]]);
        assert!(n2.endo().anti_commutes_with(&j.endo()).unwrap());
    }

    #[test]
    fn two_path_deformation_agrees() {
        // dorfman(Theta_J) = deformed bracket of dorfman(Theta) by endo(J),
        // for a mixed skew tensor on the Heisenberg structure.
        let s = sig(0, 3);
        let th = heisenberg(s);
        let j = TensorFunction::new(
            poly(
                s,
                &[
                    (&[Generator::Theta(1), Generator::Theta(3)], rat(2, 1)),
                    (&[Generator::Xi(1), Generator::Xi(2)], rat(-3, 1)),
                    (&[Generator::Xi(2), Generator::Theta(2)], rat(1, 2)),
                ],
            ),
        )
        .unwrap();
        let deformed = deform_theta(&th, &j).unwrap();
        let op = BracketOp::new(th.clone()).deform(&j.endo());
        let basis = basis_sections(s);
        for x in &basis {
            for y in &basis {
                assert_eq!(deformed.dorfman(x, y).unwrap(), op.eval(x, y).unwrap());
            }
        }
    }

    #[test]
    fn torsion_of_identity_and_scalars_vanishes() {
        let s = sig(0, 3);
        let th = heisenberg(s);
        let basis = basis_sections(s);
        for lam in [rat(1, 1), rat(-5, 2), rat(0, 1)] {
            let t = Endomorphism::scalar(s, &lam);
            for x in &basis {
                for y in &basis {
                    assert!(torsion(&th, &t, x, y).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn torsion_equals_second_form() {
        // definition form vs 1/2([X,Y]_{I,I} - [X,Y]_{I^2}) for an arbitrary
        // (non-skew) endomorphism
        let s = sig(0, 3);
        let th = heisenberg(s);
        let mut e = Endomorphism::zero(s);
        let consts: [[i64; 6]; 6] = [
            [0, 1, 0, 2, 0, 0],
            [1, 0, 0, 0, -1, 0],
            [0, 0, 3, 0, 0, 1],
            [0, 2, 0, 1, 0, 0],
            [0, 0, -1, 0, 0, 2],
            [1, 0, 0, 0, 1, 0],
        ];
        for (i, row) in consts.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    e.set(i, j, SuperPolynomial::constant(s, rat(v, 1)));
                }
            }
        }
        assert!(!e.is_skew());
        let base = BracketOp::new(th.clone());
        let op_ii = base.deform(&e).deform(&e);
        let op_sq = base.deform(&e.compose(&e).unwrap());
        let basis = basis_sections(s);
        for x in &basis {
            for y in &basis {
                let lhs = torsion(&th, &e, x, y).unwrap();
                let rhs = op_ii
                    .eval(x, y)
                    .unwrap()
                    .sub(&op_sq.eval(x, y).unwrap())
                    .unwrap()
                    .scale(&rat(1, 2));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn torsion_function_example_j_pi() {
        // T_mu J_pi = 1/2 {pi, {pi, mu}} (alpha = 0)
        let s = sig(0, 3);
        let th = heisenberg(s);
        let j = pi_tensor(s, 1, 2, Rat::one());
        let tf = torsion_function(&th, &j, &rat(0, 1)).unwrap();
        let expected = bracket2(j.as_poly(), j.as_poly(), th.as_poly())
            .unwrap()
            .scale(&rat(1, 2));
        assert_eq!(tf, expected);

        // zero tensor: torsion function is zero
        let z = TensorFunction::zero(s);
        assert!(torsion_function(&th, &z, &rat(0, 1)).unwrap().is_zero());

        // wrong alpha is rejected
        assert!(torsion_function(&th, &j, &rat(1, 1)).is_err());
    }

    #[test]
    fn torsion_function_agrees_with_bilinear_torsion() {
        let s = sig(0, 3);
        let th = heisenberg(s);
        // I with I^2 = id
        let i = n_tensor(s, &[&[1, 0, 0], &[0, -1, 0], &[0, 0, 1]]);
        assert_eq!(i.endo().scalar_square().unwrap(), Some(rat(1, 1)));
        let f = torsion_function(&th, &i, &rat(1, 1)).unwrap();
        let f_struct = PreCourant::new(f).unwrap();
        let basis = basis_sections(s);
        for x in &basis {
            for y in &basis {
                assert_eq!(
                    f_struct.dorfman(x, y).unwrap(),
                    torsion(&th, &i.endo(), x, y).unwrap()
                );
            }
        }
    }

    #[test]
    fn concomitant_symmetry_and_self_value() {
        let s = sig(0, 3);
        let th = heisenberg(s);
        let i = n_tensor(s, &[&[0, 0, 0], &[0, 0, 0], &[1, 0, 0]]);
        let j = pi_tensor(s, 2, 3, Rat::one());
        let cij = concomitant(&th, &i, &j).unwrap();
        let cji = concomitant(&th, &j, &i).unwrap();
        assert_eq!(cij, cji);
        // C(I,I) = 2 Theta_{I,I}
        let cii = concomitant(&th, &i, &i).unwrap();
        let tii = theta_path(&th, &[&i, &i]).unwrap();
        assert_eq!(cii, tii.as_poly().scale(&rat(2, 1)));
    }

    #[test]
    fn nijenhuis_concomitant_polarization() {
        let s = sig(0, 3);
        let th = heisenberg(s);
        let i = n_tensor(s, &[&[0, 1, 0], &[0, 0, 0], &[0, 0, 2]]);
        let j = TensorFunction::new(
            poly(
                s,
                &[
                    (&[Generator::Theta(1), Generator::Theta(2)], Rat::one()),
                    (&[Generator::Xi(1), Generator::Xi(3)], rat(2, 1)),
                ],
            ),
        )
        .unwrap();
        let (ei, ej) = (i.endo(), j.endo());
        let sum = ei.add(&ej).unwrap();
        let basis = basis_sections(s);
        for x in &basis {
            for y in &basis {
                // N(I,I) = 2 T(I)
                let nii = nijenhuis_concomitant(&th, &ei, &ei, x, y).unwrap();
                assert_eq!(nii, torsion(&th, &ei, x, y).unwrap().scale(&rat(2, 1)));
                // T(I+J) = T(I) + T(J) + N(I,J)
                let lhs = torsion(&th, &sum, x, y).unwrap();
                let rhs = torsion(&th, &ei, x, y)
                    .unwrap()
                    .add(&torsion(&th, &ej, x, y).unwrap())
                    .unwrap()
                    .add(&nijenhuis_concomitant(&th, &ei, &ej, x, y).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs);
                // N(I, 0) = 0
                assert!(nijenhuis_concomitant(&th, &ei, &Endomorphism::zero(s), x, y)
                    .unwrap()
                    .is_zero());
            }
        }
    }

    #[test]
    fn central_operator_is_nijenhuis_and_poisson() {
        // Heisenberg, N valued in the center with [g,g] in ker N^2
        let s = sig(0, 3);
        let th = heisenberg(s);
        let n = n_tensor(s, &[&[0, 0, 0], &[0, 0, 0], &[1, 0, 0]]);
        assert!(is_nijenhuis(&th, &n.endo()).unwrap());
        assert!(is_poisson(&th, &n).unwrap());
        assert_eq!(deforming_eta(&th, &n).unwrap(), Some(rat(0, 1)));
    }

    #[test]
    fn j_omega_always_deforming_and_nijenhuis() {
        let s = sig(0, 3);
        let th = heisenberg(s);
        let w = omega_tensor(s, 1, 2, rat(3, 1));
        assert!(is_nijenhuis(&th, &w.endo()).unwrap());
        assert_eq!(deforming_eta(&th, &w).unwrap(), Some(rat(0, 1)));
        // two successive deformations vanish
        assert!(theta_path(&th, &[&w, &w]).unwrap().is_zero());
    }

    #[test]
    fn eta_detection_no_constant() {
        // J_pi with [pi,pi]_mu != 0 on Heisenberg: pi = e1 ^ e2
        let s = sig(0, 3);
        let th = heisenberg(s);
        let j = pi_tensor(s, 1, 2, Rat::one());
        let tjj = theta_path(&th, &[&j, &j]).unwrap();
        assert!(!tjj.is_zero());
        assert_eq!(deforming_eta(&th, &j).unwrap(), None);
        assert!(!is_poisson(&th, &j).unwrap());
    }

    #[test]
    fn classify_pn_pair_on_heisenberg() {
        // pi = e2 ^ e3 is Poisson (e3 central), N: e1 -> e3 central Nijenhuis
        let s = sig(0, 3);
        let th = heisenberg(s);
        let i = n_tensor(s, &[&[0, 0, 0], &[0, 0, 0], &[1, 0, 0]]);
        let j = pi_tensor(s, 2, 3, Rat::one());
        let cls = classify_pair(&th, &i, &j).unwrap();
        assert!(cls.anti_commute);
        assert!(cls.anti_commute_wrt_theta);
        assert!(cls.compatible_pair);
        assert!(cls.nijenhuis_i);
        assert!(cls.poisson_j);
        assert!(!cls.degenerate_theta);
        assert_eq!(cls.pair_class, PairClass::PoissonNijenhuis);
    }

    #[test]
    fn classify_degenerate_theta() {
        let s = sig(0, 2);
        let th = PreCourant::zero(s);
        let i = n_tensor(s, &[&[0, 1], &[-1, 0]]);
        let j = pi_tensor(s, 1, 2, Rat::one());
        let cls = classify_pair(&th, &i, &j).unwrap();
        assert!(cls.degenerate_theta);
        assert!(cls.poisson_j && cls.nijenhuis_i && cls.nijenhuis_j);
    }

    #[test]
    fn self_pair_arithmetic() {
        // (J, J) with J not Nijenhuis: compatible only if J anti-commutes
        // with itself, i.e. J . J = 0
        let s = sig(0, 3);
        let th = heisenberg(s);
        let j = pi_tensor(s, 1, 2, Rat::one());
        let cls = classify_pair(&th, &j, &j).unwrap();
        // J_pi . J_pi = 0, so it anti-commutes with itself
        assert!(cls.anti_commute);
        // but 2 Theta_{J,J} != 0 here
        assert!(!cls.anti_commute_wrt_theta);
        assert!(!cls.compatible_pair);
        assert_eq!(cls.pair_class, PairClass::None);
    }
}
