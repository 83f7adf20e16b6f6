//! Pre-Courant and Courant structures as degree-3 functions.
//!
//! A degree-3 function Theta encodes both the anchor and the Dorfman bracket:
//! `rho(X).f = {{X,Theta},f}` and `[X,Y] = {{X,Theta},Y}`. Theta is a Courant
//! structure exactly when `{Theta,Theta} = 0`; no sampling is involved in
//! that check.

use crate::algebra::{Bidegree, Generator, Rat, Signature, SuperPolynomial};
use crate::bracket::bracket;
use crate::error::Result;
use std::fmt;

/// A section of `A + A*`: a degree-1 function, linear in `xi`/`theta` with
/// polynomial-in-x coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section(SuperPolynomial);

impl Section {
    pub fn new(value: SuperPolynomial) -> Result<Self> {
        value.expect_degree(1)?;
        Ok(Section(value))
    }

    pub fn zero(sig: Signature) -> Self {
        Section(SuperPolynomial::zero(sig))
    }

    pub fn as_poly(&self) -> &SuperPolynomial {
        &self.0
    }

    pub fn into_poly(self) -> SuperPolynomial {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, other: &Section) -> Result<Section> {
        Ok(Section(self.0.add(&other.0)?))
    }

    pub fn sub(&self, other: &Section) -> Result<Section> {
        Ok(Section(self.0.sub(&other.0)?))
    }

    pub fn neg(&self) -> Section {
        Section(self.0.neg())
    }

    pub fn scale(&self, c: &Rat) -> Section {
        Section(self.0.scale(c))
    }

    /// Multiply by a function of the base coordinates.
    pub fn scale_fn(&self, f: &SuperPolynomial) -> Result<Section> {
        f.expect_degree(0)?;
        Section::new(f.mul(&self.0)?)
    }

    /// Canonical pairing `<X,Y> = {X,Y}`, a degree-0 function.
    pub fn pairing(&self, other: &Section) -> Result<SuperPolynomial> {
        bracket(&self.0, &other.0)
    }
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One axiom residual: the section indices (i, j, k) and the two residual
/// polynomials.
pub type AxiomResidual = (usize, usize, usize, SuperPolynomial, SuperPolynomial);

/// The basis sections `theta^1..theta^d, xi_1..xi_d` (frames of A and A*).
pub fn basis_sections(sig: Signature) -> Vec<Section> {
    let mut out = Vec::with_capacity(2 * sig.d as usize);
    for a in 1..=sig.d {
        out.push(Section(
            SuperPolynomial::generator(sig, Generator::Theta(a)).expect("in range"),
        ));
    }
    for a in 1..=sig.d {
        out.push(Section(
            SuperPolynomial::generator(sig, Generator::Xi(a)).expect("in range"),
        ));
    }
    out
}

/// A pre-Courant structure: a degree-3 function on `T*[2]A[1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreCourant {
    theta: SuperPolynomial,
}

/// The homogeneous parts of Theta: mu in (1,2), gamma in (2,1), phi in (0,3),
/// psi in (3,0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CourantDecomposition {
    pub mu: SuperPolynomial,
    pub gamma: SuperPolynomial,
    pub phi: SuperPolynomial,
    pub psi: SuperPolynomial,
}

impl PreCourant {
    /// Wrap a degree-3 function. Rejects inhomogeneous input instead of
    /// projecting silently.
    pub fn new(theta: SuperPolynomial) -> Result<Self> {
        theta.expect_degree(3)?;
        Ok(PreCourant { theta })
    }

    pub fn zero(sig: Signature) -> Self {
        PreCourant {
            theta: SuperPolynomial::zero(sig),
        }
    }

    pub fn signature(&self) -> Signature {
        self.theta.signature()
    }

    pub fn as_poly(&self) -> &SuperPolynomial {
        &self.theta
    }

    pub fn is_zero(&self) -> bool {
        self.theta.is_zero()
    }

    pub fn add(&self, other: &PreCourant) -> Result<PreCourant> {
        Ok(PreCourant {
            theta: self.theta.add(&other.theta)?,
        })
    }

    pub fn scale(&self, c: &Rat) -> PreCourant {
        PreCourant {
            theta: self.theta.scale(c),
        }
    }

    /// `{Theta,Theta} = 0`, exactly.
    pub fn is_courant(&self) -> bool {
        bracket(&self.theta, &self.theta)
            .map(|b| b.is_zero())
            .unwrap_or(false)
    }

    pub fn self_bracket(&self) -> SuperPolynomial {
        bracket(&self.theta, &self.theta).expect("same signature")
    }

    /// Bidegree projections; their sum reconstructs Theta.
    pub fn decompose(&self) -> CourantDecomposition {
        CourantDecomposition {
            mu: self.theta.bidegree_project(Bidegree::new(1, 2)),
            gamma: self.theta.bidegree_project(Bidegree::new(2, 1)),
            phi: self.theta.bidegree_project(Bidegree::new(0, 3)),
            psi: self.theta.bidegree_project(Bidegree::new(3, 0)),
        }
    }

    /// Dorfman bracket `[X,Y] = {{X,Theta},Y}`.
    pub fn dorfman(&self, x: &Section, y: &Section) -> Result<Section> {
        let inner = bracket(x.as_poly(), &self.theta)?;
        Section::new(bracket(&inner, y.as_poly())?)
    }

    /// Anchor action `rho(X).f = {{X,Theta},f}` on a degree-0 function.
    pub fn anchor_apply(&self, x: &Section, f: &SuperPolynomial) -> Result<SuperPolynomial> {
        f.expect_degree(0)?;
        let inner = bracket(x.as_poly(), &self.theta)?;
        bracket(&inner, f)
    }

    /// `[X,[Y,Z]] - [[X,Y],Z] - [Y,[X,Z]]`; vanishes identically when Theta
    /// is Courant.
    pub fn jacobiator(&self, x: &Section, y: &Section, z: &Section) -> Result<Section> {
        let a = self.dorfman(x, &self.dorfman(y, z)?)?;
        let b = self.dorfman(&self.dorfman(x, y)?, z)?;
        let c = self.dorfman(y, &self.dorfman(x, z)?)?;
        a.sub(&b)?.sub(&c)
    }

    /// Evaluate both pre-Courant axioms on the given sections. Residuals:
    ///
    /// * `rho(X).<Y,Z> - <[X,Y],Z> - <Y,[X,Z]>`
    /// * `rho(X).<Y,Z> - <X, [Y,Z] + [Z,Y]>`
    ///
    /// All must vanish for every degree-3 Theta; this is a soundness check of
    /// the correspondence, not of Theta.
    pub fn axiom_residuals(
        &self,
        sections: &[Section],
    ) -> Result<Vec<AxiomResidual>> {
        let mut out = Vec::new();
        for (i, x) in sections.iter().enumerate() {
            for (j, y) in sections.iter().enumerate() {
                for (k, z) in sections.iter().enumerate() {
                    let lhs = self.anchor_apply(x, &y.pairing(z)?)?;
                    let r1 = lhs
                        .sub(&self.dorfman(x, y)?.pairing(z)?)?
                        .sub(&y.pairing(&self.dorfman(x, z)?)?)?;
                    let sym = self.dorfman(y, z)?.add(&self.dorfman(z, y)?)?;
                    let r2 = lhs.sub(&x.pairing(&sym)?)?;
                    if !r1.is_zero() || !r2.is_zero() {
                        out.push((i, j, k, r1, r2));
                    }
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for PreCourant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.theta)
    }
}
