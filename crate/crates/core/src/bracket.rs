//! The canonical Poisson bracket of bidegree (-1,-1) on the function algebra.
//!
//! On generators it is `{p^i, x_i} = {theta^a, xi_a} = 1`, all other pairs
//! zero, extended as a biderivation. The realization used here is
//!
//! ```text
//! {F,G} = sum_i  dF/dp^i * dG/dx_i  -  dF/dx_i * dG/dp^i
//!       + sum_a  dR F/d theta^a * dL G/d xi_a  +  dR F/d xi_a * dL G/d theta^a
//! ```
//!
//! with `dL`/`dR` the left/right odd derivatives. The graded laws the bracket
//! must satisfy (antisymmetry, Leibniz and Jacobi with the degree shifted by
//! -2) are checked exhaustively by the property suite; together with the
//! generator values and the pairing recovery `{X,Y} = <X,Y>` on degree-1
//! elements they pin the sign placement uniquely. One consequence of these
//! laws worth recording: `{xi_a, theta^a} = +1` (degree-1 elements pair
//! symmetrically), and the identity tensor `id_A` corresponds to the function
//! `sum_a xi_a theta^a`, which satisfies `{id_A, u} = (q-p) u` on bidegree
//! (p,q) elements.

use crate::algebra::{left_partial, right_partial, Generator, SuperPolynomial};
use crate::error::{Error, Result};

/// The big bracket `{F,G}`.
pub fn bracket(f: &SuperPolynomial, g: &SuperPolynomial) -> Result<SuperPolynomial> {
    let sig = f.signature();
    if sig != g.signature() {
        return Err(Error::SignatureMismatch(sig, g.signature()));
    }
    let mut out = SuperPolynomial::zero(sig);
    for i in 1..=sig.n {
        let fp = right_partial(f, Generator::P(i));
        if !fp.is_zero() {
            let gx = left_partial(g, Generator::X(i));
            out = out.add(&fp.mul(&gx)?)?;
        }
        let fx = right_partial(f, Generator::X(i));
        if !fx.is_zero() {
            let gp = left_partial(g, Generator::P(i));
            out = out.sub(&fx.mul(&gp)?)?;
        }
    }
    for a in 1..=sig.d {
        let ft = right_partial(f, Generator::Theta(a));
        if !ft.is_zero() {
            let gxi = left_partial(g, Generator::Xi(a));
            out = out.add(&ft.mul(&gxi)?)?;
        }
        let fxi = right_partial(f, Generator::Xi(a));
        if !fxi.is_zero() {
            let gt = left_partial(g, Generator::Theta(a));
            out = out.add(&fxi.mul(&gt)?)?;
        }
    }
    Ok(out)
}

/// Nested bracket `{f, {g, h}}`, a convenience for the deformation calculus.
pub fn bracket2(f: &SuperPolynomial, g: &SuperPolynomial, h: &SuperPolynomial) -> Result<SuperPolynomial> {
    bracket(f, &bracket(g, h)?)
}
