//! Builders for common structures and tensors, plus the built-in example
//! library.
//!
//! Sign conventions are pinned by the Dorfman contract: for structure
//! constants `c_{ab}^c` the builder produces a function with
//! `dorfman(theta^a, theta^b) = c_{ab}^c theta^c` (and dually on the `xi`
//! frame for a dual Lie algebra structure).

use crate::algebra::{Generator, Rat, Signature, SuperPolynomial};
use crate::courant::PreCourant;
use crate::defn::SetupDefinition;
use crate::error::{Error, Result};
use crate::tensor::TensorFunction;

fn gen(sig: Signature, g: Generator) -> Result<SuperPolynomial> {
    SuperPolynomial::generator(sig, g)
}

/// `mu` from Lie-algebra structure constants `[e_a, e_b] = c_{ab}^c e_c`.
/// Accepts any `a != b`; entries are folded antisymmetrically.
pub fn lie_algebra_theta(sig: Signature, constants: &[(u8, u8, u8, Rat)]) -> Result<PreCourant> {
    let mut acc = SuperPolynomial::zero(sig);
    for (a, b, c, coeff) in constants {
        if a == b {
            return Err(Error::Invalid(format!(
                "structure constants must have a != b, got c_{{{a}{a}}}^{c}"
            )));
        }
        // dorfman(theta^a, theta^b) = +c theta^c requires the term
        // -c xi_a xi_b theta^c
        let term = gen(sig, Generator::Xi(*a))?
            .mul(&gen(sig, Generator::Xi(*b))?)?
            .mul(&gen(sig, Generator::Theta(*c))?)?
            .scale(&-coeff.clone());
        acc = acc.add(&term)?;
    }
    PreCourant::new(acc)
}

/// `gamma` from dual structure constants `[e^a, e^b]_* = c_{ab}^c e^c`.
pub fn dual_lie_algebra_theta(
    sig: Signature,
    constants: &[(u8, u8, u8, Rat)],
) -> Result<PreCourant> {
    let mut acc = SuperPolynomial::zero(sig);
    for (a, b, c, coeff) in constants {
        if a == b {
            return Err(Error::Invalid(format!(
                "structure constants must have a != b, got c_{{{a}{a}}}^{c}"
            )));
        }
        let term = gen(sig, Generator::Theta(*a))?
            .mul(&gen(sig, Generator::Theta(*b))?)?
            .mul(&gen(sig, Generator::Xi(*c))?)?
            .scale(&-coeff.clone());
        acc = acc.add(&term)?;
    }
    PreCourant::new(acc)
}

/// Lie bialgebra double `mu + gamma`.
pub fn bialgebra_theta(
    sig: Signature,
    constants: &[(u8, u8, u8, Rat)],
    dual_constants: &[(u8, u8, u8, Rat)],
) -> Result<PreCourant> {
    lie_algebra_theta(sig, constants)?.add(&dual_lie_algebra_theta(sig, dual_constants)?)
}

/// The tangent Lie algebroid of a base with n = d coordinates:
/// `Theta = sum_a xi_a p^a` (identity anchor, zero bracket constants).
pub fn tangent_theta(sig: Signature) -> Result<PreCourant> {
    if sig.n < sig.d {
        return Err(Error::Invalid(
            "tangent algebroid needs at least d base coordinates".into(),
        ));
    }
    let mut acc = SuperPolynomial::zero(sig);
    for a in 1..=sig.d {
        acc = acc.add(&gen(sig, Generator::Xi(a))?.mul(&gen(sig, Generator::P(a))?)?)?;
    }
    PreCourant::new(acc)
}

/// Bivector tensor `J_pi` from coefficients `pi^{ab}` (a < b enforced by
/// antisymmetric folding): the function `sum pi^{ab} theta^a theta^b`.
pub fn j_pi(sig: Signature, coeffs: &[(u8, u8, Rat)]) -> Result<TensorFunction> {
    let mut acc = SuperPolynomial::zero(sig);
    for (a, b, coeff) in coeffs {
        if a == b {
            return Err(Error::Invalid("bivector needs a != b".into()));
        }
        let term = gen(sig, Generator::Theta(*a))?
            .mul(&gen(sig, Generator::Theta(*b))?)?
            .scale(coeff);
        acc = acc.add(&term)?;
    }
    TensorFunction::new(acc)
}

/// Two-form tensor `J_omega`: the function `sum omega_{ab} xi_a xi_b`.
pub fn j_omega(sig: Signature, coeffs: &[(u8, u8, Rat)]) -> Result<TensorFunction> {
    let mut acc = SuperPolynomial::zero(sig);
    for (a, b, coeff) in coeffs {
        if a == b {
            return Err(Error::Invalid("two-form needs a != b".into()));
        }
        let term = gen(sig, Generator::Xi(*a))?
            .mul(&gen(sig, Generator::Xi(*b))?)?
            .scale(coeff);
        acc = acc.add(&term)?;
    }
    TensorFunction::new(acc)
}

/// `I_N = (N, 0; 0, -N*)` from a d x d matrix of x-polynomials (row-major,
/// `N(e_b) = sum_a N[a][b] e_a`): the function `sum N^a_b xi_b theta^a`.
pub fn i_n(sig: Signature, n: &[SuperPolynomial]) -> Result<TensorFunction> {
    let d = sig.d as usize;
    if n.len() != d * d {
        return Err(Error::Invalid(format!(
            "N must be d x d = {} entries, got {}",
            d * d,
            n.len()
        )));
    }
    let mut acc = SuperPolynomial::zero(sig);
    for a in 1..=d {
        for b in 1..=d {
            let coeff = &n[(a - 1) * d + (b - 1)];
            if coeff.is_zero() {
                continue;
            }
            coeff.expect_degree(0)?;
            let term = gen(sig, Generator::Xi(b as u8))?
                .mul(&gen(sig, Generator::Theta(a as u8))?)?
                .mul(coeff)?;
            acc = acc.add(&term)?;
        }
    }
    TensorFunction::new(acc)
}

/// Constant-entry convenience form of [`i_n`].
pub fn i_n_const(sig: Signature, n: &[&[i64]]) -> Result<TensorFunction> {
    let d = sig.d as usize;
    let mut entries = Vec::with_capacity(d * d);
    for row in n {
        for &v in *row {
            entries.push(SuperPolynomial::constant(sig, Rat::from_integer(v.into())));
        }
    }
    i_n(sig, &entries)
}

/// General skew tensor `(N, pi; omega, -N*)` as the function
/// `N + pi + omega`.
pub fn j_general(
    sig: Signature,
    n: &[SuperPolynomial],
    pi: &[(u8, u8, Rat)],
    omega: &[(u8, u8, Rat)],
) -> Result<TensorFunction> {
    let mut acc = i_n(sig, n)?.as_poly().clone();
    acc = acc.add(j_pi(sig, pi)?.as_poly())?;
    acc = acc.add(j_omega(sig, omega)?.as_poly())?;
    TensorFunction::new(acc)
}

/// Half the identity block pair: `1/2 id_A + pi`, the Maurer-Cartan tensor
/// `(1/2 id, pi; 0, -1/2 id)`.
pub fn maurer_cartan_tensor(sig: Signature, pi: &[(u8, u8, Rat)]) -> Result<TensorFunction> {
    let d = sig.d as usize;
    let mut n = vec![SuperPolynomial::zero(sig); d * d];
    for a in 0..d {
        n[a * d + a] = SuperPolynomial::constant(sig, Rat::new(1.into(), 2.into()));
    }
    j_general(sig, &n, pi, &[])
}

/// The built-in example library, as definition files in the repository's
/// textual format. Each carries its expected classification for regression
/// testing.
pub fn builtin_texts() -> Vec<(&'static str, &'static str)> {
    vec![
        (
            "abelian-zero",
            "\
# Theta = 0 on a rank-2 bundle over a point: every predicate is vacuous,
# classification reports the degeneracy explicitly.
name abelian-zero
signature 0 2
tensor I term 1 xi1 theta1
tensor I term 1 xi2 theta2
tensor J term 1 theta1 theta2
task courant
expect courant true
task classify I=I J=J
expect class I=I J=J poisson-nijenhuis
expect poisson J true
expect nijenhuis I true
",
        ),
        (
            "heisenberg-central",
            "\
# Heisenberg algebra [e1,e2] = e3 with the central operator N: e1 -> e3
# (Nijenhuis and Poisson) and the Poisson bivector pi = e2 ^ e3.
name heisenberg-central
signature 0 3
theta -1 xi1 xi2 theta3
tensor I term 1 xi1 theta3
tensor J term 1 theta2 theta3
task courant
expect courant true
expect nijenhuis I true
expect poisson I true
expect poisson J true
task classify I=I J=J
expect class I=I J=J poisson-nijenhuis
task T-01
task T-04
task T-08
task T-13
task T-15
task T-17
task hierarchy J=J I=I
",
        ),
        (
            "so3",
            "\
# so(3): [e1,e2] = e3, [e2,e3] = e1, [e3,e1] = e2. A Courant structure with
# no bound tensors; identity tasks gate out as not-applicable.
name so3
signature 0 3
theta -1 xi1 xi2 theta3
theta -1 xi2 xi3 theta1
theta 1 xi1 xi3 theta2
task courant
expect courant true
",
        ),
        (
            "jacobi-breaker",
            "\
# c_{12}^3 = c_{23}^2 = 1 violates the Jacobi identity:
# [[e1,e2],e3] + [[e2,e3],e1] + [[e3,e1],e2] = -e3 != 0.
# The bound tensors exercise the identities that hold on arbitrary
# pre-Courant structures, with genuinely nonzero torsions.
name jacobi-breaker
signature 0 3
theta -1 xi1 xi2 theta3
theta -1 xi2 xi3 theta2
tensor I term 1 xi1 theta1
tensor I term 1 xi2 theta2
tensor I term 1 xi3 theta3
tensor J term 1 theta1 theta2
task courant
expect courant false
expect nijenhuis I true
expect nijenhuis J false
task classify I=I J=J
expect class I=I J=J compatible
task T-01 I=J
task T-03 I=J
task T-05 I=J
task T-12
task T-16
task T-19
",
        ),
        (
            "mc-bialgebra-2d",
            "\
# Double of the 2-dimensional bialgebra mu: [e1,e2] = e2,
# gamma: [e^1,e^2]_* = e^2. J = 1/2 id + pi is deforming with eta = 1/4
# for every pi in rank 2 (the Maurer-Cartan obstruction lives in ^3 A = 0).
# I = J_omega exercises the concomitant formulas that need no pair
# hypotheses.
name mc-bialgebra-2d
signature 0 2
theta -1 xi1 xi2 theta2
theta -1 theta1 theta2 xi2
tensor J term 1/2 xi1 theta1
tensor J term 1/2 xi2 theta2
tensor J term 3 theta1 theta2
tensor I term 1 xi1 xi2
task courant
expect courant true
expect eta J 1/4
task T-09
task T-12
",
        ),
        (
            "aff1-poisson-diag",
            "\
# aff(1) + R: [e1,e2] = e2, e3 central; pi = e1 ^ e3 Poisson,
# N = diag(1,-1,1) involutive Nijenhuis with N pi# = pi# N*.
name aff1-poisson-diag
signature 0 3
theta -1 xi1 xi2 theta2
tensor J term 1 theta1 theta3
tensor I term 1 xi1 theta1
tensor I term -1 xi2 theta2
tensor I term 1 xi3 theta3
task courant
expect courant true
task classify I=I J=J
expect class I=I J=J poisson-nijenhuis
task T-08
task T-15
task T-16
task T-17
task hierarchy J=J I=I
",
        ),
        (
            "pn-h3r-nilpotent",
            "\
# Heisenberg + R (d = 4): N maps e1 -> e2, e3 -> e4 (N^2 = 0, not
# central-valued), pi = e1 ^ e4 + e2 ^ e3. A Poisson-Nijenhuis pair with
# I.J nonzero, so the hierarchy has two distinct nonzero members.
name pn-h3r-nilpotent
signature 0 4
theta -1 xi1 xi2 theta3
tensor I term 1 xi1 theta2
tensor I term 1 xi3 theta4
tensor J term 1 theta1 theta4
tensor J term 1 theta2 theta3
task courant
expect courant true
task classify I=I J=J
expect class I=I J=J poisson-nijenhuis
task T-07
task T-08
task T-10
task T-15
task T-16
task T-17
task hierarchy J=J I=I
",
        ),
        (
            "tangent-r2",
            "\
# Tangent algebroid of R^2 with an x-dependent involutive Nijenhuis
# tensor (N^2 = id) and the symplectic bivector pi = d1 ^ d2. The pair
# does not anti-commute, so only the single-tensor recursions apply; the
# instance exercises anchors and polynomial coefficients everywhere.
name tangent-r2
signature 2 2
theta 1 xi1 p1
theta 1 xi2 p2
tensor J term 1 theta1 theta2
tensor I matrix
row x1 1 0 0
row 1-x1^2 -x1 0 0
row 0 0 -x1 -1+x1^2
row 0 0 -1 x1
endmatrix
task courant
expect courant true
expect nijenhuis I true
expect poisson J true
task classify I=I J=J
expect class I=I J=J none
task T-01
task T-02
task T-03
task T-04
task T-05
task T-06
",
        ),
        (
            "h3r-scale-pair",
            "\
# Heisenberg + R with the identity-block tensor I (theta -> theta,
# xi -> -xi) and a non-Poisson bivector J = e1^e2 + e3^e4: a compatible
# pair with lambda_0 = 0 and Theta_{J,J} != 0, so the (-1/3)-power
# scalings of the cocycle lemma are exercised with nonzero residues.
name h3r-scale-pair
signature 0 4
theta -1 xi1 xi2 theta3
tensor I term 1 xi1 theta1
tensor I term 1 xi2 theta2
tensor I term 1 xi3 theta3
tensor I term 1 xi4 theta4
tensor J term 1 theta1 theta2
tensor J term 1 theta3 theta4
task courant
expect courant true
task classify I=I J=J
expect class I=I J=J compatible
expect poisson J false
expect eta J none
expect nijenhuis I true
task T-12
task T-13
task T-16
task T-19
",
        ),
        (
            "quaternionic-u2",
            "\
# R + so(3) (the Lie algebra of U(2)-type hypercomplex geometry) with the
# two anti-commuting left quaternion multiplications L_i, L_j as N-type
# tensors: a Nijenhuis pair with I^2 = J^2 = -id, hence a hypercomplex
# triple (I, J, I.J); J is deforming with eta = -1 and lambda_0 = -4.
# The classification precedence reports deforming-nijenhuis; both members
# are Nijenhuis, as the explicit expectations assert.
name quaternionic-u2
signature 0 4
theta -1 xi2 xi3 theta4
theta -1 xi3 xi4 theta2
theta 1 xi2 xi4 theta3
tensor I term 1 xi1 theta2
tensor I term -1 xi2 theta1
tensor I term 1 xi3 theta4
tensor I term -1 xi4 theta3
tensor J term 1 xi1 theta3
tensor J term -1 xi3 theta1
tensor J term -1 xi2 theta4
tensor J term 1 xi4 theta2
task courant
expect courant true
task classify I=I J=J
expect class I=I J=J deforming-nijenhuis
expect nijenhuis I true
expect nijenhuis J true
expect eta J -1
task T-02
task T-04
task T-06
task T-11
task T-12
task T-13
task T-14
task T-18
task T-19
task T-20
task T-21
",
        ),
    ]
}

/// Parse the built-in library.
pub fn builtin_examples() -> Result<Vec<SetupDefinition>> {
    builtin_texts()
        .into_iter()
        .map(|(name, text)| {
            SetupDefinition::parse(text).map_err(|e| {
                Error::Invalid(format!("builtin example {name} failed to parse: {e}"))
            })
        })
        .collect()
}
