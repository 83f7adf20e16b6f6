//! Iterated deformations, the lambda recursion and the Poisson-Nijenhuis
//! hierarchy construction.

use crate::algebra::{format_rat, Rat, SuperPolynomial};
use crate::bracket::bracket;
use crate::courant::PreCourant;
use crate::error::{Error, Result};
use crate::tensor::{
    deform_theta, deform_theta_by_function, func_of, is_poisson, theta_path, TensorFunction,
};
use num_traits::{One, Zero};

/// `Theta_k`: the k-fold deformation of Theta by a skew tensor I.
pub fn theta_k(theta: &PreCourant, i: &TensorFunction, k: u32) -> Result<PreCourant> {
    let mut out = theta.clone();
    for _ in 0..k {
        out = deform_theta(&out, i)?;
    }
    Ok(out)
}

/// Two (pre-)Courant structures are compatible iff `{Theta_1, Theta_2} = 0`.
pub fn compatibility_check(theta1: &PreCourant, theta2: &PreCourant) -> Result<bool> {
    Ok(bracket(theta1.as_poly(), theta2.as_poly())?.is_zero())
}

/// The sequence `lambda_k = -3 lambda_{k-1} / (1 + lambda_{k-1})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaSequence {
    pub lambda0: Rat,
    /// `values[k]` is lambda_k, for k = 0..=K.
    pub values: Vec<Rat>,
}

/// The excluded starting value `4 / ((-3)^m - 1)` (m >= 1; m = 0 makes the
/// denominator vanish and corresponds to no constraint).
pub fn excluded_lambda(m: u32) -> Rat {
    let pow = Rat::from_integer((-3i64).pow(m).into());
    Rat::from_integer(4.into()) / (pow - Rat::one())
}

/// Closed form `lambda_k = (-3)^k lambda_0 / (1 + (1 - (-3)^k)/4 * lambda_0)`.
pub fn lambda_closed_form(lambda0: &Rat, k: u32) -> Rat {
    let pow = Rat::from_integer((-3i64).pow(k).into());
    let num = &pow * lambda0;
    let den = Rat::one() + (Rat::one() - pow) / Rat::from_integer(4.into()) * lambda0;
    num / den
}

/// Run the recursion up to K, rejecting starting values that hit a pole on
/// the way (exact comparison against `4/((-3)^m - 1)` for m <= K).
pub fn lambda_seq(lambda0: &Rat, k_max: u32) -> Result<LambdaSequence> {
    for m in 1..=k_max {
        if *lambda0 == excluded_lambda(m) {
            return Err(Error::ExcludedLambda {
                value: format_rat(lambda0),
                m,
            });
        }
    }
    let mut values = vec![lambda0.clone()];
    for _ in 1..=k_max {
        let prev = values.last().expect("nonempty");
        let den = Rat::one() + prev;
        debug_assert!(!den.is_zero(), "pole not caught by the excluded set");
        let next = Rat::from_integer((-3).into()) * prev / den;
        values.push(next);
    }
    Ok(LambdaSequence {
        lambda0: lambda0.clone(),
        values,
    })
}

/// Solve `Theta_{{J,{I,J}}} = lambda_0 Theta_{J,J,I}` for a rational
/// constant; 0 when both sides vanish, `None` when no constant exists.
pub fn lambda0_of(
    theta: &PreCourant,
    i: &TensorFunction,
    j: &TensorFunction,
) -> Result<Option<Rat>> {
    let jij = jij_function(i, j)?;
    let lhs = deform_theta_by_function(theta, &jij)?;
    let rhs = deform_theta(&theta_path(theta, &[j, j])?, i)?;
    Ok(lhs.as_poly().proportionality(rhs.as_poly()))
}

/// The function `{J,{I,J}}` itself, needed by several identity checks.
pub fn jij_function(i: &TensorFunction, j: &TensorFunction) -> Result<SuperPolynomial> {
    bracket(j.as_poly(), &bracket(i.as_poly(), j.as_poly())?)
}

/// An iterated deformation, kept with its step list: the result is the fold
/// of `deform_theta` over the steps, and an empty path is the base structure
/// itself.
#[derive(Debug, Clone)]
pub struct DeformationPath {
    base: PreCourant,
    steps: Vec<(String, TensorFunction)>,
}

impl DeformationPath {
    pub fn new(base: PreCourant) -> Self {
        DeformationPath {
            base,
            steps: Vec::new(),
        }
    }

    pub fn then(&self, label: &str, step: &TensorFunction) -> DeformationPath {
        let mut steps = self.steps.clone();
        steps.push((label.to_string(), step.clone()));
        DeformationPath {
            base: self.base.clone(),
            steps,
        }
    }

    pub fn base(&self) -> &PreCourant {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Subscript-style label, e.g. `Theta_{I,J,I}`.
    pub fn label(&self) -> String {
        if self.steps.is_empty() {
            return "Theta".to_string();
        }
        let tags: Vec<&str> = self.steps.iter().map(|(l, _)| l.as_str()).collect();
        format!("Theta_{{{}}}", tags.join(","))
    }

    pub fn result(&self) -> Result<PreCourant> {
        let mut out = self.base.clone();
        for (_, step) in &self.steps {
            out = deform_theta(&out, step)?;
        }
        Ok(out)
    }
}

/// One emitted member of the Poisson-Nijenhuis hierarchy.
#[derive(Debug, Clone)]
pub struct PnTensor {
    pub n: u32,
    pub tensor: TensorFunction,
    /// `poisson[k]` is whether the tensor is Poisson for Theta_k.
    pub poisson: Vec<bool>,
}

#[derive(Debug, Clone)]
pub struct PnHierarchy {
    pub tensors: Vec<PnTensor>,
    /// `compatible[k][m][n]`: `(Theta_k)_{I^m . J, I^n . J} = 0`.
    pub compatible: Vec<Vec<Vec<bool>>>,
    pub all_poisson: bool,
    pub all_compatible: bool,
}

/// Build the hierarchy of Poisson tensors `I^n . J` against the deformed
/// structures `Theta_k`. Callers gate on the Poisson-Nijenhuis hypotheses;
/// this routine evaluates the claims exactly.
pub fn build_pn_hierarchy(
    theta: &PreCourant,
    j: &TensorFunction,
    i: &TensorFunction,
    n_max: u32,
    k_max: u32,
) -> Result<PnHierarchy> {
    let ei = i.endo();
    let ej = j.endo();
    let mut tensors = Vec::new();
    let mut funcs = Vec::new();
    for n in 0..=n_max {
        let comp = ei.power(n)?.compose(&ej)?;
        let tf = func_of(&comp).map_err(|_| {
            Error::NotSkew(format!("I^{n} . J is not skew; I and J must anti-commute"))
        })?;
        funcs.push(tf.clone());
        let mut poisson = Vec::new();
        for k in 0..=k_max {
            let tk = theta_k(theta, i, k)?;
            poisson.push(is_poisson(&tk, &tf)?);
        }
        tensors.push(PnTensor {
            n,
            tensor: tf,
            poisson,
        });
    }
    let mut compatible = Vec::new();
    for k in 0..=k_max {
        let tk = theta_k(theta, i, k)?;
        let mut per_m = Vec::new();
        for m in 0..=n_max {
            let mut per_n = Vec::new();
            for n in 0..=n_max {
                let deformed = theta_path(&tk, &[&funcs[m as usize], &funcs[n as usize]])?;
                per_n.push(deformed.is_zero());
            }
            per_m.push(per_n);
        }
        compatible.push(per_m);
    }
    let all_poisson = tensors.iter().all(|t| t.poisson.iter().all(|&b| b));
    let all_compatible = compatible
        .iter()
        .all(|k| k.iter().all(|m| m.iter().all(|&b| b)));
    Ok(PnHierarchy {
        tensors,
        compatible,
        all_poisson,
        all_compatible,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, Generator, Rat, Signature};
    use crate::tensor::deforming_eta;

    fn sig(n: u8, d: u8) -> Signature {
        Signature::new(n, d).unwrap()
    }

    fn poly(s: Signature, terms: &[(&[Generator], Rat)]) -> SuperPolynomial {
        let raw: Vec<(Vec<Generator>, Rat)> =
            terms.iter().map(|(w, c)| (w.to_vec(), c.clone())).collect();
        SuperPolynomial::normalize(s, &raw).unwrap()
    }

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

    #[test]
    fn theta_k_zero_is_identity() {
        let s = sig(0, 3);
        let th = heisenberg(s);
        let i = TensorFunction::new(poly(
            s,
            &[(&[Generator::Xi(1), Generator::Theta(3)], Rat::one())],
        ))
        .unwrap();
        assert_eq!(theta_k(&th, &i, 0).unwrap(), th);
    }

    #[test]
    fn deforming_tensor_powers() {
        // Theta_{2k} = eta^k Theta and Theta_{2k+1} = eta^k Theta_I for a
        // deforming I. Here I = 2*I_N with N = diag(1,-1,1), which is
        // Nijenhuis with I^2 = 4 id, so eta = 4.
        let s = sig(0, 3);
        let th = heisenberg(s);
        let n = TensorFunction::new(poly(
            s,
            &[
                (&[Generator::Xi(1), Generator::Theta(1)], rat(2, 1)),
                (&[Generator::Xi(2), Generator::Theta(2)], rat(-2, 1)),
                (&[Generator::Xi(3), Generator::Theta(3)], rat(2, 1)),
            ],
        ))
        .unwrap();
        let eta = deforming_eta(&th, &n).unwrap().expect("deforming");
        assert_eq!(eta, rat(4, 1));
        let t1 = deform_theta(&th, &n).unwrap();
        let mut expect_even = th.clone();
        let mut expect_odd = t1.clone();
        for k in 0..3u32 {
            assert_eq!(theta_k(&th, &n, 2 * k).unwrap(), expect_even);
            assert_eq!(theta_k(&th, &n, 2 * k + 1).unwrap(), expect_odd);
            expect_even = expect_even.scale(&eta);
            expect_odd = expect_odd.scale(&eta);
        }
    }

    #[test]
    fn compatibility_of_courant_with_its_deformation() {
        // {Theta, Theta_I} = 0 for Courant Theta and any skew I
        let s = sig(0, 3);
        let th = heisenberg(s);
        assert!(th.is_courant());
        let tensors = [
            TensorFunction::new(poly(
                s,
                &[
                    (&[Generator::Theta(1), Generator::Theta(2)], rat(3, 1)),
                    (&[Generator::Xi(1), Generator::Xi(3)], rat(-1, 1)),
                    (&[Generator::Xi(2), Generator::Theta(1)], rat(2, 1)),
                ],
            ))
            .unwrap(),
            TensorFunction::new(poly(
                s,
                &[(&[Generator::Xi(1), Generator::Theta(3)], Rat::one())],
            ))
            .unwrap(),
        ];
        for i in &tensors {
            let ti = deform_theta(&th, i).unwrap();
            assert!(compatibility_check(&th, &ti).unwrap());
        }
        assert!(compatibility_check(&th, &th).unwrap());
    }

    #[test]
    fn lambda_recursion_matches_closed_form() {
        for l0 in [rat(1, 1), rat(2, 1), rat(-1, 2), rat(1, 3), rat(-4, 1), rat(-2, 1)] {
            let seq = lambda_seq(&l0, 10).unwrap();
            for (k, v) in seq.values.iter().enumerate() {
                assert_eq!(v, &lambda_closed_form(&l0, k as u32), "k = {k}");
            }
        }
    }

    #[test]
    fn lambda_first_values() {
        // lambda_1 = -3*1/(1+1) = -3/2
        let seq = lambda_seq(&rat(1, 1), 1).unwrap();
        assert_eq!(seq.values[1], rat(-3, 2));
        // lambda_0 = 0 is the fixed point 0
        let seq = lambda_seq(&rat(0, 1), 6).unwrap();
        assert!(seq.values.iter().all(|v| v.is_zero()));
        // lambda_0 = -4 is the other fixed point
        let seq = lambda_seq(&rat(-4, 1), 6).unwrap();
        assert!(seq.values.iter().all(|v| v == &rat(-4, 1)));
    }

    #[test]
    fn deformation_path_folds_deform_theta() {
        let s = sig(0, 3);
        let th = heisenberg(s);
        let i = TensorFunction::new(poly(
            s,
            &[(&[Generator::Xi(1), Generator::Theta(3)], Rat::one())],
        ))
        .unwrap();
        let j = TensorFunction::new(poly(
            s,
            &[(&[Generator::Theta(2), Generator::Theta(3)], Rat::one())],
        ))
        .unwrap();
        let path = DeformationPath::new(th.clone());
        assert_eq!(path.result().unwrap(), th);
        assert_eq!(path.label(), "Theta");
        let path = path.then("I", &i).then("J", &j);
        assert_eq!(path.label(), "Theta_{I,J}");
        assert_eq!(path.result().unwrap(), theta_path(&th, &[&i, &j]).unwrap());
    }

    #[test]
    fn trivial_hierarchy_reproduces_classification() {
        // n_max = k_max = 0 reduces to the Poisson check of J itself
        let s = sig(0, 3);
        let th = heisenberg(s);
        let j = TensorFunction::new(poly(
            s,
            &[(&[Generator::Theta(2), Generator::Theta(3)], Rat::one())],
        ))
        .unwrap();
        let i = TensorFunction::new(poly(
            s,
            &[(&[Generator::Xi(1), Generator::Theta(3)], Rat::one())],
        ))
        .unwrap();
        let h = build_pn_hierarchy(&th, &j, &i, 0, 0).unwrap();
        assert_eq!(h.tensors.len(), 1);
        assert_eq!(h.tensors[0].tensor, j);
        assert_eq!(
            h.tensors[0].poisson,
            vec![crate::tensor::is_poisson(&th, &j).unwrap()]
        );
        assert!(h.all_poisson && h.all_compatible);
    }

    #[test]
    fn excluded_lambdas_rejected() {
        // m = 1: 4/((-3)^1 - 1) = -1,  m = 2: 4/((-3)^2 - 1) = 1/2
        assert_eq!(excluded_lambda(1), rat(-1, 1));
        assert_eq!(excluded_lambda(2), rat(1, 2));
        let err = lambda_seq(&rat(-1, 1), 5);
        assert!(matches!(err, Err(Error::ExcludedLambda { m: 1, .. })));
        let err = lambda_seq(&rat(1, 2), 5);
        assert!(matches!(err, Err(Error::ExcludedLambda { m: 2, .. })));
        // an excluded value beyond the requested depth is fine
        assert!(lambda_seq(&excluded_lambda(4), 3).is_ok());
        assert!(lambda_seq(&excluded_lambda(4), 4).is_err());
    }
}
