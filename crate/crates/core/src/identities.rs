//! The executable identity catalog: each entry T-01..T-21 evaluates one of
//! the hierarchy statements exactly on a bound instance.
//!
//! Every check first verifies the hypotheses of the statement it encodes and
//! reports "not-applicable" when they fail; a theorem is never reported
//! failed on an instance outside its hypotheses. Operator-level statements
//! are discharged on all basis-section pairs, function-level statements as
//! exact polynomial identities.

use crate::algebra::{format_rat, rat, Rat, SuperPolynomial};
use crate::bracket::bracket;
use crate::courant::{basis_sections, PreCourant, Section};
use crate::error::{Error, Result};
use crate::hierarchy::{excluded_lambda, jij_function, lambda0_of, lambda_seq, theta_k, DeformationPath};
use crate::tensor::{
    classify_pair, concomitant, concomitant_funcs, concomitant_op, deform_theta,
    deform_theta_by_function, deforming_eta, func_of, is_nijenhuis, is_poisson,
    nijenhuis_concomitant, theta_path, torsion, torsion_vanishes_on_image, BracketOp,
    Endomorphism, PairClass, Tensor, TensorFunction,
};
use num_traits::{One, Zero};

/// Depth bounds for the quantified integers in the catalog.
#[derive(Debug, Clone, Copy)]
pub struct Bounds {
    pub k: u32,
    pub m: u32,
    pub n: u32,
    pub s: u32,
    pub t: u32,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            k: 3,
            m: 3,
            n: 3,
            s: 3,
            t: 3,
        }
    }
}

/// A bound instance: the structure and tensors an identity is evaluated on.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub theta: PreCourant,
    pub i: Option<Tensor>,
    pub j: Option<Tensor>,
    pub bounds: Bounds,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckStatus {
    Passed,
    Failed,
    NotApplicable(String),
}

#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub identity_id: String,
    pub instance: String,
    pub status: CheckStatus,
    /// Rendered nonzero residuals (capped; `checked` counts all equalities).
    pub residuals: Vec<String>,
    pub checked: usize,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Passed
    }
}

const RESIDUAL_CAP: usize = 6;

struct Checker {
    residuals: Vec<String>,
    overflow: usize,
    checked: usize,
}

impl Checker {
    fn new() -> Self {
        Checker {
            residuals: Vec::new(),
            overflow: 0,
            checked: 0,
        }
    }

    fn record(&mut self, label: &str, residual: String) {
        if self.residuals.len() < RESIDUAL_CAP {
            self.residuals.push(format!("{label}: {residual}"));
        } else {
            self.overflow += 1;
        }
    }

    fn zero_poly(&mut self, label: &str, p: &SuperPolynomial) {
        self.checked += 1;
        if !p.is_zero() {
            self.record(label, p.to_string());
        }
    }

    fn eq_poly(&mut self, label: &str, lhs: &SuperPolynomial, rhs: &SuperPolynomial) {
        self.checked += 1;
        match lhs.sub(rhs) {
            Ok(diff) => {
                if !diff.is_zero() {
                    self.record(label, diff.to_string());
                }
            }
            Err(e) => self.record(label, e.to_string()),
        }
    }

    fn zero_section(&mut self, label: &str, sct: &Section) {
        self.checked += 1;
        if !sct.is_zero() {
            self.record(label, sct.to_string());
        }
    }

    fn eq_section(&mut self, label: &str, lhs: &Section, rhs: &Section) {
        self.checked += 1;
        match lhs.sub(rhs) {
            Ok(diff) => {
                if !diff.is_zero() {
                    self.record(label, diff.to_string());
                }
            }
            Err(e) => self.record(label, e.to_string()),
        }
    }

    fn claim(&mut self, label: &str, ok: bool) {
        self.checked += 1;
        if !ok {
            self.record(label, "predicate failed".into());
        }
    }

    fn finish(mut self, id: &str, instance: &str) -> IdentityReport {
        if self.overflow > 0 {
            self.residuals.push(format!("... {} more", self.overflow));
        }
        IdentityReport {
            identity_id: id.to_string(),
            instance: instance.to_string(),
            status: if self.residuals.is_empty() {
                CheckStatus::Passed
            } else {
                CheckStatus::Failed
            },
            residuals: self.residuals,
            checked: self.checked,
        }
    }
}

fn not_applicable(id: &str, instance: &str, reason: &str) -> IdentityReport {
    IdentityReport {
        identity_id: id.to_string(),
        instance: instance.to_string(),
        status: CheckStatus::NotApplicable(reason.to_string()),
        residuals: Vec::new(),
        checked: 0,
    }
}

/// Stable catalog keys, used by the CLI and in JSON reports.
pub const IDENTITY_IDS: [&str; 21] = [
    "T-01", "T-02", "T-03", "T-04", "T-05", "T-06", "T-07", "T-08", "T-09", "T-10", "T-11",
    "T-12", "T-13", "T-14", "T-15", "T-16", "T-17", "T-18", "T-19", "T-20", "T-21",
];

pub fn identity_title(id: &str) -> &'static str {
    match id {
        "T-01" => "torsion recursion under deformation",
        "T-02" => "Nijenhuis tensors stay Nijenhuis for Theta_k; Theta_k stays Courant",
        "T-03" => "torsion recursion for tensor powers I^n",
        "T-04" => "pairwise compatibility {Theta_k, Theta_m} = 0",
        "T-05" => "odd-power deformed bracket expansion",
        "T-06" => "deformation by I^n = n-fold deformation (Nijenhuis I)",
        "T-07" => "concomitant recursion C(I, I^n.J)",
        "T-08" => "C_{Theta_k}(I, I^n.J) = 0 for compatible pairs",
        "T-09" => "concomitant under deformation: C_{Theta_I}(I,J)",
        "T-10" => "C(I,J) = 2(Theta_{I,J} - Theta_{I.J}); word bracket = I^n.J bracket",
        "T-11" => "C_{Theta_k}(I^{2s+1}, I^n.J^{2m+1}) = 0",
        "T-12" => "cocycle transport and the Theta_{J,I,J} / Theta_{I,J,J} formulas",
        "T-13" => "lambda_k recursion for (Theta_k)_{J,J,I}",
        "T-14" => "J stays deforming for Theta_k; (J, I^{2n+1}) deforming-Nijenhuis",
        "T-15" => "J Poisson for Theta implies J Poisson for Theta_k",
        "T-16" => "torsion transfer under deformation",
        "T-17" => "Poisson-Nijenhuis hierarchy (I^n.J, I^{2m+1})",
        "T-18" => "Theta_{I.J, I.J} = (2+5 lambda_0)/18 eta alpha Theta",
        "T-19" => "torsion of a composition of anti-commuting tensors",
        "T-20" => "Nijenhuis-pair closure under composition, words and odd powers",
        "T-21" => "hypercomplex triple: all six Nijenhuis concomitants vanish",
        _ => "unknown",
    }
}

/// Gate results carry a human-readable not-applicable reason.
type Gate<T> = std::result::Result<T, String>;

struct Ctx<'a> {
    inst: &'a Instance,
    basis: Vec<Section>,
}

impl<'a> Ctx<'a> {
    fn new(inst: &'a Instance) -> Self {
        Ctx {
            inst,
            basis: basis_sections(inst.theta.signature()),
        }
    }

    fn theta(&self) -> &PreCourant {
        &self.inst.theta
    }

    fn endo_i(&self) -> Gate<Endomorphism> {
        match &self.inst.i {
            Some(t) => Ok(t.endo()),
            None => Err("no tensor bound for I".into()),
        }
    }

    fn endo_j(&self) -> Gate<Endomorphism> {
        match &self.inst.j {
            Some(t) => Ok(t.endo()),
            None => Err("no tensor bound for J".into()),
        }
    }

    fn skew_i(&self) -> Gate<TensorFunction> {
        match &self.inst.i {
            Some(t) => t.skew().ok_or_else(|| "I is not skew-symmetric".into()),
            None => Err("no tensor bound for I".into()),
        }
    }

    fn skew_j(&self) -> Gate<TensorFunction> {
        match &self.inst.j {
            Some(t) => t.skew().ok_or_else(|| "J is not skew-symmetric".into()),
            None => Err("no tensor bound for J".into()),
        }
    }

    fn thetas(&self, i: &TensorFunction, k_max: u32) -> Result<Vec<PreCourant>> {
        let mut out = vec![self.theta().clone()];
        for _ in 0..k_max {
            out.push(deform_theta(out.last().expect("nonempty"), i)?);
        }
        Ok(out)
    }

    /// All deformation words over {I, J} of length <= s, with labels.
    fn word_thetas(
        &self,
        i: &TensorFunction,
        j: &TensorFunction,
        s_max: u32,
    ) -> Result<Vec<(String, PreCourant)>> {
        let root = DeformationPath::new(self.theta().clone());
        let mut out = vec![(root.label(), root.result()?)];
        let mut frontier = vec![root];
        for _ in 0..s_max {
            let mut next = Vec::new();
            for path in &frontier {
                for (tag, tf) in [("I", i), ("J", j)] {
                    let ext = path.then(tag, tf);
                    out.push((ext.label(), ext.result()?));
                    next.push(ext);
                }
            }
            frontier = next;
        }
        Ok(out)
    }
}

/// Run one identity check on an instance.
pub fn verify_identity(id: &str, inst: &Instance) -> Result<IdentityReport> {
    let ctx = Ctx::new(inst);
    let name = inst.name.as_str();
    macro_rules! gate {
        ($e:expr) => {
            match $e {
                Ok(v) => v,
                Err(reason) => return Ok(not_applicable(id, name, &reason)),
            }
        };
    }
    match id {
        "T-01" => {
            let i = gate!(ctx.skew_i());
            check_t01(&ctx, &i).map(|c| c.finish(id, name))
        }
        "T-02" => {
            let i = gate!(ctx.skew_i());
            let ei = i.endo();
            if !is_nijenhuis(ctx.theta(), &ei)? {
                return Ok(not_applicable(id, name, "I is not Nijenhuis for Theta"));
            }
            check_t02(&ctx, &i).map(|c| c.finish(id, name))
        }
        "T-03" => {
            let ei = gate!(ctx.endo_i());
            check_t03(&ctx, &ei).map(|c| c.finish(id, name))
        }
        "T-04" => {
            let i = gate!(ctx.skew_i());
            if !ctx.theta().is_courant() {
                return Ok(not_applicable(id, name, "Theta is not a Courant structure"));
            }
            if !is_nijenhuis(ctx.theta(), &i.endo())? {
                return Ok(not_applicable(id, name, "I is not Nijenhuis for Theta"));
            }
            check_t04(&ctx, &i).map(|c| c.finish(id, name))
        }
        "T-05" => {
            let ei = gate!(ctx.endo_i());
            check_t05(&ctx, &ei).map(|c| c.finish(id, name))
        }
        "T-06" => {
            let ei = gate!(ctx.endo_i());
            if !is_nijenhuis(ctx.theta(), &ei)? {
                return Ok(not_applicable(id, name, "I is not Nijenhuis for Theta"));
            }
            check_t06(&ctx, &ei).map(|c| c.finish(id, name))
        }
        "T-07" => {
            let i = gate!(ctx.skew_i());
            let j = gate!(ctx.skew_j());
            if !i.endo().anti_commutes_with(&j.endo())? {
                return Ok(not_applicable(id, name, "I and J do not anti-commute"));
            }
            check_t07(&ctx, &i, &j).map(|c| c.finish(id, name))
        }
        "T-08" => {
            let (i, j) = gate!(compatible_gate(&ctx));
            if !torsion_vanishes_on_image(ctx.theta(), &i.endo(), &j.endo())? {
                return Ok(not_applicable(
                    id,
                    name,
                    "T_Theta I does not vanish on the image of J",
                ));
            }
            check_t08(&ctx, &i, &j).map(|c| c.finish(id, name))
        }
        "T-09" => {
            let i = gate!(ctx.skew_i());
            let j = gate!(ctx.skew_j());
            check_t09(&ctx, &i, &j).map(|c| c.finish(id, name))
        }
        "T-10" => {
            let i = gate!(ctx.skew_i());
            let j = gate!(ctx.skew_j());
            if !i.endo().anti_commutes_with(&j.endo())? {
                return Ok(not_applicable(id, name, "I and J do not anti-commute"));
            }
            check_t10(&ctx, &i, &j).map(|c| c.finish(id, name))
        }
        "T-11" => {
            let (i, j) = gate!(compatible_gate(&ctx));
            if !is_nijenhuis(ctx.theta(), &i.endo())? {
                return Ok(not_applicable(id, name, "I is not Nijenhuis for Theta"));
            }
            check_t11(&ctx, &i, &j).map(|c| c.finish(id, name))
        }
        "T-12" => {
            let i = gate!(ctx.skew_i());
            let j = gate!(ctx.skew_j());
            check_t12(&ctx, &i, &j).map(|c| c.finish(id, name))
        }
        "T-13" => {
            let (i, j) = gate!(compatible_gate(&ctx));
            if !torsion_vanishes_on_image(ctx.theta(), &i.endo(), &j.endo())? {
                return Ok(not_applicable(
                    id,
                    name,
                    "T_Theta I does not vanish on the image of J",
                ));
            }
            let lambda0 = gate!(lambda0_gate(&ctx, &i, &j));
            check_t13(&ctx, &i, &j, &lambda0).map(|c| c.finish(id, name))
        }
        "T-14" => {
            let (i, j) = gate!(compatible_gate(&ctx));
            if !torsion_vanishes_on_image(ctx.theta(), &i.endo(), &j.endo())? {
                return Ok(not_applicable(
                    id,
                    name,
                    "T_Theta I does not vanish on the image of J",
                ));
            }
            if !is_nijenhuis(ctx.theta(), &i.endo())? {
                return Ok(not_applicable(id, name, "I is not Nijenhuis for Theta"));
            }
            let lambda0 = gate!(lambda0_gate(&ctx, &i, &j));
            let eta = match deforming_eta(ctx.theta(), &j)? {
                Some(e) => e,
                None => return Ok(not_applicable(id, name, "J is not deforming for Theta")),
            };
            check_t14(&ctx, &i, &j, &lambda0, &eta).map(|c| c.finish(id, name))
        }
        "T-15" => {
            let (i, j) = gate!(compatible_gate(&ctx));
            if !torsion_vanishes_on_image(ctx.theta(), &i.endo(), &j.endo())? {
                return Ok(not_applicable(
                    id,
                    name,
                    "T_Theta I does not vanish on the image of J",
                ));
            }
            if !deform_theta_by_function(ctx.theta(), &jij_function(&i, &j)?)?.is_zero() {
                return Ok(not_applicable(id, name, "Theta_{{J,{I,J}}} != 0"));
            }
            if !is_poisson(ctx.theta(), &j)? {
                return Ok(not_applicable(id, name, "J is not Poisson for Theta"));
            }
            check_t15(&ctx, &i, &j).map(|c| c.finish(id, name))
        }
        "T-16" => {
            let i = gate!(ctx.skew_i());
            let j = gate!(ctx.skew_j());
            if !i.endo().anti_commutes_with(&j.endo())? {
                return Ok(not_applicable(id, name, "I and J do not anti-commute"));
            }
            check_t16(&ctx, &i, &j).map(|c| c.finish(id, name))
        }
        "T-17" => {
            let (i, j) = gate!(compatible_gate(&ctx));
            let cls = classify_pair(ctx.theta(), &i, &j)?;
            if cls.pair_class != PairClass::PoissonNijenhuis {
                return Ok(not_applicable(
                    id,
                    name,
                    &format!("(J,I) is not a Poisson-Nijenhuis pair (class: {})", cls.pair_class),
                ));
            }
            if !deform_theta_by_function(ctx.theta(), &jij_function(&i, &j)?)?.is_zero() {
                return Ok(not_applicable(id, name, "Theta_{{J,{I,J}}} != 0"));
            }
            check_t17(&ctx, &i, &j).map(|c| c.finish(id, name))
        }
        "T-18" => {
            let (i, j) = gate!(compatible_gate(&ctx));
            if !is_nijenhuis(ctx.theta(), &i.endo())? {
                return Ok(not_applicable(id, name, "I is not Nijenhuis for Theta"));
            }
            let eta = match deforming_eta(ctx.theta(), &j)? {
                Some(e) => e,
                None => return Ok(not_applicable(id, name, "J is not deforming for Theta")),
            };
            let alpha = match i.endo().scalar_square()? {
                Some(a) => a,
                None => return Ok(not_applicable(id, name, "I^2 is not a scalar multiple of id")),
            };
            let lambda0 = gate!(lambda0_gate(&ctx, &i, &j));
            check_t18(&ctx, &i, &j, &lambda0, &eta, &alpha).map(|c| c.finish(id, name))
        }
        "T-19" => {
            let ei = gate!(ctx.endo_i());
            let ej = gate!(ctx.endo_j());
            if !ei.anti_commutes_with(&ej)? {
                return Ok(not_applicable(id, name, "I and J do not anti-commute"));
            }
            check_t19(&ctx, &ei, &ej).map(|c| c.finish(id, name))
        }
        "T-20" => {
            let (i, j) = gate!(nijenhuis_pair_gate(&ctx));
            check_t20(&ctx, &i, &j).map(|c| c.finish(id, name))
        }
        "T-21" => {
            let (i, j) = gate!(nijenhuis_pair_gate(&ctx));
            let minus_one = -Rat::one();
            if i.endo().scalar_square()? != Some(minus_one.clone())
                || j.endo().scalar_square()? != Some(minus_one)
            {
                return Ok(not_applicable(id, name, "needs I^2 = J^2 = -id"));
            }
            check_t21(&ctx, &i, &j).map(|c| c.finish(id, name))
        }
        _ => Err(Error::UnknownIdentity(id.to_string())),
    }
}

fn compatible_gate(ctx: &Ctx) -> Gate<(TensorFunction, TensorFunction)> {
    let i = ctx.skew_i()?;
    let j = ctx.skew_j()?;
    let anti = i
        .endo()
        .anti_commutes_with(&j.endo())
        .map_err(|e| e.to_string())?;
    if !anti {
        return Err("I and J do not anti-commute".into());
    }
    let c = concomitant(ctx.theta(), &i, &j).map_err(|e| e.to_string())?;
    if !c.is_zero() {
        return Err("C_Theta(I,J) != 0 (not anti-commuting w.r.t. Theta)".into());
    }
    Ok((i, j))
}

fn nijenhuis_pair_gate(ctx: &Ctx) -> Gate<(TensorFunction, TensorFunction)> {
    let (i, j) = compatible_gate(ctx)?;
    let ni = is_nijenhuis(ctx.theta(), &i.endo()).map_err(|e| e.to_string())?;
    let nj = is_nijenhuis(ctx.theta(), &j.endo()).map_err(|e| e.to_string())?;
    if !ni || !nj {
        return Err("(I,J) is not a Nijenhuis pair".into());
    }
    Ok((i, j))
}

fn lambda0_gate(ctx: &Ctx, i: &TensorFunction, j: &TensorFunction) -> Gate<Rat> {
    let lambda0 = match lambda0_of(ctx.theta(), i, j).map_err(|e| e.to_string())? {
        Some(l) => l,
        None => return Err("no lambda_0 with Theta_{{J,{I,J}}} = lambda_0 Theta_{J,J,I}".into()),
    };
    for m in 1..=ctx.inst.bounds.k {
        if lambda0 == excluded_lambda(m) {
            return Err(format!(
                "lambda_0 = {} is excluded (equals 4/((-3)^{m}-1))",
                format_rat(&lambda0)
            ));
        }
    }
    Ok(lambda0)
}

fn check_t01(ctx: &Ctx, i: &TensorFunction) -> Result<Checker> {
    let mut c = Checker::new();
    let ei = i.endo();
    let thetas = ctx.thetas(i, ctx.inst.bounds.k)?;
    for k in 1..=ctx.inst.bounds.k as usize {
        for (xi, x) in ctx.basis.iter().enumerate() {
            for (yi, y) in ctx.basis.iter().enumerate() {
                let lhs = torsion(&thetas[k], &ei, x, y)?;
                let rhs = torsion(&thetas[k - 1], &ei, &ei.apply(x)?, y)?
                    .add(&torsion(&thetas[k - 1], &ei, x, &ei.apply(y)?)?)?
                    .sub(&ei.apply(&torsion(&thetas[k - 1], &ei, x, y)?)?)?;
                c.eq_section(&format!("k={k} X=u{xi} Y=u{yi}"), &lhs, &rhs);
            }
        }
    }
    Ok(c)
}

fn check_t02(ctx: &Ctx, i: &TensorFunction) -> Result<Checker> {
    let mut c = Checker::new();
    let ei = i.endo();
    let thetas = ctx.thetas(i, ctx.inst.bounds.k)?;
    let theta_courant = ctx.theta().is_courant();
    for (k, tk) in thetas.iter().enumerate() {
        c.claim(
            &format!("T_{{Theta_{k}}} I = 0"),
            is_nijenhuis(tk, &ei)?,
        );
        if theta_courant {
            c.zero_poly(&format!("{{Theta_{k}, Theta_{k}}}"), &tk.self_bracket());
        }
    }
    Ok(c)
}

fn check_t03(ctx: &Ctx, ei: &Endomorphism) -> Result<Checker> {
    let mut c = Checker::new();
    let th = ctx.theta();
    let n_max = ctx.inst.bounds.n.max(2);
    for n in 2..=n_max {
        let i_n1 = ei.power(n - 1)?;
        let i_sq = ei.power(2)?;
        let i_2n2 = ei.power(2 * n - 2)?;
        let i_n = ei.power(n)?;
        let i_n2 = ei.power(n - 2)?;
        for (xi, x) in ctx.basis.iter().enumerate() {
            for (yi, y) in ctx.basis.iter().enumerate() {
                let lhs = torsion(th, &i_n, x, y)?;
                let t1 = torsion(th, ei, &i_n1.apply(x)?, &i_n1.apply(y)?)?;
                let t2 = ei.apply(
                    &torsion(th, &i_n1, &ei.apply(x)?, y)?
                        .add(&torsion(th, &i_n1, x, &ei.apply(y)?)?)?,
                )?;
                let t3 = i_sq.apply(&torsion(th, &i_n2, &ei.apply(x)?, &ei.apply(y)?)?)?;
                let t4 = i_2n2.apply(&torsion(th, ei, x, y)?)?;
                let rhs = t1.add(&t2)?.sub(&t3)?.add(&t4)?;
                c.eq_section(&format!("n={n} X=u{xi} Y=u{yi}"), &lhs, &rhs);
            }
        }
    }
    Ok(c)
}

fn check_t04(ctx: &Ctx, i: &TensorFunction) -> Result<Checker> {
    let mut c = Checker::new();
    let thetas = ctx.thetas(i, ctx.inst.bounds.k)?;
    for (k, tk) in thetas.iter().enumerate() {
        for (m, tm) in thetas.iter().enumerate() {
            c.zero_poly(
                &format!("{{Theta_{k}, Theta_{m}}}"),
                &bracket(tk.as_poly(), tm.as_poly())?,
            );
        }
    }
    Ok(c)
}

fn check_t05(ctx: &Ctx, ei: &Endomorphism) -> Result<Checker> {
    let mut c = Checker::new();
    let th = ctx.theta();
    let base = BracketOp::new(th.clone());
    for n in 0..=ctx.inst.bounds.n {
        let odd = base.deform(&ei.power(2 * n + 1)?);
        let even_then_i = base.deform(&ei.power(2 * n)?).deform(ei);
        for (xi, x) in ctx.basis.iter().enumerate() {
            for (yi, y) in ctx.basis.iter().enumerate() {
                let lhs = odd.eval(x, y)?;
                let mut rhs = even_then_i.eval(x, y)?;
                if n > 0 {
                    for i_pow in 0..=(2 * n - 1) {
                        let j_pow = 2 * n - 1 - i_pow;
                        let e_i = ei.power(i_pow)?;
                        let e_j = ei.power(j_pow)?;
                        let inner = torsion(th, ei, &e_i.apply(x)?, y)?
                            .add(&torsion(th, ei, x, &e_i.apply(y)?)?)?;
                        rhs = rhs.sub(&e_j.apply(&inner)?)?;
                    }
                }
                c.eq_section(&format!("n={n} X=u{xi} Y=u{yi}"), &lhs, &rhs);
            }
        }
    }
    Ok(c)
}

fn check_t06(ctx: &Ctx, ei: &Endomorphism) -> Result<Checker> {
    let mut c = Checker::new();
    let base = BracketOp::new(ctx.theta().clone());
    // b) n-fold deformation equals deformation by the n-th power
    for n in 0..=ctx.inst.bounds.n {
        let by_power = base.deform(&ei.power(n)?);
        let mut word = base.clone();
        for _ in 0..n {
            word = word.deform(ei);
        }
        for (xi, x) in ctx.basis.iter().enumerate() {
            for (yi, y) in ctx.basis.iter().enumerate() {
                c.eq_section(
                    &format!("b) n={n} X=u{xi} Y=u{yi}"),
                    &by_power.eval(x, y)?,
                    &word.eval(x, y)?,
                );
            }
        }
    }
    // c) [X,Y]_{I^m, I^n} = [X,Y]_{I^{m+n}}
    for m in 0..=ctx.inst.bounds.m {
        for n in 0..=ctx.inst.bounds.n {
            let two_step = base.deform(&ei.power(m)?).deform(&ei.power(n)?);
            let one_step = base.deform(&ei.power(m + n)?);
            for (xi, x) in ctx.basis.iter().enumerate() {
                for (yi, y) in ctx.basis.iter().enumerate() {
                    c.eq_section(
                        &format!("c) m={m} n={n} X=u{xi} Y=u{yi}"),
                        &two_step.eval(x, y)?,
                        &one_step.eval(x, y)?,
                    );
                }
            }
        }
    }
    Ok(c)
}

fn check_t07(ctx: &Ctx, i: &TensorFunction, j: &TensorFunction) -> Result<Checker> {
    let mut c = Checker::new();
    let th = ctx.theta();
    let (ei, ej) = (i.endo(), j.endo());
    let two = rat(2, 1);
    for n in 1..=ctx.inst.bounds.n {
        let inj = ei.power(n)?.compose(&ej)?;
        let inj_prev = ei.power(n - 1)?.compose(&ej)?;
        for (xi, x) in ctx.basis.iter().enumerate() {
            for (yi, y) in ctx.basis.iter().enumerate() {
                let lhs = concomitant_op(th, &ei, &inj, x, y)?;
                let rhs = ei
                    .apply(&concomitant_op(th, &ei, &inj_prev, x, y)?)?
                    .add(&torsion(th, &ei, &inj_prev.apply(x)?, y)?.scale(&two))?
                    .add(&torsion(th, &ei, x, &inj_prev.apply(y)?)?.scale(&two))?;
                c.eq_section(&format!("n={n} X=u{xi} Y=u{yi}"), &lhs, &rhs);
            }
        }
    }
    Ok(c)
}

fn check_t08(ctx: &Ctx, i: &TensorFunction, j: &TensorFunction) -> Result<Checker> {
    let mut c = Checker::new();
    let (ei, ej) = (i.endo(), j.endo());
    let thetas = ctx.thetas(i, ctx.inst.bounds.k)?;
    for n in 0..=ctx.inst.bounds.n {
        let inj = func_of(&ei.power(n)?.compose(&ej)?)?;
        for (k, tk) in thetas.iter().enumerate() {
            c.zero_poly(
                &format!("C_{{Theta_{k}}}(I, I^{n}.J)"),
                &concomitant(tk, i, &inj)?,
            );
        }
        c.claim(
            &format!("I anti-commutes with I^{n}.J"),
            ei.anti_commutes_with(&inj.endo())?,
        );
    }
    Ok(c)
}

fn check_t09(ctx: &Ctx, i: &TensorFunction, j: &TensorFunction) -> Result<Checker> {
    let mut c = Checker::new();
    let th = ctx.theta();
    let theta_i = deform_theta(th, i)?;
    let lhs = concomitant(&theta_i, i, j)?;
    // general form: C_{Theta_I}(I,J) = C_Theta(I, {J,I}) + {I, C_Theta(I,J)}
    let ji = bracket(j.as_poly(), i.as_poly())?;
    let rhs = concomitant_funcs(th, i.as_poly(), &ji)?
        .add(&bracket(i.as_poly(), &concomitant(th, i, j)?)?)?;
    c.eq_poly("general form", &lhs, &rhs);
    // anti-commuting special case: {J,I} = 2 I.J
    if i.endo().anti_commutes_with(&j.endo())? {
        let ioj = func_of(&i.endo().compose(&j.endo())?)?;
        c.eq_poly("{J,I} = 2 I.J", &ji, &ioj.as_poly().scale(&rat(2, 1)));
        let rhs2 = concomitant(th, i, &ioj)?
            .scale(&rat(2, 1))
            .add(&bracket(i.as_poly(), &concomitant(th, i, j)?)?)?;
        c.eq_poly("anti-commuting form", &lhs, &rhs2);
    }
    Ok(c)
}

fn check_t10(ctx: &Ctx, i: &TensorFunction, j: &TensorFunction) -> Result<Checker> {
    let mut c = Checker::new();
    let th = ctx.theta();
    let (ei, ej) = (i.endo(), j.endo());
    // Lemma: C_Theta(I,J) = 2 (Theta_{I,J} - Theta_{I.J})
    let ioj = func_of(&ei.compose(&ej)?)?;
    let lhs = concomitant(th, i, j)?;
    let rhs = theta_path(th, &[i, j])?
        .as_poly()
        .sub(deform_theta(th, &ioj)?.as_poly())?
        .scale(&rat(2, 1));
    c.eq_poly("C(I,J) = 2(Theta_{I,J} - Theta_{I.J})", &lhs, &rhs);
    // word bracket = I^n.J bracket, needs I Nijenhuis and the compatible pair
    if is_nijenhuis(th, &ei)? && concomitant(th, i, j)?.is_zero() {
        let base = BracketOp::new(th.clone());
        for n in 0..=ctx.inst.bounds.n {
            let direct = base.deform(&ei.power(n)?.compose(&ej)?);
            let mut word = base.clone();
            for _ in 0..n {
                word = word.deform(&ei);
            }
            word = word.deform(&ej);
            for (xi, x) in ctx.basis.iter().enumerate() {
                for (yi, y) in ctx.basis.iter().enumerate() {
                    c.eq_section(
                        &format!("word n={n} X=u{xi} Y=u{yi}"),
                        &word.eval(x, y)?,
                        &direct.eval(x, y)?,
                    );
                }
            }
        }
    }
    Ok(c)
}

fn check_t11(ctx: &Ctx, i: &TensorFunction, j: &TensorFunction) -> Result<Checker> {
    let mut c = Checker::new();
    let (ei, ej) = (i.endo(), j.endo());
    let thetas = ctx.thetas(i, ctx.inst.bounds.k)?;
    let j_nijenhuis = is_nijenhuis(ctx.theta(), &ej)?;
    for s in 0..=ctx.inst.bounds.s {
        let i_odd = func_of(&ei.power(2 * s + 1)?)?;
        for n in 0..=ctx.inst.bounds.n {
            let inj = func_of(&ei.power(n)?.compose(&ej)?)?;
            for (k, tk) in thetas.iter().enumerate() {
                c.zero_poly(
                    &format!("C_{{Theta_{k}}}(I^{}, I^{n}.J)", 2 * s + 1),
                    &concomitant(tk, &i_odd, &inj)?,
                );
            }
            if j_nijenhuis {
                for m in 0..=ctx.inst.bounds.m {
                    let injm = func_of(&ei.power(n)?.compose(&ej.power(2 * m + 1)?)?)?;
                    for (k, tk) in thetas.iter().enumerate() {
                        c.zero_poly(
                            &format!(
                                "C_{{Theta_{k}}}(I^{}, I^{n}.J^{})",
                                2 * s + 1,
                                2 * m + 1
                            ),
                            &concomitant(tk, &i_odd, &injm)?,
                        );
                    }
                }
            }
        }
    }
    Ok(c)
}

fn check_t12(ctx: &Ctx, i: &TensorFunction, j: &TensorFunction) -> Result<Checker> {
    let mut c = Checker::new();
    let th = ctx.theta();
    let cij = concomitant(th, i, j)?;
    let k_fn = jij_function(i, j)?;
    let theta_jji = deform_theta(&theta_path(th, &[j, j])?, i)?;
    let theta_k_fn = deform_theta_by_function(th, &k_fn)?;
    // Theta_{J,I,J} = 1/3 (Theta_{J,J,I} + Theta_{{J,{I,J}}} + {J, C(I,J)})
    let lhs = theta_path(th, &[j, i, j])?;
    let rhs = theta_jji
        .as_poly()
        .add(theta_k_fn.as_poly())?
        .add(&bracket(j.as_poly(), &cij)?)?
        .scale(&rat(1, 3));
    c.eq_poly("Theta_{J,I,J} formula", lhs.as_poly(), &rhs);
    // Theta_{I,J,J} = -1/3 (Theta_{J,J,I} + Theta_{{J,{I,J}}} - 2 {J, C(I,J)})
    let lhs2 = theta_path(th, &[i, j, j])?;
    let rhs2 = theta_jji
        .as_poly()
        .add(theta_k_fn.as_poly())?
        .sub(&bracket(j.as_poly(), &cij)?.scale(&rat(2, 1)))?
        .scale(&rat(-1, 3));
    c.eq_poly("Theta_{I,J,J} formula", lhs2.as_poly(), &rhs2);
    // cocycle transport, for anti-commuting I, J
    if i.endo().anti_commutes_with(&j.endo())? {
        for k in 0..=ctx.inst.bounds.k {
            let direct = {
                let mut t = theta_k_fn.clone();
                for _ in 0..k {
                    t = deform_theta(&t, i)?;
                }
                t
            };
            for r in 0..=k {
                let s = k - r;
                let mut t = theta_k(th, i, r)?;
                t = deform_theta_by_function(&t, &k_fn)?;
                for _ in 0..s {
                    t = deform_theta(&t, i)?;
                }
                c.eq_poly(&format!("transport r={r} s={s}"), t.as_poly(), direct.as_poly());
            }
        }
        // corollary: under C(I,J) = 0 and the lambda_0 relation,
        // Theta_{I,J,J} = alpha Theta_{J,J,I} with alpha = -(lambda_0+1)/3
        if cij.is_zero() {
            if let Some(lambda0) = lambda0_of(th, i, j)? {
                let alpha = -(lambda0 + Rat::one()) / Rat::from_integer(3.into());
                c.eq_poly(
                    "Theta_{I,J,J} = alpha Theta_{J,J,I}",
                    lhs2.as_poly(),
                    &theta_jji.as_poly().scale(&alpha),
                );
                if let Some(eta) = deforming_eta(th, j)? {
                    let ti = deform_theta(th, i)?;
                    c.eq_poly(
                        "Theta_{I,J,J} = eta alpha Theta_I",
                        lhs2.as_poly(),
                        &ti.as_poly().scale(&(eta * alpha)),
                    );
                }
            }
        }
    }
    Ok(c)
}

fn check_t13(ctx: &Ctx, i: &TensorFunction, j: &TensorFunction, lambda0: &Rat) -> Result<Checker> {
    let mut c = Checker::new();
    let th = ctx.theta();
    let k_max = ctx.inst.bounds.k;
    let seq = lambda_seq(lambda0, k_max).map_err(|e| Error::Invalid(e.to_string()))?;
    let k_fn = jij_function(i, j)?;
    let thetas = ctx.thetas(i, k_max)?;
    // Theta_{J,J,I,...,I} with k+1 trailing I's
    let mut jji_path = deform_theta(&theta_path(th, &[j, j])?, i)?;
    for (k, tk) in thetas.iter().enumerate() {
        let lhs = deform_theta_by_function(tk, &k_fn)?;
        let tk_jji = deform_theta(&theta_path(tk, &[j, j])?, i)?;
        // (a)
        c.eq_poly(
            &format!("(a) k={k}"),
            lhs.as_poly(),
            &tk_jji.as_poly().scale(&seq.values[k]),
        );
        // (b): lambda_k (Theta_k)_{J,J,I} = lambda_0 Theta_{J,J,I,...,I (k+1)}
        c.eq_poly(
            &format!("(b) k={k}"),
            &tk_jji.as_poly().scale(&seq.values[k]),
            &jji_path.as_poly().scale(lambda0),
        );
        jji_path = deform_theta(&jji_path, i)?;
    }
    // (c) at lambda_0 = 0: (Theta_k)_{J,J} = (-1/3)^k Theta_{J,J,I,...,I (k)}
    if lambda0.is_zero() {
        let mut path = theta_path(th, &[j, j])?;
        let mut factor = Rat::one();
        for (k, tk) in thetas.iter().enumerate() {
            let lhs = theta_path(tk, &[j, j])?;
            c.eq_poly(&format!("(c) k={k}"), lhs.as_poly(), &path.as_poly().scale(&factor));
            path = deform_theta(&path, i)?;
            factor *= rat(-1, 3);
        }
    }
    Ok(c)
}

fn check_t14(
    ctx: &Ctx,
    i: &TensorFunction,
    j: &TensorFunction,
    lambda0: &Rat,
    eta: &Rat,
) -> Result<Checker> {
    let mut c = Checker::new();
    let k_max = ctx.inst.bounds.k;
    let seq = lambda_seq(lambda0, k_max).map_err(|e| Error::Invalid(e.to_string()))?;
    let thetas = ctx.thetas(i, k_max)?;
    // Prop: J is deforming for Theta_k with the predicted constant
    for (k, tk) in thetas.iter().enumerate() {
        let lhs = theta_path(tk, &[j, j])?;
        let constant = if lambda0.is_zero() {
            let mut f = Rat::one();
            for _ in 0..k {
                f *= rat(-1, 3);
            }
            f * eta
        } else {
            lambda0 / &seq.values[k] * eta
        };
        c.eq_poly(
            &format!("(Theta_{k})_{{J,J}} = c Theta_{k}"),
            lhs.as_poly(),
            &tk.as_poly().scale(&constant),
        );
    }
    // Thm: (J, I^{2n+1}) is a deforming-Nijenhuis pair for Theta_k
    for n in 0..=ctx.inst.bounds.n {
        let i_odd = func_of(&i.endo().power(2 * n + 1)?)?;
        for (k, tk) in thetas.iter().enumerate() {
            let tag = format!("k={k} n={n}");
            c.claim(
                &format!("{tag}: anti-commute"),
                i_odd.endo().anti_commutes_with(&j.endo())?,
            );
            c.zero_poly(
                &format!("{tag}: C_{{Theta_k}}(I^{{2n+1}}, J)"),
                &concomitant(tk, &i_odd, j)?,
            );
            c.claim(
                &format!("{tag}: J deforming"),
                deforming_eta(tk, j)?.is_some(),
            );
            c.claim(
                &format!("{tag}: I^{{2n+1}} Nijenhuis"),
                is_nijenhuis(tk, &i_odd.endo())?,
            );
        }
    }
    Ok(c)
}

fn check_t15(ctx: &Ctx, i: &TensorFunction, j: &TensorFunction) -> Result<Checker> {
    let mut c = Checker::new();
    let thetas = ctx.thetas(i, ctx.inst.bounds.k)?;
    for (k, tk) in thetas.iter().enumerate() {
        c.zero_poly(
            &format!("(Theta_{k})_{{J,J}}"),
            theta_path(tk, &[j, j])?.as_poly(),
        );
    }
    Ok(c)
}

fn check_t16(ctx: &Ctx, i: &TensorFunction, j: &TensorFunction) -> Result<Checker> {
    let mut c = Checker::new();
    let th = ctx.theta();
    let (ei, ej) = (i.endo(), j.endo());
    let theta_i = deform_theta(th, i)?;
    let theta_j = deform_theta(th, j)?;
    for (xi, x) in ctx.basis.iter().enumerate() {
        for (yi, y) in ctx.basis.iter().enumerate() {
            let cxy = concomitant_op(th, &ei, &ej, x, y)?;
            // T_{Theta_I} J (X,Y)
            let lhs1 = torsion(&theta_i, &ej, x, y)?;
            let rhs1 = ej
                .apply(&cxy)?
                .neg()
                .sub(&torsion(th, &ej, &ei.apply(x)?, y)?)?
                .sub(&torsion(th, &ej, x, &ei.apply(y)?)?)?
                .sub(&ei.apply(&torsion(th, &ej, x, y)?)?)?;
            c.eq_section(&format!("J-transfer X=u{xi} Y=u{yi}"), &lhs1, &rhs1);
            // T_{Theta_J} I (X,Y)
            let lhs2 = torsion(&theta_j, &ei, x, y)?;
            let rhs2 = ei
                .apply(&cxy)?
                .neg()
                .sub(&torsion(th, &ei, &ej.apply(x)?, y)?)?
                .sub(&torsion(th, &ei, x, &ej.apply(y)?)?)?
                .sub(&ej.apply(&torsion(th, &ei, x, y)?)?)?;
            c.eq_section(&format!("I-transfer X=u{xi} Y=u{yi}"), &lhs2, &rhs2);
        }
    }
    Ok(c)
}

fn check_t17(ctx: &Ctx, i: &TensorFunction, j: &TensorFunction) -> Result<Checker> {
    let mut c = Checker::new();
    let bounds = ctx.inst.bounds;
    let hierarchy =
        crate::hierarchy::build_pn_hierarchy(ctx.theta(), j, i, bounds.n, bounds.k)?;
    for t in &hierarchy.tensors {
        for (k, ok) in t.poisson.iter().enumerate() {
            c.claim(&format!("I^{}.J Poisson for Theta_{k}", t.n), *ok);
        }
    }
    for (k, per_m) in hierarchy.compatible.iter().enumerate() {
        for (m, per_n) in per_m.iter().enumerate() {
            for (n, ok) in per_n.iter().enumerate() {
                c.claim(
                    &format!("(Theta_{k})_{{I^{m}.J, I^{n}.J}} = 0"),
                    *ok,
                );
            }
        }
    }
    // (I^n.J, I^{2m+1}) is a Poisson-Nijenhuis pair for Theta_k
    let thetas = ctx.thetas(i, bounds.k)?;
    for n in 0..=bounds.n {
        let inj = func_of(&i.endo().power(n)?.compose(&j.endo())?)?;
        for m in 0..=bounds.m {
            let i_odd = func_of(&i.endo().power(2 * m + 1)?)?;
            for (k, tk) in thetas.iter().enumerate() {
                let cls = classify_pair(tk, &i_odd, &inj)?;
                c.claim(
                    &format!("(I^{n}.J, I^{}) PN pair for Theta_{k}", 2 * m + 1),
                    cls.pair_class == PairClass::PoissonNijenhuis,
                );
            }
        }
    }
    Ok(c)
}

fn check_t18(
    ctx: &Ctx,
    i: &TensorFunction,
    j: &TensorFunction,
    lambda0: &Rat,
    eta: &Rat,
    alpha: &Rat,
) -> Result<Checker> {
    let mut c = Checker::new();
    let th = ctx.theta();
    let ioj = func_of(&i.endo().compose(&j.endo())?)?;
    let lhs = theta_path(th, &[&ioj, &ioj])?;
    let factor = (rat(2, 1) + rat(5, 1) * lambda0) / rat(18, 1) * eta * alpha;
    c.eq_poly(
        "Theta_{I.J, I.J} = (2+5 lambda_0)/18 eta alpha Theta",
        lhs.as_poly(),
        &th.as_poly().scale(&factor),
    );
    Ok(c)
}

fn check_t19(ctx: &Ctx, ei: &Endomorphism, ej: &Endomorphism) -> Result<Checker> {
    let mut c = Checker::new();
    let th = ctx.theta();
    let comp = ei.compose(ej)?;
    let side = |a: &Endomorphism, b: &Endomorphism, x: &Section, y: &Section| -> Result<Section> {
        let bx = b.apply(x)?;
        let by = b.apply(y)?;
        torsion(th, a, &bx, &by)?
            .sub(&b.apply(&torsion(th, a, &bx, y)?.add(&torsion(th, a, x, &by)?)?)?)?
            .sub(&b.apply(&b.apply(&torsion(th, a, x, y)?)?)?)
    };
    for (xi, x) in ctx.basis.iter().enumerate() {
        for (yi, y) in ctx.basis.iter().enumerate() {
            let lhs = torsion(th, &comp, x, y)?.scale(&rat(2, 1));
            let rhs = side(ei, ej, x, y)?.add(&side(ej, ei, x, y)?)?;
            c.eq_section(&format!("X=u{xi} Y=u{yi}"), &lhs, &rhs);
        }
    }
    Ok(c)
}

fn check_t20(ctx: &Ctx, i: &TensorFunction, j: &TensorFunction) -> Result<Checker> {
    let mut c = Checker::new();
    let bounds = ctx.inst.bounds;
    let (ei, ej) = (i.endo(), j.endo());

    let nij_pair = |c: &mut Checker,
                    tag: &str,
                    th: &PreCourant,
                    a: &TensorFunction,
                    b: &TensorFunction|
     -> Result<()> {
        c.claim(
            &format!("{tag}: anti-commute"),
            a.endo().anti_commutes_with(&b.endo())?,
        );
        c.zero_poly(&format!("{tag}: concomitant"), &concomitant(th, a, b)?);
        c.claim(&format!("{tag}: first Nijenhuis"), is_nijenhuis(th, &a.endo())?);
        c.claim(&format!("{tag}: second Nijenhuis"), is_nijenhuis(th, &b.endo())?);
        Ok(())
    };

    // Prop: (I, I.J) and (J, I.J) are Nijenhuis pairs for Theta
    let ioj = func_of(&ei.compose(&ej)?)?;
    nij_pair(&mut c, "(I, I.J)", ctx.theta(), i, &ioj)?;
    nij_pair(&mut c, "(J, I.J)", ctx.theta(), j, &ioj)?;

    // Thm: (I,J) stays a Nijenhuis pair for every deformation word
    let words = ctx.word_thetas(i, j, bounds.s)?;
    for (label, th_w) in &words {
        nij_pair(&mut c, &format!("(I,J) for {label}"), th_w, i, j)?;
    }

    // odd powers: (I^{2m+1}, J) for every word
    for m in 0..=bounds.m {
        let i_odd = func_of(&ei.power(2 * m + 1)?)?;
        for (label, th_w) in &words {
            nij_pair(
                &mut c,
                &format!("(I^{}, J) for {label}", 2 * m + 1),
                th_w,
                &i_odd,
                j,
            )?;
        }
    }

    // Lemma: I^m . J^n is Nijenhuis when m or n is odd
    for m in 0..=bounds.m {
        for n in 0..=bounds.n {
            if m % 2 == 0 && n % 2 == 0 {
                continue;
            }
            let comp = ei.power(m)?.compose(&ej.power(n)?)?;
            c.claim(
                &format!("I^{m}.J^{n} Nijenhuis"),
                is_nijenhuis(ctx.theta(), &comp)?,
            );
        }
    }

    // Thm: (I^{2m+1}.J^n, J^{2t+1}) is a Nijenhuis pair for every word
    for m in 0..=bounds.m {
        for n in 0..=bounds.n {
            let a = func_of(&ei.power(2 * m + 1)?.compose(&ej.power(n)?)?)?;
            for t in 0..=bounds.t {
                let b = func_of(&ej.power(2 * t + 1)?)?;
                for (label, th_w) in &words {
                    nij_pair(
                        &mut c,
                        &format!("(I^{}.J^{n}, J^{}) for {label}", 2 * m + 1, 2 * t + 1),
                        th_w,
                        &a,
                        &b,
                    )?;
                }
            }
        }
    }
    Ok(c)
}

fn check_t21(ctx: &Ctx, i: &TensorFunction, j: &TensorFunction) -> Result<Checker> {
    let mut c = Checker::new();
    let th = ctx.theta();
    let (ei, ej) = (i.endo(), j.endo());
    let ek = ei.compose(&ej)?;
    // I.J.K = -id for K = I.J (since (I.J)^2 = -I^2 J^2 = -id)
    let minus_id = Endomorphism::identity(th.signature()).neg();
    c.claim("I.J.K = -id", ei.compose(&ej)?.compose(&ek)? == minus_id);
    c.claim(
        "K^2 = -id",
        ek.scalar_square()? == Some(-Rat::one()),
    );
    let pairs: [(&str, &Endomorphism, &Endomorphism); 6] = [
        ("N(I,I)", &ei, &ei),
        ("N(J,J)", &ej, &ej),
        ("N(K,K)", &ek, &ek),
        ("N(I,J)", &ei, &ej),
        ("N(J,K)", &ej, &ek),
        ("N(I,K)", &ei, &ek),
    ];
    for (tag, a, b) in pairs {
        for (xi, x) in ctx.basis.iter().enumerate() {
            for (yi, y) in ctx.basis.iter().enumerate() {
                c.zero_section(
                    &format!("{tag} X=u{xi} Y=u{yi}"),
                    &nijenhuis_concomitant(th, a, b, x, y)?,
                );
            }
        }
    }
    Ok(c)
}
