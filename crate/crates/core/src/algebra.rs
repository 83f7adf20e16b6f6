//! Exact graded-commutative superalgebra on the coordinates `x_i, p^i, xi_a, theta^a`.
//!
//! Elements are stored in a canonical normal form: a map from normalized
//! monomials to nonzero rational coefficients. Odd generators inside a
//! monomial are kept in the fixed order `xi_1 < ... < xi_d < theta^1 < ... <
//! theta^d`; every reordering performed while multiplying contributes the
//! Koszul sign of the permutation, and a repeated odd generator kills the
//! term. Coefficients are arbitrary-precision rationals; there is no floating
//! point anywhere in this crate.

use crate::error::{Error, Result};
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Exact coefficient type used everywhere.
pub type Rat = BigRational;

/// Convenience constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num.into(), den.into())
}

/// Ambient coordinate ranges: `n` base coordinates x_i (with conjugate p^i)
/// and `d` odd pairs (xi_a, theta^a).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signature {
    pub n: u8,
    pub d: u8,
}

impl Signature {
    pub fn new(n: u8, d: u8) -> Result<Self> {
        if d == 0 {
            return Err(Error::Invalid("signature requires d >= 1".into()));
        }
        if d > 32 {
            return Err(Error::Invalid("signature supports at most d = 32".into()));
        }
        Ok(Signature { n, d })
    }
}

/// One coordinate generator. Indices are 1-based, matching the usual
/// `x_1, p^1, xi_1, theta^1` naming.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    X(u8),
    P(u8),
    Xi(u8),
    Theta(u8),
}

impl Generator {
    pub fn bidegree(self) -> Bidegree {
        match self {
            Generator::X(_) => Bidegree::new(0, 0),
            Generator::Xi(_) => Bidegree::new(0, 1),
            Generator::Theta(_) => Bidegree::new(1, 0),
            Generator::P(_) => Bidegree::new(1, 1),
        }
    }

    pub fn is_odd(self) -> bool {
        matches!(self, Generator::Xi(_) | Generator::Theta(_))
    }

    pub fn in_range(self, sig: Signature) -> bool {
        match self {
            Generator::X(i) | Generator::P(i) => i >= 1 && i <= sig.n,
            Generator::Xi(a) | Generator::Theta(a) => a >= 1 && a <= sig.d,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::X(i) => write!(f, "x{i}"),
            Generator::P(i) => write!(f, "p{i}"),
            Generator::Xi(a) => write!(f, "xi{a}"),
            Generator::Theta(a) => write!(f, "theta{a}"),
        }
    }
}

/// The (N x N)-valued bidegree: x -> (0,0), xi -> (0,1), theta -> (1,0),
/// p -> (1,1). The total degree is k + l.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bidegree {
    pub k: u32,
    pub l: u32,
}

impl Bidegree {
    pub fn new(k: u32, l: u32) -> Self {
        Bidegree { k, l }
    }

    pub fn total(self) -> u32 {
        self.k + self.l
    }

    pub fn plus(self, other: Bidegree) -> Bidegree {
        Bidegree::new(self.k + other.k, self.l + other.l)
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.k, self.l)
    }
}

/// A normalized monomial. Even exponents are kept as sorted `(index, exp)`
/// lists; odd generators as bitmasks (bit a-1 for index a), which makes the
/// canonical ascending order implicit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    xs: Vec<(u8, u32)>,
    ps: Vec<(u8, u32)>,
    xi: u64,
    theta: u64,
}

fn merge_exponents(a: &[(u8, u32)], b: &[(u8, u32)]) -> Vec<(u8, u32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl Monomial {
    pub fn unit() -> Self {
        Monomial::default()
    }

    /// Combined odd mask in canonical rank order: xi_a at rank a-1,
    /// theta^a at rank d-1+a.
    fn odd_mask(&self, d: u8) -> u64 {
        self.xi | (self.theta << d)
    }

    pub fn odd_count(&self) -> u32 {
        self.xi.count_ones() + self.theta.count_ones()
    }

    pub fn parity(&self) -> u32 {
        self.odd_count() & 1
    }

    pub fn bidegree(&self) -> Bidegree {
        let p_total: u32 = self.ps.iter().map(|&(_, e)| e).sum();
        Bidegree::new(
            self.theta.count_ones() + p_total,
            self.xi.count_ones() + p_total,
        )
    }

    pub fn degree(&self) -> u32 {
        self.bidegree().total()
    }

    pub fn has_momentum(&self) -> bool {
        !self.ps.is_empty()
    }

    pub fn x_exponents(&self) -> &[(u8, u32)] {
        &self.xs
    }

    pub fn p_exponents(&self) -> &[(u8, u32)] {
        &self.ps
    }

    pub fn xi_indices(&self) -> impl Iterator<Item = u8> + '_ {
        (1..=64u8).filter(move |a| self.xi & (1u64 << (a - 1)) != 0)
    }

    pub fn theta_indices(&self) -> impl Iterator<Item = u8> + '_ {
        (1..=64u8).filter(move |a| self.theta & (1u64 << (a - 1)) != 0)
    }

    pub fn contains_xi(&self, a: u8) -> bool {
        self.xi & (1u64 << (a - 1)) != 0
    }

    pub fn contains_theta(&self, a: u8) -> bool {
        self.theta & (1u64 << (a - 1)) != 0
    }

    pub fn x_exponent(&self, i: u8) -> u32 {
        self.xs
            .iter()
            .find(|&&(j, _)| j == i)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn p_exponent(&self, i: u8) -> u32 {
        self.ps
            .iter()
            .find(|&&(j, _)| j == i)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    fn from_parts(xs: Vec<(u8, u32)>, ps: Vec<(u8, u32)>, xi: u64, theta: u64) -> Self {
        Monomial { xs, ps, xi, theta }
    }

    /// Graded product. Returns `None` when a repeated odd generator kills the
    /// term; otherwise the merged monomial and the Koszul sign from sorting
    /// the concatenated odd word back into canonical order.
    pub fn mul(&self, other: &Monomial, d: u8) -> Option<(Monomial, i32)> {
        if self.xi & other.xi != 0 || self.theta & other.theta != 0 {
            return None;
        }
        let left = self.odd_mask(d);
        let right = other.odd_mask(d);
        // Inversions between the two (individually sorted) odd words: each
        // generator of `other` must move past every generator of `self` with
        // a strictly larger rank.
        let mut inversions = 0u32;
        let mut rest = right;
        while rest != 0 {
            let r = rest.trailing_zeros();
            inversions += (left >> (r + 1)).count_ones();
            rest &= rest - 1;
        }
        let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
        let m = Monomial::from_parts(
            merge_exponents(&self.xs, &other.xs),
            merge_exponents(&self.ps, &other.ps),
            self.xi | other.xi,
            self.theta | other.theta,
        );
        Some((m, sign))
    }

    /// Multiply by a single generator on the right.
    pub fn mul_generator(&self, g: Generator, d: u8) -> Option<(Monomial, i32)> {
        let single = match g {
            Generator::X(i) => Monomial::from_parts(vec![(i, 1)], vec![], 0, 0),
            Generator::P(i) => Monomial::from_parts(vec![], vec![(i, 1)], 0, 0),
            Generator::Xi(a) => Monomial::from_parts(vec![], vec![], 1u64 << (a - 1), 0),
            Generator::Theta(a) => Monomial::from_parts(vec![], vec![], 0, 1u64 << (a - 1)),
        };
        self.mul(&single, d)
    }

    /// Remove one power of an even generator; the returned factor is the old
    /// exponent. `None` when the generator is absent.
    fn diff_even(&self, g: Generator) -> Option<(Monomial, u32)> {
        let (list, is_x) = match g {
            Generator::X(_) => (&self.xs, true),
            Generator::P(_) => (&self.ps, false),
            _ => unreachable!("diff_even on odd generator"),
        };
        let idx = match g {
            Generator::X(i) | Generator::P(i) => i,
            _ => unreachable!(),
        };
        let pos = list.iter().position(|&(j, _)| j == idx)?;
        let mut list = list.clone();
        let exp = list[pos].1;
        if exp == 1 {
            list.remove(pos);
        } else {
            list[pos].1 = exp - 1;
        }
        let m = if is_x {
            Monomial::from_parts(list, self.ps.clone(), self.xi, self.theta)
        } else {
            Monomial::from_parts(self.xs.clone(), list, self.xi, self.theta)
        };
        Some((m, exp))
    }

    /// Left derivative by an odd generator: move it to the front of the
    /// canonical word (sign = number of odd generators before it) and delete.
    fn diff_odd_left(&self, g: Generator, d: u8) -> Option<(Monomial, i32)> {
        let rank = match g {
            Generator::Xi(a) => {
                if !self.contains_xi(a) {
                    return None;
                }
                (a - 1) as u32
            }
            Generator::Theta(a) => {
                if !self.contains_theta(a) {
                    return None;
                }
                (d - 1 + a) as u32
            }
            _ => unreachable!("diff_odd on even generator"),
        };
        let mask = self.odd_mask(d);
        let before = (mask & ((1u64 << rank) - 1)).count_ones();
        let sign = if before.is_multiple_of(2) { 1 } else { -1 };
        let m = match g {
            Generator::Xi(a) => Monomial::from_parts(
                self.xs.clone(),
                self.ps.clone(),
                self.xi & !(1u64 << (a - 1)),
                self.theta,
            ),
            Generator::Theta(a) => Monomial::from_parts(
                self.xs.clone(),
                self.ps.clone(),
                self.xi,
                self.theta & !(1u64 << (a - 1)),
            ),
            _ => unreachable!(),
        };
        Some((m, sign))
    }

    /// Right derivative by an odd generator: move it to the end of the word.
    fn diff_odd_right(&self, g: Generator, d: u8) -> Option<(Monomial, i32)> {
        let (m, left_sign) = self.diff_odd_left(g, d)?;
        // sign difference between moving to front and to back is the parity
        // of the remaining odd word
        let adjust = if m.odd_count() % 2 == 0 { 1 } else { -1 };
        Some((m, left_sign * adjust))
    }

    fn render(&self, coeff: &Rat, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for &(i, e) in &self.xs {
            parts.push(if e == 1 {
                format!("x{i}")
            } else {
                format!("x{i}^{e}")
            });
        }
        for &(i, e) in &self.ps {
            parts.push(if e == 1 {
                format!("p{i}")
            } else {
                format!("p{i}^{e}")
            });
        }
        for a in self.xi_indices() {
            parts.push(format!("xi{a}"));
        }
        for a in self.theta_indices() {
            parts.push(format!("theta{a}"));
        }
        if parts.is_empty() {
            return write!(f, "{}", format_rat(coeff));
        }
        if coeff.is_one() {
            write!(f, "{}", parts.join("*"))
        } else if (-coeff.clone()).is_one() {
            write!(f, "-{}", parts.join("*"))
        } else {
            write!(f, "{}*{}", format_rat(coeff), parts.join("*"))
        }
    }
}

/// Canonical `p/q` rendering; integers print without the denominator.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// An element of the function algebra: exact-rational linear combination of
/// normalized monomials. Two values are equal iff their term maps are equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperPolynomial {
    sig: Signature,
    terms: BTreeMap<Monomial, Rat>,
}

impl SuperPolynomial {
    pub fn zero(sig: Signature) -> Self {
        SuperPolynomial {
            sig,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(sig: Signature, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::unit(), c);
        }
        SuperPolynomial { sig, terms }
    }

    pub fn generator(sig: Signature, g: Generator) -> Result<Self> {
        if !g.in_range(sig) {
            return Err(Error::IndexOutOfRange {
                gen: g.to_string(),
                sig,
            });
        }
        let (m, s) = Monomial::unit().mul_generator(g, sig.d).expect("fresh generator");
        debug_assert_eq!(s, 1);
        let mut terms = BTreeMap::new();
        terms.insert(m, Rat::one());
        Ok(SuperPolynomial { sig, terms })
    }

    /// Canonicalize a raw term list. Odd reorderings pick up the permutation
    /// sign; a repeated odd generator kills its term.
    pub fn normalize(sig: Signature, raw: &[(Vec<Generator>, Rat)]) -> Result<Self> {
        let mut acc = SuperPolynomial::zero(sig);
        for (word, coeff) in raw {
            let mut m = Monomial::unit();
            let mut sign = 1i32;
            let mut dead = false;
            for &g in word {
                if !g.in_range(sig) {
                    return Err(Error::IndexOutOfRange {
                        gen: g.to_string(),
                        sig,
                    });
                }
                match m.mul_generator(g, sig.d) {
                    Some((next, s)) => {
                        m = next;
                        sign *= s;
                    }
                    None => {
                        dead = true;
                        break;
                    }
                }
            }
            if !dead {
                let c = coeff * Rat::from_integer(sign.into());
                acc.add_term(m, c);
            }
        }
        Ok(acc)
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn check_signature(&self, other: &SuperPolynomial) -> Result<()> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch(self.sig, other.sig));
        }
        Ok(())
    }

    pub fn add(&self, other: &SuperPolynomial) -> Result<SuperPolynomial> {
        self.check_signature(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SuperPolynomial) -> Result<SuperPolynomial> {
        self.check_signature(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> SuperPolynomial {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), -c.clone()))
            .collect();
        SuperPolynomial {
            sig: self.sig,
            terms,
        }
    }

    pub fn scale(&self, c: &Rat) -> SuperPolynomial {
        if c.is_zero() {
            return SuperPolynomial::zero(self.sig);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, k)| (m.clone(), k * c))
            .collect();
        SuperPolynomial {
            sig: self.sig,
            terms,
        }
    }

    /// Graded commutative product.
    pub fn mul(&self, other: &SuperPolynomial) -> Result<SuperPolynomial> {
        self.check_signature(other)?;
        let mut out = SuperPolynomial::zero(self.sig);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some((m, sign)) = m1.mul(m2, self.sig.d) {
                    out.add_term(m, c1 * c2 * Rat::from_integer(sign.into()));
                }
            }
        }
        Ok(out)
    }

    /// Sum of the terms of exactly bidegree (k,l).
    pub fn bidegree_project(&self, bd: Bidegree) -> SuperPolynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.bidegree() == bd)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        SuperPolynomial {
            sig: self.sig,
            terms,
        }
    }

    /// Sum of the terms of exactly total degree t.
    pub fn degree_project(&self, t: u32) -> SuperPolynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() == t)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        SuperPolynomial {
            sig: self.sig,
            terms,
        }
    }

    /// Distinct bidegrees present, in canonical order.
    pub fn bidegrees(&self) -> Vec<Bidegree> {
        let mut out: Vec<Bidegree> = Vec::new();
        for m in self.terms.keys() {
            let bd = m.bidegree();
            if !out.contains(&bd) {
                out.push(bd);
            }
        }
        out.sort();
        out
    }

    /// Total degree when homogeneous; `None` for 0 or mixed elements.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut deg = None;
        for m in self.terms.keys() {
            match deg {
                None => deg = Some(m.degree()),
                Some(t) if t == m.degree() => {}
                Some(_) => return None,
            }
        }
        deg
    }

    /// Parity when all terms agree mod 2; zero is reported as even.
    pub fn parity(&self) -> Option<u32> {
        let mut par = None;
        for m in self.terms.keys() {
            match par {
                None => par = Some(m.parity()),
                Some(p) if p == m.parity() => {}
                Some(_) => return None,
            }
        }
        Some(par.unwrap_or(0))
    }

    pub fn expect_degree(&self, t: u32) -> Result<()> {
        for m in self.terms.keys() {
            if m.degree() != t {
                return Err(Error::WrongDegree {
                    expected: t,
                    found: self.to_string(),
                });
            }
        }
        Ok(())
    }

    pub fn has_momentum(&self) -> bool {
        self.terms.keys().any(|m| m.has_momentum())
    }

    /// Solve `self = c * other` for a rational constant. By convention
    /// `0 = c * 0` reports c = 0.
    pub fn proportionality(&self, other: &SuperPolynomial) -> Option<Rat> {
        if self.is_zero() {
            return Some(Rat::zero());
        }
        if other.is_zero() {
            return None;
        }
        let (m, c_other) = other.terms.iter().next().expect("nonzero");
        let c_self = self.coefficient(m);
        let candidate = c_self / c_other;
        if self == &other.scale(&candidate) {
            Some(candidate)
        } else {
            None
        }
    }
}

impl fmt::Display for SuperPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            m.render(c, f)?;
        }
        Ok(())
    }
}

/// Left partial derivative. For even generators this is the ordinary partial;
/// for odd generators the generator is moved to the front of each monomial
/// (collecting the Koszul sign) and deleted.
pub fn left_partial(f: &SuperPolynomial, g: Generator) -> SuperPolynomial {
    let mut out = SuperPolynomial::zero(f.signature());
    let d = f.signature().d;
    for (m, c) in f.terms() {
        match g {
            Generator::X(_) | Generator::P(_) => {
                if let Some((m2, exp)) = m.diff_even(g) {
                    out.add_term(m2, c * Rat::from_integer(exp.into()));
                }
            }
            Generator::Xi(_) | Generator::Theta(_) => {
                if let Some((m2, sign)) = m.diff_odd_left(g, d) {
                    out.add_term(m2, c * Rat::from_integer(sign.into()));
                }
            }
        }
    }
    out
}

/// Right partial derivative (odd generators moved to the back instead).
pub fn right_partial(f: &SuperPolynomial, g: Generator) -> SuperPolynomial {
    let mut out = SuperPolynomial::zero(f.signature());
    let d = f.signature().d;
    for (m, c) in f.terms() {
        match g {
            Generator::X(_) | Generator::P(_) => {
                if let Some((m2, exp)) = m.diff_even(g) {
                    out.add_term(m2, c * Rat::from_integer(exp.into()));
                }
            }
            Generator::Xi(_) | Generator::Theta(_) => {
                if let Some((m2, sign)) = m.diff_odd_right(g, d) {
                    out.add_term(m2, c * Rat::from_integer(sign.into()));
                }
            }
        }
    }
    out
}
