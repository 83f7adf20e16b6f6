//! Shared helpers for the integration suites: seeded random elements and
//! independent oracles.

#![allow(dead_code)]

use bigbracket::catalog::{i_n, j_omega, j_pi, lie_algebra_theta};
use bigbracket::{rat, Generator, PreCourant, Rat, Signature, SuperPolynomial, TensorFunction};
use rand::rngs::StdRng;
use rand::Rng;

pub fn sig(n: u8, d: u8) -> Signature {
    Signature::new(n, d).unwrap()
}

pub fn poly(s: Signature, terms: &[(&[Generator], Rat)]) -> SuperPolynomial {
    let raw: Vec<(Vec<Generator>, Rat)> =
        terms.iter().map(|(w, c)| (w.to_vec(), c.clone())).collect();
    SuperPolynomial::normalize(s, &raw).unwrap()
}

pub fn small_rat(rng: &mut StdRng) -> Rat {
    let num = rng.gen_range(-4i64..=4);
    let den = *[1i64, 2, 3].get(rng.gen_range(0..3)).unwrap();
    rat(num, den)
}

pub fn nonzero_small_rat(rng: &mut StdRng) -> Rat {
    loop {
        let r = small_rat(rng);
        if r != rat(0, 1) {
            return r;
        }
    }
}

/// A random monomial of exact total degree `t` (bounded x-exponents).
pub fn random_monomial(rng: &mut StdRng, s: Signature, t: u32) -> Option<(Vec<Generator>, Rat)> {
    let max_p = t / 2;
    let p_count = if s.n == 0 { 0 } else { rng.gen_range(0..=max_p) };
    let odd_count = t - 2 * p_count;
    if odd_count > 2 * s.d as u32 {
        return None;
    }
    let mut word = Vec::new();
    for _ in 0..p_count {
        word.push(Generator::P(rng.gen_range(1..=s.n)));
    }
    // distinct odd generators
    let mut odds: Vec<Generator> = (1..=s.d)
        .map(Generator::Xi)
        .chain((1..=s.d).map(Generator::Theta))
        .collect();
    for _ in 0..odd_count {
        let idx = rng.gen_range(0..odds.len());
        word.push(odds.swap_remove(idx));
    }
    if s.n > 0 {
        for _ in 0..rng.gen_range(0..=2u32) {
            word.push(Generator::X(rng.gen_range(1..=s.n)));
        }
    }
    Some((word, nonzero_small_rat(rng)))
}

/// A random homogeneous element of total degree `t` (possibly zero).
pub fn random_homogeneous(rng: &mut StdRng, s: Signature, t: u32) -> SuperPolynomial {
    let mut raw = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        if let Some(term) = random_monomial(rng, s, t) {
            raw.push(term);
        }
    }
    let raw: Vec<(Vec<Generator>, Rat)> = raw;
    SuperPolynomial::normalize(s, &raw).unwrap()
}

/// Random bivector coefficients over d.
pub fn random_pi(rng: &mut StdRng, s: Signature) -> TensorFunction {
    let mut coeffs = Vec::new();
    for a in 1..=s.d {
        for b in (a + 1)..=s.d {
            if rng.gen_bool(0.6) {
                coeffs.push((a, b, small_rat(rng)));
            }
        }
    }
    j_pi(s, &coeffs).unwrap()
}

pub fn random_omega(rng: &mut StdRng, s: Signature) -> TensorFunction {
    let mut coeffs = Vec::new();
    for a in 1..=s.d {
        for b in (a + 1)..=s.d {
            if rng.gen_bool(0.6) {
                coeffs.push((a, b, small_rat(rng)));
            }
        }
    }
    j_omega(s, &coeffs).unwrap()
}

/// Random constant N as a d x d integer matrix.
pub fn random_n_matrix(rng: &mut StdRng, d: usize) -> Vec<Vec<i64>> {
    (0..d)
        .map(|_| (0..d).map(|_| rng.gen_range(-2i64..=2)).collect())
        .collect()
}

pub fn n_tensor_from(s: Signature, m: &[Vec<i64>]) -> TensorFunction {
    let d = s.d as usize;
    let entries: Vec<SuperPolynomial> = (0..d)
        .flat_map(|i| {
            (0..d).map({
                let row = m[i].clone();
                move |j| SuperPolynomial::constant(s, rat(row[j], 1))
            })
        })
        .collect();
    i_n(s, &entries).unwrap()
}

/// Integer matrix product.
pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// A random unimodular integer matrix (product of elementary shears).
pub fn random_unimodular(rng: &mut StdRng, d: usize) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let mut s = identity_mat(d);
    let mut s_inv = identity_mat(d);
    for _ in 0..4 {
        let i = rng.gen_range(0..d);
        let mut j = rng.gen_range(0..d);
        if d > 1 {
            while j == i {
                j = rng.gen_range(0..d);
            }
        } else {
            continue;
        }
        let c = rng.gen_range(-2i64..=2);
        // S <- E S where E = id + c e_{ij}; S^{-1} <- S^{-1} E^{-1}
        let shear: Vec<i64> = (0..d).map(|k| c * s[j][k]).collect();
        for (k, v) in shear.into_iter().enumerate() {
            s[i][k] += v;
        }
        for row in s_inv.iter_mut() {
            let v = row[i];
            row[j] -= c * v;
        }
    }
    (s, s_inv)
}

pub fn identity_mat(d: usize) -> Vec<Vec<i64>> {
    (0..d)
        .map(|i| (0..d).map(|j| i64::from(i == j)).collect())
        .collect()
}

/// N-type core with `N^2 = alpha id`, conjugated by a random unimodular
/// matrix so the instances stay integral.
pub fn involute_conjugated(rng: &mut StdRng, d: usize, alpha: i64) -> Vec<Vec<i64>> {
    let (s, s_inv) = random_unimodular(rng, d);
    let mut core = vec![vec![0i64; d]; d];
    match alpha {
        1 => {
            for (i, row) in core.iter_mut().enumerate() {
                row[i] = if rng.gen_bool(0.5) { 1 } else { -1 };
            }
        }
        -1 => {
            assert!(d.is_multiple_of(2));
            for b in 0..d / 2 {
                core[2 * b][2 * b + 1] = -1;
                core[2 * b + 1][2 * b] = 1;
            }
        }
        0 => {
            for b in 0..d / 2 {
                if rng.gen_bool(0.7) {
                    core[2 * b][2 * b + 1] = 1;
                }
            }
        }
        _ => panic!("unsupported alpha"),
    }
    mat_mul(&mat_mul(&s, &core), &s_inv)
}

/// Structure-constant table for the test algebras: `c[a][b][c]` over basis
/// indices 0-based, antisymmetric in (a,b).
pub struct TestAlgebra {
    pub name: &'static str,
    pub d: u8,
    pub constants: Vec<(u8, u8, u8, i64)>,
}

pub fn test_algebras() -> Vec<TestAlgebra> {
    vec![
        TestAlgebra {
            name: "abelian-3",
            d: 3,
            constants: vec![],
        },
        TestAlgebra {
            name: "heisenberg",
            d: 3,
            constants: vec![(1, 2, 3, 1)],
        },
        TestAlgebra {
            name: "so3",
            d: 3,
            constants: vec![(1, 2, 3, 1), (2, 3, 1, 1), (3, 1, 2, 1)],
        },
        TestAlgebra {
            name: "aff1-r",
            d: 3,
            constants: vec![(1, 2, 2, 1)],
        },
        TestAlgebra {
            name: "h3-r",
            d: 4,
            constants: vec![(1, 2, 3, 1)],
        },
    ]
}

impl TestAlgebra {
    pub fn theta(&self) -> PreCourant {
        let s = sig(0, self.d);
        let consts: Vec<(u8, u8, u8, Rat)> = self
            .constants
            .iter()
            .map(|&(a, b, c, v)| (a, b, c, rat(v, 1)))
            .collect();
        lie_algebra_theta(s, &consts).unwrap()
    }

    pub fn signature(&self) -> Signature {
        sig(0, self.d)
    }

    /// Bracket of basis vectors by table lookup: `[e_a, e_b]` as a
    /// coefficient vector. Independent of the engine.
    pub fn bracket_basis(&self, a: u8, b: u8) -> Vec<i64> {
        let mut out = vec![0i64; self.d as usize];
        for &(x, y, z, v) in &self.constants {
            if x == a && y == b {
                out[z as usize - 1] += v;
            }
            if x == b && y == a {
                out[z as usize - 1] -= v;
            }
        }
        out
    }

    /// Bracket of coefficient vectors.
    pub fn bracket_vec(&self, u: &[i64], v: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; self.d as usize];
        for a in 1..=self.d {
            for b in 1..=self.d {
                let coeff = u[a as usize - 1] * v[b as usize - 1];
                if coeff != 0 {
                    for (z, w) in self.bracket_basis(a, b).iter().enumerate() {
                        out[z] += coeff * w;
                    }
                }
            }
        }
        out
    }

    /// Classical Nijenhuis torsion of a constant N on this algebra,
    /// computed purely from the structure-constant table:
    /// `T_N(e_a, e_b) = [Ne_a, Ne_b] - N[Ne_a, e_b] - N[e_a, Ne_b] + N^2 [e_a, e_b]`.
    pub fn n_torsion_vanishes(&self, n: &[Vec<i64>]) -> bool {
        let d = self.d as usize;
        let apply = |m: &[Vec<i64>], v: &[i64]| -> Vec<i64> {
            (0..d)
                .map(|i| (0..d).map(|j| m[i][j] * v[j]).sum())
                .collect()
        };
        let n2 = mat_mul(n, n);
        for a in 0..d {
            for b in 0..d {
                let ea: Vec<i64> = (0..d).map(|i| i64::from(i == a)).collect();
                let eb: Vec<i64> = (0..d).map(|i| i64::from(i == b)).collect();
                let na = apply(n, &ea);
                let nb = apply(n, &eb);
                let t1 = self.bracket_vec(&na, &nb);
                let t2 = apply(n, &self.bracket_vec(&na, &eb));
                let t3 = apply(n, &self.bracket_vec(&ea, &nb));
                let t4 = apply(&n2, &self.bracket_vec(&ea, &eb));
                for i in 0..d {
                    if t1[i] - t2[i] - t3[i] + t4[i] != 0 {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Jacobi identity from the table alone (independent oracle).
    pub fn satisfies_jacobi(&self) -> bool {
        let d = self.d as usize;
        for a in 1..=self.d {
            for b in 1..=self.d {
                for c in 1..=self.d {
                    let ea: Vec<i64> = (0..d).map(|i| i64::from(i == (a - 1) as usize)).collect();
                    let eb: Vec<i64> = (0..d).map(|i| i64::from(i == (b - 1) as usize)).collect();
                    let ec: Vec<i64> = (0..d).map(|i| i64::from(i == (c - 1) as usize)).collect();
                    let abc = self.bracket_vec(&self.bracket_vec(&ea, &eb), &ec);
                    let bca = self.bracket_vec(&self.bracket_vec(&eb, &ec), &ea);
                    let cab = self.bracket_vec(&self.bracket_vec(&ec, &ea), &eb);
                    for i in 0..d {
                        if abc[i] + bca[i] + cab[i] != 0 {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}
