//! Shared fixtures for the integration tests and the acceptance harness:
//! the algebra corpus, seeded generators and a brute-force relation oracle.
#![allow(dead_code)]

use std::collections::BTreeMap;

use dcsa_core::linalg::{rank, Subspace};
use dcsa_core::ratfield::partial_fractions;
use dcsa_core::{Dcsa, Matrix, Poly, RatFunc, Q};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 0x5eed_0d5a;

/// `DCSA_SEED` if set, otherwise the pinned default.
pub fn seed() -> u64 {
    std::env::var("DCSA_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_SEED)
}

pub fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed());
    r.set_stream(stream);
    r
}

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

pub fn rf(s: &str) -> RatFunc {
    s.parse().unwrap_or_else(|e| panic!("{s}: {e}"))
}

pub fn mat(rows: &[&[&str]]) -> Matrix<RatFunc> {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|s| rf(s)).collect()).collect()).unwrap()
}

pub fn alg(rows: &[&[&str]]) -> Dcsa {
    Dcsa::new(mat(rows)).unwrap()
}

pub fn quarter_powers() -> Dcsa {
    alg(&[&["1/(4*x)", "0"], &["0", "-1/(4*x)"]])
}

pub fn jordan() -> Dcsa {
    alg(&[&["0", "1/x"], &["0", "0"]])
}

/// Ten algebras in the supported class: seven diagonal, three triangular.
pub fn corpus() -> Vec<(&'static str, Dcsa)> {
    vec![
        ("quarter-powers", quarter_powers()),
        ("zero-2", alg(&[&["0", "0"], &["0", "0"]])),
        ("pole-and-poly", alg(&[&["1/x", "0"], &["0", "x"]])),
        ("two-poles", alg(&[&["1/(2*x)", "0"], &["0", "1/(3*(x-1))"]])),
        ("exp-and-root", alg(&[&["1", "0", "0"], &["0", "1/(2*x)", "0"], &["0", "0", "0"]])),
        ("irregular", alg(&[&["2*x", "0"], &["0", "-1/x^2"]])),
        ("integer-residues", alg(&[&["2/x", "0", "0"], &["0", "-1/(x+1)", "0"], &["0", "0", "1/(x*(x+1))"]])),
        ("nilpotent-poly", alg(&[&["0", "1"], &["0", "0"]])),
        ("nilpotent-pole", jordan()),
        ("triangular-twisted", alg(&[&["1/(2*x)", "x"], &["0", "-1/(2*x)"]])),
    ]
}

pub fn small_q(r: &mut impl Rng, num: i64, den: i64) -> Q {
    q(r.gen_range(-num..=num), r.gen_range(1..=den))
}

/// `c/(x-a)^k` terms with rational a plus a low-degree polynomial.
pub fn random_split(r: &mut impl Rng, max_terms: usize) -> RatFunc {
    let mut f = RatFunc::zero();
    for _ in 0..r.gen_range(0..=max_terms) {
        let at = q(r.gen_range(-2..=2), r.gen_range(1..=2));
        let k = r.gen_range(1..=2);
        f = f + RatFunc::linear_power(&at, -k).scale(&small_q(r, 3, 4));
    }
    if r.gen_bool(0.3) {
        f = f + RatFunc::from_poly(Poly::new(vec![small_q(r, 2, 2), small_q(r, 2, 2)]));
    }
    f
}

/// Simple poles at integer points with small rational residues.
pub fn random_log_type(r: &mut impl Rng) -> RatFunc {
    let mut f = RatFunc::zero();
    for _ in 0..r.gen_range(1..=2) {
        let at = q(r.gen_range(-2..=2), 1);
        f = f + RatFunc::linear_power(&at, -1).scale(&small_q(r, 3, 4));
    }
    f
}

pub fn random_q_matrix(r: &mut impl Rng, n: usize) -> Matrix<Q> {
    Matrix::from_fn(n, n, |_, _| q(r.gen_range(-3..=3), 1))
}

pub fn random_invertible_q(r: &mut impl Rng, n: usize) -> Matrix<Q> {
    loop {
        let m = random_q_matrix(r, n);
        if !m.determinant().is_zero() {
            return m;
        }
    }
}

pub fn random_subspace(r: &mut impl Rng, n: usize) -> Subspace<Q> {
    let k = r.gen_range(0..=n);
    let vs = (0..k).map(|_| (0..n).map(|_| q(r.gen_range(-2..=2), 1)).collect()).collect();
    Subspace::span(n, vs)
}

/// Entries `c0 + c1 x` with a nonzero determinant.
pub fn random_gauge(r: &mut impl Rng, n: usize) -> Matrix<RatFunc> {
    loop {
        let m = Matrix::from_fn(n, n, |_, _| {
            RatFunc::from_poly(Poly::new(vec![q(r.gen_range(-2..=2), 1), q(r.gen_range(-1..=1), 1)]))
        });
        if !m.determinant().is_zero() {
            return m;
        }
    }
}

/// Linear conditions for `Σ mᵢ aᵢ` to be a logarithmic derivative of a
/// rational function: these forms must vanish, those must be integral.
struct Conditions {
    zero: Vec<Vec<Q>>,
    integral: Vec<Vec<Q>>,
}

fn conditions(a: &[RatFunc]) -> Conditions {
    let k = a.len();
    let mut zero: BTreeMap<(String, u32), Vec<Q>> = BTreeMap::new();
    let mut integral: BTreeMap<String, Vec<Q>> = BTreeMap::new();
    for (i, f) in a.iter().enumerate() {
        let pf = partial_fractions(f).unwrap();
        for (d, c) in pf.polynomial.coeffs().iter().enumerate() {
            zero.entry((format!("poly{d}"), 0)).or_insert_with(|| vec![Q::zero(); k])[i] = c.clone();
        }
        for t in &pf.poles {
            if t.order == 1 {
                integral.entry(t.at.to_string()).or_insert_with(|| vec![Q::zero(); k])[i] = t.coeff.clone();
            } else {
                zero.entry((t.at.to_string(), t.order)).or_insert_with(|| vec![Q::zero(); k])[i] = t.coeff.clone();
            }
        }
    }
    Conditions { zero: zero.into_values().collect(), integral: integral.into_values().collect() }
}

fn dot(form: &[Q], m: &[i64]) -> Q {
    form.iter().zip(m).fold(Q::zero(), |acc, (c, &v)| acc + c * Q::from_integer(v.into()))
}

/// Every `m ∈ [-bound, bound]^k` with `Σ mᵢ aᵢ = δf/f` for some rational f.
pub fn brute_relations(a: &[RatFunc], bound: i64) -> Vec<Vec<i64>> {
    let c = conditions(a);
    let k = a.len();
    let mut out = Vec::new();
    let mut m = vec![-bound; k];
    loop {
        if c.zero.iter().all(|f| dot(f, &m).is_zero()) && c.integral.iter().all(|f| dot(f, &m).is_integer()) {
            out.push(m.clone());
        }
        let mut i = 0;
        while i < k && m[i] == bound {
            m[i] = -bound;
            i += 1;
        }
        if i == k {
            return out;
        }
        m[i] += 1;
    }
}

fn det_i128(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> =
                    m[1..].iter().map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, v)| *v).collect()).collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det_i128(&minor)
            })
            .sum(),
    }
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return vec![Vec::new()];
    }
    if n < r {
        return Vec::new();
    }
    let mut out = combinations(n - 1, r);
    for mut c in combinations(n - 1, r - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// Torus rank and torsion order of `Z^k / L` from a list of relations,
/// through the rank and the gcd of maximal minors of the shortest ones.
pub fn group_from_relations(k: usize, relations: &[Vec<i64>]) -> (usize, u64) {
    let mut short: Vec<&Vec<i64>> = relations.iter().filter(|v| v.iter().any(|&x| x != 0)).collect();
    short.sort_by_key(|v| (v.iter().map(|x| x.abs()).sum::<i64>(), (*v).clone()));
    short.truncate(20);
    let rows: Vec<Vec<Q>> = relations.iter().map(|v| v.iter().map(|&x| Q::from_integer(x.into())).collect()).collect();
    let r = rank(rows, k);
    let mut g = BigInt::zero();
    for rs in combinations(short.len(), r) {
        for cs in combinations(k, r) {
            let m: Vec<Vec<i128>> = rs.iter().map(|&i| cs.iter().map(|&j| short[i][j] as i128).collect()).collect();
            g = g.gcd(&BigInt::from(det_i128(&m)));
        }
    }
    if r == 0 {
        g = BigInt::one();
    }
    (k - r, g.abs().try_into().expect("torsion order fits in u64"))
}

/// Distinct nonzero entries up to sign; generates the same group.
pub fn reduced_generators(a: &[RatFunc]) -> Vec<RatFunc> {
    let mut out: Vec<RatFunc> = Vec::new();
    for f in a {
        if !f.is_zero() && !out.contains(f) && !out.contains(&-f.clone()) {
            out.push(f.clone());
        }
    }
    out
}

pub fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| x.into()).collect()
}
