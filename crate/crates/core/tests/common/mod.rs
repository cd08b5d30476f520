//! Independent reference computations used by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use extremal::algebra::StructureTable;
use extremal::linalg::Matrix;
use extremal::modules::WeightModule;
use extremal::rational::{factorial, q, Q};
use extremal::rootsys::RootSystem;
use extremal::Error;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// An oracle value with the inputs it was computed from.
#[derive(Debug, Clone)]
pub struct OracleResult<T> {
    pub oracle: &'static str,
    pub inputs: String,
    pub expected: T,
    pub provenance: &'static str,
}

/// Every permutation of the reduced positive roots in which each sum of two
/// roots lies strictly between its summands, in lexicographic order.
pub fn oracle_permutation_orderings(rs: &RootSystem) -> Result<OracleResult<Vec<Vec<usize>>>, Error> {
    if rs.reduced.len() > 8 {
        return Err(Error::TooLarge(format!("{} reduced roots for the permutation oracle", rs.reduced.len())));
    }
    Ok(OracleResult {
        oracle: "permutation orderings",
        inputs: rs.spec.to_string(),
        expected: permutation_orderings(rs),
        provenance: "all permutations filtered by the convexity predicate on root sums",
    })
}

pub fn permutation_orderings(rs: &RootSystem) -> Vec<Vec<usize>> {
    let roots: Vec<Vec<i64>> = rs.reduced.iter().map(|r| r.coords.clone()).collect();
    let n = roots.len();
    let mut sums = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let s: Vec<i64> = roots[a].iter().zip(&roots[b]).map(|(x, y)| x + y).collect();
            if let Some(c) = roots.iter().position(|r| *r == s) {
                sums.push((a, b, c));
            }
        }
    }
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let mut pos = vec![0; n];
        for (p, r) in perm.iter().enumerate() {
            pos[*r] = p;
        }
        if sums
            .iter()
            .all(|&(a, b, c)| pos[a].min(pos[b]) < pos[c] && pos[c] < pos[a].max(pos[b]))
        {
            out.push(perm.clone());
        }
        if !next_permutation(&mut perm) {
            return out;
        }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn fact(n: i64) -> Q {
    assert!(n >= 0);
    Q::from_integer(factorial(n as u64))
}

/// `⟨j1 m1; j2 m2 | j m⟩` from Racah's closed formula as `(sign, square)`.
/// All arguments are doubled.
pub fn racah_cg(tj1: i64, tj2: i64, tj: i64, tm1: i64, tm2: i64) -> (i8, Q) {
    let tm = tm1 + tm2;
    let h = |x: i64| {
        assert!(x % 2 == 0, "half-integer factorial argument");
        x / 2
    };
    let pre = Q::from_integer(BigInt::from(tj + 1))
        * fact(h(tj1 + tj2 - tj))
        * fact(h(tj1 - tj2 + tj))
        * fact(h(-tj1 + tj2 + tj))
        / fact(h(tj1 + tj2 + tj) + 1)
        * fact(h(tj + tm))
        * fact(h(tj - tm))
        * fact(h(tj1 - tm1))
        * fact(h(tj1 + tm1))
        * fact(h(tj2 - tm2))
        * fact(h(tj2 + tm2));
    let mut sum = Q::zero();
    for k in 0.. {
        let args = [
            k,
            h(tj1 + tj2 - tj) - k,
            h(tj1 - tm1) - k,
            h(tj2 + tm2) - k,
            h(tj - tj2 + tm1) + k,
            h(tj - tj1 - tm2) + k,
        ];
        if args[1] < 0 || args[2] < 0 || args[3] < 0 {
            break;
        }
        if args.iter().any(|a| *a < 0) {
            continue;
        }
        let den = args.iter().fold(Q::one(), |acc, a| acc * fact(*a));
        let term = den.recip();
        sum = if k % 2 == 0 { sum + term } else { sum - term };
    }
    let sign = if sum.is_negative() { -1 } else { 1 };
    (sign, &pre * &sum * &sum)
}

/// One row of a Clebsch–Gordan table: doubled `m1`, `m2`, sign and square.
pub type CgRow = (i64, i64, i8, Q);

/// `⟨j1 m1; j2 m−m1 | j m⟩` for every `m` by the three-term recursion in `m1`
/// from the eigenvalue equation of `J²`, with arguments doubled.
///
/// With `C(m1) = D(m1)·√W(m1)` and
/// `W(m1) = (j1+m1)!(j2−m2)! / ((j1−m1)!(j2+m2)!)` the recursion
/// `λ C(m1) = a(m1) C(m1−1) + a(m1+1) C(m1+1)` becomes
/// `λ D(m1) = D(m1−1) + a(m1+1)² D(m1+1)`, which is rational. The entry with
/// the largest `m1` is positive.
pub fn oracle_cg_recursion(tj1: i64, tj2: i64, tj: i64) -> Result<OracleResult<Vec<CgRow>>, Error> {
    if tj > tj1 + tj2 || tj < (tj1 - tj2).abs() || (tj1 + tj2 + tj) % 2 == 1 {
        return Err(Error::InvalidTriangle(tj1.to_string(), tj2.to_string(), tj.to_string()));
    }
    let half = |x: i64| Q::new(x.into(), 2.into());
    let casimir = |t: i64| half(t) * (half(t) + q(1));
    let mut rows = Vec::new();
    for tm in (-tj..=tj).rev().step_by(2) {
        let lo = (-tj1).max(tm - tj2);
        let hi = tj1.min(tm + tj2);
        let m1s: Vec<i64> = (lo..=hi).step_by(2).collect();
        let a2 = |tm1: i64| {
            let (m1, m2) = (half(tm1), half(tm - tm1));
            let (j1, j2) = (half(tj1), half(tj2));
            (&j1 - &m1 + q(1)) * (&j1 + &m1) * (&j2 + &m2 + q(1)) * (&j2 - &m2)
        };
        let mut d: Vec<Q> = vec![q(1)];
        for (k, &tm1) in m1s.iter().enumerate().take(m1s.len() - 1) {
            let lambda = casimir(tj) - casimir(tj1) - casimir(tj2) - q(2) * half(tm1) * half(tm - tm1);
            let prev = if k == 0 { Q::zero() } else { d[k - 1].clone() };
            d.push((lambda * &d[k] - prev) / a2(tm1 + 2));
        }
        let w = |tm1: i64| {
            let tm2 = tm - tm1;
            fact((tj1 + tm1) / 2) * fact((tj2 - tm2) / 2) / (fact((tj1 - tm1) / 2) * fact((tj2 + tm2) / 2))
        };
        let total: Q = m1s.iter().zip(&d).map(|(m1, x)| x * x * w(*m1)).sum();
        let top_negative = d.last().unwrap().is_negative();
        for (&tm1, x) in m1s.iter().zip(&d) {
            if x.is_zero() {
                continue;
            }
            let sign = if x.is_negative() != top_negative { -1 } else { 1 };
            rows.push((tm1, tm - tm1, sign, x * x * w(tm1) / &total));
        }
    }
    Ok(OracleResult {
        oracle: "Clebsch-Gordan recursion",
        inputs: format!("2j1={tj1} 2j2={tj2} 2j={tj}"),
        expected: rows,
        provenance: "three-term recursion in m1 from the J² eigenvalue equation",
    })
}

/// Writes a nonnegative integer as `r²·s` with `s` squarefree.
fn square_split(mut n: BigInt) -> (BigInt, BigInt) {
    let mut r = BigInt::one();
    let mut s = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        let mut e = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        for _ in 0..e / 2 {
            r *= &p;
        }
        if e % 2 == 1 {
            s *= &p;
        }
        p += 1;
    }
    (r, s * n)
}

/// Whether `Σ sign_i·√(x_i)` vanishes, using that square roots of distinct
/// squarefree integers are linearly independent over the rationals.
pub fn signed_root_sum_is_zero(terms: &[(i8, Q)]) -> bool {
    let mut groups: BTreeMap<BigInt, Q> = BTreeMap::new();
    for (sign, x) in terms {
        assert!(!x.is_negative());
        if x.is_zero() {
            continue;
        }
        let (r, s) = square_split(x.numer() * x.denom());
        let v = Q::new(r, x.denom().clone());
        let v = if *sign < 0 { -v } else { v };
        *groups.entry(s).or_insert_with(Q::zero) += v;
    }
    groups.values().all(|v| v.is_zero())
}

pub fn oracle_module_bracket_check(m: &WeightModule, t: &StructureTable) -> OracleResult<bool> {
    OracleResult {
        oracle: "module bracket check",
        inputs: format!("{} module of dimension {}", t.system.spec, m.dim()),
        expected: module_brackets_hold(m, t),
        provenance: "every bracket of the table recomputed as a matrix identity",
    }
}

/// Checks `[M(x), M(y)} = Σ c_z M(z)` for every pair of basis symbols.
pub fn module_brackets_hold(m: &WeightModule, t: &StructureTable) -> bool {
    let syms = t.symbols();
    let act: Vec<Matrix> = syms.iter().map(|s| m.symbol_action(t, *s)).collect();
    for (i, x) in syms.iter().enumerate() {
        for (j, y) in syms.iter().enumerate() {
            let xy = &act[i] * &act[j];
            let yx = &act[j] * &act[i];
            let lhs = if t.parity(*x) * t.parity(*y) == 1 { &xy + &yx } else { &xy - &yx };
            let mut rhs = Matrix::zeros(m.dim(), m.dim());
            for (z, c) in t.bracket(*x, *y).unwrap() {
                let k = syms.iter().position(|s| s == z).unwrap();
                rhs = &rhs + &act[k].scale(c);
            }
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// Coefficient of `f^n e^n` in the su(2) projector at Cartan value `mu`,
/// from `P f^k v = 0` on a Verma module with highest weight `mu + 2k`.
///
/// `e f^k v = k(λ−k+1) f^{k−1} v`, so `f^n e^n f^k v = Π_{i<n} (k−i)(μ+k+i+1) f^k v`.
pub fn verma_su2_coefficients(max_n: usize, mu: &Q) -> Vec<Q> {
    let mut c = vec![Q::one()];
    for k in 1..=max_n as i64 {
        let weight = |n: i64| {
            (0..n).fold(Q::one(), |acc, i| acc * q(k - i) * (mu + q(k + i + 1)))
        };
        let partial = (0..k).fold(Q::zero(), |acc, n| acc + &c[n as usize] * weight(n));
        c.push(-partial / weight(k));
    }
    c
}

/// Compares the su(2) projector with the Casimir-interpolation projectors on
/// the top-weight subspace of each spin of `kind`, checks idempotence of
/// both and that the image is the space of highest weight vectors.
pub fn spin_module_agreement(
    engine: &extremal::projector::ClassicalEngine,
    p: &extremal::projector::Element,
    kind: &extremal::modules::ModuleKind,
) -> std::result::Result<(), String> {
    use extremal::modules::*;
    use extremal::taylor::Relations;
    let t = extremal::algebra::realize(&engine.rel.system().spec).map_err(|e| e.to_string())?;
    let m = build_module(&t, kind).map_err(|e| e.to_string())?;
    let (proj, singular) = project_partial(engine, p, &m).map_err(|e| e.to_string())?;
    let all: Vec<usize> = (0..m.dim()).collect();
    for &two_j in su2_spectrum(&m).keys() {
        let cols: Vec<usize> = all.iter().copied().filter(|i| m.weights[*i][0] == q(two_j)).collect();
        if let Some(c) = cols.iter().find(|c| singular.contains(c)) {
            return Err(format!("{kind:?}: column {c} of weight {two_j} is singular"));
        }
        let cas = casimir_projector_su2(&m, two_j).map_err(|e| e.to_string())?;
        if &cas * &cas != cas {
            return Err(format!("{kind:?}: Casimir projector for 2j={two_j} not idempotent"));
        }
        let ours = proj.matrix.submatrix(&all, &cols);
        if ours != cas.submatrix(&all, &cols) {
            return Err(format!("{kind:?}: disagreement at 2j={two_j}"));
        }
        let block = proj.matrix.submatrix(&cols, &cols);
        if &block * &block != block {
            return Err(format!("{kind:?}: projector block at 2j={two_j} not idempotent"));
        }
    }
    if proj.image != highest_weight_space(&t, &m) {
        return Err(format!("{kind:?}: image differs from the highest weight space"));
    }
    Ok(())
}

/// Spin modules of dimension at most `max_dim`: irreducibles, pairwise
/// tensor products and a few triple products.
pub fn spin_modules(max_dim: u32) -> Vec<extremal::modules::ModuleKind> {
    use extremal::modules::ModuleKind::{Spin, Tensor};
    let mut out = Vec::new();
    for a in 0..max_dim {
        out.push(Spin(a));
        for b in a..max_dim {
            if (a + 1) * (b + 1) <= max_dim && a > 0 {
                out.push(Tensor(Box::new(Spin(a)), Box::new(Spin(b))));
            }
        }
    }
    for (a, b, c) in [(1, 1, 1), (2, 2, 2), (1, 2, 3), (1, 1, 4)] {
        if (a + 1) * (b + 1) * (c + 1) <= max_dim {
            out.push(Tensor(Box::new(Tensor(Box::new(Spin(a)), Box::new(Spin(b)))), Box::new(Spin(c))));
        }
    }
    out
}

/// Compares `cg_su2` with [`oracle_cg_recursion`] and [`racah_cg`] for all
/// spins up to `max_two_j / 2`, including zero entries, and checks both
/// orthogonality relations. Returns the number of tables compared.
pub fn cg_against_oracles(
    engine: &extremal::projector::ClassicalEngine,
    p: &extremal::projector::Element,
    max_two_j: u32,
) -> std::result::Result<usize, String> {
    use extremal::modules::cg_su2;
    let mut count = 0;
    for tj1 in 0..=max_two_j {
        for tj2 in 0..=max_two_j {
            let mut tables = Vec::new();
            for tj in (tj1.abs_diff(tj2)..=tj1 + tj2).step_by(2) {
                let table = cg_su2(engine, p, tj1, tj2, tj).map_err(|e| e.to_string())?;
                let rows = oracle_cg_recursion(tj1 as i64, tj2 as i64, tj as i64)
                    .map_err(|e| e.to_string())?
                    .expected;
                for tm1 in (-(tj1 as i64)..=tj1 as i64).step_by(2) {
                    for tm2 in (-(tj2 as i64)..=tj2 as i64).step_by(2) {
                        let at = format!("j1={tj1}/2 j2={tj2}/2 j={tj}/2 m1={tm1}/2 m2={tm2}/2");
                        let found = table.get(tm1, tm2);
                        if (tm1 + tm2).abs() > tj as i64 {
                            if found.is_some() {
                                return Err(format!("{at}: entry outside the multiplet"));
                            }
                            continue;
                        }
                        let (sign, square) = rows
                            .iter()
                            .find(|r| r.0 == tm1 && r.1 == tm2)
                            .map_or((1, Q::zero()), |r| (r.2, r.3.clone()));
                        let (rs, rq) = racah_cg(tj1 as i64, tj2 as i64, tj as i64, tm1, tm2);
                        if rq != square || (!rq.is_zero() && rs != sign) {
                            return Err(format!("{at}: recursion and Racah formula disagree"));
                        }
                        let ok = match found {
                            Some(x) => x.square == square && x.sign == sign && x.two_m == tm1 + tm2,
                            None => square.is_zero(),
                        };
                        if !ok {
                            return Err(format!("{at}: got {found:?}, expected sign {sign} square {square}"));
                        }
                    }
                }
                tables.push(table);
            }
            cg_orthogonality(&tables)?;
            count += tables.len();
        }
    }
    Ok(count)
}

fn cg_orthogonality(tables: &[extremal::modules::CgTable]) -> std::result::Result<(), String> {
    for a in tables {
        for b in tables {
            let top = a.two_j.min(b.two_j) as i64;
            for tm in (-top..=top).step_by(2) {
                let row = a.entries.iter().filter(|x| x.two_m == tm);
                if a.two_j == b.two_j {
                    let total: Q = row.map(|x| x.square.clone()).sum();
                    if !total.is_one() {
                        return Err(format!("j={}/2 m={tm}/2: norm {total}", a.two_j));
                    }
                    continue;
                }
                let terms: Vec<(i8, Q)> = row
                    .filter_map(|x| {
                        b.entries
                            .iter()
                            .find(|y| y.two_m1 == x.two_m1 && y.two_m2 == x.two_m2)
                            .map(|y| (x.sign * y.sign, &x.square * &y.square))
                    })
                    .collect();
                if !signed_root_sum_is_zero(&terms) {
                    return Err(format!("j={}/2 and j={}/2 not orthogonal at m={tm}/2", a.two_j, b.two_j));
                }
            }
        }
    }
    if let Some(first) = tables.first() {
        let (tj1, tj2) = (first.two_j1 as i64, first.two_j2 as i64);
        for tm1 in (-tj1..=tj1).step_by(2) {
            for tm2 in (-tj2..=tj2).step_by(2) {
                let total: Q = tables
                    .iter()
                    .filter_map(|t| t.get(tm1, tm2))
                    .map(|x| x.square.clone())
                    .sum();
                if !total.is_one() {
                    return Err(format!("completeness fails at m1={tm1}/2 m2={tm2}/2"));
                }
            }
        }
    }
    Ok(())
}
