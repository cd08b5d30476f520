//! Extremal projectors as ordered products of per-root factors, and their
//! verification.

use std::collections::BTreeMap;
use std::time::Instant;

use num_traits::One;
use serde::Serialize;

use crate::algebra::realize;
use crate::coeff::{CartanRational, Coefficient};
use crate::error::{Error, Result};
use crate::ordering::NormalOrdering;
use crate::rational::{q, rat_to_q, Q};
use crate::rootsys::{AlgebraSpec, Color, Root, RootSystem};
use crate::taylor::{ClassicalRelations, Engine, Monomial, Relations, TaylorElement};

pub type ClassicalEngine = Engine<ClassicalRelations>;
pub type Element = TaylorElement<CartanRational>;

/// How `ρ` enters the factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RhoMode {
    /// `ρ(α_i) = ½(α_i, α_i)`.
    Standard,
    /// `ρ(α_i) = x_i`, free variables numbered after the Cartan ones.
    Symbolic,
}

pub fn classical_engine(spec: &AlgebraSpec, ordering: Option<NormalOrdering>, mode: RhoMode) -> Result<ClassicalEngine> {
    let table = realize(spec)?;
    let ordering = match ordering {
        Some(o) => o,
        None => crate::ordering::canonical(&table.system)?,
    };
    if !crate::ordering::validate(&ordering.roots, &table.system)? {
        return Err(Error::Parse("ordering is not normal".into()));
    }
    let extra = match mode {
        RhoMode::Standard => Vec::new(),
        RhoMode::Symbolic => {
            let r = table.system.rank();
            if r <= 2 {
                ["x_a", "x_b"][..r].iter().map(|s| s.to_string()).collect()
            } else {
                (1..=r).map(|i| format!("x{i}")).collect()
            }
        }
    };
    Ok(Engine::new(ClassicalRelations::with_names(table, ordering, extra)))
}

fn h_gamma(g: &Root) -> Vec<(usize, Q)> {
    g.coords
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0)
        .map(|(i, c)| (i, q(*c)))
        .collect()
}

/// `h_γ + ρ(γ) + shift` as a list of variable coefficients and a constant.
fn shifted_form(rs: &RootSystem, g: &Root, mode: RhoMode, shift: &Q) -> (Vec<(usize, Q)>, Q) {
    let mut coeffs = h_gamma(g);
    let mut constant = shift.clone();
    match mode {
        RhoMode::Standard => constant += rat_to_q(&rs.rho_of(&g.coords)),
        RhoMode::Symbolic => {
            let r = rs.rank();
            coeffs.extend(g.coords.iter().enumerate().filter(|(_, c)| **c != 0).map(|(i, c)| (r + i, q(*c))));
        }
    }
    (coeffs, constant)
}

fn inverse_product(rs: &RootSystem, g: &Root, mode: RhoMode, ks: impl Iterator<Item = i64>) -> CartanRational {
    let half = rat_to_q(&g.norm) / q(2);
    ks.fold(CartanRational::one(), |acc, k| {
        let (c, k0) = shifted_form(rs, g, mode, &(&half * q(k)));
        acc.mul(&CartanRational::inv_linear(&c, k0))
    })
}

/// `φ_{γ,n} = Π_{k=1}^{n} (h_γ + ρ(γ) + ½(γ,γ)k)^{−1}` for a white root.
pub fn phi_factor(rs: &RootSystem, g: &Root, n: u32) -> Result<CartanRational> {
    if g.color != Color::White {
        return Err(Error::ColorMismatch(format!("{g} is {:?}", g.color)));
    }
    Ok(inverse_product(rs, g, RhoMode::Standard, 1..=n as i64))
}

fn inv_factorial(n: u32) -> Q {
    Q::new(One::one(), crate::rational::factorial(n as u64))
}

/// Coefficients `c_n` of `e_{−γ}^n e_γ^n` in the factor `P_γ`, for `n ≤ max_n`.
pub fn factor_coefficients(rs: &RootSystem, g: &Root, max_n: u32, mode: RhoMode) -> Vec<CartanRational> {
    match g.color {
        Color::White => (0..=max_n)
            .map(|n| {
                let sign = if n % 2 == 1 { -Q::one() } else { Q::one() };
                inverse_product(rs, g, mode, 1..=n as i64).scale(&(sign * inv_factorial(n)))
            })
            .collect(),
        Color::Grey => {
            let mut v = vec![CartanRational::one()];
            if max_n >= 1 {
                v.push(inverse_product(rs, g, mode, 0..=0).neg());
            }
            v
        }
        Color::Dark => (0..=max_n)
            .map(|m| {
                let n = m / 2;
                let norm = rat_to_q(&g.norm);
                let pre = inv_factorial(n) / num_traits::pow(norm, n as usize);
                let odd_shifts = (1..=n as i64 + m as i64 % 2).map(|k| 2 * k - 1);
                let c = inverse_product(rs, g, mode, odd_shifts);
                if m % 2 == 0 {
                    c.scale(&pre)
                } else {
                    c.scale(&-pre)
                }
            })
            .collect(),
    }
}

fn root_height_max(g: &Root) -> u32 {
    g.coords.iter().copied().max().unwrap_or(1).max(1) as u32
}

/// The factor `P_γ` truncated at `grade`.
pub fn factor<R: Relations<Coeff = CartanRational>>(engine: &Engine<R>, root: usize, grade: u32, mode: RhoMode) -> Element {
    let rs = engine.rel.system();
    let g = &rs.reduced[root];
    let max_n = grade / root_height_max(g);
    let mut acc = engine.element(Vec::new(), grade);
    for (n, c) in factor_coefficients(rs, g, max_n, mode).into_iter().enumerate() {
        let t = engine.pair_term(root, n as u8, n as u8, c, grade);
        acc = acc.add(&t).expect("same shape");
    }
    acc
}

/// `Π_{γ} P_γ` in the engine's normal ordering.
pub fn build<R: Relations<Coeff = CartanRational>>(engine: &Engine<R>, grade: u32, mode: RhoMode) -> Result<Element> {
    if grade < 1 {
        return Err(Error::Parse("grade must be at least 1".into()));
    }
    let factors: Vec<Element> = engine
        .rel
        .ordering()
        .roots
        .iter()
        .map(|r| factor(engine, *r, grade, mode))
        .collect();
    engine.product(&factors)
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Residual {
    pub equation: String,
    /// Lowest grade at which a nonzero term survives.
    pub grade: u32,
    pub terms: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProjectorReport {
    pub schema: u32,
    pub algebra: String,
    pub ordering: Vec<String>,
    pub grade: u32,
    pub truncation: &'static str,
    pub residuals: Vec<Residual>,
    pub passed: bool,
    pub elapsed_ms: u128,
}

fn residual<R: Relations>(engine: &Engine<R>, equation: String, x: &TaylorElement<R::Coeff>) -> Option<Residual> {
    let g = x.terms.keys().map(|m| engine.grade_of(m)).min()?;
    Some(Residual {
        equation,
        grade: g,
        terms: x.len(),
    })
}

/// Checks `e_{α_i}·P = 0`, `P·e_{−α_i} = 0`, `P² = P` and that the constant
/// term is 1, all modulo terms of grade above `p.grade`.
pub fn verify<R: Relations>(engine: &Engine<R>, p: &TaylorElement<R::Coeff>) -> Result<ProjectorReport> {
    let start = Instant::now();
    let rs = engine.rel.system();
    let n = p.grade;
    let mut residuals = Vec::new();
    for s in &rs.simple {
        let label = crate::rootsys::root_label(&s.coords);
        let e = engine.root_vector(&s.coords, n)?;
        let neg: Vec<i64> = s.coords.iter().map(|c| -c).collect();
        let f = engine.root_vector(&neg, n)?;
        residuals.extend(residual(engine, format!("e[{label}]·P"), &engine.multiply(&e, p)?));
        residuals.extend(residual(engine, format!("P·e[-{label}]"), &engine.multiply(p, &f)?));
    }
    let pp = square(engine, p)?.sub(p)?;
    residuals.extend(residual(engine, "P·P−P".into(), &pp));
    let lead = p.coefficient(&engine.unit()).sub(&R::Coeff::one());
    if !lead.is_zero() {
        residuals.push(Residual {
            equation: "constant term".into(),
            grade: 0,
            terms: 1,
        });
    }
    Ok(ProjectorReport {
        schema: 1,
        algebra: rs.spec.to_string(),
        ordering: engine.rel.ordering().labels(rs),
        grade: n,
        truncation: "terms of grade above the stated grade are discarded; grade is the largest simple-root coordinate of the lowering or raising part",
        passed: residuals.is_empty(),
        residuals,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// `p·p` modulo grade above `p.grade`, for `p` of weight zero.
///
/// Writes each term as `L·(c' R)` and expands `p·p = Σ_L (p·L)·(Σ c' R)`;
/// the lowering content of a term never drops under right multiplication,
/// so `p·L` is truncated on it first.
pub fn square<R: Relations>(engine: &Engine<R>, p: &TaylorElement<R::Coeff>) -> Result<TaylorElement<R::Coeff>> {
    let n = p.grade;
    if p.terms.keys().any(|m| engine.weight_of(m).iter().any(|w| *w != 0)) {
        return engine.multiply(p, p);
    }
    let mut right: BTreeMap<Monomial, Vec<(Monomial, R::Coeff)>> = BTreeMap::new();
    for (m, c) in &p.terms {
        let (low, high) = engine.split(m);
        let back: Vec<i64> = engine.shift_of(&low).iter().map(|s| -s).collect();
        right.entry(low).or_default().push((high, c.shift(&back)));
    }
    let mut memo: BTreeMap<Monomial, TaylorElement<R::Coeff>> = BTreeMap::new();
    memo.insert(engine.unit(), p.clone());
    let mut pairs = Vec::new();
    for (low, terms) in right {
        let z = lowered(engine, p, &low, &mut memo);
        pairs.push((z, engine.element(terms, n)));
    }
    engine.sum_of_products(pairs.iter().map(|(a, b)| (a, b)), n)
}

fn lowered<R: Relations>(
    engine: &Engine<R>,
    p: &TaylorElement<R::Coeff>,
    low: &Monomial,
    memo: &mut BTreeMap<Monomial, TaylorElement<R::Coeff>>,
) -> TaylorElement<R::Coeff> {
    if let Some(z) = memo.get(low) {
        return z.clone();
    }
    let last = low.iter().rposition(|e| *e > 0).unwrap();
    let mut prefix = low.clone();
    prefix[last] -= 1;
    let z = lowered(engine, p, &prefix, memo);
    let mut letter = engine.unit();
    letter[last] = 1;
    let n = p.grade;
    let r = engine.times_monomial(&z, &letter, |r| engine.contents(r).0 <= n);
    memo.insert(low.clone(), r.clone());
    r
}

/// Coefficients `(−1)^n (2j+1)! / (n! (2j+1+n)!)` as rational functions of
/// `j` (variable 0), for `n ≤ max_n`.
pub fn su2_closed_form(max_n: u32) -> Vec<CartanRational> {
    (0..=max_n)
        .map(|n| {
            let sign = if n % 2 == 1 { -Q::one() } else { Q::one() };
            (1..=n as i64)
                .fold(CartanRational::from_q(sign * inv_factorial(n)), |acc, k| {
                    acc.mul(&CartanRational::inv_linear(&[(0, q(2))], q(1 + k)))
                })
        })
        .collect()
}

/// Solves `J_+ Σ C_n(J_0) J_−^n J_+^n = 0` term by term with `C_0 = 1`.
///
/// Moving `J_+` through the ansatz gives
/// `C_{n+1}(J_0) = −C_n(J_0) / ((n+1)(2J_0 + n + 2))`, with `J_0 = j` on
/// the highest weight.
pub fn shapiro_ansatz_solve(max_n: u32) -> Vec<CartanRational> {
    let mut out = vec![CartanRational::one()];
    for n in 0..max_n as i64 {
        let prev = out.last().unwrap().clone();
        let step = CartanRational::inv_linear(&[(0, q(2 * (n + 1)))], q((n + 1) * (n + 2)));
        out.push(prev.mul(&step).neg());
    }
    out
}

/// The generic su(2) factor coefficients with `h ↦ 2j`.
pub fn su2_generic_specialized(max_n: u32) -> Result<Vec<CartanRational>> {
    let rs = crate::rootsys::build_root_system(&"A1".parse()?)?;
    let g = rs.reduced[0].clone();
    Ok(factor_coefficients(&rs, &g, max_n, RhoMode::Standard)
        .into_iter()
        .map(|c| c.scale_var(0, &q(2)))
        .collect())
}

/// A copy of `p` with the coefficient of its `index`-th term (in sorted
/// order among terms of the given grade) increased by one.
pub fn perturb<R: Relations<Coeff = CartanRational>>(engine: &Engine<R>, p: &Element, grade: u32, index: usize) -> Option<Element> {
    let m = p
        .terms
        .keys()
        .filter(|m| engine.grade_of(m) == grade)
        .nth(index)?
        .clone();
    let mut out = p.clone();
    let c = out.terms[&m].add(&CartanRational::one());
    if c.is_zero() {
        out.terms.remove(&m);
    } else {
        out.terms.insert(m, c);
    }
    Some(out)
}

pub fn report_text(r: &ProjectorReport) -> String {
    let mut s = format!(
        "algebra {}  ordering [{}]  grade {}\n",
        r.algebra,
        r.ordering.join(", "),
        r.grade
    );
    if r.residuals.is_empty() {
        s.push_str("all residuals vanish\n");
    }
    for x in &r.residuals {
        s.push_str(&format!("residual {}: {} terms from grade {}\n", x.equation, x.terms, x.grade));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::build_root_system;

    fn engine(name: &str) -> ClassicalEngine {
        classical_engine(&name.parse().unwrap(), None, RhoMode::Standard).unwrap()
    }

    #[test]
    fn phi_examples() {
        let rs = build_root_system(&"A1".parse().unwrap()).unwrap();
        let names = vec!["h_a".to_string()];
        assert_eq!(phi_factor(&rs, &rs.reduced[0], 2).unwrap().render(&names), "1/((h_a+2)*(h_a+3))");
        assert_eq!(phi_factor(&rs, &rs.reduced[0], 0).unwrap(), CartanRational::one());
        let a2 = build_root_system(&"A2".parse().unwrap()).unwrap();
        let ab = a2.find(&[1, 1]).unwrap();
        let want = CartanRational::inv_linear(&[(0, q(1)), (1, q(1))], q(3));
        assert_eq!(phi_factor(&a2, ab, 1).unwrap(), want);
        let gl = build_root_system(&"gl(1|1)".parse().unwrap()).unwrap();
        assert!(matches!(phi_factor(&gl, &gl.reduced[0], 1), Err(Error::ColorMismatch(_))));
    }

    #[test]
    fn su2_factor_terms() {
        let e = engine("A1");
        let p = factor(&e, 0, 3, RhoMode::Standard);
        let text = e.to_text(&p);
        assert!(text.contains("[-1/(h_a+2)] * e[-α] e[α]"), "{text}");
        assert!(text.contains("[1/(2*h_a^2+10*h_a+12)]") || text.contains("1/2/((h_a+2)*(h_a+3))") || text.contains("[1/2/((h_a+2)*(h_a+3))]"), "{text}");
    }

    #[test]
    fn su2_verifies() {
        let e = engine("A1");
        let p = build(&e, 6, RhoMode::Standard).unwrap();
        let r = verify(&e, &p).unwrap();
        assert!(r.passed, "{:?}", r.residuals);
    }

    #[test]
    fn gl11_exact() {
        let e = engine("gl(1|1)");
        let p = build(&e, 1, RhoMode::Standard).unwrap();
        assert_eq!(p.len(), 2);
        let r = verify(&e, &p).unwrap();
        assert!(r.passed, "{:?}", r.residuals);
    }

    #[test]
    fn closed_form_matches_recursion() {
        let a = su2_closed_form(8);
        assert_eq!(a, shapiro_ansatz_solve(8));
        assert_eq!(a, su2_generic_specialized(8).unwrap());
        assert_eq!(a[1], CartanRational::inv_linear(&[(0, q(2))], q(2)).neg());
    }
}
