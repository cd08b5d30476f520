//! Cartan–Weyl structure constants computed from explicit matrix
//! (super)realizations.
//!
//! Composite root vectors are produced by bracketing simple ones upward in
//! height; then each `e_{−γ}` is rescaled so that `[e_γ, e_{−γ}] = h_γ`,
//! where `h_γ` acts on a weight `λ` by `(γ, λ)`. Phases are whatever the
//! ladder of brackets produces; all verified identities are independent of
//! them.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{fmt_q, q, rat_to_q, Q, Rat};
use crate::rootsys::{root_label, AlgebraSpec, Family, RootSystem};

/// Basis element of the Cartan–Weyl basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    /// `e_γ` for the positive root with this index.
    Raise(usize),
    /// `e_{−γ}`.
    Lower(usize),
    /// `h_{α_i}`.
    Cartan(usize),
}

pub type LinComb = Vec<(Symbol, Q)>;

/// The defining (super)representation used for the realization.
#[derive(Debug, Clone)]
pub struct DefiningRep {
    pub dim: usize,
    /// Eigenvalues of each `h_{α_i}` on each basis vector.
    pub weights: Vec<Vec<i64>>,
    pub parity: Vec<u8>,
}

#[derive(Debug, Clone)]
pub struct StructureTable {
    pub system: RootSystem,
    pub rep: DefiningRep,
    raise: Vec<Matrix>,
    lower: Vec<Matrix>,
    cartan: Vec<Matrix>,
    brackets: Vec<Vec<LinComb>>,
}

struct Realization {
    metric: Vec<Rat>,
    weights: Vec<Vec<Rat>>,
    parity: Vec<u8>,
    raise: Vec<Matrix>,
    lower: Vec<Matrix>,
}

fn unit_entries(n: usize, entries: &[(usize, usize, i64)]) -> Matrix {
    let e: Vec<(usize, usize, Q)> = entries.iter().map(|(r, c, v)| (*r, *c, q(*v))).collect();
    Matrix::from_entries(n, &e)
}

fn realization(spec: &AlgebraSpec) -> Realization {
    let (metric, _) = spec.ambient();
    let r = spec.rank;
    let ri = |v: i64| Rat::from_integer(v);
    let unit = |dim: usize, k: usize, s: i64| -> Vec<Rat> {
        (0..dim).map(|j| if j == k { ri(s) } else { ri(0) }).collect()
    };
    match spec.family {
        Family::A(_) | Family::Gl(_, _) => {
            let n = r + 1;
            let m = match spec.family {
                Family::Gl(m, _) => m,
                _ => n,
            };
            Realization {
                metric,
                weights: (0..n).map(|k| unit(n, k, 1)).collect(),
                parity: (0..n).map(|k| u8::from(k >= m)).collect(),
                raise: (0..r).map(|i| unit_entries(n, &[(i, i + 1, 1)])).collect(),
                lower: (0..r).map(|i| unit_entries(n, &[(i + 1, i, 1)])).collect(),
            }
        }
        Family::B(_) => {
            let n = 2 * r + 1;
            let p = |k: usize| n - 1 - k;
            let mut weights: Vec<Vec<Rat>> = (0..r).map(|k| unit(r, k, 1)).collect();
            weights.push(vec![ri(0); r]);
            weights.extend((0..r).rev().map(|k| unit(r, k, -1)));
            let mut raise = Vec::new();
            let mut lower = Vec::new();
            for i in 0..r - 1 {
                raise.push(unit_entries(n, &[(i, i + 1, 1), (p(i + 1), p(i), -1)]));
                lower.push(unit_entries(n, &[(i + 1, i, 1), (p(i), p(i + 1), -1)]));
            }
            raise.push(unit_entries(n, &[(r - 1, r, 1), (r, p(r - 1), -1)]));
            lower.push(unit_entries(n, &[(r, r - 1, 1), (p(r - 1), r, -1)]));
            Realization {
                metric,
                weights,
                parity: vec![0; n],
                raise,
                lower,
            }
        }
        Family::C(_) | Family::D(_) => {
            let n = 2 * r;
            let p = |k: usize| n - 1 - k;
            let mut weights: Vec<Vec<Rat>> = (0..r).map(|k| unit(r, k, 1)).collect();
            weights.extend((0..r).rev().map(|k| unit(r, k, -1)));
            let mut raise = Vec::new();
            let mut lower = Vec::new();
            for i in 0..r - 1 {
                raise.push(unit_entries(n, &[(i, i + 1, 1), (p(i + 1), p(i), -1)]));
                lower.push(unit_entries(n, &[(i + 1, i, 1), (p(i), p(i + 1), -1)]));
            }
            if matches!(spec.family, Family::C(_)) {
                raise.push(unit_entries(n, &[(r - 1, p(r - 1), 1)]));
                lower.push(unit_entries(n, &[(p(r - 1), r - 1, 1)]));
            } else {
                raise.push(unit_entries(n, &[(r - 2, p(r - 1), 1), (r - 1, p(r - 2), -1)]));
                lower.push(unit_entries(n, &[(p(r - 1), r - 2, 1), (p(r - 2), r - 1, -1)]));
            }
            Realization {
                metric,
                weights,
                parity: vec![0; n],
                raise,
                lower,
            }
        }
        Family::G2 => {
            let w = |a: i64, b: i64, c: i64| vec![ri(a), ri(b), ri(c)];
            Realization {
                metric,
                weights: vec![
                    w(0, 0, 0),
                    w(1, -1, 0),
                    w(1, 0, -1),
                    w(-1, 1, 0),
                    w(0, 1, -1),
                    w(-1, 0, 1),
                    w(0, -1, 1),
                ],
                parity: vec![0; 7],
                raise: vec![
                    unit_entries(7, &[(3, 2, 3), (5, 1, 3)]),
                    unit_entries(7, &[(0, 3, 2), (1, 0, 2), (2, 4, 1), (6, 5, 1)]),
                ],
                lower: vec![
                    unit_entries(7, &[(1, 5, 1), (2, 3, 1)]),
                    unit_entries(7, &[(0, 1, 1), (3, 0, 1), (4, 2, 1), (5, 6, 1)]),
                ],
            }
        }
        Family::Osp12 => Realization {
            metric,
            weights: vec![vec![ri(1)], vec![ri(0)], vec![ri(-1)]],
            parity: vec![0, 1, 0],
            raise: vec![unit_entries(3, &[(0, 1, 1), (1, 2, 1)])],
            lower: vec![unit_entries(3, &[(1, 0, 1), (2, 1, -1)])],
        },
    }
}

fn ambient_of(coords: &[i64], simple_amb: &[Vec<Rat>]) -> Vec<Rat> {
    let dim = simple_amb[0].len();
    (0..dim)
        .map(|k| {
            coords
                .iter()
                .zip(simple_amb)
                .map(|(c, s)| s[k] * Rat::from_integer(*c))
                .sum()
        })
        .collect()
}

fn cartan_matrix(gamma_amb: &[Rat], real: &Realization) -> Matrix {
    let entries: Vec<Q> = real
        .weights
        .iter()
        .map(|w| {
            let v: Rat = gamma_amb
                .iter()
                .zip(w)
                .zip(&real.metric)
                .map(|((a, b), g)| *a * *b * *g)
                .sum();
            rat_to_q(&v)
        })
        .collect();
    Matrix::diag(&entries)
}

/// Ratio `c` with `a = c·b`, if one exists.
fn proportional(a: &Matrix, b: &Matrix) -> Option<Q> {
    let mut c: Option<Q> = None;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            match (a[(i, j)].is_zero(), b[(i, j)].is_zero()) {
                (true, true) => {}
                (false, false) => {
                    let r = &a[(i, j)] / &b[(i, j)];
                    if c.as_ref().is_some_and(|c| *c != r) {
                        return None;
                    }
                    c = Some(r);
                }
                (false, true) => return None,
                (true, false) => {
                    if c.as_ref().is_some_and(|c| !c.is_zero()) {
                        return None;
                    }
                    c = Some(Q::zero());
                }
            }
        }
    }
    Some(c.unwrap_or_else(Q::zero))
}

pub fn realize(spec: &AlgebraSpec) -> Result<StructureTable> {
    let system = crate::rootsys::build_root_system(spec)?;
    let real = realization(&system.spec);
    let (_, simple_amb) = system.spec.ambient();
    let r = system.rank();
    let internal = |m: String| Error::Internal(format!("{}: {m}", system.spec));
    let cartan: Vec<Matrix> = (0..r)
        .map(|i| cartan_matrix(&simple_amb[i], &real))
        .collect();
    let npos = system.positive.len();
    let mut raise: Vec<Option<Matrix>> = vec![None; npos];
    let mut lower: Vec<Option<Matrix>> = vec![None; npos];
    for (idx, g) in system.positive.iter().enumerate() {
        let (e, f) = if g.height() == 1 {
            let i = g.coords.iter().position(|c| *c == 1).unwrap();
            (real.raise[i].clone(), real.lower[i].clone())
        } else {
            let mut found = None;
            for i in 0..r {
                let mut d = g.coords.clone();
                d[i] -= 1;
                let Some(di) = system.positive.iter().position(|x| x.coords == d) else {
                    continue;
                };
                let (Some(ed), Some(fd)) = (&raise[di], &lower[di]) else {
                    continue;
                };
                let pi = system.simple[i].parity;
                let pd = system.positive[di].parity;
                let e = real.raise[i].super_bracket(ed, pi, pd);
                if !e.is_zero() {
                    let f = fd.super_bracket(&real.lower[i], pd, pi);
                    found = Some((e, f));
                    break;
                }
            }
            found.ok_or_else(|| internal(format!("no root vector for {g}")))?
        };
        let h = e.super_bracket(&f, g.parity, g.parity);
        let target = cartan_matrix(&ambient_of(&g.coords, &simple_amb), &real);
        let c = proportional(&h, &target)
            .filter(|c| !c.is_zero())
            .ok_or_else(|| internal(format!("[e,f] not proportional to h for {g}")))?;
        let f = f.scale(&c.recip());
        for (i, hi) in cartan.iter().enumerate() {
            let pairing = rat_to_q(&system.form(&system.simple[i].coords, &g.coords));
            if hi.super_bracket(&e, 0, g.parity) != e.scale(&pairing)
                || hi.super_bracket(&f, 0, g.parity) != f.scale(&-pairing)
            {
                return Err(internal(format!("root vector for {g} has wrong weight")));
            }
        }
        raise[idx] = Some(e);
        lower[idx] = Some(f);
    }
    let rep = DefiningRep {
        dim: real.weights.len(),
        weights: real
            .weights
            .iter()
            .map(|w| {
                simple_amb
                    .iter()
                    .map(|s| {
                        let v: Rat = s.iter().zip(w).zip(&real.metric).map(|((a, b), g)| *a * *b * *g).sum();
                        v.to_integer()
                    })
                    .collect()
            })
            .collect(),
        parity: real.parity.clone(),
    };
    let mut table = StructureTable {
        system,
        rep,
        raise: raise.into_iter().map(Option::unwrap).collect(),
        lower: lower.into_iter().map(Option::unwrap).collect(),
        cartan,
        brackets: Vec::new(),
    };
    table.fill_brackets()?;
    Ok(table)
}

impl StructureTable {
    pub fn symbols(&self) -> Vec<Symbol> {
        let n = self.system.positive.len();
        (0..n)
            .map(Symbol::Raise)
            .chain((0..n).map(Symbol::Lower))
            .chain((0..self.system.rank()).map(Symbol::Cartan))
            .collect()
    }

    fn index(&self, s: Symbol) -> usize {
        let n = self.system.positive.len();
        match s {
            Symbol::Raise(i) => i,
            Symbol::Lower(i) => n + i,
            Symbol::Cartan(i) => 2 * n + i,
        }
    }

    pub fn matrix(&self, s: Symbol) -> &Matrix {
        match s {
            Symbol::Raise(i) => &self.raise[i],
            Symbol::Lower(i) => &self.lower[i],
            Symbol::Cartan(i) => &self.cartan[i],
        }
    }

    pub fn parity(&self, s: Symbol) -> u8 {
        match s {
            Symbol::Raise(i) | Symbol::Lower(i) => self.system.positive[i].parity,
            Symbol::Cartan(_) => 0,
        }
    }

    pub fn weight(&self, s: Symbol) -> Vec<i64> {
        match s {
            Symbol::Raise(i) => self.system.positive[i].coords.clone(),
            Symbol::Lower(i) => self.system.positive[i].coords.iter().map(|c| -c).collect(),
            Symbol::Cartan(_) => vec![0; self.system.rank()],
        }
    }

    pub fn symbol_of(&self, coords: &[i64]) -> Option<Symbol> {
        if let Some(i) = self.system.positive.iter().position(|g| g.coords == coords) {
            return Some(Symbol::Raise(i));
        }
        let neg: Vec<i64> = coords.iter().map(|c| -c).collect();
        self.system
            .positive
            .iter()
            .position(|g| g.coords == neg)
            .map(Symbol::Lower)
    }

    pub fn name(&self, s: Symbol) -> String {
        match s {
            Symbol::Raise(_) | Symbol::Lower(_) => format!("e[{}]", root_label(&self.weight(s))),
            Symbol::Cartan(i) => format!("h{}", i + 1),
        }
    }

    fn decompose(&self, z: &Matrix, weight: &[i64]) -> Result<LinComb> {
        let internal = |m: &str| Error::Internal(format!("{}: {m}", self.system.spec));
        if z.is_zero() {
            return Ok(Vec::new());
        }
        if weight.iter().all(|c| *c == 0) {
            let n = z.rows();
            let mut a = Matrix::zeros(n * n, self.cartan.len());
            let mut b = vec![Q::zero(); n * n];
            for (k, h) in self.cartan.iter().enumerate() {
                for i in 0..n {
                    for j in 0..n {
                        a[(i * n + j, k)] = h[(i, j)].clone();
                    }
                }
            }
            for i in 0..n {
                for j in 0..n {
                    b[i * n + j] = z[(i, j)].clone();
                }
            }
            let x = a.solve(&b).ok_or_else(|| internal("bracket outside the Cartan span"))?;
            return Ok(x
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (Symbol::Cartan(k), c))
                .collect());
        }
        let s = self
            .symbol_of(weight)
            .ok_or_else(|| internal("nonzero bracket with a non-root weight"))?;
        let c = proportional(z, self.matrix(s))
            .ok_or_else(|| internal("bracket not proportional to a root vector"))?;
        Ok(vec![(s, c)])
    }

    fn fill_brackets(&mut self) -> Result<()> {
        let syms = self.symbols();
        let mut rows = Vec::with_capacity(syms.len());
        for &x in &syms {
            let mut row = Vec::with_capacity(syms.len());
            for &y in &syms {
                let z = self
                    .matrix(x)
                    .super_bracket(self.matrix(y), self.parity(x), self.parity(y));
                let w: Vec<i64> = self.weight(x).iter().zip(self.weight(y)).map(|(a, b)| a + b).collect();
                row.push(self.decompose(&z, &w)?);
            }
            rows.push(row);
        }
        self.brackets = rows;
        Ok(())
    }

    pub fn bracket(&self, x: Symbol, y: Symbol) -> Result<&LinComb> {
        let n = self.symbols().len();
        let (i, j) = (self.index(x), self.index(y));
        if i >= n || j >= n {
            return Err(Error::UnknownSymbol(format!("{x:?} or {y:?}")));
        }
        Ok(&self.brackets[i][j])
    }

    /// Bracket extended bilinearly to linear combinations.
    pub fn bracket_comb(&self, a: &LinComb, b: &LinComb) -> LinComb {
        let mut acc: Vec<(Symbol, Q)> = Vec::new();
        for (x, cx) in a {
            for (y, cy) in b {
                for (z, cz) in &self.brackets[self.index(*x)][self.index(*y)] {
                    add_term(&mut acc, *z, cx * cy * cz);
                }
            }
        }
        acc.retain(|(_, c)| !c.is_zero());
        acc.sort_by_key(|(s, _)| *s);
        acc
    }

    pub fn to_json(&self) -> serde_json::Value {
        let syms = self.symbols();
        let mut entries = Vec::new();
        for &x in &syms {
            for &y in &syms {
                let b = &self.brackets[self.index(x)][self.index(y)];
                if b.is_empty() {
                    continue;
                }
                let terms: Vec<_> = b
                    .iter()
                    .map(|(s, c)| serde_json::json!([self.name(*s), fmt_q(c)]))
                    .collect();
                entries.push(serde_json::json!({
                    "x": self.name(x),
                    "y": self.name(y),
                    "result": terms,
                }));
            }
        }
        serde_json::json!({
            "schema": 1,
            "algebra": self.system.spec.to_string(),
            "basis": syms.iter().map(|s| self.name(*s)).collect::<Vec<_>>(),
            "brackets": entries,
        })
    }

    /// `c` with `[e_γ, e_γ] = c·e_{2γ}` for a dark root `γ`.
    pub fn dark_square(&self, gamma: usize) -> Option<Q> {
        let g = &self.system.positive[gamma];
        let doubled: Vec<i64> = g.coords.iter().map(|c| 2 * c).collect();
        let b = &self.brackets[gamma][gamma];
        match b.as_slice() {
            [(Symbol::Raise(k), c)] if self.system.positive[*k].coords == doubled => Some(c.clone()),
            _ => None,
        }
    }
}

fn add_term(acc: &mut Vec<(Symbol, Q)>, s: Symbol, c: Q) {
    if let Some(slot) = acc.iter_mut().find(|(t, _)| *t == s) {
        slot.1 += c;
    } else {
        acc.push((s, c));
    }
}

impl fmt::Display for StructureTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", serde_json::to_string_pretty(&self.to_json()).unwrap())
    }
}

/// Graded Jacobi identity over every basis triple; returns the failures.
pub fn jacobi_failures(t: &StructureTable) -> Vec<(Symbol, Symbol, Symbol)> {
    let syms = t.symbols();
    let mut bad = Vec::new();
    let one = |s: Symbol| -> LinComb { vec![(s, Q::one())] };
    for &x in &syms {
        for &y in &syms {
            let xy = t.bracket_comb(&one(x), &one(y));
            for &z in &syms {
                // [x,[y,z]] = [[x,y],z] + (−1)^{|x||y|} [y,[x,z]]
                let lhs = t.bracket_comb(&one(x), &t.bracket_comb(&one(y), &one(z)));
                let mut rhs = t.bracket_comb(&xy, &one(z));
                let sign = if t.parity(x) & t.parity(y) == 1 { -Q::one() } else { Q::one() };
                for (s, c) in t.bracket_comb(&one(y), &t.bracket_comb(&one(x), &one(z))) {
                    add_term(&mut rhs, s, c * &sign);
                }
                rhs.retain(|(_, c)| !c.is_zero());
                rhs.sort_by_key(|(s, _)| *s);
                if lhs != rhs {
                    bad.push((x, y, z));
                }
            }
        }
    }
    bad
}
