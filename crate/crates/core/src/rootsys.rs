//! Root systems of the supported (super)algebras.
//!
//! Roots are integer coordinate vectors over the simple roots. The bilinear
//! form comes from an ambient realization with a diagonal metric: shortest
//! root norm 2 for ordinary algebras, the supertrace form for `gl(m|n)` and
//! `(β,β) = 2` for `osp(1|2)`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{fmt_rat, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    G2,
    Gl(usize, usize),
    Osp12,
}

/// A supported algebra together with its odd simple-root set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub family: Family,
    pub rank: usize,
    pub tau: Vec<usize>,
}

impl AlgebraSpec {
    pub fn new(family: Family) -> Result<Self> {
        let unsupported = || Error::UnsupportedAlgebra(format!("{family:?}"));
        let (rank, tau) = match family {
            Family::A(r) if (1..=4).contains(&r) => (r, vec![]),
            Family::B(r) | Family::C(r) if (2..=4).contains(&r) => (r, vec![]),
            Family::D(r) if (2..=4).contains(&r) => (r, vec![]),
            Family::G2 => (2, vec![]),
            Family::Gl(m, n) if m >= 1 && n >= 1 && m + n <= 3 => (m + n - 1, vec![m - 1]),
            Family::Osp12 => (1, vec![0]),
            _ => return Err(unsupported()),
        };
        Ok(AlgebraSpec { family, rank, tau })
    }

    pub fn is_super(&self) -> bool {
        !self.tau.is_empty()
    }

    /// Diagonal metric of the ambient space and the simple roots in it.
    pub(crate) fn ambient(&self) -> (Vec<Rat>, Vec<Vec<Rat>>) {
        let i = |v: i64| Rat::from_integer(v);
        let unit = |dim: usize, k: usize| -> Vec<Rat> {
            (0..dim).map(|j| if j == k { i(1) } else { i(0) }).collect()
        };
        let diff = |dim: usize, a: usize, b: usize| -> Vec<Rat> {
            let mut v = unit(dim, a);
            v[b] -= i(1);
            v
        };
        match self.family {
            Family::A(r) => (
                vec![i(1); r + 1],
                (0..r).map(|k| diff(r + 1, k, k + 1)).collect(),
            ),
            Family::B(r) => {
                let mut s: Vec<_> = (0..r - 1).map(|k| diff(r, k, k + 1)).collect();
                s.push(unit(r, r - 1));
                (vec![i(2); r], s)
            }
            Family::C(r) => {
                let mut s: Vec<_> = (0..r - 1).map(|k| diff(r, k, k + 1)).collect();
                let mut last = unit(r, r - 1);
                last[r - 1] = i(2);
                s.push(last);
                (vec![i(1); r], s)
            }
            Family::D(r) => {
                let mut s: Vec<_> = (0..r - 1).map(|k| diff(r, k, k + 1)).collect();
                let mut last = unit(r, r - 1);
                last[r - 2] = i(1);
                s.push(last);
                (vec![i(1); r], s)
            }
            Family::G2 => (
                vec![i(1); 3],
                vec![vec![i(-2), i(1), i(1)], vec![i(1), i(-1), i(0)]],
            ),
            Family::Gl(m, n) => {
                let metric = (0..m + n).map(|k| if k < m { i(1) } else { i(-1) }).collect();
                (metric, (0..m + n - 1).map(|k| diff(m + n, k, k + 1)).collect())
            }
            Family::Osp12 => (vec![i(2)], vec![vec![i(1)]]),
        }
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::A(r) => write!(f, "A{r}"),
            Family::B(r) => write!(f, "B{r}"),
            Family::C(r) => write!(f, "C{r}"),
            Family::D(r) => write!(f, "D{r}"),
            Family::G2 => write!(f, "G2"),
            Family::Gl(m, n) => write!(f, "gl({m}|{n})"),
            Family::Osp12 => write!(f, "osp(1|2)"),
        }
    }
}

impl FromStr for AlgebraSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '(' && *c != ')' && *c != '_')
            .collect::<String>()
            .to_lowercase();
        let bad = || Error::UnsupportedAlgebra(s.to_string());
        let family = match norm.as_str() {
            "su2" | "sl2" => Family::A(1),
            "su3" | "sl3" => Family::A(2),
            "su4" | "sl4" => Family::A(3),
            "a1xa1" | "a1*a1" | "a1+a1" | "a1⊗a1" => Family::D(2),
            "g2" => Family::G2,
            "osp1|2" => Family::Osp12,
            other => {
                if let Some(rest) = other.strip_prefix("gl") {
                    let (m, n) = rest.split_once('|').ok_or_else(bad)?;
                    Family::Gl(m.parse().map_err(|_| bad())?, n.parse().map_err(|_| bad())?)
                } else {
                    let (head, tail) = other.split_at(1);
                    let r: usize = tail.parse().map_err(|_| bad())?;
                    match head {
                        "a" => Family::A(r),
                        "b" => Family::B(r),
                        "c" => Family::C(r),
                        "d" => Family::D(r),
                        _ => return Err(bad()),
                    }
                }
            }
        };
        AlgebraSpec::new(family)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    White,
    Grey,
    Dark,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Root {
    pub coords: Vec<i64>,
    pub color: Color,
    pub parity: u8,
    pub norm: Rat,
}

impl Root {
    pub fn height(&self) -> i64 {
        self.coords.iter().sum()
    }

    pub fn is_odd(&self) -> bool {
        self.parity == 1
    }
}

/// Renders coordinates with greek letters for rank ≤ 2 (`α+2β`) and
/// `a1+a3` style otherwise.
pub fn root_label(coords: &[i64]) -> String {
    let names: Vec<String> = if coords.len() <= 2 {
        ["α", "β"].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=coords.len()).map(|k| format!("a{k}")).collect()
    };
    let mut out = String::new();
    for (c, name) in coords.iter().zip(&names) {
        if *c == 0 {
            continue;
        }
        if *c < 0 {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        if c.abs() != 1 {
            out.push_str(&c.abs().to_string());
        }
        out.push_str(name);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&root_label(&self.coords))
    }
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    pub spec: AlgebraSpec,
    pub simple: Vec<Root>,
    pub bilinear: Vec<Vec<Rat>>,
    pub positive: Vec<Root>,
    pub reduced: Vec<Root>,
    rho_simple: Vec<Rat>,
}

impl RootSystem {
    pub fn rank(&self) -> usize {
        self.spec.rank
    }

    pub fn form(&self, a: &[i64], b: &[i64]) -> Rat {
        let mut acc = Rat::zero();
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                acc += self.bilinear[i][j] * Rat::from_integer(x * y);
            }
        }
        acc
    }

    /// Integer pairings `(α_i, γ)` with every simple root; these are the
    /// eigenvalues of the Cartan generators on a root vector of weight `γ`.
    pub fn pairing(&self, coords: &[i64]) -> Vec<i64> {
        (0..self.rank())
            .map(|i| {
                let v = self.form(&self.simple[i].coords, coords);
                assert!(v.is_integer(), "non-integral pairing");
                v.to_integer()
            })
            .collect()
    }

    pub fn find(&self, coords: &[i64]) -> Option<&Root> {
        self.positive.iter().find(|r| r.coords == coords)
    }

    pub fn is_root(&self, coords: &[i64]) -> bool {
        if coords.iter().all(|c| *c <= 0) {
            let neg: Vec<i64> = coords.iter().map(|c| -c).collect();
            self.find(&neg).is_some()
        } else {
            self.find(coords).is_some()
        }
    }

    pub fn reduced_index(&self, coords: &[i64]) -> Option<usize> {
        self.reduced.iter().position(|r| r.coords == coords)
    }

    pub fn rho_value(&self, gamma: &Root) -> Result<Rat> {
        if self.find(&gamma.coords).is_none() {
            return Err(Error::UnknownRoot(gamma.to_string()));
        }
        Ok(self.rho_of(&gamma.coords))
    }

    /// Linear extension of `ρ(α_i) = ½(α_i, α_i)`.
    pub fn rho_of(&self, coords: &[i64]) -> Rat {
        coords
            .iter()
            .zip(&self.rho_simple)
            .map(|(c, r)| *r * Rat::from_integer(*c))
            .sum()
    }

    pub fn reduced_positive_roots(&self) -> Vec<Root> {
        self.reduced.clone()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let roots: Vec<_> = self
            .positive
            .iter()
            .map(|r| {
                serde_json::json!({
                    "coords": r.coords,
                    "label": r.to_string(),
                    "color": r.color,
                    "norm": fmt_rat(&r.norm),
                    "parity": r.parity,
                    "rho": fmt_rat(&self.rho_of(&r.coords)),
                    "reduced": self.reduced_index(&r.coords).is_some(),
                })
            })
            .collect();
        let bilinear: Vec<Vec<String>> = self
            .bilinear
            .iter()
            .map(|row| row.iter().map(fmt_rat).collect())
            .collect();
        serde_json::json!({
            "schema": 1,
            "family": self.spec.to_string(),
            "rank": self.spec.rank,
            "tau": self.spec.tau,
            "roots": roots,
            "bilinear": bilinear,
        })
    }
}

fn positive_coords_ordinary(bilinear: &[Vec<Rat>]) -> Vec<Vec<i64>> {
    let r = bilinear.len();
    let cartan = |i: usize, j: usize| -> i64 {
        let v = Rat::from_integer(2) * bilinear[i][j] / bilinear[i][i];
        v.to_integer()
    };
    let unit = |i: usize| -> Vec<i64> { (0..r).map(|k| i64::from(k == i)).collect() };
    let mut roots: BTreeSet<Vec<i64>> = (0..r).map(unit).collect();
    let mut layer: Vec<Vec<i64>> = (0..r).map(unit).collect();
    while !layer.is_empty() {
        let mut next = BTreeSet::new();
        for g in &layer {
            for i in 0..r {
                // α_i-string through g: g - pα_i, ..., g + qα_i with p - q = <g, α_i^∨>
                let mut p = 0;
                loop {
                    let mut d = g.clone();
                    d[i] -= p + 1;
                    if roots.contains(&d) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let pair: i64 = (0..r).map(|j| g[j] * cartan(i, j)).sum();
                if p - pair > 0 {
                    let mut s = g.clone();
                    s[i] += 1;
                    if !roots.contains(&s) {
                        next.insert(s);
                    }
                }
            }
        }
        roots.extend(next.iter().cloned());
        layer = next.into_iter().collect();
    }
    roots.into_iter().collect()
}

fn positive_coords_super(spec: &AlgebraSpec) -> Vec<Vec<i64>> {
    match spec.family {
        Family::Gl(m, n) => {
            let r = m + n - 1;
            let mut out = Vec::new();
            for a in 0..r {
                for b in a + 1..=r {
                    out.push((0..r).map(|k| i64::from(k >= a && k < b)).collect());
                }
            }
            out
        }
        Family::Osp12 => vec![vec![1], vec![2]],
        _ => unreachable!(),
    }
}

/// Deterministic root order: by height, then lexicographically descending
/// coordinates (so `α` precedes `β`).
fn sort_roots(roots: &mut [Root]) {
    roots.sort_by(|a, b| {
        a.height()
            .cmp(&b.height())
            .then_with(|| b.coords.cmp(&a.coords))
    });
}

pub fn build_root_system(spec: &AlgebraSpec) -> Result<RootSystem> {
    let spec = AlgebraSpec::new(spec.family)?;
    let (metric, simple_amb) = spec.ambient();
    let r = spec.rank;
    let bilinear: Vec<Vec<Rat>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    simple_amb[i]
                        .iter()
                        .zip(&simple_amb[j])
                        .zip(&metric)
                        .map(|((a, b), g)| *a * *b * *g)
                        .sum()
                })
                .collect()
        })
        .collect();
    let coords = if spec.is_super() {
        positive_coords_super(&spec)
    } else {
        positive_coords_ordinary(&bilinear)
    };
    let coord_set: BTreeSet<Vec<i64>> = coords.iter().cloned().collect();
    let form = |a: &[i64], b: &[i64]| -> Rat {
        let mut acc = Rat::zero();
        for i in 0..r {
            for j in 0..r {
                acc += bilinear[i][j] * Rat::from_integer(a[i] * b[j]);
            }
        }
        acc
    };
    let mut positive: Vec<Root> = coords
        .iter()
        .map(|c| {
            let parity = (spec.tau.iter().map(|t| c[*t]).sum::<i64>().rem_euclid(2)) as u8;
            let doubled: Vec<i64> = c.iter().map(|x| 2 * x).collect();
            let color = if parity == 0 {
                Color::White
            } else if coord_set.contains(&doubled) {
                Color::Dark
            } else {
                Color::Grey
            };
            Root {
                coords: c.clone(),
                color,
                parity,
                norm: form(c, c),
            }
        })
        .collect();
    sort_roots(&mut positive);
    let doubled_dark: BTreeSet<Vec<i64>> = positive
        .iter()
        .filter(|g| g.color == Color::Dark)
        .map(|g| g.coords.iter().map(|x| 2 * x).collect())
        .collect();
    let reduced: Vec<Root> = positive
        .iter()
        .filter(|g| !doubled_dark.contains(&g.coords))
        .cloned()
        .collect();
    let simple: Vec<Root> = (0..r)
        .map(|i| {
            let c: Vec<i64> = (0..r).map(|k| i64::from(k == i)).collect();
            positive.iter().find(|g| g.coords == c).cloned().unwrap()
        })
        .collect();
    let rho_simple = (0..r)
        .map(|i| bilinear[i][i] / Rat::from_integer(2))
        .collect();
    for g in &positive {
        match g.color {
            Color::Grey if !g.norm.is_zero() => {
                return Err(Error::Internal(format!("grey root {g} with nonzero norm")))
            }
            Color::White | Color::Dark if g.norm.is_zero() => {
                return Err(Error::Internal(format!("root {g} with zero norm")))
            }
            _ => {}
        }
    }
    Ok(RootSystem {
        spec,
        simple,
        bilinear,
        positive,
        reduced,
        rho_simple,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(s: &str) -> RootSystem {
        build_root_system(&s.parse().unwrap()).unwrap()
    }

    fn labels(v: &[Root]) -> Vec<String> {
        v.iter().map(|r| r.to_string()).collect()
    }

    #[test]
    fn root_counts() {
        for (name, n) in [
            ("A1", 1),
            ("A2", 3),
            ("B2", 4),
            ("G2", 6),
            ("A3", 6),
            ("B3", 9),
            ("C3", 9),
            ("D4", 12),
            ("A4", 10),
            ("B4", 16),
            ("A1xA1", 2),
        ] {
            assert_eq!(rs(name).positive.len(), n, "{name}");
        }
    }

    #[test]
    fn rank_two_listings() {
        assert_eq!(labels(&rs("A2").positive), ["α", "β", "α+β"]);
        let g2 = rs("G2");
        let mut l = labels(&g2.positive);
        l.sort();
        let mut want = vec!["α", "α+β", "2α+3β", "α+2β", "α+3β", "β"];
        want.sort();
        assert_eq!(l, want);
        let b2 = rs("B2");
        assert!(b2.find(&[1, 2]).is_some());
        assert!(b2.find(&[2, 1]).is_none());
    }

    #[test]
    fn osp_reduced() {
        let o = rs("osp(1|2)");
        assert_eq!(o.positive.len(), 2);
        assert_eq!(o.positive[0].color, Color::Dark);
        assert_eq!(o.positive[1].color, Color::White);
        assert_eq!(labels(&o.reduced), ["α"]);
        assert_eq!(o.form(&[2], &[1]), Rat::from_integer(4));
    }

    #[test]
    fn grey_and_reduced() {
        let g = rs("gl(1|1)");
        assert_eq!(g.positive.len(), 1);
        assert_eq!(g.reduced[0].color, Color::Grey);
        assert_eq!(g.reduced[0].norm, Rat::zero());
        assert_eq!(g.rho_value(&g.reduced[0]).unwrap(), Rat::zero());
        let a2 = rs("A2");
        assert_eq!(a2.reduced, a2.positive);
        let g21 = rs("gl(2|1)");
        let colors: Vec<Color> = g21.positive.iter().map(|r| r.color).collect();
        assert_eq!(colors, [Color::White, Color::Grey, Color::Grey]);
    }

    #[test]
    fn rho_values() {
        let su2 = rs("A1");
        assert_eq!(su2.rho_value(&su2.positive[0]).unwrap(), Rat::from_integer(1));
        let a2 = rs("A2");
        let ab = a2.find(&[1, 1]).unwrap().clone();
        assert_eq!(a2.rho_value(&ab).unwrap(), Rat::from_integer(2));
        let foreign = Root {
            coords: vec![2, 2],
            color: Color::White,
            parity: 0,
            norm: Rat::zero(),
        };
        assert_eq!(a2.rho_value(&foreign), Err(Error::UnknownRoot("2α+2β".into())));
    }

    #[test]
    fn rho_matches_super_half_sum() {
        for name in ["A2", "B2", "G2", "A3", "C3", "D4", "gl(1|1)", "gl(2|1)", "gl(1|2)", "osp(1|2)"] {
            let s = rs(name);
            let r = s.rank();
            // 2ρ as rational coordinates
            let mut two_rho = vec![Rat::zero(); r];
            for g in &s.positive {
                let sign = if g.is_odd() { -1 } else { 1 };
                for i in 0..r {
                    two_rho[i] += Rat::from_integer(sign * g.coords[i]);
                }
            }
            for g in &s.positive {
                let mut v = Rat::zero();
                for i in 0..r {
                    for j in 0..r {
                        v += two_rho[i] * s.bilinear[i][j] * Rat::from_integer(g.coords[j]);
                    }
                }
                assert_eq!(v / Rat::from_integer(2), s.rho_of(&g.coords), "{name} {g}");
            }
        }
    }

    #[test]
    fn norms_consistent() {
        for name in ["B3", "C4", "G2", "gl(1|2)", "osp(1|2)"] {
            let s = rs(name);
            for g in &s.positive {
                assert_eq!(s.form(&g.coords, &g.coords), g.norm);
                assert_eq!(g.color == Color::White, g.parity == 0);
                if g.color == Color::Dark {
                    let d: Vec<i64> = g.coords.iter().map(|x| 2 * x).collect();
                    assert!(s.find(&d).is_some());
                }
            }
        }
    }

    #[test]
    fn unsupported() {
        assert!("A5".parse::<AlgebraSpec>().is_err());
        assert!("gl(2|2)".parse::<AlgebraSpec>().is_err());
        assert!("E6".parse::<AlgebraSpec>().is_err());
    }
}
