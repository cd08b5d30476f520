//! Coefficients of Taylor-series terms: rational functions of the Cartan
//! variables whose denominators are products of linear forms.

use std::collections::BTreeMap;
use std::fmt::{self, Debug};

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::num::{binomial, Num};
use crate::rational::{fmt_q, parse_q, q, Q};

/// Operations the straightening engine needs from a coefficient ring.
pub trait Coefficient: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_q(c: Q) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Product that may skip normalization; results only feed [`Coefficient::sum`].
    fn mul_raw(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn sum(items: Vec<Self>) -> Self {
        items.iter().fold(Self::zero(), |acc, x| acc.add(x))
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn scale(&self, c: &Q) -> Self {
        self.mul(&Self::from_q(c.clone()))
    }
    /// Substitutes `h_i ↦ h_i + μ_i` (additively for Cartan variables,
    /// `k_i ↦ q^{μ_i} k_i` in the quantum case).
    fn shift(&self, mu: &[i64]) -> Self;
    fn render(&self, names: &[String]) -> String;
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
}

pub const MAX_VARS: usize = 8;

/// Dense exponent vector over at most [`MAX_VARS`] variables.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Mono([u16; MAX_VARS]);

impl Mono {
    pub fn new() -> Self {
        Mono::default()
    }

    pub fn var(v: usize) -> Self {
        assert!(v < MAX_VARS, "too many Cartan variables");
        let mut m = Mono::new();
        m.0[v] = 1;
        m
    }

    pub fn exp(&self, v: usize) -> u32 {
        self.0[v] as u32
    }

    fn with(mut self, v: usize, e: u32) -> Self {
        self.0[v] = u16::try_from(e).expect("exponent overflow");
        self
    }

    /// Nonzero `(variable, exponent)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().enumerate().filter(|(_, e)| **e > 0).map(|(v, e)| (v, *e as u32))
    }

    fn mul(&self, o: &Mono) -> Mono {
        let mut r = *self;
        for (a, b) in r.0.iter_mut().zip(o.0) {
            *a += b;
        }
        r
    }

    fn degree(&self) -> u32 {
        self.0.iter().map(|e| *e as u32).sum()
    }
}

/// Multivariate polynomial over the rationals.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct Poly {
    terms: BTreeMap<Mono, Num>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Q) -> Self {
        let mut p = Poly::zero();
        p.add_term(Mono::new(), c);
        p
    }

    pub fn var(i: usize) -> Self {
        let mut p = Poly::zero();
        p.terms.insert(Mono::var(i), Num::ONE);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, Q)> {
        self.terms.iter().map(|(m, c)| (m, c.to_q()))
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&Mono::new()).map(Num::to_q),
            _ => None,
        }
    }

    fn add_term(&mut self, m: Mono, c: Q) {
        self.add_num(m, Num::from_q(&c));
    }

    fn add_num(&mut self, m: Mono, c: Num) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let (mut r, small) = if self.terms.len() >= o.terms.len() {
            (self.clone(), o)
        } else {
            (o.clone(), self)
        };
        for (m, c) in &small.terms {
            r.add_num(m.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        let c = Num::from_q(c);
        Poly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * &c)).collect(),
        }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut r = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                r.add_num(ma.mul(mb), ca * cb);
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::constant(Q::one()), |acc, _| acc.mul(self))
    }

    /// `x_i ↦ x_i + μ_i`.
    pub fn shift(&self, mu: &[(usize, Q)]) -> Poly {
        let mut cur = self.clone();
        for (var, s) in mu {
            if s.is_zero() {
                continue;
            }
            let s = Num::from_q(s);
            let v = *var;
            let mut next = Poly::zero();
            for (m, c) in &cur.terms {
                let e = m.exp(v);
                if e == 0 {
                    next.add_num(*m, c.clone());
                    continue;
                }
                let mut spow = Num::ONE;
                // Σ_k C(e,k) s^{e−k} x^k, walking k downward from e.
                for k in (0..=e).rev() {
                    next.add_num(m.with(v, k), &(c * &binomial(e, k)) * &spow);
                    spow = &spow * &s;
                }
            }
            cur = next;
        }
        cur
    }

    pub fn eval(&self, values: &[Q]) -> Q {
        self.terms.iter().fold(Q::zero(), |acc, (m, c)| {
            let v = m.iter().fold(c.to_q(), |p, (var, e)| {
                p * num_traits::pow(values[var].clone(), e as usize)
            });
            acc + v
        })
    }

    fn degree_in(&self, v: usize) -> u32 {
        self.terms
            .keys()
            .map(|m| m.exp(v))
            .max()
            .unwrap_or(0)
    }

    /// Exact quotient by a linear form, if it divides.
    fn divide_linear(&self, l: &LinearForm) -> Option<Poly> {
        let v = l.coeffs[0].0;
        let d = self.degree_in(v);
        if d == 0 {
            return None;
        }
        let mut slices: Vec<Poly> = vec![Poly::zero(); d as usize + 1];
        for (m, c) in &self.terms {
            slices[m.exp(v) as usize].add_num(m.with(v, 0), c.clone());
        }
        let mut r = Poly::constant(l.constant.clone());
        for (var, c) in &l.coeffs[1..] {
            r.add_term(Mono::var(*var), c.clone());
        }
        let mut quot: Vec<Poly> = vec![Poly::zero(); d as usize];
        quot[d as usize - 1] = slices[d as usize].clone();
        for k in (1..d as usize).rev() {
            quot[k - 1] = slices[k].sub(&r.mul(&quot[k]));
        }
        if !slices[0].sub(&r.mul(&quot[0])).is_zero() {
            return None;
        }
        let mut out = Poly::zero();
        for (k, p) in quot.into_iter().enumerate() {
            for (m, c) in p.terms {
                out.add_num(m.with(v, k as u32), c);
            }
        }
        Some(out)
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut ts: Vec<(&Mono, Q)> = self.terms().collect();
        ts.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then(b.0.cmp(a.0)));
        let mut out = String::new();
        for (i, (m, c)) in ts.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i > 0 {
                out.push(if neg { '-' } else { '+' });
            } else if neg {
                out.push('-');
            }
            let vars: Vec<String> = m
                .iter()
                .map(|(v, e)| {
                    let n = var_name(names, v);
                    if e == 1 {
                        n
                    } else {
                        format!("{n}^{e}")
                    }
                })
                .collect();
            if vars.is_empty() {
                out.push_str(&fmt_q(&mag));
            } else {
                if !mag.is_one() {
                    out.push_str(&fmt_q(&mag));
                    out.push('*');
                }
                out.push_str(&vars.join("*"));
            }
        }
        out
    }

    fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| json!([m.iter().map(|(v, e)| json!([v, e])).collect::<Vec<_>>(), fmt_q(&c.to_q())]))
                .collect(),
        )
    }

    fn from_json(v: &Value) -> Result<Poly> {
        let bad = || Error::Parse(format!("bad polynomial: {v}"));
        let mut p = Poly::zero();
        for t in v.as_array().ok_or_else(bad)? {
            let mono_v = t.get(0).and_then(Value::as_array).ok_or_else(bad)?;
            let mut mono = Mono::new();
            for ve in mono_v {
                let var = ve.get(0).and_then(Value::as_u64).ok_or_else(bad)? as usize;
                let e = ve.get(1).and_then(Value::as_u64).ok_or_else(bad)?;
                if var >= MAX_VARS || e > u16::MAX as u64 {
                    return Err(bad());
                }
                mono = mono.with(var, mono.exp(var) + e as u32);
            }
            let c = parse_q(t.get(1).and_then(Value::as_str).ok_or_else(bad)?)?;
            p.add_term(mono, c);
        }
        Ok(p)
    }
}

fn var_name(names: &[String], i: usize) -> String {
    names.get(i).cloned().unwrap_or_else(|| format!("x{}", i + 1))
}

/// `c_0 + Σ c_i x_i`, scaled so that the first variable coefficient is 1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearForm {
    coeffs: Vec<(usize, Q)>,
    constant: Q,
}

impl LinearForm {
    /// Normalizes `constant + Σ coeffs`; returns the form and the factor it
    /// was divided by, or `None` for a constant.
    pub fn normalize(coeffs: &[(usize, Q)], constant: Q) -> Option<(LinearForm, Q)> {
        let mut cs: Vec<(usize, Q)> = coeffs.iter().filter(|(_, c)| !c.is_zero()).cloned().collect();
        cs.sort_by_key(|(v, _)| *v);
        let mut merged: Vec<(usize, Q)> = Vec::new();
        for (v, c) in cs {
            match merged.last_mut() {
                Some((w, d)) if *w == v => *d += c,
                _ => merged.push((v, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        let lead = merged.first()?.1.clone();
        let inv = lead.recip();
        Some((
            LinearForm {
                coeffs: merged.into_iter().map(|(v, c)| (v, c * &inv)).collect(),
                constant: constant * &inv,
            },
            lead,
        ))
    }

    pub fn eval(&self, values: &[Q]) -> Q {
        self.coeffs
            .iter()
            .fold(self.constant.clone(), |acc, (v, c)| acc + c * &values[*v])
    }

    fn shifted(&self, mu: &[(usize, Q)]) -> LinearForm {
        let mut c = self.constant.clone();
        for (v, a) in &self.coeffs {
            if let Some((_, s)) = mu.iter().find(|(w, _)| w == v) {
                c += a * s;
            }
        }
        LinearForm {
            coeffs: self.coeffs.clone(),
            constant: c,
        }
    }

    fn as_poly(&self) -> Poly {
        let mut p = Poly::constant(self.constant.clone());
        for (v, c) in &self.coeffs {
            p.add_term(Mono::var(*v), c.clone());
        }
        p
    }

    pub fn render(&self, names: &[String]) -> String {
        self.as_poly().render(names)
    }
}

/// Reduced fraction `num / Π L_k^{m_k}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CartanRational {
    num: Poly,
    den: BTreeMap<LinearForm, u32>,
}

impl CartanRational {
    pub fn poly(p: Poly) -> Self {
        CartanRational {
            num: p,
            den: BTreeMap::new(),
        }
    }

    pub fn var(i: usize) -> Self {
        Self::poly(Poly::var(i))
    }

    /// `constant + Σ c_i x_i`.
    pub fn linear(coeffs: &[(usize, Q)], constant: Q) -> Self {
        let mut p = Poly::constant(constant);
        for (v, c) in coeffs {
            p.add_term(Mono::var(*v), c.clone());
        }
        Self::poly(p)
    }

    /// `1 / (constant + Σ c_i x_i)`; panics on a zero form.
    pub fn inv_linear(coeffs: &[(usize, Q)], constant: Q) -> Self {
        match LinearForm::normalize(coeffs, constant.clone()) {
            Some((l, lead)) => {
                let mut den = BTreeMap::new();
                den.insert(l, 1);
                CartanRational {
                    num: Poly::constant(lead.recip()),
                    den,
                }
            }
            None => {
                assert!(!constant.is_zero(), "inverse of the zero form");
                Self::from_q(constant.recip())
            }
        }
    }

    /// Substitutes `x_var ↦ factor·x_var`.
    pub fn scale_var(&self, var: usize, factor: &Q) -> Self {
        let mut num = Poly::zero();
        for (m, c) in self.num.terms() {
            let e = m.exp(var);
            num.add_term(*m, c * num_traits::pow(factor.clone(), e as usize));
        }
        let mut r = Self::poly(num);
        for (l, m) in &self.den {
            let coeffs: Vec<(usize, Q)> = l
                .coeffs
                .iter()
                .map(|(v, c)| (*v, if *v == var { c * factor } else { c.clone() }))
                .collect();
            let inv = Self::inv_linear(&coeffs, l.constant.clone());
            for _ in 0..*m {
                r = r.mul(&inv);
            }
        }
        r
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> impl Iterator<Item = (&LinearForm, u32)> {
        self.den.iter().map(|(l, m)| (l, *m))
    }

    fn reduce(mut self) -> Self {
        if self.num.is_zero() {
            self.den.clear();
            return self;
        }
        let forms: Vec<LinearForm> = self.den.keys().cloned().collect();
        for l in forms {
            while let Some(m) = self.den.get(&l).copied() {
                match self.num.divide_linear(&l) {
                    Some(qt) => {
                        self.num = qt;
                        if m == 1 {
                            self.den.remove(&l);
                        } else {
                            self.den.insert(l.clone(), m - 1);
                        }
                    }
                    None => break,
                }
            }
        }
        self
    }

    /// Value at the given point; errors when a denominator form vanishes.
    pub fn evaluate(&self, values: &[Q]) -> Result<Q> {
        let mut d = Q::one();
        for (l, m) in &self.den {
            let v = l.eval(values);
            if v.is_zero() {
                return Err(Error::SingularWeight {
                    weight: format!(
                        "[{}]",
                        values.iter().map(fmt_q).collect::<Vec<_>>().join(", ")
                    ),
                    form: l.render(&[]),
                });
            }
            d *= num_traits::pow(v, *m as usize);
        }
        Ok(self.num.eval(values) / d)
    }

    pub fn as_constant(&self) -> Option<Q> {
        if self.den.is_empty() {
            self.num.as_constant()
        } else {
            None
        }
    }
}

impl Coefficient for CartanRational {
    fn zero() -> Self {
        Self::poly(Poly::zero())
    }

    fn one() -> Self {
        Self::from_q(Q::one())
    }

    fn from_q(c: Q) -> Self {
        Self::poly(Poly::constant(c))
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return CartanRational {
                num: self.num.add(&o.num),
                den: self.den.clone(),
            }
            .reduce();
        }
        let mut den = self.den.clone();
        for (l, m) in &o.den {
            let e = den.entry(l.clone()).or_insert(0);
            *e = (*e).max(*m);
        }
        let lift = |x: &CartanRational| {
            den.iter().fold(x.num.clone(), |acc, (l, m)| {
                let have = x.den.get(l).copied().unwrap_or(0);
                acc.mul(&l.as_poly().pow(m - have))
            })
        };
        CartanRational {
            num: lift(self).add(&lift(o)),
            den,
        }
        .reduce()
    }

    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if let Some(c) = self.as_constant() {
            return o.scale(&c);
        }
        if let Some(c) = o.as_constant() {
            return self.scale(&c);
        }
        let mut den = self.den.clone();
        for (l, m) in &o.den {
            *den.entry(l.clone()).or_insert(0) += m;
        }
        CartanRational {
            num: self.num.mul(&o.num),
            den,
        }
        .reduce()
    }

    fn mul_raw(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut den = self.den.clone();
        for (l, m) in &o.den {
            *den.entry(l.clone()).or_insert(0) += m;
        }
        CartanRational {
            num: self.num.mul(&o.num),
            den,
        }
    }

    fn sum(items: Vec<Self>) -> Self {
        let mut groups: BTreeMap<BTreeMap<LinearForm, u32>, Poly> = BTreeMap::new();
        for x in items {
            if x.num.is_zero() {
                continue;
            }
            match groups.entry(x.den) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(x.num);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let s = e.get().add(&x.num);
                    *e.get_mut() = s;
                }
            }
        }
        groups.retain(|_, p| !p.is_zero());
        if groups.len() <= 1 {
            return match groups.into_iter().next() {
                Some((den, num)) => CartanRational { num, den }.reduce(),
                None => Self::zero(),
            };
        }
        let mut den: BTreeMap<LinearForm, u32> = BTreeMap::new();
        for d in groups.keys() {
            for (l, m) in d {
                let e = den.entry(l.clone()).or_insert(0);
                *e = (*e).max(*m);
            }
        }
        let mut num = Poly::zero();
        for (d, p) in groups {
            let lifted = den.iter().fold(p, |acc, (l, m)| {
                let have = d.get(l).copied().unwrap_or(0);
                if *m > have {
                    acc.mul(&l.as_poly().pow(m - have))
                } else {
                    acc
                }
            });
            num = num.add(&lifted);
        }
        CartanRational { num, den }.reduce()
    }

    fn neg(&self) -> Self {
        CartanRational {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        CartanRational {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    fn shift(&self, mu: &[i64]) -> Self {
        let mu: Vec<(usize, Q)> = mu
            .iter()
            .enumerate()
            .filter(|(_, s)| **s != 0)
            .map(|(i, s)| (i, q(*s)))
            .collect();
        if mu.is_empty() {
            return self.clone();
        }
        CartanRational {
            num: self.num.shift(&mu),
            den: self.den.iter().map(|(l, m)| (l.shifted(&mu), *m)).collect(),
        }
    }

    fn render(&self, names: &[String]) -> String {
        let num = self.num.render(names);
        if self.den.is_empty() {
            return num;
        }
        let num = if self.num.terms.len() > 1 {
            format!("({num})")
        } else {
            num
        };
        let factors: Vec<String> = self
            .den
            .iter()
            .map(|(l, m)| {
                if *m == 1 {
                    format!("({})", l.render(names))
                } else {
                    format!("({})^{m}", l.render(names))
                }
            })
            .collect();
        if factors.len() == 1 {
            format!("{num}/{}", factors[0])
        } else {
            format!("{num}/({})", factors.join("*"))
        }
    }

    fn to_json(&self) -> Value {
        json!({
            "num": self.num.to_json(),
            "den": self.den.iter().map(|(l, m)| json!({
                "form": l.as_poly().to_json(),
                "mult": m,
            })).collect::<Vec<_>>(),
        })
    }

    fn from_json(v: &Value) -> Result<Self> {
        let bad = || Error::Parse(format!("bad coefficient: {v}"));
        let num = Poly::from_json(v.get("num").ok_or_else(bad)?)?;
        let mut r = Self::poly(num);
        for f in v.get("den").and_then(Value::as_array).ok_or_else(bad)? {
            let p = Poly::from_json(f.get("form").ok_or_else(bad)?)?;
            let m = f.get("mult").and_then(Value::as_u64).ok_or_else(bad)?;
            let mut coeffs = Vec::new();
            let mut constant = Q::zero();
            for (mono, c) in p.terms() {
                match mono.iter().collect::<Vec<_>>().as_slice() {
                    [] => constant = c.clone(),
                    [(v, 1)] => coeffs.push((*v, c.clone())),
                    _ => return Err(bad()),
                }
            }
            let inv = Self::inv_linear(&coeffs, constant);
            for _ in 0..m {
                r = r.mul(&inv);
            }
        }
        Ok(r)
    }
}

impl Debug for CartanRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&[]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;
    use proptest::prelude::*;

    fn h() -> CartanRational {
        CartanRational::var(0)
    }

    fn inv(c: i64) -> CartanRational {
        CartanRational::inv_linear(&[(0, q(1))], q(c))
    }

    fn names() -> Vec<String> {
        vec!["h_a".into(), "h_b".into()]
    }

    #[test]
    fn examples() {
        assert_eq!(inv(1).add(&inv(1)), inv(1).scale(&q(2)));
        let hp2 = CartanRational::linear(&[(0, q(1))], q(2));
        assert_eq!(hp2.mul(&inv(2)), CartanRational::one());
        assert_eq!(inv(2).mul(&inv(3)).render(&names()), "1/((h_a+2)*(h_a+3))");
        assert_eq!(inv(1).render(&names()), "1/(h_a+1)");
        assert_eq!(h().shift(&[2]), hp2);
        assert_eq!(inv(1).shift(&[-2]), inv(-1));
        assert_eq!(inv(1).shift(&[0]), inv(1));
    }

    #[test]
    fn evaluation() {
        assert_eq!(inv(2).evaluate(&[q(2)]).unwrap(), qf(1, 4));
        assert!(matches!(inv(2).evaluate(&[q(-2)]), Err(Error::SingularWeight { .. })));
    }

    #[test]
    fn scaled_forms_normalize() {
        // 1/(2h+4) = (1/2)·1/(h+2)
        let a = CartanRational::inv_linear(&[(0, q(2))], q(4));
        assert_eq!(a, inv(2).scale(&qf(1, 2)));
        let b = CartanRational::inv_linear(&[(0, q(-1)), (1, q(1))], q(3));
        assert_eq!(b.render(&names()), "-1/(h_a-h_b-3)");
    }

    #[test]
    fn json_round_trip() {
        let x = inv(2).mul(&inv(3)).add(&CartanRational::var(1)).mul(&inv(2));
        assert_eq!(CartanRational::from_json(&x.to_json()).unwrap(), x);
    }

    #[test]
    fn multivariate_cancellation() {
        // (h_a + h_b + 1)(h_a − 3) / ((h_a + h_b + 1)(h_a + 1)) = (h_a − 3)/(h_a + 1)
        let l = CartanRational::linear(&[(0, q(1)), (1, q(1))], q(1));
        let li = CartanRational::inv_linear(&[(0, q(1)), (1, q(1))], q(1));
        let m = CartanRational::linear(&[(0, q(1))], q(-3));
        let x = l.mul(&m).mul(&li).mul(&inv(1));
        assert_eq!(x, m.mul(&inv(1)));
    }

    fn arb() -> impl Strategy<Value = CartanRational> {
        (
            prop::collection::vec((-3i64..4, -3i64..4, -3i64..4), 1..3),
            prop::collection::vec((0i64..3, -2i64..3, -4i64..5), 0..3),
        )
            .prop_map(|(nums, dens)| {
                let mut x = CartanRational::zero();
                for (a, b, c) in nums {
                    x = x.add(&CartanRational::linear(&[(0, q(a)), (1, q(b))], q(c)));
                }
                for (a, b, c) in dens {
                    if a == 0 && b == 0 {
                        continue;
                    }
                    x = x.mul(&CartanRational::inv_linear(&[(0, q(a)), (1, q(b))], q(c)));
                }
                x
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn field_axioms(a in arb(), b in arb(), c in arb()) {
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert!(a.sub(&a).is_zero());
        }

        #[test]
        fn shift_inverse_and_evaluation(a in arb(), b in arb(), s in -3i64..4, t in -3i64..4, x in 5i64..40, y in -40i64..-5) {
            prop_assert_eq!(a.shift(&[s, t]).shift(&[-s, -t]), a.clone());
            let pt = [q(x), q(y)];
            if let (Ok(va), Ok(vb)) = (a.evaluate(&pt), b.evaluate(&pt)) {
                prop_assert_eq!(a.mul(&b).evaluate(&pt).unwrap(), va.clone() * vb.clone());
                prop_assert_eq!(a.add(&b).evaluate(&pt).unwrap(), va + vb);
            }
        }
    }
}
