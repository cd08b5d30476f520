//! Coefficients of the quantum Taylor extension: Laurent polynomials in
//! `q` and `k_i = q^{h_i}` over denominators built from polynomials in `q`
//! and binomials `k^γ q^c − s·k^{−γ} q^{−c}`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::qpoly::{UPoly, URational};
use crate::rational::{fmt_q, parse_q, Q};

/// Exponents `[e_q, e_{k_1}, …]` with trailing zeros trimmed.
pub type LMono = Vec<i32>;

fn trim(mut v: Vec<i32>) -> Vec<i32> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn mono_add(a: &[i32], b: &[i32]) -> LMono {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0))
            .collect(),
    )
}

fn exp(m: &[i32], i: usize) -> i32 {
    m.get(i).copied().unwrap_or(0)
}

/// Laurent polynomial in `q, k_1, …, k_r`.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct LPoly {
    terms: BTreeMap<LMono, Q>,
}

impl LPoly {
    pub fn zero() -> Self {
        LPoly::default()
    }

    pub fn monomial(c: Q, m: LMono) -> Self {
        let mut p = LPoly::zero();
        p.add_term(trim(m), c);
        p
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial(c, Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: LMono, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        LPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LPoly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = LPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                r.add_term(mono_add(ma, mb), ca * cb);
            }
        }
        r
    }

    pub fn mul_mono(&self, c: &Q, m: &[i32]) -> Self {
        LPoly {
            terms: self.terms.iter().map(|(k, v)| (mono_add(k, m), v * c)).collect(),
        }
    }

    pub fn from_upoly(p: &UPoly) -> Self {
        let mut r = LPoly::zero();
        for (e, c) in p.coeffs().iter().enumerate() {
            r.add_term(trim(vec![e as i32]), c.clone());
        }
        r
    }

    pub fn has_k(&self) -> bool {
        self.terms.keys().any(|m| m.len() > 1)
    }

    /// Groups terms by their `k` part; each group is a polynomial in `q`
    /// after removing its lowest power of `q`.
    fn q_groups(&self) -> BTreeMap<Vec<i32>, (i32, UPoly)> {
        let mut raw: BTreeMap<Vec<i32>, Vec<(i32, Q)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let k: Vec<i32> = m.iter().skip(1).copied().collect();
            raw.entry(k).or_default().push((exp(m, 0), c.clone()));
        }
        raw.into_iter()
            .map(|(k, ts)| {
                let lo = ts.iter().map(|(e, _)| *e).min().unwrap();
                let hi = ts.iter().map(|(e, _)| *e).max().unwrap();
                let mut c = vec![Q::zero(); (hi - lo) as usize + 1];
                for (e, v) in ts {
                    c[(e - lo) as usize] += v;
                }
                (k, (lo, UPoly::from_coeffs(c)))
            })
            .collect()
    }

    fn from_groups(groups: BTreeMap<Vec<i32>, (i32, UPoly)>) -> Self {
        let mut r = LPoly::zero();
        for (k, (lo, p)) in groups {
            for (e, c) in p.coeffs().iter().enumerate() {
                let mut m = vec![lo + e as i32];
                m.extend(k.iter().copied());
                r.add_term(trim(m), c.clone());
            }
        }
        r
    }

    /// Exact quotient by `x_v^d − t` where `t` is a monomial with coefficient.
    fn divide_binomial(&self, v: usize, d: i32, t_coeff: &Q, t_mono: &[i32]) -> Option<LPoly> {
        let mut slices: BTreeMap<i32, LPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = exp(m, v);
            let mut rest = m.clone();
            if rest.len() > v {
                rest[v] = 0;
            }
            slices.entry(e).or_default().add_term(trim(rest), c.clone());
        }
        let lo = *slices.keys().next()?;
        let mut quot = LPoly::zero();
        while let Some((&e, _)) = slices.iter().next_back() {
            if e < lo + d {
                break;
            }
            let c = slices.remove(&e).unwrap();
            if c.is_zero() {
                continue;
            }
            let mut shift = vec![0; v + 1];
            shift[v] = e - d;
            for (m, a) in &c.terms {
                quot.add_term(mono_add(m, &shift), a.clone());
            }
            let moved = c.mul_mono(t_coeff, t_mono);
            let slot = slices.entry(e - d).or_default();
            *slot = slot.add(&moved);
        }
        slices.values().all(LPoly::is_zero).then_some(quot)
    }

    pub fn eval_weight(&self, weight: &[i64]) -> URational {
        let mut acc = URational::zero();
        for (m, c) in &self.terms {
            let mut e = exp(m, 0) as i64;
            for (i, w) in weight.iter().enumerate() {
                e += exp(m, i + 1) as i64 * w;
            }
            acc = acc.add(&URational::q_power(c.clone(), e));
        }
        acc
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if i > 0 {
                out.push(if neg { '-' } else { '+' });
            } else if neg {
                out.push('-');
            }
            let mag = c.abs();
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, e)| **e != 0)
                .map(|(j, e)| {
                    let n = if j == 0 {
                        "q".to_string()
                    } else {
                        names.get(j - 1).cloned().unwrap_or_else(|| format!("k{j}"))
                    };
                    if *e == 1 {
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
        Value::Array(self.terms.iter().map(|(m, c)| json!([m, fmt_q(c)])).collect())
    }

    fn from_json(v: &Value) -> Result<Self> {
        let bad = || Error::Parse(format!("bad Laurent polynomial: {v}"));
        let mut p = LPoly::zero();
        for t in v.as_array().ok_or_else(bad)? {
            let m: Vec<i32> = serde_json::from_value(t.get(0).cloned().ok_or_else(bad)?).map_err(|_| bad())?;
            let c = parse_q(t.get(1).and_then(Value::as_str).ok_or_else(bad)?)?;
            p.add_term(trim(m), c);
        }
        Ok(p)
    }
}

/// `k^γ q^c − s·k^{−γ} q^{−c}`, stored with the first nonzero entry of `γ`
/// positive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Binomial {
    pub gamma: Vec<i32>,
    pub c: i32,
    pub s: i8,
}

impl Binomial {
    /// Normalized binomial and the sign relating it to the input.
    pub fn normalize(gamma: Vec<i32>, c: i32, s: i8) -> (Binomial, i8) {
        let gamma = trim(gamma);
        match gamma.iter().find(|x| **x != 0) {
            Some(x) if *x < 0 => (
                Binomial {
                    gamma: gamma.iter().map(|x| -x).collect(),
                    c: -c,
                    s,
                },
                -s,
            ),
            _ => (Binomial { gamma, c, s }, 1),
        }
    }

    fn as_lpoly(&self) -> LPoly {
        let mut a = vec![self.c];
        a.extend(self.gamma.iter().copied());
        let b: Vec<i32> = a.iter().map(|x| -x).collect();
        let mut p = LPoly::monomial(Q::one(), a);
        p.add_term(trim(b), Q::from_integer((-self.s as i64).into()));
        p
    }

    fn shifted(&self, mu: &[i64]) -> Binomial {
        let d: i64 = self.gamma.iter().zip(mu).map(|(g, m)| *g as i64 * m).sum();
        Binomial {
            gamma: self.gamma.clone(),
            c: self.c + d as i32,
            s: self.s,
        }
    }

    fn render(&self, names: &[String]) -> String {
        self.as_lpoly().render(names)
    }
}

/// `num / (qden · Π B^m)`.
#[derive(Clone)]
pub struct QRational {
    num: LPoly,
    qden: UPoly,
    bins: BTreeMap<Binomial, u32>,
}

impl QRational {
    pub fn lpoly(p: LPoly) -> Self {
        QRational {
            num: p,
            qden: UPoly::one(),
            bins: BTreeMap::new(),
        }
    }

    /// `c·q^{e_q} k^{e_k}`.
    pub fn monomial(c: Q, m: LMono) -> Self {
        Self::lpoly(LPoly::monomial(c, m))
    }

    pub fn q_power(e: i32) -> Self {
        Self::monomial(Q::one(), vec![e])
    }

    pub fn from_urational(r: &URational) -> Self {
        let (d, v) = r.denom().strip_q();
        let l = d.lead();
        QRational {
            num: LPoly::from_upoly(r.numer()).mul_mono(&l.recip(), &[-(v as i32)]),
            qden: d.monic(),
            bins: BTreeMap::new(),
        }
        .reduce()
    }

    /// Reciprocal of a Laurent polynomial in `q` alone.
    pub fn inv_q_laurent(p: &LPoly) -> Self {
        assert!(!p.has_k() && !p.is_zero());
        let g = p.q_groups();
        let (lo, up) = g.values().next().unwrap().clone();
        let (stripped, v) = up.strip_q();
        let l = stripped.lead();
        QRational {
            num: LPoly::monomial(l.recip(), vec![-(lo + v as i32)]),
            qden: stripped.monic(),
            bins: BTreeMap::new(),
        }
        .reduce()
    }

    /// `1 / (k^γ q^c − s·k^{−γ} q^{−c})`.
    pub fn inv_binomial(gamma: Vec<i32>, c: i32, s: i8) -> Self {
        let (b, sign) = Binomial::normalize(gamma, c, s);
        if b.gamma.is_empty() {
            let p = b.as_lpoly();
            assert!(!p.is_zero(), "inverse of a vanishing binomial");
            return Self::inv_q_laurent(&p).scale(&Q::from_integer((sign as i64).into()));
        }
        let mut bins = BTreeMap::new();
        bins.insert(b, 1);
        QRational {
            num: LPoly::constant(Q::from_integer((sign as i64).into())),
            qden: UPoly::one(),
            bins,
        }
    }

    pub fn numerator(&self) -> &LPoly {
        &self.num
    }

    pub fn is_k_free(&self) -> bool {
        !self.num.has_k() && self.bins.is_empty()
    }

    fn reduce(mut self) -> Self {
        if self.num.is_zero() {
            return Self::zero();
        }
        let keys: Vec<Binomial> = self.bins.keys().cloned().collect();
        for b in keys {
            while let Some(m) = self.bins.get(&b).copied() {
                let v = 1 + b.gamma.iter().position(|x| *x != 0).unwrap();
                let d = 2 * b.gamma[v - 1];
                // k^{2γ} q^{2c} − s = u·(x^d − s/u)
                let mut u = vec![2 * b.c];
                u.extend(b.gamma.iter().map(|x| 2 * x));
                u[v] = 0;
                let t_mono: Vec<i32> = u.iter().map(|x| -x).collect();
                let t = Q::from_integer((b.s as i64).into());
                match self.num.divide_binomial(v, d, &t, &t_mono) {
                    Some(qt) => {
                        // N/B = (N/(x^d − t))·k^γ q^c / u
                        let mut f = vec![b.c];
                        f.extend(b.gamma.iter().copied());
                        let f: Vec<i32> = f.iter().zip(u.iter().chain(std::iter::repeat(&0))).map(|(a, b)| a - b).collect();
                        self.num = qt.mul_mono(&Q::one(), &f);
                        if m == 1 {
                            self.bins.remove(&b);
                        } else {
                            self.bins.insert(b.clone(), m - 1);
                        }
                    }
                    None => break,
                }
            }
        }
        if self.qden.degree().unwrap_or(0) > 0 {
            let groups = self.num.q_groups();
            let mut g = self.qden.clone();
            for (_, p) in groups.values() {
                g = g.gcd(p);
                if g.degree() == Some(0) {
                    break;
                }
            }
            if g.degree().unwrap_or(0) > 0 {
                let groups = groups
                    .into_iter()
                    .map(|(k, (lo, p))| (k, (lo, p.exact_div(&g).unwrap())))
                    .collect();
                self.num = LPoly::from_groups(groups);
                self.qden = self.qden.exact_div(&g).unwrap();
            }
        }
        self
    }

    /// Value on a weight: `k_i ↦ q^{λ_i}`.
    pub fn evaluate(&self, weight: &[i64]) -> Result<URational> {
        let mut den = URational::new(self.qden.clone(), UPoly::one());
        for (b, m) in &self.bins {
            let v = b.as_lpoly().eval_weight(weight);
            if v.is_zero() {
                return Err(Error::SingularWeight {
                    weight: format!("{weight:?}"),
                    form: b.render(&[]),
                });
            }
            for _ in 0..*m {
                den = den.mul(&v);
            }
        }
        Ok(self.num.eval_weight(weight).div(&den))
    }

    /// The value as a function of `q` alone, if it has no `k` dependence.
    pub fn as_urational(&self) -> Option<URational> {
        if !self.is_k_free() {
            return None;
        }
        self.evaluate(&[]).ok()
    }
}

impl PartialEq for QRational {
    fn eq(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }
}

impl Coefficient for QRational {
    fn zero() -> Self {
        Self::lpoly(LPoly::zero())
    }

    fn one() -> Self {
        Self::from_q(Q::one())
    }

    fn from_q(c: Q) -> Self {
        Self::lpoly(LPoly::constant(c))
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
        if self.qden == o.qden && self.bins == o.bins {
            return QRational {
                num: self.num.add(&o.num),
                qden: self.qden.clone(),
                bins: self.bins.clone(),
            }
            .reduce();
        }
        let g = self.qden.gcd(&o.qden);
        let qden = self.qden.mul(&o.qden).exact_div(&g).unwrap();
        let mut bins = self.bins.clone();
        for (b, m) in &o.bins {
            let e = bins.entry(b.clone()).or_insert(0);
            *e = (*e).max(*m);
        }
        let lift = |x: &QRational| {
            let mut n = x.num.mul(&LPoly::from_upoly(&qden.exact_div(&x.qden).unwrap()));
            for (b, m) in &bins {
                let have = x.bins.get(b).copied().unwrap_or(0);
                for _ in have..*m {
                    n = n.mul(&b.as_lpoly());
                }
            }
            n
        };
        QRational {
            num: lift(self).add(&lift(o)),
            qden,
            bins,
        }
        .reduce()
    }

    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut bins = self.bins.clone();
        for (b, m) in &o.bins {
            *bins.entry(b.clone()).or_insert(0) += m;
        }
        let simple = (self.bins.is_empty() && self.qden.degree() == Some(0) && self.num.terms.len() == 1)
            || (o.bins.is_empty() && o.qden.degree() == Some(0) && o.num.terms.len() == 1);
        let r = QRational {
            num: self.num.mul(&o.num),
            qden: self.qden.mul(&o.qden),
            bins,
        };
        if simple {
            r
        } else {
            r.reduce()
        }
    }

    fn neg(&self) -> Self {
        QRational {
            num: self.num.neg(),
            qden: self.qden.clone(),
            bins: self.bins.clone(),
        }
    }

    fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        QRational {
            num: self.num.scale(c),
            qden: self.qden.clone(),
            bins: self.bins.clone(),
        }
    }

    fn shift(&self, mu: &[i64]) -> Self {
        if mu.iter().all(|x| *x == 0) {
            return self.clone();
        }
        let num = LPoly {
            terms: self
                .num
                .terms
                .iter()
                .map(|(m, c)| {
                    let d: i64 = mu.iter().enumerate().map(|(i, s)| exp(m, i + 1) as i64 * s).sum();
                    let mut m2 = m.clone();
                    if m2.is_empty() {
                        m2.push(0);
                    }
                    m2[0] += d as i32;
                    (trim(m2), c.clone())
                })
                .collect(),
        };
        QRational {
            num,
            qden: self.qden.clone(),
            bins: self.bins.iter().map(|(b, m)| (b.shifted(mu), *m)).collect(),
        }
    }

    fn render(&self, names: &[String]) -> String {
        let num = self.num.render(names);
        let mut den: Vec<String> = Vec::new();
        if self.qden.degree().unwrap_or(0) > 0 || !self.qden.lead().is_one() {
            den.push(format!("({})", self.qden.render("q")));
        }
        for (b, m) in &self.bins {
            let s = format!("({})", b.render(names));
            den.push(if *m == 1 { s } else { format!("{s}^{m}") });
        }
        let num = if self.num.terms.len() > 1 && !den.is_empty() {
            format!("({num})")
        } else {
            num
        };
        match den.len() {
            0 => num,
            1 => format!("{num}/{}", den[0]),
            _ => format!("{num}/({})", den.join("*")),
        }
    }

    fn to_json(&self) -> Value {
        json!({
            "num": self.num.to_json(),
            "qden": self.qden.coeffs().iter().map(fmt_q).collect::<Vec<_>>(),
            "bins": self.bins.iter().map(|(b, m)| json!({
                "gamma": b.gamma, "c": b.c, "s": b.s, "mult": m,
            })).collect::<Vec<_>>(),
        })
    }

    fn from_json(v: &Value) -> Result<Self> {
        let bad = || Error::Parse(format!("bad quantum coefficient: {v}"));
        let num = LPoly::from_json(v.get("num").ok_or_else(bad)?)?;
        let qden = UPoly::from_coeffs(
            v.get("qden")
                .and_then(Value::as_array)
                .ok_or_else(bad)?
                .iter()
                .map(|c| parse_q(c.as_str().unwrap_or("")))
                .collect::<Result<_>>()?,
        );
        if qden.is_zero() {
            return Err(bad());
        }
        let mut bins = BTreeMap::new();
        for b in v.get("bins").and_then(Value::as_array).ok_or_else(bad)? {
            let gamma: Vec<i32> = serde_json::from_value(b.get("gamma").cloned().ok_or_else(bad)?).map_err(|_| bad())?;
            let c = b.get("c").and_then(Value::as_i64).ok_or_else(bad)? as i32;
            let s = b.get("s").and_then(Value::as_i64).ok_or_else(bad)? as i8;
            let m = b.get("mult").and_then(Value::as_u64).ok_or_else(bad)? as u32;
            let (nb, sign) = Binomial::normalize(gamma, c, s);
            if sign != 1 || nb.gamma.is_empty() {
                return Err(bad());
            }
            bins.insert(nb, m);
        }
        Ok(QRational { num, qden, bins }.reduce())
    }
}

impl fmt::Debug for LPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&[]))
    }
}

impl fmt::Debug for QRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&[]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn k(e: i32) -> QRational {
        QRational::monomial(Q::one(), vec![0, e])
    }

    #[test]
    fn binomial_cancels() {
        // (k q² − k⁻¹ q⁻²) / (k q² − k⁻¹ q⁻²) = 1
        let b = QRational::lpoly(Binomial::normalize(vec![1], 2, 1).0.as_lpoly());
        let x = b.mul(&QRational::inv_binomial(vec![1], 2, 1));
        assert!(x.is_k_free());
        assert_eq!(x.as_urational().unwrap(), URational::one());
        // negative orientation: 1/(k⁻¹ q⁻² − k q²) = −1/(k q² − k⁻¹ q⁻²)
        assert_eq!(QRational::inv_binomial(vec![-1], -2, 1), QRational::inv_binomial(vec![1], 2, 1).neg());
    }

    #[test]
    fn shift_rule() {
        // k ↦ q² k
        assert_eq!(k(1).shift(&[2]), k(1).mul(&QRational::q_power(2)));
        let b = QRational::inv_binomial(vec![1], 0, 1);
        assert_eq!(b.shift(&[2]).shift(&[-2]), b);
        assert_eq!(b.shift(&[1]), QRational::inv_binomial(vec![1], 1, 1));
    }

    #[test]
    fn evaluation_and_limit() {
        // (q − q⁻¹)/(k q² − k⁻¹ q⁻²) at h = 2 tends to 1/4
        let num = QRational::lpoly(LPoly::monomial(q(1), vec![1]).add(&LPoly::monomial(q(-1), vec![-1])));
        let phi = num.mul(&QRational::inv_binomial(vec![1], 2, 1));
        let v = phi.evaluate(&[2]).unwrap();
        assert_eq!(v.at_one().unwrap(), crate::rational::qf(1, 4));
        assert!(QRational::inv_binomial(vec![1], 0, 1).evaluate(&[0]).is_err());
    }

    #[test]
    fn q_content_cancels() {
        // (q² − 1)·(1/(q − 1)) = q + 1
        let a = QRational::lpoly(LPoly::monomial(q(1), vec![2]).add(&LPoly::constant(q(-1))));
        let b = QRational::inv_q_laurent(&LPoly::monomial(q(1), vec![1]).add(&LPoly::constant(q(-1))));
        let c = a.mul(&b);
        assert_eq!(c.qden, UPoly::one());
        assert_eq!(c, QRational::lpoly(LPoly::monomial(q(1), vec![1]).add(&LPoly::constant(q(1)))));
    }

    #[test]
    fn json_round_trip() {
        let x = k(2)
            .add(&QRational::inv_binomial(vec![1, 1], 3, -1))
            .mul(&QRational::inv_q_laurent(&LPoly::monomial(q(1), vec![2]).add(&LPoly::constant(q(1)))));
        assert_eq!(QRational::from_json(&x.to_json()).unwrap(), x);
    }
}
