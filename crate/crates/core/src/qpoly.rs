//! Univariate polynomials and rational functions in `q` over the rationals.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, Q};

/// Dense coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UPoly {
    c: Vec<Q>,
}

impl UPoly {
    pub fn zero() -> Self {
        UPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(v: Q) -> Self {
        Self::from_coeffs(vec![v])
    }

    /// `c·q^e`.
    pub fn monomial(v: Q, e: usize) -> Self {
        let mut c = vec![Q::zero(); e + 1];
        c[e] = v;
        Self::from_coeffs(c)
    }

    pub fn from_coeffs(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        UPoly { c }
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> Q {
        self.c.last().cloned().unwrap_or_else(Q::zero)
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> usize {
        self.c.iter().position(|x| !x.is_zero()).unwrap_or(0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::from_coeffs(
            (0..n)
                .map(|i| {
                    let a = self.c.get(i).cloned().unwrap_or_else(Q::zero);
                    let b = o.c.get(i).cloned().unwrap_or_else(Q::zero);
                    a + b
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        UPoly {
            c: self.c.iter().map(|x| -x).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, v: &Q) -> Self {
        Self::from_coeffs(self.c.iter().map(|x| x * v).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![Q::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::from_coeffs(c)
    }

    pub fn shift_up(&self, e: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![Q::zero(); e];
        c.extend(self.c.iter().cloned());
        UPoly { c }
    }

    /// Drops the factor `q^valuation`.
    pub fn strip_q(&self) -> (Self, usize) {
        let v = self.valuation();
        (UPoly { c: self.c[v..].to_vec() }, v)
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut r = self.c.clone();
        let dd = d.c.len() - 1;
        if r.len() < d.c.len() {
            return (Self::zero(), self.clone());
        }
        let inv = d.lead().recip();
        let mut quot = vec![Q::zero(); r.len() - dd];
        for i in (0..quot.len()).rev() {
            let f = &r[i + dd] * &inv;
            if f.is_zero() {
                continue;
            }
            for (j, b) in d.c.iter().enumerate() {
                r[i + j] -= &f * b;
            }
            quot[i] = f;
        }
        (Self::from_coeffs(quot), Self::from_coeffs(r))
    }

    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (qt, r) = self.divrem(d);
        r.is_zero().then_some(qt)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.lead().recip())
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.c.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (e, c) in self.c.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push(if neg { '-' } else { '+' });
            }
            let mag = c.abs();
            match e {
                0 => out.push_str(&fmt_q(&mag)),
                _ => {
                    if !mag.is_one() {
                        out.push_str(&fmt_q(&mag));
                        out.push('*');
                    }
                    out.push_str(var);
                    if e > 1 {
                        out.push_str(&format!("^{e}"));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("q"))
    }
}

/// Reduced fraction of polynomials in `q` with a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct URational {
    num: UPoly,
    den: UPoly,
}

impl URational {
    pub fn new(num: UPoly, den: UPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let num = num.exact_div(&g).unwrap();
        let den = den.exact_div(&g).unwrap();
        let l = den.lead().recip();
        URational {
            num: num.scale(&l),
            den: den.scale(&l),
        }
    }

    pub fn zero() -> Self {
        URational {
            num: UPoly::zero(),
            den: UPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(v: Q) -> Self {
        Self::new(UPoly::constant(v), UPoly::one())
    }

    /// `c·q^e` for any integer `e`.
    pub fn q_power(c: Q, e: i64) -> Self {
        if e >= 0 {
            Self::new(UPoly::monomial(c, e as usize), UPoly::one())
        } else {
            Self::new(UPoly::constant(c), UPoly::monomial(Q::one(), (-e) as usize))
        }
    }

    pub fn numer(&self) -> &UPoly {
        &self.num
    }

    pub fn denom(&self) -> &UPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(self.num.add(&o.num), self.den.clone());
        }
        Self::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn neg(&self) -> Self {
        URational {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn inv(&self) -> Self {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }

    /// Value at `q = x`; errors if the reduced denominator vanishes there.
    pub fn eval(&self, x: &Q) -> Result<Q> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::SingularAtOne(self.render()));
        }
        Ok(self.num.eval(x) / d)
    }

    pub fn at_one(&self) -> Result<Q> {
        self.eval(&Q::one())
    }

    pub fn render(&self) -> String {
        if self.den == UPoly::one() {
            return self.num.render("q");
        }
        format!("({})/({})", self.num.render("q"), self.den.render("q"))
    }
}

impl fmt::Debug for URational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn p(c: &[i64]) -> UPoly {
        UPoly::from_coeffs(c.iter().map(|x| q(*x)).collect())
    }

    #[test]
    fn gcd_and_division() {
        // (q−1)(q+2) and (q−1)(q−3)
        let a = p(&[-2, 1, 1]);
        let b = p(&[3, -4, 1]);
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
        assert_eq!(a.exact_div(&p(&[-1, 1])), Some(p(&[2, 1])));
        assert_eq!(a.exact_div(&p(&[1, 1])), None);
    }

    #[test]
    fn rational_limits() {
        // (q²−1)/(q−1) → 2 at q = 1
        let r = URational::new(p(&[-1, 0, 1]), p(&[-1, 1]));
        assert_eq!(r.at_one().unwrap(), q(2));
        let s = URational::new(p(&[1]), p(&[-1, 1]));
        assert!(matches!(s.at_one(), Err(Error::SingularAtOne(_))));
        assert_eq!(URational::q_power(q(1), -2).mul(&URational::q_power(q(1), 2)), URational::one());
    }
}
