//! Rational numbers kept in machine words while they fit, used for
//! polynomial coefficients.

use std::cmp::Ordering;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use crate::rational::Q;

/// Canonical: `Small(n, d)` with `d > 0` and `gcd(n, d) = 1` whenever the
/// value fits, `Big` otherwise.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Num {
    Small(i64, i64),
    Big(Box<Q>),
}

fn gcd_u(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Num {
    pub const ZERO: Num = Num::Small(0, 1);
    pub const ONE: Num = Num::Small(1, 1);

    pub fn int(n: i64) -> Num {
        Num::Small(n, 1)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Num::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Num::Small(1, 1))
    }

    fn from_i128(n: i128, d: i128) -> Num {
        debug_assert!(d != 0);
        let (n, d) = if d < 0 { (-n, -d) } else { (n, d) };
        let g = gcd_u(n.unsigned_abs(), d as u128) as i128;
        let (n, d) = if g > 1 { (n / g, d / g) } else { (n, d) };
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Num::Small(n, d),
            _ => Num::Big(Box::new(Q::new(BigInt::from(n), BigInt::from(d)))),
        }
    }

    pub fn from_q(q: &Q) -> Num {
        match (q.numer().to_i64(), q.denom().to_i64()) {
            (Some(n), Some(d)) => Num::Small(n, d),
            _ => Num::Big(Box::new(q.clone())),
        }
    }

    pub fn to_q(&self) -> Q {
        match self {
            Num::Small(n, d) => Q::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Num::Big(q) => (**q).clone(),
        }
    }

    fn from_big(q: Q) -> Num {
        Num::from_q(&q)
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Num::Small(n, _) => *n < 0,
            Num::Big(q) => q.is_negative(),
        }
    }
}

impl Default for Num {
    fn default() -> Self {
        Num::ZERO
    }
}

impl Add for &Num {
    type Output = Num;
    fn add(self, o: &Num) -> Num {
        match (self, o) {
            (Num::Small(a, b), Num::Small(c, d)) => {
                if b == d {
                    return Num::from_i128(*a as i128 + *c as i128, *b as i128);
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                let g = b.gcd(&d);
                let (bg, dg) = (b / g, d / g);
                match (a.checked_mul(dg), c.checked_mul(bg), bg.checked_mul(d)) {
                    (Some(x), Some(y), Some(den)) => match x.checked_add(y) {
                        Some(num) => Num::from_i128(num, den),
                        None => Num::from_big(self.to_q() + o.to_q()),
                    },
                    _ => Num::from_big(self.to_q() + o.to_q()),
                }
            }
            _ => Num::from_big(self.to_q() + o.to_q()),
        }
    }
}

impl Mul for &Num {
    type Output = Num;
    fn mul(self, o: &Num) -> Num {
        match (self, o) {
            (Num::Small(0, _), _) | (_, Num::Small(0, _)) => Num::ZERO,
            (Num::Small(a, b), Num::Small(c, d)) => {
                Num::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Num::from_big(self.to_q() * o.to_q()),
        }
    }
}

impl Neg for &Num {
    type Output = Num;
    fn neg(self) -> Num {
        match self {
            Num::Small(n, d) => match n.checked_neg() {
                Some(m) => Num::Small(m, *d),
                None => Num::from_big(-self.to_q()),
            },
            Num::Big(q) => Num::from_big(-(**q).clone()),
        }
    }
}

impl Sub for &Num {
    type Output = Num;
    fn sub(self, o: &Num) -> Num {
        self + &(-o)
    }
}

impl AddAssign<&Num> for Num {
    fn add_assign(&mut self, o: &Num) {
        *self = &*self + o;
    }
}

impl PartialOrd for Num {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Num {
    fn cmp(&self, o: &Self) -> Ordering {
        match (self, o) {
            (Num::Small(a, b), Num::Small(c, d)) => (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128)),
            _ => self.to_q().cmp(&o.to_q()),
        }
    }
}

impl From<Q> for Num {
    fn from(q: Q) -> Num {
        Num::from_q(&q)
    }
}

impl std::fmt::Debug for Num {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_q())
    }
}

pub fn binomial(n: u32, k: u32) -> Num {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Num::from_q(&Q::from_integer(acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};
    use proptest::prelude::*;

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Num::int(i64::MAX);
        let s = &big + &big;
        assert!(matches!(s, Num::Big(_)));
        assert_eq!(&s - &big, big);
        assert_eq!(Num::from_q(&qf(6, -4)), Num::Small(-3, 2));
        assert!(Num::int(0).is_zero());
        assert_eq!(Num::from_q(&q(5)).to_q(), q(5));
    }

    proptest! {
        #[test]
        fn agrees_with_big_rationals(a in -1i64<<40..1<<40, b in 1i64..1<<30, c in -1i64<<62..1<<62, d in 1i64..1<<62) {
            let (x, y) = (qf(a, b), qf(c, d));
            let (nx, ny) = (Num::from_q(&x), Num::from_q(&y));
            prop_assert_eq!((&nx + &ny).to_q(), &x + &y);
            prop_assert_eq!((&nx * &ny).to_q(), &x * &y);
            prop_assert_eq!((&nx - &ny).to_q(), &x - &y);
            prop_assert_eq!(nx.cmp(&ny), x.cmp(&y));
            prop_assert_eq!(Num::from_q(&(&x * &y)), &nx * &ny);
        }
    }
}
