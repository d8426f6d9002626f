//! The local ring `A = Q[X]_(X)`: fractions `p/q` with `q(0) != 0`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::Zero;

use super::poly::Poly;

/// Element of `A`, kept reduced with a monic denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LocalRingElem {
    num: Poly,
    den: Poly,
}

impl LocalRingElem {
    /// `None` when `den(0) = 0` after reduction, i.e. the fraction is not in `A`.
    pub fn new(num: Poly, den: Poly) -> Option<Self> {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Some(Self::zero());
        }
        if den.degree() == Some(0) {
            let inv = den.eval_at_zero().recip();
            return Some(LocalRingElem { num: num.scale(&inv), den: Poly::one() });
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lead = den.leading().unwrap().recip();
        let (num, den) = (num.scale(&lead), den.scale(&lead));
        if den.eval_at_zero().is_zero() {
            return None;
        }
        Some(LocalRingElem { num, den })
    }

    pub fn from_poly(p: Poly) -> Self {
        LocalRingElem { num: p, den: Poly::one() }
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_poly(Poly::from_int(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn x() -> Self {
        Self::from_poly(Poly::x())
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// X-adic valuation; `None` for zero (valuation +infinity).
    pub fn valuation(&self) -> Option<usize> {
        self.num.order_at_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Some(0)
    }

    /// Image under the specialization `X -> 0`.
    pub fn specialize(&self) -> BigRational {
        self.num.eval_at_zero() / self.den.eval_at_zero()
    }

    /// `self / other` if the quotient lies in `A`.
    pub fn checked_div(&self, other: &LocalRingElem) -> Option<LocalRingElem> {
        if other.is_zero() {
            return None;
        }
        LocalRingElem::new(&self.num * &other.den, &self.den * &other.num)
    }

    pub fn inverse(&self) -> Option<LocalRingElem> {
        LocalRingElem::one().checked_div(self)
    }
}

impl Add for &LocalRingElem {
    type Output = LocalRingElem;
    fn add(self, rhs: &LocalRingElem) -> LocalRingElem {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        LocalRingElem::new(num, &self.den * &rhs.den).expect("A is closed under addition")
    }
}

impl Sub for &LocalRingElem {
    type Output = LocalRingElem;
    fn sub(self, rhs: &LocalRingElem) -> LocalRingElem {
        self + &(-rhs)
    }
}

impl Neg for &LocalRingElem {
    type Output = LocalRingElem;
    fn neg(self) -> LocalRingElem {
        LocalRingElem { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &LocalRingElem {
    type Output = LocalRingElem;
    fn mul(self, rhs: &LocalRingElem) -> LocalRingElem {
        LocalRingElem::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("A is closed under multiplication")
    }
}

impl fmt::Display for LocalRingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Poly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
