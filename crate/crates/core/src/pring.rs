//! The pseudo-complex ring `a + I b` with `I² = 1`.
//!
//! Every element splits uniquely as `u₊ σ₊ + u₋ σ₋` with the idempotents
//! `σ± = (1 ± I)/2`. The two coordinates `u± = a ± b` are the values of the
//! ring homomorphisms [`PseudoComplex::gamma`], so multiplication, inversion
//! and the exponential all act independently on each branch.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Element `re + I·im` of the pseudo-complex ring over the reals.
///
/// Stored in zero-divisor coordinates `(Γ₊, Γ₋)`, where every ring operation
/// is componentwise; `re` and `im` are recovered on demand.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct PseudoComplex {
    plus: f64,
    minus: f64,
}

/// Selects one of the two homomorphisms `Γ± : a + I b ↦ a ± b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
}

impl PseudoComplex {
    pub const ZERO: Self = Self {
        plus: 0.0,
        minus: 0.0,
    };
    pub const ONE: Self = Self {
        plus: 1.0,
        minus: 1.0,
    };
    pub const I: Self = Self {
        plus: 1.0,
        minus: -1.0,
    };
    pub const SIGMA_PLUS: Self = Self {
        plus: 1.0,
        minus: 0.0,
    };
    pub const SIGMA_MINUS: Self = Self {
        plus: 0.0,
        minus: 1.0,
    };

    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !(re.is_finite() && im.is_finite()) {
            return Err(Error::NonFinite("pseudo-complex component"));
        }
        Self::from_zero_divisors(re + im, re - im)
    }

    pub fn real(re: f64) -> Result<Self> {
        Self::new(re, 0.0)
    }

    /// Builds `u₊ σ₊ + u₋ σ₋`, the inverse of the pair `(Γ₊, Γ₋)`.
    pub fn from_zero_divisors(u_plus: f64, u_minus: f64) -> Result<Self> {
        let p = Self {
            plus: u_plus,
            minus: u_minus,
        };
        if p.is_finite() {
            Ok(p)
        } else {
            Err(Error::NonFinite("pseudo-complex component"))
        }
    }

    pub fn re(self) -> f64 {
        0.5 * (self.plus + self.minus)
    }

    pub fn im(self) -> f64 {
        0.5 * (self.plus - self.minus)
    }

    pub fn is_finite(self) -> bool {
        self.plus.is_finite() && self.minus.is_finite()
    }

    /// `Γ₊(p) = a + b` or `Γ₋(p) = a − b`.
    pub fn gamma(self, branch: Branch) -> f64 {
        match branch {
            Branch::Plus => self.plus,
            Branch::Minus => self.minus,
        }
    }

    pub fn gamma_plus(self) -> f64 {
        self.plus
    }

    pub fn gamma_minus(self) -> f64 {
        self.minus
    }

    /// The involution `a + I b ↦ a − I b`; it swaps `σ₊` and `σ₋`.
    pub fn conj(self) -> Self {
        Self {
            plus: self.minus,
            minus: self.plus,
        }
    }

    /// `a = ±b`. For finite floats `a − b` rounds to zero only when `a = b`,
    /// so this is the exact component comparison.
    pub fn is_zero_divisor(self) -> bool {
        self.plus == 0.0 || self.minus == 0.0
    }

    pub fn inverse(self) -> Result<Self> {
        if self.is_zero_divisor() {
            return Err(Error::ZeroDivisor);
        }
        Self::from_zero_divisors(self.plus.recip(), self.minus.recip())
    }

    /// Branchwise exponential, `e^a (cosh b + I sinh b)`.
    pub fn exp(self) -> Result<Self> {
        Self::from_zero_divisors(self.plus.exp(), self.minus.exp())
    }

    /// Squared pseudo-norm `p p* = a² − b² = Γ₊(p) Γ₋(p)`.
    pub fn norm_sqr(self) -> f64 {
        self.plus * self.minus
    }

    pub fn scale(self, k: f64) -> Self {
        Self {
            plus: self.plus * k,
            minus: self.minus * k,
        }
    }

    /// Checked ring arithmetic. Overflow to a non-finite component is an error.
    pub fn arith(self, other: Self, op: RingOp) -> Result<Self> {
        let out = match op {
            RingOp::Add => self + other,
            RingOp::Sub => self - other,
            RingOp::Mul => self * other,
        };
        if out.is_finite() {
            Ok(out)
        } else {
            Err(Error::NonFinite("ring arithmetic result"))
        }
    }
}

impl Add for PseudoComplex {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            plus: self.plus + rhs.plus,
            minus: self.minus + rhs.minus,
        }
    }
}

impl Sub for PseudoComplex {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            plus: self.plus - rhs.plus,
            minus: self.minus - rhs.minus,
        }
    }
}

/// `(a + I b)(c + I d) = (ac + bd) + I(ad + bc)`, i.e. `Γ±` multiply.
impl Mul for PseudoComplex {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self {
            plus: self.plus * rhs.plus,
            minus: self.minus * rhs.minus,
        }
    }
}

impl Neg for PseudoComplex {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            plus: -self.plus,
            minus: -self.minus,
        }
    }
}

impl fmt::Display for PseudoComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = (self.re(), self.im());
        if im.is_sign_negative() {
            write!(f, "{re} - I{}", -im)
        } else {
            write!(f, "{re} + I{im}")
        }
    }
}
