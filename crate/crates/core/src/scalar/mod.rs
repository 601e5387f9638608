//! Exact arithmetic in cyclotomic fields and the q-calculus at a root of unity.

mod cyc;
mod field;
mod rational;

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

pub use cyc::CycScalar;
pub use field::{cyclotomic_polynomial, totient, CycloField};
pub(crate) use rational::serde_rational;
pub use rational::{format_rational, frac, int, lcm_denominators, mod_rational, parse_rational, rat, Rational};

use crate::error::{Error, Result};

/// The root of unity q = exp(2 pi i / l) inside Q(zeta_N), N = l * denom_bound.
#[derive(Clone, Debug)]
pub struct RootConfig {
    l: u32,
    l_prime: u32,
    denom_bound: u64,
    field: Arc<CycloField>,
    inv_brace_one: CycScalar,
}

impl PartialEq for RootConfig {
    fn eq(&self, other: &Self) -> bool {
        self.l == other.l && self.denom_bound == other.denom_bound
    }
}

impl Eq for RootConfig {}

impl RootConfig {
    pub fn new(l: u32, denom_bound: u64) -> Result<Self> {
        if l < 3 {
            return Err(Error::Config(format!("l must satisfy l >= 3, got {l}")));
        }
        if denom_bound == 0 {
            return Err(Error::Config("denominator bound must be positive".into()));
        }
        let l_prime = if l % 2 == 1 { l } else { l / 2 };
        let field = Arc::new(CycloField::new(l as u64 * denom_bound));
        let q = CycScalar::zeta_power(&field, denom_bound as i64);
        let qi = CycScalar::zeta_power(&field, -(denom_bound as i64));
        let inv_brace_one = (&q - &qi).inv()?;
        Ok(RootConfig { l, l_prime, denom_bound, field, inv_brace_one })
    }

    /// Smallest configuration whose bound covers the denominators of `exponents`.
    pub fn covering<'a>(l: u32, exponents: impl IntoIterator<Item = &'a Rational>) -> Result<Self> {
        let b = lcm_denominators(exponents);
        let b = b.to_u64().ok_or_else(|| Error::Config("denominator bound too large".into()))?;
        Self::new(l, b)
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn l_prime(&self) -> u32 {
        self.l_prime
    }

    pub fn denom_bound(&self) -> u64 {
        self.denom_bound
    }

    pub fn order(&self) -> u64 {
        self.field.order()
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn zero(&self) -> CycScalar {
        CycScalar::zero(&self.field)
    }

    pub fn one(&self) -> CycScalar {
        CycScalar::one(&self.field)
    }

    pub fn int(&self, v: i64) -> CycScalar {
        CycScalar::from_int(&self.field, v)
    }

    pub fn rational(&self, r: &Rational) -> CycScalar {
        CycScalar::from_rational(&self.field, r)
    }

    /// Exponent of zeta_N representing q^e.
    pub fn zeta_exponent(&self, e: &Rational) -> Result<i64> {
        let b = BigInt::from(self.denom_bound);
        if !b.is_multiple_of(e.denom()) {
            return Err(Error::Config(format!(
                "exponent {} has a denominator not dividing the bound {}",
                format_rational(e),
                self.denom_bound
            )));
        }
        let k = e.numer() * (&b / e.denom());
        let k = k.mod_floor(&BigInt::from(self.order()));
        Ok(k.to_i64().expect("reduced exponent fits"))
    }

    pub fn check_exponent(&self, e: &Rational) -> Result<()> {
        self.zeta_exponent(e).map(|_| ())
    }

    /// q^e for a rational exponent whose denominator divides the bound.
    pub fn q_power(&self, e: &Rational) -> Result<CycScalar> {
        Ok(CycScalar::zeta_power(&self.field, self.zeta_exponent(e)?))
    }

    /// q^k for an integer exponent.
    pub fn q_int(&self, k: i64) -> CycScalar {
        CycScalar::zeta_power(&self.field, k * self.denom_bound as i64)
    }

    /// {x} = q^x - q^{-x}.
    pub fn brace(&self, x: &Rational) -> Result<CycScalar> {
        Ok(self.q_power(x)? - self.q_power(&-x)?)
    }

    /// [x] = {x}/{1}.
    pub fn qint(&self, x: &Rational) -> Result<CycScalar> {
        Ok(self.brace(x)? * &self.inv_brace_one)
    }

    /// [m] for an integer m.
    pub fn qint_int(&self, m: i64) -> CycScalar {
        self.qint(&int(m)).expect("integer exponents are always admissible")
    }

    /// 1/{1}.
    pub fn inv_brace_one(&self) -> &CycScalar {
        &self.inv_brace_one
    }

    /// (n)_q = 1 + q + ... + q^{n-1}.
    pub fn qparen(&self, n: u64) -> CycScalar {
        (0..n as i64).fold(self.zero(), |acc, k| acc + self.q_int(k))
    }

    /// (n)_q! = (1)_q ... (n)_q.
    pub fn qparen_factorial(&self, n: u64) -> CycScalar {
        (1..=n).fold(self.one(), |acc, k| acc * self.qparen(k))
    }
}

/// Free-function forms of the scalar operations.
pub fn q_power(cfg: &RootConfig, e: &Rational) -> Result<CycScalar> {
    cfg.q_power(e)
}

pub fn brace(cfg: &RootConfig, x: &Rational) -> Result<CycScalar> {
    cfg.brace(x)
}

pub fn qint(cfg: &RootConfig, x: &Rational) -> Result<CycScalar> {
    cfg.qint(x)
}

pub fn qparen_factorial(cfg: &RootConfig, n: u64) -> CycScalar {
    cfg.qparen_factorial(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_power_basics() {
        let cfg = RootConfig::new(3, 3).unwrap();
        assert!(cfg.q_power(&int(0)).unwrap().is_one());
        assert!(cfg.q_power(&int(3)).unwrap().is_one());
        let z = cfg.q_power(&rat(1, 3)).unwrap();
        assert_eq!(z, CycScalar::zeta_power(cfg.field(), 1));
        assert!(z.pow(9).is_one());
        assert_eq!(z.pow(3), cfg.q_int(1));
        assert!(matches!(cfg.q_power(&rat(1, 2)), Err(Error::Config(_))));
    }

    #[test]
    fn brace_and_qint() {
        for l in 3..=8u32 {
            let cfg = RootConfig::new(l, 1).unwrap();
            assert!(cfg.brace(&int(cfg.l_prime() as i64)).unwrap().is_zero(), "l={l}");
            assert!(cfg.qint(&int(1)).unwrap().is_one());
            assert!(cfg.qint(&int(0)).unwrap().is_zero());
        }
        let cfg = RootConfig::new(3, 1).unwrap();
        assert_eq!(cfg.qint(&int(2)).unwrap(), cfg.int(-1));
        let z3 = CycScalar::zeta_power(cfg.field(), 1);
        assert_eq!(cfg.brace(&int(1)).unwrap(), &z3 - &z3.pow(2));
    }

    #[test]
    fn paren_factorial() {
        let cfg = RootConfig::new(5, 1).unwrap();
        assert!(cfg.qparen_factorial(0).is_one());
        assert!(cfg.qparen_factorial(1).is_one());
        assert_eq!(cfg.qparen_factorial(2), cfg.one() + cfg.q_int(1));
    }

    #[test]
    fn rejects_small_l() {
        assert!(RootConfig::new(2, 1).is_err());
    }
}
