use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::field::CycloField;
use super::rational::{format_rational, parse_rational};
use crate::error::{Error, Result};

const SMALL_LIMIT: i128 = i64::MAX as i128;

/// Integer coefficient arithmetic used by the two representations.
/// `None` signals overflow and triggers promotion to big integers.
trait Coef: Clone + PartialEq + fmt::Debug {
    fn czero() -> Self;
    fn from_i64(v: i64) -> Self;
    fn cis_zero(&self) -> bool;
    fn cis_neg(&self) -> bool;
    fn cadd(&self, o: &Self) -> Option<Self>;
    fn csub(&self, o: &Self) -> Option<Self>;
    fn cmul(&self, o: &Self) -> Option<Self>;
    fn cneg(&self) -> Option<Self>;
    fn cgcd(&self, o: &Self) -> Self;
    fn cdiv(&self, o: &Self) -> Self;
}

impl Coef for i128 {
    fn czero() -> Self {
        0
    }
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn cis_zero(&self) -> bool {
        *self == 0
    }
    fn cis_neg(&self) -> bool {
        *self < 0
    }
    fn cadd(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn csub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn cmul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn cneg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn cgcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn cdiv(&self, o: &Self) -> Self {
        self / o
    }
}

impl Coef for BigInt {
    fn czero() -> Self {
        Zero::zero()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn cis_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn cis_neg(&self) -> bool {
        self.is_negative()
    }
    fn cadd(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn csub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn cmul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn cneg(&self) -> Option<Self> {
        Some(-self)
    }
    fn cgcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn cdiv(&self, o: &Self) -> Self {
        self / o
    }
}

fn normalize<C: Coef>(mut num: Vec<C>, mut den: C) -> Option<(Vec<C>, C)> {
    while num.last().is_some_and(|c| c.cis_zero()) {
        num.pop();
    }
    if num.is_empty() {
        return Some((num, C::from_i64(1)));
    }
    let mut g = den.clone();
    for c in &num {
        g = g.cgcd(c);
        if g == C::from_i64(1) {
            break;
        }
    }
    if den.cis_neg() {
        g = g.cneg()?;
    }
    if g != C::from_i64(1) {
        for c in num.iter_mut() {
            *c = c.cdiv(&g);
        }
        den = den.cdiv(&g);
    }
    Some((num, den))
}

fn reduce<C: Coef>(p: &mut Vec<C>, field: &CycloField) -> Option<()> {
    let phi = field.degree();
    if p.len() > phi {
        for i in (phi..p.len()).rev() {
            if p[i].cis_zero() {
                continue;
            }
            let c = std::mem::replace(&mut p[i], C::czero());
            for &(j, t) in field.tail() {
                let idx = i - phi + j;
                p[idx] = p[idx].csub(&c.cmul(&C::from_i64(t))?)?;
            }
        }
        p.truncate(phi);
    }
    Some(())
}

fn mul_generic<C: Coef>(
    a: &[C],
    da: &C,
    b: &[C],
    db: &C,
    field: &CycloField,
) -> Option<(Vec<C>, C)> {
    if a.is_empty() || b.is_empty() {
        return Some((Vec::new(), C::from_i64(1)));
    }
    let mut out = vec![C::czero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.cis_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.cis_zero() {
                continue;
            }
            out[i + j] = out[i + j].cadd(&x.cmul(y)?)?;
        }
    }
    reduce(&mut out, field)?;
    normalize(out, da.cmul(db)?)
}

fn add_generic<C: Coef>(a: &[C], da: &C, b: &[C], db: &C, sub: bool) -> Option<(Vec<C>, C)> {
    let g = da.cgcd(db);
    let fa = db.cdiv(&g);
    let fb = da.cdiv(&g);
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = match a.get(i) {
            Some(x) => x.cmul(&fa)?,
            None => C::czero(),
        };
        let y = match b.get(i) {
            Some(y) => y.cmul(&fb)?,
            None => C::czero(),
        };
        out.push(if sub { x.csub(&y)? } else { x.cadd(&y)? });
    }
    normalize(out, fb.cmul(db)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    Small { num: Vec<i128>, den: i128 },
    Big { num: Vec<BigInt>, den: BigInt },
}

impl Repr {
    fn from_big(num: Vec<BigInt>, den: BigInt) -> Repr {
        let fits = |x: &BigInt| x.to_i128().is_some_and(|v| v.abs() <= SMALL_LIMIT);
        if fits(&den) && num.iter().all(fits) {
            Repr::Small {
                num: num.iter().map(|x| x.to_i128().unwrap()).collect(),
                den: den.to_i128().unwrap(),
            }
        } else {
            Repr::Big { num, den }
        }
    }

    fn from_small(num: Vec<i128>, den: i128) -> Repr {
        if den.abs() <= SMALL_LIMIT && num.iter().all(|x| x.abs() <= SMALL_LIMIT) {
            Repr::Small { num, den }
        } else {
            Repr::Big {
                num: num.into_iter().map(BigInt::from).collect(),
                den: BigInt::from(den),
            }
        }
    }

    fn big(&self) -> (Vec<BigInt>, BigInt) {
        match self {
            Repr::Small { num, den } => (num.iter().map(|x| BigInt::from(*x)).collect(), BigInt::from(*den)),
            Repr::Big { num, den } => (num.clone(), den.clone()),
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Repr::Small { num, .. } => num.is_empty(),
            Repr::Big { num, .. } => num.is_empty(),
        }
    }
}

/// An exact element of the cyclotomic field Q(zeta_N) in canonical form:
/// a polynomial in zeta_N of degree below phi(N) with rational coefficients.
#[derive(Clone)]
pub struct CycScalar {
    field: Arc<CycloField>,
    repr: Repr,
}

impl CycScalar {
    pub fn zero(field: &Arc<CycloField>) -> Self {
        CycScalar { field: field.clone(), repr: Repr::Small { num: Vec::new(), den: 1 } }
    }

    pub fn one(field: &Arc<CycloField>) -> Self {
        Self::from_int(field, 1)
    }

    pub fn from_int(field: &Arc<CycloField>, v: i64) -> Self {
        let num = if v == 0 { Vec::new() } else { vec![v as i128] };
        CycScalar { field: field.clone(), repr: Repr::Small { num, den: 1 } }
    }

    pub fn from_rational(field: &Arc<CycloField>, r: &BigRational) -> Self {
        let (num, den) = normalize(vec![r.numer().clone()], r.denom().clone()).unwrap();
        CycScalar { field: field.clone(), repr: Repr::from_big(num, den) }
    }

    /// Builds an element from rational coefficients in the power basis.
    /// Coefficients beyond the field degree are reduced.
    pub fn from_coeffs(field: &Arc<CycloField>, coeffs: &[BigRational]) -> Self {
        let mut den = BigInt::one();
        for c in coeffs {
            den = den.lcm(c.denom());
        }
        let mut num: Vec<BigInt> = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        reduce(&mut num, field).unwrap();
        let (num, den) = normalize(num, den).unwrap();
        CycScalar { field: field.clone(), repr: Repr::from_big(num, den) }
    }

    /// zeta_N^k.
    pub fn zeta_power(field: &Arc<CycloField>, k: i64) -> Self {
        let num = field.power(k).iter().map(|c| *c as i128).collect();
        CycScalar { field: field.clone(), repr: Repr::Small { num, den: 1 } }
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn order(&self) -> u64 {
        self.field.order()
    }

    pub fn is_zero(&self) -> bool {
        self.repr.is_zero()
    }

    pub fn is_one(&self) -> bool {
        matches!(&self.repr, Repr::Small { num, den } if *den == 1 && num.len() == 1 && num[0] == 1)
    }

    /// Rational coefficients in the power basis, length = field degree.
    pub fn coeffs(&self) -> Vec<BigRational> {
        let (num, den) = self.repr.big();
        let mut out: Vec<BigRational> =
            num.into_iter().map(|n| BigRational::new(n, den.clone())).collect();
        out.resize(self.field.degree(), BigRational::zero());
        out
    }

    /// Returns the rational value if the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        let (num, den) = self.repr.big();
        match num.len() {
            0 => Some(BigRational::zero()),
            1 => Some(BigRational::new(num[0].clone(), den)),
            _ => None,
        }
    }

    fn with_repr(&self, repr: Repr) -> Self {
        CycScalar { field: self.field.clone(), repr }
    }

    fn align(&self, other: &Self) -> Result<(CycScalar, CycScalar)> {
        let (n, m) = (self.order(), other.order());
        if n == m {
            Ok((self.clone(), other.clone()))
        } else if m % n == 0 {
            Ok((self.embed(other.field())?, other.clone()))
        } else if n % m == 0 {
            Ok((self.clone(), other.embed(self.field())?))
        } else {
            Err(Error::OrderMismatch(n, m))
        }
    }

    /// Embeds into Q(zeta_M) for N | M via zeta_N = zeta_M^(M/N).
    pub fn embed(&self, target: &Arc<CycloField>) -> Result<Self> {
        let (n, m) = (self.order(), target.order());
        if n == m {
            return Ok(CycScalar { field: target.clone(), repr: self.repr.clone() });
        }
        if m % n != 0 {
            return Err(Error::OrderMismatch(n, m));
        }
        let step = (m / n) as i64;
        let (num, den) = self.repr.big();
        let mut acc = vec![BigInt::zero(); target.degree()];
        for (i, c) in num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, p) in target.power(step * i as i64).iter().enumerate() {
                acc[j] += c * BigInt::from(*p);
            }
        }
        let (num, den) = normalize(acc, den).unwrap();
        Ok(CycScalar { field: target.clone(), repr: Repr::from_big(num, den) })
    }

    fn binop_add(&self, other: &Self, sub: bool) -> Self {
        if let (Repr::Small { num: a, den: da }, Repr::Small { num: b, den: db }) = (&self.repr, &other.repr) {
            if let Some((n, d)) = add_generic(a, da, b, db, sub) {
                return self.with_repr(Repr::from_small(n, d));
            }
        }
        let (a, da) = self.repr.big();
        let (b, db) = other.repr.big();
        let (n, d) = add_generic(&a, &da, &b, &db, sub).unwrap();
        self.with_repr(Repr::from_big(n, d))
    }

    fn binop_mul(&self, other: &Self) -> Self {
        if let (Repr::Small { num: a, den: da }, Repr::Small { num: b, den: db }) = (&self.repr, &other.repr) {
            if let Some((n, d)) = mul_generic(a, da, b, db, &self.field) {
                return self.with_repr(Repr::from_small(n, d));
            }
        }
        let (a, da) = self.repr.big();
        let (b, db) = other.repr.big();
        let (n, d) = mul_generic(&a, &da, &b, &db, &self.field).unwrap();
        self.with_repr(Repr::from_big(n, d))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.align(other)?;
        Ok(a.binop_add(&b, false))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.align(other)?;
        Ok(a.binop_add(&b, true))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.align(other)?;
        Ok(a.binop_mul(&b))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.align(other)?;
        Ok(a.binop_mul(&b.inv()?))
    }

    /// Multiplicative inverse via the extended Euclidean algorithm over Q[x].
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(&self.field, &r.recip()));
        }
        let (num, den) = self.repr.big();
        // Work with the integer polynomial num; the inverse of num/den is den * num^{-1}.
        let a: Vec<BigRational> = num.into_iter().map(BigRational::from_integer).collect();
        let m: Vec<BigRational> =
            self.field.cyclotomic().iter().map(|c| BigRational::from_integer(BigInt::from(*c))).collect();
        let s = poly_inverse_mod(&a, &m);
        let scaled: Vec<BigRational> = s.into_iter().map(|c| c * BigRational::from_integer(den.clone())).collect();
        Ok(Self::from_coeffs(&self.field, &scaled))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.binop_mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.binop_mul(&base);
            }
        }
        acc
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.binop_mul(&Self::from_int(&self.field, k))
    }

    /// Complex value, for display only.
    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.order() as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, c) in self.coeffs().iter().enumerate() {
            let v = c.to_f64().unwrap_or(f64::NAN);
            if v == 0.0 {
                continue;
            }
            let t = 2.0 * std::f64::consts::PI * i as f64 / n;
            re += v * t.cos();
            im += v * t.sin();
        }
        (re, im)
    }

    /// Twelve significant digits, non-authoritative.
    pub fn approx_string(&self) -> String {
        let (re, im) = self.to_complex();
        format!("{re:.12e}{}{:.12e}i", if im < 0.0 { "-" } else { "+" }, im.abs())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "order": self.order(),
            "coeffs": self.coeffs().iter().map(format_rational).collect::<Vec<_>>(),
        })
    }

    /// Parses the `{"order", "coeffs"}` form into the given field (orders must match).
    pub fn from_json_in(field: &Arc<CycloField>, v: &serde_json::Value) -> Result<Self> {
        let order = v
            .get("order")
            .and_then(|o| o.as_u64())
            .ok_or_else(|| Error::Parse("missing integer field `order`".into()))?;
        if order != field.order() {
            return Err(Error::OrderMismatch(order, field.order()));
        }
        let coeffs = v
            .get("coeffs")
            .and_then(|c| c.as_array())
            .ok_or_else(|| Error::Parse("missing array field `coeffs`".into()))?;
        if coeffs.len() != field.degree() {
            return Err(Error::Parse(format!(
                "expected {} coefficients for order {}, found {}",
                field.degree(),
                order,
                coeffs.len()
            )));
        }
        let rs = coeffs
            .iter()
            .map(|c| {
                c.as_str()
                    .ok_or_else(|| Error::Parse("coefficients must be strings".into()))
                    .and_then(parse_rational)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_coeffs(field, &rs))
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let order = v
            .get("order")
            .and_then(|o| o.as_u64())
            .filter(|o| *o >= 1)
            .ok_or_else(|| Error::Parse("missing positive integer field `order`".into()))?;
        Self::from_json_in(&Arc::new(CycloField::new(order)), v)
    }
}

fn trim(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_sub_mul(a: &[BigRational], q: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = a.to_vec();
    let need = if q.is_empty() || b.is_empty() { 0 } else { q.len() + b.len() - 1 };
    if out.len() < need {
        out.resize(need, BigRational::zero());
    }
    for (i, x) in q.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] -= x * y;
        }
    }
    trim(&mut out);
    out
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = a.to_vec();
    trim(&mut rem);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quo = vec![BigRational::zero(); rem.len() - db];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = rem.last().unwrap() / &lead;
        for (j, y) in b.iter().enumerate() {
            rem[shift + j] -= &c * y;
        }
        quo[shift] = c;
        rem.pop();
        trim(&mut rem);
    }
    (quo, rem)
}

/// s with s*a = 1 mod m, for coprime a and m.
fn poly_inverse_mod(a: &[BigRational], m: &[BigRational]) -> Vec<BigRational> {
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    trim(&mut r1);
    let (mut s0, mut s1): (Vec<BigRational>, Vec<BigRational>) = (Vec::new(), vec![BigRational::one()]);
    while r1.len() > 1 {
        let (q, r) = poly_divmod(&r0, &r1);
        let s = poly_sub_mul(&s0, &q, &s1);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    assert!(r1.len() == 1, "element not invertible modulo the cyclotomic polynomial");
    let c = r1[0].clone();
    s1.into_iter().map(|x| x / &c).collect()
}

impl PartialEq for CycScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.order() == other.order() {
            return self.repr == other.repr;
        }
        match self.align(other) {
            Ok((a, b)) => a.repr == b.repr,
            Err(_) => false,
        }
    }
}

impl Eq for CycScalar {}

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", format_rational(c))?,
                1 => write!(f, "({})z", format_rational(c))?,
                _ => write!(f, "({})z^{}", format_rational(c), i)?,
            }
        }
        write!(f, " [N={}]", self.order())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl $tr<&CycScalar> for &CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: &CycScalar) -> CycScalar {
                self.$try(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: CycScalar) -> CycScalar {
                (&self).$try(&rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<&CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: &CycScalar) -> CycScalar {
                (&self).$try(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<CycScalar> for &CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: CycScalar) -> CycScalar {
                self.$try(&rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);
forward_binop!(Div, div, try_div);

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        let repr = match &self.repr {
            Repr::Small { num, den } => Repr::Small { num: num.iter().map(|x| -x).collect(), den: *den },
            Repr::Big { num, den } => Repr::Big { num: num.iter().map(|x| -x).collect(), den: den.clone() },
        };
        self.with_repr(repr)
    }
}

impl Neg for CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        -&self
    }
}

impl Serialize for CycScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        CycScalar::from_json(&v).map_err(D::Error::custom)
    }
}
