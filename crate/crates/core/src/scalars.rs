//! Exact scalar rings: rational functions in α, Laurent polynomials in
//! `A = √α`, and polynomials in `β = α - 1` and `δ = A - 1/A`.
//!
//! Every coefficient is an arbitrary-precision rational. Polynomials are dense
//! with trailing zeros stripped, so structural equality is mathematical
//! equality. Rational functions are kept reduced with a monic denominator.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

/// Dense univariate polynomial over ℚ, ascending coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly(Vec<Rational>);

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn one() -> Self {
        Poly(vec![rat(1)])
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// `c·x^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = c;
        Poly::new(v)
    }

    pub fn x() -> Self {
        Poly::monomial(rat(1), 1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.0.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Degree with `-1` for zero, convenient for comparisons with signed bounds.
    pub fn degree_i64(&self) -> i64 {
        self.0.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }

    pub fn leading(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly(self.0.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = self.leading().recip();
        self.scale(&inv)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        let lead_inv = d.leading().recip();
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); rem.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.0.iter().enumerate() {
                rem[k + j] -= &c * dj;
            }
            q[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(q), Poly::new(rem))
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// `p(x + c)`.
    pub fn shift(&self, c: &Rational) -> Poly {
        let lin = Poly::new(vec![c.clone(), rat(1)]);
        let mut acc = Poly::zero();
        for a in self.0.iter().rev() {
            acc = &(&acc * &lin) + &Poly::constant(a.clone());
        }
        acc
    }

    /// `p(x^2)`.
    pub fn square_variable(&self) -> Poly {
        let mut v = vec![Rational::zero(); (self.0.len() * 2).saturating_sub(1)];
        for (i, c) in self.0.iter().enumerate() {
            v[2 * i] = c.clone();
        }
        Poly::new(v)
    }

    pub fn pow(&self, k: usize) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `true` when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|c| !c.is_negative())
    }

    pub fn fmt_var(&self, var: &str, f: &mut dyn fmt::Write) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let unit = a.is_one();
            match (k, unit) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => {}
                (_, false) => write!(f, "{a}*")?,
            }
            match k {
                0 => {}
                1 => write!(f, "{var}")?,
                _ => write!(f, "{var}^{k}")?,
            }
        }
        Ok(())
    }

    pub fn to_string_var(&self, var: &str) -> String {
        let mut s = String::new();
        self.fmt_var(var, &mut s).unwrap();
        s
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_var("x"))
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        v.serialize(s)
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly::new(v)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }
}

/// Reduced quotient of polynomials with a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

/// Rational function in the Jack parameter α.
pub type AlphaRationalFunction = RatFunc;

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFunc::zero();
        }
        if den.is_constant() {
            let inv = den.leading().recip();
            return RatFunc { num: num.scale(&inv), den: Poly::one() };
        }
        let g = Poly::gcd(&num, &den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let inv = den.leading().recip();
        RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn constant(c: Rational) -> Self {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        RatFunc::constant(rat(n))
    }

    /// The variable itself.
    pub fn var() -> Self {
        RatFunc::from_poly(Poly::x())
    }

    /// `x^k`.
    pub fn var_pow(k: usize) -> Self {
        RatFunc::from_poly(Poly::monomial(rat(1), k))
    }

    pub fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        RatFunc::from_int(1)
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn to_poly(&self) -> Option<Poly> {
        self.is_polynomial().then(|| self.num.clone())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, k: usize) -> Self {
        RatFunc::new(self.num.pow(k), self.den.pow(k))
    }

    /// Evaluates at a rational point; `None` at a pole.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }

    /// `f(x^2)`.
    pub fn square_variable(&self) -> Self {
        RatFunc { num: self.num.square_variable(), den: self.den.square_variable() }
    }

    pub fn to_string_var(&self, var: &str) -> String {
        if self.den.is_constant() {
            return self.num.to_string_var(var);
        }
        format!("({})/({})", self.num.to_string_var(var), self.den.to_string_var(var))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_var("a"))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_var("a"))
    }
}

impl Serialize for RatFunc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string_var("a"))
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatFunc::new(&self.num + &o.num, self.den.clone());
        }
        RatFunc::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self + &(-o)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_constant() && o.den.is_constant() {
            return RatFunc::from_poly(&self.num * &o.num);
        }
        RatFunc::new(&self.num * &o.num, &self.den * &o.den)
    }
}

impl<'a> Div<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn div(self, o: &RatFunc) -> RatFunc {
        self * &o.recip()
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! owned_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                &self + &o
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                &self - &o
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                &self * &o
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}

owned_ops!(Poly);
owned_ops!(RatFunc);
owned_ops!(LaurentA);

impl Div for RatFunc {
    type Output = RatFunc;
    fn div(self, o: RatFunc) -> RatFunc {
        &self / &o
    }
}

/// Exact field operations needed by the linear-algebra helpers.
pub trait Field: Clone + PartialEq + fmt::Debug {
    fn f_zero() -> Self;
    fn f_one() -> Self;
    fn f_is_zero(&self) -> bool;
    fn f_add(&self, o: &Self) -> Self;
    fn f_sub(&self, o: &Self) -> Self;
    fn f_mul(&self, o: &Self) -> Self;
    fn f_div(&self, o: &Self) -> Self;
}

impl Field for Rational {
    fn f_zero() -> Self {
        Zero::zero()
    }
    fn f_one() -> Self {
        One::one()
    }
    fn f_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn f_add(&self, o: &Self) -> Self {
        self + o
    }
    fn f_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn f_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn f_div(&self, o: &Self) -> Self {
        self / o
    }
}

impl Field for RatFunc {
    fn f_zero() -> Self {
        RatFunc::zero()
    }
    fn f_one() -> Self {
        RatFunc::one()
    }
    fn f_is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn f_add(&self, o: &Self) -> Self {
        self + o
    }
    fn f_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn f_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn f_div(&self, o: &Self) -> Self {
        self / o
    }
}

/// Inverse of a square matrix by Gauss-Jordan elimination; `None` if singular.
pub fn invert_matrix<F: Field>(m: &[Vec<F>]) -> Option<Vec<Vec<F>>> {
    let n = m.len();
    let mut a: Vec<Vec<F>> = m.to_vec();
    let mut inv: Vec<Vec<F>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { F::f_one() } else { F::f_zero() }).collect()).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].f_is_zero())?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = a[col][j].f_div(&p);
            inv[col][j] = inv[col][j].f_div(&p);
        }
        for r in 0..n {
            if r == col || a[r][col].f_is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let t = f.f_mul(&a[col][j]);
                a[r][j] = a[r][j].f_sub(&t);
                let t = f.f_mul(&inv[col][j]);
                inv[r][j] = inv[r][j].f_sub(&t);
            }
        }
    }
    Some(inv)
}

/// Determinant by Gaussian elimination over a field.
pub fn determinant<F: Field>(m: &[Vec<F>]) -> F {
    let n = m.len();
    let mut a: Vec<Vec<F>> = m.to_vec();
    let mut det = F::f_one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].f_is_zero()) else {
            return F::f_zero();
        };
        if piv != col {
            a.swap(col, piv);
            det = F::f_zero().f_sub(&det);
        }
        let p = a[col][col].clone();
        det = det.f_mul(&p);
        for r in col + 1..n {
            if a[r][col].f_is_zero() {
                continue;
            }
            let f = a[r][col].f_div(&p);
            for j in col..n {
                let t = f.f_mul(&a[col][j]);
                a[r][j] = a[r][j].f_sub(&t);
            }
        }
    }
    det
}

/// Laurent polynomial in `A`, where `A^2 = α`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentA(BTreeMap<i64, Rational>);

impl LaurentA {
    pub fn zero() -> Self {
        LaurentA(BTreeMap::new())
    }

    pub fn one() -> Self {
        LaurentA::monomial(rat(1), 0)
    }

    pub fn monomial(c: Rational, k: i64) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(k, c);
        }
        LaurentA(m)
    }

    pub fn constant(c: Rational) -> Self {
        LaurentA::monomial(c, 0)
    }

    pub fn terms(&self) -> &BTreeMap<i64, Rational> {
        &self.0
    }

    pub fn coeff(&self, k: i64) -> Rational {
        self.0.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.0.keys().next_back().copied()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.0.keys().next().copied()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return LaurentA::zero();
        }
        LaurentA(self.0.iter().map(|(k, v)| (*k, v * c)).collect())
    }

    /// Multiplies by `A^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentA(self.0.iter().map(|(e, v)| (e + k, v.clone())).collect())
    }

    /// `f(-1/A)`.
    pub fn reflect(&self) -> Self {
        LaurentA(
            self.0
                .iter()
                .map(|(k, v)| (-k, if k.rem_euclid(2) == 1 { -v } else { v.clone() }))
                .collect(),
        )
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = LaurentA::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, a: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (k, v) in &self.0 {
            let p = if *k >= 0 { num_traits::pow(a.clone(), *k as usize) } else { num_traits::pow(a.recip(), (-k) as usize) };
            acc += v * p;
        }
        acc
    }

    /// Substitutes `α = A^2` into a polynomial in α.
    pub fn from_alpha_poly(p: &Poly) -> Self {
        LaurentA(
            p.coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (2 * k as i64, c.clone()))
                .collect(),
        )
    }

    /// Inverse of [`LaurentA::from_alpha_poly`]: only even nonnegative exponents allowed.
    pub fn to_alpha_poly(&self) -> Result<Poly> {
        let mut v = Vec::new();
        for (k, c) in &self.0 {
            if *k < 0 || k % 2 != 0 {
                return Err(Error::NotAlphaPolynomial);
            }
            let idx = (*k / 2) as usize;
            if v.len() <= idx {
                v.resize(idx + 1, Rational::zero());
            }
            v[idx] = c.clone();
        }
        Ok(Poly::new(v))
    }

    /// As a rational function in `A`.
    pub fn to_ratfunc(&self) -> RatFunc {
        let lo = self.min_degree().unwrap_or(0).min(0);
        let mut v = Vec::new();
        for (k, c) in &self.0 {
            let idx = (k - lo) as usize;
            if v.len() <= idx {
                v.resize(idx + 1, Rational::zero());
            }
            v[idx] = c.clone();
        }
        RatFunc::new(Poly::new(v), Poly::monomial(rat(1), (-lo) as usize))
    }

    /// Inverse of [`LaurentA::to_ratfunc`]; `None` if the denominator is not a monomial.
    pub fn from_ratfunc(f: &RatFunc) -> Option<Self> {
        let den = f.den();
        let d = den.degree()?;
        if den.coeffs()[..d].iter().any(|c| !c.is_zero()) {
            return None;
        }
        let inv = den.leading().recip();
        Some(LaurentA(
            f.num()
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k as i64 - d as i64, c * &inv))
                .collect(),
        ))
    }

    fn insert_add(&mut self, k: i64, c: Rational) {
        let e = self.0.entry(k).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&k);
        }
    }
}

impl fmt::Debug for LaurentA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.0.iter().rev().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let a = c.abs();
            match (*k, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "A")?,
                (1, false) => write!(f, "{a}*A")?,
                (_, true) => write!(f, "A^{k}")?,
                (_, false) => write!(f, "{a}*A^{k}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for LaurentA {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(&k.to_string(), &v.to_string())?;
        }
        m.end()
    }
}

impl<'a> Add<&'a LaurentA> for &'a LaurentA {
    type Output = LaurentA;
    fn add(self, o: &LaurentA) -> LaurentA {
        let mut out = self.clone();
        for (k, v) in &o.0 {
            out.insert_add(*k, v.clone());
        }
        out
    }
}

impl<'a> Sub<&'a LaurentA> for &'a LaurentA {
    type Output = LaurentA;
    fn sub(self, o: &LaurentA) -> LaurentA {
        let mut out = self.clone();
        for (k, v) in &o.0 {
            out.insert_add(*k, -v);
        }
        out
    }
}

impl<'a> Mul<&'a LaurentA> for &'a LaurentA {
    type Output = LaurentA;
    fn mul(self, o: &LaurentA) -> LaurentA {
        let mut out = LaurentA::zero();
        for (a, x) in &self.0 {
            for (b, y) in &o.0 {
                out.insert_add(a + b, x * y);
            }
        }
        out
    }
}

impl Neg for &LaurentA {
    type Output = LaurentA;
    fn neg(self) -> LaurentA {
        LaurentA(self.0.iter().map(|(k, v)| (*k, -v)).collect())
    }
}

/// Polynomial in `β = α - 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(transparent)]
pub struct BetaPolynomial(pub Poly);

/// Polynomial in `δ = A - 1/A`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(transparent)]
pub struct DeltaPolynomial(pub Poly);

impl BetaPolynomial {
    pub fn coeff(&self, k: usize) -> Rational {
        self.0.coeff(k)
    }

    pub fn coeff_i64(&self, k: i64) -> Rational {
        if k < 0 {
            Rational::zero()
        } else {
            self.0.coeff(k as usize)
        }
    }

    pub fn degree(&self) -> i64 {
        self.0.degree_i64()
    }

    /// Back to a polynomial in α.
    pub fn to_alpha(&self) -> Poly {
        self.0.shift(&rat(-1))
    }
}

impl fmt::Display for BetaPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.to_string_var("b"))
    }
}

impl DeltaPolynomial {
    pub fn coeff(&self, k: usize) -> Rational {
        self.0.coeff(k)
    }

    pub fn coeff_i64(&self, k: i64) -> Rational {
        if k < 0 {
            Rational::zero()
        } else {
            self.0.coeff(k as usize)
        }
    }

    pub fn degree(&self) -> i64 {
        self.0.degree_i64()
    }

    pub fn to_laurent(&self) -> LaurentA {
        let d = delta();
        let mut acc = LaurentA::zero();
        for c in self.0.coeffs().iter().rev() {
            acc = &(&acc * &d) + &LaurentA::constant(c.clone());
        }
        acc
    }
}

impl fmt::Display for DeltaPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.to_string_var("d"))
    }
}

/// `δ = A - 1/A`.
pub fn delta() -> LaurentA {
    &LaurentA::monomial(rat(1), 1) - &LaurentA::monomial(rat(1), -1)
}

/// `γ = -A + 1/A`, the sign-reversed companion of `δ`.
pub fn gamma() -> LaurentA {
    -&delta()
}

/// Rewrites a rational function of α as a polynomial in β.
pub fn alpha_to_beta(f: &RatFunc) -> Result<BetaPolynomial> {
    let shift = rat(1);
    let num = f.num().shift(&shift);
    let den = f.den().shift(&shift);
    let (q, r) = num.div_rem(&den);
    if !r.is_zero() {
        return Err(Error::NotBetaPolynomial);
    }
    Ok(BetaPolynomial(q))
}

/// Rewrites a Laurent polynomial in `A` as a polynomial in `δ`.
pub fn laurent_to_delta(f: &LaurentA) -> Result<DeltaPolynomial> {
    if f.reflect() != *f {
        return Err(Error::NotDeltaPolynomial);
    }
    let d = delta();
    let mut rest = f.clone();
    let mut coeffs: Vec<Rational> = Vec::new();
    while let Some(top) = rest.max_degree() {
        if top < 0 {
            return Err(Error::NotDeltaPolynomial);
        }
        let c = rest.coeff(top);
        let k = top as usize;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, Rational::zero());
        }
        coeffs[k] = c.clone();
        rest = &rest - &d.pow(k).scale(&c);
    }
    Ok(DeltaPolynomial(Poly::new(coeffs)))
}

/// `[A^d] f`, requiring that `f` has no terms above `A^d`.
pub fn a_top_coefficient(f: &LaurentA, d: i64) -> Result<Rational> {
    match f.max_degree() {
        Some(m) if m > d => Err(Error::DegreeBound { found: m, bound: d }),
        _ => Ok(f.coeff(d)),
    }
}

/// Binomial coefficient with the convention `C(n, k) = 0` outside `0 ≤ k ≤ n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

/// `n (n-1) ... (n-k+1)`, zero when `k > n`.
pub fn falling_factorial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |a, i| a * BigInt::from(n - i))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha() -> RatFunc {
        RatFunc::var()
    }

    #[test]
    fn beta_conversion() {
        let a = alpha();
        let f = &(&(&a * &a) - &RatFunc::one()) / &(&a + &RatFunc::one());
        assert_eq!(alpha_to_beta(&f).unwrap(), BetaPolynomial(Poly::x()));
        assert_eq!(alpha_to_beta(&a.recip()), Err(Error::NotBetaPolynomial));
    }

    #[test]
    fn delta_conversion() {
        let f = &(&LaurentA::monomial(rat(1), 2) - &LaurentA::constant(rat(2)))
            + &LaurentA::monomial(rat(1), -2);
        assert_eq!(laurent_to_delta(&f).unwrap(), DeltaPolynomial(Poly::from_ints(&[0, 0, 1])));
        let a = LaurentA::monomial(rat(1), 1);
        assert_eq!(laurent_to_delta(&a), Err(Error::NotDeltaPolynomial));
        assert_eq!(laurent_to_delta(&LaurentA::zero()).unwrap(), DeltaPolynomial(Poly::zero()));
    }

    #[test]
    fn a_top() {
        let f = &LaurentA::monomial(rat(3), 2) + &LaurentA::monomial(rat(1), -1);
        assert_eq!(a_top_coefficient(&f, 2).unwrap(), rat(3));
        assert_eq!(a_top_coefficient(&f, 3).unwrap(), rat(0));
        assert!(a_top_coefficient(&f, 1).is_err());
    }

    #[test]
    fn ratfunc_normal_form() {
        let f = RatFunc::new(Poly::from_ints(&[2, 2]), Poly::from_ints(&[4, 4]));
        assert_eq!(f, RatFunc::constant(rat_frac(1, 2)));
        let g = RatFunc::new(Poly::from_ints(&[1]), Poly::from_ints(&[0, 3]));
        assert_eq!(g.den(), &Poly::from_ints(&[0, 1]));
    }

    #[test]
    fn laurent_ratfunc_round_trip() {
        let f = &LaurentA::monomial(rat(3), 2) + &LaurentA::monomial(rat(-1), -3);
        assert_eq!(LaurentA::from_ratfunc(&f.to_ratfunc()).unwrap(), f);
    }

    #[test]
    fn serialization() {
        let p = Poly::new(vec![rat(0), rat_frac(1, 2), rat(-3)]);
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"["0","1/2","-3"]"#);
        let l = LaurentA::monomial(rat(2), -1);
        assert_eq!(serde_json::to_string(&l).unwrap(), r#"{"-1":"2"}"#);
    }

    #[test]
    fn matrix_inverse() {
        let m = vec![vec![rat(2), rat(1)], vec![rat(1), rat(1)]];
        let inv = invert_matrix(&m).unwrap();
        assert_eq!(inv, vec![vec![rat(1), rat(-1)], vec![rat(-1), rat(2)]]);
        assert_eq!(determinant(&m), rat(1));
        assert!(invert_matrix(&[vec![rat(1), rat(1)], vec![rat(1), rat(1)]]).is_none());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(2, 3), BigInt::from(0));
        assert_eq!(binomial(-1, 0), BigInt::from(0));
        assert_eq!(falling_factorial(4, 4), BigInt::from(24));
        assert_eq!(falling_factorial(3, 4), BigInt::from(0));
    }
}
