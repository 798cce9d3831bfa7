//! Circular sequences: the coordinate trace of a single reflecting axis.
//!
//! `a⁺(n, t, m)` walks forward around the phase circle of length `2m` from
//! `t`, `a⁻(n, t, m)` walks backward; both are triangle waves with period
//! `2m`. Their generating functions are `f(x) / (1 − x^{2m})` for a numerator
//! polynomial `f` of degree below `2m`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::tent;

/// Dense integer polynomial, coefficient `i` multiplies `x^i`. No trailing
/// zeros are stored; the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct IntPolynomial {
    coeffs: Vec<i64>,
}

impl IntPolynomial {
    pub fn new(coeffs: impl Into<Vec<i64>>) -> Self {
        let mut coeffs = coeffs.into();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: i64) -> Self {
        Self::new(vec![c])
    }

    /// `c · x^k`
    pub fn monomial(c: i64, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> i64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Integer long division. Fails if a leading coefficient of the running
    /// remainder is not divisible by the divisor's leading coefficient.
    pub fn div_rem(&self, divisor: &IntPolynomial) -> Option<(IntPolynomial, IntPolynomial)> {
        let dd = divisor.degree()?;
        let lead = divisor.coeffs[dd];
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((Self::zero(), self.clone()));
        }
        let mut quot = vec![0i64; rem.len() - dd];
        for shift in (0..quot.len()).rev() {
            let top = rem[shift + dd];
            if top == 0 {
                continue;
            }
            if top % lead != 0 {
                return None;
            }
            let q = top / lead;
            quot[shift] = q;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[shift + j] -= q * d;
            }
        }
        Some((Self::new(quot), Self::new(rem)))
    }

    pub fn div_exact(&self, divisor: &IntPolynomial) -> Result<IntPolynomial> {
        match self.div_rem(divisor) {
            Some((q, r)) if r.is_zero() => Ok(q),
            _ => Err(Error::InexactDivision("remainder is not zero")),
        }
    }

    fn one_minus_x() -> Self {
        Self::new(vec![1, -1])
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.unsigned_abs();
            match (i, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => f.write_str("x")?,
                (1, _) => write!(f, "{a}x")?,
                (_, 1) => write!(f, "x^{i}")?,
                _ => write!(f, "{a}x^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;

    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new(
            (0..n)
                .map(|i| self.coeff(i) + rhs.coeff(i))
                .collect::<Vec<_>>(),
        )
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;

    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;

    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect::<Vec<_>>())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![0i64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for IntPolynomial {
            type Output = IntPolynomial;
            fn $method(self, rhs: IntPolynomial) -> IntPolynomial {
                (&self).$method(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

/// `numerator / (1 − x^period)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalGF {
    pub numerator: IntPolynomial,
    pub period: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Negative,
}

/// Direction, first term `t` and height `m` of a circular sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeqSpec {
    sign: Sign,
    t: u64,
    m: u64,
}

impl SeqSpec {
    pub fn new(sign: Sign, t: u64, m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroHeight);
        }
        if t > m {
            return Err(Error::InvalidSequence { t, m });
        }
        Ok(Self { sign, t, m })
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn first_term(&self) -> u64 {
        self.t
    }

    pub fn height(&self) -> u64 {
        self.m
    }

    pub fn period(&self) -> u64 {
        2 * self.m
    }
}

/// `a^±(n, t, m)` by stepping around the phase circle `n mod 2m` times.
pub fn circ_seq(spec: &SeqSpec, n: u64) -> u64 {
    let period = spec.period();
    let mut u = spec.t;
    for _ in 0..n % period {
        u = match spec.sign {
            Sign::Positive => (u + 1) % period,
            Sign::Negative => (u + period - 1) % period,
        };
    }
    tent(spec.m, u)
}

/// `a^±(n, t, m)` from the piecewise-linear closed form on `i = n mod 2m`.
pub fn circ_seq_closed(spec: &SeqSpec, n: u64) -> u64 {
    let (t, m) = (spec.t as i64, spec.m as i64);
    let i = (n % spec.period()) as i64;
    let value = match spec.sign {
        Sign::Positive => {
            if i <= m - t {
                i + t
            } else if i <= 2 * m - t {
                2 * m - t - i
            } else {
                i - (2 * m - t)
            }
        }
        Sign::Negative => {
            if i < t {
                t - i
            } else if i <= m + t {
                i - t
            } else {
                2 * m + t - i
            }
        }
    };
    value as u64
}

/// `F(x, t, n) = t·x^{t−1} + (t+1)·x^t + … + n·x^{n−1}`, the derivative of
/// `x^t + … + x^n`.
pub fn run_derivative_poly(t: u64, n: u64) -> Result<IntPolynomial> {
    if t < 1 || n < t {
        return Err(Error::InvalidRun { t, n });
    }
    let mut coeffs = vec![0i64; n as usize];
    for k in t..=n {
        coeffs[k as usize - 1] = k as i64;
    }
    Ok(IntPolynomial::new(coeffs))
}

/// `(1 − x^k) / (1 − x) = 1 + x + … + x^{k−1}`, obtained by exact division.
fn geometric(k: usize) -> Result<IntPolynomial> {
    let numer = &IntPolynomial::constant(1) - &IntPolynomial::monomial(1, k);
    numer.div_exact(&IntPolynomial::one_minus_x())
}

fn x(k: u64) -> IntPolynomial {
    IntPolynomial::monomial(1, k as usize)
}

/// Numerator of the generating function, built from the factored closed form
///
/// ```text
/// f⁺ = (1−x^m)/(1−x) · ( x(1−x^{m−t})/(1−x) − x^{m−t+1}(1−x^{t−1})/(1−x) + (t−1)x^m + t )
/// f⁻ = (1−x^m)/(1−x) · ( x^{t+1}(1−x^{m−t})/(1−x) − x(1−x^t)/(1−x) + t·x^m + t )
/// ```
///
/// with every `1/(1−x)` resolved by exact polynomial division. The products
/// `x^a(1 − x^b)` are expanded to `x^a − x^{a+b}` first, which stays a
/// polynomial for `t = 0` too.
pub fn numerator_poly(spec: &SeqSpec) -> Result<IntPolynomial> {
    let (t, m) = (spec.t, spec.m);
    let one_minus_x = IntPolynomial::one_minus_x();
    let (fractions, tail) = match spec.sign {
        Sign::Positive => {
            let first = &x(1) - &x(m - t + 1);
            let second = &x(m - t + 1) - &x(m);
            let tail = &IntPolynomial::monomial(t as i64 - 1, m as usize)
                + &IntPolynomial::constant(t as i64);
            (&first - &second, tail)
        }
        Sign::Negative => {
            let first = &x(t + 1) - &x(m + 1);
            let second = &x(1) - &x(t + 1);
            let tail =
                &IntPolynomial::monomial(t as i64, m as usize) + &IntPolynomial::constant(t as i64);
            (&first - &second, tail)
        }
    };
    let bracket = &fractions.div_exact(&one_minus_x)? + &tail;
    let numerator = &geometric(m as usize)? * &bracket;
    if numerator
        .degree()
        .is_some_and(|d| d as u64 >= spec.period())
    {
        return Err(Error::InexactDivision(
            "numerator degree reaches the period",
        ));
    }
    Ok(numerator)
}

pub fn gen_function(spec: &SeqSpec) -> Result<RationalGF> {
    Ok(RationalGF {
        numerator: numerator_poly(spec)?,
        period: spec.period(),
    })
}

/// First `count + 1` power-series coefficients of `numerator / (1 − x^period)`
/// via `c_n = numerator_n + c_{n − period}`.
pub fn series_expand(gf: &RationalGF, count: usize) -> Vec<i64> {
    let period = gf.period as usize;
    let mut out: Vec<i64> = Vec::with_capacity(count + 1);
    for n in 0..=count {
        let carry = if period > 0 && n >= period {
            out[n - period]
        } else {
            0
        };
        out.push(gf.numerator.coeff(n) + carry);
    }
    out
}
