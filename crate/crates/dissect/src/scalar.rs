//! Decoration scalars in four modes: exact rationals, exact Gaussian
//! rationals, complex floats, and formal integer combinations of symbols.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

pub type Rational = BigRational;

/// Build a rational from a small integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Build the rational `p/q`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parse `"p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    Rational,
    Gaussian,
    Float,
    Formal,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Rational => "rational",
            Mode::Gaussian => "gaussian",
            Mode::Float => "float",
            Mode::Formal => "formal",
        }
    }

    pub fn is_exact(self) -> bool {
        self != Mode::Float
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("scalar mode mismatch: {0} vs {1}")]
    ModeMismatch(&'static str, &'static str),
    #[error("unknown symbol `{0}` in substitution")]
    UnknownSymbol(String),
    #[error("operation requires an exact scalar")]
    Inexact,
}

/// A decoration value.
#[derive(Clone, Debug)]
pub enum Scalar {
    Rational(Rational),
    Gaussian(Rational, Rational),
    Float(Complex64),
    /// Symbol -> coefficient, with zero coefficients never stored.
    Formal(BTreeMap<String, Rational>),
}

impl Scalar {
    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Rational(_) => Mode::Rational,
            Scalar::Gaussian(..) => Mode::Gaussian,
            Scalar::Float(_) => Mode::Float,
            Scalar::Formal(_) => Mode::Formal,
        }
    }

    pub fn zero(mode: Mode) -> Scalar {
        match mode {
            Mode::Rational => Scalar::Rational(Rational::zero()),
            Mode::Gaussian => Scalar::Gaussian(Rational::zero(), Rational::zero()),
            Mode::Float => Scalar::Float(Complex64::new(0.0, 0.0)),
            Mode::Formal => Scalar::Formal(BTreeMap::new()),
        }
    }

    pub fn zero_like(&self) -> Scalar {
        Scalar::zero(self.mode())
    }

    pub fn int(n: i64) -> Scalar {
        Scalar::Rational(rat(n))
    }

    pub fn symbol(name: &str) -> Scalar {
        let mut m = BTreeMap::new();
        m.insert(name.to_string(), Rational::one());
        Scalar::Formal(m)
    }

    pub fn gaussian(re: Rational, im: Rational) -> Scalar {
        Scalar::Gaussian(re, im)
    }

    pub fn float(re: f64, im: f64) -> Scalar {
        Scalar::Float(Complex64::new(re, im))
    }

    /// Exact zero test. Floats compare against literal zero.
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Gaussian(a, b) => a.is_zero() && b.is_zero(),
            Scalar::Float(z) => z.re == 0.0 && z.im == 0.0,
            Scalar::Formal(m) => m.is_empty(),
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Gaussian(a, b), Scalar::Gaussian(c, d)) => Scalar::Gaussian(a + c, b + d),
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a + b),
            (Scalar::Formal(a), Scalar::Formal(b)) => {
                let mut m = a.clone();
                for (k, v) in b {
                    let e = m.entry(k.clone()).or_insert_with(Rational::zero);
                    *e += v;
                    if e.is_zero() {
                        m.remove(k);
                    }
                }
                Scalar::Formal(m)
            }
            _ => return Err(ScalarError::ModeMismatch(self.mode().name(), other.mode().name())),
        })
    }

    pub fn neg(&self) -> Scalar {
        self.scale(&-Rational::one())
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.try_add(&other.neg())
    }

    /// Sum; panics on mode mismatch (callers validate modes up front).
    pub fn add(&self, other: &Scalar) -> Scalar {
        self.try_add(other).expect("scalar modes validated")
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.try_sub(other).expect("scalar modes validated")
    }

    pub fn scale(&self, c: &Rational) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(a * c),
            Scalar::Gaussian(a, b) => Scalar::Gaussian(a * c, b * c),
            Scalar::Float(z) => Scalar::Float(z * c.to_f64().unwrap_or(f64::NAN)),
            Scalar::Formal(m) => {
                if c.is_zero() {
                    return Scalar::Formal(BTreeMap::new());
                }
                Scalar::Formal(m.iter().map(|(k, v)| (k.clone(), v * c)).collect())
            }
        }
    }

    /// Complex value of a numeric scalar; formal scalars have none.
    pub fn to_complex(&self) -> Option<Complex64> {
        match self {
            Scalar::Rational(a) => Some(Complex64::new(a.to_f64()?, 0.0)),
            Scalar::Gaussian(a, b) => Some(Complex64::new(a.to_f64()?, b.to_f64()?)),
            Scalar::Float(z) => Some(*z),
            Scalar::Formal(_) => None,
        }
    }

    /// Replace every symbol by a value; all values must share one mode.
    pub fn substitute(&self, values: &BTreeMap<String, Scalar>, mode: Mode) -> Result<Scalar, ScalarError> {
        match self {
            Scalar::Formal(m) => {
                let mut acc = Scalar::zero(mode);
                for (k, c) in m {
                    let v = values.get(k).ok_or_else(|| ScalarError::UnknownSymbol(k.clone()))?;
                    acc = acc.try_add(&v.scale(c))?;
                }
                Ok(acc)
            }
            other => Ok(other.clone()),
        }
    }

    /// Coefficients of a formal scalar (empty for the zero scalar).
    pub fn formal_terms(&self) -> Option<&BTreeMap<String, Rational>> {
        match self {
            Scalar::Formal(m) => Some(m),
            _ => None,
        }
    }

    /// True when every formal coefficient is an integer (vacuous for other modes).
    pub fn has_integer_coefficients(&self) -> bool {
        match self {
            Scalar::Formal(m) => m.values().all(|v| v.is_integer()),
            _ => true,
        }
    }
}

fn cmp_f64(a: f64, b: f64) -> Ordering {
    a.total_cmp(&b)
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Scalar {}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a.cmp(b),
            (Scalar::Gaussian(a, b), Scalar::Gaussian(c, d)) => a.cmp(c).then_with(|| b.cmp(d)),
            (Scalar::Float(a), Scalar::Float(b)) => cmp_f64(a.re, b.re).then_with(|| cmp_f64(a.im, b.im)),
            (Scalar::Formal(a), Scalar::Formal(b)) => a.iter().cmp(b.iter()),
            _ => self.mode().cmp(&other.mode()),
        }
    }
}

impl std::hash::Hash for Scalar {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.mode().hash(state);
        match self {
            Scalar::Rational(a) => a.hash(state),
            Scalar::Gaussian(a, b) => {
                a.hash(state);
                b.hash(state);
            }
            Scalar::Float(z) => {
                z.re.to_bits().hash(state);
                z.im.to_bits().hash(state);
            }
            Scalar::Formal(m) => m.hash(state),
        }
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(a) => write!(f, "{}", fmt_rational(a)),
            Scalar::Gaussian(a, b) => {
                if b.is_negative() {
                    write!(f, "{}-{}i", fmt_rational(a), fmt_rational(&-b))
                } else {
                    write!(f, "{}+{}i", fmt_rational(a), fmt_rational(b))
                }
            }
            Scalar::Float(z) => write!(f, "{}{:+}i", z.re, z.im),
            Scalar::Formal(m) => {
                if m.is_empty() {
                    return write!(f, "0");
                }
                let mut first = true;
                for (k, v) in m {
                    let neg = v.is_negative();
                    let mag = v.abs();
                    if first {
                        if neg {
                            write!(f, "-")?;
                        }
                    } else {
                        write!(f, "{}", if neg { " - " } else { " + " })?;
                    }
                    if mag.is_one() {
                        write!(f, "{k}")?;
                    } else {
                        write!(f, "{}*{k}", fmt_rational(&mag))?;
                    }
                    first = false;
                }
                Ok(())
            }
        }
    }
}

/// Check that all scalars share one mode and return it.
pub fn uniform_mode<'a, I: IntoIterator<Item = &'a Scalar>>(items: I) -> Result<Option<Mode>, ScalarError> {
    let mut mode = None;
    for s in items {
        match mode {
            None => mode = Some(s.mode()),
            Some(m) if m != s.mode() => return Err(ScalarError::ModeMismatch(m.name(), s.mode().name())),
            _ => {}
        }
    }
    Ok(mode)
}

pub(crate) fn rational_to_string(r: &Rational) -> String {
    fmt_rational(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formal_cancellation_removes_entries() {
        let a = Scalar::symbol("a1");
        let z = a.sub(&a);
        assert!(z.is_zero());
        assert_eq!(z, Scalar::zero(Mode::Formal));
    }

    #[test]
    fn mode_mixing_is_an_error() {
        let r = Scalar::int(1).try_add(&Scalar::symbol("x"));
        assert!(matches!(r, Err(ScalarError::ModeMismatch(..))));
    }

    #[test]
    fn substitution_evaluates_linear_combination() {
        let s = Scalar::symbol("a").add(&Scalar::symbol("b").scale(&rat(-2)));
        let mut vals = BTreeMap::new();
        vals.insert("a".to_string(), Scalar::int(5));
        vals.insert("b".to_string(), Scalar::int(3));
        assert_eq!(s.substitute(&vals, Mode::Rational).unwrap(), Scalar::int(-1));
    }

    #[test]
    fn display_formal() {
        let s = Scalar::symbol("b2").add(&Scalar::symbol("a3"));
        assert_eq!(s.to_string(), "a3 + b2");
        assert_eq!(parse_rational("-3/6").unwrap(), ratio(-1, 2));
    }
}
