//! Extended reals with the divergence conventions.
//!
//! Divergence values live in `(-inf, +inf]`; boundary values of convex
//! functions do too. Arithmetic follows the conventions used throughout the
//! crate: `(+inf) * 0 = 0` and `(+inf) * c = +inf` for `c > 0`. IEEE floats
//! get neither right (`inf * 0 = NaN`), hence this type.
//!
//! JSON serialization uses the string sentinels `"+inf"` / `"-inf"` rather
//! than IEEE infinities so reports stay portable across JSON parsers.

use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Neg};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    PosInf,
    NegInf,
}

use ExtReal::*;

impl ExtReal {
    pub fn is_finite(self) -> bool {
        matches!(self, Finite(_))
    }

    pub fn is_pos_inf(self) -> bool {
        matches!(self, PosInf)
    }

    /// The finite value, or IEEE infinities for the infinite branches.
    pub fn as_f64(self) -> f64 {
        match self {
            Finite(x) => x,
            PosInf => f64::INFINITY,
            NegInf => f64::NEG_INFINITY,
        }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == f64::INFINITY {
            PosInf
        } else if x == f64::NEG_INFINITY {
            NegInf
        } else {
            Finite(x)
        }
    }

    /// `self * mass` for a nonnegative mass, under the convention
    /// `(+inf) * 0 = 0`, `(+inf) * c = +inf` for `c > 0`.
    pub fn mul_mass(self, mass: f64) -> ExtReal {
        debug_assert!(mass >= 0.0);
        match self {
            Finite(x) => Finite(x * mass),
            PosInf => {
                if mass == 0.0 {
                    Finite(0.0)
                } else {
                    PosInf
                }
            }
            NegInf => {
                if mass == 0.0 {
                    Finite(0.0)
                } else {
                    NegInf
                }
            }
        }
    }

    /// Positive scaling (homogeneity); `scale(0)` maps everything to 0.
    pub fn scale(self, lambda: f64) -> ExtReal {
        self.mul_mass(lambda)
    }

    /// Two extended reals agree exactly in the infinite branches and within
    /// `eps` in the finite ones.
    pub fn approx_eq(self, other: ExtReal, eps: f64) -> bool {
        match (self, other) {
            (Finite(a), Finite(b)) => (a - b).abs() <= eps,
            (a, b) => a == b,
        }
    }
}

impl Add for ExtReal {
    type Output = ExtReal;

    /// `+inf + x = +inf` for any `x > -inf`. A `+inf + -inf` sum is a logic
    /// error in this crate; it panics rather than producing a silent NaN.
    fn add(self, rhs: ExtReal) -> ExtReal {
        match (self, rhs) {
            (Finite(a), Finite(b)) => Finite(a + b),
            (PosInf, NegInf) | (NegInf, PosInf) => {
                panic!("indeterminate sum +inf + -inf")
            }
            (PosInf, _) | (_, PosInf) => PosInf,
            (NegInf, _) | (_, NegInf) => NegInf,
        }
    }
}

impl Neg for ExtReal {
    type Output = ExtReal;
    fn neg(self) -> ExtReal {
        match self {
            Finite(x) => Finite(-x),
            PosInf => NegInf,
            NegInf => PosInf,
        }
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        self.as_f64().partial_cmp(&other.as_f64())
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finite(x) => write!(f, "{x}"),
            PosInf => write!(f, "+inf"),
            NegInf => write!(f, "-inf"),
        }
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Finite(x) => s.serialize_f64(*x),
            PosInf => s.serialize_str("+inf"),
            NegInf => s.serialize_str("-inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = ExtReal;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or the strings \"+inf\"/\"-inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<ExtReal, E> {
                Ok(Finite(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<ExtReal, E> {
                Ok(Finite(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<ExtReal, E> {
                Ok(Finite(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<ExtReal, E> {
                match v {
                    "+inf" | "inf" => Ok(PosInf),
                    "-inf" => Ok(NegInf),
                    _ => Err(E::custom(format!("unrecognized extended real: {v}"))),
                }
            }
        }
        d.deserialize_any(V)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inf_times_zero_mass_is_zero() {
        assert_eq!(PosInf.mul_mass(0.0), Finite(0.0));
        assert_eq!(PosInf.mul_mass(0.25), PosInf);
        assert_eq!(Finite(3.0).mul_mass(0.5), Finite(1.5));
    }

    #[test]
    fn addition_saturates() {
        assert_eq!(PosInf + Finite(-1e300), PosInf);
        assert_eq!(Finite(1.0) + Finite(2.0), Finite(3.0));
    }

    #[test]
    fn json_sentinels_round_trip() {
        for v in [Finite(0.143841), PosInf, NegInf] {
            let s = serde_json::to_string(&v).unwrap();
            let back: ExtReal = serde_json::from_str(&s).unwrap();
            assert!(v.approx_eq(back, 0.0));
        }
        assert_eq!(serde_json::to_string(&PosInf).unwrap(), "\"+inf\"");
    }
}
