use std::cmp::Ordering;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{invalid, HError, Result};
use crate::hvalue::{Dimension, ExtReal};
use crate::num::{parse_rational, Ball};

/// A dimension-measure pair, ordered lexicographically.
#[derive(Clone, Debug, PartialEq)]
pub struct HPair {
    pub d: Dimension,
    pub m: ExtReal,
}

impl HPair {
    pub fn new(d: Dimension, m: impl Into<ExtReal>) -> Self {
        HPair { d, m: m.into() }
    }

    /// The identity `(0, 0)`.
    pub fn zero() -> Self {
        HPair {
            d: Dimension::zero(),
            m: ExtReal::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.d.is_zero() && self.m.is_zero()
    }

    pub fn try_cmp(&self, o: &HPair) -> Result<Ordering> {
        Ok(match self.d.try_cmp(&o.d)? {
            Ordering::Equal => self.m.cmp_tol(&o.m),
            ord => ord,
        })
    }

    pub fn leq(&self, o: &HPair) -> Result<bool> {
        Ok(self.try_cmp(o)? != Ordering::Greater)
    }

    pub fn lt(&self, o: &HPair) -> Result<bool> {
        Ok(self.try_cmp(o)? == Ordering::Less)
    }

    /// `(max{d1,d2}, sum of the measures sitting at the max)`.
    pub fn add(&self, o: &HPair) -> Result<HPair> {
        match self.d.try_cmp(&o.d)? {
            Ordering::Less => Ok(o.clone()),
            Ordering::Greater => Ok(self.clone()),
            Ordering::Equal => {
                let m = self
                    .m
                    .try_add(&o.m)
                    .map_err(|_| HError::UndefinedSum(self.d.to_string()))?;
                Ok(HPair {
                    d: self.d.clone(),
                    m,
                })
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let m = match &self.m {
            ExtReal::Approx(b) => json!({"mid": b.mid, "rad": b.rad}),
            other => Value::String(other.to_string()),
        };
        json!({"d": self.d.to_string(), "m": m})
    }

    pub fn from_json(v: &Value) -> Result<HPair> {
        let d: Dimension = v
            .get("d")
            .and_then(Value::as_str)
            .ok_or_else(|| invalid("pair needs string field 'd'"))?
            .parse()?;
        let m = match v.get("m") {
            Some(Value::String(s)) => parse_ext(s)?,
            Some(Value::Number(n)) => parse_ext(&n.to_string())?,
            Some(Value::Object(o)) => {
                let f = |k: &str| {
                    o.get(k)
                        .and_then(Value::as_f64)
                        .ok_or_else(|| invalid("approx measure needs mid/rad"))
                };
                ExtReal::Approx(Ball::new(f("mid")?, f("rad")?))
            }
            _ => return Err(invalid("pair needs field 'm'")),
        };
        Ok(HPair { d, m })
    }
}

fn parse_ext(s: &str) -> Result<ExtReal> {
    Ok(match s.trim() {
        "inf" | "+inf" => ExtReal::PosInf,
        "-inf" => ExtReal::NegInf,
        t => ExtReal::Finite(parse_rational(t)?),
    })
}

impl fmt::Display for HPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.d, self.m)
    }
}

/// Sum of a finite list; the empty sum is `(0, 0)`.
pub fn hpair_sum<'a>(terms: impl IntoIterator<Item = &'a HPair>) -> Result<HPair> {
    let terms: Vec<&HPair> = terms.into_iter().collect();
    if terms.is_empty() {
        return Ok(HPair::zero());
    }
    let mut top = terms[0].d.clone();
    for t in &terms[1..] {
        top = top.try_max(&t.d)?;
    }
    // adding all top measures at once keeps (+inf)+(-inf) order independent
    let (mut pos, mut neg, mut acc) = (false, false, ExtReal::zero());
    for t in terms.iter().filter(|t| t.d == top) {
        match t.m {
            ExtReal::PosInf => pos = true,
            ExtReal::NegInf => neg = true,
            _ => acc = acc.try_add(&t.m)?,
        }
    }
    let m = match (pos, neg) {
        (true, true) => return Err(HError::UndefinedSum(top.to_string())),
        (true, false) => ExtReal::PosInf,
        (false, true) => ExtReal::NegInf,
        _ => acc,
    };
    Ok(HPair { d: top, m })
}

/// Lexicographic minimum of a nonempty list.
pub fn hpair_inf(k: &[HPair]) -> Result<HPair> {
    let mut it = k.iter();
    let mut best = it.next().ok_or_else(|| invalid("inf of empty list"))?;
    for x in it {
        if x.try_cmp(best)? == Ordering::Less {
            best = x;
        }
    }
    Ok(best.clone())
}

/// Lexicographic maximum of a nonempty list.
pub fn hpair_sup(k: &[HPair]) -> Result<HPair> {
    let mut it = k.iter();
    let mut best = it.next().ok_or_else(|| invalid("sup of empty list"))?;
    for x in it {
        if x.try_cmp(best)? == Ordering::Greater {
            best = x;
        }
    }
    Ok(best.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, rat};

    fn p(d: Dimension, m: i64) -> HPair {
        HPair::new(d, int(m))
    }

    #[test]
    fn lexicographic_order() {
        let z = Dimension::zero;
        assert!(p(z(), 5).leq(&p(Dimension::one(), -2)).unwrap());
        let c = Dimension::cantor();
        assert!(p(c.clone(), 1).leq(&p(c, 1)).unwrap());
        let l49 = Dimension::log_ratio(4, 9).unwrap();
        assert!(p(l49, 7).leq(&p(Dimension::cantor(), 7)).unwrap());
    }

    #[test]
    fn addition_cases() {
        let one = Dimension::one;
        assert_eq!(
            p(Dimension::zero(), 5).add(&p(one(), -2)).unwrap(),
            p(one(), -2)
        );
        let x = HPair::new(Dimension::cantor(), rat(3, 4));
        assert_eq!(x.add(&HPair::zero()).unwrap(), x);
        let bad = HPair::new(one(), ExtReal::PosInf).add(&HPair::new(one(), ExtReal::NegInf));
        assert!(matches!(bad, Err(HError::UndefinedSum(_))));
    }

    #[test]
    fn finite_sums() {
        let one = Dimension::one;
        assert_eq!(
            hpair_sum(&[p(one(), 1), p(one(), -1)]).unwrap(),
            p(one(), 0)
        );
        assert_eq!(hpair_sum(&[]).unwrap(), HPair::zero());
        let c = Dimension::cantor();
        let terms = [
            p(Dimension::zero(), 1),
            p(c.clone(), 2),
            p(Dimension::zero(), 4),
        ];
        assert_eq!(hpair_sum(&terms).unwrap(), p(c, 2));
    }

    #[test]
    fn inf_sup() {
        let one = Dimension::one;
        assert_eq!(
            hpair_sup(&[p(Dimension::zero(), 3), p(one(), -5)]).unwrap(),
            p(one(), -5)
        );
        assert_eq!(hpair_inf(&[p(one(), 2), p(one(), 7)]).unwrap(), p(one(), 2));
        let seq: Vec<HPair> = (1..=50)
            .map(|n| HPair::new(Dimension::from_rational(int(1) - rat(1, n)), int(0)))
            .collect();
        assert_eq!(
            hpair_sup(&seq).unwrap(),
            HPair::new(Dimension::from_rational(int(1) - rat(1, 50)), int(0))
        );
    }

    #[test]
    fn json_round_trip() {
        let x = HPair::new(Dimension::cantor(), ExtReal::Approx(Ball::new(0.25, 1e-14)));
        assert_eq!(HPair::from_json(&x.to_json()).unwrap(), x);
        let y = HPair::new(Dimension::zero(), ExtReal::PosInf);
        assert_eq!(y.to_json(), json!({"d": "0", "m": "inf"}));
        assert_eq!(HPair::from_json(&y.to_json()).unwrap(), y);
    }
}
