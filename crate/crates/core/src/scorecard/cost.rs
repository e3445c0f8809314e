//! Symbolic cost expressions and unit prices.
//!
//! Prices are exact rationals in units of one base-field multiplication
//! (`O((log n)^2)` bit operations). [`UnitCosts::model`] fills every term
//! from closed forms in the security parameter `n` and embedding degree
//! `k`; calibrated tables load only the terms they price.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Price of one `F_{p^k}` inversion in `F_{p^k}` multiplications, used
/// where an inversion is approximated by multiplications.
pub const INVK_AS_MULK: i64 = 4;

/// Group or field an operation acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Annotation {
    G1,
    Gt,
    Zq,
    Pairing,
    RatioPairing,
    MapToPoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CostTerm {
    /// Base-field multiplication.
    Mu,
    /// Base-field squaring.
    Sq,
    /// Base-field inversion, priced `O((log n)^3)`.
    Inv,
    /// Base-field exponentiation by an `n`-bit exponent.
    Exp,
    MulK,
    SqK,
    InvK,
    EcAdd,
    EcDbl,
    CubeRoot,
    /// Scalar multiplication in `G1` (`Exp_G1`).
    ScalarMul,
    Miller,
    FinalExp,
    Pairing,
    /// Quotient of two pairings sharing one loop and one final exponentiation.
    RatioPairing,
    MapToPoint,
    ExpGt,
    MulGt,
    InvGt,
    DivGt,
    MulZq,
    InvZq,
    /// Point addition, `Mul_{G1/G1}`.
    MulG1,
}

impl CostTerm {
    pub const ALL: [CostTerm; 23] = [
        CostTerm::Mu,
        CostTerm::Sq,
        CostTerm::Inv,
        CostTerm::Exp,
        CostTerm::MulK,
        CostTerm::SqK,
        CostTerm::InvK,
        CostTerm::EcAdd,
        CostTerm::EcDbl,
        CostTerm::CubeRoot,
        CostTerm::ScalarMul,
        CostTerm::Miller,
        CostTerm::FinalExp,
        CostTerm::Pairing,
        CostTerm::RatioPairing,
        CostTerm::MapToPoint,
        CostTerm::ExpGt,
        CostTerm::MulGt,
        CostTerm::InvGt,
        CostTerm::DivGt,
        CostTerm::MulZq,
        CostTerm::InvZq,
        CostTerm::MulG1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CostTerm::Mu => "Mu",
            CostTerm::Sq => "Sq",
            CostTerm::Inv => "Inv",
            CostTerm::Exp => "Exp",
            CostTerm::MulK => "MulK",
            CostTerm::SqK => "SqK",
            CostTerm::InvK => "InvK",
            CostTerm::EcAdd => "EcAdd",
            CostTerm::EcDbl => "EcDbl",
            CostTerm::CubeRoot => "CubeRoot",
            CostTerm::ScalarMul => "ScalarMul",
            CostTerm::Miller => "Miller",
            CostTerm::FinalExp => "FinalExp",
            CostTerm::Pairing => "Pairing",
            CostTerm::RatioPairing => "RatioPairing",
            CostTerm::MapToPoint => "MapToPoint",
            CostTerm::ExpGt => "ExpGt",
            CostTerm::MulGt => "MulGt",
            CostTerm::InvGt => "InvGt",
            CostTerm::DivGt => "DivGt",
            CostTerm::MulZq => "MulZq",
            CostTerm::InvZq => "InvZq",
            CostTerm::MulG1 => "MulG1",
        }
    }

    /// Group annotation for the scheme-level terms; `None` for primitives.
    pub fn annotation(self) -> Option<Annotation> {
        Some(match self {
            CostTerm::ScalarMul | CostTerm::MulG1 => Annotation::G1,
            CostTerm::ExpGt | CostTerm::MulGt | CostTerm::InvGt | CostTerm::DivGt => Annotation::Gt,
            CostTerm::MulZq | CostTerm::InvZq => Annotation::Zq,
            CostTerm::Pairing => Annotation::Pairing,
            CostTerm::RatioPairing => Annotation::RatioPairing,
            CostTerm::MapToPoint => Annotation::MapToPoint,
            _ => return None,
        })
    }
}

impl fmt::Display for CostTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CostTerm {
    type Err = Error;

    fn from_str(s: &str) -> Result<CostTerm> {
        CostTerm::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "cost term",
                name: s.into(),
            })
    }
}

/// Multiset of cost terms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CostExpr {
    terms: BTreeMap<CostTerm, BigRational>,
}

impl CostExpr {
    pub fn new() -> CostExpr {
        CostExpr::default()
    }

    pub fn with(mut self, term: CostTerm, count: i64) -> CostExpr {
        self.add(term, BigRational::from_integer(count.into()));
        self
    }

    pub fn add(&mut self, term: CostTerm, count: BigRational) {
        let c = self.terms.entry(term).or_insert_with(BigRational::zero);
        *c += count;
        if c.is_zero() {
            self.terms.remove(&term);
        }
    }

    /// Multiset union.
    pub fn union(&self, other: &CostExpr) -> CostExpr {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add(*t, c.clone());
        }
        out
    }

    pub fn count(&self, term: CostTerm) -> BigRational {
        self.terms.get(&term).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (CostTerm, &BigRational)> {
        self.terms.iter().map(|(t, c)| (*t, c))
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Parses `2*ScalarMul + ExpGt + 0.5*Mu`.
impl FromStr for CostExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<CostExpr> {
        let mut e = CostExpr::new();
        if s.trim().is_empty() {
            return Ok(e);
        }
        for part in s.split('+') {
            let part = part.trim();
            let (count, name) = match part.split_once('*') {
                Some((c, n)) => (parse_decimal(c.trim())?, n.trim()),
                None => (BigRational::one(), part),
            };
            e.add(name.parse()?, count);
        }
        Ok(e)
    }
}

impl fmt::Display for CostExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if c.is_one() {
                write!(f, "{t}")?;
            } else {
                write!(f, "{}*{t}", format_decimal(c))?;
            }
        }
        Ok(())
    }
}

/// Parameters of the closed-form model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelParams {
    /// Security parameter in bits; also the exponent and loop length.
    pub n: u32,
    /// Embedding degree, of the form `2^i 3^j`.
    pub k: u32,
    pub mu: BigRational,
    pub sq: BigRational,
}

impl ModelParams {
    /// `Mu = Sq = 1`.
    pub fn unit(n: u32, k: u32) -> ModelParams {
        ModelParams {
            n,
            k,
            mu: BigRational::one(),
            sq: BigRational::one(),
        }
    }
}

/// Splits `k = 2^i 3^j`.
pub fn degree_exponents(k: u32) -> Result<(u32, u32)> {
    if k == 0 {
        return Err(Error::Config("embedding degree must be positive".into()));
    }
    let (mut rest, mut i, mut j) = (k, 0, 0);
    while rest % 2 == 0 {
        rest /= 2;
        i += 1;
    }
    while rest % 3 == 0 {
        rest /= 3;
        j += 1;
    }
    if rest != 1 {
        return Err(Error::Config(format!(
            "embedding degree {k} is not of the form 2^i 3^j"
        )));
    }
    Ok((i, j))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitCosts {
    prices: BTreeMap<CostTerm, BigRational>,
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl UnitCosts {
    /// Prices only what is given.
    pub fn from_prices(prices: BTreeMap<CostTerm, BigRational>) -> UnitCosts {
        UnitCosts { prices }
    }

    /// Every term from its closed form.
    pub fn model(p: &ModelParams) -> Result<UnitCosts> {
        if p.n < 2 {
            return Err(Error::Config("security parameter must be at least 2 bits".into()));
        }
        let (i, j) = degree_exponents(p.k)?;
        let n = int(p.n.into());
        let k = int(p.k.into());
        let (mu, sq) = (p.mu.clone(), p.sq.clone());
        let half = BigRational::new(1.into(), 2.into());
        let third = BigRational::new(1.into(), 3.into());

        let mul_k = int(3i64.pow(i) * 5i64.pow(j)) * &mu;
        let sq_k = mul_k.clone();
        let inv_k = int(INVK_AS_MULK) * &mul_k;
        let ec_add = int(12) * &mu + int(2) * &sq;
        let ec_dbl = int(7) * &mu + int(5) * &sq;
        let nm1 = &n - int(1);
        let scalar_mul = &nm1 * &ec_dbl + &nm1 * &third * &ec_add;
        // Right-to-left binary: lg n / 2 multiplications, lg n squarings.
        let exp = &n * &half * &mu + &n * &sq;
        let exp_gt = &n * &half * &mul_k + &n * &sq_k;
        let per_iter = int(4) * &mul_k + int(2) * &sq_k + (int(6) * &k + int(7)) * &mu + int(7) * &sq;
        let miller = &n * &per_iter;
        // Two line pairs per step, one shared f update.
        let ratio_iter = int(4) * &mul_k + int(2) * &sq_k + (int(12) * &k + int(14)) * &mu + int(14) * &sq;
        let final_exp = exp.clone();
        // Cube root is O(lg lg n); rounded up to whole multiplications.
        let lglg = (f64::from(p.n)).log2().log2().ceil().max(1.0) as i64;
        let cube_root = int(lglg) * &mu;
        let inv = &n * &mu;

        let mut m = BTreeMap::new();
        m.insert(CostTerm::Mu, mu.clone());
        m.insert(CostTerm::Sq, sq.clone());
        m.insert(CostTerm::Inv, inv.clone());
        m.insert(CostTerm::Exp, exp.clone());
        m.insert(CostTerm::MulK, mul_k.clone());
        m.insert(CostTerm::SqK, sq_k);
        m.insert(CostTerm::InvK, inv_k.clone());
        m.insert(CostTerm::EcAdd, ec_add.clone());
        m.insert(CostTerm::EcDbl, ec_dbl);
        m.insert(CostTerm::CubeRoot, cube_root.clone());
        m.insert(CostTerm::ScalarMul, scalar_mul.clone());
        m.insert(CostTerm::Miller, miller.clone());
        m.insert(CostTerm::FinalExp, final_exp.clone());
        m.insert(CostTerm::Pairing, &miller + &final_exp);
        m.insert(CostTerm::RatioPairing, &n * &ratio_iter + &final_exp);
        m.insert(CostTerm::MapToPoint, &sq + &cube_root + &scalar_mul);
        m.insert(CostTerm::ExpGt, exp_gt);
        m.insert(CostTerm::MulGt, mul_k.clone());
        m.insert(CostTerm::InvGt, inv_k.clone());
        m.insert(CostTerm::DivGt, &inv_k + &mul_k);
        m.insert(CostTerm::MulZq, mu);
        m.insert(CostTerm::InvZq, inv);
        m.insert(CostTerm::MulG1, ec_add);
        Ok(UnitCosts { prices: m })
    }

    pub fn price(&self, term: CostTerm) -> Option<&BigRational> {
        self.prices.get(&term)
    }

    pub fn prices(&self) -> impl Iterator<Item = (CostTerm, &BigRational)> {
        self.prices.iter().map(|(t, c)| (*t, c))
    }
}

/// Linear evaluation; [`Error::Unpriced`] names the first term without a
/// price.
pub fn cost_eval(expr: &CostExpr, costs: &UnitCosts) -> Result<BigRational> {
    let mut total = BigRational::zero();
    for (t, c) in expr.terms() {
        let p = costs.price(t).ok_or_else(|| Error::Unpriced(t.name().into()))?;
        total += c * p;
    }
    Ok(total)
}

/// Reads `12`, `-3`, `0.2`, `100,8` or `7/3`.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let bad = || Error::Malformed(format!("not a number: `{s}`"));
    if let Some((a, b)) = s.split_once('/') {
        let num: BigInt = a.trim().parse().map_err(|_| bad())?;
        let den: BigInt = b.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    let s2 = s.replace(',', ".");
    let (neg, body) = match s2.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s2.as_str()),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{whole}{frac}0").parse::<BigInt>().map_err(|_| bad())? / 10;
    let den = BigInt::from(10).pow(frac.len() as u32);
    let v = BigRational::new(digits, den);
    Ok(if neg { -v } else { v })
}

/// Decimal text when the denominator divides a power of ten, `a/b`
/// otherwise.
pub fn format_decimal(v: &BigRational) -> String {
    if v.is_integer() {
        return v.to_integer().to_string();
    }
    let mut den = v.denom().clone();
    let mut places = 0u32;
    for f in [2u32, 5] {
        while (&den % f).is_zero() {
            den /= f;
        }
    }
    if !den.is_one() {
        return format!("{}/{}", v.numer(), v.denom());
    }
    let mut scaled = v.clone();
    while !scaled.is_integer() {
        scaled *= int(10);
        places += 1;
    }
    let digits = scaled.to_integer().abs().to_string();
    let digits = format!("{digits:0>width$}", width = places as usize + 1);
    let (w, f) = digits.split_at(digits.len() - places as usize);
    format!("{}{w}.{f}", if v.is_negative() { "-" } else { "" })
}

/// Nearest `f64`, for display and ordering checks only.
pub fn to_f64(v: &BigRational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_round_trip() {
        for s in ["0", "4", "0.2", "100.8", "421.2", "-3.05", "7/3"] {
            assert_eq!(format_decimal(&parse_decimal(s).unwrap()), s);
        }
        assert_eq!(parse_decimal("100,8").unwrap(), parse_decimal("100.8").unwrap());
        assert!(parse_decimal("1.2.3").is_err());
        assert!(parse_decimal("").is_err());
        assert!(parse_decimal("1/0").is_err());
    }

    #[test]
    fn expr_parse_and_print() {
        let e: CostExpr = "2*ScalarMul + ExpGt + ScalarMul".parse().unwrap();
        assert_eq!(e.count(CostTerm::ScalarMul), int(3));
        assert_eq!(e.to_string(), "3*ScalarMul + ExpGt");
        assert!("Bogus".parse::<CostExpr>().is_err());
    }

    #[test]
    fn degrees() {
        assert_eq!(degree_exponents(12).unwrap(), (2, 1));
        assert_eq!(degree_exponents(2).unwrap(), (1, 0));
        assert!(degree_exponents(5).is_err());
    }
}
