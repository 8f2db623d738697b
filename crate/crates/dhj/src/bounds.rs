//! Exact evaluation of the numerical recursions behind the increment
//! pipeline.
//!
//! The calculator is an auditor, not an estimator: threshold numbers it
//! cannot derive (the base `dhj` values and the partition numbers `gr`)
//! must come from an explicit oracle table, keyed by exact rationals.
//! A missing entry raises `MissingOracleValue` naming the exact key, so a
//! table can be completed incrementally; nothing is ever interpolated.

use crate::error::{Error, Result};
use crate::params::ProofParameters;
use crate::ratio::{fmt_q, parse_q, preview, q_ceil, q_int, q_pow, Q};
use num::bigint::BigInt;
use num::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// An exact integer or rational of arbitrary size, with a display preview
/// for values whose digit count exceeds a cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BigQuantity {
    Int(BigInt),
    Rational(Q),
}

pub const PREVIEW_DIGIT_CAP: usize = 40;

impl BigQuantity {
    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            BigQuantity::Int(i) => Some(i),
            BigQuantity::Rational(_) => None,
        }
    }

    pub fn to_ratio(&self) -> Q {
        match self {
            BigQuantity::Int(i) => Q::from_integer(i.clone()),
            BigQuantity::Rational(r) => r.clone(),
        }
    }

    pub fn preview(&self) -> String {
        match self {
            BigQuantity::Int(i) => preview(i, PREVIEW_DIGIT_CAP),
            BigQuantity::Rational(r) => {
                format!("{}/{}", preview(r.numer(), PREVIEW_DIGIT_CAP), preview(r.denom(), PREVIEW_DIGIT_CAP))
            }
        }
    }
}

impl fmt::Display for BigQuantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.preview())
    }
}

/// Partial maps for the threshold numbers, exact-keyed.
#[derive(Clone, Debug, Default)]
pub struct OracleTable {
    dhj: BTreeMap<(u16, Q), u64>,
    mdhj: BTreeMap<(u16, u64, Q), u64>,
    mdhj_star: BTreeMap<(u16, u64, Q), u64>,
    gr: BTreeMap<(u16, u64), u64>,
}

impl OracleTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert_dhj(&mut self, k: u16, delta: Q, value: u64) {
        self.dhj.insert((k, delta), value);
    }

    pub fn insert_mdhj(&mut self, k: u16, m: u64, delta: Q, value: u64) {
        self.mdhj.insert((k, m, delta), value);
    }

    pub fn insert_mdhj_star(&mut self, k: u16, m: u64, delta: Q, value: u64) {
        self.mdhj_star.insert((k, m, delta), value);
    }

    pub fn insert_gr(&mut self, k: u16, m: u64, value: u64) {
        self.gr.insert((k, m), value);
    }

    pub fn dhj(&self, k: u16, delta: &Q) -> Result<u64> {
        self.dhj
            .get(&(k, delta.clone()))
            .copied()
            .ok_or_else(|| Error::MissingOracleValue(format!("dhj({k}, {})", fmt_q(delta))))
    }

    pub fn mdhj_entry(&self, k: u16, m: u64, delta: &Q) -> Option<u64> {
        self.mdhj.get(&(k, m, delta.clone())).copied()
    }

    pub fn mdhj_star_entry(&self, k: u16, m: u64, delta: &Q) -> Option<u64> {
        self.mdhj_star.get(&(k, m, delta.clone())).copied()
    }

    pub fn gr(&self, k: u16, m: u64) -> Result<u64> {
        self.gr
            .get(&(k, m))
            .copied()
            .ok_or_else(|| Error::MissingOracleValue(format!("gr({k}, {m})")))
    }

    /// Parses the key=value text format, one entry per line:
    ///
    /// ```text
    /// # comments allowed
    /// dhj 2 1/4 = 9
    /// mdhj 2 2 1/2 = 12
    /// mdhj* 2 1 1/2 = 708588
    /// gr 2 1 = 1
    /// ```
    pub fn parse(input: &str) -> Result<Self> {
        let mut table = OracleTable::new();
        for (lineno, raw) in input.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| Error::OracleTableParse { line: lineno + 1, msg };
            let (lhs, rhs) =
                line.split_once('=').ok_or_else(|| err("missing '='".into()))?;
            let value: u64 =
                rhs.trim().parse().map_err(|_| err(format!("bad value '{}'", rhs.trim())))?;
            let fields: Vec<&str> = lhs.split_whitespace().collect();
            match fields.as_slice() {
                ["dhj", k, delta] => {
                    let k = k.parse().map_err(|_| err(format!("bad k '{k}'")))?;
                    table.insert_dhj(k, parse_q(delta)?, value);
                }
                ["mdhj", k, m, delta] => {
                    let k = k.parse().map_err(|_| err(format!("bad k '{k}'")))?;
                    let m = m.parse().map_err(|_| err(format!("bad m '{m}'")))?;
                    table.insert_mdhj(k, m, parse_q(delta)?, value);
                }
                ["mdhj*", k, m, delta] => {
                    let k = k.parse().map_err(|_| err(format!("bad k '{k}'")))?;
                    let m = m.parse().map_err(|_| err(format!("bad m '{m}'")))?;
                    table.insert_mdhj_star(k, m, parse_q(delta)?, value);
                }
                ["gr", k, m] => {
                    let k = k.parse().map_err(|_| err(format!("bad k '{k}'")))?;
                    let m = m.parse().map_err(|_| err(format!("bad m '{m}'")))?;
                    table.insert_gr(k, m, value);
                }
                _ => return Err(err(format!("unrecognized entry '{line}'"))),
            }
        }
        Ok(table)
    }

    pub fn emit(&self) -> String {
        let mut out = String::new();
        for ((k, delta), v) in &self.dhj {
            out.push_str(&format!("dhj {k} {} = {v}\n", fmt_q(delta)));
        }
        for ((k, m, delta), v) in &self.mdhj {
            out.push_str(&format!("mdhj {k} {m} {} = {v}\n", fmt_q(delta)));
        }
        for ((k, m, delta), v) in &self.mdhj_star {
            out.push_str(&format!("mdhj* {k} {m} {} = {v}\n", fmt_q(delta)));
        }
        for ((k, m), v) in &self.gr {
            out.push_str(&format!("gr {k} {m} = {v}\n"));
        }
        out
    }
}

/// Derives the proof parameters for `(k, delta)`: `m0 = dhj(k, delta/4)`
/// from the table, everything else by formula.
pub fn base_params(k: u16, delta: &Q, table: &OracleTable) -> Result<ProofParameters> {
    let quarter = delta.clone() / q_int(4);
    let m0 = table.dhj(k, &quarter)?;
    ProofParameters::derive(k, delta, m0)
}

/// `n(m, eps) = eps^-1 (k+1)^m m` for alphabet `k+1`, with its ceiling.
pub fn n_of(m: u64, eps: &Q, k: u16) -> Result<(Q, BigInt)> {
    if *eps <= Q::zero() || *eps > Q::one() {
        return Err(Error::ParameterOutOfRange("eps must satisfy 0 < eps <= 1".into()));
    }
    if m < 1 {
        return Err(Error::ParameterOutOfRange("m must be >= 1".into()));
    }
    let value = eps.clone().recip() * q_pow(&q_int(k as i64 + 1), m as i64) * q_int(m as i64);
    let ceil = q_ceil(&value);
    Ok((value, ceil))
}

/// The subspace-threshold recursion: base `mdhj(k, 1, delta) = dhj(k, delta)`,
/// step `mdhj(k, m+1, delta) = M + mdhj(k, m, delta/2 * (k+1)^-M)` with
/// `M = dhj(k, delta/2)`. Direct table entries short-circuit the recursion.
pub fn mdhj_bound(k: u16, m: u64, delta: &Q, table: &OracleTable) -> Result<BigQuantity> {
    if m < 1 {
        return Err(Error::ParameterOutOfRange("m must be >= 1".into()));
    }
    check_delta(delta)?;
    if let Some(v) = table.mdhj_entry(k, m, delta) {
        return Ok(BigQuantity::Int(BigInt::from(v)));
    }
    if m == 1 {
        return Ok(BigQuantity::Int(BigInt::from(table.dhj(k, delta)?)));
    }
    let half = delta.clone() / q_int(2);
    let big_m = table.dhj(k, &half)?;
    let shrunk = half * q_pow(&q_int(k as i64 + 1), -(big_m as i64));
    let rest = mdhj_bound(k, m - 1, &shrunk, table)?;
    match rest {
        BigQuantity::Int(i) => Ok(BigQuantity::Int(i + BigInt::from(big_m))),
        BigQuantity::Rational(_) => Err(Error::internal("mdhj_bound", "non-integer recursion value")),
    }
}

/// `mdhj*(k, m, delta) = (delta/2)^-1 (k+1)^M M` with `M = mdhj(k, m, delta/2)`.
pub fn mdhj_star_bound(k: u16, m: u64, delta: &Q, table: &OracleTable) -> Result<BigQuantity> {
    check_delta(delta)?;
    if let Some(v) = table.mdhj_star_entry(k, m, delta) {
        return Ok(BigQuantity::Int(BigInt::from(v)));
    }
    let half = delta.clone() / q_int(2);
    let inner = mdhj_bound(k, m, &half, table)?;
    let big_m = match &inner {
        BigQuantity::Int(i) => i.clone(),
        BigQuantity::Rational(_) => {
            return Err(Error::internal("mdhj_star_bound", "non-integer inner value"))
        }
    };
    let exp: i64 = (&big_m)
        .try_into()
        .map_err(|_| Error::ParameterOutOfRange(format!("mdhj value {} too large to exponentiate", preview(&big_m, 30))))?;
    let value = half.recip() * q_pow(&q_int(k as i64 + 1), exp) * Q::from_integer(big_m);
    Ok(if value.denom().is_one() {
        BigQuantity::Int(value.to_integer())
    } else {
        BigQuantity::Rational(value)
    })
}

/// `F(m, beta) = ceil( beta^-1 (k+1+m)^M1 (k+1)^(M1-m) M1 )` with a given `M1`.
///
/// When `M1 < m` the factor `(k+1)^(M1-m)` can be too small to
/// materialize exactly; the ceiling is then decided by exact small-power
/// comparison: the value lies in `(0, 1]`, hence `F = 1`, as soon as
/// `beta^-1 (k+1+m)^M1 M1 <= (k+1)^(m-M1)`.
pub fn f_of_with_m1(k: u16, m: u64, beta: &Q, m1: u64) -> Result<BigQuantity> {
    check_delta(beta)?;
    if m < 1 || m1 < 1 {
        return Err(Error::ParameterOutOfRange("m and M1 must be >= 1".into()));
    }
    let base = q_int(k as i64 + 1);
    let positive_part = beta.clone().recip()
        * q_pow(&q_int(k as i64 + 1 + m as i64), m1 as i64)
        * q_int(m1 as i64);
    if m1 < m {
        let drop = m - m1;
        // Least e with (k+1)^e >= positive_part; if e <= drop the whole
        // value is in (0, 1].
        let mut e = 0u64;
        let mut acc = Q::one();
        while acc < positive_part {
            acc *= base.clone();
            e += 1;
            if e > drop {
                break;
            }
        }
        if e <= drop {
            return Ok(BigQuantity::Int(BigInt::one()));
        }
    }
    let value = positive_part * q_pow(&base, m1 as i64 - m as i64);
    Ok(BigQuantity::Int(q_ceil(&value)))
}

/// `F(m, beta)` with `M1 = mdhj*(k, m, beta)` resolved through the table.
pub fn f_of(k: u16, m: u64, beta: &Q, table: &OracleTable) -> Result<BigQuantity> {
    let m1 = mdhj_star_bound(k, m, beta, table)?;
    let m1: u64 = m1
        .as_int()
        .and_then(|i| i.try_into().ok())
        .ok_or_else(|| Error::ParameterOutOfRange("M1 too large for iteration".into()))?;
    f_of_with_m1(k, m, beta, m1)
}

/// The iterate `F^(r)`: `F^(1) = F`, `F^(r+1)(m, beta) = F^(r)(F(m, beta), beta)`.
pub fn f_iter(k: u16, r: u64, m: u64, beta: &Q, table: &OracleTable) -> Result<BigQuantity> {
    if r < 1 || r > k as u64 {
        return Err(Error::ParameterOutOfRange(format!("r = {r} outside 1..=k")));
    }
    if r == 1 {
        return f_of(k, m, beta, table);
    }
    let inner = f_of(k, m, beta, table)?;
    let inner: u64 = inner
        .as_int()
        .and_then(|i| i.try_into().ok())
        .ok_or_else(|| Error::ParameterOutOfRange("F value too large to iterate".into()))?;
    f_iter(k, r - 1, inner, beta, table)
}

/// One audited step in the dependency chain of `n_upper`.
#[derive(Clone, Debug)]
pub struct AuditEntry {
    pub name: String,
    pub value: String,
}

/// `N(k, d, delta) = n(GR(k, m(d)), eta^2/2)` with `beta = gamma^2/4k` and
/// `m(d) = max(M0, F^(k)(d, beta))`, plus the full audited chain.
pub fn n_upper(k: u16, d: u64, delta: &Q, table: &OracleTable) -> Result<(BigQuantity, Vec<AuditEntry>)> {
    if d < 1 {
        return Err(Error::ParameterOutOfRange("d must be >= 1".into()));
    }
    let mut audit = Vec::new();
    let push = |name: &str, value: String, audit: &mut Vec<AuditEntry>| {
        audit.push(AuditEntry { name: name.to_string(), value });
    };
    let params = base_params(k, delta, table)?;
    push("m0 = dhj(k, delta/4)", params.m0.to_string(), &mut audit);
    push("theta", fmt_q(&params.theta), &mut audit);
    push("eta", fmt_q(&params.eta), &mut audit);
    push("gamma", fmt_q(&params.gamma), &mut audit);
    push("M0", params.m_cap.to_string(), &mut audit);
    let beta = params.gamma.clone() * params.gamma.clone() / q_int(4 * k as i64);
    push("beta = gamma^2/4k", fmt_q(&beta), &mut audit);
    let f_k = f_iter(k, k as u64, d, &beta, table)?;
    push("F^(k)(d, beta)", f_k.preview(), &mut audit);
    let f_k: u64 = f_k
        .as_int()
        .and_then(|i| i.try_into().ok())
        .ok_or_else(|| Error::ParameterOutOfRange("F^(k) too large for gr lookup".into()))?;
    let m_of_d = (params.m_cap).max(f_k);
    push("m(d) = max(M0, F^(k))", m_of_d.to_string(), &mut audit);
    let gr = table.gr(k, m_of_d)?;
    push("GR(k, m(d))", gr.to_string(), &mut audit);
    let eps = params.eta.clone() * params.eta.clone() / q_int(2);
    push("eta^2/2", fmt_q(&eps), &mut audit);
    let (value, ceil) = n_of(gr, &eps, k)?;
    push("n(GR, eta^2/2)", fmt_q(&value), &mut audit);
    let _ = value;
    Ok((BigQuantity::Int(ceil), audit))
}

fn check_delta(delta: &Q) -> Result<()> {
    if *delta <= Q::zero() || *delta > Q::one() {
        return Err(Error::ParameterOutOfRange(format!(
            "density parameter {} outside (0, 1]",
            fmt_q(delta)
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::q;

    fn table_dhj_quarter() -> OracleTable {
        let mut t = OracleTable::new();
        t.insert_dhj(2, q(1, 4), 9);
        t
    }

    #[test]
    fn base_params_regression() {
        let p = base_params(2, &q_int(1), &table_dhj_quarter()).unwrap();
        assert_eq!(p.m0, 9);
        assert_eq!(p.theta, q(1, 76684));
        assert_eq!(p.eta, q(1, 3680832));
        let eta = q(1, 3680832);
        assert_eq!(p.gamma, eta.clone() * eta / q_int(2));
        assert!(base_params(2, &q(1, 2), &OracleTable::new()).is_err());
    }

    #[test]
    fn n_of_examples() {
        assert_eq!(n_of(1, &q(1, 2), 2).unwrap().1, BigInt::from(6));
        assert_eq!(n_of(1, &q_int(1), 2).unwrap().1, BigInt::from(3));
        assert_eq!(n_of(9, &q(1, 2), 2).unwrap().1, BigInt::from(354294));
        assert!(n_of(1, &q_int(2), 2).is_err());
    }

    #[test]
    fn mdhj_recursion_requests_exact_keys() {
        let mut t = OracleTable::new();
        t.insert_dhj(2, q(1, 2), 3);
        assert_eq!(mdhj_bound(2, 1, &q(1, 2), &t).unwrap(), BigQuantity::Int(BigInt::from(3)));

        // mdhj(2, 2, 1/2) needs dhj(2, 1/4) = 9, then dhj(2, 1/78732).
        let mut t = table_dhj_quarter();
        let err = mdhj_bound(2, 2, &q(1, 2), &t).unwrap_err();
        assert!(err.to_string().contains("dhj(2, 1/78732)"), "{err}");
        t.insert_dhj(2, q(1, 78732), 77);
        assert_eq!(mdhj_bound(2, 2, &q(1, 2), &t).unwrap(), BigQuantity::Int(BigInt::from(86)));

        let err = mdhj_bound(2, 1, &q(1, 4), &OracleTable::new()).unwrap_err();
        assert!(err.to_string().contains("dhj(2, 1/4)"));
    }

    #[test]
    fn mdhj_star_example() {
        let t = table_dhj_quarter();
        let v = mdhj_star_bound(2, 1, &q(1, 2), &t).unwrap();
        assert_eq!(v, BigQuantity::Int(BigInt::from(708588)));
        assert!(mdhj_star_bound(2, 1, &q_int(2), &t).is_err());
        // 708588 = 4 * 3^9 * 9 is an integer multiple of M = 9.
        assert_eq!(708588 % 9, 0);
    }

    #[test]
    fn f_of_examples() {
        let v = f_of_with_m1(2, 1, &q(1, 2), 2).unwrap();
        assert_eq!(v, BigQuantity::Int(BigInt::from(192)));
        // beta = 1, M1 = m: exponent M1 - m = 0.
        let v = f_of_with_m1(2, 3, &q_int(1), 3).unwrap();
        assert_eq!(v, BigQuantity::Int(BigInt::from(6 * 6 * 6 * 3)));
        // Monotone in 1/beta.
        for m1 in 1..5u64 {
            let lo = f_of_with_m1(2, 1, &q(1, 2), m1).unwrap();
            let hi = f_of_with_m1(2, 1, &q(1, 4), m1).unwrap();
            assert!(hi.as_int().unwrap() >= lo.as_int().unwrap());
        }
    }

    #[test]
    fn f_iter_composes() {
        let mut t = OracleTable::new();
        // Stub the mdhj* values so the tower stays desk-scale.
        t.insert_mdhj_star(2, 1, q(1, 2), 2);
        let f1 = f_of(2, 1, &q(1, 2), &t).unwrap();
        assert_eq!(f1, BigQuantity::Int(BigInt::from(192)));
        assert_eq!(f_iter(2, 1, 1, &q(1, 2), &t).unwrap(), f1);
        // F^(2)(1, 1/2) = F(F(1, 1/2), 1/2) = F(192, 1/2).
        t.insert_mdhj_star(2, 192, q(1, 2), 200);
        let f2 = f_iter(2, 2, 1, &q(1, 2), &t).unwrap();
        let manual = f_of(2, 192, &q(1, 2), &t).unwrap();
        assert_eq!(f2, manual);
        assert!(f_iter(2, 3, 1, &q(1, 2), &t).is_err());
    }

    #[test]
    fn n_upper_audits_the_chain() {
        // Fully stubbed chain: dhj(2, 1/4) = 1 keeps every derived
        // constant desk-scale.
        let mut t = OracleTable::new();
        t.insert_dhj(2, q(1, 4), 1);
        let p = base_params(2, &q_int(1), &t).unwrap();
        assert_eq!(p.eta, q(1, 192));
        assert_eq!(p.m_cap, 13);
        let beta = p.gamma.clone() * p.gamma.clone() / q_int(8);
        t.insert_mdhj_star(2, 1, beta.clone(), 1);
        let f1: u64 = f_of(2, 1, &beta, &t).unwrap().as_int().unwrap().try_into().unwrap();
        assert_eq!(f1, 173946175488);
        t.insert_mdhj_star(2, f1, beta.clone(), 1);
        // Second level collapses to 1 through the small-power shortcut.
        let f2 = f_of(2, f1, &beta, &t).unwrap();
        assert_eq!(f2, BigQuantity::Int(BigInt::one()));
        let m_of_d = p.m_cap.max(1);
        t.insert_gr(2, m_of_d, 20);

        let (value, audit) = n_upper(2, 1, &q_int(1), &t).unwrap();
        let (_, expected) = n_of(20, &(p.eta.clone() * p.eta.clone() / q_int(2)), 2).unwrap();
        assert_eq!(value, BigQuantity::Int(expected));
        assert!(audit.iter().any(|e| e.name.starts_with("beta")));
        assert!(audit.iter().any(|e| e.name.starts_with("GR")));
        assert!(audit.iter().any(|e| e.name.starts_with("m(d)")));

        // Missing gr entry is named exactly.
        let mut t2 = OracleTable::new();
        t2.insert_dhj(2, q(1, 4), 1);
        t2.insert_mdhj_star(2, 1, beta.clone(), 1);
        t2.insert_mdhj_star(2, f1, beta, 1);
        let err = n_upper(2, 1, &q_int(1), &t2).unwrap_err();
        assert!(err.to_string().contains("gr(2, 13)"), "{err}");
    }

    #[test]
    fn table_round_trip() {
        let text = "# thresholds\ndhj 2 1/4 = 9\nmdhj 2 2 1/2 = 12\nmdhj* 2 1 1/2 = 708588\ngr 2 1 = 1\n";
        let t = OracleTable::parse(text).unwrap();
        assert_eq!(t.dhj(2, &q(1, 4)).unwrap(), 9);
        assert_eq!(t.mdhj_entry(2, 2, &q(1, 2)), Some(12));
        assert_eq!(t.mdhj_star_entry(2, 1, &q(1, 2)), Some(708588));
        assert_eq!(t.gr(2, 1).unwrap(), 1);
        let emitted = t.emit();
        let reparsed = OracleTable::parse(&emitted).unwrap();
        assert_eq!(reparsed.emit(), emitted);
        assert!(OracleTable::parse("dhj 2 = 9").is_err());
        assert!(OracleTable::parse("zzz 2 1 = 9").is_err());
    }
}
