//! Machine-checks the shatter-function bounds on a concrete family.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{op_rank, op_shatter, thicket_dimension, thicket_shatter, vc_dimension, vc_shatter_function, RankValue};
use crate::combin::{binomial, binomial_prefix_sum, pow_sat};
use crate::setsystem::SetSystem;
use crate::{Caps, Result};

/// A count or rank appearing on one side of a bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Quantity {
    NegInfinity,
    Value(u128),
}

impl From<RankValue> for Quantity {
    fn from(r: RankValue) -> Self {
        match r {
            RankValue::NegInfinity => Quantity::NegInfinity,
            RankValue::Finite(v) => Quantity::Value(v as u128),
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::NegInfinity => f.write_str("-inf"),
            Quantity::Value(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for Quantity {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Quantity::NegInfinity => s.serialize_str("-inf"),
            Quantity::Value(v) if *v <= u64::MAX as u128 => s.serialize_u64(*v as u64),
            Quantity::Value(v) => s.serialize_str(&v.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Quantity {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match Value::deserialize(d)? {
            Value::Number(n) => n
                .as_u64()
                .map(|v| Quantity::Value(v as u128))
                .ok_or_else(|| serde::de::Error::custom("quantity must be a non-negative integer")),
            Value::String(s) if s == "-inf" => Ok(Quantity::NegInfinity),
            Value::String(s) => s
                .parse::<u128>()
                .map(Quantity::Value)
                .map_err(|_| serde::de::Error::custom(format!("bad quantity {s:?}"))),
            other => Err(serde::de::Error::custom(format!("bad quantity {other}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditRow {
    pub bound: String,
    pub params: BTreeMap<String, Value>,
    pub lhs: Quantity,
    pub rhs: Quantity,
    pub pass: bool,
}

impl AuditRow {
    /// Row asserting `lhs <= rhs`.
    pub fn at_most(bound: &str, params: BTreeMap<String, Value>, lhs: Quantity, rhs: Quantity) -> Self {
        AuditRow {
            bound: bound.to_string(),
            params,
            lhs,
            rhs,
            pass: lhs <= rhs,
        }
    }

    /// Row asserting `lhs >= rhs`.
    pub fn at_least(bound: &str, mut params: BTreeMap<String, Value>, lhs: Quantity, rhs: Quantity) -> Self {
        params.insert("relation".into(), json!(">="));
        AuditRow {
            bound: bound.to_string(),
            params,
            lhs,
            rhs,
            pass: lhs >= rhs,
        }
    }

    pub fn params_text(&self) -> String {
        self.params
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}={s}"),
                other => format!("{k}={other}"),
            })
            .collect::<Vec<_>>()
            .join(";")
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BoundAuditReport {
    pub rows: Vec<AuditRow>,
}

impl BoundAuditReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AuditRow> {
        self.rows.iter().filter(|r| !r.pass)
    }
}

macro_rules! params {
    ($($k:literal => $v:expr),* $(,)?) => {{
        let mut m = BTreeMap::new();
        $( m.insert($k.to_string(), json!($v)); )*
        m
    }};
}

fn rank_json(r: RankValue) -> Value {
    serde_json::to_value(r).expect("rank serializes")
}

/// `sum_{i <= k} (2^s - 1)^{n-i} C(n, i)`.
pub fn op_corollary_bound(s: usize, n: usize, k: RankValue) -> u128 {
    let Some(k) = k.finite() else { return 0 };
    let base = pow_sat(2, s as u64).saturating_sub(1);
    (0..=(k as usize).min(n)).fold(0u128, |acc, i| {
        acc.saturating_add(pow_sat(base, (n - i) as u64).saturating_mul(binomial(n as u64, i as u64)))
    })
}

/// `sum_{i <= b} C(n, i) a0^{n-i} a1^i` with `a0 = sum_{i<r} C(s, i)`, `a1 = 2^s - a0`.
pub fn op_recurrence_bound(s: usize, r: usize, n: usize, b: RankValue) -> u128 {
    let Some(b) = b.finite() else { return 0 };
    let a0 = binomial_prefix_sum(s as u64, r as i64 - 1);
    let a1 = pow_sat(2, s as u64) - a0;
    (0..=(b as usize).min(n)).fold(0u128, |acc, i| {
        let term = binomial(n as u64, i as u64)
            .saturating_mul(pow_sat(a0, (n - i) as u64))
            .saturating_mul(pow_sat(a1, i as u64));
        acc.saturating_add(term)
    })
}

/// Evaluates every shatter-function bound on `f`:
///
/// * `vc_sauer_shelah`: `pi_F(n) <= sum_{i<=d} C(n,i)`, `d` the VC dimension
///   (evaluated at `min(n, |X|)` when `n` exceeds the universe);
/// * `thicket_sauer_shelah`: `rho_F(n) <= sum_{i<=k} C(n,i)`, `k` the thicket dimension;
/// * `op_rank_shatter`: `psi^s_F(n) <= sum_{i<=k} (2^s-1)^{n-i} C(n,i)`, `k = opR_s(F)`;
/// * `op_rank_zero`: when `opR_r(F) = 0`, `psi^s_F(n) <= (sum_{i<r} C(s,i))^n`;
/// * `rank_scaling`: `opR_{s1}(F) >= floor(s2/s1) opR_{s2}(F)` for `s1 < s2 <= s`;
/// * `subfamily_monotone`: op-ranks of two fixed subfamilies never exceed the family's;
/// * `op_rank_recurrence`: `psi^s_F(n) <= sum_{i<=b} C(n,i) a0^{n-i} a1^i`, `b = opR_r(F)`.
pub fn audit_bounds(f: &SetSystem, s: usize, r: usize, n: usize, caps: &Caps) -> Result<BoundAuditReport> {
    let mut rows = Vec::new();

    let d = vc_dimension(f, caps)?;
    let n_eff = n.min(f.universe());
    let pi = vc_shatter_function(f, n_eff, caps)?;
    rows.push(AuditRow::at_most(
        "vc_sauer_shelah",
        params!("n" => n, "n_eval" => n_eff, "d" => rank_json(d)),
        Quantity::Value(pi),
        Quantity::Value(binomial_prefix_sum(n as u64, d.as_i64())),
    ));

    let k = thicket_dimension(f);
    let rho = thicket_shatter(f, n);
    rows.push(AuditRow::at_most(
        "thicket_sauer_shelah",
        params!("n" => n, "k" => rank_json(k)),
        Quantity::Value(rho),
        Quantity::Value(binomial_prefix_sum(n as u64, k.as_i64())),
    ));

    let ks = op_rank(f, s, caps)?;
    let psi = op_shatter(f, s, n, caps)?;
    rows.push(AuditRow::at_most(
        "op_rank_shatter",
        params!("s" => s, "n" => n, "k" => rank_json(ks)),
        Quantity::Value(psi),
        Quantity::Value(op_corollary_bound(s, n, ks)),
    ));

    let kr = op_rank(f, r, caps)?;
    if kr == RankValue::Finite(0) {
        let base = binomial_prefix_sum(s as u64, r as i64 - 1);
        rows.push(AuditRow::at_most(
            "op_rank_zero",
            params!("s" => s, "r" => r, "n" => n),
            Quantity::Value(psi),
            Quantity::Value(pow_sat(base, n as u64)),
        ));
    }

    let profile: Vec<RankValue> = (1..=s).map(|t| op_rank(f, t, caps)).collect::<Result<_>>()?;
    for s1 in 1..=s {
        for s2 in s1 + 1..=s {
            let factor = (s2 / s1) as u128;
            let rhs = match profile[s2 - 1] {
                RankValue::NegInfinity => Quantity::NegInfinity,
                RankValue::Finite(v) => Quantity::Value(factor * v as u128),
            };
            rows.push(AuditRow::at_least(
                "rank_scaling",
                params!("s1" => s1, "s2" => s2),
                profile[s1 - 1].into(),
                rhs,
            ));
        }
    }

    let mut subfamilies = Vec::new();
    if !f.is_empty() {
        let last = *f.sets().last().unwrap();
        subfamilies.push(("drop_last", f.filter(|x| x != last)));
        let half = f.sets()[f.len() / 2];
        subfamilies.push(("lower_half", f.filter(|x| x < half)));
    }
    for (label, sub) in &subfamilies {
        for t in 1..=s {
            rows.push(AuditRow::at_most(
                "subfamily_monotone",
                params!("s" => t, "subfamily" => *label, "size" => sub.len()),
                op_rank(sub, t, caps)?.into(),
                profile[t - 1].into(),
            ));
        }
    }

    rows.push(AuditRow::at_most(
        "op_rank_recurrence",
        params!(
            "s" => s, "r" => r, "n" => n, "b" => rank_json(kr),
            "a0" => binomial_prefix_sum(s as u64, r as i64 - 1) as u64,
        ),
        Quantity::Value(psi),
        Quantity::Value(op_recurrence_bound(s, r, n, kr)),
    ));

    Ok(BoundAuditReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setsystem::{generate, Kind};

    fn row<'a>(rep: &'a BoundAuditReport, name: &str) -> &'a AuditRow {
        rep.rows.iter().find(|r| r.bound == name).unwrap()
    }

    #[test]
    fn powerset_thicket_bound() {
        let pw = generate(&Kind::Powerset(3)).unwrap();
        let rep = audit_bounds(&pw, 1, 1, 4, &Caps::default()).unwrap();
        let b = row(&rep, "thicket_sauer_shelah");
        assert_eq!(b.rhs, Quantity::Value(15));
        assert!(b.pass);
        assert!(rep.all_pass());
    }

    #[test]
    fn thresholds_rank_zero_bound() {
        let th = generate(&Kind::Thresholds(3)).unwrap();
        let rep = audit_bounds(&th, 2, 2, 2, &Caps::default()).unwrap();
        let d = row(&rep, "op_rank_zero");
        assert_eq!(d.rhs, Quantity::Value(9));
        assert!(d.pass);
        assert!(rep.all_pass());
    }

    #[test]
    fn empty_family_vacuous() {
        let e = SetSystem::empty_family(3).unwrap();
        let rep = audit_bounds(&e, 2, 2, 3, &Caps::default()).unwrap();
        assert!(rep.all_pass());
        for r in &rep.rows {
            if r.bound != "rank_scaling" {
                assert_eq!(r.lhs, Quantity::Value(0), "{}", r.bound);
            }
        }
    }

    #[test]
    fn recurrence_bound_formula() {
        // s = 2, r = 1: a0 = 1, a1 = 3; b = 1, n = 2: 1 + 2*3 = 7.
        assert_eq!(op_recurrence_bound(2, 1, 2, RankValue::Finite(1)), 7);
        // b >= n gives (a0 + a1)^n = 2^{sn}.
        assert_eq!(op_recurrence_bound(2, 2, 3, RankValue::Finite(5)), 64);
        assert_eq!(op_corollary_bound(1, 4, RankValue::Finite(3)), 15);
        assert_eq!(op_corollary_bound(2, 2, RankValue::NegInfinity), 0);
    }

    #[test]
    fn quantity_json() {
        assert_eq!(serde_json::to_string(&Quantity::NegInfinity).unwrap(), "\"-inf\"");
        let q: Quantity = serde_json::from_str("12").unwrap();
        assert_eq!(q, Quantity::Value(12));
    }
}
