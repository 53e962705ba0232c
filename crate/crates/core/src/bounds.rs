//! Calculators for the lower bound of the construction and the published
//! upper bounds it is compared against.
//!
//! Every upper bound has the shape `exact integer × factor`, where the factor
//! is 1, (e²+3)/4 or (e²+3)/8. Keeping the factor symbolic lets bounds with a
//! transcendental factor be compared exactly against each other; comparisons
//! against plain integers use a rigorous enclosure of e² that is tightened
//! until the order is decided.

use std::cmp::Ordering;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{exp2_enclosure, round_sig, to_decimal_string};

pub const DEFAULT_DIGITS: u32 = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Factor {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "(e^2+3)/4")]
    E2P3Over4,
    #[serde(rename = "(e^2+3)/8")]
    E2P3Over8,
}

impl Factor {
    /// Multiplicity of the unit (e²+3)/8, or `None` for the plain factor.
    fn units(self) -> Option<u32> {
        match self {
            Factor::One => None,
            Factor::E2P3Over4 => Some(2),
            Factor::E2P3Over8 => Some(1),
        }
    }

    /// Rational enclosure of the factor, width below 10^-digits.
    pub fn interval(self, digits: u32) -> (BigRational, BigRational) {
        match self.units() {
            None => (BigRational::one(), BigRational::one()),
            Some(u) => {
                let (lo, hi) = exp2_enclosure(digits + 1);
                let three = BigRational::from_integer(3.into());
                let scale = BigRational::new(u.into(), 8.into());
                ((lo + &three) * &scale, (hi + three) * scale)
            }
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Factor::One => "1",
            Factor::E2P3Over4 => "(e^2+3)/4",
            Factor::E2P3Over8 => "(e^2+3)/8",
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundValue {
    exact_part: BigInt,
    factor: Factor,
}

impl BoundValue {
    pub fn new(exact_part: BigInt, factor: Factor) -> Self {
        BoundValue { exact_part, factor }
    }

    pub fn integer(v: impl Into<BigInt>) -> Self {
        BoundValue { exact_part: v.into(), factor: Factor::One }
    }

    pub fn exact_part(&self) -> &BigInt {
        &self.exact_part
    }

    pub fn factor(&self) -> Factor {
        self.factor
    }

    /// The exact value when the factor is 1.
    pub fn as_integer(&self) -> Option<&BigInt> {
        (self.factor == Factor::One).then_some(&self.exact_part)
    }

    /// Twice the value, folding a (e²+3)/8 factor into (e²+3)/4.
    pub fn doubled(&self) -> Self {
        match self.factor {
            Factor::E2P3Over8 => BoundValue::new(self.exact_part.clone(), Factor::E2P3Over4),
            f => BoundValue::new(&self.exact_part * 2, f),
        }
    }

    /// Rational enclosure of the value with relative width below 10^-digits.
    pub fn interval(&self, digits: u32) -> (BigRational, BigRational) {
        let (lo, hi) = self.factor.interval(digits + 2);
        let e = BigRational::from_integer(self.exact_part.clone());
        if e.is_negative() {
            (&e * hi, e * lo)
        } else {
            (&e * lo, e * hi)
        }
    }

    /// The value rounded to `digits` significant digits.
    pub fn approx(&self, digits: u32) -> BigRational {
        if let Some(v) = self.as_integer() {
            return BigRational::from_integer(v.clone());
        }
        let (lo, hi) = self.interval(digits + 4);
        round_sig(&((lo + hi) / BigRational::from_integer(2.into())), digits)
    }

    /// Decimal rendering: exact for integer bounds, `digits` significant
    /// digits otherwise.
    pub fn to_decimal(&self, digits: u32) -> String {
        match self.as_integer() {
            Some(v) => v.to_string(),
            None => to_decimal_string(&self.approx(digits), digits),
        }
    }

    /// Certified comparison. Values with transcendental factors are compared
    /// exactly in units of (e²+3)/8; mixed comparisons refine an enclosure
    /// of e² until the intervals separate.
    pub fn compare(&self, other: &Self) -> Ordering {
        match (self.factor.units(), other.factor.units()) {
            (None, None) => self.exact_part.cmp(&other.exact_part),
            (Some(a), Some(b)) => (&self.exact_part * a).cmp(&(&other.exact_part * b)),
            _ => {
                if self.exact_part.is_zero() || other.exact_part.is_zero() {
                    return self.exact_part.sign().cmp(&other.exact_part.sign());
                }
                let mut digits = 20;
                loop {
                    let (a_lo, a_hi) = self.interval(digits);
                    let (b_lo, b_hi) = other.interval(digits);
                    if a_hi < b_lo {
                        return Ordering::Less;
                    }
                    if b_hi < a_lo {
                        return Ordering::Greater;
                    }
                    digits *= 2;
                }
            }
        }
    }
}

impl PartialOrd for BoundValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.compare(other))
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.factor {
            Factor::One => write!(f, "{}", self.exact_part),
            fac => write!(f, "{}*{}", self.exact_part, fac),
        }
    }
}

fn binom2(a: u32) -> u64 {
    let a = a as u64;
    a * a.saturating_sub(1) / 2
}

fn pow2(e: u64) -> BigInt {
    BigInt::one() << e
}

fn pow(base: u64, e: u32) -> BigInt {
    num::pow(BigInt::from(base), e as usize)
}

fn binomial(n: u32, r: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..r {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn require_n(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    Ok(())
}

/// ⌊(n+k)/k⌋^k, for n ≥ k ≥ 1.
pub fn lower_bound(n: u32, k: u32) -> Result<BigInt> {
    if k == 0 || n < k {
        return Err(Error::Domain(format!("lower bound needs n >= k >= 1, got n={n}, k={k}")));
    }
    Ok(pow(((n + k) / k) as u64, k))
}

/// n + 1, the exact maximum for k = 1.
pub fn bihan_exact_k1(n: u32) -> Result<BigInt> {
    require_n(n)?;
    Ok(BigInt::from(n) + 1)
}

/// (e²+3)/4 · 2^C(k,2) · n^k
pub fn bs_solution_bound(n: u32, k: u32) -> Result<BoundValue> {
    require_n(n)?;
    Ok(BoundValue::new(pow2(binom2(k)) * pow(n as u64, k), Factor::E2P3Over4))
}

/// 2^C(n+k,2) · (n+1)^(n+k)
pub fn khovanskii_solution_bound(n: u32, k: u32) -> Result<BoundValue> {
    require_n(n)?;
    Ok(BoundValue::integer(pow2(binom2(n + k)) * pow(n as u64 + 1, n + k)))
}

/// Compact components of a smooth hypersurface: (e²+3)/8 · 2^C(k,2) · n^k
pub fn kappa_upper(n: u32, k: u32) -> Result<BoundValue> {
    require_n(n)?;
    Ok(BoundValue::new(pow2(binom2(k)) * pow(n as u64, k), Factor::E2P3Over8))
}

/// All components of a smooth hypersurface, summed over faces:
/// Σ_{i=0}^{n-1} C(n+1,i) · kappa_upper(n-i, k+1)
pub fn tau_sum_bound(n: u32, k: u32) -> Result<BoundValue> {
    require_n(n)?;
    let mut exact = BigInt::zero();
    for i in 0..n {
        let kappa = kappa_upper(n - i, k + 1)?;
        exact += binomial(n + 1, i) * kappa.exact_part;
    }
    Ok(BoundValue::new(exact, Factor::E2P3Over8))
}

/// Closed form dominating `tau_sum_bound`: (e²+3)/4 · 2^C(k+1,2) · 2^n · n^(k+1)
pub fn component_bound(n: u32, k: u32) -> Result<BoundValue> {
    require_n(n)?;
    Ok(BoundValue::new(
        pow2(binom2(k + 1) + n as u64) * pow(n as u64, k + 1),
        Factor::E2P3Over4,
    ))
}

/// Twice `component_bound`, for possibly singular hypersurfaces.
pub fn singular_bound(n: u32, k: u32) -> Result<BoundValue> {
    Ok(component_bound(n, k)?.doubled())
}

/// (e²+3)/4 · 2^C(k,2) · 2^n · n^k
pub fn full_support_bound(n: u32, k: u32) -> Result<BoundValue> {
    require_n(n)?;
    Ok(BoundValue::new(pow2(binom2(k) + n as u64) * pow(n as u64, k), Factor::E2P3Over4))
}

/// (2n²-n+1)^(n+k) · (2n)^(n-1) · 2^C(n+k,2)
pub fn khovanskii_betti_bound(n: u32, k: u32) -> Result<BoundValue> {
    require_n(n)?;
    let n64 = n as u64;
    Ok(BoundValue::integer(
        pow(2 * n64 * n64 - n64 + 1, n + k) * pow(2 * n64, n - 1) * pow2(binom2(n + k)),
    ))
}

/// n · (n+1)^(n+k+1) · 2^(n-1) · 2^C(n+k+1,2)
pub fn lrw_component_bound(n: u32, k: u32) -> Result<BoundValue> {
    require_n(n)?;
    Ok(BoundValue::integer(
        BigInt::from(n) * pow(n as u64 + 1, n + k + 1) * pow2(n as u64 - 1 + binom2(n + k + 1)),
    ))
}

/// (n+1)^(n+k) · 2^(1+C(n+k,2))
pub fn perrucci_bound(n: u32, k: u32) -> Result<BoundValue> {
    require_n(n)?;
    Ok(BoundValue::integer(pow(n as u64 + 1, n + k) * pow2(1 + binom2(n + k))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundKind {
    LowerBound,
    BihanExactK1,
    BsSolution,
    KhovanskiiSolution,
    KappaUpper,
    TauSum,
    Component,
    Singular,
    FullSupport,
    KhovanskiiBetti,
    LrwComponent,
    Perrucci,
}

impl BoundKind {
    pub const ALL: [BoundKind; 12] = [
        BoundKind::LowerBound,
        BoundKind::BihanExactK1,
        BoundKind::BsSolution,
        BoundKind::KhovanskiiSolution,
        BoundKind::KappaUpper,
        BoundKind::TauSum,
        BoundKind::Component,
        BoundKind::Singular,
        BoundKind::FullSupport,
        BoundKind::KhovanskiiBetti,
        BoundKind::LrwComponent,
        BoundKind::Perrucci,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::LowerBound => "lower_bound",
            BoundKind::BihanExactK1 => "bihan_exact_k1",
            BoundKind::BsSolution => "bs_solution_bound",
            BoundKind::KhovanskiiSolution => "khovanskii_solution_bound",
            BoundKind::KappaUpper => "kappa_upper",
            BoundKind::TauSum => "tau_sum_bound",
            BoundKind::Component => "component_bound",
            BoundKind::Singular => "singular_bound",
            BoundKind::FullSupport => "full_support_bound",
            BoundKind::KhovanskiiBetti => "khovanskii_betti_bound",
            BoundKind::LrwComponent => "lrw_component_bound",
            BoundKind::Perrucci => "perrucci_bound",
        }
    }

    /// `None` when (n, k) is outside the bound's domain.
    pub fn evaluate(self, n: u32, k: u32) -> Option<BoundValue> {
        match self {
            BoundKind::LowerBound => lower_bound(n, k).ok().map(BoundValue::integer),
            BoundKind::BihanExactK1 => bihan_exact_k1(n).ok().map(BoundValue::integer),
            BoundKind::BsSolution => bs_solution_bound(n, k).ok(),
            BoundKind::KhovanskiiSolution => khovanskii_solution_bound(n, k).ok(),
            BoundKind::KappaUpper => kappa_upper(n, k).ok(),
            BoundKind::TauSum => tau_sum_bound(n, k).ok(),
            BoundKind::Component => component_bound(n, k).ok(),
            BoundKind::Singular => singular_bound(n, k).ok(),
            BoundKind::FullSupport => full_support_bound(n, k).ok(),
            BoundKind::KhovanskiiBetti => khovanskii_betti_bound(n, k).ok(),
            BoundKind::LrwComponent => lrw_component_bound(n, k).ok(),
            BoundKind::Perrucci => perrucci_bound(n, k).ok(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderingFlag {
    pub relation: String,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct BoundReport {
    pub n: u32,
    pub k: u32,
    pub digits: u32,
    pub entries: Vec<(BoundKind, Option<BoundValue>)>,
    pub ordering_flags: Vec<OrderingFlag>,
}

pub fn report(n: u32, k: u32, digits: u32) -> Result<BoundReport> {
    require_n(n)?;
    let entries: Vec<_> = BoundKind::ALL.iter().map(|&b| (b, b.evaluate(n, k))).collect();
    let get = |kind: BoundKind| entries.iter().find(|(b, _)| *b == kind).and_then(|(_, v)| v.clone());
    let mut flags = Vec::new();
    let mut flag = |relation: &str, holds: bool| {
        flags.push(OrderingFlag { relation: relation.to_string(), holds })
    };
    let bs = get(BoundKind::BsSolution).expect("defined for n >= 1");
    let t2 = get(BoundKind::Component).expect("defined for n >= 1");
    if let Some(lower) = get(BoundKind::LowerBound) {
        flag("lower_bound <= bs_solution_bound", lower.compare(&bs).is_le());
    }
    let l3 = get(BoundKind::TauSum).expect("defined for n >= 1");
    flag("tau_sum_bound < component_bound", l3.compare(&t2).is_lt());
    if k >= 1 {
        let fs = get(BoundKind::FullSupport).expect("defined for n >= 1");
        flag("full_support_bound < component_bound", fs.compare(&t2).is_lt());
    }
    let kappa = get(BoundKind::KappaUpper).expect("defined for n >= 1");
    flag("2 * kappa_upper == bs_solution_bound", kappa.doubled() == bs);
    let singular = get(BoundKind::Singular).expect("defined for n >= 1");
    flag("singular_bound == 2 * component_bound", singular == t2.doubled());
    let perrucci = get(BoundKind::Perrucci).expect("defined for n >= 1");
    let lrw = get(BoundKind::LrwComponent).expect("defined for n >= 1");
    flag("perrucci_bound < lrw_component_bound", perrucci.compare(&lrw).is_lt());
    Ok(BoundReport { n, k, digits, entries, ordering_flags: flags })
}

impl BoundReport {
    pub fn get(&self, kind: BoundKind) -> Option<&BoundValue> {
        self.entries.iter().find(|(b, _)| *b == kind).and_then(|(_, v)| v.as_ref())
    }

    /// lower_bound / bs_solution_bound, when the lower bound is defined.
    pub fn lower_over_bs(&self) -> Option<BigRational> {
        let lower = self.get(BoundKind::LowerBound)?.as_integer()?.clone();
        let bs = self.get(BoundKind::BsSolution)?;
        Some(round_sig(
            &(BigRational::from_integer(lower) / bs.approx(self.digits + 4)),
            self.digits,
        ))
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let mut entries = serde_json::Map::new();
        for (kind, value) in &self.entries {
            let v = match value {
                None => serde_json::Value::Null,
                Some(v) => serde_json::json!({
                    "exact_part": v.exact_part.to_string(),
                    "factor": v.factor.label(),
                    "approx": v.to_decimal(self.digits),
                }),
            };
            entries.insert(kind.name().to_string(), v);
        }
        serde_json::json!({
            "n": self.n,
            "k": self.k,
            "digits": self.digits,
            "entries": entries,
            "ordering_flags": self.ordering_flags,
            "lower_over_bs": self.lower_over_bs().map(|r| to_decimal_string(&r, self.digits)),
        })
    }

    pub fn to_text(&self) -> String {
        let width = BoundKind::ALL.iter().map(|b| b.name().len()).max().unwrap_or(0);
        let mut out = format!("n = {}, k = {}\n", self.n, self.k);
        for (kind, value) in &self.entries {
            let shown = match value {
                None => "NA".to_string(),
                Some(v) if v.factor == Factor::One => v.to_decimal(self.digits),
                Some(v) => format!("{} = {}", v, v.to_decimal(self.digits)),
            };
            out.push_str(&format!("{:width$}  {}\n", kind.name(), shown, width = width));
        }
        if let Some(r) = self.lower_over_bs() {
            out.push_str(&format!(
                "{:width$}  {}\n",
                "lower_over_bs",
                to_decimal_string(&r, self.digits),
                width = width
            ));
        }
        for f in &self.ordering_flags {
            out.push_str(&format!("[{}] {}\n", if f.holds { "ok" } else { "VIOLATED" }, f.relation));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
    Markdown,
}

impl std::str::FromStr for TableFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(TableFormat::Csv),
            "json" => Ok(TableFormat::Json),
            "md" | "markdown" => Ok(TableFormat::Markdown),
            other => Err(Error::Parse(format!("unknown table format {other:?}"))),
        }
    }
}

/// Grid cells (n, k) for 1 ≤ n ≤ n_max and 1 ≤ k ≤ k_max, ordered by n then
/// k. A k_max of 0 gives the k = 0 column alone.
pub fn table_grid(n_max: u32, k_max: u32) -> Vec<(u32, u32)> {
    let ks: Vec<u32> = if k_max == 0 { vec![0] } else { (1..=k_max).collect() };
    (1..=n_max).flat_map(|n| ks.iter().map(move |&k| (n, k))).collect()
}

pub fn table(n_max: u32, k_max: u32, digits: u32) -> Result<Vec<BoundReport>> {
    table_grid(n_max, k_max)
        .into_par_iter()
        .map(|(n, k)| report(n, k, digits))
        .collect()
}

pub fn table_columns() -> Vec<&'static str> {
    let mut cols = vec!["n", "k"];
    cols.extend(BoundKind::ALL.iter().map(|b| b.name()));
    cols.push("lower_over_bs");
    cols
}

fn row_cells(r: &BoundReport) -> Vec<String> {
    let mut cells = vec![r.n.to_string(), r.k.to_string()];
    for (_, v) in &r.entries {
        cells.push(v.as_ref().map_or("NA".to_string(), |v| v.to_decimal(r.digits)));
    }
    cells.push(r.lower_over_bs().map_or("NA".to_string(), |q| to_decimal_string(&q, r.digits)));
    cells
}

pub fn render_table(rows: &[BoundReport], format: TableFormat) -> String {
    match format {
        TableFormat::Csv => {
            let mut out = table_columns().join(",");
            out.push('\n');
            for r in rows {
                out.push_str(&row_cells(r).join(","));
                out.push('\n');
            }
            out
        }
        TableFormat::Markdown => {
            let cols = table_columns();
            let mut out = format!("| {} |\n", cols.join(" | "));
            out.push_str(&format!("|{}\n", "---|".repeat(cols.len())));
            for r in rows {
                out.push_str(&format!("| {} |\n", row_cells(r).join(" | ")));
            }
            out
        }
        TableFormat::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|r| {
                    let obj: serde_json::Map<_, _> = table_columns()
                        .into_iter()
                        .zip(row_cells(r))
                        .map(|(c, v)| (c.to_string(), serde_json::Value::String(v)))
                        .collect();
                    serde_json::Value::Object(obj)
                })
                .collect();
            let mut out = serde_json::to_string_pretty(&rows).expect("table serializes");
            out.push('\n');
            out
        }
    }
}
