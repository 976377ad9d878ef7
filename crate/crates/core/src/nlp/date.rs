use std::cmp::Ordering;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

/// A calendar date with optional month and day.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PartialDate {
    pub year: i32,
    pub month: Option<u32>,
    pub day: Option<u32>,
}

impl PartialDate {
    /// Earliest instant the date may denote, as (year, month, day).
    pub fn earliest(&self) -> (i32, u32, u32) {
        (self.year, self.month.unwrap_or(1), self.day.unwrap_or(1))
    }

    /// Total preorder by earliest instant.
    pub fn compare(&self, other: &PartialDate) -> Ordering {
        self.earliest().cmp(&other.earliest())
    }
}

const MONTH_NAMES: [&str; 12] = [
    "january", "february", "march", "april", "may", "june", "july", "august",
    "september", "october", "november", "december",
];

fn month_number(name: &str) -> Option<u32> {
    let n = name.trim_end_matches('.').to_lowercase();
    if n == "sept" {
        return Some(9);
    }
    MONTH_NAMES
        .iter()
        .position(|m| *m == n || (n.len() == 3 && m.starts_with(&n)))
        .map(|i| i as u32 + 1)
}

static DMY: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^(\d{1,2})\s+([A-Za-z]+\.?),?\s+(\d{4})$").unwrap());
static MDY: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^([A-Za-z]+\.?)\s+(\d{1,2}),?\s+(\d{4})$").unwrap());
static MY: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^([A-Za-z]+\.?),?\s+(\d{4})$").unwrap());
static Y: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^(\d{4})$").unwrap());

fn is_leap(y: i32) -> bool {
    (y % 4 == 0 && y % 100 != 0) || y % 400 == 0
}

fn days_in_month(y: i32, m: u32) -> u32 {
    match m {
        2 if is_leap(y) => 29,
        2 => 28,
        4 | 6 | 9 | 11 => 30,
        _ => 31,
    }
}

/// Parses "D Month YYYY", "Month D, YYYY", "Month YYYY" or "YYYY".
pub fn parse_date(s: &str) -> Option<PartialDate> {
    let s = s.trim().trim_end_matches(['.', ',', ';']);
    let valid = |y: i32, m: Option<u32>, d: Option<u32>| -> Option<PartialDate> {
        if !(1..=9999).contains(&y) {
            return None;
        }
        if let Some(m) = m {
            if let Some(d) = d {
                if d == 0 || d > days_in_month(y, m) {
                    return None;
                }
            }
        }
        Some(PartialDate { year: y, month: m, day: d })
    };
    if let Some(c) = DMY.captures(s) {
        let m = month_number(&c[2])?;
        return valid(c[3].parse().ok()?, Some(m), Some(c[1].parse().ok()?));
    }
    if let Some(c) = MDY.captures(s) {
        let m = month_number(&c[1])?;
        return valid(c[3].parse().ok()?, Some(m), Some(c[2].parse().ok()?));
    }
    if let Some(c) = MY.captures(s) {
        let m = month_number(&c[1])?;
        return valid(c[2].parse().ok()?, Some(m), None);
    }
    if let Some(c) = Y.captures(s) {
        return valid(c[1].parse().ok()?, None, None);
    }
    None
}

/// Days since 1970-01-01 for a proleptic Gregorian date.
pub fn days_from_civil(y: i32, m: u32, d: u32) -> i64 {
    let y = i64::from(y) - i64::from(m <= 2);
    let era = y.div_euclid(400);
    let yoe = y - era * 400;
    let m = i64::from(m);
    let mp = (m + 9) % 12;
    let doy = (153 * mp + 2) / 5 + i64::from(d) - 1;
    let doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    era * 146_097 + doe - 719_468
}
