//! JSON and CSV formats.
//!
//! * diversity: `{"n": 3, "values": [{"set": [0, 1], "value": 1.0}, ...]}` listing every
//!   subset of size at least two exactly once;
//! * profile: `{"n": 4, "f": [0, 1, 1, 1]}`;
//! * split weighting: `{"n": 4, "splits": [{"set": [1, 2], "weight": 0.5}, ...]}` with
//!   canonical sides (not containing element 0);
//! * point set: `{"dim": 2, "points": [[0, 0], [1, 0]]}`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::diversity::{FiniteDiversity, DENSE_CAP};
use crate::error::{Error, Result};
use crate::phi::PhiTable;
use crate::points::{PointConfiguration, PointSet};
use crate::profile::SymmetricProfile;
use crate::split::SplitWeighting;
use crate::subset;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SetValue {
    set: Vec<usize>,
    value: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiversityJson {
    n: usize,
    values: Vec<SetValue>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileJson {
    n: usize,
    f: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SplitEntry {
    set: Vec<usize>,
    weight: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightsJson {
    n: usize,
    splits: Vec<SplitEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointSetJson {
    dim: usize,
    points: Vec<Vec<f64>>,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Format(e.to_string())
}

/// Mask of a strictly increasing index list.
fn sorted_set(n: usize, set: &[usize]) -> Result<u64> {
    if set.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Format(format!("set {set:?} is not strictly increasing")));
    }
    subset::from_indices(n, set)
}

pub fn parse_diversity(text: &str) -> Result<FiniteDiversity> {
    let raw: DiversityJson = serde_json::from_str(text).map_err(json_error)?;
    if raw.n == 0 || raw.n > DENSE_CAP {
        return Err(Error::CapExceeded {
            operation: "diversity JSON",
            n: raw.n,
            cap: DENSE_CAP,
        });
    }
    let entries = raw
        .values
        .iter()
        .map(|e| Ok((sorted_set(raw.n, &e.set)?, e.value)))
        .collect::<Result<Vec<_>>>()?;
    FiniteDiversity::from_entries(raw.n, entries)
}

pub fn diversity_to_json(div: &FiniteDiversity) -> String {
    let values = (0..1u64 << div.n())
        .filter(|m| m.count_ones() >= 2)
        .map(|m| SetValue {
            set: subset::to_indices(m),
            value: div.values()[m as usize],
        })
        .collect();
    serde_json::to_string_pretty(&DiversityJson { n: div.n(), values }).expect("serializable")
}

pub fn parse_profile(text: &str) -> Result<SymmetricProfile> {
    let raw: ProfileJson = serde_json::from_str(text).map_err(json_error)?;
    if raw.f.len() != raw.n {
        return Err(Error::Format(format!("profile has {} entries for n = {}", raw.f.len(), raw.n)));
    }
    SymmetricProfile::new(raw.f)
}

pub fn profile_to_json(f: &SymmetricProfile) -> String {
    serde_json::to_string_pretty(&ProfileJson {
        n: f.n(),
        f: f.values().to_vec(),
    })
    .expect("serializable")
}

pub fn parse_weights(text: &str) -> Result<SplitWeighting> {
    let raw: WeightsJson = serde_json::from_str(text).map_err(json_error)?;
    if raw.n == 0 || raw.n > subset::MAX_GROUND_SET {
        return Err(Error::CapExceeded {
            operation: "split weighting JSON",
            n: raw.n,
            cap: subset::MAX_GROUND_SET,
        });
    }
    let entries = raw
        .splits
        .iter()
        .map(|e| Ok((sorted_set(raw.n, &e.set)?, e.weight)))
        .collect::<Result<Vec<_>>>()?;
    SplitWeighting::from_entries(raw.n, entries)
}

pub fn weights_to_json(w: &SplitWeighting) -> String {
    let splits = w
        .iter()
        .map(|(m, weight)| SplitEntry {
            set: subset::to_indices(m),
            weight,
        })
        .collect();
    serde_json::to_string_pretty(&WeightsJson { n: w.n(), splits }).expect("serializable")
}

pub fn parse_point_set(text: &str) -> Result<PointSet> {
    let raw: PointSetJson = serde_json::from_str(text).map_err(json_error)?;
    PointSet::from_rows(raw.dim, &raw.points)
}

pub fn point_set_to_json(ps: &PointSet) -> String {
    let points = (0..ps.n()).map(|p| ps.point(p).to_vec()).collect();
    serde_json::to_string_pretty(&PointSetJson { dim: ps.dim(), points }).expect("serializable")
}

/// Formats with 12 significant digits, like C's `%.12g`.
pub fn format_g12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    let sci = format!("{x:.11e}");
    // rounding may carry into the next decade
    let exp = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse::<i32>().ok())
        .unwrap_or(exp);
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let (mantissa, e) = sci.split_once('e').expect("scientific");
        let e: i32 = e.parse().expect("exponent");
        let sign = if e < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa.to_string()), e.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// `point,coord_0,..` header, one row per point.
pub fn coordinates_csv(p: &PointConfiguration) -> String {
    let mut out = String::from("point");
    for axis in 0..p.dim() {
        let _ = write!(out, ",coord_{axis}");
    }
    out.push('\n');
    for i in 0..p.n() {
        out.push_str(&i.to_string());
        for &c in p.point(i) {
            out.push(',');
            out.push_str(&format_g12(c));
        }
        out.push('\n');
    }
    out
}

/// Columns `n,ell,k,phi,psi_cap,psi`: `φ_ℓ(k)`, `Ψ_{x(ℓ)}(k)` and `ψ_ℓ(k) = min(ℓ, k)`
/// for `1 <= ℓ <= n−1`, `0 <= k <= n−1`.
pub fn tables_csv(n: usize) -> Result<String> {
    let table = PhiTable::new(n)?;
    let mut out = String::from("n,ell,k,phi,psi_cap,psi\n");
    for ell in 1..n {
        let x = (n * (n - 1)) as f64 / (2 * ell * (n - ell)) as f64;
        for k in 0..n {
            let _ = writeln!(
                out,
                "{n},{ell},{k},{},{},{}",
                format_g12(table.get(ell, k)),
                format_g12(crate::phi::capped_psi(x, k)),
                k.min(ell)
            );
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g12_formatting() {
        assert_eq!(format_g12(1.9), "1.9");
        assert_eq!(format_g12(38.0 / 15.0), "2.53333333333");
        assert_eq!(format_g12(0.0), "0");
        assert_eq!(format_g12(-3.0), "-3");
        assert_eq!(format_g12(1e-7), "1e-07");
        assert_eq!(format_g12(123456789012345.0), "1.23456789012e+14");
        assert_eq!(format_g12(9.9999999999999), "10");
    }

    #[test]
    fn diversity_json_round_trip() {
        let d = FiniteDiversity::from_fn(3, |m| m.count_ones() as f64 * 0.5).unwrap();
        assert_eq!(parse_diversity(&diversity_to_json(&d)).unwrap(), d);
    }

    #[test]
    fn diversity_json_rejects_bad_input() {
        assert!(matches!(parse_diversity("{\"n\": 2"), Err(Error::Format(_))));
        assert!(parse_diversity(r#"{"n": 2, "values": []}"#).is_err());
        assert!(parse_diversity(r#"{"n": 2, "values": [{"set": [1, 0], "value": 1}]}"#).is_err());
        assert!(parse_diversity(r#"{"n": 2, "values": [{"set": [0, 2], "value": 1}]}"#).is_err());
        assert!(parse_diversity(r#"{"n": 0, "values": []}"#).is_err());
        assert!(parse_diversity(r#"{"n": 2, "values": [{"set": [0, 1], "value": 1}], "x": 1}"#).is_err());
    }

    #[test]
    fn profile_and_weights_json() {
        let f = parse_profile(r#"{"n": 3, "f": [0, 1, 1.5]}"#).unwrap();
        assert_eq!(f.values(), &[0.0, 1.0, 1.5]);
        assert_eq!(parse_profile(&profile_to_json(&f)).unwrap(), f);
        assert!(parse_profile(r#"{"n": 2, "f": [0, 1, 1.5]}"#).is_err());
        assert!(parse_profile(r#"{"n": 3, "f": [0, 2, 1]}"#).is_err());

        let w = parse_weights(r#"{"n": 4, "splits": [{"set": [1, 2], "weight": 3}]}"#).unwrap();
        assert_eq!(w.get(0b0110), 3.0);
        assert_eq!(parse_weights(&weights_to_json(&w)).unwrap(), w);
        assert!(parse_weights(r#"{"n": 4, "splits": [{"set": [0, 2], "weight": 3}]}"#).is_err());
    }

    #[test]
    fn point_set_json() {
        let ps = parse_point_set(r#"{"dim": 2, "points": [[0, 0], [1, 0.5]]}"#).unwrap();
        assert_eq!(ps.point(1), &[1.0, 0.5]);
        assert_eq!(parse_point_set(&point_set_to_json(&ps)).unwrap(), ps);
        assert!(parse_point_set(r#"{"dim": 2, "points": [[0]]}"#).is_err());
    }

    #[test]
    fn coordinate_csv_layout() {
        let p = PointConfiguration::new(2, 2, vec![0.0, 1.5, 3.0, 0.0]).unwrap();
        assert_eq!(coordinates_csv(&p), "point,coord_0,coord_1\n0,0,1.5\n1,3,0\n");
    }

    #[test]
    fn tables_have_boundary_columns() {
        let csv = tables_csv(20).unwrap();
        assert!(csv.lines().any(|l| l == "20,10,19,1.9,1.9,10"));
        for line in csv.lines().skip(1) {
            let cols: Vec<&str> = line.split(',').collect();
            match cols[2] {
                "0" => assert_eq!(cols[3], "0"),
                "1" => assert_eq!(cols[3], "1"),
                _ => {}
            }
        }
    }
}
