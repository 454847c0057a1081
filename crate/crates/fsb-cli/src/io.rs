//! Input and output plumbing: ring syntax, formed-space files, JSON
//! emission, and CSV tables for homology and range reports.

use crate::ranges::StabilityRanges;
use anyhow::{anyhow, Context};
use fsb_core::{FormedSpace, HomologyReport, RingSpec};
use num_bigint::BigInt;
use std::io::Read;
use std::path::Path;

/// Parse the command-line ring syntax: `Z` or `Zmod:m`.
pub fn parse_ring(s: &str) -> anyhow::Result<RingSpec> {
    if s == "Z" {
        return Ok(RingSpec::Z);
    }
    if let Some(m) = s.strip_prefix("Zmod:") {
        let m: u64 = m.parse().with_context(|| format!("bad modulus in ring '{s}'"))?;
        if m < 2 {
            return Err(anyhow!("modulus must be at least 2, got {m}"));
        }
        return Ok(RingSpec::zmod(m));
    }
    Err(anyhow!("unknown ring '{s}': expected 'Z' or 'Zmod:m'"))
}

pub fn ring_to_string(ring: RingSpec) -> String {
    match ring {
        RingSpec::Z => "Z".into(),
        RingSpec::Zmod { m } => format!("Zmod:{m}"),
    }
}

/// Read a JSON value from a file, or from stdin when the path is `-`.
pub fn load_json(path: &Path) -> anyhow::Result<serde_json::Value> {
    let text = if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf).context("reading stdin")?;
        buf
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    serde_json::from_str(&text).with_context(|| format!("parsing JSON from {}", path.display()))
}

/// Load a formed space from its JSON file format:
/// {"ring": {...}, "rank": n, "lambda": [[...]], "del": [...]}.
pub fn load_space(path: &Path) -> anyhow::Result<FormedSpace> {
    let value = load_json(path)?;
    FormedSpace::from_json(&value)
        .map_err(|e| anyhow!("{}: not a formed space: {e}", path.display()))
}

/// Parse a coset description {"base": [...], "subgens": [[...], ...]} used
/// by the unimodular-vector complex.
pub fn load_coset(path: &Path) -> anyhow::Result<(Vec<BigInt>, Vec<Vec<BigInt>>)> {
    let value = load_json(path)?;
    let vector = |v: &serde_json::Value, what: &str| -> anyhow::Result<Vec<BigInt>> {
        v.as_array()
            .ok_or_else(|| anyhow!("{what} must be an array of integers"))?
            .iter()
            .map(|x| fsb_core::formed::bigint_from_json(x).map_err(|e| anyhow!("{what}: {e}")))
            .collect()
    };
    let base = vector(
        value.get("base").ok_or_else(|| anyhow!("coset file needs a 'base' vector"))?,
        "base",
    )?;
    let subgens = value
        .get("subgens")
        .ok_or_else(|| anyhow!("coset file needs a 'subgens' list"))?
        .as_array()
        .ok_or_else(|| anyhow!("'subgens' must be a list of vectors"))?
        .iter()
        .map(|g| vector(g, "subgens entry"))
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok((base, subgens))
}

/// Write pretty JSON to the file, or to stdout when no path is given.
pub fn emit_json(value: &serde_json::Value, out: Option<&Path>) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    emit_text(&format!("{text}\n"), out)
}

pub fn emit_text(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

/// A homology report as a CSV table, one row per computed degree.
pub fn homology_csv(report: &HomologyReport) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(["degree", "reduced_betti", "torsion"])?;
    for idx in 0..report.reduced_betti.len() {
        let degree = idx as i64 - 1;
        let torsion =
            report.torsion[idx].iter().map(|t| t.to_string()).collect::<Vec<_>>().join(";");
        w.write_record([degree.to_string(), report.reduced_betti[idx].to_string(), torsion])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Stability ranges as a CSV table.
pub fn ranges_csv(rows: &[StabilityRanges]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(["n", "ring", "coefficient_degree", "c", "epi_range", "second_range_kind", "second_range"])?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            ring_to_string(r.ring),
            r.coefficient_degree.map_or_else(|| "constant".into(), |d| d.to_string()),
            r.c.to_string(),
            r.epi_range.cell(),
            r.second_range_kind.to_string(),
            r.mono_or_iso_range.cell(),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// JSON shape shared by the homology-bearing commands.
pub fn homology_json(report: &HomologyReport) -> serde_json::Value {
    let degrees: Vec<serde_json::Value> = (0..report.reduced_betti.len())
        .map(|idx| {
            serde_json::json!({
                "degree": idx as i64 - 1,
                "reduced_betti": report.reduced_betti[idx],
                "torsion": report.torsion[idx].iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    serde_json::json!({
        "degrees": degrees,
        "verified_connectivity": report.verified_connectivity,
        "max_degree": report.max_degree,
        "predicted_bound": report.predicted_bound,
        "formula": report.formula,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_syntax_round_trips() {
        for (text, ring) in [("Z", RingSpec::Z), ("Zmod:2", RingSpec::zmod(2)), ("Zmod:12", RingSpec::zmod(12))] {
            assert_eq!(parse_ring(text).unwrap(), ring);
            assert_eq!(ring_to_string(ring), text);
        }
        assert!(parse_ring("Q").is_err());
        assert!(parse_ring("Zmod:1").is_err());
        assert!(parse_ring("Zmod:x").is_err());
    }

    #[test]
    fn space_files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("space.json");
        let a = FormedSpace::x_power(RingSpec::zmod(3), 4);
        std::fs::write(&path, serde_json::to_string(&a.to_json()).unwrap()).unwrap();
        let b = load_space(&path).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn loader_reports_bad_forms() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        std::fs::write(
            &path,
            r#"{"ring":{"kind":"Z"},"rank":2,"lambda":[[0,1],[1,0]],"del":[0,0]}"#,
        )
        .unwrap();
        let err = load_space(&path).unwrap_err().to_string();
        assert!(err.contains("not a formed space"), "{err}");
    }

    #[test]
    fn csv_tables_have_headers_and_rows() {
        let rows = vec![crate::ranges::stability_ranges(&crate::ranges::RangeQuery {
            n: 12,
            ring: RingSpec::Z,
            coefficient_degree: None,
        })
        .unwrap()];
        let table = ranges_csv(&rows).unwrap();
        let mut lines = table.lines();
        assert_eq!(
            lines.next().unwrap(),
            "n,ring,coefficient_degree,c,epi_range,second_range_kind,second_range"
        );
        assert_eq!(lines.next().unwrap(), "12,Z,constant,0,i <= 4,mono,all i");
    }
}
