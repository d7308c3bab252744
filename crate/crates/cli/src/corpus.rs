//! Regression corpus: named substitutions with expected report fields.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use hpisot::{Error, Result, Substitution};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::pipeline::{analyze, AnalysisOptions};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusEntry {
    pub name: String,
    pub substitution: Value,
    /// Dotted report path ↦ expected value; array elements are addressed by index.
    #[serde(default)]
    pub expected: BTreeMap<String, Value>,
    #[serde(default)]
    pub options: Option<AnalysisOptions>,
}

/// Reads every `*.json` file of `dir`, sorted by entry name.
pub fn load_corpus(dir: &Path) -> Result<Vec<CorpusEntry>> {
    let rd = std::fs::read_dir(dir).map_err(|e| Error::Parse(format!("{}: {e}", dir.display())))?;
    let mut entries = Vec::new();
    for item in rd {
        let path = item.map_err(|e| Error::Parse(e.to_string()))?.path();
        if path.extension().and_then(|x| x.to_str()) != Some("json") {
            continue;
        }
        let text = std::fs::read_to_string(&path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let entry: CorpusEntry = serde_json::from_str(&text)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        entries.push(entry);
    }
    entries.sort_by(|a, b| a.name.cmp(&b.name));
    let mut seen = BTreeSet::new();
    for e in &entries {
        if !seen.insert(&e.name) {
            return Err(Error::Validation(format!("duplicate corpus entry name {:?}", e.name)));
        }
    }
    Ok(entries)
}

/// The value at a dotted path, e.g. `cohomology.dim_h1` or `measures.0.rational`.
pub fn lookup<'a>(v: &'a Value, path: &str) -> Option<&'a Value> {
    path.split('.').try_fold(v, |cur, key| match cur {
        Value::Object(m) => m.get(key),
        Value::Array(a) => key.parse::<usize>().ok().and_then(|i| a.get(i)),
        _ => None,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Mismatch {
    pub path: String,
    pub expected: Value,
    pub actual: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorpusRow {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim_h1: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cr: Option<usize>,
    pub verdicts: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub mismatches: Vec<Mismatch>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorpusSummary {
    pub entries: Vec<CorpusRow>,
    pub all_expectations_met: bool,
}

/// Analyzes one entry; an analysis error is compared against an expected `error` key.
pub fn run_entry(entry: &CorpusEntry) -> (CorpusRow, Option<Value>) {
    let opts = entry.options.clone().unwrap_or_default();
    let outcome = Substitution::from_value(&entry.substitution).and_then(|s| analyze(&s, &opts));
    let (report, error) = match outcome {
        Ok(r) => (Some(serde_json::to_value(&r).expect("report serializes")), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let mut mismatches = Vec::new();
    for (path, expected) in &entry.expected {
        let actual = match (&report, path.as_str()) {
            (_, "error") => error.clone().map(Value::String),
            (Some(r), _) => lookup(r, path).cloned(),
            (None, _) => None,
        };
        if actual.as_ref() != Some(expected) {
            mismatches.push(Mismatch {
                path: path.clone(),
                expected: expected.clone(),
                actual,
            });
        }
    }
    let get = |p: &str| {
        report
            .as_ref()
            .and_then(|r| lookup(r, p))
            .and_then(Value::as_u64)
            .map(|x| x as usize)
    };
    let row = CorpusRow {
        name: entry.name.clone(),
        d: get("pisot.degree"),
        dim_h1: get("cohomology.dim_h1"),
        cr: get("coincidence.cr"),
        verdicts: report
            .as_ref()
            .and_then(|r| r.get("verdicts").cloned())
            .unwrap_or(Value::Null),
        error,
        mismatches,
    };
    (row, report)
}

/// Runs all entries concurrently; rows keep the corpus order.
pub fn run_corpus(entries: &[CorpusEntry]) -> (CorpusSummary, Vec<Option<Value>>) {
    let results: Vec<(CorpusRow, Option<Value>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = entries
            .iter()
            .map(|e| scope.spawn(move || run_entry(e)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("corpus worker panicked"))
            .collect()
    });
    let (rows, reports): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    let all_expectations_met = rows.iter().all(|r| r.mismatches.is_empty());
    (
        CorpusSummary {
            entries: rows,
            all_expectations_met,
        },
        reports,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn dotted_lookup() {
        let v = json!({"a": {"b": [1, {"c": "x"}]}});
        assert_eq!(lookup(&v, "a.b.1.c"), Some(&json!("x")));
        assert_eq!(lookup(&v, "a.b.2"), None);
        assert_eq!(lookup(&v, "a.z"), None);
    }

    #[test]
    fn mismatch_is_reported() {
        let entry: CorpusEntry = serde_json::from_value(json!({
            "name": "fib",
            "substitution": {"alphabet": ["a", "b"], "rules": {"a": "ab", "b": "a"}},
            "expected": {"cohomology.dim_h1": 2, "pisot.degree": 3},
            "options": {"erp_patches": 2}
        }))
        .unwrap();
        let (row, _) = run_entry(&entry);
        assert_eq!(row.dim_h1, Some(2));
        assert_eq!(row.mismatches.len(), 1);
        assert_eq!(row.mismatches[0].path, "pisot.degree");
        assert_eq!(row.mismatches[0].actual, Some(json!(2)));
    }
}
