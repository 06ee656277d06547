use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{AbilityId, DataError, DiagnosticDataset, DiagnosticItem, Result, Split};

/// Sidecar manifest written next to the items file.
#[derive(Serialize, Deserialize)]
struct SidecarManifest {
    ability: AbilityId,
    seed: u64,
    items: usize,
    splits: Vec<Split>,
}

fn sidecar_path(path: &Path) -> std::path::PathBuf {
    let mut os = path.as_os_str().to_owned();
    os.push(".meta.json");
    std::path::PathBuf::from(os)
}

/// Write one JSON record per line with exactly the five schema keys, plus
/// a `<path>.meta.json` sidecar holding ability, seed and split tags.
pub fn save_dataset(dataset: &DiagnosticDataset, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut out = Vec::new();
    for item in &dataset.items {
        serde_json::to_writer(&mut out, item).expect("item serializes");
        out.push(b'\n');
    }
    fs::File::create(path)?.write_all(&out)?;

    let manifest = SidecarManifest {
        ability: dataset.ability,
        seed: dataset.seed,
        items: dataset.items.len(),
        splits: dataset.splits.clone(),
    };
    let bytes = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");
    fs::File::create(sidecar_path(path))?.write_all(&bytes)?;
    Ok(())
}

/// Load a full dataset (items plus sidecar manifest).
pub fn load_dataset(path: &Path) -> Result<DiagnosticDataset> {
    let items = load_items(path)?;
    let bytes = fs::read(sidecar_path(path))?;
    let manifest: SidecarManifest = serde_json::from_slice(&bytes)
        .map_err(|e| DataError::BadManifest(e.to_string()))?;
    if manifest.splits.len() != items.len() || manifest.items != items.len() {
        return Err(DataError::BadManifest(format!(
            "sidecar says {} items, file has {}",
            manifest.items,
            items.len()
        )));
    }
    Ok(DiagnosticDataset {
        ability: manifest.ability,
        seed: manifest.seed,
        items,
        splits: manifest.splits,
    })
}

/// Load and schema-validate the record file alone. This is the import path
/// for externally supplied task files: records must carry exactly the keys
/// `context`, `question`, `options`, `answer`, `answer_index`.
pub fn load_items(path: &Path) -> Result<Vec<DiagnosticItem>> {
    let text = fs::read_to_string(path)?;
    let mut items = Vec::new();
    for (record, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        items.push(parse_record(record, line)?);
    }
    Ok(items)
}

const KEYS: [&str; 5] = ["context", "question", "options", "answer", "answer_index"];

fn parse_record(record: usize, line: &str) -> Result<DiagnosticItem> {
    let value: Value = serde_json::from_str(line)
        .map_err(|_| DataError::SchemaViolation { record, key: "<json>".into() })?;
    let obj = value
        .as_object()
        .ok_or_else(|| DataError::SchemaViolation { record, key: "<object>".into() })?;
    for key in obj.keys() {
        if !KEYS.contains(&key.as_str()) {
            return Err(DataError::SchemaViolation { record, key: key.clone() });
        }
    }
    let field = |key: &str| -> Result<&Value> {
        obj.get(key)
            .ok_or_else(|| DataError::SchemaViolation { record, key: key.into() })
    };
    let text = |key: &str| -> Result<String> {
        field(key)?
            .as_str()
            .map(str::to_string)
            .ok_or_else(|| DataError::SchemaViolation { record, key: key.into() })
    };

    let context = text("context")?;
    let question = text("question")?;
    let answer = text("answer")?;
    let options: Vec<String> = field("options")?
        .as_array()
        .ok_or_else(|| DataError::SchemaViolation { record, key: "options".into() })?
        .iter()
        .map(|v| {
            v.as_str()
                .map(str::to_string)
                .ok_or_else(|| DataError::SchemaViolation { record, key: "options".into() })
        })
        .collect::<Result<_>>()?;
    if options.len() < 2 {
        return Err(DataError::SchemaViolation { record, key: "options".into() });
    }
    let answer_index = field("answer_index")?
        .as_u64()
        .ok_or_else(|| DataError::SchemaViolation { record, key: "answer_index".into() })?
        as usize;
    if answer_index >= options.len() {
        return Err(DataError::SchemaViolation { record, key: "answer_index".into() });
    }
    if options[answer_index] != answer {
        return Err(DataError::SchemaViolation { record, key: "answer".into() });
    }
    Ok(DiagnosticItem { context, question, options, answer, answer_index })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::generate_dataset;

    #[test]
    fn round_trip_preserves_the_dataset() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ana.jsonl");
        let ds = generate_dataset(AbilityId::Ana, 40, 11).unwrap();
        save_dataset(&ds, &path).unwrap();
        let back = load_dataset(&path).unwrap();
        assert_eq!(ds, back);
    }

    #[test]
    fn missing_key_reports_record_and_key() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.jsonl");
        let good = r#"{"context":"c","question":"q","options":["a","b","x","y"],"answer":"a","answer_index":0}"#;
        let bad = r#"{"context":"c","question":"q","options":["a","b","x","y"],"answer":"a"}"#;
        let mut lines = vec![good.to_string(); 7];
        lines.push(bad.to_string());
        fs::write(&path, lines.join("\n")).unwrap();
        match load_items(&path) {
            Err(DataError::SchemaViolation { record, key }) => {
                assert_eq!(record, 7);
                assert_eq!(key, "answer_index");
            }
            other => panic!("expected SchemaViolation, got {other:?}"),
        }
    }

    #[test]
    fn out_of_range_answer_index_is_a_schema_violation() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("oob.jsonl");
        let line = r#"{"context":"c","question":"q","options":["a","b","x","y"],"answer":"a","answer_index":4}"#;
        fs::write(&path, line).unwrap();
        assert!(matches!(
            load_items(&path),
            Err(DataError::SchemaViolation { record: 0, .. })
        ));
    }

    #[test]
    fn unknown_key_is_a_schema_violation() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("extra.jsonl");
        let line = r#"{"context":"c","question":"q","options":["a","b"],"answer":"a","answer_index":0,"hint":"no"}"#;
        fs::write(&path, line).unwrap();
        assert!(matches!(
            load_items(&path),
            Err(DataError::SchemaViolation { record: 0, key }) if key == "hint"
        ));
    }
}
