//! A directory of result records, one JSON file per `(p, grading)`.
//!
//! Files are written through a temporary file and renamed into place. A
//! record whose version tag matches the running engine is never replaced by
//! a different value.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use mackey_cpn::cohomology::CohomResult;
use mackey_cpn::grading::Grading;
use mackey_cpn::mackey::MackeyFunctor;
use serde_json::{json, Value};

pub const STORE_ENV: &str = "MACKEY_STORE";

#[derive(Debug, PartialEq, Eq)]
pub enum SaveOutcome {
    Written,
    Unchanged,
    /// Stored under an older engine version; overwritten.
    Replaced,
    /// Same version, different value; left as it was.
    Conflict,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    pub p: u64,
    pub grading: Grading,
    pub value: Option<MackeyFunctor>,
    pub trace: Value,
    pub version: String,
}

impl Record {
    pub fn from_result(r: &CohomResult, version: &str) -> Self {
        Record {
            p: r.p,
            grading: r.grading.clone(),
            value: r.functor().cloned(),
            trace: r.trace_json(),
            version: version.to_string(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "key": {"p": self.p, "n": self.grading.n(), "grading": self.grading.to_string()},
            "grading": self.grading,
            "value": self.value.as_ref().map_or(json!("unknown"), |m| m.to_json()),
            "trace": self.trace,
            "version": self.version,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, String> {
        let p = v["key"]["p"].as_u64().ok_or("missing key.p")?;
        let grading: Grading =
            serde_json::from_value(v["grading"].clone()).map_err(|e| format!("grading: {e}"))?;
        let value = match &v["value"] {
            Value::String(s) if s == "unknown" => None,
            other => Some(MackeyFunctor::from_json(other).map_err(|e| e.to_string())?),
        };
        let version = v["version"].as_str().ok_or("missing version")?.to_string();
        Ok(Record {
            p,
            grading,
            value,
            trace: v["trace"].clone(),
            version,
        })
    }
}

pub struct Store {
    dir: PathBuf,
}

impl Store {
    pub fn open(dir: impl Into<PathBuf>) -> io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Store { dir })
    }

    pub fn path(&self, p: u64, g: &Grading) -> PathBuf {
        let a: Vec<String> = g.a().iter().map(|x| x.to_string()).collect();
        self.dir
            .join(format!("p{p}_n{}_c={}_a={}.json", g.n(), g.c(), a.join(",")))
    }

    pub fn load(&self, p: u64, g: &Grading) -> io::Result<Option<Record>> {
        let path = self.path(p, g);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e),
        };
        let v: Value = serde_json::from_str(&text).map_err(io::Error::other)?;
        Record::from_json(&v)
            .map(Some)
            .map_err(|e| io::Error::other(format!("{}: {e}", path.display())))
    }

    pub fn save(&self, rec: &Record) -> io::Result<SaveOutcome> {
        let path = self.path(rec.p, &rec.grading);
        let outcome = match self.load(rec.p, &rec.grading)? {
            Some(old) if old.version == rec.version => {
                return Ok(if old.value == rec.value {
                    SaveOutcome::Unchanged
                } else {
                    SaveOutcome::Conflict
                });
            }
            Some(_) => SaveOutcome::Replaced,
            None => SaveOutcome::Written,
        };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        let text = serde_json::to_string_pretty(&rec.to_json()).map_err(io::Error::other)?;
        tmp.write_all(text.as_bytes())?;
        tmp.write_all(b"\n")?;
        tmp.as_file().sync_all()?;
        match outcome {
            SaveOutcome::Replaced => {
                tmp.persist(&path).map_err(|e| e.error)?;
            }
            _ => {
                if let Err(e) = tmp.persist_noclobber(&path) {
                    if e.error.kind() != io::ErrorKind::AlreadyExists {
                        return Err(e.error);
                    }
                    // another writer got there first; its record stands
                    return self.save(rec);
                }
            }
        }
        Ok(outcome)
    }
}
