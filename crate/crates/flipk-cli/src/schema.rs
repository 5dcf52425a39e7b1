//! Input document schema: K-data as JSON with per-degree rank and torsion
//! lists. Torsion lists need not be in invariant-factor form; they are
//! canonicalized on load. Unknown fields are rejected.

use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use flipk::{FgAbGroup, KData};

/// Upper bound on generators per degree; guards against accidental
/// astronomical ranks blowing up the quadratic block assembly.
pub const MAX_GENERATORS: u64 = 4096;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KDataDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub k0: GroupDoc,
    pub k1: GroupDoc,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    #[serde(default)]
    pub rank: u64,
    #[serde(default)]
    pub torsion: Vec<u64>,
}

/// A schema or I/O problem with an input document; rendered to stderr and
/// mapped to exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for InputError {}

impl KDataDocument {
    pub fn parse(text: &str) -> Result<Self, InputError> {
        let doc: KDataDocument = serde_json::from_str(text)
            .map_err(|e| InputError(format!("schema violation: {e}")))?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn load(path: &Path) -> Result<Self, InputError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
    }

    fn validate(&self) -> Result<(), InputError> {
        for (degree, group) in [(0, &self.k0), (1, &self.k1)] {
            for (i, t) in group.torsion.iter().enumerate() {
                if *t < 2 {
                    return Err(InputError(format!(
                        "schema violation: k{degree}.torsion[{i}]: torsion entries must be >= 2, got {t}"
                    )));
                }
            }
            if group.rank + group.torsion.len() as u64 > MAX_GENERATORS {
                return Err(InputError(format!(
                    "k{degree}: more than {MAX_GENERATORS} generators"
                )));
            }
        }
        Ok(())
    }

    pub fn to_kdata(&self) -> KData {
        let convert = |g: &GroupDoc| {
            let coeffs: Vec<BigInt> = g.torsion.iter().map(|&t| BigInt::from(t)).collect();
            FgAbGroup::canonicalize(g.rank as usize, &coeffs)
                .expect("validated coefficients are nonnegative")
        };
        KData::new(convert(&self.k0), convert(&self.k1))
    }
}
