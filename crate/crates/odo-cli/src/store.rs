//! Oracle (de)serialization through the ODOF container.

use crate::config::BuiltOracle;
use anyhow::{bail, Result};
use odo_core::io::Container;
use std::path::Path;

const META_SECTION: &str = "meta";
const ORACLE_SECTION: &str = "oracle";

#[derive(serde::Serialize, serde::Deserialize)]
struct Meta {
    kind: String,
    scalar: String,
}

pub fn save(oracle: &BuiltOracle, path: &Path) -> Result<()> {
    let mut c = Container::new();
    let (kind, scalar) = match oracle {
        BuiltOracle::NaInt(o) => {
            c.put(ORACLE_SECTION, o)?;
            ("na-do", "u64")
        }
        BuiltOracle::NaFloat(o) => {
            c.put(ORACLE_SECTION, o)?;
            ("na-do", "f64")
        }
        BuiltOracle::HierInt(o) => {
            c.put(ORACLE_SECTION, o.as_ref())?;
            ("hierarchy-do", "u64")
        }
        BuiltOracle::HierFloat(o) => {
            c.put(ORACLE_SECTION, o.as_ref())?;
            ("hierarchy-do", "f64")
        }
        BuiltOracle::Short(o) => {
            c.put(ORACLE_SECTION, o.as_ref())?;
            ("short-dso", "u64")
        }
        BuiltOracle::General(o) => {
            c.put(ORACLE_SECTION, o.as_ref())?;
            ("general-dso", "u64")
        }
    };
    c.put(
        META_SECTION,
        &Meta {
            kind: kind.to_string(),
            scalar: scalar.to_string(),
        },
    )?;
    c.write_file(path)?;
    Ok(())
}

pub fn load(path: &Path) -> Result<BuiltOracle> {
    let c = Container::read_file(path)?;
    let meta: Meta = c.get(META_SECTION)?;
    Ok(match (meta.kind.as_str(), meta.scalar.as_str()) {
        ("na-do", "u64") => BuiltOracle::NaInt(c.get(ORACLE_SECTION)?),
        ("na-do", "f64") => BuiltOracle::NaFloat(c.get(ORACLE_SECTION)?),
        ("hierarchy-do", "u64") => BuiltOracle::HierInt(Box::new(c.get(ORACLE_SECTION)?)),
        ("hierarchy-do", "f64") => BuiltOracle::HierFloat(Box::new(c.get(ORACLE_SECTION)?)),
        ("short-dso", _) => BuiltOracle::Short(Box::new(c.get(ORACLE_SECTION)?)),
        ("general-dso", _) => BuiltOracle::General(Box::new(c.get(ORACLE_SECTION)?)),
        (k, s) => bail!("unknown oracle container: kind {k:?}, scalar {s:?}"),
    })
}
