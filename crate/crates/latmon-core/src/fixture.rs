//! Bundled tables: the 32 conjugacy classes of symplectic isometries of
//! `Λ` and the six orbit representatives of `(-2)`/`(-4)` vectors.
//!
//! Both are shipped as JSON with a pinned sha256. Rows carry the strings
//! exactly as printed; known misprints sit in a separate `errata` field.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const TABLE1_JSON: &str = include_str!("../fixtures/table1.json");
pub const TABLE1_SHA256: &str = "7fc9f473c8f0453a05e98ef9cacb6b40ea080b8dc00bc8c8aec2429e612af632";
pub const ORBITS_JSON: &str = include_str!("../fixtures/orbits.json");
pub const ORBITS_SHA256: &str = "b05ef941c3ddb1ee9b3e4908cfeb5f201ff97b4e24886e1d8ed070d82124c143";

pub const TABLE_ROWS: usize = 32;
pub const TABLE_REGULAR_ROWS: usize = 21;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Errata {
    #[serde(default)]
    pub inv_genus_str: Option<String>,
    #[serde(default)]
    pub coinv_genus_str: Option<String>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub no: u32,
    pub ord_f: u64,
    #[serde(rename = "ord_Df")]
    pub ord_df: u64,
    pub inv_lattice_expr: String,
    pub inv_genus_str: String,
    /// explicit lattice, a genus-only marker like `L13`, or absent
    pub coinv_lattice_expr: Option<String>,
    pub coinv_genus_str: Option<String>,
    pub regular: bool,
    /// `K3`, `K3^[2]`, `(no. k)∘ι`, `—`, or empty
    pub type_str: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub errata: Option<Errata>,
}

impl TableRow {
    /// Invariant genus string with errata applied.
    pub fn inv_genus(&self) -> &str {
        self.errata.as_ref().and_then(|e| e.inv_genus_str.as_deref()).unwrap_or(&self.inv_genus_str)
    }

    /// Coinvariant genus string with errata applied.
    pub fn coinv_genus(&self) -> Option<&str> {
        self.errata.as_ref().and_then(|e| e.coinv_genus_str.as_deref()).or(self.coinv_genus_str.as_deref())
    }

    /// The coinvariant expression when it names an explicit lattice.
    pub fn explicit_coinvariant(&self) -> Option<&str> {
        self.coinv_lattice_expr.as_deref().filter(|e| !crate::named::is_genus_marker(e))
    }

    /// Type column says the class is `h∘ι` for a standard `h`.
    pub fn is_composed_with_iota(&self) -> bool {
        self.type_str.contains('ι')
    }

    /// Type column names a natural (standard) realization.
    pub fn is_standard(&self) -> bool {
        self.type_str == "K3" || self.type_str == "K3^[2]"
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRow {
    pub label: u32,
    pub vector_expr: String,
    pub square: i64,
    pub div: i64,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn check(text: &str, expected: &str) -> Result<()> {
    let got = sha256_hex(text.as_bytes());
    if got != expected {
        return Err(Error::Checksum { expected: expected.to_owned(), got });
    }
    Ok(())
}

/// Row count and regular count; every genus string must parse.
pub fn validate_table(rows: &[TableRow]) -> Result<()> {
    if rows.len() != TABLE_ROWS {
        return Err(Error::InvalidArgument(format!("table has {} rows, expected {TABLE_ROWS}", rows.len())));
    }
    let regular = rows.iter().filter(|r| r.regular).count();
    if regular != TABLE_REGULAR_ROWS {
        return Err(Error::InvalidArgument(format!("table has {regular} regular rows, expected {TABLE_REGULAR_ROWS}")));
    }
    for (i, r) in rows.iter().enumerate() {
        if r.no as usize != i + 1 {
            return Err(Error::InvalidArgument(format!("row {} out of order", r.no)));
        }
        crate::genus::parse(r.inv_genus())?;
        if let Some(c) = r.coinv_genus() {
            crate::genus::parse(c)?;
        }
    }
    Ok(())
}

/// The bundled table, checksum verified.
pub fn table1() -> Result<Vec<TableRow>> {
    check(TABLE1_JSON, TABLE1_SHA256)?;
    Ok(serde_json::from_str(TABLE1_JSON)?)
}

/// A table from a file; the structure is validated, the checksum is not.
pub fn load_table(path: &Path) -> Result<Vec<TableRow>> {
    let text = std::fs::read_to_string(path)?;
    let rows: Vec<TableRow> = serde_json::from_str(&text)?;
    validate_table(&rows)?;
    Ok(rows)
}

pub fn orbit_table() -> Result<Vec<OrbitRow>> {
    check(ORBITS_JSON, ORBITS_SHA256)?;
    Ok(serde_json::from_str(ORBITS_JSON)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checksums_match() {
        assert_eq!(sha256_hex(TABLE1_JSON.as_bytes()), TABLE1_SHA256);
        assert_eq!(sha256_hex(ORBITS_JSON.as_bytes()), ORBITS_SHA256);
        assert!(check("tampered", TABLE1_SHA256).is_err());
    }

    #[test]
    fn table_shape() {
        let t = table1().unwrap();
        validate_table(&t).unwrap();
        assert_eq!(t.iter().filter(|r| r.errata.is_some()).count(), 1);
        assert_eq!(t[1].type_str, "(no. 1)∘ι");
        assert!(t[1].is_composed_with_iota());
        assert!(t[0].is_standard());
        assert_eq!(t[12].explicit_coinvariant(), None);
        assert_eq!(t[6].explicit_coinvariant(), Some("D10(2)"));
    }

    #[test]
    fn orbit_rows() {
        let o = orbit_table().unwrap();
        assert_eq!(o.len(), 6);
        let pairs: Vec<(i64, i64)> = o.iter().map(|r| (r.square, r.div)).collect();
        assert_eq!(pairs, vec![(-4, 2), (-4, 2), (-4, 2), (-2, 2), (-2, 1), (-2, 1)]);
    }
}
