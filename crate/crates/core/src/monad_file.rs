//! JSON monad files. Serialization is canonical: parsing and re-serializing a
//! file written by [`MonadFile::to_json`] reproduces it byte for byte.

use serde::{Deserialize, Serialize};

use crate::cohomology::LineBundleSum;
use crate::constructions::PairedSpaceParams;
use crate::error::{Error, Result};
use crate::lattice::Space;
use crate::monad::Monad;
use crate::polyalgebra::{FieldSpec, PolyMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceRepr {
    pub factor_dims: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Terms {
    #[serde(rename = "A")]
    pub a: LineBundleSum,
    #[serde(rename = "B")]
    pub b: LineBundleSum,
    #[serde(rename = "C")]
    pub c: LineBundleSum,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuilderRecord {
    pub pairs: Vec<usize>,
    pub k: usize,
    pub alpha: Vec<u32>,
    pub homogenized: bool,
}

impl BuilderRecord {
    pub fn new(params: &PairedSpaceParams, homogenized: bool) -> Self {
        BuilderRecord {
            pairs: params.pairs.clone(),
            k: params.k,
            alpha: params.alpha.clone(),
            homogenized,
        }
    }

    pub fn params(&self) -> Result<PairedSpaceParams> {
        PairedSpaceParams::new(self.pairs.clone(), self.k, Some(self.alpha.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builder: Option<BuilderRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonadFile {
    pub space: SpaceRepr,
    pub field: FieldSpec,
    pub terms: Terms,
    pub f: Vec<Vec<String>>,
    pub g: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

impl MonadFile {
    pub fn from_monad(m: &Monad, metadata: Option<Metadata>) -> Self {
        MonadFile {
            space: SpaceRepr { factor_dims: m.space().factor_dims().to_vec() },
            field: m.field(),
            terms: Terms { a: m.a().clone(), b: m.b().clone(), c: m.c().clone() },
            f: m.f().to_string_rows(),
            g: m.g().to_string_rows(),
            metadata,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("monad files always serialize");
        s.push('\n');
        s
    }

    /// Parses every polynomial and checks shapes.
    pub fn to_monad(&self) -> Result<Monad> {
        let space = Space::new(self.space.factor_dims.clone())?;
        let f = parse_matrix(&space, &self.f, self.terms.b.rank(), self.terms.a.rank(), "f")?;
        let g = parse_matrix(&space, &self.g, self.terms.c.rank(), self.terms.b.rank(), "g")?;
        Monad::new(
            space,
            self.field,
            self.terms.a.clone(),
            self.terms.b.clone(),
            self.terms.c.clone(),
            f,
            g,
        )
    }

    /// The same file with every polynomial in canonical form.
    pub fn canonicalize(&self) -> Result<Self> {
        Ok(MonadFile::from_monad(&self.to_monad()?, self.metadata.clone()))
    }
}

fn parse_matrix(
    space: &Space,
    rows: &[Vec<String>],
    nrows: u64,
    ncols: u64,
    name: &str,
) -> Result<PolyMatrix> {
    if rows.len() as u64 != nrows || rows.iter().any(|r| r.len() as u64 != ncols) {
        return Err(Error::ShapeMismatch(format!(
            "{name} must be {nrows}x{ncols} to match the terms"
        )));
    }
    if nrows == 0 || ncols == 0 {
        return Ok(PolyMatrix::zeros(space, nrows as usize, ncols as usize));
    }
    PolyMatrix::parse_rows(space, rows)
}

/// Reads and validates a monad file.
pub fn parse_monad_file(text: &str) -> Result<(Monad, Option<Metadata>)> {
    let file = MonadFile::from_json(text)?;
    let m = file.to_monad()?;
    Ok((m, file.metadata))
}
