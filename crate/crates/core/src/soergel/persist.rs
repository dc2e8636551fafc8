//! JSON persistence for [`PCanTable`].
//!
//! One document per (datum, characteristic). Each entry carries the
//! realization hash it was computed under and a digest of its payload, so
//! stale entries can be collected and hand-edited ones detected.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::bimodule::{Bimodule, Label};
use super::pcan::PCanTable;
use super::SoergelError;
use crate::field::Field;
use crate::hecke::HeckeDoc;
use crate::poly::{Poly, PolyMat};
use crate::root_datum::DatumDoc;
use crate::weyl::{EltDoc, WeylGroup};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableHeader {
    pub format_version: u32,
    pub datum_fingerprint: String,
    pub datum: DatumDoc,
    pub characteristic: u32,
    pub realization_hash: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelDoc {
    pub elt: EltDoc,
    pub vecs: Vec<Vec<String>>,
}

/// Right-action matrices are stored row by row as polynomial strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BimoduleDoc {
    pub degrees: Vec<i32>,
    pub act: Vec<Vec<Vec<String>>>,
    pub labels: Vec<LabelDoc>,
    pub frame: Vec<(EltDoc, Vec<String>)>,
    pub word_len: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryDoc {
    pub key: String,
    pub length: usize,
    pub elt: EltDoc,
    pub realization_hash: String,
    pub pcan: HeckeDoc,
    pub rep: BimoduleDoc,
    pub digest: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableDoc {
    pub header: TableHeader,
    pub entries: Vec<EntryDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheSummary {
    pub datum: String,
    pub datum_fingerprint: String,
    pub characteristic: u32,
    pub realization_hash: String,
    pub entries: usize,
    pub stale: usize,
    pub by_length: BTreeMap<usize, usize>,
}

fn strings<F: Field>(v: &[Poly<F>]) -> Vec<String> {
    v.iter().map(|p| p.render()).collect()
}

fn polys<F: Field>(v: &[String]) -> Result<Vec<Poly<F>>, SoergelError> {
    v.iter().map(|s| Poly::parse(s).ok_or_else(|| SoergelError::Cache(format!("unparseable polynomial {s:?}")))).collect()
}

pub fn bimodule_to_doc<F: Field>(g: &WeylGroup, m: &Bimodule<F>) -> BimoduleDoc {
    BimoduleDoc {
        degrees: m.degrees.clone(),
        act: m.act.iter().map(|a| (0..a.rows).map(|i| strings(&a.row(i))).collect()).collect(),
        labels: m.labels.iter().map(|l| LabelDoc { elt: g.to_doc(&l.elt), vecs: l.vecs.iter().map(|v| strings(v)).collect() }).collect(),
        frame: m.frame.iter().map(|(e, r)| (g.to_doc(e), strings(r))).collect(),
        word_len: m.word_len,
    }
}

pub fn bimodule_from_doc<F: Field>(g: &WeylGroup, d: &BimoduleDoc) -> Result<Bimodule<F>, SoergelError> {
    let n = d.degrees.len();
    let mut act = Vec::new();
    for rows in &d.act {
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(SoergelError::Cache("action matrix has the wrong shape".into()));
        }
        let rows = rows.iter().map(|r| polys(r)).collect::<Result<Vec<_>, _>>()?;
        act.push(PolyMat::from_rows(n, &rows));
    }
    let mut labels = Vec::new();
    for l in &d.labels {
        let vecs = l.vecs.iter().map(|v| polys(v)).collect::<Result<Vec<_>, _>>()?;
        labels.push(Label { elt: g.from_doc(&l.elt)?, vecs });
    }
    let mut frame = Vec::new();
    for (e, r) in &d.frame {
        frame.push((g.from_doc(e)?, polys(r)?));
    }
    Ok(Bimodule { degrees: d.degrees.clone(), act, labels, frame, word_len: d.word_len })
}

fn digest(elt: &EltDoc, hash: &str, pcan: &HeckeDoc, rep: &BimoduleDoc) -> String {
    let body = serde_json::to_string(&(elt, hash, pcan, rep)).expect("serializable");
    hex::encode(&Sha256::digest(body.as_bytes())[..16])
}

impl EntryDoc {
    pub fn digest_ok(&self) -> bool {
        self.digest == digest(&self.elt, &self.realization_hash, &self.pcan, &self.rep)
    }
}

impl<F: Field> PCanTable<F> {
    pub fn header(&self) -> TableHeader {
        TableHeader {
            format_version: FORMAT_VERSION,
            datum_fingerprint: self.g.datum.fingerprint(),
            datum: self.g.datum.to_doc(),
            characteristic: F::characteristic(),
            realization_hash: self.real.fingerprint(),
        }
    }

    fn entry_doc(&self, u: &crate::weyl::ExtWeylElt) -> EntryDoc {
        let elt = self.g.to_doc(u);
        let hash = self.real.fingerprint();
        let pcan = self.hecke.to_doc(&self.entries[u]);
        let rep = bimodule_to_doc(&self.g, &self.reps[u]);
        let digest = digest(&elt, &hash, &pcan, &rep);
        EntryDoc { key: self.g.display(u), length: self.g.length(u), elt, realization_hash: hash, pcan, rep, digest }
    }

    /// Entries sorted by (length, key), so equal tables give equal bytes.
    pub fn to_doc(&self) -> TableDoc {
        let mut entries: Vec<EntryDoc> = self.entries.keys().map(|u| self.entry_doc(u)).collect();
        entries.sort_by(|a, b| (a.length, &a.key).cmp(&(b.length, &b.key)));
        TableDoc { header: self.header(), entries }
    }

    /// Loads every entry computed under the current realization. Fails on a
    /// foreign header or a corrupted entry.
    pub fn load_doc(&mut self, doc: &TableDoc) -> Result<(), SoergelError> {
        check_header(&self.header(), &doc.header)?;
        let hash = self.real.fingerprint();
        for e in doc.entries.iter().filter(|e| e.realization_hash == hash) {
            if !e.digest_ok() {
                return Err(SoergelError::Cache(format!("entry {} fails its digest", e.key)));
            }
            let u = self.g.from_doc(&e.elt)?;
            self.entries.insert(u.clone(), self.hecke.from_doc(&e.pcan)?);
            self.reps.insert(u, bimodule_from_doc(&self.g, &e.rep)?);
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<(), SoergelError> {
        write_doc(path, &self.to_doc())
    }

    pub fn load(&mut self, path: &Path) -> Result<(), SoergelError> {
        self.load_doc(&read_doc(path)?)
    }
}

fn check_header(ours: &TableHeader, theirs: &TableHeader) -> Result<(), SoergelError> {
    if theirs.format_version != FORMAT_VERSION {
        return Err(SoergelError::Cache(format!("unsupported format version {}", theirs.format_version)));
    }
    if theirs.datum_fingerprint != ours.datum_fingerprint || theirs.characteristic != ours.characteristic {
        return Err(SoergelError::Cache(format!(
            "cache belongs to datum {} in characteristic {}",
            theirs.datum_fingerprint, theirs.characteristic
        )));
    }
    Ok(())
}

pub fn read_doc(path: &Path) -> Result<TableDoc, SoergelError> {
    let text = std::fs::read_to_string(path).map_err(|e| SoergelError::Cache(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| SoergelError::Cache(format!("{}: {e}", path.display())))
}

/// Writes through a temporary file and a rename.
pub fn write_doc(path: &Path, doc: &TableDoc) -> Result<(), SoergelError> {
    let mut text = serde_json::to_string_pretty(doc).expect("serializable");
    text.push('\n');
    let tmp = path.with_extension("json.tmp");
    std::fs::write(&tmp, text).map_err(|e| SoergelError::Cache(format!("{}: {e}", tmp.display())))?;
    std::fs::rename(&tmp, path).map_err(|e| SoergelError::Cache(format!("{}: {e}", path.display())))
}

pub fn inspect(doc: &TableDoc, current_hash: Option<&str>) -> CacheSummary {
    let hash = current_hash.unwrap_or(&doc.header.realization_hash);
    let mut by_length = BTreeMap::new();
    let mut stale = 0;
    for e in &doc.entries {
        if e.realization_hash == hash {
            *by_length.entry(e.length).or_insert(0) += 1;
        } else {
            stale += 1;
        }
    }
    CacheSummary {
        datum: doc.header.datum.name.clone(),
        datum_fingerprint: doc.header.datum_fingerprint.clone(),
        characteristic: doc.header.characteristic,
        realization_hash: doc.header.realization_hash.clone(),
        entries: doc.entries.len() - stale,
        stale,
        by_length,
    }
}

/// Recomputes every entry from scratch; returns the keys that disagree.
pub fn verify<F: Field>(g: Arc<WeylGroup>, doc: &TableDoc) -> Result<Vec<String>, SoergelError> {
    let mut fresh = PCanTable::<F>::new(g.clone())?;
    check_header(&fresh.header(), &doc.header)?;
    let hash = fresh.real.fingerprint();
    let mut bad = Vec::new();
    for e in doc.entries.iter().filter(|e| e.realization_hash == hash) {
        let ok = e.digest_ok()
            && match g.from_doc(&e.elt) {
                Ok(u) => {
                    fresh.p_canonical(&u)?;
                    let want = fresh.entry_doc(&u);
                    want.pcan == e.pcan && want.rep == e.rep && want.key == e.key
                }
                Err(_) => false,
            };
        if !ok {
            bad.push(e.key.clone());
        }
    }
    Ok(bad)
}

/// Drops entries whose realization hash differs from `current_hash`;
/// returns how many were removed.
pub fn gc(doc: &mut TableDoc, current_hash: &str) -> usize {
    let before = doc.entries.len();
    doc.entries.retain(|e| e.realization_hash == current_hash);
    doc.header.realization_hash = current_hash.to_string();
    before - doc.entries.len()
}
