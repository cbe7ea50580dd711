//! Dataset retrieval: download the public blog-corpus repository archive
//! over HTTPS and lay its documents out as `dest/{train,test}/<class>/...`.
//! Every other command works offline; this one is the only network user.

use std::io::Read;
use std::path::{Component, Path, PathBuf};

use crate::error::{Error, Result};

/// Archive of the repository hosting the five-variety blog corpus.
pub const DEFAULT_URL: &str =
    "https://github.com/autoritas/RD-Lab/archive/refs/heads/master.tar.gz";

/// Directory inside the repository that holds the corpus splits.
const CORPUS_DIR: &str = "hispablogs";

fn split_dir(name: &str) -> Option<&'static str> {
    match name.to_ascii_lowercase().as_str() {
        "train" | "training" => Some("train"),
        "test" | "testing" => Some("test"),
        _ => None,
    }
}

/// Pull `<split>/<class>/<file>` out of an archive entry path, accepting
/// any leading prefix up to the corpus directory.
fn relocate(path: &Path) -> Option<PathBuf> {
    let parts: Vec<&str> = path
        .components()
        .filter_map(|c| match c {
            Component::Normal(p) => p.to_str(),
            _ => None,
        })
        .collect();
    let at = parts.iter().position(|p| p.eq_ignore_ascii_case(CORPUS_DIR))?;
    match &parts[at + 1..] {
        [split, class, rest @ ..] if !rest.is_empty() => {
            let split = split_dir(split)?;
            let mut out = PathBuf::from(split);
            out.push(*class);
            for p in rest {
                out.push(*p);
            }
            Some(out)
        }
        _ => None,
    }
}

/// Extract the corpus subtree of a gzipped tar stream into `dest`,
/// normalizing split directory names. Returns the number of documents
/// written.
pub fn extract_corpus_archive<R: Read>(reader: R, dest: &Path) -> Result<usize> {
    let tar = flate2::read::GzDecoder::new(reader);
    let mut archive = tar::Archive::new(tar);
    let mut written = 0usize;
    let entries = archive.entries().map_err(|e| Error::Fetch(e.to_string()))?;
    for entry in entries {
        let mut entry = entry.map_err(|e| Error::Fetch(e.to_string()))?;
        if !entry.header().entry_type().is_file() {
            continue;
        }
        let path = entry.path().map_err(|e| Error::Fetch(e.to_string()))?.into_owned();
        let Some(rel) = relocate(&path) else { continue };
        let target = dest.join(rel);
        if let Some(dir) = target.parent() {
            std::fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.to_owned(), source })?;
        }
        let mut out = std::fs::File::create(&target)
            .map_err(|source| Error::Io { path: target.clone(), source })?;
        std::io::copy(&mut entry, &mut out)
            .map_err(|source| Error::Io { path: target.clone(), source })?;
        written += 1;
    }
    if written == 0 {
        return Err(Error::Fetch(format!(
            "archive contained no `{CORPUS_DIR}/<split>/<class>/` documents"
        )));
    }
    Ok(written)
}

/// Download the archive and extract the corpus into `dest`.
pub fn fetch_data(url: &str, dest: &Path) -> Result<usize> {
    let response = ureq::get(url)
        .timeout(std::time::Duration::from_secs(600))
        .call()
        .map_err(|e| Error::Fetch(e.to_string()))?;
    extract_corpus_archive(response.into_reader(), dest)
}
