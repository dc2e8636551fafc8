use std::fs::{File, OpenOptions};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use pkl_core::field::{is_prime, Field};
use pkl_core::root_datum::RootDatum;
use pkl_core::soergel::pcan::PCanTable;
use pkl_core::soergel::persist::{self, TableDoc};
use pkl_core::tilt::{self, MultTable, TableFormat};
use pkl_core::weyl::{ExtWeylElt, Sector, WeylGroup};
use pkl_core::{hecke::Hecke, with_field};

use crate::{Config, Fail, ASSUMPTIONS, CACHE, CONFIG, FINITARY};

fn load_datum(c: &Config) -> Result<RootDatum, Fail> {
    match (&c.datum_file, &c.datum) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| Fail::new(CONFIG, format!("{}: {e}", path.display())))?;
            Ok(RootDatum::from_json(&text)?)
        }
        (None, Some(name)) => Ok(RootDatum::named(name)?),
        (None, None) => Err(Fail::new(CONFIG, "one of --datum or --datum-file is required")),
    }
}

fn group(c: &Config) -> Result<Arc<WeylGroup>, Fail> {
    Ok(Arc::new(WeylGroup::new(load_datum(c)?)?))
}

fn check_p(p: u64) -> Result<(), Fail> {
    if p != 0 && !is_prime(p) {
        return Err(Fail::new(CONFIG, format!("p = {p} is neither 0 nor a prime")));
    }
    Ok(())
}

fn unsupported(p: u64) -> Fail {
    Fail::new(CONFIG, format!("characteristic {p} is not supported (0 and primes up to 47)"))
}

/// Fails with exit code 1 when the assumptions do not hold, unless overridden.
fn gate(c: &Config, g: &WeylGroup) -> Result<(), Fail> {
    let report = g.datum.check_assumptions(c.p)?;
    if report.all_ok() {
        return Ok(());
    }
    if c.override_assumptions {
        eprintln!("warning: assumptions fail for p = {}; continuing because of --override-assumptions", c.p);
        return Ok(());
    }
    Err(Fail::new(ASSUMPTIONS, format!("assumptions fail for p = {}:\n{report}", c.p)))
}

fn emit(c: &Config, text: &str) -> Result<(), Fail> {
    match &c.output {
        Some(path) => std::fs::write(path, text).map_err(|e| Fail::new(CONFIG, format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn subset(g: &WeylGroup, text: &str) -> Result<Vec<usize>, Fail> {
    let mut out: Vec<usize> = text
        .split(|ch: char| ch == ',' || ch.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| g.simple_by_name(s).ok_or_else(|| Fail::new(CONFIG, format!("unknown simple reflection {s:?}"))))
        .collect::<Result<_, _>>()?;
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn element(g: &WeylGroup, text: &Option<String>, flag: &str) -> Result<ExtWeylElt, Fail> {
    let s = text.as_deref().ok_or_else(|| Fail::new(CONFIG, format!("--{flag} is required")))?;
    Ok(g.parse(s)?)
}

pub fn check(c: &Config) -> Result<(), Fail> {
    check_p(c.p)?;
    let d = load_datum(c)?;
    let report = d.check_assumptions(c.p)?;
    let text = if c.format == "json" {
        serde_json::to_string_pretty(&report).expect("serializable") + "\n"
    } else {
        format!("datum {} ({})\n{report}\n", d.name, d.fingerprint())
    };
    emit(c, &text)?;
    if !report.all_ok() {
        if c.override_assumptions {
            eprintln!("warning: assumptions fail; overridden");
        } else {
            return Err(Fail::new(ASSUMPTIONS, "assumptions fail"));
        }
    }
    Ok(())
}

pub fn enumerate(c: &Config) -> Result<(), Fail> {
    let g = group(c)?;
    let omegas = if g.omega_is_finite() { g.omega_group()? } else { g.omega_elements(c.omega_bound) };
    let mut elts = g.enumerate(c.max_len, Sector::All, Some(&omegas))?;
    elts.sort_by_cached_key(|x| (g.length(x), g.display(x)));
    let text: String = elts.iter().map(|x| format!("{}\t{}\n", g.length(x), g.display(x))).collect();
    emit(c, &text)
}

pub fn kl(c: &Config) -> Result<(), Fail> {
    let g = group(c)?;
    let w = element(&g, &c.w, "w")?;
    let h = Hecke::new(g.clone());
    let b = h.canonical_basis(&w);
    let text = match &c.y {
        Some(_) => format!("{}\n", b.get(&element(&g, &c.y, "y")?).cloned().unwrap_or_default()),
        None => format!("{}\n", h.display(&b)),
    };
    emit(c, &text)
}

/// Exclusive ownership of a cache file for the lifetime of the value.
struct CacheLock(PathBuf);

impl CacheLock {
    fn acquire(path: &Path) -> Result<Self, Fail> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| Fail::new(CACHE, format!("{}: {e}", dir.display())))?;
        }
        let lock = path.with_extension("json.lock");
        let _: File = OpenOptions::new()
            .write(true)
            .create_new(true)
            .open(&lock)
            .map_err(|_| Fail::new(CACHE, format!("cache {} is locked by another process ({})", path.display(), lock.display())))?;
        Ok(CacheLock(lock))
    }
}

impl Drop for CacheLock {
    fn drop(&mut self) {
        let _ = std::fs::remove_file(&self.0);
    }
}

fn cache_path(c: &Config, g: &WeylGroup) -> PathBuf {
    if let Some(p) = &c.cache {
        return p.clone();
    }
    let dir = std::env::var_os("PKL_CACHE_DIR").map(PathBuf::from).unwrap_or_else(|| PathBuf::from(".pkl-cache"));
    dir.join(format!("{}-p{}.json", g.datum.fingerprint(), c.p))
}

/// Runs `body` on a table backed by the configured cache file.
fn with_table<F: Field, T>(
    c: &Config,
    g: Arc<WeylGroup>,
    body: impl FnOnce(&mut PCanTable<F>) -> Result<T, Fail>,
) -> Result<T, Fail> {
    let start = Instant::now();
    let mut t = PCanTable::<F>::new(g.clone())?;
    let path = cache_path(c, &g);
    let lock = if c.no_cache { None } else { Some(CacheLock::acquire(&path)?) };
    if lock.is_some() && path.exists() {
        t.load(&path)?;
    }
    let before = t.entries.len();
    let out = body(&mut t)?;
    if lock.is_some() && t.entries.len() != before {
        t.save(&path)?;
    }
    if c.stats {
        eprintln!(
            "stats: computed={} cache_hits={} stored={} elapsed_ms={}",
            t.stats.computed,
            t.stats.cache_hits,
            t.entries.len(),
            start.elapsed().as_millis()
        );
    }
    Ok(out)
}

pub fn pkl(c: &Config) -> Result<(), Fail> {
    check_p(c.p)?;
    let g = group(c)?;
    gate(c, &g)?;
    let w = element(&g, &c.w, "w")?;
    let y = c.y.as_ref().map(|_| element(&g, &c.y, "y")).transpose()?;
    let text = with_field!(c.p, F => with_table::<F, String>(c, g.clone(), |t| {
        let b = t.p_canonical(&w)?;
        Ok(match &y {
            Some(y) => format!("{}\n", b.get(y).cloned().unwrap_or_default()),
            None => format!("{}\n", t.hecke.display(&b)),
        })
    }))
    .ok_or_else(|| unsupported(c.p))??;
    emit(c, &text)
}

pub fn tilt(c: &Config) -> Result<(), Fail> {
    check_p(c.p)?;
    let g = group(c)?;
    let format: TableFormat = c.format.parse().map_err(|e: String| Fail::new(CONFIG, e))?;
    let (l, k) = (subset(&g, &c.l)?, subset(&g, &c.k)?);
    for s in [&l, &k] {
        if !g.is_finitary(s) {
            let names: Vec<&str> = s.iter().map(|&i| g.simples[i].name.as_str()).collect();
            return Err(Fail::new(FINITARY, format!("{{{}}} does not generate a finite group", names.join(", "))));
        }
    }
    gate(c, &g)?;
    let table: MultTable = with_field!(c.p, F => with_table::<F, MultTable>(c, g.clone(), |t| {
        let mut m = tilt::mult_table(t, &l, &k, c.max_len)?;
        m.metadata.insert("datum".into(), g.datum.name.clone());
        m.metadata.insert("realization_hash".into(), t.real.fingerprint());
        m.metadata.insert("tool_version".into(), env!("CARGO_PKG_VERSION").into());
        Ok(m)
    }))
    .ok_or_else(|| unsupported(c.p))??;
    emit(c, &table.render(format))
}

fn existing_cache(c: &Config, g: &WeylGroup) -> Result<(PathBuf, CacheLock, TableDoc), Fail> {
    let path = cache_path(c, g);
    if !path.exists() {
        return Err(Fail::new(CACHE, format!("no cache at {}", path.display())));
    }
    let lock = CacheLock::acquire(&path)?;
    let doc = persist::read_doc(&path)?;
    Ok((path, lock, doc))
}

fn current_hash(c: &Config, g: &Arc<WeylGroup>) -> Result<String, Fail> {
    with_field!(c.p, F => PCanTable::<F>::new(g.clone()).map(|t| t.real.fingerprint()))
        .ok_or_else(|| unsupported(c.p))?
        .map_err(Fail::from)
}

pub fn cache_inspect(c: &Config) -> Result<(), Fail> {
    check_p(c.p)?;
    let g = group(c)?;
    let (path, _lock, doc) = existing_cache(c, &g)?;
    let s = persist::inspect(&doc, Some(&current_hash(c, &g)?));
    let mut text = format!(
        "{}\ndatum {} ({}) p = {}: {} entries, {} stale\nrealization {}\n",
        path.display(),
        s.datum,
        s.datum_fingerprint,
        s.characteristic,
        s.entries,
        s.stale,
        s.realization_hash
    );
    for (len, n) in &s.by_length {
        text.push_str(&format!("  length {len}: {n}\n"));
    }
    emit(c, &text)
}

pub fn cache_verify(c: &Config) -> Result<(), Fail> {
    check_p(c.p)?;
    let g = group(c)?;
    let (_path, _lock, doc) = existing_cache(c, &g)?;
    let bad = with_field!(c.p, F => persist::verify::<F>(g.clone(), &doc)).ok_or_else(|| unsupported(c.p))??;
    if !bad.is_empty() {
        return Err(Fail::new(CACHE, format!("corrupted entries: {}", bad.join(", "))));
    }
    emit(c, &format!("verified {} entries\n", doc.entries.len()))
}

pub fn cache_gc(c: &Config) -> Result<(), Fail> {
    check_p(c.p)?;
    let g = group(c)?;
    let (path, _lock, mut doc) = existing_cache(c, &g)?;
    let removed = persist::gc(&mut doc, &current_hash(c, &g)?);
    persist::write_doc(&path, &doc)?;
    emit(c, &format!("removed {removed} stale entries, kept {}\n", doc.entries.len()))
}
