//! On-disk constant caches: π enclosures (binary, one file per precision)
//! and the wild-number table (text).
//!
//! Both caches are best-effort accelerators. A missing, unreadable, or
//! structurally invalid file is reported as a warning and repaired by
//! recomputation; it never fails a run. Writes go through a
//! write-temporary-then-rename sequence so concurrent runs sharing a cache
//! directory only ever observe complete files.
//!
//! π file layout: the magic bytes `SINTAIL-PI\0`, one version byte, the
//! precision in bits as a little-endian u64, then the enclosure's lower
//! endpoint mantissa in little-endian byte order. The upper endpoint is
//! not stored — the canonical enclosure shape is reconstructed and
//! re-validated on load.
//!
//! Wild file layout: a header line `# sintail-wild v1 limit=<L> bits=<p>`
//! followed by one `<k>,<W_k>` line per entry in ascending k. A cache may
//! seed a scan with a larger limit only when its stored precision is at
//! least the requested one.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use sintail_core::{pi_from_lo_mantissa_le_bytes, pi_lo_mantissa_le_bytes, Ctx, WildTable};

const PI_MAGIC: &[u8] = b"SINTAIL-PI\0";
const PI_VERSION: u8 = 1;
const WILD_HEADER_PREFIX: &str = "# sintail-wild v1";

/// Resolves the cache directory: the SINTAIL_CACHE_DIR environment
/// variable wins, then an explicit flag, then the user cache directory,
/// then a local fallback.
pub fn resolve_dir(flag: Option<&Path>) -> PathBuf {
    if let Some(env) = std::env::var_os("SINTAIL_CACHE_DIR") {
        if !env.is_empty() {
            return PathBuf::from(env);
        }
    }
    if let Some(dir) = flag {
        return dir.to_path_buf();
    }
    if let Some(xdg) = std::env::var_os("XDG_CACHE_HOME") {
        if !xdg.is_empty() {
            return Path::new(&xdg).join("sintail");
        }
    }
    if let Some(home) = std::env::var_os("HOME") {
        if !home.is_empty() {
            return Path::new(&home).join(".cache").join("sintail");
        }
    }
    PathBuf::from(".sintail-cache")
}

/// Installs every valid `pi-<bits>.bin` found in `dir` into the context.
/// Invalid files are skipped with a warning.
pub fn warm_pi(ctx: &mut Ctx, dir: &Path, err: &mut dyn io::Write) {
    let entries = match fs::read_dir(dir) {
        Ok(e) => e,
        Err(_) => return,
    };
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| {
            p.file_name()
                .and_then(|n| n.to_str())
                .is_some_and(|n| n.starts_with("pi-") && n.ends_with(".bin"))
        })
        .collect();
    files.sort();
    for path in files {
        if let Err(msg) = install_pi_file(ctx, &path) {
            let _ = writeln!(err, "warning: ignoring pi cache {}: {msg}", path.display());
        }
    }
}

fn install_pi_file(ctx: &mut Ctx, path: &Path) -> Result<(), String> {
    let data = fs::read(path).map_err(|e| e.to_string())?;
    let rest = data.strip_prefix(PI_MAGIC).ok_or("bad magic")?;
    let (&version, rest) = rest.split_first().ok_or("truncated header")?;
    if version != PI_VERSION {
        return Err(format!("unsupported version {version}"));
    }
    if rest.len() < 8 {
        return Err("truncated header".into());
    }
    let (bits_le, payload) = rest.split_at(8);
    let bits64 = u64::from_le_bytes(bits_le.try_into().expect("eight header bytes"));
    let bits = u32::try_from(bits64).map_err(|_| "precision out of range".to_string())?;
    let iv = pi_from_lo_mantissa_le_bytes(bits, payload).map_err(|e| e.to_string())?;
    ctx.install_pi(bits, iv).map_err(|e| e.to_string())
}

/// Writes the widest π enclosure the run computed, if that precision is
/// not yet on disk. Repeated invocations with the same arguments then
/// start with their highest-precision constant ready.
pub fn persist_pi(ctx: &Ctx, dir: &Path, err: &mut dyn io::Write) {
    let Some((bits, iv)) = ctx.cached_pis().max_by_key(|(b, _)| *b) else {
        return;
    };
    let path = dir.join(format!("pi-{bits}.bin"));
    if path.exists() {
        return;
    }
    let mut data = Vec::with_capacity(PI_MAGIC.len() + 9 + (bits as usize).div_ceil(8));
    data.extend_from_slice(PI_MAGIC);
    data.push(PI_VERSION);
    data.extend_from_slice(&u64::from(bits).to_le_bytes());
    data.extend_from_slice(&pi_lo_mantissa_le_bytes(iv));
    if let Err(e) = write_atomic(&path, &data) {
        let _ = writeln!(
            err,
            "warning: could not write pi cache {}: {e}",
            path.display()
        );
    }
}

/// Location of the wild-number table inside a cache directory.
pub fn wild_path(dir: &Path) -> PathBuf {
    dir.join("wild.txt")
}

/// A parsed wild-table cache file.
#[derive(Debug)]
pub struct WildCacheFile {
    pub limit: u64,
    pub bits: u32,
    pub wilds: Vec<u64>,
}

/// Reads and parses the wild-table cache. `Ok(None)` means the file does
/// not exist; `Err` carries a description of structural damage.
pub fn read_wild(path: &Path) -> Result<Option<WildCacheFile>, String> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.to_string()),
    };
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty cache file")?;
    let meta = header
        .strip_prefix(WILD_HEADER_PREFIX)
        .ok_or("unrecognized header")?;
    let mut limit = None;
    let mut bits = None;
    for field in meta.split_whitespace() {
        if let Some(v) = field.strip_prefix("limit=") {
            limit = Some(v.parse::<u64>().map_err(|e| e.to_string())?);
        } else if let Some(v) = field.strip_prefix("bits=") {
            bits = Some(v.parse::<u32>().map_err(|e| e.to_string())?);
        } else {
            return Err(format!("unrecognized header field {field}"));
        }
    }
    let limit = limit.ok_or("header missing limit")?;
    let bits = bits.ok_or("header missing bits")?;
    let mut wilds = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let (k_str, w_str) = line.split_once(',').ok_or("entry line missing comma")?;
        let k: u64 = k_str.parse().map_err(|_| format!("bad entry index {k_str}"))?;
        let w: u64 = w_str.parse().map_err(|_| format!("bad entry value {w_str}"))?;
        if k != i as u64 + 1 {
            return Err(format!("entry index {k} out of sequence"));
        }
        wilds.push(w);
    }
    Ok(Some(WildCacheFile { limit, bits, wilds }))
}

/// Atomically replaces the wild-table cache with `table`.
pub fn write_wild(path: &Path, table: &WildTable) -> io::Result<()> {
    let mut text = format!(
        "{WILD_HEADER_PREFIX} limit={} bits={}\n",
        table.scan_limit(),
        table.precision_used().bits()
    );
    for (i, w) in table.wilds().iter().enumerate() {
        text.push_str(&format!("{},{w}\n", i + 1));
    }
    write_atomic(path, text.as_bytes())
}

fn write_atomic(path: &Path, data: &[u8]) -> io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let dir = dir.unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path
        .file_name()
        .and_then(|n| n.to_str())
        .unwrap_or("cache");
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    fs::write(&tmp, data)?;
    match fs::rename(&tmp, path) {
        Ok(()) => Ok(()),
        Err(e) => {
            let _ = fs::remove_file(&tmp);
            Err(e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use sintail_core::PrecisionBits;

    #[test]
    fn pi_cache_round_trips_and_rejects_damage() {
        let dir = tempfile::tempdir().unwrap();
        let mut ctx = Ctx::new();
        let p = PrecisionBits::new(192).unwrap();
        let fresh = sintail_core::pi_enclosure(p, &mut ctx);
        let mut sink = Vec::new();
        persist_pi(&ctx, dir.path(), &mut sink);
        assert!(dir.path().join("pi-192.bin").exists());
        assert!(sink.is_empty(), "unexpected warning: {:?}", String::from_utf8_lossy(&sink));

        let mut ctx2 = Ctx::new();
        warm_pi(&mut ctx2, dir.path(), &mut sink);
        assert!(sink.is_empty());
        let (bits, cached) = ctx2.cached_pis().next().expect("one entry installed");
        assert_eq!(bits, 192);
        assert!(cached.lo().cmp(fresh.lo()) == Some(0));
        assert!(cached.hi().cmp(fresh.hi()) == Some(0));

        // Truncated payload: warned about and skipped, never installed.
        let damaged = dir.path().join("pi-96.bin");
        let mut data = Vec::new();
        data.extend_from_slice(PI_MAGIC);
        data.push(PI_VERSION);
        data.extend_from_slice(&96u64.to_le_bytes());
        data.extend_from_slice(&[0u8; 3]);
        fs::write(&damaged, &data).unwrap();
        let mut ctx3 = Ctx::new();
        let mut warnings = Vec::new();
        warm_pi(&mut ctx3, dir.path(), &mut warnings);
        assert!(String::from_utf8_lossy(&warnings).contains("pi-96.bin"));
        assert_eq!(ctx3.cached_pis().count(), 1, "only the intact file installs");
    }

    #[test]
    fn wild_cache_round_trips_and_reports_damage() {
        let dir = tempfile::tempdir().unwrap();
        let path = wild_path(dir.path());
        assert!(read_wild(&path).unwrap().is_none());

        let p = PrecisionBits::new(96).unwrap();
        let table = WildTable::from_parts(20, p, vec![1, 2, 3, 4, 6, 7, 8, 9, 10, 12, 13, 14, 15, 16, 19, 20]).unwrap();
        write_wild(&path, &table).unwrap();
        let file = read_wild(&path).unwrap().expect("file exists");
        assert_eq!(file.limit, 20);
        assert_eq!(file.bits, 96);
        assert_eq!(file.wilds, table.wilds());

        fs::write(&path, "# sintail-wild v1 limit=20 bits=96\n2,5\n").unwrap();
        assert!(read_wild(&path).unwrap_err().contains("out of sequence"));
        fs::write(&path, "not a cache\n").unwrap();
        assert!(read_wild(&path).unwrap_err().contains("header"));
    }
}
