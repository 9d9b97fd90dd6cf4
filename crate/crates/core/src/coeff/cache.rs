//! Cache file: one `g,z,n,p/q,provenance` line per cell.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use super::{CoeffError, CoeffTable, Provenance};
use crate::rational;

impl CoeffTable {
    /// Loads every line of `path` into a fresh table. A missing file gives an empty table.
    pub fn load(path: &Path) -> Result<Self, CoeffError> {
        let table = CoeffTable::new();
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(table),
            Err(e) => return Err(CoeffError::Io(e.to_string())),
        };
        {
            let mut entries = table.entries.write().expect("table lock");
            let mut persisted = table.persisted.write().expect("table lock");
            for (i, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let bad = |msg: &str| CoeffError::Parse { line: i + 1, msg: msg.to_string() };
                let fields: Vec<&str> = line.split(',').collect();
                if fields.len() != 5 {
                    return Err(bad("expected 5 fields"));
                }
                let g: u32 = fields[0].trim().parse().map_err(|_| bad("bad g"))?;
                let z: i64 = fields[1].trim().parse().map_err(|_| bad("bad z"))?;
                let n: u32 = fields[2].trim().parse().map_err(|_| bad("bad n"))?;
                let v = rational::parse(fields[3]).ok_or_else(|| bad("bad value"))?;
                let p: Provenance = fields[4].trim().parse().map_err(|e: String| bad(&e))?;
                entries.insert((g, z, n), (v, p));
                persisted.insert((g, z, n));
            }
        }
        Ok(table)
    }

    /// Appends the cells not yet in `path` with a single write.
    pub fn persist(&self, path: &Path) -> Result<usize, CoeffError> {
        let mut buf = String::new();
        let mut added = Vec::new();
        {
            let persisted = self.persisted.read().expect("table lock");
            for ((g, z, n), v, p) in self.entries() {
                if !persisted.contains(&(g, z, n)) {
                    buf.push_str(&format!("{g},{z},{n},{},{p}\n", rational::render(&v)));
                    added.push((g, z, n));
                }
            }
        }
        if added.is_empty() {
            return Ok(0);
        }
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| CoeffError::Io(e.to_string()))?;
        file.write_all(buf.as_bytes()).map_err(|e| CoeffError::Io(e.to_string()))?;
        file.sync_all().map_err(|e| CoeffError::Io(e.to_string()))?;
        self.persisted.write().expect("table lock").extend(added.iter().copied());
        Ok(added.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_without_recomputation() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cells.csv");
        let t = CoeffTable::new();
        t.a_rec(4, 3, 2).unwrap();
        let written = t.persist(&path).unwrap();
        assert_eq!(written, t.len());
        assert_eq!(t.persist(&path).unwrap(), 0);
        let back = CoeffTable::load(&path).unwrap();
        assert_eq!(back.entries(), t.entries());
        back.a_rec(4, 3, 2).unwrap();
        assert_eq!(back.computed(), 0);
        std::fs::write(&path, "1,2\n").unwrap();
        assert!(matches!(CoeffTable::load(&path), Err(CoeffError::Parse { line: 1, .. })));
    }
}
