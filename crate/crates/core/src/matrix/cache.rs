use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

type Slot = Arc<Mutex<Option<bool>>>;

/// Memo of entry satisfiability keyed by diamond coordinates. Each key is
/// computed at most once; concurrent requests for the same key wait for the
/// first.
#[derive(Default)]
pub struct EntrySatCache {
    slots: Mutex<HashMap<Vec<u32>, Slot>>,
    computed: AtomicUsize,
}

impl EntrySatCache {
    pub fn new() -> EntrySatCache {
        EntrySatCache::default()
    }

    fn slot(&self, key: &[u32]) -> Slot {
        self.slots.lock().unwrap().entry(key.to_vec()).or_default().clone()
    }

    pub fn get(&self, key: &[u32]) -> Option<bool> {
        let slot = self.slots.lock().unwrap().get(key).cloned()?;
        let v = *slot.lock().unwrap();
        v
    }

    pub fn get_or_compute<E>(&self, key: &[u32], f: impl FnOnce() -> Result<bool, E>) -> Result<bool, E> {
        let slot = self.slot(key);
        let mut guard = slot.lock().unwrap();
        if let Some(v) = *guard {
            return Ok(v);
        }
        let v = f()?;
        self.computed.fetch_add(1, Ordering::Relaxed);
        *guard = Some(v);
        Ok(v)
    }

    pub fn insert(&self, key: &[u32], v: bool) {
        *self.slot(key).lock().unwrap() = Some(v);
    }

    /// Number of entries evaluated by this cache (not loaded).
    pub fn computed(&self) -> usize {
        self.computed.load(Ordering::Relaxed)
    }

    pub fn snapshot(&self) -> BTreeMap<Vec<u32>, bool> {
        let slots = self.slots.lock().unwrap();
        slots.iter().filter_map(|(k, s)| s.lock().unwrap().map(|v| (k.clone(), v))).collect()
    }

    pub fn len(&self) -> usize {
        self.snapshot().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// One `k1,k2 0|1` line per entry.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in self.snapshot() {
            let key: Vec<String> = k.iter().map(|x| x.to_string()).collect();
            s.push_str(&format!("{} {}\n", key.join(","), u8::from(v)));
        }
        s
    }

    pub fn load_text(&self, text: &str) -> io::Result<usize> {
        let bad = |l: &str| io::Error::new(io::ErrorKind::InvalidData, format!("bad cache line {l:?}"));
        let mut n = 0;
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (k, v) = line.split_once(' ').ok_or_else(|| bad(line))?;
            let key = k.split(',').map(|x| x.parse::<u32>()).collect::<Result<Vec<_>, _>>().map_err(|_| bad(line))?;
            let v = match v {
                "0" => false,
                "1" => true,
                _ => return Err(bad(line)),
            };
            self.insert(&key, v);
            n += 1;
        }
        Ok(n)
    }

    pub fn load(&self, path: &Path) -> io::Result<usize> {
        match fs::read_to_string(path) {
            Ok(t) => self.load_text(&t),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(0),
            Err(e) => Err(e),
        }
    }

    pub fn save(&self, path: &Path) -> io::Result<()> {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)?;
        }
        fs::write(path, self.to_text())
    }
}
