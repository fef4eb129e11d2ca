#![no_main]

use libfuzzer_sys::fuzz_target;
use qcluster::seedio::SeedDoc;

// Seed JSON, then a NUL byte, then one byte per mutation direction.
fuzz_target!(|data: &[u8]| {
    let split = data.iter().position(|&b| b == 0).unwrap_or(data.len());
    let Ok(text) = std::str::from_utf8(&data[..split]) else { return };
    let Ok(doc) = SeedDoc::parse(text) else { return };
    let n = doc.n();
    if n == 0 || n > 6 || doc.history().len() > 8 {
        return;
    }
    let path: Vec<usize> = data[split.min(data.len())..].iter().take(12).map(|&b| b as usize % n).collect();
    let Ok(moved) = doc.mutated(&path) else { return };
    if moved.current().is_err() {
        return;
    }
    // undoing the path restores the starting frame
    let back: Vec<usize> = path.iter().rev().copied().collect();
    let restored = moved.mutated(&back).expect("reverse path is mutable");
    let (d0, l0) = doc.current().unwrap();
    let (d1, l1) = restored.current().unwrap();
    assert_eq!(d0, d1);
    assert_eq!(l0, l1);
});
