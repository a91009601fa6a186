//! Regenerates the `.mid` files under `fixtures/`.

use std::path::Path;

use musitopo::ingest::{fixtures, write_midi};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    std::fs::create_dir_all(&dir)?;
    for (name, score) in fixtures::all() {
        let path = dir.join(name);
        std::fs::write(&path, write_midi(&score)?)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
