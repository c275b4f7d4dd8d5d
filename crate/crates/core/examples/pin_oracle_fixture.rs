//! Regenerates `tests/fixtures/oracle.json` from the Caporaso–Harris recursion.

use severi_core::oracle::OracleFixture;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fixture = OracleFixture::generate(4, 14)?;
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/oracle.json");
    std::fs::create_dir_all(std::path::Path::new(path).parent().unwrap())?;
    std::fs::write(path, serde_json::to_string_pretty(&fixture)? + "\n")?;
    println!("wrote {path}");
    Ok(())
}
